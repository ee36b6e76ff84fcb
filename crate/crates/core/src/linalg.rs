//! Exact integer matrix algebra.
//!
//! Everything here works over arbitrary-precision integers: Smith normal
//! form with both transformation matrices, row-style Hermite normal form,
//! lattice membership and Bareiss determinants. Matrices are dense and
//! row-major.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::json;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(IntegerMatrix { rows, cols, entries })
    }

    /// Builds a matrix from row vectors. An empty iterator gives the 0x0 matrix;
    /// use [`IntegerMatrix::with_cols`] when the column count must survive.
    pub fn from_rows<R, T>(rows: impl IntoIterator<Item = R>) -> Result<Self>
    where
        R: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let rows: Vec<Vec<BigInt>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(Into::into).collect())
            .collect();
        let cols = rows.first().map_or(0, Vec::len);
        Self::with_cols(cols, rows)
    }

    pub fn with_cols(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n_rows = rows.len();
        let mut entries = Vec::with_capacity(n_rows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(IntegerMatrix {
            rows: n_rows,
            cols,
            entries,
        })
    }

    pub fn diagonal_matrix(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Main diagonal, of length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    /// Stacks the rows of `other` below `self`.
    pub fn vstack(&self, other: &IntegerMatrix) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Shape(format!(
                "cannot stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(IntegerMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows, "vector length must equal row count");
        (0..self.cols)
            .map(|j| {
                v.iter()
                    .enumerate()
                    .map(|(i, x)| x * &self[(i, j)])
                    .sum()
            })
            .collect()
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length must equal column count");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    /// Returns `None` for non-square matrices.
    pub fn determinant(&self) -> Option<BigInt> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Some(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        Some(sign * &a[(n - 1, n - 1)])
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = &self[(src, j)] * factor;
            self[(dst, j)] += delta;
        }
    }

    /// col[dst] += factor * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = &self[(i, src)] * factor;
            self[(i, dst)] += delta;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = v;
        }
    }

    /// Parses a JSON array of arrays whose entries are decimal strings
    /// (numbers are tolerated when they are integral).
    pub fn from_json(value: &Value) -> Result<Self> {
        let rows = value
            .as_array()
            .ok_or_else(|| Error::Parse("matrix must be a JSON array of rows".into()))?;
        let parsed = rows
            .iter()
            .map(json::integer_vec)
            .collect::<Result<Vec<_>>>()?;
        let cols = parsed.first().map_or(0, Vec::len);
        Self::with_cols(cols, parsed)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("matrix literal: {e}")))?;
        Self::from_json(&value)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| json::integers(self.row(i)))
                .collect(),
        )
    }
}

impl Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &IntegerMatrix {
    type Output = IntegerMatrix;

    /// Panics when the inner dimensions differ.
    fn mul(self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = IntegerMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let p = a * &rhs[(k, j)];
                    out[(i, j)] += p;
                }
            }
        }
        out
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `u * a * v = s` with `u`, `v` unimodular and `s` in Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntegerMatrix,
    pub s: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SnfDecomposition {
    /// Diagonal of `s` (length `min(rows, cols)`), nonnegative, zeros trailing.
    pub fn diagonal(&self) -> Vec<BigInt> {
        self.s.diagonal()
    }

    /// Checks every structural invariant against the source matrix.
    pub fn verify(&self, a: &IntegerMatrix) -> bool {
        let unimodular = |m: &IntegerMatrix| {
            m.determinant()
                .is_some_and(|d| d.abs() == BigInt::one())
        };
        &(&self.u * a) * &self.v == self.s
            && unimodular(&self.u)
            && unimodular(&self.v)
            && self.s.is_diagonal()
            && is_divisibility_chain(&self.diagonal())
    }
}

/// Nonnegative entries, each dividing the next, zeros only at the end.
pub fn is_divisibility_chain(diag: &[BigInt]) -> bool {
    if diag.iter().any(Signed::is_negative) {
        return false;
    }
    diag.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            w[1].is_multiple_of(&w[0])
        }
    })
}

fn min_abs_nonzero(
    a: &IntegerMatrix,
    rows: impl Iterator<Item = usize> + Clone,
    cols: impl Iterator<Item = usize> + Clone,
) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in rows {
        for j in cols.clone() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let m = x.abs();
            if best.as_ref().is_none_or(|(_, b)| m < *b) {
                best = Some(((i, j), m));
            }
        }
    }
    best.map(|(p, _)| p)
}

/// Smith normal form with transformation matrices.
///
/// Pivots are chosen with minimal absolute value in the active block. Each
/// pivot clears its row and column by Euclidean steps; if a later entry is not
/// a multiple of the pivot, its row is folded into the pivot row and the
/// clearing restarts with a strictly smaller pivot.
pub fn smith_normal_form(a: &IntegerMatrix) -> SnfDecomposition {
    let (r, c) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntegerMatrix::identity(r);
    let mut v = IntegerMatrix::identity(c);

    for t in 0..r.min(c) {
        let Some((pi, pj)) = min_abs_nonzero(&s, t..r, t..c) else {
            break;
        };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut residue = false;
            for i in t + 1..r {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -s[(i, t)].div_floor(&s[(t, t)]);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                residue |= !s[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                residue |= !s[(t, j)].is_zero();
            }

            if residue {
                // Remainders are smaller than the pivot: move the smallest in.
                let col_best = min_abs_nonzero(&s, t..r, t..t + 1);
                let row_best = min_abs_nonzero(&s, t..t + 1, t..c);
                let pick = match (col_best, row_best) {
                    (Some(p), Some(q)) if s[q].abs() < s[p].abs() => q,
                    (Some(p), _) => p,
                    (None, Some(q)) => q,
                    (None, None) => unreachable!("pivot itself is nonzero"),
                };
                s.swap_rows(t, pick.0);
                u.swap_rows(t, pick.0);
                s.swap_cols(t, pick.1);
                v.swap_cols(t, pick.1);
                continue;
            }

            let pivot = s[(t, t)].clone();
            let offender = (t + 1..r).find(|&i| {
                (t + 1..c).any(|j| !s[(i, j)].is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }

        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }

    SnfDecomposition { u, s, v }
}

/// Row-style Hermite normal form: returns `(h, u)` with `u * a = h`, `u`
/// unimodular, `h` in row echelon form with positive pivots, entries above each
/// pivot reduced into `[0, pivot)` and zero rows at the bottom.
pub fn hermite_normal_form(a: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix) {
    let (r, c) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntegerMatrix::identity(r);
    let mut prow = 0;

    for col in 0..c {
        if prow == r {
            break;
        }
        while let Some((pi, _)) = min_abs_nonzero(&h, prow..r, col..col + 1) {
            h.swap_rows(prow, pi);
            u.swap_rows(prow, pi);
            let mut done = true;
            for i in prow + 1..r {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = -h[(i, col)].div_floor(&h[(prow, col)]);
                h.add_row_multiple(i, prow, &q);
                u.add_row_multiple(i, prow, &q);
                done &= h[(i, col)].is_zero();
            }
            if done {
                break;
            }
        }
        if h[(prow, col)].is_zero() {
            continue;
        }
        if h[(prow, col)].is_negative() {
            h.negate_row(prow);
            u.negate_row(prow);
        }
        let pivot = h[(prow, col)].clone();
        for i in 0..prow {
            let q = -h[(i, col)].div_floor(&pivot);
            h.add_row_multiple(i, prow, &q);
            u.add_row_multiple(i, prow, &q);
        }
        prow += 1;
    }
    (h, u)
}

/// Pivot positions `(row, col)` of a matrix in Hermite normal form.
pub fn hnf_pivots(h: &IntegerMatrix) -> Vec<(usize, usize)> {
    (0..h.rows())
        .filter_map(|i| h.row(i).iter().position(|x| !x.is_zero()).map(|j| (i, j)))
        .collect()
}

/// Reduces `v` against a Hermite basis. Returns the unique representative of
/// `v + rowspan(h)` whose pivot coordinates lie in `[0, pivot)`.
pub fn reduce_by_hnf(h: &IntegerMatrix, v: &[BigInt]) -> Vec<BigInt> {
    assert_eq!(v.len(), h.cols(), "vector length must equal column count");
    let mut out = v.to_vec();
    for (i, j) in hnf_pivots(h) {
        let q = out[j].div_floor(&h[(i, j)]);
        if q.is_zero() {
            continue;
        }
        for (o, b) in out.iter_mut().zip(h.row(i)) {
            *o -= &q * b;
        }
    }
    out
}

/// True iff `v` lies in the integer row span of `basis`.
pub fn lattice_contains(basis: &IntegerMatrix, v: &[BigInt]) -> bool {
    let (h, _) = hermite_normal_form(basis);
    hnf_contains(&h, v)
}

/// Membership test against a basis that is already in Hermite form.
pub fn hnf_contains(h: &IntegerMatrix, v: &[BigInt]) -> bool {
    assert_eq!(v.len(), h.cols(), "vector length must equal column count");
    let mut rest = v.to_vec();
    let mut next_col = 0;
    for (i, j) in hnf_pivots(h) {
        // Columns skipped by the echelon staircase can never be corrected.
        if rest[next_col..j].iter().any(|x| !x.is_zero()) {
            return false;
        }
        let (q, rem) = rest[j].div_rem(&h[(i, j)]);
        if !rem.is_zero() {
            return false;
        }
        for (o, b) in rest.iter_mut().zip(h.row(i)) {
            *o -= &q * b;
        }
        next_col = j + 1;
    }
    rest.iter().all(Zero::is_zero)
}
