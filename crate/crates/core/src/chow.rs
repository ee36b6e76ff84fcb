//! The Chow ring of a product of projective spaces,
//! `CH*(P^{n_1} × ... × P^{n_k}) = Z[x_1, ..., x_k] / (x_i^{n_i + 1})`,
//! graded by codimension, with `x_i` the pulled-back hyperplane class.
//!
//! Monomials are exponent vectors. Bases are listed in descending
//! lexicographic order, so on `P^1 × P^3` degree 2 reads `x1*x2, x2^2`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::IntegerMatrix;

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AmbientSpace {
    factor_dims: Vec<u32>,
}

impl AmbientSpace {
    pub fn new(factor_dims: Vec<u32>) -> Result<Self> {
        if factor_dims.is_empty() {
            return Err(Error::InvalidAmbient("need at least one factor".into()));
        }
        if factor_dims.contains(&0) {
            return Err(Error::InvalidAmbient("factor dimensions must be positive".into()));
        }
        Ok(AmbientSpace { factor_dims })
    }

    /// Parses `"1,3"` as `P^1 × P^3`.
    pub fn parse(s: &str) -> Result<Self> {
        let dims = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidAmbient(format!("`{t}` is not a dimension")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(dims)
    }

    pub fn factor_dims(&self) -> &[u32] {
        &self.factor_dims
    }

    pub fn factors(&self) -> usize {
        self.factor_dims.len()
    }

    pub fn total_dim(&self) -> u32 {
        self.factor_dims.iter().sum()
    }

    pub fn contains_monomial(&self, e: &[u32]) -> bool {
        e.len() == self.factors() && e.iter().zip(&self.factor_dims).all(|(a, n)| a <= n)
    }

    /// Compact form used on the command line, e.g. `1,3`.
    pub fn spec_string(&self) -> String {
        self.factor_dims
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Name of the i-th hyperplane class in printed output.
    fn variable(&self, i: usize) -> String {
        format!("x{}", i + 1)
    }
}

impl fmt::Display for AmbientSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factor_dims.iter().map(|n| format!("P^{n}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// All monomials of the given codimension, descending lexicographic order.
pub fn monomial_basis(ambient: &AmbientSpace, degree: u32) -> Vec<Exponents> {
    fn fill(dims: &[u32], remaining: u32, prefix: &mut Exponents, out: &mut Vec<Exponents>) {
        let Some((&n, rest)) = dims.split_first() else {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        };
        let rest_cap: u32 = rest.iter().sum();
        for a in (0..=n.min(remaining)).rev() {
            if remaining - a > rest_cap {
                continue;
            }
            prefix.push(a);
            fill(rest, remaining - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(&ambient.factor_dims, degree, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn format_monomial(ambient: &AmbientSpace, e: &[u32]) -> String {
    let factors: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &a)| a > 0)
        .map(|(i, &a)| {
            if a == 1 {
                ambient.variable(i)
            } else {
                format!("{}^{a}", ambient.variable(i))
            }
        })
        .collect();
    if factors.is_empty() {
        "1".to_owned()
    } else {
        factors.join("*")
    }
}

/// Homogeneous element of `CH^degree`, stored sparsely.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChowClass {
    ambient: AmbientSpace,
    degree: u32,
    coeffs: BTreeMap<Exponents, BigInt>,
}

impl ChowClass {
    pub fn zero(ambient: &AmbientSpace, degree: u32) -> Self {
        ChowClass {
            ambient: ambient.clone(),
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(ambient: &AmbientSpace) -> Self {
        Self::monomial(ambient, vec![0; ambient.factors()], BigInt::one())
            .expect("unit monomial is valid")
    }

    /// `coeff · x^e`; exponents beyond a truncation bound give the zero class.
    pub fn monomial(ambient: &AmbientSpace, e: Exponents, coeff: BigInt) -> Result<Self> {
        if e.len() != ambient.factors() {
            return Err(Error::Shape(format!(
                "monomial has {} exponents for {} factors",
                e.len(),
                ambient.factors()
            )));
        }
        let degree = e.iter().sum();
        let mut c = Self::zero(ambient, degree);
        if ambient.contains_monomial(&e) && !coeff.is_zero() {
            c.coeffs.insert(e, coeff);
        }
        Ok(c)
    }

    /// Hyperplane class `x_{i+1}`.
    pub fn hyperplane(ambient: &AmbientSpace, i: usize) -> Self {
        let mut e = vec![0; ambient.factors()];
        e[i] = 1;
        Self::monomial(ambient, e, BigInt::one()).expect("valid factor index")
    }

    /// `Σ d_i x_i`, the class of a hypersurface of multidegree `d`.
    pub fn divisor(ambient: &AmbientSpace, multidegree: &[BigInt]) -> Result<Self> {
        if multidegree.len() != ambient.factors() {
            return Err(Error::Shape(format!(
                "multidegree has {} entries for {} factors",
                multidegree.len(),
                ambient.factors()
            )));
        }
        Self::from_coords(ambient, 1, multidegree)
    }

    /// Inverse of [`ChowClass::coords`].
    pub fn from_coords(ambient: &AmbientSpace, degree: u32, coords: &[BigInt]) -> Result<Self> {
        let basis = monomial_basis(ambient, degree);
        if basis.len() != coords.len() {
            return Err(Error::Shape(format!(
                "degree {degree} has {} basis monomials, got {} coordinates",
                basis.len(),
                coords.len()
            )));
        }
        let coeffs = basis
            .into_iter()
            .zip(coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, c.clone()))
            .collect();
        Ok(ChowClass {
            ambient: ambient.clone(),
            degree,
            coeffs,
        })
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> BigInt {
        self.coeffs.get(e).cloned().unwrap_or_default()
    }

    /// Nonzero terms in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.coeffs.iter().rev()
    }

    /// Coordinates with respect to [`monomial_basis`].
    pub fn coords(&self) -> Vec<BigInt> {
        monomial_basis(&self.ambient, self.degree)
            .iter()
            .map(|e| self.coeff(e))
            .collect()
    }

    fn check_compatible(&self, other: &ChowClass) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    fn insert_term(&mut self, e: Exponents, c: BigInt) {
        let entry = self.coeffs.entry(e.clone()).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn try_add(&self, other: &ChowClass) -> Result<ChowClass> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.insert_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &ChowClass) -> Result<ChowClass> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> ChowClass {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> ChowClass {
        let mut out = Self::zero(&self.ambient, self.degree);
        if !k.is_zero() {
            out.coeffs = self.coeffs.iter().map(|(e, c)| (e.clone(), c * k)).collect();
        }
        out
    }

    /// Cup product. Degrees add; monomials past a truncation bound vanish.
    pub fn cup(&self, other: &ChowClass) -> Result<ChowClass> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        let mut out = Self::zero(&self.ambient, self.degree + other.degree);
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if self.ambient.contains_monomial(&e) {
                    out.insert_term(e, ca * cb);
                }
            }
        }
        Ok(out)
    }

    /// Parses expressions such as `3*x1 + 4*x2`, `x1*x2^2`, `-2*xi*tau^2`.
    ///
    /// Variables are `x1..xk`; with two factors `xi`/`ξ` and `tau`/`τ` alias
    /// `x1`/`x2`, with one factor `x`, `xi`/`ξ` alias `x1`. When `degree` is
    /// `None` it is read off the terms, and a bare `0` is rejected.
    pub fn parse(s: &str, ambient: &AmbientSpace, degree: Option<u32>) -> Result<ChowClass> {
        let mut terms = parse_terms(s, ambient)?;
        terms.retain(|(_, c)| !c.is_zero());
        let degree = match (degree, terms.first()) {
            (Some(d), _) => d,
            (None, Some((e, _))) => e.iter().sum(),
            (None, None) => {
                return Err(Error::Parse(format!(
                    "cannot infer the degree of `{}`; give it explicitly",
                    s.trim()
                )))
            }
        };
        let mut out = Self::zero(ambient, degree);
        for (e, c) in terms {
            let d: u32 = e.iter().sum();
            if d != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: d,
                });
            }
            if ambient.contains_monomial(&e) {
                out.insert_term(e, c);
            }
        }
        Ok(out)
    }
}

fn parse_variable(name: &str, ambient: &AmbientSpace) -> Result<usize> {
    let k = ambient.factors();
    let alias = match (name, k) {
        ("xi" | "ξ", 1 | 2) => Some(0),
        ("x", 1) => Some(0),
        ("tau" | "τ", 2) => Some(1),
        _ => None,
    };
    if let Some(i) = alias {
        return Ok(i);
    }
    name.strip_prefix('x')
        .and_then(|d| d.parse::<usize>().ok())
        .filter(|&i| (1..=k).contains(&i))
        .map(|i| i - 1)
        .ok_or_else(|| Error::Parse(format!("unknown variable `{name}` for {k} factor(s)")))
}

fn parse_terms(s: &str, ambient: &AmbientSpace) -> Result<Vec<(Exponents, BigInt)>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty class expression".into()));
    }
    // split on top-level signs, keeping the sign with its term
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut negative = false;
    let mut current = String::new();
    let mut prev: Option<char> = None;
    for ch in compact.chars() {
        let is_sign = ch == '+' || ch == '-';
        if is_sign && prev != Some('^') && prev != Some('*') {
            if !current.is_empty() {
                pieces.push((negative, std::mem::take(&mut current)));
                negative = false;
            } else if prev.is_some_and(|p| p != '+' && p != '-') {
                return Err(Error::Parse(format!("misplaced sign in `{s}`")));
            }
            if ch == '-' {
                negative = !negative;
            }
        } else {
            current.push(ch);
        }
        prev = Some(ch);
    }
    if current.is_empty() {
        return Err(Error::Parse(format!("dangling sign in `{s}`")));
    }
    pieces.push((negative, current));

    let mut terms = Vec::new();
    for (negative, piece) in pieces {
        let mut coeff = BigInt::one();
        let mut e = vec![0u32; ambient.factors()];
        for factor in piece.split('*') {
            if factor.is_empty() {
                return Err(Error::Parse(format!("empty factor in `{piece}`")));
            }
            if factor.chars().all(|c| c.is_ascii_digit()) {
                coeff *= factor.parse::<BigInt>().expect("digits parse");
                continue;
            }
            let (name, power) = match factor.split_once('^') {
                Some((n, p)) => (
                    n,
                    p.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?,
                ),
                None => (factor, 1),
            };
            let i = parse_variable(name, ambient)?;
            e[i] += power;
        }
        if negative {
            coeff = -coeff;
        }
        terms.push((e, coeff));
    }
    Ok(terms)
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms().enumerate() {
            let mono = format_monomial(&self.ambient, e);
            let mag = c.abs();
            match (idx, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mono == "1" {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Matrix of `α ↦ z·α` from `CH^{j-1}` to `CH^j`: rows indexed by the degree
/// `j` basis, columns by the degree `j - 1` basis.
pub fn divisor_multiplication_matrix(
    ambient: &AmbientSpace,
    z: &ChowClass,
    j: u32,
) -> Result<IntegerMatrix> {
    if z.ambient() != ambient {
        return Err(Error::AmbientMismatch);
    }
    if z.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: z.degree(),
        });
    }
    assert!(j >= 1, "target degree must be positive");
    let source = monomial_basis(ambient, j - 1);
    let target_len = monomial_basis(ambient, j).len();
    let mut m = IntegerMatrix::zeros(target_len, source.len());
    for (col, e) in source.into_iter().enumerate() {
        let image = z.cup(&ChowClass::monomial(ambient, e, BigInt::one())?)?;
        for (row, c) in image.coords().into_iter().enumerate() {
            m[(row, col)] = c;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1p3() -> AmbientSpace {
        AmbientSpace::new(vec![1, 3]).unwrap()
    }

    fn p4() -> AmbientSpace {
        AmbientSpace::new(vec![4]).unwrap()
    }

    fn class(s: &str, a: &AmbientSpace) -> ChowClass {
        ChowClass::parse(s, a, None).unwrap()
    }

    #[test]
    fn basis_examples() {
        assert_eq!(monomial_basis(&p1p3(), 2), vec![vec![1, 1], vec![0, 2]]);
        assert_eq!(monomial_basis(&p1p3(), 0), vec![vec![0, 0]]);
        assert_eq!(monomial_basis(&p1p3(), 3), vec![vec![1, 2], vec![0, 3]]);
        assert_eq!(monomial_basis(&p1p3(), 4), vec![vec![1, 3]]);
        assert!(monomial_basis(&p1p3(), 5).is_empty());
        assert_eq!(monomial_basis(&p4(), 3), vec![vec![3]]);
        let p2p2 = AmbientSpace::new(vec![2, 2]).unwrap();
        assert_eq!(monomial_basis(&p2p2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn cup_examples() {
        let a = p1p3();
        assert_eq!(class("x1", &a).cup(&class("x2", &a)).unwrap(), class("x1*x2", &a));
        assert!(class("ξ", &a).cup(&class("ξ*τ", &a)).unwrap().is_zero());
        assert_eq!(
            class("3*x1 + 4*x2", &a).cup(&class("x2", &a)).unwrap(),
            class("3*x1*x2 + 4*x2^2", &a)
        );
        assert!(matches!(
            class("x1", &a).cup(&class("x1", &p4())),
            Err(Error::AmbientMismatch)
        ));
    }

    #[test]
    fn divisor_matrix_examples() {
        let a = p1p3();
        let z = class("3*x1 + 4*x2", &a);
        let m2 = divisor_multiplication_matrix(&a, &z, 2).unwrap();
        assert_eq!(m2, IntegerMatrix::from_rows([[4, 3], [0, 4]]).unwrap());
        let m1 = divisor_multiplication_matrix(&a, &z, 1).unwrap();
        assert_eq!(m1, IntegerMatrix::from_rows([[3], [4]]).unwrap());
        let zero = ChowClass::zero(&a, 1);
        for j in 1..=4 {
            assert!(divisor_multiplication_matrix(&a, &zero, j).unwrap().is_zero());
        }
    }

    #[test]
    fn parse_and_display() {
        let a = p1p3();
        let c = class("x1*x2^2", &a);
        assert_eq!(c.degree(), 3);
        assert_eq!(c.to_string(), "x1*x2^2");
        let d = class(" 4*x2 +3*xi ", &a);
        assert_eq!(d.to_string(), "3*x1 + 4*x2");
        assert_eq!(class("x1 - 2*x2", &a).to_string(), "x1 - 2*x2");
        assert_eq!(class("-x1*tau", &a).to_string(), "-x1*x2");
        assert_eq!(ChowClass::parse("0", &a, Some(1)).unwrap(), ChowClass::zero(&a, 1));
        assert!(ChowClass::parse("0", &a, None).is_err());
        assert_eq!(class("x1^2", &a), ChowClass::zero(&a, 2));
        assert!(ChowClass::parse("x1 + x2^2", &a, None).is_err());
        assert!(ChowClass::parse("x3", &a, None).is_err());
        assert!(ChowClass::parse("x1 +", &a, None).is_err());
        assert!(ChowClass::parse("2**x1", &a, None).is_err());
        assert_eq!(class("5*x^2", &p4()).to_string(), "5*x1^2");
        assert_eq!(class("1", &a), ChowClass::one(&a));
        assert_eq!(class("x2 + x2 - 2*x2", &a), ChowClass::zero(&a, 1));
    }

    #[test]
    fn coords_round_trip() {
        let a = p1p3();
        let c = class("2*x1*x2 - 7*x2^2", &a);
        assert_eq!(c.coords(), vec![BigInt::from(2), BigInt::from(-7)]);
        assert_eq!(ChowClass::from_coords(&a, 2, &c.coords()).unwrap(), c);
    }

    #[test]
    fn ambient_validation() {
        assert!(AmbientSpace::new(vec![]).is_err());
        assert!(AmbientSpace::new(vec![1, 0]).is_err());
        assert_eq!(AmbientSpace::parse("1, 3").unwrap(), p1p3());
        assert!(AmbientSpace::parse("1,a").is_err());
        assert_eq!(p1p3().total_dim(), 4);
        assert_eq!(p1p3().to_string(), "P^1 x P^3");
    }
}
