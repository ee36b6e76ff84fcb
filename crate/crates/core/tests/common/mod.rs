//! Independent brute-force oracles shared by the integration suites. Nothing
//! here calls into the library's own reduction code.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use chow_obstruct::chow::{monomial_basis, AmbientSpace, ChowClass};
use num_bigint::BigInt;
use rand::Rng;

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Laplace expansion along the first row.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        _ => (0..n)
            .filter(|&j| m[0][j] != 0)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Smith diagonal (length `min(rows, cols)`) from determinantal divisors:
/// `d_k` is the gcd of all `k × k` minors and `s_k = d_k / d_{k-1}`.
pub fn determinantal_diagonal(a: &[Vec<i128>], cols: usize) -> Vec<BigInt> {
    let rows = a.len();
    let n = rows.min(cols);
    let mut out = Vec::with_capacity(n);
    let mut prev = 1i128;
    for k in 1..=n {
        let mut d = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> =
                    rs.iter().map(|&r| cs.iter().map(|&c| a[r][c]).collect()).collect();
                d = gcd(d, det(&minor));
                if d == 1 {
                    break;
                }
            }
            if d == 1 {
                break;
            }
        }
        if d == 0 {
            out.extend(std::iter::repeat_n(BigInt::from(0), n - out.len()));
            break;
        }
        out.push(BigInt::from(d / prev));
        prev = d;
    }
    out
}

/// Invariant factors of `Z^n / rowspan(a)` as the library reports them:
/// ones dropped, zeros for free summands.
pub fn determinantal_invariant_factors(a: &[Vec<i128>], cols: usize) -> Vec<BigInt> {
    let diag = determinantal_diagonal(a, cols);
    let mut torsion: Vec<BigInt> = diag.iter().filter(|d| **d > BigInt::from(1)).cloned().collect();
    let rank = diag.iter().filter(|d| **d != BigInt::from(0)).count();
    torsion.extend(std::iter::repeat_n(BigInt::from(0), cols - rank));
    torsion
}

fn adjugate(a: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = a.len();
    let mut adj = vec![vec![0i128; n]; n];
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i128>> = a
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != i)
                .map(|(_, row)| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = sign * det(&minor);
        }
    }
    adj
}

/// Brute-force description of `Z^n / rowspan(a)` for square `a` with
/// `0 < |det| <= limit`: `v` lies in the row span iff `v · adj(a) ≡ 0 mod det`,
/// so `v ↦ v · adj(a) mod det` embeds the quotient in `(Z/det)^n`. The
/// quotient is enumerated by BFS from the images of the unit vectors.
pub struct CosetCensus {
    pub order: usize,
    /// For each `k` dividing the order, the number of elements killed by `k`.
    pub torsion_counts: Vec<(u64, usize)>,
}

pub fn coset_census(a: &[Vec<i128>], limit: i128) -> Option<CosetCensus> {
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return None;
    }
    let d = det(a).abs();
    if d == 0 || d > limit {
        return None;
    }
    let adj = adjugate(a);
    let step: Vec<Vec<i128>> = adj.iter().map(|r| r.iter().map(|x| x.rem_euclid(d)).collect()).collect();
    let zero = vec![0i128; n];
    let mut seen = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for s in &step {
            let y: Vec<i128> = x.iter().zip(s).map(|(a, b)| (a + b).rem_euclid(d)).collect();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let order = seen.len();
    let torsion_counts = (1..=order as u64)
        .filter(|k| (order as u64).is_multiple_of(*k))
        .map(|k| {
            let count = seen
                .iter()
                .filter(|x| x.iter().all(|c| (c * k as i128).rem_euclid(d) == 0))
                .count();
            (k, count)
        })
        .collect();
    Some(CosetCensus { order, torsion_counts })
}

/// `|{x : k x = 0}|` in `⊕ Z/s_i`, which pins down the finite group.
pub fn predicted_torsion_count(factors: &[BigInt], k: u64) -> usize {
    factors
        .iter()
        .map(|s| {
            let s: i128 = s.try_into().expect("small factor");
            gcd(s, k as i128) as usize
        })
        .product()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> Vec<Vec<i128>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound) as i128).collect())
        .collect()
}

pub fn to_bigint_rows(a: &[Vec<i128>]) -> Vec<Vec<BigInt>> {
    a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Ambient spaces of total dimension 4.
pub const FOURFOLDS: &[&[u32]] = &[&[4], &[1, 3], &[3, 1], &[2, 2], &[1, 1, 2], &[1, 1, 1, 1]];

pub fn random_ambient(rng: &mut impl Rng) -> AmbientSpace {
    let k = rng.gen_range(1..=3);
    AmbientSpace::new((0..k).map(|_| rng.gen_range(1..=4)).collect()).unwrap()
}

pub fn random_class(rng: &mut impl Rng, ambient: &AmbientSpace, degree: u32, bound: i64) -> ChowClass {
    let coords: Vec<BigInt> = monomial_basis(ambient, degree)
        .iter()
        .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
        .collect();
    ChowClass::from_coords(ambient, degree, &coords).unwrap()
}
