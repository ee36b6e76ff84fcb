//! Finitely generated abelian groups given by generators and relations.
//!
//! A presentation is `Z^n / rowspan(R)`. On construction we compute the Smith
//! form of `R` (for invariant factors and element orders) and its Hermite form
//! (for canonical coset representatives). Both are cached; presentations are
//! immutable and shared behind `Arc`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json;
use crate::linalg::{
    hermite_normal_form, hnf_contains, hnf_pivots, reduce_by_hnf, smith_normal_form,
    IntegerMatrix, SnfDecomposition,
};

#[derive(Debug)]
pub struct AbelianPresentation {
    generator_names: Vec<String>,
    relations: IntegerMatrix,
    snf: SnfDecomposition,
    /// Full cyclic decomposition, one entry per generator: SNF diagonal padded
    /// with zeros for the free part.
    cyclic_orders: Vec<BigInt>,
    /// Nonzero rows of the Hermite form of `relations`.
    hnf: IntegerMatrix,
}

impl AbelianPresentation {
    pub fn new(generator_names: Vec<String>, relations: IntegerMatrix) -> Result<Self> {
        if relations.cols() != generator_names.len() {
            return Err(Error::Shape(format!(
                "relations have {} columns but there are {} generators",
                relations.cols(),
                generator_names.len()
            )));
        }
        let n = generator_names.len();
        let snf = smith_normal_form(&relations);
        let mut cyclic_orders = snf.diagonal();
        cyclic_orders.resize(n, BigInt::zero());

        let (h, _) = hermite_normal_form(&relations);
        let rank = hnf_pivots(&h).len();
        let hnf = IntegerMatrix::with_cols(n, h.row_vecs().into_iter().take(rank).collect())?;

        Ok(AbelianPresentation {
            generator_names,
            relations,
            snf,
            cyclic_orders,
            hnf,
        })
    }

    /// Free abelian group on the given generators.
    pub fn free(generator_names: Vec<String>) -> Self {
        let n = generator_names.len();
        Self::new(generator_names, IntegerMatrix::zeros(0, n)).expect("shape is consistent")
    }

    /// Generators named `e1, e2, ...`.
    pub fn from_relations(relations: IntegerMatrix) -> Self {
        let names = (1..=relations.cols()).map(|i| format!("e{i}")).collect();
        Self::new(names, relations).expect("shape is consistent")
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn rank(&self) -> usize {
        self.generator_names.len()
    }

    pub fn relations(&self) -> &IntegerMatrix {
        &self.relations
    }

    pub fn snf(&self) -> &SnfDecomposition {
        &self.snf
    }

    pub fn hermite_basis(&self) -> &IntegerMatrix {
        &self.hnf
    }

    /// Invariant factors in divisibility order: SNF diagonal with the 1s
    /// dropped, and a trailing 0 for each free summand.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.cyclic_orders
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.cyclic_orders.iter().all(|d| !d.is_zero())
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.cyclic_orders.iter().product())
    }

    /// Human-readable structure such as `Z/3 ⊕ Z/4`, `Z ⊕ Z/2` or `0`.
    pub fn structure(&self) -> String {
        format_invariant_factors(&self.invariant_factors())
    }

    /// `G ⊗ Z/2`: the same generators with `2·e_i = 0` appended.
    pub fn tensor_mod2(&self) -> AbelianPresentation {
        let n = self.rank();
        let twos = IntegerMatrix::diagonal_matrix(n, n, &vec![BigInt::from(2); n]);
        let relations = self.relations.vstack(&twos).expect("same column count");
        AbelianPresentation::new(self.generator_names.clone(), relations)
            .expect("shape is consistent")
    }

    /// One canonical representative per coset, in mixed-radix order over the
    /// Hermite pivots.
    pub fn enumerate_elements(self: &Arc<Self>) -> Result<Elements> {
        if !self.is_finite() {
            return Err(Error::InfiniteGroup(self.structure()));
        }
        let radices: Vec<BigInt> = hnf_pivots(&self.hnf)
            .into_iter()
            .map(|(i, j)| self.hnf[(i, j)].clone())
            .collect();
        debug_assert_eq!(radices.len(), self.rank());
        Ok(Elements {
            group: Arc::clone(self),
            radices,
            next: Some(vec![BigInt::zero(); self.rank()]),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let names = value
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("presentation needs a `generators` array".into()))?
            .iter()
            .map(|g| {
                g.as_str()
                    .map(str::to_owned)
                    .ok_or_else(|| Error::Parse(format!("generator name {g} is not a string")))
            })
            .collect::<Result<Vec<_>>>()?;
        let relations = match value.get("relations") {
            None | Some(Value::Null) => IntegerMatrix::zeros(0, names.len()),
            Some(rel) => {
                let rows = rel
                    .as_array()
                    .ok_or_else(|| Error::Parse("`relations` must be an array".into()))?
                    .iter()
                    .map(json::integer_vec)
                    .collect::<Result<Vec<_>>>()?;
                IntegerMatrix::with_cols(names.len(), rows)?
            }
        };
        Self::new(names, relations)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "generators": self.generator_names,
            "relations": self.relations.to_json(),
        })
    }
}

impl PartialEq for AbelianPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.generator_names == other.generator_names && self.relations == other.relations
    }
}

impl Eq for AbelianPresentation {}

/// `Z/3 ⊕ Z/4` style rendering; 0 renders as `Z`, the empty list as `0`.
pub fn format_invariant_factors(factors: &[BigInt]) -> String {
    if factors.is_empty() {
        return "0".to_owned();
    }
    factors
        .iter()
        .map(|d| {
            if d.is_zero() {
                "Z".to_owned()
            } else {
                format!("Z/{d}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ⊕ ")
}

/// Iterator returned by [`AbelianPresentation::enumerate_elements`].
pub struct Elements {
    group: Arc<AbelianPresentation>,
    radices: Vec<BigInt>,
    next: Option<Vec<BigInt>>,
}

impl Iterator for Elements {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut carried_out = true;
        for k in (0..succ.len()).rev() {
            succ[k] += 1;
            if succ[k] < self.radices[k] {
                carried_out = false;
                break;
            }
            succ[k] = BigInt::zero();
        }
        if !carried_out {
            self.next = Some(succ);
        }
        Some(GroupElement {
            group: Arc::clone(&self.group),
            coords: current,
        })
    }
}

/// An element of a presented group, stored by (any) coordinate vector.
/// Equality and hashing are by coset.
#[derive(Clone, Debug)]
pub struct GroupElement {
    group: Arc<AbelianPresentation>,
    coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn new(group: Arc<AbelianPresentation>, coords: Vec<BigInt>) -> Result<Self> {
        if coords.len() != group.rank() {
            return Err(Error::Shape(format!(
                "element has {} coordinates but the group has {} generators",
                coords.len(),
                group.rank()
            )));
        }
        Ok(GroupElement { group, coords })
    }

    pub fn zero(group: Arc<AbelianPresentation>) -> Self {
        let n = group.rank();
        GroupElement {
            group,
            coords: vec![BigInt::zero(); n],
        }
    }

    pub fn generator(group: Arc<AbelianPresentation>, i: usize) -> Self {
        let mut e = Self::zero(group);
        e.coords[i] = BigInt::one();
        e
    }

    pub fn group(&self) -> &Arc<AbelianPresentation> {
        &self.group
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// Unique representative of the coset, reduced against the Hermite basis.
    pub fn canonical(&self) -> Vec<BigInt> {
        reduce_by_hnf(&self.group.hnf, &self.coords)
    }

    pub fn is_zero(&self) -> bool {
        hnf_contains(&self.group.hnf, &self.coords)
    }

    /// Coordinates in the cyclic decomposition `⊕ Z/d_i` (all SNF slots,
    /// including those with `d_i = 1`), reduced into `[0, d_i)` where finite.
    pub fn snf_coords(&self) -> Vec<BigInt> {
        let y = self.group.snf.v.left_apply(&self.coords);
        y.into_iter()
            .zip(&self.group.cyclic_orders)
            .map(|(y, d)| if d.is_zero() { y } else { y.mod_floor(d) })
            .collect()
    }

    /// Least `k >= 1` with `k·e = 0`, or 0 if the element has infinite order.
    pub fn order(&self) -> BigInt {
        let mut order = BigInt::one();
        for (y, d) in self.snf_coords().iter().zip(&self.group.cyclic_orders) {
            if d.is_zero() {
                if !y.is_zero() {
                    return BigInt::zero();
                }
                continue;
            }
            order = order.lcm(&(d / y.gcd(d)));
        }
        order
    }

    pub fn scale(&self, k: &BigInt) -> GroupElement {
        GroupElement {
            group: Arc::clone(&self.group),
            coords: self.coords.iter().map(|x| x * k).collect(),
        }
    }

    fn assert_same_group(&self, other: &GroupElement) {
        assert!(
            Arc::ptr_eq(&self.group, &other.group) || self.group == other.group,
            "elements of different groups"
        );
    }

    pub fn to_json(&self) -> Value {
        json!({
            "coords": json::integers(&self.coords),
            "canonical": json::integers(&self.canonical()),
            "is_zero": self.is_zero(),
            "order": json::integer(&self.order()),
        })
    }
}

impl Add for &GroupElement {
    type Output = GroupElement;

    /// Panics when the elements belong to different groups.
    fn add(self, rhs: &GroupElement) -> GroupElement {
        self.assert_same_group(rhs);
        GroupElement {
            group: Arc::clone(&self.group),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &GroupElement {
    type Output = GroupElement;

    fn sub(self, rhs: &GroupElement) -> GroupElement {
        self.assert_same_group(rhs);
        GroupElement {
            group: Arc::clone(&self.group),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &GroupElement {
    type Output = GroupElement;

    fn neg(self) -> GroupElement {
        self.scale(&BigInt::from(-1))
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.group, &other.group) || self.group == other.group)
            && (self - other).is_zero()
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical().hash(state);
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .canonical()
            .iter()
            .zip(&self.group.generator_names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, name)| {
                if c.is_one() {
                    name.clone()
                } else {
                    format!("{c}*{name}")
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Bezout data `m·a + n·b = g` with `g = gcd(a, b) >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bezout {
    pub gcd: BigInt,
    pub m: BigInt,
    pub n: BigInt,
}

/// Extended Euclid, normalized to the solution with minimal `|m|`
/// (ties broken towards `m >= 0`).
pub fn bezout(a: &BigInt, b: &BigInt) -> Bezout {
    let egcd = a.extended_gcd(b);
    let (mut g, mut m, mut n) = (egcd.gcd, egcd.x, egcd.y);
    if g.is_negative() {
        g = -g;
        m = -m;
        n = -n;
    }
    if g.is_zero() {
        return Bezout {
            gcd: g,
            m: BigInt::zero(),
            n: BigInt::zero(),
        };
    }
    // Solutions are (m + k·b/g, n − k·a/g).
    let step = (b / &g).abs();
    if !step.is_zero() {
        let mut r = m.mod_floor(&step);
        if &r * 2 > step {
            r -= &step;
        }
        let k = (&r - &m) / (b / &g);
        m = r;
        n -= k * (a / &g);
    }
    debug_assert_eq!(&m * a + &n * b, g);
    Bezout { gcd: g, m, n }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().copied().map(BigInt::from).collect()
    }

    fn group(names: &[&str], rows: &[&[i64]]) -> Arc<AbelianPresentation> {
        let rel = IntegerMatrix::with_cols(
            names.len(),
            rows.iter().map(|r| ints(r)).collect(),
        )
        .unwrap();
        Arc::new(AbelianPresentation::new(names.iter().map(|s| s.to_string()).collect(), rel).unwrap())
    }

    fn degree_two_34() -> Arc<AbelianPresentation> {
        group(&["x1*x2", "x2^2"], &[&[4, 0], &[3, 4]])
    }

    #[test]
    fn invariant_factor_examples() {
        // Z/3 ⊕ Z/4 is cyclic of order 12
        let g = group(&["x", "y"], &[&[3, 0], &[0, 4]]);
        assert_eq!(g.invariant_factors(), ints(&[12]));
        assert_eq!(g.structure(), "Z/12");
        assert_eq!(degree_two_34().invariant_factors(), ints(&[16]));
        assert_eq!(group(&["x"], &[]).invariant_factors(), ints(&[0]));
        assert_eq!(group(&["x"], &[]).structure(), "Z");
        assert_eq!(group(&["x", "y"], &[&[2, 0], &[0, 4]]).structure(), "Z/2 ⊕ Z/4");
        assert_eq!(group(&["x", "y"], &[&[1, 0], &[0, 1]]).structure(), "0");
        assert_eq!(group(&["x", "y"], &[&[3, 6]]).structure(), "Z/3 ⊕ Z");
    }

    #[test]
    fn is_zero_examples() {
        let g = degree_two_34();
        assert!(GroupElement::new(g.clone(), ints(&[4, 0])).unwrap().is_zero());
        assert!(!GroupElement::generator(g.clone(), 0).is_zero());
        assert!(GroupElement::zero(g).is_zero());
    }

    #[test]
    fn element_order_examples() {
        let g = degree_two_34();
        let xt = GroupElement::generator(g.clone(), 0);
        assert_eq!(xt.order(), BigInt::from(4));
        // brute force against is_zero
        let k = (1..=16)
            .find(|&k| xt.scale(&BigInt::from(k)).is_zero())
            .unwrap();
        assert_eq!(BigInt::from(k), xt.order());
        assert_eq!(GroupElement::generator(g.clone(), 1).order(), BigInt::from(16));
        assert_eq!(GroupElement::zero(g).order(), BigInt::one());
        let free = Arc::new(AbelianPresentation::free(vec!["x".into()]));
        assert_eq!(GroupElement::generator(free, 0).order(), BigInt::zero());
    }

    #[test]
    fn tensor_mod2_examples() {
        let g = group(&["x", "y"], &[&[3, 0], &[0, 4]]);
        assert_eq!(g.tensor_mod2().invariant_factors(), ints(&[2]));
        let free = AbelianPresentation::free(vec!["x".into(), "y".into()]);
        assert_eq!(free.tensor_mod2().invariant_factors(), ints(&[2, 2]));
        let trivial = AbelianPresentation::free(vec![]);
        assert!(trivial.tensor_mod2().invariant_factors().is_empty());
    }

    #[test]
    fn enumerate_examples() {
        let g = group(&["x", "y"], &[&[3, 0], &[0, 4]]);
        let elems: Vec<_> = g.enumerate_elements().unwrap().collect();
        assert_eq!(elems.len(), 12);
        for (i, a) in elems.iter().enumerate() {
            for b in &elems[i + 1..] {
                assert_ne!(a, b);
            }
        }
        let trivial = Arc::new(AbelianPresentation::free(vec![]));
        assert_eq!(trivial.enumerate_elements().unwrap().count(), 1);
        let one_gen_trivial = group(&["x"], &[&[1]]);
        assert_eq!(one_gen_trivial.enumerate_elements().unwrap().count(), 1);
        let free = Arc::new(AbelianPresentation::free(vec!["x".into()]));
        assert!(matches!(free.enumerate_elements(), Err(Error::InfiniteGroup(_))));
    }

    #[test]
    fn canonical_form_is_coset_invariant() {
        let g = degree_two_34();
        let a = GroupElement::new(g.clone(), ints(&[1, 0])).unwrap();
        let b = GroupElement::new(g.clone(), ints(&[-2, -4])).unwrap(); // a - (3,4)
        assert_eq!(a, b);
        assert_eq!(a.canonical(), b.canonical());
        let c = GroupElement::new(g, ints(&[2, 0])).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn bezout_minimal_m() {
        for (a, b) in [(3i64, 4i64), (4, 3), (2, 2), (12, 18), (7, 1), (1, 7), (5, 0), (0, 5), (-6, 4)] {
            let (a, b) = (BigInt::from(a), BigInt::from(b));
            let bz = bezout(&a, &b);
            assert_eq!(&bz.m * &a + &bz.n * &b, bz.gcd);
            assert_eq!(bz.gcd, a.gcd(&b));
            if !b.is_zero() {
                let step = (&b / &bz.gcd).abs();
                // no other solution has smaller |m|
                assert!(&bz.m.abs() * 2 <= step);
            }
        }
        let bz = bezout(&BigInt::from(3), &BigInt::from(4));
        assert_eq!((bz.m, bz.n), (BigInt::from(-1), BigInt::from(1)));
    }

    #[test]
    fn json_round_trip() {
        let v: Value = serde_json::from_str(r#"{"generators":["x","y"],"relations":[["3","0"],[0,4]]}"#).unwrap();
        let g = AbelianPresentation::from_json(&v).unwrap();
        assert_eq!(g.relations().rows(), 2);
        let again = AbelianPresentation::from_json(&g.to_json()).unwrap();
        assert_eq!(g, again);
        let no_rel: Value = serde_json::from_str(r#"{"generators":["x"]}"#).unwrap();
        assert_eq!(AbelianPresentation::from_json(&no_rel).unwrap().structure(), "Z");
        let bad: Value = serde_json::from_str(r#"{"generators":["x"],"relations":[[1,2]]}"#).unwrap();
        assert!(AbelianPresentation::from_json(&bad).is_err());
    }
}
