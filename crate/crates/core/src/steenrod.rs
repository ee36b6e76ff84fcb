//! `Sq^2` on mod-2 Chow classes of products of projective spaces.
//!
//! On hyperplane classes `Sq^2 x = x^2` and `Sq^1 x = 0`, so the Cartan
//! formula makes `Sq^2` the derivation `Σ x_i^2 ∂/∂x_i` reduced mod 2:
//! `Sq^2(x^a) = Σ_i a_i · x^{a + e_i}`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::chow::{format_monomial, monomial_basis, AmbientSpace, ChowClass, Exponents};
use crate::error::{Error, Result};
use crate::linalg::{lattice_contains, IntegerMatrix};

/// Why `Sq^1` is identically zero on these classes.
pub const SQ1_JUSTIFICATION: &str =
    "Sq^1 vanishes on mod-2 Chow classes: H^{3,1}(W,Z) vanishes for every smooth scheme W";

/// Homogeneous class in `CH^degree ⊗ Z/2`, stored as its set of monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mod2ChowClass {
    ambient: AmbientSpace,
    degree: u32,
    monomials: BTreeSet<Exponents>,
}

impl Mod2ChowClass {
    pub fn zero(ambient: &AmbientSpace, degree: u32) -> Self {
        Mod2ChowClass {
            ambient: ambient.clone(),
            degree,
            monomials: BTreeSet::new(),
        }
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn contains(&self, e: &[u32]) -> bool {
        self.monomials.contains(e)
    }

    fn toggle(&mut self, e: Exponents) {
        if !self.monomials.remove(&e) {
            self.monomials.insert(e);
        }
    }

    /// Lift with coefficients 0/1.
    pub fn lift(&self) -> ChowClass {
        let coords: Vec<BigInt> = monomial_basis(&self.ambient, self.degree)
            .iter()
            .map(|e| BigInt::from(u8::from(self.monomials.contains(e))))
            .collect();
        ChowClass::from_coords(&self.ambient, self.degree, &coords).expect("basis-sized coordinates")
    }

    pub fn try_add(&self, other: &Mod2ChowClass) -> Result<Mod2ChowClass> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut out = self.clone();
        for e in &other.monomials {
            out.toggle(e.clone());
        }
        Ok(out)
    }

    pub fn cup(&self, other: &Mod2ChowClass) -> Result<Mod2ChowClass> {
        Ok(Mod2ChowClass::from(&self.lift().cup(&other.lift())?))
    }
}

impl From<&ChowClass> for Mod2ChowClass {
    fn from(c: &ChowClass) -> Self {
        let mut out = Mod2ChowClass::zero(c.ambient(), c.degree());
        out.monomials = c
            .terms()
            .filter(|(_, k)| k.is_odd())
            .map(|(e, _)| e.clone())
            .collect();
        out
    }
}

impl fmt::Display for Mod2ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .monomials
            .iter()
            .rev()
            .map(|e| format_monomial(&self.ambient, e))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// `Sq^2` of a single monomial. Panics if `e` is not a monomial of `ambient`.
pub fn sq2_monomial(ambient: &AmbientSpace, e: &[u32]) -> Mod2ChowClass {
    assert!(ambient.contains_monomial(e), "{e:?} is not a monomial of {ambient}");
    let degree: u32 = e.iter().sum();
    let mut out = Mod2ChowClass::zero(ambient, degree + 1);
    for (i, &a) in e.iter().enumerate() {
        if a % 2 == 0 {
            continue;
        }
        let mut raised = e.to_vec();
        raised[i] += 1;
        if ambient.contains_monomial(&raised) {
            out.toggle(raised);
        }
    }
    out
}

/// Additive extension of [`sq2_monomial`]; raises the degree by one.
pub fn sq2(c: &Mod2ChowClass) -> Mod2ChowClass {
    let mut out = Mod2ChowClass::zero(c.ambient(), c.degree() + 1);
    for e in &c.monomials {
        for m in sq2_monomial(c.ambient(), e).monomials {
            out.toggle(m);
        }
    }
    out
}

/// `Sq^1`, which is zero here; see [`SQ1_JUSTIFICATION`].
pub fn sq1(c: &Mod2ChowClass) -> Mod2ChowClass {
    Mod2ChowClass::zero(c.ambient(), c.degree() + 1)
}

/// Record of the check that `Sq^2` descends to the naive complement quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentCertificate {
    /// Number of degree-2 relation generators `[Z]·α` checked.
    pub generators_checked: usize,
}

/// Verifies that for each naive degree-2 relation `r = [Z]·α` (α a degree-1
/// monomial), `Sq^2(r)` lies in `[Z]·CH^2(Y) + 2·CH^3(Y)`.
///
/// Two independent checks per generator: the Cartan identity
/// `Sq^2([Z]α) = [Z]·([Z]α + α^2)` mod 2, and lattice membership of the
/// coordinates of `Sq^2(r)` in the naive degree-3 relations plus `2·Z^n`.
pub fn check_descent(ambient: &AmbientSpace, z: &ChowClass) -> Result<DescentCertificate> {
    if z.ambient() != ambient {
        return Err(Error::AmbientMismatch);
    }
    let degree3 = monomial_basis(ambient, 3);
    let n3 = degree3.len();
    let mut lattice_rows: Vec<Vec<BigInt>> = monomial_basis(ambient, 2)
        .into_iter()
        .map(|e| {
            let beta = ChowClass::monomial(ambient, e, BigInt::one())?;
            Ok(z.cup(&beta)?.coords())
        })
        .collect::<Result<_>>()?;
    for i in 0..n3 {
        let mut row = vec![BigInt::from(0); n3];
        row[i] = BigInt::from(2);
        lattice_rows.push(row);
    }
    let lattice = IntegerMatrix::with_cols(n3, lattice_rows)?;

    let mut checked = 0;
    for e in monomial_basis(ambient, 1) {
        let alpha = ChowClass::monomial(ambient, e, BigInt::one())?;
        let r = z.cup(&alpha)?;
        let image = sq2(&Mod2ChowClass::from(&r));

        let witness = r.try_add(&alpha.cup(&alpha)?)?;
        let symbolic = Mod2ChowClass::from(&z.cup(&witness)?);
        if symbolic != image {
            return Err(Error::DescentFailure(format!(
                "Sq^2({r}) = {image} but [Z]·({witness}) = {symbolic} mod 2"
            )));
        }
        if n3 > 0 && !lattice_contains(&lattice, &image.lift().coords()) {
            return Err(Error::DescentFailure(format!(
                "Sq^2({r}) = {image} is not in [Z]·CH^2 + 2·CH^3"
            )));
        }
        checked += 1;
    }
    Ok(DescentCertificate {
        generators_checked: checked,
    })
}
