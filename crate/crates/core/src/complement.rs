//! Chow groups of a hypersurface complement `X = Y \ Z` as quotients
//! `CH^j(Y) / S_j`, where `S_j` stands in for the pushforward image
//! `im(i_*: CH^{j-1}(Z) → CH^j(Y))`.
//!
//! The naive choice `S_j = [Z]·CH^{j-1}(Y)` always sits inside the image
//! (projection formula), so its quotient surjects onto `CH^j(X)`. Other
//! assumptions may instead claim to contain the image; which side of the
//! image a subgroup lies on is tracked explicitly because the obstruction
//! verdicts depend on it.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::abelian::{bezout, AbelianPresentation, GroupElement};
use crate::chow::{
    divisor_multiplication_matrix, format_monomial, monomial_basis, AmbientSpace, ChowClass,
};
use crate::error::{Error, Result};
use crate::json;
use crate::linalg::{smith_normal_form, IntegerMatrix};
use crate::steenrod::{check_descent, DescentCertificate};

/// Position of an assumed subgroup relative to the pushforward image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Containment {
    /// Subgroup ⊆ image: the quotient surjects onto `CH^j(X)`.
    ContainedInImage,
    /// Subgroup ⊇ image: `CH^j(X)` surjects onto the quotient.
    ContainsImage,
    /// Subgroup = image.
    EqualsImage,
}

impl Containment {
    pub fn as_str(self) -> &'static str {
        match self {
            Containment::ContainedInImage => "contained_in_image",
            Containment::ContainsImage => "contains_image",
            Containment::EqualsImage => "equals_image",
        }
    }

    /// Vanishing in the quotient implies vanishing in `CH^j(X)`.
    pub fn certifies_vanishing(self) -> bool {
        matches!(self, Containment::ContainedInImage | Containment::EqualsImage)
    }

    /// Non-vanishing in the quotient implies non-vanishing in `CH^j(X)`.
    pub fn certifies_nonvanishing(self) -> bool {
        matches!(self, Containment::ContainsImage | Containment::EqualsImage)
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "contained_in_image" => Ok(Containment::ContainedInImage),
            "contains_image" => Ok(Containment::ContainsImage),
            "equals_image" => Ok(Containment::EqualsImage),
            other => Err(Error::Parse(format!("unknown containment direction `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PushforwardAssumption {
    /// `S_j = [Z]·CH^{j-1}(Y)`, valid in every degree.
    NaiveDivisor,
    /// `S_3 = <2·x1*x2^2, x2^3>` on `P^1 × P^3`, asserted to contain the image
    /// (every curve on Z of even degree over `P^1`).
    EvenDegreeOverP1,
    /// `S_3 = <2·x^3>` on `P^4`, asserted to contain the image (every curve on
    /// Z of even degree).
    EvenCurveDegreeP4,
    /// The naive subgroup is asserted to equal the image in every degree.
    NoriExact,
    /// User-supplied generators in a single degree.
    CustomSubgroup {
        degree: u32,
        generators: Vec<ChowClass>,
        direction: Containment,
    },
}

impl PushforwardAssumption {
    pub fn name(&self) -> &'static str {
        match self {
            PushforwardAssumption::NaiveDivisor => "naive",
            PushforwardAssumption::EvenDegreeOverP1 => "even-degree-over-p1",
            PushforwardAssumption::EvenCurveDegreeP4 => "even-curve-degree-p4",
            PushforwardAssumption::NoriExact => "nori",
            PushforwardAssumption::CustomSubgroup { .. } => "custom",
        }
    }

    pub fn containment(&self) -> Containment {
        match self {
            PushforwardAssumption::NaiveDivisor => Containment::ContainedInImage,
            PushforwardAssumption::EvenDegreeOverP1 | PushforwardAssumption::EvenCurveDegreeP4 => {
                Containment::ContainsImage
            }
            PushforwardAssumption::NoriExact => Containment::EqualsImage,
            PushforwardAssumption::CustomSubgroup { direction, .. } => *direction,
        }
    }

    /// The even-degree preset matching an ambient space, if there is one.
    pub fn even_degree_for(ambient: &AmbientSpace) -> Result<Self> {
        match ambient.factor_dims() {
            [1, 3] => Ok(PushforwardAssumption::EvenDegreeOverP1),
            [4] => Ok(PushforwardAssumption::EvenCurveDegreeP4),
            _ => Err(Error::InapplicableAssumption {
                assumption: "even-degree".into(),
                degree: 3,
                reason: format!("no even-degree preset for {ambient}"),
            }),
        }
    }

    /// Parses `naive | even-degree | nori | custom:<json>`. A custom
    /// assumption is a JSON object
    /// `{"degree": 3, "direction": "contains_image", "generators": ["x1*x2^2"]}`;
    /// reading it from a file is left to the caller.
    pub fn parse(s: &str, ambient: &AmbientSpace) -> Result<Self> {
        match s.trim() {
            "naive" => Ok(PushforwardAssumption::NaiveDivisor),
            "even-degree" => Self::even_degree_for(ambient),
            "even-degree-over-p1" => Ok(PushforwardAssumption::EvenDegreeOverP1),
            "even-curve-degree-p4" => Ok(PushforwardAssumption::EvenCurveDegreeP4),
            "nori" => Ok(PushforwardAssumption::NoriExact),
            other => match other.strip_prefix("custom:") {
                Some(body) => {
                    let v: Value = serde_json::from_str(body)
                        .map_err(|e| Error::Parse(format!("custom assumption: {e}")))?;
                    Self::custom_from_json(&v, ambient)
                }
                None => Err(Error::Parse(format!("unknown assumption `{other}`"))),
            },
        }
    }

    pub fn custom_from_json(v: &Value, ambient: &AmbientSpace) -> Result<Self> {
        let degree = v
            .get("degree")
            .map(json::parse_integer)
            .transpose()?
            .and_then(|d| u32::try_from(d).ok())
            .ok_or_else(|| Error::Parse("custom assumption needs a nonnegative `degree`".into()))?;
        let direction = Containment::parse(
            v.get("direction")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("custom assumption needs a `direction`".into()))?,
        )?;
        if direction == Containment::EqualsImage {
            return Err(Error::Parse(
                "custom direction must be contains_image or contained_in_image".into(),
            ));
        }
        let generators = v
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("custom assumption needs `generators`".into()))?
            .iter()
            .map(|g| {
                let s = g
                    .as_str()
                    .ok_or_else(|| Error::Parse(format!("generator {g} is not a string")))?;
                ChowClass::parse(s, ambient, Some(degree))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PushforwardAssumption::CustomSubgroup {
            degree,
            generators,
            direction,
        })
    }

    fn inapplicable(&self, degree: u32, reason: impl Into<String>) -> Error {
        Error::InapplicableAssumption {
            assumption: self.name().into(),
            degree,
            reason: reason.into(),
        }
    }

    pub fn check_applicable(&self, ambient: &AmbientSpace, j: u32) -> Result<()> {
        match self {
            PushforwardAssumption::NaiveDivisor | PushforwardAssumption::NoriExact => Ok(()),
            PushforwardAssumption::EvenDegreeOverP1 => {
                if ambient.factor_dims() != [1, 3] {
                    Err(self.inapplicable(j, format!("needs P^1 x P^3, got {ambient}")))
                } else if j != 3 {
                    Err(self.inapplicable(j, "only describes curves (degree 3)"))
                } else {
                    Ok(())
                }
            }
            PushforwardAssumption::EvenCurveDegreeP4 => {
                if ambient.factor_dims() != [4] {
                    Err(self.inapplicable(j, format!("needs P^4, got {ambient}")))
                } else if j != 3 {
                    Err(self.inapplicable(j, "only describes curves (degree 3)"))
                } else {
                    Ok(())
                }
            }
            PushforwardAssumption::CustomSubgroup {
                degree, generators, ..
            } => {
                if *degree != j {
                    return Err(self.inapplicable(j, format!("declared for degree {degree}")));
                }
                if generators.iter().any(|g| g.ambient() != ambient) {
                    return Err(Error::AmbientMismatch);
                }
                if let Some(g) = generators.iter().find(|g| g.degree() != j) {
                    return Err(Error::DegreeMismatch {
                        expected: j,
                        found: g.degree(),
                    });
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for PushforwardAssumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExactnessStatus {
    /// The quotient is `CH^j(X)`, proven (ample Z, `j <= 2`, `dim Y >= 4`).
    Exact,
    /// The quotient surjects onto `CH^j(X)`.
    UpperBoundOnly,
    /// The quotient is `CH^j(X)` under an assumption.
    AssumedExact,
    /// `CH^j(X)` surjects onto the quotient under an assumption.
    AssumedContains,
}

impl ExactnessStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ExactnessStatus::Exact => "EXACT",
            ExactnessStatus::UpperBoundOnly => "UPPER_BOUND_ONLY",
            ExactnessStatus::AssumedExact => "ASSUMED_EXACT",
            ExactnessStatus::AssumedContains => "ASSUMED_CONTAINS",
        }
    }
}

impl fmt::Display for ExactnessStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessCertificate {
    pub degree: u32,
    pub assumption: String,
    pub status: ExactnessStatus,
    /// Set when some multidegree component is zero; closed forms do not apply.
    pub not_ample: bool,
}

impl ExactnessCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree.to_string(),
            "assumption": self.assumption,
            "status": self.status.as_str(),
            "not_ample": self.not_ample,
        })
    }
}

impl fmt::Display for ExactnessCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree {} [{}]: {}", self.degree, self.assumption, self.status)?;
        if self.not_ample {
            write!(f, " (NotAmple)")?;
        }
        Ok(())
    }
}

/// A quotient presentation together with its certificate.
#[derive(Clone, Debug)]
pub struct ComplementGroup {
    pub group: Arc<AbelianPresentation>,
    pub certificate: ExactnessCertificate,
}

type CacheKey = (u32, PushforwardAssumption, bool);

/// `Y = P^{n_1} × ... × P^{n_k}` with a hypersurface class `[Z] = Σ d_i x_i`.
pub struct ComplementModel {
    ambient: AmbientSpace,
    z_class: ChowClass,
    descent: DescentCertificate,
    cache: Mutex<HashMap<CacheKey, ComplementGroup>>,
}

impl fmt::Debug for ComplementModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComplementModel")
            .field("ambient", &self.ambient)
            .field("z_class", &self.z_class)
            .finish_non_exhaustive()
    }
}

impl Clone for ComplementModel {
    fn clone(&self) -> Self {
        ComplementModel {
            ambient: self.ambient.clone(),
            z_class: self.z_class.clone(),
            descent: self.descent.clone(),
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl ComplementModel {
    /// Validates the hypersurface class and runs the `Sq^2` descent check.
    pub fn new(ambient: AmbientSpace, z_class: ChowClass) -> Result<Self> {
        if z_class.ambient() != &ambient {
            return Err(Error::AmbientMismatch);
        }
        if z_class.degree() != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: z_class.degree(),
            });
        }
        if let Some(d) = z_class.coords().iter().find(|d| d.is_negative()) {
            return Err(Error::InvalidHypersurface(format!(
                "multidegree component {d} is negative"
            )));
        }
        let descent = check_descent(&ambient, &z_class)?;
        Ok(ComplementModel {
            ambient,
            z_class,
            descent,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn from_multidegree(ambient: AmbientSpace, multidegree: &[BigInt]) -> Result<Self> {
        let z = ChowClass::divisor(&ambient, multidegree)?;
        Self::new(ambient, z)
    }

    /// Parses ambient `"1,3"` and multidegree `"3,4"`.
    pub fn parse(ambient: &str, multidegree: &str) -> Result<Self> {
        let ambient = AmbientSpace::parse(ambient)?;
        let degrees = multidegree
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("`{t}` is not an integer degree")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_multidegree(ambient, &degrees)
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    pub fn z_class(&self) -> &ChowClass {
        &self.z_class
    }

    pub fn multidegree(&self) -> Vec<BigInt> {
        self.z_class.coords()
    }

    pub fn is_ample(&self) -> bool {
        self.multidegree().iter().all(Signed::is_positive)
    }

    pub fn descent_certificate(&self) -> &DescentCertificate {
        &self.descent
    }

    /// Hypotheses under which the naive quotient is provably `CH^j(X)`.
    fn exactness_proven(&self, j: u32) -> bool {
        j <= 2 && self.ambient.total_dim() >= 4 && self.is_ample()
    }

    /// `[Z]·m` for each degree `j - 1` basis monomial `m`.
    pub fn naive_generators(&self, j: u32) -> Vec<ChowClass> {
        if j == 0 {
            return Vec::new();
        }
        monomial_basis(&self.ambient, j - 1)
            .into_iter()
            .map(|e| {
                let m = ChowClass::monomial(&self.ambient, e, BigInt::one()).expect("basis monomial");
                self.z_class.cup(&m).expect("same ambient")
            })
            .collect()
    }

    /// Generators of the subgroup `S_j` an assumption uses in degree `j`.
    pub fn subgroup_generators(
        &self,
        j: u32,
        assumption: &PushforwardAssumption,
    ) -> Result<Vec<ChowClass>> {
        assumption.check_applicable(&self.ambient, j)?;
        let parse = |s: &str| ChowClass::parse(s, &self.ambient, Some(j)).expect("preset literal");
        Ok(match assumption {
            PushforwardAssumption::NaiveDivisor | PushforwardAssumption::NoriExact => {
                self.naive_generators(j)
            }
            PushforwardAssumption::EvenDegreeOverP1 => vec![parse("2*x1*x2^2"), parse("x2^3")],
            PushforwardAssumption::EvenCurveDegreeP4 => vec![parse("2*x1^3")],
            PushforwardAssumption::CustomSubgroup { generators, .. } => generators.clone(),
        })
    }

    fn certificate(&self, j: u32, assumption: &PushforwardAssumption) -> ExactnessCertificate {
        let not_ample = !self.is_ample();
        let status = match assumption {
            PushforwardAssumption::NaiveDivisor if self.exactness_proven(j) => ExactnessStatus::Exact,
            PushforwardAssumption::NaiveDivisor => ExactnessStatus::UpperBoundOnly,
            PushforwardAssumption::NoriExact if self.exactness_proven(j) => ExactnessStatus::Exact,
            PushforwardAssumption::NoriExact => ExactnessStatus::AssumedExact,
            PushforwardAssumption::EvenDegreeOverP1 | PushforwardAssumption::EvenCurveDegreeP4 => {
                ExactnessStatus::AssumedContains
            }
            PushforwardAssumption::CustomSubgroup { direction, .. } => match direction {
                Containment::ContainsImage => ExactnessStatus::AssumedContains,
                Containment::EqualsImage => ExactnessStatus::AssumedExact,
                Containment::ContainedInImage => ExactnessStatus::UpperBoundOnly,
            },
        };
        ExactnessCertificate {
            degree: j,
            assumption: assumption.name().into(),
            status,
            not_ample,
        }
    }

    fn build(&self, j: u32, assumption: &PushforwardAssumption, mod2: bool) -> Result<ComplementGroup> {
        let names: Vec<String> = monomial_basis(&self.ambient, j)
            .iter()
            .map(|e| format_monomial(&self.ambient, e))
            .collect();
        let rows = self
            .subgroup_generators(j, assumption)?
            .iter()
            .map(ChowClass::coords)
            .collect();
        let relations = IntegerMatrix::with_cols(names.len(), rows)?;
        let mut group = AbelianPresentation::new(names, relations)?;
        if mod2 {
            group = group.tensor_mod2();
        }
        Ok(ComplementGroup {
            group: Arc::new(group),
            certificate: self.certificate(j, assumption),
        })
    }

    fn cached(&self, j: u32, assumption: &PushforwardAssumption, mod2: bool) -> Result<ComplementGroup> {
        let key = (j, assumption.clone(), mod2);
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let built = self.build(j, assumption, mod2)?;
        Ok(self
            .cache
            .lock()
            .expect("cache lock")
            .entry(key)
            .or_insert(built)
            .clone())
    }

    /// `CH^j(Y) / S_j` with its exactness certificate.
    pub fn complement_group(
        &self,
        j: u32,
        assumption: &PushforwardAssumption,
    ) -> Result<ComplementGroup> {
        self.cached(j, assumption, false)
    }

    /// `CH^j(Y) / (S_j + 2·CH^j(Y))`.
    pub fn complement_group_mod2(
        &self,
        j: u32,
        assumption: &PushforwardAssumption,
    ) -> Result<ComplementGroup> {
        self.cached(j, assumption, true)
    }

    /// Image of a class of `CH^j(Y)` in the quotient for `j = deg c`.
    pub fn restrict(&self, c: &ChowClass, assumption: &PushforwardAssumption) -> Result<GroupElement> {
        if c.ambient() != &self.ambient {
            return Err(Error::AmbientMismatch);
        }
        let g = self.complement_group(c.degree(), assumption)?;
        GroupElement::new(g.group, c.coords())
    }

    /// Image of a class in the mod-2 quotient.
    pub fn restrict_mod2(
        &self,
        c: &ChowClass,
        assumption: &PushforwardAssumption,
    ) -> Result<GroupElement> {
        if c.ambient() != &self.ambient {
            return Err(Error::AmbientMismatch);
        }
        let g = self.complement_group_mod2(c.degree(), assumption)?;
        GroupElement::new(g.group, c.coords())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ambient": self.ambient.spec_string(),
            "multidegree": json::integers(&self.multidegree()),
            "ample": self.is_ample(),
        })
    }
}

impl ComplementGroup {
    pub fn to_json(&self) -> Value {
        json!({
            "generators": self.group.generator_names(),
            "relations": self.group.relations().to_json(),
            "invariant_factors": json::integers(&self.group.invariant_factors()),
            "structure": self.group.structure(),
            "certificate": self.certificate.to_json(),
        })
    }
}

/// The displayed Smith form identity for the bidegree `(d1, d2)` matrix,
/// `left · [[d2, d1], [0, d2]] · right = diag(g, d2^2/g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfIdentity {
    pub left: IntegerMatrix,
    pub matrix: IntegerMatrix,
    pub right: IntegerMatrix,
    pub product: IntegerMatrix,
    pub expected: IntegerMatrix,
}

impl SnfIdentity {
    pub fn holds(&self) -> bool {
        let unimodular = |m: &IntegerMatrix| m.determinant().is_some_and(|d| d.abs().is_one());
        self.product == self.expected && unimodular(&self.left) && unimodular(&self.right)
    }
}

/// Comparison of computed complement groups on `P^1 × P^3` with the closed
/// forms for a bidegree `(d1, d2)` hypersurface.
#[derive(Clone, Debug)]
pub struct ClosedFormReport {
    pub d1: BigInt,
    pub d2: BigInt,
    pub g: BigInt,
    /// Bezout coefficients, `m·d1 + n·d2 = g`, minimal `|m|`.
    pub m: BigInt,
    pub n: BigInt,
    /// Invariant factors of `Z/d1 ⊕ Z/d2`.
    pub degree1_closed_form: Vec<BigInt>,
    pub degree1_computed: Vec<BigInt>,
    pub degree1_certificate: ExactnessCertificate,
    /// Nontrivial part of `[g, d2^2/g]`.
    pub degree2_closed_form: Vec<BigInt>,
    pub degree2_computed: Vec<BigInt>,
    pub degree2_certificate: ExactnessCertificate,
    pub identity: SnfIdentity,
    /// `(1, -m·d2/g)`: coordinates of `x1*x2` in `Z/g ⊕ Z/(d2^2/g)`.
    pub xi_tau_image: [BigInt; 2],
    /// Order of `xi_tau_image` in `Z/g ⊕ Z/(d2^2/g)`.
    pub xi_tau_order_closed_form: BigInt,
    /// Order of the restriction of `x1*x2` in the computed group.
    pub xi_tau_order_computed: BigInt,
}

impl ClosedFormReport {
    pub fn degree1_matches(&self) -> bool {
        self.degree1_closed_form == self.degree1_computed
    }

    pub fn degree2_matches(&self) -> bool {
        self.degree2_closed_form == self.degree2_computed
    }

    pub fn xi_tau_nontrivial(&self) -> bool {
        !self.xi_tau_order_computed.is_one()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d1": json::integer(&self.d1),
            "d2": json::integer(&self.d2),
            "g": json::integer(&self.g),
            "m": json::integer(&self.m),
            "n": json::integer(&self.n),
            "degree1": {
                "closed_form": json::integers(&self.degree1_closed_form),
                "computed": json::integers(&self.degree1_computed),
                "matches": self.degree1_matches(),
                "certificate": self.degree1_certificate.to_json(),
            },
            "degree2": {
                "closed_form": json::integers(&self.degree2_closed_form),
                "computed": json::integers(&self.degree2_computed),
                "matches": self.degree2_matches(),
                "certificate": self.degree2_certificate.to_json(),
            },
            "snf_identity": {
                "left": self.identity.left.to_json(),
                "matrix": self.identity.matrix.to_json(),
                "right": self.identity.right.to_json(),
                "product": self.identity.product.to_json(),
                "holds": self.identity.holds(),
            },
            "xi_tau": {
                "image": json::integers(&self.xi_tau_image),
                "order_closed_form": json::integer(&self.xi_tau_order_closed_form),
                "order_computed": json::integer(&self.xi_tau_order_computed),
                "nontrivial": self.xi_tau_nontrivial(),
            },
        })
    }
}

fn nontrivial(factors: Vec<BigInt>) -> Vec<BigInt> {
    factors.into_iter().filter(|d| !d.is_one()).collect()
}

/// Computes the degree 1 and 2 complement groups for bidegree `(d1, d2)` on
/// `P^1 × P^3` and sets them beside the closed forms.
pub fn closed_form_check(d1: &BigInt, d2: &BigInt) -> Result<ClosedFormReport> {
    if !d1.is_positive() || !d2.is_positive() {
        return Err(Error::InvalidHypersurface(format!(
            "closed forms need d1, d2 >= 1, got ({d1}, {d2})"
        )));
    }
    let ambient = AmbientSpace::new(vec![1, 3])?;
    let model = ComplementModel::from_multidegree(ambient.clone(), &[d1.clone(), d2.clone()])?;
    let naive = PushforwardAssumption::NaiveDivisor;

    let bz = bezout(d1, d2);
    let g = bz.gcd.clone();
    let d2_sq_over_g = d2 * d2 / &g;

    let degree1 = model.complement_group(1, &naive)?;
    let degree2 = model.complement_group(2, &naive)?;

    let diag = IntegerMatrix::diagonal_matrix(2, 2, &[d1.clone(), d2.clone()]);
    let degree1_closed_form = nontrivial(smith_normal_form(&diag).diagonal());
    let degree2_closed_form = nontrivial(vec![g.clone(), d2_sq_over_g.clone()]);

    let matrix = divisor_multiplication_matrix(&ambient, model.z_class(), 2)?;
    let shift = -(&bz.m * d2 / &g);
    let left = IntegerMatrix::from_rows([
        vec![BigInt::one(), BigInt::zero()],
        vec![shift.clone(), BigInt::one()],
    ])?;
    let right = IntegerMatrix::from_rows([
        vec![bz.n.clone(), -(d1 / &g)],
        vec![bz.m.clone(), d2 / &g],
    ])?;
    let product = &(&left * &matrix) * &right;
    let expected = IntegerMatrix::diagonal_matrix(2, 2, &[g.clone(), d2_sq_over_g.clone()]);

    // order of (1, shift) in Z/g ⊕ Z/(d2^2/g)
    let order_in = |y: &BigInt, d: &BigInt| d / y.gcd(d);
    let xi_tau_order_closed_form =
        order_in(&BigInt::one(), &g).lcm(&order_in(&shift, &d2_sq_over_g));
    let xi_tau = ChowClass::parse("x1*x2", &ambient, Some(2))?;
    let xi_tau_order_computed = model.restrict(&xi_tau, &naive)?.order();

    Ok(ClosedFormReport {
        d1: d1.clone(),
        d2: d2.clone(),
        g,
        m: bz.m,
        n: bz.n,
        degree1_closed_form,
        degree1_computed: degree1.group.invariant_factors(),
        degree1_certificate: degree1.certificate,
        degree2_closed_form,
        degree2_computed: degree2.group.invariant_factors(),
        degree2_certificate: degree2.certificate,
        identity: SnfIdentity {
            left,
            matrix,
            right,
            product,
            expected,
        },
        xi_tau_image: [BigInt::one(), shift],
        xi_tau_order_closed_form,
        xi_tau_order_computed,
    })
}
