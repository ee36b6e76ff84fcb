//! The rank-2 algebraizability criterion on smooth affine 4-folds:
//! a topological pair `(c1, c2)` with algebraic lifts comes from an algebraic
//! bundle iff `θ = Sq^2 c2 + c1 ∪ c2` vanishes in `CH^3(X)/2`.
//!
//! `CH^3(X)/2` is not computed directly. It is squeezed between two
//! quotients of `CH^3(Y)/2`:
//!
//! * by the naive subgroup, which is inside the pushforward image, so the
//!   naive quotient surjects onto `CH^3(X)/2` and vanishing there is proof
//!   of vanishing;
//! * by an assumed subgroup that contains the image, so `CH^3(X)/2`
//!   surjects onto it and non-vanishing there is proof of non-vanishing.
//!
//! Anything else is reported as undetermined.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::abelian::GroupElement;
use crate::chow::{AmbientSpace, ChowClass};
use crate::complement::{
    ComplementModel, Containment, ExactnessCertificate, ExactnessStatus, PushforwardAssumption,
};
use crate::error::{Error, Result};
use crate::json;
use crate::steenrod::{sq2, Mod2ChowClass};

/// Hypotheses of the criterion that the Chow-level model cannot check.
pub const UNVERIFIED_HYPOTHESES: &[&str] = &[
    "X is a smooth affine 4-fold",
    "base field algebraically closed of characteristic != 2",
];

/// Lifts to `Y` of the first and second Chern classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChernPair {
    c1: ChowClass,
    c2: ChowClass,
}

impl ChernPair {
    pub fn new(c1: ChowClass, c2: ChowClass) -> Result<Self> {
        if c1.ambient() != c2.ambient() {
            return Err(Error::AmbientMismatch);
        }
        if c1.degree() != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: c1.degree(),
            });
        }
        if c2.degree() != 2 {
            return Err(Error::DegreeMismatch {
                expected: 2,
                found: c2.degree(),
            });
        }
        Ok(ChernPair { c1, c2 })
    }

    pub fn parse(c1: &str, c2: &str, ambient: &AmbientSpace) -> Result<Self> {
        Self::new(
            ChowClass::parse(c1, ambient, Some(1))?,
            ChowClass::parse(c2, ambient, Some(2))?,
        )
    }

    pub fn c1(&self) -> &ChowClass {
        &self.c1
    }

    pub fn c2(&self) -> &ChowClass {
        &self.c2
    }

    pub fn ambient(&self) -> &AmbientSpace {
        self.c1.ambient()
    }
}

/// `Sq^2(c2) + c1 ∪ c2` reduced mod 2, a degree-3 class on `Y`.
pub fn theta(pair: &ChernPair) -> Result<Mod2ChowClass> {
    let square = sq2(&Mod2ChowClass::from(pair.c2()));
    let product = Mod2ChowClass::from(&pair.c1().cup(pair.c2())?);
    square.try_add(&product)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Algebraizable,
    NotAlgebraizable,
    Undetermined,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Algebraizable => "ALGEBRAIZABLE",
            Verdict::NotAlgebraizable => "NOT_ALGEBRAIZABLE",
            Verdict::Undetermined => "UNDETERMINED",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which quotient settled the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecisionBasis {
    /// θ vanishes modulo the naive subgroup (known to lie in the image).
    NaiveVanishing,
    /// θ vanishes modulo an assumed subgroup lying in the image.
    AssumedVanishing,
    /// θ survives modulo an assumed subgroup containing the image.
    AssumedNonvanishing,
}

impl DecisionBasis {
    pub fn as_str(self) -> &'static str {
        match self {
            DecisionBasis::NaiveVanishing => "naive_vanishing",
            DecisionBasis::AssumedVanishing => "assumed_vanishing",
            DecisionBasis::AssumedNonvanishing => "assumed_nonvanishing",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Justification {
    pub assumption: String,
    pub containment: Containment,
    pub decided_by: Option<DecisionBasis>,
    pub theta_zero_naive: bool,
    pub theta_zero_assumed: bool,
    /// False when the assumed subgroup, though claimed to contain the image,
    /// misses part of the naive subgroup mod 2 (which lies in the image).
    /// A refuted assumption never yields NOT_ALGEBRAIZABLE.
    pub assumption_consistent: bool,
    /// Degree 1 and 2 naive certificates, then degree 3 naive and assumed.
    pub certificates: Vec<ExactnessCertificate>,
    /// Degree 1 and 2 quotients are exact, so lifts of the topological Chern
    /// classes are unique up to naive relations (cycle class map assumed to be
    /// an isomorphism in these degrees).
    pub lifts_determined: bool,
    pub unverified_hypotheses: Vec<String>,
}

impl Justification {
    pub fn to_json(&self) -> Value {
        json!({
            "assumption": self.assumption,
            "containment": self.containment.as_str(),
            "decided_by": self.decided_by.map(DecisionBasis::as_str),
            "theta_zero_naive": self.theta_zero_naive,
            "theta_zero_assumed": self.theta_zero_assumed,
            "assumption_consistent": self.assumption_consistent,
            "lifts_determined": self.lifts_determined,
            "unverified_hypotheses": self.unverified_hypotheses,
        })
    }
}

#[derive(Clone, Debug)]
pub struct ObstructionReport {
    pub pair: ChernPair,
    pub theta_on_y: Mod2ChowClass,
    /// Image of θ in the naive degree-3 quotient mod 2.
    pub naive_image: GroupElement,
    /// Image of θ in the degree-3 quotient mod 2 selected by the assumption.
    pub theta_image: GroupElement,
    pub verdict: Verdict,
    pub justification: Justification,
}

impl ObstructionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "c1": self.pair.c1().to_string(),
            "c2": self.pair.c2().to_string(),
            "theta": self.theta_on_y.to_string(),
            "theta_image": self.theta_image.to_json(),
            "naive_image": self.naive_image.to_json(),
            "verdict": self.verdict.as_str(),
            "assumption": self.justification.assumption,
            "certificates": self
                .justification
                .certificates
                .iter()
                .map(ExactnessCertificate::to_json)
                .collect::<Vec<_>>(),
            "justification": self.justification.to_json(),
        })
    }
}

/// Evaluates θ and issues a verdict, consulting the naive quotient first.
pub fn decide(
    model: &ComplementModel,
    pair: &ChernPair,
    assumption: &PushforwardAssumption,
) -> Result<ObstructionReport> {
    let dim = model.ambient().total_dim();
    if dim != 4 {
        return Err(Error::DimensionUnsupported(dim));
    }
    assumption.check_applicable(model.ambient(), 3)?;
    if pair.ambient() != model.ambient() {
        return Err(Error::AmbientMismatch);
    }

    let naive = PushforwardAssumption::NaiveDivisor;
    let theta_on_y = theta(pair)?;
    let theta_lift = theta_on_y.lift();
    let naive_image = model.restrict_mod2(&theta_lift, &naive)?;
    let theta_image = model.restrict_mod2(&theta_lift, assumption)?;

    let containment = assumption.containment();
    let assumption_consistent = !containment.certifies_nonvanishing()
        || model
            .naive_generators(3)
            .iter()
            .all(|r| model.restrict_mod2(r, assumption).is_ok_and(|e| e.is_zero()));

    let theta_zero_naive = naive_image.is_zero();
    let theta_zero_assumed = theta_image.is_zero();
    let decided_by = if theta_zero_naive {
        Some(DecisionBasis::NaiveVanishing)
    } else if containment.certifies_nonvanishing() && assumption_consistent && !theta_zero_assumed {
        Some(DecisionBasis::AssumedNonvanishing)
    } else if containment.certifies_vanishing() && theta_zero_assumed {
        Some(DecisionBasis::AssumedVanishing)
    } else {
        None
    };
    let verdict = match decided_by {
        Some(DecisionBasis::NaiveVanishing | DecisionBasis::AssumedVanishing) => {
            Verdict::Algebraizable
        }
        Some(DecisionBasis::AssumedNonvanishing) => Verdict::NotAlgebraizable,
        None => Verdict::Undetermined,
    };

    let mut certificates = Vec::with_capacity(4);
    for j in 1..=3 {
        certificates.push(model.complement_group(j, &naive)?.certificate);
    }
    if *assumption != naive {
        certificates.push(model.complement_group(3, assumption)?.certificate);
    }
    let lifts_determined = certificates[..2]
        .iter()
        .all(|c| c.status == ExactnessStatus::Exact);

    Ok(ObstructionReport {
        pair: pair.clone(),
        theta_on_y,
        naive_image,
        theta_image,
        verdict,
        justification: Justification {
            assumption: assumption.name().into(),
            containment,
            decided_by,
            theta_zero_naive,
            theta_zero_assumed,
            assumption_consistent,
            certificates,
            lifts_determined,
            unverified_hypotheses: UNVERIFIED_HYPOTHESES.iter().map(|s| s.to_string()).collect(),
        },
    })
}

#[derive(Clone, Debug)]
pub struct ClassificationRow {
    /// Canonical coset coordinates in the naive degree 1 and 2 quotients.
    pub c1_coords: Vec<BigInt>,
    pub c2_coords: Vec<BigInt>,
    pub c1: ChowClass,
    pub c2: ChowClass,
    pub theta: Mod2ChowClass,
    pub verdict: Verdict,
}

impl ClassificationRow {
    pub fn to_json(&self) -> Value {
        json!({
            "c1": self.c1.to_string(),
            "c2": self.c2.to_string(),
            "c1_coords": json::integers(&self.c1_coords),
            "c2_coords": json::integers(&self.c2_coords),
            "theta": self.theta.to_string(),
            "verdict": self.verdict.as_str(),
        })
    }
}

/// Runs [`decide`] on every element of `CH^1(X) × CH^2(X)` (naive quotients),
/// ordered by coset index with `c1` major.
pub fn classify_all(
    model: &ComplementModel,
    assumption: &PushforwardAssumption,
) -> Result<Vec<ClassificationRow>> {
    classify_all_with_threads(model, assumption, None)
}

/// As [`classify_all`], with at most `threads` workers when given.
pub fn classify_all_with_threads(
    model: &ComplementModel,
    assumption: &PushforwardAssumption,
    threads: Option<usize>,
) -> Result<Vec<ClassificationRow>> {
    let naive = PushforwardAssumption::NaiveDivisor;
    let ambient = model.ambient();
    let degree1 = model.complement_group(1, &naive)?.group;
    let degree2 = model.complement_group(2, &naive)?.group;
    let firsts: Vec<_> = degree1.enumerate_elements()?.collect();
    let seconds: Vec<_> = degree2.enumerate_elements()?.collect();
    // surface argument errors once, before fanning out
    let probe = ChernPair::new(ChowClass::zero(ambient, 1), ChowClass::zero(ambient, 2))?;
    decide(model, &probe, assumption)?;

    let pairs: Vec<(&GroupElement, &GroupElement)> = firsts
        .iter()
        .flat_map(|a| seconds.iter().map(move |b| (a, b)))
        .collect();
    let run = || -> Result<Vec<ClassificationRow>> {
        pairs
            .par_iter()
            .map(|(a, b)| {
                let c1 = ChowClass::from_coords(ambient, 1, a.coords())?;
                let c2 = ChowClass::from_coords(ambient, 2, b.coords())?;
                let report = decide(model, &ChernPair::new(c1.clone(), c2.clone())?, assumption)?;
                Ok(ClassificationRow {
                    c1_coords: a.coords().to_vec(),
                    c2_coords: b.coords().to_vec(),
                    c1,
                    c2,
                    theta: report.theta_on_y,
                    verdict: report.verdict,
                })
            })
            .collect()
    };
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    }
}
