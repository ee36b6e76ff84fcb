//! Named configurations for the worked examples.

use num_bigint::BigInt;

use crate::chow::AmbientSpace;
use crate::complement::{ComplementModel, PushforwardAssumption};
use crate::error::{Error, Result};

/// Default hypersurface degree for `trento`: `p^3` with `p = 5`.
pub const TRENTO_DEFAULT_DEGREE: u32 = 125;

#[derive(Clone, Debug)]
pub struct Preset {
    pub name: String,
    pub model: ComplementModel,
    pub assumption: PushforwardAssumption,
}

/// Parses `trento[:d]`, `totaro48`, `bidegree34` or `nori:d`.
pub fn preset(key: &str) -> Result<Preset> {
    let (name, arg) = match key.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (key, None),
    };
    let degree = |default: Option<u32>| -> Result<BigInt> {
        match (arg, default) {
            (Some(a), _) => a
                .trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("`{a}` is not a degree"))),
            (None, Some(d)) => Ok(BigInt::from(d)),
            (None, None) => Err(Error::Parse(format!("preset `{name}` needs a degree, e.g. {name}:48"))),
        }
    };
    let p4 = || AmbientSpace::new(vec![4]);
    let (model, assumption) = match name {
        "trento" => (
            ComplementModel::from_multidegree(p4()?, &[degree(Some(TRENTO_DEFAULT_DEGREE))?])?,
            PushforwardAssumption::NaiveDivisor,
        ),
        "totaro48" if arg.is_none() => (
            ComplementModel::from_multidegree(p4()?, &[BigInt::from(48)])?,
            PushforwardAssumption::EvenCurveDegreeP4,
        ),
        "bidegree34" if arg.is_none() => (
            ComplementModel::from_multidegree(
                AmbientSpace::new(vec![1, 3])?,
                &[BigInt::from(3), BigInt::from(4)],
            )?,
            PushforwardAssumption::EvenDegreeOverP1,
        ),
        "nori" => (
            ComplementModel::from_multidegree(p4()?, &[degree(None)?])?,
            PushforwardAssumption::NoriExact,
        ),
        _ => return Err(Error::Parse(format!("unknown example `{key}`"))),
    };
    Ok(Preset {
        name: key.to_owned(),
        model,
        assumption,
    })
}
