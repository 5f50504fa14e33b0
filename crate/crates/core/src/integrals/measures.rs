use serde::Serialize;

use crate::digit_sets::{natural_measure, Budget, CantorSpec, DiscreteMeasure};
use crate::error::Result;
use crate::exact::{fmt_rational, Rational};

/// Test measures `mu` for the estimate checks, each with its Frostman
/// exponent: `mu(I) <~ |I|^exponent` down to the resolution of the atoms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TestMeasure {
    /// Point mass at the origin.
    Dirac,
    /// Uniform atoms `j / 4^depth`, `j < 4^depth`; exponent 1. Inner
    /// integrals of the block estimates use exact Lebesgue measure instead.
    Lebesgue { depth: u32 },
    /// Natural measure of a digit set at finite depth.
    Digits { spec: CantorSpec, depth: u32 },
}

impl TestMeasure {
    /// The Cantor–Lebesgue measure truncated at `depth`.
    pub fn cantor(depth: u32) -> Self {
        TestMeasure::Digits {
            spec: CantorSpec::cantor(),
            depth,
        }
    }

    pub fn exponent(&self) -> f64 {
        match self {
            TestMeasure::Dirac => 0.0,
            TestMeasure::Lebesgue { .. } => 1.0,
            TestMeasure::Digits { spec, .. } => spec.similarity_dim(),
        }
    }

    /// Name without the depth.
    pub fn family(&self) -> String {
        match self {
            TestMeasure::Dirac => "dirac".into(),
            TestMeasure::Lebesgue { .. } => "lebesgue-grid".into(),
            TestMeasure::Digits { spec, .. } => {
                let digits: Vec<String> = spec.digits().iter().map(|d| d.to_string()).collect();
                format!("digits(base={},digits={})", spec.base(), digits.join("|"))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            TestMeasure::Dirac => self.family(),
            TestMeasure::Lebesgue { depth } | TestMeasure::Digits { depth, .. } => {
                format!("{} at depth {depth}", self.family())
            }
        }
    }

    pub fn atoms(&self, budget: &Budget) -> Result<DiscreteMeasure> {
        match self {
            TestMeasure::Dirac => Ok(DiscreteMeasure::dirac(Rational::from_integer(0))),
            TestMeasure::Lebesgue { depth } => natural_measure(&CantorSpec::full(4)?, *depth, budget),
            TestMeasure::Digits { spec, depth } => natural_measure(spec, *depth, budget),
        }
    }

    /// Measure used inside block integrals.
    pub fn inner(&self, budget: &Budget) -> Result<InnerMeasure> {
        Ok(match self {
            TestMeasure::Lebesgue { .. } => InnerMeasure::Lebesgue,
            other => InnerMeasure::Atoms(other.atoms(budget)?),
        })
    }
}

/// Measure integrated against `|lambda_hat(t s)|^2` inside the block
/// estimates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InnerMeasure {
    Atoms(DiscreteMeasure),
    /// Exact uniform measure on `[0, 1]`.
    Lebesgue,
}

impl InnerMeasure {
    pub fn label(&self) -> String {
        match self {
            InnerMeasure::Atoms(m) if m.len() == 1 => {
                format!("dirac({})", fmt_rational(&m.atoms()[0].0))
            }
            InnerMeasure::Atoms(m) => format!("atoms({})", m.len()),
            InnerMeasure::Lebesgue => "lebesgue".into(),
        }
    }
}
