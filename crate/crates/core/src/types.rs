//! Validated cost and estimate vectors and the learner's running state.

use alloc::vec::Vec;

use crate::error::{FplError, Result};

/// True per-round costs, one entry per expert, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<f64>", into = "Vec<f64>"))]
pub struct CostVector(Vec<f64>);

impl CostVector {
    /// Rejects empty vectors and any entry outside `[0, 1]` (NaN included).
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(FplError::NoExperts);
        }
        for (index, &value) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(FplError::CostOutOfRange { index, value });
            }
        }
        Ok(CostVector(values))
    }

    /// Like [`CostVector::new`] but also checks the length.
    pub fn with_len(values: Vec<f64>, n: usize) -> Result<Self> {
        if values.len() != n {
            return Err(FplError::DimensionMismatch {
                expected: n,
                got: values.len(),
            });
        }
        Self::new(values)
    }

    pub fn zeros(n: usize) -> Self {
        CostVector(alloc::vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for CostVector {
    type Error = FplError;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        CostVector::new(values)
    }
}

impl From<CostVector> for Vec<f64> {
    fn from(c: CostVector) -> Self {
        c.0
    }
}

/// One-hot nonnegative estimated cost vector, stored sparsely.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EstimateVector {
    index: Option<usize>,
    value: f64,
}

impl EstimateVector {
    pub fn zero() -> Self {
        EstimateVector::default()
    }

    pub fn one_hot(index: usize, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(FplError::NonFinite {
                what: "estimate",
                value,
            });
        }
        if value < 0.0 {
            return Err(FplError::InvalidParameter {
                name: "estimate",
                reason: "must be nonnegative",
            });
        }
        Ok(EstimateVector {
            index: Some(index),
            value,
        })
    }

    pub fn index(&self) -> Option<usize> {
        self.index
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Coordinate `i` of the dense vector.
    pub fn at(&self, i: usize) -> f64 {
        match self.index {
            Some(j) if j == i => self.value,
            _ => 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.index.is_none() || self.value == 0.0
    }
}

/// Learner variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Variant {
    Bfpl,
    OracleFpl,
    McFpl,
    BfplInfinite,
    RewardFpl,
}

/// Exploration rate, learning rate, and (Monte-Carlo only) sample count
/// for one round.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScheduleParams {
    pub gamma: f64,
    pub eta: f64,
    pub samples: Option<u64>,
}

/// Cumulative estimated costs `ĉ_{<t}` and the index `t` of the next round.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerState {
    cumulative: Vec<f64>,
    round: u64,
    variant: Variant,
    schedule: Option<ScheduleParams>,
}

impl LearnerState {
    pub fn new(n: usize, variant: Variant) -> Result<Self> {
        if n == 0 {
            return Err(FplError::NoExperts);
        }
        Ok(LearnerState {
            cumulative: alloc::vec![0.0; n],
            round: 1,
            variant,
            schedule: None,
        })
    }

    pub fn n(&self) -> usize {
        self.cumulative.len()
    }

    /// Index of the round about to be played (starts at 1).
    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// Schedule used in the most recent round.
    pub fn schedule(&self) -> Option<ScheduleParams> {
        self.schedule
    }

    pub fn set_schedule(&mut self, schedule: ScheduleParams) {
        self.schedule = Some(schedule);
    }

    /// Adds one round's estimate and advances the round counter.
    pub fn accumulate(&mut self, est: &EstimateVector) -> Result<()> {
        if let Some(i) = est.index() {
            if i >= self.n() {
                return Err(FplError::DimensionMismatch {
                    expected: self.n(),
                    got: i + 1,
                });
            }
            self.cumulative[i] += est.value();
        }
        self.round += 1;
        Ok(())
    }

    /// Adds `charge` to every expert at index `>= from` without advancing
    /// the round. Used for not-yet-entered experts in the infinite variant.
    pub fn charge_suffix(&mut self, from: usize, charge: f64) {
        for c in self.cumulative.iter_mut().skip(from) {
            *c += charge;
        }
    }
}
