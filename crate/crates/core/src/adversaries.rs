//! Cost-vector generators. An adversary sees the past costs and the
//! learner's past actions and commits to the next cost vector.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{FplError, Result};
use crate::rng::Stream;
use crate::types::CostVector;

/// What an adversary may look at when choosing `c_t`.
#[derive(Debug, Clone, Copy)]
pub struct AdversaryContext<'a> {
    pub round: u64,
    pub n: usize,
    pub past_costs: &'a [CostVector],
    pub past_actions: &'a [usize],
}

impl<'a> AdversaryContext<'a> {
    pub fn new(
        round: u64,
        n: usize,
        past_costs: &'a [CostVector],
        past_actions: &'a [usize],
    ) -> Result<Self> {
        let expected = round.checked_sub(1).ok_or(FplError::InvalidParameter {
            name: "round",
            reason: "rounds are numbered from 1",
        })? as usize;
        if past_costs.len() != expected || past_actions.len() != expected {
            return Err(FplError::DimensionMismatch {
                expected,
                got: past_costs.len().max(past_actions.len()),
            });
        }
        Ok(AdversaryContext {
            round,
            n,
            past_costs,
            past_actions,
        })
    }
}

pub trait Adversary {
    /// `c_t` for `ctx.round`. Must be a function of the context and the
    /// draws taken from `rng`.
    fn next(&mut self, ctx: &AdversaryContext<'_>, rng: &mut Stream) -> Result<CostVector>;

    /// Whether the output ignores `past_actions`.
    fn is_oblivious(&self) -> bool;
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)
)]
pub enum AdversaryConfig {
    /// Row `t` of a fixed matrix, cycling when the game outlasts it.
    FixedMatrix { rows: Vec<Vec<f64>> },
    /// Independent Bernoulli costs with per-arm means.
    BernoulliStochastic { means: Vec<f64> },
    /// Cost 1 on the arm played in the previous round, 0 elsewhere.
    PunishLastAction {},
    /// Arm `decoy` is cheap until `switch_time`; afterwards the arm the
    /// learner played least during the prefix becomes the only cheap arm.
    DeceptiveSwitch {
        #[cfg_attr(feature = "serde", serde(default))]
        decoy: usize,
        /// Defaults to a third of the horizon.
        #[cfg_attr(feature = "serde", serde(default))]
        switch_time: Option<u64>,
        #[cfg_attr(feature = "serde", serde(default))]
        low: f64,
        #[cfg_attr(feature = "serde", serde(default = "one"))]
        high: f64,
    },
    /// Cost 1 on the arm played most often over the last `window` rounds.
    BestResponseGreedy {
        #[cfg_attr(feature = "serde", serde(default = "default_window"))]
        window: usize,
    },
}

#[cfg(feature = "serde")]
fn one() -> f64 {
    1.0
}

#[cfg(feature = "serde")]
fn default_window() -> usize {
    10
}

impl AdversaryConfig {
    pub fn build(&self, n: usize, horizon: u64) -> Result<Box<dyn Adversary + Send>> {
        Ok(match self {
            AdversaryConfig::FixedMatrix { rows } => Box::new(FixedMatrix::new(rows, n)?),
            AdversaryConfig::BernoulliStochastic { means } => {
                Box::new(BernoulliStochastic::new(means.clone(), n)?)
            }
            AdversaryConfig::PunishLastAction {} => Box::new(PunishLastAction { n }),
            AdversaryConfig::DeceptiveSwitch {
                decoy,
                switch_time,
                low,
                high,
            } => Box::new(DeceptiveSwitch::new(
                n,
                *decoy,
                switch_time.unwrap_or((horizon / 3).max(1)),
                *low,
                *high,
            )?),
            AdversaryConfig::BestResponseGreedy { window } => {
                Box::new(BestResponseGreedy::new(n, *window)?)
            }
        })
    }

    pub fn label(&self) -> &'static str {
        match self {
            AdversaryConfig::FixedMatrix { .. } => "fixed_matrix",
            AdversaryConfig::BernoulliStochastic { .. } => "bernoulli_stochastic",
            AdversaryConfig::PunishLastAction {} => "punish_last_action",
            AdversaryConfig::DeceptiveSwitch { .. } => "deceptive_switch",
            AdversaryConfig::BestResponseGreedy { .. } => "best_response_greedy",
        }
    }
}

#[derive(Debug, Clone)]
pub struct FixedMatrix {
    rows: Vec<CostVector>,
}

impl FixedMatrix {
    pub fn new(rows: &[Vec<f64>], n: usize) -> Result<Self> {
        if rows.is_empty() {
            return Err(FplError::InvalidParameter {
                name: "rows",
                reason: "matrix needs at least one row",
            });
        }
        let rows = rows
            .iter()
            .map(|r| CostVector::with_len(r.clone(), n))
            .collect::<Result<Vec<_>>>()?;
        Ok(FixedMatrix { rows })
    }
}

impl Adversary for FixedMatrix {
    fn next(&mut self, ctx: &AdversaryContext<'_>, _rng: &mut Stream) -> Result<CostVector> {
        Ok(self.rows[((ctx.round - 1) % self.rows.len() as u64) as usize].clone())
    }

    fn is_oblivious(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone)]
pub struct BernoulliStochastic {
    means: Vec<f64>,
}

impl BernoulliStochastic {
    pub fn new(means: Vec<f64>, n: usize) -> Result<Self> {
        // the means obey the same range as costs
        CostVector::with_len(means.clone(), n)?;
        Ok(BernoulliStochastic { means })
    }
}

impl Adversary for BernoulliStochastic {
    fn next(&mut self, _ctx: &AdversaryContext<'_>, rng: &mut Stream) -> Result<CostVector> {
        CostVector::new(
            self.means
                .iter()
                .map(|&m| if rng.bernoulli(m) { 1.0 } else { 0.0 })
                .collect(),
        )
    }

    fn is_oblivious(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone)]
pub struct PunishLastAction {
    n: usize,
}

impl Adversary for PunishLastAction {
    fn next(&mut self, ctx: &AdversaryContext<'_>, _rng: &mut Stream) -> Result<CostVector> {
        let mut c = alloc::vec![0.0; self.n];
        if let Some(&last) = ctx.past_actions.last() {
            c[last] = 1.0;
        }
        CostVector::new(c)
    }

    fn is_oblivious(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone)]
pub struct DeceptiveSwitch {
    n: usize,
    decoy: usize,
    switch_time: u64,
    low: f64,
    high: f64,
    target: Option<usize>,
}

impl DeceptiveSwitch {
    pub fn new(n: usize, decoy: usize, switch_time: u64, low: f64, high: f64) -> Result<Self> {
        if n < 2 {
            return Err(FplError::InvalidParameter {
                name: "n",
                reason: "deceptive switch needs at least two arms",
            });
        }
        if decoy >= n {
            return Err(FplError::InvalidParameter {
                name: "decoy",
                reason: "must be an arm index",
            });
        }
        CostVector::new(alloc::vec![low, high])?;
        if low >= high {
            return Err(FplError::InvalidParameter {
                name: "low",
                reason: "must be below high",
            });
        }
        Ok(DeceptiveSwitch {
            n,
            decoy,
            switch_time,
            low,
            high,
            target: None,
        })
    }

    /// Least-played non-decoy arm over the first `switch_time` actions.
    fn pick_target(&self, actions: &[usize]) -> usize {
        let mut counts = alloc::vec![0u64; self.n];
        for &a in actions.iter().take(self.switch_time as usize) {
            counts[a] += 1;
        }
        (0..self.n)
            .filter(|&i| i != self.decoy)
            .min_by_key(|&i| (counts[i], i))
            .unwrap_or(0)
    }
}

impl Adversary for DeceptiveSwitch {
    fn next(&mut self, ctx: &AdversaryContext<'_>, _rng: &mut Stream) -> Result<CostVector> {
        let cheap = if ctx.round <= self.switch_time {
            self.target = None;
            self.decoy
        } else {
            match self.target {
                Some(t) => t,
                None => {
                    let t = self.pick_target(ctx.past_actions);
                    self.target = Some(t);
                    t
                }
            }
        };
        let mut c = alloc::vec![self.high; self.n];
        c[cheap] = self.low;
        CostVector::new(c)
    }

    fn is_oblivious(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone)]
pub struct BestResponseGreedy {
    n: usize,
    window: usize,
}

impl BestResponseGreedy {
    pub fn new(n: usize, window: usize) -> Result<Self> {
        if window == 0 {
            return Err(FplError::InvalidParameter {
                name: "window",
                reason: "must be at least 1",
            });
        }
        Ok(BestResponseGreedy { n, window })
    }
}

impl Adversary for BestResponseGreedy {
    fn next(&mut self, ctx: &AdversaryContext<'_>, _rng: &mut Stream) -> Result<CostVector> {
        let mut c = alloc::vec![0.0; self.n];
        let start = ctx.past_actions.len().saturating_sub(self.window);
        let recent = &ctx.past_actions[start..];
        if !recent.is_empty() {
            let mut counts = alloc::vec![0usize; self.n];
            for &a in recent {
                counts[a] += 1;
            }
            let top = (0..self.n)
                .max_by_key(|&i| (counts[i], core::cmp::Reverse(i)))
                .unwrap_or(0);
            c[top] = 1.0;
        }
        CostVector::new(c)
    }

    fn is_oblivious(&self) -> bool {
        false
    }
}
