//! Synthetic emergency-braking position series.
//!
//! A vehicle travels at `v0` for the reaction time, then decelerates at a
//! constant rate until it stops. Positions are sampled every `dt` seconds
//! from the closed-form kinematics.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sample cap per series, to keep pathological scenarios from exhausting memory.
const MAX_SAMPLES: f64 = 5.0e7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BrakingScenario {
    /// Initial speed, m/s.
    pub v0: f64,
    /// Reaction time before braking starts, s.
    pub t_react: f64,
    /// Deceleration magnitude, m/s^2.
    pub decel: f64,
    /// Sample interval, s.
    pub dt: f64,
}

impl BrakingScenario {
    pub fn new(v0: f64, t_react: f64, decel: f64, dt: f64) -> Result<Self> {
        let s = Self {
            v0,
            t_react,
            decel,
            dt,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidScenario(msg.to_string()));
        if !(self.v0.is_finite() && self.v0 > 0.0) {
            return bad("initial speed must be positive and finite");
        }
        if !(self.t_react.is_finite() && self.t_react >= 0.0) {
            return bad("reaction time must be nonnegative and finite");
        }
        if !(self.decel.is_finite() && self.decel > 0.0) {
            return bad("deceleration must be positive and finite");
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad("sample interval must be positive and finite");
        }
        let d = self.stopping_distance();
        if !(d.is_finite() && d > 0.0) {
            return bad("stopping distance is not finite");
        }
        if self.stop_time() / self.dt > MAX_SAMPLES {
            return bad("too many samples for this sample interval");
        }
        Ok(())
    }

    /// Time from braking onset to standstill.
    pub fn braking_time(&self) -> f64 {
        self.v0 / self.decel
    }

    pub fn stop_time(&self) -> f64 {
        self.t_react + self.braking_time()
    }

    /// `v0 t_react + v0^2 / (2 decel)`
    pub fn stopping_distance(&self) -> f64 {
        self.v0 * self.t_react + self.v0 * self.v0 / (2.0 * self.decel)
    }

    /// Closed-form position at time `t >= 0`.
    pub fn position(&self, t: f64) -> f64 {
        let tau = (t - self.t_react).clamp(0.0, self.braking_time());
        self.v0 * t.min(self.t_react) + tau * (self.v0 - 0.5 * self.decel * tau)
    }
}

/// Positions `x` at sample times `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn final_position(&self) -> f64 {
        self.x.last().copied().unwrap_or(0.0)
    }
}

/// Samples `scenario` at `t = 0, dt, 2 dt, ...` up to the first sample at
/// or after the stop.
pub fn simulate_braking(scenario: &BrakingScenario) -> Result<TimeSeries> {
    scenario.validate()?;
    let steps = (scenario.stop_time() / scenario.dt).ceil() as usize;
    let t: Vec<f64> = (0..=steps).map(|k| k as f64 * scenario.dt).collect();
    let mut x: Vec<f64> = t.iter().map(|&ti| scenario.position(ti)).collect();
    // rounding at the phase change and near standstill can produce
    // sub-ulp reversals
    for k in 1..x.len() {
        x[k] = x[k].max(x[k - 1]);
    }
    Ok(TimeSeries { t, x })
}

/// Closed interval a parameter is drawn from, uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamRange {
    pub min: f64,
    pub max: f64,
}

impl ParamRange {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    fn sample(&self, rng: &mut impl RngCore) -> f64 {
        // 53 random mantissa bits, uniform on [0, 1)
        let unit = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        self.min + (self.max - self.min) * unit
    }
}

/// Random number generator used for corpus generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RngKind {
    /// ChaCha with 8 rounds; series `i` uses stream `i` of the seeded generator.
    #[default]
    ChaCha8,
}

/// Settings for [`generate_corpus`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusConfig {
    pub count: usize,
    pub v0: ParamRange,
    pub t_react: ParamRange,
    pub decel: ParamRange,
    pub dt: f64,
    pub seed: u64,
    #[serde(default)]
    pub rng: RngKind,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self {
            count: 1000,
            v0: ParamRange::new(25.0, 35.0),
            t_react: ParamRange::new(0.8, 1.5),
            decel: ParamRange::new(3.5, 4.5),
            dt: 0.01,
            seed: 42,
            rng: RngKind::ChaCha8,
        }
    }
}

impl CorpusConfig {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidRanges("count must be at least 1".into()));
        }
        for (name, r) in [("v0", self.v0), ("t_react", self.t_react), ("decel", self.decel)] {
            if !(r.min.is_finite() && r.max.is_finite() && r.min <= r.max) {
                return Err(Error::InvalidRanges(format!(
                    "{name}: need finite min <= max, got [{}, {}]",
                    r.min, r.max
                )));
            }
        }
        // the corners of the box bound every drawn scenario
        BrakingScenario::new(self.v0.min, self.t_react.min, self.decel.max, self.dt)
            .and(BrakingScenario::new(self.v0.max, self.t_react.max, self.decel.min, self.dt))
            .map_err(|e| Error::InvalidRanges(e.to_string()))?;
        Ok(())
    }

    /// Scenario of series `index`; independent of every other index.
    pub fn scenario(&self, index: usize) -> BrakingScenario {
        let mut rng = match self.rng {
            RngKind::ChaCha8 => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(index as u64);
                rng
            }
        };
        BrakingScenario {
            v0: self.v0.sample(&mut rng),
            t_react: self.t_react.sample(&mut rng),
            decel: self.decel.sample(&mut rng),
            dt: self.dt,
        }
    }

    /// Smallest possible stopping distance over the parameter box.
    pub fn min_stopping_distance(&self) -> f64 {
        BrakingScenario {
            v0: self.v0.min,
            t_react: self.t_react.min,
            decel: self.decel.max,
            dt: self.dt,
        }
        .stopping_distance()
    }
}

/// `config.count` braking series, generated in parallel. Output order and
/// content depend only on the config.
pub fn generate_corpus(config: &CorpusConfig) -> Result<Vec<TimeSeries>> {
    config.validate()?;
    (0..config.count)
        .into_par_iter()
        .map(|i| simulate_braking(&config.scenario(i)))
        .collect()
}

/// All positions of all series, concatenated in series order.
pub fn flatten_positions(corpus: &[TimeSeries]) -> Vec<f64> {
    corpus.iter().flat_map(|s| s.x.iter().copied()).collect()
}
