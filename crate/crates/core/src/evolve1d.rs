//! One-dimensional walk: shift, then a (possibly site-dependent) coin.
//!
//! One step maps
//!
//! ```text
//! ψ↑(x, t+1) = a11(x) ψ↑(x+1, t) + a12(x) ψ↓(x−1, t)
//! ψ↓(x, t+1) = a21(x) ψ↑(x+1, t) + a22(x) ψ↓(x−1, t)
//! ```
//!
//! where `a_ij(x)` is the coin at the *target* site for this step.

use serde::{Deserialize, Serialize};

use crate::coins::{su2_unchecked, CoinMatrix};
use crate::disorder::{CoinSchedule, DisorderKind};
use crate::observables::{
    entanglement_entropy, position_distribution_1d, reduced_density, standard_deviation,
    Distribution1D,
};
use crate::state::{make_initial_state_1d, total_norm, InitialSpec, Spinor, WalkState, WalkState1D};
use crate::{Error, Result};

/// Which observables to record after each step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordFlags {
    #[serde(default)]
    pub distribution: bool,
    #[serde(default = "yes")]
    pub sigma: bool,
    #[serde(default = "yes")]
    pub entropy: bool,
}

fn yes() -> bool {
    true
}

impl RecordFlags {
    pub fn all() -> Self {
        RecordFlags {
            distribution: true,
            sigma: true,
            entropy: true,
        }
    }

    /// σ and E, no distributions.
    pub fn scalars() -> Self {
        RecordFlags {
            distribution: false,
            sigma: true,
            entropy: true,
        }
    }

    pub fn none() -> Self {
        RecordFlags {
            distribution: false,
            sigma: false,
            entropy: false,
        }
    }
}

impl Default for RecordFlags {
    fn default() -> Self {
        RecordFlags::scalars()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord1D {
    pub t: usize,
    pub norm: f64,
    pub distribution: Option<Distribution1D>,
    pub sigma: Option<f64>,
    pub entropy: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Trajectory1D {
    pub records: Vec<StepRecord1D>,
    pub final_state: WalkState1D,
}

impl Trajectory1D {
    pub fn last(&self) -> &StepRecord1D {
        self.records.last().expect("a trajectory always holds the t = 0 record")
    }

    /// Largest `|norm − 1|` over all recorded steps.
    pub fn max_norm_drift(&self) -> f64 {
        self.records
            .iter()
            .map(|r| (r.norm - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn sigmas(&self) -> Vec<f64> {
        self.records.iter().filter_map(|r| r.sigma).collect()
    }

    pub fn entropies(&self) -> Vec<f64> {
        self.records.iter().filter_map(|r| r.entropy).collect()
    }
}

/// Advances `state` by one step with one coin per site (`coins.len() == 2T + 1`).
pub fn step_1d(state: &WalkState1D, coins: &[CoinMatrix]) -> Result<WalkState1D> {
    let halfwidth = state.halfwidth();
    let next = state.t() + 1;
    if next > halfwidth {
        return Err(Error::LightCone { next, halfwidth });
    }
    if coins.len() != state.len() {
        return Err(Error::domain(format!(
            "coin row has {} entries, lattice has {}",
            coins.len(),
            state.len()
        )));
    }
    let src = state.amps();
    let n = src.len();
    let out = (0..n)
        .map(|i| {
            let from_right = if i + 1 < n { src[i + 1].up } else { Default::default() };
            let from_left = if i > 0 { src[i - 1].down } else { Default::default() };
            let (up, down) = coins[i].apply(from_right, from_left);
            Spinor { up, down }
        })
        .collect();
    Ok(WalkState1D::from_parts(next, halfwidth, out))
}

/// Coin matrices for every site at step `t`.
pub fn coin_row(schedule: &CoinSchedule, t: usize) -> Result<Vec<CoinMatrix>> {
    let angles = schedule.row(t)?;
    Ok(angles.iter().map(su2_unchecked).collect())
}

fn record(state: &WalkState1D, flags: RecordFlags) -> Result<StepRecord1D> {
    let norm = total_norm(state);
    if !norm.is_finite() {
        return Err(Error::Invariant(format!("non-finite norm at t = {}", state.t())));
    }
    let need_dist = flags.distribution || flags.sigma;
    let dist = need_dist.then(|| position_distribution_1d(state));
    let sigma = match (&dist, flags.sigma) {
        (Some(d), true) => Some(standard_deviation(d)?),
        _ => None,
    };
    let entropy = if flags.entropy {
        Some(entanglement_entropy(&reduced_density(state))?)
    } else {
        None
    };
    Ok(StepRecord1D {
        t: state.t(),
        norm,
        distribution: dist.filter(|_| flags.distribution),
        sigma,
        entropy,
    })
}

/// Evolves the origin-localised `spec` for `steps` steps under `schedule`.
///
/// The lattice halfwidth is the schedule's. Records are taken for
/// `t = 0..=steps`, each after a full step.
pub fn run_1d(
    spec: &InitialSpec,
    schedule: &CoinSchedule,
    steps: usize,
    flags: RecordFlags,
) -> Result<Trajectory1D> {
    if steps > schedule.steps() {
        return Err(Error::config(
            "steps",
            format!("{steps} exceeds the schedule's {} steps", schedule.steps()),
        ));
    }
    let mut state = make_initial_state_1d(spec, schedule.halfwidth())?;
    let mut records = Vec::with_capacity(steps + 1);
    records.push(record(&state, flags)?);

    let static_row = match schedule.kind() {
        DisorderKind::Uniform | DisorderKind::Spatial if steps > 0 => Some(coin_row(schedule, 1)?),
        _ => None,
    };
    for t in 1..=steps {
        state = match &static_row {
            Some(row) => step_1d(&state, row)?,
            None => step_1d(&state, &coin_row(schedule, t)?)?,
        };
        records.push(record(&state, flags)?);
    }
    Ok(Trajectory1D {
        records,
        final_state: state,
    })
}
