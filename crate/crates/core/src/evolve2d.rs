//! Two-state walk on the square lattice.
//!
//! The x-axis translates the σ₃ eigenstates (`|↑⟩ → x−1`, `|↓⟩ → x+1`) and the
//! y-axis translates the σ₁ eigenstates (`|+⟩ → y−1`, `|−⟩ → y+1`). One step is
//!
//! ```text
//! [B_x(θ) ⊗ 1] S_y [B_y(ϑ) ⊗ 1] S_x
//! ```
//!
//! with `B_y` pre-converted to the σ₃ basis (see [`make_y_coin`]). The coin
//! angles of a step are taken at the site the coin acts on.
//!
//! Two independent implementations are provided: [`step_2d`] composes the four
//! operators stage by stage, [`step_2d_closed_form`] applies the equivalent
//! four-neighbour update directly. They agree to rounding.
//!
//! [`make_y_coin`]: crate::coins::make_y_coin

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::disorder::{DisorderKind, Schedule2D};
use crate::evolve1d::RecordFlags;
use crate::observables::{
    entanglement_entropy, position_distribution_2d, radial_deviation, reduced_density,
    Distribution2D,
};
use crate::state::{make_initial_state_2d, total_norm, InitialSpec, Spinor, WalkState, WalkState2D};
use crate::{Error, Result};

/// Per-site `(θ, ϑ)` for one step, laid out like [`WalkState2D`].
#[derive(Clone, Debug, PartialEq)]
pub struct AngleField {
    halfwidth: usize,
    cells: Vec<(f64, f64)>,
}

impl AngleField {
    pub fn uniform(halfwidth: usize, theta: f64, vartheta: f64) -> Self {
        let side = 2 * halfwidth + 1;
        AngleField {
            halfwidth,
            cells: vec![(theta, vartheta); side * side],
        }
    }

    pub fn from_cells(halfwidth: usize, cells: Vec<(f64, f64)>) -> Result<Self> {
        let side = 2 * halfwidth + 1;
        if cells.len() != side * side {
            return Err(Error::domain(format!(
                "angle field has {} cells, lattice has {}",
                cells.len(),
                side * side
            )));
        }
        Ok(AngleField { halfwidth, cells })
    }

    /// The schedule's angles at step `t` over the whole lattice.
    pub fn from_schedule(schedule: &Schedule2D, t: usize) -> Result<Self> {
        let hw = schedule.halfwidth();
        schedule.angles_at(0, 0, t)?;
        let cells = match schedule.kind() {
            DisorderKind::Uniform | DisorderKind::Temporal => {
                return Ok(AngleField::uniform(hw, schedule.sample(0, 0, t).0, schedule.sample(0, 0, t).1));
            }
            _ => {
                let h = hw as i64;
                (-h..=h)
                    .flat_map(|x| (-h..=h).map(move |y| (x, y)))
                    .map(|(x, y)| schedule.sample(x, y, t))
                    .collect()
            }
        };
        Ok(AngleField { halfwidth: hw, cells })
    }

    pub fn halfwidth(&self) -> usize {
        self.halfwidth
    }

    pub fn cells(&self) -> &[(f64, f64)] {
        &self.cells
    }
}

fn check_step(state: &WalkState2D, field: &AngleField) -> Result<usize> {
    let halfwidth = state.halfwidth();
    let next = state.t() + 1;
    if next > halfwidth {
        return Err(Error::LightCone { next, halfwidth });
    }
    if field.halfwidth != halfwidth {
        return Err(Error::domain(format!(
            "angle field halfwidth {} does not match state halfwidth {halfwidth}",
            field.halfwidth
        )));
    }
    Ok(next)
}

/// One step by explicit operator composition: `S_x`, `B_y(ϑ)`, `S_y`, `B_x(θ)`.
pub fn step_2d(state: &WalkState2D, field: &AngleField) -> Result<WalkState2D> {
    let next = check_step(state, field)?;
    let side = state.side();
    let src = state.amps();
    let zero = Complex64::new(0.0, 0.0);

    // S_x: ψ↑ arrives from x+1, ψ↓ from x−1 (x is the slow index).
    let mut stage: Vec<Spinor> = (0..src.len())
        .map(|i| {
            let (ix, _) = (i / side, i % side);
            Spinor {
                up: if ix + 1 < side { src[i + side].up } else { zero },
                down: if ix > 0 { src[i - side].down } else { zero },
            }
        })
        .collect();

    // B_y(ϑ) in the σ₃ basis.
    for (s, &(_, vartheta)) in stage.iter_mut().zip(&field.cells) {
        let (sv, cv) = vartheta.sin_cos();
        *s = Spinor {
            up: s.up * cv - s.down * sv,
            down: s.up * sv + s.down * cv,
        };
    }

    // S_y in the σ₁ basis: |+⟩ arrives from y+1, |−⟩ from y−1.
    let plus = |s: &Spinor| (s.up + s.down) * FRAC_1_SQRT_2;
    let minus = |s: &Spinor| (s.up - s.down) * FRAC_1_SQRT_2;
    let shifted: Vec<Spinor> = (0..stage.len())
        .map(|i| {
            let iy = i % side;
            let p = if iy + 1 < side { plus(&stage[i + 1]) } else { zero };
            let m = if iy > 0 { minus(&stage[i - 1]) } else { zero };
            Spinor {
                up: (p + m) * FRAC_1_SQRT_2,
                down: (p - m) * FRAC_1_SQRT_2,
            }
        })
        .collect();
    stage = shifted;

    // B_x(θ).
    for (s, &(theta, _)) in stage.iter_mut().zip(&field.cells) {
        let (st, ct) = theta.sin_cos();
        *s = Spinor {
            up: s.up * ct + s.down * st,
            down: -s.up * st + s.down * ct,
        };
    }
    Ok(WalkState2D::from_parts(next, state.halfwidth(), stage))
}

/// One step by the direct four-neighbour update.
///
/// With `U± = ψ↑(x+1, y±1)`, `D± = ψ↓(x−1, y±1)`, θ taken at `(x, y)` and `ϑ±`
/// at `(x, y±1)`:
///
/// ```text
/// ψ↑' = ½[(cos(θ−ϑ₊) + sin(θ+ϑ₊)) U₊ + (cos(θ+ϑ₊) + sin(θ−ϑ₊)) D₊
///        − (cos(θ+ϑ₋) − sin(θ−ϑ₋)) D₋ + (cos(θ−ϑ₋) − sin(θ+ϑ₋)) U₋]
/// ψ↓' = ½[(cos(θ+ϑ₊) − sin(θ−ϑ₊)) U₊ + (cos(θ−ϑ₊) − sin(θ+ϑ₊)) D₊
///        + (cos(θ−ϑ₋) + sin(θ+ϑ₋)) D₋ − (cos(θ+ϑ₋) + sin(θ−ϑ₋)) U₋]
/// ```
pub fn step_2d_closed_form(state: &WalkState2D, field: &AngleField) -> Result<WalkState2D> {
    let next = check_step(state, field)?;
    let h = state.halfwidth() as i64;
    let side = state.side();
    let vartheta_at = |x: i64, y: i64| -> f64 {
        if (-h..=h).contains(&y) {
            field.cells[(x + h) as usize * side + (y + h) as usize].1
        } else {
            0.0
        }
    };
    let out = (0..side * side)
        .map(|i| {
            let (x, y) = state.position(i);
            let theta = field.cells[i].0;
            let (vp, vm) = (vartheta_at(x, y + 1), vartheta_at(x, y - 1));
            let up_p = state.at(x + 1, y + 1).up;
            let dn_p = state.at(x - 1, y + 1).down;
            let up_m = state.at(x + 1, y - 1).up;
            let dn_m = state.at(x - 1, y - 1).down;
            let (c, s) = (f64::cos, f64::sin);
            let up = up_p * (c(theta - vp) + s(theta + vp))
                + dn_p * (c(theta + vp) + s(theta - vp))
                - dn_m * (c(theta + vm) - s(theta - vm))
                + up_m * (c(theta - vm) - s(theta + vm));
            let down = up_p * (c(theta + vp) - s(theta - vp))
                + dn_p * (c(theta - vp) - s(theta + vp))
                + dn_m * (c(theta - vm) + s(theta + vm))
                - up_m * (c(theta + vm) + s(theta - vm));
            Spinor {
                up: up * 0.5,
                down: down * 0.5,
            }
        })
        .collect();
    Ok(WalkState2D::from_parts(next, state.halfwidth(), out))
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord2D {
    pub t: usize,
    pub norm: f64,
    pub distribution: Option<Distribution2D>,
    /// Radial standard deviation.
    pub sigma: Option<f64>,
    pub entropy: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Trajectory2D {
    pub records: Vec<StepRecord2D>,
    pub final_state: WalkState2D,
}

impl Trajectory2D {
    pub fn last(&self) -> &StepRecord2D {
        self.records.last().expect("a trajectory always holds the t = 0 record")
    }

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

fn record(state: &WalkState2D, flags: RecordFlags) -> Result<StepRecord2D> {
    let norm = total_norm(state);
    if !norm.is_finite() {
        return Err(Error::Invariant(format!("non-finite norm at t = {}", state.t())));
    }
    let dist = (flags.distribution || flags.sigma).then(|| position_distribution_2d(state));
    let sigma = match (&dist, flags.sigma) {
        (Some(d), true) => Some(radial_deviation(d)?),
        _ => None,
    };
    let entropy = if flags.entropy {
        Some(entanglement_entropy(&reduced_density(state))?)
    } else {
        None
    };
    Ok(StepRecord2D {
        t: state.t(),
        norm,
        distribution: dist.filter(|_| flags.distribution),
        sigma,
        entropy,
    })
}

/// Evolves the origin-localised `spec` for `steps` steps; lattice halfwidth is the schedule's.
pub fn run_2d(
    spec: &InitialSpec,
    schedule: &Schedule2D,
    steps: usize,
    flags: RecordFlags,
) -> Result<Trajectory2D> {
    if steps > schedule.steps() {
        return Err(Error::config(
            "steps",
            format!("{steps} exceeds the schedule's {} steps", schedule.steps()),
        ));
    }
    let mut state = make_initial_state_2d(spec, schedule.halfwidth())?;
    let mut records = Vec::with_capacity(steps + 1);
    records.push(record(&state, flags)?);
    let static_field = match schedule.kind() {
        DisorderKind::Uniform | DisorderKind::Spatial if steps > 0 => {
            Some(AngleField::from_schedule(schedule, 1)?)
        }
        _ => None,
    };
    for t in 1..=steps {
        state = match &static_field {
            Some(f) => step_2d(&state, f)?,
            None => step_2d(&state, &AngleField::from_schedule(schedule, t)?)?,
        };
        records.push(record(&state, flags)?);
    }
    Ok(Trajectory2D {
        records,
        final_state: state,
    })
}
