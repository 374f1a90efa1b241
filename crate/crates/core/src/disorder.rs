//! Seeded coin schedules for uniform, spatial, temporal and spatio-temporal disorder.
//!
//! # Sampling rule
//!
//! Schedules are stateless: the angles of a cell are a pure function of
//! `(seed, kind, cell)`, so any cell can be looked up in any order without
//! materialising a table. The generator is ChaCha8 (`rand_chacha`) keyed with
//! `seed_from_u64(seed)`, with the stream id set to `(dimension << 8) | kind tag`.
//! Cell `(x, y, t)` owns the eight 32-bit words starting at word position
//! `8 · ((t << 42) | (zigzag(x) << 21) | zigzag(y))`, read as four `u64`s:
//!
//! | word | 1D use | 2D use |
//! |------|--------|--------|
//! | 0 | disorder mask | disorder mask |
//! | 1 | θ | θ |
//! | 2 | ξ (SU(2) only) | ϑ |
//! | 3 | ζ (SU(2) only) | unused |
//!
//! A `u64` maps to `[0, 1)` as `(u >> 11) · 2⁻⁵³`. A cell is disordered when its
//! mask draw is below `fraction`; θ and ϑ are that draw times π, ξ and ζ times 2π.
//! Ordered cells take the base angles with `ξ = ζ = 0`.
//!
//! Spatial schedules address cell `(x, 0, 0)`, temporal ones `(0, 0, t)`,
//! spatio-temporal ones `(x, 0, t)` (1D) or `(x, y, t)` (2D). The documented
//! iteration orders (spatial: x from −T to T; temporal: t from 1 to steps;
//! spatio-temporal: t-major then x) are therefore only the order of
//! [`CoinSchedule::write_csv`]; they do not influence the values.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coins::CoinAngles;
use crate::{Error, Result};

/// Largest supported lattice halfwidth.
pub const MAX_HALFWIDTH: usize = 1 << 19;
/// Largest supported step count.
pub const MAX_STEPS: usize = 1 << 21;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisorderKind {
    Uniform,
    Spatial,
    Temporal,
    SpatioTemporal,
}

impl DisorderKind {
    pub const ALL: [DisorderKind; 4] = [
        DisorderKind::Uniform,
        DisorderKind::Spatial,
        DisorderKind::Temporal,
        DisorderKind::SpatioTemporal,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            DisorderKind::Uniform => "uniform",
            DisorderKind::Spatial => "spatial",
            DisorderKind::Temporal => "temporal",
            DisorderKind::SpatioTemporal => "spatio_temporal",
        }
    }

    fn tag(&self) -> u64 {
        match self {
            DisorderKind::Uniform => 0,
            DisorderKind::Spatial => 1,
            DisorderKind::Temporal => 2,
            DisorderKind::SpatioTemporal => 3,
        }
    }

    pub fn varies_in_space(&self) -> bool {
        matches!(self, DisorderKind::Spatial | DisorderKind::SpatioTemporal)
    }

    pub fn varies_in_time(&self) -> bool {
        matches!(self, DisorderKind::Temporal | DisorderKind::SpatioTemporal)
    }
}

impl fmt::Display for DisorderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for DisorderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "uniform" | "standard" => Ok(DisorderKind::Uniform),
            "spatial" | "sd" => Ok(DisorderKind::Spatial),
            "temporal" | "td" => Ok(DisorderKind::Temporal),
            "spatio_temporal" | "std" | "s_td" => Ok(DisorderKind::SpatioTemporal),
            other => Err(Error::domain(format!("unknown disorder kind `{other}`"))),
        }
    }
}

#[inline]
fn zigzag(v: i64) -> u64 {
    ((v << 1) ^ (v >> 63)) as u64
}

#[inline]
fn unit_interval(u: u64) -> f64 {
    (u >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Random access into one ChaCha8 stream, eight words per cell.
#[derive(Clone, Debug)]
struct CellSampler {
    proto: ChaCha8Rng,
}

impl CellSampler {
    fn new(seed: u64, stream: u64) -> Self {
        let mut proto = ChaCha8Rng::seed_from_u64(seed);
        proto.set_stream(stream);
        CellSampler { proto }
    }

    fn draw(&self, x: i64, y: i64, t: u64) -> [f64; 4] {
        let cell = (t << 42) | (zigzag(x) << 21) | zigzag(y);
        let mut rng = self.proto.clone();
        rng.set_word_pos(u128::from(cell) * 8);
        std::array::from_fn(|_| unit_interval(rng.next_u64()))
    }
}

/// Parameters of a 1D coin schedule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    pub kind: DisorderKind,
    /// θ of ordered cells.
    #[serde(default = "default_base_theta")]
    pub base_theta: f64,
    /// Probability that a cell is disordered.
    #[serde(default = "one")]
    pub fraction: f64,
    /// Draw full Euler triples for disordered cells instead of θ alone.
    #[serde(default)]
    pub su2: bool,
    #[serde(default)]
    pub seed: u64,
    pub steps: usize,
    pub halfwidth: usize,
}

fn default_base_theta() -> f64 {
    FRAC_PI_4
}

fn one() -> f64 {
    1.0
}

impl ScheduleSpec {
    /// Fully disordered schedule with base θ = π/4 and `halfwidth = steps`.
    pub fn new(kind: DisorderKind, seed: u64, steps: usize) -> Self {
        ScheduleSpec {
            kind,
            base_theta: FRAC_PI_4,
            fraction: 1.0,
            su2: false,
            seed,
            steps,
            halfwidth: steps,
        }
    }

    pub fn uniform(theta: f64, steps: usize) -> Self {
        ScheduleSpec {
            base_theta: theta,
            ..ScheduleSpec::new(DisorderKind::Uniform, 0, steps)
        }
    }

    pub fn with_fraction(mut self, fraction: f64) -> Self {
        self.fraction = fraction;
        self
    }

    pub fn with_su2(mut self, su2: bool) -> Self {
        self.su2 = su2;
        self
    }

    pub fn with_halfwidth(mut self, halfwidth: usize) -> Self {
        self.halfwidth = halfwidth;
        self
    }

    pub fn validate(&self) -> Result<()> {
        validate_common(
            self.fraction,
            self.steps,
            self.halfwidth,
            &[("base_theta", self.base_theta)],
        )
    }
}

fn validate_common(
    fraction: f64,
    steps: usize,
    halfwidth: usize,
    bases: &[(&str, f64)],
) -> Result<()> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::config("fraction", format!("{fraction} outside [0, 1]")));
    }
    if steps < 1 {
        return Err(Error::config("steps", "must be at least 1"));
    }
    if steps > MAX_STEPS {
        return Err(Error::config("steps", format!("must not exceed {MAX_STEPS}")));
    }
    if halfwidth < steps {
        return Err(Error::config(
            "halfwidth",
            format!("{halfwidth} is smaller than steps = {steps}"),
        ));
    }
    if halfwidth > MAX_HALFWIDTH {
        return Err(Error::config(
            "halfwidth",
            format!("must not exceed {MAX_HALFWIDTH}"),
        ));
    }
    for (name, v) in bases {
        if !(0.0..=PI).contains(v) {
            return Err(Error::config(*name, format!("{v} outside [0, π]")));
        }
    }
    Ok(())
}

/// An immutable 1D coin schedule.
#[derive(Clone, Debug)]
pub struct CoinSchedule {
    spec: ScheduleSpec,
    sampler: CellSampler,
}

pub fn build_schedule(spec: &ScheduleSpec) -> Result<CoinSchedule> {
    spec.validate()?;
    Ok(CoinSchedule {
        spec: spec.clone(),
        sampler: CellSampler::new(spec.seed, (1 << 8) | spec.kind.tag()),
    })
}

impl CoinSchedule {
    pub fn spec(&self) -> &ScheduleSpec {
        &self.spec
    }

    pub fn kind(&self) -> DisorderKind {
        self.spec.kind
    }

    pub fn steps(&self) -> usize {
        self.spec.steps
    }

    pub fn halfwidth(&self) -> usize {
        self.spec.halfwidth
    }

    fn base(&self) -> CoinAngles {
        CoinAngles::theta_only(self.spec.base_theta)
    }

    /// The schedule's generating function, total over all `(x, t)`.
    ///
    /// [`CoinSchedule::angles_at`] is the domain-checked lookup; this form is
    /// used where neighbouring cells just outside the evolution domain are
    /// needed (dispersion averages).
    pub fn sample(&self, x: i64, t: usize) -> CoinAngles {
        let (cx, ct) = match self.spec.kind {
            DisorderKind::Uniform => return self.base(),
            DisorderKind::Spatial => (x, 0),
            DisorderKind::Temporal => (0, t as u64),
            DisorderKind::SpatioTemporal => (x, t as u64),
        };
        let [mask, theta, xi, zeta] = self.sampler.draw(cx, 0, ct);
        if mask >= self.spec.fraction {
            return self.base();
        }
        if self.spec.su2 {
            CoinAngles {
                xi: xi * 2.0 * PI,
                theta: theta * PI,
                zeta: zeta * 2.0 * PI,
            }
        } else {
            CoinAngles::theta_only(theta * PI)
        }
    }

    /// Whether `(x, t)` is a disordered cell.
    pub fn is_disordered(&self, x: i64, t: usize) -> bool {
        let (cx, ct) = match self.spec.kind {
            DisorderKind::Uniform => return false,
            DisorderKind::Spatial => (x, 0),
            DisorderKind::Temporal => (0, t as u64),
            DisorderKind::SpatioTemporal => (x, t as u64),
        };
        self.sampler.draw(cx, 0, ct)[0] < self.spec.fraction
    }

    /// Angles of the coin applied at site `x` during step `t` (`1 ≤ t ≤ steps`, `|x| ≤ T`).
    pub fn angles_at(&self, x: i64, t: usize) -> Result<CoinAngles> {
        let hw = self.spec.halfwidth as i64;
        if !(-hw..=hw).contains(&x) {
            return Err(Error::domain(format!("x = {x} outside ±{hw}")));
        }
        if !(1..=self.spec.steps).contains(&t) {
            return Err(Error::domain(format!(
                "t = {t} outside 1..={}",
                self.spec.steps
            )));
        }
        Ok(self.sample(x, t))
    }

    /// Angles for every site `x = −T..=T` at step `t`.
    pub fn row(&self, t: usize) -> Result<Vec<CoinAngles>> {
        if !(1..=self.spec.steps).contains(&t) {
            return Err(Error::domain(format!(
                "t = {t} outside 1..={}",
                self.spec.steps
            )));
        }
        let hw = self.spec.halfwidth as i64;
        Ok(match self.spec.kind {
            DisorderKind::Uniform | DisorderKind::Temporal => {
                vec![self.sample(0, t); 2 * self.spec.halfwidth + 1]
            }
            _ => (-hw..=hw).map(|x| self.sample(x, t)).collect(),
        })
    }

    /// Audit dump with header `axis_value,xi,theta,zeta` (radians, 17 significant digits).
    ///
    /// Uniform and spatial schedules list `x = −T..=T`; temporal schedules list
    /// `t = 1..=steps`. Spatio-temporal schedules list `x` once per step, each
    /// block preceded by a `# t=<t>` comment line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "axis_value,xi,theta,zeta")?;
        let hw = self.spec.halfwidth as i64;
        let row = |w: &mut W, axis: i64, a: CoinAngles| -> std::io::Result<()> {
            writeln!(w, "{axis},{:.16e},{:.16e},{:.16e}", a.xi, a.theta, a.zeta)
        };
        match self.spec.kind {
            DisorderKind::Uniform | DisorderKind::Spatial => {
                for x in -hw..=hw {
                    row(&mut w, x, self.sample(x, 1))?;
                }
            }
            DisorderKind::Temporal => {
                for t in 1..=self.spec.steps {
                    row(&mut w, t as i64, self.sample(0, t))?;
                }
            }
            DisorderKind::SpatioTemporal => {
                for t in 1..=self.spec.steps {
                    writeln!(w, "# t={t}")?;
                    for x in -hw..=hw {
                        row(&mut w, x, self.sample(x, t))?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parameters of a 2D schedule of `(θ, ϑ)` pairs; θ and ϑ are drawn independently.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule2DSpec {
    pub kind: DisorderKind,
    #[serde(default)]
    pub base_theta: f64,
    #[serde(default)]
    pub base_vartheta: f64,
    #[serde(default = "one")]
    pub fraction: f64,
    #[serde(default)]
    pub seed: u64,
    pub steps: usize,
    pub halfwidth: usize,
}

impl Schedule2DSpec {
    /// Fully disordered schedule around the coinless walk (θ = ϑ = 0), `halfwidth = steps`.
    pub fn new(kind: DisorderKind, seed: u64, steps: usize) -> Self {
        Schedule2DSpec {
            kind,
            base_theta: 0.0,
            base_vartheta: 0.0,
            fraction: 1.0,
            seed,
            steps,
            halfwidth: steps,
        }
    }

    pub fn uniform(theta: f64, vartheta: f64, steps: usize) -> Self {
        Schedule2DSpec {
            base_theta: theta,
            base_vartheta: vartheta,
            ..Schedule2DSpec::new(DisorderKind::Uniform, 0, steps)
        }
    }

    pub fn with_fraction(mut self, fraction: f64) -> Self {
        self.fraction = fraction;
        self
    }

    pub fn validate(&self) -> Result<()> {
        validate_common(
            self.fraction,
            self.steps,
            self.halfwidth,
            &[
                ("base_theta", self.base_theta),
                ("base_vartheta", self.base_vartheta),
            ],
        )
    }
}

#[derive(Clone, Debug)]
pub struct Schedule2D {
    spec: Schedule2DSpec,
    sampler: CellSampler,
}

pub fn build_schedule_2d(spec: &Schedule2DSpec) -> Result<Schedule2D> {
    spec.validate()?;
    Ok(Schedule2D {
        spec: spec.clone(),
        sampler: CellSampler::new(spec.seed, (2 << 8) | spec.kind.tag()),
    })
}

impl Schedule2D {
    pub fn spec(&self) -> &Schedule2DSpec {
        &self.spec
    }

    pub fn kind(&self) -> DisorderKind {
        self.spec.kind
    }

    pub fn steps(&self) -> usize {
        self.spec.steps
    }

    pub fn halfwidth(&self) -> usize {
        self.spec.halfwidth
    }

    /// `(θ, ϑ)` for any `(x, y, t)`; see [`CoinSchedule::sample`].
    pub fn sample(&self, x: i64, y: i64, t: usize) -> (f64, f64) {
        let base = (self.spec.base_theta, self.spec.base_vartheta);
        let (cx, cy, ct) = match self.spec.kind {
            DisorderKind::Uniform => return base,
            DisorderKind::Spatial => (x, y, 0),
            DisorderKind::Temporal => (0, 0, t as u64),
            DisorderKind::SpatioTemporal => (x, y, t as u64),
        };
        let [mask, theta, vartheta, _] = self.sampler.draw(cx, cy, ct);
        if mask >= self.spec.fraction {
            base
        } else {
            (theta * PI, vartheta * PI)
        }
    }

    pub fn angles_at(&self, x: i64, y: i64, t: usize) -> Result<(f64, f64)> {
        let hw = self.spec.halfwidth as i64;
        if !(-hw..=hw).contains(&x) || !(-hw..=hw).contains(&y) {
            return Err(Error::domain(format!("({x}, {y}) outside ±{hw}")));
        }
        if !(1..=self.spec.steps).contains(&t) {
            return Err(Error::domain(format!(
                "t = {t} outside 1..={}",
                self.spec.steps
            )));
        }
        Ok(self.sample(x, y, t))
    }
}
