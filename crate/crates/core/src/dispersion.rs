//! Continuum-limit dispersion relations and group velocities.
//!
//! Every `ω` is the non-negative branch; `v_g` keeps the sign of its own
//! closed form. A mode is propagating when the radicand under `ω` is strictly
//! positive. Otherwise the velocities are `None`.

use std::f64::consts::{PI, SQRT_2};
use std::io::Write;

use crate::coins::{check_theta, CoinAngles};
use crate::disorder::{CoinSchedule, DisorderKind, MAX_HALFWIDTH};
use crate::{Error, Result};

/// Share of singular sites tolerated by [`effective_group_velocity`].
pub const MAX_SKIPPED_FRACTION: f64 = 0.1;

/// Largest accepted `|k|` for the uniform relations.
pub const K_MAX: f64 = SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DispersionPoint {
    pub k: f64,
    /// Zero when the mode is not propagating.
    pub omega: f64,
    pub v_p: Option<f64>,
    pub v_g: Option<f64>,
    pub propagating: bool,
}

impl DispersionPoint {
    fn evanescent(k: f64) -> Self {
        DispersionPoint {
            k,
            omega: 0.0,
            v_p: None,
            v_g: None,
            propagating: false,
        }
    }

    fn propagating(k: f64, omega: f64, v_g: f64) -> Self {
        DispersionPoint {
            k,
            omega,
            v_p: (k != 0.0).then(|| omega / k),
            v_g: Some(v_g),
            propagating: true,
        }
    }
}

fn check_k(k: f64) -> Result<()> {
    // A little slack so that grids ending on ±√2 survive rounding.
    if k.is_finite() && k.abs() <= K_MAX * (1.0 + 1e-12) {
        Ok(())
    } else {
        Err(Error::domain(format!("k = {k} outside [-√2, √2]")))
    }
}

/// `ω = √(k² cos θ + 2(1 − cos θ))`, `v_g = k cos θ / ω`.
pub fn omega_uniform(k: f64, theta: f64) -> Result<DispersionPoint> {
    check_k(k)?;
    check_theta("theta", theta)?;
    let c = theta.cos();
    let radicand = k * k * c + 2.0 * (1.0 - c);
    if radicand <= 0.0 {
        return Ok(DispersionPoint::evanescent(k));
    }
    let omega = radicand.sqrt();
    Ok(DispersionPoint::propagating(k, omega, k * c / omega))
}

/// SU(2) coin with `φ = ξ + ζ`:
/// `ω = √(cos θ cos φ (k² − 2) + 2(1 − k cos θ sin φ))`, `v_g = cos θ (k cos φ − sin φ) / ω`.
pub fn omega_su2(k: f64, theta: f64, phi: f64) -> Result<DispersionPoint> {
    check_k(k)?;
    check_theta("theta", theta)?;
    if !phi.is_finite() {
        return Err(Error::domain(format!("phi = {phi} is not finite")));
    }
    let c = theta.cos();
    let (sp, cp) = phi.sin_cos();
    // Grouped so that φ = 0 reproduces the uniform radicand bit for bit.
    let radicand = k * k * (c * cp) + 2.0 * (1.0 - c * cp) - 2.0 * k * c * sp;
    if radicand <= 0.0 {
        return Ok(DispersionPoint::evanescent(k));
    }
    let omega = radicand.sqrt();
    Ok(DispersionPoint::propagating(k, omega, k * cp * c / omega - sp * c / omega))
}

/// Exact lattice relation `cos ω = cos θ cos k`, `ω ∈ [0, π]`.
pub fn omega_lattice(k: f64, theta: f64) -> Result<f64> {
    check_theta("theta", theta)?;
    if !k.is_finite() {
        return Err(Error::domain(format!("k = {k} is not finite")));
    }
    Ok((theta.cos() * k.cos()).clamp(-1.0, 1.0).acos())
}

/// Which neighbour enters a site formula: `ψ↑` looks back (`x−1`, `t−1`), `ψ↓` forward.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Component {
    #[default]
    Up,
    Down,
}

impl Component {
    pub fn offset(self) -> i64 {
        match self {
            Component::Up => -1,
            Component::Down => 1,
        }
    }
}

fn neighbor_is_singular(theta: f64) -> bool {
    theta.sin().abs() < 1e-12
}

/// Per-site data of a single-parameter disordered walk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DisorderSiteParams {
    pub theta_here: f64,
    pub theta_neighbor: f64,
    /// `1 + sin θ_here (csc θ_nb − cot θ_nb) − cos θ_here`.
    pub a: f64,
}

impl DisorderSiteParams {
    pub fn new(theta_here: f64, theta_neighbor: f64) -> Result<Self> {
        check_theta("theta_here", theta_here)?;
        check_theta("theta_neighbor", theta_neighbor)?;
        if neighbor_is_singular(theta_neighbor) {
            return Err(Error::domain(format!(
                "neighbour angle {theta_neighbor} makes csc/cot singular"
            )));
        }
        // csc − cot = tan(θ/2), which avoids cancelling two large terms near 0.
        let a = 1.0 + theta_here.sin() * (theta_neighbor / 2.0).tan() - theta_here.cos();
        Ok(DisorderSiteParams {
            theta_here,
            theta_neighbor,
            a,
        })
    }

    /// `ω = √(k² cos θ_here + A)`.
    pub fn dispersion(&self, k: f64) -> DispersionPoint {
        let c = self.theta_here.cos();
        let radicand = k * k * c + self.a;
        if radicand <= 0.0 {
            return DispersionPoint::evanescent(k);
        }
        let omega = radicand.sqrt();
        DispersionPoint::propagating(k, omega, k * c / omega)
    }
}

/// `v_g = k cos θ_here / √(k² cos θ_here + A)`; `None` when not propagating.
///
/// `|v_g| ≤ 1` holds for `|k| ≤ 1`; beyond that it is not guaranteed.
pub fn site_group_velocity(params: &DisorderSiteParams, k: f64) -> Result<Option<f64>> {
    if !k.is_finite() {
        return Err(Error::domain(format!("k = {k} is not finite")));
    }
    Ok(params.dispersion(k).v_g)
}

/// Coefficients `(G, F, Q, J)` of the SU(2) spatial-disorder quadratic
/// `ω² − Gω − (k²F + kQ + J) = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2SpatialCoeffs {
    pub g: f64,
    pub f: f64,
    pub q: f64,
    pub j: f64,
}

impl Su2SpatialCoeffs {
    /// Built from the site's angles and those of its `x − 1` neighbour.
    pub fn new(here: &CoinAngles, prev: &CoinAngles) -> Result<Self> {
        check_theta("theta_here", here.theta)?;
        check_theta("theta_neighbor", prev.theta)?;
        if neighbor_is_singular(prev.theta) {
            return Err(Error::domain(format!(
                "neighbour angle {} makes cot singular",
                prev.theta
            )));
        }
        let (st, ct) = here.theta.sin_cos();
        let (sp, cp) = prev.theta.sin_cos();
        let cot_p = cp / sp;
        let twist = prev.xi - prev.zeta - here.xi + here.zeta;
        let triple = 3.0 * prev.zeta + here.xi - here.zeta + prev.xi;
        let double = 2.0 * prev.zeta + here.xi - here.zeta;
        let phi = here.xi + here.zeta;
        Ok(Su2SpatialCoeffs {
            g: st * (twist.sin() * sp + triple.sin() * cp * cot_p),
            f: phi.cos() * ct,
            q: -double.sin() * cot_p * st + phi.sin() * ct,
            j: 1.0 + st * (twist.cos() * sp + triple.cos() * cp * cot_p)
                - double.cos() * cot_p * st
                - phi.cos() * ct,
        })
    }

    pub fn discriminant(&self, k: f64) -> f64 {
        self.g * self.g + 4.0 * (k * k * self.f + k * self.q + self.j)
    }
}

/// `ω = ½[G + √Δ]` with `Δ = G² + 4(k²F + kQ + J)`, and `v_g = dω/dk = (2kF + Q)/√Δ`.
pub fn su2_spatial_dispersion(coeffs: &Su2SpatialCoeffs, k: f64) -> Result<DispersionPoint> {
    if !k.is_finite() {
        return Err(Error::domain(format!("k = {k} is not finite")));
    }
    let disc = coeffs.discriminant(k);
    if disc <= 0.0 {
        return Ok(DispersionPoint::evanescent(k));
    }
    let root = disc.sqrt();
    let omega = 0.5 * (coeffs.g + root);
    Ok(DispersionPoint::propagating(
        k,
        omega,
        (2.0 * k * coeffs.f + coeffs.q) / root,
    ))
}

/// Disorder-averaged group velocity and its bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveVelocity {
    pub value: f64,
    /// Sites that entered the mean (evanescent ones included, as zeros).
    pub sites: usize,
    /// Sites dropped because their neighbour angle is singular.
    pub skipped: usize,
    pub evanescent: usize,
}

#[derive(Default)]
struct Mean {
    value: f64,
    sum: f64,
    sites: usize,
    skipped: usize,
    evanescent: usize,
}

impl Mean {
    // Running mean, so a constant input averages to itself exactly.
    fn push(&mut self, v: f64) {
        self.sites += 1;
        self.sum += v;
        self.value += (v - self.value) / self.sites as f64;
    }

    fn push_site(&mut self, site: Result<Option<f64>>) {
        match site {
            Ok(Some(v)) => self.push(v),
            Ok(None) => {
                self.evanescent += 1;
                self.push(0.0);
            }
            Err(_) => self.skipped += 1,
        }
    }

    fn finish(self) -> Result<EffectiveVelocity> {
        let total = self.sites + self.skipped;
        if self.sites == 0 || self.skipped as f64 > MAX_SKIPPED_FRACTION * total as f64 {
            return Err(Error::domain(format!(
                "{} of {total} sites have singular neighbour angles",
                self.skipped
            )));
        }
        Ok(EffectiveVelocity {
            value: self.value,
            sites: self.sites,
            skipped: self.skipped,
            evanescent: self.evanescent,
        })
    }
}

fn site_velocity(here: &CoinAngles, neighbor: &CoinAngles, k: f64, su2: bool) -> Result<Option<f64>> {
    if su2 {
        let coeffs = Su2SpatialCoeffs::new(here, neighbor)?;
        Ok(su2_spatial_dispersion(&coeffs, k)?.v_g)
    } else {
        site_group_velocity(&DisorderSiteParams::new(here.theta, neighbor.theta)?, k)
    }
}

fn velocity_at(schedule: &CoinSchedule, x: i64, t: usize, k: f64, component: Component) -> Result<Option<f64>> {
    let d = component.offset();
    let (nx, nt) = match schedule.kind() {
        DisorderKind::Uniform => (x, t),
        DisorderKind::Spatial => (x + d, t),
        DisorderKind::Temporal => (x, t.saturating_add_signed(d as isize)),
        DisorderKind::SpatioTemporal => (x + d, t.saturating_add_signed(d as isize)),
    };
    let su2 = schedule.spec().su2;
    site_velocity(&schedule.sample(x, t), &schedule.sample(nx, nt), k, su2)
}

/// Mean over `x ∈ [−half, half]` at step `t`.
fn window_mean(schedule: &CoinSchedule, k: f64, half: usize, t: usize, component: Component) -> Mean {
    let mut mean = Mean::default();
    let h = half as i64;
    for x in -h..=h {
        mean.push_site(velocity_at(schedule, x, t, k, component));
    }
    mean
}

fn check_horizon(k: f64, t: usize) -> Result<()> {
    if t == 0 {
        return Err(Error::domain("effective velocity needs t ≥ 1"));
    }
    if t > MAX_HALFWIDTH {
        return Err(Error::domain(format!("t = {t} exceeds the sampled lattice ({MAX_HALFWIDTH})")));
    }
    if !k.is_finite() {
        return Err(Error::domain(format!("k = {k} is not finite")));
    }
    Ok(())
}

/// Spatio-temporal per-step means for `τ = 1..=t`, with the site counts summed.
fn st_means(schedule: &CoinSchedule, k: f64, t: usize, component: Component) -> Result<(Mean, EffectiveVelocity)> {
    let mut outer = Mean::default();
    let mut counts = EffectiveVelocity {
        value: 0.0,
        sites: 0,
        skipped: 0,
        evanescent: 0,
    };
    for tau in 1..=t {
        let inner = window_mean(schedule, k, tau, tau, component).finish()?;
        counts.sites += inner.sites;
        counts.skipped += inner.skipped;
        counts.evanescent += inner.evanescent;
        outer.push(inner.value);
    }
    counts.value = outer.value;
    Ok((outer, counts))
}

/// Group velocity averaged over the cells a `t`-step walk visits.
///
/// Spatial: mean over `x ∈ [−t, t]`. Temporal: mean over steps `1..=t`.
/// Spatio-temporal: for each step `τ` the mean over `x ∈ [−τ, τ]`, then the
/// mean over `τ`. A uniform schedule averages its single site formula.
/// SU(2) schedules use the SU(2) spatial-disorder coefficients per site.
///
/// The schedule is sampled as a pure function of the cell, so `t` may exceed
/// the schedule's own step count.
pub fn effective_group_velocity(
    schedule: &CoinSchedule,
    k: f64,
    t: usize,
    component: Component,
) -> Result<EffectiveVelocity> {
    check_horizon(k, t)?;
    match schedule.kind() {
        DisorderKind::Uniform => window_mean(schedule, k, 0, 1, component).finish(),
        DisorderKind::Spatial => grow_window(schedule, k, t, component, |_| ()).finish(),
        DisorderKind::Temporal => {
            let mut mean = Mean::default();
            for tau in 1..=t {
                mean.push_site(velocity_at(schedule, 0, tau, k, component));
            }
            mean.finish()
        }
        DisorderKind::SpatioTemporal => Ok(st_means(schedule, k, t, component)?.1),
    }
}

/// Wave-packet spread `D(t)` accumulated over steps `1..=t`.
///
/// Uniform: `t·|v_g|` from the uniform (or SU(2)) closed form. Spatial: the sum
/// of the spatial means over `[−τ, τ]`. Temporal: the sum of per-step site
/// velocities. Spatio-temporal: the sum of per-step spatial means. The
/// disordered sums are signed.
pub fn spread_estimate(schedule: &CoinSchedule, k: f64, t: usize, component: Component) -> Result<f64> {
    if t == 0 {
        return Ok(0.0);
    }
    if schedule.kind() == DisorderKind::Uniform {
        check_horizon(k, t)?;
        return uniform_spread(schedule, k, t);
    }
    Ok(velocity_and_spread(schedule, k, t, component)?.1)
}

fn uniform_spread(schedule: &CoinSchedule, k: f64, t: usize) -> Result<f64> {
    let base = schedule.sample(0, 1);
    let point = if schedule.spec().su2 {
        omega_su2(k, base.theta, base.phi())?
    } else {
        omega_uniform(k, base.theta)?
    };
    Ok(t as f64 * point.v_g.unwrap_or(0.0).abs())
}

/// Spatial mean over `[−t, t]`, grown outward from the origin two sites per
/// step; `each` sees the running mean after every step.
fn grow_window(schedule: &CoinSchedule, k: f64, t: usize, component: Component, mut each: impl FnMut(f64)) -> Mean {
    let mut mean = Mean::default();
    mean.push_site(velocity_at(schedule, 0, 1, k, component));
    for tau in 1..=t as i64 {
        mean.push_site(velocity_at(schedule, -tau, 1, k, component));
        mean.push_site(velocity_at(schedule, tau, 1, k, component));
        each(mean.value);
    }
    mean
}

/// [`effective_group_velocity`] and [`spread_estimate`] from a single pass over the cells.
pub fn velocity_and_spread(
    schedule: &CoinSchedule,
    k: f64,
    t: usize,
    component: Component,
) -> Result<(EffectiveVelocity, f64)> {
    check_horizon(k, t)?;
    match schedule.kind() {
        DisorderKind::Uniform => Ok((
            effective_group_velocity(schedule, k, t, component)?,
            uniform_spread(schedule, k, t)?,
        )),
        DisorderKind::Spatial => {
            let mut total = 0.0;
            let mean = grow_window(schedule, k, t, component, |m| total += m);
            Ok((mean.finish()?, total))
        }
        DisorderKind::Temporal => {
            let mut mean = Mean::default();
            for tau in 1..=t {
                mean.push_site(velocity_at(schedule, 0, tau, k, component));
            }
            let total = mean.sum;
            Ok((mean.finish()?, total))
        }
        DisorderKind::SpatioTemporal => {
            let (outer, counts) = st_means(schedule, k, t, component)?;
            Ok((counts, outer.sum))
        }
    }
}

/// One row of a dispersion grid sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub phi: f64,
    pub point: DispersionPoint,
}

/// `ω(k, θ, φ)` over the full Cartesian grid, `k` fastest.
pub fn dispersion_sweep(ks: &[f64], thetas: &[f64], phis: &[f64]) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(ks.len() * thetas.len() * phis.len());
    for &phi in phis {
        for &theta in thetas {
            for &k in ks {
                let point = if phi == 0.0 {
                    omega_uniform(k, theta)?
                } else {
                    omega_su2(k, theta, phi)?
                };
                rows.push(SweepRow { theta, phi, point });
            }
        }
    }
    Ok(rows)
}

/// `n` evenly spaced points on `[lo, hi]` (both ends included).
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|v| format!("{:.16e}", v + 0.0)).unwrap_or_default()
}

/// CSV `k,theta,phi,omega,v_p,v_g,propagating`; undefined values are empty fields.
pub fn write_sweep_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> Result<()> {
    writeln!(w, "k,theta,phi,omega,v_p,v_g,propagating")?;
    for r in rows {
        let p = &r.point;
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{},{},{},{}",
            p.k + 0.0,
            r.theta + 0.0,
            r.phi + 0.0,
            fmt_opt(p.propagating.then_some(p.omega)),
            fmt_opt(p.v_p),
            fmt_opt(p.v_g),
            p.propagating
        )?;
    }
    Ok(())
}

/// Grid used by the bound checks: `n × n` points over `k ∈ [−√2, √2]`, `θ ∈ [0, π]`.
pub fn standard_grid(n: usize) -> (Vec<f64>, Vec<f64>) {
    (linspace(-K_MAX, K_MAX, n), linspace(0.0, PI, n))
}
