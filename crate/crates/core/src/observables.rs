//! Position distributions, spreads, and particle–position entanglement.

use num_complex::Complex64;

use crate::state::{Spinor, WalkState, WalkState1D, WalkState2D};
use crate::{Error, Result};

/// Tolerance on `Σ P - 1` accepted by the spread functions.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;
/// Tolerance used for every [`ReducedDensity`] invariant.
pub const DENSITY_TOLERANCE: f64 = 1e-12;

/// `P(x)` on `-T..=T`.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution1D {
    halfwidth: usize,
    probs: Vec<f64>,
}

impl Distribution1D {
    pub fn new(halfwidth: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 2 * halfwidth + 1 {
            return Err(Error::domain(format!(
                "expected {} probabilities, got {}",
                2 * halfwidth + 1,
                probs.len()
            )));
        }
        Ok(Distribution1D { halfwidth, probs })
    }

    pub fn halfwidth(&self) -> usize {
        self.halfwidth
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, x: i64) -> f64 {
        let t = self.halfwidth as i64;
        if (-t..=t).contains(&x) {
            self.probs[(x + t) as usize]
        } else {
            0.0
        }
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `(x, P(x))` pairs in increasing `x`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let t = self.halfwidth as i64;
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (i as i64 - t, p))
    }
}

/// `P(x, y)` on the square `-T..=T`², `x` major.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution2D {
    halfwidth: usize,
    probs: Vec<f64>,
}

impl Distribution2D {
    pub fn new(halfwidth: usize, probs: Vec<f64>) -> Result<Self> {
        let side = 2 * halfwidth + 1;
        if probs.len() != side * side {
            return Err(Error::domain(format!(
                "expected {} probabilities, got {}",
                side * side,
                probs.len()
            )));
        }
        Ok(Distribution2D { halfwidth, probs })
    }

    pub fn halfwidth(&self) -> usize {
        self.halfwidth
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, x: i64, y: i64) -> f64 {
        let t = self.halfwidth as i64;
        if (-t..=t).contains(&x) && (-t..=t).contains(&y) {
            let side = 2 * self.halfwidth + 1;
            self.probs[(x + t) as usize * side + (y + t) as usize]
        } else {
            0.0
        }
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `(x, y, P)` triples, `x` major.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, f64)> + '_ {
        let side = 2 * self.halfwidth + 1;
        let t = self.halfwidth as i64;
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| ((i / side) as i64 - t, (i % side) as i64 - t, p))
    }

    /// Marginal over `y`.
    pub fn x_marginal(&self) -> Distribution1D {
        let side = 2 * self.halfwidth + 1;
        let probs = self.probs.chunks(side).map(|row| row.iter().sum()).collect();
        Distribution1D {
            halfwidth: self.halfwidth,
            probs,
        }
    }
}

pub fn position_distribution_1d(state: &WalkState1D) -> Distribution1D {
    Distribution1D {
        halfwidth: state.halfwidth(),
        probs: state.amps().iter().map(Spinor::norm_sqr).collect(),
    }
}

pub fn position_distribution_2d(state: &WalkState2D) -> Distribution2D {
    Distribution2D {
        halfwidth: state.halfwidth(),
        probs: state.amps().iter().map(Spinor::norm_sqr).collect(),
    }
}

fn check_normalised(total: f64) -> Result<()> {
    if (total - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        Err(Error::domain(format!("distribution sums to {total}, not 1")))
    } else {
        Ok(())
    }
}

/// `sqrt(Σx²P − (ΣxP)²)`.
pub fn standard_deviation(dist: &Distribution1D) -> Result<f64> {
    check_normalised(dist.total())?;
    let (m1, m2) = dist.iter().fold((0.0, 0.0), |(m1, m2), (x, p)| {
        let x = x as f64;
        (m1 + x * p, m2 + x * x * p)
    });
    Ok((m2 - m1 * m1).max(0.0).sqrt())
}

/// Radial spread `sqrt(E[x² + y²] − E[x]² − E[y]²)`.
pub fn radial_deviation(dist: &Distribution2D) -> Result<f64> {
    check_normalised(dist.total())?;
    let (mx, my, m2) = dist
        .iter()
        .fold((0.0, 0.0, 0.0), |(mx, my, m2), (x, y, p)| {
            let (x, y) = (x as f64, y as f64);
            (mx + x * p, my + y * p, m2 + (x * x + y * y) * p)
        });
    Ok((m2 - mx * mx - my * my).max(0.0).sqrt())
}

/// Coin-space density matrix `ρ_c` after tracing out position.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedDensity {
    pub m: [[Complex64; 2]; 2],
}

impl ReducedDensity {
    pub fn new(m: [[Complex64; 2]; 2]) -> Self {
        ReducedDensity { m }
    }

    /// `|χ⟩⟨χ|` for a single spinor.
    pub fn pure(chi: &Spinor) -> Self {
        let mut rho = ReducedDensity::new([[Complex64::new(0.0, 0.0); 2]; 2]);
        rho.accumulate(chi);
        rho
    }

    fn accumulate(&mut self, chi: &Spinor) {
        let (a, b) = (chi.up, chi.down);
        self.m[0][0] += a * a.conj();
        self.m[0][1] += a * b.conj();
        self.m[1][0] += b * a.conj();
        self.m[1][1] += b * b.conj();
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    /// Largest deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        self.m[0][0]
            .im
            .abs()
            .max(self.m[1][1].im.abs())
            .max((self.m[0][1] - self.m[1][0].conj()).norm())
    }

    /// Eigenvalues `tr/2 ± sqrt((Δ/2)² + |ρ₁₂|²)` in descending order, `Δ = ρ₁₁ − ρ₂₂`.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let half_trace = 0.5 * (self.m[0][0].re + self.m[1][1].re);
        let half_delta = 0.5 * (self.m[0][0].re - self.m[1][1].re);
        let r = half_delta.hypot(self.m[0][1].norm());
        [half_trace + r, half_trace - r]
    }

    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > DENSITY_TOLERANCE {
            return Err(Error::domain(format!("ρ_c not Hermitian (error {herm:e})")));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOLERANCE || tr.im.abs() > DENSITY_TOLERANCE {
            return Err(Error::domain(format!("tr ρ_c = {tr}, not 1")));
        }
        for l in self.eigenvalues() {
            if !(-DENSITY_TOLERANCE..=1.0 + DENSITY_TOLERANCE).contains(&l) {
                return Err(Error::domain(format!("eigenvalue {l} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// `ρ_c = Σ_site |χ(site)⟩⟨χ(site)|`.
pub fn reduced_density<S: WalkState + ?Sized>(state: &S) -> ReducedDensity {
    reduced_density_of(state.spinors())
}

pub fn reduced_density_of<'a>(spinors: impl IntoIterator<Item = &'a Spinor>) -> ReducedDensity {
    let mut rho = ReducedDensity::new([[Complex64::new(0.0, 0.0); 2]; 2]);
    for chi in spinors {
        rho.accumulate(chi);
    }
    rho
}

/// Von Neumann entropy of `ρ_c` in bits, `−Σ λ log₂ λ` with `0 log 0 = 0`.
pub fn entanglement_entropy(rho: &ReducedDensity) -> Result<f64> {
    rho.validate()?;
    Ok(rho
        .eigenvalues()
        .iter()
        .map(|l| l.clamp(0.0, 1.0))
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum())
}

/// Entropy of a state's reduced coin density.
pub fn state_entropy<S: WalkState + ?Sized>(state: &S) -> Result<f64> {
    entanglement_entropy(&reduced_density(state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{make_initial_state_1d, InitialSpec};
    use nalgebra::{Complex, Matrix2};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn origin_state() {
        let s = make_initial_state_1d(&InitialSpec::symmetric(), 10).unwrap();
        let d = position_distribution_1d(&s);
        assert!((d.prob(0) - 1.0).abs() < 1e-15);
        assert_eq!(standard_deviation(&d).unwrap(), 0.0);
        let rho = reduced_density(&s);
        assert!(state_entropy(&s).unwrap().abs() < 1e-12);
        assert!((rho.trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_point_spread() {
        let mut p = vec![0.0; 5];
        p[1] = 0.5;
        p[3] = 0.5;
        let d = Distribution1D::new(2, p).unwrap();
        assert_eq!(standard_deviation(&d).unwrap(), 1.0);
    }

    #[test]
    fn unnormalised_distribution_is_rejected() {
        let d = Distribution1D::new(1, vec![0.3, 0.3, 0.3]).unwrap();
        assert!(matches!(standard_deviation(&d), Err(Error::Domain(_))));
        let d = Distribution2D::new(0, vec![0.5]).unwrap();
        assert!(radial_deviation(&d).is_err());
    }

    #[test]
    fn radial_spread_of_four_corners() {
        let mut p = vec![0.0; 9];
        for i in [0, 2, 6, 8] {
            p[i] = 0.25;
        }
        let d = Distribution2D::new(1, p).unwrap();
        assert!((radial_deviation(&d).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(d.x_marginal().probs(), &[0.5, 0.0, 0.5]);
    }

    #[test]
    fn single_site_density_is_pure() {
        let chi = Spinor::new(c(0.6, 0.0), c(0.0, 0.8));
        let rho = reduced_density_of([&chi]);
        assert!((rho.m[0][0] - c(0.36, 0.0)).norm() < 1e-15);
        assert!((rho.m[0][1] - c(0.6, 0.0) * c(0.0, -0.8)).norm() < 1e-15);
        assert!((rho.m[1][1] - c(0.64, 0.0)).norm() < 1e-15);
        assert!(entanglement_entropy(&rho).unwrap() < 1e-12);
    }

    #[test]
    fn maximally_mixed_has_one_bit() {
        let rho = ReducedDensity::new([[c(0.5, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)]]);
        assert_eq!(entanglement_entropy(&rho).unwrap(), 1.0);
    }

    #[test]
    fn invalid_densities_are_errors() {
        let not_unit = ReducedDensity::new([[c(0.7, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)]]);
        assert!(entanglement_entropy(&not_unit).is_err());
        let not_herm = ReducedDensity::new([[c(0.5, 0.0), c(0.1, 0.0)], [c(0.2, 0.0), c(0.5, 0.0)]]);
        assert!(entanglement_entropy(&not_herm).is_err());
        let negative = ReducedDensity::new([[c(0.5, 0.0), c(0.9, 0.0)], [c(0.9, 0.0), c(0.5, 0.0)]]);
        assert!(entanglement_entropy(&negative).is_err());
    }

    fn spinor_strategy() -> impl Strategy<Value = Spinor> {
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
            .prop_map(|(a, b, d, e)| Spinor::new(c(a, b), c(d, e)))
    }

    fn normalise(mut v: Vec<Spinor>) -> Vec<Spinor> {
        let n: f64 = v.iter().map(Spinor::norm_sqr).sum::<f64>().sqrt();
        for s in &mut v {
            s.up /= n;
            s.down /= n;
        }
        v
    }

    proptest! {
        #[test]
        fn entropy_ignores_site_labels(sites in prop::collection::vec(spinor_strategy(), 2..12), shift in 0usize..12) {
            let sites = normalise(sites);
            let e = entanglement_entropy(&reduced_density_of(&sites)).unwrap();
            let mut rotated = sites.clone();
            rotated.rotate_left(shift % sites.len());
            rotated.reverse();
            let e2 = entanglement_entropy(&reduced_density_of(&rotated)).unwrap();
            prop_assert!((e - e2).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&e));
        }

        #[test]
        fn product_states_are_unentangled(
            chi in spinor_strategy(),
            weights in prop::collection::vec(0.0..1.0f64, 1..20),
            phases in prop::collection::vec(0.0..std::f64::consts::TAU, 20),
        ) {
            prop_assume!(chi.norm_sqr() > 1e-3);
            let total: f64 = weights.iter().sum();
            prop_assume!(total > 1e-3);
            let n = chi.norm_sqr().sqrt();
            let sites: Vec<Spinor> = weights
                .iter()
                .zip(&phases)
                .map(|(w, ph)| {
                    let amp = Complex64::from_polar((w / total).sqrt() / n, *ph);
                    Spinor::new(chi.up * amp, chi.down * amp)
                })
                .collect();
            let e = entanglement_entropy(&reduced_density_of(&sites)).unwrap();
            prop_assert!(e.abs() < 1e-12, "E = {}", e);
        }

        #[test]
        fn closed_form_eigenvalues_match_generic_solver(sites in prop::collection::vec(spinor_strategy(), 1..8)) {
            let rho = reduced_density_of(&normalise(sites));
            let m = Matrix2::new(
                Complex::new(rho.m[0][0].re, rho.m[0][0].im), Complex::new(rho.m[0][1].re, rho.m[0][1].im),
                Complex::new(rho.m[1][0].re, rho.m[1][0].im), Complex::new(rho.m[1][1].re, rho.m[1][1].im),
            );
            let mut generic: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
            generic.sort_by(|a, b| b.total_cmp(a));
            let closed = rho.eigenvalues();
            prop_assert!((closed[0] - generic[0]).abs() < 1e-12);
            prop_assert!((closed[1] - generic[1]).abs() < 1e-12);
        }
    }
}
