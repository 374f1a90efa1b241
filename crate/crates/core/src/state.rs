//! Walk states over coin ⊗ position space.
//!
//! Both lattices are dense arrays spanning `-T..=T` along every axis, with
//! `T` fixed at construction. Walks started at the origin never leave the
//! light cone `|x| <= t`, so as long as `t <= T` no boundary is ever touched.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type ComplexAmp = Complex64;

/// Two-component amplitude `(ψ↑, ψ↓)` attached to one lattice site.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Spinor {
    pub up: ComplexAmp,
    pub down: ComplexAmp,
}

impl Spinor {
    pub const ZERO: Spinor = Spinor {
        up: Complex64::new(0.0, 0.0),
        down: Complex64::new(0.0, 0.0),
    };

    pub fn new(up: ComplexAmp, down: ComplexAmp) -> Self {
        Spinor { up, down }
    }

    /// Site probability `|ψ↑|² + |ψ↓|²`.
    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.up.norm_sqr() + self.down.norm_sqr()
    }

    pub fn is_finite(&self) -> bool {
        self.up.is_finite() && self.down.is_finite()
    }
}

/// Common read access to 1D and 2D walk states.
pub trait WalkState {
    /// Number of steps applied so far.
    fn t(&self) -> usize;
    fn halfwidth(&self) -> usize;
    /// All site spinors in storage order.
    fn spinors(&self) -> &[Spinor];
}

/// `Σ |ψ|²` over all sites and both coin components.
pub fn total_norm<S: WalkState + ?Sized>(state: &S) -> f64 {
    state.spinors().iter().map(Spinor::norm_sqr).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkState1D {
    t: usize,
    halfwidth: usize,
    amps: Vec<Spinor>,
}

impl WalkState1D {
    /// All-zero state on `-T..=T` at `t = 0`.
    pub fn zeros(halfwidth: usize) -> Self {
        WalkState1D {
            t: 0,
            halfwidth,
            amps: vec![Spinor::ZERO; 2 * halfwidth + 1],
        }
    }

    /// Wraps an amplitude array indexed by `x + T`.
    pub fn from_amplitudes(t: usize, halfwidth: usize, amps: Vec<Spinor>) -> Result<Self> {
        if amps.len() != 2 * halfwidth + 1 {
            return Err(Error::domain(format!(
                "expected {} spinors for halfwidth {halfwidth}, got {}",
                2 * halfwidth + 1,
                amps.len()
            )));
        }
        Ok(WalkState1D { t, halfwidth, amps })
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    /// Storage index of position `x`, if it lies on the lattice.
    #[inline]
    pub fn index(&self, x: i64) -> Option<usize> {
        let t = self.halfwidth as i64;
        (-t..=t).contains(&x).then(|| (x + t) as usize)
    }

    /// Position of storage index `i`.
    #[inline]
    pub fn position(&self, i: usize) -> i64 {
        i as i64 - self.halfwidth as i64
    }

    /// Spinor at `x`; zero off the lattice.
    pub fn at(&self, x: i64) -> Spinor {
        self.index(x).map_or(Spinor::ZERO, |i| self.amps[i])
    }

    pub fn set(&mut self, x: i64, spinor: Spinor) -> Result<()> {
        let i = self
            .index(x)
            .ok_or_else(|| Error::domain(format!("x = {x} outside ±{}", self.halfwidth)))?;
        self.amps[i] = spinor;
        Ok(())
    }

    pub fn amps(&self) -> &[Spinor] {
        &self.amps
    }

    pub(crate) fn from_parts(t: usize, halfwidth: usize, amps: Vec<Spinor>) -> Self {
        debug_assert_eq!(amps.len(), 2 * halfwidth + 1);
        WalkState1D { t, halfwidth, amps }
    }
}

impl WalkState for WalkState1D {
    fn t(&self) -> usize {
        self.t
    }
    fn halfwidth(&self) -> usize {
        self.halfwidth
    }
    fn spinors(&self) -> &[Spinor] {
        &self.amps
    }
}

/// Dense square-lattice state, row-major with `x` as the slow axis.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkState2D {
    t: usize,
    halfwidth: usize,
    amps: Vec<Spinor>,
}

impl WalkState2D {
    pub fn zeros(halfwidth: usize) -> Self {
        let side = 2 * halfwidth + 1;
        WalkState2D {
            t: 0,
            halfwidth,
            amps: vec![Spinor::ZERO; side * side],
        }
    }

    pub fn from_amplitudes(t: usize, halfwidth: usize, amps: Vec<Spinor>) -> Result<Self> {
        let side = 2 * halfwidth + 1;
        if amps.len() != side * side {
            return Err(Error::domain(format!(
                "expected {} spinors for halfwidth {halfwidth}, got {}",
                side * side,
                amps.len()
            )));
        }
        Ok(WalkState2D { t, halfwidth, amps })
    }

    /// Lattice side length `2T + 1`.
    #[inline]
    pub fn side(&self) -> usize {
        2 * self.halfwidth + 1
    }

    #[inline]
    pub fn index(&self, x: i64, y: i64) -> Option<usize> {
        let t = self.halfwidth as i64;
        if (-t..=t).contains(&x) && (-t..=t).contains(&y) {
            Some((x + t) as usize * self.side() + (y + t) as usize)
        } else {
            None
        }
    }

    /// `(x, y)` of storage index `i`.
    #[inline]
    pub fn position(&self, i: usize) -> (i64, i64) {
        let side = self.side();
        let t = self.halfwidth as i64;
        ((i / side) as i64 - t, (i % side) as i64 - t)
    }

    pub fn at(&self, x: i64, y: i64) -> Spinor {
        self.index(x, y).map_or(Spinor::ZERO, |i| self.amps[i])
    }

    pub fn set(&mut self, x: i64, y: i64, spinor: Spinor) -> Result<()> {
        let i = self.index(x, y).ok_or_else(|| {
            Error::domain(format!("({x}, {y}) outside ±{}", self.halfwidth))
        })?;
        self.amps[i] = spinor;
        Ok(())
    }

    pub fn amps(&self) -> &[Spinor] {
        &self.amps
    }

    pub(crate) fn from_parts(t: usize, halfwidth: usize, amps: Vec<Spinor>) -> Self {
        debug_assert_eq!(amps.len(), (2 * halfwidth + 1).pow(2));
        WalkState2D { t, halfwidth, amps }
    }
}

impl WalkState for WalkState2D {
    fn t(&self) -> usize {
        self.t
    }
    fn halfwidth(&self) -> usize {
        self.halfwidth
    }
    fn spinors(&self) -> &[Spinor] {
        &self.amps
    }
}

/// Bloch-sphere parameters of the initial coin state
/// `cos(δ/2)|↑⟩ + e^{iη} sin(δ/2)|↓⟩`, placed at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    pub delta: f64,
    pub eta: f64,
}

impl InitialSpec {
    pub fn new(delta: f64, eta: f64) -> Result<Self> {
        let spec = InitialSpec { delta, eta };
        spec.validate()?;
        Ok(spec)
    }

    /// `|↑⟩`.
    pub fn up() -> Self {
        InitialSpec {
            delta: 0.0,
            eta: 0.0,
        }
    }

    /// `|↓⟩`.
    pub fn down() -> Self {
        InitialSpec {
            delta: PI,
            eta: 0.0,
        }
    }

    /// `(|↑⟩ - i|↓⟩)/√2`, equal to `(|↓⟩ + i|↑⟩)/√2` up to a global phase.
    /// Under a real coin its position distribution is parity symmetric.
    pub fn symmetric() -> Self {
        InitialSpec {
            delta: PI / 2.0,
            eta: 3.0 * PI / 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=PI).contains(&self.delta) {
            return Err(Error::domain(format!("delta = {} outside [0, π]", self.delta)));
        }
        if !(0.0..2.0 * PI).contains(&self.eta) {
            return Err(Error::domain(format!("eta = {} outside [0, 2π)", self.eta)));
        }
        Ok(())
    }

    pub fn spinor(&self) -> Spinor {
        let (s, c) = (self.delta / 2.0).sin_cos();
        Spinor::new(
            Complex64::new(c, 0.0),
            Complex64::from_polar(1.0, self.eta) * s,
        )
    }
}

impl Default for InitialSpec {
    fn default() -> Self {
        InitialSpec::symmetric()
    }
}

pub fn make_initial_state_1d(spec: &InitialSpec, capacity: usize) -> Result<WalkState1D> {
    if capacity < 1 {
        return Err(Error::Capacity(capacity));
    }
    spec.validate()?;
    let mut state = WalkState1D::zeros(capacity);
    state.amps[capacity] = spec.spinor();
    Ok(state)
}

pub fn make_initial_state_2d(spec: &InitialSpec, capacity: usize) -> Result<WalkState2D> {
    if capacity < 1 {
        return Err(Error::Capacity(capacity));
    }
    spec.validate()?;
    let mut state = WalkState2D::zeros(capacity);
    let origin = state.index(0, 0).expect("origin is always on the lattice");
    state.amps[origin] = spec.spinor();
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-15
    }

    #[test]
    fn pole_states() {
        let s = make_initial_state_1d(&InitialSpec::up(), 100).unwrap();
        assert_eq!(s.at(0).up, Complex64::new(1.0, 0.0));
        assert_eq!(s.at(0).down.norm(), 0.0);
        assert_eq!(total_norm(&s), 1.0);
        assert!(s.amps().iter().enumerate().all(|(i, sp)| i == 100 || *sp == Spinor::ZERO));

        let s = make_initial_state_1d(&InitialSpec::down(), 100).unwrap();
        assert!(s.at(0).up.norm() < 1e-16);
        assert!(close(s.at(0).down, Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn quarter_turn_phase() {
        let spec = InitialSpec::new(PI / 2.0, PI / 2.0).unwrap();
        let s = make_initial_state_1d(&spec, 100).unwrap();
        assert!(close(s.at(0).up, Complex64::new(FRAC_1_SQRT_2, 0.0)));
        assert!(close(s.at(0).down, Complex64::new(0.0, FRAC_1_SQRT_2)));
        assert!((total_norm(&s) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_state_matches_figure_state_up_to_phase() {
        // (|↓⟩ + i|↑⟩)/√2 == i · symmetric()
        let sp = InitialSpec::symmetric().spinor();
        let i = Complex64::i();
        assert!(close(i * sp.up, Complex64::new(0.0, FRAC_1_SQRT_2)));
        assert!(close(i * sp.down, Complex64::new(FRAC_1_SQRT_2, 0.0)));
    }

    #[test]
    fn capacity_and_domain_errors() {
        assert!(matches!(
            make_initial_state_1d(&InitialSpec::up(), 0),
            Err(Error::Capacity(0))
        ));
        assert!(matches!(
            make_initial_state_2d(&InitialSpec::up(), 0),
            Err(Error::Capacity(0))
        ));
        assert!(InitialSpec::new(-0.1, 0.0).is_err());
        assert!(InitialSpec::new(0.0, 2.0 * PI).is_err());
    }

    #[test]
    fn zero_state_has_zero_norm() {
        assert_eq!(total_norm(&WalkState1D::zeros(5)), 0.0);
        assert_eq!(total_norm(&WalkState2D::zeros(5)), 0.0);
    }

    #[test]
    fn indexing_round_trips() {
        let s = WalkState2D::zeros(3);
        for x in -3..=3 {
            for y in -3..=3 {
                assert_eq!(s.position(s.index(x, y).unwrap()), (x, y));
            }
        }
        assert!(s.index(4, 0).is_none());
        let s = WalkState1D::zeros(3);
        assert_eq!(s.position(s.index(-3).unwrap()), -3);
        assert_eq!(s.at(17), Spinor::ZERO);
    }

    proptest::proptest! {
        #[test]
        fn initial_spinor_is_normalised(delta in 0.0..=PI, eta in 0.0..(2.0 * PI)) {
            let sp = InitialSpec::new(delta, eta).unwrap().spinor();
            proptest::prop_assert!((sp.norm_sqr() - 1.0).abs() < 1e-15);
        }
    }
}
