//! 2×2 coin unitaries.

use std::f64::consts::PI;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::state::ComplexAmp;
use crate::{Error, Result};

/// Euler angles `(ξ, θ, ζ)` of an SU(2) coin. Single-parameter coins are `(0, θ, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoinAngles {
    pub xi: f64,
    pub theta: f64,
    pub zeta: f64,
}

impl CoinAngles {
    pub fn new(xi: f64, theta: f64, zeta: f64) -> Result<Self> {
        let angles = CoinAngles { xi, theta, zeta };
        angles.validate()?;
        Ok(angles)
    }

    pub fn theta_only(theta: f64) -> Self {
        CoinAngles {
            xi: 0.0,
            theta,
            zeta: 0.0,
        }
    }

    /// `φ = ξ + ζ`.
    pub fn phi(&self) -> f64 {
        self.xi + self.zeta
    }

    pub fn validate(&self) -> Result<()> {
        check_theta("theta", self.theta)?;
        if !(0.0..2.0 * PI).contains(&self.xi) {
            return Err(Error::domain(format!("xi = {} outside [0, 2π)", self.xi)));
        }
        if !(0.0..2.0 * PI).contains(&self.zeta) {
            return Err(Error::domain(format!("zeta = {} outside [0, 2π)", self.zeta)));
        }
        Ok(())
    }
}

pub(crate) fn check_theta(name: &str, theta: f64) -> Result<()> {
    if (0.0..=PI).contains(&theta) {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {theta} outside [0, π]")))
    }
}

/// Row-major 2×2 complex matrix acting on `(ψ↑, ψ↓)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinMatrix {
    pub a11: ComplexAmp,
    pub a12: ComplexAmp,
    pub a21: ComplexAmp,
    pub a22: ComplexAmp,
}

impl CoinMatrix {
    pub const IDENTITY: CoinMatrix = CoinMatrix {
        a11: Complex64::new(1.0, 0.0),
        a12: Complex64::new(0.0, 0.0),
        a21: Complex64::new(0.0, 0.0),
        a22: Complex64::new(1.0, 0.0),
    };

    pub fn from_real(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        CoinMatrix {
            a11: a11.into(),
            a12: a12.into(),
            a21: a21.into(),
            a22: a22.into(),
        }
    }

    /// Applies the matrix to the column `(up, down)`.
    #[inline]
    pub fn apply(&self, up: Complex64, down: Complex64) -> (Complex64, Complex64) {
        (
            self.a11 * up + self.a12 * down,
            self.a21 * up + self.a22 * down,
        )
    }

    pub fn dagger(&self) -> Self {
        CoinMatrix {
            a11: self.a11.conj(),
            a12: self.a21.conj(),
            a21: self.a12.conj(),
            a22: self.a22.conj(),
        }
    }

    pub fn det(&self) -> Complex64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    /// Largest entrywise deviation of `M†M` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.dagger() * *self;
        [
            p.a11 - 1.0,
            p.a12,
            p.a21,
            p.a22 - 1.0,
        ]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CoinMatrix) -> f64 {
        [
            self.a11 - other.a11,
            self.a12 - other.a12,
            self.a21 - other.a21,
            self.a22 - other.a22,
        ]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
    }
}

impl Mul for CoinMatrix {
    type Output = CoinMatrix;

    fn mul(self, rhs: CoinMatrix) -> CoinMatrix {
        CoinMatrix {
            a11: self.a11 * rhs.a11 + self.a12 * rhs.a21,
            a12: self.a11 * rhs.a12 + self.a12 * rhs.a22,
            a21: self.a21 * rhs.a11 + self.a22 * rhs.a21,
            a22: self.a21 * rhs.a12 + self.a22 * rhs.a22,
        }
    }
}

/// `B(θ) = [[cos θ, sin θ], [−sin θ, cos θ]]`.
pub fn make_coin(theta: f64) -> Result<CoinMatrix> {
    check_theta("theta", theta)?;
    let (s, c) = theta.sin_cos();
    Ok(CoinMatrix::from_real(c, s, -s, c))
}

/// General SU(2) coin
/// `[[e^{i(ξ+ζ)} cos θ, e^{i(ξ−ζ)} sin θ], [−e^{−i(ξ−ζ)} sin θ, e^{−i(ξ+ζ)} cos θ]]`.
///
/// With `ξ = ζ = 0` every phase factor is exactly `1 + 0i`, so the result is
/// bitwise equal to [`make_coin`].
pub fn make_su2_coin(angles: &CoinAngles) -> Result<CoinMatrix> {
    angles.validate()?;
    Ok(su2_unchecked(angles))
}

#[inline]
pub(crate) fn su2_unchecked(angles: &CoinAngles) -> CoinMatrix {
    let (s, c) = angles.theta.sin_cos();
    let sum = Complex64::from_polar(1.0, angles.xi + angles.zeta);
    let diff = Complex64::from_polar(1.0, angles.xi - angles.zeta);
    CoinMatrix {
        a11: sum * c,
        a12: diff * s,
        a21: -(diff.conj() * s),
        a22: sum.conj() * c,
    }
}

/// y-axis coin `B_y(ϑ)` written in the σ₃ basis: `[[cos ϑ, −sin ϑ], [sin ϑ, cos ϑ]]`.
///
/// This is `H B(ϑ) H` with `H` the Hadamard change between the σ₃ and σ₁ eigenbases.
pub fn make_y_coin(vartheta: f64) -> Result<CoinMatrix> {
    check_theta("vartheta", vartheta)?;
    let (s, c) = vartheta.sin_cos();
    Ok(CoinMatrix::from_real(c, -s, s, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn single_parameter_examples() {
        assert_eq!(make_coin(0.0).unwrap(), CoinMatrix::IDENTITY);
        let q = make_coin(FRAC_PI_4).unwrap();
        let want = CoinMatrix::from_real(FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, FRAC_1_SQRT_2);
        assert!(q.max_abs_diff(&want) < 1e-15);
        let h = make_coin(FRAC_PI_2).unwrap();
        assert!(h.max_abs_diff(&CoinMatrix::from_real(0.0, 1.0, -1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn su2_examples() {
        let m = make_su2_coin(&CoinAngles::new(FRAC_PI_2, 0.0, 0.0).unwrap()).unwrap();
        let want = CoinMatrix {
            a11: Complex64::i(),
            a12: 0.0.into(),
            a21: 0.0.into(),
            a22: -Complex64::i(),
        };
        assert!(m.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn y_coin_examples() {
        assert_eq!(make_y_coin(0.0).unwrap(), CoinMatrix::IDENTITY);
        let m = make_y_coin(FRAC_PI_4).unwrap();
        let want = CoinMatrix::from_real(FRAC_1_SQRT_2, -FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2);
        assert!(m.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(make_coin(-1e-9).is_err());
        assert!(make_coin(PI + 1e-9).is_err());
        assert!(make_y_coin(4.0).is_err());
        assert!(make_su2_coin(&CoinAngles::theta_only(3.5)).is_err());
        assert!(CoinAngles::new(2.0 * PI, 0.0, 0.0).is_err());
        assert!(CoinAngles::new(0.0, 0.0, -0.1).is_err());
    }

    /// `|±⟩⟨±|` projector expansion of the y-coin, done independently of the closed form.
    fn y_coin_from_projectors(v: f64) -> CoinMatrix {
        let plus = [FRAC_1_SQRT_2, FRAC_1_SQRT_2];
        let minus = [FRAC_1_SQRT_2, -FRAC_1_SQRT_2];
        let outer = |a: [f64; 2], b: [f64; 2]| [[a[0] * b[0], a[0] * b[1]], [a[1] * b[0], a[1] * b[1]]];
        let terms = [
            (v.cos(), outer(plus, plus)),
            (v.sin(), outer(plus, minus)),
            (-v.sin(), outer(minus, plus)),
            (v.cos(), outer(minus, minus)),
        ];
        let mut m = [[0.0; 2]; 2];
        for (w, p) in terms {
            for i in 0..2 {
                for j in 0..2 {
                    m[i][j] += w * p[i][j];
                }
            }
        }
        CoinMatrix::from_real(m[0][0], m[0][1], m[1][0], m[1][1])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn every_coin_is_unitary(xi in 0.0..(2.0 * PI), theta in 0.0..=PI, zeta in 0.0..(2.0 * PI)) {
            let a = CoinAngles::new(xi, theta, zeta).unwrap();
            let m = make_su2_coin(&a).unwrap();
            prop_assert!(m.unitarity_error() < 1e-14);
            prop_assert!((m.det().norm() - 1.0).abs() < 1e-14);
            prop_assert!(make_coin(theta).unwrap().unitarity_error() < 1e-14);
            prop_assert!(make_y_coin(theta).unwrap().unitarity_error() < 1e-14);
        }

        #[test]
        fn su2_without_phases_is_exactly_single_parameter(theta in 0.0..=PI) {
            let a = make_su2_coin(&CoinAngles::theta_only(theta)).unwrap();
            prop_assert_eq!(a, make_coin(theta).unwrap());
        }

        #[test]
        fn y_coin_is_hadamard_conjugate(v in 0.0..=PI) {
            let h = CoinMatrix::from_real(FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2);
            let conj = h * make_coin(v).unwrap() * h;
            let y = make_y_coin(v).unwrap();
            prop_assert!(y.max_abs_diff(&conj) < 1e-14);
            prop_assert!(y.max_abs_diff(&y_coin_from_projectors(v)) < 1e-14);
        }
    }
}
