//! Dense global-unitary oracles, built independently of the step engines.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qwalk::prelude::*;

pub type C = Complex64;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

/// Coin entries straight from the Euler-angle formula.
fn euler_coin(a: &CoinAngles) -> [[C; 2]; 2] {
    let (s, co) = a.theta.sin_cos();
    let e = |phase: f64| C::new(phase.cos(), phase.sin());
    [
        [e(a.xi + a.zeta) * co, e(a.xi - a.zeta) * s],
        [-e(a.zeta - a.xi) * s, e(-a.xi - a.zeta) * co],
    ]
}

/// Basis index `2·(x + T) + coin`, coin 0 = ↑.
fn idx1(t_half: i64, x: i64, coin: usize) -> usize {
    2 * (x + t_half) as usize + coin
}

/// `U_t = C_t S` on the `2(2T+1)`-dimensional space (periodic wrap; never reached).
pub fn unitary_1d(schedule: &CoinSchedule, t: usize) -> DMatrix<C> {
    let h = schedule.halfwidth() as i64;
    let n = 2 * (2 * h + 1) as usize;
    let wrap = |x: i64| (x + h).rem_euclid(2 * h + 1) - h;
    let mut shift = DMatrix::<C>::zeros(n, n);
    for x in -h..=h {
        shift[(idx1(h, wrap(x - 1), 0), idx1(h, x, 0))] = c(1.0);
        shift[(idx1(h, wrap(x + 1), 1), idx1(h, x, 1))] = c(1.0);
    }
    let mut coin = DMatrix::<C>::zeros(n, n);
    for x in -h..=h {
        let m = euler_coin(&schedule.sample(x, t));
        for i in 0..2 {
            for j in 0..2 {
                coin[(idx1(h, x, i), idx1(h, x, j))] = m[i][j];
            }
        }
    }
    coin * shift
}

pub fn initial_vector_1d(spec: &InitialSpec, halfwidth: usize) -> DVector<C> {
    let h = halfwidth as i64;
    let mut v = DVector::<C>::zeros(2 * (2 * h + 1) as usize);
    let (s, co) = (spec.delta / 2.0).sin_cos();
    v[idx1(h, 0, 0)] = c(co);
    v[idx1(h, 0, 1)] = C::new(spec.eta.cos(), spec.eta.sin()) * s;
    v
}

pub fn evolve_1d(spec: &InitialSpec, schedule: &CoinSchedule, steps: usize) -> DVector<C> {
    let mut v = initial_vector_1d(spec, schedule.halfwidth());
    let static_u = (!schedule.kind().varies_in_time()).then(|| unitary_1d(schedule, 1));
    for t in 1..=steps {
        v = match &static_u {
            Some(u) => u * v,
            None => unitary_1d(schedule, t) * v,
        };
    }
    v
}

pub fn max_error_1d(state: &WalkState1D, v: &DVector<C>) -> f64 {
    let h = state.halfwidth() as i64;
    (-h..=h)
        .map(|x| {
            let s = state.at(x);
            (s.up - v[idx1(h, x, 0)]).norm().max((s.down - v[idx1(h, x, 1)]).norm())
        })
        .fold(0.0, f64::max)
}

pub fn sigma_1d(v: &DVector<C>, halfwidth: usize) -> f64 {
    let h = halfwidth as i64;
    let (mut m1, mut m2) = (0.0, 0.0);
    for x in -h..=h {
        let p = v[idx1(h, x, 0)].norm_sqr() + v[idx1(h, x, 1)].norm_sqr();
        m1 += x as f64 * p;
        m2 += (x * x) as f64 * p;
    }
    (m2 - m1 * m1).sqrt()
}

pub fn entropy_1d(v: &DVector<C>, halfwidth: usize) -> f64 {
    let h = halfwidth as i64;
    let mut rho = nalgebra::Matrix2::<C>::zeros();
    for x in -h..=h {
        let a = [v[idx1(h, x, 0)], v[idx1(h, x, 1)]];
        for i in 0..2 {
            for j in 0..2 {
                rho[(i, j)] += a[i] * a[j].conj();
            }
        }
    }
    rho.symmetric_eigen()
        .eigenvalues
        .iter()
        .filter(|&&l| l > 1e-300)
        .map(|&l| -l * l.log2())
        .sum()
}

/// Basis index `2·((x + T)(2T+1) + (y + T)) + coin`.
fn idx2(h: i64, x: i64, y: i64, coin: usize) -> usize {
    let side = 2 * h + 1;
    2 * ((x + h) * side + (y + h)) as usize + coin
}

fn site_operator(h: i64, n: usize, per_site: impl Fn(i64, i64) -> [[C; 2]; 2]) -> DMatrix<C> {
    let mut m = DMatrix::<C>::zeros(n, n);
    for x in -h..=h {
        for y in -h..=h {
            let b = per_site(x, y);
            for i in 0..2 {
                for j in 0..2 {
                    m[(idx2(h, x, y, i), idx2(h, x, y, j))] = b[i][j];
                }
            }
        }
    }
    m
}

/// Factors of `U_t = B_x(θ) S_y B_y(ϑ) S_x` in application order, with `B_y`
/// and `S_y` written through `|±⟩⟨±|` projectors.
pub fn factors_2d(schedule: &Schedule2D, t: usize) -> [DMatrix<C>; 4] {
    let h = schedule.halfwidth() as i64;
    let side = 2 * h + 1;
    let n = 2 * (side * side) as usize;
    let wrap = |v: i64| (v + h).rem_euclid(side) - h;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [c(r), c(r)];
    let minus = [c(r), c(-r)];
    let outer = |a: [C; 2], b: [C; 2]| [[a[0] * b[0], a[0] * b[1]], [a[1] * b[0], a[1] * b[1]]];

    let mut sx = DMatrix::<C>::zeros(n, n);
    let mut sy = DMatrix::<C>::zeros(n, n);
    let pp = outer(plus, plus);
    let mm = outer(minus, minus);
    for x in -h..=h {
        for y in -h..=h {
            sx[(idx2(h, wrap(x - 1), y, 0), idx2(h, x, y, 0))] = c(1.0);
            sx[(idx2(h, wrap(x + 1), y, 1), idx2(h, x, y, 1))] = c(1.0);
            for i in 0..2 {
                for j in 0..2 {
                    sy[(idx2(h, x, wrap(y - 1), i), idx2(h, x, y, j))] += pp[i][j];
                    sy[(idx2(h, x, wrap(y + 1), i), idx2(h, x, y, j))] += mm[i][j];
                }
            }
        }
    }
    let by = site_operator(h, n, |x, y| {
        let v = schedule.sample(x, y, t).1;
        let (s, co) = v.sin_cos();
        let pm = outer(plus, minus);
        let mp = outer(minus, plus);
        std::array::from_fn(|i| {
            std::array::from_fn(|j| (pp[i][j] + mm[i][j]) * co + (pm[i][j] - mp[i][j]) * s)
        })
    });
    let bx = site_operator(h, n, |x, y| {
        let (s, co) = schedule.sample(x, y, t).0.sin_cos();
        [[c(co), c(s)], [c(-s), c(co)]]
    });
    [sx, by, sy, bx]
}

pub fn evolve_2d(spec: &InitialSpec, schedule: &Schedule2D, steps: usize) -> DVector<C> {
    let h = schedule.halfwidth() as i64;
    let side = 2 * h + 1;
    let mut v = DVector::<C>::zeros(2 * (side * side) as usize);
    let (s, co) = (spec.delta / 2.0).sin_cos();
    v[idx2(h, 0, 0, 0)] = c(co);
    v[idx2(h, 0, 0, 1)] = C::new(spec.eta.cos(), spec.eta.sin()) * s;
    for t in 1..=steps {
        for f in factors_2d(schedule, t) {
            v = f * v;
        }
    }
    v
}

pub fn max_error_2d(state: &WalkState2D, v: &DVector<C>) -> f64 {
    let h = state.halfwidth() as i64;
    let mut err: f64 = 0.0;
    for x in -h..=h {
        for y in -h..=h {
            let s = state.at(x, y);
            err = err
                .max((s.up - v[idx2(h, x, y, 0)]).norm())
                .max((s.down - v[idx2(h, x, y, 1)]).norm());
        }
    }
    err
}

/// Deterministic pseudo-random value in `[0, 1)` for test case `i`.
pub fn unit(i: u64, salt: u64) -> f64 {
    let mut z = i.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64
}

/// A random 1D schedule for case `i`: kind cycles, SU(2) alternates, fraction and base angle vary.
pub fn random_schedule_1d(i: u64, steps: usize) -> CoinSchedule {
    let kind = DisorderKind::ALL[(i % 4) as usize];
    let mut spec = ScheduleSpec::new(kind, 1000 + i, steps)
        .with_fraction(0.25 + 0.75 * unit(i, 1))
        .with_su2((i / 4) % 2 == 1);
    spec.base_theta = std::f64::consts::PI * unit(i, 2);
    build_schedule(&spec).unwrap()
}

pub fn random_schedule_2d(i: u64, steps: usize) -> Schedule2D {
    let kind = DisorderKind::ALL[(i % 4) as usize];
    let mut spec = Schedule2DSpec::new(kind, 2000 + i, steps).with_fraction(0.25 + 0.75 * unit(i, 3));
    spec.base_theta = std::f64::consts::PI * unit(i, 4);
    spec.base_vartheta = std::f64::consts::PI * unit(i, 5);
    build_schedule_2d(&spec).unwrap()
}

pub fn random_initial(i: u64) -> InitialSpec {
    InitialSpec::new(std::f64::consts::PI * unit(i, 6), 2.0 * std::f64::consts::PI * unit(i, 7) * 0.999).unwrap()
}
