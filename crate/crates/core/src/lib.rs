//! Discrete-time quantum walks in one and two dimensions under spatial,
//! temporal and spatio-temporal coin disorder.
//!
//! The crate is organised bottom-up:
//!
//! - [`state`]: spinors, dense walk states and initial-state construction.
//! - [`coins`]: the 2×2 coin unitaries.
//! - [`disorder`]: seeded, counter-based coin schedules.
//! - [`evolve1d`] / [`evolve2d`]: exact unitary evolution.
//! - [`observables`]: distributions, spreads and particle–position entanglement.
//! - [`dispersion`]: continuum-limit dispersion relations and group velocities.
//! - [`experiment`]: the reproducible experiment driver behind the `qwalk` binary.
//!
//! ```
//! use qwalk::prelude::*;
//!
//! let spec = ScheduleSpec::uniform(std::f64::consts::FRAC_PI_4, 100);
//! let schedule = build_schedule(&spec).unwrap();
//! let traj = run_1d(&InitialSpec::symmetric(), &schedule, 100, RecordFlags::scalars()).unwrap();
//! let sigma = traj.last().sigma.unwrap();
//! assert!((sigma / 100.0 - 0.541).abs() < 1e-3);
//! ```

pub mod coins;
pub mod dispersion;
pub mod disorder;
mod error;
pub mod evolve1d;
pub mod evolve2d;
pub mod experiment;
pub mod observables;
pub mod state;

pub use error::{Error, Result};

/// Tolerance on `|total_norm - 1|` used by every evolution check.
pub const NORM_TOLERANCE: f64 = 1e-12;

pub mod prelude {
    pub use crate::coins::{make_coin, make_su2_coin, make_y_coin, CoinAngles, CoinMatrix};
    pub use crate::dispersion::{
        effective_group_velocity, omega_lattice, omega_su2, omega_uniform, site_group_velocity,
        spread_estimate, su2_spatial_dispersion, Component, DispersionPoint, DisorderSiteParams,
        EffectiveVelocity, Su2SpatialCoeffs,
    };
    pub use crate::disorder::{
        build_schedule, build_schedule_2d, CoinSchedule, DisorderKind, Schedule2D, Schedule2DSpec,
        ScheduleSpec,
    };
    pub use crate::evolve1d::{run_1d, step_1d, RecordFlags, Trajectory1D};
    pub use crate::evolve2d::{run_2d, step_2d, step_2d_closed_form, AngleField, Trajectory2D};
    pub use crate::observables::{
        entanglement_entropy, position_distribution_1d, position_distribution_2d,
        radial_deviation, reduced_density, standard_deviation, Distribution1D, Distribution2D,
        ReducedDensity,
    };
    pub use crate::state::{
        make_initial_state_1d, make_initial_state_2d, total_norm, InitialSpec, Spinor, WalkState,
        WalkState1D, WalkState2D,
    };
    pub use crate::{Error, Result};
}
