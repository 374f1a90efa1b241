mod common;

use common::*;
use proptest::prelude::*;
use qwalk::prelude::*;

fn kind() -> impl Strategy<Value = DisorderKind> {
    prop::sample::select(DisorderKind::ALL.to_vec())
}

fn initial() -> impl Strategy<Value = InitialSpec> {
    (0.0..=std::f64::consts::PI, 0.0..std::f64::consts::TAU).prop_map(|(d, e)| InitialSpec::new(d, e).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn walk_1d_matches_dense_oracle(
        kind in kind(), seed in any::<u64>(), fraction in 0.0..=1.0f64,
        su2 in any::<bool>(), spec in initial(), steps in 1usize..10,
    ) {
        let schedule = build_schedule(
            &ScheduleSpec::new(kind, seed, steps).with_fraction(fraction).with_su2(su2),
        ).unwrap();
        let traj = run_1d(&spec, &schedule, steps, RecordFlags::scalars()).unwrap();
        let v = evolve_1d(&spec, &schedule, steps);
        prop_assert!(max_error_1d(&traj.final_state, &v) < 1e-12);
        prop_assert!((traj.last().sigma.unwrap() - sigma_1d(&v, steps)).abs() < 1e-10);
        prop_assert!((traj.last().entropy.unwrap() - entropy_1d(&v, steps)).abs() < 1e-9);
    }

    #[test]
    fn walk_2d_matches_dense_oracle(
        kind in kind(), seed in any::<u64>(), spec in initial(), steps in 1usize..4,
        theta in 0.0..=std::f64::consts::PI, vartheta in 0.0..=std::f64::consts::PI,
    ) {
        let mut s = Schedule2DSpec::new(kind, seed, steps).with_fraction(0.5);
        s.base_theta = theta;
        s.base_vartheta = vartheta;
        let schedule = build_schedule_2d(&s).unwrap();
        let traj = run_2d(&spec, &schedule, steps, RecordFlags::none()).unwrap();
        prop_assert!(max_error_2d(&traj.final_state, &evolve_2d(&spec, &schedule, steps)) < 1e-12);
    }

    #[test]
    fn observables_stay_in_range(kind in kind(), seed in any::<u64>(), spec in initial(), su2 in any::<bool>()) {
        let schedule = build_schedule(&ScheduleSpec::new(kind, seed, 60).with_su2(su2)).unwrap();
        let traj = run_1d(&spec, &schedule, 60, RecordFlags::all()).unwrap();
        prop_assert!(traj.max_norm_drift() < 1e-12);
        for r in &traj.records {
            let e = r.entropy.unwrap();
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&e));
            prop_assert!(r.sigma.unwrap() <= r.t as f64 + 1e-9);
            let d = r.distribution.as_ref().unwrap();
            for (x, p) in d.iter() {
                if x.unsigned_abs() as usize > r.t {
                    prop_assert_eq!(p, 0.0);
                }
            }
        }
    }

    #[test]
    fn reruns_are_bitwise_identical(kind in kind(), seed in any::<u64>()) {
        let build = || build_schedule_2d(&Schedule2DSpec::new(kind, seed, 12)).unwrap();
        let a = run_2d(&InitialSpec::symmetric(), &build(), 12, RecordFlags::none()).unwrap();
        let b = run_2d(&InitialSpec::symmetric(), &build(), 12, RecordFlags::none()).unwrap();
        prop_assert!(a.final_state.amps() == b.final_state.amps());
    }
}
