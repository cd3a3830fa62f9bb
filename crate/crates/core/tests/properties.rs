//! Property tests for the structural invariants: unitarity, parity,
//! wrapping, particle conservation, map-root consistency, and the
//! parabolic recurrence laws.

use num_complex::Complex64;
use proptest::prelude::*;
use rotor_core::classical2d::{find_branches, wrap_angle, ClassicalEnsemble2D, ThermalSpec};
use rotor_core::classical3d::ClassicalEnsemble3D;
use rotor_core::quantum2d::{n_max_for, KickSpec, QuantumState2D};
use rotor_core::quantum3d::QuantumState3D;
use rotor_core::squeeze::parabolic_recurrence;
use std::f64::consts::PI;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Norm stays within 1e-10 of one under arbitrary kick/drift chains.
    #[test]
    fn quantum2d_unitarity_under_random_sequences(
        kicks in prop::collection::vec((-6.0_f64..6.0, 0.0_f64..2.0), 1..5)
    ) {
        let total: f64 = kicks.iter().map(|(p, _)| p.abs()).sum();
        let mut state = QuantumState2D::ground(n_max_for(total));
        for &(p, dt) in &kicks {
            state = state.kicked(KickSpec::new(p)).unwrap().free_evolve(dt);
        }
        prop_assert!((state.norm_sq() - 1.0).abs() < 1e-10);
    }

    /// Densities at tau and tau + T_rev coincide for any kick-free gap.
    #[test]
    fn quantum2d_revival(p in 0.5_f64..4.0, dt in 0.0_f64..3.0) {
        let state = QuantumState2D::ground(n_max_for(p))
            .kicked(KickSpec::new(p)).unwrap()
            .free_evolve(dt);
        let revived = state.free_evolve(4.0 * PI);
        let grid: Vec<f64> = (0..256).map(|i| -PI + 2.0 * PI * i as f64 / 256.0).collect();
        let a = state.angular_density(&grid);
        let b = revived.angular_density(&grid);
        let sup = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(sup < 1e-10);
    }

    /// An even state stays bitwise even under any kick strength.
    #[test]
    fn quantum2d_parity_preserved(p in -5.0_f64..5.0, width in 2.0_f64..20.0) {
        let n_max = n_max_for(p.abs() + 1.0).max(40);
        let mut coeffs = vec![Complex64::ZERO; 2 * n_max + 1];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let n = (i as i64 - n_max as i64) as f64;
            *c = Complex64::new((-n * n / (2.0 * width)).exp(), 0.0);
        }
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        coeffs.iter_mut().for_each(|c| *c /= norm);
        let kicked = QuantumState2D::from_coeffs(coeffs, 0.0)
            .kicked(KickSpec::new(p)).unwrap();
        for n in 0..=n_max as i64 {
            prop_assert_eq!(kicked.coeff(n), kicked.coeff(-n));
        }
    }

    /// wrap_angle lands in [-pi, pi) and differs by a whole number of turns.
    #[test]
    fn wrap_angle_contract(x in -1e4_f64..1e4) {
        let w = wrap_angle(x);
        prop_assert!((-PI..PI).contains(&w));
        let turns = (w - x) / (2.0 * PI);
        prop_assert!((turns - turns.round()).abs() < 1e-9 * (1.0 + x.abs()));
    }

    /// Ensemble ops conserve the particle count and keep angles wrapped.
    #[test]
    fn classical2d_particles_conserved(
        n in 10_usize..200,
        p in -10.0_f64..10.0,
        dt in 0.0_f64..20.0,
        sigma in 0.0_f64..2.0,
        seed in any::<u64>()
    ) {
        let ens = ClassicalEnsemble2D::sample_uniform(n, ThermalSpec::new(sigma), seed)
            .kicked(p)
            .drifted(dt);
        prop_assert_eq!(ens.len(), n);
        prop_assert!(ens.thetas().iter().all(|t| (-PI..PI).contains(t)));
    }

    /// Every reported branch root maps back onto its target angle.
    #[test]
    fn branch_roots_satisfy_map(ptau in 0.05_f64..8.0, theta in -PI..PI) {
        let set = find_branches(ptau, 1.0, theta);
        prop_assert!(!set.branches.is_empty());
        for b in &set.branches {
            let mapped = wrap_angle(b.theta0 - ptau * b.theta0.sin());
            prop_assert!(wrap_angle(mapped - theta).abs() < 1e-9);
            prop_assert!(b.weight > 0.0 && b.weight.is_finite());
        }
    }

    /// Parabolic recurrence: u never increases, w never decreases, and the
    /// delays stay in (0, 1].
    #[test]
    fn parabolic_recurrence_monotonicity(u0 in 1e-6_f64..10.0, w0 in 0.0_f64..10.0, n in 1_usize..200) {
        let steps = parabolic_recurrence(u0, w0, n);
        let mut u_prev = u0;
        let mut w_prev = w0;
        for s in &steps {
            prop_assert!(s.delta_tau > 0.0 && s.delta_tau <= 1.0);
            prop_assert!(s.u <= u_prev + 1e-15);
            prop_assert!(s.w >= w_prev - 1e-15);
            u_prev = s.u;
            w_prev = s.w;
        }
    }

    /// 3D ensembles keep unit axes, tangential velocities and conserved
    /// azimuthal momentum under kick/drift chains.
    #[test]
    fn classical3d_invariants(
        p in -4.0_f64..4.0,
        dt in 0.0_f64..10.0,
        sigma in 0.0_f64..1.0,
        seed in any::<u64>()
    ) {
        let ens = ClassicalEnsemble3D::sample_isotropic(64, sigma, seed).kicked(p);
        let p_phi_before = ens.p_phi();
        let moved = ens.drifted(dt);
        for ((a, v), (b0, b1)) in moved.axes().iter().zip(moved.angvels())
            .zip(p_phi_before.iter().zip(&moved.p_phi()))
        {
            let norm = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
            prop_assert!((norm - 1.0).abs() < 1e-12);
            let dot = a[0] * v[0] + a[1] * v[1] + a[2] * v[2];
            prop_assert!(dot.abs() < 1e-10);
            prop_assert!((b0 - b1).abs() < 1e-10);
        }
    }

    /// Impulsive cos^2 kicks preserve norm and J-parity from the ground
    /// state, and keep the alignment factor within [0, 1].
    #[test]
    fn quantum3d_kick_invariants(p in 0.0_f64..12.0) {
        let j_max = rotor_core::quantum3d::j_max_for(p).max(8);
        let s = QuantumState3D::ground(j_max).kick_impulsive(p);
        prop_assert!((s.norm_sq() - 1.0).abs() < 1e-10);
        for (j, c) in s.coeffs().iter().enumerate() {
            if j % 2 == 1 {
                prop_assert_eq!(c.norm_sqr(), 0.0);
            }
        }
        let a = s.alignment_factor();
        prop_assert!((0.0..=1.0).contains(&a));
    }
}
