use levcool::cooling;
use levcool::lyapunov::{self, LinearModel};
use levcool::output::{format_float, parse_float};
use levcool::reduction;
use levcool::response::{self, SelfEnergyConvention};
use levcool::sweep::{Axis, AxisKey, Scale};
use levcool::NormalizedParams;
use nalgebra::Matrix6;
use proptest::prelude::*;

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.log10()..hi.log10()).prop_map(|e| 10f64.powf(e))
}

prop_compose! {
    fn params()(
        detuning2 in -500.0..500.0f64,
        detuning3 in -20.0..20.0f64,
        kappa in log_uniform(0.1, 1e3),
        kappa3 in log_uniform(0.01, 100.0),
        tunneling in 0.0..50.0f64,
        coupling in 0.0..5.0f64,
        gamma in 0.0..1e-2f64,
        gamma_sc in 0.0..0.1f64,
        n_th in 0.0..100.0f64,
    ) -> NormalizedParams {
        NormalizedParams { detuning2, detuning3, kappa, kappa3, tunneling, coupling, gamma, gamma_sc, n_th }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Drift with a complex tunnelling `J = |J| e^{i phi}`, written out from
/// `da2/dt = ... - i J a3`, `da3/dt = ... - i J* a2`.
fn drift_with_phase(p: &NormalizedParams, phi: f64) -> Matrix6<f64> {
    let (k, k3, g) = (p.kappa / 2.0, p.kappa3 / 2.0, p.gamma / 2.0);
    let (d2, d3, c) = (p.detuning2, p.detuning3, 2.0 * p.coupling);
    let (jr, ji) = (p.tunneling * phi.cos(), p.tunneling * phi.sin());
    #[rustfmt::skip]
    let a = Matrix6::new(
        -k,  -d2, ji,  jr,  0.0, 0.0,
        d2,  -k,  -jr, ji,  c,   0.0,
        -ji, jr,  -k3, -d3, 0.0, 0.0,
        -jr, -ji, d3,  -k3, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, -g,  1.0,
        c,   0.0, 0.0, 0.0, -1.0, -g,
    );
    a
}

proptest! {
    #[test]
    fn normalize_round_trip(p in params(), omega_m in log_uniform(1e3, 1e8)) {
        let back = p.denormalize(omega_m).unwrap().normalize().unwrap();
        for (a, b) in [
            (back.detuning2, p.detuning2), (back.detuning3, p.detuning3), (back.kappa, p.kappa),
            (back.kappa3, p.kappa3), (back.tunneling, p.tunneling), (back.coupling, p.coupling),
            (back.gamma, p.gamma), (back.gamma_sc, p.gamma_sc), (back.n_th, p.n_th),
        ] {
            prop_assert!(rel(a, b) <= 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn spectrum_identities(p in params(), w in -600.0..600.0f64) {
        let chi = response::chi_total(w, &p);
        let chi3 = response::chi3(w, &p);
        let s = response::s_ff(w, &p);
        prop_assert!(s >= 0.0);
        let j2 = p.tunneling * p.tunneling;
        let rhs = chi.norm_sqr() * (p.kappa + j2 * p.kappa3 * chi3.norm_sqr());
        prop_assert!(rel(2.0 * chi.re, rhs) < 1e-10);
        prop_assert!(rel(s, 2.0 * p.coupling * p.coupling * chi.re) < 1e-10);
    }

    #[test]
    fn net_rate_is_self_energy(p in params()) {
        let (a_minus, a_plus) = cooling::rates(&p);
        let sigma = response::self_energy(1.0, &p);
        let scale = a_minus.max(a_plus).max(f64::MIN_POSITIVE);
        prop_assert!(((a_minus - a_plus) + 2.0 * sigma.im).abs() / scale < 1e-10);
        prop_assert_eq!(cooling::spring_shift(&p), sigma.re);
        // the alternative convention keeps the same-frequency conjugate
        let alt = response::self_energy_with(1.0, &p, SelfEnergyConvention::SameFrequencyConjugate);
        let chi = response::chi_total(1.0, &p);
        let expected = 2.0 * p.coupling * p.coupling * chi.im;
        prop_assert!((alt.re - expected).abs() <= 1e-10 * expected.abs().max(1e-300));
    }

    #[test]
    fn rates_scale_with_coupling_squared(p in params(), s in 0.1..10.0f64) {
        let q = NormalizedParams { coupling: p.coupling * s, ..p };
        let (a, b) = cooling::rates(&p);
        let (a2, b2) = cooling::rates(&q);
        prop_assert!(rel(a2, a * s * s) < 1e-12);
        prop_assert!(rel(b2, b * s * s) < 1e-12);
        let (r, r2) = (cooling::cooling_report(&p), cooling::cooling_report(&q));
        if r.is_cooling() {
            prop_assert!(rel(r2.n_q, r.n_q) < 1e-10);
        }
    }

    #[test]
    fn occupancy_ordering(p in params()) {
        let r = cooling::cooling_report(&p);
        if r.is_cooling() {
            prop_assert!(r.n_q >= 0.0 && r.n_c >= 0.0);
            prop_assert!(r.n_f >= r.n_q);
            prop_assert_eq!(r.n_c, p.gamma_sc / r.gamma_opt);
        } else {
            prop_assert!(r.n_f.is_nan() && r.n_q.is_nan() && r.n_c.is_nan());
        }
    }

    #[test]
    fn tunnelling_phase_is_a_gauge(p in params(), phi in -3.2..3.2f64) {
        let base = lyapunov::build_model(&p);
        let rotated = LinearModel { drift: drift_with_phase(&p, phi), ..base.clone() };
        let (s0, m0) = lyapunov::eigen_stable(&base);
        let (s1, m1) = lyapunov::eigen_stable(&rotated);
        prop_assert!((m0 - m1).abs() <= 1e-8 * (1.0 + m0.abs()));
        if s0 && s1 && m0 < -1e-6 {
            let n0 = lyapunov::solve_steady(&base).unwrap().n_phonon;
            let n1 = lyapunov::solve_steady(&rotated).unwrap().n_phonon;
            prop_assert!(rel(n0, n1) < 1e-6, "{n0} vs {n1}");
        }
    }

    #[test]
    fn covariance_is_physical(p in params()) {
        let p = NormalizedParams { gamma: p.gamma.max(1e-4), ..p };
        if let Ok(cov) = lyapunov::solve_steady(&lyapunov::build_model(&p)) {
            let v = cov.covariance;
            let scale = v.abs().max();
            prop_assert!(v.symmetric_eigenvalues().min() >= -1e-9 * scale);
            // uncertainty relation for the mechanical block
            let det = v[(4, 4)] * v[(5, 5)] - v[(4, 5)] * v[(5, 4)];
            prop_assert!(det >= 0.25 * (1.0 - 1e-6), "det {det}");
            prop_assert!(cov.n_phonon >= -1e-9 * scale);
        }
    }

    #[test]
    fn coupled_bound_minimum(kappa in log_uniform(0.1, 1e4), kappa3 in log_uniform(1e-3, 1e3), eta in log_uniform(1e-4, 10.0)) {
        let smin = reduction::s_min(kappa, kappa3);
        prop_assert!(reduction::coupled_bound(eta, kappa, kappa3) >= smin * (1.0 - 1e-12));
        let at_min = reduction::coupled_bound(reduction::eta_min(kappa, kappa3), kappa, kappa3);
        prop_assert!(rel(at_min, smin) < 1e-12);
        prop_assert!(smin > kappa / 4.0);
    }

    #[test]
    fn reduction_definitions(p in params()) {
        let e = reduction::effective_params(&p);
        let eta = p.tunneling / (p.detuning2.powi(2) + p.kappa.powi(2) / 4.0).sqrt();
        prop_assert!(rel(e.eta, eta) < 1e-14);
        prop_assert!(rel(e.coupling_eff, eta * p.coupling) < 1e-14);
        prop_assert!(rel(e.kappa_eff, p.kappa3 + eta * eta * p.kappa) < 1e-14);
        prop_assert!((e.detuning_eff - (p.detuning3 - eta * eta * p.detuning2)).abs() <= 1e-12 * (1.0 + p.detuning3.abs()));
    }

    #[test]
    fn float_text_round_trip(v in any::<f64>()) {
        let back = parse_float(&format_float(v)).unwrap();
        if v.is_nan() {
            prop_assert!(back.is_nan());
        } else {
            prop_assert_eq!(back.to_bits(), v.to_bits());
        }
    }

    #[test]
    fn axis_grid_is_monotone(lo in 0.01..100.0f64, span in 0.01..1e3f64, n in 2usize..300, log in any::<bool>()) {
        let scale = if log { Scale::Log } else { Scale::Lin };
        let a = Axis::new(AxisKey::Omega, lo, lo + span, n, scale).unwrap();
        let v = a.values();
        prop_assert_eq!(v.len(), n);
        prop_assert_eq!(v[0], lo);
        prop_assert_eq!(v[n - 1], lo + span);
        prop_assert!(v.windows(2).all(|w| w[1] > w[0]));
    }
}
