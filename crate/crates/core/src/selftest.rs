//! Built-in validation table run by `levcool selftest`.

use num_complex::Complex64;

use crate::config::Key;
use crate::cooling::{self, DetuningMode};
use crate::error::Result;
use crate::lyapunov;
use crate::params::NormalizedParams;
use crate::presets;
use crate::reduction;
use crate::response::{self, Lineshape};
use crate::sweep::{Axis, AxisKey, Scale};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

fn grid(lo: f64, hi: f64, n: usize, scale: Scale) -> Vec<f64> {
    Axis::new(AxisKey::Omega, lo, hi, n, scale).expect("valid grid").values()
}

fn preset_params(id: &str, kappa: Option<f64>) -> Result<NormalizedParams> {
    let mut spec = presets::preset(id)?.sweep.base;
    if let Some(k) = kappa {
        spec.set(Key::Kappa, k)?;
    }
    spec.resolve()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// A deterministic spread of model parameters covering both cavities.
fn parameter_cloud() -> Vec<NormalizedParams> {
    let mut out = Vec::new();
    for &kappa in &[0.3, 5.0, 100.0, 2000.0] {
        for &kappa3 in &[0.05, 1.0, 20.0] {
            for &j in &[0.0, 0.7, 12.0] {
                for &d2 in &[-150.0, -1.0, 0.0, 3.0, 80.0] {
                    for &d3 in &[-2.0, 0.5, 7.0] {
                        out.push(NormalizedParams {
                            detuning2: d2,
                            detuning3: d3,
                            kappa,
                            kappa3,
                            tunneling: j,
                            coupling: 0.3,
                            gamma: 1e-5,
                            gamma_sc: 1e-3,
                            n_th: 0.0,
                        });
                    }
                }
            }
        }
    }
    out
}

fn lorentzian_reduction() -> Result<Check> {
    let mut worst = 0.0f64;
    for p in [preset_params("fig3c", None)?, preset_params("fig3a", None)?] {
        let p = p.single_cavity();
        for w in grid(-300.0, 300.0, 4001, Scale::Lin) {
            let chi2 = 1.0 / Complex64::new(p.kappa / 2.0, -(w + p.detuning2));
            let expected = p.coupling * p.coupling * chi2.norm_sqr() * p.kappa;
            worst = worst.max(rel(response::s_ff(w, &p), expected));
        }
    }
    Ok(check("lorentzian reduction", worst < 1e-12, format!("max rel err {worst:.2e}")))
}

fn self_energy_identity() -> Check {
    let mut worst = 0.0f64;
    for p in parameter_cloud() {
        for w in [-3.0, -1.0, 0.4, 1.0, 25.0] {
            let chi = response::chi_total(w, &p);
            let chi3 = response::chi3(w, &p);
            let lhs = 2.0 * chi.re;
            let rhs = chi.norm_sqr() * (p.kappa + p.tunneling * p.tunneling * p.kappa3 * chi3.norm_sqr());
            worst = worst.max(rel(lhs, rhs));
        }
        let g = cooling::net_rate(&p);
        let sigma = response::self_energy(1.0, &p);
        let scale = cooling::rates(&p).0.abs().max(f64::MIN_POSITIVE);
        worst = worst.max((g + 2.0 * sigma.im).abs() / scale);
    }
    check("self-energy identities", worst < 1e-10, format!("max rel err {worst:.2e}"))
}

fn lineshapes() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (id, want) in [("fig3b", Lineshape::Fano), ("fig3d", Lineshape::EitLike), ("fig3f", Lineshape::Fano)] {
        let fig = presets::preset(id)?;
        let p = fig.sweep.base.resolve()?;
        let samples = response::spectrum_scan(&fig.sweep.axis1.values(), &p)?;
        let ext = response::find_extrema(&samples)?;
        let center = -p.detuning3;
        let shape = response::classify(&ext, center, 20.0);
        let near: Vec<f64> = ext.iter().filter(|e| (e.omega - center).abs() <= 20.0).map(|e| e.omega).collect();
        let localized = match want {
            Lineshape::Fano => near.iter().all(|w| (w - center).abs() < 2.0),
            _ => ext.iter().any(|e| e.kind == response::ExtremumKind::Min && (e.omega - center).abs() < 0.05),
        };
        out.push(check("lineshape morphology", shape == want && localized, format!("{id}: {shape:?} at {near:.3?}")));
    }
    let mut worst = 0.0f64;
    for id in ["fig3a", "fig3c", "fig3e"] {
        let fig = presets::preset(id)?;
        let p = fig.sweep.base.resolve()?;
        for w in fig.sweep.axis1.values() {
            if (w + p.detuning3).abs() > 20.0 {
                worst = worst.max(rel(response::s_ff(w, &p), response::s_ff(w, &p.single_cavity())));
            }
        }
    }
    out.push(check("far-field agreement", worst < 1e-3, format!("max rel dev {worst:.3e}")));
    Ok(out)
}

fn blue_optimum() -> Result<Check> {
    let p = NormalizedParams { detuning2: 0.0, ..preset_params("fig4b", None)? };
    let coupled = cooling::max_damping_detuning(&p)?;
    let single = cooling::max_damping_detuning(&p.single_cavity())?;
    Ok(check(
        "blue-detuned optimum",
        coupled > 1e-3 && single < -1e-3,
        format!("argmax coupled {coupled:.3}, single {single:.3}"),
    ))
}

fn ground_state_window() -> Result<Vec<Check>> {
    let mut worst = 0.0f64;
    let mut at = 0.0;
    for kappa in grid(10.0, 100.0, 50, Scale::Log) {
        let n = cooling::cooling_report(&preset_params("fig5b", Some(kappa))?).n_f;
        if n.is_nan() || n > worst {
            worst = n;
            at = kappa;
        }
    }
    let p = preset_params("fig5b", Some(100.0))?;
    let single = NormalizedParams { detuning2: -50.0, ..p.single_cavity() };
    let ns = cooling::cooling_report(&single).n_f;
    Ok(vec![
        check("ground-state window (coupled)", worst < 1.0, format!("max n_f {worst:.4} at kappa {at:.2}")),
        check("ground-state window (single)", ns > 1.0, format!("n_f {ns:.3} at kappa 100")),
    ])
}

fn monotonicity() -> Result<Vec<Check>> {
    let mut ok_sc = true;
    for kappa in [10.0, 100.0, 1000.0] {
        let p = preset_params("fig6a", Some(kappa))?;
        let ns: Vec<f64> = [0.0, 1e-4, 1e-3, 1e-2, 1e-1]
            .iter()
            .map(|&g| cooling::cooling_report(&NormalizedParams { gamma_sc: g, ..p }).n_f)
            .collect();
        ok_sc &= ns.windows(2).all(|w| w[1] > w[0]);
    }
    let ns: Vec<f64> = [0.5, 1.0, 2.0, 5.0]
        .iter()
        .map(|&k3| {
            let mut spec = presets::preset("fig6b")?.sweep.base;
            spec.set(Key::Kappa, 100.0)?;
            spec.set(Key::Kappa3, k3)?;
            spec.resolve().map(|q| cooling::cooling_report(&q).n_f)
        })
        .collect::<Result<_>>()?;
    Ok(vec![
        check("monotone in gamma_sc", ok_sc, "kappa in {10, 100, 1000}".into()),
        check("monotone in kappa3 > 1", ns[1] < ns[2] && ns[2] < ns[3], format!("n_f {ns:.3?}")),
    ])
}

fn oracle() -> Result<Check> {
    let p = preset_params("fig5b", Some(100.0))?;
    let devs: Vec<f64> = [0.25, 0.1, 0.05, 0.025]
        .iter()
        .map(|&c| lyapunov::oracle_compare(&NormalizedParams { coupling: c, ..p }).map(|r| r.rel_dev))
        .collect::<Result<_>>()?;
    let monotone = devs.windows(2).all(|w| w[1] < w[0]);
    Ok(check("oracle equivalence", devs[3] <= 0.2 && monotone, format!("rel dev {devs:.4?}")))
}

/// Single-cavity grid with the auxiliary mode detached.
fn single_stability() -> Check {
    let (mut agree, mut total) = (0, 0);
    for kappa in grid(1.0, 1000.0, 10, Scale::Log) {
        for d2 in grid(-2.0 * kappa, 2.0 * kappa, 10, Scale::Lin) {
            for c in grid(0.05, 20.0, 10, Scale::Log) {
                let p = NormalizedParams {
                    detuning2: d2,
                    detuning3: 0.5,
                    kappa,
                    kappa3: 1.0,
                    tunneling: 0.0,
                    coupling: c,
                    gamma: 0.0,
                    gamma_sc: 0.0,
                    n_th: 0.0,
                };
                let v = reduction::stability_single(&p);
                if v.margin.abs() < 1e-6 {
                    continue;
                }
                total += 1;
                agree += usize::from(v.stable == lyapunov::eigen_stable(&lyapunov::build_model(&p)).0);
            }
        }
    }
    check("stability (single cavity)", agree == total, format!("{agree}/{total} agree"))
}

/// In-regime coupled grid on the `Delta_eff = -omega_m` surface.
pub fn coupled_stability_grid() -> Vec<NormalizedParams> {
    let (d3, kappa3) = (0.5, 1.0);
    let mut out = Vec::new();
    for kappa in grid(200.0, 1000.0, 8, Scale::Log) {
        let j_lo = (1.01 * (d3 + 1.0) * kappa).sqrt();
        for j in grid(j_lo, kappa / 10.0, 6, Scale::Lin) {
            let disc = j.powi(4) - (d3 + 1.0) * (d3 + 1.0) * kappa * kappa;
            let d2 = (j * j + disc.sqrt()) / (2.0 * (d3 + 1.0));
            let eta = j / (d2 * d2 + kappa * kappa / 4.0).sqrt();
            let bound = reduction::coupled_bound(eta, kappa, kappa3);
            for f in grid(0.1, 10.0, 6, Scale::Log) {
                out.push(NormalizedParams {
                    detuning2: d2,
                    detuning3: d3,
                    kappa,
                    kappa3,
                    tunneling: j,
                    coupling: (f * bound).sqrt(),
                    gamma: 1e-5,
                    gamma_sc: 0.0,
                    n_th: 0.0,
                });
            }
        }
    }
    out
}

fn coupled_stability() -> Check {
    let (mut agree, mut total) = (0, 0);
    for p in coupled_stability_grid() {
        let v = reduction::stability_coupled(&p);
        if v.margin.abs() < 1e-3 || !reduction::effective_params(&p).regime_ok() {
            continue;
        }
        total += 1;
        agree += usize::from(v.stable == lyapunov::eigen_stable(&lyapunov::build_model(&p)).0);
    }
    let frac = agree as f64 / total.max(1) as f64;
    check("stability (coupled bound)", frac >= 0.99, format!("{agree}/{total} agree ({:.1}%)", 100.0 * frac))
}

fn stability_enlargement() -> Check {
    let mut ok = true;
    for kappa in grid(0.01, 1e4, 40, Scale::Log) {
        for kappa3 in grid(1e-3, 1e3, 25, Scale::Log) {
            ok &= reduction::s_min(kappa, kappa3) > kappa / 4.0;
        }
    }
    check("stability enlargement", ok, "1000 (kappa, kappa3) pairs".into())
}

fn thermal_limits() -> Result<Check> {
    let mut worst = 0.0f64;
    for p in parameter_cloud().into_iter().step_by(5) {
        for (n_th, gamma, gamma_sc) in [(0.0, 1e-3, 1e-4), (3.0, 0.2, 0.0), (12.5, 1e-2, 0.3)] {
            let q = NormalizedParams { coupling: 0.0, n_th, gamma, gamma_sc, ..p };
            let n = lyapunov::solve_steady(&lyapunov::build_model(&q))?.n_phonon;
            worst = worst.max(rel(n, n_th + gamma_sc / gamma));
        }
    }
    Ok(check("thermal limits", worst < 1e-10, format!("max rel err {worst:.2e}")))
}

fn detuning_consistency() -> Result<Check> {
    let p = preset_params("fig5b", Some(100.0))?;
    let closed = cooling::optimal_detuning(&p, DetuningMode::ClosedForm)?;
    let numeric = cooling::optimal_detuning(&p, DetuningMode::Numeric)?;
    Ok(check("optimal detuning", rel(numeric, closed) < 0.2, format!("numeric {numeric:.3}, closed form {closed:.3}")))
}

/// Runs every check. Errors inside a check are reported as failures.
pub fn run_all() -> Vec<Check> {
    let mut out = Vec::new();
    let mut push = |name: &'static str, r: Result<Vec<Check>>| match r {
        Ok(c) => out.extend(c),
        Err(e) => out.push(check(name, false, format!("error: {e}"))),
    };
    push("lorentzian reduction", lorentzian_reduction().map(|c| vec![c]));
    push("self-energy identities", Ok(vec![self_energy_identity()]));
    push("lineshape morphology", lineshapes());
    push("blue-detuned optimum", blue_optimum().map(|c| vec![c]));
    push("ground-state window", ground_state_window());
    push("monotonicity", monotonicity());
    push("optimal detuning", detuning_consistency().map(|c| vec![c]));
    push("oracle equivalence", oracle().map(|c| vec![c]));
    push("stability (single cavity)", Ok(vec![single_stability()]));
    push("stability (coupled bound)", Ok(vec![coupled_stability()]));
    push("stability enlargement", Ok(vec![stability_enlargement()]));
    push("thermal limits", thermal_limits().map(|c| vec![c]));
    out
}

/// Fixed-width pass/fail table.
pub fn render(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut s = String::new();
    for c in checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        s.push_str(&format!("{mark}  {:<width$}  {}\n", c.name, c.detail));
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    s.push_str(&format!("{passed}/{} checks passed\n", checks.len()));
    s
}
