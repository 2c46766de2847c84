//! Parameter sets and sweep layouts for the figure reproductions, plus the
//! gnuplot sidecar that draws them.

use std::fmt::Write as _;

use crate::config::Key;
use crate::config::{DetuningSpec, KappaSpec, ModelSpec, TunnelingSpec};
use crate::error::{Error, Result};
use crate::params::TunnelingPreset;
use crate::sweep::{Axis, AxisKey, Quantity, QuantityKind, Scale, SweepSpec};

pub const PRESET_IDS: [&str; 12] =
    ["fig3a", "fig3b", "fig3c", "fig3d", "fig3e", "fig3f", "fig4a", "fig4b", "fig5a", "fig5b", "fig6a", "fig6b"];

/// How the sidecar script draws the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// One curve per quantity against axis1.
    Lines { log_x: bool, log_y: bool },
    /// Colour map of the first quantity over (axis1, axis2).
    Map { log_y: bool },
    /// One curve per axis2 value.
    Family { log_x: bool, log_y: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub id: &'static str,
    pub title: &'static str,
    pub sweep: SweepSpec,
    pub plot: PlotKind,
}

/// Detuning `Delta_3`, decay `kappa3`, damping `gamma` shared by all figures.
fn common() -> ModelSpec {
    ModelSpec {
        detuning3: 0.5,
        kappa: Some(KappaSpec::Value(100.0)),
        kappa3: Some(1.0),
        tunneling: TunnelingSpec::Preset(TunnelingPreset::SqrtKappaOmegaM),
        gamma: 1e-5,
        ..ModelSpec::default()
    }
}

/// Spectrum panels: `Omega_m = 5`.
fn spectrum_model(detuning2: f64) -> ModelSpec {
    ModelSpec { detuning2: DetuningSpec::Value(detuning2), coupling: Some(5.0), ..common() }
}

/// Cooling-limit panels: `Omega_m = 1/4`, closed-form optimum detuning,
/// 50 nm sphere at 1 um.
fn cooling_model() -> ModelSpec {
    let mut m = ModelSpec { detuning2: DetuningSpec::ClosedFormOptimum, coupling: Some(0.25), ..common() };
    m.sphere_given = true;
    m
}

fn axis(key: AxisKey, lo: f64, hi: f64, n: usize, scale: Scale) -> Axis {
    Axis::new(key, lo, hi, n, scale).expect("preset axes are valid")
}

fn param(key: Key) -> AxisKey {
    AxisKey::Param(key)
}

pub fn preset(id: &str) -> Result<FigurePreset> {
    let spectrum = |id, title, detuning2, lo, hi| FigurePreset {
        id,
        title,
        sweep: SweepSpec {
            base: spectrum_model(detuning2),
            axis1: axis(AxisKey::Omega, lo, hi, crate::response::DEFAULT_GRID_POINTS, Scale::Lin),
            axis2: None,
            quantities: vec![Quantity::coupled(QuantityKind::Sff), Quantity::single(QuantityKind::Sff)],
        },
        plot: PlotKind::Lines { log_x: false, log_y: false },
    };
    let wide = (-300.0, 300.0);
    let detail = (-20.5, 19.5);
    let rate_map = |id, title, single| FigurePreset {
        id,
        title,
        sweep: SweepSpec {
            base: ModelSpec { coupling: Some(0.25), ..common() },
            axis1: axis(param(Key::Delta2p), -200.0, 200.0, 201, Scale::Lin),
            axis2: Some(axis(param(Key::Kappa), 1.0, 1000.0, 61, Scale::Log)),
            quantities: vec![Quantity { kind: QuantityKind::GammaOpt, single }],
        },
        plot: PlotKind::Map { log_y: true },
    };
    Ok(match id {
        "fig3a" => spectrum("fig3a", "force spectrum, Delta'_2 = +100", 100.0, wide.0, wide.1),
        "fig3b" => spectrum("fig3b", "Fano detail, Delta'_2 = +100", 100.0, detail.0, detail.1),
        "fig3c" => spectrum("fig3c", "force spectrum, Delta'_2 = 0", 0.0, wide.0, wide.1),
        "fig3d" => spectrum("fig3d", "EIT-like detail, Delta'_2 = 0", 0.0, detail.0, detail.1),
        "fig3e" => spectrum("fig3e", "force spectrum, Delta'_2 = -100", -100.0, wide.0, wide.1),
        "fig3f" => spectrum("fig3f", "Fano detail, Delta'_2 = -100", -100.0, detail.0, detail.1),
        "fig4a" => rate_map("fig4a", "net cooling rate, single cavity", true),
        "fig4b" => rate_map("fig4b", "net cooling rate, coupled cavities", false),
        "fig5a" => FigurePreset {
            id: "fig5a",
            title: "cooling limit vs tunnelling, kappa = J^2",
            sweep: SweepSpec {
                base: ModelSpec {
                    kappa: Some(KappaSpec::TunnelingSquared),
                    tunneling: TunnelingSpec::Value(1.0),
                    detuning2: DetuningSpec::Value(1.0),
                    ..cooling_model()
                },
                axis1: axis(param(Key::J), 0.5, 20.0, 196, Scale::Lin),
                axis2: None,
                quantities: vec![Quantity::coupled(QuantityKind::NF)],
            },
            plot: PlotKind::Lines { log_x: false, log_y: true },
        },
        "fig5b" => FigurePreset {
            id: "fig5b",
            title: "cooling limit vs kappa",
            sweep: SweepSpec {
                base: cooling_model(),
                axis1: axis(param(Key::Kappa), 1.0, 1000.0, 200, Scale::Log),
                axis2: None,
                quantities: vec![Quantity::coupled(QuantityKind::NF), Quantity::single(QuantityKind::NF)],
            },
            plot: PlotKind::Lines { log_x: true, log_y: true },
        },
        "fig6a" => FigurePreset {
            id: "fig6a",
            title: "cooling limit vs kappa for several radii",
            sweep: SweepSpec {
                base: cooling_model(),
                axis1: axis(param(Key::Kappa), 1.0, 1000.0, 200, Scale::Log),
                axis2: Some(axis(param(Key::RadiusNm), 25.0, 100.0, 4, Scale::Lin)),
                quantities: vec![Quantity::coupled(QuantityKind::NF)],
            },
            plot: PlotKind::Family { log_x: true, log_y: true },
        },
        "fig6b" => FigurePreset {
            id: "fig6b",
            title: "cooling limit vs kappa3 for several kappa",
            sweep: SweepSpec {
                base: cooling_model(),
                axis1: axis(param(Key::Kappa3), 0.1, 10.0, 200, Scale::Log),
                axis2: Some(axis(param(Key::Kappa), 10.0, 1000.0, 3, Scale::Log)),
                quantities: vec![Quantity::coupled(QuantityKind::NF)],
            },
            plot: PlotKind::Family { log_x: true, log_y: true },
        },
        other => {
            return Err(Error::Validation(format!(
                "unknown figure id `{other}` (expected one of {})",
                PRESET_IDS.join(", ")
            )))
        }
    })
}

impl FigurePreset {
    /// Gnuplot script drawing `csv_name`, which is read relative to the
    /// script's working directory.
    pub fn gnuplot_script(&self, csv_name: &str) -> String {
        let s = &self.sweep;
        let header = s.header();
        let mut g = String::new();
        let file = csv_name.replace('\'', "''");
        writeln!(g, "# {}: {}", self.id, self.title).unwrap();
        writeln!(g, "set datafile separator \",\"").unwrap();
        writeln!(g, "set title \"{}\" noenhanced", self.title).unwrap();
        writeln!(g, "set xlabel \"{}\" noenhanced", header[0]).unwrap();
        match self.plot {
            PlotKind::Lines { log_x, log_y } => {
                logscale(&mut g, log_x, log_y);
                writeln!(g, "set key autotitle columnhead noenhanced").unwrap();
                let curves: Vec<String> = (0..s.quantities.len())
                    .map(|i| {
                        let src = if i == 0 { format!("'{file}'") } else { "''".into() };
                        format!("{src} using 1:{} with lines", i + 2)
                    })
                    .collect();
                writeln!(g, "plot {}", curves.join(", \\\n     ")).unwrap();
            }
            PlotKind::Map { log_y } => {
                writeln!(g, "set ylabel \"{}\" noenhanced", header[1]).unwrap();
                writeln!(g, "set cblabel \"{}\" noenhanced", header[2]).unwrap();
                if log_y {
                    writeln!(g, "set logscale y").unwrap();
                }
                writeln!(g, "set view map").unwrap();
                writeln!(g, "splot '{file}' using 1:2:3 skip 1 with points pointtype 5 pointsize 0.6 palette notitle")
                    .unwrap();
            }
            PlotKind::Family { log_x, log_y } => {
                logscale(&mut g, log_x, log_y);
                writeln!(g, "set ylabel \"{}\" noenhanced", header[2]).unwrap();
                let a2 = s.axis2.expect("family plots have a second axis");
                let values: Vec<String> = a2.values().iter().map(|v| format!("{v}")).collect();
                writeln!(
                    g,
                    "plot for [v in \"{}\"] '{file}' using 1:(abs($2 - real(v)) <= 1e-9 * abs(real(v)) ? $3 : NaN) skip 1 with lines title sprintf(\"{} = %s\", v) noenhanced",
                    values.join(" "),
                    header[1]
                )
                .unwrap();
            }
        }
        g
    }
}

fn logscale(g: &mut String, log_x: bool, log_y: bool) {
    match (log_x, log_y) {
        (true, true) => writeln!(g, "set logscale xy").unwrap(),
        (true, false) => writeln!(g, "set logscale x").unwrap(),
        (false, true) => writeln!(g, "set logscale y").unwrap(),
        (false, false) => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reference values: (id, delta3, kappa3, J, Omega_m, gamma, delta2p,
    /// radius_nm or NaN when scattering is off), evaluated at kappa = 100
    /// (fig5a: J = 10, hence kappa = 100).
    type Row = (&'static str, f64, f64, f64, f64, f64, f64, f64);
    const REFERENCE: [Row; 12] = [
        ("fig3a", 0.5, 1.0, 10.0, 5.0, 1e-5, 100.0, f64::NAN),
        ("fig3b", 0.5, 1.0, 10.0, 5.0, 1e-5, 100.0, f64::NAN),
        ("fig3c", 0.5, 1.0, 10.0, 5.0, 1e-5, 0.0, f64::NAN),
        ("fig3d", 0.5, 1.0, 10.0, 5.0, 1e-5, 0.0, f64::NAN),
        ("fig3e", 0.5, 1.0, 10.0, 5.0, 1e-5, -100.0, f64::NAN),
        ("fig3f", 0.5, 1.0, 10.0, 5.0, 1e-5, -100.0, f64::NAN),
        ("fig4a", 0.5, 1.0, 10.0, 0.25, 1e-5, 0.0, f64::NAN),
        ("fig4b", 0.5, 1.0, 10.0, 0.25, 1e-5, 0.0, f64::NAN),
        ("fig5a", 0.5, 1.0, 10.0, 0.25, 1e-5, 1.0, 50.0),
        ("fig5b", 0.5, 1.0, 10.0, 0.25, 1e-5, 100.0 / 1.5, 50.0),
        ("fig6a", 0.5, 1.0, 10.0, 0.25, 1e-5, 100.0 / 1.5, 50.0),
        ("fig6b", 0.5, 1.0, 10.0, 0.25, 1e-5, 100.0 / 1.5, 50.0),
    ];

    #[test]
    fn presets_match_reference_table() {
        for (id, delta3, kappa3, j, omega, gamma, delta2p, radius) in REFERENCE {
            let fig = preset(id).unwrap();
            let mut spec = fig.sweep.base.clone();
            if id == "fig5a" {
                spec.set(Key::J, 10.0).unwrap();
            } else {
                spec.set(Key::Kappa, 100.0).unwrap();
            }
            let p = spec.resolve().unwrap();
            assert_eq!(p.kappa, 100.0, "{id}");
            assert_eq!(p.detuning3, delta3, "{id}");
            assert_eq!(p.kappa3, kappa3, "{id}");
            assert_eq!(p.tunneling, j, "{id}");
            assert_eq!(p.coupling, omega, "{id}");
            assert_eq!(p.gamma, gamma, "{id}");
            assert!((p.detuning2 - delta2p).abs() < 1e-12, "{id}");
            if radius.is_nan() {
                assert_eq!(p.gamma_sc, 0.0, "{id}");
            } else {
                assert_eq!(spec.sphere.radius_nm, radius, "{id}");
                assert_eq!((spec.sphere.lambda_um, spec.sphere.epsilon), (1.0, 2.0), "{id}");
                assert!((p.gamma_sc - 1.0336e-3).abs() < 1e-7, "{id}");
            }
        }
    }

    #[test]
    fn every_id_resolves() {
        for id in PRESET_IDS {
            assert_eq!(preset(id).unwrap().id, id);
        }
        assert!(preset("fig7").is_err());
    }

    #[test]
    fn scripts_reference_the_csv() {
        for id in PRESET_IDS {
            let s = preset(id).unwrap().gnuplot_script("out.csv");
            assert!(s.contains("'out.csv'"), "{id}");
            assert!(s.contains("set datafile separator \",\""));
        }
        let fam = preset("fig6a").unwrap().gnuplot_script("a.csv");
        assert!(fam.contains("\"25 50 75 100\""), "{fam}");
    }
}
