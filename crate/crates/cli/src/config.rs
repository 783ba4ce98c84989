//! Run configuration: presets, JSON files and command-line flags, merged in that order.

use std::path::{Path, PathBuf};

use serde::Deserialize;

/// Raw configuration; every field is optional so layers can be overlaid.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub preset: Option<String>,
    pub problem: Option<String>,
    pub scheme: Option<String>,
    pub h: Option<f64>,
    pub steps: Option<usize>,
    pub theta: Option<f64>,
    pub tableau: Option<String>,
    pub series_order: Option<usize>,
    pub tdd: Option<String>,
    pub nodes: Option<usize>,
    pub frame: Option<String>,
    pub inertia: Option<Vec<f64>>,
    pub y0: Option<Vec<f64>>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub spectrum: Option<Vec<f64>>,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub h_list: Option<Vec<f64>>,
    pub t_end: Option<f64>,
}

macro_rules! overlay_fields {
    ($base:expr, $top:expr, $($f:ident),*) => {
        RunConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

impl RunConfig {
    /// Fields set in `top` win.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        overlay_fields!(
            self, top, preset, problem, scheme, h, steps, theta, tableau, series_order, tdd, nodes, frame,
            inertia, y0, a, b, spectrum, k, seed, out, h_list, t_end
        )
    }

    pub fn from_file(path: &Path) -> Result<RunConfig, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}

/// Named desk-scale configurations.
pub const PRESETS: &[(&str, &str)] = &[
    ("heavytop-theta05", "heavy top, SLGI theta = 1/2, h = 0.05, 10^4 steps"),
    ("heavytop-theta0", "heavy top, SLGI theta = 0, h = 0.05, 10^4 steps"),
    ("heavytop-rkmk0", "heavy top, explicit RKMK comparator, h = 0.05, 10^4 steps"),
    ("frb-s3-dg", "quaternion rigid body, Gonzalez discrete gradient, h = 1/64, 10^4 steps"),
    ("frb-s2-rkmk4", "rigid body on the sphere, RKMK4, h = 0.01, 2000 steps"),
    ("torus-descent", "torus gradient descent from (0.3, 1.2), h = 0.01, 3000 steps"),
    ("pca", "Stiefel PCA flow, A = diag(5, 4, 3, 2, 1), k = 2, h = 0.02, 5000 steps"),
];

pub fn preset_help() -> String {
    let mut s = String::from("Presets:\n");
    for (name, what) in PRESETS {
        s.push_str(&format!("  {name:<18} {what}\n"));
    }
    s
}

pub fn preset(name: &str) -> Result<RunConfig, String> {
    let base = |problem: &str, scheme: &str, h: f64, steps: usize| RunConfig {
        problem: Some(problem.into()),
        scheme: Some(scheme.into()),
        h: Some(h),
        steps: Some(steps),
        ..RunConfig::default()
    };
    Ok(match name {
        "heavytop-theta05" => RunConfig {
            theta: Some(0.5),
            ..base("heavytop", "slgi", 0.05, 10_000)
        },
        "heavytop-theta0" => RunConfig {
            theta: Some(0.0),
            ..base("heavytop", "slgi", 0.05, 10_000)
        },
        "heavytop-rkmk0" => RunConfig {
            theta: Some(0.0),
            ..base("heavytop", "rkmk_theta", 0.05, 10_000)
        },
        "frb-s3-dg" => RunConfig {
            tdd: Some("gonzalez".into()),
            ..base("frb_s3", "dg", 1.0 / 64.0, 10_000)
        },
        "frb-s2-rkmk4" => base("frb_s2", "rkmk4", 0.01, 2000),
        "torus-descent" => base("torus", "lie_euler", 0.01, 3000),
        "pca" => RunConfig {
            spectrum: Some(vec![5.0, 4.0, 3.0, 2.0, 1.0]),
            k: Some(2),
            ..base("pca", "lie_euler", 0.02, 5000)
        },
        _ => return Err(format!("unknown preset '{name}'")),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemId {
    FrbS2,
    FrbS3,
    HeavyTop,
    Duffing,
    Torus,
    Pca,
}

impl ProblemId {
    fn parse(s: &str) -> Result<Self, String> {
        Ok(match s {
            "frb_s2" => ProblemId::FrbS2,
            "frb_s3" => ProblemId::FrbS3,
            "heavytop" => ProblemId::HeavyTop,
            "duffing" => ProblemId::Duffing,
            "torus" => ProblemId::Torus,
            "pca" => ProblemId::Pca,
            _ => return Err(format!("unknown problem '{s}' (frb_s2, frb_s3, heavytop, duffing, torus, pca)")),
        })
    }

    fn default_scheme(self) -> &'static str {
        match self {
            ProblemId::FrbS2 => "rkmk4",
            ProblemId::FrbS3 => "dg",
            ProblemId::HeavyTop => "slgi",
            ProblemId::Duffing | ProblemId::Torus | ProblemId::Pca => "lie_euler",
        }
    }

    fn default_h(self) -> f64 {
        match self {
            ProblemId::FrbS2 | ProblemId::Duffing => 0.1,
            ProblemId::FrbS3 => 1.0 / 64.0,
            ProblemId::HeavyTop => 0.05,
            ProblemId::Torus => 0.01,
            ProblemId::Pca => 0.02,
        }
    }

    fn state_len(self) -> Option<usize> {
        match self {
            ProblemId::FrbS2 => Some(3),
            ProblemId::FrbS3 => Some(4),
            ProblemId::Duffing | ProblemId::Torus => Some(2),
            ProblemId::HeavyTop | ProblemId::Pca => None,
        }
    }
}

const FROZEN_SCHEMES: &[&str] = &["lie_euler", "heun_rkmk", "heun_cg_left", "heun_cg_right", "rkmk", "rkmk4", "cf4"];
const HAMILTONIAN_SCHEMES: &[&str] = &["slgi", "theta", "rkmk_theta"];

/// Validated settings with defaults filled in.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub problem: ProblemId,
    pub scheme: String,
    pub h: f64,
    pub steps: usize,
    pub theta: f64,
    pub tableau: String,
    pub series_order: usize,
    pub tdd: String,
    pub nodes: usize,
    pub frame: String,
    pub inertia: Option<Vec<f64>>,
    pub y0: Option<Vec<f64>>,
    pub a: f64,
    pub b: f64,
    pub spectrum: Vec<f64>,
    pub k: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub h_list: Vec<f64>,
    pub t_end: f64,
}

impl Settings {
    pub fn resolve(cfg: RunConfig) -> Result<Settings, String> {
        let cfg = match &cfg.preset {
            Some(name) => preset(name)?.overlay(cfg),
            None => cfg,
        };
        let problem = ProblemId::parse(cfg.problem.as_deref().ok_or("no problem given (use --problem or --preset)")?)?;
        let scheme = cfg.scheme.unwrap_or_else(|| problem.default_scheme().into());
        let allowed: Vec<&str> = match problem {
            ProblemId::HeavyTop => HAMILTONIAN_SCHEMES.to_vec(),
            ProblemId::FrbS3 => std::iter::once("dg").chain(FROZEN_SCHEMES.iter().copied()).collect(),
            _ => FROZEN_SCHEMES.to_vec(),
        };
        if !allowed.contains(&scheme.as_str()) {
            return Err(format!("scheme '{scheme}' is not available here; choose one of {}", allowed.join(", ")));
        }
        let h = cfg.h.unwrap_or(problem.default_h());
        if !(h.is_finite() && h > 0.0) {
            return Err(format!("h must be positive, got {h}"));
        }
        let steps = cfg.steps.unwrap_or(100);
        if steps == 0 {
            return Err("steps must be at least 1".into());
        }
        let theta = cfg.theta.unwrap_or(0.5);
        if !(0.0..=1.0).contains(&theta) {
            return Err(format!("theta must lie in [0, 1], got {theta}"));
        }
        let tableau = cfg.tableau.unwrap_or_else(|| "kutta".into());
        ligi::integrators::ButcherTableau::by_name(&tableau).map_err(|e| e.to_string())?;
        let series_order = cfg.series_order.unwrap_or(4);
        let tdd = cfg.tdd.unwrap_or_else(|| "gonzalez".into());
        let nodes = cfg.nodes.unwrap_or(2);
        if nodes == 0 {
            return Err("nodes must be at least 1".into());
        }
        ligi::discrete_gradient::TddKind::by_name(&tdd, nodes).map_err(|e| e.to_string())?;
        let frame = cfg.frame.unwrap_or_else(|| "sl2".into());
        ligi::problems::DuffingFrame::by_name(&frame).map_err(|e| e.to_string())?;
        if let Some(inertia) = &cfg.inertia {
            if inertia.len() != 3 || inertia.iter().any(|v| !(*v > 0.0)) {
                return Err("inertia needs three positive entries".into());
            }
        }
        if let (Some(y0), Some(n)) = (&cfg.y0, problem.state_len()) {
            if y0.len() != n {
                return Err(format!("y0 needs {n} entries for this problem, got {}", y0.len()));
            }
        } else if cfg.y0.is_some() {
            return Err("y0 is not configurable for this problem".into());
        }
        let spectrum = cfg.spectrum.unwrap_or_else(|| vec![5.0, 4.0, 3.0, 2.0, 1.0]);
        let k = cfg.k.unwrap_or(2);
        if k == 0 || k > spectrum.len() {
            return Err(format!("k must lie in 1..={}", spectrum.len()));
        }
        let h_list = cfg.h_list.unwrap_or_else(|| vec![0.1, 0.05, 0.025, 0.0125]);
        let t_end = cfg.t_end.unwrap_or(2.0);
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(format!("t-end must be positive, got {t_end}"));
        }
        Ok(Settings {
            problem,
            scheme,
            h,
            steps,
            theta,
            tableau,
            series_order,
            tdd,
            nodes,
            frame,
            inertia: cfg.inertia,
            y0: cfg.y0,
            a: cfg.a.unwrap_or(1.0),
            b: cfg.b.unwrap_or(1.0),
            spectrum,
            k,
            seed: cfg.seed.unwrap_or(0),
            out: cfg.out,
            h_list,
            t_end,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_and_preset() {
        let file = RunConfig {
            preset: Some("heavytop-theta05".into()),
            steps: Some(20),
            ..Default::default()
        };
        let flags = RunConfig {
            steps: Some(5),
            ..Default::default()
        };
        let s = Settings::resolve(file.overlay(flags)).unwrap();
        assert_eq!((s.problem, s.scheme.as_str(), s.steps, s.theta), (ProblemId::HeavyTop, "slgi", 5, 0.5));
    }

    #[test]
    fn every_preset_resolves() {
        for (name, _) in PRESETS {
            let cfg = RunConfig {
                preset: Some((*name).into()),
                ..Default::default()
            };
            Settings::resolve(cfg).unwrap();
        }
    }

    #[test]
    fn bad_values_are_rejected() {
        let with = |f: fn(&mut RunConfig)| {
            let mut c = RunConfig {
                problem: Some("frb_s2".into()),
                ..Default::default()
            };
            f(&mut c);
            Settings::resolve(c)
        };
        assert!(with(|_| {}).is_ok());
        assert!(with(|c| c.h = Some(0.0)).is_err());
        assert!(with(|c| c.steps = Some(0)).is_err());
        assert!(with(|c| c.scheme = Some("slgi".into())).is_err());
        assert!(with(|c| c.problem = Some("kepler".into())).is_err());
        assert!(with(|c| c.y0 = Some(vec![1.0, 0.0])).is_err());
        assert!(with(|c| c.tableau = Some("dopri".into())).is_err());
    }
}
