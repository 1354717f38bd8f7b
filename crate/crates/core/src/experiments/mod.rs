//! Randomized experiments and the constant-figure grids, with CSV and SVG
//! output.
//!
//! Trial `i` of a run seeded with `s` draws its configuration from
//! `split_seed(s, i)`, so runs are reproducible bit-for-bit and independent
//! of the number of worker threads.

mod csv;
mod plot;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::bounds::{bound_report, c_rho, c_tilde, BoundReport};
use crate::nodes::rng::split_seed;
use crate::nodes::{
    gen_compare_bdgy, gen_compare_lili, gen_one_pair, gen_pairwise, interleaved_pairing,
    pairing_stats, NodeSet, Pair,
};
use crate::spectral::{spectral_summary, Mode, SpectralSummary};

pub use csv::{emit_csv, CSV_HEADER};
pub use plot::emit_plot;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    OnePair,
    Pairwise,
    CompareBdgy,
    CompareLili,
    FigCrho,
    FigCtilde,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::OnePair,
        ExperimentKind::Pairwise,
        ExperimentKind::CompareBdgy,
        ExperimentKind::CompareLili,
        ExperimentKind::FigCrho,
        ExperimentKind::FigCtilde,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::OnePair => "one-pair",
            ExperimentKind::Pairwise => "pairwise",
            ExperimentKind::CompareBdgy => "compare-bdgy",
            ExperimentKind::CompareLili => "compare-lili",
            ExperimentKind::FigCrho => "fig-crho",
            ExperimentKind::FigCtilde => "fig-ctilde",
        }
    }

    pub fn is_figure(self) -> bool {
        matches!(self, ExperimentKind::FigCrho | ExperimentKind::FigCtilde)
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = ExperimentKind::ALL.iter().map(|k| k.as_str()).collect();
                format!("unknown kind {s:?} (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("invalid experiment: {0}")]
    Precondition(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl ExperimentError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        ExperimentError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Panels of the `C̃` heatmap: `(M, c)`.
pub const DEFAULT_CTILDE_PANELS: [(usize, f64); 3] =
    [(4, 1.0), (4, std::f64::consts::SQRT_2), (64, 1.0)];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    /// Number of nodes; `None` selects the kind's default.
    pub m: Option<usize>,
    /// Uniformity constant of the pairwise generator.
    pub c: f64,
    pub trials: usize,
    pub seed: u64,
    pub mode: Mode,
    /// Grid resolution of the figure kinds (points per axis).
    pub grid: usize,
    pub ctilde_panels: Vec<(usize, f64)>,
}

impl ExperimentSpec {
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentSpec {
            kind,
            m: None,
            c: 2.0,
            trials: 100,
            seed: 0,
            mode: Mode::GramDd,
            grid: match kind {
                ExperimentKind::FigCrho => 200,
                _ => 100,
            },
            ctilde_panels: DEFAULT_CTILDE_PANELS.to_vec(),
        }
    }

    /// `M` after defaults: 20 for the sandwich experiments, 3 and 4 for the
    /// comparisons.
    pub fn node_count(&self) -> usize {
        self.m.unwrap_or(match self.kind {
            ExperimentKind::OnePair | ExperimentKind::Pairwise => 20,
            ExperimentKind::CompareBdgy => 3,
            ExperimentKind::CompareLili => 4,
            ExperimentKind::FigCrho | ExperimentKind::FigCtilde => 0,
        })
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |msg: String| Err(ExperimentError::Precondition(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        let m = self.node_count();
        match self.kind {
            ExperimentKind::OnePair if m < 3 => bad(format!("one-pair needs M >= 3, got {m}")),
            ExperimentKind::Pairwise if m < 4 || m % 2 == 1 => {
                bad(format!("pairwise needs even M >= 4, got {m}"))
            }
            ExperimentKind::Pairwise if !(self.c >= 1.0) => {
                bad(format!("pairwise needs c >= 1, got {}", self.c))
            }
            ExperimentKind::CompareBdgy if m != 3 => {
                bad(format!("compare-bdgy uses M = 3, got {m}"))
            }
            ExperimentKind::CompareLili if m < 2 || m % 2 == 1 => {
                bad(format!("compare-lili needs even M >= 2, got {m}"))
            }
            ExperimentKind::FigCrho | ExperimentKind::FigCtilde if self.grid < 2 => {
                bad("grid needs at least 2 points per axis".into())
            }
            _ => Ok(()),
        }
    }

    /// File stem of the outputs, e.g. `one-pair_M20`.
    pub fn stem(&self) -> String {
        if self.kind.is_figure() {
            self.kind.as_str().to_string()
        } else {
            format!("{}_M{}", self.kind, self.node_count())
        }
    }
}

/// One row of a randomized experiment.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub m: usize,
    pub big_n: u64,
    pub tau: f64,
    pub rho: f64,
    pub c: f64,
    /// `None` when the solver failed; see `error`.
    pub spectrum: Option<SpectralSummary>,
    pub bounds: BoundReport,
    pub error: Option<String>,
    pub wall_time: Duration,
}

impl TrialRecord {
    /// `‖A†‖ · τ√N`.
    pub fn normalized_pinv(&self) -> Option<f64> {
        self.spectrum
            .as_ref()
            .map(|s| s.pinv_norm().to_f64() * self.tau * (self.big_n as f64).sqrt())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapPanel {
    pub m: usize,
    pub c: f64,
    pub taus: Vec<f64>,
    pub rhos: Vec<f64>,
    /// `values[i][j]` at `(taus[j], rhos[i])`, negatives clamped to zero.
    pub values: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub enum ExperimentOutput {
    Trials(Vec<TrialRecord>),
    /// `(ρ, C(ρ))`.
    Curve(Vec<(f64, f64)>),
    Heatmap(Vec<HeatmapPanel>),
}

impl ExperimentOutput {
    pub fn failures(&self) -> usize {
        match self {
            ExperimentOutput::Trials(r) => r.iter().filter(|t| t.error.is_some()).count(),
            _ => 0,
        }
    }
}

/// Node set and its designated pairing for one trial.
pub fn trial_configuration(
    kind: ExperimentKind,
    m: usize,
    c: f64,
    seed: u64,
) -> (NodeSet, Vec<Pair>) {
    match kind {
        ExperimentKind::OnePair => (gen_one_pair(m, seed), vec![(0, 1)]),
        ExperimentKind::Pairwise => (gen_pairwise(m, c, seed), interleaved_pairing(m)),
        ExperimentKind::CompareBdgy => (gen_compare_bdgy(seed), vec![(0, 1)]),
        ExperimentKind::CompareLili => (gen_compare_lili(m, seed), interleaved_pairing(m)),
        ExperimentKind::FigCrho | ExperimentKind::FigCtilde => {
            unreachable!("figure kinds have no node configurations")
        }
    }
}

fn run_trial(spec: &ExperimentSpec, trial: usize) -> TrialRecord {
    let start = Instant::now();
    let seed = split_seed(spec.seed, trial as u64);
    let m = spec.node_count();
    let (ns, pairing) = trial_configuration(spec.kind, m, spec.c, seed);
    let stats = pairing_stats(&ns, &pairing);
    let bounds = bound_report(&ns, &stats);
    let (spectrum, error) = match spectral_summary(&ns, spec.mode) {
        Ok(s) => (Some(s), None),
        Err(e) => (None, Some(e.to_string())),
    };
    TrialRecord {
        trial,
        seed,
        m,
        big_n: ns.bandwidth().N(),
        tau: stats.tau,
        rho: stats.rho,
        c: stats.c.unwrap_or(1.0),
        spectrum,
        bounds,
        error,
        wall_time: start.elapsed(),
    }
}

/// Evenly spaced grid of `n` points on `[lo, hi]`.
fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// `C(ρ)` on `ρ ∈ [5, 50]`.
pub fn crho_curve(points: usize) -> Vec<(f64, f64)> {
    linspace(5.0, 50.0, points)
        .into_iter()
        .map(|r| (r, c_rho(r).expect("rho >= 5")))
        .collect()
}

/// `max(C̃, 0)` on `τ ∈ [0, 1/2] × ρ ∈ [2, 100]`.
pub fn ctilde_panel(m: usize, c: f64, points: usize) -> HeatmapPanel {
    let taus = linspace(0.0, 0.5, points);
    let rhos = linspace(2.0, 100.0, points);
    let values = rhos
        .iter()
        .map(|&r| taus.iter().map(|&t| c_tilde(t, r, c, m).max(0.0)).collect())
        .collect();
    HeatmapPanel {
        m,
        c,
        taus,
        rhos,
        values,
    }
}

pub fn run(spec: &ExperimentSpec) -> Result<ExperimentOutput, ExperimentError> {
    spec.validate()?;
    Ok(match spec.kind {
        ExperimentKind::FigCrho => ExperimentOutput::Curve(crho_curve(spec.grid)),
        ExperimentKind::FigCtilde => ExperimentOutput::Heatmap(
            spec.ctilde_panels
                .iter()
                .map(|&(m, c)| ctilde_panel(m, c, spec.grid))
                .collect(),
        ),
        _ => ExperimentOutput::Trials(
            (0..spec.trials)
                .into_par_iter()
                .map(|i| run_trial(spec, i))
                .collect(),
        ),
    })
}

/// Runs `spec` and writes `<stem>.csv` and `<stem>.svg` into `dir`.
pub fn run_to_dir(spec: &ExperimentSpec, dir: &Path) -> Result<ExperimentOutput, ExperimentError> {
    let out = run(spec)?;
    std::fs::create_dir_all(dir).map_err(|e| ExperimentError::io(dir, e))?;
    let stem = spec.stem();
    emit_csv(spec, &out, &dir.join(format!("{stem}.csv")))?;
    emit_plot(spec, &out, &dir.join(format!("{stem}.svg")))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_roundtrip() {
        for k in ExperimentKind::ALL {
            assert_eq!(k.as_str().parse::<ExperimentKind>().unwrap(), k);
        }
        assert!("pair".parse::<ExperimentKind>().is_err());
    }

    #[test]
    fn spec_validation() {
        let mut s = ExperimentSpec::new(ExperimentKind::Pairwise);
        s.m = Some(5);
        assert!(s.validate().is_err());
        s.m = Some(6);
        assert!(s.validate().is_ok());
        s.trials = 0;
        assert!(s.validate().is_err());
        let mut b = ExperimentSpec::new(ExperimentKind::CompareBdgy);
        assert_eq!(b.node_count(), 3);
        b.m = Some(4);
        assert!(b.validate().is_err());
    }

    #[test]
    fn trials_are_ordered_and_reproducible() {
        let mut s = ExperimentSpec::new(ExperimentKind::OnePair);
        s.m = Some(5);
        s.trials = 6;
        s.seed = 42;
        let ExperimentOutput::Trials(a) = run(&s).unwrap() else {
            panic!()
        };
        let ExperimentOutput::Trials(b) = run(&s).unwrap() else {
            panic!()
        };
        for (i, (x, y)) in a.iter().zip(&b).enumerate() {
            assert_eq!(x.trial, i);
            assert_eq!(x.seed, y.seed);
            assert_eq!(x.tau, y.tau);
            assert_eq!(x.spectrum, y.spectrum);
        }
    }

    #[test]
    fn figure_grids() {
        let curve = crho_curve(200);
        assert_eq!(curve.len(), 200);
        assert_eq!(curve[0].0, 5.0);
        assert_eq!(curve[199].0, 50.0);
        let p = ctilde_panel(4, 1.0, 50);
        assert_eq!(p.values.len(), 50);
        assert!(p.values.iter().flatten().all(|&v| v >= 0.0));
        assert!(p.values[0].iter().all(|&v| v == 0.0));
    }
}
