//! Experiment outputs: CSV layout, reproducibility, bound gating recomputed
//! from each row, and the figure files.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::Path;

use sha2::{Digest, Sha256};
use vandercond::experiments::{
    run, run_to_dir, ExperimentError, ExperimentKind, ExperimentOutput, ExperimentSpec,
};
use vandercond::spectral::Mode;

const HEADER: &str = "trial,seed,M,N,tau,rho,c,sigma_min,sigma_max,cond,lb_exact,lb_simple,ub_onepair,ub_pairwise,ub_bdgy,ub_lili,flags";

fn spec(kind: ExperimentKind, m: usize, trials: usize, seed: u64) -> ExperimentSpec {
    let mut s = ExperimentSpec::new(kind);
    s.m = Some(m);
    s.trials = trials;
    s.seed = seed;
    s
}

fn sha256(path: &Path) -> Vec<u8> {
    Sha256::digest(std::fs::read(path).unwrap()).to_vec()
}

struct Row {
    cols: HashMap<String, String>,
}

impl Row {
    fn f(&self, key: &str) -> f64 {
        self.cols[key]
            .parse()
            .unwrap_or_else(|_| panic!("{key}: {:?}", self.cols[key]))
    }

    fn flags(&self) -> Vec<&str> {
        self.cols["flags"]
            .split(';')
            .filter(|s| !s.is_empty())
            .collect()
    }

    fn has(&self, flag: &str) -> bool {
        self.flags().contains(&flag)
    }
}

fn read_rows(path: &Path) -> Vec<Row> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    assert_eq!(header.join(","), HEADER);
    lines
        .map(|l| {
            let v: Vec<&str> = l.split(',').collect();
            assert_eq!(v.len(), header.len(), "{l}");
            Row {
                cols: header
                    .iter()
                    .cloned()
                    .zip(v.into_iter().map(String::from))
                    .collect(),
            }
        })
        .collect()
}

#[test]
fn one_pair_csv_is_reproducible_and_gated() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let s = spec(ExperimentKind::OnePair, 20, 100, 42);
    for d in &dirs {
        run_to_dir(&s, d.path()).unwrap();
    }
    let paths: Vec<_> = dirs
        .iter()
        .map(|d| d.path().join("one-pair_M20.csv"))
        .collect();
    assert_eq!(sha256(&paths[0]), sha256(&paths[1]));
    assert!(dirs[0].path().join("one-pair_M20.svg").exists());

    let rows = read_rows(&paths[0]);
    assert_eq!(rows.len(), 100);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r.f("trial") as usize, i);
        assert_eq!(r.f("M"), 20.0);
        assert_eq!(r.f("N"), 229.0);
        let (tau, rho, cond) = (r.f("tau"), r.f("rho"), r.f("cond"));
        assert_eq!(r.has("lb_simple"), tau <= 1.0);
        assert_eq!(r.has("ub_onepair"), tau <= 1.0 && rho >= 6.0);
        assert!(!r.has("ub_pairwise") && !r.has("solver_failed"));
        assert_eq!(r.f("lb_simple"), 6f64.sqrt() / (PI * tau));
        assert_eq!(r.f("ub_onepair"), 4.0 / tau);
        assert!(r.f("ub_pairwise").is_nan() || !r.has("ub_pairwise"));
        assert!(
            cond >= r.f("lb_simple") && cond <= r.f("ub_onepair"),
            "row {i}"
        );
        assert!(cond >= r.f("lb_exact") * (1.0 - 1e-12), "row {i}");
        assert!((cond - r.f("sigma_max") / r.f("sigma_min")).abs() <= 1e-12 * cond);
    }
}

#[test]
fn different_seeds_give_different_trials() {
    let a = run(&spec(ExperimentKind::OnePair, 5, 4, 1)).unwrap();
    let b = run(&spec(ExperimentKind::OnePair, 5, 4, 2)).unwrap();
    let taus = |o: &ExperimentOutput| match o {
        ExperimentOutput::Trials(t) => t.iter().map(|r| r.tau).collect::<Vec<_>>(),
        _ => unreachable!(),
    };
    assert_ne!(taus(&a), taus(&b));
}

#[test]
fn pairwise_rows_gate_on_realized_statistics() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = spec(ExperimentKind::Pairwise, 8, 60, 9);
    s.c = 2.0;
    run_to_dir(&s, dir.path()).unwrap();
    let rows = read_rows(&dir.path().join("pairwise_M8.csv"));
    assert_eq!(rows.len(), 60);
    let mut gated = 0;
    for r in &rows {
        let (tau, rho, c) = (r.f("tau"), r.f("rho"), r.f("c"));
        assert!((1.0..=2.0 * (1.0 + 1e-12)).contains(&c));
        let log_term = ((8 / 4) as f64).ln() + 1.0;
        let expect = c * tau <= 1.0 && tau <= 1.0 / (4.0 * c * c) && rho >= 10.0 * c * c * log_term;
        assert_eq!(r.has("ub_pairwise"), expect, "tau {tau} rho {rho} c {c}");
        assert!(!r.has("ub_onepair"));
        if expect {
            assert!(r.f("cond") <= 5.0 / tau);
            gated += 1;
        }
    }
    assert!(gated > 0);
}

#[test]
fn comparison_rows_carry_pinv_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let s = spec(ExperimentKind::CompareBdgy, 3, 20, 3);
    run_to_dir(&s, dir.path()).unwrap();
    let rows = read_rows(&dir.path().join("compare-bdgy_M3.csv"));
    assert_eq!(rows.len(), 20);
    for r in &rows {
        assert_eq!(r.f("N"), 1001.0);
        assert!(r.has("ub_bdgy"));
        assert!(1.0 / r.f("sigma_min") <= r.f("ub_bdgy"));
    }
}

#[test]
fn solver_choice_does_not_change_moderate_rows() {
    let mut a = spec(ExperimentKind::OnePair, 6, 30, 17);
    let mut b = a.clone();
    a.mode = Mode::GramDd;
    b.mode = Mode::SvdF64;
    let (ExperimentOutput::Trials(ra), ExperimentOutput::Trials(rb)) =
        (run(&a).unwrap(), run(&b).unwrap())
    else {
        unreachable!()
    };
    let mut compared = 0;
    for (x, y) in ra.iter().zip(&rb) {
        assert_eq!((x.tau, x.rho), (y.tau, y.rho));
        let (sx, sy) = (x.spectrum.as_ref().unwrap(), y.spectrum.as_ref().unwrap());
        if sx.cond.to_f64() <= 1e6 {
            let e = ((sx.sigma_min - sy.sigma_min) / sx.sigma_min)
                .abs()
                .to_f64();
            assert!(e < 1e-9, "{e:e}");
            compared += 1;
        }
    }
    assert!(compared > 0);
}

#[test]
fn figure_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = ExperimentSpec::new(ExperimentKind::FigCrho);
    s.grid = 50;
    run_to_dir(&s, dir.path()).unwrap();
    let text = std::fs::read_to_string(dir.path().join("fig-crho.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("rho,C"));
    assert_eq!(text.lines().count(), 51);
    let last: Vec<f64> = text
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(last[0], 50.0);
    assert!(last[1] > 3.0 && last[1] < 3.5);

    let mut s = ExperimentSpec::new(ExperimentKind::FigCtilde);
    s.grid = 10;
    run_to_dir(&s, dir.path()).unwrap();
    let text = std::fs::read_to_string(dir.path().join("fig-ctilde.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("M,c,tau,rho,ctilde"));
    assert_eq!(text.lines().count(), 1 + 3 * 100);
    for l in text.lines().skip(1) {
        let v: f64 = l.rsplit(',').next().unwrap().parse().unwrap();
        assert!(v >= 0.0);
    }
    for stem in ["fig-crho", "fig-ctilde"] {
        let svg = std::fs::read_to_string(dir.path().join(format!("{stem}.svg"))).unwrap();
        assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}

#[test]
fn invalid_specs_are_preconditions() {
    let dir = tempfile::tempdir().unwrap();
    for s in [
        spec(ExperimentKind::Pairwise, 5, 10, 0),
        spec(ExperimentKind::CompareBdgy, 4, 10, 0),
        spec(ExperimentKind::OnePair, 20, 0, 0),
    ] {
        assert!(matches!(
            run_to_dir(&s, dir.path()),
            Err(ExperimentError::Precondition(_))
        ));
    }
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}
