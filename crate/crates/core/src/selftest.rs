//! Built-in property suite: the Dirichlet kernel envelopes on a grid and the
//! randomized matrix-inequality checks.

use std::fmt;
use std::time::{Duration, Instant};

use crate::extprec::ExtReal;
use crate::kernel::{
    dirichlet, dirichlet_d1, dirichlet_d2, magnitude_envelope, taylor_envelope, Bandwidth,
};
use crate::spectral::{check_appendix_lemmas, LemmaReport, LemmaSample};

/// Half-bandwidths of the envelope grid.
pub const ENVELOPE_BANDWIDTHS: [u32; 3] = [1, 5, 50];

/// Grid points per bandwidth, on `(0, 1/2]` and again on `(0, 1/N]`.
pub const ENVELOPE_POINTS: usize = 1000;

/// Envelope comparisons allow `1e-12` times the natural scale `N^(k+1)` of
/// the `k`-th derivative, to absorb rounding of the binary64 envelopes.
const ENVELOPE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeOutcome {
    /// Distinct `(n, t)` grid points.
    pub points: usize,
    /// Individual inequalities checked.
    pub checks: usize,
    pub violations: Vec<String>,
}

impl EnvelopeOutcome {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.points > 0
    }
}

/// Checks every applicable envelope inequality at each grid point.
pub fn check_envelopes(bandwidths: &[u32], points: usize) -> EnvelopeOutcome {
    let mut out = EnvelopeOutcome {
        points: 0,
        checks: 0,
        violations: Vec::new(),
    };
    for &n in bandwidths {
        let bw = Bandwidth::new(n);
        let big_n = bw.n_f64();
        let mut check = |what: &str, t: f64, lhs: f64, rhs: f64, scale: f64| {
            out.checks += 1;
            if !(lhs <= rhs + ENVELOPE_SLACK * scale) {
                out.violations
                    .push(format!("n={n} t={t:e}: {what}: {lhs:e} > {rhs:e}"));
            }
        };
        let wide = (1..=points).map(|k| 0.5 * k as f64 / points as f64);
        let near = (1..=points).map(|k| k as f64 / (points as f64 * big_n));
        let grid: Vec<f64> = wide.chain(near).collect();
        for &t in &grid {
            let x = ExtReal::from_f64(t);
            let d = dirichlet(bw, x).to_f64();
            if let Ok(env) = taylor_envelope(bw, t) {
                check("taylor lower", t, env.lower, d, big_n);
                check("taylor upper", t, d, env.upper, big_n);
            }
            let env = magnitude_envelope(bw, t).expect("grid lies in (0, 1/2]");
            check("|D|", t, d.abs(), env.abs_bound, big_n);
            check(
                "|D'|",
                t,
                dirichlet_d1(bw, x).abs().to_f64(),
                env.d1_bound,
                big_n.powi(2),
            );
            check(
                "|D''|",
                t,
                dirichlet_d2(bw, x).abs().to_f64(),
                env.d2_bound,
                big_n.powi(3),
            );
        }
        out.points += grid.len();
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub envelopes: EnvelopeOutcome,
    pub lemmas: LemmaReport,
    pub elapsed: Duration,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.envelopes.passed() && self.lemmas.passed()
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.envelopes;
        writeln!(
            f,
            "{} kernel-envelopes: {} points, {} checks, {} violations",
            if e.passed() { "PASS" } else { "FAIL" },
            e.points,
            e.checks,
            e.violations.len()
        )?;
        for v in e.violations.iter().take(10) {
            writeln!(f, "    {v}")?;
        }
        for o in &self.lemmas.outcomes {
            write!(
                f,
                "{} {}: {} cases, {} violations, {} solver errors",
                if o.passed() { "PASS" } else { "FAIL" },
                o.name,
                o.cases,
                o.violations,
                o.errors
            )?;
            if let Some(r) = o.worst_residual {
                write!(f, ", worst relative residual {r:e}")?;
            }
            writeln!(f)?;
        }
        write!(f, "elapsed {:.2}s", self.elapsed.as_secs_f64())
    }
}

/// Runs the full suite: the envelope grid and `sample` for the matrix checks.
pub fn run_selftest(sample: &LemmaSample) -> SelftestReport {
    let start = Instant::now();
    let envelopes = check_envelopes(&ENVELOPE_BANDWIDTHS, ENVELOPE_POINTS);
    let lemmas = check_appendix_lemmas(sample);
    SelftestReport {
        envelopes,
        lemmas,
        elapsed: start.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_grid_has_no_violations() {
        let out = check_envelopes(&ENVELOPE_BANDWIDTHS, ENVELOPE_POINTS);
        assert!(out.points >= 3000, "{}", out.points);
        assert!(
            out.passed(),
            "{:?}",
            &out.violations[..out.violations.len().min(5)]
        );
    }

    #[test]
    fn taylor_upper_is_tight_at_one_over_n() {
        let bw = Bandwidth::new(5);
        let t = 1.0 / 11.0;
        let env = taylor_envelope(bw, t).unwrap();
        let d = dirichlet(bw, ExtReal::from_f64(t)).to_f64();
        assert!(env.upper.abs() < 1e-13 && d.abs() < 1e-13);
        assert!(taylor_envelope(bw, 1.01 / 11.0).is_err());
    }
}
