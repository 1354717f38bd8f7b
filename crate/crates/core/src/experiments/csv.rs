use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{ExperimentError, ExperimentOutput, ExperimentSpec, TrialRecord};

pub const CSV_HEADER: &str = "trial,seed,M,N,tau,rho,c,sigma_min,sigma_max,cond,lb_exact,lb_simple,ub_onepair,ub_pairwise,ub_bdgy,ub_lili,flags";

/// Flag appended to a row whose spectral solve failed.
pub const SOLVER_FAILURE_FLAG: &str = "solver_failed";

/// Shortest decimal string that parses back to `x`.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn bound_value(r: &TrialRecord, name: &str) -> f64 {
    r.bounds.get(name).map_or(f64::NAN, |e| e.value)
}

pub(crate) fn trial_row(r: &TrialRecord) -> String {
    let (smin, smax, cond) = r
        .spectrum
        .as_ref()
        .map_or((f64::NAN, f64::NAN, f64::NAN), |s| {
            (s.sigma_min.to_f64(), s.sigma_max.to_f64(), s.cond.to_f64())
        });
    let mut flags = r.bounds.flags();
    if r.error.is_some() {
        if !flags.is_empty() {
            flags.push(';');
        }
        flags.push_str(SOLVER_FAILURE_FLAG);
    }
    let cols = [
        r.trial.to_string(),
        r.seed.to_string(),
        r.m.to_string(),
        r.big_n.to_string(),
        num(r.tau),
        num(r.rho),
        num(r.c),
        num(smin),
        num(smax),
        num(cond),
        num(bound_value(r, "lb_exact").sqrt()),
        num(bound_value(r, "lb_simple")),
        num(bound_value(r, "ub_onepair")),
        num(bound_value(r, "ub_pairwise")),
        num(bound_value(r, "ub_bdgy")),
        num(bound_value(r, "ub_lili_thm1")),
        flags,
    ];
    cols.join(",")
}

fn write_all(out: &ExperimentOutput, w: &mut impl Write) -> std::io::Result<()> {
    match out {
        ExperimentOutput::Trials(records) => {
            writeln!(w, "{CSV_HEADER}")?;
            for r in records {
                writeln!(w, "{}", trial_row(r))?;
            }
        }
        ExperimentOutput::Curve(points) => {
            writeln!(w, "rho,C")?;
            for &(r, c) in points {
                writeln!(w, "{},{}", num(r), num(c))?;
            }
        }
        ExperimentOutput::Heatmap(panels) => {
            writeln!(w, "M,c,tau,rho,ctilde")?;
            for p in panels {
                for (i, &rho) in p.rhos.iter().enumerate() {
                    for (j, &tau) in p.taus.iter().enumerate() {
                        writeln!(
                            w,
                            "{},{},{},{},{}",
                            p.m,
                            num(p.c),
                            num(tau),
                            num(rho),
                            num(p.values[i][j])
                        )?;
                    }
                }
            }
        }
    }
    w.flush()
}

/// Writes `out` as CSV. Trial rows carry `lb_exact` on the scale of `cond`
/// and `NaN` for values that do not exist.
pub fn emit_csv(
    _spec: &ExperimentSpec,
    out: &ExperimentOutput,
    path: &Path,
) -> Result<(), ExperimentError> {
    let file = File::create(path).map_err(|e| ExperimentError::io(path, e))?;
    write_all(out, &mut BufWriter::new(file)).map_err(|e| ExperimentError::io(path, e))
}
