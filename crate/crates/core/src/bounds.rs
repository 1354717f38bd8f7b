//! Closed-form bounds on the extreme singular values and the condition
//! number, with applicability flags.
//!
//! Every formula is evaluated in binary64, except `N − |D_n(τ/N)|`, which is
//! formed in double-double from the realized minimal gap. Inapplicable
//! bounds are still reported, with `applicable = false` and a note naming
//! the failed precondition.
//!
//! The literals `1.21` and `2.42` are upper estimates of `ζ(3)` and `2ζ(3)`,
//! kept exactly as published.

use std::f64::consts::PI;

use crate::extprec::ExtReal;
use crate::kernel::{dirichlet, Bandwidth};
use crate::nodes::{NodeSet, SeparationStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Cond,
    CondSq,
    SigmaMinSq,
    SigmaMaxSq,
    NormK,
    NormKInv,
    /// `‖A†‖ = 1/σ_min`.
    PinvNorm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundEntry {
    pub name: &'static str,
    pub kind: BoundKind,
    pub target: Target,
    pub value: f64,
    pub applicable: bool,
    /// Empty when applicable, otherwise the failed precondition.
    pub note: String,
}

impl BoundEntry {
    fn new(name: &'static str, kind: BoundKind, target: Target, value: f64) -> Self {
        BoundEntry {
            name,
            kind,
            target,
            value,
            applicable: true,
            note: String::new(),
        }
    }

    fn require(mut self, cond: bool, note: impl FnOnce() -> String) -> Self {
        if self.applicable && !cond {
            self.applicable = false;
            self.note = note();
        }
        self
    }

    /// Whether `measured` respects this bound.
    pub fn holds(&self, measured: f64) -> bool {
        match self.kind {
            BoundKind::Lower => measured >= self.value,
            BoundKind::Upper => measured <= self.value,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundReport {
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn get(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn applicable(&self) -> impl Iterator<Item = &BoundEntry> {
        self.entries.iter().filter(|e| e.applicable)
    }

    /// Semicolon-separated names of the applicable entries.
    pub fn flags(&self) -> String {
        self.applicable()
            .map(|e| e.name)
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn extend(&mut self, entries: impl IntoIterator<Item = BoundEntry>) {
        self.entries.extend(entries);
    }
}

use BoundKind::{Lower, Upper};

/// `ln⌊M/4⌋ + 1`.
pub fn log_term(m: usize) -> f64 {
    ((m / 4).max(1) as f64).ln() + 1.0
}

/// Bounds for well-separated nodes, `τ > 1`.
pub fn well_separated_bounds(big_n: f64, tau: f64) -> Vec<BoundEntry> {
    let ok = tau > 1.0;
    let note = || format!("needs tau > 1, got {tau:e}");
    [
        BoundEntry::new(
            "ws_sigma_min_sq",
            Lower,
            Target::SigmaMinSq,
            big_n * (1.0 - 1.0 / tau),
        ),
        BoundEntry::new(
            "ws_sigma_max_sq",
            Upper,
            Target::SigmaMaxSq,
            big_n * (1.0 + 1.0 / tau),
        ),
        BoundEntry::new("ws_cond_sq", Upper, Target::CondSq, 1.0 + 2.0 / (tau - 1.0)),
        BoundEntry::new("ws_norm_k", Upper, Target::NormK, big_n + big_n / tau),
        BoundEntry::new(
            "ws_norm_k_inv",
            Upper,
            Target::NormKInv,
            1.0 / (big_n - big_n / tau),
        ),
    ]
    .into_iter()
    .map(|e| e.require(ok, note))
    .collect()
}

/// `sqrt(12/π² − 1)`, the largest `τ` for the colliding-node lower bound.
pub fn colliding_threshold() -> f64 {
    (12.0 / (PI * PI) - 1.0).sqrt()
}

/// `N − |D_n(gap)|` in double-double.
pub fn kernel_gap(bw: Bandwidth, min_gap: ExtReal) -> ExtReal {
    ExtReal::from_f64(bw.n_f64()) - dirichlet(bw, min_gap).abs()
}

/// Lower bounds valid for every node set, from the closest pair.
pub fn lower_bound(bw: Bandwidth, min_gap: ExtReal) -> Vec<BoundEntry> {
    let big_n = bw.n_f64();
    let tau = (min_gap * big_n).to_f64();
    let d = dirichlet(bw, min_gap).abs();
    let n = ExtReal::from_f64(big_n);
    let lo = n - d;
    let hi = n + d;
    let exact = (d * 2.0 / lo + 1.0).to_f64();
    let twice_tau = 2.0 * tau;
    let half_integer = twice_tau.fract() == 0.0 && (twice_tau as u64) % 2 == 1;
    vec![
        BoundEntry::new("lb_sigma_min_sq", Upper, Target::SigmaMinSq, lo.to_f64()),
        BoundEntry::new("lb_sigma_max_sq", Lower, Target::SigmaMaxSq, hi.to_f64()),
        BoundEntry::new("lb_exact", Lower, Target::CondSq, exact),
        BoundEntry::new(
            "lb_colliding",
            Lower,
            Target::CondSq,
            12.0 / (PI * PI * tau * tau) - 1.0,
        )
        .require(tau <= colliding_threshold(), || {
            format!("needs tau <= {:.4}, got {tau}", colliding_threshold())
        }),
        BoundEntry::new("lb_simple", Lower, Target::Cond, 6f64.sqrt() / (PI * tau))
            .require(tau <= 1.0, || format!("needs tau <= 1, got {tau:e}")),
        BoundEntry::new(
            "lb_half_integer",
            Lower,
            Target::CondSq,
            1.0 + 2.0 / (PI * tau - 1.0),
        )
        .require(half_integer, || {
            format!("needs tau in N + 1/2, got {tau:e}")
        }),
    ]
}

/// `C(ρ)` for one nearly-colliding pair; `None` for `ρ < 5`.
///
/// `C(∞) = 3` is the limit of the formula.
pub fn c_rho(rho: f64) -> Option<f64> {
    if !(rho >= 5.0) {
        return None;
    }
    if rho.is_infinite() {
        return Some(3.0);
    }
    let r1 = rho / (rho - 1.0);
    let tail = 1.0
        + PI.powi(4) / (12.0 * rho * rho)
        + 1.21 * PI / rho.powi(3)
        + PI.powi(4) / (180.0 * rho.powi(4));
    Some(((2.0 * rho - 1.0) / (rho - 1.0) + r1.sqrt()) / (2.0 - r1 * tail))
}

/// Bounds for one nearly-colliding pair with `τ <= 1 < ρ`.
pub fn upper_one_pair(big_n: f64, tau: f64, rho: f64) -> Vec<BoundEntry> {
    let c = c_rho(rho);
    vec![
        BoundEntry::new("op_norm_k", Upper, Target::NormK, 2.3 * big_n)
            .require(rho >= 6.0, || format!("needs rho >= 6, got {rho}")),
        BoundEntry::new(
            "op_norm_k_inv",
            Upper,
            Target::NormKInv,
            c.map_or(f64::NAN, |c| c / (big_n * tau * tau)),
        )
        .require(c.is_some(), || format!("needs rho >= 5, got {rho}")),
        BoundEntry::new("ub_onepair", Upper, Target::Cond, 4.0 / tau)
            .require(rho >= 6.0, || format!("needs rho >= 6, got {rho}"))
            .require(tau <= 1.0, || format!("needs tau <= 1, got {tau:e}")),
    ]
}

/// `C̃(τ, ρ, c, M)` for pairs of nearly-colliding nodes.
pub fn c_tilde(tau: f64, rho: f64, c: f64, m: usize) -> f64 {
    let l = log_term(m);
    let c2 = c * c;
    let inner = c2 * PI * PI * tau / 6.0 + c * PI * l / rho + c * PI * PI / (6.0 * rho * rho);
    2.0 - c2 * PI * PI * l / rho
        - c2 * PI.powi(3) / (3.0 * rho * rho)
        - 2.42 * c2 / rho.powi(3)
        - rho / (rho - 1.0) * inner * inner
}

fn pairwise_numerator(rho: f64) -> f64 {
    2.0 * rho / (rho - 1.0) + ((rho + 1.0) / (rho - 1.0)).sqrt()
}

/// `C(τ, ρ, c, M)`; `None` when `C̃ <= 0`, where the bound is void.
pub fn c_pairwise(tau: f64, rho: f64, c: f64, m: usize) -> Option<f64> {
    let t = c_tilde(tau, rho, c, m);
    (t > 0.0).then(|| pairwise_numerator(rho) / t)
}

/// `C̃(ρ, M)`, the variant for equal pair gaps (`c = 1`).
pub fn c_tilde_c1(rho: f64, m: usize) -> f64 {
    let l = log_term(m);
    let p2 = PI * PI;
    let r1 = rho - 1.0;
    2.0 - p2 * l / rho
        - PI.powi(3) / (3.0 * rho * rho)
        - 2.42 / rho.powi(3)
        - rho / r1
        - 2.0 * PI * l / r1
        - p2 / (3.0 * rho * r1)
        - p2 * l * l / (rho * r1)
        - PI.powi(3) * l / (3.0 * rho * rho * r1)
        - PI.powi(4) / (36.0 * rho.powi(3) * r1)
}

/// `C(ρ, M)`; `None` when `C̃(ρ, M) <= 0`.
pub fn c_pairwise_c1(rho: f64, m: usize) -> Option<f64> {
    let t = c_tilde_c1(rho, m);
    (t > 0.0).then(|| pairwise_numerator(rho) / t)
}

/// `τ_max = 1/(4c²)`.
pub fn tau_max(c: f64) -> f64 {
    1.0 / (4.0 * c * c)
}

/// `ρ_min = 10c²(ln⌊M/4⌋ + 1)`.
pub fn rho_min(c: f64, m: usize) -> f64 {
    10.0 * c * c * log_term(m)
}

/// `ρ_min = 25(ln⌊M/4⌋ + 1)` for equal pair gaps.
pub fn rho_min_c1(m: usize) -> f64 {
    25.0 * log_term(m)
}

/// Pair-gap ratios this close to one count as equal gaps.
pub const EQUAL_GAP_TOLERANCE: f64 = 1e-12;

/// Bounds for `M/2` nearly-colliding pairs with uniformity `c`.
pub fn upper_pairwise(big_n: f64, tau: f64, rho: f64, c: f64, m: usize) -> Vec<BoundEntry> {
    let cp = c_pairwise(tau, rho, c, m);
    let (tmax, rmin) = (tau_max(c), rho_min(c, m));
    vec![
        BoundEntry::new(
            "pw_norm_k",
            Upper,
            Target::NormK,
            2.0 * big_n * (rho + 1.0) / rho,
        ),
        BoundEntry::new(
            "pw_norm_k_inv",
            Upper,
            Target::NormKInv,
            cp.map_or(f64::NAN, |v| v / (big_n * tau * tau)),
        )
        .require(cp.is_some(), || "needs C~(tau, rho, c, M) > 0".into())
        .require(tau <= 0.5, || format!("needs tau <= 1/2, got {tau:e}"))
        .require(rho >= 2.0, || format!("needs rho >= 2, got {rho}")),
        BoundEntry::new("ub_pairwise", Upper, Target::Cond, 5.0 / tau)
            .require(tau <= tmax, || format!("needs tau <= {tmax}, got {tau:e}"))
            .require(rho >= rmin, || format!("needs rho >= {rmin}, got {rho}")),
    ]
}

/// Bounds for `M/2` nearly-colliding pairs with equal pair gaps.
pub fn upper_pairwise_c1(big_n: f64, tau: f64, rho: f64, c: f64, m: usize) -> Vec<BoundEntry> {
    let equal = (c - 1.0).abs() <= EQUAL_GAP_TOLERANCE;
    let cp = c_pairwise_c1(rho, m);
    let rmin = rho_min_c1(m);
    vec![
        BoundEntry::new(
            "pw1_norm_k_inv",
            Upper,
            Target::NormKInv,
            cp.map_or(f64::NAN, |v| v / (big_n * tau * tau)),
        )
        .require(equal, || format!("needs c = 1, got {c}"))
        .require(cp.is_some(), || "needs C~(rho, M) > 0".into())
        .require(tau <= 1.0, || format!("needs tau <= 1, got {tau:e}")),
        BoundEntry::new("ub_pairwise_c1", Upper, Target::Cond, 5.0 / tau)
            .require(equal, || format!("needs c = 1, got {c}"))
            .require(rho >= rmin, || format!("needs rho >= {rmin}, got {rho}"))
            .require(tau <= 1.0, || format!("needs tau <= 1, got {tau:e}")),
    ]
}

/// `2(2π)^{M−1} M^{2M−1}/π · N√N/((N−1)√(N−1))`, the coefficient of
/// `1/(τ√N)` in the three-node comparison bound on `‖A†‖`.
pub fn bdgy_coefficient(m: usize, big_n: f64) -> f64 {
    let mf = m as f64;
    2.0 * (2.0 * PI).powi(m as i32 - 1) * mf.powi(2 * m as i32 - 1) / PI * big_n * big_n.sqrt()
        / ((big_n - 1.0) * (big_n - 1.0).sqrt())
}

/// Coefficient of `1/(τ√N)` in the uniformly-paired comparison bound on
/// `‖A†‖`, as displayed with its corrections already applied.
pub fn lili_coefficient(m: usize, big_n: f64) -> f64 {
    let half = (big_n - 1.0) / 2.0;
    20.0 * 2f64.sqrt() / 19.0 / (1.0 - PI * PI / 12.0).sqrt() * half / half.floor() * 4.0 / PI
        * (m as f64).sqrt()
        * big_n.sqrt()
        / (big_n - 1.0).sqrt()
}

/// Admissibility thresholds on `τ` for the two comparison theorems, using
/// the uniform bound `ρ < 2N/M`.
pub fn lili_thresholds(m: usize, big_n: f64) -> (f64, f64) {
    let mf = m as f64;
    let rho = 2.0 * big_n / mf;
    let r = big_n / (big_n - 1.0);
    let thm1 = 400.0 * mf * 32.0 * r.powi(3) / (rho * rho);
    let thm2 = 1e4 * 1024.0 * mf * r.powi(5) / (rho.powi(4) * PI);
    (thm1, thm2)
}

/// Length of the shortest arc containing every node.
pub fn arc_span(ns: &NodeSet) -> f64 {
    let t = ns.positions();
    if t.len() < 2 {
        return 0.0;
    }
    let mut widest = ExtReal::ONE - t[t.len() - 1] + t[0];
    for w in t.windows(2) {
        widest = widest.max(w[1] - w[0]);
    }
    (ExtReal::ONE - widest).to_f64()
}

/// `‖A†‖` bounds of the comparison experiments, plus the pairwise bound
/// `sqrt(11.3)/(τ√N)` they are compared with.
pub fn comparison_bounds(m: usize, big_n: f64, tau: f64, span: f64) -> Vec<BoundEntry> {
    let scale = 1.0 / (tau * big_n.sqrt());
    let arc = 1.0 / (2.0 * (m * m) as f64);
    let (thm1, thm2) = lili_thresholds(m, big_n);
    let lili = lili_coefficient(m, big_n) * scale;
    vec![
        BoundEntry::new(
            "ub_pinv_pairwise",
            Upper,
            Target::PinvNorm,
            11.3f64.sqrt() * scale,
        )
        .require(tau <= 0.25, || format!("needs tau <= 1/4, got {tau:e}")),
        BoundEntry::new(
            "ub_bdgy",
            Upper,
            Target::PinvNorm,
            bdgy_coefficient(m, big_n) * scale,
        )
        .require(tau <= 1.0, || format!("needs tau <= 1, got {tau:e}"))
        .require(span <= arc, || {
            format!("needs all nodes on an arc of length {arc}")
        }),
        BoundEntry::new("ub_lili_thm1", Upper, Target::PinvNorm, lili).require(tau >= thm1, || {
            format!("needs tau >= {thm1:e}, got {tau:e}")
        }),
        BoundEntry::new("ub_lili_thm2", Upper, Target::PinvNorm, lili).require(tau >= thm2, || {
            format!("needs tau >= {thm2:e}, got {tau:e}")
        }),
    ]
}

/// Every bound for a node set with realized statistics `stats`.
///
/// The one-pair family requires exactly one designated pair with `τ <= 1 < ρ`;
/// the pairwise families require `M/2` designated pairs, `M >= 4`, `cτ <= 1`
/// and `ρ > 1`. The comparison bounds are gated by their own preconditions.
pub fn bound_report(ns: &NodeSet, stats: &SeparationStats) -> BoundReport {
    let bw = ns.bandwidth();
    let big_n = bw.n_f64();
    let m = ns.len();
    let (tau, rho) = (stats.tau, stats.rho);
    let pairs = stats.pairing.as_ref().map_or(0, Vec::len);
    let c = stats.c.unwrap_or(1.0);

    let mut report = BoundReport::default();
    report.extend(well_separated_bounds(big_n, tau));
    report.extend(lower_bound(bw, stats.min_gap));

    let one_pair = pairs == 1 && tau <= 1.0 && rho > 1.0;
    report.extend(
        upper_one_pair(big_n, tau, rho)
            .into_iter()
            .map(|e| e.require(one_pair, || "not a one-pair configuration".into())),
    );

    let pairwise = m >= 4 && m.is_multiple_of(2) && pairs == m / 2 && c * tau <= 1.0 && rho > 1.0;
    let not_pairwise = || "not a pairwise configuration".to_string();
    report.extend(
        upper_pairwise(big_n, tau, rho, c, m)
            .into_iter()
            .map(|e| e.require(pairwise, not_pairwise)),
    );
    report.extend(
        upper_pairwise_c1(big_n, tau, rho, c, m)
            .into_iter()
            .map(|e| e.require(pairwise, not_pairwise)),
    );
    report.extend(comparison_bounds(m, big_n, tau, arc_span(ns)));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn well_separated_examples() {
        let b = well_separated_bounds(101.0, 2.0);
        assert_eq!(b[2].value, 3.0);
        assert!(b.iter().all(|e| e.applicable));
        let far = well_separated_bounds(101.0, 1e12);
        assert!((far[2].value - 1.0).abs() < 1e-11);
        assert!(well_separated_bounds(101.0, 1.0)
            .iter()
            .all(|e| !e.applicable));
    }

    #[test]
    fn lower_bound_thresholds() {
        assert!((colliding_threshold() - 0.4646).abs() < 1e-4);
        assert!((6f64.sqrt() / PI - 0.7797).abs() < 1e-4);
        let bw = Bandwidth::new(50);
        let gap = ExtReal::from_f64(0.3) / 101.0;
        let lb = lower_bound(bw, gap);
        assert!(
            lb.iter()
                .find(|e| e.name == "lb_colliding")
                .unwrap()
                .applicable
        );
        assert!(
            !lb.iter()
                .find(|e| e.name == "lb_half_integer")
                .unwrap()
                .applicable
        );
        let gap = ExtReal::from_f64(2.5) / 101.0;
        let lb = lower_bound(bw, gap);
        assert!(
            lb.iter()
                .find(|e| e.name == "lb_half_integer")
                .unwrap()
                .applicable
        );
        assert!(
            !lb.iter()
                .find(|e| e.name == "lb_simple")
                .unwrap()
                .applicable
        );
    }

    #[test]
    fn c_rho_values() {
        let c6 = c_rho(6.0).unwrap();
        assert!(c6 <= 6.5 && c6 > 6.0, "{c6}");
        assert!(c_rho(4.99).is_none());
        assert_eq!(c_rho(f64::INFINITY), Some(3.0));
    }

    #[test]
    fn one_pair_gating() {
        let b = upper_one_pair(101.0, 0.1, 6.0);
        assert_eq!(b[2].value, 40.0);
        assert!(b.iter().all(|e| e.applicable));
        let b = upper_one_pair(101.0, 0.1, 5.5);
        assert!(!b[2].applicable && b[1].applicable && !b[0].applicable);
    }

    #[test]
    fn pairwise_constants() {
        let c = c_pairwise(0.25, 10.0, 1.0, 4).unwrap();
        assert!(c <= 11.3 && c > 10.5, "{c}");
        let c1 = c_pairwise_c1(25.0, 4).unwrap();
        assert!(c1 <= 12.0 && c1 > 11.0, "{c1}");
        assert!(c_pairwise(0.5, 2.0, 2.0, 64).is_none());
    }

    #[test]
    fn pairwise_gating() {
        let b = upper_pairwise(101.0, 0.25, 10.0, 1.0, 4);
        assert_eq!(b[2].value, 20.0);
        assert!(b[2].applicable);
        let b = upper_pairwise(101.0, 0.3, 10.0, 1.0, 4);
        assert!(!b[2].applicable);
        let b = upper_pairwise_c1(101.0, 0.9, 25.0, 1.0, 4);
        assert!(b[1].applicable);
        assert!((b[1].value - 5.0 / 0.9).abs() < 1e-15);
        let b = upper_pairwise_c1(101.0, 0.9, 25.0, 1.5, 4);
        assert!(!b[1].applicable);
        // coefficient of N in the operator-norm bound at ρ = 25
        let nk = upper_pairwise(1.0, 0.1, 25.0, 1.0, 4)[0].value;
        assert!((nk - 52.0 / 25.0).abs() < 1e-15);
    }

    #[test]
    fn comparison_coefficients() {
        let b = bdgy_coefficient(3, 1001.0);
        assert!((b / 6116.0 - 1.0).abs() < 0.01, "{b}");
        let l4 = lili_coefficient(4, 32769.0);
        let l20 = lili_coefficient(20, 32769.0);
        assert!((l4 / 9.0 - 1.0).abs() < 0.01, "{l4}");
        assert!((l20 / 20.1 - 1.0).abs() < 0.01, "{l20}");
    }
}
