//! The closed-form Dirichlet kernel and its derivatives against the defining
//! trigonometric sums and against centered finite differences.

use vandercond::kernel::{dirichlet, dirichlet_d1, dirichlet_d2, kernel_envelopes, Bandwidth};
use vandercond::nodes::rng::Stream;
use vandercond::ExtReal;

/// `Σ_{|k|<=n} e^{2πikt}` and its first two derivatives, summed term by term.
fn brute(n: u32, t: ExtReal) -> (ExtReal, ExtReal, ExtReal) {
    let two_pi = ExtReal::PI * 2.0;
    let mut d = ExtReal::ONE;
    let mut d1 = ExtReal::ZERO;
    let mut d2 = ExtReal::ZERO;
    for k in 1..=n as i64 {
        let kk = ExtReal::from_i64(k);
        let (s, c) = (t * kk * 2.0).sincos_pi();
        d += c * 2.0;
        d1 -= s * kk * two_pi * 2.0;
        d2 -= c * (kk * two_pi).sqr() * 2.0;
    }
    (d, d1, d2)
}

fn sample_points(rng: &mut Stream, big_n: f64) -> Vec<ExtReal> {
    let mut pts: Vec<ExtReal> = (0..60)
        .map(|_| ExtReal::from_f64(rng.uniform() - 0.5))
        .collect();
    // nearly-colliding offsets down to 1e-12/N
    pts.extend((0..40).map(|_| ExtReal::from_f64(10f64.powf(-12.0 * rng.uniform())) / big_n));
    pts.push(ExtReal::ZERO);
    pts.push(ExtReal::from_f64(0.5));
    pts
}

#[test]
fn closed_forms_match_trigonometric_sums() {
    let mut rng = Stream::new(0xd1);
    for n in [0u32, 1, 2, 7, 50, 400] {
        let bw = Bandwidth::new(n);
        let big_n = bw.n_f64();
        for t in sample_points(&mut rng, big_n) {
            let (d, d1, d2) = brute(n, t);
            let e0 = (dirichlet(bw, t) - d).abs().to_f64() / big_n;
            let e1 = (dirichlet_d1(bw, t) - d1).abs().to_f64() / big_n.powi(2);
            let e2 = (dirichlet_d2(bw, t) - d2).abs().to_f64() / big_n.powi(3);
            assert!(e0 < 1e-27, "D n={n} t={t:?}: {e0:e}");
            assert!(e1 < 1e-26, "D' n={n} t={t:?}: {e1:e}");
            assert!(e2 < 1e-26, "D'' n={n} t={t:?}: {e2:e}");
        }
    }
}

#[test]
fn derivatives_match_finite_differences() {
    let mut rng = Stream::new(0xfd);
    for n in [1u32, 5, 50] {
        let bw = Bandwidth::new(n);
        let big_n = bw.n_f64();
        let h = ExtReal::from_f64(1e-9 / big_n);
        for _ in 0..200 {
            let t = ExtReal::from_f64(rng.uniform() - 0.5);
            let fd1 = (dirichlet(bw, t + h) - dirichlet(bw, t - h)) / (h * 2.0);
            let fd2 = (dirichlet_d1(bw, t + h) - dirichlet_d1(bw, t - h)) / (h * 2.0);
            let e1 = (fd1 - dirichlet_d1(bw, t)).abs().to_f64() / big_n.powi(2);
            let e2 = (fd2 - dirichlet_d2(bw, t)).abs().to_f64() / big_n.powi(3);
            assert!(e1 < 1e-14, "n={n} t={t:?}: {e1:e}");
            assert!(e2 < 1e-14, "n={n} t={t:?}: {e2:e}");
        }
    }
}

#[test]
fn kernel_is_even_and_periodic() {
    let bw = Bandwidth::new(13);
    let mut rng = Stream::new(3);
    for _ in 0..200 {
        let t = ExtReal::from_f64(rng.uniform() - 0.5);
        let d = dirichlet(bw, t);
        assert_eq!(dirichlet(bw, -t), d);
        assert!((dirichlet(bw, t + 1.0) - d).abs().to_f64() < 1e-28 * 27.0);
    }
}

#[test]
fn envelope_domains() {
    let bw = Bandwidth::new(50);
    let inside = kernel_envelopes(bw, 0.5 / 101.0);
    assert!(inside.taylor.is_ok() && inside.magnitude.is_ok());
    let far = kernel_envelopes(bw, 0.3);
    assert!(far.taylor.is_err() && far.magnitude.is_ok());
    let zero = kernel_envelopes(bw, 0.0);
    assert!(zero.taylor.is_ok() && zero.magnitude.is_err());
    let t = 1.0 / 101.0;
    let env = kernel_envelopes(bw, t).taylor.unwrap();
    assert!((env.lower - 101.0 * (1.0 - std::f64::consts::PI.powi(2) / 6.0)).abs() < 1e-9);
    assert!(env.upper.abs() < 1e-9);
}
