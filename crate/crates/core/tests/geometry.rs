use eisenhart_core::geometry::{
    assess_flatness, christoffel_derivative, christoffel_derivative_fd, classify_flatness, ricci_scalar, CurvatureBundle,
    Flatness, LineMetric, MetricChart,
};
use eisenhart_core::lifts::{build_lift, riemannian_metric};
use eisenhart_core::{LiftKind, PotentialSpec, Profile, Result};
use nalgebra::DMatrix;
use proptest::prelude::*;

/// `g = diag(e^{2φ_0}, …, e^{2φ_{n-1}})` with `φ_i(q) = Σ_k a_ik sin(b_ik q_k + c_ik)`.
/// Equal rows give a conformally Euclidean metric.
struct WarpedDiagonal {
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
    c: Vec<Vec<f64>>,
}

impl WarpedDiagonal {
    fn new(rows: &[[f64; 3]], n: usize, shared: bool) -> Self {
        let row = |i: usize| -> Vec<[f64; 3]> {
            (0..n).map(|k| rows[(if shared { 0 } else { i } * n + k) % rows.len()]).collect()
        };
        let (mut a, mut b, mut c) = (Vec::new(), Vec::new(), Vec::new());
        for i in 0..n {
            let r = row(i);
            a.push(r.iter().map(|t| t[0]).collect());
            b.push(r.iter().map(|t| t[1]).collect());
            c.push(r.iter().map(|t| t[2]).collect());
        }
        WarpedDiagonal { a, b, c }
    }

    /// `∂^m φ_i / ∂q_k^m` (mixed partials of distinct coordinates vanish).
    fn phi_derivative(&self, i: usize, k: usize, m: usize, q: &[f64]) -> f64 {
        let (a, b, arg) = (self.a[i][k], self.b[i][k], self.b[i][k] * q[k] + self.c[i][k]);
        let trig = match m % 4 {
            0 => arg.sin(),
            1 => arg.cos(),
            2 => -arg.sin(),
            _ => -arg.cos(),
        };
        a * b.powi(m as i32) * trig
    }

    fn phi(&self, i: usize, q: &[f64]) -> f64 {
        (0..q.len()).map(|k| self.phi_derivative(i, k, 0, q)).sum()
    }

    /// Partial of `φ_i` along an arbitrary multiset of axes.
    fn phi_partial(&self, i: usize, axes: &[usize], q: &[f64]) -> f64 {
        if axes.iter().all(|&a| a == axes[0]) {
            self.phi_derivative(i, axes[0], axes.len(), q)
        } else {
            0.0
        }
    }

    /// Partial of `e^{2φ}` along `axes` by the multivariate chain rule.
    fn exp_partial(&self, i: usize, axes: &[usize], q: &[f64]) -> f64 {
        let e = (2.0 * self.phi(i, q)).exp();
        let d = |s: &[usize]| 2.0 * self.phi_partial(i, s, q);
        let factor = match *axes {
            [a] => d(&[a]),
            [a, b] => d(&[a]) * d(&[b]) + d(&[a, b]),
            [a, b, c] => {
                d(&[a]) * d(&[b]) * d(&[c])
                    + d(&[a, b]) * d(&[c])
                    + d(&[a, c]) * d(&[b])
                    + d(&[b, c]) * d(&[a])
                    + d(&[a, b, c])
            }
            _ => unreachable!(),
        };
        factor * e
    }
}

impl MetricChart for WarpedDiagonal {
    fn dim(&self) -> usize {
        self.a.len()
    }

    fn admits(&self, point: &[f64]) -> bool {
        point.len() == self.dim() && point.iter().all(|v| v.is_finite())
    }

    fn components(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        let n = self.dim();
        Ok(DMatrix::from_fn(n, n, |i, j| if i == j { (2.0 * self.phi(i, point)).exp() } else { 0.0 }))
    }

    fn partial(&self, point: &[f64], axes: &[usize]) -> Result<DMatrix<f64>> {
        let n = self.dim();
        Ok(DMatrix::from_fn(n, n, |i, j| if i == j { self.exp_partial(i, axes, point) } else { 0.0 }))
    }
}

const ROWS: [[f64; 3]; 7] = [
    [0.30, 1.0, 0.1],
    [0.20, 0.7, -0.4],
    [-0.25, 1.3, 0.6],
    [0.15, 0.5, 1.1],
    [0.35, 0.9, -0.8],
    [-0.10, 1.7, 0.3],
    [0.05, 2.1, -1.2],
];

fn scale(b: &CurvatureBundle) -> f64 {
    1.0 + b.riemann.norm()
}

fn sample_points(n: usize) -> Vec<Vec<f64>> {
    (0..12).map(|s| (0..n).map(|k| 0.37 * s as f64 - 1.9 + 0.61 * k as f64).collect()).collect()
}

#[test]
fn test_metric_partials_match_finite_differences() {
    let g = WarpedDiagonal::new(&ROWS, 3, false);
    let q = [0.3, -0.7, 1.1];
    for axes in [vec![0], vec![2], vec![0, 1], vec![1, 1], vec![0, 1, 2], vec![2, 2, 0]] {
        let analytic = g.partial(&q, &axes).unwrap();
        let (last, rest) = axes.split_last().unwrap();
        let h = 1e-5;
        let shifted = |s: f64| {
            let mut p = q.to_vec();
            p[*last] += s;
            if rest.is_empty() {
                g.components(&p).unwrap()
            } else {
                g.partial(&p, rest).unwrap()
            }
        };
        let fd = (shifted(h) - shifted(-h)) / (2.0 * h);
        assert!((analytic - &fd).amax() < 1e-6 * (1.0 + fd.amax()), "axes {axes:?}");
    }
}

#[test]
fn riemann_symmetries_and_bianchi_hold_on_general_metrics() {
    for n in [2, 3, 4] {
        let g = WarpedDiagonal::new(&ROWS, n, false);
        for p in sample_points(n) {
            let b = CurvatureBundle::compute(&g, &p).unwrap();
            assert!(b.symmetry_violation() < 1e-8 * scale(&b), "n = {n}, {p:?}");
            assert!(b.bianchi_violation() < 1e-8 * scale(&b), "n = {n}, {p:?}");
            if let Some(t) = b.weyl_trace_violation() {
                assert!(t < 1e-8 * scale(&b), "n = {n}, {p:?}: {t}");
            }
        }
    }
}

#[test]
fn riemann_symmetries_hold_on_every_lift() {
    let cases = [
        build_lift(LiftKind::Riemannian11, &PotentialSpec::ermakov(1.0).unwrap(), 2.0, 0.0).unwrap(),
        build_lift(LiftKind::Lorentzian12, &PotentialSpec::oscillator(1.3), 1.0, 0.0).unwrap(),
        build_lift(LiftKind::Mixed13, &PotentialSpec::ermakov_oscillator(1.0, 0.5).unwrap(), 1.0, 1.0).unwrap(),
        build_lift(LiftKind::ConformalMixed13, &PotentialSpec::morse(1.0, 1.0, 1.0).unwrap(), -1.0, 2.0).unwrap(),
    ];
    for sys in &cases {
        for x in [0.6, 1.0, 1.7, 2.9] {
            let mut p = vec![0.0; sys.dim()];
            p[0] = x;
            let b = CurvatureBundle::compute(sys.metric(), &p).unwrap();
            assert!(b.symmetry_violation() < 1e-8 * scale(&b), "{} at {x}", sys.kind());
            assert!(b.bianchi_violation() < 1e-8 * scale(&b), "{} at {x}", sys.kind());
            if let Some(t) = b.weyl_trace_violation() {
                assert!(t < 1e-8 * scale(&b), "{} at {x}", sys.kind());
            }
        }
    }
}

#[test]
fn analytic_and_finite_difference_christoffel_derivatives_agree() {
    for n in [2, 3, 4] {
        let g = WarpedDiagonal::new(&ROWS, n, false);
        for p in sample_points(n).into_iter().step_by(3) {
            let a = christoffel_derivative(&g, &p).unwrap();
            let f = christoffel_derivative_fd(&g, &p).unwrap();
            let diff = a.data().iter().zip(f.data()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(diff < 1e-4 * (1.0 + a.max_abs()), "n = {n}: {diff}");
        }
    }
}

#[test]
fn conformally_euclidean_metrics_have_vanishing_obstruction() {
    for n in [3, 4] {
        let conformal = WarpedDiagonal::new(&ROWS, n, true);
        let grid = sample_points(n);
        let report = assess_flatness(&conformal, &grid).unwrap();
        assert_eq!(report.verdict, Flatness::ConformallyFlat, "n = {n}");
        let control = WarpedDiagonal::new(&ROWS, n, false);
        assert_eq!(classify_flatness(&control, &grid).unwrap(), Flatness::NotConformallyFlat, "n = {n}");
    }
}

#[test]
fn rescaled_euclidean_line_metric_is_conformally_flat() {
    // N = 1 + x²/10, so N² = 1 + x²/5 + x⁴/100.
    let n_squared = Profile::constant(1.0).plus(&Profile::power(0.2, 2)).plus(&Profile::power(0.01, 4));
    for n in [3, 4] {
        let metric = LineMetric::euclidean(n).conformally_rescaled(&n_squared);
        let grid: Vec<Vec<f64>> = (0..25)
            .map(|i| {
                let mut p = vec![0.5; n];
                p[0] = -3.0 + 0.25 * i as f64;
                p
            })
            .collect();
        assert_eq!(classify_flatness(&metric, &grid).unwrap(), Flatness::ConformallyFlat, "n = {n}");
    }
}

#[test]
fn flatness_results_do_not_depend_on_grid_order() {
    let sys = build_lift(LiftKind::Mixed13, &PotentialSpec::ermakov_oscillator(1.0, 0.5).unwrap(), 1.0, 1.0).unwrap();
    let grid: Vec<Vec<f64>> = (0..30).map(|i| vec![0.5 + 0.085 * i as f64, 0.0, 0.0, 0.0]).collect();
    let mut shuffled = grid.clone();
    shuffled.reverse();
    shuffled.swap(3, 17);
    shuffled.swap(8, 25);
    let (a, b) = (assess_flatness(sys.metric(), &grid).unwrap(), assess_flatness(sys.metric(), &shuffled).unwrap());
    assert_eq!(a.verdict, b.verdict);
    assert!((a.max_riemann - b.max_riemann).abs() < 1e-8);
    assert!((a.max_conformal.unwrap() - b.max_conformal.unwrap()).abs() < 1e-8);
    assert!((a.max_abs_scalar - b.max_abs_scalar).abs() < 1e-8);
}

#[test]
fn perturbed_riemannian_lift_is_curved_but_conformally_flat() {
    let v = Profile::power(1.0, -2).plus(&Profile::power(0.05, 3));
    let metric = riemannian_metric(&v, 2.0).unwrap();
    let grid: Vec<Vec<f64>> = (0..40).map(|i| vec![0.3 + 0.1 * i as f64, 0.0]).collect();
    let report = assess_flatness(&metric, &grid).unwrap();
    assert_eq!(report.verdict, Flatness::ConformallyFlat);
    assert!(report.max_abs_scalar > 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// For `dx² + dz²/(αV)` the scalar is `V″/V − (3/2)(V′/V)²`; the oracle is written out
    /// independently for `V = c0 + c1 e^{λx}`.
    #[test]
    fn two_dimensional_scalar_matches_closed_form(
        c0 in 0.1f64..3.0,
        c1 in 0.1f64..3.0,
        lambda in -2.0f64..2.0,
        alpha in 0.2f64..4.0,
        x in -2.0f64..2.0,
    ) {
        let v = Profile::constant(c0).plus(&Profile::exp(c1, lambda));
        let metric = riemannian_metric(&v, alpha).unwrap();
        let e = c1 * (lambda * x).exp();
        let (v0, v1, v2) = (c0 + e, lambda * e, lambda * lambda * e);
        let exact = v2 / v0 - 1.5 * (v1 / v0).powi(2);
        let r = ricci_scalar(&metric, &[x, 0.0]).unwrap();
        prop_assert!((r - exact).abs() <= 1e-6 * exact.abs().max(1e-3), "{r} vs {exact}");
    }

    #[test]
    fn curvature_identities_hold_at_random_points(
        q in proptest::collection::vec(-3.0f64..3.0, 4),
        shift in 0usize..7,
    ) {
        let mut rows = ROWS;
        rows.rotate_left(shift);
        let g = WarpedDiagonal::new(&rows, 4, false);
        let b = CurvatureBundle::compute(&g, &q).unwrap();
        prop_assert!(b.symmetry_violation() < 1e-8 * scale(&b));
        prop_assert!(b.bianchi_violation() < 1e-8 * scale(&b));
        prop_assert!(b.weyl_trace_violation().unwrap() < 1e-8 * scale(&b));
    }
}
