use eisenhart_core::numerics::{hausdorff, integrate, interpolate_cubic, second_differences, solve_bracketed};
use proptest::prelude::*;

fn point_segment(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let ap: Vec<f64> = a.iter().zip(p).map(|(x, y)| y - x).collect();
    let len2: f64 = ab.iter().map(|v| v * v).sum();
    let t = if len2 > 0.0 { (ab.iter().zip(&ap).map(|(u, v)| u * v).sum::<f64>() / len2).clamp(0.0, 1.0) } else { 0.0 };
    ap.iter().zip(&ab).map(|(u, v)| (u - t * v).powi(2)).sum::<f64>().sqrt()
}

/// Every vertex of one polyline against every segment of the other, no pruning.
fn brute_force(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let directed = |a: &[Vec<f64>], b: &[Vec<f64>]| {
        let segments: Vec<(&[f64], &[f64])> = if b.len() == 1 {
            vec![(&b[0], &b[0])]
        } else {
            b.windows(2).map(|w| (w[0].as_slice(), w[1].as_slice())).collect()
        };
        a.iter()
            .map(|p| segments.iter().map(|(s, e)| point_segment(p, s, e)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

#[test]
fn hausdorff_measures_vertices_against_segments() {
    let a = vec![vec![0.0, 1.0]];
    let b = vec![vec![-1.0, 0.0], vec![1.0, 0.0]];
    assert_eq!(hausdorff(&a, &b).unwrap(), 2f64.sqrt());
    let c = vec![vec![0.0, 1.0], vec![0.5, 1.0]];
    assert_eq!(hausdorff(&c, &[vec![0.0, 0.0], vec![0.5, 0.0]]).unwrap(), 1.0);
}

#[test]
fn quadrature_and_root_finding() {
    let area = integrate(|x: f64| Ok(x.exp()), 0.0, 1.0, 1e-12).unwrap();
    assert!((area - (1f64.exp() - 1.0)).abs() < 1e-12);
    let root = solve_bracketed(|x: f64| Ok(x * x - 2.0), |x: f64| Ok(2.0 * x), 0.0, 2.0, 1e-14).unwrap();
    assert!((root - 2f64.sqrt()).abs() < 1e-13);
}

#[test]
fn cubic_interpolation_is_exact_on_cubics() {
    let xs: Vec<f64> = (0..10).map(|i| 0.3 * i as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|x| x * x * x - 2.0 * x + 1.0).collect();
    for x in [0.05, 1.1, 2.6] {
        assert!((interpolate_cubic(&xs, &ys, x).unwrap() - (x * x * x - 2.0 * x + 1.0)).abs() < 1e-12);
    }
}

#[test]
fn second_differences_vanish_on_lines() {
    let ys: Vec<f64> = (0..50).map(|i| 3.0 - 0.7 * i as f64 * 0.1).collect();
    assert!(second_differences(&ys, 0.1).iter().all(|d| d.abs() < 1e-12));
}

fn polyline(monotone: bool) -> impl Strategy<Value = Vec<Vec<f64>>> {
    proptest::collection::vec((0.0f64..1.0, -2.0f64..2.0, -2.0f64..2.0), 1..60).prop_map(move |pts| {
        let mut t = 0.0;
        pts.into_iter()
            .map(|(dt, y, z)| {
                t += if monotone { dt + 1e-3 } else { dt - 0.5 };
                vec![t, y, z]
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn pruned_hausdorff_matches_brute_force(a in polyline(true), b in polyline(true)) {
        let fast = hausdorff(&a, &b).unwrap();
        prop_assert!((fast - brute_force(&a, &b)).abs() < 1e-12);
    }

    #[test]
    fn hausdorff_without_monotone_axis_matches_brute_force(a in polyline(false), b in polyline(false)) {
        let fast = hausdorff(&a, &b).unwrap();
        prop_assert!((fast - brute_force(&a, &b)).abs() < 1e-12);
    }
}
