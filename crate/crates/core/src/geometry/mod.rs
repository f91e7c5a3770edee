//! Metrics, curvature tensors and flatness classification.

mod chart;
mod curvature;
mod flatness;
mod tensor;

pub use chart::{signature, ComponentFn, LineMetric, LineMetricBuilder, MetricChart};
pub use curvature::{
    christoffel, christoffel_derivative, christoffel_derivative_fd, cotton_york, ricci, ricci_scalar, riemann,
    riemann_mixed, weyl, CurvatureBundle,
};
pub use flatness::{assess_flatness, classify_flatness, Flatness, FlatnessReport, PointCurvature, RELATIVE_TOLERANCE};
pub use tensor::Tensor;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::Jet;
    use approx::assert_abs_diff_eq;

    /// `dx² + dz²/V` with `V = x`.
    fn linear_profile_metric() -> LineMetric {
        LineMetric::builder(["x", "z"], 0)
            .constant(0, 0, 1.0)
            .component(1, 1, |x| Ok(Jet::variable(x).recip()))
            .guard(|x| x > 0.0)
            .build()
    }

    #[test]
    fn euclidean_is_flat() {
        let g = LineMetric::euclidean(3);
        let b = CurvatureBundle::compute(&g, &[0.3, 1.0, -2.0]).unwrap();
        assert_eq!(b.riemann.max_abs(), 0.0);
        assert_eq!(b.cotton_york.unwrap().max_abs(), 0.0);
    }

    #[test]
    fn two_dimensional_scalar() {
        let g = linear_profile_metric();
        assert_abs_diff_eq!(ricci_scalar(&g, &[1.0, 0.0]).unwrap(), -1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(ricci_scalar(&g, &[2.0, 0.0]).unwrap(), -1.5 / 4.0, epsilon = 1e-12);
    }

    #[test]
    fn domain_is_enforced() {
        let g = linear_profile_metric();
        assert!(matches!(riemann(&g, &[-1.0, 0.0]), Err(crate::Error::Domain(_))));
        assert!(matches!(riemann(&g, &[1.0]), Err(crate::Error::Dimension { .. })));
    }

    #[test]
    fn exact_and_difference_connection_derivatives_agree() {
        let g = linear_profile_metric();
        let p = [1.7, 0.4];
        let a = christoffel_derivative(&g, &p).unwrap();
        let b = christoffel_derivative_fd(&g, &p).unwrap();
        for (x, y) in a.data().iter().zip(b.data()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-6);
        }
    }

    #[test]
    fn signature_of_lorentzian_plane() {
        let g = LineMetric::builder(["x", "u", "v"], 0)
            .constant(0, 0, 1.0)
            .constant(1, 2, 1.0)
            .build();
        assert_eq!(signature(&g, &[0.0, 0.0, 0.0]).unwrap(), vec![-1, 1, 1]);
    }
}
