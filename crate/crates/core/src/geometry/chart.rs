use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::potentials::{Jet, Profile};

/// A metric `g_ij` on an `n`-dimensional coordinate chart, evaluated point-wise.
pub trait MetricChart: Send + Sync {
    fn dim(&self) -> usize;

    fn labels(&self) -> Vec<String> {
        (0..self.dim()).map(|i| format!("x{i}")).collect()
    }

    fn admits(&self, point: &[f64]) -> bool;

    fn components(&self, point: &[f64]) -> Result<DMatrix<f64>>;

    /// Mixed partial `∂_{a1}…∂_{ak} g_ij` for `axes = [a1, …, ak]`, `1 <= k <= 3`.
    fn partial(&self, point: &[f64], axes: &[usize]) -> Result<DMatrix<f64>>;

    /// Whether any component depends on coordinate `axis`. Charts that return
    /// `false` let callers skip derivatives and treat the coordinate as cyclic.
    fn varies_along(&self, _axis: usize) -> bool {
        true
    }

    fn inverse(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        let g = self.components(point)?;
        g.try_inverse().ok_or_else(|| Error::Singular(format!("{point:?}")))
    }

    /// `∂_axis g^{ij} = −g^{ia} ∂_axis g_ab g^{bj}`.
    fn inverse_partial(&self, point: &[f64], axis: usize) -> Result<DMatrix<f64>> {
        let ginv = self.inverse(point)?;
        let dg = self.partial(point, &[axis])?;
        Ok(-(&ginv * dg * &ginv))
    }
}

/// Signs of the metric eigenvalues at `point`, sorted ascending.
pub fn signature<M: MetricChart + ?Sized>(metric: &M, point: &[f64]) -> Result<Vec<i8>> {
    let g = metric.components(point)?;
    let eig = SymmetricEigen::new(g);
    let mut signs: Vec<i8> = eig
        .eigenvalues
        .iter()
        .map(|&l| {
            if l > 0.0 {
                Ok(1)
            } else if l < 0.0 {
                Ok(-1)
            } else {
                Err(Error::Singular(format!("{point:?}")))
            }
        })
        .collect::<Result<_>>()?;
    signs.sort();
    Ok(signs)
}

pub type ComponentFn = Arc<dyn Fn(f64) -> Result<Jet> + Send + Sync>;
type Guard = Arc<dyn Fn(f64) -> bool + Send + Sync>;

#[derive(Clone)]
struct Entry {
    i: usize,
    j: usize,
    f: ComponentFn,
}

/// Metric whose components depend on a single coordinate (the base
/// coordinate `x` of every Eisenhart metric). Components are given as jets,
/// so partial derivatives up to third order are exact.
#[derive(Clone)]
pub struct LineMetric {
    dim: usize,
    axis: usize,
    labels: Vec<String>,
    metric: Vec<Entry>,
    cometric: Option<Vec<Entry>>,
    guard: Guard,
}

impl fmt::Debug for LineMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LineMetric")
            .field("dim", &self.dim)
            .field("axis", &self.axis)
            .field("labels", &self.labels)
            .finish_non_exhaustive()
    }
}

pub struct LineMetricBuilder {
    inner: LineMetric,
}

impl LineMetricBuilder {
    /// Sets `g_ij = g_ji`.
    pub fn component(mut self, i: usize, j: usize, f: impl Fn(f64) -> Result<Jet> + Send + Sync + 'static) -> Self {
        let (i, j) = (i.min(j), i.max(j));
        self.inner.metric.retain(|e| (e.i, e.j) != (i, j));
        self.inner.metric.push(Entry { i, j, f: Arc::new(f) });
        self
    }

    pub fn constant(self, i: usize, j: usize, c: f64) -> Self {
        self.component(i, j, move |_| Ok(Jet::constant(c)))
    }

    /// Sets `g^{ij}` explicitly. When every non-zero inverse component is
    /// supplied this avoids a numerical inversion in the geodesic flow.
    pub fn inverse_component(
        mut self,
        i: usize,
        j: usize,
        f: impl Fn(f64) -> Result<Jet> + Send + Sync + 'static,
    ) -> Self {
        let (i, j) = (i.min(j), i.max(j));
        let list = self.inner.cometric.get_or_insert_with(Vec::new);
        list.retain(|e| (e.i, e.j) != (i, j));
        list.push(Entry { i, j, f: Arc::new(f) });
        self
    }

    pub fn inverse_constant(self, i: usize, j: usize, c: f64) -> Self {
        self.inverse_component(i, j, move |_| Ok(Jet::constant(c)))
    }

    pub fn guard(mut self, g: impl Fn(f64) -> bool + Send + Sync + 'static) -> Self {
        self.inner.guard = Arc::new(g);
        self
    }

    pub fn build(self) -> LineMetric {
        self.inner
    }
}

impl LineMetric {
    /// Starts a metric on coordinates `labels` whose components depend on coordinate `axis`.
    pub fn builder<S: Into<String>>(labels: impl IntoIterator<Item = S>, axis: usize) -> LineMetricBuilder {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        assert!(axis < labels.len(), "dependent axis out of range");
        LineMetricBuilder {
            inner: LineMetric {
                dim: labels.len(),
                axis,
                labels,
                metric: Vec::new(),
                cometric: None,
                guard: Arc::new(|_| true),
            },
        }
    }

    /// Constant metric (flat).
    pub fn constant(g: &DMatrix<f64>) -> Self {
        let n = g.nrows();
        let mut b = Self::builder((0..n).map(|i| format!("x{i}")), 0);
        for i in 0..n {
            for j in i..n {
                if g[(i, j)] != 0.0 {
                    b = b.constant(i, j, g[(i, j)]);
                }
            }
        }
        if let Some(inv) = g.clone().try_inverse() {
            for i in 0..n {
                for j in i..n {
                    if inv[(i, j)] != 0.0 {
                        b = b.inverse_constant(i, j, inv[(i, j)]);
                    }
                }
            }
        }
        b.build()
    }

    /// Euclidean metric `δ_ij`.
    pub fn euclidean(n: usize) -> Self {
        Self::constant(&DMatrix::identity(n, n))
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    fn coordinate(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim.to_string(), found: point.len() });
        }
        if !self.admits(point) {
            return Err(Error::Domain(format!("point {point:?} is not admissible")));
        }
        Ok(point[self.axis])
    }

    fn assemble(&self, entries: &[Entry], x: f64, order: usize) -> Result<DMatrix<f64>> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for e in entries {
            let v = (e.f)(x)?.derivative(order);
            m[(e.i, e.j)] = v;
            m[(e.j, e.i)] = v;
        }
        Ok(m)
    }

    /// Metric jets at `x`: entry `(i, j)` holds `[g_ij, g_ij', g_ij'', g_ij''']`.
    pub fn jets(&self, x: f64) -> Result<Vec<(usize, usize, Jet)>> {
        self.metric.iter().map(|e| Ok((e.i, e.j, (e.f)(x)?))).collect()
    }

    /// Conformally rescaled metric `N²(x) g`, with `factor = N²` a function of the dependent coordinate.
    pub fn conformally_rescaled(&self, factor: &Profile) -> LineMetric {
        let wrap = |entries: &[Entry], invert: bool| -> Vec<Entry> {
            entries
                .iter()
                .map(|e| {
                    let (f, n2) = (e.f.clone(), factor.clone());
                    let g: ComponentFn = Arc::new(move |x| {
                        let s = n2.jet(x)?;
                        let v = f(x)?;
                        Ok(if invert { v / s } else { v * s })
                    });
                    Entry { i: e.i, j: e.j, f: g }
                })
                .collect()
        };
        let (guard, n2) = (self.guard.clone(), factor.clone());
        LineMetric {
            dim: self.dim,
            axis: self.axis,
            labels: self.labels.clone(),
            metric: wrap(&self.metric, false),
            cometric: self.cometric.as_ref().map(|c| wrap(c, true)),
            guard: Arc::new(move |x| guard(x) && n2.value(x).is_ok_and(|v| v > 0.0)),
        }
    }
}

impl MetricChart for LineMetric {
    fn dim(&self) -> usize {
        self.dim
    }

    fn labels(&self) -> Vec<String> {
        self.labels.clone()
    }

    fn admits(&self, point: &[f64]) -> bool {
        point.len() == self.dim && point.iter().all(|v| v.is_finite()) && (self.guard)(point[self.axis])
    }

    fn components(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        let x = self.coordinate(point)?;
        self.assemble(&self.metric, x, 0)
    }

    fn partial(&self, point: &[f64], axes: &[usize]) -> Result<DMatrix<f64>> {
        if axes.is_empty() || axes.len() > 3 {
            return Err(Error::Argument(format!("partial order {} not in 1..=3", axes.len())));
        }
        let x = self.coordinate(point)?;
        if axes.iter().any(|&a| a != self.axis) {
            return Ok(DMatrix::zeros(self.dim, self.dim));
        }
        self.assemble(&self.metric, x, axes.len())
    }

    fn varies_along(&self, axis: usize) -> bool {
        axis == self.axis
    }

    fn inverse(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        match &self.cometric {
            Some(c) => self.assemble(c, self.coordinate(point)?, 0),
            None => {
                let g = self.components(point)?;
                g.try_inverse().ok_or_else(|| Error::Singular(format!("{point:?}")))
            }
        }
    }

    fn inverse_partial(&self, point: &[f64], axis: usize) -> Result<DMatrix<f64>> {
        if axis != self.axis {
            self.coordinate(point)?;
            return Ok(DMatrix::zeros(self.dim, self.dim));
        }
        match &self.cometric {
            Some(c) => self.assemble(c, self.coordinate(point)?, 1),
            None => {
                let ginv = self.inverse(point)?;
                let dg = self.partial(point, &[axis])?;
                Ok(-(&ginv * dg * &ginv))
            }
        }
    }
}
