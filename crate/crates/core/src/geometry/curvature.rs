use nalgebra::DMatrix;
use serde::Serialize;

use super::chart::MetricChart;
use super::tensor::Tensor;
use crate::error::{Error, Result};

/// Metric, inverse and partial derivatives at one point.
struct Local {
    n: usize,
    g: DMatrix<f64>,
    ginv: DMatrix<f64>,
    dg: Vec<DMatrix<f64>>,
    ddg: Vec<Vec<DMatrix<f64>>>,
    varies: Vec<bool>,
}

impl Local {
    fn new<M: MetricChart + ?Sized>(metric: &M, point: &[f64], second: bool) -> Result<Self> {
        let n = metric.dim();
        if point.len() != n {
            return Err(Error::Dimension { expected: n.to_string(), found: point.len() });
        }
        let g = metric.components(point)?;
        let ginv = metric.inverse(point)?;
        let varies: Vec<bool> = (0..n).map(|a| metric.varies_along(a)).collect();
        let zero = DMatrix::zeros(n, n);
        let mut dg = vec![zero.clone(); n];
        let mut ddg = vec![vec![zero; n]; n];
        for a in 0..n {
            if !varies[a] {
                continue;
            }
            dg[a] = metric.partial(point, &[a])?;
            if second {
                for b in a..n {
                    if varies[b] {
                        let m = metric.partial(point, &[a, b])?;
                        ddg[b][a] = m.clone();
                        ddg[a][b] = m;
                    }
                }
            }
        }
        Ok(Local { n, g, ginv, dg, ddg, varies })
    }

    /// `Γ_lij = ½(∂_i g_lj + ∂_j g_li − ∂_l g_ij)`.
    fn first_kind(&self) -> Tensor {
        let n = self.n;
        let mut t = Tensor::zeros(n, 3);
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    t[[l, i, j]] = 0.5 * (self.dg[i][(l, j)] + self.dg[j][(l, i)] - self.dg[l][(i, j)]);
                }
            }
        }
        t
    }

    fn raise(&self, first: &Tensor) -> Tensor {
        let n = self.n;
        let mut t = Tensor::zeros(n, 3);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    t[[k, i, j]] = (0..n).map(|l| self.ginv[(k, l)] * first[[l, i, j]]).sum();
                }
            }
        }
        t
    }

    /// `∂_m Γ^k_ij`, stored as `[m, k, i, j]`.
    fn christoffel_derivative(&self, first: &Tensor) -> Tensor {
        let n = self.n;
        let mut t = Tensor::zeros(n, 4);
        for m in 0..n {
            if !self.varies[m] {
                continue;
            }
            let dginv = -(&self.ginv * &self.dg[m] * &self.ginv);
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let mut s = 0.0;
                        for l in 0..n {
                            let dfirst =
                                0.5 * (self.ddg[m][i][(l, j)] + self.ddg[m][j][(l, i)] - self.ddg[m][l][(i, j)]);
                            s += dginv[(k, l)] * first[[l, i, j]] + self.ginv[(k, l)] * dfirst;
                        }
                        t[[m, k, i, j]] = s;
                    }
                }
            }
        }
        t
    }
}

/// Christoffel symbols of the second kind, `Γ^k_ij` stored as `[k, i, j]`.
pub fn christoffel<M: MetricChart + ?Sized>(metric: &M, point: &[f64]) -> Result<Tensor> {
    let local = Local::new(metric, point, false)?;
    Ok(local.raise(&local.first_kind()))
}

/// Exact `∂_m Γ^k_ij` from second metric derivatives, stored as `[m, k, i, j]`.
pub fn christoffel_derivative<M: MetricChart + ?Sized>(metric: &M, point: &[f64]) -> Result<Tensor> {
    let local = Local::new(metric, point, true)?;
    Ok(local.christoffel_derivative(&local.first_kind()))
}

/// `∂_m Γ^k_ij` by central differences of `Γ`, for cross-checking the exact form.
pub fn christoffel_derivative_fd<M: MetricChart + ?Sized>(metric: &M, point: &[f64]) -> Result<Tensor> {
    let n = metric.dim();
    let mut t = Tensor::zeros(n, 4);
    for m in 0..n {
        if !metric.varies_along(m) {
            continue;
        }
        let h = 1e-5 * point[m].abs().max(1.0);
        let (mut plus, mut minus) = (point.to_vec(), point.to_vec());
        plus[m] += h;
        minus[m] -= h;
        let (gp, gm) = (christoffel(metric, &plus)?, christoffel(metric, &minus)?);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    t[[m, k, i, j]] = (gp[[k, i, j]] - gm[[k, i, j]]) / (2.0 * h);
                }
            }
        }
    }
    Ok(t)
}

fn riemann_up(local: &Local, gamma: &Tensor, dgamma: &Tensor) -> Tensor {
    let n = local.n;
    let mut r = Tensor::zeros(n, 4);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s = dgamma[[k, i, j, l]] - dgamma[[l, i, j, k]];
                    for m in 0..n {
                        s += gamma[[i, k, m]] * gamma[[m, j, l]] - gamma[[i, l, m]] * gamma[[m, j, k]];
                    }
                    r[[i, j, k, l]] = s;
                }
            }
        }
    }
    r
}

fn lower_first(local: &Local, up: &Tensor) -> Tensor {
    let n = local.n;
    let mut r = Tensor::zeros(n, 4);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    r[[i, j, k, l]] = (0..n).map(|a| local.g[(i, a)] * up[[a, j, k, l]]).sum();
                }
            }
        }
    }
    r
}

fn contract_ricci(n: usize, up: &Tensor) -> Tensor {
    let mut ric = Tensor::zeros(n, 2);
    for j in 0..n {
        for l in 0..n {
            ric[[j, l]] = (0..n).map(|i| up[[i, j, i, l]]).sum();
        }
    }
    ric
}

fn trace(local: &Local, ric: &Tensor) -> f64 {
    let n = local.n;
    let mut s = 0.0;
    for j in 0..n {
        for l in 0..n {
            s += local.ginv[(j, l)] * ric[[j, l]];
        }
    }
    s
}

/// Riemann tensor with the first index raised, `R^i_jkl` stored as `[i, j, k, l]`.
pub fn riemann_mixed<M: MetricChart + ?Sized>(metric: &M, point: &[f64]) -> Result<Tensor> {
    let local = Local::new(metric, point, true)?;
    let first = local.first_kind();
    let gamma = local.raise(&first);
    let dgamma = local.christoffel_derivative(&first);
    Ok(riemann_up(&local, &gamma, &dgamma))
}

/// Fully covariant Riemann tensor `R_ijkl = g_im R^m_jkl`.
pub fn riemann<M: MetricChart + ?Sized>(metric: &M, point: &[f64]) -> Result<Tensor> {
    let local = Local::new(metric, point, true)?;
    let up = riemann_mixed(metric, point)?;
    Ok(lower_first(&local, &up))
}

/// Ricci tensor `R_jl = R^i_jil`.
pub fn ricci<M: MetricChart + ?Sized>(metric: &M, point: &[f64]) -> Result<Tensor> {
    Ok(contract_ricci(metric.dim(), &riemann_mixed(metric, point)?))
}

/// Ricci scalar `R = g^{jl} R_jl`.
pub fn ricci_scalar<M: MetricChart + ?Sized>(metric: &M, point: &[f64]) -> Result<f64> {
    let local = Local::new(metric, point, true)?;
    let ric = ricci(metric, point)?;
    Ok(trace(&local, &ric))
}

fn ricci_and_scalar<M: MetricChart + ?Sized>(metric: &M, point: &[f64]) -> Result<(Tensor, f64)> {
    let local = Local::new(metric, point, true)?;
    let first = local.first_kind();
    let up = riemann_up(&local, &local.raise(&first), &local.christoffel_derivative(&first));
    let ric = contract_ricci(local.n, &up);
    let s = trace(&local, &ric);
    Ok((ric, s))
}

/// Cotton-York tensor of a 3-dimensional metric,
/// `C_μνκ = R_μν;κ − R_κν;μ + ¼(R_;μ g_κν − R_;κ g_μν)`, stored as `[μ, ν, κ]`.
/// Derivatives of the Ricci tensor are taken by central differences.
pub fn cotton_york<M: MetricChart + ?Sized>(metric: &M, point: &[f64]) -> Result<Tensor> {
    let n = metric.dim();
    if n != 3 {
        return Err(Error::Dimension { expected: "3".into(), found: n });
    }
    let local = Local::new(metric, point, false)?;
    let gamma = local.raise(&local.first_kind());
    let (ric, _) = ricci_and_scalar(metric, point)?;
    let mut dric = Tensor::zeros(n, 3);
    let mut dscalar = [0.0; 3];
    for k in 0..n {
        if !metric.varies_along(k) {
            continue;
        }
        let h = 1e-4 * point[k].abs().max(1.0);
        let (mut plus, mut minus) = (point.to_vec(), point.to_vec());
        plus[k] += h;
        minus[k] -= h;
        let (rp, sp) = ricci_and_scalar(metric, &plus)?;
        let (rm, sm) = ricci_and_scalar(metric, &minus)?;
        dscalar[k] = (sp - sm) / (2.0 * h);
        for a in 0..n {
            for b in 0..n {
                dric[[k, a, b]] = (rp[[a, b]] - rm[[a, b]]) / (2.0 * h);
            }
        }
    }
    let cov = |mu: usize, nu: usize, ka: usize| -> f64 {
        let mut s = dric[[ka, mu, nu]];
        for l in 0..n {
            s -= gamma[[l, ka, mu]] * ric[[l, nu]] + gamma[[l, ka, nu]] * ric[[mu, l]];
        }
        s
    };
    let mut c = Tensor::zeros(n, 3);
    for mu in 0..n {
        for nu in 0..n {
            for ka in 0..n {
                c[[mu, nu, ka]] = cov(mu, nu, ka) - cov(ka, nu, mu)
                    + 0.25 * (dscalar[mu] * local.g[(ka, nu)] - dscalar[ka] * local.g[(mu, nu)]);
            }
        }
    }
    Ok(c)
}

fn weyl_from(local: &Local, r: &Tensor, ric: &Tensor, scalar: f64) -> Tensor {
    let n = local.n;
    let nf = n as f64;
    let g = &local.g;
    let mut c = Tensor::zeros(n, 4);
    for m in 0..n {
        for v in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let ricci_part = g[(m, k)] * ric[[l, v]] - g[(m, l)] * ric[[k, v]] - g[(v, k)] * ric[[l, m]]
                        + g[(v, l)] * ric[[k, m]];
                    let scalar_part = g[(m, k)] * g[(l, v)] - g[(m, l)] * g[(k, v)];
                    c[[m, v, k, l]] = r[[m, v, k, l]] - ricci_part / (nf - 2.0)
                        + scalar * scalar_part / ((nf - 1.0) * (nf - 2.0));
                }
            }
        }
    }
    c
}

/// Weyl tensor `C_μνκλ` of a metric of dimension at least 4.
pub fn weyl<M: MetricChart + ?Sized>(metric: &M, point: &[f64]) -> Result<Tensor> {
    let n = metric.dim();
    if n < 4 {
        return Err(Error::Dimension { expected: ">= 4".into(), found: n });
    }
    Ok(CurvatureBundle::compute(metric, point)?.weyl.expect("weyl present for n >= 4"))
}

/// All curvature quantities at one point.
#[derive(Clone, Debug, Serialize)]
pub struct CurvatureBundle {
    pub point: Vec<f64>,
    pub metric: Tensor,
    pub inverse: Tensor,
    pub christoffel: Tensor,
    pub riemann: Tensor,
    pub ricci: Tensor,
    pub scalar: f64,
    pub cotton_york: Option<Tensor>,
    pub weyl: Option<Tensor>,
}

fn matrix_tensor(m: &DMatrix<f64>) -> Tensor {
    let n = m.nrows();
    let mut t = Tensor::zeros(n, 2);
    for i in 0..n {
        for j in 0..n {
            t[[i, j]] = m[(i, j)];
        }
    }
    t
}

impl CurvatureBundle {
    pub fn compute<M: MetricChart + ?Sized>(metric: &M, point: &[f64]) -> Result<Self> {
        let local = Local::new(metric, point, true)?;
        let first = local.first_kind();
        let gamma = local.raise(&first);
        let up = riemann_up(&local, &gamma, &local.christoffel_derivative(&first));
        let r = lower_first(&local, &up);
        let ric = contract_ricci(local.n, &up);
        let scalar = trace(&local, &ric);
        let cotton_york = if local.n == 3 { Some(cotton_york(metric, point)?) } else { None };
        let weyl = if local.n >= 4 { Some(weyl_from(&local, &r, &ric, scalar)) } else { None };
        let bundle = CurvatureBundle {
            point: point.to_vec(),
            metric: matrix_tensor(&local.g),
            inverse: matrix_tensor(&local.ginv),
            christoffel: gamma,
            riemann: r,
            ricci: ric,
            scalar,
            cotton_york,
            weyl,
        };
        if !bundle.riemann.data().iter().all(|v| v.is_finite()) || !scalar.is_finite() {
            return Err(Error::Numeric(format!("non-finite curvature at {point:?}")));
        }
        Ok(bundle)
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    /// Largest violation of `R_ijkl = −R_jikl = −R_ijlk = R_klij`.
    pub fn symmetry_violation(&self) -> f64 {
        let n = self.dim();
        let r = &self.riemann;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = r[[i, j, k, l]];
                        worst = worst
                            .max((v + r[[j, i, k, l]]).abs())
                            .max((v + r[[i, j, l, k]]).abs())
                            .max((v - r[[k, l, i, j]]).abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest violation of the first Bianchi identity `R_ijkl + R_iklj + R_iljk = 0`.
    pub fn bianchi_violation(&self) -> f64 {
        let n = self.dim();
        let r = &self.riemann;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        worst = worst.max((r[[i, j, k, l]] + r[[i, k, l, j]] + r[[i, l, j, k]]).abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest trace of the Weyl tensor over any index pair; `None` below dimension 4.
    pub fn weyl_trace_violation(&self) -> Option<f64> {
        let c = self.weyl.as_ref()?;
        let n = self.dim();
        let ginv = &self.inverse;
        let mut worst: f64 = 0.0;
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for &(p, q) in &pairs {
            for x in 0..n {
                for y in 0..n {
                    let mut s = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            let mut idx = [0usize; 4];
                            let free: Vec<usize> = (0..4).filter(|&s| s != p && s != q).collect();
                            idx[p] = a;
                            idx[q] = b;
                            idx[free[0]] = x;
                            idx[free[1]] = y;
                            s += ginv[[a, b]] * c[idx];
                        }
                    }
                    worst = worst.max(s.abs());
                }
            }
        }
        Some(worst)
    }

    /// Norm of the conformal obstruction: Cotton-York in dimension 3, Weyl above.
    pub fn conformal_norm(&self) -> Option<f64> {
        self.cotton_york.as_ref().or(self.weyl.as_ref()).map(Tensor::norm)
    }
}
