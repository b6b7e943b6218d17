//! Matrix conceptors: construction from state correlations, aperture
//! adaptation, quota, similarity measures, online adaptation, and the
//! aperture-selection criteria.

use crate::error::{Error, Result};
use crate::linalg::{rank_of, sym_eig_desc, symmetrize, CubicSpline};
use crate::reservoir::StateHarvest;
use crate::{RANK_EPS, UNIT_EPS};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// A reservoir state correlation matrix estimate `R = X X' / L`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Correlation {
    r: DMatrix<f64>,
    samples: usize,
}

impl Correlation {
    /// Wrap an externally computed PSD matrix.
    pub fn new(r: DMatrix<f64>, samples: usize) -> Self {
        Correlation {
            r: symmetrize(&r),
            samples,
        }
    }

    /// `R = X X' / L` from harvested states.
    pub fn from_states(harvest: &StateHarvest) -> Self {
        Self::from_state_matrix(&harvest.states)
    }

    /// `R = X X' / L` where columns of `x` are state samples.
    pub fn from_state_matrix(x: &DMatrix<f64>) -> Self {
        let l = x.ncols().max(1);
        let r = (x * x.transpose()) / l as f64;
        Correlation {
            r: symmetrize(&r),
            samples: x.ncols(),
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.r
    }

    pub fn dim(&self) -> usize {
        self.r.nrows()
    }

    pub fn samples(&self) -> usize {
        self.samples
    }
}

/// An `N x N` positive semidefinite matrix with singular values in
/// `[0, 1]`, kept together with its eigendecomposition `C = U S U'`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(from = "ConceptorRepr", into = "ConceptorRepr")]
pub struct Conceptor {
    c: DMatrix<f64>,
    u: DMatrix<f64>,
    s: DVector<f64>,
}

#[derive(Serialize, Deserialize)]
struct ConceptorRepr {
    matrix: DMatrix<f64>,
}

impl From<ConceptorRepr> for Conceptor {
    fn from(r: ConceptorRepr) -> Self {
        Conceptor::from_matrix(&r.matrix)
    }
}

impl From<Conceptor> for ConceptorRepr {
    fn from(c: Conceptor) -> Self {
        ConceptorRepr { matrix: c.c }
    }
}

impl Conceptor {
    /// PSD repair entry point: symmetrize, eigendecompose, clip the
    /// spectrum to `[0, 1]` and rebuild.
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        let (u, mut s) = sym_eig_desc(m);
        s.apply(|v| *v = v.clamp(0.0, 1.0));
        Self::from_spectrum(u, s)
    }

    /// Build from an orthonormal basis and a spectrum (clipped to `[0,1]`).
    pub fn from_spectrum(u: DMatrix<f64>, mut s: DVector<f64>) -> Self {
        s.apply(|v| *v = v.clamp(0.0, 1.0));
        let c = &u * DMatrix::from_diagonal(&s) * u.transpose();
        Conceptor {
            c: symmetrize(&c),
            u,
            s,
        }
    }

    /// `C(R, alpha) = R (R + alpha^{-2} I)^{-1}`, computed on the
    /// spectrum of `R`: `s_i = sigma_i / (sigma_i + alpha^{-2})`.
    pub fn from_correlation(corr: &Correlation, aperture: f64) -> Result<Self> {
        if !aperture.is_finite() || aperture <= 0.0 {
            return Err(Error::invalid("aperture must be finite and positive"));
        }
        let (u, mut sig) = sym_eig_desc(corr.matrix());
        let a2 = aperture.powi(-2);
        if sig.iter().any(|&v| v < -1e-6 * sig[0].abs().max(1.0)) {
            return Err(Error::Numerical(
                "correlation matrix is not positive semidefinite".into(),
            ));
        }
        sig.apply(|v| {
            let sv = v.max(0.0);
            *v = sv / (sv + a2);
        });
        Ok(Self::from_spectrum(u, sig))
    }

    pub fn zero(n: usize) -> Self {
        Self::from_spectrum(DMatrix::identity(n, n), DVector::zeros(n))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_spectrum(DMatrix::identity(n, n), DVector::from_element(n, 1.0))
    }

    pub fn dim(&self) -> usize {
        self.c.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.c
    }

    /// Orthonormal basis `U` of the cached decomposition `C = U S U'`.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.u
    }

    /// Singular values, descending, in `[0, 1]`.
    pub fn singular_values(&self) -> &DVector<f64> {
        &self.s
    }

    /// Rank under the module-wide cutoff `RANK_EPS * s_max`.
    pub fn rank(&self) -> usize {
        rank_of(&self.s)
    }

    /// Number of singular values counting as exact ones.
    pub fn unit_rank(&self) -> usize {
        self.s.iter().filter(|&&v| v >= 1.0 - UNIT_EPS).count()
    }

    /// `trace(C) / N`: the fraction of state-space directions claimed.
    pub fn quota(&self) -> f64 {
        self.s.sum() / self.dim() as f64
    }

    /// Recover `R = alpha^{-2} (I - C)^{-1} C`. Fails on unit singular
    /// values, which correspond to unbounded data variance.
    pub fn correlation(&self, aperture: f64) -> Result<Correlation> {
        if !aperture.is_finite() || aperture <= 0.0 {
            return Err(Error::invalid("aperture must be finite and positive"));
        }
        if self.unit_rank() > 0 {
            return Err(Error::Numerical(
                "cannot recover correlation from unit singular values".into(),
            ));
        }
        let a2 = aperture.powi(-2);
        let sig = self.s.map(|s| a2 * s / (1.0 - s));
        let r = &self.u * DMatrix::from_diagonal(&sig) * self.u.transpose();
        Ok(Correlation::new(r, 0))
    }

    /// Aperture adaptation `phi(C, gamma)`; `gamma` may be `0` or
    /// `f64::INFINITY`, in which case the singular values are rewritten
    /// to the respective hard limits directly.
    pub fn aperture_adapt(&self, gamma: f64) -> Self {
        assert!(gamma >= 0.0, "aperture factor must be nonnegative");
        let smax = self.s.iter().cloned().fold(0.0f64, f64::max);
        let zero_tol = RANK_EPS * smax;
        let s = self.s.map(|s| {
            if s >= 1.0 - UNIT_EPS {
                1.0
            } else if s <= zero_tol {
                0.0
            } else if gamma == 0.0 {
                0.0
            } else if gamma.is_infinite() {
                1.0
            } else {
                s / (s + gamma.powi(-2) * (1.0 - s))
            }
        });
        Self::from_spectrum(self.u.clone(), s)
    }

    /// True when every singular value is 0 or 1 (a projector).
    pub fn is_hard(&self, tol: f64) -> bool {
        self.s.iter().all(|&v| v <= tol || v >= 1.0 - tol)
    }
}

/// Generalized squared cosine between two correlation matrices.
pub fn similarity_r(r1: &Correlation, r2: &Correlation) -> Result<f64> {
    similarity_impl(r1.matrix(), r2.matrix())
}

/// Similarity of conceptor-described ellipsoids at a common aperture.
pub fn similarity_c(c1: &Conceptor, c2: &Conceptor) -> Result<f64> {
    similarity_impl(c1.matrix(), c2.matrix())
}

fn similarity_impl(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    if a.nrows() != b.nrows() {
        return Err(Error::dim("similarity operands must share dimension"));
    }
    let (ua, sa) = sym_eig_desc(a);
    let (ub, sb) = sym_eig_desc(b);
    let na = sa.norm();
    let nb = sb.norm();
    if na <= 0.0 || nb <= 0.0 {
        return Err(Error::invalid("similarity undefined for zero matrix"));
    }
    let sqrt_a = sa.map(|v| v.max(0.0).sqrt());
    let sqrt_b = sb.map(|v| v.max(0.0).sqrt());
    let m = DMatrix::from_diagonal(&sqrt_a) * (ua.transpose() * ub) * DMatrix::from_diagonal(&sqrt_b);
    Ok(m.norm_squared() / (na * nb))
}

/// One stochastic-gradient step of the conceptor cost
/// `E||x - Cx||^2 + alpha^{-2} ||C||^2`, applied to a raw matrix:
/// `C' = C + lambda ((x - Cx) x' - alpha^{-2} C)`, symmetrized.
pub fn online_update(
    c: &DMatrix<f64>,
    x: &DVector<f64>,
    learn_rate: f64,
    aperture: f64,
) -> DMatrix<f64> {
    let cx = c * x;
    let err = x - cx;
    let mut out = c.clone();
    out.ger(learn_rate, &err, x, 1.0);
    out -= c * (learn_rate * aperture.powi(-2));
    symmetrize(&out)
}

/// Fraction of the reservoir signal energy suppressed by the conceptor
/// in a constrained run: `E||z - x||^2 / E||z||^2` with
/// `z(n+1) = tanh(W x(n) + b)` and `x(n+1) = C z(n+1)`.
pub fn attenuation(
    w_eff: &DMatrix<f64>,
    bias: &DVector<f64>,
    c: &Conceptor,
    run_len: usize,
    washout: usize,
    start: &DVector<f64>,
) -> Result<f64> {
    if run_len < 100 {
        return Err(Error::invalid("attenuation run needs >= 100 recorded steps"));
    }
    let mut x = start.clone();
    let mut num = 0.0;
    let mut den = 0.0;
    for n in 0..(washout + run_len) {
        let mut z = w_eff * &x + bias;
        z.apply(|v| *v = v.tanh());
        x = c.matrix() * &z;
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("attenuation run state".into()));
        }
        if n >= washout {
            num += (&z - &x).norm_squared();
            den += z.norm_squared();
        }
    }
    if den <= 0.0 {
        return Err(Error::Numerical("attenuation run produced zero signal".into()));
    }
    Ok(num / den)
}

/// Gradient of the squared Frobenius norm of `phi(C, gamma)` with
/// respect to `log gamma`, via central finite differences.
pub fn norm_gradient(c: &Conceptor, gamma: f64) -> f64 {
    let h: f64 = 1e-4;
    let hi = c.aperture_adapt(gamma * h.exp()).singular_values().norm_squared();
    let lo = c.aperture_adapt(gamma * (-h).exp()).singular_values().norm_squared();
    (hi - lo) / (2.0 * h)
}

/// Scan `norm_gradient` over a grid of exponents (aperture = 2^g),
/// interpolate with cubic splines on a 0.01 raster, and return the
/// aperture `2^{g_max}` at the interpolated maximum.
pub fn best_aperture(c: &Conceptor, grid_exponents: &[f64]) -> Result<f64> {
    if grid_exponents.len() < 2 {
        return Err(Error::invalid("aperture grid needs at least 2 exponents"));
    }
    let grads: Vec<f64> = grid_exponents
        .iter()
        .map(|&g| norm_gradient(c, 2f64.powf(g)))
        .collect();
    let spline = CubicSpline::fit(grid_exponents, &grads)?;
    let lo = grid_exponents[0];
    let hi = *grid_exponents.last().unwrap();
    let count = ((hi - lo) / 0.01).round() as usize + 1;
    let mut best_g = lo;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..count {
        let g = lo + 0.01 * i as f64;
        let v = spline.eval(g);
        if v > best_v {
            best_v = v;
            best_g = g;
        }
    }
    Ok(2f64.powf(best_g))
}
