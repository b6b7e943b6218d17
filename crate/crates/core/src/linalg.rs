//! Shared numerical routines: symmetric eigendecompositions with sorted
//! spectra, pseudoinverses with a uniform rank cutoff, ridge regression,
//! and natural cubic spline interpolation.

use crate::error::{Error, Result};
use crate::RANK_EPS;
use nalgebra::{DMatrix, DVector};

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted in
/// descending order. Returns `(U, lambda)` with `M = U diag(lambda) U'`.
pub fn sym_eig_desc(m: &DMatrix<f64>) -> (DMatrix<f64>, DVector<f64>) {
    let n = m.nrows();
    let sym = symmetrize(m);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("non-finite eigenvalue")
    });
    let u = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    let vals = DVector::from_fn(n, |r, _| eig.eigenvalues[order[r]]);
    (u, vals)
}

/// `(M + M') / 2`.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Number of spectrum entries above the relative rank cutoff.
pub fn rank_of(spectrum: &DVector<f64>) -> usize {
    let smax = spectrum.iter().cloned().fold(0.0f64, f64::max);
    if smax <= 0.0 {
        return 0;
    }
    let tol = RANK_EPS * smax;
    spectrum.iter().filter(|&&s| s > tol).count()
}

/// Moore-Penrose pseudoinverse of a symmetric PSD matrix, singular
/// values below `RANK_EPS * s_max` treated as exact zeros.
pub fn pinv_psd(m: &DMatrix<f64>) -> DMatrix<f64> {
    let (u, s) = sym_eig_desc(m);
    let r = rank_of(&s);
    let n = m.nrows();
    let mut out = DMatrix::zeros(n, n);
    for k in 0..r {
        let col = u.column(k);
        out.syger(1.0 / s[k], &col, &col, 1.0);
    }
    symmetrize(&out)
}

/// Solve the ridge problem `argmin_W ||W A - T||^2 + reg ||W||^2`
/// where `A` is `n x L` (columns are argument vectors) and `T` is
/// `m x L` (columns are targets). Returns the `m x n` weight matrix
/// `W = T A' (A A' + reg I)^{-1}`.
pub fn ridge_regression(a: &DMatrix<f64>, t: &DMatrix<f64>, reg: f64) -> Result<DMatrix<f64>> {
    if a.ncols() != t.ncols() {
        return Err(Error::dim(format!(
            "ridge: {} argument columns vs {} target columns",
            a.ncols(),
            t.ncols()
        )));
    }
    let n = a.nrows();
    let mut gram = a * a.transpose();
    for i in 0..n {
        gram[(i, i)] += reg;
    }
    let at = a * t.transpose(); // n x m
    let chol = gram
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Numerical("ridge: normal equations not positive definite".into()))?;
    let sol = chol.solve(&at); // n x m
    Ok(sol.transpose())
}

/// Ridge solve in dual form, preferable when the argument dimension
/// exceeds the sample count: `W = T (A'A + reg I)^{-1} A'` applied as
/// `W = (A (A'A + reg I)^{-1} ... )` — returns the same `m x n` matrix
/// as [`ridge_regression`] but inverts an `L x L` system.
pub fn ridge_regression_dual(a: &DMatrix<f64>, t: &DMatrix<f64>, reg: f64) -> Result<DMatrix<f64>> {
    if a.ncols() != t.ncols() {
        return Err(Error::dim("ridge_dual: column mismatch"));
    }
    let l = a.ncols();
    let mut gram = a.transpose() * a; // L x L
    for i in 0..l {
        gram[(i, i)] += reg;
    }
    let chol = gram
        .cholesky()
        .ok_or_else(|| Error::Numerical("ridge_dual: system not positive definite".into()))?;
    let sol = chol.solve(&t.transpose()); // L x m
    Ok((a * sol).transpose())
}

/// Spectral radius (largest eigenvalue modulus) of a square matrix.
pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    m.complex_eigenvalues().iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Largest and smallest eigenvalue of a symmetric matrix.
pub fn sym_eig_extrema(m: &DMatrix<f64>) -> (f64, f64) {
    let eig = symmetrize(m).symmetric_eigen();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in eig.eigenvalues.iter() {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (hi, lo)
}

/// Natural cubic spline through `(xs[i], ys[i])`, evaluated at `q`.
/// Outside the support the boundary polynomials are extended.
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    m2: Vec<f64>, // second derivatives at the knots
}

impl CubicSpline {
    /// Fit a natural cubic spline. `xs` must be strictly increasing and
    /// hold at least two points.
    pub fn fit(xs: &[f64], ys: &[f64]) -> Result<Self> {
        let n = xs.len();
        if n < 2 || ys.len() != n {
            return Err(Error::invalid("spline needs >= 2 matching points"));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("spline abscissae must increase"));
        }
        // Tridiagonal system for the second derivatives, natural BCs.
        let mut m2 = vec![0.0; n];
        if n > 2 {
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut off = vec![0.0; k]; // common sub/super diagonal
            let mut rhs = vec![0.0; k];
            for i in 1..n - 1 {
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                diag[i - 1] = 2.0 * (h0 + h1);
                off[i - 1] = h1;
                rhs[i - 1] =
                    6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
            }
            // Thomas algorithm.
            for i in 1..k {
                let w = off[i - 1] / diag[i - 1];
                diag[i] -= w * off[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            m2[k] = rhs[k - 1] / diag[k - 1];
            for i in (1..k).rev() {
                m2[i] = (rhs[i - 1] - off[i - 1] * m2[i]) / diag[i - 1];
            }
        }
        Ok(CubicSpline {
            xs: xs.to_vec(),
            ys: ys.to_vec(),
            m2,
        })
    }

    pub fn eval(&self, q: f64) -> f64 {
        let n = self.xs.len();
        let i = match self
            .xs
            .binary_search_by(|x| x.partial_cmp(&q).expect("non-finite abscissa"))
        {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        };
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - q) / h;
        let b = (q - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m2[i] + (b * b * b - b) * self.m2[i + 1]) * h * h / 6.0
    }

    /// Evaluate on a uniform raster of `count` points spanning the support.
    pub fn sample(&self, count: usize) -> Vec<f64> {
        let lo = self.xs[0];
        let hi = *self.xs.last().unwrap();
        (0..count)
            .map(|i| self.eval(lo + (hi - lo) * i as f64 / (count - 1).max(1) as f64))
            .collect()
    }
}

/// Pearson correlation of two equally long series.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    cov / (va.sqrt() * vb.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eig_recomposes() {
        let m = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, 0.0, 1.0, 3.0, 0.5, 0.0, 0.5, 2.0]);
        let (u, s) = sym_eig_desc(&m);
        let rebuilt = &u * DMatrix::from_diagonal(&s) * u.transpose();
        assert_relative_eq!(rebuilt, m, epsilon = 1e-12);
        assert!(s[0] >= s[1] && s[1] >= s[2]);
    }

    #[test]
    fn pinv_of_projector_is_projector() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let p = pinv_psd(&m);
        assert_relative_eq!(p, m, epsilon = 1e-12);
    }

    #[test]
    fn ridge_matches_dual() {
        let mut rng = crate::rng::RootSeed(3).stream("ridge");
        let a = crate::rng::normal_matrix(6, 40, &mut rng);
        let t = crate::rng::normal_matrix(2, 40, &mut rng);
        let w1 = ridge_regression(&a, &t, 0.1).unwrap();
        let w2 = ridge_regression_dual(&a, &t, 0.1).unwrap();
        assert_relative_eq!(w1, w2, epsilon = 1e-9);
    }

    #[test]
    fn ridge_shrinks_to_zero() {
        let mut rng = crate::rng::RootSeed(4).stream("ridge2");
        let a = crate::rng::normal_matrix(4, 30, &mut rng);
        let t = crate::rng::normal_matrix(1, 30, &mut rng);
        let w = ridge_regression(&a, &t, 1e9).unwrap();
        assert!(w.norm() < 1e-6);
    }

    #[test]
    fn spline_reproduces_knots_and_interpolates_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let sp = CubicSpline::fit(&xs, &ys).unwrap();
        for (&x, &y) in xs.iter().zip(&ys) {
            assert_relative_eq!(sp.eval(x), y, epsilon = 1e-12);
        }
        assert_relative_eq!(sp.eval(1.5), 4.0, epsilon = 1e-10);
    }

    #[test]
    fn spectral_radius_of_rotation_like() {
        // [[0, -2], [2, 0]] has eigenvalues +-2i; the dominant pair is complex.
        let m = DMatrix::from_row_slice(2, 2, &[0.0, -2.0, 2.0, 0.0]);
        assert_relative_eq!(spectral_radius(&m), 2.0, epsilon = 1e-12);
    }
}
