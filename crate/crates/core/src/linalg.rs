//! Small dense complex linear algebra used by the eigenvalue and resolvent
//! machinery: characteristic-polynomial eigensolver for the (2n-1)-dimensional
//! coefficient matrices, spectral frames and projectors, banded LU for the
//! direct discretization oracle, and Fornberg finite-difference weights on
//! arbitrary nodes.
//!
//! The matrices here are tiny (N ≤ 8); robustness and determinism matter more
//! than asymptotic speed, so eigenvalues are computed as polynomial roots via
//! Durand-Kerner with Newton polish, and eigenvectors by shifted inverse
//! iteration.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("singular matrix in {context}")]
    Singular { context: &'static str },
    #[error("eigenvalue iteration failed to converge (residual {residual:.3e})")]
    EigenNoConvergence { residual: f64 },
    #[error("spectral gap violation: eigenvalue with |Re mu| = {re_abs:.3e} < gap {gap:.3e}")]
    CenterSubspace { re_abs: f64, gap: f64 },
}

pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

/// Coefficients of det(zI - M), highest degree first (monic), by
/// Faddeev-LeVerrier. Exact in O(N^4) operations; fine for N ≤ 8.
pub fn char_poly(m: &DMatrix<C64>) -> Vec<C64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    let mut coeffs = vec![ZERO; n + 1];
    coeffs[0] = ONE;
    let mut aux = DMatrix::<C64>::identity(n, n);
    for k in 1..=n {
        aux = m * aux;
        let c = -aux.trace() / C64::new(k as f64, 0.0);
        coeffs[k] = c;
        for i in 0..n {
            aux[(i, i)] += c;
        }
    }
    coeffs
}

/// Horner evaluation of p and p' for coefficients listed highest degree first.
pub fn poly_eval_with_deriv(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of a monic-ish polynomial (leading coefficient need not be 1) by
/// Durand-Kerner, deterministically initialized, with a Newton polish pass.
pub fn poly_roots(coeffs: &[C64]) -> Vec<C64> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return vec![];
    }
    let lead = coeffs[0];
    let monic: Vec<C64> = coeffs.iter().map(|c| c / lead).collect();
    // Cauchy bound for the root radius.
    let radius = 1.0
        + monic[1..]
            .iter()
            .map(|c| c.norm())
            .fold(0.0_f64, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..deg)
        .map(|k| seed.powu(k as u32 + 1) * radius / seed.norm().powi(k as i32 + 1) * 0.7)
        .collect();
    for _ in 0..200 {
        let mut delta_max = 0.0_f64;
        for i in 0..deg {
            let (p, _) = poly_eval_with_deriv(&monic, roots[i]);
            let mut denom = ONE;
            for j in 0..deg {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = C64::new(1e-300, 0.0);
            }
            let step = p / denom;
            roots[i] -= step;
            delta_max = delta_max.max(step.norm());
        }
        if delta_max < 1e-15 * radius.max(1.0) {
            break;
        }
    }
    // Newton polish sharpens simple roots to machine precision.
    for r in roots.iter_mut() {
        for _ in 0..4 {
            let (p, dp) = poly_eval_with_deriv(&monic, *r);
            if dp.norm() > 1e-30 {
                *r -= p / dp;
            }
        }
    }
    roots
}

/// Eigenvalues of a small complex matrix as characteristic-polynomial roots.
pub fn eigenvalues(m: &DMatrix<C64>) -> Vec<C64> {
    poly_roots(&char_poly(m))
}

/// Right eigenvector for an approximate eigenvalue, by shifted inverse
/// iteration with a Rayleigh-quotient refinement of the eigenvalue.
pub fn right_eigenvector(m: &DMatrix<C64>, mu: C64) -> Result<(C64, DVector<C64>), LinalgError> {
    let n = m.nrows();
    let scale = m.norm().max(1.0);
    let mut shift = mu;
    // Deterministic, unlikely-to-be-orthogonal start vector.
    let mut v = DVector::<C64>::from_fn(n, |i, _| {
        C64::new(1.0 + 0.31 * i as f64, 0.17 - 0.23 * i as f64)
    });
    v /= C64::new(v.norm(), 0.0);
    let mut residual = f64::INFINITY;
    for it in 0..12 {
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[(i, i)] -= shift;
        }
        // Regularize exact singularity: nudge the shift off the eigenvalue.
        let lu = shifted.lu();
        let w = match lu.solve(&v) {
            Some(w) => w,
            None => {
                shift += C64::new(1e-12 * scale, 1e-12 * scale);
                continue;
            }
        };
        let wn = w.norm();
        if !wn.is_finite() || wn == 0.0 {
            shift += C64::new(1e-12 * scale, 0.0);
            continue;
        }
        v = w / C64::new(wn, 0.0);
        let mv = m * &v;
        let rq = v.dotc(&mv); // v^H M v for unit v
        residual = (&mv - &v * rq).norm();
        if residual < 1e-13 * scale {
            return Ok((rq, v));
        }
        if it >= 2 {
            shift = rq;
        }
    }
    if residual < 1e-9 * scale {
        let mv = m * &v;
        let rq = v.dotc(&mv);
        return Ok((rq, v));
    }
    Err(LinalgError::EigenNoConvergence { residual })
}

/// Left eigenvector l (row convention: l^H M = mu l^H) for an approximate
/// eigenvalue, as a right eigenvector of M^H at conj(mu).
pub fn left_eigenvector(m: &DMatrix<C64>, mu: C64) -> Result<DVector<C64>, LinalgError> {
    let (_, v) = right_eigenvector(&m.adjoint(), mu.conj())?;
    Ok(v)
}

/// Spectral splitting of a hyperbolic (no center subspace) small matrix into
/// the stable group Re mu < 0 and its complement.
#[derive(Debug, Clone)]
pub struct SpectralSplit {
    /// Stable eigenvalues, sorted by increasing real part.
    pub stable: Vec<C64>,
    /// Unstable eigenvalues, sorted by increasing real part.
    pub unstable: Vec<C64>,
    /// Orthonormal columns spanning the stable invariant subspace.
    pub stable_frame: DMatrix<C64>,
    /// Oblique spectral projector onto the stable subspace.
    pub stable_projector: DMatrix<C64>,
}

/// Splits the spectrum at the imaginary axis, requiring a real-part gap of at
/// least `gap_min` (consistent-splitting guard).
pub fn spectral_split(m: &DMatrix<C64>, gap_min: f64) -> Result<SpectralSplit, LinalgError> {
    let n = m.nrows();
    let mut eigs = eigenvalues(m);
    eigs.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
    for &mu in &eigs {
        if mu.re.abs() < gap_min {
            return Err(LinalgError::CenterSubspace {
                re_abs: mu.re.abs(),
                gap: gap_min,
            });
        }
    }
    let stable: Vec<C64> = eigs.iter().copied().filter(|mu| mu.re < 0.0).collect();
    let unstable: Vec<C64> = eigs.iter().copied().filter(|mu| mu.re > 0.0).collect();
    let k = stable.len();
    let mut right = DMatrix::<C64>::zeros(n, k);
    let mut left = DMatrix::<C64>::zeros(n, k);
    for (j, &mu) in stable.iter().enumerate() {
        let (_, v) = right_eigenvector(m, mu)?;
        let l = left_eigenvector(m, mu)?;
        right.set_column(j, &v);
        left.set_column(j, &l);
    }
    let frame = orthonormal_columns(&right)?;
    // P = R (L^H R)^{-1} L^H projects onto span(R) along the complement.
    let lhr = left.adjoint() * &right;
    let inv = lhr
        .lu()
        .try_inverse()
        .ok_or(LinalgError::Singular {
            context: "stable projector normalization",
        })?;
    let projector = &right * inv * left.adjoint();
    Ok(SpectralSplit {
        stable,
        unstable,
        stable_frame: frame,
        stable_projector: projector,
    })
}

/// Thin-QR orthonormalization of the columns; returns Q only.
pub fn orthonormal_columns(frame: &DMatrix<C64>) -> Result<DMatrix<C64>, LinalgError> {
    let (q, r) = frame.clone().qr().unpack();
    for j in 0..r.nrows().min(r.ncols()) {
        if r[(j, j)].norm() < 1e-300 {
            return Err(LinalgError::Singular {
                context: "frame orthonormalization",
            });
        }
    }
    Ok(q)
}

/// Thin-QR orthonormalization that also reports log det R, the complex
/// log-scale removed from the frame (principal branch).
pub fn orthonormalize_with_logdet(
    frame: &DMatrix<C64>,
) -> Result<(DMatrix<C64>, C64), LinalgError> {
    let (q, r) = frame.clone().qr().unpack();
    let mut logdet = ZERO;
    for j in 0..r.ncols().min(r.nrows()) {
        let d = r[(j, j)];
        if d.norm() < 1e-300 {
            return Err(LinalgError::Singular {
                context: "frame orthonormalization",
            });
        }
        logdet += C64::new(d.norm().ln(), d.arg());
    }
    Ok((q, logdet))
}

/// det via LU together with its natural log, split to avoid overflow:
/// returns (phase factor of modulus one, log modulus).
pub fn det_log(m: &DMatrix<C64>) -> (C64, f64) {
    let det = m.clone().lu().determinant();
    if det.norm() == 0.0 {
        return (ZERO, f64::NEG_INFINITY);
    }
    (det / C64::new(det.norm(), 0.0), det.norm().ln())
}

/// Shifts `angle` by multiples of 2π to land within π of `reference`.
pub fn unwrap_phase(reference: f64, angle: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut a = angle;
    while a - reference > std::f64::consts::PI {
        a -= tau;
    }
    while a - reference < -std::f64::consts::PI {
        a += tau;
    }
    a
}

/// Finite-difference weights on arbitrary nodes (Fornberg's algorithm).
///
/// Returns `w[k][j]`: the weight of `f(nodes[j])` in the approximation of the
/// k-th derivative at `x0`, for k = 0..=max_order.
pub fn fd_weights(x0: f64, nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    assert!(n > max_order, "need more nodes than derivative order");
    let mut w = vec![vec![0.0; n]; max_order + 1];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    w[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    w[k][i] = c1 * (k as f64 * w[k - 1][i - 1] - c5 * w[k][i - 1]) / c2;
                }
                w[0][i] = -c1 * c5 * w[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                w[k][j] = (c4 * w[k][j] - k as f64 * w[k - 1][j]) / c3;
            }
            w[0][j] = c4 * w[0][j] / c3;
        }
        c1 = c2;
    }
    w
}

/// Complex banded matrix in LAPACK-style band storage with `kl` subdiagonals
/// and `ku` superdiagonals, with partial pivoting LU. Used for the direct
/// resolvent oracle where the discretized operator is block tridiagonal-ish.
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    /// Row-major band storage with kl extra superdiagonals for pivot fill-in:
    /// entry (i, j) lives at band[i * width + (j - i + kl + ku)].
    band: Vec<C64>,
}

impl BandedMatrix {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandedMatrix {
            n,
            kl,
            ku,
            band: vec![ZERO; n * width],
        }
    }

    fn width(&self) -> usize {
        2 * self.kl + self.ku + 1
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.kl + self.ku);
        i * self.width() + (j + self.kl - i) + self.kl
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        let id = self.idx(i, j);
        self.band[id] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: C64) {
        let id = self.idx(i, j);
        self.band[id] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        if j + self.kl >= i && j <= i + self.kl + self.ku {
            self.band[self.idx(i, j)]
        } else {
            ZERO
        }
    }

    /// In-place LU with partial pivoting; returns a solver for repeated
    /// right-hand sides.
    pub fn factor(mut self) -> Result<BandedLu, LinalgError> {
        let n = self.n;
        let kl = self.kl;
        let ku = self.ku;
        let mut pivots = vec![0usize; n];
        for col in 0..n {
            let row_hi = (col + kl).min(n - 1);
            let mut piv = col;
            let mut piv_mag = self.get(col, col).norm();
            for r in col + 1..=row_hi {
                let mag = self.get(r, col).norm();
                if mag > piv_mag {
                    piv = r;
                    piv_mag = mag;
                }
            }
            if piv_mag == 0.0 {
                return Err(LinalgError::Singular {
                    context: "banded LU",
                });
            }
            pivots[col] = piv;
            if piv != col {
                let j_hi = (col + kl + ku).min(n - 1);
                for j in col..=j_hi {
                    let a = self.get(col, j);
                    let b = self.get(piv, j);
                    self.set(col, j, b);
                    self.set(piv, j, a);
                }
            }
            let diag = self.get(col, col);
            for r in col + 1..=row_hi {
                let factor = self.get(r, col) / diag;
                self.set(r, col, factor);
                let j_hi = (col + kl + ku).min(n - 1);
                for j in col + 1..=j_hi {
                    let delta = factor * self.get(col, j);
                    let cur = self.get(r, j);
                    self.set(r, j, cur - delta);
                }
            }
        }
        Ok(BandedLu {
            mat: self,
            pivots,
        })
    }
}

pub struct BandedLu {
    mat: BandedMatrix,
    pivots: Vec<usize>,
}

impl BandedLu {
    pub fn solve(&self, rhs: &mut [C64]) {
        let n = self.mat.n;
        let kl = self.mat.kl;
        let ku = self.mat.ku;
        for col in 0..n {
            let piv = self.pivots[col];
            if piv != col {
                rhs.swap(col, piv);
            }
            let row_hi = (col + kl).min(n - 1);
            for r in col + 1..=row_hi {
                let f = self.mat.get(r, col);
                let delta = f * rhs[col];
                rhs[r] -= delta;
            }
        }
        for row in (0..n).rev() {
            let j_hi = (row + kl + ku).min(n - 1);
            let mut acc = rhs[row];
            for j in row + 1..=j_hi {
                acc -= self.mat.get(row, j) * rhs[j];
            }
            rhs[row] = acc / self.mat.get(row, row);
        }
    }
}
