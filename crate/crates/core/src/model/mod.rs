//! The hyperbolic-parabolic system class
//!
//!   U_t + F(U)_x = (B(U) U_x)_x,   U = (u, v) ∈ R × R^{n-1},
//!
//! with block-degenerate viscosity B = [[0, 0], [b1, b2]], σ(b2) ≥ θ > 0, and
//! a triangular coordinate map W(U) whose first component depends on the
//! hyperbolic variable only. This module owns the endpoint characteristics
//! (speeds a_j^+, eigenvectors, diffusion rates β_j^+), the reduced quantities
//! (A_*, D_*, η_* = -D_*, L_*, R_*), and the numerical audit of the
//! structural assumptions.

mod isentropic;
mod toy;

pub use isentropic::{IsentropicGas, IsentropicParams};
pub use toy::{BurgersEmbed, FnModel, LinearToy};

use crate::BoundaryCase;
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("state outside physical domain: {0}")]
    DomainViolation(String),
    #[error("structural failure: {0}")]
    Structural(String),
    #[error("hyperbolicity (H2) violation at endpoint: {0}")]
    H2Violation(String),
}

/// A conservation-law model of the class above. Implementations provide the
/// flux, the degenerate viscosity, and endpoint/boundary data; everything
/// else (Jacobians of B, reduced quantities, audits) is derived here.
pub trait HpModel: Send + Sync {
    /// State dimension n (hyperbolic scalar plus n-1 parabolic components).
    fn state_dim(&self) -> usize;

    fn flux(&self, u: &DVector<f64>) -> Result<DVector<f64>, ModelError>;

    /// Analytic Jacobian dF(U); must match central finite differences.
    fn flux_jacobian(&self, u: &DVector<f64>) -> Result<DMatrix<f64>, ModelError>;

    /// Full n×n viscosity matrix; the first block row must vanish.
    fn viscosity(&self, u: &DVector<f64>) -> Result<DMatrix<f64>, ModelError>;

    /// Rejects states outside the physical domain (e.g. nonpositive volume).
    fn check_domain(&self, u: &DVector<f64>) -> Result<(), ModelError>;

    fn u_plus(&self) -> DVector<f64>;

    fn boundary_case(&self) -> BoundaryCase;

    /// Full-state boundary target at x = 0. The outflow case only constrains
    /// its parabolic trace (b1 b2) U(0); the hyperbolic component is then a
    /// consequence of the layer connection.
    fn boundary_target(&self) -> DVector<f64>;

    /// Jacobian of the triangular coordinate change W(U); constant and
    /// invertible for the shipped models.
    fn wcoord_jacobian(&self, u: &DVector<f64>) -> DMatrix<f64>;

    /// Contraction C_{ij} = Σ_k (∂B_{ik}/∂U_j) w_k of the viscosity gradient
    /// with a direction w; enters the linearized convection matrix. The
    /// default is a centered finite difference of B in each U-direction.
    fn viscosity_gradient_contraction(
        &self,
        u: &DVector<f64>,
        w: &DVector<f64>,
    ) -> Result<DMatrix<f64>, ModelError> {
        let n = self.state_dim();
        let mut c = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            let scale = 1e-6 * (1.0 + u[j].abs());
            let mut up = u.clone();
            let mut dn = u.clone();
            up[j] += scale;
            dn[j] -= scale;
            let diff = (self.viscosity(&up)? - self.viscosity(&dn)?) / (2.0 * scale);
            for i in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += diff[(i, k)] * w[k];
                }
                c[(i, j)] = acc;
            }
        }
        Ok(c)
    }

    fn name(&self) -> &str;
}

/// Parabolic sub-blocks b1 (r×1) and b2 (r×r) of the viscosity at a state.
pub fn viscosity_blocks(
    model: &dyn HpModel,
    u: &DVector<f64>,
) -> Result<(DMatrix<f64>, DMatrix<f64>), ModelError> {
    let b = model.viscosity(u)?;
    let n = model.state_dim();
    let r = n - 1;
    for j in 0..n {
        if b[(0, j)] != 0.0 {
            return Err(ModelError::Structural(format!(
                "viscosity first row not identically zero: B[0][{j}] = {}",
                b[(0, j)]
            )));
        }
    }
    let b1 = b.view((1, 0), (r, 1)).into_owned();
    let b2 = b.view((1, 1), (r, r)).into_owned();
    Ok((b1, b2))
}

/// Flux evaluation guarded by the domain check.
pub fn eval_flux(model: &dyn HpModel, u: &DVector<f64>) -> Result<DVector<f64>, ModelError> {
    model.check_domain(u)?;
    model.flux(u)
}

/// Analytic flux Jacobian dF(U), guarded by the domain check.
pub fn jacobian_a(model: &dyn HpModel, u: &DVector<f64>) -> Result<DMatrix<f64>, ModelError> {
    model.check_domain(u)?;
    model.flux_jacobian(u)
}

/// Linearized convection matrix about a profile point:
/// Ā(U, U_x) = dF(U) - C(U, U_x) with C the viscosity-gradient contraction,
/// so that the linearized equation reads W_t = -(Ā W)_x + (B̄ W_x)_x.
pub fn linearized_convection(
    model: &dyn HpModel,
    u: &DVector<f64>,
    ux: &DVector<f64>,
) -> Result<DMatrix<f64>, ModelError> {
    let df = model.flux_jacobian(u)?;
    let c = model.viscosity_gradient_contraction(u, ux)?;
    Ok(df - c)
}

/// Characteristic data at the endpoint state U_+.
#[derive(Debug, Clone)]
pub struct EndpointData {
    /// Sorted eigenvalues a_1^+ < ... < a_n^+ of dF(U_+).
    pub a_plus: Vec<f64>,
    /// Right eigenvectors as columns, ordered to match `a_plus`.
    pub r_plus: DMatrix<f64>,
    /// Left eigenvectors as rows, biorthonormal: l_j r_k = δ_jk.
    pub l_plus: DMatrix<f64>,
    /// Scalar diffusion rates β_j^+ = (l_j B r_j)(U_+).
    pub beta_plus: Vec<f64>,
}

/// Eigen-structure of the limiting convection matrix. Fails with an (H2)
/// report when eigenvalues are complex, repeated, or zero.
pub fn endpoint_characteristics(model: &dyn HpModel) -> Result<EndpointData, ModelError> {
    let up = model.u_plus();
    let a = model.flux_jacobian(&up)?;
    let b = model.viscosity(&up)?;
    let n = model.state_dim();
    let eigs = a.complex_eigenvalues();
    let scale = a.norm().max(1.0);
    let mut real_eigs = Vec::with_capacity(n);
    for e in eigs.iter() {
        if e.im.abs() > 1e-9 * scale {
            return Err(ModelError::H2Violation(format!(
                "complex eigenvalue {} + {}i",
                e.re, e.im
            )));
        }
        real_eigs.push(e.re);
    }
    real_eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    for w in real_eigs.windows(2) {
        if (w[1] - w[0]).abs() < 1e-9 * scale {
            return Err(ModelError::H2Violation(format!(
                "repeated eigenvalue near {}",
                w[0]
            )));
        }
    }
    for &e in &real_eigs {
        if e.abs() < 1e-12 * scale {
            return Err(ModelError::H2Violation("zero eigenvalue".into()));
        }
    }
    // Null-space eigenvectors via SVD of the shifted matrix.
    let mut r_mat = DMatrix::<f64>::zeros(n, n);
    let mut l_mat = DMatrix::<f64>::zeros(n, n);
    for (j, &aj) in real_eigs.iter().enumerate() {
        let shifted = &a - DMatrix::<f64>::identity(n, n) * aj;
        let rv = smallest_singular_vector(&shifted, false)?;
        let lv = smallest_singular_vector(&shifted, true)?;
        r_mat.set_column(j, &rv);
        for k in 0..n {
            l_mat[(j, k)] = lv[k];
        }
    }
    // Rescale rows of L for biorthonormality l_j r_j = 1.
    for j in 0..n {
        let dot: f64 = (0..n).map(|k| l_mat[(j, k)] * r_mat[(k, j)]).sum();
        if dot.abs() < 1e-14 {
            return Err(ModelError::Structural(
                "degenerate left/right eigenvector pairing".into(),
            ));
        }
        for k in 0..n {
            l_mat[(j, k)] /= dot;
        }
    }
    let beta = (0..n)
        .map(|j| {
            let r_j = r_mat.column(j);
            let l_j = l_mat.row(j);
            (l_j * &b * r_j)[(0, 0)]
        })
        .collect();
    Ok(EndpointData {
        a_plus: real_eigs,
        r_plus: r_mat,
        l_plus: l_mat,
        beta_plus: beta,
    })
}

fn smallest_singular_vector(
    m: &DMatrix<f64>,
    left: bool,
) -> Result<DVector<f64>, ModelError> {
    let svd = m.clone().svd(true, true);
    let idx = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .ok_or_else(|| ModelError::Structural("empty SVD".into()))?;
    let v = if left {
        svd.u
            .as_ref()
            .ok_or_else(|| ModelError::Structural("SVD missing U".into()))?
            .column(idx)
            .into_owned()
    } else {
        svd.v_t
            .as_ref()
            .ok_or_else(|| ModelError::Structural("SVD missing V^T".into()))?
            .row(idx)
            .transpose()
    };
    Ok(v)
}

/// Reduced (Chapman-Enskog style) quantities of the hyperbolic part at a
/// state: effective speed A_*, local dissipation η_* with η_* = -D_*, and the
/// reduced propagation modes L_*, R_*.
#[derive(Debug, Clone)]
pub struct ReducedData {
    pub a_star: f64,
    pub d_star: f64,
    pub eta_star: f64,
    pub l_star: DVector<f64>,
    pub r_star: DVector<f64>,
}

/// Evaluates the reduced quantities. `ux` supplies the profile x-derivative
/// for the ∂_x(b2^{-1} b1) term; `None` treats the state as constant in x,
/// for which that term vanishes exactly.
pub fn reduced_quantities(
    model: &dyn HpModel,
    u: &DVector<f64>,
    ux: Option<&DVector<f64>>,
) -> Result<ReducedData, ModelError> {
    let n = model.state_dim();
    let r = n - 1;
    let a = model.flux_jacobian(u)?;
    let (b1, b2) = viscosity_blocks(model, u)?;
    let b2_lu = b2.clone().lu();
    let b2inv_b1 = b2_lu
        .solve(&b1)
        .ok_or_else(|| ModelError::Structural("singular b2 block".into()))?;

    let a11 = a[(0, 0)];
    let a12 = a.view((0, 1), (1, r)).into_owned();
    let a21 = a.view((1, 0), (r, 1)).into_owned();
    let a22 = a.view((1, 1), (r, r)).into_owned();

    let a_star = a11 - (&a12 * &b2inv_b1)[(0, 0)];

    // d/dx (b2^{-1} b1) along the profile direction, by fourth-order centered
    // differences of s ↦ (b2^{-1} b1)(U + s U_x).
    let dx_b2inv_b1 = match ux {
        None => DMatrix::<f64>::zeros(r, 1),
        Some(ux) => {
            let eval = |s: f64| -> Result<DMatrix<f64>, ModelError> {
                let state = u + ux * s;
                let (b1s, b2s) = viscosity_blocks(model, &state)?;
                b2s.lu()
                    .solve(&b1s)
                    .ok_or_else(|| ModelError::Structural("singular b2 near state".into()))
            };
            let h = 1e-3 / (1.0 + ux.norm());
            let m2 = eval(-2.0 * h)?;
            let m1 = eval(-h)?;
            let p1 = eval(h)?;
            let p2 = eval(2.0 * h)?;
            (m2 - m1 * 8.0 + p1 * 8.0 - p2) / (12.0 * h)
        }
    };

    // Bracket of the dissipation formula:
    //   A21 - A22 b2^{-1} b1 + b2^{-1} b1 A_* + b2 ∂x(b2^{-1} b1),
    // contracted with A12 b2^{-1} from the left. The sign convention is fixed
    // so that η_* is the damping rate of the hyperbolic mode of the
    // eigenvalue system (positive for dissipative systems).
    let bracket = &a21 - &a22 * &b2inv_b1 + &b2inv_b1 * a_star + &b2 * &dx_b2inv_b1;
    let a12_b2inv = b2_lu
        .solve(&a12.transpose())
        .ok_or_else(|| ModelError::Structural("singular b2 block".into()))?
        .transpose();
    let eta_star = (&a12_b2inv * &bracket)[(0, 0)];
    let d_star = -eta_star;

    let mut l_star = DVector::<f64>::zeros(n);
    l_star[0] = 1.0;
    let mut r_star = DVector::<f64>::zeros(n);
    r_star[0] = 1.0;
    for i in 0..r {
        r_star[i + 1] = -b2inv_b1[(i, 0)];
    }

    Ok(ReducedData {
        a_star,
        d_star,
        eta_star,
        l_star,
        r_star,
    })
}

/// One audited assumption with its witness data.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AuditCheck {
    pub name: String,
    pub passed: bool,
    pub witness: String,
}

/// Outcome of the numerical assumption audit. Failures are entries, never
/// panics: a failed audit is a legitimate result for a candidate model.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AuditReport {
    pub checks: Vec<AuditCheck>,
    pub all_passed: bool,
}

impl AuditReport {
    pub fn check(&self, name: &str) -> Option<&AuditCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Audits (H1), (H2), the parabolic bound σ(b2) ≥ θ > 0, and the
/// dissipativity consequences η_*^+ > 0, β_j^+ > 0 along a sampled profile.
///
/// `states` are samples (U, U_x) along the profile, boundary first.
pub fn audit_assumptions(
    model: &dyn HpModel,
    states: &[(DVector<f64>, DVector<f64>)],
) -> AuditReport {
    let mut checks = Vec::new();
    let case = model.boundary_case();

    // (H1): A_* strictly one-signed along the profile, matching the declared case.
    let mut a_star_min = f64::INFINITY;
    let mut a_star_max = f64::NEG_INFINITY;
    let mut reduced_err: Option<String> = None;
    for (u, ux) in states {
        match reduced_quantities(model, u, Some(ux)) {
            Ok(red) => {
                a_star_min = a_star_min.min(red.a_star);
                a_star_max = a_star_max.max(red.a_star);
            }
            Err(e) => reduced_err = Some(e.to_string()),
        }
    }
    let h1_pass = reduced_err.is_none()
        && match case {
            BoundaryCase::Inflow => a_star_min > 1e-10,
            BoundaryCase::Outflow => a_star_max < -1e-10,
        };
    checks.push(AuditCheck {
        name: "H1-noncharacteristic".into(),
        passed: h1_pass,
        witness: match &reduced_err {
            Some(e) => format!("reduced quantities failed: {e}"),
            None => format!(
                "{case}: A_* in [{a_star_min:.6e}, {a_star_max:.6e}]"
            ),
        },
    });

    // σ(b2) ≥ θ > 0 along the profile (real parts of the spectrum).
    let mut b2_min = f64::INFINITY;
    let mut b2_err: Option<String> = None;
    for (u, _) in states {
        match viscosity_blocks(model, u) {
            Ok((_, b2)) => {
                for e in b2.complex_eigenvalues().iter() {
                    b2_min = b2_min.min(e.re);
                }
            }
            Err(e) => b2_err = Some(e.to_string()),
        }
    }
    checks.push(AuditCheck {
        name: "A1-parabolic-block".into(),
        passed: b2_err.is_none() && b2_min > 1e-10,
        witness: match &b2_err {
            Some(e) => e.clone(),
            None => format!("min Re σ(b2) = {b2_min:.6e}"),
        },
    });

    // (H2) and dissipativity at the endpoint.
    match endpoint_characteristics(model) {
        Ok(ep) => {
            checks.push(AuditCheck {
                name: "H2-endpoint-hyperbolicity".into(),
                passed: true,
                witness: format!("a^+ = {:?}", ep.a_plus),
            });
            let beta_min = ep.beta_plus.iter().cloned().fold(f64::INFINITY, f64::min);
            checks.push(AuditCheck {
                name: "dissipativity-beta".into(),
                passed: beta_min > 1e-10,
                witness: format!("min β_j^+ = {beta_min:.6e}"),
            });
        }
        Err(e) => {
            checks.push(AuditCheck {
                name: "H2-endpoint-hyperbolicity".into(),
                passed: false,
                witness: e.to_string(),
            });
            checks.push(AuditCheck {
                name: "dissipativity-beta".into(),
                passed: false,
                witness: "skipped: endpoint characteristics unavailable".into(),
            });
        }
    }

    let up = model.u_plus();
    let zero = DVector::<f64>::zeros(model.state_dim());
    match reduced_quantities(model, &up, Some(&zero)) {
        Ok(red) => checks.push(AuditCheck {
            name: "dissipativity-eta".into(),
            passed: red.eta_star > 1e-10,
            witness: format!("η_*^+ = {:.6e}", red.eta_star),
        }),
        Err(e) => checks.push(AuditCheck {
            name: "dissipativity-eta".into(),
            passed: false,
            witness: e.to_string(),
        }),
    }

    let all_passed = checks.iter().all(|c| c.passed);
    AuditReport { checks, all_passed }
}

#[cfg(test)]
mod tests;
