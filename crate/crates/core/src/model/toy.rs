//! Small test models: linear constant-coefficient systems, a Burgers flux
//! embedded as the parabolic component of a decoupled two-field system, and a
//! fully closure-driven model for constructed counterexamples.

use super::{HpModel, ModelError};
use crate::BoundaryCase;
use nalgebra::{DMatrix, DVector};

/// Linear flux F(U) = A U with constant viscosity B (first row zero).
#[derive(Debug, Clone)]
pub struct LinearToy {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub u_plus: DVector<f64>,
    pub case: BoundaryCase,
    pub target: DVector<f64>,
}

impl LinearToy {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, case: BoundaryCase) -> Self {
        let n = a.nrows();
        LinearToy {
            a,
            b,
            u_plus: DVector::zeros(n),
            case,
            target: DVector::zeros(n),
        }
    }
}

impl HpModel for LinearToy {
    fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    fn flux(&self, u: &DVector<f64>) -> Result<DVector<f64>, ModelError> {
        Ok(&self.a * u)
    }

    fn flux_jacobian(&self, _u: &DVector<f64>) -> Result<DMatrix<f64>, ModelError> {
        Ok(self.a.clone())
    }

    fn viscosity(&self, _u: &DVector<f64>) -> Result<DMatrix<f64>, ModelError> {
        Ok(self.b.clone())
    }

    fn viscosity_gradient_contraction(
        &self,
        _u: &DVector<f64>,
        _w: &DVector<f64>,
    ) -> Result<DMatrix<f64>, ModelError> {
        Ok(DMatrix::zeros(self.state_dim(), self.state_dim()))
    }

    fn check_domain(&self, u: &DVector<f64>) -> Result<(), ModelError> {
        if u.iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(ModelError::DomainViolation("non-finite state".into()))
        }
    }

    fn u_plus(&self) -> DVector<f64> {
        self.u_plus.clone()
    }

    fn boundary_case(&self) -> BoundaryCase {
        self.case
    }

    fn boundary_target(&self) -> DVector<f64> {
        self.target.clone()
    }

    fn wcoord_jacobian(&self, _u: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::identity(self.state_dim(), self.state_dim())
    }

    fn name(&self) -> &str {
        "linear-toy"
    }
}

/// Viscous Burgers embedded as the parabolic component next to a passive
/// transport field: F(w, u) = (a_w w, u²/2), B = diag(0, 1). The layer
/// equation for u integrates to u' = (u² - u_+²)/2, whose standing shock
/// is u(x) = -u_+ tanh(u_+ x / 2) for u_+ < 0 < -u_+ ... i.e. the classical
/// tanh profile.
#[derive(Debug, Clone)]
pub struct BurgersEmbed {
    /// Speed of the passive hyperbolic field; its sign selects the case.
    pub a_w: f64,
    pub u_plus_val: f64,
    pub w_plus: f64,
    pub u_boundary: f64,
}

impl BurgersEmbed {
    pub fn new(a_w: f64, u_plus_val: f64, u_boundary: f64) -> Self {
        BurgersEmbed {
            a_w,
            u_plus_val,
            w_plus: 0.0,
            u_boundary,
        }
    }
}

impl HpModel for BurgersEmbed {
    fn state_dim(&self) -> usize {
        2
    }

    fn flux(&self, u: &DVector<f64>) -> Result<DVector<f64>, ModelError> {
        Ok(DVector::from_vec(vec![
            self.a_w * u[0],
            0.5 * u[1] * u[1],
        ]))
    }

    fn flux_jacobian(&self, u: &DVector<f64>) -> Result<DMatrix<f64>, ModelError> {
        Ok(DMatrix::from_row_slice(2, 2, &[self.a_w, 0.0, 0.0, u[1]]))
    }

    fn viscosity(&self, _u: &DVector<f64>) -> Result<DMatrix<f64>, ModelError> {
        Ok(DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]))
    }

    fn viscosity_gradient_contraction(
        &self,
        _u: &DVector<f64>,
        _w: &DVector<f64>,
    ) -> Result<DMatrix<f64>, ModelError> {
        Ok(DMatrix::zeros(2, 2))
    }

    fn check_domain(&self, u: &DVector<f64>) -> Result<(), ModelError> {
        if u.iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(ModelError::DomainViolation("non-finite state".into()))
        }
    }

    fn u_plus(&self) -> DVector<f64> {
        DVector::from_vec(vec![self.w_plus, self.u_plus_val])
    }

    fn boundary_case(&self) -> BoundaryCase {
        if self.a_w > 0.0 {
            BoundaryCase::Inflow
        } else {
            BoundaryCase::Outflow
        }
    }

    fn boundary_target(&self) -> DVector<f64> {
        DVector::from_vec(vec![self.w_plus, self.u_boundary])
    }

    fn wcoord_jacobian(&self, _u: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::identity(2, 2)
    }

    fn name(&self) -> &str {
        "burgers-embed"
    }
}

/// Closure-driven model for synthetic counterexamples in tests.
pub struct FnModel {
    pub n: usize,
    pub flux_fn: Box<dyn Fn(&DVector<f64>) -> DVector<f64> + Send + Sync>,
    pub jac_fn: Box<dyn Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync>,
    pub visc_fn: Box<dyn Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync>,
    pub u_plus: DVector<f64>,
    pub case: BoundaryCase,
    pub target: DVector<f64>,
}

impl HpModel for FnModel {
    fn state_dim(&self) -> usize {
        self.n
    }

    fn flux(&self, u: &DVector<f64>) -> Result<DVector<f64>, ModelError> {
        Ok((self.flux_fn)(u))
    }

    fn flux_jacobian(&self, u: &DVector<f64>) -> Result<DMatrix<f64>, ModelError> {
        Ok((self.jac_fn)(u))
    }

    fn viscosity(&self, u: &DVector<f64>) -> Result<DMatrix<f64>, ModelError> {
        Ok((self.visc_fn)(u))
    }

    fn check_domain(&self, u: &DVector<f64>) -> Result<(), ModelError> {
        if u.iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(ModelError::DomainViolation("non-finite state".into()))
        }
    }

    fn u_plus(&self) -> DVector<f64> {
        self.u_plus.clone()
    }

    fn boundary_case(&self) -> BoundaryCase {
        self.case
    }

    fn boundary_target(&self) -> DVector<f64> {
        self.target.clone()
    }

    fn wcoord_jacobian(&self, _u: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::identity(self.n, self.n)
    }

    fn name(&self) -> &str {
        "fn-model"
    }
}
