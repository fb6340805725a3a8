//! Isentropic Navier-Stokes in Lagrangian coordinates, written in a frame
//! moving with the (constant) mass transfer σ through the boundary:
//!
//!   v_t - σ v_x - u_x = 0
//!   u_t - σ u_x + p(v)_x = ((μ/v) u_x)_x,     p(v) = a0 v^{-γ},  γ ≥ 1,
//!
//! state U = (v, u) with specific volume v (hyperbolic) and velocity u
//! (parabolic). The hyperbolic characteristic speed is A_* = -σ exactly, so
//! σ < 0 is the inflow case and σ > 0 the outflow case; noncharacteristicity
//! additionally requires |σ| ≠ c_+ = sqrt(γ a0 v_+^{-γ-1}).

use super::{HpModel, ModelError};
use crate::BoundaryCase;
use nalgebra::{DMatrix, DVector};

/// Parameters of the gas model, as read from the run configuration.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct IsentropicParams {
    /// Adiabatic index γ ≥ 1.
    pub gamma: f64,
    /// Dynamic viscosity μ > 0.
    pub mu: f64,
    /// Pressure constant a0 > 0 in p(v) = a0 v^{-γ}.
    pub a0: f64,
    /// Frame mass transfer; A_* = -σ.
    pub sigma: f64,
    /// Endpoint specific volume v_+ > 0.
    pub v_plus: f64,
    /// Endpoint velocity u_+.
    pub u_plus: f64,
    /// Boundary specific volume v(0); the boundary velocity follows from the
    /// layer first integral u = u_+ - σ (v - v_+).
    pub v_boundary: f64,
}

impl Default for IsentropicParams {
    fn default() -> Self {
        // Shipped inflow layer: subsonic frame speed, moderate amplitude.
        IsentropicParams {
            gamma: 5.0 / 3.0,
            mu: 1.0,
            a0: 1.0,
            sigma: -1.0,
            v_plus: 1.0,
            u_plus: 0.0,
            v_boundary: 1.3,
        }
    }
}

impl IsentropicParams {
    /// Shipped outflow layer: supersonic frame speed, all characteristics
    /// leaving the domain.
    pub fn outflow() -> Self {
        IsentropicParams {
            sigma: 1.8,
            v_boundary: 0.8,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct IsentropicGas {
    params: IsentropicParams,
}

impl IsentropicGas {
    pub fn new(params: IsentropicParams) -> Result<Self, ModelError> {
        if params.gamma < 1.0 {
            return Err(ModelError::Structural(format!(
                "gamma = {} < 1",
                params.gamma
            )));
        }
        if params.mu <= 0.0 || params.a0 <= 0.0 || params.v_plus <= 0.0 {
            return Err(ModelError::Structural(
                "mu, a0 and v_plus must be positive".into(),
            ));
        }
        if params.sigma == 0.0 {
            return Err(ModelError::Structural(
                "sigma = 0 is the characteristic case".into(),
            ));
        }
        if params.v_boundary <= 0.0 {
            return Err(ModelError::DomainViolation(format!(
                "boundary volume {} not positive",
                params.v_boundary
            )));
        }
        Ok(IsentropicGas { params })
    }

    pub fn params(&self) -> &IsentropicParams {
        &self.params
    }

    pub fn pressure(&self, v: f64) -> f64 {
        self.params.a0 * v.powf(-self.params.gamma)
    }

    pub fn dpressure(&self, v: f64) -> f64 {
        -self.params.gamma * self.params.a0 * v.powf(-self.params.gamma - 1.0)
    }

    /// Lagrangian sound speed at the endpoint.
    pub fn sound_speed_plus(&self) -> f64 {
        (-self.dpressure(self.params.v_plus)).sqrt()
    }

    /// Boundary velocity consistent with the layer first integral.
    pub fn u_boundary(&self) -> f64 {
        self.params.u_plus - self.params.sigma * (self.params.v_boundary - self.params.v_plus)
    }
}

impl HpModel for IsentropicGas {
    fn state_dim(&self) -> usize {
        2
    }

    fn flux(&self, u: &DVector<f64>) -> Result<DVector<f64>, ModelError> {
        self.check_domain(u)?;
        let (v, vel) = (u[0], u[1]);
        let s = self.params.sigma;
        Ok(DVector::from_vec(vec![
            -s * v - vel,
            -s * vel + self.pressure(v),
        ]))
    }

    fn flux_jacobian(&self, u: &DVector<f64>) -> Result<DMatrix<f64>, ModelError> {
        self.check_domain(u)?;
        let s = self.params.sigma;
        Ok(DMatrix::from_row_slice(
            2,
            2,
            &[-s, -1.0, self.dpressure(u[0]), -s],
        ))
    }

    fn viscosity(&self, u: &DVector<f64>) -> Result<DMatrix<f64>, ModelError> {
        self.check_domain(u)?;
        Ok(DMatrix::from_row_slice(
            2,
            2,
            &[0.0, 0.0, 0.0, self.params.mu / u[0]],
        ))
    }

    fn viscosity_gradient_contraction(
        &self,
        u: &DVector<f64>,
        w: &DVector<f64>,
    ) -> Result<DMatrix<f64>, ModelError> {
        self.check_domain(u)?;
        // Only B_22 = μ/v varies, and only in v.
        let mut c = DMatrix::<f64>::zeros(2, 2);
        c[(1, 0)] = -self.params.mu / (u[0] * u[0]) * w[1];
        Ok(c)
    }

    fn check_domain(&self, u: &DVector<f64>) -> Result<(), ModelError> {
        if u.len() != 2 {
            return Err(ModelError::DomainViolation(format!(
                "state dimension {} != 2",
                u.len()
            )));
        }
        if !(u[0].is_finite() && u[1].is_finite()) {
            return Err(ModelError::DomainViolation("non-finite state".into()));
        }
        if u[0] <= 1e-10 {
            return Err(ModelError::DomainViolation(format!(
                "specific volume {} not positive",
                u[0]
            )));
        }
        Ok(())
    }

    fn u_plus(&self) -> DVector<f64> {
        DVector::from_vec(vec![self.params.v_plus, self.params.u_plus])
    }

    fn boundary_case(&self) -> BoundaryCase {
        if self.params.sigma < 0.0 {
            BoundaryCase::Inflow
        } else {
            BoundaryCase::Outflow
        }
    }

    fn boundary_target(&self) -> DVector<f64> {
        DVector::from_vec(vec![self.params.v_boundary, self.u_boundary()])
    }

    fn wcoord_jacobian(&self, _u: &DVector<f64>) -> DMatrix<f64> {
        // W(U) = (v, u) already has the triangular form.
        DMatrix::identity(2, 2)
    }

    fn name(&self) -> &str {
        "isentropic-gas"
    }
}
