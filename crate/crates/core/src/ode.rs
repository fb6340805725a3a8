//! Fixed-step Runge-Kutta drivers over flat state slices, in real and complex
//! variants, plus an implicit-midpoint integrator used as an independent
//! cross-check route for characteristic paths and layer-profile solutions.

use num_complex::Complex64 as C64;

/// Classic RK4 over [x0, x1] with `steps` uniform steps, complex state.
/// The derivative callback writes dy into its third argument.
pub fn rk4_complex<F>(f: F, y: &mut [C64], x0: f64, x1: f64, steps: usize)
where
    F: Fn(f64, &[C64], &mut [C64]),
{
    let n = y.len();
    let h = (x1 - x0) / steps as f64;
    let mut k1 = vec![C64::default(); n];
    let mut k2 = vec![C64::default(); n];
    let mut k3 = vec![C64::default(); n];
    let mut k4 = vec![C64::default(); n];
    let mut tmp = vec![C64::default(); n];
    let hc = C64::new(h, 0.0);
    let half = C64::new(0.5 * h, 0.0);
    for step in 0..steps {
        let x = x0 + h * step as f64;
        f(x, y, &mut k1);
        for i in 0..n {
            tmp[i] = y[i] + half * k1[i];
        }
        f(x + 0.5 * h, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + half * k2[i];
        }
        f(x + 0.5 * h, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + hc * k3[i];
        }
        f(x + h, &tmp, &mut k4);
        let sixth = C64::new(h / 6.0, 0.0);
        for i in 0..n {
            y[i] += sixth * (k1[i] + (k2[i] + k3[i]) * C64::new(2.0, 0.0) + k4[i]);
        }
    }
}

/// Classic RK4, real state.
pub fn rk4_real<F>(f: F, y: &mut [f64], x0: f64, x1: f64, steps: usize)
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let n = y.len();
    let h = (x1 - x0) / steps as f64;
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    for step in 0..steps {
        let x = x0 + h * step as f64;
        f(x, y, &mut k1);
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        f(x + 0.5 * h, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        f(x + 0.5 * h, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + h * k3[i];
        }
        f(x + h, &tmp, &mut k4);
        for i in 0..n {
            y[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        }
    }
}

/// Implicit midpoint rule (A-stable, second order) with fixed-point inner
/// iterations. Serves as the second, stiff-friendly integration route when
/// two independent integrators must agree.
pub fn implicit_midpoint_real<F>(f: F, y: &mut [f64], x0: f64, x1: f64, steps: usize)
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let n = y.len();
    let h = (x1 - x0) / steps as f64;
    let mut stage = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for step in 0..steps {
        let x = x0 + h * step as f64;
        let xm = x + 0.5 * h;
        stage.copy_from_slice(y);
        // Fixed-point iteration on the midpoint state; converges for
        // h * Lipschitz < 1 and we keep steps well inside that.
        for _ in 0..30 {
            f(xm, &stage, &mut rhs);
            let mut delta = 0.0_f64;
            for i in 0..n {
                let next = y[i] + 0.5 * h * rhs[i];
                delta = delta.max((next - stage[i]).abs());
                stage[i] = next;
            }
            if delta < 1e-15 {
                break;
            }
        }
        f(xm, &stage, &mut rhs);
        for i in 0..n {
            y[i] += h * rhs[i];
        }
    }
}
