//! Multiplicative (star) derivatives of complex functions and the
//! Cauchy-Riemann conditions in star form.
//!
//! The first-order *derivative of a nowhere-vanishing differentiable `f` is
//! `f*(z) = exp(f'(z)/f(z))`; the n-th order one is
//! `f*(n)(z) = exp([f'/f]^(n-1)(z))`. Both are computed from symbolic
//! derivatives of the expression tree. Zero is excluded from the domain:
//! any point where `|f|` falls below [`EPS_ZERO`] is rejected, mirroring the
//! role the punctured plane plays for multiplicative rates of change.

use num_complex::Complex64;
use thiserror::Error;

use crate::expr::{differentiate, simplify, Binding, DiffError, EvalError, Expr};

/// Values with modulus at or below this bound count as zero of `f`.
pub const EPS_ZERO: f64 = 1e-12;

/// Default absolute tolerance on Cauchy-Riemann residuals.
pub const DEFAULT_CR_TOL: f64 = 1e-6;

/// Default central-difference step at `z`, balancing truncation against
/// cancellation in double precision.
pub fn default_step(z: Complex64) -> f64 {
    1e-5 * z.norm().max(1.0)
}

/// Failure modes of the star-derivative operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StarError {
    #[error("*derivative undefined at zero of f (|f({at})| <= {EPS_ZERO})")]
    ZeroOfFunction { at: Complex64 },
    #[error(transparent)]
    NonHolomorphic(#[from] DiffError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("f vanishes on the finite-difference stencil near {at}")]
    StencilZero { at: Complex64 },
    #[error("f(t+h)/f(t) left the right half plane at h = {h}; retry with a smaller h")]
    BranchCrossing { h: f64 },
    #[error("derivative order must be at least 1")]
    BadOrder,
    #[error("step list must be non-empty with distinct positive entries")]
    BadSteps,
}

/// First-order *derivative together with the quantities it is built from.
#[derive(Debug, Clone, PartialEq)]
pub struct StarDerivativeResult {
    /// `exp(f'(z)/f(z))`.
    pub value: Complex64,
    /// `f(z)`, guaranteed nonzero.
    pub f_value: Complex64,
    /// `f'(z)/f(z)`.
    pub logderiv: Complex64,
}

/// Computes `f*(z) = exp(f'(z)/f(z))`.
///
/// Parameters must already be bound into the tree (see
/// [`Expr::bind_params`]). Errors if the expression contains a
/// non-holomorphic node or if `f(z)` is (numerically) zero.
pub fn star_derivative(f: &Expr, z: Complex64) -> Result<StarDerivativeResult, StarError> {
    let f_value = f.eval(&Binding::at(z))?;
    if f_value.norm() <= EPS_ZERO {
        return Err(StarError::ZeroOfFunction { at: z });
    }
    let derivative = differentiate(f)?;
    let logderiv = derivative.eval(&Binding::at(z))? / f_value;
    Ok(StarDerivativeResult {
        value: logderiv.exp(),
        f_value,
        logderiv,
    })
}

/// Builds the *derivative symbolically as the expression `exp(f'/f)`,
/// simplified. The result can be evaluated anywhere `f` is nonzero, or fed
/// back into the integral machinery.
pub fn star_derivative_expr(f: &Expr) -> Result<Expr, DiffError> {
    Ok(simplify(&Expr::exp(Expr::div(differentiate(f)?, f.clone()))))
}

/// Computes the n-th order *derivative `exp([f'/f]^(n-1)(z))`, `n >= 1`.
///
/// The inner derivatives are taken symbolically; nested finite differences
/// would amplify rounding error order by order.
pub fn star_derivative_n(f: &Expr, z: Complex64, n: u32) -> Result<Complex64, StarError> {
    if n == 0 {
        return Err(StarError::BadOrder);
    }
    let f_value = f.eval(&Binding::at(z))?;
    if f_value.norm() <= EPS_ZERO {
        return Err(StarError::ZeroOfFunction { at: z });
    }
    let mut g = simplify(&Expr::div(differentiate(f)?, f.clone()));
    for _ in 1..n {
        g = simplify(&differentiate(&g)?);
    }
    Ok(g.eval(&Binding::at(z))?.exp())
}

/// Evaluates the defining limit `(f(t+h)/f(t))^(1/h)` of the *derivative for
/// a function of a real argument, at each step in `h_list`, reading the
/// power through the principal logarithm.
///
/// Returns the per-step approximations and their Richardson extrapolation
/// to `h = 0`, which converges to [`star_derivative`] at `t`. Steps for
/// which the ratio leaves the right half plane are rejected: there the
/// principal reading of the limit breaks down and a smaller step is needed.
pub fn star_limit_oracle(
    f: &Expr,
    t: f64,
    h_list: &[f64],
) -> Result<(Vec<Complex64>, Complex64), StarError> {
    if h_list.is_empty() || h_list.iter().any(|h| *h <= 0.0) {
        return Err(StarError::BadSteps);
    }
    let ft = f.eval(&Binding::at(Complex64::new(t, 0.0)))?;
    if ft.norm() <= EPS_ZERO {
        return Err(StarError::ZeroOfFunction {
            at: Complex64::new(t, 0.0),
        });
    }
    let mut approximations = Vec::with_capacity(h_list.len());
    for &h in h_list {
        let fth = f.eval(&Binding::at(Complex64::new(t + h, 0.0)))?;
        if fth.norm() <= EPS_ZERO {
            return Err(StarError::ZeroOfFunction {
                at: Complex64::new(t + h, 0.0),
            });
        }
        let ratio = fth / ft;
        if ratio.arg().abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(StarError::BranchCrossing { h });
        }
        let principal_log = Complex64::new(ratio.norm().ln(), ratio.arg());
        approximations.push((principal_log / h).exp());
    }
    let extrapolated = neville_at_zero(h_list, &approximations)?;
    Ok((approximations, extrapolated))
}

/// Polynomial extrapolation of `(x_i, y_i)` to `x = 0` (Neville's scheme).
fn neville_at_zero(xs: &[f64], ys: &[Complex64]) -> Result<Complex64, StarError> {
    let n = ys.len();
    let mut p = ys.to_vec();
    for level in 1..n {
        for i in 0..n - level {
            let xi = xs[i];
            let xj = xs[i + level];
            if xi == xj {
                return Err(StarError::BadSteps);
            }
            p[i] = (p[i + 1] * xi - p[i] * xj) / (xi - xj);
        }
    }
    Ok(p[0])
}

/// Residuals of the Cauchy-Riemann conditions at a point, in Cartesian form.
///
/// `residual_modulus` and `residual_argument` are the star-form residuals
/// `|[ln R]'_x - T'_y|` and `|[ln R]'_y + T'_x|` for `R = |f|` and a local
/// continuous branch `T` of `arg f`; `residual_classic` is the larger of the
/// textbook residuals `|u'_x - v'_y|`, `|u'_y + v'_x|`.
#[derive(Debug, Clone, PartialEq)]
pub struct CRReport {
    pub point: Complex64,
    pub h: f64,
    pub residual_modulus: f64,
    pub residual_argument: f64,
    pub residual_classic: f64,
    pub tol: f64,
    /// True iff both star residuals are within `tol`.
    pub passes: bool,
}

/// Residuals of the Cauchy-Riemann conditions in polar form:
/// `|T'_theta - r [ln R]'_r|` and `|[ln R]'_theta + r T'_r|`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarCRReport {
    pub r: f64,
    pub theta: f64,
    pub h: f64,
    pub residual_1: f64,
    pub residual_2: f64,
    pub tol: f64,
    pub passes: bool,
}

/// Checks the Cauchy-Riemann conditions at `z` with central differences of
/// step `h`, unwrapping `arg f` at the stencil points relative to `Arg f(z)`
/// so that no branch cut crosses the stencil.
pub fn check_cr(f: &Expr, z: Complex64, h: f64, tol: f64) -> Result<CRReport, StarError> {
    if h <= 0.0 {
        return Err(StarError::BadSteps);
    }
    let eval = |w: Complex64| f.eval(&Binding::at(w));
    let center = eval(z)?;
    let fxp = eval(z + Complex64::new(h, 0.0))?;
    let fxm = eval(z - Complex64::new(h, 0.0))?;
    let fyp = eval(z + Complex64::new(0.0, h))?;
    let fym = eval(z - Complex64::new(0.0, h))?;
    for v in [center, fxp, fxm, fyp, fym] {
        if v.norm() <= EPS_ZERO {
            return Err(StarError::StencilZero { at: z });
        }
    }

    let theta0 = center.arg();
    let theta = |w: Complex64| theta0 + (w / center).arg();
    let ln_r = |w: Complex64| w.norm().ln();

    let two_h = 2.0 * h;
    let dlnr_dx = (ln_r(fxp) - ln_r(fxm)) / two_h;
    let dlnr_dy = (ln_r(fyp) - ln_r(fym)) / two_h;
    let dtheta_dx = (theta(fxp) - theta(fxm)) / two_h;
    let dtheta_dy = (theta(fyp) - theta(fym)) / two_h;

    let du_dx = (fxp.re - fxm.re) / two_h;
    let du_dy = (fyp.re - fym.re) / two_h;
    let dv_dx = (fxp.im - fxm.im) / two_h;
    let dv_dy = (fyp.im - fym.im) / two_h;

    let residual_modulus = (dlnr_dx - dtheta_dy).abs();
    let residual_argument = (dlnr_dy + dtheta_dx).abs();
    let residual_classic = (du_dx - dv_dy).abs().max((du_dy + dv_dx).abs());
    Ok(CRReport {
        point: z,
        h,
        residual_modulus,
        residual_argument,
        residual_classic,
        tol,
        passes: residual_modulus.max(residual_argument) <= tol,
    })
}

/// Polar-form counterpart of [`check_cr`] at `z = r e^{i theta}`.
/// Requires `r > h > 0` so the radial stencil stays off the origin.
pub fn check_cr_polar(
    f: &Expr,
    r: f64,
    theta: f64,
    h: f64,
    tol: f64,
) -> Result<PolarCRReport, StarError> {
    if !(h > 0.0 && r > h) {
        return Err(StarError::BadSteps);
    }
    let at = |r: f64, th: f64| {
        let z = Complex64::from_polar(r, th);
        f.eval(&Binding::at(z))
    };
    let center = at(r, theta)?;
    let frp = at(r + h, theta)?;
    let frm = at(r - h, theta)?;
    let ftp = at(r, theta + h)?;
    let ftm = at(r, theta - h)?;
    for v in [center, frp, frm, ftp, ftm] {
        if v.norm() <= EPS_ZERO {
            return Err(StarError::StencilZero {
                at: Complex64::from_polar(r, theta),
            });
        }
    }

    let theta0 = center.arg();
    let branch = |w: Complex64| theta0 + (w / center).arg();
    let ln_r = |w: Complex64| w.norm().ln();

    let two_h = 2.0 * h;
    let dlnr_dr = (ln_r(frp) - ln_r(frm)) / two_h;
    let dlnr_dth = (ln_r(ftp) - ln_r(ftm)) / two_h;
    let dth_dr = (branch(frp) - branch(frm)) / two_h;
    let dth_dth = (branch(ftp) - branch(ftm)) / two_h;

    let residual_1 = (dth_dth - r * dlnr_dr).abs();
    let residual_2 = (dlnr_dth + r * dth_dr).abs();
    Ok(PolarCRReport {
        r,
        theta,
        h,
        residual_1,
        residual_2,
        tol,
        passes: residual_1.max(residual_2) <= tol,
    })
}
