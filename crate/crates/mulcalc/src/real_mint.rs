//! Line and double *integrals of positive real fields.
//!
//! For a positive function `g` the *integral replaces the Riemann sum by a
//! product of powers, which collapses to `exp` of an ordinary integral of
//! `ln g`:
//!
//! * line forms: `exp(int_C ln g ds)`, `exp(int_C ln g dx)`, `exp(int_C ln g dy)`;
//! * double form on a rectangle: `exp(double-int ln g dA)`.
//!
//! Quadrature always runs on the logarithm and panel-doubles until the
//! log-integral is stable (see [`QuadratureConfig`]); only then is the
//! result exponentiated.
//!
//! [`verify_ftc_line`] and [`verify_green`] check the two integral
//! identities that tie partial *derivatives of fields to their boundary
//! behavior: the line-integral fundamental theorem
//! `int_C Fx*^dx Fy*^dy = F(end)/F(start)` and the Green-type identity
//! `oint_C f^dx g^dy = double-int (gx*/fy*)^dA`.

use num_complex::Complex64;
use thiserror::Error;

use crate::curves::{Curve, CurveError};
use crate::expr::{parse_with_variable, Binding, EvalError, Expr, ParseError};
use crate::quadrature::{gauss_legendre, integrate_refining};

pub use crate::quadrature::QuadratureConfig;

/// Imaginary dust below this magnitude is truncated when a complex
/// evaluation is coerced to a real field value.
pub const IMAG_TOL: f64 = 1e-12;

/// Central-difference step for partial *derivatives of fields.
pub const FIELD_DERIV_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MintError {
    #[error("field must be positive: value {value:e} at ({x}, {y})")]
    NonPositive { x: f64, y: f64, value: f64 },
    #[error("field produced a non-real value at ({x}, {y}): imaginary part {im:e}")]
    NonReal { x: f64, y: f64, im: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("quadrature did not reach tolerance {tol:e} within {rounds} doubling rounds")]
    NoConvergence { tol: f64, rounds: usize },
    #[error("rectangle needs x0 < x1 and y0 < y1")]
    BadRect,
    #[error("invalid quadrature config: {0}")]
    BadConfig(&'static str),
}

/// A positive scalar field on the plane, backed by an expression over the
/// parameters `x` and `y`. Positivity is enforced at every evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveField {
    expr: Expr,
}

impl PositiveField {
    pub fn new(expr: Expr) -> PositiveField {
        PositiveField { expr }
    }

    /// Parses a field source such as `"exp(x*y)"`. Every single-letter
    /// identifier is a parameter; only `x` and `y` are bound at evaluation.
    pub fn parse(source: &str) -> Result<PositiveField, ParseError> {
        // No identifier is the free variable here.
        Ok(PositiveField::new(parse_with_variable(source, "")?))
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// Evaluates at `(x, y)`, truncating imaginary dust and rejecting
    /// non-positive or non-real values.
    pub fn at(&self, x: f64, y: f64) -> Result<f64, MintError> {
        let binding = Binding::empty()
            .with_param("x", Complex64::new(x, 0.0))
            .with_param("y", Complex64::new(y, 0.0));
        let v = self.expr.eval(&binding)?;
        if v.im.abs() > IMAG_TOL {
            return Err(MintError::NonReal { x, y, im: v.im });
        }
        if v.re.is_nan() || v.re <= 0.0 {
            return Err(MintError::NonPositive { x, y, value: v.re });
        }
        Ok(v.re)
    }

    /// `g^p` as a field, written through the real logarithm.
    pub fn powf(&self, p: f64) -> PositiveField {
        PositiveField::new(Expr::exp(Expr::mul(
            Expr::real(p),
            Expr::log(self.expr.clone()),
        )))
    }

    /// Pointwise product of two fields.
    pub fn product(&self, other: &PositiveField) -> PositiveField {
        PositiveField::new(Expr::mul(self.expr.clone(), other.expr.clone()))
    }

    /// Pointwise quotient of two fields.
    pub fn quotient(&self, other: &PositiveField) -> PositiveField {
        PositiveField::new(Expr::div(self.expr.clone(), other.expr.clone()))
    }
}

/// Anything that exposes the logarithm of a positive field. Integrals only
/// ever consume the logarithm, so derived fields (partial *derivatives,
/// their ratios) implement this directly from difference quotients.
pub trait ScalarField {
    fn ln_at(&self, x: f64, y: f64) -> Result<f64, MintError>;
}

impl ScalarField for PositiveField {
    fn ln_at(&self, x: f64, y: f64) -> Result<f64, MintError> {
        Ok(self.at(x, y)?.ln())
    }
}

/// Coordinate directions for partial *derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// The partial *derivative field `e^{d/daxis ln F}` of a positive field,
/// realized by central differences of `ln F` with step `h`.
#[derive(Debug, Clone)]
pub struct PartialStarField<'a> {
    base: &'a PositiveField,
    axis: Axis,
    h: f64,
}

impl<'a> PartialStarField<'a> {
    pub fn new(base: &'a PositiveField, axis: Axis) -> Self {
        PartialStarField {
            base,
            axis,
            h: FIELD_DERIV_STEP,
        }
    }
}

impl ScalarField for PartialStarField<'_> {
    fn ln_at(&self, x: f64, y: f64) -> Result<f64, MintError> {
        let h = self.h;
        let (fwd, bwd) = match self.axis {
            Axis::X => (self.base.ln_at(x + h, y)?, self.base.ln_at(x - h, y)?),
            Axis::Y => (self.base.ln_at(x, y + h)?, self.base.ln_at(x, y - h)?),
        };
        Ok((fwd - bwd) / (2.0 * h))
    }
}

/// Weight applied to the log-integrand along a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineWeight {
    /// Arc length: `|z'(t)|`.
    Ds,
    /// Horizontal displacement: `Re z'(t)`.
    Dx,
    /// Vertical displacement: `Im z'(t)`.
    Dy,
}

impl LineWeight {
    fn apply(self, dz: Complex64) -> f64 {
        match self {
            LineWeight::Ds => dz.norm(),
            LineWeight::Dx => dz.re,
            LineWeight::Dy => dz.im,
        }
    }
}

/// Ordinary line integral of `ln field` with the given weight, segment by
/// segment, each refined to the configured tolerance.
pub fn log_line_integral(
    field: &impl ScalarField,
    curve: &Curve,
    weight: LineWeight,
    cfg: &QuadratureConfig,
) -> Result<f64, MintError> {
    cfg.validate().map_err(MintError::BadConfig)?;
    let bounds = curve.segment_bounds().to_vec();
    let mut total = 0.0;
    for window in bounds.windows(2) {
        let (lo, hi) = (window[0], window[1]);
        let mut integrand = |t: f64| -> Result<f64, MintError> {
            let z = curve.point(t)?;
            let dz = curve.velocity(t)?;
            Ok(field.ln_at(z.re, z.im)? * weight.apply(dz))
        };
        let refined = integrate_refining(&mut integrand, lo, hi, cfg)?;
        if !refined.converged {
            return Err(MintError::NoConvergence {
                tol: cfg.refine_tol,
                rounds: refined.rounds,
            });
        }
        total += refined.value;
    }
    Ok(total)
}

/// Line *integral in `ds`: `exp(int_C ln g ds)`.
pub fn line_star_ds(
    g: &PositiveField,
    curve: &Curve,
    cfg: &QuadratureConfig,
) -> Result<f64, MintError> {
    Ok(log_line_integral(g, curve, LineWeight::Ds, cfg)?.exp())
}

/// Line *integral in `dx`: `exp(int_C ln g dx)`.
pub fn line_star_dx(
    g: &PositiveField,
    curve: &Curve,
    cfg: &QuadratureConfig,
) -> Result<f64, MintError> {
    Ok(log_line_integral(g, curve, LineWeight::Dx, cfg)?.exp())
}

/// Line *integral in `dy`: `exp(int_C ln g dy)`.
pub fn line_star_dy(
    g: &PositiveField,
    curve: &Curve,
    cfg: &QuadratureConfig,
) -> Result<f64, MintError> {
    Ok(log_line_integral(g, curve, LineWeight::Dy, cfg)?.exp())
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Rect, MintError> {
        if !(x0 < x1 && y0 < y1) {
            return Err(MintError::BadRect);
        }
        Ok(Rect { x0, x1, y0, y1 })
    }

    pub fn unit_square() -> Rect {
        Rect {
            x0: 0.0,
            x1: 1.0,
            y0: 0.0,
            y1: 1.0,
        }
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }

    /// Positively oriented boundary as a four-segment curve.
    pub fn boundary(&self) -> Curve {
        Curve::rectangle_boundary(self.x0, self.x1, self.y0, self.y1)
            .expect("rectangle boundary is a valid curve")
    }

    /// Splits into left/right halves at `x = at`.
    pub fn split_x(&self, at: f64) -> Result<(Rect, Rect), MintError> {
        Ok((
            Rect::new(self.x0, at, self.y0, self.y1)?,
            Rect::new(at, self.x1, self.y0, self.y1)?,
        ))
    }

    /// Splits into bottom/top halves at `y = at`.
    pub fn split_y(&self, at: f64) -> Result<(Rect, Rect), MintError> {
        Ok((
            Rect::new(self.x0, self.x1, self.y0, at)?,
            Rect::new(self.x0, self.x1, at, self.y1)?,
        ))
    }
}

/// Ordinary double integral of `ln field` over the rectangle by tensor
/// Gauss-Legendre, doubling the per-axis panel count until stable.
///
/// The per-axis starting panel count is `sqrt(cfg.panels)` so the total
/// work starts comparable to a line integral.
pub fn log_double_integral(
    field: &impl ScalarField,
    region: &Rect,
    cfg: &QuadratureConfig,
) -> Result<f64, MintError> {
    cfg.validate().map_err(MintError::BadConfig)?;
    let rule = gauss_legendre(cfg.gauss_order);
    let mut panels = ((cfg.panels as f64).sqrt().round() as usize).max(1);

    let evaluate = |panels: usize| -> Result<f64, MintError> {
        // Outer integral in x of the inner integral in y, both composite.
        let mut outer = |x: f64| -> Result<f64, MintError> {
            let mut inner = |y: f64| field.ln_at(x, y);
            rule.integrate_panels(&mut inner, region.y0, region.y1, panels)
        };
        rule.integrate_panels(&mut outer, region.x0, region.x1, panels)
    };

    let mut value = evaluate(panels)?;
    for _ in 0..cfg.max_rounds {
        let next = evaluate(panels * 2)?;
        let change = (next - value).abs();
        value = next;
        panels *= 2;
        if change <= cfg.refine_tol * value.abs().max(1.0) {
            return Ok(value);
        }
    }
    Err(MintError::NoConvergence {
        tol: cfg.refine_tol,
        rounds: cfg.max_rounds,
    })
}

/// Double *integral `exp(double-int ln g dA)` on the rectangle.
pub fn double_star(
    g: &PositiveField,
    region: &Rect,
    cfg: &QuadratureConfig,
) -> Result<f64, MintError> {
    Ok(log_double_integral(g, region, cfg)?.exp())
}

/// Report of the line-integral fundamental theorem check.
#[derive(Debug, Clone, PartialEq)]
pub struct FtcLineReport {
    /// `line_star_dx(Fx*) * line_star_dy(Fy*)` along the curve.
    pub lhs: f64,
    /// `F(end) / F(start)`.
    pub rhs: f64,
    pub rel_err: f64,
}

/// Checks `int_C Fx*^dx Fy*^dy = F(end)/F(start)` for a positive `C^1`
/// field, with the partial *derivatives taken by central differences.
pub fn verify_ftc_line(
    field: &PositiveField,
    curve: &Curve,
    cfg: &QuadratureConfig,
) -> Result<FtcLineReport, MintError> {
    let fx = PartialStarField::new(field, Axis::X);
    let fy = PartialStarField::new(field, Axis::Y);
    let lhs_log = log_line_integral(&fx, curve, LineWeight::Dx, cfg)?
        + log_line_integral(&fy, curve, LineWeight::Dy, cfg)?;
    let lhs = lhs_log.exp();
    let start = curve.start();
    let end = curve.end();
    let rhs = field.at(end.re, end.im)? / field.at(start.re, start.im)?;
    let rel_err = (lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE);
    Ok(FtcLineReport { lhs, rhs, rel_err })
}

/// Report of the Green-type identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenReport {
    /// `oint f^dx g^dy` over the positively oriented rectangle boundary.
    pub boundary: f64,
    /// `double_star(gx*/fy*)` over the rectangle.
    pub area: f64,
    pub rel_err: f64,
}

/// Checks `oint_C f^dx g^dy = double-int (gx*/fy*)^dA` on a rectangle.
pub fn verify_green(
    fld_f: &PositiveField,
    fld_g: &PositiveField,
    region: &Rect,
    cfg: &QuadratureConfig,
) -> Result<GreenReport, MintError> {
    let boundary_curve = region.boundary();
    let boundary_log = log_line_integral(fld_f, &boundary_curve, LineWeight::Dx, cfg)?
        + log_line_integral(fld_g, &boundary_curve, LineWeight::Dy, cfg)?;
    let boundary = boundary_log.exp();

    struct CurlField<'a> {
        f: PartialStarField<'a>,
        g: PartialStarField<'a>,
    }
    impl ScalarField for CurlField<'_> {
        fn ln_at(&self, x: f64, y: f64) -> Result<f64, MintError> {
            Ok(self.g.ln_at(x, y)? - self.f.ln_at(x, y)?)
        }
    }
    let curl = CurlField {
        f: PartialStarField::new(fld_f, Axis::Y),
        g: PartialStarField::new(fld_g, Axis::X),
    };
    let area = log_double_integral(&curl, region, cfg)?.exp();
    let rel_err = (boundary - area).abs() / area.abs().max(f64::MIN_POSITIVE);
    Ok(GreenReport {
        boundary,
        area,
        rel_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn field(src: &str) -> PositiveField {
        PositiveField::parse(src).unwrap()
    }

    #[test]
    fn unit_field_integrates_to_one() {
        let g = field("1");
        let curve = Curve::polyline(&[c(0.0, 0.0), c(1.0, 2.0), c(-1.0, 1.0)]).unwrap();
        assert_eq!(line_star_ds(&g, &curve, &cfg()).unwrap(), 1.0);
        assert_eq!(line_star_dx(&g, &curve, &cfg()).unwrap(), 1.0);
    }

    #[test]
    fn constant_field_gives_c_to_the_length() {
        let g = field("2.5");
        // 3-4-5 triangle edge: length 5
        let curve = Curve::line(c(0.0, 0.0), c(3.0, 4.0)).unwrap();
        let v = line_star_ds(&g, &curve, &cfg()).unwrap();
        let expected = 2.5f64.powi(5);
        assert!((v - expected).abs() < 1e-9 * expected, "{v}");
    }

    #[test]
    fn dx_integral_of_constant_powers_the_horizontal_displacement() {
        let g = field("2");
        // x runs 0 -> 3 while wandering in y
        let curve = Curve::polyline(&[c(0.0, 0.0), c(1.0, 2.0), c(3.0, -1.0)]).unwrap();
        let v = line_star_dx(&g, &curve, &cfg()).unwrap();
        assert!((v - 8.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn exp_x_on_horizontal_segment() {
        let g = field("exp(x)");
        let curve = Curve::line(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let v = line_star_ds(&g, &curve, &cfg()).unwrap();
        // brute-force midpoint oracle for int_0^1 x dx
        let n = 100_000;
        let mut acc = 0.0;
        for k in 0..n {
            acc += ((k as f64 + 0.5) / n as f64) / n as f64;
        }
        assert!((v - acc.exp()).abs() < 1e-9, "{v} vs {}", acc.exp());
        assert!((v - 0.5f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn orientation_flips_dx_and_fixes_ds() {
        let g = field("1+x^2+y^2");
        let curve = Curve::polyline(&[c(0.0, 0.0), c(1.0, 1.0), c(2.0, 0.5)]).unwrap();
        let reversed = curve.reverse();
        let dx_fwd = line_star_dx(&g, &curve, &cfg()).unwrap();
        let dx_bwd = line_star_dx(&g, &reversed, &cfg()).unwrap();
        assert!(
            (dx_fwd * dx_bwd - 1.0).abs() < 1e-10,
            "{dx_fwd} * {dx_bwd} != 1"
        );
        let ds_fwd = line_star_ds(&g, &curve, &cfg()).unwrap();
        let ds_bwd = line_star_ds(&g, &reversed, &cfg()).unwrap();
        assert!((ds_fwd - ds_bwd).abs() < 1e-10 * ds_fwd);
    }

    #[test]
    fn nonpositive_field_is_rejected() {
        let g = field("x-1");
        let curve = Curve::line(c(0.0, 0.0), c(2.0, 0.0)).unwrap();
        let err = line_star_ds(&g, &curve, &cfg()).unwrap_err();
        assert!(matches!(err, MintError::NonPositive { .. }), "{err}");
    }

    #[test]
    fn complex_valued_field_is_rejected() {
        let g = field("exp(i*x)");
        let curve = Curve::line(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let err = line_star_ds(&g, &curve, &cfg()).unwrap_err();
        assert!(matches!(err, MintError::NonReal { .. }), "{err}");
    }

    #[test]
    fn double_star_basics() {
        let square = Rect::unit_square();
        assert_eq!(double_star(&field("1"), &square, &cfg()).unwrap(), 1.0);

        let v = double_star(&field("3"), &square, &cfg()).unwrap();
        assert!((v - 3.0).abs() < 1e-10, "{v}");

        // region of area 2: c^2
        let rect = Rect::new(0.0, 2.0, 0.0, 1.0).unwrap();
        let v = double_star(&field("3"), &rect, &cfg()).unwrap();
        assert!((v - 9.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn double_star_exp_xy_on_unit_square() {
        let v = double_star(&field("exp(x*y)"), &Rect::unit_square(), &cfg()).unwrap();
        // brute-force midpoint oracle for the double integral of x*y
        let n = 2_000;
        let mut acc = 0.0;
        for ix in 0..n {
            let x = (ix as f64 + 0.5) / n as f64;
            for iy in 0..n {
                let y = (iy as f64 + 0.5) / n as f64;
                acc += x * y;
            }
        }
        acc /= (n * n) as f64;
        assert!((v - acc.exp()).abs() < 1e-7, "{v} vs {}", acc.exp());
        assert!((v - 0.25f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn ftc_line_constant_field() {
        let f = field("7");
        let curve = Curve::polyline(&[c(0.0, 0.0), c(1.0, 1.0)]).unwrap();
        let report = verify_ftc_line(&f, &curve, &cfg()).unwrap();
        assert!((report.lhs - 1.0).abs() < 1e-12);
        assert_eq!(report.rhs, 1.0);
    }

    #[test]
    fn ftc_line_exp_xy_diagonal() {
        let f = field("exp(x*y)");
        let curve = Curve::line(c(0.0, 0.0), c(1.0, 1.0)).unwrap();
        let report = verify_ftc_line(&f, &curve, &cfg()).unwrap();
        assert!((report.rhs - E).abs() < 1e-14);
        assert!(report.rel_err <= 1e-8, "{report:?}");
    }

    #[test]
    fn ftc_line_closed_boundary_is_one() {
        let f = field("exp(x+2*y)");
        let curve = Rect::unit_square().boundary();
        let report = verify_ftc_line(&f, &curve, &cfg()).unwrap();
        assert_eq!(report.rhs, 1.0);
        assert!((report.lhs - 1.0).abs() < 1e-9, "{report:?}");
    }

    #[test]
    fn green_trivial_fields() {
        let one = field("1");
        let report = verify_green(&one, &one, &Rect::unit_square(), &cfg()).unwrap();
        assert!((report.boundary - 1.0).abs() < 1e-12);
        assert!((report.area - 1.0).abs() < 1e-12);
    }

    #[test]
    fn green_exp_x_on_unit_square() {
        let report = verify_green(&field("1"), &field("exp(x)"), &Rect::unit_square(), &cfg())
            .unwrap();
        assert!((report.area - E).abs() < 1e-8, "{report:?}");
        assert!(report.rel_err <= 1e-6, "{report:?}");
    }

    #[test]
    fn green_exp_y_and_unit() {
        let report = verify_green(&field("exp(y)"), &field("1"), &Rect::unit_square(), &cfg())
            .unwrap();
        assert!((report.boundary - (-1.0f64).exp()).abs() < 1e-8, "{report:?}");
        assert!(report.rel_err <= 1e-6, "{report:?}");
    }

    #[test]
    fn field_power_and_product_helpers() {
        let g = field("1+x^2");
        let p = g.powf(0.5);
        let v = p.at(2.0, 0.0).unwrap();
        assert!((v - 5.0f64.sqrt()).abs() < 1e-14);
        let prod = g.product(&g);
        assert!((prod.at(2.0, 0.0).unwrap() - 25.0).abs() < 1e-12);
        let quot = g.quotient(&g);
        assert!((quot.at(2.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rect_validation() {
        assert!(matches!(
            Rect::new(1.0, 0.0, 0.0, 1.0),
            Err(MintError::BadRect)
        ));
    }
}
