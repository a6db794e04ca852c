//! Built-in verification corpus.
//!
//! Runs every worked identity the library is designed around — the star
//! derivative closed forms, the Cauchy-Riemann star conditions, the
//! ratio-limit oracle, the line/double *integral identities and the
//! branch-tracked complex *integral theorems — at desk scale with pinned
//! tolerances. The CLI exposes this as `verify all --suite paper`.

use num_complex::Complex64;

use crate::complex_mint::{
    complex_star_integral, verify_closed, verify_concat, verify_ftc_complex, verify_power,
    verify_product_division, verify_reverse, DistinctCount, QuadratureConfig,
};
use crate::curves::Curve;
use crate::expr::{parse, Binding, Expr};
use crate::mult_deriv::{
    check_cr, check_cr_polar, star_derivative, star_derivative_n, star_limit_oracle,
    DEFAULT_CR_TOL,
};
use crate::real_mint::{line_star_dx, verify_ftc_line, verify_green, PositiveField, Rect};

/// One corpus entry: a named identity, its observed error and verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteItem {
    pub name: &'static str,
    pub detail: String,
    pub error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl SuiteItem {
    fn check(name: &'static str, detail: impl Into<String>, error: f64, tolerance: f64) -> Self {
        SuiteItem {
            name,
            detail: detail.into(),
            error,
            tolerance,
            passed: error <= tolerance,
        }
    }

    fn failure(name: &'static str, detail: impl Into<String>) -> Self {
        SuiteItem {
            name,
            detail: detail.into(),
            error: f64::INFINITY,
            tolerance: 0.0,
            passed: false,
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn bind(expr: Expr, name: &str, value: Complex64) -> Expr {
    expr.bind_params(&Binding::empty().with_param(name, value))
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Runs the whole corpus. Failures are captured as items, never panics.
pub fn run_builtin_suite() -> Vec<SuiteItem> {
    let mut items = Vec::new();
    let checks: &[fn() -> Result<SuiteItem, String>] = &[
        constant_derivative,
        exp_linear_derivative,
        gompertz_derivative,
        identity_derivative,
        reciprocal_derivative,
        principal_log_derivative,
        branch_power_derivative,
        cr_conditions,
        ratio_limit,
        line_constant_power,
        ftc_line,
        green_identity,
        concat_property,
        product_division_property,
        reverse_property,
        power_property,
        ftc_complex,
        closed_curves,
        constant_integrand_family,
        gompertz_integral,
        essential_exponential_loop,
    ];
    for run in checks {
        match run() {
            Ok(item) => items.push(item),
            Err(msg) => items.push(SuiteItem::failure("suite-error", msg)),
        }
    }
    items
}

fn constant_derivative() -> Result<SuiteItem, String> {
    let f = bind(parse("c").map_err(|e| e.to_string())?, "c", c(3.0, 4.0));
    let mut worst: f64 = 0.0;
    for z in [c(0.0, 0.0), c(1.5, -2.0), c(-0.7, 0.1)] {
        let r = star_derivative(&f, z).map_err(|e| e.to_string())?;
        worst = worst.max(rel(r.value, c(1.0, 0.0)));
        let second = star_derivative_n(&f, z, 3).map_err(|e| e.to_string())?;
        worst = worst.max(rel(second, c(1.0, 0.0)));
    }
    Ok(SuiteItem::check(
        "deriv-constant",
        "constant function has *derivative 1 in all orders",
        worst,
        1e-12,
    ))
}

fn exp_linear_derivative() -> Result<SuiteItem, String> {
    let cc = c(1.0, 1.0);
    let f = bind(parse("exp(c*z)").map_err(|e| e.to_string())?, "c", cc);
    let mut worst: f64 = 0.0;
    for z in [c(0.0, 0.0), c(0.4, -0.9), c(-1.1, 0.2)] {
        let r = star_derivative(&f, z).map_err(|e| e.to_string())?;
        worst = worst.max(rel(r.value, cc.exp()));
        let second = star_derivative_n(&f, z, 2).map_err(|e| e.to_string())?;
        worst = worst.max(rel(second, c(1.0, 0.0)));
    }
    Ok(SuiteItem::check(
        "deriv-exp-linear",
        "exp(cz) has constant *derivative exp(c) and higher orders 1",
        worst,
        1e-10,
    ))
}

fn gompertz_derivative() -> Result<SuiteItem, String> {
    let f = bind(
        parse("exp(c*exp(z))").map_err(|e| e.to_string())?,
        "c",
        c(0.3, 0.2),
    );
    let mut worst: f64 = 0.0;
    for z in [c(0.0, 0.0), c(0.5, 0.5), c(-0.4, 1.0)] {
        let fv = f.eval(&Binding::at(z)).map_err(|e| e.to_string())?;
        for n in 1..=3 {
            let v = star_derivative_n(&f, z, n).map_err(|e| e.to_string())?;
            worst = worst.max(rel(v, fv));
        }
    }
    Ok(SuiteItem::check(
        "deriv-gompertz",
        "exp(c exp(z)) solves f* = f in every order",
        worst,
        1e-9,
    ))
}

fn identity_derivative() -> Result<SuiteItem, String> {
    let f = parse("z").map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    let z = c(1.3, 0.4);
    // closed form exp((-1)^(n-1) (n-1)! / z^n)
    let mut factorial = 1.0;
    for n in 1..=4u32 {
        if n > 1 {
            factorial *= (n - 1) as f64;
        }
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let expected = (Complex64::new(sign * factorial, 0.0) / z.powi(n as i32)).exp();
        let v = star_derivative_n(&f, z, n).map_err(|e| e.to_string())?;
        worst = worst.max(rel(v, expected));
    }
    let at_two = star_derivative(&f, c(2.0, 0.0)).map_err(|e| e.to_string())?;
    worst = worst.max(rel(at_two.value, c(0.5f64.exp(), 0.0)));
    Ok(SuiteItem::check(
        "deriv-identity",
        "z has *derivatives exp((-1)^(n-1)(n-1)!/z^n)",
        worst,
        1e-9,
    ))
}

fn reciprocal_derivative() -> Result<SuiteItem, String> {
    let f = parse("1/z").map_err(|e| e.to_string())?;
    let z = c(1.1, -0.6);
    let mut worst: f64 = 0.0;
    let mut factorial = 1.0;
    for n in 1..=4u32 {
        if n > 1 {
            factorial *= (n - 1) as f64;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let expected = (Complex64::new(sign * factorial, 0.0) / z.powi(n as i32)).exp();
        let v = star_derivative_n(&f, z, n).map_err(|e| e.to_string())?;
        worst = worst.max(rel(v, expected));
    }
    Ok(SuiteItem::check(
        "deriv-reciprocal",
        "1/z has *derivatives exp((-1)^n(n-1)!/z^n)",
        worst,
        1e-9,
    ))
}

fn principal_log_derivative() -> Result<SuiteItem, String> {
    let f = parse("Log(z)").map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for z in [c(2.0, 1.0), c(0.5, 0.3), c(3.0, -0.2)] {
        let r = star_derivative(&f, z).map_err(|e| e.to_string())?;
        let expected = (1.0 / (z * z.ln())).exp();
        worst = worst.max(rel(r.value, expected));
    }
    Ok(SuiteItem::check(
        "deriv-log-branch",
        "principal Log z has *derivative exp(1/(z Log z))",
        worst,
        1e-10,
    ))
}

fn branch_power_derivative() -> Result<SuiteItem, String> {
    let f = parse("exp(z*Log(z))").map_err(|e| e.to_string())?;
    let e = std::f64::consts::E;
    let mut worst: f64 = 0.0;
    for z in [c(1.0, 0.0), c(2.0, 1.0), c(0.5, 0.25)] {
        let r = star_derivative(&f, z).map_err(|e| e.to_string())?;
        worst = worst.max(rel(r.value, z * e));
        // second order: exp((-1)^2 0!/z) = exp(1/z)
        let v = star_derivative_n(&f, z, 2).map_err(|e| e.to_string())?;
        worst = worst.max(rel(v, (1.0 / z).exp()));
    }
    Ok(SuiteItem::check(
        "deriv-branch-power",
        "exp(z Log z) has single-valued *derivative e z",
        worst,
        1e-9,
    ))
}

fn cr_conditions() -> Result<SuiteItem, String> {
    let holomorphic = parse("exp(z)").map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for k in 0..10 {
        let z = c(0.2 + 0.1 * k as f64, -0.4 + 0.13 * k as f64);
        let report = check_cr(&holomorphic, z, 1e-5, DEFAULT_CR_TOL).map_err(|e| e.to_string())?;
        if !report.passes {
            return Ok(SuiteItem::failure("cr-conditions", "exp(z) rejected"));
        }
        worst = worst
            .max(report.residual_modulus)
            .max(report.residual_argument);
        let polar = check_cr_polar(&holomorphic, 1.0 + 0.05 * k as f64, 0.3 * k as f64, 1e-5, DEFAULT_CR_TOL)
            .map_err(|e| e.to_string())?;
        if !polar.passes {
            return Ok(SuiteItem::failure("cr-conditions", "exp(z) rejected in polar form"));
        }
        worst = worst.max(polar.residual_1).max(polar.residual_2);
    }
    let conj = parse("conj(z)").map_err(|e| e.to_string())?;
    let report = check_cr(&conj, c(1.0, 1.0), 1e-5, DEFAULT_CR_TOL).map_err(|e| e.to_string())?;
    if report.passes || report.residual_classic < 1.9 {
        return Ok(SuiteItem::failure(
            "cr-conditions",
            "conj(z) not rejected by the residuals",
        ));
    }
    Ok(SuiteItem::check(
        "cr-conditions",
        "star CR residuals accept holomorphic and reject conj",
        worst,
        1e-6,
    ))
}

fn ratio_limit() -> Result<SuiteItem, String> {
    let f = parse("z^2+1").map_err(|e| e.to_string())?;
    let hs = [0.1, 0.05, 0.025, 0.0125, 0.00625];
    let (_, extrapolated) = star_limit_oracle(&f, 1.0, &hs).map_err(|e| e.to_string())?;
    let err = rel(extrapolated, c(std::f64::consts::E, 0.0));
    Ok(SuiteItem::check(
        "ratio-limit",
        "the defining limit of (t^2+1) at t=1 extrapolates to e",
        err,
        1e-6,
    ))
}

fn line_constant_power() -> Result<SuiteItem, String> {
    let g = PositiveField::parse("2").map_err(|e| e.to_string())?;
    let curve =
        Curve::polyline(&[c(0.0, 0.0), c(1.0, 2.0), c(3.0, 1.0)]).map_err(|e| e.to_string())?;
    let v = line_star_dx(&g, &curve, &QuadratureConfig::default()).map_err(|e| e.to_string())?;
    Ok(SuiteItem::check(
        "line-constant-power",
        "dx *integral of the constant 2 over x: 0 -> 3 equals 8",
        (v - 8.0).abs() / 8.0,
        1e-10,
    ))
}

fn ftc_line() -> Result<SuiteItem, String> {
    let field = PositiveField::parse("exp(x*y)").map_err(|e| e.to_string())?;
    let curve = Curve::line(c(0.0, 0.0), c(1.0, 1.0)).map_err(|e| e.to_string())?;
    let report =
        verify_ftc_line(&field, &curve, &QuadratureConfig::default()).map_err(|e| e.to_string())?;
    Ok(SuiteItem::check(
        "ftc-line",
        format!("line FTC for exp(xy): lhs {} vs rhs {}", report.lhs, report.rhs),
        report.rel_err,
        1e-8,
    ))
}

fn green_identity() -> Result<SuiteItem, String> {
    let one = PositiveField::parse("1").map_err(|e| e.to_string())?;
    let g = PositiveField::parse("exp(x)").map_err(|e| e.to_string())?;
    let report = verify_green(&one, &g, &Rect::unit_square(), &QuadratureConfig::default())
        .map_err(|e| e.to_string())?;
    Ok(SuiteItem::check(
        "green",
        format!(
            "Green identity for (1, exp(x)): boundary {} vs area {}",
            report.boundary, report.area
        ),
        report.rel_err,
        1e-6,
    ))
}

fn concat_property() -> Result<SuiteItem, String> {
    let f = parse("exp(1/z)").map_err(|e| e.to_string())?;
    let report = verify_concat(&f, &Curve::unit_circle(), 0.0, &QuadratureConfig::default())
        .map_err(|e| e.to_string())?;
    Ok(SuiteItem::check(
        "concat",
        "splitting the unit circle multiplies the integrals",
        report.rel_err,
        report.tolerance,
    ))
}

fn product_division_property() -> Result<SuiteItem, String> {
    let f = parse("z").map_err(|e| e.to_string())?;
    let quarter = Curve::arc(c(0.0, 0.0), 1.0, 0.0, std::f64::consts::FRAC_PI_2)
        .map_err(|e| e.to_string())?;
    let report = verify_product_division(&f, &f, &quarter, &QuadratureConfig::default())
        .map_err(|e| e.to_string())?;
    let err = report.product.rel_err.max(report.division.rel_err);
    if !(report.product.passed && report.division.passed) {
        return Ok(SuiteItem::failure(
            "product-division",
            "no branch offset matched",
        ));
    }
    Ok(SuiteItem::check(
        "product-division",
        "z*z and z/z integrals factor up to a winding power",
        err,
        report.product.tolerance,
    ))
}

fn reverse_property() -> Result<SuiteItem, String> {
    let f = parse("exp(1/z)").map_err(|e| e.to_string())?;
    let upper = Curve::arc(c(0.0, 0.0), 1.0, 0.0, std::f64::consts::PI)
        .map_err(|e| e.to_string())?;
    let report =
        verify_reverse(&f, &upper, &QuadratureConfig::default()).map_err(|e| e.to_string())?;
    Ok(SuiteItem::check(
        "reverse",
        "reversing the upper semicircle inverts the integral",
        report.rel_err,
        report.tolerance,
    ))
}

fn power_property() -> Result<SuiteItem, String> {
    let f = parse("z").map_err(|e| e.to_string())?;
    let quarter = Curve::arc(c(0.0, 0.0), 1.0, 0.0, std::f64::consts::FRAC_PI_2)
        .map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for n in 0..=3 {
        let report =
            verify_power(&f, &quarter, n, &QuadratureConfig::default()).map_err(|e| e.to_string())?;
        if !report.passed {
            return Ok(SuiteItem::failure("power", format!("containment failed at n = {n}")));
        }
        worst = worst.max(report.rel_err);
    }
    Ok(SuiteItem::check(
        "power",
        "(int z^dz)^n is contained in int (z^n)^dz for n = 0..3",
        worst,
        1e-8,
    ))
}

fn ftc_complex() -> Result<SuiteItem, String> {
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;

    let f = bind(parse("exp(c*z)").map_err(|e| e.to_string())?, "c", c(2.0, -1.0));
    let curve = Curve::line(c(1.0, 0.0), c(0.0, 1.0)).map_err(|e| e.to_string())?;
    let report = verify_ftc_complex(&f, &curve, &cfg).map_err(|e| e.to_string())?;
    if !report.passed {
        return Ok(SuiteItem::failure("ftc-complex", "exp(cz) membership failed"));
    }
    worst = worst.max(report.rel_err);

    let f = bind(parse("exp(c*exp(z))").map_err(|e| e.to_string())?, "c", c(0.5, 0.0));
    let curve = Curve::line(c(0.0, 0.0), c(1.0, 0.0)).map_err(|e| e.to_string())?;
    let report = verify_ftc_complex(&f, &curve, &cfg).map_err(|e| e.to_string())?;
    if !report.passed {
        return Ok(SuiteItem::failure("ftc-complex", "exp(c exp z) membership failed"));
    }
    worst = worst.max(report.rel_err);

    Ok(SuiteItem::check(
        "ftc-complex",
        "some branch of int (f*)^dz equals f(end)/f(start)",
        worst,
        1e-8,
    ))
}

fn closed_curves() -> Result<SuiteItem, String> {
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    let report = verify_closed(&parse("z").map_err(|e| e.to_string())?, &Curve::unit_circle(), &cfg)
        .map_err(|e| e.to_string())?;
    if !report.passed {
        return Ok(SuiteItem::failure("closed", "z on the unit circle failed"));
    }
    worst = worst.max(report.abs_err);

    let f = bind(parse("exp(c*z)").map_err(|e| e.to_string())?, "c", c(1.0, 1.0));
    let rect = Curve::rectangle_boundary(-1.0, 1.0, -0.5, 0.5).map_err(|e| e.to_string())?;
    let report = verify_closed(&f, &rect, &cfg).map_err(|e| e.to_string())?;
    if !report.passed {
        return Ok(SuiteItem::failure("closed", "exp(cz) on a rectangle failed"));
    }
    worst = worst.max(report.abs_err);

    Ok(SuiteItem::check(
        "closed",
        "closed-curve *integrals of *derivatives collapse to 1",
        worst,
        1e-8,
    ))
}

fn constant_integrand_family() -> Result<SuiteItem, String> {
    let cfg = QuadratureConfig::default();
    let e = std::f64::consts::E;
    let f = parse("e").map_err(|e| e.to_string())?;

    let unit = Curve::line(c(0.0, 0.0), c(1.0, 0.0)).map_err(|e| e.to_string())?;
    let integral = complex_star_integral(&f, &unit, &cfg).map_err(|e| e.to_string())?;
    let mut worst = rel(integral.base(), c(e, 0.0));
    if !integral.is_single_valued() {
        return Ok(SuiteItem::failure(
            "constant-family",
            "integer displacement must collapse the family",
        ));
    }

    let half = Curve::line(c(0.0, 0.0), c(0.5, 0.0)).map_err(|e| e.to_string())?;
    let integral = complex_star_integral(&f, &half, &cfg).map_err(|e| e.to_string())?;
    if integral.distinct_count() != DistinctCount::Finite(2) {
        return Ok(SuiteItem::failure(
            "constant-family",
            "half displacement must give exactly two values",
        ));
    }
    worst = worst.max(rel(integral.value(0), c(e.sqrt(), 0.0)));
    worst = worst.max(rel(integral.value(1), c(-e.sqrt(), 0.0)));

    Ok(SuiteItem::check(
        "constant-family",
        "constant integrand: single value on 0->1, two values on 0->1/2",
        worst,
        1e-9,
    ))
}

fn gompertz_integral() -> Result<SuiteItem, String> {
    // integrand exp(c e^z) is its own *derivative: the integral family is
    // exp(2 pi n dz i) exp(c(e^{z(b)} - e^{z(a)}))
    let cfg = QuadratureConfig::default();
    let cc = c(0.4, 0.3);
    let f = bind(parse("exp(c*exp(z))").map_err(|e| e.to_string())?, "c", cc);
    let curve = Curve::line(c(0.0, 0.0), c(0.8, 0.4)).map_err(|e| e.to_string())?;
    let integral = complex_star_integral(&f, &curve, &cfg).map_err(|e| e.to_string())?;
    let target = (cc * (curve.end().exp() - curve.start().exp())).exp();
    let mut best = f64::INFINITY;
    for n in -5..=5 {
        best = best.min(rel(integral.value(n), target));
    }
    Ok(SuiteItem::check(
        "gompertz-integral",
        "int exp(c e^z)^dz lands in the predicted family",
        best,
        1e-8,
    ))
}

fn essential_exponential_loop() -> Result<SuiteItem, String> {
    let cfg = QuadratureConfig::default();
    let f = parse("exp(1/z)").map_err(|e| e.to_string())?;
    let integral =
        complex_star_integral(&f, &Curve::unit_circle(), &cfg).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for n in -5..=5 {
        worst = worst.max((integral.value(n) - c(1.0, 0.0)).norm());
    }
    Ok(SuiteItem::check(
        "essential-loop",
        "oint exp(1/z)^dz around the unit circle is identically 1",
        worst,
        1e-8,
    ))
}
