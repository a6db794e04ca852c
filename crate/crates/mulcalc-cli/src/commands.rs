//! Command implementations: input loading, dispatch into the library and
//! record assembly.

use num_complex::Complex64;

use mulcalc::complex_mint::{
    complex_star_integral_partitioned, track_log_partitioned, verify_closed, verify_concat,
    verify_ftc_complex, verify_power, verify_product_division, verify_reverse, IntegralError,
    VerificationReport,
};
use mulcalc::curves::{half_plane_partition, Curve, CurveError, DEFAULT_PARTITION_DEPTH};
use mulcalc::expr::{parse, Binding, EvalError, Expr, ParseError};
use mulcalc::mult_deriv::{
    check_cr, check_cr_polar, default_step, star_derivative, star_derivative_n, StarError,
    DEFAULT_CR_TOL,
};
use mulcalc::quadrature::QuadratureConfig;
use mulcalc::real_mint::{
    double_star, line_star_ds, line_star_dx, line_star_dy, verify_ftc_line, verify_green,
    MintError, PositiveField, Rect,
};
use mulcalc::suite::run_builtin_suite;

use crate::record::{format_sig, parse_complex, Record, Value};
use crate::{Command, CommonOpts, VerifyCommand};

pub struct Outcome {
    pub rendered: String,
    pub passed: Option<bool>,
}

pub struct Failure {
    /// Process exit code: 2 usage/input, 3 numerical.
    pub code: u8,
    pub message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn numerical(message: impl Into<String>) -> Failure {
    Failure {
        code: 3,
        message: message.into(),
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        usage(e.to_string())
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Failure {
        match e {
            EvalError::UnboundParameter(_) | EvalError::UnboundVariable => usage(e.to_string()),
            _ => numerical(e.to_string()),
        }
    }
}

impl From<CurveError> for Failure {
    fn from(e: CurveError) -> Failure {
        match e {
            CurveError::ZeroOnCurve { .. }
            | CurveError::PartitionDepthExceeded { .. }
            | CurveError::Eval(_)
            | CurveError::NonRealCoordinate { .. } => numerical(e.to_string()),
            _ => usage(e.to_string()),
        }
    }
}

impl From<StarError> for Failure {
    fn from(e: StarError) -> Failure {
        match e {
            StarError::BadOrder | StarError::BadSteps => usage(e.to_string()),
            StarError::Eval(inner) => inner.into(),
            StarError::NonHolomorphic(_) => usage(e.to_string()),
            _ => numerical(e.to_string()),
        }
    }
}

impl From<MintError> for Failure {
    fn from(e: MintError) -> Failure {
        match e {
            MintError::BadRect | MintError::BadConfig(_) => usage(e.to_string()),
            MintError::Curve(inner) => inner.into(),
            MintError::Eval(inner) => inner.into(),
            _ => numerical(e.to_string()),
        }
    }
}

impl From<IntegralError> for Failure {
    fn from(e: IntegralError) -> Failure {
        match e {
            IntegralError::BadConfig(_)
            | IntegralError::BadPower
            | IntegralError::NotClosed
            | IntegralError::NonHolomorphic(_) => usage(e.to_string()),
            IntegralError::Curve(inner) => inner.into(),
            IntegralError::Eval(inner) => inner.into(),
            _ => numerical(e.to_string()),
        }
    }
}

fn parse_params(sources: &[String]) -> Result<Binding, Failure> {
    let mut binding = Binding::empty();
    for item in sources {
        let Some((name, value)) = item.split_once('=') else {
            return Err(usage(format!("--param wants NAME=COMPLEX, got `{item}`")));
        };
        let value = parse_complex(value).map_err(usage)?;
        binding = binding.with_param(name.trim(), value);
    }
    Ok(binding)
}

fn load_expr(source: &str, params: &Binding) -> Result<Expr, Failure> {
    Ok(parse(source)?.bind_params(params))
}

fn load_field(source: &str, params: &Binding) -> Result<PositiveField, Failure> {
    let field = PositiveField::parse(source)?;
    Ok(PositiveField::new(field.expr().bind_params(params)))
}

/// `--curve` accepts inline JSON or a path to a JSON file.
fn load_curve(spec: &str) -> Result<Curve, Failure> {
    let trimmed = spec.trim();
    let json = if trimmed.starts_with('{') {
        trimmed.to_string()
    } else {
        std::fs::read_to_string(trimmed)
            .map_err(|e| usage(format!("cannot read curve file `{trimmed}`: {e}")))?
    };
    Ok(Curve::from_spec(&json)?)
}

fn load_rect(spec: &str) -> Result<Rect, Failure> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(usage(format!("--rect wants x0,x1,y0,y1, got `{spec}`")));
    }
    let mut values = [0.0; 4];
    for (slot, text) in values.iter_mut().zip(&parts) {
        *slot = text
            .parse()
            .map_err(|_| usage(format!("bad rectangle coordinate `{text}`")))?;
    }
    Ok(Rect::new(values[0], values[1], values[2], values[3])?)
}

fn quad_config(common: &CommonOpts) -> Result<QuadratureConfig, Failure> {
    let mut cfg = QuadratureConfig::default();
    if let Some(panels) = common.panels {
        cfg.panels = panels;
    }
    if let Some(order) = common.order {
        cfg.gauss_order = order;
    }
    if let Some(tol) = common.tol {
        cfg.refine_tol = tol;
    }
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

/// Echoes both the raw `--curve` argument and the resolved geometry, so the
/// inputs digest covers file contents, not just the path.
fn curve_inputs(record: &mut Record, source: &str, curve: &Curve) {
    record.input("curve", source);
    record.input("curve_resolved", curve.to_spec());
}

fn common_inputs(record: &mut Record, common: &CommonOpts) {
    for item in &common.params {
        record.input(&format!("param:{}", item), "");
    }
    if let Some(panels) = common.panels {
        record.input("panels", panels.to_string());
    }
    if let Some(order) = common.order {
        record.input("order", order.to_string());
    }
    if let Some(tol) = common.tol {
        record.input("tol", tol.to_string());
    }
}

fn finish(record: Record, common: &CommonOpts) -> Outcome {
    Outcome {
        rendered: record.render(common.format),
        passed: record.passed,
    }
}

fn add_report(record: &mut Record, prefix: &str, report: &VerificationReport) {
    let key = |name: &str| {
        if prefix.is_empty() {
            name.to_string()
        } else {
            format!("{prefix}.{name}")
        }
    };
    record.result(&key("lhs"), Value::Complex(report.lhs));
    record.result(&key("rhs"), Value::Complex(report.rhs));
    record.result(&key("abs_err"), Value::Real(report.abs_err));
    record.result(&key("rel_err"), Value::Real(report.rel_err));
    if let Some(branch) = report.matched_branch {
        record.result(&key("matched_branch"), Value::Int(branch));
    }
    record.result(&key("tolerance"), Value::Real(report.tolerance));
}

pub fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::StarDeriv { common, f, z } => star_deriv(common, f, z),
        Command::StarDerivN { common, f, z, n } => star_deriv_n(common, f, z, n),
        Command::CrCheck { common, f, z } => cr_check(common, f, z),
        Command::LineInt { common, f, curve } => line_int(common, f, curve),
        Command::DoubleInt { common, f, rect } => double_int(common, f, rect),
        Command::ComplexInt {
            common,
            f,
            curve,
            branches,
            anchor_offset,
            dump_samples,
        } => complex_int(common, f, curve, branches, anchor_offset, dump_samples),
        Command::Verify(v) => verify(v),
    }
}

fn star_deriv(common: CommonOpts, f_src: String, z_src: String) -> Result<Outcome, Failure> {
    let params = parse_params(&common.params)?;
    let f = load_expr(&f_src, &params)?;
    let z = parse_complex(&z_src).map_err(usage)?;
    let result = star_derivative(&f, z)?;
    let mut record = Record::new("star-deriv");
    record.input("f", &f_src).input("z", &z_src);
    common_inputs(&mut record, &common);
    record
        .result("value", Value::Complex(result.value))
        .result("f_value", Value::Complex(result.f_value))
        .result("logderiv", Value::Complex(result.logderiv));
    Ok(finish(record, &common))
}

fn star_deriv_n(
    common: CommonOpts,
    f_src: String,
    z_src: String,
    n: u32,
) -> Result<Outcome, Failure> {
    let params = parse_params(&common.params)?;
    let f = load_expr(&f_src, &params)?;
    let z = parse_complex(&z_src).map_err(usage)?;
    let value = star_derivative_n(&f, z, n)?;
    let mut record = Record::new("star-deriv-n");
    record
        .input("f", &f_src)
        .input("z", &z_src)
        .input("n", n.to_string());
    common_inputs(&mut record, &common);
    record.result("value", Value::Complex(value));
    Ok(finish(record, &common))
}

fn cr_check(common: CommonOpts, f_src: String, z_src: String) -> Result<Outcome, Failure> {
    let params = parse_params(&common.params)?;
    let f = load_expr(&f_src, &params)?;
    let z = parse_complex(&z_src).map_err(usage)?;
    let tol = common.tol.unwrap_or(DEFAULT_CR_TOL);
    let h = default_step(z);
    let report = check_cr(&f, z, h, tol)?;

    let mut record = Record::new("cr-check");
    record.input("f", &f_src).input("z", &z_src);
    common_inputs(&mut record, &common);
    record
        .result("h", Value::Real(report.h))
        .result("residual_modulus", Value::Real(report.residual_modulus))
        .result("residual_argument", Value::Real(report.residual_argument))
        .result("residual_classic", Value::Real(report.residual_classic))
        .result("cartesian_passes", Value::Bool(report.passes));

    let mut passed = report.passes;
    let r = z.norm();
    if r > h {
        let polar = check_cr_polar(&f, r, z.arg(), h, tol)?;
        record
            .result("polar_residual_1", Value::Real(polar.residual_1))
            .result("polar_residual_2", Value::Real(polar.residual_2))
            .result("polar_passes", Value::Bool(polar.passes));
        passed = passed && polar.passes;
    }
    record.result("tolerance", Value::Real(tol));
    record.passed = Some(passed);
    Ok(finish(record, &common))
}

fn line_int(common: CommonOpts, f_src: String, curve_src: String) -> Result<Outcome, Failure> {
    let params = parse_params(&common.params)?;
    let field = load_field(&f_src, &params)?;
    let curve = load_curve(&curve_src)?;
    let cfg = quad_config(&common)?;
    let ds = line_star_ds(&field, &curve, &cfg)?;
    let dx = line_star_dx(&field, &curve, &cfg)?;
    let dy = line_star_dy(&field, &curve, &cfg)?;
    let mut record = Record::new("line-int");
    record.input("f", &f_src);
    curve_inputs(&mut record, &curve_src, &curve);
    common_inputs(&mut record, &common);
    record
        .result("ds", Value::Real(ds))
        .result("dx", Value::Real(dx))
        .result("dy", Value::Real(dy));
    record.diagnostic("segments", Value::Int(curve.segments().len() as i64));
    Ok(finish(record, &common))
}

fn double_int(common: CommonOpts, f_src: String, rect_src: String) -> Result<Outcome, Failure> {
    let params = parse_params(&common.params)?;
    let field = load_field(&f_src, &params)?;
    let rect = load_rect(&rect_src)?;
    let cfg = quad_config(&common)?;
    let value = double_star(&field, &rect, &cfg)?;
    let mut record = Record::new("double-int");
    record.input("f", &f_src).input("rect", &rect_src);
    common_inputs(&mut record, &common);
    record.result("value", Value::Real(value));
    Ok(finish(record, &common))
}

fn complex_int(
    common: CommonOpts,
    f_src: String,
    curve_src: String,
    branches: i64,
    anchor_offset: i64,
    dump_samples: Option<String>,
) -> Result<Outcome, Failure> {
    if branches < 0 {
        return Err(usage("--branches must be non-negative"));
    }
    let params = parse_params(&common.params)?;
    let f = load_expr(&f_src, &params)?;
    let curve = load_curve(&curve_src)?;
    let cfg = quad_config(&common)?;

    let partition = half_plane_partition(&f, &curve, DEFAULT_PARTITION_DEPTH)?;
    let (a, _) = curve.param_range();
    let start_value = f.eval(&Binding::at(curve.point(a)?))?;
    let anchor = Complex64::new(start_value.norm().ln(), start_value.arg())
        + Complex64::new(0.0, std::f64::consts::TAU * anchor_offset as f64);
    let integral = complex_star_integral_partitioned(&f, &curve, &cfg, &partition, anchor)?;

    if let Some(path) = &dump_samples {
        let branch = track_log_partitioned(&f, &curve, &cfg, &partition, anchor)?;
        let mut csv = String::from("t,z_re,z_im,logf_re,logf_im\n");
        for (t, logf) in branch.times.iter().zip(&branch.logf) {
            let z = curve.point(*t)?;
            csv.push_str(&format!("{t},{},{},{},{}\n", z.re, z.im, logf.re, logf.im));
        }
        std::fs::write(path, csv)
            .map_err(|e| usage(format!("cannot write samples to `{path}`: {e}")))?;
    }

    let mut record = Record::new("complex-int");
    record
        .input("f", &f_src)
        .input("branches", branches.to_string())
        .input("anchor_offset", anchor_offset.to_string());
    curve_inputs(&mut record, &curve_src, &curve);
    common_inputs(&mut record, &common);
    record
        .result("base", Value::Complex(integral.base()))
        .result("winding", Value::Complex(integral.winding()))
        .result("delta_z", Value::Complex(integral.delta_z()))
        .result(
            "single_valued",
            Value::Bool(integral.is_single_valued()),
        )
        .result(
            "distinct_count",
            Value::Text(integral.distinct_count().to_string()),
        );
    for (n, value) in integral.values(branches) {
        record.result(&format!("I*[{n}]"), Value::Complex(value));
    }
    record
        .diagnostic("pieces", Value::Int(integral.pieces as i64))
        .diagnostic("panels", Value::Int(integral.panels as i64))
        .diagnostic("refine_rounds", Value::Int(integral.rounds as i64));
    Ok(finish(record, &common))
}

fn verify(command: VerifyCommand) -> Result<Outcome, Failure> {
    match command {
        VerifyCommand::Ftc { common, f, curve } => {
            let params = parse_params(&common.params)?;
            let expr = load_expr(&f, &params)?;
            let curve_value = load_curve(&curve)?;
            let cfg = quad_config(&common)?;
            let report = verify_ftc_complex(&expr, &curve_value, &cfg)?;
            let mut record = Record::new("verify ftc");
            record.input("f", &f);
            curve_inputs(&mut record, &curve, &curve_value);
            common_inputs(&mut record, &common);
            add_report(&mut record, "", &report);
            record.passed = Some(report.passed);
            Ok(finish(record, &common))
        }
        VerifyCommand::FtcLine { common, f, curve } => {
            let params = parse_params(&common.params)?;
            let field = load_field(&f, &params)?;
            let curve_value = load_curve(&curve)?;
            let cfg = quad_config(&common)?;
            let report = verify_ftc_line(&field, &curve_value, &cfg)?;
            let tolerance = 1e-6;
            let mut record = Record::new("verify ftc-line");
            record.input("f", &f);
            curve_inputs(&mut record, &curve, &curve_value);
            common_inputs(&mut record, &common);
            record
                .result("lhs", Value::Real(report.lhs))
                .result("rhs", Value::Real(report.rhs))
                .result("rel_err", Value::Real(report.rel_err))
                .result("tolerance", Value::Real(tolerance));
            record.passed = Some(report.rel_err <= tolerance);
            Ok(finish(record, &common))
        }
        VerifyCommand::Green {
            common,
            f,
            g,
            rect,
        } => {
            let params = parse_params(&common.params)?;
            let field_f = load_field(&f, &params)?;
            let field_g = load_field(&g, &params)?;
            let region = load_rect(&rect)?;
            let cfg = quad_config(&common)?;
            let report = verify_green(&field_f, &field_g, &region, &cfg)?;
            let tolerance = 1e-6;
            let mut record = Record::new("verify green");
            record.input("f", &f).input("g", &g).input("rect", &rect);
            common_inputs(&mut record, &common);
            record
                .result("boundary", Value::Real(report.boundary))
                .result("area", Value::Real(report.area))
                .result("rel_err", Value::Real(report.rel_err))
                .result("tolerance", Value::Real(tolerance));
            record.passed = Some(report.rel_err <= tolerance);
            Ok(finish(record, &common))
        }
        VerifyCommand::Closed { common, f, curve } => {
            let params = parse_params(&common.params)?;
            let expr = load_expr(&f, &params)?;
            let curve_value = load_curve(&curve)?;
            let cfg = quad_config(&common)?;
            let report = verify_closed(&expr, &curve_value, &cfg)?;
            let mut record = Record::new("verify closed");
            record.input("f", &f);
            curve_inputs(&mut record, &curve, &curve_value);
            common_inputs(&mut record, &common);
            add_report(&mut record, "", &report);
            record.passed = Some(report.passed);
            Ok(finish(record, &common))
        }
        VerifyCommand::Concat {
            common,
            f,
            curve,
            split,
        } => {
            let params = parse_params(&common.params)?;
            let expr = load_expr(&f, &params)?;
            let curve_value = load_curve(&curve)?;
            let cfg = quad_config(&common)?;
            let (a, b) = curve_value.param_range();
            let at = split.unwrap_or(0.5 * (a + b));
            let report = verify_concat(&expr, &curve_value, at, &cfg)?;
            let mut record = Record::new("verify concat");
            record.input("f", &f).input("split", at.to_string());
            curve_inputs(&mut record, &curve, &curve_value);
            common_inputs(&mut record, &common);
            add_report(&mut record, "", &report);
            record.passed = Some(report.passed);
            Ok(finish(record, &common))
        }
        VerifyCommand::Product {
            common,
            f,
            g,
            curve,
        } => {
            let params = parse_params(&common.params)?;
            let expr_f = load_expr(&f, &params)?;
            let expr_g = load_expr(&g, &params)?;
            let curve_value = load_curve(&curve)?;
            let cfg = quad_config(&common)?;
            let report = verify_product_division(&expr_f, &expr_g, &curve_value, &cfg)?;
            let mut record = Record::new("verify product");
            record.input("f", &f).input("g", &g);
            curve_inputs(&mut record, &curve, &curve_value);
            common_inputs(&mut record, &common);
            add_report(&mut record, "product", &report.product);
            add_report(&mut record, "division", &report.division);
            record.passed = Some(report.product.passed && report.division.passed);
            Ok(finish(record, &common))
        }
        VerifyCommand::Reverse { common, f, curve } => {
            let params = parse_params(&common.params)?;
            let expr = load_expr(&f, &params)?;
            let curve_value = load_curve(&curve)?;
            let cfg = quad_config(&common)?;
            let report = verify_reverse(&expr, &curve_value, &cfg)?;
            let mut record = Record::new("verify reverse");
            record.input("f", &f);
            curve_inputs(&mut record, &curve, &curve_value);
            common_inputs(&mut record, &common);
            add_report(&mut record, "", &report);
            record.passed = Some(report.passed);
            Ok(finish(record, &common))
        }
        VerifyCommand::Power {
            common,
            f,
            curve,
            n,
        } => {
            let params = parse_params(&common.params)?;
            let expr = load_expr(&f, &params)?;
            let curve_value = load_curve(&curve)?;
            let cfg = quad_config(&common)?;
            let report = verify_power(&expr, &curve_value, n, &cfg)?;
            let mut record = Record::new("verify power");
            record.input("f", &f).input("n", n.to_string());
            curve_inputs(&mut record, &curve, &curve_value);
            common_inputs(&mut record, &common);
            add_report(&mut record, "", &report);
            record.passed = Some(report.passed);
            Ok(finish(record, &common))
        }
        VerifyCommand::All { common, suite } => {
            if suite != "paper" {
                return Err(usage(format!(
                    "unknown suite `{suite}`; the built-in suite is `paper`"
                )));
            }
            let items = run_builtin_suite();
            let mut record = Record::new("verify all");
            record.input("suite", &suite);
            common_inputs(&mut record, &common);
            let mut all_passed = true;
            for item in &items {
                let status = if item.passed {
                    format!(
                        "pass (error {} within {})",
                        format_sig(item.error, 3),
                        format_sig(item.tolerance, 3)
                    )
                } else {
                    all_passed = false;
                    format!("FAIL ({})", item.detail)
                };
                record.result(item.name, Value::Text(status));
            }
            record.diagnostic("checks", Value::Int(items.len() as i64));
            record.passed = Some(all_passed);
            Ok(finish(record, &common))
        }
    }
}
