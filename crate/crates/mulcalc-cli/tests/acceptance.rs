//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (visible with `cargo test --test acceptance -- --nocapture`).
//! Tolerances are pinned in the assertions.

use std::io::Write;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mulcalc::complex_mint::{
    complex_star_integral, complex_star_integral_partitioned, verify_closed, verify_concat,
    verify_ftc_complex, verify_power, verify_reverse, DistinctCount, QuadratureConfig,
};
use mulcalc::curves::{half_plane_partition, Curve, DEFAULT_PARTITION_DEPTH};
use mulcalc::expr::{differentiate, parse, Binding, Expr};
use mulcalc::mult_deriv::{
    check_cr, check_cr_polar, star_derivative, star_limit_oracle, DEFAULT_CR_TOL,
};
use mulcalc::real_mint::{verify_ftc_line, verify_green, PositiveField, Rect};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn pass(line: &str) {
    println!("{line}: PASS");
}

/// Vertices in the right-half box keep every polyline point at least 0.3
/// away from the origin.
fn random_vertex(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.gen_range(0.3..2.0), rng.gen_range(-1.5..1.5))
}

fn random_open_curve(rng: &mut ChaCha8Rng, segments: usize) -> Curve {
    loop {
        let vertices: Vec<Complex64> = (0..=segments).map(|_| random_vertex(rng)).collect();
        if vertices
            .windows(2)
            .all(|w| (w[0] - w[1]).norm() > 0.1)
        {
            return Curve::polyline(&vertices).unwrap();
        }
    }
}

fn random_closed_polygon(rng: &mut ChaCha8Rng) -> Curve {
    loop {
        let mut vertices: Vec<Complex64> = (0..4).map(|_| random_vertex(rng)).collect();
        vertices.push(vertices[0]);
        if vertices
            .windows(2)
            .all(|w| (w[0] - w[1]).norm() > 0.1)
        {
            return Curve::polyline(&vertices).unwrap();
        }
    }
}

fn unit_circle_json() -> String {
    r#"{"segments":[{"kind":"arc","center":[0,0],"radius":1,"theta":[-3.141592653589793,3.141592653589793]}]}"#
        .to_string()
}

#[test]
fn criterion_01_unit_circle_integral_is_one_via_cli() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "{}", unit_circle_json()).unwrap();

    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_mulcalc"))
        .args([
            "complex-int",
            "--f",
            "exp(1/z)",
            "--curve",
            file.path().to_str().unwrap(),
            "--branches",
            "5",
            "--format",
            "json",
        ])
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();

    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for n in -5i64..=5 {
        let value = &parsed["results"][format!("I*[{n}]")];
        let re = value["re"].as_f64().unwrap();
        let im = value["im"].as_f64().unwrap();
        let err = (c(re, im) - c(1.0, 0.0)).norm();
        assert!(err <= 1e-8, "branch {n}: error {err:e}");
    }
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass("criterion 1 (unit-circle integral of exp(1/z) is 1 on branches -5..=5, < 1 s)");
}

#[test]
fn criterion_02_constant_integrand_family() {
    let f = parse("exp(c)")
        .unwrap()
        .bind_params(&Binding::empty().with_param("c", c(1.0, 0.0)));

    let unit = Curve::line(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
    let integral = complex_star_integral(&f, &unit, &cfg()).unwrap();
    let e = std::f64::consts::E;
    assert!(rel(integral.base(), c(e, 0.0)) <= 1e-10);
    assert!(integral.is_single_valued());

    let half = Curve::line(c(0.0, 0.0), c(0.5, 0.0)).unwrap();
    let integral = complex_star_integral(&f, &half, &cfg()).unwrap();
    assert_eq!(integral.distinct_count(), DistinctCount::Finite(2));
    assert!((integral.winding() - c(-1.0, 0.0)).norm() <= 1e-12);
    assert!(rel(integral.value(0), c(e.sqrt(), 0.0)) <= 1e-9);
    assert!(rel(integral.value(1), c(-e.sqrt(), 0.0)) <= 1e-9);
    pass("criterion 2 (constant integrand: single value on 0->1, +-sqrt(e) on 0->1/2)");
}

#[test]
fn criterion_03_ftc_membership_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xface);
    for case in 0..25 {
        let f = match case % 3 {
            0 => {
                let coeff = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                parse("exp(c*z)")
                    .unwrap()
                    .bind_params(&Binding::empty().with_param("c", coeff))
            }
            1 => {
                let coeff = c(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6));
                parse("exp(c*exp(z))")
                    .unwrap()
                    .bind_params(&Binding::empty().with_param("c", coeff))
            }
            _ => parse("z").unwrap(),
        };
        let curve = random_open_curve(&mut rng, 3);
        let report = verify_ftc_complex(&f, &curve, &cfg()).unwrap();
        assert!(
            report.passed && report.rel_err <= 1e-8,
            "case {case}: {report:?}"
        );
    }
    pass("criterion 3 (fundamental theorem membership on 25 random integrand/curve pairs)");
}

#[test]
fn criterion_04_closed_polygons_collapse_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc10);
    let integrands = ["z", "1/z", "exp(c*z)"];
    for case in 0..10 {
        let src = integrands[case % integrands.len()];
        let coeff = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let f = parse(src)
            .unwrap()
            .bind_params(&Binding::empty().with_param("c", coeff));
        let polygon = random_closed_polygon(&mut rng);
        let report = verify_closed(&f, &polygon, &cfg()).unwrap();
        assert!(
            report.passed && report.abs_err <= 1e-8,
            "case {case} ({src}): {report:?}"
        );
    }
    pass("criterion 4 (closed polygon integrals of f* collapse to 1 for 10 random cases)");
}

#[test]
fn criterion_05_quadrature_matches_integral_product() {
    // direct product evaluation with 1e5 uniform nodes and cumulative
    // argument unwrapping, independent of the tracked quadrature
    fn product_oracle(f: &Expr, curve: &Curve, nodes: usize) -> Complex64 {
        let (a, b) = curve.param_range();
        let eval = |t: f64| {
            f.eval(&Binding::at(curve.point(t).unwrap()))
                .expect("oracle eval")
        };
        let principal = |v: Complex64| c(v.norm().ln(), v.arg());
        let mut log_at_prev = principal(eval(a));
        let mut z_prev = curve.point(a).unwrap();
        let mut f_prev = eval(a);
        let mut sum = c(0.0, 0.0);
        for k in 1..=nodes {
            let t = a + (b - a) * k as f64 / nodes as f64;
            let mid = a + (b - a) * (k as f64 - 0.5) / nodes as f64;
            let z_k = curve.point(t).unwrap();
            let f_k = eval(t);
            let log_mid = log_at_prev + principal(eval(mid) / f_prev);
            sum += log_mid * (z_k - z_prev);
            log_at_prev += principal(f_k / f_prev);
            f_prev = f_k;
            z_prev = z_k;
        }
        sum.exp()
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x09ac1e);
    let sources = ["exp(z)", "z", "z^2+1"];
    for case in 0..10 {
        let f = parse(sources[case % sources.len()]).unwrap();
        let curve = random_open_curve(&mut rng, 2);
        let integral = complex_star_integral(&f, &curve, &cfg()).unwrap();
        let oracle = product_oracle(&f, &curve, 100_000);
        let err = rel(integral.base(), oracle);
        assert!(err <= 1e-6, "case {case}: {err:e}");
    }
    pass("criterion 5 (quadrature base value matches the 1e5-node integral product)");
}

#[test]
fn criterion_06_line_ftc() {
    let field = PositiveField::parse("exp(x*y)").unwrap();
    let diagonal = Curve::line(c(0.0, 0.0), c(1.0, 1.0)).unwrap();
    let report = verify_ftc_line(&field, &diagonal, &cfg()).unwrap();
    assert!(report.rel_err <= 1e-8, "{report:?}");

    let mut rng = ChaCha8Rng::seed_from_u64(0xf7c);
    for case in 0..10 {
        let a = rng.gen_range(-0.8..0.8);
        let b = rng.gen_range(-0.8..0.8);
        let src = match case % 4 {
            0 => format!("exp({a}*x+{b}*y)"),
            1 => format!("exp({a}*x*y)"),
            2 => "2+x^2+y^2".to_string(),
            _ => format!("2+sin({a}*x)*cos({b}*y)"),
        };
        let field = PositiveField::parse(&src).unwrap();
        let vertices: Vec<Complex64> = (0..3)
            .map(|_| c(rng.gen_range(-1.0..2.0), rng.gen_range(-1.0..2.0)))
            .collect();
        if vertices.windows(2).any(|w| (w[0] - w[1]).norm() < 0.1) {
            continue;
        }
        let curve = Curve::polyline(&vertices).unwrap();
        let report = verify_ftc_line(&field, &curve, &cfg()).unwrap();
        assert!(report.rel_err <= 1e-6, "case {case} ({src}): {report:?}");
    }
    pass("criterion 6 (line fundamental theorem: exp(xy) at 1e-8, random fields at 1e-6)");
}

#[test]
fn criterion_07_green_identity() {
    let square = Rect::unit_square();
    let one = PositiveField::parse("1").unwrap();
    let exp_x = PositiveField::parse("exp(x)").unwrap();
    let report = verify_green(&one, &exp_x, &square, &cfg()).unwrap();
    assert!(report.rel_err <= 1e-6, "{report:?}");

    let mut rng = ChaCha8Rng::seed_from_u64(0x93ee);
    for case in 0..5 {
        let a = rng.gen_range(-0.7..0.7);
        let b = rng.gen_range(-0.7..0.7);
        let f = PositiveField::parse(&format!("exp({a}*x*y)")).unwrap();
        let g = PositiveField::parse(&format!("2+sin({b}*x)*cos({a}*y)")).unwrap();
        let report = verify_green(&f, &g, &square, &cfg()).unwrap();
        assert!(report.rel_err <= 1e-6, "case {case}: {report:?}");
    }
    pass("criterion 7 (Green identity on the unit square within 1e-6)");
}

#[test]
fn criterion_08_derivative_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa1);
    let tau = std::f64::consts::TAU;

    let random_function = |rng: &mut ChaCha8Rng| -> Expr {
        let a = c(rng.gen_range(-1.2..1.2), rng.gen_range(-1.2..1.2));
        let b = c(rng.gen_range(0.6..2.0), rng.gen_range(-0.8..0.8));
        let src = match rng.gen_range(0..5) {
            0 => "exp(a*z)",
            1 => "z+b",
            2 => "z^2+b",
            3 => "exp(z)*(z+b)",
            _ => "1/(z+b)",
        };
        parse(src)
            .unwrap()
            .bind_params(&Binding::empty().with_param("a", a).with_param("b", b))
    };
    let good_point = |rng: &mut ChaCha8Rng, funcs: &[&Expr]| -> Complex64 {
        'search: loop {
            let z = c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            for f in funcs {
                match star_derivative(f, z) {
                    Ok(r) if r.f_value.norm() >= 0.05 && r.logderiv.norm() <= 8.0 => {}
                    _ => continue 'search,
                }
            }
            return z;
        }
    };

    for _ in 0..50 {
        let f = random_function(&mut rng);
        let g = random_function(&mut rng);
        let z = good_point(&mut rng, &[&f, &g]);
        let fs = star_derivative(&f, z).unwrap().value;
        let gs = star_derivative(&g, z).unwrap().value;

        // (a) constant factors drop out
        let scale = c(1.3, -0.7);
        let lhs = star_derivative(&Expr::mul(Expr::Lit(scale), f.clone()), z)
            .unwrap()
            .value;
        assert!(rel(lhs, fs) <= 1e-9, "(a) at {z}");

        // (b)/(c) product and quotient
        let lhs = star_derivative(&Expr::mul(f.clone(), g.clone()), z).unwrap().value;
        assert!(rel(lhs, fs * gs) <= 1e-9, "(b) at {z}");
        let lhs = star_derivative(&Expr::div(f.clone(), g.clone()), z).unwrap().value;
        assert!(rel(lhs, fs / gs) <= 1e-9, "(c) at {z}");

        // (g) integer powers
        for n in 0..=3 {
            let lhs = star_derivative(&Expr::pow(f.clone(), n), z).unwrap().value;
            assert!(rel(lhs, fs.powi(n)) <= 1e-9, "(g) n = {n} at {z}");
        }

        // (f) complex constant powers: membership with |k| <= 3
        let power = c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let lifted = Expr::exp(Expr::mul(Expr::Lit(power), Expr::log(f.clone())));
        if let Ok(lhs) = star_derivative(&lifted, z) {
            let ratio = lhs.value * (-power * fs.ln()).exp();
            let matched = (-3i32..=3).any(|k| {
                rel(ratio, (power * c(0.0, tau * k as f64)).exp()) <= 1e-8
            });
            assert!(matched, "(f) no branch within |k| <= 3 at {z}");
        }

        // (d) function exponent: membership with a branch pair
        let lifted = Expr::exp(Expr::mul(g.clone(), Expr::log(f.clone())));
        if let Ok(lhs) = star_derivative(&lifted, z) {
            let f_at = f.eval(&Binding::at(z)).unwrap();
            let g_at = g.eval(&Binding::at(z)).unwrap();
            let dg_at = differentiate(&g).unwrap().eval(&Binding::at(z)).unwrap();
            let matched = (-3i32..=3).any(|k1| {
                (-3i32..=3).any(|k2| {
                    let first = (g_at * (fs.ln() + c(0.0, tau * k1 as f64))).exp();
                    let second = (dg_at * (f_at.ln() + c(0.0, tau * k2 as f64))).exp();
                    rel(lhs.value, first * second) <= 1e-8
                })
            });
            assert!(matched, "(d) no branch pair within |k| <= 3 at {z}");
        }

        // (e) composition: membership with |k| <= 3
        let g_at = g.eval(&Binding::at(z)).unwrap();
        if let (Ok(lhs), Ok(inner)) = (
            star_derivative(&f.substitute_var(&g), z),
            star_derivative(&f, g_at),
        ) {
            if inner.logderiv.norm() <= 8.0 {
                let dg_at = differentiate(&g).unwrap().eval(&Binding::at(z)).unwrap();
                let matched = (-3i32..=3).any(|k| {
                    let branch = (dg_at * (inner.value.ln() + c(0.0, tau * k as f64))).exp();
                    rel(lhs.value, branch) <= 1e-8
                });
                assert!(matched, "(e) no branch within |k| <= 3 at {z}");
            }
        }
    }
    pass("criterion 8 (derivative algebra (a)-(c),(g) exact; (d)-(f) membership, |k| <= 3)");
}

#[test]
fn criterion_09_cr_conditions_on_corpus() {
    let corpus = ["exp(z)", "z^2+3", "sin(z)+2", "exp(z)*(z+2)", "1/(z+3)"];
    let mut rng = ChaCha8Rng::seed_from_u64(0xc4);
    for src in corpus {
        let f = parse(src).unwrap();
        let mut checked = 0;
        while checked < 100 {
            let z = c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            let Ok(report) = check_cr(&f, z, 1e-5, DEFAULT_CR_TOL) else {
                continue;
            };
            assert!(
                report.passes
                    && report.residual_modulus <= 1e-6
                    && report.residual_argument <= 1e-6,
                "{src} at {z}: {report:?}"
            );
            checked += 1;
        }
        let mut checked = 0;
        while checked < 100 {
            let r = rng.gen_range(0.3..1.5);
            let theta = rng.gen_range(-3.0..3.0);
            let Ok(report) = check_cr_polar(&f, r, theta, 1e-5, DEFAULT_CR_TOL) else {
                continue;
            };
            assert!(
                report.passes && report.residual_1 <= 1e-6 && report.residual_2 <= 1e-6,
                "{src} polar at ({r}, {theta}): {report:?}"
            );
            checked += 1;
        }
    }
    let conj = parse("conj(z)").unwrap();
    let report = check_cr(&conj, c(1.0, 1.0), 1e-5, DEFAULT_CR_TOL).unwrap();
    assert!(report.residual_classic >= 1.9 && !report.passes, "{report:?}");
    pass("criterion 9 (CR residuals <= 1e-6 on the holomorphic corpus; conj rejected)");
}

#[test]
fn criterion_10_ratio_limit_convergence() {
    let f = parse("z^2+1").unwrap();
    let hs = [0.1, 0.05, 0.025, 0.0125, 0.00625];
    let (values, extrapolated) = star_limit_oracle(&f, 1.0, &hs).unwrap();
    let exact = c(std::f64::consts::E, 0.0);

    let errors: Vec<f64> = values.iter().map(|v| (v - exact).norm()).collect();
    for pair in errors.windows(2) {
        let order = (pair[0] / pair[1]).ln() / 2.0f64.ln();
        assert!(order >= 1.0, "observed order {order} below 1: {errors:?}");
    }
    assert!(
        (extrapolated - exact).norm() <= 1e-6,
        "extrapolated {extrapolated}"
    );
    pass("criterion 10 (ratio limit for t^2+1 converges to e with order >= 1)");
}

#[test]
fn criterion_11_theorem_verifiers_and_full_suite() {
    // partition independence on the essential exponential
    let f = parse("exp(1/z)").unwrap();
    let circle = Curve::unit_circle();
    let partition = half_plane_partition(&f, &circle, DEFAULT_PARTITION_DEPTH).unwrap();
    let refined = partition.refine_midpoints(&f, &circle).unwrap();
    let (a, _) = circle.param_range();
    let start = f.eval(&Binding::at(circle.point(a).unwrap())).unwrap();
    let anchor = c(start.norm().ln(), start.arg());
    let coarse = complex_star_integral_partitioned(&f, &circle, &cfg(), &partition, anchor).unwrap();
    let fine = complex_star_integral_partitioned(&f, &circle, &cfg(), &refined, anchor).unwrap();
    assert!(
        (coarse.base() - fine.base()).norm() <= 1e-10 * coarse.base().norm().max(1.0),
        "partition dependence: {} vs {}",
        coarse.base(),
        fine.base()
    );

    // theorem verifiers on their example corpora
    let report = verify_concat(&f, &circle, 0.0, &cfg()).unwrap();
    assert!(report.passed, "concat: {report:?}");
    let upper = Curve::arc(c(0.0, 0.0), 1.0, 0.0, std::f64::consts::PI).unwrap();
    let report = verify_reverse(&f, &upper, &cfg()).unwrap();
    assert!(report.passed, "reverse: {report:?}");
    let quarter = Curve::arc(c(0.0, 0.0), 1.0, 0.0, std::f64::consts::FRAC_PI_2).unwrap();
    for n in 0..=3 {
        let report = verify_power(&parse("z").unwrap(), &quarter, n, &cfg()).unwrap();
        assert!(report.passed, "power n = {n}: {report:?}");
    }

    // the whole built-in suite through the CLI, under the time budget
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_mulcalc"))
        .args(["verify", "all", "--suite", "paper"])
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    assert!(
        out.status.success(),
        "verify all failed:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(elapsed.as_secs() < 30, "suite took {elapsed:?}");
    pass("criterion 11 (partition independence, theorem verifiers, `verify all` exits 0)");
}
