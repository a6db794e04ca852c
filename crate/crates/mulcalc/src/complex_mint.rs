//! Branch-tracked complex *integrals along piecewise-smooth curves.
//!
//! The complex *integral of a nonvanishing continuous `f` along a curve `C`
//! is inherently multi-valued: choosing a branch of `log f` at the start
//! point and continuing it along the curve gives one branch value
//! `I*_0 = exp(int_C log f(z) dz)`, and the full value set is the family
//! `I*_n = W^n I*_0` generated by the winding multiplier
//! `W = exp(2 pi i (z(b) - z(a)))`.
//!
//! Continuation works piece by piece: [`crate::curves::half_plane_partition`]
//! cuts the parameter interval so that `f`'s values on each piece stay in an
//! open half plane, which makes the principal logarithm of ratios the
//! correct increment of the continuous branch. [`track_log`] materializes
//! that continuous logarithm; [`complex_star_integral`] integrates it.
//!
//! The `verify_*` operations check the algebraic identities the family
//! satisfies (path splitting, products, reversal, powers, the closed-curve
//! collapse to 1, and the fundamental-theorem membership for integrands of
//! the form `f*`), reporting branch-matched errors.

use num_complex::Complex64;
use thiserror::Error;

use crate::curves::{half_plane_partition, Curve, CurveError, HalfPlanePartition, DEFAULT_PARTITION_DEPTH};
use crate::expr::{Binding, DiffError, EvalError, Expr};
use crate::mult_deriv::{star_derivative_expr, EPS_ZERO};
use crate::quadrature::integrate_refining;

pub use crate::quadrature::QuadratureConfig;

/// Default relative tolerance for theorem verifications.
pub const DEFAULT_VERIFY_TOL: f64 = 1e-8;

/// Default branch search bound for membership checks.
pub const DEFAULT_BRANCH_BOUND: i64 = 5;

const TAU: f64 = std::f64::consts::TAU;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegralError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    NonHolomorphic(#[from] DiffError),
    #[error("quadrature did not reach tolerance {tol:e} within {rounds} doubling rounds")]
    NoConvergence { tol: f64, rounds: usize },
    #[error("curve must be closed for this operation")]
    NotClosed,
    #[error("anchor is not a logarithm of f at the curve start: |exp(anchor) - f(z(a))| = {err:e}")]
    AnchorMismatch { err: f64 },
    #[error("invalid quadrature config: {0}")]
    BadConfig(&'static str),
    #[error("power must be between 0 and 3")]
    BadPower,
}

/// A continuous single-valued branch of `log f(z(t))` along a curve,
/// tabulated at nodes.
///
/// Invariants: `exp(logf[k])` equals `f(z(times[k]))`, consecutive
/// imaginary jumps stay below `pi/2`, and `logf[0]` is the anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchPath {
    pub times: Vec<f64>,
    pub logf: Vec<Complex64>,
    pub anchor: Complex64,
}

impl BranchPath {
    /// Branch value at the end of the curve.
    pub fn terminal(&self) -> Complex64 {
        *self.logf.last().expect("branch path has nodes")
    }
}

/// How many distinct values the family `{W^n I*_0}` takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistinctCount {
    Finite(u64),
    CountablyInfinite,
}

impl std::fmt::Display for DistinctCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DistinctCount::Finite(n) => write!(f, "{n}"),
            DistinctCount::CountablyInfinite => write!(f, "countably infinite"),
        }
    }
}

/// The multi-valued complex *integral: base branch value plus the winding
/// multiplier that generates the rest of the family.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiValueIntegral {
    base: Complex64,
    winding: Complex64,
    delta_z: Complex64,
    single_valued: bool,
    distinct: DistinctCount,
    /// Half-plane pieces used for tracking.
    pub pieces: usize,
    /// Largest per-interval panel count the refinement settled on.
    pub panels: usize,
    /// Largest number of doubling rounds any interval needed.
    pub rounds: usize,
}

impl MultiValueIntegral {
    fn new(base: Complex64, delta_z: Complex64, pieces: usize, panels: usize, rounds: usize) -> Self {
        let winding = (Complex64::new(0.0, TAU) * delta_z).exp();
        let distinct = distinct_count(delta_z);
        let single_valued = distinct == DistinctCount::Finite(1);
        debug_assert!(
            !single_valued || (winding - Complex64::new(1.0, 0.0)).norm() <= 1e-12,
            "single-valued family must have unit winding multiplier"
        );
        MultiValueIntegral {
            base,
            winding,
            delta_z,
            single_valued,
            distinct,
            pieces,
            panels,
            rounds,
        }
    }

    /// The branch value `I*_0`.
    pub fn base(&self) -> Complex64 {
        self.base
    }

    /// The winding multiplier `W = exp(2 pi i (z(b) - z(a)))`.
    pub fn winding(&self) -> Complex64 {
        self.winding
    }

    /// `z(b) - z(a)`.
    pub fn delta_z(&self) -> Complex64 {
        self.delta_z
    }

    /// True iff the whole family collapses to the single value `I*_0`.
    pub fn is_single_valued(&self) -> bool {
        self.single_valued
    }

    pub fn distinct_count(&self) -> DistinctCount {
        self.distinct
    }

    /// `I*_n = W^n I*_0`, built by repeated multiplication so that
    /// `value(n+1) = value(n) * W` holds exactly for `n >= 0` (and the
    /// mirrored identity for negative indices).
    pub fn value(&self, n: i64) -> Complex64 {
        let mut acc = self.base;
        if n >= 0 {
            for _ in 0..n {
                acc *= self.winding;
            }
        } else {
            let inv = self.winding.inv();
            for _ in 0..(-n) {
                acc *= inv;
            }
        }
        acc
    }

    /// The family over a symmetric index range.
    pub fn values(&self, bound: i64) -> Vec<(i64, Complex64)> {
        (-bound..=bound).map(|n| (n, self.value(n))).collect()
    }
}

fn distinct_count(delta_z: Complex64) -> DistinctCount {
    if delta_z.im.abs() > 1e-9 {
        return DistinctCount::CountablyInfinite;
    }
    let x = delta_z.re;
    if (x - x.round()).abs() <= 1e-9 {
        return DistinctCount::Finite(1);
    }
    match rational_approx(x, 64, 1e-9) {
        Some((_, q)) => DistinctCount::Finite(q),
        None => DistinctCount::CountablyInfinite,
    }
}

/// Best rational approximation `p/q` with `q <= max_den` and error at most
/// `tol`, via continued-fraction convergents (already in lowest terms).
fn rational_approx(x: f64, max_den: u64, tol: f64) -> Option<(i64, u64)> {
    let mut p_prev = 1.0f64;
    let mut q_prev = 0.0f64;
    let mut p = x.floor();
    let mut q = 1.0f64;
    let mut rest = x - x.floor();
    for _ in 0..64 {
        if q <= max_den as f64 && (p / q - x).abs() <= tol {
            return Some((p as i64, q as u64));
        }
        if rest.abs() < 1e-15 || q > max_den as f64 {
            return None;
        }
        let inv = 1.0 / rest;
        let a = inv.floor();
        rest = inv - a;
        let p_next = a * p + p_prev;
        let q_next = a * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        if !p.is_finite() || !q.is_finite() {
            return None;
        }
    }
    None
}

fn eval_f(f: &Expr, z: Complex64, t: f64) -> Result<Complex64, IntegralError> {
    let v = f.eval(&Binding::at(z))?;
    if v.norm() <= EPS_ZERO {
        return Err(IntegralError::Curve(CurveError::ZeroOnCurve { t }));
    }
    Ok(v)
}

fn principal_log(v: Complex64) -> Complex64 {
    Complex64::new(v.norm().ln(), v.arg())
}

/// Continuous branch values of `log f` at the half-plane cut parameters.
/// `anchors[k]` is the branch value at `cuts[k]`.
fn cut_anchors(
    f: &Expr,
    curve: &Curve,
    partition: &HalfPlanePartition,
    anchor: Complex64,
) -> Result<Vec<Complex64>, IntegralError> {
    let mut anchors = Vec::with_capacity(partition.cuts.len());
    anchors.push(anchor);
    let mut prev_value = eval_f(f, curve.point(partition.cuts[0])?, partition.cuts[0])?;
    let mut current = anchor;
    for &t in &partition.cuts[1..] {
        let value = eval_f(f, curve.point(t)?, t)?;
        current += principal_log(value / prev_value);
        anchors.push(current);
        prev_value = value;
    }
    Ok(anchors)
}

fn validate_anchor(f: &Expr, curve: &Curve, anchor: Complex64) -> Result<(), IntegralError> {
    let (a, _) = curve.param_range();
    let start_value = eval_f(f, curve.start(), a)?;
    let err = (anchor.exp() - start_value).norm();
    if err > 1e-9 * start_value.norm().max(1e-300) {
        return Err(IntegralError::AnchorMismatch { err });
    }
    Ok(())
}

/// Tracks a continuous branch of `log f(z(t))` along the curve, anchored at
/// the principal value `Log f(z(a))`.
pub fn track_log(f: &Expr, curve: &Curve, cfg: &QuadratureConfig) -> Result<BranchPath, IntegralError> {
    let partition = half_plane_partition(f, curve, DEFAULT_PARTITION_DEPTH)?;
    let (a, _) = curve.param_range();
    let anchor = principal_log(eval_f(f, curve.start(), a)?);
    track_log_partitioned(f, curve, cfg, &partition, anchor)
}

/// [`track_log`] with a caller-chosen anchor (any logarithm of `f(z(a))`).
pub fn track_log_anchored(
    f: &Expr,
    curve: &Curve,
    cfg: &QuadratureConfig,
    anchor: Complex64,
) -> Result<BranchPath, IntegralError> {
    let partition = half_plane_partition(f, curve, DEFAULT_PARTITION_DEPTH)?;
    track_log_partitioned(f, curve, cfg, &partition, anchor)
}

/// Tracking engine over an explicit partition.
pub fn track_log_partitioned(
    f: &Expr,
    curve: &Curve,
    cfg: &QuadratureConfig,
    partition: &HalfPlanePartition,
    anchor: Complex64,
) -> Result<BranchPath, IntegralError> {
    cfg.validate().map_err(IntegralError::BadConfig)?;
    validate_anchor(f, curve, anchor)?;
    let anchors = cut_anchors(f, curve, partition, anchor)?;
    // Node density scales with the configured panel count but stays modest:
    // the branch path is a certificate and a dump format, not the quadrature grid.
    let nodes_per_piece = cfg.panels.clamp(8, 128);
    let mut times = vec![partition.cuts[0]];
    let mut logf = vec![anchors[0]];
    for (k, (lo, hi)) in partition.intervals().enumerate() {
        let piece_anchor = anchors[k];
        let anchor_value = eval_f(f, curve.point(lo)?, lo)?;
        for j in 1..=nodes_per_piece {
            let t = lo + (hi - lo) * j as f64 / nodes_per_piece as f64;
            let value = eval_f(f, curve.point(t)?, t)?;
            times.push(t);
            logf.push(piece_anchor + principal_log(value / anchor_value));
        }
    }
    Ok(BranchPath {
        times,
        logf,
        anchor,
    })
}

/// Quadrature of `log f(z(t)) z'(t)` over the curve using the continuous
/// branch, interval by interval (intervals are the half-plane pieces cut
/// further at segment boundaries, where `z'` may jump).
fn log_integral(
    f: &Expr,
    curve: &Curve,
    cfg: &QuadratureConfig,
    partition: &HalfPlanePartition,
    anchors: &[Complex64],
) -> Result<(Complex64, usize, usize), IntegralError> {
    let intervals = merge_cut_points(&partition.cuts, curve.segment_bounds());
    let mut total = Complex64::new(0.0, 0.0);
    let mut max_panels = 0;
    let mut max_rounds = 0;
    for window in intervals.windows(2) {
        let (lo, hi) = (window[0], window[1]);
        let mid = 0.5 * (lo + hi);
        let piece = locate_piece(&partition.cuts, mid);
        let piece_lo = partition.cuts[piece];
        let piece_anchor = anchors[piece];
        let anchor_value = eval_f(f, curve.point(piece_lo)?, piece_lo)?;
        let mut integrand = |t: f64| -> Result<Complex64, IntegralError> {
            let z = curve.point(t)?;
            let dz = curve.velocity(t)?;
            let value = eval_f(f, z, t)?;
            let log_value = piece_anchor + principal_log(value / anchor_value);
            Ok(log_value * dz)
        };
        let refined = integrate_refining(&mut integrand, lo, hi, cfg)?;
        if !refined.converged {
            return Err(IntegralError::NoConvergence {
                tol: cfg.refine_tol,
                rounds: refined.rounds,
            });
        }
        total += refined.value;
        max_panels = max_panels.max(refined.panels);
        max_rounds = max_rounds.max(refined.rounds);
    }
    Ok((total, max_panels, max_rounds))
}

fn merge_cut_points(cuts: &[f64], bounds: &[f64]) -> Vec<f64> {
    let mut merged: Vec<f64> = cuts.iter().chain(bounds.iter()).copied().collect();
    merged.sort_by(|a, b| a.partial_cmp(b).expect("finite parameters"));
    merged.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    // clamp to the curve range covered by the cuts
    let lo = cuts[0];
    let hi = cuts[cuts.len() - 1];
    merged.retain(|t| *t >= lo - 1e-12 && *t <= hi + 1e-12);
    merged
}

fn locate_piece(cuts: &[f64], t: f64) -> usize {
    match cuts.binary_search_by(|probe| probe.partial_cmp(&t).expect("finite parameters")) {
        Ok(k) => k.min(cuts.len() - 2),
        Err(k) => k.saturating_sub(1).min(cuts.len() - 2),
    }
}

/// The complex *integral of `f` along the curve, anchored at the principal
/// logarithm of `f` at the start point.
pub fn complex_star_integral(
    f: &Expr,
    curve: &Curve,
    cfg: &QuadratureConfig,
) -> Result<MultiValueIntegral, IntegralError> {
    let partition = half_plane_partition(f, curve, DEFAULT_PARTITION_DEPTH)?;
    let (a, _) = curve.param_range();
    let anchor = principal_log(eval_f(f, curve.start(), a)?);
    complex_star_integral_partitioned(f, curve, cfg, &partition, anchor)
}

/// [`complex_star_integral`] with a caller-chosen anchor. Any valid anchor
/// produces a member of the same family `I*_n`.
pub fn complex_star_integral_anchored(
    f: &Expr,
    curve: &Curve,
    cfg: &QuadratureConfig,
    anchor: Complex64,
) -> Result<MultiValueIntegral, IntegralError> {
    let partition = half_plane_partition(f, curve, DEFAULT_PARTITION_DEPTH)?;
    complex_star_integral_partitioned(f, curve, cfg, &partition, anchor)
}

/// Integration engine over an explicit half-plane partition.
pub fn complex_star_integral_partitioned(
    f: &Expr,
    curve: &Curve,
    cfg: &QuadratureConfig,
    partition: &HalfPlanePartition,
    anchor: Complex64,
) -> Result<MultiValueIntegral, IntegralError> {
    cfg.validate().map_err(IntegralError::BadConfig)?;
    validate_anchor(f, curve, anchor)?;
    let anchors = cut_anchors(f, curve, partition, anchor)?;
    let (log_total, panels, rounds) = log_integral(f, curve, cfg, partition, &anchors)?;
    Ok(MultiValueIntegral::new(
        log_total.exp(),
        curve.endpoint_difference(),
        partition.pieces(),
        panels,
        rounds,
    ))
}

/// Outcome of one verification: compared values, errors, the branch index
/// that matched (if the check is membership-based), and a verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub name: String,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub matched_branch: Option<i64>,
    pub tolerance: f64,
    pub passed: bool,
}

fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Fundamental-theorem check: some branch value of `int_C (f*)^dz` must
/// equal `f(z(b))/f(z(a))` within `DEFAULT_VERIFY_TOL`.
///
/// Membership (rather than equality of `I*_0`) is the right statement: the
/// principal anchor may land the base value at a nonzero branch index.
pub fn verify_ftc_complex(
    f: &Expr,
    curve: &Curve,
    cfg: &QuadratureConfig,
) -> Result<VerificationReport, IntegralError> {
    let star = star_derivative_expr(f)?;
    let integral = complex_star_integral(&star, curve, cfg)?;
    let (a, b) = curve.param_range();
    let target = eval_f(f, curve.end(), b)? / eval_f(f, curve.start(), a)?;
    let mut best: Option<(i64, Complex64, f64)> = None;
    for n in -DEFAULT_BRANCH_BOUND..=DEFAULT_BRANCH_BOUND {
        let candidate = integral.value(n);
        let err = rel_err(candidate, target);
        if best.as_ref().is_none_or(|(_, _, e)| err < *e) {
            best = Some((n, candidate, err));
        }
    }
    let (n, lhs, err) = best.expect("branch range is nonempty");
    Ok(VerificationReport {
        name: "ftc".into(),
        lhs,
        rhs: target,
        abs_err: (lhs - target).norm(),
        rel_err: err,
        matched_branch: (err <= DEFAULT_VERIFY_TOL).then_some(n),
        tolerance: DEFAULT_VERIFY_TOL,
        passed: err <= DEFAULT_VERIFY_TOL,
    })
}

/// Closed-curve check: `oint_C (f*)^dz` must be single-valued and equal 1.
pub fn verify_closed(
    f: &Expr,
    curve: &Curve,
    cfg: &QuadratureConfig,
) -> Result<VerificationReport, IntegralError> {
    if !curve.is_closed() {
        return Err(IntegralError::NotClosed);
    }
    let star = star_derivative_expr(f)?;
    let integral = complex_star_integral(&star, curve, cfg)?;
    let one = Complex64::new(1.0, 0.0);
    let base = integral.base();
    let abs_err = (base - one).norm();
    Ok(VerificationReport {
        name: "closed".into(),
        lhs: base,
        rhs: one,
        abs_err,
        rel_err: abs_err,
        matched_branch: Some(0),
        tolerance: DEFAULT_VERIFY_TOL,
        passed: abs_err <= DEFAULT_VERIFY_TOL && integral.is_single_valued(),
    })
}

/// Path-splitting check: `I*_n(C) = I*_n(C1) I*_n(C2)` for `n` in `-2..=2`,
/// with the second piece's branch continued from the first piece's terminal
/// log value.
pub fn verify_concat(
    f: &Expr,
    curve: &Curve,
    split_at: f64,
    cfg: &QuadratureConfig,
) -> Result<VerificationReport, IntegralError> {
    let whole = complex_star_integral(f, curve, cfg)?;
    let (head, tail) = curve.split(split_at)?;
    let first = complex_star_integral(f, &head, cfg)?;
    let continued_anchor = track_log(f, &head, cfg)?.terminal();
    let second = complex_star_integral_anchored(f, &tail, cfg, continued_anchor)?;

    let mut worst: Option<(Complex64, Complex64, f64)> = None;
    for n in -2..=2 {
        let lhs = whole.value(n);
        let rhs = first.value(n) * second.value(n);
        let err = rel_err(lhs, rhs);
        if worst.as_ref().is_none_or(|(_, _, e)| err > *e) {
            worst = Some((lhs, rhs, err));
        }
    }
    let (lhs, rhs, err) = worst.expect("index range is nonempty");
    Ok(VerificationReport {
        name: "concat".into(),
        lhs,
        rhs,
        abs_err: (lhs - rhs).norm(),
        rel_err: err,
        matched_branch: None,
        tolerance: DEFAULT_VERIFY_TOL,
        passed: err <= DEFAULT_VERIFY_TOL,
    })
}

/// Product and division checks. Continuous branches of `log(fg)` and
/// `log f + log g` differ by a constant `2 pi i k`, so the integrals agree
/// up to a factor `W^k`; the report records the matched `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductDivisionReport {
    pub product: VerificationReport,
    pub division: VerificationReport,
}

pub fn verify_product_division(
    f: &Expr,
    g: &Expr,
    curve: &Curve,
    cfg: &QuadratureConfig,
) -> Result<ProductDivisionReport, IntegralError> {
    let int_f = complex_star_integral(f, curve, cfg)?;
    let int_g = complex_star_integral(g, curve, cfg)?;
    let int_fg = complex_star_integral(&Expr::mul(f.clone(), g.clone()), curve, cfg)?;
    let int_f_over_g = complex_star_integral(&Expr::div(f.clone(), g.clone()), curve, cfg)?;

    let product = branch_match_report(
        "product",
        int_fg.base(),
        int_f.base() * int_g.base(),
        int_fg.winding(),
    );
    let division = branch_match_report(
        "division",
        int_f_over_g.base(),
        int_f.base() / int_g.base(),
        int_f_over_g.winding(),
    );
    Ok(ProductDivisionReport { product, division })
}

/// Finds `k` with `|k| <= DEFAULT_BRANCH_BOUND` minimizing the relative
/// error of `lhs` against `W^k rhs`.
fn branch_match_report(
    name: &str,
    lhs: Complex64,
    rhs: Complex64,
    winding: Complex64,
) -> VerificationReport {
    let mut best: Option<(i64, Complex64, f64)> = None;
    for k in -DEFAULT_BRANCH_BOUND..=DEFAULT_BRANCH_BOUND {
        let shifted = rhs * pow_i(winding, k);
        let err = rel_err(lhs, shifted);
        if best.as_ref().is_none_or(|(_, _, e)| err < *e) {
            best = Some((k, shifted, err));
        }
    }
    let (k, shifted, err) = best.expect("branch range is nonempty");
    VerificationReport {
        name: name.into(),
        lhs,
        rhs: shifted,
        abs_err: (lhs - shifted).norm(),
        rel_err: err,
        matched_branch: (err <= DEFAULT_VERIFY_TOL).then_some(k),
        tolerance: DEFAULT_VERIFY_TOL,
        passed: err <= DEFAULT_VERIFY_TOL,
    }
}

fn pow_i(w: Complex64, k: i64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    if k >= 0 {
        for _ in 0..k {
            acc *= w;
        }
    } else {
        let inv = w.inv();
        for _ in 0..(-k) {
            acc *= inv;
        }
    }
    acc
}

/// Reversal check: with the reversed path anchored at the forward path's
/// terminal log value, `I*_n(C) I*_n(-C) = 1` for `n` in `-2..=2`.
pub fn verify_reverse(
    f: &Expr,
    curve: &Curve,
    cfg: &QuadratureConfig,
) -> Result<VerificationReport, IntegralError> {
    let forward = complex_star_integral(f, curve, cfg)?;
    let terminal = track_log(f, curve, cfg)?.terminal();
    let backward = complex_star_integral_anchored(f, &curve.reverse(), cfg, terminal)?;

    let tolerance = 1e-9;
    let one = Complex64::new(1.0, 0.0);
    let mut worst: Option<(Complex64, f64)> = None;
    for n in -2..=2 {
        let prod = forward.value(n) * backward.value(n);
        let err = (prod - one).norm();
        if worst.as_ref().is_none_or(|(_, e)| err > *e) {
            worst = Some((prod, err));
        }
    }
    let (lhs, err) = worst.expect("index range is nonempty");
    Ok(VerificationReport {
        name: "reverse".into(),
        lhs,
        rhs: one,
        abs_err: err,
        rel_err: err,
        matched_branch: None,
        tolerance,
        passed: err <= tolerance,
    })
}

/// Power containment check: every member of `(int_C f^dz)^n` must appear in
/// the family of `int_C (f^n)^dz`. Concretely, for each `m` in `-2..=2`,
/// `(W^m I*_0)^n` must match `W^m' I'*_0` for some `|m'| <= 5n + 5`.
pub fn verify_power(
    f: &Expr,
    curve: &Curve,
    n: u32,
    cfg: &QuadratureConfig,
) -> Result<VerificationReport, IntegralError> {
    if n > 3 {
        return Err(IntegralError::BadPower);
    }
    let base_integral = complex_star_integral(f, curve, cfg)?;
    let power_integral =
        complex_star_integral(&Expr::pow(f.clone(), n as i32), curve, cfg)?;

    let bound = 5 * n as i64 + 5;
    let mut worst: Option<(Complex64, Complex64, f64, i64)> = None;
    for m in -2..=2 {
        let target = pow_i(base_integral.value(m), n as i64);
        let mut best: Option<(i64, Complex64, f64)> = None;
        for mp in -bound..=bound {
            let candidate = power_integral.base() * pow_i(power_integral.winding(), mp);
            let err = rel_err(target, candidate);
            if best.as_ref().is_none_or(|(_, _, e)| err < *e) {
                best = Some((mp, candidate, err));
            }
        }
        let (mp, candidate, err) = best.expect("branch range is nonempty");
        if worst.as_ref().is_none_or(|(_, _, e, _)| err > *e) {
            worst = Some((target, candidate, err, mp));
        }
    }
    let (lhs, rhs, err, matched) = worst.expect("index range is nonempty");
    Ok(VerificationReport {
        name: format!("power(n={n})"),
        lhs,
        rhs,
        abs_err: (lhs - rhs).norm(),
        rel_err: err,
        matched_branch: (err <= DEFAULT_VERIFY_TOL).then_some(matched),
        tolerance: DEFAULT_VERIFY_TOL,
        passed: err <= DEFAULT_VERIFY_TOL,
    })
}
