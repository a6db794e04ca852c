//! Piecewise-smooth parametric curves in the complex plane.
//!
//! A [`Curve`] is an ordered list of [`CurveSegment`]s whose endpoints match
//! within [`JUNCTION_TOL`]. Lines and arcs carry closed-form `z(t)` and
//! `z'(t)`; expression segments evaluate `x(t)`, `y(t)` through the
//! expression engine and differentiate by central differences. The global
//! curve parameter is the concatenation of the per-segment parameters, so a
//! single-arc circle is parametrized by its own angle.
//!
//! [`half_plane_partition`] cuts the parameter interval so that the values
//! of a nonvanishing function along each piece stay inside an open half
//! plane bounded by a line through the origin; the cut list is what makes a
//! continuous logarithm trackable along the whole curve.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{parse_with_variable, Binding, EvalError, Expr};
use crate::mult_deriv::EPS_ZERO;
use crate::quadrature::gauss_legendre;

/// Tolerance for endpoint continuity and closedness checks.
pub const JUNCTION_TOL: f64 = 1e-12;

/// Default bisection depth for [`half_plane_partition`].
pub const DEFAULT_PARTITION_DEPTH: u32 = 40;

/// Probes per candidate piece when certifying argument variation.
const PIECE_PROBES: usize = 33;

/// Relative step for central differencing of expression segments.
const EXPR_DERIV_STEP: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("curve needs at least one segment")]
    Empty,
    #[error("segment {0} has zero length")]
    ZeroLength(usize),
    #[error("segments {index} and {} do not join: gap {gap:e}", index + 1)]
    Discontinuity { index: usize, gap: f64 },
    #[error("curves do not join: gap {gap:e}")]
    JunctionMismatch { gap: f64 },
    #[error("malformed curve spec: {0}")]
    MalformedSpec(String),
    #[error("segment parameter range must satisfy t0 < t1")]
    BadRange,
    #[error("arc needs a positive radius and distinct angles")]
    BadArc,
    #[error("segment expression failed to evaluate: {0}")]
    Eval(#[from] EvalError),
    #[error("expression segment produced a non-real coordinate at t = {t}")]
    NonRealCoordinate { t: f64 },
    #[error("expression segment is not continuously differentiable near t = {t}")]
    NotSmooth { t: f64 },
    #[error("parameter {t} outside curve range [{a}, {b}]")]
    OutOfRange { t: f64, a: f64, b: f64 },
    #[error("split point must be strictly inside the curve range")]
    BadSplit,
    #[error("zero on curve: |f(z(t))| <= {EPS_ZERO} at t = {t}")]
    ZeroOnCurve { t: f64 },
    #[error("cannot certify half-plane pieces within depth {max_depth}: f oscillates too fast or nearly vanishes on the curve")]
    PartitionDepthExceeded { max_depth: u32 },
}

/// One smooth piece of a curve, with its own parameter interval.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveSegment {
    /// Straight segment `z(t) = from + t (to - from)` on `t in [0, 1]`.
    Line { from: Complex64, to: Complex64 },
    /// Circular arc traversed from `theta0` to `theta1` (either direction);
    /// parametrized by angle, so the local interval is the sorted pair.
    Arc {
        center: Complex64,
        radius: f64,
        theta0: f64,
        theta1: f64,
    },
    /// `z(t) = x(t) + i y(t)` on `[t0, t1]`, with `x`, `y` expression trees
    /// over the real variable `t`. `reversed` runs the parameter backwards.
    Expr {
        x: Expr,
        y: Expr,
        t0: f64,
        t1: f64,
        reversed: bool,
    },
}

impl CurveSegment {
    pub fn line(from: Complex64, to: Complex64) -> CurveSegment {
        CurveSegment::Line { from, to }
    }

    pub fn arc(center: Complex64, radius: f64, theta0: f64, theta1: f64) -> CurveSegment {
        CurveSegment::Arc {
            center,
            radius,
            theta0,
            theta1,
        }
    }

    /// Local parameter interval `(t0, t1)`, always increasing.
    pub fn local_range(&self) -> (f64, f64) {
        match self {
            CurveSegment::Line { .. } => (0.0, 1.0),
            CurveSegment::Arc { theta0, theta1, .. } => {
                (theta0.min(*theta1), theta0.max(*theta1))
            }
            CurveSegment::Expr { t0, t1, .. } => (*t0, *t1),
        }
    }

    pub fn span(&self) -> f64 {
        let (a, b) = self.local_range();
        b - a
    }

    /// Point at local parameter `t`.
    pub fn point(&self, t: f64) -> Result<Complex64, CurveError> {
        match self {
            CurveSegment::Line { from, to } => Ok(from + (to - from) * t),
            CurveSegment::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => {
                let angle = if theta0 <= theta1 { t } else { theta0 + theta1 - t };
                Ok(center + Complex64::from_polar(*radius, angle))
            }
            CurveSegment::Expr {
                x, y, t0, t1, reversed,
            } => {
                let u = if *reversed { t0 + t1 - t } else { t };
                eval_coords(x, y, u)
            }
        }
    }

    /// Velocity `z'(t)` at local parameter `t`; exact for lines and arcs,
    /// central difference for expression segments.
    pub fn velocity(&self, t: f64) -> Result<Complex64, CurveError> {
        match self {
            CurveSegment::Line { from, to } => Ok(to - from),
            CurveSegment::Arc {
                center: _,
                radius,
                theta0,
                theta1,
            } => {
                let i = Complex64::new(0.0, 1.0);
                if theta0 <= theta1 {
                    Ok(i * Complex64::from_polar(*radius, t))
                } else {
                    Ok(-i * Complex64::from_polar(*radius, theta0 + theta1 - t))
                }
            }
            CurveSegment::Expr {
                x, y, t0, t1, reversed,
            } => {
                let u = if *reversed { t0 + t1 - t } else { t };
                let h = (t1 - t0) * EXPR_DERIV_STEP;
                let fwd = eval_coords(x, y, u + h)?;
                let bwd = eval_coords(x, y, u - h)?;
                let v = (fwd - bwd) / (2.0 * h);
                Ok(if *reversed { -v } else { v })
            }
        }
    }

    pub fn start(&self) -> Result<Complex64, CurveError> {
        self.point(self.local_range().0)
    }

    pub fn end(&self) -> Result<Complex64, CurveError> {
        self.point(self.local_range().1)
    }

    /// The same point set traversed the other way.
    pub fn reversed(&self) -> CurveSegment {
        match self {
            CurveSegment::Line { from, to } => CurveSegment::Line {
                from: *to,
                to: *from,
            },
            CurveSegment::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => CurveSegment::Arc {
                center: *center,
                radius: *radius,
                theta0: *theta1,
                theta1: *theta0,
            },
            CurveSegment::Expr {
                x, y, t0, t1, reversed,
            } => CurveSegment::Expr {
                x: x.clone(),
                y: y.clone(),
                t0: *t0,
                t1: *t1,
                reversed: !reversed,
            },
        }
    }

    fn validate(&self, index: usize) -> Result<(), CurveError> {
        match self {
            CurveSegment::Line { from, to } => {
                if (from - to).norm() <= JUNCTION_TOL {
                    return Err(CurveError::ZeroLength(index));
                }
            }
            CurveSegment::Arc { radius, theta0, theta1, .. } => {
                if radius.is_nan() || *radius <= 0.0 || theta0 == theta1 {
                    return Err(CurveError::BadArc);
                }
            }
            CurveSegment::Expr { t0, t1, .. } => {
                if t0.is_nan() || t1.is_nan() || t0 >= t1 {
                    return Err(CurveError::BadRange);
                }
                self.check_smoothness()?;
            }
        }
        Ok(())
    }

    /// Finite-difference consistency probe: the derivative estimates at two
    /// step sizes must agree at interior sample points.
    fn check_smoothness(&self) -> Result<(), CurveError> {
        let CurveSegment::Expr { x, y, t0, t1, .. } = self else {
            return Ok(());
        };
        let span = t1 - t0;
        let h1 = span * 1e-5;
        for k in 1..=9 {
            let t = t0 + span * (k as f64) / 10.0;
            let d = |h: f64| -> Result<Complex64, CurveError> {
                Ok((eval_coords(x, y, t + h)? - eval_coords(x, y, t - h)?) / (2.0 * h))
            };
            let d1 = d(h1)?;
            let d2 = d(h1 / 2.0)?;
            if (d1 - d2).norm() > 1e-3 * (1.0 + d2.norm()) {
                return Err(CurveError::NotSmooth { t });
            }
        }
        Ok(())
    }
}

fn eval_coords(x: &Expr, y: &Expr, t: f64) -> Result<Complex64, CurveError> {
    let binding = Binding::at(Complex64::new(t, 0.0));
    let xv = x.eval(&binding)?;
    let yv = y.eval(&binding)?;
    if xv.im.abs() > 1e-9 || yv.im.abs() > 1e-9 {
        return Err(CurveError::NonRealCoordinate { t });
    }
    Ok(Complex64::new(xv.re, yv.re))
}

/// A sampled point: global parameter, position, velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint {
    pub t: f64,
    pub z: Complex64,
    pub dz: Complex64,
}

/// Piecewise-smooth curve with a continuous global parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    segments: Vec<CurveSegment>,
    /// Global parameter at each segment boundary; `len = segments + 1`.
    bounds: Vec<f64>,
    start: Complex64,
    end: Complex64,
    closed: bool,
}

impl Curve {
    /// Builds a curve, checking segment validity and endpoint continuity.
    pub fn new(segments: Vec<CurveSegment>) -> Result<Curve, CurveError> {
        if segments.is_empty() {
            return Err(CurveError::Empty);
        }
        for (index, seg) in segments.iter().enumerate() {
            seg.validate(index)?;
        }
        for index in 0..segments.len() - 1 {
            let gap = (segments[index].end()? - segments[index + 1].start()?).norm();
            if gap > JUNCTION_TOL {
                return Err(CurveError::Discontinuity { index, gap });
            }
        }
        let mut bounds = Vec::with_capacity(segments.len() + 1);
        let mut t = segments[0].local_range().0;
        bounds.push(t);
        for seg in &segments {
            t += seg.span();
            bounds.push(t);
        }
        let start = segments[0].start()?;
        let end = segments[segments.len() - 1].end()?;
        let closed = (end - start).norm() <= JUNCTION_TOL;
        Ok(Curve {
            segments,
            bounds,
            start,
            end,
            closed,
        })
    }

    /// Parses the JSON curve spec:
    ///
    /// ```json
    /// {"segments":[
    ///   {"kind":"line","from":[0,0],"to":[1,1]},
    ///   {"kind":"arc","center":[0,0],"radius":1,"theta":[-3.14,3.14]},
    ///   {"kind":"expr","x":"t","y":"t^2","t":[0,1]}
    /// ]}
    /// ```
    pub fn from_spec(json: &str) -> Result<Curve, CurveError> {
        let spec: CurveSpec =
            serde_json::from_str(json).map_err(|e| CurveError::MalformedSpec(e.to_string()))?;
        let mut segments = Vec::with_capacity(spec.segments.len());
        for seg in spec.segments {
            segments.push(seg.into_segment()?);
        }
        Curve::new(segments)
    }

    /// Serializes back to the JSON spec format.
    pub fn to_spec(&self) -> String {
        let spec = CurveSpec {
            segments: self.segments.iter().map(SegmentSpec::from_segment).collect(),
        };
        serde_json::to_string(&spec).expect("curve spec serialization cannot fail")
    }

    pub fn line(from: Complex64, to: Complex64) -> Result<Curve, CurveError> {
        Curve::new(vec![CurveSegment::line(from, to)])
    }

    pub fn arc(
        center: Complex64,
        radius: f64,
        theta0: f64,
        theta1: f64,
    ) -> Result<Curve, CurveError> {
        Curve::new(vec![CurveSegment::arc(center, radius, theta0, theta1)])
    }

    /// Positively oriented unit circle, parametrized by angle from `-pi`
    /// to `pi`; starts and ends at `-1`.
    pub fn unit_circle() -> Curve {
        Curve::arc(
            Complex64::new(0.0, 0.0),
            1.0,
            -std::f64::consts::PI,
            std::f64::consts::PI,
        )
        .expect("unit circle is a valid curve")
    }

    /// Polyline through the given vertices.
    pub fn polyline(vertices: &[Complex64]) -> Result<Curve, CurveError> {
        if vertices.len() < 2 {
            return Err(CurveError::Empty);
        }
        let segments = vertices
            .windows(2)
            .map(|w| CurveSegment::line(w[0], w[1]))
            .collect();
        Curve::new(segments)
    }

    /// Positively oriented boundary of an axis-aligned rectangle.
    pub fn rectangle_boundary(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Curve, CurveError> {
        let c = |x: f64, y: f64| Complex64::new(x, y);
        Curve::polyline(&[c(x0, y0), c(x1, y0), c(x1, y1), c(x0, y1), c(x0, y0)])
    }

    pub fn segments(&self) -> &[CurveSegment] {
        &self.segments
    }

    /// Global parameter values at the segment boundaries (including both
    /// curve endpoints).
    pub fn segment_bounds(&self) -> &[f64] {
        &self.bounds
    }

    pub fn param_range(&self) -> (f64, f64) {
        (self.bounds[0], self.bounds[self.bounds.len() - 1])
    }

    pub fn start(&self) -> Complex64 {
        self.start
    }

    pub fn end(&self) -> Complex64 {
        self.end
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// `z(b) - z(a)`.
    pub fn endpoint_difference(&self) -> Complex64 {
        self.end - self.start
    }

    /// Locates the segment containing global parameter `t` and maps to the
    /// segment's local parameter.
    fn locate(&self, t: f64) -> Result<(usize, f64), CurveError> {
        let (a, b) = self.param_range();
        if t < a - 1e-12 || t > b + 1e-12 {
            return Err(CurveError::OutOfRange { t, a, b });
        }
        let t = t.clamp(a, b);
        let mut index = match self
            .bounds
            .binary_search_by(|probe| probe.partial_cmp(&t).expect("finite parameter"))
        {
            Ok(k) => k,
            Err(k) => k.saturating_sub(1),
        };
        if index >= self.segments.len() {
            index = self.segments.len() - 1;
        }
        let local = self.segments[index].local_range().0 + (t - self.bounds[index]);
        Ok((index, local))
    }

    pub fn point(&self, t: f64) -> Result<Complex64, CurveError> {
        let (index, local) = self.locate(t)?;
        self.segments[index].point(local)
    }

    pub fn velocity(&self, t: f64) -> Result<Complex64, CurveError> {
        let (index, local) = self.locate(t)?;
        self.segments[index].velocity(local)
    }

    /// Uniform per-segment sampling with `points_per_segment >= 2` points,
    /// endpoints included.
    pub fn sample(&self, points_per_segment: usize) -> Result<Vec<SamplePoint>, CurveError> {
        assert!(points_per_segment >= 2, "need at least two points per segment");
        let mut out = Vec::with_capacity(self.segments.len() * points_per_segment);
        for (k, seg) in self.segments.iter().enumerate() {
            let (lo, hi) = seg.local_range();
            for j in 0..points_per_segment {
                let frac = j as f64 / (points_per_segment - 1) as f64;
                let local = lo + (hi - lo) * frac;
                out.push(SamplePoint {
                    t: self.bounds[k] + (local - lo),
                    z: seg.point(local)?,
                    dz: seg.velocity(local)?,
                });
            }
        }
        Ok(out)
    }

    /// The curve with opposite orientation.
    pub fn reverse(&self) -> Curve {
        let segments: Vec<CurveSegment> =
            self.segments.iter().rev().map(CurveSegment::reversed).collect();
        Curve::new(segments).expect("reversal preserves validity")
    }

    /// Joins two curves; the first must end where the second starts.
    pub fn concat(first: &Curve, second: &Curve) -> Result<Curve, CurveError> {
        let gap = (first.end() - second.start()).norm();
        if gap > JUNCTION_TOL {
            return Err(CurveError::JunctionMismatch { gap });
        }
        let mut segments = first.segments.clone();
        segments.extend(second.segments.iter().cloned());
        Curve::new(segments)
    }

    /// Splits at global parameter `t`, strictly inside the range.
    pub fn split(&self, t: f64) -> Result<(Curve, Curve), CurveError> {
        let (a, b) = self.param_range();
        if !(t > a && t < b) {
            return Err(CurveError::BadSplit);
        }
        let (index, local) = self.locate(t)?;
        let seg = &self.segments[index];
        let (lo, hi) = seg.local_range();
        let mut head: Vec<CurveSegment> = self.segments[..index].to_vec();
        let mut tail: Vec<CurveSegment> = Vec::new();
        if local - lo <= 1e-12 {
            // split lands on the boundary between index-1 and index
            tail.push(seg.clone());
        } else if hi - local <= 1e-12 {
            head.push(seg.clone());
        } else {
            let (first, second) = split_segment(seg, local)?;
            head.push(first);
            tail.push(second);
        }
        tail.extend_from_slice(&self.segments[index + 1..]);
        Ok((Curve::new(head)?, Curve::new(tail)?))
    }

    /// Arc length by per-segment quadrature of `|z'(t)|`.
    pub fn length(&self) -> Result<f64, CurveError> {
        let rule = gauss_legendre(32);
        let mut total = 0.0;
        for seg in &self.segments {
            let (lo, hi) = seg.local_range();
            let mut f = |t: f64| seg.velocity(t).map(|v| v.norm());
            total += rule.integrate_panels(&mut f, lo, hi, 64)?;
        }
        Ok(total)
    }
}

fn split_segment(
    seg: &CurveSegment,
    local: f64,
) -> Result<(CurveSegment, CurveSegment), CurveError> {
    match seg {
        CurveSegment::Line { from, to } => {
            let mid = from + (to - from) * local;
            Ok((
                CurveSegment::Line { from: *from, to: mid },
                CurveSegment::Line { from: mid, to: *to },
            ))
        }
        CurveSegment::Arc {
            center,
            radius,
            theta0,
            theta1,
        } => {
            let angle = if theta0 <= theta1 {
                local
            } else {
                theta0 + theta1 - local
            };
            Ok((
                CurveSegment::arc(*center, *radius, *theta0, angle),
                CurveSegment::arc(*center, *radius, angle, *theta1),
            ))
        }
        CurveSegment::Expr {
            x, y, t0, t1, reversed,
        } => {
            let u = if *reversed { t0 + t1 - local } else { local };
            let make = |a: f64, b: f64| CurveSegment::Expr {
                x: x.clone(),
                y: y.clone(),
                t0: a,
                t1: b,
                reversed: *reversed,
            };
            if *reversed {
                Ok((make(u, *t1), make(*t0, u)))
            } else {
                Ok((make(*t0, u), make(u, *t1)))
            }
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CurveSpec {
    segments: Vec<SegmentSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum SegmentSpec {
    Line {
        from: [f64; 2],
        to: [f64; 2],
    },
    Arc {
        center: [f64; 2],
        radius: f64,
        theta: [f64; 2],
    },
    Expr {
        x: String,
        y: String,
        t: [f64; 2],
    },
}

impl SegmentSpec {
    fn into_segment(self) -> Result<CurveSegment, CurveError> {
        Ok(match self {
            SegmentSpec::Line { from, to } => CurveSegment::Line {
                from: Complex64::new(from[0], from[1]),
                to: Complex64::new(to[0], to[1]),
            },
            SegmentSpec::Arc {
                center,
                radius,
                theta,
            } => CurveSegment::Arc {
                center: Complex64::new(center[0], center[1]),
                radius,
                theta0: theta[0],
                theta1: theta[1],
            },
            SegmentSpec::Expr { x, y, t } => CurveSegment::Expr {
                x: parse_with_variable(&x, "t")
                    .map_err(|e| CurveError::MalformedSpec(e.to_string()))?,
                y: parse_with_variable(&y, "t")
                    .map_err(|e| CurveError::MalformedSpec(e.to_string()))?,
                t0: t[0],
                t1: t[1],
                reversed: false,
            },
        })
    }

    fn from_segment(seg: &CurveSegment) -> SegmentSpec {
        match seg {
            CurveSegment::Line { from, to } => SegmentSpec::Line {
                from: [from.re, from.im],
                to: [to.re, to.im],
            },
            CurveSegment::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => SegmentSpec::Arc {
                center: [center.re, center.im],
                radius: *radius,
                theta: [*theta0, *theta1],
            },
            CurveSegment::Expr {
                x, y, t0, t1, reversed,
            } => {
                // Reversal is rendered by swapping the reported range; the
                // spec format has no reversed flag.
                let (x, y) = (x.render_with_variable("t"), y.render_with_variable("t"));
                if *reversed {
                    SegmentSpec::Expr { x, y, t: [*t1, *t0] }
                } else {
                    SegmentSpec::Expr { x, y, t: [*t0, *t1] }
                }
            }
        }
    }
}

/// A certified cut of the parameter interval: on each piece the values of
/// `f` along the curve stay inside the open half plane
/// `{w : Re(conj(witness) w) > 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfPlanePartition {
    /// Cut parameters `t_0 = a < t_1 < ... < t_m = b`.
    pub cuts: Vec<f64>,
    /// Unit witness direction per piece (`cuts.len() - 1` entries).
    pub witnesses: Vec<Complex64>,
}

impl HalfPlanePartition {
    pub fn pieces(&self) -> usize {
        self.witnesses.len()
    }

    /// Piece intervals as `(start, end)` pairs.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.cuts.windows(2).map(|w| (w[0], w[1]))
    }

    /// Splits every piece at its midpoint; a refinement of a valid
    /// partition stays valid.
    pub fn refine_midpoints(
        &self,
        f: &Expr,
        curve: &Curve,
    ) -> Result<HalfPlanePartition, CurveError> {
        let mut cuts = Vec::with_capacity(self.cuts.len() * 2 - 1);
        let mut witnesses = Vec::with_capacity(self.witnesses.len() * 2);
        for (lo, hi) in self.intervals() {
            let mid = 0.5 * (lo + hi);
            cuts.push(lo);
            cuts.push(mid);
            witnesses.push(witness_at(f, curve, 0.5 * (lo + mid))?);
            witnesses.push(witness_at(f, curve, 0.5 * (mid + hi))?);
        }
        cuts.push(self.cuts[self.cuts.len() - 1]);
        Ok(HalfPlanePartition { cuts, witnesses })
    }
}

fn witness_at(f: &Expr, curve: &Curve, t: f64) -> Result<Complex64, CurveError> {
    let v = f.eval(&Binding::at(curve.point(t)?))?;
    if v.norm() <= EPS_ZERO {
        return Err(CurveError::ZeroOnCurve { t });
    }
    Ok(v / v.norm())
}

/// Cuts the curve parameter so that on each piece the total variation of
/// the (unwrapped) argument of `f(z(t))` over a dense probe grid is below
/// `pi/2`. That certifies the half-plane property with the probe midpoint
/// direction as witness. Pieces are found by bisection from the whole
/// interval, at most `max_depth` levels deep.
pub fn half_plane_partition(
    f: &Expr,
    curve: &Curve,
    max_depth: u32,
) -> Result<HalfPlanePartition, CurveError> {
    let (a, b) = curve.param_range();
    let mut cuts = vec![a];
    let mut witnesses = Vec::new();
    bisect(f, curve, a, b, max_depth, &mut cuts, &mut witnesses)?;
    cuts.push(b);
    // interior cut values were pushed by the recursion in order
    Ok(HalfPlanePartition { cuts, witnesses })
}

fn bisect(
    f: &Expr,
    curve: &Curve,
    lo: f64,
    hi: f64,
    depth_left: u32,
    cuts: &mut Vec<f64>,
    witnesses: &mut Vec<Complex64>,
) -> Result<(), CurveError> {
    if piece_is_certified(f, curve, lo, hi)? {
        witnesses.push(witness_at(f, curve, 0.5 * (lo + hi))?);
        return Ok(());
    }
    if depth_left == 0 {
        return Err(CurveError::PartitionDepthExceeded {
            max_depth: DEFAULT_PARTITION_DEPTH,
        });
    }
    let mid = 0.5 * (lo + hi);
    bisect(f, curve, lo, mid, depth_left - 1, cuts, witnesses)?;
    cuts.push(mid);
    bisect(f, curve, mid, hi, depth_left - 1, cuts, witnesses)
}

/// Total variation of the unwrapped argument over the probe grid must stay
/// strictly below `pi/2`.
fn piece_is_certified(f: &Expr, curve: &Curve, lo: f64, hi: f64) -> Result<bool, CurveError> {
    let mut previous: Option<Complex64> = None;
    let mut variation = 0.0;
    for k in 0..PIECE_PROBES {
        let t = lo + (hi - lo) * k as f64 / (PIECE_PROBES - 1) as f64;
        let v = f.eval(&Binding::at(curve.point(t)?))?;
        if v.norm() <= EPS_ZERO {
            return Err(CurveError::ZeroOnCurve { t });
        }
        if let Some(prev) = previous {
            variation += (v / prev).arg().abs();
        }
        previous = Some(v);
    }
    Ok(variation < std::f64::consts::FRAC_PI_2)
}
