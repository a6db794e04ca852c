//! Composite Gauss-Legendre quadrature with panel doubling.
//!
//! All *integrals in this crate reduce to ordinary integrals of a logarithm;
//! convergence is always declared on that log-integral, never on the
//! exponentiated value, because `exp` amplifies absolute error. Panels are
//! summed in a fixed order so results are bit-reproducible for a given
//! configuration.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Controls the composite quadrature used by the integral operations.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    /// Starting number of panels per quadrature interval.
    pub panels: usize,
    /// Gauss-Legendre order per panel.
    pub gauss_order: usize,
    /// Relative tolerance on the change of the log-integral under doubling.
    pub refine_tol: f64,
    /// Maximum number of panel doublings before giving up.
    pub max_rounds: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            panels: 64,
            gauss_order: 16,
            refine_tol: 1e-10,
            max_rounds: 12,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), &'static str> {
        if self.panels == 0 || self.gauss_order < 2 || self.max_rounds == 0 {
            return Err("panels, gauss order and max rounds must be positive");
        }
        if self.refine_tol.is_nan() || self.refine_tol <= 0.0 {
            return Err("refine tolerance must be positive");
        }
        Ok(())
    }
}

/// Value types the quadrature driver can accumulate.
pub trait QuadValue:
    Copy
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> f64 {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for num_complex::Complex64 {
    fn zero() -> Self {
        num_complex::Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// A Gauss-Legendre rule on `[-1, 1]`, nodes ascending.
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    /// Computes nodes and weights by Newton iteration on the Legendre
    /// recurrence. `order` must be at least 2.
    pub fn compute(order: usize) -> GaussRule {
        assert!(order >= 2, "Gauss order must be at least 2");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        GaussRule { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integrates `f` over `[a, b]` with a single panel.
    pub fn integrate_panel<T: QuadValue, E>(
        &self,
        f: &mut impl FnMut(f64) -> Result<T, E>,
        a: f64,
        b: f64,
    ) -> Result<T, E> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x)? * (w * half);
        }
        Ok(acc)
    }

    /// Integrates `f` over `[a, b]` split into `panels` equal panels,
    /// summed left to right.
    pub fn integrate_panels<T: QuadValue, E>(
        &self,
        f: &mut impl FnMut(f64) -> Result<T, E>,
        a: f64,
        b: f64,
        panels: usize,
    ) -> Result<T, E> {
        let width = (b - a) / panels as f64;
        let mut acc = T::zero();
        for k in 0..panels {
            let lo = a + width * k as f64;
            let hi = if k + 1 == panels { b } else { lo + width };
            acc = acc + self.integrate_panel(f, lo, hi)?;
        }
        Ok(acc)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Returns a cached rule of the given order.
pub fn gauss_legendre(order: usize) -> Arc<GaussRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("rule cache poisoned");
    map.entry(order)
        .or_insert_with(|| Arc::new(GaussRule::compute(order)))
        .clone()
}

/// Outcome of panel doubling on one interval.
#[derive(Debug, Clone, Copy)]
pub struct Refined<T> {
    pub value: T,
    /// Panels used by the accepted estimate.
    pub panels: usize,
    /// Doubling rounds performed.
    pub rounds: usize,
    /// Whether the change under the last doubling met the tolerance.
    pub converged: bool,
}

/// Integrates over `[a, b]`, doubling the panel count until the estimate
/// changes by at most `refine_tol` relative to `max(1, |estimate|)`, or the
/// round budget is exhausted (reported via `converged`).
pub fn integrate_refining<T: QuadValue, E>(
    f: &mut impl FnMut(f64) -> Result<T, E>,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<Refined<T>, E> {
    let rule = gauss_legendre(cfg.gauss_order);
    let mut panels = cfg.panels.max(1);
    let mut value = rule.integrate_panels(f, a, b, panels)?;
    for round in 1..=cfg.max_rounds {
        let next_panels = panels * 2;
        let next = rule.integrate_panels(f, a, b, next_panels)?;
        let change = (next - value).magnitude();
        let scale = next.magnitude().max(1.0);
        value = next;
        panels = next_panels;
        if change <= cfg.refine_tol * scale {
            return Ok(Refined {
                value,
                panels,
                rounds: round,
                converged: true,
            });
        }
    }
    Ok(Refined {
        value,
        panels,
        rounds: cfg.max_rounds,
        converged: false,
    })
}
