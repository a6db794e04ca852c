//! Symbolic complex differentiation of expression trees.

use thiserror::Error;

use super::Expr;

/// Raised when a tree contains a node with no complex derivative.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("not complex-differentiable: expression contains `{node}`")]
pub struct DiffError {
    /// Name of the offending node kind.
    pub node: &'static str,
}

/// Returns the derivative of `expr` with respect to its free variable.
///
/// `conj`, `abs`, `re` and `im` are rejected anywhere in the tree, even in
/// subtrees that cancel, because none of them is complex-differentiable.
/// `Log` differentiates as `u'/u`, which is branch-independent.
///
/// The result is not simplified; pass it through [`super::simplify`].
pub fn differentiate(expr: &Expr) -> Result<Expr, DiffError> {
    if let Some(node) = first_non_holomorphic(expr) {
        return Err(DiffError { node });
    }
    Ok(d(expr))
}

fn first_non_holomorphic(expr: &Expr) -> Option<&'static str> {
    match expr {
        Expr::Conj(_) => Some("conj"),
        Expr::Abs(_) => Some("abs"),
        Expr::Re(_) => Some("re"),
        Expr::Im(_) => Some("im"),
        Expr::Var | Expr::Lit(_) | Expr::Param(_) => None,
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            first_non_holomorphic(a).or_else(|| first_non_holomorphic(b))
        }
        Expr::Neg(a)
        | Expr::Pow(a, _)
        | Expr::Exp(a)
        | Expr::Log(a)
        | Expr::Sin(a)
        | Expr::Cos(a) => first_non_holomorphic(a),
    }
}

fn d(expr: &Expr) -> Expr {
    match expr {
        Expr::Var => Expr::real(1.0),
        Expr::Lit(_) | Expr::Param(_) => Expr::real(0.0),
        Expr::Add(a, b) => Expr::add(d(a), d(b)),
        Expr::Sub(a, b) => Expr::sub(d(a), d(b)),
        Expr::Mul(a, b) => Expr::add(
            Expr::mul(d(a), (**b).clone()),
            Expr::mul((**a).clone(), d(b)),
        ),
        Expr::Div(a, b) => Expr::div(
            Expr::sub(
                Expr::mul(d(a), (**b).clone()),
                Expr::mul((**a).clone(), d(b)),
            ),
            Expr::pow((**b).clone(), 2),
        ),
        Expr::Neg(a) => Expr::neg(d(a)),
        Expr::Pow(a, n) => {
            if *n == 0 {
                return Expr::real(0.0);
            }
            Expr::mul(
                Expr::mul(Expr::real(f64::from(*n)), Expr::pow((**a).clone(), n - 1)),
                d(a),
            )
        }
        Expr::Exp(a) => Expr::mul(d(a), Expr::exp((**a).clone())),
        Expr::Log(a) => Expr::div(d(a), (**a).clone()),
        Expr::Sin(a) => Expr::mul(d(a), Expr::cos((**a).clone())),
        Expr::Cos(a) => Expr::neg(Expr::mul(d(a), Expr::sin((**a).clone()))),
        Expr::Conj(_) | Expr::Abs(_) | Expr::Re(_) | Expr::Im(_) => {
            unreachable!("rejected before differentiation")
        }
    }
}
