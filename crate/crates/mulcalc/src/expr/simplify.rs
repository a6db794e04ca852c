//! Value-preserving local simplification of expression trees.
//!
//! Only rewrites that cannot change the evaluated result by more than one
//! rounding step per folded operation are applied: identity elimination
//! (`x+0`, `x*1`, `x*0`, `x/1`, `x^1`, `x^0`, double negation), constant
//! folding of field operations on literals, and `x+x -> 2*x`. Function
//! applications are never folded and structural cancellation (`x/x`, `x-x`)
//! is deliberately out of scope.

use num_complex::Complex64;

use super::Expr;

/// Simplifies bottom-up; the result evaluates identically to the input
/// (up to one ulp per folded literal operation) on every binding.
pub fn simplify(expr: &Expr) -> Expr {
    let node = match expr {
        Expr::Var | Expr::Lit(_) | Expr::Param(_) => expr.clone(),
        Expr::Add(a, b) => Expr::add(simplify(a), simplify(b)),
        Expr::Sub(a, b) => Expr::sub(simplify(a), simplify(b)),
        Expr::Mul(a, b) => Expr::mul(simplify(a), simplify(b)),
        Expr::Div(a, b) => Expr::div(simplify(a), simplify(b)),
        Expr::Neg(a) => Expr::neg(simplify(a)),
        Expr::Pow(a, n) => Expr::pow(simplify(a), *n),
        Expr::Exp(a) => Expr::exp(simplify(a)),
        Expr::Log(a) => Expr::log(simplify(a)),
        Expr::Sin(a) => Expr::sin(simplify(a)),
        Expr::Cos(a) => Expr::cos(simplify(a)),
        Expr::Conj(a) => Expr::Conj(Box::new(simplify(a))),
        Expr::Abs(a) => Expr::Abs(Box::new(simplify(a))),
        Expr::Re(a) => Expr::Re(Box::new(simplify(a))),
        Expr::Im(a) => Expr::Im(Box::new(simplify(a))),
    };
    rewrite_to_fixpoint(node)
}

fn rewrite_to_fixpoint(mut node: Expr) -> Expr {
    // Every rule strictly shrinks the tree, so this terminates quickly.
    loop {
        match rewrite(node) {
            (new, true) => node = new,
            (new, false) => return new,
        }
    }
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn is_lit(e: &Expr, v: Complex64) -> bool {
    matches!(e, Expr::Lit(c) if *c == v)
}

fn rewrite(node: Expr) -> (Expr, bool) {
    let out = match node {
        Expr::Add(a, b) => match (*a, *b) {
            (Expr::Lit(x), Expr::Lit(y)) => Expr::Lit(x + y),
            (a, b) if is_lit(&a, ZERO) => b,
            (a, b) if is_lit(&b, ZERO) => a,
            (a, b) if a == b => Expr::mul(Expr::real(2.0), a),
            (a, b) => return (Expr::add(a, b), false),
        },
        Expr::Sub(a, b) => match (*a, *b) {
            (Expr::Lit(x), Expr::Lit(y)) => Expr::Lit(x - y),
            (a, b) if is_lit(&b, ZERO) => a,
            (a, b) if is_lit(&a, ZERO) => Expr::neg(b),
            (a, b) => return (Expr::sub(a, b), false),
        },
        Expr::Mul(a, b) => match (*a, *b) {
            (Expr::Lit(x), Expr::Lit(y)) => Expr::Lit(x * y),
            (a, b) if is_lit(&a, ONE) => b,
            (a, b) if is_lit(&b, ONE) => a,
            (a, _) if is_lit(&a, ZERO) => Expr::Lit(ZERO),
            (_, b) if is_lit(&b, ZERO) => Expr::Lit(ZERO),
            (a, b) => return (Expr::mul(a, b), false),
        },
        Expr::Div(a, b) => match (*a, *b) {
            (Expr::Lit(x), Expr::Lit(y)) if y != ZERO => Expr::Lit(x / y),
            (a, b) if is_lit(&b, ONE) => a,
            (a, b) => return (Expr::div(a, b), false),
        },
        Expr::Neg(a) => match *a {
            Expr::Lit(x) => Expr::Lit(-x),
            Expr::Neg(inner) => *inner,
            a => return (Expr::neg(a), false),
        },
        Expr::Pow(a, n) => match (*a, n) {
            (a, 1) => a,
            (a, 0) if !is_lit(&a, ZERO) => Expr::real(1.0),
            (Expr::Lit(x), n) if x != ZERO || n > 0 => Expr::Lit(x.powi(n)),
            (a, n) => return (Expr::pow(a, n), false),
        },
        other => return (other, false),
    };
    (out, true)
}
