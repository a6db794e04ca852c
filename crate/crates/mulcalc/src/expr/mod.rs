//! Expression trees for complex-valued functions of one complex variable.
//!
//! An [`Expr`] is an immutable AST over the single free variable (written `z`
//! in source text by default), complex literals, named single-letter
//! parameters, field operations, and a fixed function set (`exp`, `Log`,
//! `sin`, `cos`, `conj`, `abs`, `re`, `im`). `Log` always denotes the
//! principal branch, `Log z = ln|z| + i Arg z` with `Arg z` in `(-pi, pi]`.
//!
//! Trees are produced by [`parse`], evaluated against a [`Binding`],
//! differentiated symbolically with [`differentiate`] and tidied with
//! [`simplify`]. All values are immutable after construction, so expressions
//! can be shared freely across threads.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

mod deriv;
mod parser;
mod simplify;

pub use deriv::{differentiate, DiffError};
pub use parser::{parse, parse_with_variable, ParseError, ParseErrorKind};
pub use simplify::simplify;

/// Node of an immutable expression tree.
///
/// Binary operators hold exactly two children, functions one, leaves none.
/// `Pow` is restricted to integer exponents; a general power `w^c` is
/// written `exp(c*Log(w))` in source form.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// The free variable of the expression.
    Var,
    /// A complex constant.
    Lit(Complex64),
    /// A named parameter, bound at evaluation time.
    Param(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// Integer power of the base expression.
    Pow(Box<Expr>, i32),
    Exp(Box<Expr>),
    /// Principal branch of the complex logarithm.
    Log(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Conj(Box<Expr>),
    Abs(Box<Expr>),
    Re(Box<Expr>),
    Im(Box<Expr>),
}

/// Values for the free variable and the named parameters of an expression.
#[derive(Debug, Clone, Default)]
pub struct Binding {
    var: Option<Complex64>,
    params: HashMap<String, Complex64>,
}

impl Binding {
    /// Binding with only the free variable set.
    pub fn at(z: Complex64) -> Self {
        Binding {
            var: Some(z),
            params: HashMap::new(),
        }
    }

    /// Binding with no variable and no parameters.
    pub fn empty() -> Self {
        Binding::default()
    }

    /// Adds or replaces a parameter value.
    pub fn with_param(mut self, name: impl Into<String>, value: Complex64) -> Self {
        self.params.insert(name.into(), value);
        self
    }

    /// Replaces the variable value, keeping parameters.
    pub fn with_var(mut self, z: Complex64) -> Self {
        self.var = Some(z);
        self
    }

    pub fn var(&self) -> Option<Complex64> {
        self.var
    }

    pub fn param(&self, name: &str) -> Option<Complex64> {
        self.params.get(name).copied()
    }
}

/// Evaluation failure. Any operation that would produce a NaN component is
/// reported as an error rather than propagated as a NaN value.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("Log of zero")]
    LogOfZero,
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("expression uses the free variable but none was bound")]
    UnboundVariable,
    #[error("operation produced a NaN component")]
    NotANumber,
}

// constructor names mirror the node names, not the operator traits
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn lit(re: f64, im: f64) -> Expr {
        Expr::Lit(Complex64::new(re, im))
    }

    pub fn real(re: f64) -> Expr {
        Expr::lit(re, 0.0)
    }

    pub fn param(name: impl Into<String>) -> Expr {
        Expr::Param(name.into())
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    pub fn pow(a: Expr, n: i32) -> Expr {
        Expr::Pow(Box::new(a), n)
    }

    pub fn exp(a: Expr) -> Expr {
        Expr::Exp(Box::new(a))
    }

    pub fn log(a: Expr) -> Expr {
        Expr::Log(Box::new(a))
    }

    pub fn sin(a: Expr) -> Expr {
        Expr::Sin(Box::new(a))
    }

    pub fn cos(a: Expr) -> Expr {
        Expr::Cos(Box::new(a))
    }

    /// Evaluates the tree in IEEE double-complex arithmetic.
    pub fn eval(&self, at: &Binding) -> Result<Complex64, EvalError> {
        let v = match self {
            Expr::Var => at.var().ok_or(EvalError::UnboundVariable)?,
            Expr::Lit(c) => *c,
            Expr::Param(name) => at
                .param(name)
                .ok_or_else(|| EvalError::UnboundParameter(name.clone()))?,
            Expr::Add(a, b) => a.eval(at)? + b.eval(at)?,
            Expr::Sub(a, b) => a.eval(at)? - b.eval(at)?,
            Expr::Mul(a, b) => a.eval(at)? * b.eval(at)?,
            Expr::Div(a, b) => {
                let d = b.eval(at)?;
                if d == Complex64::new(0.0, 0.0) {
                    return Err(EvalError::DivisionByZero);
                }
                a.eval(at)? / d
            }
            Expr::Neg(a) => -a.eval(at)?,
            Expr::Pow(a, n) => a.eval(at)?.powi(*n),
            Expr::Exp(a) => a.eval(at)?.exp(),
            Expr::Log(a) => {
                let w = a.eval(at)?;
                if w == Complex64::new(0.0, 0.0) {
                    return Err(EvalError::LogOfZero);
                }
                w.ln()
            }
            Expr::Sin(a) => a.eval(at)?.sin(),
            Expr::Cos(a) => a.eval(at)?.cos(),
            Expr::Conj(a) => a.eval(at)?.conj(),
            Expr::Abs(a) => Complex64::new(a.eval(at)?.norm(), 0.0),
            Expr::Re(a) => Complex64::new(a.eval(at)?.re, 0.0),
            Expr::Im(a) => Complex64::new(a.eval(at)?.im, 0.0),
        };
        if v.re.is_nan() || v.im.is_nan() {
            return Err(EvalError::NotANumber);
        }
        Ok(v)
    }

    /// Replaces every occurrence of the free variable by `replacement`.
    pub fn substitute_var(&self, replacement: &Expr) -> Expr {
        let sub = |a: &Expr| Box::new(a.substitute_var(replacement));
        match self {
            Expr::Var => replacement.clone(),
            Expr::Lit(c) => Expr::Lit(*c),
            Expr::Param(p) => Expr::Param(p.clone()),
            Expr::Add(a, b) => Expr::Add(sub(a), sub(b)),
            Expr::Sub(a, b) => Expr::Sub(sub(a), sub(b)),
            Expr::Mul(a, b) => Expr::Mul(sub(a), sub(b)),
            Expr::Div(a, b) => Expr::Div(sub(a), sub(b)),
            Expr::Neg(a) => Expr::Neg(sub(a)),
            Expr::Pow(a, n) => Expr::Pow(sub(a), *n),
            Expr::Exp(a) => Expr::Exp(sub(a)),
            Expr::Log(a) => Expr::Log(sub(a)),
            Expr::Sin(a) => Expr::Sin(sub(a)),
            Expr::Cos(a) => Expr::Cos(sub(a)),
            Expr::Conj(a) => Expr::Conj(sub(a)),
            Expr::Abs(a) => Expr::Abs(sub(a)),
            Expr::Re(a) => Expr::Re(sub(a)),
            Expr::Im(a) => Expr::Im(sub(a)),
        }
    }

    /// Resolves parameters to literals, leaving the free variable in place.
    ///
    /// Parameters missing from `binding` are kept symbolic.
    pub fn bind_params(&self, binding: &Binding) -> Expr {
        let sub = |a: &Expr| Box::new(a.bind_params(binding));
        match self {
            Expr::Param(p) => match binding.param(p) {
                Some(v) => Expr::Lit(v),
                None => Expr::Param(p.clone()),
            },
            Expr::Var => Expr::Var,
            Expr::Lit(c) => Expr::Lit(*c),
            Expr::Add(a, b) => Expr::Add(sub(a), sub(b)),
            Expr::Sub(a, b) => Expr::Sub(sub(a), sub(b)),
            Expr::Mul(a, b) => Expr::Mul(sub(a), sub(b)),
            Expr::Div(a, b) => Expr::Div(sub(a), sub(b)),
            Expr::Neg(a) => Expr::Neg(sub(a)),
            Expr::Pow(a, n) => Expr::Pow(sub(a), *n),
            Expr::Exp(a) => Expr::Exp(sub(a)),
            Expr::Log(a) => Expr::Log(sub(a)),
            Expr::Sin(a) => Expr::Sin(sub(a)),
            Expr::Cos(a) => Expr::Cos(sub(a)),
            Expr::Conj(a) => Expr::Conj(sub(a)),
            Expr::Abs(a) => Expr::Abs(sub(a)),
            Expr::Re(a) => Expr::Re(sub(a)),
            Expr::Im(a) => Expr::Im(sub(a)),
        }
    }

    /// Renders the tree as parseable source text with variable name `z`.
    pub fn render(&self) -> String {
        self.render_with_variable("z")
    }

    /// Renders the tree with an explicit variable name. The output reparses
    /// (with the same variable name) to a structurally equal tree, provided
    /// every literal is representable in the grammar.
    pub fn render_with_variable(&self, var: &str) -> String {
        let mut out = String::new();
        self.write(&mut out, var, Prec::Expr);
        out
    }

    fn write(&self, out: &mut String, var: &str, ctx: Prec) {
        match self {
            Expr::Var => out.push_str(var),
            Expr::Param(p) => out.push_str(p),
            Expr::Lit(c) => write_literal(out, *c, ctx),
            Expr::Add(a, b) => {
                parenthesize(out, ctx, Prec::Expr, |out| {
                    a.write(out, var, Prec::Expr);
                    out.push('+');
                    b.write(out, var, Prec::Term);
                });
            }
            Expr::Sub(a, b) => {
                parenthesize(out, ctx, Prec::Expr, |out| {
                    a.write(out, var, Prec::Expr);
                    out.push('-');
                    b.write(out, var, Prec::Term);
                });
            }
            Expr::Mul(a, b) => {
                parenthesize(out, ctx, Prec::Term, |out| {
                    a.write(out, var, Prec::Term);
                    out.push('*');
                    b.write(out, var, Prec::Factor);
                });
            }
            Expr::Div(a, b) => {
                parenthesize(out, ctx, Prec::Term, |out| {
                    a.write(out, var, Prec::Term);
                    out.push('/');
                    b.write(out, var, Prec::Factor);
                });
            }
            Expr::Pow(a, n) => {
                parenthesize(out, ctx, Prec::Factor, |out| {
                    a.write(out, var, Prec::Unary);
                    out.push('^');
                    out.push_str(&n.to_string());
                });
            }
            Expr::Neg(a) => {
                parenthesize(out, ctx, Prec::Unary, |out| {
                    out.push('-');
                    a.write(out, var, Prec::Atom);
                });
            }
            Expr::Exp(a) => write_call(out, var, "exp", a),
            Expr::Log(a) => write_call(out, var, "Log", a),
            Expr::Sin(a) => write_call(out, var, "sin", a),
            Expr::Cos(a) => write_call(out, var, "cos", a),
            Expr::Conj(a) => write_call(out, var, "conj", a),
            Expr::Abs(a) => write_call(out, var, "abs", a),
            Expr::Re(a) => write_call(out, var, "re", a),
            Expr::Im(a) => write_call(out, var, "im", a),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Grammar levels, loosest to tightest. A node may be written bare in any
/// context at least as loose as its own level; otherwise it gets parentheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Expr,
    Term,
    Factor,
    Unary,
    Atom,
}

fn parenthesize(out: &mut String, ctx: Prec, own: Prec, body: impl Fn(&mut String)) {
    if ctx > own {
        out.push('(');
        body(out);
        out.push(')');
    } else {
        body(out);
    }
}

fn write_call(out: &mut String, var: &str, name: &str, arg: &Expr) {
    out.push_str(name);
    out.push('(');
    arg.write(out, var, Prec::Expr);
    out.push(')');
}

fn write_literal(out: &mut String, c: Complex64, ctx: Prec) {
    if c.im == 0.0 {
        if c.re >= 0.0 {
            out.push_str(&format_number(c.re));
        } else {
            // Negative reals are not atoms in the grammar; emit a negation.
            if ctx > Prec::Unary {
                out.push_str("(-");
                out.push_str(&format_number(-c.re));
                out.push(')');
            } else {
                out.push('-');
                out.push_str(&format_number(-c.re));
            }
        }
    } else if c.re == 0.0 && c.im == 1.0 {
        out.push('i');
    } else {
        // General complex constants only arise from folding; spell them out.
        out.push('(');
        out.push_str(&format_number(c.re));
        if c.im >= 0.0 {
            out.push('+');
            out.push_str(&format_number(c.im));
        } else {
            out.push('-');
            out.push_str(&format_number(-c.im));
        }
        out.push_str("*i)");
    }
}

fn format_number(x: f64) -> String {
    if x.is_infinite() {
        // Not representable in the grammar; best-effort huge literal.
        return if x > 0.0 { "1e999".into() } else { "-1e999".into() };
    }
    format!("{x}")
}
