//! Numerical multiplicative calculus over the complex plane.
//!
//! The multiplicative (star) counterparts of the classical calculus
//! operations replace differences by ratios and sums by products:
//!
//! * [`mult_deriv`] — *derivatives `f*(z) = exp(f'(z)/f(z))` of any order,
//!   the defining ratio-limit as a numerical oracle, and Cauchy-Riemann
//!   conditions in star, classic and polar form;
//! * [`real_mint`] — line *integrals `exp(int ln f)` in `ds`/`dx`/`dy` of
//!   positive fields along plane curves, double *integrals on rectangles,
//!   and the fundamental-theorem and Green-type identities relating them;
//! * [`complex_mint`] — the branch-tracked complex *integral along a curve,
//!   a multi-valued family `I*_n = W^n I*_0` generated by the winding
//!   multiplier `W = exp(2 pi i (z(b)-z(a)))`, with verifiers for its
//!   algebraic properties;
//! * [`expr`] — the expression front end shared by everything above;
//! * [`curves`] — piecewise-smooth parametric curves and the half-plane
//!   partition that makes a continuous logarithm trackable along them.
//!
//! Everything is pure and immutable after construction; all entry points
//! are safe for unsynchronized concurrent use.

pub mod complex_mint;
pub mod curves;
pub mod expr;
pub mod mult_deriv;
pub mod quadrature;
pub mod real_mint;
pub mod suite;

pub use num_complex::Complex64;
