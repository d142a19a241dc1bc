//! Exact arithmetic: cyclotomic scalars, Laurent polynomials with rational
//! exponents, factored rational functions, q-Pochhammer symbols, residues.

pub mod monomial;
pub mod pochhammer;
pub mod poly;
pub mod ratfun;
pub mod residue;
pub mod scalar;

pub use monomial::{a_var, ExponentVector, Monomial, Phase, HBAR, Q};
pub use pochhammer::{q_pochhammer, Term};
pub use poly::LaurentExpr;
pub use ratfun::{braces, Binomial, RatFun};
pub use residue::{binomial_q_roots, linear_factor, residue_at, residue_at_infinity, residue_at_zero, root_of_unity_phase};
pub use scalar::{rat, rat_int, ExactScalar, Rational};
