//! Laurent polynomials over `Q(zeta)` with phased monomials.
//!
//! Terms are keyed by [`Monomial`], so a stored phase behaves like a group
//! element: Adams operations multiply it. [`LaurentExpr::canonical`] folds
//! phases into cyclotomic coefficients, which is the form used for zero
//! tests and evaluation.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::monomial::Monomial;
use super::scalar::{ExactScalar, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentExpr {
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl LaurentExpr {
    pub fn zero() -> Self {
        LaurentExpr { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(ExactScalar::one())
    }

    pub fn constant(c: ExactScalar) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: ExactScalar, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentExpr { terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(ExactScalar::one(), m)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// The single term, if there is exactly one.
    pub fn as_term(&self) -> Option<(&Monomial, &ExactScalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentExpr { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut out = LaurentExpr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentExpr { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        LaurentExpr { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                out = out.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Folds every phase into its coefficient.
    pub fn canonical(&self) -> Self {
        if self.terms.keys().all(|m| m.phase.is_zero()) {
            return self.clone();
        }
        let mut out = LaurentExpr::zero();
        for (m, c) in &self.terms {
            let c = if m.phase.is_zero() { c.clone() } else { c * &ExactScalar::root_of_unity(&m.phase) };
            out.add_term(Monomial::from_exps(m.exps.clone()), c);
        }
        out
    }

    pub fn is_canonical(&self) -> bool {
        self.terms.keys().all(|m| m.phase.is_zero())
    }

    /// Zero after folding phases.
    pub fn is_zero_value(&self) -> bool {
        self.canonical().is_zero()
    }

    pub fn has_rational_coefficients(&self) -> bool {
        self.terms.values().all(ExactScalar::is_rational)
    }

    /// Adams operation: exponents and phases times `r`. Requires rational
    /// coefficients, since a general cyclotomic coefficient has no
    /// character interpretation.
    pub fn adams(&self, r: i64) -> Result<Self> {
        let mut out = LaurentExpr::zero();
        for (m, c) in &self.terms {
            if !c.is_rational() {
                return Err(Error::Unsupported(
                    "Adams operation on a Laurent expression with irrational coefficients".into(),
                ));
            }
            out.add_term(m.pow(r), c.clone());
        }
        Ok(out)
    }

    /// Applies `f` to every monomial, keeping coefficients.
    pub fn map_monomials(&self, mut f: impl FnMut(&Monomial) -> (Monomial, ExactScalar)) -> Self {
        let mut out = LaurentExpr::zero();
        for (m, c) in &self.terms {
            let (m2, c2) = f(m);
            out.add_term(m2, c * &c2);
        }
        out
    }

    /// Maximum of the pairing of exponent vectors with `sigma` over the
    /// torus slots. `None` for the zero polynomial.
    pub fn support_max_a(&self, sigma: &[Rational]) -> Option<Rational> {
        self.terms.keys().map(|m| m.exps.dot_a(sigma)).max()
    }

    /// Minimum and maximum exponent of slot `i`; `None` for zero.
    pub fn slot_range(&self, i: usize) -> Option<(Rational, Rational)> {
        let mut it = self.terms.keys().map(|m| m.exps.get(i));
        let first = it.next()?;
        let (mut lo, mut hi) = (first.clone(), first);
        for x in it {
            if x < lo {
                lo = x.clone();
            }
            if x > hi {
                hi = x;
            }
        }
        Some((lo, hi))
    }

    /// Exact quotient by `1 - c*m` (phased `m`, nonzero exponents), or
    /// `None` when it does not divide.
    ///
    /// Terms are split into cosets of the subgroup generated by `m`; in each
    /// coset the problem is univariate division by `1 - c t`.
    pub fn div_binomial(&self, c: &ExactScalar, m: &Monomial) -> Option<Self> {
        let j = m.exps.leading_index()?;
        let mj = m.exps.get(j);
        let mut cosets: BTreeMap<Monomial, BTreeMap<i64, ExactScalar>> = BTreeMap::new();
        for (mono, coef) in &self.terms {
            let r = mono.exps.get(j) / &mj;
            let k = r.floor().to_integer();
            let k = num_traits::ToPrimitive::to_i64(&k).expect("coset index overflow");
            let base = mono.div(&m.pow(k));
            cosets.entry(base).or_default().insert(k, coef.clone());
        }
        let mut out = LaurentExpr::zero();
        for (base, poly) in cosets {
            let kmin = *poly.keys().next().unwrap();
            let kmax = *poly.keys().next_back().unwrap();
            // q_k = p_k + c q_{k-1}
            let mut prev = ExactScalar::zero();
            for k in kmin..kmax {
                let pk = poly.get(&k).cloned().unwrap_or_else(ExactScalar::zero);
                let qk = &pk + &(c * &prev);
                if !qk.is_zero() {
                    out.add_term(base.mul(&m.pow(k)), qk.clone());
                }
                prev = qk;
            }
            let last = poly.get(&kmax).cloned().unwrap_or_else(ExactScalar::zero);
            if !(&last + &(c * &prev)).is_zero() {
                return None;
            }
        }
        Some(out)
    }

    /// Exact quotient by a single term.
    pub fn div_term(&self, c: &ExactScalar, m: &Monomial) -> Option<Self> {
        let inv = c.inv()?;
        Some(self.mul_monomial(&m.inv()).scale(&inv))
    }

    /// Substitutes slot `i` by `value_phase * value_exps` in every term.
    /// Requires integer exponents in slot `i` whenever the phase is nontrivial.
    pub fn substitute(&self, i: usize, value: &Monomial) -> Result<Self> {
        let mut out = LaurentExpr::zero();
        for (m, c) in &self.terms {
            out.add_term(substitute_monomial(m, i, value)?, c.clone());
        }
        Ok(out)
    }

    pub fn max_abs_den(&self) -> i64 {
        self.terms.keys().map(|m| m.exps.den()).max().unwrap_or(1)
    }
}

/// `m` with slot `i` replaced by `value`.
pub fn substitute_monomial(m: &Monomial, i: usize, value: &Monomial) -> Result<Monomial> {
    let e = m.exps.get(i);
    if e.is_zero() {
        return Ok(m.clone());
    }
    let rest = Monomial::new(m.exps.without(i), m.phase);
    if e.is_integer() {
        let k = num_traits::ToPrimitive::to_i64(&e.to_integer()).expect("exponent overflow");
        Ok(rest.mul(&value.pow(k)))
    } else if value.phase.is_zero() {
        Ok(rest.mul(&Monomial::from_exps(value.exps.scale(&e))))
    } else {
        Err(Error::Arithmetic(format!(
            "substituting a phased value into the fractional power {} of {}",
            e,
            super::monomial::var_name(i)
        )))
    }
}

impl fmt::Display for LaurentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest terms first reads more naturally
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let cs = c.to_string();
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if c.is_rational() => (true, rest.to_string()),
                _ => (false, cs),
            };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{body}")?;
            } else if body == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{body}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::monomial::{Monomial, Phase};

    fn x() -> Monomial {
        Monomial::a(0)
    }

    #[test]
    fn binomial_division() {
        let one = ExactScalar::one();
        // 1 - x^3 = (1 - x)(1 + x + x^2)
        let p = LaurentExpr::one().sub(&LaurentExpr::monomial(x().pow(3)));
        let qt = p.div_binomial(&one, &x()).unwrap();
        let expect = LaurentExpr::one().add(&LaurentExpr::monomial(x())).add(&LaurentExpr::monomial(x().pow(2)));
        assert_eq!(qt, expect);
        assert!(LaurentExpr::one().add(&LaurentExpr::monomial(x())).div_binomial(&one, &x()).is_none());
    }

    #[test]
    fn phased_division() {
        // 1 - x^2 = (1 - z2 x)(1 + z2 x) in the group ring sense only after folding
        let p = LaurentExpr::one().sub(&LaurentExpr::monomial(x().pow(2)));
        let zx = x().with_phase(Phase::new(1, 2));
        let qt = p.div_binomial(&ExactScalar::one(), &zx).unwrap();
        let back = qt.mul(&LaurentExpr::one().sub(&LaurentExpr::monomial(zx)));
        assert_eq!(back.canonical(), p);
    }

    #[test]
    fn canonical_folds_signs() {
        let p = LaurentExpr::one().add(&LaurentExpr::monomial(Monomial::one().with_phase(Phase::new(1, 2))));
        assert!(p.is_zero_value());
        assert!(!p.is_zero());
    }
}
