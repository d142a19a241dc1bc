//! q-Pochhammer symbols with phased monomial arguments.

use super::monomial::Monomial;
use super::ratfun::RatFun;
use super::scalar::ExactScalar;
use crate::error::{Error, Result};

/// A scalar multiple of a character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coef: ExactScalar,
    pub mono: Monomial,
}

impl Term {
    pub fn new(coef: ExactScalar, mono: Monomial) -> Self {
        Term { coef, mono }
    }

    pub fn mono(mono: Monomial) -> Self {
        Term { coef: ExactScalar::one(), mono }
    }

    pub fn mul(&self, other: &Term) -> Term {
        Term { coef: &self.coef * &other.coef, mono: self.mono.mul(&other.mono) }
    }

    pub fn pow(&self, k: i64) -> Term {
        let c = if k >= 0 {
            (0..k).fold(ExactScalar::one(), |acc, _| &acc * &self.coef)
        } else {
            let inv = self.coef.inv().expect("nonzero coefficient");
            (0..-k).fold(ExactScalar::one(), |acc, _| &acc * &inv)
        };
        Term { coef: c, mono: self.mono.pow(k) }
    }

    /// Whether `1 - self` is exactly zero.
    pub fn is_exactly_one(&self) -> bool {
        self.mono.exps.is_zero() && (&self.coef * &ExactScalar::root_of_unity(&self.mono.phase)).is_one()
    }
}

/// `(x; base)_d`. For `d >= 0` this is `prod_{k=0}^{d-1} (1 - base^k x)`;
/// for `d < 0` it is `1 / prod_{k=1}^{-d} (1 - base^-k x)`. With `reduced`,
/// factors that are exactly zero are skipped.
pub fn q_pochhammer(x: &Term, base: &Term, d: i64, reduced: bool) -> Result<RatFun> {
    let mut out = RatFun::one();
    let ks: Vec<i64> = if d >= 0 { (0..d).collect() } else { (1..=-d).map(|k| -k).collect() };
    for k in ks {
        let f = base.pow(k).mul(x);
        if f.is_exactly_one() {
            if reduced {
                continue;
            }
            if d >= 0 {
                return Ok(RatFun::zero());
            }
            return Err(Error::Pole(format!("(x; q)_{d} has a vanishing denominator factor at k = {k}")));
        }
        let e = if d >= 0 { 1 } else { -1 };
        out = out.mul(&RatFun::one_minus_pow(&f.coef, &f.mono, e)?);
    }
    Ok(out)
}
