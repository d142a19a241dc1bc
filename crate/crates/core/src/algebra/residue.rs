//! Residues of `f(q) dq/q` at simple poles and the root bookkeeping they need.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::monomial::{ExponentVector, Monomial, Phase, Q};
use super::ratfun::{Binomial, RatFun};
use super::scalar::{ExactScalar, Rational};
use crate::error::{Error, Result};

/// The phase `p` with `exp(2 pi i p) = c`, when `c` is a root of unity.
pub fn root_of_unity_phase(c: &ExactScalar) -> Option<Phase> {
    let n = c.order() as i64;
    let l = n.lcm(&2);
    (0..l).map(|j| Phase::new(j, l)).find(|p| ExactScalar::root_of_unity(p) == *c)
}

/// All `k` roots in `q` of the canonical binomial `1 - c q^k y` (`k > 0`
/// integer, `c` a root of unity). `None` when `k` is not a positive integer
/// or `c` is not a root of unity.
pub fn binomial_q_roots(b: &Binomial) -> Option<Vec<Monomial>> {
    let k = b.mono.exps.get_int(Q)?;
    if k <= 0 {
        return None;
    }
    let phi = root_of_unity_phase(&b.canonical().coef)?;
    let y = b.mono.exps.without(Q);
    let base = y.scale(&Rational::new(BigInt::from(-1), BigInt::from(k)));
    let (pn, pd) = phi.parts();
    Some(
        (0..k)
            .map(|j| {
                // q^k = zeta^-phi y^-1, so q = zeta^((j - phi)/k) y^(-1/k)
                let ph = Phase::new(j * pd - pn, pd * k);
                Monomial::new(base.clone(), ph)
            })
            .collect(),
    )
}

/// `1 - q / q0` as a binomial.
pub fn linear_factor(q0: &Monomial) -> Binomial {
    // 1 - q / q0
    let mono = Monomial::from_exps(ExponentVector::var(Q, 1).sub(&q0.exps));
    let coef = ExactScalar::root_of_unity(&q0.phase.neg());
    Binomial { mono, coef }
}

/// Residue of `f(q) dq/q` at `q = q0`; `q0` must not involve `q`.
pub fn residue_at(f: &RatFun, q0: &Monomial) -> Result<RatFun> {
    if !q0.exps.get(Q).is_zero() {
        return Err(Error::Invalid("pole location may not involve q".into()));
    }
    let c = f.canonical().simplify();
    let (num, den, factors) = c.parts();
    let lin = linear_factor(q0);
    let zeta0 = ExactScalar::root_of_unity(&q0.phase);
    let mut order: i64 = 0;
    let mut scalar = ExactScalar::one();
    let mut rest = std::collections::BTreeMap::new();
    for (b, e) in factors {
        let k = b.q_exponent();
        let vanishes = !k.is_zero() && {
            let ki = k
                .to_integer()
                .to_i64()
                .filter(|_| k.is_integer())
                .ok_or_else(|| Error::Arithmetic(format!("fractional q exponent in {b}")))?;
            let y = b.mono.exps.without(Q);
            let zk = if ki >= 0 {
                (0..ki).fold(ExactScalar::one(), |a, _| &a * &zeta0)
            } else {
                let zi = zeta0.inv().unwrap();
                (0..-ki).fold(ExactScalar::one(), |a, _| &a * &zi)
            };
            y.add(&q0.exps.scale_int(ki)).is_zero() && (&b.coef * &zk).is_one()
        };
        if vanishes {
            let ki = k.to_integer().to_i64().unwrap();
            order -= *e as i64;
            let kk = ExactScalar::from_int(ki);
            for _ in 0..e.unsigned_abs() {
                scalar = if *e > 0 { &scalar * &kk } else { &scalar * &kk.inv().unwrap() };
            }
        } else {
            rest.insert(b.clone(), *e);
        }
    }
    let mut num = num.clone();
    while let Some(qt) = num.div_binomial(&lin.coef, &lin.mono) {
        num = qt;
        order -= 1;
    }
    let mut den = den.clone();
    while let Some(qt) = den.div_binomial(&lin.coef, &lin.mono) {
        den = qt;
        order += 1;
    }
    if order <= 0 {
        return Ok(RatFun::zero());
    }
    if order >= 2 {
        return Err(Error::HigherOrderPole { order, at: format!("q = {q0}") });
    }
    let g = RatFun::from_parts(num, den, rest)?;
    Ok(g.evaluate_q(q0)?.scale(&scalar).neg())
}

/// Residue of `f dq/q` at `q = 0`, for `f` regular there.
pub fn residue_at_zero(f: &RatFun) -> Result<RatFun> {
    f.set_zero(Q)
}

/// Residue of `f dq/q` at `q = infinity`, for `f` bounded there.
pub fn residue_at_infinity(f: &RatFun) -> Result<RatFun> {
    let inv = f.substitute(Q, &Monomial::q().inv())?;
    Ok(inv.set_zero(Q)?.neg())
}
