//! Rational functions kept as `num / den * prod (1 - c_i m_i)^(e_i)`.
//!
//! Products and quotients only touch the exponent map; sums bring both
//! sides over the least common binomial denominator and expand the rest.
//! Every binomial is oriented so that its monomial is lexicographically
//! positive, which makes equal factors collide in the map.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::monomial::{ExponentVector, Monomial, HBAR, Q};
use super::poly::{substitute_monomial, LaurentExpr};
use super::scalar::{ExactScalar, Rational};
use crate::error::{Error, Result};

/// `1 - coef * mono` with `mono.exps` nonzero and lex-positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Binomial {
    pub mono: Monomial,
    pub coef: ExactScalar,
}

impl Binomial {
    pub fn expand(&self) -> LaurentExpr {
        LaurentExpr::one().sub(&LaurentExpr::term(self.coef.clone(), self.mono.clone()))
    }

    /// Folds the phase of the monomial into the coefficient.
    pub fn canonical(&self) -> Binomial {
        if self.mono.phase.is_zero() {
            return self.clone();
        }
        Binomial {
            mono: Monomial::from_exps(self.mono.exps.clone()),
            coef: &self.coef * &ExactScalar::root_of_unity(&self.mono.phase),
        }
    }

    pub fn q_exponent(&self) -> Rational {
        self.mono.exps.get(Q)
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.coef;
        if c.is_one() {
            write!(f, "(1 - {})", self.mono)
        } else if (-c).is_one() {
            write!(f, "(1 + {})", self.mono)
        } else {
            write!(f, "(1 - {}*{})", c, self.mono)
        }
    }
}

#[derive(Clone, Debug)]
pub struct RatFun {
    num: LaurentExpr,
    den: LaurentExpr,
    factors: BTreeMap<Binomial, i32>,
}

impl Default for RatFun {
    fn default() -> Self {
        Self::one()
    }
}

impl From<LaurentExpr> for RatFun {
    fn from(p: LaurentExpr) -> Self {
        RatFun { num: p, den: LaurentExpr::one(), factors: BTreeMap::new() }
    }
}

impl RatFun {
    pub fn one() -> Self {
        LaurentExpr::one().into()
    }

    pub fn zero() -> Self {
        LaurentExpr::zero().into()
    }

    pub fn constant(c: ExactScalar) -> Self {
        LaurentExpr::constant(c).into()
    }

    pub fn rational(r: Rational) -> Self {
        Self::constant(ExactScalar::from_rational(r))
    }

    pub fn int(n: i64) -> Self {
        Self::constant(ExactScalar::from_int(n))
    }

    pub fn monomial(m: Monomial) -> Self {
        LaurentExpr::monomial(m).into()
    }

    pub fn term(c: ExactScalar, m: Monomial) -> Self {
        LaurentExpr::term(c, m).into()
    }

    /// Raw parts: numerator polynomial, denominator polynomial, binomial
    /// exponent map.
    pub fn parts(&self) -> (&LaurentExpr, &LaurentExpr, &BTreeMap<Binomial, i32>) {
        (&self.num, &self.den, &self.factors)
    }

    pub fn from_parts(num: LaurentExpr, den: LaurentExpr, factors: BTreeMap<Binomial, i32>) -> Result<Self> {
        if den.is_zero_value() {
            return Err(Error::DivisionByZero);
        }
        let mut r = RatFun { num, den, factors };
        r.factors.retain(|_, e| *e != 0);
        Ok(r)
    }

    /// `1 - c*m`, oriented, or a constant when `m` has zero exponents.
    pub fn one_minus(c: &ExactScalar, m: &Monomial) -> Self {
        Self::one_minus_pow(c, m, 1).expect("positive power never divides")
    }

    /// `(1 - c*m)^e`; fails when `e < 0` and the factor vanishes.
    pub fn one_minus_pow(c: &ExactScalar, m: &Monomial, e: i32) -> Result<Self> {
        if e == 0 || c.is_zero() {
            return Ok(Self::one());
        }
        if m.exps.is_zero() {
            let v = &ExactScalar::one() - &(c * &ExactScalar::root_of_unity(&m.phase));
            if v.is_zero() && e < 0 {
                return Err(Error::Pole(format!("constant factor 1 - {c}*{m} vanishes")));
            }
            return Ok(Self::constant(scalar_pow(&v, e)?));
        }
        let mut out = Self::one();
        let (b, unit) = orient(c, m);
        if let Some((uc, um)) = unit {
            // 1 - c m = (-c m)(1 - c^-1 m^-1)
            let u = Self::term(-&uc, um);
            out = u.pow(e)?;
        }
        out.factors.insert(b, e);
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero_value()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one() && self.factors.is_empty()
    }

    pub fn num(&self) -> &LaurentExpr {
        &self.num
    }

    pub fn den(&self) -> &LaurentExpr {
        &self.den
    }

    pub fn factors(&self) -> &BTreeMap<Binomial, i32> {
        &self.factors
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        let mut factors = self.factors.clone();
        for (b, e) in &other.factors {
            let x = factors.entry(b.clone()).or_insert(0);
            *x += e;
        }
        factors.retain(|_, e| *e != 0);
        RatFun { num: self.num.mul(&other.num), den: self.den.mul(&other.den), factors }
    }

    pub fn inv(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (num, den) = match self.num.as_term() {
            // keep single-term denominators out of `den`
            Some((m, c)) => (self.den.mul_monomial(&m.inv()).scale(&c.inv().unwrap()), LaurentExpr::one()),
            None => (self.den.clone(), self.num.clone()),
        };
        let factors = self.factors.iter().map(|(b, e)| (b.clone(), -e)).collect();
        Ok(RatFun { num, den, factors })
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<RatFun> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let n = e.unsigned_abs();
        let factors = base.factors.iter().map(|(b, x)| (b.clone(), x * n as i32)).collect();
        Ok(RatFun { num: base.num.pow(n), den: base.den.pow(n), factors })
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: self.num.neg(), den: self.den.clone(), factors: self.factors.clone() }
    }

    pub fn scale(&self, c: &ExactScalar) -> RatFun {
        RatFun { num: self.num.scale(c), den: self.den.clone(), factors: self.factors.clone() }
    }

    pub fn scale_rational(&self, r: &Rational) -> RatFun {
        self.scale(&ExactScalar::from_rational(r.clone()))
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        if self.num.is_zero() {
            return other.clone();
        }
        if other.num.is_zero() {
            return self.clone();
        }
        let mut common = BTreeMap::new();
        let mut extra_a = LaurentExpr::one();
        let mut extra_b = LaurentExpr::one();
        let keys: std::collections::BTreeSet<&Binomial> = self.factors.keys().chain(other.factors.keys()).collect();
        for b in keys {
            let ea = self.factors.get(b).copied().unwrap_or(0);
            let eb = other.factors.get(b).copied().unwrap_or(0);
            let ec = ea.min(eb);
            if ec != 0 {
                common.insert(b.clone(), ec);
            }
            if ea > ec {
                extra_a = extra_a.mul(&b.expand().pow((ea - ec) as u32));
            }
            if eb > ec {
                extra_b = extra_b.mul(&b.expand().pow((eb - ec) as u32));
            }
        }
        let (num, den) = if self.den == other.den {
            (self.num.mul(&extra_a).add(&other.num.mul(&extra_b)), self.den.clone())
        } else {
            (
                self.num.mul(&other.den).mul(&extra_a).add(&other.num.mul(&self.den).mul(&extra_b)),
                self.den.mul(&other.den),
            )
        };
        RatFun { num, den, factors: common }
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    /// Exact equality of values.
    pub fn equals(&self, other: &RatFun) -> bool {
        self.sub(other).num.is_zero_value()
    }

    /// Rewrites each denominator binomial `1 - c x` as
    /// `(1 + c x + ... + (c x)^(L-1)) / (1 - c^L x^L)`, with `L` the least
    /// power making `x^L` integral and phase-free, so that sector variants
    /// of the same factor share one denominator.
    pub fn rationalized(&self) -> RatFun {
        let mut out = RatFun { num: self.num.clone(), den: self.den.clone(), factors: BTreeMap::new() };
        for (b, e) in &self.factors {
            let l = num_integer::lcm(b.mono.exps.den(), b.mono.phase.order());
            if *e > 0 || l == 1 || !b.coef.is_rational() {
                *out.factors.entry(b.clone()).or_insert(0) += e;
                continue;
            }
            let mut geom = LaurentExpr::zero();
            let mut c = ExactScalar::one();
            let mut m = Monomial::one();
            for _ in 0..l {
                geom.add_term(m.clone(), c.clone());
                c = &c * &b.coef;
                m = m.mul(&b.mono);
            }
            out.num = out.num.mul(&geom.pow(e.unsigned_abs()));
            *out.factors.entry(Binomial { mono: m, coef: c }).or_insert(0) += e;
        }
        out.factors.retain(|_, e| *e != 0);
        out
    }

    /// Sum over a common denominator: every binomial appears with the
    /// smallest exponent found among the terms, and each numerator is
    /// multiplied by its own complement once. Numerators are folded to
    /// canonical form as they are accumulated.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a RatFun>) -> RatFun {
        let owned: Vec<RatFun> = items.into_iter().filter(|x| !x.num.is_zero()).map(|x| x.rationalized()).collect();
        let items: Vec<&RatFun> = owned.iter().collect();
        match items.len() {
            0 => return RatFun::zero(),
            1 => return items[0].canonical(),
            _ => {}
        }
        if items.iter().any(|x| x.den != items[0].den) {
            return items.iter().fold(RatFun::zero(), |acc, x| acc.add(x));
        }
        let mut common: BTreeMap<Binomial, i32> = BTreeMap::new();
        for (i, x) in items.iter().enumerate() {
            for (b, e) in &x.factors {
                let c = common.entry(b.clone()).or_insert(if i == 0 { *e } else { 0 });
                *c = (*c).min(*e);
            }
            if i > 0 {
                for (b, c) in common.iter_mut() {
                    if !x.factors.contains_key(b) {
                        *c = (*c).min(0);
                    }
                }
            }
        }
        // binomials absent from the first term start at 0 via the loop above
        let mut num = LaurentExpr::zero();
        for x in &items {
            let mut n = x.num.clone();
            for (b, c) in &common {
                let e = x.factors.get(b).copied().unwrap_or(0);
                if e > *c {
                    n = n.mul(&b.expand().pow((e - c) as u32));
                }
            }
            num = num.add(&n.canonical());
        }
        common.retain(|_, e| *e != 0);
        RatFun { num, den: items[0].den.clone(), factors: common }
    }

    pub fn product<'a>(items: impl IntoIterator<Item = &'a RatFun>) -> RatFun {
        items.into_iter().fold(RatFun::one(), |acc, x| acc.mul(x))
    }

    /// Moves every phase into cyclotomic coefficients and re-orients.
    pub fn canonical(&self) -> RatFun {
        let mut out = RatFun {
            num: self.num.canonical(),
            den: self.den.canonical(),
            factors: BTreeMap::new(),
        };
        for (b, e) in &self.factors {
            let cb = b.canonical();
            let x = out.factors.entry(cb).or_insert(0);
            *x += e;
        }
        out.factors.retain(|_, e| *e != 0);
        out
    }

    pub fn is_canonical(&self) -> bool {
        self.num.is_canonical() && self.den.is_canonical() && self.factors.keys().all(|b| b.mono.phase.is_zero())
    }

    /// Cancels binomial denominators against the numerator by trial
    /// division, and folds a single-term `den` into the numerator.
    pub fn simplify(&self) -> RatFun {
        let mut out = self.clone();
        if out.num.is_zero_value() {
            return RatFun::zero();
        }
        if let Some((m, c)) = out.den.as_term() {
            if let Some(n) = out.num.div_term(c, m) {
                out.num = n;
                out.den = LaurentExpr::one();
            }
        }
        let negatives: Vec<Binomial> = out.factors.iter().filter(|(_, e)| **e < 0).map(|(b, _)| b.clone()).collect();
        for b in negatives {
            while out.factors[&b] < 0 {
                match out.num.div_binomial(&b.coef, &b.mono) {
                    Some(qt) => {
                        out.num = qt;
                        *out.factors.get_mut(&b).unwrap() += 1;
                    }
                    None => break,
                }
            }
        }
        let positives: Vec<Binomial> = out.factors.iter().filter(|(_, e)| **e > 0).map(|(b, _)| b.clone()).collect();
        if !out.den.is_one() {
            for b in positives {
                while out.factors[&b] > 0 {
                    match out.den.div_binomial(&b.coef, &b.mono) {
                        Some(qt) => {
                            out.den = qt;
                            *out.factors.get_mut(&b).unwrap() -= 1;
                        }
                        None => break,
                    }
                }
            }
        }
        out.factors.retain(|_, e| *e != 0);
        out
    }

    /// Factors binomials from `pool` out of the numerator where they divide.
    pub fn extract_factors(&self, pool: &[Binomial]) -> RatFun {
        let mut out = self.clone();
        for b in pool {
            if out.num.is_zero() {
                break;
            }
            while let Some(qt) = out.num.div_binomial(&b.coef, &b.mono) {
                out.num = qt;
                *out.factors.entry(b.clone()).or_insert(0) += 1;
            }
        }
        out.factors.retain(|_, e| *e != 0);
        out
    }

    /// Numerator and denominator with every binomial multiplied out.
    pub fn expanded(&self) -> (LaurentExpr, LaurentExpr) {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        for (b, e) in &self.factors {
            let p = b.expand().pow(e.unsigned_abs());
            if *e > 0 {
                num = num.mul(&p);
            } else {
                den = den.mul(&p);
            }
        }
        (num, den)
    }

    pub fn has_rational_coefficients(&self) -> bool {
        self.num.has_rational_coefficients()
            && self.den.has_rational_coefficients()
            && self.factors.keys().all(|b| b.coef.is_rational())
    }

    /// Adams operation `Psi^r`: every character raised to the `r`-th power.
    pub fn adams(&self, r: i64) -> Result<RatFun> {
        let mut out = RatFun {
            num: self.num.adams(r)?,
            den: self.den.adams(r)?,
            factors: BTreeMap::new(),
        };
        for (b, e) in &self.factors {
            if !b.coef.is_rational() {
                return Err(Error::Unsupported("Adams operation on an irrational binomial coefficient".into()));
            }
            let m = b.mono.pow(r);
            let f = RatFun::one_minus_pow(&b.coef, &m, *e)?;
            out = out.mul(&f);
        }
        Ok(out)
    }

    /// Substitutes slot `i` by the character `value`.
    pub fn substitute(&self, i: usize, value: &Monomial) -> Result<RatFun> {
        let num = self.num.substitute(i, value)?;
        let den = self.den.substitute(i, value)?;
        if den.is_zero_value() {
            return Err(Error::Pole(format!("denominator vanishes at {}={}", super::monomial::var_name(i), value)));
        }
        let mut out = RatFun { num, den, factors: BTreeMap::new() };
        for (b, e) in &self.factors {
            let m = substitute_monomial(&b.mono, i, value)?;
            let f = RatFun::one_minus_pow(&b.coef, &m, *e).map_err(|_| {
                Error::Pole(format!("factor {} vanishes at {}={}", b, super::monomial::var_name(i), value))
            })?;
            out = out.mul(&f);
        }
        Ok(out)
    }

    /// Value at `q = value`.
    pub fn evaluate_q(&self, value: &Monomial) -> Result<RatFun> {
        self.substitute(Q, value)
    }

    /// Sets slot `i` to zero. Fails when the result has a pole there.
    pub fn set_zero(&self, i: usize) -> Result<RatFun> {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        let mut factors = BTreeMap::new();
        for (b, e) in &self.factors {
            let ei = b.mono.exps.get(i);
            if ei.is_positive() {
                continue;
            }
            if ei.is_zero() {
                factors.insert(b.clone(), *e);
                continue;
            }
            // (1 - c m) = (-c m)(1 - c^-1 m^-1); the second factor tends to 1
            let unit = LaurentExpr::term(-&b.coef, b.mono.clone()).pow(e.unsigned_abs());
            if *e > 0 {
                num = num.mul(&unit);
            } else {
                den = den.mul(&unit);
            }
        }
        let num = num.canonical();
        let den = den.canonical();
        let shift = den.slot_range(i).map(|(lo, _)| lo).unwrap_or_else(Rational::zero);
        let shift_m = Monomial::from_exps(var_rational(i, &(-shift)));
        let num = num.mul_monomial(&shift_m);
        let den = den.mul_monomial(&shift_m);
        if let Some((lo, _)) = num.slot_range(i) {
            if lo.is_negative() {
                return Err(Error::Pole(format!("pole at {}=0", super::monomial::var_name(i))));
            }
        }
        let lowest = |p: &LaurentExpr| {
            let mut out = LaurentExpr::zero();
            for (m, c) in p.terms() {
                if m.exps.get(i).is_zero() {
                    out.add_term(m.clone(), c.clone());
                }
            }
            out
        };
        let mut out = RatFun { num: lowest(&num), den: lowest(&den), factors };
        out.factors.retain(|_, e| *e != 0);
        Ok(out)
    }

    /// Specialization `h = 0`.
    pub fn at_hbar_zero(&self) -> Result<RatFun> {
        self.set_zero(HBAR)
    }

    /// Growth exponent along `sigma` (indexed by torus variable): support
    /// function of the numerator minus that of the denominator. Support
    /// functions are additive under products, so no cancellation is needed.
    pub fn newton_degree(&self, sigma: &[Rational]) -> Option<Rational> {
        let c = self.canonical();
        let hn = c.num.support_max_a(sigma)?;
        let hd = c.den.support_max_a(sigma).expect("nonzero denominator");
        let mut total = hn - hd;
        for (b, e) in &c.factors {
            let h = b.mono.exps.dot_a(sigma).max(Rational::zero());
            total += h * Rational::from_integer(BigInt::from(*e));
        }
        Some(total)
    }

    /// Order of vanishing at `q = 0` (negative for a pole).
    pub fn q_valuation(&self) -> Option<Rational> {
        let c = self.canonical();
        let (lo_n, _) = c.num.slot_range(Q)?;
        let (lo_d, _) = c.den.slot_range(Q).expect("nonzero denominator");
        let mut v = lo_n - lo_d;
        for (b, e) in &c.factors {
            let k = b.q_exponent();
            if k.is_negative() {
                v += k * Rational::from_integer(BigInt::from(*e));
            }
        }
        Some(v)
    }

    /// Degree in `q` at infinity: `deg num - deg den`.
    pub fn q_degree(&self) -> Option<Rational> {
        let c = self.canonical();
        let (_, hi_n) = c.num.slot_range(Q)?;
        let (_, hi_d) = c.den.slot_range(Q).expect("nonzero denominator");
        let mut v = hi_n - hi_d;
        for (b, e) in &c.factors {
            let k = b.q_exponent();
            if k.is_positive() {
                v += k * Rational::from_integer(BigInt::from(*e));
            }
        }
        Some(v)
    }

    /// Largest lattice denominator appearing anywhere.
    pub fn lattice_den(&self) -> i64 {
        let mut d = self.num.max_abs_den().max(self.den.max_abs_den());
        for b in self.factors.keys() {
            d = num_integer::lcm(d, b.mono.exps.den());
        }
        d
    }

    /// Largest cyclotomic order among coefficients and phases.
    pub fn max_cyclotomic_order(&self) -> i64 {
        let mut n = 1i64;
        let mut see = |c: &ExactScalar, m: &Monomial| {
            n = num_integer::lcm(n, c.order() as i64);
            n = num_integer::lcm(n, m.phase.order());
        };
        for (m, c) in self.num.terms().chain(self.den.terms()) {
            see(c, m);
        }
        for b in self.factors.keys() {
            see(&b.coef, &b.mono);
        }
        n
    }

    pub fn to_factored_string(&self) -> String {
        let mut s = String::new();
        let num = if self.num.len() > 1 { format!("({})", self.num) } else { self.num.to_string() };
        s.push_str(&num);
        if !self.den.is_one() {
            let den = if self.den.len() > 1 { format!("({})", self.den) } else { self.den.to_string() };
            s.push_str(" / ");
            s.push_str(&den);
        }
        for (b, e) in &self.factors {
            s.push_str(" * ");
            s.push_str(&b.to_string());
            if *e != 1 {
                s.push_str(&format!("^{e}"));
            }
        }
        s
    }

    pub fn to_expanded_string(&self) -> String {
        let (n, d) = self.canonical().simplify().expanded();
        if d.is_one() {
            n.to_string()
        } else {
            format!("({}) / ({})", n, d)
        }
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_factored_string())
    }
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

fn var_rational(i: usize, r: &Rational) -> ExponentVector {
    let mut v = vec![Rational::zero(); i + 1];
    v[i] = r.clone();
    ExponentVector::from_rationals(&v)
}

fn scalar_pow(v: &ExactScalar, e: i32) -> Result<ExactScalar> {
    let base = if e < 0 { v.inv().ok_or(Error::DivisionByZero)? } else { v.clone() };
    let mut out = ExactScalar::one();
    for _ in 0..e.unsigned_abs() {
        out = &out * &base;
    }
    Ok(out)
}

/// Orients `1 - c m`; returns the binomial and, when flipped, the unit
/// `(c, m)` such that `1 - c m = (-c m) * binomial`.
fn orient(c: &ExactScalar, m: &Monomial) -> (Binomial, Option<(ExactScalar, Monomial)>) {
    if m.exps.is_lex_positive() {
        (Binomial { mono: m.clone(), coef: c.clone() }, None)
    } else {
        let ci = c.inv().expect("nonzero coefficient");
        (Binomial { mono: m.inv(), coef: ci }, Some((c.clone(), m.clone())))
    }
}

/// `{x_1, ..., x_n}`: the product `prod (1 - x_i)` of phased monomials.
pub fn braces(xs: &[Monomial]) -> RatFun {
    let one = ExactScalar::one();
    RatFun::product(xs.iter().map(|x| RatFun::one_minus(&one, x)).collect::<Vec<_>>().iter())
}
