//! Exact elements of cyclotomic fields `Q(zeta_N)`.
//!
//! An element is stored in the power basis `1, z, ..., z^(phi(N)-1)` of
//! `Q[z] / Phi_N(z)`. Binary operations between different orders lift both
//! operands into `Q(zeta_lcm)`. Elements that turn out to be rational are
//! demoted to order 1 so that the rational fast path stays hot.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::monomial::Phase;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn totient(n: u32) -> usize {
    let mut n = n as u64;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic order must be positive");
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_polynomial(d);
            num = exact_int_division(&num, &div);
        }
    }
    let arc = Arc::new(num);
    cyclotomic_cache().lock().unwrap().insert(n, arc.clone());
    arc
}

fn exact_int_division(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return vec![0];
    }
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Element of `Q(zeta_order)`.
#[derive(Clone, Debug)]
pub struct ExactScalar {
    order: u32,
    coeffs: Vec<Rational>,
}

impl ExactScalar {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        ExactScalar { order: 1, coeffs: vec![r] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }

    /// `exp(2 pi i * phase)`.
    pub fn root_of_unity(phase: &Phase) -> Self {
        let (k, n) = phase.parts();
        if n == 1 {
            return Self::one();
        }
        let mut raw = vec![Rational::zero(); k as usize + 1];
        raw[k as usize] = Rational::one();
        Self::from_raw(n as u32, raw)
    }

    /// Builds from an arbitrary-degree polynomial in `zeta_order`.
    pub fn from_raw(order: u32, raw: Vec<Rational>) -> Self {
        let mut s = ExactScalar { order, coeffs: reduce_mod_cyclotomic(raw, order) };
        s.normalize();
        s
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.order == 1
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.order == 1 {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        if self.order != 1 && self.coeffs.iter().skip(1).all(Zero::is_zero) {
            let c = self.coeffs.swap_remove(0);
            self.order = 1;
            self.coeffs = vec![c];
        }
    }

    /// Embeds into `Q(zeta_target)`; `self.order` must divide `target`.
    pub fn lift(&self, target: u32) -> ExactScalar {
        assert!(target % self.order == 0, "cannot lift Q(zeta_{}) into Q(zeta_{})", self.order, target);
        if target == self.order {
            return self.clone();
        }
        let step = (target / self.order) as usize;
        let mut raw = vec![Rational::zero(); (self.coeffs.len().saturating_sub(1)) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[i * step] = c.clone();
        }
        ExactScalar { order: target, coeffs: reduce_mod_cyclotomic(raw, target) }
    }

    fn common(&self, other: &ExactScalar) -> (ExactScalar, ExactScalar, u32) {
        if self.order == other.order {
            return (self.clone(), other.clone(), self.order);
        }
        let n = self.order.lcm(&other.order);
        (self.lift(n), other.lift(n), n)
    }

    pub fn mul_rational(&self, r: &Rational) -> ExactScalar {
        let mut s = ExactScalar { order: self.order, coeffs: self.coeffs.iter().map(|c| c * r).collect() };
        s.normalize();
        s
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<ExactScalar> {
        if self.is_zero() {
            return None;
        }
        if self.order == 1 {
            return Some(Self::from_rational(self.coeffs[0].recip()));
        }
        let modulus: Vec<Rational> = cyclotomic_polynomial(self.order).iter().map(|&c| rat_int(c)).collect();
        let inv = poly_inverse_mod(&self.coeffs, &modulus)?;
        Some(ExactScalar::from_raw(self.order, inv))
    }

    /// Complex approximation, used only for diagnostics and tests.
    pub fn to_complex(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / self.order as f64;
            let v = c.to_f64().unwrap_or(f64::NAN);
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }
}

fn reduce_mod_cyclotomic(mut raw: Vec<Rational>, order: u32) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(order);
    let deg = phi.len() - 1;
    if raw.len() < deg {
        raw.resize(deg, Rational::zero());
        return raw;
    }
    for i in (deg..raw.len()).rev() {
        if raw[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut raw[i], Rational::zero());
        for (j, &pj) in phi.iter().enumerate().take(deg) {
            if pj != 0 {
                raw[i - deg + j] -= &c * rat_int(pj);
            }
        }
    }
    raw.truncate(deg);
    raw
}

fn poly_trim(p: &mut Vec<Rational>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    poly_trim(&mut rem);
    let mut b = b.to_vec();
    poly_trim(&mut b);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() <= db {
        return (vec![Rational::zero()], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] / &lead;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &c * bj;
            }
        }
        quot[i] = c;
    }
    rem.truncate(db.max(1));
    poly_trim(&mut rem);
    (quot, rem)
}

fn poly_sub_mul(a: &[Rational], q: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = a.to_vec();
    let len = (q.len() + b.len()).max(a.len());
    out.resize(len, Rational::zero());
    for (i, qi) in q.iter().enumerate() {
        if qi.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] -= qi * bj;
        }
    }
    poly_trim(&mut out);
    out
}

/// Inverse of `a` modulo `m` over `Q` via the extended Euclidean algorithm.
fn poly_inverse_mod(a: &[Rational], m: &[Rational]) -> Option<Vec<Rational>> {
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    poly_trim(&mut r1);
    let mut t0 = vec![Rational::zero()];
    let mut t1 = vec![Rational::one()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem(&r0, &r1);
        let t = poly_sub_mul(&t0, &q, &t1);
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t);
    }
    if r0.len() != 1 || r0[0].is_zero() {
        return None;
    }
    let c = r0[0].recip();
    Some(t0.into_iter().map(|x| x * &c).collect())
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b, _) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for ExactScalar {}

// Structural order for use as a map key. Values living in different
// cyclotomic orders compare by order first, so two equal values may sort
// apart; maps keyed on scalars then only lose some merging.
impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order.cmp(&other.order).then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}


impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        if self.order == 1 && rhs.order == 1 {
            return ExactScalar::from_rational(&self.coeffs[0] + &rhs.coeffs[0]);
        }
        let (a, b, n) = self.common(rhs);
        let mut s = ExactScalar { order: n, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() };
        s.normalize();
        s
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        self + &(-rhs)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        if self.order == 1 {
            return rhs.mul_rational(&self.coeffs[0]);
        }
        if rhs.order == 1 {
            return self.mul_rational(&rhs.coeffs[0]);
        }
        let (a, b, n) = self.common(rhs);
        let mut raw = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        ExactScalar::from_raw(n, raw)
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: ExactScalar) -> ExactScalar {
        &self + &rhs
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: ExactScalar) -> ExactScalar {
        &self * &rhs
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: ExactScalar) -> ExactScalar {
        &self - &rhs
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 1 {
            return write!(f, "{}", fmt_rational(&self.coeffs[0]));
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let z = match k {
                0 => String::new(),
                1 => format!("z{}", self.order),
                _ => format!("z{}^{}", self.order, k),
            };
            let s = if z.is_empty() {
                fmt_rational(c)
            } else if c.is_one() {
                z
            } else if (-c).is_one() {
                format!("-{z}")
            } else {
                format!("{}*{}", fmt_rational(c), z)
            };
            parts.push(s);
        }
        let mut out = String::from("(");
        for (i, p) in parts.iter().enumerate() {
            if i > 0 {
                if let Some(rest) = p.strip_prefix('-') {
                    out.push_str(" - ");
                    out.push_str(rest);
                    continue;
                }
                out.push_str(" + ");
            }
            out.push_str(p);
        }
        out.push(')');
        write!(f, "{out}")
    }
}
