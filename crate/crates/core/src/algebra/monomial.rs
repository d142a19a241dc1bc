//! Exponent vectors on a rational lattice, roots-of-unity phases, and
//! characters (phase times monomial).
//!
//! Variable slots: index 0 is `q`, index 1 is `h` (the twist parameter
//! written ħ in formulas), index `2 + k` is the torus variable `a<k>`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use smallvec::SmallVec;

use super::scalar::Rational;

pub const Q: usize = 0;
pub const HBAR: usize = 1;

pub const fn a_var(k: usize) -> usize {
    2 + k
}

/// Element of `Q/Z`, read as the root of unity `exp(2 pi i * self)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase {
    num: i64,
    den: i64,
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ZERO
    }
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den: 1 };

    pub fn new(num: i64, den: i64) -> Phase {
        assert!(den != 0, "phase with zero denominator");
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let num = num.rem_euclid(den);
        let g = num.gcd(&den);
        Phase { num: num / g, den: den / g }
    }

    pub fn from_rational(r: &Rational) -> Phase {
        Phase::new(r.numer().to_i64().expect("phase overflow"), r.denom().to_i64().expect("phase overflow"))
    }

    /// `(k, n)` with `0 <= k < n`, `gcd(k, n) = 1` (or `(0, 1)`).
    pub fn parts(&self) -> (i64, i64) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn order(&self) -> i64 {
        self.den
    }

    pub fn add(&self, other: &Phase) -> Phase {
        Phase::new(self.num * other.den + other.num * self.den, self.den * other.den)
    }

    pub fn neg(&self) -> Phase {
        Phase::new(-self.num, self.den)
    }

    pub fn scale(&self, r: i64) -> Phase {
        Phase::new(self.num * r, self.den)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z{}^{}", self.den, self.num)
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Vector of rational exponents sharing one denominator.
///
/// Stored normalized: `den > 0`, gcd of all numerators and `den` is 1, no
/// trailing zero slots. Equality is therefore structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    nums: SmallVec<[i64; 6]>,
    den: i64,
}

impl Default for ExponentVector {
    fn default() -> Self {
        Self::zero()
    }
}

impl ExponentVector {
    pub fn zero() -> Self {
        ExponentVector { nums: SmallVec::new(), den: 1 }
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        Self::from_parts(entries.iter().copied().collect(), 1)
    }

    /// Single variable raised to an integer power.
    pub fn var(index: usize, power: i64) -> Self {
        let mut nums: SmallVec<[i64; 6]> = SmallVec::from_elem(0, index + 1);
        nums[index] = power;
        Self::from_parts(nums, 1)
    }

    pub fn from_rationals(entries: &[Rational]) -> Self {
        let mut den = BigInt::from(1);
        for e in entries {
            den = den.lcm(e.denom());
        }
        let den_i = den.to_i64().expect("exponent denominator overflow");
        let nums = entries
            .iter()
            .map(|e| (e.numer() * (&den / e.denom())).to_i64().expect("exponent overflow"))
            .collect();
        Self::from_parts(nums, den_i)
    }

    pub fn from_parts(mut nums: SmallVec<[i64; 6]>, mut den: i64) -> Self {
        assert!(den != 0);
        if den < 0 {
            den = -den;
            for n in nums.iter_mut() {
                *n = -*n;
            }
        }
        while nums.last() == Some(&0) {
            nums.pop();
        }
        let mut g = den;
        for &n in &nums {
            g = gcd_i64(g, n);
        }
        if g > 1 {
            den /= g;
            for n in nums.iter_mut() {
                *n /= g;
            }
        }
        ExponentVector { nums, den }
    }

    pub fn len(&self) -> usize {
        self.nums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nums.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.nums.is_empty()
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn numerator(&self, i: usize) -> i64 {
        self.nums.get(i).copied().unwrap_or(0)
    }

    pub fn get(&self, i: usize) -> Rational {
        Rational::new(BigInt::from(self.numerator(i)), BigInt::from(self.den))
    }

    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    /// The `i`-th entry when it is an integer.
    pub fn get_int(&self, i: usize) -> Option<i64> {
        let n = self.numerator(i);
        if n % self.den == 0 {
            Some(n / self.den)
        } else {
            None
        }
    }

    pub fn entries(&self) -> Vec<Rational> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let l = self.den.lcm(&other.den);
        let (fa, fb) = (l / self.den, l / other.den);
        let n = self.len().max(other.len());
        let nums = (0..n).map(|i| self.numerator(i) * fa + other.numerator(i) * fb).collect();
        Self::from_parts(nums, l)
    }

    pub fn neg(&self) -> Self {
        ExponentVector { nums: self.nums.iter().map(|n| -n).collect(), den: self.den }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale_int(&self, r: i64) -> Self {
        Self::from_parts(self.nums.iter().map(|n| n * r).collect(), self.den)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let p = r.numer().to_i64().expect("scale overflow");
        let d = r.denom().to_i64().expect("scale overflow");
        Self::from_parts(self.nums.iter().map(|n| n * p).collect(), self.den * d)
    }

    /// Copy with slot `i` set to zero.
    pub fn without(&self, i: usize) -> Self {
        let mut nums = self.nums.clone();
        if i < nums.len() {
            nums[i] = 0;
        }
        Self::from_parts(nums, self.den)
    }

    /// Restriction to the torus slots `a<k>`, as rationals indexed by `k`.
    pub fn a_part(&self, m: usize) -> Vec<Rational> {
        (0..m).map(|k| self.get(a_var(k))).collect()
    }

    pub fn has_only_a(&self) -> bool {
        self.numerator(Q) == 0 && self.numerator(HBAR) == 0
    }

    /// Index of the first nonzero slot.
    pub fn leading_index(&self) -> Option<usize> {
        self.nums.iter().position(|&n| n != 0)
    }

    /// First nonzero entry is positive.
    pub fn is_lex_positive(&self) -> bool {
        self.leading_index().is_some_and(|i| self.nums[i] > 0)
    }

    /// Pairing with a rational vector over all slots.
    pub fn dot(&self, sigma: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, s) in sigma.iter().enumerate() {
            let n = self.numerator(i);
            if n != 0 {
                acc += s * Rational::from_integer(BigInt::from(n));
            }
        }
        acc / Rational::from_integer(BigInt::from(self.den))
    }

    /// Pairing of the torus part with `sigma` indexed by torus variable.
    pub fn dot_a(&self, sigma: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (k, s) in sigma.iter().enumerate() {
            let n = self.numerator(a_var(k));
            if n != 0 {
                acc += s * Rational::from_integer(BigInt::from(n));
            }
        }
        acc / Rational::from_integer(BigInt::from(self.den))
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.len().max(other.len());
        for i in 0..n {
            let a = self.numerator(i) as i128 * other.den as i128;
            let b = other.numerator(i) as i128 * self.den as i128;
            match a.cmp(&b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn var_name(i: usize) -> String {
    match i {
        Q => "q".to_string(),
        HBAR => "h".to_string(),
        _ => format!("a{}", i - 2),
    }
}

fn fmt_exponent(n: i64, d: i64) -> String {
    if d == 1 {
        n.to_string()
    } else {
        let g = n.gcd(&d);
        format!("{}/{}", n / g, d / g)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &n) in self.nums.iter().enumerate() {
            if n == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if n == self.den {
                write!(f, "{}", var_name(i))?;
            } else {
                write!(f, "{}^{}", var_name(i), fmt_exponent(n, self.den))?;
            }
        }
        Ok(())
    }
}

/// A character: root of unity times a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    pub exps: ExponentVector,
    pub phase: Phase,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn new(exps: ExponentVector, phase: Phase) -> Self {
        Monomial { exps, phase }
    }

    pub fn from_exps(exps: ExponentVector) -> Self {
        Monomial { exps, phase: Phase::ZERO }
    }

    pub fn var(index: usize, power: i64) -> Self {
        Self::from_exps(ExponentVector::var(index, power))
    }

    pub fn q() -> Self {
        Self::var(Q, 1)
    }

    pub fn hbar() -> Self {
        Self::var(HBAR, 1)
    }

    pub fn a(k: usize) -> Self {
        Self::var(a_var(k), 1)
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_zero() && self.phase.is_zero()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial { exps: self.exps.add(&other.exps), phase: self.phase.add(&other.phase) }
    }

    pub fn inv(&self) -> Monomial {
        Monomial { exps: self.exps.neg(), phase: self.phase.neg() }
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    pub fn pow(&self, r: i64) -> Monomial {
        Monomial { exps: self.exps.scale_int(r), phase: self.phase.scale(r) }
    }

    /// `r`-th root choosing the branch `zeta_r^s` on top of the principal
    /// phase root.
    pub fn root(&self, r: i64, s: i64) -> Monomial {
        let (k, n) = self.phase.parts();
        let phase = Phase::new(k, n * r).add(&Phase::new(s, r));
        Monomial { exps: self.exps.scale(&Rational::new(BigInt::from(1), BigInt::from(r))), phase }
    }

    pub fn with_phase(&self, phase: Phase) -> Monomial {
        Monomial { exps: self.exps.clone(), phase }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase.is_zero() {
            write!(f, "{}", self.exps)
        } else if self.exps.is_zero() {
            write!(f, "{}", self.phase)
        } else {
            write!(f, "{} {}", self.phase, self.exps)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::rat;

    #[test]
    fn normalization_is_structural() {
        let a = ExponentVector::from_parts(SmallVec::from_slice(&[2, 0, 4, 0]), 4);
        let b = ExponentVector::from_rationals(&[rat(1, 2), rat(0, 1), rat(1, 1)]);
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        assert_eq!(a.den(), 2);
    }

    #[test]
    fn lattice_closure() {
        let a = ExponentVector::from_rationals(&[rat(1, 3)]);
        let b = ExponentVector::from_rationals(&[rat(1, 2), rat(-1, 2)]);
        let s = a.add(&b);
        assert_eq!(s.get(0), rat(5, 6));
        assert_eq!(s.sub(&b), a);
        assert!(a.add(&a.neg()).is_zero());
    }

    #[test]
    fn lex_order_on_values() {
        let a = ExponentVector::from_rationals(&[rat(1, 2)]);
        let b = ExponentVector::from_ints(&[1]);
        let c = ExponentVector::from_ints(&[0, 5]);
        assert!(a < b);
        assert!(c < a);
        assert!(ExponentVector::zero() < c);
    }

    #[test]
    fn phases() {
        assert_eq!(Phase::new(3, 2), Phase::new(1, 2));
        assert_eq!(Phase::new(-1, 4), Phase::new(3, 4));
        assert!(Phase::new(1, 3).scale(3).is_zero());
        assert_eq!(Phase::new(1, 2).add(&Phase::new(1, 3)), Phase::new(5, 6));
    }

    #[test]
    fn roots() {
        let w = Monomial::a(0).div(&Monomial::a(1));
        let r = w.root(2, 1);
        assert_eq!(r.pow(2), w);
        assert_eq!(r.phase, Phase::new(1, 2));
        assert_eq!(r.to_string(), "z2^1 a0^1/2 a1^-1/2");
    }
}
