//! Exact radical-rational numbers `Σ q_d·√d`.
//!
//! Every value is kept in canonical form: radicands are square-free positive
//! integers and no stored coefficient is zero, so structural equality is
//! numeric equality.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Splits `n` into `(outer, core)` with `n = outer² · core` and `core`
/// square-free.
pub(crate) fn square_free_split(mut n: u64) -> (u64, u64) {
    debug_assert!(n > 0);
    let mut outer = 1u64;
    let mut core = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0u32;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            outer *= p.pow(e / 2);
            if e % 2 == 1 {
                core *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (outer, core * n)
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            return p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    n
}

/// Exact number of the form `Σ q_d·√d` over square-free `d ≥ 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Scalar {
    terms: BTreeMap<u64, Rational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_integer(v: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(v)))
    }

    /// `num/den` as a rational scalar. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(1, q);
        }
        Self { terms }
    }

    /// `coeff · √radicand`, with any square factor of `radicand` pulled out.
    pub fn radical(coeff: Rational, radicand: u64) -> Self {
        assert!(radicand > 0, "radicand must be positive");
        if coeff.is_zero() {
            return Self::zero();
        }
        let (outer, core) = square_free_split(radicand);
        let mut terms = BTreeMap::new();
        terms.insert(core, coeff * Rational::from_integer(BigInt::from(outer)));
        Self { terms }
    }

    /// Exact square root of a nonnegative rational.
    pub fn sqrt_of(q: &Rational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::NegativeRadicand);
        }
        if q.is_zero() {
            return Ok(Self::zero());
        }
        // √(a/b) = √(a·b) / b
        let prod: BigUint = (q.numer() * q.denom())
            .to_biguint()
            .expect("product of positive integers");
        let prod = prod
            .to_u64()
            .ok_or_else(|| Error::RadicandOverflow(prod.to_string()))?;
        let (outer, core) = square_free_split(prod);
        let coeff = Rational::new(BigInt::from(outer), q.denom().clone());
        let mut terms = BTreeMap::new();
        terms.insert(core, coeff);
        Ok(Self { terms })
    }

    /// Iterates `(radicand, coefficient)` pairs in ascending radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(d, q)| (*d, q))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&1).is_some_and(|q| q.is_one())
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&d| d == 1)
    }

    pub fn to_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    /// Exact sign: -1, 0 or 1.
    ///
    /// Writes the value as `A + B·√p` for a prime `p` dividing some radicand,
    /// where `A` and `B` no longer involve `p`, and recurses. When `A` and `B`
    /// disagree in sign the comparison `A² ≷ p·B²` decides, and that
    /// expression involves strictly fewer primes.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if let Some(q) = self.to_rational() {
            return if q.is_positive() { 1 } else { -1 };
        }
        let largest = *self.terms.keys().next_back().expect("nonzero");
        let p = smallest_prime_factor(largest);
        let mut a = Scalar::zero();
        let mut b = Scalar::zero();
        for (&d, q) in &self.terms {
            if d % p == 0 {
                b.terms.insert(d / p, q.clone());
            } else {
                a.terms.insert(d, q.clone());
            }
        }
        let sa = a.signum();
        let sb = b.signum();
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let p_rat = Rational::from_integer(BigInt::from(p));
        let diff = &(&a * &a) - &(&(&b * &b) * &p_rat);
        match diff.signum() {
            1 => sa,
            -1 => sb,
            _ => unreachable!("√p is irrational over the field generated by the other radicals"),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Reciprocal of a single-term value `q·√d`, i.e. `√d / (q·d)`.
    pub fn recip_monomial(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&d, q) = self.terms.iter().next()?;
        let denom = q * Rational::from_integer(BigInt::from(d));
        let mut terms = BTreeMap::new();
        terms.insert(d, denom.recip());
        Some(Self { terms })
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&d, q)| q.to_f64().unwrap_or(f64::NAN) * libm::sqrt(d as f64))
            .sum()
    }

    fn add_term(&mut self, d: u64, q: Rational) {
        if q.is_zero() {
            return;
        }
        match self.terms.get_mut(&d) {
            Some(existing) => {
                *existing += q;
                if existing.is_zero() {
                    self.terms.remove(&d);
                }
            }
            None => {
                self.terms.insert(d, q);
            }
        }
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (&d, q) in &rhs.terms {
            self.add_term(d, q.clone());
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        for (d, q) in rhs.terms {
            self.add_term(d, q);
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(&d, q)| (d, -q)).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(mut self) -> Scalar {
        for q in self.terms.values_mut() {
            *q = -core::mem::take(q);
        }
        self
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(mut self, rhs: Scalar) -> Scalar {
        self -= &rhs;
        self
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (&d, q) in &rhs.terms {
            self.add_term(d, -q);
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (&d1, q1) in &self.terms {
            for (&d2, q2) in &rhs.terms {
                // √d1·√d2 = g·√((d1/g)(d2/g)) with g = gcd(d1, d2); the
                // cofactors are coprime and square-free, so the result is too.
                let g = d1.gcd(&d2);
                let d = (d1 / g)
                    .checked_mul(d2 / g)
                    .expect("radicand product overflows u64");
                let q = q1 * q2 * Rational::from_integer(BigInt::from(g));
                out.add_term(d, q);
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Mul<&Rational> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Rational) -> Scalar {
        if rhs.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(&d, q)| (d, q * rhs)).collect(),
        }
    }
}

impl Div<&Rational> for &Scalar {
    type Output = Scalar;
    /// Panics on division by zero, like the rational division it wraps.
    fn div(self, rhs: &Rational) -> Scalar {
        assert!(!rhs.is_zero(), "division by zero");
        Scalar {
            terms: self.terms.iter().map(|(&d, q)| (d, q / rhs)).collect(),
        }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Self {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Self {
        iter.fold(Scalar::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Renders as signed terms `[rat][*sqrt(d)]`, rational part first:
/// `1+1/2*sqrt(3)`, `-sqrt(2)`, `0`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (&d, q)) in self.terms.iter().enumerate() {
            let neg = q.is_negative();
            if neg {
                f.write_str("-")?;
            } else if idx > 0 {
                f.write_str("+")?;
            }
            let mag = q.abs();
            if d == 1 {
                f.write_str(&fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "sqrt({d})")?;
            } else {
                write!(f, "{}*sqrt({d})", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn parse_term(body: &str) -> Result<Scalar> {
    let bad = || Error::Parse(format!("invalid term `{body}`"));
    let (coeff, radical) = if let Some(idx) = body.find("sqrt(") {
        let rad = &body[idx..];
        let coeff = body[..idx].strip_suffix('*').unwrap_or(&body[..idx]);
        (coeff, Some(rad))
    } else {
        (body, None)
    };
    let q = if coeff.is_empty() {
        if radical.is_none() {
            return Err(bad());
        }
        Rational::one()
    } else {
        parse_rational(coeff)?
    };
    match radical {
        None => Ok(Scalar::from_rational(q)),
        Some(rad) => {
            // optional trailing divisor, as in `sqrt(3)/2`
            let (rad, q) = match rad.rsplit_once(")/") {
                Some((head, den)) => {
                    let den = parse_rational(den)?;
                    if den.is_zero() {
                        return Err(Error::Parse(format!("zero divisor in `{body}`")));
                    }
                    (&rad[..head.len() + 1], q / den)
                }
                None => (rad, q),
            };
            let inner = rad
                .strip_prefix("sqrt(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(bad)?;
            let d: u64 = inner.parse().map_err(|_| bad())?;
            if d == 0 {
                return Ok(Scalar::zero());
            }
            Ok(Scalar::radical(q, d))
        }
    }
}

/// Parses a sum of signed terms, each `[rat][*sqrt(int)]`, optionally
/// followed by `/int` after the radical; whitespace is ignored and radicands
/// need not be square-free.
impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let mut pieces: Vec<(bool, &str)> = Vec::new();
        let mut start = 0usize;
        let mut negative = false;
        let bytes = compact.as_bytes();
        let mut i = 0usize;
        if bytes[0] == b'+' || bytes[0] == b'-' {
            negative = bytes[0] == b'-';
            start = 1;
            i = 1;
        }
        while i < bytes.len() {
            let c = bytes[i];
            if (c == b'+' || c == b'-') && i > start {
                pieces.push((negative, &compact[start..i]));
                negative = c == b'-';
                start = i + 1;
            }
            i += 1;
        }
        pieces.push((negative, &compact[start..]));
        let mut total = Scalar::zero();
        for (neg, body) in pieces {
            if body.is_empty() {
                return Err(Error::Parse(format!("dangling sign in `{s}`")));
            }
            let term = parse_term(body)?;
            total += if neg { -term } else { term };
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(
            Scalar::sqrt_of(&rat(4, 1)).unwrap(),
            Scalar::from_integer(2)
        );
        assert_eq!(
            Scalar::sqrt_of(&rat(3, 4)).unwrap(),
            Scalar::radical(rat(1, 2), 3)
        );
        let r = Scalar::sqrt_of(&rat(8, 9)).unwrap();
        assert_eq!(r, Scalar::radical(rat(2, 3), 2));
        assert_eq!(&r * &r, Scalar::from_ratio(8, 9));
        assert_eq!(Scalar::sqrt_of(&rat(-1, 2)), Err(Error::NegativeRadicand));
        assert!(Scalar::sqrt_of(&rat(0, 1)).unwrap().is_zero());
    }

    #[test]
    fn radicands_stay_square_free() {
        let a = Scalar::radical(Rational::one(), 6);
        let b = Scalar::radical(Rational::one(), 10);
        // √6·√10 = 2√15
        assert_eq!(&a * &b, Scalar::radical(rat(2, 1), 15));
        assert_eq!(
            Scalar::radical(Rational::one(), 12),
            Scalar::radical(rat(2, 1), 3)
        );
        assert_eq!(square_free_split(72), (6, 2));
        assert_eq!(square_free_split(1), (1, 1));
        assert_eq!(square_free_split(97), (1, 97));
    }

    #[test]
    fn cancellation_prunes_terms() {
        let a = s("1+sqrt(2)");
        let b = s("-sqrt(2)");
        let sum = &a + &b;
        assert!(sum.is_rational());
        assert_eq!(sum.terms().count(), 1);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_sign() {
        assert_eq!(s("sqrt(2)-1").signum(), 1);
        assert_eq!(s("1-sqrt(2)").signum(), -1);
        assert_eq!(s("3/2-sqrt(2)").signum(), 1);
        assert_eq!(s("7/5-sqrt(2)").signum(), -1);
        // 3.1462... against 3 and against 3.1623...
        assert_eq!(s("sqrt(2)+sqrt(3)-3").signum(), 1);
        assert_eq!(s("sqrt(2)+sqrt(3)-sqrt(10)").signum(), -1);
        assert_eq!(s("sqrt(5)+sqrt(7)-sqrt(2)-sqrt(3)-sqrt(6)").signum(), -1);
        assert_eq!(
            (&s("sqrt(6)") - &(&s("sqrt(2)") * &s("sqrt(3)"))).signum(),
            0
        );
        assert!(s("1/2") < s("sqrt(3)/2").abs() + s("0"));
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(s("1/2*sqrt(3)+1").to_string(), "1+1/2*sqrt(3)");
        assert_eq!(s("-sqrt(2)").to_string(), "-sqrt(2)");
        assert_eq!(s("2*sqrt(8)").to_string(), "4*sqrt(2)");
        assert_eq!(s(" 3 / 4 ").to_string(), "3/4");
        assert_eq!(s("0").to_string(), "0");
        assert_eq!(s("sqrt(4)"), Scalar::from_integer(2));
        assert_eq!(s("sqrt(3)/2"), s("1/2*sqrt(3)"));
        assert_eq!(s("-3*sqrt(2)/4"), s("-3/4*sqrt(2)"));
        assert!("sqrt(3)/0".parse::<Scalar>().is_err());
        assert!("".parse::<Scalar>().is_err());
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("1+".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
        assert!("sqrt(2".parse::<Scalar>().is_err());
    }

    #[test]
    fn monomial_reciprocal() {
        let c = Scalar::radical(rat(2, 3), 2);
        let r = c.recip_monomial().unwrap();
        assert_eq!(&c * &r, Scalar::one());
        assert!(s("1+sqrt(2)").recip_monomial().is_none());
    }

    #[test]
    fn float_value() {
        assert!((s("1/2*sqrt(3)").to_f64() - 0.866_025_403_784_438_6).abs() < 1e-15);
    }
}
