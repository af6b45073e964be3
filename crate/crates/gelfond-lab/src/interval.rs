//! Certified real and complex interval arithmetic over exact rational
//! endpoints.
//!
//! Ring operations (`+`, `-`, `*`, integer powers) are exact. Division,
//! square roots, `exp` and `ln` produce rigorous outward enclosures whose
//! width is controlled by a precision parameter in bits. Endpoints may be
//! rounded outward to dyadic rationals to keep coefficient sizes bounded
//! during long computations; rounding never loses containment.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::GlError;

/// Default starting precision for verifiers, in bits.
pub const DEFAULT_START_BITS: u32 = 128;
/// Default precision cap; escalation past this yields `Undecided`.
pub const DEFAULT_BITS_CAP: u32 = 4096;

/// A closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, PartialEq)]
pub struct RealInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl fmt::Debug for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", rational_to_decimal(&self.lo, 20), rational_to_decimal(&self.hi, 20))
    }
}

/// Decimal rendering with `digits` significant fractional digits,
/// truncated toward zero. Used only for display and certificates.
pub fn rational_to_decimal(r: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (r * BigRational::from_integer(scale.clone())).trunc();
    let int = scaled.to_integer();
    let neg = int.is_negative();
    let abs = int.magnitude().clone();
    let (q, rem) = abs.div_rem(scale.magnitude());
    let frac = format!("{:0width$}", rem, width = digits as usize);
    let frac = frac.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    if frac.is_empty() {
        format!("{}{}", sign, q)
    } else {
        format!("{}{}.{}", sign, q, frac)
    }
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl RealInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RealInterval { lo, hi }
    }

    pub fn point(v: BigRational) -> Self {
        RealInterval { lo: v.clone(), hi: v }
    }

    pub fn from_int(v: i64) -> Self {
        Self::point(big(v))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    pub fn contains_interval(&self, other: &RealInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn overlaps(&self, other: &RealInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / big(2)
    }

    pub fn abs(&self) -> RealInterval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            RealInterval::new(-self.hi.clone(), -self.lo.clone())
        } else {
            let m = std::cmp::max(-self.lo.clone(), self.hi.clone());
            RealInterval::new(BigRational::zero(), m)
        }
    }

    /// Exact integer power.
    pub fn powi(&self, k: u32) -> RealInterval {
        let mut acc = RealInterval::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Reciprocal; errors if the interval contains zero.
    pub fn recip(&self) -> Result<RealInterval, GlError> {
        if self.contains_zero() {
            return Err(GlError::DivisionByIntervalContainingZero);
        }
        Ok(RealInterval::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn div(&self, other: &RealInterval) -> Result<RealInterval, GlError> {
        Ok(self * &other.recip()?)
    }

    /// Outward rounding of both endpoints to dyadic rationals with roughly
    /// `bits` significant bits. Containment is preserved.
    pub fn round_out(&self, bits: u32) -> RealInterval {
        RealInterval::new(round_rational_down(&self.lo, bits), round_rational_up(&self.hi, bits))
    }

    /// Enclosure of the square root; requires `hi >= 0`. Any negative part
    /// of the interval is clamped at zero (useful for near-zero widths of
    /// quantities that are nonnegative by construction).
    pub fn sqrt(&self, bits: u32) -> Result<RealInterval, GlError> {
        if self.hi.is_negative() {
            return Err(GlError::NegativeSqrt);
        }
        let lo = if self.lo.is_negative() { BigRational::zero() } else { sqrt_lower(&self.lo, bits) };
        let hi = sqrt_upper(&self.hi, bits);
        Ok(RealInterval::new(lo, hi))
    }

    /// Rigorous enclosure of `exp` over the interval.
    pub fn exp(&self, bits: u32) -> RealInterval {
        RealInterval::new(exp_lower(&self.lo, bits), exp_upper(&self.hi, bits))
    }

    /// Rigorous enclosure of the natural logarithm; requires `lo > 0`.
    pub fn ln(&self, bits: u32) -> Result<RealInterval, GlError> {
        if !self.lo.is_positive() {
            return Err(GlError::LogOfNonPositive);
        }
        Ok(RealInterval::new(ln_lower(&self.lo, bits), ln_upper(&self.hi, bits)))
    }

    /// Enclosure of `x^e` for rational exponent `e`, for `x` with `lo > 0`
    /// (or `lo >= 0` and `e > 0`, where the zero endpoint maps to zero).
    pub fn pow_rational(&self, e: &BigRational, bits: u32) -> Result<RealInterval, GlError> {
        if e.is_integer() && e.to_integer().magnitude().bits() < 32 {
            let k = e.to_integer();
            let kk: u32 = k.magnitude().try_into().map_err(|_| GlError::ExponentOverflow)?;
            // round the base first so the repeated squaring stays near the
            // working precision; containment is preserved
            let base = if kk > 8 { self.round_out(bits + 16) } else { self.clone() };
            let p = base.powi(kk).round_out(bits);
            return if k.is_negative() { p.recip() } else { Ok(p) };
        }
        if self.lo.is_zero() && e.is_positive() {
            let hi_part = RealInterval::new(self.hi.clone(), self.hi.clone());
            let upper = hi_part.ln(bits)?;
            let upper = (&upper * &RealInterval::point(e.clone())).exp(bits);
            return Ok(RealInterval::new(BigRational::zero(), upper.hi));
        }
        let l = self.ln(bits)?;
        Ok((&l * &RealInterval::point(e.clone())).exp(bits).round_out(bits))
    }

    /// max of two intervals, elementwise on endpoints.
    pub fn max(&self, other: &RealInterval) -> RealInterval {
        RealInterval::new(
            std::cmp::max(self.lo.clone(), other.lo.clone()),
            std::cmp::max(self.hi.clone(), other.hi.clone()),
        )
    }

    pub fn min(&self, other: &RealInterval) -> RealInterval {
        RealInterval::new(
            std::cmp::min(self.lo.clone(), other.lo.clone()),
            std::cmp::min(self.hi.clone(), other.hi.clone()),
        )
    }

    /// `true` when every point of `self` is `<=` every point of `other`.
    pub fn certainly_le(&self, other: &RealInterval) -> bool {
        self.hi <= other.lo
    }

    /// `true` when every point of `self` is `>` every point of `other`.
    pub fn certainly_gt(&self, other: &RealInterval) -> bool {
        self.lo > other.hi
    }
}

impl Add for &RealInterval {
    type Output = RealInterval;
    fn add(self, rhs: &RealInterval) -> RealInterval {
        RealInterval::new(&self.lo + &rhs.lo, &self.hi + &rhs.hi)
    }
}

impl Sub for &RealInterval {
    type Output = RealInterval;
    fn sub(self, rhs: &RealInterval) -> RealInterval {
        RealInterval::new(&self.lo - &rhs.hi, &self.hi - &rhs.lo)
    }
}

impl Neg for &RealInterval {
    type Output = RealInterval;
    fn neg(self) -> RealInterval {
        RealInterval::new(-self.hi.clone(), -self.lo.clone())
    }
}

impl Mul for &RealInterval {
    type Output = RealInterval;
    fn mul(self, rhs: &RealInterval) -> RealInterval {
        let c = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RealInterval::new(lo, hi)
    }
}

/// Round a rational down to a dyadic with about `bits` significant bits.
pub fn round_rational_down(r: &BigRational, bits: u32) -> BigRational {
    dyadic_round(r, bits, false)
}

/// Round a rational up to a dyadic with about `bits` significant bits.
pub fn round_rational_up(r: &BigRational, bits: u32) -> BigRational {
    dyadic_round(r, bits, true)
}

fn dyadic_round(r: &BigRational, bits: u32, up: bool) -> BigRational {
    if r.is_zero() {
        return r.clone();
    }
    let nbits = r.numer().magnitude().bits() as i64;
    let dbits = r.denom().magnitude().bits() as i64;
    // shift so the scaled value has ~bits significant bits; shift may be
    // negative for values far above 1 (the grid is then 2^{-shift} Z)
    let shift = bits as i64 - (nbits - dbits);
    let scaled = if shift >= 0 {
        r * BigRational::from_integer(BigInt::from(1u8) << (shift as u64))
    } else {
        r / BigRational::from_integer(BigInt::from(1u8) << ((-shift) as u64))
    };
    let f = scaled.floor().to_integer();
    let num = if up && BigRational::from_integer(f.clone()) != scaled { f + 1 } else { f };
    if shift >= 0 {
        BigRational::new(num, BigInt::from(1u8) << (shift as u64))
    } else {
        BigRational::from_integer(num << ((-shift) as u64))
    }
}

fn isqrt_floor(n: &BigInt) -> BigInt {
    n.sqrt()
}

/// Lower bound on sqrt(r), r >= 0. The input is rounded down to the
/// working precision first.
fn sqrt_lower(r: &BigRational, bits: u32) -> BigRational {
    if r.is_zero() {
        return BigRational::zero();
    }
    let r = round_rational_down(r, bits + 16);
    if !r.is_positive() {
        return BigRational::zero();
    }
    // sqrt(p/q) = sqrt(p*q)/q ; scale by 4^g for g guard bits
    let g = bits as u64 + 2;
    let p = r.numer();
    let q = r.denom();
    let scaled = p * q << (2 * g);
    let root = isqrt_floor(&scaled);
    BigRational::new(root, q << g)
}

/// Upper bound on sqrt(r), r >= 0. The input is rounded up to the
/// working precision first.
fn sqrt_upper(r: &BigRational, bits: u32) -> BigRational {
    if r.is_zero() {
        return BigRational::zero();
    }
    let r = round_rational_up(r, bits + 16);
    let g = bits as u64 + 2;
    let p = r.numer();
    let q = r.denom();
    let scaled = p * q << (2 * g);
    let root = isqrt_floor(&scaled) + 1;
    BigRational::new(root, q << g)
}

/// Enclosure of exp(r) for a rational point, as (lower, upper). The input
/// is first rounded outward to the working precision so the Taylor series
/// never carries the full exact size of `r`.
fn exp_point(r: &BigRational, bits: u32) -> (BigRational, BigRational) {
    let lo = exp_point_dir(&round_rational_down(r, bits + 16), bits).0;
    let hi = exp_point_dir(&round_rational_up(r, bits + 16), bits).1;
    (lo, hi)
}

fn exp_point_dir(r: &BigRational, bits: u32) -> (BigRational, BigRational) {
    if r.is_zero() {
        return (BigRational::one(), BigRational::one());
    }
    if r.is_negative() {
        let (lo, hi) = exp_point_dir(&-r.clone(), bits);
        // 1/hi <= exp(r) <= 1/lo
        return (hi.recip(), lo.recip());
    }
    // argument reduction: t = r / 2^k with t <= 1/2, k in one shot
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut t = r.clone();
    let lead = r.numer().magnitude().bits() as i64 - r.denom().magnitude().bits() as i64;
    let mut k: u64 = if *r > half { (lead + 2).max(1) as u64 } else { 0 };
    if k > 0 {
        t /= BigRational::from_integer(BigInt::from(1u8) << k);
        while t <= &half / big_rat(2) && k > 0 {
            t *= big_rat(2);
            k -= 1;
        }
    }
    let guard = bits as u64 + k + 8;
    // Taylor sum_{i<N} t^i/i!, tail <= 2 (1/2)^N / N!
    let mut sum = BigRational::one();
    let mut term = BigRational::one();
    let mut n: u64 = 1;
    loop {
        term = &term * &t / BigRational::from_integer(BigInt::from(n));
        sum += &term;
        // tail bound: term * t / (1 - t) <= term  (since t <= 1/2)
        let tail = &term;
        if tail.numer().magnitude().bits() + guard < tail.denom().magnitude().bits() {
            break;
        }
        n += 1;
        if n > 10_000 {
            break;
        }
    }
    let tail = term.clone(); // |remainder| <= last term since t <= 1/2 gives geometric ratio <= 1/2... conservative: use 2*term
    let tail = tail * big_rat(2);
    let mut lo = &sum - &tail;
    let mut hi = &sum + &tail;
    if lo.is_negative() {
        lo = BigRational::zero();
    }
    // square k times, rounding outward to keep sizes in check
    for _ in 0..k {
        lo = &lo * &lo;
        hi = &hi * &hi;
        lo = round_rational_down(&lo, guard as u32 + 16);
        hi = round_rational_up(&hi, guard as u32 + 16);
        if lo.is_negative() {
            lo = BigRational::zero();
        }
    }
    (
        round_rational_down(&lo, bits + 8),
        round_rational_up(&hi, bits + 8),
    )
}

fn big_rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn exp_lower(r: &BigRational, bits: u32) -> BigRational {
    exp_point(r, bits).0
}

fn exp_upper(r: &BigRational, bits: u32) -> BigRational {
    exp_point(r, bits).1
}

/// Enclosure of ln 2 as (lower, upper): ln 2 = 2 atanh(1/3).
fn ln2_enclosure(bits: u32) -> (BigRational, BigRational) {
    // 2 * sum_{i>=0} (1/3)^{2i+1} / (2i+1); tail after i = N-1 is
    // bounded by (1/3)^{2N+1}/(2N+1) * 9/8 * 2.
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let third2 = &third * &third;
    let mut sum = BigRational::zero();
    let mut pow = third.clone();
    let mut i: u64 = 0;
    loop {
        sum += &pow / big_rat(2 * i as i64 + 1);
        pow = &pow * &third2;
        if pow.denom().magnitude().bits() > pow.numer().magnitude().bits() + bits as u64 + 8 {
            break;
        }
        i += 1;
    }
    let tail = &pow * &big_rat(3) / big_rat(2); // crude geometric bound
    let lo = (&sum) * big_rat(2);
    let hi = (&sum + &tail) * big_rat(2);
    (lo, hi)
}

/// Enclosure of ln(r) for rational r > 0, as (lower, upper). The input is
/// first rounded outward to the working precision so the series never
/// carries the full exact size of `r`.
fn ln_point(r: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(r.is_positive());
    let rl = round_rational_down(r, bits + 16);
    let rh = round_rational_up(r, bits + 16);
    let lo = ln_point_dir(&rl, bits).0;
    let hi = ln_point_dir(&rh, bits).1;
    (lo, hi)
}

fn ln_point_dir(r: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(r.is_positive());
    if r.is_one() {
        return (BigRational::zero(), BigRational::zero());
    }
    if *r < BigRational::one() {
        let (lo, hi) = ln_point_dir(&r.recip(), bits);
        return (-hi, -lo);
    }
    // write r = 2^k * m with m in [1, 2), k in one shot
    let two = big_rat(2);
    let mut k: i64 =
        (r.numer().magnitude().bits() as i64 - r.denom().magnitude().bits() as i64 - 1).max(0);
    let mut m = if k > 0 {
        r / BigRational::from_integer(BigInt::from(1u8) << (k as u64))
    } else {
        r.clone()
    };
    while m >= two {
        m /= &two;
        k += 1;
    }
    while m < BigRational::one() {
        m *= &two;
        k -= 1;
    }
    // ln m = 2 atanh(u), u = (m-1)/(m+1) in [0, 1/3)
    let u = (&m - BigRational::one()) / (&m + BigRational::one());
    let u2 = &u * &u;
    let mut sum = BigRational::zero();
    let mut pow = u.clone();
    let mut i: u64 = 0;
    if !u.is_zero() {
        loop {
            sum += &pow / big_rat(2 * i as i64 + 1);
            pow = &pow * &u2;
            if pow.numer().is_zero()
                || pow.denom().magnitude().bits() > pow.numer().magnitude().bits() + bits as u64 + 8
            {
                break;
            }
            i += 1;
            if i > 100_000 {
                break;
            }
        }
    }
    let tail = if u.is_zero() { BigRational::zero() } else { &pow * big_rat(2) };
    let lnm_lo = (&sum) * big_rat(2);
    let lnm_hi = (&sum + &tail) * big_rat(2);
    let (l2lo, l2hi) = ln2_enclosure(bits);
    let kk = big_rat(k);
    let lo = &kk * &l2lo + lnm_lo;
    let hi = &kk * &l2hi + lnm_hi;
    (
        round_rational_down(&lo, bits + 8),
        round_rational_up(&hi, bits + 8),
    )
}

fn ln_lower(r: &BigRational, bits: u32) -> BigRational {
    ln_point(r, bits).0
}

fn ln_upper(r: &BigRational, bits: u32) -> BigRational {
    ln_point(r, bits).1
}

/// A rectangular complex enclosure with a precision tag.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexEnclosure {
    pub re: RealInterval,
    pub im: RealInterval,
    pub bits: u32,
}

impl ComplexEnclosure {
    pub fn new(re: RealInterval, im: RealInterval, bits: u32) -> Self {
        ComplexEnclosure { re, im, bits }
    }

    pub fn from_rational(re: BigRational) -> Self {
        ComplexEnclosure {
            re: RealInterval::point(re),
            im: RealInterval::zero(),
            bits: u32::MAX,
        }
    }

    pub fn from_rationals(re: BigRational, im: BigRational) -> Self {
        ComplexEnclosure {
            re: RealInterval::point(re),
            im: RealInterval::point(im),
            bits: u32::MAX,
        }
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn is_exact(&self) -> bool {
        self.re.is_point() && self.im.is_point()
    }

    /// The exact rational value, when the enclosure is an exact real point.
    pub fn as_exact_rational(&self) -> Option<BigRational> {
        if self.is_exact() && self.im.lo.is_zero() {
            Some(self.re.lo.clone())
        } else {
            None
        }
    }

    pub fn add(&self, other: &ComplexEnclosure) -> ComplexEnclosure {
        ComplexEnclosure {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
            bits: self.bits.min(other.bits),
        }
    }

    pub fn sub(&self, other: &ComplexEnclosure) -> ComplexEnclosure {
        ComplexEnclosure {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
            bits: self.bits.min(other.bits),
        }
    }

    pub fn mul(&self, other: &ComplexEnclosure) -> ComplexEnclosure {
        let re = &(&self.re * &other.re) - &(&self.im * &other.im);
        let im = &(&self.re * &other.im) + &(&self.im * &other.re);
        ComplexEnclosure { re, im, bits: self.bits.min(other.bits) }
    }

    pub fn scale(&self, c: &BigRational) -> ComplexEnclosure {
        let ci = RealInterval::point(c.clone());
        ComplexEnclosure { re: &self.re * &ci, im: &self.im * &ci, bits: self.bits }
    }

    pub fn neg(&self) -> ComplexEnclosure {
        ComplexEnclosure { re: -&self.re, im: -&self.im, bits: self.bits }
    }

    /// Enclosure of |z|.
    pub fn abs(&self, bits: u32) -> RealInterval {
        if self.im.lo.is_zero() && self.im.hi.is_zero() {
            return self.re.abs();
        }
        let sq = &(&self.re * &self.re) + &(&self.im * &self.im);
        sq.sqrt(bits).expect("modulus square is nonnegative")
    }

    /// Enclosure of |z|^2, exact.
    pub fn abs_sq(&self) -> RealInterval {
        let s = &(&self.re * &self.re) + &(&self.im * &self.im);
        // clamp: |z|^2 is nonnegative even if interval ops produced a
        // spurious negative lower bound
        if s.lo.is_negative() {
            RealInterval::new(BigRational::zero(), s.hi)
        } else {
            s
        }
    }

    pub fn round_out(&self, bits: u32) -> ComplexEnclosure {
        ComplexEnclosure {
            re: self.re.round_out(bits),
            im: self.im.round_out(bits),
            bits: self.bits,
        }
    }

    /// Parse a decimal string (optionally signed, with fractional part) as
    /// an exact rational.
    pub fn rational_from_decimal(s: &str) -> Result<BigRational, GlError> {
        let s = s.trim();
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1i64, rest),
            None => (1, s.strip_prefix('+').unwrap_or(s)),
        };
        let mut parts = body.splitn(2, '.');
        let int_part = parts.next().unwrap_or("");
        let frac_part = parts.next().unwrap_or("");
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(GlError::Parse(format!("bad decimal: {s}")));
        }
        let digits: String = format!("{int_part}{frac_part}");
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(GlError::Parse(format!("bad decimal: {s}")));
        }
        let num: BigInt = digits.parse().map_err(|_| GlError::Parse(format!("bad decimal: {s}")))?;
        let den = BigInt::from(10u8).pow(frac_part.len() as u32);
        Ok(BigRational::new(num * BigInt::from(sign), den))
    }
}
