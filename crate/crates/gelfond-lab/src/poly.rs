//! Exact rational polynomials: norms, contents, heights, divided
//! derivatives, and certified evaluation at complex enclosures.
//!
//! The height of a nonzero vector or polynomial is the ratio of its max
//! norm to its content, where the content is the unique positive rational
//! making the scaled object a primitive integer one. The height of a single
//! rational p/q in reduced form is max(|p|, |q|).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

use crate::error::GlError;
use crate::interval::{ComplexEnclosure, RealInterval};
use crate::verdict::Verdict;

/// Univariate polynomial with exact rational coefficients, dense
/// low-to-high, no trailing zeros. The zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({self})")
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})T")?,
                _ => write!(f, "({c})T^{i}")?,
            }
        }
        Ok(())
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse `p/q` or `p` as an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, GlError> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num = BigInt::from_str(p.trim()).map_err(|_| GlError::Parse(format!("bad rational: {s}")))?;
        let den = BigInt::from_str(q.trim()).map_err(|_| GlError::Parse(format!("bad rational: {s}")))?;
        if den.is_zero() {
            return Err(GlError::Parse(format!("zero denominator: {s}")));
        }
        Ok(BigRational::new(num, den))
    } else {
        let num = BigInt::from_str(s).map_err(|_| GlError::Parse(format!("bad rational: {s}")))?;
        Ok(BigRational::from_integer(num))
    }
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RatPoly::from_coeffs(vec![rat(1)])
    }

    /// Coefficients low-to-high; trailing zeros are trimmed.
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&v| rat(v)).collect())
    }

    /// The monomial c * T^k.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = c;
        RatPoly { coeffs: v }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; errors on the zero polynomial.
    pub fn degree(&self) -> Result<usize, GlError> {
        if self.is_zero() {
            Err(GlError::ZeroPolynomial)
        } else {
            Ok(self.coeffs.len() - 1)
        }
    }

    /// Degree of a polynomial known to be nonzero.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Result<&BigRational, GlError> {
        self.coeffs.last().ok_or(GlError::ZeroPolynomial)
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        RatPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        RatPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigRational) -> RatPoly {
        if c.is_zero() {
            return RatPoly::zero();
        }
        RatPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, k: usize) -> RatPoly {
        let mut acc = RatPoly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division over Q; returns (quotient, remainder).
    pub fn div_rem(&self, divisor: &RatPoly) -> Result<(RatPoly, RatPoly), GlError> {
        if divisor.is_zero() {
            return Err(GlError::ZeroPolynomial);
        }
        let mut rem = self.coeffs.clone();
        let dl = divisor.coeffs.len();
        if rem.len() < dl {
            return Ok((RatPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dl + 1];
        let lead = divisor.coeffs.last().unwrap();
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dl - 1] / lead;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    let t = &c * d;
                    rem[i + j] -= t;
                }
            }
            quot[i] = c;
        }
        Ok((RatPoly::from_coeffs(quot), RatPoly::from_coeffs(rem)))
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn exact_div(&self, divisor: &RatPoly) -> Result<RatPoly, GlError> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(GlError::Precondition("division is not exact".into()))
        }
    }

    pub fn divides(&self, other: &RatPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        let out: Vec<BigRational> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * rat(i as i64))
            .collect();
        RatPoly::from_coeffs(out)
    }

    /// The j-th divided derivative: the j-th derivative divided by j!.
    /// Coefficient of T^i is binom(i+j, j) * c_{i+j}.
    pub fn divided_derivative(&self, j: usize) -> RatPoly {
        if self.coeffs.len() <= j {
            return RatPoly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - j);
        for i in 0..self.coeffs.len() - j {
            out.push(&self.coeffs[i + j] * BigRational::from_integer(binomial(i + j, j)));
        }
        RatPoly::from_coeffs(out)
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Substitute T -> x where x is another polynomial.
    pub fn compose(&self, x: &RatPoly) -> RatPoly {
        let mut acc = RatPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&RatPoly::constant(c.clone()));
        }
        acc
    }

    /// Certified evaluation: the result encloses P(z) for every point of
    /// the input enclosure. Exact when z is exact.
    pub fn eval_enclosure(&self, z: &ComplexEnclosure, bits: u32) -> ComplexEnclosure {
        let mut acc = ComplexEnclosure::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(&ComplexEnclosure::from_rational(c.clone()));
            if !z.is_exact() {
                acc = acc.round_out(bits + 32);
            }
        }
        acc
    }

    /// Max norm of the coefficient vector; errors on zero.
    pub fn norm(&self) -> Result<BigRational, GlError> {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .ok_or(GlError::ZeroPolynomial)
    }

    /// Content: positive rational r with P/r primitive integer.
    pub fn content(&self) -> Result<BigRational, GlError> {
        if self.is_zero() {
            return Err(GlError::ZeroPolynomial);
        }
        Ok(content_of(&self.coeffs))
    }

    /// Projective height ||P|| / cont(P); an exact rational >= 1.
    pub fn height(&self) -> Result<BigRational, GlError> {
        Ok(self.norm()? / self.content()?)
    }

    /// (norm, content, height) in one pass.
    pub fn metrics(&self) -> Result<(BigRational, BigRational, BigRational), GlError> {
        let n = self.norm()?;
        let c = self.content()?;
        let h = &n / &c;
        Ok((n, c, h))
    }

    /// The primitive integer polynomial P / cont(P), with positive leading
    /// coefficient.
    pub fn primitive_part(&self) -> Result<RatPoly, GlError> {
        let c = self.content()?;
        let p = self.scale(&c.recip());
        if p.coeffs.last().unwrap().is_negative() {
            Ok(p.neg())
        } else {
            Ok(p)
        }
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Text format: one line, coefficients low-to-high, whitespace
    /// separated, each `p/q` or `p`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|c| {
                if c.is_integer() {
                    c.numer().to_string()
                } else {
                    format!("{}/{}", c.numer(), c.denom())
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn from_text(s: &str) -> Result<RatPoly, GlError> {
        let coeffs: Result<Vec<_>, _> = s.split_whitespace().map(parse_rational).collect();
        Ok(RatPoly::from_coeffs(coeffs?))
    }
}

/// Content of a nonzero rational coefficient list:
/// gcd(numerators) / lcm(denominators).
fn content_of(coeffs: &[BigRational]) -> BigRational {
    let mut g = BigInt::zero();
    let mut l = BigInt::one();
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        g = g.gcd(c.numer());
        l = l.lcm(c.denom());
    }
    BigRational::new(g, l)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// A nonempty, not-all-zero vector of exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct RatVector {
    pub entries: Vec<BigRational>,
}

impl RatVector {
    pub fn new(entries: Vec<BigRational>) -> Result<Self, GlError> {
        if entries.is_empty() || entries.iter().all(|e| e.is_zero()) {
            return Err(GlError::ZeroVector);
        }
        Ok(RatVector { entries })
    }

    pub fn from_ints(v: &[i64]) -> Result<Self, GlError> {
        Self::new(v.iter().map(|&x| rat(x)).collect())
    }

    pub fn content(&self) -> BigRational {
        content_of(&self.entries)
    }

    pub fn norm(&self) -> BigRational {
        self.entries.iter().map(|e| e.abs()).max().unwrap()
    }

    pub fn height(&self) -> BigRational {
        self.norm() / self.content()
    }
}

/// Inhomogeneous height of a single rational: max(|p|, |q|) in reduced
/// form; H(0) = 1.
pub fn height_rational(x: &BigRational) -> BigRational {
    if x.is_zero() {
        return BigRational::one();
    }
    let p = x.numer().abs();
    let q = x.denom().abs();
    BigRational::from_integer(p.max(q))
}

/// Finite list of evaluation points with cached pair statistics.
#[derive(Clone, Debug)]
pub struct EvalPointSet {
    pub points: Vec<ComplexEnclosure>,
}

/// delta (minimum pair distance), Delta (square-root pair product) and the
/// max modulus over the set, as rigorous enclosures.
#[derive(Clone, Debug)]
pub struct PointSetMetrics {
    pub delta: RealInterval,
    pub delta_product: RealInterval,
    pub max_modulus: RealInterval,
}

impl EvalPointSet {
    pub fn new(points: Vec<ComplexEnclosure>) -> Result<Self, GlError> {
        if points.is_empty() {
            return Err(GlError::precondition("point set must be nonempty"));
        }
        Ok(EvalPointSet { points })
    }

    pub fn from_rationals(v: &[BigRational]) -> Result<Self, GlError> {
        Self::new(v.iter().map(|x| ComplexEnclosure::from_rational(x.clone())).collect())
    }

    pub fn from_ints(v: &[i64]) -> Result<Self, GlError> {
        Self::from_rationals(&v.iter().map(|&x| rat(x)).collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Singleton sets have delta = Delta = 1 exactly. Coincident exact
    /// points are permitted and produce delta = Delta = 0 exactly;
    /// downstream verifiers that need Delta > 0 must reject that case.
    pub fn metrics(&self, bits: u32) -> PointSetMetrics {
        let c_e = self
            .points
            .iter()
            .map(|p| p.abs(bits))
            .reduce(|a, b| a.max(&b))
            .unwrap();
        if self.points.len() == 1 {
            return PointSetMetrics {
                delta: RealInterval::one(),
                delta_product: RealInterval::one(),
                max_modulus: c_e,
            };
        }
        let mut delta: Option<RealInterval> = None;
        // Delta^2 over ordered pairs = prod over unordered pairs |d|^2
        let mut delta_sq = RealInterval::one();
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                let d = self.points[i].sub(&self.points[j]);
                let dist = d.abs(bits);
                delta = Some(match delta {
                    None => dist.clone(),
                    Some(m) => m.min(&dist),
                });
                delta_sq = &delta_sq * &d.abs_sq();
            }
        }
        let delta_product = delta_sq.sqrt(bits).expect("pair product is nonnegative");
        PointSetMetrics {
            delta: delta.unwrap(),
            delta_product,
            max_modulus: c_e,
        }
    }
}

/// Verify the multiplicativity brackets for norms and heights of a
/// product: e^{-deg P} ||P|| <= prod ||P_i|| <= e^{deg P} ||P||, and the
/// same chain with heights. A failure signals an arithmetic bug, not a
/// counterexample.
pub fn check_gauss_bounds(factors: &[RatPoly]) -> Result<Verdict, GlError> {
    if factors.is_empty() {
        return Err(GlError::precondition("need at least one factor"));
    }
    for f in factors {
        if f.is_zero() {
            return Err(GlError::ZeroPolynomial);
        }
    }
    let mut product = RatPoly::one();
    for f in factors {
        product = product.mul(f);
    }
    let deg = product.degree()? as i64;
    let norm_p = product.norm()?;
    let height_p = product.height()?;
    let mut norm_prod = BigRational::one();
    let mut height_prod = BigRational::one();
    for f in factors {
        norm_prod *= f.norm()?;
        height_prod *= f.height()?;
    }
    let v = Verdict::decide_default("gauss_norm_height_chains", |bits| {
        let e_pos = RealInterval::from_int(deg).exp(bits);
        let e_neg = RealInterval::from_int(-deg).exp(bits);
        // encode all four inequalities as one max of ratios <= 1
        let np = RealInterval::point(norm_p.clone());
        let npr = RealInterval::point(norm_prod.clone());
        let hp = RealInterval::point(height_p.clone());
        let hpr = RealInterval::point(height_prod.clone());
        let lower_norm = &e_neg * &np; // must be <= npr
        let upper_norm = &e_pos * &np; // must be >= npr
        let lower_h = &e_neg * &hp;
        let upper_h = &e_pos * &hp;
        let r1 = lower_norm.div(&npr).unwrap();
        let r2 = npr.div(&upper_norm).unwrap();
        let r3 = lower_h.div(&hpr).unwrap();
        let r4 = hpr.div(&upper_h).unwrap();
        let worst = r1.max(&r2).max(&r3).max(&r4);
        (worst, RealInterval::one())
    });
    Ok(v)
}
