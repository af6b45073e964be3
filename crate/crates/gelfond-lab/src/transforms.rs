//! The group of affine substitutions T -> aT + b (a > 0) acting on
//! polynomials and on points, with its projective height.
//!
//! Composition convention: `compose(l, m)` is the scale/shift pair
//! `(a a', a b' + b)`, i.e. composition of the affine functions with `m`
//! acting on the argument first. The point action is then a left action,
//! `compose(l, m) . x = l . (m . x)`, while the contravariant substitution
//! on polynomials reverses the order:
//! `apply(compose(l, m), P) = apply(m, apply(l, P))`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::GlError;
use crate::poly::{rat, RatPoly, RatVector};
use crate::verdict::Verdict;

/// The substitution P(T) -> P(aT + b) with a a positive rational.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    scale: BigRational,
    shift: BigRational,
}

impl std::fmt::Display for AffineMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "T -> ({})T + ({})", self.scale, self.shift)
    }
}

impl AffineMap {
    pub fn new(scale: BigRational, shift: BigRational) -> Result<Self, GlError> {
        if !scale.is_positive() {
            return Err(GlError::precondition("affine map scale must be positive"));
        }
        Ok(AffineMap { scale, shift })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self, GlError> {
        Self::new(rat(a), rat(b))
    }

    pub fn identity() -> Self {
        AffineMap { scale: BigRational::one(), shift: BigRational::zero() }
    }

    /// Pure scaling T -> aT.
    pub fn scaling(a: BigRational) -> Result<Self, GlError> {
        Self::new(a, BigRational::zero())
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn shift(&self) -> &BigRational {
        &self.shift
    }

    pub fn is_identity(&self) -> bool {
        self.scale.is_one() && self.shift.is_zero()
    }

    /// Projective height of the point (1, a, b); invariant under
    /// inversion.
    pub fn height(&self) -> BigRational {
        RatVector::new(vec![BigRational::one(), self.scale.clone(), self.shift.clone()])
            .expect("(1, a, b) is nonzero")
            .height()
    }

    /// Apply to a polynomial: exact coefficientwise substitution.
    pub fn apply(&self, p: &RatPoly) -> RatPoly {
        if p.is_zero() {
            return RatPoly::zero();
        }
        let arg = RatPoly::from_coeffs(vec![self.shift.clone(), self.scale.clone()]);
        p.compose(&arg)
    }

    /// Point action x -> a x + b.
    pub fn apply_point(&self, x: &BigRational) -> BigRational {
        &self.scale * x + &self.shift
    }

    /// Point action on complex enclosures.
    pub fn apply_enclosure(&self, z: &crate::interval::ComplexEnclosure) -> crate::interval::ComplexEnclosure {
        z.scale(&self.scale)
            .add(&crate::interval::ComplexEnclosure::from_rational(self.shift.clone()))
    }

    /// `compose(l, m)` = the map applying `m` first: (a a', a b' + b).
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            scale: &self.scale * &other.scale,
            shift: &self.scale * &other.shift + &self.shift,
        }
    }

    pub fn invert(&self) -> AffineMap {
        AffineMap {
            scale: self.scale.recip(),
            shift: -(&self.shift / &self.scale),
        }
    }
}

/// Verify the degree/height/content transfer bounds under an affine map:
/// (3H(l))^{-n} <= H(lP)/H(P) <= (3H(l))^n and
/// H(l)^{-n} <= cont(lP)/cont(P) <= H(l)^n, all exact rational
/// comparisons.
pub fn check_height_transfer(map: &AffineMap, p: &RatPoly, n: usize) -> Result<Verdict, GlError> {
    if p.is_zero() {
        return Err(GlError::ZeroPolynomial);
    }
    if p.deg() > n {
        return Err(GlError::precondition("n must bound deg(P)"));
    }
    let lp = map.apply(p);
    let deg_ok = lp.deg() == p.deg();
    let h_ratio = lp.height()? / p.height()?;
    let c_ratio = lp.content()? / p.content()?;
    let h_map = map.height();
    let three_h = rat(3) * &h_map;
    let pow = |x: &BigRational, k: usize| -> BigRational {
        let mut acc = BigRational::one();
        for _ in 0..k {
            acc *= x;
        }
        acc
    };
    let hb = pow(&three_h, n);
    let cb = pow(&h_map, n);
    let ok = deg_ok
        && h_ratio >= hb.recip()
        && h_ratio <= hb
        && c_ratio >= cb.recip()
        && c_ratio <= cb;
    // exact comparisons, encoded as a 0/1 verdict pair
    Ok(Verdict::exact(
        "affine_height_transfer",
        if ok { BigRational::zero() } else { BigRational::one() },
        BigRational::zero(),
    ))
}

/// Decide whether the translate of an irreducible polynomial is a rational
/// multiple of it. The input must be irreducible; the caller is expected to
/// have verified this (see [`crate::factorgcd::factor_q`]).
///
/// The characterization: lR ~ R iff (a, b) = (1, 0), or a != 1 and R is a
/// rational multiple of (a-1)T + b.
pub fn translate_associate_test(map: &AffineMap, r: &RatPoly) -> Result<bool, GlError> {
    if r.is_zero() || r.is_constant() {
        return Err(GlError::precondition("R must be irreducible (nonconstant)"));
    }
    if !crate::factorgcd::is_irreducible(r)? {
        return Err(GlError::precondition("R must be irreducible over Q"));
    }
    let lr = map.apply(r);
    // direct check: lR = c R for some rational c
    let assoc = is_rational_multiple(&lr, r);
    // cross-check against the closed-form characterization
    let a = map.scale();
    let b = map.shift();
    let closed_form = if map.is_identity() {
        true
    } else if !a.is_one() {
        let line = RatPoly::from_coeffs(vec![b.clone(), a - BigRational::one()]);
        is_rational_multiple(r, &line)
    } else {
        false
    };
    debug_assert_eq!(assoc, closed_form, "associate characterization mismatch");
    Ok(assoc)
}

fn is_rational_multiple(p: &RatPoly, q: &RatPoly) -> bool {
    if p.is_zero() || q.is_zero() || p.deg() != q.deg() {
        return false;
    }
    let c = p.leading().unwrap() / q.leading().unwrap();
    *p == q.scale(&c)
}
