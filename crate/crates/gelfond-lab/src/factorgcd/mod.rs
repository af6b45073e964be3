//! Exact factorization over the rationals, gcds, the linearization
//! procedure, gcds of multiplicative translates with their degree/height
//! bounds, G-pure decomposition, and the divisor degree/height verifier.
//!
//! G-equivalence of irreducibles R, R' (for [`gpure_decompose`]) is decided
//! against a finite candidate set: if R' is an associate of R(aT) then
//! comparing the leading and lowest nonzero coefficients forces
//! a^{d - v} = (r'_d / r_d) / (r'_v / r_v), so the only candidates are the
//! exact positive rational roots of that quotient (plus a = 1). Membership
//! of a in the group generated by the scale set is then an integer
//! row-span test on prime exponent vectors.

mod zassenhaus;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::GlError;
use crate::interval::RealInterval;
use crate::poly::{binomial, factorial, height_rational, rat, EvalPointSet, RatPoly};
use crate::transforms::AffineMap;
use crate::verdict::Verdict;

/// Complete factorization over Q: `sign * content * prod factor^mult`
/// reconstructs the input exactly. Factors are primitive integer
/// polynomials with positive leading coefficients, pairwise non-associate,
/// sorted by degree then lexicographically by coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub content: BigRational,
    pub negative: bool,
    pub factors: Vec<(RatPoly, usize)>,
}

impl Factorization {
    pub fn reconstruct(&self) -> RatPoly {
        let mut acc = RatPoly::constant(if self.negative {
            -self.content.clone()
        } else {
            self.content.clone()
        });
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m));
        }
        acc
    }

    /// Number of (pairwise non-associate) irreducible factors.
    pub fn distinct_factor_count(&self) -> usize {
        self.factors.len()
    }
}

/// Yun squarefree decomposition of a primitive positive-leading
/// polynomial: returns (squarefree primitive part, multiplicity) pairs.
fn squarefree_decomposition(p: &RatPoly) -> Result<Vec<(RatPoly, usize)>, GlError> {
    let mut out = Vec::new();
    if p.is_constant() {
        return Ok(out);
    }
    let g = gcd_q(p, &p.derivative())?;
    if g.is_constant() {
        out.push((p.clone(), 1));
        return Ok(out);
    }
    let mut w = p.exact_div(&g)?;
    let mut z = p.derivative().exact_div(&g)?.sub(&w.derivative());
    let mut i = 1usize;
    while !w.is_constant() {
        let gi = gcd_q(&w, &z)?;
        if !gi.is_constant() {
            out.push((gi.clone(), i));
        }
        w = w.exact_div(&gi)?;
        z = z.exact_div(&gi)?.sub(&w.derivative());
        i += 1;
    }
    Ok(out)
}

/// Exact, complete, deterministic factorization over Q.
pub fn factor_q(p: &RatPoly) -> Result<Factorization, GlError> {
    if p.is_zero() {
        return Err(GlError::ZeroPolynomial);
    }
    let content = p.content()?;
    let negative = p.leading()?.is_negative();
    let prim = p.primitive_part()?;
    let mut factors: Vec<(RatPoly, usize)> = Vec::new();
    for (part, mult) in squarefree_decomposition(&prim)? {
        for f in zassenhaus::factor_squarefree_primitive(&part.primitive_part()?) {
            factors.push((f, mult));
        }
    }
    factors.sort_by(|a, b| {
        a.0.deg()
            .cmp(&b.0.deg())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    Ok(Factorization { content, negative, factors })
}

/// True iff P is irreducible over Q (nonconstant with a single factor of
/// multiplicity one).
pub fn is_irreducible(p: &RatPoly) -> Result<bool, GlError> {
    if p.is_zero() || p.is_constant() {
        return Ok(false);
    }
    let f = factor_q(p)?;
    Ok(f.factors.len() == 1 && f.factors[0].1 == 1)
}

/// Primitive positive-leading gcd over Q.
pub fn gcd_q(p: &RatPoly, g: &RatPoly) -> Result<RatPoly, GlError> {
    if p.is_zero() && g.is_zero() {
        return Err(GlError::precondition("gcd of two zero polynomials"));
    }
    if p.is_zero() {
        return g.primitive_part();
    }
    if g.is_zero() {
        return p.primitive_part();
    }
    let mut a = p.clone();
    let mut b = g.clone();
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b)?;
        a = b;
        b = r;
    }
    if a.is_constant() {
        Ok(RatPoly::one())
    } else {
        a.primitive_part()
    }
}

// ---------- scale sets ----------

/// A finite set of positive rationals with a multiplicative-independence
/// witness (exponent vectors over the primes, with their rank).
#[derive(Clone, Debug)]
pub struct ScaleSet {
    elements: Vec<BigRational>,
    primes: Vec<BigInt>,
    /// exponent vector of each element over `primes`
    exponents: Vec<Vec<i64>>,
    independent: bool,
}

/// Prime factorization of a positive rational by trial division; errors
/// when a cofactor beyond the trial bound remains.
fn prime_exponents(x: &BigRational) -> Result<Vec<(BigInt, i64)>, GlError> {
    let mut out: Vec<(BigInt, i64)> = Vec::new();
    let mut push = |p: BigInt, e: i64| {
        for (q, m) in out.iter_mut() {
            if *q == p {
                *m += e;
                return;
            }
        }
        out.push((p, e));
    };
    for (n, sign) in [(x.numer().abs(), 1i64), (x.denom().abs(), -1i64)] {
        let mut n = n;
        let mut d = BigInt::from(2);
        while &d * &d <= n {
            let mut e = 0i64;
            while (&n % &d).is_zero() {
                n = &n / &d;
                e += 1;
            }
            if e > 0 {
                push(d.clone(), sign * e);
            }
            d += 1;
            if d > BigInt::from(1_000_000) {
                break;
            }
        }
        if n > BigInt::one() {
            if n > BigInt::from(1_000_000_000_000u64) {
                return Err(GlError::precondition("scale set element too large to factor"));
            }
            push(n, sign);
        }
    }
    Ok(out)
}

/// Rank over Q of an integer matrix, by fraction-free elimination.
fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| rat(x)).collect())
        .collect();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0usize;
    for c in 0..cols {
        if let Some(pivot) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) {
            m.swap(rank, pivot);
            let inv = m[rank][c].recip();
            for x in m[rank].iter_mut() {
                *x *= &inv;
            }
            for r in 0..m.len() {
                if r != rank && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    for c2 in 0..cols {
                        let t = &f * &m[rank][c2];
                        m[r][c2] -= t;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

impl ScaleSet {
    pub fn new(elements: Vec<BigRational>) -> Result<Self, GlError> {
        if elements.is_empty() {
            return Err(GlError::precondition("scale set must be nonempty"));
        }
        let mut elements = elements;
        elements.sort();
        elements.dedup();
        if elements.iter().any(|a| !a.is_positive()) {
            return Err(GlError::precondition("scale set elements must be positive"));
        }
        let mut primes: Vec<BigInt> = Vec::new();
        let mut raw: Vec<Vec<(BigInt, i64)>> = Vec::new();
        for a in &elements {
            let fx = prime_exponents(a)?;
            for (p, _) in &fx {
                if !primes.contains(p) {
                    primes.push(p.clone());
                }
            }
            raw.push(fx);
        }
        primes.sort();
        let exponents: Vec<Vec<i64>> = raw
            .iter()
            .map(|fx| {
                primes
                    .iter()
                    .map(|p| fx.iter().find(|(q, _)| q == p).map(|(_, e)| *e).unwrap_or(0))
                    .collect()
            })
            .collect();
        let independent = integer_rank(&exponents) == elements.len();
        Ok(ScaleSet { elements, primes, exponents, independent })
    }

    pub fn from_ints(v: &[i64]) -> Result<Self, GlError> {
        Self::new(v.iter().map(|&x| rat(x)).collect())
    }

    pub fn elements(&self) -> &[BigRational] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Multiplicative independence: exponent vectors linearly independent
    /// over the rationals.
    pub fn is_independent(&self) -> bool {
        self.independent
    }

    /// Max height over the set.
    pub fn c_a(&self) -> BigRational {
        self.elements.iter().map(height_rational).max().unwrap()
    }

    /// Membership of a positive rational in the (multiplicative) group
    /// generated by the set: integer row-span test via a Hermite-style
    /// reduction of the exponent matrix.
    pub fn group_contains(&self, a: &BigRational) -> Result<bool, GlError> {
        if a.is_one() {
            return Ok(true);
        }
        let fx = prime_exponents(a)?;
        // exponents of `a` over the union of prime supports
        let mut primes = self.primes.clone();
        for (p, _) in &fx {
            if !primes.contains(p) {
                primes.push(p.clone());
            }
        }
        primes.sort();
        let vecs: Vec<Vec<BigInt>> = self
            .exponents
            .iter()
            .map(|row| {
                primes
                    .iter()
                    .map(|p| {
                        self.primes
                            .iter()
                            .position(|q| q == p)
                            .map(|i| BigInt::from(row[i]))
                            .unwrap_or_default()
                    })
                    .collect()
            })
            .collect();
        let target: Vec<BigInt> = primes
            .iter()
            .map(|p| {
                fx.iter()
                    .find(|(q, _)| q == p)
                    .map(|(_, e)| BigInt::from(*e))
                    .unwrap_or_default()
            })
            .collect();
        Ok(in_integer_row_span(&vecs, &target))
    }
}

/// Hermite-style reduction: is `target` an integer combination of `rows`?
fn in_integer_row_span(rows: &[Vec<BigInt>], target: &[BigInt]) -> bool {
    let cols = target.len();
    let mut basis: Vec<Vec<BigInt>> = rows.to_vec();
    let mut v = target.to_vec();
    let mut col = 0usize;
    let mut used = 0usize;
    while col < cols && used < basis.len() {
        // gcd-reduce the column below `used` into a single pivot row
        loop {
            let mut idx: Vec<usize> = (used..basis.len()).filter(|&r| !basis[r][col].is_zero()).collect();
            if idx.len() <= 1 {
                break;
            }
            idx.sort_by_key(|&r| basis[r][col].abs());
            let (small, rest) = (idx[0], idx[1]);
            let q = basis[rest][col].div_floor(&basis[small][col]);
            for c in 0..cols {
                let t = &q * &basis[small][c];
                basis[rest][c] -= t;
            }
        }
        if let Some(pivot) = (used..basis.len()).find(|&r| !basis[r][col].is_zero()) {
            basis.swap(used, pivot);
            // reduce the target against the pivot
            if !v[col].is_zero() {
                let (q, r) = v[col].div_rem(&basis[used][col]);
                if r.is_zero() {
                    for c in 0..cols {
                        let t = &q * &basis[used][c];
                        v[c] -= t;
                    }
                }
            }
            if !v[col].is_zero() {
                return false;
            }
            used += 1;
        } else if !v[col].is_zero() {
            return false;
        }
        col += 1;
    }
    while col < cols {
        if !v[col].is_zero() {
            return false;
        }
        col += 1;
    }
    true
}

// ---------- bound parameters ----------

/// Parameters for the gcd-of-translates bounds: N(s, l) =
/// binom(s, l+2) / (2^{l+1} (l+1)!) exactly, c_A the max height over the
/// scale set, and c_1 = 8 + (4l+1) log(c_A) as an interval.
#[derive(Clone, Debug)]
pub struct GcdBoundParams {
    pub s: usize,
    pub ell: usize,
    pub n_cap: BigRational,
    pub c_a: BigRational,
}

impl GcdBoundParams {
    pub fn new(s: usize, ell: usize, c_a: BigRational) -> Result<Self, GlError> {
        if ell + 2 > s {
            return Err(GlError::precondition("need l + 2 <= s"));
        }
        if c_a < BigRational::one() {
            return Err(GlError::precondition("c_A is a height, hence >= 1"));
        }
        let n_cap = BigRational::new(binomial(s, ell + 2), (BigInt::one() << (ell + 1)) * factorial(ell + 1));
        Ok(GcdBoundParams { s, ell, n_cap, c_a })
    }

    pub fn for_scale_set(a: &ScaleSet, ell: usize) -> Result<Self, GlError> {
        Self::new(a.len(), ell, a.c_a())
    }

    /// c_1 = 8 + (4l+1) log(c_A) as a rigorous enclosure.
    pub fn c_1(&self, bits: u32) -> RealInterval {
        let log = RealInterval::point(self.c_a.clone())
            .ln(bits)
            .expect("c_A >= 1 is positive");
        &RealInterval::from_int(8) + &(&RealInterval::from_int(4 * self.ell as i64 + 1) * &log)
    }
}

// ---------- linearization ----------

/// Small-value product prod |P(xi_i)| / cont(P) as an enclosure.
fn small_value_product(p: &RatPoly, pts: &EvalPointSet, bits: u32) -> RealInterval {
    let cont = p.content().expect("nonzero");
    let mut acc = RealInterval::point(cont.recip());
    for z in &pts.points {
        acc = &acc * &p.eval_enclosure(z, bits).abs(bits);
    }
    acc
}

/// (X^{deg P} H(P)^n)^{-c/rho} as an enclosure.
fn linearization_rhs(
    p: &RatPoly,
    n: usize,
    x: &BigRational,
    c: &BigRational,
    rho: &BigRational,
    bits: u32,
) -> RealInterval {
    let base = pow_rat(x, p.deg() as u32) * pow_rat(&p.height().expect("nonzero"), n as u32);
    RealInterval::point(base)
        .pow_rational(&-(c / rho), bits)
        .expect("base is positive")
}

fn pow_rat(x: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// Linearization, part a): from a polynomial with a certified small-value
/// product, extract an irreducible factor with the halved exponent. The
/// first certifiable factor in canonical order is returned.
pub fn linearize_a(
    p: &RatPoly,
    n: usize,
    x: &BigRational,
    c: &BigRational,
    rho: &BigRational,
    pts: &EvalPointSet,
) -> Result<(RatPoly, Verdict), GlError> {
    if p.is_zero() {
        return Err(GlError::ZeroPolynomial);
    }
    if !c.is_positive() || !rho.is_positive() || *x <= BigRational::one() {
        return Err(GlError::precondition("need c > 0, rho > 0, X > 1"));
    }
    let rn = rho * rat(n as i64);
    if rat(p.deg() as i64) > rn {
        return Err(GlError::precondition("deg P exceeds rho * n"));
    }
    let xr = RealInterval::point(x.clone());
    let hp = p.height()?;
    let v = Verdict::decide_default("linearize_height_cap", |bits| {
        (
            RealInterval::point(hp.clone()),
            xr.pow_rational(rho, bits).expect("X > 0"),
        )
    });
    if !v.holds() {
        return Err(GlError::HypothesisRejected(format!("H(P) <= X^rho is {}", v.outcome)));
    }
    let v = Verdict::decide_default("linearize_e_n_cap", |bits| {
        (RealInterval::from_int(n as i64).exp(bits), xr.clone())
    });
    if !v.holds() {
        return Err(GlError::HypothesisRejected(format!("e^n <= X is {}", v.outcome)));
    }
    let hyp = Verdict::decide_default("linearize_hypothesis", |bits| {
        (
            small_value_product(p, pts, bits),
            linearization_rhs(p, n, x, c, rho, bits),
        )
    });
    if !hyp.holds() {
        return Err(GlError::HypothesisRejected(format!(
            "small-value hypothesis is {}",
            hyp.outcome
        )));
    }
    let half_c = c / rat(2);
    let mut max_bits = 0u32;
    for (r, _) in factor_q(p)?.factors {
        let v = Verdict::decide_default("linearize_factor_bound", |bits| {
            (
                small_value_product(&r, pts, bits),
                linearization_rhs(&r, n, x, &half_c, rho, bits),
            )
        });
        max_bits = max_bits.max(v.precision_bits);
        if v.holds() {
            return Ok((r, v));
        }
    }
    Err(GlError::Undecided(max_bits))
}

/// Linearization, part b): the maximal power Q = R^k with deg(Q) <= n and
/// H(Q) <= X^2, with the X^{-cn/4} small-value verdict attached.
pub fn linearize_b(
    r: &RatPoly,
    n: usize,
    x: &BigRational,
    pts: &EvalPointSet,
    c: &BigRational,
    _rho: &BigRational,
) -> Result<(RatPoly, usize, Verdict), GlError> {
    if r.is_zero() || r.is_constant() {
        return Err(GlError::precondition("R must be nonconstant"));
    }
    let x2 = x * x;
    if r.deg() > n || r.height()? > x2 {
        return Err(GlError::precondition("R itself violates the degree or height cap"));
    }
    let mut k = 1usize;
    let mut q = r.clone();
    loop {
        let next = q.mul(r);
        if next.deg() > n || next.height()? > x2 {
            break;
        }
        q = next;
        k += 1;
    }
    let exponent = -(c * rat(n as i64) / rat(4));
    let xr = RealInterval::point(x.clone());
    let v = Verdict::decide_default("linearize_power_bound", |bits| {
        (
            small_value_product(&q, pts, bits),
            xr.pow_rational(&exponent, bits).expect("X > 0"),
        )
    });
    Ok((q, k, v))
}

// ---------- gcds of multiplicative translates ----------

/// gcd over a in A of P(aT), primitive with positive leading coefficient.
pub fn gcd_translates(p: &RatPoly, a: &ScaleSet) -> Result<RatPoly, GlError> {
    if p.is_zero() {
        return Err(GlError::ZeroPolynomial);
    }
    let mut acc: Option<RatPoly> = None;
    for s in a.elements() {
        let map = AffineMap::scaling(s.clone())?;
        let translate = map.apply(p);
        acc = Some(match acc {
            None => translate.primitive_part()?,
            Some(g) => gcd_q(&g, &translate)?,
        });
    }
    Ok(acc.expect("scale set is nonempty"))
}

/// Degree and height bounds for Q = gcd_translates(P, A): the verdict pair
/// (deg(Q) <= 2(l+1)/(s-l) deg(P) exact,
///  log H(Q) <= 2(l+1)/(s-l) (log H(P) + c_1 deg(P)) interval).
pub fn verify_thm_g(p: &RatPoly, a: &ScaleSet, ell: usize) -> Result<(Verdict, Verdict), GlError> {
    if p.is_zero() {
        return Err(GlError::ZeroPolynomial);
    }
    if p.coeff(0).is_zero() {
        return Err(GlError::precondition("P(0) must be nonzero"));
    }
    if !a.is_independent() {
        return Err(GlError::precondition("scale set must be multiplicatively independent"));
    }
    let params = GcdBoundParams::for_scale_set(a, ell)?;
    let count = factor_q(p)?.distinct_factor_count();
    if rat(count as i64) > params.n_cap {
        return Err(GlError::precondition(
            "too many non-associate irreducible factors for N(s, l)",
        ));
    }
    let q = gcd_translates(p, a)?;
    let ratio = rat(2 * (ell as i64 + 1)) / rat(params.s as i64 - ell as i64);
    let deg_verdict = Verdict::exact(
        "thmG_degree_bound",
        rat(q.deg() as i64),
        &ratio * rat(p.deg() as i64),
    );
    let hq = q.height()?;
    let hp = p.height()?;
    let deg_p = p.deg() as i64;
    let height_verdict = Verdict::decide_default("thmG_height_bound", |bits| {
        let log_hq = RealInterval::point(hq.clone()).ln(bits).expect("height >= 1");
        let log_hp = RealInterval::point(hp.clone()).ln(bits).expect("height >= 1");
        let c1 = params.c_1(bits);
        let rhs = &RealInterval::point(ratio.clone())
            * &(&log_hp + &(&c1 * &RealInterval::from_int(deg_p)));
        (log_hq, rhs)
    });
    Ok((deg_verdict, height_verdict))
}

// ---------- G-pure decomposition ----------

/// Exact positive rational k-th root, when one exists.
fn rational_root(x: &BigRational, k: u32) -> Option<BigRational> {
    if !x.is_positive() || k == 0 {
        return None;
    }
    let n = x.numer().abs();
    let d = x.denom().abs();
    let rn = n.nth_root(k);
    let rd = d.nth_root(k);
    if rn.pow(k) == n && rd.pow(k) == d {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

/// Candidate scales a with R' possibly an associate of R(aT):
/// a^{d-v} is pinned by the leading/lowest-coefficient quotients.
fn equivalence_candidates(r: &RatPoly, r2: &RatPoly) -> Vec<BigRational> {
    let mut out = vec![BigRational::one()];
    if r.deg() != r2.deg() {
        return Vec::new();
    }
    let d = r.deg();
    let v = r.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
    let v2 = r2.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
    if v != v2 {
        return Vec::new();
    }
    if d == v {
        return out;
    }
    let q = (r2.coeff(d) / r.coeff(d)) / (r2.coeff(v) / r.coeff(v));
    if let Some(a) = rational_root(&q, (d - v) as u32) {
        if !a.is_one() {
            out.push(a);
        }
    }
    out
}

/// Are the irreducibles R, R' equivalent under T -> aT with a in the group
/// generated by A?
fn g_equivalent(r: &RatPoly, r2: &RatPoly, a: &ScaleSet) -> Result<bool, GlError> {
    for cand in equivalence_candidates(r, r2) {
        let map = AffineMap::scaling(cand.clone())?;
        let translated = map.apply(r);
        let assoc = translated.primitive_part()? == r2.primitive_part()?;
        if assoc && a.group_contains(&cand)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Split P into G-pure simple-root polynomials: first multiplicity layers,
/// then grouping of irreducibles by G-equivalence within each layer.
/// The parts are primitive with positive leading coefficients; their
/// product reconstructs P up to its content and sign.
pub fn gpure_decompose(p: &RatPoly, a: &ScaleSet) -> Result<Vec<RatPoly>, GlError> {
    let f = factor_q(p)?;
    let max_mult = f.factors.iter().map(|(_, m)| *m).max().unwrap_or(0);
    let mut parts = Vec::new();
    for layer in 1..=max_mult {
        // irreducibles present at this multiplicity layer
        let layer_factors: Vec<&RatPoly> = f
            .factors
            .iter()
            .filter(|(_, m)| *m >= layer)
            .map(|(r, _)| r)
            .collect();
        let mut groups: Vec<Vec<&RatPoly>> = Vec::new();
        'next: for r in layer_factors {
            for grp in groups.iter_mut() {
                if g_equivalent(grp[0], r, a)? {
                    grp.push(r);
                    continue 'next;
                }
            }
            groups.push(vec![r]);
        }
        for grp in groups {
            let mut prod = RatPoly::one();
            for r in grp {
                prod = prod.mul(r);
            }
            parts.push(prod);
        }
    }
    parts.sort_by(|x, y| x.deg().cmp(&y.deg()).then_with(|| x.coeffs().cmp(y.coeffs())));
    // distributivity of gcd_translates over the parts
    debug_assert!({
        let mut prod = RatPoly::one();
        for part in &parts {
            prod = prod.mul(&gcd_translates(part, a).unwrap());
        }
        prod.primitive_part().unwrap() == gcd_translates(p, a).unwrap()
    });
    Ok(parts)
}

// ---------- divisor degree/height verifier ----------

/// For an irreducible R dividing every lambda(P^{[i]}) (lambda in maps,
/// i < t): deg(R) <= n/(st) exactly, and
/// H(R) <= (3 max H(lambda))^{2n/(st)} H(P)^{1/(st)} as an interval.
pub fn check_lemma_h3(
    p: &RatPoly,
    maps: &[AffineMap],
    r: &RatPoly,
    s: usize,
    t: usize,
    n: usize,
) -> Result<Verdict, GlError> {
    if p.is_zero() || r.is_zero() {
        return Err(GlError::ZeroPolynomial);
    }
    if s == 0 || t == 0 || s * t > n {
        return Err(GlError::precondition("need s, t >= 1 and st <= n"));
    }
    if maps.len() < s {
        return Err(GlError::precondition("need at least s maps"));
    }
    for map in maps {
        for i in 0..t {
            let di = p.divided_derivative(i);
            if !r.divides(&map.apply(&di)) {
                return Err(GlError::precondition(
                    "R must divide every map image of the divided derivatives",
                ));
            }
        }
    }
    let st = (s * t) as i64;
    let deg_verdict = Verdict::exact(
        "lemmaH3_degree_bound",
        rat(r.deg() as i64) * rat(st),
        rat(n as i64),
    );
    let max_h = maps.iter().map(|m| m.height()).max().unwrap();
    let hr = r.height()?;
    let hp = p.height()?;
    let exp1 = rat(2 * n as i64) / rat(st);
    let exp2 = rat(1) / rat(st);
    let height_verdict = Verdict::decide_default("lemmaH3_height_bound", |bits| {
        let lhs = RealInterval::point(hr.clone());
        let b1 = RealInterval::point(rat(3) * &max_h)
            .pow_rational(&exp1, bits)
            .expect("positive base");
        let b2 = RealInterval::point(hp.clone())
            .pow_rational(&exp2, bits)
            .expect("positive base");
        (lhs, &b1 * &b2)
    });
    let combined = Verdict::all("lemmaH3_bounds", &[deg_verdict, height_verdict]);
    Ok(combined)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;
    use crate::verdict::Outcome;

    fn p(v: &[i64]) -> RatPoly {
        RatPoly::from_ints(v)
    }

    #[test]
    fn factor_q_examples() {
        // T^2 - 1 -> content 1, {(T-1, 1), (T+1, 1)}
        let f = factor_q(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(f.content, rat(1));
        assert!(!f.negative);
        assert_eq!(f.factors, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
        // 2T^2 + 2 -> content 2, {(T^2+1, 1)}
        let f = factor_q(&p(&[2, 0, 2])).unwrap();
        assert_eq!(f.content, rat(2));
        assert_eq!(f.factors, vec![(p(&[1, 0, 1]), 1)]);
        // T^4 + 4 -> (T^2-2T+2)(T^2+2T+2)
        let f = factor_q(&p(&[4, 0, 0, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(p(&[2, -2, 1]), 1), (p(&[2, 2, 1]), 1)]);
        assert_eq!(f.reconstruct(), p(&[4, 0, 0, 0, 1]));
    }

    #[test]
    fn factor_q_multiplicities_and_sign() {
        // -3 (T-1)^2 (T+2)
        let input = p(&[-1, 1]).pow(2).mul(&p(&[2, 1])).scale(&rat(-3));
        let f = factor_q(&input).unwrap();
        assert_eq!(f.content, rat(3));
        assert!(f.negative);
        assert_eq!(f.factors, vec![(p(&[-1, 1]), 2), (p(&[2, 1]), 1)]);
        assert_eq!(f.reconstruct(), input);
    }

    #[test]
    fn gcd_q_examples() {
        assert_eq!(gcd_q(&p(&[-1, 0, 1]), &p(&[-1, 1])).unwrap(), p(&[-1, 1]));
        // (P, P) -> P / cont(P)
        let q = p(&[2, 4]);
        assert_eq!(gcd_q(&q, &q).unwrap(), p(&[1, 2]));
        // ((T-1)(T-2), (T-1)(T-3)) -> T-1
        let a = p(&[-1, 1]).mul(&p(&[-2, 1]));
        let b = p(&[-1, 1]).mul(&p(&[-3, 1]));
        assert_eq!(gcd_q(&a, &b).unwrap(), p(&[-1, 1]));
    }

    #[test]
    fn is_irreducible_examples() {
        assert!(is_irreducible(&p(&[1, 0, 1])).unwrap());
        assert!(!is_irreducible(&p(&[-1, 0, 1])).unwrap());
        assert!(!is_irreducible(&p(&[1, 2, 1])).unwrap());
        assert!(!is_irreducible(&p(&[5])).unwrap());
    }

    #[test]
    fn scale_set_independence() {
        assert!(ScaleSet::from_ints(&[2, 3]).unwrap().is_independent());
        assert!(ScaleSet::from_ints(&[2, 3, 5]).unwrap().is_independent());
        // {2, 4} dependent: 4 = 2^2
        assert!(!ScaleSet::from_ints(&[2, 4]).unwrap().is_independent());
        // {2/3, 3/2} dependent
        let s = ScaleSet::new(vec![ratio(2, 3), ratio(3, 2)]).unwrap();
        assert!(!s.is_independent());
        // {6, 10, 15}: exponent vectors (1,1,0), (1,0,1), (0,1,1) over
        // {2, 3, 5} have rank 3
        assert!(ScaleSet::from_ints(&[6, 10, 15]).unwrap().is_independent());
        // {6, 10, 15, 30} dependent: 6*10*15 = 30^2
        assert!(!ScaleSet::from_ints(&[6, 10, 15, 30]).unwrap().is_independent());
    }

    #[test]
    fn group_membership() {
        let s = ScaleSet::from_ints(&[2, 3]).unwrap();
        assert!(s.group_contains(&rat(1)).unwrap());
        assert!(s.group_contains(&rat(12)).unwrap());
        assert!(s.group_contains(&ratio(4, 9)).unwrap());
        assert!(!s.group_contains(&rat(5)).unwrap());
        assert!(!s.group_contains(&ratio(1, 5)).unwrap());
        let s = ScaleSet::from_ints(&[4]).unwrap();
        assert!(!s.group_contains(&rat(2)).unwrap());
        assert!(s.group_contains(&rat(16)).unwrap());
    }

    #[test]
    fn gcd_bound_params_n_cap() {
        // N(s, l) = binom(s, l+2) / (2^{l+1} (l+1)!)
        let g = GcdBoundParams::new(4, 0, rat(2)).unwrap();
        assert_eq!(g.n_cap, rat(3)); // binom(4,2)/2 = 3
        let g = GcdBoundParams::new(6, 1, rat(2)).unwrap();
        assert_eq!(g.n_cap, ratio(20, 8)); // binom(6,3)/(4*2)
        assert!(GcdBoundParams::new(3, 2, rat(2)).is_err());
    }

    #[test]
    fn gcd_translates_examples() {
        let a1 = ScaleSet::from_ints(&[1]).unwrap();
        let q = p(&[2, 4]);
        assert_eq!(gcd_translates(&q, &a1).unwrap(), p(&[1, 2]));
        // P = (T-1)(T-2), A = {1, 2} -> T-1
        let a = ScaleSet::from_ints(&[1, 2]).unwrap();
        let q = p(&[-1, 1]).mul(&p(&[-2, 1]));
        assert_eq!(gcd_translates(&q, &a).unwrap(), p(&[-1, 1]));
        // P = T^2+1, A = {1, 2} -> 1
        assert_eq!(gcd_translates(&p(&[1, 0, 1]), &a).unwrap(), RatPoly::one());
    }

    #[test]
    fn thm_g_example() {
        // P = (T-1)(T-2)(T-3) has 3 factors; N(4, 0) = binom(4,2)/2 = 3
        let a = ScaleSet::from_ints(&[2, 3, 5, 7]).unwrap();
        let q = p(&[-1, 1]).mul(&p(&[-2, 1])).mul(&p(&[-3, 1]));
        let (dv, hv) = verify_thm_g(&q, &a, 0).unwrap();
        assert_eq!(dv.outcome, Outcome::Holds);
        assert_eq!(hv.outcome, Outcome::Holds);
    }

    #[test]
    fn thm_g_rejects_bad_inputs() {
        let a = ScaleSet::from_ints(&[2, 3]).unwrap();
        // P(0) = 0
        assert!(verify_thm_g(&p(&[0, 1]), &a, 0).is_err());
        // dependent scale set
        let dep = ScaleSet::from_ints(&[2, 4]).unwrap();
        assert!(verify_thm_g(&p(&[-1, 1]), &dep, 0).is_err());
        // too many factors: N(2, 0) = binom(2,2)/2 = 1/2 < 1
        assert!(verify_thm_g(&p(&[-1, 1]), &a, 0).is_err());
    }

    #[test]
    fn linearize_a_single_factor() {
        // P irreducible, points at its root 1/2 (P = 2T-1): product is 0
        let q = p(&[-1, 2]);
        let pts = EvalPointSet::from_rationals(&[ratio(1, 2)]).unwrap();
        let (r, v) = linearize_a(&q, 1, &rat(10), &rat(1), &rat(1), &pts).unwrap();
        assert_eq!(r, p(&[-1, 2]));
        assert_eq!(v.outcome, Outcome::Holds);
    }

    #[test]
    fn linearize_a_picks_the_close_factor() {
        // P = (T-1)^2 (T+1), points exactly at 1
        let q = p(&[-1, 1]).pow(2).mul(&p(&[1, 1]));
        let pts = EvalPointSet::from_ints(&[1, 1, 1]).unwrap();
        let (r, _) = linearize_a(&q, 3, &rat(100), &rat(1), &rat(1), &pts).unwrap();
        assert_eq!(r, p(&[-1, 1]));
    }

    #[test]
    fn linearize_a_rejects_far_points() {
        let q = p(&[-1, 1]).mul(&p(&[1, 1]));
        let pts = EvalPointSet::from_ints(&[100, 100]).unwrap();
        let err = linearize_a(&q, 2, &rat(10), &rat(1), &rat(1), &pts).unwrap_err();
        assert!(matches!(err, GlError::HypothesisRejected(_)));
    }

    #[test]
    fn linearize_b_power_counts() {
        // R = T-2, n = 4, X = 3 -> k = 2 since H((T-2)^3) = 12 > 9
        let r = p(&[-2, 1]);
        let pts = EvalPointSet::from_ints(&[2]).unwrap();
        let (q, k, _) = linearize_b(&r, 4, &rat(3), &pts, &rat(1), &rat(1)).unwrap();
        assert_eq!(k, 2);
        assert_eq!(q, p(&[4, -4, 1]));
        // deg R = n -> k = 1
        let r = p(&[1, 1, 1, 1]);
        let (_, k, _) = linearize_b(&r, 3, &rat(100), &pts, &rat(1), &rat(1)).unwrap();
        assert_eq!(k, 1);
        // R = T, n = 5, X = 2 -> k = 5
        let r = p(&[0, 1]);
        let pts = EvalPointSet::from_rationals(&[ratio(1, 100)]).unwrap();
        let (q, k, v) = linearize_b(&r, 5, &rat(2), &pts, &rat(1), &rat(1)).unwrap();
        assert_eq!(k, 5);
        assert_eq!(q.deg(), 5);
        assert_eq!(v.outcome, Outcome::Holds);
    }

    #[test]
    fn gpure_examples() {
        // all factors inequivalent: singleton parts
        let a = ScaleSet::from_ints(&[2]).unwrap();
        let q = p(&[1, 0, 1]).mul(&p(&[-3, 1]));
        let parts = gpure_decompose(&q, &a).unwrap();
        assert_eq!(parts, vec![p(&[-3, 1]), p(&[1, 0, 1])]);
        // (T-1)(T-2) with A = {2}: 2T-2 ~ T-1 scaled from T-2, one part
        let q = p(&[-1, 1]).mul(&p(&[-2, 1]));
        let parts = gpure_decompose(&q, &a).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0], p(&[2, -3, 1]));
        // multiplicity split: (T-1)^2 (T-2) with A = {3}
        let a3 = ScaleSet::from_ints(&[3]).unwrap();
        let q = p(&[-1, 1]).pow(2).mul(&p(&[-2, 1]));
        let parts = gpure_decompose(&q, &a3).unwrap();
        assert_eq!(parts.len(), 3);
        let prod = parts.iter().fold(RatPoly::one(), |acc, x| acc.mul(x));
        assert_eq!(prod, q.primitive_part().unwrap());
    }

    #[test]
    fn lemma_h3_identity_case() {
        // maps = {identity}, t = 1, s = 1: any irreducible factor of P
        let q = p(&[-1, 1]).mul(&p(&[1, 1]));
        let v = check_lemma_h3(&q, &[AffineMap::identity()], &p(&[-1, 1]), 1, 1, 2).unwrap();
        assert_eq!(v.outcome, Outcome::Holds);
    }

    #[test]
    fn lemma_h3_translate_family() {
        // P = prod_{a in {1,2,4}} (aT - 1)^2, maps lambda_{1,0}, lambda_{2,0}, lambda_{4,0}.
        // R = 4T - 1 divides lambda(P) and lambda(P') for the scalings
        // since scaling permutes the roots 1, 1/2, 1/4 downward.
        let q = p(&[-1, 1])
            .pow(2)
            .mul(&p(&[-1, 2]).pow(2))
            .mul(&p(&[-1, 4]).pow(2));
        let maps = vec![
            AffineMap::identity(),
            AffineMap::from_ints(2, 0).unwrap(),
            AffineMap::from_ints(4, 0).unwrap(),
        ];
        let r = p(&[-1, 4]);
        for map in &maps {
            assert!(r.divides(&map.apply(&q)), "R must divide {} image", map);
        }
        let v = check_lemma_h3(&q, &maps, &r, 3, 1, 6).unwrap();
        assert_eq!(v.outcome, Outcome::Holds);
    }

    #[test]
    fn lemma_h3_rejects_nondivisor() {
        let q = p(&[-1, 1]).mul(&p(&[1, 1]));
        let err = check_lemma_h3(&q, &[AffineMap::identity()], &p(&[-5, 1]), 1, 1, 2).unwrap_err();
        assert!(matches!(err, GlError::Precondition(_)));
    }

    #[test]
    fn squarefree_decomposition_layers() {
        let input = p(&[-1, 1]).pow(3).mul(&p(&[1, 1]));
        let parts = squarefree_decomposition(&input).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (p(&[1, 1]), 1));
        assert_eq!(parts[1], (p(&[-1, 1]), 3));
    }
}
