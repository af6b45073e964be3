//! Complete factorization of squarefree primitive integer polynomials:
//! factorization modulo a suitable odd prime (distinct-degree plus
//! Cantor-Zassenhaus splitting), monic multifactor Hensel lifting, and
//! subset recombination under a Mignotte-style coefficient bound.
//!
//! Non-monic inputs are handled through the monic transform
//! F(y) = lc^{n-1} f(y/lc); factors of f are recovered as primitive parts
//! of G(lc x).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::RatPoly;

// ---------- dense integer polynomials, low-to-high ----------

type ZPoly = Vec<BigInt>;

fn ztrim(mut v: ZPoly) -> ZPoly {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn zdeg(v: &ZPoly) -> usize {
    v.len().saturating_sub(1)
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(out)
}

/// Exact division of integer polynomials with monic divisor.
fn zdiv_monic(num: &ZPoly, den: &ZPoly) -> Option<ZPoly> {
    if den.is_empty() || !den.last().unwrap().is_one() {
        return None;
    }
    let mut rem = num.clone();
    if rem.len() < den.len() {
        return if ztrim(rem).is_empty() { Some(Vec::new()) } else { None };
    }
    let mut quot = vec![BigInt::zero(); rem.len() - den.len() + 1];
    for i in (0..quot.len()).rev() {
        let c = rem[i + den.len() - 1].clone();
        if !c.is_zero() {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
        }
        quot[i] = c;
    }
    if ztrim(rem).is_empty() {
        Some(ztrim(quot))
    } else {
        None
    }
}

fn zpoly_to_ratpoly(v: &ZPoly) -> RatPoly {
    RatPoly::from_coeffs(v.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

fn ratpoly_to_zpoly(p: &RatPoly) -> ZPoly {
    ztrim(p.coeffs().iter().map(|c| c.numer().clone()).collect())
}

// ---------- arithmetic mod a small odd prime ----------

type PPoly = Vec<u64>;

#[derive(Clone, Copy)]
struct Fp {
    p: u64,
}

impl Fp {
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }
    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }
    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    fn trim(&self, mut v: PPoly) -> PPoly {
        while v.last().map(|&c| c == 0).unwrap_or(false) {
            v.pop();
        }
        v
    }


    fn psub(&self, a: &PPoly, b: &PPoly) -> PPoly {
        let n = a.len().max(b.len());
        let mut out = vec![0u64; n];
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            out[i] = self.sub(x, y);
        }
        self.trim(out)
    }

    fn pmul(&self, a: &PPoly, b: &PPoly) -> PPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        self.trim(out)
    }

    fn pscale(&self, a: &PPoly, c: u64) -> PPoly {
        self.trim(a.iter().map(|&x| self.mul(x, c)).collect())
    }

    fn prem(&self, a: &PPoly, b: &PPoly) -> PPoly {
        let mut rem = a.clone();
        let db = b.len() - 1;
        let inv_lead = self.inv(*b.last().unwrap());
        while rem.len() > db {
            let c = self.mul(*rem.last().unwrap(), inv_lead);
            let shift = rem.len() - 1 - db;
            if c != 0 {
                for (j, &d) in b.iter().enumerate() {
                    let t = self.mul(c, d);
                    rem[shift + j] = self.sub(rem[shift + j], t);
                }
            }
            rem = self.trim(rem);
            if rem.len() <= db {
                break;
            }
        }
        self.trim(rem)
    }

    fn pdivrem(&self, a: &PPoly, b: &PPoly) -> (PPoly, PPoly) {
        let mut rem = a.clone();
        let db = b.len() - 1;
        if a.len() <= db {
            return (Vec::new(), rem);
        }
        let mut quot = vec![0u64; a.len() - db];
        let inv_lead = self.inv(*b.last().unwrap());
        for i in (0..quot.len()).rev() {
            if rem.len() < i + db + 1 {
                continue;
            }
            let c = self.mul(rem[i + db], inv_lead);
            quot[i] = c;
            if c != 0 {
                for (j, &d) in b.iter().enumerate() {
                    let t = self.mul(c, d);
                    rem[i + j] = self.sub(rem[i + j], t);
                }
            }
        }
        (self.trim(quot), self.trim(rem))
    }

    fn pgcd(&self, a: &PPoly, b: &PPoly) -> PPoly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_empty() {
            let r = self.prem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    fn monic(&self, a: &PPoly) -> PPoly {
        if a.is_empty() {
            return Vec::new();
        }
        let inv = self.inv(*a.last().unwrap());
        self.pscale(a, inv)
    }

    fn pderiv(&self, a: &PPoly) -> PPoly {
        if a.len() <= 1 {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(a.len() - 1);
        for (i, &c) in a.iter().enumerate().skip(1) {
            out.push(self.mul(c, (i as u64) % self.p));
        }
        self.trim(out)
    }

    /// x^e mod f for a big exponent, by repeated squaring.
    fn powmod_big(&self, base: &PPoly, e: &BigInt, f: &PPoly) -> PPoly {
        let mut acc = vec![1u64];
        let mut b = self.prem(base, f);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = self.prem(&self.pmul(&acc, &b), f);
            }
            b = self.prem(&self.pmul(&b, &b), f);
        }
        acc
    }
}

// ---------- factorization mod p ----------

/// Distinct-degree decomposition of a squarefree monic polynomial mod p:
/// returns (product-of-degree-d-factors, d) pairs.
fn distinct_degree(fp: Fp, f: &PPoly) -> Vec<(PPoly, usize)> {
    let mut out = Vec::new();
    let mut h = vec![0u64, 1]; // x
    let mut v = f.clone();
    let mut d = 0usize;
    while v.len() > 1 {
        d += 1;
        if 2 * d > zdeg_p(&v) {
            out.push((v.clone(), zdeg_p(&v)));
            break;
        }
        h = fp.powmod_big(&h, &BigInt::from(fp.p), &v);
        let hx = fp.psub(&h, &[0, 1][..].to_vec());
        let g = fp.pgcd(&hx, &v);
        if g.len() > 1 {
            out.push((g.clone(), d));
            let (q, r) = fp.pdivrem(&v, &g);
            debug_assert!(r.is_empty());
            v = fp.monic(&q);
            h = fp.prem(&h, &v);
        }
    }
    out
}

fn zdeg_p(v: &PPoly) -> usize {
    v.len().saturating_sub(1)
}

/// Cantor-Zassenhaus equal-degree splitting for odd p.
fn equal_degree(fp: Fp, f: &PPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<PPoly>) {
    let n = zdeg_p(f);
    if n == d {
        out.push(fp.monic(f));
        return;
    }
    let e = (BigInt::from(fp.p).pow(d as u32) - 1) / 2;
    loop {
        let u: PPoly = fp.trim((0..n).map(|_| rng.gen_range(0..fp.p)).collect());
        if u.len() <= 1 {
            continue;
        }
        let w = fp.powmod_big(&u, &e, f);
        let w1 = fp.psub(&w, &vec![1u64]);
        let g = fp.pgcd(&w1, f);
        if g.len() > 1 && zdeg_p(&g) < n {
            let (q, _) = fp.pdivrem(f, &g);
            equal_degree(fp, &g, d, rng, out);
            equal_degree(fp, &fp.monic(&q), d, rng, out);
            return;
        }
    }
}

/// Factor a squarefree monic polynomial mod an odd prime into monic
/// irreducibles (deterministic for a fixed seed).
fn factor_mod_p(fp: Fp, f: &PPoly, seed: u64) -> Vec<PPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (prod, d) in distinct_degree(fp, f) {
        equal_degree(fp, &prod, d, &mut rng, &mut out);
    }
    out.sort();
    out
}

// ---------- Hensel lifting (monic, multifactor, quadratic) ----------

fn mod_reduce(v: &ZPoly, m: &BigInt) -> ZPoly {
    ztrim(v.iter().map(|c| c.mod_floor(m)).collect())
}

fn mod_mul(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    mod_reduce(&zmul(a, b), m)
}

fn mod_sub(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_default();
        let y = b.get(i).cloned().unwrap_or_default();
        out[i] = (x - y).mod_floor(m);
    }
    ztrim(out)
}

fn mod_add(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_default();
        let y = b.get(i).cloned().unwrap_or_default();
        out[i] = (x + y).mod_floor(m);
    }
    ztrim(out)
}

/// Division with remainder mod m by a monic divisor.
fn mod_divrem_monic(num: &ZPoly, den: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    debug_assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem = num.clone();
    if rem.len() < den.len() {
        return (Vec::new(), mod_reduce(&rem, m));
    }
    let mut quot = vec![BigInt::zero(); rem.len() - den.len() + 1];
    for i in (0..quot.len()).rev() {
        let c = rem[i + den.len() - 1].mod_floor(m);
        if !c.is_zero() {
            for (j, d) in den.iter().enumerate() {
                let t = (&c * d).mod_floor(m);
                rem[i + j] = (&rem[i + j] - t).mod_floor(m);
            }
        }
        quot[i] = c;
    }
    (ztrim(quot), mod_reduce(&rem, m))
}

/// Extended Euclid over Z/p for polynomials: s a + t b = 1 (a, b coprime
/// mod p).
fn bezout_mod_p(fp: Fp, a: &PPoly, b: &PPoly) -> (PPoly, PPoly) {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0: PPoly = vec![1];
    let mut s1: PPoly = Vec::new();
    let mut t0: PPoly = Vec::new();
    let mut t1: PPoly = vec![1];
    while !r1.is_empty() {
        let (q, r) = fp.pdivrem(&r0, &r1);
        let ns = fp.psub(&s0, &fp.pmul(&q, &s1));
        let nt = fp.psub(&t0, &fp.pmul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = ns;
        t0 = t1;
        t1 = nt;
    }
    // r0 is a nonzero constant; normalize to 1
    debug_assert_eq!(r0.len(), 1);
    let inv = fp.inv(r0[0]);
    (fp.pscale(&s0, inv), fp.pscale(&t0, inv))
}

fn ppoly_to_zpoly(v: &PPoly) -> ZPoly {
    ztrim(v.iter().map(|&c| BigInt::from(c)).collect())
}

fn zpoly_to_ppoly(v: &ZPoly, fp: Fp) -> PPoly {
    let p = BigInt::from(fp.p);
    fp.trim(v.iter().map(|c| c.mod_floor(&p).to_u64().unwrap()).collect())
}

/// One quadratic Hensel step: from f = g h (mod m), s g + t h = 1 (mod m)
/// with h monic, to the same congruences mod m^2 (g', h' monic).
#[allow(clippy::type_complexity)]
fn hensel_step(
    f: &ZPoly,
    g: &ZPoly,
    h: &ZPoly,
    s: &ZPoly,
    t: &ZPoly,
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let e = mod_sub(f, &zmul(g, h), &m2);
    let (q, r) = mod_divrem_monic(&mod_mul(s, &e, &m2), h, &m2);
    let g1 = mod_add(&mod_add(g, &mod_mul(t, &e, &m2), &m2), &mod_mul(&q, g, &m2), &m2);
    let h1 = mod_add(h, &r, &m2);
    let b = mod_sub(&mod_add(&mod_mul(s, &g1, &m2), &mod_mul(t, &h1, &m2), &m2), &vec![BigInt::one()], &m2);
    let (c, d) = mod_divrem_monic(&mod_mul(s, &b, &m2), &h1, &m2);
    let s1 = mod_sub(s, &d, &m2);
    let t1 = mod_sub(&mod_sub(t, &mod_mul(t, &b, &m2), &m2), &mod_mul(&c, &g1, &m2), &m2);
    (g1, h1, s1, t1)
}

/// Lift the monic factorization f = prod(factors) (mod p) of a monic
/// integer polynomial to mod p^{2^j} >= target.
fn hensel_tree(f: &ZPoly, factors: &[PPoly], fp: Fp, target: &BigInt) -> Vec<ZPoly> {
    if factors.len() == 1 {
        return vec![mod_reduce(f, target)];
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let gp = left.iter().fold(vec![1u64], |acc, x| fp.pmul(&acc, x));
    let hp = right.iter().fold(vec![1u64], |acc, x| fp.pmul(&acc, x));
    let (sp, tp) = bezout_mod_p(fp, &gp, &hp);
    let mut g = ppoly_to_zpoly(&gp);
    let mut h = ppoly_to_zpoly(&hp);
    let mut s = ppoly_to_zpoly(&sp);
    let mut t = ppoly_to_zpoly(&tp);
    let mut m = BigInt::from(fp.p);
    while &m < target {
        let (g1, h1, s1, t1) = hensel_step(f, &g, &h, &s, &t, &m);
        g = g1;
        h = h1;
        s = s1;
        t = t1;
        m = &m * &m;
    }
    let mut out = hensel_tree(&g, left, fp, &m);
    out.extend(hensel_tree(&h, right, fp, &m));
    out
}

// ---------- recombination ----------

fn symmetric(v: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    ztrim(
        v.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// l2-norm squared of an integer polynomial.
fn norm2_sq(v: &ZPoly) -> BigInt {
    v.iter().map(|c| c * c).sum()
}

fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    loop {
        if is_prime_u64(c) {
            return c;
        }
        c += 1;
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for d in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n % d == 0 {
            return n == d;
        }
        if d * d > n {
            return true;
        }
    }
    let mut d = 37u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Factor a monic squarefree integer polynomial into monic integer
/// irreducibles.
fn factor_monic_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    let n = zdeg(f);
    if n <= 1 {
        return vec![f.clone()];
    }
    // choose an odd prime where f stays squarefree
    let mut p = 2u64;
    let fp;
    let fmodp;
    loop {
        p = next_prime(p);
        if p == 2 {
            continue;
        }
        let cand = Fp { p };
        let fm = zpoly_to_ppoly(f, cand);
        if fm.len() != f.len() {
            continue; // leading coefficient vanished (cannot happen, monic)
        }
        let deriv = cand.pderiv(&fm);
        if deriv.is_empty() {
            continue;
        }
        let g = cand.pgcd(&fm, &deriv);
        if g.len() == 1 {
            fp = cand;
            fmodp = fm;
            break;
        }
    }
    let modular = factor_mod_p(fp, &fmodp, 0x67656c66);
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    // Mignotte-style bound: |coeff of any monic factor| <= 2^n * ||f||_2
    let b = (BigInt::one() << n) * (norm2_sq(f).sqrt() + 1);
    let target = &b * 2 + 1;
    let lifted = hensel_tree(&mod_reduce(f, &pow_to_at_least(fp.p, &target)), &modular, fp, &target);
    let modulus = pow_to_at_least(fp.p, &target);

    // subset recombination
    let mut remaining: Vec<ZPoly> = lifted;
    let mut current = f.clone();
    let mut out = Vec::new();
    let mut size = 1usize;
    'outer: while 2 * size <= remaining.len() {
        let idxs: Vec<usize> = (0..remaining.len()).collect();
        for combo in combinations(&idxs, size) {
            let mut prod = vec![BigInt::one()];
            for &i in &combo {
                prod = mod_mul(&prod, &remaining[i], &modulus);
            }
            let cand = symmetric(&prod, &modulus);
            if cand.is_empty() {
                continue;
            }
            if let Some(q) = zdiv_monic(&current, &cand) {
                out.push(cand);
                current = q;
                let keep: Vec<ZPoly> = remaining
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !combo.contains(i))
                    .map(|(_, v)| v.clone())
                    .collect();
                remaining = keep;
                continue 'outer;
            }
        }
        size += 1;
    }
    if zdeg(&current) >= 1 {
        out.push(current);
    }
    out
}

fn pow_to_at_least(p: u64, target: &BigInt) -> BigInt {
    let mut m = BigInt::from(p);
    while &m < target {
        m = &m * &m;
    }
    m
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut combo = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, combo: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if combo.len() == k {
            out.push(combo.clone());
            return;
        }
        for i in start..items.len() {
            combo.push(items[i]);
            rec(items, k, i + 1, combo, out);
            combo.pop();
        }
    }
    rec(items, k, 0, &mut combo, &mut out);
    out
}

/// Factor a squarefree primitive integer polynomial (positive leading
/// coefficient, degree >= 1) into primitive irreducible integer factors
/// with positive leading coefficients.
pub fn factor_squarefree_primitive(f: &RatPoly) -> Vec<RatPoly> {
    debug_assert!(f.has_integer_coeffs());
    let z = ratpoly_to_zpoly(f);
    let n = zdeg(&z);
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![f.clone()];
    }
    let lc = z.last().unwrap().clone();
    if lc.is_one() {
        return factor_monic_squarefree(&z)
            .into_iter()
            .map(|g| zpoly_to_ratpoly(&g).primitive_part().unwrap())
            .collect();
    }
    // monic transform F(y) = lc^{n-1} f(y/lc)
    let mut monic = vec![BigInt::zero(); n + 1];
    // coefficient of y^i in F is f_i * lc^{n-1-i}
    for (i, c) in z.iter().enumerate() {
        let e = (n - 1).saturating_sub(i);
        let mut scale = BigInt::one();
        for _ in 0..e {
            scale *= &lc;
        }
        monic[i] = c * scale;
    }
    // for i = n the coefficient is f_n * lc^{-1} = 1
    monic[n] = BigInt::one();
    let factors = factor_monic_squarefree(&ztrim(monic));
    factors
        .into_iter()
        .map(|g| {
            // undo: factor of f is primitive part of G(lc x)
            let gr = zpoly_to_ratpoly(&g);
            let sub = RatPoly::from_coeffs(vec![
                BigRational::zero(),
                BigRational::from_integer(lc.clone()),
            ]);
            gr.compose(&sub).primitive_part().unwrap()
        })
        .collect()
}
