//! Z^s lattice-set machinery: orbits, pullback intersections, the
//! constructive partition propositions, intersection cardinality bounds,
//! and the continuous Zarankiewicz-type estimate with a brute-force
//! oracle.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::GlError;
use crate::interval::{RealInterval, DEFAULT_BITS_CAP};
use crate::poly::binomial;
use crate::verdict::Verdict;

pub type Point = Vec<i64>;

pub const MAX_DIMENSION: usize = 16;

/// A finite subset of Z^s with set semantics (sorted, deduplicated).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSet {
    pub s: usize,
    points: BTreeSet<Point>,
}

impl LatticeSet {
    pub fn new(s: usize, points: impl IntoIterator<Item = Point>) -> Result<Self, GlError> {
        if s == 0 || s > MAX_DIMENSION {
            return Err(GlError::precondition("dimension s must be in 1..=16"));
        }
        let mut set = BTreeSet::new();
        for p in points {
            if p.len() != s {
                return Err(GlError::precondition("point dimension mismatch"));
            }
            set.insert(p);
        }
        Ok(LatticeSet { s, points: set })
    }

    pub fn empty(s: usize) -> Result<Self, GlError> {
        Self::new(s, std::iter::empty())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Point> {
        self.points.iter()
    }

    pub fn is_subset(&self, other: &LatticeSet) -> bool {
        self.points.is_subset(&other.points)
    }

    pub fn union(&self, other: &LatticeSet) -> LatticeSet {
        LatticeSet {
            s: self.s,
            points: self.points.union(&other.points).cloned().collect(),
        }
    }

    pub fn intersection(&self, other: &LatticeSet) -> LatticeSet {
        LatticeSet {
            s: self.s,
            points: self.points.intersection(&other.points).cloned().collect(),
        }
    }

    pub fn difference(&self, other: &LatticeSet) -> LatticeSet {
        LatticeSet {
            s: self.s,
            points: self.points.difference(&other.points).cloned().collect(),
        }
    }

    pub fn is_disjoint(&self, other: &LatticeSet) -> bool {
        self.points.is_disjoint(&other.points)
    }

    /// Translate by a fixed vector.
    pub fn translate(&self, v: &Point) -> LatticeSet {
        LatticeSet {
            s: self.s,
            points: self
                .points
                .iter()
                .map(|p| p.iter().zip(v).map(|(a, b)| a + b).collect())
                .collect(),
        }
    }

    /// The lexicographically smallest point, if any.
    pub fn min_point(&self) -> Option<&Point> {
        self.points.iter().next()
    }
}

fn l1_dist(a: &Point, b: &Point) -> i64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

fn coord_sum(p: &Point) -> i64 {
    p.iter().sum()
}

/// O(E) = union of E + e_i.
pub fn orbit(e: &LatticeSet) -> LatticeSet {
    let mut out = BTreeSet::new();
    for p in e.iter() {
        for i in 0..e.s {
            let mut q = p.clone();
            q[i] += 1;
            out.insert(q);
        }
    }
    LatticeSet { s: e.s, points: out }
}

/// The intersection of the translates F - e_i, optionally also with F
/// itself. Satisfies orbit(result) subset of F, and the adjunction
/// orbit(E) subset of F iff E subset of pullback_intersection(F, false).
pub fn pullback_intersection(f: &LatticeSet, include_f: bool) -> LatticeSet {
    let mut acc: Option<LatticeSet> = if include_f { Some(f.clone()) } else { None };
    for i in 0..f.s {
        let mut neg = vec![0i64; f.s];
        neg[i] = -1;
        let shifted = f.translate(&neg);
        acc = Some(match acc {
            None => shifted,
            Some(a) => a.intersection(&shifted),
        });
    }
    acc.expect("s >= 1")
}

/// C_k(x, E): points of E on x's coordinate-sum hyperplane within
/// l1-distance 2k of x.
pub fn ball(x: &Point, k: usize, e: &LatticeSet) -> LatticeSet {
    let sum = coord_sum(x);
    LatticeSet {
        s: e.s,
        points: e
            .iter()
            .filter(|p| coord_sum(p) == sum && l1_dist(p, x) <= 2 * k as i64)
            .cloned()
            .collect(),
    }
}

/// D_k(x, E) = O(C_k(x, E)).
pub fn d_set(x: &Point, k: usize, e: &LatticeSet) -> LatticeSet {
    orbit(&ball(x, k, e))
}

/// The cardinality threshold binom(s, l+2) / (2^{l+1} (l+1)!) from the
/// partition proposition's hypothesis.
pub fn partition_threshold(s: usize, ell: usize) -> BigRational {
    let mut denom = BigInt::from(1u32);
    for i in 1..=ell + 1 {
        denom *= 2 * i;
    }
    BigRational::new(binomial(s, ell + 2), denom)
}

/// A partition of E and F into anchored parts, re-checkable from the raw
/// sets alone. `ell = None` marks the simple-mode certificate whose parts
/// E_i are the singleton anchors and whose bound is |F_i| >= s/2.
#[derive(Clone, Debug)]
pub struct PartitionCertificate {
    pub r: usize,
    pub anchors: Vec<Point>,
    pub e_parts: Vec<LatticeSet>,
    pub f_parts: Vec<LatticeSet>, // length r + 1; the last part is unchecked
    pub ell: Option<usize>,
}

impl PartitionCertificate {
    /// Re-validate every condition from the raw data: the partitions are
    /// disjoint and exhaust E resp. F, each E_i lies in the l-ball of its
    /// anchor, each F_i lies in O(E_i), and the per-part and aggregate
    /// cardinality bounds hold.
    pub fn validate(&self, e: &LatticeSet, f: &LatticeSet) -> Verdict {
        let s = e.s;
        let mut ok = self.r == self.anchors.len()
            && self.r == self.e_parts.len()
            && self.r + 1 == self.f_parts.len();
        if ok {
            let mut e_seen = LatticeSet::empty(s).expect("valid s");
            for part in &self.e_parts {
                ok &= e_seen.is_disjoint(part);
                e_seen = e_seen.union(part);
            }
            ok &= &e_seen == e;
            let mut f_seen = LatticeSet::empty(s).expect("valid s");
            for part in &self.f_parts {
                ok &= f_seen.is_disjoint(part);
                f_seen = f_seen.union(part);
            }
            ok &= &f_seen == f;
        }
        if ok {
            for i in 0..self.r {
                let ei = &self.e_parts[i];
                let fi = &self.f_parts[i];
                match self.ell {
                    Some(ell) => {
                        ok &= ei.is_subset(&ball(&self.anchors[i], ell, e));
                        ok &= fi.is_subset(&orbit(ei));
                        // |F_i| >= (s - l) / (2(l+1)) |E_i|
                        ok &= 2 * (ell + 1) * fi.len() >= (s - ell) * ei.len();
                    }
                    None => {
                        ok &= ei.len() == 1 && ei.contains(&self.anchors[i]);
                        ok &= fi.is_subset(&orbit(ei));
                        ok &= 2 * fi.len() >= s;
                    }
                }
            }
            // aggregate bound
            ok &= match self.ell {
                Some(ell) => 2 * (ell + 1) * f.len() >= (s - ell) * e.len(),
                None => 2 * f.len() >= s * e.len(),
            };
        }
        Verdict::exact(
            "partition_certificate",
            crate::poly::rat(if ok { 0 } else { 1 }),
            BigRational::zero(),
        )
    }
}

/// The simple partition: requires orbit(E) subset of F and |F| <= s^2/4;
/// yields singleton parts with |F_i| >= s/2 and |F| >= (s/2)|E|.
pub fn partition_prop61(
    e: &LatticeSet,
    f: &LatticeSet,
) -> Result<(PartitionCertificate, Verdict), GlError> {
    if e.s != f.s {
        return Err(GlError::precondition("dimension mismatch"));
    }
    if !orbit(e).is_subset(f) {
        return Err(GlError::precondition("need orbit(E) subset of F"));
    }
    if 4 * f.len() > e.s * e.s {
        return Err(GlError::precondition("need |F| <= s^2/4"));
    }
    let anchors: Vec<Point> = e.iter().cloned().collect();
    let mut used = LatticeSet::empty(e.s)?;
    let mut f_parts = Vec::with_capacity(anchors.len() + 1);
    let mut e_parts = Vec::with_capacity(anchors.len());
    for x in &anchors {
        let singleton = LatticeSet::new(e.s, [x.clone()])?;
        let part = orbit(&singleton).difference(&used);
        used = used.union(&part);
        f_parts.push(part);
        e_parts.push(singleton);
    }
    f_parts.push(f.difference(&used));
    let cert = PartitionCertificate {
        r: anchors.len(),
        anchors,
        e_parts,
        f_parts,
        ell: None,
    };
    let verdict = cert.validate(e, f);
    Ok((cert, verdict))
}

/// The recursive ball partition: requires orbit(E) subset of F,
/// 0 <= l <= s - 2 and |F| <= binom(s, l+2) / (2^{l+1} (l+1)!); yields
/// parts with E_i in the l-ball of the anchor, F_i in O(E_i), and
/// |F_i| >= (s-l)/(2(l+1)) |E_i|.
pub fn partition_prop62(
    e: &LatticeSet,
    f: &LatticeSet,
    ell: usize,
) -> Result<(PartitionCertificate, Verdict), GlError> {
    let s = e.s;
    if s != f.s {
        return Err(GlError::precondition("dimension mismatch"));
    }
    if ell + 2 > s {
        return Err(GlError::precondition("need 0 <= l <= s - 2"));
    }
    if !orbit(e).is_subset(f) {
        return Err(GlError::precondition("need orbit(E) subset of F"));
    }
    let fr = BigRational::from_integer(BigInt::from(f.len()));
    if fr > partition_threshold(s, ell) {
        return Err(GlError::precondition(
            "need |F| <= binom(s, l+2) / (2^{l+1} (l+1)!)",
        ));
    }
    let mut rem_e = e.clone();
    let mut rem_f = f.clone();
    let mut anchors = Vec::new();
    let mut e_parts = Vec::new();
    let mut f_parts = Vec::new();
    while let Some(x) = rem_e.min_point().cloned() {
        // smallest k in 0..=l with
        // |D_k /\ O(E \ C_k)| <= (s-k)/(2(k+1)) |C_k|
        let mut chosen = None;
        for k in 0..=ell {
            let ck = ball(&x, k, &rem_e);
            let dk = d_set(&x, k, &rem_e);
            let outside = orbit(&rem_e.difference(&ck));
            let overlap = dk.intersection(&outside).len();
            if 2 * (k + 1) * overlap <= (s - k) * ck.len() {
                chosen = Some(k);
                break;
            }
        }
        let Some(k) = chosen else {
            return Err(GlError::InternalBug(
                "no admissible k up to l despite the hypothesis".into(),
            ));
        };
        let e1 = ball(&x, k, &rem_e);
        let f1 = d_set(&x, k, &rem_e).difference(&orbit(&rem_e.difference(&e1)));
        anchors.push(x);
        rem_e = rem_e.difference(&e1);
        rem_f = rem_f.difference(&f1);
        e_parts.push(e1);
        f_parts.push(f1);
    }
    f_parts.push(rem_f);
    let cert = PartitionCertificate {
        r: anchors.len(),
        anchors,
        e_parts,
        f_parts,
        ell: Some(ell),
    };
    let verdict = cert.validate(e, f);
    Ok((cert, verdict))
}

/// For E = F /\ (F - e_1) /\ ... /\ (F - e_s): checks
/// |E| <= |F| - |F|^{(s-1)/s} and |E| <= (1/s) |F| log |F|.
pub fn check_appendix_b(f: &LatticeSet) -> Result<(Verdict, Verdict), GlError> {
    if f.is_empty() {
        return Err(GlError::precondition("F must be nonempty"));
    }
    let s = f.s;
    let e = pullback_intersection(f, true);
    let ecard = e.len() as i64;
    let fcard = f.len() as i64;
    // the comparisons are far from tight; a low starting precision keeps
    // exhaustive sweeps cheap, escalating only when needed
    let power = Verdict::decide("appendixB_power_bound", 24, DEFAULT_BITS_CAP, |bits| {
        let lhs = RealInterval::from_int(ecard);
        let expo = BigRational::new(BigInt::from(s as i64 - 1), BigInt::from(s as i64));
        let fpow = RealInterval::from_int(fcard)
            .pow_rational(&expo, bits)
            .expect("|F| >= 1");
        (lhs, &RealInterval::from_int(fcard) - &fpow)
    });
    let log = Verdict::decide("appendixB_log_bound", 24, DEFAULT_BITS_CAP, |bits| {
        let lhs = &RealInterval::from_int(ecard) * &RealInterval::from_int(s as i64);
        let lnf = RealInterval::from_int(fcard).ln(bits).expect("|F| >= 1");
        (lhs, &RealInterval::from_int(fcard) * &lnf)
    });
    Ok((power, log))
}

/// A nonnegative rational function on A x E with a per-entry cap and a
/// pairwise min-sum budget.
#[derive(Clone, Debug)]
pub struct ExponentTable {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub entries: Vec<Vec<BigRational>>,
    pub kappa1: BigRational,
    pub kappa2: BigRational,
}

impl ExponentTable {
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        entries: Vec<Vec<BigRational>>,
        kappa1: BigRational,
        kappa2: BigRational,
    ) -> Result<Self, GlError> {
        if row_labels.is_empty() || col_labels.is_empty() {
            return Err(GlError::precondition("A and E must be nonempty"));
        }
        if !kappa1.is_positive() || !kappa2.is_positive() {
            return Err(GlError::precondition("kappa_1, kappa_2 must be positive"));
        }
        if entries.len() != row_labels.len()
            || entries.iter().any(|r| r.len() != col_labels.len())
        {
            return Err(GlError::precondition("entry shape mismatch"));
        }
        for row in &entries {
            for v in row {
                if v.is_negative() || *v > kappa1 {
                    return Err(GlError::precondition("entries must lie in [0, kappa_1]"));
                }
            }
        }
        Ok(ExponentTable { row_labels, col_labels, entries, kappa1, kappa2 })
    }
}

/// Verifies sum phi <= kappa_1 |E| + kappa_2 binom(|A|, 2) exactly, after
/// checking the pairwise hypothesis sum_xi min(phi(a1, xi), phi(a2, xi))
/// <= kappa_2 for distinct rows.
pub fn check_prop_z(tbl: &ExponentTable) -> Result<Verdict, GlError> {
    let rows = tbl.entries.len();
    for i in 0..rows {
        for j in i + 1..rows {
            let pair_sum: BigRational = tbl.entries[i]
                .iter()
                .zip(&tbl.entries[j])
                .map(|(a, b)| if a <= b { a.clone() } else { b.clone() })
                .sum();
            if pair_sum > tbl.kappa2 {
                return Err(GlError::precondition(
                    "pairwise min-sum exceeds kappa_2",
                ));
            }
        }
    }
    let total: BigRational = tbl.entries.iter().flatten().cloned().sum();
    let bound = &tbl.kappa1 * BigRational::from_integer(BigInt::from(tbl.col_labels.len()))
        + &tbl.kappa2 * BigRational::from_integer(binomial(rows, 2));
    Ok(Verdict::exact("propZ_total_bound", total, bound))
}

/// Exact k(m_1, n_1; m, n) by exhaustion over 0/1 matrices: the smallest
/// k such that every m x n matrix with at least k ones contains an
/// all-ones m_1 x n_1 submatrix. Range-limited to m, n <= 4.
pub fn zarankiewicz_oracle(
    m1: usize,
    n1: usize,
    m: usize,
    n: usize,
) -> Result<usize, GlError> {
    if !(2 <= m1 && m1 <= m && m <= 4 && 2 <= n1 && n1 <= n && n <= 4) {
        return Err(GlError::precondition("need 2 <= m_1 <= m <= 4, 2 <= n_1 <= n <= 4"));
    }
    let cells = m * n;
    let mut best = 0usize;
    'outer: for mask in 0u32..(1u32 << cells) {
        let ones = mask.count_ones() as usize;
        if ones <= best {
            continue;
        }
        // rows as bitmasks over columns
        let row_bits: Vec<u32> = (0..m)
            .map(|r| (0..n).filter(|c| mask >> (r * n + c) & 1 == 1).fold(0, |a, c| a | 1 << c))
            .collect();
        // all m_1-subsets of rows: common columns must stay below n_1
        for rows_mask in 1u32..(1 << m) {
            if rows_mask.count_ones() as usize != m1 {
                continue;
            }
            let common = (0..m)
                .filter(|r| rows_mask >> r & 1 == 1)
                .fold(u32::MAX, |a, r| a & row_bits[r]);
            if (common & ((1 << n) - 1)).count_ones() as usize >= n1 {
                continue 'outer; // contains the forbidden submatrix
            }
        }
        best = ones;
    }
    Ok(best + 1)
}
