//! Seeded, reproducible verification campaigns. Every suite draws its
//! instances from a ChaCha stream keyed by (seed, trial index), so the
//! same seed yields byte-identical reports regardless of worker count.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{
    check_appendix_b, check_prop_z, partition_prop61, partition_prop62, ExponentTable, LatticeSet,
};
use crate::error::GlError;
use crate::factorgcd::ScaleSet;
use crate::poly::{check_gauss_bounds, rat, ratio, EvalPointSet, RatPoly};
use crate::resultants::{
    build_ef_resultant, build_structured_matrix, check_det_identity, resultant_via_structure,
    sylvester_resultant, verify_cor_pp, verify_prop_fg,
};
use crate::transforms::{check_height_transfer, AffineMap};
use crate::verdict::{digest_inputs, Certificate, Verdict};

/// The named verification suites, in canonical order.
pub const SUITES: &[&str] = &[
    "gauss",
    "propfg",
    "corpp",
    "detid",
    "lemmaH1",
    "thmG",
    "partition61",
    "partition62",
    "appendixB",
    "propZ",
    "efresultant",
];

#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub seed: u64,
    pub trials: usize,
    pub workers: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig { seed: 0, trials: 100, workers: 1 }
    }
}

/// Per-trial RNG: one ChaCha stream per trial index under a common seed.
fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64 + 1);
    rng
}

fn rand_int(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    rng.gen_range(lo..=hi)
}

/// Random nonzero integer polynomial with degree in [dmin, dmax] and
/// coefficients in [-h, h].
fn rand_poly(rng: &mut ChaCha8Rng, dmin: usize, dmax: usize, h: i64) -> RatPoly {
    let d = rng.gen_range(dmin..=dmax);
    loop {
        let mut c: Vec<i64> = (0..=d).map(|_| rand_int(rng, -h, h)).collect();
        if c[d] == 0 {
            c[d] = 1;
        }
        let p = RatPoly::from_ints(&c);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Distinct rational points: k values drawn from a fixed small pool.
fn rand_points(rng: &mut ChaCha8Rng, k: usize) -> Vec<BigRational> {
    let pool: Vec<BigRational> = vec![
        rat(0),
        rat(1),
        rat(-1),
        rat(2),
        rat(-2),
        ratio(1, 2),
        ratio(-1, 2),
        rat(3),
        ratio(3, 2),
        ratio(-2, 3),
    ];
    let mut idx: Vec<usize> = (0..pool.len()).collect();
    // Fisher-Yates over the pool indices
    for i in (1..idx.len()).rev() {
        let j = rng.gen_range(0..=i);
        idx.swap(i, j);
    }
    idx.into_iter().take(k).map(|i| pool[i].clone()).collect()
}

fn run_trials<F>(cfg: &CampaignConfig, f: F) -> Result<Vec<Certificate>, GlError>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Certificate, GlError> + Sync,
{
    let workers = cfg.workers.max(1);
    if workers == 1 {
        return (0..cfg.trials)
            .map(|i| f(&mut trial_rng(cfg.seed, i)))
            .collect();
    }
    let mut out: Vec<Option<Result<Certificate, GlError>>> = Vec::new();
    out.resize_with(cfg.trials, || None);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots = std::sync::Mutex::new(&mut out);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= cfg.trials {
                    break;
                }
                let r = f(&mut trial_rng(cfg.seed, i));
                slots.lock().unwrap()[i] = Some(r);
            });
        }
    });
    out.into_iter().map(|r| r.expect("trial completed")).collect()
}

/// Run a named suite; the report is one certificate per trial, in trial
/// order.
pub fn run_suite(name: &str, cfg: &CampaignConfig) -> Result<Vec<Certificate>, GlError> {
    match name {
        "gauss" => run_trials(cfg, trial_gauss),
        "propfg" => run_trials(cfg, trial_propfg),
        "corpp" => run_trials(cfg, trial_corpp),
        "detid" => run_trials(cfg, trial_detid),
        "lemmaH1" => run_trials(cfg, trial_lemma_h1),
        "thmG" => run_trials(cfg, trial_thm_g),
        "partition61" => run_trials(cfg, trial_partition61),
        "partition62" => run_trials(cfg, trial_partition62),
        "appendixB" => run_trials(cfg, trial_appendix_b),
        "propZ" => run_trials(cfg, trial_prop_z),
        "efresultant" => run_trials(cfg, trial_ef_resultant),
        _ => Err(GlError::precondition(format!("unknown suite: {name}"))),
    }
}

fn trial_gauss(rng: &mut ChaCha8Rng) -> Result<Certificate, GlError> {
    let k = rng.gen_range(2..=4usize);
    let factors: Vec<RatPoly> = (0..k).map(|_| rand_poly(rng, 0, 4, 9)).collect();
    let v = check_gauss_bounds(&factors)?;
    let texts: Vec<String> = factors.iter().map(|f| f.to_text()).collect();
    let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
    Ok(v.certificate(&digest_inputs(&refs), serde_json::json!({ "factors": texts })))
}

fn trial_propfg(rng: &mut ChaCha8Rng) -> Result<Certificate, GlError> {
    let f = rand_poly(rng, 1, 4, 5);
    let g = rand_poly(rng, 1, 4, 5);
    let s = rng.gen_range(1..=2usize);
    let t = rng.gen_range(1..=2usize);
    let pts = rand_points(rng, s);
    let e = EvalPointSet::from_rationals(&pts)?;
    let n = f.deg().max(g.deg()).max(s * t);
    let v = verify_prop_fg(&f, &g, &e, t, f.deg(), g.deg(), n)?;
    let params = serde_json::json!({
        "f": f.to_text(), "g": g.to_text(), "t": t, "n": n,
        "points": pts.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    });
    Ok(v.certificate(&digest_inputs(&[&f.to_text(), &g.to_text()]), params))
}

fn trial_corpp(rng: &mut ChaCha8Rng) -> Result<Certificate, GlError> {
    let r = rng.gen_range(2..=3usize);
    let polys: Vec<RatPoly> = (0..r).map(|_| rand_poly(rng, 1, 3, 5)).collect();
    let s = rng.gen_range(1..=2usize);
    let t = rng.gen_range(1..=2usize);
    let pts = rand_points(rng, s);
    let e = EvalPointSet::from_rationals(&pts)?;
    let n = polys.iter().map(|p| p.deg()).max().unwrap().max(s * t);
    let v = verify_cor_pp(&polys, &e, t, n)?;
    let texts: Vec<String> = polys.iter().map(|p| p.to_text()).collect();
    let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
    Ok(v.certificate(
        &digest_inputs(&refs),
        serde_json::json!({ "polys": texts, "t": t, "n": n }),
    ))
}

fn trial_detid(rng: &mut ChaCha8Rng) -> Result<Certificate, GlError> {
    let m = rng.gen_range(2..=6usize);
    let s = rng.gen_range(1..=3usize.min(m));
    let t_max = (m / s).min(2).max(1);
    let t = rng.gen_range(1..=t_max);
    let q = rand_poly(rng, 0, 2, 4);
    let pts = rand_points(rng, s);
    let polys: Vec<RatPoly> = (0..m).map(|_| rand_poly(rng, 0, m - 1, 4)).collect();
    let mat = build_structured_matrix(&q, &pts, t, m, &polys)?;
    let (v, sign) = check_det_identity(&mat);
    let texts: Vec<String> = polys.iter().map(|p| p.to_text()).collect();
    let params = serde_json::json!({
        "m": m, "s": s, "t": t, "q": q.to_text(), "sign": sign,
        "points": pts.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "polys": texts,
    });
    Ok(v.certificate(&digest_inputs(&[&q.to_text()]), params))
}

fn trial_lemma_h1(rng: &mut ChaCha8Rng) -> Result<Certificate, GlError> {
    let scales = [rat(1), rat(2), rat(3), ratio(1, 2), ratio(1, 3), ratio(5, 2)];
    let a = scales[rng.gen_range(0..scales.len())].clone();
    let b = ratio(rand_int(rng, -4, 4), rand_int(rng, 1, 3));
    let map = AffineMap::new(a, b)?;
    let p = rand_poly(rng, 1, 5, 9);
    let n = p.deg();
    let v = check_height_transfer(&map, &p, n)?;
    let params = serde_json::json!({
        "map": format!("{map}"), "p": p.to_text(), "n": n,
    });
    Ok(v.certificate(&digest_inputs(&[&p.to_text()]), params))
}

fn trial_thm_g(rng: &mut ChaCha8Rng) -> Result<Certificate, GlError> {
    // l = 0 works from s = 3 (N(3,0) = 3/2), l = 1 needs s = 5
    let ell = rng.gen_range(0..=1usize);
    let primes: &[i64] = if ell == 0 {
        if rng.gen_bool(0.5) { &[2, 3, 5] } else { &[2, 3, 5, 7] }
    } else {
        &[2, 3, 5, 7, 11]
    };
    let a = ScaleSet::from_ints(primes)?;
    let cap = crate::combinatorics::partition_threshold(a.len(), ell)
        .floor()
        .to_integer();
    let max_factors: usize = usize::try_from(&cap).unwrap_or(1).max(1);
    // orbit pattern: distinct group elements a^e applied to one base factor
    let base = loop {
        let c0 = rand_int(rng, 1, 4);
        let c1 = rand_int(rng, 1, 3);
        let r = RatPoly::from_ints(&[c0, c1]);
        if !r.coeff(0).is_zero() {
            break r;
        }
    };
    let k = rng.gen_range(1..=max_factors);
    let mut p = RatPoly::one();
    let mut exps = Vec::new();
    for i in 0..k {
        let g = rat(primes[i % primes.len()]);
        let e = rng.gen_range(1..=2u32);
        let mut scale = BigRational::one();
        for _ in 0..e {
            scale *= &g;
        }
        exps.push(scale.to_string());
        let factor = AffineMap::scaling(scale)?.apply(&base).primitive_part()?;
        let mult = rng.gen_range(1..=2usize);
        p = p.mul(&factor.pow(mult));
    }
    let p = p.primitive_part()?;
    let (vd, vh) = crate::factorgcd::verify_thm_g(&p, &a, ell)?;
    let v = Verdict::all("thmG_bounds", &[vd, vh]);
    let params = serde_json::json!({
        "p": p.to_text(), "base": base.to_text(), "scales": exps,
        "A": primes, "ell": ell,
    });
    Ok(v.certificate(&digest_inputs(&[&p.to_text()]), params))
}

/// Clustered lattice points: coordinates mostly zero, a few small entries.
fn rand_lattice_points(rng: &mut ChaCha8Rng, s: usize, k: usize) -> Vec<Vec<i64>> {
    (0..k)
        .map(|_| {
            let mut p = vec![0i64; s];
            for slot in p.iter_mut().take(3) {
                *slot = rand_int(rng, 0, 1);
            }
            p
        })
        .collect()
}

fn trial_partition61(rng: &mut ChaCha8Rng) -> Result<Certificate, GlError> {
    let s = rng.gen_range(8..=12usize);
    loop {
        let k = rng.gen_range(1..=3usize);
        let e = LatticeSet::new(s, rand_lattice_points(rng, s, k))?;
        let f = crate::combinatorics::orbit(&e);
        if 4 * f.len() > s * s {
            continue;
        }
        let (cert, v) = partition_prop61(&e, &f)?;
        let revalidate = cert.validate(&e, &f);
        let v = Verdict::all("partition61", &[v, revalidate]);
        let params = serde_json::json!({
            "s": s, "E": e.iter().cloned().collect::<Vec<_>>(),
            "anchors": cert.anchors,
        });
        return Ok(v.certificate(&digest_inputs(&[&format!("{e:?}")]), params));
    }
}

fn trial_partition62(rng: &mut ChaCha8Rng) -> Result<Certificate, GlError> {
    let s = rng.gen_range(8..=12usize);
    loop {
        let ell = rng.gen_range(0..=2usize);
        let k = rng.gen_range(1..=3usize);
        let e = LatticeSet::new(s, rand_lattice_points(rng, s, k))?;
        let f = crate::combinatorics::orbit(&e);
        let cap = crate::combinatorics::partition_threshold(s, ell);
        if BigRational::from_integer(BigInt::from(f.len())) > cap {
            continue;
        }
        let (cert, v) = partition_prop62(&e, &f, ell)?;
        let revalidate = cert.validate(&e, &f);
        let v = Verdict::all("partition62", &[v, revalidate]);
        let params = serde_json::json!({
            "s": s, "ell": ell, "E": e.iter().cloned().collect::<Vec<_>>(),
            "parts": cert.e_parts.len(),
        });
        return Ok(v.certificate(&digest_inputs(&[&format!("{e:?}")]), params));
    }
}

fn trial_appendix_b(rng: &mut ChaCha8Rng) -> Result<Certificate, GlError> {
    let s = rng.gen_range(1..=3usize);
    let k = rng.gen_range(2..=6usize);
    let points: Vec<Vec<i64>> = (0..k)
        .map(|_| (0..s).map(|_| rand_int(rng, 0, 4)).collect())
        .collect();
    let f = LatticeSet::new(s, points)?;
    let (v1, v2) = check_appendix_b(&f)?;
    let v = Verdict::all("appendixB_bounds", &[v1, v2]);
    let params = serde_json::json!({
        "s": s, "F": f.iter().cloned().collect::<Vec<_>>(),
    });
    Ok(v.certificate(&digest_inputs(&[&format!("{f:?}")]), params))
}

fn trial_prop_z(rng: &mut ChaCha8Rng) -> Result<Certificate, GlError> {
    let rows = rng.gen_range(2..=4usize);
    let cols = rng.gen_range(1..=4usize);
    let kappa1 = rat(rand_int(rng, 4, 8));
    let kappa2 = rat(rand_int(rng, 2, 4));
    // admissible by construction: per column, one favored row may be large;
    // all other entries stay below kappa2 / (2 cols)
    let small_cap = &kappa2 / rat(2 * cols as i64);
    let mut entries = vec![vec![BigRational::zero(); cols]; rows];
    for (j, col) in (0..cols).enumerate() {
        let favored = rng.gen_range(0..rows);
        let _ = j;
        for (i, row) in entries.iter_mut().enumerate() {
            row[col] = if i == favored {
                &kappa1 * ratio(rand_int(rng, 0, 4), 4)
            } else {
                &small_cap * ratio(rand_int(rng, 0, 3), 4)
            };
        }
    }
    let tbl = ExponentTable::new(
        (0..rows).map(|i| format!("a{i}")).collect(),
        (0..cols).map(|j| format!("x{j}")).collect(),
        entries,
        kappa1.clone(),
        kappa2.clone(),
    )?;
    let v = check_prop_z(&tbl)?;
    let params = serde_json::json!({
        "rows": rows, "cols": cols,
        "kappa1": kappa1.to_string(), "kappa2": kappa2.to_string(),
        "entries": tbl.entries.iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    });
    Ok(v.certificate(&digest_inputs(&[&format!("{:?}", tbl.entries)]), params))
}

fn trial_ef_resultant(rng: &mut ChaCha8Rng) -> Result<Certificate, GlError> {
    let p = rand_poly(rng, 1, 4, 4);
    let n = p.deg().max(rng.gen_range(1..=4usize));
    // E must contain 0 exactly
    let mut epts = vec![rat(0)];
    epts.extend(rand_points(rng, 2).into_iter().filter(|x| !x.is_zero()).take(1));
    let e = EvalPointSet::from_rationals(&epts)?;
    let s = rng.gen_range(1..=(2 * n).min(3));
    let fpts = rand_points(rng, s);
    let f = EvalPointSet::from_rationals(&fpts)?;
    let (r, verdicts) = build_ef_resultant(&p, &e, &f, n, s)?;
    let v = Verdict::all("efresultant_bounds", &verdicts);
    let params = serde_json::json!({
        "p": p.to_text(), "n": n, "s": s,
        "R_degree": r.r.deg(),
        "E": epts.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "F": fpts.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
    });
    Ok(v.certificate(&digest_inputs(&[&p.to_text()]), params))
}

/// Structured-vs-Sylvester agreement campaign (used by the acceptance
/// gate alongside the named suites).
pub fn run_sylvester_suite(cfg: &CampaignConfig) -> Result<Vec<Certificate>, GlError> {
    run_trials(cfg, sylvester_agreement_trial)
}

fn sylvester_agreement_trial(rng: &mut ChaCha8Rng) -> Result<Certificate, GlError> {
    let a = rand_poly(rng, 1, 6, 9);
    let b = rand_poly(rng, 1, 6, 9);
    let direct = sylvester_resultant(&a, &b)?;
    let q = rand_poly(rng, 0, 2, 4);
    let t = rng.gen_range(1..=2usize);
    let s_max = ((a.deg() + b.deg()) / t).min(3);
    let pts = if s_max >= 1 {
        let s = rng.gen_range(1..=s_max);
        rand_points(rng, s)
    } else {
        Vec::new()
    };
    let via = resultant_via_structure(&a, &b, &q, &pts, t)?;
    let v = Verdict::exact("sylvester_agreement", via.clone() - &direct, BigRational::zero());
    // equality, not just <=: check the reverse inequality too
    let v2 = Verdict::exact("sylvester_agreement_rev", direct.clone() - &via, BigRational::zero());
    let v = Verdict::all("sylvester_agreement_exact", &[v, v2]);
    let params = serde_json::json!({
        "a": a.to_text(), "b": b.to_text(), "res": direct.to_string(),
    });
    Ok(v.certificate(&digest_inputs(&[&a.to_text(), &b.to_text()]), params))
}

/// Render a report as JSON lines, one certificate per line.
pub fn report_to_jsonl(certs: &[Certificate]) -> Result<String, GlError> {
    let mut out = String::new();
    for c in certs {
        out.push_str(&serde_json::to_string(c)?);
        out.push('\n');
    }
    Ok(out)
}

/// Aggregate counts for `--summary`.
pub fn summarize(certs: &[Certificate]) -> serde_json::Value {
    use crate::verdict::Outcome;
    let count = |o: Outcome| certs.iter().filter(|c| c.verdict == o).count();
    serde_json::json!({
        "trials": certs.len(),
        "holds": count(Outcome::Holds),
        "fails": count(Outcome::Fails),
        "undecided": count(Outcome::Undecided),
    })
}
