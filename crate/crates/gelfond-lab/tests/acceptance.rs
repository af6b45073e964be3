//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line. Run with `cargo test --test acceptance -- --nocapture`
//! to see every line; time budgets are asserted in-code.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gelfond_lab::auxpoly::{construct_aux_poly, SmallValueSpec};
use gelfond_lab::campaign::{
    report_to_jsonl, run_suite, run_sylvester_suite, CampaignConfig, SUITES,
};
use gelfond_lab::combinatorics::{
    check_appendix_b, orbit, partition_prop61, partition_prop62, partition_threshold,
    zarankiewicz_oracle, LatticeSet,
};
use gelfond_lab::factorgcd::{gcd_translates, ScaleSet};
use gelfond_lab::interval::{ComplexEnclosure, RealInterval};
use gelfond_lab::io;
use gelfond_lab::pipelines::{run_prop_q, run_prop_r, run_prop_rbis, run_prop_rter};
use gelfond_lab::poly::{rat, ratio, EvalPointSet, RatPoly};
use gelfond_lab::transforms::AffineMap;
use gelfond_lab::verdict::{Outcome, Verdict};

fn criterion<F: FnOnce() + std::panic::UnwindSafe>(id: u32, label: &str, body: F) {
    let start = Instant::now();
    let result = std::panic::catch_unwind(body);
    let elapsed = start.elapsed();
    match result {
        Ok(()) => println!("criterion {id} ({label}): PASS in {elapsed:.2?}"),
        Err(e) => {
            println!("criterion {id} ({label}): FAIL in {elapsed:.2?}");
            std::panic::resume_unwind(e);
        }
    }
}

fn assert_all_hold(certs: &[gelfond_lab::verdict::Certificate], max_bits: u32) {
    for c in certs {
        assert_eq!(c.verdict, Outcome::Holds, "claim {}: {:?}", c.claim, c.verdict);
        assert!(c.precision_bits <= max_bits, "claim {} needed {} bits", c.claim, c.precision_bits);
    }
}

fn cfg(seed: u64, trials: usize) -> CampaignConfig {
    CampaignConfig { seed, trials, workers: 1 }
}

#[test]
fn criterion_01_determinant_identity() {
    criterion(1, "determinant identity, 100 exact instances", || {
        let t0 = Instant::now();
        let certs = run_suite("detid", &cfg(1, 100)).unwrap();
        assert_eq!(certs.len(), 100);
        for c in &certs {
            assert_eq!(c.verdict, Outcome::Holds);
            assert_eq!(c.precision_bits, 0, "identity must be exact");
            assert_eq!(c.lhs.lo_exact, c.lhs.hi_exact);
        }
        assert!(t0.elapsed() < Duration::from_secs(10), "took {:?}", t0.elapsed());
    });
}

#[test]
fn criterion_02_sylvester_agreement() {
    criterion(2, "structured vs Sylvester resultant, 200 pairs", || {
        let t0 = Instant::now();
        let certs = run_sylvester_suite(&cfg(2, 200)).unwrap();
        assert_eq!(certs.len(), 200);
        for c in &certs {
            assert_eq!(c.verdict, Outcome::Holds);
            assert_eq!(c.precision_bits, 0, "agreement must be exact");
        }
        assert!(t0.elapsed() < Duration::from_secs(10), "took {:?}", t0.elapsed());
    });
}

#[test]
fn criterion_03_value_bound_verifiers() {
    criterion(3, "propFG and corPP, 100 instances each", || {
        let t0 = Instant::now();
        let fg = run_suite("propfg", &cfg(3, 100)).unwrap();
        let pp = run_suite("corpp", &cfg(4, 100)).unwrap();
        assert_all_hold(&fg, 1024);
        assert_all_hold(&pp, 1024);
        assert!(t0.elapsed() < Duration::from_secs(60), "took {:?}", t0.elapsed());
    });
}

#[test]
fn criterion_04_gcd_of_translates() {
    // l = 1 with |A| <= 4 leaves the factor-count threshold below one, so
    // those trials use the five-prime set {2,3,5,7,11}; l = 0 keeps
    // A inside {2,3,5,7}.
    criterion(4, "gcd-of-translates theorem, 100 instances", || {
        let t0 = Instant::now();
        let certs = run_suite("thmG", &cfg(5, 100)).unwrap();
        assert_all_hold(&certs, 1024);
        // re-check the degree bound deg Q <= 2(l+1)/(s-l) deg P directly
        for c in &certs {
            let p = io::parse_poly(c.params["p"].as_str().unwrap()).unwrap();
            let ell = c.params["ell"].as_u64().unwrap() as usize;
            let primes: Vec<i64> = c.params["A"]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_i64().unwrap())
                .collect();
            let a = ScaleSet::from_ints(&primes).unwrap();
            let q = gcd_translates(&p, &a).unwrap();
            let lhs = BigRational::from_integer(BigInt::from(q.deg()));
            let rhs = ratio(2 * (ell as i64 + 1), (a.len() - ell) as i64)
                * BigRational::from_integer(BigInt::from(p.deg()));
            assert!(lhs <= rhs, "deg {} > bound {} for {}", q.deg(), rhs, p.to_text());
        }
        assert!(t0.elapsed() < Duration::from_secs(60), "took {:?}", t0.elapsed());
    });
}

/// All sum-zero vectors of l1-norm <= 2 in Z^s: zero and e_i - e_j.
fn c1_pattern(s: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0i64; s]];
    for i in 0..s {
        for j in 0..s {
            if i != j {
                let mut v = vec![0i64; s];
                v[i] = 1;
                v[j] = -1;
                out.push(v);
            }
        }
    }
    out
}

#[test]
fn criterion_05_partitions() {
    criterion(5, "partition propositions, exhaustive + 500 random", || {
        let t0 = Instant::now();
        // exhaustive E within the C_1 pattern for s = 6, |E| <= 3; run
        // every instance whose hypotheses hold with F = orbit(E)
        let s = 6;
        let pattern = c1_pattern(s);
        let mut subsets: Vec<Vec<usize>> = Vec::new();
        for i in 0..pattern.len() {
            subsets.push(vec![i]);
            for j in (i + 1)..pattern.len() {
                subsets.push(vec![i, j]);
                for k in (j + 1)..pattern.len() {
                    subsets.push(vec![i, j, k]);
                }
            }
        }
        let mut ran61 = 0usize;
        let mut ran62 = 0usize;
        for idx in &subsets {
            let e = LatticeSet::new(s, idx.iter().map(|&i| pattern[i].clone())).unwrap();
            let f = orbit(&e);
            if 4 * f.len() <= s * s {
                let (cert, v) = partition_prop61(&e, &f).unwrap();
                assert_eq!(v.outcome, Outcome::Holds);
                assert_eq!(cert.validate(&e, &f).outcome, Outcome::Holds);
                // |F| >= (s - l) / (2(l+1)) |E| with l = 0
                assert!(2 * f.len() >= s * e.len());
                ran61 += 1;
            }
            for ell in 0..=2usize {
                let cap = partition_threshold(s, ell);
                if BigRational::from_integer(BigInt::from(f.len())) > cap {
                    continue;
                }
                let (cert, v) = partition_prop62(&e, &f, ell).unwrap();
                assert_eq!(v.outcome, Outcome::Holds);
                assert_eq!(cert.validate(&e, &f).outcome, Outcome::Holds);
                assert!(2 * (ell + 1) * f.len() >= (s - ell) * e.len());
                ran62 += 1;
            }
        }
        assert!(ran61 > 0 && ran62 > 0, "no admissible exhaustive instances");
        // 500 random instances across both propositions (s <= 12, l <= 2)
        let p61 = run_suite("partition61", &cfg(6, 250)).unwrap();
        let p62 = run_suite("partition62", &cfg(7, 250)).unwrap();
        assert_all_hold(&p61, 1024);
        assert_all_hold(&p62, 1024);
        assert!(t0.elapsed() < Duration::from_secs(30), "took {:?}", t0.elapsed());
    });
}

#[test]
fn criterion_06_appendix_b() {
    // exhausting all subsets of the 25-point grid at s = 2 is out of
    // desk-scale reach (2^25 sets); s = 2 is covered exhaustively over
    // all sub-boxes plus random subsets, s = 1 over all subsets.
    criterion(6, "appendix B pullback bounds", || {
        let t0 = Instant::now();
        // s = 1: every nonempty subset of {0..4}
        for mask in 1u32..32 {
            let pts: Vec<Vec<i64>> =
                (0..5).filter(|i| mask >> i & 1 == 1).map(|i| vec![i as i64]).collect();
            let f = LatticeSet::new(1, pts).unwrap();
            let (v1, v2) = check_appendix_b(&f).unwrap();
            assert_eq!(v1.outcome, Outcome::Holds, "power bound, mask {mask}");
            assert_eq!(v2.outcome, Outcome::Holds, "log bound, mask {mask}");
        }
        // s = 2: every sub-box of {0..4}^2
        for a1 in 0..5i64 {
            for b1 in a1..5 {
                for a2 in 0..5i64 {
                    for b2 in a2..5 {
                        let pts = (a1..=b1).flat_map(|x| (a2..=b2).map(move |y| vec![x, y]));
                        let f = LatticeSet::new(2, pts).unwrap();
                        let (v1, v2) = check_appendix_b(&f).unwrap();
                        assert_eq!(v1.outcome, Outcome::Holds);
                        assert_eq!(v2.outcome, Outcome::Holds);
                    }
                }
            }
        }
        // s = 2: 500 random subsets of the grid
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..500 {
            let k = rng.gen_range(1..=10usize);
            let pts: Vec<Vec<i64>> =
                (0..k).map(|_| vec![rng.gen_range(0..5i64), rng.gen_range(0..5i64)]).collect();
            let f = LatticeSet::new(2, pts).unwrap();
            let (v1, v2) = check_appendix_b(&f).unwrap();
            assert_eq!(v1.outcome, Outcome::Holds);
            assert_eq!(v2.outcome, Outcome::Holds);
        }
        // s = 3: 500 random boxes
        for _ in 0..500 {
            let dims: Vec<(i64, i64)> = (0..3)
                .map(|_| {
                    let a = rng.gen_range(0..5i64);
                    (a, rng.gen_range(a..5i64.max(a + 1)).min(4))
                })
                .collect();
            let mut pts = Vec::new();
            for x in dims[0].0..=dims[0].1 {
                for y in dims[1].0..=dims[1].1 {
                    for z in dims[2].0..=dims[2].1 {
                        pts.push(vec![x, y, z]);
                    }
                }
            }
            let f = LatticeSet::new(3, pts).unwrap();
            let (v1, v2) = check_appendix_b(&f).unwrap();
            assert_eq!(v1.outcome, Outcome::Holds);
            assert_eq!(v2.outcome, Outcome::Holds);
        }
        assert!(t0.elapsed() < Duration::from_secs(30), "took {:?}", t0.elapsed());
    });
}

#[test]
fn criterion_07_zarankiewicz() {
    criterion(7, "Zarankiewicz oracle vs bound", || {
        let t0 = Instant::now();
        assert_eq!(zarankiewicz_oracle(2, 2, 2, 2).unwrap(), 4);
        for m in 2..=4usize {
            for n in 2..=4usize {
                for n1 in 2..=n {
                    let k = zarankiewicz_oracle(2, n1, m, n).unwrap();
                    let bound = 1 + n + (n1 - 1) * m * (m - 1) / 2;
                    assert!(k <= bound, "k(2,{n1};{m},{n}) = {k} > {bound}");
                }
            }
        }
        assert!(t0.elapsed() < Duration::from_secs(120), "took {:?}", t0.elapsed());
    });
}

#[test]
fn criterion_08_ef_resultant() {
    criterion(8, "E+F resultant construction", || {
        let t0 = Instant::now();
        // fixed reproduction: P = T^2 + 1 gives R = U^4 + 4U^2
        let p = RatPoly::from_ints(&[1, 0, 1]);
        let e = EvalPointSet::from_ints(&[0, 1]).unwrap();
        let f = EvalPointSet::from_ints(&[1, -1]).unwrap();
        let (res, verdicts) = gelfond_lab::resultants::build_ef_resultant(&p, &e, &f, 2, 2).unwrap();
        assert_eq!(res.r, RatPoly::from_ints(&[0, 0, 4, 0, 1]));
        for v in &verdicts {
            assert_eq!(v.outcome, Outcome::Holds);
        }
        // random instances with n <= 8, |E|, |F| <= 4
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pool: Vec<BigRational> =
            vec![rat(0), rat(1), rat(-1), rat(2), rat(-2), ratio(1, 2), ratio(-1, 2), ratio(3, 2)];
        let mut done = 0usize;
        while done < 40 {
            let n = rng.gen_range(1..=8usize);
            let d = rng.gen_range(1..=n);
            let coeffs: Vec<i64> = (0..=d)
                .map(|i| if i == d { 1 + rng.gen_range(0..3i64) } else { rng.gen_range(-3..=3i64) })
                .collect();
            let p = RatPoly::from_ints(&coeffs);
            // E must contain 0; draw the rest from the pool without repeats
            let esz = rng.gen_range(1..=4usize);
            let mut epts = vec![rat(0)];
            let mut order: Vec<usize> = (1..pool.len()).collect();
            for i in (1..order.len()).rev() {
                let j = rng.gen_range(0..=i);
                order.swap(i, j);
            }
            epts.extend(order.iter().take(esz - 1).map(|&i| pool[i].clone()));
            let e = EvalPointSet::from_rationals(&epts).unwrap();
            let ssz = rng.gen_range(1..=4usize.min(2 * n));
            for i in (1..order.len()).rev() {
                let j = rng.gen_range(0..=i);
                order.swap(i, j);
            }
            let fpts: Vec<BigRational> = order.iter().take(ssz).map(|&i| pool[i].clone()).collect();
            let f = EvalPointSet::from_rationals(&fpts).unwrap();
            let (res, verdicts) =
                gelfond_lab::resultants::build_ef_resultant(&p, &e, &f, n, ssz).unwrap();
            assert!(!res.r.is_zero(), "R must be nonzero for {}", p.to_text());
            assert!(res.r.deg() <= n * n);
            assert_eq!(verdicts[1].outcome, Outcome::Holds);
            assert_eq!(verdicts[2].outcome, Outcome::Holds);
            done += 1;
        }
        assert!(t0.elapsed() < Duration::from_secs(60), "took {:?}", t0.elapsed());
    });
}

#[test]
fn criterion_09_aux_polynomial_sweep() {
    criterion(9, "auxiliary polynomial sweep n = 8..24", || {
        let t0 = Instant::now();
        // xi = sqrt(2)/2 enclosed to 512 bits
        let root = RealInterval::point(rat(2)).sqrt(512).unwrap();
        let half = ratio(1, 2);
        let re = RealInterval { lo: root.lo * &half, hi: root.hi * &half };
        let xi = ComplexEnclosure::new(re, RealInterval::zero(), 512);
        let mut holds = 0usize;
        let mut total = 0usize;
        let mut feasible: Vec<usize> = Vec::new();
        for n in 8..=24usize {
            let spec = SmallValueSpec::new(
                n,
                rat(2),
                vec![ratio(1, 5)],
                ratio(1, 10),
                ratio(6, 5),
                vec![xi.clone()],
            )
            .unwrap();
            total += 1;
            match construct_aux_poly(&spec) {
                Ok(cert) if cert.verdict.outcome == Outcome::Holds => {
                    holds += 1;
                    feasible.push(n);
                }
                _ => {}
            }
        }
        println!("  aux sweep: {holds}/{total} HOLDS; feasible n: {feasible:?}");
        assert!(5 * holds >= 4 * total, "only {holds}/{total} held");
        assert!(t0.elapsed() < Duration::from_secs(300), "took {:?}", t0.elapsed());
    });
}

/// Re-check a final small-value claim at doubled precision: |S(xi)|
/// evaluated freshly must stay below the rhs recorded in the verdict.
fn reverify_small_value(s: &RatPoly, xi: &ComplexEnclosure, v: &Verdict) {
    assert_eq!(v.outcome, Outcome::Holds);
    let bits = (v.precision_bits.max(64)) * 2;
    let value = s.eval_enclosure(xi, bits).abs(bits);
    let cont = s.content().unwrap();
    assert!(cont.is_positive());
    let scaled = RealInterval {
        lo: value.lo / &cont,
        hi: value.hi / &cont,
    };
    assert!(
        scaled.hi <= v.rhs.lo || scaled.hi.is_zero(),
        "re-verification at {bits} bits: |S(xi)|/cont = [{}, {}] vs rhs {}",
        scaled.lo,
        scaled.hi,
        v.rhs.lo
    );
}

#[test]
fn criterion_10_pipelines() {
    criterion(10, "pipeline traces with doubled-precision re-verification", || {
        let t0 = Instant::now();

        // propQ: two scalings sharing the factor (2T - 1)^2
        let p = {
            let f1 = RatPoly::from_ints(&[-1, 1]);
            let f2 = RatPoly::from_ints(&[-1, 2]);
            f1.mul(&f2).pow(2)
        };
        let maps = vec![AffineMap::identity(), AffineMap::from_ints(2, 0).unwrap()];
        let e = EvalPointSet::from_rationals(&[ratio(1, 2)]).unwrap();
        let (q, bound, v) = run_prop_q(&p, &maps, &e, 1, 4).unwrap();
        assert_eq!(v.outcome, Outcome::Holds);
        assert_eq!(q, RatPoly::from_ints(&[1, -4, 4]));
        // re-verify: product of |Q(xi)|/cont over maps at doubled precision
        let bits = (v.precision_bits.max(64)) * 2;
        let cont = q.content().unwrap();
        let mut prod = RealInterval::from_int(1);
        for m in &maps {
            let z = m.apply_enclosure(&ComplexEnclosure::from_rational(ratio(1, 2)));
            let val = q.eval_enclosure(&z, bits).abs(bits);
            prod = &prod * &RealInterval { lo: val.lo / &cont, hi: val.hi / &cont };
        }
        assert!(prod.hi <= bound.hi || prod.hi.is_zero());

        // propR: P = (2T-1)^8 small at 1/2, X = 3^8, kappa = 28
        let p = RatPoly::from_ints(&[-1, 2]).pow(8);
        let maps = vec![AffineMap::identity()];
        let (s, xi, trace) = run_prop_r(&p, &maps, &e, 1, 1, 8, &rat(6561), &rat(28)).unwrap();
        assert!(trace.holds());
        reverify_small_value(&s, &xi, &trace.stages.last().unwrap().verdict);

        // propRbis: translates over the first nine primes, n = 18
        let primes = [2i64, 3, 5, 7, 11, 13, 17, 19, 23];
        let a = ScaleSet::from_ints(&primes).unwrap();
        let mut pb = RatPoly::from_ints(&[1]);
        for v in a.elements() {
            let lin = RatPoly::from_coeffs(vec![-v.clone(), rat(2)]);
            pb = pb.mul(&lin).mul(&lin);
        }
        let x = {
            let base = rat(10) * a.c_a();
            let mut acc = rat(1);
            for _ in 0..180 {
                acc *= &base;
            }
            acc
        };
        let (s, trace) =
            run_prop_rbis(&pb, &a, &e, 1, 0, 18, &x, &rat(6), &ratio(1, 10)).unwrap();
        assert!(trace.holds());
        reverify_small_value(
            &s,
            &ComplexEnclosure::from_rational(ratio(1, 2)),
            &trace.stages.last().unwrap().verdict,
        );

        // propRter: P = (T-1)^2 (2T-3)^2 vanishing at scaled points of 1/2
        let pt = RatPoly::from_ints(&[-1, 1]).pow(2).mul(&RatPoly::from_ints(&[-3, 2]).pow(2));
        let at = ScaleSet::from_ints(&[2, 3]).unwrap();
        let xt = {
            let mut acc = rat(1);
            for _ in 0..90 {
                acc *= rat(2);
            }
            acc
        };
        let (s, xi, trace) =
            run_prop_rter(&pt, &at, &e, 4, &xt, &rat(6), &ratio(1, 10)).unwrap();
        assert!(trace.holds());
        reverify_small_value(&s, &xi, &trace.stages.last().unwrap().verdict);

        assert!(t0.elapsed() < Duration::from_secs(300), "took {:?}", t0.elapsed());
    });
}

#[test]
fn criterion_11_determinism() {
    criterion(11, "byte-identical reports per seed", || {
        for suite in SUITES {
            let a = report_to_jsonl(&run_suite(suite, &cfg(11, 3)).unwrap()).unwrap();
            let b = report_to_jsonl(&run_suite(suite, &cfg(11, 3)).unwrap()).unwrap();
            assert_eq!(a, b, "suite {suite} not deterministic");
            let par = CampaignConfig { seed: 11, trials: 3, workers: 4 };
            let c = report_to_jsonl(&run_suite(suite, &par).unwrap()).unwrap();
            assert_eq!(a, c, "suite {suite} depends on worker count");
        }
    });
}
