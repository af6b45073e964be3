//! An end-to-end small-value pipeline: from a polynomial P taking a tiny
//! value at xi, extract (via gcd of derivative translates, linearization,
//! root selection, and powering) a power of an irreducible S with
//! controlled degree and height that is still tiny at xi — every stage
//! certified and recorded in the trace.

use gelfond_lab::pipelines::run_prop_r;
use gelfond_lab::poly::{rat, ratio, EvalPointSet, RatPoly};
use gelfond_lab::transforms::AffineMap;

fn main() {
    // P = (2T - 1)^8 vanishes at xi = 1/2; X = 3^8, kappa = 28
    let p = RatPoly::from_ints(&[-1, 2]).pow(8);
    let maps = vec![AffineMap::identity()];
    let e = EvalPointSet::from_rationals(&[ratio(1, 2)]).unwrap();
    let x = rat(6561);

    let (s, xi, trace) = run_prop_r(&p, &maps, &e, 1, 1, 8, &x, &rat(28)).unwrap();
    println!("input  P = {}", p.to_text());
    println!("output S = {}", s.to_text());
    println!("witness xi re = [{}, {}]", xi.re.lo, xi.re.hi);
    println!("\nstage trace:");
    for st in &trace.stages {
        println!("  {:<28} {:?}", st.stage, st.verdict.outcome);
    }
    println!("\nall stages hold: {}", trace.holds());
}
