//! Gcd of scaled translates: Q(T) = gcd over a in A of P(aT), with the
//! degree and height bounds deg Q <= 2(l+1)/(s-l) deg P and
//! log H(Q) <= 2(l+1)/(s-l) (log H(P) + c_1 deg P).

use gelfond_lab::factorgcd::{factor_q, gcd_translates, verify_thm_g, ScaleSet};
use gelfond_lab::poly::RatPoly;

fn main() {
    // P vanishes at 1/a for every a in A, so each translate P(aT) shares
    // the factor (2T - 1) coming from its own scale.
    let a = ScaleSet::from_ints(&[2, 3, 5]).unwrap();
    let mut p = RatPoly::from_ints(&[1]);
    for v in a.elements() {
        let lin = RatPoly::from_coeffs(vec![-v.clone(), gelfond_lab::poly::rat(2)]);
        p = p.mul(&lin);
    }
    println!("P = {}", p.to_text());

    let q = gcd_translates(&p, &a).unwrap();
    println!("gcd of translates Q = {}", q.to_text());

    let fac = factor_q(&p).unwrap();
    println!("P has {} non-associate irreducible factors", fac.distinct_factor_count());
    for (f, m) in &fac.factors {
        println!("  ({})^{}", f.to_text(), m);
    }

    // the theorem bounds apply when the number of non-associate
    // irreducible factors is at most N(s, l); with s = 3, l = 0 that
    // allows one factor, e.g. a square of an irreducible
    let p1 = RatPoly::from_ints(&[-5, 2]).pow(2);
    println!("\nP1 = {}", p1.to_text());
    let (deg_v, height_v) = verify_thm_g(&p1, &a, 0).unwrap();
    println!("degree bound: {:?}, height bound: {:?}", deg_v.outcome, height_v.outcome);
}
