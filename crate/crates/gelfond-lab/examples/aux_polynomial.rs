//! Constructing an auxiliary polynomial with prescribed small values:
//! integer coefficients, degree <= n, height <= exp(n^beta), and
//! |P^{[j]}(xi)| <= exp(-n^nu) for j below the derivative cap — found by
//! a box-principle search and re-verified independently.

use gelfond_lab::auxpoly::{construct_aux_poly, verify_smallvalue, SmallValueSpec};
use gelfond_lab::interval::ComplexEnclosure;
use gelfond_lab::poly::{rat, ratio};

fn main() {
    let mut xi = ComplexEnclosure::from_rational(ratio(1, 3));
    xi.bits = 256;
    let spec = SmallValueSpec::new(
        12,
        rat(2),            // beta: height budget exp(n^2)
        vec![ratio(1, 5)], // sigma: index cap n^{1/5} per point
        ratio(1, 10),      // tau: derivative cap n^{1/10}
        ratio(6, 5),       // nu: value budget exp(-n^{6/5})
        vec![xi],
    )
    .unwrap();

    let cert = construct_aux_poly(&spec).unwrap();
    println!("P = {}", cert.poly.to_text());
    println!("deg P = {}, H(P) = {}", cert.degree, cert.height);
    println!("construction verdict: {:?}", cert.verdict.outcome);

    // independent re-verification from the polynomial alone
    let again = verify_smallvalue(&cert.poly, &spec).unwrap();
    println!("re-verified: {:?}", again.verdict.outcome);
}
