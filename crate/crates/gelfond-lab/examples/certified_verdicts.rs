//! Certified inequality checking: interval enclosures are refined until
//! the claim is decided or the precision cap is reached, and every
//! decision is packaged as a re-checkable certificate.

use gelfond_lab::interval::RealInterval;
use gelfond_lab::poly::{rat, ratio};
use gelfond_lab::verdict::{digest_inputs, Verdict};

fn main() {
    // e^2 < 8 ?  (true: e^2 = 7.389...)
    let v = Verdict::decide_default("exp(2) <= 8", |bits| {
        let lhs = RealInterval::point(rat(2)).exp(bits);
        (lhs, RealInterval::point(rat(8)))
    });
    println!("exp(2) <= 8      : {:?}", v.outcome);

    // sqrt(2) > 1.41 ?  stated as 141/100 <= sqrt(2)
    let v2 = Verdict::decide_default("1.41 <= sqrt(2)", |bits| {
        let rhs = RealInterval::point(rat(2)).sqrt(bits).expect("nonnegative");
        (RealInterval::point(ratio(141, 100)), rhs)
    });
    println!("1.41 <= sqrt(2)  : {:?}", v2.outcome);

    // exact rational claims never need refinement
    let v3 = Verdict::exact("1/3 <= 2/5", ratio(1, 3), ratio(2, 5));
    println!("1/3 <= 2/5       : {:?}", v3.outcome);

    // a certificate records the claim, enclosures, and precision used
    let cert = v.certificate(&digest_inputs(&["exp", "2", "8"]), serde_json::json!({}));
    println!("\ncertificate:\n{}", serde_json::to_string_pretty(&cert).unwrap());
}
