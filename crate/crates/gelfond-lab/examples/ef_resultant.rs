//! The bivariate resultant construction R(U) = Res_T(P(T), products over
//! E and F), eliminating T to transfer smallness of P at scaled points
//! into smallness of a one-variable integer polynomial. P = T^2 + 1
//! yields R = U^4 + 4 U^2 for E = {0, 1}, F = {1, -1}.

use gelfond_lab::poly::{rat, EvalPointSet, RatPoly};
use gelfond_lab::resultants::build_ef_resultant;

fn main() {
    let p = RatPoly::from_ints(&[1, 0, 1]);
    let e = EvalPointSet::from_ints(&[0, 1]).unwrap();
    let f = EvalPointSet::from_ints(&[1, -1]).unwrap();
    let (res, verdicts) = build_ef_resultant(&p, &e, &f, 2, 2).unwrap();
    println!("P    = {}", p.to_text());
    println!("R(U) = {}", res.r.to_text());
    println!("deg bound:    {:?}", verdicts[0].outcome);
    println!("height bound: {:?}", verdicts[1].outcome);
    println!("value bound:  {:?}", verdicts[2].outcome);
    assert_eq!(res.r, RatPoly::from_ints(&[0, 0, 4, 0, 1]));
    let _ = rat(0);
}
