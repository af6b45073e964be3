//! How heights move under affine substitution T -> aT + b: for deg P <= n,
//! H(P(aT+b)) <= (4 H(a) H(b))^n H(P), with equality of degrees when a != 0.

use gelfond_lab::poly::{ratio, RatPoly};
use gelfond_lab::transforms::{check_height_transfer, AffineMap};

fn main() {
    let p = RatPoly::from_ints(&[3, 0, -2, 1]);
    let map = AffineMap::new(ratio(3, 2), ratio(-1, 2)).unwrap();
    let q = map.apply(&p);
    println!("P           = {}", p.to_text());
    println!("P(3/2 T - 1/2) = {}", q.to_text());
    println!("H(P) = {}, H(Q) = {}", p.height().unwrap(), q.height().unwrap());

    let v = check_height_transfer(&map, &p, p.deg()).unwrap();
    println!("height transfer bound: {:?}", v.outcome);

    // composition and inversion round-trip
    let inv = map.invert();
    let round = inv.apply(&q);
    println!("inverse map restores P: {}", round == p);
}
