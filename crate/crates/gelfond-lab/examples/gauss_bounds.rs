//! Height bounds for products of polynomials: for P = P_1 ... P_k,
//! H(P_1)...H(P_k) <= e^{2 deg P} H(P), checked with certified interval
//! arithmetic on random-looking concrete factors.

use gelfond_lab::poly::{check_gauss_bounds, RatPoly};

fn main() {
    let factors = vec![
        RatPoly::from_ints(&[-1, 3, 2]),
        RatPoly::from_ints(&[5, -2]),
        RatPoly::from_ints(&[1, 1, 1, 1]),
    ];
    let product = factors.iter().fold(RatPoly::from_ints(&[1]), |a, f| a.mul(f));
    println!("product: {}", product.to_text());
    println!("H(product) = {}", product.height().unwrap());
    for f in &factors {
        println!("  factor {:<12}  H = {}", f.to_text(), f.height().unwrap());
    }
    let v = check_gauss_bounds(&factors).unwrap();
    println!("\nGauss height bound: {:?} at {} bits", v.outcome, {
        let c = v.certificate("", serde_json::json!({}));
        c.precision_bits
    });
}
