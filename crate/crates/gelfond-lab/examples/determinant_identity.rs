//! The structured determinant identity: evaluating a polynomial family
//! and its divided derivatives at a point set relates det(phi) to
//! Delta^{t^2} * (prod Q(xi))^t * det(psi), up to sign. Also checks that
//! the structured route reproduces the Sylvester resultant.

use gelfond_lab::poly::{rat, ratio, RatPoly};
use gelfond_lab::resultants::{
    build_structured_matrix, check_det_identity, resultant_via_structure, sylvester_resultant,
};

fn main() {
    let q = RatPoly::from_ints(&[1, 1]);
    let points = vec![rat(2), ratio(1, 2)];
    let polys: Vec<RatPoly> = vec![
        RatPoly::from_ints(&[1, 0, 0, 0]),
        RatPoly::from_ints(&[0, 1, 0, 0]),
        RatPoly::from_ints(&[1, 1, 1, 0]),
        RatPoly::from_ints(&[-1, 0, 2, 1]),
    ];
    let m = build_structured_matrix(&q, &points, 2, 4, &polys).unwrap();
    let (v, sign) = check_det_identity(&m);
    println!("det identity: {:?} (sign {sign})", v.outcome);

    let a = RatPoly::from_ints(&[2, 0, 1]);
    let b = RatPoly::from_ints(&[-1, 1]);
    let direct = sylvester_resultant(&a, &b).unwrap();
    let via = resultant_via_structure(&a, &b, &q, &points, 1).unwrap();
    println!("Res({}, {}) = {} (Sylvester) = {} (structured)", a.to_text(), b.to_text(), direct, via);
    assert_eq!(direct, via);
}
