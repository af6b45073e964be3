//! Lattice-set partitions: splitting an orbit F of a set E into
//! translates, with self-validating certificates, plus the counting
//! bounds on pullback intersections.

use gelfond_lab::combinatorics::{
    check_appendix_b, orbit, partition_prop61, partition_prop62, partition_threshold,
    pullback_intersection, LatticeSet,
};

fn main() {
    let s = 8;
    let e = LatticeSet::new(s, vec![vec![0; 8], {
        let mut p = vec![0i64; 8];
        p[0] = 1;
        p
    }])
    .unwrap();
    let f = orbit(&e);
    println!("|E| = {}, |orbit(E)| = {}", e.len(), f.len());

    let (cert61, v61) = partition_prop61(&e, &f).unwrap();
    println!("partition (basic): {:?}, {} anchors", v61.outcome, cert61.anchors.len());
    println!("re-validated: {:?}", cert61.validate(&e, &f).outcome);

    // the depth-l variant needs |F| <= N(s, l); |orbit(E)| = 16 here,
    // so embed the same set in dimension 12 where N(12, 1) = 55/2
    let s2 = 12;
    let e2 = LatticeSet::new(s2, e.iter().map(|p| {
        let mut q = p.clone();
        q.resize(s2, 0);
        q
    }))
    .unwrap();
    let f2 = orbit(&e2);
    let ell = 1;
    println!("threshold N({s2},{ell}) = {}", partition_threshold(s2, ell));
    let (cert62, v62) = partition_prop62(&e2, &f2, ell).unwrap();
    println!("partition (depth {ell}): {:?}, {} parts", v62.outcome, cert62.e_parts.len());

    // Appendix B: |pullback(F)| against |F| - |F|^{1-1/s} and (1/s)|F|log|F|
    let bx = LatticeSet::new(2, (0..3).flat_map(|x| (0..3).map(move |y| vec![x, y]))).unwrap();
    let pulled = pullback_intersection(&bx, false);
    println!("\nbox F (|F| = {}): pullback size {}", bx.len(), pulled.len());
    let (v1, v2) = check_appendix_b(&bx).unwrap();
    println!("power bound: {:?}, log bound: {:?}", v1.outcome, v2.outcome);
}
