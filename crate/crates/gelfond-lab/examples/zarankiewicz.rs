//! Exact Zarankiewicz numbers by exhaustion over 0/1 matrices, compared
//! with the bound k(2, n1; m, n) <= 1 + n + (n1 - 1) m (m - 1) / 2 that
//! falls out of the continuous two-row estimate.

use gelfond_lab::combinatorics::zarankiewicz_oracle;

fn main() {
    println!("{:>10} {:>6} {:>6}", "(m,n)", "k", "bound");
    for m in 2..=4usize {
        for n in 2..=4usize {
            let k = zarankiewicz_oracle(2, 2, m, n).unwrap();
            let bound = 1 + n + m * (m - 1) / 2;
            assert!(k <= bound);
            println!("{:>10} {:>6} {:>6}", format!("({m},{n})"), k, bound);
        }
    }
}
