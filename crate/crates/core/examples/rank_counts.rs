//! Rank counts of binary matrices by formula, checked against enumeration.

use relaynet::gf2::{count_rank, enumerate_matrices};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (a, b) in [(1, 1), (2, 2), (2, 3), (3, 3), (4, 4)] {
        let mut seen = vec![0u64; a.min(b) + 1];
        for m in enumerate_matrices(a, b)? {
            seen[m.rank()] += 1;
        }
        let formula: Vec<String> = (0..=a.min(b)).map(|r| count_rank(a, b, r).to_string()).collect();
        println!("{a}x{b}: {} (enumerated {seen:?})", formula.join(", "));
    }
    Ok(())
}
