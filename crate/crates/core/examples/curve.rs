//! Lower and upper sum-rate curves of the symmetric 2-2-2 and 3-3-3 families.

use relaynet::multi_hop::{curve_222, curve_333};
use relaynet::Rational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("p,family,lower,upper");
    for i in 0..=10 {
        let p = Rational::new(i, 10);
        for (name, c) in [("2-2-2", curve_222(&p)?), ("3-3-3", curve_333(&p)?)] {
            println!("{},{name},{:.6},{:.6}", c.p, c.lower.to_f64(), c.upper.to_f64());
        }
    }
    Ok(())
}
