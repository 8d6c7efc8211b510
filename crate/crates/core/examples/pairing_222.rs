//! Deterministic pairing for 2-2-2 networks: symmetric and Z-channel laws.

use relaynet::multi_hop::{separate_instance_two_hop_rate, theorem3_rate_222};
use relaynet::{ChannelLaw, Rational};

fn z(pa: Rational, pb: Rational, pc: Rational) -> (ChannelLaw, ChannelLaw) {
    let first = ChannelLaw::bernoulli_matrix(2, 2, vec![pa.clone(), pb.clone(), Rational::zero(), pc.clone()]).unwrap();
    let second = ChannelLaw::bernoulli_matrix(2, 2, vec![pc, pb, Rational::zero(), pa]).unwrap();
    (first, second)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let uni = ChannelLaw::bernoulli_uniform(2, 2, Rational::new(1, 2))?;
    let rep = theorem3_rate_222(&uni, &uni)?;
    println!("uniform: {:?}, rate {}, bound {}", rep.case, rep.rate, rep.cut_bound);
    for p in rep.pairs.iter().filter(|p| p.weight.is_positive()) {
        println!("  {} -> {} gain {} weight {}", p.h1, p.h2, p.gain, p.weight);
    }
    println!("separate instances: {}", separate_instance_two_hop_rate(&uni, &uni)?);

    let (l1, l2) = z(Rational::new(3, 4), Rational::new(1, 2), Rational::new(1, 4));
    let rep = theorem3_rate_222(&l1, &l2)?;
    println!("Z channel: {:?}, rate {}, closed form {:?}", rep.case, rep.rate, rep.closed_form.map(|c| c.to_string()));
    Ok(())
}
