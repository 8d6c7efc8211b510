//! Pairing rate of a single-hop interference network and the slot plan at a
//! finite block length.

use relaynet::multi_hop::separate_instance_single_hop_rate;
use relaynet::single_hop::{achievable_symmetric_rate, build_plan, c1};
use relaynet::{ChannelLaw, Rational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let half = Rational::new(1, 2);
    let law = ChannelLaw::bernoulli_uniform(2, 2, half.clone())?;
    println!("c1 = {}, per-user rate = {}", c1(&law)?, achievable_symmetric_rate(&law)?);
    println!("separate instances, sum = {}", separate_instance_single_hop_rate(&law)?);

    // Diagonal entries at 1/2, cross links arbitrary: still 1/2 per user.
    let skewed = ChannelLaw::bernoulli_matrix(
        3,
        3,
        vec![
            half.clone(), Rational::new(1, 7), Rational::new(5, 6),
            Rational::new(2, 3), half.clone(), Rational::new(1, 9),
            Rational::zero(), Rational::new(3, 4), half,
        ],
    )?;
    println!("skewed 3-user per-user rate = {}", achievable_symmetric_rate(&skewed)?);

    let plan = build_plan(&law, 10_000, &Rational::new(1, 10))?;
    println!("n = {}, bits per source = {}, shortfall = {}", plan.n, plan.bits_per_source(), plan.shortfall());
    for a in plan.allocation.iter().filter(|a| a.slots > 0) {
        println!("  {} paired with {}: {} slots", a.h, a.partner, a.slots);
    }
    Ok(())
}
