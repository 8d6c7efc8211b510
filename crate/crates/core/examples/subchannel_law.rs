//! Laws of the randomly selected sub-channels against their exact values.

use relaynet::multi_hop::{fullrank_distribution, subchannel_probability};
use relaynet::simulator::estimate_subchannel_law;
use relaynet::{LayeredNetwork, Rational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = LayeredNetwork::uniform(&[3, 2, 2, 3], Rational::new(3, 10))?;
    let est = estimate_subchannel_law(&net, 1, 200_000, 1)?;
    println!("selected sub-channel on hop 1:");
    for (h, c) in &est.selected {
        println!("  {h}: {:.4} vs {:.4}", *c as f64 / est.samples as f64, subchannel_probability(&net, h)?.to_f64());
    }
    println!("full-rank matrix G:");
    for (g, p) in fullrank_distribution(&net)? {
        println!("  {g}: {:.4} vs {:.4}", est.full_rank_frequency(&g).to_f64(), p.to_f64());
    }
    Ok(())
}
