//! Block Markov pipeline on a 2-2-2 network and a three-hop 3-3-3-3 network.

use relaynet::multi_hop::build_multihop_plan;
use relaynet::simulator::simulate_multi_hop;
use relaynet::{LayeredNetwork, Rational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let runs = [(vec![2, 2, 2], 4000, 4, Rational::new(3, 20), 50), (vec![3, 3, 3, 3], 50_000, 2, Rational::new(1, 2), 4)];
    for (layers, n_b, blocks, margin, trials) in runs {
        let net = LayeredNetwork::uniform(&layers, Rational::new(1, 2))?;
        let plan = build_multihop_plan(&net, n_b, blocks, &margin)?;
        let rep = simulate_multi_hop(&net, &plan, trials, 7)?;
        println!(
            "{layers:?}: {}/{} blocks clean, decode errors {}, causality {}, identity {}, rate {:.4} (code {:.4})",
            rep.successful_trials,
            rep.trials,
            rep.conditional_decode_errors,
            rep.causality_violations,
            rep.identity_violations,
            rep.realized_rate_bits_per_use,
            rep.code_sum_rate.to_f64()
        );
    }
    Ok(())
}
