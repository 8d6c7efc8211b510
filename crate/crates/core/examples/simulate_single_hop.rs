//! Monte Carlo run of the single-hop pairing scheme, including an overloaded
//! plan that asks for more than the pairing rate.

use relaynet::simulator::simulate_single_hop;
use relaynet::single_hop::{build_plan, build_plan_with_rate};
use relaynet::{LayeredNetwork, Rational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = LayeredNetwork::uniform(&[2, 2], Rational::new(1, 2))?;
    for n in [400, 2000, 10_000] {
        let plan = build_plan(net.hop(1), n, &Rational::new(1, 10))?;
        let rep = simulate_single_hop(&net, &plan, 200, 1)?;
        println!("n={n}: encoding errors {:.3}, decode errors {}", rep.encoding_error_rate, rep.conditional_decode_errors);
    }
    let plan = build_plan(net.hop(1), 4000, &Rational::new(2, 5))?;
    let rep = simulate_single_hop(&net, &plan, 200, 1)?;
    println!(
        "margin 2/5: rate {:.4} +/- {:.4} (code {})",
        rep.realized_rate_bits_per_use,
        rep.realized_rate_stderr,
        rep.code_sum_rate
    );
    let over = build_plan_with_rate(net.hop(1), 4000, Rational::new(3, 5))?;
    let rep = simulate_single_hop(&net, &over, 200, 1)?;
    println!("overloaded: encoding errors {:.3}", rep.encoding_error_rate);
    rep.write_csv(std::io::stdout().lock())?;
    Ok(())
}
