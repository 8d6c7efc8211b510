//! Bottleneck detection, chained pairing rate and sum capacity of layered
//! networks with a common entry probability.

use relaynet::bounds::sum_rate_upper_bound;
use relaynet::multi_hop::{build_multihop_plan, corollary2_sum_capacity, detect_bottleneck, theorem4_rate};
use relaynet::{LayeredNetwork, Rational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (layers, p) in [
        (vec![2, 2, 2], Rational::new(1, 2)),
        (vec![3, 3, 3], Rational::new(1, 2)),
        (vec![3, 2, 2, 3], Rational::new(1, 2)),
        (vec![2, 2, 2], Rational::new(1, 3)),
    ] {
        let net = LayeredNetwork::uniform(&layers, p.clone())?;
        let info = detect_bottleneck(&net)?;
        let sum = Rational::from(net.k() as i64) * theorem4_rate(&net)?;
        print!("{layers:?} p={p}: bottleneck hop {}, pairing sum {sum}, bound {}", info.m0, sum_rate_upper_bound(&net)?);
        match corollary2_sum_capacity(&net) {
            Ok(c) => println!(", capacity {c}"),
            Err(_) => println!(),
        }
    }

    let net = LayeredNetwork::uniform(&[3, 3, 3, 3], Rational::new(1, 2))?;
    let plan = build_multihop_plan(&net, 50_000, 4, &Rational::new(1, 5))?;
    println!(
        "3-3-3-3 plan: c2 {} (pairing formula {}), {} bits per sub-block, overall sum rate {}",
        plan.c2,
        plan.theorem4_rate,
        plan.bits_per_sub_block(),
        plan.overall_sum_rate()
    );
    Ok(())
}
