//! Cut-set bounds of a network read from a JSON config.
//!
//! `cargo run --example bounds -- crates/core/examples/configs/three_hop_3223.json`

use relaynet::bounds::{cutset_bound, exhaustive_sum_bound, layer_bounds};
use relaynet::network::{load_config, Cut};
use relaynet::NodeId;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/two_hop_222.json").into());
    let net = load_config(&path)?;
    println!("layers {:?}", net.layers());
    for (m, b) in layer_bounds(&net)?.iter().enumerate() {
        println!("layer cut {}: {b}", m + 1);
    }
    println!("all cuts: {}", exhaustive_sum_bound(&net)?);

    // Source 1 alone on the source side.
    let cut = Cut::new(&net, [NodeId::new(1, 1)])?;
    let b = cutset_bound(&net, &cut)?;
    println!("cut {{v1,1}}: {} (pairs {:?})", b.value, b.sets.k_omega);
    Ok(())
}
