use super::{SimulationError, SimulationReport, TrialRecord};
use crate::network::LayeredNetwork;
use crate::sampler::{stream_rng, LawSampler};
use crate::single_hop::SingleHopPlan;
use crate::Rational;
use rand::Rng;
use rayon::prelude::*;
use std::collections::HashMap;

/// Runs `trials` blocks of the two-sub-block pairing scheme.
///
/// Slot `t` of the first sub-block carries bit `i` of every source when it is
/// the `i`-th slot reserved for its instance `H`; the matching slot of the
/// second sub-block has instance `H + I` and repeats the bit. Destination `k`
/// adds its two receptions.
pub fn simulate_single_hop(
    net: &LayeredNetwork,
    plan: &SingleHopPlan,
    trials: usize,
    seed: u64,
) -> Result<SimulationReport, SimulationError> {
    if net.m() != 1 {
        return Err(SimulationError::PlanMismatch(format!("single-hop plan on a {}-hop network", net.m())));
    }
    if net.k() != plan.k {
        return Err(SimulationError::PlanMismatch(format!("plan for {} users, network has {}", plan.k, net.k())));
    }
    if trials == 0 {
        return Err(SimulationError::NoTrials);
    }
    let sampler = LawSampler::new(net.hop(1));
    let records: Vec<TrialRecord> =
        (0..trials as u64).into_par_iter().map(|t| run_trial(plan, &sampler, seed, t)).collect();
    let code = Rational::new((plan.k * plan.bits_per_source()) as i64, plan.n as i64);
    Ok(SimulationReport::from_records(seed, plan.k, code, records))
}

fn run_trial(plan: &SingleHopPlan, sampler: &LawSampler, seed: u64, trial: u64) -> TrialRecord {
    let mut rng = stream_rng(seed, trial);
    let k = plan.k;
    let bits = plan.bits_per_source();
    let half = plan.sub_block_len();
    // messages[i] holds bit i of every source, source k at bit k
    let mask = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let messages: Vec<u64> = (0..bits).map(|_| rng.gen::<u64>() & mask).collect();
    let channel: Vec<_> = (0..2 * half).map(|_| sampler.sample(&mut rng)).collect();

    let mut slots1: HashMap<&_, Vec<usize>> = HashMap::new();
    let mut slots2: HashMap<&_, Vec<usize>> = HashMap::new();
    for (t, h) in channel.iter().enumerate() {
        if t < half {
            slots1.entry(h).or_default().push(t);
        } else {
            slots2.entry(h).or_default().push(t);
        }
    }
    let mut pairs = Vec::with_capacity(bits);
    let mut deficit = false;
    for a in &plan.allocation {
        let t1 = slots1.get(&a.h).map_or(&[][..], |v| v.as_slice());
        let t2 = slots2.get(&a.partner).map_or(&[][..], |v| v.as_slice());
        if t1.len() < a.slots || t2.len() < a.slots {
            deficit = true;
            break;
        }
        pairs.extend(t1.iter().zip(t2).take(a.slots).map(|(&x, &y)| (x, y)));
    }
    if deficit {
        return TrialRecord {
            trial,
            encoding_error: true,
            decode_errors: 0,
            delivered_bits: 0,
            channel_uses: plan.n,
            source_failed: vec![true; k],
            causality_violations: 0,
            identity_violations: 0,
        };
    }

    let mut x = vec![0u64; 2 * half];
    for (&(t1, t2), &msg) in pairs.iter().zip(&messages) {
        x[t1] = msg;
        x[t2] = msg;
    }
    let y: Vec<u64> = channel.iter().zip(&x).map(|(h, &xt)| h.apply(xt)).collect();
    let mut source_failed = vec![false; k];
    let mut decode_errors = 0;
    for (&(t1, t2), &msg) in pairs.iter().zip(&messages) {
        let wrong = (y[t1] ^ y[t2]) ^ msg;
        decode_errors += wrong.count_ones() as usize;
        for (s, failed) in source_failed.iter_mut().enumerate() {
            *failed |= wrong >> s & 1 == 1;
        }
    }
    TrialRecord {
        trial,
        encoding_error: false,
        decode_errors,
        delivered_bits: k * bits - decode_errors,
        channel_uses: plan.n,
        source_failed,
        causality_violations: 0,
        identity_violations: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::single_hop::{build_plan, build_plan_with_rate};

    fn net(k: usize) -> LayeredNetwork {
        LayeredNetwork::uniform(&[k, k], Rational::new(1, 2)).unwrap()
    }

    #[test]
    fn exact_decoding_without_encoding_error() {
        let net = net(2);
        let plan = build_plan(net.hop(1), 2000, &Rational::new(2, 5)).unwrap();
        let rep = simulate_single_hop(&net, &plan, 50, 3).unwrap();
        assert!(rep.successful_trials >= 45);
        assert_eq!(rep.conditional_decode_errors, 0);
        let code = plan.k * plan.bits_per_source();
        assert!(rep.records.iter().filter(|r| !r.encoding_error).all(|r| r.delivered_bits == code));
    }

    #[test]
    fn overload_always_fails() {
        let net = net(2);
        let plan = build_plan_with_rate(net.hop(1), 4000, Rational::new(3, 4)).unwrap();
        let rep = simulate_single_hop(&net, &plan, 20, 1).unwrap();
        assert_eq!(rep.encoding_error_rate, 1.0);
        assert_eq!(rep.per_source_error_rate, vec![1.0, 1.0]);
    }

    #[test]
    fn seeded_runs_repeat() {
        let net = net(3);
        let plan = build_plan(net.hop(1), 600, &Rational::new(1, 2)).unwrap();
        let a = simulate_single_hop(&net, &plan, 16, 11).unwrap();
        let b = simulate_single_hop(&net, &plan, 16, 11).unwrap();
        assert_eq!(a, b);
        let (mut ca, mut cb) = (Vec::new(), Vec::new());
        a.write_csv(&mut ca).unwrap();
        b.write_csv(&mut cb).unwrap();
        assert_eq!(ca, cb);
        assert!(String::from_utf8(ca).unwrap().starts_with("trial,encoding_error,decode_errors,delivered_bits,channel_uses\n"));
    }

    #[test]
    fn mismatch_is_rejected() {
        let plan = build_plan(net(2).hop(1), 100, &Rational::new(1, 10)).unwrap();
        assert!(matches!(simulate_single_hop(&net(3), &plan, 1, 0), Err(SimulationError::PlanMismatch(_))));
        assert!(matches!(simulate_single_hop(&net(2), &plan, 0, 0), Err(SimulationError::NoTrials)));
    }
}
