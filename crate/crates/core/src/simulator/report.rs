use crate::rational::Rational;
use std::io::Write;

/// Outcome of one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: u64,
    pub encoding_error: bool,
    /// Wrongly decoded bits; always zero when `encoding_error` is set.
    pub decode_errors: usize,
    pub delivered_bits: usize,
    pub channel_uses: usize,
    /// Whether each source's block was lost, by erasure or decode error.
    pub source_failed: Vec<bool>,
    /// Relay transmissions not strictly after the reception they forward.
    pub causality_violations: usize,
    /// Delivered packets whose end-to-end channel product is not `I`.
    pub identity_violations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub trials: usize,
    pub seed: u64,
    pub successful_trials: usize,
    /// Block error frequency per source.
    pub per_source_error_rate: Vec<f64>,
    pub per_source_error_stderr: Vec<f64>,
    pub encoding_errors: usize,
    pub encoding_error_rate: f64,
    pub encoding_error_stderr: f64,
    /// Wrong bits summed over trials without an encoding error.
    pub conditional_decode_errors: usize,
    pub causality_violations: usize,
    pub identity_violations: usize,
    /// Mean delivered bits of all sources per channel use.
    pub realized_rate_bits_per_use: f64,
    pub realized_rate_stderr: f64,
    /// Sum rate carried by a block that suffers no encoding error.
    pub code_sum_rate: Rational,
    pub records: Vec<TrialRecord>,
}

fn binomial_stderr(hits: usize, n: usize) -> f64 {
    let p = hits as f64 / n as f64;
    (p * (1.0 - p) / n as f64).sqrt()
}

impl SimulationReport {
    pub(crate) fn from_records(seed: u64, k: usize, code_sum_rate: Rational, records: Vec<TrialRecord>) -> Self {
        let trials = records.len();
        let encoding_errors = records.iter().filter(|r| r.encoding_error).count();
        let failures: Vec<usize> = (0..k).map(|s| records.iter().filter(|r| r.source_failed[s]).count()).collect();
        let rates: Vec<f64> = records.iter().map(|r| r.delivered_bits as f64 / r.channel_uses as f64).collect();
        let mean = rates.iter().sum::<f64>() / trials as f64;
        let var = if trials > 1 {
            rates.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials - 1) as f64
        } else {
            0.0
        };
        Self {
            trials,
            seed,
            successful_trials: trials - encoding_errors,
            per_source_error_rate: failures.iter().map(|&f| f as f64 / trials as f64).collect(),
            per_source_error_stderr: failures.iter().map(|&f| binomial_stderr(f, trials)).collect(),
            encoding_errors,
            encoding_error_rate: encoding_errors as f64 / trials as f64,
            encoding_error_stderr: binomial_stderr(encoding_errors, trials),
            conditional_decode_errors: records.iter().filter(|r| !r.encoding_error).map(|r| r.decode_errors).sum(),
            causality_violations: records.iter().map(|r| r.causality_violations).sum(),
            identity_violations: records.iter().map(|r| r.identity_violations).sum(),
            realized_rate_bits_per_use: mean,
            realized_rate_stderr: (var / trials as f64).sqrt(),
            code_sum_rate,
            records,
        }
    }

    /// Mean delivered bits per source per channel use.
    pub fn per_source_rate(&self) -> f64 {
        self.realized_rate_bits_per_use / self.per_source_error_rate.len() as f64
    }

    /// Writes one row per trial:
    /// `trial,encoding_error,decode_errors,delivered_bits,channel_uses`.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["trial", "encoding_error", "decode_errors", "delivered_bits", "channel_uses"])?;
        for r in &self.records {
            w.write_record([
                r.trial.to_string(),
                u8::from(r.encoding_error).to_string(),
                r.decode_errors.to_string(),
                r.delivered_bits.to_string(),
                r.channel_uses.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
