//! JSON network configuration files.
//!
//! ```json
//! {
//!   "layers": [2, 2, 2],
//!   "hops": [
//!     {"bernoulli": "1/2"},
//!     {"bernoulli_matrix": ["1/2", "1/3", "0", "1"]},
//!     {"explicit": [{"matrix": ["10", "01"], "prob": "1/2"},
//!                   {"matrix": ["00", "00"], "prob": "1/2"}]}
//!   ]
//! }
//! ```
//!
//! Probabilities are exact: strings `"num/den"` or JSON integers. Decimal
//! literals are rejected.

use super::{ChannelLaw, LayeredNetwork, NetworkError};
use crate::gf2::BitMatrix;
use crate::rational::Rational;
use serde_json::Value;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("invalid network: {0}")]
    Network(#[from] NetworkError),
}

fn field(path: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Field { path: path.into(), message: message.into() }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<LayeredNetwork, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<LayeredNetwork, ConfigError> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| ConfigError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })?;
    let obj = root.as_object().ok_or_else(|| field("$", "expected an object"))?;
    for key in obj.keys() {
        if key != "layers" && key != "hops" {
            return Err(field(key.as_str(), "unknown field"));
        }
    }

    let layers_value = obj.get("layers").ok_or_else(|| field("layers", "missing"))?;
    let layers_arr = layers_value.as_array().ok_or_else(|| field("layers", "expected a list of integers"))?;
    let mut layers = Vec::with_capacity(layers_arr.len());
    for (i, v) in layers_arr.iter().enumerate() {
        let k = v
            .as_u64()
            .filter(|&k| k > 0 && k <= crate::gf2::MAX_DIM as u64)
            .ok_or_else(|| field(format!("layers[{i}]"), format!("expected an integer in 1..=64, got {v}")))?;
        layers.push(k as usize);
    }
    if layers.len() < 2 {
        return Err(field("layers", "need at least two layers"));
    }

    let hops_value = obj.get("hops").ok_or_else(|| field("hops", "missing"))?;
    let hops_arr = hops_value.as_array().ok_or_else(|| field("hops", "expected a list"))?;
    if hops_arr.len() != layers.len() - 1 {
        return Err(field("hops", format!("expected {} hops for {} layers, got {}", layers.len() - 1, layers.len(), hops_arr.len())));
    }
    let mut hops = Vec::with_capacity(hops_arr.len());
    for (m, hop) in hops_arr.iter().enumerate() {
        let (rows, cols) = (layers[m + 1], layers[m]);
        hops.push(parse_hop(hop, rows, cols, &format!("hops[{m}]"))?);
    }
    Ok(LayeredNetwork::new(layers, hops)?)
}

fn parse_hop(hop: &Value, rows: usize, cols: usize, path: &str) -> Result<ChannelLaw, ConfigError> {
    let obj = hop.as_object().ok_or_else(|| field(path, "expected an object"))?;
    if obj.len() != 1 {
        return Err(field(path, "expected exactly one of `bernoulli`, `bernoulli_matrix`, `explicit`"));
    }
    let (kind, body) = obj.iter().next().unwrap();
    let here = format!("{path}.{kind}");
    match kind.as_str() {
        "bernoulli" => {
            let p = parse_probability(body, &here)?;
            ChannelLaw::bernoulli_uniform(rows, cols, p).map_err(|e| field(here, e.to_string()))
        }
        "bernoulli_matrix" => {
            let arr = body.as_array().ok_or_else(|| field(&here, "expected a row-major list of probabilities"))?;
            if arr.len() != rows * cols {
                return Err(field(&here, format!("expected {} entries for a {rows}x{cols} hop, got {}", rows * cols, arr.len())));
            }
            let entries = arr
                .iter()
                .enumerate()
                .map(|(i, v)| parse_probability(v, &format!("{here}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            ChannelLaw::bernoulli_matrix(rows, cols, entries).map_err(|e| field(here, e.to_string()))
        }
        "explicit" => {
            let arr = body.as_array().ok_or_else(|| field(&here, "expected a list of {matrix, prob} entries"))?;
            let mut pmf = Vec::with_capacity(arr.len());
            for (i, entry) in arr.iter().enumerate() {
                let at = format!("{here}[{i}]");
                let e = entry.as_object().ok_or_else(|| field(&at, "expected an object"))?;
                let matrix_v = e.get("matrix").ok_or_else(|| field(format!("{at}.matrix"), "missing"))?;
                let rows_v = matrix_v
                    .as_array()
                    .ok_or_else(|| field(format!("{at}.matrix"), "expected a list of bit-row strings"))?;
                let bit_rows = rows_v
                    .iter()
                    .map(|r| r.as_str().ok_or_else(|| field(format!("{at}.matrix"), "bit rows must be strings")))
                    .collect::<Result<Vec<_>, _>>()?;
                let m = BitMatrix::from_bit_rows(&bit_rows).map_err(|e| field(format!("{at}.matrix"), e.to_string()))?;
                if m.dims() != (rows, cols) {
                    return Err(field(format!("{at}.matrix"), format!("expected {rows}x{cols}, got {}x{}", m.rows(), m.cols())));
                }
                let prob_v = e.get("prob").ok_or_else(|| field(format!("{at}.prob"), "missing"))?;
                pmf.push((m, parse_probability(prob_v, &format!("{at}.prob"))?));
            }
            ChannelLaw::explicit(rows, cols, pmf).map_err(|e| field(here, e.to_string()))
        }
        other => Err(field(format!("{path}.{other}"), "unknown hop kind")),
    }
}

fn parse_probability(v: &Value, path: &str) -> Result<Rational, ConfigError> {
    let r = match v {
        Value::String(s) => s.parse::<Rational>().map_err(|e| field(path, e.to_string()))?,
        Value::Number(n) if n.is_i64() => Rational::from_integer(n.as_i64().unwrap()),
        Value::Number(n) => return Err(field(path, format!("decimal literal {n} is not accepted; write it as \"num/den\""))),
        other => return Err(field(path, format!("expected a probability string, got {other}"))),
    };
    if !r.is_probability() {
        return Err(field(path, format!("probability {r} is outside [0, 1]")));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_hop_kinds() {
        let text = r#"{
            "layers": [2, 2, 2, 2],
            "hops": [
                {"bernoulli": "1/2"},
                {"bernoulli_matrix": ["1/2", "1/3", 0, "1"]},
                {"explicit": [{"matrix": ["10", "01"], "prob": "1/4"},
                              {"matrix": ["00", "00"], "prob": "3/4"}]}
            ]
        }"#;
        let net = parse_config(text).unwrap();
        assert_eq!(net.layers(), &[2, 2, 2, 2]);
        assert_eq!(net.hop(2).marginal(0, 1), Rational::new(1, 3));
        assert_eq!(net.hop(2).marginal(1, 0), Rational::zero());
        assert_eq!(net.hop(3).marginal(1, 1), Rational::new(1, 4));
    }

    #[test]
    fn rejects_decimals_with_field_path() {
        let e = parse_config(r#"{"layers":[2,2],"hops":[{"bernoulli":"1.5"}]}"#).unwrap_err();
        assert!(matches!(&e, ConfigError::Field { path, .. } if path == "hops[0].bernoulli"), "{e}");
        let e = parse_config(r#"{"layers":[2,2],"hops":[{"bernoulli":0.5}]}"#).unwrap_err();
        assert!(matches!(&e, ConfigError::Field { path, .. } if path == "hops[0].bernoulli"), "{e}");
        let e = parse_config(r#"{"layers":[2,2],"hops":[{"bernoulli_matrix":["1/2","1/2","3/2","0"]}]}"#).unwrap_err();
        assert!(matches!(&e, ConfigError::Field { path, .. } if path == "hops[0].bernoulli_matrix[2]"), "{e}");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let e = parse_config("{\n  \"layers\": [2, 2,\n}").unwrap_err();
        assert!(matches!(e, ConfigError::Syntax { line: 3, .. }), "{e}");
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            parse_config(r#"{"layers":[2,3],"hops":[{"bernoulli":"1/2"}]}"#),
            Err(ConfigError::Network(_))
        ));
        assert!(matches!(parse_config(r#"{"layers":[2,2],"hops":[]}"#), Err(ConfigError::Field { .. })));
        assert!(matches!(
            parse_config(r#"{"layers":[2,2],"hops":[{"explicit":[{"matrix":["10","01"],"prob":"1/2"}]}]}"#),
            Err(ConfigError::Field { .. })
        ));
        assert!(matches!(
            parse_config(r#"{"layers":[2,2],"hops":[{"explicit":[{"matrix":["1","0"],"prob":"1"}]}]}"#),
            Err(ConfigError::Field { .. })
        ));
    }
}
