//! Ring descriptors and code documents in JSON.

use serde_json::Value;

use crate::conv::ConvCode;
use crate::error::{Error, Result};
use crate::fpoly;
use crate::ring::{ChainRing, ChainRingSpec};

/// Accepts a full descriptor object or a shorthand string: `z121`
/// (integers mod a prime power), `f11` or `f8` (finite field),
/// `gr8_3` (Galois ring of characteristic 8, degree 3), `t4_2`
/// (`F_4[u]/(u^2)`).
pub fn ring_from_json(v: &Value) -> Result<ChainRing> {
    match v {
        Value::String(s) => parse_ring(s),
        _ => {
            let spec: ChainRingSpec = serde_json::from_value(v.clone())?;
            ChainRing::new(spec)
        }
    }
}

fn prime_power(m: u64) -> Result<(u64, u32)> {
    let f = fpoly::prime_factors(m);
    match f.as_slice() {
        [p] => {
            let mut r = 0;
            let mut x = m;
            while x > 1 {
                x /= p;
                r += 1;
            }
            Ok((*p, r))
        }
        _ => Err(Error::InvalidRing(format!("{m} is not a prime power"))),
    }
}

fn num(s: &str, whole: &str) -> Result<u64> {
    s.parse()
        .map_err(|_| Error::InvalidRing(format!("cannot read ring shorthand '{whole}'")))
}

pub fn parse_ring(s: &str) -> Result<ChainRing> {
    let s = s.trim();
    let lower = s.to_ascii_lowercase();
    if lower.starts_with('{') {
        return ring_from_json(&serde_json::from_str(s)?);
    }
    let bad = || Error::InvalidRing(format!("unknown ring shorthand '{s}'"));
    if let Some(rest) = lower.strip_prefix("gr") {
        let (m, deg) = rest.split_once('_').ok_or_else(bad)?;
        let (p, r) = prime_power(num(m, s)?)?;
        return ChainRing::new(ChainRingSpec::galois(p, r, num(deg, s)? as usize, None));
    }
    if let Some(rest) = lower.strip_prefix('t') {
        let (q, nu) = rest.split_once('_').ok_or_else(bad)?;
        return ChainRing::truncated(num(q, s)?, num(nu, s)? as u32);
    }
    if let Some(rest) = lower.strip_prefix('z') {
        let (p, r) = prime_power(num(rest, s)?)?;
        return ChainRing::integers_mod(p, r);
    }
    if let Some(rest) = lower.strip_prefix('f') {
        let (p, s_) = prime_power(num(rest, s)?)?;
        return ChainRing::new(ChainRingSpec::galois(p, 1, s_ as usize, None));
    }
    Err(bad())
}

pub fn load_code(text: &str) -> Result<ConvCode> {
    ConvCode::from_json(&serde_json::from_str(text)?)
}

pub fn save_code(code: &ConvCode) -> String {
    serde_json::to_string_pretty(&code.to_json()).expect("code JSON serializes")
}
