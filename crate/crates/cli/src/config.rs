use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use serde::Serialize;

/// Euler characteristic: a fixed integer or the polynomial variable χ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChiArg {
    Int(i64),
    Sym,
}

impl FromStr for ChiArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "sym" {
            return Ok(ChiArg::Sym);
        }
        s.parse()
            .map(ChiArg::Int)
            .map_err(|_| format!("expected an integer or \"sym\", got {s:?}"))
    }
}

impl fmt::Display for ChiArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChiArg::Int(n) => write!(f, "{n}"),
            ChiArg::Sym => f.write_str("sym"),
        }
    }
}

impl Serialize for ChiArg {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            ChiArg::Int(n) => ser.serialize_i64(*n),
            ChiArg::Sym => ser.serialize_str("sym"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderArg {
    Desc,
    Asc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Factorization,
    Liepath,
    Closedform,
    Joycesong,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Ks,
    Js,
    Congruence,
    Gw,
    Properties,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Macmahon,
    Coulomb,
    Degenerate,
}

/// Everything that determines a run's result. Output location, cache
/// directory and thread count are deliberately absent: they never change
/// the bytes produced.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<ChiArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ray: Option<(u32, u32)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d1: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<usize>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: &str, format: Format) -> Self {
        RunConfig {
            command: command.to_string(),
            suite: None,
            series: None,
            chi: None,
            a_max: None,
            r_max: None,
            order: None,
            method: None,
            modulus: None,
            ray: None,
            h_max: None,
            d1: None,
            rank: None,
            n: None,
            seed: None,
            cases: None,
            format,
        }
    }

    /// Canonical serialization: fixed field order, no whitespace.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_parsing() {
        assert_eq!("sym".parse::<ChiArg>().unwrap(), ChiArg::Sym);
        assert_eq!("-6".parse::<ChiArg>().unwrap(), ChiArg::Int(-6));
        assert!("x".parse::<ChiArg>().is_err());
    }

    #[test]
    fn canonical_is_stable() {
        let mut c = RunConfig::new("bps", Format::Json);
        c.chi = Some(ChiArg::Sym);
        c.a_max = Some(3);
        assert_eq!(c.canonical(), r#"{"command":"bps","chi":"sym","a_max":3,"format":"json"}"#);
    }
}
