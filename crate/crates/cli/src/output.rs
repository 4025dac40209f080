use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::CliError;

pub const ARTIFACT: &str = "d0d6";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    artifact: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    result: &'a T,
}

/// Result rows for CSV output: a header and string cells.
pub struct Rows {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// Renders a result with its config and version embedded.
pub fn render<T: Serialize>(config: &RunConfig, result: &T, rows: impl FnOnce() -> Rows) -> Result<String, CliError> {
    match config.format {
        Format::Json => {
            let env = Envelope { artifact: ARTIFACT, version: VERSION, config, result };
            let mut s = serde_json::to_string_pretty(&env)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let Rows { header, rows } = rows();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header)?;
            for r in rows {
                w.write_record(&r)?;
            }
            let body = String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8");
            Ok(format!("# {ARTIFACT} {VERSION}\n# config {}\n{body}", config.canonical()))
        }
    }
}
