use std::fs;
use std::path::Path;

use gsbs_core::json::{int, int_vec};
use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::commands::CliError;

/// Parses `arg` as inline JSON when it looks like JSON, else reads it as a path.
pub fn read_json<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T, CliError> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        arg.to_owned()
    } else {
        fs::read_to_string(Path::new(arg))
            .map_err(|e| CliError::Usage(format!("cannot read {what} file {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid {what} JSON: {e}")))
}

/// Element as typed by a user: `theta` may be any integer.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawElement {
    #[serde(with = "int_vec")]
    pub y: Vec<BigInt>,
    #[serde(with = "int")]
    pub theta: BigInt,
}
