pub mod bounds;
pub mod fem;
pub mod greens;
pub mod identity;

use serde_json::Value;

/// Result of one subcommand: named tables, overall verdict, one-line summary.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub tables: Vec<(String, Vec<Value>)>,
    pub pass: bool,
    pub summary: String,
}
