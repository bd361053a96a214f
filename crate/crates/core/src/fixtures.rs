//! Built-in patterns used throughout the test suites and the CLI.

use crate::pattern::Pattern;

pub const FIXTURE_NAMES: &[&str] = &["Q1", "Q2", "R", "S", "I2"];

/// Looks up a built-in pattern by name (case-insensitive). `rowK` gives the
/// single row of `K` ones, e.g. `row3` = `111`.
pub fn fixture(name: &str) -> Option<Pattern> {
    let upper = name.to_ascii_uppercase();
    let text = match upper.as_str() {
        // Two staircase patterns of weight 6.
        "Q1" => "1010\n1001\n0101",
        "Q2" => "0101\n1010\n1001",
        // The 4x4 pretzel: separable in neither direction.
        "R" => "1001\n0100\n1010\n0101",
        // The 4x5 spiral: every proper block is separable one way or the
        // other, but the whole is degenerate in neither direction.
        "S" => "10101\n01010\n10000\n01001",
        "I2" => "10\n01",
        _ => {
            let count: usize = upper.strip_prefix("ROW")?.parse().ok()?;
            if count == 0 {
                return None;
            }
            return Some(Pattern::from_cells(
                1,
                count,
                &(0..count).map(|j| (0, j)).collect::<Vec<_>>(),
            ));
        }
    };
    Some(Pattern::parse(text).expect("fixtures are well-formed"))
}
