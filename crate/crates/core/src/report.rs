//! The machine-readable report envelope shared by every command.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: BTreeMap<String, String>,
}

/// Deterministic counters; no timings, so identical inputs give identical
/// reports.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub objects: usize,
    pub largest_frame: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: CommandEcho,
    pub ok: bool,
    pub results: serde_json::Value,
    pub stats: Stats,
}

impl Report {
    pub fn new<T: Serialize>(command: CommandEcho, ok: bool, results: &T, stats: Stats) -> Report {
        Report {
            command,
            ok,
            results: serde_json::to_value(results).expect("report values serialize"),
            stats,
        }
    }

    /// Pretty JSON with a trailing newline. Map keys come out sorted.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Report> {
        serde_json::from_str(s)
    }
}

impl CommandEcho {
    pub fn new(name: &str) -> CommandEcho {
        CommandEcho {
            name: name.into(),
            args: BTreeMap::new(),
        }
    }

    pub fn arg(mut self, key: &str, value: impl ToString) -> CommandEcho {
        self.args.insert(key.into(), value.to_string());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_key_order() {
        let r = Report::new(
            CommandEcho::new("points").arg("frame", "S").arg("joins", "J"),
            true,
            &serde_json::json!({"zeta": 1, "alpha": [1, 2]}),
            Stats {
                objects: 1,
                largest_frame: 3,
            },
        );
        let text = r.to_json();
        assert_eq!(Report::from_json(&text).unwrap(), r);
        assert_eq!(Report::from_json(&text).unwrap().to_json(), text);
        assert!(text.find("\"alpha\"").unwrap() < text.find("\"zeta\"").unwrap());
        assert!(text.find("\"command\"").unwrap() < text.find("\"stats\"").unwrap());
    }
}
