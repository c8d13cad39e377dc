//! Line-oriented `key=value` reports with a final `pass=` line.

use std::fmt;

/// Ordered `key=value` pairs. Floats use a fixed scientific format so identical runs produce
/// identical bytes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, String)>,
    passed: bool,
}

pub fn format_float(x: f64) -> String {
    format!("{x:.12e}")
}

impl Report {
    pub fn new() -> Self {
        Report {
            entries: Vec::new(),
            passed: true,
        }
    }

    pub fn text(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn float(&mut self, key: &str, value: f64) -> &mut Self {
        self.text(key, format_float(value))
    }

    /// Records a sub-check; the report passes only if every recorded check does.
    pub fn check(&mut self, key: &str, ok: bool) -> &mut Self {
        self.passed &= ok;
        self.text(key, ok)
    }

    pub fn fail(&mut self) -> &mut Self {
        self.passed = false;
        self
    }

    pub fn passed(&self) -> bool {
        self.passed
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Appends every entry of `other` under `prefix.` and folds in its verdict.
    pub fn merge(&mut self, prefix: &str, other: &Report) -> &mut Self {
        for (k, v) in &other.entries {
            self.entries.push((format!("{prefix}.{k}"), v.clone()));
        }
        self.entries
            .push((format!("{prefix}.pass"), other.passed.to_string()));
        self.passed &= other.passed;
        self
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}={v}")?;
        }
        writeln!(f, "pass={}", self.passed)
    }
}
