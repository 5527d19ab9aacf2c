use std::fmt::Write as _;

use serde::Serialize;

/// Formats `value` with `digits` significant digits, always with a dot
/// decimal separator and no grouping.
pub fn format_sig(value: f64, digits: usize) -> String {
    if value == 0.0 {
        return "0".to_owned();
    }
    if !value.is_finite() {
        return format!("{value}");
    }
    let exponent = value.abs().log10().floor() as i32;
    if (-5..(digits as i32)).contains(&exponent) {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        let s = format!("{value:.decimals$}");
        // rounding can carry into a new leading digit (9.99.. -> 10.0..)
        let rounded: f64 = s.parse().unwrap_or(value);
        if decimals > 0 && rounded.abs() >= 10f64.powi(exponent + 1) {
            return format!("{value:.prec$}", prec = decimals - 1);
        }
        s
    } else {
        format!("{value:.prec$e}", prec = digits - 1)
    }
}

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Output {
    pub id: String,
    pub value: f64,
    /// Fixed decimals for text rendering; significant digits otherwise.
    #[serde(skip)]
    pub decimals: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

/// Everything one command produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRecord {
    pub command: String,
    pub version: String,
    pub seeds: Vec<u64>,
    pub outputs: Vec<Output>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl ReportRecord {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            seeds: Vec::new(),
            outputs: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn output(&mut self, id: impl Into<String>, value: f64) {
        self.outputs.push(Output {
            id: id.into(),
            value,
            decimals: None,
        });
    }

    pub fn output_fixed(&mut self, id: impl Into<String>, value: f64, decimals: usize) {
        self.outputs.push(Output {
            id: id.into(),
            value,
            decimals: Some(decimals),
        });
    }

    pub fn check(&mut self, id: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            id: id.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn find(&self, id: &str) -> Option<f64> {
        self.outputs.iter().find(|o| o.id == id).map(|o| o.value)
    }

    pub fn find_check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {} (fpb {})", self.command, self.version);
        if !self.seeds.is_empty() {
            let seeds: Vec<String> = self.seeds.iter().map(u64::to_string).collect();
            let _ = writeln!(s, "# seeds: {}", seeds.join(","));
        }
        for note in &self.notes {
            let _ = writeln!(s, "# note: {note}");
        }
        let width = self.outputs.iter().map(|o| o.id.len()).max().unwrap_or(0);
        for o in &self.outputs {
            let v = match o.decimals {
                Some(d) => format!("{:.d$}", o.value),
                None => format_sig(o.value, SIGNIFICANT_DIGITS),
            };
            let _ = writeln!(s, "{:width$}  {v}", o.id);
        }
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "[{mark}] {:width$}  {}", c.id, c.detail);
        }
        if !self.checks.is_empty() {
            let passed = self.checks.iter().filter(|c| c.passed).count();
            let _ = writeln!(
                s,
                "result: {} ({passed}/{} checks passed)",
                if self.passed() { "PASS" } else { "FAIL" },
                self.checks.len()
            );
        }
        s
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
