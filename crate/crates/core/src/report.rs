//! Named check collections returned by the verification routines.

use std::fmt;

/// How a check's value is judged against its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// Passes when |value| <= tolerance.
    Residual,
    /// Passes when value > tolerance (a quantity that must stay positive).
    Margin,
}

#[derive(Debug, Clone)]
pub struct CheckEntry {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub kind: CheckKind,
    pub pass: bool,
}

impl fmt::Display for CheckEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "pass" } else { "FAIL" };
        match self.kind {
            CheckKind::Residual => write!(
                f,
                "{}: |{:.6e}| <= {:.1e} .. {}",
                self.name, self.value, self.tolerance, verdict
            ),
            CheckKind::Margin => write!(
                f,
                "{}: {:.6e} > {:.1e} .. {}",
                self.name, self.value, self.tolerance, verdict
            ),
        }
    }
}

/// Ordered list of named checks; order follows insertion so reports print
/// the way the computation ran.
#[derive(Debug, Clone, Default)]
pub struct ResidualReport {
    entries: Vec<CheckEntry>,
}

impl ResidualReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_residual(&mut self, name: &str, value: f64, tolerance: f64) {
        self.entries.push(CheckEntry {
            name: name.to_string(),
            value,
            tolerance,
            kind: CheckKind::Residual,
            pass: value.is_finite() && value.abs() <= tolerance,
        });
    }

    pub fn push_margin(&mut self, name: &str, value: f64, threshold: f64) {
        self.entries.push(CheckEntry {
            name: name.to_string(),
            value,
            tolerance: threshold,
            kind: CheckKind::Margin,
            pass: value.is_finite() && value > threshold,
        });
    }

    pub fn get(&self, name: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn entries(&self) -> &[CheckEntry] {
        &self.entries
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

impl fmt::Display for ResidualReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}
