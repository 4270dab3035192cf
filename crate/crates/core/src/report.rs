use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub id: String,
    pub expected: String,
    pub actual: String,
}

/// Outcome of one verification suite. Cases are recorded in index order, so
/// two runs over the same inputs render identically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub suite: String,
    pub cases: u64,
    pub failures: Vec<Failure>,
    /// Observations that do not affect the status, such as the uncorrected form of
    /// a lemma failing where a corrected form is checked instead.
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerificationReport { suite: suite.into(), cases: 0, failures: Vec::new(), notes: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn status(&self) -> &'static str {
        if self.passed() {
            "PASS"
        } else {
            "FAIL"
        }
    }

    /// Counts one case, recording a failure unless `ok`.
    pub fn check(
        &mut self,
        ok: bool,
        id: impl FnOnce() -> String,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
    ) -> bool {
        self.cases += 1;
        if !ok {
            self.failures.push(Failure {
                id: id(),
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
        ok
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.cases += other.cases;
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
    }
}

/// Line-oriented text; the last line is the bare `PASS` or `FAIL` token.
impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite: {}", self.suite)?;
        writeln!(f, "cases: {}", self.cases)?;
        writeln!(f, "failures: {}", self.failures.len())?;
        for fail in self.failures.iter().take(50) {
            writeln!(f, "  fail {}: expected {}, got {}", fail.id, fail.expected, fail.actual)?;
        }
        if self.failures.len() > 50 {
            writeln!(f, "  ... {} more", self.failures.len() - 50)?;
        }
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        write!(f, "{}", self.status())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_failures() {
        let mut r = VerificationReport::new("demo");
        r.check(true, || "a".into(), 1, 1);
        assert!(r.passed());
        r.check(false, || "b".into(), 1, 2);
        assert_eq!(r.cases, 2);
        assert_eq!(r.status(), "FAIL");
        let text = r.to_string();
        assert!(text.ends_with("\nFAIL"));
        assert!(text.contains("fail b: expected 1, got 2"));
    }
}
