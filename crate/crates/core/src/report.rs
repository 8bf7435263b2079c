use std::fmt;

/// Outcome of an exhaustive or sampled identity check.
///
/// `checked` counts individual comparisons; `failures` keeps a readable
/// witness for each one that failed (capped, the count is kept exactly).
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    pub witnesses: Vec<String>,
}

const MAX_WITNESSES: usize = 8;

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport { name: name.into(), checked: 0, failed: 0, witnesses: Vec::new() }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        self.record(false, || witness.into());
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn absorb(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.failed += other.failed;
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(format!("{}: {}", other.name, w));
            }
        }
    }

    pub fn first_witness(&self) -> Option<&str> {
        self.witnesses.first().map(String::as_str)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        write!(f, "{verdict} {} ({} checks", self.name, self.checked)?;
        if self.failed > 0 {
            write!(f, ", {} failed", self.failed)?;
        }
        write!(f, ")")?;
        if let Some(w) = self.first_witness() {
            write!(f, " first counterexample: {w}")?;
        }
        Ok(())
    }
}
