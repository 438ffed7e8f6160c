//! Structured pass/fail results with counterexample payloads.

use serde::Serialize;
use serde_json::Value;
use std::fmt;

/// Tally for one law: how many instances were checked, failed or skipped,
/// and the first counterexample seen.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Law {
    pub law: String,
    pub checked: usize,
    pub failed: usize,
    pub skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    pub check: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub laws: Vec<Law>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(check: impl Into<String>) -> Self {
        Report { check: check.into(), pass: true, witness: None, laws: Vec::new(), notes: Vec::new() }
    }

    fn entry(&mut self, law: &str) -> &mut Law {
        let pos = match self.laws.iter().position(|l| l.law == law) {
            Some(p) => p,
            None => {
                self.laws.push(Law { law: law.to_string(), checked: 0, failed: 0, skipped: 0, witness: None });
                self.laws.len() - 1
            }
        };
        &mut self.laws[pos]
    }

    /// Records one instance of `law`; the witness closure runs only on the first failure.
    pub fn check(&mut self, law: &str, ok: bool, witness: impl FnOnce() -> Value) -> bool {
        let e = self.entry(law);
        e.checked += 1;
        if !ok {
            e.failed += 1;
            if e.witness.is_none() {
                let w = witness();
                e.witness = Some(w.clone());
                if self.witness.is_none() {
                    self.witness = Some(serde_json::json!({ "law": law, "instance": w }));
                }
            }
            self.pass = false;
        }
        ok
    }

    pub fn fail(&mut self, law: &str, witness: Value) {
        self.check(law, false, || witness);
    }

    pub fn skip(&mut self, law: &str) {
        self.entry(law).skipped += 1;
    }

    /// Registers a law with zero instances so it shows up in the output.
    pub fn touch(&mut self, law: &str) {
        self.entry(law);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn law(&self, law: &str) -> Option<&Law> {
        self.laws.iter().find(|l| l.law == law)
    }

    pub fn law_passed(&self, law: &str) -> bool {
        self.law(law).map_or(true, |l| l.failed == 0)
    }

    pub fn skipped(&self) -> usize {
        self.laws.iter().map(|l| l.skipped).sum()
    }

    /// Folds another report in, prefixing its law names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for l in other.laws {
            let name = format!("{prefix}.{}", l.law);
            let failed = l.failed;
            let w = l.witness.clone();
            let e = self.entry(&name);
            e.checked += l.checked;
            e.failed += l.failed;
            e.skipped += l.skipped;
            if e.witness.is_none() {
                e.witness = l.witness;
            }
            if failed > 0 {
                self.pass = false;
                if self.witness.is_none() {
                    self.witness = Some(serde_json::json!({ "law": name, "instance": w }));
                }
            }
        }
        for n in other.notes {
            self.notes.push(format!("{prefix}: {n}"));
        }
        if !other.pass && self.pass {
            self.pass = false;
            if self.witness.is_none() {
                self.witness = other.witness;
            }
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.check, if self.pass { "PASS" } else { "FAIL" })?;
        for l in &self.laws {
            write!(f, "  {:<40} checked {:>7}  failed {:>5}", l.law, l.checked, l.failed)?;
            if l.skipped > 0 {
                write!(f, "  skipped {}", l.skipped)?;
            }
            writeln!(f)?;
            if let Some(w) = &l.witness {
                writeln!(f, "      witness: {w}")?;
            }
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
