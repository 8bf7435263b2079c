//! Run reports as JSON and as text.
//!
//! Everything except the `timing` object is a function of the scenario and
//! the parameters, so two runs agree byte for byte once timing is removed.

use std::fmt::Write as _;
use std::time::Duration;

use orehom_core::scalar::format_rational;
use orehom_core::verify::{Params, Status, SuiteReport};
use serde_json::{json, Map, Value};

pub const ENGINE: &str = "orehom";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub struct Run<'a> {
    pub scenario: &'a str,
    pub sha256: &'a str,
    pub params: &'a Params,
    pub suites: &'a [SuiteReport],
    pub total: Duration,
}

impl Run<'_> {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    fn tally(&self) -> (usize, usize, usize) {
        let cases = self.suites.iter().flat_map(|s| &s.cases);
        cases.fold((0, 0, 0), |(p, f, s), c| match c.status {
            Status::Pass => (p + 1, f, s),
            Status::Fail => (p, f + 1, s),
            Status::Skip => (p, f, s + 1),
        })
    }

    pub fn to_json(&self) -> Value {
        let p = self.params;
        let rho: Vec<String> = p.rho_grid.iter().map(format_rational).collect();
        let suites: Vec<Value> = self
            .suites
            .iter()
            .map(|s| {
                let cases: Vec<Value> = s
                    .cases
                    .iter()
                    .map(|c| {
                        json!({
                            "key": c.key,
                            "status": c.status.as_str(),
                            "checked": c.checked,
                            "failed": c.failed,
                            "witnesses": c.witnesses,
                            "notes": c.notes,
                        })
                    })
                    .collect();
                json!({ "name": s.name, "passed": s.passed(), "cases": cases })
            })
            .collect();
        let (passed, failed, skipped) = self.tally();
        let mut per_suite = Map::new();
        for s in self.suites {
            per_suite.insert(s.name.clone(), json!(millis(s.elapsed)));
        }
        json!({
            "engine": { "name": ENGINE, "version": VERSION },
            "scenario": { "name": self.scenario, "sha256": self.sha256 },
            "parameters": {
                "max_degree": p.max_degree,
                "max_k": p.max_k,
                "trials": p.trials,
                "samples": p.samples,
                "seed": p.seed,
                "rho_grid": rho,
                "k_grid": p.k_grid,
                "truncation": p.truncation,
                "support_radius": p.support_radius,
                "window": p.window,
            },
            "passed": self.passed(),
            "summary": { "passed": passed, "failed": failed, "skipped": skipped },
            "suites": suites,
            "timing": { "total_ms": millis(self.total), "suites_ms": per_suite },
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{ENGINE} {VERSION}: scenario {} (sha256 {})", self.scenario, &self.sha256[..12]);
        for s in self.suites {
            let status = if s.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{status} {} ({} cases, {:.1}s)", s.name, s.cases.len(), s.elapsed.as_secs_f64());
            for c in &s.cases {
                let _ = write!(out, "  {:<4} {} [{} checked", c.status.as_str(), c.key, c.checked);
                if c.failed > 0 {
                    let _ = write!(out, ", {} failed", c.failed);
                }
                out.push(']');
                if !c.notes.is_empty() {
                    let notes: Vec<String> = c.notes.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    let _ = write!(out, " {}", notes.join("; "));
                }
                out.push('\n');
                for w in c.witnesses.iter().take(3) {
                    let _ = writeln!(out, "       witness: {w}");
                }
                if c.witnesses.len() > 3 {
                    let _ = writeln!(out, "       ... {} more", c.witnesses.len() - 3);
                }
            }
        }
        let (passed, failed, skipped) = self.tally();
        let verdict = if self.passed() { "PASSED" } else { "FAILED" };
        let _ = writeln!(
            out,
            "{verdict}: {passed} passed, {failed} failed, {skipped} skipped in {:.1}s",
            self.total.as_secs_f64()
        );
        out
    }
}

fn millis(d: Duration) -> u64 {
    d.as_millis() as u64
}
