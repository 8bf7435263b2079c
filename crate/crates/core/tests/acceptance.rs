//! Acceptance run: the twelve criteria on the catalogue, one line each.
//!
//! All suites run once, concurrently, with the default parameters. Each
//! criterion then collects the cases it covers and adds its own structural
//! requirements (case counts, exact values). The process exits with status 1
//! when any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use orehom_core::verify::{self, Case, Context, Params, Status, SuiteReport};

struct Criterion {
    number: usize,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn suite<'a>(reports: &'a [SuiteReport], name: &str) -> &'a SuiteReport {
    reports.iter().find(|r| r.name == name).expect("suite was run")
}

fn cases<'a>(report: &'a SuiteReport, prefix: &str) -> Vec<&'a Case> {
    report.cases.iter().filter(|c| c.key.starts_with(prefix)).collect()
}

/// Passes when no selected case fails, at least `min_cases` passed, and
/// skipped cases are allowed or absent.
fn judge_with(number: usize, title: &'static str, selected: &[&Case], min_cases: usize, allow_skip: bool, extra: Option<String>) -> Criterion {
    let checked: usize = selected.iter().map(|c| c.checked).sum();
    let failing: Vec<String> = selected
        .iter()
        .filter(|c| c.status == Status::Fail || (c.status == Status::Skip && !allow_skip))
        .map(|c| format!("{} [{}] {}", c.key, c.status.as_str(), c.witnesses.first().cloned().unwrap_or_default()))
        .collect();
    let mut problems = failing;
    let passing = selected.iter().filter(|c| c.status == Status::Pass).count();
    if passing < min_cases {
        problems.push(format!("only {passing} passing cases, expected at least {min_cases}"));
    }
    if let Some(e) = extra {
        problems.push(e);
    }
    let detail = if problems.is_empty() {
        let skipped = selected.len() - passing;
        if skipped > 0 {
            format!("{passing} cases, {checked} checks, {skipped} not applicable")
        } else {
            format!("{passing} cases, {checked} checks")
        }
    } else {
        problems.join("; ")
    };
    Criterion { number, title, passed: problems.is_empty(), detail }
}

fn judge(number: usize, title: &'static str, selected: &[&Case], min_cases: usize, extra: Option<String>) -> Criterion {
    judge_with(number, title, selected, min_cases, false, extra)
}

fn note<'a>(report: &'a SuiteReport, key: &str, field: &str) -> Option<&'a str> {
    report.cases.iter().find(|c| c.key == key).and_then(|c| c.notes.get(field)).map(String::as_str)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let ctx = Context::catalogue();
    let params = Params::default();
    let names: Vec<String> = verify::SUITES.iter().map(|s| s.to_string()).collect();
    let reports = verify::run(&names, &ctx, &params).expect("catalogue suites run");

    let bounds = suite(&reports, "bounds");
    let mut criteria = Vec::new();

    criteria.push(judge(1, "Ore ring axioms", &cases(suite(&reports, "ore-axioms"), ""), 5, None));
    criteria.push(judge(2, "opposite-presentation isomorphism", &cases(suite(&reports, "iso3"), ""), 5, None));
    criteria.push(judge(3, "differentials package", &cases(suite(&reports, "differentials"), ""), 5, None));

    let mut c4 = cases(bounds, "baselines");
    c4.extend(cases(bounds, "resolution independence"));
    let expected = [("Q", "0", "0"), ("Q^2", "0", "0"), ("T2", "1", "1"), ("Q[eps]/(eps^2)", ">=6", ">=6")];
    let mut mismatch = Vec::new();
    for (name, g, b) in expected {
        let key = format!("baselines {name}");
        let got = (note(bounds, &key, "gldim"), note(bounds, &key, "bidim"));
        if got != (Some(g), Some(b)) {
            mismatch.push(format!("{name}: gldim {:?} bidim {:?}, expected {g} and {b}", got.0, got.1));
        }
    }
    let extra = (!mismatch.is_empty()).then(|| mismatch.join(", "));
    criteria.push(judge(4, "homological baselines and resolution independence", &c4, 8, extra));

    // Only bases of finite global dimension are in scope; ℚ[ε] is reported as skipped.
    criteria.push(judge_with(5, "upper bound realized by the cone", &cases(bounds, "upper bound"), 4, true, None));

    let mut c6 = cases(bounds, "lower bound");
    c6.extend(cases(suite(&reports, "retraction"), ""));
    criteria.push(judge(6, "lower bound witnessed", &c6, 9, None));

    let koszul = cases(bounds, "koszul");
    let ext = koszul.first().and_then(|c| c.notes.get("ext")).cloned().unwrap_or_default();
    let extra = (ext != "[1, 1, 0, 0, 0, 0, 0]").then(|| format!("cone Ext(S0, S0) = {ext}"));
    criteria.push(judge(7, "Koszul desk check", &koszul, 1, extra));

    criteria.push(judge(8, "twist invariance", &cases(suite(&reports, "twist"), ""), 4, None));
    criteria.push(judge(9, "subadditivity", &cases(suite(&reports, "subadditivity"), ""), 20, None));

    let seminorms = suite(&reports, "seminorms");
    let mut c10 = cases(seminorms, "holomorphic");
    c10.extend(cases(seminorms, "audit"));
    criteria.push(judge(10, "holomorphic estimates", &c10, 9, None));

    let crossed = suite(&reports, "crossed");
    let swap_tempered = note(crossed, "tempered QxQ/swap", "observed") == Some("tempered");
    let eigen_fails = note(crossed, "tempered Q[eps]/2eps", "observed") == Some("not tempered");
    let extra = (!swap_tempered || !eigen_fails).then(|| "tempered checks do not match the expected outcomes".to_string());
    criteria.push(judge(11, "crossed-product suite", &cases(crossed, ""), 12, extra));

    let bimodule = suite(&reports, "bimodule");
    let t2 = cases(bimodule, "T2[t;inner]");
    let length = note(bimodule, "T2[t;inner]", "length");
    let extra = (length != Some("2")).then(|| format!("length {length:?}, expected 2"));
    criteria.push(judge(12, "bimodule resolution over T2", &t2, 1, extra));

    for c in &criteria {
        println!("criterion {:>2} {}: {} ({})", c.number, if c.passed { "PASS" } else { "FAIL" }, c.title, c.detail);
    }
    for r in &reports {
        println!("  suite {:<14} {:>8.2}s", r.name, r.elapsed.as_secs_f64());
    }
    println!("total {:.2}s", start.elapsed().as_secs_f64());
    if criteria.iter().all(|c| c.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
