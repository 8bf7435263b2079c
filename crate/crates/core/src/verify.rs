//! Verification suites shared by the command line runner and the acceptance
//! tests.
//!
//! A [`Context`] holds the objects under test (algebras with their modules
//! and seminorm families, signatures with their fixture modules, ℤ-actions,
//! short exact sequences). Each suite turns a context into a list of cases
//! sorted by key. Every case draws from its own generator, seeded from the
//! run seed and the case key, so suites may run in any order or in parallel
//! without changing the outcome.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};

use crate::algebra::{radical, AlgebraMorphism, RightModule};
use crate::catalogue;
use crate::differentials::{d_poly, leibniz_check, split_sequence_check, TensorElement};
use crate::homology::{
    bidim, bimodule_resolution, ext_dims_with, gldim, lower_bound_witness, resolve, retraction_check,
    subadditivity_check, twist_invariance_check, ConeResolution, CoverStrategy, HomDim,
};
use crate::linalg::Matrix;
use crate::ore::{from_opposite, to_opposite, OreKind, OreModule, OrePoly};
use crate::random::Rng;
use crate::report::CheckReport;
use crate::scalar::Field;
use crate::topology::{
    check_tempered, convolve, convolve_opposite, estimates_report, iso_i, iso_i_inverse, verify_crossed_estimate,
    CrossedElement, Estimate, HoloElement, HoloEstimator, Seminorm, TemperedAction, DEFAULT_CHECK_RANGE,
};
use crate::{Error, QAlgebra, QModule, QOreModule, QSeminorm, QSignature, Rational, Result};

pub const SUITES: &[&str] = &[
    "ore-axioms",
    "iso3",
    "differentials",
    "seminorms",
    "bounds",
    "subadditivity",
    "twist",
    "retraction",
    "crossed",
    "bimodule",
];

/// Run parameters. The defaults are the acceptance settings.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub max_degree: i64,
    pub max_k: usize,
    /// Random triples or pairs for ring identities.
    pub trials: usize,
    /// Random elements for the exactness package and the estimates.
    pub samples: usize,
    pub seed: u64,
    pub rho_grid: Vec<Rational>,
    pub k_grid: Vec<u32>,
    pub truncation: i64,
    pub support_radius: i64,
    /// Largest `t`-degree in the truncation certificates of the bimodule
    /// resolution.
    pub window: i64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            max_degree: 4,
            max_k: 6,
            trials: 200,
            samples: 100,
            seed: 1,
            rho_grid: vec![Rational::from_ratio(1, 2), Rational::from_int(1), Rational::from_int(2)],
            k_grid: vec![0, 1, 2, 3],
            truncation: 12,
            support_radius: 8,
            window: 4,
        }
    }
}

/// An expected homological dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expect {
    Finite(usize),
    /// At least `max_k`, whatever `max_k` is.
    Infinite,
}

impl Expect {
    pub fn matches(self, got: HomDim, max_k: usize) -> bool {
        match self {
            Expect::Finite(n) => got == HomDim::Finite(n),
            Expect::Infinite => got == HomDim::AtLeast(max_k),
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "infinite" | "inf" => Some(Expect::Infinite),
            _ => text.parse().ok().map(Expect::Finite),
        }
    }
}

impl std::fmt::Display for Expect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expect::Finite(n) => write!(f, "{n}"),
            Expect::Infinite => write!(f, "infinite"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AlgebraEntry {
    pub algebra: Arc<QAlgebra>,
    pub modules: Vec<QModule>,
    pub seminorms: Vec<QSeminorm>,
    pub expect_gldim: Option<Expect>,
    pub expect_bidim: Option<Expect>,
}

#[derive(Clone, Debug)]
pub struct SignatureEntry {
    pub signature: Arc<QSignature>,
    pub modules: Vec<QOreModule>,
}

#[derive(Clone, Debug)]
pub struct ActionEntry {
    pub name: String,
    pub action: TemperedAction<Rational>,
    pub family: Vec<QSeminorm>,
    /// Whether `check_tempered` is expected to pass.
    pub expect_tempered: bool,
}

#[derive(Clone, Debug)]
pub struct ShortExact {
    pub label: String,
    pub x1: QModule,
    pub x: QModule,
    pub x2: QModule,
    pub i: Matrix<Rational>,
    pub p: Matrix<Rational>,
}

#[derive(Clone, Debug, Default)]
pub struct Context {
    pub algebras: Vec<AlgebraEntry>,
    pub signatures: Vec<SignatureEntry>,
    pub actions: Vec<ActionEntry>,
    pub sequences: Vec<ShortExact>,
}

impl Context {
    /// The four base algebras, five signatures, the catalogue ℤ-actions and
    /// twenty short exact sequences over `T₂` and `ℚ[ε]`.
    pub fn catalogue() -> Self {
        let signatures: Vec<SignatureEntry> = catalogue::signatures()
            .into_iter()
            .map(|sig| SignatureEntry { modules: catalogue::fixture_modules(&sig), signature: sig })
            .collect();
        let expectations = [
            (Expect::Finite(0), Expect::Finite(0)),
            (Expect::Finite(0), Expect::Finite(0)),
            (Expect::Finite(1), Expect::Finite(1)),
            (Expect::Infinite, Expect::Infinite),
        ];
        let algebras = catalogue::base_algebras()
            .into_iter()
            .zip(expectations)
            .map(|(r, (g, b))| AlgebraEntry {
                modules: catalogue::test_modules(&r),
                seminorms: Seminorm::family(&r),
                expect_gldim: Some(g),
                expect_bidim: Some(b),
                algebra: r,
            })
            .collect();
        let mut sequences = constructed_sequences(&catalogue::t2(), 10);
        sequences.extend(constructed_sequences(&catalogue::dual_numbers(), 10));
        Context { algebras, signatures, actions: catalogue_actions(), sequences }
    }

    pub fn algebra(&self, name: &str) -> Option<&AlgebraEntry> {
        self.algebras.iter().find(|a| a.algebra.name() == name)
    }

    /// Seminorm family for an algebra: the registered one when present.
    pub fn seminorms(&self, r: &Arc<QAlgebra>) -> Vec<QSeminorm> {
        self.algebras
            .iter()
            .find(|a| a.algebra.as_ref() == r.as_ref())
            .map(|a| a.seminorms.clone())
            .filter(|s| !s.is_empty())
            .unwrap_or_else(|| Seminorm::family(r))
    }
}

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

/// Identity on `ℚ`, swap on `ℚ×ℚ`, `ε ↦ −ε` (all with `p = 1`) and
/// `ε ↦ 2ε` with `p(n) = 1 + n²`, which is not tempered.
pub fn catalogue_actions() -> Vec<ActionEntry> {
    let entry = |name: &str, alpha: AlgebraMorphism<Rational>, poly: Vec<Rational>, expect: bool| {
        let family = Seminorm::family(alpha.source());
        ActionEntry {
            name: name.into(),
            action: TemperedAction::new(alpha, poly, DEFAULT_CHECK_RANGE).expect("invertible generator"),
            family,
            expect_tempered: expect,
        }
    };
    let endo = |r: Arc<QAlgebra>, m: &[i64]| AlgebraMorphism::endo(r, Matrix::from_ints(2, 2, m)).expect("2x2");
    vec![
        entry("Q/id", AlgebraMorphism::identity(catalogue::rationals()), vec![q(1)], true),
        entry("QxQ/swap", endo(catalogue::q_times_q(), &[0, 1, 1, 0]), vec![q(1)], true),
        entry("Q[eps]/-eps", endo(catalogue::dual_numbers(), &[1, 0, 0, -1]), vec![q(1)], true),
        entry("Q[eps]/2eps", endo(catalogue::dual_numbers(), &[1, 0, 0, 2]), vec![q(1), q(0), q(1)], false),
    ]
}

fn unit_vec(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![q(0); n];
    v[i] = q(1);
    v
}

/// `X·J` for the radical `J` of the algebra.
fn radical_submodule(x: &QModule) -> Matrix<Rational> {
    let rad = radical(x.algebra()).columns();
    let products: Vec<Vec<Rational>> =
        (0..x.dim()).flat_map(|i| rad.iter().map(move |a| (i, a))).map(|(i, a)| x.act(&unit_vec(x.dim(), i), a)).collect();
    x.generated_submodule(&products)
}

/// Short exact sequences `0 → X' → X → X/X' → 0` with `X` among the test
/// modules, their pairwise sums with the regular module, and `X'` the
/// radical layer or the submodule generated by a basis vector or the
/// all-ones vector. Radical sequences come first.
pub fn constructed_sequences(r: &Arc<QAlgebra>, count: usize) -> Vec<ShortExact> {
    let tests = catalogue::test_modules(r);
    let reg = RightModule::regular(r.clone()).with_name("R");
    let mut middles: Vec<QModule> = tests.clone();
    for m in &tests {
        let name = format!("R+{}", m.name());
        middles.push(reg.direct_sum(m).with_name(name));
    }
    let mut subs: Vec<(QModule, String, Matrix<Rational>)> = Vec::new();
    for x in &middles {
        subs.push((x.clone(), "rad".into(), radical_submodule(x)));
    }
    for x in &middles {
        let mut gens: Vec<(String, Vec<Rational>)> = (0..x.dim()).map(|i| (format!("<b{i}>"), unit_vec(x.dim(), i))).collect();
        gens.push(("<1..1>".into(), vec![q(1); x.dim()]));
        for (label, v) in gens {
            subs.push((x.clone(), label, x.generated_submodule(&[v])));
        }
    }
    let mut seen: Vec<(String, Matrix<Rational>)> = Vec::new();
    let mut out = Vec::new();
    for (x, label, basis) in subs {
        let basis = basis.column_space();
        if basis.cols() == 0 || basis.cols() == x.dim() {
            continue;
        }
        let canonical = basis.transpose().rref().0;
        if seen.iter().any(|(n, b)| n == x.name() && *b == canonical) {
            continue;
        }
        seen.push((x.name().to_string(), canonical));
        let (Ok((x1, i)), Ok((x2, p))) = (x.submodule(&basis), x.quotient(&basis)) else { continue };
        out.push(ShortExact {
            label: format!("{}: {} in {}", r.name(), label, x.name()),
            x1,
            x: x.clone(),
            x2,
            i: i.matrix().clone(),
            p: p.matrix().clone(),
        });
        if out.len() == count {
            break;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Case {
    pub key: String,
    pub status: Status,
    pub checked: usize,
    pub failed: usize,
    pub witnesses: Vec<String>,
    /// Computed values worth reporting (dimensions, constants, ratios).
    pub notes: BTreeMap<String, String>,
}

impl Case {
    pub fn new(key: impl Into<String>) -> Self {
        Case { key: key.into(), status: Status::Pass, checked: 0, failed: 0, witnesses: Vec::new(), notes: BTreeMap::new() }
    }

    pub fn from_report(key: impl Into<String>, report: CheckReport) -> Self {
        let mut case = Case::new(key);
        case.absorb(report);
        case
    }

    pub fn skip(key: impl Into<String>, reason: impl Into<String>) -> Self {
        let mut case = Case::new(key);
        case.status = Status::Skip;
        case.note("reason", reason);
        case
    }

    pub fn absorb(&mut self, report: CheckReport) {
        self.checked += report.checked;
        self.failed += report.failed;
        let prefix = report.name;
        self.witnesses.extend(report.witnesses.into_iter().map(|w| format!("{prefix}: {w}")));
        if self.failed > 0 {
            self.status = Status::Fail;
        }
    }

    pub fn absorb_result(&mut self, report: Result<CheckReport>) {
        match report {
            Ok(r) => self.absorb(r),
            Err(e) => self.fail(format!("error: {e}")),
        }
    }

    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.checked += 1;
        } else {
            self.fail(witness());
        }
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        self.checked += 1;
        self.failed += 1;
        self.status = Status::Fail;
        self.witnesses.push(witness.into());
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.notes.insert(key.into(), value.into());
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub name: String,
    pub cases: Vec<Case>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(Case::passed)
    }
}

/// FNV-1a, used only to derive per-case seeds.
fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn case_rng(params: &Params, suite: &str, key: &str) -> Rng {
    Rng::new(params.seed ^ fnv1a(&format!("{suite}/{key}")))
}

fn random_poly(rng: &mut Rng, sig: &Arc<QSignature>, d: i64) -> OrePoly<Rational> {
    if sig.kind().is_laurent() {
        rng.ore_poly_in(sig, -d, d)
    } else {
        rng.ore_poly(sig, d)
    }
}

fn random_tensor(rng: &mut Rng, sig: &Arc<QSignature>, d: i64, twisted: bool) -> Result<TensorElement<Rational>> {
    let lo = if sig.kind().is_laurent() { -2 } else { 0 };
    let mut out = TensorElement::zero(sig, twisted);
    for j in lo..=2 {
        if rng.coin() {
            out = out.add(&TensorElement::simple(random_poly(rng, sig, d), j, twisted))?;
        }
    }
    Ok(out)
}

pub fn run_suite(name: &str, ctx: &Context, params: &Params) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut cases = match name {
        "ore-axioms" => ore_axioms(ctx, params),
        "iso3" => iso3(ctx, params),
        "differentials" => differentials(ctx, params),
        "seminorms" => seminorms(ctx, params),
        "bounds" => bounds(ctx, params),
        "subadditivity" => subadditivity(ctx, params),
        "twist" => twist(ctx, params),
        "retraction" => retraction(ctx),
        "crossed" => crossed(ctx, params),
        "bimodule" => bimodule(ctx, params),
        other => return Err(Error::Invalid(format!("unknown suite {other:?}; known suites: {}", SUITES.join(", ")))),
    };
    cases.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(SuiteReport { name: name.to_string(), cases, elapsed: start.elapsed() })
}

/// Runs the named suites concurrently; the result follows the order of `names`.
pub fn run(names: &[String], ctx: &Context, params: &Params) -> Result<Vec<SuiteReport>> {
    if let Some(bad) = names.iter().find(|n| !SUITES.contains(&n.as_str())) {
        return Err(Error::Invalid(format!("unknown suite {bad:?}; known suites: {}", SUITES.join(", "))));
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = names.iter().map(|n| scope.spawn(move || run_suite(n, ctx, params))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    })
}

pub fn ore_axioms(ctx: &Context, params: &Params) -> Vec<Case> {
    let mut cases = Vec::new();
    for entry in &ctx.signatures {
        let sig = &entry.signature;
        let mut case = Case::new(sig.name());
        case.absorb(sig.base().check());
        case.absorb(sig.alpha().check());
        case.absorb(sig.delta().check());
        let mut rng = case_rng(params, "ore-axioms", sig.name());
        let one = OrePoly::one(sig);
        for _ in 0..params.trials {
            let f = random_poly(&mut rng, sig, params.max_degree);
            let g = random_poly(&mut rng, sig, params.max_degree);
            let h = random_poly(&mut rng, sig, params.max_degree);
            let step = || -> Result<Vec<(bool, &'static str)>> {
                let fg = f.mul(&g)?;
                Ok(vec![
                    (fg.mul(&h)? == f.mul(&g.mul(&h)?)?, "associativity"),
                    (f.mul(&g.add(&h))? == fg.add(&f.mul(&h)?), "left distributivity"),
                    (f.add(&g).mul(&h)? == f.mul(&h)?.add(&g.mul(&h)?), "right distributivity"),
                    (one.mul(&f)? == f && f.mul(&one)? == f, "unitality"),
                ])
            };
            match step() {
                Ok(results) => {
                    for (ok, what) in results {
                        case.check(ok, || format!("{what} fails at f = {f}, g = {g}, h = {h}"));
                    }
                }
                Err(e) => case.fail(format!("error at f = {f}, g = {g}, h = {h}: {e}")),
            }
        }
        cases.push(case);
    }
    cases
}

pub fn iso3(ctx: &Context, params: &Params) -> Vec<Case> {
    let mut cases = Vec::new();
    for entry in &ctx.signatures {
        let sig = &entry.signature;
        if sig.kind().is_opposite() {
            cases.push(Case::skip(sig.name(), "already an opposite presentation"));
            continue;
        }
        let Ok(op) = sig.opposite() else {
            cases.push(Case::skip(sig.name(), "α is not invertible"));
            continue;
        };
        let mut case = Case::new(sig.name());
        let mut rng = case_rng(params, "iso3", sig.name());
        let run = |case: &mut Case, rng: &mut Rng| -> Result<()> {
            let one = to_opposite(&OrePoly::one(sig))?;
            case.check(one == OrePoly::one(&op), || format!("to_opposite(1) = {one}"));
            // Degree slices: the image of a basis of the slice spans the same slice.
            let n = sig.base().dim();
            let lo = if sig.kind().is_laurent() { -params.max_degree } else { 0 };
            let width = (params.max_degree - lo + 1) as usize;
            let mut columns = Vec::new();
            for k in lo..=params.max_degree {
                for i in 0..n {
                    let image = to_opposite(&OrePoly::monomial(sig, &sig.base().basis(i), k)?)?;
                    let mut col = vec![q(0); n * width];
                    for (j, v) in image.terms() {
                        if j < lo || j > params.max_degree {
                            case.fail(format!("to_opposite(e{i} t^{k}) leaves the slice: {image}"));
                            continue;
                        }
                        for (c, x) in v.iter().enumerate() {
                            col[(j - lo) as usize * n + c] = x.clone();
                        }
                    }
                    columns.push(col);
                }
            }
            let rank = Matrix::from_columns(&columns, n * width).rank();
            case.check(rank == n * width, || format!("rank {rank} < {} on the degree slice", n * width));
            case.note("slice dimension", (n * width).to_string());
            for _ in 0..params.trials {
                let f = random_poly(rng, sig, params.max_degree);
                let g = random_poly(rng, sig, params.max_degree);
                let (of, og) = (to_opposite(&f)?, to_opposite(&g)?);
                let lhs = to_opposite(&f.mul(&g)?)?;
                let rhs = of.mul(&og)?;
                case.check(lhs == rhs, || format!("not multiplicative at f = {f}, g = {g}: {lhs} vs {rhs}"));
                let back = from_opposite(&of, sig)?;
                case.check(back == f, || format!("from_opposite(to_opposite({f})) = {back}"));
            }
            Ok(())
        };
        if let Err(e) = run(&mut case, &mut rng) {
            case.fail(format!("error: {e}"));
        }
        cases.push(case);
    }
    cases
}

pub fn differentials(ctx: &Context, params: &Params) -> Vec<Case> {
    let mut cases = Vec::new();
    for entry in &ctx.signatures {
        let sig = &entry.signature;
        if sig.kind().is_opposite() {
            cases.push(Case::skip(sig.name(), "D is defined on left-coefficient presentations"));
            continue;
        }
        let mut case = Case::new(sig.name());
        let mut rng = case_rng(params, "differentials", sig.name());
        let run = |case: &mut Case, rng: &mut Rng| -> Result<()> {
            for _ in 0..params.trials {
                let f = random_poly(rng, sig, params.max_degree);
                let g = random_poly(rng, sig, params.max_degree);
                case.absorb(leibniz_check(&f, &g)?);
            }
            for n in 0..=6 {
                let tn = OrePoly::t_power(sig, n)?;
                for i in 0..sig.base().dim() {
                    let r = OrePoly::constant(sig, &sig.base().basis(i));
                    let lhs = d_poly(&tn.mul(&r)?)?;
                    let rhs = d_poly(&tn)?.right_act(&r)?;
                    case.check(lhs == rhs, || format!("D(t^{n} e{i}) = {lhs} but D(t^{n}) e{i} = {rhs}"));
                }
            }
            if sig.kind().is_laurent() {
                let mut tally = BTreeMap::from([("m=|n|", 0usize), ("m<|n|", 0), ("m>|n|", 0)]);
                for m in -4i64..=4 {
                    for n in -4i64..=4 {
                        if m == 0 || n == 0 || (m > 0) == (n > 0) {
                            continue;
                        }
                        let (pos, neg) = if m > 0 { (m, n) } else { (n, m) };
                        let class = match pos.cmp(&neg.abs()) {
                            std::cmp::Ordering::Equal => "m=|n|",
                            std::cmp::Ordering::Less => "m<|n|",
                            std::cmp::Ordering::Greater => "m>|n|",
                        };
                        *tally.get_mut(class).expect("known class") += 1;
                        let r = rng.element(sig.base());
                        let s = rng.element(sig.base());
                        let f = OrePoly::monomial(sig, &r, m)?;
                        let g = OrePoly::monomial(sig, &s, n)?;
                        case.absorb(leibniz_check(&f, &g)?);
                    }
                }
                for (class, count) in tally {
                    case.note(format!("mixed-sign {class}"), count.to_string());
                }
            }
            for _ in 0..params.samples {
                let x = random_tensor(rng, sig, params.max_degree, true)?;
                let y = random_tensor(rng, sig, params.max_degree, false)?;
                let a = random_poly(rng, sig, params.max_degree);
                case.absorb(split_sequence_check(&x, &y, &a)?);
            }
            Ok(())
        };
        if let Err(e) = run(&mut case, &mut rng) {
            case.fail(format!("error: {e}"));
        }
        cases.push(case);
    }
    cases
}

/// Worst `lhs/rhs` over the estimates with a nonzero right-hand side.
fn tightest(estimates: &[Estimate<Rational>], current: &mut Option<Rational>) {
    for e in estimates {
        if e.rhs.is_positive() {
            let ratio = e.lhs.clone() / e.rhs.clone();
            if current.as_ref().is_none_or(|c| ratio > *c) {
                *current = Some(ratio);
            }
        }
    }
}

pub fn seminorms(ctx: &Context, params: &Params) -> Vec<Case> {
    let mut cases = Vec::new();
    for entry in &ctx.algebras {
        let r = &entry.algebra;
        let key = format!("audit {}", r.name());
        let mut case = Case::new(&key);
        let mut rng = case_rng(params, "seminorms", &key);
        for s in &entry.seminorms {
            case.absorb(s.axiom_audit(&mut rng, params.trials));
            case.absorb(s.submultiplicativity_audit());
            case.absorb(s.product_audit(&mut rng, params.trials));
        }
        cases.push(case);
    }
    for entry in &ctx.signatures {
        let sig = &entry.signature;
        if sig.kind().is_opposite() {
            cases.push(Case::skip(format!("holomorphic {}", sig.name()), "D is defined on left-coefficient presentations"));
            continue;
        }
        let key = format!("holomorphic {}", sig.name());
        let mut case = Case::new(&key);
        let mut rng = case_rng(params, "seminorms", &key);
        let family = ctx.seminorms(sig.base());
        for s in &family {
            match crate::topology::localizability_constant(sig.alpha().matrix(), s) {
                Ok(c) => case.note(format!("C(alpha; {})", s.label()), c.to_string()),
                Err(e) => case.fail(format!("error: {e}")),
            }
        }
        let mut worst = None;
        let mut elements: Vec<HoloElement<Rational>> = Vec::new();
        for n in 1..=params.truncation.min(8) {
            if let Ok(t) = OrePoly::t_power(sig, n).and_then(|t| HoloElement::new(t, params.truncation)) {
                elements.push(t);
            }
        }
        for _ in 0..params.samples {
            elements.push(HoloElement::random(&mut rng, sig, params.truncation));
        }
        for f in &elements {
            let est = match HoloEstimator::new(f) {
                Ok(e) => e,
                Err(err) => {
                    case.fail(format!("error at f = {}: {err}", f.poly()));
                    continue;
                }
            };
            for s1 in &family {
                for s2 in &family {
                    for rho1 in &params.rho_grid {
                        for rho2 in &params.rho_grid {
                            let rows = est.estimates(s1, s2, rho1, rho2);
                            tightest(&rows, &mut worst);
                            let mut report = estimates_report("holomorphic estimate", &rows);
                            if !report.passed() {
                                report.witnesses.push(format!("at f = {}", f.poly()));
                            }
                            case.absorb(report);
                        }
                    }
                }
            }
        }
        if let Some(w) = worst {
            case.note("max lhs/rhs", w.to_string());
        }
        cases.push(case);
    }
    cases
}

pub fn bounds(ctx: &Context, params: &Params) -> Vec<Case> {
    let mut cases = Vec::new();
    let max_k = params.max_k;
    let mut gl: BTreeMap<String, HomDim> = BTreeMap::new();
    for entry in &ctx.algebras {
        let r = &entry.algebra;
        let mut case = Case::new(format!("baselines {}", r.name()));
        match gldim(r, max_k) {
            Ok(g) => {
                case.note("gldim", g.to_string());
                gl.insert(r.name().to_string(), g);
                if let Some(e) = entry.expect_gldim {
                    case.check(e.matches(g, max_k), || format!("gldim {g}, expected {e}"));
                }
            }
            Err(e) => case.fail(format!("gldim error: {e}")),
        }
        match bidim(r, max_k) {
            Ok(b) => {
                case.note("bidim", b.to_string());
                if let Some(e) = entry.expect_bidim {
                    case.check(e.matches(b, max_k), || format!("bidim {b}, expected {e}"));
                }
            }
            Err(e) => case.fail(format!("bidim error: {e}")),
        }
        cases.push(case);

        let mut case = Case::new(format!("resolution independence {}", r.name()));
        for m in &entry.modules {
            let plain = resolve(m, max_k + 1, CoverStrategy::Greedy);
            let padded = resolve(m, max_k + 1, CoverStrategy::Padded);
            let (Ok(plain), Ok(padded)) = (plain, padded) else {
                case.fail(format!("resolution of {} failed", m.name()));
                continue;
            };
            for n in &entry.modules {
                match (ext_dims_with(&plain, n, max_k), ext_dims_with(&padded, n, max_k)) {
                    (Ok(a), Ok(b)) => case.check(a == b, || format!("Ext({}, {}): plain {a:?}, padded {b:?}", m.name(), n.name())),
                    _ => case.fail(format!("Ext({}, {}) failed", m.name(), n.name())),
                }
            }
        }
        cases.push(case);
    }

    for entry in &ctx.signatures {
        let sig = &entry.signature;
        let g = match gl.get(sig.base().name()) {
            Some(g) => *g,
            None => match gldim(sig.base(), max_k) {
                Ok(g) => g,
                Err(e) => {
                    let mut case = Case::new(format!("upper bound {}", sig.name()));
                    case.fail(format!("gldim error: {e}"));
                    cases.push(case);
                    continue;
                }
            },
        };
        let HomDim::Finite(g) = g else {
            cases.push(Case::skip(format!("upper bound {}", sig.name()), format!("gldim of the base is {g}")));
            continue;
        };
        let mut case = Case::new(format!("upper bound {}", sig.name()));
        case.note("gldim base", g.to_string());
        for (idx, m) in entry.modules.iter().enumerate() {
            let label = format!("{idx}:{}", m.base().name());
            let cone = match ConeResolution::new(m, max_k, CoverStrategy::Greedy) {
                Ok(c) => c,
                Err(e) => {
                    case.fail(format!("cone of {label}: {e}"));
                    continue;
                }
            };
            case.absorb_result(cone.check_complex());
            let (lo, hi) = cone.default_window();
            case.absorb_result(cone.truncation_certificate(lo, hi));
            for (jdx, n) in entry.modules.iter().enumerate() {
                match cone.ext_dims(n) {
                    Ok(ext) => {
                        let bad: Vec<usize> = (g + 2..ext.len()).filter(|&k| ext[k] != 0).collect();
                        case.check(bad.is_empty(), || {
                            format!("Ext^k({label}, {jdx}:{}) = {ext:?} nonzero above g+1 = {}", n.base().name(), g + 1)
                        });
                    }
                    Err(e) => case.fail(format!("cone Ext({label}, {jdx}): {e}")),
                }
            }
        }
        cases.push(case);

        if g <= 1 {
            let mut case = Case::new(format!("lower bound {}", sig.name()));
            match lower_bound_witness(sig, g) {
                Ok(Some(w)) => {
                    case.check(true, String::new);
                    case.note("witness", format!("Ext^{}({} (x) A, {}) = {:?}", w.degree, w.module, w.target, w.ext));
                }
                Ok(None) => case.fail(format!("no module pair with Ext^{g} != 0")),
                Err(e) => case.fail(format!("error: {e}")),
            }
            for m in catalogue::test_modules(sig.base()) {
                case.absorb_result(retraction_check(&m, sig));
            }
            cases.push(case);
        }

        if is_koszul_case(sig) {
            let mut case = Case::new(format!("koszul {}", sig.name()));
            let s0 = OreModule::with_zero_t(sig.clone(), RightModule::regular(sig.base().clone()));
            match s0.and_then(|s| crate::homology::cone_ext(&s, &s, max_k)) {
                Ok(ext) => {
                    let mut expected = vec![0; max_k + 1];
                    expected[0] = 1;
                    if max_k >= 1 {
                        expected[1] = 1;
                    }
                    case.note("ext", format!("{ext:?}"));
                    case.check(ext == expected, || format!("cone Ext(S0, S0) = {ext:?}, expected {expected:?}"));
                }
                Err(e) => case.fail(format!("error: {e}")),
            }
            cases.push(case);
        }
    }
    cases
}

/// `ℚ[t]` itself: one-dimensional base, trivial twist and derivation.
fn is_koszul_case(sig: &QSignature) -> bool {
    sig.kind() == OreKind::Polynomial && sig.base().dim() == 1 && sig.alpha().is_identity() && sig.delta().is_zero()
}

pub fn subadditivity(ctx: &Context, params: &Params) -> Vec<Case> {
    ctx.sequences
        .iter()
        .enumerate()
        .map(|(idx, s)| {
            let mut case = Case::new(format!("{idx:02} {}", s.label));
            case.absorb_result(subadditivity_check(&s.x1, &s.x, &s.x2, &s.i, &s.p, params.max_k));
            case
        })
        .collect()
}

pub fn twist(ctx: &Context, params: &Params) -> Vec<Case> {
    let mut cases = Vec::new();
    for entry in &ctx.algebras {
        let r = &entry.algebra;
        let mut autos: Vec<(String, AlgebraMorphism<Rational>)> = Vec::new();
        for s in &ctx.signatures {
            let alpha = s.signature.alpha();
            if alpha.source().as_ref() == r.as_ref() && alpha.is_invertible() && !autos.iter().any(|(_, a)| a.matrix() == alpha.matrix()) {
                autos.push((s.signature.name().to_string(), alpha.clone()));
            }
        }
        for a in &ctx.actions {
            let alpha = a.action.generator();
            if alpha.source().as_ref() == r.as_ref() && !autos.iter().any(|(_, b)| b.matrix() == alpha.matrix()) {
                autos.push((a.name.clone(), alpha.clone()));
            }
        }
        for (name, alpha) in autos {
            let mut case = Case::new(format!("{} by {name}", r.name()));
            for m in &entry.modules {
                case.absorb_result(twist_invariance_check(m, &alpha, params.max_k));
            }
            cases.push(case);
        }
    }
    cases
}

pub fn retraction(ctx: &Context) -> Vec<Case> {
    let mut cases = Vec::new();
    for entry in &ctx.signatures {
        let sig = &entry.signature;
        let mut case = Case::new(sig.name());
        let modules = ctx.algebras.iter().find(|a| a.algebra.as_ref() == sig.base().as_ref()).map(|a| a.modules.clone());
        for m in modules.unwrap_or_else(|| catalogue::test_modules(sig.base())) {
            case.absorb_result(retraction_check(&m, sig));
        }
        cases.push(case);
    }
    cases
}

pub fn crossed(ctx: &Context, params: &Params) -> Vec<Case> {
    let mut cases = Vec::new();
    for entry in &ctx.actions {
        let act = &entry.action;
        let r = act.algebra().clone();

        let key = format!("algebra {}", entry.name);
        let mut case = Case::new(&key);
        let mut rng = case_rng(params, "crossed", &key);
        let one = CrossedElement::one(&r);
        for _ in 0..params.trials {
            let f = CrossedElement::random(&mut rng, &r, 3);
            let g = CrossedElement::random(&mut rng, &r, 3);
            let h = CrossedElement::random(&mut rng, &r, 3);
            let fg = convolve(&f, &g, act);
            case.check(convolve(&fg, &h, act) == convolve(&f, &convolve(&g, &h, act), act), || {
                format!("* not associative at {f}; {g}; {h}")
            });
            let fg_op = convolve_opposite(&f, &g, act);
            case.check(convolve_opposite(&fg_op, &h, act) == convolve_opposite(&f, &convolve_opposite(&g, &h, act), act), || {
                format!("*' not associative at {f}; {g}; {h}")
            });
            case.check(convolve(&f, &one, act) == f && convolve(&one, &f, act) == f, || format!("e0 is not a unit for * at {f}"));
            case.check(convolve_opposite(&f, &one, act) == f && convolve_opposite(&one, &f, act) == f, || {
                format!("e0 is not a unit for *' at {f}")
            });
            let (i_f, i_g) = (iso_i(&f, act), iso_i(&g, act));
            case.check(iso_i(&fg, act) == convolve_opposite(&i_f, &i_g, act), || format!("i(f*g) != i(f)*'i(g) at {f}; {g}"));
            case.check(iso_i_inverse(&i_f, act) == f, || format!("i is not inverted at {f}"));
        }
        cases.push(case);

        let key = format!("estimates {}", entry.name);
        let mut case = Case::new(&key);
        let mut rng = case_rng(params, "crossed", &key);
        let mut elements: Vec<CrossedElement<Rational>> = (1..=8)
            .map(|n| {
                let mut v = rng.element(&r);
                if v.iter().all(|x| x.is_zero()) {
                    v = r.one();
                }
                CrossedElement::monomial(&r, &v, n)
            })
            .collect();
        for _ in 0..params.samples {
            elements.push(CrossedElement::random(&mut rng, &r, params.support_radius));
        }
        let mut worst = None;
        for f in &elements {
            for s1 in &entry.family {
                for s2 in &entry.family {
                    for &k1 in &params.k_grid {
                        for &k2 in &params.k_grid {
                            let rows = verify_crossed_estimate(f, act, s1, s2, k1, k2);
                            tightest(&rows, &mut worst);
                            let mut report = estimates_report("crossed estimate", &rows);
                            if !report.passed() {
                                report.witnesses.push(format!("at f = {f}"));
                            }
                            case.absorb(report);
                        }
                    }
                }
            }
        }
        if let Some(w) = worst {
            case.note("max lhs/rhs", w.to_string());
        }
        cases.push(case);

        let mut case = Case::new(format!("tempered {}", entry.name));
        let rep = check_tempered(act, &entry.family);
        case.note("expected", if entry.expect_tempered { "tempered" } else { "not tempered" });
        case.note("observed", if rep.report.passed() { "tempered" } else { "not tempered" });
        case.note(
            "suggestion",
            match &rep.suggestion {
                Some((m, c)) => format!("p(n) = {c}(|n|+1)^{m}"),
                None => format!("no monomial of degree <= {} fits", crate::topology::MAX_SUGGESTED_DEGREE),
            },
        );
        if let Some(w) = rep.report.first_witness() {
            case.note("first violation", w);
        }
        case.check(rep.report.passed() == entry.expect_tempered, || {
            format!("tempered check {} but expected {}", rep.report.passed(), entry.expect_tempered)
        });
        cases.push(case);
    }
    cases
}

pub fn bimodule(ctx: &Context, params: &Params) -> Vec<Case> {
    let mut cases = Vec::new();
    for entry in &ctx.signatures {
        let sig = &entry.signature;
        if sig.kind() != OreKind::Polynomial {
            cases.push(Case::skip(sig.name(), format!("{} extensions are not covered", sig.kind().as_str())));
            continue;
        }
        let res = match bimodule_resolution(sig) {
            Ok(r) => r,
            Err(e) => {
                cases.push(Case::skip(sig.name(), e.to_string()));
                continue;
            }
        };
        let mut case = Case::new(sig.name());
        case.note("length", res.length().to_string());
        case.absorb_result(res.certificate(params.window));
        match bidim(sig.base(), params.max_k) {
            Ok(HomDim::Finite(b)) => {
                case.note("bidim base", b.to_string());
                // Over a separable base the free cover splits off a nonzero
                // projective K, so the cone is one step longer than minimal.
                let minimal = b > 0 || res.kernel_dimension() == 0;
                if !minimal {
                    case.note("minimal", "no: K is a projective summand of the cover");
                }
                let expected = if minimal { b + 1 } else { b + 2 };
                case.check(res.length() == expected, || format!("length {} but expected {expected} (bidim(R) = {b})", res.length()));
            }
            Ok(other) => case.fail(format!("bidim of the base is {other}")),
            Err(e) => case.fail(format!("bidim error: {e}")),
        }
        cases.push(case);
    }
    cases
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Params {
        Params { trials: 5, samples: 3, ..Params::default() }
    }

    #[test]
    fn twenty_sequences() {
        let ctx = Context::catalogue();
        assert_eq!(ctx.sequences.len(), 20);
        assert_eq!(ctx.sequences.iter().filter(|s| s.label.starts_with("T2")).count(), 10);
        assert!(ctx.sequences.iter().filter(|s| s.label.contains("rad")).count() >= 2);
    }

    #[test]
    fn unknown_suite_is_rejected() {
        let ctx = Context::default();
        assert!(run(&["nope".into()], &ctx, &small()).is_err());
    }

    #[test]
    fn fast_suites_pass_on_catalogue() {
        let ctx = Context::catalogue();
        let names: Vec<String> = ["ore-axioms", "iso3", "differentials", "retraction"].iter().map(|s| s.to_string()).collect();
        for report in run(&names, &ctx, &small()).unwrap() {
            for case in &report.cases {
                assert!(case.passed(), "{} / {}: {:?}", report.name, case.key, case.witnesses);
            }
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let ctx = Context::catalogue();
        let a = run_suite("crossed", &ctx, &small()).unwrap();
        let b = run_suite("crossed", &ctx, &small()).unwrap();
        assert_eq!(a.cases, b.cases);
        assert!(a.passed(), "{:?}", a.cases);
    }

    #[test]
    fn expectations() {
        assert!(Expect::Finite(1).matches(HomDim::Finite(1), 6));
        assert!(Expect::Infinite.matches(HomDim::AtLeast(6), 6));
        assert!(!Expect::Infinite.matches(HomDim::Finite(6), 6));
        assert_eq!(Expect::parse("infinite"), Some(Expect::Infinite));
        assert_eq!(Expect::parse("2"), Some(Expect::Finite(2)));
        assert_eq!(Expect::parse("x"), None);
    }
}
