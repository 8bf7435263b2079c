//! Scenario documents: the JSON input format, its canonical form, and the
//! translation into a verification [`Context`].
//!
//! Matrices are lists of rows. A morphism or derivation matrix has the image
//! of basis vector `j` in column `j`; a module action matrix for `e_i` sends
//! a coordinate column `v` to `v·e_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use orehom_core::algebra::{simple_modules, AlgebraMorphism, DerivationFlavor, FdAlgebra, ModuleMap, RightModule, SigmaDerivation};
use orehom_core::catalogue;
use orehom_core::linalg::Matrix;
use orehom_core::ore::{OreKind, OreModule, OreSignature};
use orehom_core::scalar::{format_rational, parse_rational};
use orehom_core::topology::{Seminorm, TemperedAction, DEFAULT_CHECK_RANGE};
use orehom_core::verify::{
    constructed_sequences, ActionEntry, AlgebraEntry, Context, Expect, Params, ShortExact, SignatureEntry, SUITES,
};
use orehom_core::{CheckReport, QAlgebra, QModule, QMorphism, QSignature, Rational};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A rational written as `"p/q"`, `"p"` or a JSON integer; always emitted as
/// a canonical string.
#[derive(Clone, Debug, PartialEq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational such as \"3/4\" or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
                parse_rational(v).map(Q).ok_or_else(|| E::custom(format!("invalid rational {v:?}")))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
                Ok(Q(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Q, E> {
                Ok(Q(Rational::from_integer(v.into())))
            }
        }
        d.deserialize_any(V)
    }
}

/// An expected dimension: a number or `"infinite"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dim(pub Expect);

impl Serialize for Dim {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Expect::Finite(n) => s.serialize_u64(n as u64),
            Expect::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Dim {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Dim;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a nonnegative integer or \"infinite\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Dim, E> {
                Expect::parse(v).map(Dim).ok_or_else(|| E::custom(format!("invalid dimension {v:?}")))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Dim, E> {
                Ok(Dim(Expect::Finite(v as usize)))
            }
        }
        d.deserialize_any(V)
    }
}

pub type Rows = Vec<Vec<Q>>;

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub algebras: Vec<AlgebraDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<MorphismDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derivations: Vec<DerivationDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub signatures: Vec<SignatureDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modules: Vec<ModuleDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ore_modules: Vec<OreModuleDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seminorms: Vec<SeminormDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub actions: Vec<ActionDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sequences: Vec<SequenceDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<String>,
    #[serde(default, skip_serializing_if = "ParamsDoc::is_empty")]
    pub parameters: ParamsDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub name: String,
    /// One of `fields`, `upper-triangular`, `truncated-polynomial`, `full-matrix`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// `structure[i][j]` is the coordinate vector of `e_i e_j`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<Vec<Vec<Vec<Q>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_basis: Option<Vec<Rows>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<ExpectDoc>,
    /// Register the regular module, simples, radical and top as test modules.
    #[serde(default = "yes", skip_serializing_if = "Clone::clone")]
    pub test_modules: bool,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gldim: Option<Dim>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bidim: Option<Dim>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub name: String,
    pub algebra: String,
    #[serde(default, skip_serializing_if = "is_false")]
    pub identity: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Rows>,
    /// Conjugation `a ↦ w a w⁻¹` by an invertible element.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<Vec<Q>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationDoc {
    pub name: String,
    pub alpha: String,
    #[serde(default, skip_serializing_if = "is_false")]
    pub zero: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Rows>,
    /// The inner derivation `a ↦ c a − α(a) c`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<Vec<Q>>,
    /// `standard` (default) or `opposite`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flavor: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignatureDoc {
    pub name: String,
    pub kind: String,
    pub alpha: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    /// Register the modules of the base that admit a compatible `t`-action.
    #[serde(default = "yes", skip_serializing_if = "Clone::clone")]
    pub fixtures: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub name: String,
    pub algebra: String,
    /// One matrix per basis element of the algebra.
    pub action: Vec<Rows>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OreModuleDoc {
    pub signature: String,
    /// A module from `modules`, or `regular`.
    pub module: String,
    /// The action of `t`; searched for when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Rows>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeminormDoc {
    pub name: String,
    pub algebra: String,
    pub weights: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    pub name: String,
    pub alpha: String,
    /// Coefficients of the growth polynomial, constant term first.
    pub p: Vec<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check_range: Option<usize>,
    /// `tempered` (default) or `not-tempered`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// With `constructed`: build that many sequences over this algebra.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constructed: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub middle: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Rows>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_grid: Option<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_grid: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support_radius: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
}

impl ParamsDoc {
    fn is_empty(&self) -> bool {
        *self == ParamsDoc::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScenarioError {
    Syntax { line: usize, column: usize, message: String },
    Semantic { path: String, message: String },
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::Syntax { line, column, message } => write!(f, "line {line}, column {column}: {message}"),
            ScenarioError::Semantic { path, message } => write!(f, "at {path}: {message}"),
        }
    }
}

impl std::error::Error for ScenarioError {}

fn err<T>(path: impl Into<String>, message: impl Into<String>) -> Result<T, ScenarioError> {
    Err(ScenarioError::Semantic { path: path.into(), message: message.into() })
}

pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
    serde_json::from_str(text).map_err(|e| {
        // serde_json appends " at line L column C"; the position is reported separately.
        let message = e.to_string();
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        ScenarioError::Syntax { line: e.line(), column: e.column(), message }
    })
}

/// Pretty-printed canonical JSON with a trailing newline.
pub fn emit(s: &Scenario) -> String {
    let mut out = serde_json::to_string_pretty(s).expect("scenario serializes");
    out.push('\n');
    out
}

/// A scenario ready to run.
pub struct Built {
    pub context: Context,
    pub params: Params,
    pub suites: Vec<String>,
}

fn rationals(v: &[Q]) -> Vec<Rational> {
    v.iter().map(|q| q.0.clone()).collect()
}

fn matrix(path: &str, rows: &Rows, shape: (usize, usize)) -> Result<Matrix<Rational>, ScenarioError> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return err(path, format!("expected a {}x{} matrix", shape.0, shape.1));
    }
    Matrix::from_rows(rows.iter().map(|r| rationals(r)).collect(), shape.1).or_else(|e| err(path, e.to_string()))
}

fn vector(path: &str, v: &[Q], len: usize) -> Result<Vec<Rational>, ScenarioError> {
    if v.len() != len {
        return err(path, format!("expected {len} entries, got {}", v.len()));
    }
    Ok(rationals(v))
}

fn require(path: &str, report: CheckReport, what: &str) -> Result<(), ScenarioError> {
    if report.passed() {
        Ok(())
    } else {
        err(path, format!("{what}: {}", report.first_witness().unwrap_or("check failed")))
    }
}

/// Exactly one of the named alternatives must be present.
fn one_of(path: &str, options: &[(&str, bool)]) -> Result<usize, ScenarioError> {
    let present: Vec<usize> = (0..options.len()).filter(|&i| options[i].1).collect();
    let names = options.iter().map(|o| o.0).collect::<Vec<_>>().join(", ");
    match present.as_slice() {
        [i] => Ok(*i),
        [] => err(path, format!("one of {names} is required")),
        _ => err(path, format!("only one of {names} may be given")),
    }
}

fn lookup<'a, T>(table: &'a BTreeMap<String, T>, path: String, kind: &str, name: &str) -> Result<&'a T, ScenarioError> {
    table.get(name).map_or_else(|| err(path, format!("unknown {kind} {name:?}")), Ok)
}

fn insert_unique<T>(table: &mut BTreeMap<String, T>, path: String, kind: &str, name: &str, value: T) -> Result<(), ScenarioError> {
    if table.insert(name.to_string(), value).is_some() {
        return err(path, format!("duplicate {kind} name {name:?}"));
    }
    Ok(())
}

fn build_algebra(path: &str, a: &AlgebraDoc) -> Result<QAlgebra, ScenarioError> {
    let which = one_of(
        path,
        &[("builtin", a.builtin.is_some()), ("structure", a.structure.is_some()), ("matrix_basis", a.matrix_basis.is_some())],
    )?;
    let algebra = match which {
        0 => {
            let k = a.k.ok_or(()).or_else(|_| err(format!("{path}/k"), "builtin algebras need k"))?;
            if k == 0 {
                return err(format!("{path}/k"), "k must be positive");
            }
            let built = match a.builtin.as_deref().unwrap_or_default() {
                "fields" => FdAlgebra::product_of_fields(k),
                "upper-triangular" => FdAlgebra::upper_triangular(k),
                "truncated-polynomial" => FdAlgebra::truncated_polynomial(k),
                "full-matrix" => FdAlgebra::full_matrix(k),
                other => {
                    return err(
                        format!("{path}/builtin"),
                        format!("unknown builtin {other:?}; expected fields, upper-triangular, truncated-polynomial or full-matrix"),
                    )
                }
            };
            if a.labels.is_some() || a.unit.is_some() {
                return err(path, "labels and unit are fixed for builtin algebras");
            }
            built
        }
        1 => {
            let structure = a.structure.as_ref().expect("checked");
            let n = structure.len();
            let labels = labels_or_default(path, a, n)?;
            let unit = a.unit.as_ref().ok_or(()).or_else(|_| err(format!("{path}/unit"), "structure constants need a unit"))?;
            let unit = vector(&format!("{path}/unit"), unit, n)?;
            let mut table = Vec::with_capacity(n);
            for (i, row) in structure.iter().enumerate() {
                if row.len() != n {
                    return err(format!("{path}/structure/{i}"), format!("expected {n} products"));
                }
                let mut cols = Vec::with_capacity(n);
                for (j, c) in row.iter().enumerate() {
                    cols.push(vector(&format!("{path}/structure/{i}/{j}"), c, n)?);
                }
                table.push(cols);
            }
            FdAlgebra::new(a.name.clone(), labels, table, unit).or_else(|e| err(path, e.to_string()))?
        }
        _ => {
            let basis = a.matrix_basis.as_ref().expect("checked");
            if basis.is_empty() {
                return err(format!("{path}/matrix_basis"), "the basis is empty");
            }
            let k = basis[0].len();
            let mut mats = Vec::with_capacity(basis.len());
            for (i, m) in basis.iter().enumerate() {
                mats.push(matrix(&format!("{path}/matrix_basis/{i}"), m, (k, k))?);
            }
            if Matrix::from_columns(&mats.iter().map(Matrix::vectorize).collect::<Vec<_>>(), k * k).rank() != mats.len() {
                return err(format!("{path}/matrix_basis"), "the matrices are linearly dependent");
            }
            let labels = labels_or_default(path, a, mats.len())?;
            if a.unit.is_some() {
                return err(format!("{path}/unit"), "the unit of a matrix algebra is the identity matrix");
            }
            FdAlgebra::from_matrix_basis(a.name.clone(), labels, &mats).or_else(|e| err(format!("{path}/matrix_basis"), e.to_string()))?
        }
    };
    if which != 0 && a.k.is_some() {
        return err(format!("{path}/k"), "k only applies to builtin algebras");
    }
    let algebra = algebra.with_name(a.name.clone());
    require(path, algebra.check(), "not a unital associative algebra")?;
    Ok(algebra)
}

fn labels_or_default(path: &str, a: &AlgebraDoc, n: usize) -> Result<Vec<String>, ScenarioError> {
    match &a.labels {
        Some(l) if l.len() != n => err(format!("{path}/labels"), format!("expected {n} labels")),
        Some(l) => Ok(l.clone()),
        None => Ok((0..n).map(|i| format!("e{i}")).collect()),
    }
}

fn build_morphism(path: &str, m: &MorphismDoc, r: &Arc<QAlgebra>) -> Result<QMorphism, ScenarioError> {
    let n = r.dim();
    let which = one_of(path, &[("identity", m.identity), ("matrix", m.matrix.is_some()), ("inner", m.inner.is_some())])?;
    let alpha = match which {
        0 => AlgebraMorphism::identity(r.clone()),
        1 => {
            let p = format!("{path}/matrix");
            let mat = matrix(&p, m.matrix.as_ref().expect("checked"), (n, n))?;
            AlgebraMorphism::endo(r.clone(), mat).or_else(|e| err(p, e.to_string()))?
        }
        _ => {
            let p = format!("{path}/inner");
            let w = vector(&p, m.inner.as_ref().expect("checked"), n)?;
            AlgebraMorphism::inner(r.clone(), &w).or_else(|_| err(p, "the conjugating element is not invertible"))?
        }
    };
    require(path, alpha.check(), "not a unital algebra endomorphism")?;
    Ok(alpha)
}

fn build_derivation(path: &str, d: &DerivationDoc, alpha: &QMorphism) -> Result<SigmaDerivation<Rational>, ScenarioError> {
    let n = alpha.source().dim();
    let flavor = match d.flavor.as_deref() {
        None | Some("standard") => DerivationFlavor::Standard,
        Some("opposite") => DerivationFlavor::Opposite,
        Some(other) => return err(format!("{path}/flavor"), format!("unknown flavor {other:?}; expected standard or opposite")),
    };
    let which = one_of(path, &[("zero", d.zero), ("matrix", d.matrix.is_some()), ("inner", d.inner.is_some())])?;
    let delta = match which {
        0 => SigmaDerivation::zero(alpha.clone()),
        1 => {
            let p = format!("{path}/matrix");
            let mat = matrix(&p, d.matrix.as_ref().expect("checked"), (n, n))?;
            SigmaDerivation::new(alpha.clone(), mat, flavor).or_else(|e| err(p, e.to_string()))?
        }
        _ => {
            if flavor == DerivationFlavor::Opposite {
                return err(format!("{path}/flavor"), "inner derivations have the standard flavor");
            }
            SigmaDerivation::inner(alpha.clone(), &vector(&format!("{path}/inner"), d.inner.as_ref().expect("checked"), n)?)
        }
    };
    require(path, delta.check(), "not a twisted derivation")?;
    Ok(delta)
}

fn split_check(path: &str, r: &Arc<QAlgebra>, what: &str) -> Result<(), ScenarioError> {
    simple_modules(r)
        .map(|_| ())
        .or_else(|e| err(path, format!("{what} need an algebra whose semisimple quotient is split over Q ({e})")))
}

fn check_exact(path: &str, s: &ShortExact) -> Result<(), ScenarioError> {
    let i = ModuleMap::new(s.x1.clone(), s.x.clone(), s.i.clone()).or_else(|e| err(format!("{path}/i"), e.to_string()))?;
    require(&format!("{path}/i"), i.check(), "not a module map")?;
    let p = ModuleMap::new(s.x.clone(), s.x2.clone(), s.p.clone()).or_else(|e| err(format!("{path}/p"), e.to_string()))?;
    require(&format!("{path}/p"), p.check(), "not a module map")?;
    if s.i.rank() != s.x1.dim() {
        return err(format!("{path}/i"), "i is not injective");
    }
    if s.p.rank() != s.x2.dim() {
        return err(format!("{path}/p"), "p is not surjective");
    }
    if !s.p.mul(&s.i).is_zero() {
        return err(path, "p∘i is not zero");
    }
    if s.x.dim() != s.x1.dim() + s.x2.dim() {
        return err(path, "the image of i is not the kernel of p");
    }
    Ok(())
}

/// Resolves names, validates every object and assembles the context.
/// Parameters from the scenario override the defaults.
pub fn build(doc: &Scenario) -> Result<Built, ScenarioError> {
    let mut algebras: BTreeMap<String, (usize, Arc<QAlgebra>)> = BTreeMap::new();
    let mut entries: Vec<AlgebraEntry> = Vec::new();
    for (idx, a) in doc.algebras.iter().enumerate() {
        let path = format!("/algebras/{idx}");
        let r = Arc::new(build_algebra(&path, a)?);
        let modules = if a.test_modules {
            split_check(&path, &r, "test modules")?;
            catalogue::test_modules(&r)
        } else {
            Vec::new()
        };
        let expect = a.expect.clone().unwrap_or(ExpectDoc { gldim: None, bidim: None });
        entries.push(AlgebraEntry {
            modules,
            seminorms: Seminorm::family(&r),
            expect_gldim: expect.gldim.map(|d| d.0),
            expect_bidim: expect.bidim.map(|d| d.0),
            algebra: r.clone(),
        });
        insert_unique(&mut algebras, format!("{path}/name"), "algebra", &a.name, (idx, r))?;
    }
    let mut morphisms: BTreeMap<String, QMorphism> = BTreeMap::new();
    for (idx, m) in doc.morphisms.iter().enumerate() {
        let path = format!("/morphisms/{idx}");
        let (_, r) = lookup(&algebras, format!("{path}/algebra"), "algebra", &m.algebra)?;
        let alpha = build_morphism(&path, m, r)?;
        insert_unique(&mut morphisms, format!("{path}/name"), "morphism", &m.name, alpha)?;
    }
    let mut derivations: BTreeMap<String, SigmaDerivation<Rational>> = BTreeMap::new();
    for (idx, d) in doc.derivations.iter().enumerate() {
        let path = format!("/derivations/{idx}");
        let alpha = lookup(&morphisms, format!("{path}/alpha"), "morphism", &d.alpha)?;
        let delta = build_derivation(&path, d, alpha)?;
        insert_unique(&mut derivations, format!("{path}/name"), "derivation", &d.name, delta)?;
    }
    let mut signatures: BTreeMap<String, (usize, Arc<QSignature>)> = BTreeMap::new();
    let mut sig_entries: Vec<SignatureEntry> = Vec::new();
    for (idx, s) in doc.signatures.iter().enumerate() {
        let path = format!("/signatures/{idx}");
        let kind = OreKind::parse(&s.kind).ok_or(()).or_else(|_| {
            err(
                format!("{path}/kind"),
                format!("unknown kind {:?}; expected polynomial, laurent, opposite-polynomial or opposite-laurent", s.kind),
            )
        })?;
        let alpha = lookup(&morphisms, format!("{path}/alpha"), "morphism", &s.alpha)?.clone();
        let delta = match &s.delta {
            Some(name) => {
                let delta = lookup(&derivations, format!("{path}/delta"), "derivation", name)?.clone();
                if delta.alpha().matrix() != alpha.matrix() {
                    return err(format!("{path}/delta"), format!("{name:?} is twisted by a different morphism than {:?}", s.alpha));
                }
                delta
            }
            None if kind.is_opposite() => {
                let n = alpha.source().dim();
                SigmaDerivation::new(alpha.clone(), Matrix::zeros(n, n), DerivationFlavor::Opposite).expect("square")
            }
            None => SigmaDerivation::zero(alpha.clone()),
        };
        let sig = Arc::new(OreSignature::new(s.name.clone(), alpha, delta, kind).or_else(|e| err(&path, e.to_string()))?);
        let modules = if s.fixtures {
            split_check(&path, sig.base(), "fixture modules")?;
            catalogue::fixture_modules(&sig)
        } else {
            Vec::new()
        };
        sig_entries.push(SignatureEntry { signature: sig.clone(), modules });
        insert_unique(&mut signatures, format!("{path}/name"), "signature", &s.name, (idx, sig))?;
    }
    let mut modules: BTreeMap<String, QModule> = BTreeMap::new();
    for (idx, m) in doc.modules.iter().enumerate() {
        let path = format!("/modules/{idx}");
        let (a_idx, r) = lookup(&algebras, format!("{path}/algebra"), "algebra", &m.algebra)?;
        if m.action.len() != r.dim() {
            return err(format!("{path}/action"), format!("expected {} action matrices, one per basis element", r.dim()));
        }
        let dim = m.action.first().map_or(0, Vec::len);
        let mut action = Vec::with_capacity(r.dim());
        for (i, a) in m.action.iter().enumerate() {
            action.push(matrix(&format!("{path}/action/{i}"), a, (dim, dim))?);
        }
        let module = RightModule::new(r.clone(), dim, action).or_else(|e| err(&path, e.to_string()))?.with_name(m.name.clone());
        require(&path, module.check(), "not a right module")?;
        entries[*a_idx].modules.push(module.clone());
        insert_unique(&mut modules, format!("{path}/name"), "module", &m.name, module)?;
    }
    for (idx, m) in doc.ore_modules.iter().enumerate() {
        let path = format!("/ore_modules/{idx}");
        let (s_idx, sig) = lookup(&signatures, format!("{path}/signature"), "signature", &m.signature)?;
        let base = if m.module == "regular" && !modules.contains_key("regular") {
            RightModule::regular(sig.base().clone())
        } else {
            lookup(&modules, format!("{path}/module"), "module", &m.module)?.clone()
        };
        if base.algebra().as_ref() != sig.base().as_ref() {
            return err(format!("{path}/module"), format!("{:?} is not a module over the base of {:?}", m.module, m.signature));
        }
        let built = match &m.t {
            Some(t) => {
                let p = format!("{path}/t");
                let t = matrix(&p, t, (base.dim(), base.dim()))?;
                OreModule::new(sig.clone(), base, t).or_else(|e| err(p, e.to_string()))?
            }
            None => OreModule::find(sig.clone(), base).or_else(|e| err(&path, e.to_string()))?,
        };
        require(&path, built.check(), "t is not compatible with the module structure")?;
        sig_entries[*s_idx].modules.push(built);
    }
    for (idx, s) in doc.seminorms.iter().enumerate() {
        let path = format!("/seminorms/{idx}");
        let (a_idx, r) = lookup(&algebras, format!("{path}/algebra"), "algebra", &s.algebra)?;
        let weights = vector(&format!("{path}/weights"), &s.weights, r.dim())?;
        let norm = Seminorm::new(r.clone(), weights, s.name.clone()).or_else(|e| err(format!("{path}/weights"), e.to_string()))?;
        entries[*a_idx].seminorms.push(norm);
    }
    let mut context = Context { algebras: entries, signatures: sig_entries, actions: Vec::new(), sequences: Vec::new() };
    for (idx, a) in doc.actions.iter().enumerate() {
        let path = format!("/actions/{idx}");
        let alpha = lookup(&morphisms, format!("{path}/alpha"), "morphism", &a.alpha)?.clone();
        if a.p.is_empty() {
            return err(format!("{path}/p"), "the growth polynomial needs at least one coefficient");
        }
        let expect_tempered = match a.expect.as_deref() {
            None | Some("tempered") => true,
            Some("not-tempered") => false,
            Some(other) => return err(format!("{path}/expect"), format!("expected tempered or not-tempered, got {other:?}")),
        };
        let range = a.check_range.unwrap_or(DEFAULT_CHECK_RANGE);
        if range < 2 {
            return err(format!("{path}/check_range"), "the check range must be at least 2");
        }
        let family = context.seminorms(alpha.source());
        let action = TemperedAction::new(alpha, rationals(&a.p), range).or_else(|e| err(format!("{path}/alpha"), e.to_string()))?;
        context.actions.push(ActionEntry { name: a.name.clone(), action, family, expect_tempered });
    }
    for (idx, s) in doc.sequences.iter().enumerate() {
        let path = format!("/sequences/{idx}");
        if let Some(count) = s.constructed {
            if s.sub.is_some() || s.middle.is_some() || s.quotient.is_some() || s.i.is_some() || s.p.is_some() {
                return err(&path, "constructed sequences take only algebra and constructed");
            }
            let name = s.algebra.as_ref().ok_or(()).or_else(|_| err(format!("{path}/algebra"), "constructed sequences need an algebra"))?;
            let (_, r) = lookup(&algebras, format!("{path}/algebra"), "algebra", name)?;
            split_check(&path, r, "constructed sequences")?;
            context.sequences.extend(constructed_sequences(r, count));
            continue;
        }
        let get = |field: &str, value: &Option<String>| -> Result<QModule, ScenarioError> {
            let name = value.as_ref().ok_or(()).or_else(|_| err(format!("{path}/{field}"), format!("{field} is required")))?;
            lookup(&modules, format!("{path}/{field}"), "module", name).cloned()
        };
        let (x1, x, x2) = (get("sub", &s.sub)?, get("middle", &s.middle)?, get("quotient", &s.quotient)?);
        if s.algebra.is_some() {
            return err(format!("{path}/algebra"), "explicit sequences take their algebra from the modules");
        }
        let need = |field: &str, value: &Option<Rows>, shape| -> Result<Matrix<Rational>, ScenarioError> {
            let rows = value.as_ref().ok_or(()).or_else(|_| err(format!("{path}/{field}"), format!("{field} is required")))?;
            matrix(&format!("{path}/{field}"), rows, shape)
        };
        let i = need("i", &s.i, (x.dim(), x1.dim()))?;
        let p = need("p", &s.p, (x2.dim(), x.dim()))?;
        let label = s.label.clone().unwrap_or_else(|| format!("{} -> {} -> {}", x1.name(), x.name(), x2.name()));
        let seq = ShortExact { label, x1, x, x2, i, p };
        check_exact(&path, &seq)?;
        context.sequences.push(seq);
    }
    let suites = if doc.suites.is_empty() { SUITES.iter().map(|s| s.to_string()).collect() } else { doc.suites.clone() };
    for (idx, s) in suites.iter().enumerate() {
        if !SUITES.contains(&s.as_str()) {
            return err(format!("/suites/{idx}"), format!("unknown suite {s:?}; known suites: {}", SUITES.join(", ")));
        }
    }
    let params = params(&doc.parameters)?;
    Ok(Built { context, params, suites })
}

fn params(p: &ParamsDoc) -> Result<Params, ScenarioError> {
    let mut out = Params::default();
    let nonneg = |field: &str, v: i64| if v < 0 { err(format!("/parameters/{field}"), "must be nonnegative") } else { Ok(v) };
    if let Some(v) = p.max_degree {
        out.max_degree = nonneg("max_degree", v)?;
    }
    if let Some(v) = p.max_k {
        out.max_k = v;
    }
    if let Some(v) = p.trials {
        out.trials = v;
    }
    if let Some(v) = p.samples {
        out.samples = v;
    }
    if let Some(v) = p.seed {
        out.seed = v;
    }
    if let Some(v) = &p.rho_grid {
        if v.is_empty() || v.iter().any(|q| q.0 <= Rational::from_integer(0.into())) {
            return err("/parameters/rho_grid", "radii must be positive and the grid nonempty");
        }
        out.rho_grid = rationals(v);
    }
    if let Some(v) = &p.k_grid {
        if v.is_empty() {
            return err("/parameters/k_grid", "the grid must be nonempty");
        }
        out.k_grid = v.clone();
    }
    if let Some(v) = p.truncation {
        out.truncation = nonneg("truncation", v)?;
    }
    if let Some(v) = p.support_radius {
        out.support_radius = nonneg("support_radius", v)?;
    }
    if let Some(v) = p.window {
        out.window = nonneg("window", v)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "name": "minimal",
        "algebras": [{"name": "D", "builtin": "truncated-polynomial", "k": 2}],
        "morphisms": [{"name": "neg", "algebra": "D", "matrix": [["1", "0"], ["0", "-1"]]}],
        "signatures": [{"name": "D[t;-eps]", "kind": "polynomial", "alpha": "neg"}]
    }"#;

    #[test]
    fn minimal_builds() {
        let built = build(&parse(MINIMAL).unwrap()).unwrap();
        assert_eq!(built.context.algebras.len(), 1);
        assert_eq!(built.context.signatures.len(), 1);
        assert!(!built.context.signatures[0].modules.is_empty());
        assert_eq!(built.suites.len(), SUITES.len());
        assert_eq!(built.params, Params::default());
    }

    #[test]
    fn emit_is_a_fixed_point() {
        let doc = parse(MINIMAL).unwrap();
        let once = emit(&doc);
        assert_eq!(emit(&parse(&once).unwrap()), once);
    }

    #[test]
    fn rationals_are_canonicalized() {
        let doc = parse(r#"{"name": "x", "parameters": {"rho_grid": ["2/4", 3, "-6/3"]}}"#).unwrap();
        assert!(emit(&doc).contains(r#""1/2""#));
        assert!(emit(&doc).contains(r#""-2""#));
        assert!(parse(r#"{"name": "x", "parameters": {"rho_grid": ["1/0"]}}"#).is_err());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse("{\n  \"name\": \"x\",\n  \"algebras\": [}\n").unwrap_err();
        match e {
            ScenarioError::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("{other}"),
        }
        let e = parse(r#"{"name": "x", "colour": 1}"#).unwrap_err();
        assert!(e.to_string().contains("unknown field `colour`"), "{e}");
    }

    #[test]
    fn unknown_names_report_the_path() {
        let doc = parse(&MINIMAL.replace(r#""alpha": "neg""#, r#""alpha": "swap""#)).unwrap();
        let e = build(&doc).err().unwrap();
        assert_eq!(e, ScenarioError::Semantic { path: "/signatures/0/alpha".into(), message: "unknown morphism \"swap\"".into() });
    }

    #[test]
    fn leibniz_failure_is_rejected_with_a_witness() {
        let doc = parse(
            r#"{
            "name": "bad",
            "algebras": [{"name": "D", "builtin": "truncated-polynomial", "k": 2}],
            "morphisms": [{"name": "id", "algebra": "D", "identity": true}],
            "derivations": [{"name": "d", "alpha": "id", "matrix": [["0", "1"], ["0", "0"]]}]
        }"#,
        )
        .unwrap();
        let e = build(&doc).err().unwrap().to_string();
        assert!(e.starts_with("at /derivations/0: not a twisted derivation"), "{e}");
        assert!(e.contains("(eps, eps)"), "{e}");
    }

    #[test]
    fn explicit_sequences_are_checked() {
        let base = r#"{
            "name": "ses",
            "algebras": [{"name": "Q", "builtin": "fields", "k": 1}],
            "modules": [
                {"name": "A", "algebra": "Q", "action": [[["1"]]]},
                {"name": "B", "algebra": "Q", "action": [[["1", "0"], ["0", "1"]]]}
            ],
            "sequences": [{"sub": "A", "middle": "B", "quotient": "A", "i": [["1"], ["0"]], "p": P}]
        }"#;
        let good = parse(&base.replace('P', r#"[["0", "1"]]"#)).unwrap();
        assert_eq!(build(&good).unwrap().context.sequences.len(), 1);
        let bad = parse(&base.replace('P', r#"[["1", "1"]]"#)).unwrap();
        assert_eq!(build(&bad).err().unwrap().to_string(), "at /sequences/0: p∘i is not zero");
    }

    #[test]
    fn non_split_algebras_need_opt_out() {
        let text = r#"{
            "name": "qi",
            "algebras": [{"name": "Q(i)", "structure": [[["1", "0"], ["0", "1"]], [["0", "1"], ["-1", "0"]]], "unit": ["1", "0"]TM}]
        }"#;
        let e = build(&parse(&text.replace("TM", "")).unwrap()).err().unwrap();
        assert!(e.to_string().starts_with("at /algebras/0: test modules need"), "{e}");
        assert!(build(&parse(&text.replace("TM", r#", "test_modules": false"#)).unwrap()).is_ok());
    }
}
