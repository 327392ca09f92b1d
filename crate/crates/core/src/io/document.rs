//! JSON documents for groupoids, functors, fibrations, lifting problems and
//! command results.
//!
//! Every document is an object with a `kind` field. Unknown fields are
//! rejected. Serialization is canonical: keys are sorted and every list is
//! sorted, so `serialize(parse(serialize(x)))` is byte-identical to
//! `serialize(x)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::functor::Functor;
use crate::groupoid::{validate_groupoid, Groupoid, GroupoidSpec};
use crate::name::Name;
use crate::oracle::VerificationReport;
use crate::path::path_object;
use crate::tribe::{derive_canonical_cleavage, NormalClovenFibration};
use crate::wfs::{factorize, LeftWitness, LiftingProblem};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("schema error in `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("validation error: {0}")]
    Validation(#[from] Error),
}

impl DocumentError {
    /// Field path for schema errors.
    pub fn field(&self) -> Option<&str> {
        match self {
            DocumentError::Schema { field, .. } => Some(field),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidDocument {
    pub objects: Vec<Name>,
    /// `[arrow, source, target]`
    pub arrows: Vec<(Name, Name, Name)>,
    /// `[object, identity arrow]`
    pub identities: Vec<(Name, Name)>,
    /// `[f, g, g_after_f]`
    pub compose: Vec<(Name, Name, Name)>,
    /// `[arrow, inverse]`
    pub inverses: Vec<(Name, Name)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDocument {
    pub dom: GroupoidDocument,
    pub cod: GroupoidDocument,
    pub objects: Vec<(Name, Name)>,
    pub arrows: Vec<(Name, Name)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AutoToken {
    #[serde(rename = "auto")]
    Auto,
}

/// Either the token `"auto"` or `[object, arrow, lift]` triples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CleavageDocument {
    Auto(AutoToken),
    Table(Vec<(Name, Name, Name)>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibrationDocument {
    pub functor: FunctorDocument,
    pub cleavage: CleavageDocument,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum WitnessDocument {
    /// The left map is `λ` of the factorization of `of`.
    FactorizationUnit { of: FunctorDocument },
    /// The left map is the pullback of the unit of `Path(path_of)` along `along`.
    UnitPullback { path_of: FibrationDocument, along: FibrationDocument },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub left: FunctorDocument,
    pub right: FibrationDocument,
    pub top: FunctorDocument,
    pub bottom: FunctorDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PullbackDocument {
    pub apex: GroupoidDocument,
    pub proj0: FibrationDocument,
    pub proj1: FunctorDocument,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathDocument {
    pub groupoid: GroupoidDocument,
    pub unit: FunctorDocument,
    pub boundary: FibrationDocument,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorizationDocument {
    pub functor: FunctorDocument,
    pub mid: GroupoidDocument,
    pub lambda: FunctorDocument,
    pub rho: FibrationDocument,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FillersDocument {
    /// `"constructive"` or `"oracle"`.
    pub method: String,
    pub fillers: Vec<FunctorDocument>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticDocument {
    pub command: String,
    pub error: String,
    pub details: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Groupoid(GroupoidDocument),
    Functor(FunctorDocument),
    Fibration(FibrationDocument),
    Problem(ProblemDocument),
    Pullback(PullbackDocument),
    Path(PathDocument),
    Factorization(FactorizationDocument),
    Fillers(FillersDocument),
    Report(VerificationReport),
    Diagnostic(DiagnosticDocument),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Groupoid(_) => "groupoid",
            Document::Functor(_) => "functor",
            Document::Fibration(_) => "fibration",
            Document::Problem(_) => "problem",
            Document::Pullback(_) => "pullback",
            Document::Path(_) => "path",
            Document::Factorization(_) => "factorization",
            Document::Fillers(_) => "fillers",
            Document::Report(_) => "report",
            Document::Diagnostic(_) => "diagnostic",
        }
    }

    /// Sorts every list.
    pub fn canonicalize(&mut self) {
        match self {
            Document::Groupoid(g) => g.canonicalize(),
            Document::Functor(f) => f.canonicalize(),
            Document::Fibration(p) => p.canonicalize(),
            Document::Problem(p) => p.canonicalize(),
            Document::Pullback(p) => {
                p.apex.canonicalize();
                p.proj0.canonicalize();
                p.proj1.canonicalize();
            }
            Document::Path(p) => {
                p.groupoid.canonicalize();
                p.unit.canonicalize();
                p.boundary.canonicalize();
            }
            Document::Factorization(f) => {
                f.functor.canonicalize();
                f.mid.canonicalize();
                f.lambda.canonicalize();
                f.rho.canonicalize();
            }
            Document::Fillers(f) => {
                f.fillers.iter_mut().for_each(FunctorDocument::canonicalize);
                f.fillers.sort_by(|a, b| (&a.objects, &a.arrows).cmp(&(&b.objects, &b.arrows)));
            }
            Document::Report(_) | Document::Diagnostic(_) => {}
        }
    }
}

impl GroupoidDocument {
    pub fn canonicalize(&mut self) {
        self.objects.sort();
        self.arrows.sort();
        self.identities.sort();
        self.compose.sort();
        self.inverses.sort();
    }

    pub fn to_groupoid(&self) -> Result<Arc<Groupoid>, Error> {
        let spec = GroupoidSpec {
            objects: self.objects.clone(),
            arrows: self.arrows.clone(),
            identities: self.identities.clone(),
            compose: self.compose.clone(),
            inverses: self.inverses.clone(),
        };
        validate_groupoid(&spec).map(Arc::new).map_err(Error::Groupoid)
    }
}

impl From<&Groupoid> for GroupoidDocument {
    fn from(g: &Groupoid) -> Self {
        let spec = g.to_spec();
        let mut doc = GroupoidDocument {
            objects: spec.objects,
            arrows: spec.arrows,
            identities: spec.identities,
            compose: spec.compose,
            inverses: spec.inverses,
        };
        doc.canonicalize();
        doc
    }
}

impl FunctorDocument {
    pub fn canonicalize(&mut self) {
        self.dom.canonicalize();
        self.cod.canonicalize();
        self.objects.sort();
        self.arrows.sort();
    }

    pub fn to_functor(&self) -> Result<Functor, Error> {
        Functor::from_names(self.dom.to_groupoid()?, self.cod.to_groupoid()?, &self.objects, &self.arrows)
    }
}

impl From<&Functor> for FunctorDocument {
    fn from(f: &Functor) -> Self {
        let mut doc = FunctorDocument {
            dom: f.dom().as_ref().into(),
            cod: f.cod().as_ref().into(),
            objects: f.object_pairs(),
            arrows: f.arrow_pairs(),
        };
        doc.canonicalize();
        doc
    }
}

impl FibrationDocument {
    pub fn canonicalize(&mut self) {
        self.functor.canonicalize();
        if let CleavageDocument::Table(t) = &mut self.cleavage {
            t.sort();
        }
    }

    /// Resolves `"auto"` through the canonical cleavage.
    pub fn to_fibration(&self) -> Result<NormalClovenFibration, Error> {
        let functor = self.functor.to_functor()?;
        match &self.cleavage {
            CleavageDocument::Auto(_) => derive_canonical_cleavage(&functor),
            CleavageDocument::Table(t) => NormalClovenFibration::with_cleavage(functor, t),
        }
    }
}

impl From<&NormalClovenFibration> for FibrationDocument {
    fn from(p: &NormalClovenFibration) -> Self {
        let mut doc = FibrationDocument {
            functor: p.functor().into(),
            cleavage: CleavageDocument::Table(p.cleavage_entries()),
        };
        doc.canonicalize();
        doc
    }
}

impl ProblemDocument {
    pub fn canonicalize(&mut self) {
        self.left.canonicalize();
        self.right.canonicalize();
        self.top.canonicalize();
        self.bottom.canonicalize();
        match &mut self.witness {
            Some(WitnessDocument::FactorizationUnit { of }) => of.canonicalize(),
            Some(WitnessDocument::UnitPullback { path_of, along }) => {
                path_of.canonicalize();
                along.canonicalize();
            }
            None => {}
        }
    }

    pub fn to_problem(&self) -> Result<LiftingProblem, Error> {
        let left = self.left.to_functor()?;
        let problem =
            LiftingProblem::new(left, self.right.to_fibration()?, self.top.to_functor()?, self.bottom.to_functor()?)?;
        let witness = match &self.witness {
            None => return Ok(problem),
            Some(WitnessDocument::FactorizationUnit { of }) => {
                let fact = factorize(&of.to_functor()?)?;
                if problem.left != *fact.lambda() {
                    return Err(Error::PreconditionViolated("left map is not the unit of the factorization".into()));
                }
                fact.witness()
            }
            Some(WitnessDocument::UnitPullback { path_of, along }) => {
                let path = Arc::new(path_object(&path_of.to_fibration()?)?);
                let witness = LeftWitness::unit_pullback(path, &along.to_fibration()?)?;
                let LeftWitness::UnitPullback { square, .. } = &witness else { unreachable!() };
                if problem.left != *square.proj1() {
                    return Err(Error::PreconditionViolated("left map is not the pullback of the unit".into()));
                }
                witness
            }
        };
        Ok(problem.with_witness(witness))
    }
}

impl From<&LiftingProblem> for ProblemDocument {
    /// Witnesses are not carried over; they are only readable from input.
    fn from(p: &LiftingProblem) -> Self {
        let mut doc = ProblemDocument {
            left: (&p.left).into(),
            right: (&p.right).into(),
            top: (&p.top).into(),
            bottom: (&p.bottom).into(),
            witness: None,
        };
        doc.canonicalize();
        doc
    }
}

/// Parses any document.
pub fn parse_document(text: &str) -> Result<Document, DocumentError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    serde_path_to_error::deserialize(value).map_err(|e| {
        let mut field = e.path().to_string();
        let message = e.inner().to_string();
        if let Some(missing) = message.strip_prefix("missing field `").and_then(|m| m.split('`').next()) {
            field = if field == "." { missing.to_string() } else { format!("{field}.{missing}") };
        }
        DocumentError::Schema { field, message }
    })
}

/// Canonical text: sorted keys and lists, two-space indentation, trailing newline.
pub fn serialize_document(doc: &Document) -> String {
    let mut doc = doc.clone();
    doc.canonicalize();
    let value = serde_json::to_value(&doc).expect("documents serialize");
    let mut text = serde_json::to_string_pretty(&value).expect("values serialize");
    text.push('\n');
    text
}

fn expect_kind(doc: Document, kind: &str) -> Result<Document, DocumentError> {
    if doc.kind() == kind {
        Ok(doc)
    } else {
        Err(DocumentError::Schema { field: "kind".into(), message: format!("expected {kind}, found {}", doc.kind()) })
    }
}

pub fn parse_groupoid(text: &str) -> Result<Arc<Groupoid>, DocumentError> {
    match expect_kind(parse_document(text)?, "groupoid")? {
        Document::Groupoid(g) => Ok(g.to_groupoid()?),
        _ => unreachable!(),
    }
}

pub fn parse_functor(text: &str) -> Result<Functor, DocumentError> {
    match expect_kind(parse_document(text)?, "functor")? {
        Document::Functor(f) => Ok(f.to_functor()?),
        _ => unreachable!(),
    }
}

pub fn parse_fibration(text: &str) -> Result<NormalClovenFibration, DocumentError> {
    match expect_kind(parse_document(text)?, "fibration")? {
        Document::Fibration(p) => Ok(p.to_fibration()?),
        _ => unreachable!(),
    }
}

pub fn parse_problem(text: &str) -> Result<LiftingProblem, DocumentError> {
    match expect_kind(parse_document(text)?, "problem")? {
        Document::Problem(p) => Ok(p.to_problem()?),
        _ => unreachable!(),
    }
}

pub fn serialize_groupoid(g: &Groupoid) -> String {
    serialize_document(&Document::Groupoid(g.into()))
}

pub fn serialize_functor(f: &Functor) -> String {
    serialize_document(&Document::Functor(f.into()))
}

pub fn serialize_fibration(p: &NormalClovenFibration) -> String {
    serialize_document(&Document::Fibration(p.into()))
}

pub fn serialize_problem(p: &LiftingProblem) -> String {
    serialize_document(&Document::Problem(p.into()))
}
