//! Model files: `schema_version: "1"` plus a list of typed entries whose
//! payloads refer to each other by id.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::CliError;
use crate::algebra_zoo::{catalog, CatalogSpec};
use crate::forms::{make_twisted_lorentz, SymBilinearForm, TwistedLorentzParams};
use crate::homogeneous::ReductiveSpace;
use crate::lie_core::linalg::parse_q;
use crate::lie_core::{direct_sum, LieAlgebra, LieError, QMat, Subspace, Q};
use crate::twisted_model::{build_model, TiltSpec, TwistedProductModel};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub schema_version: String,
    pub entries: Vec<Entry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    Algebra,
    Form,
    ReductiveSpace,
    TwistedModel,
}

impl EntryKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EntryKind::Algebra => "algebra",
            EntryKind::Form => "form",
            EntryKind::ReductiveSpace => "reductive_space",
            EntryKind::TwistedModel => "twisted_model",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub id: String,
    pub kind: EntryKind,
    pub payload: Value,
}

/// A rational written either as a string `"p/q"` / decimal or as a JSON integer.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QValue {
    Int(i64),
    Str(String),
}

impl QValue {
    fn get(&self) -> Result<Q, String> {
        match self {
            QValue::Int(i) => Ok(Q::from_integer((*i).into())),
            QValue::Str(s) => parse_q(s).ok_or_else(|| format!("not a rational: {s:?}")),
        }
    }
}

fn q_vec(v: &[QValue]) -> Result<Vec<Q>, String> {
    v.iter().map(QValue::get).collect()
}

fn q_mat(rows: &[Vec<QValue>]) -> Result<QMat, String> {
    let r: Vec<Vec<Q>> = rows.iter().map(|r| q_vec(r)).collect::<Result<_, _>>()?;
    let n = r.first().map_or(0, |x| x.len());
    if r.iter().any(|x| x.len() != n) {
        return Err("ragged matrix".into());
    }
    Ok(QMat::from_rows(r))
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraPayload {
    catalog: Option<String>,
    sum: Option<Vec<String>>,
    labels: Option<Vec<String>>,
    triples: Option<Vec<(usize, usize, usize, QValue)>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TwistedParamsPayload {
    alpha: QValue,
    beta: QValue,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormPayload {
    algebra: String,
    matrix: Option<Vec<Vec<QValue>>>,
    killing: Option<QValue>,
    twisted: Option<TwistedParamsPayload>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpacePayload {
    form: Option<String>,
    algebra: Option<String>,
    h: Option<Vec<Vec<QValue>>>,
    m: Option<Vec<Vec<QValue>>>,
    metric: Option<Vec<Vec<QValue>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TiltPayload {
    k: Vec<QValue>,
    z: QValue,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TwistedPayload {
    lambda: Vec<QValue>,
    alpha: QValue,
    beta: QValue,
    compact: String,
    #[serde(default)]
    tilt: Vec<TiltPayload>,
    riemann: Option<Vec<Vec<QValue>>>,
}

/// A validated entry.
#[derive(Clone, Debug)]
pub enum Object {
    Algebra(LieAlgebra),
    Form { algebra: String, form: SymBilinearForm },
    Space { labels: Vec<String>, space: ReductiveSpace },
    Twisted(Box<TwistedProductModel>),
}

pub struct Resolved {
    pub objects: BTreeMap<String, (EntryKind, Object)>,
}

impl Resolved {
    pub fn algebra(&self, id: &str) -> Option<&LieAlgebra> {
        match self.objects.get(id) {
            Some((_, Object::Algebra(a))) => Some(a),
            _ => None,
        }
    }
}

pub fn parse_model(text: &str) -> Result<ModelFile, CliError> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(CliError::Validation(format!("unsupported schema_version {:?}", file.schema_version)));
    }
    Ok(file)
}

fn invalid(id: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("entry {id}: {msg}"))
}

fn payload<T: for<'de> Deserialize<'de>>(e: &Entry) -> Result<T, CliError> {
    serde_json::from_value(e.payload.clone()).map_err(|err| invalid(&e.id, format!("payload: {err}")))
}

fn jacobi_message(labels: &[String], err: LieError) -> String {
    match err {
        LieError::Jacobi(i, j, k) => format!("{err} = ({}, {}, {})", labels[i], labels[j], labels[k]),
        e => e.to_string(),
    }
}

/// Validates every entry in dependency order. References must point at
/// entries defined earlier in the file.
pub fn resolve(file: &ModelFile) -> Result<Resolved, CliError> {
    let mut objects: BTreeMap<String, (EntryKind, Object)> = BTreeMap::new();
    for e in &file.entries {
        if objects.contains_key(&e.id) {
            return Err(invalid(&e.id, "duplicate id"));
        }
        let obj = match e.kind {
            EntryKind::Algebra => Object::Algebra(resolve_algebra(e, &objects)?),
            EntryKind::Form => resolve_form(e, &objects)?,
            EntryKind::ReductiveSpace => resolve_space(e, &objects)?,
            EntryKind::TwistedModel => Object::Twisted(Box::new(resolve_twisted(e)?)),
        };
        objects.insert(e.id.clone(), (e.kind, obj));
    }
    Ok(Resolved { objects })
}

fn lookup_algebra<'a>(id: &str, r: &str, objects: &'a BTreeMap<String, (EntryKind, Object)>) -> Result<&'a LieAlgebra, CliError> {
    match objects.get(r) {
        Some((_, Object::Algebra(a))) => Ok(a),
        Some(_) => Err(invalid(id, format!("reference {r:?} is not an algebra"))),
        None => Err(invalid(id, format!("unresolved reference {r:?}"))),
    }
}

fn resolve_algebra(e: &Entry, objects: &BTreeMap<String, (EntryKind, Object)>) -> Result<LieAlgebra, CliError> {
    let p: AlgebraPayload = payload(e)?;
    match (&p.catalog, &p.sum, &p.triples) {
        (Some(c), None, None) if p.labels.is_none() => {
            let spec: CatalogSpec = c.parse().map_err(|err| invalid(&e.id, err))?;
            Ok(catalog(&spec).map_err(|err| invalid(&e.id, err))?.renamed(&e.id))
        }
        (None, Some(parts), None) if p.labels.is_none() && !parts.is_empty() => {
            let mut acc = lookup_algebra(&e.id, &parts[0], objects)?.clone();
            for part in &parts[1..] {
                acc = direct_sum(&acc, lookup_algebra(&e.id, part, objects)?);
            }
            Ok(acc.renamed(&e.id))
        }
        (None, None, Some(t)) => {
            let labels = p.labels.clone().ok_or_else(|| invalid(&e.id, "a table needs labels"))?;
            let triples = t
                .iter()
                .map(|(i, j, k, v)| v.get().map(|v| (*i, *j, *k, v)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|err| invalid(&e.id, err))?;
            LieAlgebra::new(&e.id, labels.clone(), triples).map_err(|err| invalid(&e.id, jacobi_message(&labels, err)))
        }
        _ => Err(invalid(&e.id, "give exactly one of catalog, sum or labels+triples")),
    }
}

fn resolve_form(e: &Entry, objects: &BTreeMap<String, (EntryKind, Object)>) -> Result<Object, CliError> {
    let p: FormPayload = payload(e)?;
    let a = lookup_algebra(&e.id, &p.algebra, objects)?;
    let form = match (&p.matrix, &p.killing, &p.twisted) {
        (Some(m), None, None) => {
            let m = q_mat(m).map_err(|err| invalid(&e.id, err))?;
            if m.rows() != a.dim() || m.cols() != a.dim() {
                return Err(invalid(&e.id, format!("matrix must be {0}x{0}", a.dim())));
            }
            SymBilinearForm::new(m).map_err(|err| invalid(&e.id, err))?
        }
        (None, Some(s), None) => a.killing_form().scaled(&s.get().map_err(|err| invalid(&e.id, err))?),
        (None, None, Some(t)) => {
            let alpha = t.alpha.get().map_err(|err| invalid(&e.id, err))?;
            let beta = t.beta.get().map_err(|err| invalid(&e.id, err))?;
            let params = TwistedLorentzParams::new(alpha, beta).map_err(|err| invalid(&e.id, err))?;
            make_twisted_lorentz(a, &params).map_err(|err| invalid(&e.id, err))?
        }
        _ => return Err(invalid(&e.id, "give exactly one of matrix, killing or twisted")),
    };
    Ok(Object::Form { algebra: p.algebra.clone(), form })
}

fn resolve_space(e: &Entry, objects: &BTreeMap<String, (EntryKind, Object)>) -> Result<Object, CliError> {
    let p: SpacePayload = payload(e)?;
    if let Some(f) = &p.form {
        if p.algebra.is_some() || p.h.is_some() || p.m.is_some() || p.metric.is_some() {
            return Err(invalid(&e.id, "form excludes algebra, h, m and metric"));
        }
        let (alg, form) = match objects.get(f) {
            Some((_, Object::Form { algebra, form })) => (algebra, form),
            Some(_) => return Err(invalid(&e.id, format!("reference {f:?} is not a form"))),
            None => return Err(invalid(&e.id, format!("unresolved reference {f:?}"))),
        };
        let g = lookup_algebra(&e.id, alg, objects)?.clone();
        let labels = g.labels().to_vec();
        let space = ReductiveSpace::group(g, form).map_err(|err| invalid(&e.id, err))?;
        return Ok(Object::Space { labels, space });
    }
    let alg = p.algebra.as_ref().ok_or_else(|| invalid(&e.id, "give form, or algebra with h, m and metric"))?;
    let g = lookup_algebra(&e.id, alg, objects)?.clone();
    let n = g.dim();
    let vecs = |rows: &Option<Vec<Vec<QValue>>>, what: &str| -> Result<Vec<Vec<Q>>, CliError> {
        let rows = rows.as_ref().ok_or_else(|| invalid(&e.id, format!("missing {what}")))?;
        let v: Vec<Vec<Q>> = rows.iter().map(|r| q_vec(r)).collect::<Result<_, _>>().map_err(|err| invalid(&e.id, err))?;
        if v.iter().any(|x| x.len() != n) {
            return Err(invalid(&e.id, format!("{what} vectors must have length {n}")));
        }
        Ok(v)
    };
    let h = vecs(&p.h, "h")?;
    let m = vecs(&p.m, "m")?;
    let metric = q_mat(p.metric.as_deref().ok_or_else(|| invalid(&e.id, "missing metric"))?).map_err(|err| invalid(&e.id, err))?;
    let h = Subspace::new(n, &h).map_err(|err| invalid(&e.id, format!("h: {err}")))?;
    let m = Subspace::new(n, &m).map_err(|err| invalid(&e.id, format!("m: {err}")))?;
    let labels = (1..=m.dim()).map(|i| format!("m{i}")).collect();
    let space = ReductiveSpace::new(g, h, m, metric).map_err(|err| invalid(&e.id, err))?;
    Ok(Object::Space { labels, space })
}

fn resolve_twisted(e: &Entry) -> Result<TwistedProductModel, CliError> {
    let p: TwistedPayload = payload(e)?;
    let err = |x: String| invalid(&e.id, x);
    let lambda = q_vec(&p.lambda).map_err(err)?;
    let params = TwistedLorentzParams::new(p.alpha.get().map_err(err)?, p.beta.get().map_err(err)?).map_err(|x| invalid(&e.id, x))?;
    let compact_factor: CatalogSpec = p.compact.parse().map_err(|x| invalid(&e.id, x))?;
    let tilt = p
        .tilt
        .iter()
        .map(|t| Ok((q_vec(&t.k)?, t.z.get()?)))
        .collect::<Result<Vec<_>, String>>()
        .map_err(err)?;
    let riemann = p.riemann.as_deref().map(q_mat).transpose().map_err(err)?;
    build_model(&lambda, &params, &TiltSpec { compact_factor, tilt }, riemann.as_ref()).map_err(|x| invalid(&e.id, x))
}
