use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::model::{EntryKind, Object, Resolved, SCHEMA_VERSION};
use super::CliError;
use crate::algebra_zoo::{classify_decomposition, Certificate, Classification, ClassificationResult};
use crate::forms::{ad_invariance_residual, normalize_twisted_lorentz, normalize_twisted_lorentz_numeric, recover_twisted_parameters, twisted_rank, SymBilinearForm};
use crate::homogeneous::{einstein_ratio, holonomy_algebra, ricci_tensor, ricci_tensor_numeric, scalar_from_ricci, sectional_curvature, ReductiveSpace};
use crate::lie_core::linalg::{fmt_q, to_f64, unit};
use crate::lie_core::{structure_report, LieAlgebra, QMat, Q};
use crate::twisted_model::{holonomy_special, is_special, oracle_compare, ricci_isotropy_check, ricci_specialized, scal_specialized, TwistedProductModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Numeric => "numeric",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyzeOptions {
    pub mode: Mode,
    pub tolerance: f64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { mode: Mode::Exact, tolerance: 1e-9 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Item {
    pub name: String,
    pub value: Value,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryReport {
    pub id: String,
    pub kind: EntryKind,
    pub items: Vec<Item>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: String,
    pub mode: Mode,
    pub tolerance: f64,
    pub entries: Vec<EntryReport>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Report, CliError> {
        let r: Report = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(CliError::Validation(format!("unsupported schema_version {:?}", r.schema_version)));
        }
        Ok(r)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("# Analysis report\n\n");
        out.push_str(&format!("default mode: {}, tolerance: {:e}\n", self.mode.as_str(), self.tolerance));
        for e in &self.entries {
            out.push_str(&format!("\n## {} ({})\n\n| quantity | value | mode |\n|---|---|---|\n", e.id, e.kind.as_str()));
            for it in &e.items {
                out.push_str(&format!("| {} | {} | {} |\n", it.name, render(&it.value), it.mode.as_str()));
            }
        }
        out
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => format!("[{}]", xs.iter().map(render).collect::<Vec<_>>().join(", ")),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

fn qv(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

fn qmat_v(m: &QMat) -> Value {
    Value::Array((0..m.rows()).map(|r| Value::Array(m.row(r).iter().map(qv).collect())).collect())
}

fn fmat_v(m: &nalgebra::DMatrix<f64>) -> Value {
    Value::Array((0..m.nrows()).map(|r| Value::Array((0..m.ncols()).map(|c| json!(m[(r, c)] + 0.0)).collect())).collect())
}

struct Items(Vec<Item>);

impl Items {
    fn push(&mut self, name: impl Into<String>, value: Value, mode: Mode) {
        self.0.push(Item { name: name.into(), value, mode });
    }

    fn exact(&mut self, name: impl Into<String>, value: Value) {
        self.push(name, value, Mode::Exact);
    }
}

pub fn analyze(resolved: &Resolved, opts: &AnalyzeOptions) -> Report {
    let entries = resolved
        .objects
        .iter()
        .map(|(id, (kind, obj))| {
            let mut items = Items(Vec::new());
            match obj {
                Object::Algebra(a) => algebra_items(a, opts, &mut items),
                Object::Form { algebra, form } => {
                    let a = resolved.algebra(algebra).expect("resolved reference");
                    form_items(a, form, opts, &mut items)
                }
                Object::Space { labels, space } => space_items(labels, space, opts, &mut items),
                Object::Twisted(m) => twisted_items(m, opts, &mut items),
            }
            EntryReport { id: id.clone(), kind: *kind, items: items.0 }
        })
        .collect();
    Report { schema_version: SCHEMA_VERSION.into(), mode: opts.mode, tolerance: opts.tolerance, entries }
}

pub fn classification_line(c: &Classification) -> String {
    match c {
        Classification::Classified(r) => summary(r),
        Classification::NotInClassification { reason } => format!("not in classification ({reason})"),
    }
}

fn summary(r: &ClassificationResult) -> String {
    let k = if r.k_simple_dims.is_empty() { "0".to_string() } else { vec!["so3"; r.k_simple_dims.len()].join(" ⊕ ") };
    format!("k = {k}, a = {}, s = {}", r.a_dim, r.s_kind)
}

fn certificate_value(c: &Certificate) -> (Value, Mode) {
    match c {
        Certificate::Exact(m) => (qmat_v(m), Mode::Exact),
        Certificate::Numeric { basis, .. } => (fmat_v(basis), Mode::Numeric),
    }
}

fn algebra_items(a: &LieAlgebra, _opts: &AnalyzeOptions, it: &mut Items) {
    it.exact("dim", json!(a.dim()));
    it.exact("labels", json!(a.labels()));
    let r = structure_report(a);
    it.exact("solvable", json!(r.flags.solvable));
    it.exact("nilpotent", json!(r.flags.nilpotent));
    it.exact("semisimple", json!(r.flags.semisimple));
    it.exact("reductive", json!(r.flags.reductive));
    it.exact("compact_type", json!(r.flags.compact_type));
    it.exact("derived_series_dims", json!(r.derived_series_dims));
    it.exact("lower_central_dims", json!(r.lower_central_dims));
    it.exact("center_dim", json!(r.center_dim));
    let k = a.killing_form();
    it.exact("killing", qmat_v(k.matrix()));
    let s = k.signature();
    it.exact("killing_signature", json!([s.positive, s.negative, s.zero]));
    let c = classify_decomposition(a);
    let line = classification_line(&c);
    match &c {
        Classification::Classified(r) => {
            let (v, mode) = certificate_value(&r.witness);
            it.push("classification", Value::String(line), mode);
            it.push("certificate_basis", v, mode);
        }
        Classification::NotInClassification { .. } => it.exact("classification", Value::String(line)),
    }
}

fn form_items(a: &LieAlgebra, f: &SymBilinearForm, opts: &AnalyzeOptions, it: &mut Items) {
    let s = f.signature();
    it.exact("signature", json!([s.positive, s.negative, s.zero]));
    it.exact("lorentzian", json!(s.is_lorentzian()));
    let res = ad_invariance_residual(a, f);
    it.exact("ad_invariance_residual", qv(&res));
    let Ok(d) = twisted_rank(a) else { return };
    let Ok(rec) = recover_twisted_parameters(a, f) else { return };
    let p = &rec.params;
    it.exact("alpha", qv(&p.alpha));
    it.exact("beta", qv(&p.beta));
    it.exact("t_flipped", json!(rec.t_flipped));
    let exact = match opts.mode {
        Mode::Exact => normalize_twisted_lorentz(d, p).ok(),
        Mode::Numeric => None,
    };
    match exact {
        Some(l) => it.exact("normalizing_automorphism", qmat_v(&l)),
        None => {
            let l = normalize_twisted_lorentz_numeric(d, to_f64(&p.alpha), to_f64(&p.beta)).expect("alpha > 0");
            it.push("normalizing_automorphism", fmat_v(&l), Mode::Numeric);
        }
    }
}

fn space_items(labels: &[String], s: &ReductiveSpace, opts: &AnalyzeOptions, it: &mut Items) {
    let k = s.dim();
    it.exact("dim", json!(k));
    let sig = SymBilinearForm::new(s.metric().clone()).expect("validated metric").signature();
    it.exact("metric_signature", json!([sig.positive, sig.negative, sig.zero]));
    match opts.mode {
        Mode::Exact => {
            let ric = ricci_tensor(s);
            it.exact("ricci", qmat_v(&ric));
            it.exact("scal", qv(&scalar_from_ricci(s, &ric)));
            it.exact("einstein_ratio", einstein_ratio(s, &ric).map_or(Value::Null, |c| qv(&c)));
        }
        Mode::Numeric => {
            let ric = ricci_tensor_numeric(s);
            let ginv = s.metric().to_f64().try_inverse().expect("nondegenerate metric");
            let scal = (&ginv * &ric).trace();
            it.push("ricci", fmat_v(&ric), Mode::Numeric);
            it.push("scal", json!(scal), Mode::Numeric);
            let g = s.metric().to_f64();
            let (r, c) = g.iamax_full();
            let ratio = ric[(r, c)] / g[(r, c)];
            let scale = ric.amax().max(1.0);
            let einstein = (&ric - &g * ratio).amax() <= opts.tolerance * scale;
            it.push("einstein_ratio", if einstein { json!(ratio) } else { Value::Null }, Mode::Numeric);
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            if let Ok(kk) = sectional_curvature(s, &unit(k, i), &unit(k, j)) {
                it.exact(format!("K({}, {})", labels[i], labels[j]), qv(&kk));
            }
        }
    }
    it.exact("holonomy_dim", json!(holonomy_algebra(s).len()));
}

fn twisted_items(m: &TwistedProductModel, opts: &AnalyzeOptions, it: &mut Items) {
    it.exact("d", json!(m.d()));
    it.exact("lambda", Value::Array(m.lambda.iter().map(qv).collect()));
    it.exact("dim", json!(m.dim()));
    it.exact("p_dim", json!(m.p_dim()));
    let special = is_special(m);
    it.exact("special", json!(special));
    match opts.mode {
        Mode::Exact => {
            it.exact("ricci", qmat_v(&ricci_specialized(m)));
            it.exact("scal", qv(&scal_specialized(m)));
        }
        Mode::Numeric => {
            let ric = ricci_tensor_numeric(&m.space);
            let ginv = m.space.metric().to_f64().try_inverse().expect("nondegenerate metric");
            it.push("ricci", fmat_v(&ric), Mode::Numeric);
            it.push("scal", json!((&ginv * &ric).trace()), Mode::Numeric);
        }
    }
    if let Ok(v) = ricci_isotropy_check(m) {
        it.exact("ricci_image_totally_isotropic", json!(v.totally_isotropic));
    }
    let hol = if special { holonomy_special(m).map(|h| h.len()).ok() } else { None };
    it.exact("holonomy_dim", json!(hol.unwrap_or_else(|| holonomy_algebra(&m.space).len())));
    let rep = oracle_compare(m, &[]);
    it.exact("oracle_agrees", json!(rep.passed()));
}
