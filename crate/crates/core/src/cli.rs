//! Command implementations behind the `tamediv` binary. Each command takes
//! document text, runs one library operation, and returns a [`Report`]
//! carrying a JSON document, a one-line summary and an exit code.

use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::abelian_ext::{cover_search, AbelianExtDoc, AbelianExtQ, QPlace};
use crate::config::Bounds;
use crate::graded_skeleton::{
    canonical_tower, crossed_product_test, validate, DivAlgSkeleton, ResiduePart, SkeletonDoc, SkeletonError,
    SubfieldSkeleton, TowerPiece, Verdict,
};
use crate::location::{classify, witness_noncrossed, Fiber, FiberDoc, FiberStatus, LocationError, TraceStep, Witness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_BOUNDED: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    /// `bounds.ambient_rank` caps the rank of accepted value groups.
    pub bounds: Bounds,
    pub format: Format,
    pub trace: bool,
    /// `None` writes to standard output.
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { bounds: Bounds::default(), format: Format::Json, trace: false, output: None }
    }
}

impl RunConfig {
    pub fn check(&self) -> Result<(), String> {
        let b = &self.bounds;
        if b.conductor == 0 || b.prime_scan == 0 || b.support == 0 || b.ambient_rank == 0 {
            return Err("all bounds must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub code: i32,
    pub doc: Value,
    pub text: String,
}

impl Report {
    pub fn input_error(msg: impl Into<String>) -> Self {
        let msg = msg.into();
        Report { code: EXIT_INPUT, doc: json!({ "error": msg }), text: format!("error: {msg}") }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.doc).expect("serializable") + "\n",
            Format::Text => self.text.clone() + "\n",
        }
    }
}

/// Parses a document, reporting the line and column of malformed input.
pub fn parse_doc<T: DeserializeOwned>(src: &str, what: &str) -> Result<T, String> {
    serde_json::from_str(src).map_err(|e| format!("{what}: {e} (line {}, column {})", e.line(), e.column()))
}

fn load_skeleton(cfg: &RunConfig, src: &str) -> Result<DivAlgSkeleton, Report> {
    let doc: SkeletonDoc = parse_doc(src, "skeleton").map_err(Report::input_error)?;
    let d = DivAlgSkeleton::from_doc(&doc).map_err(|e| Report::input_error(e.to_string()))?;
    if d.rank() > cfg.bounds.ambient_rank {
        let msg = format!("rank {} exceeds the configured maximum {}", d.rank(), cfg.bounds.ambient_rank);
        return Err(Report::input_error(msg));
    }
    Ok(d)
}

fn violation_report(e: &SkeletonError) -> Report {
    let list: Vec<String> = match e {
        SkeletonError::Invalid(v) => v.iter().map(|x| x.to_string()).collect(),
        other => vec![other.to_string()],
    };
    Report {
        code: EXIT_INPUT,
        doc: json!({ "valid": false, "violations": list }),
        text: format!("invalid: {}", list.join("; ")),
    }
}

fn trace_doc(trace: &[TraceStep]) -> Value {
    Value::Array(trace.iter().map(|s| json!({ "step": s.step, "detail": s.detail })).collect())
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

pub fn cmd_validate(cfg: &RunConfig, src: &str) -> Report {
    let d = match load_skeleton(cfg, src) {
        Ok(d) => d,
        Err(r) => return r,
    };
    match validate(&d) {
        Ok(r) => Report {
            code: EXIT_OK,
            doc: json!({
                "valid": true,
                "deg_D": r.deg_d,
                "deg_residue": r.deg_residue,
                "image_order": r.image_order,
                "sqrt_kernel_index": r.sqrt_kernel_index,
                "center_degree": r.center_degree,
                "value_index": r.value_index,
                "deg_routes": r.deg_routes,
            }),
            text: format!(
                "valid: deg D = {} (deg D̄ = {}, |im θ| = {}, √|ker θ : Γ_F| = {})",
                r.deg_d, r.deg_residue, r.image_order, r.sqrt_kernel_index
            ),
        },
        Err(e) => violation_report(&e),
    }
}

fn piece_doc(p: &TowerPiece) -> Value {
    json!({ "gamma": to_value(&p.gamma.to_doc()), "residue_dim": p.residue_dim, "dim": p.dim })
}

pub fn cmd_canonical(cfg: &RunConfig, src: &str) -> Report {
    let d = match load_skeleton(cfg, src) {
        Ok(d) => d,
        Err(r) => return r,
    };
    match canonical_tower(&d) {
        Ok(t) => Report {
            code: EXIT_OK,
            doc: json!({
                "U": piece_doc(&t.u),
                "Z": piece_doc(&t.z),
                "C": piece_doc(&t.c),
                "E": piece_doc(&t.e),
                "deg_C": t.deg_c,
                "index_D_over_E": t.d_over_e,
            }),
            text: format!(
                "[U:F] = {}, [Z:F] = {}, [C:F] = {}, [E:F] = {}, deg C = {}",
                t.u.dim, t.z.dim, t.c.dim, t.e.dim, t.deg_c
            ),
        },
        Err(e) => violation_report(&e),
    }
}

fn subfield_doc(m: &SubfieldSkeleton) -> Value {
    let residue = match &m.residue_part {
        ResiduePart::Field(l) => json!({ "field": to_value(&l.to_doc()) }),
        ResiduePart::Abstract { degree, meet_center, galois, normal } => json!({
            "degree": degree, "meet_center": meet_center, "galois": galois, "normal": normal
        }),
    };
    json!({
        "residue": residue,
        "gamma": to_value(&m.gamma.to_doc()),
        "tame": m.flags.tame,
        "normal": m.flags.normal,
        "galois": m.flags.galois,
        "assumed_realizable": m.assumed_realizable,
    })
}

pub fn cmd_crossed(cfg: &RunConfig, src: &str) -> Report {
    let d = match load_skeleton(cfg, src) {
        Ok(d) => d,
        Err(r) => return r,
    };
    let v = match crossed_product_test(&d, &cfg.bounds) {
        Ok(v) => v,
        Err(e) => return violation_report(&e),
    };
    let (name, code, bound) = match v.verdict {
        Verdict::Crossed => ("Crossed", EXIT_OK, None),
        Verdict::Unknown { bound } => ("Unknown", EXIT_BOUNDED, Some(bound)),
    };
    let mut doc = json!({ "verdict": name, "rationale": v.rationale.tag() });
    if let Some(b) = bound {
        doc["bound"] = json!(b);
    }
    if let Some(w) = &v.witness {
        doc["witness"] = json!({
            "cover": w.cover.as_ref().map(|l| to_value(&l.to_doc())),
            "subfield": subfield_doc(&w.subfield),
        });
    }
    if cfg.trace {
        doc["notes"] = json!(v.notes);
    }
    Report { code, doc, text: format!("{name} ({})", v.rationale.tag()) }
}

fn load_fiber(src: &str) -> Result<Fiber, Report> {
    let doc: FiberDoc = parse_doc(src, "fiber").map_err(Report::input_error)?;
    Fiber::from_doc(&doc).map_err(|e| Report::input_error(e.to_string()))
}

fn places_doc(v: &[QPlace]) -> Value {
    Value::Array(v.iter().map(to_value).collect())
}

fn witness_doc(w: &Witness, trace: bool) -> Value {
    let mut doc = json!({
        "m": w.m,
        "gamma": to_value(&w.gamma.to_doc()),
        "alpha": to_value(&w.alpha.to_doc()),
        "T": places_doc(&w.t),
        "S": places_doc(&w.s),
        "S_prime": places_doc(&w.s_prime),
        "refutation": { "conductor_bound": w.refutation.conductor_bound, "nonvacuous": w.refutation.nonvacuous },
    });
    if trace {
        doc["trace"] = trace_doc(&w.trace);
    }
    doc
}

pub fn cmd_classify_fiber(cfg: &RunConfig, src: &str) -> Report {
    let fiber = match load_fiber(src) {
        Ok(f) => f,
        Err(r) => return r,
    };
    let v = match classify(&fiber, &cfg.bounds) {
        Ok(v) => v,
        Err(e) => return location_error(e),
    };
    let mut doc = json!({ "status": v.status.name() });
    let code = match v.status {
        FiberStatus::Unknown { bound } => {
            doc["bound"] = json!(bound);
            EXIT_BOUNDED
        }
        _ => EXIT_OK,
    };
    let bounds: serde_json::Map<String, Value> = v
        .bounds
        .values()
        .map(|b| (b.p.to_string(), json!({ "n_p": b.n_p, "case": to_value(&b.case) })))
        .collect();
    doc["bounds"] = Value::Object(bounds);
    if let Some(w) = &v.witness {
        doc["witness"] = witness_doc(w, cfg.trace);
    }
    if cfg.trace {
        doc["trace"] = trace_doc(&v.trace);
    }
    let mut text = v.status.name().to_string();
    for b in v.bounds.values() {
        text.push_str(&format!(", n{}={}", b.p, b.n_p));
    }
    Report { code, doc, text }
}

fn location_error(e: LocationError) -> Report {
    let code = match e {
        LocationError::WitnessBound { .. } | LocationError::Undetermined(_) | LocationError::ScanBound(_) => {
            EXIT_BOUNDED
        }
        _ => EXIT_INPUT,
    };
    let msg = e.to_string();
    Report { code, doc: json!({ "error": msg }), text: format!("error: {msg}") }
}

pub fn cmd_witness(cfg: &RunConfig, src: &str, m: u64, exclude: &[QPlace]) -> Report {
    let fiber = match load_fiber(src) {
        Ok(f) => f,
        Err(r) => return r,
    };
    let exclude: BTreeSet<QPlace> = exclude.iter().copied().collect();
    match witness_noncrossed(&fiber, m, &cfg.bounds, &exclude) {
        Ok(w) => Report { code: EXIT_OK, doc: witness_doc(&w, cfg.trace), text: format!("γ = {}", w.gamma) },
        Err(e) => location_error(e),
    }
}

/// `Z` is given inline as JSON or as a path to a document.
pub fn load_field(src: &str) -> Result<AbelianExtQ, String> {
    let doc: AbelianExtDoc = parse_doc(src, "field")?;
    AbelianExtQ::from_doc(&doc).map_err(|e| e.to_string())
}

/// `p:d` or `inf:d`.
pub fn parse_demand(s: &str) -> Result<(QPlace, u64), String> {
    let (v, d) = s.split_once(':').ok_or_else(|| format!("demand {s:?}: expected place:degree"))?;
    let v: QPlace = v.parse().map_err(|e| format!("demand {s:?}: {e}"))?;
    let d: u64 = d.parse().map_err(|e| format!("demand {s:?}: {e}"))?;
    Ok((v, d))
}

pub fn cmd_cover_search(cfg: &RunConfig, z: &AbelianExtQ, m: u64, demands: &[(QPlace, u64)], cyclic: bool) -> Report {
    match cover_search(z, m, demands, cyclic, cfg.bounds.conductor) {
        Ok(l) => {
            let local: Vec<Value> =
                demands.iter().map(|&(v, _)| json!([to_value(&v), l.local_degree(v)])).collect();
            Report {
                code: EXIT_OK,
                doc: json!({ "cover": to_value(&l.to_doc()), "degree": l.degree(), "local_degrees": local }),
                text: format!("cover: {l}"),
            }
        }
        Err(e) => {
            let msg = e.to_string();
            let mut rationale = format!("no cover found: {msg}");
            if demands.iter().any(|&(v, d)| v == QPlace::Infinite && d > 2) {
                rationale = "archimedean local degrees are at most 2".into();
            }
            Report {
                code: EXIT_BOUNDED,
                doc: json!({ "cover": Value::Null, "bound": cfg.bounds.conductor, "rationale": rationale }),
                text: format!("no cover: {rationale}"),
            }
        }
    }
}
