//! JSON encodings of posets, intervals, modules, morphisms, resolutions,
//! zigzags and compressed profiles.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::approx::{IntervalResolution, SoundnessReport};
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalPoset, StairRow};
use crate::ladder::{CompressedProfile, ZigzagModule};
use crate::linalg::{Field, FpMatrix};
use crate::module::{ModuleMorphism, PersistenceModule};
use crate::poset::{Poset, VertexSet};

fn bad(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field \"{key}\"")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| bad(format!("{what} must be a nonnegative integer")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(format!("{what} must be a string")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

pub fn poset_to_json(p: &Poset) -> Value {
    if let Some((m, n)) = p.grid_shape() {
        return json!({"kind": "grid", "m": m, "n": n});
    }
    let edges: Vec<Value> = p
        .edges()
        .iter()
        .map(|&(a, b)| json!([p.label(a), p.label(b)]))
        .collect();
    json!({"kind": "hasse", "elements": p.labels(), "edges": edges})
}

pub fn poset_from_json(v: &Value) -> Result<Poset> {
    match as_str(get(v, "kind")?, "kind")? {
        "grid" => Poset::grid(as_usize(get(v, "m")?, "m")?, as_usize(get(v, "n")?, "n")?),
        "chain" => Poset::chain(as_usize(get(v, "n")?, "n")?),
        "hasse" => {
            let labels = as_array(get(v, "elements")?, "elements")?
                .iter()
                .map(|l| as_str(l, "element").map(str::to_owned))
                .collect::<Result<Vec<_>>>()?;
            let edges = as_array(get(v, "edges")?, "edges")?
                .iter()
                .map(|e| match e.as_array().map(Vec::as_slice) {
                    Some([a, b]) => Ok((as_str(a, "edge end")?.to_owned(), as_str(b, "edge end")?.to_owned())),
                    _ => Err(bad("edges must be pairs of labels")),
                })
                .collect::<Result<Vec<_>>>()?;
            Poset::from_hasse(labels, &edges)
        }
        other => Err(bad(format!("unknown poset kind \"{other}\""))),
    }
}

pub fn matrix_to_json(m: &FpMatrix) -> Value {
    Value::Array(m.row_iter().map(|r| json!(r)).collect())
}

/// Parse a row-major matrix of the given shape. An empty array is accepted
/// for any shape with no entries.
pub fn matrix_from_json(v: &Value, field: Field, rows: usize, cols: usize) -> Result<FpMatrix> {
    let arr = as_array(v, "matrix")?;
    if arr.is_empty() && rows * cols == 0 {
        return Ok(FpMatrix::zeros(field, rows, cols));
    }
    let entries = arr
        .iter()
        .map(|r| {
            as_array(r, "matrix row")?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| bad("matrix entries must be integers")))
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    FpMatrix::from_rows(field, rows, cols, &entries)
}

pub fn interval_to_json(p: &Poset, iv: &Interval) -> Value {
    let mut obj = Map::new();
    obj.insert("members".into(), json!(p.set_labels(iv.members())));
    if let Some(rows) = iv.staircase() {
        let st: Vec<Value> = rows.iter().map(|r| json!([r.row, r.start, r.end])).collect();
        obj.insert("staircase".into(), Value::Array(st));
    }
    Value::Object(obj)
}

/// Accepts `{"members": [labels]}` or, on grids, `{"staircase": [[row, b, d], ...]}`.
pub fn interval_from_json(p: &Poset, v: &Value) -> Result<Interval> {
    if let Some(members) = v.get("members") {
        let mut s = VertexSet::EMPTY;
        for l in as_array(members, "members")? {
            let label = as_str(l, "member")?;
            s.insert(p.index_of(label).ok_or_else(|| bad(format!("unknown vertex {label}")))?);
        }
        return Interval::new(p, s);
    }
    let rows = as_array(get(v, "staircase")?, "staircase")?
        .iter()
        .map(|r| match r.as_array().map(Vec::as_slice) {
            Some([a, b, c]) => Ok(StairRow {
                row: as_usize(a, "row")?,
                start: as_usize(b, "start")?,
                end: as_usize(c, "end")?,
            }),
            _ => Err(bad("staircase rows are [row, start, end]")),
        })
        .collect::<Result<Vec<_>>>()?;
    Interval::from_staircase(p, &rows)
}

fn edge_key(p: &Poset, a: usize, b: usize) -> String {
    format!("{}->{}", p.label(a), p.label(b))
}

pub fn module_to_json(m: &PersistenceModule) -> Value {
    let p = m.poset();
    let dims: Map<String, Value> = (0..p.len()).map(|x| (p.label(x).to_owned(), json!(m.dim(x)))).collect();
    let maps: Map<String, Value> = p
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(a, b))| (edge_key(p, a, b), matrix_to_json(m.edge_map(e))))
        .collect();
    json!({
        "poset": poset_to_json(p),
        "field": m.field().modulus(),
        "dims": dims,
        "maps": maps,
    })
}

/// Missing dimensions default to 0 and missing maps to zero matrices.
pub fn module_from_json(v: &Value) -> Result<PersistenceModule> {
    let p = Arc::new(poset_from_json(get(v, "poset")?)?);
    let field = match v.get("field") {
        Some(f) => Field::new(as_usize(f, "field")? as u32)?,
        None => Field::f2(),
    };
    module_from_json_on(v, &p, field)
}

fn module_from_json_on(v: &Value, p: &Arc<Poset>, field: Field) -> Result<PersistenceModule> {
    let mut dims = vec![0; p.len()];
    if let Some(d) = v.get("dims") {
        let d = d.as_object().ok_or_else(|| bad("dims must be an object"))?;
        for (label, val) in d {
            let x = p.index_of(label).ok_or_else(|| bad(format!("unknown vertex {label}")))?;
            dims[x] = as_usize(val, "dimension")?;
        }
    }
    let given = match v.get("maps") {
        Some(m) => m.as_object().ok_or_else(|| bad("maps must be an object"))?.clone(),
        None => Map::new(),
    };
    for key in given.keys() {
        let known = p.edges().iter().any(|&(a, b)| edge_key(p, a, b) == *key);
        if !known {
            return Err(bad(format!("\"{key}\" is not a Hasse edge")));
        }
    }
    let maps = p
        .edges()
        .iter()
        .map(|&(a, b)| match given.get(&edge_key(p, a, b)) {
            Some(mv) => matrix_from_json(mv, field, dims[b], dims[a]),
            None => Ok(FpMatrix::zeros(field, dims[b], dims[a])),
        })
        .collect::<Result<Vec<_>>>()?;
    PersistenceModule::new(p.clone(), field, dims, maps)
}

pub fn morphism_to_json(f: &ModuleMorphism) -> Value {
    let p = f.source.poset();
    let comps: Map<String, Value> = (0..p.len())
        .map(|x| (p.label(x).to_owned(), matrix_to_json(&f.components[x])))
        .collect();
    json!({
        "source": module_to_json(&f.source),
        "target": module_to_json(&f.target),
        "components": comps,
    })
}

pub fn morphism_from_json(v: &Value) -> Result<ModuleMorphism> {
    let source = Arc::new(module_from_json(get(v, "source")?)?);
    let p = source.poset().clone();
    let target = Arc::new(module_from_json_on(get(v, "target")?, &p, source.field())?);
    let comps = get(v, "components")?
        .as_object()
        .ok_or_else(|| bad("components must be an object"))?;
    let components = (0..p.len())
        .map(|x| {
            let (r, c) = (target.dim(x), source.dim(x));
            match comps.get(p.label(x)) {
                Some(m) => matrix_from_json(m, source.field(), r, c),
                None => Ok(FpMatrix::zeros(source.field(), r, c)),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ModuleMorphism::new(source, target, components)
}

pub fn resolution_to_json(res: &IntervalResolution, ip: &IntervalPoset, checks: Option<&SoundnessReport>) -> Value {
    let p = ip.poset();
    let table: Vec<Value> = res
        .table(ip.len())
        .into_iter()
        .enumerate()
        .filter(|(_, mults)| mults.iter().any(|&d| d > 0))
        .map(|(j, mults)| json!({"interval": interval_to_json(p, ip.get(j)), "mults": mults}))
        .collect();
    let mut obj = Map::new();
    obj.insert("length".into(), json!(res.length));
    obj.insert("table".into(), Value::Array(table));
    if let Some(c) = checks {
        obj.insert(
            "checks".into(),
            json!({
                "exact": c.exact,
                "surjective": c.surjective,
                "approximation": c.approximation,
                "violations": c.violations,
            }),
        );
    }
    Value::Object(obj)
}

pub fn zigzag_to_json(z: &ZigzagModule) -> Value {
    let maps: Map<String, Value> = (0..4)
        .map(|k| (format!("alpha{}", k + 1), matrix_to_json(z.map(k))))
        .collect();
    json!({"dims": z.dims(), "maps": maps})
}

pub fn profile_to_json(prof: &CompressedProfile, ip: &IntervalPoset) -> Value {
    let p = ip.poset();
    let entry = |j: usize, v: Value| json!({"interval": interval_to_json(p, ip.get(j)), "value": v});
    json!({
        "c": (0..ip.len()).map(|j| entry(j, json!(prof.c[j]))).collect::<Vec<_>>(),
        "delta": (0..ip.len()).map(|j| entry(j, json!(prof.delta[j]))).collect::<Vec<_>>(),
    })
}
