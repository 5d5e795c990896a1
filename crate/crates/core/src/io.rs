//! JSON documents: hypergraphs, number functions, amalgamation maps,
//! factorizations and split instances. Parse errors name the offending
//! path, e.g. `$.edges[2].hinges[0].vertex`.

use std::collections::{BTreeMap, BTreeSet};

use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};

use crate::design::{DesignSpec, DistributionMatrix, FactorSpec};
use crate::error::{Error, Result};
use crate::factorize::{FactorKind, Factorization};
use crate::hypergraph::{AmalgamationMap, EdgeId, Hypergraph, NumberFunction, VertexId};
use crate::laminar::LaminarFamily;

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| schema("$", format!("malformed JSON: {e}")))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(path, format!("missing field \"{key}\"")))
}

fn uint(v: &Value, path: &str) -> Result<u32> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| schema(path, "expected a non-negative 32-bit integer"))
}

fn typed<T: DeserializeOwned>(v: &Value, path: &str) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| schema(path, e.to_string()))
}

fn at(path: &str) -> impl FnOnce(Error) -> Error + '_ {
    move |e| match e {
        Error::Schema { .. } => e,
        other => schema(path, other.to_string()),
    }
}

/// `{"vertices": [...], "colors"?: k, "edges": [{"id", "color"?, "hinges": [{"vertex"}]}]}`
pub fn hypergraph_from_value(v: &Value, path: &str) -> Result<Hypergraph> {
    let obj = object(v, path)?;
    let colors = match obj.get("colors") {
        None | Some(Value::Null) => None,
        Some(c) => Some(uint(c, &format!("{path}.colors"))?),
    };
    let mut g = match colors {
        Some(k) => Hypergraph::colored(k),
        None => Hypergraph::new(),
    };
    let vpath = format!("{path}.vertices");
    for (i, x) in array(field(obj, "vertices", path)?, &vpath)?.iter().enumerate() {
        let p = format!("{vpath}[{i}]");
        g.add_vertex(VertexId(uint(x, &p)?)).map_err(at(&p))?;
    }
    let epath = format!("{path}.edges");
    for (i, e) in array(field(obj, "edges", path)?, &epath)?.iter().enumerate() {
        let p = format!("{epath}[{i}]");
        let eobj = object(e, &p)?;
        let id = EdgeId(uint(field(eobj, "id", &p)?, &format!("{p}.id"))?);
        let color = match eobj.get("color") {
            None | Some(Value::Null) => None,
            Some(c) => Some(uint(c, &format!("{p}.color"))?),
        };
        let hpath = format!("{p}.hinges");
        let mut hinges = Vec::new();
        for (o, h) in array(field(eobj, "hinges", &p)?, &hpath)?.iter().enumerate() {
            let hp = format!("{hpath}[{o}]");
            let hobj = object(h, &hp)?;
            hinges.push(VertexId(uint(field(hobj, "vertex", &hp)?, &format!("{hp}.vertex"))?));
        }
        g.add_edge(id, hinges, color).map_err(at(&p))?;
    }
    Ok(g)
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    hypergraph_from_value(&parse_json(text)?, "$")
}

pub fn hypergraph_to_value(g: &Hypergraph) -> Value {
    let edges: Vec<Value> = g
        .edges()
        .map(|(id, e)| {
            let mut m = Map::new();
            m.insert("id".into(), json!(id.0));
            if let Some(c) = e.color() {
                m.insert("color".into(), json!(c));
            }
            let hinges: Vec<Value> = e.hinges().iter().map(|v| json!({ "vertex": v.0 })).collect();
            m.insert("hinges".into(), Value::Array(hinges));
            Value::Object(m)
        })
        .collect();
    let mut m = Map::new();
    m.insert("vertices".into(), json!(g.vertices().map(|v| v.0).collect::<Vec<_>>()));
    if let Some(k) = g.num_colors() {
        m.insert("colors".into(), json!(k));
    }
    m.insert("edges".into(), Value::Array(edges));
    Value::Object(m)
}

fn vertex_key(key: &str, path: &str) -> Result<VertexId> {
    key.parse::<u32>()
        .map(VertexId)
        .map_err(|_| schema(path, format!("key \"{key}\" is not a vertex id")))
}

/// `{"<vertex>": g, ...}`
pub fn number_function_from_value(v: &Value, path: &str) -> Result<NumberFunction> {
    let mut values = BTreeMap::new();
    for (k, x) in object(v, path)? {
        let p = format!("{path}.{k}");
        values.insert(vertex_key(k, &p)?, uint(x, &p)?);
    }
    NumberFunction::new(values).map_err(at(path))
}

pub fn number_function_to_value(g: &NumberFunction) -> Value {
    Value::Object(g.iter().map(|(v, n)| (v.0.to_string(), json!(n))).collect())
}

/// `{"<detached vertex>": <original vertex>, ...}`
pub fn psi_from_value(v: &Value, path: &str) -> Result<AmalgamationMap> {
    let mut map = BTreeMap::new();
    for (k, x) in object(v, path)? {
        let p = format!("{path}.{k}");
        map.insert(vertex_key(k, &p)?, VertexId(uint(x, &p)?));
    }
    Ok(AmalgamationMap::new(map))
}

pub fn psi_to_value(psi: &AmalgamationMap) -> Value {
    Value::Object(psi.iter().map(|(w, u)| (w.0.to_string(), json!(u.0))).collect())
}

/// `{"hypergraph": ..., "psi": ...}`
pub fn detachment_to_value(g: &Hypergraph, psi: &AmalgamationMap) -> Value {
    json!({ "hypergraph": hypergraph_to_value(g), "psi": psi_to_value(psi) })
}

pub fn detachment_from_value(v: &Value) -> Result<(Hypergraph, AmalgamationMap)> {
    let obj = object(v, "$")?;
    Ok((
        hypergraph_from_value(field(obj, "hypergraph", "$")?, "$.hypergraph")?,
        psi_from_value(field(obj, "psi", "$")?, "$.psi")?,
    ))
}

fn parts_to_value(parts: &[Vec<VertexId>]) -> Value {
    json!(parts.iter().map(|p| p.iter().map(|v| v.0).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn parts_from_value(v: &Value, path: &str) -> Result<Vec<Vec<VertexId>>> {
    let raw: Vec<Vec<u32>> = typed(v, path)?;
    Ok(raw.into_iter().map(|p| p.into_iter().map(VertexId).collect()).collect())
}

/// A factorization together with the specs it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationDoc {
    pub spec: DesignSpec,
    pub factors: FactorSpec,
    pub factorization: Factorization,
}

pub fn factorization_to_value(doc: &FactorizationDoc) -> Value {
    let f = &doc.factorization;
    let degrees: Vec<Value> = f
        .degree_table()
        .iter()
        .enumerate()
        .map(|(i, d)| {
            json!({
                "factor": i + 1,
                "degrees": Value::Object(d.iter().map(|(v, x)| (v.0.to_string(), json!(x))).collect()),
            })
        })
        .collect();
    let mut m = Map::new();
    m.insert("kind".into(), json!(f.kind));
    m.insert("spec".into(), json!(doc.spec));
    m.insert("factors".into(), json!(doc.factors));
    m.insert("matrix".into(), json!(f.matrix));
    m.insert("design".into(), hypergraph_to_value(&f.design));
    if let Some(parts) = &f.parts {
        m.insert("parts".into(), parts_to_value(parts));
    }
    m.insert("degrees".into(), Value::Array(degrees));
    Value::Object(m)
}

pub fn factorization_from_value(v: &Value) -> Result<FactorizationDoc> {
    let obj = object(v, "$")?;
    let kind: FactorKind = typed(field(obj, "kind", "$")?, "$.kind")?;
    let spec: DesignSpec = typed(field(obj, "spec", "$")?, "$.spec")?;
    let factors: FactorSpec = typed(field(obj, "factors", "$")?, "$.factors")?;
    let matrix: DistributionMatrix = typed(field(obj, "matrix", "$")?, "$.matrix")?;
    let design = hypergraph_from_value(field(obj, "design", "$")?, "$.design")?;
    let parts = match obj.get("parts") {
        None | Some(Value::Null) => None,
        Some(p) => Some(parts_from_value(p, "$.parts")?),
    };
    Ok(FactorizationDoc {
        spec,
        factors,
        factorization: Factorization {
            kind,
            design,
            parts,
            matrix,
        },
    })
}

/// `{"spec": ..., "design": ..., "parts"?: ...}`; a factorization document
/// also qualifies.
/// A design document: its spec, the hypergraph, and the parts if given.
pub type DesignDoc = (DesignSpec, Hypergraph, Option<Vec<Vec<VertexId>>>);

pub fn design_from_value(v: &Value) -> Result<DesignDoc> {
    let obj = object(v, "$")?;
    let spec: DesignSpec = typed(field(obj, "spec", "$")?, "$.spec")?;
    let design = hypergraph_from_value(field(obj, "design", "$")?, "$.design")?;
    let parts = match obj.get("parts") {
        None | Some(Value::Null) => None,
        Some(p) => Some(parts_from_value(p, "$.parts")?),
    };
    Ok((spec, design, parts))
}

/// `{"ground": [...], "familyA": [[...]], "familyB": [[...]], "n": k}`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitInstance {
    pub ground: BTreeSet<usize>,
    pub a: LaminarFamily,
    pub b: LaminarFamily,
    pub n: usize,
}

pub fn split_from_value(v: &Value) -> Result<SplitInstance> {
    let obj = object(v, "$")?;
    Ok(SplitInstance {
        ground: typed(field(obj, "ground", "$")?, "$.ground")?,
        a: typed(field(obj, "familyA", "$")?, "$.familyA")?,
        b: typed(field(obj, "familyB", "$")?, "$.familyB")?,
        n: typed(field(obj, "n", "$")?, "$.n")?,
    })
}

/// Pretty-printed with sorted keys and a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
