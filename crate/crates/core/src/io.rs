//! Text format for networks and JSON for representations.
//!
//! ```text
//! # comment
//! L: a,b,c
//! N u
//! N a
//! LBL a a
//! U u v
//! D u a
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Network, NetworkBuilder};
use crate::murep::{EdgeMuSet, MuRep, MuVector, Tag, TaggedMu};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_network(text: &str) -> Result<Network> {
    let mut builder: Option<NetworkBuilder> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some(b) = builder.as_mut() else {
            let rest = line.strip_prefix("L:").ok_or_else(|| perr(line_no, "expected `L:` label line first"))?;
            let labels: Vec<&str> = rest.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            builder = Some(NetworkBuilder::new(labels).map_err(|e| perr(line_no, e.to_string()))?);
            continue;
        };
        let toks: Vec<&str> = line.split_whitespace().collect();
        let node = |b: &NetworkBuilder, name: &str| {
            b.lookup(name).ok_or_else(|| perr(line_no, format!("unknown node {name}")))
        };
        let wrap = |e: Error| perr(line_no, e.to_string());
        match toks.as_slice() {
            ["N", id] => {
                b.add_node(*id).map_err(wrap)?;
            }
            ["LBL", id, label] => {
                let v = node(b, id)?;
                b.set_label(v, label).map_err(wrap)?;
            }
            ["U", x, y] => {
                let (u, v) = (node(b, x)?, node(b, y)?);
                b.undirected(u, v).map_err(wrap)?;
            }
            ["D", x, y] => {
                let (u, v) = (node(b, x)?, node(b, y)?);
                b.directed(u, v).map_err(wrap)?;
            }
            _ => return Err(perr(line_no, format!("malformed line `{line}`"))),
        }
    }
    match builder {
        Some(b) => Ok(b.build()),
        None => Err(perr(0, "missing `L:` label line")),
    }
}

pub fn serialize_network(n: &Network) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "L: {}", n.labels().join(","));
    for v in n.nodes() {
        let _ = writeln!(s, "N {}", n.name(v));
    }
    for v in n.nodes() {
        if let Some(l) = n.label(v) {
            let _ = writeln!(s, "LBL {} {}", n.name(v), l);
        }
    }
    for e in n.edges() {
        let k = if e.is_directed() { "D" } else { "U" };
        let _ = writeln!(s, "{} {} {}", k, n.name(e.u), n.name(e.v));
    }
    s
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MemberJson {
    mu: Vec<u64>,
    tag: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementJson {
    set: Vec<MemberJson>,
    count: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepJson {
    labels: Vec<String>,
    elements: Vec<ElementJson>,
}

/// Pretty JSON with a trailing newline, elements in canonical order.
pub fn murep_to_json(rep: &MuRep) -> String {
    let doc = RepJson {
        labels: rep.labels().to_vec(),
        elements: rep
            .elements()
            .iter()
            .map(|(s, c)| ElementJson {
                set: s.members().iter().map(|m| MemberJson { mu: m.mu.0.clone(), tag: m.tag.as_str().into() }).collect(),
                count: *c,
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    out.push('\n');
    out
}

pub fn murep_from_json(text: &str) -> Result<MuRep> {
    let doc: RepJson = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    let mut counted = Vec::with_capacity(doc.elements.len());
    for el in doc.elements {
        if el.count == 0 {
            return Err(Error::Json("element count must be positive".into()));
        }
        let members = el
            .set
            .into_iter()
            .map(|m| {
                let tag = Tag::parse(&m.tag).ok_or_else(|| Error::Json(format!("unknown tag `{}`", m.tag)))?;
                Ok(TaggedMu { mu: MuVector(m.mu), tag })
            })
            .collect::<Result<Vec<_>>>()?;
        let set = EdgeMuSet::from_members(members).map_err(|e| Error::Json(e.to_string()))?;
        counted.push((set, el.count));
    }
    MuRep::from_counts(doc.labels, counted).map_err(|e| Error::Json(e.to_string()))
}

/// Edge lengths for the weighted distance: lines `N1 <edge> <len>` and
/// `N2 <edge> <len>`, edge indices in file order from zero.
pub fn parse_lengths(text: &str, edges1: usize, edges2: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut l1: Vec<Option<f64>> = vec![None; edges1];
    let mut l2: Vec<Option<f64>> = vec![None; edges2];
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [which, idx, len] = toks.as_slice() else {
            return Err(perr(line_no, format!("malformed line `{line}`")));
        };
        let target = match *which {
            "N1" => &mut l1,
            "N2" => &mut l2,
            _ => return Err(perr(line_no, format!("expected N1 or N2, got `{which}`"))),
        };
        let idx: usize = idx.parse().map_err(|_| perr(line_no, format!("bad edge index `{idx}`")))?;
        let len: f64 = len.parse().map_err(|_| perr(line_no, format!("bad length `{len}`")))?;
        let slot = target.get_mut(idx).ok_or_else(|| perr(line_no, format!("edge index {idx} out of range")))?;
        if slot.is_some() {
            return Err(perr(line_no, format!("edge {idx} given twice")));
        }
        *slot = Some(len);
    }
    let finish = |v: Vec<Option<f64>>| -> Result<Vec<f64>> {
        v.iter().enumerate().map(|(i, x)| x.ok_or(Error::MissingLength(i))).collect()
    };
    Ok((finish(l1)?, finish(l2)?))
}
