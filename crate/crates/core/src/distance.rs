//! The dissimilarity between two representations and its weighted variant.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::Network;
use crate::murep::{self, EdgeMuSet, MuRep, Shape, Tag};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceResult {
    pub value: usize,
    pub left_only: MuRep,
    pub right_only: MuRep,
}

fn by_shape(rep: &MuRep) -> [Vec<(&EdgeMuSet, usize)>; 4] {
    let mut g: [Vec<(&EdgeMuSet, usize)>; 4] = Default::default();
    for (s, c) in rep.elements() {
        let k = match s.shape() {
            Shape::Root => 0,
            Shape::Tree => 1,
            Shape::Hybrid => 2,
            Shape::Pair => 3,
        };
        g[k].push((s, *c));
    }
    g
}

/// Symmetric difference of two representations over the same labels.
pub fn rep_distance(a: &MuRep, b: &MuRep) -> Result<DistanceResult> {
    if a.labels() != b.labels() {
        return Err(Error::LabelMismatch);
    }
    let (ga, gb) = (by_shape(a), by_shape(b));
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (xs, ys) in ga.iter().zip(gb.iter()) {
        let (mut i, mut j) = (0, 0);
        while i < xs.len() || j < ys.len() {
            let ord = match (xs.get(i), ys.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(y.0),
                (Some(_), None) => Ordering::Less,
                (None, _) => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    left.push((xs[i].0.clone(), xs[i].1));
                    i += 1;
                }
                Ordering::Greater => {
                    right.push((ys[j].0.clone(), ys[j].1));
                    j += 1;
                }
                Ordering::Equal => {
                    let (cx, cy) = (xs[i].1, ys[j].1);
                    match cx.cmp(&cy) {
                        Ordering::Greater => left.push((xs[i].0.clone(), cx - cy)),
                        Ordering::Less => right.push((ys[j].0.clone(), cy - cx)),
                        Ordering::Equal => {}
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    let left_only = MuRep::from_counts(a.labels().to_vec(), left)?;
    let right_only = MuRep::from_counts(b.labels().to_vec(), right)?;
    Ok(DistanceResult { value: left_only.len() + right_only.len(), left_only, right_only })
}

pub fn d_mu_e(n1: &Network, n2: &Network) -> Result<DistanceResult> {
    if n1.labels() != n2.labels() {
        return Err(Error::LabelMismatch);
    }
    rep_distance(&murep::mu_edge_rep(n1)?, &murep::mu_edge_rep(n2)?)
}

fn check_lengths(n: &Network, lengths: &[f64]) -> Result<()> {
    if lengths.len() < n.edge_count() {
        return Err(Error::MissingLength(lengths.len()));
    }
    if lengths.len() > n.edge_count() {
        return Err(Error::InvalidLength(format!(
            "{} lengths for {} edges",
            lengths.len(),
            n.edge_count()
        )));
    }
    for &l in lengths {
        if !l.is_finite() || l < 0.0 {
            return Err(Error::InvalidLength(l.to_string()));
        }
    }
    Ok(())
}

fn length_runs(n: &Network, lengths: &[f64]) -> Result<BTreeMap<EdgeMuSet, Vec<f64>>> {
    let sets = murep::edge_sets(n)?;
    let mut runs: BTreeMap<EdgeMuSet, Vec<f64>> = BTreeMap::new();
    for (s, &l) in sets.edges.into_iter().zip(lengths) {
        runs.entry(s).or_default().push(l);
    }
    for v in runs.values_mut() {
        v.sort_by(|a, b| a.total_cmp(b));
    }
    Ok(runs)
}

/// Sum of |l1 - l2|^p over edge sets. Root sets weigh nothing. Within a run
/// of equal sets the sorted lengths are paired index by index and any
/// leftover lengths are compared against zero.
pub fn weighted_d(n1: &Network, n2: &Network, lengths1: &[f64], lengths2: &[f64], p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p.to_string()));
    }
    if n1.labels() != n2.labels() {
        return Err(Error::LabelMismatch);
    }
    check_lengths(n1, lengths1)?;
    check_lengths(n2, lengths2)?;
    let r1 = length_runs(n1, lengths1)?;
    let r2 = length_runs(n2, lengths2)?;
    let empty = Vec::new();
    let mut total = 0.0;
    let keys: std::collections::BTreeSet<&EdgeMuSet> = r1.keys().chain(r2.keys()).collect();
    for k in keys {
        if k.members()[0].tag == Tag::R {
            continue;
        }
        let a = r1.get(k).unwrap_or(&empty);
        let b = r2.get(k).unwrap_or(&empty);
        for i in 0..a.len().max(b.len()) {
            let x = a.get(i).copied().unwrap_or(0.0);
            let y = b.get(i).copied().unwrap_or(0.0);
            total += (x - y).abs().powf(p);
        }
    }
    Ok(total)
}

/// The distance on trees; refuses inputs with hybrid edges.
pub fn rf_check(t1: &Network, t2: &Network) -> Result<usize> {
    for t in [t1, t2] {
        if t.classify_elements().hybrid_edges().next().is_some() {
            return Err(Error::HasHybridEdges);
        }
    }
    Ok(d_mu_e(t1, t2)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::NetworkBuilder;

    fn cherry_rooted() -> Network {
        let mut b = NetworkBuilder::new(["a", "b"]).unwrap();
        let r = b.add_node("r").unwrap();
        let a = b.leaf("a").unwrap();
        let c = b.leaf("b").unwrap();
        b.directed(r, a).unwrap();
        b.directed(r, c).unwrap();
        b.build()
    }

    #[test]
    fn weighted_examples() {
        let t = cherry_rooted();
        assert_eq!(weighted_d(&t, &t, &[1.0, 1.0], &[1.0, 1.0], 1.0).unwrap(), 0.0);
        assert_eq!(weighted_d(&t, &t, &[1.0, 1.0], &[1.0, 3.0], 1.0).unwrap(), 2.0);
        assert_eq!(weighted_d(&t, &t, &[1.0, 1.0], &[1.0, 3.0], 2.0).unwrap(), 4.0);
    }

    #[test]
    fn weighted_errors() {
        let t = cherry_rooted();
        assert!(matches!(weighted_d(&t, &t, &[1.0], &[1.0, 1.0], 1.0), Err(Error::MissingLength(1))));
        assert!(matches!(weighted_d(&t, &t, &[1.0, 1.0], &[1.0, 1.0], 0.5), Err(Error::InvalidExponent(_))));
        assert!(matches!(weighted_d(&t, &t, &[1.0, -1.0], &[1.0, 1.0], 1.0), Err(Error::InvalidLength(_))));
    }

    #[test]
    fn weighted_multiplicity_runs() {
        // r -> x -> a with r -> b: two edges share the set {(1,0),t}.
        let mut b = NetworkBuilder::new(["a", "b"]).unwrap();
        let r = b.add_node("r").unwrap();
        let x = b.add_node("x").unwrap();
        let a = b.leaf("a").unwrap();
        let c = b.leaf("b").unwrap();
        b.directed(r, x).unwrap();
        b.directed(x, a).unwrap();
        b.directed(r, c).unwrap();
        let n = b.build();
        let t = cherry_rooted();
        // Run lengths sorted: [1, 5] against [2] gives |1-2| + |5-0|.
        let w = weighted_d(&n, &t, &[5.0, 1.0, 1.0], &[2.0, 1.0], 1.0).unwrap();
        assert_eq!(w, 6.0);
    }

    #[test]
    fn mismatched_labels() {
        let t = cherry_rooted();
        let mut b = NetworkBuilder::new(["b", "a"]).unwrap();
        let r = b.add_node("r").unwrap();
        let a = b.leaf("a").unwrap();
        let c = b.leaf("b").unwrap();
        b.directed(r, a).unwrap();
        b.directed(r, c).unwrap();
        assert!(matches!(d_mu_e(&t, &b.build()), Err(Error::LabelMismatch)));
    }

    #[test]
    fn self_distance_zero() {
        let t = cherry_rooted();
        let d = d_mu_e(&t, &t).unwrap();
        assert_eq!(d.value, 0);
        assert!(d.left_only.is_empty() && d.right_only.is_empty());
    }
}
