//! Subgraph quality metrics and partition agreement scores.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::engine::MotifEngine;
use crate::error::{QuarkError, Result};
use crate::graph::{Graph, NodeId};

/// Node set with constant-time membership.
#[derive(Clone, Debug)]
pub struct Subgraph {
    nodes: Vec<NodeId>,
    member: Vec<bool>,
}

impl Subgraph {
    pub fn new(graph: &Graph, nodes: impl IntoIterator<Item = NodeId>) -> Self {
        let mut member = vec![false; graph.node_count()];
        let mut list = Vec::new();
        for v in nodes {
            if !member[v as usize] {
                member[v as usize] = true;
                list.push(v);
            }
        }
        list.sort_unstable();
        Subgraph { nodes: list, member }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.member.get(v as usize).copied().unwrap_or(false)
    }
}

/// Number of `N` instances lying entirely inside `s`.
pub fn internal_instances(engine: &MotifEngine<'_>, s: &Subgraph) -> u64 {
    let mut count = 0;
    for &v in s.nodes() {
        engine.visit_instances_at(v, |nodes| {
            if nodes[0] == v && nodes.iter().all(|&x| s.contains(x)) {
                count += 1;
            }
        });
    }
    count
}

/// Internal `N` instances divided by the number of nodes of `s`.
pub fn average_motif_degree(engine: &MotifEngine<'_>, s: &Subgraph) -> Result<f64> {
    if s.is_empty() {
        return Err(QuarkError::Domain("average motif degree of an empty node set".into()));
    }
    Ok(internal_instances(engine, s) as f64 / s.len() as f64)
}

/// Instances cut by `s` over the smaller side's instance-endpoint volume.
///
/// An instance with nodes on both sides is cut; the volume of a side counts
/// one per instance node on that side. Returns 0 when nothing is cut.
pub fn motif_conductance(engine: &MotifEngine<'_>, s: &Subgraph) -> Result<f64> {
    let n = engine.graph().node_count();
    if s.is_empty() || s.len() == n {
        return Err(QuarkError::Domain("conductance needs a proper nonempty node subset".into()));
    }
    let mut vol_s = 0u64;
    let mut cut = 0u64;
    for &v in s.nodes() {
        engine.visit_instances_at(v, |nodes| {
            vol_s += 1;
            let first_inside = nodes.iter().copied().find(|&x| s.contains(x));
            if first_inside == Some(v) && nodes.iter().any(|&x| !s.contains(x)) {
                cut += 1;
            }
        });
    }
    if cut == 0 {
        return Ok(0.0);
    }
    let total = engine.count_total() * engine.spec().n_class.node_count() as u64;
    let vol_rest = total - vol_s;
    Ok(cut as f64 / vol_s.min(vol_rest) as f64)
}

/// Connected node pairs inside `s` over all pairs of `s`.
pub fn edge_density(graph: &Graph, s: &Subgraph) -> Result<f64> {
    if s.len() < 2 {
        return Err(QuarkError::Domain("edge density needs at least two nodes".into()));
    }
    let mut pairs = 0u64;
    for &v in s.nodes() {
        pairs += graph.neighbors(v).iter().filter(|a| a.nbr > v && s.contains(a.nbr)).count() as u64;
    }
    let n = s.len() as u64;
    Ok(pairs as f64 / (n * (n - 1) / 2) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AgreementScores {
    pub ari: f64,
    pub nmi: f64,
    pub purity: f64,
    pub f1: f64,
    /// Nodes present in both maps; only these are scored.
    pub shared: usize,
    pub only_predicted: usize,
    pub only_truth: usize,
}

fn pairs(x: u64) -> f64 {
    (x * x.saturating_sub(1) / 2) as f64
}

/// ARI, NMI (arithmetic-mean normalization), purity and pairwise F1 of a
/// predicted clustering against ground truth, over their shared keys.
pub fn cluster_agreement<K: Ord, P: Ord, T: Ord>(predicted: &BTreeMap<K, P>, truth: &BTreeMap<K, T>) -> Result<AgreementScores> {
    let mut table: BTreeMap<(&P, &T), u64> = BTreeMap::new();
    let mut shared = 0usize;
    for (key, p) in predicted {
        if let Some(t) = truth.get(key) {
            *table.entry((p, t)).or_default() += 1;
            shared += 1;
        }
    }
    if shared == 0 {
        return Err(QuarkError::Domain("predicted and truth share no nodes".into()));
    }
    let mut rows: BTreeMap<&P, u64> = BTreeMap::new();
    let mut cols: BTreeMap<&T, u64> = BTreeMap::new();
    for (&(p, t), &c) in &table {
        *rows.entry(p).or_default() += c;
        *cols.entry(t).or_default() += c;
    }
    let n = shared as u64;
    let nf = n as f64;

    let index: f64 = table.values().map(|&c| pairs(c)).sum();
    let sum_rows: f64 = rows.values().map(|&c| pairs(c)).sum();
    let sum_cols: f64 = cols.values().map(|&c| pairs(c)).sum();
    let all = pairs(n);
    let expected = if all > 0.0 { sum_rows * sum_cols / all } else { 0.0 };
    let max = (sum_rows + sum_cols) / 2.0;
    let ari = if (max - expected).abs() < 1e-12 { 1.0 } else { (index - expected) / (max - expected) };

    let entropy = |m: &mut dyn Iterator<Item = u64>| -> f64 {
        m.map(|c| c as f64 / nf).filter(|&p| p > 0.0).map(|p| -p * p.ln()).sum()
    };
    let hp = entropy(&mut rows.values().copied());
    let ht = entropy(&mut cols.values().copied());
    let mut mi = 0.0;
    for (&(p, t), &c) in &table {
        let pij = c as f64 / nf;
        mi += pij * (pij / ((rows[p] as f64 / nf) * (cols[t] as f64 / nf))).ln();
    }
    let nmi = if hp + ht <= 1e-15 { 1.0 } else { (2.0 * mi / (hp + ht)).clamp(0.0, 1.0) };

    let mut best: BTreeMap<&P, u64> = BTreeMap::new();
    for (&(p, _), &c) in &table {
        let e = best.entry(p).or_default();
        *e = (*e).max(c);
    }
    let purity = best.values().sum::<u64>() as f64 / nf;

    let f1 = match (sum_rows > 0.0, sum_cols > 0.0) {
        (false, false) => 1.0,
        (true, true) if index > 0.0 => {
            let precision = index / sum_rows;
            let recall = index / sum_cols;
            2.0 * precision * recall / (precision + recall)
        }
        _ => 0.0,
    };

    Ok(AgreementScores {
        ari,
        nmi,
        purity,
        f1,
        shared,
        only_predicted: predicted.len() - shared,
        only_truth: truth.len() - shared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::motif::{MKind, MotifSpec};

    fn clique(n: u32) -> Graph {
        let mut b = GraphBuilder::undirected(n as usize);
        for i in 0..n {
            for j in i + 1..n {
                b.add_arc(i, j);
            }
        }
        b.build()
    }

    #[test]
    fn single_triangle_degree() {
        let g = GraphBuilder::new(4).arc(0, 1).arc(1, 2).arc(2, 0).arc(2, 3).build();
        let spec = MotifSpec::parse("cycle", MKind::VanillaEdge).unwrap();
        let engine = MotifEngine::new(&g, &spec).unwrap();
        let s = Subgraph::new(&g, [0, 1, 2]);
        assert!((average_motif_degree(&engine, &s).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(average_motif_degree(&engine, &Subgraph::new(&g, [2, 3])).unwrap(), 0.0);
        assert_eq!(motif_conductance(&engine, &s).unwrap(), 0.0);
        assert!(average_motif_degree(&engine, &Subgraph::new(&g, [])).is_err());
        assert!(motif_conductance(&engine, &Subgraph::new(&g, 0..4)).is_err());
    }

    #[test]
    fn density_extremes() {
        let g = clique(4);
        assert_eq!(edge_density(&g, &Subgraph::new(&g, 0..4)).unwrap(), 1.0);
        let empty = GraphBuilder::new(4).build();
        assert_eq!(edge_density(&empty, &Subgraph::new(&empty, 0..4)).unwrap(), 0.0);
        assert!(edge_density(&g, &Subgraph::new(&g, [1])).is_err());
    }

    #[test]
    fn agreement_identity_and_majority() {
        let truth: BTreeMap<u32, u32> = (0..10).map(|i| (i, i % 2)).collect();
        let s = cluster_agreement(&truth, &truth).unwrap();
        assert_eq!((s.ari, s.nmi, s.purity, s.f1), (1.0, 1.0, 1.0, 1.0));
        let one: BTreeMap<u32, u32> = (0..10).map(|i| (i, 0)).collect();
        let s = cluster_agreement(&one, &truth).unwrap();
        assert_eq!(s.purity, 0.5);
        assert!(s.ari.abs() < 1e-12);
        let other: BTreeMap<u32, u32> = (20..30).map(|i| (i, 0)).collect();
        assert!(cluster_agreement(&other, &truth).is_err());
    }
}
