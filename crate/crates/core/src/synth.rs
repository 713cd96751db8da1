//! Seeded graph generators and the small worked-example graph.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, GraphBuilder, NodeId, Sign};

/// Six-node directed example with five acyclic triangles:
/// 1→3, 1→4, 1→5, 1→6, 3→4, 3→5, 4→5, 6→4.
pub fn toy_graph() -> Graph {
    let text = "1 3\n1 4\n1 5\n1 6\n3 4\n3 5\n4 5\n6 4\n";
    crate::graph::load_directed_edge_list(text.as_bytes(), true).expect("valid edge list").0
}

/// Directed G(n, p): each unordered pair is connected with probability `p`;
/// a connected pair is reciprocal with probability `reciprocity`, otherwise
/// oriented uniformly.
pub fn random_directed(n: usize, p: f64, reciprocity: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new(n);
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            if rng.gen_bool(p) {
                if rng.gen_bool(reciprocity) {
                    b.add_arc(u, v);
                    b.add_arc(v, u);
                } else if rng.gen_bool(0.5) {
                    b.add_arc(u, v);
                } else {
                    b.add_arc(v, u);
                }
            }
        }
    }
    b.build()
}

/// Signed directed G(n, p) with one arc per connected pair, negative with
/// probability `negative`.
pub fn random_signed(n: usize, p: f64, negative: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::signed(n);
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            if rng.gen_bool(p) {
                let sign = if rng.gen_bool(negative) { Sign::Minus } else { Sign::Plus };
                if rng.gen_bool(0.5) {
                    b.add_signed_arc(u, v, sign);
                } else {
                    b.add_signed_arc(v, u, sign);
                }
            }
        }
    }
    b.build()
}

/// Undirected G(n, p) with labels drawn uniformly from `labels`.
pub fn random_labeled(n: usize, p: f64, labels: &[&str], seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::undirected(n);
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            if rng.gen_bool(p) {
                b.add_arc(u, v);
            }
        }
    }
    let node_labels: Vec<&str> = (0..n).map(|_| labels[rng.gen_range(0..labels.len())]).collect();
    b.labels(node_labels).build()
}

/// The same node pairs with every edge undirected.
pub fn strip_directions(graph: &Graph) -> Graph {
    let mut b = GraphBuilder::undirected(graph.node_count());
    for e in graph.edges() {
        b.add_arc(e.src, e.dst);
    }
    b.build()
}

/// Large sparse directed graph with local clustering: nodes sit in blocks of
/// `block` consecutive ids and draw `out_degree` targets, half inside their
/// block and half uniformly; a drawn arc is reciprocated with probability
/// `reciprocity`.
pub fn clustered_directed(n: usize, out_degree: usize, block: usize, reciprocity: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        let start = u - u % block;
        let end = (start + block).min(n);
        for i in 0..out_degree {
            let v = if i % 2 == 0 { rng.gen_range(start..end) } else { rng.gen_range(0..n) };
            if v == u {
                continue;
            }
            b.add_arc(u as NodeId, v as NodeId);
            if rng.gen_bool(reciprocity) {
                b.add_arc(v as NodeId, u as NodeId);
            }
        }
    }
    b.build()
}
