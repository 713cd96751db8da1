#![allow(dead_code)]

use std::collections::BTreeSet;

use quark::engine::MotifEngine;
use quark::forest::{build_forest, role_aware_quarks, QuarkForest};
use quark::graph::Graph;
use quark::metrics::{motif_conductance, Subgraph};
use quark::motif::{MKind, MotifSpec, NClass};
use quark::peel::{quark_decompose, role_aware_decompose, PeelOptions, QuarkNumbers, RoleAwareNumbers};
use quark::synth;

pub const LABELED_CLASSES: [&str; 7] = ["tri:FMM", "tri:FFM", "clique4:FMMM", "clique4:FFMM", "clique4:FFFM", "tri", "clique4"];

/// Directed instance `i` of the seeded sweep: sizes up to 40 nodes, edge
/// probability and reciprocity varying with the seed.
pub fn directed_instance(i: u64) -> Graph {
    let n = 6 + (i as usize * 7) % 35;
    let p = [0.1, 0.2, 0.35, 0.5, 0.7][i as usize % 5];
    let r = [0.0, 0.1, 0.3, 0.6][(i as usize / 5) % 4];
    synth::random_directed(n, p, r, 1000 + i)
}

pub fn signed_instance(i: u64) -> Graph {
    let n = 6 + (i as usize * 5) % 30;
    let p = [0.2, 0.35, 0.5, 0.7][i as usize % 4];
    let neg = [0.1, 0.3, 0.5][(i as usize / 4) % 3];
    synth::random_signed(n, p, neg, 2000 + i)
}

pub fn labeled_instance(i: u64) -> Graph {
    let n = 6 + (i as usize * 3) % 20;
    let p = [0.3, 0.5, 0.7][i as usize % 3];
    synth::random_labeled(n, p, &["F", "M"], 3000 + i)
}

pub fn spec_for(class: &NClass) -> MotifSpec {
    MotifSpec::new(MotifSpec::default_m_kind(class), class.clone()).unwrap()
}

pub fn parse_spec(name: &str) -> MotifSpec {
    let class: NClass = name.parse().unwrap();
    spec_for(&class)
}

pub fn node_spec(name: &str) -> MotifSpec {
    MotifSpec::parse(name, MKind::VanillaNode).unwrap()
}

pub struct Run<'g> {
    pub engine: MotifEngine<'g>,
    pub numbers: QuarkNumbers,
    pub role: RoleAwareNumbers,
    pub forest: QuarkForest,
}

pub fn run<'g>(graph: &'g Graph, spec: &MotifSpec) -> Run<'g> {
    let engine = MotifEngine::new(graph, spec).unwrap();
    let numbers = quark_decompose(&engine, &PeelOptions::default());
    let role = role_aware_decompose(&engine, &PeelOptions::default());
    let forest = build_forest(&engine, &numbers).unwrap();
    Run { engine, numbers, role, forest }
}

pub fn degree_invariants(r: &Run<'_>) {
    let d = r.engine.motif_degrees();
    let od = r.engine.orbit_degrees();
    let t = r.engine.spec().t as u64;
    assert_eq!(d.total(), t * r.engine.count_total());
    for m in 0..r.engine.m_count() as u32 {
        assert_eq!(od.row(m).iter().sum::<u32>(), d.get(m));
        assert!(r.numbers.get(m) <= d.get(m));
        for (o, &k) in r.role.row(m).iter().enumerate() {
            assert!(k <= od.row(m)[o]);
            assert!(k <= r.numbers.get(m));
        }
    }
    // each N instance consumed at most once
    assert!(r.numbers.trace.consumed_total() <= r.engine.count_total());
    // extraction degrees never go below the running minimum
    let mut prev = 0;
    for &x in &r.numbers.trace.extracted_degree {
        assert!(x >= prev);
        prev = x;
    }
}

pub fn order_invariance(engine: &MotifEngine<'_>, shuffles: u64) {
    let base = quark_decompose(engine, &PeelOptions::default()).k;
    let base_role = role_aware_decompose(engine, &PeelOptions::default()).k;
    for seed in 0..shuffles {
        let opts = PeelOptions { shuffle_seed: Some(seed) };
        assert_eq!(quark_decompose(engine, &opts).k, base, "shuffle {seed}");
        assert_eq!(role_aware_decompose(engine, &opts).k, base_role, "role shuffle {seed}");
    }
}

pub fn forest_invariants(engine: &MotifEngine<'_>, k: &[u32], forest: &QuarkForest) {
    let sets: Vec<BTreeSet<u32>> = (0..forest.len()).map(|id| forest.members(id).into_iter().collect()).collect();
    for q in forest.quarks() {
        let set = &sets[q.id];
        assert_eq!(set.len(), q.num_members);
        assert!(set.iter().all(|&m| k[m as usize] >= q.k));
        if let Some(p) = q.parent {
            let parent = forest.quark(p);
            assert!(parent.k < q.k);
            assert!(set.is_subset(&sets[p]));
            // no quark strictly between parent and child
            for u in forest.quarks() {
                if u.k > parent.k && u.k < q.k {
                    assert!(!set.is_subset(&sets[u.id]));
                }
            }
        }
        // at most one container per lower level, exactly one along the ancestry
        for level in forest.levels().keys().filter(|&&l| l < q.k) {
            let holders = forest.quarks().iter().filter(|u| u.k == *level && set.is_subset(&sets[u.id])).count();
            assert!(holders <= 1);
        }
        let mut up = q.parent;
        while let Some(p) = up {
            let level = forest.quark(p).k;
            let holders = forest.quarks().iter().filter(|u| u.k == level && set.is_subset(&sets[u.id])).count();
            assert_eq!(holders, 1);
            up = forest.quark(p).parent;
        }
        // induced degree, connectivity and maximality
        let mut degree = std::collections::BTreeMap::new();
        let mut adj: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
        let mut inside = 0u64;
        for &m in set {
            engine.visit_containing(m, |hit| {
                let members = hit.members();
                let all_in = members.iter().all(|x| set.contains(x));
                let all_alive = members.iter().all(|&x| k[x as usize] >= q.k);
                if all_alive {
                    assert!(all_in, "quark {} is not maximal", q.id);
                }
                if all_in {
                    *degree.entry(m).or_insert(0u32) += 1;
                    adj.entry(m).or_default().extend(members.iter().copied());
                    if members.iter().min() == Some(&m) {
                        inside += 1;
                    }
                }
            });
        }
        assert!(set.iter().all(|m| degree.get(m).copied().unwrap_or(0) >= q.k));
        let start = *set.iter().next().unwrap();
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(m) = stack.pop() {
            for &x in adj.get(&m).into_iter().flatten() {
                if seen.insert(x) {
                    stack.push(x);
                }
            }
        }
        assert_eq!(&seen, set, "quark {} is not connected", q.id);
        let spec = engine.spec();
        if spec.m_kind == MKind::VanillaEdge {
            let n = forest.nodes(engine, q.id).len() as u64;
            assert!(inside + 2 >= n, "quark {} has {inside} instances on {n} nodes", q.id);
            let graph = engine.graph();
            if (n as usize) < graph.node_count() {
                let s = Subgraph::new(graph, forest.nodes(engine, q.id));
                let phi = motif_conductance(engine, &s).unwrap();
                assert!((0.0..=1.0).contains(&phi));
            }
        }
    }
}

pub fn role_quark_invariants(engine: &MotifEngine<'_>, r: &Run<'_>) {
    for level in 1..=r.role.max_k() {
        let Ok(quarks) = role_aware_quarks(engine, &r.role, level) else { continue };
        for q in quarks {
            let ms: BTreeSet<u32> = q.members.iter().map(|x| x.0).collect();
            assert_eq!(ms.len(), q.members.len(), "instance with two roles");
            for &(m, o) in &q.members {
                assert!(r.role.get(m, o as usize) >= level);
            }
        }
    }
}

pub fn all_properties(graph: &Graph, spec: &quark::MotifSpec, shuffles: u64) {
    let r = run(graph, spec);
    degree_invariants(&r);
    order_invariance(&r.engine, shuffles);
    forest_invariants(&r.engine, &r.numbers.k, &r.forest);
    if graph.node_count() <= 20 {
        role_quark_invariants(&r.engine, &r);
    }
}
