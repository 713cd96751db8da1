mod common;

use common::*;
use proptest::prelude::*;
use quark::graph::{Graph, GraphBuilder, NodeId};
use quark::motif::{MKind, NClass};

#[test]
fn directed_sweep() {
    for i in 0..60 {
        let g = directed_instance(i);
        for class in NClass::all_directed() {
            all_properties(&g, &spec_for(&class), 20);
        }
    }
}

#[test]
fn signed_sweep() {
    for i in 0..25 {
        let g = signed_instance(i);
        for class in NClass::all_signed() {
            all_properties(&g, &spec_for(&class), 20);
        }
    }
}

#[test]
fn labeled_sweep() {
    for i in 0..20 {
        let g = labeled_instance(i);
        for name in LABELED_CLASSES {
            all_properties(&g, &parse_spec(name), 20);
        }
    }
}

#[test]
fn node_motif_sweep() {
    for i in 0..20 {
        let g = directed_instance(i);
        for class in NClass::all_directed() {
            all_properties(&g, &quark::MotifSpec::new(MKind::VanillaNode, class).unwrap(), 20);
        }
    }
}

#[test]
fn relabeling_permutes_degrees() {
    for i in 0..20 {
        let g = directed_instance(i);
        let n = g.node_count() as NodeId;
        // reverse node ids
        let mut b = GraphBuilder::new(n as usize);
        for e in g.edges() {
            b.add_arc(n - 1 - e.src, n - 1 - e.dst);
            if e.kind == quark::EdgeKind::Bidirectional {
                b.add_arc(n - 1 - e.dst, n - 1 - e.src);
            }
        }
        let h = b.build();
        for class in NClass::all_directed() {
            let spec = spec_for(&class);
            let a = run(&g, &spec);
            let c = run(&h, &spec);
            for (m, e) in g.edges().iter().enumerate() {
                let other = quark::engine::edge_between(&h, n - 1 - e.src, n - 1 - e.dst).unwrap();
                assert_eq!(a.numbers.get(m as u32), c.numbers.get(other));
                assert_eq!(a.role.row(m as u32), c.role.row(other));
            }
        }
    }
}

fn arb_directed() -> impl Strategy<Value = Graph> {
    (3usize..12).prop_flat_map(|n| {
        proptest::collection::vec((0..n as NodeId, 0..n as NodeId), 0..n * 4).prop_map(move |arcs| {
            let mut b = GraphBuilder::new(n);
            for (u, v) in arcs {
                b.add_arc(u, v);
            }
            b.build()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arbitrary_directed_graphs(g in arb_directed()) {
        for class in NClass::all_directed() {
            let spec = spec_for(&class);
            all_properties(&g, &spec, 20);
            let r = run(&g, &spec);
            let m = quark::oracle::compare(&r.engine, &r.numbers, Some(&r.role), Some(&r.forest)).unwrap();
            prop_assert!(m.is_none(), "{:?}", m);
        }
    }

    #[test]
    fn round_trip_edge_list(g in arb_directed()) {
        let text = g.to_edge_list();
        let (h, _) = quark::graph::load_directed_edge_list(text.as_bytes(), true).unwrap();
        let named = |g: &Graph| {
            let mut v: Vec<(String, String, quark::EdgeKind)> = g
                .edges()
                .iter()
                .map(|e| {
                    let (a, b) = (g.name(e.src).to_string(), g.name(e.dst).to_string());
                    match e.kind {
                        quark::EdgeKind::Bidirectional if b < a => (b, a, e.kind),
                        _ => (a, b, e.kind),
                    }
                })
                .collect();
            v.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
            v
        };
        prop_assert_eq!(named(&h), named(&g));
        prop_assert!(h.check_invariants().is_ok());
    }
}
