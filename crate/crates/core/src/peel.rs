//! Bucket peeling for quark numbers and role-aware quark numbers.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::{MotifEngine, OrbitDegrees};

/// Items bucketed by degree with constant-time decrement.
///
/// Only items inserted at construction take part; popping returns them in
/// nondecreasing degree order.
pub struct DegreeBuckets {
    deg: Vec<u32>,
    bin: Vec<usize>,
    pos: Vec<usize>,
    vert: Vec<u32>,
    cursor: usize,
}

impl DegreeBuckets {
    /// Buckets `items` (ids into `deg`), keeping their relative order inside
    /// each bucket.
    pub fn new(deg: Vec<u32>, items: &[u32]) -> Self {
        let max = items.iter().map(|&i| deg[i as usize]).max().unwrap_or(0) as usize;
        let mut bin = vec![0usize; max + 2];
        for &i in items {
            bin[deg[i as usize] as usize + 1] += 1;
        }
        for d in 1..bin.len() {
            bin[d] += bin[d - 1];
        }
        let mut next = bin.clone();
        let mut pos = vec![usize::MAX; deg.len()];
        let mut vert = vec![0u32; items.len()];
        for &i in items {
            let d = deg[i as usize] as usize;
            pos[i as usize] = next[d];
            vert[next[d]] = i;
            next[d] += 1;
        }
        DegreeBuckets { deg, bin, pos, vert, cursor: 0 }
    }

    pub fn degree(&self, item: u32) -> u32 {
        self.deg[item as usize]
    }

    pub fn is_empty(&self) -> bool {
        self.cursor == self.vert.len()
    }

    /// Removes an item of minimum degree.
    pub fn pop(&mut self) -> Option<(u32, u32)> {
        let item = *self.vert.get(self.cursor)?;
        let d = self.deg[item as usize] as usize;
        if self.bin[d] == self.cursor {
            self.bin[d] += 1;
        }
        self.cursor += 1;
        Some((item, d as u32))
    }

    /// Moves an unpopped item one bucket down.
    pub fn decrement(&mut self, item: u32) {
        let d = self.deg[item as usize] as usize;
        let p = self.pos[item as usize];
        debug_assert!(d > 0 && p >= self.cursor);
        let first = self.bin[d].max(self.cursor);
        let other = self.vert[first];
        self.vert.swap(p, first);
        self.pos[other as usize] = p;
        self.pos[item as usize] = first;
        self.bin[d] = first + 1;
        self.deg[item as usize] -= 1;
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PeelOptions {
    /// Seed for shuffling the tie-break order among equal degrees.
    pub shuffle_seed: Option<u64>,
}

/// Processing order of a peel and the number of `N` instances each step
/// consumed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PeelTrace {
    pub order: Vec<u32>,
    pub extracted_degree: Vec<u32>,
    pub consumed: Vec<u32>,
}

impl PeelTrace {
    pub fn consumed_total(&self) -> u64 {
        self.consumed.iter().map(|&c| c as u64).sum()
    }
}

/// Quark number per dense `M` id.
#[derive(Clone, Debug)]
pub struct QuarkNumbers {
    pub k: Vec<u32>,
    pub degrees: Vec<u32>,
    pub trace: PeelTrace,
}

impl QuarkNumbers {
    pub fn get(&self, m: u32) -> u32 {
        self.k[m as usize]
    }

    pub fn max_k(&self) -> u32 {
        self.k.iter().copied().max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }
}

/// Role-aware quark numbers, `b` per dense `M` id, row-major.
#[derive(Clone, Debug)]
pub struct RoleAwareNumbers {
    pub b: usize,
    pub k: Vec<u32>,
    pub degrees: OrbitDegrees,
    /// Items are tuple ids `m * b + orbit`.
    pub trace: PeelTrace,
}

impl RoleAwareNumbers {
    pub fn row(&self, m: u32) -> &[u32] {
        &self.k[m as usize * self.b..(m as usize + 1) * self.b]
    }

    pub fn get(&self, m: u32, orbit: usize) -> u32 {
        self.k[m as usize * self.b + orbit]
    }

    pub fn len(&self) -> usize {
        self.k.len() / self.b.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn max_k(&self) -> u32 {
        self.k.iter().copied().max().unwrap_or(0)
    }

    /// Whether `m` has more than one nonzero role-aware number.
    pub fn is_multi_role(&self, m: u32) -> bool {
        self.row(m).iter().filter(|&&k| k > 0).count() > 1
    }
}

fn insertion_order(degrees: &[u32], opts: &PeelOptions) -> Vec<u32> {
    let mut items: Vec<u32> = (0..degrees.len() as u32).filter(|&i| degrees[i as usize] > 0).collect();
    if let Some(seed) = opts.shuffle_seed {
        items.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    items
}

/// Quark number of every `M` instance.
pub fn quark_decompose(engine: &MotifEngine<'_>, opts: &PeelOptions) -> QuarkNumbers {
    let degrees = engine.motif_degrees().degrees;
    let n = degrees.len();
    let items = insertion_order(&degrees, opts);
    let mut buckets = DegreeBuckets::new(degrees.clone(), &items);
    let mut processed = vec![false; n];
    let mut k = vec![0u32; n];
    let mut trace = PeelTrace::default();
    while let Some((u, du)) = buckets.pop() {
        k[u as usize] = du;
        let mut consumed = 0;
        engine.visit_containing(u, |hit| {
            if hit.members().iter().any(|&x| x != u && processed[x as usize]) {
                return;
            }
            consumed += 1;
            for &x in hit.members() {
                if x != u && buckets.degree(x) > du {
                    buckets.decrement(x);
                }
            }
        });
        processed[u as usize] = true;
        trace.order.push(u);
        trace.extracted_degree.push(du);
        trace.consumed.push(consumed);
    }
    QuarkNumbers { k, degrees, trace }
}

/// Role-aware quark numbers of every `M` instance.
///
/// Tuples `(m, o)` are peeled by orbit degree. Processing `(m, o)` touches
/// only the `N` instances in which `m` occupies orbit `o`.
pub fn role_aware_decompose(engine: &MotifEngine<'_>, opts: &PeelOptions) -> RoleAwareNumbers {
    let od = engine.orbit_degrees();
    let b = od.b;
    let items = insertion_order(&od.counts, opts);
    let mut buckets = DegreeBuckets::new(od.counts.clone(), &items);
    let mut processed = vec![false; od.counts.len()];
    let mut k = vec![0u32; od.counts.len()];
    let mut trace = PeelTrace::default();
    while let Some((tuple, du)) = buckets.pop() {
        let (u, a) = (tuple / b as u32, (tuple % b as u32) as u8);
        k[tuple as usize] = du;
        let mut consumed = 0;
        engine.visit_containing(u, |hit| {
            let tuples = hit.members().iter().zip(hit.orbits()).map(|(&x, &o)| (x, x * b as u32 + o as u32));
            if hit.orbit_of(u) != Some(a) || tuples.clone().any(|(x, t)| x != u && processed[t as usize]) {
                return;
            }
            consumed += 1;
            for (x, t) in tuples {
                if x != u && buckets.degree(t) > du {
                    buckets.decrement(t);
                }
            }
        });
        processed[tuple as usize] = true;
        trace.order.push(tuple);
        trace.extracted_degree.push(du);
        trace.consumed.push(consumed);
    }
    RoleAwareNumbers { b, k, degrees: od, trace }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::motif::{MKind, MotifSpec};

    #[test]
    fn buckets_pop_in_order() {
        let deg = vec![3, 1, 2, 0, 2];
        let mut b = DegreeBuckets::new(deg, &[0, 1, 2, 4]);
        assert_eq!(b.pop(), Some((1, 1)));
        b.decrement(0);
        b.decrement(0);
        let (x, d) = b.pop().unwrap();
        assert_eq!((x, d), (0, 1));
        assert_eq!(b.pop().unwrap().1, 2);
        assert_eq!(b.pop().unwrap().1, 2);
        assert!(b.pop().is_none());
        assert!(b.is_empty());
    }

    #[test]
    fn single_triangle_all_one() {
        let g = GraphBuilder::new(3).arc(0, 1).arc(1, 2).arc(2, 0).build();
        let spec = MotifSpec::parse("cycle", MKind::VanillaEdge).unwrap();
        let engine = MotifEngine::new(&g, &spec).unwrap();
        let q = quark_decompose(&engine, &PeelOptions::default());
        assert_eq!(q.k, vec![1, 1, 1]);
        assert_eq!(q.trace.consumed_total(), 1);
    }

    #[test]
    fn toy_numbers() {
        let g = crate::synth::toy_graph();
        let spec = MotifSpec::parse("acyclic", MKind::VanillaEdge).unwrap();
        let engine = MotifEngine::new(&g, &spec).unwrap();
        let q = quark_decompose(&engine, &PeelOptions::default());
        let e = |a: &str, b: &str| {
            crate::engine::edge_between(&g, g.node_by_name(a).unwrap(), g.node_by_name(b).unwrap()).unwrap()
        };
        assert_eq!(q.get(e("4", "5")), 2);
        assert_eq!(q.get(e("1", "6")), 1);
        assert_eq!(q.get(e("6", "4")), 1);
        for (a, b) in [("1", "3"), ("1", "4"), ("1", "5"), ("3", "4"), ("3", "5")] {
            assert_eq!(q.get(e(a, b)), 2, "{a}->{b}");
        }
        let r = role_aware_decompose(&engine, &PeelOptions::default());
        let multi: Vec<u32> = (0..g.edge_count() as u32).filter(|&m| r.is_multi_role(m)).collect();
        let mut expect = vec![e("1", "4"), e("3", "4"), e("3", "5")];
        expect.sort();
        assert_eq!(multi, expect);
        assert_eq!(r.max_k(), 1);
    }

    #[test]
    fn single_orbit_role_aware_matches_plain() {
        let g = crate::synth::random_directed(30, 0.3, 0.5, 11);
        let spec = MotifSpec::parse("reciprocal", MKind::VanillaEdge).unwrap();
        let engine = MotifEngine::new(&g, &spec).unwrap();
        let q = quark_decompose(&engine, &PeelOptions::default());
        let r = role_aware_decompose(&engine, &PeelOptions::default());
        assert_eq!(q.k, r.k);
    }
}
