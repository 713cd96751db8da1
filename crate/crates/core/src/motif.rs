//! The closed motif catalog.
//!
//! Every motif `N` is described by a small [`Template`] (3 or 4 nodes with
//! typed pair relations and optional node labels). Orbits of the `M`
//! positions inside `N` come from exhaustive automorphism enumeration over
//! the template. The rule-based classifiers at the bottom of the module do
//! not use templates; the oracle relies on them.

use std::fmt;
use std::str::FromStr;

use crate::error::{QuarkError, Result};
use crate::graph::{Graph, Link, NodeId, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DirectedTriangleClass {
    Cycle,
    Acyclic,
    OutPlus,
    InPlus,
    CyclePlus,
    CyclePlusPlus,
    Reciprocal,
}

impl DirectedTriangleClass {
    pub const ALL: [DirectedTriangleClass; 7] = [
        DirectedTriangleClass::Cycle,
        DirectedTriangleClass::Acyclic,
        DirectedTriangleClass::OutPlus,
        DirectedTriangleClass::InPlus,
        DirectedTriangleClass::CyclePlus,
        DirectedTriangleClass::CyclePlusPlus,
        DirectedTriangleClass::Reciprocal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DirectedTriangleClass::Cycle => "cycle",
            DirectedTriangleClass::Acyclic => "acyclic",
            DirectedTriangleClass::OutPlus => "out+",
            DirectedTriangleClass::InPlus => "in+",
            DirectedTriangleClass::CyclePlus => "cycle+",
            DirectedTriangleClass::CyclePlusPlus => "cycle++",
            DirectedTriangleClass::Reciprocal => "reciprocal",
        }
    }

    pub fn bidirectional_edges(self) -> usize {
        match self {
            DirectedTriangleClass::Cycle | DirectedTriangleClass::Acyclic => 0,
            DirectedTriangleClass::OutPlus | DirectedTriangleClass::InPlus | DirectedTriangleClass::CyclePlus => 1,
            DirectedTriangleClass::CyclePlusPlus => 2,
            DirectedTriangleClass::Reciprocal => 3,
        }
    }

    fn template(self) -> Template {
        use TRel::{Bidir, In, Out};
        let arcs: &[(usize, usize, TRel)] = match self {
            DirectedTriangleClass::Cycle => &[(0, 1, Out(None)), (1, 2, Out(None)), (0, 2, In(None))],
            // 0: source (prey), 1: middle (balancer), 2: sink (predator)
            DirectedTriangleClass::Acyclic => &[(0, 1, Out(None)), (0, 2, Out(None)), (1, 2, Out(None))],
            DirectedTriangleClass::OutPlus => &[(0, 1, Out(None)), (0, 2, Out(None)), (1, 2, Bidir)],
            DirectedTriangleClass::InPlus => &[(0, 1, In(None)), (0, 2, In(None)), (1, 2, Bidir)],
            DirectedTriangleClass::CyclePlus => &[(0, 1, Out(None)), (1, 2, Out(None)), (0, 2, Bidir)],
            DirectedTriangleClass::CyclePlusPlus => &[(0, 1, Bidir), (1, 2, Bidir), (0, 2, Out(None))],
            DirectedTriangleClass::Reciprocal => &[(0, 1, Bidir), (1, 2, Bidir), (0, 2, Bidir)],
        };
        Template::from_arcs(3, arcs, Vec::new())
    }
}

/// Sign pattern of a signed triangle. For acyclic `++-` / `+--` the variant
/// letter names the position of the odd-signed edge among
/// (source→middle, source→sink, middle→sink) = (a, b, c).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SignedTriangleClass {
    CyclePPP,
    CyclePPM,
    CyclePMM,
    CycleMMM,
    AcyclicPPP,
    AcyclicPPMa,
    AcyclicPPMb,
    AcyclicPPMc,
    AcyclicPMMa,
    AcyclicPMMb,
    AcyclicPMMc,
    AcyclicMMM,
}

impl SignedTriangleClass {
    pub const ALL: [SignedTriangleClass; 12] = [
        SignedTriangleClass::CyclePPP,
        SignedTriangleClass::CyclePPM,
        SignedTriangleClass::CyclePMM,
        SignedTriangleClass::CycleMMM,
        SignedTriangleClass::AcyclicPPP,
        SignedTriangleClass::AcyclicPPMa,
        SignedTriangleClass::AcyclicPPMb,
        SignedTriangleClass::AcyclicPPMc,
        SignedTriangleClass::AcyclicPMMa,
        SignedTriangleClass::AcyclicPMMb,
        SignedTriangleClass::AcyclicPMMc,
        SignedTriangleClass::AcyclicMMM,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SignedTriangleClass::CyclePPP => "cycle+++",
            SignedTriangleClass::CyclePPM => "cycle++-",
            SignedTriangleClass::CyclePMM => "cycle+--",
            SignedTriangleClass::CycleMMM => "cycle---",
            SignedTriangleClass::AcyclicPPP => "acyclic+++",
            SignedTriangleClass::AcyclicPPMa => "acyclic++-a",
            SignedTriangleClass::AcyclicPPMb => "acyclic++-b",
            SignedTriangleClass::AcyclicPPMc => "acyclic++-c",
            SignedTriangleClass::AcyclicPMMa => "acyclic+--a",
            SignedTriangleClass::AcyclicPMMb => "acyclic+--b",
            SignedTriangleClass::AcyclicPMMc => "acyclic+--c",
            SignedTriangleClass::AcyclicMMM => "acyclic---",
        }
    }

    pub fn is_cycle(self) -> bool {
        matches!(
            self,
            SignedTriangleClass::CyclePPP
                | SignedTriangleClass::CyclePPM
                | SignedTriangleClass::CyclePMM
                | SignedTriangleClass::CycleMMM
        )
    }

    pub fn negative_edges(self) -> usize {
        use SignedTriangleClass::*;
        match self {
            CyclePPP | AcyclicPPP => 0,
            CyclePPM | AcyclicPPMa | AcyclicPPMb | AcyclicPPMc => 1,
            CyclePMM | AcyclicPMMa | AcyclicPMMb | AcyclicPMMc => 2,
            CycleMMM | AcyclicMMM => 3,
        }
    }

    fn template(self) -> Template {
        use Sign::{Minus as M, Plus as P};
        use SignedTriangleClass::*;
        use TRel::{In, Out};
        if self.is_cycle() {
            let [a, b, c] = match self {
                CyclePPP => [P, P, P],
                CyclePPM => [P, P, M],
                CyclePMM => [P, M, M],
                _ => [M, M, M],
            };
            // 0→1, 1→2, 2→0
            return Template::from_arcs(3, &[(0, 1, Out(Some(a))), (1, 2, Out(Some(b))), (0, 2, In(Some(c)))], Vec::new());
        }
        // (source→middle, source→sink, middle→sink)
        let [sm, ss, ms] = match self {
            AcyclicPPP => [P, P, P],
            AcyclicPPMa => [M, P, P],
            AcyclicPPMb => [P, M, P],
            AcyclicPPMc => [P, P, M],
            AcyclicPMMa => [P, M, M],
            AcyclicPMMb => [M, P, M],
            AcyclicPMMc => [M, M, P],
            _ => [M, M, M],
        };
        Template::from_arcs(3, &[(0, 1, Out(Some(sm))), (0, 2, Out(Some(ss))), (1, 2, Out(Some(ms)))], Vec::new())
    }
}

/// An undirected clique of size 3 or 4, either vanilla (no labels) or with a
/// node label multiset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledCliqueClass {
    size: u8,
    labels: Vec<String>,
}

impl LabeledCliqueClass {
    pub fn vanilla(size: u8) -> Result<Self> {
        Self::new(size, Vec::<String>::new())
    }

    pub fn labeled<S: Into<String>>(size: u8, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(QuarkError::Config("labeled clique needs labels".into()));
        }
        Self::new(size, labels)
    }

    fn new(size: u8, mut labels: Vec<String>) -> Result<Self> {
        if !(3..=4).contains(&size) {
            return Err(QuarkError::Config(format!("clique size {size} not supported (3 or 4)")));
        }
        if !labels.is_empty() && labels.len() != size as usize {
            return Err(QuarkError::Config(format!("label multiset size {} != clique size {size}", labels.len())));
        }
        labels.sort();
        Ok(LabeledCliqueClass { size, labels })
    }

    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn is_vanilla(&self) -> bool {
        self.labels.is_empty()
    }

    /// Sorted label multiset; empty for vanilla cliques.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn template(&self) -> Template {
        let n = self.size();
        let mut arcs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                arcs.push((i, j, TRel::Undirected));
            }
        }
        Template::from_arcs(n, &arcs, self.labels.clone())
    }
}

impl fmt::Display for LabeledCliqueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = if self.size == 3 { "tri" } else { "clique4" };
        if self.labels.is_empty() {
            return write!(f, "{base}");
        }
        if self.labels.iter().all(|l| l.chars().count() == 1) {
            write!(f, "{base}:{}", self.labels.concat())
        } else {
            write!(f, "{base}:{}", self.labels.join(","))
        }
    }
}

/// The motif `N` of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NClass {
    Directed(DirectedTriangleClass),
    Signed(SignedTriangleClass),
    Clique(LabeledCliqueClass),
}

impl NClass {
    pub fn node_count(&self) -> usize {
        match self {
            NClass::Clique(c) => c.size(),
            _ => 3,
        }
    }

    pub fn is_signed(&self) -> bool {
        matches!(self, NClass::Signed(_))
    }

    pub fn is_labeled(&self) -> bool {
        matches!(self, NClass::Clique(c) if !c.is_vanilla())
    }

    pub fn template(&self) -> Template {
        match self {
            NClass::Directed(c) => c.template(),
            NClass::Signed(c) => c.template(),
            NClass::Clique(c) => c.template(),
        }
    }

    pub fn all_directed() -> Vec<NClass> {
        DirectedTriangleClass::ALL.iter().map(|&c| NClass::Directed(c)).collect()
    }

    pub fn all_signed() -> Vec<NClass> {
        SignedTriangleClass::ALL.iter().map(|&c| NClass::Signed(c)).collect()
    }
}

impl fmt::Display for NClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NClass::Directed(c) => f.write_str(c.name()),
            NClass::Signed(c) => f.write_str(c.name()),
            NClass::Clique(c) => write!(f, "{c}"),
        }
    }
}

impl FromStr for NClass {
    type Err = QuarkError;

    /// Accepts `cycle`, `acyclic`, `out+`, `in+`, `cycle+`, `cycle++`,
    /// `reciprocal`, the twelve signed names (`acyclic++-a`, `cycle+--`, ...),
    /// `tri`, `clique4`, and labeled cliques such as `tri:FFM` or
    /// `clique4:F,F,M,M`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(c) = DirectedTriangleClass::ALL.iter().find(|c| c.name() == s) {
            return Ok(NClass::Directed(*c));
        }
        if let Some(c) = SignedTriangleClass::ALL.iter().find(|c| c.name() == s) {
            return Ok(NClass::Signed(*c));
        }
        let (base, labels) = match s.split_once(':') {
            Some((b, l)) => (b, Some(l)),
            None => (s.strip_prefix("vanilla ").unwrap_or(s), None),
        };
        let size = match base {
            "tri" | "triangle" => 3,
            "clique4" | "4-clique" => 4,
            _ => return Err(QuarkError::Config(format!("unknown motif {s:?}"))),
        };
        let class = match labels {
            None => LabeledCliqueClass::vanilla(size)?,
            Some(l) if l.contains(',') => LabeledCliqueClass::labeled(size, l.split(',').map(str::trim))?,
            Some(l) => LabeledCliqueClass::labeled(size, l.chars().map(|c| c.to_string()))?,
        };
        Ok(NClass::Clique(class))
    }
}

/// The motif `M`: always vanilla, so it has one orbit on its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MKind {
    VanillaNode,
    VanillaEdge,
    VanillaTriangle,
}

impl MKind {
    pub fn node_count(self) -> usize {
        match self {
            MKind::VanillaNode => 1,
            MKind::VanillaEdge => 2,
            MKind::VanillaTriangle => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MKind::VanillaNode => "node",
            MKind::VanillaEdge => "edge",
            MKind::VanillaTriangle => "triangle",
        }
    }
}

impl FromStr for MKind {
    type Err = QuarkError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "node" => Ok(MKind::VanillaNode),
            "edge" => Ok(MKind::VanillaEdge),
            "triangle" | "tri" => Ok(MKind::VanillaTriangle),
            other => Err(QuarkError::Config(format!("unknown M kind {other:?}"))),
        }
    }
}

/// Relation between template nodes `i` and `j`, seen from `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TRel {
    None,
    Out(Option<Sign>),
    In(Option<Sign>),
    Bidir,
    /// Connected, direction ignored (cliques).
    Undirected,
}

impl TRel {
    fn flip(self) -> TRel {
        match self {
            TRel::Out(s) => TRel::In(s),
            TRel::In(s) => TRel::Out(s),
            other => other,
        }
    }

    /// Whether a graph link realizes this template relation.
    pub fn admits(self, link: Link) -> bool {
        match self {
            TRel::None => false,
            TRel::Undirected => true,
            TRel::Bidir => link == Link::Bidir,
            TRel::Out(s) => link == Link::Out(s),
            TRel::In(s) => link == Link::In(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    n: usize,
    rel: [[TRel; 4]; 4],
    labels: Vec<String>,
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

impl Template {
    fn from_arcs(n: usize, arcs: &[(usize, usize, TRel)], labels: Vec<String>) -> Template {
        let mut rel = [[TRel::None; 4]; 4];
        for &(i, j, r) in arcs {
            rel[i][j] = r;
            rel[j][i] = r.flip();
        }
        Template { n, rel, labels }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn rel(&self, i: usize, j: usize) -> TRel {
        self.rel[i][j]
    }

    /// Label required at template node `i`, if any.
    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.get(i).map(String::as_str)
    }

    pub fn is_labeled(&self) -> bool {
        !self.labels.is_empty()
    }

    /// All automorphisms, as node permutations.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        permutations(self.n)
            .into_iter()
            .filter(|p| {
                (0..self.n).all(|i| self.label(i) == self.label(p[i]))
                    && (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.rel[i][j] == self.rel[p[i]][p[j]]))
            })
            .collect()
    }

    /// Finds a bijection from instance nodes `0..n` onto template nodes
    /// realizing every relation and label. `link(i, j)` is the graph link
    /// from instance node `i` to `j`; `label_ok(i, t)` says whether instance
    /// node `i` may sit at template node `t`.
    pub fn embed(
        &self,
        link: impl Fn(usize, usize) -> Option<Link>,
        label_ok: impl Fn(usize, usize) -> bool,
    ) -> Option<[u8; 4]> {
        'perm: for p in permutations(self.n) {
            for i in 0..self.n {
                if !label_ok(i, p[i]) {
                    continue 'perm;
                }
            }
            for i in 0..self.n {
                for j in i + 1..self.n {
                    let r = self.rel[p[i]][p[j]];
                    match link(i, j) {
                        Some(l) if r.admits(l) => {}
                        None if r == TRel::None => {}
                        _ => continue 'perm,
                    }
                }
            }
            let mut out = [0u8; 4];
            for i in 0..self.n {
                out[i] = p[i] as u8;
            }
            return Some(out);
        }
        None
    }

    /// Human-readable arc list, e.g. `0->1 0->2 1<->2`.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let s = |x: Option<Sign>| x.map(|s| s.symbol().to_string()).unwrap_or_default();
                match self.rel[i][j] {
                    TRel::None => {}
                    TRel::Out(x) => parts.push(format!("{i}->{j}{}", s(x))),
                    TRel::In(x) => parts.push(format!("{j}->{i}{}", s(x))),
                    TRel::Bidir => parts.push(format!("{i}<->{j}")),
                    TRel::Undirected => parts.push(format!("{i}-{j}")),
                }
            }
        }
        for (i, l) in self.labels.iter().enumerate() {
            parts.push(format!("{i}:{l}"));
        }
        parts.join(" ")
    }
}

/// Orbits of the `M` positions inside `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitTable {
    m_kind: MKind,
    /// Positions as sorted template node tuples, in lexicographic order.
    positions: Vec<Vec<u8>>,
    orbit: Vec<u8>,
    b: usize,
    /// Template node bitmask -> position index.
    by_mask: [u8; 16],
}

impl OrbitTable {
    pub fn positions(&self) -> &[Vec<u8>] {
        &self.positions
    }

    pub fn orbit_count(&self) -> usize {
        self.b
    }

    /// Number of `M` positions inside `N`.
    pub fn position_count(&self) -> usize {
        self.positions.len()
    }

    pub fn orbit_of_position(&self, pos: usize) -> usize {
        self.orbit[pos] as usize
    }

    /// Orbit of the position occupying the given template nodes.
    pub fn orbit_of_mask(&self, mask: usize) -> usize {
        self.orbit[self.by_mask[mask] as usize] as usize
    }

    pub fn position_of_mask(&self, mask: usize) -> usize {
        self.by_mask[mask] as usize
    }

    pub fn m_kind(&self) -> MKind {
        self.m_kind
    }

    /// Positions belonging to each orbit.
    pub fn orbit_members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.b];
        for (p, &o) in self.orbit.iter().enumerate() {
            out[o as usize].push(p);
        }
        out
    }

    /// Short orbit names built from the first position of each orbit, e.g.
    /// `0-1` for an edge orbit or `2` for a node orbit.
    pub fn orbit_names(&self) -> Vec<String> {
        self.orbit_members()
            .iter()
            .map(|ps| self.positions[ps[0]].iter().map(|x| x.to_string()).collect::<Vec<_>>().join("-"))
            .collect()
    }
}

/// Enumerates the `M` positions of `N` and groups them into orbits by
/// exhaustive automorphism enumeration. Orbit ids are assigned in order of
/// each orbit's lexicographically smallest position.
pub fn compute_orbits(m_kind: MKind, template: &Template) -> OrbitTable {
    let n = template.node_count();
    let k = m_kind.node_count();
    let mut positions: Vec<Vec<u8>> = Vec::new();
    let mut combo = |set: Vec<u8>| {
        let connected = set.iter().all(|&i| set.iter().all(|&j| i == j || template.rel(i as usize, j as usize) != TRel::None));
        if connected {
            positions.push(set);
        }
    };
    match k {
        1 => (0..n as u8).for_each(|i| combo(vec![i])),
        2 => {
            for i in 0..n as u8 {
                for j in i + 1..n as u8 {
                    combo(vec![i, j]);
                }
            }
        }
        _ => {
            for i in 0..n as u8 {
                for j in i + 1..n as u8 {
                    for l in j + 1..n as u8 {
                        combo(vec![i, j, l]);
                    }
                }
            }
        }
    }
    let mut by_mask = [u8::MAX; 16];
    for (idx, p) in positions.iter().enumerate() {
        let mask: usize = p.iter().map(|&x| 1usize << x).sum();
        by_mask[mask] = idx as u8;
    }
    let autos = template.automorphisms();
    let mut orbit = vec![u8::MAX; positions.len()];
    let mut b = 0u8;
    for idx in 0..positions.len() {
        if orbit[idx] != u8::MAX {
            continue;
        }
        for a in &autos {
            let mask: usize = positions[idx].iter().map(|&x| 1usize << a[x as usize]).sum();
            let image = by_mask[mask] as usize;
            orbit[image] = b;
        }
        b += 1;
    }
    OrbitTable { m_kind, positions, orbit, b: b as usize, by_mask }
}

/// The `(M, N)` pair of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotifSpec {
    pub m_kind: MKind,
    pub n_class: NClass,
    /// Occurrences of `M` in `N`.
    pub t: usize,
    /// Orbits of `M` in `N`.
    pub b: usize,
    template: Template,
    orbits: OrbitTable,
}

impl MotifSpec {
    pub fn new(m_kind: MKind, n_class: NClass) -> Result<Self> {
        let n = n_class.node_count();
        match (m_kind, n) {
            (MKind::VanillaNode | MKind::VanillaEdge, 3) | (MKind::VanillaTriangle, 4) => {}
            _ => {
                return Err(QuarkError::Config(format!(
                    "M = vanilla {} does not pair with N = {n_class} (node/edge pair with triangles, triangle with 4-cliques)",
                    m_kind.name()
                )))
            }
        }
        let template = n_class.template();
        let orbits = compute_orbits(m_kind, &template);
        let t = orbits.position_count();
        if t < 2 {
            return Err(QuarkError::Config(format!("M occurs {t} time(s) in {n_class}; need at least 2")));
        }
        Ok(MotifSpec { m_kind, b: orbits.orbit_count(), t, n_class, template, orbits })
    }

    /// Parses `N` from its catalog name and pairs it with `m_kind`.
    pub fn parse(n_class: &str, m_kind: MKind) -> Result<Self> {
        MotifSpec::new(m_kind, n_class.parse()?)
    }

    /// The `M` kind conventionally paired with a class: edges for
    /// triangles, triangles for 4-cliques.
    pub fn default_m_kind(n_class: &NClass) -> MKind {
        if n_class.node_count() == 4 {
            MKind::VanillaTriangle
        } else {
            MKind::VanillaEdge
        }
    }

    pub fn template(&self) -> &Template {
        &self.template
    }

    pub fn orbits(&self) -> &OrbitTable {
        &self.orbits
    }

    /// Node orbits of `N`, independent of `M`.
    pub fn node_orbits(&self) -> OrbitTable {
        compute_orbits(MKind::VanillaNode, &self.template)
    }

    /// Fails when the spec cannot run on the graph.
    pub fn check_compatible(&self, graph: &Graph) -> Result<()> {
        if self.n_class.is_signed() != graph.is_signed() {
            return Err(QuarkError::Config(format!(
                "motif {} is {}signed but the graph is {}signed",
                self.n_class,
                if self.n_class.is_signed() { "" } else { "un" },
                if graph.is_signed() { "" } else { "un" }
            )));
        }
        if self.n_class.is_labeled() && !graph.is_labeled() {
            return Err(QuarkError::Config(format!("motif {} needs node labels", self.n_class)));
        }
        if self.n_class.is_labeled() && !graph.is_undirected() {
            return Err(QuarkError::Config(format!(
                "labeled motif {} is undirected; load the graph in undirected mode",
                self.n_class
            )));
        }
        Ok(())
    }
}

impl fmt::Display for MotifSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m_kind.name(), self.n_class)
    }
}

fn link_of(graph: &Graph, u: NodeId, v: NodeId) -> Option<Link> {
    graph.link(u, v).map(|a| a.link)
}

/// Classifies the three links of a node triple `(x, y, z)`:
/// `xy` from x to y, `xz` from x to z, `yz` from y to z.
pub fn classify_directed_links(xy: Link, xz: Link, yz: Link) -> Option<DirectedTriangleClass> {
    let links = [xy, xz, yz];
    if links.iter().any(|l| matches!(l, Link::Both(..))) {
        return None;
    }
    let bidir = links.iter().filter(|&&l| l == Link::Bidir).count();
    let is_out = |l: Link| matches!(l, Link::Out(_));
    let is_in = |l: Link| matches!(l, Link::In(_));
    match bidir {
        0 => {
            let out_x = is_out(xy) as u8 + is_out(xz) as u8;
            let out_y = is_in(xy) as u8 + is_out(yz) as u8;
            let out_z = is_in(xz) as u8 + is_in(yz) as u8;
            if out_x == 1 && out_y == 1 && out_z == 1 {
                Some(DirectedTriangleClass::Cycle)
            } else {
                Some(DirectedTriangleClass::Acyclic)
            }
        }
        1 => {
            // links from the node outside the bidirectional pair
            let (a, b) = if xy == Link::Bidir {
                (xz.flip(), yz.flip())
            } else if xz == Link::Bidir {
                (xy.flip(), yz)
            } else {
                (xy, xz)
            };
            match (is_out(a), is_out(b)) {
                (true, true) => Some(DirectedTriangleClass::OutPlus),
                (false, false) => Some(DirectedTriangleClass::InPlus),
                _ => Some(DirectedTriangleClass::CyclePlus),
            }
        }
        2 => Some(DirectedTriangleClass::CyclePlusPlus),
        _ => Some(DirectedTriangleClass::Reciprocal),
    }
}

/// The directed triangle class induced on `u, v, w`, or `None` when some
/// pair is not connected.
pub fn classify_directed_triangle(graph: &Graph, u: NodeId, v: NodeId, w: NodeId) -> Option<DirectedTriangleClass> {
    classify_directed_links(link_of(graph, u, v)?, link_of(graph, u, w)?, link_of(graph, v, w)?)
}

/// Classifies a triple whose pairs each carry exactly one signed arc.
pub fn classify_signed_links(xy: Link, xz: Link, yz: Link) -> Option<SignedTriangleClass> {
    let arc = |l: Link| match l {
        Link::Out(Some(s)) => Some((true, s)),
        Link::In(Some(s)) => Some((false, s)),
        _ => None,
    };
    let (xy_out, s_xy) = arc(xy)?;
    let (xz_out, s_xz) = arc(xz)?;
    let (yz_out, s_yz) = arc(yz)?;
    let out_x = xy_out as u8 + xz_out as u8;
    let out_y = !xy_out as u8 + yz_out as u8;
    let out_z = !xz_out as u8 + !yz_out as u8;
    let minus = [s_xy, s_xz, s_yz].iter().filter(|&&s| s == Sign::Minus).count();
    use SignedTriangleClass::*;
    if out_x == 1 && out_y == 1 && out_z == 1 {
        return Some([CyclePPP, CyclePPM, CyclePMM, CycleMMM][minus]);
    }
    // identify source (2 out), middle (1 out), sink (0 out)
    let outs = [out_x, out_y, out_z];
    let source = outs.iter().position(|&o| o == 2)?;
    let middle = outs.iter().position(|&o| o == 1)?;
    let sink = outs.iter().position(|&o| o == 0)?;
    let sign_between = |a: usize, b: usize| match (a.min(b), a.max(b)) {
        (0, 1) => s_xy,
        (0, 2) => s_xz,
        _ => s_yz,
    };
    let signs = [sign_between(source, middle), sign_between(source, sink), sign_between(middle, sink)];
    let odd = match minus {
        1 => signs.iter().position(|&s| s == Sign::Minus),
        2 => signs.iter().position(|&s| s == Sign::Plus),
        _ => None,
    };
    Some(match (minus, odd) {
        (0, _) => AcyclicPPP,
        (3, _) => AcyclicMMM,
        (1, Some(0)) => AcyclicPPMa,
        (1, Some(1)) => AcyclicPPMb,
        (1, _) => AcyclicPPMc,
        (2, Some(0)) => AcyclicPMMa,
        (2, Some(1)) => AcyclicPMMb,
        _ => AcyclicPMMc,
    })
}

pub fn classify_signed_triangle(graph: &Graph, u: NodeId, v: NodeId, w: NodeId) -> Option<SignedTriangleClass> {
    classify_signed_links(link_of(graph, u, v)?, link_of(graph, u, w)?, link_of(graph, v, w)?)
}

/// True iff `nodes` form a clique (directions ignored) whose label
/// multiset equals the class multiset. Vanilla classes ignore labels.
pub fn match_labeled_clique(graph: &Graph, nodes: &[NodeId], class: &LabeledCliqueClass) -> bool {
    if nodes.len() != class.size() {
        return false;
    }
    for (i, &a) in nodes.iter().enumerate() {
        for &b in &nodes[i + 1..] {
            if a == b || !graph.connected(a, b) {
                return false;
            }
        }
    }
    if class.is_vanilla() {
        return true;
    }
    let mut labels: Vec<&str> = Vec::with_capacity(nodes.len());
    for &v in nodes {
        match graph.label(v) {
            Some(l) => labels.push(graph.label_name(l)),
            None => return false,
        }
    }
    labels.sort_unstable();
    labels.iter().zip(class.labels()).all(|(a, b)| *a == b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    fn spec(m: MKind, n: &str) -> MotifSpec {
        MotifSpec::parse(n, m).unwrap()
    }

    #[test]
    fn node_orbit_counts_match_colors() {
        let expected = [("cycle", 1), ("acyclic", 3), ("out+", 2), ("in+", 2), ("cycle+", 3), ("cycle++", 3), ("reciprocal", 1)];
        for (name, b) in expected {
            assert_eq!(spec(MKind::VanillaNode, name).b, b, "{name}");
        }
    }

    #[test]
    fn edge_orbit_counts() {
        let expected = [("cycle", 1), ("acyclic", 3), ("out+", 2), ("in+", 2), ("cycle+", 3), ("cycle++", 3), ("reciprocal", 1)];
        for (name, b) in expected {
            let s = spec(MKind::VanillaEdge, name);
            assert_eq!(s.b, b, "{name}");
            assert_eq!(s.t, 3);
        }
    }

    #[test]
    fn orbit_ids_are_ordered_by_first_position() {
        let s = spec(MKind::VanillaEdge, "out+");
        // positions (0,1), (0,2), (1,2): the two arcs share an orbit
        assert_eq!(s.orbits().positions(), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!((0..3).map(|p| s.orbits().orbit_of_position(p)).collect::<Vec<_>>(), vec![0, 0, 1]);
    }

    #[test]
    fn signed_orbits() {
        let b: Vec<usize> = SignedTriangleClass::ALL.iter().map(|c| MotifSpec::new(MKind::VanillaEdge, NClass::Signed(*c)).unwrap().b).collect();
        assert_eq!(b, vec![1, 3, 3, 1, 3, 3, 3, 3, 3, 3, 3, 3]);
    }

    #[test]
    fn labeled_orbits() {
        assert_eq!(spec(MKind::VanillaEdge, "tri:FMM").b, 2);
        assert_eq!(spec(MKind::VanillaEdge, "tri").b, 1);
        assert_eq!(spec(MKind::VanillaNode, "tri:FFM").b, 2);
        let s = spec(MKind::VanillaTriangle, "clique4:FFMM");
        assert_eq!((s.t, s.b), (4, 2));
        assert_eq!(spec(MKind::VanillaTriangle, "clique4:FFFM").b, 2);
        assert_eq!(spec(MKind::VanillaTriangle, "clique4").b, 1);
    }

    #[test]
    fn invalid_pairings_rejected() {
        assert!(MotifSpec::parse("clique4", MKind::VanillaEdge).is_err());
        assert!(MotifSpec::parse("acyclic", MKind::VanillaTriangle).is_err());
        assert!("quad".parse::<NClass>().is_err());
        assert!("tri:FF".parse::<NClass>().is_err());
    }

    #[test]
    fn names_round_trip() {
        let mut all = NClass::all_directed();
        all.extend(NClass::all_signed());
        all.push("tri:FFM".parse().unwrap());
        all.push("clique4".parse().unwrap());
        for c in all {
            assert_eq!(c.to_string().parse::<NClass>().unwrap(), c);
        }
        assert_eq!("vanilla tri".parse::<NClass>().unwrap(), "tri".parse().unwrap());
    }

    #[test]
    fn classify_examples() {
        let g = GraphBuilder::new(3).arc(0, 1).arc(1, 2).arc(2, 0).build();
        assert_eq!(classify_directed_triangle(&g, 0, 1, 2), Some(DirectedTriangleClass::Cycle));
        // A→B, B→C, A↔C
        let g = GraphBuilder::new(3).arc(0, 1).arc(1, 2).arc(0, 2).arc(2, 0).build();
        assert_eq!(classify_directed_triangle(&g, 0, 1, 2), Some(DirectedTriangleClass::CyclePlus));
        let g = GraphBuilder::undirected(3).arc(0, 1).arc(0, 2).arc(1, 2).build();
        assert_eq!(classify_directed_triangle(&g, 0, 1, 2), Some(DirectedTriangleClass::Reciprocal));
        // u↔v, w→u, w→v
        let g = GraphBuilder::new(3).arc(0, 1).arc(1, 0).arc(2, 0).arc(2, 1).build();
        assert_eq!(classify_directed_triangle(&g, 0, 1, 2), Some(DirectedTriangleClass::OutPlus));
        let g = GraphBuilder::new(3).arc(0, 1).arc(1, 2).build();
        assert_eq!(classify_directed_triangle(&g, 0, 1, 2), None);
    }

    #[test]
    fn classify_signed_examples() {
        use Sign::*;
        let g = GraphBuilder::new(3).signed_arc(0, 1, Plus).signed_arc(1, 2, Plus).signed_arc(2, 0, Plus).build();
        assert_eq!(classify_signed_triangle(&g, 0, 1, 2), Some(SignedTriangleClass::CyclePPP));
        let g = GraphBuilder::new(3).signed_arc(0, 1, Plus).signed_arc(0, 2, Plus).signed_arc(1, 2, Minus).build();
        assert_eq!(classify_signed_triangle(&g, 0, 1, 2), Some(SignedTriangleClass::AcyclicPPMc));
        let g = GraphBuilder::new(3).signed_arc(0, 1, Plus).signed_arc(1, 2, Minus).signed_arc(2, 0, Minus).build();
        assert_eq!(classify_signed_triangle(&g, 0, 1, 2), Some(SignedTriangleClass::CyclePMM));
    }

    #[test]
    fn labeled_clique_matching() {
        let g = GraphBuilder::undirected(4)
            .arc(0, 1).arc(0, 2).arc(0, 3).arc(1, 2).arc(1, 3).arc(2, 3)
            .labels(["F", "M", "M", "F"])
            .build();
        let fmm = LabeledCliqueClass::labeled(3, ["F", "M", "M"]).unwrap();
        let ffm = LabeledCliqueClass::labeled(3, ["F", "F", "M"]).unwrap();
        assert!(match_labeled_clique(&g, &[0, 1, 2], &fmm));
        assert!(!match_labeled_clique(&g, &[0, 1, 2], &ffm));
        let ffmm = LabeledCliqueClass::labeled(4, ["F", "F", "M", "M"]).unwrap();
        let fffm = LabeledCliqueClass::labeled(4, ["F", "F", "F", "M"]).unwrap();
        assert!(match_labeled_clique(&g, &[0, 1, 2, 3], &ffmm));
        assert!(!match_labeled_clique(&g, &[0, 1, 2, 3], &fffm));
        assert!(match_labeled_clique(&g, &[0, 1, 2, 3], &LabeledCliqueClass::vanilla(4).unwrap()));
    }
}
