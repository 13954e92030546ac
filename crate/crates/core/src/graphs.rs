//! Admissible trivalent trees, their colorings and the combinatorial
//! predicates (Clebsch–Gordan, non-triviality) indexing spectra and polytopes.
//!
//! A graph has `n` numbered half-edges (leaves) and `n - 3` internal edges.
//! Each internal edge is stored with an explicit orientation (tail, head);
//! `I(a)` is the set of half-edges on the tail side.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parity plus the three triangle inequalities.
pub fn clebsch_gordan_ok(p: u32, l: u32, m: u32) -> bool {
    let (p, l, m) = (p as u64, l as u64, m as u64);
    (p + l + m) % 2 == 0 && p <= l + m && l <= m + p && m <= l + p
}

/// `true` iff `Inv(V_{l_1} ⊗ … ⊗ V_{l_n})` is non-zero: even sum and no
/// entry exceeding half the sum.
pub fn nontrivial(boundary: &[u32]) -> bool {
    let sum: u64 = boundary.iter().map(|&l| l as u64).sum();
    sum.is_multiple_of(2) && boundary.iter().all(|&l| 2 * l as u64 <= sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    /// Half-edge number, 1-based.
    Half(usize),
    /// Index into [`AdmissibleGraph::internal_edges`].
    Internal(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub slots: [Slot; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InternalEdge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleGraph {
    n_half: usize,
    vertices: Vec<Vertex>,
    edges: Vec<InternalEdge>,
    half_attachment: Vec<usize>,
}

/// The half-edges on the tail side of an internal edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSubset {
    pub edge: String,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring {
    /// Colors of half-edges `1..=n`, stored 0-based.
    pub half: Vec<u32>,
    /// Colors of internal edges, in the graph's edge order.
    pub internal: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct ColoringJson {
    half: Vec<u32>,
    internal: BTreeMap<String, u32>,
}

impl Coloring {
    pub fn color(&self, slot: Slot) -> u32 {
        match slot {
            Slot::Half(k) => self.half[k - 1],
            Slot::Internal(e) => self.internal[e],
        }
    }

    pub fn is_admissible(&self, g: &AdmissibleGraph) -> bool {
        self.half.len() == g.n_half()
            && self.internal.len() == g.internal_edges().len()
            && g.vertices().iter().all(|v| {
                let [a, b, c] = v.slots.map(|s| self.color(s));
                clebsch_gordan_ok(a, b, c)
            })
    }

    /// Stable textual key such as `e1=0,e2=2`.
    pub fn key(&self, g: &AdmissibleGraph) -> String {
        g.internal_edges()
            .iter()
            .zip(&self.internal)
            .map(|(e, c)| format!("{}={}", e.id, c))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn to_json(&self, g: &AdmissibleGraph) -> serde_json::Value {
        let internal = g
            .internal_edges()
            .iter()
            .zip(&self.internal)
            .map(|(e, &c)| (e.id.clone(), c))
            .collect();
        serde_json::to_value(ColoringJson { half: self.half.clone(), internal })
            .expect("coloring serializes")
    }

    pub fn from_json(g: &AdmissibleGraph, value: &serde_json::Value) -> Result<Coloring> {
        let parsed: ColoringJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidArgument(format!("coloring json: {e}")))?;
        if parsed.half.len() != g.n_half() {
            return Err(Error::BoundaryMismatch(format!(
                "{} half-edge colors for {} half-edges",
                parsed.half.len(),
                g.n_half()
            )));
        }
        let mut internal = Vec::with_capacity(g.internal_edges().len());
        for e in g.internal_edges() {
            let c = parsed
                .internal
                .get(&e.id)
                .ok_or_else(|| Error::UnknownEdge(e.id.clone()))?;
            internal.push(*c);
        }
        if parsed.internal.len() != internal.len() {
            return Err(Error::InvalidArgument("coloring names extra edges".into()));
        }
        Ok(Coloring { half: parsed.half, internal })
    }
}

impl AdmissibleGraph {
    /// Validates the structural conditions and builds the graph.
    pub fn new(n_half: usize, vertices: Vec<Vertex>, edges: Vec<InternalEdge>) -> Result<Self> {
        let bad = |msg: String| Err(Error::NotAdmissible(msg));
        if n_half < 3 {
            return bad(format!("need at least 3 half-edges, got {n_half}"));
        }
        if vertices.len() != n_half - 2 {
            return bad(format!(
                "{} vertices for {} half-edges (expected {})",
                vertices.len(),
                n_half,
                n_half - 2
            ));
        }
        if edges.len() != n_half - 3 {
            return bad(format!(
                "{} internal edges for {} half-edges (expected {})",
                edges.len(),
                n_half,
                n_half - 3
            ));
        }
        let mut half_attachment = vec![usize::MAX; n_half];
        let mut edge_seen = vec![0usize; edges.len()];
        for (vi, v) in vertices.iter().enumerate() {
            for s in v.slots {
                match s {
                    Slot::Half(k) => {
                        if k == 0 || k > n_half {
                            return bad(format!("half-edge h{k} outside 1..{n_half}"));
                        }
                        if half_attachment[k - 1] != usize::MAX {
                            return bad(format!("half-edge h{k} used twice"));
                        }
                        half_attachment[k - 1] = vi;
                    }
                    Slot::Internal(e) => {
                        let edge = edges.get(e).ok_or_else(|| {
                            Error::NotAdmissible(format!("slot refers to missing edge {e}"))
                        })?;
                        if edge.tail != vi && edge.head != vi {
                            return bad(format!("edge {} not incident to vertex {}", edge.id, v.name));
                        }
                        edge_seen[e] += 1;
                    }
                }
            }
        }
        if let Some(k) = half_attachment.iter().position(|&v| v == usize::MAX) {
            return bad(format!("half-edge h{} missing", k + 1));
        }
        for (e, edge) in edges.iter().enumerate() {
            if edge.tail == edge.head {
                return bad(format!("edge {} is a loop", edge.id));
            }
            if edge_seen[e] != 2 {
                return bad(format!("edge {} must join two vertices", edge.id));
            }
        }
        // With |E| = |V| - 1, connectivity is equivalent to being a tree.
        let mut seen = vec![false; vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for s in vertices[v].slots {
                if let Slot::Internal(e) = s {
                    let w = if edges[e].tail == v { edges[e].head } else { edges[e].tail };
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return bad(format!("graph is disconnected (vertex {} unreachable)", vertices[v].name));
        }
        Ok(AdmissibleGraph { n_half, vertices, edges, half_attachment })
    }

    pub fn n_half(&self) -> usize {
        self.n_half
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn internal_edges(&self) -> &[InternalEdge] {
        &self.edges
    }

    pub fn half_attachment(&self, k: usize) -> usize {
        self.half_attachment[k - 1]
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    /// Vertex across `slot` from `vertex`, or `None` for a half-edge.
    pub fn neighbor(&self, vertex: usize, slot: Slot) -> Option<usize> {
        match slot {
            Slot::Half(_) => None,
            Slot::Internal(e) => {
                let edge = &self.edges[e];
                Some(if edge.tail == vertex { edge.head } else { edge.tail })
            }
        }
    }

    /// Half-edges reachable from `vertex` by leaving through `slot`.
    pub fn far_side(&self, vertex: usize, slot: Slot) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![(vertex, slot)];
        while let Some((v, s)) = stack.pop() {
            match self.neighbor(v, s) {
                None => {
                    if let Slot::Half(k) = s {
                        out.push(k);
                    }
                }
                Some(w) => {
                    for t in self.vertices[w].slots {
                        if t != s {
                            stack.push((w, t));
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// `I(a)` for the edge at index `e`.
    pub fn i_set(&self, e: usize) -> Vec<usize> {
        self.far_side(self.edges[e].head, Slot::Internal(e))
    }

    pub fn i_subset(&self, id: &str) -> Result<EdgeSubset> {
        let e = self.edge_index(id)?;
        Ok(EdgeSubset { edge: id.to_string(), members: self.i_set(e) })
    }

    /// Same graph with the orientation of one internal edge flipped.
    pub fn reversed(&self, id: &str) -> Result<AdmissibleGraph> {
        let e = self.edge_index(id)?;
        let mut g = self.clone();
        let edge = &mut g.edges[e];
        std::mem::swap(&mut edge.tail, &mut edge.head);
        Ok(g)
    }

    /// The chain graph: half-edges 1,2 at one end, `n-1, n` at the other,
    /// half-edge `i + 2` on the i-th inner vertex; `I(e_i) = {1, …, i + 1}`.
    pub fn caterpillar(n: usize) -> Result<AdmissibleGraph> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!("caterpillar needs n >= 3, got {n}")));
        }
        if n == 3 {
            let v = Vertex { name: "v1".into(), slots: [Slot::Half(1), Slot::Half(2), Slot::Half(3)] };
            return AdmissibleGraph::new(3, vec![v], vec![]);
        }
        let nv = n - 2;
        let mut vertices = Vec::with_capacity(nv);
        let mut edges = Vec::with_capacity(n - 3);
        for i in 0..n - 3 {
            edges.push(InternalEdge { id: format!("e{}", i + 1), tail: i, head: i + 1 });
        }
        vertices.push(Vertex {
            name: "v1".into(),
            slots: [Slot::Half(1), Slot::Half(2), Slot::Internal(0)],
        });
        for i in 1..nv - 1 {
            vertices.push(Vertex {
                name: format!("v{}", i + 1),
                slots: [Slot::Internal(i - 1), Slot::Half(i + 2), Slot::Internal(i)],
            });
        }
        vertices.push(Vertex {
            name: format!("v{nv}"),
            slots: [Slot::Internal(nv - 2), Slot::Half(n - 1), Slot::Half(n)],
        });
        AdmissibleGraph::new(n, vertices, edges)
    }

    /// Built-in graphs: `g4` pairs (1,2 | 3,4), `g4p` pairs (2,3 | 1,4),
    /// `cat<n>` is [`caterpillar`](Self::caterpillar), `star6` is the
    /// six-leaf tree with a central vertex.
    pub fn builtin(name: &str) -> Option<AdmissibleGraph> {
        match name {
            "g4" => Some(Self::caterpillar(4).expect("n = 4")),
            "g4p" => parse_graph("vertex A = h2 h3 e1\nvertex B = e1 h4 h1").ok(),
            "star6" => parse_graph(
                "vertex A = h1 h2 ea\nvertex B = h3 h4 eb\nvertex C = h5 h6 ec\nvertex O = ea eb ec",
            )
            .ok(),
            _ => name
                .strip_prefix("cat")
                .and_then(|n| n.parse::<usize>().ok())
                .and_then(|n| Self::caterpillar(n).ok()),
        }
    }

    /// Serializes in the line format accepted by [`parse_graph`]. Edges are
    /// written so that the tail vertex appears first.
    pub fn to_text(&self) -> String {
        // Topological order of the oriented tree, so tails precede heads.
        let mut order = Vec::with_capacity(self.vertices.len());
        let mut indeg = vec![0usize; self.vertices.len()];
        for e in &self.edges {
            indeg[e.head] += 1;
        }
        let mut ready: BTreeSet<usize> = (0..indeg.len()).filter(|&v| indeg[v] == 0).collect();
        while let Some(&v) = ready.iter().next() {
            ready.remove(&v);
            order.push(v);
            for e in &self.edges {
                if e.tail == v {
                    indeg[e.head] -= 1;
                    if indeg[e.head] == 0 {
                        ready.insert(e.head);
                    }
                }
            }
        }
        let mut out = String::new();
        for v in order {
            let vert = &self.vertices[v];
            let slots: Vec<String> = vert
                .slots
                .iter()
                .map(|s| match s {
                    Slot::Half(k) => format!("h{k}"),
                    Slot::Internal(e) => self.edges[*e].id.clone(),
                })
                .collect();
            out.push_str(&format!("vertex {} = {}\n", vert.name, slots.join(" ")));
        }
        out
    }
}

impl fmt::Display for AdmissibleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Parses the line format
///
/// ```text
/// # comment
/// vertex A = h1 h2 e1
/// vertex B = e1 h3 h4
/// ```
///
/// `;` also separates declarations and `A: h1 h2 e1` is accepted as a short
/// form. The first vertex naming an internal edge is its tail.
pub fn parse_graph(text: &str) -> Result<AdmissibleGraph> {
    let mut vertices = Vec::new();
    let mut edges: Vec<InternalEdge> = Vec::new();
    let mut max_half = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        for decl in line.split(';') {
            let decl = decl.trim();
            if decl.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: lineno + 1, msg };
            let (name, rest) = if let Some(body) = decl.strip_prefix("vertex ") {
                let (name, rest) = body
                    .split_once('=')
                    .ok_or_else(|| perr(format!("expected `vertex <name> = ...` in `{decl}`")))?;
                (name.trim(), rest)
            } else if let Some((name, rest)) = decl.split_once(':') {
                (name.trim(), rest)
            } else {
                return Err(perr(format!("unrecognized declaration `{decl}`")));
            };
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(perr(format!("bad vertex name `{name}`")));
            }
            if vertices.iter().any(|v: &Vertex| v.name == name) {
                return Err(Error::NotAdmissible(format!("vertex {name} declared twice")));
            }
            let vi = vertices.len();
            let mut slots = Vec::new();
            for tok in rest.split_whitespace() {
                if let Some(num) = tok.strip_prefix('h') {
                    let k: usize = num
                        .parse()
                        .map_err(|_| perr(format!("bad half-edge token `{tok}`")))?;
                    max_half = max_half.max(k);
                    slots.push(Slot::Half(k));
                } else if tok.starts_with('e') {
                    match edges.iter().position(|e| e.id == tok) {
                        Some(e) => {
                            if edges[e].head != usize::MAX {
                                return Err(Error::NotAdmissible(format!(
                                    "edge {tok} appears in more than two vertices"
                                )));
                            }
                            edges[e].head = vi;
                            slots.push(Slot::Internal(e));
                        }
                        None => {
                            edges.push(InternalEdge { id: tok.to_string(), tail: vi, head: usize::MAX });
                            slots.push(Slot::Internal(edges.len() - 1));
                        }
                    }
                } else {
                    return Err(perr(format!("bad slot token `{tok}`")));
                }
            }
            if slots.len() != 3 {
                return Err(Error::NotAdmissible(format!(
                    "vertex {name} has {} slots, expected 3",
                    slots.len()
                )));
            }
            vertices.push(Vertex { name: name.to_string(), slots: [slots[0], slots[1], slots[2]] });
        }
    }
    if vertices.is_empty() {
        return Err(Error::Parse { line: 0, msg: "no vertices".into() });
    }
    if let Some(e) = edges.iter().find(|e| e.head == usize::MAX) {
        return Err(Error::NotAdmissible(format!("edge {} appears in only one vertex", e.id)));
    }
    AdmissibleGraph::new(max_half, vertices, edges)
}

/// Admissible colorings extending `boundary`, sorted lexicographically by
/// internal colors.
///
/// Feasible color sets are propagated from the leaves towards vertex 0; the
/// enumeration then descends from the root choosing only feasible colors, so
/// every partial assignment extends and the work is linear in the output.
pub fn enumerate_colorings(g: &AdmissibleGraph, boundary: &[u32]) -> Vec<Coloring> {
    assert_eq!(boundary.len(), g.n_half(), "boundary length must equal the number of half-edges");
    let nv = g.vertices().len();
    // Pre-order from root 0 with the parent edge of each vertex.
    let mut order = Vec::with_capacity(nv);
    let mut parent_edge = vec![None; nv];
    let mut stack = vec![(0usize, None::<usize>)];
    while let Some((v, pe)) = stack.pop() {
        order.push(v);
        parent_edge[v] = pe;
        for s in g.vertices()[v].slots {
            if let Slot::Internal(e) = s {
                if Some(e) != pe {
                    stack.push((g.neighbor(v, s).unwrap(), Some(e)));
                }
            }
        }
    }

    let mut feasible: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); g.internal_edges().len()];
    let slot_set = |s: Slot, feasible: &Vec<BTreeSet<u32>>| -> BTreeSet<u32> {
        match s {
            Slot::Half(k) => BTreeSet::from([boundary[k - 1]]),
            Slot::Internal(e) => feasible[e].clone(),
        }
    };
    for &v in order.iter().rev() {
        let Some(pe) = parent_edge[v] else { continue };
        let others: Vec<Slot> =
            g.vertices()[v].slots.iter().copied().filter(|&s| s != Slot::Internal(pe)).collect();
        let a = slot_set(others[0], &feasible);
        let b = slot_set(others[1], &feasible);
        let mut out = BTreeSet::new();
        for &p in &a {
            for &q in &b {
                let mut m = p.abs_diff(q);
                while m <= p + q {
                    out.insert(m);
                    m += 2;
                }
            }
        }
        feasible[pe] = out;
    }

    let mut colors: Vec<Option<u32>> = vec![None; g.internal_edges().len()];
    let mut result = Vec::new();
    descend(g, boundary, &order, 0, &feasible, &mut colors, &mut result);
    result.sort_by(|a: &Coloring, b: &Coloring| a.internal.cmp(&b.internal));
    result
}

fn descend(
    g: &AdmissibleGraph,
    boundary: &[u32],
    order: &[usize],
    idx: usize,
    feasible: &[BTreeSet<u32>],
    colors: &mut Vec<Option<u32>>,
    out: &mut Vec<Coloring>,
) {
    if idx == order.len() {
        out.push(Coloring {
            half: boundary.to_vec(),
            internal: colors.iter().map(|c| c.expect("all edges colored")).collect(),
        });
        return;
    }
    let v = order[idx];
    let slots = g.vertices()[v].slots;
    let options: Vec<Vec<u32>> = slots
        .iter()
        .map(|&s| match s {
            Slot::Half(k) => vec![boundary[k - 1]],
            Slot::Internal(e) => match colors[e] {
                Some(c) => vec![c],
                None => feasible[e].iter().copied().collect(),
            },
        })
        .collect();
    let unset: Vec<usize> = slots
        .iter()
        .filter_map(|&s| match s {
            Slot::Internal(e) if colors[e].is_none() => Some(e),
            _ => None,
        })
        .collect();
    for &a in &options[0] {
        for &b in &options[1] {
            for &c in &options[2] {
                if !clebsch_gordan_ok(a, b, c) {
                    continue;
                }
                let picked = [a, b, c];
                for (i, &s) in slots.iter().enumerate() {
                    if let Slot::Internal(e) = s {
                        if unset.contains(&e) {
                            colors[e] = Some(picked[i]);
                        }
                    }
                }
                descend(g, boundary, order, idx + 1, feasible, colors, out);
                for &e in &unset {
                    colors[e] = None;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(g: &AdmissibleGraph, boundary: &[u32]) -> Vec<Coloring> {
        let max = boundary.iter().sum::<u32>();
        let ne = g.internal_edges().len();
        let mut out = Vec::new();
        let mut internal = vec![0u32; ne];
        loop {
            let c = Coloring { half: boundary.to_vec(), internal: internal.clone() };
            if c.is_admissible(g) {
                out.push(c);
            }
            let mut i = ne;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if internal[i] < max {
                    internal[i] += 1;
                    break;
                }
                internal[i] = 0;
            }
        }
    }

    #[test]
    fn clebsch_gordan_examples() {
        assert!(clebsch_gordan_ok(0, 1, 1));
        assert!(!clebsch_gordan_ok(1, 1, 1));
        assert!(!clebsch_gordan_ok(5, 1, 2));
        assert!(clebsch_gordan_ok(4, 2, 2));
    }

    #[test]
    fn clebsch_gordan_symmetric() {
        for p in 0..8 {
            for l in 0..8 {
                for m in 0..8 {
                    let v = clebsch_gordan_ok(p, l, m);
                    assert_eq!(v, clebsch_gordan_ok(l, p, m));
                    assert_eq!(v, clebsch_gordan_ok(m, l, p));
                    assert_eq!(v, clebsch_gordan_ok(p, m, l));
                }
            }
        }
    }

    #[test]
    fn parses_two_vertex_graph() {
        let g = parse_graph("A: h1 h2 e; B: h3 h4 e").unwrap();
        assert_eq!(g.n_half(), 4);
        assert_eq!(g.internal_edges().len(), 1);
        assert_eq!(g.i_subset("e").unwrap().members, vec![1, 2]);
        assert_eq!(g, parse_graph(&g.to_text()).unwrap());
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(matches!(
            parse_graph("vertex A = h1 h2 h3 e1\nvertex B = e1 h4 h5"),
            Err(Error::NotAdmissible(_))
        ));
        assert!(matches!(
            parse_graph("vertex A = h1 h2 h3\nvertex B = h4 h5 h6"),
            Err(Error::NotAdmissible(_))
        ));
        assert!(matches!(parse_graph("vertex A = h1 h2 x3"), Err(Error::Parse { .. })));
        // h2 missing from the numbering
        assert!(matches!(
            parse_graph("vertex A = h1 h3 e1\nvertex B = e1 h4 h5"),
            Err(Error::NotAdmissible(_))
        ));
        // cycle: three vertices joined in a triangle
        assert!(matches!(
            parse_graph("vertex A = h1 ea ec\nvertex B = h2 ea eb\nvertex C = h3 eb ec"),
            Err(Error::NotAdmissible(_))
        ));
    }

    #[test]
    fn caterpillar_subsets() {
        let g = AdmissibleGraph::caterpillar(4).unwrap();
        assert_eq!(g.internal_edges().len(), 1);
        assert_eq!(g.i_set(0), vec![1, 2]);
        let g = AdmissibleGraph::caterpillar(5).unwrap();
        assert_eq!(g.i_set(0), vec![1, 2]);
        assert_eq!(g.i_subset("e2").unwrap().members, vec![1, 2, 3]);
        let g = AdmissibleGraph::caterpillar(3).unwrap();
        assert_eq!(g.vertices().len(), 1);
        assert!(g.internal_edges().is_empty());
        assert!(AdmissibleGraph::caterpillar(2).is_err());
    }

    #[test]
    fn reversal_complements() {
        for name in ["g4", "g4p", "cat5", "cat7", "star6"] {
            let g = AdmissibleGraph::builtin(name).unwrap();
            for e in g.internal_edges() {
                let a = g.i_subset(&e.id).unwrap().members;
                let b = g.reversed(&e.id).unwrap().i_subset(&e.id).unwrap().members;
                let mut all: Vec<usize> = a.iter().chain(&b).copied().collect();
                all.sort_unstable();
                assert_eq!(all, (1..=g.n_half()).collect::<Vec<_>>());
            }
        }
        let g = AdmissibleGraph::builtin("g4").unwrap();
        assert_eq!(g.reversed("e1").unwrap().i_set(0), vec![3, 4]);
    }

    #[test]
    fn coloring_examples() {
        let g = AdmissibleGraph::builtin("g4").unwrap();
        let internal = |b: &[u32]| -> Vec<u32> {
            enumerate_colorings(&g, b).iter().map(|c| c.internal[0]).collect()
        };
        assert_eq!(internal(&[1, 1, 1, 1]), vec![0, 2]);
        assert_eq!(internal(&[2, 2, 2, 2]), vec![0, 2, 4]);
        assert_eq!(internal(&[1, 1, 1, 3]), vec![2]);
        assert!(internal(&[1, 1, 1, 5]).is_empty());
    }

    #[test]
    fn dp_matches_brute_force() {
        for name in ["g4", "g4p", "cat5", "cat6", "star6"] {
            let g = AdmissibleGraph::builtin(name).unwrap();
            let n = g.n_half();
            let mut b = vec![0u32; n];
            loop {
                assert_eq!(enumerate_colorings(&g, &b), brute_force(&g, &b), "{name} {b:?}");
                let mut i = 0;
                while i < n && b[i] == 3 {
                    b[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
                b[i] += 1;
            }
        }
    }

    #[test]
    fn nontrivial_examples() {
        assert!(!nontrivial(&[1, 1, 1]));
        assert!(!nontrivial(&[1, 1, 1, 5]));
        assert!(nontrivial(&[1, 1, 1, 1]));
    }

    #[test]
    fn nontrivial_iff_colorable() {
        for name in ["g4", "g4p", "cat5", "cat6", "star6"] {
            let g = AdmissibleGraph::builtin(name).unwrap();
            let n = g.n_half();
            let mut b = vec![0u32; n];
            loop {
                assert_eq!(nontrivial(&b), !enumerate_colorings(&g, &b).is_empty(), "{name} {b:?}");
                let mut i = 0;
                while i < n && b[i] == 6 {
                    b[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
                b[i] += 1;
            }
        }
    }

    #[test]
    fn count_independent_of_graph() {
        let shapes6 = [
            AdmissibleGraph::builtin("cat6").unwrap(),
            AdmissibleGraph::builtin("star6").unwrap(),
            parse_graph("vertex A = h3 h5 e1\nvertex B = e1 h1 e2\nvertex C = e2 h6 e3\nvertex D = e3 h2 h4")
                .unwrap(),
        ];
        for b in [[1u32, 1, 1, 1, 1, 1], [2, 1, 3, 2, 1, 1], [3, 3, 2, 2, 1, 1]] {
            let counts: Vec<usize> = shapes6.iter().map(|g| enumerate_colorings(g, &b).len()).collect();
            assert!(counts.windows(2).all(|w| w[0] == w[1]), "{b:?}: {counts:?}");
        }
        let g4 = AdmissibleGraph::builtin("g4").unwrap();
        let g4p = AdmissibleGraph::builtin("g4p").unwrap();
        for b in [[1u32, 1, 2, 2], [1, 2, 3, 2], [3, 3, 3, 3]] {
            assert_eq!(enumerate_colorings(&g4, &b).len(), enumerate_colorings(&g4p, &b).len());
        }
    }

    #[test]
    fn coloring_json_roundtrip() {
        let g = AdmissibleGraph::builtin("cat5").unwrap();
        for c in enumerate_colorings(&g, &[1, 1, 1, 1, 2]) {
            let v = c.to_json(&g);
            assert_eq!(Coloring::from_json(&g, &v).unwrap(), c);
        }
        let c = &enumerate_colorings(&g, &[1, 1, 1, 1, 2])[0];
        assert_eq!(c.to_json(&g), serde_json::json!({"half": [1,1,1,1,2], "internal": {"e1": 0, "e2": 1}}));
    }
}
