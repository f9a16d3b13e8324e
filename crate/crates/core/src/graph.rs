//! Incidence matrices of simple directed graphs.
//!
//! The nullspace of an incidence matrix is the flow space of the graph, and
//! its extreme points are the normalized signed characteristic vectors of the
//! simple cycles of the underlying undirected graph. Membership of an edge
//! set `S` then reduces to counting: `2·|S ∩ C| < |C|` for every cycle `C`.

use std::collections::{HashMap, VecDeque};
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{MascError, Result};
use crate::linalg::RealMatrix;
use crate::masc::{ExtremePoint, Margin, MembershipOracle, MembershipVerdict, Witness};
use crate::rng::stream;
use crate::support::SupportSet;

/// Default cap on the number of simple cycles enumerated.
pub const DEFAULT_CYCLE_CAP: u64 = 1_000_000;

/// A simple directed graph whose edge order fixes the incidence columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedSimpleGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    /// Undirected adjacency: `(neighbour, edge index)`.
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl DirectedSimpleGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = HashMap::new();
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (k, &(t, h)) in edges.iter().enumerate() {
            if t >= vertex_count || h >= vertex_count {
                return Err(MascError::input(format!("edge {k} ({t}, {h}) has a vertex outside 0..{vertex_count}")));
            }
            if t == h {
                return Err(MascError::input(format!("edge {k} is a self loop at vertex {t}")));
            }
            if let Some(prev) = seen.insert((t.min(h), t.max(h)), k) {
                return Err(MascError::input(format!("edges {prev} and {k} join the same vertex pair")));
            }
            adjacency[t].push((h, k));
            adjacency[h].push((t, k));
        }
        adjacency.iter_mut().for_each(|a| a.sort_unstable());
        Ok(DirectedSimpleGraph { vertex_count, edges, adjacency })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Cycle on `len ≥ 3` vertices, edges `i → i+1 (mod len)`.
    pub fn cycle(len: usize) -> Result<Self> {
        if len < 3 {
            return Err(MascError::input("a simple cycle needs at least 3 vertices"));
        }
        Self::new(len, (0..len).map(|i| (i, (i + 1) % len)).collect())
    }

    /// Two vertices joined by three internally disjoint directed paths with
    /// `a ≤ b ≤ c` edges (`a ≥ 1`, `b ≥ 2`). Its cycles have lengths `a+b`,
    /// `a+c` and `b+c`. Vertex 0 is the common start, vertex 1 the common end.
    pub fn theta(a: usize, b: usize, c: usize) -> Result<Self> {
        let mut lens = [a, b, c];
        lens.sort_unstable();
        if lens[0] < 1 || lens[1] < 2 {
            return Err(MascError::input("theta graph needs paths of length ≥ 1, ≥ 2 and ≥ 2"));
        }
        let mut edges = Vec::new();
        let mut next = 2;
        for len in lens {
            let mut prev = 0;
            for _ in 0..len - 1 {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
            edges.push((prev, 1));
        }
        Self::new(next, edges)
    }

    /// Reads the `m n` header followed by one `tail head` pair per edge.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tok = text.split_whitespace().map(|t| {
            t.parse::<usize>().map_err(|_| MascError::input(format!("bad integer `{t}` in graph file")))
        });
        let mut next = |what: &str| tok.next().unwrap_or_else(|| Err(MascError::input(format!("graph file ends before {what}"))));
        let m = next("the vertex count")?;
        let n = next("the edge count")?;
        let edges = (0..n).map(|_| Ok((next("an edge")?, next("an edge")?))).collect::<Result<Vec<_>>>()?;
        if tok.next().is_some() {
            return Err(MascError::input(format!("graph file lists more than {n} edges")));
        }
        Self::new(m, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.vertex_count, self.edges.len());
        for (t, h) in &self.edges {
            out.push_str(&format!("{t} {h}\n"));
        }
        out
    }

    /// `m × n` matrix with `−1` at each edge's tail and `+1` at its head.
    /// Fails for graphs without vertices or edges (an empty matrix).
    pub fn incidence_matrix(&self) -> Result<RealMatrix> {
        let n = self.edges.len();
        let mut e = vec![0i64; self.vertex_count * n];
        for (k, &(t, h)) in self.edges.iter().enumerate() {
            e[t * n + k] = -1;
            e[h * n + k] = 1;
        }
        RealMatrix::from_integers(self.vertex_count, n, &e)
    }

    fn edge_between(&self, u: usize, v: usize) -> usize {
        let adj = &self.adjacency[u];
        adj[adj.partition_point(|&(w, _)| w < v)].1
    }
}

/// A simple cycle of the underlying undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleCycle {
    /// `u₁, …, u_r`; the closing edge `u_r u₁` is implied.
    pub vertices: Vec<usize>,
    /// Sorted edge indices.
    pub edges: Vec<usize>,
    /// `+1` on edges traversed forward, `−1` backward, `0` off the cycle.
    /// The lowest-indexed edge is always traversed forward.
    pub signed_char_vector: Vec<i8>,
}

impl SimpleCycle {
    fn from_walk(g: &DirectedSimpleGraph, walk: &[usize]) -> Self {
        let r = walk.len();
        let step = |i: usize| (walk[i], walk[(i + 1) % r]);
        let mut vertices = walk.to_vec();
        let lowest = (0..r).min_by_key(|&i| g.edge_between(step(i).0, step(i).1)).expect("cycle has edges");
        let (u, v) = step(lowest);
        let k = g.edge_between(u, v);
        if g.edges[k] != (u, v) {
            // reverse direction, keeping the first vertex
            vertices[1..].reverse();
        }
        let mut signed = vec![0i8; g.edge_count()];
        let mut edges = Vec::with_capacity(r);
        for i in 0..r {
            let (a, b) = (vertices[i], vertices[(i + 1) % r]);
            let e = g.edge_between(a, b);
            signed[e] = if g.edges[e] == (a, b) { 1 } else { -1 };
            edges.push(e);
        }
        edges.sort_unstable();
        SimpleCycle { vertices, edges, signed_char_vector: signed }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `w(C) / ‖w(C)‖₁`.
    pub fn normalized(&self) -> ExtremePoint {
        let v: Vec<BigInt> = self.signed_char_vector.iter().map(|&s| BigInt::from(s)).collect();
        ExtremePoint::from_direction(&v)
    }

    fn hits(&self, mask: &[bool]) -> usize {
        self.edges.iter().filter(|&&e| mask[e]).count()
    }
}

/// Streams every simple cycle (once per traversal direction pair) to `visit`
/// until it returns `Break`. Order is Johnson's, not sorted.
///
/// Johnson's algorithm runs on the symmetric digraph (each edge as two arcs);
/// its 2-cycles are dropped and each remaining cycle is reported in the
/// direction where the second vertex is smaller than the last.
pub fn for_each_cycle<B>(g: &DirectedSimpleGraph, mut visit: impl FnMut(SimpleCycle) -> ControlFlow<B>) -> Option<B> {
    let m = g.vertex_count;
    let mut st = Johnson {
        g,
        blocked: vec![false; m],
        blist: vec![Vec::new(); m],
        stack: Vec::new(),
        active: vec![false; m],
    };
    for s in 0..m {
        // the component of s among vertices ≥ s
        st.active.iter_mut().for_each(|a| *a = false);
        let mut queue = VecDeque::from([s]);
        st.active[s] = true;
        while let Some(u) = queue.pop_front() {
            for &(w, _) in &g.adjacency[u] {
                if w > s && !st.active[w] {
                    st.active[w] = true;
                    queue.push_back(w);
                }
            }
        }
        for v in 0..m {
            st.blocked[v] = false;
            st.blist[v].clear();
        }
        let mut out = None;
        st.circuit(s, s, &mut |walk: &[usize]| {
            if walk.len() >= 3 && walk[1] < walk[walk.len() - 1] {
                if let ControlFlow::Break(b) = visit(SimpleCycle::from_walk(g, walk)) {
                    out = Some(b);
                    return true;
                }
            }
            false
        });
        if out.is_some() {
            return out;
        }
    }
    None
}

struct Johnson<'a> {
    g: &'a DirectedSimpleGraph,
    blocked: Vec<bool>,
    blist: Vec<Vec<usize>>,
    stack: Vec<usize>,
    active: Vec<bool>,
}

impl Johnson<'_> {
    fn unblock(&mut self, u: usize) {
        let mut todo = vec![u];
        while let Some(x) = todo.pop() {
            if self.blocked[x] {
                self.blocked[x] = false;
                todo.extend(std::mem::take(&mut self.blist[x]));
            }
        }
    }

    /// Returns (found a cycle, stop requested).
    fn circuit(&mut self, v: usize, s: usize, emit: &mut dyn FnMut(&[usize]) -> bool) -> (bool, bool) {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        let g = self.g;
        for &(w, _) in &g.adjacency[v] {
            if !self.active[w] {
                continue;
            }
            if w == s {
                found = true;
                if emit(&self.stack) {
                    return (true, true);
                }
            } else if !self.blocked[w] {
                let (f, stop) = self.circuit(w, s, emit);
                if stop {
                    return (true, true);
                }
                found |= f;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &(w, _) in &g.adjacency[v] {
                if self.active[w] && !self.blist[w].contains(&v) {
                    self.blist[w].push(v);
                }
            }
        }
        self.stack.pop();
        (found, false)
    }
}

/// Every simple cycle, sorted by edge set. Fails beyond `cap` cycles.
pub fn enumerate_simple_cycles(g: &DirectedSimpleGraph) -> Result<Vec<SimpleCycle>> {
    enumerate_simple_cycles_capped(g, DEFAULT_CYCLE_CAP)
}

pub fn enumerate_simple_cycles_capped(g: &DirectedSimpleGraph, cap: u64) -> Result<Vec<SimpleCycle>> {
    let mut cycles = Vec::new();
    let over = for_each_cycle(g, |c| {
        if cycles.len() as u64 >= cap {
            return ControlFlow::Break(());
        }
        cycles.push(c);
        ControlFlow::Continue(())
    });
    if over.is_some() {
        return Err(MascError::Budget {
            what: "simple cycle enumeration",
            count: format!("more than {cap}"),
            cap,
            hint: "use lazy membership checks, which stop at the first violated cycle",
        });
    }
    cycles.sort_by(|a, b| a.edges.cmp(&b.edges));
    Ok(cycles)
}

/// Length of the shortest cycle by BFS from every vertex; `None` for forests.
pub fn girth(g: &DirectedSimpleGraph) -> Option<usize> {
    let m = g.vertex_count;
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; m];
    let mut parent_edge = vec![usize::MAX; m];
    for root in 0..m {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        parent_edge[root] = usize::MAX;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if best.is_some_and(|b| 2 * dist[u] + 1 >= b) {
                break;
            }
            for &(w, e) in &g.adjacency[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent_edge[w] = e;
                    queue.push_back(w);
                } else if e != parent_edge[u] {
                    let len = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// Normalized signed characteristic vectors, one per cycle.
pub fn w1(g: &DirectedSimpleGraph) -> Result<Vec<ExtremePoint>> {
    Ok(enumerate_simple_cycles(g)?.iter().map(SimpleCycle::normalized).collect())
}

fn edge_mask(g: &DirectedSimpleGraph, s: &SupportSet) -> Result<Vec<bool>> {
    if s.ambient_dim() != g.edge_count() {
        return Err(MascError::input(format!(
            "support lives in dimension {}, graph has {} edges",
            s.ambient_dim(),
            g.edge_count()
        )));
    }
    let mut mask = vec![false; g.edge_count()];
    s.indices().iter().for_each(|&i| mask[i] = true);
    Ok(mask)
}

fn cycle_verdict(best: Option<(BigRational, SimpleCycle)>) -> MembershipVerdict {
    let half = BigRational::new(1.into(), 2.into());
    match best {
        None => MembershipVerdict {
            decided: true,
            in_masc: true,
            complete: true,
            margin: Margin::Exact(half),
            witness: None,
            worst_gamma: None,
        },
        Some((margin, c)) => {
            let in_masc = margin > BigRational::zero();
            MembershipVerdict {
                decided: true,
                in_masc,
                complete: true,
                margin: Margin::Exact(margin),
                witness: (!in_masc).then(|| Witness::Exact(c.normalized())),
                worst_gamma: Some(SupportSet::from_sorted_unchecked(c.signed_char_vector.len(), c.edges.clone())),
            }
        }
    }
}

fn cycle_margin(c: &SimpleCycle, mask: &[bool]) -> BigRational {
    BigRational::new(1.into(), 2.into()) - BigRational::new(c.hits(mask).into(), c.len().into())
}

/// Exhaustive verdict over all cycles: margin `min_C (1/2 − |S∩C|/|C|)`.
pub fn masc_contains_graph(g: &DirectedSimpleGraph, s: &SupportSet) -> Result<MembershipVerdict> {
    let mask = edge_mask(g, s)?;
    let mut best: Option<(BigRational, SimpleCycle)> = None;
    let mut count = 0u64;
    let over = for_each_cycle(g, |c| {
        count += 1;
        if count > DEFAULT_CYCLE_CAP {
            return ControlFlow::Break(());
        }
        let m = cycle_margin(&c, &mask);
        if best.as_ref().is_none_or(|(b, bc)| m < *b || (m == *b && c.edges < bc.edges)) {
            best = Some((m, c));
        }
        ControlFlow::Continue(())
    });
    if over.is_some() {
        return Err(MascError::Budget {
            what: "exhaustive cycle check",
            count: format!("more than {DEFAULT_CYCLE_CAP}"),
            cap: DEFAULT_CYCLE_CAP,
            hint: "use masc_contains_graph_lazy",
        });
    }
    Ok(cycle_verdict(best))
}

/// Streams cycles and stops at the first violated one. On rejection the
/// margin is that cycle's, an upper bound on the exhaustive margin.
pub fn masc_contains_graph_lazy(g: &DirectedSimpleGraph, s: &SupportSet) -> Result<MembershipVerdict> {
    let mask = edge_mask(g, s)?;
    if s.is_empty() {
        return masc_contains_graph(g, s);
    }
    let mut best: Option<(BigRational, SimpleCycle)> = None;
    let violated = for_each_cycle(g, |c| {
        let m = cycle_margin(&c, &mask);
        if m <= BigRational::zero() {
            return ControlFlow::Break((m, c));
        }
        if best.as_ref().is_none_or(|(b, _)| m < *b) {
            best = Some((m, c));
        }
        ControlFlow::Continue(())
    });
    Ok(cycle_verdict(violated.or(best)))
}

/// Membership oracle over a precomputed cycle list.
#[derive(Clone, Debug)]
pub struct GraphOracle {
    n: usize,
    cycles: Vec<SimpleCycle>,
}

impl GraphOracle {
    pub fn new(g: &DirectedSimpleGraph) -> Result<Self> {
        Ok(GraphOracle { n: g.edge_count(), cycles: enumerate_simple_cycles(g)? })
    }

    pub fn cycles(&self) -> &[SimpleCycle] {
        &self.cycles
    }
}

impl MembershipOracle for GraphOracle {
    fn ambient_dim(&self) -> usize {
        self.n
    }

    fn contains(&self, s: &SupportSet) -> Result<MembershipVerdict> {
        if s.ambient_dim() != self.n {
            return Err(MascError::input("support dimension differs from the edge count"));
        }
        let mut mask = vec![false; self.n];
        s.indices().iter().for_each(|&i| mask[i] = true);
        // worst cycle by the cross-multiplied ratio |S∩C|/|C|
        let worst = self
            .cycles
            .iter()
            .max_by(|a, b| (a.hits(&mask) * b.len()).cmp(&(b.hits(&mask) * a.len())).then(b.edges.cmp(&a.edges)));
        Ok(cycle_verdict(worst.map(|c| (cycle_margin(c, &mask), c.clone()))))
    }
}

/// `min{1, s/g}`, or 0 for a forest.
pub fn nsc_graph(s: usize, g: &DirectedSimpleGraph) -> Result<BigRational> {
    if s == 0 {
        return Err(MascError::input("sparsity must be at least 1"));
    }
    Ok(match girth(g) {
        None => BigRational::zero(),
        Some(gi) => BigRational::new(s.into(), gi.into()).min(BigRational::one()),
    })
}

/// Largest `s` with `2s < g`; the edge count for a forest.
pub fn max_uniform_sparsity(g: &DirectedSimpleGraph) -> usize {
    match girth(g) {
        None => g.edge_count(),
        Some(gi) => (gi - 1) / 2,
    }
}

/// Each pair `i < j` joins with probability `p` as the edge `i → j`, drawing
/// one uniform `f64` per pair from stream `(seed, 0)` in lexicographic order.
pub fn erdos_renyi(vertices: usize, p: f64, seed: u64) -> Result<DirectedSimpleGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(MascError::input(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = stream(seed, 0);
    let mut edges = Vec::new();
    for i in 0..vertices {
        for j in (i + 1)..vertices {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    DirectedSimpleGraph::new(vertices, edges)
}
