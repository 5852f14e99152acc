//! Stable graphs of genus `g` with `n` markings, and the degree check that
//! forces tautological 0-cycles onto strata whose vertices all have genus 0.
//!
//! Graphs are stored in canonical form, so two [`StableGraph`] values are
//! equal exactly when the graphs are isomorphic (preserving vertex genera
//! and marking labels).

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Vertex {
    pub genus: u32,
    /// Marking labels carried by the vertex, sorted.
    pub legs: Vec<u32>,
}

impl Vertex {
    pub fn new(genus: u32, mut legs: Vec<u32>) -> Self {
        legs.sort_unstable();
        Vertex { genus, legs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StableGraph {
    vertices: Vec<Vertex>,
    /// Endpoint pairs `(u, v)` with `u <= v`, sorted; loops are `(v, v)`.
    edges: Vec<(usize, usize)>,
}

impl StableGraph {
    /// Builds a graph after checking stability, connectivity and that the
    /// marking labels are exactly `1..=n` for some `n`. The result is in
    /// canonical form.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let nv = vertices.len();
        if nv == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= nv || v >= nv) {
            return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range")));
        }
        let vertices: Vec<Vertex> = vertices
            .into_iter()
            .map(|v| Vertex::new(v.genus, v.legs))
            .collect();
        let mut labels: Vec<u32> = vertices.iter().flat_map(|v| v.legs.iter().copied()).collect();
        labels.sort_unstable();
        if labels.iter().enumerate().any(|(i, &l)| l as usize != i + 1) {
            return Err(Error::InvalidGraph(format!(
                "marking labels {labels:?} do not partition 1..={}",
                labels.len()
            )));
        }
        let edges: Vec<(usize, usize)> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        let valence = valences(&vertices, &edges);
        for (i, v) in vertices.iter().enumerate() {
            if 2 * v.genus as i64 - 2 + valence[i] as i64 <= 0 {
                return Err(Error::InvalidGraph(format!("vertex {i} is unstable")));
            }
        }
        if !connected(nv, &edges) {
            return Err(Error::InvalidGraph("graph is disconnected".into()));
        }
        Ok(canonical_form(vertices, edges))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Arithmetic genus: vertex genera plus the first Betti number.
    pub fn genus(&self) -> u32 {
        let h1 = self.edges.len() + 1 - self.vertices.len();
        self.vertices.iter().map(|v| v.genus).sum::<u32>() + h1 as u32
    }

    pub fn markings(&self) -> u32 {
        self.vertices.iter().map(|v| v.legs.len() as u32).sum()
    }

    /// `n(v)`: legs plus incident half-edges, loops counted twice.
    pub fn valences(&self) -> Vec<u32> {
        valences(&self.vertices, &self.edges)
    }

    /// Budgets of the vertices, in vertex order.
    pub fn budgets(&self) -> Vec<VertexDegreeBudget> {
        self.vertices
            .iter()
            .zip(self.valences())
            .map(|(v, n)| VertexDegreeBudget::new(v.genus, n))
            .collect()
    }

    /// Smooth curves of genus `g` with markings `1..=n`.
    fn smooth(g: u32, n: u32) -> Self {
        StableGraph {
            vertices: vec![Vertex::new(g, (1..=n).collect())],
            edges: Vec::new(),
        }
    }

    /// Graphs with one more edge obtained by replacing a vertex with a loop
    /// (dropping its genus by one) or with two vertices joined by an edge.
    fn degenerations(&self) -> Vec<StableGraph> {
        let mut out = Vec::new();
        for (v, vert) in self.vertices.iter().enumerate() {
            if vert.genus > 0 {
                let mut vertices = self.vertices.clone();
                vertices[v].genus -= 1;
                let mut edges = self.edges.clone();
                edges.push((v, v));
                out.push(canonical_form(vertices, edges));
            }
            self.splittings(v, &mut out);
        }
        out
    }

    fn splittings(&self, v: usize, out: &mut Vec<StableGraph>) {
        let vert = &self.vertices[v];
        // Half-edge ends at v: (edge index, endpoint slot).
        let mut ends = Vec::new();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if a == v {
                ends.push((i, 0));
            }
            if b == v {
                ends.push((i, 1));
            }
        }
        let items = ends.len() + vert.legs.len();
        let w = self.vertices.len();
        // The first item stays on the old vertex; swapping the sides gives an
        // isomorphic graph.
        let masks = if items == 0 { 1u64 } else { 1u64 << (items - 1) };
        for mask in 0..masks {
            let on_new = |item: usize| item > 0 && mask >> (item - 1) & 1 == 1;
            let moved_ends = (0..ends.len()).filter(|&i| on_new(i)).count() as i64;
            let moved_legs: Vec<u32> = (0..vert.legs.len())
                .filter(|&j| on_new(ends.len() + j))
                .map(|j| vert.legs[j])
                .collect();
            let kept_legs: Vec<u32> = (0..vert.legs.len())
                .filter(|&j| !on_new(ends.len() + j))
                .map(|j| vert.legs[j])
                .collect();
            let n_new = moved_ends + moved_legs.len() as i64 + 1;
            let n_old = items as i64 - moved_ends - moved_legs.len() as i64 + 1;
            for g_new in 0..=vert.genus {
                let g_old = vert.genus - g_new;
                if 2 * g_new as i64 - 2 + n_new <= 0 || 2 * g_old as i64 - 2 + n_old <= 0 {
                    continue;
                }
                let mut vertices = self.vertices.clone();
                vertices[v] = Vertex::new(g_old, kept_legs.clone());
                vertices.push(Vertex::new(g_new, moved_legs.clone()));
                let mut edges = self.edges.clone();
                for (i, &(e, slot)) in ends.iter().enumerate() {
                    if on_new(i) {
                        if slot == 0 {
                            edges[e].0 = w;
                        } else {
                            edges[e].1 = w;
                        }
                    }
                }
                edges.push((v, w));
                out.push(canonical_form(vertices, edges));
            }
        }
    }
}

fn valences(vertices: &[Vertex], edges: &[(usize, usize)]) -> Vec<u32> {
    let mut n: Vec<u32> = vertices.iter().map(|v| v.legs.len() as u32).collect();
    for &(a, b) in edges {
        n[a] += 1;
        n[b] += 1;
    }
    n
}

fn connected(nv: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; nv];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b) in edges {
            for (p, q) in [(a, b), (b, a)] {
                if p == x && !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Ranks vertices by color refinement, starting from (genus, valence, legs,
/// loops) and splitting on the multiset of neighbour ranks and edge
/// multiplicities until stable. Ranks are isomorphism invariant.
fn refined_ranks(vertices: &[Vertex], edges: &[(usize, usize)]) -> Vec<usize> {
    let nv = vertices.len();
    let valence = valences(vertices, edges);
    let mut loops = vec![0usize; nv];
    // Neighbour lists with multiplicity; `edges` may be unsorted here.
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for &(a, b) in edges {
        if a == b {
            loops[a] += 1;
            continue;
        }
        for (x, y) in [(a, b), (b, a)] {
            match adj[x].iter_mut().find(|(w, _)| *w == y) {
                Some((_, m)) => *m += 1,
                None => adj[x].push((y, 1)),
            }
        }
    }
    let initial: Vec<_> = (0..nv)
        .map(|v| (vertices[v].genus, valence[v], vertices[v].legs.clone(), loops[v]))
        .collect();
    let mut ranks = rank_by(&initial);
    let mut classes = ranks.iter().collect::<BTreeSet<_>>().len();
    loop {
        let sigs: Vec<(usize, Vec<(usize, usize)>)> = (0..nv)
            .map(|v| {
                let mut nb: Vec<(usize, usize)> =
                    adj[v].iter().map(|&(w, m)| (ranks[w], m)).collect();
                nb.sort_unstable();
                (ranks[v], nb)
            })
            .collect();
        let next = rank_by(&sigs);
        let next_classes = next.iter().collect::<BTreeSet<_>>().len();
        ranks = next;
        if next_classes == classes {
            return ranks;
        }
        classes = next_classes;
    }
}

fn rank_by<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let distinct: Vec<K> = keys.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    keys.iter()
        .map(|k| distinct.binary_search(k).expect("key present"))
        .collect()
}

/// Canonical representative: vertices ordered by refined rank, ties broken by
/// trying every ordering inside each rank class and keeping the smallest
/// sorted edge list.
fn canonical_form(vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> StableGraph {
    let ranks = refined_ranks(&vertices, &edges);
    let nclasses = ranks.iter().max().map_or(0, |m| m + 1);
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); nclasses];
    for (v, &r) in ranks.iter().enumerate() {
        classes[r].push(v);
    }
    let mut best: Option<Vec<(usize, usize)>> = None;
    let mut position = vec![0usize; vertices.len()];
    search_orderings(&mut classes, 0, 0, &mut |order| {
        for (p, &v) in order.iter().enumerate() {
            position[v] = p;
        }
        let mut relabeled: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (position[a], position[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        relabeled.sort_unstable();
        if best.as_ref().is_none_or(|b| relabeled < *b) {
            best = Some(relabeled);
        }
    });
    let order: Vec<usize> = classes.iter().flatten().copied().collect();
    StableGraph {
        vertices: order.iter().map(|&v| vertices[v].clone()).collect(),
        edges: best.unwrap_or_default(),
    }
}

/// Visits every concatenation of permutations of the classes from `class` on.
fn search_orderings(
    classes: &mut [Vec<usize>],
    class: usize,
    k: usize,
    visit: &mut dyn FnMut(&[usize]),
) {
    if class == classes.len() {
        let order: Vec<usize> = classes.iter().flatten().copied().collect();
        visit(&order);
        return;
    }
    let len = classes[class].len();
    if k + 1 >= len {
        search_orderings(classes, class + 1, 0, visit);
        return;
    }
    for i in k..len {
        classes[class].swap(k, i);
        search_orderings(classes, class, k + 1, visit);
        classes[class].swap(k, i);
    }
}

/// Upper bound on the degree of a ψ/κ monomial on `M̄_{g(v), n(v)}` that may
/// decorate the vertex of a 0-cycle generator.
///
/// For genus 0 it is the full dimension `n(v) - 3`. For positive genus the
/// Getzler-Ionel vanishing forces `deg < g(v) - δ_{0,n(v)}`, so the maximum is
/// `min(3g(v) - 3 + n(v), g(v) - δ_{0,n(v)} - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VertexDegreeBudget {
    pub genus: u32,
    pub valence: u32,
    pub dimension: i64,
    pub max_degree: i64,
}

impl VertexDegreeBudget {
    pub fn new(genus: u32, valence: u32) -> Self {
        let g = genus as i64;
        let n = valence as i64;
        let dimension = 3 * g - 3 + n;
        let max_degree = if genus == 0 {
            dimension
        } else {
            let delta = i64::from(valence == 0);
            dimension.min(g - delta - 1)
        };
        VertexDegreeBudget {
            genus,
            valence,
            dimension,
            max_degree,
        }
    }
}

/// All stable graphs of genus `g` with markings `1..=n`, one per isomorphism
/// class, ordered by number of edges and then by canonical form.
pub fn enumerate_stable_graphs(g: u32, n: u32) -> Result<Vec<StableGraph>> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::UnstablePair { g, n });
    }
    let max_edges = 3 * g + n - 3;
    let mut level: BTreeSet<StableGraph> = BTreeSet::from([StableGraph::smooth(g, n)]);
    let mut all = Vec::new();
    for _ in 0..max_edges {
        let next: BTreeSet<StableGraph> = level
            .par_iter()
            .flat_map_iter(|graph| graph.degenerations())
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        all.extend(std::mem::replace(&mut level, next));
        if level.is_empty() {
            break;
        }
    }
    all.extend(level);
    Ok(all)
}

/// `dim M̄_Γ = Σ_v (3g(v) - 3 + n(v))`.
pub fn stratum_dimension(graph: &StableGraph) -> u32 {
    graph
        .budgets()
        .iter()
        .map(|b| b.dimension)
        .sum::<i64>() as u32
}

/// Whether a positive-genus vertex could occur in a 0-cycle generator on this
/// stratum: the graph must have such a vertex and the summed degree budgets
/// must reach the stratum dimension.
pub fn zero_cycle_feasible_with_positive_genus(graph: &StableGraph) -> bool {
    let budgets = graph.budgets();
    let positive = budgets.iter().any(|b| b.genus > 0);
    let budget: i64 = budgets.iter().map(|b| b.max_degree).sum();
    let dim: i64 = budgets.iter().map(|b| b.dimension).sum();
    positive && budget >= dim
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphCheck {
    pub graph: StableGraph,
    pub dimension: u32,
    pub budget_total: i64,
    pub positive_genus_vertex: bool,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanningReport {
    pub genus: u32,
    pub markings: u32,
    pub graph_count: usize,
    pub passed: bool,
    pub graphs: Vec<GraphCheck>,
}

/// Runs [`zero_cycle_feasible_with_positive_genus`] on every stable graph of
/// type `(g, n)`. The report passes when no graph is feasible, i.e. every
/// 0-cycle generator lives on a stratum with only genus-0 vertices.
pub fn verify_r0_spanning(g: u32, n: u32) -> Result<SpanningReport> {
    let graphs = enumerate_stable_graphs(g, n)?;
    let rows: Vec<GraphCheck> = graphs
        .into_par_iter()
        .map(|graph| {
            let budgets = graph.budgets();
            GraphCheck {
                dimension: stratum_dimension(&graph),
                budget_total: budgets.iter().map(|b| b.max_degree).sum(),
                positive_genus_vertex: budgets.iter().any(|b| b.genus > 0),
                feasible: zero_cycle_feasible_with_positive_genus(&graph),
                graph,
            }
        })
        .collect();
    Ok(SpanningReport {
        genus: g,
        markings: n,
        graph_count: rows.len(),
        passed: rows.iter().all(|r| !r.feasible),
        graphs: rows,
    })
}
