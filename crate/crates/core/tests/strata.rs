use std::collections::BTreeSet;

use taut_core::strata::{
    enumerate_stable_graphs, verify_r0_spanning, zero_cycle_feasible_with_positive_genus,
    StableGraph, Vertex, VertexDegreeBudget,
};

/// Raw graph: vertex genera, vertex of each marking, edge list.
#[derive(Clone, Debug)]
struct Raw {
    genera: Vec<u32>,
    leg_vertex: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl Raw {
    fn valence(&self, v: usize) -> usize {
        self.leg_vertex.iter().filter(|&&x| x == v).count()
            + self
                .edges
                .iter()
                .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
                .sum::<usize>()
    }

    /// Sorted encoding after relabelling vertices by `perm`.
    fn encode(&self, perm: &[usize]) -> (Vec<u32>, Vec<usize>, Vec<(usize, usize)>) {
        let nv = self.genera.len();
        let mut genera = vec![0; nv];
        for v in 0..nv {
            genera[perm[v]] = self.genera[v];
        }
        let legs = self.leg_vertex.iter().map(|&v| perm[v]).collect();
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a], perm[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        (genera, legs, edges)
    }

    /// Minimum encoding over all vertex relabellings.
    fn brute_canonical(&self) -> (Vec<u32>, Vec<usize>, Vec<(usize, usize)>) {
        let nv = self.genera.len();
        let mut perm: Vec<usize> = (0..nv).collect();
        let mut best = self.encode(&perm);
        permutations(&mut perm, 0, &mut |p| {
            let e = self.encode(p);
            if e < best {
                best = e;
            }
        });
        best
    }

    fn to_graph(&self) -> StableGraph {
        let vertices = (0..self.genera.len())
            .map(|v| {
                let legs = (0..self.leg_vertex.len())
                    .filter(|&i| self.leg_vertex[i] == v)
                    .map(|i| i as u32 + 1)
                    .collect();
                Vertex::new(self.genera[v], legs)
            })
            .collect();
        StableGraph::new(vertices, self.edges.clone()).expect("oracle graph is stable")
    }
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

fn connected(nv: usize, edges: &[(usize, usize)]) -> bool {
    let mut comp: Vec<usize> = (0..nv).collect();
    fn find(c: &mut Vec<usize>, x: usize) -> usize {
        if c[x] != x {
            let r = find(c, c[x]);
            c[x] = r;
        }
        c[x]
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
        comp[ra] = rb;
    }
    let r0 = find(&mut comp, 0);
    (0..nv).all(|v| find(&mut comp, v) == r0)
}

fn multisets(pairs: &[(usize, usize)], size: usize, from: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
    if cur.len() == size {
        out.push(cur.clone());
        return;
    }
    for i in from..pairs.len() {
        cur.push(pairs[i]);
        multisets(pairs, size, i, cur, out);
        cur.pop();
    }
}

/// Every stable graph of type (g, n) up to isomorphism, by listing all
/// vertex genera, marking placements and edge multisets and deduplicating
/// with an exhaustive-relabelling canonical form.
fn brute_force(g: u32, n: u32) -> Vec<Raw> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let max_vertices = (2 * g + n - 2) as usize;
    for nv in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..nv)
            .flat_map(|a| (a..nv).map(move |b| (a, b)))
            .collect();
        let genus_tuples = (0..(g as usize + 1).pow(nv as u32)).map(|code| {
            let mut c = code;
            (0..nv)
                .map(|_| {
                    let x = (c % (g as usize + 1)) as u32;
                    c /= g as usize + 1;
                    x
                })
                .collect::<Vec<u32>>()
        });
        for genera in genus_tuples {
            let sum: u32 = genera.iter().sum();
            if sum > g {
                continue;
            }
            // g = sum + E - V + 1
            let ne = (g - sum) as usize + nv - 1;
            let mut edge_sets = Vec::new();
            multisets(&pairs, ne, 0, &mut Vec::new(), &mut edge_sets);
            for code in 0..nv.pow(n) {
                let mut c = code;
                let leg_vertex: Vec<usize> = (0..n)
                    .map(|_| {
                        let x = c % nv;
                        c /= nv;
                        x
                    })
                    .collect();
                for edges in &edge_sets {
                    if !connected(nv, edges) {
                        continue;
                    }
                    let raw = Raw {
                        genera: genera.clone(),
                        leg_vertex: leg_vertex.clone(),
                        edges: edges.clone(),
                    };
                    if (0..nv).any(|v| 2 * raw.genera[v] as usize + raw.valence(v) <= 2) {
                        continue;
                    }
                    if seen.insert(raw.brute_canonical()) {
                        out.push(raw);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn enumeration_matches_brute_force() {
    for (g, n) in [(0, 3), (0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 0), (2, 1), (2, 2), (3, 0)] {
        let oracle = brute_force(g, n);
        let ours = enumerate_stable_graphs(g, n).unwrap();
        assert_eq!(ours.len(), oracle.len(), "count for ({g},{n})");
        let ours: BTreeSet<StableGraph> = ours.into_iter().collect();
        let theirs: BTreeSet<StableGraph> = oracle.iter().map(Raw::to_graph).collect();
        assert_eq!(ours, theirs, "classes for ({g},{n})");
    }
}

#[test]
fn hand_counts() {
    assert_eq!(enumerate_stable_graphs(0, 4).unwrap().len(), 4);
    assert_eq!(enumerate_stable_graphs(1, 1).unwrap().len(), 2);
    assert_eq!(enumerate_stable_graphs(2, 0).unwrap().len(), 7);
    // smooth, 10 two-three splittings, 15 chains
    assert_eq!(enumerate_stable_graphs(0, 5).unwrap().len(), 26);
    assert_eq!(enumerate_stable_graphs(1, 3).unwrap().len(), 23);
}

fn to_raw(graph: &StableGraph) -> Raw {
    let n = graph.markings() as usize;
    let mut leg_vertex = vec![0; n];
    for (v, vert) in graph.vertices().iter().enumerate() {
        for &l in &vert.legs {
            leg_vertex[l as usize - 1] = v;
        }
    }
    Raw {
        genera: graph.vertices().iter().map(|v| v.genus).collect(),
        leg_vertex,
        edges: graph.edges().to_vec(),
    }
}

#[test]
fn emitted_graphs_pairwise_non_isomorphic() {
    for (g, n) in [(1, 3), (2, 2), (3, 0), (3, 1)] {
        let graphs = enumerate_stable_graphs(g, n).unwrap();
        let forms: BTreeSet<_> = graphs.iter().map(|gr| to_raw(gr).brute_canonical()).collect();
        assert_eq!(forms.len(), graphs.len(), "duplicate class in ({g},{n})");
    }
}

#[test]
fn emitted_graphs_are_sound() {
    for g in 0..=3u32 {
        for n in 0..=3u32 {
            if 2 * g + n <= 2 {
                continue;
            }
            for graph in enumerate_stable_graphs(g, n).unwrap() {
                assert_eq!(graph.genus(), g);
                assert_eq!(graph.markings(), n);
                let rebuilt = StableGraph::new(graph.vertices().to_vec(), graph.edges().to_vec())
                    .expect("emitted graph passes validation");
                assert_eq!(rebuilt, graph, "canonical form is idempotent");
                for b in graph.budgets() {
                    if b.genus > 0 {
                        assert!(b.max_degree < b.dimension);
                    } else {
                        assert!(b.max_degree >= 0);
                    }
                }
                assert!(!zero_cycle_feasible_with_positive_genus(&graph));
            }
        }
    }
}

#[test]
fn budget_strictness_scan() {
    for genus in 1..=10u32 {
        for valence in 0..=12u32 {
            if 2 * genus + valence <= 2 {
                continue;
            }
            let b = VertexDegreeBudget::new(genus, valence);
            assert!(b.max_degree < b.dimension, "g={genus} n={valence}");
        }
    }
}

#[test]
fn spanning_small_cases() {
    let r = verify_r0_spanning(2, 0).unwrap();
    assert!(r.passed);
    assert_eq!(r.graph_count, 7);
    assert!(verify_r0_spanning(0, 5).unwrap().passed);
    let r = verify_r0_spanning(3, 2).unwrap();
    assert!(r.passed);
    assert_eq!(r.graph_count, r.graphs.len());
}
