//! Clique search in Cayley graphs `Cay(G, S)`: vertices are group elements,
//! `v ~ w` iff `v - w ∈ S` for a symmetric connection set `S` not containing 0.
//!
//! The graph is vertex-transitive, so a clique of size `k` exists iff one
//! exists through 0, and the search only looks inside `S` (the neighbours of 0).
//! Branch-and-bound uses greedy colouring bounds. The top-level branches may run
//! in parallel; node budgets are accounted in sequential branch order so the
//! verdict and the reported clique never depend on scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};

use fixedbitset::FixedBitSet;

use crate::group::Group;
use crate::par;

/// Largest neighbourhood for which the adjacency matrix is materialized.
pub const MAX_CANDIDATES: usize = 1 << 15;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliqueOutcome {
    /// A clique of the target size containing 0, sorted.
    Found(Vec<usize>),
    /// The whole search tree was explored: no such clique exists.
    Exhausted,
    /// The node budget ran out first. Says nothing about existence.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueReport {
    pub outcome: CliqueOutcome,
    pub nodes: u64,
}

enum Step {
    Found,
    NotFound,
    OutOfBudget,
    Cancelled,
}

struct Graph {
    /// Local vertex `i` is group element `vertices[i]`; vertices sorted by
    /// descending degree, ties by element index.
    vertices: Vec<usize>,
    adj: Vec<FixedBitSet>,
}

impl Graph {
    fn build(group: &Group, connection: &FixedBitSet) -> Graph {
        let raw: Vec<usize> = connection.ones().filter(|&x| x != 0).collect();
        let degree = par::map(&raw, |&a| raw.iter().filter(|&&b| connection.contains(group.sub(b, a))).count());
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(raw[a].cmp(&raw[b])));
        let vertices: Vec<usize> = order.iter().map(|&i| raw[i]).collect();
        let n = vertices.len();
        let adj = par::map_range(0..n, |i| {
            let mut row = FixedBitSet::with_capacity(n);
            for (j, &w) in vertices.iter().enumerate() {
                if j != i && connection.contains(group.sub(w, vertices[i])) {
                    row.insert(j);
                }
            }
            row
        });
        Graph { vertices, adj }
    }

    /// Greedy colouring of `p` in index order; vertices listed by ascending colour.
    fn colour_sort(&self, p: &FixedBitSet) -> (Vec<usize>, Vec<usize>) {
        let mut uncoloured = p.clone();
        let mut order = Vec::with_capacity(p.count_ones(..));
        let mut colours = Vec::with_capacity(order.capacity());
        let mut colour = 0;
        while !uncoloured.is_clear() {
            colour += 1;
            let mut avail = uncoloured.clone();
            while let Some(v) = avail.ones().next() {
                avail.set(v, false);
                avail.difference_with(&self.adj[v]);
                uncoloured.set(v, false);
                order.push(v);
                colours.push(colour);
            }
        }
        (order, colours)
    }
}

struct Branch<'a> {
    graph: &'a Graph,
    need: usize,
    budget: u64,
    nodes: u64,
    clique: Vec<usize>,
    position: usize,
    cancel: &'a AtomicUsize,
}

impl Branch<'_> {
    fn expand(&mut self, p: FixedBitSet) -> Step {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Step::OutOfBudget;
        }
        if self.nodes % 1024 == 0 && self.cancel.load(Ordering::Relaxed) < self.position {
            return Step::Cancelled;
        }
        if self.clique.len() >= self.need {
            return Step::Found;
        }
        let (order, colours) = self.graph.colour_sort(&p);
        let mut p = p;
        for i in (0..order.len()).rev() {
            if self.clique.len() + colours[i] < self.need {
                return Step::NotFound;
            }
            let v = order[i];
            let mut next = p.clone();
            next.intersect_with(&self.graph.adj[v]);
            self.clique.push(v);
            match self.expand(next) {
                Step::NotFound => {}
                other => return other,
            }
            self.clique.pop();
            p.set(v, false);
        }
        Step::NotFound
    }
}

/// Searches for a clique of `target` vertices through 0 in `Cay(G, connection)`.
/// `connection` is a membership bitset over the group; 0 is ignored.
pub fn cayley_clique(group: &Group, connection: &FixedBitSet, target: usize, budget: u64) -> CliqueReport {
    if target <= 1 {
        let outcome = CliqueOutcome::Found(if target == 1 { vec![0] } else { Vec::new() });
        return CliqueReport { outcome, nodes: 1 };
    }
    let need = target - 1;
    let size = connection.ones().filter(|&x| x != 0).count();
    if size < need {
        return CliqueReport { outcome: CliqueOutcome::Exhausted, nodes: 1 };
    }
    if size > MAX_CANDIDATES || budget == 0 {
        return CliqueReport { outcome: CliqueOutcome::Inconclusive, nodes: 0 };
    }
    let graph = Graph::build(group, connection);
    let n = graph.vertices.len();
    let mut root = FixedBitSet::with_capacity(n);
    root.insert_range(..);
    let (order, colours) = graph.colour_sort(&root);

    // Sequential order visits order[i] for i descending until the colour bound fails.
    let positions: Vec<usize> =
        (0..n).rev().take_while(|&i| colours[i] >= need).collect();
    let cancel = AtomicUsize::new(usize::MAX);
    let results = par::map_range(0..positions.len(), |pos| {
        let i = positions[pos];
        let v = order[i];
        let mut p = FixedBitSet::with_capacity(n);
        for &u in &order[..i] {
            p.insert(u);
        }
        p.intersect_with(&graph.adj[v]);
        let mut branch = Branch {
            graph: &graph,
            need,
            budget,
            nodes: 0,
            clique: vec![v],
            position: pos,
            cancel: &cancel,
        };
        let step = branch.expand(p);
        if matches!(step, Step::Found) {
            cancel.fetch_min(pos, Ordering::Relaxed);
        }
        (step, branch.nodes, branch.clique)
    });

    let mut nodes = 1u64;
    for (step, used, clique) in results {
        nodes += used;
        if nodes > budget {
            return CliqueReport { outcome: CliqueOutcome::Inconclusive, nodes: budget };
        }
        match step {
            Step::Found => {
                let mut found: Vec<usize> = clique.iter().map(|&i| graph.vertices[i]).collect();
                found.push(0);
                found.sort_unstable();
                return CliqueReport { outcome: CliqueOutcome::Found(found), nodes };
            }
            Step::NotFound => {}
            Step::OutOfBudget => {
                return CliqueReport { outcome: CliqueOutcome::Inconclusive, nodes: budget };
            }
            Step::Cancelled => unreachable!("cancelled branches come after the reported one"),
        }
    }
    CliqueReport { outcome: CliqueOutcome::Exhausted, nodes }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(n: usize, members: &[usize]) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(n);
        for &m in members {
            b.insert(m);
        }
        b
    }

    fn is_clique(g: &Group, conn: &FixedBitSet, c: &[usize]) -> bool {
        c.iter().all(|&a| c.iter().all(|&b| a == b || conn.contains(g.sub(a, b))))
    }

    #[test]
    fn complete_graph() {
        let g = Group::cyclic(7).unwrap();
        let conn = bits(7, &[1, 2, 3, 4, 5, 6]);
        let r = cayley_clique(&g, &conn, 7, 1_000);
        assert_eq!(r.outcome, CliqueOutcome::Found((0..7).collect()));
    }

    #[test]
    fn cycle_has_no_triangle() {
        let g = Group::cyclic(8).unwrap();
        let conn = bits(8, &[1, 7]);
        assert_eq!(cayley_clique(&g, &conn, 3, 1_000).outcome, CliqueOutcome::Exhausted);
        let r = cayley_clique(&g, &conn, 2, 1_000);
        assert!(matches!(r.outcome, CliqueOutcome::Found(ref c) if is_clique(&g, &conn, c)));
    }

    #[test]
    fn budget_is_inconclusive_not_refuted() {
        // Paley-like graph on Z_13 (quadratic residues): clique number 3
        let g = Group::cyclic(13).unwrap();
        let qr: Vec<usize> = (1..13).map(|x| x * x % 13).collect();
        let conn = bits(13, &qr);
        assert_eq!(cayley_clique(&g, &conn, 4, 1_000_000).outcome, CliqueOutcome::Exhausted);
        assert_eq!(cayley_clique(&g, &conn, 4, 0).outcome, CliqueOutcome::Inconclusive);
        let r = cayley_clique(&g, &conn, 3, 1_000);
        assert!(matches!(r.outcome, CliqueOutcome::Found(ref c) if c.len() == 3 && is_clique(&g, &conn, c)));
    }

    #[test]
    fn trivial_targets() {
        let g = Group::cyclic(5).unwrap();
        let empty = FixedBitSet::with_capacity(5);
        assert_eq!(cayley_clique(&g, &empty, 1, 10).outcome, CliqueOutcome::Found(vec![0]));
        assert_eq!(cayley_clique(&g, &empty, 2, 10).outcome, CliqueOutcome::Exhausted);
    }
}
