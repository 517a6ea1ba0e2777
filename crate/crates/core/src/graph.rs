//! Occurrence graph of a morphism: an edge `b -> c` whenever `c` occurs in
//! `φ(b)`. Squaring the graph yields the occurrence graph of `φ²`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::bitmatrix::BitMatrix;
use crate::word::{Alphabet, Letter, Morphism};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OccurrenceGraph {
    adj: BitMatrix,
}

pub fn occurrence_graph(m: &Morphism) -> OccurrenceGraph {
    OccurrenceGraph::of(m)
}

pub fn square_graph(g: &OccurrenceGraph) -> OccurrenceGraph {
    g.square()
}

/// Some power of the morphism matrix is entrywise positive.
///
/// Checked as strong connectivity plus a cycle-length gcd of one; strong
/// connectivity alone only gives irreducibility.
pub fn is_primitive(m: &Morphism) -> bool {
    let g = OccurrenceGraph::of(m);
    g.is_strongly_connected(None) && g.cycle_gcd_of_component(&g.all_vertices()) == 1
}

impl OccurrenceGraph {
    pub fn of(m: &Morphism) -> Self {
        let mut adj = BitMatrix::new(m.size());
        for b in m.alphabet().letters() {
            for &c in m.image(b) {
                adj.set(b.index(), c.index());
            }
        }
        OccurrenceGraph { adj }
    }

    pub fn from_adjacency(adj: BitMatrix) -> Self {
        OccurrenceGraph { adj }
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    pub fn size(&self) -> usize {
        self.adj.size()
    }

    pub fn has_edge(&self, b: Letter, c: Letter) -> bool {
        self.adj.get(b.index(), c.index())
    }

    pub fn successors(&self, b: Letter) -> impl Iterator<Item = Letter> + '_ {
        self.adj.ones(b.index()).map(Letter::from_index)
    }

    pub fn successor_set(&self, b: Letter) -> BTreeSet<Letter> {
        self.successors(b).collect()
    }

    fn all_vertices(&self) -> Vec<Letter> {
        (0..self.size()).map(Letter::from_index).collect()
    }

    pub fn square(&self) -> OccurrenceGraph {
        OccurrenceGraph {
            adj: self.adj.square(),
        }
    }

    /// Reachability inside `within` (all vertices when `None`), following
    /// only edges whose endpoints both lie in `within`.
    fn reach(&self, from: Letter, within: &[bool], reverse: bool) -> Vec<bool> {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([from.index()]);
        seen[from.index()] = true;
        while let Some(v) = queue.pop_front() {
            for u in 0..n {
                let edge = if reverse {
                    self.adj.get(u, v)
                } else {
                    self.adj.get(v, u)
                };
                if edge && within[u] && !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// Strong connectivity of the induced subgraph on `restrict` (the whole
    /// graph when `None`). Empty and singleton restrictions count as
    /// strongly connected.
    pub fn is_strongly_connected(&self, restrict: Option<&[Letter]>) -> bool {
        self.disconnected_pair(restrict).is_none()
    }

    /// A pair `(from, to)` inside the restriction with no path from `from`
    /// to `to`, if any.
    pub fn disconnected_pair(&self, restrict: Option<&[Letter]>) -> Option<(Letter, Letter)> {
        let n = self.size();
        let vertices: Vec<Letter> = match restrict {
            Some(r) => r.to_vec(),
            None => self.all_vertices(),
        };
        if vertices.len() <= 1 {
            return None;
        }
        let mut within = vec![false; n];
        for v in &vertices {
            within[v.index()] = true;
        }
        let root = vertices[0];
        let fwd = self.reach(root, &within, false);
        if let Some(&v) = vertices.iter().find(|v| !fwd[v.index()]) {
            return Some((root, v));
        }
        let back = self.reach(root, &within, true);
        vertices
            .iter()
            .find(|v| !back[v.index()])
            .map(|&v| (v, root))
    }

    /// gcd of the cycle lengths inside one strongly connected component,
    /// via BFS levels: `gcd(level[u] + 1 - level[v])` over internal edges.
    /// Zero when the component carries no cycle.
    pub fn cycle_gcd_of_component(&self, component: &[Letter]) -> usize {
        let n = self.size();
        let Some(&root) = component.first() else {
            return 0;
        };
        let mut inside = vec![false; n];
        for v in component {
            inside[v.index()] = true;
        }
        let mut level = vec![usize::MAX; n];
        level[root.index()] = 0;
        let mut queue = VecDeque::from([root.index()]);
        while let Some(v) = queue.pop_front() {
            for u in self.adj.ones(v) {
                if inside[u] && level[u] == usize::MAX {
                    level[u] = level[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        let mut g = 0usize;
        for &v in component {
            let v = v.index();
            if level[v] == usize::MAX {
                continue;
            }
            for u in self.adj.ones(v) {
                if inside[u] && level[u] != usize::MAX {
                    g = gcd(g, (level[v] + 1).abs_diff(level[u]));
                }
            }
        }
        g
    }

    pub fn scc(&self) -> SccDecomposition {
        SccDecomposition::of(self)
    }

    /// Vertices lying on at least one cycle.
    pub fn cyclic_vertices(&self) -> Vec<bool> {
        let scc = self.scc();
        (0..self.size())
            .map(|v| scc.components[scc.component_of[v]].len() > 1 || self.adj.get(v, v))
            .collect()
    }

    pub fn to_dot(&self, alphabet: &Alphabet, name: &str) -> String {
        let mut out = format!("digraph \"{name}\" {{\n");
        for b in alphabet.letters() {
            let _ = writeln!(out, "  \"{}\";", alphabet.name(b));
        }
        for b in alphabet.letters() {
            for c in self.successors(b) {
                let _ = writeln!(
                    out,
                    "  \"{}\" -> \"{}\";",
                    alphabet.name(b),
                    alphabet.name(c)
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Strongly connected components (Kosaraju, iterative).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccDecomposition {
    /// Component id per vertex.
    pub component_of: Vec<usize>,
    /// Members of each component, ascending.
    pub components: Vec<Vec<Letter>>,
    /// Edges of the (acyclic) condensation.
    pub condensation: BTreeSet<(usize, usize)>,
}

impl SccDecomposition {
    pub fn of(g: &OccurrenceGraph) -> Self {
        let n = g.size();
        let adj = g.adjacency();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            for u in adj.ones(v) {
                rev[u].push(v);
            }
        }

        // first pass: finishing order
        let mut visited = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for root in 0..n {
            if visited[root] {
                continue;
            }
            visited[root] = true;
            let mut stack: Vec<(usize, Vec<usize>)> = vec![(root, adj.ones(root).collect())];
            while let Some((v, pending)) = stack.last_mut() {
                if let Some(u) = pending.pop() {
                    if !visited[u] {
                        visited[u] = true;
                        let next = adj.ones(u).collect();
                        stack.push((u, next));
                    }
                } else {
                    order.push(*v);
                    stack.pop();
                }
            }
        }

        // second pass on the reversed graph
        let mut component_of = vec![usize::MAX; n];
        let mut components = Vec::new();
        for &root in order.iter().rev() {
            if component_of[root] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut members = Vec::new();
            let mut stack = vec![root];
            component_of[root] = id;
            while let Some(v) = stack.pop() {
                members.push(Letter::from_index(v));
                for &u in &rev[v] {
                    if component_of[u] == usize::MAX {
                        component_of[u] = id;
                        stack.push(u);
                    }
                }
            }
            members.sort();
            components.push(members);
        }

        let mut condensation = BTreeSet::new();
        for v in 0..n {
            for u in adj.ones(v) {
                let (a, b) = (component_of[v], component_of[u]);
                if a != b {
                    condensation.insert((a, b));
                }
            }
        }
        SccDecomposition {
            component_of,
            components,
            condensation,
        }
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn succ(g: &OccurrenceGraph, b: u32) -> Vec<u32> {
        g.successors(Letter(b)).map(|l| l.0).collect()
    }

    fn inner_tail() -> Morphism {
        Morphism::from_chars("012", &["01", "120", "2"]).unwrap()
    }

    fn thue_morse() -> Morphism {
        Morphism::from_chars("01", &["01", "10"]).unwrap()
    }

    #[test]
    fn occurrence_graph_edges() {
        let g = occurrence_graph(&inner_tail());
        assert_eq!(succ(&g, 0), vec![0, 1]);
        assert_eq!(succ(&g, 1), vec![0, 1, 2]);
        assert_eq!(succ(&g, 2), vec![2]);

        let g = occurrence_graph(&thue_morse());
        assert_eq!(succ(&g, 0), vec![0, 1]);
        assert_eq!(succ(&g, 1), vec![0, 1]);

        let a = Alphabet::numbered(2).unwrap();
        let erase = Morphism::new(a, vec![Default::default(); 2]).unwrap();
        let g = occurrence_graph(&erase);
        assert!(succ(&g, 0).is_empty() && succ(&g, 1).is_empty());
    }

    #[test]
    fn strong_connectivity_with_restriction() {
        let g = occurrence_graph(&inner_tail());
        assert!(g.is_strongly_connected(Some(&[Letter(0), Letter(1)])));
        assert!(!g.is_strongly_connected(None));
        assert_eq!(g.disconnected_pair(None), Some((Letter(2), Letter(0))));
        assert!(g.is_strongly_connected(Some(&[Letter(2)])));
        assert!(g.is_strongly_connected(Some(&[])));
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&thue_morse()));
        assert!(!is_primitive(&inner_tail()));
        let swap = Morphism::from_chars("01", &["1", "0"]).unwrap();
        assert!(!is_primitive(&swap));
        let fib = Morphism::from_chars("01", &["01", "0"]).unwrap();
        assert!(is_primitive(&fib));
        let lone = Morphism::from_chars("0", &["00"]).unwrap();
        assert!(is_primitive(&lone));
    }

    #[test]
    fn squaring() {
        let g = occurrence_graph(&inner_tail()).square();
        assert_eq!(succ(&g, 0), vec![0, 1, 2]);
        assert_eq!(succ(&g, 1), vec![0, 1, 2]);
        assert_eq!(succ(&g, 2), vec![2]);

        let tm = occurrence_graph(&thue_morse());
        assert_eq!(tm.square(), tm);

        let empty = OccurrenceGraph::from_adjacency(BitMatrix::new(3));
        assert_eq!(empty.square(), empty);
    }

    #[test]
    fn scc_and_condensation() {
        let g = occurrence_graph(&inner_tail());
        let scc = g.scc();
        assert_eq!(scc.components.len(), 2);
        assert_eq!(scc.component_of[0], scc.component_of[1]);
        assert_ne!(scc.component_of[0], scc.component_of[2]);
        assert_eq!(scc.condensation.len(), 1);
        assert_eq!(g.cyclic_vertices(), vec![true, true, true]);

        let chain = Morphism::from_chars("012", &["1", "2", "2"]).unwrap();
        assert_eq!(
            occurrence_graph(&chain).cyclic_vertices(),
            vec![false, false, true]
        );
    }

    #[test]
    fn cycle_gcd() {
        let swap = occurrence_graph(&Morphism::from_chars("01", &["1", "0"]).unwrap());
        assert_eq!(swap.cycle_gcd_of_component(&[Letter(0), Letter(1)]), 2);
        // cycles of length 2 and 3 share the vertex 0
        let m = Morphism::from_chars("0123", &["13", "2", "0", "0"]).unwrap();
        let g = occurrence_graph(&m);
        let comp: Vec<Letter> = (0..4).map(Letter).collect();
        assert_eq!(g.cycle_gcd_of_component(&comp), 1);
    }

    #[test]
    fn dot_dump() {
        let m = thue_morse();
        let dot = occurrence_graph(&m).to_dot(m.alphabet(), "G");
        assert!(dot.starts_with("digraph \"G\" {"));
        assert!(dot.contains("\"1\" -> \"0\";"));
    }
}
