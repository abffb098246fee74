//! Stallings foldings: folded inverse automata for finitely generated
//! subgroups of a free group, their products and coset automata.

use std::collections::{hash_map::Entry, HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::word::{Letter, Word};

/// A deterministic, inverse-closed graph labelled by `rank` generators.
/// Vertex 0 is the start vertex; vertices are numbered in BFS order from it,
/// trying letters in slot order, which makes equal graphs compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FoldedGraph {
    rank: usize,
    edges: Vec<Vec<Option<usize>>>,
}

impl FoldedGraph {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, v: usize, l: Letter) -> Option<usize> {
        self.edges[v][l.slot()]
    }

    /// Follows `word` from `start`; `None` if the path leaves the graph.
    pub fn read(&self, start: usize, word: &Word) -> Option<usize> {
        let mut v = start;
        for &l in word.letters() {
            if l.generator() >= self.rank {
                return None;
            }
            v = self.edges[v][l.slot()]?;
        }
        Some(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges[v].iter().filter(|e| e.is_some()).count()
    }

    /// Number of positive edges.
    pub fn edge_count(&self) -> usize {
        self.edges
            .iter()
            .map(|row| row.iter().step_by(2).filter(|e| e.is_some()).count())
            .sum()
    }

    /// BFS tree labels: `paths[v]` reads from vertex 0 to `v`.
    pub fn tree_paths(&self) -> Vec<Word> {
        self.spanning_tree().0
    }

    /// Paths from vertex 0 plus the tree edge `(parent, slot)` entering each vertex.
    fn spanning_tree(&self) -> (Vec<Word>, Vec<Option<(usize, usize)>>) {
        let n = self.edges.len();
        let mut paths: Vec<Option<Word>> = vec![None; n];
        let mut parent = vec![None; n];
        paths[0] = Some(Word::identity());
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for slot in 0..2 * self.rank {
                if let Some(w) = self.edges[v][slot] {
                    if paths[w].is_none() {
                        paths[w] = Some(paths[v].as_ref().unwrap().mul(&Word::letter(Letter::from_slot(slot))));
                        parent[w] = Some((v, slot));
                        queue.push_back(w);
                    }
                }
            }
        }
        let paths = paths.into_iter().map(|p| p.expect("folded graphs are connected")).collect();
        (paths, parent)
    }
}

struct Folder {
    rank: usize,
    parent: Vec<usize>,
    adj: Vec<Vec<Vec<usize>>>,
}

impl Folder {
    fn new(rank: usize, vertices: usize) -> Self {
        Folder {
            rank,
            parent: (0..vertices).collect(),
            adj: vec![vec![Vec::new(); 2 * rank]; vertices],
        }
    }

    fn find(&mut self, v: usize) -> usize {
        let mut r = v;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = v;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn add_vertex(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.adj.push(vec![Vec::new(); 2 * self.rank]);
        self.parent.len() - 1
    }

    fn add_edge(&mut self, u: usize, l: Letter, v: usize) {
        self.adj[u][l.slot()].push(v);
        self.adj[v][l.inverse().slot()].push(u);
    }

    /// Adds a path reading `word` from `from` and returns its end vertex.
    fn add_path(&mut self, from: usize, word: &Word, to: Option<usize>) -> usize {
        let letters = word.letters();
        let mut v = from;
        for (i, &l) in letters.iter().enumerate() {
            let w = match to {
                Some(t) if i + 1 == letters.len() => t,
                _ => self.add_vertex(),
            };
            self.add_edge(v, l, w);
            v = w;
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) -> usize {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return a;
        }
        let (keep, gone) = if a < b { (a, b) } else { (b, a) };
        self.parent[gone] = keep;
        let moved = std::mem::take(&mut self.adj[gone]);
        for (slot, targets) in moved.into_iter().enumerate() {
            self.adj[keep][slot].extend(targets);
        }
        keep
    }

    fn fold(&mut self, mut stack: Vec<usize>) {
        while let Some(v) = stack.pop() {
            let v = self.find(v);
            for slot in 0..2 * self.rank {
                let targets = std::mem::take(&mut self.adj[v][slot]);
                let mut roots: Vec<usize> = targets.into_iter().map(|t| self.find(t)).collect();
                roots.sort_unstable();
                roots.dedup();
                if roots.len() > 1 {
                    let mut r = roots[0];
                    for &other in &roots[1..] {
                        r = self.union(r, other);
                    }
                    stack.push(r);
                    stack.push(v);
                }
                let v_now = self.find(v);
                let r = roots.first().map(|&x| self.find(x));
                self.adj[v_now][slot].extend(r);
                if v_now != v {
                    break;
                }
            }
        }
    }

    /// Deterministic graph on the surviving vertices, trimmed of hanging
    /// trees except at `keep`, renumbered from `keep[0]`.
    fn finish(mut self, keep: &[usize]) -> (FoldedGraph, Vec<usize>) {
        let n = self.parent.len();
        let keep_roots: Vec<usize> = keep.iter().map(|&k| self.find(k)).collect();
        let mut edges: HashMap<usize, Vec<Option<usize>>> = HashMap::new();
        for v in 0..n {
            if self.find(v) != v {
                continue;
            }
            let mut row = vec![None; 2 * self.rank];
            for slot in 0..2 * self.rank {
                let targets = self.adj[v][slot].clone();
                if let Some(&t) = targets.first() {
                    row[slot] = Some(self.find(t));
                }
            }
            edges.insert(v, row);
        }
        // trim degree <= 1 vertices outside keep
        let mut queue: Vec<usize> = edges.keys().copied().collect();
        queue.sort_unstable();
        while let Some(v) = queue.pop() {
            if keep_roots.contains(&v) {
                continue;
            }
            let Some(row) = edges.get(&v) else { continue };
            if row.iter().filter(|e| e.is_some()).count() <= 1 {
                let row = edges.remove(&v).unwrap();
                for (slot, t) in row.into_iter().enumerate() {
                    if let Some(t) = t {
                        if let Some(trow) = edges.get_mut(&t) {
                            trow[Letter::from_slot(slot).inverse().slot()] = None;
                            queue.push(t);
                        }
                    }
                }
            }
        }
        let start = keep_roots[0];
        let mut number: HashMap<usize, usize> = HashMap::from([(start, 0)]);
        let mut order = vec![start];
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            for slot in 0..2 * self.rank {
                if let Some(t) = edges[&v][slot] {
                    if let Entry::Vacant(e) = number.entry(t) {
                        e.insert(order.len());
                        order.push(t);
                    }
                }
            }
            i += 1;
        }
        let out = order
            .iter()
            .map(|v| edges[v].iter().map(|e| e.map(|t| number[&t])).collect())
            .collect();
        let kept = keep_roots.iter().map(|k| number[k]).collect();
        (FoldedGraph { rank: self.rank, edges: out }, kept)
    }
}

/// Folded core graph of a finitely generated subgroup `H <= F_rank`.
/// A reduced word lies in `H` iff it reads a loop at the base vertex 0.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StallingsAutomaton {
    graph: FoldedGraph,
}

impl StallingsAutomaton {
    pub fn new(rank: usize, generators: &[Word]) -> Self {
        let (folder, _) = Self::bouquet(rank, generators);
        let stack = (0..folder.parent.len()).rev().collect();
        Self::complete(folder, stack)
    }

    /// Same automaton, folding in a random order. Used to test that the
    /// result does not depend on the order of folds.
    pub fn with_random_fold_order<R: Rng>(rank: usize, generators: &[Word], rng: &mut R) -> Self {
        let mut gens = generators.to_vec();
        gens.shuffle(rng);
        let (folder, _) = Self::bouquet(rank, &gens);
        let mut stack: Vec<usize> = (0..folder.parent.len()).collect();
        stack.shuffle(rng);
        Self::complete(folder, stack)
    }

    fn bouquet(rank: usize, generators: &[Word]) -> (Folder, usize) {
        let mut folder = Folder::new(rank, 1);
        for g in generators {
            if !g.is_empty() {
                folder.add_path(0, g, Some(0));
            }
        }
        (folder, 0)
    }

    fn complete(mut folder: Folder, stack: Vec<usize>) -> Self {
        folder.fold(stack);
        let (graph, _) = folder.finish(&[0]);
        StallingsAutomaton { graph }
    }

    pub fn trivial(rank: usize) -> Self {
        Self::new(rank, &[])
    }

    pub fn whole(rank: usize) -> Self {
        let gens: Vec<Word> = (0..rank).map(|i| Word::letter(Letter::gen(i))).collect();
        Self::new(rank, &gens)
    }

    pub fn graph(&self) -> &FoldedGraph {
        &self.graph
    }

    pub fn rank(&self) -> usize {
        self.graph.rank
    }

    pub fn state_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.graph.read(0, w) == Some(0)
    }

    pub fn read(&self, start: usize, w: &Word) -> Option<usize> {
        self.graph.read(start, w)
    }

    /// Free basis read off a BFS spanning tree.
    pub fn generators(&self) -> Vec<Word> {
        let (paths, parent) = self.graph.spanning_tree();
        let mut gens = Vec::new();
        for u in 0..self.state_count() {
            for a in 0..self.rank() {
                let l = Letter::gen(a);
                if let Some(v) = self.graph.edge(u, l) {
                    let in_tree = parent[v] == Some((u, l.slot())) || parent[u] == Some((v, l.inverse().slot()));
                    if !in_tree {
                        gens.push(paths[u].mul(&Word::letter(l)).mul(&paths[v].inverse()));
                    }
                }
            }
        }
        gens
    }

    /// Rank of the subgroup: edges minus vertices plus one.
    pub fn subgroup_rank(&self) -> usize {
        self.graph.edge_count() + 1 - self.state_count()
    }

    /// `H` has finite index iff every vertex has all `2 * rank` edges.
    pub fn is_finite_index(&self) -> bool {
        (0..self.state_count()).all(|v| self.graph.degree(v) == 2 * self.rank())
    }

    /// `x^-1 H x`.
    pub fn conjugate(&self, x: &Word) -> Self {
        let gens: Vec<Word> = self.generators().iter().map(|g| g.conjugate_by(x)).collect();
        Self::new(self.rank(), &gens)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (graph, _) = product(&self.graph, 0, &other.graph, 0, &[]);
        StallingsAutomaton { graph }
    }
}

/// Product of two folded graphs from `(s1, s2)`, trimmed except at the
/// start and at the listed extra pairs (kept when reachable).
fn product(
    g1: &FoldedGraph,
    s1: usize,
    g2: &FoldedGraph,
    s2: usize,
    extra: &[(usize, usize)],
) -> (FoldedGraph, Vec<Option<usize>>) {
    let rank = g1.rank.max(g2.rank);
    let mut index: HashMap<(usize, usize), usize> = HashMap::from([((s1, s2), 0)]);
    let mut pairs = vec![(s1, s2)];
    let mut folder = Folder::new(rank, 1);
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        for a in 0..g1.rank.min(g2.rank) {
            let l = Letter::gen(a);
            if let (Some(p2), Some(q2)) = (g1.edge(p, l), g2.edge(q, l)) {
                let j = *index.entry((p2, q2)).or_insert_with(|| {
                    pairs.push((p2, q2));
                    folder.add_vertex()
                });
                folder.add_edge(i, l, j);
            }
        }
        i += 1;
    }
    let mut keep = vec![0];
    let reached: Vec<Option<usize>> = extra.iter().map(|pq| index.get(pq).copied()).collect();
    keep.extend(reached.iter().flatten());
    let (graph, kept) = folder.finish(&keep);
    let mut it = kept.into_iter().skip(1);
    let mapped = reached.iter().map(|r| r.map(|_| it.next().unwrap())).collect();
    (graph, mapped)
}

/// Automaton for the coset `u H`: words read from `start` to vertex 0.
#[derive(Clone, Debug)]
pub struct CosetAutomaton {
    graph: FoldedGraph,
    start: usize,
    end: usize,
}

impl CosetAutomaton {
    pub fn new(rep: &Word, subgroup: &StallingsAutomaton) -> Self {
        let rank = subgroup.rank().max(rep.max_generator().map_or(0, |g| g + 1));
        let mut folder = Folder::new(rank, 1);
        for g in subgroup.generators() {
            folder.add_path(0, &g, Some(0));
        }
        // a path labelled u from s ending at the subgroup base
        let s = if rep.is_empty() {
            0
        } else {
            let s = folder.add_vertex();
            folder.add_path(s, rep, Some(0));
            s
        };
        let stack = (0..folder.parent.len()).rev().collect();
        folder.fold(stack);
        let (graph, kept) = folder.finish(&[s, 0]);
        CosetAutomaton {
            graph,
            start: kept[0],
            end: kept[1],
        }
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.graph.read(self.start, w) == Some(self.end)
    }
}

/// `uH n vK`: empty, or `y (H n K)` for a computed representative `y`.
pub fn coset_intersection(
    u: &Word,
    h: &StallingsAutomaton,
    v: &Word,
    k: &StallingsAutomaton,
) -> Option<(Word, StallingsAutomaton)> {
    let c1 = CosetAutomaton::new(u, h);
    let c2 = CosetAutomaton::new(v, k);
    let (graph, reached) = product(&c1.graph, c1.start, &c2.graph, c2.start, &[(c1.end, c2.end)]);
    let target = reached[0]?;
    let y = graph.tree_paths()[target].clone();
    Some((y, h.intersect(k)))
}
