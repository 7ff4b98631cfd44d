//! Trees as dual graphs: one vertex per component, one edge per node.
//!
//! Canonical codes are balanced-parenthesis AHU codes rooted at the tree
//! center, so two trees are isomorphic exactly when their codes are equal.
//! Enumeration generates one representative per isomorphism class.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("a tree needs at least one vertex")]
    InvalidSize,
    #[error("vertex {id} out of range for {vertices} vertices")]
    VertexOutOfRange { id: usize, vertices: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("{edges} edges cannot form a tree on {vertices} vertices")]
    WrongEdgeCount { vertices: usize, edges: usize },
    #[error("the graph is not connected")]
    Disconnected,
    #[error("edge ({0}, {1}) is not in the tree")]
    EdgeNotFound(usize, usize),
    #[error("invalid vertex permutation")]
    InvalidPermutation,
}

/// A connected acyclic graph on vertices `0..vertex_count`.
///
/// Edges are stored normalized (`min <= max`) and sorted, which fixes the
/// canonical edge ordering used everywhere else in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TreeJson", into = "TreeJson")]
pub struct RationalTree {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize, Clone)]
struct TreeJson {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<TreeJson> for RationalTree {
    type Error = TreeError;

    fn try_from(raw: TreeJson) -> Result<Self, TreeError> {
        RationalTree::new(raw.vertices, raw.edges)
    }
}

impl From<RationalTree> for TreeJson {
    fn from(tree: RationalTree) -> TreeJson {
        TreeJson {
            vertices: tree.vertex_count,
            edges: tree.edges,
        }
    }
}

impl RationalTree {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, TreeError> {
        if vertex_count == 0 {
            return Err(TreeError::InvalidSize);
        }
        if edges.len() != vertex_count - 1 {
            return Err(TreeError::WrongEdgeCount {
                vertices: vertex_count,
                edges: edges.len(),
            });
        }
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            for id in [a, b] {
                if id >= vertex_count {
                    return Err(TreeError::VertexOutOfRange {
                        id,
                        vertices: vertex_count,
                    });
                }
            }
            if a == b {
                return Err(TreeError::SelfLoop(a));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        for w in normalized.windows(2) {
            if w[0] == w[1] {
                return Err(TreeError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let tree = RationalTree {
            vertex_count,
            edges: normalized,
        };
        // connected + |E| = |V| - 1 implies acyclic
        if tree.reachable_from(0) != vertex_count {
            return Err(TreeError::Disconnected);
        }
        Ok(tree)
    }

    pub fn single_vertex() -> Self {
        RationalTree {
            vertex_count: 1,
            edges: Vec::new(),
        }
    }

    /// The path on `n` vertices, 0-1-2-...-(n-1).
    pub fn path(n: usize) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::InvalidSize);
        }
        Self::new(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    /// The star with `leaves` leaves attached to a central vertex;
    /// the center gets the largest id.
    pub fn star(leaves: usize) -> Result<Self, TreeError> {
        Self::new(leaves + 1, (0..leaves).map(|i| (i, leaves)).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order: normalized pairs, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Number of edges at each vertex (the multiplicity e(v)).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Indices into `edges()` of the edges at `v`, in canonical edge order.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == v || b == v)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn edge_index(&self, edge: (usize, usize)) -> Option<usize> {
        let key = (edge.0.min(edge.1), edge.0.max(edge.1));
        self.edges.binary_search(&key).ok()
    }

    /// Merges the endpoints of `edge` into one vertex. The merged vertex
    /// keeps the smaller endpoint id; ids above the larger endpoint shift
    /// down by one.
    pub fn contract_edge(&self, edge: (usize, usize)) -> Result<RationalTree, TreeError> {
        let (a, b) = (edge.0.min(edge.1), edge.0.max(edge.1));
        if self.edge_index((a, b)).is_none() {
            return Err(TreeError::EdgeNotFound(edge.0, edge.1));
        }
        let relabel = |v: usize| {
            let v = if v == b { a } else { v };
            if v > b {
                v - 1
            } else {
                v
            }
        };
        let edges = self
            .edges
            .iter()
            .filter(|&&e| e != (a, b))
            .map(|&(x, y)| (relabel(x), relabel(y)))
            .collect();
        RationalTree::new(self.vertex_count - 1, edges)
    }

    /// Applies a vertex bijection, giving an isomorphic tree.
    pub fn relabel(&self, perm: &[usize]) -> Result<RationalTree, TreeError> {
        if perm.len() != self.vertex_count {
            return Err(TreeError::InvalidPermutation);
        }
        let mut seen = vec![false; self.vertex_count];
        for &p in perm {
            if p >= self.vertex_count || seen[p] {
                return Err(TreeError::InvalidPermutation);
            }
            seen[p] = true;
        }
        RationalTree::new(
            self.vertex_count,
            self.edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect(),
        )
    }

    fn reachable_from(&self, start: usize) -> usize {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut count = 0;
        while let Some(v) = queue.pop_front() {
            count += 1;
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        count
    }

    /// The 1 or 2 central vertices found by iterated leaf removal.
    pub fn centers(&self) -> Vec<usize> {
        let n = self.vertex_count;
        if n <= 2 {
            return (0..n).collect();
        }
        let adj = self.adjacency();
        let mut deg = self.degrees();
        let mut removed = vec![false; n];
        let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
        let mut remaining = n;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &leaf in &layer {
                removed[leaf] = true;
                for &w in &adj[leaf] {
                    if !removed[w] {
                        deg[w] -= 1;
                        if deg[w] == 1 {
                            next.push(w);
                        }
                    }
                }
            }
            layer = next;
        }
        let mut centers: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
        centers.sort_unstable();
        centers
    }
}

/// Relabeling-invariant identifier of the isomorphism class: a balanced
/// parenthesis string of length `2 * vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalCode(String);

impl CanonicalCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Per-vertex rooted AHU data for (half of) a tree: children ordered by
/// (subtree code, id), and the subtree code at each vertex.
struct RootedLayout {
    children: Vec<Vec<usize>>,
    codes: Vec<String>,
}

fn rooted_layout(tree: &RationalTree, root: usize, banned: Option<usize>) -> RootedLayout {
    let adj = tree.adjacency();
    let mut layout = RootedLayout {
        children: vec![Vec::new(); tree.vertex_count()],
        codes: vec![String::new(); tree.vertex_count()],
    };
    build_layout(&adj, root, usize::MAX, banned, &mut layout);
    layout
}

fn build_layout(
    adj: &[Vec<usize>],
    v: usize,
    parent: usize,
    banned: Option<usize>,
    layout: &mut RootedLayout,
) -> String {
    let mut kids: Vec<(String, usize)> = adj[v]
        .iter()
        .filter(|&&w| w != parent && Some(w) != banned)
        .map(|&w| (build_layout(adj, w, v, banned, layout), w))
        .collect();
    kids.sort();
    let mut code = String::with_capacity(2 + kids.iter().map(|(c, _)| c.len()).sum::<usize>());
    code.push('(');
    for (c, _) in &kids {
        code.push_str(c);
    }
    code.push(')');
    layout.children[v] = kids.into_iter().map(|(_, w)| w).collect();
    layout.codes[v] = code.clone();
    code
}

/// Center of the tree together with the canonical layout(s) rooted there.
enum CenteredLayout {
    Central {
        root: usize,
        layout: RootedLayout,
    },
    Bicentral {
        roots: (usize, usize),
        // merged: half of `roots.0` and half of `roots.1` in one table
        layout: RootedLayout,
        halves_isomorphic: bool,
    },
}

fn centered_layout(tree: &RationalTree) -> CenteredLayout {
    let centers = tree.centers();
    if centers.len() == 1 {
        let root = centers[0];
        CenteredLayout::Central {
            root,
            layout: rooted_layout(tree, root, None),
        }
    } else {
        let (c1, c2) = (centers[0], centers[1]);
        let la = rooted_layout(tree, c1, Some(c2));
        let lb = rooted_layout(tree, c2, Some(c1));
        let mut layout = la;
        // vertices on c2's side have empty entries in la; fill them from lb
        for v in 0..tree.vertex_count() {
            if layout.codes[v].is_empty() {
                layout.codes[v] = lb.codes[v].clone();
                layout.children[v] = lb.children[v].clone();
            }
        }
        let halves_isomorphic = layout.codes[c1] == layout.codes[c2];
        CenteredLayout::Bicentral {
            roots: (c1, c2),
            layout,
            halves_isomorphic,
        }
    }
}

/// Canonical code of the isomorphism class of `tree`.
pub fn canonical_code(tree: &RationalTree) -> CanonicalCode {
    match centered_layout(tree) {
        CenteredLayout::Central { root, layout } => CanonicalCode(layout.codes[root].clone()),
        CenteredLayout::Bicentral { roots, layout, .. } => {
            let a = &layout.codes[roots.0];
            let b = &layout.codes[roots.1];
            let joined = if a <= b {
                format!("{a}{b}")
            } else {
                format!("{b}{a}")
            };
            CanonicalCode(joined)
        }
    }
}

pub fn are_isomorphic(a: &RationalTree, b: &RationalTree) -> bool {
    a.vertex_count() == b.vertex_count() && canonical_code(a) == canonical_code(b)
}

/// Vertices grouped by multiplicity, i.e. by the number of incident edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityProfile {
    by_multiplicity: BTreeMap<usize, Vec<usize>>,
    max_multiplicity: usize,
    vertex_count: usize,
}

impl MultiplicityProfile {
    /// delta_n: how many vertices have exactly `n` incident edges.
    pub fn delta(&self, n: usize) -> usize {
        self.by_multiplicity.get(&n).map_or(0, Vec::len)
    }

    /// The vertices of multiplicity `n`, in increasing id order.
    pub fn vertices_with(&self, n: usize) -> &[usize] {
        self.by_multiplicity.get(&n).map_or(&[], Vec::as_slice)
    }

    /// All (multiplicity, delta) pairs with delta > 0, in increasing order.
    pub fn delta_counts(&self) -> BTreeMap<usize, usize> {
        self.by_multiplicity
            .iter()
            .map(|(&n, vs)| (n, vs.len()))
            .collect()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.max_multiplicity
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }
}

pub fn multiplicity_profile(tree: &RationalTree) -> MultiplicityProfile {
    let mut by_multiplicity: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, d) in tree.degrees().into_iter().enumerate() {
        by_multiplicity.entry(d).or_default().push(v);
    }
    let max_multiplicity = by_multiplicity.keys().last().copied().unwrap_or(0);
    MultiplicityProfile {
        by_multiplicity,
        max_multiplicity,
        vertex_count: tree.vertex_count(),
    }
}

/// The graph automorphism group: its exact order and a generating set of
/// vertex permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutGroup {
    pub order: u128,
    pub generators: Vec<Vec<usize>>,
}

impl AutGroup {
    pub fn trivial() -> Self {
        AutGroup {
            order: 1,
            generators: Vec::new(),
        }
    }
}

/// Full automorphism group of the tree, computed from the canonical rooted
/// decomposition: identical sibling subtrees may be permuted freely, and a
/// bicentral tree with isomorphic halves admits the half swap.
pub fn automorphism_group(tree: &RationalTree) -> AutGroup {
    let n = tree.vertex_count();
    if n == 1 {
        return AutGroup::trivial();
    }
    let centered = centered_layout(tree);
    let (layout, half_swap) = match &centered {
        CenteredLayout::Central { layout, .. } => (layout, None),
        CenteredLayout::Bicentral {
            roots,
            layout,
            halves_isomorphic,
        } => (layout, halves_isomorphic.then_some(*roots)),
    };

    let mut order: u128 = 1;
    let mut generators = Vec::new();
    for v in 0..n {
        let kids = &layout.children[v];
        let mut i = 0;
        while i < kids.len() {
            let mut j = i + 1;
            while j < kids.len() && layout.codes[kids[j]] == layout.codes[kids[i]] {
                j += 1;
            }
            let run = j - i;
            order *= factorial(run);
            for k in i..j - 1 {
                let mut perm: Vec<usize> = (0..n).collect();
                pair_subtrees(layout, kids[k], kids[k + 1], &mut perm);
                generators.push(perm);
            }
            i = j;
        }
    }
    if let Some((c1, c2)) = half_swap {
        order *= 2;
        let mut perm: Vec<usize> = (0..n).collect();
        pair_subtrees(layout, c1, c2, &mut perm);
        generators.push(perm);
    }
    AutGroup { order, generators }
}

/// Extends `perm` by the canonical isomorphism swapping the subtrees at
/// `a` and `b`, which must have equal codes.
fn pair_subtrees(layout: &RootedLayout, a: usize, b: usize, perm: &mut [usize]) {
    debug_assert_eq!(layout.codes[a], layout.codes[b]);
    perm[a] = b;
    perm[b] = a;
    for (&ca, &cb) in layout.children[a].iter().zip(&layout.children[b]) {
        pair_subtrees(layout, ca, cb, perm);
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// The permutation of edge indices induced by a vertex permutation.
/// Panics if the permutation does not preserve the edge set.
pub fn edge_permutation(tree: &RationalTree, vertex_perm: &[usize]) -> Vec<usize> {
    tree.edges()
        .iter()
        .map(|&(a, b)| {
            tree.edge_index((vertex_perm[a], vertex_perm[b]))
                .expect("vertex permutation does not preserve the edge set")
        })
        .collect()
}

/// For each generator of the automorphism group, how it permutes the
/// canonical edge list.
pub fn edge_action(tree: &RationalTree) -> Vec<Vec<usize>> {
    automorphism_group(tree)
        .generators
        .iter()
        .map(|g| edge_permutation(tree, g))
        .collect()
}

/// Rooted shapes pooled by size, for enumeration.
struct ShapePool {
    // code, size, height, children sorted by code
    shapes: Vec<(String, usize, usize, Vec<usize>)>,
    by_size: Vec<Vec<usize>>,
}

impl ShapePool {
    fn build(max_size: usize) -> ShapePool {
        let mut pool = ShapePool {
            shapes: vec![("()".to_string(), 1, 0, Vec::new())],
            by_size: vec![Vec::new(); max_size + 1],
        };
        if max_size >= 1 {
            pool.by_size[1].push(0);
        }
        for size in 2..=max_size {
            let mut multiset = Vec::new();
            let max_index = pool.shapes.len() - 1;
            pool.collect_shapes(size, size - 1, max_index, &mut multiset);
        }
        pool
    }

    /// Enumerates children multisets as nonincreasing pool-index sequences
    /// with sizes summing to `budget`, registering one shape per multiset.
    fn collect_shapes(&mut self, size: usize, budget: usize, max_index: usize, chosen: &mut Vec<usize>) {
        if budget == 0 {
            self.register(size, chosen.clone());
            return;
        }
        for idx in (0..=max_index).rev() {
            if self.shapes[idx].1 <= budget {
                chosen.push(idx);
                self.collect_shapes(size, budget - self.shapes[idx].1, idx, chosen);
                chosen.pop();
            }
        }
    }

    fn register(&mut self, size: usize, mut children: Vec<usize>) {
        children.sort_by(|&a, &b| self.shapes[a].0.cmp(&self.shapes[b].0));
        let mut code = String::from("(");
        for &c in &children {
            code.push_str(&self.shapes[c].0);
        }
        code.push(')');
        let height = 1 + children.iter().map(|&c| self.shapes[c].2).max().unwrap_or(0);
        self.by_size[size].push(self.shapes.len());
        self.shapes.push((code, size, height, children));
    }

    /// Assigns preorder ids starting at `next_id` and appends parent-child
    /// edges; returns the root's id.
    fn materialize(&self, idx: usize, next_id: &mut usize, edges: &mut Vec<(usize, usize)>) -> usize {
        let my_id = *next_id;
        *next_id += 1;
        for &child in &self.shapes[idx].3 {
            let child_id = self.materialize(child, next_id, edges);
            edges.push((my_id, child_id));
        }
        my_id
    }
}

/// All trees on `n` vertices, one per isomorphism class, sorted by
/// canonical code.
pub fn enumerate_trees(n: usize) -> Result<Vec<RationalTree>, TreeError> {
    if n == 0 {
        return Err(TreeError::InvalidSize);
    }
    if n == 1 {
        return Ok(vec![RationalTree::single_vertex()]);
    }
    let pool = ShapePool::build(n);
    let mut found: Vec<(String, RationalTree)> = Vec::new();

    // one central vertex: root whose height is attained by >= 2 children
    for &idx in &pool.by_size[n] {
        let (ref code, _, height, ref children) = pool.shapes[idx];
        let deepest = children
            .iter()
            .filter(|&&c| pool.shapes[c].2 == height - 1)
            .count();
        if deepest >= 2 {
            let mut edges = Vec::with_capacity(n - 1);
            let mut next_id = 0;
            pool.materialize(idx, &mut next_id, &mut edges);
            found.push((code.clone(), RationalTree::new(n, edges)?));
        }
    }

    // central edge: two rooted halves of equal height
    for size_a in 1..=n / 2 {
        let size_b = n - size_a;
        for &a in &pool.by_size[size_a] {
            for &b in &pool.by_size[size_b] {
                if pool.shapes[a].2 != pool.shapes[b].2 {
                    continue;
                }
                if size_a == size_b && pool.shapes[a].0 > pool.shapes[b].0 {
                    continue;
                }
                let (first, second) = if pool.shapes[a].0 <= pool.shapes[b].0 {
                    (a, b)
                } else {
                    (b, a)
                };
                let mut edges = Vec::with_capacity(n - 1);
                let mut next_id = 0;
                pool.materialize(first, &mut next_id, &mut edges);
                let second_root = next_id;
                pool.materialize(second, &mut next_id, &mut edges);
                edges.push((0, second_root));
                let code = format!("{}{}", pool.shapes[first].0, pool.shapes[second].0);
                found.push((code, RationalTree::new(n, edges)?));
            }
        }
    }

    found.sort_by(|(ca, _), (cb, _)| ca.cmp(cb));
    Ok(found.into_iter().map(|(_, t)| t).collect())
}
