//! Independent oracles for the integration suites. Nothing here calls into
//! the canonical-code or enumeration machinery it is used to check.
//!
//! Each integration test compiles its own copy, so not every helper is
//! used everywhere.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use tree_moduli::tree::RationalTree;

/// Decodes a Prüfer sequence of length n-2 into the edge list of a labeled
/// tree on n vertices.
pub fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    assert!(n >= 2 && seq.len() == n - 2);
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = 0;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &v in seq {
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    edges
}

pub fn tree_from_prufer(seq: &[usize], n: usize) -> RationalTree {
    if n == 1 {
        return RationalTree::single_vertex();
    }
    RationalTree::new(n, prufer_decode(seq, n)).expect("Prüfer decode yields a tree")
}

/// Classifies labeled trees up to isomorphism by the sorted multiset of
/// rooted codes over every choice of root; rooted codes are AHU-style
/// sorted child-code vectors interned to small integers. Scratch buffers
/// are reused across calls so the brute-force sweeps stay cheap.
#[derive(Default)]
pub struct ClassifyOracle {
    interner: HashMap<Vec<u32>, u32>,
    start: Vec<usize>,
    cursor: Vec<usize>,
    adj: Vec<usize>,
    order: Vec<usize>,
    parent: Vec<usize>,
    codes: Vec<u32>,
    child_codes: Vec<u32>,
}

impl ClassifyOracle {
    pub fn new() -> Self {
        Self::default()
    }

    /// Isomorphism-class key of a labeled tree. Two trees on n vertices get
    /// the same key exactly when they are isomorphic.
    pub fn class_key(&mut self, n: usize, edges: &[(usize, usize)]) -> Vec<u32> {
        // CSR adjacency
        self.start.clear();
        self.start.resize(n + 1, 0);
        for &(a, b) in edges {
            self.start[a + 1] += 1;
            self.start[b + 1] += 1;
        }
        for i in 0..n {
            self.start[i + 1] += self.start[i];
        }
        self.adj.clear();
        self.adj.resize(2 * edges.len(), 0);
        self.cursor.clear();
        self.cursor.extend_from_slice(&self.start[..n]);
        for &(a, b) in edges {
            self.adj[self.cursor[a]] = b;
            self.cursor[a] += 1;
            self.adj[self.cursor[b]] = a;
            self.cursor[b] += 1;
        }

        self.parent.resize(n, usize::MAX);
        self.codes.resize(n, 0);
        let mut key = Vec::with_capacity(n);
        for root in 0..n {
            self.order.clear();
            self.order.push(root);
            self.parent[root] = usize::MAX;
            let mut head = 0;
            while head < self.order.len() {
                let v = self.order[head];
                head += 1;
                for i in self.start[v]..self.start[v + 1] {
                    let w = self.adj[i];
                    if w != self.parent[v] {
                        self.parent[w] = v;
                        self.order.push(w);
                    }
                }
            }
            // children before parents
            for idx in (0..self.order.len()).rev() {
                let v = self.order[idx];
                self.child_codes.clear();
                for i in self.start[v]..self.start[v + 1] {
                    let w = self.adj[i];
                    if self.parent[w] == v {
                        self.child_codes.push(self.codes[w]);
                    }
                }
                self.child_codes.sort_unstable();
                let id = match self.interner.get(self.child_codes.as_slice()) {
                    Some(&id) => id,
                    None => {
                        let id = self.interner.len() as u32;
                        self.interner.insert(self.child_codes.clone(), id);
                        id
                    }
                };
                self.codes[v] = id;
            }
            key.push(self.codes[root]);
        }
        key.sort_unstable();
        key
    }

    /// Number of isomorphism classes of trees on n vertices, by brute force
    /// over all n^(n-2) Prüfer sequences.
    pub fn count_classes_brute_force(&mut self, n: usize) -> usize {
        if n == 1 || n == 2 {
            return 1;
        }
        let len = n - 2;
        let mut classes: HashSet<Vec<u32>> = HashSet::new();
        let mut seq = vec![0usize; len];
        loop {
            let edges = prufer_decode(&seq, n);
            let key = self.class_key(n, &edges);
            classes.insert(key);
            // odometer over {0..n-1}^(n-2)
            let mut pos = len;
            loop {
                if pos == 0 {
                    return classes.len();
                }
                pos -= 1;
                seq[pos] += 1;
                if seq[pos] < n {
                    break;
                }
                seq[pos] = 0;
            }
        }
    }
}

/// Order of the automorphism group by exhaustive search over all vertex
/// permutations.
pub fn exhaustive_aut_order(tree: &RationalTree) -> usize {
    let n = tree.vertex_count();
    let edge_set: HashSet<(usize, usize)> = tree.edges().iter().copied().collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0;
    permute(&mut perm, 0, &mut |p| {
        let ok = edge_set.iter().all(|&(a, b)| {
            let (x, y) = (p[a].min(p[b]), p[a].max(p[b]));
            edge_set.contains(&(x, y))
        });
        if ok {
            count += 1;
        }
    });
    count
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}
