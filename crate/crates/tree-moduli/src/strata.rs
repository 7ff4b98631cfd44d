//! Stratum-level data for each topological type: the automorphism group of
//! the curve, stratum dimensions, first-order deformations, and the
//! specialization poset ordered by edge contraction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tree::{
    automorphism_group, canonical_code, edge_action, enumerate_trees, multiplicity_profile,
    AutGroup, CanonicalCode, RationalTree, TreeError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("the automorphism structure needs maximal multiplicity at most 3, got {0}")]
    MaxMultiplicityExceeded(usize),
}

/// Structure of the automorphism group of the curve with a given dual tree:
/// one factor E (dimension 2) per one-node component, one multiplicative
/// factor (dimension 1) per two-node component, and the graph automorphism
/// group as the group of connected components.
///
/// The smooth curve is the exception: its automorphism group is the full
/// automorphism group of the projective line, of dimension 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveAutStructure {
    pub dimension: usize,
    pub e_factor_count: usize,
    pub gm_factor_count: usize,
    pub component_group: AutGroup,
    pub is_smooth_exception: bool,
}

pub fn curve_aut_structure(tree: &RationalTree) -> Result<CurveAutStructure, StrataError> {
    if tree.vertex_count() == 1 {
        return Ok(CurveAutStructure {
            dimension: 3,
            e_factor_count: 0,
            gm_factor_count: 0,
            component_group: AutGroup::trivial(),
            is_smooth_exception: true,
        });
    }
    let profile = multiplicity_profile(tree);
    if profile.max_multiplicity() > 3 {
        return Err(StrataError::MaxMultiplicityExceeded(
            profile.max_multiplicity(),
        ));
    }
    let delta1 = profile.delta(1);
    let delta2 = profile.delta(2);
    Ok(CurveAutStructure {
        dimension: 2 * delta1 + delta2,
        e_factor_count: delta1,
        gm_factor_count: delta2,
        component_group: automorphism_group(tree),
        is_smooth_exception: false,
    })
}

/// Combinatorial data of one stratum of the moduli stack.
///
/// The codimension equals the node count. The stack dimension is minus the
/// automorphism group dimension; it is present only where the structure
/// result applies (maximal multiplicity at most 3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumDescriptor {
    pub tree: RationalTree,
    pub code: CanonicalCode,
    pub node_count: usize,
    pub codimension: usize,
    pub max_multiplicity: usize,
    pub aut_structure: Option<CurveAutStructure>,
    pub stack_dimension: Option<i64>,
}

pub fn stratum_descriptor(tree: &RationalTree) -> StratumDescriptor {
    let aut_structure = curve_aut_structure(tree).ok();
    let stack_dimension = aut_structure.as_ref().map(|a| -(a.dimension as i64));
    StratumDescriptor {
        code: canonical_code(tree),
        node_count: tree.edge_count(),
        codimension: tree.edge_count(),
        max_multiplicity: multiplicity_profile(tree).max_multiplicity(),
        aut_structure,
        stack_dimension,
        tree: tree.clone(),
    }
}

/// First-order deformations: one 1-dimensional summand per node, permuted
/// by the graph automorphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformationSpace {
    pub dimension: usize,
    pub summand_labels: Vec<(usize, usize)>,
    pub aut_edge_action: Vec<Vec<usize>>,
}

pub fn deformation_space(tree: &RationalTree) -> DeformationSpace {
    DeformationSpace {
        dimension: tree.edge_count(),
        summand_labels: tree.edges().to_vec(),
        aut_edge_action: edge_action(tree),
    }
}

/// All strata with at most `max_nodes` nodes, ordered by closure: a cover
/// `(a, b)` records that stratum `b` is a single edge contraction of
/// stratum `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializationPoset {
    max_nodes: usize,
    strata: Vec<StratumDescriptor>,
    covers: Vec<(usize, usize)>,
    index_by_code: BTreeMap<CanonicalCode, usize>,
}

pub fn specialization_poset(max_nodes: usize) -> Result<SpecializationPoset, TreeError> {
    let mut strata = Vec::new();
    for nodes in 0..=max_nodes {
        for tree in enumerate_trees(nodes + 1)? {
            strata.push(stratum_descriptor(&tree));
        }
    }
    let index_by_code: BTreeMap<CanonicalCode, usize> = strata
        .iter()
        .enumerate()
        .map(|(i, s)| (s.code.clone(), i))
        .collect();
    let mut covers = Vec::new();
    for (idx, stratum) in strata.iter().enumerate() {
        let mut targets = BTreeSet::new();
        for &edge in stratum.tree.edges() {
            let contracted = stratum
                .tree
                .contract_edge(edge)
                .expect("edge taken from the edge list");
            targets.insert(canonical_code(&contracted));
        }
        for code in targets {
            let target = index_by_code[&code];
            covers.push((idx, target));
        }
    }
    covers.sort_unstable();
    Ok(SpecializationPoset {
        max_nodes,
        strata,
        covers,
        index_by_code,
    })
}

impl SpecializationPoset {
    pub fn max_nodes(&self) -> usize {
        self.max_nodes
    }

    /// Strata sorted by (node count, canonical code).
    pub fn strata(&self) -> &[StratumDescriptor] {
        &self.strata
    }

    /// Cover relations as index pairs into `strata()`; `(a, b)` means `b`
    /// is obtained from `a` by contracting one edge.
    pub fn cover_relations(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn index_of(&self, code: &CanonicalCode) -> Option<usize> {
        self.index_by_code.get(code).copied()
    }

    /// Number of strata with exactly `nodes` nodes.
    pub fn rank_size(&self, nodes: usize) -> usize {
        self.strata
            .iter()
            .filter(|s| s.node_count == nodes)
            .count()
    }

    pub fn export(&self) -> PosetExport {
        PosetExport {
            strata: self.strata.iter().map(StratumRecord::from).collect(),
            covers: self
                .covers
                .iter()
                .map(|&(a, b)| {
                    (
                        self.strata[a].code.as_str().to_string(),
                        self.strata[b].code.as_str().to_string(),
                    )
                })
                .collect(),
        }
    }

    /// DOT digraph of the Hasse diagram; arrows point from fewer to more
    /// nodes, and strata of equal node count share a rank.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph specialization {\n  rankdir=TB;\n  node [shape=box];\n");
        for s in &self.strata {
            let _ = writeln!(
                out,
                "  \"{}\" [label=\"{}\\n{} node(s)\"];",
                s.code, s.code, s.node_count
            );
        }
        for nodes in 0..=self.max_nodes {
            let level: Vec<&StratumDescriptor> = self
                .strata
                .iter()
                .filter(|s| s.node_count == nodes)
                .collect();
            if level.is_empty() {
                continue;
            }
            out.push_str("  { rank=same;");
            for s in level {
                let _ = write!(out, " \"{}\";", s.code);
            }
            out.push_str(" }\n");
        }
        for &(a, b) in &self.covers {
            let _ = writeln!(out, "  \"{}\" -> \"{}\";", self.strata[b].code, self.strata[a].code);
        }
        out.push_str("}\n");
        out
    }
}

/// JSON form of one stratum row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumRecord {
    pub code: String,
    pub nodes: usize,
    pub codim: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stack_dim: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub aut_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub aut_component_order: Option<u128>,
}

impl From<&StratumDescriptor> for StratumRecord {
    fn from(s: &StratumDescriptor) -> StratumRecord {
        StratumRecord {
            code: s.code.as_str().to_string(),
            nodes: s.node_count,
            codim: s.codimension,
            stack_dim: s.stack_dimension,
            aut_dim: s.aut_structure.as_ref().map(|a| a.dimension),
            aut_component_order: s.aut_structure.as_ref().map(|a| a.component_group.order),
        }
    }
}

/// JSON form of the whole poset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetExport {
    pub strata: Vec<StratumRecord>,
    pub covers: Vec<(String, String)>,
}

/// Whether `b` lies in the closure of `a`'s stratum: `b` is obtained from
/// `a` by contracting a (possibly empty) set of edges, up to isomorphism.
pub fn is_specialization(a: &RationalTree, b: &RationalTree) -> bool {
    if b.vertex_count() > a.vertex_count() {
        return false;
    }
    let target = canonical_code(b);
    let mut seen = BTreeSet::from([canonical_code(a)]);
    if seen.contains(&target) {
        return true;
    }
    let mut frontier = vec![a.clone()];
    while let Some(tree) = frontier.pop() {
        if tree.vertex_count() <= b.vertex_count() {
            continue;
        }
        for &edge in tree.edges() {
            let contracted = tree.contract_edge(edge).expect("edge from edge list");
            let code = canonical_code(&contracted);
            if code == target {
                return true;
            }
            if seen.insert(code) && contracted.vertex_count() > b.vertex_count() {
                frontier.push(contracted);
            }
        }
    }
    false
}
