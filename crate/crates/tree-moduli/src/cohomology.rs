//! Exact cohomology of line bundles on trees of projective lines.
//!
//! A global section restricts to a homogeneous form of degree `d_v` on each
//! component (zero when `d_v < 0`) and the forms have to agree at every
//! node. That is one linear constraint per edge, and `h0` is the kernel of
//! the resulting constraint matrix over exact scalars.

use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::tree::RationalTree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("expected {expected} degrees, got {got}")]
    DegreeCountMismatch { expected: usize, got: usize },
    #[error("bad bundle specifier: {0}")]
    InvalidBundleSpec(String),
    #[error("h0 - chi is negative ({h0} - {chi}); the gluing kernel is inconsistent")]
    InternalInconsistency { h0: usize, chi: i64 },
}

/// Where each component meets its neighbours: on a component with one node
/// the node sits at infinity, with two nodes at 0 and infinity, with three
/// nodes at 0, 1 and infinity. Components with more nodes continue with the
/// representatives `[1,2]`, `[1,3]`, ... (the values 1/2, 1/3, ...).
///
/// Points are homogeneous pairs `[x, y]`; the n-th node of a component is
/// taken from the fixed list `[0,1]`, `[1,1]`, `[1,0]`, `[1,2]`, ... with
/// the one- and two-node conventions above.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeCoordinates {
    // per vertex, aligned with RationalTree::incident_edges
    points: Vec<Vec<(usize, (i64, i64))>>,
}

fn representatives(count: usize) -> Vec<(i64, i64)> {
    match count {
        0 => Vec::new(),
        1 => vec![(1, 0)],
        2 => vec![(0, 1), (1, 0)],
        k => {
            let mut reps = vec![(0, 1), (1, 1), (1, 0)];
            reps.extend((2..=(k as i64 - 2)).map(|j| (1, j)));
            reps
        }
    }
}

impl NodeCoordinates {
    pub fn for_tree(tree: &RationalTree) -> NodeCoordinates {
        let points = (0..tree.vertex_count())
            .map(|v| {
                let incident = tree.incident_edges(v);
                let reps = representatives(incident.len());
                incident.into_iter().zip(reps).collect()
            })
            .collect();
        NodeCoordinates { points }
    }

    /// The point of component `vertex` glued along edge `edge_index`.
    pub fn point(&self, vertex: usize, edge_index: usize) -> Option<(i64, i64)> {
        self.points[vertex]
            .iter()
            .find(|(e, _)| *e == edge_index)
            .map(|&(_, p)| p)
    }

    /// All (edge index, point) pairs on `vertex`, in canonical edge order.
    pub fn on_vertex(&self, vertex: usize) -> &[(usize, (i64, i64))] {
        &self.points[vertex]
    }
}

/// A line bundle on the curve with dual tree `tree`: an integer degree per
/// component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineBundle {
    tree: RationalTree,
    degrees: Vec<i64>,
}

impl LineBundle {
    pub fn new(tree: RationalTree, degrees: Vec<i64>) -> Result<LineBundle, CohomologyError> {
        if degrees.len() != tree.vertex_count() {
            return Err(CohomologyError::DegreeCountMismatch {
                expected: tree.vertex_count(),
                got: degrees.len(),
            });
        }
        Ok(LineBundle { tree, degrees })
    }

    pub fn structure_sheaf(tree: RationalTree) -> LineBundle {
        let degrees = vec![0; tree.vertex_count()];
        LineBundle { tree, degrees }
    }

    pub fn tree(&self) -> &RationalTree {
        &self.tree
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }
}

/// Degree of the dualizing bundle on each component: two less than the
/// number of nodes on it.
pub fn dualizing_degrees(tree: &RationalTree) -> Vec<i64> {
    tree.degrees().iter().map(|&e| e as i64 - 2).collect()
}

/// The k-th power of the dualizing bundle (k = -1 is its dual).
pub fn power_bundle(tree: &RationalTree, k: i64) -> LineBundle {
    let degrees = dualizing_degrees(tree).into_iter().map(|d| k * d).collect();
    LineBundle {
        tree: tree.clone(),
        degrees,
    }
}

/// One global section: a coefficient vector per component, entry `i` being
/// the coefficient of `X^i Y^(d-i)`; empty on components of negative degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Section<S> {
    pub coefficients: Vec<Vec<S>>,
}

impl<S: Scalar> Section<S> {
    /// Value of the section on `vertex` at the homogeneous point `[x, y]`.
    pub fn value_at(&self, vertex: usize, point: (i64, i64)) -> S {
        let coeffs = &self.coefficients[vertex];
        if coeffs.is_empty() {
            return S::zero();
        }
        let d = coeffs.len() - 1;
        let x = S::from_int(point.0);
        let y = S::from_int(point.1);
        let mut total = S::zero();
        let mut x_pow = S::one();
        let mut x_powers = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            x_powers.push(x_pow.clone());
            x_pow = x_pow * x.clone();
        }
        let mut y_pow = S::one();
        for i in (0..=d).rev() {
            // y_pow = y^(d - i)
            total = total + coeffs[i].clone() * x_powers[i].clone() * y_pow.clone();
            y_pow = y_pow * y.clone();
        }
        total
    }
}

/// The space of global sections, with a deterministic reduced-echelon basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionSpace<S> {
    pub dimension: usize,
    pub basis: Vec<Section<S>>,
}

impl<S: Scalar> SectionSpace<S> {
    /// Every basis section takes equal values on the two branches at every
    /// node (exact equality).
    pub fn agrees_at_nodes(&self, bundle: &LineBundle) -> bool {
        let coords = NodeCoordinates::for_tree(bundle.tree());
        self.basis.iter().all(|section| {
            bundle.tree().edges().iter().enumerate().all(|(ei, &(u, v))| {
                let pu = coords.point(u, ei).expect("incident");
                let pv = coords.point(v, ei).expect("incident");
                section.value_at(u, pu) == section.value_at(v, pv)
            })
        })
    }
}

/// Dimension and basis of the space of global sections.
pub fn h0<S: Scalar>(bundle: &LineBundle) -> SectionSpace<S> {
    let tree = bundle.tree();
    let degrees = bundle.degrees();
    let n = tree.vertex_count();

    // variable layout: vertex-major, X-degree descending within a vertex
    let mut offsets = vec![None; n];
    let mut total = 0usize;
    for v in 0..n {
        if degrees[v] >= 0 {
            offsets[v] = Some(total);
            total += degrees[v] as usize + 1;
        }
    }

    let coords = NodeCoordinates::for_tree(tree);
    let mut rows = Vec::with_capacity(tree.edge_count());
    for (ei, &(u, v)) in tree.edges().iter().enumerate() {
        let mut row = vec![S::zero(); total];
        accumulate_evaluation(&mut row, &offsets, degrees, &coords, u, ei, false);
        accumulate_evaluation(&mut row, &offsets, degrees, &coords, v, ei, true);
        rows.push(row);
    }
    let matrix = if rows.is_empty() {
        Matrix::zeros(0, total)
    } else {
        Matrix::from_rows(rows)
    };

    let basis = matrix
        .kernel_basis()
        .into_iter()
        .map(|vector| {
            let coefficients = (0..n)
                .map(|v| match offsets[v] {
                    None => Vec::new(),
                    Some(off) => {
                        let d = degrees[v] as usize;
                        // block index (d - i) holds the coefficient of X^i
                        (0..=d).map(|i| vector[off + (d - i)].clone()).collect()
                    }
                })
                .collect();
            Section { coefficients }
        })
        .collect::<Vec<_>>();
    SectionSpace {
        dimension: basis.len(),
        basis,
    }
}

fn accumulate_evaluation<S: Scalar>(
    row: &mut [S],
    offsets: &[Option<usize>],
    degrees: &[i64],
    coords: &NodeCoordinates,
    vertex: usize,
    edge_index: usize,
    negate: bool,
) {
    let Some(off) = offsets[vertex] else {
        return; // negative degree: the restriction is zero
    };
    let d = degrees[vertex] as usize;
    let (x, y) = coords.point(vertex, edge_index).expect("incident edge");
    let xs = S::from_int(x);
    let ys = S::from_int(y);
    // coefficient of X^i Y^(d-i) evaluated at (x, y)
    let mut x_powers = Vec::with_capacity(d + 1);
    let mut acc = S::one();
    for _ in 0..=d {
        x_powers.push(acc.clone());
        acc = acc * xs.clone();
    }
    let mut y_pow = S::one();
    for i in (0..=d).rev() {
        let value = x_powers[i].clone() * y_pow.clone();
        let signed = if negate { -value } else { value };
        row[off + (d - i)] = row[off + (d - i)].clone() + signed;
        y_pow = y_pow * ys.clone();
    }
}

/// Euler characteristic: the degree sum plus the component count, minus
/// the node count.
pub fn euler_characteristic(bundle: &LineBundle) -> i64 {
    let degree_sum: i64 = bundle.degrees().iter().map(|&d| d + 1).sum();
    degree_sum - bundle.tree().edge_count() as i64
}

/// h1 computed as h0 minus the Euler characteristic.
pub fn h1<S: Scalar>(bundle: &LineBundle) -> Result<usize, CohomologyError> {
    let h0_dim = h0::<S>(bundle).dimension;
    let chi = euler_characteristic(bundle);
    let h1 = h0_dim as i64 - chi;
    if h1 < 0 {
        return Err(CohomologyError::InternalInconsistency { h0: h0_dim, chi });
    }
    Ok(h1 as usize)
}

/// Bundle specifier grammar used on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BundleSpec {
    Dualizing,
    DualizingDual,
    DualizingPower(i64),
    Degrees(Vec<i64>),
}

impl BundleSpec {
    /// Accepts `dualizing`, `dualizing-dual`, `dualizing-power:<k>` and
    /// `degrees:<d0,d1,...>`.
    pub fn parse(input: &str) -> Result<BundleSpec, CohomologyError> {
        match input {
            "dualizing" => return Ok(BundleSpec::Dualizing),
            "dualizing-dual" => return Ok(BundleSpec::DualizingDual),
            _ => {}
        }
        if let Some(rest) = input.strip_prefix("dualizing-power:") {
            let k = rest
                .parse::<i64>()
                .map_err(|_| CohomologyError::InvalidBundleSpec(input.to_string()))?;
            return Ok(BundleSpec::DualizingPower(k));
        }
        if let Some(rest) = input.strip_prefix("degrees:") {
            let degrees = rest
                .split(',')
                .map(|part| part.trim().parse::<i64>())
                .collect::<Result<Vec<i64>, _>>()
                .map_err(|_| CohomologyError::InvalidBundleSpec(input.to_string()))?;
            return Ok(BundleSpec::Degrees(degrees));
        }
        Err(CohomologyError::InvalidBundleSpec(input.to_string()))
    }

    pub fn realize(&self, tree: &RationalTree) -> Result<LineBundle, CohomologyError> {
        match self {
            BundleSpec::Dualizing => Ok(power_bundle(tree, 1)),
            BundleSpec::DualizingDual => Ok(power_bundle(tree, -1)),
            BundleSpec::DualizingPower(k) => Ok(power_bundle(tree, *k)),
            BundleSpec::Degrees(degrees) => LineBundle::new(tree.clone(), degrees.clone()),
        }
    }
}
