//! Fitting ideals of presentation matrices and node-count stratification
//! of local families at rational parameter points.
//!
//! A family is given by its node equations f1..fk; the point with exactly
//! the equations f_{i1},...,f_{ij} vanishing lies in the stratum of
//! j-nodal fibers. The same count falls out of the minors of the diagonal
//! presentation matrix, which the tests use as a second route.

use serde::Deserialize;
use thiserror::Error;

use crate::poly::{ArityError, MultiPoly, ParseError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FittingError {
    #[error(transparent)]
    Arity(#[from] ArityError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("bad family JSON: {0}")]
    FamilyFormat(String),
    #[error("bad points JSON: {0}")]
    PointsFormat(String),
}

/// A matrix of polynomials presenting a module; its minors generate the
/// Fitting ideals.
#[derive(Debug, Clone, PartialEq)]
pub struct PresentationMatrix<S> {
    rows: usize,
    cols: usize,
    entries: Vec<MultiPoly<S>>,
}

impl<S: Scalar> PresentationMatrix<S> {
    pub fn new(rows: usize, cols: usize, entries: Vec<MultiPoly<S>>) -> PresentationMatrix<S> {
        assert_eq!(entries.len(), rows * cols, "entry count");
        if let Some(first) = entries.first() {
            assert!(
                entries.iter().all(|p| p.variable_count() == first.variable_count()),
                "mixed variable counts"
            );
        }
        PresentationMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &MultiPoly<S> {
        &self.entries[r * self.cols + c]
    }
}

/// All size-`(cols - rank_drop)` minors of the matrix, dropped to the
/// nonzero ones, in lexicographic (row subset, column subset) order.
///
/// By the usual conventions the empty minor is 1 (unit ideal) when the
/// requested size is zero or less, and there are no generators at all
/// (zero ideal) when the size exceeds the matrix.
pub fn fitting_generators<S: Scalar>(
    matrix: &PresentationMatrix<S>,
    rank_drop: usize,
) -> Vec<MultiPoly<S>> {
    let vars = matrix
        .entries
        .first()
        .map_or(0, |p| p.variable_count());
    if matrix.cols <= rank_drop {
        return vec![MultiPoly::one(vars)];
    }
    let size = matrix.cols - rank_drop;
    if size > matrix.rows.min(matrix.cols) {
        return Vec::new();
    }
    let mut generators = Vec::new();
    for row_set in subsets(matrix.rows, size) {
        for col_set in subsets(matrix.cols, size) {
            let minor = determinant(matrix, &row_set, &col_set);
            if !minor.is_zero() {
                generators.push(minor);
            }
        }
    }
    generators
}

/// Laplace expansion along the first selected row; exact over the
/// coefficient ring, no division.
fn determinant<S: Scalar>(
    matrix: &PresentationMatrix<S>,
    row_set: &[usize],
    col_set: &[usize],
) -> MultiPoly<S> {
    let vars = matrix
        .entries
        .first()
        .map_or(0, |p| p.variable_count());
    match row_set.len() {
        0 => MultiPoly::one(vars),
        1 => matrix.entry(row_set[0], col_set[0]).clone(),
        _ => {
            let mut total = MultiPoly::zero(vars);
            let rest_rows = &row_set[1..];
            for (j, &col) in col_set.iter().enumerate() {
                let pivot = matrix.entry(row_set[0], col);
                if pivot.is_zero() {
                    continue;
                }
                let rest_cols: Vec<usize> = col_set
                    .iter()
                    .enumerate()
                    .filter(|&(jj, _)| jj != j)
                    .map(|(_, &c)| c)
                    .collect();
                let cofactor = determinant(matrix, rest_rows, &rest_cols);
                let term = pivot.mul(&cofactor);
                total = if j % 2 == 0 {
                    total.add(&term)
                } else {
                    total.sub(&term)
                };
            }
            total
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(n, k, i + 1, current, out);
            current.pop();
        }
    }
    rec(n, k, 0, &mut current, &mut out);
    out
}

/// A local family of curves over a parameter space, given by one equation
/// per potential node.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFamily<S> {
    node_equations: Vec<MultiPoly<S>>,
    parameter_count: usize,
}

impl<S: Scalar> LocalFamily<S> {
    pub fn new(parameter_count: usize, node_equations: Vec<MultiPoly<S>>) -> LocalFamily<S> {
        assert!(
            node_equations
                .iter()
                .all(|p| p.variable_count() == parameter_count),
            "node equations must share the parameter variables"
        );
        LocalFamily {
            node_equations,
            parameter_count,
        }
    }

    /// The versal family t0, t1, ..., t{k-1} over k parameters.
    pub fn versal(k: usize) -> LocalFamily<S> {
        LocalFamily {
            node_equations: (0..k).map(|i| MultiPoly::var(k, i)).collect(),
            parameter_count: k,
        }
    }

    pub fn node_equations(&self) -> &[MultiPoly<S>] {
        &self.node_equations
    }

    pub fn parameter_count(&self) -> usize {
        self.parameter_count
    }

    /// Parses the family JSON `{"parameters": m, "nodes": ["t0*t1 - 1", ...]}`.
    pub fn from_json(input: &str) -> Result<LocalFamily<S>, FittingError> {
        #[derive(Deserialize)]
        struct FamilySpec {
            parameters: usize,
            nodes: Vec<String>,
        }
        let spec: FamilySpec =
            serde_json::from_str(input).map_err(|e| FittingError::FamilyFormat(e.to_string()))?;
        let node_equations = spec
            .nodes
            .iter()
            .map(|src| MultiPoly::parse(src, spec.parameters))
            .collect::<Result<Vec<_>, ParseError>>()?;
        Ok(LocalFamily::new(spec.parameters, node_equations))
    }
}

/// Where a point sits in the node-count filtration: it lies in every
/// at-least-k locus for k up to `at_least`, and in the exact stratum
/// `exact`. The two agree by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StratumIndex {
    pub at_least: usize,
    pub exact: usize,
}

impl StratumIndex {
    pub fn contains_at_least(&self, k: usize) -> bool {
        k <= self.at_least
    }
}

/// Counts the node equations vanishing at the point.
pub fn node_count_at<S: Scalar>(
    family: &LocalFamily<S>,
    point: &[S],
) -> Result<StratumIndex, FittingError> {
    if point.len() != family.parameter_count {
        return Err(ArityError {
            expected: family.parameter_count,
            got: point.len(),
        }
        .into());
    }
    let mut exact = 0;
    for equation in &family.node_equations {
        if equation.evaluate(point)?.is_zero() {
            exact += 1;
        }
    }
    Ok(StratumIndex {
        at_least: exact,
        exact,
    })
}

/// Assigns every point its exact stratum, in input order.
pub fn stratify_points<S: Scalar>(
    family: &LocalFamily<S>,
    points: &[Vec<S>],
) -> Result<Vec<(Vec<S>, StratumIndex)>, FittingError> {
    points
        .iter()
        .map(|p| Ok((p.clone(), node_count_at(family, p)?)))
        .collect()
}

/// The diagonal presentation with the node equations on the diagonal.
pub fn diagonal_presentation<S: Scalar>(family: &LocalFamily<S>) -> PresentationMatrix<S> {
    let k = family.node_equations.len();
    let vars = family.parameter_count;
    let mut entries = vec![MultiPoly::zero(vars); k * k];
    for (i, f) in family.node_equations.iter().enumerate() {
        entries[i * k + i] = f.clone();
    }
    PresentationMatrix::new(k, k, entries)
}

/// Node count read off the presentation matrix alone: the largest j such
/// that every generator of the rank-drop j-1 Fitting ideal vanishes at the
/// point. This is the second route the stratification tests compare
/// against direct evaluation.
pub fn node_count_from_minors<S: Scalar>(
    matrix: &PresentationMatrix<S>,
    point: &[S],
) -> Result<usize, FittingError> {
    let mut best = 0;
    for j in 1..=matrix.cols() {
        let generators = fitting_generators(matrix, j - 1);
        let mut all_vanish = true;
        for g in &generators {
            if !g.evaluate(point)?.is_zero() {
                all_vanish = false;
                break;
            }
        }
        if all_vanish {
            best = j;
        } else {
            break;
        }
    }
    Ok(best)
}

/// Parses points given as JSON arrays of rationals; each coordinate is an
/// integer or a string in the expression grammar (e.g. `"-1/2"`).
pub fn parse_points_json<S: Scalar>(input: &str) -> Result<Vec<Vec<S>>, FittingError> {
    let value: serde_json::Value =
        serde_json::from_str(input).map_err(|e| FittingError::PointsFormat(e.to_string()))?;
    let rows = value
        .as_array()
        .ok_or_else(|| FittingError::PointsFormat("expected an array of points".into()))?;
    rows.iter()
        .map(|row| {
            let coords = row
                .as_array()
                .ok_or_else(|| FittingError::PointsFormat("each point must be an array".into()))?;
            coords.iter().map(parse_coordinate).collect()
        })
        .collect()
}

fn parse_coordinate<S: Scalar>(value: &serde_json::Value) -> Result<S, FittingError> {
    match value {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(S::from_int)
            .ok_or_else(|| FittingError::PointsFormat(format!("non-integer number {n}"))),
        serde_json::Value::String(s) => {
            // a constant in the expression grammar, e.g. "-1/2"
            let constant = MultiPoly::<S>::parse(s, 0)?;
            Ok(constant.evaluate(&[])?)
        }
        other => Err(FittingError::PointsFormat(format!(
            "expected a number or string, got {other}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn rat(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn poly(src: &str, vars: usize) -> MultiPoly<Rat> {
        MultiPoly::parse(src, vars).unwrap()
    }

    fn diag2() -> PresentationMatrix<Rat> {
        diagonal_presentation(&LocalFamily::<Rat>::versal(2))
    }

    #[test]
    fn fitting_generators_of_the_diagonal() {
        let gens = fitting_generators(&diag2(), 1);
        assert_eq!(gens, vec![poly("t0", 2), poly("t1", 2)]);

        let gens = fitting_generators(&diag2(), 0);
        assert_eq!(gens, vec![poly("t0*t1", 2)]);

        let gens = fitting_generators(&diag2(), 2);
        assert_eq!(gens, vec![MultiPoly::one(2)]);

        let gens = fitting_generators(&diag2(), 3);
        assert_eq!(gens, vec![MultiPoly::one(2)]);
    }

    #[test]
    fn zero_ideal_when_minors_do_not_fit() {
        let tall = PresentationMatrix::new(
            1,
            2,
            vec![poly("t0", 1), poly("t0 + 1", 1)],
        );
        // 2x2 minors of a 1x2 matrix: none
        assert!(fitting_generators(&tall, 0).is_empty());
    }

    #[test]
    fn node_counts_for_the_versal_family() {
        let fam = LocalFamily::<Rat>::versal(2);
        assert_eq!(
            node_count_at(&fam, &[rat(0), rat(0)]).unwrap().exact,
            2
        );
        assert_eq!(
            node_count_at(&fam, &[rat(1), rat(0)]).unwrap().exact,
            1
        );
        assert_eq!(
            node_count_at(&fam, &[rat(3), rat(5)]).unwrap().exact,
            0
        );
        let idx = node_count_at(&fam, &[rat(1), rat(0)]).unwrap();
        assert!(idx.contains_at_least(0));
        assert!(idx.contains_at_least(1));
        assert!(!idx.contains_at_least(2));
    }

    #[test]
    fn arity_errors_propagate() {
        let fam = LocalFamily::<Rat>::versal(2);
        assert!(matches!(
            node_count_at(&fam, &[rat(0)]),
            Err(FittingError::Arity(ArityError {
                expected: 2,
                got: 1
            }))
        ));
    }

    #[test]
    fn grid_stratification() {
        let fam = LocalFamily::<Rat>::versal(2);
        let grid: Vec<Vec<Rat>> = (-1..=1)
            .flat_map(|a| (-1..=1).map(move |b| vec![rat(a), rat(b)]))
            .collect();
        let strata = stratify_points(&fam, &grid).unwrap();
        let count = |k: usize| strata.iter().filter(|(_, s)| s.exact == k).count();
        assert_eq!(count(0), 4);
        assert_eq!(count(1), 4);
        assert_eq!(count(2), 1);
    }

    #[test]
    fn empty_family_is_everywhere_smooth() {
        let fam = LocalFamily::<Rat>::new(2, vec![]);
        let idx = node_count_at(&fam, &[rat(7), rat(-2)]).unwrap();
        assert_eq!(idx.exact, 0);
        let d = diagonal_presentation(&fam);
        assert_eq!((d.rows(), d.cols()), (0, 0));
        assert_eq!(node_count_from_minors(&d, &[rat(7), rat(-2)]).unwrap(), 0);
    }

    #[test]
    fn hyperbola_family() {
        let fam = LocalFamily::new(2, vec![poly("t0*t1 - 1", 2)]);
        assert_eq!(
            node_count_at(&fam, &[rat(1), rat(1)]).unwrap().exact,
            1
        );
        assert_eq!(
            node_count_at(&fam, &[rat(2), rat(1)]).unwrap().exact,
            0
        );
        let d = diagonal_presentation(&fam);
        assert_eq!((d.rows(), d.cols()), (1, 1));
        assert_eq!(d.entry(0, 0), &poly("t0*t1 - 1", 2));
    }

    #[test]
    fn two_routes_agree_on_the_diagonal() {
        let fam = LocalFamily::new(
            2,
            vec![poly("t0*t1 - 1", 2), poly("t0 - t1", 2), poly("t0", 2)],
        );
        let matrix = diagonal_presentation(&fam);
        for a in -2..=2 {
            for b in -2..=2 {
                let point = vec![rat(a), rat(b)];
                let direct = node_count_at(&fam, &point).unwrap().exact;
                let via_minors = node_count_from_minors(&matrix, &point).unwrap();
                assert_eq!(direct, via_minors, "at ({a}, {b})");
            }
        }
    }

    #[test]
    fn presentation_invariance_under_unimodular_transform() {
        // U * D * V with U, V unimodular over the polynomial ring
        let f1 = poly("t0", 2);
        let f2 = poly("t1", 2);
        let transformed = PresentationMatrix::new(
            2,
            2,
            vec![
                // row 0: (f1 + f2, f2), row 1: (f2, f2)
                f1.add(&f2),
                f2.clone(),
                f2.clone(),
                f2.clone(),
            ],
        );
        // transformed = [[1,1],[0,1]] * diag(f1,f2) * [[1,0],[1,1]]
        let shuffled = PresentationMatrix::new(
            2,
            2,
            vec![MultiPoly::zero(2), f2.clone(), f1.clone(), MultiPoly::zero(2)],
        );
        let diag = diag2();
        for a in -2..=2 {
            for b in -2..=2 {
                let point = vec![rat(a), rat(b)];
                let reference = node_count_from_minors(&diag, &point).unwrap();
                assert_eq!(
                    reference,
                    node_count_from_minors(&transformed, &point).unwrap(),
                    "unimodular transform at ({a}, {b})"
                );
                assert_eq!(
                    reference,
                    node_count_from_minors(&shuffled, &point).unwrap(),
                    "row shuffle at ({a}, {b})"
                );
            }
        }
    }

    #[test]
    fn family_json_parsing() {
        let fam = LocalFamily::<Rat>::from_json(r#"{"parameters":2,"nodes":["t0*t1 - 1","t0"]}"#)
            .unwrap();
        assert_eq!(fam.parameter_count(), 2);
        assert_eq!(fam.node_equations().len(), 2);
        assert!(LocalFamily::<Rat>::from_json(r#"{"parameters":1,"nodes":["t5"]}"#).is_err());
        assert!(LocalFamily::<Rat>::from_json(r#"{"nodes":[]}"#).is_err());
    }

    #[test]
    fn points_json_parsing() {
        let points = parse_points_json::<Rat>(r#"[[0, 1], ["1/2", "-3"]]"#).unwrap();
        assert_eq!(points.len(), 2);
        assert_eq!(points[1][0], Rat::new(1.into(), 2.into()));
        assert_eq!(points[1][1], rat(-3));
        assert!(parse_points_json::<Rat>(r#"[[0.5]]"#).is_err());
        assert!(parse_points_json::<Rat>(r#"{"points":[]}"#).is_err());
        assert!(parse_points_json::<Rat>(r#"[[true]]"#).is_err());
    }

    #[test]
    fn minor_expansion_matches_hand_determinant() {
        // [[t0, 1], [1, t0]] has determinant t0^2 - 1
        let m = PresentationMatrix::new(
            2,
            2,
            vec![poly("t0", 1), poly("1", 1), poly("1", 1), poly("t0", 1)],
        );
        let gens = fitting_generators(&m, 0);
        assert_eq!(gens, vec![poly("t0^2 - 1", 1)]);
    }
}
