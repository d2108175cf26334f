//! Point frameworks in the plane and their self-stresses.
//!
//! Stresses use the displacement convention: the force that edge `{i, j}`
//! exerts on vertex `i` is `w_ij · (P_j − P_i)`. Under this convention the
//! equilibrium condition is equivalent, component by component, to the
//! vanishing of `Σ_j w_ij · dP_j ∧ dP_i`. Use
//! [`StressVector::to_unit_convention`] to obtain tensions along unit edge
//! vectors instead.

use nalgebra::{DMatrix, Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::field::Point2;
use crate::forms::{point_form, wedge, TwoForm};
use crate::graph::Graph;
use crate::linalg::{self, Kernel};

/// Singular values at most `RANK_TOL · σ_max` count as zero.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalFramework {
    graph: Graph,
    positions: Vec<Point2>,
}

impl ClassicalFramework {
    pub fn new(graph: Graph, positions: Vec<Point2>) -> Result<Self> {
        if positions.len() != graph.vertex_count() {
            return Err(Error::Validation(format!(
                "{} positions for {} vertices",
                positions.len(),
                graph.vertex_count()
            )));
        }
        if let Some(v) = positions.iter().position(|p| !p.is_finite()) {
            return Err(Error::Validation(format!(
                "vertex `{}` has a non-finite position",
                graph.vertex_id(v)
            )));
        }
        for e in 0..graph.edge_count() {
            let (i, j) = graph.edges()[e];
            if positions[i] == positions[j] {
                return Err(Error::Validation(format!(
                    "edge `{}` joins coincident positions",
                    graph.edge_label(e)
                )));
            }
        }
        Ok(ClassicalFramework { graph, positions })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn positions(&self) -> &[Point2] {
        &self.positions
    }

    pub fn position(&self, v: usize) -> Point2 {
        self.positions[v]
    }

    /// Largest absolute coordinate over all vertices.
    pub fn coordinate_scale(&self) -> f64 {
        self.positions
            .iter()
            .fold(0.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()))
    }
}

/// Edge stresses, indexed like the graph's edge list. `w_ij = w_ji` is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct StressVector {
    pub values: Vec<f64>,
}

impl StressVector {
    pub fn new(values: Vec<f64>) -> Self {
        StressVector { values }
    }

    pub fn zeros(edges: usize) -> Self {
        StressVector::new(vec![0.0; edges])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Scaled so that the entry of largest magnitude is ±1. Zero vectors are returned unchanged.
    pub fn normalized_max(&self) -> StressVector {
        let m = self.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if m == 0.0 {
            return self.clone();
        }
        StressVector::new(self.values.iter().map(|v| v / m).collect())
    }

    /// Tensions along unit edge vectors: each entry multiplied by the edge length.
    pub fn to_unit_convention(&self, fw: &ClassicalFramework) -> StressVector {
        let values = fw
            .graph()
            .edges()
            .iter()
            .zip(&self.values)
            .map(|(&(i, j), w)| w * fw.position(i).distance(fw.position(j)))
            .collect();
        StressVector::new(values)
    }

    fn check_len(&self, edges: usize) -> Result<()> {
        if self.values.len() != edges {
            return Err(Error::StressLength {
                expected: edges,
                found: self.values.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn checked(&self, graph: &Graph) -> Result<()> {
        self.check_len(graph.edge_count())
    }
}

/// Orthonormal basis of a self-stress space.
///
/// Vectors are unit length, mutually orthogonal, and their first
/// significant entry (in edge order) is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct StressBasis {
    pub vectors: Vec<StressVector>,
    /// Largest singular value of the equilibrium matrix the basis came from.
    pub sigma_max: f64,
}

impl StressBasis {
    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    pub(crate) fn from_kernel(k: &Kernel) -> Self {
        let vectors = k
            .basis
            .column_iter()
            .map(|c| StressVector::new(c.iter().copied().collect()))
            .collect();
        StressBasis {
            vectors,
            sigma_max: k.sigma_max,
        }
    }

    /// Basis vectors as the columns of an `|E| × dimension` matrix.
    pub fn as_matrix(&self, edges: usize) -> DMatrix<f64> {
        DMatrix::from_fn(edges, self.vectors.len(), |r, c| self.vectors[c].values[r])
    }
}

/// `2|V| × |E|` matrix whose kernel is the self-stress space.
///
/// Rows `2i, 2i+1` hold the x and y force balance at vertex `i`; the column
/// of edge `{i, j}` carries `P_j − P_i` in block `i` and `P_i − P_j` in block `j`.
pub fn equilibrium_matrix(fw: &ClassicalFramework) -> DMatrix<f64> {
    let g = fw.graph();
    let mut m = DMatrix::zeros(2 * g.vertex_count(), g.edge_count());
    for (e, &(i, j)) in g.edges().iter().enumerate() {
        let d = fw.position(j) - fw.position(i);
        m[(2 * i, e)] = d.x;
        m[(2 * i + 1, e)] = d.y;
        m[(2 * j, e)] = -d.x;
        m[(2 * j + 1, e)] = -d.y;
    }
    m
}

pub fn self_stress_basis(fw: &ClassicalFramework) -> StressBasis {
    self_stress_basis_with_tol(fw, RANK_TOL)
}

pub fn self_stress_basis_with_tol(fw: &ClassicalFramework, rank_tol: f64) -> StressBasis {
    StressBasis::from_kernel(&linalg::kernel(&equilibrium_matrix(fw), rank_tol))
}

/// `Σ_j w_ij · dP_j ∧ dP_i` at vertex `v`.
pub fn vertex_form(fw: &ClassicalFramework, w: &StressVector, v: usize) -> TwoForm {
    let pv = point_form(fw.position(v));
    fw.graph()
        .edges()
        .iter()
        .zip(&w.values)
        .filter_map(|(&(i, j), &wij)| {
            if v == i {
                Some((j, wij))
            } else if v == j {
                Some((i, wij))
            } else {
                None
            }
        })
        .fold(TwoForm::ZERO, |acc, (other, wij)| {
            acc + wedge(point_form(fw.position(other)), pv).scale(wij)
        })
}

/// Largest norm over vertices of `Σ_j w_ij · dP_j ∧ dP_i`.
pub fn form_residual(fw: &ClassicalFramework, w: &StressVector) -> Result<f64> {
    w.checked(fw.graph())?;
    Ok((0..fw.graph().vertex_count())
        .map(|v| vertex_form(fw, w, v).norm())
        .fold(0.0, f64::max))
}

/// Applies the projective map `A` to every position in homogeneous coordinates `(x, y, 1)`.
pub fn projective_transform(
    fw: &ClassicalFramework,
    a: &Matrix3<f64>,
) -> Result<ClassicalFramework> {
    let det = a.determinant();
    if !det.is_finite() || det.abs() <= 1e-12 * a.norm().powi(3) {
        return Err(Error::SingularTransform);
    }
    let mut positions = Vec::with_capacity(fw.positions().len());
    for (v, p) in fw.positions().iter().enumerate() {
        let h = a * Vector3::new(p.x, p.y, 1.0);
        if h.z.abs() < 1e-12 {
            return Err(Error::PointAtInfinity {
                vertex: fw.graph().vertex_id(v).to_string(),
            });
        }
        positions.push(Point2::new(h.x / h.z, h.y / h.z));
    }
    ClassicalFramework::new(fw.graph().clone(), positions)
}
