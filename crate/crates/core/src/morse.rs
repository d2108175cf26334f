//! Function tensegrities: graphs whose vertices carry Morse functions.
//!
//! For vertex `i` with field `f_i` the equilibrium condition reads
//!
//! ```text
//! Σ_k (−1)^ind(P_ik) Σ_j w_ij ∇f_j(P_ik) = 0,
//! ```
//!
//! summed over the critical points `P_ik` of `f_i` inside the scene's
//! bounding box. This is the 2-form condition `Σ ± Σ w_ij dF_j ∧ dF_i = 0`
//! after the reduction `dF_i ∧ dF_j = dz ∧ df_j`, valid because `df_i`
//! vanishes at `P_ik`. The sign of each row block is fixed by this
//! convention; it does not affect the kernel.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::classical::{ClassicalFramework, StressBasis, StressVector, RANK_TOL};
use crate::critical::{self, CriticalPoint, Derivatives, SolverParams};
use crate::error::{Error, Result};
use crate::field::{BBox, Point2, ScalarField};
use crate::graph::Graph;
use crate::linalg;

/// Critical point given explicitly in a scene file, bypassing the solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinnedCriticalPoint {
    pub location: Point2,
    pub morse_index: u8,
}

/// Defaults for rendering stored alongside a scene.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderSettings {
    pub grid: usize,
    pub levels: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    graph: Graph,
    fields: Vec<ScalarField>,
    bbox: BBox,
    pub solver: SolverParams,
    pinned: BTreeMap<String, Vec<PinnedCriticalPoint>>,
    pub render: Option<RenderSettings>,
}

impl Scene {
    pub fn new(graph: Graph, fields: Vec<ScalarField>, bbox: BBox) -> Result<Self> {
        if fields.len() != graph.vertex_count() {
            return Err(Error::Validation(format!(
                "{} fields for {} vertices",
                fields.len(),
                graph.vertex_count()
            )));
        }
        Ok(Scene {
            graph,
            fields,
            bbox,
            solver: SolverParams::default(),
            pinned: BTreeMap::new(),
            render: None,
        })
    }

    /// Pins the critical points of vertex `id`; they replace the solver's output.
    pub fn pin(&mut self, id: &str, points: Vec<PinnedCriticalPoint>) -> Result<()> {
        if self.graph.index_of(id).is_none() {
            return Err(Error::Validation(format!(
                "pinned critical points for unknown vertex `{id}`"
            )));
        }
        if let Some(p) = points
            .iter()
            .find(|p| p.morse_index > 2 || !p.location.is_finite())
        {
            return Err(Error::Validation(format!(
                "pinned critical point of `{id}` at ({}, {}) needs finite coordinates and index 0, 1 or 2",
                p.location.x, p.location.y
            )));
        }
        self.pinned.insert(id.to_string(), points);
        Ok(())
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn fields(&self) -> &[ScalarField] {
        &self.fields
    }

    pub fn field(&self, v: usize) -> &ScalarField {
        &self.fields[v]
    }

    pub fn bbox(&self) -> &BBox {
        &self.bbox
    }

    pub fn pinned(&self) -> &BTreeMap<String, Vec<PinnedCriticalPoint>> {
        &self.pinned
    }

    /// Critical points of every vertex field inside the bounding box, in vertex order.
    ///
    /// Errors name the first offending vertex.
    pub fn critical_sets(&self) -> Result<Vec<Vec<CriticalPoint>>> {
        let results: Vec<Result<Vec<CriticalPoint>>> = (0..self.graph.vertex_count())
            .into_par_iter()
            .map(|v| self.critical_points_of(v))
            .collect();
        results.into_iter().collect()
    }

    fn critical_points_of(&self, v: usize) -> Result<Vec<CriticalPoint>> {
        let id = self.graph.vertex_id(v);
        let f = &self.fields[v];
        let points = match self.pinned.get(id) {
            Some(pinned) => {
                let d = Derivatives::new(f);
                pinned
                    .iter()
                    .map(|p| CriticalPoint {
                        location: p.location,
                        morse_index: p.morse_index,
                        hessian_det: d.hessian_at(p.location).det(),
                    })
                    .collect()
            }
            None => critical::find_critical_points_with(f, &self.bbox, &self.solver)
                .map_err(|e| Error::at_vertex(id, e))?,
        };
        if points.is_empty() {
            return Err(Error::NoCriticalPoints {
                vertex: id.to_string(),
            });
        }
        Ok(points)
    }
}

/// Whether critical points of a vertex are summed into one condition or kept apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AssemblyMode {
    /// One 2-row block per vertex: the index-signed sum over its critical points.
    #[default]
    Summed,
    /// One 2-row block per critical point. The kernel is a subspace of the summed one.
    PerCriticalPoint,
}

#[derive(Debug, Clone)]
pub struct MorseEquilibriumSystem {
    pub matrix: DMatrix<f64>,
    /// Critical points per vertex, in vertex order.
    pub critical_sets: Vec<Vec<CriticalPoint>>,
    pub mode: AssemblyMode,
}

/// Builds the linear system whose kernel is the self-stress space of `scene`.
///
/// Columns follow the edge list. In [`AssemblyMode::Summed`] rows `2i, 2i+1`
/// belong to vertex `i`; the column of edge `{i, j}` holds
/// `Σ_k (−1)^ind(P_ik) ∇f_j(P_ik)` there.
pub fn assemble(scene: &Scene, mode: AssemblyMode) -> Result<MorseEquilibriumSystem> {
    let critical_sets = scene.critical_sets()?;
    let graph = scene.graph();
    let gradients: Vec<(ScalarField, ScalarField)> =
        scene.fields().iter().map(ScalarField::gradient).collect();
    let grad_at =
        |v: usize, p: Point2| Point2::new(gradients[v].0.evaluate(p), gradients[v].1.evaluate(p));

    // First row of the block(s) belonging to each vertex's critical points.
    let mut block_start = Vec::with_capacity(graph.vertex_count());
    let mut rows = 0;
    for set in &critical_sets {
        block_start.push(rows);
        rows += match mode {
            AssemblyMode::Summed => 2,
            AssemblyMode::PerCriticalPoint => 2 * set.len(),
        };
    }

    let mut matrix = DMatrix::zeros(rows, graph.edge_count());
    for (e, &(a, b)) in graph.edges().iter().enumerate() {
        for (here, there) in [(a, b), (b, a)] {
            for (k, cp) in critical_sets[here].iter().enumerate() {
                let g = grad_at(there, cp.location);
                let row = match mode {
                    AssemblyMode::Summed => block_start[here],
                    AssemblyMode::PerCriticalPoint => block_start[here] + 2 * k,
                };
                matrix[(row, e)] += cp.sign() * g.x;
                matrix[(row + 1, e)] += cp.sign() * g.y;
            }
        }
    }
    Ok(MorseEquilibriumSystem {
        matrix,
        critical_sets,
        mode,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseOptions {
    pub mode: AssemblyMode,
    pub rank_tol: f64,
}

impl Default for MorseOptions {
    fn default() -> Self {
        MorseOptions {
            mode: AssemblyMode::Summed,
            rank_tol: RANK_TOL,
        }
    }
}

pub fn self_stress_basis(scene: &Scene) -> Result<StressBasis> {
    self_stress_basis_with(scene, &MorseOptions::default())
}

pub fn self_stress_basis_with(scene: &Scene, opts: &MorseOptions) -> Result<StressBasis> {
    let system = assemble(scene, opts.mode)?;
    Ok(StressBasis::from_kernel(&linalg::kernel(
        &system.matrix,
        opts.rank_tol,
    )))
}

/// Largest per-vertex norm of `Σ_k (−1)^ind Σ_j w_ij ∇f_j(P_ik)`.
pub fn verify(scene: &Scene, w: &StressVector) -> Result<f64> {
    w.checked(scene.graph())?;
    let system = assemble(scene, AssemblyMode::Summed)?;
    let r = &system.matrix * nalgebra::DVector::from_column_slice(&w.values);
    Ok((0..scene.graph().vertex_count())
        .map(|v| r[2 * v].hypot(r[2 * v + 1]))
        .fold(0.0, f64::max))
}

/// Replaces each vertex position `(x_i, y_i)` by `(x − x_i)² + (y − y_i)²`.
///
/// The bounding box is the framework's, grown by 50%.
pub fn paraboloid_lift(fw: &ClassicalFramework) -> Result<Scene> {
    let bbox = BBox::around(fw.positions(), 0.5)
        .ok_or_else(|| Error::Validation("framework has no vertices".into()))?;
    let fields = fw
        .positions()
        .iter()
        .map(|&p| ScalarField::paraboloid(p))
        .collect();
    Scene::new(fw.graph().clone(), fields, bbox)
}
