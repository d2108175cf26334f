//! Critical points of polynomial fields and their Morse classification.
//!
//! Zeros of the gradient are located by Newton's method started from a
//! uniform grid of seeds over the bounding box. Results are relative to the
//! box: critical points outside it are never reported.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{BBox, Point2, ScalarField};

/// Newton multi-start settings and the classification tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverParams {
    /// Seeds per axis; the seed grid is `seeds_per_axis²` cell centres.
    pub seeds_per_axis: usize,
    pub max_iterations: usize,
    /// Newton has converged once the step is below `step_tol · diam(bbox)`.
    pub step_tol: f64,
    /// Accepted roots satisfy `|∇f| ≤ grad_tol · (1 + max|coeff|)`.
    pub grad_tol: f64,
    /// Morse condition: `|det H| > degeneracy_tol · (1 + max|H_ij|)`.
    pub degeneracy_tol: f64,
    /// Roots closer than `dedup_tol · diam(bbox)` are merged.
    pub dedup_tol: f64,
    /// Iterates further than `exit_margin · diam(bbox)` outside the box are dropped.
    pub exit_margin: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            seeds_per_axis: 64,
            max_iterations: 60,
            step_tol: 1e-13,
            grad_tol: 1e-9,
            degeneracy_tol: 1e-9,
            dedup_tol: 1e-8,
            exit_margin: 0.1,
        }
    }
}

/// Nondegenerate zero of a gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub location: Point2,
    /// Number of negative Hessian eigenvalues: 0 minimum, 1 saddle, 2 maximum.
    pub morse_index: u8,
    pub hessian_det: f64,
}

impl CriticalPoint {
    /// `(-1)^index`.
    pub fn sign(&self) -> f64 {
        if self.morse_index.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

/// Symmetric 2×2 matrix `[[xx, xy], [xy, yy]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hessian {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Hessian {
    pub fn diag(xx: f64, yy: f64) -> Self {
        Hessian { xx, xy: 0.0, yy }
    }

    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    fn max_abs_entry(&self) -> f64 {
        self.xx.abs().max(self.xy.abs()).max(self.yy.abs())
    }
}

/// Morse index from the determinant and trace, using the default degeneracy tolerance.
pub fn morse_index(h: &Hessian) -> Result<u8> {
    morse_index_with_tol(h, SolverParams::default().degeneracy_tol)
}

pub fn morse_index_with_tol(h: &Hessian, degeneracy_tol: f64) -> Result<u8> {
    let det = h.det();
    if det.abs() <= degeneracy_tol * (1.0 + h.max_abs_entry()) {
        return Err(Error::DegenerateHessian { det });
    }
    Ok(if det < 0.0 {
        1
    } else if h.trace() < 0.0 {
        2
    } else {
        0
    })
}

/// Gradient and Hessian polynomials of a field, precomputed for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Derivatives {
    pub fx: ScalarField,
    pub fy: ScalarField,
    pub fxx: ScalarField,
    pub fxy: ScalarField,
    pub fyy: ScalarField,
}

impl Derivatives {
    pub fn new(f: &ScalarField) -> Self {
        let (fx, fy) = f.gradient();
        let fxx = fx.partial_x();
        let fxy = fx.partial_y();
        let fyy = fy.partial_y();
        Derivatives {
            fx,
            fy,
            fxx,
            fxy,
            fyy,
        }
    }

    pub fn gradient_at(&self, p: Point2) -> Point2 {
        Point2::new(self.fx.evaluate(p), self.fy.evaluate(p))
    }

    pub fn hessian_at(&self, p: Point2) -> Hessian {
        Hessian {
            xx: self.fxx.evaluate(p),
            xy: self.fxy.evaluate(p),
            yy: self.fyy.evaluate(p),
        }
    }
}

struct Candidate {
    location: Point2,
    grad_norm: f64,
}

fn newton(
    d: &Derivatives,
    seed: Point2,
    bbox: &BBox,
    params: &SolverParams,
    accept: f64,
) -> Option<Candidate> {
    let diam = bbox.diameter();
    let mut p = seed;
    for _ in 0..params.max_iterations {
        let g = d.gradient_at(p);
        if g.x == 0.0 && g.y == 0.0 {
            break;
        }
        let h = d.hessian_at(p);
        let det = h.det();
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let step = Point2::new(
            (h.yy * g.x - h.xy * g.y) / det,
            (h.xx * g.y - h.xy * g.x) / det,
        );
        p = p - step;
        if !p.is_finite() || bbox.exterior_distance(p) > params.exit_margin * diam {
            return None;
        }
        if step.norm() < params.step_tol * diam {
            break;
        }
    }
    // Iterates that stall at degenerate zeros (linear convergence) are still
    // accepted when the gradient is small, so they surface as NonMorseField.
    let grad_norm = d.gradient_at(p).norm();
    if grad_norm <= accept {
        Some(Candidate {
            location: p,
            grad_norm,
        })
    } else {
        None
    }
}

/// All Morse critical points of `f` inside `bbox`, sorted lexicographically by `(x, y)`.
///
/// Fails with [`Error::ZeroGradientField`] for constant fields and with
/// [`Error::NonMorseField`] if any located zero of the gradient is degenerate.
pub fn find_critical_points(f: &ScalarField, bbox: &BBox) -> Result<Vec<CriticalPoint>> {
    find_critical_points_with(f, bbox, &SolverParams::default())
}

pub fn find_critical_points_with(
    f: &ScalarField,
    bbox: &BBox,
    params: &SolverParams,
) -> Result<Vec<CriticalPoint>> {
    let d = Derivatives::new(f);
    if d.fx.is_zero() && d.fy.is_zero() {
        return Err(Error::ZeroGradientField);
    }
    let accept = params.grad_tol * (1.0 + f.max_abs_coeff());
    let n = params.seeds_per_axis.max(1);
    let (dx, dy) = (bbox.width() / n as f64, bbox.height() / n as f64);

    let found: Vec<Candidate> = (0..n * n)
        .into_par_iter()
        .filter_map(|k| {
            let (i, j) = (k % n, k / n);
            let seed = Point2::new(
                bbox.xmin() + (i as f64 + 0.5) * dx,
                bbox.ymin() + (j as f64 + 0.5) * dy,
            );
            newton(&d, seed, bbox, params, accept)
        })
        .filter(|c| bbox.contains(c.location))
        .collect();

    let merge_radius = params.dedup_tol * bbox.diameter();
    let mut roots: Vec<Candidate> = Vec::new();
    for c in found {
        match roots
            .iter_mut()
            .find(|r| r.location.distance(c.location) < merge_radius)
        {
            Some(r) => {
                if c.grad_norm < r.grad_norm {
                    *r = c;
                }
            }
            None => roots.push(c),
        }
    }

    let mut points = roots
        .into_iter()
        .map(|r| classify_at(&d, r.location, params))
        .collect::<Result<Vec<_>>>()?;
    points.sort_by(|a, b| a.location.lex_cmp(&b.location));
    Ok(points)
}

/// Classifies a known zero of the gradient of the field behind `d`.
pub fn classify_at(
    d: &Derivatives,
    location: Point2,
    params: &SolverParams,
) -> Result<CriticalPoint> {
    let h = d.hessian_at(location);
    match morse_index_with_tol(&h, params.degeneracy_tol) {
        Ok(morse_index) => Ok(CriticalPoint {
            location,
            morse_index,
            hessian_det: h.det(),
        }),
        Err(_) => Err(Error::NonMorseField {
            location,
            hessian_det: h.det(),
        }),
    }
}
