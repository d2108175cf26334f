//! Lines of forces: the curves where the gradients of two fields are parallel.
//!
//! For an edge `{i, j}` these are the zero set of the Jacobian determinant
//! `df_i ∧ df_j`. The zero set is extracted with marching squares and then
//! split at the critical points of both fields, so that compact pieces run
//! from one critical point to another.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::critical::CriticalPoint;
use crate::error::{Error, Result};
use crate::field::{BBox, Point2, ScalarField};
use crate::morse::Scene;

pub const DEFAULT_RESOLUTION: usize = 512;
pub const MIN_RESOLUTION: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<Point2>,
    pub closed: bool,
}

impl Polyline {
    pub fn length(&self) -> f64 {
        let open: f64 = self.points.windows(2).map(|w| w[0].distance(w[1])).sum();
        match (self.closed, self.points.first(), self.points.last()) {
            (true, Some(&a), Some(&b)) => open + a.distance(b),
            _ => open,
        }
    }

    /// Point halfway along the open arc length.
    pub fn midpoint(&self) -> Point2 {
        let total: f64 = self.points.windows(2).map(|w| w[0].distance(w[1])).sum();
        let mut remaining = 0.5 * total;
        for w in self.points.windows(2) {
            let d = w[0].distance(w[1]);
            if d >= remaining && d > 0.0 {
                let t = remaining / d;
                return w[0] + t * (w[1] - w[0]);
            }
            remaining -= d;
        }
        self.points.last().copied().unwrap_or_default()
    }
}

/// How a force-line component ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tag {
    /// Ends at critical point `index` (in the solver's order) of vertex `vertex`.
    CriticalPoint {
        vertex: String,
        index: usize,
    },
    Boundary,
    Closed,
}

impl std::fmt::Display for Tag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tag::CriticalPoint { vertex, index } => write!(f, "critical:{vertex}:{index}"),
            Tag::Boundary => write!(f, "boundary"),
            Tag::Closed => write!(f, "closed"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceLineComponent {
    pub polyline: Polyline,
    pub start: Tag,
    pub end: Tag,
}

impl ForceLineComponent {
    /// Closed, or bounded by critical points at both ends.
    pub fn is_compact(&self) -> bool {
        matches!(
            (&self.start, &self.end),
            (Tag::Closed, _) | (Tag::CriticalPoint { .. }, Tag::CriticalPoint { .. })
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceLine {
    /// Index into the graph's edge list.
    pub edge: usize,
    pub components: Vec<ForceLineComponent>,
    /// The two fields have everywhere-parallel gradients; nothing was traced.
    pub degenerate: bool,
}

/// Critical points of one vertex, labelled with the vertex id.
#[derive(Debug, Clone, Copy)]
pub struct LabelledCriticalSet<'a> {
    pub vertex: &'a str,
    pub points: &'a [CriticalPoint],
}

/// `∂f/∂x · ∂g/∂y − ∂f/∂y · ∂g/∂x`.
pub fn jacobian_field(f: &ScalarField, g: &ScalarField) -> ScalarField {
    let (fx, fy) = f.gradient();
    let (gx, gy) = g.gradient();
    &(&fx * &gy) - &(&fy * &gx)
}

pub fn cell_diagonal(bbox: &BBox, resolution: usize) -> f64 {
    (bbox.width() / resolution as f64).hypot(bbox.height() / resolution as f64)
}

struct Grid {
    n: usize,
    xs: Vec<f64>,
    ys: Vec<f64>,
    values: Vec<f64>,
}

impl Grid {
    fn sample(h: &ScalarField, bbox: &BBox, n: usize) -> Grid {
        let axis = |lo: f64, hi: f64| -> Vec<f64> {
            (0..=n)
                .map(|k| {
                    if k == n {
                        hi
                    } else {
                        lo + (hi - lo) * k as f64 / n as f64
                    }
                })
                .collect()
        };
        let xs = axis(bbox.xmin(), bbox.xmax());
        let ys = axis(bbox.ymin(), bbox.ymax());
        let values = ys
            .par_iter()
            .flat_map_iter(|&y| xs.iter().map(move |&x| h.evaluate(Point2::new(x, y))))
            .collect();
        Grid { n, xs, ys, values }
    }

    fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.n + 1) + i]
    }

    fn node(&self, i: usize, j: usize) -> Point2 {
        Point2::new(self.xs[i], self.ys[j])
    }

    // Even ids are horizontal edges (i,j)-(i+1,j); odd ids vertical (i,j)-(i,j+1).
    fn edge_id(&self, i: usize, j: usize, vertical: bool) -> usize {
        2 * (j * (self.n + 1) + i) + usize::from(vertical)
    }

    fn crossing(&self, id: usize) -> Point2 {
        let node = id / 2;
        let (i, j) = (node % (self.n + 1), node / (self.n + 1));
        let (i1, j1) = if id % 2 == 1 { (i, j + 1) } else { (i + 1, j) };
        let (v0, v1) = (self.value(i, j), self.value(i1, j1));
        let t = v0 / (v0 - v1);
        let (p0, p1) = (self.node(i, j), self.node(i1, j1));
        p0 + t * (p1 - p0)
    }
}

fn segments_in_row(grid: &Grid, h: &ScalarField, j: usize) -> Vec<(usize, usize)> {
    let inside = |v: f64| v > 0.0;
    let mut out = Vec::new();
    for i in 0..grid.n {
        let corner = [
            inside(grid.value(i, j)),
            inside(grid.value(i + 1, j)),
            inside(grid.value(i + 1, j + 1)),
            inside(grid.value(i, j + 1)),
        ];
        // Cell sides as (corner a, corner b, edge id): bottom, right, top, left.
        let sides = [
            (0, 1, grid.edge_id(i, j, false)),
            (1, 2, grid.edge_id(i + 1, j, true)),
            (3, 2, grid.edge_id(i, j + 1, false)),
            (0, 3, grid.edge_id(i, j, true)),
        ];
        let crossed: Vec<usize> = sides
            .iter()
            .filter(|(a, b, _)| corner[*a] != corner[*b])
            .map(|&(_, _, id)| id)
            .collect();
        match crossed.len() {
            2 => out.push((crossed[0], crossed[1])),
            4 => {
                let c = Point2::new(
                    0.5 * (grid.xs[i] + grid.xs[i + 1]),
                    0.5 * (grid.ys[j] + grid.ys[j + 1]),
                );
                let [bottom, right, top, left] = [sides[0].2, sides[1].2, sides[2].2, sides[3].2];
                if inside(h.evaluate(c)) == corner[0] {
                    // Corners 0 and 2 connect through the centre; cut off 1 and 3.
                    out.push((bottom, right));
                    out.push((top, left));
                } else {
                    out.push((left, bottom));
                    out.push((right, top));
                }
            }
            _ => {}
        }
    }
    out
}

fn chain(grid: &Grid, segments: &[(usize, usize)]) -> Vec<Polyline> {
    let mut at_edge: HashMap<usize, Vec<usize>> = HashMap::new();
    for (s, &(a, b)) in segments.iter().enumerate() {
        at_edge.entry(a).or_default().push(s);
        at_edge.entry(b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];

    let walk = |start_seg: usize, start_edge: usize, used: &mut Vec<bool>| -> Polyline {
        let mut edges = vec![start_edge];
        let (mut seg, mut edge) = (start_seg, start_edge);
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            edge = if a == edge { b } else { a };
            edges.push(edge);
            match at_edge[&edge].iter().copied().find(|&s| !used[s]) {
                Some(next) => seg = next,
                None => break,
            }
        }
        let closed = edges.len() > 2 && edges.first() == edges.last();
        if closed {
            edges.pop();
        }
        let mut points: Vec<Point2> = edges.iter().map(|&e| grid.crossing(e)).collect();
        points.dedup();
        if closed && points.len() > 1 && points.first() == points.last() {
            points.pop();
        }
        Polyline {
            closed: closed && points.len() > 2,
            points,
        }
    };

    let mut lines = Vec::new();
    // Open curves start at edges touched by a single segment.
    for s in 0..segments.len() {
        if used[s] {
            continue;
        }
        let (a, b) = segments[s];
        for end in [a, b] {
            if !used[s] && at_edge[&end].len() == 1 {
                lines.push(walk(s, end, &mut used));
            }
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            lines.push(walk(s, segments[s].0, &mut used));
        }
    }
    lines.retain(|l| l.points.len() >= 2);
    lines
}

/// Zero set of `h` over `bbox` on a `resolution × resolution` cell grid.
///
/// Polylines are sorted by their first point.
pub fn trace_zero_set(h: &ScalarField, bbox: &BBox, resolution: usize) -> Result<Vec<Polyline>> {
    if h.is_zero() {
        return Err(Error::IdenticallyZeroField);
    }
    trace_level_set(h, 0.0, bbox, resolution)
}

/// Level set `{h = level}`; see [`trace_zero_set`].
pub fn trace_level_set(
    h: &ScalarField,
    level: f64,
    bbox: &BBox,
    resolution: usize,
) -> Result<Vec<Polyline>> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::InvalidResolution(resolution));
    }
    let shifted = h - &ScalarField::constant(level);
    let grid = Grid::sample(&shifted, bbox, resolution);
    let rows: Vec<Vec<(usize, usize)>> = (0..resolution)
        .into_par_iter()
        .map(|j| segments_in_row(&grid, &shifted, j))
        .collect();
    let segments: Vec<(usize, usize)> = rows.into_iter().flatten().collect();
    let mut lines = chain(&grid, &segments);
    lines.sort_by(|a, b| a.points[0].lex_cmp(&b.points[0]));
    Ok(lines)
}

struct Anchor {
    location: Point2,
    tag: Tag,
}

fn nearest(anchors: &[Anchor], p: Point2) -> Option<(&Anchor, f64)> {
    anchors
        .iter()
        .map(|a| (a, a.location.distance(p)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
}

/// Indices where the polyline passes closest to an anchor, one per run of
/// consecutive points within `snap_tol` of it, with the anchor's index.
fn split_indices(points: &[Point2], anchors: &[Anchor], snap_tol: f64) -> Vec<(usize, usize)> {
    let mut hits: Vec<(usize, usize, f64)> = Vec::new();
    for (a, anchor) in anchors.iter().enumerate() {
        let mut best: Option<(usize, f64)> = None;
        for (k, p) in points.iter().enumerate() {
            let d = p.distance(anchor.location);
            if d < snap_tol {
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((k, d));
                }
            } else if let Some((bk, bd)) = best.take() {
                hits.push((bk, a, bd));
            }
        }
        if let Some((bk, bd)) = best {
            hits.push((bk, a, bd));
        }
    }
    hits.sort_by(|x, y| x.0.cmp(&y.0).then(x.2.total_cmp(&y.2)));
    hits.dedup_by_key(|h| h.0);
    hits.into_iter().map(|(k, a, _)| (k, a)).collect()
}

fn split_open(points: &[Point2], anchors: &[Anchor], snap_tol: f64) -> Vec<ForceLineComponent> {
    let cuts = split_indices(points, anchors, snap_tol);
    let last = points.len() - 1;
    let mut bounds: Vec<(usize, Option<usize>)> = Vec::with_capacity(cuts.len() + 2);
    if cuts.first().is_none_or(|c| c.0 != 0) {
        bounds.push((0, None));
    }
    bounds.extend(cuts.iter().map(|&(k, a)| (k, Some(a))));
    if bounds.last().is_none_or(|b| b.0 != last) {
        bounds.push((last, None));
    }

    let end_tag = |p: Point2, anchor: Option<usize>| -> (Point2, Tag) {
        let snapped = match anchor {
            Some(a) => Some(&anchors[a]),
            None => nearest(anchors, p)
                .filter(|(_, d)| *d < snap_tol)
                .map(|(a, _)| a),
        };
        match snapped {
            Some(a) => (a.location, a.tag.clone()),
            None => (p, Tag::Boundary),
        }
    };

    let mut out = Vec::new();
    for w in bounds.windows(2) {
        let ((k0, a0), (k1, a1)) = (w[0], w[1]);
        let mut piece = points[k0..=k1].to_vec();
        let (p0, start) = end_tag(piece[0], a0);
        let (p1, end) = end_tag(piece[piece.len() - 1], a1);
        piece[0] = p0;
        let n = piece.len();
        piece[n - 1] = p1;
        piece.dedup();
        if piece.len() >= 2 {
            out.push(ForceLineComponent {
                polyline: Polyline {
                    points: piece,
                    closed: false,
                },
                start,
                end,
            });
        }
    }
    out
}

/// Splits traced polylines at nearby critical points of both endpoint fields
/// and tags each piece's ends.
///
/// Open ends within `snap_tol` of a critical point are moved onto it and
/// tagged [`Tag::CriticalPoint`]; other open ends are [`Tag::Boundary`].
/// Closed curves that pass no critical point stay closed.
pub fn classify(
    edge: usize,
    polylines: &[Polyline],
    crit_i: LabelledCriticalSet<'_>,
    crit_j: LabelledCriticalSet<'_>,
    snap_tol: f64,
) -> ForceLine {
    let anchors: Vec<Anchor> = [crit_i, crit_j]
        .iter()
        .flat_map(|set| {
            set.points
                .iter()
                .enumerate()
                .map(move |(index, cp)| Anchor {
                    location: cp.location,
                    tag: Tag::CriticalPoint {
                        vertex: set.vertex.to_string(),
                        index,
                    },
                })
        })
        .collect();

    let mut components = Vec::new();
    for line in polylines {
        if !line.closed {
            components.extend(split_open(&line.points, &anchors, snap_tol));
            continue;
        }
        if split_indices(&line.points, &anchors, snap_tol).is_empty() {
            components.push(ForceLineComponent {
                polyline: line.clone(),
                start: Tag::Closed,
                end: Tag::Closed,
            });
            continue;
        }
        // Open the loop at the point farthest from every anchor so that no
        // run of nearby points wraps around the seam.
        let far = |p: &Point2| nearest(&anchors, *p).map_or(0.0, |(_, d)| d);
        let start = (0..line.points.len())
            .max_by(|&a, &b| {
                far(&line.points[a])
                    .total_cmp(&far(&line.points[b]))
                    .then(b.cmp(&a))
            })
            .unwrap_or(0);
        let mut opened: Vec<Point2> = line.points[start..]
            .iter()
            .chain(&line.points[..start])
            .copied()
            .collect();
        opened.push(opened[0]);
        let mut pieces = split_open(&opened, &anchors, snap_tol);
        // Rejoin the two pieces that meet at the seam.
        if pieces.len() >= 2
            && pieces[0].start == Tag::Boundary
            && pieces[pieces.len() - 1].end == Tag::Boundary
        {
            let head = pieces.remove(0);
            let tail = pieces.last_mut().expect("at least one piece remains");
            tail.polyline
                .points
                .extend(head.polyline.points.into_iter().skip(1));
            tail.end = head.end;
        }
        components.extend(pieces);
    }
    ForceLine {
        edge,
        components,
        degenerate: false,
    }
}

/// Force lines of every edge of `scene`, in edge order.
///
/// `snap_tol` defaults to twice the grid cell diagonal.
pub fn trace_force_lines(
    scene: &Scene,
    resolution: usize,
    snap_tol: Option<f64>,
) -> Result<Vec<ForceLine>> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::InvalidResolution(resolution));
    }
    let critical_sets = scene.critical_sets()?;
    let snap_tol = snap_tol.unwrap_or_else(|| 2.0 * cell_diagonal(scene.bbox(), resolution));
    let graph = scene.graph();
    let mut out = Vec::with_capacity(graph.edge_count());
    for (e, &(i, j)) in graph.edges().iter().enumerate() {
        let h = jacobian_field(scene.field(i), scene.field(j));
        if h.is_zero() {
            out.push(ForceLine {
                edge: e,
                components: Vec::new(),
                degenerate: true,
            });
            continue;
        }
        let lines = trace_zero_set(&h, scene.bbox(), resolution)?;
        let set = |v: usize| LabelledCriticalSet {
            vertex: graph.vertex_id(v),
            points: &critical_sets[v],
        };
        out.push(classify(e, &lines, set(i), set(j), snap_tol));
    }
    Ok(out)
}
