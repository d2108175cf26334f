//! Fixtures and independent oracles shared by the integration and acceptance suites.
#![allow(dead_code)]

use rand::Rng;
use tensegrity_core::{BBox, ClassicalFramework, Graph, Point2, ScalarField};

pub const WHEEL_IDS: [&str; 5] = ["a", "b", "c", "d", "o"];
pub const WHEEL_EDGES: [(&str, &str); 8] = [
    ("a", "b"),
    ("b", "c"),
    ("c", "d"),
    ("d", "a"),
    ("a", "o"),
    ("b", "o"),
    ("c", "o"),
    ("d", "o"),
];

pub fn wheel_graph() -> Graph {
    Graph::new(WHEEL_IDS.to_vec(), &WHEEL_EDGES).unwrap()
}

pub fn square_wheel() -> ClassicalFramework {
    let p = [
        (3.0, 3.0),
        (-3.0, 3.0),
        (-3.0, -3.0),
        (3.0, -3.0),
        (0.0, 0.0),
    ];
    ClassicalFramework::new(
        wheel_graph(),
        p.iter().map(|&(x, y)| Point2::new(x, y)).collect(),
    )
    .unwrap()
}

pub fn fixtures_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixtures_dir().join(name)).unwrap()
}

/// Random framework with `n` vertices uniform in `[-5, 5]²` and each edge present with probability `p`.
pub fn random_framework<R: Rng>(rng: &mut R, n: usize, p: f64) -> ClassicalFramework {
    let ids: Vec<String> = (0..n).map(|k| format!("v{k}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    let positions = (0..n)
        .map(|_| Point2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)))
        .collect();
    ClassicalFramework::new(Graph::new(ids, &edges).unwrap(), positions).unwrap()
}

/// Null space by Gauss-Jordan elimination with full row pivoting, written
/// independently of the SVD path. Returns one vector per free column, with
/// that column's entry set to 1.
pub fn gauss_null_space(rows: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let n = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(best) = (r..a.len()).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))
        else {
            break;
        };
        if a[best][c].abs() <= tol {
            continue;
        }
        a.swap(r, best);
        let pv = a[r][c];
        for v in a[r].iter_mut() {
            *v /= pv;
        }
        for k in 0..a.len() {
            if k != r && a[k][c] != 0.0 {
                let factor = a[k][c];
                let pivot_row = a[r].clone();
                for (x, p) in a[k].iter_mut().zip(&pivot_row) {
                    *x -= factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0.0; n];
            v[f] = 1.0;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f];
            }
            v
        })
        .collect()
}

/// One-dimensional building block `p(t)` with known critical points.
#[derive(Debug, Clone, Copy)]
pub enum Profile {
    /// `s·(t³ − 3a²t)`: critical at `±a`.
    Cubic { a: f64, s: f64 },
    /// `s·t²`: critical at 0.
    Quadratic { s: f64 },
    /// `s·(t⁴/4 − a²t²/2)`: critical at `0, ±a`.
    Quartic { a: f64, s: f64 },
}

impl Profile {
    fn field(&self, t: &ScalarField) -> ScalarField {
        let c = ScalarField::constant;
        match *self {
            Profile::Cubic { a, s } => (&(&(t * t) * t) - &(&c(3.0 * a * a) * t)).scale(s),
            Profile::Quadratic { s } => (t * t).scale(s),
            Profile::Quartic { a, s } => {
                let t2 = t * t;
                (&(&t2 * &t2).scale(0.25) - &t2.scale(0.5 * a * a)).scale(s)
            }
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match *self {
            Profile::Cubic { a, s } => s * (3.0 * t * t - 3.0 * a * a),
            Profile::Quadratic { s } => 2.0 * s * t,
            Profile::Quartic { a, s } => s * (t * t * t - a * a * t),
        }
    }

    /// Critical points with the sign of the second derivative there.
    pub fn critical(&self) -> Vec<(f64, f64)> {
        match *self {
            Profile::Cubic { a, s } => vec![(-a, -s), (a, s)],
            Profile::Quadratic { s } => vec![(0.0, s)],
            Profile::Quartic { a, s } => vec![(-a, s), (0.0, -s), (a, s)],
        }
    }
}

/// `p(u) + q(v)` with `v = y − ty`, `u = x − tx + shear·v`.
///
/// Critical points are products of the profiles' critical points; the
/// Hessian determinant is `p''·q''`, so the Morse index follows from the
/// two second-derivative signs.
#[derive(Debug, Clone)]
pub struct SeparableFixture {
    pub p: Profile,
    pub q: Profile,
    pub shift: Point2,
    pub shear: f64,
}

impl SeparableFixture {
    pub fn field(&self) -> ScalarField {
        let v = &ScalarField::y() - &ScalarField::constant(self.shift.y);
        let u = &(&ScalarField::x() - &ScalarField::constant(self.shift.x)) + &v.scale(self.shear);
        &self.p.field(&u) + &self.q.field(&v)
    }

    /// Analytic gradient, independent of polynomial differentiation.
    pub fn gradient(&self, pt: Point2) -> (f64, f64) {
        let v = pt.y - self.shift.y;
        let u = pt.x - self.shift.x + self.shear * v;
        let pu = self.p.derivative(u);
        (pu, self.shear * pu + self.q.derivative(v))
    }

    /// Sorted `(location, morse index)` pairs.
    pub fn critical_points(&self) -> Vec<(Point2, u8)> {
        let mut out = Vec::new();
        for (u, su) in self.p.critical() {
            for (v, sv) in self.q.critical() {
                let loc = Point2::new(self.shift.x + u - self.shear * v, self.shift.y + v);
                let index = match (su > 0.0, sv > 0.0) {
                    (true, true) => 0,
                    (false, false) => 2,
                    _ => 1,
                };
                out.push((loc, index));
            }
        }
        out.sort_by(|a, b| a.0.lex_cmp(&b.0));
        out
    }
}

/// Deterministic suite of `count` fixtures with well-separated critical
/// points inside `[-10, 10]²` and total degree at most 4.
pub fn separable_suite(count: usize) -> Vec<SeparableFixture> {
    let profile = |k: usize, a: f64| -> Profile {
        let s = if (k / 3).is_multiple_of(2) { 1.0 } else { -1.0 };
        match k % 3 {
            0 => Profile::Cubic { a, s },
            1 => Profile::Quadratic { s },
            _ => Profile::Quartic { a, s },
        }
    };
    (0..count)
        .map(|k| {
            let p = profile(k, 1.0 + (k % 5) as f64 * 0.45);
            let q = profile(k / 6 + k, 1.2 + (k % 4) as f64 * 0.5);
            let shift = Point2::new(
                ((k * 7) % 9) as f64 * 0.5 - 2.0,
                ((k * 5) % 7) as f64 * 0.6 - 1.8,
            );
            let shear = ((k * 3) % 5) as f64 * 0.2 - 0.4;
            SeparableFixture { p, q, shift, shear }
        })
        .collect()
}

/// Counts critical points by scanning an `n × n` grid for cells where both
/// gradient components change sign, merging 8-connected flagged cells.
pub fn grid_oracle_count<G>(gradient: G, bbox: &BBox, n: usize) -> usize
where
    G: Fn(Point2) -> (f64, f64),
{
    let (dx, dy) = (bbox.width() / n as f64, bbox.height() / n as f64);
    let mut gx = vec![0.0; (n + 1) * (n + 1)];
    let mut gy = vec![0.0; (n + 1) * (n + 1)];
    for j in 0..=n {
        for i in 0..=n {
            let (a, b) = gradient(Point2::new(
                bbox.xmin() + i as f64 * dx,
                bbox.ymin() + j as f64 * dy,
            ));
            gx[j * (n + 1) + i] = a;
            gy[j * (n + 1) + i] = b;
        }
    }
    let changes = |g: &[f64], i: usize, j: usize| {
        let c = [
            g[j * (n + 1) + i],
            g[j * (n + 1) + i + 1],
            g[(j + 1) * (n + 1) + i],
            g[(j + 1) * (n + 1) + i + 1],
        ];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        lo <= 0.0 && hi >= 0.0
    };
    let mut flagged = vec![false; n * n];
    for j in 0..n {
        for i in 0..n {
            flagged[j * n + i] = changes(&gx, i, j) && changes(&gy, i, j);
        }
    }
    let mut clusters = 0;
    let mut seen = vec![false; n * n];
    for start in 0..n * n {
        if !flagged[start] || seen[start] {
            continue;
        }
        clusters += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(c) = stack.pop() {
            let (i, j) = ((c % n) as i64, (c / n) as i64);
            for dj in -1..=1 {
                for di in -1..=1 {
                    let (ni, nj) = (i + di, j + dj);
                    if ni < 0 || nj < 0 || ni >= n as i64 || nj >= n as i64 {
                        continue;
                    }
                    let k = nj as usize * n + ni as usize;
                    if flagged[k] && !seen[k] {
                        seen[k] = true;
                        stack.push(k);
                    }
                }
            }
        }
    }
    clusters
}
