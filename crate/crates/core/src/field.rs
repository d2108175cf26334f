//! Sparse bivariate polynomials and the planar primitives they live on.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest total degree a [`ScalarField`] may carry.
pub const MAX_DEGREE: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    /// z-component of the planar cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Lexicographic order on (x, y).
    pub fn lex_cmp(&self, other: &Point2) -> std::cmp::Ordering {
        self.x.total_cmp(&other.x).then(self.y.total_cmp(&other.y))
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<Point2> for f64 {
    type Output = Point2;
    fn mul(self, rhs: Point2) -> Point2 {
        Point2::new(self * rhs.x, self * rhs.y)
    }
}

/// Axis-aligned rectangle `[xmin, xmax] × [ymin, ymax]` with positive area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    xmin: f64,
    ymin: f64,
    xmax: f64,
    ymax: f64,
}

impl BBox {
    pub fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Result<Self> {
        let finite = [xmin, ymin, xmax, ymax].iter().all(|v| v.is_finite());
        if !finite || xmin >= xmax || ymin >= ymax {
            return Err(Error::DegenerateBox);
        }
        Ok(BBox {
            xmin,
            ymin,
            xmax,
            ymax,
        })
    }

    /// Square `[-half, half]²`.
    pub fn centered(half: f64) -> Result<Self> {
        BBox::new(-half, -half, half, half)
    }

    pub fn xmin(&self) -> f64 {
        self.xmin
    }
    pub fn ymin(&self) -> f64 {
        self.ymin
    }
    pub fn xmax(&self) -> f64 {
        self.xmax
    }
    pub fn ymax(&self) -> f64 {
        self.ymax
    }
    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }
    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.xmin, self.ymin, self.xmax, self.ymax]
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }

    /// Distance from `p` to the box, zero inside.
    pub fn exterior_distance(&self, p: Point2) -> f64 {
        let dx = (self.xmin - p.x).max(p.x - self.xmax).max(0.0);
        let dy = (self.ymin - p.y).max(p.y - self.ymax).max(0.0);
        dx.hypot(dy)
    }

    /// Smallest box containing all `points`, grown by `fraction` of its span
    /// on each axis (half on each side). A zero span is replaced by the
    /// larger span, or by 1 when all points coincide.
    pub fn around(points: &[Point2], fraction: f64) -> Option<Self> {
        let first = points.first()?;
        let (mut xmin, mut ymin, mut xmax, mut ymax) = (first.x, first.y, first.x, first.y);
        for p in points {
            xmin = xmin.min(p.x);
            xmax = xmax.max(p.x);
            ymin = ymin.min(p.y);
            ymax = ymax.max(p.y);
        }
        let span = (xmax - xmin).max(ymax - ymin);
        let fallback = if span > 0.0 { span } else { 1.0 };
        let w = if xmax > xmin { xmax - xmin } else { fallback };
        let h = if ymax > ymin { ymax - ymin } else { fallback };
        let (cx, cy) = (0.5 * (xmin + xmax), 0.5 * (ymin + ymax));
        let (hw, hh) = (0.5 * w * (1.0 + fraction), 0.5 * h * (1.0 + fraction));
        BBox::new(cx - hw, cy - hh, cx + hw, cy + hh).ok()
    }
}

/// Sparse real polynomial in `x` and `y`.
///
/// Monomials are keyed by their exponent pair; zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScalarField {
    terms: BTreeMap<(u32, u32), f64>,
}

impl ScalarField {
    pub fn zero() -> Self {
        ScalarField::default()
    }

    pub fn constant(c: f64) -> Self {
        ScalarField::monomial(0, 0, c)
    }

    pub fn x() -> Self {
        ScalarField::monomial(1, 0, 1.0)
    }

    pub fn y() -> Self {
        ScalarField::monomial(0, 1, 1.0)
    }

    /// `coeff · x^i · y^j`.
    ///
    /// Panics if `i + j` exceeds [`MAX_DEGREE`].
    pub fn monomial(i: u32, j: u32, coeff: f64) -> Self {
        assert!(i + j <= MAX_DEGREE, "monomial degree exceeds {MAX_DEGREE}");
        let mut f = ScalarField::zero();
        f.add_term(i, j, coeff);
        f
    }

    /// Builds a field from `(i, j, coeff)` triples; repeated exponents are summed.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32, f64)>,
    {
        let mut f = ScalarField::zero();
        for (i, j, c) in terms {
            if i.checked_add(j).is_none_or(|d| d > MAX_DEGREE) {
                return Err(Error::Validation(format!(
                    "monomial x^{i} y^{j} exceeds total degree {MAX_DEGREE}"
                )));
            }
            if !c.is_finite() {
                return Err(Error::Validation(format!(
                    "coefficient of x^{i} y^{j} is not finite"
                )));
            }
            f.add_term(i, j, c);
        }
        Ok(f)
    }

    /// `(x - center.x)² + (y - center.y)²`.
    pub fn paraboloid(center: Point2) -> Self {
        let dx = ScalarField::x() - ScalarField::constant(center.x);
        let dy = ScalarField::y() - ScalarField::constant(center.y);
        &dx * &dx + &dy * &dy
    }

    fn add_term(&mut self, i: u32, j: u32, c: f64) {
        if c == 0.0 {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.remove(&(i, j));
        }
    }

    /// Iterates `(i, j, coeff)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        self.terms.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    pub fn coefficient(&self, i: u32, j: u32) -> f64 {
        self.terms.get(&(i, j)).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn evaluate(&self, p: Point2) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), &c)| c * p.x.powi(i as i32) * p.y.powi(j as i32))
            .sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        ScalarField::from_terms(self.terms().map(|(i, j, c)| (i, j, s * c)))
            .expect("scaling preserves degree")
    }

    pub fn partial_x(&self) -> Self {
        let mut d = ScalarField::zero();
        for (i, j, c) in self.terms() {
            if i > 0 {
                d.add_term(i - 1, j, c * i as f64);
            }
        }
        d
    }

    pub fn partial_y(&self) -> Self {
        let mut d = ScalarField::zero();
        for (i, j, c) in self.terms() {
            if j > 0 {
                d.add_term(i, j - 1, c * j as f64);
            }
        }
        d
    }

    /// `(∂f/∂x, ∂f/∂y)` as polynomials.
    pub fn gradient(&self) -> (ScalarField, ScalarField) {
        (self.partial_x(), self.partial_y())
    }

    pub fn gradient_at(&self, p: Point2) -> Point2 {
        let (gx, gy) = self.gradient();
        Point2::new(gx.evaluate(p), gy.evaluate(p))
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (i, j, c)) in self.terms().enumerate() {
            let sep = match (n, c < 0.0) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            write!(f, "{sep}{}", c.abs())?;
            match i {
                0 => {}
                1 => write!(f, "·x")?,
                _ => write!(f, "·x^{i}")?,
            }
            match j {
                0 => {}
                1 => write!(f, "·y")?,
                _ => write!(f, "·y^{j}")?,
            }
        }
        Ok(())
    }
}

impl Add for &ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: &ScalarField) -> ScalarField {
        let mut out = self.clone();
        for (i, j, c) in rhs.terms() {
            out.add_term(i, j, c);
        }
        out
    }
}

impl Add for ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: ScalarField) -> ScalarField {
        &self + &rhs
    }
}

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.scale(-1.0)
    }
}

impl Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.scale(-1.0)
    }
}

impl Sub for &ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: &ScalarField) -> ScalarField {
        let mut out = self.clone();
        for (i, j, c) in rhs.terms() {
            out.add_term(i, j, -c);
        }
        out
    }
}

impl Sub for ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: ScalarField) -> ScalarField {
        &self - &rhs
    }
}

/// Panics if the product exceeds [`MAX_DEGREE`].
///
/// Partial products are accumulated in an order that does not depend on the
/// operand order, so `f * g` and `g * f` agree bit for bit.
impl Mul for &ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: &ScalarField) -> ScalarField {
        let mut products = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (&k1, &c1) in &self.terms {
            for (&k2, &c2) in &rhs.terms {
                let (i, j) = (k1.0 + k2.0, k1.1 + k2.1);
                assert!(i + j <= MAX_DEGREE, "product degree exceeds {MAX_DEGREE}");
                products.push(((i, j), k1.min(k2), k1.max(k2), c1 * c2));
            }
        }
        products.sort_by(|a, b| {
            (a.0, a.1, a.2)
                .cmp(&(b.0, b.1, b.2))
                .then(a.3.total_cmp(&b.3))
        });
        let mut out = ScalarField::zero();
        for ((i, j), _, _, c) in products {
            out.add_term(i, j, c);
        }
        out
    }
}

impl Mul for ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: ScalarField) -> ScalarField {
        &self * &rhs
    }
}
