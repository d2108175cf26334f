//! Constant-coefficient differential forms on R³.
//!
//! A [`TwoForm`] is stored in the basis `(dy∧dz, dz∧dx, dx∧dy)`, which makes
//! the wedge of two 1-forms coincide with the cross product of their
//! coefficient vectors.

use crate::field::{Point2, ScalarField};

/// `a·dx + b·dy + c·dz`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OneForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// `p·dy∧dz + q·dz∧dx + r·dx∧dy`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TwoForm {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl OneForm {
    pub const DX: OneForm = OneForm::new(1.0, 0.0, 0.0);
    pub const DY: OneForm = OneForm::new(0.0, 1.0, 0.0);
    pub const DZ: OneForm = OneForm::new(0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        OneForm { a, b, c }
    }

    pub fn scale(self, s: f64) -> Self {
        OneForm::new(s * self.a, s * self.b, s * self.c)
    }
}

impl std::ops::Add for OneForm {
    type Output = OneForm;

    fn add(self, o: OneForm) -> OneForm {
        OneForm::new(self.a + o.a, self.b + o.b, self.c + o.c)
    }
}

impl std::ops::Add for TwoForm {
    type Output = TwoForm;

    fn add(self, o: TwoForm) -> TwoForm {
        TwoForm::new(self.p + o.p, self.q + o.q, self.r + o.r)
    }
}

impl TwoForm {
    pub const ZERO: TwoForm = TwoForm::new(0.0, 0.0, 0.0);

    pub const fn new(p: f64, q: f64, r: f64) -> Self {
        TwoForm { p, q, r }
    }

    pub fn scale(self, s: f64) -> Self {
        TwoForm::new(s * self.p, s * self.q, s * self.r)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(self) -> f64 {
        (self.p * self.p + self.q * self.q + self.r * self.r).sqrt()
    }
}

pub fn wedge(u: OneForm, v: OneForm) -> TwoForm {
    TwoForm::new(
        u.b * v.c - u.c * v.b,
        u.c * v.a - u.a * v.c,
        u.a * v.b - u.b * v.a,
    )
}

/// `x·dx + y·dy + dz` for the point `(x, y)`.
pub fn point_form(p: Point2) -> OneForm {
    OneForm::new(p.x, p.y, 1.0)
}

/// `df + dz` evaluated at `p`.
pub fn field_form_at(f: &ScalarField, p: Point2) -> OneForm {
    let g = f.gradient_at(p);
    OneForm::new(g.x, g.y, 1.0)
}
