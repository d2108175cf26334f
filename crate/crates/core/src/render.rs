//! SVG figures: level sets in gray, compact force lines in black, other
//! force-line pieces dashed in light gray, critical points as labelled dots
//! and, optionally, edge stresses written along the force lines.

use std::fmt::Write;

use crate::classical::StressVector;
use crate::error::Result;
use crate::field::{BBox, Point2, ScalarField};
use crate::forcelines::{self, ForceLine, Polyline};
use crate::morse::{self, Scene};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    /// Level sets drawn per vertex field.
    pub levels: usize,
    /// Marching-squares resolution for level sets and force lines.
    pub grid: usize,
    /// Annotate edges with the first self-stress basis vector (max entry ±1).
    pub stress_labels: bool,
    /// Width of the plot area in user units.
    pub width: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            levels: 8,
            grid: forcelines::DEFAULT_RESOLUTION,
            stress_labels: false,
            width: 800.0,
        }
    }
}

const MARGIN: f64 = 20.0;
const QUANTILE_SAMPLES: usize = 65;

struct Viewport {
    bbox: BBox,
    scale: f64,
    width: f64,
    height: f64,
}

impl Viewport {
    fn new(bbox: BBox, plot_width: f64) -> Self {
        let scale = plot_width / bbox.width();
        Viewport {
            bbox,
            scale,
            width: plot_width + 2.0 * MARGIN,
            height: bbox.height() * scale + 2.0 * MARGIN,
        }
    }

    fn map(&self, p: Point2) -> (f64, f64) {
        (
            MARGIN + (p.x - self.bbox.xmin()) * self.scale,
            MARGIN + (self.bbox.ymax() - p.y) * self.scale,
        )
    }

    /// Text anchor near `p`, kept inside the canvas.
    fn label_at(&self, p: Point2, dx: f64, dy: f64) -> (f64, f64) {
        let (x, y) = self.map(p);
        (
            (x + dx).clamp(2.0, self.width - 30.0),
            (y + dy).clamp(12.0, self.height - 2.0),
        )
    }
}

fn points_attr(view: &Viewport, line: &Polyline) -> String {
    let mut s = String::with_capacity(line.points.len() * 16);
    for (k, p) in line.points.iter().enumerate() {
        let (x, y) = view.map(*p);
        if k > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{x:.2},{y:.2}");
    }
    s
}

fn push_polyline(svg: &mut String, view: &Viewport, line: &Polyline) {
    let element = if line.closed { "polygon" } else { "polyline" };
    let _ = writeln!(svg, "<{element} points=\"{}\"/>", points_attr(view, line));
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Formats `v` with `digits` significant digits.
pub fn significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_finite() {
            "0".into()
        } else {
            v.to_string()
        };
    }
    // Exponent after rounding, so 0.99999... at 3 digits becomes "1.00".
    let sci = format!("{:.*e}", digits.saturating_sub(1), v);
    let magnitude: i64 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// Level values at the quantiles `k/(levels+1)` of `f` sampled over the box.
pub fn quantile_levels(f: &ScalarField, bbox: &BBox, levels: usize) -> Vec<f64> {
    let n = QUANTILE_SAMPLES;
    let mut values: Vec<f64> = (0..n * n)
        .map(|k| {
            let (i, j) = ((k % n) as f64, (k / n) as f64);
            let last = (n - 1) as f64;
            f.evaluate(Point2::new(
                bbox.xmin() + bbox.width() * i / last,
                bbox.ymin() + bbox.height() * j / last,
            ))
        })
        .collect();
    values.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = (1..=levels)
        .map(|k| values[(k * (values.len() - 1)) / (levels + 1)])
        .collect();
    out.dedup();
    out
}

fn label_anchor(line: &ForceLine) -> Option<Point2> {
    let longest = |compact: bool| {
        line.components
            .iter()
            .filter(|c| c.is_compact() == compact)
            .max_by(|a, b| a.polyline.length().total_cmp(&b.polyline.length()))
    };
    longest(true)
        .or_else(|| longest(false))
        .map(|c| c.polyline.midpoint())
}

/// Renders `scene` as a standalone SVG 1.1 document.
pub fn render_svg(scene: &Scene, opts: &RenderOptions) -> Result<String> {
    let critical_sets = scene.critical_sets()?;
    let lines = forcelines::trace_force_lines(scene, opts.grid, None)?;
    let stresses: Option<StressVector> = if opts.stress_labels {
        morse::self_stress_basis(scene)?
            .vectors
            .first()
            .map(StressVector::normalized_max)
    } else {
        None
    };

    let view = Viewport::new(*scene.bbox(), opts.width);
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#,
        w = view.width,
        h = view.height
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{:.2}" height="{:.2}" fill="white"/>"#,
        view.width, view.height
    );

    let _ = writeln!(
        svg,
        r##"<g id="level-sets" fill="none" stroke="#9a9a9a" stroke-width="0.6">"##
    );
    for f in scene.fields() {
        for level in quantile_levels(f, scene.bbox(), opts.levels) {
            for line in forcelines::trace_level_set(f, level, scene.bbox(), opts.grid)? {
                push_polyline(&mut svg, &view, &line);
            }
        }
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(
        svg,
        r##"<g id="force-lines-open" fill="none" stroke="#c8c8c8" stroke-width="1" stroke-dasharray="4 3">"##
    );
    for c in lines
        .iter()
        .flat_map(|l| &l.components)
        .filter(|c| !c.is_compact())
    {
        push_polyline(&mut svg, &view, &c.polyline);
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(
        svg,
        r#"<g id="force-lines-compact" fill="none" stroke="black" stroke-width="1.6">"#
    );
    for c in lines
        .iter()
        .flat_map(|l| &l.components)
        .filter(|c| c.is_compact())
    {
        push_polyline(&mut svg, &view, &c.polyline);
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(
        svg,
        r#"<g id="critical-points" font-family="serif" font-size="14">"#
    );
    for (v, set) in critical_sets.iter().enumerate() {
        let id = scene.graph().vertex_id(v).to_uppercase();
        for (k, cp) in set.iter().enumerate() {
            let (x, y) = view.map(cp.location);
            let label = if set.len() > 1 {
                format!("{id}{}", k + 1)
            } else {
                id.clone()
            };
            let (lx, ly) = view.label_at(cp.location, 5.0, -5.0);
            let _ = writeln!(
                svg,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="black"/>"#
            );
            let _ = writeln!(
                svg,
                r#"<text x="{lx:.2}" y="{ly:.2}">{}</text>"#,
                escape(&label)
            );
        }
    }
    let _ = writeln!(svg, "</g>");

    if let Some(w) = &stresses {
        let _ = writeln!(
            svg,
            r##"<g id="stresses" font-family="sans-serif" font-size="12" fill="#1a4f9c">"##
        );
        for line in &lines {
            if let Some(anchor) = label_anchor(line) {
                let (lx, ly) = view.label_at(anchor, 4.0, 14.0);
                let text = significant(w.values[line.edge], 3);
                let _ = writeln!(
                    svg,
                    r#"<text x="{lx:.2}" y="{ly:.2}">{}</text>"#,
                    escape(&text)
                );
            }
        }
        let _ = writeln!(svg, "</g>");
    }
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(significant(-0.5, 3), "-0.500");
        assert_eq!(significant(1.0, 3), "1.00");
        assert_eq!(significant(123.456, 3), "123");
        assert_eq!(significant(0.0012345, 3), "0.00123");
        assert_eq!(significant(-2.5, 12), "-2.50000000000");
        assert_eq!(significant(0.0, 12), "0");
        assert_eq!(significant(0.99999999999997, 12), "1.00000000000");
        assert_eq!(significant(-0.9996, 3), "-1.00");
    }

    #[test]
    fn quantiles_are_increasing() {
        let f = ScalarField::paraboloid(Point2::default());
        let levels = quantile_levels(&f, &BBox::centered(5.0).unwrap(), 6);
        assert_eq!(levels.len(), 6);
        assert!(levels.windows(2).all(|w| w[0] < w[1]));
    }
}
