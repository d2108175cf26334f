//! JSON scene and framework documents, and CSV force-line output.
//!
//! Both document kinds carry `"version": 1` and reject unknown keys.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::classical::ClassicalFramework;
use crate::error::{Error, Result};
use crate::field::{BBox, Point2, ScalarField};
use crate::forcelines::ForceLine;
use crate::graph::Graph;
use crate::morse::{PinnedCriticalPoint, RenderSettings, Scene};

pub const FORMAT_VERSION: u32 = 1;

pub const CSV_HEADER: &str = "edge,component,point_index,x,y,start_tag,end_tag";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneDocument {
    pub version: u32,
    /// `[xmin, ymin, xmax, ymax]`.
    pub bbox: [f64; 4],
    pub vertices: Vec<FieldVertex>,
    pub edges: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pinned_critical_points: Option<BTreeMap<String, Vec<PinnedPoint>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub render: Option<RenderDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldVertex {
    pub id: String,
    /// Monomials as `[i, j, coeff]` for `coeff · x^i · y^j`.
    pub function: Vec<(u32, u32, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PinnedPoint {
    pub x: f64,
    pub y: f64,
    pub index: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenderDocument {
    pub grid: usize,
    pub levels: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameworkDocument {
    pub version: u32,
    pub vertices: Vec<PointVertex>,
    pub edges: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointVertex {
    pub id: String,
    pub x: f64,
    pub y: f64,
}

/// Either kind of input document.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Scene(Scene),
    Framework(ClassicalFramework),
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn check_version(version: u32) -> Result<()> {
    if version != FORMAT_VERSION {
        return Err(Error::Validation(format!(
            "unsupported version {version}, expected {FORMAT_VERSION}"
        )));
    }
    Ok(())
}

fn build_graph<'a>(ids: impl Iterator<Item = &'a str>, edges: &[[String; 2]]) -> Result<Graph> {
    let ids: Vec<&str> = ids.collect();
    if ids.is_empty() {
        return Err(Error::Validation("document has no vertices".into()));
    }
    let pairs: Vec<(&str, &str)> = edges
        .iter()
        .map(|[a, b]| (a.as_str(), b.as_str()))
        .collect();
    Graph::new(ids, &pairs)
}

impl SceneDocument {
    pub fn into_scene(self) -> Result<Scene> {
        check_version(self.version)?;
        let [xmin, ymin, xmax, ymax] = self.bbox;
        let bbox = BBox::new(xmin, ymin, xmax, ymax).map_err(|_| {
            Error::Validation("bbox must satisfy xmin < xmax and ymin < ymax".into())
        })?;
        let graph = build_graph(self.vertices.iter().map(|v| v.id.as_str()), &self.edges)?;
        let fields = self
            .vertices
            .iter()
            .map(|v| {
                ScalarField::from_terms(v.function.iter().copied())
                    .map_err(|e| Error::Validation(format!("vertex `{}`: {e}", v.id)))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut scene = Scene::new(graph, fields, bbox)?;
        for (id, points) in self.pinned_critical_points.unwrap_or_default() {
            let points = points
                .iter()
                .map(|p| PinnedCriticalPoint {
                    location: Point2::new(p.x, p.y),
                    morse_index: p.index,
                })
                .collect();
            scene.pin(&id, points)?;
        }
        if let Some(r) = self.render {
            if r.grid < crate::forcelines::MIN_RESOLUTION || r.levels == 0 {
                return Err(Error::Validation(
                    "render.grid must be at least 8 and render.levels at least 1".into(),
                ));
            }
            scene.render = Some(RenderSettings {
                grid: r.grid,
                levels: r.levels,
            });
        }
        Ok(scene)
    }

    pub fn from_scene(scene: &Scene) -> Self {
        let g = scene.graph();
        let vertices = g
            .vertex_ids()
            .iter()
            .zip(scene.fields())
            .map(|(id, f)| FieldVertex {
                id: id.clone(),
                function: f.terms().collect(),
            })
            .collect();
        let pinned = (!scene.pinned().is_empty()).then(|| {
            scene
                .pinned()
                .iter()
                .map(|(id, pts)| {
                    let pts = pts
                        .iter()
                        .map(|p| PinnedPoint {
                            x: p.location.x,
                            y: p.location.y,
                            index: p.morse_index,
                        })
                        .collect();
                    (id.clone(), pts)
                })
                .collect()
        });
        SceneDocument {
            version: FORMAT_VERSION,
            bbox: scene.bbox().as_array(),
            vertices,
            edges: edge_list(g),
            pinned_critical_points: pinned,
            render: scene.render.map(|r| RenderDocument {
                grid: r.grid,
                levels: r.levels,
            }),
        }
    }
}

impl FrameworkDocument {
    pub fn into_framework(self) -> Result<ClassicalFramework> {
        check_version(self.version)?;
        let graph = build_graph(self.vertices.iter().map(|v| v.id.as_str()), &self.edges)?;
        let positions = self
            .vertices
            .iter()
            .map(|v| Point2::new(v.x, v.y))
            .collect();
        ClassicalFramework::new(graph, positions)
    }

    pub fn from_framework(fw: &ClassicalFramework) -> Self {
        let g = fw.graph();
        let vertices = g
            .vertex_ids()
            .iter()
            .zip(fw.positions())
            .map(|(id, p)| PointVertex {
                id: id.clone(),
                x: p.x,
                y: p.y,
            })
            .collect();
        FrameworkDocument {
            version: FORMAT_VERSION,
            vertices,
            edges: edge_list(g),
        }
    }
}

fn edge_list(g: &Graph) -> Vec<[String; 2]> {
    (0..g.edge_count())
        .map(|e| {
            let (a, b) = g.edge_id_pair(e);
            [a.to_string(), b.to_string()]
        })
        .collect()
}

pub fn parse_scene(text: &str) -> Result<Scene> {
    parse_json::<SceneDocument>(text)?.into_scene()
}

pub fn parse_framework(text: &str) -> Result<ClassicalFramework> {
    parse_json::<FrameworkDocument>(text)?.into_framework()
}

/// Parses a scene (recognised by its `bbox` key) or a framework document.
pub fn parse_document(text: &str) -> Result<Document> {
    let value: serde_json::Value = parse_json(text)?;
    if value.get("bbox").is_some() {
        parse_scene(text).map(Document::Scene)
    } else {
        parse_framework(text).map(Document::Framework)
    }
}

pub fn scene_to_json(scene: &Scene) -> String {
    let mut s = serde_json::to_string_pretty(&SceneDocument::from_scene(scene))
        .expect("scene documents always serialize");
    s.push('\n');
    s
}

pub fn framework_to_json(fw: &ClassicalFramework) -> String {
    let mut s = serde_json::to_string_pretty(&FrameworkDocument::from_framework(fw))
        .expect("framework documents always serialize");
    s.push('\n');
    s
}

/// Writes force lines as CSV, one row per polyline point.
///
/// Edges whose fields have everywhere-parallel gradients get a single row
/// tagged `degenerate` with empty point columns.
pub fn write_force_lines_csv<W: Write>(
    out: &mut W,
    graph: &Graph,
    lines: &[ForceLine],
) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for line in lines {
        let edge = graph.edge_label(line.edge);
        if line.degenerate {
            writeln!(out, "{edge},,,,,degenerate,degenerate")?;
            continue;
        }
        for (c, comp) in line.components.iter().enumerate() {
            for (k, p) in comp.polyline.points.iter().enumerate() {
                writeln!(
                    out,
                    "{edge},{c},{k},{},{},{},{}",
                    p.x, p.y, comp.start, comp.end
                )?;
            }
        }
    }
    Ok(())
}
