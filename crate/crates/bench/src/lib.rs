//! Shared inputs for the benchmarks.

use tensegrity_core::{BBox, ClassicalFramework, Graph, Point2, ScalarField, Scene};

/// The five-function wheel scene: four unit paraboloids on the corners of a
/// square and an elliptic paraboloid at the centre.
pub fn wheel_scene() -> Scene {
    let corners = [
        ("a", 3.0, 3.0),
        ("b", -3.0, 3.0),
        ("c", -3.0, -3.0),
        ("d", 3.0, -3.0),
    ];
    let mut fields: Vec<ScalarField> = corners
        .iter()
        .map(|&(_, x, y)| ScalarField::paraboloid(Point2::new(x, y)))
        .collect();
    fields.push(ScalarField::from_terms([(2, 0, 1.0), (0, 2, 5.0)]).unwrap());
    Scene::new(wheel_graph(), fields, BBox::centered(6.0).unwrap()).unwrap()
}

pub fn wheel_graph() -> Graph {
    Graph::new(
        vec!["a", "b", "c", "d", "o"],
        &[
            ("a", "b"),
            ("b", "c"),
            ("c", "d"),
            ("d", "a"),
            ("a", "o"),
            ("b", "o"),
            ("c", "o"),
            ("d", "o"),
        ],
    )
    .unwrap()
}

/// `n` vertices on a circle, each joined to its two successors.
pub fn circulant_framework(n: usize) -> ClassicalFramework {
    let ids: Vec<String> = (0..n).map(|k| format!("v{k}")).collect();
    let mut edges = Vec::new();
    for k in 0..n {
        for step in 1..=2 {
            edges.push((ids[k].clone(), ids[(k + step) % n].clone()));
        }
    }
    let positions = (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64;
            Point2::new(5.0 * t.cos(), 3.0 * t.sin())
        })
        .collect();
    ClassicalFramework::new(Graph::new(ids, &edges).unwrap(), positions).unwrap()
}
