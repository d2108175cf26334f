use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};

/// Simple undirected graph with named vertices.
///
/// Vertex and edge order is the order of construction; matrices and stress
/// vectors built from a graph follow it.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    vertex_ids: Vec<String>,
    edges: Vec<(usize, usize)>,
    index: HashMap<String, usize>,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Graph {
    /// Fails on loops, duplicate edges (in either orientation), unknown
    /// endpoints, duplicate ids, or ids outside `[A-Za-z0-9_]+`.
    pub fn new<S, E>(vertex_ids: Vec<S>, edges: &[(E, E)]) -> Result<Self>
    where
        S: Into<String>,
        E: AsRef<str>,
    {
        let vertex_ids: Vec<String> = vertex_ids.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(vertex_ids.len());
        for (k, id) in vertex_ids.iter().enumerate() {
            if !valid_id(id) {
                return Err(Error::Validation(format!(
                    "vertex id `{id}` must be non-empty and use only letters, digits and `_`"
                )));
            }
            if index.insert(id.clone(), k).is_some() {
                return Err(Error::Validation(format!("duplicate vertex id `{id}`")));
            }
        }

        let mut seen = HashSet::new();
        let mut resolved = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let lookup = |id: &str| {
                index.get(id).copied().ok_or_else(|| {
                    Error::Validation(format!("edge endpoint `{id}` is not a vertex"))
                })
            };
            let (i, j) = (lookup(a)?, lookup(b)?);
            if i == j {
                return Err(Error::Validation(format!("loop at vertex `{a}`")));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::Validation(format!("duplicate edge `{a}-{b}`")));
            }
            resolved.push((i, j));
        }

        Ok(Graph {
            vertex_ids,
            edges: resolved,
            index,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertex_ids
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertex_ids[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Edges as vertex-index pairs in construction order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `"a-b"` for the edge between vertices `a` and `b`.
    pub fn edge_label(&self, e: usize) -> String {
        let (i, j) = self.edges[e];
        format!("{}-{}", self.vertex_ids[i], self.vertex_ids[j])
    }

    pub fn edge_id_pair(&self, e: usize) -> (&str, &str) {
        let (i, j) = self.edges[e];
        (&self.vertex_ids[i], &self.vertex_ids[j])
    }
}
