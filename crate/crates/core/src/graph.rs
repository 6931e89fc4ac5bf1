//! Metric graph with fiber profiles at every edge end.
//!
//! Each edge carries a local coordinate `s` running from its `from` vertex
//! (`s = 0`) to its `to` vertex (`s = length`). Infinite edges (leads) have no
//! `to` vertex. The profile at an end is written on that end's own outward
//! coordinate, so the `to` profile is read with `xi = (length - s) / eps`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::GraphError;
use crate::potential::{EffectivePotential, TransverseMode};
use crate::profile::EdgeProfile;

/// `V1` vertices have degree one, `V2` vertices degree at least two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    V1,
    V2,
}

impl VertexKind {
    pub fn from_degree(degree: usize) -> Self {
        if degree == 1 {
            VertexKind::V1
        } else {
            VertexKind::V2
        }
    }
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexKind::V1 => "V1",
            VertexKind::V2 => "V2",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: String,
    pub kind: VertexKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: String,
    pub from: usize,
    /// `None` for a lead running to infinity.
    pub to: Option<usize>,
    /// `f64::INFINITY` for leads.
    pub length: f64,
    pub profile_at_from: EdgeProfile,
    pub profile_at_to: Option<EdgeProfile>,
}

impl Edge {
    pub fn is_lead(&self) -> bool {
        self.to.is_none()
    }
}

/// Which end of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    From,
    To,
}

/// One end of an edge, seen from the vertex it touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EndRef {
    pub edge: usize,
    pub side: Side,
}

impl EndRef {
    pub fn from(edge: usize) -> Self {
        EndRef {
            edge,
            side: Side::From,
        }
    }

    pub fn to(edge: usize) -> Self {
        EndRef {
            edge,
            side: Side::To,
        }
    }

    pub fn opposite(self) -> Self {
        EndRef {
            edge: self.edge,
            side: match self.side {
                Side::From => Side::To,
                Side::To => Side::From,
            },
        }
    }
}

/// Cross-section data: either an interval mode or a bare eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transverse {
    Interval(TransverseMode),
    LambdaPrime(f64),
}

impl Transverse {
    pub fn lambda_prime(&self) -> f64 {
        match self {
            Transverse::Interval(m) => m.eigenvalue,
            Transverse::LambdaPrime(l) => *l,
        }
    }
}

impl Default for Transverse {
    fn default() -> Self {
        Transverse::LambdaPrime(0.0)
    }
}

/// Unvalidated graph description, the input of [`build_graph`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GraphSpec {
    pub name: String,
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<EdgeSpec>,
    pub transverse: Transverse,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexSpec {
    pub id: String,
    pub kind: Option<VertexKind>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSpec {
    pub id: String,
    pub from: String,
    /// `None` means the edge runs to infinity.
    pub to: Option<String>,
    pub length: f64,
    pub profile_at_from: EdgeProfile,
    pub profile_at_to: Option<EdgeProfile>,
}

impl GraphSpec {
    pub fn new(name: impl Into<String>) -> Self {
        GraphSpec {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn vertex(mut self, id: impl Into<String>) -> Self {
        self.vertices.push(VertexSpec {
            id: id.into(),
            kind: None,
        });
        self
    }

    pub fn lead(mut self, id: impl Into<String>, from: impl Into<String>, profile: EdgeProfile) -> Self {
        self.edges.push(EdgeSpec {
            id: id.into(),
            from: from.into(),
            to: None,
            length: f64::INFINITY,
            profile_at_from: profile,
            profile_at_to: None,
        });
        self
    }

    pub fn edge(
        mut self,
        id: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
        length: f64,
        profile_at_from: EdgeProfile,
        profile_at_to: EdgeProfile,
    ) -> Self {
        self.edges.push(EdgeSpec {
            id: id.into(),
            from: from.into(),
            to: Some(to.into()),
            length,
            profile_at_from,
            profile_at_to: Some(profile_at_to),
        });
        self
    }

    pub fn transverse(mut self, transverse: Transverse) -> Self {
        self.transverse = transverse;
        self
    }

    pub fn build(&self) -> Result<MetricGraph, GraphError> {
        build_graph(self)
    }
}

/// Validated metric graph.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    pub name: String,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    transverse: Transverse,
    incidence: Vec<Vec<EndRef>>,
}

impl MetricGraph {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn transverse(&self) -> Transverse {
        self.transverse
    }

    pub fn lambda_prime(&self) -> f64 {
        self.transverse.lambda_prime()
    }

    /// Edge ends incident to vertex `v`, ordered by edge index, `from` before `to`.
    pub fn incident_ends(&self, v: usize) -> &[EndRef] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Indices of infinite edges, in edge order.
    pub fn leads(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].is_lead())
            .collect()
    }

    pub fn is_compact(&self) -> bool {
        self.edges.iter().all(|e| !e.is_lead())
    }

    /// All existing edge ends, in edge order.
    pub fn ends(&self) -> Vec<EndRef> {
        let mut out = Vec::with_capacity(2 * self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            out.push(EndRef::from(i));
            if !e.is_lead() {
                out.push(EndRef::to(i));
            }
        }
        out
    }

    /// Vertex touched by an end; `None` for the far end of a lead.
    pub fn end_vertex(&self, end: EndRef) -> Option<usize> {
        let e = &self.edges[end.edge];
        match end.side {
            Side::From => Some(e.from),
            Side::To => e.to,
        }
    }

    pub fn end_profile(&self, end: EndRef) -> Option<&EdgeProfile> {
        let e = &self.edges[end.edge];
        match end.side {
            Side::From => Some(&e.profile_at_from),
            Side::To => e.profile_at_to.as_ref(),
        }
    }

    /// Effective potential of an end using the graph's transverse eigenvalue.
    pub fn end_potential(&self, end: EndRef) -> Option<EffectivePotential> {
        self.end_profile(end)
            .map(|p| EffectivePotential::from_profile(p.clone(), self.lambda_prime()))
    }

    /// Checks `length > 2 eps` on every finite edge.
    pub fn check_eps(&self, eps: f64) -> Result<(), GraphError> {
        for e in &self.edges {
            if !e.is_lead() && e.length <= 2.0 * eps {
                return Err(GraphError::EdgeTooShort {
                    edge: e.id.clone(),
                    length: e.length,
                    eps,
                });
            }
        }
        Ok(())
    }

    /// Inverse of [`build_graph`].
    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            name: self.name.clone(),
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexSpec {
                    id: v.id.clone(),
                    kind: Some(v.kind),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id.clone(),
                    from: self.vertices[e.from].id.clone(),
                    to: e.to.map(|t| self.vertices[t].id.clone()),
                    length: e.length,
                    profile_at_from: e.profile_at_from.clone(),
                    profile_at_to: e.profile_at_to.clone(),
                })
                .collect(),
            transverse: self.transverse,
        }
    }
}

/// Validates a graph description and assigns vertex kinds from degrees.
pub fn build_graph(spec: &GraphSpec) -> Result<MetricGraph, GraphError> {
    if spec.vertices.is_empty() {
        return Err(GraphError::Empty);
    }
    if let Transverse::LambdaPrime(l) = spec.transverse {
        if !(l.is_finite() && l >= 0.0) {
            return Err(GraphError::Transverse(format!(
                "lambda_prime must be finite and >= 0, got {l}"
            )));
        }
    }

    let mut index = HashMap::new();
    for (i, v) in spec.vertices.iter().enumerate() {
        if index.insert(v.id.as_str(), i).is_some() {
            return Err(GraphError::DuplicateId {
                what: "vertex",
                id: v.id.clone(),
            });
        }
    }
    let mut edge_ids = HashMap::new();
    for e in &spec.edges {
        if edge_ids.insert(e.id.as_str(), ()).is_some() {
            return Err(GraphError::DuplicateId {
                what: "edge",
                id: e.id.clone(),
            });
        }
    }

    let lookup = |edge: &str, id: &str| -> Result<usize, GraphError> {
        index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::DanglingReference {
                edge: edge.to_string(),
                vertex: id.to_string(),
            })
    };
    let invalid = |edge: &str, field: &'static str, reason: String| GraphError::InvalidEdge {
        edge: edge.to_string(),
        field,
        reason,
    };

    let mut edges = Vec::with_capacity(spec.edges.len());
    let mut incidence = vec![Vec::new(); spec.vertices.len()];
    for (i, e) in spec.edges.iter().enumerate() {
        let from = lookup(&e.id, &e.from)?;
        let to = e.to.as_deref().map(|t| lookup(&e.id, t)).transpose()?;
        if e.length.is_nan() || e.length <= 0.0 {
            return Err(invalid(
                &e.id,
                "length",
                format!("must be positive, got {}", e.length),
            ));
        }
        match (to, e.length.is_infinite()) {
            (None, false) => {
                return Err(invalid(
                    &e.id,
                    "length",
                    "an edge to INF must have length INF".into(),
                ))
            }
            (Some(_), true) => {
                return Err(invalid(
                    &e.id,
                    "length",
                    "a finite edge must have finite length".into(),
                ))
            }
            _ => {}
        }
        match (to.is_some(), e.profile_at_to.is_some()) {
            (true, false) => {
                return Err(invalid(
                    &e.id,
                    "profile_at_to",
                    "finite edge is missing its `to` profile".into(),
                ))
            }
            (false, true) => {
                return Err(invalid(
                    &e.id,
                    "profile_at_to",
                    "an edge to INF has no `to` profile".into(),
                ))
            }
            _ => {}
        }
        incidence[from].push(EndRef::from(i));
        if let Some(t) = to {
            incidence[t].push(EndRef::to(i));
        }
        edges.push(Edge {
            id: e.id.clone(),
            from,
            to,
            length: e.length,
            profile_at_from: e.profile_at_from.clone(),
            profile_at_to: e.profile_at_to.clone(),
        });
    }

    let mut vertices = Vec::with_capacity(spec.vertices.len());
    for (v, vs) in spec.vertices.iter().enumerate() {
        let degree = incidence[v].len();
        if degree == 0 {
            return Err(GraphError::IsolatedVertex(vs.id.clone()));
        }
        let kind = VertexKind::from_degree(degree);
        if let Some(declared) = vs.kind {
            if declared != kind {
                return Err(GraphError::KindMismatch {
                    vertex: vs.id.clone(),
                    declared: declared.to_string(),
                    degree,
                });
            }
        }
        vertices.push(Vertex {
            id: vs.id.clone(),
            kind,
        });
    }

    // connectivity over the vertex set
    let mut seen = vec![false; vertices.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for end in &incidence[v] {
            let e = &edges[end.edge];
            for w in [Some(e.from), e.to].into_iter().flatten() {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(GraphError::Disconnected(vertices[v].id.clone()));
    }

    Ok(MetricGraph {
        name: spec.name.clone(),
        vertices,
        edges,
        transverse: spec.transverse,
        incidence,
    })
}
