//! JSON graph files and tabular result output.
//!
//! A graph file looks like
//!
//! ```json
//! {
//!   "name": "star",
//!   "vertices": [{"id": "v0"}],
//!   "edges": [
//!     {"id": "e0", "from": "v0", "to": "INF", "length": "INF",
//!      "profile_at_from": {"family": "poly_bump", "a": 6.4, "p": 3}}
//!   ],
//!   "transverse": {"lambda_prime": 1.0}
//! }
//! ```
//!
//! Unknown keys are rejected everywhere. `"INF"` as `to` makes the edge a
//! lead, so no vertex may be called `INF`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, GraphError, Result};
use crate::graph::{build_graph, EdgeSpec, GraphSpec, MetricGraph, Transverse, VertexKind, VertexSpec};
use crate::linalg::CMatrix;
use crate::potential::transverse_modes_interval;
use crate::profile::EdgeProfile;

const INF: &str = "INF";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDocument {
    name: String,
    vertices: Vec<VertexDocument>,
    edges: Vec<EdgeDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    transverse: Option<TransverseDocument>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDocument {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<KindDocument>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
enum KindDocument {
    V1,
    V2,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDocument {
    id: String,
    from: String,
    to: String,
    length: LengthDocument,
    profile_at_from: ProfileDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    profile_at_to: Option<ProfileDocument>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum LengthDocument {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum ProfileDocument {
    Flat {},
    PolyBump { a: f64, p: i64 },
    Table { samples: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransverseDocument {
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda_prime: Option<f64>,
}

fn edge_error(edge: &str, field: &'static str, reason: impl ToString) -> Error {
    Error::Graph(GraphError::InvalidEdge {
        edge: edge.to_string(),
        field,
        reason: reason.to_string(),
    })
}

fn profile_from(doc: &ProfileDocument, edge: &str, field: &'static str) -> Result<EdgeProfile> {
    match doc {
        ProfileDocument::Flat {} => Ok(EdgeProfile::Flat),
        ProfileDocument::PolyBump { a, p } => EdgeProfile::poly_bump(*a, *p),
        ProfileDocument::Table { samples } => EdgeProfile::table(samples.clone()),
    }
    .map_err(|e| edge_error(edge, field, e))
}

fn profile_doc(p: &EdgeProfile) -> ProfileDocument {
    match p {
        EdgeProfile::Flat => ProfileDocument::Flat {},
        EdgeProfile::PolyBump {
            amplitude,
            exponent,
        } => ProfileDocument::PolyBump {
            a: *amplitude,
            p: *exponent as i64,
        },
        EdgeProfile::Table(t) => ProfileDocument::Table {
            samples: t.samples().to_vec(),
        },
    }
}

fn transverse_from(doc: &TransverseDocument) -> Result<Transverse> {
    match (doc.length, doc.n, doc.lambda_prime) {
        (Some(l), Some(n), None) => transverse_modes_interval(l, n)
            .map(Transverse::Interval)
            .map_err(|e| Error::Graph(GraphError::Transverse(e.to_string()))),
        (None, None, Some(l)) => Ok(Transverse::LambdaPrime(l)),
        _ => Err(Error::Graph(GraphError::Transverse(
            "expected either {\"L\", \"n\"} or {\"lambda_prime\"}".into(),
        ))),
    }
}

impl GraphDocument {
    fn into_spec(self) -> Result<GraphSpec> {
        let vertices = self
            .vertices
            .into_iter()
            .map(|v| VertexSpec {
                id: v.id,
                kind: v.kind.map(|k| match k {
                    KindDocument::V1 => VertexKind::V1,
                    KindDocument::V2 => VertexKind::V2,
                }),
            })
            .collect();
        let edges = self
            .edges
            .into_iter()
            .map(|e| {
                let length = match &e.length {
                    LengthDocument::Number(x) => *x,
                    LengthDocument::Text(s) if s == INF => f64::INFINITY,
                    LengthDocument::Text(s) => {
                        return Err(edge_error(
                            &e.id,
                            "length",
                            format!("expected a positive number or \"{INF}\", got \"{s}\""),
                        ))
                    }
                };
                let profile_at_from = profile_from(&e.profile_at_from, &e.id, "profile_at_from")?;
                let profile_at_to = e
                    .profile_at_to
                    .as_ref()
                    .map(|p| profile_from(p, &e.id, "profile_at_to"))
                    .transpose()?;
                Ok(EdgeSpec {
                    to: (e.to != INF).then(|| e.to.clone()),
                    id: e.id,
                    from: e.from,
                    length,
                    profile_at_from,
                    profile_at_to,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GraphSpec {
            name: self.name,
            vertices,
            edges,
            transverse: self
                .transverse
                .as_ref()
                .map(transverse_from)
                .transpose()?
                .unwrap_or_default(),
        })
    }

    fn from_graph(g: &MetricGraph) -> Self {
        let spec = g.to_spec();
        GraphDocument {
            name: spec.name,
            vertices: spec
                .vertices
                .into_iter()
                .map(|v| VertexDocument {
                    id: v.id,
                    kind: v.kind.map(|k| match k {
                        VertexKind::V1 => KindDocument::V1,
                        VertexKind::V2 => KindDocument::V2,
                    }),
                })
                .collect(),
            edges: spec
                .edges
                .into_iter()
                .map(|e| EdgeDocument {
                    id: e.id,
                    from: e.from,
                    to: e.to.unwrap_or_else(|| INF.to_string()),
                    length: if e.length.is_infinite() {
                        LengthDocument::Text(INF.into())
                    } else {
                        LengthDocument::Number(e.length)
                    },
                    profile_at_from: profile_doc(&e.profile_at_from),
                    profile_at_to: e.profile_at_to.as_ref().map(profile_doc),
                })
                .collect(),
            transverse: Some(match spec.transverse {
                Transverse::Interval(m) => TransverseDocument {
                    length: Some(m.length),
                    n: Some(m.index as i64),
                    lambda_prime: None,
                },
                Transverse::LambdaPrime(l) => TransverseDocument {
                    length: None,
                    n: None,
                    lambda_prime: Some(l),
                },
            }),
        }
    }
}

/// Parses a graph file into an unvalidated description.
pub fn parse_graph_spec(text: &str) -> Result<GraphSpec> {
    let doc: GraphDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.into_spec()
}

/// Parses and validates a graph file.
pub fn parse_graph_file(text: &str) -> Result<MetricGraph> {
    Ok(build_graph(&parse_graph_spec(text)?)?)
}

/// Pretty-printed graph file; parsing it gives back an equal graph.
pub fn serialize_graph(g: &MetricGraph) -> String {
    serde_json::to_string_pretty(&GraphDocument::from_graph(g)).expect("graph documents always serialize")
}

/// Fixed 17-significant-digit formatting used in all CSV output.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JsonComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for JsonComplex {
    fn from(z: Complex64) -> Self {
        JsonComplex { re: z.re, im: z.im }
    }
}

/// Row-major nested list of `{re, im}` objects.
pub fn json_matrix(m: &CMatrix) -> Vec<Vec<JsonComplex>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect())
        .collect()
}

/// CSV column names for a square complex matrix: `{prefix}_{i}_{j}_re`, `..._im`.
pub fn matrix_columns(prefix: &str, n: usize) -> Vec<String> {
    let mut cols = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            cols.push(format!("{prefix}_{i}_{j}_re"));
            cols.push(format!("{prefix}_{i}_{j}_im"));
        }
    }
    cols
}

pub fn matrix_cells(m: &CMatrix) -> Vec<String> {
    let mut cells = Vec::with_capacity(2 * m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            cells.push(fmt_real(m[(i, j)].re));
            cells.push(fmt_real(m[(i, j)].im));
        }
    }
    cells
}

/// One k point of a graph scattering sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub k: f64,
    pub eps: f64,
    /// Largest `|limiting - full|` amplitude difference, when both were solved.
    pub max_discrepancy: Option<f64>,
    pub tau: CMatrix,
    pub unitarity_residual: f64,
    pub symmetry_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub channels: usize,
    /// Sorted by `k`.
    pub rows: Vec<SweepRow>,
}

#[derive(Serialize)]
struct SweepRowJson {
    k: f64,
    eps: f64,
    max_discrepancy: Option<f64>,
    tau: Vec<Vec<JsonComplex>>,
    unitarity_residual: f64,
    symmetry_residual: f64,
}

impl SweepResult {
    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["k".to_string(), "eps".into(), "max_discrepancy".into()];
        h.extend(matrix_columns("tau", self.channels));
        h.push("unitarity_residual".into());
        h.push("symmetry_residual".into());
        h
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header().join(",");
        out.push('\n');
        for r in &self.rows {
            let mut cells = vec![
                fmt_real(r.k),
                fmt_real(r.eps),
                fmt_real(r.max_discrepancy.unwrap_or(f64::NAN)),
            ];
            cells.extend(matrix_cells(&r.tau));
            cells.push(fmt_real(r.unitarity_residual));
            cells.push(fmt_real(r.symmetry_residual));
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<SweepRowJson> = self
            .rows
            .iter()
            .map(|r| SweepRowJson {
                k: r.k,
                eps: r.eps,
                max_discrepancy: r.max_discrepancy,
                tau: json_matrix(&r.tau),
                unitarity_residual: r.unitarity_residual,
                symmetry_residual: r.symmetry_residual,
            })
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({
            "channels": self.channels,
            "rows": rows,
        }))
        .expect("sweep rows always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const STAR: &str = r#"{
        "name": "star",
        "vertices": [{"id": "v0", "kind": "V2"}],
        "edges": [
            {"id": "e0", "from": "v0", "to": "INF", "length": "INF",
             "profile_at_from": {"family": "poly_bump", "a": 6.4, "p": 3}},
            {"id": "e1", "from": "v0", "to": "INF", "length": "INF",
             "profile_at_from": {"family": "flat"}},
            {"id": "e2", "from": "v0", "to": "INF", "length": "INF",
             "profile_at_from": {"family": "table", "samples": [[0, 1.2], [0.5, 1.1], [1, 1]]}}
        ],
        "transverse": {"L": 1.0, "n": 1}
    }"#;

    #[test]
    fn parses_three_lead_star() {
        let g = parse_graph_file(STAR).unwrap();
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.leads().len(), 3);
        assert!((g.lambda_prime() - std::f64::consts::PI.powi(2)).abs() < 1e-12);
    }

    #[test]
    fn string_length_names_the_edge() {
        let text = r#"{"name": "x", "vertices": [{"id": "a"}, {"id": "b"}],
            "edges": [{"id": "bad_edge", "from": "a", "to": "b", "length": "-1",
                       "profile_at_from": {"family": "flat"}, "profile_at_to": {"family": "flat"}}]}"#;
        let msg = parse_graph_file(text).unwrap_err().to_string();
        assert!(msg.contains("bad_edge") && msg.contains("length"), "{msg}");
    }

    #[test]
    fn negative_length_names_the_edge() {
        let text = r#"{"name": "x", "vertices": [{"id": "a"}, {"id": "b"}],
            "edges": [{"id": "e7", "from": "a", "to": "b", "length": -1,
                       "profile_at_from": {"family": "flat"}, "profile_at_to": {"family": "flat"}}]}"#;
        let msg = parse_graph_file(text).unwrap_err().to_string();
        assert!(msg.contains("e7"), "{msg}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let top = STAR.replacen("\"name\"", "\"profiles\": [], \"name\"", 1);
        assert!(matches!(parse_graph_file(&top), Err(Error::Parse(_))));
        let in_profile = STAR.replacen("\"p\": 3", "\"p\": 3, \"amp\": 1", 1);
        assert!(matches!(parse_graph_file(&in_profile), Err(Error::Parse(_))));
        let in_flat = STAR.replacen("{\"family\": \"flat\"}", "{\"family\": \"flat\", \"a\": 1}", 1);
        assert!(matches!(parse_graph_file(&in_flat), Err(Error::Parse(_))));
    }

    #[test]
    fn syntax_error_cites_line() {
        let msg = parse_graph_file("{\n\"name\": \"x\",\n oops }").unwrap_err().to_string();
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn bad_profile_names_edge_and_field() {
        let text = STAR.replacen("\"p\": 3", "\"p\": 2", 1);
        let msg = parse_graph_file(&text).unwrap_err().to_string();
        assert!(msg.contains("e0") && msg.contains("profile_at_from"), "{msg}");
    }

    #[test]
    fn transverse_must_be_one_form() {
        let text = STAR.replacen("\"n\": 1", "\"n\": 1, \"lambda_prime\": 2", 1);
        assert!(parse_graph_file(&text).is_err());
    }

    #[test]
    fn round_trip() {
        let g = parse_graph_file(STAR).unwrap();
        let again = parse_graph_file(&serialize_graph(&g)).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn csv_layout() {
        let tau = CMatrix::from_element(2, 2, Complex64::new(0.5, -0.25));
        let sweep = SweepResult {
            channels: 2,
            rows: vec![SweepRow {
                k: 1.0,
                eps: 0.1,
                max_discrepancy: None,
                tau,
                unitarity_residual: 0.0,
                symmetry_residual: 0.0,
            }],
        };
        let csv = sweep.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0].split(',').count(), 3 + 2 * 4 + 2);
        assert_eq!(lines[1].split(',').count(), 3 + 2 * 4 + 2);
        assert!(lines[1].starts_with("1.0000000000000000e0,1.0000000000000001e-1,NaN,5.0000000000000000e-1,-2.5000000000000000e-1"));
        let json: serde_json::Value = serde_json::from_str(&sweep.to_json()).unwrap();
        assert_eq!(json["rows"][0]["tau"][1][0]["im"], -0.25);
    }
}
