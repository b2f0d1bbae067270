//! JSON documents for matroids, graphs and set families.
//!
//! A matroid document is `{"n": .., "repr": {"kind": .., ..}}` with subsets
//! written as sorted arrays of 1-based labels. [`MatroidDoc::canonical`]
//! sorts every member list, so parse followed by serialize is byte-stable
//! on canonical input.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{cycle_matroid, Graph};
use crate::matroid::Matroid;
use crate::subset::{SetFamily, Subset};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatroidDoc {
    pub n: usize,
    pub repr: Repr,
    /// Free-form record of how the document was produced; ignored by
    /// [`MatroidDoc::build`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Repr {
    Bases {
        bases: Vec<Vec<usize>>,
    },
    /// Paving matroid of rank `m + 1` from an `m`-partition.
    HyperplanesPaving {
        m: usize,
        hyperplanes: Vec<Vec<usize>>,
    },
    Graph {
        #[serde(rename = "V")]
        vertices: usize,
        edges: Vec<[usize; 2]>,
    },
    Uniform {
        r: usize,
    },
    DirectSum {
        parts: Vec<MatroidDoc>,
    },
}

impl MatroidDoc {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("matroid JSON: {e}")))
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    /// The same document with every label list and member list sorted.
    pub fn canonical(&self) -> MatroidDoc {
        let sort_family = |f: &Vec<Vec<usize>>| {
            let mut f: Vec<Vec<usize>> = f
                .iter()
                .map(|m| {
                    let mut m = m.clone();
                    m.sort_unstable();
                    m.dedup();
                    m
                })
                .collect();
            f.sort();
            f.dedup();
            f
        };
        let repr = match &self.repr {
            Repr::Bases { bases } => Repr::Bases {
                bases: sort_family(bases),
            },
            Repr::HyperplanesPaving { m, hyperplanes } => Repr::HyperplanesPaving {
                m: *m,
                hyperplanes: sort_family(hyperplanes),
            },
            // edge order is the element order, so it stays
            Repr::Graph { vertices, edges } => Repr::Graph {
                vertices: *vertices,
                edges: edges.clone(),
            },
            Repr::Uniform { r } => Repr::Uniform { r: *r },
            Repr::DirectSum { parts } => Repr::DirectSum {
                parts: parts.iter().map(MatroidDoc::canonical).collect(),
            },
        };
        MatroidDoc {
            n: self.n,
            repr,
            provenance: self.provenance.clone(),
        }
    }

    pub fn build(&self) -> Result<Matroid> {
        let n = self.n;
        let m = match &self.repr {
            Repr::Bases { bases } => {
                let bases = bases
                    .iter()
                    .map(|b| Subset::from_labels(n, b))
                    .collect::<Result<Vec<_>>>()?;
                Matroid::from_bases(n, bases)?
            }
            Repr::HyperplanesPaving { m, hyperplanes } => {
                Matroid::from_m_partition(n, &SetFamily::from_labels(n, hyperplanes)?, *m)?
            }
            Repr::Graph { vertices, edges } => {
                let g = graph_from_pairs(*vertices, edges)?;
                if g.edge_count() != n {
                    return Err(Error::InvalidInput(format!(
                        "graph has {} edges but n = {n}",
                        g.edge_count()
                    )));
                }
                cycle_matroid(&g)?
            }
            Repr::Uniform { r } => Matroid::uniform(*r, n)?,
            Repr::DirectSum { parts } => {
                let built = parts.iter().map(MatroidDoc::build).collect::<Result<Vec<_>>>()?;
                let total: usize = built.iter().map(Matroid::n).sum();
                if total != n {
                    return Err(Error::InvalidInput(format!("parts have {total} elements but n = {n}")));
                }
                Matroid::direct_sum(&built)?
            }
        };
        Ok(m)
    }

    /// A bases document for `m`.
    pub fn from_matroid(m: &Matroid) -> MatroidDoc {
        let bases = SetFamily::new(m.n(), m.bases().to_vec())
            .expect("bases lie in the ground set")
            .lex_sorted()
            .to_labels();
        MatroidDoc {
            n: m.n(),
            repr: Repr::Bases { bases },
            provenance: None,
        }
    }

    /// A hyperplane document for a paving matroid of rank at least 2.
    pub fn paving_from_matroid(m: &Matroid) -> Result<MatroidDoc> {
        if m.rank() < 2 || !m.is_paving() {
            return Err(Error::InvalidInput(
                "expected a paving matroid of rank at least 2".into(),
            ));
        }
        Ok(MatroidDoc {
            n: m.n(),
            repr: Repr::HyperplanesPaving {
                m: m.rank() - 1,
                hyperplanes: m.hyperplanes().lex_sorted().to_labels(),
            },
            provenance: None,
        })
    }
}

fn graph_from_pairs(vertices: usize, edges: &[[usize; 2]]) -> Result<Graph> {
    let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e[0], e[1])).collect();
    Graph::from_labels(vertices, &pairs)
}

/// `{"V": .., "edges": [[u, v], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    #[serde(rename = "V")]
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphDoc {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("graph JSON: {e}")))
    }

    pub fn build(&self) -> Result<Graph> {
        graph_from_pairs(self.vertices, &self.edges)
    }

    pub fn from_graph(g: &Graph) -> GraphDoc {
        GraphDoc {
            vertices: g.vertex_count(),
            edges: g.edges().iter().map(|&(u, v)| [u + 1, v + 1]).collect(),
        }
    }
}

/// `{"n": .., "members": [[..], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub n: usize,
    pub members: Vec<Vec<usize>>,
}

impl FamilyDoc {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("family JSON: {e}")))
    }

    pub fn build(&self) -> Result<SetFamily> {
        SetFamily::from_labels(self.n, &self.members)
    }
}
