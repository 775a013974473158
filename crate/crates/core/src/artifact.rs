//! JSON interchange format for constructed codes.
//!
//! Base-field elements are integers in `[0, 2^w)`; extension elements are
//! coordinate arrays of length `m` in the polynomial basis.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::constructions::{BipartiteGraph, CompositeCode, CompositeKind, LinearCode};
use crate::error::{Error, Result};
use crate::gabidulin::GabidulinSpec;
use crate::galois::{build_base_field, BaseField, ExtElement, FieldTower};
use crate::linalg::{mul, rank, Matrix};

pub const FORMAT_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub w: u32,
    /// Extension degree; 1 for plain base-field codes.
    pub m: usize,
    pub modulus: u32,
    /// Monic modulus of the extension, lowest coefficient first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext_modulus: Option<Vec<u16>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArtifactKind {
    Wzl,
    Expander,
    Concat,
    Raw,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GabidulinPart {
    pub k: usize,
    pub eval_points: Vec<Vec<u16>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPart {
    pub n_inner: usize,
    pub k_inner: usize,
    pub blocks: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub parameters: BTreeMap<String, serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeArtifact {
    pub format_version: String,
    pub field: FieldSpec,
    pub kind: ArtifactKind,
    pub n: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    /// Designed or claimed minimum distance, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub parity: Vec<Vec<u16>>,
    /// Generator of a plain code, or the outer encoder of a composite code.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Vec<Vec<u16>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gabidulin: Option<GabidulinPart>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<BlockPart>,
    /// Left adjacency lists of the underlying bipartite graph.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<Vec<Vec<usize>>>,
    pub provenance: Provenance,
}

/// A decoded artifact.
#[derive(Clone, Debug)]
pub enum LoadedCode {
    Linear(LinearCode<BaseField>),
    Composite(CompositeCode),
}

impl LoadedCode {
    /// The base-field code whose local checks define locality and availability.
    pub fn base_code(&self) -> LinearCode<BaseField> {
        match self {
            LoadedCode::Linear(c) => c.clone(),
            LoadedCode::Composite(c) => c.outer_code(),
        }
    }
}

fn rows_of(m: &Matrix<u16>) -> Vec<Vec<u16>> {
    m.row_vecs()
}

fn matrix_from(name: &str, cols: usize, rows: &[Vec<u16>], q: u32) -> Result<Matrix<u16>> {
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Artifact(format!("{name}: every row must have {cols} entries")));
    }
    if rows.iter().flatten().any(|&x| u32::from(x) >= q) {
        return Err(Error::Artifact(format!("{name}: entry outside the base field")));
    }
    Matrix::from_rows(cols, rows.to_vec()).map_err(|e| Error::Artifact(format!("{name}: {e}")))
}

impl CodeArtifact {
    pub fn from_linear(kind: ArtifactKind, code: &LinearCode<BaseField>, provenance: Provenance) -> Self {
        let base = code.field();
        CodeArtifact {
            format_version: FORMAT_VERSION.into(),
            field: FieldSpec {
                w: base.w(),
                m: 1,
                modulus: base.modulus(),
                ext_modulus: None,
            },
            kind,
            n: code.n(),
            k: code.k(),
            r: code.claimed_r(),
            t: code.claimed_t(),
            d: None,
            parity: rows_of(code.parity()),
            generator: Some(rows_of(&code.generator())),
            gabidulin: None,
            blocks: None,
            graph: None,
            provenance,
        }
    }

    pub fn from_composite(
        code: &CompositeCode,
        r: usize,
        t: usize,
        graph: Option<&BipartiteGraph>,
        provenance: Provenance,
    ) -> Self {
        let tower = code.tower();
        let (kind, blocks) = match code.kind() {
            CompositeKind::Expander => (ArtifactKind::Expander, None),
            CompositeKind::Concatenated {
                n_inner,
                k_inner,
                blocks,
            } => (
                ArtifactKind::Concat,
                Some(BlockPart {
                    n_inner,
                    k_inner,
                    blocks,
                }),
            ),
        };
        CodeArtifact {
            format_version: FORMAT_VERSION.into(),
            field: FieldSpec {
                w: tower.base().w(),
                m: tower.m(),
                modulus: tower.base().modulus(),
                ext_modulus: Some(tower.ext_modulus().to_vec()),
            },
            kind,
            n: code.n(),
            k: code.k(),
            r: Some(r),
            t: Some(t),
            d: None,
            parity: rows_of(code.parity()),
            generator: Some(rows_of(code.outer_map())),
            gabidulin: Some(GabidulinPart {
                k: code.k(),
                eval_points: code.gabidulin().eval_points().iter().map(|p| p.coords().to_vec()).collect(),
            }),
            blocks,
            graph: graph.map(|g| g.adjacency().to_vec()),
            provenance,
        }
    }

    pub fn with_distance(mut self, d: usize) -> Self {
        self.d = Some(d);
        self
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("artifact serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let artifact: CodeArtifact =
            serde_json::from_str(text).map_err(|e| Error::Artifact(format!("invalid JSON: {e}")))?;
        artifact.load()?;
        Ok(artifact)
    }

    /// Validates the artifact and rebuilds the code it describes.
    pub fn load(&self) -> Result<LoadedCode> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Artifact(format!(
                "unsupported format_version {:?}",
                self.format_version
            )));
        }
        let base = build_base_field(self.field.w).map_err(|e| Error::Artifact(e.to_string()))?;
        if base.modulus() != self.field.modulus {
            return Err(Error::Artifact(format!(
                "modulus {:#x} differs from the built-in primitive polynomial {:#x}",
                self.field.modulus,
                base.modulus()
            )));
        }
        let q = base.q();
        let parity = matrix_from("parity", self.n, &self.parity, q)?;
        if let Some(g) = &self.graph {
            if g.len() != self.n {
                return Err(Error::Artifact("graph must list one adjacency per coordinate".into()));
            }
            BipartiteGraph::new(self.parity.len(), g.clone()).map_err(|e| Error::Artifact(format!("graph: {e}")))?;
        }
        match self.kind {
            ArtifactKind::Wzl | ArtifactKind::Raw => self.load_linear(base, parity),
            ArtifactKind::Expander | ArtifactKind::Concat => self.load_composite(base, parity),
        }
    }

    fn load_linear(&self, base: BaseField, parity: Matrix<u16>) -> Result<LoadedCode> {
        if self.field.m != 1 || self.gabidulin.is_some() {
            return Err(Error::Artifact("plain codes carry no extension field or Gabidulin part".into()));
        }
        let mut code = LinearCode::from_parity(base.clone(), parity);
        if code.k() != self.k {
            return Err(Error::Artifact(format!(
                "declared k = {} but the parity matrix gives {}",
                self.k,
                code.k()
            )));
        }
        if let Some(rows) = &self.generator {
            let g = matrix_from("generator", self.n, rows, base.q())?;
            if g.rows() != self.k || rank(&base, &g) != self.k {
                return Err(Error::Artifact("generator must have k independent rows".into()));
            }
            let prod = mul(&base, code.parity(), &g.transpose())?;
            if prod.row_vecs().iter().flatten().any(|&x| x != 0) {
                return Err(Error::Artifact("generator rows violate the parity checks".into()));
            }
        }
        if let (Some(r), Some(t)) = (self.r, self.t) {
            code = code.with_locality(r, t);
        }
        Ok(LoadedCode::Linear(code))
    }

    fn load_composite(&self, base: BaseField, parity: Matrix<u16>) -> Result<LoadedCode> {
        let ext = self
            .field
            .ext_modulus
            .clone()
            .ok_or_else(|| Error::Artifact("composite codes need ext_modulus".into()))?;
        if ext.len() != self.field.m + 1 {
            return Err(Error::Artifact("ext_modulus degree differs from m".into()));
        }
        let tower = FieldTower::new(base.clone(), ext).map_err(|e| Error::Artifact(format!("ext_modulus: {e}")))?;
        let gab = self
            .gabidulin
            .as_ref()
            .ok_or_else(|| Error::Artifact("composite codes need a gabidulin part".into()))?;
        if gab.k != self.k {
            return Err(Error::Artifact("gabidulin.k differs from k".into()));
        }
        let points = gab
            .eval_points
            .iter()
            .map(|p| tower.from_coords(p.clone()))
            .collect::<Result<Vec<ExtElement>>>()
            .map_err(|e| Error::Artifact(format!("eval_points: {e}")))?;
        let spec = GabidulinSpec::new(tower, gab.k, points).map_err(|e| Error::Artifact(format!("gabidulin: {e}")))?;
        let outer_rows = self
            .generator
            .as_ref()
            .ok_or_else(|| Error::Artifact("composite codes need the outer generator".into()))?;
        let outer = matrix_from("generator", self.n, outer_rows, base.q())?;
        let kind = match (self.kind, self.blocks) {
            (ArtifactKind::Expander, None) => CompositeKind::Expander,
            (ArtifactKind::Concat, Some(b)) => CompositeKind::Concatenated {
                n_inner: b.n_inner,
                k_inner: b.k_inner,
                blocks: b.blocks,
            },
            _ => return Err(Error::Artifact("block structure must be present exactly for concat".into())),
        };
        let code = CompositeCode::from_parts(kind, spec, outer, parity).map_err(|e| Error::Artifact(e.to_string()))?;
        Ok(LoadedCode::Composite(code))
    }
}
