//! Versioned JSON documents read and written by the command line.
//!
//! Every document is one object carrying `"torocob-schema": "1"` and a
//! `kind`. Integers are decimal strings throughout.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use torocob::corners::{cube, disc, eye_shape, polygon, simplex, MarkedManifold};
use torocob::equivalence::{EquivalenceWitness, Refutation};
use torocob::families::{ConnectedSumDecomposition, HirzebruchResult};
use torocob::{
    build_surface_with_corners, product_with_interval, BundleFlag, CharFunction, CobordismCertificate,
    CornersComplex, CornersError, IntVector, LensDescriptor, OrbifoldDescriptor, RSCharFunction, Strata,
    ValidityReport,
};

pub const SCHEMA_KEY: &str = "torocob-schema";
pub const SCHEMA_VERSION: &str = "1";

/// Named constructions of bases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Builder {
    /// Orientable surface of the given genus; a cycle length of 0 is a
    /// boundary circle without vertices.
    Surface {
        #[serde(with = "torocob::dec")]
        genus: usize,
        #[serde(with = "torocob::dec::seq")]
        cycles: Vec<usize>,
    },
    Polygon {
        #[serde(with = "torocob::dec")]
        sides: usize,
    },
    Eye,
    Disc,
    Simplex {
        #[serde(with = "torocob::dec")]
        dim: usize,
    },
    Cube {
        #[serde(with = "torocob::dec")]
        dim: usize,
    },
    /// `Q × [0, 1]` with facets `F*I`, `bottom`, `top`.
    Product { of: Box<Builder> },
}

impl Builder {
    pub fn build(&self) -> Result<CornersComplex, CornersError> {
        Ok(match self {
            Builder::Surface { genus, cycles } => build_surface_with_corners(*genus, cycles)?,
            Builder::Polygon { sides } => polygon(*sides)?,
            Builder::Eye => eye_shape(),
            Builder::Disc => disc(),
            Builder::Simplex { dim } => simplex(*dim),
            Builder::Cube { dim } => cube(*dim),
            Builder::Product { of } => product_with_interval(&of.build()?),
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cut {
    #[default]
    None,
    /// Cut every vertex; the base must be simple.
    Vertices,
    /// Form `Q × [0, 1]` and cut every vertex on the bottom.
    Bottom,
}

/// A base given inline or by a builder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<CornersComplex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builder: Option<Builder>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<CornersComplex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builder: Option<Builder>,
    #[serde(rename = "char")]
    pub charfun: CharFunction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<BundleFlag>,
}

impl DataDoc {
    pub fn spec(&self) -> BaseSpec {
        BaseSpec { base: self.base.clone(), builder: self.builder.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructDoc {
    pub builder: Builder,
    #[serde(default)]
    pub cut: Cut,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimpleBaseDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<CornersComplex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builder: Option<Builder>,
    /// Vectors fixed in advance on some remaining facets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<BTreeMap<String, IntVector>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkedDoc {
    pub marked: MarkedManifold,
    pub rs: RSCharFunction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<BundleFlag>,
}

/// Two data documents, by path relative to the manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestDoc {
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDoc {
    pub vectors: Vec<IntVector>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalDoc {
    pub u: IntVector,
    pub v: IntVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub certificate: CobordismCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorDoc {
    pub descriptor: OrbifoldDescriptor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InputDoc {
    Data(DataDoc),
    Construct(ConstructDoc),
    SimpleBase(SimpleBaseDoc),
    Marked(MarkedDoc),
    Manifest(ManifestDoc),
    Fan(FanDoc),
    Interval(IntervalDoc),
    Certificate(CertificateDoc),
    Descriptor(DescriptorDoc),
}

impl InputDoc {
    pub fn kind(&self) -> &'static str {
        match self {
            InputDoc::Data(_) => "data",
            InputDoc::Construct(_) => "construct",
            InputDoc::SimpleBase(_) => "simple-base",
            InputDoc::Marked(_) => "marked",
            InputDoc::Manifest(_) => "manifest",
            InputDoc::Fan(_) => "fan",
            InputDoc::Interval(_) => "interval",
            InputDoc::Certificate(_) => "certificate",
            InputDoc::Descriptor(_) => "descriptor",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OutputDoc {
    Validation {
        valid: bool,
        nice: ValidityReport,
        r_characteristic: Option<ValidityReport>,
        characteristic: Option<ValidityReport>,
    },
    Strata {
        strata: Strata,
    },
    Complex {
        complex: CornersComplex,
    },
    Marked {
        marked: MarkedManifold,
    },
    Certificate {
        certificate: CobordismCertificate,
    },
    Boundary {
        pieces: Vec<OrbifoldDescriptor>,
    },
    Equivalence {
        equivalent: bool,
        witness: Option<EquivalenceWitness>,
        refutation: Option<Refutation>,
    },
    Decomposition {
        decomposition: ConnectedSumDecomposition,
    },
    Hirzebruch {
        result: HirzebruchResult,
    },
    Lens {
        lens: LensDescriptor,
    },
    Report {
        report: ValidityReport,
        #[serde(skip_serializing_if = "Option::is_none")]
        error: Option<String>,
    },
}

/// Adds the schema version to a serialized document.
pub fn envelope<T: Serialize>(doc: &T) -> Value {
    let mut v = serde_json::to_value(doc).expect("documents always serialize");
    if let Value::Object(map) = &mut v {
        map.insert(SCHEMA_KEY.to_string(), Value::String(SCHEMA_VERSION.to_string()));
    }
    v
}
