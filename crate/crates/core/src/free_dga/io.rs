//! JSON description of algebras and lifts.
//!
//! ```json
//! {
//!   "base": {"p": 3, "n": 1},
//!   "generators": [{"name": "x", "degree": 0, "weight": 1},
//!                  {"name": "y", "degree": -1, "weight": 2}],
//!   "differential": {"y": [[1, ["x", "x"]]]}
//! }
//! ```
//!
//! Coefficients are integers reduced mod `p^n`; a word is a list of generator
//! names and `[]` is the unit. Generators absent from `differential` map to 0.
//! [`AlgebraDoc::to_canonical_json`] lists every generator in order with its
//! terms sorted and coefficients as residues, and parsing that output gives the
//! same document back.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Derivation, DgaError, FreeAlgebra, FreeDga, GeneratorSpec, NCPoly};
use crate::ring_core::BaseRing;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("JSON error at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error(transparent)]
    Dga(#[from] DgaError),
    #[error("lift does not match the algebra: {0}")]
    LiftMismatch(String),
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        ParseError::Json { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub base: BaseRing,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub differential: BTreeMap<String, Vec<(i64, Vec<String>)>>,
}

impl AlgebraDoc {
    pub fn from_parts(alg: &FreeAlgebra, d: &Derivation) -> Self {
        let mut differential = BTreeMap::new();
        for (g, spec) in alg.generators().iter().enumerate() {
            let terms = d.values[g]
                .terms()
                .map(|(w, c)| (c as i64, w.iter().map(|&x| alg.name(x).to_string()).collect()))
                .collect();
            differential.insert(spec.name.clone(), terms);
        }
        AlgebraDoc { base: alg.ring(), generators: alg.generators().to_vec(), differential }
    }

    pub fn from_dga(dga: &FreeDga) -> Self {
        Self::from_parts(dga.algebra(), dga.differential())
    }

    /// Builds the algebra and the (unchecked) degree +1 derivation it describes.
    pub fn to_parts(&self) -> Result<(FreeAlgebra, Derivation), DgaError> {
        let alg = FreeAlgebra::new(self.base, self.generators.clone())?;
        let d = self.derivation_on(&alg)?;
        Ok((alg, d))
    }

    fn derivation_on(&self, alg: &FreeAlgebra) -> Result<Derivation, DgaError> {
        let ring = alg.ring();
        let mut d = Derivation::zero(alg.num_generators(), 1);
        for (name, terms) in &self.differential {
            let g = alg.generator(name)?;
            let mut poly = NCPoly::zero();
            for (c, word) in terms {
                let w = word.iter().map(|x| alg.generator(x)).collect::<Result<Vec<_>, _>>()?;
                poly.add_term(&ring, w, ring.reduce(*c));
            }
            d.values[g as usize] = poly;
        }
        Ok(d)
    }

    pub fn to_dga(&self) -> Result<FreeDga, DgaError> {
        let (alg, d) = self.to_parts()?;
        FreeDga::new(alg, d)
    }

    /// Pretty JSON with generators in declaration order inside `differential`.
    pub fn to_canonical_json(&self) -> String {
        let mut diff = serde_json::Map::new();
        for g in &self.generators {
            let terms = self.differential.get(&g.name).cloned().unwrap_or_default();
            diff.insert(g.name.clone(), serde_json::to_value(terms).expect("serializable"));
        }
        let doc = serde_json::json!({
            "base": self.base,
            "generators": self.generators,
            "differential": diff,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }
}

/// Parses and validates an algebra description.
pub fn parse_algebra(text: &str) -> Result<FreeDga, ParseError> {
    let doc: AlgebraDoc = serde_json::from_str(text)?;
    Ok(doc.to_dga()?)
}

/// Parses a lift file for `alg` (over `F_p`). The file uses the algebra schema
/// with base `{p, n: 2}`; its generator list may be omitted, and otherwise must
/// match the algebra's.
pub fn parse_lift(text: &str, alg: &FreeAlgebra) -> Result<(FreeAlgebra, Derivation), ParseError> {
    let doc: AlgebraDoc = serde_json::from_str(text)?;
    if doc.base.p() != alg.ring().p() || doc.base.n() != 2 {
        return Err(ParseError::LiftMismatch(format!("lift base is {}, expected Z/{}^2", doc.base, alg.ring().p())));
    }
    if !doc.generators.is_empty() && doc.generators != alg.generators() {
        return Err(ParseError::LiftMismatch("generator lists differ".to_string()));
    }
    let lifted = alg.with_ring(doc.base);
    let d = doc.derivation_on(&lifted)?;
    lifted.validate_derivation(&d)?;
    Ok((lifted, d))
}
