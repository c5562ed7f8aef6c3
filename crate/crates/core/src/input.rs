//! JSON polytope input and group specifications.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{KernelError, Rat, RatMat, RatVec};
use crate::polytope::{FanRays, FanoPolytope, PolytopeError};
use crate::symmetry::{automorphism_group, subgroup_closure, FiniteGroup, SymmetryError, UnimodularMap};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("malformed polytope JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("polytope input needs \"rays\" or \"vertices\"")]
    MissingData,
    #[error("cannot infer the dimension from an empty list")]
    UnknownDimension,
    #[error("malformed group specification {0:?}")]
    GroupSpec(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
}

/// `{"name", "dim", "rays": [[int]]}` or `{"name", "dim", "vertices": [["p/q"]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<RatVec>>,
}

impl PolytopeInput {
    pub fn from_json(text: &str) -> Result<Self, InputError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_rays(name: &str, rays: &FanRays) -> Self {
        PolytopeInput {
            name: Some(name.to_string()),
            dim: Some(rays.dim()),
            rays: Some(rays.to_int_rows()),
            vertices: None,
        }
    }

    pub fn build(&self) -> Result<FanoPolytope, InputError> {
        if let Some(rays) = &self.rays {
            let dim = self.dim.or_else(|| rays.first().map(Vec::len)).ok_or(InputError::UnknownDimension)?;
            let vecs = rays.iter().map(|r| RatVec::from_ints(r)).collect();
            return Ok(FanoPolytope::from_rays(FanRays::from_vectors(dim, vecs)?)?);
        }
        if let Some(vertices) = &self.vertices {
            let dim =
                self.dim.or_else(|| vertices.first().map(RatVec::dim)).ok_or(InputError::UnknownDimension)?;
            return Ok(FanoPolytope::from_vertices(dim, vertices)?);
        }
        Err(InputError::MissingData)
    }
}

/// `"trivial" | "full-aut" | "gens:[[a,b],[c,d]];[[...]]"`, or the JSON forms
/// `"trivial"`, `"full-aut"` and `{"generators": [[[int]]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupSpec {
    Trivial,
    FullAut,
    Generators(Vec<Vec<Vec<i64>>>),
}

#[derive(Deserialize)]
struct GeneratorsJson {
    generators: Vec<Vec<Vec<i64>>>,
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let t = text.trim();
        let bad = || InputError::GroupSpec(text.to_string());
        match t {
            "trivial" | "\"trivial\"" => return Ok(GroupSpec::Trivial),
            "full-aut" | "\"full-aut\"" => return Ok(GroupSpec::FullAut),
            _ => {}
        }
        if t.starts_with('{') {
            let g: GeneratorsJson = serde_json::from_str(t).map_err(|_| bad())?;
            return Ok(GroupSpec::Generators(g.generators));
        }
        let body = t.strip_prefix("gens:").ok_or_else(bad)?;
        let gens = body
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|s| serde_json::from_str::<Vec<Vec<i64>>>(s.trim()).map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GroupSpec::Generators(gens))
    }

    /// The subgroup of `Aut P` named by this group description. Generators must be
    /// unimodular automorphisms of `P`.
    pub fn resolve(&self, f: &FanoPolytope) -> Result<FiniteGroup, InputError> {
        let dim = f.dim();
        match self {
            GroupSpec::Trivial => Ok(FiniteGroup::trivial(dim)),
            GroupSpec::FullAut => Ok(automorphism_group(f.polytope())?),
            GroupSpec::Generators(gens) => {
                let mut maps = Vec::with_capacity(gens.len());
                for g in gens {
                    let rows: Vec<RatVec> = g.iter().map(|r| RatVec::from_ints(r)).collect();
                    let m = RatMat::from_rows(rows)?;
                    if m.rows() != dim || m.cols() != dim {
                        return Err(
                            SymmetryError::DimensionMismatch { expected: dim, found: m.rows() }.into()
                        );
                    }
                    maps.push(UnimodularMap::new(m)?);
                }
                let aut = automorphism_group(f.polytope())?;
                Ok(subgroup_closure(&maps, &aut)?)
            }
        }
    }
}

impl std::fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupSpec::Trivial => write!(f, "trivial"),
            GroupSpec::FullAut => write!(f, "full-aut"),
            GroupSpec::Generators(gens) => {
                let parts: Vec<String> =
                    gens.iter().map(|g| serde_json::to_string(g).expect("ints")).collect();
                write!(f, "gens:{}", parts.join(";"))
            }
        }
    }
}

/// Parses a rational point written as `"(a,b,...)"` or `"a,b,..."`.
pub fn parse_point(text: &str) -> Result<RatVec, InputError> {
    let t = text.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    Ok(t.split(',').map(|c| c.trim().trim_matches('"').parse::<Rat>()).collect::<Result<RatVec, _>>()?)
}
