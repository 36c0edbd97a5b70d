//! Germ descriptor files.
//!
//! ```json
//! {
//!   "version": 1,
//!   "germ": "D_5",
//!   "r": 2,
//!   "source": { "poincare": {
//!       "1":   { "numerator": [{"exp": [0], "coef": 1}, {"exp": [3], "coef": 1}], "denominator": [[2]] },
//!       "2":   { "numerator": [{"exp": [0], "coef": 1}], "denominator": [[1]] },
//!       "1,2": { "numerator": [{"exp": [0, 0], "coef": 1}, {"exp": [3, 1], "coef": 1}] } } },
//!   "flags": { "plane": true },
//!   "bound": [6, 4]
//! }
//! ```
//!
//! `source` holds exactly one of `poincare` (subsets of 1-based branch indices mapped to
//! `numerator / Π (1 − t^a)`), `semigroup` (`conductor` and the `elements` in R(0,c)),
//! `hilbert` (`bound` and `values` in row-major order, last coordinate fastest) or
//! `builtin` (`name` and `params`). Report files carry the same header fields and parse
//! as descriptors.

use std::collections::BTreeMap;

use latcurve_core::catalog::{self, CatalogEntry, GermSource};
use latcurve_core::lattice::{Germ, Grid, HilbertGrid, LatticePoint};
use latcurve_core::series::{germ_from_poincare, MultiPoly, RationalSeries, SubcurveSeries};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub exp: Vec<u32>,
    pub coef: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesSpec {
    pub numerator: Vec<Term>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub denominator: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Poincare(BTreeMap<String, SeriesSpec>),
    Semigroup {
        conductor: Vec<u32>,
        elements: Vec<Vec<u32>>,
    },
    Hilbert {
        bound: Vec<u32>,
        values: Vec<i64>,
    },
    Builtin {
        name: String,
        #[serde(default)]
        params: Vec<u32>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gorenstein: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermDescriptor {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub germ: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    pub source: Source,
    #[serde(default)]
    pub flags: Flags,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<Vec<u32>>,
}

/// A descriptor resolved to a germ.
pub struct Loaded {
    pub descriptor: GermDescriptor,
    pub germ: Germ,
    pub name: String,
    pub plane: bool,
    pub bound: Option<LatticePoint>,
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

/// Parses descriptor text; JSON errors carry line and column.
pub fn parse(text: &str, origin: &str) -> Result<GermDescriptor, CliError> {
    let d: GermDescriptor = serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let msg = msg.split(" at line ").next().unwrap_or_default();
        parse_err(format!("{origin}:{}:{}: {msg}", e.line(), e.column()))
    })?;
    if d.version != VERSION {
        return Err(parse_err(format!(
            "{origin}: unsupported descriptor version {} (expected {VERSION})",
            d.version
        )));
    }
    Ok(d)
}

pub fn builtin(spec: &str) -> Result<GermDescriptor, CliError> {
    let (name, params) = catalog::parse_spec(spec)?;
    Ok(GermDescriptor {
        version: VERSION,
        germ: None,
        r: None,
        source: Source::Builtin { name, params },
        flags: Flags::default(),
        bound: None,
    })
}

fn mask_of(key: &str, r: usize) -> Result<u32, CliError> {
    let mut mask = 0u32;
    for part in key.split(',') {
        let i: usize = part
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("poincare key {key:?}: {part:?} is not a branch index")))?;
        if i == 0 || i > r {
            return Err(parse_err(format!(
                "poincare key {key:?}: branch {i} outside 1..={r}"
            )));
        }
        if mask & (1 << (i - 1)) != 0 {
            return Err(parse_err(format!("poincare key {key:?}: branch {i} repeated")));
        }
        mask |= 1 << (i - 1);
    }
    Ok(mask)
}

fn key_of(mask: u32) -> String {
    (0..32)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn series_from_spec(key: &str, dim: usize, s: &SeriesSpec) -> Result<RationalSeries, CliError> {
    let check = |v: &[u32]| {
        if v.len() == dim {
            Ok(LatticePoint::from_slice(v))
        } else {
            Err(parse_err(format!(
                "poincare {key:?}: exponent {v:?} has {} entries, expected {dim}",
                v.len()
            )))
        }
    };
    let terms = s
        .numerator
        .iter()
        .map(|t| Ok((check(&t.exp)?, t.coef)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let den = s
        .denominator
        .iter()
        .map(|a| check(a))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(RationalSeries::new(MultiPoly::from_terms(dim, terms)?, den)?)
}

fn spec_from_series(s: &RationalSeries) -> SeriesSpec {
    SeriesSpec {
        numerator: s
            .numerator()
            .terms()
            .map(|(e, c)| Term {
                exp: e.coords().to_vec(),
                coef: c,
            })
            .collect(),
        denominator: s.denominator().iter().map(|a| a.coords().to_vec()).collect(),
    }
}

fn require_r(d: &GermDescriptor) -> Result<usize, CliError> {
    d.r.ok_or_else(|| parse_err("descriptor needs \"r\" for this source"))
}

fn check_dim(what: &str, v: &[u32], r: usize) -> Result<LatticePoint, CliError> {
    if v.len() != r {
        return Err(parse_err(format!(
            "{what} {v:?} has {} coordinates but r = {r}",
            v.len()
        )));
    }
    Ok(LatticePoint::from_slice(v))
}

/// Resolves a descriptor; `bound_override` takes precedence over the file's `bound`.
pub fn load(d: GermDescriptor, bound_override: Option<Vec<u32>>) -> Result<Loaded, CliError> {
    let mut entry: Option<CatalogEntry> = None;
    let germ = match &d.source {
        Source::Builtin { name, params } => {
            let (e, g) = catalog::get(name, params)?;
            if let Some(r) = d.r {
                if r != g.r() {
                    return Err(parse_err(format!("r = {r} but {} has r = {}", e.name, g.r())));
                }
            }
            entry = Some(e);
            g
        }
        Source::Poincare(map) => {
            let r = require_r(&d)?;
            let mut series = SubcurveSeries::new();
            for (key, spec) in map {
                let mask = mask_of(key, r)?;
                let s = series_from_spec(key, mask.count_ones() as usize, spec)?;
                if series.insert(mask, s).is_some() {
                    return Err(parse_err(format!("poincare key {key:?} given twice")));
                }
            }
            germ_from_poincare(r, &series)?
        }
        Source::Semigroup {
            conductor,
            elements,
        } => {
            let r = require_r(&d)?;
            let c = check_dim("conductor", conductor, r)?;
            let els = elements
                .iter()
                .map(|e| check_dim("element", e, r))
                .collect::<Result<Vec<_>, _>>()?;
            Germ::from_semigroup(c, els)?
        }
        Source::Hilbert { bound, values } => {
            let r = require_r(&d)?;
            let b = check_dim("hilbert bound", bound, r)?;
            let mut grid = Grid::filled(b, 0i64);
            if values.len() != grid.len() {
                return Err(parse_err(format!(
                    "hilbert values: {} given, R(0,{}) has {} points",
                    values.len(),
                    grid.bound(),
                    grid.len()
                )));
            }
            for (i, &v) in values.iter().enumerate() {
                grid.set_at(i, v);
            }
            Germ::from_hilbert(&HilbertGrid::new(grid)?)?
        }
    };
    if let Some(g) = d.flags.gorenstein {
        if g != germ.is_gorenstein() {
            return Err(parse_err(format!(
                "flags.gorenstein = {g}, but the semigroup is {}symmetric",
                if germ.is_gorenstein() { "" } else { "not " }
            )));
        }
    }
    let plane = d
        .flags
        .plane
        .or(entry.as_ref().map(|e| e.plane))
        .unwrap_or(false);
    let name = d
        .germ
        .clone()
        .or(entry.as_ref().map(|e| e.name.clone()))
        .unwrap_or_else(|| "unnamed".to_string());
    let bound = bound_override
        .or(d.bound.clone())
        .map(|b| check_dim("bound", &b, germ.r()))
        .transpose()?;
    let mut descriptor = d;
    descriptor.germ = Some(name.clone());
    descriptor.r = Some(germ.r());
    if descriptor.flags.plane.is_none() && plane {
        descriptor.flags.plane = Some(true);
    }
    descriptor.bound = bound.as_ref().map(|b| b.coords().to_vec());
    Ok(Loaded {
        descriptor,
        germ,
        name,
        plane,
        bound,
    })
}

/// The explicit descriptor of a catalog entry.
pub fn export(entry: &CatalogEntry) -> GermDescriptor {
    let source = match &entry.source {
        GermSource::Poincare { series, .. } => Source::Poincare(
            series
                .iter()
                .map(|(&mask, s)| (key_of(mask), spec_from_series(s)))
                .collect(),
        ),
        GermSource::Semigroup {
            conductor,
            elements,
        } => Source::Semigroup {
            conductor: conductor.coords().to_vec(),
            elements: elements.iter().map(|e| e.coords().to_vec()).collect(),
        },
    };
    GermDescriptor {
        version: VERSION,
        germ: Some(entry.name.clone()),
        r: Some(entry.r()),
        source,
        flags: Flags {
            plane: Some(entry.plane),
            gorenstein: None,
        },
        bound: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_round_trip() {
        assert_eq!(mask_of("1,3", 3).unwrap(), 0b101);
        assert_eq!(key_of(0b101), "1,3");
        assert!(mask_of("0", 2).is_err());
        assert!(mask_of("1,1", 2).is_err());
        assert!(mask_of("x", 2).is_err());
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse("{\n  \"version\": 1,\n  \"source\": 3\n}", "f.json").unwrap_err();
        let msg = err.to_string();
        assert!(msg.starts_with("f.json:3:"), "{msg}");
    }

    #[test]
    fn two_sources_are_rejected() {
        let text = r#"{"version": 1, "r": 1, "source": {"semigroup": {"conductor": [0], "elements": [[0]]},
                      "builtin": {"name": "A", "params": [0]}}}"#;
        assert!(parse(text, "f").is_err());
    }

    #[test]
    fn exported_entries_reload() {
        for (name, params) in catalog::shipped() {
            let (e, g) = catalog::get(name, &params).unwrap();
            let text = serde_json::to_string(&export(&e)).unwrap();
            let back = load(parse(&text, "x").unwrap(), None).unwrap();
            assert_eq!(back.germ, g, "{}", e.name);
            assert_eq!(back.name, e.name);
            assert!(back.plane);
        }
    }

    #[test]
    fn hilbert_source() {
        // E_6: S = <3,4>, h on [0, 9]
        let values = vec![0, 1, 1, 1, 2, 3, 3, 4, 5, 6];
        let d = GermDescriptor {
            version: VERSION,
            germ: None,
            r: Some(1),
            source: Source::Hilbert {
                bound: vec![9],
                values,
            },
            flags: Flags {
                plane: None,
                gorenstein: Some(true),
            },
            bound: None,
        };
        let l = load(d, None).unwrap();
        assert_eq!(l.germ, Germ::numerical(&[3, 4]).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_a_parse_error() {
        let text = r#"{"version": 1, "r": 2, "source": {"semigroup": {"conductor": [4], "elements": [[0]]}}}"#;
        let err = load(parse(text, "f").unwrap(), None).err().unwrap();
        assert!(matches!(err, CliError::Parse(_)));
    }
}
