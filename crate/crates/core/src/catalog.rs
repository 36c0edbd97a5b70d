//! Built-in germs: the ADE and T_{p,q} families, the exceptional unimodal germs and two
//! bimodal examples.
//!
//! Families with closed-form subcurve Poincaré series (A_{odd}, D_n, T_{p,q}) are built
//! from those series; the others from their semigroup below the conductor. Every entry
//! also carries branch parametrizations of a plane model, which tests use as an
//! independent oracle for the Hilbert function.

use serde::{Deserialize, Serialize};

use crate::classifier::{CmType, FiniteSubtype, Growth};
use crate::error::{Error, Result};
use crate::lattice::{Germ, LatticePoint};
use crate::series::{germ_from_poincare, MultiPoly, RationalSeries, SubcurveSeries};

/// How the germ is built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GermSource {
    Poincare { r: usize, series: SubcurveSeries },
    Semigroup {
        conductor: LatticePoint,
        elements: Vec<LatticePoint>,
    },
}

/// A branch t ↦ (x(t), y(t)); each coordinate is a list of (coefficient, exponent).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parametrization {
    pub x: Vec<(i64, u32)>,
    pub y: Vec<(i64, u32)>,
}

impl Parametrization {
    fn mono(cx: i64, ex: u32, cy: i64, ey: u32) -> Self {
        let term = |c: i64, e: u32| if c == 0 { Vec::new() } else { vec![(c, e)] };
        Parametrization {
            x: term(cx, ex),
            y: term(cy, ey),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub multiplicity: LatticePoint,
    pub conductor: LatticePoint,
    pub delta: i64,
    pub milnor: i64,
    pub min_weight: i64,
    pub cmtype: CmType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    /// Display name, e.g. `T_{3,7}`.
    pub name: String,
    /// Lookup key and parameters, e.g. `("T", [3, 7])`.
    pub family: String,
    pub params: Vec<u32>,
    pub plane: bool,
    pub source: GermSource,
    pub branches: Vec<Parametrization>,
    pub expected: Expected,
    /// Data computed from a normal form rather than taken from closed formulas.
    pub derived: bool,
    pub provenance: &'static str,
}

impl CatalogEntry {
    pub fn r(&self) -> usize {
        self.expected.conductor.dim()
    }

    /// Builds the germ and checks m, c and δ against the recorded metadata.
    pub fn germ(&self) -> Result<Germ> {
        let g = match &self.source {
            GermSource::Poincare { r, series } => germ_from_poincare(*r, series)?,
            GermSource::Semigroup {
                conductor,
                elements,
            } => Germ::from_semigroup(conductor.clone(), elements.iter().cloned())?,
        };
        let e = &self.expected;
        if g.multiplicity() != &e.multiplicity || g.conductor() != &e.conductor || g.delta() != e.delta {
            return Err(Error::InvariantViolated(format!(
                "{}: recomputed m={}, c={}, delta={} but the catalog records m={}, c={}, delta={}",
                self.name,
                g.multiplicity(),
                g.conductor(),
                g.delta(),
                e.multiplicity,
                e.conductor,
                e.delta
            )));
        }
        if 2 * e.delta != e.milnor + self.r() as i64 - 1 {
            return Err(Error::InvariantViolated(format!(
                "{}: Milnor number {} is inconsistent with delta {}",
                self.name, e.milnor, e.delta
            )));
        }
        Ok(g)
    }
}

/// A family (or single germ) and its parameter range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyInfo {
    pub key: &'static str,
    pub display: &'static str,
    pub params: &'static str,
}

pub fn list() -> Vec<FamilyInfo> {
    let f = |key, display, params| FamilyInfo {
        key,
        display,
        params,
    };
    vec![
        f("A", "A_n", "n >= 0"),
        f("D", "D_n", "n >= 4"),
        f("E6", "E_6", "-"),
        f("E7", "E_7", "-"),
        f("E8", "E_8", "-"),
        f("T", "T_{4,4}", "p=4, q=4"),
        f("T", "T_{3,6}", "p=3, q=6"),
        f("T", "T_{3,2b+3}", "p=3, q=2b+3 with b >= 2"),
        f("T", "T_{2a+3,2b+3}", "p=2a+3, q=2b+3 with a, b >= 1"),
        f("E12", "E_12", "-"),
        f("E13", "E_13", "-"),
        f("E14", "E_14", "-"),
        f("Z11", "Z_11", "-"),
        f("Z12", "Z_12", "-"),
        f("Z13", "Z_13", "-"),
        f("W12", "W_12", "-"),
        f("W13", "W_13", "-"),
        f("W10", "W_{1,0}", "-"),
        f("E18", "E_18", "-"),
    ]
}

/// Parses `NAME[,p1[,p2]]`, e.g. `T,3,7` or `E12`.
pub fn parse_spec(spec: &str) -> Result<(String, Vec<u32>)> {
    let mut parts = spec.split(',').map(str::trim);
    let name = parts.next().unwrap_or_default().to_string();
    let params = parts
        .map(|s| {
            s.parse::<u32>().map_err(|_| Error::BadParams {
                name: name.clone(),
                reason: format!("parameter {s:?} is not a natural number"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((name, params))
}

/// Representative instances of every family, used by the property and acceptance suites.
pub fn shipped() -> Vec<(&'static str, Vec<u32>)> {
    vec![
        ("A", vec![0]),
        ("A", vec![1]),
        ("A", vec![2]),
        ("A", vec![3]),
        ("A", vec![4]),
        ("A", vec![5]),
        ("D", vec![4]),
        ("D", vec![5]),
        ("D", vec![6]),
        ("D", vec![7]),
        ("D", vec![8]),
        ("E6", vec![]),
        ("E7", vec![]),
        ("E8", vec![]),
        ("T", vec![4, 4]),
        ("T", vec![3, 6]),
        ("T", vec![3, 7]),
        ("T", vec![3, 9]),
        ("T", vec![5, 5]),
        ("T", vec![5, 7]),
        ("T", vec![7, 7]),
        ("T", vec![7, 9]),
        ("E12", vec![]),
        ("E13", vec![]),
        ("E14", vec![]),
        ("Z11", vec![]),
        ("Z12", vec![]),
        ("Z13", vec![]),
        ("W12", vec![]),
        ("W13", vec![]),
        ("W10", vec![]),
        ("E18", vec![]),
    ]
}

fn p(v: &[u32]) -> LatticePoint {
    LatticePoint::from_slice(v)
}

fn series1(num: &[(u32, i64)], den: &[u32]) -> RationalSeries {
    RationalSeries::new(
        MultiPoly::from_terms(1, num.iter().map(|&(e, c)| (p(&[e]), c))).expect("r=1"),
        den.iter().map(|&a| p(&[a])).collect(),
    )
    .expect("valid series")
}

fn series(r: usize, num: &[(Vec<u32>, i64)], den: &[Vec<u32>]) -> RationalSeries {
    RationalSeries::new(
        MultiPoly::from_terms(r, num.iter().map(|(e, c)| (p(e), *c))).expect("dims"),
        den.iter().map(|a| p(a)).collect(),
    )
    .expect("valid series")
}

fn smooth_branch() -> RationalSeries {
    RationalSeries::geometric(1)
}

fn cusp_branch(k: u32) -> RationalSeries {
    // ⟨2, 2k+1⟩: (1 + t^{2k+1})/(1 − t²)
    series1(&[(0, 1), (2 * k + 1, 1)], &[2])
}

fn bad(name: &str, reason: &str) -> Error {
    Error::BadParams {
        name: name.to_string(),
        reason: reason.to_string(),
    }
}

fn no_params(name: &str, params: &[u32]) -> Result<()> {
    if params.is_empty() {
        Ok(())
    } else {
        Err(bad(name, "takes no parameters"))
    }
}

fn one_param(name: &str, params: &[u32]) -> Result<u32> {
    match params {
        [n] => Ok(*n),
        _ => Err(bad(name, "takes exactly one parameter")),
    }
}

struct Builder {
    name: String,
    family: &'static str,
    params: Vec<u32>,
    derived: bool,
    provenance: &'static str,
}

impl Builder {
    fn new(name: String, family: &'static str, params: &[u32]) -> Self {
        Builder {
            name,
            family,
            params: params.to_vec(),
            derived: false,
            provenance: "closed-form subcurve Poincare series",
        }
    }

    fn derived(mut self, provenance: &'static str) -> Self {
        self.derived = true;
        self.provenance = provenance;
        self
    }

    fn finish(
        self,
        source: GermSource,
        branches: Vec<Parametrization>,
        expected: Expected,
    ) -> CatalogEntry {
        CatalogEntry {
            name: self.name,
            family: self.family.to_string(),
            params: self.params,
            plane: true,
            source,
            branches,
            expected,
            derived: self.derived,
            provenance: self.provenance,
        }
    }
}

fn semigroup_source(conductor: &[u32], elements: &[&[u32]]) -> GermSource {
    GermSource::Semigroup {
        conductor: p(conductor),
        elements: elements.iter().map(|e| p(e)).collect(),
    }
}

/// The table of ⟨gens⟩ below its conductor.
fn numerical_source(gens: &[u32]) -> GermSource {
    let t = crate::lattice::numerical_semigroup(gens).expect("valid generators");
    let conductor = t.conductor().expect("numerical semigroup has a conductor").clone();
    let elements = t.elements().into_iter().filter(|e| e.leq(&conductor)).collect();
    GermSource::Semigroup {
        conductor,
        elements,
    }
}

fn expected(m: &[u32], c: &[u32], delta: i64, milnor: i64, min_weight: i64, cmtype: CmType) -> Expected {
    Expected {
        multiplicity: p(m),
        conductor: p(c),
        delta,
        milnor,
        min_weight,
        cmtype,
    }
}

/// Looks up an entry and verifies its metadata.
pub fn get(name: &str, params: &[u32]) -> Result<(CatalogEntry, Germ)> {
    let e = entry(name, params)?;
    let g = e.germ()?;
    Ok((e, g))
}

/// Looks up an entry without building the germ.
pub fn entry(name: &str, params: &[u32]) -> Result<CatalogEntry> {
    let fin_a = CmType::Finite(FiniteSubtype::A);
    let fin_d = CmType::Finite(FiniteSubtype::D);
    let fin_e = CmType::Finite(FiniteSubtype::E);
    match name {
        "A" => {
            let n = one_param(name, params)?;
            let b = Builder::new(format!("A_{n}"), "A", params);
            if n == 0 {
                return Ok(b.derived_semigroup("smooth germ").finish(
                    numerical_source(&[1]),
                    vec![Parametrization::mono(1, 1, 0, 0)],
                    expected(&[1], &[0], 0, 0, 0, fin_a),
                ));
            }
            if n % 2 == 0 {
                let k = n / 2;
                return Ok(b.derived_semigroup("semigroup <2, n+1>").finish(
                    numerical_source(&[2, n + 1]),
                    vec![Parametrization::mono(1, 2, 1, n + 1)],
                    expected(&[2], &[n], k as i64, n as i64, 0, fin_a),
                ));
            }
            let k = n.div_ceil(2);
            let mut s = SubcurveSeries::new();
            s.insert(0b01, smooth_branch());
            s.insert(0b10, smooth_branch());
            s.insert(
                0b11,
                series(2, &[(vec![0, 0], 1), (vec![k, k], -1)], &[vec![1, 1]]),
            );
            Ok(b.finish(
                GermSource::Poincare { r: 2, series: s },
                vec![
                    Parametrization::mono(1, 1, 1, k),
                    Parametrization::mono(1, 1, -1, k),
                ],
                expected(&[1, 1], &[k, k], k as i64, n as i64, 0, fin_a),
            ))
        }
        "D" => {
            let n = one_param(name, params)?;
            if n < 4 {
                return Err(bad(name, "D_n needs n >= 4"));
            }
            let b = Builder::new(format!("D_{n}"), "D", params);
            if n % 2 == 1 {
                let mut s = SubcurveSeries::new();
                s.insert(0b01, series1(&[(0, 1), (n - 2, 1)], &[2]));
                s.insert(0b10, smooth_branch());
                s.insert(
                    0b11,
                    series(2, &[(vec![0, 0], 1), (vec![n - 2, 1], 1)], &[]),
                );
                return Ok(b.finish(
                    GermSource::Poincare { r: 2, series: s },
                    vec![
                        Parametrization::mono(1, n - 2, 1, 2),
                        Parametrization::mono(1, 1, 0, 0),
                    ],
                    expected(&[2, 1], &[n - 1, 2], (n as i64 + 1) / 2, n as i64, -1, fin_d),
                ));
            }
            let k = n / 2;
            let mut s = SubcurveSeries::new();
            for i in 0..3 {
                s.insert(1 << i, smooth_branch());
            }
            s.insert(
                0b011,
                series(
                    2,
                    &[(vec![0, 0], 1), (vec![k - 1, k - 1], -1)],
                    &[vec![1, 1]],
                ),
            );
            s.insert(0b101, series(2, &[(vec![0, 0], 1)], &[]));
            s.insert(0b110, series(2, &[(vec![0, 0], 1)], &[]));
            s.insert(
                0b111,
                series(3, &[(vec![0, 0, 0], 1), (vec![k - 1, k - 1, 1], -1)], &[]),
            );
            Ok(b.finish(
                GermSource::Poincare { r: 3, series: s },
                vec![
                    Parametrization::mono(1, k - 1, 1, 1),
                    Parametrization::mono(-1, k - 1, 1, 1),
                    Parametrization::mono(1, 1, 0, 0),
                ],
                expected(&[1, 1, 1], &[k, k, 2], k as i64 + 1, n as i64, -1, fin_d),
            ))
        }
        "E6" => {
            no_params(name, params)?;
            Ok(Builder::new("E_6".into(), "E6", params)
                .derived_semigroup("semigroup <3, 4>")
                .finish(
                    numerical_source(&[3, 4]),
                    vec![Parametrization::mono(1, 3, 1, 4)],
                    expected(&[3], &[6], 3, 6, -1, fin_e),
                ))
        }
        "E7" => {
            no_params(name, params)?;
            Ok(Builder::new("E_7".into(), "E7", params)
                .derived_semigroup("semigroup elements read off the weight table")
                .finish(
                    semigroup_source(
                        &[5, 3],
                        &[&[0, 0], &[2, 1], &[3, 2], &[3, 3], &[4, 2], &[5, 3]],
                    ),
                    vec![
                        Parametrization::mono(1, 3, 1, 2),
                        Parametrization::mono(0, 0, 1, 1),
                    ],
                    expected(&[2, 1], &[5, 3], 4, 7, -1, fin_e),
                ))
        }
        "E8" => {
            no_params(name, params)?;
            Ok(Builder::new("E_8".into(), "E8", params)
                .derived_semigroup("semigroup <3, 5>")
                .finish(
                    numerical_source(&[3, 5]),
                    vec![Parametrization::mono(1, 3, 1, 5)],
                    expected(&[3], &[8], 4, 8, -1, fin_e),
                ))
        }
        "T" => t_entry(params),
        "E12" | "E13" | "E14" | "Z11" | "Z12" | "Z13" | "W12" | "W13" | "W10" | "E18" => {
            no_params(name, params)?;
            Ok(exceptional(name))
        }
        _ => Err(Error::UnknownGerm(name.to_string())),
    }
}

impl Builder {
    fn derived_semigroup(mut self, provenance: &'static str) -> Self {
        self.provenance = provenance;
        self
    }
}

fn t_entry(params: &[u32]) -> Result<CatalogEntry> {
    let (pp, qq) = match params {
        [a, b] => (*a, *b),
        _ => return Err(bad("T", "takes two parameters p, q")),
    };
    let tame_f = CmType::Tame(Growth::Finite);
    let tame_i = CmType::Tame(Growth::Infinite);
    let b = Builder::new(format!("T_{{{pp},{qq}}}"), "T", params);
    let milnor = (pp + qq + 1) as i64;
    match (pp, qq) {
        (4, 4) => {
            let mut s = SubcurveSeries::new();
            for mask in 1u32..16 {
                let k = mask.count_ones() as usize;
                let ser = match k {
                    1 => smooth_branch(),
                    2 => series(2, &[(vec![0, 0], 1)], &[]),
                    3 => series(3, &[(vec![0, 0, 0], 1), (vec![1, 1, 1], -1)], &[]),
                    _ => series(
                        4,
                        &[
                            (vec![0, 0, 0, 0], 1),
                            (vec![1, 1, 1, 1], -2),
                            (vec![2, 2, 2, 2], 1),
                        ],
                        &[],
                    ),
                };
                s.insert(mask, ser);
            }
            Ok(b.finish(
                GermSource::Poincare { r: 4, series: s },
                [1i64, -1, 2, -2]
                    .iter()
                    .map(|&a| Parametrization::mono(1, 1, a, 1))
                    .collect(),
                expected(&[1, 1, 1, 1], &[3, 3, 3, 3], 6, milnor, -2, tame_f),
            ))
        }
        (3, 6) => {
            let mut s = SubcurveSeries::new();
            for mask in 1u32..8 {
                let ser = match mask.count_ones() {
                    1 => smooth_branch(),
                    2 => series(2, &[(vec![0, 0], 1), (vec![1, 1], 1)], &[]),
                    _ => series(
                        3,
                        &[
                            (vec![0, 0, 0], 1),
                            (vec![2, 2, 2], -2),
                            (vec![4, 4, 4], 1),
                        ],
                        &[vec![1, 1, 1]],
                    ),
                };
                s.insert(mask, ser);
            }
            Ok(b.finish(
                GermSource::Poincare { r: 3, series: s },
                [1i64, 2, 3]
                    .iter()
                    .map(|&a| Parametrization::mono(a, 2, 1, 1))
                    .collect(),
                expected(&[1, 1, 1], &[4, 4, 4], 6, milnor, -2, tame_f),
            ))
        }
        (3, q) if q >= 7 && q % 2 == 1 => {
            let bb = (q - 3) / 2;
            let mut s = SubcurveSeries::new();
            s.insert(0b01, cusp_branch(bb));
            s.insert(0b10, smooth_branch());
            // (1 + t1² t2)(1 + t1^{2b+1} t2²)
            s.insert(
                0b11,
                series(
                    2,
                    &[
                        (vec![0, 0], 1),
                        (vec![2, 1], 1),
                        (vec![2 * bb + 1, 2], 1),
                        (vec![2 * bb + 3, 3], 1),
                    ],
                    &[],
                ),
            );
            Ok(b.finish(
                GermSource::Poincare { r: 2, series: s },
                vec![
                    Parametrization::mono(1, 2 * bb + 1, -1, 2),
                    Parametrization::mono(-1, 2, 1, 1),
                ],
                expected(&[2, 1], &[2 * bb + 4, 4], bb as i64 + 4, milnor, -2, tame_i),
            ))
        }
        (p1, q1) if p1 >= 5 && q1 >= 5 && p1 % 2 == 1 && q1 % 2 == 1 => {
            let a = (p1 - 3) / 2;
            let bb = (q1 - 3) / 2;
            let mut s = SubcurveSeries::new();
            s.insert(0b01, cusp_branch(a));
            s.insert(0b10, cusp_branch(bb));
            // (1 + t1^{2a+1} t2²)(1 + t1² t2^{2b+1})
            s.insert(
                0b11,
                series(
                    2,
                    &[
                        (vec![0, 0], 1),
                        (vec![2 * a + 1, 2], 1),
                        (vec![2, 2 * bb + 1], 1),
                        (vec![2 * a + 3, 2 * bb + 3], 1),
                    ],
                    &[],
                ),
            );
            Ok(b.finish(
                GermSource::Poincare { r: 2, series: s },
                vec![
                    Parametrization::mono(-1, 2, 1, 2 * a + 1),
                    Parametrization::mono(1, 2 * bb + 1, -1, 2),
                ],
                expected(
                    &[2, 2],
                    &[2 * a + 4, 2 * bb + 4],
                    (a + bb) as i64 + 4,
                    milnor,
                    -2,
                    tame_i,
                ),
            ))
        }
        _ => Err(bad(
            "T",
            "supported: (4,4), (3,6), (3,q) with q odd >= 7, (p,q) with p,q odd >= 5",
        )),
    }
}

fn exceptional(name: &str) -> CatalogEntry {
    let wild = CmType::Wild;
    let prov = "semigroup of the normal form, computed from the branch parametrizations";
    let b = |display: &str| Builder::new(display.to_string(), static_key(name), &[]).derived(prov);
    let pm = Parametrization::mono;
    match name {
        "E12" => b("E_12").finish(
            numerical_source(&[3, 7]),
            vec![pm(1, 7, 1, 3)],
            expected(&[3], &[12], 6, 12, -2, wild),
        ),
        "E13" => b("E_13").finish(
            semigroup_source(
                &[9, 5],
                &[
                    &[0, 0],
                    &[2, 1],
                    &[4, 2],
                    &[5, 3],
                    &[5, 4],
                    &[5, 5],
                    &[6, 3],
                    &[7, 4],
                    &[7, 5],
                    &[8, 4],
                    &[9, 5],
                ],
            ),
            vec![pm(1, 5, 1, 2), pm(0, 0, 1, 1)],
            expected(&[2, 1], &[9, 5], 7, 13, -2, wild),
        ),
        "E14" => b("E_14").finish(
            numerical_source(&[3, 8]),
            vec![pm(1, 8, 1, 3)],
            expected(&[3], &[14], 7, 14, -2, wild),
        ),
        "Z11" => b("Z_11").finish(
            semigroup_source(
                &[9, 3],
                &[
                    &[0, 0],
                    &[3, 1],
                    &[3, 2],
                    &[3, 3],
                    &[4, 1],
                    &[6, 2],
                    &[6, 3],
                    &[7, 2],
                    &[7, 3],
                    &[8, 2],
                    &[9, 3],
                ],
            ),
            vec![pm(1, 4, 1, 3), pm(1, 1, 0, 0)],
            expected(&[3, 1], &[9, 3], 6, 11, -2, wild),
        ),
        "Z12" => b("Z_12").finish(
            semigroup_source(
                &[7, 4, 3],
                &[
                    &[0, 0, 0],
                    &[2, 1, 1],
                    &[2, 1, 2],
                    &[2, 1, 3],
                    &[3, 2, 1],
                    &[3, 3, 1],
                    &[3, 4, 1],
                    &[4, 2, 2],
                    &[4, 2, 3],
                    &[5, 3, 2],
                    &[5, 3, 3],
                    &[5, 4, 2],
                    &[5, 4, 3],
                    &[6, 3, 2],
                    &[6, 3, 3],
                    &[6, 4, 2],
                    &[7, 3, 2],
                    &[7, 4, 3],
                ],
            ),
            vec![pm(1, 3, 1, 2), pm(0, 0, 1, 1), pm(1, 1, 0, 0)],
            expected(&[2, 1, 1], &[7, 4, 3], 7, 12, -2, wild),
        ),
        "Z13" => b("Z_13").finish(
            semigroup_source(
                &[11, 3],
                &[
                    &[0, 0],
                    &[3, 1],
                    &[3, 2],
                    &[3, 3],
                    &[5, 1],
                    &[6, 2],
                    &[6, 3],
                    &[8, 2],
                    &[8, 3],
                    &[9, 2],
                    &[9, 3],
                    &[10, 2],
                    &[11, 3],
                ],
            ),
            vec![pm(1, 5, 1, 3), pm(1, 1, 0, 0)],
            expected(&[3, 1], &[11, 3], 7, 13, -2, wild),
        ),
        "W12" => b("W_12").finish(
            numerical_source(&[4, 5]),
            vec![pm(1, 5, 1, 4)],
            expected(&[4], &[12], 6, 12, -2, wild),
        ),
        "W13" => b("W_13").finish(
            semigroup_source(
                &[10, 4],
                &[
                    &[0, 0],
                    &[3, 1],
                    &[4, 2],
                    &[4, 3],
                    &[4, 4],
                    &[6, 2],
                    &[7, 3],
                    &[7, 4],
                    &[8, 3],
                    &[8, 4],
                    &[9, 3],
                    &[10, 4],
                ],
            ),
            vec![pm(1, 4, 1, 3), pm(0, 0, 1, 1)],
            expected(&[3, 1], &[10, 4], 7, 13, -2, wild),
        ),
        "W10" => b("W_{1,0}").finish(
            semigroup_source(
                &[8, 8],
                &[
                    &[0, 0],
                    &[2, 2],
                    &[3, 3],
                    &[4, 4],
                    &[5, 5],
                    &[6, 6],
                    &[6, 7],
                    &[6, 8],
                    &[7, 6],
                    &[7, 7],
                    &[8, 6],
                    &[8, 8],
                ],
            ),
            vec![pm(4, 3, 2, 2), pm(2, 3, 2, 2)],
            expected(&[2, 2], &[8, 8], 8, 15, -2, wild),
        ),
        "E18" => b("E_18").finish(
            numerical_source(&[3, 10]),
            vec![pm(1, 10, 1, 3)],
            expected(&[3], &[18], 9, 18, -3, wild),
        ),
        _ => unreachable!("checked by caller"),
    }
}

fn static_key(name: &str) -> &'static str {
    match name {
        "E12" => "E12",
        "E13" => "E13",
        "E14" => "E14",
        "Z11" => "Z11",
        "Z12" => "Z12",
        "Z13" => "Z13",
        "W12" => "W12",
        "W13" => "W13",
        "W10" => "W10",
        _ => "E18",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_shipped_entry_loads() {
        for (name, params) in shipped() {
            let (e, g) = get(name, &params).unwrap_or_else(|err| panic!("{name} {params:?}: {err}"));
            assert_eq!(g.r(), e.branches.len(), "{}", e.name);
        }
    }

    #[test]
    fn lookups() {
        let (e, g) = get("D", &[5]).unwrap();
        assert_eq!(e.name, "D_5");
        assert_eq!(g.conductor(), &p(&[4, 2]));
        assert_eq!(g.delta(), 3);
        let (_, a0) = get("A", &[0]).unwrap();
        assert_eq!(a0, Germ::smooth());
        let (e12, g12) = get("E12", &[]).unwrap();
        assert_eq!(g12, Germ::numerical(&[3, 7]).unwrap());
        assert!(e12.derived);
        assert!(matches!(get("X9", &[]), Err(Error::UnknownGerm(_))));
        assert!(matches!(get("D", &[3]), Err(Error::BadParams { .. })));
        assert!(matches!(get("T", &[3, 8]), Err(Error::BadParams { .. })));
        assert!(matches!(get("E6", &[1]), Err(Error::BadParams { .. })));
    }

    #[test]
    fn listing() {
        let l = list();
        assert!(l.iter().any(|f| f.display == "T_{3,2b+3}"));
        for k in ["A", "D", "E6", "E7", "E8", "E12", "E13", "E14", "Z11", "Z12", "Z13", "W12", "W13"] {
            assert!(l.iter().any(|f| f.key == k), "{k}");
        }
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(parse_spec("T,3,7").unwrap(), ("T".to_string(), vec![3, 7]));
        assert_eq!(parse_spec("E12").unwrap(), ("E12".to_string(), vec![]));
        assert!(parse_spec("D,x").is_err());
    }
}
