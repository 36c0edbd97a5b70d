//! Cohen-Macaulay type by three independent routes: probe-point weights, lattice
//! homology with minimal spectral cycles, and the univariate motivic series.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cubical::lattice_homology;
use crate::error::{Error, Result};
use crate::lattice::{Germ, LatticePoint, WeightGrid};
use crate::motivic::{germ_omega_substitution, germ_univariate_motivic, QPoly};
use crate::spectral::{germ_minimal_spectral_cycles, has_maximal_rank, MinimalCycleGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FiniteSubtype {
    /// A simple germ of type A_n.
    A,
    /// Dominates some D_n but no A_n.
    D,
    /// Dominates some E_6, E_7 or E_8 but no A_n or D_n.
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Growth {
    Finite,
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmType {
    Finite(FiniteSubtype),
    Tame(Growth),
    Wild,
}

impl CmType {
    pub fn is_finite(&self) -> bool {
        matches!(self, CmType::Finite(_))
    }

    pub fn is_tame(&self) -> bool {
        matches!(self, CmType::Tame(_))
    }
}

impl fmt::Display for CmType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmType::Finite(FiniteSubtype::A) => write!(f, "finite (A)"),
            CmType::Finite(FiniteSubtype::D) => write!(f, "finite (D-dominating)"),
            CmType::Finite(FiniteSubtype::E) => write!(f, "finite (E-dominating)"),
            CmType::Tame(Growth::Finite) => write!(f, "tame (finite growth)"),
            CmType::Tame(Growth::Infinite) => write!(f, "tame (infinite growth)"),
            CmType::Wild => write!(f, "wild"),
        }
    }
}

// ---------------------------------------------------------------------------
// Pointwise route

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointwiseEvidence {
    pub w_m: i64,
    pub w_2m: i64,
    pub w_m_plus_e: i64,
    /// (name, value) for W1a, W1b, W2a, W2b, W3; empty for finite germs.
    pub conditions: Vec<(String, bool)>,
    pub cmtype: CmType,
}

/// w₀(m) ≥ −1 and w₀(2m) ≥ 0.
pub fn classify_finite_pointwise(w: &WeightGrid) -> Result<bool> {
    let m = w.require_multiplicity()?;
    Ok(w.value(m)? >= -1 && w.value(&m.scale(2))? >= 0)
}

/// For a finite germ: A if |m| ≤ 2; otherwise D when w₀(m + e) ≥ 3 − r, else E.
pub fn classify_finite_subtype_pointwise(w: &WeightGrid) -> Result<FiniteSubtype> {
    let m = w.require_multiplicity()?;
    if m.norm() <= 2 {
        return Ok(FiniteSubtype::A);
    }
    let r = w.r() as i64;
    let e = LatticePoint::ones(w.r());
    Ok(if w.value(&m.add(&e))? >= 3 - r {
        FiniteSubtype::D
    } else {
        FiniteSubtype::E
    })
}

/// Conditions W1a–W3 for a germ of infinite type. W2b is only evaluated when
/// |m| = 4 and m_i = 1, since it holds automatically otherwise.
pub fn tame_weight_conditions(w: &WeightGrid) -> Result<Vec<(String, bool)>> {
    let m = w.require_multiplicity()?.clone();
    let r = w.r();
    let e = LatticePoint::ones(r);
    let mn = m.norm();
    let mut out = Vec::new();
    out.push(("W1a".to_string(), w.value(&m)? >= -2));
    let mut w1b = true;
    for i in 0..r {
        let mi = LatticePoint::unit(r, i).scale(m.get(i));
        w1b &= w.value(&mi)? >= 0;
    }
    out.push(("W1b".to_string(), w1b));
    out.push((
        "W2a".to_string(),
        w.value(&m.add(&e))? >= mn - r as i64 - 2,
    ));
    let mut w2b = true;
    if mn == 4 {
        for i in 0..r {
            let mi = m.get(i);
            if mi != 1 {
                continue;
            }
            let p = m.add(&e).with_coord(i, 0);
            w2b &= w.value(&p)? > mn - mi as i64 - r as i64;
        }
    }
    out.push(("W2b".to_string(), w2b));
    let w3 = if mn == 3 {
        w.value(&m.scale(2).add(&e))? > w.value(&m.add(&e))?
    } else {
        true
    };
    out.push(("W3".to_string(), w3));
    Ok(out)
}

pub fn classify_tame_weights(w: &WeightGrid) -> Result<bool> {
    Ok(tame_weight_conditions(w)?.iter().all(|(_, b)| *b))
}

/// Growth of a tame germ from weights: for |m| = 4 finite iff r = 4 and
/// w₀(m + e^i + e^j) = 0 for all i < j; for |m| = 3 finite iff r = 3, w₀(2m) = −2 and
/// w₀(2m + e^i + e^j) = 0 for all i < j.
pub fn growth_pointwise(w: &WeightGrid) -> Result<Growth> {
    let m = w.require_multiplicity()?.clone();
    let r = w.r();
    let (base, need_r) = match m.norm() {
        4 => (m.clone(), 4),
        3 => {
            if w.value(&m.scale(2))? != -2 {
                return Ok(Growth::Infinite);
            }
            (m.scale(2), 3)
        }
        _ => return Ok(Growth::Infinite),
    };
    if r != need_r {
        return Ok(Growth::Infinite);
    }
    for i in 0..r {
        for j in i + 1..r {
            let p = base.plus_unit(i).plus_unit(j);
            if w.value(&p)? != 0 {
                return Ok(Growth::Infinite);
            }
        }
    }
    Ok(Growth::Finite)
}

pub fn classify_pointwise(g: &Germ) -> Result<PointwiseEvidence> {
    let w = g.weights(&g.default_bound())?;
    let m = w.require_multiplicity()?.clone();
    let e = LatticePoint::ones(g.r());
    let w_m = w.value(&m)?;
    let w_2m = w.value(&m.scale(2))?;
    let w_m_plus_e = w.value(&m.add(&e))?;
    let (conditions, cmtype) = if classify_finite_pointwise(&w)? {
        (Vec::new(), CmType::Finite(classify_finite_subtype_pointwise(&w)?))
    } else {
        let conds = tame_weight_conditions(&w)?;
        let tame = conds.iter().all(|(_, b)| *b);
        let t = if tame {
            CmType::Tame(growth_pointwise(&w)?)
        } else {
            CmType::Wild
        };
        (conds, t)
    };
    Ok(PointwiseEvidence {
        w_m,
        w_2m,
        w_m_plus_e,
        conditions,
        cmtype,
    })
}

// ---------------------------------------------------------------------------
// Homological route

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologicalEvidence {
    pub min_weight: i64,
    /// rank 𝔐_{1,0} when defined.
    pub m_1_0: Option<usize>,
    /// rank 𝔐_{1,−1} when defined.
    pub m_1_neg1: Option<usize>,
    /// Maximal rank C(|m| − 1, 1) for 𝔐_{1,−1}.
    pub max_rank: usize,
    pub branch_min_weights: Vec<i64>,
    /// Finite subtype of each Ĉ_i (`None` when Ĉ_i is not finite or was skipped).
    pub complement_subtypes: Vec<Option<FiniteSubtype>>,
    pub cmtype: CmType,
}

fn homology_min_weight(g: &Germ) -> Result<i64> {
    Ok(lattice_homology(&g.weights(g.conductor())?)?.min_weight)
}

/// 𝔐_{k,n}, or `None` if undefined for this multiplicity.
fn minimal_cycles_opt(g: &Germ, k: usize, n: i64) -> Result<Option<MinimalCycleGroup>> {
    match germ_minimal_spectral_cycles(g, k, n) {
        Ok(grp) => Ok(Some(grp)),
        Err(Error::UndefinedWeight { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn finite_subtype_homological(g: &Germ, min_w: i64) -> Result<Option<FiniteSubtype>> {
    Ok(match min_w {
        0 => Some(FiniteSubtype::A),
        -1 => {
            let nonzero = minimal_cycles_opt(g, 1, 0)?.is_some_and(|x| x.is_nonzero());
            Some(if nonzero {
                FiniteSubtype::D
            } else {
                FiniteSubtype::E
            })
        }
        _ => None,
    })
}

/// Tameness conditions (a)–(d). With `shortcuts`, (b) is taken as satisfied when
/// |m| = 4 and r > 2, and (d) is only evaluated when |m| = 4 and C_i is smooth.
fn tame_homological(
    g: &Germ,
    min_w: i64,
    m_1_neg1: Option<&MinimalCycleGroup>,
    shortcuts: bool,
) -> Result<(bool, Vec<i64>, Vec<Option<FiniteSubtype>>)> {
    let r = g.r();
    let mn = g.multiplicity().norm();
    let a = min_w == -2;
    let b = (shortcuts && a && mn == 4 && r > 2) || m_1_neg1.is_some_and(|x| x.is_nonzero());
    let mut branch_min = Vec::with_capacity(r);
    for i in 0..r {
        branch_min.push(homology_min_weight(&g.branch(i)?)?);
    }
    let c = branch_min.iter().all(|&x| x == 0);
    let mut comps = Vec::with_capacity(r);
    let mut d = true;
    for i in 0..r {
        let skip = shortcuts && a && (mn != 4 || g.multiplicity().get(i) != 1);
        let sub = if skip {
            None
        } else if let Some(ci) = g.complement(i)? {
            let mw = homology_min_weight(&ci)?;
            finite_subtype_homological(&ci, mw)?
        } else {
            None
        };
        if !skip && r > 1 {
            d &= matches!(sub, Some(FiniteSubtype::A) | Some(FiniteSubtype::D));
        }
        comps.push(sub);
    }
    Ok((a && b && c && d, branch_min, comps))
}

pub fn classify_homological(g: &Germ) -> Result<HomologicalEvidence> {
    let min_w = homology_min_weight(g)?;
    let mn = g.multiplicity().norm() as usize;
    let m_1_0 = minimal_cycles_opt(g, 1, 0)?;
    let m_1_neg1 = minimal_cycles_opt(g, 1, -1)?;
    let max_rank = mn.saturating_sub(1);
    let (cmtype, branch_min, comps) = if let Some(sub) = finite_subtype_homological(g, min_w)? {
        (CmType::Finite(sub), Vec::new(), Vec::new())
    } else {
        let (tame, bm, cs) = tame_homological(g, min_w, m_1_neg1.as_ref(), true)?;
        if cfg!(debug_assertions) {
            let (full, _, _) = tame_homological(g, min_w, m_1_neg1.as_ref(), false)?;
            if full != tame {
                return Err(Error::InvariantViolated(format!(
                    "shortcut tameness test gives {tame} but the full test gives {full}"
                )));
            }
        }
        let t = if tame {
            let maximal = m_1_neg1
                .as_ref()
                .is_some_and(|x| has_maximal_rank(x, g.multiplicity()));
            CmType::Tame(if maximal {
                Growth::Finite
            } else {
                Growth::Infinite
            })
        } else {
            CmType::Wild
        };
        (t, bm, cs)
    };
    Ok(HomologicalEvidence {
        min_weight: min_w,
        m_1_0: m_1_0.map(|x| x.rank),
        m_1_neg1: m_1_neg1.map(|x| x.rank),
        max_rank,
        branch_min_weights: branch_min,
        complement_subtypes: comps,
        cmtype,
    })
}

// ---------------------------------------------------------------------------
// Motivic route

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotivicEvidence {
    /// ord f^C of f^C(ω) = P^m|_{t_i → ω^{−1}, q → ω²}.
    pub ord_f: i64,
    /// μ^C = min{d ≥ 1 : 𝔭^m_d ≠ 0}.
    pub mu: u32,
    pub pi_3_2: i64,
    pub pi_4_2: i64,
    pub pi_6_3: i64,
    pub branch_ords: Vec<i64>,
    pub complement_subtypes: Vec<Option<FiniteSubtype>>,
    pub cmtype: CmType,
}

/// ord f^C; depth 0 suffices because w₀(0) = 0.
pub fn motivic_order(g: &Germ) -> Result<i64> {
    germ_omega_substitution(g, 0)?
        .ord()
        .ok_or_else(|| Error::InvariantViolated("ω-substitution vanishes up to order 0".into()))
}

/// μ^C, searched up to |c| + 1 (every d > |c| has the point c + … in the support).
pub fn motivic_mu(g: &Germ) -> Result<u32> {
    let cap = g.conductor().norm() as u32 + 1;
    for d in 1..=cap.max(1) {
        if !germ_univariate_motivic(g, d)?.is_zero() {
            return Ok(d);
        }
    }
    Err(Error::InvariantViolated("univariate motivic series has no positive-degree term".into()))
}

/// π_{d,j}: the coefficient of q^j in 𝔭^m_d.
pub fn motivic_pi(g: &Germ, d: u32, j: usize) -> Result<i64> {
    Ok(germ_univariate_motivic(g, d)?.coeff(j))
}

fn finite_subtype_motivic(g: &Germ, ord: i64) -> Result<Option<FiniteSubtype>> {
    Ok(match ord {
        0 => Some(FiniteSubtype::A),
        -1 => Some(if motivic_pi(g, 3, 2)? != 0 {
            FiniteSubtype::D
        } else {
            FiniteSubtype::E
        }),
        _ => None,
    })
}

pub fn classify_motivic(g: &Germ) -> Result<MotivicEvidence> {
    let ord_f = motivic_order(g)?;
    let mu = motivic_mu(g)?;
    let p3: QPoly = germ_univariate_motivic(g, 3)?;
    let p4 = germ_univariate_motivic(g, 4)?;
    let p6 = germ_univariate_motivic(g, 6)?;
    let (pi_3_2, pi_4_2, pi_6_3) = (p3.coeff(2), p4.coeff(2), p6.coeff(3));
    let r = g.r();
    let mut branch_ords = Vec::new();
    let mut comps = Vec::new();
    let cmtype = if let Some(sub) = finite_subtype_motivic(g, ord_f)? {
        CmType::Finite(sub)
    } else {
        let a = ord_f == -2;
        let b = (mu == 3 && pi_6_3 < 0) || (mu == 4 && pi_4_2 != 0);
        for i in 0..r {
            branch_ords.push(motivic_order(&g.branch(i)?)?);
        }
        let c = branch_ords.iter().all(|&o| o == 0);
        let mut d = true;
        for i in 0..r {
            let sub = match g.complement(i)? {
                Some(ci) => {
                    let o = motivic_order(&ci)?;
                    finite_subtype_motivic(&ci, o)?
                }
                None => None,
            };
            if r > 1 {
                d &= matches!(sub, Some(FiniteSubtype::A) | Some(FiniteSubtype::D));
            }
            comps.push(sub);
        }
        if a && b && c && d {
            let fin = (mu == 3 && pi_6_3 == -2) || (mu == 4 && pi_4_2 == -3);
            CmType::Tame(if fin { Growth::Finite } else { Growth::Infinite })
        } else {
            CmType::Wild
        }
    };
    Ok(MotivicEvidence {
        ord_f,
        mu,
        pi_3_2,
        pi_4_2,
        pi_6_3,
        branch_ords,
        complement_subtypes: comps,
        cmtype,
    })
}

// ---------------------------------------------------------------------------
// Combined verdict

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub cmtype: CmType,
    pub pointwise: PointwiseEvidence,
    pub homological: HomologicalEvidence,
    pub motivic: MotivicEvidence,
    pub routes_agree: bool,
}

/// Runs the three routes in parallel; any disagreement is an error.
pub fn classify(g: &Germ) -> Result<Verdict> {
    let (pw, (ho, mo)) = rayon::join(
        || classify_pointwise(g),
        || rayon::join(|| classify_homological(g), || classify_motivic(g)),
    );
    let (pw, ho, mo) = (pw?, ho?, mo?);
    if pw.cmtype != ho.cmtype || ho.cmtype != mo.cmtype {
        return Err(Error::RouteDisagreement {
            pointwise: pw.cmtype.to_string(),
            homological: ho.cmtype.to_string(),
            motivic: mo.cmtype.to_string(),
        });
    }
    Ok(Verdict {
        cmtype: ho.cmtype,
        pointwise: pw,
        homological: ho,
        motivic: mo,
        routes_agree: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnimodalFamily {
    Parabolic,
    Hyperbolic,
    Exceptional,
    None,
}

impl fmt::Display for UnimodalFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            UnimodalFamily::Parabolic => "parabolic",
            UnimodalFamily::Hyperbolic => "hyperbolic",
            UnimodalFamily::Exceptional => "exceptional unimodal",
            UnimodalFamily::None => "none",
        };
        f.write_str(s)
    }
}

/// Unimodal family of a plane curve germ: parabolic if tame of finite growth,
/// hyperbolic if tame of infinite growth, exceptional if wild with min w₀ = −2 and
/// δ ∈ {6, 7}.
pub fn classify_unimodal_plane(
    cmtype: CmType,
    min_weight: i64,
    delta: i64,
    plane: bool,
) -> Result<UnimodalFamily> {
    if !plane {
        return Err(Error::PreconditionUnmet(
            "unimodal families are defined for plane curve germs".into(),
        ));
    }
    Ok(match cmtype {
        CmType::Tame(Growth::Finite) => UnimodalFamily::Parabolic,
        CmType::Tame(Growth::Infinite) => UnimodalFamily::Hyperbolic,
        CmType::Wild if min_weight == -2 && (delta == 6 || delta == 7) => {
            UnimodalFamily::Exceptional
        }
        _ => UnimodalFamily::None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> LatticePoint {
        LatticePoint::from_slice(v)
    }

    #[test]
    fn smooth_is_a() {
        let v = classify(&Germ::smooth()).unwrap();
        assert_eq!(v.cmtype, CmType::Finite(FiniteSubtype::A));
        assert_eq!(v.motivic.ord_f, 0);
    }

    #[test]
    fn e6_e8_are_e_dominating() {
        for gens in [[3u32, 4], [3, 5]] {
            let v = classify(&Germ::numerical(&gens).unwrap()).unwrap();
            assert_eq!(v.cmtype, CmType::Finite(FiniteSubtype::E));
        }
    }

    #[test]
    fn d5_is_d_dominating() {
        let g = Germ::from_semigroup(
            p(&[4, 2]),
            [[0, 0], [2, 1], [2, 2], [3, 1], [4, 2]].iter().map(|v| p(v)),
        )
        .unwrap();
        let v = classify(&g).unwrap();
        assert_eq!(v.cmtype, CmType::Finite(FiniteSubtype::D));
        assert_eq!(v.homological.m_1_0, Some(1));
    }

    #[test]
    fn e12_is_wild_and_exceptional() {
        let g = Germ::numerical(&[3, 7]).unwrap();
        let v = classify(&g).unwrap();
        assert_eq!(v.cmtype, CmType::Wild);
        assert_eq!(v.homological.min_weight, -2);
        assert_eq!(
            classify_unimodal_plane(v.cmtype, -2, g.delta(), true).unwrap(),
            UnimodalFamily::Exceptional
        );
        assert!(classify_unimodal_plane(v.cmtype, -2, g.delta(), false).is_err());
    }

    #[test]
    fn non_gorenstein_space_curve() {
        // C{t^3, t^4, t^5}: min w = -1, |m| = 3, r = 1 so no D-cycle.
        let v = classify(&Germ::numerical(&[3, 4, 5]).unwrap()).unwrap();
        assert_eq!(v.cmtype, CmType::Finite(FiniteSubtype::E));
    }
}
