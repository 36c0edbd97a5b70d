//! Motivic Poincaré series from the Hilbert function.
//!
//! 𝔭^m_ℓ(q) = Σ_J (−1)^{|J|} q^{h(ℓ+e^J)} / (1 − q). Each summand is expanded by
//! telescoping, (q^b − q^a)/(1 − q) = q^b + … + q^{a−1}, so all arithmetic stays in ℤ[q].

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cubical::subsets;
use crate::error::{Error, Result};
use crate::lattice::{Germ, Grid, HilbertGrid, LatticePoint, Rectangle};
use crate::spectral::PeTable;

/// Integer polynomial in q; `coeffs[j]` is the coefficient of q^j, trailing zeros trimmed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QPoly {
    coeffs: Vec<i64>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn monomial(j: usize, c: i64) -> Self {
        let mut coeffs = vec![0; j + 1];
        coeffs[j] = c;
        QPoly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> i64 {
        self.coeffs.get(j).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest power with a nonzero coefficient.
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Adds c·(q^lo + … + q^{hi−1}).
    pub fn add_range(&mut self, lo: usize, hi: usize, c: i64) {
        if hi > self.coeffs.len() {
            self.coeffs.resize(hi, 0);
        }
        for x in &mut self.coeffs[lo..hi.max(lo)] {
            *x += c;
        }
        self.trim();
    }

    pub fn add_term(&mut self, j: usize, c: i64) {
        self.add_range(j, j + 1, c);
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::from_coeffs((0..n).map(|j| self.coeff(j) + other.coeff(j)).collect())
    }

    pub fn scale_shift(&self, c: i64, shift: usize) -> QPoly {
        let mut v = vec![0; shift];
        v.extend(self.coeffs.iter().map(|x| x * c));
        QPoly::from_coeffs(v)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (j, c))
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.terms() {
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (j, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "q")?,
                (1, _) => write!(f, "{a}q")?,
                (_, 1) => write!(f, "q^{j}")?,
                _ => write!(f, "{a}q^{j}")?,
            }
        }
        Ok(())
    }
}

/// Laurent series in ω with coefficients of orders `start..=depth`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentSeries {
    pub start: i64,
    pub depth: i64,
    pub coeffs: Vec<i64>,
}

impl LaurentSeries {
    /// Lowest order with nonzero coefficient; `None` if zero up to the depth.
    pub fn ord(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|&c| c != 0)
            .map(|i| self.start + i as i64)
    }

    pub fn coeff(&self, order: i64) -> i64 {
        if order < self.start || order > self.depth {
            return 0;
        }
        self.coeffs[(order - self.start) as usize]
    }

    pub fn leading_coeff(&self) -> Option<i64> {
        self.ord().map(|o| self.coeff(o))
    }
}

fn require_margin(h: &HilbertGrid, l: &LatticePoint) -> Result<()> {
    let top = l.add(&LatticePoint::ones(h.r()));
    if !h.grid().contains(&top) {
        return Err(Error::MarginTooSmall {
            bound: h.bound().clone(),
            reason: format!("motivic coefficient at {l} needs h at {top}"),
        });
    }
    Ok(())
}

/// 𝔭^m_ℓ(q) = −Σ_{J≠∅} (−1)^{|J|} (q^{h(ℓ)} + … + q^{h(ℓ+e^J)−1}).
pub fn motivic_coeff(h: &HilbertGrid, l: &LatticePoint) -> Result<QPoly> {
    require_margin(h, l)?;
    let r = h.r();
    let base = h.get(l).expect("inside") as usize;
    let mut out = QPoly::zero();
    for mask in subsets((1u32 << r) - 1).skip(1) {
        let top = h.get(&l.plus_indicator(mask)).expect("inside") as usize;
        let sign = if mask.count_ones() % 2 == 1 { 1 } else { -1 };
        out.add_range(base, top, sign);
    }
    Ok(out)
}

/// 𝔭^m_ℓ on R(0, bound).
pub fn motivic_grid(h: &HilbertGrid, bound: &LatticePoint) -> Result<Grid<QPoly>> {
    require_margin(h, bound)?;
    let pts: Vec<LatticePoint> = Rectangle::from_origin(bound.clone()).points().collect();
    let polys: Vec<QPoly> = pts
        .par_iter()
        .map(|l| motivic_coeff(h, l))
        .collect::<Result<_>>()?;
    let mut it = polys.into_iter();
    Ok(Grid::from_fn(bound.clone(), |_| it.next().expect("same order")))
}

/// 𝔭^m_d(q) = Σ_{|ℓ| = d} 𝔭^m_ℓ(q).
pub fn univariate_motivic(h: &HilbertGrid, d: u32) -> Result<QPoly> {
    let r = h.r();
    require_margin(h, &LatticePoint::splat(r, d))?;
    let mut out = QPoly::zero();
    for l in crate::spectral::level_points(r, d) {
        out = out.add(&motivic_coeff(h, &l)?);
    }
    Ok(out)
}

/// f(ω) = P^m(t, q)|_{t_i → ω^{−1}, q → ω²} up to order `depth`.
///
/// A term q^j t^ℓ lands at order 2j − |ℓ| ≥ w₀(ℓ). Beyond the conductor w₀ grows by
/// one per step, so every ℓ with w₀(ℓ) ≤ depth lies in R(0, c + (depth − min w₀) e);
/// the grid must contain that box plus one step.
pub fn omega_substitution(h: &HilbertGrid, c: &LatticePoint, depth: i64) -> Result<LaurentSeries> {
    let r = h.r();
    if !c.leq(h.bound()) {
        return Err(Error::TruncationUnsound {
            depth,
            reason: format!("conductor {c} lies outside the grid"),
        });
    }
    let min_w = Rectangle::from_origin(c.clone())
        .points()
        .map(|p| 2 * h.get(&p).expect("inside") - p.norm())
        .min()
        .expect("nonempty");
    if depth < min_w {
        return Err(Error::TruncationUnsound {
            depth,
            reason: format!("depth is below the lowest weight {min_w}"),
        });
    }
    let reach = (depth - min_w) as u32;
    let region = c.add(&LatticePoint::splat(r, reach));
    if !region.add(&LatticePoint::ones(r)).leq(h.bound()) {
        return Err(Error::TruncationUnsound {
            depth,
            reason: format!(
                "terms up to order {depth} can come from R(0,{region}) but the grid stops at {}",
                h.bound()
            ),
        });
    }
    let len = (depth - min_w + 1) as usize;
    let pts: Vec<LatticePoint> = Rectangle::from_origin(region).points().collect();
    let coeffs = pts
        .par_iter()
        .map(|l| -> Result<Vec<i64>> {
            let mut acc = vec![0i64; len];
            let p = motivic_coeff(h, l)?;
            for (j, a) in p.terms() {
                let order = 2 * j as i64 - l.norm();
                if order <= depth {
                    debug_assert!(order >= min_w);
                    acc[(order - min_w) as usize] += a;
                }
            }
            Ok(acc)
        })
        .try_reduce(
            || vec![0i64; len],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    Ok(LaurentSeries {
        start: min_w,
        depth,
        coeffs,
    })
}

/// ω-substitution for a germ on a grid large enough for `depth`.
pub fn germ_omega_substitution(g: &Germ, depth: i64) -> Result<LaurentSeries> {
    let c = g.conductor();
    let min_w = crate::cubical::min_weight(&g.weights(c)?)?;
    let reach = (depth - min_w).max(0) as u32 + 1;
    let b = c.add(&LatticePoint::splat(g.r(), reach));
    omega_substitution(&g.hilbert(&b)?, c, depth)
}

pub fn germ_motivic_coeff(g: &Germ, l: &LatticePoint) -> Result<QPoly> {
    let b = g.bound_covering(&l.add(&LatticePoint::ones(g.r())));
    motivic_coeff(&g.hilbert(&b)?, l)
}

pub fn germ_univariate_motivic(g: &Germ, d: u32) -> Result<QPoly> {
    let b = g.bound_covering(&LatticePoint::splat(g.r(), d + 1));
    univariate_motivic(&g.hilbert(&b)?, d)
}

/// A monomial t^ℓ q^j where the two sides of an identity differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialMismatch {
    pub point: LatticePoint,
    pub q_degree: i64,
    pub left: i64,
    pub right: i64,
}

impl fmt::Display for MonomialMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t^{} q^{}: {} vs {}",
            self.point, self.q_degree, self.left, self.right
        )
    }
}

/// Checks PE|_{T_i → t_i√q, Q → √q, h → −√q} = P^m on R(0, bound): the monomial
/// T^ℓ Q^n h^k goes to (−1)^k t^ℓ q^{(|ℓ|+n+k)/2}. Returns the first mismatch.
pub fn pe_substitution_check(
    pe: &PeTable,
    h: &HilbertGrid,
    bound: &LatticePoint,
) -> Result<Option<MonomialMismatch>> {
    for l in Rectangle::from_origin(bound.clone()).points() {
        let mut left: std::collections::BTreeMap<i64, i64> = Default::default();
        for ((_, n, k), rk) in pe.range((l.clone(), i64::MIN, 0)..=(l.clone(), i64::MAX, usize::MAX)) {
            let twice = l.norm() + n + *k as i64;
            if twice % 2 != 0 {
                return Ok(Some(MonomialMismatch {
                    point: l.clone(),
                    q_degree: twice,
                    left: *rk as i64,
                    right: 0,
                }));
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            *left.entry(twice / 2).or_insert(0) += sign * *rk as i64;
        }
        let right = motivic_coeff(h, &l)?;
        let degs: std::collections::BTreeSet<i64> = left
            .keys()
            .copied()
            .chain(right.terms().map(|(j, _)| j as i64))
            .collect();
        for j in degs {
            let a = left.get(&j).copied().unwrap_or(0);
            let b = if j >= 0 { right.coeff(j as usize) } else { 0 };
            if a != b {
                return Ok(Some(MonomialMismatch {
                    point: l,
                    q_degree: j,
                    left: a,
                    right: b,
                }));
            }
        }
    }
    Ok(None)
}

/// Recovers h from 𝔭^m on R(0, B): h(ℓ) = ord 𝔭^m_{s(ℓ)} with s(ℓ) the least support
/// point above ℓ. The corner B must be in the support, which holds once B ≥ c.
pub fn hilbert_from_motivic(coeffs: &Grid<QPoly>) -> Result<HilbertGrid> {
    let bound = coeffs.bound().clone();
    if coeffs.get(&bound).expect("corner").is_zero() {
        return Err(Error::InconsistentInput(format!(
            "motivic coefficient at the corner {bound} vanishes; the grid does not reach the conductor"
        )));
    }
    let support: Vec<LatticePoint> = coeffs
        .iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(l, _)| l)
        .collect();
    let mut vals = Vec::with_capacity(coeffs.len());
    for (l, _) in coeffs.iter() {
        let s = support
            .iter()
            .filter(|s| l.leq(s))
            .fold(bound.clone(), |acc, s| acc.meet(s));
        let p = coeffs.get(&s).expect("inside");
        let ord = p.ord().ok_or_else(|| {
            Error::InconsistentInput(format!(
                "support is not closed under minima: {s} is the least support point above {l} but has zero coefficient"
            ))
        })?;
        vals.push(ord as i64);
    }
    let mut it = vals.into_iter();
    HilbertGrid::new(Grid::from_fn(bound, |_| it.next().expect("same order")))
}

/// P̄^m = P^m · ∏(1 − t_i q): P̄_ℓ = Σ_J (−1)^{|J|} q^{|J|} 𝔭^m_{ℓ−e^J}.
pub fn motivic_numerator(coeffs: &Grid<QPoly>) -> Grid<QPoly> {
    let r = coeffs.dim();
    Grid::from_fn(coeffs.bound().clone(), |l| {
        let mut out = QPoly::zero();
        for mask in subsets((1u32 << r) - 1) {
            let e = LatticePoint::indicator(r, mask);
            if let Some(src) = l.checked_sub(&e) {
                let k = mask.count_ones();
                let sign = if k % 2 == 0 { 1 } else { -1 };
                out = out.add(&coeffs.get(&src).expect("inside").scale_shift(sign, k as usize));
            }
        }
        out
    })
}

/// P̄((q t)^{−1}, q) = q^{−δ} t^{−c} P̄(t, q), i.e. the coefficient of t^ℓ q^j equals
/// that of t^{c−ℓ} q^{j−|ℓ|+δ}, and P̄ is supported in R(0, c). The grid must contain c.
pub fn gorenstein_functional_identity(
    numerator: &Grid<QPoly>,
    c: &LatticePoint,
    delta: i64,
) -> Option<MonomialMismatch> {
    for (l, p) in numerator.iter() {
        let Some(dual) = c.checked_sub(&l) else {
            if let Some((j, a)) = p.terms().next() {
                return Some(MonomialMismatch {
                    point: l,
                    q_degree: j as i64,
                    left: a,
                    right: 0,
                });
            }
            continue;
        };
        let q = numerator.get(&dual).expect("dual inside R(0,c)");
        let degs: std::collections::BTreeSet<i64> = p
            .terms()
            .map(|(j, _)| j as i64)
            .chain(q.terms().map(|(j, _)| j as i64 + l.norm() - delta))
            .collect();
        for j in degs {
            let a = if j >= 0 { p.coeff(j as usize) } else { 0 };
            let jj = j - l.norm() + delta;
            let b = if jj >= 0 { q.coeff(jj as usize) } else { 0 };
            if a != b {
                return Some(MonomialMismatch {
                    point: l,
                    q_degree: j,
                    left: a,
                    right: b,
                });
            }
        }
    }
    None
}

/// Functional equation of P̄ for a Gorenstein germ, checked on R(0, c + e).
pub fn gorenstein_functional_check(g: &Germ) -> Result<bool> {
    if !g.is_gorenstein() {
        return Err(Error::PreconditionUnmet(
            "the functional equation is stated for Gorenstein germs only".into(),
        ));
    }
    let r = g.r();
    let box_ = g.conductor().add(&LatticePoint::ones(r));
    let h = g.hilbert(&box_.add(&LatticePoint::ones(r)))?;
    let num = motivic_numerator(&motivic_grid(&h, &box_)?);
    Ok(gorenstein_functional_identity(&num, g.conductor(), g.delta()).is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{germ_from_poincare, MultiPoly, RationalSeries, SubcurveSeries};

    fn p(v: &[u32]) -> LatticePoint {
        LatticePoint::from_slice(v)
    }

    fn d4() -> Germ {
        let r = 3;
        let mut sub = SubcurveSeries::new();
        for i in 0..r {
            let geo = RationalSeries::new(MultiPoly::one(1), vec![p(&[1])]).unwrap();
            sub.insert(1 << i, geo);
        }
        for mask in [0b011u32, 0b101, 0b110] {
            sub.insert(mask, RationalSeries::polynomial(MultiPoly::one(2)));
        }
        let pc = MultiPoly::from_pairs(3, &[(&[0, 0, 0], 1), (&[1, 1, 1], -1)]).unwrap();
        sub.insert(0b111, RationalSeries::polynomial(pc));
        germ_from_poincare(r, &sub).unwrap()
    }

    #[test]
    fn qpoly_display_and_ops() {
        let a = QPoly::from_coeffs(vec![0, 1, -2, 0]);
        assert_eq!(a.coeffs(), &[0, 1, -2]);
        assert_eq!(a.to_string(), "q - 2q^2");
        assert_eq!(a.ord(), Some(1));
        assert_eq!(a.eval_at_one(), -1);
        assert_eq!(QPoly::zero().to_string(), "0");
        assert_eq!(a.scale_shift(-1, 1).to_string(), "-q^2 + 2q^3");
    }

    #[test]
    fn smooth_coefficients() {
        let g = Germ::smooth();
        for l in 0..5 {
            assert_eq!(germ_motivic_coeff(&g, &p(&[l])).unwrap(), QPoly::monomial(l as usize, 1));
        }
        let f = germ_omega_substitution(&g, 4).unwrap();
        assert_eq!(f.ord(), Some(0));
        assert_eq!(f.coeffs, vec![1; 5]);
    }

    #[test]
    fn d4_coefficient_and_omega() {
        let g = d4();
        assert_eq!(g.conductor(), &p(&[2, 2, 2]));
        let m = g.multiplicity().clone();
        assert_eq!(germ_motivic_coeff(&g, &m).unwrap().to_string(), "q - 2q^2");
        assert_eq!(germ_univariate_motivic(&g, 3).unwrap().to_string(), "q - 2q^2");
        assert_eq!(germ_univariate_motivic(&g, 0).unwrap(), QPoly::monomial(0, 1));
        let f = germ_omega_substitution(&g, 3).unwrap();
        assert_eq!(f.ord(), Some(-1));
        // 2 + (1 + ω)²/(ω(1 − ω)) = ω^{-1} + 5 + 4ω + 4ω² + …
        assert_eq!(f.coeffs, vec![1, 5, 4, 4, 4]);
        assert_eq!(f.leading_coeff(), Some(1));
    }

    #[test]
    fn truncation_must_be_certified() {
        let g = d4();
        let h = g.hilbert(&p(&[3, 3, 3])).unwrap();
        assert!(matches!(
            omega_substitution(&h, g.conductor(), 2),
            Err(Error::TruncationUnsound { .. })
        ));
    }

    #[test]
    fn support_is_semigroup_and_round_trip() {
        let g = d4();
        let b = p(&[4, 4, 4]);
        let h = g.hilbert(&b.add(&p(&[1, 1, 1]))).unwrap();
        let mg = motivic_grid(&h, &b).unwrap();
        let s = g.semigroup(&b).unwrap();
        for (l, q) in mg.iter() {
            assert_eq!(!q.is_zero(), s.contains(&l), "at {l}");
        }
        let back = hilbert_from_motivic(&mg).unwrap();
        assert_eq!(back, g.hilbert(&b).unwrap());
    }

    #[test]
    fn gorenstein_gate_and_identity() {
        assert!(gorenstein_functional_check(&d4()).unwrap());
        assert!(gorenstein_functional_check(&Germ::numerical(&[3, 4]).unwrap()).unwrap());
        assert!(matches!(
            gorenstein_functional_check(&Germ::numerical(&[3, 4, 5]).unwrap()),
            Err(Error::PreconditionUnmet(_))
        ));
    }

    #[test]
    fn pe_identity_d4() {
        let g = d4();
        let b = g.conductor().clone();
        let w = g.weights(&b.add(&p(&[1, 1, 1]))).unwrap();
        let pe = crate::spectral::pe_series(&w, &b).unwrap();
        let h = g.hilbert(&b.add(&p(&[1, 1, 1]))).unwrap();
        assert_eq!(pe_substitution_check(&pe, &h, &b).unwrap(), None);
        assert_eq!(pe.get(&(p(&[1, 1, 1]), 0, 1)), Some(&2));
    }
}
