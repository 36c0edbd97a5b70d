//! Multivariate integer polynomials and rational series with (1 − monomial) denominators.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::{Germ, Grid, HilbertGrid, LatticePoint, Rectangle, MAX_BOUND_RETRIES};

/// Polynomial in t_1..t_r with integer coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    r: usize,
    terms: BTreeMap<LatticePoint, i64>,
}

impl MultiPoly {
    pub fn zero(r: usize) -> Self {
        MultiPoly {
            r,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(r: usize) -> Self {
        Self::monomial(LatticePoint::zero(r), 1)
    }

    pub fn monomial(exp: LatticePoint, coef: i64) -> Self {
        let mut p = Self::zero(exp.dim());
        p.add_term(exp, coef).expect("single term");
        p
    }

    pub fn from_terms(
        r: usize,
        terms: impl IntoIterator<Item = (LatticePoint, i64)>,
    ) -> Result<Self> {
        let mut p = Self::zero(r);
        for (e, c) in terms {
            if e.dim() != r {
                return Err(Error::DimensionMismatch {
                    expected: r,
                    got: e.dim(),
                });
            }
            p.add_term(e, c)?;
        }
        Ok(p)
    }

    /// Convenience constructor from (exponent slice, coefficient) pairs.
    pub fn from_pairs(r: usize, pairs: &[(&[u32], i64)]) -> Result<Self> {
        Self::from_terms(
            r,
            pairs.iter().map(|(e, c)| (LatticePoint::from_slice(e), *c)),
        )
    }

    fn add_term(&mut self, exp: LatticePoint, coef: i64) -> Result<()> {
        let slot = self.terms.entry(exp.clone()).or_insert(0);
        *slot = slot
            .checked_add(coef)
            .ok_or(Error::Overflow("polynomial addition"))?;
        if *slot == 0 {
            self.terms.remove(&exp);
        }
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticePoint, i64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coeff(&self, exp: &LatticePoint) -> i64 {
        self.terms.get(exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), c)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(self.r);
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                let c = x.checked_mul(y).ok_or(Error::Overflow("polynomial product"))?;
                out.add_term(a.add(b), c)?;
            }
        }
        Ok(out)
    }

    /// Componentwise maximum of the exponents (zero for the zero polynomial).
    pub fn degree_bound(&self) -> LatticePoint {
        self.terms
            .keys()
            .fold(LatticePoint::zero(self.r), |acc, e| acc.join(e))
    }
}

/// numerator / ∏ (1 − t^{a_k}), expanded as a formal power series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    numerator: MultiPoly,
    denominator: Vec<LatticePoint>,
}

impl RationalSeries {
    pub fn new(numerator: MultiPoly, denominator: Vec<LatticePoint>) -> Result<Self> {
        let r = numerator.r();
        for a in &denominator {
            if a.dim() != r {
                return Err(Error::DimensionMismatch {
                    expected: r,
                    got: a.dim(),
                });
            }
            if a.is_zero() {
                return Err(Error::InvalidSeries(
                    "denominator factor 1 - t^0 is not invertible".into(),
                ));
            }
        }
        Ok(RationalSeries {
            numerator,
            denominator,
        })
    }

    pub fn polynomial(numerator: MultiPoly) -> Self {
        RationalSeries {
            numerator,
            denominator: Vec::new(),
        }
    }

    /// 1/(1 − t_1)⋯(1 − t_r).
    pub fn geometric(r: usize) -> Self {
        RationalSeries {
            numerator: MultiPoly::one(r),
            denominator: (0..r).map(|i| LatticePoint::unit(r, i)).collect(),
        }
    }

    pub fn r(&self) -> usize {
        self.numerator.r()
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &[LatticePoint] {
        &self.denominator
    }

    /// Exact coefficients on R(0, hi).
    pub fn expand_to(&self, hi: &LatticePoint) -> Result<Grid<i64>> {
        if hi.dim() != self.r() {
            return Err(Error::DimensionMismatch {
                expected: self.r(),
                got: hi.dim(),
            });
        }
        let mut g = Grid::filled(hi.clone(), 0i64);
        for (e, c) in self.numerator.terms() {
            if e.leq(hi) {
                g.set(e, c);
            }
        }
        // Multiplying by 1/(1 − t^a): c(ℓ) += c(ℓ − a), in lexicographic order.
        for a in &self.denominator {
            for idx in 0..g.len() {
                let p = g.point_at(idx);
                if let Some(q) = p.checked_sub(a) {
                    let prev = *g.get(&q).expect("q ≤ p");
                    let cur = *g.at(idx);
                    let v = cur
                        .checked_add(prev)
                        .ok_or(Error::Overflow("series expansion"))?;
                    g.set_at(idx, v);
                }
            }
        }
        Ok(g)
    }

    /// Coefficients at every point of `rect`, in lexicographic order.
    pub fn expand(&self, rect: &Rectangle) -> Result<Vec<(LatticePoint, i64)>> {
        let g = self.expand_to(rect.hi())?;
        Ok(rect
            .points()
            .map(|p| {
                let c = *g.get(&p).expect("inside");
                (p, c)
            })
            .collect())
    }
}

/// Subcurve Poincaré series P_{C_J}, keyed by the bitmask of J ⊆ {1..r}.
pub type SubcurveSeries = BTreeMap<u32, RationalSeries>;

fn check_subseries(r: usize, subseries: &SubcurveSeries) -> Result<()> {
    if r == 0 || r > 16 {
        return Err(Error::InvalidSeries(format!("unsupported branch count {r}")));
    }
    for mask in 1u32..(1 << r) {
        let s = subseries.get(&mask).ok_or_else(|| {
            Error::InvalidSeries(format!("missing series for subcurve {}", mask_label(mask)))
        })?;
        if s.r() != mask.count_ones() as usize {
            return Err(Error::InvalidSeries(format!(
                "series for subcurve {} has {} variables",
                mask_label(mask),
                s.r()
            )));
        }
    }
    if let Some(extra) = subseries.keys().find(|&&m| m == 0 || m >= (1 << r)) {
        return Err(Error::InvalidSeries(format!(
            "series given for invalid subset {extra:#b}"
        )));
    }
    Ok(())
}

fn mask_label(mask: u32) -> String {
    let idx: Vec<String> = (0..32)
        .filter(|i| (mask >> i) & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", idx.join(","))
}

/// H_C(t) = 1/∏(1 − t_i) · Σ_{J≠∅} (−1)^{|J|−1} t^{e^J} P_{C_J}(t_J), read on R(0, L).
pub fn hilbert_from_poincare(
    r: usize,
    subseries: &SubcurveSeries,
    bound: &LatticePoint,
) -> Result<HilbertGrid> {
    check_subseries(r, subseries)?;
    if bound.dim() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            got: bound.dim(),
        });
    }
    let mut g = Grid::filled(bound.clone(), 0i64);
    for (&mask, series) in subseries {
        let shift = LatticePoint::indicator(r, mask);
        let Some(room) = bound.checked_sub(&shift) else {
            continue;
        };
        let face = series.expand_to(&room.project(mask))?;
        let sign = if mask.count_ones() % 2 == 1 { 1 } else { -1 };
        for (q, &c) in face.iter() {
            if c == 0 {
                continue;
            }
            let p = q.embed(r, mask).add(&shift);
            let idx = g.index_of(&p).expect("inside by construction");
            let v = g
                .at(idx)
                .checked_add(sign * c)
                .ok_or(Error::Overflow("Hilbert series"))?;
            g.set_at(idx, v);
        }
    }
    for i in 0..r {
        for idx in 0..g.len() {
            let p = g.point_at(idx);
            if p.get(i) > 0 {
                let prev = *g.at(idx - g.stride(i));
                let v = g
                    .at(idx)
                    .checked_add(prev)
                    .ok_or(Error::Overflow("Hilbert series"))?;
                g.set_at(idx, v);
            }
        }
    }
    HilbertGrid::new(g).map_err(|e| Error::InvalidSeries(e.to_string()))
}

/// 𝔭(ℓ) = Σ_{J ⊆ {1..r}} (−1)^{|J|+1} h(ℓ + e^J), on R(0, L − e).
pub fn poincare_from_hilbert(h: &HilbertGrid) -> Result<MultiPoly> {
    let r = h.r();
    let inner = h
        .bound()
        .checked_sub(&LatticePoint::ones(r))
        .ok_or_else(|| Error::MarginTooSmall {
            bound: h.bound().clone(),
            reason: "the Poincaré coefficients need one layer of margin".into(),
        })?;
    let mut terms = Vec::new();
    for p in Rectangle::from_origin(inner).points() {
        let mut acc = 0i64;
        for mask in 0u32..(1 << r) {
            let v = h.value(&p.plus_indicator(mask))?;
            if mask.count_ones() % 2 == 1 {
                acc += v;
            } else {
                acc -= v;
            }
        }
        if acc != 0 {
            terms.push((p, acc));
        }
    }
    MultiPoly::from_terms(r, terms)
}

fn initial_bound(r: usize, subseries: &SubcurveSeries) -> LatticePoint {
    let mut coords = vec![2u32; r];
    for (&mask, s) in subseries {
        let mut reach = s.numerator().degree_bound();
        for a in s.denominator() {
            reach = reach.add(a);
        }
        let reach = reach.embed(r, mask);
        for (i, c) in coords.iter_mut().enumerate() {
            *c += reach.get(i);
        }
    }
    LatticePoint::from_slice(&coords)
}

/// Builds the germ from all subcurve Poincaré series. The grid bound starts from the
/// degrees of the inputs and is doubled (at most [`MAX_BOUND_RETRIES`] times) until the
/// conductor stabilizes inside it.
pub fn germ_from_poincare(r: usize, subseries: &SubcurveSeries) -> Result<Germ> {
    check_subseries(r, subseries)?;
    let mut bound = initial_bound(r, subseries);
    let mut last = None;
    for _ in 0..=MAX_BOUND_RETRIES {
        let h = hilbert_from_poincare(r, subseries, &bound)?;
        match Germ::from_hilbert(&h) {
            Ok(g) => return Ok(g),
            Err(e @ Error::MarginTooSmall { .. }) => {
                last = Some(e);
                bound = bound.scale(2);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}
