use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the lattice ℕ^r.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(Vec<u32>);

impl LatticePoint {
    /// Builds a point from its coordinates. Rejects the empty vector.
    pub fn new(coords: Vec<u32>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        Ok(LatticePoint(coords))
    }

    pub fn from_slice(coords: &[u32]) -> Self {
        assert!(!coords.is_empty(), "lattice points have at least one coordinate");
        LatticePoint(coords.to_vec())
    }

    pub fn zero(r: usize) -> Self {
        LatticePoint(vec![0; r])
    }

    /// The all-ones vector e.
    pub fn ones(r: usize) -> Self {
        LatticePoint(vec![1; r])
    }

    /// The unit vector e^i (0-based index).
    pub fn unit(r: usize, i: usize) -> Self {
        let mut v = vec![0; r];
        v[i] = 1;
        LatticePoint(v)
    }

    /// e^J for the subset J encoded as a bitmask.
    pub fn indicator(r: usize, mask: u32) -> Self {
        LatticePoint((0..r).map(|i| (mask >> i) & 1).collect())
    }

    pub fn splat(r: usize, value: u32) -> Self {
        LatticePoint(vec![value; r])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// |ℓ| = Σ ℓ_i.
    pub fn norm(&self) -> i64 {
        self.0.iter().map(|&x| x as i64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Componentwise ≤.
    pub fn leq(&self, other: &Self) -> bool {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn partial_cmp_componentwise(&self, other: &Self) -> Option<Ordering> {
        match (self.leq(other), other.leq(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }

    pub fn meet(&self, other: &Self) -> Self {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn join(&self, other: &Self) -> Self {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference, `None` if some coordinate would go negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(LatticePoint)
    }

    /// Componentwise max(ℓ − other, 0).
    pub fn saturating_sub(&self, other: &Self) -> Self {
        LatticePoint(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.saturating_sub(*b))
                .collect(),
        )
    }

    pub fn scale(&self, k: u32) -> Self {
        LatticePoint(self.0.iter().map(|a| a * k).collect())
    }

    pub fn with_coord(&self, i: usize, value: u32) -> Self {
        let mut v = self.0.clone();
        v[i] = value;
        LatticePoint(v)
    }

    pub fn plus_unit(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v[i] += 1;
        LatticePoint(v)
    }

    pub fn plus_indicator(&self, mask: u32) -> Self {
        LatticePoint(
            self.0
                .iter()
                .enumerate()
                .map(|(i, a)| a + ((mask >> i) & 1))
                .collect(),
        )
    }

    /// Coordinates indexed by the set bits of `mask`, in increasing order.
    pub fn project(&self, mask: u32) -> Self {
        LatticePoint(
            (0..self.dim())
                .filter(|i| (mask >> i) & 1 == 1)
                .map(|i| self.0[i])
                .collect(),
        )
    }

    /// ι_J: places the coordinates of `self` at the set bits of `mask` in ℕ^r.
    pub fn embed(&self, r: usize, mask: u32) -> Self {
        let mut v = vec![0; r];
        let mut it = self.0.iter();
        for (i, slot) in v.iter_mut().enumerate() {
            if (mask >> i) & 1 == 1 {
                *slot = *it.next().expect("mask popcount matches point dimension");
            }
        }
        LatticePoint(v)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for LatticePoint {
    fn from(v: Vec<u32>) -> Self {
        LatticePoint::from_slice(&v)
    }
}

/// The rectangle R(lo, hi) = {ℓ : lo ≤ ℓ ≤ hi}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rectangle {
    lo: LatticePoint,
    hi: LatticePoint,
}

impl Rectangle {
    pub fn new(lo: LatticePoint, hi: LatticePoint) -> Result<Self> {
        if lo.dim() != hi.dim() {
            return Err(Error::DimensionMismatch {
                expected: lo.dim(),
                got: hi.dim(),
            });
        }
        if !lo.leq(&hi) {
            return Err(Error::InconsistentInput(format!(
                "rectangle corners {lo} and {hi} are not ordered"
            )));
        }
        Ok(Rectangle { lo, hi })
    }

    /// R(0, hi).
    pub fn from_origin(hi: LatticePoint) -> Self {
        Rectangle {
            lo: LatticePoint::zero(hi.dim()),
            hi,
        }
    }

    pub fn lo(&self) -> &LatticePoint {
        &self.lo
    }

    pub fn hi(&self) -> &LatticePoint {
        &self.hi
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.lo.leq(p) && p.leq(&self.hi)
    }

    pub fn len(&self) -> usize {
        self.lo
            .coords()
            .iter()
            .zip(self.hi.coords())
            .map(|(a, b)| (b - a + 1) as usize)
            .product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> RectIter {
        RectIter {
            lo: self.lo.coords().to_vec(),
            hi: self.hi.coords().to_vec(),
            next: Some(self.lo.coords().to_vec()),
        }
    }
}

/// Lexicographic iterator over a rectangle.
pub struct RectIter {
    lo: Vec<u32>,
    hi: Vec<u32>,
    next: Option<Vec<u32>>,
}

impl Iterator for RectIter {
    type Item = LatticePoint;

    fn next(&mut self) -> Option<LatticePoint> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if succ[i] < self.hi[i] {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = self.lo[i];
        }
        Some(LatticePoint(cur))
    }
}
