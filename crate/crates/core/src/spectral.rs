//! E¹ entries of the level-filtration spectral sequence, minimal spectral cycles
//! and the PE rank table.
//!
//! The refined entry at ℓ in homological degree k and weight n is computed on the
//! excised pair H_k(S_n ∩ B, S_n ∩ A), where B = R(ℓ, ℓ + e) and A is the full
//! subcomplex of B on every vertex except ℓ. Only the cubes rooted at ℓ survive in
//! the relative chains, so each entry touches 2^r cells.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cubical::{relative_homology_of_cubes, subsets, Cube, HomologyGroup};
use crate::error::{Error, Result};
use crate::lattice::{Germ, Grid, LatticePoint, Rectangle, WeightGrid};

/// Position of an E¹ entry: a lattice point (refined) or a level d = |ℓ|.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum E1Index {
    Point(LatticePoint),
    Level(u32),
}

/// rank (E¹_{−ℓ, |ℓ|+k})_{−2n} or rank (E¹_{−d, d+k})_{−2n}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct E1Entry {
    pub index: E1Index,
    pub k: usize,
    pub n: i64,
    pub rank: usize,
}

impl E1Entry {
    /// The second spectral index q = |ℓ| + k.
    pub fn q(&self) -> i64 {
        let d = match &self.index {
            E1Index::Point(p) => p.norm(),
            E1Index::Level(d) => *d as i64,
        };
        d + self.k as i64
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }
}

/// 𝔐_{k,n} = (E¹_{−jm, k+j|m|})_{−2n} with n = (2 − |m|) j + k.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalCycleGroup {
    pub k: usize,
    pub n: i64,
    pub j: u32,
    pub mult_norm: u32,
    pub rank: usize,
}

impl MinimalCycleGroup {
    pub fn is_nonzero(&self) -> bool {
        self.rank > 0
    }

    /// C(|m| − 1, k).
    pub fn max_rank(&self) -> usize {
        binomial(self.mult_norm as usize - 1, self.k)
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn local_weights(w: &WeightGrid, l: &LatticePoint) -> Result<Grid<i64>> {
    let r = w.r();
    let top = l.add(&LatticePoint::ones(r));
    if !w.grid().contains(&top) {
        return Err(Error::MarginTooSmall {
            bound: w.bound().clone(),
            reason: format!("E1 entry at {l} needs {top} inside the grid"),
        });
    }
    Ok(Grid::from_fn(LatticePoint::ones(r), |p| {
        w.get(&l.add(p)).expect("checked above")
    }))
}

/// All homology groups H_*(S_n ∩ B, S_n ∩ A) of the excised pair at ℓ.
fn refined_groups(w: &WeightGrid, l: &LatticePoint, n: i64) -> Result<Vec<HomologyGroup>> {
    let local = local_weights(w, l)?;
    let r = w.r();
    let full = (1u32 << r) - 1;
    let mut big = Vec::new();
    let mut small = Vec::new();
    for (base, _) in local.iter() {
        let free: u32 = (0..r)
            .filter(|&i| base.get(i) == 0)
            .fold(0, |acc, i| acc | (1 << i));
        for dirs in subsets(free & full) {
            let cube = Cube {
                base: base.clone(),
                dirs,
            };
            let wt = cube
                .vertices()
                .map(|v| *local.get(&v).expect("inside unit cube"))
                .max()
                .expect("nonempty");
            if wt <= n {
                if !base.is_zero() {
                    small.push(cube.clone());
                }
                big.push(cube);
            }
        }
    }
    relative_homology_of_cubes(&local, &big, &small)
}

/// rank (E¹_{−ℓ, |ℓ|+k})_{−2n}. Torsion is an error.
pub fn e1_refined(w: &WeightGrid, l: &LatticePoint, k: usize, n: i64) -> Result<E1Entry> {
    let groups = refined_groups(w, l, n)?;
    let g = groups.get(k).cloned().unwrap_or(HomologyGroup {
        rank: 0,
        torsion: Vec::new(),
    });
    if !g.torsion.is_empty() {
        return Err(Error::TorsionFound {
            point: l.clone(),
            k,
            n,
            invariants: g.torsion,
        });
    }
    Ok(E1Entry {
        index: E1Index::Point(l.clone()),
        k,
        n,
        rank: g.rank,
    })
}

/// Points ℓ ∈ ℕ^r with |ℓ| = d, lexicographically.
pub fn level_points(r: usize, d: u32) -> Vec<LatticePoint> {
    Rectangle::from_origin(LatticePoint::splat(r, d))
        .points()
        .filter(|p| p.norm() == d as i64)
        .collect()
}

/// rank (E¹_{−d, d+k})_{−2n} = Σ_{|ℓ| = d} rank (E¹_{−ℓ, d+k})_{−2n}.
pub fn e1_level(w: &WeightGrid, d: u32, k: usize, n: i64) -> Result<E1Entry> {
    let r = w.r();
    let need = LatticePoint::splat(r, d + 1);
    if !need.leq(w.bound()) {
        return Err(Error::MarginTooSmall {
            bound: w.bound().clone(),
            reason: format!("level {d} needs the grid to reach {need}"),
        });
    }
    let ranks: Vec<usize> = level_points(r, d)
        .par_iter()
        .map(|l| e1_refined(w, l, k, n).map(|e| e.rank))
        .collect::<Result<_>>()?;
    Ok(E1Entry {
        index: E1Index::Level(d),
        k,
        n,
        rank: ranks.into_iter().sum(),
    })
}

/// Level entry for a germ, on a grid large enough for level d.
pub fn germ_e1_level(g: &Germ, d: u32, k: usize, n: i64) -> Result<E1Entry> {
    let b = g.bound_covering(&LatticePoint::splat(g.r(), d + 1));
    e1_level(&g.weights(&b)?, d, k, n)
}

/// Indices i₀ < … < i_k with w₀(ℓ + e^I) = n − k + |I| for every I ⊆ {i₀, …, i_k}.
pub fn filtcyc_witness(
    w: &WeightGrid,
    l: &LatticePoint,
    k: usize,
    n: i64,
) -> Result<Option<Vec<usize>>> {
    let local = local_weights(w, l)?;
    let r = w.r();
    for t in 0u32..(1 << r) {
        if t.count_ones() as usize != k + 1 {
            continue;
        }
        let ok = subsets(t).all(|s| {
            let v = LatticePoint::indicator(r, s);
            *local.get(&v).expect("unit cube") == n - k as i64 + s.count_ones() as i64
        });
        if ok {
            return Ok(Some((0..r).filter(|i| (t >> i) & 1 == 1).collect()));
        }
    }
    Ok(None)
}

/// The j with n = (2 − |m|) j + k, or `UndefinedWeight`.
pub fn minimal_cycle_index(k: usize, n: i64, mult_norm: u32) -> Result<u32> {
    let undefined = Error::UndefinedWeight {
        k,
        n,
        mult: mult_norm,
    };
    if mult_norm < 3 {
        return Err(undefined);
    }
    let num = k as i64 - n;
    let den = mult_norm as i64 - 2;
    if num < 0 || num % den != 0 {
        return Err(undefined);
    }
    Ok((num / den) as u32)
}

/// 𝔐_{k,n}. Also checks that every refined entry of the same degree and weight
/// below level j|m|, and every other point of level j|m|, vanishes.
pub fn minimal_spectral_cycles(w: &WeightGrid, k: usize, n: i64) -> Result<MinimalCycleGroup> {
    let m = w.require_multiplicity()?.clone();
    let mult_norm = m.norm() as u32;
    let j = minimal_cycle_index(k, n, mult_norm)?;
    let top = j * mult_norm;
    let r = w.r();
    let need = LatticePoint::splat(r, top + 1);
    if !need.leq(w.bound()) {
        return Err(Error::MarginTooSmall {
            bound: w.bound().clone(),
            reason: format!("minimal cycles at j={j} need the grid to reach {need}"),
        });
    }
    let jm = m.scale(j);
    let rank = e1_refined(w, &jm, k, n)?.rank;

    let offenders: Vec<LatticePoint> = Rectangle::from_origin(LatticePoint::splat(r, top))
        .points()
        .filter(|l| l.norm() <= top as i64 && *l != jm)
        .filter(|l| w.get(l).expect("inside") + k as i64 == n)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|l| e1_refined(w, &l, k, n).map(|e| (l, e.rank)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|(_, rk)| *rk > 0)
        .map(|(l, _)| l)
        .collect();
    if let Some(l) = offenders.first() {
        return Err(Error::InvariantViolated(format!(
            "nonzero E1 entry at {l} (k={k}, n={n}) below the minimal level {top}"
        )));
    }
    Ok(MinimalCycleGroup {
        k,
        n,
        j,
        mult_norm,
        rank,
    })
}

/// Grid bound sufficient for 𝔐_{k,n} of a germ.
pub fn minimal_cycle_bound(g: &Germ, k: usize, n: i64) -> Result<LatticePoint> {
    let mult_norm = g.multiplicity().norm() as u32;
    let j = minimal_cycle_index(k, n, mult_norm)?;
    Ok(g
        .default_bound()
        .join(&LatticePoint::splat(g.r(), j * mult_norm + 1)))
}

/// 𝔐_{k,n} of a germ, with the semigroup-shape consequence checked as well.
pub fn germ_minimal_spectral_cycles(g: &Germ, k: usize, n: i64) -> Result<MinimalCycleGroup> {
    let w = g.weights(&minimal_cycle_bound(g, k, n)?)?;
    let group = minimal_spectral_cycles(&w, k, n)?;
    check_semigroup_shape(&w, &group)?;
    Ok(group)
}

/// rk 𝔐_{k,n} = C(|m| − 1, k).
pub fn has_maximal_rank(g: &MinimalCycleGroup, m: &LatticePoint) -> bool {
    g.rank == binomial(m.norm() as usize - 1, g.k)
}

/// ℓ ∈ S read off the weights: every step up from ℓ raises w₀. `None` off the grid.
pub fn in_semigroup(w: &WeightGrid, l: &LatticePoint) -> Option<bool> {
    let base = w.get(l)?;
    let mut all = true;
    for i in 0..w.r() {
        all &= w.get(&l.plus_unit(i))? > base;
    }
    Some(all)
}

/// If 𝔐_{k,n} ≠ 0 then S ∖ {0, m, …, (j−1)m} ⊆ jm + ℕ^r, on the grid.
pub fn check_semigroup_shape(w: &WeightGrid, g: &MinimalCycleGroup) -> Result<()> {
    if !g.is_nonzero() {
        return Ok(());
    }
    let m = w.require_multiplicity()?;
    let jm = m.scale(g.j);
    let skip: Vec<LatticePoint> = (0..g.j).map(|a| m.scale(a)).collect();
    for (p, _) in w.grid().iter() {
        if skip.contains(&p) || jm.leq(&p) {
            continue;
        }
        if in_semigroup(w, &p) == Some(true) {
            return Err(Error::InvariantViolated(format!(
                "semigroup element {p} is not above {jm} although M_{{{},{}}} != 0",
                g.k, g.n
            )));
        }
    }
    Ok(())
}

/// Nonzero refined ranks (ℓ, n, k) ↦ rank (E¹_{−ℓ, |ℓ|+k})_{−2n} for ℓ ∈ R(0, bound).
pub type PeTable = BTreeMap<(LatticePoint, i64, usize), usize>;

/// Truncated multigraded PE table. Only weights w₀(ℓ) ≤ n ≤ w₀(ℓ) + r can carry
/// nonzero entries: below, S_n ∩ B is empty; above, both S_n ∩ B and S_n ∩ A are
/// contractible.
pub fn pe_series(w: &WeightGrid, bound: &LatticePoint) -> Result<PeTable> {
    let r = w.r();
    if !bound.add(&LatticePoint::ones(r)).leq(w.bound()) {
        return Err(Error::MarginTooSmall {
            bound: w.bound().clone(),
            reason: format!("PE table up to {bound} needs one more step in every direction"),
        });
    }
    let pts: Vec<LatticePoint> = Rectangle::from_origin(bound.clone()).points().collect();
    let rows: Vec<PeTable> = pts
        .par_iter()
        .map(|l| -> Result<_> {
            let w0 = w.get(l).expect("inside");
            let mut out = PeTable::new();
            for n in w0..=w0 + r as i64 {
                for (k, g) in refined_groups(w, l, n)?.into_iter().enumerate() {
                    if !g.torsion.is_empty() {
                        return Err(Error::TorsionFound {
                            point: l.clone(),
                            k,
                            n,
                            invariants: g.torsion,
                        });
                    }
                    if g.rank > 0 {
                        out.insert((l.clone(), n, k), g.rank);
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Univariate collapse (d, n, k) ↦ Σ_{|ℓ| = d} rank.
pub fn pe_univariate(table: &PeTable) -> BTreeMap<(u32, i64, usize), usize> {
    let mut out = BTreeMap::new();
    for ((l, n, k), rk) in table {
        *out.entry((l.norm() as u32, *n, *k)).or_insert(0) += rk;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> LatticePoint {
        LatticePoint::from_slice(v)
    }

    fn d5() -> Germ {
        Germ::from_semigroup(
            p(&[4, 2]),
            [[0, 0], [2, 1], [2, 2], [3, 1], [4, 2]].iter().map(|v| p(v)),
        )
        .unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(3, 1), 3);
        assert_eq!(binomial(2, 1), 2);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(1, 2), 0);
    }

    #[test]
    fn d5_refined_entry() {
        let w = d5().weights(&p(&[6, 4])).unwrap();
        let e = e1_refined(&w, &p(&[2, 1]), 1, 0).unwrap();
        assert_eq!(e.rank, 1);
        assert_eq!(e.q(), 4);
        assert_eq!(e1_refined(&w, &p(&[2, 1]), 1, 1).unwrap().rank, 0);
        assert_eq!(
            filtcyc_witness(&w, &p(&[2, 1]), 1, 0).unwrap(),
            Some(vec![0, 1])
        );
    }

    #[test]
    fn origin_level_zero() {
        let w = d5().weights(&p(&[6, 4])).unwrap();
        assert_eq!(e1_level(&w, 0, 0, 0).unwrap().rank, 1);
        assert!(e1_level(&w, 5, 0, 0).is_err());
    }

    #[test]
    fn d5_minimal_cycle() {
        let g = germ_minimal_spectral_cycles(&d5(), 1, 0).unwrap();
        assert_eq!((g.j, g.rank), (1, 1));
        assert!(!has_maximal_rank(&g, &p(&[2, 1])));
    }

    #[test]
    fn undefined_weights() {
        assert!(matches!(
            minimal_cycle_index(1, 0, 2),
            Err(Error::UndefinedWeight { .. })
        ));
        assert!(matches!(
            minimal_cycle_index(1, 0, 4),
            Err(Error::UndefinedWeight { .. })
        ));
        assert_eq!(minimal_cycle_index(1, -1, 3).unwrap(), 2);
        assert_eq!(minimal_cycle_index(1, -1, 4).unwrap(), 1);
        assert_eq!(minimal_cycle_index(1, 1, 5).unwrap(), 0);
    }

    #[test]
    fn smooth_pe_table() {
        let w = Germ::smooth().weights(&p(&[6])).unwrap();
        let t = pe_series(&w, &p(&[5])).unwrap();
        let expected: PeTable = (0..=5u32).map(|l| ((p(&[l]), l as i64, 0), 1)).collect();
        assert_eq!(t, expected);
    }

    #[test]
    fn d5_pe_contains_cycle() {
        let w = d5().weights(&p(&[6, 4])).unwrap();
        let t = pe_series(&w, &p(&[5, 3])).unwrap();
        assert_eq!(t.get(&(p(&[2, 1]), 0, 1)), Some(&1));
        for (l, n, k) in t.keys() {
            assert_eq!(*n, w.get(l).unwrap() + *k as i64);
        }
        let uni = pe_univariate(&t);
        assert_eq!(uni.get(&(3, 0, 1)), Some(&1));
    }

    #[test]
    fn semigroup_membership_from_weights() {
        let w = d5().weights(&p(&[6, 4])).unwrap();
        assert_eq!(in_semigroup(&w, &p(&[2, 1])), Some(true));
        assert_eq!(in_semigroup(&w, &p(&[1, 1])), Some(false));
        assert_eq!(in_semigroup(&w, &p(&[6, 4])), None);
    }
}
