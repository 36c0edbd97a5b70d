//! Sublevel cubical complexes of the weight function and their integer homology.

pub mod snf;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Grid, LatticePoint, WeightGrid};
use snf::{invariant_factors, SparseMatrix};

/// The closed cube (base, dirs): vertices base + e^I for I ⊆ dirs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cube {
    pub base: LatticePoint,
    pub dirs: u32,
}

impl Cube {
    pub fn dim(&self) -> usize {
        self.dirs.count_ones() as usize
    }

    pub fn vertices(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        subsets(self.dirs).map(move |s| self.base.plus_indicator(s))
    }
}

/// All subsets of `mask`, including the empty set and `mask` itself.
pub fn subsets(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(0u32);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask {
            None
        } else {
            Some(((cur | !mask).wrapping_add(1)) & mask)
        };
        Some(cur)
    })
}

/// Cube identifiers relative to a fixed grid: `vertex_index << r | dirs`.
/// Their numeric order is the lexicographic order on (base, dirs).
#[derive(Debug, Clone)]
struct CubeSpace {
    r: usize,
    bound: LatticePoint,
    strides: Vec<usize>,
}

impl CubeSpace {
    fn new(grid: &Grid<i64>) -> Self {
        CubeSpace {
            r: grid.dim(),
            bound: grid.bound().clone(),
            strides: (0..grid.dim()).map(|i| grid.stride(i)).collect(),
        }
    }

    fn id(&self, vertex: usize, dirs: u32) -> u64 {
        ((vertex as u64) << self.r) | dirs as u64
    }

    fn split(&self, id: u64) -> (usize, u32) {
        ((id >> self.r) as usize, (id & ((1u64 << self.r) - 1)) as u32)
    }

    /// Signed faces: ∂(ℓ, I) = Σ_j (−1)^{j−1} [(ℓ + e^{i_j}, I∖i_j) − (ℓ, I∖i_j)].
    fn faces(&self, id: u64) -> Vec<(u64, i64)> {
        let (v, dirs) = self.split(id);
        let mut out = Vec::with_capacity(2 * dirs.count_ones() as usize);
        let mut sign = 1i64;
        for i in 0..self.r {
            if (dirs >> i) & 1 == 0 {
                continue;
            }
            let rest = dirs & !(1 << i);
            out.push((self.id(v + self.strides[i], rest), sign));
            out.push((self.id(v, rest), -sign));
            sign = -sign;
        }
        out
    }

    fn cube(&self, grid: &Grid<i64>, id: u64) -> Cube {
        let (v, dirs) = self.split(id);
        Cube {
            base: grid.point_at(v),
            dirs,
        }
    }
}

/// Every cube of R(0, L) with its weight (the maximum of its vertex weights),
/// grouped by dimension and sorted.
#[derive(Debug, Clone)]
struct WeightedCubes {
    space: CubeSpace,
    by_dim: Vec<Vec<(u64, i64)>>,
}

impl WeightedCubes {
    fn new(grid: &Grid<i64>) -> Self {
        let space = CubeSpace::new(grid);
        let r = space.r;
        let mut by_dim: Vec<Vec<(u64, i64)>> = vec![Vec::new(); r + 1];
        for v in 0..grid.len() {
            let p = grid.point_at(v);
            for dirs in 0u32..(1 << r) {
                if (0..r).any(|i| (dirs >> i) & 1 == 1 && p.get(i) >= space.bound.get(i)) {
                    continue;
                }
                let mut wt = i64::MIN;
                for s in subsets(dirs) {
                    let off: usize = (0..r)
                        .filter(|i| (s >> i) & 1 == 1)
                        .map(|i| space.strides[i])
                        .sum();
                    wt = wt.max(*grid.at(v + off));
                }
                by_dim[dirs.count_ones() as usize].push((space.id(v, dirs), wt));
            }
        }
        for d in &mut by_dim {
            d.sort_unstable_by_key(|&(id, _)| id);
        }
        WeightedCubes { space, by_dim }
    }

    fn level(&self, n: i64) -> Vec<Vec<u64>> {
        self.by_dim
            .iter()
            .map(|d| d.iter().filter(|&&(_, w)| w <= n).map(|&(id, _)| id).collect())
            .collect()
    }
}

/// The full subcomplex S_n ∩ R(0, L) on the vertices of weight ≤ n.
#[derive(Debug, Clone)]
pub struct SublevelComplex {
    level: i64,
    bound: LatticePoint,
    space: CubeSpace,
    weights: Grid<i64>,
    cells: Vec<Vec<u64>>,
}

impl SublevelComplex {
    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn bound(&self) -> &LatticePoint {
        &self.bound
    }

    pub fn is_empty(&self) -> bool {
        self.cells.first().is_none_or(|v| v.is_empty())
    }

    pub fn count(&self, q: usize) -> usize {
        self.cells.get(q).map_or(0, |v| v.len())
    }

    /// Cubes in lexicographic order on (base, dirs), grouped by dimension.
    pub fn cubes(&self) -> Vec<Cube> {
        let mut all: Vec<u64> = self.cells.iter().flatten().copied().collect();
        all.sort_unstable();
        all.into_iter()
            .map(|id| self.space.cube(&self.weights, id))
            .collect()
    }

    pub fn contains(&self, cube: &Cube) -> bool {
        let Some(v) = self.weights.index_of(&cube.base) else {
            return false;
        };
        let id = self.space.id(v, cube.dirs);
        self.cells
            .get(cube.dim())
            .is_some_and(|c| c.binary_search(&id).is_ok())
    }

    /// True when every cube of `self` is a cube of `other` (same ambient grid).
    pub fn is_subcomplex_of(&self, other: &SublevelComplex) -> bool {
        self.bound == other.bound
            && self.cells.iter().zip(&other.cells).all(|(a, b)| {
                a.iter().all(|id| b.binary_search(id).is_ok())
            })
    }
}

pub fn sublevel_complex(w: &WeightGrid, n: i64) -> SublevelComplex {
    let cubes = WeightedCubes::new(w.grid());
    SublevelComplex {
        level: n,
        bound: w.bound().clone(),
        space: cubes.space.clone(),
        weights: w.grid().clone(),
        cells: cubes.level(n),
    }
}

/// Free rank and torsion invariants of one homology group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

/// Boundary matrix ∂_q: columns = q-cells, rows = (q−1)-cells; faces missing
/// from `rows` are dropped (relative chains).
fn boundary(space: &CubeSpace, cols: &[u64], rows: &[u64]) -> SparseMatrix {
    let index: HashMap<u64, usize> = rows.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut m = SparseMatrix::new(rows.len(), cols.len());
    for (j, &id) in cols.iter().enumerate() {
        for (f, s) in space.faces(id) {
            if let Some(&i) = index.get(&f) {
                m.push(i, j, s);
            }
        }
    }
    m
}

/// Ranks and invariant factors of each ∂_q of a chain complex given by cells.
struct ChainData {
    counts: Vec<usize>,
    factors: Vec<Vec<u64>>,
}

impl ChainData {
    fn compute(space: &CubeSpace, cells: &[Vec<u64>]) -> Result<Self> {
        let top = cells.len();
        let mut factors = vec![Vec::new(); top + 1];
        for q in 1..top {
            factors[q] = invariant_factors(&boundary(space, &cells[q], &cells[q - 1]))?;
        }
        Ok(ChainData {
            counts: cells.iter().map(|c| c.len()).collect(),
            factors,
        })
    }

    fn rank(&self, q: usize) -> usize {
        self.factors.get(q).map_or(0, |f| f.len())
    }

    fn cycles(&self, q: usize) -> usize {
        self.counts[q] - self.rank(q)
    }

    fn groups(&self) -> Vec<HomologyGroup> {
        (0..self.counts.len())
            .map(|q| HomologyGroup {
                rank: self.cycles(q) - self.rank(q + 1),
                torsion: self
                    .factors
                    .get(q + 1)
                    .map(|f| f.iter().copied().filter(|&d| d > 1).collect())
                    .unwrap_or_default(),
            })
            .collect()
    }
}

/// H_k(cx; ℤ) for k = 0..=r.
pub fn homology(cx: &SublevelComplex) -> Result<Vec<HomologyGroup>> {
    Ok(ChainData::compute(&cx.space, &cx.cells)?.groups())
}

/// H_k(cx, sub; ℤ) for k = 0..=r; `sub` must be a subcomplex of `cx`.
pub fn relative_homology(cx: &SublevelComplex, sub: &SublevelComplex) -> Result<Vec<HomologyGroup>> {
    if !sub.is_subcomplex_of(cx) {
        return Err(Error::PreconditionUnmet(
            "relative homology needs a subcomplex on the same grid".into(),
        ));
    }
    let rel: Vec<Vec<u64>> = cx
        .cells
        .iter()
        .zip(&sub.cells)
        .map(|(a, b)| a.iter().copied().filter(|id| b.binary_search(id).is_err()).collect())
        .collect();
    Ok(ChainData::compute(&cx.space, &rel)?.groups())
}

/// Relative homology H_k(big, small) of explicit cube lists inside the grid `w`.
/// `small` must be a subcomplex of `big`.
pub fn relative_homology_of_cubes(
    w: &Grid<i64>,
    big: &[Cube],
    small: &[Cube],
) -> Result<Vec<HomologyGroup>> {
    let space = CubeSpace::new(w);
    let r = space.r;
    let to_id = |c: &Cube| -> Result<u64> {
        let v = w.index_of(&c.base).ok_or_else(|| Error::MarginTooSmall {
            bound: w.bound().clone(),
            reason: format!("cube at {} leaves the grid", c.base),
        })?;
        Ok(space.id(v, c.dirs))
    };
    let mut small_ids: Vec<u64> = small.iter().map(to_id).collect::<Result<_>>()?;
    small_ids.sort_unstable();
    let mut cells: Vec<Vec<u64>> = vec![Vec::new(); r + 1];
    for c in big {
        let id = to_id(c)?;
        if small_ids.binary_search(&id).is_err() {
            cells[c.dim()].push(id);
        }
    }
    for c in &mut cells {
        c.sort_unstable();
    }
    Ok(ChainData::compute(&space, &cells)?.groups())
}

/// Homology of one level S_n with the rank of U: H_k(S_n) → H_k(S_{n+1}).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelHomology {
    pub n: i64,
    pub groups: Vec<HomologyGroup>,
    pub u_ranks: Vec<usize>,
}

/// Lattice homology ℍ_k = ⊕_n H_k(S_n), for min w₀ ≤ n ≤ max w₀ on R(0, c).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub r: usize,
    pub min_weight: i64,
    pub max_weight: i64,
    pub levels: Vec<LevelHomology>,
}

impl HomologyReport {
    pub fn level(&self, n: i64) -> Option<&LevelHomology> {
        self.levels.iter().find(|l| l.n == n)
    }

    /// rank H_k(S_n); levels above the table are contractible, levels below are empty.
    pub fn rank(&self, k: usize, n: i64) -> usize {
        if n < self.min_weight {
            return 0;
        }
        if n > self.max_weight {
            return usize::from(k == 0);
        }
        self.level(n)
            .and_then(|l| l.groups.get(k))
            .map_or(0, |g| g.rank)
    }

    pub fn u_rank(&self, k: usize, n: i64) -> usize {
        if n < self.min_weight {
            return 0;
        }
        if n >= self.max_weight {
            return usize::from(k == 0);
        }
        self.level(n).and_then(|l| l.u_ranks.get(k)).copied().unwrap_or(0)
    }

    /// Σ_n rank H_k(S_n) over the table (for k ≥ 1 this is the rank of ℍ_k).
    pub fn total_rank(&self, k: usize) -> usize {
        self.levels
            .iter()
            .map(|l| l.groups.get(k).map_or(0, |g| g.rank))
            .sum()
    }

    pub fn has_torsion(&self) -> bool {
        self.levels
            .iter()
            .any(|l| l.groups.iter().any(|g| !g.torsion.is_empty()))
    }

    /// Rank table indexed by (k, n), used to compare lattice homologies.
    pub fn rank_table(&self) -> Vec<(i64, Vec<usize>)> {
        self.levels
            .iter()
            .map(|l| (l.n, l.groups.iter().map(|g| g.rank).collect()))
            .collect()
    }
}

/// min w₀ over R(0, c).
pub fn min_weight(w: &WeightGrid) -> Result<i64> {
    let c = w.require_conductor()?;
    let g = w.grid().restrict(c);
    Ok(*g.values().iter().min().expect("nonempty"))
}

/// max w₀ over R(0, c).
pub fn max_weight(w: &WeightGrid) -> Result<i64> {
    let c = w.require_conductor()?;
    let g = w.grid().restrict(c);
    Ok(*g.values().iter().max().expect("nonempty"))
}

/// Lattice homology computed on R(0, c). Levels run in parallel; U-ranks use
///
/// rk(H_k(X) → H_k(Y)) = dim Z_k(X) − rk ∂_{k+1}^Y + rk ∂_{k+1}^{(Y,X)},
///
/// where ∂^{(Y,X)} keeps only the rows of cells of Y not in X. This is exact over ℚ.
pub fn lattice_homology(w: &WeightGrid) -> Result<HomologyReport> {
    let c = w.require_conductor()?.clone();
    if !c.leq(w.bound()) {
        return Err(Error::MarginTooSmall {
            bound: w.bound().clone(),
            reason: format!("lattice homology needs R(0,{c}) inside the grid"),
        });
    }
    let grid = w.grid().restrict(&c);
    let cubes = WeightedCubes::new(&grid);
    let lo = *grid.values().iter().min().expect("nonempty");
    let hi = *grid.values().iter().max().expect("nonempty");
    let r = w.r();

    let levels: Vec<(ChainData, Vec<usize>, Vec<usize>)> = (lo..=hi)
        .into_par_iter()
        .map(|n| -> Result<_> {
            let x = cubes.level(n);
            let y = cubes.level(n + 1);
            let data = ChainData::compute(&cubes.space, &x)?;
            // rk ∂_{k+1}^Y and rk ∂_{k+1}^{(Y,X)} for k = 0..=r
            let mut rk_y = vec![0usize; r + 1];
            let mut rk_rel = vec![0usize; r + 1];
            for k in 0..r {
                let y_rows = &y[k];
                rk_y[k] = snf::rank(&boundary(&cubes.space, &y[k + 1], y_rows))?;
                let rel_rows: Vec<u64> = y_rows
                    .iter()
                    .copied()
                    .filter(|id| x[k].binary_search(id).is_err())
                    .collect();
                rk_rel[k] = snf::rank(&boundary(&cubes.space, &y[k + 1], &rel_rows))?;
            }
            Ok((data, rk_y, rk_rel))
        })
        .collect::<Result<_>>()?;

    let levels = levels
        .into_iter()
        .zip(lo..=hi)
        .map(|((data, rk_y, rk_rel), n)| {
            let u_ranks = (0..=r)
                .map(|k| data.cycles(k) + rk_rel[k] - rk_y[k])
                .collect();
            LevelHomology {
                n,
                groups: data.groups(),
                u_ranks,
            }
        })
        .collect();
    Ok(HomologyReport {
        r,
        min_weight: lo,
        max_weight: hi,
        levels,
    })
}

/// eu = −min w₀ + Σ_n [(b₀(S_n) − 1) + Σ_{k≥1} (−1)^k b_k(S_n)]; must equal δ.
pub fn euler_characteristic(report: &HomologyReport, delta: i64) -> Result<i64> {
    let mut eu = -report.min_weight;
    for l in &report.levels {
        let mut s = l.groups[0].rank as i64 - 1;
        for (k, g) in l.groups.iter().enumerate().skip(1) {
            let b = g.rank as i64;
            s += if k % 2 == 1 { -b } else { b };
        }
        eu += s;
    }
    if eu != delta {
        return Err(Error::EulerMismatch { eu, delta });
    }
    Ok(eu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Germ;

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
    fn subsets_enumeration() {
        let s: Vec<u32> = subsets(0b101).collect();
        assert_eq!(s, vec![0, 1, 4, 5]);
        assert_eq!(subsets(0).count(), 1);
    }

    #[test]
    fn square_boundary_squares_to_zero() {
        let w = Germ::smooth().weights(&p(&[3])).unwrap();
        let g = Grid::from_fn(p(&[2, 2, 2]), |_| 0i64);
        let space = CubeSpace::new(&g);
        let top = space.id(0, 0b111);
        let mut acc: HashMap<u64, i64> = HashMap::new();
        for (f, s) in space.faces(top) {
            for (ff, ss) in space.faces(f) {
                *acc.entry(ff).or_default() += s * ss;
            }
        }
        assert!(acc.values().all(|&v| v == 0));
        assert_eq!(w.r(), 1);
    }

    #[test]
    fn empty_below_min_weight() {
        let w = d5().weights(&p(&[4, 2])).unwrap();
        let cx = sublevel_complex(&w, -2);
        assert!(cx.is_empty());
        assert!(homology(&cx).unwrap().iter().all(|g| g.is_zero()));
    }

    #[test]
    fn d5_level_zero_has_three_components() {
        let w = d5().weights(&p(&[4, 2])).unwrap();
        let cx = sublevel_complex(&w, 0);
        let h = homology(&cx).unwrap();
        assert_eq!(h[0].rank, 3);
        assert_eq!(h[1].rank, 0);
        assert!(cx.contains(&Cube {
            base: p(&[2, 1]),
            dirs: 0b01
        }));
        assert!(!cx.contains(&Cube {
            base: p(&[2, 1]),
            dirs: 0b11
        }));
    }

    #[test]
    fn smooth_level_zero_is_a_point() {
        let w = Germ::smooth().weights(&p(&[4])).unwrap();
        let cx = sublevel_complex(&w, 0);
        assert_eq!(cx.cubes(), vec![Cube { base: p(&[0]), dirs: 0 }]);
    }

    #[test]
    fn a2_homology_report() {
        let g = Germ::numerical(&[2, 3]).unwrap();
        let w = g.weights(g.conductor()).unwrap();
        let rep = lattice_homology(&w).unwrap();
        assert_eq!(rep.min_weight, 0);
        assert_eq!(rep.rank(0, 0), 2);
        assert_eq!(rep.rank(0, 1), 1);
        assert_eq!(rep.u_rank(0, 0), 1);
        assert_eq!(euler_characteristic(&rep, g.delta()).unwrap(), 1);
        assert!(matches!(
            euler_characteristic(&rep, 2),
            Err(Error::EulerMismatch { eu: 1, delta: 2 })
        ));
    }

    #[test]
    fn smooth_euler_characteristic() {
        let g = Germ::smooth();
        let w = g.weights(&p(&[2])).unwrap();
        let rep = lattice_homology(&w).unwrap();
        assert_eq!(euler_characteristic(&rep, 0).unwrap(), 0);
    }

    #[test]
    fn relative_homology_of_complex_with_itself_vanishes() {
        let w = d5().weights(&p(&[4, 2])).unwrap();
        let cx = sublevel_complex(&w, 0);
        let rel = relative_homology(&cx, &cx).unwrap();
        assert!(rel.iter().all(|g| g.is_zero()));
        let lower = sublevel_complex(&w, -1);
        assert!(lower.is_subcomplex_of(&cx));
        assert!(relative_homology(&lower, &cx).is_err());
    }

    #[test]
    fn filtration_is_monotone() {
        let w = d5().weights(&p(&[6, 4])).unwrap();
        for n in -2..4 {
            assert!(sublevel_complex(&w, n).is_subcomplex_of(&sublevel_complex(&w, n + 1)));
        }
    }
}
