use crate::error::{Error, Result};
use crate::lattice::grid::Grid;
use crate::lattice::hilbert::HilbertGrid;
use crate::lattice::point::LatticePoint;

/// Membership table of the semigroup of values on R(0, L).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupTable {
    grid: Grid<bool>,
    conductor: Option<LatticePoint>,
}

impl SemigroupTable {
    /// Table on R(0, c) from the elements below the conductor.
    /// Checks 0, c ∈ S, min-closure and minimality of c.
    pub fn from_elements(
        conductor: LatticePoint,
        elements: impl IntoIterator<Item = LatticePoint>,
    ) -> Result<Self> {
        let r = conductor.dim();
        let mut grid = Grid::filled(conductor.clone(), false);
        for p in elements {
            if p.dim() != r {
                return Err(Error::DimensionMismatch {
                    expected: r,
                    got: p.dim(),
                });
            }
            if !p.leq(&conductor) {
                return Err(Error::InconsistentSemigroup(format!(
                    "element {p} lies outside R(0,{conductor})"
                )));
            }
            grid.set(&p, true);
        }
        let table = SemigroupTable {
            grid,
            conductor: Some(conductor),
        };
        table.check_small()?;
        Ok(table)
    }

    /// Table from an explicit membership grid (conductor unknown).
    pub fn from_grid(grid: Grid<bool>) -> Self {
        SemigroupTable {
            grid,
            conductor: None,
        }
    }

    fn check_small(&self) -> Result<()> {
        let c = self.conductor.as_ref().expect("small tables carry c");
        let r = c.dim();
        if !self.contains(&LatticePoint::zero(r)) {
            return Err(Error::InconsistentSemigroup("0 is not an element".into()));
        }
        if !self.contains(c) {
            return Err(Error::InconsistentSemigroup(format!(
                "conductor {c} is not an element"
            )));
        }
        if let Some((a, b)) = self.min_closure_violation() {
            return Err(Error::InconsistentSemigroup(format!(
                "min({a},{b}) is not an element"
            )));
        }
        // Minimality of c: c - e^i must be missing whenever c_i > 0.
        for i in 0..r {
            if c.get(i) == 0 {
                continue;
            }
            let below = c.with_coord(i, c.get(i) - 1);
            if self.contains(&below) {
                return Err(Error::InconsistentSemigroup(format!(
                    "{c} is not the conductor: {below} is also an element"
                )));
            }
        }
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.grid.dim()
    }

    pub fn bound(&self) -> &LatticePoint {
        self.grid.bound()
    }

    pub fn conductor(&self) -> Option<&LatticePoint> {
        self.conductor.as_ref()
    }

    pub fn grid(&self) -> &Grid<bool> {
        &self.grid
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.grid.get(p).copied().unwrap_or(false)
    }

    pub fn elements(&self) -> Vec<LatticePoint> {
        self.grid
            .iter()
            .filter(|(_, &b)| b)
            .map(|(p, _)| p)
            .collect()
    }

    pub fn restrict(&self, sub: &LatticePoint) -> SemigroupTable {
        SemigroupTable {
            grid: self.grid.restrict(sub),
            conductor: self
                .conductor
                .as_ref()
                .filter(|c| c.leq(sub))
                .cloned(),
        }
    }

    /// First pair (a, b) of elements whose componentwise minimum is missing.
    pub fn min_closure_violation(&self) -> Option<(LatticePoint, LatticePoint)> {
        let elems = self.elements();
        for (x, a) in elems.iter().enumerate() {
            for b in &elems[x + 1..] {
                if !self.contains(&a.meet(b)) {
                    return Some((a.clone(), b.clone()));
                }
            }
        }
        None
    }
}

/// Extends a table on R(0, c) to R(0, L) by the rule ℓ ∈ S iff min(ℓ, c) ∈ S,
/// then checks the semigroup → Hilbert → semigroup round trip.
pub fn extend_semigroup(small: &SemigroupTable, bound: &LatticePoint) -> Result<SemigroupTable> {
    let c = small
        .conductor()
        .ok_or_else(|| Error::PreconditionUnmet("extension needs a conductor".into()))?
        .clone();
    if bound.dim() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            got: bound.dim(),
        });
    }
    if !c.leq(bound) {
        return Err(Error::MarginTooSmall {
            bound: bound.clone(),
            reason: format!("extension bound must dominate the conductor {c}"),
        });
    }
    let grid = Grid::from_fn(bound.clone(), |p| small.contains(&p.meet(&c)));
    let table = SemigroupTable {
        grid,
        conductor: Some(c),
    };
    let h = hilbert_from_semigroup(&table, bound)
        .map_err(|e| Error::InconsistentSemigroup(format!("extension failed: {e}")))?;
    validate_semigroup_consistency(&table, &h)?;
    Ok(table)
}

/// Hilbert function from the semigroup: h(0) = 0 and h(ℓ + e^i) − h(ℓ) = [Δ̄_i(ℓ) ≠ ∅].
#[allow(clippy::needless_range_loop)]
pub fn hilbert_from_semigroup(s: &SemigroupTable, bound: &LatticePoint) -> Result<HilbertGrid> {
    let r = bound.dim();
    if let Some(c) = s.conductor() {
        if !c.leq(bound) {
            return Err(Error::MarginTooSmall {
                bound: bound.clone(),
                reason: format!("Hilbert reconstruction needs L >= c = {c}"),
            });
        }
    }
    if !bound.leq(s.bound()) {
        return Err(Error::MarginTooSmall {
            bound: s.bound().clone(),
            reason: format!("semigroup table does not cover R(0,{bound})"),
        });
    }
    let sg = s.grid().restrict(bound);
    let n = sg.len();
    // witness[i][idx]: some element s ≥ ℓ with s_i = ℓ_i exists in R(0, L).
    // Since max(ℓ, c) ∈ S, min-closure confines the search to R(0, max(ℓ, c)).
    let mut witness = vec![vec![false; n]; r];
    for idx in (0..n).rev() {
        let p = sg.point_at(idx);
        let here = *sg.at(idx);
        for (i, wi) in witness.iter_mut().enumerate() {
            let mut found = here;
            for j in 0..r {
                if found {
                    break;
                }
                if j == i {
                    continue;
                }
                if let Some(jj) = sg.step_index(idx, &p, j) {
                    found = wi[jj];
                }
            }
            wi[idx] = found;
        }
    }
    let mut values = Grid::filled(bound.clone(), 0i64);
    for idx in 1..n {
        let p = sg.point_at(idx);
        let mut value: Option<i64> = None;
        for i in 0..r {
            if p.get(i) == 0 {
                continue;
            }
            let prev = idx - sg.stride(i);
            let v = values.at(prev) + i64::from(witness[i][prev]);
            match value {
                None => value = Some(v),
                Some(u) if u != v => return Err(Error::PathInconsistency { point: p }),
                Some(_) => {}
            }
        }
        values.set_at(idx, value.expect("nonzero point has a predecessor"));
    }
    HilbertGrid::new(values).map_err(|e| Error::InconsistentSemigroup(e.to_string()))
}

/// S = {ℓ : h(ℓ + e^i) > h(ℓ) for all i}, on R(0, L − e).
pub fn semigroup_from_hilbert(h: &HilbertGrid) -> Result<SemigroupTable> {
    let r = h.r();
    let e = LatticePoint::ones(r);
    let inner = h.bound().checked_sub(&e).ok_or_else(|| Error::MarginTooSmall {
        bound: h.bound().clone(),
        reason: "membership tests need one layer of margin in every direction".into(),
    })?;
    let hg = h.grid();
    let grid = Grid::from_fn(inner, |p| {
        let idx = hg.index_of(p).expect("inner point");
        (0..r).all(|i| {
            let ii = hg.step_index(idx, p, i).expect("margin");
            hg.at(ii) > hg.at(idx)
        })
    });
    Ok(SemigroupTable::from_grid(grid))
}

/// Minimal c with every table point ≥ c in S. Requires one full layer above c
/// inside the table (c + e ≤ table bound).
pub fn detect_conductor(s: &SemigroupTable) -> Result<LatticePoint> {
    let c = conductor_candidate(s)?;
    let e = LatticePoint::ones(s.r());
    if !c.add(&e).leq(s.bound()) {
        return Err(Error::MarginTooSmall {
            bound: s.bound().clone(),
            reason: format!(
                "conductor candidate {c} has no stabilization layer inside the semigroup table"
            ),
        });
    }
    Ok(c)
}

fn conductor_candidate(s: &SemigroupTable) -> Result<LatticePoint> {
    let g = s.grid();
    let r = s.r();
    let n = g.len();
    let mut up = vec![false; n];
    for idx in (0..n).rev() {
        let p = g.point_at(idx);
        up[idx] = *g.at(idx)
            && (0..r).all(|j| g.step_index(idx, &p, j).is_none_or(|jj| up[jj]));
    }
    let mut c: Option<LatticePoint> = None;
    for (idx, &u) in up.iter().enumerate() {
        if u {
            let p = g.point_at(idx);
            c = Some(match c {
                None => p,
                Some(q) => q.meet(&p),
            });
        }
    }
    let c = c.ok_or_else(|| Error::MarginTooSmall {
        bound: s.bound().clone(),
        reason: "no point of the table has all points above it in the semigroup".into(),
    })?;
    let ci = g.index_of(&c).expect("in table");
    if !up[ci] {
        return Err(Error::InconsistentSemigroup(format!(
            "the points with full upper sets do not form a cone (candidate {c})"
        )));
    }
    Ok(c)
}

/// Checks semigroup_from_hilbert(h) = S on the common grid.
pub fn validate_semigroup_consistency(s: &SemigroupTable, h: &HilbertGrid) -> Result<()> {
    let Ok(back) = semigroup_from_hilbert(h) else {
        return Ok(());
    };
    for (p, &member) in back.grid().iter() {
        if s.grid().get(&p).is_some() && s.contains(&p) != member {
            return Err(Error::InconsistentSemigroup(format!(
                "round trip disagrees at {p}: table says {}, Hilbert function says {member}",
                s.contains(&p)
            )));
        }
    }
    Ok(())
}

/// Numerical semigroup generated by `gens` (gcd 1), as a table on R(0, c).
pub fn numerical_semigroup(gens: &[u32]) -> Result<SemigroupTable> {
    if gens.is_empty() || gens.contains(&0) {
        return Err(Error::InconsistentSemigroup(
            "generators must be positive".into(),
        ));
    }
    let g = gens.iter().fold(0u32, |a, &b| gcd(a, b));
    if g != 1 {
        return Err(Error::InconsistentSemigroup(format!(
            "generators have gcd {g}"
        )));
    }
    let smallest = *gens.iter().min().expect("nonempty") as usize;
    let mut member = vec![true];
    let mut run = 1usize;
    let mut k = 1usize;
    while run < smallest {
        let inside = gens
            .iter()
            .any(|&a| (a as usize) <= k && member[k - a as usize]);
        member.push(inside);
        run = if inside { run + 1 } else { 0 };
        k += 1;
    }
    // The run of `smallest` consecutive elements started at k - smallest.
    let c = if smallest == 1 { 0 } else { k - smallest };
    let c = c as u32;
    SemigroupTable::from_elements(
        LatticePoint::from_slice(&[c]),
        (0..=c)
            .filter(|&x| member[x as usize])
            .map(|x| LatticePoint::from_slice(&[x])),
    )
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
