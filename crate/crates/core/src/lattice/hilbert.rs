use crate::error::{Error, Result};
use crate::lattice::grid::Grid;
use crate::lattice::point::LatticePoint;

/// The Hilbert function h on R(0, L).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertGrid {
    grid: Grid<i64>,
}

impl HilbertGrid {
    /// Validates h(0) = 0, unit steps in {0, 1} and local submodularity
    /// (which on a product of chains is equivalent to the matroid inequality).
    pub fn new(grid: Grid<i64>) -> Result<Self> {
        let r = grid.dim();
        if *grid.at(0) != 0 {
            return Err(Error::InconsistentInput(format!(
                "h(0) = {} instead of 0",
                grid.at(0)
            )));
        }
        for idx in 0..grid.len() {
            let p = grid.point_at(idx);
            let here = *grid.at(idx);
            for i in 0..r {
                let Some(ii) = grid.step_index(idx, &p, i) else {
                    continue;
                };
                let step = grid.at(ii) - here;
                if !(0..=1).contains(&step) {
                    return Err(Error::InconsistentInput(format!(
                        "h step {step} from {p} in direction {}",
                        i + 1
                    )));
                }
                for j in (i + 1)..r {
                    let Some(jj) = grid.step_index(idx, &p, j) else {
                        continue;
                    };
                    let ij = grid
                        .step_index(ii, &p.plus_unit(i), j)
                        .expect("both steps in grid");
                    if grid.at(ii) + grid.at(jj) < here + grid.at(ij) {
                        return Err(Error::InconsistentInput(format!(
                            "matroid inequality fails at {p} in directions {} and {}",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        Ok(HilbertGrid { grid })
    }

    pub fn r(&self) -> usize {
        self.grid.dim()
    }

    pub fn bound(&self) -> &LatticePoint {
        self.grid.bound()
    }

    pub fn grid(&self) -> &Grid<i64> {
        &self.grid
    }

    pub fn get(&self, p: &LatticePoint) -> Option<i64> {
        self.grid.get(p).copied()
    }

    pub fn value(&self, p: &LatticePoint) -> Result<i64> {
        self.get(p).ok_or_else(|| Error::MarginTooSmall {
            bound: self.bound().clone(),
            reason: format!("h({p}) requested outside the grid"),
        })
    }

    /// h̄(ℓ) = |ℓ| − h(ℓ).
    pub fn conjugate(&self, p: &LatticePoint) -> Option<i64> {
        self.get(p).map(|h| p.norm() - h)
    }

    pub fn restrict(&self, sub: &LatticePoint) -> HilbertGrid {
        HilbertGrid {
            grid: self.grid.restrict(sub),
        }
    }
}

/// The weight function w₀ = 2h − |ℓ| on R(0, L).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightGrid {
    grid: Grid<i64>,
    multiplicity: Option<LatticePoint>,
    conductor: Option<LatticePoint>,
}

impl WeightGrid {
    pub fn r(&self) -> usize {
        self.grid.dim()
    }

    pub fn bound(&self) -> &LatticePoint {
        self.grid.bound()
    }

    pub fn grid(&self) -> &Grid<i64> {
        &self.grid
    }

    pub fn get(&self, p: &LatticePoint) -> Option<i64> {
        self.grid.get(p).copied()
    }

    pub fn value(&self, p: &LatticePoint) -> Result<i64> {
        self.get(p).ok_or_else(|| Error::MarginTooSmall {
            bound: self.bound().clone(),
            reason: format!("w0({p}) requested outside the grid"),
        })
    }

    pub fn multiplicity(&self) -> Option<&LatticePoint> {
        self.multiplicity.as_ref()
    }

    pub fn conductor(&self) -> Option<&LatticePoint> {
        self.conductor.as_ref()
    }

    pub fn with_conductor(mut self, c: LatticePoint) -> Self {
        self.conductor = Some(c);
        self
    }

    pub fn require_multiplicity(&self) -> Result<&LatticePoint> {
        self.multiplicity.as_ref().ok_or_else(|| Error::MarginTooSmall {
            bound: self.bound().clone(),
            reason: "multiplicity vector not determined inside the grid".into(),
        })
    }

    pub fn require_conductor(&self) -> Result<&LatticePoint> {
        self.conductor.as_ref().ok_or_else(|| {
            Error::PreconditionUnmet("conductor has not been detected for this weight grid".into())
        })
    }
}

/// w₀(ℓ) = 2h(ℓ) − |ℓ|; the multiplicity is read off as m_i = max{k : h(k e^i) ≤ 1}.
pub fn weight_from_hilbert(h: &HilbertGrid) -> WeightGrid {
    let grid = Grid::from_fn(h.bound().clone(), |p| {
        2 * h.get(p).expect("same bound") - p.norm()
    });
    let r = h.r();
    let mut m = Vec::with_capacity(r);
    for i in 0..r {
        let mut k = 0u32;
        let found = loop {
            let next = LatticePoint::unit(r, i).scale(k + 1);
            match h.get(&next) {
                Some(v) if v <= 1 => k += 1,
                Some(_) => break k > 0,
                None => break false,
            }
        };
        if !found {
            break;
        }
        m.push(k);
    }
    let multiplicity = (m.len() == r).then(|| LatticePoint::from_slice(&m));
    WeightGrid {
        grid,
        multiplicity,
        conductor: None,
    }
}

/// Restriction of h to the coordinate face of the branches in `mask`.
pub fn restrict_to_subcurve(h: &HilbertGrid, mask: u32) -> Result<HilbertGrid> {
    let r = h.r();
    if mask == 0 || mask >= (1u32 << r) {
        return Err(Error::InconsistentInput(format!(
            "subcurve mask {mask:#b} is not a nonempty subset of {r} branches"
        )));
    }
    let face_bound = h.bound().project(mask);
    let grid = Grid::from_fn(face_bound, |p| {
        h.get(&p.embed(r, mask)).expect("face inside grid")
    });
    Ok(HilbertGrid { grid })
}

/// δ = |c| − h(c).
pub fn delta(h: &HilbertGrid, c: &LatticePoint) -> Result<i64> {
    Ok(c.norm() - h.value(c)?)
}

/// w₀(ℓ) = w₀(c − ℓ) on R(0, c).
pub fn gorenstein_symmetry(w: &WeightGrid, c: &LatticePoint) -> Result<bool> {
    if !c.leq(w.bound()) {
        return Err(Error::MarginTooSmall {
            bound: w.bound().clone(),
            reason: format!("symmetry check needs R(0,{c})"),
        });
    }
    for p in crate::lattice::Rectangle::from_origin(c.clone()).points() {
        let q = c.checked_sub(&p).expect("p ≤ c");
        if w.get(&p) != w.get(&q) {
            return Ok(false);
        }
    }
    Ok(true)
}
