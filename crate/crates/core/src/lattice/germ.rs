use crate::error::{Error, Result};
use crate::lattice::hilbert::{
    delta, gorenstein_symmetry, restrict_to_subcurve, weight_from_hilbert, HilbertGrid,
    WeightGrid,
};
use crate::lattice::point::LatticePoint;
use crate::lattice::semigroup::{
    detect_conductor, extend_semigroup, hilbert_from_semigroup, numerical_semigroup,
    semigroup_from_hilbert, SemigroupTable,
};

/// Number of times a subcurve grid is rebuilt with a doubled bound before giving up.
pub const MAX_BOUND_RETRIES: usize = 3;

/// A reduced curve germ, described by its semigroup of values below the conductor.
///
/// Every grid (Hilbert, weight, semigroup) at any bound L ≥ c is derived from this data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Germ {
    small: SemigroupTable,
    conductor: LatticePoint,
    multiplicity: LatticePoint,
    delta: i64,
}

impl Germ {
    pub fn from_small_table(small: SemigroupTable) -> Result<Self> {
        let conductor = small
            .conductor()
            .ok_or_else(|| Error::PreconditionUnmet("semigroup table without conductor".into()))?
            .clone();
        if small.bound() != &conductor {
            return Err(Error::InconsistentSemigroup(format!(
                "small table must live on R(0,{conductor})"
            )));
        }
        let r = conductor.dim();
        let e = LatticePoint::ones(r);
        let probe = conductor.add(&e);
        let ext = extend_semigroup(&small, &probe)?;
        let nonzero: Vec<LatticePoint> = ext.elements().into_iter().filter(|p| !p.is_zero()).collect();
        let multiplicity = nonzero
            .iter()
            .skip(1)
            .fold(nonzero[0].clone(), |acc, p| acc.meet(p));
        if !ext.contains(&multiplicity) || multiplicity.is_zero() {
            return Err(Error::InconsistentSemigroup(format!(
                "nonzero elements have no least element (componentwise minimum {multiplicity})"
            )));
        }
        let h = hilbert_from_semigroup(&ext, &conductor)?;
        let delta = delta(&h, &conductor)?;
        Ok(Germ {
            small,
            conductor,
            multiplicity,
            delta,
        })
    }

    /// From the conductor and the semigroup elements in R(0, c).
    pub fn from_semigroup(
        conductor: LatticePoint,
        elements: impl IntoIterator<Item = LatticePoint>,
    ) -> Result<Self> {
        Self::from_small_table(SemigroupTable::from_elements(conductor, elements)?)
    }

    /// Irreducible germ with numerical semigroup ⟨gens⟩.
    pub fn numerical(gens: &[u32]) -> Result<Self> {
        Self::from_small_table(numerical_semigroup(gens)?)
    }

    /// The smooth germ (r = 1, S = ℕ).
    pub fn smooth() -> Self {
        Self::numerical(&[1]).expect("smooth germ")
    }

    /// From an explicit Hilbert grid. The conductor is detected inside the grid
    /// (which needs L ≥ c + 2e) and the reconstruction must reproduce the whole grid.
    pub fn from_hilbert(h: &HilbertGrid) -> Result<Self> {
        let s = semigroup_from_hilbert(h)?;
        let c = detect_conductor(&s)?;
        let small = s.restrict(&c);
        let small = SemigroupTable::from_elements(c, small.elements())?;
        let germ = Self::from_small_table(small)?;
        let rebuilt = germ.hilbert(h.bound())?;
        if let Some((p, _)) = rebuilt
            .grid()
            .iter()
            .find(|(p, v)| h.get(p) != Some(**v))
        {
            return Err(Error::InconsistentInput(format!(
                "Hilbert grid is not determined by its semigroup: mismatch at {p}"
            )));
        }
        Ok(germ)
    }

    pub fn r(&self) -> usize {
        self.conductor.dim()
    }

    pub fn conductor(&self) -> &LatticePoint {
        &self.conductor
    }

    pub fn multiplicity(&self) -> &LatticePoint {
        &self.multiplicity
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    /// Semigroup elements in R(0, c).
    pub fn small_semigroup(&self) -> &SemigroupTable {
        &self.small
    }

    /// L = max(c, 2m) + 2e.
    pub fn default_bound(&self) -> LatticePoint {
        let e2 = LatticePoint::splat(self.r(), 2);
        self.conductor
            .join(&self.multiplicity.scale(2))
            .add(&e2)
    }

    /// Bound covering both `wanted` and the conductor.
    pub fn bound_covering(&self, wanted: &LatticePoint) -> LatticePoint {
        wanted.join(&self.conductor)
    }

    pub fn semigroup(&self, bound: &LatticePoint) -> Result<SemigroupTable> {
        let b = self.bound_covering(bound);
        let ext = extend_semigroup(&self.small, &b)?;
        Ok(if &b == bound { ext } else { ext.restrict(bound) })
    }

    pub fn hilbert(&self, bound: &LatticePoint) -> Result<HilbertGrid> {
        let b = self.bound_covering(bound);
        let ext = extend_semigroup(&self.small, &b)?;
        let h = hilbert_from_semigroup(&ext, &b)?;
        Ok(if &b == bound { h } else { h.restrict(bound) })
    }

    /// Weight grid on R(0, L) with multiplicity and conductor attached.
    pub fn weights(&self, bound: &LatticePoint) -> Result<WeightGrid> {
        let h = self.hilbert(bound)?;
        let w = weight_from_hilbert(&h);
        let w = w.with_conductor(self.conductor.clone());
        Ok(w)
    }

    pub fn is_gorenstein(&self) -> bool {
        let w = self.weights(&self.conductor).expect("R(0,c) is always available");
        gorenstein_symmetry(&w, &self.conductor).expect("c inside grid")
    }

    /// The subcurve C_J for the branch set encoded in `mask`.
    pub fn subcurve(&self, mask: u32) -> Result<Germ> {
        let r = self.r();
        if mask == 0 || mask >= (1u32 << r) {
            return Err(Error::InconsistentInput(format!(
                "subcurve mask {mask:#b} is not a nonempty subset of {r} branches"
            )));
        }
        if mask == (1u32 << r) - 1 {
            return Ok(self.clone());
        }
        let mut bound = self.default_bound();
        let mut last = None;
        for _ in 0..=MAX_BOUND_RETRIES {
            let h = self.hilbert(&bound)?;
            let hs = restrict_to_subcurve(&h, mask)?;
            match Germ::from_hilbert(&hs) {
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

    /// The branch C_i (0-based).
    pub fn branch(&self, i: usize) -> Result<Germ> {
        self.subcurve(1 << i)
    }

    /// Ĉ_i: the union of all branches except the i-th (0-based). `None` when r = 1.
    pub fn complement(&self, i: usize) -> Result<Option<Germ>> {
        let r = self.r();
        if r == 1 {
            return Ok(None);
        }
        let full = (1u32 << r) - 1;
        self.subcurve(full & !(1 << i)).map(Some)
    }
}
