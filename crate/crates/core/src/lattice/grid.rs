use crate::lattice::point::{LatticePoint, Rectangle};

/// Dense storage of a function on R(0, bound), indexed in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid<T> {
    bound: LatticePoint,
    strides: Vec<usize>,
    data: Vec<T>,
}

impl<T: Clone> Grid<T> {
    pub fn filled(bound: LatticePoint, value: T) -> Self {
        let strides = strides_for(&bound);
        let len = Rectangle::from_origin(bound.clone()).len();
        Grid {
            bound,
            strides,
            data: vec![value; len],
        }
    }
}

impl<T> Grid<T> {
    pub fn from_fn(bound: LatticePoint, mut f: impl FnMut(&LatticePoint) -> T) -> Self {
        let strides = strides_for(&bound);
        let data = Rectangle::from_origin(bound.clone())
            .points()
            .map(|p| f(&p))
            .collect();
        Grid {
            bound,
            strides,
            data,
        }
    }

    pub fn bound(&self) -> &LatticePoint {
        &self.bound
    }

    pub fn dim(&self) -> usize {
        self.bound.dim()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn rect(&self) -> Rectangle {
        Rectangle::from_origin(self.bound.clone())
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        p.dim() == self.dim() && p.leq(&self.bound)
    }

    pub fn index_of(&self, p: &LatticePoint) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        Some(
            p.coords()
                .iter()
                .zip(&self.strides)
                .map(|(&x, &s)| x as usize * s)
                .sum(),
        )
    }

    pub fn point_at(&self, mut idx: usize) -> LatticePoint {
        let mut coords = vec![0u32; self.dim()];
        for (c, &s) in coords.iter_mut().zip(&self.strides) {
            *c = (idx / s) as u32;
            idx %= s;
        }
        LatticePoint::from_slice(&coords)
    }

    /// Index of p + e^i given the index of p, or `None` if it leaves the grid.
    pub fn step_index(&self, idx: usize, p: &LatticePoint, i: usize) -> Option<usize> {
        (p.get(i) < self.bound.get(i)).then(|| idx + self.strides[i])
    }

    pub fn stride(&self, i: usize) -> usize {
        self.strides[i]
    }

    pub fn get(&self, p: &LatticePoint) -> Option<&T> {
        self.index_of(p).map(|i| &self.data[i])
    }

    pub fn at(&self, idx: usize) -> &T {
        &self.data[idx]
    }

    pub fn set(&mut self, p: &LatticePoint, value: T) {
        let i = self
            .index_of(p)
            .unwrap_or_else(|| panic!("point {p} outside grid bound {}", self.bound));
        self.data[i] = value;
    }

    pub fn set_at(&mut self, idx: usize, value: T) {
        self.data[idx] = value;
    }

    pub fn values(&self) -> &[T] {
        &self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = (LatticePoint, &T)> + '_ {
        self.rect().points().zip(self.data.iter())
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            bound: self.bound.clone(),
            strides: self.strides.clone(),
            data: self.data.iter().map(&mut f).collect(),
        }
    }
}

impl<T: Clone> Grid<T> {
    /// Restriction to R(0, sub) for sub ≤ bound.
    pub fn restrict(&self, sub: &LatticePoint) -> Grid<T> {
        assert!(sub.leq(&self.bound), "restriction bound {sub} exceeds {}", self.bound);
        Grid::from_fn(sub.clone(), |p| self.get(p).expect("in grid").clone())
    }
}

fn strides_for(bound: &LatticePoint) -> Vec<usize> {
    let r = bound.dim();
    let mut strides = vec![1usize; r];
    for i in (0..r.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * (bound.get(i + 1) as usize + 1);
    }
    strides
}
