//! Integer Smith normal form: sparse elimination on unit pivots, then a dense
//! reduction of whatever is left.

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Column-major sparse integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    cols: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            cols: vec![Vec::new(); ncols],
        }
    }

    /// Adds `value` at (row, col). Entries within a column may be pushed in any order.
    pub fn push(&mut self, row: usize, col: usize, value: i64) {
        assert!(row < self.nrows, "row {row} out of range");
        if value != 0 {
            self.cols[col].push((row, value));
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = SparseMatrix::new(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.push(i, j, v);
            }
        }
        m
    }

    fn normalize(&mut self) -> Result<()> {
        for col in &mut self.cols {
            col.sort_by_key(|&(r, _)| r);
            let mut merged: Vec<(usize, i64)> = Vec::with_capacity(col.len());
            for &(r, v) in col.iter() {
                match merged.last_mut() {
                    Some((lr, lv)) if *lr == r => {
                        *lv = lv.checked_add(v).ok_or(Error::Overflow("sparse matrix entry"))?;
                    }
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|&(_, v)| v != 0);
            *col = merged;
        }
        Ok(())
    }
}

/// Nonzero invariant factors (absolute values, ascending). Their count is the rank.
pub fn invariant_factors(m: &SparseMatrix) -> Result<Vec<u64>> {
    let mut m = m.clone();
    m.normalize()?;
    let mut factors = Vec::new();
    let mut rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.nrows];
    for (j, col) in m.cols.iter().enumerate() {
        for &(i, _) in col {
            rows[i].insert(j);
        }
    }
    let ncols = m.cols.len();
    let mut alive: BTreeSet<usize> = (0..ncols).filter(|&j| !m.cols[j].is_empty()).collect();
    loop {
        // Unit pivot whose row is shortest, scanning columns in order.
        let mut pivot: Option<(usize, usize, i64)> = None;
        let mut best = usize::MAX;
        for &j in &alive {
            for &(i, v) in &m.cols[j] {
                if v.abs() == 1 {
                    let cost = (rows[i].len() - 1) * m.cols[j].len();
                    if cost < best {
                        best = cost;
                        pivot = Some((i, j, v));
                    }
                }
            }
            if best == 0 {
                break;
            }
        }
        let Some((pi, pj, pv)) = pivot else {
            break;
        };
        let pivot_col = m.cols[pj].clone();
        let others: Vec<usize> = rows[pi].iter().copied().filter(|&j| j != pj).collect();
        for j in others {
            let a = m.cols[j]
                .iter()
                .find(|&&(i, _)| i == pi)
                .map(|&(_, v)| v)
                .expect("row index is in sync");
            let f = a.checked_mul(pv).ok_or(Error::Overflow("elimination factor"))?;
            let old = std::mem::take(&mut m.cols[j]);
            let merged = axpy(&old, &pivot_col, f)?;
            for &(i, _) in &old {
                rows[i].remove(&j);
            }
            for &(i, _) in &merged {
                rows[i].insert(j);
            }
            if merged.is_empty() {
                alive.remove(&j);
            }
            m.cols[j] = merged;
        }
        for &(i, _) in &pivot_col {
            rows[i].remove(&pj);
        }
        debug_assert!(rows[pi].is_empty());
        m.cols[pj].clear();
        alive.remove(&pj);
        factors.push(1);
    }
    if !alive.is_empty() {
        let live_rows: Vec<usize> = {
            let mut set = BTreeSet::new();
            for &j in &alive {
                for &(i, _) in &m.cols[j] {
                    set.insert(i);
                }
            }
            set.into_iter().collect()
        };
        let row_pos = |i: usize| live_rows.binary_search(&i).expect("live row");
        let mut dense = vec![vec![0i64; alive.len()]; live_rows.len()];
        for (c, &j) in alive.iter().enumerate() {
            for &(i, v) in &m.cols[j] {
                dense[row_pos(i)][c] = v;
            }
        }
        factors.extend(dense_invariants(dense)?);
    }
    factors.sort_unstable();
    Ok(factors)
}

/// old − f·pivot, merged by row.
fn axpy(old: &[(usize, i64)], pivot: &[(usize, i64)], f: i64) -> Result<Vec<(usize, i64)>> {
    let mut out = Vec::with_capacity(old.len() + pivot.len());
    let (mut a, mut b) = (0, 0);
    while a < old.len() || b < pivot.len() {
        let take_old = b == pivot.len() || (a < old.len() && old[a].0 < pivot[b].0);
        let take_piv = a == old.len() || (b < pivot.len() && pivot[b].0 < old[a].0);
        if take_old {
            out.push(old[a]);
            a += 1;
        } else if take_piv {
            let v = pivot[b]
                .1
                .checked_mul(f)
                .and_then(|x| x.checked_neg())
                .ok_or(Error::Overflow("column update"))?;
            out.push((pivot[b].0, v));
            b += 1;
        } else {
            let v = pivot[b]
                .1
                .checked_mul(f)
                .and_then(|x| old[a].1.checked_sub(x))
                .ok_or(Error::Overflow("column update"))?;
            if v != 0 {
                out.push((old[a].0, v));
            }
            a += 1;
            b += 1;
        }
    }
    Ok(out)
}

/// Dense Smith normal form with smallest-magnitude pivoting.
pub fn dense_invariants(mut a: Vec<Vec<i64>>) -> Result<Vec<u64>> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = min_entry(&a, t..m, t..n) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut clean = true;
            for i in (t + 1)..m {
                if a[i][t] != 0 {
                    let q = a[i][t].div_euclid(p);
                    row_sub(&mut a, i, t, q)?;
                    if a[i][t] != 0 {
                        clean = false;
                    }
                }
            }
            for j in (t + 1)..n {
                if a[t][j] != 0 {
                    let q = a[t][j].div_euclid(p);
                    col_sub(&mut a, j, t, q)?;
                    if a[t][j] != 0 {
                        clean = false;
                    }
                }
            }
            if !clean {
                // Move the smallest remainder in row t / column t to the pivot.
                let mut best = (t, t, a[t][t].abs());
                for i in (t + 1)..m {
                    if a[i][t] != 0 && a[i][t].abs() < best.2 {
                        best = (i, t, a[i][t].abs());
                    }
                }
                for j in (t + 1)..n {
                    if a[t][j] != 0 && a[t][j].abs() < best.2 {
                        best = (t, j, a[t][j].abs());
                    }
                }
                a.swap(t, best.0);
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
                continue;
            }
            let p = a[t][t];
            let bad = ((t + 1)..m).find(|&i| ((t + 1)..n).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    // Row t += row i brings the offending entry into row t.
                    for j in 0..n {
                        a[t][j] = a[t][j]
                            .checked_add(a[i][j])
                            .ok_or(Error::Overflow("dense Smith form"))?;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].unsigned_abs());
        t += 1;
    }
    Ok(out)
}

fn min_entry(
    a: &[Vec<i64>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, i64)> = None;
    for i in rows {
        for j in cols.clone() {
            let v = a[i][j].abs();
            if v != 0 && best.is_none_or(|b| v < b.2) {
                best = Some((i, j, v));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn row_sub(a: &mut [Vec<i64>], target: usize, src: usize, q: i64) -> Result<()> {
    let n = a[target].len();
    for j in 0..n {
        let v = a[src][j]
            .checked_mul(q)
            .and_then(|x| a[target][j].checked_sub(x))
            .ok_or(Error::Overflow("dense Smith form"))?;
        a[target][j] = v;
    }
    Ok(())
}

fn col_sub(a: &mut [Vec<i64>], target: usize, src: usize, q: i64) -> Result<()> {
    for row in a.iter_mut() {
        let v = row[src]
            .checked_mul(q)
            .and_then(|x| row[target].checked_sub(x))
            .ok_or(Error::Overflow("dense Smith form"))?;
        row[target] = v;
    }
    Ok(())
}

pub fn rank(m: &SparseMatrix) -> Result<usize> {
    Ok(invariant_factors(m)?.len())
}
