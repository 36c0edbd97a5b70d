//! Independent oracle: the Hilbert function of a plane germ computed directly from
//! branch parametrizations, as the rank (mod a prime) of Taylor coefficient matrices.

#![allow(dead_code)]

pub mod props;
pub mod tables;

use latcurve_core::catalog::Parametrization;
use latcurve_core::lattice::{Grid, LatticePoint};

const P: i64 = 1_000_003;

fn series(terms: &[(i64, u32)], len: usize) -> Vec<i64> {
    let mut s = vec![0; len];
    for &(c, e) in terms {
        if (e as usize) < len {
            s[e as usize] = (s[e as usize] + c).rem_euclid(P);
        }
    }
    s
}

fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let n = a.len();
    let mut out = vec![0; n];
    for (i, &x) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
        for (j, &y) in b.iter().take(n - i).enumerate() {
            out[i + j] = (out[i + j] + x * y) % P;
        }
    }
    out
}

fn inv(a: i64) -> i64 {
    let (mut base, mut e, mut acc) = (a.rem_euclid(P), P - 2, 1i64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % P;
        }
        base = base * base % P;
        e >>= 1;
    }
    acc
}

fn rank(mut rows: Vec<Vec<i64>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rk = 0;
    for col in 0..cols {
        let Some(piv) = (rk..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rk, piv);
        let iv = inv(rows[rk][col]);
        let pivot = rows[rk].clone();
        for row in rows.iter_mut().skip(rk + 1) {
            if row[col] != 0 {
                let f = row[col] * iv % P;
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = (*x - f * y).rem_euclid(P);
                }
            }
        }
        rk += 1;
    }
    rk
}

/// h on R(0, bound) for the germ with the given branches.
pub fn hilbert_from_branches(branches: &[Parametrization], bound: &LatticePoint) -> Grid<i64> {
    let len = bound.coords().iter().copied().max().unwrap_or(0) as usize + 1;
    let deg = len;
    // Taylor coefficients of x^a y^b on every branch, for a + b <= deg.
    let mut monomials: Vec<Vec<Vec<i64>>> = Vec::new();
    let xs: Vec<Vec<i64>> = branches.iter().map(|b| series(&b.x, len)).collect();
    let ys: Vec<Vec<i64>> = branches.iter().map(|b| series(&b.y, len)).collect();
    let mut one = vec![0; len];
    one[0] = 1;
    let mut xpow: Vec<Vec<i64>> = vec![one.clone(); branches.len()];
    for a in 0..=deg {
        let mut cur = xpow.clone();
        for _ in 0..=(deg - a) {
            monomials.push(cur.clone());
            for (c, y) in cur.iter_mut().zip(&ys) {
                *c = mul(c, y);
            }
        }
        for (c, x) in xpow.iter_mut().zip(&xs) {
            *c = mul(c, x);
        }
    }
    Grid::from_fn(bound.clone(), |l| {
        let rows = monomials
            .iter()
            .map(|m| {
                m.iter()
                    .zip(l.coords())
                    .flat_map(|(s, &li)| s[..li as usize].iter().copied())
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        rank(rows)
    }
    .try_into()
    .expect("small rank"))
}
