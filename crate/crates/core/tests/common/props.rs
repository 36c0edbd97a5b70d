//! Invariant checks shared by the property suite and the acceptance target. Each returns
//! the first violation as a message.

use latcurve_core::catalog::CatalogEntry;
use latcurve_core::cubical::{lattice_homology, min_weight};
use latcurve_core::lattice::{
    gorenstein_symmetry, hilbert_from_semigroup, semigroup_from_hilbert, Germ, LatticePoint,
    Rectangle,
};
use latcurve_core::motivic::{hilbert_from_motivic, motivic_grid};
use latcurve_core::spectral::{e1_level, e1_refined, filtcyc_witness, minimal_spectral_cycles};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub type Check = std::result::Result<(), String>;

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn point_in(b: &LatticePoint) -> impl Strategy<Value = LatticePoint> {
    b.coords()
        .iter()
        .map(|&x| 0..=x)
        .collect::<Vec<_>>()
        .prop_map(LatticePoint::from_slice_owned)
}

trait FromOwned {
    fn from_slice_owned(v: Vec<u32>) -> Self;
}

impl FromOwned for LatticePoint {
    fn from_slice_owned(v: Vec<u32>) -> Self {
        LatticePoint::from_slice(&v)
    }
}

fn margin(g: &Germ, k: u32) -> LatticePoint {
    g.conductor().add(&LatticePoint::splat(g.r(), k))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Summing the increments [Δ̄_i(ℓ') ≠ ∅] along a random monotone path from 0 gives h(ℓ).
pub fn path_independence(g: &Germ, cases: u32) -> Check {
    let big = margin(g, 3);
    let s = g.semigroup(&big).map_err(err)?;
    let h = g.hilbert(&big).map_err(err)?;
    let c = g.conductor().clone();
    let increment = |l: &LatticePoint, i: usize| -> bool {
        let hi = l.join(&c).with_coord(i, l.get(i));
        let lo = l.clone();
        Rectangle::new(lo, hi)
            .expect("lo <= hi")
            .points()
            .any(|p| s.contains(&p))
    };
    let strat = point_in(&margin(g, 2)).prop_flat_map(|l| {
        let dirs: Vec<usize> = (0..l.dim())
            .flat_map(|i| std::iter::repeat_n(i, l.get(i) as usize))
            .collect();
        (Just(l), Just(dirs).prop_shuffle())
    });
    runner(cases)
        .run(&strat, |(l, dirs)| {
            let mut cur = LatticePoint::zero(l.dim());
            let mut total = 0i64;
            for i in dirs {
                total += i64::from(increment(&cur, i));
                cur = cur.plus_unit(i);
            }
            prop_assert_eq!(total, h.value(&l).unwrap(), "at {}", l);
            Ok(())
        })
        .map_err(err)
}

/// h(ℓ) + h(ℓ') ≥ h(ℓ ∧ ℓ') + h(ℓ ∨ ℓ') and the same for w₀.
pub fn matroid(g: &Germ, cases: u32) -> Check {
    let b = margin(g, 2);
    let h = g.hilbert(&b).map_err(err)?;
    let w = g.weights(&b).map_err(err)?;
    runner(cases)
        .run(&(point_in(&b), point_in(&b)), |(a, c)| {
            let (lo, hi) = (a.meet(&c), a.join(&c));
            let hv = |p: &LatticePoint| h.value(p).unwrap();
            prop_assert!(hv(&a) + hv(&c) >= hv(&lo) + hv(&hi), "h at {} {}", a, c);
            let wv = |p: &LatticePoint| w.get(p).unwrap();
            prop_assert!(wv(&a) + wv(&c) >= wv(&lo) + wv(&hi), "w at {} {}", a, c);
            Ok(())
        })
        .map_err(err)
}

/// w₀(ℓ) = 2 − |ℓ| for 0 < ℓ ≤ m.
pub fn multiplicity_weights(g: &Germ) -> Check {
    let m = g.multiplicity().clone();
    let w = g.weights(&g.bound_covering(&m)).map_err(err)?;
    for p in Rectangle::from_origin(m).points().filter(|p| !p.is_zero()) {
        let v = w.get(&p).unwrap();
        if v != 2 - p.norm() {
            return Err(format!("w{p} = {v}, expected {}", 2 - p.norm()));
        }
    }
    Ok(())
}

/// w₀(ℓ) = w₀(c − ℓ) on R(0, c) for plane germs.
pub fn plane_symmetry(g: &Germ, e: &CatalogEntry) -> Check {
    if !e.plane {
        return Ok(());
    }
    let w = g.weights(g.conductor()).map_err(err)?;
    match gorenstein_symmetry(&w, g.conductor()).map_err(err)? {
        true => Ok(()),
        false => Err("w0 is not symmetric on R(0,c)".into()),
    }
}

/// Over R(0, c): no torsion, nonzero ⇒ n = w₀(ℓ) + k, and a witness cube for every
/// nonzero entry.
pub fn e1_laws(g: &Germ) -> Check {
    let r = g.r();
    let w = g.weights(&margin(g, 1)).map_err(err)?;
    for l in Rectangle::from_origin(g.conductor().clone()).points() {
        let wl = w.get(&l).unwrap();
        for k in 0..=r {
            for n in wl - 2..=wl + r as i64 + 2 {
                let e = e1_refined(&w, &l, k, n).map_err(err)?;
                if e.rank == 0 {
                    continue;
                }
                if n != wl + k as i64 {
                    return Err(format!("E1 at {l}, k={k}, n={n} is nonzero off n = w + k"));
                }
                if filtcyc_witness(&w, &l, k, n).map_err(err)?.is_none() {
                    return Err(format!("E1 at {l}, k={k}, n={n} has no witness cube"));
                }
            }
        }
    }
    Ok(())
}

/// For |m| ≥ 3: level entries of weight (2 − |m|)j + k vanish below level j|m|, and
/// points of level j|m| other than jm carry nothing.
pub fn spectral_vanishing(g: &Germ) -> Check {
    let mn = g.multiplicity().norm() as u32;
    if mn < 3 {
        return Ok(());
    }
    let r = g.r();
    for j in 0..=2u32 {
        let top = j * mn;
        let w = g
            .weights(&g.bound_covering(&LatticePoint::splat(r, top + 1)))
            .map_err(err)?;
        for k in 0..=2usize.min(r) {
            let n = (2 - mn as i64) * j as i64 + k as i64;
            for d in 0..top {
                let e = e1_level(&w, d, k, n).map_err(err)?;
                if e.rank != 0 {
                    return Err(format!("level {d} carries rank {} at k={k}, n={n}", e.rank));
                }
            }
            minimal_spectral_cycles(&w, k, n).map_err(err)?;
        }
    }
    Ok(())
}

/// S → h → S, h → 𝔭 → h and h → S → h all reproduce their input.
pub fn round_trips(g: &Germ) -> Check {
    let b = margin(g, 3);
    let h = g.hilbert(&b).map_err(err)?;
    let s = g.semigroup(&b).map_err(err)?;
    let s2 = semigroup_from_hilbert(&h).map_err(err)?;
    for (p, &v) in s2.grid().iter() {
        if s.contains(&p) != v {
            return Err(format!("S -> h -> S differs at {p}"));
        }
    }
    let h2 = hilbert_from_semigroup(&s, &margin(g, 2)).map_err(err)?;
    for (p, &v) in h2.grid().iter() {
        if h.value(&p).map_err(err)? != v {
            return Err(format!("h -> S -> h differs at {p}"));
        }
    }
    let coeffs = motivic_grid(&h, &margin(g, 1)).map_err(err)?;
    let h3 = hilbert_from_motivic(&coeffs).map_err(err)?;
    for (p, &v) in h3.grid().iter() {
        if h.value(&p).map_err(err)? != v {
            return Err(format!("h -> motivic -> h differs at {p}"));
        }
    }
    Ok(())
}

/// min w₀ = −2 on R(0, c), both directly and from the homology report.
pub fn tpq_min_weight(g: &Germ) -> Check {
    let w = g.weights(g.conductor()).map_err(err)?;
    let direct = min_weight(&w).map_err(err)?;
    let report = lattice_homology(&w).map_err(err)?;
    if direct != -2 || report.min_weight != -2 {
        return Err(format!("min w0 = {direct} (report {})", report.min_weight));
    }
    Ok(())
}
