mod common;

use latcurve_core::catalog::{get, shipped};
use latcurve_core::lattice::LatticePoint;

#[test]
fn catalog_hilbert_functions_match_parametrizations() {
    for (name, params) in shipped() {
        let (entry, germ) = get(name, &params).unwrap();
        let r = germ.r();
        let bound = germ.conductor().add(&LatticePoint::splat(r, 2));
        let h = germ.hilbert(&bound).unwrap();
        let oracle = common::hilbert_from_branches(&entry.branches, &bound);
        for (l, &v) in oracle.iter() {
            assert_eq!(h.value(&l).unwrap(), v, "{} at {l}", entry.name);
        }
    }
}
