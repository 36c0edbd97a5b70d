use latcurve_core::catalog::{get, shipped};
use latcurve_core::classifier::{classify, classify_unimodal_plane, UnimodalFamily};
use latcurve_core::cubical::{lattice_homology, HomologyReport};

fn homology(name: &str, params: &[u32]) -> (String, HomologyReport) {
    let (e, g) = get(name, params).unwrap();
    (e.name, lattice_homology(&g.weights(g.conductor()).unwrap()).unwrap())
}

/// (rank H_k(S_n), rank U) for every level where either report is not contractible.
fn graded_ranks(a: &HomologyReport, b: &HomologyReport) -> Vec<Vec<(usize, usize)>> {
    let lo = a.min_weight.min(b.min_weight);
    let hi = a.max_weight.max(b.max_weight);
    let ks = a.r.max(b.r);
    [a, b]
        .iter()
        .flat_map(|rep| {
            (lo..=hi)
                .map(|n| (0..ks).map(|k| (rep.rank(k, n), rep.u_rank(k, n))).collect())
                .collect::<Vec<Vec<_>>>()
        })
        .collect()
}

#[test]
fn homology_isomorphism_classes() {
    let classes: [&[(&str, &[u32])]; 4] = [
        &[("E12", &[]), ("T", &[3, 6]), ("T", &[3, 7])],
        &[("E13", &[]), ("E14", &[]), ("T", &[3, 9])],
        &[("Z11", &[]), ("W12", &[]), ("T", &[4, 4])],
        &[("Z12", &[]), ("Z13", &[]), ("W13", &[]), ("T", &[5, 7])],
    ];
    for class in classes {
        let (first, base) = homology(class[0].0, class[0].1);
        for &(name, params) in &class[1..] {
            let (other, rep) = homology(name, params);
            let both = graded_ranks(&base, &rep);
            let (x, y) = both.split_at(both.len() / 2);
            assert_eq!(x, y, "{first} vs {other}");
            assert_eq!(rep.min_weight, -2, "{other}");
        }
    }
}

#[test]
fn recorded_metadata_matches_recomputation() {
    for (name, params) in shipped() {
        let (e, g) = get(name, &params).unwrap();
        assert_eq!(g.multiplicity(), &e.expected.multiplicity, "{}", e.name);
        assert_eq!(g.conductor(), &e.expected.conductor, "{}", e.name);
        assert_eq!(g.delta(), e.expected.delta, "{}", e.name);
        // Plane curves are Gorenstein.
        assert!(g.is_gorenstein(), "{}", e.name);
    }
}

#[test]
fn exceptional_germs_are_exceptional_unimodal() {
    for name in ["E12", "E13", "E14", "Z11", "Z12", "Z13", "W12", "W13"] {
        let (e, g) = get(name, &[]).unwrap();
        let v = classify(&g).unwrap();
        let fam = classify_unimodal_plane(v.cmtype, v.homological.min_weight, g.delta(), true);
        assert_eq!(fam.unwrap(), UnimodalFamily::Exceptional, "{}", e.name);
    }
    for name in ["W10", "E18"] {
        let (e, g) = get(name, &[]).unwrap();
        let v = classify(&g).unwrap();
        let fam = classify_unimodal_plane(v.cmtype, v.homological.min_weight, g.delta(), true);
        assert_eq!(fam.unwrap(), UnimodalFamily::None, "{}", e.name);
    }
}

#[test]
fn unknown_names_and_bad_params_are_rejected() {
    assert!(get("Q", &[]).is_err());
    assert!(get("D", &[3]).is_err());
    assert!(get("T", &[3, 8]).is_err());
    assert!(get("E6", &[1]).is_err());
}
