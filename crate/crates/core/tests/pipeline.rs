use quadalg::coeffs::{PrimeField, DEFAULT_PRIME};
use quadalg::freealg::builtin_presentation;
use quadalg::groebner::hilbert_series;
use quadalg::search::{closed_dn, gs_lower_threshold};
use quadalg::series::gs_bound;
use quadalg::tensorlat::{builtin_witness, eq_dim, Construction};

#[test]
fn builtin_series_match_their_bounds() {
    let p = builtin_presentation("lemma3-4", None).unwrap();
    let h = hilbert_series(&p, 5).unwrap();
    assert_eq!(h.to_i64().unwrap(), vec![1, 3, 5, 4, 0, 0]);
    let g = gs_bound(3, 4, 5).unwrap();
    assert_eq!(g.to_i64().unwrap(), vec![1, 3, 5, 3, 0, 0]);
}

#[test]
fn gfield_witness_vanishes_in_degree_four() {
    let f = PrimeField::new(DEFAULT_PRIME).unwrap();
    let w = builtin_witness(&f, Construction::Gfield(5)).unwrap();
    assert_eq!(eq_dim(&w.space, 5, 4, 100_000).unwrap(), 0);
    assert!(eq_dim(&w.space, 5, 3, 100_000).unwrap() > 0);
}

#[test]
fn closed_form_sits_above_the_gs_threshold() {
    for n in 3..20u64 {
        let d = closed_dn(n).unwrap().value;
        assert!(d >= gs_lower_threshold(n, 4).unwrap(), "n = {n}");
    }
}
