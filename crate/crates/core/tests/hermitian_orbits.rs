mod common;

use std::sync::OnceLock;

use borcherds::hermitian::{
    conjugate_b, count_coefficients, count_orbits, delta_power, generators, gl2_orbit_reduce, orbit_enumerate,
    restrict_diagonal, HermitianIndex,
};
use borcherds::{compute_product, LatticeL0, ProductResult};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

fn definite() -> impl Strategy<Value = HermitianIndex> {
    (1i64..12, -15i64..16, -10i64..11, 1i64..12)
        .prop_map(|(a, b1, b2, c)| HermitianIndex::new(a, b1, b2, c))
        .prop_filter("definite", |t| t.is_definite())
}

fn phi45() -> &'static ProductResult {
    static R: OnceLock<ProductResult> = OnceLock::new();
    R.get_or_init(|| compute_product(&common::fixture("phi45_input.json"), 7).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reduction_is_idempotent_and_recorded(t in definite()) {
        let (r, tr) = gl2_orbit_reduce(&t).unwrap();
        prop_assert_eq!(t.transform(&tr.matrix), r);
        prop_assert!(tr.det.is_unit());
        prop_assert_eq!(r.disc3(), t.disc3());
        prop_assert!(r.a <= r.c && r.a <= t.a);
        prop_assert_eq!(gl2_orbit_reduce(&r).unwrap().0, r);
    }

    #[test]
    fn reduction_is_orbit_sound(t in definite()) {
        let r = gl2_orbit_reduce(&t).unwrap().0;
        for g in generators() {
            prop_assert_eq!(gl2_orbit_reduce(&t.transform(&g)).unwrap().0, r);
        }
    }

    #[test]
    fn conjugation_is_an_involution(b1 in -50i64..50, b2 in -50i64..50) {
        let t = HermitianIndex::new(0, b1, b2, 0);
        let (c1, c2) = conjugate_b((b1, b2));
        prop_assert_eq!(conjugate_b((c1, c2)), (b1, b2));
        prop_assert_eq!(HermitianIndex::new(0, c1, c2, 0).q3(), t.q3());
    }
}

/// Compares against a brute-force walk over words in the generators.
#[test]
fn reduction_minimizes_over_the_orbit() {
    for t in [
        HermitianIndex::new(4, 3, 2, 3),
        HermitianIndex::new(7, 5, 1, 2),
        HermitianIndex::new(9, -4, 3, 5),
        HermitianIndex::new(3, 3, 2, 6),
    ] {
        let r = gl2_orbit_reduce(&t).unwrap().0;
        for s in orbit_enumerate(&t, 5) {
            assert_eq!(s.disc3(), t.disc3());
            assert_eq!(gl2_orbit_reduce(&s).unwrap().0, r, "{s} in the orbit of {t}");
            assert!((r.a, r.c, r.b1, r.b2) <= (s.a, s.c, s.b1, s.b2));
        }
    }
    assert_eq!(
        gl2_orbit_reduce(&HermitianIndex::new(4, 3, 2, 3)).unwrap().0,
        gl2_orbit_reduce(&HermitianIndex::new(3, 3, 2, 4)).unwrap().0
    );
}

#[test]
fn canonical_index_is_fixed() {
    let t = HermitianIndex::new(1, 0, 0, 1);
    let (r, tr) = gl2_orbit_reduce(&t).unwrap();
    assert_eq!(r, t);
    assert_eq!(tr, borcherds::hermitian::Transform::identity());
}

/// `a(T) = det(conj U)^k a(conj(U)^tr T U)` with `k = 45`; on this window
/// the character is real.
#[test]
fn phi45_coefficients_transform_with_the_character() {
    let r = phi45();
    let lat = LatticeL0::hermitian_d3();
    let mut checked = 0;
    for a in 1..7 {
        for c in 1..7 {
            for b in lat.vectors_up_to(36 * 6) {
                let t = HermitianIndex::new(a, b[0], b[1], c);
                if !t.is_definite() {
                    continue;
                }
                let v = r.coeff(a, &b, c);
                for g in generators() {
                    let s = t.transform(&g);
                    if s.a >= 7 || s.c >= 7 {
                        continue;
                    }
                    let w = r.coeff(s.a, &[s.b1, s.b2], s.c);
                    assert_eq!(v.abs(), w.abs(), "{t} -> {s}");
                    let chi = borcherds::hermitian::Transform { matrix: g, det: det(&g) }.character(45);
                    assert_eq!(chi.y, 0);
                    assert_eq!(v, BigInt::from(chi.x) * &w, "{t} -> {s}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 1000);
}

fn det(g: &[[borcherds::hermitian::Eisenstein; 2]; 2]) -> borcherds::hermitian::Eisenstein {
    g[0][0] * g[1][1] - g[0][1] * g[1][0]
}

#[test]
fn phi45_restriction_vanishes() {
    let res = restrict_diagonal(phi45()).unwrap();
    assert_eq!(res.len(), 7);
    assert!(res.values().all(|v| *v == BigInt::from(0)));
}

#[test]
fn counts_and_orbits() {
    let lat = LatticeL0::hermitian_d3();
    assert_eq!(count_coefficients(phi45()).unwrap(), 4627);
    let orbits: Vec<usize> = (1..7).map(|b| count_orbits(&lat, b).unwrap()).collect();
    assert!(orbits.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn delta_power_matches_products() {
    // Delta^2 = Delta * Delta
    let d1 = delta_power(1, 12);
    let d2 = delta_power(2, 12);
    for n in 0..12i64 {
        let conv: BigInt = (0..=n).map(|i| &d1[&i] * &d1[&(n - i)]).sum();
        assert_eq!(conv, d2[&n]);
    }
    assert!(delta_power(3, 3).values().all(|v| *v == BigInt::from(0)));
}
