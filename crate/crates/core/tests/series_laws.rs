use std::sync::Arc;

use borcherds::lattice::Index;
use borcherds::rat;
use borcherds::{Execution, FormalSeries, LatticeL0, TruncationFilter};
use num_bigint::BigInt;
use proptest::prelude::*;

fn lat() -> Arc<LatticeL0> {
    Arc::new(LatticeL0::hermitian_d3())
}

fn index() -> impl Strategy<Value = Index> {
    (0i64..4, -3i64..4, -3i64..4, 0i64..4).prop_map(|(a, b1, b2, c)| Index::new(a, &[b1, b2], c))
}

fn series() -> impl Strategy<Value = FormalSeries> {
    prop::collection::vec((index(), -5i64..6), 0..8)
        .prop_map(|v| FormalSeries::from_integer_terms(lat(), v.into_iter().map(|(t, c)| (t, BigInt::from(c)))))
}

fn boxed(n: i64) -> TruncationFilter {
    TruncationFilter::box_below(rat::int(n), rat::int(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_commutes(x in series(), y in series()) {
        let f = TruncationFilter::all();
        prop_assert_eq!(x.multiply(&y, &f, Execution::Sequential), y.multiply(&x, &f, Execution::Sequential));
    }

    #[test]
    fn multiplication_associates(x in series(), y in series(), z in series()) {
        let f = boxed(6);
        let e = Execution::Sequential;
        let l = x.multiply(&y, &f, e).multiply(&z, &f, e);
        let r = x.multiply(&y.multiply(&z, &f, e), &f, e);
        prop_assert_eq!(l, r);
    }

    #[test]
    fn multiplication_distributes(x in series(), y in series(), z in series()) {
        let f = TruncationFilter::all();
        let e = Execution::Sequential;
        prop_assert_eq!(x.multiply(&y.add(&z), &f, e), x.multiply(&y, &f, e).add(&x.multiply(&z, &f, e)));
    }

    #[test]
    fn unit_and_zero(x in series()) {
        let f = TruncationFilter::all();
        let e = Execution::Sequential;
        prop_assert_eq!(x.multiply(&FormalSeries::unit(lat()), &f, e), x.clone());
        prop_assert!(x.multiply(&FormalSeries::zero(lat()), &f, e).is_empty());
        prop_assert!(x.add(&x.scale(&rat::int(-1))).is_empty());
    }

    /// Indices only grow under multiplication here, so truncating the
    /// product equals multiplying into the smaller filter.
    #[test]
    fn truncation_is_coherent(x in series(), y in series(), n in 1i64..6) {
        let e = Execution::Sequential;
        let full = x.multiply(&y, &TruncationFilter::all(), e);
        prop_assert_eq!(full.truncate(&boxed(n)), x.multiply(&y, &boxed(n), e));
        prop_assert_eq!(x.truncate(&boxed(n)).multiply(&y.truncate(&boxed(n)), &boxed(n), e), x.multiply(&y, &boxed(n), e));
    }

    #[test]
    fn parallel_matches_sequential(x in series(), y in series()) {
        let f = boxed(5);
        prop_assert_eq!(x.multiply(&y, &f, Execution::Parallel), x.multiply(&y, &f, Execution::Sequential));
    }

    /// exp(-f sum_m e^{m t} / m) is (1 - e^t)^f.
    #[test]
    fn log_exp_round_trip(t in index(), f in -3i64..4, n in 2i64..7) {
        let l = lat();
        prop_assume!(l.is_positive(&t) && !t.is_zero());
        let flt = boxed(n).with_wj_max(vec![rat::int(8), rat::int(8)]).with_wj_min(vec![rat::int(-8), rat::int(-8)]);
        let mut terms = Vec::new();
        let mut m = 1;
        while flt.contains(&l, &t.scale(m)) {
            terms.push((t.scale(m), -rat::int(f) / rat::int(m)));
            m += 1;
        }
        let log = FormalSeries::from_terms(l.clone(), terms);
        let k = m.max(1) as u64;
        let lhs = log.exp_partial(k, &flt, Execution::Sequential).unwrap();
        let rhs = FormalSeries::geometric_power(l, &t, &BigInt::from(f), &flt).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn geometric_power_of_negative_exponent_inverts() {
    let l = lat();
    let t = Index::new(1, &[0, 0], 1);
    let f = boxed(6);
    let e = Execution::Sequential;
    let p = FormalSeries::geometric_power(l.clone(), &t, &BigInt::from(3), &f).unwrap();
    let q = FormalSeries::geometric_power(l.clone(), &t, &BigInt::from(-3), &f).unwrap();
    assert_eq!(p.multiply(&q, &f, e), FormalSeries::unit(l).truncate(&f));
}
