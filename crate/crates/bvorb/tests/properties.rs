use proptest::prelude::*;

use bvorb::arith::mp::ten_pow_neg;
use bvorb::arith::{fmt_q, parse_q, q, qi, Q};
use bvorb::continuation::{residue_factor, SideParams};
use bvorb::fan::{build_fan, enumerate_box, enumerate_lambda_e};
use bvorb::iseries::{gw_term, homogeneity_check, twist_delta};
use bvorb::statespace::{compact_basis, hodge_diamond, pairing, Theory};
use bvorb::weights::{parse_weights, OrbifoldSpec, ADMISSIBLE};

const P: usize = 128;

fn any_spec() -> impl Strategy<Value = OrbifoldSpec> {
    (0..OrbifoldSpec::all().len()).prop_map(|i| OrbifoldSpec::all()[i].clone())
}

fn phase() -> impl Strategy<Value = Q> {
    (1i64..24).prop_map(|n| q(n, 24))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// The class factor sees `m` only through `m mod 4` and `(m + 2c) mod d`.
    #[test]
    fn residue_factor_is_class_periodic(curve in any::<bool>(), m in 0u32..12, two_c in 0i64..4, j in 0u32..3, l in 0i64..3) {
        let spec = OrbifoldSpec::quartic([3, 1, 1, 1]);
        let sp = if curve { SideParams::curve(&spec).unwrap() } else { SideParams::k3(&spec).unwrap() };
        let m = 2 * m + 1;
        let c = q(two_c, 2);
        let m2 = m + 4 * j;
        let c2 = &c + q(-4 * j as i64 + sp.d * l, 2);
        prop_assume!(c2 >= qi(0));
        let a = residue_factor(&sp, m, &c, P).unwrap();
        let b = residue_factor(&sp, m2, &c2, P).unwrap();
        prop_assert_eq!((a.mu, a.sigma), (b.mu, b.sigma));
        prop_assert!(a.value.rel_dist(&b.value).cmp(&ten_pow_neg(30, P)).is_lt());
    }

    #[test]
    fn rational_roundtrip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x = q(n, d);
        prop_assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x);
    }

    #[test]
    fn weights_roundtrip(i in 0usize..10) {
        let w = ADMISSIBLE[i].0;
        let s = format!("{},{},{},{}", w[0], w[1], w[2], w[3]);
        prop_assert_eq!(parse_weights(&s).unwrap(), w);
    }

    #[test]
    fn delta_dual_cancels(th in proptest::collection::vec(phase(), 1..5), order in 1u32..7) {
        let inv: Vec<Q> = th.iter().map(|x| qi(1) - x).collect();
        prop_assert!(twist_delta(&th, order).mul(&twist_delta(&inv, order).negate_z()).is_identity());
    }

    #[test]
    fn mirror_swap(n in 0i64..30, np in 0i64..30) {
        match (hodge_diamond(n, np), hodge_diamond(np, n)) {
            (Ok(a), Ok(b)) => prop_assert_eq!((a.h11, a.h21), (b.h21, b.h11)),
            (a, b) => prop_assert!(a.is_err() && b.is_err()),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pairing_is_symmetric(spec in any_spec(), t in 0usize..4, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let b = compact_basis(&spec, Theory::ALL[t]);
        prop_assume!(!b.is_empty());
        let (i, j) = (i.index(b.len()), j.index(b.len()));
        prop_assert_eq!(pairing(&spec, &b, i, j).ok(), pairing(&spec, &b, j, i).ok());
    }

    #[test]
    fn gw_terms_are_homogeneous(spec in any_spec(), pick in any::<prop::sample::Index>()) {
        let fan = build_fan(&spec);
        let points: Vec<_> = enumerate_box(&spec).iter().flat_map(|b| enumerate_lambda_e(&fan, b, &qi(3))).collect();
        prop_assume!(!points.is_empty());
        let t = gw_term(&fan, &points[pick.index(points.len())]).unwrap();
        prop_assert!(homogeneity_check(std::slice::from_ref(&t)).is_ok());
    }
}
