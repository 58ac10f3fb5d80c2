//! Property tests over randomly generated distributions.

use infoflow::prob::{
    conditional_mutual_information, disintegrate, disintegrated_cmi, kahan_sum, kl_divergence,
    markovize, mutual_information, shannon_entropy, DiscreteDist, JointDist2, JointDist3,
};
use proptest::prelude::*;

fn dist_strategy(n: usize) -> impl Strategy<Value = DiscreteDist> {
    prop::collection::vec(0.0f64..1.0, n).prop_filter_map("needs positive mass", |raw| {
        let total = kahan_sum(raw.iter().copied());
        if total <= 0.0 {
            return None;
        }
        let mass: Vec<f64> = raw.iter().map(|v| v / total).collect();
        DiscreteDist::new(mass).ok()
    })
}

fn joint3_strategy(max_dim: usize) -> impl Strategy<Value = JointDist3> {
    (2..=max_dim, 2..=max_dim, 2..=max_dim).prop_flat_map(|(lx, ly, lz)| {
        prop::collection::vec(0.0f64..1.0, lx * ly * lz).prop_filter_map(
            "needs positive mass",
            move |mut raw| {
                // Sparsify so zero slices and zero cells are exercised.
                for v in raw.iter_mut() {
                    if *v < 0.35 {
                        *v = 0.0;
                    }
                }
                let total = kahan_sum(raw.iter().copied());
                if total <= 0.0 {
                    return None;
                }
                for v in raw.iter_mut() {
                    *v /= total;
                }
                JointDist3::new(raw, (lx, ly, lz)).ok()
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn kl_is_nonnegative_and_zero_only_at_equality(
        (p, m) in (2usize..8).prop_flat_map(|n| (dist_strategy(n), dist_strategy(n)))
    ) {
        let v = kl_divergence(&p, &m).unwrap();
        if let Some(nats) = v.nats() {
            prop_assert!(nats >= 0.0);
            if nats == 0.0 {
                for (a, b) in p.mass().iter().zip(m.mass()) {
                    prop_assert!((a - b).abs() <= 1e-12);
                }
            }
        }
        prop_assert_eq!(kl_divergence(&p, &p).unwrap().nats(), Some(0.0));
    }

    #[test]
    fn entropy_is_self_information(p in (1usize..9).prop_flat_map(dist_strategy)) {
        let diag = JointDist2::diagonal(&p);
        let mi = mutual_information(&diag).unwrap().expect_finite();
        prop_assert!((mi - shannon_entropy(&p)).abs() <= 1e-12);
    }

    #[test]
    fn cmi_equals_average_of_sliced_mi(j in joint3_strategy(5)) {
        let direct = conditional_mutual_information(&j).unwrap().expect_finite();
        let averaged = disintegrated_cmi(&j).unwrap().expect_finite();
        prop_assert!(
            (direct - averaged).abs() <= 1e-12 * (1.0 + direct.abs()),
            "direct {} vs averaged {}", direct, averaged
        );
    }

    #[test]
    fn markovize_is_projection_preserving_conditionals(j in joint3_strategy(5)) {
        let m1 = markovize(&j);
        let m2 = markovize(&m1);
        for (a, b) in m1.mass().iter().zip(m2.mass()) {
            prop_assert!((a - b).abs() <= 1e-14);
        }
        for (a, b) in j.marginal_xz().iter().zip(m1.marginal_xz()) {
            prop_assert!((a - b).abs() <= 1e-14);
        }
        for (a, b) in j.marginal_yz().iter().zip(m1.marginal_yz()) {
            prop_assert!((a - b).abs() <= 1e-14);
        }
        // The Markovization is conditionally independent, so its cMI is zero.
        let cmi = conditional_mutual_information(&m1).unwrap().expect_finite();
        prop_assert!(cmi <= 1e-12);
    }

    #[test]
    fn sliced_mi_is_symmetric_and_nonnegative(j in joint3_strategy(5)) {
        let pz = j.marginal_z();
        for (k, &zk) in pz.mass().iter().enumerate() {
            if zk <= 0.0 {
                continue;
            }
            let s = disintegrate(&j, k).unwrap();
            let a = mutual_information(&s).unwrap().expect_finite();
            let b = mutual_information(&s.transpose()).unwrap().expect_finite();
            prop_assert!(a >= 0.0);
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }
}
