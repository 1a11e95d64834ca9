use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qgrd::fusion::reduce_word;
use qgrd::grouporacle::{
    block_conv_matrix, block_matrix, conv_matrix, derivation_matrix, enumerate_ball, haagerup_check, length_diagonal,
    Ball, ExactMatrix, Kernel,
};
use qgrd::QgrdError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn inverse(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|l| -l).collect()
}

/// Brute-force block: for every pair of sphere words, evaluate `a` at `w_l w_k⁻¹`.
fn oracle_block(ball: &Ball, a: &Kernel, k: u32, l: u32) -> ExactMatrix {
    let (rows, cols) = (ball.sphere(l), ball.sphere(k));
    let mut m = ExactMatrix::zeros(rows.len(), cols.len());
    for (r, wl) in rows.iter().enumerate() {
        for (c, wk) in cols.iter().enumerate() {
            let mut w = wl.clone();
            w.extend(inverse(wk));
            m.set(r, c, a.get(&reduce_word(&w)));
        }
    }
    m
}

#[test]
fn first_spheres_of_f2() {
    let b = enumerate_ball(2, 1, 100).unwrap();
    assert_eq!(b.sphere(0), &[Vec::<i32>::new()]);
    let mut s1 = b.sphere(1).to_vec();
    s1.sort();
    assert_eq!(s1, vec![vec![-2], vec![-1], vec![1], vec![2]]);
}

#[test]
fn sphere_counts_follow_the_closed_form() {
    for g in 1..=3u32 {
        let b = enumerate_ball(g, 6, 100_000).unwrap();
        for n in 1..=6u32 {
            let want = 2 * g as usize * (2 * g as usize - 1).pow(n - 1);
            assert_eq!(b.sphere(n).len(), want, "g={g}, n={n}");
        }
        // all words reduced and distinct
        for w in b.words() {
            assert_eq!(&reduce_word(w), w);
        }
    }
    assert!(matches!(enumerate_ball(2, 6, 100), Err(QgrdError::Budget(_))));
}

#[test]
fn unit_kernel_gives_identity_blocks() {
    let ball = enumerate_ball(2, 3, 1000).unwrap();
    let e = Kernel::delta(&[]);
    for k in 0..=3 {
        for l in 0..=3 {
            let m = block_conv_matrix(&ball, &e, 0, k, l).unwrap();
            if k == l {
                assert_eq!(m, ExactMatrix::identity(ball.sphere(k).len()));
            } else {
                assert!(m.is_zero());
            }
        }
    }
}

#[test]
fn sphere_indicator_block_is_a_scaled_isometry() {
    let ball = enumerate_ball(2, 4, 1000).unwrap();
    let a = Kernel::indicator(ball.sphere(1));
    let m = block_conv_matrix(&ball, &a, 1, 1, 2).unwrap();
    assert_eq!(m.shape(), (12, 4));
    assert_eq!(m.gram(), ExactMatrix::identity(4).scaled(&int(3)));
    assert!((m.operator_norm() - 3f64.sqrt()).abs() < 1e-12);
}

#[test]
fn blocks_match_the_brute_force_definition() {
    let ball = enumerate_ball(2, 4, 1000).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 0..=3 {
        let a = Kernel::random(ball.sphere(n), 5, true, &mut rng);
        for k in 0..=4 {
            for l in 0..=4 {
                let m = block_conv_matrix(&ball, &a, n, k, l).unwrap();
                assert_eq!(m, oracle_block(&ball, &a, k, l), "({k},{l},{n})");
                if k.abs_diff(l) > n || n > k + l {
                    assert!(m.is_zero());
                }
            }
        }
    }
}

#[test]
fn support_must_lie_on_the_sphere() {
    let ball = enumerate_ball(2, 3, 1000).unwrap();
    let a = Kernel::indicator(ball.sub_ball(1));
    assert_eq!(block_conv_matrix(&ball, &a, 1, 1, 1), Err(QgrdError::SupportOutsideSphere(1)));
    assert!(matches!(
        block_conv_matrix(&ball, &Kernel::delta(&[1]), 1, 1, 4),
        Err(QgrdError::InsufficientRadius { .. })
    ));
}

#[test]
fn haagerup_examples() {
    let ball = enumerate_ball(2, 4, 1000).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let r = haagerup_check(&ball, 1, 1, 2, 10, &mut rng).unwrap();
    assert!((r.indicator_ratio - 3f64.sqrt() / 2.0).abs() < 1e-12);
    for k in 0..=3 {
        let r = haagerup_check(&ball, 0, k, k, 10, &mut rng).unwrap();
        assert!(r.max_ratio <= 1.0 + 1e-12);
    }
}

#[test]
fn haagerup_bound_on_a_small_grid() {
    let ball = enumerate_ball(2, 3, 1000).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 0..=3 {
        for k in 0..=3 {
            for l in 0..=3 {
                let r = haagerup_check(&ball, n, k, l, 20, &mut rng).unwrap();
                assert!(r.max_ratio <= 1.0 + 1e-12, "({k},{l},{n}): {}", r.max_ratio);
            }
        }
    }
}

#[test]
fn derivation_examples() {
    let ball = enumerate_ball(2, 4, 1000).unwrap();
    assert!(derivation_matrix(&ball, &Kernel::delta(&[]), 4).unwrap().is_zero());
    let d = derivation_matrix(&ball, &Kernel::delta(&[2]), 3).unwrap();
    let (r, c) = d.shape();
    for i in 0..r {
        for j in 0..c {
            let v = d.get(i, j);
            assert!(*v == int(0) || *v == int(1) || *v == int(-1));
        }
    }
    assert!((d.operator_norm() - 1.0).abs() < 1e-12);
    assert!(matches!(derivation_matrix(&ball, &Kernel::delta(&[2]), 4), Err(QgrdError::Margin(_))));
}

#[test]
fn derivation_is_the_commutator_with_length() {
    let ball = enumerate_ball(2, 4, 1000).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a = Kernel::random(ball.sub_ball(2), 4, true, &mut rng);
    let d = derivation_matrix(&ball, &a, 2).unwrap();
    let m = conv_matrix(&ball, &a, 2).unwrap();
    let (rows, cols) = m.shape();
    let left = length_diagonal(&ball, rows).mul(&m).unwrap();
    let right = m.mul(&length_diagonal(&ball, cols)).unwrap();
    assert_eq!(left.add(&right.scaled(&int(-1))).unwrap(), d);
}

#[test]
fn blocks_compose_along_intermediate_spheres() {
    let ball = enumerate_ball(2, 4, 1000).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = Kernel::random(ball.sub_ball(2), 3, true, &mut rng);
    let b = Kernel::random(ball.sub_ball(2), 3, true, &mut rng);
    let ab = a.convolve(&b);
    for k in 0..=2 {
        for l in 0..=2 {
            let mut sum = ExactMatrix::zeros(ball.sphere(l).len(), ball.sphere(k).len());
            for m in 0..=k + 2 {
                let step = block_matrix(&ball, &a, m, l).unwrap().mul(&block_matrix(&ball, &b, k, m).unwrap()).unwrap();
                sum = sum.add(&step).unwrap();
            }
            assert_eq!(block_matrix(&ball, &ab, k, l).unwrap(), sum, "({k},{l})");
        }
    }
}

fn small_kernel() -> impl Strategy<Value = Kernel> {
    let word = prop::collection::vec(prop_oneof![Just(1i32), Just(-1), Just(2), Just(-2)], 0..4);
    prop::collection::vec((word, -4i64..=4), 0..5).prop_map(|entries| {
        let mut k = Kernel::new();
        for (w, v) in entries {
            k.add(&w, int(v));
        }
        k
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn convolution_is_associative(a in small_kernel(), b in small_kernel(), c in small_kernel()) {
        prop_assert_eq!(a.convolve(&b).convolve(&c), a.convolve(&b.convolve(&c)));
    }

    #[test]
    fn unit_is_neutral(a in small_kernel()) {
        let e = Kernel::delta(&[]);
        prop_assert_eq!(a.convolve(&e), a.clone());
        prop_assert_eq!(e.convolve(&a), a);
    }

    #[test]
    fn sobolev_norm_grows_with_the_exponent(a in small_kernel(), s in 0u32..3) {
        prop_assert!(a.sobolev_squared(s) <= a.sobolev_squared(s + 1));
    }
}
