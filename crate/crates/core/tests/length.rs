use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qgrd::fusion::AuLetter::{Ubar as B, U};
use qgrd::fusion::*;
use qgrd::length::*;
use qgrd::QgrdError;

const MAX: usize = 1_000_000;

fn ao3() -> OrthogonalFree {
    OrthogonalFree::new(3).unwrap()
}

fn f2() -> FreeGroupDual {
    FreeGroupDual::new(2).unwrap()
}

fn lie(g: &str) -> CompactLieDual {
    CompactLieDual::new(RootData::named(g).unwrap())
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn words(ring: &dyn FusionRing, radius: u32) -> LengthSpec {
    word_length_table(ring, &ring.generators(), radius, MAX).unwrap()
}

#[test]
fn word_lengths_of_the_examples() {
    let spec = words(&ao3(), 6);
    for n in 0..=6 {
        assert_eq!(spec.value(&IrrLabel::Spin(n)), Some(n as f64));
    }
    let spec = words(&f2(), 3);
    assert_eq!(spec.value(&parse_label("free-word", "abA").unwrap()), Some(3.0));
    let au = UnitaryFree::new(2).unwrap();
    let spec = words(&au, 3);
    assert_eq!(spec.value(&IrrLabel::MonoidWord(vec![U, B, U])), Some(3.0));
    assert_eq!(spec.len(), 15);
}

#[test]
fn word_length_errors() {
    let bad = vec![IrrLabel::FreeWord(vec![1])];
    assert!(matches!(word_length_table(&f2(), &bad, 2, MAX), Err(QgrdError::GeneratorsNotSelfConjugate)));
    assert!(matches!(word_length_table(&f2(), &f2().generators(), 12, 1000), Err(QgrdError::Budget(_))));
    let su2 = lie("SU(2)");
    assert!(matches!(word_length_table(&su2, &su2.generators(), 2, MAX), Err(QgrdError::FusionUnsupported(_))));
}

#[test]
fn word_lengths_agree_with_natural_lengths() {
    let rings: Vec<Box<dyn FusionRing>> = vec![Box::new(f2()), Box::new(ao3()), Box::new(UnitaryFree::new(3).unwrap())];
    for ring in rings {
        let w = words(ring.as_ref(), 5);
        let nat = LengthSpec::natural(ring.as_ref(), 5).unwrap();
        assert_eq!(w.len(), nat.len());
        for (a, v, _) in nat.iter() {
            assert_eq!(w.value(a), Some(v));
        }
    }
}

#[test]
fn word_lengths_are_stable_under_radius_extension() {
    let small = words(&f2(), 3);
    let large = words(&f2(), 5);
    for (a, v, _) in small.iter() {
        assert_eq!(large.value(a), Some(v));
    }
}

#[test]
fn validation_of_lengths() {
    for ring in [Box::new(ao3()) as Box<dyn FusionRing>, Box::new(f2()), Box::new(UnitaryFree::new(2).unwrap())] {
        assert!(validate_length(&words(ring.as_ref(), 4), ring.as_ref()).unwrap().is_empty());
    }
    let su3 = lie("SU(3)");
    assert!(validate_length(&LengthSpec::natural(&su3, 4).unwrap(), &su3).unwrap().is_empty());
    let squares = LengthSpec::transformed(&ao3(), 4, |x| x * x).unwrap();
    let v = validate_length(&squares, &ao3()).unwrap();
    assert!(v.iter().any(|x| x.axiom == "subadditivity" && x.detail.contains("l(2) = 4")));
    let mut shifted = words(&ao3(), 3);
    shifted.set(&IrrLabel::Spin(0), 1.0);
    let v = validate_length(&shifted, &ao3()).unwrap();
    assert_eq!(v[0].axiom, "unit");
    assert!(v[0].detail.contains("unit length nonzero"));
}

#[test]
fn growth_profiles_of_the_examples() {
    let su2 = lie("SU(2)");
    let p = growth_profile(&su2, &LengthSpec::natural(&su2, 10).unwrap()).unwrap();
    for b in &p.buckets {
        assert_eq!(b.weight, int((b.n as i64 + 1).pow(2)));
        assert_eq!(b.count, 1);
    }
    let p = growth_profile(&f2(), &words(&f2(), 6)).unwrap();
    for b in &p.buckets[1..] {
        let s = 4 * 3i64.pow(b.n - 1);
        assert_eq!((b.weight.clone(), b.count), (int(s), s as u64));
    }
    assert_eq!(p.total_count(), 1 + 4 + 12 + 36 + 108 + 324 + 972);
    let p = growth_profile(&ao3(), &words(&ao3(), 4)).unwrap();
    assert_eq!(p.buckets[2].weight, int(64));
    assert_eq!(p.buckets[2].max_dim, int(8));
}

#[test]
fn profile_invariants_in_every_family() {
    let rings: Vec<Box<dyn FusionRing>> = vec![
        Box::new(f2()),
        Box::new(ao3()),
        Box::new(SUq2Dual::new(BigRational::new(1.into(), 2.into())).unwrap()),
        Box::new(UnitaryFree::new(3).unwrap()),
        Box::new(lie("SU(3)")),
    ];
    for ring in rings {
        let spec = LengthSpec::natural(ring.as_ref(), 8).unwrap();
        let p = growth_profile(ring.as_ref(), &spec).unwrap();
        assert_eq!(p.total_count(), spec.len() as u64);
        for b in &p.buckets {
            assert!(b.weight >= int(b.count as i64) || ring.family() == "suq2");
            if b.count >= 1 {
                assert!(b.weight >= &b.max_dim * &b.max_dim);
            }
        }
    }
}

#[test]
fn growth_classes() {
    let su2 = lie("SU(2)");
    let fit = classify_growth(&growth_profile(&su2, &LengthSpec::natural(&su2, 16).unwrap()).unwrap(), 0.05).unwrap();
    assert_eq!(fit.class, GrowthClass::Polynomial { degree: 2 });
    let fit = classify_growth(&growth_profile(&ao3(), &words(&ao3(), 16)).unwrap(), 0.05).unwrap();
    let r2 = ((3.0 + 5f64.sqrt()) / 2.0).powi(2);
    match fit.class {
        GrowthClass::Exponential { ratio } => assert!((ratio - r2).abs() < 1e-3 * r2, "{ratio}"),
        c => panic!("{c:?}"),
    }
    let z = FreeGroupDual::new(1).unwrap();
    let fit = classify_growth(&growth_profile(&z, &words(&z, 14)).unwrap(), 0.05).unwrap();
    assert_eq!(fit.class, GrowthClass::Polynomial { degree: 0 });
    let trivial = GrowthProfile {
        radius: 12,
        complete_through: 12,
        buckets: (0..=12)
            .map(|n| BucketStats {
                n,
                weight: int(i64::from(n == 0)),
                count: u64::from(n == 0),
                max_dim: int(i64::from(n == 0)),
            })
            .collect(),
    };
    assert_eq!(classify_growth(&trivial, 0.05).unwrap().class, GrowthClass::Polynomial { degree: 0 });
    let short = growth_profile(&ao3(), &words(&ao3(), 8)).unwrap();
    assert!(matches!(classify_growth(&short, 0.05), Err(QgrdError::InsufficientRadius { .. })));
}

#[test]
fn triple_set_examples() {
    let ts = triple_set(&ao3(), &words(&ao3(), 6)).unwrap();
    assert!(ts.contains(2, 3, 1));
    assert!(!ts.contains(1, 1, 3));
    for n in 0..=6 {
        assert!(ts.contains(n, n, 0));
    }
    assert!(check_triangle_bounds(&ts));
    let mut broken = ts.clone();
    broken.triples.insert((1, 1, 5));
    assert!(!check_triangle_bounds(&broken));
    let ts = triple_set(&f2(), &words(&f2(), 5)).unwrap();
    assert!(check_triangle_bounds(&ts));
    assert!(triangle_violations(&ts, 0).is_empty());
}

#[test]
fn triangle_bounds_in_all_five_families() {
    let rings: Vec<(Box<dyn FusionRing>, bool)> = vec![
        (Box::new(f2()), true),
        (Box::new(ao3()), true),
        (Box::new(SUq2Dual::new(BigRational::new(1.into(), 2.into())).unwrap()), true),
        (Box::new(UnitaryFree::new(3).unwrap()), true),
        (Box::new(lie("SU(3)")), false),
        (Box::new(lie("SU(2)")), true),
    ];
    for (ring, exact) in rings {
        let spec = LengthSpec::natural(ring.as_ref(), 6).unwrap();
        let ts = triple_set(ring.as_ref(), &spec).unwrap();
        assert!(permutation_failures(&ts).is_empty(), "{}", ring.describe());
        assert!(triangle_violations(&ts, 2).is_empty(), "{}", ring.describe());
        if exact {
            assert!(triangle_violations(&ts, 0).is_empty(), "{}", ring.describe());
        }
        for n in 0..=ts.radius {
            if spec.iter().any(|e| e.2 == n) {
                assert!(ts.contains(n, n, 0));
            }
        }
    }
}

#[test]
fn domination_examples() {
    let w = words(&f2(), 4);
    let d = dominate_epsilon(&w, &w).unwrap();
    assert_eq!(d.epsilon, 1.0);
    let half = LengthSpec::transformed(&f2(), 4, |x| x / 2.0).unwrap();
    assert_eq!(dominate_epsilon(&w, &half).unwrap().epsilon, 2.0);
    let w = words(&ao3(), 9);
    let root = LengthSpec::transformed(&ao3(), 9, f64::sqrt).unwrap();
    let d = dominate_epsilon(&w, &root).unwrap();
    assert_eq!(d.proof_bound, 1.0);
    assert!(d.epsilon >= d.proof_bound);
    let mut zero = LengthSpec::transformed(&ao3(), 3, |x| x).unwrap();
    zero.set(&IrrLabel::Spin(2), 0.0);
    assert!(matches!(dominate_epsilon(&words(&ao3(), 3), &zero), Err(QgrdError::DominationImpossible(_))));
}

#[test]
fn growth_bounds_are_verified() {
    let su2 = lie("SU(2)");
    let p = growth_profile(&su2, &LengthSpec::natural(&su2, 20).unwrap()).unwrap();
    let g = GrowthBound::fit(&p, 2);
    assert_eq!(g.c_squared, int(1));
    assert!(g.holds(&p));
}

proptest! {
    #[test]
    fn domination_respects_the_proof_bound(scale in 0.1f64..4.0, power in 0.3f64..1.0) {
        let w = words(&ao3(), 8);
        let other = LengthSpec::transformed(&ao3(), 8, |x| scale * x.powf(power)).unwrap();
        let d = dominate_epsilon(&w, &other).unwrap();
        prop_assert!(d.epsilon >= d.proof_bound * (1.0 - 1e-12));
    }

    #[test]
    fn profile_totals_match_ball_sizes(g in 1u32..4, radius in 0u32..6) {
        let ring = FreeGroupDual::new(g).unwrap();
        let spec = words(&ring, radius);
        let p = growth_profile(&ring, &spec).unwrap();
        prop_assert_eq!(p.total_count() as u128, ring.ball_size(radius));
    }
}
