use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;
use qgrd::fusion::AuLetter::{Ubar as B, U};
use qgrd::fusion::*;
use qgrd::QgrdError;

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn spin_ring() -> OrthogonalFree {
    OrthogonalFree::new(3).unwrap()
}

fn word(ls: &[AuLetter]) -> IrrLabel {
    IrrLabel::MonoidWord(ls.to_vec())
}

fn all_au_words(max_len: usize) -> Vec<Vec<AuLetter>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        let mut next = vec![];
        for w in &frontier {
            for l in [U, B] {
                let mut v: Vec<AuLetter> = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn rings() -> Vec<Box<dyn FusionRing>> {
    vec![
        Box::new(FreeGroupDual::new(2).unwrap()),
        Box::new(OrthogonalFree::new(3).unwrap()),
        Box::new(SUq2Dual::new(r(1, 2)).unwrap()),
        Box::new(UnitaryFree::new(3).unwrap()),
        Box::new(CompactLieDual::new(RootData::named("SU(3)").unwrap())),
    ]
}

#[test]
fn orthogonal_fusion_of_the_fundamental() {
    let f = spin_ring().fuse(&IrrLabel::Spin(1), &IrrLabel::Spin(1)).unwrap();
    assert_eq!(f.0, vec![(IrrLabel::Spin(0), 1), (IrrLabel::Spin(2), 1)]);
    let f = spin_ring().fuse(&IrrLabel::Spin(3), &IrrLabel::Spin(5)).unwrap();
    assert_eq!(f.labels().cloned().collect::<Vec<_>>(), [2, 4, 6, 8].map(IrrLabel::Spin).to_vec());
}

#[test]
fn unit_law_in_every_family() {
    for ring in rings() {
        for a in ring.enumerate_irreps(2).unwrap() {
            assert_eq!(ring.constituents(&ring.unit(), &a).unwrap().0, vec![(a.clone(), 1)], "{}", ring.describe());
            assert_eq!(ring.constituents(&a, &ring.unit()).unwrap().0, vec![(a.clone(), 1)]);
        }
        assert_eq!(ring.qdim(&ring.unit()).unwrap(), BigRational::one());
        assert_eq!(ring.conjugate(&ring.unit()).unwrap(), ring.unit());
    }
}

#[test]
fn unitary_fusion_cancels_letter_pairs() {
    let au = UnitaryFree::new(3).unwrap();
    let f = au.fuse(&word(&[U]), &word(&[B])).unwrap();
    assert_eq!(f.0, vec![(word(&[U, B]), 1), (word(&[]), 1)]);
    let f = au.fuse(&word(&[U, B]), &word(&[U, B])).unwrap();
    assert_eq!(f.0, vec![(word(&[U, B, U, B]), 1), (word(&[U, B]), 1), (word(&[]), 1)]);
}

#[test]
fn conjugations() {
    assert_eq!(spin_ring().conjugate(&IrrLabel::Spin(4)).unwrap(), IrrLabel::Spin(4));
    let f2 = FreeGroupDual::new(2).unwrap();
    assert_eq!(f2.conjugate(&parse_label("free-word", "aB").unwrap()).unwrap().to_string(), "bA");
    let au = UnitaryFree::new(3).unwrap();
    assert_eq!(au.conjugate(&word(&[U, B, U])).unwrap(), word(&[B, U, B]));
    let su3 = CompactLieDual::new(RootData::named("SU(3)").unwrap());
    assert_eq!(su3.conjugate(&IrrLabel::Weight(vec![2, 1])).unwrap(), IrrLabel::Weight(vec![1, 2]));
}

#[test]
fn orthogonal_dimensions_follow_the_recursion() {
    assert_eq!(spin_ring().qdim(&IrrLabel::Spin(2)).unwrap(), r(8, 1));
    assert_eq!(spin_ring().qdim(&IrrLabel::Spin(4)).unwrap(), r(55, 1));
}

#[test]
fn orthogonal_dimensions_match_the_closed_form() {
    for nn in 3..=6u32 {
        let ring = OrthogonalFree::new(nn).unwrap();
        let disc = ((nn * nn - 4) as f64).sqrt();
        let rr = (nn as f64 + disc) / 2.0;
        let s = 1.0 / (rr * rr);
        for (n, m) in ring.dims(20).iter().enumerate() {
            let closed = rr.powi(n as i32) * (1.0 - s.powi(n as i32 + 1)) / (1.0 - s);
            let m = m.to_f64().unwrap();
            assert!((m - closed).abs() <= 1e-9 * m.max(1.0), "N={nn} n={n}: {m} vs {closed}");
        }
    }
}

#[test]
fn suq2_modular_data() {
    let ring = SUq2Dual::new(r(1, 2)).unwrap();
    assert_eq!(ring.modular_eigenvalues(&IrrLabel::Spin(1)).unwrap(), vec![r(1, 2), r(2, 1)]);
    assert_eq!(ring.modular_eigenvalues(&IrrLabel::Spin(2)).unwrap(), vec![r(1, 4), r(1, 1), r(4, 1)]);
    assert_eq!(ring.qdim(&IrrLabel::Spin(2)).unwrap(), r(21, 4));
    assert_eq!(ring.classical_dim(&IrrLabel::Spin(2)).unwrap(), BigInt::from(3));
    assert!(!ring.is_unimodular());
    for n in 0..=10 {
        let e = ring.modular_eigenvalues(&IrrLabel::Spin(n)).unwrap();
        let s: BigRational = e.iter().cloned().sum();
        let inv: BigRational = e.iter().map(|x| x.recip()).sum();
        assert_eq!(s, inv);
        assert_eq!(modular_norm(&ring, &IrrLabel::Spin(n)).unwrap(), r(2i64.pow(n), 1));
    }
    let row = modular_row(&spin_ring(), &IrrLabel::Spin(3)).unwrap();
    assert_eq!(row.eigenvalues, vec![BigRational::one(); 21]);
    assert!(row.unimodular);
}

#[test]
fn weyl_dimensions_of_su3() {
    let rd = RootData::named("SU(3)").unwrap();
    assert_eq!(rd.rho(), vec![1, 1]);
    for (w, d) in [([0, 0], 1), ([1, 0], 3), ([1, 1], 8)] {
        assert_eq!(rd.weyl_dimension(&w).unwrap(), BigInt::from(d));
    }
    for a in 0..8i64 {
        for b in 0..8i64 {
            let oracle = (a + 1) * (b + 1) * (a + b + 2) / 2;
            assert_eq!(rd.weyl_dimension(&[a, b]).unwrap(), BigInt::from(oracle));
        }
    }
    assert!(matches!(rd.weyl_dimension(&[-1, 0]), Err(QgrdError::NotDominant(_))));
}

#[test]
fn lie_fusion_is_refused_but_constituents_are_available() {
    let su3 = CompactLieDual::new(RootData::named("SU(3)").unwrap());
    let (a, b) = (IrrLabel::Weight(vec![1, 0]), IrrLabel::Weight(vec![0, 1]));
    assert!(matches!(su3.fuse(&a, &b), Err(QgrdError::FusionUnsupported(_))));
    assert_eq!(su3.constituents(&a, &b).unwrap().0.len(), 2);
}

#[test]
fn mixed_labels_are_rejected() {
    let err = spin_ring().fuse(&IrrLabel::Spin(1), &word(&[U])).unwrap_err();
    assert!(matches!(err, QgrdError::ForeignLabel { .. }));
    let f2 = FreeGroupDual::new(2).unwrap();
    assert!(f2.qdim(&IrrLabel::FreeWord(vec![3])).is_err());
    assert!(f2.qdim(&IrrLabel::FreeWord(vec![1, -1])).is_err());
}

#[test]
fn enumerations() {
    let f2 = FreeGroupDual::new(2).unwrap();
    let ball: Vec<String> = f2.enumerate_irreps(1).unwrap().iter().map(|l| l.to_string()).collect();
    assert_eq!(ball, vec!["e", "a", "A", "b", "B"]);
    assert_eq!(spin_ring().enumerate_irreps(4).unwrap(), (0..=4).map(IrrLabel::Spin).collect::<Vec<_>>());
    assert_eq!(UnitaryFree::new(2).unwrap().enumerate_irreps(2).unwrap().len(), 7);
    let su2 = CompactLieDual::new(RootData::named("SU(2)").unwrap());
    assert_eq!(su2.enumerate_irreps(5).unwrap().len(), 6);
    let su3 = CompactLieDual::new(RootData::named("SU(3)").unwrap());
    let ball = su3.enumerate_irreps(3).unwrap();
    let brute = (0..10u32)
        .flat_map(|a| (0..10u32).map(move |b| (a, b)))
        .filter(|&(a, b)| a * a + a * b + b * b <= 9)
        .count();
    assert_eq!(ball.len(), brute);
    let mut dedup = ball.clone();
    dedup.sort();
    dedup.dedup();
    assert_eq!(dedup.len(), ball.len());
}

#[test]
fn lie_buckets_are_exact_floors() {
    let su3 = CompactLieDual::new(RootData::named("SU(3)").unwrap());
    // ‖(1,1)‖² = 3, ‖(2,0)‖² = 4.
    assert_eq!(su3.bucket(&IrrLabel::Weight(vec![1, 1])).unwrap(), 1);
    assert_eq!(su3.bucket(&IrrLabel::Weight(vec![2, 0])).unwrap(), 2);
    assert_eq!(su3.bucket(&IrrLabel::Weight(vec![0, 0])).unwrap(), 0);
}

#[test]
fn dimension_homomorphism_in_every_family() {
    for ring in rings() {
        let ball = ring.enumerate_irreps(3).unwrap();
        for a in &ball {
            for b in &ball {
                let f = ring.constituents(b, a).unwrap();
                assert!(f.0.iter().all(|(_, m)| *m >= 1));
                let mut labels: Vec<_> = f.labels().collect();
                labels.sort();
                labels.dedup();
                assert_eq!(labels.len(), f.0.len());
                let lhs = ring.qdim(a).unwrap() * ring.qdim(b).unwrap();
                assert_eq!(f.total_qdim(ring.as_ref()).unwrap(), lhs, "{} {b} ⊗ {a}", ring.describe());
            }
        }
    }
}

#[test]
fn frobenius_symmetry_on_balls() {
    for ring in rings() {
        let radius = if ring.family() == "compact-lie" { 2 } else { 5 };
        let ball = ring.enumerate_irreps(radius).unwrap();
        let small = ring.enumerate_irreps(radius.min(3)).unwrap();
        for a in &small {
            let abar = ring.conjugate(a).unwrap();
            assert_eq!(ring.conjugate(&abar).unwrap(), *a);
            for b in &ball {
                let bbar = ring.conjugate(b).unwrap();
                for (g, m) in ring.constituents(b, a).unwrap().0 {
                    assert_eq!(ring.constituents(&g, &abar).unwrap().multiplicity(b), m, "{}", ring.describe());
                    assert_eq!(ring.constituents(&bbar, &g).unwrap().multiplicity(a), m, "{}", ring.describe());
                }
            }
        }
    }
}

#[test]
fn au_factorization_examples() {
    let f = au_factorization(&[U], &[B], &[]).unwrap();
    assert_eq!((f.tau, f.alpha_rest, f.beta_rest), (vec![U], vec![], vec![]));
    let f = au_factorization(&[U, B], &[U, B], &[U, B, U, B]).unwrap();
    assert!(f.tau.is_empty());
    assert!(matches!(au_factorization(&[U], &[U], &[]), Err(QgrdError::NotConstituent(_))));
}

#[test]
fn au_factorization_is_a_bijection_up_to_length_four() {
    let au = UnitaryFree::new(3).unwrap();
    let words = all_au_words(4);
    let mut images = std::collections::BTreeSet::new();
    let mut count = 0;
    for a in &words {
        for b in &words {
            for (g, _) in au.fuse(&word(b), &word(a)).unwrap().0 {
                let IrrLabel::MonoidWord(g) = g else { unreachable!() };
                let f = au_factorization(a, b, &g).unwrap();
                assert_eq!(au_rebuild(&f), (a.clone(), b.clone(), g.clone()));
                assert!(images.insert(f));
                count += 1;
            }
        }
    }
    // Every (τ, α′, β′) with admissible lengths rebuilds to a constituent.
    for t in &words {
        for ar in &words {
            for br in &words {
                if t.len() + ar.len() <= 4 && t.len() + br.len() <= 4 {
                    let f = AuFactorization { tau: t.clone(), alpha_rest: ar.clone(), beta_rest: br.clone() };
                    assert!(images.contains(&f));
                }
            }
        }
    }
    assert_eq!(images.len(), count);
}

proptest! {
    #[test]
    fn spin_fusion_is_commutative_and_dimension_preserving(k in 0u32..30, n in 0u32..30, nn in 3u32..7) {
        let ring = OrthogonalFree::new(nn).unwrap();
        let (a, b) = (IrrLabel::Spin(k), IrrLabel::Spin(n));
        let f = ring.fuse(&a, &b).unwrap();
        prop_assert_eq!(&f, &ring.fuse(&b, &a).unwrap());
        prop_assert_eq!(f.total_qdim(&ring).unwrap(), ring.qdim(&a).unwrap() * ring.qdim(&b).unwrap());
    }

    #[test]
    fn free_words_form_a_group(x in prop::collection::vec(prop::sample::select(vec![1, -1, 2, -2, 3, -3]), 0..12),
                               y in prop::collection::vec(prop::sample::select(vec![1, -1, 2, -2, 3, -3]), 0..12)) {
        let ring = FreeGroupDual::new(3).unwrap();
        let rx = IrrLabel::FreeWord(x.iter().fold(vec![], |mut acc: Vec<i32>, &l| { if acc.last() == Some(&-l) { acc.pop(); } else { acc.push(l); } acc }));
        let ry = IrrLabel::FreeWord(y.iter().fold(vec![], |mut acc: Vec<i32>, &l| { if acc.last() == Some(&-l) { acc.pop(); } else { acc.push(l); } acc }));
        let xy = ring.fuse(&rx, &ry).unwrap().0[0].0.clone();
        let back = ring.fuse(&xy, &ring.conjugate(&ry).unwrap()).unwrap().0[0].0.clone();
        prop_assert_eq!(back, rx);
    }

    #[test]
    fn unitary_dimensions_multiply(a in prop::collection::vec(prop::bool::ANY, 0..8), b in prop::collection::vec(prop::bool::ANY, 0..8), nn in 2u32..6) {
        let ring = UnitaryFree::new(nn).unwrap();
        let to = |v: &Vec<bool>| word(&v.iter().map(|&x| if x { U } else { B }).collect::<Vec<_>>());
        let (a, b) = (to(&a), to(&b));
        let f = ring.fuse(&b, &a).unwrap();
        prop_assert_eq!(f.total_qdim(&ring).unwrap(), ring.qdim(&a).unwrap() * ring.qdim(&b).unwrap());
        prop_assert_eq!(ring.qdim(&ring.conjugate(&a).unwrap()).unwrap(), ring.qdim(&a).unwrap());
    }

    #[test]
    fn suq2_normalization(p in 1i64..50, extra in 1i64..50, n in 0u32..12) {
        let ring = SUq2Dual::new(r(p, p + extra)).unwrap();
        let e = ring.modular_eigenvalues(&IrrLabel::Spin(n)).unwrap();
        let inv: BigRational = e.iter().map(|x| x.recip()).sum();
        prop_assert_eq!(ring.qdim(&IrrLabel::Spin(n)).unwrap(), inv);
        prop_assert_eq!(e.len() as u32, n + 1);
    }
}
