use nalgebra::DMatrix;
use qgrd::linalg::vec_rowmajor;
use qgrd::tlrep::*;

fn cache(n: usize) -> JwCache {
    JwCache::build(3, n, &TlBudget::default()).unwrap()
}

// Ambient (P_k ⊗ P_n)(1 ⊗ t^q ⊗ 1) restricted to V_i ⊗ V_j and read in V_k ⊗ V_n coordinates.
fn ambient_embed(c: &JwCache, k: usize, n: usize, q: usize) -> DMatrix<f64> {
    let b = TlBudget::default();
    let nn = 3usize;
    let (i, j) = (k - q, n - q);
    let vk = c.ambient_isometry(k, &b).unwrap();
    let vn = c.ambient_isometry(n, &b).unwrap();
    let vi = c.ambient_isometry(i, &b).unwrap();
    let vj = c.ambient_isometry(j, &b).unwrap();
    let nq = nn.pow(q as u32);
    let (ai, aj) = (nn.pow(i as u32), nn.pow(j as u32));
    // insertion of sum_w e_w ⊗ e_{rev w} between the i and j strands
    let mut ins = DMatrix::zeros(ai * nq * nq * aj, ai * aj);
    for x in 0..ai {
        for y in 0..aj {
            for w in 0..nq {
                let r = reverse_word(w, nn, q);
                let row = ((x * nq + w) * nq + r) * aj + y;
                ins[(row, x * aj + y)] = 1.0;
            }
        }
    }
    vk.kronecker(&vn).transpose() * ins * vi.kronecker(&vj)
}

#[test]
fn reduced_isometries_span_jones_wenzl_images() {
    let c = cache(5);
    for n in 0..=5 {
        let p = jw_projector(3, n, &TlBudget::default()).unwrap();
        assert!((&p * &p - &p).norm() < 1e-10, "idempotent n={n}");
        assert!((&p - p.transpose()).norm() < 1e-10);
        assert!((p.trace() - c.dim(n) as f64).abs() < 1e-8);
        let v = c.ambient_isometry(n, &TlBudget::default()).unwrap();
        assert!((&v * v.transpose() - &p).norm() < 1e-9, "range n={n}");
        // kills every cup-cap
        for i in 0..n.saturating_sub(1) {
            let e = DMatrix::<f64>::identity(3usize.pow(i as u32), 3usize.pow(i as u32))
                .kronecker(&cup_cap(3))
                .kronecker(&DMatrix::<f64>::identity(
                    3usize.pow((n - i - 2) as u32),
                    3usize.pow((n - i - 2) as u32),
                ));
            assert!((e * &p).norm() < 1e-10);
        }
    }
}

#[test]
fn left_isometry_matches_ambient() {
    let c = cache(5);
    let b = TlBudget::default();
    for n in 1..=5 {
        let v = c.ambient_isometry(n, &b).unwrap();
        let vp = c.ambient_isometry(n - 1, &b).unwrap();
        let id = DMatrix::<f64>::identity(3, 3);
        let k = id.kronecker(&vp).transpose() * &v;
        assert!((k - c.left_isometry(n)).norm() < 1e-10, "n={n}");
    }
}

#[test]
fn structured_embedding_matches_ambient() {
    let c = cache(4);
    for k in 0..=4usize {
        for n in 0..=(6 - k).min(4) {
            for q in 0..=k.min(n) {
                let e = EmbedT::new(&c, k, n, q).unwrap();
                let amb = ambient_embed(&c, k, n, q);
                assert!((e.to_dense() - &amb).norm() < 1e-10, "({k},{n},{q})");
                let x = DMatrix::from_fn(e.mi, e.mj, |r, s| ((r * 7 + s * 3) % 5) as f64 - 2.0);
                let y = e.apply(&x);
                assert!((vec_rowmajor(&y) - &amb * vec_rowmajor(&x)).norm() < 1e-10);
                let z = DMatrix::from_fn(e.mk, e.mn, |r, s| ((r * 5 + s) % 7) as f64 - 3.0);
                assert!(
                    (vec_rowmajor(&e.adjoint(&z)) - amb.transpose() * vec_rowmajor(&z)).norm()
                        < 1e-10
                );
                assert!((e.gram() - amb.transpose() * &amb).norm() < 1e-9);
            }
        }
    }
}

#[test]
fn single_cup_on_first_irreducible() {
    let c = cache(1);
    let e = EmbedT::new(&c, 1, 1, 1).unwrap().to_dense();
    assert_eq!(e.shape(), (9, 1));
    assert!((e.norm_squared() - 3.0).abs() < 1e-14);
}

#[test]
fn isotypic_examples() {
    let c = cache(2);
    let p0 = isotypic_projector(&c, 1, 1, 0, 1e-8).unwrap();
    assert!((p0 - cup_cap(3) / 3.0).norm() < 1e-12);
    let p2 = isotypic_projector(&c, 1, 1, 2, 1e-8).unwrap();
    let jw = jw_projector(3, 2, &TlBudget::default()).unwrap();
    assert!((p2 - jw).norm() < 1e-12);
    let p22 = isotypic_projector(&c, 2, 2, 2, 1e-8).unwrap();
    assert!((p22.trace() - 8.0).abs() < 1e-9);
}

#[test]
fn isotypic_family_resolves_identity() {
    let c = cache(8);
    for k in 0..=8usize {
        for n in 0..=(8 - k) {
            let d = c.dim(k) * c.dim(n);
            if d > 1200 {
                continue;
            }
            let lo = k.abs_diff(n);
            let ps: Vec<_> = (lo..=k + n)
                .step_by(2)
                .map(|l| isotypic_projector(&c, k, n, l, 1e-8).unwrap())
                .collect();
            let sum = ps.iter().fold(DMatrix::zeros(d, d), |acc, p| acc + p);
            assert!(
                (sum - DMatrix::<f64>::identity(d, d)).norm() < 1e-8,
                "({k},{n})"
            );
            for (a, pa) in ps.iter().enumerate() {
                let l = lo + 2 * a;
                assert!((pa.trace() - c.dim(l) as f64).abs() < 1e-8);
                assert!((pa * pa - pa).norm() < 1e-8);
                for pb in &ps[a + 1..] {
                    assert!((pa * pb).norm() < 1e-8);
                }
            }
        }
    }
}

#[test]
fn sectors_are_scalar_up_to_eight_strands() {
    let c = cache(8);
    for k in 0..=8usize {
        for n in 0..=(8 - k) {
            for l in (k.abs_diff(n)..=k + n).step_by(2) {
                let s = Sector::new(&c, k, n, l).unwrap();
                assert!(
                    s.scalar_deviation() <= 1e-8,
                    "({k},{l},{n}) {}",
                    s.scalar_deviation()
                );
                assert_eq!(s.dim(), c.dim(l));
            }
        }
    }
}

#[test]
fn morphism_norms_match_quantum_dimension_formula() {
    let c = cache(5);
    let (m, f) = morphism_norm_check(&c, 1, 1, 2).unwrap();
    assert!((f - 7.0 / 3.0).abs() < 1e-12);
    assert!((m - f).abs() < 1e-8);
    let (m, f) = morphism_norm_check(&c, 1, 1, 0).unwrap();
    assert!((f - 8.0 / 3.0).abs() < 1e-12);
    assert!((m - f).abs() < 1e-8);
    for p in 0..=4usize {
        for pp in 0..=4usize {
            for l in (p.abs_diff(pp)..=p + pp).step_by(2) {
                let (m, f) = morphism_norm_check(&c, p, pp, l).unwrap();
                assert!((m - f).abs() < 1e-6, "({p},{pp},{l}): {m} vs {f}");
            }
        }
    }
}

#[test]
fn dump_roundtrip_preserves_sectors() {
    let c = cache(3);
    let mut buf = Vec::new();
    save_cache(&c, 1e-8, &mut buf).unwrap();
    let (d, _) = load_cache(buf.as_slice(), &TlBudget::default()).unwrap();
    let a = isotypic_projector(&c, 2, 1, 1, 1e-8).unwrap();
    let b = isotypic_projector(&d, 2, 1, 1, 1e-8).unwrap();
    assert_eq!(a, b);
}
