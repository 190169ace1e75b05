use proptest::prelude::*;
use wp_curvature::tensor::{canonical, compute_block, orbit, selection_rule, TensorCache, TensorComputer};
use wp_curvature::wedge::{assemble_matrix, wedge_bilinear_form, wedge_quadratic_form, WedgeVector};

fn cache3() -> &'static TensorCache {
    static CACHE: std::sync::OnceLock<TensorCache> = std::sync::OnceLock::new();
    CACHE.get_or_init(|| {
        let mut c = TensorCache::new(3);
        compute_block(3, &mut c, &TensorComputer::default(), 0).unwrap();
        c
    })
}

proptest! {
    #[test]
    fn canonical_form_is_orbit_invariant(i in 1u32..9, j in 1u32..9, k in 1u32..9, l in 1u32..9) {
        let idx = [i, j, k, l];
        for o in orbit(idx) {
            prop_assert_eq!(canonical(o), canonical(idx));
            prop_assert_eq!(selection_rule(o), selection_rule(idx));
        }
    }

    #[test]
    fn form_is_nonpositive_and_homogeneous(v in prop::collection::vec(-1.0f64..1.0, 15), s in -3.0f64..3.0) {
        let w = WedgeVector::from_flat(3, &v).unwrap();
        let q = wedge_quadratic_form(&w, cache3()).unwrap();
        prop_assert!(q <= 1e-12 * w.norm_sq().max(1.0));
        let qs = wedge_quadratic_form(&w.scale(s), cache3()).unwrap();
        prop_assert!((qs - s * s * q).abs() <= 1e-12 * (1.0 + qs.abs()));
    }

    #[test]
    fn matrix_reproduces_form(v in prop::collection::vec(-1.0f64..1.0, 15), u in prop::collection::vec(-1.0f64..1.0, 15)) {
        let m = assemble_matrix(3, cache3()).unwrap();
        let w = WedgeVector::from_flat(3, &v).unwrap();
        let x = WedgeVector::from_flat(3, &u).unwrap();
        let direct = wedge_quadratic_form(&w, cache3()).unwrap();
        prop_assert!((m.form(&v) - direct).abs() < 1e-12);
        let b = wedge_bilinear_form(&w, &x, cache3()).unwrap();
        let mb: f64 = (0..15).map(|r| (0..15).map(|c| v[r] * m.matrix[(r, c)] * u[c]).sum::<f64>()).sum();
        prop_assert!((b - mb).abs() < 1e-12);
    }
}
