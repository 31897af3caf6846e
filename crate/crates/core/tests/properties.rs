mod common;

use coherence_inpaint::contours::{contour_levels, contour_markers, render_contours};
use coherence_inpaint::distance::{
    check_admissible, distance_to_boundary, fmm::fast_march, harmonic_distance, serialize_pixels, StopCurve,
    StopSetSpec,
};
use coherence_inpaint::domain::ball_offsets;
use coherence_inpaint::fixtures::{CaseKind, SyntheticCase};
use coherence_inpaint::guidance::{coherence_vector, masked_gaussian_smooth, structure_tensor, TensorParams};
use coherence_inpaint::metrics::{data_unchanged, range_preserved};
use coherence_inpaint::transport::{coherence_kernel, weight};
use coherence_inpaint::{
    inpaint, run_pipeline, BoolGrid, DistanceKind, FillParams, Grid, InpaintDomain, PixelCoord, RasterImage,
    RunParams,
};
use proptest::prelude::*;
use rand::Rng;

const EIGHT_NEIGHBORS: [(isize, isize); 8] = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)];

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn fill_params() -> impl Strategy<Value = FillParams> {
    prop_oneof![
        (1.5f64..5.0, 1.0f64..200.0, 0.3f64..2.0, 1.0f64..6.0)
            .prop_map(|(e, m, s, r)| FillParams::coherence(e, m, s, r)),
        (1.5f64..5.0).prop_map(FillParams::telea),
    ]
}

fn interior_pixel(d: &InpaintDomain, pick: usize) -> Option<PixelCoord> {
    let inner: Vec<PixelCoord> = d.masked_pixels().filter(|&p| !d.is_boundary(p)).collect();
    (!inner.is_empty()).then(|| inner[pick % inner.len()])
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn boundary_is_the_masked_layer_next_to_data(seed in any::<u64>()) {
        let d = common::random_domain(seed);
        let (w, h) = d.dims();
        for p in d.mask().coords() {
            let touches_data = [(-1isize, 0isize), (1, 0), (0, -1), (0, 1)]
                .iter()
                .filter_map(|&(di, dj)| p.offset(di, dj, w, h))
                .any(|q| !d.is_masked(q));
            prop_assert_eq!(d.is_boundary(p), d.is_masked(p) && touches_data);
        }
        prop_assert_eq!(d.inpaint_count(), d.masked_pixels().count());
        let again = InpaintDomain::from_mask(d.mask().clone()).unwrap();
        prop_assert_eq!(again, d);
    }

    #[test]
    fn ball_grows_with_radius_and_is_symmetric(a in 1.0f64..8.0, b in 1.0f64..8.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (small, large) = (ball_offsets(lo).unwrap(), ball_offsets(hi).unwrap());
        prop_assert!(small.offsets().len() <= large.offsets().len());
        for &(di, dj) in large.offsets() {
            prop_assert!(large.offsets().contains(&(-di, -dj)));
            prop_assert!(((di * di + dj * dj) as f64) <= hi * hi);
        }
    }

    #[test]
    fn march_accepts_in_nondecreasing_order(seed in any::<u64>(), n_seeds in 1usize..6) {
        let mut r = common::rng(seed);
        let (w, h) = (r.random_range(4..48usize), r.random_range(4..48usize));
        let region = BoolGrid::from_fn(w, h, |_| r.random_bool(0.8));
        let seeds: Vec<PixelCoord> =
            (0..n_seeds).map(|_| PixelCoord::new(r.random_range(0..h), r.random_range(0..w))).collect();
        let m = fast_march(&region, seeds.iter().copied());
        let vals: Vec<f64> = m.accepted.iter().map(|&p| m.times.at(p)).collect();
        prop_assert!(vals.windows(2).all(|v| v[0] <= v[1]));
        for s in &seeds {
            prop_assert_eq!(m.times.at(*s), 0.0);
        }
    }

    #[test]
    fn march_matches_euclidean_distance_in_open_space(seed in any::<u64>(), n_seeds in 1usize..8) {
        let mut r = common::rng(seed);
        let (w, h) = (r.random_range(8..=64usize), r.random_range(8..=64usize));
        let seeds: Vec<PixelCoord> =
            (0..n_seeds).map(|_| PixelCoord::new(r.random_range(0..h), r.random_range(0..w))).collect();
        let m = fast_march(&BoolGrid::filled(w, h, true), seeds.iter().copied());
        let exact = common::brute_force_distance(w, h, &seeds);
        for p in exact.coords() {
            let (t, e) = (m.times.at(p), exact.at(p));
            prop_assert!((t - e).abs() <= 1.0, "{p}: {t} vs {e}");
            if e >= 3.0 {
                prop_assert!((t - e).abs() <= 0.1 * e, "{p}: {t} vs {e}");
            }
        }
    }

    #[test]
    fn boundary_distance_is_accurate_and_admissible(seed in any::<u64>()) {
        let d = common::random_domain(seed);
        let f = distance_to_boundary(&d);
        let boundary: Vec<PixelCoord> = d.boundary_pixels().collect();
        let exact = common::brute_force_distance(d.width(), d.height(), &boundary);
        for p in d.masked_pixels() {
            let (t, e) = (f.value(p), exact.at(p));
            prop_assert!(t.is_finite() && t >= 0.0);
            prop_assert!((t - e).abs() <= 1.0);
        }
        prop_assert!(check_admissible(&f, &d).valid);
    }

    #[test]
    fn admissible_order_always_has_a_known_neighbor(seed in any::<u64>()) {
        let d = common::random_domain(seed);
        let f = distance_to_boundary(&d);
        let order = serialize_pixels(&f, &d).unwrap();
        prop_assert_eq!(order.len(), d.inpaint_count());
        let ts: Vec<f64> = order.entries().iter().map(|e| e.t).collect();
        prop_assert!(ts.windows(2).all(|v| v[0] <= v[1]));
        let (w, h) = d.dims();
        for (k, x) in order.pixels().enumerate() {
            let known = EIGHT_NEIGHBORS.iter().filter_map(|&(di, dj)| x.offset(di, dj, w, h)).any(|q| {
                d.is_data(q) || order.rank(q).is_some_and(|r| r < k)
            });
            prop_assert!(known, "pixel {x} at rank {k}");
        }
        let again = serialize_pixels(&distance_to_boundary(&d), &d).unwrap();
        prop_assert_eq!(order.to_text(), again.to_text());
    }

    #[test]
    fn harmonic_field_obeys_the_maximum_principle(seed in any::<u64>(), pick in any::<usize>(), t in 1.0f64..300.0) {
        let d = common::random_domain(seed);
        let p = interior_pixel(&d, pick);
        prop_assume!(p.is_some());
        let p = p.unwrap();
        let stop = StopSetSpec::stop(vec![StopCurve::new(vec![p], t)]);
        let f = harmonic_distance(&d, &stop).unwrap();
        for q in d.masked_pixels() {
            let v = f.value(q);
            prop_assert!((0.0..=t).contains(&v), "{q}: {v}");
        }
        prop_assert_eq!(f.value(p), t);
        for q in d.boundary_pixels() {
            prop_assert_eq!(f.value(q), 0.0);
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn fill_keeps_data_and_stays_in_range(
        seed in any::<u64>(),
        channels in prop_oneof![Just(1usize), Just(3usize)],
        params in fill_params(),
    ) {
        let d = common::random_domain(seed);
        let image = common::random_image(seed ^ 0x9e37, d.width(), d.height(), channels);
        let run = RunParams::new(DistanceKind::Boundary, params);
        let out = run_pipeline(&image, &d, None, &run).unwrap();
        let result = out.result.unwrap();
        prop_assert!(data_unchanged(&image, &result, &d));
        prop_assert!(range_preserved(&image, &result, &d));
        prop_assert_eq!(out.report.pixels_filled, d.inpaint_count());
        let again = run_pipeline(&image, &d, None, &run).unwrap().result.unwrap();
        prop_assert!(result.values().iter().zip(again.values()).all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn constant_data_fills_with_the_same_constant(seed in any::<u64>(), level in 0u8..=255, params in fill_params()) {
        let d = common::random_domain(seed);
        let image = RasterImage::filled(d.width(), d.height(), 3, level as f64).unwrap();
        let f = distance_to_boundary(&d);
        let order = serialize_pixels(&f, &d).unwrap();
        let out = inpaint(&image, &d, &order, &f, &params).unwrap();
        prop_assert!(out.image.values().iter().all(|&v| v == level as f64));
    }

    #[test]
    fn contours_touch_only_marker_pixels(seed in any::<u64>(), levels in 1usize..12) {
        let d = common::random_domain(seed);
        let base = common::random_image(seed, d.width(), d.height(), 1);
        let f = distance_to_boundary(&d);
        let out = render_contours(&f, &base, levels).unwrap();
        let finite: Vec<f64> = f.values().as_slice().iter().copied().filter(|v| v.is_finite()).collect();
        let (lo, hi) = finite.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let markers = if hi > lo { contour_markers(&f, &contour_levels(lo, hi, levels)) } else { BoolGrid::filled(d.width(), d.height(), false) };
        let rgb = base.to_rgb();
        for p in markers.coords() {
            if !markers.at(p) {
                prop_assert_eq!(out.pixel(p), rgb.pixel(p));
            }
        }
    }
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn weight_ratio_along_guidance_grows_with_mu(
        angle in 0.0f64..std::f64::consts::TAU,
        mu1 in 0.1f64..500.0,
        mu2 in 0.1f64..500.0,
        eps in 1.5f64..6.0,
    ) {
        let (lo, hi) = if mu1 <= mu2 { (mu1, mu2) } else { (mu2, mu1) };
        let g = [angle.cos(), angle.sin()];
        // one neighbor at unit distance along g, one at unit distance across it
        let along = [g[0] / eps, g[1] / eps];
        let across = [-g[1] / eps, g[0] / eps];
        let ratio = |mu: f64| {
            let x = PixelCoord::new(10, 10);
            let y = PixelCoord::new(10, 11);
            weight(x, y, coherence_kernel(g, along, mu)) / weight(x, y, coherence_kernel(g, across, mu))
        };
        prop_assert!(ratio(lo) <= ratio(hi));
    }

    #[test]
    fn structure_tensor_is_positive_semidefinite(seed in any::<u64>(), sigma in 0.3f64..2.0, rho in 0.5f64..4.0) {
        let image = common::random_image(seed, 20, 20, 3);
        let mut r = common::rng(seed);
        let known = BoolGrid::from_fn(20, 20, |_| r.random_bool(0.7));
        let x = PixelCoord::new(r.random_range(0..20), r.random_range(0..20));
        let s = structure_tensor(&image, &known, x, &TensorParams::new(sigma, rho).unwrap());
        let (l1, l2) = s.eigenvalues();
        let scale = s.trace().abs().max(1.0);
        prop_assert!(l1.min(l2) >= -1e-12 * scale);
        prop_assert!([s.a, s.b, s.c].iter().all(|v| v.is_finite()));
    }

    #[test]
    fn guidance_ignores_tensor_scale(a in 0.0f64..100.0, b in -50.0f64..50.0, c in 0.0f64..100.0, k in 0.01f64..100.0) {
        prop_assume!(a * c >= b * b);
        let s = coherence_inpaint::guidance::SymTensor2::new(a, b, c);
        let (g1, g2) = (coherence_vector(&s).g, coherence_vector(&s.scale(k)).g);
        prop_assert!((g1[0] - g2[0]).abs() < 1e-9 && (g1[1] - g2[1]).abs() < 1e-9, "{g1:?} vs {g2:?}");
    }

    #[test]
    fn masked_smoothing_is_a_convex_combination(seed in any::<u64>(), sigma in 0.3f64..3.0) {
        let mut r = common::rng(seed);
        let values = Grid::from_fn(16, 12, |_| r.random_range(-50.0..300.0));
        let known = BoolGrid::from_fn(16, 12, |_| r.random_bool(0.6));
        let known_vals: Vec<f64> = known.true_coords().map(|p| values.at(p)).collect();
        prop_assume!(!known_vals.is_empty());
        let lo = known_vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = known_vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let smooth = masked_gaussian_smooth(&values, &known, sigma).unwrap();
        for v in smooth.as_slice().iter().flatten() {
            prop_assert!(*v >= lo - 1e-9 && *v <= hi + 1e-9);
        }
    }
}

#[test]
fn fixtures_are_reproducible() {
    for kind in CaseKind::ALL {
        let case = SyntheticCase::new(kind);
        let (a, b) = (case.generate().unwrap(), case.generate().unwrap());
        assert_eq!(a.image, b.image, "{kind}");
        assert_eq!(a.mask, b.mask, "{kind}");
        assert_eq!(a.truth, b.truth, "{kind}");
        assert_eq!(a.image.dims(), a.truth.dims());
        assert_eq!(a.mask.dims(), a.truth.dims());
    }
}
