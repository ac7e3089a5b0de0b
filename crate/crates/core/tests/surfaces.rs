use std::f64::consts::PI;
use std::path::PathBuf;

use hyperheat::geometry::SurfaceSignature;
use hyperheat::surface::{
    completeness_deficit, hyperbolic_trace, identity_term, reduced_trace, standard_trace,
    stf_geometric_side, stf_spectral_side_compact, LengthSpectrum, SurfaceData, TestFunctionPair,
};
use hyperheat::{ComplexTime, InverseClassConvention, TraceConfig};
use proptest::prelude::*;

fn fixture(name: &str) -> SurfaceData {
    SurfaceData::load(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name))
        .unwrap()
}

fn cfg() -> TraceConfig {
    TraceConfig::default()
}

#[test]
fn fixtures_load_and_validate() {
    let g2 = fixture("genus2_synthetic.json");
    assert_eq!(g2.signature, SurfaceSignature::new(2, 0, vec![]).unwrap());
    assert_eq!(g2.spectrum.class_count(), 62);
    assert!((g2.volume().unwrap() - 4.0 * PI).abs() < 1e-14);

    let tc = fixture("two_cone.json");
    assert_eq!(tc.signature.cone_orders, vec![3, 4]);
    assert_eq!(tc.degenerating_orders, vec![4]);
    // 2 pi (0 + 2/3 + 3/4)
    assert!((tc.volume().unwrap() - 2.0 * PI * (2.0 / 3.0 + 0.75)).abs() < 1e-14);
}

#[test]
fn empty_fixture_standard_trace_is_the_identity_term() {
    let s = fixture("genus2_empty.json");
    for t in [0.1, 1.0, 10.0] {
        let z = ComplexTime::real(t).unwrap();
        let st = standard_trace(&s, z, &cfg()).unwrap();
        let id = identity_term(4.0 * PI, z, &cfg()).unwrap();
        assert_eq!(st.value, id.value);
    }
}

#[test]
fn gaussian_trace_formula_on_fixtures() {
    // The geometric side with H = e^{-t r²} is e^{t/4} times the standard
    // trace, term by term.
    for name in ["genus2_synthetic.json", "two_cone.json", "genus2_empty.json"] {
        let s = fixture(name);
        for t in [0.3, 1.0, 4.0] {
            let z = ComplexTime::real(t).unwrap();
            let g = stf_geometric_side(&s, &TestFunctionPair::gaussian(z), &cfg()).unwrap();
            let st = standard_trace(&s, z, &cfg()).unwrap();
            let heat = g.total().value * (-t / 4.0f64).exp();
            assert!(
                (heat - st.value).norm() <= 1e-9 * st.value.norm(),
                "{name} t={t}: {heat} vs {}",
                st.value
            );
        }
    }
}

#[test]
fn reduced_trace_drops_only_the_flagged_cone() {
    let s = fixture("two_cone.json");
    let z = ComplexTime::new(1.0, 0.5).unwrap();
    let r = reduced_trace(&s, z, &cfg()).unwrap();
    let h = hyperbolic_trace(&s.spectrum, z, &cfg()).unwrap();
    let e3 = hyperheat::surface::elliptic_trace(&[3], z, &cfg()).unwrap();
    assert!((r.value - (h.value + e3.value)).norm() <= 1e-15 * r.value.norm());
}

#[test]
fn spectral_side_with_the_eigenvalue_fixture() {
    let ev = hyperheat::experiments::read_eigenvalues(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/genus2_synthetic.eig"),
    )
    .unwrap();
    assert_eq!(ev, vec![0.0, 0.2, 1.3, 2.7, 2.7, 4.1]);
    let t = 0.7;
    let pair = TestFunctionPair::gaussian(ComplexTime::real(t).unwrap());
    let got = stf_spectral_side_compact(&ev, &pair).unwrap();
    // H(r) = e^{-t r²} with r² = lambda - 1/4 for every eigenvalue.
    let expected: f64 = ev.iter().map(|l| (-t * (l - 0.25)).exp()).sum();
    assert!((got.re - expected).abs() < 1e-14 * expected && got.im == 0.0);
}

#[test]
fn uncertainty_shrinks_as_the_spectrum_grows() {
    // Nested truncations of one spectrum: longer prefix, larger radius,
    // smaller total uncertainty.
    let s = fixture("genus2_synthetic.json");
    let z = ComplexTime::real(1.0).unwrap();
    let mut prev = f64::INFINITY;
    for r in [2.0, 3.0, 3.5, 4.0, 4.5, 5.0] {
        let sub = s.spectrum.truncated(r);
        let u = hyperbolic_trace(&sub, z, &cfg()).unwrap().uncertainty();
        assert!(u < prev, "radius {r}: {u} !< {prev}");
        prev = u;
    }
}

#[test]
fn deficit_vanishes_far_out() {
    let z = ComplexTime::real(1.0).unwrap();
    let d = |r: f64| completeness_deficit(r, z, &cfg()).unwrap();
    assert!(d(40.0) < 1e-100 && d(40.0) >= 0.0);
    assert!(d(5.0) > d(10.0));
}

fn spectrum_strategy() -> impl Strategy<Value = LengthSpectrum> {
    (proptest::collection::vec((0.1f64..12.0, 1u64..40), 0..25), 0.0f64..15.0)
        .prop_map(|(e, r)| LengthSpectrum::from_unsorted(e, r).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip_is_bit_exact(spec in spectrum_strategy(), g in 2u32..5, cones in proptest::collection::vec(2u32..30, 0..4)) {
        let sig = SurfaceSignature::new(g, 0, cones.clone()).unwrap();
        let degenerating = cones.first().map(|&q| vec![q]).unwrap_or_default();
        let s = SurfaceData::new(sig, spec, degenerating).unwrap();
        let back = SurfaceData::from_json(&s.to_json().unwrap()).unwrap();
        prop_assert_eq!(&back, &s);
        for (a, b) in back.spectrum.entries().iter().zip(s.spectrum.entries()) {
            prop_assert_eq!(a.0.to_bits(), b.0.to_bits());
        }
    }

    #[test]
    fn hyperbolic_trace_is_linear_in_multiplicity(spec in spectrum_strategy(), k in 2u64..6, t in 0.2f64..4.0, s in -2.0f64..2.0) {
        prop_assume!(!spec.is_empty());
        let z = ComplexTime::new(t, s).unwrap();
        let scaled = LengthSpectrum::new(
            spec.entries().iter().map(|&(l, m)| (l, m * k)).collect(),
            spec.completeness_radius(),
        ).unwrap();
        let a = hyperbolic_trace(&spec, z, &cfg()).unwrap().value;
        let b = hyperbolic_trace(&scaled, z, &cfg()).unwrap().value;
        prop_assert!((b - a * k as f64).norm() <= 1e-12 * b.norm() + 1e-300);
    }

    #[test]
    fn identified_convention_is_exactly_twice_distinct(spec in spectrum_strategy(), t in 0.2f64..4.0) {
        let z = ComplexTime::real(t).unwrap();
        let ident = TraceConfig { convention: InverseClassConvention::Identified, ..cfg() };
        let a = hyperbolic_trace(&spec, z, &cfg()).unwrap().value;
        let b = hyperbolic_trace(&spec, z, &ident).unwrap().value;
        prop_assert_eq!(b, a * 2.0);
    }

    #[test]
    fn geometric_side_scales_with_the_test_function(t in 0.3f64..3.0, c in 0.1f64..10.0) {
        let s = fixture("two_cone.json");
        let pair = TestFunctionPair::gaussian(ComplexTime::real(t).unwrap());
        let a = stf_geometric_side(&s, &pair, &cfg()).unwrap().total().value;
        let b = stf_geometric_side(&s, &pair.scaled(c), &cfg()).unwrap().total().value;
        prop_assert!((b - a * c).norm() <= 1e-9 * b.norm());
    }

    #[test]
    fn real_time_traces_are_real(t in 0.05f64..5.0) {
        let s = fixture("two_cone.json");
        let z = ComplexTime::real(t).unwrap();
        let v = standard_trace(&s, z, &cfg()).unwrap().value;
        prop_assert_eq!(v.im, 0.0);
        prop_assert!(v.re > 0.0);
    }
}
