use ncqosc_core::energy::{constant_field_asymptote, energy_general, reality_window};
use ncqosc_core::{catalog, CaseId, ScenarioParams};
use proptest::prelude::*;

#[test]
fn decaying_field_approaches_the_asymptote_no_slower_than_constant_field() {
    let p = ScenarioParams::fig1();
    let (c1, c3) = (catalog(CaseId::Set1Case1, &p).unwrap(), catalog(CaseId::Set1Case3, &p).unwrap());
    let limit = constant_field_asymptote(&c1, 1).unwrap();
    for i in 1..=100 {
        let t = 0.05 * i as f64;
        let d1 = (energy_general(&c1, 1, 0, t).unwrap() - limit).abs();
        let d3 = (energy_general(&c3, 1, 0, t).unwrap() - limit).abs();
        assert!(d3 <= d1 * (1.0 + 1e-12), "t={t}: {d3} > {d1}");
    }
}

#[test]
fn every_figure_case_has_a_usable_window() {
    for p in [ScenarioParams::fig1(), ScenarioParams::fig2()] {
        for case in CaseId::ALL {
            let w = reality_window(&catalog(case, &p).unwrap());
            assert!(!w.empty, "{case}: {w}");
            assert!(w.contains(1.0), "{case}: {w}");
        }
    }
}

proptest! {
    #[test]
    fn energy_scales_linearly_in_the_tower_index(n in 0u32..20, t in 0.0f64..5.0) {
        // for m = 0 the general energy is affine in n
        let s = catalog(CaseId::Set1Case2, &ScenarioParams::fig1()).unwrap();
        let e = |k: u32| energy_general(&s, k, 0, t).unwrap();
        let second = e(n + 2) - 2.0 * e(n + 1) + e(n);
        prop_assert!(second.abs() <= 1e-8 * e(n + 2).abs());
    }
}
