use nua_core::scenario::{path_loss, shannon_rate, BsKind, GenerationParams, Location, Scenario};
use nua_core::{generate_scenario, Network};
use proptest::prelude::*;

mod common;

fn kind() -> impl Strategy<Value = BsKind> {
    prop_oneof![Just(BsKind::Macro), Just(BsKind::Small)]
}

proptest! {
    #[test]
    fn path_loss_strictly_increasing(k in kind(), d in 1.0..5000.0f64, step in 1e-3..1000.0f64) {
        prop_assert!(path_loss(k, d + step).unwrap() > path_loss(k, d).unwrap());
    }

    #[test]
    fn rate_monotone_in_sinr(a in 0.0..1e4f64, b in 0.0..1e4f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(shannon_rate(10e6, lo) <= shannon_rate(10e6, hi));
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), grid in 2usize..12, n_macro in 0usize..4, n_small in 1usize..9) {
        let params = GenerationParams { grid, n_macro, n_small, ..Default::default() };
        let sc = generate_scenario(seed, &params).unwrap();
        let back = Scenario::from_json(&sc.to_json().unwrap()).unwrap();
        prop_assert_eq!(&back, &sc);
    }

    #[test]
    fn generation_is_pure(seed in any::<u64>()) {
        let params = GenerationParams { grid: 8, ..Default::default() };
        let a = generate_scenario(seed, &params).unwrap().to_json().unwrap();
        let b = generate_scenario(seed, &params).unwrap().to_json().unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn rate_is_zero_at_and_below_sensitivity() {
    let sc = generate_scenario(0, &GenerationParams { grid: 4, ..Default::default() }).unwrap();
    // Small cells lose only 10 dB per decade, so this has to be very far.
    let far = Location::new(1e13, 1e13);
    for j in 0..sc.num_bs() {
        assert!(sc.received_power_dbm(&far, j) < sc.radio.receiver_sensitivity_dbm);
        assert_eq!(sc.rate(&far, j), 0.0);
    }
}

#[test]
fn every_grid_point_is_covered_on_the_reference_deployment() {
    for seed in 0..5 {
        let net = common::replica(seed, 0.0);
        for p in 0..net.num_points() {
            assert!(net.rates_at(p).iter().any(|&r| r > 0.0));
        }
    }
}

#[test]
fn uncovered_point_is_reported() {
    let mut sc = generate_scenario(0, &GenerationParams { grid: 4, ..Default::default() }).unwrap();
    sc.traffic_grid.points[5].location = Location::new(1e13, 1e13);
    sc.area.width = 2e13;
    sc.area.height = 2e13;
    match Network::new(sc) {
        Err(nua_core::Error::UncoveredPoint { point }) => assert_eq!(point, 5),
        other => panic!("expected an uncovered point, got {other:?}"),
    }
}
