use qrc_core::chaos::{generate_dataset, rk4_step, System, TimeSeries};

// Per-component |x| ceilings: observed extremes over 1e5 steps plus 25%.
fn ceiling(system: System) -> [f64; 3] {
    match system {
        System::Lorenz63 => [24.1, 33.5, 59.2],
        System::Chen => [32.7, 37.8, 63.6],
        System::Chua => [2.8, 0.50, 3.98],
        System::Halvorsen => [16.7, 16.7, 16.7],
        System::Roessler => [14.3, 13.5, 28.6],
        System::Rucklidge => [12.7, 6.95, 19.2],
        System::Thomas => [5.29, 5.29, 5.29],
        System::Windmi => [32.4, 19.5, 24.1],
    }
}

fn spread(series: &TimeSeries, d: usize) -> f64 {
    let x = series.component(d);
    let m = x.iter().sum::<f64>() / x.len() as f64;
    (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / x.len() as f64).sqrt()
}

#[test]
fn every_flow_stays_on_a_bounded_nontrivial_attractor() {
    for system in System::ALL {
        let data = generate_dataset(&system.preset(), 100_000, 1000).unwrap();
        assert_eq!(data.len(), 100_000);
        let cap = ceiling(system);
        for p in data.points() {
            for (x, c) in p.iter().zip(cap) {
                assert!(x.is_finite() && x.abs() <= c, "{system}: {p:?} exceeds {cap:?}");
            }
        }
        // The last tenth still moves: not a fixed point.
        let tail = data.slice(90_000, 10_000).unwrap();
        for (d, c) in cap.iter().enumerate() {
            assert!(spread(&tail, d) > 0.05 * c, "{system} component {d} collapsed");
        }
    }
}

#[test]
fn generation_is_deterministic_and_consistent_with_stepping() {
    let spec = System::Rucklidge.preset();
    let a = generate_dataset(&spec, 500, 200).unwrap();
    let b = generate_dataset(&spec, 500, 200).unwrap();
    assert_eq!(a, b);
    let mut s = a.point(0).try_into().unwrap();
    for i in 1..a.len() {
        s = rk4_step(&spec, s).unwrap();
        assert_eq!(&s[..], a.point(i));
    }
}

#[test]
fn nearby_orbits_separate() {
    let spec = System::Lorenz63.preset();
    let base = generate_dataset(&spec, 10, 1000).unwrap();
    let x0: [f64; 3] = base.point(0).try_into().unwrap();
    let (mut a, mut b) = (x0, [x0[0] + 1e-9, x0[1], x0[2]]);
    for _ in 0..2000 {
        a = rk4_step(&spec, a).unwrap();
        b = rk4_step(&spec, b).unwrap();
    }
    let d = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
    assert!(d > 1e-3, "separation {d}");
}
