use coilchain::em::{mutual_inductance_analytic, mutual_inductance_filament};
use coilchain::{CoilSpec, Placement};

fn both(a: &CoilSpec, b: &CoilSpec, pose: &Placement) -> (f64, f64) {
    (
        mutual_inductance_analytic(a, b, pose).unwrap(),
        mutual_inductance_filament(a, b, pose, 16).unwrap(),
    )
}

#[test]
fn identical_coils_gain_coupling_when_tilted() {
    // the tilted edge swings towards the primary's wire
    let coil = CoilSpec::square(0.1, 1, 0.002, 0.5e-3);
    let flat = both(&coil, &coil, &Placement::new(0.0, 0.05, 0.0));
    let tilted = both(&coil, &coil, &Placement::new(0.0, 0.05, 40f64.to_radians()));
    assert!(tilted.0 > flat.0, "analytic {:?} {:?}", flat, tilted);
    assert!(tilted.1 > flat.1, "filament {:?} {:?}", flat, tilted);
}

#[test]
fn small_probe_loses_coupling_when_tilted() {
    let relay = CoilSpec::bench_relay();
    let probe = CoilSpec::square(0.03, 3, 0.001, 0.25e-3);
    let mut prev = (f64::INFINITY, f64::INFINITY);
    for deg in (0..=90).step_by(10) {
        let m = both(&relay, &probe, &Placement::new(0.0, 0.05, (deg as f64).to_radians()));
        assert!(m.0 < prev.0 && m.1 < prev.1, "{deg} deg: {m:?} after {prev:?}");
        prev = m;
    }
    assert!(prev.0 < 1e-15 && prev.1 < 1e-15);
}

#[test]
fn routes_agree_for_separated_coaxial_squares() {
    let relay = CoilSpec::bench_relay();
    for c in [0.03, 0.05, 0.1] {
        let (a, f) = both(&relay, &relay, &Placement::coaxial(c));
        assert!((a - f).abs() < 0.03 * f, "c={c}: {a} vs {f}");
    }
}
