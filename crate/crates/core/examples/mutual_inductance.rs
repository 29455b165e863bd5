//! Mutual inductance between a 10 cm relay and a 3 cm probe, closed form
//! against the filament integration, over a few poses.
use coilchain::em::{mutual_inductance_analytic, mutual_inductance_filament};
use coilchain::{CoilSpec, Placement};

fn main() {
    let relay = CoilSpec::bench_relay();
    let probe = CoilSpec::square(0.03, 3, 0.001, 0.25e-3);
    println!("{:>6} {:>6} {:>6} {:>14} {:>14} {:>8}", "d_cm", "c_cm", "deg", "analytic_H", "filament_H", "diff_%");
    for (d, c, deg) in [(0.0, 0.02, 0.0), (0.0, 0.05, 0.0), (0.03, 0.05, 0.0), (0.0, 0.05, 45.0), (0.05, 0.1, 30.0)] {
        let pose = Placement::new(d, c, f64::to_radians(deg));
        let a = mutual_inductance_analytic(&relay, &probe, &pose).unwrap();
        let f = mutual_inductance_filament(&relay, &probe, &pose, 32).unwrap();
        println!(
            "{:6.1} {:6.1} {:6.0} {:14.6e} {:14.6e} {:8.3}",
            d * 100.0,
            c * 100.0,
            deg,
            a,
            f,
            100.0 * (a - f) / f
        );
    }
}
