//! Received power against relay-to-probe distance, offset and tilt.
use coilchain::circuit::{solve_chain, SolverMode};
use coilchain::scenario::Scenario;

fn main() {
    let base = Scenario::paper_default().chain;
    let power = |d: f64, c: f64, theta: f64| {
        let mut cfg = base.clone();
        cfg.placements[1].lateral_d = d;
        cfg.placements[1].axial_c = c;
        cfg.placements[1].angle_theta = theta;
        solve_chain(&cfg, SolverMode::CorrectedPhasor).map(|r| r.output_power)
    };
    println!("axial (d = 0, theta = 0)");
    for i in 0..15 {
        let c = 0.01 * (i + 1) as f64;
        println!("  c = {:4.1} cm  P_o = {:.4e} W", c * 100.0, power(0.0, c, 0.0).unwrap());
    }
    println!("lateral (c = 5 cm)");
    for i in 0..7 {
        let d = 0.01 * i as f64;
        println!("  d = {:4.1} cm  P_o = {:.4e} W", d * 100.0, power(d, 0.05, 0.0).unwrap());
    }
    println!("tilt (c = 5 cm)");
    for deg in (0..=90).step_by(15) {
        let p = power(0.0, 0.05, f64::from(deg).to_radians()).unwrap();
        println!("  theta = {deg:2} deg  P_o = {p:.4e} W");
    }
}
