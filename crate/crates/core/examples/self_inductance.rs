//! Self-inductance, AC resistance and the tuning capacitor of the bench relay.
use coilchain::em::{ac_resistance, dc_resistance, match_capacitor, resonant_frequency, self_inductance, skin_depth};
use coilchain::geometry::NFC_FREQUENCY;
use coilchain::CoilSpec;

fn main() {
    let relay = CoilSpec::bench_relay();
    let l = self_inductance(&relay).unwrap();
    let c = match_capacitor(l, NFC_FREQUENCY);
    println!("relay: {} mm side, {} turns", relay.side_a * 1e3, relay.turns);
    println!("L          = {:.4} uH", l * 1e6);
    println!("C (tuned)  = {:.3} pF", c * 1e12);
    println!("f0 check   = {:.6} MHz", resonant_frequency(l, c) / 1e6);
    println!("skin depth = {:.2} um", skin_depth(NFC_FREQUENCY) * 1e6);
    println!("R_dc       = {:.4} ohm", dc_resistance(&relay));
    println!("R_ac       = {:.4} ohm", ac_resistance(&relay, NFC_FREQUENCY));
    for turns in 1..=5 {
        let coil = CoilSpec::square(0.1, turns, 0.002, relay.wire_radius);
        let l = self_inductance(&coil).unwrap();
        println!("  {turns} turns: L = {:.4} uH, C = {:.2} pF", l * 1e6, match_capacitor(l, NFC_FREQUENCY) * 1e12);
    }
}
