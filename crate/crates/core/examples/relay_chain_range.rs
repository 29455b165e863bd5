//! How far a chain of 5 cm hops reaches before the tag stops waking up.
use coilchain::circuit::{matched_tag_load, power_by_relay_count, wake_cutoff};
use coilchain::scenario::Scenario;

fn main() {
    let mut chain = Scenario::relay_chain().chain;
    chain.tag.load = matched_tag_load(&chain).unwrap();
    println!("matched tag load: {:.2} ohm", chain.tag.load);

    let power = power_by_relay_count(&chain, 40).unwrap();
    for n in [0, 1, 2, 5, 10, 20, 40] {
        println!("  {n:3} relays  P_o = {:.4e} W", power[n]);
    }
    for p_min in [5e-3, 1e-3] {
        match wake_cutoff(&chain, p_min, 400).unwrap() {
            Some(n) => println!("P_min = {p_min:e} W: {n} relays, {} cm", 5 * (n + 1)),
            None => println!("P_min = {p_min:e} W: out of reach"),
        }
    }
}
