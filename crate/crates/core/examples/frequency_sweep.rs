//! Response of the bench chain around the carrier, capacitors fixed at their
//! 13.56 MHz values.
use coilchain::circuit::frequency_sweep;
use coilchain::scenario::Scenario;

fn main() {
    let chain = Scenario::paper_default().chain;
    println!("f_MHz,P_o_W,eta");
    for (f, r) in frequency_sweep(&chain, 12e6, 15e6, 31).unwrap() {
        println!("{:.3},{:.6e},{:.4}", f / 1e6, r.output_power, r.efficiency);
    }
}
