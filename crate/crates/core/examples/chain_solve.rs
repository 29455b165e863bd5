//! Solve the bench chain with the ladder in both modes and with the mesh solver.
use coilchain::circuit::{mesh_solve_network, reflected_impedances, solve_network, Network, SolverMode};
use coilchain::scenario::Scenario;

fn main() {
    let chain = Scenario::paper_default().chain;
    let net = Network::from_config(&chain).unwrap();
    println!("couplings: {:?}", net.coupling);
    for mode in [SolverMode::CorrectedPhasor, SolverMode::PaperLiteral] {
        let r = solve_network(&net, mode).unwrap();
        println!("{mode:?}");
        println!("  reflections: {:?}", reflected_impedances(&net, mode).unwrap());
        println!("  currents A: {:?}", r.currents);
        println!("  P_in = {:.4e} W, P_o = {:.4e} W, eta = {:.4}", r.input_power, r.output_power, r.efficiency);
    }
    let m = mesh_solve_network(&net).unwrap();
    println!("mesh LU: P_o = {:.4e} W, eta = {:.4}", m.output_power, m.efficiency);
}
