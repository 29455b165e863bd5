//! Ant-colony search over the bench design space, checked against brute force.
use coilchain::scenario::Scenario;
use coilchain::search::{exhaustive_search, raca_optimize};

fn main() {
    let s = Scenario::paper_default();
    let setup = s.search.as_ref().unwrap();
    let constraints = s.constraints.unwrap();
    let space = setup.space(1).unwrap();
    println!("{} candidates over {:?}", space.size(), space.dimensions.iter().map(|d| d.key.to_string()).collect::<Vec<_>>());

    let raca = raca_optimize(&space, &s.chain, &constraints, &setup.params).unwrap();
    println!("raca:       P_o = {:.6e} W at {:?} ({} evaluations)", raca.best_power, raca.params, raca.evaluations);
    let every = raca.history.len() / 10;
    for (i, p) in raca.history.iter().enumerate().step_by(every.max(1)) {
        println!("  iteration {i:3}: best {p:.6e}");
    }

    let full = exhaustive_search(&space, &s.chain, &constraints).unwrap();
    println!("exhaustive: P_o = {:.6e} W at {:?}", full.best_power, full.params);
    println!("ratio {:.4}", raca.best_power / full.best_power);
}
