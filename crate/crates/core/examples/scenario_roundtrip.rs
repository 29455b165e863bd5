//! Load a scenario file, print its canonical form and check it reloads unchanged.
use coilchain::scenario::Scenario;
use std::path::PathBuf;

fn main() {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        [env!("CARGO_MANIFEST_DIR"), "scenarios", "relay_chain.toml"].iter().collect()
    });
    let scenario = match Scenario::from_path(&path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    };
    let text = scenario.to_toml();
    print!("{text}");
    assert_eq!(Scenario::from_toml_str(&text).unwrap(), scenario);
    eprintln!("round trip ok: {} relays", scenario.chain.n_relays());
}
