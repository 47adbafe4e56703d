//! Shared fixtures for the benchmarks in `benches/`.

use std::path::PathBuf;

use abdyn_core::Scenario;

pub fn scenario(name: &str) -> Scenario {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(format!("{name}.json"));
    Scenario::parse(&std::fs::read_to_string(&path).expect("scenario file")).expect("valid scenario")
}
