// Writes small random instances in the competition format.
//
// The directory defaults to `tests/fixtures` of this crate; set
// `EVRP_FIXTURE_OUT` to write elsewhere.

use std::fs;
use std::path::PathBuf;

use evrp_vns::oracle::{exact_solve, gen_fixture, FixtureParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SHAPES: [(usize, usize); 4] = [(4, 1), (5, 2), (6, 2), (7, 3)];

fn main() {
    let dir = std::env::var_os("EVRP_FIXTURE_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures")));
    fs::create_dir_all(&dir).expect("create output directory");

    for (k, &(customers, stations)) in SHAPES.iter().enumerate() {
        let params = FixtureParams {
            customers,
            stations,
            ..FixtureParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(k as u64 + 1);
        let name = format!("tiny-c{customers}-s{stations}");
        let inst = gen_fixture(&mut rng, &params).with_name(&name);
        let (opt, _) = exact_solve(&inst).expect("fixture within oracle limits");
        let inst = inst.with_comment(format!("exact optimum {opt:.6}"));
        let path = dir.join(format!("{name}.evrp"));
        fs::write(&path, inst.to_text()).expect("write fixture");
        println!("{}: optimum {opt:.2}", path.display());
    }

    let params = FixtureParams {
        customers: 30,
        stations: 4,
        side: 200,
        max_demand: 20,
        capacity_share: (0.2, 0.3),
        ..FixtureParams::default()
    };
    let inst = gen_fixture(&mut ChaCha8Rng::seed_from_u64(99), &params).with_name("medium-c30-s4");
    let path = dir.join("medium-c30-s4.evrp");
    fs::write(&path, inst.to_text()).expect("write fixture");
    println!("{}: {} nodes", path.display(), inst.node_count());
}
