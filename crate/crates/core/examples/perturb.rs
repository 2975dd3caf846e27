// Double-bridge perturbation with repair.

use evrp_vns::construction::ore;
use evrp_vns::perturbation::{double_bridge, BridgeDraw};
use evrp_vns::{validate, Instance, Tour};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let toy = Tour::from_indices(&[0, 1, 2, 3, 4, 5, 6, 7, 0]);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let draw = BridgeDraw::random(toy.len(), 3, &mut rng);
    println!(
        "cuts {:?}, order {:?}, reversed {:?}",
        draw.cuts, draw.order, draw.reversed
    );
    println!("{toy} -> {}", draw.reconnect(&toy));

    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/fixtures/medium-c30-s4.evrp"
    );
    let inst = Instance::from_path(path).expect("fixture parses");
    let start = ore(&inst).expect("ore start");
    for p in 1..=4 {
        let out = double_bridge(&inst, &start, p, &mut rng).expect("repairable");
        assert!(validate(&inst, &out).valid);
        println!(
            "p = {p}: {:.2} -> {:.2}",
            start.weight(&inst),
            out.weight(&inst)
        );
    }
}
