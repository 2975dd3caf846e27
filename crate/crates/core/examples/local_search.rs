// Move deltas and a randomized descent from a simple start.

use evrp_vns::construction::ore;
use evrp_vns::local_search::{delta_weight, rvnd, LsFlags, Move, NeighborhoodSet};
use evrp_vns::{validate, EvalBudget, Instance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/fixtures/medium-c30-s4.evrp"
    );
    let inst = Instance::from_path(path).expect("fixture parses");
    let start = ore(&inst).expect("ore start");
    let w0 = start.weight(&inst);
    println!("start: weight {w0:.2}, {} nodes", start.len());

    let n = start.len();
    for mv in [
        Move::TwoOpt { i: 1, j: n - 2 },
        Move::TwoOpt { i: 2, j: 5 },
        Move::TwoString {
            i: 1,
            j: 4,
            x: 1,
            y: 2,
        },
    ] {
        let d = delta_weight(&inst, &start, &mv).expect("move in range");
        let after = mv.apply(&inst, &start).expect("move in range");
        println!(
            "{mv:?}: delta {d:+.3}, recomputed {:+.3}",
            after.weight(&inst) - w0
        );
    }

    for flags in ["000", "100", "010", "001", "110"] {
        let set = NeighborhoodSet::from_flags(flags.parse::<LsFlags>().expect("valid flags"));
        let mut budget = EvalBudget::unlimited();
        let out = rvnd(
            &inst,
            start.clone(),
            &set,
            &mut ChaCha8Rng::seed_from_u64(3),
            &mut budget,
        );
        assert!(validate(&inst, &out.tour).valid);
        println!(
            "ls:{flags}: weight {:.2} after {} improvements, {} evaluations",
            out.tour.weight(&inst),
            out.improvements,
            budget.used()
        );
    }
}
