// Compares the heuristic with the exact solver on generated tiny instances.

use evrp_vns::oracle::{exact_solve, gen_fixture, FixtureParams};
use evrp_vns::vns::{solve, SearchParams, StopCondition};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let params = FixtureParams {
        customers: 6,
        ..FixtureParams::default()
    };
    let mut matched = 0;
    let trials = 10;
    for k in 0..trials {
        let inst = gen_fixture(&mut rng, &params);
        let (opt, opt_tour) = exact_solve(&inst).expect("tiny instance");
        let res = solve(
            &inst,
            &SearchParams::default().with_seed(k),
            StopCondition::Evaluations(10_000),
        )
        .expect("solve");
        let hit = (res.weight - opt).abs() < 1e-6;
        matched += hit as usize;
        println!(
            "#{k}: optimum {opt:8.2} {opt_tour}  vns {:8.2}{}",
            res.weight,
            if hit { "" } else { "  (miss)" }
        );
    }
    println!("{matched}/{trials} optima found");
}
