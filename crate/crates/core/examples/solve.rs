// Full search under a small evaluation budget, with the progress log.

use evrp_vns::solution::solution_text;
use evrp_vns::vns::{solve, SearchParams, StopCondition};
use evrp_vns::{validate, Instance};

fn main() {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/fixtures/medium-c30-s4.evrp"
    );
    let inst = Instance::from_path(path).expect("fixture parses");
    let params: SearchParams = "VNS_zga_c:14_ls:110_p:2_r:0.35"
        .parse()
        .expect("valid setup");
    let params = params.with_seed(5);

    let res = solve(&inst, &params, StopCondition::Evaluations(20_000)).expect("solve");
    assert!(validate(&inst, &res.tour).valid);
    println!(
        "{}: weight {:.2}, {} evaluations, {} iterations, {} restarts",
        params.setup(),
        res.weight,
        res.stats.evals_used,
        res.stats.iterations,
        res.stats.restarts
    );
    print!("{}", solution_text(&res.tour, res.weight));
    print!("{}", res.stats.to_csv());
}
