// Every initial-solution construction on one instance.

use evrp_vns::construction::{construct, dbca_cluster, parameter_grid, ConstructionId};
use evrp_vns::{validate, EvalBudget, Instance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/fixtures/medium-c30-s4.evrp"
    );
    let inst = Instance::from_path(path).expect("fixture parses");

    let clustering = parameter_grid(&inst)
        .into_iter()
        .map(|(eps, delta)| dbca_cluster(&inst, eps, delta))
        .max_by_key(|c| c.clusters.len())
        .expect("non-empty grid");
    let (eps, delta) = (clustering.epsilon, clustering.delta);
    println!(
        "clustering with eps {eps:.1}, delta {delta}: {} clusters",
        clustering.clusters.len()
    );
    for c in &clustering.clusters {
        println!("    {:?}", c.iter().map(|v| v.index()).collect::<Vec<_>>());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for id in ConstructionId::ALL {
        let mut budget = EvalBudget::unlimited();
        let tour = construct(&inst, id, &mut rng, &mut budget).expect("construction succeeds");
        assert!(validate(&inst, &tour).valid);
        println!(
            "{id} {:<14} weight {:8.2}  evaluations {}",
            id.name(),
            tour.weight(&inst),
            budget.used()
        );
    }
}
