// Multi-seed benchmark over the bundled fixtures.

use evrp_vns::bench::{list_instances, run_bench, BksTable};
use evrp_vns::vns::{SearchParams, StopCondition};
use evrp_vns::Instance;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");
    let instances: Vec<Instance> = list_instances(dir)
        .expect("fixture directory")
        .iter()
        .map(|p| Instance::from_path(p).expect("fixture parses"))
        .collect();
    // the generated files record their optimum in the comment line
    let refs: String = instances
        .iter()
        .filter_map(|i| {
            let opt = i.comment()?.strip_prefix("exact optimum ")?;
            Some(format!("{},{opt},exact\n", i.name()))
        })
        .collect();
    let table = BksTable::parse(&refs).expect("well formed");

    let report = run_bench(
        &instances,
        3,
        1,
        &SearchParams::default(),
        |_| StopCondition::Evaluations(5_000),
        &table,
    );
    print!("{}", report.to_table());
    print!("{}", report.to_csv());
}
