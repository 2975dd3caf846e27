// Loads an instance file and checks a few hand-written tours against it.

use evrp_vns::{validate, Instance, Tour};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/minimal.evrp");
    let inst = Instance::from_path(path).expect("fixture parses");
    println!(
        "{}: {} nodes, {} customers, {} stations, C = {}, Q = {}, h = {}, reach = {}",
        inst.name(),
        inst.node_count(),
        inst.customers().len(),
        inst.stations().len(),
        inst.cargo_capacity(),
        inst.battery_capacity(),
        inst.consumption_rate(),
        inst.reach()
    );

    for idx in [&[0, 1, 0][..], &[0, 0], &[0, 2, 1, 2, 0]] {
        let tour = Tour::from_indices(idx);
        let report = validate(&inst, &tour);
        println!(
            "{tour}: weight {:.3}, valid {}",
            tour.weight(&inst),
            report.valid
        );
        for v in &report.violations {
            println!("    {v}");
        }
        println!("    load {:?}", report.load_trace);
        println!("    charge {:?}", report.charge_trace);
    }
}
