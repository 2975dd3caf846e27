// Turns a bare customer order into a feasible tour by inserting recharge
// and depot visits.

use evrp_vns::repair::relaxed_zga;
use evrp_vns::{validate, Instance, NodeId, Tour};

fn main() {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/fixtures/medium-c30-s4.evrp"
    );
    let inst = Instance::from_path(path).expect("fixture parses");
    let d = inst.depot();

    let mut order: Vec<NodeId> = inst.customers().to_vec();
    order.sort_by(|&a, &b| {
        let (ax, ay) = inst.coord(a);
        let (bx, by) = inst.coord(b);
        ay.atan2(ax).total_cmp(&by.atan2(bx))
    });
    let raw = Tour::new(
        std::iter::once(d)
            .chain(order)
            .chain(std::iter::once(d))
            .collect(),
    );
    let before = validate(&inst, &raw);
    println!(
        "raw tour: weight {:.2}, {} violations",
        raw.weight(&inst),
        before.violations.len()
    );

    let out = relaxed_zga(&inst, &raw).expect("repairable");
    println!(
        "repaired: weight {:.2}, {} stations and {} depot visits inserted, valid {}",
        out.tour.weight(&inst),
        out.inserted_afs,
        out.inserted_depots,
        validate(&inst, &out.tour).valid
    );
    assert_eq!(
        out.tour.customer_sequence(&inst),
        raw.customer_sequence(&inst)
    );
    println!("{}", out.tour);
}
