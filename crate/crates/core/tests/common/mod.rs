#![allow(dead_code)]

use evrp_vns::local_search::Move;
use evrp_vns::oracle::{gen_fixture, FixtureParams};
use evrp_vns::repair::relaxed_zga;
use evrp_vns::{Instance, NodeId, Tour};
use rand::seq::SliceRandom;
use rand::Rng;

pub const MOVE_KINDS: [&str; 5] = [
    "two-opt",
    "two-string",
    "afs-relocate",
    "afs-realloc-more",
    "insertion-cost",
];

pub fn random_instance<R: Rng>(
    rng: &mut R,
    customers: (usize, usize),
    stations: (usize, usize),
) -> Instance {
    let params = FixtureParams {
        customers: rng.gen_range(customers.0..=customers.1),
        stations: rng.gen_range(stations.0..=stations.1),
        side: rng.gen_range(50..=500),
        max_demand: rng.gen_range(1..=30),
        ..FixtureParams::default()
    };
    gen_fixture(rng, &params)
}

pub fn shuffled_customers<R: Rng>(inst: &Instance, rng: &mut R) -> Vec<NodeId> {
    let mut cs = inst.customers().to_vec();
    cs.shuffle(rng);
    cs
}

/// Depot, a customer permutation, depot.
pub fn giant_tour<R: Rng>(inst: &Instance, rng: &mut R) -> Tour {
    let d = inst.depot();
    Tour::new(
        std::iter::once(d)
            .chain(shuffled_customers(inst, rng))
            .chain(std::iter::once(d))
            .collect(),
    )
}

/// Customer permutation with stations and depots sprinkled in; not
/// necessarily feasible.
pub fn raw_tour<R: Rng>(inst: &Instance, rng: &mut R) -> Tour {
    let d = inst.depot();
    let mut nodes = vec![d];
    for c in shuffled_customers(inst, rng) {
        if rng.gen_bool(0.2) {
            nodes.push(d);
        }
        if !inst.stations().is_empty() && rng.gen_bool(0.3) {
            nodes.push(*inst.stations().choose(rng).unwrap());
        }
        nodes.push(c);
    }
    nodes.push(d);
    let mut t = Tour::new(nodes);
    t.dedup_consecutive();
    t
}

pub fn valid_tour<R: Rng>(inst: &Instance, rng: &mut R) -> Tour {
    relaxed_zga(inst, &giant_tour(inst, rng))
        .expect("fixtures satisfy the repair assumptions")
        .tour
}

pub fn naive_two_opt(t: &[usize], i: usize, j: usize) -> Vec<usize> {
    let mut mid: Vec<usize> = t[i..=j].to_vec();
    mid.reverse();
    [&t[..i], &mid[..], &t[j + 1..]].concat()
}

pub fn naive_two_string(t: &[usize], i: usize, j: usize, x: usize, y: usize) -> Vec<usize> {
    [
        &t[..i],
        &t[j..j + y],
        &t[i + x..j],
        &t[i..i + x],
        &t[j + y..],
    ]
    .concat()
}

/// A random move of the given kind that satisfies its index contract, or
/// `None` when the tour admits none.
pub fn random_move<R: Rng>(kind: &str, inst: &Instance, tour: &Tour, rng: &mut R) -> Option<Move> {
    let t = tour.nodes();
    let n = t.len();
    match kind {
        "two-opt" => {
            if n < 4 {
                return None;
            }
            let i = rng.gen_range(1..n - 2);
            let j = rng.gen_range(i + 1..=n - 2);
            Some(Move::TwoOpt { i, j })
        }
        "two-string" => {
            let x = rng.gen_range(0..=3);
            let y = rng.gen_range(0..=3);
            if n < x + y + 2 {
                return None;
            }
            let i = rng.gen_range(1..=n - 1 - x - y);
            let j = rng.gen_range(i + x..=n - 1 - y);
            Some(Move::TwoString { i, j, x, y })
        }
        "afs-relocate" => {
            let at: Vec<usize> = (1..n - 1).filter(|&k| inst.is_afs(t[k])).collect();
            let &from = at.choose(rng)?;
            let to = if rng.gen_bool(0.2) {
                None
            } else {
                let after = loop {
                    let a = rng.gen_range(0..n - 1);
                    if a != from {
                        break a;
                    }
                };
                Some((after, *inst.stations().choose(rng)?))
            };
            Some(Move::AfsRelocate { from, to })
        }
        "afs-realloc-more" => {
            let depots: Vec<usize> = (0..n).filter(|&k| inst.is_depot(t[k])).collect();
            if depots.len() < 2 {
                return None;
            }
            let k = rng.gen_range(0..depots.len() - 1);
            Some(Move::AfsReallocMore {
                start: depots[k],
                end: depots[k + 1],
                reversed: rng.gen_bool(0.5),
            })
        }
        _ => panic!("unknown move kind {kind}"),
    }
}
