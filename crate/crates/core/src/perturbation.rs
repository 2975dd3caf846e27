//! Generalized double-bridge perturbation.

use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::instance::Instance;
use crate::repair::{relaxed_zga, RepairError};
use crate::tour::Tour;

/// A concrete perturbation draw: segment start positions, the order in which
/// segments are reconnected, and which of them are reversed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BridgeDraw {
    /// Sorted, distinct positions in `1..=n-2`.
    pub cuts: Vec<usize>,
    /// Permutation of `0..=cuts.len()`.
    pub order: Vec<usize>,
    /// One flag per segment, indexed like `order`'s values.
    pub reversed: Vec<bool>,
}

impl BridgeDraw {
    /// Draws `p` cuts (capped at the interior length), a uniform segment
    /// order and an independent fair coin per segment.
    pub fn random<R: Rng + ?Sized>(tour_len: usize, p: usize, rng: &mut R) -> Self {
        let interior = tour_len.saturating_sub(2);
        let p = p.min(interior);
        let mut cuts: Vec<usize> = index::sample(rng, interior, p)
            .into_iter()
            .map(|k| k + 1)
            .collect();
        cuts.sort_unstable();
        let mut order: Vec<usize> = (0..=p).collect();
        order.shuffle(rng);
        let reversed = (0..=p).map(|_| rng.gen_bool(0.5)).collect();
        BridgeDraw {
            cuts,
            order,
            reversed,
        }
    }

    /// Reconnects the segments of `tour` per this draw, without repair.
    /// Consecutive duplicate visits are merged.
    pub fn reconnect(&self, tour: &Tour) -> Tour {
        let t = tour.nodes();
        let n = t.len();
        if n < 3 {
            return tour.clone();
        }
        let mut bounds = Vec::with_capacity(self.cuts.len() + 2);
        bounds.push(1);
        bounds.extend_from_slice(&self.cuts);
        bounds.push(n - 1);
        let mut nodes = Vec::with_capacity(n);
        nodes.push(t[0]);
        for &s in &self.order {
            let seg = &t[bounds[s]..bounds[s + 1]];
            if self.reversed[s] {
                nodes.extend(seg.iter().rev());
            } else {
                nodes.extend_from_slice(seg);
            }
        }
        nodes.push(t[n - 1]);
        let mut out = Tour::new(nodes);
        out.dedup_consecutive();
        out
    }
}

/// Cuts the tour interior at `p` random positions, shuffles and randomly
/// reverses the segments, and repairs the result.
pub fn double_bridge<R: Rng + ?Sized>(
    inst: &Instance,
    tour: &Tour,
    p: usize,
    rng: &mut R,
) -> Result<Tour, RepairError> {
    let draw = BridgeDraw::random(tour.len(), p, rng);
    relaxed_zga(inst, &draw.reconnect(tour)).map(|o| o.tour)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::NodeSpec;
    use crate::validate::is_valid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_draw_keeps_tour() {
        let t = Tour::from_indices(&[0, 1, 2, 3, 4, 0]);
        let draw = BridgeDraw {
            cuts: vec![2],
            order: vec![0, 1],
            reversed: vec![false, false],
        };
        assert_eq!(draw.reconnect(&t), t);
    }

    #[test]
    fn classic_double_bridge() {
        let t = Tour::from_indices(&[0, 1, 2, 3, 4, 5, 6, 0]);
        let draw = BridgeDraw {
            cuts: vec![3, 5],
            order: vec![2, 0, 1],
            reversed: vec![false, true, false],
        };
        assert_eq!(draw.reconnect(&t).indices(), vec![0, 5, 6, 1, 2, 4, 3, 0]);
    }

    #[test]
    fn random_draw_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let d = BridgeDraw::random(10, 3, &mut rng);
            assert_eq!(d.cuts.len(), 3);
            assert!(d.cuts.windows(2).all(|w| w[0] < w[1]));
            assert!(d.cuts.iter().all(|&c| (1..=8).contains(&c)));
            let mut o = d.order.clone();
            o.sort();
            assert_eq!(o, vec![0, 1, 2, 3]);
        }
        assert_eq!(BridgeDraw::random(4, 9, &mut rng).cuts.len(), 2);
    }

    #[test]
    fn output_is_valid_and_covers_customers() {
        let mut nodes = vec![NodeSpec::depot(0.0, 0.0)];
        for k in 0..8 {
            nodes.push(NodeSpec::customer(
                (k * 13 % 17) as f64 * 3.0,
                (k * 7 % 11) as f64 * 4.0,
                2,
            ));
        }
        nodes.push(NodeSpec::afs(20.0, 20.0));
        let inst = Instance::new("p", nodes, 6, 120.0, 1.0).unwrap();
        let start = relaxed_zga(&inst, &Tour::from_indices(&[0, 1, 2, 3, 4, 5, 6, 7, 8, 0]))
            .unwrap()
            .tour;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let out = double_bridge(&inst, &start, 2, &mut rng).unwrap();
            assert!(is_valid(&inst, &out), "{out}");
            let mut seq = out.customer_sequence(&inst);
            seq.sort();
            assert_eq!(seq, inst.customers().to_vec());
        }
    }

    #[test]
    fn reproducible_with_seed() {
        let t = Tour::from_indices(&[0, 1, 2, 3, 4, 5, 6, 7, 0]);
        let a = BridgeDraw::random(t.len(), 3, &mut ChaCha8Rng::seed_from_u64(1));
        let b = BridgeDraw::random(t.len(), 3, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(a, b);
    }
}
