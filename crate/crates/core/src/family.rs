//! Named quivers and a seeded random family of acyclic valued quivers.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cartan::ValuedQuiver;
use crate::matrix::IntMatrix;

pub const DEFAULT_SEED: u64 = 20_250_101;

/// `1 -> 2`.
pub fn a2() -> ValuedQuiver {
    ValuedQuiver::from_arrows(2, &[(0, 1, 1)]).expect("valid quiver")
}

/// `1 -> 2 -> 3`.
pub fn a3() -> ValuedQuiver {
    ValuedQuiver::from_arrows(3, &[(0, 1, 1), (1, 2, 1)]).expect("valid quiver")
}

/// Two arrows `1 => 2`, so `b_12 = 2`.
pub fn kronecker() -> ValuedQuiver {
    ValuedQuiver::from_arrows(2, &[(0, 1, 2)]).expect("valid quiver")
}

/// `1 -> 2` with `D = diag(1, 2)`.
pub fn b2() -> ValuedQuiver {
    ValuedQuiver::new(vec![1, 2], IntMatrix::from_rows(&[[0, 0], [1, 0]])).expect("valid quiver")
}

/// The oriented 3-cycle `1 -> 2 -> 3 -> 1`.
pub fn cyclic3() -> ValuedQuiver {
    ValuedQuiver::from_arrows(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]).expect("valid quiver")
}

/// Shape limits for [`random_acyclic_quiver`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyShape {
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub max_valuation: i64,
    pub max_entry: i64,
}

impl Default for FamilyShape {
    fn default() -> Self {
        Self {
            min_vertices: 2,
            max_vertices: 3,
            max_valuation: 2,
            max_entry: 2,
        }
    }
}

/// An acyclic valued quiver: arrows only go forward along a random vertex
/// order. Draws that fail symmetrizability are redrawn.
pub fn random_acyclic_quiver<R: Rng>(rng: &mut R, shape: FamilyShape) -> ValuedQuiver {
    loop {
        let n = rng.random_range(shape.min_vertices..=shape.max_vertices);
        let valuations: Vec<i64> = (0..n).map(|_| rng.random_range(1..=shape.max_valuation)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut rows = vec![vec![0i64; n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let (s, t) = (order[a], order[b]);
                rows[t][s] = rng.random_range(0..=shape.max_entry);
            }
        }
        if let Ok(q) = ValuedQuiver::new(valuations, IntMatrix::from_rows(&rows)) {
            return q;
        }
    }
}

/// `count` quivers drawn from a generator seeded with `seed`.
pub fn random_family(seed: u64, count: usize, shape: FamilyShape) -> Vec<ValuedQuiver> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_acyclic_quiver(&mut rng, shape)).collect()
}
