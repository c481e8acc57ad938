use std::sync::Arc;

use num_traits::{One, Zero};

use super::Mechanism;
use crate::config::cube_config;
use crate::error::{Error, Result};
use crate::scalar::{int, Rational};
use crate::subdivision::{regular_subdivision, Cell, Lifting, Subdivision};

/// Payments `p_a = |a|²`; the induced cells are the slices `k−1 ≤ Σx ≤ k`.
pub fn construct_cardinality_robust(items: usize) -> Result<Mechanism> {
    let payments = (0..1usize << items).map(|a| int((a.count_ones() as i64).pow(2))).collect();
    Mechanism::new(items, payments)
}

/// The slices `P_k = { a : |a| ∈ {k−1, k} }` for `k = 1..=m`.
pub fn cardinality_slices(items: usize) -> Vec<Cell> {
    (1..=items as u32)
        .map(|k| Cell::new((0..1usize << items).filter(|a| (k - 1..=k).contains(&a.count_ones())).collect()))
        .collect()
}

/// For each slice, the affine function `w·(x, 1)` that equals `λ(x) = −(Σx)²` on
/// the slice and is strictly greater at every other cube vertex:
/// `h_k(x) = −(2k−1)·Σx + k(k−1)`.
pub fn cardinality_certificate(items: usize) -> Vec<(Cell, Vec<Rational>)> {
    cardinality_slices(items)
        .into_iter()
        .zip(1i64..)
        .map(|(cell, k)| {
            let mut w = vec![int(-(2 * k - 1)); items];
            w.push(int(k * (k - 1)));
            (cell, w)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct HammingConstruction {
    pub lifting: Lifting,
    pub mechanism: Mechanism,
    pub subdivision: Subdivision,
}

fn parity_heights(items: usize) -> Vec<Rational> {
    (0..1usize << items)
        .map(|a| if a.count_ones() % 2 == 0 { Rational::zero() } else { -Rational::one() })
        .collect()
}

/// Heights inducing a subdivision of `[0,1]^m` without antipodal pairs in a cell.
/// Odd `m`: 0 on even vertices, −1 on odd ones. Even `m`: the `m−1` heights
/// repeated along the last item, giving prisms over the smaller cells.
fn hamming_heights(items: usize) -> Vec<Rational> {
    if items % 2 == 1 {
        parity_heights(items)
    } else {
        hamming_heights(items - 1).into_iter().flat_map(|h| [h.clone(), h]).collect()
    }
}

pub fn construct_hamming_robust(items: usize) -> Result<HammingConstruction> {
    if !(3..=10).contains(&items) {
        return Err(Error::OutOfRange(format!("Hamming construction needs 3 ≤ m ≤ 10, got {items}")));
    }
    let lifting = Lifting::new(hamming_heights(items));
    let config = Arc::new(cube_config(items)?);
    let subdivision = regular_subdivision(&config, &lifting)?;
    let mechanism = Mechanism::new(items, lifting.heights.iter().map(|h| -h).collect())?;
    Ok(HammingConstruction { lifting, mechanism, subdivision })
}
