use std::sync::Arc;

use num_traits::Zero;

use super::IndifferenceComplex;
use crate::config::{simplex_product_config, ConfigKind, PointConfiguration};
use crate::error::{Error, Result};
use crate::scalar::{int, Rational};
use crate::subdivision::{regular_subdivision, Lifting, Subdivision};
use crate::tropical::Polyhedron;

/// Chooses an allocation `A` maximizing `c_A + Σ_j w_j θ_j·A_j`.
///
/// Allocations and types are `m×n` matrices (rows are items, columns players)
/// flattened row-major; biases follow the order of
/// [`simplex_product_config`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMaximizer {
    players: usize,
    items: usize,
    weights: Vec<Rational>,
    biases: Vec<Rational>,
}

impl AffineMaximizer {
    pub fn new(players: usize, items: usize, weights: Vec<Rational>, biases: Vec<Rational>) -> Result<Self> {
        let config = simplex_product_config(players, items)?;
        if weights.len() != players {
            return Err(Error::DimensionMismatch { expected: players, got: weights.len() });
        }
        if let Some(i) = weights.iter().position(Zero::is_zero) {
            return Err(Error::ZeroWeight(i));
        }
        if biases.len() != config.len() {
            return Err(Error::DimensionMismatch { expected: config.len(), got: biases.len() });
        }
        Ok(AffineMaximizer { players, items, weights, biases })
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn items(&self) -> usize {
        self.items
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn biases(&self) -> &[Rational] {
        &self.biases
    }

    pub fn config(&self) -> Arc<PointConfiguration> {
        Arc::new(simplex_product_config(self.players, self.items).expect("validated"))
    }

    fn weight_at(&self, coord: usize) -> &Rational {
        &self.weights[coord % self.players]
    }

    fn check_type(&self, theta: &[Rational]) -> Result<()> {
        let d = self.players * self.items;
        if theta.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: theta.len() });
        }
        Ok(())
    }

    /// Maximum value and the indices of all maximizing allocations.
    pub fn evaluate(&self, theta: &[Rational]) -> Result<(Rational, Vec<usize>)> {
        self.check_type(theta)?;
        let config = self.config();
        let mut best: Option<Rational> = None;
        let mut argmax = Vec::new();
        for (a, point) in config.points().iter().enumerate() {
            let mut v = self.biases[a].clone();
            for (k, &bit) in point.iter().enumerate() {
                if bit != 0 {
                    v += self.weight_at(k) * &theta[k];
                }
            }
            match &best {
                Some(b) if v < *b => {}
                Some(b) if v == *b => argmax.push(a),
                _ => {
                    best = Some(v);
                    argmax = vec![a];
                }
            }
        }
        Ok((best.expect("nonempty configuration"), argmax))
    }

    /// Closed difference set of every allocation, in type space.
    pub fn regions(&self) -> Vec<Polyhedron> {
        let config = self.config();
        let pts = config.points();
        let d = self.players * self.items;
        (0..pts.len())
            .map(|a| {
                let mut normals = Vec::new();
                let mut offsets = Vec::new();
                for b in 0..pts.len() {
                    if b == a {
                        continue;
                    }
                    normals.push(
                        (0..d).map(|k| self.weight_at(k) * int(pts[a][k] - pts[b][k])).collect::<Vec<_>>(),
                    );
                    offsets.push(&self.biases[b] - &self.biases[a]);
                }
                Polyhedron { dimension: d, normals, offsets }
            })
            .collect()
    }

    pub fn subdivision(&self) -> Result<Subdivision> {
        regular_subdivision(&self.config(), &Lifting::new(self.biases.clone()))
    }
}

/// Facets are the maximal cells of the subdivision of `(Δ_{n−1})^m` lifted by the biases.
/// The weights rescale the Newton polytope linearly and do not change it.
pub fn affine_indifference_complex(am: &AffineMaximizer) -> Result<IndifferenceComplex> {
    Ok(IndifferenceComplex::from_subdivision(&am.subdivision()?))
}

fn product_shape(config: &PointConfiguration) -> Result<(usize, usize)> {
    match config.kind() {
        ConfigKind::SimplexProduct { players, items } => Ok((*players, *items)),
        _ => Err(Error::OutOfRange(format!("{config} is not a product of simplices"))),
    }
}

/// Largest difference in the number of items some player receives, over pairs
/// of allocations in a common cell.
pub fn multiplayer_cardinality_sensitivity(sub: &Subdivision) -> Result<u64> {
    let config = sub.config();
    let (n, _) = product_shape(config)?;
    let counts = |a: usize| -> Vec<i64> {
        let p = config.point(a);
        (0..n).map(|j| p.iter().skip(j).step_by(n).sum()).collect()
    };
    let mut best = 0;
    for cell in sub.cells() {
        let cs: Vec<Vec<i64>> = cell.indices().iter().map(|&a| counts(a)).collect();
        for (i, x) in cs.iter().enumerate() {
            for y in &cs[i + 1..] {
                for (u, v) in x.iter().zip(y) {
                    best = best.max((u - v).unsigned_abs());
                }
            }
        }
    }
    Ok(best)
}

/// Unit weights with `c_A = −(items to player 1)²` for two players and
/// `c_A = −(max_j items to player j)²` otherwise.
pub fn construct_multiplayer_robust(players: usize, items: usize) -> Result<AffineMaximizer> {
    let config = simplex_product_config(players, items)?;
    let biases = config
        .points()
        .iter()
        .map(|p| {
            let counts: Vec<i64> = (0..players).map(|j| p.iter().skip(j).step_by(players).sum()).collect();
            let c = if players == 2 { counts[0] } else { *counts.iter().max().expect("players ≥ 2") };
            -int(c * c)
        })
        .collect();
    AffineMaximizer::new(players, items, vec![int(1); players], biases)
}

/// Index in `simplex_product_config(2, m)` of the allocation giving player 1
/// exactly the bundle with cube index `bundle`.
pub fn cube_to_product_index(items: usize, bundle: usize) -> usize {
    (1usize << items) - 1 - bundle
}

/// Type space modulo the common lineality line `W·ℝ`, represented by setting
/// the last coordinate to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinealityReduction {
    /// `W` flattened row-major: `1/w_j` in every entry of column `j`.
    pub direction: Vec<Rational>,
    /// Difference sets restricted to the slice where the last coordinate is 0,
    /// written in the remaining coordinates.
    pub regions: Vec<Polyhedron>,
}

impl LinealityReduction {
    pub fn project(&self, theta: &[Rational]) -> Vec<Rational> {
        let last = self.direction.len() - 1;
        let t = &theta[last] / &self.direction[last];
        theta[..last].iter().zip(&self.direction).map(|(x, w)| x - &t * w).collect()
    }

    pub fn lift(&self, y: &[Rational]) -> Vec<Rational> {
        let mut v = y.to_vec();
        v.push(Rational::zero());
        v
    }
}

pub fn lineality_reduce(am: &AffineMaximizer) -> Result<LinealityReduction> {
    let d = am.players * am.items;
    let direction: Vec<Rational> = (0..d).map(|k| am.weight_at(k).recip()).collect();
    let regions = am
        .regions()
        .into_iter()
        .map(|r| Polyhedron {
            dimension: d - 1,
            normals: r.normals.into_iter().map(|mut n| {
                n.pop();
                n
            }).collect(),
            offsets: r.offsets,
        })
        .collect();
    Ok(LinealityReduction { direction, regions })
}
