use num_traits::{One, Signed, Zero};

use crate::config::PointConfiguration;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Rational;

/// A configuration expressed in an affine coordinate system of its own hull:
/// a subset of the ambient coordinates on which the projection is injective.
#[derive(Debug, Clone)]
pub(crate) struct Geometry {
    dim: usize,
    coords: Vec<Vec<Rational>>,
}

/// A full-dimensional simplex with the inverse of its homogeneous vertex matrix,
/// so barycentric coordinates of any point are one matrix-vector product away.
#[derive(Debug, Clone)]
pub(crate) struct SimplexFrame {
    pub verts: Vec<usize>,
    inv: Vec<Vec<Rational>>,
}

impl SimplexFrame {
    pub fn barycentric(&self, x: &[Rational]) -> Vec<Rational> {
        self.inv.iter().map(|row| Self::row_dot(row, x)).collect()
    }

    /// Barycentric coordinate of `x` with respect to vertex position `k`.
    pub fn coordinate(&self, k: usize, x: &[Rational]) -> Rational {
        Self::row_dot(&self.inv[k], x)
    }

    fn row_dot(row: &[Rational], x: &[Rational]) -> Rational {
        let d = x.len();
        let mut acc = row[d].clone();
        for (a, b) in row[..d].iter().zip(x) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }

    /// Coefficients `w` with `h(x) = w · (x, 1)` for the affine function
    /// interpolating `values` on the vertices.
    pub fn interpolant(&self, values: &[Rational]) -> Vec<Rational> {
        let d1 = self.verts.len();
        (0..d1)
            .map(|j| {
                self.verts
                    .iter()
                    .enumerate()
                    .fold(Rational::zero(), |acc, (k, &v)| acc + &values[v] * &self.inv[k][j])
            })
            .collect()
    }
}

pub(crate) fn eval_affine(w: &[Rational], x: &[Rational]) -> Rational {
    let d = x.len();
    let mut acc = w[d].clone();
    for (a, b) in w[..d].iter().zip(x) {
        if !a.is_zero() && !b.is_zero() {
            acc += a * b;
        }
    }
    acc
}

impl Geometry {
    pub fn new(config: &PointConfiguration) -> Result<Self> {
        if config.len() < 2 {
            return Err(Error::DegenerateConfiguration("fewer than two points".into()));
        }
        let pts: Vec<Vec<Rational>> = config
            .points()
            .iter()
            .map(|p| p.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        let g = Self::from_points(&pts);
        if g.dim == 0 {
            return Err(Error::DegenerateConfiguration("all points coincide".into()));
        }
        Ok(g)
    }

    /// Reduced coordinates for an arbitrary point list (possibly lower-dimensional).
    pub fn from_points(pts: &[Vec<Rational>]) -> Self {
        let Some(base) = pts.first() else {
            return Geometry { dim: 0, coords: Vec::new() };
        };
        let mut diffs: Vec<Vec<Rational>> = pts
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let pivots = linalg::rref(&mut diffs);
        let coords = pts.iter().map(|p| pivots.iter().map(|&c| p[c].clone()).collect()).collect();
        Geometry { dim: pivots.len(), coords }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self, i: usize) -> &[Rational] {
        &self.coords[i]
    }

    pub fn affine_rank(&self, indices: &[usize]) -> usize {
        let Some(&first) = indices.first() else {
            return 0;
        };
        let rows: Vec<Vec<Rational>> = indices
            .iter()
            .map(|&i| self.coords[i].iter().zip(&self.coords[first]).map(|(a, b)| a - b).collect())
            .collect();
        linalg::rank(&rows)
    }

    fn homogeneous(&self, verts: &[usize]) -> Vec<Vec<Rational>> {
        let d = self.dim;
        let mut m = vec![vec![Rational::zero(); verts.len()]; d + 1];
        for (k, &v) in verts.iter().enumerate() {
            for (r, x) in self.coords[v].iter().enumerate() {
                m[r][k] = x.clone();
            }
            m[d][k] = Rational::one();
        }
        m
    }

    /// `None` if the `d + 1` points are affinely dependent.
    pub fn simplex(&self, verts: &[usize]) -> Option<SimplexFrame> {
        if verts.len() != self.dim + 1 {
            return None;
        }
        let inv = linalg::inverse(&self.homogeneous(verts))?;
        Some(SimplexFrame { verts: verts.to_vec(), inv })
    }

    /// `|det|` of the homogeneous vertex matrix; zero for degenerate simplices.
    pub fn simplex_volume(&self, verts: &[usize]) -> Rational {
        linalg::determinant(&self.homogeneous(verts)).abs()
    }

    /// Normalized volume of `conv(indices)`; zero when lower-dimensional.
    pub fn volume(&self, indices: &[usize]) -> Result<Rational> {
        if self.affine_rank(indices) < self.dim {
            return Ok(Rational::zero());
        }
        if indices.len() == self.dim + 1 {
            return Ok(self.simplex_volume(indices));
        }
        let zero = vec![Rational::zero(); self.len()];
        let simplices = super::lifting::triangulate_indices(self, indices, &zero)?;
        Ok(simplices.iter().map(|s| self.simplex_volume(s)).sum())
    }
}
