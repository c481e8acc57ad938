//! Regular subdivisions, regularity, refinement, enumeration and canonical forms.

mod canonical;
mod enumerate;
mod geometry;
mod lifting;
mod regularity;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::config::PointConfiguration;
use crate::error::{Error, Result};
use crate::scalar::Rational;

pub use canonical::canonicalize;
pub use enumerate::{enumerate_triangulations, Enumeration, EnumerationOptions};
#[cfg(test)]
pub(crate) use geometry::eval_affine;
pub(crate) use geometry::Geometry;
pub use lifting::{regular_subdivision, regular_triangulation};
pub use regularity::{cells_meet_properly, is_regular, refine_to_triangulation, Regularity};

/// Sorted, nonempty set of configuration indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell(Vec<usize>);

impl Cell {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Cell(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &Cell) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    pub fn intersection(&self, other: &Cell) -> Vec<usize> {
        self.0.iter().copied().filter(|&i| other.contains(i)).collect()
    }

    pub fn map(&self, f: impl Fn(usize) -> usize) -> Cell {
        Cell::new(self.0.iter().map(|&i| f(i)).collect())
    }
}

impl From<Vec<usize>> for Cell {
    fn from(v: Vec<usize>) -> Self {
        Cell::new(v)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// One height per configuration point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lifting {
    pub heights: Vec<Rational>,
}

impl Lifting {
    pub fn new(heights: Vec<Rational>) -> Self {
        Lifting { heights }
    }

    pub fn zero(n: usize) -> Self {
        Lifting { heights: vec![Rational::from_integer(0.into()); n] }
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    pub(crate) fn check(&self, config: &PointConfiguration) -> Result<()> {
        if self.heights.len() != config.len() {
            return Err(Error::DimensionMismatch { expected: config.len(), got: self.heights.len() });
        }
        Ok(())
    }
}

/// Maximal cells over a configuration. Cells are kept sorted.
///
/// A cell lists every configuration point lying on the corresponding face,
/// so points that are not vertices of any cell (strictly below the upper hull)
/// appear nowhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subdivision {
    config: Arc<PointConfiguration>,
    cells: Vec<Cell>,
}

impl Subdivision {
    pub fn new(config: Arc<PointConfiguration>, cells: impl IntoIterator<Item = Cell>) -> Self {
        let set: BTreeSet<Cell> = cells.into_iter().collect();
        Subdivision { config, cells: set.into_iter().collect() }
    }

    pub fn config(&self) -> &Arc<PointConfiguration> {
        &self.config
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// The single-cell subdivision (all points).
    pub fn trivial(config: Arc<PointConfiguration>) -> Self {
        let all = Cell::new((0..config.len()).collect());
        Subdivision::new(config, [all])
    }

    /// Whether every cell has exactly `d + 1` points.
    pub fn is_triangulation(&self) -> Result<bool> {
        let d = Geometry::new(&self.config)?.dim();
        Ok(self.cells.iter().all(|c| c.len() == d + 1))
    }

    /// Indices appearing in some cell.
    pub fn used_points(&self) -> BTreeSet<usize> {
        self.cells.iter().flat_map(|c| c.indices().iter().copied()).collect()
    }

    /// Normalized volume (`d!` times Euclidean volume in an integral frame) of each cell.
    pub fn cell_volumes(&self) -> Result<Vec<Rational>> {
        let geom = Geometry::new(&self.config)?;
        self.cells.iter().map(|c| geom.volume(c.indices())).collect()
    }

    /// Checks the structural invariants: full-dimensional cells, no nested
    /// cells, pairwise proper intersection, and total volume equal to the hull's.
    pub fn validate(&self) -> Result<()> {
        let geom = Geometry::new(&self.config)?;
        let n = self.config.len();
        if self.cells.is_empty() {
            return Err(Error::InvalidSubdivision("no cells".into()));
        }
        for c in &self.cells {
            if c.is_empty() || c.indices().iter().any(|&i| i >= n) {
                return Err(Error::InvalidSubdivision(format!("cell {c} has invalid indices")));
            }
            if geom.affine_rank(c.indices()) != geom.dim() {
                return Err(Error::InvalidSubdivision(format!("cell {c} is not full-dimensional")));
            }
        }
        for (i, a) in self.cells.iter().enumerate() {
            for b in &self.cells[i + 1..] {
                if a.is_subset_of(b) || b.is_subset_of(a) {
                    return Err(Error::InvalidSubdivision(format!("cell {a} and cell {b} are nested")));
                }
                if !regularity::cells_meet_properly_in(&geom, a.indices(), b.indices())? {
                    return Err(Error::InvalidSubdivision(format!(
                        "cells {a} and {b} do not intersect in a common face"
                    )));
                }
            }
        }
        let total = self
            .cells
            .iter()
            .map(|c| geom.volume(c.indices()))
            .sum::<Result<Rational>>()?;
        let hull = geom.volume(&(0..n).collect::<Vec<_>>())?;
        if total != hull {
            return Err(Error::InvalidSubdivision(format!(
                "cell volumes sum to {total}, hull volume is {hull}"
            )));
        }
        Ok(())
    }

    /// Cells as lists of point labels.
    pub fn labelled_cells(&self) -> Vec<Vec<String>> {
        self.cells
            .iter()
            .map(|c| c.indices().iter().map(|&i| self.config.label(i).to_string()).collect())
            .collect()
    }
}

impl fmt::Display for Subdivision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.cells.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
