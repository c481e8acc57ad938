use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::geometry::Geometry;
use super::lifting::{regular_subdivision, regular_triangulation};
use super::{Cell, Lifting, Subdivision};
use crate::config::PointConfiguration;
use crate::error::{Error, Result};
use crate::lp::{lp_feasible_strict, StrictConstraint};
use crate::scalar::Rational;

/// Outcome of a regularity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regularity {
    pub regular: bool,
    /// Present iff regular; re-lifting with it reproduces the subdivision.
    pub witness: Option<Lifting>,
}

/// Whether `conv(a) ∩ conv(b)` is a common face of both cells whose point set is
/// `a ∩ b`: decided by searching for a hyperplane through the common points
/// with the rest of `a` strictly on one side and the rest of `b` strictly on the other.
pub fn cells_meet_properly(config: &PointConfiguration, a: &Cell, b: &Cell) -> Result<bool> {
    let geom = Geometry::new(config)?;
    cells_meet_properly_in(&geom, a.indices(), b.indices())
}

pub(crate) fn cells_meet_properly_in(geom: &Geometry, a: &[usize], b: &[usize]) -> Result<bool> {
    let d = geom.dim();
    let row = |i: usize| -> Vec<Rational> {
        let mut r = geom.coords(i).to_vec();
        r.push(-Rational::one());
        r
    };
    let mut cons = Vec::new();
    for &i in a {
        if b.contains(&i) {
            cons.push(StrictConstraint::eq(row(i), Rational::zero()));
        } else {
            cons.push(StrictConstraint::lt(row(i), Rational::zero()));
        }
    }
    for &i in b {
        if !a.contains(&i) {
            cons.push(StrictConstraint::gt(row(i), Rational::zero()));
        }
    }
    Ok(lp_feasible_strict(d + 1, &cons)?.is_some())
}

/// Decides regularity by looking for heights `λ` that are affine on every cell
/// and fold strictly across every interior facet: the affine function of a cell
/// lies strictly above `λ` at the points of each facet-neighbour outside it.
/// Points used by no cell must lie strictly below every cell's function.
/// Local folding implies the global condition; the witness is re-checked anyway.
pub fn is_regular(subdivision: &Subdivision) -> Result<Regularity> {
    subdivision.validate()?;
    let config = subdivision.config();
    let geom = Geometry::new(config)?;
    let n = config.len();
    let d = geom.dim();
    let cells = subdivision.cells();
    let mut frames = Vec::with_capacity(cells.len());
    for cell in cells {
        let mut basis: Vec<usize> = Vec::with_capacity(d + 1);
        for &i in cell.indices() {
            basis.push(i);
            if geom.affine_rank(&basis) + 1 < basis.len() {
                basis.pop();
            }
        }
        let frame = geom
            .simplex(&basis)
            .ok_or_else(|| Error::Invariant(format!("cell {:?} is not full-dimensional", cell.indices())))?;
        frames.push(frame);
    }
    // `f_C(u) − λ_u` as a row over the heights.
    let gap = |c: usize, u: usize| -> Vec<Rational> {
        let mut row = vec![Rational::zero(); n];
        for (k, beta) in frames[c].barycentric(geom.coords(u)).into_iter().enumerate() {
            row[frames[c].verts[k]] += beta;
        }
        row[u] -= Rational::one();
        row
    };
    let mut rows: BTreeSet<(Vec<Rational>, bool)> = BTreeSet::new();
    for (c, cell) in cells.iter().enumerate() {
        for &u in cell.indices() {
            if !frames[c].verts.contains(&u) {
                rows.insert((gap(c, u), true));
            }
        }
    }
    for (a, ca) in cells.iter().enumerate() {
        for (b, cb) in cells.iter().enumerate() {
            if a == b {
                continue;
            }
            let shared = ca.intersection(cb);
            if shared.len() < d || geom.affine_rank(&shared) + 1 < d {
                continue;
            }
            for &v in cb.indices().iter().filter(|v| !ca.contains(**v)) {
                rows.insert((gap(a, v), false));
            }
        }
    }
    let used = subdivision.used_points();
    for u in (0..n).filter(|u| !used.contains(u)) {
        for c in 0..cells.len() {
            rows.insert((gap(c, u), false));
        }
    }
    let cons: Vec<StrictConstraint<Rational>> = rows
        .into_iter()
        .map(|(row, on)| {
            if on {
                StrictConstraint::eq(row, Rational::zero())
            } else {
                StrictConstraint::gt(row, Rational::zero())
            }
        })
        .collect();
    let Some(sol) = lp_feasible_strict(n, &cons)? else {
        return Ok(Regularity { regular: false, witness: None });
    };
    let witness = Lifting::new(sol[..n].to_vec());
    let again = regular_subdivision(config, &witness)?;
    if again.cells() != subdivision.cells() {
        return Err(Error::Invariant(format!(
            "regularity witness induces {again} instead of {subdivision}"
        )));
    }
    Ok(Regularity { regular: true, witness: Some(witness) })
}

/// A regular triangulation refining `subdivision`, obtained from `witness` by
/// the lexicographic tie-break (point `i` raised by `ε^(i+1)`).
pub fn refine_to_triangulation(
    config: &Arc<PointConfiguration>,
    subdivision: &Subdivision,
    witness: &Lifting,
) -> Result<Subdivision> {
    let induced = regular_subdivision(config, witness)?;
    if induced.cells() != subdivision.cells() {
        return Err(Error::NonRegular);
    }
    regular_triangulation(config, witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::cube_config;

    #[test]
    fn trivial_subdivision_is_regular() {
        let c = Arc::new(cube_config(3).unwrap());
        let r = is_regular(&Subdivision::trivial(c.clone())).unwrap();
        assert!(r.regular);
        let w = r.witness.unwrap();
        assert_eq!(regular_subdivision(&c, &w).unwrap(), Subdivision::trivial(c));
    }

    #[test]
    fn invalid_subdivisions_are_rejected() {
        let c = Arc::new(cube_config(2).unwrap());
        // Crossing diagonals.
        let bad = Subdivision::new(c.clone(), [Cell::new(vec![0, 1, 3]), Cell::new(vec![0, 1, 2])]);
        assert!(matches!(is_regular(&bad), Err(Error::InvalidSubdivision(_))));
        // Missing half of the square.
        let half = Subdivision::new(c.clone(), [Cell::new(vec![0, 1, 3])]);
        assert!(matches!(is_regular(&half), Err(Error::InvalidSubdivision(_))));
        // Degenerate cell.
        let flat = Subdivision::new(c, [Cell::new(vec![0, 1])]);
        assert!(matches!(is_regular(&flat), Err(Error::InvalidSubdivision(_))));
    }

    #[test]
    fn triangulation_is_a_fixed_point_of_refinement() {
        let c = Arc::new(cube_config(2).unwrap());
        let t = Subdivision::new(c.clone(), [Cell::new(vec![0, 1, 2]), Cell::new(vec![1, 2, 3])]);
        let r = is_regular(&t).unwrap();
        let refined = refine_to_triangulation(&c, &t, r.witness.as_ref().unwrap()).unwrap();
        assert_eq!(refined, t);
        assert!(matches!(
            refine_to_triangulation(&c, &t, &Lifting::zero(4)),
            Err(Error::NonRegular)
        ));
    }

    #[test]
    fn twisted_triangulations_are_not_regular() {
        use crate::config::PointConfiguration;
        use crate::subdivision::{enumerate_triangulations, EnumerationOptions};
        let pts = vec![vec![0, 0], vec![4, 0], vec![0, 4], vec![1, 1], vec![2, 1], vec![1, 2]];
        let c = Arc::new(PointConfiguration::new(pts, None).unwrap());
        let all = enumerate_triangulations(&c, &EnumerationOptions::default()).unwrap();
        let regular = enumerate_triangulations(&c, &EnumerationOptions { regular_only: true, ..Default::default() }).unwrap();
        assert_eq!((all.triangulations, regular.regular), (18, Some(16)));
        let twisted = Subdivision::new(
            c.clone(),
            [[0, 1, 3], [1, 2, 4], [0, 2, 5], [0, 3, 5], [1, 3, 4], [2, 4, 5], [3, 4, 5]].map(|t| Cell::new(t.to_vec())),
        );
        let r = is_regular(&twisted).unwrap();
        assert!(!r.regular && r.witness.is_none());
    }
}
