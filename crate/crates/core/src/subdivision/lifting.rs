//! Upper hull of a lifted configuration.
//!
//! The regular triangulation for heights `λ_i + ε^(i+1)` (ε infinitesimal,
//! lower indices perturbed more) is traced by gift wrapping across ridges; its
//! simplices are then merged into the cells of the unperturbed lifting by
//! collecting, for each simplex, every point on its unperturbed hyperplane.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::geometry::{eval_affine, Geometry, SimplexFrame};
use super::{Cell, Lifting, Subdivision};
use crate::config::PointConfiguration;
use crate::error::{Error, Result};
use crate::lp::{lp_solve, Constraint, LinearProgram, LpOutcome, Sense};
use crate::scalar::Rational;

/// Position of lifted point `q` relative to the lifted hyperplane through `frame`,
/// under the lexicographic perturbation. `Greater` means strictly above.
pub(crate) fn side(geom: &Geometry, heights: &[Rational], q: usize, frame: &SimplexFrame) -> Ordering {
    if frame.verts.contains(&q) {
        return Ordering::Equal;
    }
    let beta = frame.barycentric(geom.coords(q));
    let mut main = heights[q].clone();
    for (b, &v) in beta.iter().zip(&frame.verts) {
        if !b.is_zero() {
            main -= b * &heights[v];
        }
    }
    if !main.is_zero() {
        return if main.is_positive() { Ordering::Greater } else { Ordering::Less };
    }
    // Coefficient +1 on ε^(q+1), −β_k on ε^(v_k+1); the smallest index dominates.
    let mut lead: (usize, bool) = (q, true);
    for (b, &v) in beta.iter().zip(&frame.verts) {
        if !b.is_zero() && v < lead.0 {
            lead = (v, b.is_negative());
        }
    }
    if lead.1 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// First simplex of the pulling triangulation of `pts` (global index, coordinates),
/// pulling lower indices first.
fn pulling_simplex(pts: &[(usize, Vec<Rational>)]) -> Result<Vec<usize>> {
    let coords: Vec<Vec<Rational>> = pts.iter().map(|(_, c)| c.clone()).collect();
    let local = Geometry::from_points(&coords);
    let k = local.dim();
    let apex = (0..pts.len()).min_by_key(|&i| pts[i].0).expect("nonempty point set");
    if k == 0 {
        return Ok(vec![pts[apex].0]);
    }
    // A facet of conv(pts) avoiding the apex: minimize the total slack of
    // a·y + b ≥ 0 subject to a·y_apex + b = 1.
    let row = |i: usize| -> Vec<Rational> {
        let mut r = local.coords(i).to_vec();
        r.push(Rational::one());
        r
    };
    let mut objective = vec![Rational::zero(); k + 1];
    for i in 0..pts.len() {
        for (o, x) in objective.iter_mut().zip(row(i)) {
            *o += x;
        }
    }
    let mut lp = LinearProgram::new(k + 1, objective, Sense::Minimize);
    for i in 0..pts.len() {
        lp.push(Constraint::ge(row(i), Rational::zero()));
    }
    lp.push(Constraint::eq(row(apex), Rational::one()));
    let LpOutcome::Optimal { point: w, .. } = lp_solve(&lp)? else {
        return Err(Error::Invariant("facet program has no optimum".into()));
    };
    let facet: Vec<(usize, Vec<Rational>)> = (0..pts.len())
        .filter(|&i| eval_affine(&w, local.coords(i)).is_zero())
        .map(|i| pts[i].clone())
        .collect();
    let facet_idx: Vec<usize> = (0..facet.len()).collect();
    let facet_geom = Geometry::from_points(&facet.iter().map(|(_, c)| c.clone()).collect::<Vec<_>>());
    if facet_geom.affine_rank(&facet_idx) + 1 != k {
        return Err(Error::Invariant("facet program returned a non-facet face".into()));
    }
    let mut s = vec![pts[apex].0];
    s.extend(pulling_simplex(&facet)?);
    Ok(s)
}

/// An upper facet of the perturbed lifting restricted to `indices`.
fn start_simplex(geom: &Geometry, indices: &[usize], heights: &[Rational]) -> Result<SimplexFrame> {
    let d = geom.dim();
    let row = |i: usize| -> Vec<Rational> {
        let mut r = geom.coords(i).to_vec();
        r.push(Rational::one());
        r
    };
    let mut objective = vec![Rational::zero(); d + 1];
    for &i in indices {
        for (o, x) in objective.iter_mut().zip(row(i)) {
            *o += x;
        }
    }
    let mut lp = LinearProgram::new(d + 1, objective, Sense::Minimize);
    for &i in indices {
        lp.push(Constraint::ge(row(i), heights[i].clone()));
    }
    let LpOutcome::Optimal { point: w, .. } = lp_solve(&lp)? else {
        return Err(Error::Invariant("upper hull program has no optimum".into()));
    };
    let face: Vec<(usize, Vec<Rational>)> = indices
        .iter()
        .filter(|&&i| eval_affine(&w, geom.coords(i)) == heights[i])
        .map(|&i| (i, geom.coords(i).to_vec()))
        .collect();
    let mut verts = pulling_simplex(&face)?;
    verts.sort_unstable();
    let frame = geom
        .simplex(&verts)
        .ok_or_else(|| Error::Invariant("start simplex is degenerate".into()))?;
    if indices
        .iter()
        .any(|&q| !verts.contains(&q) && side(geom, heights, q, &frame) != Ordering::Less)
    {
        return Err(Error::Invariant("start simplex is not an upper facet".into()));
    }
    Ok(frame)
}

/// Regular triangulation of `conv(indices)` for the perturbed `heights`
/// (indexed globally). Returns sorted vertex lists.
pub(crate) fn triangulate_indices(
    geom: &Geometry,
    indices: &[usize],
    heights: &[Rational],
) -> Result<Vec<Vec<usize>>> {
    Ok(wrap(geom, indices, heights)?.into_iter().map(|f| f.verts).collect())
}

fn wrap(geom: &Geometry, indices: &[usize], heights: &[Rational]) -> Result<Vec<SimplexFrame>> {
    let d = geom.dim();
    if geom.affine_rank(indices) != d {
        return Err(Error::DegenerateConfiguration(format!(
            "point set does not span dimension {d}"
        )));
    }
    let start = start_simplex(geom, indices, heights)?;
    let mut seen: HashSet<Vec<usize>> = HashSet::from([start.verts.clone()]);
    let mut done_ridges: HashSet<Vec<usize>> = HashSet::new();
    let mut queue = VecDeque::from([start]);
    let mut out = Vec::new();
    while let Some(frame) = queue.pop_front() {
        for k in 0..=d {
            let ridge: Vec<usize> =
                frame.verts.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &v)| v).collect();
            if done_ridges.contains(&ridge) {
                continue;
            }
            let beyond: Vec<usize> = indices
                .iter()
                .copied()
                .filter(|&q| frame.coordinate(k, geom.coords(q)).is_negative())
                .collect();
            let Some((&first, rest)) = beyond.split_first() else {
                continue;
            };
            let build = |apex: usize| -> Result<SimplexFrame> {
                let mut v = ridge.clone();
                v.push(apex);
                v.sort_unstable();
                geom.simplex(&v).ok_or_else(|| Error::Invariant("wrapped simplex is degenerate".into()))
            };
            let mut next = build(first)?;
            for &q in rest {
                if side(geom, heights, q, &next) == Ordering::Greater {
                    next = build(q)?;
                }
            }
            done_ridges.insert(ridge);
            if seen.insert(next.verts.clone()) {
                queue.push_back(next);
            }
        }
        out.push(frame);
    }
    out.sort_by(|a, b| a.verts.cmp(&b.verts));
    Ok(out)
}

/// Cells of the unperturbed lifting, given the simplices of a refining triangulation.
pub(crate) fn coarse_cells(
    geom: &Geometry,
    indices: &[usize],
    heights: &[Rational],
    simplices: &[SimplexFrame],
) -> Vec<Vec<usize>> {
    let mut cells: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut covered: Vec<Vec<usize>> = Vec::new();
    for s in simplices {
        if covered.iter().any(|c| s.verts.iter().all(|v| c.binary_search(v).is_ok())) {
            continue;
        }
        let w = s.interpolant(heights);
        let mut cell: Vec<usize> = indices
            .iter()
            .copied()
            .filter(|&i| eval_affine(&w, geom.coords(i)) == heights[i])
            .collect();
        cell.sort_unstable();
        covered.push(cell.clone());
        cells.insert(cell);
    }
    cells.into_iter().collect()
}

/// The regular subdivision induced by `lifting` (upper faces, max convention).
pub fn regular_subdivision(config: &Arc<PointConfiguration>, lifting: &Lifting) -> Result<Subdivision> {
    lifting.check(config)?;
    let geom = Geometry::new(config)?;
    let indices: Vec<usize> = (0..config.len()).collect();
    let simplices = wrap(&geom, &indices, &lifting.heights)?;
    let cells = coarse_cells(&geom, &indices, &lifting.heights, &simplices);
    Ok(Subdivision::new(config.clone(), cells.into_iter().map(Cell::new)))
}

/// The regular triangulation for `lifting` refined by the lexicographic
/// perturbation (point `i` raised by `ε^(i+1)`).
pub fn regular_triangulation(config: &Arc<PointConfiguration>, lifting: &Lifting) -> Result<Subdivision> {
    lifting.check(config)?;
    let geom = Geometry::new(config)?;
    let indices: Vec<usize> = (0..config.len()).collect();
    let simplices = triangulate_indices(&geom, &indices, &lifting.heights)?;
    Ok(Subdivision::new(config.clone(), simplices.into_iter().map(Cell::new)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{box_lattice_config, cube_config};
    use crate::scalar::{int, rat};

    fn arc(c: PointConfiguration) -> Arc<PointConfiguration> {
        Arc::new(c)
    }

    fn cells(s: &Subdivision) -> Vec<Vec<usize>> {
        s.cells().iter().map(|c| c.indices().to_vec()).collect()
    }

    #[test]
    fn affine_heights_give_trivial_subdivision() {
        let c = arc(cube_config(3).unwrap());
        let h: Vec<Rational> = c
            .points()
            .iter()
            .map(|p| int(2 * p[0] - p[1] + 3 * p[2] + 1))
            .collect();
        let s = regular_subdivision(&c, &Lifting::new(h)).unwrap();
        assert_eq!(cells(&s), vec![(0..8).collect::<Vec<_>>()]);
    }

    #[test]
    fn square_pulling_order() {
        let c = arc(cube_config(2).unwrap());
        let t = regular_triangulation(&c, &Lifting::zero(4)).unwrap();
        assert_eq!(cells(&t), vec![vec![0, 1, 3], vec![0, 2, 3]]);
    }

    #[test]
    fn unit_prices_counter_example() {
        let c = arc(cube_config(3).unwrap());
        let p = [rat(0, 1), rat(1, 4), rat(1, 4), rat(2, 3), rat(1, 4), rat(2, 3), rat(2, 3), rat(5, 6)];
        let s = regular_subdivision(&c, &Lifting::new(p.iter().map(|x| -x).collect())).unwrap();
        assert_eq!(
            cells(&s),
            vec![vec![0, 1, 2, 4], vec![1, 2, 3, 7], vec![1, 2, 4, 7], vec![1, 4, 5, 7], vec![2, 4, 6, 7]]
        );
    }

    #[test]
    fn decoy_points_are_dropped() {
        // Middle point of a segment pushed down.
        let c = arc(box_lattice_config(&[2]).unwrap());
        let s = regular_subdivision(&c, &Lifting::new(vec![int(0), int(-1), int(0)])).unwrap();
        assert_eq!(cells(&s), vec![vec![0, 2]]);
        let s = regular_subdivision(&c, &Lifting::new(vec![int(0), int(0), int(0)])).unwrap();
        assert_eq!(cells(&s), vec![vec![0, 1, 2]]);
        let s = regular_subdivision(&c, &Lifting::new(vec![int(0), int(1), int(0)])).unwrap();
        assert_eq!(cells(&s), vec![vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn wrong_lifting_length() {
        let c = arc(cube_config(2).unwrap());
        assert!(matches!(
            regular_subdivision(&c, &Lifting::zero(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
