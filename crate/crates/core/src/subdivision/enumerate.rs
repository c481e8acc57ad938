//! Exhaustive triangulation enumeration.
//!
//! Backtracking over full-dimensional simplices: starting from a simplex at a
//! fixed hull vertex, repeatedly pick an unmatched interior ridge and branch
//! over the simplices on its far side that meet every chosen simplex properly.
//! A closed, pairwise-proper family is a triangulation; total volume is checked
//! at every leaf. Each triangulation is reached exactly once, from the
//! lowest-numbered simplex containing the start vertex.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::canonical::canonical_cells;
use super::geometry::{Geometry, SimplexFrame};
use super::regularity::{cells_meet_properly_in, is_regular};
use super::{Cell, Subdivision};
use crate::config::{PointConfiguration, SymmetryGroup};
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Largest configuration enumerated without `long_running`.
pub const SIZE_GUARD_POINTS: usize = 9;

#[derive(Debug, Clone, Default)]
pub struct EnumerationOptions<'a> {
    pub regular_only: bool,
    /// Count orbits under this group instead of individual triangulations.
    pub group: Option<&'a SymmetryGroup>,
    pub long_running: bool,
    /// Randomizes the internal simplex order; results must not depend on it.
    pub shuffle_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    /// All triangulations, regular or not.
    pub triangulations: usize,
    /// Regular triangulations; computed only with `regular_only`.
    pub regular: Option<usize>,
    /// Headline count: the selected triangulations, or their orbits under the group.
    pub count: usize,
    /// One canonical form per counted object, sorted.
    pub representatives: Vec<Subdivision>,
    /// Number of selected triangulations per representative.
    pub orbit_sizes: Vec<usize>,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

struct Ridge {
    mask: u64,
    boundary: bool,
    across: Vec<usize>,
}

struct Search {
    masks: Vec<u64>,
    volumes: Vec<Rational>,
    ridges: Vec<Vec<Ridge>>,
    compat: Vec<Vec<u64>>,
    hull_volume: Rational,
}

fn bit(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

impl Search {
    fn build(geom: &Geometry, n: usize, frames: Vec<SimplexFrame>) -> Result<Self> {
        let d = geom.dim();
        let masks: Vec<u64> = frames.iter().map(|f| f.verts.iter().fold(0u64, |m, &v| m | 1 << v)).collect();
        let volumes: Vec<Rational> = frames.iter().map(|f| geom.simplex_volume(&f.verts)).collect();

        let mut by_ridge: HashMap<u64, Vec<(usize, usize)>> = HashMap::new();
        for (s, f) in frames.iter().enumerate() {
            for &apex in &f.verts {
                by_ridge.entry(masks[s] & !(1u64 << apex)).or_default().push((s, apex));
            }
        }
        let ridges: Vec<Vec<Ridge>> = frames
            .iter()
            .enumerate()
            .map(|(s, f)| {
                (0..=d)
                    .map(|k| {
                        let mask = masks[s] & !(1u64 << f.verts[k]);
                        let boundary =
                            (0..n).all(|q| !f.coordinate(k, geom.coords(q)).is_negative());
                        let across = by_ridge[&mask]
                            .iter()
                            .filter(|&&(t, apex)| t != s && f.coordinate(k, geom.coords(apex)).is_negative())
                            .map(|&(t, _)| t)
                            .collect();
                        Ridge { mask, boundary, across }
                    })
                    .collect()
            })
            .collect();

        let words = frames.len().div_ceil(64);
        let compat: Vec<Vec<u64>> = (0..frames.len())
            .into_par_iter()
            .map(|s| -> Result<Vec<u64>> {
                let mut row = vec![0u64; words];
                for t in 0..frames.len() {
                    if t == s {
                        continue;
                    }
                    let shared = (masks[s] & masks[t]).count_ones() as usize;
                    let ok = if shared == d {
                        ridges[s].iter().any(|r| r.across.contains(&t))
                    } else {
                        cells_meet_properly_in(geom, &frames[s].verts, &frames[t].verts)?
                    };
                    if ok {
                        row[t / 64] |= 1 << (t % 64);
                    }
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;

        let all: Vec<usize> = (0..n).collect();
        let hull_volume = geom.volume(&all)?;
        Ok(Search { masks, volumes, ridges, compat, hull_volume })
    }

    fn run_from(&self, start: usize, excluded: &[usize]) -> Vec<Vec<usize>> {
        let mut allowed = self.compat[start].clone();
        for &t in excluded {
            allowed[t / 64] &= !(1 << (t % 64));
        }
        let mut open = Vec::new();
        self.add_ridges(start, &mut open);
        let mut out = Vec::new();
        self.dfs(&mut vec![start], &allowed, &open, &mut out);
        out
    }

    fn add_ridges(&self, s: usize, open: &mut Vec<(usize, usize)>) {
        for (k, r) in self.ridges[s].iter().enumerate() {
            if let Some(pos) = open.iter().position(|&(t, j)| self.ridges[t][j].mask == r.mask) {
                open.swap_remove(pos);
            } else if !r.boundary {
                open.push((s, k));
            }
        }
    }

    fn dfs(&self, chosen: &mut Vec<usize>, allowed: &[u64], open: &[(usize, usize)], out: &mut Vec<Vec<usize>>) {
        if open.is_empty() {
            let volume: Rational = chosen.iter().map(|&s| &self.volumes[s]).sum();
            if volume == self.hull_volume {
                let mut t = chosen.clone();
                t.sort_unstable();
                out.push(t);
            }
            return;
        }
        // Branch on the ridge with the fewest admissible continuations.
        let mut best: Option<(usize, Vec<usize>)> = None;
        for (i, &(s, k)) in open.iter().enumerate() {
            let cands: Vec<usize> =
                self.ridges[s][k].across.iter().copied().filter(|&t| bit(allowed, t)).collect();
            if cands.is_empty() {
                return;
            }
            if best.as_ref().is_none_or(|(_, b)| cands.len() < b.len()) {
                best = Some((i, cands));
            }
        }
        let (_, cands) = best.expect("open ridges are nonempty");
        for t in cands {
            let next_allowed: Vec<u64> = allowed.iter().zip(&self.compat[t]).map(|(a, b)| a & b).collect();
            let mut next_open = open.to_vec();
            self.add_ridges(t, &mut next_open);
            chosen.push(t);
            self.dfs(chosen, &next_allowed, &next_open, out);
            chosen.pop();
        }
    }
}

/// Enumerates all triangulations of `config` (optionally only regular ones,
/// optionally up to a symmetry group).
pub fn enumerate_triangulations(
    config: &Arc<PointConfiguration>,
    options: &EnumerationOptions<'_>,
) -> Result<Enumeration> {
    let n = config.len();
    if n > SIZE_GUARD_POINTS && !options.long_running {
        return Err(Error::SizeGuard(format!(
            "{config} has {n} points; exhaustive enumeration above {SIZE_GUARD_POINTS} points needs the long-running mode"
        )));
    }
    if n > 64 {
        return Err(Error::OutOfRange(format!("{config} has more than 64 points")));
    }
    if let Some(g) = options.group {
        if !g.acts_on(config) {
            return Err(Error::IncompatibleGroup(format!("group does not act on {config}")));
        }
    }
    let geom = Geometry::new(config)?;
    let d = geom.dim();

    let mut subsets = combinations(n, d + 1);
    if let Some(seed) = options.shuffle_seed {
        subsets.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let frames: Vec<SimplexFrame> = subsets.iter().filter_map(|s| geom.simplex(s)).collect();
    let search = Search::build(&geom, n, frames.clone())?;

    let v0 = (0..n).min_by(|&a, &b| config.point(a).cmp(config.point(b))).expect("nonempty");
    let starts: Vec<usize> = (0..frames.len()).filter(|&s| search.masks[s] >> v0 & 1 == 1).collect();
    let found: Vec<Vec<usize>> = starts
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, &s)| search.run_from(s, &starts[..i]))
        .collect();

    let triangulations: BTreeSet<Vec<Cell>> = found
        .iter()
        .map(|t| {
            let mut cells: Vec<Cell> = t.iter().map(|&s| Cell::new(frames[s].verts.clone())).collect();
            cells.sort();
            cells
        })
        .collect();
    if triangulations.len() != found.len() {
        return Err(Error::Invariant("triangulation reached twice".into()));
    }
    let total = triangulations.len();

    let (selected, regular): (Vec<Vec<Cell>>, Option<usize>) = if options.regular_only {
        let flags: Vec<bool> = triangulations
            .par_iter()
            .map(|cells| {
                let sub = Subdivision::new(config.clone(), cells.iter().cloned());
                is_regular(&sub).map(|r| r.regular)
            })
            .collect::<Result<_>>()?;
        let sel: Vec<Vec<Cell>> = triangulations
            .into_iter()
            .zip(&flags)
            .filter(|(_, &f)| f)
            .map(|(t, _)| t)
            .collect();
        let r = sel.len();
        (sel, Some(r))
    } else {
        (triangulations.into_iter().collect(), None)
    };

    let mut orbits: BTreeMap<Vec<Cell>, usize> = BTreeMap::new();
    match options.group {
        Some(g) => {
            let forms: Vec<Vec<Cell>> = selected.par_iter().map(|t| canonical_cells(t, g)).collect();
            for f in forms {
                *orbits.entry(f).or_default() += 1;
            }
        }
        None => {
            for t in selected {
                orbits.insert(t, 1);
            }
        }
    }
    let representatives = orbits.keys().map(|c| Subdivision::new(config.clone(), c.iter().cloned())).collect();
    let orbit_sizes = orbits.values().copied().collect();
    Ok(Enumeration { triangulations: total, regular, count: orbits.len(), representatives, orbit_sizes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{box_lattice_config, cube_config, symmetry_group, GroupKind};

    #[test]
    fn combination_counts() {
        assert_eq!(combinations(8, 4).len(), 70);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn square() {
        let c = Arc::new(cube_config(2).unwrap());
        let all = enumerate_triangulations(&c, &EnumerationOptions::default()).unwrap();
        assert_eq!((all.triangulations, all.count), (2, 2));
        let g = symmetry_group(&c, GroupKind::FullCube).unwrap();
        let orb = enumerate_triangulations(&c, &EnumerationOptions { group: Some(&g), ..Default::default() }).unwrap();
        assert_eq!(orb.count, 1);
        assert_eq!(orb.orbit_sizes, vec![2]);
    }

    #[test]
    fn segment_with_midpoint() {
        // Triangulations of three collinear points: {0,2} or {0,1},{1,2}.
        let c = Arc::new(box_lattice_config(&[2]).unwrap());
        let e = enumerate_triangulations(&c, &EnumerationOptions { regular_only: true, ..Default::default() }).unwrap();
        assert_eq!(e.triangulations, 2);
        assert_eq!(e.regular, Some(2));
    }

    #[test]
    fn three_cube_counts() {
        let c = Arc::new(cube_config(3).unwrap());
        let g = symmetry_group(&c, GroupKind::FullCube).unwrap();
        let e = enumerate_triangulations(&c, &EnumerationOptions { group: Some(&g), ..Default::default() }).unwrap();
        assert_eq!(e.triangulations, 74);
        assert_eq!(e.count, 6);
        assert_eq!(e.orbit_sizes.iter().sum::<usize>(), 74);
        let shuffled = enumerate_triangulations(
            &c,
            &EnumerationOptions { group: Some(&g), shuffle_seed: Some(7), ..Default::default() },
        )
        .unwrap();
        assert_eq!(shuffled, e);
    }

    #[test]
    fn size_guard() {
        let c = Arc::new(box_lattice_config(&[2, 3]).unwrap());
        assert!(matches!(
            enumerate_triangulations(&c, &EnumerationOptions::default()),
            Err(Error::SizeGuard(_))
        ));
    }

    #[test]
    fn incompatible_group() {
        let c = Arc::new(cube_config(2).unwrap());
        let g = SymmetryGroup::identity(8);
        assert!(enumerate_triangulations(&c, &EnumerationOptions { group: Some(&g), ..Default::default() }).is_err());
    }
}
