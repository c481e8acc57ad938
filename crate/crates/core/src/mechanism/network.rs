use std::fmt;

use num_traits::Zero;

use super::{bundle_vector, utility_polynomial, Mechanism};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, Rational};
use crate::tropical::{regions_meet, TropicalPolynomial};

/// `ℓ(a, a′)`, the infimum of `θ·a′ − θ·a` over the closed difference set of `a′`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcLength {
    /// `None` stands for `+∞` (empty difference set).
    pub length: Option<Rational>,
    /// The difference set is nonempty but has no interior, so the open
    /// preimage may be empty and the value only holds for its closure.
    pub closure_only: bool,
}

impl fmt::Display for ArcLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.length {
            Some(v) => f.write_str(&format_rational(v)),
            None => f.write_str("inf"),
        }
    }
}

fn check_bundle(mech: &Mechanism, a: usize) -> Result<()> {
    if a >= 1 << mech.items() {
        return Err(Error::OutOfRange(format!("bundle {a} out of range for {} items", mech.items())));
    }
    Ok(())
}

fn arc_in(poly: &TropicalPolynomial, items: usize, a: usize, b: usize) -> Result<ArcLength> {
    let region = poly.region_of(b)?;
    let va = bundle_vector(items, a);
    let vb = bundle_vector(items, b);
    let objective: Vec<Rational> = vb.iter().zip(&va).map(|(x, y)| Rational::from_integer((x - y).into())).collect();
    match region.minimize(&objective)? {
        None => Ok(ArcLength { length: None, closure_only: false }),
        Some(None) => Err(Error::Invariant(format!("arc ({a},{b}) unbounded below"))),
        Some(Some(v)) => Ok(ArcLength { length: Some(v), closure_only: !region.is_full_dimensional()? }),
    }
}

pub fn arc_length(mech: &Mechanism, a: usize, b: usize) -> Result<ArcLength> {
    check_bundle(mech, a)?;
    check_bundle(mech, b)?;
    arc_in(&utility_polynomial(mech), mech.items(), a, b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleAudit {
    /// `None` if some arc is infinite.
    pub length: Option<Rational>,
    /// Every pair of consecutive difference sets intersects.
    pub adjacent: bool,
}

/// Length of a closed walk of bundles, and whether consecutive difference sets meet.
pub fn verify_zero_cycles(mech: &Mechanism, cycle: &[usize]) -> Result<CycleAudit> {
    if cycle.is_empty() || cycle.first() != cycle.last() {
        return Err(Error::OutOfRange("cycle must start and end at the same bundle".into()));
    }
    for &a in cycle {
        check_bundle(mech, a)?;
    }
    let poly = utility_polynomial(mech);
    let mut length = Some(Rational::zero());
    let mut adjacent = true;
    for w in cycle.windows(2) {
        let arc = arc_in(&poly, mech.items(), w[0], w[1])?;
        length = match (length, arc.length) {
            (Some(l), Some(x)) => Some(l + x),
            _ => None,
        };
        adjacent &= regions_meet(&poly, &[w[0], w[1]])?;
    }
    if cycle.len() == 1 {
        adjacent = regions_meet(&poly, &cycle[..1])?;
    }
    Ok(CycleAudit { length, adjacent })
}

/// All arc lengths and pairwise adjacencies of a mechanism.
#[derive(Debug, Clone)]
pub struct AllocationNetwork {
    pub arcs: Vec<Vec<ArcLength>>,
    pub adjacent: Vec<Vec<bool>>,
}

impl AllocationNetwork {
    pub fn new(mech: &Mechanism) -> Result<Self> {
        let poly = utility_polynomial(mech);
        let n = 1usize << mech.items();
        let mut arcs = Vec::with_capacity(n);
        let mut adjacent = Vec::with_capacity(n);
        for a in 0..n {
            arcs.push((0..n).map(|b| arc_in(&poly, mech.items(), a, b)).collect::<Result<Vec<_>>>()?);
            adjacent.push((0..n).map(|b| regions_meet(&poly, &[a, b])).collect::<Result<Vec<_>>>()?);
        }
        Ok(AllocationNetwork { arcs, adjacent })
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn cycle(&self, cycle: &[usize]) -> CycleAudit {
        let mut length = Some(Rational::zero());
        let mut adjacent = true;
        for w in cycle.windows(2) {
            length = match (length, &self.arcs[w[0]][w[1]].length) {
                (Some(l), Some(x)) => Some(l + x),
                _ => None,
            };
            adjacent &= self.adjacent[w[0]][w[1]];
        }
        CycleAudit { length, adjacent }
    }

    /// Every closed walk with at most `max_arcs` arcs whose consecutive
    /// difference sets meet; returns (walks checked, walks with nonzero length).
    pub fn audit_cycles(&self, max_arcs: usize) -> (usize, usize) {
        let n = self.len();
        let mut checked = 0;
        let mut bad = 0;
        let mut walk = Vec::with_capacity(max_arcs + 1);
        for start in 0..n {
            walk.clear();
            walk.push(start);
            self.extend(&mut walk, max_arcs, &mut checked, &mut bad);
        }
        (checked, bad)
    }

    fn extend(&self, walk: &mut Vec<usize>, max_arcs: usize, checked: &mut usize, bad: &mut usize) {
        let last = *walk.last().expect("nonempty");
        for next in 0..self.len() {
            if !self.adjacent[last][next] {
                continue;
            }
            walk.push(next);
            if next == walk[0] {
                *checked += 1;
                if self.cycle(walk).length != Some(Rational::zero()) {
                    *bad += 1;
                }
            }
            if walk.len() <= max_arcs {
                self.extend(walk, max_arcs, checked, bad);
            }
            walk.pop();
        }
    }
}
