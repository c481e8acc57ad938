//! Max-plus tropical polynomials and their dual subdivisions.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::config::PointConfiguration;
use crate::error::{Error, Result};
use crate::linalg;
use crate::lp::{lp_feasible_strict, lp_solve, Constraint, LinearProgram, Sense, StrictConstraint};
use crate::scalar::{format_rational, Rational};
use crate::subdivision::{regular_subdivision, Cell, Geometry, Lifting, Subdivision};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coefficient {
    Finite(Rational),
    NegInfinity,
}

impl Coefficient {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Coefficient::Finite(r) => Some(r),
            Coefficient::NegInfinity => None,
        }
    }
}

impl From<Rational> for Coefficient {
    fn from(r: Rational) -> Self {
        Coefficient::Finite(r)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Finite(r) => f.write_str(&format_rational(r)),
            Coefficient::NegInfinity => f.write_str("-inf"),
        }
    }
}

/// `x ↦ max { c_u + x·u : u ∈ support }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalPolynomial {
    support: Vec<Vec<i64>>,
    coeffs: Vec<Coefficient>,
}

/// `{ x : normal_i · x ≥ offset_i for all i }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyhedron {
    pub dimension: usize,
    pub normals: Vec<Vec<Rational>>,
    pub offsets: Vec<Rational>,
}

impl Polyhedron {
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.normals.iter().zip(&self.offsets).all(|(a, b)| linalg::dot(a, x) >= *b)
    }

    fn weak(&self) -> Vec<Constraint<Rational>> {
        self.normals.iter().zip(&self.offsets).map(|(a, b)| Constraint::ge(a.clone(), b.clone())).collect()
    }

    /// Some point of the polyhedron, or `None` if it is empty.
    pub fn point(&self) -> Result<Option<Vec<Rational>>> {
        let mut lp = LinearProgram::feasibility(self.dimension);
        for c in self.weak() {
            lp.push(c);
        }
        Ok(lp_solve(&lp)?.witness().map(<[Rational]>::to_vec))
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.point()?.is_none())
    }

    /// A point satisfying every inequality strictly, if one exists.
    pub fn interior_point(&self) -> Result<Option<Vec<Rational>>> {
        if self.normals.is_empty() {
            return Ok(Some(vec![Rational::zero(); self.dimension]));
        }
        let cons: Vec<StrictConstraint<Rational>> = self
            .normals
            .iter()
            .zip(&self.offsets)
            .map(|(a, b)| StrictConstraint::gt(a.clone(), b.clone()))
            .collect();
        lp_feasible_strict(self.dimension, &cons)
    }

    pub fn is_full_dimensional(&self) -> Result<bool> {
        Ok(self.interior_point()?.is_some())
    }

    pub fn intersection(&self, other: &Polyhedron) -> Result<Polyhedron> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, got: other.dimension });
        }
        Ok(Polyhedron {
            dimension: self.dimension,
            normals: self.normals.iter().chain(&other.normals).cloned().collect(),
            offsets: self.offsets.iter().chain(&other.offsets).cloned().collect(),
        })
    }

    /// Minimum of `objective · x` over the polyhedron; `None` if empty,
    /// `Some(None)` if unbounded below.
    pub fn minimize(&self, objective: &[Rational]) -> Result<Option<Option<Rational>>> {
        let mut lp = LinearProgram::new(self.dimension, objective.to_vec(), Sense::Minimize);
        for c in self.weak() {
            lp.push(c);
        }
        use crate::lp::LpOutcome::*;
        Ok(match lp_solve(&lp)? {
            Optimal { value, .. } => Some(Some(value)),
            Unbounded { .. } => Some(None),
            Infeasible => None,
        })
    }
}

/// Bounded part of the hypersurface: one vertex per full-dimensional maximal
/// cell, edges between cells sharing an interior facet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightSpan {
    pub cells: Vec<Cell>,
    pub vertices: Vec<Vec<Rational>>,
    pub edges: Vec<(usize, usize)>,
}

impl TropicalPolynomial {
    pub fn new(support: Vec<Vec<i64>>, coeffs: Vec<Coefficient>) -> Result<Self> {
        if support.len() != coeffs.len() {
            return Err(Error::DimensionMismatch { expected: support.len(), got: coeffs.len() });
        }
        let Some(first) = support.first() else {
            return Err(Error::EmptySupport);
        };
        let d = first.len();
        if let Some(bad) = support.iter().find(|u| u.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: bad.len() });
        }
        let mut sorted = support.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Parse("repeated support point".into()));
        }
        if coeffs.iter().all(|c| c.finite().is_none()) {
            return Err(Error::EmptySupport);
        }
        Ok(TropicalPolynomial { support, coeffs })
    }

    /// Polynomial with finite coefficients on every point of `config`.
    pub fn from_lifting(config: &PointConfiguration, lifting: &Lifting) -> Result<Self> {
        if lifting.len() != config.len() {
            return Err(Error::DimensionMismatch { expected: config.len(), got: lifting.len() });
        }
        Self::new(config.points().to_vec(), lifting.heights.iter().cloned().map(Coefficient::Finite).collect())
    }

    pub fn dimension(&self) -> usize {
        self.support[0].len()
    }

    pub fn support(&self) -> &[Vec<i64>] {
        &self.support
    }

    pub fn coeffs(&self) -> &[Coefficient] {
        &self.coeffs
    }

    fn term(&self, i: usize, x: &[Rational]) -> Option<Rational> {
        let c = self.coeffs[i].finite()?;
        let mut v = c.clone();
        for (u, xi) in self.support[i].iter().zip(x) {
            if *u != 0 {
                v += xi * Rational::from_integer((*u).into());
            }
        }
        Some(v)
    }

    /// Value at `x` and the indices of all maximizing support points.
    pub fn evaluate(&self, x: &[Rational]) -> Result<(Rational, Vec<usize>)> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), got: x.len() });
        }
        let mut best: Option<Rational> = None;
        let mut argmax = Vec::new();
        for i in 0..self.support.len() {
            let Some(v) = self.term(i, x) else { continue };
            match best.as_ref().map(|b| v.cmp(b)) {
                Some(std::cmp::Ordering::Less) => {}
                Some(std::cmp::Ordering::Equal) => argmax.push(i),
                _ => {
                    best = Some(v);
                    argmax = vec![i];
                }
            }
        }
        Ok((best.expect("at least one finite coefficient"), argmax))
    }

    /// Indices of the support points with finite coefficients.
    pub fn finite_indices(&self) -> Vec<usize> {
        (0..self.support.len()).filter(|&i| self.coeffs[i].finite().is_some()).collect()
    }

    /// The finite part of the support as a configuration, with its lifting.
    /// Cell indices of [`dual_subdivision`](Self::dual_subdivision) refer to this order.
    pub fn finite_support_config(&self) -> Result<(Arc<PointConfiguration>, Lifting)> {
        let idx = self.finite_indices();
        let points = idx.iter().map(|&i| self.support[i].clone()).collect();
        let heights = idx.iter().map(|&i| self.coeffs[i].finite().cloned().expect("finite")).collect();
        let labels = idx.iter().map(|&i| point_label(&self.support[i])).collect();
        Ok((Arc::new(PointConfiguration::new(points, Some(labels))?), Lifting::new(heights)))
    }

    pub fn dual_subdivision(&self) -> Result<Subdivision> {
        let (config, lifting) = self.finite_support_config()?;
        regular_subdivision(&config, &lifting)
    }

    /// Closed region where the term of support point `u` is maximal.
    pub fn region(&self, u: &[i64]) -> Result<Polyhedron> {
        let i = self.support.iter().position(|p| p == u).ok_or(Error::NotInSupport)?;
        self.region_of(i)
    }

    pub fn region_of(&self, i: usize) -> Result<Polyhedron> {
        let lu = self.coeffs.get(i).and_then(Coefficient::finite).ok_or(Error::NotInSupport)?;
        let mut normals = Vec::new();
        let mut offsets = Vec::new();
        for (j, v) in self.support.iter().enumerate() {
            let Some(lv) = self.coeffs[j].finite() else { continue };
            if j == i {
                continue;
            }
            normals.push(self.support[i].iter().zip(v).map(|(a, b)| Rational::from_integer((a - b).into())).collect());
            offsets.push(lv - lu);
        }
        Ok(Polyhedron { dimension: self.dimension(), normals, offsets })
    }

    /// The hypersurface vertex dual to a maximal cell of full ambient dimension.
    /// `cell` indexes the finite support, as returned by the dual subdivision.
    pub fn dual_vertex(&self, cell: &Cell) -> Result<Vec<Rational>> {
        let idx = self.finite_indices();
        let d = self.dimension();
        let Some(&first) = cell.indices().first() else {
            return Err(Error::NotFullDimensional);
        };
        let get = |k: usize| idx.get(k).copied().ok_or_else(|| Error::OutOfRange(format!("cell index {k}")));
        let u0 = get(first)?;
        let l0 = self.coeffs[u0].finite().expect("finite");
        let mut rows = Vec::new();
        for &k in &cell.indices()[1..] {
            let v = get(k)?;
            let mut row: Vec<Rational> = self.support[u0]
                .iter()
                .zip(&self.support[v])
                .map(|(a, b)| Rational::from_integer((a - b).into()))
                .collect();
            row.push(self.coeffs[v].finite().expect("finite") - l0);
            rows.push(row);
        }
        let pivots = linalg::rref(&mut rows);
        if pivots.len() < d || pivots.contains(&d) {
            return Err(Error::NotFullDimensional);
        }
        let mut x = vec![Rational::zero(); d];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = rows[r][d].clone();
        }
        let (_, argmax) = self.evaluate(&x)?;
        if !cell.indices().iter().all(|&k| argmax.contains(&idx[k])) {
            return Err(Error::InvalidSubdivision(format!("{cell} is not a maximal cell of the dual subdivision")));
        }
        Ok(x)
    }

    pub fn tight_span(&self) -> Result<TightSpan> {
        let sub = self.dual_subdivision()?;
        self.tight_span_of(&sub)
    }

    pub(crate) fn tight_span_of(&self, sub: &Subdivision) -> Result<TightSpan> {
        let d = self.dimension();
        let geom = Geometry::new(sub.config())?;
        if geom.dim() < d {
            return Ok(TightSpan { cells: Vec::new(), vertices: Vec::new(), edges: Vec::new() });
        }
        let cells: Vec<Cell> = sub.cells().to_vec();
        let vertices = cells.iter().map(|c| self.dual_vertex(c)).collect::<Result<Vec<_>>>()?;
        let mut edges = Vec::new();
        for i in 0..cells.len() {
            for j in i + 1..cells.len() {
                let common = cells[i].intersection(&cells[j]);
                if !common.is_empty() && geom.affine_rank(&common) + 1 == d {
                    edges.push((i, j));
                }
            }
        }
        Ok(TightSpan { cells, vertices, edges })
    }
}

impl fmt::Display for TropicalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("max{")?;
        let mut first = true;
        for (u, c) in self.support.iter().zip(&self.coeffs) {
            let Some(c) = c.finite() else { continue };
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            let mut terms: Vec<String> = Vec::new();
            if !c.is_zero() || u.iter().all(|&e| e == 0) {
                terms.push(format_rational(c));
            }
            for (k, &e) in u.iter().enumerate() {
                match e {
                    0 => {}
                    1 => terms.push(format!("x{}", k + 1)),
                    _ => terms.push(format!("{e}x{}", k + 1)),
                }
            }
            f.write_str(&terms.join(" + "))?;
        }
        f.write_str("}")
    }
}

fn point_label(p: &[i64]) -> String {
    let parts: Vec<String> = p.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

/// Whether the closed regions of the given support indices share a point.
pub fn regions_meet(p: &TropicalPolynomial, indices: &[usize]) -> Result<bool> {
    let mut acc: Option<Polyhedron> = None;
    for &i in indices {
        let r = p.region_of(i)?;
        acc = Some(match acc {
            None => r,
            Some(a) => a.intersection(&r)?,
        });
    }
    match acc {
        None => Ok(true),
        Some(a) => Ok(!a.is_empty()?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    pub(crate) fn fig2() -> TropicalPolynomial {
        let support = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2], vec![2, 1]];
        let coeffs = [0, 1, 1, 0, 0, -1, -2].iter().map(|&c| Coefficient::Finite(int(c))).collect();
        TropicalPolynomial::new(support, coeffs).unwrap()
    }

    #[test]
    fn evaluation() {
        let p = fig2();
        assert_eq!(p.evaluate(&[int(0), int(0)]).unwrap(), (int(1), vec![1, 2]));
        assert_eq!(p.evaluate(&[int(1), int(1)]).unwrap(), (int(2), vec![1, 2, 3, 4]));
        let single = TropicalPolynomial::new(vec![vec![2, 1]], vec![Coefficient::Finite(rat(1, 3))]).unwrap();
        assert_eq!(single.evaluate(&[int(1), int(-5)]).unwrap(), (rat(1, 3) - int(3), vec![0]));
        assert!(p.evaluate(&[int(1)]).is_err());
    }

    #[test]
    fn quadrangle_and_its_vertex() {
        let p = fig2();
        let sub = p.dual_subdivision().unwrap();
        let quad = Cell::new(vec![1, 2, 3, 4]);
        assert!(sub.cells().contains(&quad));
        assert_eq!(p.dual_vertex(&quad).unwrap(), vec![int(1), int(1)]);
        assert!(matches!(p.dual_vertex(&Cell::new(vec![1, 2])), Err(Error::NotFullDimensional)));
    }

    #[test]
    fn one_variable_regions() {
        let p = TropicalPolynomial::new(vec![vec![0], vec![1]], vec![int(0).into(), int(-1).into()]).unwrap();
        let r0 = p.region(&[0]).unwrap();
        let r1 = p.region(&[1]).unwrap();
        assert!(r0.contains(&[int(1)]) && !r0.contains(&[rat(3, 2)]));
        assert!(r1.contains(&[int(1)]) && !r1.contains(&[rat(1, 2)]));
        assert!(matches!(p.region(&[2]), Err(Error::NotInSupport)));
        let ts = p.tight_span().unwrap();
        assert_eq!(ts.vertices, vec![vec![int(1)]]);
        assert!(ts.edges.is_empty());
    }

    #[test]
    fn absent_terms_are_dropped() {
        let p = TropicalPolynomial::new(
            vec![vec![0], vec![1], vec![2]],
            vec![int(0).into(), Coefficient::NegInfinity, int(-3).into()],
        )
        .unwrap();
        let sub = p.dual_subdivision().unwrap();
        assert_eq!(sub.cells(), &[Cell::new(vec![0, 1])]);
        assert!(p.region(&[1]).is_err());
        assert!(TropicalPolynomial::new(vec![vec![0]], vec![Coefficient::NegInfinity]).is_err());
    }

    #[test]
    fn region_membership() {
        let p = fig2();
        let r = p.region(&[0, 0]).unwrap();
        assert!(r.contains(&[int(-2), int(-2)]));
        assert!(!r.contains(&[int(1), int(1)]));
        assert!(r.is_full_dimensional().unwrap());
    }
}
