use std::fmt;

use super::{utility_polynomial, Mechanism};
use crate::error::Result;
use crate::subdivision::Subdivision;
use crate::tropical::TropicalPolynomial;

/// Facets of the nerve of the difference sets, over allocations indexed like
/// the underlying configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndifferenceComplex {
    pub labels: Vec<String>,
    pub facets: Vec<Vec<usize>>,
}

impl IndifferenceComplex {
    pub fn from_subdivision(sub: &Subdivision) -> Self {
        let mut facets: Vec<Vec<usize>> = sub.cells().iter().map(|c| c.indices().to_vec()).collect();
        facets.sort();
        IndifferenceComplex { labels: sub.config().labels().to_vec(), facets }
    }

    pub fn is_face(&self, set: &[usize]) -> bool {
        self.facets.iter().any(|f| set.iter().all(|i| f.contains(i)))
    }

    pub fn facet_labels(&self) -> Vec<Vec<String>> {
        self.facets.iter().map(|f| f.iter().map(|&i| self.labels[i].clone()).collect()).collect()
    }
}

impl fmt::Display for IndifferenceComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.facet_labels().iter().map(|l| format!("{{{}}}", l.join(","))).collect();
        f.write_str(&parts.join(" "))
    }
}

pub fn indifference_complex(mech: &Mechanism) -> Result<IndifferenceComplex> {
    Ok(IndifferenceComplex::from_subdivision(&mech.subdivision()?))
}

/// Bundles attaining the maximum at some point of the common closed region of
/// `set`, or `None` if the regions do not meet.
fn common_argmax(poly: &TropicalPolynomial, set: &[usize]) -> Result<Option<Vec<usize>>> {
    let mut acc = poly.region_of(set[0])?;
    for &i in &set[1..] {
        acc = acc.intersection(&poly.region_of(i)?)?;
    }
    match acc.point()? {
        Some(x) => Ok(Some(poly.evaluate(&x)?.1)),
        None => Ok(None),
    }
}

/// Checks, for every set of bundles, that the closed difference sets share a
/// point exactly when the set is a face of the complex. Both properties are
/// closed under taking subsets, so the search stops below any set where both fail.
/// Intersections are decided by LP; a set is also known to meet when it lies in
/// the argmax of a point found for a subset, and known not to meet when it
/// contains a pair that does not.
pub fn verify_complex_by_intersection(mech: &Mechanism) -> Result<bool> {
    let complex = indifference_complex(mech)?;
    let poly = utility_polynomial(mech);
    let n = 1usize << mech.items();
    let mut pair_meets = vec![vec![true; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let meet = common_argmax(&poly, &[a, b])?.is_some();
            pair_meets[a][b] = meet;
            pair_meets[b][a] = meet;
        }
    }
    let mut stack: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let known = common_argmax(&poly, &[i])?.unwrap_or_default();
        stack.push((vec![i], known));
    }
    while let Some((set, known)) = stack.pop() {
        let meet = !known.is_empty();
        if meet != complex.is_face(&set) {
            return Ok(false);
        }
        if !meet {
            continue;
        }
        let last = *set.last().expect("nonempty");
        for next in last + 1..n {
            let mut s = set.clone();
            s.push(next);
            let child = if known.contains(&next) {
                known.clone()
            } else if set.iter().any(|&a| !pair_meets[a][next]) {
                Vec::new()
            } else {
                common_argmax(&poly, &s)?.unwrap_or_default()
            };
            stack.push((s, child));
        }
    }
    Ok(true)
}
