use super::{Cell, Subdivision};
use crate::config::SymmetryGroup;
use crate::error::{Error, Result};

/// Lexicographically smallest sorted cell list over all images under `group`.
pub fn canonicalize(subdivision: &Subdivision, group: &SymmetryGroup) -> Result<Subdivision> {
    if !group.acts_on(subdivision.config()) {
        return Err(Error::IncompatibleGroup(format!(
            "group does not act on {}",
            subdivision.config()
        )));
    }
    let best = canonical_cells(subdivision.cells(), group);
    Ok(Subdivision::new(subdivision.config().clone(), best))
}

pub(crate) fn canonical_cells(cells: &[Cell], group: &SymmetryGroup) -> Vec<Cell> {
    group
        .elements
        .iter()
        .map(|g| {
            let mut image: Vec<Cell> = cells.iter().map(|c| c.map(|i| g.apply(i))).collect();
            image.sort();
            image
        })
        .min()
        .unwrap_or_else(|| cells.to_vec())
}
