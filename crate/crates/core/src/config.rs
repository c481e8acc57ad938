//! Point configurations (cube vertices, allocation matrices, lattice boxes)
//! and their explicit symmetry groups.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// What a configuration was built from; decides which symmetry groups apply.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ConfigKind {
    Cube { items: usize },
    SimplexProduct { players: usize, items: usize },
    Box { bounds: Vec<i64> },
    Custom,
}

/// An ordered, labelled set of distinct integer points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointConfiguration {
    dimension: usize,
    points: Vec<Vec<i64>>,
    labels: Vec<String>,
    kind: ConfigKind,
}

impl PointConfiguration {
    /// Builds a custom configuration; points must be distinct and of equal length.
    pub fn new(points: Vec<Vec<i64>>, labels: Option<Vec<String>>) -> Result<Self> {
        let dimension = points.first().map_or(0, Vec::len);
        if points.iter().any(|p| p.len() != dimension) {
            return Err(Error::Parse("points have differing dimensions".into()));
        }
        let labels = match labels {
            Some(l) if l.len() != points.len() => {
                return Err(Error::Parse("label count differs from point count".into()))
            }
            Some(l) => l,
            None => points.iter().map(|p| tuple_label(p)).collect(),
        };
        let mut seen = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            if let Some(j) = seen.insert(p.clone(), i) {
                return Err(Error::Parse(format!("points {j} and {i} coincide")));
            }
        }
        Ok(Self { dimension, points, labels, kind: ConfigKind::Custom })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.points[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn kind(&self) -> &ConfigKind {
        &self.kind
    }

    pub fn index_of(&self, p: &[i64]) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Short textual form (`cube:3`, `simplexprod:3x2`, `box:2x3`), if any.
    pub fn shorthand(&self) -> Option<String> {
        match &self.kind {
            ConfigKind::Cube { items } => Some(format!("cube:{items}")),
            ConfigKind::SimplexProduct { players, items } => {
                Some(format!("simplexprod:{players}x{items}"))
            }
            ConfigKind::Box { bounds } => Some(format!(
                "box:{}",
                bounds.iter().map(i64::to_string).collect::<Vec<_>>().join("x")
            )),
            ConfigKind::Custom => None,
        }
    }

    /// The configuration restricted to `indices`, in the given order.
    pub fn subconfiguration(&self, indices: &[usize]) -> PointConfiguration {
        PointConfiguration {
            dimension: self.dimension,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
            kind: ConfigKind::Custom,
        }
    }
}

impl fmt::Display for PointConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.shorthand() {
            Some(s) => f.write_str(&s),
            None => write!(f, "custom({} points in dimension {})", self.len(), self.dimension),
        }
    }
}

impl FromStr for PointConfiguration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("bad configuration shorthand {s:?}")))?;
        let nums = |a: &str| -> Result<Vec<i64>> {
            a.split('x')
                .map(|t| {
                    t.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad number in {s:?}")))
                })
                .collect()
        };
        let to_usize = |v: i64| -> Result<usize> {
            usize::try_from(v).map_err(|_| Error::Parse(format!("negative size in {s:?}")))
        };
        match kind {
            "cube" => {
                let v = nums(args)?;
                match v.as_slice() {
                    [m] => cube_config(to_usize(*m)?),
                    _ => Err(Error::Parse(format!("bad cube shorthand {s:?}"))),
                }
            }
            "simplexprod" => {
                let v = nums(args)?;
                match v.as_slice() {
                    [n, m] => simplex_product_config(to_usize(*n)?, to_usize(*m)?),
                    _ => Err(Error::Parse(format!("bad simplexprod shorthand {s:?}"))),
                }
            }
            "box" => box_lattice_config(&nums(args)?),
            _ => Err(Error::Parse(format!("unknown configuration kind {kind:?}"))),
        }
    }
}

fn tuple_label(p: &[i64]) -> String {
    format!("({})", p.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
}

/// Bitstring of a 0/1 vector, first coordinate first.
pub fn bit_label(p: &[i64]) -> String {
    p.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

/// Vertices of `[0,1]^m`; index `k` is the binary expansion of `k`, first item most significant.
pub fn cube_config(m: usize) -> Result<PointConfiguration> {
    if !(1..=10).contains(&m) {
        return Err(Error::OutOfRange(format!("cube dimension {m} not in 1..=10")));
    }
    let points: Vec<Vec<i64>> = (0..1usize << m)
        .map(|k| (0..m).map(|j| ((k >> (m - 1 - j)) & 1) as i64).collect())
        .collect();
    let labels = points.iter().map(|p| bit_label(p)).collect();
    Ok(PointConfiguration { dimension: m, points, labels, kind: ConfigKind::Cube { items: m } })
}

/// Vertices of `(Δ_{n−1})^m` as `m×n` allocation matrices (rows = items,
/// columns = players), flattened row-major. Item 1's player index is the most
/// significant digit of the point index.
pub fn simplex_product_config(n: usize, m: usize) -> Result<PointConfiguration> {
    if n < 2 || m < 1 {
        return Err(Error::OutOfRange(format!("need n ≥ 2 and m ≥ 1, got ({n},{m})")));
    }
    let count = (n as u128).checked_pow(m as u32).filter(|&c| c <= 100_000).ok_or_else(|| {
        Error::OutOfRange(format!("n^m exceeds 10^5 for (n,m)=({n},{m})"))
    })? as usize;
    let mut points = Vec::with_capacity(count);
    let mut labels = Vec::with_capacity(count);
    for k in 0..count {
        let mut choice = vec![0usize; m];
        let mut r = k;
        for j in (0..m).rev() {
            choice[j] = r % n;
            r /= n;
        }
        let mut p = vec![0i64; m * n];
        for (item, &player) in choice.iter().enumerate() {
            p[item * n + player] = 1;
        }
        labels.push(matrix_label(&p, n));
        points.push(p);
    }
    Ok(PointConfiguration {
        dimension: m * n,
        points,
        labels,
        kind: ConfigKind::SimplexProduct { players: n, items: m },
    })
}

/// Row-major bitstring with rows separated by `|`, e.g. `10|01`.
pub fn matrix_label(p: &[i64], n: usize) -> String {
    p.chunks(n).map(bit_label).collect::<Vec<_>>().join("|")
}

/// All lattice points of `[0,b₁]×…×[0,b_k]` in lexicographic order.
pub fn box_lattice_config(bounds: &[i64]) -> Result<PointConfiguration> {
    if bounds.is_empty() || bounds.iter().any(|&b| b < 1) {
        return Err(Error::OutOfRange(format!("box bounds {bounds:?} must all be ≥ 1")));
    }
    let size = bounds
        .iter()
        .try_fold(1u128, |acc, &b| acc.checked_mul(b as u128 + 1))
        .filter(|&s| s <= 10_000)
        .ok_or_else(|| Error::OutOfRange(format!("box {bounds:?} has more than 10^4 points")))?;
    let mut points = Vec::with_capacity(size as usize);
    let mut cur = vec![0i64; bounds.len()];
    loop {
        points.push(cur.clone());
        let mut j = bounds.len();
        loop {
            if j == 0 {
                let labels = points.iter().map(|p| tuple_label(p)).collect();
                return Ok(PointConfiguration {
                    dimension: bounds.len(),
                    points,
                    labels,
                    kind: ConfigKind::Box { bounds: bounds.to_vec() },
                });
            }
            j -= 1;
            if cur[j] < bounds[j] {
                cur[j] += 1;
                break;
            }
            cur[j] = 0;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    ItemPermutations,
    FullCube,
    PlayerItem,
    /// Independent player relabelling per item, combined with item permutations.
    ProductAutomorphisms,
}

/// One symmetry, stored with the index permutation it induces on its configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    /// `coordinate_perm[j]` is where item `j` is sent.
    pub coordinate_perm: Vec<usize>,
    /// Coordinates reflected `x ↦ 1 − x` before permuting.
    pub flip_mask: Vec<bool>,
    /// For simplex products: `player_perm[i*n + j]` is where player `j` of item `i` is sent.
    pub player_perm: Vec<usize>,
    /// `index_map[k]` is the image of point `k`.
    pub index_map: Vec<usize>,
}

impl GroupElement {
    pub fn apply(&self, index: usize) -> usize {
        self.index_map[index]
    }

    pub fn inverse_map(&self) -> Vec<usize> {
        let mut inv = vec![0; self.index_map.len()];
        for (i, &j) in self.index_map.iter().enumerate() {
            inv[j] = i;
        }
        inv
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryGroup {
    pub kind: GroupKind,
    pub elements: Vec<GroupElement>,
}

impl SymmetryGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// The trivial group on `n` points.
    pub fn identity(n: usize) -> Self {
        SymmetryGroup {
            kind: GroupKind::ItemPermutations,
            elements: vec![GroupElement {
                coordinate_perm: Vec::new(),
                flip_mask: Vec::new(),
                player_perm: Vec::new(),
                index_map: (0..n).collect(),
            }],
        }
    }

    pub fn acts_on(&self, config: &PointConfiguration) -> bool {
        self.elements.iter().all(|g| g.index_map.len() == config.len())
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

fn index_map_of(
    config: &PointConfiguration,
    f: impl Fn(&[i64]) -> Vec<i64>,
) -> Result<Vec<usize>> {
    let lookup: HashMap<&[i64], usize> =
        config.points.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    config
        .points
        .iter()
        .map(|p| {
            let q = f(p);
            lookup.get(q.as_slice()).copied().ok_or_else(|| {
                Error::IncompatibleGroup(format!("image of {} leaves the configuration", tuple_label(p)))
            })
        })
        .collect()
}

/// `player_perms` holds one player permutation per item, concatenated; item `i`
/// of the image is item `ip[i]` and its player `j` moves to `pp[i*n + j]`.
fn push_product_elements(
    config: &PointConfiguration,
    n: usize,
    m: usize,
    player_perms: &[Vec<usize>],
    elements: &mut Vec<GroupElement>,
) -> Result<()> {
    for ip in permutations(m) {
        for pp in player_perms {
            let index_map = index_map_of(config, |p| {
                let mut q = vec![0; n * m];
                for i in 0..m {
                    for j in 0..n {
                        q[ip[i] * n + pp[i * n + j]] = p[i * n + j];
                    }
                }
                q
            })?;
            elements.push(GroupElement {
                coordinate_perm: ip.clone(),
                flip_mask: vec![false; m],
                player_perm: pp.clone(),
                index_map,
            });
        }
    }
    Ok(())
}

/// Builds the explicit symmetry group of the requested kind.
pub fn symmetry_group(config: &PointConfiguration, kind: GroupKind) -> Result<SymmetryGroup> {
    let mut elements = Vec::new();
    match (kind, config.kind()) {
        (GroupKind::ItemPermutations, ConfigKind::Cube { items: m })
        | (GroupKind::FullCube, ConfigKind::Cube { items: m }) => {
            let m = *m;
            let masks: Vec<Vec<bool>> = if kind == GroupKind::FullCube {
                (0..1usize << m).map(|b| (0..m).map(|j| (b >> j) & 1 == 1).collect()).collect()
            } else {
                vec![vec![false; m]]
            };
            for perm in permutations(m) {
                for mask in &masks {
                    let index_map = index_map_of(config, |p| {
                        let mut q = vec![0; m];
                        for j in 0..m {
                            q[perm[j]] = if mask[j] { 1 - p[j] } else { p[j] };
                        }
                        q
                    })?;
                    elements.push(GroupElement {
                        coordinate_perm: perm.clone(),
                        flip_mask: mask.clone(),
                        player_perm: Vec::new(),
                        index_map,
                    });
                }
            }
        }
        (GroupKind::ItemPermutations, ConfigKind::Box { bounds }) => {
            let d = bounds.len();
            for perm in permutations(d) {
                let index_map = index_map_of(config, |p| {
                    let mut q = vec![0; d];
                    for j in 0..d {
                        q[perm[j]] = p[j];
                    }
                    q
                })?;
                elements.push(GroupElement {
                    coordinate_perm: perm,
                    flip_mask: vec![false; d],
                    player_perm: Vec::new(),
                    index_map,
                });
            }
        }
        (GroupKind::ItemPermutations, ConfigKind::SimplexProduct { players, items })
        | (GroupKind::PlayerItem, ConfigKind::SimplexProduct { players, items }) => {
            let (n, m) = (*players, *items);
            let player_perms: Vec<Vec<usize>> = if kind == GroupKind::PlayerItem {
                permutations(n).into_iter().map(|pp| pp.repeat(m)).collect()
            } else {
                vec![(0..n).collect::<Vec<_>>().repeat(m)]
            };
            push_product_elements(config, n, m, &player_perms, &mut elements)?;
        }
        (GroupKind::ProductAutomorphisms, ConfigKind::SimplexProduct { players, items }) => {
            let (n, m) = (*players, *items);
            let single = permutations(n);
            let mut player_perms: Vec<Vec<usize>> = vec![Vec::new()];
            for _ in 0..m {
                player_perms = player_perms
                    .iter()
                    .flat_map(|pre| single.iter().map(move |pp| [pre.as_slice(), pp].concat()))
                    .collect();
            }
            push_product_elements(config, n, m, &player_perms, &mut elements)?;
        }
        (k, c) => {
            return Err(Error::IncompatibleGroup(format!(
                "{k:?} does not act on {c:?} configurations"
            )))
        }
    }
    Ok(SymmetryGroup { kind, elements })
}
