//! Deterministic SVG drawings of planar difference sets, dual subdivisions and
//! tight spans. Coordinates are exact until the final formatting, which prints
//! six decimals with half-to-even rounding.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::mechanism::{lineality_reduce, AffineMaximizer};
use crate::scalar::{int, rat, to_fixed_decimal, Rational};
use crate::tropical::{Polyhedron, TropicalPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RenderTarget {
    DifferenceSets,
    DualSubdivision,
    TightSpan,
}

impl std::str::FromStr for RenderTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "difference-sets" => Ok(RenderTarget::DifferenceSets),
            "dual-subdivision" => Ok(RenderTarget::DualSubdivision),
            "tight-span" => Ok(RenderTarget::TightSpan),
            _ => Err(Error::Parse(format!("unknown render target {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Viewport {
    pub xmin: Rational,
    pub xmax: Rational,
    pub ymin: Rational,
    pub ymax: Rational,
}

impl Viewport {
    pub fn new(xmin: Rational, xmax: Rational, ymin: Rational, ymax: Rational) -> Result<Self> {
        if xmax <= xmin || ymax <= ymin {
            return Err(Error::OutOfRange("viewport must have positive width and height".into()));
        }
        Ok(Viewport { xmin, xmax, ymin, ymax })
    }

    /// Parses `xmin,xmax,ymin,ymax` with rational entries.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<Rational> =
            s.split(',').map(crate::scalar::parse_rational).collect::<Result<_>>()?;
        match <[Rational; 4]>::try_from(parts) {
            Ok([a, b, c, d]) => Viewport::new(a, b, c, d),
            Err(_) => Err(Error::Parse(format!("viewport {s:?} needs four numbers"))),
        }
    }

    fn around(points: &[[Rational; 2]], pad: Rational) -> Self {
        let get = |k: usize, f: fn(&Rational, &Rational) -> bool| {
            points.iter().map(|p| &p[k]).fold(None::<&Rational>, |acc, x| match acc {
                Some(a) if !f(x, a) => Some(a),
                _ => Some(x),
            })
        };
        let zero = Rational::zero();
        let xmin = get(0, |x, a| x < a).unwrap_or(&zero) - &pad;
        let xmax = get(0, |x, a| x > a).unwrap_or(&zero) + &pad;
        let ymin = get(1, |x, a| x < a).unwrap_or(&zero) - &pad;
        let ymax = get(1, |x, a| x > a).unwrap_or(&zero) + &pad;
        Viewport { xmin, xmax, ymin, ymax }
    }

    fn as_polyhedron(&self) -> Polyhedron {
        Polyhedron {
            dimension: 2,
            normals: vec![vec![int(1), int(0)], vec![int(-1), int(0)], vec![int(0), int(1)], vec![int(0), int(-1)]],
            offsets: vec![self.xmin.clone(), -&self.xmax, self.ymin.clone(), -&self.ymax],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderSpec {
    pub target: RenderTarget,
    /// Derived from the drawn data when absent.
    pub viewport: Option<Viewport>,
    pub labels: bool,
    pub stroke_width: Rational,
}

impl RenderSpec {
    pub fn new(target: RenderTarget) -> Self {
        RenderSpec { target, viewport: None, labels: true, stroke_width: int(2) }
    }
}

const CANVAS: i64 = 400;
const MARGIN: i64 = 20;
const PALETTE: [&str; 8] = ["#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5"];

type Point = [Rational; 2];

struct Canvas {
    view: Viewport,
    body: String,
    stroke: String,
}

impl Canvas {
    fn new(view: Viewport, spec: &RenderSpec) -> Self {
        Canvas { view, body: String::new(), stroke: to_fixed_decimal(&spec.stroke_width, 6) }
    }

    fn px(&self, p: &Point) -> (String, String) {
        let w = int(CANVAS);
        let m = int(MARGIN);
        let x = &m + (&p[0] - &self.view.xmin) / (&self.view.xmax - &self.view.xmin) * &w;
        let y = &m + (&self.view.ymax - &p[1]) / (&self.view.ymax - &self.view.ymin) * &w;
        (to_fixed_decimal(&x, 6), to_fixed_decimal(&y, 6))
    }

    fn polygon(&mut self, class: &str, fill: &str, pts: &[Point]) {
        let coords: Vec<String> = pts
            .iter()
            .map(|p| {
                let (x, y) = self.px(p);
                format!("{x},{y}")
            })
            .collect();
        let _ = writeln!(
            self.body,
            r#"  <polygon class="{class}" points="{}" fill="{fill}" stroke="black" stroke-width="{}"/>"#,
            coords.join(" "),
            self.stroke
        );
    }

    fn line(&mut self, class: &str, a: &Point, b: &Point) {
        let (x1, y1) = self.px(a);
        let (x2, y2) = self.px(b);
        let _ = writeln!(
            self.body,
            r#"  <line class="{class}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black" stroke-width="{}"/>"#,
            self.stroke
        );
    }

    fn mark(&mut self, p: &Point, fill: &str) {
        let (x, y) = self.px(p);
        let _ = writeln!(self.body, r#"  <circle class="vertex" cx="{x}" cy="{y}" r="4" fill="{fill}"/>"#);
    }

    fn label(&mut self, p: &Point, text: &str) {
        let (x, y) = self.px(p);
        let _ = writeln!(
            self.body,
            r#"  <text class="label" x="{x}" y="{y}" font-family="monospace" font-size="12" text-anchor="middle">{}</text>"#,
            escape(text)
        );
    }

    fn finish(self) -> String {
        let size = CANVAS + 2 * MARGIN;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n  <rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Convex hull in counterclockwise order, starting at the lexicographic minimum.
fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Vertices of a bounded planar polyhedron, counterclockwise; empty if it has no interior.
pub(crate) fn polygon_vertices(poly: &Polyhedron) -> Vec<Point> {
    let n = poly.normals.len();
    let mut pts = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let a = [poly.normals[i].clone(), poly.normals[j].clone()];
            let b = [poly.offsets[i].clone(), poly.offsets[j].clone()];
            if let Some(x) = linalg::solve_unique(&a, &b) {
                if poly.contains(&x) {
                    pts.push([x[0].clone(), x[1].clone()]);
                }
            }
        }
    }
    let hull = convex_hull(pts);
    if hull.len() < 3 {
        Vec::new()
    } else {
        hull
    }
}

fn centroid(pts: &[Point]) -> Point {
    let n = int(pts.len() as i64);
    let sx: Rational = pts.iter().map(|p| &p[0]).sum();
    let sy: Rational = pts.iter().map(|p| &p[1]).sum();
    [sx / &n, sy / n]
}

fn to_point(v: &[Rational]) -> Point {
    [v[0].clone(), v[1].clone()]
}

fn require_plane(d: usize) -> Result<()> {
    if d != 2 {
        return Err(Error::RenderDimension(d));
    }
    Ok(())
}

/// Regions drawn in order, clipped to the viewport; those without interior
/// inside the viewport are skipped.
pub fn render_regions(regions: &[(String, Polyhedron)], spec: &RenderSpec, default_view: Viewport) -> Result<String> {
    for (_, r) in regions {
        require_plane(r.dimension)?;
    }
    let view = spec.viewport.clone().unwrap_or(default_view);
    let clip = view.as_polyhedron();
    let mut canvas = Canvas::new(view, spec);
    let mut labels = Vec::new();
    for (k, (name, r)) in regions.iter().enumerate() {
        let pts = polygon_vertices(&r.intersection(&clip)?);
        if pts.is_empty() {
            continue;
        }
        canvas.polygon("region", PALETTE[k % PALETTE.len()], &pts);
        labels.push((centroid(&pts), name.clone()));
    }
    if spec.labels {
        for (p, name) in labels {
            canvas.label(&p, &name);
        }
    }
    Ok(canvas.finish())
}

fn tight_span_view(p: &TropicalPolynomial) -> Result<Viewport> {
    let ts = p.tight_span()?;
    let pts: Vec<Point> = ts.vertices.iter().map(|v| to_point(v)).collect();
    Ok(Viewport::around(&pts, int(1)))
}

/// Draws a two-variable polynomial; `labels[i]` names support point `i`.
pub fn render_polynomial(p: &TropicalPolynomial, labels: &[String], spec: &RenderSpec) -> Result<String> {
    require_plane(p.dimension())?;
    match spec.target {
        RenderTarget::DifferenceSets => {
            let regions = p
                .finite_indices()
                .into_iter()
                .map(|i| Ok((labels[i].clone(), p.region_of(i)?)))
                .collect::<Result<Vec<_>>>()?;
            render_regions(&regions, spec, tight_span_view(p)?)
        }
        RenderTarget::DualSubdivision => {
            let sub = p.dual_subdivision()?;
            let finite = p.finite_indices();
            let pts: Vec<Point> = finite.iter().map(|&i| [int(p.support()[i][0]), int(p.support()[i][1])]).collect();
            let view = spec.viewport.clone().unwrap_or_else(|| Viewport::around(&pts, rat(1, 2)));
            let mut canvas = Canvas::new(view, spec);
            for (k, cell) in sub.cells().iter().enumerate() {
                let hull = convex_hull(cell.indices().iter().map(|&i| pts[i].clone()).collect());
                canvas.polygon("cell", PALETTE[k % PALETTE.len()], &hull);
            }
            let used = sub.used_points();
            for (k, q) in pts.iter().enumerate() {
                canvas.mark(q, if used.contains(&k) { "black" } else { "gray" });
            }
            if spec.labels {
                for (k, q) in pts.iter().enumerate() {
                    let shifted = [q[0].clone(), &q[1] + rat(1, 5)];
                    canvas.label(&shifted, &labels[finite[k]]);
                }
            }
            Ok(canvas.finish())
        }
        RenderTarget::TightSpan => {
            let ts = p.tight_span()?;
            let pts: Vec<Point> = ts.vertices.iter().map(|v| to_point(v)).collect();
            let view = spec.viewport.clone().unwrap_or_else(|| Viewport::around(&pts, int(1)));
            let mut canvas = Canvas::new(view, spec);
            for &(a, b) in &ts.edges {
                canvas.line("edge", &pts[a], &pts[b]);
            }
            for q in &pts {
                canvas.mark(q, "black");
            }
            Ok(canvas.finish())
        }
    }
}

/// Difference sets of an affine maximizer whose type space is three-dimensional,
/// drawn modulo the lineality line.
pub fn render_affine(am: &AffineMaximizer, spec: &RenderSpec) -> Result<String> {
    let d = am.players() * am.items();
    require_plane(d - 1)?;
    if spec.target != RenderTarget::DifferenceSets {
        return Err(Error::OutOfRange("affine maximizers render only as difference sets".into()));
    }
    let red = lineality_reduce(am)?;
    let config = am.config();
    let regions: Vec<(String, Polyhedron)> =
        config.labels().iter().cloned().zip(red.regions.iter().cloned()).collect();
    let default = Viewport::new(int(-2), int(2), int(-2), int(2))?;
    render_regions(&regions, spec, default)
}
