//! SVG and CSV output for point clouds of orbifold points.
//!
//! Output is canonical: points are sorted by source triple, numbers are
//! printed with a fixed precision rounded half-to-even, and styling is fixed.

use std::fmt::Write as _;

use thiserror::Error;

use crate::discriminant::Discriminant;
use crate::forms::{enumerate_h2, enumerate_h3};
use crate::geometry::{
    f_map, order2_eigenform_coords, GeometryError, TriangleDomain, BOUNDARY_TOLERANCE,
};

pub const DEFAULT_PRECISION: usize = 6;
pub const DEFAULT_WIDTH: u32 = 600;
pub const DEFAULT_HEIGHT: u32 = 600;

const MARKER_RADIUS: f64 = 3.0;
const MARKER_FILL: &str = "#c0392b";
const DOMAIN_STROKE: &str = "#1f4e79";
const BOUNDARY_STROKE: &str = "#444444";
const AXIS_STROKE: &str = "#bbbbbb";
/// World half-width margin around the disc.
const DISC_MARGIN: f64 = 1.05;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("point {x}, {y} from {triple:?} lies outside the plot range")]
    PointOutOfRange {
        x: f64,
        y: f64,
        triple: (i64, i64, i64),
    },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// First coordinates of the order-2 eigenforms, in the plane.
    Order2Plane,
    /// `f(a,b,c,D)` in the disc of radius `1/√2`.
    Order3Disc,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotPoint {
    pub source: (i64, i64, i64),
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub kind: PlotKind,
    pub d: i64,
    pub points: Vec<PlotPoint>,
    pub include_domain: bool,
    pub width: u32,
    pub height: u32,
    pub precision: usize,
}

impl PlotSpec {
    pub fn new(kind: PlotKind, d: i64, mut points: Vec<PlotPoint>) -> Self {
        // stable: the two eigenforms of one triple keep their order
        points.sort_by_key(|p| p.source);
        PlotSpec {
            kind,
            d,
            points,
            include_domain: kind == PlotKind::Order3Disc,
            width: DEFAULT_WIDTH,
            height: DEFAULT_HEIGHT,
            precision: DEFAULT_PRECISION,
        }
    }

    /// `f(a,b,c,D)` for every triple of `H₃(D)`.
    pub fn order3(d: &Discriminant) -> Result<Self, RenderError> {
        let points = enumerate_h3(d)
            .iter()
            .map(|t| {
                let z = f_map(t)?.to_complex();
                Ok(PlotPoint {
                    source: t.coords(),
                    x: z.re,
                    y: z.im,
                })
            })
            .collect::<Result<Vec<_>, GeometryError>>()?;
        Ok(Self::new(PlotKind::Order3Disc, d.value(), points))
    }

    /// `ω⁺` then `ω⁻` for every triple of `H₂(D)`.
    pub fn order2(d: &Discriminant) -> Result<Self, RenderError> {
        let mut points = Vec::new();
        for t in enumerate_h2(d) {
            let (plus, minus) = order2_eigenform_coords(&t)?;
            for w in [plus, minus] {
                points.push(PlotPoint {
                    source: t.coords(),
                    x: w.re,
                    y: w.im,
                });
            }
        }
        Ok(Self::new(PlotKind::Order2Plane, d.value(), points))
    }

    fn check_points(&self) -> Result<(), RenderError> {
        for p in &self.points {
            let bad = !p.x.is_finite()
                || !p.y.is_finite()
                || (self.kind == PlotKind::Order3Disc
                    && p.x.hypot(p.y) >= TriangleDomain::DISC_RADIUS + BOUNDARY_TOLERANCE);
            if bad {
                return Err(RenderError::PointOutOfRange {
                    x: p.x,
                    y: p.y,
                    triple: p.source,
                });
            }
        }
        Ok(())
    }

    /// Half-width of the square world window.
    fn extent(&self) -> f64 {
        match self.kind {
            PlotKind::Order3Disc => TriangleDomain::DISC_RADIUS * DISC_MARGIN,
            PlotKind::Order2Plane => {
                let m = self
                    .points
                    .iter()
                    .map(|p| p.x.abs().max(p.y.abs()))
                    .fold(1.0, f64::max);
                // next multiple of 1/2 above the data
                (m * 2.0).floor() / 2.0 + 0.5
            }
        }
    }
}

/// Fixed-point formatting, ties to even, without negative zero.
pub fn format_fixed(x: f64, precision: usize) -> String {
    let s = format!("{:.*}", precision, x);
    if s.starts_with('-') && s[1..].bytes().all(|c| c == b'0' || c == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

struct Canvas {
    extent: f64,
    width: f64,
    height: f64,
    precision: usize,
}

impl Canvas {
    fn x(&self, x: f64) -> String {
        format_fixed(
            (x + self.extent) / (2.0 * self.extent) * self.width,
            self.precision,
        )
    }

    fn y(&self, y: f64) -> String {
        format_fixed(
            (self.extent - y) / (2.0 * self.extent) * self.height,
            self.precision,
        )
    }

    fn len_x(&self, r: f64) -> String {
        format_fixed(r / (2.0 * self.extent) * self.width, self.precision)
    }

    fn len_y(&self, r: f64) -> String {
        format_fixed(r / (2.0 * self.extent) * self.height, self.precision)
    }
}

pub fn render_svg(spec: &PlotSpec) -> Result<Vec<u8>, RenderError> {
    spec.check_points()?;
    let cv = Canvas {
        extent: spec.extent(),
        width: spec.width as f64,
        height: spec.height as f64,
        precision: spec.precision,
    };
    let mut out = String::new();
    let kind = match spec.kind {
        PlotKind::Order2Plane => "order2_plane",
        PlotKind::Order3Disc => "order3_disc",
    };
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = spec.width,
        h = spec.height
    )
    .unwrap();
    writeln!(out, "<title>{kind} D={}</title>", spec.d).unwrap();
    writeln!(
        out,
        "<rect width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>",
        spec.width, spec.height
    )
    .unwrap();

    writeln!(
        out,
        "<g class=\"axes\" stroke=\"{AXIS_STROKE}\" stroke-width=\"1\"><line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/><line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/></g>",
        cv.x(-cv.extent),
        cv.y(0.0),
        cv.x(cv.extent),
        cv.y(0.0),
        cv.x(0.0),
        cv.y(cv.extent),
        cv.x(0.0),
        cv.y(-cv.extent),
    )
    .unwrap();

    if spec.kind == PlotKind::Order3Disc {
        writeln!(
            out,
            "<circle class=\"boundary\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{BOUNDARY_STROKE}\" stroke-width=\"1.5\"/>",
            cv.x(0.0),
            cv.y(0.0),
            cv.len_x(TriangleDomain::DISC_RADIUS)
        )
        .unwrap();
    }
    if spec.include_domain {
        // 0 → 1/2 and ζ₆/2 → 0 are straight; 1/2 → v₂ → ζ₆/2 is the arc of
        // |z − (3 + √3 i)/4| = 1/2, clockwise in the plane (counter-clockwise
        // on screen, so sweep-flag 0)
        let (v6x, v6y) = TriangleDomain::V6;
        let r = TriangleDomain::ARC_RADIUS;
        writeln!(
            out,
            "<path class=\"domain\" d=\"M {} {} L {} {} A {} {} 0 0 0 {} {} Z\" fill=\"none\" stroke=\"{DOMAIN_STROKE}\" stroke-width=\"1.5\"/>",
            cv.x(0.0),
            cv.y(0.0),
            cv.x(0.5),
            cv.y(0.0),
            cv.len_x(r),
            cv.len_y(r),
            cv.x(v6x),
            cv.y(v6y),
        )
        .unwrap();
    }

    writeln!(out, "<g class=\"points\" fill=\"{MARKER_FILL}\">").unwrap();
    let radius = format_fixed(MARKER_RADIUS, spec.precision);
    for p in &spec.points {
        let (a, b, c) = p.source;
        writeln!(
            out,
            "<circle class=\"point\" data-abc=\"{a},{b},{c}\" cx=\"{}\" cy=\"{}\" r=\"{radius}\"/>",
            cv.x(p.x),
            cv.y(p.y)
        )
        .unwrap();
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out.into_bytes())
}

pub fn export_csv(spec: &PlotSpec) -> Vec<u8> {
    let mut out = String::from("a,b,c,D,x,y\n");
    for p in &spec.points {
        let (a, b, c) = p.source;
        writeln!(
            out,
            "{a},{b},{c},{},{},{}",
            spec.d,
            format_fixed(p.x, spec.precision),
            format_fixed(p.y, spec.precision)
        )
        .unwrap();
    }
    out.into_bytes()
}

/// Number of point markers in an SVG produced by [`render_svg`].
pub fn count_markers(svg: &[u8]) -> usize {
    String::from_utf8_lossy(svg)
        .matches("class=\"point\"")
        .count()
}
