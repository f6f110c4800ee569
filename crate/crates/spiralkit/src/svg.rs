//! Deterministic SVG figures. Geometry is kept Y-up and flipped only when
//! coordinates are written out.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::biarc::{build_biarc, chord_arc, chord_arc_length, BiarcSpec, LenseSpec};
use crate::chain::{MultiArcCurve, Segment};
use crate::envelope::{InterpolationData, LenseChain};
use crate::error::Result;
use crate::geometry::{evaluate_arc, CurvatureElement, NormalizedEnds, Point};

const STYLE: &str = "path,circle.gamma-circle{fill:none;vector-effect:non-scaling-stroke}\
.arc{stroke:#4a6fa5;stroke-width:1}\
.lense{stroke:#222;stroke-width:1.5}\
.bilense{stroke:#c0392b;stroke-width:1.5;stroke-dasharray:6 3}\
.spiral{stroke:#1e8449;stroke-width:2.5}\
.gamma-circle{stroke:#888;stroke-width:1;stroke-dasharray:2 3}\
.point{fill:#000}.point.outside{fill:#c0392b}";

/// Fixed six decimals, trailing zeros trimmed, no negative zero.
fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

#[derive(Debug, Clone)]
enum Item {
    Path { class: String, d: String },
    Circle { class: String, c: Point, r: f64 },
    Dot { class: String, p: Point },
}

#[derive(Debug, Clone, Default)]
pub struct Figure {
    items: Vec<Item>,
    lo: Option<Point>,
    hi: Option<Point>,
}

impl Figure {
    pub fn new() -> Self {
        Figure::default()
    }

    fn grow(&mut self, p: Point) {
        if !(p.x.is_finite() && p.y.is_finite()) {
            return;
        }
        let lo = self.lo.get_or_insert(p);
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        let hi = self.hi.get_or_insert(p);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }

    fn xy(p: Point) -> String {
        format!("{} {}", num(p.x), num(-p.y))
    }

    /// Arcs are split so no SVG arc command turns by more than pi/2.
    pub fn segments(&mut self, class: &str, segs: &[Segment]) {
        let Some(first) = segs.first() else { return };
        let mut d = format!("M{}", Figure::xy(first.start.point()));
        self.grow(first.start.point());
        for seg in segs {
            if seg.length <= 0.0 {
                continue;
            }
            let pieces = ((seg.turning().abs() / (PI / 2.0)).ceil() as usize).max(1);
            for j in 1..=pieces {
                let e = evaluate_arc(&seg.start, seg.length * j as f64 / pieces as f64);
                // sample the middle of the piece too so the bounds see bulges
                let mid = evaluate_arc(&seg.start, seg.length * (j as f64 - 0.5) / pieces as f64);
                self.grow(mid.point());
                self.grow(e.point());
                if seg.start.k == 0.0 {
                    let _ = write!(d, " L{}", Figure::xy(e.point()));
                } else {
                    let r = num(1.0 / seg.start.k.abs());
                    // counterclockwise in Y-up is sweep 0 once Y is flipped
                    let sweep = u8::from(seg.start.k < 0.0);
                    let _ = write!(d, " A{r} {r} 0 0 {sweep} {}", Figure::xy(e.point()));
                }
            }
        }
        self.items.push(Item::Path {
            class: class.into(),
            d,
        });
    }

    pub fn chain(&mut self, class: &str, c: &MultiArcCurve) {
        self.segments(class, &c.segments);
    }

    pub fn polyline(&mut self, class: &str, pts: &[Point]) {
        let Some(first) = pts.first() else { return };
        let mut d = format!("M{}", Figure::xy(*first));
        for p in pts {
            self.grow(*p);
        }
        for p in &pts[1..] {
            let _ = write!(d, " L{}", Figure::xy(*p));
        }
        self.items.push(Item::Path {
            class: class.into(),
            d,
        });
    }

    /// The whole circle of an element. A line is drawn over the current
    /// bounds, or over [-3, 3] around the element when there are none.
    pub fn circle(&mut self, class: &str, e: &CurvatureElement) {
        match e.center() {
            Some(c) => {
                let r = e.radius();
                self.grow(Point::new(c.x - r, c.y - r));
                self.grow(Point::new(c.x + r, c.y + r));
                self.items.push(Item::Circle {
                    class: class.into(),
                    c,
                    r,
                });
            }
            None => {
                let reach = match (self.lo, self.hi) {
                    (Some(lo), Some(hi)) => lo.dist(hi).max(1.0),
                    _ => 3.0,
                };
                let (s, c) = e.tau.sin_cos();
                let a = Point::new(e.x - reach * c, e.y - reach * s);
                let b = Point::new(e.x + reach * c, e.y + reach * s);
                self.polyline(class, &[a, b]);
            }
        }
    }

    pub fn point(&mut self, class: &str, p: Point) {
        self.grow(p);
        self.items.push(Item::Dot {
            class: class.into(),
            p,
        });
    }

    pub fn render(&self) -> String {
        let (lo, hi) = match (self.lo, self.hi) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => (Point::new(-1.0, -1.0), Point::new(1.0, 1.0)),
        };
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        let pad = 0.05 * span;
        let (w, h) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
        let dot = 0.006 * span;
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\" width=\"800\" height=\"{}\">",
            num(lo.x - pad),
            num(-hi.y - pad),
            num(w),
            num(h),
            (800.0 * h / w).round() as i64
        );
        let _ = writeln!(out, "<style>{STYLE}</style>");
        for it in &self.items {
            match it {
                Item::Path { class, d } => {
                    let _ = writeln!(out, "<path class=\"{class}\" d=\"{d}\"/>");
                }
                Item::Circle { class, c, r } => {
                    let _ = writeln!(
                        out,
                        "<circle class=\"{class}\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                        num(c.x),
                        num(-c.y),
                        num(*r)
                    );
                }
                Item::Dot { class, p } => {
                    let _ = writeln!(
                        out,
                        "<circle class=\"{class}\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                        num(p.x),
                        num(-p.y),
                        num(dot)
                    );
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

fn chord_arc_segment(xi: f64) -> Segment {
    Segment {
        start: chord_arc(xi),
        length: chord_arc_length(xi),
    }
}

fn lense_outline(fig: &mut Figure, lense: &LenseSpec) {
    fig.segments("lense", &[chord_arc_segment(lense.alpha)]);
    fig.segments("lense", &[chord_arc_segment(-lense.beta)]);
}

/// Lense boundary, the circle of contact points and the biarcs B(b).
pub fn biarc_fan(lense: &LenseSpec, bs: &[f64]) -> Result<String> {
    let mut fig = Figure::new();
    lense_outline(&mut fig, lense);
    for &b in bs {
        fig.chain("arc", &build_biarc(&BiarcSpec { lense: *lense, b })?);
    }
    fig.circle("gamma-circle", &lense.gamma_circle());
    Ok(fig.render())
}

/// Lense boundary with query points; points outside get the `outside` class.
pub fn lense_figure(lense: &LenseSpec, pts: &[(Point, bool)]) -> String {
    let mut fig = Figure::new();
    lense_outline(&mut fig, lense);
    for (p, inside) in pts {
        fig.point(if *inside { "point" } else { "point outside" }, *p);
    }
    fig.render()
}

/// Lense, the two bounding biarcs and query points.
pub fn bilense_figure(ends: &NormalizedEnds, bounds: (f64, f64), pts: &[(Point, bool)]) -> Result<String> {
    let mut fig = Figure::new();
    let lense = LenseSpec::from(ends);
    lense_outline(&mut fig, &lense);
    for b in [bounds.0, bounds.1] {
        fig.chain("bilense", &build_biarc(&BiarcSpec { lense, b })?);
    }
    for (p, inside) in pts {
        fig.point(if *inside { "point" } else { "point outside" }, *p);
    }
    Ok(fig.render())
}

/// A constructed chain over its lense, and the bilense when it exists.
pub fn construct_figure(ends: &NormalizedEnds, bounds: Option<(f64, f64)>, chain: &MultiArcCurve) -> Result<String> {
    let mut fig = Figure::new();
    let lense = LenseSpec::from(ends);
    lense_outline(&mut fig, &lense);
    if let Some((b1, b2)) = bounds {
        for b in [b1, b2] {
            fig.chain("bilense", &build_biarc(&BiarcSpec { lense, b })?);
        }
    }
    fig.chain("spiral", chain);
    Ok(fig.render())
}

/// The chord lenses of interpolation data, mapped back to the data's frame.
pub fn envelope_figure(data: &InterpolationData, chain: &LenseChain) -> String {
    let mut fig = Figure::new();
    for cl in &chain.lenses {
        let back = cl.to_chord.inverse();
        for xi in [cl.lense.alpha, -cl.lense.beta] {
            let arc = MultiArcCurve::new(vec![chord_arc_segment(xi)]).transformed(&back);
            fig.chain("lense", &arc);
        }
    }
    for p in &data.points {
        fig.point("point", *p);
    }
    fig.render()
}
