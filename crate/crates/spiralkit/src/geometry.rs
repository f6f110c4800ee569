//! Curvature elements, the implicit circle equation, the inversive invariant Q,
//! circle inversion and chord normalization.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn z(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point::new(a[0], a[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl From<Complex64> for Point {
    fn from(z: Complex64) -> Self {
        Point::new(z.re, z.im)
    }
}

/// Point, tangent direction and signed curvature. Also names the directed
/// circle (or line, when `k == 0`) it sits on.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CurvatureElement {
    pub x: f64,
    pub y: f64,
    pub tau: f64,
    pub k: f64,
}

impl CurvatureElement {
    pub const fn new(x: f64, y: f64, tau: f64, k: f64) -> Self {
        CurvatureElement { x, y, tau, k }
    }

    pub fn at(p: Point, tau: f64, k: f64) -> Self {
        CurvatureElement::new(p.x, p.y, tau, k)
    }

    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn dir(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.tau)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.tau.is_finite() && self.k.is_finite()
    }

    /// Center of the circle, `None` for a line.
    pub fn center(&self) -> Option<Point> {
        (self.k != 0.0).then(|| {
            Point::new(
                self.x - self.tau.sin() / self.k,
                self.y + self.tau.cos() / self.k,
            )
        })
    }

    pub fn radius(&self) -> f64 {
        1.0 / self.k.abs()
    }

    /// Same circle traversed the other way.
    pub fn reversed(&self) -> Self {
        CurvatureElement::new(self.x, self.y, self.tau + PI, -self.k)
    }

    pub fn canonical(&self) -> Self {
        CurvatureElement::new(self.x, self.y, canonicalize(self.tau), self.k)
    }

    /// Tangent direction of this directed circle at another point of it.
    pub fn tangent_at(&self, p: Point) -> f64 {
        match self.center() {
            None => self.tau,
            Some(c) => {
                let t = Complex64::i() * self.k * (p.z() - c.z());
                t.arg()
            }
        }
    }
}

/// Wraps an angle into (-pi, pi].
pub fn canonicalize(a: f64) -> f64 {
    let mut r = a.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}

/// Wraps an angle into [-pi, pi).
pub fn canonicalize_low(a: f64) -> f64 {
    let r = canonicalize(a);
    if r == PI {
        -PI
    } else {
        r
    }
}

/// Implicit circle equation. Negative to the left of the directed boundary.
pub fn circle_side(p: Point, e: &CurvatureElement) -> f64 {
    let dx = p.x - e.x;
    let dy = p.y - e.y;
    e.k * (dx * dx + dy * dy) + 2.0 * dx * e.tau.sin() - 2.0 * dy * e.tau.cos()
}

/// Closed region to the left of the directed circle.
pub fn in_material(p: Point, e: &CurvatureElement) -> bool {
    circle_side(p, e) <= 0.0
}

/// Inversive invariant of two directed circles.
pub fn q_invariant(a: &CurvatureElement, b: &CurvatureElement) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let h = ((b.tau - a.tau) / 2.0).sin();
    0.25 * a.k * b.k * (dx * dx + dy * dy)
        + h * h
        + 0.5 * b.k * (dx * a.tau.sin() - dy * a.tau.cos())
        - 0.5 * a.k * (dx * b.tau.sin() - dy * b.tau.cos())
}

/// Default tangency fence `1e-10 (1+|k1|)(1+|k2|)`.
pub const TANGENCY_EPS: f64 = 1e-10;

pub fn is_tangent(q: f64, kappa1: f64, kappa2: f64, eps: f64) -> bool {
    q.abs() <= eps * (1.0 + kappa1.abs()) * (1.0 + kappa2.abs())
}

/// Q from center distance, both curvatures nonzero.
pub fn q_from_centers(a: &CurvatureElement, b: &CurvatureElement) -> Option<f64> {
    let (ca, cb) = (a.center()?, b.center()?);
    let d = ca.dist(cb);
    let p = a.k * b.k * d;
    Some((p * p - (b.k - a.k).powi(2)) / (4.0 * a.k * b.k))
}

/// Q for a line and a circle, from the signed distance of the center to the
/// line (positive to the right).
pub fn q_line_circle(line: &CurvatureElement, circle: &CurvatureElement) -> Option<f64> {
    if line.k != 0.0 {
        return None;
    }
    let c = circle.center()?;
    let dist = circle_side(c, line) / 2.0;
    Some((1.0 + circle.k * dist) / 2.0)
}

/// Q from the crossing angle of two intersecting circles, `None` when they do
/// not meet transversally.
pub fn q_from_crossing(a: &CurvatureElement, b: &CurvatureElement) -> Option<f64> {
    let p = intersection_point(a, b)?;
    let psi = b.tangent_at(p) - a.tangent_at(p);
    Some((psi / 2.0).sin().powi(2))
}

/// One intersection point of two circles/lines.
pub fn intersection_point(a: &CurvatureElement, b: &CurvatureElement) -> Option<Point> {
    match (a.center(), b.center()) {
        (Some(ca), Some(cb)) => {
            let (ra, rb) = (a.radius(), b.radius());
            let d = ca.dist(cb);
            if d == 0.0 || d >= ra + rb || d <= (ra - rb).abs() {
                return None;
            }
            let t = (d * d + ra * ra - rb * rb) / (2.0 * d);
            let h = (ra * ra - t * t).max(0.0).sqrt();
            let u = (cb.z() - ca.z()) / d;
            Some((ca.z() + u * t + u * Complex64::i() * h).into())
        }
        (None, Some(_)) => line_circle_point(a, b),
        (Some(_), None) => line_circle_point(b, a),
        (None, None) => {
            let (da, db) = (a.dir(), b.dir());
            let cr = da.re * db.im - da.im * db.re;
            if cr.abs() < 1e-15 {
                return None;
            }
            let w = b.z() - a.z();
            let t = (w.re * db.im - w.im * db.re) / cr;
            Some((a.z() + da * t).into())
        }
    }
}

fn line_circle_point(line: &CurvatureElement, circle: &CurvatureElement) -> Option<Point> {
    let c = circle.center()?.z();
    let r = circle.radius();
    let u = line.dir();
    let w = c - line.z();
    let t = w.re * u.re + w.im * u.im;
    let foot = line.z() + u * t;
    let h2 = r * r - (c - foot).norm_sqr();
    if h2 <= 0.0 {
        return None;
    }
    Some((foot + u * h2.sqrt()).into())
}

/// Chord-normalized end data: the chord is [-1, 1] on the X axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedEnds {
    pub alpha: f64,
    pub beta: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub c: f64,
}

impl NormalizedEnds {
    pub fn new(alpha: f64, beta: f64, kappa1: f64, kappa2: f64) -> Self {
        NormalizedEnds {
            alpha,
            beta,
            kappa1,
            kappa2,
            c: 1.0,
        }
    }

    pub fn omega(&self) -> f64 {
        (self.alpha + self.beta) / 2.0
    }

    pub fn gamma(&self) -> f64 {
        (self.alpha - self.beta) / 2.0
    }

    /// Start element in the normalized frame.
    pub fn start(&self) -> CurvatureElement {
        CurvatureElement::new(-1.0, 0.0, self.alpha, self.kappa1)
    }

    pub fn end(&self) -> CurvatureElement {
        CurvatureElement::new(1.0, 0.0, self.beta, self.kappa2)
    }

    /// Same end data seen in the mirror of the X axis.
    pub fn mirrored(&self) -> Self {
        NormalizedEnds {
            alpha: -self.alpha,
            beta: -self.beta,
            kappa1: -self.kappa1,
            kappa2: -self.kappa2,
            c: self.c,
        }
    }
}

pub fn q_normalized(e: &NormalizedEnds) -> f64 {
    (e.kappa1 + e.alpha.sin()) * (e.kappa2 - e.beta.sin()) + e.omega().sin().powi(2)
}

/// Inverts `e` in the circle carried by `k0`. The image curvature is
/// `2 k0 (1 - 2 Q) - k`.
pub fn invert_element(e: &CurvatureElement, k0: &CurvatureElement) -> Result<CurvatureElement> {
    if k0.k == 0.0 {
        return Err(Error::InvalidInput(
            "inversion circle must have nonzero curvature".into(),
        ));
    }
    let c = k0.center().expect("nonzero curvature").z();
    let r2 = 1.0 / (k0.k * k0.k);
    let w = e.z() - c;
    let n = w.norm_sqr();
    if n <= 1e-24 * r2 {
        return Err(Error::InversionCenterHit);
    }
    let p = c + w * (r2 / n);
    let tau = PI - e.tau + 2.0 * w.arg();
    let q = q_invariant(k0, e);
    let k = 2.0 * k0.k * (1.0 - 2.0 * q) - e.k;
    Ok(CurvatureElement::new(p.re, p.im, tau, k))
}

/// Orientation-preserving or reversing similarity `z -> s e^{i rot} z + t`
/// (with `z` conjugated first when `reflect` is set).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub rotation: f64,
    pub scale: f64,
    pub translation: Point,
    pub reflect: bool,
}

impl Similarity {
    pub fn identity() -> Self {
        Similarity {
            rotation: 0.0,
            scale: 1.0,
            translation: Point::default(),
            reflect: false,
        }
    }

    /// Reflection in the X axis.
    pub fn mirror_x() -> Self {
        Similarity {
            reflect: true,
            ..Similarity::identity()
        }
    }

    fn factor(&self) -> Complex64 {
        Complex64::from_polar(self.scale, self.rotation)
    }

    pub fn apply_z(&self, z: Complex64) -> Complex64 {
        let z = if self.reflect { z.conj() } else { z };
        self.factor() * z + self.translation.z()
    }

    pub fn apply_point(&self, p: Point) -> Point {
        self.apply_z(p.z()).into()
    }

    pub fn apply_angle(&self, tau: f64) -> f64 {
        if self.reflect {
            self.rotation - tau
        } else {
            self.rotation + tau
        }
    }

    pub fn apply_element(&self, e: &CurvatureElement) -> CurvatureElement {
        let k = if self.reflect { -e.k } else { e.k } / self.scale;
        CurvatureElement::at(self.apply_point(e.point()), self.apply_angle(e.tau), k)
    }

    pub fn inverse(&self) -> Self {
        let t = self.translation.z();
        if self.reflect {
            Similarity {
                rotation: self.rotation,
                scale: 1.0 / self.scale,
                translation: (-Complex64::from_polar(1.0, self.rotation) * t.conj() / self.scale)
                    .into(),
                reflect: true,
            }
        } else {
            Similarity {
                rotation: -self.rotation,
                scale: 1.0 / self.scale,
                translation: (-Complex64::from_polar(1.0, -self.rotation) * t / self.scale).into(),
                reflect: false,
            }
        }
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Similarity) -> Self {
        let t = self.apply_z(first.translation.z());
        let rot = if self.reflect {
            self.rotation - first.rotation
        } else {
            self.rotation + first.rotation
        };
        Similarity {
            rotation: rot,
            scale: self.scale * first.scale,
            translation: t.into(),
            reflect: self.reflect ^ first.reflect,
        }
    }
}

/// Maps the pair onto the normalized frame. The similarity takes the original
/// plane to the normalized one.
pub fn normalize_pair(
    a: &CurvatureElement,
    b: &CurvatureElement,
) -> Result<(NormalizedEnds, Similarity)> {
    let d = b.z() - a.z();
    let len = d.norm();
    if len == 0.0 || !len.is_finite() {
        return Err(Error::CoincidentEndpoints);
    }
    let c = len / 2.0;
    let mu = d.arg();
    let mid = (a.z() + b.z()) / 2.0;
    let rot = Complex64::from_polar(1.0 / c, -mu);
    let sim = Similarity {
        rotation: -mu,
        scale: 1.0 / c,
        translation: (-mid * rot).into(),
        reflect: false,
    };
    let ends = NormalizedEnds {
        alpha: canonicalize(a.tau - mu),
        beta: canonicalize(b.tau - mu),
        kappa1: c * a.k,
        kappa2: c * b.k,
        c,
    };
    Ok((ends, sim))
}

/// `(e^{ix} - 1) / (i x)`, with a series near zero.
fn expm1_over(x: f64) -> Complex64 {
    if x.abs() < 1e-6 {
        Complex64::new(1.0 - x * x / 6.0, x / 2.0 - x * x * x / 24.0)
    } else {
        let e = Complex64::from_polar(1.0, x) - 1.0;
        e / Complex64::new(0.0, x)
    }
}

/// Moves along the constant-curvature flow of `e` by arclength `s`.
pub fn evaluate_arc(e: &CurvatureElement, s: f64) -> CurvatureElement {
    let z = e.z() + e.dir() * s * expm1_over(e.k * s);
    CurvatureElement::new(z.re, z.im, e.tau + e.k * s, e.k)
}

/// Arclength from `e` forward along its circle to `p`, assumed on it, in
/// `[0, 2 pi / |k|)`.
pub fn arc_length_to(e: &CurvatureElement, p: Point) -> f64 {
    let w = (p.z() - e.z()) * e.dir().conj();
    if e.k == 0.0 {
        return w.re;
    }
    let q = Complex64::new(1.0, 0.0) + Complex64::i() * e.k * w;
    let mut th = q.arg() * e.k.signum();
    if th < 0.0 {
        th += TAU;
    }
    if th > TAU - 1e-12 {
        th = 0.0;
    }
    th / e.k.abs()
}
