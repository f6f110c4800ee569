//! The normalized biarc family B(b; alpha, beta), lenses and bilenses.

use serde::{Deserialize, Serialize};

use crate::chain::{segment_to, MultiArcCurve, Segment};
use crate::error::{Error, Result};
use crate::geometry::{canonicalize, circle_side, is_tangent, q_normalized, CurvatureElement, NormalizedEnds, Point, TANGENCY_EPS};

/// Lense between the arcs `A(alpha)` and `A(-beta)` over the chord [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LenseSpec {
    pub alpha: f64,
    pub beta: f64,
}

impl LenseSpec {
    pub fn new(alpha: f64, beta: f64) -> Self {
        LenseSpec { alpha, beta }
    }

    pub fn omega(&self) -> f64 {
        (self.alpha + self.beta) / 2.0
    }

    pub fn gamma(&self) -> f64 {
        (self.alpha - self.beta) / 2.0
    }

    pub fn is_degenerate(&self) -> bool {
        self.omega().sin().abs() < 1e-15
    }

    fn check(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.beta.is_finite()) {
            return Err(Error::InvalidInput("lense angles must be finite".into()));
        }
        if self.is_degenerate() {
            return Err(Error::DegenerateLense);
        }
        Ok(())
    }

    /// The circle carrying the locus of contact points.
    pub fn gamma_circle(&self) -> CurvatureElement {
        let g = self.gamma();
        CurvatureElement::new(-1.0, 0.0, g, -g.sin())
    }
}

impl From<&NormalizedEnds> for LenseSpec {
    fn from(e: &NormalizedEnds) -> Self {
        LenseSpec::new(e.alpha, e.beta)
    }
}

/// Circular arc `A(xi)` from A = (-1, 0) to B = (1, 0), start element.
pub fn chord_arc(xi: f64) -> CurvatureElement {
    CurvatureElement::new(-1.0, 0.0, xi, -xi.sin())
}

/// Length of `A(xi)` over the unit half-chord.
pub fn chord_arc_length(xi: f64) -> f64 {
    if xi.abs() < 1e-8 {
        2.0 + xi * xi / 3.0
    } else {
        2.0 * xi / xi.sin()
    }
}

/// Member `b` of the family; `b` may be 0 or infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiarcSpec {
    pub lense: LenseSpec,
    pub b: f64,
}

impl BiarcSpec {
    pub fn new(alpha: f64, beta: f64, b: f64) -> Self {
        BiarcSpec {
            lense: LenseSpec::new(alpha, beta),
            b,
        }
    }
}

/// End curvatures on the tangency hyperbola. At `b = 0` or `b = inf` one of
/// them is infinite.
pub fn biarc_curvatures(spec: &BiarcSpec) -> Result<(f64, f64)> {
    spec.lense.check()?;
    if spec.b.is_nan() {
        return Err(Error::InvalidInput("b is NaN".into()));
    }
    let l = &spec.lense;
    let so = l.omega().sin();
    let k1 = if spec.b.is_infinite() {
        -l.alpha.sin()
    } else {
        -l.alpha.sin() - so / spec.b
    };
    let k2 = if spec.b == 0.0 {
        l.beta.sin()
    } else {
        l.beta.sin() + spec.b * so
    };
    Ok((k1, k2))
}

fn contact_parts(spec: &BiarcSpec) -> Result<(f64, f64)> {
    spec.lense.check()?;
    let b = spec.b;
    let g = spec.lense.gamma();
    if b.is_infinite() {
        return Ok((1.0, 0.0));
    }
    let (num_x, num_y, den) = if b.abs() > 1.0 {
        let t = 1.0 / b;
        (1.0 - t * t, 2.0 * t * g.sin(), 1.0 + 2.0 * t * g.cos() + t * t)
    } else {
        (b * b - 1.0, 2.0 * b * g.sin(), b * b + 2.0 * b * g.cos() + 1.0)
    };
    if den.abs() < 1e-14 {
        return Err(Error::ContactAtInfinity);
    }
    Ok((num_x / den, num_y / den))
}

/// Contact point T of the two arcs; it lies on the circle Gamma.
pub fn contact_point(spec: &BiarcSpec) -> Result<Point> {
    contact_parts(spec).map(|(x, y)| Point::new(x, y))
}

/// Direction of the common tangent at T, from the half-angle form.
pub fn junction_tangent(spec: &BiarcSpec) -> Result<f64> {
    contact_parts(spec)?;
    let (a, b) = (spec.lense.alpha, spec.lense.beta);
    if spec.b.is_infinite() {
        return Ok(-a);
    }
    let bb = spec.b;
    Ok(2.0 * (-(bb * (a / 2.0).sin() + (b / 2.0).sin())).atan2(bb * (a / 2.0).cos() + (b / 2.0).cos()))
}

/// The same direction from the sine/cosine form.
pub fn junction_tangent_sc(spec: &BiarcSpec) -> Result<f64> {
    contact_parts(spec)?;
    let l = &spec.lense;
    let (a, b, w) = (l.alpha, l.beta, l.omega());
    if spec.b.is_infinite() {
        return Ok(-a);
    }
    let bb = spec.b;
    let s = -(bb * bb * a.sin() + 2.0 * bb * w.sin() + b.sin());
    let c = bb * bb * a.cos() + 2.0 * bb * w.cos() + b.cos();
    Ok(s.atan2(c))
}

/// Parameter of the unique biarc through `p`. Infinity is returned as `+inf`.
pub fn b_through_point(lense: &LenseSpec, p: Point) -> Result<f64> {
    lense.check()?;
    let (x, y) = (p.x, p.y);
    let u = x + 1.0;
    let v = x - 1.0;
    let r1 = u * u + y * y;
    let r2 = v * v + y * y;
    if r1.sqrt() < 1e-9 || r2.sqrt() < 1e-9 {
        return Err(Error::PolePoint);
    }
    let (sa, ca) = lense.alpha.sin_cos();
    let (sb, cb) = lense.beta.sin_cos();
    let so = lense.omega().sin();
    // 1 - x^2 - y^2 expanded about each pole
    let m1 = 2.0 * u - u * u - y * y;
    let m2 = -2.0 * v - v * v - y * y;
    let from_start = || so * r1 / (m1 * sa - 2.0 * y * ca);
    let from_end = || (m2 * sb + 2.0 * y * cb) / (so * r2);
    let cg = circle_side(p, &lense.gamma_circle());
    let b = if cg.abs() < 1e-9 {
        let (b1, b2) = (from_start(), from_end());
        match (b1.is_finite(), b2.is_finite()) {
            (true, true) => 0.5 * (b1 + b2),
            (true, false) => b1,
            _ => b2,
        }
    } else if cg * so <= 0.0 {
        from_start()
    } else {
        from_end()
    };
    Ok(if b.is_infinite() || b.is_nan() { f64::INFINITY } else { b })
}

/// Parameter of the discontinuous biarc (one curvature zero).
pub fn b_star(lense: &LenseSpec) -> Result<f64> {
    lense.check()?;
    let (a, b) = (lense.alpha, lense.beta);
    let so = lense.omega().sin();
    if a.abs() >= b.abs() {
        let sa = a.sin();
        Ok(if sa == 0.0 { f64::INFINITY } else { -so / sa })
    } else {
        Ok(-b.sin() / so)
    }
}

/// Turning along curvature `k` from tangent `from` to `to`.
fn turning(from: f64, to: f64, k: f64) -> f64 {
    crate::chain::signed_turning(from, to, k)
}

/// Arclength of B(b) over the unit half-chord.
pub fn biarc_length(spec: &BiarcSpec) -> Result<f64> {
    let chain = build_biarc(spec)?;
    Ok(chain.total_length())
}

/// The two-arc path A -> T -> B. `b = 0` and `b = inf` give the single arcs
/// `A(-beta)` and `A(alpha)`.
pub fn build_biarc(spec: &BiarcSpec) -> Result<MultiArcCurve> {
    let (k1, k2) = biarc_curvatures(spec)?;
    let l = &spec.lense;
    if spec.b.is_infinite() {
        let e = chord_arc(l.alpha);
        return Ok(MultiArcCurve::new(vec![Segment {
            start: e,
            length: chord_arc_length(l.alpha),
        }]));
    }
    if spec.b == 0.0 {
        let e = chord_arc(-l.beta);
        return Ok(MultiArcCurve::new(vec![Segment {
            start: e,
            length: chord_arc_length(-l.beta),
        }]));
    }
    let t = contact_point(spec)?;
    let tau0 = junction_tangent(spec)?;
    let a = CurvatureElement::new(-1.0, 0.0, l.alpha, k1);
    let first = segment_to(a, t, tau0);
    let tau_t = l.alpha + turning(l.alpha, tau0, k1);
    let second = segment_to(CurvatureElement::at(t, tau_t, k2), Point::new(1.0, 0.0), l.beta);
    Ok(MultiArcCurve::new(vec![first, second]))
}

/// Inscribed angle of `p` over the chord: `p` lies on `A(xi(p))`.
pub fn inscribed_angle(p: Point) -> f64 {
    let a = (p.y).atan2(p.x + 1.0);
    let b = (-p.y).atan2(1.0 - p.x);
    canonicalize(a - b)
}

/// Open lense membership.
pub fn in_lense(lense: &LenseSpec, p: Point) -> bool {
    if lense.is_degenerate() {
        return false;
    }
    if p.dist(Point::new(-1.0, 0.0)) < 1e-12 || p.dist(Point::new(1.0, 0.0)) < 1e-12 {
        return false;
    }
    let xi = inscribed_angle(p);
    let (lo, hi) = (lense.alpha.min(-lense.beta), lense.alpha.max(-lense.beta));
    lo < xi && xi < hi
}

/// Closed lense membership with slack, poles included.
pub fn in_lense_closed(lense: &LenseSpec, p: Point, slack: f64) -> bool {
    if p.dist(Point::new(-1.0, 0.0)) < 1e-12 || p.dist(Point::new(1.0, 0.0)) < 1e-12 {
        return true;
    }
    let xi = inscribed_angle(p);
    let (lo, hi) = (lense.alpha.min(-lense.beta), lense.alpha.max(-lense.beta));
    lo - slack <= xi && xi <= hi + slack
}

/// Parameters of the two biarcs bounding the bilense.
pub fn bilense_bounds(ends: &NormalizedEnds) -> Result<(f64, f64)> {
    let lense = LenseSpec::from(ends);
    lense.check()?;
    let q = q_normalized(ends);
    if q >= 0.0 || is_tangent(q, ends.kappa1, ends.kappa2, TANGENCY_EPS) {
        return Err(Error::NotASpiralPair { q });
    }
    let so = ends.omega().sin();
    let b1 = -so / (ends.kappa1 + ends.alpha.sin());
    let b2 = (ends.kappa2 - ends.beta.sin()) / so;
    Ok((b1, b2))
}

/// Open bilense membership.
pub fn in_bilense(ends: &NormalizedEnds, p: Point) -> Result<bool> {
    let (b1, b2) = bilense_bounds(ends)?;
    let b = match b_through_point(&LenseSpec::from(ends), p) {
        Ok(b) => b,
        Err(Error::PolePoint) => return Ok(false),
        Err(e) => return Err(e),
    };
    let (lo, hi) = (b1.min(b2), b1.max(b2));
    Ok(lo < b && b < hi && in_lense(&LenseSpec::from(ends), p))
}

/// Closed bilense membership with a relative slack on `b`.
pub fn in_bilense_closed(ends: &NormalizedEnds, p: Point, slack: f64) -> Result<bool> {
    let (b1, b2) = bilense_bounds(ends)?;
    if p.dist(Point::new(-1.0, 0.0)) < 1e-9 || p.dist(Point::new(1.0, 0.0)) < 1e-9 {
        return Ok(true);
    }
    let b = b_through_point(&LenseSpec::from(ends), p)?;
    let (lo, hi) = (b1.min(b2), b1.max(b2));
    Ok(lo * (1.0 - slack) - slack <= b && b <= hi * (1.0 + slack) + slack)
}

/// Normalized end data of B(b).
pub fn biarc_ends(spec: &BiarcSpec) -> Result<NormalizedEnds> {
    let (k1, k2) = biarc_curvatures(spec)?;
    Ok(NormalizedEnds::new(spec.lense.alpha, spec.lense.beta, k1, k2))
}
