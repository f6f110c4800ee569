//! Existence tests and three-arc synthesis of spirals joining two curvature
//! elements.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::biarc::{build_biarc, BiarcSpec};
use crate::chain::{MultiArcCurve, Segment};
use crate::error::{Error, Reason, Result};
use crate::geometry::{
    arc_length_to, canonicalize, invert_element, is_tangent, normalize_pair, q_invariant, q_normalized,
    CurvatureElement, NormalizedEnds, Point, Similarity, TANGENCY_EPS,
};
use crate::vogt::{short_bounds_check, vogt_sign, VogtSign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    UniqueBiarc,
    SpiralFamily,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExistenceVerdict {
    pub status: Status,
    #[serde(rename = "Q")]
    pub q_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<Reason>,
}

impl ExistenceVerdict {
    fn none(q: f64, reason: Reason) -> Self {
        ExistenceVerdict {
            status: Status::None,
            q_value: q,
            reason: Some(reason),
        }
    }

    fn found(status: Status, q: f64) -> Self {
        ExistenceVerdict {
            status,
            q_value: q,
            reason: None,
        }
    }
}

/// Is there a short spiral (or the unique biarc) with these end data?
pub fn exists_short(ends: &NormalizedEnds) -> ExistenceVerdict {
    let q = q_normalized(ends);
    if vogt_sign(ends.alpha, ends.beta, ends.kappa1, ends.kappa2) == VogtSign::Circular {
        return ExistenceVerdict::none(q, Reason::CircularCoincidence);
    }
    if !short_bounds_check(ends) {
        return ExistenceVerdict::none(q, Reason::VogtSign);
    }
    if is_tangent(q, ends.kappa1, ends.kappa2, TANGENCY_EPS) {
        ExistenceVerdict::found(Status::UniqueBiarc, q)
    } else if q < 0.0 {
        ExistenceVerdict::found(Status::SpiralFamily, q)
    } else {
        ExistenceVerdict::none(q, Reason::QPositive)
    }
}

/// Is there a non-biarc spiral of any length joining the two elements?
pub fn exists_any(a: &CurvatureElement, b: &CurvatureElement) -> Result<ExistenceVerdict> {
    let (ends, _) = normalize_pair(a, b)?;
    let q = q_normalized(&ends);
    if q < 0.0 && !is_tangent(q, ends.kappa1, ends.kappa2, TANGENCY_EPS) {
        Ok(ExistenceVerdict::found(Status::SpiralFamily, q))
    } else {
        Ok(ExistenceVerdict::none(q, Reason::QPositive))
    }
}

/// Inversion in a circle, or a reflection in a line.
#[derive(Debug, Clone, Copy)]
enum CircleMap {
    Identity,
    Invert(CurvatureElement),
    Reflect(Similarity),
}

impl CircleMap {
    fn element(&self, e: &CurvatureElement) -> Result<CurvatureElement> {
        match self {
            CircleMap::Identity => Ok(*e),
            CircleMap::Invert(k0) => invert_element(e, k0),
            CircleMap::Reflect(s) => Ok(s.apply_element(e)),
        }
    }

    fn point(&self, p: Point) -> Result<Point> {
        self.element(&CurvatureElement::at(p, 0.0, 0.0)).map(|e| e.point())
    }

    /// Maps a chain; each image segment runs forward along its image circle
    /// from the image start to the image of the segment end.
    fn chain(&self, c: &MultiArcCurve) -> Result<MultiArcCurve> {
        let mut out = Vec::with_capacity(c.segments.len());
        for seg in &c.segments {
            let start = self.element(&seg.start)?;
            let end = self.point(seg.end().point())?;
            let length = arc_length_to(&start, end);
            out.push(Segment { start, length });
        }
        Ok(MultiArcCurve::new(out))
    }
}

fn apply_similarity(sim: &Similarity, c: &MultiArcCurve) -> MultiArcCurve {
    MultiArcCurve::new(
        c.segments
            .iter()
            .map(|s| Segment {
                start: sim.apply_element(&s.start),
                length: s.length * sim.scale,
            })
            .collect(),
    )
}

fn circle_center(e: &CurvatureElement) -> Complex64 {
    e.center().expect("curved element").z()
}

/// Biarc parameter of tangent end data, from the better-conditioned side.
fn biarc_parameter(ends: &NormalizedEnds) -> f64 {
    let so = ends.omega().sin();
    let d1 = ends.kappa1 + ends.alpha.sin();
    let d2 = ends.kappa2 - ends.beta.sin();
    if d1.abs() >= so.abs() {
        -so / d1
    } else {
        d2 / so
    }
}

/// Three-arc short spiral (or the biarc when Q = 0) in the normalized frame.
pub fn construct_short(ends: &NormalizedEnds) -> Result<MultiArcCurve> {
    let v = exists_short(ends);
    match v.status {
        Status::None => return Err(Error::NoSpiralExists(v.reason.unwrap_or(Reason::QPositive))),
        Status::UniqueBiarc => {
            return build_biarc(&BiarcSpec::new(ends.alpha, ends.beta, biarc_parameter(ends)));
        }
        Status::SpiralFamily => {}
    }
    if ends.kappa2 < ends.kappa1 {
        let mirror = Similarity::mirror_x();
        let c = construct_increasing(&ends.mirrored())?;
        return Ok(apply_similarity(&mirror, &c));
    }
    construct_increasing(ends)
}

/// Inversion in A(gamma/2) makes the lense symmetric; for gamma = 0 it
/// degenerates to the reflection in the chord.
fn symmetrizing_map(gamma: f64) -> CircleMap {
    if gamma.abs() < 1e-9 {
        CircleMap::Reflect(Similarity::mirror_x())
    } else {
        CircleMap::Invert(CurvatureElement::new(-1.0, 0.0, gamma / 2.0, -(gamma / 2.0).sin()))
    }
}

/// End data after the symmetrizing map. The poles stay fixed and both end
/// tangents become `-omega`.
pub fn symmetrized_ends(e: &NormalizedEnds) -> Result<NormalizedEnds> {
    let map = symmetrizing_map(e.gamma());
    let a = map.element(&e.start())?;
    let b = map.element(&e.end())?;
    Ok(NormalizedEnds::new(canonicalize(a.tau), canonicalize(b.tau), a.k, b.k))
}

fn construct_increasing(e: &NormalizedEnds) -> Result<MultiArcCurve> {
    let w = e.omega();
    let g = e.gamma();
    if w.sin().abs() < 1e-15 {
        return Err(Error::DegenerateLense);
    }
    let map = symmetrizing_map(g);
    let k1 = -e.kappa1 - e.alpha.sin() + w.sin();
    let k2 = -e.kappa2 + e.beta.sin() - w.sin();
    if !(k1 > 0.0 && k2 < 0.0) {
        return Err(Error::Internal(format!(
            "symmetrized curvatures out of order: {k1} {k2}"
        )));
    }
    let a = CurvatureElement::new(-1.0, 0.0, -w, k1);
    let b = CurvatureElement::new(1.0, 0.0, -w, k2);
    let (c1, c2) = (circle_center(&a), circle_center(&b));
    let d = c2 - c1;
    let ratio = (1.0 / k1 - 1.0 / k2) / d.norm();
    if !(ratio < 1.0) {
        return Err(Error::Internal("symmetrized circles overlap".into()));
    }
    // Internal common tangent, traversed from the first circle to the second.
    let lambda = d.arg() + ratio.asin();
    let normal = Complex64::new(lambda.sin(), -lambda.cos());
    let t1 = c1 + normal / k1;
    let t2 = c2 + normal / k2;
    let line = CurvatureElement::new(t1.re, t1.im, lambda, 0.0);
    let sym = MultiArcCurve::new(vec![
        Segment {
            start: a,
            length: arc_length_to(&a, t1.into()),
        },
        Segment {
            start: line,
            length: (t2 - t1).norm(),
        },
        Segment {
            start: CurvatureElement::new(t2.re, t2.im, lambda, k2),
            length: arc_length_to(&CurvatureElement::new(t2.re, t2.im, lambda, k2), Point::new(1.0, 0.0)),
        },
    ]);
    let mut out = map.chain(&sym)?;
    out.segments[0].start = e.start();
    finish(out, &e.start(), &e.end(), 1e-9)
}

/// Rewinds tangents so they continue each other and validates the ends.
fn finish(
    mut c: MultiArcCurve,
    start: &CurvatureElement,
    end: &CurvatureElement,
    tol: f64,
) -> Result<MultiArcCurve> {
    c.segments[0].start.tau = start.tau;
    for i in 1..c.segments.len() {
        let prev = c.segments[i - 1].end().tau;
        let t = &mut c.segments[i].start.tau;
        *t = prev + canonicalize(*t - prev);
    }
    let scale = 1.0 + start.point().dist(end.point());
    let got = c.end();
    let pos = got.point().dist(end.point()) / scale;
    let ang = canonicalize(got.tau - end.tau).abs();
    let defect = c.g1_defect() / scale;
    if pos > tol || ang > tol || defect > tol {
        return Err(Error::Internal(format!(
            "synthesized chain misses its end data: position {pos:e}, angle {ang:e}, junction {defect:e}"
        )));
    }
    Ok(c)
}

/// Inversion circle (as a curvature element) that maps both circles to
/// concentric ones. Both limiting points qualify; the one listed first is
/// the one nearer the midpoint of the two element points.
pub fn concentricizing_inversion(a: &CurvatureElement, b: &CurvatureElement) -> Result<CurvatureElement> {
    let q = q_invariant(a, b);
    if q >= 0.0 {
        return Err(Error::NotDisjoint { q });
    }
    let pts = limiting_points(a, b)?;
    let p = match pts {
        None => {
            let c = circle_center(a);
            return Ok(CurvatureElement::new(c.re + 1.0, c.im, FRAC_PI_2, 1.0));
        }
        Some((p, _)) => p,
    };
    let r = (a.z() - p).norm();
    Ok(CurvatureElement::new(p.re + r, p.im, FRAC_PI_2, 1.0 / r))
}

/// Limiting points of the pencil spanned by two non-meeting circles, nearer
/// to the element midpoint first. `None` for concentric circles.
fn limiting_points(a: &CurvatureElement, b: &CurvatureElement) -> Result<Option<(Complex64, Complex64)>> {
    let mid = (a.z() + b.z()) / 2.0;
    let (p, q) = match (a.center(), b.center()) {
        (Some(ca), Some(cb)) => {
            let (ca, cb) = (ca.z(), cb.z());
            let d = (cb - ca).norm();
            let (r1, r2) = (a.radius(), b.radius());
            if d <= 1e-12 * (r1 + r2) {
                return Ok(None);
            }
            let u = (cb - ca) / d;
            let x = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
            let h2 = x * x - r1 * r1;
            if h2 <= 0.0 {
                return Err(Error::NotDisjoint { q: q_invariant(a, b) });
            }
            let h = h2.sqrt();
            (ca + u * (x - h), ca + u * (x + h))
        }
        (None, Some(_)) => line_limits(a, b)?,
        (Some(_), None) => line_limits(b, a)?,
        (None, None) => return Err(Error::NotDisjoint { q: q_invariant(a, b) }),
    };
    if (p - mid).norm() <= (q - mid).norm() {
        Ok(Some((p, q)))
    } else {
        Ok(Some((q, p)))
    }
}

fn line_limits(line: &CurvatureElement, circle: &CurvatureElement) -> Result<(Complex64, Complex64)> {
    let c = circle_center(circle);
    let u = line.dir();
    let w = c - line.z();
    let foot = line.z() + u * (w.re * u.re + w.im * u.im);
    let h = (c - foot).norm();
    let r = circle.radius();
    if h <= r {
        return Err(Error::NotDisjoint { q: q_invariant(line, circle) });
    }
    let n = (c - foot) / h;
    let t = (h * h - r * r).sqrt();
    Ok((foot + n * t, foot - n * t))
}

/// Concentric-frame chain: arc on the first circle, a half turn on the circle
/// of the harmonic-mean curvature, arc on the second circle.
fn concentric_chain(a: &CurvatureElement, b: &CurvatureElement, split: f64) -> Result<MultiArcCurve> {
    let (ca, cb) = (circle_center(a), circle_center(b));
    let center = (ca + cb) / 2.0;
    let sigma = a.k.signum();
    if a.k * b.k <= 0.0 {
        return Err(Error::Internal("concentric images have opposite orientation".into()));
    }
    let (r1, r2) = (a.radius(), b.radius());
    let ang_a = (a.z() - center).arg();
    let ang_b = (b.z() - center).arg();
    let total = (sigma * (ang_b - ang_a - PI)).rem_euclid(TAU);
    let th1 = total * split;
    let th3 = total - th1;
    let u = -Complex64::from_polar(1.0, ang_a + sigma * th1);
    let t1 = center - u * r1;
    let t2 = center + u * r2;
    let k0 = 2.0 * a.k * b.k / (a.k + b.k);
    let tau_t1 = (Complex64::i() * a.k * (t1 - center)).arg();
    let mid = CurvatureElement::new(t1.re, t1.im, tau_t1, k0);
    let tau_t2 = (Complex64::i() * b.k * (t2 - center)).arg();
    let last = CurvatureElement::new(t2.re, t2.im, tau_t2, b.k);
    Ok(MultiArcCurve::new(vec![
        Segment {
            start: *a,
            length: th1 * r1,
        },
        Segment {
            start: mid,
            length: PI / k0.abs(),
        },
        Segment {
            start: last,
            length: th3 * r2,
        },
    ]))
}

/// Smallest distance from `p` to the chain, by dense sampling.
fn clearance(c: &MultiArcCurve, p: Complex64) -> f64 {
    c.points(256)
        .iter()
        .map(|q| (q.z() - p).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Three-arc spiral joining two elements whose circles do not meet (Q < 0).
pub fn construct_any(a: &CurvatureElement, b: &CurvatureElement) -> Result<MultiArcCurve> {
    let v = exists_any(a, b)?;
    if v.status != Status::SpiralFamily {
        return Err(Error::NoSpiralExists(Reason::QPositive));
    }
    let (ends, sim) = normalize_pair(a, b)?;
    let (s, e) = (ends.start(), ends.end());
    let c = construct_normalized_any(&s, &e)?;
    let back = sim.inverse();
    let mut out = apply_similarity(&back, &c);
    out.segments[0].start = *a;
    finish(out, a, b, 1e-8)
}

fn construct_normalized_any(s: &CurvatureElement, e: &CurvatureElement) -> Result<MultiArcCurve> {
    let splits = [0.5, 0.25, 0.75, 0.125, 0.875, 0.375, 0.625, 0.0625, 0.9375];
    let limits = limiting_points(s, e)?;
    let centers: Vec<Option<Complex64>> = match limits {
        None => vec![None],
        Some((p, q)) => vec![Some(p), Some(q)],
    };
    let mut last_err = Error::Internal("no inversion center avoids the chain".into());
    for center in centers {
        let map = match center {
            None => CircleMap::Identity,
            Some(p) => {
                let r = (s.z() - p).norm();
                CircleMap::Invert(CurvatureElement::new(p.re + r, p.im, FRAC_PI_2, 1.0 / r))
            }
        };
        let (is, ie) = (map.element(s)?, map.element(e)?);
        if is.k == 0.0 || ie.k == 0.0 {
            continue;
        }
        for split in splits {
            let chain = match concentric_chain(&is, &ie, split) {
                Ok(c) => c,
                Err(err) => {
                    last_err = err;
                    continue;
                }
            };
            if let Some(p) = center {
                let scale = is.radius().max(ie.radius());
                if clearance(&chain, p) < 1e-6 * scale {
                    continue;
                }
            }
            let back = match map.chain(&chain) {
                Ok(c) => c,
                Err(err) => {
                    last_err = err;
                    continue;
                }
            };
            let mut back = back;
            back.segments[0].start = *s;
            match finish(back, s, e, 1e-9) {
                Ok(c) => return Ok(c),
                Err(err) => last_err = err,
            }
        }
    }
    Err(last_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biarc::biarc_ends;

    #[test]
    fn verdict_examples() {
        let v = exists_short(&NormalizedEnds::new(0.2, 0.2, -1.0, 1.0));
        assert_eq!(v.status, Status::SpiralFamily);
        assert!((v.q_value + 0.602_661_338_409_877_6).abs() < 1e-12);
        let v = exists_short(&NormalizedEnds::new(0.5, -0.5, 0.3, 0.3));
        assert_eq!(v.status, Status::None);
        let e = biarc_ends(&BiarcSpec::new(0.4, 0.9, 1.7)).unwrap();
        assert_eq!(exists_short(&e).status, Status::UniqueBiarc);
        let v = exists_short(&NormalizedEnds::new(-0.5, 0.2, -1.0, 1.0));
        assert_eq!(v.reason, Some(Reason::VogtSign));
    }

    #[test]
    fn any_verdicts() {
        // crossing circles
        let a = CurvatureElement::new(2f64.sqrt(), 0.0, FRAC_PI_2, 1.0 / 2f64.sqrt());
        let b = CurvatureElement::new(2.0 - 2f64.sqrt(), 0.0, -FRAC_PI_2, 1.0 / 2f64.sqrt());
        assert_eq!(exists_any(&a, &b).unwrap().status, Status::None);
        // tangent circles
        let a = CurvatureElement::new(0.0, 0.0, 0.0, 1.0);
        let b = CurvatureElement::new(0.0, 2.0, PI, 1.0);
        let v = exists_any(&a, &evaluate_on(&b)).unwrap();
        assert_eq!(v.status, Status::None);
        // nested circles, same orientation
        let a = CurvatureElement::new(0.0, -1.0, 0.0, 1.0);
        let b = CurvatureElement::new(0.0, -3.0, 0.0, 1.0 / 3.0);
        assert_eq!(exists_any(&a, &b).unwrap().status, Status::SpiralFamily);
    }

    fn evaluate_on(e: &CurvatureElement) -> CurvatureElement {
        crate::geometry::evaluate_arc(e, 0.3)
    }

    fn check_sound(c: &MultiArcCurve, ends: &NormalizedEnds) {
        let s = c.start();
        assert!(s.point().dist(Point::new(-1.0, 0.0)) < 1e-12);
        let e = c.end();
        assert!(e.point().dist(Point::new(1.0, 0.0)) < 1e-9, "{e:?}");
        assert!(canonicalize(e.tau - ends.beta).abs() < 1e-9);
        assert!((c.segments.last().unwrap().start.k - ends.kappa2).abs() < 1e-9 * (1.0 + ends.kappa2.abs()));
        assert!(c.is_g1(1e-9));
        let dir = (ends.kappa2 - ends.kappa1).signum();
        assert!(c.strictly_monotone(dir), "{:?}", c.curvatures());
        let (far, adj) = c.pairwise_q();
        assert!(far <= 1e-9 && adj <= 1e-9);
    }

    #[test]
    fn short_construction() {
        for ends in [
            NormalizedEnds::new(0.2, 0.2, -1.0, 1.0),
            NormalizedEnds::new(0.9, -0.1, -1.2, 0.5),
            NormalizedEnds::new(-0.2, -0.2, 1.0, -1.0),
            NormalizedEnds::new(2.5, 1.0, -3.0, 4.0),
        ] {
            let c = construct_short(&ends).unwrap();
            assert_eq!(c.segments.len(), 3);
            check_sound(&c, &ends);
            assert!(c.is_short().unwrap());
        }
    }

    #[test]
    fn short_construction_symmetric() {
        let ends = NormalizedEnds::new(0.3, 0.3, -0.8, 0.8);
        let c = construct_short(&ends).unwrap();
        let n = 400;
        let len = c.total_length();
        for i in 0..=n {
            let s = len * i as f64 / n as f64;
            let p = c.at(s).point();
            let q = c.at(len - s).point();
            assert!((p.x + q.x).abs() < 1e-9 && (p.y + q.y).abs() < 1e-9);
        }
    }

    #[test]
    fn short_construction_biarc() {
        let spec = BiarcSpec::new(0.4, 0.9, 1.7);
        let e = biarc_ends(&spec).unwrap();
        let c = construct_short(&e).unwrap();
        let b = build_biarc(&spec).unwrap();
        assert_eq!(c.segments.len(), 2);
        for (x, y) in c.segments.iter().zip(&b.segments) {
            assert!(x.start.point().dist(y.start.point()) < 1e-9);
            assert!((x.length - y.length).abs() < 1e-9);
            assert!((x.start.k - y.start.k).abs() < 1e-9);
        }
    }

    #[test]
    fn no_short_spiral() {
        let e = NormalizedEnds::new(0.2, 0.2, 1.0, -1.0);
        assert!(matches!(construct_short(&e), Err(Error::NoSpiralExists(_))));
    }

    #[test]
    fn inversion_limiting_points() {
        let a = CurvatureElement::new(1.0, 0.0, FRAC_PI_2, 1.0);
        let b = CurvatureElement::new(6.0, 0.0, FRAC_PI_2, 1.0);
        // opposite orientations make the pair compatible
        let b = b.reversed();
        let k0 = concentricizing_inversion(&a, &b).unwrap();
        let ia = invert_element(&a, &k0).unwrap();
        let ib = invert_element(&b, &k0).unwrap();
        let d = ia.center().unwrap().dist(ib.center().unwrap());
        assert!(d < 1e-8 * ia.radius().min(ib.radius()), "{d}");
        // line and circle
        let l = CurvatureElement::new(0.0, 0.0, 0.0, 0.0);
        let c = CurvatureElement::new(0.0, 3.0, PI, 1.0);
        assert!(q_invariant(&l, &c) < 0.0);
        let k0 = concentricizing_inversion(&l, &c).unwrap();
        let il = invert_element(&l, &k0).unwrap();
        let ic = invert_element(&c, &k0).unwrap();
        let d = il.center().unwrap().dist(ic.center().unwrap());
        assert!(d < 1e-8 * il.radius().min(ic.radius()), "{d}");
    }

    #[test]
    fn concentric_input() {
        let a = CurvatureElement::new(1.0, 0.0, FRAC_PI_2, 1.0);
        let b = CurvatureElement::new(0.0, 3.0, PI, 1.0 / 3.0);
        let c = construct_any(&a, &b).unwrap();
        // harmonic mean of 1 and 1/3
        assert!((c.segments[1].start.k - 0.5).abs() < 1e-12);
        assert!((c.end().point().dist(b.point())) < 1e-8);
    }

    #[test]
    fn any_construction() {
        let a = CurvatureElement::new(0.3, -0.2, 0.4, 0.9);
        let b = CurvatureElement::new(4.0, 1.0, 2.0, -0.3);
        if exists_any(&a, &b).unwrap().status == Status::SpiralFamily {
            let c = construct_any(&a, &b).unwrap();
            assert!(c.end().point().dist(b.point()) < 1e-8);
        }
        let a = CurvatureElement::new(0.0, 0.0, 0.0, 0.0);
        let b = CurvatureElement::new(0.0, 3.0, PI, 1.0);
        let b = crate::geometry::evaluate_arc(&b, 1.0);
        let c = construct_any(&a, &b).unwrap();
        assert!(c.end().point().dist(b.point()) < 1e-8);
        assert!(canonicalize(c.end().tau - b.tau).abs() < 1e-8);
    }
}
