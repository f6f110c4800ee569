//! Interpolation envelope: circular arcs through consecutive points, one lense
//! per chord, and membership in their union.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::biarc::{in_lense_closed, LenseSpec};
use crate::error::{Error, Result};
use crate::geometry::{canonicalize, normalize_pair, CurvatureElement, Point, Similarity};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpolationData {
    pub points: Vec<Point>,
    pub tau_start: f64,
    pub tau_end: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Increasing,
    Decreasing,
    Constant,
    NotMonotone,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChordLense {
    pub lense: LenseSpec,
    /// Takes the plane to the frame where this chord is [-1, 1].
    pub to_chord: Similarity,
    pub half_chord: f64,
    /// Distance between the two boundary arcs on the chord bisector.
    pub width: f64,
    pub very_short: bool,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LenseChain {
    pub lenses: Vec<ChordLense>,
    pub curvatures: Vec<f64>,
    pub trend: Trend,
}

impl LenseChain {
    pub fn max_width(&self) -> f64 {
        self.lenses.iter().map(|l| l.width).fold(0.0, f64::max)
    }

    pub fn all_very_short(&self) -> bool {
        self.lenses.iter().all(|l| l.very_short)
    }
}

fn cross(a: Point, b: Point) -> f64 {
    a.x * b.y - a.y * b.x
}

fn sub(a: Point, b: Point) -> Point {
    Point::new(a.x - b.x, a.y - b.y)
}

fn arg(p: Point) -> f64 {
    p.y.atan2(p.x)
}

fn validate(data: &InterpolationData) -> Result<()> {
    if data.points.len() < 3 {
        return Err(Error::InvalidInput("need at least 3 points".into()));
    }
    if !(data.tau_start.is_finite() && data.tau_end.is_finite()) {
        return Err(Error::InvalidInput("end tangents must be finite".into()));
    }
    for (i, p) in data.points.iter().enumerate() {
        if !(p.x.is_finite() && p.y.is_finite()) {
            return Err(Error::InvalidInput(format!("point {i} is not finite")));
        }
    }
    for (i, w) in data.points.windows(2).enumerate() {
        if w[0] == w[1] {
            return Err(Error::DegenerateTriple { index: i });
        }
    }
    Ok(())
}

/// Arcs A_1..A_n as curvature elements at P_1..P_n. Interior arcs are
/// circumcircles of three consecutive points, directed along the point order.
pub fn arcs_through_points(data: &InterpolationData) -> Result<Vec<CurvatureElement>> {
    validate(data)?;
    let p = &data.points;
    let n = p.len();
    let mut arcs = Vec::with_capacity(n);

    let d = sub(p[1], p[0]);
    let xi = data.tau_start - arg(d);
    arcs.push(CurvatureElement::at(p[0], data.tau_start, -2.0 * xi.sin() / d.x.hypot(d.y)));

    for i in 1..n - 1 {
        let (a, m, b) = (p[i - 1], p[i], p[i + 1]);
        let (u, v, w) = (sub(m, a), sub(b, m), sub(b, a));
        let den = u.x.hypot(u.y) * v.x.hypot(v.y) * w.x.hypot(w.y);
        if den == 0.0 {
            return Err(Error::DegenerateTriple { index: i });
        }
        let k = 2.0 * cross(u, v) / den;
        let tau = canonicalize(arg(u) + arg(v) - arg(w));
        arcs.push(CurvatureElement::at(m, tau, k));
    }

    let d = sub(p[n - 1], p[n - 2]);
    let beta = data.tau_end - arg(d);
    arcs.push(CurvatureElement::at(p[n - 1], data.tau_end, 2.0 * beta.sin() / d.x.hypot(d.y)));
    Ok(arcs)
}

fn trend(ks: &[f64]) -> Trend {
    let scale = ks.iter().fold(0.0f64, |m, k| m.max(k.abs()));
    let eps = 1e-12 * (1.0 + scale);
    let (mut up, mut down) = (false, false);
    for w in ks.windows(2) {
        let d = w[1] - w[0];
        if d > eps {
            up = true;
        } else if d < -eps {
            down = true;
        }
    }
    match (up, down) {
        (true, true) => Trend::NotMonotone,
        (true, false) => Trend::Increasing,
        (false, true) => Trend::Decreasing,
        (false, false) => Trend::Constant,
    }
}

/// One lense per chord P_i P_{i+1}, bounded by A_i and A_{i+1}.
pub fn build_lense_chain(data: &InterpolationData) -> Result<LenseChain> {
    let arcs = arcs_through_points(data)?;
    let n = arcs.len();
    let lenses = crate::par::map_range(n - 1, |i| {
        let (a, b) = (&arcs[i], &arcs[i + 1]);
        // A_i leaves P_i at its own tangent; A_{i+1} reaches P_{i+1} at its own.
        let (ends, to_chord) = normalize_pair(a, b)?;
        let lense = LenseSpec::new(ends.alpha, ends.beta);
        let width = ends.c * ((ends.alpha / 2.0).tan() + (ends.beta / 2.0).tan()).abs();
        Ok(ChordLense {
            lense,
            to_chord,
            half_chord: ends.c,
            width,
            very_short: ends.alpha.abs() < FRAC_PI_2 && ends.beta.abs() < FRAC_PI_2,
            degenerate: lense.omega().sin().abs() < 1e-12,
        })
    });
    let lenses = lenses.into_iter().collect::<Result<Vec<_>>>()?;
    let curvatures: Vec<f64> = arcs.iter().map(|a| a.k).collect();
    let trend = trend(&curvatures);
    Ok(LenseChain {
        lenses,
        curvatures,
        trend,
    })
}

/// Closed membership in the union of the chord lenses.
pub fn in_envelope(chain: &LenseChain, p: Point) -> bool {
    chain.lenses.iter().any(|l| {
        let q = l.to_chord.apply_point(p);
        in_lense_closed(&l.lense, q, 1e-12)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clothoid::{clothoid_point, ClothoidSpec};
    use std::f64::consts::PI;

    fn clothoid_data(a: f64, s0: f64, s1: f64, chords: usize) -> InterpolationData {
        let spec = ClothoidSpec::new(a, s0, s1, chords + 1);
        let points = (0..=chords)
            .map(|i| clothoid_point(a, s0 + (s1 - s0) * i as f64 / chords as f64))
            .collect();
        InterpolationData {
            points,
            tau_start: spec.tau(s0),
            tau_end: spec.tau(s1),
        }
    }

    #[test]
    fn collinear_middle_is_straight() {
        let data = InterpolationData {
            points: vec![Point::new(0.0, 0.0), Point::new(1.0, 1.0), Point::new(2.0, 2.0)],
            tau_start: PI / 4.0,
            tau_end: PI / 4.0,
        };
        let arcs = arcs_through_points(&data).unwrap();
        assert_eq!(arcs[1].k, 0.0);
        assert!((arcs[1].tau - PI / 4.0).abs() < 1e-15);
        assert!(arcs[0].k.abs() < 1e-15 && arcs[2].k.abs() < 1e-15);
    }

    #[test]
    fn cocircular_points() {
        let points: Vec<Point> = (0..6)
            .map(|i| {
                let t = 0.3 * i as f64;
                Point::new(t.cos(), t.sin())
            })
            .collect();
        let data = InterpolationData {
            points,
            tau_start: FRAC_PI_2,
            tau_end: FRAC_PI_2 + 1.5,
        };
        let chain = build_lense_chain(&data).unwrap();
        assert!(chain.curvatures.iter().all(|k| (k - 1.0).abs() < 1e-12));
        let arcs = arcs_through_points(&data).unwrap();
        for (i, a) in arcs.iter().enumerate() {
            let c = a.center().unwrap();
            assert!(c.x.abs() < 1e-12 && c.y.abs() < 1e-12, "arc {i}");
        }
        assert!(chain.lenses.iter().all(|l| l.degenerate && l.width < 1e-12));
        assert_eq!(chain.trend, Trend::Constant);
    }

    #[test]
    fn minimal_input_has_two_lenses() {
        let data = clothoid_data(1.0, 0.0, 1.0, 2);
        assert_eq!(build_lense_chain(&data).unwrap().lenses.len(), 2);
    }

    #[test]
    fn coincident_points_rejected() {
        let data = InterpolationData {
            points: vec![Point::new(0.0, 0.0), Point::new(0.0, 0.0), Point::new(1.0, 0.0)],
            tau_start: 0.0,
            tau_end: 0.0,
        };
        assert!(matches!(arcs_through_points(&data), Err(Error::DegenerateTriple { .. })));
    }

    #[test]
    fn clothoid_curvatures_monotone() {
        let data = clothoid_data(1.0, 0.0, 3.0, 10);
        let chain = build_lense_chain(&data).unwrap();
        assert_eq!(chain.trend, Trend::Increasing);
        assert!(chain.curvatures.windows(2).all(|w| w[1] > w[0]));
        assert!(chain.all_very_short());
    }

    #[test]
    fn sinusoid_not_monotone() {
        let points: Vec<Point> = (0..=20)
            .map(|i| {
                let x = 0.5 * i as f64;
                Point::new(x, x.sin())
            })
            .collect();
        let data = InterpolationData {
            points,
            tau_start: (1.0f64).atan2(1.0),
            tau_end: (10.0f64).cos().atan(),
        };
        assert_eq!(build_lense_chain(&data).unwrap().trend, Trend::NotMonotone);
    }

    #[test]
    fn coverage_and_exclusion() {
        let (a, s0, s1, m) = (1.0, 0.0, 3.0, 10);
        let data = clothoid_data(a, s0, s1, m);
        let chain = build_lense_chain(&data).unwrap();
        for j in 0..=2000 {
            let p = clothoid_point(a, s0 + (s1 - s0) * j as f64 / 2000.0);
            assert!(in_envelope(&chain, p), "sample {j}");
        }
        for p in &data.points {
            assert!(in_envelope(&chain, *p));
        }
        // push a mid-chord point off the curve by ten lense widths
        let spec = ClothoidSpec::new(a, s0, s1, 2);
        let s = s0 + (s1 - s0) * 4.5 / m as f64;
        let p = clothoid_point(a, s);
        let n = spec.tau(s) + FRAC_PI_2;
        let off = 10.0 * chain.lenses[4].width;
        for sign in [1.0, -1.0] {
            let q = Point::new(p.x + sign * off * n.cos(), p.y + sign * off * n.sin());
            assert!(!in_envelope(&chain, q));
        }
    }

    #[test]
    fn width_is_cubic_in_h() {
        let levels = [8usize, 16, 32, 64];
        let w: Vec<f64> = levels
            .iter()
            .map(|&m| build_lense_chain(&clothoid_data(1.0, 0.5, 2.5, m)).unwrap().max_width())
            .collect();
        let order = (w[0] / w[3]).ln() / 8f64.ln();
        assert!((order - 3.0).abs() < 0.3, "order {order}");
        assert!((w[2] / w[3] - 8.0).abs() < 0.8);
    }
}
