//! Sampled spirals: cumulative boundary angles, winding,
//! chord-complement crossings, tangent reversals and the bipolar angle delta.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{canonicalize, canonicalize_low, normalize_pair, CurvatureElement, NormalizedEnds, Point};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub tau: f64,
    pub k_left: f64,
    pub k_right: f64,
}

impl Sample {
    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }

    pub fn element(&self) -> CurvatureElement {
        CurvatureElement::new(self.x, self.y, self.tau, self.k_right)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotone {
    Increasing,
    Decreasing,
    Constant,
}

/// Arclength-ordered samples of a curve of monotone curvature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSpiral {
    samples: Vec<Sample>,
    circular: bool,
    monotone: Monotone,
}

fn coarse(index: usize, detail: impl Into<String>) -> Error {
    Error::ResolutionTooCoarse {
        index,
        detail: detail.into(),
    }
}

/// Picks the representative of `a` closest to `near`.
fn unwrap_near(a: f64, near: f64) -> f64 {
    a + TAU * ((near - a) / TAU).round()
}

impl SampledSpiral {
    pub fn new(samples: Vec<Sample>, circular: bool) -> Result<Self> {
        let n = samples.len();
        if n < 2 {
            return Err(Error::InvalidInput("a sampled spiral needs at least two samples".into()));
        }
        for (i, p) in samples.iter().enumerate() {
            let ok = [p.s, p.x, p.y, p.tau, p.k_left, p.k_right]
                .iter()
                .all(|v| v.is_finite());
            if !ok {
                return Err(Error::InvalidInput(format!("non-finite value in sample {i}")));
            }
        }
        if samples[0].s != 0.0 {
            return Err(Error::InvalidInput("arclength must start at 0".into()));
        }
        for i in 0..n - 1 {
            let (a, b) = (&samples[i], &samples[i + 1]);
            if b.s <= a.s {
                return Err(Error::InvalidInput(format!("arclength not increasing at sample {}", i + 1)));
            }
            if (b.tau - a.tau).abs() >= PI / 2.0 {
                return Err(coarse(i + 1, "tangent step of pi/2 or more"));
            }
            let d = b.point().z() - a.point().z();
            if d.norm() == 0.0 {
                return Err(coarse(i + 1, "repeated point"));
            }
            let mu = d.arg();
            if (mu - a.tau).cos() <= 0.0 || (mu - b.tau).cos() <= 0.0 {
                return Err(coarse(i + 1, "chord leaves the tangent half-plane"));
            }
        }
        let mut merged = Vec::with_capacity(2 * n);
        merged.push(samples[0].k_right);
        for p in &samples[1..n - 1] {
            merged.push(p.k_left);
            merged.push(p.k_right);
        }
        merged.push(samples[n - 1].k_left);
        let tol = |a: f64, b: f64| 1e-12 * (1.0 + a.abs().max(b.abs()));
        let up = merged.windows(2).all(|w| w[1] >= w[0] - tol(w[0], w[1]));
        let down = merged.windows(2).all(|w| w[1] <= w[0] + tol(w[0], w[1]));
        let first = merged[0];
        let last = merged[merged.len() - 1];
        let monotone = if up && last > first {
            Monotone::Increasing
        } else if down && last < first {
            Monotone::Decreasing
        } else if up && down {
            if !circular {
                return Err(Error::InvalidInput(
                    "constant curvature requires the circular flag".into(),
                ));
            }
            Monotone::Constant
        } else {
            return Err(Error::InvalidInput("curvature is not monotone".into()));
        };
        Ok(SampledSpiral {
            samples,
            circular,
            monotone,
        })
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.samples[self.samples.len() - 1].s
    }

    pub fn circular(&self) -> bool {
        self.circular
    }

    pub fn monotone(&self) -> Monotone {
        self.monotone
    }

    pub fn has_inflection(&self) -> bool {
        let first = self.samples[0].k_right;
        let last = self.samples[self.samples.len() - 1].k_left;
        first * last <= 0.0 && !(first == 0.0 && last == 0.0)
    }

    /// End data in the chord frame.
    pub fn ends(&self) -> Result<NormalizedEnds> {
        let a = self.samples[0];
        let b = self.samples[self.samples.len() - 1];
        normalize_pair(
            &CurvatureElement::new(a.x, a.y, a.tau, a.k_right),
            &CurvatureElement::new(b.x, b.y, b.tau, b.k_left),
        )
        .map(|(e, _)| e)
    }

    /// Mirror image in the X axis.
    pub fn mirrored(&self) -> Self {
        let samples: Vec<Sample> = self
            .samples
            .iter()
            .map(|p| Sample {
                s: p.s,
                x: p.x,
                y: -p.y,
                tau: -p.tau,
                k_left: -p.k_left,
                k_right: -p.k_right,
            })
            .collect();
        let monotone = match self.monotone {
            Monotone::Increasing => Monotone::Decreasing,
            Monotone::Decreasing => Monotone::Increasing,
            Monotone::Constant => Monotone::Constant,
        };
        SampledSpiral {
            samples,
            circular: self.circular,
            monotone,
        }
    }

    /// The same curve traversed from the other end.
    pub fn reversed(&self) -> Self {
        let total = self.total_length();
        let samples: Vec<Sample> = self
            .samples
            .iter()
            .rev()
            .map(|p| Sample {
                s: total - p.s,
                x: p.x,
                y: p.y,
                tau: p.tau + PI,
                k_left: -p.k_right,
                k_right: -p.k_left,
            })
            .collect();
        let mut out = SampledSpiral {
            samples,
            circular: self.circular,
            monotone: self.monotone,
        };
        out.samples[0].s = 0.0;
        out
    }

    /// Curvature used to pick the reference point; zero at sign changes.
    fn k_eff(&self, i: usize, u: usize, v: usize) -> f64 {
        let p = &self.samples[i];
        if i == u {
            p.k_right
        } else if i == v {
            p.k_left
        } else if p.k_left * p.k_right <= 0.0 {
            0.0
        } else if p.k_left.abs() < p.k_right.abs() {
            p.k_left
        } else {
            p.k_right
        }
    }

    /// Inflection sample of `[u, v]`, else the sample of least |k|; the middle
    /// of a plateau on ties.
    pub fn reference_index(&self, u: usize, v: usize) -> usize {
        let ks: Vec<f64> = (u..=v).map(|i| self.k_eff(i, u, v).abs()).collect();
        let min = ks.iter().cloned().fold(f64::INFINITY, f64::min);
        let ties: Vec<usize> = ks
            .iter()
            .enumerate()
            .filter(|(_, k)| **k <= min)
            .map(|(i, _)| i + u)
            .collect();
        ties[ties.len() / 2]
    }

    fn span_monotone(&self, u: usize, v: usize) -> Monotone {
        let a = self.samples[u].k_right;
        let b = self.samples[v].k_left;
        if b > a {
            Monotone::Increasing
        } else if b < a {
            Monotone::Decreasing
        } else {
            Monotone::Constant
        }
    }

    fn chord_dir(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (&self.samples[i], &self.samples[j]);
        (b.y - a.y).atan2(b.x - a.x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CumulativeAngles {
    pub alpha_tilde: f64,
    pub beta_tilde: f64,
    pub omega_tilde: f64,
    pub rho: f64,
    pub n1: i64,
    pub n2: i64,
    /// Chord direction tracked continuously from the reference tangent.
    pub chord_direction: f64,
}

/// Cumulative angles over the whole curve.
pub fn cumulative_angles(curve: &SampledSpiral) -> Result<CumulativeAngles> {
    cumulative_angles_span(curve, 0, curve.len() - 1)
}

/// Cumulative angles of the subarc between samples `u` and `v`.
pub fn cumulative_angles_span(curve: &SampledSpiral, u: usize, v: usize) -> Result<CumulativeAngles> {
    if u > v || v >= curve.len() {
        return Err(Error::InvalidInput(format!("bad span [{u}, {v}]")));
    }
    let sm = curve.samples();
    if u == v {
        return Ok(CumulativeAngles {
            alpha_tilde: 0.0,
            beta_tilde: 0.0,
            omega_tilde: 0.0,
            rho: 0.0,
            n1: 0,
            n2: 0,
            chord_direction: sm[u].tau,
        });
    }
    let r = curve.reference_index(u, v);
    let mut mu = sm[r].tau;
    let step = |mu: &mut f64, raw: f64, idx: usize| -> Result<()> {
        let next = unwrap_near(raw, *mu);
        if (next - *mu).abs() >= PI / 2.0 {
            return Err(coarse(idx, "chord direction jumps by pi/2 or more"));
        }
        *mu = next;
        Ok(())
    };
    for j in r + 1..=v {
        step(&mut mu, curve.chord_dir(r, j), j)?;
    }
    for i in (u..r).rev() {
        step(&mut mu, curve.chord_dir(i, v), i)?;
    }
    let alpha_tilde = sm[u].tau - mu;
    let beta_tilde = sm[v].tau - mu;
    let rho = (u..v)
        .map(|i| 0.5 * (sm[i].k_right + sm[i + 1].k_left) * (sm[i + 1].s - sm[i].s))
        .sum();
    let (alpha, beta) = match curve.span_monotone(u, v) {
        Monotone::Decreasing => (canonicalize_low(alpha_tilde), canonicalize_low(beta_tilde)),
        _ => (canonicalize(alpha_tilde), canonicalize(beta_tilde)),
    };
    Ok(CumulativeAngles {
        alpha_tilde,
        beta_tilde,
        omega_tilde: 0.5 * (alpha_tilde + beta_tilde),
        rho,
        n1: ((alpha_tilde - alpha) / TAU).round() as i64,
        n2: ((beta_tilde - beta) / TAU).round() as i64,
        chord_direction: mu,
    })
}

/// Vogt's angle by integrating its partial derivatives along the path that
/// first extends the end and then the start from the reference sample.
/// Only a cross-check for the unwrapping route.
pub fn omega_tilde_by_integration(curve: &SampledSpiral) -> f64 {
    let sm = curve.samples();
    let last = sm.len() - 1;
    let r = curve.reference_index(0, last);
    let chord = |i: usize, j: usize| {
        let d = sm[j].point().z() - sm[i].point().z();
        (d.norm(), d.arg())
    };
    // H(r, v) along v, then G(u, last) along u.
    let h_at = |v: usize| -> f64 {
        if v == r {
            return 0.0;
        }
        let (h, mu) = chord(r, v);
        0.5 * sm[v].k_left - (sm[v].tau - mu).sin() / h
    };
    let g_at = |u: usize| -> f64 {
        if u == last {
            return 0.0;
        }
        let (h, mu) = chord(u, last);
        0.5 * sm[u].k_right + (sm[u].tau - mu).sin() / h
    };
    let mut w = 0.0;
    for v in r..last {
        w += 0.5 * (h_at(v) + h_at(v + 1)) * (sm[v + 1].s - sm[v].s);
    }
    for u in (0..r).rev() {
        w -= 0.5 * (g_at(u) + g_at(u + 1)) * (sm[u + 1].s - sm[u].s);
    }
    w
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub n1: i64,
    pub n2: i64,
    pub m1: i64,
    pub m2: i64,
}

fn normalized_points(curve: &SampledSpiral) -> Result<(NormalizedEnds, Vec<Point>)> {
    let sm = curve.samples();
    let a = sm[0].element();
    let b = sm[sm.len() - 1].element();
    let (ends, sim) = normalize_pair(&a, &b)?;
    Ok((ends, sm.iter().map(|p| sim.apply_point(p.point())).collect()))
}

fn level_index(t: f64) -> f64 {
    ((t + PI) / TAU).floor()
}

/// Chord-complement crossings (N) and tangent reversals (M), left and right.
pub fn chord_counters(curve: &SampledSpiral) -> Result<Counters> {
    let (ends, pts) = normalized_points(curve)?;
    let n = pts.len();
    let (mut n1, mut n2) = (0i64, 0i64);
    let mut count = |x: f64| {
        if x < -1.0 {
            n1 += 1;
        } else if x > 1.0 {
            n2 += 1;
        }
    };
    // Just after A the curve sits on the side of sin(alpha), just before B on
    // the side of -sin(beta). A crossing inside the first or last interval is
    // placed at the neighbouring interior sample.
    let depart = ends.alpha.sin();
    let mut prev: Option<(Point, bool)> = (depart != 0.0).then(|| (Point::new(-1.0, depart), true));
    for p in &pts[1..n.saturating_sub(1)] {
        if p.y == 0.0 {
            continue;
        }
        if let Some((q, virtual_end)) = prev {
            if (q.y < 0.0) != (p.y < 0.0) {
                if virtual_end {
                    count(p.x);
                } else {
                    let t = q.y / (q.y - p.y);
                    count(q.x + t * (p.x - q.x));
                }
            }
        }
        prev = Some((*p, false));
    }
    let arrive = -ends.beta.sin();
    if let Some((q, false)) = prev {
        if arrive != 0.0 && (q.y < 0.0) != (arrive < 0.0) {
            count(q.x);
        }
    }

    let ca = cumulative_angles(curve)?;
    let sm = curve.samples();
    let tt: Vec<f64> = sm.iter().map(|p| ca.alpha_tilde + p.tau - sm[0].tau).collect();
    let mut f: Vec<f64> = tt.iter().map(|&t| level_index(t)).collect();
    // An end sitting exactly on a reversal level is not an interior reversal.
    let on_level = |t: f64| ((t + PI) / TAU).fract() == 0.0;
    if on_level(tt[0]) && tt[1] < tt[0] {
        f[0] -= 1.0;
    }
    if on_level(tt[n - 1]) && tt[n - 2] < tt[n - 1] {
        f[n - 1] -= 1.0;
    }
    let r = curve.reference_index(0, n - 1);
    let (mut m1, mut m2) = (0i64, 0i64);
    for i in 0..n - 1 {
        let c = (f[i + 1] - f[i]).abs() as i64;
        if i < r {
            m1 += c;
        } else {
            m2 += c;
        }
    }
    if n1 != m1 || n2 != m2 {
        return Err(Error::CounterMismatch { n1, n2, m1, m2 });
    }
    Ok(Counters { n1, n2, m1, m2 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaPoint {
    pub s: f64,
    pub delta: f64,
    /// Vogt's angle of the subarc before this sample.
    pub omega1: f64,
    /// Vogt's angle of the subarc after this sample.
    pub omega2: f64,
    /// `|omega1| + |omega2| - |omega_tilde|`.
    pub big_omega: f64,
}

/// Angle between the directions to both ends, tracked continuously.
pub fn delta_profile(curve: &SampledSpiral) -> Result<Vec<DeltaPoint>> {
    let ca = cumulative_angles(curve)?;
    let sm = curve.samples();
    let n = sm.len();
    let last = n - 1;
    let mut mu1 = vec![0.0; n];
    let mut mu2 = vec![0.0; n];
    mu1[0] = sm[0].tau;
    mu2[0] = ca.chord_direction;
    for i in 1..n {
        mu1[i] = unwrap_near(curve.chord_dir(0, i), mu1[i - 1]);
        mu2[i] = if i == last {
            unwrap_near(sm[last].tau, mu2[i - 1])
        } else {
            unwrap_near(curve.chord_dir(i, last), mu2[i - 1])
        };
        if (mu1[i] - mu1[i - 1]).abs() >= PI / 2.0 || (mu2[i] - mu2[i - 1]).abs() >= PI / 2.0 {
            return Err(coarse(i, "bipolar angle jumps by pi/2 or more"));
        }
    }
    if (mu1[last] - ca.chord_direction).abs() > 1e-6 || (mu2[last] - sm[last].tau).abs() > 1e-6 {
        return Err(coarse(last, "bipolar angles do not close up"));
    }
    let w = ca.omega_tilde.abs();
    Ok((0..n)
        .map(|i| {
            let t = sm[i].tau;
            let omega1 = 0.5 * (sm[0].tau + t) - mu1[i];
            let omega2 = 0.5 * (t + sm[last].tau) - mu2[i];
            DeltaPoint {
                s: sm[i].s,
                delta: mu2[i] - mu1[i],
                omega1,
                omega2,
                big_omega: omega1.abs() + omega2.abs() - w,
            }
        })
        .collect())
}

/// No tangent reversal in the interior; cross-checked against crossings.
pub fn is_short(curve: &SampledSpiral) -> Result<bool> {
    let c = chord_counters(curve)?;
    Ok(c.m1 == 0 && c.m2 == 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VogtSign {
    Consistent,
    Inconsistent,
    Circular,
}

/// Sign agreement between `alpha + beta` and `k2 - k1`.
pub fn vogt_sign(alpha: f64, beta: f64, k1: f64, k2: f64) -> VogtSign {
    let s = alpha + beta;
    let eps = 1e-12;
    let s_sign = if s.abs() <= eps { 0.0 } else { s.signum() };
    let dk = k2 - k1;
    let k_sign = if dk.abs() <= eps * (1.0 + k1.abs().max(k2.abs())) {
        0.0
    } else {
        dk.signum()
    };
    if s_sign == 0.0 && k_sign == 0.0 {
        VogtSign::Circular
    } else if s_sign == k_sign {
        VogtSign::Consistent
    } else {
        VogtSign::Inconsistent
    }
}

/// Boundary angle conditions of a short spiral, with the half-open ranges
/// (pi admitted for increasing curvature, -pi for decreasing).
pub fn short_bounds_check(e: &NormalizedEnds) -> bool {
    let (a, b) = (e.alpha, e.beta);
    let within = |lo_open: bool, hi_open: bool, x: f64| {
        let lo = if lo_open { x > -PI } else { x >= -PI };
        let hi = if hi_open { x < PI } else { x <= PI };
        lo && hi
    };
    match vogt_sign(a, b, e.kappa1, e.kappa2) {
        VogtSign::Circular => within(true, true, a) && within(true, true, b),
        VogtSign::Inconsistent => false,
        VogtSign::Consistent if e.kappa2 > e.kappa1 => within(true, false, a) && within(true, false, b),
        VogtSign::Consistent => within(false, true, a) && within(false, true, b),
    }
}

/// Winding limits: `|rho| < 2|w| + 2 pi`, and without an inflection also
/// `0 < 2|w| < |rho|`.
pub fn winding_bounds_check(ca: &CumulativeAngles, has_inflection: bool) -> bool {
    let w2 = 2.0 * ca.omega_tilde.abs();
    let r = ca.rho.abs();
    let outer = r < w2 + TAU;
    if has_inflection {
        outer
    } else {
        outer && 0.0 < w2 && w2 < r
    }
}

/// Circular arc `A(xi)` over the chord [-1, 1], sampled with `n` points.
pub fn sample_circular_arc(xi: f64, n: usize) -> Result<SampledSpiral> {
    if xi.abs() >= PI || n < 2 {
        return Err(Error::InvalidInput("need |xi| < pi and n >= 2".into()));
    }
    let start = CurvatureElement::new(-1.0, 0.0, xi, -xi.sin());
    let len = if xi == 0.0 { 2.0 } else { 2.0 * xi / xi.sin() };
    let samples = (0..n)
        .map(|i| {
            let s = len * i as f64 / (n - 1) as f64;
            let e = crate::geometry::evaluate_arc(&start, s);
            Sample {
                s,
                x: e.x,
                y: e.y,
                tau: e.tau,
                k_left: e.k,
                k_right: e.k,
            }
        })
        .collect();
    SampledSpiral::new(samples, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clothoid::{sample_clothoid, ClothoidSpec};

    #[test]
    fn sign_examples() {
        assert_eq!(vogt_sign(0.3, 0.1, 0.0, 1.0), VogtSign::Consistent);
        assert_eq!(vogt_sign(0.3, -0.3, 1.0, 1.0), VogtSign::Circular);
        assert_eq!(vogt_sign(-0.5, 0.2, 0.0, 1.0), VogtSign::Inconsistent);
    }

    #[test]
    fn short_bounds_examples() {
        assert!(short_bounds_check(&NormalizedEnds::new(PI, 0.1, -2.0, 0.0)));
        assert!(!short_bounds_check(&NormalizedEnds::new(-PI, 0.1, -2.0, 0.0)));
        let k = -(0.4f64).sin();
        assert!(short_bounds_check(&NormalizedEnds::new(0.4, -0.4, k, k)));
        assert!(short_bounds_check(&NormalizedEnds::new(-PI, -0.1, 0.0, -2.0)));
        assert!(!short_bounds_check(&NormalizedEnds::new(PI, -0.1, 0.0, -2.0)));
    }

    #[test]
    fn winding_examples() {
        let ca = |w: f64, rho: f64| CumulativeAngles {
            alpha_tilde: 0.0,
            beta_tilde: 0.0,
            omega_tilde: w,
            rho,
            n1: 0,
            n2: 0,
            chord_direction: 0.0,
        };
        assert!(winding_bounds_check(&ca(0.2, 0.5), false));
        assert!(!winding_bounds_check(&ca(0.2, 0.3), false));
        assert!(!winding_bounds_check(&ca(0.2, 7.0), true));
    }

    #[test]
    fn circular_arc_angles() {
        let c = sample_circular_arc(0.7, 200).unwrap();
        let ca = cumulative_angles(&c).unwrap();
        assert!(ca.omega_tilde.abs() < 1e-6);
        assert!((ca.alpha_tilde - 0.7).abs() < 1e-6);
        assert!((ca.beta_tilde + 0.7).abs() < 1e-6);
        assert_eq!((ca.n1, ca.n2), (0, 0));
        assert!(is_short(&c).unwrap());
        for d in delta_profile(&c).unwrap() {
            assert!((d.delta + 0.7).abs() < 1e-9);
        }
    }

    #[test]
    fn single_sample_span() {
        let c = sample_circular_arc(0.7, 20).unwrap();
        let ca = cumulative_angles_span(&c, 5, 5).unwrap();
        assert_eq!((ca.alpha_tilde, ca.beta_tilde, ca.omega_tilde), (0.0, 0.0, 0.0));
    }

    #[test]
    fn symmetric_clothoid() {
        let c = sample_clothoid(&ClothoidSpec::new(1.0, -2.0, 2.0, 400)).unwrap();
        let ca = cumulative_angles(&c).unwrap();
        assert!((ca.alpha_tilde - ca.beta_tilde).abs() < 1e-6);
        assert!(ca.omega_tilde > 0.0);
        assert!((ca.beta_tilde - ca.alpha_tilde - ca.rho).abs() < 1e-9);
        assert!((ca.rho - 0.0).abs() < 1e-12);
        assert!((omega_tilde_by_integration(&c) - ca.omega_tilde).abs() < 1e-4);
        let fine = sample_clothoid(&ClothoidSpec::new(1.0, -2.0, 2.0, 8000)).unwrap();
        let w = cumulative_angles(&fine).unwrap().omega_tilde;
        assert!((omega_tilde_by_integration(&fine) - w).abs() < 1e-6);
    }

    #[test]
    fn short_and_long_clothoids() {
        let short = sample_clothoid(&ClothoidSpec::new(1.0, 0.0, 1.5, 200)).unwrap();
        assert_eq!(chord_counters(&short).unwrap(), Counters { n1: 0, n2: 0, m1: 0, m2: 0 });
        assert!(is_short(&short).unwrap());
        let long = sample_clothoid(&ClothoidSpec::new(1.0, 0.0, 3.5, 2000)).unwrap();
        let c = chord_counters(&long).unwrap();
        assert_eq!(c, Counters { n1: 0, n2: 1, m1: 0, m2: 1 });
        assert!(!is_short(&long).unwrap());
        let ca = cumulative_angles(&long).unwrap();
        assert_eq!((ca.n1, ca.n2), (0, 1));
        // three turns past the end (dense brute-force count gives 3)
        let longer = sample_clothoid(&ClothoidSpec::new(1.0, 0.0, 6.5, 2000)).unwrap();
        assert_eq!(chord_counters(&longer).unwrap().n2, 3);
        // the X-axis mirror keeps sides; reversing the traversal swaps them
        let m = chord_counters(&long.mirrored()).unwrap();
        assert_eq!((m.n1, m.n2, m.m1, m.m2), (0, 1, 0, 1));
        let r = chord_counters(&long.reversed()).unwrap();
        assert_eq!((r.n1, r.n2, r.m1, r.m2), (1, 0, 1, 0));
    }

    #[test]
    fn delta_increases_for_clothoid() {
        let c = sample_clothoid(&ClothoidSpec::new(1.0, 0.0, 2.0, 400)).unwrap();
        let ca = cumulative_angles(&c).unwrap();
        let d = delta_profile(&c).unwrap();
        assert!((d[0].delta + ca.alpha_tilde).abs() < 1e-12);
        assert!((d[d.len() - 1].delta - ca.beta_tilde).abs() < 1e-12);
        assert!(d.windows(2).all(|w| w[1].delta > w[0].delta));
        // endpoint slope -(k1 c + sin alpha) / (2c)
        let e = c.ends().unwrap();
        let slope = (d[1].delta - d[0].delta) / (d[1].s - d[0].s);
        let expect = -(e.kappa1 + e.alpha.sin()) / (2.0 * e.c);
        assert!((slope - expect).abs() < 1e-2, "{slope} {expect}");
        for p in &d[1..d.len() - 1] {
            assert!(p.big_omega < 0.0 && p.big_omega > -PI);
        }
    }

    #[test]
    fn rejects_bad_curves() {
        let mk = |tau: [f64; 3], k: [f64; 3]| {
            let samples = (0..3)
                .map(|i| Sample {
                    s: i as f64,
                    x: i as f64,
                    y: 0.0,
                    tau: tau[i],
                    k_left: k[i],
                    k_right: k[i],
                })
                .collect();
            SampledSpiral::new(samples, false)
        };
        assert!(matches!(mk([0.0, 1.7, 0.0], [0.0, 1.0, 2.0]), Err(Error::ResolutionTooCoarse { .. })));
        assert!(matches!(mk([0.0, 0.0, 0.0], [0.0, 2.0, 1.0]), Err(Error::InvalidInput(_))));
        assert!(mk([0.0, 0.0, 0.0], [0.0, 0.0, 0.0]).is_err());
    }
}
