//! G1 chains of constant-curvature segments.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{canonicalize, evaluate_arc, q_invariant, CurvatureElement, Point, Similarity};
use crate::vogt::{Sample, SampledSpiral};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: CurvatureElement,
    pub length: f64,
}

impl Segment {
    pub fn end(&self) -> CurvatureElement {
        evaluate_arc(&self.start, self.length)
    }

    pub fn turning(&self) -> f64 {
        self.start.k * self.length
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiArcCurve {
    pub segments: Vec<Segment>,
}

/// Turning from tangent `from` to `to` along curvature `k`: the representative
/// of `to - from` with the sign of `k`.
pub fn signed_turning(from: f64, to: f64, k: f64) -> f64 {
    let mut th = canonicalize(to - from);
    if k > 0.0 && th < -1e-12 {
        th += TAU;
    } else if k < 0.0 && th > 1e-12 {
        th -= TAU;
    }
    th
}

/// Length of the arc of curvature `k` turning by `th` between two points
/// `chord` apart. Well conditioned as `k -> 0`.
pub fn arc_length(chord: f64, th: f64, k: f64) -> f64 {
    if th.abs() < 1e-12 {
        chord
    } else if th.abs() < PI * 0.9 {
        chord * (th / 2.0) / (th / 2.0).sin()
    } else {
        th / k
    }
}

/// Segment from `start` to the point `to` on its circle, arriving with
/// tangent `tau_end`.
pub fn segment_to(start: CurvatureElement, to: Point, tau_end: f64) -> Segment {
    let th = signed_turning(start.tau, tau_end, start.k);
    Segment {
        start,
        length: arc_length(start.point().dist(to), th, start.k),
    }
}

impl MultiArcCurve {
    pub fn new(segments: Vec<Segment>) -> Self {
        MultiArcCurve { segments }
    }

    pub fn start(&self) -> CurvatureElement {
        self.segments[0].start
    }

    pub fn end(&self) -> CurvatureElement {
        self.segments[self.segments.len() - 1].end()
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }

    pub fn curvatures(&self) -> Vec<f64> {
        self.segments.iter().map(|s| s.start.k).collect()
    }

    /// Largest mismatch in position or tangent between consecutive segments.
    pub fn g1_defect(&self) -> f64 {
        self.segments
            .windows(2)
            .map(|w| {
                let e = w[0].end();
                let n = w[1].start;
                e.point()
                    .dist(n.point())
                    .max(canonicalize(e.tau - n.tau).abs())
            })
            .fold(0.0, f64::max)
    }

    pub fn is_g1(&self, tol: f64) -> bool {
        self.g1_defect() <= tol
    }

    /// Strictly monotone curvature sequence (`dir` > 0 increasing).
    pub fn strictly_monotone(&self, dir: f64) -> bool {
        self.segments
            .windows(2)
            .all(|w| (w[1].start.k - w[0].start.k) * dir > 0.0)
    }

    /// Largest Q over non-adjacent segment pairs and largest |Q| over adjacent ones.
    pub fn pairwise_q(&self) -> (f64, f64) {
        let mut far = f64::NEG_INFINITY;
        let mut adj: f64 = 0.0;
        for i in 0..self.segments.len() {
            for j in i + 1..self.segments.len() {
                let q = q_invariant(&self.segments[i].start, &self.segments[j].start);
                if j == i + 1 {
                    adj = adj.max(q.abs());
                } else {
                    far = far.max(q);
                }
            }
        }
        (far, adj)
    }

    /// Point and element at arclength `s` from the start.
    pub fn at(&self, s: f64) -> CurvatureElement {
        let mut rest = s;
        for (i, seg) in self.segments.iter().enumerate() {
            if rest <= seg.length || i + 1 == self.segments.len() {
                return evaluate_arc(&seg.start, rest.min(seg.length).max(0.0));
            }
            rest -= seg.length;
        }
        self.start()
    }

    /// Image of the chain under a similarity.
    pub fn transformed(&self, sim: &Similarity) -> MultiArcCurve {
        let segments = self
            .segments
            .iter()
            .map(|seg| Segment {
                start: sim.apply_element(&seg.start),
                length: seg.length * sim.scale,
            })
            .collect();
        MultiArcCurve { segments }
    }

    /// Dense points along the chain, `per_segment` intervals per segment.
    pub fn points(&self, per_segment: usize) -> Vec<Point> {
        let mut out = vec![self.start().point()];
        for seg in &self.segments {
            for j in 1..=per_segment {
                let s = seg.length * j as f64 / per_segment as f64;
                out.push(evaluate_arc(&seg.start, s).point());
            }
        }
        out
    }

    /// No interior tangent reversal. Sampling is refined until the counters
    /// resolve, up to 16384 points per segment.
    pub fn is_short(&self) -> Result<bool> {
        let mut per = 64;
        loop {
            match self.to_sampled(per).and_then(|c| crate::vogt::is_short(&c)) {
                Err(Error::ResolutionTooCoarse { .. } | Error::CounterMismatch { .. }) if per < 16384 => per *= 4,
                r => return r,
            }
        }
    }

    /// Converts to samples with curvature jumps at the junctions. Each
    /// segment gets at least `per_segment` intervals and no step turns by
    /// more than pi/8.
    pub fn to_sampled(&self, per_segment: usize) -> Result<SampledSpiral> {
        let mut samples: Vec<Sample> = Vec::new();
        let mut s0 = 0.0;
        for seg in &self.segments {
            if seg.length <= 0.0 {
                continue;
            }
            let m = per_segment.max((seg.turning().abs() / (PI / 8.0)).ceil() as usize).max(1);
            let start_tau = match samples.last() {
                Some(p) => p.tau,
                None => seg.start.tau,
            };
            let tau_shift = start_tau - seg.start.tau;
            for j in 0..=m {
                let s = seg.length * j as f64 / m as f64;
                let e = evaluate_arc(&seg.start, s);
                if j == 0 {
                    if let Some(p) = samples.last_mut() {
                        p.k_right = seg.start.k;
                        continue;
                    }
                }
                samples.push(Sample {
                    s: s0 + s,
                    x: e.x,
                    y: e.y,
                    tau: e.tau + tau_shift,
                    k_left: seg.start.k,
                    k_right: seg.start.k,
                });
            }
            s0 += seg.length;
        }
        if samples.len() < 2 {
            return Err(Error::InvalidInput("chain has no length".into()));
        }
        let circular = self
            .segments
            .windows(2)
            .all(|w| w[0].start.k == w[1].start.k);
        SampledSpiral::new(samples, circular)
    }
}
