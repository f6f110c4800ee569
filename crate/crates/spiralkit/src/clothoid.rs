//! Cornu spiral `k(s) = s / a^2` evaluated through Fresnel integrals.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CurvatureElement, Point};
use crate::vogt::{Sample, SampledSpiral};

/// Below this the power series is used.
pub const SERIES_LIMIT: f64 = 1.6;

/// Fresnel integrals `(C(t), S(t))` with kernel `pi u^2 / 2`.
pub fn fresnel(t: f64) -> (f64, f64) {
    if t.abs() <= SERIES_LIMIT {
        fresnel_series(t)
    } else {
        fresnel_auxiliary(t)
    }
}

/// Maclaurin series, summed as `t sum (i x)^n / (n! (2n+1))` with `x = pi t^2 / 2`.
/// Stays accurate to ~1e-15 up to |t| of about 2.
pub fn fresnel_series(t: f64) -> (f64, f64) {
    let x = FRAC_PI_2 * t * t;
    let (mut c, mut s) = (0.0, 0.0);
    let mut term = t;
    for n in 0..120usize {
        let v = term / (2 * n + 1) as f64;
        match n % 4 {
            0 => c += v,
            1 => s += v,
            2 => c -= v,
            _ => s -= v,
        }
        term *= x / (n + 1) as f64;
        if term.abs() < 1e-18 * t.abs().max(1e-300) && n > 2 {
            break;
        }
    }
    (c, s)
}

/// Complementary error function route:
/// `C + iS = (1+i)/2 (1 - erfc(z))`, `z = sqrt(pi)/2 (1-i) t`, with erfc from
/// its continued fraction (modified Lentz). Good for |t| above about 1.
pub fn fresnel_auxiliary(t: f64) -> (f64, f64) {
    if t < 0.0 {
        let (c, s) = fresnel_auxiliary(-t);
        return (-c, -s);
    }
    if t == 0.0 {
        return (0.0, 0.0);
    }
    let z = Complex64::new(1.0, -1.0) * (PI.sqrt() / 2.0 * t);
    let tiny = Complex64::new(1e-300, 0.0);
    let mut f = z;
    let mut cc = f;
    let mut d = Complex64::new(0.0, 0.0);
    for n in 1..20_000 {
        let a = n as f64 / 2.0;
        d = z + d * a;
        if d.norm_sqr() == 0.0 {
            d = tiny;
        }
        cc = z + a / cc;
        if cc.norm_sqr() == 0.0 {
            cc = tiny;
        }
        d = d.inv();
        let delta = cc * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    let erfc = Complex64::from_polar(1.0, FRAC_PI_2 * t * t) / (f * PI.sqrt());
    let half = Complex64::new(0.5, 0.5);
    let v = half - half * erfc;
    (v.re, v.im)
}

/// Point of the clothoid through the origin with horizontal tangent at `s = 0`.
pub fn clothoid_point(a: f64, s: f64) -> Point {
    let scale = a * PI.sqrt();
    let (c, sn) = fresnel(s / scale);
    Point::new(scale * c, scale * sn)
}

/// Curvature element of the clothoid at arclength `s`.
pub fn clothoid_element(a: f64, s: f64) -> CurvatureElement {
    CurvatureElement::at(clothoid_point(a, s), s * s / (2.0 * a * a), s / (a * a))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClothoidSpec {
    pub a: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub n: usize,
}

impl ClothoidSpec {
    pub fn new(a: f64, s_min: f64, s_max: f64, n: usize) -> Self {
        ClothoidSpec { a, s_min, s_max, n }
    }

    pub fn tau(&self, s: f64) -> f64 {
        s * s / (2.0 * self.a * self.a)
    }

    pub fn k(&self, s: f64) -> f64 {
        s / (self.a * self.a)
    }
}

/// Uniform samples in `s`; the sample arclength is shifted to start at zero.
pub fn sample_clothoid(spec: &ClothoidSpec) -> Result<SampledSpiral> {
    if !(spec.a > 0.0 && spec.a.is_finite()) {
        return Err(Error::InvalidInput("clothoid rate a must be positive".into()));
    }
    if !(spec.s_min < spec.s_max) || !spec.s_min.is_finite() || !spec.s_max.is_finite() {
        return Err(Error::InvalidInput("need s_min < s_max".into()));
    }
    if spec.n < 16 {
        return Err(Error::InvalidInput("need at least 16 samples".into()));
    }
    let h = (spec.s_max - spec.s_min) / (spec.n - 1) as f64;
    let samples = crate::par::map_range(spec.n, |i| {
        let s = if i + 1 == spec.n {
            spec.s_max
        } else {
            spec.s_min + h * i as f64
        };
        let p = clothoid_point(spec.a, s);
        let k = spec.k(s);
        Sample {
            s: s - spec.s_min,
            x: p.x,
            y: p.y,
            tau: spec.tau(s),
            k_left: k,
            k_right: k,
        }
    });
    SampledSpiral::new(samples, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(fresnel(0.0), (0.0, 0.0));
        let (c, s) = fresnel(1.0);
        assert!((c - 0.779_893_400_376_822_8).abs() < 1e-14);
        assert!((s - 0.438_259_147_390_354_8).abs() < 1e-14);
        // limit 1/2 approached inside the envelope 1/(pi t)
        let (c, s) = fresnel(20.0);
        assert!((c - 0.5).abs() < 1.0 / (PI * 20.0) && (s - 0.5).abs() < 1.0 / (PI * 20.0));
        let table = [
            (20.0, 0.499_987_334_972_344_4, 0.484_084_535_925_953_9),
            (5.0, 0.563_631_188_704_012_2, 0.499_191_381_917_116_9),
            (2.5, 0.457_413_009_641_777_05, 0.619_181_755_819_592_9),
            (-3.3, -0.405_694_403_706_258_5, -0.519_286_084_982_063_1),
        ];
        for (t, ec, es) in table {
            let (c, s) = fresnel(t);
            assert!((c - ec).abs() < 1e-13 && (s - es).abs() < 1e-13, "t={t}");
        }
        let (c, s) = fresnel(-1.0);
        assert!((c + 0.779_893_400_376_822_8).abs() < 1e-14 && s < 0.0);
    }

    #[test]
    fn branches_agree_on_overlap() {
        for i in 0..=40 {
            let t = 1.4 + 0.01 * i as f64;
            let (a, b) = fresnel_series(t);
            let (c, d) = fresnel_auxiliary(t);
            assert!((a - c).abs() < 1e-13 && (b - d).abs() < 1e-13, "t={t}");
        }
    }

    #[test]
    fn arclength_consistency() {
        // chord sum of a fine polyline approaches s
        let n = 20_000;
        let a = 0.8;
        let mut len = 0.0;
        let mut prev = clothoid_point(a, -1.0);
        for i in 1..=n {
            let p = clothoid_point(a, -1.0 + 3.0 * i as f64 / n as f64);
            len += p.dist(prev);
            prev = p;
        }
        assert!((len - 3.0).abs() < 3e-6);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(sample_clothoid(&ClothoidSpec::new(1.0, 0.0, 1.0, 4)).is_err());
        assert!(sample_clothoid(&ClothoidSpec::new(-1.0, 0.0, 1.0, 40)).is_err());
        assert!(sample_clothoid(&ClothoidSpec::new(1.0, 1.0, 0.0, 40)).is_err());
    }
}
