//! Randomized property suites. Each suite measures its quantities and reports
//! them together with a verdict; the CLI `selftest` command and the
//! acceptance tests both run through here.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::biarc::{
    b_through_point, biarc_ends, biarc_length, build_biarc, contact_point, in_bilense, in_lense, BiarcSpec, LenseSpec,
};
use crate::clothoid::{clothoid_element, clothoid_point, fresnel, fresnel_auxiliary, fresnel_series, sample_clothoid, ClothoidSpec};
use crate::construct::{construct_any, construct_short, exists_any, Status};
use crate::envelope::{build_lense_chain, in_envelope, InterpolationData};
use crate::error::{Error, Result};
use crate::geometry::{
    canonicalize, circle_side, invert_element, is_tangent, normalize_pair, q_from_centers, q_from_crossing,
    q_invariant, q_line_circle, q_normalized, CurvatureElement, NormalizedEnds, Point, Similarity, TANGENCY_EPS,
};
use crate::par::map_range;
use crate::vogt::{chord_counters, cumulative_angles, cumulative_angles_span, is_short, short_bounds_check, SampledSpiral};
use crate::MultiArcCurve;

pub const DEFAULT_SEED: u64 = 0x5647_4F54;

pub const SUITES: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

/// Accepts decimal or `0x` hex.
pub fn parse_seed(s: &str) -> Option<u64> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16).ok(),
        None => s.parse().ok(),
    }
}

/// `SPIRALKIT_SEED` if set and parseable, else the default.
pub fn seed_from_env() -> u64 {
    std::env::var("SPIRALKIT_SEED")
        .ok()
        .and_then(|s| parse_seed(&s))
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub seconds: f64,
    pub metrics: BTreeMap<String, f64>,
    pub failures: Vec<String>,
}

impl Report {
    pub fn metric(&self, key: &str) -> f64 {
        match self.metrics.get(key) {
            Some(v) => *v,
            None => panic!("suite {} has no metric {key}", self.id),
        }
    }

    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!("[{verdict}] {}. {} ({:.2} s)", self.id, self.name, self.seconds);
        for f in &self.failures {
            s.push_str("\n       ");
            s.push_str(f);
        }
        s
    }
}

struct Builder {
    id: u8,
    name: &'static str,
    start: Instant,
    metrics: BTreeMap<String, f64>,
    failures: Vec<String>,
}

impl Builder {
    fn new(id: u8, name: &'static str) -> Self {
        Builder {
            id,
            name,
            start: Instant::now(),
            metrics: BTreeMap::new(),
            failures: Vec::new(),
        }
    }

    fn put(&mut self, key: &str, v: f64) {
        self.metrics.insert(key.to_string(), v);
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn finish(mut self, budget: Option<f64>) -> Report {
        let seconds = self.start.elapsed().as_secs_f64();
        if let Some(b) = budget {
            self.require(seconds < b, format!("runtime {seconds:.2} s over {b} s"));
        }
        Report {
            id: self.id,
            name: self.name,
            passed: self.failures.is_empty(),
            seconds,
            metrics: self.metrics,
            failures: self.failures,
        }
    }
}

/// Independent stream per suite and item, so results do not depend on how
/// work is split across threads.
fn rng(seed: u64, suite: u8, item: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed ^ ((suite as u64) << 56));
    r.set_stream(item as u64);
    r
}

fn log_uniform(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    r.gen_range(lo.ln()..hi.ln()).exp()
}

fn max(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

pub fn run(id: u8, seed: u64) -> Result<Report> {
    match id {
        1 => q_invariance(seed),
        2 => spiral_nonpositivity(seed),
        3 => vogt_short_and_long(seed),
        4 => counter_equality(seed),
        5 => biarc_family(seed),
        6 => containment(seed),
        7 => construction(seed),
        8 => envelope_order(),
        9 => fresnel_oracle(),
        _ => Err(Error::InvalidInput(format!("no suite {id}"))),
    }
}

pub fn run_all(seed: u64) -> Result<Vec<Report>> {
    SUITES.iter().map(|&id| run(id, seed)).collect()
}

fn random_element(r: &mut ChaCha8Rng, line: bool) -> CurvatureElement {
    let k = if line {
        0.0
    } else {
        let m = log_uniform(r, 0.2, 5.0);
        if r.gen::<bool>() {
            m
        } else {
            -m
        }
    };
    CurvatureElement::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0), r.gen_range(-PI..PI), k)
}

fn distance_to(p: Point, e: &CurvatureElement) -> f64 {
    match e.center() {
        Some(c) => (p.dist(c) - e.radius()).abs(),
        None => (circle_side(p, e) / 2.0).abs(),
    }
}

struct QRow {
    sim: f64,
    inv: f64,
    rep: f64,
    cases: [usize; 3],
}

fn q_invariance(seed: u64) -> Result<Report> {
    let mut out = Builder::new(1, "Q invariance under similarity and inversion");
    let rows = map_range(1000, |i| -> Result<QRow> {
        let mut r = rng(seed, 1, i);
        let a = random_element(&mut r, i % 10 == 0);
        let b = random_element(&mut r, false);
        let q = q_invariant(&a, &b);
        let norm = q.abs().max(1.0);

        let sim = Similarity {
            rotation: r.gen_range(-PI..PI),
            scale: log_uniform(&mut r, 0.2, 5.0),
            translation: Point::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0)),
            reflect: r.gen(),
        };
        let qs = q_invariant(&sim.apply_element(&a), &sim.apply_element(&b));

        let k0 = loop {
            let c = Point::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
            let r0: f64 = r.gen_range(0.5..3.0);
            if distance_to(c, &a) > 0.25 && distance_to(c, &b) > 0.25 {
                break CurvatureElement::new(c.x + r0, c.y, FRAC_PI_2, 1.0 / r0);
            }
        };
        let qi = q_invariant(&invert_element(&a, &k0)?, &invert_element(&b, &k0)?);

        let mut rep: f64 = 0.0;
        let mut cases = [0; 3];
        if let Some(v) = q_from_centers(&a, &b) {
            rep = rep.max((v - q).abs() / norm);
            cases[0] = 1;
        }
        if let Some(v) = q_line_circle(&a, &b) {
            rep = rep.max((v - q).abs() / norm);
            cases[1] = 1;
        }
        if let Some(v) = q_from_crossing(&a, &b) {
            rep = rep.max((v - q).abs() / norm);
            cases[2] = 1;
        }
        Ok(QRow {
            sim: (qs - q).abs() / norm,
            inv: (qi - q).abs() / norm,
            rep,
            cases,
        })
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let sim = max(rows.iter().map(|r| r.sim));
    let inv = max(rows.iter().map(|r| r.inv));
    let rep = max(rows.iter().map(|r| r.rep));
    let cases: Vec<usize> = (0..3).map(|j| rows.iter().map(|r| r.cases[j]).sum()).collect();
    out.put("pairs", rows.len() as f64);
    out.put("max_rel_dev_similarity", sim);
    out.put("max_rel_dev_inversion", inv);
    out.put("max_rel_dev_representation", rep);
    out.put("pairs_case_circles", cases[0] as f64);
    out.put("pairs_case_line", cases[1] as f64);
    out.put("pairs_case_crossing", cases[2] as f64);
    out.require(sim <= 1e-8, format!("similarity deviation {sim:e}"));
    out.require(inv <= 1e-8, format!("inversion deviation {inv:e}"));
    out.require(rep <= 1e-9, format!("representation deviation {rep:e}"));
    out.require(cases.iter().all(|&c| c > 0), "some representation case never exercised");
    Ok(out.finish(Some(2.0)))
}

fn spiral_nonpositivity(seed: u64) -> Result<Report> {
    let mut out = Builder::new(2, "Q <= 0 between curvature elements of a spiral");
    // (max Q, pairs with |dk| > 1e-3, of which Q > -1e-6, largest such Q, |dk| of it)
    let rows = map_range(50, |i| {
        let mut r = rng(seed, 2, i);
        let a = r.gen_range(0.5..2.0);
        let s0 = a * r.gen_range(-2.5..2.5);
        let len = a * r.gen_range(0.5..3.0);
        let mut row = (f64::NEG_INFINITY, 0usize, 0usize, f64::NEG_INFINITY, 0.0f64);
        for _ in 0..100 {
            let u = r.gen_range(s0..s0 + len);
            let v = r.gen_range(s0..s0 + len);
            let (eu, ev) = (clothoid_element(a, u), clothoid_element(a, v));
            let q = q_invariant(&eu, &ev);
            row.0 = row.0.max(q);
            let dk = (eu.k - ev.k).abs();
            if dk > 1e-3 {
                row.1 += 1;
                if q > -1e-6 {
                    row.2 += 1;
                    if q > row.3 {
                        row.3 = q;
                        row.4 = dk;
                    }
                }
            }
        }
        row
    });
    let max_q = rows.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    let strict: usize = rows.iter().map(|r| r.1).sum();
    let bad: usize = rows.iter().map(|r| r.2).sum();
    let worst = rows.iter().fold((f64::NEG_INFINITY, 0.0), |w, r| if r.3 > w.0 { (r.3, r.4) } else { w });
    out.put("pairs", 5000.0);
    out.put("max_q", max_q);
    out.put("pairs_dk_over_1e-3", strict as f64);
    out.put("violations_q_over_-1e-6", bad as f64);
    out.require(max_q <= 1e-9, format!("max Q {max_q:e}"));
    out.require(
        bad == 0,
        format!(
            "{bad} of {strict} pairs with |dk| > 1e-3 have Q > -1e-6 (e.g. Q = {:.3e} at |dk| = {:.3e}); Q vanishes like ds^4/(48 a^4)",
            worst.0, worst.1
        ),
    );
    Ok(out.finish(Some(5.0)))
}

/// A short clothoid arc, drawn until the sampled curve has no tangent reversal.
fn short_clothoid(r: &mut ChaCha8Rng, n: usize) -> Result<(ClothoidSpec, SampledSpiral)> {
    loop {
        let a = r.gen_range(0.5..2.0);
        let s0 = a * r.gen_range(-2.5..2.5);
        let len = a * r.gen_range(0.2..3.0);
        let spec = ClothoidSpec::new(a, s0, s0 + len, n);
        let curve = sample_clothoid(&spec)?;
        if is_short(&curve)? {
            return Ok((spec, curve));
        }
    }
}

fn vogt_short_and_long(seed: u64) -> Result<Report> {
    let mut out = Builder::new(3, "Boundary-angle sign on short arcs, nested long spans");
    let short = map_range(200, |i| -> Result<(bool, bool, f64)> {
        let mut r = rng(seed, 3, i);
        let (_, curve) = short_clothoid(&mut r, 256)?;
        let curve = if i % 2 == 1 { curve.reversed() } else { curve };
        let e = curve.ends()?;
        let sum = e.alpha + e.beta;
        let dk = e.kappa2 - e.kappa1;
        let sign_ok = sum.abs() > 1e-9 && sum.signum() == dk.signum();
        Ok((sign_ok, short_bounds_check(&e), sum.abs()))
    });
    let short = short.into_iter().collect::<Result<Vec<_>>>()?;
    let sign_fail = short.iter().filter(|r| !r.0).count();
    let bounds_fail = short.iter().filter(|r| !r.1).count();
    let min_sum = short.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    out.put("short_arcs", short.len() as f64);
    out.put("short_sign_failures", sign_fail as f64);
    out.put("short_bounds_failures", bounds_fail as f64);
    out.put("short_min_abs_alpha_plus_beta", min_sum);
    out.require(sign_fail == 0, format!("{sign_fail} short arcs break the sign rule"));
    out.require(bounds_fail == 0, format!("{bounds_fail} short arcs break the angle ranges"));

    let long = map_range(20, |i| -> Result<(usize, usize, f64)> {
        let mut r = rng(seed, 3, 1000 + i);
        let a = r.gen_range(0.5..2.0);
        let s0 = a * r.gen_range(-4.0..1.0);
        let len = a * r.gen_range(4.0..8.0);
        let n = 4000;
        let spec = ClothoidSpec::new(a, s0, s0 + len, n);
        let curve = sample_clothoid(&spec)?;
        let sm = curve.samples();
        let m = r.gen_range(n / 3..2 * n / 3);
        let sl = r.gen_range(1..=m / 20);
        let sr = r.gen_range(1..=(n - 1 - m) / 20);
        let (mut prev, mut sign_fail, mut mono_fail, mut min_inc) = (0.0f64, 0, 0, f64::INFINITY);
        for j in 1..=20 {
            let (u, v) = (m - j * sl, m + j * sr);
            let w = cumulative_angles_span(&curve, u, v)?.omega_tilde;
            let dk = sm[v].k_left - sm[u].k_right;
            if w.signum() != dk.signum() || w == 0.0 {
                sign_fail += 1;
            }
            let inc = w.abs() - prev.abs();
            min_inc = min_inc.min(inc);
            if inc <= 1e-9 {
                mono_fail += 1;
            }
            prev = w;
        }
        Ok((sign_fail, mono_fail, min_inc))
    });
    let long = long.into_iter().collect::<Result<Vec<_>>>()?;
    let sign_fail: usize = long.iter().map(|r| r.0).sum();
    let mono_fail: usize = long.iter().map(|r| r.1).sum();
    let min_inc = long.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    out.put("nested_spans", 400.0);
    out.put("nested_sign_failures", sign_fail as f64);
    out.put("nested_monotone_failures", mono_fail as f64);
    out.put("nested_min_increment", min_inc);
    out.require(sign_fail == 0, format!("{sign_fail} nested spans break the sign rule"));
    out.require(mono_fail == 0, format!("{mono_fail} nested spans do not grow |w| by more than 1e-9"));
    Ok(out.finish(None))
}

fn counter_equality(seed: u64) -> Result<Report> {
    let mut out = Builder::new(4, "Crossing and reversal counters agree");
    let rows = map_range(30, |i| -> Result<(i64, i64, bool, f64)> {
        let mut r = rng(seed, 4, i);
        loop {
            let a = r.gen_range(0.5..2.0);
            let s0 = if i % 2 == 0 { a * r.gen_range(0.0..1.0) } else { -a * r.gen_range(0.0..5.2) };
            let s1 = a * r.gen_range(1.5..5.2);
            let curve = sample_clothoid(&ClothoidSpec::new(a, s0, s1, 4000))?;
            let c = chord_counters(&curve)?;
            if c.n1 > 2 || c.n2 > 2 {
                continue;
            }
            let ca = cumulative_angles(&curve)?;
            let e = curve.ends()?;
            let err = (ca.alpha_tilde - (e.alpha + TAU * c.n1 as f64))
                .abs()
                .max((ca.beta_tilde - (e.beta + TAU * c.n2 as f64)).abs());
            let equal = c.n1 == c.m1 && c.n2 == c.m2 && ca.n1 == c.n1 && ca.n2 == c.n2;
            return Ok((c.n1, c.n2, equal, err));
        }
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let unequal = rows.iter().filter(|r| !r.2).count();
    let err = max(rows.iter().map(|r| r.3));
    let mut seen = [0usize; 3];
    for r in &rows {
        seen[r.0 as usize] += 1;
        seen[r.1 as usize] += 1;
    }
    out.put("curves", rows.len() as f64);
    out.put("counter_mismatches", unequal as f64);
    out.put("max_cumulative_angle_error", err);
    for (n, c) in seen.iter().enumerate() {
        out.put(&format!("sides_with_n{n}"), *c as f64);
    }
    out.require(unequal == 0, format!("{unequal} curves with N != M"));
    out.require(err <= 1e-6, format!("cumulative angle error {err:e}"));
    out.require(seen.iter().all(|&c| c > 0), format!("crossing counts seen {seen:?}"));
    Ok(out.finish(None))
}

fn random_lense(r: &mut ChaCha8Rng) -> LenseSpec {
    loop {
        let l = LenseSpec::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
        if l.omega().sin().abs() > 0.05 {
            return l;
        }
    }
}

fn biarc_family(seed: u64) -> Result<Report> {
    let mut out = Builder::new(5, "Biarc family: locus, parameter round trip, length law");
    let locus = map_range(500, |i| -> Result<(f64, f64)> {
        let mut r = rng(seed, 5, i);
        let lense = random_lense(&mut r);
        let b = log_uniform(&mut r, 1e-2, 1e2);
        let t = contact_point(&BiarcSpec { lense, b })?;
        let residual = circle_side(t, &lense.gamma_circle()).abs();
        let back = b_through_point(&lense, t)?;
        Ok((residual, (back - b).abs() / b))
    });
    let locus = locus.into_iter().collect::<Result<Vec<_>>>()?;
    let residual = max(locus.iter().map(|r| r.0));
    let round = max(locus.iter().map(|r| r.1));
    out.put("locus_max_residual", residual);
    out.put("roundtrip_max_rel_error", round);
    out.require(residual < 1e-9, format!("locus residual {residual:e}"));
    out.require(round < 1e-8, format!("round trip error {round:e}"));

    let grid: Vec<f64> = (0..64).map(|j| 10f64.powf(-3.0 + 6.0 * j as f64 / 63.0)).collect();
    let mono = map_range(50, |i| -> Result<(bool, f64)> {
        let mut r = rng(seed, 5, 1000 + i);
        let lense = loop {
            let l = random_lense(&mut r);
            if (l.alpha - l.beta).abs() > 0.1 {
                break l;
            }
        };
        let ls = grid
            .iter()
            .map(|&b| biarc_length(&BiarcSpec { lense, b }))
            .collect::<Result<Vec<_>>>()?;
        let d: Vec<f64> = ls.windows(2).map(|w| w[1] - w[0]).collect();
        let strict = d.iter().all(|&x| x > 0.0) || d.iter().all(|&x| x < 0.0);
        Ok((strict, d.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min)))
    });
    let mono = mono.into_iter().collect::<Result<Vec<_>>>()?;
    let not_mono = mono.iter().filter(|r| !r.0).count();
    out.put("length_lenses", mono.len() as f64);
    out.put("length_not_strictly_monotone", not_mono as f64);
    out.put("length_min_step", mono.iter().map(|r| r.1).fold(f64::INFINITY, f64::min));
    out.require(not_mono == 0, format!("{not_mono} lenses with non-monotone L(b)"));

    let sym = map_range(20, |i| -> Result<(f64, f64)> {
        let mut r = rng(seed, 5, 2000 + i);
        let w: f64 = loop {
            let w = r.gen_range(-3.0..3.0);
            if f64::abs(w) > 0.05 {
                break w;
            }
        };
        let lense = LenseSpec::new(w, w);
        let closed = 2.0 * w / w.sin();
        let ls = grid
            .iter()
            .map(|&b| biarc_length(&BiarcSpec { lense, b }))
            .collect::<Result<Vec<_>>>()?;
        let spread = ls.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - ls.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok((spread, max(ls.iter().map(|l| (l - closed).abs()))))
    });
    let sym = sym.into_iter().collect::<Result<Vec<_>>>()?;
    let spread = max(sym.iter().map(|r| r.0));
    let closed = max(sym.iter().map(|r| r.1));
    out.put("symmetric_length_spread", spread);
    out.put("symmetric_closed_form_error", closed);
    out.require(spread <= 1e-10, format!("L varies by {spread:e} when alpha = beta"));
    out.require(closed <= 1e-10, format!("closed form off by {closed:e}"));
    Ok(out.finish(None))
}

struct ContainRow {
    lense_out: usize,
    bilense_out: usize,
    b_drops: usize,
    decreasing: bool,
}

fn containment(seed: u64) -> Result<Report> {
    let mut out = Builder::new(6, "Short spirals stay inside their lense and bilense");
    let rows = map_range(50, |i| -> Result<ContainRow> {
        let mut r = rng(seed, 6, i);
        let (spec, _) = short_clothoid(&mut r, 256)?;
        let m = 10_000;
        let mut pts: Vec<Point> = (1..=m)
            .map(|j| clothoid_point(spec.a, spec.s_min + (spec.s_max - spec.s_min) * j as f64 / (m + 1) as f64))
            .collect();
        let mut first = clothoid_element(spec.a, spec.s_min);
        let mut last = clothoid_element(spec.a, spec.s_max);
        let decreasing = i % 2 == 1;
        if decreasing {
            (first, last) = (last.reversed(), first.reversed());
            pts.reverse();
        }
        let (ends, sim) = normalize_pair(&first, &last)?;
        let lense = LenseSpec::from(&ends);
        let mut row = ContainRow {
            lense_out: 0,
            bilense_out: 0,
            b_drops: 0,
            decreasing,
        };
        let mut prev = f64::NEG_INFINITY;
        for p in pts {
            let q = sim.apply_point(p);
            if !in_lense(&lense, q) {
                row.lense_out += 1;
            }
            if !in_bilense(&ends, q)? {
                row.bilense_out += 1;
            }
            let b = b_through_point(&lense, q)?;
            if b < prev - 1e-9 * (1.0 + prev.abs()) {
                row.b_drops += 1;
            }
            prev = b;
        }
        Ok(row)
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let lense_out: usize = rows.iter().map(|r| r.lense_out).sum();
    let bilense_out: usize = rows.iter().map(|r| r.bilense_out).sum();
    let drops: usize = rows.iter().map(|r| r.b_drops).sum();
    out.put("curves", rows.len() as f64);
    out.put("curves_decreasing", rows.iter().filter(|r| r.decreasing).count() as f64);
    out.put("points", 10_000.0 * rows.len() as f64);
    out.put("outside_lense", lense_out as f64);
    out.put("outside_bilense", bilense_out as f64);
    out.put("b_decreasing_steps", drops as f64);
    out.require(lense_out == 0, format!("{lense_out} points outside the lense"));
    out.require(bilense_out == 0, format!("{bilense_out} points outside the bilense"));
    out.require(drops == 0, format!("{drops} steps where b decreases"));
    Ok(out.finish(None))
}

/// Worst end-data mismatch of a chain, in chord-normalized units.
fn end_error(chain: &MultiArcCurve, a: &CurvatureElement, b: &CurvatureElement, c: f64) -> f64 {
    let (s, e) = (chain.start(), chain.end());
    let kin = chain.segments.last().map(|g| g.start.k).unwrap_or(e.k);
    [
        s.point().dist(a.point()) / c,
        canonicalize(s.tau - a.tau).abs(),
        (s.k - a.k).abs() * c,
        e.point().dist(b.point()) / c,
        canonicalize(e.tau - b.tau).abs(),
        (kin - b.k).abs() * c,
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

fn random_short_ends(r: &mut ChaCha8Rng) -> NormalizedEnds {
    loop {
        let e = NormalizedEnds::new(
            r.gen_range(-PI..PI),
            r.gen_range(-PI..PI),
            r.gen_range(-5.0..5.0),
            r.gen_range(-5.0..5.0),
        );
        let q = q_normalized(&e);
        if q < 0.0 && !is_tangent(q, e.kappa1, e.kappa2, TANGENCY_EPS) && short_bounds_check(&e) {
            return e;
        }
    }
}

struct BuildRow {
    monotone: bool,
    q: f64,
    ends: f64,
    short: bool,
}

fn construction(seed: u64) -> Result<Report> {
    let mut out = Builder::new(7, "Construction of spirals from end data");
    let rows = map_range(500, |i| -> Result<BuildRow> {
        let mut r = rng(seed, 7, i);
        let e = random_short_ends(&mut r);
        let chain = construct_short(&e)?;
        let (far, adj) = chain.pairwise_q();
        let dir = (e.kappa2 - e.kappa1).signum();
        Ok(BuildRow {
            monotone: chain.strictly_monotone(dir),
            q: far.max(adj),
            ends: end_error(&chain, &e.start(), &e.end(), 1.0),
            short: chain.is_short()?,
        })
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let not_mono = rows.iter().filter(|r| !r.monotone).count();
    let not_short = rows.iter().filter(|r| !r.short).count();
    let q = rows.iter().map(|r| r.q).fold(f64::NEG_INFINITY, f64::max);
    let ends = max(rows.iter().map(|r| r.ends));
    out.put("short_inputs", rows.len() as f64);
    out.put("short_not_monotone", not_mono as f64);
    out.put("short_max_pairwise_q", q);
    out.put("short_max_end_error", ends);
    out.put("short_not_short", not_short as f64);
    out.require(not_mono == 0, format!("{not_mono} chains not monotone"));
    out.require(q <= 1e-9, format!("pairwise Q up to {q:e}"));
    out.require(ends <= 1e-9, format!("end data off by {ends:e}"));
    out.require(not_short == 0, format!("{not_short} chains not short"));

    let biarcs = map_range(100, |i| -> Result<f64> {
        let mut r = rng(seed, 7, 1000 + i);
        let lense = loop {
            let l = random_lense(&mut r);
            if l.alpha.abs() < PI - 0.05 && l.beta.abs() < PI - 0.05 {
                break l;
            }
        };
        let spec = BiarcSpec {
            lense,
            b: log_uniform(&mut r, 0.05, 20.0),
        };
        let want = build_biarc(&spec)?;
        let got = construct_short(&biarc_ends(&spec)?)?;
        if got.segments.len() != want.segments.len() {
            return Ok(f64::INFINITY);
        }
        let mut d: f64 = 0.0;
        for (g, w) in got.segments.iter().zip(&want.segments) {
            d = d
                .max(g.start.point().dist(w.start.point()))
                .max(canonicalize(g.start.tau - w.start.tau).abs())
                .max((g.start.k - w.start.k).abs())
                .max((g.length - w.length).abs());
        }
        Ok(d)
    });
    let biarcs = biarcs.into_iter().collect::<Result<Vec<_>>>()?;
    let d = max(biarcs.iter().cloned());
    out.put("biarc_inputs", biarcs.len() as f64);
    out.put("biarc_max_segment_deviation", d);
    out.require(d <= 1e-9, format!("Q = 0 output differs from the biarc by {d:e}"));

    let any = map_range(200, |i| -> Result<f64> {
        let mut r = rng(seed, 7, 2000 + i);
        let (a, b) = loop {
            let a = random_element(&mut r, false);
            let b = random_element(&mut r, false);
            if a.point().dist(b.point()) > 0.1 && exists_any(&a, &b)?.status == Status::SpiralFamily {
                break (a, b);
            }
        };
        let chain = construct_any(&a, &b)?;
        Ok(end_error(&chain, &a, &b, a.point().dist(b.point()) / 2.0))
    });
    let any = any.into_iter().collect::<Result<Vec<_>>>()?;
    let e = max(any.iter().cloned());
    out.put("any_pairs", any.len() as f64);
    out.put("any_max_end_error", e);
    out.require(e <= 1e-8, format!("construct_any end data off by {e:e}"));
    Ok(out.finish(Some(20.0)))
}

fn clothoid_data(a: f64, s0: f64, s1: f64, chords: usize) -> InterpolationData {
    let spec = ClothoidSpec::new(a, s0, s1, chords + 1);
    InterpolationData {
        points: (0..=chords)
            .map(|i| clothoid_point(a, s0 + (s1 - s0) * i as f64 / chords as f64))
            .collect(),
        tau_start: spec.tau(s0),
        tau_end: spec.tau(s1),
    }
}

fn envelope_order() -> Result<Report> {
    let mut out = Builder::new(8, "Envelope width is cubic in the chord length");
    let curves = [(1.0, 0.5, 2.5), (0.7, -1.0, 1.5), (1.5, 1.0, 4.0)];
    let levels = [8usize, 16, 32, 64];
    let mut worst_order_gap: f64 = 0.0;
    let mut uncovered = 0usize;
    for (ci, &(a, s0, s1)) in curves.iter().enumerate() {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for &m in &levels {
            let chain = build_lense_chain(&clothoid_data(a, s0, s1, m))?;
            let dense = 4000;
            uncovered += map_range(dense + 1, |j| {
                let p = clothoid_point(a, s0 + (s1 - s0) * j as f64 / dense as f64);
                !in_envelope(&chain, p)
            })
            .into_iter()
            .filter(|&x| x)
            .count();
            xs.push(((s1 - s0) / m as f64).ln());
            ys.push(chain.max_width().ln());
        }
        let order = slope(&xs, &ys);
        out.put(&format!("order_curve{ci}"), order);
        worst_order_gap = worst_order_gap.max((order - 3.0).abs());
    }
    out.put("max_order_deviation", worst_order_gap);
    out.put("uncovered_points", uncovered as f64);
    out.require(worst_order_gap <= 0.3, format!("order off by {worst_order_gap:.3}"));
    out.require(uncovered == 0, format!("{uncovered} curve points outside the envelope"));
    Ok(out.finish(None))
}

/// Least-squares slope.
fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn fresnel_oracle() -> Result<Report> {
    let mut out = Builder::new(9, "Fresnel integrals");
    let (c1, _) = fresnel(1.0);
    let c1_err = (c1 - 0.779_893_4).abs();
    let overlap = max((0..=400).map(|i| {
        let t = 1.4 + 0.4 * i as f64 / 400.0;
        let (a, b) = fresnel_series(t);
        let (c, d) = fresnel_auxiliary(t);
        (a - c).abs().max((b - d).abs())
    }));
    out.put("c1_error", c1_err);
    out.put("branch_max_difference", overlap);
    out.require(c1_err < 1e-6, format!("C(1) off by {c1_err:e}"));
    out.require(overlap < 1e-9, format!("branches differ by {overlap:e}"));
    Ok(out.finish(None))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_parse() {
        assert_eq!(parse_seed("0x56474F54"), Some(DEFAULT_SEED));
        assert_eq!(parse_seed(" 42 "), Some(42));
        assert_eq!(parse_seed("nope"), None);
    }

    #[test]
    fn streams_are_independent_of_order() {
        let a: f64 = rng(7, 1, 3).gen();
        let _: f64 = rng(7, 1, 2).gen();
        let b: f64 = rng(7, 1, 3).gen();
        assert_eq!(a, b);
        let c: f64 = rng(7, 2, 3).gen();
        assert_ne!(a, c);
    }

    #[test]
    fn unknown_suite() {
        assert!(run(10, 0).is_err());
    }
}
