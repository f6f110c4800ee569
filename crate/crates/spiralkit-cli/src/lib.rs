//! Command-line front end: JSON in and out for the library operations, SVG
//! figures, and the property-suite runner.

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use spiralkit::biarc::{
    b_through_point, biarc_curvatures, bilense_bounds, build_biarc, contact_point, in_bilense, in_lense,
    inscribed_angle, junction_tangent, BiarcSpec, LenseSpec,
};
use spiralkit::clothoid::{sample_clothoid, ClothoidSpec};
use spiralkit::construct::{construct_any, construct_short, exists_any, exists_short, ExistenceVerdict};
use spiralkit::envelope::{build_lense_chain, InterpolationData, LenseChain};
use spiralkit::geometry::{normalize_pair, q_invariant, q_normalized};
use spiralkit::selftest;
use spiralkit::vogt::{
    chord_counters, cumulative_angles_span, is_short, Counters, CumulativeAngles, Monotone, Sample, SampledSpiral,
};
use spiralkit::{svg, CurvatureElement, Error, ErrorClass, NormalizedEnds, Point, Segment};

/// A real number that may be infinite. Finite values are JSON numbers;
/// infinities are the strings "inf" and "-inf".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            v if v.is_finite() => s.serialize_f64(v),
            v if v > 0.0 => s.serialize_str("inf"),
            v if v < 0.0 => s.serialize_str("-inf"),
            _ => s.serialize_str("nan"),
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Real(v)),
            Raw::Str(s) => match s.as_str() {
                "inf" => Ok(Real(f64::INFINITY)),
                "-inf" => Ok(Real(f64::NEG_INFINITY)),
                "nan" => Ok(Real(f64::NAN)),
                _ => Err(serde::de::Error::custom(format!("not a number: {s}"))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Svg,
}

#[derive(Debug, Parser)]
#[command(name = "spiralkit", version, about = "Spiral arcs of monotone curvature")]
pub struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_element(s: &str) -> Result<CurvatureElement, String> {
    let t = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    let v: Vec<f64> = t
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [x, y, tau, k] => Ok(CurvatureElement::new(x, y, tau, k)),
        _ => Err(format!("expected (x,y,tau,k), got {} numbers", v.len())),
    }
}

fn parse_point(s: &str) -> Result<Point, String> {
    let t = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    let v: Vec<f64> = t
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [x, y] => Ok(Point::new(x, y)),
        _ => Err(format!("expected x,y, got {} numbers", v.len())),
    }
}

/// Normalized end data: boundary angles and normalized curvatures.
#[derive(Debug, Clone, Args)]
pub struct EndsArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub kappa1: f64,
    #[arg(long)]
    pub kappa2: f64,
}

impl EndsArgs {
    fn ends(&self) -> Result<NormalizedEnds, CliError> {
        finite(&[("alpha", self.alpha), ("beta", self.beta), ("kappa1", self.kappa1), ("kappa2", self.kappa2)])?;
        Ok(NormalizedEnds::new(self.alpha, self.beta, self.kappa1, self.kappa2))
    }
}

/// Either two curvature elements or normalized end data.
#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    #[arg(long, value_parser = parse_element, requires = "k2", conflicts_with_all = ["alpha", "beta", "kappa1", "kappa2"])]
    pub k1: Option<CurvatureElement>,
    #[arg(long, value_parser = parse_element, requires = "k1")]
    pub k2: Option<CurvatureElement>,
    #[arg(long, requires_all = ["beta", "kappa1", "kappa2"])]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub kappa1: Option<f64>,
    #[arg(long)]
    pub kappa2: Option<f64>,
}

enum Pair {
    Elements(CurvatureElement, CurvatureElement),
    Normalized(NormalizedEnds),
}

impl PairArgs {
    fn pair(&self) -> Result<Pair, CliError> {
        match (self.k1, self.k2, self.alpha, self.beta, self.kappa1, self.kappa2) {
            (Some(a), Some(b), ..) => {
                if !(a.is_finite() && b.is_finite()) {
                    return Err(CliError::validation("curvature elements must be finite"));
                }
                Ok(Pair::Elements(a, b))
            }
            (None, None, Some(alpha), Some(beta), Some(kappa1), Some(kappa2)) => EndsArgs {
                alpha,
                beta,
                kappa1,
                kappa2,
            }
            .ends()
            .map(Pair::Normalized),
            _ => Err(CliError::validation("give --k1 and --k2, or --alpha --beta --kappa1 --kappa2")),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inversive invariant of two circles.
    #[command(allow_negative_numbers = true)]
    Q(PairArgs),
    /// Cumulative angles, counters and shortness of a sampled curve file.
    #[command(allow_negative_numbers = true)]
    Vogt {
        #[arg(long)]
        input: PathBuf,
        /// First and last sample index of a subarc.
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        span: Option<Vec<usize>>,
    },
    /// One member of the normalized biarc family.
    #[command(allow_negative_numbers = true)]
    Biarc {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        /// Family parameter; 0 and inf are allowed.
        #[arg(long)]
        b: f64,
    },
    /// The biarc family over a log-spaced grid of b.
    #[command(allow_negative_numbers = true)]
    BiarcFan {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0.1)]
        b_min: f64,
        #[arg(long, default_value_t = 10.0)]
        b_max: f64,
        #[arg(long, default_value_t = 9)]
        count: usize,
    },
    /// Lense membership of query points.
    #[command(allow_negative_numbers = true)]
    Lense {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long = "point", value_parser = parse_point)]
        points: Vec<Point>,
    },
    /// Bilense bounds and membership of query points.
    #[command(allow_negative_numbers = true)]
    Bilense {
        #[command(flatten)]
        ends: EndsArgs,
        #[arg(long = "point", value_parser = parse_point)]
        points: Vec<Point>,
    },
    /// Existence of a short spiral and of a spiral of any length.
    #[command(allow_negative_numbers = true)]
    Exists(PairArgs),
    /// Three-arc spiral: short in the normalized frame, or joining two elements.
    #[command(allow_negative_numbers = true)]
    Construct(PairArgs),
    /// Lense chain of interpolation data read from a file.
    Envelope {
        #[arg(long)]
        input: PathBuf,
    },
    /// Sampled clothoid k(s) = s / a^2 in the sampled-curve file format.
    #[command(allow_negative_numbers = true)]
    Clothoid {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long)]
        s_min: f64,
        #[arg(long)]
        s_max: f64,
        #[arg(long, default_value_t = 1001)]
        n: usize,
    },
    /// Run the property suites. SPIRALKIT_SEED sets the seed unless --seed is given.
    Selftest {
        #[arg(long = "suite")]
        suites: Vec<u8>,
        #[arg(long)]
        seed: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliError {
    pub error: String,
    pub class: String,
    pub message: String,
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError {
            error: "InvalidInput".into(),
            class: "validation".into(),
            message: msg.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.class.as_str() {
            "validation" => 2,
            "infeasible" => 3,
            "resolution" => 4,
            _ => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let class = match e.class() {
            ErrorClass::Validation => "validation",
            ErrorClass::Infeasible => "infeasible",
            ErrorClass::Resolution => "resolution",
        };
        CliError {
            error: e.code().into(),
            class: class.into(),
            message: e.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.error, self.message)
    }
}

fn finite(vals: &[(&str, f64)]) -> Result<(), CliError> {
    for (name, v) in vals {
        if !v.is_finite() {
            return Err(CliError::validation(format!("{name} must be finite")));
        }
    }
    Ok(())
}

/// The sampled-curve file: `{"S": length, "samples": [[s,x,y,tau,k_left,k_right?], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFile {
    #[serde(rename = "S")]
    pub total: f64,
    pub samples: Vec<Vec<f64>>,
}

impl SampledFile {
    pub fn from_spiral(c: &SampledSpiral) -> Self {
        SampledFile {
            total: c.total_length(),
            samples: c
                .samples()
                .iter()
                .map(|p| {
                    let mut row = vec![p.s, p.x, p.y, p.tau, p.k_left];
                    if p.k_right != p.k_left {
                        row.push(p.k_right);
                    }
                    row
                })
                .collect(),
        }
    }

    pub fn to_spiral(&self) -> Result<SampledSpiral, CliError> {
        let mut samples = Vec::with_capacity(self.samples.len());
        for (i, row) in self.samples.iter().enumerate() {
            let (k_left, k_right) = match row[..] {
                [_, _, _, _, kl] => (kl, kl),
                [_, _, _, _, kl, kr] => (kl, kr),
                _ => return Err(CliError::validation(format!("sample {i} needs 5 or 6 numbers"))),
            };
            samples.push(Sample {
                s: row[0],
                x: row[1],
                y: row[2],
                tau: row[3],
                k_left,
                k_right,
            });
        }
        if let (Some(a), Some(b)) = (samples.first(), samples.last()) {
            let span = b.s - a.s;
            if (span - self.total).abs() > 1e-9 * self.total.abs().max(1.0) {
                return Err(CliError::validation(format!("S = {} but samples span {span}", self.total)));
            }
        }
        let k0 = samples.first().map(|p| p.k_left);
        let circular = samples.iter().all(|p| Some(p.k_left) == k0 && Some(p.k_right) == k0);
        Ok(SampledSpiral::new(samples, circular)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QResponse {
    #[serde(rename = "Q")]
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VogtResponse {
    pub ends: NormalizedEnds,
    pub angles: CumulativeAngles,
    pub counters: Counters,
    pub monotone: Monotone,
    pub short: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiarcResponse {
    pub alpha: f64,
    pub beta: f64,
    pub b: Real,
    #[serde(rename = "T")]
    pub t: Point,
    pub tau0: f64,
    pub kappa1: Real,
    pub kappa2: Real,
    #[serde(rename = "L")]
    pub length: f64,
    pub segments: Vec<Segment>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FanResponse {
    pub biarcs: Vec<BiarcResponse>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LensePoint {
    pub p: Point,
    pub inside: bool,
    /// Inscribed angle: the point lies on the chord arc A(xi).
    pub xi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LenseResponse {
    pub alpha: f64,
    pub beta: f64,
    pub omega: f64,
    pub gamma: f64,
    pub points: Vec<LensePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BilensePoint {
    pub p: Point,
    pub inside: bool,
    /// Member of the biarc family through the point; absent at the poles.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub b: Option<Real>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BilenseResponse {
    pub b1: Real,
    pub b2: Real,
    pub points: Vec<BilensePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExistsResponse {
    #[serde(flatten)]
    pub short: ExistenceVerdict,
    pub any: ExistenceVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructResponse {
    /// `short` for normalized end data, `any` for two elements.
    pub method: String,
    pub segments: Vec<Segment>,
    pub length: f64,
    pub curvatures: Vec<f64>,
    pub short: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeResponse {
    #[serde(flatten)]
    pub chain: LenseChain,
    pub max_width: f64,
    pub all_very_short: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub seconds: f64,
    pub metrics: std::collections::BTreeMap<String, f64>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestResponse {
    pub seed: u64,
    pub parallel: bool,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

/// What a command produced, and the exit code for a successful run.
pub struct Output {
    pub text: String,
    pub code: i32,
}

fn json<T: Serialize>(v: &T) -> Result<Output, CliError> {
    let text = serde_json::to_string(v).map_err(|e| CliError {
        error: "Internal".into(),
        class: "infeasible".into(),
        message: e.to_string(),
    })?;
    Ok(Output { text, code: 0 })
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &PathBuf) -> Result<T, CliError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&raw).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

fn biarc_report(alpha: f64, beta: f64, b: f64) -> Result<BiarcResponse, CliError> {
    let spec = BiarcSpec::new(alpha, beta, b);
    let (k1, k2) = biarc_curvatures(&spec)?;
    let chain = build_biarc(&spec)?;
    Ok(BiarcResponse {
        alpha,
        beta,
        b: Real(b),
        t: contact_point(&spec)?,
        tau0: junction_tangent(&spec)?,
        kappa1: Real(k1),
        kappa2: Real(k2),
        length: chain.total_length(),
        segments: chain.segments,
    })
}

fn svg_only(format: Format, name: &str) -> Result<(), CliError> {
    if format == Format::Svg {
        return Err(CliError::validation(format!("{name} has no SVG output")));
    }
    Ok(())
}

fn svg_text(text: String) -> Result<Output, CliError> {
    Ok(Output { text, code: 0 })
}

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let fmt = |default: Format| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Q(args) => {
            svg_only(fmt(Format::Json), "q")?;
            let q = match args.pair()? {
                Pair::Elements(a, b) => q_invariant(&a, &b),
                Pair::Normalized(e) => q_normalized(&e),
            };
            json(&QResponse { q })
        }
        Command::Vogt { input, span } => {
            svg_only(fmt(Format::Json), "vogt")?;
            let file: SampledFile = read_json(input)?;
            let curve = file.to_spiral()?;
            let (u, v) = match span.as_deref() {
                Some([u, v]) => (*u, *v),
                _ => (0, curve.len() - 1),
            };
            let angles = cumulative_angles_span(&curve, u, v)?;
            let sub = if (u, v) == (0, curve.len() - 1) {
                curve.clone()
            } else {
                let s0 = curve.samples()[u].s;
                let part = curve.samples()[u..=v].iter().map(|p| Sample { s: p.s - s0, ..*p }).collect();
                SampledSpiral::new(part, curve.circular())?
            };
            json(&VogtResponse {
                ends: sub.ends()?,
                angles,
                counters: chord_counters(&sub)?,
                monotone: sub.monotone(),
                short: is_short(&sub)?,
            })
        }
        Command::Biarc { alpha, beta, b } => {
            finite(&[("alpha", *alpha), ("beta", *beta)])?;
            if b.is_nan() {
                return Err(CliError::validation("b is NaN"));
            }
            match fmt(Format::Json) {
                Format::Json => json(&biarc_report(*alpha, *beta, *b)?),
                Format::Svg => svg_text(svg::biarc_fan(&LenseSpec::new(*alpha, *beta), &[*b])?),
            }
        }
        Command::BiarcFan {
            alpha,
            beta,
            b_min,
            b_max,
            count,
        } => {
            finite(&[("alpha", *alpha), ("beta", *beta), ("b-min", *b_min), ("b-max", *b_max)])?;
            if !(*b_min > 0.0 && b_min <= b_max) || *count == 0 {
                return Err(CliError::validation("need 0 < b-min <= b-max and count >= 1"));
            }
            let bs: Vec<f64> = (0..*count)
                .map(|i| {
                    if *count == 1 {
                        *b_min
                    } else {
                        let t = i as f64 / (*count - 1) as f64;
                        (b_min.ln() + t * (b_max.ln() - b_min.ln())).exp()
                    }
                })
                .collect();
            match fmt(Format::Svg) {
                Format::Svg => svg_text(svg::biarc_fan(&LenseSpec::new(*alpha, *beta), &bs)?),
                Format::Json => json(&FanResponse {
                    biarcs: bs
                        .iter()
                        .map(|&b| biarc_report(*alpha, *beta, b))
                        .collect::<Result<_, _>>()?,
                }),
            }
        }
        Command::Lense { alpha, beta, points } => {
            finite(&[("alpha", *alpha), ("beta", *beta)])?;
            let lense = LenseSpec::new(*alpha, *beta);
            if lense.is_degenerate() {
                return Err(Error::DegenerateLense.into());
            }
            let pts: Vec<LensePoint> = points
                .iter()
                .map(|&p| LensePoint {
                    p,
                    inside: in_lense(&lense, p),
                    xi: inscribed_angle(p),
                })
                .collect();
            match fmt(Format::Json) {
                Format::Json => json(&LenseResponse {
                    alpha: *alpha,
                    beta: *beta,
                    omega: lense.omega(),
                    gamma: lense.gamma(),
                    points: pts,
                }),
                Format::Svg => {
                    let marks: Vec<(Point, bool)> = pts.iter().map(|q| (q.p, q.inside)).collect();
                    svg_text(svg::lense_figure(&lense, &marks))
                }
            }
        }
        Command::Bilense { ends, points } => {
            let e = ends.ends()?;
            let (b1, b2) = bilense_bounds(&e)?;
            let lense = LenseSpec::from(&e);
            let mut pts = Vec::with_capacity(points.len());
            for &p in points {
                let b = match b_through_point(&lense, p) {
                    Ok(b) => Some(Real(b)),
                    Err(Error::PolePoint) => None,
                    Err(err) => return Err(err.into()),
                };
                pts.push(BilensePoint {
                    p,
                    inside: in_bilense(&e, p)?,
                    b,
                });
            }
            match fmt(Format::Json) {
                Format::Json => json(&BilenseResponse {
                    b1: Real(b1),
                    b2: Real(b2),
                    points: pts,
                }),
                Format::Svg => {
                    let marks: Vec<(Point, bool)> = pts.iter().map(|q| (q.p, q.inside)).collect();
                    svg_text(svg::bilense_figure(&e, (b1, b2), &marks)?)
                }
            }
        }
        Command::Exists(args) => {
            svg_only(fmt(Format::Json), "exists")?;
            let (e, a, b) = match args.pair()? {
                Pair::Elements(a, b) => (normalize_pair(&a, &b)?.0, a, b),
                Pair::Normalized(e) => (e, e.start(), e.end()),
            };
            json(&ExistsResponse {
                short: exists_short(&e),
                any: exists_any(&a, &b)?,
            })
        }
        Command::Construct(args) => {
            let (method, chain, ends) = match args.pair()? {
                Pair::Elements(a, b) => ("any", construct_any(&a, &b)?, None),
                Pair::Normalized(e) => ("short", construct_short(&e)?, Some(e)),
            };
            match fmt(Format::Json) {
                Format::Json => json(&ConstructResponse {
                    method: method.into(),
                    length: chain.total_length(),
                    curvatures: chain.curvatures(),
                    short: chain.is_short()?,
                    segments: chain.segments,
                }),
                Format::Svg => {
                    let (e, shown) = match ends {
                        Some(e) => (e, chain),
                        None => {
                            // draw in the normalized frame of the end elements
                            let (e, sim) = normalize_pair(&chain.start(), &chain.end())?;
                            (e, chain.transformed(&sim))
                        }
                    };
                    svg_text(svg::construct_figure(&e, bilense_bounds(&e).ok(), &shown)?)
                }
            }
        }
        Command::Envelope { input } => {
            let data: InterpolationData = read_json(input)?;
            let chain = build_lense_chain(&data)?;
            match fmt(Format::Json) {
                Format::Json => json(&EnvelopeResponse {
                    max_width: chain.max_width(),
                    all_very_short: chain.all_very_short(),
                    chain,
                }),
                Format::Svg => svg_text(svg::envelope_figure(&data, &chain)),
            }
        }
        Command::Clothoid { a, s_min, s_max, n } => {
            svg_only(fmt(Format::Json), "clothoid")?;
            let c = sample_clothoid(&ClothoidSpec::new(*a, *s_min, *s_max, *n))?;
            json(&SampledFile::from_spiral(&c))
        }
        Command::Selftest { suites, seed } => {
            svg_only(fmt(Format::Json), "selftest")?;
            let seed = match seed {
                Some(s) => selftest::parse_seed(s).ok_or_else(|| CliError::validation(format!("bad seed {s:?}")))?,
                None => selftest::seed_from_env(),
            };
            let ids: Vec<u8> = if suites.is_empty() {
                selftest::SUITES.to_vec()
            } else {
                suites.clone()
            };
            let mut reports = Vec::with_capacity(ids.len());
            for id in ids {
                let r = selftest::run(id, seed)?;
                reports.push(SuiteReport {
                    id: r.id,
                    name: r.name.into(),
                    passed: r.passed,
                    seconds: r.seconds,
                    metrics: r.metrics,
                    failures: r.failures,
                });
            }
            let passed = reports.iter().all(|r| r.passed);
            let mut out = json(&SelftestResponse {
                seed,
                parallel: spiralkit::par::is_parallel(),
                passed,
                suites: reports,
            })?;
            if !passed {
                out.code = 1;
            }
            Ok(out)
        }
    }
}

/// Parses `argv`, runs the command, writes the result, and returns the exit
/// code. Errors go to stderr as JSON.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            let err = CliError {
                error: "Usage".into(),
                class: "validation".into(),
                message: e.to_string().trim().to_string(),
            };
            report(&err);
            return 2;
        }
    };
    let result = execute(&cli).and_then(|out| {
        let mut text = out.text;
        text.push('\n');
        match &cli.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display())))?,
            None => print!("{text}"),
        }
        Ok(out.code)
    });
    match result {
        Ok(code) => code,
        Err(err) => {
            report(&err);
            err.exit_code()
        }
    }
}

fn report(err: &CliError) {
    match serde_json::to_string(err) {
        Ok(s) => eprintln!("{s}"),
        Err(_) => eprintln!("{err}"),
    }
}
