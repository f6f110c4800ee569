use std::path::PathBuf;
use std::process::{Command, Output};

use serde::de::DeserializeOwned;
use serde::Serialize;
use spiralkit_cli::*;

fn spiralkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spiralkit"))
        .args(args)
        .env_remove("SPIRALKIT_SEED")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = spiralkit(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn failure(args: &[&str]) -> (i32, CliError) {
    let out = spiralkit(args);
    assert!(out.stdout.is_empty());
    let err: CliError = serde_json::from_slice(&out.stderr).expect("stderr is one JSON object");
    (out.status.code().unwrap(), err)
}

/// Parses into the response type and checks the re-serialized text is identical.
fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(text: &str) -> T {
    let v: T = serde_json::from_str(text).unwrap();
    assert_eq!(serde_json::to_string(&v).unwrap(), text.trim_end());
    let again: T = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);
    v
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spiralkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn q_of_two_unit_circles() {
    let r: QResponse = round_trip(&ok(&["q", "--k1", "(-1,0,0,-1)", "--k2", "(1,0,0,1)"]));
    assert!((r.q + 1.0).abs() < 1e-12);
}

#[test]
fn q_normalized_form() {
    let r: QResponse = round_trip(&ok(&["q", "--alpha", "0.2", "--beta", "0.2", "--kappa1", "-1", "--kappa2", "1"]));
    assert!((r.q + 0.602_661_338_409_877_6).abs() < 1e-14);
}

#[test]
fn biarc_quarter_turn() {
    let r: BiarcResponse = round_trip(&ok(&["biarc", "--alpha", "1.5707963", "--beta", "0", "--b", "1"]));
    assert!(r.t.x.abs() < 1e-7 && (r.t.y - 0.41421356).abs() < 1e-7, "{:?}", r.t);
    assert!((r.tau0 + std::f64::consts::FRAC_PI_4).abs() < 1e-7);
    assert_eq!(r.segments.len(), 2);
    let sum: f64 = r.segments.iter().map(|s| s.length).sum();
    assert!((sum - r.length).abs() < 1e-12);
}

#[test]
fn biarc_at_infinity_keeps_the_infinite_curvature() {
    let text = ok(&["biarc", "--alpha", "1", "--beta", "0.5", "--b", "inf"]);
    assert!(text.contains("\"kappa2\":\"inf\""), "{text}");
    let r: BiarcResponse = round_trip(&text);
    assert_eq!(r.b, Real(f64::INFINITY));
    assert_eq!(r.t, spiralkit::Point::new(1.0, 0.0));
}

#[test]
fn exists_reports_both_verdicts() {
    let text = ok(&["exists", "--alpha", "0.2", "--beta", "0.2", "--kappa1", "-1", "--kappa2", "1"]);
    assert!(text.starts_with("{\"status\":\"spiral_family\",\"Q\":-0.60266"), "{text}");
    let r: ExistsResponse = round_trip(&text);
    assert_eq!(format!("{:.5}", r.short.q_value), "-0.60266");
    assert_eq!(r.any.status, spiralkit::construct::Status::SpiralFamily);

    // decreasing curvature with alpha + beta > 0 breaks the sign rule
    let r: ExistsResponse = round_trip(&ok(&["exists", "--alpha", "0.2", "--beta", "0.2", "--kappa1", "1", "--kappa2", "-1"]));
    assert_eq!(r.short.status, spiralkit::construct::Status::None);
    assert_eq!(r.short.reason, Some(spiralkit::Reason::VogtSign));
}

#[test]
fn construct_short_chain() {
    let r: ConstructResponse =
        round_trip(&ok(&["construct", "--alpha", "-0.3", "--beta", "0.9", "--kappa1", "-0.6", "--kappa2", "1.3"]));
    assert_eq!(r.method, "short");
    assert!(r.short);
    assert_eq!(r.segments.len(), 3);
    assert!(r.curvatures.windows(2).all(|w| w[1] > w[0]));
    let s = r.segments[0].start;
    assert_eq!((s.x, s.y, s.tau, s.k), (-1.0, 0.0, -0.3, -0.6));
}

#[test]
fn construct_between_concentric_circles() {
    let r: ConstructResponse = round_trip(&ok(&["construct", "--k1", "(0,-1,0,1)", "--k2", "(0,-2,0.5,0.5)"]));
    assert_eq!(r.method, "any");
    let chain = spiralkit::MultiArcCurve::new(r.segments);
    let e = chain.end();
    assert!(e.x.abs() < 1e-8 && (e.y + 2.0).abs() < 1e-8, "{e:?}");
    assert!(chain.is_g1(1e-9));
}

#[test]
fn lense_and_bilense_queries() {
    let r: LenseResponse =
        round_trip(&ok(&["lense", "--alpha", "1", "--beta", "0.5", "--point", "0,0.1", "--point", "0,-1"]));
    assert!(r.points[0].inside && !r.points[1].inside);
    assert!((r.omega - 0.75).abs() < 1e-15 && (r.gamma - 0.25).abs() < 1e-15);

    let r: BilenseResponse = round_trip(&ok(&[
        "bilense", "--alpha", "0.2", "--beta", "0.2", "--kappa1", "-1", "--kappa2", "1", "--point", "0,0", "--point=-1,0",
    ]));
    assert!((r.b1.0 - 0.247_924_281_984_834_3).abs() < 1e-13);
    assert!((r.b2.0 - 4.033_489_547_672_344).abs() < 1e-13);
    assert!(r.points[0].inside);
    assert_eq!(r.points[0].b, Some(Real(1.0)));
    // the pole has no family member
    assert!(!r.points[1].inside && r.points[1].b.is_none());
}

#[test]
fn clothoid_file_feeds_vogt() {
    let path = scratch("clothoid.json");
    let p = path.to_str().unwrap();
    ok(&["clothoid", "--s-min", "0", "--s-max", "3.5", "--n", "2001", "--out", p]);
    let file: SampledFile = round_trip(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(file.samples.len(), 2001);
    assert!(file.samples.iter().all(|r| r.len() == 5));

    let r: VogtResponse = round_trip(&ok(&["vogt", "--input", p]));
    assert_eq!((r.counters.n1, r.counters.n2, r.counters.m1, r.counters.m2), (0, 1, 0, 1));
    assert!(!r.short);
    let tau_end = 3.5f64 * 3.5 / 2.0;
    assert!((r.angles.rho - tau_end).abs() < 1e-12);

    let r: VogtResponse = round_trip(&ok(&["vogt", "--input", p, "--span", "100", "1500"]));
    assert!(r.short);
    assert_eq!(r.counters.n2, 0);
}

#[test]
fn sampled_file_k_right_column() {
    let path = scratch("biarc-samples.json");
    let rows = [
        [0.0, -1.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0, 0.0],
    ];
    let mut samples: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
    samples[1].push(0.5);
    let mut tail: Vec<Vec<f64>> = (1..=8)
        .map(|i| {
            let t = 0.25 * i as f64;
            vec![1.0 + 2.0 * t, 2.0 * t.sin(), 2.0 - 2.0 * t.cos(), t, 0.5]
        })
        .collect();
    samples.append(&mut tail);
    let file = SampledFile { total: 5.0, samples };
    std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    let r: VogtResponse = round_trip(&ok(&["vogt", "--input", path.to_str().unwrap()]));
    assert_eq!(r.monotone, spiralkit::vogt::Monotone::Increasing);
    assert!((r.angles.rho - 2.0).abs() < 1e-12);

    // S must match the sample span
    let bad = SampledFile { total: 4.0, ..file };
    std::fs::write(&path, serde_json::to_string(&bad).unwrap()).unwrap();
    let (code, err) = failure(&["vogt", "--input", path.to_str().unwrap()]);
    assert_eq!((code, err.class.as_str()), (2, "validation"));
}

#[test]
fn envelope_json_and_svg() {
    let path = scratch("points.json");
    let points: Vec<[f64; 2]> = (0..9).map(|i| [0.5 * i as f64, (0.5 * i as f64).sin()]).collect();
    let data = serde_json::json!({"points": points, "tau_start": 1f64.atan(), "tau_end": 4f64.cos().atan()});
    std::fs::write(&path, data.to_string()).unwrap();
    let p = path.to_str().unwrap();
    let r: EnvelopeResponse = round_trip(&ok(&["envelope", "--input", p]));
    assert_eq!(r.chain.lenses.len(), 8);
    assert_eq!(r.chain.trend, spiralkit::envelope::Trend::NotMonotone);
    let svg = ok(&["envelope", "--input", p, "--format", "svg"]);
    assert_eq!(svg.matches("class=\"lense\"").count(), 16);
    assert_eq!(svg.matches("class=\"point\"").count(), 9);
}

#[test]
fn svg_is_deterministic_and_flipped() {
    let args = ["biarc-fan", "--alpha", "1", "--beta", "0.4", "--count", "5"];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    assert!(a.starts_with("<?xml"));
    assert_eq!(a.matches("class=\"arc\"").count(), 5);
    assert!(a.contains("class=\"gamma-circle\""));
    let l = ok(&["lense", "--alpha", "1", "--beta", "0.5", "--point", "0.2,0.1", "--format", "svg"]);
    assert!(l.contains("cx=\"0.2\" cy=\"-0.1\""), "{l}");

    let c = ok(&[
        "construct", "--alpha", "-0.3", "--beta", "0.9", "--kappa1", "-0.6", "--kappa2", "1.3", "--format", "svg",
    ]);
    for class in ["spiral", "lense", "bilense"] {
        assert!(c.contains(&format!("class=\"{class}\"")), "{class}");
    }
    let b = ok(&["bilense", "--alpha", "0.2", "--beta", "0.2", "--kappa1", "-1", "--kappa2", "1", "--format", "svg"]);
    assert_eq!(b.matches("class=\"bilense\"").count(), 2);
}

#[test]
fn fan_as_json() {
    let r: FanResponse = round_trip(&ok(&["biarc-fan", "--alpha", "1", "--beta", "0.4", "--count", "3", "--format", "json"]));
    let bs: Vec<f64> = r.biarcs.iter().map(|b| b.b.0).collect();
    assert!((bs[0] - 0.1).abs() < 1e-15 && (bs[1] - 1.0).abs() < 1e-15 && (bs[2] - 10.0).abs() < 1e-12);
    // length is monotone in b when alpha != beta
    assert!(r.biarcs.windows(2).all(|w| w[0].length != w[1].length));
}

#[test]
fn exit_codes() {
    let (code, err) = failure(&["q", "--alpha", "1"]);
    assert_eq!((code, err.class.as_str()), (2, "validation"));
    let (code, _) = failure(&["biarc", "--alpha", "nan", "--beta", "0", "--b", "1"]);
    assert_eq!(code, 2);
    let (code, err) = failure(&["vogt", "--input", "/nonexistent/file.json"]);
    assert_eq!((code, err.error.as_str()), (2, "InvalidInput"));
    let (code, err) = failure(&["q", "--k1", "(0,0,0)", "--k2", "(1,0,0,1)"]);
    assert_eq!((code, err.error.as_str()), (2, "Usage"));
    let (code, err) = failure(&["q", "--k1", "(0,0,0,1)", "--k2", "(1,0,0,1)", "--format", "svg"]);
    assert_eq!((code, err.class.as_str()), (2, "validation"));

    let (code, err) = failure(&["construct", "--alpha", "2", "--beta", "2", "--kappa1", "1", "--kappa2", "1"]);
    assert_eq!((code, err.error.as_str()), (3, "NoSpiralExists"));
    let (code, err) = failure(&["bilense", "--alpha", "0.2", "--beta", "0.2", "--kappa1", "3", "--kappa2", "3"]);
    assert_eq!((code, err.error.as_str()), (3, "NotASpiralPair"));
    let (code, err) = failure(&["lense", "--alpha", "1", "--beta", "-1"]);
    assert_eq!((code, err.error.as_str()), (3, "DegenerateLense"));

    let (code, err) = failure(&["clothoid", "--s-min", "0", "--s-max", "20", "--n", "16"]);
    assert_eq!((code, err.class.as_str()), (4, "resolution"));
}

#[test]
fn help_exits_cleanly() {
    let out = spiralkit(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for cmd in ["q", "vogt", "biarc", "biarc-fan", "lense", "bilense", "exists", "construct", "envelope", "clothoid", "selftest"] {
        assert!(text.contains(&format!("  {cmd} ")), "{cmd}");
    }
}

#[test]
fn selftest_single_suites() {
    let r: SelftestResponse = serde_json::from_str(&ok(&["selftest", "--suite", "9", "--suite", "1"])).unwrap();
    assert_eq!(r.seed, 0x5647_4F54);
    assert!(r.passed);
    assert_eq!(r.suites.iter().map(|s| s.id).collect::<Vec<_>>(), [9, 1]);

    let out = Command::new(env!("CARGO_BIN_EXE_spiralkit"))
        .args(["selftest", "--suite", "9"])
        .env("SPIRALKIT_SEED", "0x10")
        .output()
        .unwrap();
    let r: SelftestResponse = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.seed, 16);

    let (code, _) = failure(&["selftest", "--suite", "12"]);
    assert_eq!(code, 2);
}
