//! Acceptance thresholds applied to the property-suite reports. Each suite
//! reports what it measured; the limits live here so a suite cannot grade
//! itself.

use spiralkit::selftest::Report;

pub type Check = (bool, String);

fn at_most(r: &Report, key: &str, limit: f64) -> Check {
    let v = r.metric(key);
    (v <= limit, format!("{key} = {v:.3e} (limit {limit:e})"))
}

fn below(r: &Report, key: &str, limit: f64) -> Check {
    let v = r.metric(key);
    (v < limit, format!("{key} = {v:.3e} (strictly below {limit:e})"))
}

fn zero(r: &Report, key: &str) -> Check {
    let v = r.metric(key);
    (v == 0.0, format!("{key} = {v}"))
}

fn count(r: &Report, key: &str, n: f64) -> Check {
    let v = r.metric(key);
    (v == n, format!("{key} = {v} (want {n})"))
}

fn runtime(r: &Report, limit: f64) -> Check {
    (r.seconds < limit, format!("runtime {:.3} s (limit {limit} s)", r.seconds))
}

pub fn checks(r: &Report) -> Vec<Check> {
    match r.id {
        1 => vec![
            count(r, "pairs", 1000.0),
            at_most(r, "max_rel_dev_similarity", 1e-8),
            at_most(r, "max_rel_dev_inversion", 1e-8),
            at_most(r, "max_rel_dev_representation", 1e-9),
            (r.metric("pairs_case_line") > 0.0, "line/circle representation exercised".into()),
            (r.metric("pairs_case_crossing") > 0.0, "crossing-angle representation exercised".into()),
            runtime(r, 2.0),
        ],
        2 => vec![
            count(r, "pairs", 5000.0),
            at_most(r, "max_q", 1e-9),
            zero(r, "violations_q_over_-1e-6"),
            runtime(r, 5.0),
        ],
        3 => vec![
            count(r, "short_arcs", 200.0),
            zero(r, "short_sign_failures"),
            zero(r, "short_bounds_failures"),
            (r.metric("short_min_abs_alpha_plus_beta") > 1e-9, "|alpha + beta| > 1e-9".into()),
            count(r, "nested_spans", 400.0),
            zero(r, "nested_sign_failures"),
            zero(r, "nested_monotone_failures"),
        ],
        4 => vec![
            count(r, "curves", 30.0),
            zero(r, "counter_mismatches"),
            at_most(r, "max_cumulative_angle_error", 1e-6),
            (
                (0..3).all(|n| r.metric(&format!("sides_with_n{n}")) > 0.0),
                "N = 0, 1 and 2 all occur".into(),
            ),
        ],
        5 => vec![
            below(r, "locus_max_residual", 1e-9),
            below(r, "roundtrip_max_rel_error", 1e-8),
            count(r, "length_lenses", 50.0),
            zero(r, "length_not_strictly_monotone"),
            at_most(r, "symmetric_length_spread", 1e-10),
            at_most(r, "symmetric_closed_form_error", 1e-10),
        ],
        6 => vec![
            count(r, "points", 500_000.0),
            zero(r, "outside_lense"),
            zero(r, "outside_bilense"),
            zero(r, "b_decreasing_steps"),
        ],
        7 => vec![
            count(r, "short_inputs", 500.0),
            zero(r, "short_not_monotone"),
            at_most(r, "short_max_pairwise_q", 1e-9),
            at_most(r, "short_max_end_error", 1e-9),
            zero(r, "short_not_short"),
            at_most(r, "biarc_max_segment_deviation", 1e-9),
            count(r, "any_pairs", 200.0),
            at_most(r, "any_max_end_error", 1e-8),
            runtime(r, 20.0),
        ],
        8 => vec![at_most(r, "max_order_deviation", 0.3), zero(r, "uncovered_points")],
        9 => vec![below(r, "c1_error", 1e-6), below(r, "branch_max_difference", 1e-9)],
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn report(id: u8, metrics: &[(&str, f64)]) -> Report {
        Report {
            id,
            name: "t",
            passed: true,
            seconds: 0.1,
            metrics: metrics.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>(),
            failures: vec![],
        }
    }

    #[test]
    fn limits_are_applied_to_metrics() {
        let good = report(9, &[("c1_error", 3.8e-10), ("branch_max_difference", 1e-15)]);
        assert!(checks(&good).iter().all(|c| c.0));
        let bad = report(9, &[("c1_error", 2e-6), ("branch_max_difference", 1e-9)]);
        assert!(checks(&bad).iter().all(|c| !c.0));
    }

    #[test]
    fn strict_clause_counts_violations() {
        let r = report(2, &[("pairs", 5000.0), ("max_q", -1e-18), ("violations_q_over_-1e-6", 1.0)]);
        let failed: Vec<_> = checks(&r).into_iter().filter(|c| !c.0).collect();
        assert_eq!(failed.len(), 1);
        assert!(failed[0].1.starts_with("violations_q_over_-1e-6"));
    }
}
