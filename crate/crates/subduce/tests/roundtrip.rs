mod common;

use common::{data, run};
use serde::de::DeserializeOwned;
use serde::Serialize;
use subduce::cli::{ConeJson, TangencyJson};
use subduce::format::{
    ChartJson, LiftSolutionJson, NormSpecJson, So4Dump, SubducedValueJson, SubmersionReportJson, SurjectionJson,
    VerificationReportJson,
};
use subduce::{load_json, parse_json, to_json};
use subduce_core::chart::ChartFinsler;
use subduce_core::{LinearSurjection, NormSpec};

fn reparses<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(text: &str) {
    let value: T = parse_json(text, "output").unwrap();
    assert_eq!(to_json(&value).unwrap(), text);
    let again: T = parse_json(&to_json(&value).unwrap(), "output").unwrap();
    assert_eq!(again, value);
}

fn commands() -> Vec<Vec<String>> {
    let s = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    vec![
        s(&["verify-norm", "--norm", &data("ftilde.json"), "--samples", "50"]),
        s(&["lift", "--norm", &data("ftilde.json"), "--mu", &data("so4_m_proj.json"), "--v", "0.3,-1.7,0.25"]),
        s(&["subduce", "--norm", &data("randers.json"), "--mu", &data("proj.json"), "--v", "0.7"]),
        s(&[
            "verify-submersion",
            "--norm",
            &data("randers.json"),
            "--mu",
            &data("proj.json"),
            "--target",
            &data("randers_subduced.json"),
            "--samples",
            "40",
        ]),
        s(&["tangency", "--chart", &data("chart_x.json"), "--x", "0.1", "--y", "0.2", "--v", "1.5", "--y2", "0.9"]),
        s(&["so4-demo"]),
        s(&["cone", "--norm", &data("fhat.json"), "--samples", "20", "--seed", "7"]),
        s(&["randers-figure"]),
    ]
}

#[test]
fn every_json_output_reparses_identically() {
    let cmds = commands();
    let outputs: Vec<String> = cmds
        .iter()
        .map(|c| {
            let args: Vec<&str> = c.iter().map(String::as_str).collect();
            let r = run(&args);
            assert_eq!(r.code, 0, "{c:?}: {}", r.stderr);
            r.stdout
        })
        .collect();
    reparses::<VerificationReportJson>(&outputs[0]);
    reparses::<LiftSolutionJson>(&outputs[1]);
    reparses::<SubducedValueJson>(&outputs[2]);
    reparses::<SubmersionReportJson>(&outputs[3]);
    reparses::<TangencyJson>(&outputs[4]);
    reparses::<So4Dump>(&outputs[5]);
    reparses::<ConeJson>(&outputs[6]);
}

#[test]
fn identical_arguments_give_identical_bytes() {
    for c in commands() {
        let args: Vec<&str> = c.iter().map(String::as_str).collect();
        let first = run(&args).stdout;
        assert_eq!(first, run(&args).stdout, "{c:?}");
        let mut csv = args.clone();
        csv.extend(["--format", "csv"]);
        assert_eq!(run(&csv).stdout, run(&csv).stdout, "{c:?}");
    }
}

#[test]
fn seed_changes_sampled_output() {
    let norm = data("fhat.json");
    let a = run(&["cone", "--norm", &norm, "--samples", "5", "--seed", "1"]).stdout;
    let b = run(&["cone", "--norm", &norm, "--samples", "5", "--seed", "2"]).stdout;
    assert_ne!(a, b);
}

#[test]
fn spec_files_round_trip_through_the_library() {
    for name in ["randers.json", "randers_subduced.json", "fhat.json", "ftilde.json", "f_euclidean.json"] {
        let j: NormSpecJson = load_json(data(name).as_ref()).unwrap();
        let spec = NormSpec::try_from(&j).unwrap();
        assert_eq!(NormSpecJson::from(&spec), j, "{name}");
    }
    for name in ["proj.json", "so4_m_proj.json"] {
        let j: SurjectionJson = load_json(data(name).as_ref()).unwrap();
        assert_eq!(SurjectionJson::from(&LinearSurjection::try_from(&j).unwrap()), j);
    }
    for name in ["chart_x.json", "chart_y.json"] {
        let j: ChartJson = load_json(data(name).as_ref()).unwrap();
        let cf = ChartFinsler::try_from(&j).unwrap();
        let back = ChartJson::from(&cf);
        assert_eq!(back.poly_deps, j.poly_deps);
        assert_eq!(back.base_spec, j.base_spec);
        assert_eq!(back.x_box, Some(vec![[-1.0, 1.0]]));
        assert_eq!(ChartFinsler::try_from(&back).unwrap(), cf);
    }
}

#[test]
fn floats_survive_text() {
    let tricky = [0.1, 1.0 / 3.0, 1e-300, 5e-324, -123.456789e-7, f64::MAX];
    let j = NormSpecJson { family: "randers".into(), a: Some(vec![vec![1.0]]), b: Some(tricky.to_vec()), q: None };
    let back: NormSpecJson = parse_json(&to_json(&j).unwrap(), "t").unwrap();
    assert_eq!(back, j);
}

#[test]
fn csv_uses_header_and_lf() {
    let r = run(&["lift", "--norm", &data("randers.json"), "--mu", &data("proj.json"), "--v", "1", "--format", "csv"]);
    assert!(!r.stdout.contains('\r'));
    let mut lines = r.stdout.lines();
    assert_eq!(lines.next(), Some("point_0,point_1,value,residual,iterations,converged,degenerate"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0].parse::<f64>().unwrap(), 1.0);
    assert!((row[1].parse::<f64>().unwrap() + 1.3660254037844386).abs() < 1e-12);
    assert_eq!(lines.next(), None);
}
