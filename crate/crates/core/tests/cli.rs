use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn hpcris(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hpcris")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn hh_of_the_base_ring() {
    let out = hpcris(&["hh", &data("base_z9.json"), "--weight-max", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["command"], "hh");
    assert_eq!(r["pass"], true);
    assert_eq!(r["summary"], serde_json::json!(["weight 0, 0: free^1"]));
    assert_eq!(r["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn hp_accepts_p_2() {
    let out = hpcris(&["hp", &data("one_generator_p2.json"), "--weight-max", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(report(&out)["pass"], true);
}

#[test]
fn twisted_lift_agrees_with_the_verbatim_lift() {
    let out = hpcris(&["hpcris", &data("wuv.json"), &data("wuv_lift.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["results"]["crystalline_vs_direct"]["equal"], true);
    assert_eq!(r["results"]["crystalline_vs_direct"]["direct_source"], "verbatim");
    assert_eq!(r["results"]["square_zero_lift"], false);
    // the lifts differ, so the comparison map is a genuine correction
    assert_eq!(r["results"]["comparison_with_verbatim"]["phi_is_identity"], false);
    assert_eq!(r["results"]["comparison_with_verbatim"]["profiles_equal"], true);
}

#[test]
fn reference_lift_is_used_when_given() {
    let out =
        hpcris(&["hpcris", &data("xyz.json"), &data("xyz_lift.json"), "--reference", &data("xyz_reference.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["results"]["crystalline_vs_direct"]["direct_source"], "reference");
    assert_eq!(r["results"]["crystalline_vs_direct"]["equal"], true);
    assert!(r["results"]["comparison_with_verbatim"].is_null());
}

#[test]
fn a_non_square_zero_verbatim_lift_without_reference_is_an_input_error() {
    let out = hpcris(&["hpcris", &data("xyz.json"), &data("xyz_lift.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("d^2"), "{}", stderr(&out));
}

#[test]
fn incongruent_lift_is_rejected() {
    let out = hpcris(&["hpcris", &data("xyz.json"), &data("wuv_lift.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_json_reports_its_location() {
    let out = hpcris(&["hh", &data("malformed.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("line 4"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn missing_file_is_an_input_error() {
    let out = hpcris(&["hp", &data("does_not_exist.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn p_2_needs_the_flag_for_hpcris() {
    let args = ["hpcris", &data("one_generator_p2.json"), &data("one_generator_p2_lift.json")];
    assert_eq!(hpcris(&args).status.code(), Some(2));
    let mut with_flag = args.to_vec();
    with_flag.push("--allow-p2");
    let out = hpcris(&with_flag);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["warnings"].as_array().unwrap().len(), 1);
    assert!(stderr(&out).contains("warning"));
}

#[test]
fn check_default_seed_passes() {
    let out = hpcris(&["check"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    assert!(r["results"]["items"].as_array().unwrap().iter().all(|i| i["pass"] == true));
    assert!(!r["results"]["instances"].as_object().unwrap().is_empty());
}

#[test]
fn injected_sign_fault_is_caught_with_a_witness() {
    let out = hpcris(&["check", "--inject-fault", "cartan-sign"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let failed: Vec<&Value> = r["results"]["items"].as_array().unwrap().iter().filter(|i| i["pass"] == false).collect();
    assert!(!failed.is_empty());
    for f in failed {
        assert!(f["check"].as_str().unwrap().starts_with("Cartan relation"));
        let w = f["witness"].as_str().unwrap();
        assert!(w.contains("row") && w.contains("column"), "{w}");
    }
}

#[test]
fn empty_size_list_passes_vacuously() {
    let out = hpcris(&["check", "--sizes", ""]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    assert!(r["results"]["items"].as_array().unwrap().is_empty());
    assert_eq!(r["pass"], true);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<String>> = vec![
        vec!["check".into(), "--seed".into(), "7".into(), "--sizes".into(), "2,3".into()],
        vec!["hpcris".into(), data("wuv.json"), data("wuv_lift.json")],
        vec!["pd".into(), "--n".into(), "2".into(), "--k-max".into(), "2".into()],
        vec!["snf".into(), "--seed".into(), "3".into(), "--count".into(), "10".into()],
    ];
    for (i, args) in runs.iter().enumerate() {
        let paths: Vec<String> =
            (0..2).map(|j| dir.path().join(format!("{i}_{j}.json")).to_string_lossy().into_owned()).collect();
        for p in &paths {
            let mut a: Vec<&str> = args.iter().map(String::as_str).collect();
            a.extend(["--out", p]);
            let out = hpcris(&a);
            assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
            assert!(String::from_utf8_lossy(&out.stdout).ends_with("PASS\n"));
        }
        let (a, b) = (std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn sizes_out_of_range_are_rejected() {
    assert_eq!(hpcris(&["check", "--sizes", "2,9"]).status.code(), Some(2));
    assert_eq!(hpcris(&["check", "--sizes", "x"]).status.code(), Some(2));
}

#[test]
fn different_seeds_give_different_instances() {
    let a = report(&hpcris(&["check", "--seed", "1", "--sizes", "3"]));
    let b = report(&hpcris(&["check", "--seed", "2", "--sizes", "3"]));
    assert_ne!(a["results"]["instances"], b["results"]["instances"]);
}

#[test]
fn pd_echoes_the_rank_table() {
    let out = hpcris(&["pd", "--n", "2", "--k-max", "3", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    let ranks: Vec<u64> =
        r["results"]["objects"].as_array().unwrap().iter().map(|o| o["rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, [3, 5, 7]);
    assert_eq!(r["results"]["kernel_filtration"]["witness"]["length"], 6);
}

#[test]
fn pd_minimal_run() {
    let out = hpcris(&["pd", "--n", "1", "--k-max", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(report(&out)["results"]["objects"][0]["rank"], 2);
}

#[test]
fn pd_rejects_bad_parameters() {
    assert_eq!(hpcris(&["pd", "--k-max", "0"]).status.code(), Some(2));
    assert_eq!(hpcris(&["pd", "--p", "4"]).status.code(), Some(2));
}

#[test]
fn snf_of_a_given_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, r#"{"base": {"p": 3, "n": 2}, "rows": [[3, 6], [0, 9]]}"#).unwrap();
    let out = hpcris(&["snf", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(report(&out)["pass"], true);
}

#[test]
fn dump_slices_writes_bases_and_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("slices.json");
    let out = hpcris(&["hh", &data("wuv.json"), "--weight-max", "2", "--dump-slices", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let dump: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let slices = dump.as_array().unwrap();
    assert_eq!(slices.len(), 3);
    assert!(slices.iter().all(|s| s.is_object()));
}
