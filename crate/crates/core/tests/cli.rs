use cremona_core::cli::{main_with_args, parse_command_line, run, EXIT_OK};
use cremona_core::cremona::PlaneBirationalMap;
use serde_json::{json, Value};
use std::path::PathBuf;

fn report(args: &[&str], input: Value) -> (i32, Value) {
    let cli = parse_command_line(std::iter::once("cremona").chain(args.iter().copied())).unwrap();
    let outcome = run(cli.command, &cli.config().unwrap(), &input);
    (outcome.status, outcome.report)
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("cremona-cli-{}-{name}", std::process::id()))
}

#[test]
fn identical_runs_write_identical_files() {
    let input = scratch("in.json");
    std::fs::write(&input, r#"{"support": {"2": 1}, "seed": 3}"#).unwrap();
    let outputs: Vec<String> = (0..2)
        .map(|i| {
            let out = scratch(&format!("out{i}.json"));
            let args = [
                "cremona",
                "--seed",
                "9",
                "--in",
                input.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
                "oscillate",
            ];
            assert_eq!(main_with_args(args), EXIT_OK);
            std::fs::read_to_string(&out).unwrap()
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
    let parsed: Value = serde_json::from_str(&outputs[0]).unwrap();
    assert_eq!(parsed["result"]["verified"], json!(true));
}

#[test]
fn emitted_maps_reparse() {
    let (status, out) = report(&["oscillate"], json!({"support": {"1": 1}, "seed": 4}));
    assert_eq!(status, EXIT_OK);
    let map = PlaneBirationalMap::from_json(&out["result"]["map"]).unwrap();
    assert_eq!(map.to_json(), out["result"]["map"]);

    let (status, out) = report(&["stabilize"], json!({"map": PlaneBirationalMap::standard_involution().to_json()}));
    assert_eq!(status, EXIT_OK);
    let cert_map = PlaneBirationalMap::from_json(&out["result"]["certificate"]["map"]).unwrap();
    assert_eq!(cert_map.degree(), 2);
}

#[test]
fn degrees_of_henon_map() {
    let (status, out) =
        report(&["--horizon", "6", "degrees"], json!({"map": PlaneBirationalMap::henon_example().to_json()}));
    assert_eq!(status, EXIT_OK);
    assert_eq!(out["result"]["report"]["degrees"], json!([1, 2, 4, 8, 16, 32, 64]));
}
