use gpr_bench::{run, Command, ExperimentSpec};
use jsonschema::{Draft, JSONSchema};

fn schema() -> JSONSchema {
    let text = include_str!("../schemas/report.schema.json");
    let value: serde_json::Value = serde_json::from_str(text).unwrap();
    JSONSchema::options().with_draft(Draft::Draft7).compile(&value).unwrap()
}

fn small(command: Command) -> ExperimentSpec {
    let mut s = ExperimentSpec::new(command);
    s.trials = 3;
    if !s.sizes.is_empty() {
        s.sizes = vec![4, 8];
    }
    s
}

fn check(compiled: &JSONSchema, spec: &ExperimentSpec) {
    let outcome = run(spec).unwrap();
    let value = serde_json::to_value(&outcome.report).unwrap();
    let msgs: Vec<String> = match compiled.validate(&value) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{} report invalid: {msgs:#?}", spec.command);
}

#[test]
fn every_command_matches_the_schema() {
    let compiled = schema();
    for command in [Command::Verify, Command::Bench, Command::Slices, Command::Fp, Command::Cfg, Command::Apsp, Command::Triangle] {
        check(&compiled, &small(command));
    }
    let mut c = small(Command::Classify);
    c.alphas = Some("0.5,0.25".into());
    check(&compiled, &c);
    let mut square = small(Command::Verify);
    square.child_shape = gpr_core::matmul::ChildShape::SquareBlocks;
    check(&compiled, &square);
}

#[test]
fn schema_rejects_malformed_reports() {
    let compiled = schema();
    let outcome = run(&small(Command::Slices)).unwrap();
    let mut value = serde_json::to_value(&outcome.report).unwrap();
    assert!(compiled.is_valid(&value));
    value["result"]["rows"][0]["k"] = 1.into();
    assert!(!compiled.is_valid(&value));
    let mut value = serde_json::to_value(&outcome.report).unwrap();
    value["timestamp"] = "now".into();
    assert!(!compiled.is_valid(&value));
}
