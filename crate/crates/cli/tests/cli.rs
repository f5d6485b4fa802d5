use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qroot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qroot"))
        .args(args)
        .output()
        .expect("run qroot")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json_of(args: &[&str]) -> (Value, i32) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = qroot(&full);
    let v = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", stdout(&o)));
    (v, o.status.code().expect("exit code"))
}

fn schema_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{name}.schema.json"))
}

fn assert_valid(name: &str, instance: &Value) {
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path(name)).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qroot-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn lattices_of_a2_d4_e6() {
    let o = qroot(&["lattices", "--type", "A", "--rank", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("A2: |Λ/Q| = 3, 2 intermediate lattices"), "{text}");

    let (v, code) = json_of(&["lattices", "--type", "D", "--rank", "4"]);
    assert_eq!(code, 0);
    assert_valid("lattices", &v);
    assert_eq!(v["lattices"].as_array().unwrap().len(), 5);
    assert_eq!(v["weight_over_root_index"], 4);

    let text = stdout(&qroot(&["lattices", "--type", "E", "--rank", "6"]));
    assert!(text.contains("λ_Λ = λ3 - λ5"), "{text}");
}

#[test]
fn isogeny_rank_matches_gcd_product() {
    for (ty, rank, ell, expected) in [("A", "2", "3", 3), ("A", "2", "7", 1), ("A", "1", "9", 1), ("A", "3", "5", 1)] {
        let (v, code) = json_of(&["isogeny-rank", "--type", ty, "--rank", rank, "--l", ell]);
        assert_eq!(code, 0, "{ty}{rank} ℓ={ell}");
        assert_valid("isogeny-rank", &v);
        assert_eq!(v["computed_rank"], expected);
        assert_eq!(v["predicted_rank"], expected);
        assert_eq!(v["agree"], true);
    }
    // Λ/Q = (Z/2)^2 for D4, coprime to ℓ = 9.
    let (v, _) = json_of(&["isogeny-rank", "--type", "D4", "--l", "9"]);
    assert_eq!(v["computed_rank"], 1);
    assert_eq!(v["bijective"], true);
}

#[test]
fn isogeny_rank_semisimple_product() {
    let (v, code) = json_of(&["isogeny-rank", "-t", "A2", "-t", "A2", "--l", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["factor_indices"], serde_json::json!([3, 3]));
    assert_eq!(v["computed_rank"], 9);
}

#[test]
fn isogeny_rank_rejects_non_inclusion() {
    let o = qroot(&["isogeny-rank", "--type", "A2", "--l", "3", "--m", "L", "--n", "Q"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_sl3_showcase() {
    let o = qroot(&["verify-rep", "--builtin", "sl3-showcase"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("relations: pass"), "{text}");
    assert!(text.contains("irreducible: yes"), "{text}");
    assert!(text.contains("ℓ-character: central"), "{text}");
    assert!(text.contains("η(K_{λ1}^ℓ) = ε^2   η(K^2ℓ) = ε"), "{text}");

    let (v, code) = json_of(&["verify-rep", "--builtin", "sl3-showcase"]);
    assert_eq!(code, 0);
    assert_valid("verify-rep", &v);
    assert_eq!(v["dim"], 3);
    assert_eq!(v["character"]["k_values"][0]["square_label"], "ε");
}

#[test]
fn verify_counit_on_weight_lattice() {
    let (v, code) = json_of(&["verify-rep", "--builtin", "counit", "--type", "B2", "--l", "5", "--lattice", "L"]);
    assert_eq!(code, 0);
    assert_valid("verify-rep", &v);
    assert_eq!(v["relations"]["passed"], true);
    assert_eq!(v["character"]["central"], true);
}

#[test]
fn verify_rep_flags_broken_relations() {
    // A1 over Q(ζ_3), E ↦ 1, F ↦ 0, K_α ↦ 1: KE = ε^2 EK fails.
    let zero = serde_json::json!([[["0", "0"]]]);
    let one = serde_json::json!([[["1", "0"]]]);
    let rep = serde_json::json!({
        "schema": "qroot/representation",
        "schema_version": 1,
        "factors": ["A1"],
        "ell": 3,
        "field_level": 3,
        "lattice_basis": [[2]],
        "dim": 1,
        "generators": { "E1": one, "F1": zero, "K1": one },
    });
    assert_valid("representation", &rep);
    let path = temp_path("broken.json");
    std::fs::write(&path, rep.to_string()).unwrap();
    let o = qroot(&["verify-rep", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("relations: FAIL"));
}

#[test]
fn verify_rep_rejects_garbage_file() {
    let path = temp_path("garbage.json");
    std::fs::write(&path, "{\"schema\": 3}").unwrap();
    let o = qroot(&["verify-rep", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn pbw_counts_and_artifact() {
    let o = qroot(&["pbw", "--type", "A", "--rank", "1", "--l", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("normal monomials: 125"), "{text}");
    assert!(text.contains("confluent: yes"), "{text}");

    let artifact = temp_path("a2.json");
    let (v, code) = json_of(&["pbw", "--type", "A2", "--l", "3", "--artifact", artifact.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_valid("pbw", &v);
    assert_eq!(v["normal_monomials"], "6561");
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&artifact).unwrap()).unwrap();
    assert_valid("rewrite-system", &written);
}

#[test]
fn central_small_decision_and_construction() {
    let o = qroot(&["central-small", "--type", "A", "--rank", "2", "--lattice", "Λ", "--l", "3", "--z-order", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no small module"));

    let (v, code) = json_of(&["central-small", "--type", "A2", "--lattice", "L", "--l", "5", "--z-order", "3"]);
    assert_eq!(code, 0);
    assert_valid("central-small", &v);
    assert_eq!(v["exists"], true);
    let c = &v["construction"];
    assert_eq!(c["status"], "constructed");
    assert_eq!(c["relations"], true);
    assert_eq!(c["z_matches"], true);
    assert_eq!(c["round_trip"], true);
    assert_valid("representation", &c["representation"]);

    // The embedded module verifies on its own.
    let path = temp_path("central.json");
    std::fs::write(&path, c["representation"].to_string()).unwrap();
    let (w, code) = json_of(&["verify-rep", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(w["character"]["central"], true);
}

#[test]
fn central_small_rejects_impossible_order() {
    let o = qroot(&["central-small", "--type", "A2", "--lattice", "L", "--l", "5", "--z-order", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn dckp_table_default_has_no_falsified_rows() {
    let o = qroot(&["dckp-table"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("type\trank\tell\tpartition\tdim_O\tdckp_bound\trichardson_levi\tstatus")
    );
    assert!(text.contains("A\t2\t5\t(3)\t6\t125\t(1,1,1)\tcertified\n"));
    // partitions of 3..8 at two values of ℓ
    let expected_rows: usize = [3usize, 5, 7, 11, 15, 22].iter().sum::<usize>() * 2;
    assert_eq!(text.lines().count(), expected_rows + 1);

    let (v, code) = json_of(&["dckp-table", "--ranks", "2,3", "--l", "5"]);
    assert_eq!(code, 0);
    assert_valid("dckp-table", &v);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3 + 5);
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let args = ["lattices", "--type", "D4", "--format", "json"];
    assert_eq!(stdout(&qroot(&args)), stdout(&qroot(&args)));
    let path = temp_path("out.json");
    let mut with_file = args.to_vec();
    with_file.extend(["-o", path.to_str().unwrap()]);
    let o = qroot(&with_file);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&qroot(&args)));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(qroot(&["pbw", "--type", "A", "--rank", "1"]).status.code(), Some(1));
    assert_eq!(qroot(&["pbw", "--type", "A", "--rank", "1", "--l", "4"]).status.code(), Some(1));
    assert_eq!(qroot(&["lattices", "--type", "X9"]).status.code(), Some(1));
    assert_eq!(qroot(&["isogeny-rank", "--type", "G2", "--l", "9"]).status.code(), Some(1));
    assert_eq!(qroot(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(qroot(&["--help"]).status.code(), Some(0));
}
