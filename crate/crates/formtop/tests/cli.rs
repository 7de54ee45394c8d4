use std::path::PathBuf;
use std::process::Command;

use formtop::cli::run;
use serde_json::Value;

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel)
        .display()
        .to_string()
}

/// Runs the command line in process: `(exit code, stdout, stderr)`.
fn formtop(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("formtop").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, _) = formtop(&full);
    (
        code,
        serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")),
    )
}

#[test]
fn fan_depth_of_a_level() {
    assert_eq!(
        formtop(&["fan", "depth", "--set", "level:3", "--max", "10"]),
        (0, "3\n".into(), String::new())
    );
    let (code, _, err) = formtop(&["fan", "depth", "--set", "finite:[0]", "--max", "6"]);
    assert_eq!(code, 2);
    assert!(err.contains("no uniform bar depth up to 6"), "{err}");
}

#[test]
fn two_halves_leave_one_out() {
    let cover = data("reals/two-halves.txt");
    let (code, out, _) = formtop(&[
        "reals", "decide", "--mode", "r", "--target", "0/1..2/1", "--cover", &cover,
    ]);
    assert_eq!(code, 1);
    assert_eq!(out, "not covered\nwitness 1/1\n");
    let (code, v) = json(&["reals", "decide", "--target", "0/1..2/1", "--cover", &cover]);
    assert_eq!(code, 1);
    assert_eq!(v["covered"], false);
    assert_eq!(v["witness"], "1/1");
}

#[test]
fn binary_retraction() {
    assert_eq!(
        formtop(&["spread", "retract", "--spread", "binary", "--input", "[5,7]"]).1,
        "[0,0]\n"
    );
    let (code, v) = json(&[
        "spread",
        "retract",
        "--spread",
        "binary",
        "--stream",
        "periodic:[1,3]",
        "--levels",
        "4",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["retraction"], "[1,0,1,0]");
    assert_eq!(v["fixed"], false);
    // A spread with no members is malformed input.
    let (code, _, err) = formtop(&["spread", "retract", "--spread", "table:1:", "--input", "[1]"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn certificates_round_trip_through_files() {
    let dir = std::env::temp_dir().join(format!("formtop-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cover = data("reals/unit-thirds.txt");
    let args = ["--mode", "i01", "--target", "0/1..1/1", "--cover", &cover];
    let (code, cert, _) = formtop(&[&["reals", "certify"][..], &args].concat());
    assert_eq!(code, 0);
    let file = dir.join("unit.cert");
    std::fs::write(&file, &cert).unwrap();
    let file = file.display().to_string();
    let (code, out, _) = formtop(&[&["reals", "check"][..], &args, &["--certificate", &file]].concat());
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("valid"));
    // The same certificate does not fit a smaller family.
    let two = data("reals/two-halves.txt");
    let (code, out, _) = formtop(&[
        "reals",
        "check",
        "--mode",
        "i01",
        "--target",
        "0/1..1/1",
        "--cover",
        &two,
        "--certificate",
        &file,
    ]);
    assert_eq!(code, 1, "{out}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn heine_borel_prefixes() {
    let (code, v) = json(&[
        "reals",
        "heine-borel",
        "--target",
        "0/1..1/1",
        "--cover-gen",
        "shrinking",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["prefix_length"], 4);
    let (code, _, err) = formtop(&[
        "reals",
        "heine-borel",
        "--target",
        "0/1..1/1",
        "--cover-gen",
        "inner",
        "--fuel",
        "20",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("first 20 members"), "{err}");
}

#[test]
fn bundled_topologies() {
    let (code, out, _) = formtop(&["finite", "verify", &data("finite")]);
    assert_eq!(code, 1);
    // Only the no-point example fails, and it fails pointfree continuity via the empty relation.
    let failing: Vec<&str> = out.lines().filter(|l| l.contains("FAIL")).collect();
    assert_eq!(failing.len(), 2, "{out}");
    assert!(out.contains("witness: relation {} into a 1-atom target"), "{out}");
    assert!(out.contains("totality: 0"), "{out}");

    let (code, v) = json(&[
        "finite",
        "verify",
        &data("finite/discrete-3.top"),
        &data("finite/sierpinski.top"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["files"][1]["concrete"], true);
}

#[test]
fn malformed_topology_is_located() {
    let dir = std::env::temp_dir().join(format!("formtop-top-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("bad.top");
    std::fs::write(&file, "atoms 2\naxiom 5 <| {0}\n").unwrap();
    let (code, _, err) = formtop(&["finite", "verify", &file.display().to_string()]);
    assert_eq!(code, 3);
    assert!(err.contains("bad.top:2"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn baire_split_follows_the_stream() {
    let deriv = data("baire/fan-two.deriv");
    let set = "finite:[0];[1,0];[1,1];[2,0]";
    let (code, out, _) = formtop(&[
        "baire",
        "split",
        "--derivation",
        &deriv,
        "--set",
        set,
        "--stream",
        "periodic:[1,1,0]",
    ]);
    assert_eq!((code, out.as_str()), (0, "[1,1]\n"));
    let (code, out, _) = formtop(&[
        "baire",
        "split",
        "--derivation",
        "(fan [] (rest eta))",
        "--set",
        "level:2",
        "--stream",
        "constant:3",
    ]);
    assert_eq!(code, 1, "{out}");
    assert!(out.starts_with("refuted"));
    let (code, _, _) = formtop(&[
        "baire",
        "split",
        "--derivation",
        "(fan [] (eta [1]))",
        "--set",
        "all",
        "--stream",
        "zeros-after:[]",
    ]);
    assert_eq!(code, 3);
}

#[test]
fn maps_commands() {
    let (code, out, _) = formtop(&[
        "maps",
        "eval",
        "--relation",
        "sum-first-k:2",
        "--stream",
        "periodic:[2,5]",
        "--modulus",
    ]);
    assert_eq!((code, out.as_str()), (0, "7\nmodulus [2,5]\n"));
    let table = format!("file:{}", data("baire/first-entry.rel"));
    assert_eq!(
        formtop(&["maps", "eval", "--relation", &table, "--stream", "constant:2"]).1,
        "0\n"
    );
    let (code, _, _) = formtop(&[
        "maps",
        "eval",
        "--relation",
        "empty",
        "--stream",
        "constant:0",
        "--fuel",
        "20",
    ]);
    assert_eq!(code, 2);

    // Length 4 decodes to prefix length 1 and witness 1.
    let (code, v) = json(&["maps", "sigma2dec", "--d", "sum-reaches:1", "--probe", "[1,0,0,0]"]);
    assert_eq!((code, &v["prefix_length"], &v["witness"]), (0, &1.into(), &1.into()));
    let (code, v) = json(&["maps", "sigma2dec", "--d", "sum-reaches:1", "--probe", "[0,1,0,0]"]);
    assert_eq!((code, &v["member"]), (1, &false.into()));

    assert_eq!(
        formtop(&["maps", "check-modulus", "--relation", "first-entry", "--depth", "3"]).0,
        0
    );
    assert_eq!(
        formtop(&["maps", "check-modulus", "--relation", "empty", "--depth", "3"]).0,
        2
    );
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(formtop(&["fan", "depth", "--set", "level:1"]).0, 3);
    assert_eq!(formtop(&["nonsense"]).0, 3);
    assert_eq!(
        formtop(&[
            "reals",
            "decide",
            "--mode",
            "q",
            "--target",
            "0/1..1/1",
            "--cover",
            &data("reals/two-halves.txt")
        ])
        .0,
        3
    );
    assert_eq!(
        formtop(&[
            "reals",
            "decide",
            "--target",
            "1/1..0/1",
            "--cover",
            &data("reals/two-halves.txt")
        ])
        .0,
        3
    );
    let (code, out, _) = formtop(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("Usage"));
}

#[test]
fn seeded_streams_are_deterministic() {
    let args = [
        "--seed", "9", "spread", "retract", "--spread", "seeded:4", "--stream", "random:6", "--levels", "12",
    ];
    let first = formtop(&args);
    assert_eq!(first.0, 0);
    assert_eq!(formtop(&args), first);
    let other = formtop(&[
        "--seed", "10", "spread", "retract", "--spread", "seeded:4", "--stream", "random:6", "--levels", "12",
    ]);
    assert_ne!(other.1, first.1);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_formtop");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let out = status(&["fan", "depth", "--set", "level:3", "--max", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "3\n");
    let out = status(&[
        "reals",
        "decide",
        "--target",
        "0/1..2/1",
        "--cover",
        &data("reals/two-halves.txt"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        status(&["fan", "depth", "--set", "finite:[0]", "--max", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        status(&["fan", "depth", "--set", "what", "--max", "3"]).status.code(),
        Some(3)
    );
}
