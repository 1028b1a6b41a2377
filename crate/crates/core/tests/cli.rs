use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use spindle::cli::report::{ErrorReport, Report, TablesReport};
use spindle::cli::{cmd_branch_report, cmd_char_report, cmd_dim_report, cmd_jantzen_report, cmd_structure_report, tables_report};
use spindle::{Family, GroupType, Weight};

fn g(f: Family, n: usize) -> GroupType {
    GroupType::new(f, n).unwrap()
}

fn w(v: &[i64]) -> Weight {
    Weight(v.to_vec())
}

/// Runs the binary with its cache pointed at `cache`.
fn spindle(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spindle"))
        .env("SPINDLE_CACHE_DIR", cache)
        .args(args)
        .output()
        .unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn round_trip<T>(x: &T)
where
    T: serde::Serialize + serde::de::DeserializeOwned + PartialEq + std::fmt::Debug,
{
    let s = serde_json::to_string(x).unwrap();
    assert_eq!(&serde_json::from_str::<T>(&s).unwrap(), x);
    let s = serde_json::to_string_pretty(x).unwrap();
    assert_eq!(&serde_json::from_str::<T>(&s).unwrap(), x);
}

#[test]
fn reports_round_trip_through_json() {
    let b2 = g(Family::B, 2);
    let d4 = g(Family::D, 4);
    let reports = [
        cmd_dim_report(b2, 5, &w(&[2, 0])).unwrap(),
        cmd_dim_report(b2, 5, &w(&[3, 0])).unwrap(),
        cmd_char_report(b2, &w(&[1, 1])).unwrap(),
        cmd_structure_report(d4, 3, &w(&[1, 0, 0, 1]), true).unwrap(),
        cmd_structure_report(d4, 3, &w(&[1, 0, 0, 2]), false).unwrap(),
        cmd_jantzen_report(b2, 5, &w(&[2, 0]), None).unwrap(),
        cmd_jantzen_report(b2, 5, &w(&[2, 0]), Some(&w(&[0, 0]))).unwrap(),
        cmd_branch_report(d4, 5, &w(&[1, 0, 0, 1, 0, 0, 0]), true).unwrap(),
    ];
    for r in &reports {
        round_trip(r);
    }
    round_trip(&tables_report(d4, 5).unwrap());
    round_trip(&ErrorReport::new("invalid-prime", "4 is not prime"));

    let d = &reports[0];
    assert_eq!((d.weyl_dim, d.irr_dim), (Some(14), Some(13)));
    let v = serde_json::to_value(d).unwrap();
    assert_eq!(v["group"], serde_json::json!({"family": "B", "rank": 2}));
    assert_eq!(v["version"], "v1");
    assert!(reports[1].flags.iter().any(|f| f == "irr-dim-unavailable"));
    assert!(reports[4].expected.is_none() && reports[4].matches.is_none());
}

#[test]
fn commands_and_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let c = tmp.path();

    let o = spindle(c, &["dim", "--family", "B", "--rank", "3", "--p", "7", "--weight", "1,0,1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!((v["weyl_dim"].as_i64(), v["irr_dim"].as_i64()), (Some(48), Some(40)));

    let o = spindle(c, &["dim", "--family", "B", "--rank", "3", "--p", "0", "--weight", "1,0,1"]);
    assert_eq!(json(&o)["irr_dim"], 48);

    let o = spindle(c, &["dim", "--family", "D", "--rank", "4", "--p", "5", "--weight", "1,0,0,2"]);
    assert_eq!(json(&o)["irr_dim"], 168);

    let o = spindle(c, &["structure", "--family", "B", "--rank", "4", "--p", "3", "--weight", "1,1,0,0", "--diff-tables"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["radical"], serde_json::json!([{"weight": [0, 0, 1, 0], "mult": 1}]));
    assert_eq!(v["matches"], true);

    let o = spindle(c, &["jantzen", "--family", "B", "--rank", "2", "--p", "3", "--weight", "2,0"]);
    assert_eq!(json(&o)["chi"], serde_json::json!([]));

    let o = spindle(c, &["branch", "--family", "B", "--rank", "2", "--p", "5", "--weight", "2,0,0,0", "--diff-tables"]);
    let v = json(&o);
    let count: i64 = v["factors"].as_array().unwrap().iter().map(|t| t["mult"].as_i64().unwrap()).sum();
    assert_eq!(count, 3);
    assert_eq!(v["irr_dim"], 15);

    // A flagged disagreement with the tables is still a success.
    let o = spindle(c, &["structure", "--family", "D", "--rank", "4", "--p", "3", "--weight", "1,0,0,1", "--diff-paper"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["flags"].as_array().unwrap().iter().any(|f| f.as_str().unwrap().starts_with("erratum-suspect")));

    let o = spindle(c, &["--text", "dim", "--family", "B", "--rank", "2", "--p", "5", "--weight", "2,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("13"));

    for (args, code) in [
        (vec!["dim", "--family", "B", "--rank", "2", "--p", "4", "--weight", "1,0"], 2),
        (vec!["dim", "--family", "C", "--rank", "2", "--p", "3", "--weight", "1,0"], 2),
        (vec!["dim", "--family", "B", "--rank", "2", "--p", "3", "--weight", "1,0,0"], 2),
        (vec!["structure", "--family", "B", "--rank", "2", "--p", "2", "--weight", "2,0"], 2),
        (vec!["dim", "--family", "B", "--rank", "2"], 2),
        (vec!["frobnicate"], 2),
    ] {
        let o = spindle(c, &args);
        assert_eq!(o.status.code(), Some(code), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }

    let o = spindle(c, &["dim", "--family", "B", "--rank", "2", "--p", "4", "--weight", "1,0"]);
    let e: ErrorReport = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!((e.version.as_str(), e.code.as_str()), ("v1", "invalid-prime"));

    assert_eq!(spindle(c, &["--help"]).status.code(), Some(0));
}

#[test]
fn cached_and_uncached_output_agree() {
    let tmp = tempfile::tempdir().unwrap();
    let c = tmp.path().join("cache");
    let runs: [&[&str]; 4] = [
        &["char", "--family", "B", "--rank", "3", "--weight", "1,0,1"],
        &["structure", "--family", "D", "--rank", "4", "--p", "3", "--weight", "1,0,1,1", "--diff-tables"],
        &["jantzen", "--family", "B", "--rank", "3", "--p", "5", "--weight", "1,0,2"],
        &["branch", "--family", "D", "--rank", "3", "--p", "5", "--weight", "1,0,0,0,1"],
    ];
    for args in runs {
        let cold = spindle(&c, args);
        let warm = spindle(&c, args);
        let mut bypass_args = vec!["--no-cache"];
        bypass_args.extend_from_slice(args);
        let bypass = spindle(&c, &bypass_args);
        assert_eq!(cold.status.code(), Some(0), "{args:?}");
        assert_eq!(cold.stdout, warm.stdout, "{args:?}");
        assert_eq!(cold.stdout, bypass.stdout, "{args:?}");
    }

    let file = c.join("B3_1-0-1.chr");
    let text = std::fs::read_to_string(&file).unwrap();
    let mut lines = text.lines();
    let header: Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(header["format"], "spindle-character");
    assert_eq!(header["family"], "B");
    assert_eq!(header["rank"], 3);
    assert_eq!(header["weight"], serde_json::json!([1, 0, 1]));
    let mut total = 0;
    for line in lines {
        let nums: Vec<i64> = line.split(' ').map(|x| x.parse().unwrap()).collect();
        assert_eq!(nums.len(), 4);
        assert!(nums[..3].iter().all(|&x| x >= 0));
        total += nums[3];
    }
    assert!(total > 0);
    assert!(std::fs::read_dir(&c)
        .unwrap()
        .all(|e| !e.unwrap().file_name().to_string_lossy().ends_with(".tmp")));

    // A damaged cache file is ignored and the answer recomputed.
    std::fs::write(&file, "garbage\n1 2\n").unwrap();
    let again = spindle(&c, runs[0]);
    let bypass = spindle(&c, &["--no-cache", "char", "--family", "B", "--rank", "3", "--weight", "1,0,1"]);
    assert_eq!(again.stdout, bypass.stdout);
}

#[test]
fn no_cache_writes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let c = tmp.path().join("cache");
    let o = spindle(&c, &["--no-cache", "char", "--family", "D", "--rank", "3", "--weight", "0,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!c.exists());
}

#[test]
fn tables_for_b_and_d() {
    let tmp = tempfile::tempdir().unwrap();
    let c = tmp.path().join("cache");
    let out = tmp.path().join("b");
    let o = spindle(
        &c,
        &["tables", "--families", "B", "--ranks", "2-4", "--primes", "3,5,7", "--out", out.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut count = 0;
    for n in 2..=4 {
        for p in [3, 5, 7] {
            let body = std::fs::read_to_string(out.join(format!("B{n}_p{p}.json"))).unwrap();
            let t: TablesReport = serde_json::from_str(&body).unwrap();
            assert_eq!(t.mismatches, 0);
            assert!(t.structure.iter().all(|r| r.matches == Some(true)));
            assert!(out.join(format!("B{n}_p{p}.txt")).exists());
            count += 1;
        }
    }
    assert_eq!(count, 9);

    let out = tmp.path().join("d");
    let o = spindle(
        &c,
        &["tables", "--families", "D", "--ranks", "3-4", "--primes", "3,5", "--out", out.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0));
    let t: TablesReport = serde_json::from_str(&std::fs::read_to_string(out.join("D4_p3.json")).unwrap()).unwrap();
    let flags_of = |x: &[i64]| -> Vec<String> {
        let r: &Report = t.structure.iter().find(|r| r.weight == x).unwrap();
        r.flags.clone()
    };
    assert_eq!(flags_of(&[1, 0, 1, 0]), vec!["erratum-suspect".to_string()]);
    assert_eq!(flags_of(&[1, 0, 0, 1]), vec!["erratum-suspect".to_string()]);
    assert_eq!(flags_of(&[1, 0, 0, 2]), vec!["open-question:epsilon-index".to_string()]);
    assert!(flags_of(&[1, 0, 1, 1]).is_empty());
    assert!(t.branching.iter().any(|r| !r.flags.is_empty()));

    let o = spindle(&c, &["tables", "--primes", "", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = spindle(&c, &["tables", "--primes", "3,2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn concurrent_runs_share_a_cache() {
    let tmp = tempfile::tempdir().unwrap();
    let c = tmp.path().join("cache");
    let args = ["structure", "--family", "B", "--rank", "4", "--p", "5", "--weight", "1,0,0,2"];
    let children: Vec<_> = (0..6)
        .map(|_| {
            Command::new(env!("CARGO_BIN_EXE_spindle"))
                .env("SPINDLE_CACHE_DIR", &c)
                .args(args)
                .stdout(std::process::Stdio::piped())
                .spawn()
                .unwrap()
        })
        .collect();
    let outs: Vec<Output> = children.into_iter().map(|ch| ch.wait_with_output().unwrap()).collect();
    let mut no_cache = vec!["--no-cache"];
    no_cache.extend_from_slice(&args);
    let want = spindle(&c, &no_cache).stdout;
    for o in &outs {
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(o.stdout, want);
    }
    for e in std::fs::read_dir(&c).unwrap() {
        let path = e.unwrap().path();
        assert_eq!(path.extension().and_then(|x| x.to_str()), Some("chr"), "{}", path.display());
        let text = std::fs::read_to_string(&path).unwrap();
        let header: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(header["format"], "spindle-character");
    }
    assert_eq!(spindle(&c, &args).stdout, want);
}
