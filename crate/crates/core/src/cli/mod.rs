//! Command-line front end. [`run`] parses arguments, executes one command
//! and returns the process exit code: 0 ok, 1 mismatch against the published
//! tables, 2 usage or input error, 3 internal failure.

pub mod cache;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::branching::{
    expected_branching_row, expected_source_dim, j_of_source_weight, restriction_composition_factors,
    restriction_map, weyl_restriction_chi,
};
use crate::charcalc::{dominant_multiplicities, set_character_store, weyl_dim};
use crate::error::{Error, Result};
use crate::jantzen::{check_characteristic, jantzen_sum, truncated_jantzen};
use crate::rootdata::{root_system, Family, GroupType, Weight};
use crate::structure::{
    expected_corollary_dim, expected_table_row, irreducible_dim, lambda1_set, weyl_module_structure, StructureRewriter,
};

use cache::{default_cache_dir, DiskStore};
use report::{render_tables_text, render_text, terms, ErrorReport, Expected, Report, TablesReport, SCHEMA_VERSION};

#[derive(Parser, Debug)]
#[command(name = "spindle", version, about = "Weyl modules, Jantzen sums and branching for types A, B, D")]
struct Cli {
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit a plain-text summary instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    /// Neither read nor write the on-disk character cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
struct Target {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long)]
    rank: usize,
    /// Characteristic; 0 means characteristic zero.
    #[arg(long, default_value_t = 0)]
    p: u64,
    /// Comma-separated fundamental coordinates.
    #[arg(long, value_parser = parse_weight, allow_hyphen_values = true)]
    weight: Weight,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weyl and irreducible dimensions.
    Dim(Target),
    /// Dominant weight multiplicities of the Weyl character.
    Char(Target),
    /// Composition factors and radical of a Weyl module (types B, D).
    Structure {
        #[command(flatten)]
        t: Target,
        /// Compare with the published tables.
        #[arg(long, alias = "diff-paper")]
        diff_tables: bool,
    },
    /// The Jantzen sum, or its truncation below a weight.
    Jantzen {
        #[command(flatten)]
        t: Target,
        #[arg(long, value_parser = parse_weight, allow_hyphen_values = true)]
        truncate: Option<Weight>,
    },
    /// Restriction of L(λ₁+λ_j) from SL(W) to SO(W). `--family/--rank`
    /// name the orthogonal group, `--weight` is in SL(W) coordinates.
    Branch {
        #[command(flatten)]
        t: Target,
        /// Compare with the published tables.
        #[arg(long, alias = "diff-paper")]
        diff_tables: bool,
    },
    /// Batch reproduction of the structure and branching tables.
    Tables {
        #[arg(long, default_value = "B,D")]
        families: String,
        /// A rank or an inclusive range such as `2-4`.
        #[arg(long)]
        ranks: String,
        #[arg(long)]
        primes: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_weight(s: &str) -> std::result::Result<Weight, String> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("bad coordinate {t:?}: {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(Weight)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> std::result::Result<Vec<T>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|_| format!("bad {what} {t:?}")))
        .collect()
}

fn parse_ranks(s: &str) -> std::result::Result<Vec<usize>, String> {
    let bad = || format!("bad rank range {s:?}");
    match s.split_once('-') {
        Some((a, b)) => {
            let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![s.trim().parse().map_err(|_| bad())?]),
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

struct Outcome {
    body: String,
    mismatch: bool,
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = write!(err, "{e}");
            return 2;
        }
    };
    let store = if cli.no_cache { None } else { default_cache_dir() };
    set_character_store(store.map(|d| Arc::new(DiskStore::new(d)) as Arc<_>));

    match execute(&cli) {
        Ok(o) => {
            let _ = out.write_all(o.body.as_bytes());
            if o.mismatch {
                1
            } else {
                0
            }
        }
        Err(f) => {
            let (code, msg, exit) = match f {
                Failure::Usage(m) => ("usage".to_string(), m, 2),
                Failure::Io(m) => ("io".to_string(), m, 3),
                Failure::Lib(e) => (e.code().to_string(), e.to_string(), if e.is_input_error() { 2 } else { 3 }),
            };
            let rep = ErrorReport::new(&code, msg);
            let _ = writeln!(err, "{}", serde_json::to_string(&rep).expect("error report serializes"));
            exit
        }
    }
}

fn execute(cli: &Cli) -> std::result::Result<Outcome, Failure> {
    let single = |r: Report| {
        let mismatch = r.is_unflagged_mismatch();
        let body = if cli.text {
            render_text(&r)
        } else {
            serde_json::to_string(&r).expect("report serializes") + "\n"
        };
        Outcome { body, mismatch }
    };
    Ok(match &cli.cmd {
        Command::Dim(t) => single(cmd_dim(t)?),
        Command::Char(t) => single(cmd_char(t)?),
        Command::Structure { t, diff_tables } => single(cmd_structure(t, *diff_tables)?),
        Command::Jantzen { t, truncate } => single(cmd_jantzen(t, truncate.as_ref())?),
        Command::Branch { t, diff_tables } => single(cmd_branch(t, *diff_tables)?),
        Command::Tables {
            families,
            ranks,
            primes,
            out,
        } => {
            let families: Vec<Family> = parse_list(families, "family").map_err(Failure::Usage)?;
            let ranks = parse_ranks(ranks).map_err(Failure::Usage)?;
            let primes: Vec<u64> = parse_list(primes, "prime").map_err(Failure::Usage)?;
            if families.is_empty() || primes.is_empty() {
                return Err(Failure::Usage("tables needs at least one family and one prime".into()));
            }
            cmd_tables(&families, &ranks, &primes, out, cli.text)?
        }
    })
}

fn group_of(t: &Target) -> Result<GroupType> {
    GroupType::new(t.family, t.rank)
}

pub fn cmd_dim_report(group: GroupType, p: u64, weight: &Weight) -> Result<Report> {
    check_characteristic(p)?;
    let rs = root_system(group)?;
    let wd = weyl_dim(&rs, weight)?;
    let mut r = Report::new("dim", group, p, weight);
    r.weyl_dim = Some(wd);
    r.irr_dim = if p == 0 {
        Some(wd)
    } else {
        match irreducible_dim(&rs, p, weight) {
            Ok(d) => Some(d),
            Err(Error::InvalidWeight(_) | Error::UnsupportedFamily(_) | Error::UnsupportedCharacteristic(_)) => {
                r.flags.push("irr-dim-unavailable".into());
                None
            }
            Err(e) => return Err(e),
        }
    };
    Ok(r)
}

fn cmd_dim(t: &Target) -> Result<Report> {
    cmd_dim_report(group_of(t)?, t.p, &t.weight)
}

pub fn cmd_char_report(group: GroupType, weight: &Weight) -> Result<Report> {
    let rs = root_system(group)?;
    let dom = dominant_multiplicities(&rs, weight)?;
    let mut r = Report::new("char", group, 0, weight);
    r.weyl_dim = Some(weyl_dim(&rs, weight)?);
    let mut rows: Vec<(Weight, i64)> = dom.iter().map(|(w, m)| (w.clone(), *m)).collect();
    rows.sort_by(|a, b| b.0.cmp(&a.0));
    r.character = Some(terms(&rows));
    Ok(r)
}

fn cmd_char(t: &Target) -> Result<Report> {
    cmd_char_report(group_of(t)?, &t.weight)
}

pub fn cmd_structure_report(group: GroupType, p: u64, weight: &Weight, diff_tables: bool) -> Result<Report> {
    let rs = root_system(group)?;
    let s = weyl_module_structure(&rs, p, weight)?;
    let mut r = Report::new("structure", group, p, weight);
    r.weyl_dim = Some(s.dim_weyl);
    r.irr_dim = Some(s.dim_irreducible);
    r.factors = Some(terms(&s.factors));
    r.radical = Some(terms(&s.radical_summands));
    if diff_tables {
        let row = expected_table_row(group, p, weight);
        let cor = expected_corollary_dim(group, p, weight);
        if row.is_none() && cor.is_none() {
            r.flags.push("not-covered".into());
            return Ok(r);
        }
        let mut flags: Vec<String> = Vec::new();
        for f in row.iter().flat_map(|x| &x.flags).chain(cor.iter().flat_map(|c| &c.flags)) {
            if !flags.contains(f) {
                flags.push(f.clone());
            }
        }
        let radical_ok = row.as_ref().is_none_or(|x| x.radical == s.radical_summands);
        let dim_ok = cor.as_ref().is_none_or(|c| c.value == s.dim_irreducible);
        let label = row.as_ref().map(|x| x.label.clone()).or(cor.as_ref().map(|c| c.label.clone()));
        r.expected = Some(Expected {
            label: label.unwrap_or_default(),
            factors: None,
            radical: row.as_ref().map(|x| terms(&x.radical)),
            irr_dim: cor.as_ref().map(|c| c.value),
            flags: flags.clone(),
        });
        r.matches = Some(radical_ok && dim_ok);
        r.flags = flags;
    }
    Ok(r)
}

fn cmd_structure(t: &Target, diff_tables: bool) -> Result<Report> {
    cmd_structure_report(group_of(t)?, t.p, &t.weight, diff_tables)
}

pub fn cmd_jantzen_report(group: GroupType, p: u64, weight: &Weight, truncate: Option<&Weight>) -> Result<Report> {
    let rs = root_system(group)?;
    let mut r = Report::new("jantzen", group, p, weight);
    match truncate {
        None => r.chi = Some(terms(&jantzen_sum(&rs, weight, p)?.chi_terms.terms)),
        Some(mu) => {
            let t = truncated_jantzen(&rs, weight, mu, p, &StructureRewriter { p })?;
            r.truncate = Some(mu.0.clone());
            r.factors = Some(terms(&t.chil_terms.terms));
        }
    }
    Ok(r)
}

fn cmd_jantzen(t: &Target, truncate: Option<&Weight>) -> Result<Report> {
    cmd_jantzen_report(group_of(t)?, t.p, &t.weight, truncate)
}

/// `target` is the orthogonal group; `weight` is `λ₁+λ_j` for `SL(W)`.
pub fn cmd_branch_report(target: GroupType, p: u64, weight: &Weight, diff_tables: bool) -> Result<Report> {
    let m = restriction_map(target)?;
    let j = j_of_source_weight(&m, weight)?;
    let src = root_system(m.source)?;
    let tgt = root_system(m.target)?;
    let factors = restriction_composition_factors(&m, j, p)?;
    let mut irr = 0i64;
    for (w, c) in &factors {
        irr += c * irreducible_dim(&tgt, p, w)?;
    }
    let mut r = Report::new("branch", m.target, p, weight);
    r.source = Some(m.source);
    r.weyl_dim = Some(weyl_dim(&src, weight)?);
    r.irr_dim = Some(irr);
    r.chi = Some(terms(&weyl_restriction_chi(&m, j)?.terms));
    r.factors = Some(terms(&factors));
    if diff_tables {
        match expected_branching_row(m.target, j, p) {
            None => r.flags.push("not-covered".into()),
            Some(row) => {
                let expected_dim = expected_source_dim(&m, j, p);
                let mut a = factors.clone();
                let mut b = row.factors.clone();
                a.sort();
                b.sort();
                r.matches = Some(a == b && expected_dim.is_none_or(|d| d == irr));
                r.expected = Some(Expected {
                    label: row.label,
                    factors: Some(terms(&row.factors)),
                    radical: None,
                    irr_dim: expected_dim,
                    flags: row.flags.clone(),
                });
                r.flags = row.flags;
            }
        }
    }
    Ok(r)
}

fn cmd_branch(t: &Target, diff_tables: bool) -> Result<Report> {
    cmd_branch_report(group_of(t)?, t.p, &t.weight, diff_tables)
}

fn error_report(command: &str, group: GroupType, p: u64, weight: &Weight, e: &Error) -> Report {
    let mut r = Report::new(command, group, p, weight);
    r.error = Some(ErrorReport::new(e.code(), e.to_string()));
    r
}

/// Structure and branching reports for one `(group, p)`, each compared with the tables.
pub fn tables_report(group: GroupType, p: u64) -> Result<TablesReport> {
    let mut structure = Vec::new();
    for w in lambda1_set(group)? {
        structure.push(
            cmd_structure_report(group, p, &w, true).unwrap_or_else(|e| error_report("structure", group, p, &w, &e)),
        );
    }
    let m = restriction_map(group)?;
    let mut branching = Vec::new();
    for j in 1..=m.source.rank {
        let w = Weight::fundamental(m.source.rank, 1).add(&Weight::fundamental(m.source.rank, j));
        branching.push(cmd_branch_report(group, p, &w, true).unwrap_or_else(|e| error_report("branch", group, p, &w, &e)));
    }
    let mismatches = structure
        .iter()
        .chain(&branching)
        .filter(|r| r.is_unflagged_mismatch())
        .count();
    Ok(TablesReport {
        version: SCHEMA_VERSION.into(),
        group,
        p,
        structure,
        branching,
        mismatches,
    })
}

fn write_file(path: &Path, body: &str) -> std::result::Result<(), String> {
    std::fs::write(path, body).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_tables(
    families: &[Family],
    ranks: &[usize],
    primes: &[u64],
    dir: &Path,
    text: bool,
) -> std::result::Result<Outcome, Failure> {
    for &p in primes {
        check_characteristic(p)?;
        if p == 2 {
            return Err(Error::UnsupportedCharacteristic(2).into());
        }
    }
    std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    let mut summary = Vec::new();
    let mut io_errors = Vec::new();
    let mut mismatch = false;
    for &f in families {
        for &n in ranks.iter().filter(|&&n| n >= f.min_rank()) {
            let group = GroupType::new(f, n)?;
            for &p in primes {
                let t = tables_report(group, p)?;
                mismatch |= t.mismatches > 0;
                let stem = format!("{}{}_p{}", f, n, p);
                let json_path = dir.join(format!("{stem}.json"));
                let json = serde_json::to_string_pretty(&t).expect("tables report serializes") + "\n";
                for (path, body) in [(json_path.clone(), json), (dir.join(format!("{stem}.txt")), render_tables_text(&t))] {
                    if let Err(e) = write_file(&path, &body) {
                        io_errors.push(e);
                    }
                }
                summary.push(serde_json::json!({
                    "group": group,
                    "p": p,
                    "file": json_path.display().to_string(),
                    "mismatches": t.mismatches,
                }));
            }
        }
    }
    if !io_errors.is_empty() {
        return Err(Failure::Io(io_errors.join("; ")));
    }
    let body = if text {
        summary
            .iter()
            .map(|s| format!("{} {}{} p={}: {} mismatches\n", s["file"].as_str().unwrap_or(""), s["group"]["family"].as_str().unwrap_or(""), s["group"]["rank"], s["p"], s["mismatches"]))
            .collect()
    } else {
        serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"
    };
    Ok(Outcome { body, mismatch })
}
