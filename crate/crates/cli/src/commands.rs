use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use gsbs_core::autos::{self, Automorphism};
use gsbs_core::corpus::{self, Corpus};
use gsbs_core::twisted::{self, OracleRecord, ReidemeisterReport};
use gsbs_core::witness::{self, Verdict};
use gsbs_core::{Error, GroupElement, GroupParams, IntMatrix, Limits};
use serde::Serialize;

use crate::input::{read_json, RawElement};
use crate::render;

pub struct Context {
    pub json: bool,
    pub limits: Limits,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or malformed input files.
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::InvalidParameter(_) | Error::DimensionMismatch { .. } | Error::NotSquare { .. } => 2,
                Error::ResourceCap { .. } => 3,
                Error::Singular
                | Error::NotUnimodular(_)
                | Error::Unsupported(_)
                | Error::InvalidAutomorphism(_)
                | Error::Inconsistent(_) => 1,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => e.fmt(f),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CmdResult = Result<ExitCode, CliError>;

fn print_json<T: Serialize>(v: &T) {
    let text = serde_json::to_string_pretty(v).expect("output serializes");
    // A closed pipe (e.g. `| head`) is not an error worth a panic.
    let _ = writeln!(io::stdout().lock(), "{text}");
}

pub fn analyze(ctx: &Context, n: u64, c_max: u32) -> CmdResult {
    let report = witness::analyze_degree(n, c_max, &ctx.limits)?;
    if ctx.json {
        print_json(&report);
    } else {
        print!("{}", render::degree_report(&report));
    }
    Ok(match report.verdict {
        Verdict::DegreeInfinite => ExitCode::SUCCESS,
        Verdict::OutOfScope => ExitCode::from(1),
    })
}

#[derive(Serialize)]
pub struct CongruenceRow {
    pub index: usize,
    pub label: String,
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
}

#[derive(Serialize)]
struct MatrixCheck<'a> {
    n: u64,
    c: u32,
    modulus: u64,
    #[serde(rename = "M")]
    matrix: &'a IntMatrix,
    congruences: Vec<CongruenceRow>,
    extendable: bool,
}

pub fn check_matrix(ctx: &Context, n: u64, c: u32, matrix_arg: &str) -> CmdResult {
    let params = GroupParams::new(n, c, &ctx.limits)?;
    let matrix: IntMatrix = read_json(matrix_arg, "matrix")?;
    // Rejects wrong shapes and non-unimodular input before the per-row report.
    let extendable = autos::extendable(&params, &matrix)?;
    let congruences: Vec<CongruenceRow> = (0..params.r())
        .map(|i| {
            let (lhs, rhs) = autos::congruence_sides(&params, &matrix, i);
            CongruenceRow {
                index: i + 1,
                label: autos::congruence_label(i),
                lhs,
                rhs,
                holds: lhs == rhs,
            }
        })
        .collect();
    let check = MatrixCheck {
        n,
        c,
        modulus: params.modulus(),
        matrix: &matrix,
        congruences,
        extendable,
    };
    if ctx.json {
        print_json(&check);
    } else {
        for row in &check.congruences {
            println!(
                "{}: {} (P(A_{}) = {}, p_{}^y_{} = {} mod {})",
                row.label,
                if row.holds { "holds" } else { "fails" },
                row.index,
                row.lhs,
                row.index,
                row.index,
                row.rhs,
                check.modulus
            );
        }
        if extendable {
            println!("extendable");
        } else {
            let failed: Vec<&str> = check
                .congruences
                .iter()
                .filter(|r| !r.holds)
                .map(|r| r.label.as_str())
                .collect();
            println!("not extendable: fails {}", failed.join(", "));
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct OracleOutput {
    report: ReidemeisterReport,
    oracle: OracleRecord,
}

pub fn reidemeister(
    ctx: &Context,
    n: u64,
    c: u32,
    auto_arg: &str,
    oracle: Option<((u32, u32), Option<u32>)>,
) -> CmdResult {
    let params = GroupParams::new(n, c, &ctx.limits)?;
    let phi: Automorphism = read_json(auto_arg, "automorphism")?;
    autos::validate(&params, &phi).into_result()?;

    let Some(((element_box, conjugator_box), max_cbox)) = oracle else {
        let report = twisted::reidemeister_exact(&params, &phi, &ctx.limits)?;
        if ctx.json {
            print_json(&report);
        } else {
            print!("{}", render::reidemeister(&report));
        }
        return Ok(ExitCode::SUCCESS);
    };

    if !twisted::reidemeister_finite(&params, &phi)? {
        let report = twisted::reidemeister_exact(&params, &phi, &ctx.limits)?;
        if ctx.json {
            print_json(&report);
        } else {
            print!("{}", render::reidemeister(&report));
        }
        return Ok(ExitCode::SUCCESS);
    }
    let max_cbox = max_cbox.unwrap_or(conjugator_box).max(conjugator_box);
    let record = twisted::reidemeister_oracle_escalating(
        &params,
        &phi,
        element_box,
        conjugator_box,
        max_cbox,
        &ctx.limits,
    )?;
    let report = record.report(&params, &phi)?;
    if ctx.json {
        print_json(&OracleOutput {
            report,
            oracle: record,
        });
    } else {
        print!("{}", render::oracle(&report, &record));
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct LcsTerm {
    k: u32,
    exponent: u64,
    order: u64,
    bruteforce: u64,
}

#[derive(Serialize)]
struct LcsTable {
    n: u64,
    c: u32,
    m: u64,
    modulus: u64,
    terms: Vec<LcsTerm>,
}

pub fn lcs(ctx: &Context, n: u64, c: u32) -> CmdResult {
    let params = GroupParams::new(n, c, &ctx.limits)?;
    let modulus = params.modulus();
    let mut terms = Vec::new();
    for k in 2..=c + 1 {
        let exponent = params.lcs_exponent(k)?;
        let bruteforce = params.lcs_exponent_bruteforce(k)?;
        if exponent != bruteforce {
            return Err(Error::Inconsistent(format!(
                "γ_{k}: formula gives {exponent}, commutators give {bruteforce}"
            ))
            .into());
        }
        let order = modulus / gcd(exponent, modulus);
        terms.push(LcsTerm {
            k,
            exponent,
            order,
            bruteforce,
        });
    }
    let table = LcsTable {
        n,
        c,
        m: params.m(),
        modulus,
        terms,
    };
    if ctx.json {
        print_json(&table);
    } else {
        println!("n = {n}, c = {c}, m = {}, m^c = {modulus}", params.m());
        for t in &table.terms {
            if t.order == 1 {
                println!("gamma_{} = 1 (trivial)", t.k);
            } else {
                println!("gamma_{} = <x^{}> (order {})", t.k, t.exponent, t.order);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn gcd(a: u64, b: u64) -> u64 {
    gsbs_core::modular::gcd(a, b)
}

fn to_element(params: &GroupParams, raw: RawElement) -> Result<GroupElement, CliError> {
    Ok(params.element(raw.y, &raw.theta)?)
}

pub fn mul(ctx: &Context, n: u64, c: u32, g_arg: &str, h_arg: &str) -> CmdResult {
    let params = GroupParams::new(n, c, &ctx.limits)?;
    let g = to_element(&params, read_json(g_arg, "element")?)?;
    let h = to_element(&params, read_json(h_arg, "element")?)?;
    let product = params.multiply(&g, &h);
    if ctx.json {
        println!("{}", serde_json::to_string(&product).expect("element serializes"));
    } else {
        println!("{product}");
    }
    Ok(ExitCode::SUCCESS)
}

fn load_corpus(path: &Path) -> Result<Corpus, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read corpus {}: {e}", path.display())))?;
    Corpus::from_json(&text)
        .map_err(|e| CliError::Usage(format!("corpus schema error in {}: {e}", path.display())))
}

pub fn corpus(ctx: &Context, path: &Path, regen: bool) -> CmdResult {
    if regen {
        let cases: Vec<(u64, u32)> = match fs::read_to_string(path) {
            Ok(text) => match Corpus::from_json(&text) {
                Ok(existing) => existing.cases.iter().map(|c| (c.n, c.c)).collect(),
                Err(_) => corpus::DEFAULT_CASES.to_vec(),
            },
            Err(_) => corpus::DEFAULT_CASES.to_vec(),
        };
        let fresh = corpus::regen(&cases, &ctx.limits)?;
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
        }
        fs::write(path, fresh.to_json())
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
        let counted = fresh.cases.iter().filter(|c| c.expected_count.is_some()).count();
        if ctx.json {
            print_json(&fresh);
        } else {
            println!(
                "wrote {} cases ({counted} with oracle counts) to {}",
                fresh.cases.len(),
                path.display()
            );
        }
        return Ok(ExitCode::SUCCESS);
    }

    let corpus = load_corpus(path)?;
    let outcomes = corpus::run(&corpus, &ctx.limits);
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    if ctx.json {
        print_json(&outcomes);
    } else {
        for o in &outcomes {
            if o.passed() {
                println!("PASS n={} c={}", o.n, o.c);
            } else {
                println!("FAIL n={} c={}: {}", o.n, o.c, o.failures.join("; "));
            }
        }
        println!("{} passed, {failed} failed", outcomes.len() - failed);
    }
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
