use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pdpc::certify::find_certificate;
use pdpc::enumerate::{enum_completions, patch_bound};
use pdpc::gen::{generate, GenParams, FAMILIES};
use pdpc::io::{parse_instance, parse_solution, write_atomic, write_instance, write_solution, SolutionFile};
use pdpc::oracle::brute_oracle;
use pdpc::placement::chords_placeable;
use pdpc::region::{validate_instance, PdpcInstance};
use pdpc::solver::{audit, min_solve, solve, SolveError, SolveOptions, Verdict};

const YES: u8 = 0;
const NO: u8 = 1;
const USAGE: u8 = 2;
const CAPS: u8 = 3;

/// Largest completion size `enum` accepts.
const ENUM_CAP: usize = 4;

#[derive(Parser)]
#[command(name = "pdpc", version, about = "Planar disjoint-paths completion")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Find a smallest patch within the budget
    Solve {
        instance: PathBuf,
        /// report the minimum patch size, ignoring the budget
        #[arg(long)]
        min: bool,
        /// override the budget
        #[arg(long)]
        ell: Option<usize>,
        /// cross-check against the brute-force oracle
        #[arg(long)]
        oracle: bool,
        /// also search for a realised compatibility certificate
        #[arg(long)]
        certify: bool,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// recorded in the output; the search itself is deterministic
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// write the solution here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a solution file against an instance
    Verify { instance: PathBuf, solution: PathBuf },
    /// Generate an instance
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        ell: usize,
        #[arg(long, default_value_t = 5)]
        size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate bounded universes
    Enum {
        /// plane completions with at most B edges
        #[arg(long, value_name = "B")]
        completions: usize,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("pdpc: {msg}");
    ExitCode::from(code)
}

fn read_instance(path: &Path) -> Result<PdpcInstance, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(USAGE, format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| fail(USAGE, format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), ExitCode> {
    match out {
        Some(p) => write_atomic(p, text).map_err(|e| fail(USAGE, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solve_error(e: SolveError) -> ExitCode {
    match e {
        SolveError::Invalid(_) => fail(USAGE, e),
        SolveError::Unsupported(_) => fail(CAPS, e),
        SolveError::Internal(_) => fail(USAGE, e),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_solve(
    path: &Path,
    min: bool,
    ell: Option<usize>,
    oracle: bool,
    certify: bool,
    jobs: usize,
    seed: u64,
    out: &Option<PathBuf>,
) -> Result<ExitCode, ExitCode> {
    let mut inst = read_instance(path)?;
    if let Some(l) = ell {
        inst.ell = l;
    }
    let opts = SolveOptions { jobs, ..SolveOptions::default() };
    let verdict = if min {
        let m = min_solve(&inst, &opts).map_err(solve_error)?;
        match m.min {
            Some(s) => println!("MIN {s}"),
            None => println!("MIN none"),
        }
        m.verdict
    } else {
        solve(&inst, &opts).map_err(solve_error)?
    };
    if oracle {
        let o = brute_oracle(&inst).map_err(|e| fail(CAPS, e))?;
        let mine = verdict.size().filter(|&s| min || s <= inst.ell);
        if !min && o != mine {
            return Err(fail(USAGE, format!("oracle disagrees: solver {mine:?}, oracle {o:?}")));
        }
        println!("ORACLE {}", o.map_or("none".into(), |s| s.to_string()));
    }
    if certify {
        let k = validate_instance(&inst).map(|p| p.k()).unwrap_or(0);
        let bound = patch_bound(k).map(|b| b.min(inst.ell as u128) as usize).unwrap_or(inst.ell);
        match find_certificate(&inst, bound) {
            Ok(Some(r)) => println!(
                "CERTIFIED patch {} edges, lambda {}, rho {:?}",
                r.certificate.candidate.edges.len(),
                r.certificate.candidate.lambda(),
                r.rho
            ),
            Ok(None) => println!("CERTIFIED none"),
            Err(e) => return Err(fail(USAGE, e.join("; "))),
        }
    }
    Ok(match verdict {
        Verdict::Yes { placement, solution, size } => {
            println!("YES size {size} seed {seed}");
            emit(out, &write_solution(&SolutionFile::from_patch(&placement.edges, &solution.paths)))?;
            ExitCode::from(YES)
        }
        Verdict::NoWithinEll { ell } => {
            println!("NO no patch with at most {ell} edges");
            ExitCode::from(NO)
        }
        Verdict::Infeasible => {
            println!("NO infeasible up to patch_bound(k)");
            ExitCode::from(NO)
        }
    })
}

fn run_verify(inst_path: &Path, sol_path: &Path) -> Result<ExitCode, ExitCode> {
    let inst = read_instance(inst_path)?;
    let text = std::fs::read_to_string(sol_path).map_err(|e| fail(USAGE, format!("{}: {e}", sol_path.display())))?;
    let sol = parse_solution(&text).map_err(|e| fail(USAGE, format!("{}: {e}", sol_path.display())))?;
    let prep = validate_instance(&inst).map_err(|e| fail(USAGE, e.join("; ")))?;
    let mut result = audit(&prep, &sol.edges(), &sol.paths);
    if result.is_ok() {
        // corners given in the file must be drawable as given
        let given: Vec<_> = sol.patch.iter().filter_map(|&(u, v, c)| c.map(|c| (u, v, c))).collect();
        for &(u, v, (a, b)) in &given {
            let ok = |c: pdpc::region::Corner, x| c.hole < prep.lambda() && prep.walks[c.hole].get(c.pos) == Some(&x);
            if !ok(a, u) || !ok(b, v) {
                result = Err(format!("endpoint off boundary: corner of ({u},{v}) is not at its vertex"));
            }
        }
        let chords: Vec<_> = given.iter().map(|&(_, _, c)| c).collect();
        if result.is_ok() && !chords_placeable(prep.n(), &prep.walks, &chords) {
            result = Err("patch not embeddable with the given corners".into());
        }
    }
    Ok(match result {
        Ok(()) => {
            println!("VALID size {}", sol.patch.len());
            ExitCode::from(YES)
        }
        Err(msg) => {
            println!("INVALID {msg}");
            ExitCode::from(NO)
        }
    })
}

fn run() -> Result<ExitCode, ExitCode> {
    let cli = Cli::try_parse().map_err(|e| {
        let _ = e.print();
        match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
            _ => ExitCode::from(USAGE),
        }
    })?;
    match cli.cmd {
        Cmd::Solve { instance, min, ell, oracle, certify, jobs, seed, out } => {
            run_solve(&instance, min, ell, oracle, certify, jobs, seed, &out)
        }
        Cmd::Verify { instance, solution } => run_verify(&instance, &solution),
        Cmd::Gen { family, seed, k, ell, size, out } => {
            let params = GenParams { k, ell, size };
            let inst = generate(&family, seed, &params)
                .ok_or_else(|| fail(USAGE, format!("unknown family `{family}`; one of {}", FAMILIES.join(", "))))?;
            emit(&out, &write_instance(&inst))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Enum { completions } => {
            if completions > ENUM_CAP {
                return Err(fail(CAPS, format!("--completions {completions} exceeds cap {ENUM_CAP}")));
            }
            let all = enum_completions(completions);
            println!("completions {completions}: {}", all.len());
            for c in &all {
                let edges: Vec<String> = c.graph.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
                println!("{} edges: {}", c.edge_count(), edges.join(" "));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    run().unwrap_or_else(|code| code)
}
