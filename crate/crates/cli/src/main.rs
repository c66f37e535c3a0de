use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use cylknot::catalog::{self, contains_submatrix, find_k5, knottability_filter, ContainmentWitness};
use cylknot::census::{census_run, CensusParams};
use cylknot::invariants::{det_i64, invariant, invariant_n, Profile};
use cylknot::io::{config_to_json, read_config, read_matrix, write_config, write_matrix, write_text};
use cylknot::solver::{self, SolveProblem};
use cylknot::topomatrix::{chirality_matrix, ring_matrix, spirality_matrix};
use cylknot::{IntegerMatrix, SeidelMatrix};

#[derive(Parser)]
#[command(name = "cylknot", version, about = "Topology and tangency of cylinder configurations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Chirality, ring and spirality matrices, invariants and knottability of a configuration.
    Analyze {
        config: PathBuf,
        /// Directory for the matrix files (default: next to the configuration).
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Solve the tangency equations for n mutually touching cylinders.
    Solve {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "equal-round")]
        profile: Profile,
        /// Fixed b/a ratio for the equal elliptic profile.
        #[arg(long)]
        aspect_ratio: Option<f64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        #[arg(long, default_value_t = solver::DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[arg(long, default_value_t = 500)]
        max_iterations: usize,
        /// Target chirality matrix: a matrix file or a catalog name.
        #[arg(long)]
        target: Option<String>,
        /// Configuration document used as the starting point.
        #[arg(long)]
        warm_start: Option<PathBuf>,
        /// Where to write the solved configuration (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample random n-crosses and tabulate invariant classes.
    Census {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 50_000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long = "det", default_value_t = -125, allow_hyphen_values = true)]
        det_target: i64,
        #[arg(long, default_value_t = 1.0)]
        half_side: f64,
        /// Tab-separated output table (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look for a target submatrix up to switching and relabelling.
    Check {
        matrix: PathBuf,
        /// Target: a matrix file or a catalog name.
        #[arg(long, required_unless_present = "k5_rank19")]
        target: Option<String>,
        /// Exhibit a K5 or mirrored K5 in a matrix of order at least 19.
        #[arg(long)]
        k5_rank19: bool,
    },
    /// List the built-in matrices, or print one of them.
    Catalog {
        /// Matrix name, or `ten-knot` for the ten-knot configuration.
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a triangle mesh (OBJ) of the cylinders.
    ExportMesh {
        config: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        length: f64,
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u32).range(3..))]
        segments: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Analyze { config, out_dir } => analyze(&config, out_dir.as_deref()),
        Command::Solve {
            n,
            profile,
            aspect_ratio,
            seed,
            restarts,
            tolerance,
            max_iterations,
            target,
            warm_start,
            out,
        } => {
            let mut problem = SolveProblem::new(n, profile).with_seed(seed).with_restarts(restarts);
            problem.tolerance = tolerance;
            problem.max_iterations = max_iterations;
            if let Some(k) = aspect_ratio {
                problem = problem.with_aspect_ratio(k);
            }
            if let Some(t) = target {
                problem = problem.with_target(SeidelMatrix::new(resolve_matrix(&t)?)?);
            }
            if let Some(w) = warm_start {
                problem = problem.with_warm_start(read_config(&w)?);
            }
            solve(&problem, out.as_deref())
        }
        Command::Census { n, trials, seed, det_target, half_side, out } => {
            if trials == 0 {
                bail!("--trials must be at least 1");
            }
            let census = census_run(&CensusParams { n, trials, det_target, seed, half_side })?;
            eprintln!(
                "{} draws, {} accepted, {} skipped, {} classes",
                census.draws,
                census.accepted,
                census.skipped,
                census.records.len()
            );
            emit(out.as_deref(), &census.to_tsv())
        }
        Command::Check { matrix, target, k5_rank19 } => check(&matrix, target.as_deref(), k5_rank19),
        Command::Catalog { name, out } => catalog_cmd(name.as_deref(), out.as_deref()),
        Command::ExportMesh { config, length, segments, out } => {
            let cfg = read_config(&config)?;
            write_text(&out, &cylknot::mesh::to_obj(&cfg, length, segments as usize)?)?;
            Ok(())
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => Ok(write_text(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// A matrix file if the path exists, otherwise a catalog name.
fn resolve_matrix(name: &str) -> Result<IntegerMatrix> {
    let path = Path::new(name);
    if path.exists() {
        return Ok(read_matrix(path)?);
    }
    Ok(catalog::lookup(name).with_context(|| format!("`{name}` is neither a file nor a catalog name"))?.matrix)
}

fn value_or_undefined(v: cylknot::Result<f64>) -> String {
    match v {
        Ok(x) => format!("{x:.10}"),
        Err(e) => format!("undefined ({e})"),
    }
}

fn analyze(path: &Path, out_dir: Option<&Path>) -> Result<()> {
    let cfg = read_config(path)?;
    cfg.check_nondegenerate()?;
    let p = chirality_matrix(&cfg)?;
    let r = ring_matrix(&cfg)?;
    println!("configuration: {} ({} cylinders)", cfg.label, cfg.len());
    println!("chirality matrix P:\n{p}");
    println!("det P = {}", det_i64(&p));
    println!("ring matrix R:\n{r}");
    let dir =
        out_dir.map(Path::to_path_buf).unwrap_or_else(|| path.parent().map(Path::to_path_buf).unwrap_or_default());
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("config");
    write_matrix(&dir.join(format!("{stem}.P.txt")), &p)?;
    write_matrix(&dir.join(format!("{stem}.R.txt")), &r)?;
    match spirality_matrix(&cfg) {
        Ok(s) => {
            println!("spirality matrix S:\n{s}");
            write_matrix(&dir.join(format!("{stem}.S.txt")), &s)?;
        }
        Err(e) => println!("spirality matrix S: undefined ({e})"),
    }
    println!("rings per line: {:?}", r.rings_per_line());
    println!("invariant = {}", value_or_undefined(invariant(&p, &r)));
    println!("invariant (mirror) = {}", value_or_undefined(invariant(&p.mirrored(), &r)));
    println!("invariant_n = {}", value_or_undefined(invariant_n(&p, &r)));
    println!("invariant_n (mirror) = {}", value_or_undefined(invariant_n(&p.mirrored(), &r)));
    println!("knottability: {}", knottability_filter(&cfg)?);
    Ok(())
}

fn solve(problem: &SolveProblem, out: Option<&Path>) -> Result<()> {
    let result = solver::solve(problem)?;
    let check = solver::validate(&result)?;
    eprintln!(
        "converged: restart {}, {} iterations, residual {:.3e}, max gap {:.3e}, min |n_i x n_j| {:.3e}",
        result.restart, result.iterations, result.residual_norm, check.max_gap, check.min_cross
    );
    eprintln!("gauge: {}", result.gauge);
    eprintln!("chirality matrix P:\n{}", result.realized_p);
    eprintln!("ring matrix R:\n{}", result.realized_r);
    if let Some(rep) = &result.report {
        eprintln!("invariant = {:.10}, mirror = {:.10}", rep.invariant, rep.invariant_mirror);
    }
    match out {
        Some(p) => Ok(write_config(p, &result.config)?),
        None => {
            println!("{}", config_to_json(&result.config));
            Ok(())
        }
    }
}

fn print_witness(w: &ContainmentWitness) {
    println!("contained: subset {:?}, switch signs {:?}, permutation {:?}", w.subset, w.switch_signs, w.permutation);
}

fn check(matrix: &Path, target: Option<&str>, k5_rank19: bool) -> Result<()> {
    let m = SeidelMatrix::new(read_matrix(matrix)?)?;
    if k5_rank19 {
        if m.order() < 19 {
            bail!("--k5-rank19 needs a matrix of order at least 19, got {}", m.order());
        }
        let w = find_k5(&m);
        println!("{}", if w.sign > 0 { "K5" } else { "-K5" });
        print_witness(&w.witness);
        return Ok(());
    }
    let t = SeidelMatrix::new(resolve_matrix(target.expect("clap requires a target"))?)?;
    match contains_submatrix(&m, &t)? {
        Some(w) => print_witness(&w),
        None => println!("not contained"),
    }
    Ok(())
}

fn catalog_cmd(name: Option<&str>, out: Option<&Path>) -> Result<()> {
    match name {
        None => {
            let mut text = String::from("name\tkind\torder\tdet\n");
            for m in catalog::named_matrices() {
                text.push_str(&format!("{}\t{:?}\t{}\t{}\n", m.name, m.kind, m.matrix.order(), det_i64(&m.matrix)));
            }
            text.push_str("ten-knot\tconfiguration\t10\t-\n");
            emit(out, &text)
        }
        Some(n) if n.eq_ignore_ascii_case("ten-knot") => emit(out, &(config_to_json(&catalog::ten_knot()) + "\n")),
        Some(n) => emit(out, &catalog::lookup(n)?.matrix.to_text()),
    }
}
