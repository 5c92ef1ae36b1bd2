//! Command-line front end: accuracy tables, benchmark runs with field dumps,
//! convergence and efficiency CSVs, and a single-stencil weight inspector.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};

use oweno::accuracy::{order_table, write_order_table_csv, TABLE_KERNELS};
use oweno::kernels::{
    jsweno3_weights, jsweno5_weights, oweno3_weights, ycweno3_weights, Epsilon, KernelKind,
    ReconstructionMode, StencilWindow,
};
use oweno::problems::{error_vs_exact, error_vs_reference, make_problem, ErrorNorms, Problem};
use oweno::solver::{
    compute_dt, initial_field, integrate, rk3_step, semidiscrete_rhs, validate_config,
    write_field_csv, Field, Integration, RhsScratch, RunConfig, Splitting,
};

#[derive(Parser)]
#[command(name = "oweno", about = "WENO reconstruction kernels and conservation-law benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Algebraic accuracy table: average reconstruction orders per scheme,
    /// mode and test function on the refinement ladder.
    Accuracy {
        /// Number of grid refinements (levels are n_j = 5 * 2^j, j <= jmax).
        #[arg(long, default_value_t = 8)]
        jmax: usize,
        #[arg(long, default_value_t = 1e-100)]
        eps: f64,
        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one benchmark and dump the final field.
    Solve {
        #[arg(long)]
        problem: String,
        #[arg(long, default_value = "oweno3")]
        scheme: String,
        /// Grid size: N for 1D (or a square 2D grid), NxM for 2D.
        #[arg(long)]
        n: String,
        #[arg(long)]
        cfl: Option<f64>,
        #[arg(long)]
        tfinal: Option<f64>,
        #[arg(long, default_value_t = 1e-100)]
        eps: f64,
        /// upwind | characteristic-llf | donat-marquina
        #[arg(long)]
        splitting: Option<String>,
        /// Final-field CSV path.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Also dump every STEPS steps (numbered files next to --dump).
        #[arg(long)]
        dump_every: Option<usize>,
    },
    /// Error/order table over a list of grid sizes.
    Convergence {
        #[arg(long)]
        problem: String,
        #[arg(long, default_value = "oweno3")]
        scheme: String,
        /// Comma-separated grid sizes, e.g. 40,80,160.
        #[arg(long)]
        levels: String,
        #[arg(long)]
        cfl: Option<f64>,
        #[arg(long, default_value_t = 1e-100)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Error versus wall time per scheme and grid size.
    Efficiency {
        #[arg(long)]
        problem: String,
        /// Comma-separated scheme list, e.g. oweno3,jsweno3.
        #[arg(long)]
        schemes: String,
        #[arg(long)]
        levels: String,
        #[arg(long)]
        cfl: Option<f64>,
        #[arg(long, default_value_t = 1e-100)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print every intermediate weight quantity of one reconstruction.
    Stencil(StencilArgs),
}

#[derive(Args)]
struct StencilArgs {
    /// jsweno3 | ycweno3 | oweno3 | jsweno5
    #[arg(long)]
    kernel: String,
    /// Comma-separated window values, width matching the kernel.
    #[arg(long)]
    values: String,
    #[arg(long, default_value_t = 1e-100)]
    eps: f64,
    /// point | cell
    #[arg(long, default_value = "point")]
    mode: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn usage_error(msg: String) -> ExitCode {
    eprintln!("usage error: {msg}");
    ExitCode::from(2)
}

fn parse_eps(eps: f64) -> Result<Epsilon, ExitCode> {
    Epsilon::new(eps).map_err(|e| usage_error(e.to_string()))
}

fn parse_kernel(s: &str) -> Result<KernelKind, ExitCode> {
    KernelKind::parse(s).ok_or_else(|| usage_error(format!("unknown scheme '{s}'")))
}

fn parse_grid(spec: &str, two_d: bool) -> Result<(usize, usize), ExitCode> {
    let parse_one =
        |t: &str| t.parse::<usize>().map_err(|_| usage_error(format!("bad grid size '{spec}'")));
    match spec.split_once('x') {
        Some((a, b)) => {
            if !two_d {
                return Err(usage_error(format!("'{spec}' is 2D but the problem is 1D")));
            }
            Ok((parse_one(a)?, parse_one(b)?))
        }
        None => {
            let n = parse_one(spec)?;
            Ok((n, if two_d { n } else { 1 }))
        }
    }
}

fn parse_levels(spec: &str) -> Result<Vec<usize>, ExitCode> {
    let levels: Result<Vec<usize>, _> = spec.split(',').map(|t| t.trim().parse::<usize>()).collect();
    match levels {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(usage_error(format!("bad level list '{spec}'"))),
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, String> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| format!("cannot write {}: {e}", p.display()))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn run_config(
    problem: &Problem,
    kernel: KernelKind,
    cfl: Option<f64>,
    tfinal: Option<f64>,
    eps: Epsilon,
    splitting: Option<Splitting>,
) -> RunConfig {
    RunConfig {
        kernel,
        cfl: cfl.unwrap_or(problem.default_cfl),
        t_final: tfinal.unwrap_or(problem.t_final),
        eps,
        splitting: splitting.unwrap_or(problem.default_splitting),
    }
}

// Reference solution for problems without a closed form: an OWENO3 self-run
// at the catalog's reference resolution.
fn reference_run(problem: &Problem, eps: Epsilon) -> Result<Option<Integration>, String> {
    match problem.reference_n {
        None => Ok(None),
        Some(n) => {
            let cfg = run_config(problem, KernelKind::Oweno3, None, None, eps, None);
            let ny = if problem.setup.two_d { n } else { 1 };
            let run = integrate(&problem.setup, &cfg, n, ny).map_err(|e| e.to_string())?;
            Ok(Some(run))
        }
    }
}

fn norms_for(
    problem: &Problem,
    run: &Integration,
    reference: &Option<Integration>,
) -> Result<ErrorNorms, String> {
    if problem.exact.is_some() {
        error_vs_exact(&run.field, problem, run.t).map_err(|e| e.to_string())
    } else if let Some(reference) = reference {
        error_vs_reference(&run.field, &reference.field).map_err(|e| e.to_string())
    } else {
        Err(format!(
            "problem '{}' has neither an exact solution nor a reference resolution",
            problem.name
        ))
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Accuracy { jmax, eps, out } => {
            if jmax < 2 {
                return Ok(usage_error(format!("jmax must be at least 2, got {jmax}")));
            }
            let eps = match parse_eps(eps) {
                Ok(e) => e,
                Err(code) => return Ok(code),
            };
            let cells = order_table(&TABLE_KERNELS, jmax, eps);
            let mut w = open_out(&out)?;
            write_order_table_csv(&cells, &mut w).map_err(|e| e.to_string())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve { problem, scheme, n, cfl, tfinal, eps, splitting, dump, dump_every } => {
            let prob = match make_problem(&problem) {
                Ok(p) => p,
                Err(e) => return Ok(usage_error(e.to_string())),
            };
            let kernel = match parse_kernel(&scheme) {
                Ok(k) => k,
                Err(code) => return Ok(code),
            };
            let eps = match parse_eps(eps) {
                Ok(e) => e,
                Err(code) => return Ok(code),
            };
            let split = match splitting.as_deref() {
                None => None,
                Some(s) => match Splitting::parse(s) {
                    Some(sp) => Some(sp),
                    None => return Ok(usage_error(format!("unknown splitting '{s}'"))),
                },
            };
            let (nx, ny) = match parse_grid(&n, prob.setup.two_d) {
                Ok(g) => g,
                Err(code) => return Ok(code),
            };
            let cfg = run_config(&prob, kernel, cfl, tfinal, eps, split);
            let run = solve_with_dumps(&prob, &cfg, nx, ny, dump.as_deref(), dump_every)?;
            println!(
                "{},{},{},{},{},{},{:.6}",
                prob.name,
                kernel,
                n,
                cfg.cfl,
                cfg.t_final,
                run.steps,
                run.walltime.as_secs_f64()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Convergence { problem, scheme, levels, cfl, eps, out } => {
            let prob = match make_problem(&problem) {
                Ok(p) => p,
                Err(e) => return Ok(usage_error(e.to_string())),
            };
            let kernel = match parse_kernel(&scheme) {
                Ok(k) => k,
                Err(code) => return Ok(code),
            };
            let eps = match parse_eps(eps) {
                Ok(e) => e,
                Err(code) => return Ok(code),
            };
            let levels = match parse_levels(&levels) {
                Ok(v) => v,
                Err(code) => return Ok(code),
            };
            let reference = reference_run(&prob, eps)?;
            let mut w = open_out(&out)?;
            writeln!(w, "n,l1_err,l1_order,linf_err,linf_order").map_err(|e| e.to_string())?;
            let mut prev: Option<ErrorNorms> = None;
            for &n in &levels {
                let cfg = run_config(&prob, kernel, cfl, None, eps, None);
                let ny = if prob.setup.two_d { n } else { 1 };
                let run = integrate(&prob.setup, &cfg, n, ny).map_err(|e| e.to_string())?;
                let norms = norms_for(&prob, &run, &reference)?;
                let (o1, oi) = match prev {
                    Some(p) => (
                        format!("{:.6}", (p.l1 / norms.l1).log2()),
                        format!("{:.6}", (p.linf / norms.linf).log2()),
                    ),
                    None => (String::new(), String::new()),
                };
                writeln!(w, "{n},{:.6e},{o1},{:.6e},{oi}", norms.l1, norms.linf)
                    .map_err(|e| e.to_string())?;
                prev = Some(norms);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Efficiency { problem, schemes, levels, cfl, eps, out } => {
            let prob = match make_problem(&problem) {
                Ok(p) => p,
                Err(e) => return Ok(usage_error(e.to_string())),
            };
            let eps = match parse_eps(eps) {
                Ok(e) => e,
                Err(code) => return Ok(code),
            };
            let mut kernels = Vec::new();
            for token in schemes.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                match parse_kernel(token) {
                    Ok(k) => kernels.push(k),
                    Err(code) => return Ok(code),
                }
            }
            if kernels.is_empty() {
                return Ok(usage_error("empty scheme list".into()));
            }
            let levels = match parse_levels(&levels) {
                Ok(v) => v,
                Err(code) => return Ok(code),
            };
            let reference = reference_run(&prob, eps)?;
            let mut w = open_out(&out)?;
            writeln!(w, "scheme,n,l1_err,walltime_s").map_err(|e| e.to_string())?;
            for &kernel in &kernels {
                for &n in &levels {
                    let cfg = run_config(&prob, kernel, cfl, None, eps, None);
                    let ny = if prob.setup.two_d { n } else { 1 };
                    let run = integrate(&prob.setup, &cfg, n, ny).map_err(|e| e.to_string())?;
                    let norms = norms_for(&prob, &run, &reference)?;
                    writeln!(w, "{kernel},{n},{:.6e},{:.6}", norms.l1, run.walltime.as_secs_f64())
                        .map_err(|e| e.to_string())?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Stencil(args) => cmd_stencil(args),
    }
}

// Integration loop with optional periodic dumps; wall time covers only the
// time-stepping work, not the dumps.
fn solve_with_dumps(
    problem: &Problem,
    config: &RunConfig,
    nx: usize,
    ny: usize,
    dump: Option<&Path>,
    dump_every: Option<usize>,
) -> Result<Integration, String> {
    let setup = &problem.setup;
    validate_config(setup, config).map_err(|e| e.to_string())?;
    let mut field = initial_field(setup, nx, ny);
    let mut stage = field.clone();
    let rows = if setup.two_d { ny } else { 1 };
    let mut k_buf = vec![0.0f64; nx * rows * field.nv];
    let mut acc_buf = vec![0.0f64; nx * rows * field.nv];
    let mut scratch = RhsScratch::default();

    let mut walltime = Duration::ZERO;
    let mut t = 0.0f64;
    let mut steps = 0usize;
    while t < config.t_final {
        let tick = Instant::now();
        let dt = compute_dt(&field, setup, config, t).map_err(|e| e.to_string())?;
        let landing = t + dt >= config.t_final;
        rk3_step(&mut field, t, dt, &mut stage, &mut k_buf, &mut acc_buf, |f, stage_t, out| {
            semidiscrete_rhs(f, setup, config, stage_t, out, &mut scratch)
        })
        .map_err(|e| e.to_string())?;
        t = if landing { config.t_final } else { t + dt };
        steps += 1;
        walltime += tick.elapsed();

        if let (Some(path), Some(every)) = (dump, dump_every) {
            if every > 0 && steps.is_multiple_of(every) && !landing {
                dump_field(&field, &numbered_path(path, steps))?;
            }
        }
    }
    if let Some(path) = dump {
        dump_field(&field, path)?;
    }
    Ok(Integration { field, steps, t, walltime })
}

fn numbered_path(path: &Path, step: usize) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("field");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}.{step:06}.{ext}"))
}

fn dump_field(field: &Field, path: &Path) -> Result<(), String> {
    let f = File::create(path).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    let mut w = BufWriter::new(f);
    write_field_csv(field, &mut w).map_err(|e| e.to_string())?;
    w.flush().map_err(|e| e.to_string())
}

fn cmd_stencil(args: StencilArgs) -> Result<ExitCode, String> {
    let kernel = match parse_kernel(&args.kernel) {
        Ok(k) => k,
        Err(code) => return Ok(code),
    };
    let eps = match parse_eps(args.eps) {
        Ok(e) => e,
        Err(code) => return Ok(code),
    };
    let mode = match ReconstructionMode::parse(&args.mode) {
        Some(m) => m,
        None => return Ok(usage_error(format!("unknown mode '{}'", args.mode))),
    };
    let values: Result<Vec<f64>, _> =
        args.values.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let values = match values {
        Ok(v) => v,
        Err(_) => return Ok(usage_error(format!("bad value list '{}'", args.values))),
    };
    if values.len() != kernel.stencil_width() {
        return Ok(usage_error(format!(
            "kernel {kernel} expects {} values, got {}",
            kernel.stencil_width(),
            values.len()
        )));
    }

    match kernel {
        KernelKind::Oweno3 => {
            let d = oweno3_weights(
                &StencilWindow([values[0], values[1], values[2], values[3]]),
                eps,
                mode,
            );
            println!(
                "kernel=oweno3 mode={mode} I0={:.6e} I1={:.6e} I2={:.6e} d={:.6e} J={:.6e} tau={:.6e} omega={:.6e} tw0={:.6e} tw1={:.6e} w0={:.6e} w1={:.6e} p0={:.6e} p1={:.6e} result={:.17e}",
                d.i0, d.i1, d.i2, d.d, d.j, d.tau, d.omega, d.tw0, d.tw1, d.w0, d.w1, d.p0, d.p1, d.value
            );
        }
        KernelKind::JsWeno3 | KernelKind::YcWeno3 => {
            let d = if kernel == KernelKind::JsWeno3 {
                jsweno3_weights(values[0], values[1], values[2], eps, mode)
            } else {
                ycweno3_weights(values[0], values[1], values[2], eps, mode)
            };
            println!(
                "kernel={kernel} mode={mode} I0={:.6e} I1={:.6e} sigma={:.6e} w0={:.6e} w1={:.6e} p0={:.6e} p1={:.6e} result={:.17e}",
                d.i0, d.i1, d.sigma, d.w0, d.w1, d.p0, d.p1, d.value
            );
        }
        KernelKind::JsWeno5 => {
            let d = jsweno5_weights(
                &[values[0], values[1], values[2], values[3], values[4]],
                eps,
                mode,
            );
            println!(
                "kernel=jsweno5 mode={mode} beta0={:.6e} beta1={:.6e} beta2={:.6e} w0={:.6e} w1={:.6e} w2={:.6e} q0={:.6e} q1={:.6e} q2={:.6e} result={:.17e}",
                d.beta[0], d.beta[1], d.beta[2], d.w[0], d.w[1], d.w[2], d.q[0], d.q[1], d.q[2], d.value
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}
