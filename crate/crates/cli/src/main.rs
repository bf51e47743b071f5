//! `lytensor`: command line front end for the Lee-Yang tensor toolkit.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lytensor_core::barvinok::grover_rudolph_emulate;
use lytensor_core::hamiltonian::gibbs;
use lytensor_core::study::{random_phases, write_records, write_roots};
use lytensor_core::tensor::parse_bits;
use lytensor_core::{
    assess_ly, build_epr_like, build_phase_shifted, circuit_to_six_vertex, equatorial_poly, estimate_x_amplitude,
    eulerian_partition, falsify_ly, poly_roots, run_study, spectral_data, trotter_trace, trotterize, Budget, Family,
    Graph, MultiRadius, SfSpec, StateTensor, StudyConfig, StudyKind,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

#[derive(Parser)]
#[command(
    name = "lytensor",
    version,
    about = "Lee-Yang tensors: zero-free checks, amplitude estimation and spectral studies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for zeros of the generating polynomial inside a polydisk.
    CheckLy {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        radius: f64,
        /// Random sample points; rays scale with it.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Roots of the equatorial polynomial `F_y` as CSV.
    Roots {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        y: String,
    },
    /// Interpolation estimate of the X-basis amplitude `<y|H^n|ψ>`.
    EstimateAmplitude {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        y: String,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        radius: f64,
    },
    /// Classical emulation of Grover-Rudolph state preparation.
    GrPrep {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Spectral data of the EPR-like Hamiltonian on a graph.
    Gap {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        s: f64,
        #[arg(long, value_enum)]
        phases: Option<Phases>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Trotterized XXZ trace versus the six-vertex partition function.
    Sixvertex {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        d: f64,
        #[arg(long)]
        f: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Numerical study over a graph family, written as CSV.
    Study(StudyArgs),
    /// Falsification scan of a random Suzuki-Fisher Gibbs state across radii.
    SfScan {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        r_min: f64,
        #[arg(long, default_value_t = 3.0)]
        r_max: f64,
        #[arg(long, default_value_t = 9)]
        points: usize,
        #[arg(long, default_value_t = 2_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Phases {
    Random,
}

#[derive(Args)]
struct StudyArgs {
    #[arg(value_parser = parse_kind)]
    kind: StudyKind,
    #[arg(long)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Root CSV for ly-radius; defaults to `<out stem>.roots.csv`.
    #[arg(long)]
    roots: Option<PathBuf>,
    /// Keep one graph per isomorphism class (default when n_max <= 7).
    #[arg(long, conflicts_with = "no_dedup")]
    dedup: bool,
    #[arg(long)]
    no_dedup: bool,
}

fn parse_kind(s: &str) -> Result<StudyKind, String> {
    s.parse().map_err(|e: lytensor_core::Error| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: lytensor_core::Error| e.to_string())
}

fn read_state(path: &Path) -> CliResult<StateTensor> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}

fn read_graph(path: &Path) -> CliResult<Graph> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(Graph::parse(&text)?)
}

fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn roots_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.roots.csv"))
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::CheckLy {
            input,
            radius,
            budget,
            seed,
        } => {
            let psi = read_state(&input)?;
            let r = MultiRadius::uniform(psi.n_indices(), radius)?;
            let verdict = assess_ly(&psi, &r, &Budget::new(budget, seed))?;
            print_json(&verdict)?;
        }
        Command::Roots { input, y } => {
            let psi = read_state(&input)?;
            let p = equatorial_poly(&psi, &parse_bits(&y)?)?;
            let roots = poly_roots(&p)?;
            let mut w = csv::Writer::from_writer(std::io::stdout().lock());
            w.write_record(["re", "im", "modulus", "residual"])?;
            for z in &roots.roots {
                w.serialize((z.re, z.im, z.norm(), p.eval(*z).norm()))?;
            }
            w.flush()?;
        }
        Command::EstimateAmplitude {
            input,
            y,
            epsilon,
            radius,
        } => {
            let psi = read_state(&input)?;
            let est = estimate_x_amplitude(&psi, &parse_bits(&y)?, epsilon, radius)?;
            print_json(&json!({
                "value": [est.value.re, est.value.im],
                "bound": est.relative_error_bound,
                "p": est.order,
                "reads": est.reads,
                "exact_fallback": est.exact_fallback,
            }))?;
        }
        Command::GrPrep {
            input,
            epsilon,
            radius,
            out,
            log,
        } => {
            let psi = read_state(&input)?;
            let res = grover_rudolph_emulate(&psi, epsilon, radius)?;
            fs::write(&out, serde_json::to_string_pretty(&res.state)?)?;
            if let Some(path) = log {
                let mut w = csv::Writer::from_path(&path)?;
                for entry in &res.log {
                    w.serialize(entry)?;
                }
                w.flush()?;
            }
            print_json(&json!({
                "distance": res.distance,
                "epsilon": res.epsilon,
                "radius": res.radius,
                "phase_bits": res.phase_bits,
                "queries": res.log.len(),
                "max_order_used": res.log.iter().map(|e| e.p_used).max().unwrap_or(0),
            }))?;
        }
        Command::Gap { graph, s, phases, seed } => {
            let g = read_graph(&graph)?;
            let h = match phases {
                Some(Phases::Random) => build_phase_shifted(&random_phases(&g, seed)?, s)?,
                None if g.edges().iter().any(|e| e.theta != 0.0) => build_phase_shifted(&g, s)?,
                None => build_epr_like(&g, s)?,
            };
            print_json(&spectral_data(&h)?)?;
        }
        Command::Sixvertex {
            graph,
            d,
            f,
            beta,
            steps,
        } => {
            let g = read_graph(&graph)?;
            let circuit = trotterize(&g, d, f, beta, steps)?;
            let trace = trotter_trace(&circuit)?;
            let (gamma, params) = circuit_to_six_vertex(&circuit);
            let sum = eulerian_partition(&gamma, &params)?;
            print_json(&json!({
                "trotter_trace": trace.re,
                "trotter_trace_im": trace.im,
                "eulerian_sum": sum,
                "params": {"a": params.a, "b": params.b, "c": params.c},
                "regime": params.regime(),
            }))?;
        }
        Command::Study(args) => {
            let dedup = if args.no_dedup {
                false
            } else {
                args.dedup || args.n_max <= 7
            };
            let cfg = StudyConfig {
                study: args.kind,
                n_min: args.n_min,
                n_max: args.n_max,
                family: args.family,
                samples: args.samples,
                seed: args.seed,
                dedup,
            };
            let output = run_study(&cfg)?;
            write_records(BufWriter::new(File::create(&args.out)?), &output.records)?;
            if cfg.study == StudyKind::LyRadius {
                let path = args.roots.unwrap_or_else(|| roots_path(&args.out));
                write_roots(BufWriter::new(File::create(&path)?), &output.roots)?;
            }
            let failed = output.records.iter().filter(|r| !r.pass).count();
            eprintln!("{} rows, {failed} failing", output.records.len());
            if failed > 0 {
                return Ok(ExitCode::from(1));
            }
        }
        Command::SfScan {
            graph,
            beta,
            r_min,
            r_max,
            points,
            budget,
            seed,
        } => {
            let g = read_graph(&graph)?;
            let spec = SfSpec::random(g, &mut ChaCha8Rng::seed_from_u64(seed));
            let psi = gibbs(&spec.build()?, beta)?.into_tensor();
            let m = psi.n_indices();
            let candidate = spec
                .fields
                .iter()
                .map(|f| (beta * f[2]).exp())
                .fold(f64::INFINITY, f64::min);
            let mut rows = Vec::new();
            for k in 0..points {
                let t = if points == 1 {
                    0.0
                } else {
                    k as f64 / (points - 1) as f64
                };
                let r = r_min + t * (r_max - r_min);
                let v = falsify_ly(&psi, &MultiRadius::uniform(m, r)?, &Budget::new(budget, seed))?;
                rows.push(json!({"radius": r, "verdict": v.kind, "witness": v.witness}));
            }
            print_json(&json!({
                "couplings": spec.couplings,
                "fields": spec.fields,
                "particle_preserving": spec.is_particle_preserving(),
                "candidate_radius": candidate,
                "scan": rows,
            }))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn is_broken_pipe(e: &(dyn std::error::Error + 'static)) -> bool {
    let kind = e
        .downcast_ref::<std::io::Error>()
        .map(|io| io.kind())
        .or_else(|| e.downcast_ref::<serde_json::Error>().and_then(|j| j.io_error_kind()));
    kind == Some(std::io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) if is_broken_pipe(e.as_ref()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
