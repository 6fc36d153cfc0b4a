use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bjdist::exactlp::rational::{format_rational, format_vector, RatVector};
use bjdist::generate::{generate_with_budget, InstanceKind, DEFAULT_BUDGET};
use bjdist::minimax::{
    distance_operator_subspace, minimax_report, proximinal_transfer, verify_theorem, Instance,
    Status, Theorem,
};
use bjdist::operators::{
    norm_attainment_extremes, operator_norm, orthogonality_witness, subspace_operator_basis,
};
use bjdist::oracle::{bj_lambda_scan, estimate_operator_distance, SampleConfig, DEFAULT_GRID_STEPS};
use bjdist::proximity::{bj_orthogonal_subspace, bj_orthogonal_vec, distance_to_subspace};
use bjdist::schema::{
    instance_from_json, instance_to_json, matrix_json, minimax_report_json, rational_json,
    space_from_json, vector_json, verification_report_json, Limits,
};
use bjdist::space::{NormedSpace, Subspace};
use bjdist::suite::{run_verification_suite, RunManifest};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "bjdist", version, about = "Exact Birkhoff-James orthogonality and operator distances")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct SpaceArg {
    /// Space JSON: a file path, `-` for stdin, or an inline object.
    #[arg(long)]
    space: String,
}

#[derive(Args)]
struct InstanceArg {
    /// Instance JSON: a file path, `-` for stdin, or an inline object.
    #[arg(long)]
    instance: String,
}

#[derive(Subcommand)]
enum Command {
    /// Extreme points, dual extreme points and L1 predicates of a space.
    SpaceInfo(SpaceArg),
    Norm {
        #[command(flatten)]
        space: SpaceArg,
        /// Comma-separated rationals, e.g. `1/2,-3`.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    SupportSet {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Orthogonality of `x` to a vector `y` or to the span of `basis`.
    Bj {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "basis", required_unless_present = "basis")]
        y: Option<String>,
        /// Semicolon-separated vectors, e.g. `1,1;0,1`.
        #[arg(long, allow_hyphen_values = true)]
        basis: Option<String>,
        /// Also scan |x + lambda y| on a grid.
        #[arg(long, requires = "y")]
        scan: bool,
        #[arg(long, default_value_t = DEFAULT_GRID_STEPS)]
        grid_steps: usize,
    },
    Dist {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        basis: String,
    },
    OpNorm(InstanceArg),
    OpDist {
        #[command(flatten)]
        instance: InstanceArg,
        /// Also run the randomised upper-bound estimator.
        #[arg(long)]
        estimate: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        samples: usize,
    },
    Minimax(InstanceArg),
    Witness(InstanceArg),
    /// Best approximation to `y` from span(basis) through an operator problem.
    Transfer {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, allow_hyphen_values = true)]
        basis: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    Gen {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Verify one instance, or run a seeded suite writing JSON lines.
    Verify {
        #[arg(long)]
        theorem: String,
        #[arg(long, conflicts_with_all = ["trials", "seed", "max_dim"])]
        instance: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_dim: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Io(io::Error),
}

impl From<bjdist::Error> for CliError {
    fn from(e: bjdist::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// Result of a command: what to print and the exit code.
struct Output {
    json: Value,
    text: String,
    /// Printed verbatim in JSON mode instead of `json` (report streams).
    stream: Option<String>,
    code: u8,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Self {
            json,
            text,
            stream: None,
            code: 0,
        }
    }
}

fn read_json(arg: &str) -> CliResult<Value> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else if arg == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(arg)?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("bad JSON in {arg}: {e}")))
}

fn parse_vector(text: &str, limits: &Limits) -> CliResult<RatVector> {
    let parts: Vec<String> = text.split(',').map(|s| s.trim().to_string()).collect();
    Ok(limits.parse_vector(&parts)?)
}

fn parse_basis(text: &str, dim: usize, limits: &Limits) -> CliResult<Subspace> {
    let vectors = text
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|v| parse_vector(v, limits))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Subspace::new(dim, vectors)?)
}

fn load_space(arg: &SpaceArg, limits: &Limits) -> CliResult<NormedSpace> {
    Ok(space_from_json(&read_json(&arg.space)?, limits)?)
}

fn load_instance(arg: &str, limits: &Limits) -> CliResult<Instance> {
    Ok(instance_from_json(&read_json(arg)?, limits)?)
}

fn show(v: &[bjdist::exactlp::Rational]) -> String {
    format!("({})", format_vector(v).join(", "))
}

fn show_all(vs: &[RatVector]) -> String {
    vs.iter().map(|v| show(v)).collect::<Vec<_>>().join(" ")
}

fn write_file(path: &PathBuf, contents: &[u8]) -> CliResult<()> {
    fs::write(path, contents)?;
    Ok(())
}

fn run(cli: &Cli) -> CliResult<Output> {
    let limits = Limits::default();
    match &cli.command {
        Command::SpaceInfo(arg) => {
            let s = load_space(arg, &limits)?;
            let json = json!({
                "dim": s.dim(),
                "kind": s.kind(),
                "extreme_points": s.extreme_points().iter().map(|v| vector_json(v)).collect::<Vec<_>>(),
                "dual_extreme_points": s.dual_extreme_points().iter().map(|v| vector_json(v)).collect::<Vec<_>>(),
                "has_l1_property": s.has_l1_property(),
                "is_l1_predual": s.is_l1_predual(),
            });
            let text = format!(
                "dim {}\nextreme points: {}\ndual extreme points: {}\nL1 property: {}\nL1 predual: {}",
                s.dim(),
                show_all(s.extreme_points()),
                show_all(s.dual_extreme_points()),
                s.has_l1_property(),
                s.is_l1_predual()
            );
            Ok(Output::ok(json, text))
        }
        Command::Norm { space, x } => {
            let s = load_space(space, &limits)?;
            let n = s.norm(&parse_vector(x, &limits)?)?;
            Ok(Output::ok(json!({"norm": rational_json(&n)}), format_rational(&n)))
        }
        Command::SupportSet { space, x } => {
            let s = load_space(space, &limits)?;
            let j = s.support_set(&parse_vector(x, &limits)?)?;
            let json = json!({
                "extreme_functionals": j.extreme_functionals.iter().map(|v| vector_json(v)).collect::<Vec<_>>(),
                "span_dim": j.span_dim,
                "smooth": j.is_smooth(),
            });
            let text = format!("{}\nspan dimension {}", show_all(&j.extreme_functionals), j.span_dim);
            Ok(Output::ok(json, text))
        }
        Command::Bj {
            space,
            x,
            y,
            basis,
            scan,
            grid_steps,
        } => {
            let s = load_space(space, &limits)?;
            let x = parse_vector(x, &limits)?;
            if let Some(basis) = basis {
                let w = parse_basis(basis, s.dim(), &limits)?;
                let r = bj_orthogonal_subspace(&s, &x, &w)?;
                let json = json!({
                    "orthogonal": r.orthogonal,
                    "witness": r.witness.as_deref().map(vector_json),
                });
                return Ok(Output::ok(json, r.orthogonal.to_string()));
            }
            let y = parse_vector(y.as_deref().unwrap_or_default(), &limits)?;
            let orthogonal = bj_orthogonal_vec(&s, &x, &y)?;
            let mut json = json!({"orthogonal": orthogonal});
            let mut text = orthogonal.to_string();
            if *scan {
                let mut cfg = SampleConfig::new(0, 0);
                cfg.grid_steps = *grid_steps;
                let r = bj_lambda_scan(&s, &x, &y, &cfg)?;
                json["scan"] = json!({
                    "holds_on_grid": r.holds_on_grid,
                    "min_value": rational_json(&r.min_value),
                    "argmin_lambda": rational_json(&r.argmin_lambda),
                });
                text.push_str(&format!(
                    "\ngrid: holds {} min {} at lambda {}",
                    r.holds_on_grid, r.min_value, r.argmin_lambda
                ));
            }
            Ok(Output::ok(json, text))
        }
        Command::Dist { space, x, basis } => {
            let s = load_space(space, &limits)?;
            let w = parse_basis(basis, s.dim(), &limits)?;
            let r = distance_to_subspace(&s, &parse_vector(x, &limits)?, &w)?;
            let json = json!({
                "distance": rational_json(&r.distance),
                "witness": vector_json(&r.witness),
                "coefficients": vector_json(&r.coefficients),
                "optimal_face_dim": r.optimal_face_dim,
                "unique": r.is_unique(),
            });
            let text = format!(
                "distance {}\nbest approximation {}\noptimal face dimension {}",
                r.distance,
                show(&r.witness),
                r.optimal_face_dim
            );
            Ok(Output::ok(json, text))
        }
        Command::OpNorm(arg) => {
            let inst = load_instance(&arg.instance, &limits)?;
            let n = operator_norm(inst.t())?;
            let attaining = if inst.t().is_zero() {
                Vec::new()
            } else {
                norm_attainment_extremes(inst.t())?
            };
            let json = json!({
                "op_norm": rational_json(&n),
                "attaining_vertices": attaining.iter().map(|v| vector_json(v)).collect::<Vec<_>>(),
            });
            Ok(Output::ok(json, format!("{n}\nattained at {}", show_all(&attaining))))
        }
        Command::OpDist {
            instance,
            estimate,
            seed,
            samples,
        } => {
            let inst = load_instance(&instance.instance, &limits)?;
            let d = distance_operator_subspace(inst.t(), inst.z())?;
            let mut json = json!({
                "value": rational_json(&d.value),
                "best_S": matrix_json(d.best_s.matrix()),
            });
            let mut text = format!("distance {}\nbest S {:?}", d.value, d.best_s.matrix());
            if *estimate {
                let e = estimate_operator_distance(inst.t(), inst.z(), &SampleConfig::new(*seed, *samples))?;
                json["estimate"] = rational_json(&e);
                text.push_str(&format!("\nestimate {e}"));
            }
            Ok(Output::ok(json, text))
        }
        Command::Minimax(arg) => {
            let inst = load_instance(&arg.instance, &limits)?;
            let r = minimax_report(&inst)?;
            let text = format!(
                "|T| = {}\nd(T, L(X,Z)) = {}\nsup d(Tx, Z) = {}\ngap = {}\nT orthogonal to L(X,Z): {}\nargmax {}",
                r.op_norm,
                r.d_global,
                r.d_local,
                r.gap,
                r.is_t_orthogonal,
                show_all(&r.argmax_vertices)
            );
            Ok(Output::ok(minimax_report_json(&r), text))
        }
        Command::Witness(arg) => {
            let inst = load_instance(&arg.instance, &limits)?;
            let basis = subspace_operator_basis(inst.x(), inst.y(), inst.z())?;
            let w = orthogonality_witness(inst.t(), &basis)?;
            let json = match &w {
                Some(w) => json!({
                    "feasible": true,
                    "weights": w.weights.iter().map(rational_json).collect::<Vec<_>>(),
                    "pairs": w.pairs.iter().map(|p| json!({
                        "x": vector_json(&p.x),
                        "y_star": vector_json(&p.y_star),
                    })).collect::<Vec<_>>(),
                }),
                None => json!({"feasible": false}),
            };
            let text = match &w {
                Some(w) => w
                    .pairs
                    .iter()
                    .zip(&w.weights)
                    .map(|(p, l)| format!("{l} * {} (x) {}", show(&p.x), show(&p.y_star)))
                    .collect::<Vec<_>>()
                    .join("\n"),
                None => "no norming functional of T vanishes on L(X,Z)".into(),
            };
            Ok(Output::ok(json, text))
        }
        Command::Transfer { space, y, basis, n } => {
            let s = load_space(space, &limits)?;
            let z = parse_basis(basis, s.dim(), &limits)?;
            let r = proximinal_transfer(&s, &z, &parse_vector(y, &limits)?, *n)?;
            let json = json!({
                "z0": vector_json(&r.z0),
                "x0": vector_json(&r.x0),
                "distance": rational_json(&r.distance),
                "check": r.check,
            });
            let text = format!("z0 {}\ndistance {}\ncheck {}", show(&r.z0), r.distance, r.check);
            let mut out = Output::ok(json, text);
            if !r.check {
                out.code = 1;
            }
            Ok(out)
        }
        Command::Gen {
            kind,
            seed,
            max_dim,
            budget,
            output,
        } => {
            let kind = InstanceKind::parse(kind)
                .ok_or_else(|| CliError::Input(format!("unknown instance kind {kind:?}")))?;
            let inst = generate_with_budget(kind, *seed, *max_dim, *budget)?;
            let json = instance_to_json(&inst);
            if let Some(path) = output {
                write_file(path, serde_json::to_string_pretty(&json).unwrap().as_bytes())?;
            }
            let text = serde_json::to_string_pretty(&json).unwrap();
            Ok(Output::ok(json, text))
        }
        Command::Verify {
            theorem,
            instance,
            trials,
            seed,
            max_dim,
            output,
        } => {
            let theorem = Theorem::parse(theorem)
                .ok_or_else(|| CliError::Input(format!("unknown theorem {theorem:?}")))?;
            if let Some(arg) = instance {
                let start = Instant::now();
                let inst = load_instance(arg, &limits)?;
                let r = verify_theorem(&inst, theorem)?;
                let json = verification_report_json(&r);
                if let Some(path) = output {
                    let mut manifest = RunManifest::new(format!("verify {}", theorem.name()), 0, 1, limits.max_dim);
                    manifest.input = Some(arg.clone());
                    manifest.output = Some(path.display().to_string());
                    manifest.wall_time_ms = start.elapsed().as_millis();
                    let body = format!("{}\n{}\n", serde_json::to_string(&manifest).unwrap(), json);
                    write_file(path, body.as_bytes())?;
                }
                let mut text = format!("{}: {}", theorem.name(), r.status);
                for c in r.hypothesis_checks.iter().chain(&r.conclusion_checks) {
                    text.push_str(&format!("\n  [{}] {}: {}", if c.passed { "ok" } else { "no" }, c.name, c.detail));
                }
                let mut out = Output::ok(json, text);
                out.code = u8::from(r.status == Status::Violation);
                return Ok(out);
            }
            let trials = trials.ok_or_else(|| CliError::Input("either --instance or --trials is required".into()))?;
            let mut run = run_verification_suite(theorem, trials, seed.unwrap_or(0), max_dim.unwrap_or(3))?;
            run.manifest.output = output.as_ref().map(|p| p.display().to_string());
            let mut body = Vec::new();
            run.write_jsonl(&mut body)?;
            let text = format!(
                "{} trials of {}: verified {}, hypothesis_not_met {}, degenerate {}, VIOLATION {}",
                trials,
                theorem.name(),
                run.summary.verified,
                run.summary.hypothesis_not_met,
                run.summary.degenerate,
                run.summary.violation
            );
            let summary = json!({"summary": run.summary, "manifest": run.manifest});
            let mut out = Output::ok(summary, text);
            match output {
                Some(path) => write_file(path, &body)?,
                None => out.stream = Some(String::from_utf8(body).expect("JSON is UTF-8")),
            }
            out.code = u8::from(run.exit_code() != 0);
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            let printed = match (cli.format, &out.stream) {
                (Format::Json, Some(stream)) => write!(stdout, "{stream}"),
                (Format::Json, None) => writeln!(stdout, "{}", out.json),
                (Format::Text, _) => writeln!(stdout, "{}", out.text),
            };
            if printed.is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(out.code)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("I/O error: {e}");
            ExitCode::from(2)
        }
    }
}
