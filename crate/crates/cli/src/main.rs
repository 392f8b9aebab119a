use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use linesum::continuous::{continuous_project, profiles};
use linesum::enumerate::{enumerate_binary_solutions, DEFAULT_CAP};
use linesum::instance::{self, q_value, Instance};
use linesum::lattice::{construct_integer_solution, nearest_integer_solution};
use linesum::lines::COMPATIBILITY_TOLERANCE;
use linesum::projection::{self, ProjectionResult};
use linesum::rational::{self, q, Q};
use linesum::stability::{binary_radius, stability_bounds};
use linesum::torus::torus_project;
use linesum::{compute_line_sums, DirectionSet, Grid, LineSumTable};

#[derive(Parser)]
#[command(
    name = "linesum",
    version,
    about = "Line-sum reconstruction and stability bounds"
)]
struct Cli {
    /// Input file; stdin when omitted.
    #[arg(long, short, global = true)]
    input: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Closed form for rows and columns, exact rational projection otherwise.
    Exact,
    /// Conjugate gradients in floating point.
    Numeric,
}

#[derive(Subcommand)]
enum Command {
    /// Line sums of a grid: `{"grid": rows, "directions": [[a,b],...]}`.
    Sums,
    /// Minimum-norm real solution of an instance.
    Project {
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        /// Compatibility tolerance for the numeric method.
        #[arg(long, default_value_t = COMPATIBILITY_TOLERANCE)]
        tolerance: f64,
    },
    /// Bounds on how far binary solutions are from the rounded `f0`.
    Stability,
    /// All binary solutions, one JSON grid per line.
    Enumerate {
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Integer solution near `f0` (or near `--model`) with its distance bound.
    Intsolve {
        /// Grid file used as the real target instead of `f0`.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Only build some integer solution, without the distance guarantee.
        #[arg(long)]
        construct: bool,
    },
    /// Shortest solution on the square torus.
    TorusProject,
    /// Shortest solution for a union of rectangles in `[0,m] x [0,n]`.
    ContinuousProject,
    /// The 6x5 worked example with row sums 5,4,3,2,1.
    #[command(alias = "paper-example")]
    WorkedExample,
    /// Random binary grid with its line sums; the same seed gives the same output.
    Generate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Direction `a,b`, repeatable; rows and columns when omitted.
        #[arg(long = "direction", value_parser = parse_pair)]
        directions: Vec<(i64, i64)>,
        /// Probability that a cell is 1.
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_pair(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected a,b, got {s:?}"))?;
    let num = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

enum Failure {
    /// Exit 1: the input is well-formed but has no answer.
    Domain(linesum::Error),
    /// Exit 2: unreadable input or unwritable output.
    Io(String),
}

impl From<linesum::Error> for Failure {
    fn from(e: linesum::Error) -> Self {
        match e {
            linesum::Error::Parse(msg) => Failure::Io(msg),
            other => Failure::Domain(other),
        }
    }
}

type CmdResult<T> = std::result::Result<T, Failure>;

fn read_json(path: Option<&PathBuf>) -> CmdResult<Value> {
    let text = match path {
        Some(p) => {
            fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?
        }
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| Failure::Io(format!("invalid JSON: {e}")))
}

/// Indented JSON with arrays of scalars (grid rows) kept on one line.
fn pretty(v: &Value) -> String {
    fn render(v: &Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent + 1);
        match v {
            Value::Array(items) if items.iter().any(|x| x.is_array() || x.is_object()) => {
                out.push_str("[\n");
                for (k, item) in items.iter().enumerate() {
                    out.push_str(&pad);
                    render(item, indent + 1, out);
                    out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
                }
                out.push_str(&"  ".repeat(indent));
                out.push(']');
            }
            Value::Object(map) if !map.is_empty() => {
                out.push_str("{\n");
                for (k, (key, item)) in map.iter().enumerate() {
                    out.push_str(&pad);
                    out.push_str(&Value::String(key.clone()).to_string());
                    out.push_str(": ");
                    render(item, indent + 1, out);
                    out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
                }
                out.push_str(&"  ".repeat(indent));
                out.push('}');
            }
            scalar_or_flat => out.push_str(&scalar_or_flat.to_string()),
        }
    }
    let mut s = String::new();
    render(v, 0, &mut s);
    s.push('\n');
    s
}

fn csv_unsupported(cmd: &str) -> Failure {
    Failure::Io(format!("--format csv is not available for {cmd}"))
}

fn exact_f0(inst: &Instance) -> linesum::Result<ProjectionResult<Q>> {
    if inst.set.is_simple() {
        projection::project_simple_table(&inst.table)
    } else {
        projection::project_exact(&inst.table, &inst.set, inst.m, inst.n)
    }
}

fn cmd_sums(input: &Value, format: Format) -> CmdResult<String> {
    let g = instance::parse_grid(input)?;
    let set = match input.get("directions") {
        Some(dirs) => {
            let pairs: Vec<(i64, i64)> = serde_json::from_value(dirs.clone())
                .map_err(|e| Failure::Io(format!("directions: {e}")))?;
            DirectionSet::from_pairs(&pairs)?
        }
        None => DirectionSet::simple(),
    };
    set.validate(g.m(), g.n())?;
    let table = compute_line_sums(&g, &set);
    Ok(match format {
        Format::Json => pretty(&instance::table_to_json(&table)),
        Format::Csv => {
            let mut out = String::from("a,b,t,sum\n");
            for ds in table.directions() {
                for (t, v) in &ds.sums {
                    let d = ds.direction;
                    out.push_str(&format!(
                        "{},{},{t},{}\n",
                        d.a(),
                        d.b(),
                        rational::format_q(v)
                    ));
                }
            }
            out
        }
    })
}

fn cmd_project(input: &Value, format: Format, method: Method, tolerance: f64) -> CmdResult<String> {
    let inst = instance::parse_instance(input)?;
    match method {
        Method::Exact => {
            let res = exact_f0(&inst)?;
            Ok(match format {
                Format::Json => pretty(&json!({
                    "method": res.method,
                    "f0": instance::grid_to_json(&res.f0),
                    "norm_sq": q_value(&res.norm_sq),
                    "residual": res.residual,
                })),
                Format::Csv => instance::grid_to_csv(&res.f0, rational::format_q),
            })
        }
        Method::Numeric => {
            let table = inst.table.to_f64();
            let res = projection::project_general(&table, &inst.set, inst.m, inst.n, tolerance)?;
            Ok(match format {
                Format::Json => pretty(&json!({
                    "method": res.method,
                    "f0": instance::grid_f64_to_json(&res.f0),
                    "norm_sq": res.norm_sq,
                    "residual": res.residual,
                })),
                Format::Csv => instance::grid_to_csv(&res.f0, |v| format!("{v:?}")),
            })
        }
    }
}

fn cmd_stability(input: &Value, format: Format) -> CmdResult<String> {
    if format == Format::Csv {
        return Err(csv_unsupported("stability"));
    }
    let inst = instance::parse_instance(input)?;
    let res = exact_f0(&inst)?;
    let total = inst.table.total();
    let radius = binary_radius(&res.norm_sq, total)?;
    let report = stability_bounds(&res.f0, total)?;
    let out = json!({
        "D": q_value(total),
        "norm_sq_f0": q_value(&report.norm_sq_f0),
        "E": q_value(&report.e),
        "slack": q_value(&report.slack),
        "s": report.s,
        "t": report.t,
        "ties": report.tie_positions.len(),
        "rounded": instance::grid_i64_to_json(&report.rounded),
        "radicand": q_value(&radius.radicand),
        "radius": radius.radius,
    });
    Ok(pretty(&out))
}

fn cmd_enumerate(input: &Value, format: Format, cap: usize) -> CmdResult<String> {
    if format == Format::Csv {
        return Err(csv_unsupported("enumerate"));
    }
    let inst = instance::parse_instance(input)?;
    let table = inst.table.to_integer()?;
    let found = enumerate_binary_solutions(&table, &inst.set, inst.m, inst.n, cap)?;
    let mut out = String::new();
    for g in &found.solutions {
        out.push_str(&instance::grid_i64_to_json(g).to_string());
        out.push('\n');
    }
    Ok(out)
}

fn cmd_intsolve(
    input: &Value,
    format: Format,
    model: Option<&PathBuf>,
    construct: bool,
) -> CmdResult<String> {
    let inst = instance::parse_instance(input)?;
    let table: LineSumTable<i64> = inst.table.to_integer()?;
    if construct {
        let f = construct_integer_solution(&table, &inst.set, inst.m, inst.n)?;
        return Ok(match format {
            Format::Json => pretty(&json!({ "grid": instance::grid_i64_to_json(&f) })),
            Format::Csv => instance::grid_to_csv(&f, i64::to_string),
        });
    }
    let h: Grid<Q> = match model {
        Some(path) => instance::parse_grid(&read_json(Some(path))?)?,
        None => exact_f0(&inst)?.f0,
    };
    let sol = nearest_integer_solution(&h, &table, &inst.set, inst.m, inst.n)?;
    Ok(match format {
        Format::Json => pretty(&json!({
            "grid": instance::grid_i64_to_json(&sol.f),
            "distance_sq": q_value(&sol.distance_sq),
            "distance": sol.distance,
            "bound_sq": q_value(&sol.bound_sq),
            "bound": sol.bound,
            "within_bound": sol.within_bound(),
            "method": sol.method,
        })),
        Format::Csv => instance::grid_to_csv(&sol.f, i64::to_string),
    })
}

fn cmd_torus_project(input: &Value, format: Format) -> CmdResult<String> {
    let inst = instance::parse_torus_instance(input)?;
    let f0 = torus_project(&inst)?;
    Ok(match format {
        Format::Json => pretty(&json!({
            "f0": instance::grid_to_json(&f0),
            "norm_sq": q_value(&f0.norm_sq()),
        })),
        Format::Csv => instance::grid_to_csv(&f0, rational::format_q),
    })
}

fn cmd_continuous_project(input: &Value, format: Format) -> CmdResult<String> {
    if format == Format::Csv {
        return Err(csv_unsupported("continuous-project"));
    }
    let a = instance::parse_rect_union(input)?;
    let p = profiles(&a);
    let f0 = continuous_project(&a);
    Ok(pretty(&json!({
        "measure": q_value(&p.measure),
        "col_profile": instance::profile_to_json(&f0.col_profile),
        "row_profile": instance::profile_to_json(&f0.row_profile),
        "constant": q_value(&f0.constant),
        "norm_sq": q_value(&f0.norm_sq()),
    })))
}

fn cmd_worked_example(format: Format) -> CmdResult<String> {
    let rows: Vec<Q> = [5, 4, 3, 2, 1].into_iter().map(q).collect();
    let cols: Vec<Q> = [4, 4, 3, 2, 1, 1].into_iter().map(q).collect();
    let res = projection::project_simple(&rows, &cols)?;
    let scaled = res.f0.map(|v| v * q(30)).to_integer()?;
    if format == Format::Csv {
        return Ok(instance::grid_to_csv(&scaled, i64::to_string));
    }
    let total = q(15);
    let report = stability_bounds(&res.f0, &total)?;
    let radius = binary_radius(&res.norm_sq, &total)?;
    Ok(pretty(&json!({
        "m": 6,
        "n": 5,
        "D": q_value(&total),
        "f0_times_30": instance::grid_i64_to_json(&scaled),
        "norm_sq_f0": q_value(&res.norm_sq),
        "F": instance::grid_i64_to_json(&report.rounded),
        "E": q_value(&report.e),
        "slack": q_value(&report.slack),
        "s": report.s,
        "t": report.t,
        "radicand": q_value(&radius.radicand),
    })))
}

fn cmd_generate(
    format: Format,
    (m, n): (usize, usize),
    directions: &[(i64, i64)],
    density: f64,
    seed: u64,
) -> CmdResult<String> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Failure::Io(format!(
            "density must lie in [0, 1], got {density}"
        )));
    }
    let set = if directions.is_empty() {
        DirectionSet::simple()
    } else {
        DirectionSet::from_pairs(directions)?
    };
    set.validate(m, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Grid::from_fn(m, n, |_, _| i64::from(rng.gen_bool(density)));
    if format == Format::Csv {
        return Ok(instance::grid_to_csv(&g, i64::to_string));
    }
    let mut out = instance::table_to_json(&compute_line_sums(&g.to_rational(), &set));
    out["grid"] = instance::grid_i64_to_json(&g);
    Ok(pretty(&out))
}

fn run(cli: &Cli) -> CmdResult<String> {
    let input = || read_json(cli.input.as_ref());
    match &cli.command {
        Command::Sums => cmd_sums(&input()?, cli.format),
        Command::Project { method, tolerance } => {
            cmd_project(&input()?, cli.format, *method, *tolerance)
        }
        Command::Stability => cmd_stability(&input()?, cli.format),
        Command::Enumerate { cap } => cmd_enumerate(&input()?, cli.format, *cap),
        Command::Intsolve { model, construct } => {
            cmd_intsolve(&input()?, cli.format, model.as_ref(), *construct)
        }
        Command::TorusProject => cmd_torus_project(&input()?, cli.format),
        Command::ContinuousProject => cmd_continuous_project(&input()?, cli.format),
        Command::WorkedExample => cmd_worked_example(cli.format),
        Command::Generate {
            m,
            n,
            directions,
            density,
            seed,
        } => cmd_generate(cli.format, (*m, *n), directions, *density, *seed),
    }
}

fn write_output(path: Option<&PathBuf>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => match write_output(cli.output.as_ref(), &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!(
                    "{}",
                    json!({ "error": "io_error", "detail": e.to_string() })
                );
                ExitCode::from(2)
            }
        },
        Err(Failure::Domain(e)) => {
            println!("{}", json!({ "error": e.code(), "detail": e.to_string() }));
            ExitCode::from(1)
        }
        Err(Failure::Io(detail)) => {
            eprintln!("{}", json!({ "error": "parse_error", "detail": detail }));
            ExitCode::from(2)
        }
    }
}
