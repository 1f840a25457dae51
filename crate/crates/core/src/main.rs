use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use btd_core::approx::btd_approx;
use btd_core::elim::{validate_ranking, EdgeRanking};
use btd_core::exact::{exact_btd, ExactOptions, DEFAULT_EDGE_GUARD};
use btd_core::minrank::optimal_elimination_forest;
use btd_core::reduction::{
    compute_params_with, forest_to_tree, mhs_to_btd_with, BtdInstance, MhsInstance,
};
use btd_core::{EliminationForest, Error, Forest, TreeKind};

#[derive(Parser)]
#[command(
    name = "btd",
    version,
    about = "Edge rankings and bounded-width elimination trees of forests"
)]
struct Cli {
    /// Output format where a forest or elimination forest is emitted.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum-height elimination tree.
    Rank {
        input: PathBuf,
        #[command(flatten)]
        batch: Batch,
    },
    /// Elimination tree of width at most b.
    Btd {
        input: PathBuf,
        #[arg(long)]
        b: usize,
        #[arg(long, conflicts_with = "approx")]
        exact: bool,
        #[arg(long)]
        approx: bool,
        /// Include the main-loop iterations and sorting steps.
        #[arg(long)]
        trace: bool,
        /// Run the exact search past the edge guard.
        #[arg(long)]
        force: bool,
        #[arg(long, default_value_t = DEFAULT_EDGE_GUARD)]
        guard: usize,
        #[command(flatten)]
        batch: Batch,
    },
    /// Generate a tree or a hitting-set instance.
    Gen(GenArgs),
    /// Check a level assignment.
    Validate {
        forest: PathBuf,
        levels: PathBuf,
        #[arg(long)]
        b: Option<usize>,
    },
    /// Parallel contraction plan of a ranking, replayed.
    Schedule { tree: PathBuf, levels: PathBuf },
    /// Counts, degrees and component sizes.
    Stats {
        input: PathBuf,
        #[command(flatten)]
        batch: Batch,
    },
}

#[derive(Args)]
struct Batch {
    /// Treat the input as a directory and process every file in it.
    #[arg(long)]
    each: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Path,
    Star,
    Caterpillar,
    Random,
    Spider,
    MhsGadget,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Vertices (path, star, random).
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    spine: usize,
    /// Legs per spine vertex, or spider legs.
    #[arg(long, default_value_t = 2)]
    legs: usize,
    /// Spider leg length.
    #[arg(long, default_value_t = 2)]
    len: usize,
    /// Hitting-set instance as JSON.
    #[arg(long, required_if_eq("kind", "mhs-gadget"))]
    mhs: Option<PathBuf>,
    /// Join the components into a single tree.
    #[arg(long)]
    to_tree: bool,
    /// Fix the path exponent instead of solving for it (scaled instance).
    #[arg(long)]
    big_m: Option<u32>,
    /// Write `<out>.edges` and `<out>.json` for gadget instances.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// An error with the exit status it maps to.
struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Invariant(_) => 3,
            Error::InvalidRanking(_) | Error::Coverage { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

impl Failure {
    fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind, "message": self.message } })
    }
}

/// Command output: a document and the exit status to report with it.
struct Output {
    body: Body,
    code: u8,
}

enum Body {
    Json(Value),
    Raw(String),
}

impl Output {
    fn ok(v: Value) -> Self {
        Output {
            body: Body::Json(v),
            code: 0,
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| {
        Failure::from(Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        )))
    })
}

fn load_forest(path: &Path) -> Result<Forest, Failure> {
    Ok(Forest::parse_any(&read(path)?)?)
}

fn load_ranking(path: &Path, forest: &Forest) -> Result<EdgeRanking, Failure> {
    let v: Value = serde_json::from_str(&read(path)?).map_err(Error::from)?;
    Ok(EdgeRanking::from_json(&v, forest.edge_count())?)
}

fn emit_elim(ef: &EliminationForest, forest: &Forest, format: Format, extra: Value) -> Output {
    match format {
        Format::Dot => Output {
            body: Body::Raw(ef.to_dot(forest)),
            code: 0,
        },
        Format::Text => Output {
            body: Body::Raw(ef.to_text(forest)),
            code: 0,
        },
        Format::Json => {
            let mut v = ef.to_json(forest);
            if let (Value::Object(m), Value::Object(x)) = (&mut v, extra) {
                m.extend(x);
            }
            Output::ok(v)
        }
    }
}

fn rank(path: &Path, format: Format) -> Result<Output, Failure> {
    let forest = load_forest(path)?;
    let ef = optimal_elimination_forest(&forest);
    Ok(emit_elim(&ef, &forest, format, json!({})))
}

struct BtdFlags {
    b: usize,
    exact: bool,
    trace: bool,
    force: bool,
    guard: usize,
}

fn btd(path: &Path, flags: &BtdFlags, format: Format) -> Result<Output, Failure> {
    let forest = load_forest(path)?;
    if flags.exact {
        let opts = ExactOptions {
            edge_guard: flags.guard,
            force: flags.force,
        };
        let sol = exact_btd(&forest, flags.b, opts)?;
        return Ok(emit_elim(
            &sol.witness,
            &forest,
            format,
            json!({ "mode": "exact", "b": flags.b }),
        ));
    }
    let run = btd_approx(&forest, flags.b)?;
    let mut extra = json!({
        "mode": "approx",
        "b": flags.b,
        "minimum_height": run.minimum.height(),
        "bound": run.minimum.height() as usize + 2 * flags.b,
    });
    if flags.trace {
        extra["trace"] = json!({
            "stretched_height": run.stretched.height(),
            "initial_height": run.initial.height(),
            "switches": run.switches,
            "iterations": run.trace,
        });
    }
    if run.result.width() > flags.b {
        return Err(Error::Invariant(format!(
            "result width {} exceeds b = {}",
            run.result.width(),
            flags.b
        ))
        .into());
    }
    Ok(emit_elim(&run.result, &forest, format, extra))
}

fn stats(path: &Path) -> Result<Output, Failure> {
    let f = load_forest(path)?;
    let (comp, count) = f.component_of_vertices();
    let mut sizes = vec![0usize; count];
    for c in comp {
        sizes[c] += 1;
    }
    let degrees: Vec<usize> = (0..f.vertex_count()).map(|v| f.degree(v)).collect();
    let max_degree = degrees.iter().copied().max().unwrap_or(0);
    let mut histogram = vec![0usize; max_degree + 1];
    for d in degrees {
        histogram[d] += 1;
    }
    Ok(Output::ok(json!({
        "vertices": f.vertex_count(),
        "edges": f.edge_count(),
        "components": count,
        "component_sizes": sizes,
        "is_tree": f.is_tree(),
        "max_degree": max_degree,
        "degree_histogram": histogram,
    })))
}

fn validate(forest: &Path, levels: &Path, b: Option<usize>) -> Result<Output, Failure> {
    let forest = load_forest(forest)?;
    let ranking = load_ranking(levels, &forest)?;
    let report = validate_ranking(&forest, &ranking)?;
    let width = {
        let mut counts = std::collections::HashMap::new();
        for &l in ranking.levels() {
            *counts.entry(l).or_insert(0usize) += 1;
        }
        counts.values().copied().max().unwrap_or(0)
    };
    let bounded = b.map(|b| width <= b);
    let ok = report.is_ok() && bounded != Some(false);
    Ok(Output {
        body: Body::Json(json!({
            "valid": report.is_ok(),
            "violations": report.violations,
            "height": ranking.height(),
            "width": width,
            "b": b,
            "b_bounded": bounded,
        })),
        code: if ok { 0 } else { 1 },
    })
}

fn schedule(tree: &Path, levels: &Path, format: Format) -> Result<Output, Failure> {
    let forest = load_forest(tree)?;
    let ranking = load_ranking(levels, &forest)?;
    let ef = EliminationForest::build(&forest, &ranking)?;
    let plan = ef.to_merge_schedule();
    let report = plan.simulate(&forest)?;
    if format == Format::Text {
        return Ok(Output {
            body: Body::Raw(plan.to_text()),
            code: 0,
        });
    }
    Ok(Output::ok(
        json!({ "steps": plan.steps, "replay": report, "verdict": "ok" }),
    ))
}

fn gen(args: &GenArgs, format: Format) -> Result<Output, Failure> {
    let kind = match args.kind {
        Kind::Path => TreeKind::Path(args.n),
        Kind::Star => TreeKind::Star(args.n),
        Kind::Caterpillar => TreeKind::Caterpillar {
            spine: args.spine,
            legs: args.legs,
        },
        Kind::Random => TreeKind::Random {
            n: args.n,
            seed: args.seed,
        },
        Kind::Spider => TreeKind::Spider {
            legs: args.legs,
            len: args.len,
        },
        Kind::MhsGadget => return gen_gadget(args),
    };
    let f = Forest::generate(kind)?;
    Ok(match format {
        Format::Text => Output {
            body: Body::Raw(f.to_edge_list()),
            code: 0,
        },
        Format::Dot => Output {
            body: Body::Raw(f.to_dot()),
            code: 0,
        },
        Format::Json => Output::ok(f.to_json()),
    })
}

fn gen_gadget(args: &GenArgs) -> Result<Output, Failure> {
    let path = args.mhs.as_ref().expect("clap requires --mhs");
    let mhs = MhsInstance::from_json(&read(path)?)?;
    let params = compute_params_with(&mhs, args.big_m)?;
    let mut inst: BtdInstance = mhs_to_btd_with(&mhs, params)?;
    if args.to_tree {
        inst = forest_to_tree(&inst)?;
    }
    let mut sidecar = inst.sidecar();
    if let Some(out) = &args.out {
        let (forest, materialized) = match inst.materialize() {
            Ok(m) => (m.forest, true),
            Err(Error::InvalidSize(_)) => (inst.forest.clone(), false),
            Err(e) => return Err(e.into()),
        };
        sidecar["paths_materialized"] = json!(materialized);
        let edges = out.with_extension("edges");
        let side = out.with_extension("json");
        fs::write(&edges, forest.to_edge_list()).map_err(Error::from)?;
        fs::write(
            &side,
            serde_json::to_string_pretty(&sidecar).map_err(Error::from)?,
        )
        .map_err(Error::from)?;
        sidecar["files"] = json!([edges.display().to_string(), side.display().to_string()]);
    }
    Ok(Output::ok(sidecar))
}

/// Runs `f` on every file of `dir`, in parallel, keyed by file name.
fn each(
    dir: &Path,
    f: impl Fn(&Path) -> Result<Output, Failure> + Sync,
) -> Result<Output, Failure> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(Error::from)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    let results: Vec<(String, Value, u8)> = files
        .par_iter()
        .map(|p| {
            let name = p
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            match f(p) {
                Ok(Output {
                    body: Body::Json(v),
                    code,
                }) => (name, v, code),
                Ok(Output {
                    body: Body::Raw(s),
                    code,
                }) => (name, Value::String(s), code),
                Err(e) => (name, e.to_json(), e.code),
            }
        })
        .collect();
    let code = results.iter().map(|r| r.2).max().unwrap_or(0);
    let map: serde_json::Map<String, Value> = results.into_iter().map(|(n, v, _)| (n, v)).collect();
    Ok(Output {
        body: Body::Json(Value::Object(map)),
        code,
    })
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let fmt = cli.format;
    let json_fmt = fmt.unwrap_or(Format::Json);
    match cli.command {
        Command::Rank { input, batch } => {
            if batch.each {
                each(&input, |p| rank(p, Format::Json))
            } else {
                rank(&input, json_fmt)
            }
        }
        Command::Btd {
            input,
            b,
            exact,
            approx: _,
            trace,
            force,
            guard,
            batch,
        } => {
            let flags = BtdFlags {
                b,
                exact,
                trace,
                force,
                guard,
            };
            if batch.each {
                each(&input, |p| btd(p, &flags, Format::Json))
            } else {
                btd(&input, &flags, json_fmt)
            }
        }
        Command::Gen(args) => gen(&args, fmt.unwrap_or(Format::Text)),
        Command::Validate { forest, levels, b } => validate(&forest, &levels, b),
        Command::Schedule { tree, levels } => schedule(&tree, &levels, json_fmt),
        Command::Stats { input, batch } => {
            if batch.each {
                each(&input, stats)
            } else {
                stats(&input)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            e.exit()
        }
        Err(e) => {
            let f = Failure {
                code: 2,
                kind: "usage".into(),
                message: e.to_string().trim().to_string(),
            };
            eprintln!("{}", f.to_json());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(out) => {
            let text = match out.body {
                Body::Json(v) => serde_json::to_string_pretty(&v).expect("serialisable") + "\n",
                Body::Raw(s) => s,
            };
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.code)
        }
    }
}
