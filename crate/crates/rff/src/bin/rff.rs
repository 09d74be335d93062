//! Thin command-line front end over the library: solve one instance, run a
//! benchmark batch, transform datasets, or generate them.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use rff::bench::{
    add_one_variants, canonical_puzzles, run_batch, save_puzzles, AdapterKind, Method, RunSpec,
};
use rff::core::{BackwardMode, EngineConfig, Outcome};
use rff::engines::{run_rff_g, run_rff_t};
use rff::game24::{rat, Game24Oracle, Game24State, Game24Target, NumberSet};
use rff::llm::LlmConfig;
use rff::mathdag::{
    generate_problem, load_problems, save_problems, DagOracle, FactSet, MathRecord, MathTarget,
};

#[derive(Parser)]
#[command(
    name = "rff",
    about = "Target-guided bidirectional search over puzzle and math domains"
)]
struct Cli {
    /// TOML config file with [engine] and [llm] tables; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one puzzle or one math problem; exit 0 only when solved.
    Solve(SolveArgs),
    /// Run a dataset through one or more methods and aggregate results.
    Bench(BenchArgs),
    /// Write the redundant five-number variant of a puzzle dataset.
    Variants(VariantArgs),
    /// Generate datasets.
    #[command(subcommand)]
    Gen(GenWhat),
}

#[derive(Args, Clone)]
struct EngineArgs {
    /// Maximum search depth L.
    #[arg(long)]
    max_steps: Option<usize>,
    /// Attempts allowed per depth before backtracking shallower (width n).
    #[arg(long)]
    width: Option<usize>,
    /// Backward strategy: pair or single.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Clone)]
struct LlmArgs {
    /// Chat endpoint root, e.g. http://localhost:8000/v1.
    #[arg(long)]
    base_url: Option<String>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    temperature: Option<f64>,
    /// Environment variable holding the API key.
    #[arg(long)]
    api_key_env: Option<String>,
}

#[derive(Args)]
struct SolveArgs {
    /// Puzzle numbers, e.g. "1 2 12 12".
    puzzle: Option<String>,
    /// rff-t, rff-g, cot, or forward-tree.
    #[arg(long, default_value = "rff-t")]
    method: String,
    /// oracle or llm.
    #[arg(long, default_value = "oracle")]
    adapter: String,
    /// Math problem file (JSONL) to pick from.
    #[arg(long)]
    problems: Option<PathBuf>,
    /// 1-based record index into --problems.
    #[arg(long, default_value_t = 1)]
    index: usize,
    /// Generate a math problem on the fly with this seed.
    #[arg(long)]
    gen_seed: Option<u64>,
    #[arg(long, default_value_t = 4)]
    gen_depth: usize,
    #[arg(long, default_value_t = 3)]
    gen_width: usize,
    /// Beam width for forward-tree.
    #[arg(long, default_value_t = 5)]
    beam: usize,
    /// Write the full trace to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[command(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    llm: LlmArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Dataset file: puzzle lines or math JSONL.
    #[arg(long)]
    dataset: PathBuf,
    /// 1-based inclusive line range, e.g. 901:1000.
    #[arg(long)]
    range: Option<String>,
    /// Comma-separated methods, e.g. rff-t,cot,forward-tree.
    #[arg(long, default_value = "rff-t")]
    methods: String,
    #[arg(long, default_value = "oracle")]
    adapter: String,
    /// Directory for traces, results.csv, and summary.txt.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    #[arg(long, default_value_t = 4)]
    jobs: usize,
    #[arg(long, default_value_t = 5)]
    beam: usize,
    #[command(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    llm: LlmArgs,
}

#[derive(Args)]
struct VariantArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum GenWhat {
    /// The canonical puzzle corpus: every solvable four-card combination,
    /// easiest first.
    Puzzles {
        #[arg(long)]
        out: PathBuf,
    },
    /// Synthetic math problems with known structure and answers.
    Dag {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Goal chains cycle through depths 1..=max_depth.
        #[arg(long, default_value_t = 6)]
        max_depth: usize,
        #[arg(long, default_value_t = 3)]
        width: usize,
    },
}

#[derive(Default, Deserialize)]
struct FileConfig {
    engine: Option<EngineConfig>,
    llm: Option<LlmConfig>,
}

const EXIT_UNSOLVED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_IO: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file_config = match load_file_config(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args, &file_config),
        Command::Bench(args) => cmd_bench(args, &file_config),
        Command::Variants(args) => cmd_variants(args),
        Command::Gen(what) => cmd_gen(what),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Config(e)) => {
            eprintln!("config error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(CliError::Io(e)) => {
            eprintln!("io error: {e}");
            ExitCode::from(EXIT_IO)
        }
    }
}

enum CliError {
    Config(String),
    Io(String),
}

fn load_file_config(path: Option<&std::path::Path>) -> Result<FileConfig, String> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| e.to_string())
}

fn engine_config(args: &EngineArgs, file: &FileConfig) -> Result<EngineConfig, CliError> {
    let mut cfg = file.engine.clone().unwrap_or_default();
    if let Some(v) = args.max_steps {
        cfg.max_steps = v;
    }
    if let Some(v) = args.width {
        cfg.width = v;
    }
    if let Some(mode) = &args.mode {
        cfg.backward_mode = match mode.as_str() {
            "pair" => BackwardMode::Pair,
            "single" => BackwardMode::Single,
            other => return Err(CliError::Config(format!("unknown mode {other:?}"))),
        };
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    cfg.validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(cfg)
}

fn llm_config(args: &LlmArgs, file: &FileConfig, for_math: bool) -> Result<LlmConfig, CliError> {
    let mut cfg = match (&file.llm, &args.base_url) {
        (Some(existing), _) => existing.clone(),
        (None, Some(url)) => {
            if for_math {
                LlmConfig::math(url.clone(), "unset")
            } else {
                LlmConfig::game24(url.clone(), "unset")
            }
        }
        (None, None) => {
            return Err(CliError::Config(
                "llm adapter needs --base-url or a [llm] config table".to_string(),
            ))
        }
    };
    if let Some(url) = &args.base_url {
        cfg.base_url = url.clone();
    }
    if let Some(model) = &args.model {
        cfg.model = model.clone();
    }
    if let Some(t) = args.temperature {
        cfg.temperature = t;
    }
    if let Some(env) = &args.api_key_env {
        cfg.api_key_env = env.clone();
    }
    Ok(cfg)
}

fn parse_adapter(text: &str) -> Result<AdapterKind, CliError> {
    match text {
        "oracle" => Ok(AdapterKind::Oracle),
        "llm" => Ok(AdapterKind::Llm),
        other => Err(CliError::Config(format!("unknown adapter {other:?}"))),
    }
}

fn cmd_solve(args: SolveArgs, file: &FileConfig) -> Result<ExitCode, CliError> {
    let engine = engine_config(&args.engine, file)?;
    let method = Method::parse(&args.method)
        .ok_or_else(|| CliError::Config(format!("unknown method {:?}", args.method)))?;
    let adapter = parse_adapter(&args.adapter)?;

    // one-instance runs reuse the batch machinery by writing a one-line
    // dataset next to the requested trace location would be clumsy; run
    // directly instead
    let trace = match method {
        Method::RffG => {
            let problem = if let Some(seed) = args.gen_seed {
                generate_problem(seed, args.gen_depth, args.gen_width)
            } else if let Some(path) = &args.problems {
                let records =
                    load_problems(path).map_err(CliError::Io)?;
                match records.into_iter().nth(args.index.saturating_sub(1)) {
                    Some(MathRecord::Dag(p)) => p,
                    Some(MathRecord::Text { .. }) => {
                        return Err(CliError::Config(
                            "text records need the llm adapter; use bench".to_string(),
                        ))
                    }
                    None => {
                        return Err(CliError::Config(format!(
                            "no record at index {}",
                            args.index
                        )))
                    }
                }
            } else {
                return Err(CliError::Config(
                    "rff-g needs --problems or --gen-seed".to_string(),
                ));
            };
            if adapter != AdapterKind::Oracle {
                return Err(CliError::Config(
                    "llm solves go through bench with a dataset".to_string(),
                ));
            }
            println!("problem: {}", problem.surface_text.as_deref().unwrap_or("(structured)"));
            let oracle = DagOracle::new(problem.clone());
            let goal = MathTarget::goal_of(&problem);
            run_rff_g(&oracle, FactSet::empty(), goal, &engine)
                .map_err(|e| CliError::Config(e.to_string()))?
        }
        _ => {
            let puzzle = args
                .puzzle
                .as_deref()
                .ok_or_else(|| CliError::Config("no puzzle given".to_string()))?;
            let set = NumberSet::parse(puzzle)
                .ok_or_else(|| CliError::Config(format!("not a puzzle: {puzzle:?}")))?;
            if adapter != AdapterKind::Oracle {
                // one-off llm solve: reuse the bench path via a temp spec
                let _ = llm_config(&args.llm, file, false)?;
                return Err(CliError::Config(
                    "llm solves go through bench with a dataset".to_string(),
                ));
            }
            let oracle = Game24Oracle::standard(engine.width);
            let state = Game24State::initial(set);
            let goal = Game24Target::root(rat(24));
            match method {
                Method::RffT => run_rff_t(&oracle, state, goal, &engine),
                Method::Cot => rff::baselines::run_cot(&oracle, state, goal, &engine),
                Method::ForwardTree => {
                    rff::baselines::run_forward_tree(&oracle, state, goal, &engine, args.beam)
                }
                Method::RffG => unreachable!("handled above"),
            }
            .map_err(|e| CliError::Config(e.to_string()))?
        }
    };

    if let Some(path) = &args.trace {
        std::fs::write(path, trace.serialize())
            .map_err(|e| CliError::Io(format!("write {}: {e}", path.display())))?;
    }
    println!("visited states: {}", trace.visited_states);
    match &trace.outcome {
        Outcome::Solved(answer) => {
            println!("solved: {answer}");
            Ok(ExitCode::SUCCESS)
        }
        Outcome::Unsolved(reason) => {
            println!("unsolved: {reason}");
            Ok(ExitCode::from(EXIT_UNSOLVED))
        }
        Outcome::StepLimit => {
            println!("step limit reached");
            Ok(ExitCode::from(EXIT_UNSOLVED))
        }
    }
}

fn cmd_bench(args: BenchArgs, file: &FileConfig) -> Result<ExitCode, CliError> {
    let engine = engine_config(&args.engine, file)?;
    let adapter = parse_adapter(&args.adapter)?;
    let range = match &args.range {
        None => None,
        Some(text) => {
            let (lo, hi) = text
                .split_once(':')
                .ok_or_else(|| CliError::Config("range must be lo:hi".to_string()))?;
            let lo: usize = lo.parse().map_err(|_| CliError::Config("bad range".into()))?;
            let hi: usize = hi.parse().map_err(|_| CliError::Config("bad range".into()))?;
            Some((lo, hi))
        }
    };
    let llm = match adapter {
        AdapterKind::Llm => Some(llm_config(&args.llm, file, true)?),
        AdapterKind::Oracle => None,
    };
    for (i, method_text) in args.methods.split(',').enumerate() {
        let method = Method::parse(method_text.trim()).ok_or_else(|| {
            CliError::Config(format!("unknown method {method_text:?}"))
        })?;
        let out_dir = args.out.as_ref().map(|base| {
            if args.methods.contains(',') {
                base.join(method_text.trim())
            } else {
                base.clone()
            }
        });
        let spec = RunSpec {
            method,
            adapter,
            dataset: args.dataset.clone(),
            range,
            engine: engine.clone(),
            llm: llm.clone(),
            beam: args.beam,
            out_dir,
            repeats: args.repeats,
            jobs: args.jobs,
        };
        let batch = run_batch(&spec).map_err(|e| CliError::Io(e.to_string()))?;
        if i > 0 {
            println!();
        }
        print!("{}", batch.table.render());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_variants(args: VariantArgs) -> Result<ExitCode, CliError> {
    let report = add_one_variants(&args.dataset, &args.out).map_err(|e| CliError::Io(e.to_string()))?;
    println!(
        "wrote {} variants to {}",
        report.total,
        args.out.display()
    );
    if report.oversized_inputs > 0 {
        eprintln!(
            "warning: {} inputs already had more than four numbers",
            report.oversized_inputs
        );
    }
    if report.violations.is_empty() {
        println!("solvability preserved for every solvable input");
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("solvability violations at indices {:?}", report.violations);
        Ok(ExitCode::from(EXIT_UNSOLVED))
    }
}

fn cmd_gen(what: GenWhat) -> Result<ExitCode, CliError> {
    match what {
        GenWhat::Puzzles { out } => {
            let puzzles = canonical_puzzles();
            save_puzzles(&out, &puzzles).map_err(|e| CliError::Io(e.to_string()))?;
            println!("wrote {} puzzles to {}", puzzles.len(), out.display());
        }
        GenWhat::Dag {
            out,
            seed,
            count,
            max_depth,
            width,
        } => {
            let problems: Vec<_> = (0..count)
                .map(|i| {
                    let depth = 1 + (i % max_depth.max(1));
                    generate_problem(seed.wrapping_add(i as u64), depth, width)
                })
                .collect();
            save_problems(&out, &problems).map_err(CliError::Io)?;
            println!("wrote {} problems to {}", problems.len(), out.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}
