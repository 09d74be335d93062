//! Batch execution: fan runs out to a bounded worker pool, collect
//! per-run records and trace files, aggregate per method.

use std::collections::VecDeque;
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::baselines::{run_cot, run_forward_tree};
use crate::core::{EngineConfig, Outcome, SearchTrace};
use crate::engines::{run_rff_g, run_rff_t};
use crate::game24::{rat, Game24Oracle, Game24State, Game24Target, NumberSet};
use crate::llm::{ChatClient, Game24Llm, LlmConfig, MathLlm, TemplateSet};
use crate::mathdag::{DagOracle, FactSet, MathRecord, MathTarget};

use super::dataset::{load_workload, select_range, Workload};
use super::report::{aggregate, ResultTable};
use super::BenchError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    RffT,
    RffG,
    Cot,
    ForwardTree,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::RffT => "rff-t",
            Method::RffG => "rff-g",
            Method::Cot => "cot",
            Method::ForwardTree => "forward-tree",
        }
    }

    pub fn parse(text: &str) -> Option<Method> {
        match text {
            "rff-t" => Some(Method::RffT),
            "rff-g" => Some(Method::RffG),
            "cot" => Some(Method::Cot),
            "forward-tree" => Some(Method::ForwardTree),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdapterKind {
    Oracle,
    Llm,
}

/// Everything one batch needs. The oracle adapter forbids an LLM config,
/// the LLM adapter requires one.
#[derive(Clone, Debug)]
pub struct RunSpec {
    pub method: Method,
    pub adapter: AdapterKind,
    pub dataset: PathBuf,
    /// 1-based inclusive line range.
    pub range: Option<(usize, usize)>,
    pub engine: EngineConfig,
    pub llm: Option<LlmConfig>,
    /// Beam width for the forward-tree baseline.
    pub beam: usize,
    pub out_dir: Option<PathBuf>,
    /// Runs per item; deterministic adapters want 1.
    pub repeats: usize,
    /// Worker threads.
    pub jobs: usize,
}

impl RunSpec {
    pub fn oracle(method: Method, dataset: PathBuf, engine: EngineConfig) -> RunSpec {
        RunSpec {
            method,
            adapter: AdapterKind::Oracle,
            dataset,
            range: None,
            engine,
            llm: None,
            beam: 5,
            out_dir: None,
            repeats: 1,
            jobs: 1,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        match (self.adapter, &self.llm) {
            (AdapterKind::Llm, None) => {
                return Err(BenchError::Spec(
                    "llm adapter requires an llm config".to_string(),
                ))
            }
            (AdapterKind::Oracle, Some(_)) => {
                return Err(BenchError::Spec(
                    "oracle adapter forbids an llm config".to_string(),
                ))
            }
            _ => {}
        }
        if self.repeats == 0 {
            return Err(BenchError::Spec("repeats must be at least 1".to_string()));
        }
        self.engine
            .validate()
            .map_err(|e| BenchError::Spec(e.to_string()))
    }
}

/// One row of the per-run CSV.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub run_id: usize,
    pub index: usize,
    pub repeat: usize,
    pub method: String,
    pub outcome: String,
    pub visited: u64,
    pub duration_ms: u128,
    pub answer: String,
    /// Solved with a verified or truth-matching answer; aggregate accuracy
    /// is the mean of this column.
    pub correct: bool,
}

pub struct BatchResult {
    pub records: Vec<RunRecord>,
    pub table: ResultTable,
}

enum WorkItem {
    Puzzle(NumberSet),
    Math(MathRecord),
}

struct Task {
    run_id: usize,
    index: usize,
    repeat: usize,
    seed: u64,
    item: WorkItem,
}

/// Runs every item in the spec's dataset slice, `repeats` times each, over
/// `jobs` workers. Individual failures become unsolved records; they never
/// abort the batch. Records come back ordered by run id, so concurrent and
/// sequential batches aggregate identically for deterministic adapters.
pub fn run_batch(spec: &RunSpec) -> Result<BatchResult, BenchError> {
    spec.validate()?;
    let workload = select_range(load_workload(&spec.dataset)?, spec.range);
    let mut tasks: VecDeque<Task> = VecDeque::new();
    let mut run_id = 0;
    match workload {
        Workload::Puzzles(puzzles) => {
            for (index, set) in puzzles {
                for repeat in 0..spec.repeats {
                    tasks.push_back(Task {
                        run_id,
                        index,
                        repeat,
                        seed: derive_seed(spec.engine.seed, index, repeat),
                        item: WorkItem::Puzzle(set.clone()),
                    });
                    run_id += 1;
                }
            }
        }
        Workload::Math(records) => {
            for (index, record) in records {
                for repeat in 0..spec.repeats {
                    tasks.push_back(Task {
                        run_id,
                        index,
                        repeat,
                        seed: derive_seed(spec.engine.seed, index, repeat),
                        item: WorkItem::Math(record.clone()),
                    });
                    run_id += 1;
                }
            }
        }
    }

    let queue = Mutex::new(tasks);
    let results: Mutex<Vec<(RunRecord, SearchTrace)>> = Mutex::new(Vec::new());
    let jobs = spec.jobs.max(1);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let task = queue.lock().expect("queue lock").pop_front();
                let Some(task) = task else { break };
                let outcome = run_task(spec, &task);
                results.lock().expect("results lock").push(outcome);
            });
        }
    });
    let mut finished = results.into_inner().expect("results lock");
    finished.sort_by_key(|(r, _)| r.run_id);

    if let Some(out_dir) = &spec.out_dir {
        std::fs::create_dir_all(out_dir)
            .map_err(|e| BenchError::Io(format!("create {}: {e}", out_dir.display())))?;
        for (record, trace) in &finished {
            let name = format!(
                "run_{:04}_{}_{}.trace",
                record.index,
                record.method.replace('/', "-"),
                derive_seed(spec.engine.seed, record.index, record.repeat)
            );
            std::fs::write(out_dir.join(&name), trace.serialize())
                .map_err(|e| BenchError::Io(format!("write trace {name}: {e}")))?;
        }
    }

    let records: Vec<RunRecord> = finished.into_iter().map(|(r, _)| r).collect();
    let table = aggregate(&records, &spec.engine);
    if let Some(out_dir) = &spec.out_dir {
        super::report::write_csv(&out_dir.join("results.csv"), &records)?;
        std::fs::write(out_dir.join("summary.txt"), table.render())
            .map_err(|e| BenchError::Io(format!("write summary: {e}")))?;
    }
    Ok(BatchResult { records, table })
}

fn derive_seed(base: u64, index: usize, repeat: usize) -> u64 {
    base ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (repeat as u64).wrapping_mul(0xD1B5_4A32_D192_ED03)
}

fn run_task(spec: &RunSpec, task: &Task) -> (RunRecord, SearchTrace) {
    let started = Instant::now();
    let engine = spec.engine.clone().with_seed(task.seed);
    let method_tag = match spec.method {
        Method::ForwardTree => format!("forward-tree(b={})", spec.beam),
        other => other.tag().to_string(),
    };
    let result = execute(spec, task, &engine);
    let duration_ms = started.elapsed().as_millis();
    let (trace, correct) = match result {
        Ok(pair) => pair,
        Err(reason) => (
            // a failed run is recorded, never fatal to the batch
            SearchTrace {
                header: format!("domain=unknown engine={} {}", method_tag, engine.echo()),
                events: Vec::new(),
                visited_states: 0,
                outcome: Outcome::Unsolved(format!("adapter failure: {reason}")),
                },
            false,
        ),
    };
    let (outcome, answer) = match &trace.outcome {
        Outcome::Solved(answer) => ("solved".to_string(), answer.clone()),
        Outcome::Unsolved(reason) => (format!("unsolved: {reason}"), String::new()),
        Outcome::StepLimit => ("steplimit".to_string(), String::new()),
    };
    (
        RunRecord {
            run_id: task.run_id,
            index: task.index,
            repeat: task.repeat,
            method: method_tag,
            outcome,
            visited: trace.visited_states,
            duration_ms,
            answer,
            correct,
        },
        trace,
    )
}

/// Builds the adapter for one task and runs the requested method; returns
/// the trace and whether the outcome counts as a correct solve.
fn execute(
    spec: &RunSpec,
    task: &Task,
    engine: &EngineConfig,
) -> Result<(SearchTrace, bool), String> {
    match (&task.item, spec.adapter) {
        (WorkItem::Puzzle(set), AdapterKind::Oracle) => {
            let oracle = Game24Oracle::standard(engine.width);
            let state = Game24State::initial(set.clone());
            let goal = Game24Target::root(rat(24));
            let trace = match spec.method {
                Method::RffT => run_rff_t(&oracle, state, goal, engine),
                Method::Cot => run_cot(&oracle, state, goal, engine),
                Method::ForwardTree => run_forward_tree(&oracle, state, goal, engine, spec.beam),
                Method::RffG => {
                    return Err("rff-g does not apply to puzzle datasets".to_string())
                }
            }
            .map_err(|e| e.to_string())?;
            let correct = trace.outcome.is_solved();
            Ok((trace, correct))
        }
        (WorkItem::Puzzle(set), AdapterKind::Llm) => {
            let mut cfg = spec.llm.clone().expect("validated");
            // the engine's per-call timeout governs adapter calls
            cfg.timeout = engine.per_call_timeout;
            let client = ChatClient::over_http(cfg).map_err(|e| e.to_string())?;
            let adapter = Game24Llm::new(client, TemplateSet::builtin(), rat(24));
            let state = Game24State::initial(set.clone());
            let goal = Game24Target::root(rat(24));
            let trace = match spec.method {
                Method::RffT => run_rff_t(&adapter, state, goal, engine),
                Method::Cot => run_cot(&adapter, state, goal, engine),
                Method::ForwardTree | Method::RffG => {
                    return Err(format!(
                        "{} is not wired for llm puzzle runs",
                        spec.method.tag()
                    ))
                }
            }
            .map_err(|e| e.to_string())?;
            let correct = trace.outcome.is_solved();
            Ok((trace, correct))
        }
        (WorkItem::Math(record), AdapterKind::Oracle) => {
            let MathRecord::Dag(problem) = record else {
                return Err("text-only math records need the llm adapter".to_string());
            };
            let truth = crate::game24::render_rat(&problem.ground_truth);
            let oracle = DagOracle::new(problem.clone());
            let goal = MathTarget::goal_of(problem);
            let trace = match spec.method {
                Method::RffG => run_rff_g(&oracle, FactSet::empty(), goal, engine),
                Method::Cot => run_cot(&oracle, FactSet::empty(), goal, engine),
                Method::ForwardTree => {
                    run_forward_tree(&oracle, FactSet::empty(), goal, engine, spec.beam)
                }
                Method::RffT => {
                    return Err("rff-t does not apply to math datasets".to_string())
                }
            }
            .map_err(|e| e.to_string())?;
            let correct = matches!(&trace.outcome, Outcome::Solved(a) if *a == truth);
            Ok((trace, correct))
        }
        (WorkItem::Math(record), AdapterKind::Llm) => {
            let mut cfg = spec.llm.clone().expect("validated");
            cfg.timeout = engine.per_call_timeout;
            let client = ChatClient::over_http(cfg).map_err(|e| e.to_string())?;
            let (question, truth, goal_name) = match record {
                MathRecord::Dag(problem) => (
                    problem
                        .surface_text
                        .clone()
                        .unwrap_or_else(|| "no problem text".to_string()),
                    Some(crate::game24::render_rat(&problem.ground_truth)),
                    problem.goal.clone(),
                ),
                MathRecord::Text { question, answer } => {
                    (question.clone(), Some(answer.clone()), "answer".to_string())
                }
            };
            let adapter = MathLlm::new(client, TemplateSet::builtin(), question);
            let goal = MathTarget {
                needed: goal_name,
                rationale: String::new(),
            };
            let trace = match spec.method {
                Method::RffG => run_rff_g(&adapter, FactSet::empty(), goal, engine),
                other => {
                    return Err(format!("{} is not wired for llm math runs", other.tag()))
                }
            }
            .map_err(|e| e.to_string())?;
            let correct = match (&trace.outcome, &truth) {
                (Outcome::Solved(answer), Some(t)) => answers_match(answer, t),
                (Outcome::Solved(_), None) => true,
                _ => false,
            };
            Ok((trace, correct))
        }
    }
}

/// Numeric comparison when both sides parse, string equality otherwise.
fn answers_match(a: &str, b: &str) -> bool {
    match (
        crate::llm::parse::parse_number(a),
        crate::llm::parse::parse_number(b),
    ) {
        (Some(x), Some(y)) => x == y,
        _ => a.trim() == b.trim(),
    }
}
