//! Acceptance suite: one test per criterion, each printing a PASS line
//! when it holds. Everything here runs offline against the deterministic
//! adapters, scripted endpoints, or recorded cassettes.
//!
//! Golden trace files and cassettes live under `tests/golden/` and
//! `tests/cassettes/`; set `RFF_REGEN_GOLDEN=1` to rewrite them after an
//! intentional format change.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use rff::baselines::{run_cot, run_forward_tree};
use rff::core::{
    BackwardMode, EngineConfig, EventDetail, EventKind, Outcome, SearchTrace,
};
use rff::engines::{run_rff_g, run_rff_t, set_backward_mode};
use rff::game24::{
    add_redundant_one, brute_force_solvable, eval_expression, rat, sample_multisets,
    Game24Oracle, Game24State, Game24Target, NumberSet,
};
use rff::llm::stub::{StubReply, StubServer};
use rff::llm::{
    Cassette, ChatClient, Game24Llm, LlmConfig, RecordingTransport, ReplayTransport,
    ScriptedTransport, TemplateSet,
};
use rff::mathdag::{generate_problem, DagOracle, FactSet, MathTarget};

/// The fixed evaluation sample: 500 distinct four-card multisets.
const SAMPLE_SEED: u64 = 24;
const SAMPLE_SIZE: usize = 500;

fn sample() -> Vec<NumberSet> {
    sample_multisets(SAMPLE_SEED, SAMPLE_SIZE, 4, 1, 13)
}

fn standard_cfg() -> EngineConfig {
    EngineConfig::new(20, 13)
}

fn solve_rff_t(set: &NumberSet, cfg: &EngineConfig) -> SearchTrace {
    let oracle = Game24Oracle::standard(cfg.width);
    run_rff_t(
        &oracle,
        Game24State::initial(set.clone()),
        Game24Target::root(rat(24)),
        cfg,
    )
    .expect("valid config")
}

/// Solved game24 outcomes must carry an expression over exactly the
/// original numbers evaluating to 24.
fn assert_verified_expression(trace: &SearchTrace, original: &NumberSet) {
    let Outcome::Solved(answer) = &trace.outcome else {
        panic!("expected a solved trace");
    };
    let (value, leaves) = eval_expression(answer)
        .unwrap_or_else(|e| panic!("unparseable solution {answer:?}: {e}"));
    assert_eq!(value, rat(24), "solution {answer:?} does not reach 24");
    assert_eq!(
        leaves.key(),
        original.key(),
        "solution {answer:?} does not use exactly the original numbers"
    );
}

#[test]
fn criterion_1_oracle_completeness() {
    let cfg = standard_cfg();
    let mut mismatches = Vec::new();
    for set in sample() {
        let expected = brute_force_solvable(&set, &rat(24));
        let trace = solve_rff_t(&set, &cfg);
        if trace.outcome.is_solved() != expected {
            mismatches.push((set.key(), expected));
        }
        if trace.outcome.is_solved() {
            assert_verified_expression(&trace, &set);
        }
    }
    assert!(
        mismatches.is_empty(),
        "engine and brute force disagree on {mismatches:?}"
    );
    println!(
        "criterion 1 (oracle completeness, {} multisets, L=20 n=13): PASS",
        SAMPLE_SIZE
    );
}

#[test]
fn criterion_2_visited_state_accounting() {
    let cfg = standard_cfg();
    let mut cot_total = 0u64;
    let mut cot_runs = 0u64;
    for set in sample() {
        let trace = solve_rff_t(&set, &cfg);
        assert_eq!(
            trace.visited_states,
            trace.forward_step_count(),
            "visited counter diverges from forward events on {}",
            set.key()
        );
        // the equality must hold at every prefix of the event log
        let mut seen = 0u64;
        for event in &trace.events {
            if event.kind == EventKind::ForwardStep {
                seen += 1;
            }
        }
        assert_eq!(seen, trace.visited_states);

        let oracle = Game24Oracle::standard(cfg.width);
        let cot = run_cot(
            &oracle,
            Game24State::initial(set.clone()),
            Game24Target::root(rat(24)),
            &cfg,
        )
        .expect("valid config");
        assert_eq!(cot.visited_states, 1, "one chain is one visited state");
        cot_total += cot.visited_states;
        cot_runs += 1;
    }
    let cot_mean = cot_total as f64 / cot_runs as f64;
    assert_eq!(cot_mean, 1.0, "single-chain baseline must report exactly 1.0");
    println!("criterion 2 (visited-state accounting, single-chain mean = 1.0): PASS");
}

#[test]
fn criterion_3_search_space_direction() {
    let cfg = standard_cfg();
    let solvable: Vec<NumberSet> = sample()
        .into_iter()
        .filter(|s| brute_force_solvable(s, &rat(24)))
        .collect();
    assert!(!solvable.is_empty());

    let mut rff_visited = 0u64;
    let mut tree_visited = 0u64;
    let mut five_visited = 0u64;
    for set in &solvable {
        let rff = solve_rff_t(set, &cfg);
        assert!(rff.outcome.is_solved(), "target-guided miss on {}", set.key());
        rff_visited += rff.visited_states;

        let oracle = Game24Oracle::standard(cfg.width);
        let tree = run_forward_tree(
            &oracle,
            Game24State::initial(set.clone()),
            Game24Target::root(rat(24)),
            &cfg,
            5,
        )
        .expect("valid config");
        assert!(tree.outcome.is_solved(), "forward-tree miss on {}", set.key());
        tree_visited += tree.visited_states;

        let five = add_redundant_one(set);
        let trace = solve_rff_t(&five, &cfg);
        five_visited += trace.visited_states;
    }
    let n = solvable.len() as f64;
    let rff_mean = rff_visited as f64 / n;
    let tree_mean = tree_visited as f64 / n;
    let five_mean = five_visited as f64 / n;
    assert!(
        rff_mean < tree_mean,
        "expected target guidance to shrink the search: {rff_mean:.2} vs {tree_mean:.2}"
    );
    assert!(
        five_mean > rff_mean,
        "expected redundant five-number variants to cost more: {five_mean:.2} vs {rff_mean:.2}"
    );
    println!(
        "criterion 3 (search-space direction: rff-t {rff_mean:.2} < forward-tree(b=5) {tree_mean:.2}, both 100%; five-number {five_mean:.2} > four-number {rff_mean:.2}): PASS"
    );
}

#[test]
fn criterion_4_solvability_preservation() {
    let goal = rat(24);
    let mut violations = Vec::new();
    for set in sample() {
        if brute_force_solvable(&set, &goal)
            && !brute_force_solvable(&add_redundant_one(&set), &goal)
        {
            violations.push(set.key());
        }
    }
    assert!(violations.is_empty(), "violations: {violations:?}");
    println!(
        "criterion 4 (redundant-one preserves solvability on {} multisets): PASS",
        SAMPLE_SIZE
    );
}

#[test]
fn criterion_5_backtracking_contract() {
    // 1,000 seeded runs mixing four- and five-card puzzles, replayed
    // against a shadow avoid set reconstructed from the trace alone
    let cfg = standard_cfg();
    let mut puzzles = sample_multisets(5, 600, 4, 1, 13);
    puzzles.extend(sample_multisets(6, 400, 5, 1, 13));
    let mut backtracks_seen = 0usize;
    for set in puzzles {
        let trace = solve_rff_t(&set, &cfg);
        backtracks_seen += check_backtracking_contract(&trace);
    }
    assert!(
        backtracks_seen > 0,
        "the corpus must actually exercise backtracking"
    );
    println!(
        "criterion 5 (backtracking contract over 1000 runs, {backtracks_seen} backtracks): PASS"
    );
}

/// Replays one trace against a shadow avoid set; panics on any violation.
/// Returns the number of backtrack events checked.
fn check_backtracking_contract(trace: &SearchTrace) -> usize {
    use std::collections::BTreeMap;
    let mut shadow: BTreeMap<usize, Vec<(String, String)>> = BTreeMap::new();
    let mut current_target: BTreeMap<usize, String> = BTreeMap::new();
    let mut pending_consultation: Option<(usize, (String, String))> = None;
    let mut backtracks = 0usize;
    for event in &trace.events {
        match (&event.kind, &event.detail) {
            (EventKind::BackwardStep, EventDetail::Backward { target, .. }) => {
                if let Some((depth, pair)) = pending_consultation.take() {
                    assert_eq!(
                        event.depth, depth,
                        "the step after a backtrack must re-derive the condemned depth"
                    );
                    assert!(
                        shadow.get(&depth).is_some_and(|s| s.contains(&pair)),
                        "consultation after backtrack must still see the recorded pair"
                    );
                }
                current_target.insert(event.depth, target.clone());
            }
            (EventKind::ForwardStep, EventDetail::Forward { state, avoid_len, .. }) => {
                let slot = shadow.entry(event.depth).or_default();
                assert_eq!(
                    *avoid_len,
                    slot.len(),
                    "forward event avoid length must match the reconstructed set"
                );
                let target = current_target
                    .get(&event.depth)
                    .cloned()
                    .unwrap_or_default();
                assert!(
                    !slot.contains(&(state.clone(), target.clone())),
                    "a forward move repeated an avoided pair at depth {}",
                    event.depth
                );
            }
            (EventKind::Backtrack, EventDetail::Backtrack { to, state, target }) => {
                backtracks += 1;
                assert!(*to < event.depth, "backtracks must name a shallower depth");
                let pair = (state.clone(), target.clone());
                shadow.entry(*to).or_default().push(pair.clone());
                // everything deeper than the revisited depth is cleared
                shadow.retain(|d, _| *d <= *to);
                current_target.retain(|d, _| d <= to);
                pending_consultation = Some((*to, pair));
            }
            _ => {}
        }
    }
    backtracks
}

#[test]
fn criterion_6_accumulation_exactness() {
    let cfg = EngineConfig::new(32, 4);
    for i in 0..1000u64 {
        let depth = 1 + (i as usize % 8);
        let problem = generate_problem(i, depth, 3);
        let truth = rff::game24::render_rat(&problem.ground_truth);
        let oracle = DagOracle::new(problem.clone());
        let pair = run_rff_g(
            &oracle,
            FactSet::empty(),
            MathTarget::goal_of(&problem),
            &cfg,
        )
        .expect("valid config");
        assert_eq!(
            pair.outcome,
            Outcome::Solved(truth.clone()),
            "wrong answer on seed {i}"
        );
        let iterations = pair
            .events
            .iter()
            .filter(|e| e.kind == EventKind::BackwardStep)
            .count();
        assert!(
            iterations <= depth + 1,
            "seed {i}: {iterations} iterations exceed depth {depth} + 1"
        );
        let single_cfg = set_backward_mode(&cfg, BackwardMode::Single);
        let single = run_rff_g(
            &oracle,
            FactSet::empty(),
            MathTarget::goal_of(&problem),
            &single_cfg,
        )
        .expect("valid config");
        assert_eq!(pair.outcome, single.outcome, "modes disagree on seed {i}");
    }
    println!("criterion 6 (exact answers on 1000 generated problems, depths 1-8): PASS");
}

// ---- criterion 7: golden traces -----------------------------------------

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn cassette_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/cassettes")
}

/// The scripted conversation behind the recorded solve of `2 3 4`.
fn llm_script_simple() -> Vec<&'static str> {
    vec![
        "No, the numbers are far from the goal.",
        "Target: 4 6, because 4 * 6 = 24",
        "Move: 2 * 3 = 6",
        "Yes, the sets are equal.",
        "Answer: 2*3*4",
    ]
}

/// The scripted conversation behind the recorded backtracking solve of
/// `2 3 4 5`, including a lying state check and an unparseable verifier.
fn llm_script_backtrack() -> Vec<&'static str> {
    vec![
        "No, four numbers remain.",
        "Target: 4 6, because 4 * 6 = 24",
        "Move: 2 * 3 = 6",
        "No, still far away.",
        "Target: 2 2 6, because 2 * 2 = 4",
        "Move: 4 - 5 = -1",
        "Yes, certainly.",
        "complete nonsense with no digits",
        "Target: 2 12, because 2 * 12 = 24",
        "Move: 3 + 4 = 7",
        "Yes, 5 + 7 = 12 reaches it.",
        "Answer: 2*(3+4+5)",
    ]
}

struct GoldenEntry {
    name: &'static str,
    run: Box<dyn Fn() -> SearchTrace>,
}

fn golden_manifest() -> Vec<GoldenEntry> {
    fn rff_t(name: &'static str, puzzle: &'static str, cfg: EngineConfig) -> GoldenEntry {
        GoldenEntry {
            name,
            run: Box::new(move || {
                solve_rff_t(&NumberSet::parse(puzzle).expect("puzzle"), &cfg)
            }),
        }
    }
    fn baseline(
        name: &'static str,
        puzzle: &'static str,
        forward_tree: bool,
    ) -> GoldenEntry {
        GoldenEntry {
            name,
            run: Box::new(move || {
                let cfg = standard_cfg();
                let oracle = Game24Oracle::standard(cfg.width);
                let state = Game24State::initial(NumberSet::parse(puzzle).expect("puzzle"));
                let goal = Game24Target::root(rat(24));
                if forward_tree {
                    run_forward_tree(&oracle, state, goal, &cfg, 5).expect("valid config")
                } else {
                    run_cot(&oracle, state, goal, &cfg).expect("valid config")
                }
            }),
        }
    }
    fn mathdag(name: &'static str, seed: u64, depth: usize, single: bool) -> GoldenEntry {
        GoldenEntry {
            name,
            run: Box::new(move || {
                let mut cfg = EngineConfig::new(32, 4);
                if single {
                    cfg = set_backward_mode(&cfg, BackwardMode::Single);
                }
                let problem = generate_problem(seed, depth, 3);
                let oracle = DagOracle::new(problem.clone());
                run_rff_g(
                    &oracle,
                    FactSet::empty(),
                    MathTarget::goal_of(&problem),
                    &cfg,
                )
                .expect("valid config")
            }),
        }
    }
    fn llm(name: &'static str, puzzle: &'static str, script: fn() -> Vec<&'static str>) -> GoldenEntry {
        GoldenEntry {
            name,
            run: Box::new(move || {
                let cassette_path = cassette_dir().join(format!("{name}.json"));
                let cfg = LlmConfig::game24("http://recorded", "recorded-model")
                    .with_backoff_base(Duration::from_millis(1));
                let regen = std::env::var_os("RFF_REGEN_GOLDEN").is_some();
                let client = if regen {
                    std::fs::create_dir_all(cassette_dir()).expect("cassette dir");
                    let scripted = ScriptedTransport::from_contents(script());
                    let recording = RecordingTransport::new(scripted, cassette_path);
                    ChatClient::new(cfg, Arc::new(recording))
                } else {
                    let replay = ReplayTransport::new(
                        Cassette::load(&cassette_path).expect("cassette recorded"),
                    );
                    ChatClient::new(cfg, Arc::new(replay))
                };
                let adapter = Game24Llm::new(client, TemplateSet::builtin(), rat(24));
                run_rff_t(
                    &adapter,
                    Game24State::initial(NumberSet::parse(puzzle).expect("puzzle")),
                    Game24Target::root(rat(24)),
                    &EngineConfig::new(10, 5),
                )
                .expect("valid config")
            }),
        }
    }

    let wide = EngineConfig::new(20, 13);
    let narrow = EngineConfig::new(20, 10);
    let single = set_backward_mode(&wide, BackwardMode::Single);
    vec![
        rff_t("rfft_worked_example", "1 2 12 12", wide.clone()),
        rff_t("rfft_two_ones", "4 6 1 1", wide.clone()),
        rff_t("rfft_unsolvable", "1 1 1 1", narrow.clone()),
        rff_t("rfft_degenerate", "24", wide.clone()),
        rff_t("rfft_fractional", "3 3 8 8", wide.clone()),
        rff_t("rfft_fives", "1 5 5 5", wide.clone()),
        rff_t("rfft_backtracker", "2 3 8 13", wide.clone()),
        rff_t("rfft_hard_tail", "8 9 11 11", wide.clone()),
        rff_t("rfft_five_numbers", "1 4 7 8 8", wide.clone()),
        rff_t("rfft_five_unsolvable", "1 1 1 1 1", narrow),
        rff_t("rfft_single_mode", "1 2 12 12", single.clone()),
        rff_t("rfft_single_fallback", "3 3 8 8", single),
        baseline("cot_worked_example", "1 2 12 12", false),
        baseline("cot_unsolvable", "1 1 1 1", false),
        baseline("cot_direct", "2 2 6 12", false),
        baseline("tree_worked_example", "1 2 12 12", true),
        baseline("tree_unsolvable", "1 1 1 1", true),
        baseline("tree_easy", "2 3 4 6", true),
        mathdag("rffg_depth4", 7, 4, false),
        mathdag("rffg_depth8", 11, 8, false),
        mathdag("rffg_single", 7, 4, true),
        mathdag("rffg_depth1", 0, 1, false),
        llm("llm_recorded_simple", "2 3 4", llm_script_simple),
        llm("llm_recorded_backtrack", "2 3 4 5", llm_script_backtrack),
    ]
}

#[test]
fn criterion_7_replay_determinism() {
    let dir = golden_dir();
    let regen = std::env::var_os("RFF_REGEN_GOLDEN").is_some();
    if regen {
        std::fs::create_dir_all(&dir).expect("golden dir");
    }
    let manifest = golden_manifest();
    assert!(manifest.len() >= 20, "at least 20 golden traces");
    let mut checked = 0usize;
    for entry in &manifest {
        let trace = (entry.run)();
        let serialized = trace.serialize();
        let path = dir.join(format!("{}.trace", entry.name));
        if regen {
            std::fs::write(&path, &serialized).expect("write golden");
        } else {
            let golden = std::fs::read_to_string(&path)
                .unwrap_or_else(|e| panic!("missing golden {}: {e}", entry.name));
            assert_eq!(
                serialized, golden,
                "replay of {} is not byte-identical",
                entry.name
            );
            // the serialized form itself round-trips
            let parsed = SearchTrace::parse(&serialized).expect("parseable trace");
            assert_eq!(parsed.serialize(), serialized);
        }
        checked += 1;
    }
    println!("criterion 7 (replay determinism over {checked} golden traces): PASS");
}

#[test]
fn criterion_8_verified_solutions_only() {
    let cfg = standard_cfg();
    let mut solved = 0usize;
    for set in sample().into_iter().take(200) {
        let trace = solve_rff_t(&set, &cfg);
        if trace.outcome.is_solved() {
            assert_verified_expression(&trace, &set);
            solved += 1;
        }
        let five = add_redundant_one(&set);
        let trace = solve_rff_t(&five, &cfg);
        if trace.outcome.is_solved() {
            assert_verified_expression(&trace, &five);
            solved += 1;
        }
    }
    // the accumulation engine must agree with stored ground truth
    for i in 0..200u64 {
        let problem = generate_problem(1_000 + i, 1 + (i as usize % 8), 3);
        let oracle = DagOracle::new(problem.clone());
        let trace = run_rff_g(
            &oracle,
            FactSet::empty(),
            MathTarget::goal_of(&problem),
            &EngineConfig::new(32, 4),
        )
        .expect("valid config");
        match &trace.outcome {
            Outcome::Solved(answer) => {
                assert_eq!(
                    *answer,
                    rff::game24::render_rat(&problem.ground_truth),
                    "answer mismatches ground truth on seed {}",
                    1_000 + i
                );
                solved += 1;
            }
            other => panic!("generated problem unsolved: {other:?}"),
        }
    }
    println!("criterion 8 (every solved outcome independently verified, {solved} solves): PASS");
}

#[test]
fn criterion_9_llm_harness_readiness() {
    // the full loop against a fake endpoint: two rate limits, a rejected
    // arithmetic lie, a lying state check exposed by local verification,
    // an unparseable verifier reply clamped to the previous depth, then a
    // verified solve
    let mut script = vec![
        StubReply::Status(429, "busy".to_string()),
        StubReply::Status(429, "busy".to_string()),
    ];
    script.push(StubReply::content("No, four numbers remain."));
    script.push(StubReply::content("Target: 4 6, because 4 * 6 = 24"));
    script.push(StubReply::content("Move: 3 * 7 = 22"));
    script.push(StubReply::content("Move: 2 * 3 = 6"));
    script.push(StubReply::content("No, still far away."));
    script.push(StubReply::content("Target: 2 2 6, because 2 * 2 = 4"));
    script.push(StubReply::content("Move: 4 - 5 = -1"));
    script.push(StubReply::content("Yes, certainly."));
    script.push(StubReply::content("complete nonsense with no digits"));
    script.push(StubReply::content("Target: 2 12, because 2 * 12 = 24"));
    script.push(StubReply::content("Move: 3 + 4 = 7"));
    script.push(StubReply::content("Yes, 5 + 7 = 12 reaches it."));
    script.push(StubReply::content("Answer: 2*(3+4+5)"));
    let server = StubServer::start(script).expect("stub binds");
    let cfg = LlmConfig::game24(server.base_url(), "stub-model")
        .with_backoff_base(Duration::from_millis(1));
    let client = ChatClient::over_http(cfg).expect("client builds");
    let adapter = Game24Llm::new(client, TemplateSet::builtin(), rat(24));
    let trace = run_rff_t(
        &adapter,
        Game24State::initial(NumberSet::from_ints(&[2, 3, 4, 5])),
        Game24Target::root(rat(24)),
        &EngineConfig::new(10, 5),
    )
    .expect("valid config");

    assert_eq!(trace.outcome, Outcome::Solved("2*(3+4+5)".to_string()));
    let verify = trace
        .events
        .iter()
        .find(|e| e.kind == EventKind::Verify)
        .expect("a verify event");
    assert_eq!(
        verify.detail,
        EventDetail::Verify { revisit: Some(1) },
        "unparseable verifier replies clamp to the previous depth"
    );
    assert!(trace
        .events
        .iter()
        .any(|e| e.kind == EventKind::Backtrack));
    let requests = server.finish();
    assert_eq!(requests.len(), 15, "retries and corrections all hit the wire");
    check_backtracking_contract(&trace);
    println!("criterion 9 (scripted-endpoint loop with retries, local validation, verify clamp): PASS");
}
