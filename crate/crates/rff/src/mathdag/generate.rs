//! Deterministic problem generator: a goal chain of the requested depth
//! plus distractor variables that a goal-directed solver never needs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::game24::{rat, render_rat, Rat};

use super::problem::{BinOp, DagProblem, VarDef};

/// Sentence templates used for surface text; bump when they change so
/// downstream prompt fixtures can pin a version.
pub const TEMPLATE_VERSION: &str = "v1";

/// Generates a problem whose goal chain is exactly `depth` nodes long
/// (depth 1 is a lone literal) over `width` literal variables, determined
/// entirely by the arguments. The ground-truth answer is computed by
/// topological evaluation and stored on the problem.
pub fn generate_problem(seed: u64, depth: usize, width: usize) -> DagProblem {
    assert!(depth >= 1, "depth must be at least 1");
    assert!(width >= 1, "width must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vars: Vec<(String, VarDef)> = Vec::new();
    let mut values: Vec<Rat> = Vec::new();

    for i in 0..width {
        let v = rat(rng.gen_range(2..=9));
        values.push(v.clone());
        vars.push((format!("x{i}"), VarDef::Literal(v)));
    }

    // the goal chain consumes at most two literals so the number of facts a
    // goal-directed run must derive stays within depth + 1
    let lit_a = 0usize;
    let lit_b = if width > 1 { 1 } else { 0 };
    let mut chain_value = values[lit_a].clone();
    let mut prev_name = format!("x{lit_a}");
    let mut next_index = width;
    for _ in 1..depth {
        let operand = if rng.gen_bool(0.5) { lit_a } else { lit_b };
        let operand_name = format!("x{operand}");
        let operand_value = values[operand].clone();
        let op = pick_op(&mut rng, &chain_value, &operand_value);
        let name = format!("x{next_index}");
        next_index += 1;
        chain_value = op
            .apply(&chain_value, &operand_value)
            .expect("generator avoids division by zero");
        vars.push((name.clone(), VarDef::Op(op, prev_name.clone(), operand_name)));
        prev_name = name;
    }
    let goal = prev_name;

    // distractors hang off literals and never feed the goal
    if depth >= 2 {
        for _ in 0..width.saturating_sub(1) {
            let a = rng.gen_range(0..width);
            let b = rng.gen_range(0..width);
            let op = match rng.gen_range(0..3) {
                0 => BinOp::Add,
                1 => BinOp::Sub,
                _ => BinOp::Mul,
            };
            let name = format!("x{next_index}");
            next_index += 1;
            vars.push((name, VarDef::Op(op, format!("x{a}"), format!("x{b}"))));
        }
    }

    let mut problem = DagProblem {
        vars,
        goal,
        depth,
        ground_truth: chain_value,
        surface_text: None,
    };
    debug_assert_eq!(problem.chain_depth(&problem.goal), depth);
    debug_assert_eq!(
        problem.evaluate_goal().expect("generated DAG evaluates"),
        problem.ground_truth
    );
    problem.surface_text = Some(render_surface(&problem));
    problem
}

/// Division only when it stays exact over integers; otherwise one of the
/// closed operations.
fn pick_op(rng: &mut ChaCha8Rng, left: &Rat, right: &Rat) -> BinOp {
    use num::Zero;
    let choice = rng.gen_range(0..4);
    if choice == 3 {
        let divisible = !right.is_zero() && (left / right).is_integer();
        if divisible {
            return BinOp::Div;
        }
    }
    match choice.min(2) {
        0 => BinOp::Add,
        1 => BinOp::Sub,
        _ => BinOp::Mul,
    }
}

fn render_surface(problem: &DagProblem) -> String {
    let mut sentences: Vec<String> = Vec::new();
    for (name, def) in &problem.vars {
        let s = match def {
            VarDef::Literal(v) => format!("The value of {name} is {}.", render_rat(v)),
            VarDef::Op(op, a, b) => {
                format!("The value of {name} is {} {a} and {b}.", op.phrase())
            }
        };
        sentences.push(s);
    }
    sentences.push(format!("What is the value of {}?", problem.goal));
    sentences.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic_in_the_seed() {
        let a = generate_problem(7, 4, 3);
        let b = generate_problem(7, 4, 3);
        assert_eq!(a, b);
        let c = generate_problem(8, 4, 3);
        assert_ne!(a, c);
    }

    #[test]
    fn depth_one_is_a_single_literal_goal() {
        let p = generate_problem(0, 1, 1);
        assert_eq!(p.vars.len(), 1);
        assert_eq!(p.goal, "x0");
        match &p.vars[0].1 {
            VarDef::Literal(v) => assert_eq!(*v, p.ground_truth),
            other => panic!("expected literal goal, got {other:?}"),
        }
    }

    #[test]
    fn goal_chain_has_the_requested_depth() {
        for depth in 1..=8 {
            let p = generate_problem(42 + depth as u64, depth, 3);
            p.validate().unwrap();
            assert_eq!(p.chain_depth(&p.goal), depth);
            assert_eq!(p.evaluate_goal().unwrap(), p.ground_truth);
        }
    }

    #[test]
    fn depth_three_problems_need_at_least_three_forward_steps() {
        use crate::core::EngineConfig;
        use crate::engines::run_rff_g;
        use crate::mathdag::{DagOracle, FactSet, MathTarget};
        for seed in 0..10 {
            let problem = generate_problem(seed, 3, 3);
            let oracle = DagOracle::new(problem.clone());
            let trace = run_rff_g(
                &oracle,
                FactSet::empty(),
                MathTarget::goal_of(&problem),
                &EngineConfig::new(16, 4),
            )
            .unwrap();
            assert!(trace.outcome.is_solved());
            assert!(trace.visited_states >= 3, "seed {seed}: {}", trace.visited_states);
        }
    }

    #[test]
    fn surface_text_mentions_every_variable() {
        let p = generate_problem(3, 3, 2);
        let text = p.surface_text.as_ref().unwrap();
        for (name, _) in &p.vars {
            assert!(text.contains(name.as_str()));
        }
    }
}
