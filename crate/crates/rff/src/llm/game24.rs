//! Chat-backed Game of 24 adapter. Every model assertion that can be
//! checked locally is checked locally: moves are re-verified in exact
//! arithmetic before acceptance, and no run is marked solved unless the
//! assembled chain passes the same verifier the oracle uses.

use crate::core::{
    AdapterError, AvoidView, BackwardOutcome, Capability, DomainAdapter, ForwardOutcome,
    SearchPath, Verdict,
};
use crate::game24::{
    assemble_path_chain, eval_expression, expression_chain, format_solution, verify_chain,
    ChainCheck, Game24State, Game24Target, NumberSet, Rat,
};

use super::client::{ChatClient, Role};
use super::parse;
use super::template::{TemplateDomain, TemplateRole, TemplateSet};
use super::LlmError;

const SYSTEM_PROMPT: &str = "Follow the requested output format exactly; reply with the single \
formatted line and nothing else.";

/// One extra attempt after a rejected reply, with the rejection reason
/// prepended so the model can correct itself.
const LOCAL_VALIDATION_RETRIES: usize = 1;

pub struct Game24Llm {
    client: ChatClient,
    templates: TemplateSet,
    goal: Rat,
}

impl Game24Llm {
    pub fn new(client: ChatClient, templates: TemplateSet, goal: Rat) -> Self {
        Game24Llm {
            client,
            templates,
            goal,
        }
    }

    fn prompt(
        &self,
        role: TemplateRole,
        slots: &[(&str, &str)],
        reminder: Option<&str>,
    ) -> Result<super::client::ChatExchange, AdapterError> {
        let template = self.templates.get(TemplateDomain::Game24, role);
        let mut text = template.render(slots).map_err(adapter_err)?;
        if let Some(reminder) = reminder {
            text = format!("{reminder}\n\n{text}");
        }
        let messages = vec![
            (Role::System, SYSTEM_PROMPT.to_string()),
            (Role::User, text),
        ];
        self.client.chat(&messages).map_err(adapter_err)
    }

    fn render_avoid(avoid: &AvoidView<'_>) -> String {
        if avoid.is_empty() {
            return "(none)".to_string();
        }
        avoid
            .iter()
            .map(|e| format!("numbers {} toward target {}", e.state_text, e.target_text))
            .collect::<Vec<_>>()
            .join("\n")
    }

    fn render_path(path: &SearchPath<'_, Game24State, Game24Target>) -> String {
        match assemble_path_chain(path) {
            Ok((chain, _)) => chain
                .iter()
                .enumerate()
                .map(|(i, m)| format!("step {}: {}", i + 1, m.render()))
                .collect::<Vec<_>>()
                .join("\n"),
            Err(_) => "(incomplete path: the frontier does not reach its target)".to_string(),
        }
    }
}

fn adapter_err(e: LlmError) -> AdapterError {
    AdapterError::failed(e.to_string())
}

impl DomainAdapter for Game24Llm {
    type State = Game24State;
    type Target = Game24Target;

    fn capability(&self) -> Capability {
        Capability::TreeSearch
    }

    fn domain(&self) -> &'static str {
        "game24-llm"
    }

    fn canonicalize_state(&self, state: Game24State) -> Game24State {
        Game24State {
            numbers: NumberSet::from_values(state.numbers.values().to_vec()),
            moves: state.moves,
        }
    }

    fn canonicalize_target(&self, target: Game24Target) -> Game24Target {
        Game24Target {
            values: NumberSet::from_values(target.values.values().to_vec()),
            transition: target.transition,
        }
    }

    fn state_key(&self, state: &Game24State) -> String {
        state.numbers.key()
    }

    fn target_key(&self, target: &Game24Target) -> String {
        target.values.key()
    }

    fn render_state(&self, state: &Game24State) -> String {
        state.numbers.key()
    }

    fn render_target(&self, target: &Game24Target) -> String {
        target.values.key()
    }

    /// Asks for one backward decomposition. The transition is mandatory and
    /// locally validated: exact arithmetic, its result among the parent
    /// target values, and the stated pre-target consistent with replacing
    /// that result by the two operands.
    fn last_step(
        &self,
        state: &Game24State,
        target: &Game24Target,
        avoid: &AvoidView<'_>,
    ) -> Result<BackwardOutcome<Game24Target>, AdapterError> {
        let slots = [
            ("current_state", state.numbers.key()),
            ("target_state", target.values.key()),
            ("avoid_list", Self::render_avoid(avoid)),
        ];
        let slots: Vec<(&str, &str)> = slots.iter().map(|(k, v)| (*k, v.as_str())).collect();
        let mut reminder: Option<String> = None;
        let mut last_err = AdapterError::failed("no attempt made");
        for _ in 0..=LOCAL_VALIDATION_RETRIES {
            let exchange = self.prompt(TemplateRole::LastStep, &slots, reminder.as_deref())?;
            match validate_target_reply(&exchange.reply, target) {
                Ok(candidate) => {
                    let note = candidate
                        .transition
                        .as_ref()
                        .expect("validated candidates carry their transition")
                        .render();
                    return Ok(BackwardOutcome {
                        grounded: candidate.values == state.numbers,
                        target: candidate,
                        note,
                        req: Some(exchange.request_hash),
                        raw: Some(exchange.reply),
                    });
                }
                Err(e) => {
                    reminder = Some(format!(
                        "Your previous reply was rejected: {e}. Follow the format exactly."
                    ));
                    last_err = AdapterError::failed(e.to_string());
                }
            }
        }
        Err(last_err)
    }

    /// Asks for one forward move and re-checks it locally: the arithmetic
    /// must be exact, the operands must be live, and the resulting pair
    /// must not repeat an avoided attempt. One corrective retry, then the
    /// attempt fails.
    fn forward_step(
        &self,
        state: &Game24State,
        target: &Game24Target,
        avoid: &AvoidView<'_>,
    ) -> Result<ForwardOutcome<Game24State>, AdapterError> {
        let slots = [
            ("current_state", state.numbers.key()),
            ("target_state", target.values.key()),
            ("avoid_list", Self::render_avoid(avoid)),
        ];
        let slots: Vec<(&str, &str)> = slots.iter().map(|(k, v)| (*k, v.as_str())).collect();
        let mut reminder: Option<String> = None;
        let mut last_err = AdapterError::failed("no attempt made");
        for _ in 0..=LOCAL_VALIDATION_RETRIES {
            let exchange = self.prompt(TemplateRole::Forward, &slots, reminder.as_deref())?;
            let rejection = match parse::parse_move(&exchange.reply) {
                Ok(m) if !m.is_exact() => format!("{} is not exact arithmetic", m.render()),
                Ok(m) => match state.apply(&m) {
                    None => format!("operands of {} are not all available", m.render()),
                    Some(next) => {
                        if avoid.contains(&next.numbers.key(), &target.values.key()) {
                            format!(
                                "the resulting numbers {} were already tried against this target",
                                next.numbers.key()
                            )
                        } else {
                            let note = m.render();
                            return Ok(ForwardOutcome {
                                state: next,
                                note,
                                req: Some(exchange.request_hash),
                                raw: Some(exchange.reply),
                            });
                        }
                    }
                },
                Err(e) => e.to_string(),
            };
            reminder = Some(format!(
                "Your previous reply was rejected: {rejection}. Follow the format exactly."
            ));
            last_err = AdapterError::failed(rejection);
        }
        Err(last_err)
    }

    fn state_check(
        &self,
        state: &Game24State,
        target: &Game24Target,
    ) -> Result<bool, AdapterError> {
        let slots = [
            ("current_state", state.numbers.key()),
            ("target_state", target.values.key()),
        ];
        let slots: Vec<(&str, &str)> = slots.iter().map(|(k, v)| (*k, v.as_str())).collect();
        let exchange = self.prompt(TemplateRole::StateCheck, &slots, None)?;
        parse::parse_verdict(&exchange.reply).map_err(adapter_err)
    }

    /// Local verification decides validity; the model is only consulted to
    /// pick the revisit depth when the chain is locally wrong, and its
    /// answer is clamped to `[1, depth - 1]` with `depth - 1` as the
    /// fallback on unparseable replies.
    fn verify(
        &self,
        path: &SearchPath<'_, Game24State, Game24Target>,
    ) -> Result<Verdict, AdapterError> {
        let locally_valid = match assemble_path_chain(path) {
            Ok((chain, _)) => {
                matches!(
                    verify_chain(&chain, &path.input.numbers, &self.goal),
                    ChainCheck::Valid
                )
            }
            Err(_) => false,
        };
        if locally_valid {
            return Ok(Verdict::Valid);
        }
        let depth = path.depth().max(1);
        let default = depth.saturating_sub(1).max(1);
        let slots = [
            ("input", path.input.numbers.key()),
            ("goal", path.goal.values.key()),
            ("path", Self::render_path(path)),
        ];
        let slots: Vec<(&str, &str)> = slots.iter().map(|(k, v)| (*k, v.as_str())).collect();
        let exchange = self.prompt(TemplateRole::Verify, &slots, None)?;
        match parse::parse_backtrack(&exchange.reply, default) {
            // the model calls a locally invalid path valid: never trust it
            None => Ok(Verdict::Revisit(default)),
            Some(step) => Ok(Verdict::Revisit(step.clamp(1, default))),
        }
    }

    /// Asks for the final expression and re-verifies it locally; a reply
    /// that does not use each original number once and evaluate to the
    /// goal is replaced by the locally formatted chain.
    fn output(
        &self,
        path: &SearchPath<'_, Game24State, Game24Target>,
    ) -> Result<String, AdapterError> {
        let (chain, _) = assemble_path_chain(path)
            .map_err(|d| AdapterError::failed(format!("no completing move at depth {d}")))?;
        let local = format_solution(&chain, &path.input.numbers).map_err(AdapterError::Failed)?;
        let slots = [
            ("input", path.input.numbers.key()),
            ("goal", path.goal.values.key()),
            ("path", Self::render_path(path)),
        ];
        let slots: Vec<(&str, &str)> = slots.iter().map(|(k, v)| (*k, v.as_str())).collect();
        let Ok(exchange) = self.prompt(TemplateRole::Output, &slots, None) else {
            return Ok(local);
        };
        let Ok(answer) = parse::parse_answer(&exchange.reply) else {
            return Ok(local);
        };
        match eval_expression(&answer) {
            Ok((value, leaves))
                if value == self.goal && leaves.key() == path.input.numbers.key() =>
            {
                Ok(answer)
            }
            _ => Ok(local),
        }
    }

    fn target_attained(
        &self,
        state: &Game24State,
        target: &Game24Target,
    ) -> Result<bool, AdapterError> {
        Ok(state.numbers == target.values)
    }
}

/// Local validation of a backward reply: transition exact, its result
/// among the parent values, pre-target consistent with the replacement.
fn validate_target_reply(
    reply: &str,
    parent: &Game24Target,
) -> Result<Game24Target, LlmError> {
    let (values, transition) = parse::parse_target(reply)?;
    if !transition.is_exact() {
        return Err(LlmError::Parse(format!(
            "transition {} is not exact arithmetic",
            transition.render()
        )));
    }
    if !parent.values.contains(&transition.result) {
        return Err(LlmError::Parse(format!(
            "transition result {} is not among the target values",
            crate::game24::render_rat(&transition.result)
        )));
    }
    let expected = parent
        .values
        .remove_one(&transition.result)
        .expect("result membership just checked")
        .insert(transition.lhs.clone())
        .insert(transition.rhs.clone());
    if expected != values {
        return Err(LlmError::Parse(format!(
            "stated pre-target {} does not match the transition (expected {})",
            values.key(),
            expected.key()
        )));
    }
    Ok(Game24Target {
        values,
        transition: Some(transition),
    })
}

// the CoT baseline asks for one full solution in a single exchange
impl crate::baselines::CotAdapter for Game24Llm {
    fn full_chain(
        &self,
        input: &Game24State,
        goal: &Game24Target,
    ) -> Result<ForwardOutcome<Game24State>, AdapterError> {
        let slots = [
            ("input", input.numbers.key()),
            ("goal", goal.values.key()),
            ("path", "(solve from scratch: list each step)".to_string()),
        ];
        let slots: Vec<(&str, &str)> = slots.iter().map(|(k, v)| (*k, v.as_str())).collect();
        let exchange = self.prompt(TemplateRole::Output, &slots, None)?;
        let answer = parse::parse_answer(&exchange.reply).map_err(adapter_err)?;
        let (value, leaves, moves) = expression_chain(&answer)
            .map_err(|e| AdapterError::failed(format!("unusable expression: {e}")))?;
        if leaves.key() != input.numbers.key() {
            return Err(AdapterError::failed(
                "expression does not use exactly the given numbers",
            ));
        }
        let state = Game24State {
            numbers: NumberSet::singleton(value),
            moves,
        };
        Ok(ForwardOutcome {
            state,
            note: answer.clone(),
            req: Some(exchange.request_hash),
            raw: Some(exchange.reply),
        })
    }
}
