//! Chat-backed math adapter for the accumulation engine: free-text word
//! problems, one derived fact per forward step.

use crate::core::{
    AdapterError, AvoidView, BackwardOutcome, Capability, DomainAdapter, ForwardOutcome,
    SearchPath,
};
use crate::game24::render_rat;
use crate::mathdag::{FactSet, MathTarget};

use super::client::{ChatClient, Role};
use super::parse;
use super::template::{TemplateDomain, TemplateRole, TemplateSet};
use super::LlmError;

const SYSTEM_PROMPT: &str = "Follow the requested output format exactly; reply with the single \
formatted line and nothing else.";

pub struct MathLlm {
    client: ChatClient,
    templates: TemplateSet,
    /// The word problem under consideration, rendered into every prompt.
    question: String,
}

impl MathLlm {
    pub fn new(client: ChatClient, templates: TemplateSet, question: impl Into<String>) -> Self {
        MathLlm {
            client,
            templates,
            question: question.into(),
        }
    }

    fn prompt(
        &self,
        role: TemplateRole,
        slots: &[(&str, &str)],
    ) -> Result<super::client::ChatExchange, AdapterError> {
        let template = self.templates.get(TemplateDomain::Math, role);
        let text = template
            .render(slots)
            .map_err(|e| AdapterError::failed(e.to_string()))?;
        let messages = vec![
            (Role::System, SYSTEM_PROMPT.to_string()),
            (Role::User, text),
        ];
        self.client
            .chat(&messages)
            .map_err(|e| AdapterError::failed(e.to_string()))
    }

    fn facts_text(facts: &FactSet) -> String {
        if facts.is_empty() {
            "(none yet)".to_string()
        } else {
            facts.key()
        }
    }
}

impl DomainAdapter for MathLlm {
    type State = FactSet;
    type Target = MathTarget;

    fn capability(&self) -> Capability {
        Capability::DagAccumulation
    }

    fn domain(&self) -> &'static str {
        "math-llm"
    }

    fn canonicalize_state(&self, state: FactSet) -> FactSet {
        state
    }

    fn canonicalize_target(&self, target: MathTarget) -> MathTarget {
        target
    }

    fn state_key(&self, state: &FactSet) -> String {
        state.key()
    }

    fn target_key(&self, target: &MathTarget) -> String {
        target.needed.clone()
    }

    fn render_state(&self, state: &FactSet) -> String {
        state.key()
    }

    fn render_target(&self, target: &MathTarget) -> String {
        target.needed.clone()
    }

    fn last_step(
        &self,
        facts: &FactSet,
        target: &MathTarget,
        _avoid: &AvoidView<'_>,
    ) -> Result<BackwardOutcome<MathTarget>, AdapterError> {
        let facts_text = Self::facts_text(facts);
        let slots = [
            ("background", self.question.as_str()),
            ("current_state", facts_text.as_str()),
            ("target_state", target.needed.as_str()),
        ];
        let exchange = self.prompt(TemplateRole::LastStep, &slots)?;
        let (needed, rationale) = parse::parse_need(&exchange.reply)
            .map_err(|e: LlmError| AdapterError::failed(e.to_string()))?;
        Ok(BackwardOutcome {
            target: MathTarget {
                needed,
                rationale: rationale.clone(),
            },
            note: rationale,
            grounded: false,
            req: Some(exchange.request_hash),
            raw: Some(exchange.reply),
        })
    }

    fn forward_step(
        &self,
        facts: &FactSet,
        target: &MathTarget,
        _avoid: &AvoidView<'_>,
    ) -> Result<ForwardOutcome<FactSet>, AdapterError> {
        let facts_text = Self::facts_text(facts);
        let slots = [
            ("background", self.question.as_str()),
            ("current_state", facts_text.as_str()),
            ("target_state", target.needed.as_str()),
        ];
        let exchange = self.prompt(TemplateRole::Forward, &slots)?;
        let (name, value) = parse::parse_fact(&exchange.reply)
            .map_err(|e| AdapterError::failed(e.to_string()))?;
        let note = format!("{name} = {}", render_rat(&value));
        Ok(ForwardOutcome {
            state: FactSet::from_pairs(vec![(name, value)]),
            note,
            req: Some(exchange.request_hash),
            raw: Some(exchange.reply),
        })
    }

    fn state_check(&self, facts: &FactSet, target: &MathTarget) -> Result<bool, AdapterError> {
        let facts_text = Self::facts_text(facts);
        let slots = [
            ("background", self.question.as_str()),
            ("current_state", facts_text.as_str()),
            ("target_state", target.needed.as_str()),
        ];
        let exchange = self.prompt(TemplateRole::StateCheck, &slots)?;
        parse::parse_verdict(&exchange.reply).map_err(|e| AdapterError::failed(e.to_string()))
    }

    fn output(&self, path: &SearchPath<'_, FactSet, MathTarget>) -> Result<String, AdapterError> {
        let facts_text = Self::facts_text(&path.frontier().state.payload);
        let slots = [
            ("background", self.question.as_str()),
            ("current_state", facts_text.as_str()),
            ("goal", path.goal.needed.as_str()),
        ];
        let exchange = self.prompt(TemplateRole::Output, &slots)?;
        parse::parse_answer(&exchange.reply).map_err(|e| AdapterError::failed(e.to_string()))
    }

    /// New facts merge in; a restated fact must keep its value, so
    /// accumulation stays monotone even against a drifting model.
    fn merge_facts(&self, base: &FactSet, delta: &FactSet) -> Result<FactSet, AdapterError> {
        let mut merged = base.clone();
        for (name, value) in delta.iter() {
            match merged.get(name) {
                Some(existing) if existing != value => {
                    return Err(AdapterError::failed(format!(
                        "model contradicted established fact {name}: {} vs {}",
                        render_rat(existing),
                        render_rat(value)
                    )));
                }
                _ => merged = merged.bind(name, value.clone()),
            }
        }
        Ok(merged)
    }

    fn target_attained(&self, facts: &FactSet, target: &MathTarget) -> Result<bool, AdapterError> {
        Ok(facts.contains(&target.needed))
    }
}
