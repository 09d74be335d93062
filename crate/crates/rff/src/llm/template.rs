//! Prompt templates with named slots, one per (role, domain). Built-in
//! templates are compiled in; a directory of `<domain>_<role>.txt` files
//! can override any of them at run time.

use std::collections::BTreeMap;
use std::path::Path;

use super::LlmError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TemplateRole {
    LastStep,
    Forward,
    StateCheck,
    Verify,
    Output,
}

impl TemplateRole {
    pub fn tag(self) -> &'static str {
        match self {
            TemplateRole::LastStep => "last_step",
            TemplateRole::Forward => "forward",
            TemplateRole::StateCheck => "state_check",
            TemplateRole::Verify => "verify",
            TemplateRole::Output => "output",
        }
    }

    const ALL: [TemplateRole; 5] = [
        TemplateRole::LastStep,
        TemplateRole::Forward,
        TemplateRole::StateCheck,
        TemplateRole::Verify,
        TemplateRole::Output,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TemplateDomain {
    Game24,
    Math,
}

impl TemplateDomain {
    pub fn tag(self) -> &'static str {
        match self {
            TemplateDomain::Game24 => "game24",
            TemplateDomain::Math => "math",
        }
    }
}

/// Slots the engine fills for each (role, domain); a template missing one
/// of these is rejected at load time.
fn required_slots(role: TemplateRole, domain: TemplateDomain) -> &'static [&'static str] {
    use TemplateDomain::*;
    use TemplateRole::*;
    match (domain, role) {
        (Game24, LastStep) | (Game24, Forward) => {
            &["current_state", "target_state", "avoid_list"]
        }
        (Game24, StateCheck) => &["current_state", "target_state"],
        (Game24, Verify) | (Game24, Output) => &["input", "goal", "path"],
        (Math, LastStep) | (Math, Forward) | (Math, StateCheck) => {
            &["background", "current_state", "target_state"]
        }
        (Math, Verify) => &["background", "path"],
        (Math, Output) => &["background", "current_state", "goal"],
    }
}

#[derive(Clone, Debug)]
pub struct PromptTemplate {
    pub role: TemplateRole,
    pub domain: TemplateDomain,
    pub text: String,
}

impl PromptTemplate {
    /// Substitutes `{name}` slots. Filling an unknown slot is ignored;
    /// leaving a required slot unfilled is an error.
    pub fn render(&self, slots: &[(&str, &str)]) -> Result<String, LlmError> {
        let mut out = self.text.clone();
        for (name, value) in slots {
            out = out.replace(&format!("{{{name}}}"), value);
        }
        for required in required_slots(self.role, self.domain) {
            let marker = format!("{{{required}}}");
            if out.contains(&marker) {
                return Err(LlmError::Parse(format!(
                    "slot {required} left unfilled in {}_{} template",
                    self.domain.tag(),
                    self.role.tag()
                )));
            }
        }
        Ok(out)
    }

    fn validate(&self) -> Result<(), LlmError> {
        for required in required_slots(self.role, self.domain) {
            if !self.text.contains(&format!("{{{required}}}")) {
                return Err(LlmError::Parse(format!(
                    "template {}_{} lacks required slot {required}",
                    self.domain.tag(),
                    self.role.tag()
                )));
            }
        }
        Ok(())
    }
}

/// All templates for both domains.
#[derive(Clone, Debug)]
pub struct TemplateSet {
    map: BTreeMap<(TemplateDomain, TemplateRole), PromptTemplate>,
}

impl TemplateSet {
    /// The compiled-in set.
    pub fn builtin() -> TemplateSet {
        let texts: [(&str, TemplateDomain, TemplateRole); 10] = [
            (
                include_str!("../../templates/game24_last_step.txt"),
                TemplateDomain::Game24,
                TemplateRole::LastStep,
            ),
            (
                include_str!("../../templates/game24_forward.txt"),
                TemplateDomain::Game24,
                TemplateRole::Forward,
            ),
            (
                include_str!("../../templates/game24_state_check.txt"),
                TemplateDomain::Game24,
                TemplateRole::StateCheck,
            ),
            (
                include_str!("../../templates/game24_verify.txt"),
                TemplateDomain::Game24,
                TemplateRole::Verify,
            ),
            (
                include_str!("../../templates/game24_output.txt"),
                TemplateDomain::Game24,
                TemplateRole::Output,
            ),
            (
                include_str!("../../templates/math_last_step.txt"),
                TemplateDomain::Math,
                TemplateRole::LastStep,
            ),
            (
                include_str!("../../templates/math_forward.txt"),
                TemplateDomain::Math,
                TemplateRole::Forward,
            ),
            (
                include_str!("../../templates/math_state_check.txt"),
                TemplateDomain::Math,
                TemplateRole::StateCheck,
            ),
            (
                include_str!("../../templates/math_verify.txt"),
                TemplateDomain::Math,
                TemplateRole::Verify,
            ),
            (
                include_str!("../../templates/math_output.txt"),
                TemplateDomain::Math,
                TemplateRole::Output,
            ),
        ];
        let mut map = BTreeMap::new();
        for (text, domain, role) in texts {
            let template = PromptTemplate {
                role,
                domain,
                text: text.to_string(),
            };
            template.validate().expect("built-in templates are valid");
            map.insert((domain, role), template);
        }
        TemplateSet { map }
    }

    /// Overrides templates from `<domain>_<role>.txt` files in `dir`;
    /// missing files keep the built-in text.
    pub fn load_dir(mut self, dir: &Path) -> Result<TemplateSet, LlmError> {
        for domain in [TemplateDomain::Game24, TemplateDomain::Math] {
            for role in TemplateRole::ALL {
                let path = dir.join(format!("{}_{}.txt", domain.tag(), role.tag()));
                if !path.exists() {
                    continue;
                }
                let text = std::fs::read_to_string(&path).map_err(|e| {
                    LlmError::Parse(format!("read {}: {e}", path.display()))
                })?;
                let template = PromptTemplate { role, domain, text };
                template.validate()?;
                self.map.insert((domain, role), template);
            }
        }
        Ok(self)
    }

    pub fn get(&self, domain: TemplateDomain, role: TemplateRole) -> &PromptTemplate {
        self.map
            .get(&(domain, role))
            .expect("the set always holds every (domain, role) template")
    }
}
