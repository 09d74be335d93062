use std::collections::BTreeMap;

use num::Zero;

use crate::game24::{render_rat, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }

    pub fn phrase(self) -> &'static str {
        match self {
            BinOp::Add => "the sum of",
            BinOp::Sub => "the difference between",
            BinOp::Mul => "the product of",
            BinOp::Div => "the quotient of",
        }
    }

    pub fn apply(self, a: &Rat, b: &Rat) -> Result<Rat, String> {
        match self {
            BinOp::Add => Ok(a + b),
            BinOp::Sub => Ok(a - b),
            BinOp::Mul => Ok(a * b),
            BinOp::Div => {
                if b.is_zero() {
                    Err("division by zero".to_string())
                } else {
                    Ok(a / b)
                }
            }
        }
    }
}

/// How one variable is defined: a literal, or an operation over two
/// earlier variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarDef {
    Literal(Rat),
    Op(BinOp, String, String),
}

/// A synthetic multi-step arithmetic problem whose solution structure is a
/// known DAG: every definition references only earlier variables.
///
/// `depth` is the length in nodes of the longest dependency chain ending at
/// the goal (a literal goal has depth 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DagProblem {
    pub vars: Vec<(String, VarDef)>,
    pub goal: String,
    pub depth: usize,
    pub ground_truth: Rat,
    pub surface_text: Option<String>,
}

impl DagProblem {
    pub fn def_of(&self, name: &str) -> Option<&VarDef> {
        self.vars
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, def)| def)
    }

    pub fn position_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|(n, _)| n == name)
    }

    /// Definitions form a DAG over earlier names and the goal is defined.
    pub fn validate(&self) -> Result<(), String> {
        let mut seen: Vec<&str> = Vec::new();
        for (name, def) in &self.vars {
            if seen.contains(&name.as_str()) {
                return Err(format!("duplicate definition of {name}"));
            }
            if let VarDef::Op(_, a, b) = def {
                for dep in [a, b] {
                    if !seen.contains(&dep.as_str()) {
                        return Err(format!("{name} references {dep} before definition"));
                    }
                }
            }
            seen.push(name);
        }
        if self.def_of(&self.goal).is_none() {
            return Err(format!("goal {} is not defined", self.goal));
        }
        Ok(())
    }

    /// Evaluates every variable in definition order.
    pub fn evaluate_all(&self) -> Result<BTreeMap<String, Rat>, String> {
        let mut bound: BTreeMap<String, Rat> = BTreeMap::new();
        for (name, def) in &self.vars {
            let value = match def {
                VarDef::Literal(v) => v.clone(),
                VarDef::Op(op, a, b) => {
                    let va = bound.get(a).ok_or_else(|| format!("{a} unbound"))?;
                    let vb = bound.get(b).ok_or_else(|| format!("{b} unbound"))?;
                    op.apply(va, vb)?
                }
            };
            bound.insert(name.clone(), value);
        }
        Ok(bound)
    }

    /// Independent answer: topological evaluation of the goal.
    pub fn evaluate_goal(&self) -> Result<Rat, String> {
        self.evaluate_all()?
            .remove(&self.goal)
            .ok_or_else(|| "goal missing".to_string())
    }

    /// Longest dependency chain (in nodes) ending at `name`.
    pub fn chain_depth(&self, name: &str) -> usize {
        match self.def_of(name) {
            None => 0,
            Some(VarDef::Literal(_)) => 1,
            Some(VarDef::Op(_, a, b)) => 1 + self.chain_depth(a).max(self.chain_depth(b)),
        }
    }

    /// Renders one definition, the explicit transition text for targets.
    pub fn render_def(&self, name: &str) -> String {
        match self.def_of(name) {
            None => format!("{name} is undefined"),
            Some(VarDef::Literal(v)) => format!("{name} = {}", render_rat(v)),
            Some(VarDef::Op(op, a, b)) => format!("{name} = {a} {} {b}", op.symbol()),
        }
    }
}
