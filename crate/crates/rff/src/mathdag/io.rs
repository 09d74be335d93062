//! Problem files: one JSON record per line. Structured records carry the
//! full DAG; GSM8K-format records (`question` text plus an answer ending in
//! `#### <number>`) are accepted for runs backed by text adapters.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::game24::{parse_rat, render_rat};

use super::problem::{BinOp, DagProblem, VarDef};

#[derive(Serialize, Deserialize)]
struct VarRecord {
    name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    lit: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    op: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct ProblemRecord {
    vars: Vec<VarRecord>,
    goal: String,
    depth: usize,
    answer: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    text: Option<String>,
}

#[derive(Deserialize)]
struct GsmRecord {
    question: String,
    answer: String,
}

/// One loaded record: a structured DAG problem or a free-text one.
#[derive(Clone, Debug)]
pub enum MathRecord {
    Dag(DagProblem),
    Text {
        question: String,
        /// The `####`-terminated final answer, already extracted.
        answer: String,
    },
}

fn op_symbol(op: BinOp) -> String {
    op.symbol().to_string()
}

fn op_from(symbol: &str) -> Result<BinOp, String> {
    match symbol {
        "+" => Ok(BinOp::Add),
        "-" => Ok(BinOp::Sub),
        "*" => Ok(BinOp::Mul),
        "/" => Ok(BinOp::Div),
        other => Err(format!("unknown operator {other:?}")),
    }
}

fn to_record(problem: &DagProblem) -> ProblemRecord {
    ProblemRecord {
        vars: problem
            .vars
            .iter()
            .map(|(name, def)| match def {
                VarDef::Literal(v) => VarRecord {
                    name: name.clone(),
                    lit: Some(render_rat(v)),
                    op: None,
                    a: None,
                    b: None,
                },
                VarDef::Op(op, a, b) => VarRecord {
                    name: name.clone(),
                    lit: None,
                    op: Some(op_symbol(*op)),
                    a: Some(a.clone()),
                    b: Some(b.clone()),
                },
            })
            .collect(),
        goal: problem.goal.clone(),
        depth: problem.depth,
        answer: render_rat(&problem.ground_truth),
        text: problem.surface_text.clone(),
    }
}

fn from_record(record: ProblemRecord) -> Result<DagProblem, String> {
    let mut vars = Vec::new();
    for v in record.vars {
        let def = match (v.lit, v.op, v.a, v.b) {
            (Some(lit), None, None, None) => {
                VarDef::Literal(parse_rat(&lit).ok_or_else(|| format!("bad literal {lit:?}"))?)
            }
            (None, Some(op), Some(a), Some(b)) => VarDef::Op(op_from(&op)?, a, b),
            _ => return Err(format!("malformed definition for {}", v.name)),
        };
        vars.push((v.name, def));
    }
    let problem = DagProblem {
        vars,
        goal: record.goal,
        depth: record.depth,
        ground_truth: parse_rat(&record.answer)
            .ok_or_else(|| format!("bad answer {:?}", record.answer))?,
        surface_text: record.text,
    };
    problem.validate()?;
    Ok(problem)
}

pub fn save_problems(path: &Path, problems: &[DagProblem]) -> Result<(), String> {
    let mut out = String::new();
    for p in problems {
        let line = serde_json::to_string(&to_record(p)).map_err(|e| e.to_string())?;
        out.push_str(&line);
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| format!("write {}: {e}", path.display()))
}

/// Extracts the final answer from a GSM8K-style solution: the text after
/// the last `####` marker, commas stripped.
pub fn gsm_final_answer(answer: &str) -> Option<String> {
    let tail = answer.rsplit("####").next()?;
    let cleaned: String = tail.trim().replace(',', "");
    if cleaned.is_empty() {
        None
    } else {
        Some(cleaned)
    }
}

pub fn load_problems(path: &Path) -> Result<Vec<MathRecord>, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("read {}: {e}", path.display()))?;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value =
            serde_json::from_str(line).map_err(|e| format!("line {}: {e}", idx + 1))?;
        if value.get("vars").is_some() {
            let record: ProblemRecord =
                serde_json::from_value(value).map_err(|e| format!("line {}: {e}", idx + 1))?;
            out.push(MathRecord::Dag(from_record(record).map_err(|e| {
                format!("line {}: {e}", idx + 1)
            })?));
        } else if value.get("question").is_some() {
            let record: GsmRecord =
                serde_json::from_value(value).map_err(|e| format!("line {}: {e}", idx + 1))?;
            let answer = gsm_final_answer(&record.answer)
                .ok_or_else(|| format!("line {}: no #### answer", idx + 1))?;
            out.push(MathRecord::Text {
                question: record.question,
                answer,
            });
        } else {
            return Err(format!("line {}: unrecognized record shape", idx + 1));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::generate::generate_problem;
    use super::*;

    #[test]
    fn structured_records_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("problems.jsonl");
        let problems: Vec<DagProblem> =
            (0..5).map(|s| generate_problem(s, 4, 3)).collect();
        save_problems(&path, &problems).unwrap();
        let loaded = load_problems(&path).unwrap();
        assert_eq!(loaded.len(), 5);
        for (orig, rec) in problems.iter().zip(loaded) {
            match rec {
                MathRecord::Dag(p) => assert_eq!(&p, orig),
                MathRecord::Text { .. } => panic!("expected structured record"),
            }
        }
    }

    #[test]
    fn gsm_records_are_accepted() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gsm.jsonl");
        std::fs::write(
            &path,
            "{\"question\":\"Tom has 3 boxes of 4 pens. How many pens?\",\
             \"answer\":\"3*4=12\\n#### 12\"}\n",
        )
        .unwrap();
        let loaded = load_problems(&path).unwrap();
        match &loaded[0] {
            MathRecord::Text { question, answer } => {
                assert!(question.starts_with("Tom"));
                assert_eq!(answer, "12");
            }
            MathRecord::Dag(_) => panic!("expected text record"),
        }
    }

    #[test]
    fn comma_grouped_answers_are_cleaned() {
        assert_eq!(gsm_final_answer("x\n#### 1,234").unwrap(), "1234");
        assert!(gsm_final_answer("no marker").is_some());
        assert!(gsm_final_answer("").is_none());
    }
}
