//! Synthetic multi-step arithmetic problems with known DAG structure: the
//! accumulation engine's deterministic test bed, plus file formats for
//! structured and GSM8K-style records.

mod generate;
mod io;
mod oracle;
mod problem;

pub use generate::{generate_problem, TEMPLATE_VERSION};
pub use io::{gsm_final_answer, load_problems, save_problems, MathRecord};
pub use oracle::{dag_state_check, DagOracle, FactSet, MathTarget};
pub use problem::{BinOp, DagProblem, VarDef};
