use num::Zero;

use super::set::NumberSet;
use super::value::{parse_rat, render_rat, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

impl Op {
    pub fn symbol(self) -> char {
        match self {
            Op::Add => '+',
            Op::Sub => '-',
            Op::Mul => '*',
            Op::Div => '/',
        }
    }

    /// Binding strength for expression formatting.
    pub fn precedence(self) -> u8 {
        match self {
            Op::Add | Op::Sub => 1,
            Op::Mul | Op::Div => 2,
        }
    }

    pub fn apply(self, lhs: &Rat, rhs: &Rat) -> Option<Rat> {
        match self {
            Op::Add => Some(lhs + rhs),
            Op::Sub => Some(lhs - rhs),
            Op::Mul => Some(lhs * rhs),
            Op::Div => {
                if rhs.is_zero() {
                    None
                } else {
                    Some(lhs / rhs)
                }
            }
        }
    }
}

/// One exact arithmetic step: `lhs op rhs = result`, with the result stored
/// so a move is checkable in isolation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArithMove {
    pub lhs: Rat,
    pub op: Op,
    pub rhs: Rat,
    pub result: Rat,
}

impl ArithMove {
    /// None on division by zero.
    pub fn new(lhs: Rat, op: Op, rhs: Rat) -> Option<ArithMove> {
        let result = op.apply(&lhs, &rhs)?;
        Some(ArithMove {
            lhs,
            op,
            rhs,
            result,
        })
    }

    /// The stored result matches the operands exactly.
    pub fn is_exact(&self) -> bool {
        self.op.apply(&self.lhs, &self.rhs).as_ref() == Some(&self.result)
    }

    pub fn render(&self) -> String {
        format!(
            "{} {} {} = {}",
            render_rat(&self.lhs),
            self.op.symbol(),
            render_rat(&self.rhs),
            render_rat(&self.result)
        )
    }

    /// Parses `a op b = c`. Operands may be rationals (`n/d`), so the spaced
    /// form is authoritative; unspaced integer forms like `12+12=24` are
    /// accepted as well.
    pub fn parse(text: &str) -> Option<ArithMove> {
        let text = text.trim();
        let (expr, result) = text.split_once('=')?;
        let result = parse_rat(result.trim())?;
        let expr = expr.trim();
        // spaced operators first: unambiguous even with fractional operands
        for (pat, op) in [
            (" + ", Op::Add),
            (" - ", Op::Sub),
            (" * ", Op::Mul),
            (" / ", Op::Div),
            ("+", Op::Add),
            ("*", Op::Mul),
            ("/", Op::Div),
            ("-", Op::Sub),
        ] {
            let mut start = 0;
            while let Some(pos) = expr[start..].find(pat) {
                let at = start + pos;
                if at == 0 {
                    // leading sign, not an operator
                    start = at + pat.len();
                    continue;
                }
                let lhs = expr[..at].trim();
                let rhs = expr[at + pat.len()..].trim();
                if let (Some(l), Some(r)) = (parse_rat(lhs), parse_rat(rhs)) {
                    let candidate = ArithMove {
                        lhs: l,
                        op,
                        rhs: r,
                        result: result.clone(),
                    };
                    return Some(candidate);
                }
                start = at + pat.len();
            }
        }
        None
    }
}

/// Every legal move on a multiset, in canonical order: operators major
/// (`b/a`, `a/b`, `a*b`, `b-a`, `a-b`, `a+b`), value pairs `(a, b)` with
/// `a <= b` by sorted position minor, duplicate value pairs enumerated
/// once. Division and multiplication lead because they produce the values
/// additive moves cannot, which keeps tie-broken searches away from long
/// runs of interchangeable sums.
pub fn legal_moves(set: &NumberSet) -> Vec<(ArithMove, NumberSet)> {
    let values = set.values();
    let mut pairs: Vec<(Rat, Rat, NumberSet)> = Vec::new();
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            let a = values[i].clone();
            let b = values[j].clone();
            if pairs.iter().any(|(x, y, _)| *x == a && *y == b) {
                continue;
            }
            let rest = set
                .remove_two(&a, &b)
                .expect("both operands come from the set");
            pairs.push((a, b, rest));
        }
    }
    let mut out = Vec::new();
    let ops: [(bool, Op); 6] = [
        (true, Op::Div),
        (false, Op::Div),
        (false, Op::Mul),
        (true, Op::Sub),
        (false, Op::Sub),
        (false, Op::Add),
    ];
    for (flipped, op) in ops {
        for (a, b, rest) in &pairs {
            let (lhs, rhs) = if flipped { (b, a) } else { (a, b) };
            if let Some(m) = ArithMove::new(lhs.clone(), op, rhs.clone()) {
                let new = rest.insert(m.result.clone());
                out.push((m, new));
            }
        }
    }
    out
}
