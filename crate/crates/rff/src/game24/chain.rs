//! Move-chain validation and expression rendering.

use super::moves::{ArithMove, Op};
use super::set::NumberSet;
use super::value::{parse_rat, render_rat, Rat};

/// Verdict of [`verify_chain`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainCheck {
    Valid,
    /// 1-based index of the deepest invalid step. An incomplete chain or a
    /// wrong final value blames the last step.
    InvalidAt(usize),
}

/// Replays `moves` against `original` in exact arithmetic. Valid iff every
/// operand is consumed from the live multiset (so each original number is
/// used exactly once across the chain), every stated result is exact, and
/// the chain ends with the single value `goal`.
pub fn verify_chain(moves: &[ArithMove], original: &NumberSet, goal: &Rat) -> ChainCheck {
    let mut current = original.clone();
    for (idx, m) in moves.iter().enumerate() {
        let step = idx + 1;
        if !m.is_exact() {
            return ChainCheck::InvalidAt(step);
        }
        match current.remove_two(&m.lhs, &m.rhs) {
            Some(rest) => current = rest.insert(m.result.clone()),
            None => return ChainCheck::InvalidAt(step),
        }
    }
    if current.len() == 1 && current.values()[0] == *goal {
        ChainCheck::Valid
    } else {
        ChainCheck::InvalidAt(moves.len().max(1))
    }
}

/// A value with its rendered expression, carried through folds so the final
/// text needs no re-derivation.
#[derive(Clone, Debug)]
pub struct ExprPiece {
    pub value: Rat,
    pub text: String,
    prec: u8,
}

impl ExprPiece {
    pub fn leaf(value: &Rat) -> ExprPiece {
        ExprPiece {
            value: value.clone(),
            text: render_rat(value),
            prec: 3,
        }
    }

    /// Combines two pieces with minimal parenthesization. None on division
    /// by zero.
    pub fn combine(lhs: &ExprPiece, op: Op, rhs: &ExprPiece) -> Option<ExprPiece> {
        let value = op.apply(&lhs.value, &rhs.value)?;
        let p = op.precedence();
        let left = if lhs.prec < p {
            format!("({})", lhs.text)
        } else {
            lhs.text.clone()
        };
        // subtraction and division need parens around same-precedence
        // right operands: a-(b-c), a/(b*c)
        let right = if rhs.prec < p || (rhs.prec == p && matches!(op, Op::Sub | Op::Div)) {
            format!("({})", rhs.text)
        } else {
            rhs.text.clone()
        };
        Some(ExprPiece {
            value,
            text: format!("{}{}{}", left, op.symbol(), right),
            prec: p,
        })
    }
}

/// Folds a verified chain into a single parenthesized infix expression over
/// the original numbers. An empty chain over a singleton renders the lone
/// number.
pub fn format_solution(moves: &[ArithMove], original: &NumberSet) -> Result<String, String> {
    let mut pieces: Vec<ExprPiece> = original.values().iter().map(ExprPiece::leaf).collect();
    for m in moves {
        let i = pieces
            .iter()
            .position(|p| p.value == m.lhs)
            .ok_or_else(|| format!("operand {} not live", render_rat(&m.lhs)))?;
        let lhs = pieces.remove(i);
        let j = pieces
            .iter()
            .position(|p| p.value == m.rhs)
            .ok_or_else(|| format!("operand {} not live", render_rat(&m.rhs)))?;
        let rhs = pieces.remove(j);
        let piece =
            ExprPiece::combine(&lhs, m.op, &rhs).ok_or_else(|| "division by zero".to_string())?;
        pieces.push(piece);
    }
    match pieces.len() {
        1 => Ok(pieces.pop().expect("just checked").text),
        n => Err(format!("chain leaves {n} values unconsumed")),
    }
}

/// Evaluates an infix expression with `+ - * /`, parentheses, and integer
/// leaves; returns the exact value and the leaf multiset. The independent
/// check that rendered solutions really use each number once and reach the
/// goal.
pub fn eval_expression(text: &str) -> Result<(Rat, NumberSet), String> {
    let (value, leaves, _) = expression_chain(text)?;
    Ok((value, leaves))
}

/// Like [`eval_expression`], but also returns the expression folded into a
/// move chain (post-order), so a free-text solution can be replayed through
/// [`verify_chain`].
pub fn expression_chain(text: &str) -> Result<(Rat, NumberSet, Vec<ArithMove>), String> {
    struct Parser<'a> {
        chars: std::iter::Peekable<std::str::Chars<'a>>,
        leaves: Vec<Rat>,
        moves: Vec<ArithMove>,
    }

    impl Parser<'_> {
        fn skip_ws(&mut self) {
            while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
                self.chars.next();
            }
        }

        fn apply(&mut self, lhs: Rat, op: Op, rhs: Rat) -> Result<Rat, String> {
            let m = ArithMove::new(lhs, op, rhs).ok_or("division by zero")?;
            let result = m.result.clone();
            self.moves.push(m);
            Ok(result)
        }

        fn expr(&mut self) -> Result<Rat, String> {
            let mut acc = self.term()?;
            loop {
                self.skip_ws();
                match self.chars.peek() {
                    Some('+') => {
                        self.chars.next();
                        let rhs = self.term()?;
                        acc = self.apply(acc, Op::Add, rhs)?;
                    }
                    Some('-') => {
                        self.chars.next();
                        let rhs = self.term()?;
                        acc = self.apply(acc, Op::Sub, rhs)?;
                    }
                    _ => return Ok(acc),
                }
            }
        }

        fn term(&mut self) -> Result<Rat, String> {
            let mut acc = self.factor()?;
            loop {
                self.skip_ws();
                match self.chars.peek() {
                    Some('*') => {
                        self.chars.next();
                        let rhs = self.factor()?;
                        acc = self.apply(acc, Op::Mul, rhs)?;
                    }
                    Some('/') => {
                        self.chars.next();
                        let rhs = self.factor()?;
                        acc = self.apply(acc, Op::Div, rhs)?;
                    }
                    _ => return Ok(acc),
                }
            }
        }

        fn factor(&mut self) -> Result<Rat, String> {
            self.skip_ws();
            match self.chars.peek() {
                Some('(') => {
                    self.chars.next();
                    let v = self.expr()?;
                    self.skip_ws();
                    if self.chars.next() != Some(')') {
                        return Err("missing closing paren".to_string());
                    }
                    Ok(v)
                }
                Some(c) if c.is_ascii_digit() => {
                    let mut digits = String::new();
                    while self.chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                        digits.push(self.chars.next().expect("peeked"));
                    }
                    let v = parse_rat(&digits).ok_or("bad number")?;
                    self.leaves.push(v.clone());
                    Ok(v)
                }
                other => Err(format!("unexpected token {other:?}")),
            }
        }
    }

    let mut p = Parser {
        chars: text.chars().peekable(),
        leaves: Vec::new(),
        moves: Vec::new(),
    };
    let value = p.expr()?;
    p.skip_ws();
    if p.chars.next().is_some() {
        return Err("trailing input".to_string());
    }
    Ok((value, NumberSet::from_values(p.leaves), p.moves))
}

#[cfg(test)]
mod tests {
    use super::super::value::rat;
    use super::*;

    fn mv(text: &str) -> ArithMove {
        ArithMove::parse(text).unwrap()
    }

    #[test]
    fn valid_chain_uses_each_number_once() {
        let original = NumberSet::from_ints(&[1, 2, 12, 12]);
        let chain = [mv("12+12=24"), mv("2-1=1"), mv("24*1=24")];
        assert_eq!(verify_chain(&chain, &original, &rat(24)), ChainCheck::Valid);
    }

    #[test]
    fn unused_numbers_invalidate_the_final_step() {
        let original = NumberSet::from_ints(&[4, 6, 1, 1]);
        let chain = [mv("4*6=24")];
        assert_eq!(
            verify_chain(&chain, &original, &rat(24)),
            ChainCheck::InvalidAt(1)
        );
    }

    #[test]
    fn false_arithmetic_is_blamed_at_its_step() {
        let original = NumberSet::from_ints(&[3, 7, 1, 1]);
        let chain = [mv("1*1=1"), mv("3*7=22")];
        assert_eq!(
            verify_chain(&chain, &original, &rat(24)),
            ChainCheck::InvalidAt(2)
        );
    }

    #[test]
    fn solution_formats_with_minimal_parens() {
        let original = NumberSet::from_ints(&[1, 2, 12, 12]);
        let chain = [mv("12+12=24"), mv("2-1=1"), mv("24*1=24")];
        let expr = format_solution(&chain, &original).unwrap();
        assert_eq!(expr, "(12+12)*(2-1)");
        let (value, leaves) = eval_expression(&expr).unwrap();
        assert_eq!(value, rat(24));
        assert_eq!(leaves.key(), original.key());
    }

    #[test]
    fn singleton_chain_renders_the_number() {
        let original = NumberSet::from_ints(&[24]);
        assert_eq!(verify_chain(&[], &original, &rat(24)), ChainCheck::Valid);
        assert_eq!(format_solution(&[], &original).unwrap(), "24");
    }

    #[test]
    fn two_number_solution_needs_no_parens() {
        let original = NumberSet::from_ints(&[4, 6]);
        let chain = [mv("4*6=24")];
        assert_eq!(format_solution(&chain, &original).unwrap(), "4*6");
    }
}
