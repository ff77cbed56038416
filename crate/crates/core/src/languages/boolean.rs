//! Compositional semantics of prefix boolean expressions.
//!
//! `⟦0⟧ = 0`, `⟦1⟧ = 1`, `⟦∧⟧ = λpq. p ∧ q`, `⟦∨⟧ = λpq. p ∨ q`, and an
//! operator applies to its arguments in order. An operator-only prefix
//! denotes the function obtained by composition, e.g. `⟦∨∨⟧ = λpqr. (p ∨ q) ∨ r`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoolOp {
    And,
    Or,
}

impl BoolOp {
    pub fn apply(self, p: bool, q: bool) -> bool {
        match self {
            BoolOp::And => p && q,
            BoolOp::Or => p || q,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            BoolOp::And => "∧",
            BoolOp::Or => "∨",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoolToken {
    Value(bool),
    Op(BoolOp),
}

impl BoolToken {
    pub fn parse(token: &str) -> Result<Self> {
        Ok(match token {
            "0" => BoolToken::Value(false),
            "1" => BoolToken::Value(true),
            "∧" => BoolToken::Op(BoolOp::And),
            "∨" => BoolToken::Op(BoolOp::Or),
            other => return Err(Error::UnknownSymbol(other.to_string())),
        })
    }
}

impl fmt::Display for BoolToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolToken::Value(v) => f.write_str(if *v { "1" } else { "0" }),
            BoolToken::Op(op) => f.write_str(op.token()),
        }
    }
}

/// A token sequence over `{0, 1, ∧, ∨}`; not necessarily well formed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BoolExpr(pub Vec<BoolToken>);

impl BoolExpr {
    pub fn parse<'a>(tokens: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        tokens
            .into_iter()
            .map(BoolToken::parse)
            .collect::<Result<_>>()
            .map(BoolExpr)
    }

    /// Parses one token per character, ignoring whitespace.
    pub fn parse_chars(text: &str) -> Result<Self> {
        let tokens: Vec<String> = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(String::from)
            .collect();
        Self::parse(tokens.iter().map(String::as_str))
    }

    /// Well formed iff the running `arity - 1` sum first reaches `-1` at the last token.
    pub fn is_well_formed(&self) -> bool {
        let mut depth: i64 = 0;
        for (t, tok) in self.0.iter().enumerate() {
            depth += match tok {
                BoolToken::Value(_) => -1,
                BoolToken::Op(_) => 1,
            };
            if depth == -1 && t + 1 != self.0.len() {
                return false;
            }
        }
        depth == -1
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Evaluates a well-formed expression right to left with a value stack.
fn eval_tokens(tokens: &[BoolToken], stack: &mut Vec<bool>) -> bool {
    stack.clear();
    for tok in tokens.iter().rev() {
        match *tok {
            BoolToken::Value(v) => stack.push(v),
            BoolToken::Op(op) => {
                let p = stack.pop().expect("well-formed expression");
                let q = stack.pop().expect("well-formed expression");
                stack.push(op.apply(p, q));
            }
        }
    }
    stack[0]
}

/// Value of a well-formed expression; ill-formed input is a syntax error.
pub fn bool_eval(expr: &BoolExpr) -> Result<bool> {
    if !expr.is_well_formed() {
        return Err(Error::Syntax(format!(
            "`{expr}` is not a well-formed expression"
        )));
    }
    Ok(eval_tokens(&expr.0, &mut Vec::with_capacity(expr.0.len())))
}

/// A boolean function of `arity` arguments as a packed truth table.
///
/// Bit `idx` holds the output when argument `j` equals bit `j` of `idx`, so
/// ordering assignments by `idx` reads them right to left: the last argument
/// is the most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrefixFunction {
    arity: usize,
    table: Vec<u64>,
}

impl PrefixFunction {
    pub fn from_fn(arity: usize, mut f: impl FnMut(&[bool]) -> bool) -> Self {
        let rows = 1usize << arity;
        let mut table = vec![0u64; rows.div_ceil(64)];
        let mut args = vec![false; arity];
        for idx in 0..rows {
            for (j, a) in args.iter_mut().enumerate() {
                *a = (idx >> j) & 1 == 1;
            }
            if f(&args) {
                table[idx / 64] |= 1 << (idx % 64);
            }
        }
        Self { arity, table }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn row(&self, idx: usize) -> bool {
        (self.table[idx / 64] >> (idx % 64)) & 1 == 1
    }

    pub fn eval(&self, args: &[bool]) -> bool {
        assert_eq!(args.len(), self.arity, "argument count");
        let idx = args
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, &b)| acc | (usize::from(b) << j));
        self.row(idx)
    }

    /// Smallest satisfying assignment index in right-to-left order, if any.
    pub fn min_satisfying(&self) -> Option<usize> {
        self.table
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }
}

/// The `(p+1)`-ary function denoted by an operator-only prefix of length `p`.
///
/// Computed by appending every value suffix of length `p + 1` and evaluating.
pub fn prefix_function(ops: &[BoolOp]) -> PrefixFunction {
    let p = ops.len();
    let mut tokens: Vec<BoolToken> = ops.iter().map(|&op| BoolToken::Op(op)).collect();
    tokens.resize(2 * p + 1, BoolToken::Value(false));
    let mut stack = Vec::with_capacity(p + 1);
    PrefixFunction::from_fn(p + 1, |args| {
        for (slot, &a) in tokens[p..].iter_mut().zip(args) {
            *slot = BoolToken::Value(a);
        }
        eval_tokens(&tokens, &mut stack)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expr(text: &str) -> BoolExpr {
        BoolExpr::parse_chars(text).unwrap()
    }

    #[test]
    fn evaluates_examples() {
        assert!(bool_eval(&expr("∨01")).unwrap());
        assert!(!bool_eval(&expr("0")).unwrap());
        assert!(bool_eval(&expr("1")).unwrap());
        assert!(!bool_eval(&expr("∧∨010")).unwrap());
    }

    #[test]
    fn ill_formed_is_a_syntax_error() {
        for text in ["", "∨0", "01", "01∨", "∧"] {
            assert!(
                matches!(bool_eval(&expr(text)), Err(Error::Syntax(_))),
                "{text}"
            );
        }
        assert!(BoolExpr::parse(["0", "x"]).is_err());
    }

    #[test]
    fn empty_prefix_is_identity() {
        let f = prefix_function(&[]);
        assert_eq!(f.arity(), 1);
        assert!(!f.eval(&[false]));
        assert!(f.eval(&[true]));
    }

    #[test]
    fn two_ors_give_three_way_or() {
        let f = prefix_function(&[BoolOp::Or, BoolOp::Or]);
        assert_eq!(f, PrefixFunction::from_fn(3, |x| x[0] || x[1] || x[2]));
    }

    #[test]
    fn and_over_or_nests_left() {
        // ∧ ∨ p q r = ∧(∨(p, q), r)
        let f = prefix_function(&[BoolOp::And, BoolOp::Or]);
        assert_eq!(f, PrefixFunction::from_fn(3, |x| (x[0] || x[1]) && x[2]));
        assert_ne!(f, PrefixFunction::from_fn(3, |x| x[0] && (x[1] || x[2])));
    }

    #[test]
    fn minimal_assignment() {
        let f = prefix_function(&[BoolOp::And]);
        assert_eq!(f.min_satisfying(), Some(0b11));
        let g = prefix_function(&[BoolOp::Or]);
        assert_eq!(g.min_satisfying(), Some(0b01));
        assert_eq!(PrefixFunction::from_fn(2, |_| false).min_satisfying(), None);
    }
}
