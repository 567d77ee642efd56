//! Two-input Boolean connectives and the expression trees built from them.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// The ten binary connectives whose output depends on both arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Connective {
    #[serde(rename = "AND")]
    And,
    #[serde(rename = "OR")]
    Or,
    #[serde(rename = "XOR")]
    Xor,
    #[serde(rename = "NAND")]
    Nand,
    #[serde(rename = "NOR")]
    Nor,
    #[serde(rename = "XNOR")]
    Xnor,
    /// a ∧ ¬b
    #[serde(rename = "A_AND_NOT_B")]
    AndNot,
    /// ¬a ∧ b
    #[serde(rename = "NOT_A_AND_B")]
    NotAnd,
    /// a ∨ ¬b
    #[serde(rename = "A_OR_NOT_B")]
    OrNot,
    /// ¬a ∨ b
    #[serde(rename = "NOT_A_OR_B")]
    NotOr,
}

impl Connective {
    pub const ALL: [Connective; 10] = [
        Connective::And,
        Connective::Or,
        Connective::Xor,
        Connective::Nand,
        Connective::Nor,
        Connective::Xnor,
        Connective::AndNot,
        Connective::NotAnd,
        Connective::OrNot,
        Connective::NotOr,
    ];

    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            Connective::And => a && b,
            Connective::Or => a || b,
            Connective::Xor => a != b,
            Connective::Nand => !(a && b),
            Connective::Nor => !(a || b),
            Connective::Xnor => a == b,
            Connective::AndNot => a && !b,
            Connective::NotAnd => !a && b,
            Connective::OrNot => a || !b,
            Connective::NotOr => !a || b,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Connective::And => "AND",
            Connective::Or => "OR",
            Connective::Xor => "XOR",
            Connective::Nand => "NAND",
            Connective::Nor => "NOR",
            Connective::Xnor => "XNOR",
            Connective::AndNot => "A_AND_NOT_B",
            Connective::NotAnd => "NOT_A_AND_B",
            Connective::OrNot => "A_OR_NOT_B",
            Connective::NotOr => "NOT_A_OR_B",
        }
    }
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Neuron structure: leaves index the feature pool, gates apply a connective.
///
/// Serialized as a bare integer for a leaf and `["AND", left, right]` for a gate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Expr {
    Leaf(usize),
    Gate(Connective, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn gate(op: Connective, left: Expr, right: Expr) -> Self {
        Expr::Gate(op, Box::new(left), Box::new(right))
    }

    pub fn eval(&self, inputs: &[bool]) -> bool {
        match self {
            Expr::Leaf(i) => inputs[*i],
            Expr::Gate(op, a, b) => op.apply(a.eval(inputs), b.eval(inputs)),
        }
    }

    /// Evaluates over whole pool columns at once.
    pub fn eval_columns(&self, columns: &[&[bool]]) -> Vec<bool> {
        match self {
            Expr::Leaf(i) => columns[*i].to_vec(),
            Expr::Gate(op, a, b) => {
                let (left, right) = (a.eval_columns(columns), b.eval_columns(columns));
                left.into_iter().zip(right).map(|(x, y)| op.apply(x, y)).collect()
            }
        }
    }

    /// Number of connective levels on the longest path.
    pub fn depth(&self) -> usize {
        match self {
            Expr::Leaf(_) => 0,
            Expr::Gate(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn leaves(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut BTreeSet<usize>) {
        match self {
            Expr::Leaf(i) => {
                out.insert(*i);
            }
            Expr::Gate(_, a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    pub fn max_leaf(&self) -> usize {
        self.leaves().into_iter().next_back().unwrap_or(0)
    }
}
