//! IF–THEN rendering of a collective.
//!
//! Each neuron becomes one rule whose condition is a disjunction of
//! conjunctions of threshold literals, derived from the neuron's truth table by
//! prime-implicant reduction.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::collective::Collective;
use crate::logic::Expr;

/// A literal on pool feature `feature`; `negated` selects the complement cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Literal {
    pub feature: usize,
    pub negated: bool,
}

/// Sum of products; an empty term is TRUE, an empty list is FALSE.
pub type Dnf = Vec<Vec<Literal>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Implicant {
    /// Bit values on the cared-about positions.
    bits: u32,
    /// Positions that are don't-care.
    free: u32,
}

impl Implicant {
    fn covers(self, minterm: u32) -> bool {
        minterm & !self.free == self.bits
    }
}

fn prime_implicants(minterms: &[u32]) -> Vec<Implicant> {
    let mut current: BTreeSet<Implicant> = minterms.iter().map(|&m| Implicant { bits: m, free: 0 }).collect();
    let mut primes = BTreeSet::new();
    while !current.is_empty() {
        let items: Vec<Implicant> = current.iter().copied().collect();
        let mut merged = vec![false; items.len()];
        let mut next = BTreeSet::new();
        for i in 0..items.len() {
            for j in i + 1..items.len() {
                let (a, b) = (items[i], items[j]);
                let diff = a.bits ^ b.bits;
                if a.free == b.free && diff.count_ones() == 1 {
                    next.insert(Implicant {
                        bits: a.bits & !diff,
                        free: a.free | diff,
                    });
                    merged[i] = true;
                    merged[j] = true;
                }
            }
        }
        for (item, used) in items.into_iter().zip(merged) {
            if !used {
                primes.insert(item);
            }
        }
        current = next;
    }
    primes.into_iter().collect()
}

/// Minimal-ish DNF of `expr` over its own leaves: essential primes first, then
/// greedy cover by most new minterms, fewest literals.
pub fn dnf(expr: &Expr) -> Dnf {
    let leaves: Vec<usize> = expr.leaves().into_iter().collect();
    let k = leaves.len();
    assert!(k <= 20, "rule rendering supports at most 20 leaves");
    let width = leaves.last().map_or(0, |&l| l + 1);
    let mut inputs = vec![false; width];
    let minterms: Vec<u32> = (0u32..1 << k)
        .filter(|&m| {
            for (bit, &leaf) in leaves.iter().enumerate() {
                inputs[leaf] = m >> bit & 1 == 1;
            }
            expr.eval(&inputs)
        })
        .collect();
    if minterms.is_empty() {
        return Vec::new();
    }
    if minterms.len() == 1 << k {
        return vec![Vec::new()];
    }

    let primes = prime_implicants(&minterms);
    let mut uncovered: BTreeSet<u32> = minterms.iter().copied().collect();
    let mut chosen: Vec<Implicant> = Vec::new();
    for &m in &minterms {
        let covering: Vec<&Implicant> = primes.iter().filter(|p| p.covers(m)).collect();
        if covering.len() == 1 && !chosen.contains(covering[0]) {
            chosen.push(*covering[0]);
        }
    }
    uncovered.retain(|&m| !chosen.iter().any(|p| p.covers(m)));
    while !uncovered.is_empty() {
        let best = primes
            .iter()
            .filter(|p| !chosen.contains(p))
            .max_by_key(|p| {
                let gain = uncovered.iter().filter(|&&m| p.covers(m)).count();
                (gain, p.free.count_ones(), std::cmp::Reverse(**p))
            })
            .copied()
            .expect("primes cover every minterm");
        uncovered.retain(|&m| !best.covers(m));
        chosen.push(best);
    }
    chosen.sort();
    chosen
        .into_iter()
        .map(|p| {
            (0..k)
                .filter(|bit| p.free >> bit & 1 == 0)
                .map(|bit| Literal {
                    feature: leaves[bit],
                    negated: p.bits >> bit & 1 == 0,
                })
                .collect()
        })
        .collect()
}

/// Text of the condition, e.g. `(x1 >= 1.75) AND (x2 >= 70)`.
pub fn render_condition(collective: &Collective, expr: &Expr) -> String {
    let names = &collective.variable_names;
    let terms = dnf(expr);
    if terms.is_empty() {
        return "FALSE".into();
    }
    let render_term = |term: &[Literal]| -> String {
        if term.is_empty() {
            return "TRUE".into();
        }
        term.iter()
            .map(|l| collective.pool.features[l.feature].literal(names, l.negated))
            .collect::<Vec<_>>()
            .join(" AND ")
    };
    if terms.len() == 1 {
        return render_term(&terms[0]);
    }
    terms
        .iter()
        .map(|t| if t.len() > 1 { format!("({})", render_term(t)) } else { render_term(t) })
        .collect::<Vec<_>>()
        .join(" OR ")
}

/// One IF–THEN line per neuron with a short preamble and the voting footer.
pub fn render_rules(collective: &Collective) -> String {
    let labels = &collective.label_map;
    let (yes, no) = (labels.literal(true), labels.literal(false));
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {} neuron(s) with V = {} on the learning set",
        collective.len(),
        collective.errors()
    );
    for (i, neuron) in collective.neurons.iter().enumerate() {
        let _ = writeln!(out, "# neuron {}: layer {}", i + 1, neuron.layer);
        let _ = writeln!(
            out,
            "IF {} THEN class={} ELSE class={}",
            render_condition(collective, &neuron.expr),
            yes,
            no
        );
    }
    let _ = writeln!(out, "decide by majority; refuse if chi < {}", collective.chi0);
    out
}
