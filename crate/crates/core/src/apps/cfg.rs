//! Context-free recognition by closing a chart of Boolean matrices under
//! offset products.
//!
//! `M_A[i][j]` is true when `A` derives `w[i..=j]`. The diagonal is seeded
//! from unary rules; each pass then sets `M_A |= M_B * M_C` for every binary
//! rule `A -> B C`, all products of a pass reading the previous pass's chart,
//! until nothing changes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::ledger::CostLedger;
use crate::matmul::GprConfig;

use super::boolean::{offset_boolean_product, BoolMatrix};
use super::AppError;

/// Chomsky normal form grammar. Terminals are single characters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfGrammar {
    pub start: String,
    /// `A -> a`
    pub unary: Vec<(String, String)>,
    /// `A -> B C`
    pub binary: Vec<(String, String, String)>,
}

impl CnfGrammar {
    pub fn from_json(text: &str) -> Result<Self, AppError> {
        let g: CnfGrammar = serde_json::from_str(text).map_err(|e| AppError::Parse(e.to_string()))?;
        for (_, a) in &g.unary {
            if a.chars().count() != 1 {
                return Err(AppError::Parse(format!("terminal {a:?} is not a single character")));
            }
        }
        Ok(g)
    }

    pub fn terminals(&self) -> BTreeSet<char> {
        self.unary.iter().filter_map(|(_, a)| a.chars().next()).collect()
    }

    pub fn nonterminals(&self) -> BTreeSet<&str> {
        let mut s: BTreeSet<&str> = BTreeSet::from([self.start.as_str()]);
        s.extend(self.unary.iter().map(|(a, _)| a.as_str()));
        for (a, b, c) in &self.binary {
            s.extend([a.as_str(), b.as_str(), c.as_str()]);
        }
        s
    }
}

/// Final chart and the number of closure passes it took.
#[derive(Debug, Clone)]
pub struct Chart {
    pub matrices: BTreeMap<String, BoolMatrix>,
    pub passes: u32,
}

pub fn build_chart(g: &CnfGrammar, w: &str, cfg: &GprConfig, ledger: &mut CostLedger) -> Result<Chart, AppError> {
    let word: Vec<char> = w.chars().collect();
    let n = word.len();
    if n == 0 {
        return Err(AppError::EmptyString);
    }
    let terminals = g.terminals();
    if let Some(&c) = word.iter().find(|c| !terminals.contains(c)) {
        return Err(AppError::UnknownTerminal(c));
    }
    let mut chart: BTreeMap<String, BoolMatrix> =
        g.nonterminals().into_iter().map(|a| (a.to_string(), BoolMatrix::falses(n))).collect();
    for (i, &c) in word.iter().enumerate() {
        for (a, t) in &g.unary {
            if t.starts_with(c) {
                chart.get_mut(a).expect("nonterminal listed").set(i, i, true);
            }
        }
    }
    let pairs: BTreeSet<(&str, &str)> = g.binary.iter().map(|(_, b, c)| (b.as_str(), c.as_str())).collect();
    let mut cache: BTreeMap<(&str, &str), BoolMatrix> = BTreeMap::new();
    let mut changed: BTreeSet<String> = chart.keys().cloned().collect();
    let mut passes = 0;
    while !changed.is_empty() && n > 1 {
        passes += 1;
        for &(b, c) in &pairs {
            if cache.contains_key(&(b, c)) && !changed.contains(b) && !changed.contains(c) {
                continue;
            }
            let (mb, mc) = (&chart[b], &chart[c]);
            let p = if mb.any() && mc.any() {
                offset_boolean_product(mb, mc, cfg, ledger)?
            } else {
                BoolMatrix::falses(n)
            };
            cache.insert((b, c), p);
        }
        changed.clear();
        for (a, b, c) in &g.binary {
            let add = &cache[&(b.as_str(), c.as_str())];
            let cur = &chart[a];
            let next = cur.or(add);
            if &next != cur {
                chart.insert(a.clone(), next);
                changed.insert(a.clone());
            }
        }
    }
    Ok(Chart { matrices: chart, passes })
}

/// Whether `g` derives `w`. Single characters are decided from the unary
/// rules alone.
pub fn valiant_recognize(g: &CnfGrammar, w: &str, cfg: &GprConfig, ledger: &mut CostLedger) -> Result<bool, AppError> {
    let chart = build_chart(g, w, cfg, ledger)?;
    let n = w.chars().count();
    Ok(chart.matrices[&g.start].get(0, n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab_grammar() -> CnfGrammar {
        CnfGrammar::from_json(r#"{"start":"S","unary":[["A","a"],["B","b"]],"binary":[["S","A","B"]]}"#).unwrap()
    }

    #[test]
    fn ab_language() {
        let mut l = CostLedger::default();
        let cfg = GprConfig::default();
        let g = ab_grammar();
        assert!(valiant_recognize(&g, "ab", &cfg, &mut l).unwrap());
        assert!(!valiant_recognize(&g, "ba", &cfg, &mut l).unwrap());
        assert_eq!(valiant_recognize(&g, "abc", &cfg, &mut l), Err(AppError::UnknownTerminal('c')));
        assert_eq!(valiant_recognize(&g, "", &cfg, &mut l), Err(AppError::EmptyString));
    }

    #[test]
    fn single_character_uses_unary_rules() {
        let mut l = CostLedger::default();
        let g = CnfGrammar::from_json(r#"{"start":"S","unary":[["S","a"]],"binary":[]}"#).unwrap();
        assert!(valiant_recognize(&g, "a", &GprConfig::default(), &mut l).unwrap());
        assert_eq!(l.tally_of("bmm_calls"), 0);
    }

    #[test]
    fn balanced_parentheses() {
        // S -> L R | L X | S S, X -> S R, L -> (, R -> )
        let g = CnfGrammar::from_json(
            r#"{"start":"S","unary":[["L","("],["R",")"]],
                "binary":[["S","L","R"],["S","L","X"],["S","S","S"],["X","S","R"]]}"#,
        )
        .unwrap();
        let mut l = CostLedger::default();
        let cfg = GprConfig::default();
        for (w, ok) in [("()", true), ("(())()", true), ("(()", false), (")(", false), ("((()))", true)] {
            assert_eq!(valiant_recognize(&g, w, &cfg, &mut l).unwrap(), ok, "{w}");
        }
    }
}
