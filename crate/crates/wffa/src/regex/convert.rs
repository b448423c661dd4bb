//! Translations between regular expressions and automata.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::{invalid, Regex};
use crate::automaton::{op_cauchy, op_star, op_sum, Wffa};
use crate::error::Result;
use crate::semiring::{SemiringSpec, Symbol};

/// Compiles a valid expression over the symbols it mentions.
pub fn regex_to_wffa(spec: &SemiringSpec, r: &Regex) -> Result<Wffa> {
    regex_to_wffa_over(spec, &r.symbols(), r)
}

/// Compiles a valid expression; the result's alphabet is `alphabet` plus the mentioned symbols.
pub fn regex_to_wffa_over(spec: &SemiringSpec, alphabet: &BTreeSet<Symbol>, r: &Regex) -> Result<Wffa> {
    if !r.validate(spec) {
        return Err(invalid(r));
    }
    let mut full = alphabet.clone();
    full.extend(r.symbols());
    compile(spec, &full, r)
}

fn compile(spec: &SemiringSpec, alphabet: &BTreeSet<Symbol>, r: &Regex) -> Result<Wffa> {
    Ok(match r {
        Regex::EpsAtom(s) => {
            let mut a = Wffa::new(*spec, alphabet.iter().cloned());
            let q = a.add_state("e");
            a.set_initial(q, spec.one())?;
            if !spec.is_zero(s) {
                a.set_final(q, s.clone())?;
            }
            a
        }
        Regex::LetterAtom(sym, e) => {
            let mut a = Wffa::new(*spec, alphabet.iter().cloned());
            let p = a.add_state("s");
            let q = a.add_state("t");
            a.set_initial(p, spec.one())?;
            a.set_final(q, spec.one())?;
            a.add_transition(p, sym, q, e.clone())?;
            a
        }
        Regex::Sum(l, r) => op_sum(&compile(spec, alphabet, l)?, &compile(spec, alphabet, r)?)?,
        Regex::Cauchy(l, r) => op_cauchy(&compile(spec, alphabet, l)?, &compile(spec, alphabet, r)?)?,
        Regex::Star(c) => op_star(&compile(spec, alphabet, c)?)?,
    })
}

type Cell = Option<Arc<Regex>>;

fn plus(a: &Cell, b: &Cell) -> Cell {
    match (a, b) {
        (None, x) | (x, None) => x.clone(),
        (Some(x), Some(y)) => Some(Arc::new(Regex::Sum(x.clone(), y.clone()))),
    }
}

/// State elimination in ascending state order.
///
/// `R[p][r]` describes the non-empty paths from `p` to `r` whose intermediate
/// states have already been eliminated; step `k` adds the paths through `k`
/// as `R[p][k] . R[k][k]* . R[k][r]`. Absent path sets are left out rather than
/// represented by zero-weight atoms. The result is always in the restricted grammar.
pub fn wffa_to_regex(a: &Wffa) -> Regex {
    let spec = a.spec();
    let n = a.state_count();
    let mut m: Vec<Vec<Cell>> = vec![vec![None; n]; n];
    for ((p, sym, q), e) in a.transitions() {
        let atom = Some(Arc::new(Regex::LetterAtom(sym.clone(), e.clone())));
        m[*p][*q] = plus(&m[*p][*q], &atom);
    }
    for k in 0..n {
        let Some(pivot) = m[k][k].clone() else {
            let col: Vec<Cell> = (0..n).map(|p| m[p][k].clone()).collect();
            let row = m[k].clone();
            for p in 0..n {
                let Some(into) = &col[p] else { continue };
                for r in 0..n {
                    let Some(out) = &row[r] else { continue };
                    let through = Some(Arc::new(Regex::Cauchy(into.clone(), out.clone())));
                    m[p][r] = plus(&m[p][r], &through);
                }
            }
            continue;
        };
        let loop_ = Arc::new(Regex::Star(pivot));
        let col: Vec<Cell> = (0..n).map(|p| m[p][k].clone()).collect();
        let row = m[k].clone();
        for p in 0..n {
            let Some(into) = &col[p] else { continue };
            let prefix = Arc::new(Regex::Cauchy(into.clone(), loop_.clone()));
            for r in 0..n {
                let Some(out) = &row[r] else { continue };
                let through = Some(Arc::new(Regex::Cauchy(prefix.clone(), out.clone())));
                m[p][r] = plus(&m[p][r], &through);
            }
        }
    }

    let mut total: Cell = None;
    for (i, wi) in a.initial() {
        for (f, wf) in a.finals() {
            let Some(body) = &m[*i][*f] else { continue };
            let left = Arc::new(Regex::Cauchy(Arc::new(Regex::EpsAtom(wi.clone())), body.clone()));
            let term = Some(Arc::new(Regex::Cauchy(left, Arc::new(Regex::EpsAtom(wf.clone())))));
            total = plus(&total, &term);
        }
    }
    let eps = a.epsilon_value();
    if !spec.is_zero(&eps) {
        total = plus(&total, &Some(Arc::new(Regex::EpsAtom(eps))));
    }
    match total {
        Some(r) => Arc::try_unwrap(r).unwrap_or_else(|shared| (*shared).clone()),
        None => Regex::EpsAtom(spec.zero()),
    }
}
