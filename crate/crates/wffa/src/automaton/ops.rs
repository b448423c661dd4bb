//! Closure constructions: sum, Hadamard product, normalization, Cauchy product, star.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{StateId, Wffa};
use crate::error::{Error, Result};
use crate::expr::FExpr;
use crate::semiring::ExtReal;

/// Which side of the automaton to normalize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizeMode {
    /// A single initial state with weight one and no incoming transitions.
    Initial,
    /// A single final state with weight one and no outgoing transitions.
    Final,
    /// Both, with distinct initial and final states. Needs a proper behavior.
    Complete,
}

/// How initial and final weights are redistributed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizeStrategy {
    /// Multiply the weights into the adjacent transition expressions.
    WeightFolding,
    /// Copy states to remember the initial (or final) state of each run and keep
    /// the weights as initial (or final) weights of the copies.
    StateCopying,
}

fn same_spec(a: &Wffa, b: &Wffa) -> Result<()> {
    if a.spec != b.spec {
        Err(Error::SpecMismatch(a.spec.to_string(), b.spec.to_string()))
    } else {
        Ok(())
    }
}

fn empty_like(a: &Wffa, b: Option<&Wffa>) -> Wffa {
    let mut out = Wffa::new(a.spec, a.alphabet.iter().cloned());
    if let Some(b) = b {
        out.alphabet.extend(b.alphabet.iter().cloned());
    }
    out
}

/// Copies all states and transitions of `src` into `out`, prefixing names.
fn embed(out: &mut Wffa, src: &Wffa, prefix: &str) -> Vec<StateId> {
    let map: Vec<StateId> = src.states.iter().map(|n| out.add_state(format!("{prefix}{n}"))).collect();
    for ((p, a, q), e) in &src.transitions {
        out.transitions.insert((map[*p], a.clone(), map[*q]), e.clone());
    }
    map
}

/// `w & e`, omitting the factor when `w` is the semiring one.
fn scale_left(a: &Wffa, w: &ExtReal, e: &FExpr) -> FExpr {
    if a.spec.is_one(w) {
        e.clone()
    } else {
        FExpr::times(FExpr::Const(w.clone()), e.clone())
    }
}

/// `e & w`, omitting the factor when `w` is the semiring one.
fn scale_right(a: &Wffa, e: &FExpr, w: &ExtReal) -> FExpr {
    if a.spec.is_one(w) {
        e.clone()
    } else {
        FExpr::times(e.clone(), FExpr::Const(w.clone()))
    }
}

fn nonzero(a: &Wffa, m: &BTreeMap<StateId, ExtReal>) -> BTreeMap<StateId, ExtReal> {
    m.iter().filter(|(_, w)| !a.spec.is_zero(w)).map(|(q, w)| (*q, w.clone())).collect()
}

/// Disjoint union: the behavior is the pointwise sum.
pub fn op_sum(a: &Wffa, b: &Wffa) -> Result<Wffa> {
    same_spec(a, b)?;
    let mut out = empty_like(a, Some(b));
    for (src, prefix) in [(a, "1."), (b, "2.")] {
        let map = embed(&mut out, src, prefix);
        for (q, w) in &src.initial {
            out.initial.insert(map[*q], w.clone());
        }
        for (q, w) in &src.finals {
            out.finals.insert(map[*q], w.clone());
        }
    }
    Ok(out)
}

/// Synchronous product: the behavior is the pointwise product.
pub fn op_hadamard(a: &Wffa, b: &Wffa) -> Result<Wffa> {
    same_spec(a, b)?;
    let spec = a.spec;
    let mut out = empty_like(a, Some(b));
    let nb = b.state_count();
    for p in a.states.iter() {
        for q in b.states.iter() {
            out.add_state(format!("({p},{q})"));
        }
    }
    let pair = |p: StateId, q: StateId| p * nb + q;
    for (p, wp) in &a.initial {
        for (q, wq) in &b.initial {
            out.initial.insert(pair(*p, *q), spec.mul(wp, wq));
        }
    }
    for (p, wp) in &a.finals {
        for (q, wq) in &b.finals {
            out.finals.insert(pair(*p, *q), spec.mul(wp, wq));
        }
    }
    for ((p1, x, q1), e1) in &a.transitions {
        for ((p2, y, q2), e2) in &b.transitions {
            if x == y {
                out.transitions
                    .insert((pair(*p1, *p2), x.clone(), pair(*q1, *q2)), FExpr::times(e1.clone(), e2.clone()));
            }
        }
    }
    Ok(out)
}

fn single_initial(a: &Wffa) -> Option<StateId> {
    match a.initial.iter().collect::<Vec<_>>().as_slice() {
        [(q, w)] if a.spec.is_one(w) && !a.transitions.keys().any(|(_, _, dst)| dst == *q) => Some(**q),
        _ => None,
    }
}

fn single_final(a: &Wffa) -> Option<StateId> {
    match a.finals.iter().collect::<Vec<_>>().as_slice() {
        [(q, w)] if a.spec.is_one(w) && !a.transitions.keys().any(|(src, _, _)| src == *q) => Some(**q),
        _ => None,
    }
}

fn is_normalized(a: &Wffa, mode: NormalizeMode) -> bool {
    match mode {
        NormalizeMode::Initial => single_initial(a).is_some(),
        NormalizeMode::Final => single_final(a).is_some(),
        NormalizeMode::Complete => matches!((single_initial(a), single_final(a)), (Some(i), Some(f)) if i != f),
    }
}

/// Redistributes initial and/or final weights; the behavior is unchanged.
///
/// An automaton that is already normalized for `mode` is returned unchanged.
pub fn normalize(a: &Wffa, mode: NormalizeMode, strategy: NormalizeStrategy) -> Result<Wffa> {
    if mode == NormalizeMode::Complete && !a.is_proper() {
        return Err(Error::NotProper(a.epsilon_value().to_string()));
    }
    if is_normalized(a, mode) {
        return Ok(a.clone());
    }
    Ok(match (mode, strategy) {
        (NormalizeMode::Initial, NormalizeStrategy::WeightFolding) => fold_initial(a),
        (NormalizeMode::Final, NormalizeStrategy::WeightFolding) => fold_final(a),
        (NormalizeMode::Complete, NormalizeStrategy::WeightFolding) => fold_complete(a),
        (NormalizeMode::Initial, NormalizeStrategy::StateCopying) => copy_initial(a),
        (NormalizeMode::Final, NormalizeStrategy::StateCopying) => copy_final(a),
        (NormalizeMode::Complete, NormalizeStrategy::StateCopying) => {
            if !a.is_purely_transition_weighted() {
                return Err(Error::Unsupported(
                    "complete normalization by state copying needs all initial and final weights equal to one"
                        .into(),
                ));
            }
            fold_complete(a)
        }
    })
}

fn fold_initial(a: &Wffa) -> Wffa {
    let initial = nonzero(a, &a.initial);
    let mut out = a.clone();
    out.initial.clear();
    let qi = out.add_state("init");
    out.initial.insert(qi, a.spec.one());
    for ((p, sym, q), e) in &a.transitions {
        if let Some(w) = initial.get(p) {
            let folded = scale_left(a, w, e);
            out.add_transition(qi, sym, *q, folded).expect("valid transition");
        }
    }
    let eps = a.epsilon_value();
    if !a.spec.is_zero(&eps) {
        out.finals.insert(qi, eps);
    }
    out
}

fn fold_final(a: &Wffa) -> Wffa {
    let finals = nonzero(a, &a.finals);
    let mut out = a.clone();
    out.finals.clear();
    let qf = out.add_state("fin");
    out.finals.insert(qf, a.spec.one());
    for ((p, sym, q), e) in &a.transitions {
        if let Some(w) = finals.get(q) {
            let folded = scale_right(a, e, w);
            out.add_transition(*p, sym, qf, folded).expect("valid transition");
        }
    }
    let eps = a.epsilon_value();
    if !a.spec.is_zero(&eps) {
        out.initial.insert(qf, eps);
    }
    out
}

fn fold_complete(a: &Wffa) -> Wffa {
    let initial = nonzero(a, &a.initial);
    let finals = nonzero(a, &a.finals);
    let mut out = a.clone();
    out.initial.clear();
    out.finals.clear();
    let qi = out.add_state("init");
    let qf = out.add_state("fin");
    out.initial.insert(qi, a.spec.one());
    out.finals.insert(qf, a.spec.one());
    for ((p, sym, q), e) in &a.transitions {
        let wi = initial.get(p);
        let wf = finals.get(q);
        if let Some(wi) = wi {
            out.add_transition(qi, sym, *q, scale_left(a, wi, e)).expect("valid transition");
        }
        if let Some(wf) = wf {
            out.add_transition(*p, sym, qf, scale_right(a, e, wf)).expect("valid transition");
        }
        if let (Some(wi), Some(wf)) = (wi, wf) {
            let both = scale_right(a, &scale_left(a, wi, e), wf);
            out.add_transition(qi, sym, qf, both).expect("valid transition");
        }
    }
    out
}

/// Adjacency lists (forward or backward) over transition keys.
fn adjacency(a: &Wffa, forward: bool) -> Vec<BTreeSet<StateId>> {
    let mut adj = vec![BTreeSet::new(); a.state_count()];
    for (p, _, q) in a.transitions.keys() {
        if forward {
            adj[*p].insert(*q);
        } else {
            adj[*q].insert(*p);
        }
    }
    adj
}

/// States reachable from `start` by at least one step, in breadth-first order.
fn reach_plus(adj: &[BTreeSet<StateId>], start: StateId) -> Vec<StateId> {
    let mut seen = BTreeSet::new();
    let mut order = Vec::new();
    let mut queue: VecDeque<StateId> = adj[start].iter().copied().collect();
    while let Some(q) = queue.pop_front() {
        if seen.insert(q) {
            order.push(q);
            queue.extend(adj[q].iter().copied());
        }
    }
    order
}

fn copy_initial(a: &Wffa) -> Wffa {
    let spec = a.spec;
    let initial = nonzero(a, &a.initial);
    let mut out = empty_like(a, None);
    let qi = out.add_state("init");
    out.initial.insert(qi, spec.one());
    let adj = adjacency(a, true);
    let mut pair: BTreeMap<(StateId, StateId), StateId> = BTreeMap::new();
    for i in initial.keys() {
        for q in reach_plus(&adj, *i) {
            let id = out.add_state(format!("({},{})", a.states[*i], a.states[q]));
            pair.insert((*i, q), id);
        }
    }
    for ((i, q), id) in &pair {
        if let Some(wf) = a.finals.get(q) {
            let w = spec.mul(&initial[i], wf);
            if !spec.is_zero(&w) {
                out.finals.insert(*id, w);
            }
        }
    }
    for ((p, sym, q), e) in &a.transitions {
        if initial.contains_key(p) {
            out.transitions.insert((qi, sym.clone(), pair[&(*p, *q)]), e.clone());
        }
        for i in initial.keys() {
            if let (Some(src), Some(dst)) = (pair.get(&(*i, *p)), pair.get(&(*i, *q))) {
                out.transitions.insert((*src, sym.clone(), *dst), e.clone());
            }
        }
    }
    let eps = a.epsilon_value();
    if !spec.is_zero(&eps) {
        out.finals.insert(qi, eps);
    }
    out
}

fn copy_final(a: &Wffa) -> Wffa {
    let spec = a.spec;
    let finals = nonzero(a, &a.finals);
    let mut out = empty_like(a, None);
    let qf = out.add_state("fin");
    out.finals.insert(qf, spec.one());
    let adj = adjacency(a, false);
    let mut pair: BTreeMap<(StateId, StateId), StateId> = BTreeMap::new();
    for f in finals.keys() {
        let mut preds = reach_plus(&adj, *f);
        preds.sort_unstable();
        for q in preds {
            let id = out.add_state(format!("({},{})", a.states[q], a.states[*f]));
            pair.insert((q, *f), id);
        }
    }
    for ((q, f), id) in &pair {
        if let Some(wi) = a.initial.get(q) {
            let w = spec.mul(wi, &finals[f]);
            if !spec.is_zero(&w) {
                out.initial.insert(*id, w);
            }
        }
    }
    for ((p, sym, q), e) in &a.transitions {
        if finals.contains_key(q) {
            out.transitions.insert((pair[&(*p, *q)], sym.clone(), qf), e.clone());
        }
        for f in finals.keys() {
            if let (Some(src), Some(dst)) = (pair.get(&(*p, *f)), pair.get(&(*q, *f))) {
                out.transitions.insert((*src, sym.clone(), *dst), e.clone());
            }
        }
    }
    let eps = a.epsilon_value();
    if !spec.is_zero(&eps) {
        out.initial.insert(qf, eps);
    }
    out
}

/// Cauchy product: the behavior on `w` is the sum over splits `w = uv` of `A(u) * B(v)`.
///
/// Uses state-copying normalization, so no new transition expressions appear.
pub fn op_cauchy(a: &Wffa, b: &Wffa) -> Result<Wffa> {
    same_spec(a, b)?;
    let left = normalize(a, NormalizeMode::Final, NormalizeStrategy::StateCopying)?;
    let right = normalize(b, NormalizeMode::Initial, NormalizeStrategy::StateCopying)?;
    let qf = single_final(&left).expect("finally normalized");
    let qi = single_initial(&right).expect("initially normalized");

    let mut out = empty_like(&left, Some(&right));
    let lmap = embed(&mut out, &left, "1.");
    for (q, w) in &left.initial {
        out.initial.insert(lmap[*q], w.clone());
    }
    let glued = lmap[qf];
    let rmap: Vec<StateId> = (0..right.state_count())
        .map(|q| if q == qi { glued } else { out.add_state(format!("2.{}", right.states[q])) })
        .collect();
    for ((p, sym, q), e) in &right.transitions {
        out.transitions.insert((rmap[*p], sym.clone(), rmap[*q]), e.clone());
    }
    for (q, w) in &right.finals {
        out.finals.insert(rmap[*q], w.clone());
    }
    Ok(out)
}

/// Kleene star of a proper automaton: the sum over factorizations into non-empty blocks.
pub fn op_star(a: &Wffa) -> Result<Wffa> {
    if !a.is_proper() {
        return Err(Error::NotProper(a.epsilon_value().to_string()));
    }
    let strategy = if a.is_purely_transition_weighted() {
        NormalizeStrategy::StateCopying
    } else {
        NormalizeStrategy::WeightFolding
    };
    let c = normalize(a, NormalizeMode::Complete, strategy)?;
    let qi = single_initial(&c).expect("normalized");
    let qf = single_final(&c).expect("normalized");
    let mut out = empty_like(&c, None);
    let map: Vec<Option<StateId>> = (0..c.state_count())
        .map(|q| (q != qf).then(|| out.add_state(c.states[q].clone())))
        .collect();
    let target = |q: StateId| map[if q == qf { qi } else { q }].expect("kept state");
    for ((p, sym, q), e) in &c.transitions {
        let src = map[*p].expect("no transitions leave the final state");
        out.add_transition(src, sym, target(*q), e.clone())?;
    }
    let start = map[qi].expect("initial kept");
    out.initial.insert(start, c.spec.one());
    out.finals.insert(start, c.spec.one());
    Ok(out)
}
