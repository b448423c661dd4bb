//! Support and threshold decision procedures for arctic automata over non-negative data.
//!
//! Both reduce to per-transition analysis of the piecewise-affine normal form:
//! a transition can contribute a finite value iff its function has non-empty
//! support, and the largest value it can contribute on an interval is the
//! supremum of the function there. The behavior supremum is then a longest-walk
//! problem in the max-plus automaton whose weights are these suprema.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::automaton::{StateId, TransitionKey, Wffa};
use crate::error::{Error, Result};
use crate::pwa::{compile_pwa_for, Interval, Supremum};
use crate::semiring::{DataDomain, ExtReal, Rational, Symbol};

/// An unweighted automaton over the symbol alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    pub alphabet: BTreeSet<Symbol>,
    pub states: Vec<String>,
    pub initials: BTreeSet<StateId>,
    pub finals: BTreeSet<StateId>,
    pub transitions: BTreeSet<(StateId, Symbol, StateId)>,
}

impl Nfa {
    /// Whether the symbol sequence is accepted.
    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> bool {
        let mut current: BTreeSet<StateId> = self.initials.clone();
        for a in word {
            let a = a.as_ref();
            current = self
                .transitions
                .iter()
                .filter(|(p, sym, _)| sym == a && current.contains(p))
                .map(|(_, _, q)| *q)
                .collect();
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|q| self.finals.contains(q))
    }

    /// Whether the accepted language is empty.
    pub fn is_empty(&self) -> bool {
        let mut seen: BTreeSet<StateId> = BTreeSet::new();
        let mut queue: VecDeque<StateId> = self.initials.iter().copied().collect();
        while let Some(q) = queue.pop_front() {
            if !seen.insert(q) {
                continue;
            }
            if self.finals.contains(&q) {
                return false;
            }
            for (p, _, r) in &self.transitions {
                if *p == q {
                    queue.push_back(*r);
                }
            }
        }
        true
    }
}

impl fmt::Display for Nfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |set: &BTreeSet<StateId>| -> String {
            set.iter().map(|q| self.states[*q].as_str()).collect::<Vec<_>>().join(" ")
        };
        writeln!(f, "alphabet {}", self.alphabet.iter().cloned().collect::<Vec<_>>().join(" "))?;
        writeln!(f, "states {}", self.states.join(" "))?;
        writeln!(f, "initial {}", names(&self.initials))?;
        writeln!(f, "final {}", names(&self.finals))?;
        for (p, a, q) in &self.transitions {
            writeln!(f, "transition {} {a} {}", self.states[*p], self.states[*q])?;
        }
        Ok(())
    }
}

fn require_arctic_nonneg(a: &Wffa) -> Result<()> {
    if !a.spec().is_arctic() || a.spec().domain() != DataDomain::NonNegReals {
        return Err(Error::Unsupported(format!(
            "decision procedures need the arctic semiring over non-negative data, got {}",
            a.spec()
        )));
    }
    Ok(())
}

/// Symbol projection of the support.
pub fn support_nfa(a: &Wffa) -> Result<Nfa> {
    require_arctic_nonneg(a)?;
    let spec = a.spec();
    let nonzero = |m: &BTreeMap<StateId, ExtReal>| -> BTreeSet<StateId> {
        m.iter().filter(|(_, w)| !spec.is_zero(w)).map(|(q, _)| *q).collect()
    };
    let mut transitions = BTreeSet::new();
    for (key, e) in a.transitions() {
        if compile_pwa_for(spec, e)?.support_nonempty() {
            transitions.insert(key.clone());
        }
    }
    Ok(Nfa {
        alphabet: a.alphabet().clone(),
        states: a.state_names().to_vec(),
        initials: nonzero(a.initial()),
        finals: nonzero(a.finals()),
        transitions,
    })
}

/// Whether some finance word has a non-zero value.
pub fn support_nonempty(a: &Wffa) -> Result<bool> {
    Ok(!support_nfa(a)?.is_empty())
}

/// Supremum of every transition weight over data in `iv`.
pub fn transition_sups(a: &Wffa, iv: &Interval) -> Result<BTreeMap<TransitionKey, ExtReal>> {
    Ok(transition_sup_details(a, iv)?.into_iter().map(|(k, s)| (k, s.value)).collect())
}

fn transition_sup_details(a: &Wffa, iv: &Interval) -> Result<BTreeMap<TransitionKey, Supremum>> {
    require_arctic_nonneg(a)?;
    let mut out = BTreeMap::new();
    for (key, e) in a.transitions() {
        out.insert(key.clone(), compile_pwa_for(a.spec(), e)?.sup(iv));
    }
    Ok(out)
}

/// Why a supremum has its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictReason {
    /// A cycle of positive weight lies on a path from an initial to a final state.
    PositiveUsefulCycle,
    /// A transition with unbounded weight lies on a path from an initial to a final state.
    InfiniteTransitionOnUsefulPath,
    /// The supremum is finite and realized by (or approached along) a cycle-free walk.
    FiniteSup,
    /// Every word has value `-inf`.
    EmptyBehavior,
}

impl fmt::Display for VerdictReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictReason::PositiveUsefulCycle => "positive-useful-cycle",
            VerdictReason::InfiniteTransitionOnUsefulPath => "infinite-transition-on-useful-path",
            VerdictReason::FiniteSup => "finite-sup",
            VerdictReason::EmptyBehavior => "empty-behavior",
        })
    }
}

/// A scenario shape near the supremum: symbols plus, per position, a datum at
/// which the transition weight reaches (or approaches) its own supremum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSkeleton {
    pub symbols: Vec<Symbol>,
    pub data: Vec<Option<Rational>>,
}

impl fmt::Display for WitnessSkeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return f.write_str("eps");
        }
        for (a, d) in self.symbols.iter().zip(&self.data) {
            match d {
                Some(d) => write!(f, "({a},{})", ExtReal::Finite(d.clone()))?,
                None => write!(f, "({a},?)")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdVerdict {
    /// `theta < sup_value`.
    pub answer: bool,
    pub sup_value: ExtReal,
    pub witness: Option<WitnessSkeleton>,
    pub reason: VerdictReason,
}

impl fmt::Display for ThresholdVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}, sup = {}", if self.answer { "yes" } else { "no" }, self.sup_value)?;
        writeln!(f, "reason: {}", self.reason)?;
        match &self.witness {
            Some(w) => writeln!(f, "witness: {w}"),
            None => writeln!(f, "witness: none"),
        }
    }
}

/// Supremum of the behavior together with its justification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupAnalysis {
    pub value: ExtReal,
    pub reason: VerdictReason,
    pub witness: Option<WitnessSkeleton>,
}

struct Edge {
    src: StateId,
    dst: StateId,
    symbol: Symbol,
    weight: Rational,
    hint: Option<Rational>,
}

/// Full supremum analysis over words whose data lie in `iv`.
pub fn analyze_sup(a: &Wffa, iv: &Interval) -> Result<SupAnalysis> {
    let sups = transition_sup_details(a, iv)?;
    let n = a.state_count();
    let finite_weights = |m: &BTreeMap<StateId, ExtReal>| -> BTreeMap<StateId, Rational> {
        m.iter().filter_map(|(q, w)| w.as_finite().map(|r| (*q, r.clone()))).collect()
    };
    let init = finite_weights(a.initial());
    let fin = finite_weights(a.finals());

    let live: Vec<(&TransitionKey, &Supremum)> = sups.iter().filter(|(_, s)| s.value != ExtReal::NegInf).collect();
    let mut fwd = vec![Vec::new(); n];
    let mut bwd = vec![Vec::new(); n];
    for ((p, _, q), _) in &live {
        fwd[*p].push(*q);
        bwd[*q].push(*p);
    }
    let reach = search(init.keys().copied(), &fwd);
    let coreach = search(fin.keys().copied(), &bwd);
    let useful: Vec<bool> = (0..n).map(|q| reach[q] && coreach[q]).collect();
    if !useful.iter().any(|u| *u) {
        return Ok(SupAnalysis {
            value: ExtReal::NegInf,
            reason: VerdictReason::EmptyBehavior,
            witness: None,
        });
    }

    // Unbounded transition on a useful path.
    for ((p, sym, q), s) in &live {
        if s.value == ExtReal::PosInf && useful[*p] && useful[*q] {
            let mut symbols = Vec::new();
            let mut data = Vec::new();
            let hint_of = |key: &TransitionKey| sups.get(key).and_then(|s| s.witness.clone());
            let prefix = shortest_path(n, &live, init.keys().copied(), |s| s == *p);
            let suffix = shortest_path(n, &live, std::iter::once(*q), |s| fin.contains_key(&s));
            for key in prefix {
                data.push(hint_of(&key));
                symbols.push(key.1);
            }
            symbols.push(sym.clone());
            data.push(s.witness.clone());
            for key in suffix {
                data.push(hint_of(&key));
                symbols.push(key.1);
            }
            return Ok(SupAnalysis {
                value: ExtReal::PosInf,
                reason: VerdictReason::InfiniteTransitionOnUsefulPath,
                witness: Some(WitnessSkeleton { symbols, data }),
            });
        }
    }

    let edges: Vec<Edge> = live
        .iter()
        .filter(|((p, _, q), _)| useful[*p] && useful[*q])
        .map(|((p, sym, q), s)| Edge {
            src: *p,
            dst: *q,
            symbol: sym.clone(),
            weight: s.value.as_finite().expect("finite supremum").clone(),
            hint: s.witness.clone(),
        })
        .collect();

    // best[k][q]: heaviest walk with at most k edges from an initial state to q.
    let m = useful.iter().filter(|u| **u).count();
    let mut best: Vec<Vec<Option<Rational>>> = vec![(0..n)
        .map(|q| if useful[q] { init.get(&q).cloned() } else { None })
        .collect()];
    let mut pred: Vec<Vec<Option<usize>>> = vec![vec![None; n]];
    for k in 1..=m {
        let mut row = best[k - 1].clone();
        let mut prow: Vec<Option<usize>> = vec![None; n];
        for (i, e) in edges.iter().enumerate() {
            if let Some(v) = &best[k - 1][e.src] {
                let cand = v + &e.weight;
                if row[e.dst].as_ref().is_none_or(|cur| cand > *cur) {
                    row[e.dst] = Some(cand);
                    prow[e.dst] = Some(i);
                }
            }
        }
        best.push(row);
        pred.push(prow);
    }
    if best[m] != best[m - 1] {
        return Ok(SupAnalysis {
            value: ExtReal::PosInf,
            reason: VerdictReason::PositiveUsefulCycle,
            witness: None,
        });
    }

    let mut top: Option<(Rational, StateId)> = None;
    for (q, wf) in &fin {
        if let Some(v) = &best[m - 1][*q] {
            let total = v + wf;
            if top.as_ref().is_none_or(|(t, _)| total > *t) {
                top = Some((total, *q));
            }
        }
    }
    let (value, end) = top.expect("a useful final state is reachable");
    let mut symbols = Vec::new();
    let mut data = Vec::new();
    let mut q = end;
    let mut k = m - 1;
    loop {
        // Walk back to the level where best[.][q] was last improved.
        while k > 0 && pred[k][q].is_none() {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        let e = &edges[pred[k][q].expect("checked")];
        symbols.push(e.symbol.clone());
        data.push(e.hint.clone());
        q = e.src;
        k -= 1;
    }
    symbols.reverse();
    data.reverse();
    Ok(SupAnalysis {
        value: ExtReal::Finite(value),
        reason: VerdictReason::FiniteSup,
        witness: Some(WitnessSkeleton { symbols, data }),
    })
}

/// States reachable from `start` along `adj`.
fn search(start: impl Iterator<Item = StateId>, adj: &[Vec<StateId>]) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack: Vec<StateId> = start.collect();
    while let Some(q) = stack.pop() {
        if !seen[q] {
            seen[q] = true;
            stack.extend(adj[q].iter().copied());
        }
    }
    seen
}

/// Transitions of a shortest path from some state in `from` to some state in `to`.
fn shortest_path(
    n: usize,
    live: &[(&TransitionKey, &Supremum)],
    from: impl Iterator<Item = StateId>,
    to: impl Fn(StateId) -> bool,
) -> Vec<TransitionKey> {
    let mut via: Vec<Option<&TransitionKey>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for s in from {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    let mut end = None;
    while let Some(p) = queue.pop_front() {
        if to(p) {
            end = Some(p);
            break;
        }
        for (key, _) in live {
            if key.0 == p && !seen[key.2] {
                seen[key.2] = true;
                via[key.2] = Some(key);
                queue.push_back(key.2);
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = end.expect("target is reachable");
    while let Some(key) = via[cur] {
        out.push(key.clone());
        cur = key.0;
    }
    out.reverse();
    out
}

/// Supremum of the behavior over all words with data in `iv`.
pub fn behavior_sup(a: &Wffa, iv: &Interval) -> Result<ExtReal> {
    Ok(analyze_sup(a, iv)?.value)
}

/// Whether some word with data in `iv` has value strictly greater than `theta`.
///
/// This holds iff `theta` is below the supremum, whether or not the supremum is attained.
pub fn threshold_gt(a: &Wffa, theta: &ExtReal, iv: &Interval) -> Result<ThresholdVerdict> {
    if !theta.is_finite() {
        return Err(Error::Domain(format!("threshold {theta} must be finite")));
    }
    let analysis = analyze_sup(a, iv)?;
    Ok(ThresholdVerdict {
        answer: *theta < analysis.value,
        sup_value: analysis.value,
        witness: analysis.witness,
        reason: analysis.reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::FExpr;
    use crate::semiring::SemiringSpec;

    fn loop_with(e: FExpr) -> Wffa {
        let mut a = Wffa::new(SemiringSpec::arctic(), ["bot"]);
        let q = a.add_state("q");
        a.set_initial(q, 0.into()).unwrap();
        a.set_final(q, 0.into()).unwrap();
        a.add_transition(q, "bot", q, e).unwrap();
        a
    }

    fn euro_long() -> Wffa {
        let mut a = Wffa::new(SemiringSpec::arctic(), ["bot"]);
        let s = a.add_state("q_s");
        let e = a.add_state("q_e");
        a.set_initial(s, (-2).into()).unwrap();
        a.set_final(e, 0.into()).unwrap();
        a.add_transition(s, "bot", e, FExpr::plus(FExpr::times(FExpr::bind(1), FExpr::constant(-50)), FExpr::constant(0)))
            .unwrap();
        a
    }

    #[test]
    fn loop_sups() {
        let iv = Interval::non_negative();
        assert_eq!(behavior_sup(&loop_with(FExpr::bind(1)), &iv).unwrap(), ExtReal::PosInf);
        assert_eq!(behavior_sup(&loop_with(FExpr::constant(-1)), &iv).unwrap(), ExtReal::from_int(0));
        let pos = analyze_sup(&loop_with(FExpr::constant(1)), &iv).unwrap();
        assert_eq!(pos.value, ExtReal::PosInf);
        assert_eq!(pos.reason, VerdictReason::PositiveUsefulCycle);
    }

    #[test]
    fn transition_sup_examples() {
        let a = loop_with(FExpr::bind(1));
        let sups = transition_sups(&a, &Interval::bounded(0, 10)).unwrap();
        assert_eq!(sups.values().next().unwrap(), &ExtReal::from_int(10));
        let c = loop_with(FExpr::Const(ExtReal::NegInf));
        assert_eq!(transition_sups(&c, &Interval::bounded(0, 10)).unwrap().values().next().unwrap(), &ExtReal::NegInf);
    }

    #[test]
    fn euro_call_threshold() {
        let iv = Interval::bounded(0, 100);
        let yes = threshold_gt(&euro_long(), &ExtReal::from_int(40), &iv).unwrap();
        assert!(yes.answer);
        assert_eq!(yes.sup_value, ExtReal::from_int(48));
        let w = yes.witness.unwrap();
        assert_eq!(w.symbols, vec!["bot".to_string()]);
        assert_eq!(w.data, vec![Some(crate::semiring::int(100))]);
        let no = threshold_gt(&euro_long(), &ExtReal::from_int(48), &iv).unwrap();
        assert!(!no.answer);
        assert_eq!(no.to_string().lines().next().unwrap(), "no, sup = 48");
    }

    #[test]
    fn empty_and_support() {
        let dead = loop_with(FExpr::Const(ExtReal::NegInf));
        let mut dead = dead;
        dead.remove_final(0);
        let v = threshold_gt(&dead, &ExtReal::from_int(-1000), &Interval::non_negative()).unwrap();
        assert!(!v.answer);
        assert_eq!(v.reason, VerdictReason::EmptyBehavior);
        assert!(!support_nonempty(&dead).unwrap());
        let eps = loop_with(FExpr::Const(ExtReal::NegInf));
        let nfa = support_nfa(&eps).unwrap();
        assert!(nfa.accepts::<&str>(&[]));
        assert!(!nfa.accepts(&["bot"]));
        assert!(support_nonempty(&euro_long()).unwrap());
    }

    #[test]
    fn tropical_is_rejected() {
        let a = Wffa::new(SemiringSpec::tropical(), ["bot"]);
        assert!(support_nfa(&a).is_err());
    }
}
