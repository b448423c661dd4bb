//! Weighted finite finance automata and their evaluation.

mod doc;
mod ops;
mod transform;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::expr::FExpr;
use crate::semiring::{ExtReal, FinanceWord, SemiringSpec, Symbol};

pub use doc::{parse_wffa, print_wffa};
pub use ops::{normalize, op_cauchy, op_hadamard, op_star, op_sum, NormalizeMode, NormalizeStrategy};
pub use transform::{expand_oplus, lower_to_monomials, make_purely_transition_weighted, negate_to_tropical};

/// Index of a state.
pub type StateId = usize;

/// Key of a transition: source, symbol, target.
pub type TransitionKey = (StateId, Symbol, StateId);

/// A weighted finite finance automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wffa {
    spec: SemiringSpec,
    alphabet: BTreeSet<Symbol>,
    states: Vec<String>,
    initial: BTreeMap<StateId, ExtReal>,
    finals: BTreeMap<StateId, ExtReal>,
    transitions: BTreeMap<TransitionKey, FExpr>,
}

/// A run: the visited states and the symbols read between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub states: Vec<StateId>,
    pub symbols: Vec<Symbol>,
}

impl Wffa {
    pub fn new<I, S>(spec: SemiringSpec, alphabet: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<Symbol>,
    {
        Wffa {
            spec,
            alphabet: alphabet.into_iter().map(Into::into).collect(),
            states: Vec::new(),
            initial: BTreeMap::new(),
            finals: BTreeMap::new(),
            transitions: BTreeMap::new(),
        }
    }

    pub fn spec(&self) -> &SemiringSpec {
        &self.spec
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        &self.alphabet
    }

    pub fn add_symbol(&mut self, a: impl Into<Symbol>) {
        self.alphabet.insert(a.into());
    }

    /// Adds a state; names are made unique by appending a suffix when needed.
    pub fn add_state(&mut self, name: impl Into<String>) -> StateId {
        let base: String = name.into();
        let mut name = base.clone();
        let mut k = 1;
        while self.states.contains(&name) {
            name = format!("{base}~{k}");
            k += 1;
        }
        self.states.push(name);
        self.states.len() - 1
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    fn check_state(&self, q: StateId) -> Result<()> {
        if q < self.states.len() {
            Ok(())
        } else {
            Err(Error::UnknownState(format!("#{q}")))
        }
    }

    /// Marks `q` initial with weight `w`, replacing any previous weight.
    pub fn set_initial(&mut self, q: StateId, w: ExtReal) -> Result<()> {
        self.check_state(q)?;
        self.spec.check_carrier(&w)?;
        self.initial.insert(q, w);
        Ok(())
    }

    /// Marks `q` final with weight `w`, replacing any previous weight.
    pub fn set_final(&mut self, q: StateId, w: ExtReal) -> Result<()> {
        self.check_state(q)?;
        self.spec.check_carrier(&w)?;
        self.finals.insert(q, w);
        Ok(())
    }

    pub fn remove_initial(&mut self, q: StateId) {
        self.initial.remove(&q);
    }

    pub fn remove_final(&mut self, q: StateId) {
        self.finals.remove(&q);
    }

    /// Adds a transition; a parallel transition is merged by summing the weights.
    pub fn add_transition(&mut self, p: StateId, a: &str, q: StateId, e: FExpr) -> Result<()> {
        self.check_state(p)?;
        self.check_state(q)?;
        if !self.alphabet.contains(a) {
            return Err(Error::UnknownSymbol(a.to_string()));
        }
        e.check_carrier(&self.spec)?;
        let key = (p, a.to_string(), q);
        let merged = match self.transitions.remove(&key) {
            Some(old) => FExpr::plus(old, e),
            None => e,
        };
        self.transitions.insert(key, merged);
        Ok(())
    }

    pub fn initial(&self) -> &BTreeMap<StateId, ExtReal> {
        &self.initial
    }

    pub fn finals(&self) -> &BTreeMap<StateId, ExtReal> {
        &self.finals
    }

    pub fn transitions(&self) -> &BTreeMap<TransitionKey, FExpr> {
        &self.transitions
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn initial_weight(&self, q: StateId) -> ExtReal {
        self.initial.get(&q).cloned().unwrap_or_else(|| self.spec.zero())
    }

    pub fn final_weight(&self, q: StateId) -> ExtReal {
        self.finals.get(&q).cloned().unwrap_or_else(|| self.spec.zero())
    }

    /// Transitions leaving `p` on `a`.
    pub fn successors<'a>(&'a self, p: StateId, a: &'a str) -> impl Iterator<Item = (StateId, &'a FExpr)> + 'a {
        let lo = (p, a.to_string(), 0);
        self.transitions
            .range(lo..)
            .take_while(move |((src, sym, _), _)| *src == p && sym == a)
            .map(|((_, _, dst), e)| (*dst, e))
    }

    /// All initial and final weights equal the semiring one.
    pub fn is_purely_transition_weighted(&self) -> bool {
        self.initial.values().chain(self.finals.values()).all(|w| self.spec.is_one(w))
    }

    /// Value on the empty word: the sum over states that are initial and final.
    pub fn epsilon_value(&self) -> ExtReal {
        let mut acc = self.spec.zero();
        for (q, wi) in &self.initial {
            if let Some(wf) = self.finals.get(q) {
                acc = self.spec.add(&acc, &self.spec.mul(wi, wf));
            }
        }
        acc
    }

    pub fn is_proper(&self) -> bool {
        self.spec.is_zero(&self.epsilon_value())
    }

    /// Maximum expression size over all transitions.
    pub fn max_weight_size(&self) -> usize {
        self.transitions.values().map(FExpr::size).max().unwrap_or(0)
    }

    /// Transition weights in key order.
    pub fn weight_expressions(&self) -> Vec<&FExpr> {
        self.transitions.values().collect()
    }

    fn check_word(&self, w: &FinanceWord) -> Result<()> {
        w.validate(&self.spec, &self.alphabet)
    }

    /// Behavior by enumerating every run explicitly.
    pub fn behavior_bruteforce(&self, w: &FinanceWord) -> Result<ExtReal> {
        self.check_word(w)?;
        let mut best = self.spec.zero();
        for (q0, wi) in &self.initial {
            self.enumerate_runs(w, 0, *q0, wi.clone(), &mut best);
        }
        Ok(best)
    }

    fn enumerate_runs(&self, w: &FinanceWord, pos: usize, q: StateId, weight: ExtReal, best: &mut ExtReal) {
        if pos == w.len() {
            if let Some(wf) = self.finals.get(&q) {
                let total = self.spec.mul(&weight, wf);
                *best = self.spec.add(best, &total);
            }
            return;
        }
        let (a, d) = &w.letters[pos];
        for (next, e) in self.successors(q, a) {
            let step = e.eval_unchecked(&self.spec, d);
            self.enumerate_runs(w, pos + 1, next, self.spec.mul(&weight, &step), best);
        }
    }

    /// All runs whose labels match `w`, in lexicographic order of state sequences.
    pub fn runs(&self, w: &FinanceWord) -> Result<Vec<Run>> {
        self.check_word(w)?;
        let mut out = Vec::new();
        let mut stack: Vec<StateId> = Vec::new();
        for q0 in self.initial.keys() {
            stack.push(*q0);
            self.collect_runs(w, &mut stack, &mut out);
            stack.pop();
        }
        Ok(out)
    }

    fn collect_runs(&self, w: &FinanceWord, stack: &mut Vec<StateId>, out: &mut Vec<Run>) {
        let pos = stack.len() - 1;
        let q = stack[pos];
        if pos == w.len() {
            if self.finals.contains_key(&q) {
                out.push(Run {
                    states: stack.clone(),
                    symbols: w.letters.iter().map(|(a, _)| a.clone()).collect(),
                });
            }
            return;
        }
        let a = &w.letters[pos].0;
        for (next, _) in self.successors(q, a) {
            stack.push(next);
            self.collect_runs(w, stack, out);
            stack.pop();
        }
    }

    /// Weight of a run on the data of `w`.
    pub fn run_weight(&self, run: &Run, w: &FinanceWord) -> ExtReal {
        let mut acc = self.initial_weight(run.states[0]);
        for (i, (a, d)) in w.letters.iter().enumerate() {
            let key = (run.states[i], a.clone(), run.states[i + 1]);
            let e = &self.transitions[&key];
            acc = self.spec.mul(&acc, &e.eval_unchecked(&self.spec, d));
        }
        self.spec.mul(&acc, &self.final_weight(*run.states.last().expect("non-empty run")))
    }

    /// Matrix representation `(lambda, xi, nu)`.
    pub fn to_matrix_form(&self) -> MatrixForm {
        let k = self.states.len();
        let lambda = (0..k).map(|q| self.initial_weight(q)).collect();
        let nu = (0..k).map(|q| self.final_weight(q)).collect();
        let mut xi: BTreeMap<Symbol, Vec<Vec<(StateId, FExpr)>>> =
            self.alphabet.iter().map(|a| (a.clone(), vec![Vec::new(); k])).collect();
        for ((p, a, q), e) in &self.transitions {
            xi.get_mut(a).expect("symbol in alphabet")[*p].push((*q, e.clone()));
        }
        MatrixForm {
            spec: self.spec,
            k,
            lambda,
            xi,
            nu,
        }
    }

    /// Behavior by vector-matrix products, linear in the word length.
    pub fn behavior_matrix(&self, w: &FinanceWord) -> Result<ExtReal> {
        self.check_word(w)?;
        Ok(self.to_matrix_form().eval_unchecked(w))
    }

    /// Alias for [`Wffa::behavior_matrix`].
    pub fn eval(&self, w: &FinanceWord) -> Result<ExtReal> {
        self.behavior_matrix(w)
    }

    /// States reachable from an initial state.
    pub fn reachable(&self) -> BTreeSet<StateId> {
        let mut adj: Vec<Vec<StateId>> = vec![Vec::new(); self.states.len()];
        for (p, _, q) in self.transitions.keys() {
            adj[*p].push(*q);
        }
        closure(self.initial.keys().copied(), &adj)
    }

    /// States from which a final state is reachable.
    pub fn coreachable(&self) -> BTreeSet<StateId> {
        let mut adj: Vec<Vec<StateId>> = vec![Vec::new(); self.states.len()];
        for (p, _, q) in self.transitions.keys() {
            adj[*q].push(*p);
        }
        closure(self.finals.keys().copied(), &adj)
    }

    /// Copy restricted to the given states, renumbered in ascending order.
    pub fn restrict(&self, keep: &BTreeSet<StateId>) -> Wffa {
        let mut out = Wffa::new(self.spec, self.alphabet.iter().cloned());
        let mut map = BTreeMap::new();
        for q in keep {
            map.insert(*q, out.add_state(self.states[*q].clone()));
        }
        for (q, w) in &self.initial {
            if let Some(n) = map.get(q) {
                out.initial.insert(*n, w.clone());
            }
        }
        for (q, w) in &self.finals {
            if let Some(n) = map.get(q) {
                out.finals.insert(*n, w.clone());
            }
        }
        for ((p, a, q), e) in &self.transitions {
            if let (Some(np), Some(nq)) = (map.get(p), map.get(q)) {
                out.transitions.insert((*np, a.clone(), *nq), e.clone());
            }
        }
        out
    }

    /// Removes states that lie on no path from an initial to a final state.
    pub fn trim(&self) -> Wffa {
        let keep: BTreeSet<StateId> = self.reachable().intersection(&self.coreachable()).copied().collect();
        self.restrict(&keep)
    }
}

fn closure(start: impl Iterator<Item = StateId>, adj: &[Vec<StateId>]) -> BTreeSet<StateId> {
    let mut seen: BTreeSet<StateId> = BTreeSet::new();
    let mut stack: Vec<StateId> = start.collect();
    while let Some(q) = stack.pop() {
        if seen.insert(q) {
            stack.extend(adj[q].iter().copied());
        }
    }
    seen
}

/// Matrix representation: `F(w) = lambda * xi(a1)(d1) * ... * xi(an)(dn) * nu`.
///
/// Rows of `xi` are stored sparsely; absent entries denote the constant zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixForm {
    pub spec: SemiringSpec,
    pub k: usize,
    pub lambda: Vec<ExtReal>,
    pub xi: BTreeMap<Symbol, Vec<Vec<(StateId, FExpr)>>>,
    pub nu: Vec<ExtReal>,
}

impl MatrixForm {
    /// Entry `xi(a)[i][j]`, the constant zero when there is no transition.
    pub fn entry(&self, a: &str, i: StateId, j: StateId) -> FExpr {
        self.xi
            .get(a)
            .and_then(|rows| rows[i].iter().find(|(col, _)| *col == j))
            .map(|(_, e)| e.clone())
            .unwrap_or_else(|| FExpr::Const(self.spec.zero()))
    }

    /// Evaluates a word whose symbols and data are known to be valid.
    pub fn eval_unchecked(&self, w: &FinanceWord) -> ExtReal {
        let spec = &self.spec;
        let mut v = self.lambda.clone();
        for (a, d) in &w.letters {
            let mut next = vec![spec.zero(); self.k];
            let Some(rows) = self.xi.get(a) else { return spec.zero() };
            for (i, vi) in v.iter().enumerate() {
                if spec.is_zero(vi) {
                    continue;
                }
                for (j, e) in &rows[i] {
                    let x = spec.mul(vi, &e.eval_unchecked(spec, d));
                    next[*j] = spec.add(&next[*j], &x);
                }
            }
            v = next;
        }
        v.iter()
            .zip(&self.nu)
            .fold(spec.zero(), |acc, (x, y)| spec.add(&acc, &spec.mul(x, y)))
    }
}

/// Behavior by run enumeration.
pub fn behavior_bruteforce(a: &Wffa, w: &FinanceWord) -> Result<ExtReal> {
    a.behavior_bruteforce(w)
}

/// Behavior by vector-matrix products.
pub fn behavior_matrix(a: &Wffa, w: &FinanceWord) -> Result<ExtReal> {
    a.behavior_matrix(w)
}

pub fn to_matrix_form(a: &Wffa) -> MatrixForm {
    a.to_matrix_form()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{guard_le, guard_lt};

    fn limit_order() -> Wffa {
        let mut a = Wffa::new(SemiringSpec::arctic(), ["a", "c"]);
        let w = a.add_state("q_w");
        let e = a.add_state("q_e");
        let c = a.add_state("q_c");
        a.set_initial(w, 0.into()).unwrap();
        a.set_final(e, 0.into()).unwrap();
        a.add_transition(w, "a", w, guard_lt(FExpr::constant(50), FExpr::bind(1))).unwrap();
        a.add_transition(w, "a", e, FExpr::times(guard_le(FExpr::bind(1), FExpr::constant(50)), FExpr::bind(10)))
            .unwrap();
        a.add_transition(w, "c", c, FExpr::constant(0)).unwrap();
        a.add_transition(e, "a", e, FExpr::constant(0)).unwrap();
        a
    }

    #[test]
    fn limit_order_values() {
        let a = limit_order();
        let w1 = FinanceWord::from_ints(&[("a", 51), ("a", 53), ("a", 48), ("a", 46)]);
        let w2 = FinanceWord::from_ints(&[("a", 51), ("a", 53), ("a", 51), ("a", 52)]);
        let w3 = FinanceWord::from_ints(&[("a", 51), ("c", 50)]);
        assert_eq!(a.behavior_bruteforce(&w1).unwrap(), ExtReal::from_int(480));
        assert_eq!(a.behavior_matrix(&w1).unwrap(), ExtReal::from_int(480));
        for w in [w2, w3] {
            assert_eq!(a.behavior_bruteforce(&w).unwrap(), ExtReal::NegInf);
            assert_eq!(a.behavior_matrix(&w).unwrap(), ExtReal::NegInf);
        }
    }

    #[test]
    fn runs_and_weights_agree() {
        let a = limit_order();
        let w1 = FinanceWord::from_ints(&[("a", 51), ("a", 53), ("a", 48), ("a", 46)]);
        let runs = a.runs(&w1).unwrap();
        let best = runs.iter().map(|r| a.run_weight(r, &w1)).max().unwrap();
        assert_eq!(best, ExtReal::from_int(480));
    }

    #[test]
    fn unknown_symbol_is_rejected() {
        let a = limit_order();
        let w = FinanceWord::from_ints(&[("z", 1)]);
        assert_eq!(a.behavior_matrix(&w), Err(Error::UnknownSymbol("z".into())));
        assert!(a.behavior_bruteforce(&FinanceWord::from_ints(&[("a", -1)])).is_err());
    }

    #[test]
    fn no_initial_state_gives_zero() {
        let mut a = Wffa::new(SemiringSpec::arctic(), ["a"]);
        let q = a.add_state("q");
        a.set_final(q, 0.into()).unwrap();
        a.add_transition(q, "a", q, FExpr::constant(1)).unwrap();
        let w = FinanceWord::from_ints(&[("a", 1)]);
        assert_eq!(a.behavior_bruteforce(&w).unwrap(), ExtReal::NegInf);
        assert_eq!(a.behavior_matrix(&FinanceWord::empty()).unwrap(), ExtReal::NegInf);
    }

    #[test]
    fn parallel_transitions_merge() {
        let mut a = Wffa::new(SemiringSpec::arctic(), ["a"]);
        let p = a.add_state("p");
        let q = a.add_state("q");
        a.add_transition(p, "a", q, FExpr::constant(1)).unwrap();
        a.add_transition(p, "a", q, FExpr::bind(1)).unwrap();
        assert_eq!(a.transition_count(), 1);
        assert_eq!(a.transitions()[&(p, "a".to_string(), q)], FExpr::plus(FExpr::constant(1), FExpr::bind(1)));
    }

    #[test]
    fn matrix_form_shapes() {
        let a = limit_order();
        let m = a.to_matrix_form();
        assert_eq!(m.k, 3);
        assert_eq!(m.lambda, vec![ExtReal::zero_value(), ExtReal::NegInf, ExtReal::NegInf]);
        assert_eq!(m.entry("c", 1, 0), FExpr::Const(ExtReal::NegInf));
        let mut single = Wffa::new(SemiringSpec::arctic(), ["x"]);
        let q = single.add_state("q");
        single.set_initial(q, 2.into()).unwrap();
        single.set_final(q, 3.into()).unwrap();
        assert_eq!(single.to_matrix_form().eval_unchecked(&FinanceWord::empty()), ExtReal::from_int(5));
    }

    #[test]
    fn duplicate_names_are_disambiguated() {
        let mut a = Wffa::new(SemiringSpec::arctic(), ["x"]);
        let p = a.add_state("q");
        let q = a.add_state("q");
        assert_ne!(a.state_name(p), a.state_name(q));
    }
}
