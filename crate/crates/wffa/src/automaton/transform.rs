//! Weight-shape transformations: sum expansion, monomial lowering, purification, negation.

use std::collections::BTreeMap;

use super::ops::{normalize, NormalizeMode, NormalizeStrategy};
use super::{StateId, Wffa};
use crate::error::{Error, Result};
use crate::expr::FExpr;
use crate::pwa::{compile_pwa_for, Monomial};
use crate::semiring::{DataDomain, ExtReal, SemiringSpec};

/// Splits every transition whose weight is a top-level sum `e1 | ... | ek` into
/// `k` transitions. Each state `q` gets as many copies as the largest number of
/// summands on a transition entering it; all copies share the outgoing transitions.
pub fn expand_oplus(a: &Wffa) -> Wffa {
    let n = a.state_count();
    let mut count = vec![1usize; n];
    for ((_, _, q), e) in &a.transitions {
        count[*q] = count[*q].max(e.summands().len());
    }
    let mut out = Wffa::new(a.spec, a.alphabet.iter().cloned());
    let copies: Vec<Vec<StateId>> = (0..n)
        .map(|q| {
            let name = &a.states[q];
            if count[q] == 1 {
                vec![out.add_state(name.clone())]
            } else {
                (1..=count[q]).map(|i| out.add_state(format!("({name},{i})"))).collect()
            }
        })
        .collect();
    for (q, w) in &a.initial {
        out.initial.insert(copies[*q][0], w.clone());
    }
    for (q, w) in &a.finals {
        for c in &copies[*q] {
            out.finals.insert(*c, w.clone());
        }
    }
    for ((p, sym, q), e) in &a.transitions {
        for (j, summand) in e.summands().into_iter().enumerate() {
            for src in &copies[*p] {
                out.transitions.insert((*src, sym.clone(), copies[*q][j]), summand.clone());
            }
        }
    }
    out
}

/// Rewrites every weight into guarded affine form (monomials) without changing the behavior.
pub fn lower_to_monomials(a: &Wffa) -> Result<Wffa> {
    if !a.spec.is_arctic() {
        return Err(Error::Unsupported("monomial lowering needs the arctic semiring".into()));
    }
    if a.spec.domain() != DataDomain::NonNegReals {
        return Err(Error::Unsupported("monomial lowering needs non-negative data".into()));
    }
    let mut sums = a.clone();
    for e in sums.transitions.values_mut() {
        let pwa = compile_pwa_for(&a.spec, e)?;
        *e = FExpr::sum_of(pwa.to_monomials().iter().map(Monomial::to_expr)).expect("at least one monomial");
    }
    Ok(expand_oplus(&sums))
}

/// An automaton with the same behavior whose initial and final weights all equal one.
///
/// Fails when the value on the empty word is neither zero nor one, since no such
/// automaton exists then.
pub fn make_purely_transition_weighted(a: &Wffa) -> Result<Wffa> {
    if a.is_purely_transition_weighted() {
        return Ok(a.clone());
    }
    let eps = a.epsilon_value();
    if !a.spec.is_zero(&eps) && !a.spec.is_one(&eps) {
        return Err(Error::Domain(format!(
            "value {eps} on the empty word cannot be produced with unit initial and final weights"
        )));
    }
    let step = normalize(a, NormalizeMode::Initial, NormalizeStrategy::WeightFolding)?;
    let out = normalize(&step, NormalizeMode::Final, NormalizeStrategy::WeightFolding)?;
    debug_assert!(out.is_purely_transition_weighted());
    Ok(out)
}

/// Tropical automaton computing the negated arctic behavior, with `-inf` mapped to `+inf`.
///
/// Every constant and binding slope is negated; transitions whose weight is
/// identically `-inf` are removed.
pub fn negate_to_tropical(a: &Wffa) -> Result<Wffa> {
    if !a.spec.is_arctic() {
        return Err(Error::Unsupported("negation expects an arctic automaton".into()));
    }
    let spec = SemiringSpec::new(crate::semiring::SemiringKind::Tropical, a.spec.domain())?;
    let negate_map = |m: &BTreeMap<StateId, ExtReal>| -> BTreeMap<StateId, ExtReal> {
        m.iter()
            .filter(|(_, w)| **w != ExtReal::NegInf)
            .map(|(q, w)| (*q, -w.clone()))
            .collect()
    };
    let mut out = Wffa::new(spec, a.alphabet.iter().cloned());
    out.states = a.states.clone();
    out.initial = negate_map(&a.initial);
    out.finals = negate_map(&a.finals);
    for (key, e) in &a.transitions {
        if compile_pwa_for(&a.spec, e)?.support_nonempty() {
            out.transitions.insert(key.clone(), e.negated());
        }
    }
    Ok(out)
}
