//! Seeded random generators and reference oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wffa::expr::{guard_le, guard_lt};
use wffa::semiring::rat;
use wffa::{ExtReal, FExpr, FinanceWord, Rational, Regex, SemiringSpec, Wffa};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn r(n: i64, d: i64) -> ExtReal {
    ExtReal::Finite(rat(n, d))
}

pub fn symbols(n: usize) -> Vec<String> {
    ["a", "b", "c"][..n].iter().map(|s| s.to_string()).collect()
}

fn constant(rng: &mut ChaCha8Rng) -> ExtReal {
    match rng.gen_range(0..10) {
        0 => ExtReal::NegInf,
        1 => r(rng.gen_range(-5..=5), 2),
        _ => r(rng.gen_range(-3..=5), 1),
    }
}

fn slope(rng: &mut ChaCha8Rng) -> ExtReal {
    [r(-2, 1), r(-1, 1), r(0, 1), r(1, 2), r(1, 1), r(2, 1), r(3, 1)]
        .choose(rng)
        .unwrap()
        .clone()
}

pub fn primitive(rng: &mut ChaCha8Rng) -> FExpr {
    if rng.gen_bool(0.5) {
        FExpr::Const(constant(rng))
    } else {
        FExpr::Bind(slope(rng))
    }
}

pub fn affine(rng: &mut ChaCha8Rng) -> FExpr {
    FExpr::times(FExpr::Bind(slope(rng)), FExpr::Const(r(rng.gen_range(-4..=4), 1)))
}

/// A guard comparing the datum against a small constant.
pub fn basic_guard(rng: &mut ChaCha8Rng) -> FExpr {
    let x = FExpr::bind(1);
    let k = FExpr::constant(rng.gen_range(0..=4));
    match rng.gen_range(0..4) {
        0 => guard_le(x, k),
        1 => guard_lt(x, k),
        2 => guard_le(k, x),
        _ => guard_lt(k, x),
    }
}

pub fn monomial(rng: &mut ChaCha8Rng) -> FExpr {
    let mut c = basic_guard(rng);
    if rng.gen_bool(0.3) {
        c = FExpr::times(c, basic_guard(rng));
    }
    FExpr::times(c, affine(rng))
}

/// Arbitrary arctic expression of depth at most `depth`.
pub fn expr(rng: &mut ChaCha8Rng, depth: usize) -> FExpr {
    if depth == 0 || rng.gen_bool(0.25) {
        return primitive(rng);
    }
    let l = expr(rng, depth - 1);
    let rr = expr(rng, depth - 1);
    match rng.gen_range(0..4) {
        0 => FExpr::plus(l, rr),
        1 => FExpr::times(l, rr),
        2 => FExpr::eq(l, rr),
        _ => FExpr::neq(l, rr),
    }
}

/// A weight drawn from all syntactic classes.
pub fn mixed_weight(rng: &mut ChaCha8Rng) -> FExpr {
    match rng.gen_range(0..6) {
        0 => primitive(rng),
        1 => affine(rng),
        2 => monomial(rng),
        3 => FExpr::plus(monomial(rng), affine(rng)),
        _ => expr(rng, 3),
    }
}

fn end_weight(rng: &mut ChaCha8Rng) -> ExtReal {
    match rng.gen_range(0..4) {
        0 | 1 => r(0, 1),
        2 => r(rng.gen_range(-3..=3), 1),
        _ => r(rng.gen_range(-3..=3), 2),
    }
}

pub struct WffaShape {
    pub max_states: usize,
    pub symbols: usize,
    pub density: f64,
    /// Keep initial and final states disjoint.
    pub proper: bool,
}

impl Default for WffaShape {
    fn default() -> Self {
        WffaShape {
            max_states: 4,
            symbols: 2,
            density: 0.35,
            proper: false,
        }
    }
}

pub fn wffa_with(rng: &mut ChaCha8Rng, shape: &WffaShape, weight: &mut dyn FnMut(&mut ChaCha8Rng) -> FExpr) -> Wffa {
    let syms = symbols(shape.symbols);
    let mut a = Wffa::new(SemiringSpec::arctic(), syms.iter().cloned());
    let n = rng.gen_range(1..=shape.max_states);
    let qs: Vec<_> = (0..n).map(|i| a.add_state(format!("q{i}"))).collect();
    let mut any_initial = false;
    let mut any_final = false;
    for &q in &qs {
        let is_init = rng.gen_bool(0.4);
        if is_init {
            a.set_initial(q, end_weight(rng)).unwrap();
            any_initial = true;
        }
        if rng.gen_bool(0.4) && !(shape.proper && is_init) {
            a.set_final(q, end_weight(rng)).unwrap();
            any_final = true;
        }
    }
    if !any_initial {
        a.set_initial(qs[0], end_weight(rng)).unwrap();
        if shape.proper {
            a.remove_final(qs[0]);
        }
    }
    if !any_final {
        let last = qs[n - 1];
        if !(shape.proper && a.initial().contains_key(&last)) {
            a.set_final(last, end_weight(rng)).unwrap();
        }
    }
    debug_assert!(!shape.proper || a.is_proper());
    for &p in &qs {
        for s in &syms {
            for &q in &qs {
                if rng.gen_bool(shape.density) {
                    a.add_transition(p, s, q, weight(rng)).unwrap();
                }
            }
        }
    }
    a
}

pub fn wffa(rng: &mut ChaCha8Rng, shape: &WffaShape) -> Wffa {
    wffa_with(rng, shape, &mut mixed_weight)
}

pub const DATA_POOL: [(i64, i64); 7] = [(0, 1), (1, 2), (1, 1), (2, 1), (3, 1), (7, 2), (5, 1)];

pub fn datum(rng: &mut ChaCha8Rng) -> ExtReal {
    let (n, d) = *DATA_POOL.choose(rng).unwrap();
    r(n, d)
}

pub fn word(rng: &mut ChaCha8Rng, alphabet: &[String], max_len: usize) -> FinanceWord {
    let len = rng.gen_range(0..=max_len);
    FinanceWord::new((0..len).map(|_| (alphabet.choose(rng).unwrap().clone(), datum(rng))).collect())
}

/// Every word up to `max_len` over `alphabet` with data drawn from `pool`.
pub fn all_words(alphabet: &[String], pool: &[ExtReal], max_len: usize) -> Vec<FinanceWord> {
    let letters: Vec<(String, ExtReal)> = alphabet
        .iter()
        .flat_map(|a| pool.iter().map(move |d| (a.clone(), d.clone())))
        .collect();
    let mut out = vec![FinanceWord::empty()];
    let mut layer = vec![FinanceWord::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in &letters {
                let mut v = w.letters.clone();
                v.push(l.clone());
                next.push(FinanceWord::new(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn eps_free(rng: &mut ChaCha8Rng, alphabet: &[String], depth: usize) -> Regex {
    if depth == 0 || rng.gen_bool(0.3) {
        let weight = if rng.gen_bool(0.5) { primitive(rng) } else { mixed_weight(rng) };
        return Regex::letter(alphabet.choose(rng).unwrap().clone(), weight);
    }
    let l = eps_free(rng, alphabet, depth - 1);
    let rr = eps_free(rng, alphabet, depth - 1);
    match rng.gen_range(0..4) {
        0 => Regex::sum(l, rr),
        1 => Regex::cauchy(l, rr),
        2 => Regex::cauchy(l, Regex::star(rr)),
        _ => Regex::cauchy(Regex::star(l), rr),
    }
}

/// A random expression of the restricted grammar.
pub fn restricted_regex(rng: &mut ChaCha8Rng, alphabet: &[String], depth: usize) -> Regex {
    if depth == 0 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.3) {
            Regex::eps(end_weight(rng))
        } else {
            eps_free(rng, alphabet, 0)
        };
    }
    match rng.gen_range(0..4) {
        0 => Regex::sum(restricted_regex(rng, alphabet, depth - 1), restricted_regex(rng, alphabet, depth - 1)),
        1 => Regex::cauchy(restricted_regex(rng, alphabet, depth - 1), restricted_regex(rng, alphabet, depth - 1)),
        2 => Regex::star(eps_free(rng, alphabet, depth - 1)),
        _ => eps_free(rng, alphabet, depth - 1),
    }
}

/// Sum over all two-part splits of `w`.
pub fn cauchy_oracle(spec: &SemiringSpec, a: &Wffa, b: &Wffa, w: &FinanceWord) -> ExtReal {
    (0..=w.len()).fold(spec.zero(), |acc, k| {
        let x = a.behavior_bruteforce(&w.slice(0, k)).unwrap();
        let y = b.behavior_bruteforce(&w.slice(k, w.len())).unwrap();
        spec.add(&acc, &spec.mul(&x, &y))
    })
}

/// Sum over all factorizations of `w` into non-empty blocks.
pub fn star_oracle(spec: &SemiringSpec, a: &Wffa, w: &FinanceWord) -> ExtReal {
    let n = w.len();
    let mut suffix = vec![spec.zero(); n + 1];
    suffix[n] = spec.one();
    for start in (0..n).rev() {
        suffix[start] = (start + 1..=n).fold(spec.zero(), |acc, end| {
            let x = a.behavior_bruteforce(&w.slice(start, end)).unwrap();
            spec.add(&acc, &spec.mul(&x, &suffix[end]))
        });
    }
    suffix[0].clone()
}

pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap()
}

pub fn alphabet_set(a: &[String]) -> BTreeSet<String> {
    a.iter().cloned().collect()
}
