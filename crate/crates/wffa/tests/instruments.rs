mod common;

use std::collections::BTreeSet;

use rand::Rng;

use common::*;
use wffa::instruments::{
    build_american_call, build_bond, build_bull_spread, build_euro_call, discount_word, effective_duration,
    evaluate_batch, load_scenarios, parse_scenarios, Engine, InstrumentParams, Position, BOT,
};
use wffa::automaton::op_hadamard;
use wffa::semiring::{int, rat};
use wffa::{Error, ExtReal, FinanceWord, SemiringSpec};

fn bot(ds: &[ExtReal]) -> FinanceWord {
    FinanceWord::new(ds.iter().map(|d| (BOT.to_string(), d.clone())).collect())
}

#[test]
fn worked_examples() {
    let bond = build_bond(&int(5), &int(100), &int(95)).unwrap();
    let w = FinanceWord::new(vec![("cpn".into(), r(9, 10)), ("fin".into(), r(8, 10))]);
    assert_eq!(bond.eval(&w).unwrap(), r(-13, 2));
    let w = FinanceWord::new(vec![("cpn".into(), r(9, 10)), ("dfl".into(), r(1, 2))]);
    assert_eq!(bond.eval(&w).unwrap(), r(-181, 2));

    let long = build_euro_call(Position::Long, &int(2), &int(50)).unwrap();
    let short = build_euro_call(Position::Short, &int(2), &int(50)).unwrap();
    assert_eq!(long.eval(&bot(&[r(55, 1)])).unwrap(), r(3, 1));
    assert_eq!(short.eval(&bot(&[r(55, 1)])).unwrap(), r(-3, 1));
    let both = op_hadamard(&long, &short).unwrap();
    for s in [0, 20, 50, 51, 90] {
        assert_eq!(both.eval(&bot(&[r(s, 1)])).unwrap(), r(0, 1));
    }

    let spread = build_bull_spread(&int(1), &int(50), &int(3), &int(60)).unwrap();
    for (s, v) in [(55, 7), (0, 2), (70, 12)] {
        assert_eq!(spread.eval(&bot(&[r(s, 1)])).unwrap(), r(v, 1));
    }
    assert!(build_bull_spread(&int(1), &int(60), &int(3), &int(50)).is_err());
}

#[test]
fn american_call_is_monotone_in_each_price() {
    let mut g = rng(61);
    let a = build_american_call(&int(2), &int(50)).unwrap();
    for _ in 0..100 {
        let path: Vec<ExtReal> = (0..4).map(|_| r(g.gen_range(30..80), 1)).collect();
        let base = a.eval(&bot(&path)).unwrap();
        let t = g.gen_range(0..4);
        let mut up = path.clone();
        up[t] = r(g.gen_range(80..90), 1);
        assert!(a.eval(&bot(&up)).unwrap() >= base);
    }
}

#[test]
fn bull_spread_payoff_is_bounded() {
    let (cl, kl, ch, kh) = (int(1), int(50), int(3), int(60));
    let a = build_bull_spread(&cl, &kl, &ch, &kh).unwrap();
    for s in (0..=120).step_by(5) {
        let v = a.eval(&bot(&[r(s, 1)])).unwrap();
        assert!(v >= ExtReal::Finite(&ch - &cl));
        assert!(v <= ExtReal::Finite(&ch - &cl + (&kh - &kl)));
    }
}

#[test]
fn params_build_matching_automata() {
    let p = InstrumentParams::EuroCall {
        position: Position::Long,
        premium: int(2),
        strike: int(50),
    };
    assert_eq!(p.build().unwrap(), build_euro_call(Position::Long, &int(2), &int(50)).unwrap());
    assert_eq!(InstrumentParams::Ddm.build().unwrap().state_count(), 2);
}

#[test]
fn coupon_bond_duration() {
    let bond = build_bond(&int(5), &int(100), &int(0)).unwrap();
    let spots = vec![rat(5, 100); 3];
    let delta = rat(1, 1000);
    let d = to_f64(&effective_duration(&bond, &spots, &delta).unwrap());
    let value = |s: f64| (1..=3).map(|i| if i < 3 { 5.0 } else { 105.0 } / (1.0 + s).powi(i)).sum::<f64>();
    let expected = (value(0.049) - value(0.051)) / (2.0 * value(0.05) * 0.001);
    assert!(d > 0.0);
    assert!((d - expected).abs() < 1e-9, "{d} vs {expected}");

    let zero = build_bond(&int(0), &int(0), &int(0)).unwrap();
    assert!(effective_duration(&zero, &spots, &delta).is_err());
    assert!(effective_duration(&bond, &spots, &int(0)).is_err());
    assert!(discount_word(&[rat(-1, 1)], &rat(0, 1)).is_err());
}

#[test]
fn scenario_files() {
    let alphabet: BTreeSet<String> = ["a", "c"].iter().map(|s| s.to_string()).collect();
    let spec = SemiringSpec::arctic();
    let text = "# header\nw1, a:51, a:53, a:48, a:46\n\na:1.5, c:0\n";
    let set = parse_scenarios(text, &spec, &alphabet).unwrap();
    assert_eq!(set.len(), 3);
    assert_eq!(set.labels, vec![Some("w1".to_string()), None, None]);
    assert_eq!(set.rows[0], FinanceWord::from_ints(&[("a", 51), ("a", 53), ("a", 48), ("a", 46)]));
    assert!(set.rows[1].is_empty());
    assert_eq!(set.rows[2].letters[0].1, r(3, 2));

    assert!(matches!(parse_scenarios("x, q:1", &spec, &alphabet), Err(Error::Domain(_))));
    assert!(matches!(parse_scenarios("a:-1", &spec, &alphabet), Err(Error::Domain(_))));
    match parse_scenarios("ok, a:1\nbad, a:zz", &spec, &alphabet) {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 6)),
        other => panic!("{other:?}"),
    }

    let path = std::env::temp_dir().join(format!("wffa-scenarios-{}.csv", std::process::id()));
    std::fs::write(&path, text).unwrap();
    let loaded = load_scenarios(&path, &spec, &alphabet).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(loaded, set);
    assert!(matches!(
        load_scenarios(&path, &spec, &alphabet),
        Err(Error::Io { .. })
    ));
}

#[test]
fn batch_engines_agree_and_keep_order() {
    let mut g = rng(62);
    let a = wffa(&mut g, &WffaShape::default());
    let alphabet = symbols(2);
    let rows: Vec<FinanceWord> = (0..50).map(|_| word(&mut g, &alphabet, 5)).collect();
    let m = evaluate_batch(&a, &rows, Engine::Matrix);
    let b = evaluate_batch(&a, &rows, Engine::BruteForce);
    assert_eq!(m, b);
    for (w, v) in rows.iter().zip(&m) {
        assert_eq!(v.as_ref().unwrap(), &a.behavior_bruteforce(w).unwrap());
    }
}
