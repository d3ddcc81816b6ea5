//! Property tests over independently drawn inputs.

use proptest::prelude::*;

use selcalc::equations::{canon_rewards, decide_equiv_rewards, decide_pure_rewards, Purity};
use selcalc::monads::{expect0, AuxMonad, Dist, DWVal, DW, W};
use selcalc::reward::{fmt_rational, parse_rational, rat, Prob, Rational};
use selcalc::selection::{adequacy_holds, gamma_zero, denote_program, SemVal};
use selcalc::strategies::{argmax, select, select_bruteforce, select_fast, DEFAULT_STRATEGY_CAP};
use selcalc::syntax::{parse_term, pretty, typecheck, Const, Eff, Mode, Signature, Term, Type};
use selcalc::testgen::{GenConfig, Generator};

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..12).prop_map(|(n, d)| rat(n, d))
}

fn prob() -> impl Strategy<Value = Prob> {
    (0i64..=8).prop_map(|n| rat(n, 8))
}

/// A distribution over `{0..4}` built from positive integer weights.
fn dw_value() -> impl Strategy<Value = DWVal<u8>> {
    prop::collection::vec((1i64..6, rational(), 0u8..4), 1..5).prop_map(|parts| {
        let total: i64 = parts.iter().map(|(w, _, _)| w).sum();
        Dist::new(parts.into_iter().map(|(w, r, x)| (rat(w, total), (r, x)))).unwrap()
    })
}

fn program(seed: u64, mode: Mode, size: usize) -> Term {
    let mut g = Generator::new(GenConfig::new(seed, mode).with_size(size)).unwrap();
    g.program(&Type::Bool).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rationals_round_trip_through_text(r in rational()) {
        prop_assert_eq!(parse_rational(&fmt_rational(&r)).unwrap(), r);
    }

    #[test]
    fn distributions_are_normalized_and_merged(d in dw_value()) {
        let total: Rational = d.iter().map(|(_, p)| p.clone()).sum();
        prop_assert_eq!(total, rat(1, 1));
        let atoms: Vec<_> = d.support().collect();
        let mut sorted = atoms.clone();
        sorted.dedup();
        prop_assert_eq!(atoms.len(), sorted.len());
    }

    #[test]
    fn argmax_returns_first_maximum(xs in prop::collection::vec(-4i64..4, 1..12)) {
        let i = argmax(&xs, |x| rat(*x, 1)).unwrap();
        let best = *xs.iter().max().unwrap();
        prop_assert_eq!(i, xs.iter().position(|x| *x == best).unwrap());
    }

    #[test]
    fn reward_actions_compose(u in dw_value(), r in rational(), s in rational()) {
        let once = <DW as AuxMonad>::reward(&(r.clone() + s.clone()), &u);
        let twice = <DW as AuxMonad>::reward(&r, &<DW as AuxMonad>::reward(&s, &u));
        prop_assert_eq!(once, twice);
        prop_assert_eq!(expect0(&<DW as AuxMonad>::reward(&r, &u)), r + expect0(&u));
    }

    #[test]
    fn expectation_is_linear_in_mixing(u in dw_value(), v in dw_value(), p in prob()) {
        let m = <DW as AuxMonad>::pchoice(&p, &u, &v).unwrap();
        let q = rat(1, 1) - p.clone();
        prop_assert_eq!(expect0(&m), p * expect0(&u) + q * expect0(&v));
    }

    #[test]
    fn writer_bind_adds_rewards(r in rational(), s in rational(), x in 0u8..4) {
        let u = <W as AuxMonad>::reward(&r, &<W as AuxMonad>::unit(x));
        let out = <W as AuxMonad>::bind(&u, &mut |y| <W as AuxMonad>::reward(&s, &<W as AuxMonad>::unit(y + 1)));
        prop_assert_eq!(out.reward, r + s);
        prop_assert_eq!(out.value, x + 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_programs_print_and_parse_back(seed in any::<u64>()) {
        let t = program(seed, Mode::Prob, 30);
        let back = parse_term(&pretty(&t), &Signature::default()).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(typecheck(&Signature::default(), Mode::Prob, &[], &t).unwrap(), Type::Bool);
    }

    #[test]
    fn local_selection_equals_strategy_search(seed in any::<u64>()) {
        let mut g = Generator::new(GenConfig::new(seed, Mode::Prob)).unwrap();
        let e: Eff = g.effect_value(&[Const::TT, Const::FF], 10);
        let brute = selcalc::strategies::select_effect_bruteforce(&e, DEFAULT_STRATEGY_CAP).unwrap();
        prop_assert_eq!(select_fast(&e), brute);
    }

    #[test]
    fn fast_and_bruteforce_selection_agree_on_programs(seed in any::<u64>()) {
        let t = program(seed, Mode::Prob, 20);
        prop_assert_eq!(select(&t).unwrap(), select_bruteforce(&t, DEFAULT_STRATEGY_CAP).unwrap());
    }

    #[test]
    fn adequacy_at_zero(seed in any::<u64>()) {
        let t = program(seed, Mode::Rewards, 30);
        prop_assert!(adequacy_holds::<W>(&Signature::default(), Mode::Rewards, &t).unwrap());
        let t = program(seed, Mode::Prob, 30);
        prop_assert!(adequacy_holds::<DW>(&Signature::default(), Mode::Prob, &t).unwrap());
    }

    #[test]
    fn canonical_forms_are_idempotent_and_equivalent(seed in any::<u64>()) {
        let sig = Signature::default();
        let t = program(seed, Mode::Rewards, 30);
        let cf = canon_rewards(&sig, &t).unwrap();
        let back = cf.to_term();
        prop_assert_eq!(canon_rewards(&sig, &back).unwrap(), cf);
        prop_assert!(decide_equiv_rewards(&sig, &t, &back).unwrap());
        prop_assert_eq!(select(&t).unwrap(), select(&back).unwrap());
    }

    #[test]
    fn pure_programs_denote_units(seed in any::<u64>()) {
        let sig = Signature::default();
        let t = program(seed, Mode::Rewards, 12);
        let den = denote_program::<W>(&sig, Mode::Rewards, &t).unwrap().run(&gamma_zero());
        if let Purity::Pure(c) = decide_pure_rewards(&sig, &t).unwrap() {
            prop_assert_eq!(den, <W as AuxMonad>::unit(SemVal::Base(c)));
        }
    }
}
