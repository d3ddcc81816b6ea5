//! Acceptance criteria, one line per criterion. Runs without the test harness so
//! every line is printed even when an earlier criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use selcalc::equations::{decide_pure_prob, Purity};
use selcalc::monads::{Dist, MonadKind, T2Val, T3Val, WVal};
use selcalc::reward::{int, rat, RewardStructure};
use selcalc::selection::{denote_program, gamma_zero, observe, MonadValue, SemVal};
use selcalc::monads::W;
use selcalc::strategies::{outcome_from, select, select_bruteforce, DEFAULT_STRATEGY_CAP};
use selcalc::suites::{find_suite, or_noncommutative_witness, run_suite, SuiteReport, PURITY_COUNTEREXAMPLE};
use selcalc::syntax::{parse_term, Const, Mode, Signature, Term};
use selcalc::testgen::gamma_of_table;

const SEED: u64 = 42;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn term(s: &str) -> Term {
    parse_term(s, &Signature::default()).expect("fixed source")
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.2?}, limit {limit:?}"))
    }
}

/// Runs suites with exact case counts; all must pass within `limit`.
fn suites_verdict(runs: &[(&str, usize)], limit: Duration, extra: impl Fn(&[SuiteReport]) -> Result<(), String>) -> Verdict {
    let start = Instant::now();
    let reports: Vec<SuiteReport> =
        runs.iter().map(|(name, n)| run_suite(find_suite(name).expect("registered suite"), SEED, *n)).collect();
    let elapsed = start.elapsed();
    let summary: Vec<String> = reports.iter().map(|r| format!("{} {}/{}", r.name, r.passed, r.cases)).collect();
    let mut problems: Vec<String> = reports.iter().filter(|r| !r.ok()).map(|r| r.to_string()).collect();
    if let Err(e) = within(elapsed, limit) {
        problems.push(e);
    }
    if let Err(e) = extra(&reports) {
        problems.push(e);
    }
    let detail = format!("{} in {elapsed:.2?}", summary.join(", "));
    if problems.is_empty() {
        verdict(true, detail)
    } else {
        verdict(false, format!("{detail}; {}", problems.join("; ")))
    }
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let m = term("(5 . tt) or (6 . ff)");
    let expected = outcome_from([(int(1), int(6), Term::ff())]).unwrap();
    let op = select(&m).unwrap();
    let den = denote_program::<W>(&Signature::default(), Mode::Rewards, &m).unwrap().run(&gamma_zero());
    let ok_den = den == WVal { reward: int(6), value: SemVal::Base(Const::FF) };
    let elapsed = start.elapsed();
    let ok = op == expected && ok_den && within(elapsed, Duration::from_millis(10)).is_ok();
    verdict(ok, format!("selection <6, ff>: {}, W at 0: {ok_den}, {elapsed:.2?}", op == expected))
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let m = term("(5 . tt) or ((5 . tt) +[1/2] (6 . ff))");
    let expected = outcome_from([(rat(1, 2), int(5), Term::tt()), (rat(1, 2), int(6), Term::ff())]).unwrap();
    let fast = select(&m).unwrap();
    let brute = select_bruteforce(&m, DEFAULT_STRATEGY_CAP).unwrap();
    let elapsed = start.elapsed();
    let ok = fast == expected && brute == expected && within(elapsed, Duration::from_millis(10)).is_ok();
    verdict(ok, format!("1/2<5,tt> + 1/2<6,ff>: {}, {elapsed:.2?}", fast == expected))
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let m = term("1 . tt +[1/2] (2 . ff +[2/5] 3 . tt)");
    let t1 = observe(&m, MonadKind::DW).unwrap();
    let t1_expected = Dist::new([
        (rat(1, 2), (int(1), Term::tt())),
        (rat(1, 5), (int(2), Term::ff())),
        (rat(3, 10), (int(3), Term::tt())),
    ])
    .unwrap();
    let dist = Dist::new([(rat(4, 5), Term::tt()), (rat(1, 5), Term::ff())]).unwrap();
    let t3 = observe(&m, MonadKind::T3).unwrap();
    let t3_expected = T3Val { dist: dist.clone(), rew: rat(9, 5) };
    let t2 = observe(&m, MonadKind::T2).unwrap();
    let t2_expected =
        T2Val::new(dist, BTreeMap::from([(Term::tt(), rat(7, 4)), (Term::ff(), int(2))])).unwrap();
    let elapsed = start.elapsed();
    let (a, b, c) = (t1 == MonadValue::DW(t1_expected), t3 == MonadValue::T3(t3_expected), t2 == MonadValue::T2(t2_expected));
    let ok = a && b && c && within(elapsed, Duration::from_millis(10)).is_ok();
    verdict(ok, format!("T1: {a}, T3 <4/5 tt + 1/5 ff, 9/5>: {b}, T2 (tt 7/4, ff 2): {c}, {elapsed:.2?}"))
}

fn criterion_4() -> Verdict {
    suites_verdict(&[("adequacy-rewards", 500)], Duration::from_secs(30), |_| Ok(()))
}

fn criterion_5() -> Verdict {
    suites_verdict(
        &[("adequacy-prob-T1", 300), ("adequacy-prob-T2", 300), ("adequacy-prob-T3", 300)],
        Duration::from_secs(60),
        |_| Ok(()),
    )
}

fn criterion_6() -> Verdict {
    suites_verdict(&[("local-vs-brute", 300)], Duration::from_secs(60), |rs| {
        let ties = rs[0].tag("tie");
        if ties >= 30 {
            Ok(())
        } else {
            Err(format!("only {ties} forced ties"))
        }
    })
}

fn criterion_7() -> Verdict {
    suites_verdict(&[("axioms-fig3", 1000), ("axioms-fig4", 1800)], Duration::from_secs(600), |rs| {
        let short: Vec<String> = rs
            .iter()
            .flat_map(|r| r.tags.iter().filter(|(_, n)| **n < 100).map(|(k, n)| format!("{k}: {n}")))
            .collect();
        if short.is_empty() {
            Ok(())
        } else {
            Err(format!("fewer than 100 instances: {}", short.join(", ")))
        }
    })
}

fn criterion_8() -> Verdict {
    suites_verdict(&[("equiv-roundtrip", 200)], Duration::from_secs(600), |_| Ok(()))
}

fn counterexample_check() -> Result<(), String> {
    let sig = Signature::default();
    let m = term(PURITY_COUNTEREXAMPLE);
    for kind in MonadKind::PROBABILISTIC {
        let Purity::Impure { witness } =
            decide_pure_prob(kind, RewardStructure::AddRationals, &sig, &m).map_err(|e| e.to_string())?
        else {
            return Err(format!("counterexample judged pure in {}", kind.name()));
        };
        let den = denote_program::<selcalc::monads::DW>(&sig, Mode::Prob, &m).map_err(|e| e.to_string())?;
        let (at0, atw) = (den.run(&gamma_zero()), den.run(&gamma_of_table(&witness)));
        if at0 == atw {
            return Err(format!("witness {witness:?} does not change the denotation"));
        }
    }
    Ok(())
}

fn criterion_9() -> Verdict {
    suites_verdict(&[("purity-rewards", 200), ("purity-prob", 600)], Duration::from_secs(600), |_| counterexample_check())
}

fn criterion_10() -> Verdict {
    suites_verdict(
        &[
            ("monad-laws", 1000),
            ("theta-morphism", 500),
            ("k-gamma-injective", 500),
            ("char-bool", 200),
            ("genax-or", 200),
            ("argmax-lemmas", 500),
        ],
        Duration::from_secs(90),
        |rs| {
            let char_counts: Vec<usize> = ["T1", "T2", "T3"].iter().map(|k| rs[3].tag(k)).collect();
            if char_counts.iter().any(|n| *n < 200) {
                return Err(format!("unequal pairs per monad below 200: {char_counts:?}"));
            }
            match or_noncommutative_witness() {
                Ok(true) => Ok(()),
                _ => Err("stored non-commutativity witness fails".into()),
            }
        },
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("1 rewards example", criterion_1),
        ("2 probabilistic example", criterion_2),
        ("3 observations of E2", criterion_3),
        ("4 adequacy, rewards", criterion_4),
        ("5 adequacy, T1/T2/T3", criterion_5),
        ("6 local characterization", criterion_6),
        ("7 axiom soundness", criterion_7),
        ("8 equivalence round trip", criterion_8),
        ("9 purity", criterion_9),
        ("10 structure laws", criterion_10),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let v = run();
        println!("criterion {name}: {} ({})", if v.ok { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.ok);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
