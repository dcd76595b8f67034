//! Cross-module integration: generated proofs flow through checking,
//! normalization, translation and interpretation without friction.

use idll_core::bridge::{enumerate_cutfree, idll_to_ll, ll_to_idll, EnumOptions};
use idll_core::calculus::Logic;
use idll_core::corpus::{cut_corpus, semantic_envs};
use idll_core::cutelim::{default_fuel, is_cut_free, normalize};
use idll_core::semantics::soundness_suite;
use idll_core::sexpr::{parse_proof, print_proof};
use idll_core::syntax::parse_sequent;
use idll_core::totspace::Caps;
use idll_core::System;

#[test]
fn corpus_normalizes_and_round_trips() {
    let corpus = cut_corpus(0xC0FFEE, 30);
    for (i, (proof, sys)) in corpus.iter().enumerate() {
        // the textual format round-trips
        let text = print_proof(proof);
        assert_eq!(&parse_proof(&text).unwrap(), proof, "proof {i}");

        // normalization terminates, is cut-free, checked, conclusion kept
        let trace = normalize(proof, *sys, default_fuel(proof)).unwrap();
        assert!(is_cut_free(&trace.final_proof), "proof {i}");
        assert!(trace.final_proof.check(*sys).is_ok(), "proof {i}");
        assert_eq!(
            trace.final_proof.conclusion.multiset(),
            proof.conclusion.multiset(),
            "proof {i}"
        );

        // translations yield checkable proofs of the same sequent
        match sys.logic {
            Logic::IdLL => {
                let ll = idll_to_ll(proof).unwrap();
                assert!(ll.check(System::ll()).is_ok(), "proof {i}");
                assert_eq!(ll.conclusion, proof.conclusion);
            }
            Logic::LL => {
                let idll = ll_to_idll(proof).unwrap();
                assert!(idll.check(System::idll()).is_ok(), "proof {i}");
                assert_eq!(idll.conclusion, proof.conclusion);
            }
        }
    }
}

#[test]
fn corpus_reaches_every_reduction_case() {
    use std::collections::BTreeSet;
    let corpus = cut_corpus(0xFEED5EED, 400);
    let mut seen = BTreeSet::new();
    for (p, sys) in &corpus {
        let trace = normalize(p, *sys, default_fuel(p)).unwrap();
        for step in trace.steps {
            seen.insert(step.kind);
        }
    }
    let expected = [
        "axiom-left",
        "axiom-right",
        "times-par",
        "par-times",
        "with-plus-left",
        "with-plus-right",
        "plus-left-with",
        "plus-right-with",
        "nprom-nder",
        "nder-nprom",
        "nprom-contr",
        "contr-nprom",
        "nprom-weak",
        "weak-nprom",
        "prom-der",
        "der-prom",
        "prom-contr",
        "contr-prom",
        "prom-weak",
        "weak-prom",
        "commute-left:times",
        "commute-left:par",
        "commute-left:with",
        "commute-left:plus-l",
        "commute-left:contr",
        "commute-left:weak",
        "commute-left:nder",
        "commute-left:nprom",
        "commute-right:times",
        "commute-right:par",
        "commute-right:with",
        "commute-right:plus-l",
        "commute-right:contr",
        "commute-right:weak",
        "commute-right:nder",
        "commute-right:nprom",
        "commute-right:prom",
    ];
    for label in expected {
        assert!(seen.contains(label), "reduction case '{label}' never exercised; saw {seen:?}");
    }
}

#[test]
fn corpus_soundness_smoke() {
    let corpus = cut_corpus(0xBEEF, 10);
    let report = soundness_suite(&corpus, &semantic_envs(), Caps::default());
    assert!(report.passed(), "failures: {:?}", report.failures);
    assert!(report.step_checks > 0);
}

#[test]
fn enumeration_monotone_and_sound() {
    let goal = parse_sequent("|- ???p0^, !!!p0").unwrap();
    let sys = System::idll().atomic();
    let small =
        enumerate_cutfree(&goal, sys, &EnumOptions { max_nodes: 4, include_structural: false })
            .unwrap();
    let big = enumerate_cutfree(&goal, sys, &EnumOptions::default()).unwrap();
    assert!(small.proofs.len() <= big.proofs.len());
    assert_eq!(big.proofs.len(), 1);
    for p in &big.proofs {
        assert!(p.check(sys).is_ok());
    }
}
