//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Run with `cargo test -p idll-cli --test acceptance -- --nocapture` to see
//! the per-criterion lines.

use std::collections::BTreeMap;
use std::process::Command;

use idll_core::bridge::{enumerate_cutfree, idll_to_ll, ll_to_idll, provable, EnumOptions, Provability, SearchBounds};
use idll_core::calculus::{canonicalize, Logic, ReasonCode, RuleTag};
use idll_core::corpus::{cut_corpus, random_sequents, roundtrip_formulas, semantic_envs};
use idll_core::cutelim::{is_cut_free, normalize};
use idll_core::laws::standard_bundle;
use idll_core::semantics::soundness_suite;
use idll_core::sexpr::print_proof;
use idll_core::syntax::{parse_formula, parse_sequent, Formula, Sequent};
use idll_core::totspace::Caps;
use idll_core::{Proof, System};

const CORPUS_SEED: u64 = 0xACCE55;

fn pass(n: usize, msg: &str) {
    println!("criterion {n}: PASS - {msg}");
}

/// Id; n-Der at 0; m-Prom at 1, concluding |- ?ⁿcore, !ᵐcore^.
fn eta(n: usize, m: usize, core: Formula) -> Proof {
    let id = Proof::identity(core);
    let der = Proof::n_dereliction(id, 0, n).unwrap();
    Proof::n_promotion(der, 1, m).unwrap()
}

fn p0() -> Formula {
    Formula::pos(0)
}

#[test]
fn criterion_1_checker_fidelity() {
    let idll = System::idll();

    // the four worked proofs
    let pi1 = eta(2, 1, p0()); // |- ??p0, !p0^
    let pi2 = eta(1, 2, p0()); // |- ?p0, !!p0^
    let eta11 = eta(1, 1, p0());
    let eta22 = eta(2, 2, p0());
    assert_eq!(pi1.conclusion, parse_sequent("|- ??p0, !p0^").unwrap());
    assert_eq!(pi2.conclusion, parse_sequent("|- ?p0, !!p0^").unwrap());
    for (name, proof) in [("pi1", &pi1), ("pi2", &pi2), ("eta11", &eta11), ("eta22", &eta22)] {
        assert!(proof.check(idll).is_ok(), "{name} must check in IdLL");
    }

    // ten mutations, each rejected with the expected reason code
    let seq = |s: &str| parse_sequent(s).unwrap();
    let node = |rule: RuleTag, conclusion: &str, premises: Vec<Proof>| Proof {
        rule,
        conclusion: seq(conclusion),
        premises,
    };
    let id_p0 = Proof::identity(p0()); // |- p0, p0^
    let mutations: Vec<(&str, Proof, System, ReasonCode)> = vec![
        (
            "n-dereliction of a ?-headed formula",
            node(
                RuleTag::NDereliction { at: 0, n: 1 },
                "|- ??p0, !p0^",
                vec![node(RuleTag::NDereliction { at: 0, n: 1 }, "|- ?p0, !p0^", vec![eta(1, 1, p0())])],
            ),
            idll,
            ReasonCode::SideCondition,
        ),
        (
            "n-promotion of a !-headed formula",
            node(RuleTag::NPromotion { at: 1, n: 1 }, "|- ?p0, !!p0^", vec![eta(1, 1, p0())]),
            idll,
            ReasonCode::SideCondition,
        ),
        (
            "promotion context not ?-headed",
            node(RuleTag::Promotion { at: 1 }, "|- p0, !p0^", vec![id_p0.clone()]),
            System::ll(),
            ReasonCode::SideCondition,
        ),
        (
            "n-promotion context not ?-headed",
            node(RuleTag::NPromotion { at: 1, n: 1 }, "|- p0, !p0^", vec![id_p0.clone()]),
            idll,
            ReasonCode::SideCondition,
        ),
        (
            "cut formula mismatch",
            node(
                RuleTag::Cut { formula: Formula::neg(0) },
                "|- p0, p1^",
                vec![id_p0.clone(), Proof::identity(Formula::pos(1))],
            ),
            idll,
            ReasonCode::ContextMismatch,
        ),
        (
            "LL dereliction inside IdLL",
            node(RuleTag::Dereliction { at: 0 }, "|- ?p0, p0^", vec![id_p0.clone()]),
            idll,
            ReasonCode::WrongSystem,
        ),
        (
            "IdLL block rule inside LL",
            node(RuleTag::NDereliction { at: 0, n: 2 }, "|- ??p0, p0^", vec![id_p0.clone()]),
            System::ll(),
            ReasonCode::WrongSystem,
        ),
        (
            "identity with a premise",
            node(RuleTag::Identity, "|- p0, p0^", vec![id_p0.clone()]),
            idll,
            ReasonCode::Arity,
        ),
        (
            "cut with a single premise",
            node(RuleTag::Cut { formula: p0() }, "|- p0", vec![id_p0.clone()]),
            idll,
            ReasonCode::Arity,
        ),
        (
            "compound identity under atomic axioms",
            Proof::identity(Formula::bang(p0())),
            idll.atomic(),
            ReasonCode::SideCondition,
        ),
    ];
    assert_eq!(mutations.len(), 10);
    for (what, proof, sys, want) in mutations {
        let err = proof.check(sys).expect_err(what);
        assert_eq!(err.reason, want, "{what}: got {:?} ({})", err.reason, err.detail);
    }
    pass(1, "four worked proofs check; ten mutations rejected with expected reason codes");
}

#[test]
fn criterion_2_cut_elimination() {
    let corpus = cut_corpus(CORPUS_SEED, 100);
    assert!(corpus.len() >= 100);
    for (i, (proof, sys)) in corpus.iter().enumerate() {
        assert!(proof.size() <= 40, "proof {i} too large");
        assert!(proof.contains_cut(), "proof {i} has no cut");
        let fuel = 1u64 << proof.size().min(62);
        let trace = normalize(proof, *sys, fuel)
            .unwrap_or_else(|e| panic!("proof {i} failed to normalize: {e}"));
        assert!(is_cut_free(&trace.final_proof), "proof {i}");
        assert!(trace.final_proof.check(*sys).is_ok(), "proof {i}");
        assert_eq!(
            trace.final_proof.conclusion.multiset(),
            proof.conclusion.multiset(),
            "proof {i}"
        );
    }
    pass(2, "100/100 corpus proofs normalize within fuel to checked cut-free proofs, conclusions preserved");
}

#[test]
fn criterion_3_isomorphism() {
    let idll = System::idll();
    let pi1 = eta(2, 1, p0()); // |- ??p0, !p0^
    let pi2 = eta(1, 2, p0()); // |- ?p0, !!p0^

    // cut on the !!/?? pair: |- ?p0, !p0^ normalizes to the 1-Der;1-Prom proof
    let cut_small = Proof::cut(pi2.clone(), pi1.clone()).unwrap();
    assert_eq!(cut_small.conclusion, parse_sequent("|- ?p0, !p0^").unwrap());
    let trace = normalize(&cut_small, idll, 1 << cut_small.size()).unwrap();
    assert_eq!(canonicalize(&trace.final_proof), canonicalize(&eta(1, 1, p0())));

    // cut on the !/? pair: |- ??p0, !!p0^ normalizes to the 2-Der;2-Prom proof
    let cut_big = Proof::cut(pi1, pi2).unwrap();
    assert_eq!(cut_big.conclusion, parse_sequent("|- ??p0, !!p0^").unwrap());
    let trace = normalize(&cut_big, idll, 1 << cut_big.size()).unwrap();
    assert_eq!(canonicalize(&trace.final_proof), canonicalize(&eta(2, 2, p0())));

    pass(3, "both cuts of pi1 against pi2 normalize to the matching block identity proofs");
}

#[test]
fn criterion_4_provability_equivalence() {
    // provability agreement over 50 sequents
    let sequents = random_sequents(0x7E0, 50);
    assert_eq!(sequents.len(), 50);
    let bounds = SearchBounds::default();
    let mut decided = 0;
    let mut yes = 0;
    for (i, s) in sequents.iter().enumerate() {
        let a = provable(s, System::ll().atomic(), &bounds).unwrap();
        let b = provable(s, System::idll().atomic(), &bounds).unwrap();
        match (&a, &b) {
            (Provability::Unknown, _) | (_, Provability::Unknown) => {}
            (x, y) => {
                decided += 1;
                assert_eq!(
                    matches!(x, Provability::Yes(_)),
                    matches!(y, Provability::Yes(_)),
                    "sequent {i} '{s}' decided differently"
                );
                if matches!(x, Provability::Yes(_)) {
                    yes += 1;
                }
            }
        }
        if let Provability::Yes(p) = &a {
            assert!(p.check(System::ll().atomic()).is_ok());
        }
        if let Provability::Yes(p) = &b {
            assert!(p.check(System::idll().atomic()).is_ok());
        }
    }
    assert!(decided >= 25, "only {decided} decided");
    assert!(yes >= 10, "only {yes} provable");

    // translations over the cut corpus
    let corpus = cut_corpus(CORPUS_SEED, 100);
    for (i, (proof, sys)) in corpus.iter().enumerate() {
        match sys.logic {
            Logic::IdLL => {
                let t = idll_to_ll(proof).unwrap_or_else(|e| panic!("proof {i}: {e}"));
                assert!(t.check(System::ll()).is_ok(), "proof {i}");
                assert_eq!(t.conclusion, proof.conclusion, "proof {i}");
            }
            Logic::LL => {
                let t = ll_to_idll(proof).unwrap_or_else(|e| panic!("proof {i}: {e}"));
                assert!(t.check(System::idll()).is_ok(), "proof {i}");
                assert_eq!(t.conclusion, proof.conclusion, "proof {i}");
            }
        }
    }
    pass(4, &format!(
        "LL/IdLL agree on all {decided} decided sequents ({yes} provable); all 100 corpus proofs translate"
    ));
}

#[test]
fn criterion_5_proof_counting() {
    let opts = EnumOptions::default();
    let mut counts = BTreeMap::new();
    for n in 1..=3usize {
        let goal = Sequent::new(vec![
            Formula::neg(0).whynots(n),
            Formula::pos(0).bangs(n),
        ]);
        let idll = enumerate_cutfree(&goal, System::idll().atomic(), &opts).unwrap();
        assert!(idll.exact, "IdLL n={n} must be exact");
        assert_eq!(idll.proofs.len(), 1, "IdLL n={n}");
        counts.insert(("idll", n), idll.proofs.len());

        if n <= 2 {
            let ll = enumerate_cutfree(&goal, System::ll().atomic(), &opts).unwrap();
            assert!(ll.exact, "LL n={n} must be exact");
            let expect = if n == 1 { 1 } else { 3 };
            assert_eq!(ll.proofs.len(), expect, "LL n={n}");
            counts.insert(("ll", n), ll.proofs.len());
        }
    }
    pass(5, "IdLL counts 1 for n=1,2,3; LL counts 1 (n=1) and 3 (n=2): strictly fewer cut-free proofs");
}

#[test]
fn criterion_6_totality_space_laws() {
    let reports = standard_bundle(3, 50, 300, 0x106, Caps::default()).unwrap();
    let failures: Vec<_> = reports.iter().filter(|r| r.failed()).collect();
    for f in &failures {
        println!("law failure: {f}");
    }
    assert!(failures.is_empty(), "{} law failures", failures.len());
    let passes = reports
        .iter()
        .filter(|r| matches!(r.outcome, idll_core::laws::LawOutcome::Pass))
        .count();
    assert!(passes > 1000, "only {passes} passing law instances");
    pass(6, &format!("{passes} law instances pass, zero failures (skips only outside law scope)"));
}

#[test]
fn criterion_7_semantic_soundness() {
    let corpus = cut_corpus(CORPUS_SEED, 100);
    let envs = semantic_envs();
    let report = soundness_suite(&corpus, &envs, Caps::default());
    for f in &report.failures {
        println!("soundness failure: proof {} env {} {:?} {}", f.proof, f.env, f.step, f.detail);
    }
    assert!(report.passed());
    assert_eq!(report.totality_checks, corpus.len() * envs.len());
    assert!(report.step_checks > 0);
    pass(7, &format!(
        "{} totality checks and {} reduce-step preservation checks, all pass",
        report.totality_checks, report.step_checks
    ));
}

#[test]
fn criterion_8_determinism_and_roundtrip() {
    // 1000 random formulas round-trip through the printer and parser
    let formulas = roundtrip_formulas(0x800, 1000);
    assert_eq!(formulas.len(), 1000);
    for f in &formulas {
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f.clone());
    }

    // byte-identical CLI output across two runs of a full command sweep
    let dir = tempdir();
    let proof_path = dir.join("pi.proof");
    std::fs::write(&proof_path, print_proof(&Proof::cut(eta(2, 1, p0()), eta(1, 2, p0())).unwrap()))
        .unwrap();
    let env_path = dir.join("env.txt");
    std::fs::write(&env_path, "p0 dis 2\n").unwrap();
    let proof = proof_path.to_str().unwrap();
    let envf = env_path.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["check", "--system", "idll", "--format", "machine", proof],
        vec!["normalize", "--system", "idll", "--trace", "--format", "machine", proof],
        vec!["count", "--system", "ll", "--max-nodes", "32", "|- ??p0^, !!p0"],
        vec!["count", "--system", "idll", "--max-nodes", "32", "|- ??p0^, !!p0"],
        vec!["prove", "--system", "idll", "--format", "machine", "|- ?p0^, !p0"],
        vec!["interp", "--env", envf, "--format", "machine", proof],
        vec!["soundness", "--seed", "3", "--count", "5", "--format", "machine"],
        vec![
            "model", "laws", "--max-base", "2", "--random", "5", "--pair-samples", "20",
            "--format", "machine",
        ],
    ];
    let sweep = || -> Vec<u8> {
        let mut all = Vec::new();
        for args in &commands {
            let out = Command::new(env!("CARGO_BIN_EXE_idll"))
                .args(args)
                .output()
                .expect("binary runs");
            all.extend_from_slice(&out.stdout);
            all.extend_from_slice(&out.stderr);
            all.push(out.status.code().unwrap_or(-1) as u8);
        }
        all
    };
    let first = sweep();
    let second = sweep();
    assert_eq!(first, second, "CLI output differs between identical runs");
    assert!(!first.is_empty());
    pass(8, "1000 formula round-trips; CLI sweep byte-identical across two runs");
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("idll-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
