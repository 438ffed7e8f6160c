mod common;

use common::*;
use doctrina::charax::is_splitting;
use doctrina::doctrine::*;
use doctrina::fixtures;
use doctrina::reglog::*;
use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

fn seq(sig: &Signature, text: &str) -> Sequent {
    parse_sequent(sig, text).unwrap()
}

fn entail(sig: &Signature, text: &str) -> Entailment {
    let s = seq(sig, text);
    entails_empty(sig, &[], &s.ctx, &s.lhs, &s.rhs).unwrap()
}

#[test]
fn parses_signatures_and_infers_contexts() {
    let sig = sig_r();
    assert_eq!(sig.rels.len(), 1);
    assert_eq!(sig.consts.len(), 1);
    let (ctx, _) = parse_formula(&sig, None, "R(x,y)").unwrap();
    assert_eq!(ctx, vec![("x".to_string(), 0), ("y".to_string(), 0)]);
    let (ctx, _) = parse_formula(&sig, None, "exists z:s. R(x,z) & y = x").unwrap();
    assert_eq!(ctx.len(), 2);
}

#[test]
fn reports_sort_and_syntax_errors() {
    let sig = sig_r();
    assert!(matches!(parse_formula(&sig, None, "x = y"), Err(doctrina::Error::Sort(_))));
    assert!(matches!(parse_formula(&sig, None, "exists y:t. R(y,y)"), Err(doctrina::Error::Sort(_))));
    assert!(matches!(parse_formula(&sig, None, "R(x)"), Err(doctrina::Error::Sort(_))));
    match parse_formula(&sig, None, "R(x,y) & & R(y,x)") {
        Err(doctrina::Error::Syntax { line: 1, col: 10, .. }) => {}
        other => panic!("{other:?}"),
    }
    match parse_theory("sort s\nrel R : s s\nrel R : s\n") {
        Err(doctrina::Error::Sort(m)) => assert!(m.contains("line 3")),
        other => panic!("{other:?}"),
    }
    match parse_theory("sort s\nfrobnicate\n") {
        Err(doctrina::Error::Syntax { line: 2, .. }) => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn function_symbols_and_axioms_are_parse_only() {
    let text = "sort s\nrel R : s s\nfun f : s -> s\naxiom x:s | R(x,x) |- R(f(x),x)\n";
    let (sig, axioms) = parse_theory(text).unwrap();
    assert_eq!(axioms.len(), 1);
    assert_eq!(axioms[0].line, 4);
    let s = &axioms[0];
    assert!(matches!(entails_empty(&sig, &axioms, &s.ctx, &s.lhs, &s.rhs), Err(doctrina::Error::UnsupportedTheory(_))));
    assert!(matches!(entails_empty(&sig, &[], &s.ctx, &s.lhs, &s.rhs), Err(doctrina::Error::UnsupportedFunctionSymbol(_))));
    assert!(matches!(syntactic_doctrine(&sig, &[], 1, 1), Err(doctrina::Error::UnsupportedFunctionSymbol(_))));
}

#[test]
fn normalization_examples() {
    let sig = sig_r();
    let nf = |text: &str| {
        let (ctx, f) = parse_formula(&sig, None, text).unwrap();
        (ctx.clone(), normalize(&sig, &ctx, &f).unwrap())
    };
    let (_, q) = nf("T & R(x,y)");
    assert_eq!(q.bound_count(), 0);
    assert_eq!(q.atoms.len(), 1);

    let (_, q) = nf("exists y:s. R(x,y) & (exists z:s. R(y,z))");
    assert_eq!(q.bound_count(), 2);
    let names: Vec<_> = q.nodes.iter().filter_map(|n| n.name.clone()).collect();
    assert_eq!(names, ["y", "z"]);
    assert_eq!(q.atoms.len(), 2);

    let (ctx, q) = nf("exists y:s. x = y & R(y,y)");
    assert_eq!(q.bound_count(), 0);
    let x = q.var_node(0);
    assert_eq!(q.atoms.iter().cloned().collect::<Vec<_>>(), vec![(0, vec![x, x])]);
    assert_eq!(format!("{}", Show(&sig, &q.to_formula(&sig, &ctx))), "R(x,x)");
}

#[test]
fn entailment_examples() {
    let sig = sig_r();
    let e = entail(&sig, "x:s | R(x,x) |- exists y:s. R(x,y)");
    assert!(e.verdict);
    assert_eq!(e.witness.unwrap(), vec![Witness { var: "y".into(), term: "x".into(), rigid: true }]);

    let e = entail(&sig, "x:s | exists y:s. R(x,y) |- R(x,x)");
    assert!(!e.verdict);
    let m = e.countermodel.unwrap();
    assert_eq!(m.elements.len(), 3);
    assert_eq!(m.relations["R"], vec![vec![m.assignment["x"], 2]]);

    let su = parse_theory(fixtures::SIG_U).unwrap().0;
    let e = entail(&su, " | T |- exists y:s. y = y");
    assert!(!e.verdict);
    assert!(e.countermodel.unwrap().elements.is_empty());
    // a constant inhabits the sort
    let e = entail(&sig, " | T |- exists y:s. y = y");
    assert!(e.verdict);
    assert_eq!(e.witness.unwrap()[0].term, "c");
}

#[test]
fn entailment_agrees_with_proof_search() {
    let (sig, corpus) = corpus();
    let mut agreed = 0;
    for (ctx, phi, psi) in &corpus {
        let t0 = Instant::now();
        let e = entails_empty(&sig, &[], ctx, phi, psi).unwrap();
        assert!(t0.elapsed() < Duration::from_secs(1));
        if let Some(o) = oracle(&sig, ctx, phi, psi, 1_000_000) {
            assert_eq!(e.verdict, o, "{} | {} |- {}", show_context(&sig, ctx), Show(&sig, phi), Show(&sig, psi));
            agreed += 1;
        }
        if let Some(m) = &e.countermodel {
            assert!(satisfies(&sig, m, phi));
            assert!(!satisfies(&sig, m, psi));
        }
    }
    assert_eq!(agreed, corpus.len());
    let positives = corpus.iter().filter(|(c, p, q)| entails_empty(&sig, &[], c, p, q).unwrap().verdict).count();
    assert!(positives > 20 && positives < 180, "{positives}");
}

#[test]
fn witnesses_reverify_quantifier_free() {
    let (sig, corpus) = corpus();
    let mut checked = 0;
    for (ctx, phi, psi) in &corpus {
        let p = normalize(&sig, ctx, phi).unwrap();
        let q = normalize(&sig, ctx, psi).unwrap();
        let e = entails_queries(&sig, ctx, &p, &q);
        if !e.verdict || q.is_horn() {
            continue;
        }
        let (open, inst) = instantiate(&sig, &p, &q, e.hom.as_ref().unwrap());
        assert!(inst.is_horn());
        let octx = named_context(&open.ctx);
        let again = entails_queries(&sig, &octx, &open, &inst);
        assert!(again.verdict);
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn entailment_is_a_preorder_monotone_under_conjunction() {
    let (sig, corpus) = corpus();
    let mut by_ctx: BTreeMap<usize, Vec<(Context, Formula)>> = BTreeMap::new();
    for (ctx, phi, psi) in &corpus {
        by_ctx.entry(ctx.len()).or_default().push((ctx.clone(), phi.clone()));
        by_ctx.entry(ctx.len()).or_default().push((ctx.clone(), psi.clone()));
    }
    for fs in by_ctx.values() {
        let fs = &fs[..fs.len().min(24)];
        let ctx = &fs[0].0;
        let e = |a: &Formula, b: &Formula| entails_empty(&sig, &[], ctx, a, b).unwrap().verdict;
        for (_, a) in fs {
            assert!(e(a, a));
        }
        for (_, a) in fs {
            for (_, b) in fs {
                if !e(a, b) {
                    continue;
                }
                for (_, c) in fs {
                    if e(b, c) {
                        assert!(e(a, c));
                    }
                    let ac = a.clone().and(c.clone());
                    let bc = b.clone().and(c.clone());
                    assert!(e(&ac, &bc));
                }
            }
        }
    }
}

#[test]
fn normalization_is_idempotent_and_equivalence_preserving() {
    let (sig, corpus) = corpus();
    for (ctx, phi, _) in &corpus {
        let q = normalize(&sig, ctx, phi).unwrap();
        let f = q.to_formula(&sig, ctx);
        let q2 = normalize(&sig, ctx, &f).unwrap();
        assert_eq!(q, q2, "{}", Show(&sig, phi));
        assert_eq!(oracle(&sig, ctx, phi, &f, 1_000_000), Some(true));
        assert_eq!(oracle(&sig, ctx, &f, phi, 1_000_000), Some(true));
    }
}

#[test]
fn canonical_forms_identify_exactly_equivalent_queries() {
    let (sig, corpus) = corpus();
    let mut qs = Vec::new();
    for (ctx, phi, psi) in corpus.iter().filter(|c| c.0.len() == 1) {
        qs.push((ctx.clone(), phi.clone()));
        qs.push((ctx.clone(), psi.clone()));
    }
    for (c1, a) in &qs {
        let ka = normalize(&sig, c1, a).unwrap().canonical();
        for (_, b) in &qs {
            let kb = normalize(&sig, c1, b).unwrap().canonical();
            let both = oracle(&sig, c1, a, b, 1_000_000) == Some(true) && oracle(&sig, c1, b, a, 1_000_000) == Some(true);
            assert_eq!(ka == kb, both);
        }
    }
}

#[test]
fn syntactic_doctrine_examples() {
    let sig = sig_r();
    let d = syntactic_doctrine(&sig, &[], 2, 1).unwrap();
    let x: Context = named_context(&[0]);
    let fib = d.fiber(&vec![0]);
    for text in ["T", "R(x,x)", "exists y:s. R(x,y)", "exists y:s. R(y,x)", "exists y:s. R(y,y)"] {
        let (_, f) = parse_formula(&sig, Some(&x), text).unwrap();
        assert!(fib.contains(&d.class_of(&x, &f).unwrap()), "{text}");
    }
    let xy = named_context(&[0, 0]);
    let (_, eq) = parse_formula(&sig, Some(&xy), "x = y").unwrap();
    assert_eq!(d.delta(&vec![0]).unwrap(), d.class_of(&xy, &eq).unwrap());
    assert!(matches!(syntactic_doctrine(&sig, &[seq(&sig, "x:s | T |- T")], 1, 1), Err(doctrina::Error::UnsupportedTheory(_))));
}

#[test]
fn materialized_fiber_matches_enumeration_by_proof_search() {
    // formulas over (x:s) with at most one atom and one bound variable,
    // quotiented by mutual provability
    let sig = sig_r();
    let ctx = named_context(&[0]);
    let terms = [Term::Var("x".into()), Term::Const(0), Term::Var("u".into())];
    let mut fs: Vec<Formula> = Vec::new();
    for eqs in [Formula::Top, Formula::Eq(terms[0].clone(), terms[1].clone())] {
        for bind in [false, true] {
            let avail = if bind { 3 } else { 2 };
            let mut bodies = vec![Formula::Top];
            for i in 0..avail {
                for j in 0..avail {
                    bodies.push(Formula::Atom(0, vec![terms[i].clone(), terms[j].clone()]));
                }
            }
            for b in bodies {
                let f = eqs.clone().and(b);
                fs.push(if bind { Formula::Exists("u".into(), 0, Box::new(f)) } else { f });
            }
        }
    }
    let mut classes: Vec<Formula> = Vec::new();
    for f in fs {
        let dup = classes.iter().any(|g| oracle(&sig, &ctx, &f, g, 100_000) == Some(true) && oracle(&sig, &ctx, g, &f, 100_000) == Some(true));
        if !dup {
            classes.push(f);
        }
    }
    let tab = materialize(&sig, 1, 1).unwrap();
    let one = tab.mat.obj(&vec![0]).unwrap();
    assert_eq!(tab.doctrine.fibers[one].len(), classes.len());
    let zero = tab.mat.obj(&vec![]).unwrap();
    assert_eq!(tab.doctrine.fibers[zero].len(), 5);
}

#[test]
fn materialization_validates_and_has_equality_cells() {
    let sig = sig_r();
    let t0 = Instant::now();
    let tab = materialize(&sig, 2, 2).unwrap();
    let r = validate_doctrine(&tab.doctrine, Level::Existential).unwrap();
    assert!(r.pass, "{r}");
    assert!(t0.elapsed() < Duration::from_secs(10));
    let xy = tab.mat.obj(&vec![0]).unwrap();
    assert!(tab.doctrine.delta.as_ref().unwrap()[xy].is_some());
    assert!(tab.doctrine.undefined_cells() > 0);
    let horn = horn_selection(&tab);
    for (a, set) in horn.sets.iter().enumerate() {
        let want: BTreeSet<usize> = (0..tab.reps[a].len()).filter(|&i| tab.reps[a][i].bound_count() == 0).collect();
        assert_eq!(*set, want);
    }
}

#[test]
fn horn_classes_split() {
    let sig = sig_r();
    let tab = materialize(&sig, 2, 2).unwrap();
    let t = &tab.doctrine;
    let horn = horn_selection(&tab);
    let mut checked = 0;
    for (a, set) in horn.sets.iter().enumerate() {
        for &x in set {
            let s = is_splitting(t, &a, &x, None);
            assert!(s.verdict, "{}", t.fibers[a].names[x]);
            checked += 1;
        }
    }
    assert!(checked > 20);
    // a quantified class need not split: ∃y R(x,y) has no section
    let x = tab.mat.obj(&vec![0]).unwrap();
    let d = syntactic_doctrine(&sig, &[], 2, 2).unwrap();
    let (_, f) = parse_formula(&sig, Some(&named_context(&[0])), "exists y:s. R(x,y)").unwrap();
    let q = d.class_of(&named_context(&[0]), &f).unwrap();
    let i = tab.class_of(&d, x, &q).unwrap();
    assert!(!is_splitting(t, &x, &i, None).verdict);
}

#[test]
fn rule_of_choice_witness_from_entailment() {
    let sig = sig_r();
    // ⊤ ⊢ ∃y (R(x,y) ∨-free) instances: R(x,c) entails ∃y R(x,y) with y := c
    let e = entail(&sig, "x:s | R(x,c) |- exists y:s. R(x,y)");
    assert!(e.verdict);
    assert_eq!(e.witness.unwrap()[0].term, "c");
    let e = entail(&sig, "x:s | R(x,c) & R(c,c) |- exists y:s. R(y,y)");
    assert_eq!(e.witness.unwrap()[0].term, "c");
}
