use doctrina::category::{Cartesian, Category};
use doctrina::charax::*;
use doctrina::completions::existential_completion;
use doctrina::doctrine::*;
use doctrina::fixtures;
use doctrina::regexcat::Embedded;
use std::collections::BTreeSet;

const B: usize = 1 << 20;

fn idx(t: &TabDoctrine, obj: &str, elem: &str) -> (usize, usize) {
    t.element(obj, elem).unwrap_or_else(|| panic!("{obj}:{elem}"))
}

fn tops_set(t: &TabDoctrine) -> Vec<BTreeSet<usize>> {
    fixtures::tops(t).sets
}

/// Splitting read off directly: whenever `α = ∃β`, some `h` with
/// `α = P_{⟨id,h⟩}β`, quantifying over the raw tables.
fn splitting_oracle(t: &TabDoctrine, a: usize, alpha: usize) -> bool {
    let c = &t.base;
    for b in 0..c.num_objects() {
        let p = c.chosen_product(a, b).unwrap().clone();
        for beta in 0..t.fibers[p.obj].len() {
            if t.exists.as_ref().unwrap()[&p.p1][beta] != Some(alpha) {
                continue;
            }
            let ok = c.hom(a, b).iter().any(|&h| {
                let k = c.pair(&c.id(&a), &h).unwrap();
                t.reindex[k][beta] == Some(alpha)
            });
            if !ok {
                return false;
            }
        }
    }
    true
}

#[test]
fn bottom_of_fix1_splits_along_the_identity() {
    let t = fixtures::fix1();
    let s = is_splitting(&t, &0, &0, None);
    assert!(s.verdict);
    assert_eq!(s.prop_verdict, Some(true));
    assert_eq!(s.witness, Some(t.base.id(&0)));
}

#[test]
fn sub_diamond_splitting_examples() {
    let s = fixtures::sub_diamond();
    let (one, a) = idx(&s, "1", "a");
    let r = is_splitting(&s, &one, &a, None);
    assert!(!r.verdict);
    assert_eq!(r.prop_verdict, Some(false));
    let (b, beta) = r.counterexample.unwrap();
    assert_eq!(s.base.object_name(b), "a");
    assert_eq!(beta, s.top(&b));
    for x in 0..4 {
        assert!(is_splitting(&s, &x, &s.top(&x), None).verdict);
        assert!(is_free(&s, &x, &s.top(&x)));
    }
}

#[test]
fn splitting_agrees_with_oracle_and_prop_form() {
    for t in [fixtures::fix1(), fixtures::sub_diamond(), fixtures::flat_diamond(), fixtures::sub_two_chain()] {
        for a in 0..t.base.num_objects() {
            for x in 0..t.fibers[a].len() {
                let s = is_splitting(&t, &a, &x, None);
                assert_eq!(s.verdict, splitting_oracle(&t, a, x));
                assert_eq!(s.prop_verdict, Some(s.verdict));
            }
        }
    }
}

#[test]
fn flat_diamond_splitting_and_freeness() {
    let f = fixtures::flat_diamond();
    let (zero, bot) = idx(&f, "0", "bot");
    // over the initial object every section exists
    assert!(is_splitting(&f, &zero, &bot, None).verdict);
    assert!(is_free(&f, &zero, &bot));
    let (a, bot_a) = idx(&f, "a", "bot");
    assert!(!is_splitting(&f, &a, &bot_a, None).verdict);
    assert!(!is_free(&f, &a, &bot_a));
}

#[test]
fn rule_of_choice_examples() {
    assert!(has_rc(&fixtures::fix1()).pass);
    assert!(has_rc(&fixtures::sub_diamond()).pass);
    let f = fixtures::flat_diamond();
    let r = has_rc(&f);
    assert!(!r.pass);
    assert!(r.law_passed("rc.agree"));
    assert!(!r.law_passed("rc.definition"));
    // the instance A = 1, B = a, β = ⊤: ⊤ ≤ ∃β yet there is no arrow 1 → a
    let (one, a) = (3, 1);
    let p = f.base.chosen_product(one, a).unwrap().clone();
    let beta = f.top(&p.obj);
    assert!(f.leq(&one, &f.top(&one), &f.exists(&one, &a, &beta).unwrap()));
    assert!(f.base.hom(one, a).is_empty());
}

#[test]
fn cover_search_examples() {
    let t = fixtures::fix1();
    let c = find_cover(&t);
    assert_eq!(c.cover.unwrap(), fixtures::whole(&t));

    let s = fixtures::sub_diamond();
    let c = find_cover(&s);
    assert!(c.report.pass, "{}", c.report);
    assert_eq!(c.cover.unwrap().sets, tops_set(&s));

    // every element is covered from the free elements over 0, but the
    // tops elsewhere are not free
    let f = fixtures::flat_diamond();
    let c = find_cover(&f);
    assert!(c.cover.is_none());
    assert!(c.report.law_passed("enough_free"));
    let w = c.report.law("free.top").unwrap().witness.clone().unwrap();
    assert_eq!(w["object"], "a");
}

#[test]
fn cover_and_relative_cover_agree_on_every_selection() {
    for t in [fixtures::fix1(), fixtures::sub_diamond(), fixtures::flat_diamond(), fixtures::sub_two_chain()] {
        for sel in [fixtures::tops(&t), fixtures::whole(&t)] {
            let m = |a: &usize, x: &usize| sel.sets[*a].contains(x);
            assert_eq!(is_cover(&t, &m).pass, is_relative_cover(&t, &m).pass);
        }
    }
}

#[test]
fn enough_free_makes_splitting_free() {
    for t in [fixtures::fix1(), fixtures::sub_diamond(), fixtures::sub_two_chain()] {
        let c = find_cover(&t);
        assert!(c.cover.is_some());
        assert_eq!(c.splitting, c.free);
    }
}

#[test]
fn cover_search_recovers_the_generators_of_a_completion() {
    for t in [fixtures::fix1(), fixtures::sub_diamond(), fixtures::flat_diamond()] {
        let e = existential_completion(&t).unwrap();
        let c = find_cover(&e.doctrine);
        let image: Vec<BTreeSet<usize>> = e.inclusion.iter().map(|v| v.iter().copied().collect()).collect();
        assert_eq!(c.cover.expect("completion has a cover").sets, image);
    }
}

#[test]
fn epsilon_examples() {
    assert!(epsilon_operators(&fixtures::fix1()).pass);
    assert!(!epsilon_operators(&fixtures::sub_diamond()).pass);
    assert!(!epsilon_operators(&fixtures::flat_diamond()).pass);
    for t in [fixtures::fix1(), fixtures::sub_diamond(), fixtures::flat_diamond(), fixtures::sub_two_chain()] {
        let whole = find_cover(&t).cover.is_some_and(|c| c == fixtures::whole(&t));
        assert_eq!(epsilon_operators(&t).pass, whole);
    }
}

#[test]
fn localic_epsilon_is_an_argmax() {
    let l = fixtures::fix3(1);
    assert!(epsilon_operators(&l).pass);
    let g = l.base();
    let (one, bb) = (g.terminal(), vec![0usize]);
    // α(x) = m, α(y) = 0
    let alpha = vec![1u8, 0];
    let e = epsilon(&l, &one, &bb, &alpha).unwrap();
    assert_eq!(e.table, vec![0]);
    // argmax oracle over every α ∈ P(B×B)
    let p = g.product(&bb, &bb).unwrap();
    for alpha in l.fiber(&p.obj) {
        let e = epsilon(&l, &bb, &bb, &alpha).unwrap();
        for i in 0..2 {
            let row = &alpha[i * 2..i * 2 + 2];
            let best = *row.iter().max().unwrap();
            assert_eq!(row[e.table[i] as usize], best);
        }
    }
}

#[test]
fn main_theorem_instances() {
    let s = fixtures::sub_diamond();
    let emb = Embedded::from_subdoctrine(&fixtures::tops_sub(&s));
    let m = verify_main_theorem(&s, &emb, B).unwrap();
    assert!(m.cover && m.reg.pass && m.ex.pass);
    assert!(m.report.pass, "{}", m.report);

    let f = fixtures::flat_diamond();
    let emb = Embedded::from_subdoctrine(&fixtures::tops_sub(&f));
    let m = verify_main_theorem(&f, &emb, B).unwrap();
    assert!(!m.cover && !m.reg.pass && !m.ex.pass);
    assert!(m.report.pass, "{}", m.report);

    let t = fixtures::fix1();
    let emb = Embedded::from_subdoctrine(&Subdoctrine::whole(&t));
    let m = verify_main_theorem(&t, &emb, B).unwrap();
    assert!(m.cover && m.reg.pass && m.ex.pass);
    assert!(m.report.pass, "{}", m.report);
}

#[test]
fn main_theorem_for_a_completion_and_its_generators() {
    let t = fixtures::sub_two_chain();
    let tops = fixtures::tops_sub(&t);
    let emb0 = Embedded::from_subdoctrine(&tops);
    let e = existential_completion(&emb0.sub).unwrap();
    let emb = Embedded::from_completion(&emb0.sub, &e);
    let m = verify_main_theorem(&e.doctrine, &emb, B).unwrap();
    assert!(m.cover);
    assert!(m.report.pass, "{}", m.report);
}
