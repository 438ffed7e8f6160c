use doctrina::category::{validate_base, Cartesian, CartesianExt, FinCat};
use doctrina::charax::{find_cover, has_rc, is_cover, is_relative_cover, is_splitting, verify_main_theorem, epsilon};
use doctrina::doctrine::*;
use doctrina::fixtures;
use doctrina::regexcat::{Embedded, DEFAULT_BUDGET};
use doctrina::reglog::{normalize, parse_formula, parse_theory, CanonicalQuery, Signature};
use proptest::prelude::*;

/// An intersection-closed family of subsets of a 3-element set containing
/// the whole set, ordered by inclusion: a finite meet-semilattice with top.
fn semilattice() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..8, 0..6).prop_map(|seed| {
        let mut fam: Vec<u8> = seed;
        fam.push(7);
        loop {
            let mut grown = fam.clone();
            for &x in &fam {
                for &y in &fam {
                    grown.push(x & y);
                }
            }
            grown.sort_unstable();
            grown.dedup();
            if grown.len() == fam.len() {
                return grown;
            }
            fam = grown;
        }
    })
}

fn poset_of(fam: &[u8]) -> FinCat {
    let names: Vec<String> = fam.iter().map(|m| format!("s{m}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    FinCat::poset(&refs, |i, j| fam[i] & fam[j] == fam[i]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn subobjects_of_semilattices_are_existential(fam in semilattice()) {
        let c = poset_of(&fam);
        prop_assert!(validate_base(&c).pass);
        let (t, _) = subobjects_doctrine(&c);
        let r = validate_doctrine(&t, Level::Existential).unwrap();
        prop_assert!(r.pass, "{}", r);
        prop_assert!(validate_doctrine(&t, Level::Elementary).unwrap().pass);
    }

    #[test]
    fn splitting_forms_agree_on_semilattices(fam in semilattice()) {
        let (t, _) = subobjects_doctrine(&poset_of(&fam));
        for a in 0..t.base.num_objects() {
            for x in 0..t.fibers[a].len() {
                let s = is_splitting(&t, &a, &x, None);
                prop_assert_eq!(s.prop_verdict, Some(s.verdict));
            }
        }
    }

    #[test]
    fn tops_are_the_unique_cover_of_subobjects(fam in semilattice()) {
        let (t, _) = subobjects_doctrine(&poset_of(&fam));
        prop_assert!(has_rc(&t).pass);
        let found = find_cover(&t);
        prop_assert_eq!(found.cover, Some(fixtures::tops(&t)));
    }

    #[test]
    fn relative_cover_agrees_with_cover(fam in semilattice(), picks in prop::collection::vec(any::<bool>(), 64)) {
        let (t, _) = subobjects_doctrine(&poset_of(&fam));
        let mut k = 0;
        let mut sets = Vec::new();
        for a in 0..t.base.num_objects() {
            let mut s = std::collections::BTreeSet::new();
            for x in 0..t.fibers[a].len() {
                if x == t.fibers[a].top() || picks[k % picks.len()] {
                    s.insert(x);
                }
                k += 1;
            }
            sets.push(s);
        }
        let member = |a: &usize, x: &usize| sets[*a].contains(x);
        prop_assert_eq!(is_cover(&t, &member).pass, is_relative_cover(&t, &member).pass);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn main_theorem_holds_for_tops_of_subobjects(fam in semilattice()) {
        let (t, _) = subobjects_doctrine(&poset_of(&fam));
        let emb = Embedded::from_subdoctrine(&Subdoctrine::tops(&t));
        let m = verify_main_theorem(&t, &emb, DEFAULT_BUDGET).unwrap();
        prop_assert!(m.report.pass, "{}", m.report);
        prop_assert!(m.cover && m.reg.pass && m.ex.pass);
    }
}

/// Values of the localic doctrine on `{0 < m < 1}` as small integers.
fn table(n: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..3, n)
}

proptest! {
    #[test]
    fn epsilon_is_the_argmax(alpha in table(8)) {
        let l = fixtures::fix3(3);
        let c = l.base();
        let (a, b) = (vec![0, 0], vec![0]);
        let ab = c.prod_obj(&a, &b).unwrap();
        prop_assert_eq!(c.size(&ab), alpha.len());
        let h = epsilon(&l, &a, &b, &alpha).expect("a chain always has ε");
        let picked = l.reindex(&c.graph_of(&h).unwrap(), &alpha).unwrap();
        let best: Vec<u8> = alpha.chunks(2).map(|r| *r.iter().max().unwrap()).collect();
        prop_assert_eq!(&picked, &best);
        prop_assert_eq!(l.exists(&a, &b, &alpha).unwrap(), best);
    }

    #[test]
    fn localic_quantifier_is_left_adjoint(alpha in table(4), beta in table(2)) {
        let l = fixtures::fix3(2);
        let c = l.base();
        let (a, b) = (vec![0], vec![0]);
        let p = c.product(&a, &b).unwrap();
        let e = l.exists(&a, &b, &alpha).unwrap();
        let pulled = l.reindex(&p.p1, &beta).unwrap();
        prop_assert_eq!(l.leq(&a, &e, &beta), l.leq(&p.obj, &alpha, &pulled));
        // Frobenius
        let lhs = l.exists(&a, &b, &l.meet(&p.obj, &alpha, &pulled).unwrap()).unwrap();
        prop_assert_eq!(lhs, l.meet(&a, &e, &beta).unwrap());
    }
}

/// Random regular formulas over `R : s s` and a constant `c`, in context
/// `x, y`, with up to two bound variables.
fn formula() -> impl Strategy<Value = String> {
    let term = prop::sample::select(vec!["x", "y", "c", "u", "v"]);
    let atom = prop_oneof![
        (term.clone(), term.clone()).prop_map(|(s, t)| format!("R({s},{t})")),
        (term.clone(), term).prop_map(|(s, t)| format!("{s} = {t}")),
    ];
    prop::collection::vec(atom, 1..4).prop_map(|atoms| format!("exists u:s. exists v:s. {}", atoms.join(" & ")))
}

fn query(sig: &Signature, text: &str) -> CanonicalQuery {
    let ctx = vec![("x".to_string(), 0), ("y".to_string(), 0)];
    let (ctx, f) = parse_formula(sig, Some(&ctx), text).unwrap();
    normalize(sig, &ctx, &f).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn canonical_forms_are_stable(f in formula()) {
        let (sig, _) = parse_theory(fixtures::SIG_R).unwrap();
        let q = query(&sig, &f);
        let k = q.canonical();
        prop_assert_eq!(k.canonical(), k.clone());
        prop_assert!(q.entails(&k) && k.entails(&q));
        prop_assert!(q.entails(&q));
    }

    #[test]
    fn entailment_is_a_preorder_on_canonical_classes(f in formula(), g in formula(), h in formula()) {
        let (sig, _) = parse_theory(fixtures::SIG_R).unwrap();
        let (p, q, r) = (query(&sig, &f), query(&sig, &g), query(&sig, &h));
        if p.entails(&q) && q.entails(&r) {
            prop_assert!(p.entails(&r));
        }
        prop_assert_eq!(p.canonical() == q.canonical(), p.entails(&q) && q.entails(&p));
        let both = query(&sig, &format!("({f}) & ({g})"));
        prop_assert!(both.entails(&p) && both.entails(&q));
    }
}
