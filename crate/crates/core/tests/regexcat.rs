use doctrina::category::{limits, validate_base, Category, FinCat};
use doctrina::completions::*;
use doctrina::doctrine::*;
use doctrina::fixtures;
use doctrina::regexcat::*;

const B: usize = DEFAULT_BUDGET;

fn reg(t: &TabDoctrine) -> RelCat<usize, usize> {
    reg_completion(t, None, B).unwrap()
}

fn obj(rc: &RelCat<usize, usize>, t: &TabDoctrine, a: &str, x: &str) -> usize {
    let (a, x) = t.element(a, x).unwrap();
    rc.find_object(t, &a, &x).unwrap()
}

#[test]
fn reg_of_fix1_is_the_two_chain() {
    let t = fixtures::fix1();
    let rc = reg(&t);
    assert!(rc.report.pass, "{}", rc.report);
    let (bot, top) = (obj(&rc, &t, "*", "bot"), obj(&rc, &t, "*", "top"));
    // over •×• = • there are two candidate relations; filter by hand
    assert_eq!(rc.cat.hom(bot, top).len(), 1);
    assert_eq!(rc.arrows[rc.cat.hom(bot, top)[0]].rel, 0);
    assert!(rc.cat.hom(top, bot).is_empty());
    assert_eq!(rc.arrows[rc.cat.id(&top)].rel, 1);
    assert!(limits::equivalent_categories(&rc.cat, &FinCat::two_chain()));
    assert!(validate_base(&rc.cat).pass);
}

#[test]
fn reg_of_sub_diamond_is_a_category() {
    let s = fixtures::sub_diamond();
    let rc = reg(&s);
    assert!(rc.report.pass, "{}", rc.report);
    assert_eq!(rc.cat.num_objects(), 9);
    let r = validate_base(&rc.cat);
    assert!(r.pass, "{r}");
    assert!(r.law("associative").unwrap().checked > 0);
}

#[test]
fn hom_enumeration_respects_the_budget() {
    let s = fixtures::sub_diamond();
    assert!(matches!(reg_completion(&s, None, 1), Err(doctrina::Error::FiberTooLarge { budget: 1, .. })));
}

#[test]
fn regular_epi_examples() {
    let t = fixtures::fix1();
    let rc = reg(&t);
    for a in 0..rc.cat.num_objects() {
        assert_eq!(is_regular_epi(&t, &rc, rc.cat.id(&a)), Some(true));
    }
    let (bot, top) = (obj(&rc, &t, "*", "bot"), obj(&rc, &t, "*", "top"));
    let m = rc.cat.hom(bot, top)[0];
    assert_eq!(is_regular_epi(&t, &rc, m), Some(false));
    let (e, mono) = image_factorization(&t, &rc, m).unwrap();
    assert_eq!(rc.cat.cod(&e), bot);
    assert_eq!(e, rc.cat.id(&bot));
    assert_eq!(mono, m);

    // the cover (A×B, α) → (B, ∃_{π_B} α) is a regular epi
    let s = fixtures::sub_diamond();
    let rs = reg(&s);
    let c = &s.base;
    for a in 0..4 {
        for b in 0..4 {
            let ab = c.chosen_product(a, b).unwrap().obj;
            for x in 0..s.fibers[ab].len() {
                let k = projection_cover(&s, &rs, &a, &b, &x).unwrap();
                assert_eq!(is_regular_epi(&s, &rs, k), Some(true));
            }
        }
    }
}

#[test]
fn regular_internals_agree() {
    for t in [fixtures::fix1(), fixtures::sub_diamond()] {
        let rc = reg(&t);
        let r = check_regular(&t, &rc);
        assert!(r.pass, "{r}");
        assert!(r.law("regular_epi.agree").unwrap().checked == rc.arrows.len());
        assert!(r.law("regular_epi.stable").unwrap().checked > 0);
    }
}

#[test]
fn projectivity_examples() {
    let t = fixtures::fix1();
    let rc = reg(&t);
    assert!(is_regular_projective(&t, &rc, obj(&rc, &t, "*", "top")));

    // the flat diamond: every object is projective since the category is a
    // preorder whose regular epis are isomorphisms
    let f = fixtures::flat_diamond();
    let rf = reg(&f);
    for x in 0..rf.cat.num_objects() {
        assert!(is_regular_projective(&f, &rf, x));
    }
}

#[test]
fn identity_functor_is_an_equivalence() {
    let c = FinCat::diamond();
    let r = check_equivalence(&Functor::identity(&c));
    assert!(r.pass, "{r}");
}

fn tops_of_sub_diamond() -> (TabDoctrine, Embedded) {
    let s = fixtures::sub_diamond();
    let emb = Embedded::from_subdoctrine(&fixtures::tops_sub(&s));
    (s, emb)
}

#[test]
fn graph_functor_on_tops() {
    let (s, emb) = tops_of_sub_diamond();
    emb.check(&s).unwrap();
    let pred_sub = pred_category(&emb.sub).unwrap();
    let rs = reg(&s);
    let (g, r) = graph_functor(&s, &emb, &pred_sub, &rs).unwrap();
    assert!(r.pass, "{r}");
    assert!(r.law("formulas_agree").unwrap().checked == pred_sub.cat().num_morphisms());
    for a in 0..pred_sub.cat().num_objects() {
        let id = pred_sub.cat().id(&a);
        assert_eq!(g.mor[id], rs.cat.id(&g.obj[a]));
    }
    let eq = check_equivalence(&g);
    assert!(eq.law_passed("faithful"));
}

#[test]
fn graph_functor_on_fix1_is_faithful() {
    let t = fixtures::fix1();
    let emb = Embedded { sub: t.clone(), embed: vec![vec![0, 1]] };
    let pred = pred_category(&t).unwrap();
    let rc = reg(&t);
    let (g, r) = graph_functor(&t, &emb, &pred, &rc).unwrap();
    assert!(r.pass, "{r}");
    assert!(check_equivalence(&g).law_passed("faithful"));
}

#[test]
fn psi_to_pcx_preserves_everything() {
    let (s, emb) = tops_of_sub_diamond();
    let pred_sub = pred_category(&emb.sub).unwrap();
    let pred_p = pred_category(&s).unwrap();
    let ps = psi(&pred_sub).unwrap();
    let m = psi_to_pcx(&s, &emb, &pred_sub, &pred_p, &ps).unwrap();
    let (r, flags) = check_psi_to_pcx(&m);
    assert!(r.pass, "{r}");
    assert!(flags.equality && flags.quantifiers);
    // ι of a class agrees with ∃ along a representative
    for x in 0..pred_sub.cat().num_objects() {
        for e in 0..ps.doctrine.fibers[x].len() {
            let rep = &pred_sub.tab.mat.mors[ps.reps[x][e]];
            let want = s.exists_along(&rep.f, &emb.embed[rep.src.0][rep.src.1]);
            assert_eq!(iota(&s, &emb, &pred_sub, &ps, x, e), want);
        }
    }
}

#[test]
fn g_reg_and_g_ex_for_sub_diamond_are_equivalences() {
    let (s, emb) = tops_of_sub_diamond();
    let pred_sub = pred_category(&emb.sub).unwrap();
    let ps = psi(&pred_sub).unwrap();
    let reg_psi = reg_completion(&ps.doctrine, None, B).unwrap();
    let reg_p = reg(&s);
    let g_reg = completion_functor(&s, &emb, &pred_sub, &ps, &reg_psi, &reg_p).unwrap();
    let r = check_equivalence(&g_reg);
    assert!(r.pass, "{r}");
    let (g, _) = graph_functor(&s, &emb, &pred_sub, &reg_p).unwrap();
    let r = check_extends_graph(&g, &g_reg, &ps, &pred_sub, &reg_psi);
    assert!(r.pass, "{r}");

    let ex_psi = ex_completion(&ps.doctrine, None, B).unwrap();
    let ex_p = ex_completion(&s, None, B).unwrap();
    let g_ex = completion_functor(&s, &emb, &pred_sub, &ps, &ex_psi, &ex_p).unwrap();
    let r = check_equivalence(&g_ex);
    assert!(r.pass, "{r}");
}

#[test]
fn g_reg_for_flat_diamond_misses_an_object() {
    let f = fixtures::flat_diamond();
    let emb = Embedded::from_subdoctrine(&fixtures::tops_sub(&f));
    let pred_sub = pred_category(&emb.sub).unwrap();
    let ps = psi(&pred_sub).unwrap();
    let reg_psi = reg_completion(&ps.doctrine, None, B).unwrap();
    let reg_p = reg(&f);
    let g_reg = completion_functor(&f, &emb, &pred_sub, &ps, &reg_psi, &reg_p).unwrap();
    let r = check_equivalence(&g_reg);
    assert!(!r.law_passed("ess_surjective"));
    let w = r.law("ess_surjective").unwrap().witness.clone().unwrap();
    assert!(w["object"].as_str().unwrap().contains("bot"), "{w}");
}

#[test]
fn ex_of_fix1_matches_reg() {
    let t = fixtures::fix1();
    let ex = ex_completion(&t, None, B).unwrap();
    assert!(ex.report.pass, "{}", ex.report);
    assert_eq!(ex.cat.num_objects(), 2);
    for a in 0..2 {
        assert_eq!(ex.arrows[ex.cat.id(&a)].rel, ex.objs[a].1);
    }
    assert!(limits::equivalent_categories(&ex.cat, &reg(&t).cat));
    assert!(check_exactness(&ex).pass);
}

#[test]
fn equality_objects_of_ex_reproduce_reg() {
    // (A, δ_A ∧ P_{π1}α) ↦ (A, α) is a full embedding
    let s = fixtures::sub_diamond();
    let ex = ex_completion(&s, None, B).unwrap();
    let rc = reg(&s);
    let mut obj = Vec::new();
    for (a, alpha) in &rc.objs {
        let rho = graph_rel(&s, &s.base.id(a), alpha).unwrap();
        obj.push(ex.find_object(&s, a, &rho).unwrap());
    }
    for i in 0..rc.cat.num_objects() {
        for j in 0..rc.cat.num_objects() {
            assert_eq!(rc.cat.hom(i, j).len(), ex.cat.hom(obj[i], obj[j]).len());
        }
    }
}

#[test]
fn ex_agrees_with_ex_reg_of_reg() {
    for t in [fixtures::fix1(), fixtures::sub_diamond()] {
        let ex = ex_completion(&t, None, B).unwrap();
        let rc = reg(&t);
        let xr = ex_reg_crosscheck(&rc.cat, B).unwrap();
        let f = ex_comparison(&t, &ex, &rc, &xr).unwrap();
        let r = check_equivalence(&f);
        assert!(r.pass, "{r}");
    }
}

#[test]
fn equivalence_relations_on_a_chain() {
    // in a poset every relation on X is a subobject of X×X = X, and
    // exactly the top one contains the diagonal
    let xr = ex_reg_crosscheck(&FinCat::two_chain(), B).unwrap();
    assert_eq!(xr.ex.cat.num_objects(), 2);
    assert!(limits::equivalent_categories(&xr.ex.cat, &FinCat::two_chain()));
}

#[test]
fn reg_lex_examples() {
    let (_, r) = reg_lex(&FinCat::trivial(), B).unwrap();
    assert_eq!(r.cat.num_objects(), 1);
    let c = FinCat::two_chain();
    let (psi, r) = reg_lex(&c, B).unwrap();
    // the projectives are the objects isomorphic to some (A, ⊤)
    let tops: Vec<usize> = (0..c.num_objects()).map(|a| r.find_object(&psi, &a, &psi.top(&a)).unwrap()).collect();
    assert_eq!(r.cat.num_objects(), 3);
    for x in 0..r.cat.num_objects() {
        let g_image = tops.iter().any(|t| limits::find_iso(&r.cat, t, &x).is_some());
        assert_eq!(is_regular_projective(&psi, &r, x), g_image);
    }
}

#[test]
fn ex_lex_is_ex_reg_of_reg_lex() {
    let c = FinCat::two_chain();
    let (psi, ex) = ex_lex(&c, B).unwrap();
    let (_, rl) = reg_lex(&c, B).unwrap();
    let xr = ex_reg_crosscheck(&rl.cat, B).unwrap();
    let f = ex_comparison(&psi, &ex, &rl, &xr).unwrap();
    let r = check_equivalence(&f);
    assert!(r.pass, "{r}");
}
