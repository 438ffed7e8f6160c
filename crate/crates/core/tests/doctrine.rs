use doctrina::category::{validate_base, Cartesian, CartesianExt, Category, FinCat, GenCat};
use doctrina::doctrine::*;
use doctrina::fixtures;

fn idx(t: &TabDoctrine, obj: &str, elem: &str) -> (usize, usize) {
    t.element(obj, elem).unwrap_or_else(|| panic!("{obj}:{elem}"))
}

#[test]
fn fix1_is_existential_and_elementary() {
    let t = fixtures::fix1();
    let r = validate_doctrine(&t, Level::Existential).unwrap();
    assert!(r.pass, "{r}");
    assert!(validate_doctrine(&t, Level::Elementary).unwrap().pass);
}

#[test]
fn fix1_with_bottom_equality_fails_elementary() {
    let t = fixtures::fix1_bad_delta();
    let r = validate_doctrine(&t, Level::Elementary).unwrap();
    assert!(!r.pass);
    let failing: Vec<&str> = r.laws.iter().filter(|l| l.failed > 0).map(|l| l.law.as_str()).collect();
    assert!(failing.contains(&"elementary.diagonal"), "{failing:?}");
    assert!(r.laws.iter().any(|l| l.failed > 0 && l.witness.is_some()));
}

#[test]
fn missing_structure_is_an_error() {
    let t = fixtures::fix1();
    let mut no_delta = t.clone();
    no_delta.delta = None;
    assert!(matches!(validate_doctrine(&no_delta, Level::Elementary), Err(doctrina::Error::MissingStructure(_))));
    let mut no_ex = t;
    no_ex.exists = None;
    assert!(validate_doctrine(&no_ex, Level::Existential).is_err());
}

#[test]
fn sub_diamond_passes_all_levels() {
    let t = fixtures::sub_diamond();
    assert_eq!(t.total_elements(), 9);
    for l in [Level::Primary, Level::Elementary, Level::Existential] {
        let r = validate_doctrine(&t, l).unwrap();
        assert!(r.pass, "{r}");
        assert_eq!(r.skipped(), 0);
    }
}

#[test]
fn flat_diamond_passes() {
    let t = fixtures::flat_diamond();
    assert!(validate_doctrine(&t, Level::Existential).unwrap().pass);
}

// Independent oracle: in a meet-semilattice poset, subobjects of x are the
// elements below x, pullback is meet, and ∃ along a projection x∧y → x is
// the inclusion of the downset.
#[test]
fn sub_diamond_tables_match_meet_oracle() {
    let t = fixtures::sub_diamond();
    let c = &t.base;
    let names = ["0", "a", "b", "1"];
    let le = |i: usize, j: usize| i == j || i == 0 || j == 3;
    let meet = |i: usize, j: usize| if le(i, j) { i } else if le(j, i) { j } else { 0 };
    for f in 0..c.num_morphisms() {
        let m = c.morphism(f);
        for (k, z) in t.fibers[m.cod].names.iter().enumerate() {
            let zi = names.iter().position(|n| n == z).unwrap();
            let expect = names[meet(zi, m.dom)];
            let got = &t.fibers[m.dom].names[t.reindex[f][k].unwrap()];
            assert_eq!(got, expect);
        }
    }
    for x in 0..4 {
        let d = t.delta(&x).unwrap();
        let xx = c.prod_obj(&x, &x).unwrap();
        assert_eq!(t.fibers[xx].names[d], names[x]);
    }
}

#[test]
fn sub_diamond_matches_subobject_builder() {
    let (s, notes) = subobjects_doctrine(&FinCat::diamond());
    assert!(s.delta.is_some() && s.exists.is_some(), "{notes:?}");
    let t = fixtures::sub_diamond();
    for a in 0..4 {
        assert_eq!(s.fibers[a].len(), t.fibers[a].len());
    }
    assert!(validate_doctrine(&s, Level::Existential).unwrap().pass);
    let (s2, _) = subobjects_doctrine(&FinCat::two_chain());
    assert_eq!(s2.fibers[1].len(), 2);
}

#[test]
fn exists_along_examples() {
    let t = fixtures::sub_diamond();
    let c = &t.base;
    let (zero, one) = (0, 3);
    let f = c.hom(zero, one)[0];
    let top0 = t.top(&zero);
    let e = t.exists_along(&f, &top0).unwrap();
    assert_eq!(t.fibers[one].names[e], "0");
    // identity and projections agree with the tables
    for a in 0..4 {
        for x in t.fiber(&a) {
            assert_eq!(t.exists_along(&c.id(&a), &x), Some(x));
        }
        for b in 0..4 {
            let p = c.product(&a, &b).unwrap();
            for x in t.fiber(&p.obj) {
                assert_eq!(t.exists_along(&p.p1, &x), t.exists(&a, &b, &x));
            }
        }
    }
}

#[test]
fn exists_along_is_left_adjoint_on_fixtures() {
    for t in [fixtures::fix1(), fixtures::sub_diamond(), fixtures::flat_diamond(), fixtures::sub_two_chain()] {
        let c = &t.base;
        for a in 0..c.num_objects() {
            for b in 0..c.num_objects() {
                for &f in c.hom(a, b) {
                    for x in t.fiber(&a) {
                        let e = t.exists_along(&f, &x).unwrap();
                        for y in t.fiber(&b) {
                            let py = t.reindex(&f, &y).unwrap();
                            assert_eq!(t.leq(&a, &x, &py), t.leq(&b, &e, &y));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn weak_subobjects_of_small_posets() {
    let w = weak_subobjects(&FinCat::trivial()).unwrap();
    assert_eq!(w.doctrine.fibers[0].len(), 1);
    let w = weak_subobjects(&FinCat::two_chain()).unwrap();
    assert_eq!(w.doctrine.fibers[1].len(), 2);
    assert_eq!(w.doctrine.fibers[0].len(), 1);
    assert!(validate_doctrine(&w.doctrine, Level::Existential).unwrap().pass);
}

#[test]
fn weak_subobjects_unit_of_adjunction() {
    let w = weak_subobjects(&FinCat::diamond()).unwrap().doctrine;
    assert!(validate_doctrine(&w, Level::Existential).unwrap().pass);
    let c = &w.base;
    for a in 0..4 {
        for b in 0..4 {
            let p = c.product(&a, &b).unwrap();
            for x in w.fiber(&p.obj) {
                let back = w.reindex(&p.p1, &w.exists(&a, &b, &x).unwrap()).unwrap();
                assert!(w.leq(&p.obj, &x, &back));
            }
        }
    }
}

// [f] ≤ [g] iff f factors through g, by brute-force search in the base.
#[test]
fn weak_subobject_order_is_factorization() {
    let c = FinCat::diamond();
    let ws = WeakSubobjects::new(c.clone());
    for a in 0..4usize {
        let arrows: Vec<usize> = (0..4).flat_map(|x| c.hom(x, a).to_vec()).collect();
        for &f in &arrows {
            for &g in &arrows {
                let brute = c.hom(c.dom(&f), c.dom(&g)).iter().any(|&h| c.compose(&g, &h) == f);
                assert_eq!(ws.leq(&a, &f, &g), brute);
            }
        }
    }
}

#[test]
fn localic_fix3_values() {
    let l = fixtures::fix3(2);
    let g = l.base();
    let b = vec![0usize];
    let one: Vec<usize> = vec![];
    let alpha = l.element(&["m", "0"]).unwrap();
    let e = l.exists(&one, &b, &alpha).unwrap();
    assert_eq!(e, l.element(&["m"]).unwrap());
    let d = l.delta(&b).unwrap();
    // tuples of BB in order (x,x),(x,y),(y,x),(y,y)
    assert_eq!(d, vec![2, 0, 0, 2]);
    let diag = g.diag(&b).unwrap();
    assert_eq!(l.reindex(&diag, &d).unwrap(), l.top(&b));
}

#[test]
fn localic_validates_when_materialized() {
    let l = fixtures::fix3(2);
    let objs = l.base().enumerate_objects(2);
    assert_eq!(objs.len(), 3);
    let tab = tabulate_over(&l, objs);
    let r = validate_doctrine(&tab.doctrine, Level::Existential).unwrap();
    assert!(r.pass, "{r}");
    // lazily, over the listed objects
    let r = validate_doctrine(&fixtures::fix3(1), Level::Existential).unwrap();
    assert!(r.pass, "{r}");
}

#[test]
fn empty_seed_is_rejected() {
    assert!(matches!(GenCat::new(vec![("E".into(), vec![])], 1), Err(doctrina::Error::EmptySeed(_))));
}

#[test]
fn morphism_examples() {
    let t = fixtures::fix1();
    let (r, flags) = validate_morphism(&IdentityMorphism(&t));
    assert!(r.pass, "{r}");
    assert!(flags.equality && flags.quantifiers);

    let s = fixtures::sub_diamond();
    let tops = Subdoctrine::tops(&s);
    assert!(validate_subdoctrine(&tops).pass);
    let (r, flags) = validate_morphism(&Inclusion(&tops));
    assert!(r.pass, "{r}");
    assert!(!flags.quantifiers);
}

#[test]
fn tops_are_not_closed_under_exists() {
    let s = fixtures::sub_diamond();
    let c = &s.base;
    let (zero, one) = (0usize, 3usize);
    let f = c.hom(zero, one)[0];
    let e = s.exists_along(&f, &s.top(&zero)).unwrap();
    assert_ne!(e, s.top(&one));
}

#[test]
fn selection_must_be_a_subdoctrine() {
    let s = fixtures::sub_diamond();
    let mut sel = fixtures::tops(&s);
    let (a, bot_a) = idx(&s, "a", "0");
    sel.sets[a].insert(bot_a);
    let sub = Subdoctrine::from_selection(&s, &sel).unwrap();
    // adding the bottom of Sub(a) keeps every closure property
    assert!(validate_subdoctrine(&sub).pass);
    let mut bad = fixtures::tops(&s);
    bad.sets[3].clear();
    let sub = Subdoctrine::from_selection(&s, &bad).unwrap();
    let r = validate_subdoctrine(&sub);
    assert!(!r.pass);
    assert!(!r.law_passed("contains_top"));
}

#[test]
fn broken_product_is_localized() {
    let c = fixtures::diamond_broken_product();
    let r = validate_base(&c);
    assert!(!r.pass);
    let l = r.law("product.typed").unwrap();
    assert_eq!(l.failed, 1);
    let w = l.witness.as_ref().unwrap();
    assert_eq!(w["a"], "a");
    assert_eq!(w["b"], "b");
    assert!(validate_base(&FinCat::diamond()).pass);
}
