use crate::category::{limits, Category, FinCat};
use crate::report::Report;
use serde_json::json;

/// A functor between finite categories, given by its object and morphism
/// maps.
#[derive(Debug, Clone)]
pub struct Functor {
    pub src: FinCat,
    pub dst: FinCat,
    pub obj: Vec<usize>,
    pub mor: Vec<usize>,
}

impl Functor {
    pub fn identity(c: &FinCat) -> Functor {
        Functor { src: c.clone(), dst: c.clone(), obj: (0..c.num_objects()).collect(), mor: (0..c.num_morphisms()).collect() }
    }
}

/// Typing, identities and composites.
pub fn check_functor(f: &Functor) -> Report {
    let (c, d) = (&f.src, &f.dst);
    let mut r = Report::new("functor");
    for m in 0..c.num_morphisms() {
        let fm = f.mor[m];
        let typed = d.dom(&fm) == f.obj[c.dom(&m)] && d.cod(&fm) == f.obj[c.cod(&m)];
        r.check("functor.typed", typed, || json!({"mor": c.mor_label(&m)}));
    }
    for a in 0..c.num_objects() {
        r.check("functor.identity", f.mor[c.id(&a)] == d.id(&f.obj[a]), || json!({"object": c.obj_label(&a)}));
    }
    for m in 0..c.num_morphisms() {
        for a in 0..c.num_objects() {
            for &g in c.hom(c.cod(&m), a) {
                let ok = d.try_compose(f.mor[g], f.mor[m]) == Some(f.mor[c.compose(&g, &m)]);
                r.check("functor.compose", ok, || json!({"g": c.mor_label(&g), "f": c.mor_label(&m)}));
            }
        }
    }
    r
}

/// Faithfulness and fullness by comparing hom maps, essential
/// surjectivity by searching for an isomorphism onto every target object.
pub fn check_equivalence(f: &Functor) -> Report {
    let (c, d) = (&f.src, &f.dst);
    let mut r = check_functor(f);
    for a in 0..c.num_objects() {
        for b in 0..c.num_objects() {
            let hom = c.hom(a, b);
            let mut images: Vec<usize> = hom.iter().map(|&m| f.mor[m]).collect();
            images.sort_unstable();
            let distinct = {
                let mut v = images.clone();
                v.dedup();
                v.len()
            };
            r.check("faithful", distinct == hom.len(), || json!({"src": c.obj_label(&a), "dst": c.obj_label(&b)}));
            let target = d.hom(f.obj[a], f.obj[b]).len();
            r.check("full", distinct == target, || {
                json!({"src": c.obj_label(&a), "dst": c.obj_label(&b), "image": distinct, "target": target})
            });
        }
    }
    for y in 0..d.num_objects() {
        let hit = f.obj.iter().any(|&x| limits::find_iso(d, &x, &y).is_some());
        r.check("ess_surjective", hit, || json!({"object": d.obj_label(&y)}));
    }
    r
}
