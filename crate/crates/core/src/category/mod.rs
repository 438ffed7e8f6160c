//! Cartesian base categories: the explicit finite kind, the generated
//! set-function kind, and generic finite-limit search.

mod fincat;
mod gencat;
pub mod limits;

pub use fincat::{FinCat, FinCatBuilder, Materialized, MorInfo};
pub use gencat::{GenCat, GenMor, Word};

use crate::report::Report;
use serde_json::json;
use std::fmt::Debug;
use std::hash::Hash;

/// Chosen binary product with its projections.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Product<O, M> {
    pub obj: O,
    pub p1: M,
    pub p2: M,
}

pub trait Category {
    type Obj: Clone + Eq + Ord + Hash + Debug;
    type Mor: Clone + Eq + Ord + Hash + Debug;

    fn dom(&self, f: &Self::Mor) -> Self::Obj;
    fn cod(&self, f: &Self::Mor) -> Self::Obj;
    fn id(&self, a: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`; the caller guarantees `cod f = dom g`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor;
    /// All morphisms `a → b` in a fixed order.
    fn homs(&self, a: &Self::Obj, b: &Self::Obj) -> Vec<Self::Mor>;
    /// All objects, or the bounded listing for infinite categories.
    fn objects(&self) -> Vec<Self::Obj>;

    fn obj_label(&self, a: &Self::Obj) -> String {
        format!("{a:?}")
    }
    fn mor_label(&self, f: &Self::Mor) -> String {
        format!("{f:?}")
    }
}

pub trait Cartesian: Category {
    fn terminal(&self) -> Self::Obj;
    /// Chosen product, or `None` when it falls outside a truncated category.
    fn product(&self, a: &Self::Obj, b: &Self::Obj) -> Option<Product<Self::Obj, Self::Mor>>;
    /// The mediating morphism `⟨f,g⟩`.
    fn pair(&self, f: &Self::Mor, g: &Self::Mor) -> Option<Self::Mor>;
}

impl<C: Category + ?Sized> Category for &C {
    type Obj = C::Obj;
    type Mor = C::Mor;
    fn dom(&self, f: &Self::Mor) -> Self::Obj {
        (**self).dom(f)
    }
    fn cod(&self, f: &Self::Mor) -> Self::Obj {
        (**self).cod(f)
    }
    fn id(&self, a: &Self::Obj) -> Self::Mor {
        (**self).id(a)
    }
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor {
        (**self).compose(g, f)
    }
    fn homs(&self, a: &Self::Obj, b: &Self::Obj) -> Vec<Self::Mor> {
        (**self).homs(a, b)
    }
    fn objects(&self) -> Vec<Self::Obj> {
        (**self).objects()
    }
    fn obj_label(&self, a: &Self::Obj) -> String {
        (**self).obj_label(a)
    }
    fn mor_label(&self, f: &Self::Mor) -> String {
        (**self).mor_label(f)
    }
}

impl<C: Cartesian + ?Sized> Cartesian for &C {
    fn terminal(&self) -> Self::Obj {
        (**self).terminal()
    }
    fn product(&self, a: &Self::Obj, b: &Self::Obj) -> Option<Product<Self::Obj, Self::Mor>> {
        (**self).product(a, b)
    }
    fn pair(&self, f: &Self::Mor, g: &Self::Mor) -> Option<Self::Mor> {
        (**self).pair(f, g)
    }
}

/// Derived structure available in every cartesian category.
pub trait CartesianExt: Cartesian {
    fn prod_obj(&self, a: &Self::Obj, b: &Self::Obj) -> Option<Self::Obj> {
        self.product(a, b).map(|p| p.obj)
    }
    fn p1(&self, a: &Self::Obj, b: &Self::Obj) -> Option<Self::Mor> {
        self.product(a, b).map(|p| p.p1)
    }
    fn p2(&self, a: &Self::Obj, b: &Self::Obj) -> Option<Self::Mor> {
        self.product(a, b).map(|p| p.p2)
    }
    /// The unique map to the terminal object.
    fn bang(&self, a: &Self::Obj) -> Option<Self::Mor> {
        self.homs(a, &self.terminal()).into_iter().next()
    }
    /// `f × g = ⟨f∘π1, g∘π2⟩`.
    fn times(&self, f: &Self::Mor, g: &Self::Mor) -> Option<Self::Mor> {
        let p = self.product(&self.dom(f), &self.dom(g))?;
        self.pair(&self.compose(f, &p.p1), &self.compose(g, &p.p2))
    }
    fn diag(&self, a: &Self::Obj) -> Option<Self::Mor> {
        let i = self.id(a);
        self.pair(&i, &i)
    }
    /// `A×B → B×A`.
    fn swap(&self, a: &Self::Obj, b: &Self::Obj) -> Option<Self::Mor> {
        let p = self.product(a, b)?;
        self.pair(&p.p2, &p.p1)
    }
    /// `(A×B)×C`, the left-nested triple product.
    fn triple(&self, a: &Self::Obj, b: &Self::Obj, c: &Self::Obj) -> Option<Self::Obj> {
        let ab = self.prod_obj(a, b)?;
        self.prod_obj(&ab, c)
    }
    /// Projections of `(A×B)×C` onto `A×B`, `B×C` and `A×C`.
    fn triple_projections(&self, a: &Self::Obj, b: &Self::Obj, c: &Self::Obj) -> Option<[Self::Mor; 3]> {
        let ab = self.product(a, b)?;
        let abc = self.product(&ab.obj, c)?;
        let pa = self.compose(&ab.p1, &abc.p1);
        let pb = self.compose(&ab.p2, &abc.p1);
        let p12 = abc.p1.clone();
        let p23 = self.pair(&pb, &abc.p2)?;
        let p13 = self.pair(&pa, &abc.p2)?;
        Some([p12, p23, p13])
    }
    /// `⟨id_A, h⟩ : A → A×B`.
    fn graph_of(&self, h: &Self::Mor) -> Option<Self::Mor> {
        self.pair(&self.id(&self.dom(h)), h)
    }
}

impl<C: Cartesian + ?Sized> CartesianExt for C {}

/// Checks the category axioms, the terminal object and every chosen product
/// against the universal property over the listed objects.
pub fn validate_base<C: Cartesian>(c: &C) -> Report {
    let mut r = Report::new("base");
    let objs = c.objects();
    let lbl = |f: &C::Mor| c.mor_label(f);
    for a in &objs {
        for b in &objs {
            for f in c.homs(a, b) {
                r.check("hom.typed", c.dom(&f) == *a && c.cod(&f) == *b, || json!({"mor": lbl(&f)}));
                let l = c.compose(&f, &c.id(a));
                let rr = c.compose(&c.id(b), &f);
                r.check("unit", l == f && rr == f, || json!({"mor": lbl(&f)}));
            }
        }
    }
    for a in &objs {
        for b in &objs {
            let fs = c.homs(a, b);
            if fs.is_empty() {
                continue;
            }
            for cc in &objs {
                let gs = c.homs(b, cc);
                if gs.is_empty() {
                    continue;
                }
                for d in &objs {
                    let hs = c.homs(cc, d);
                    for f in &fs {
                        for g in &gs {
                            let gf = c.compose(g, f);
                            r.check("compose.typed", c.dom(&gf) == *a && c.cod(&gf) == *cc, || {
                                json!({"g": lbl(g), "f": lbl(f)})
                            });
                            for h in &hs {
                                let left = c.compose(&c.compose(h, g), f);
                                let right = c.compose(h, &gf);
                                r.check("associative", left == right, || {
                                    json!({"h": lbl(h), "g": lbl(g), "f": lbl(f)})
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    let t = c.terminal();
    for a in &objs {
        let n = c.homs(a, &t).len();
        r.check("terminal", n == 1, || json!({"object": c.obj_label(a), "maps_to_terminal": n}));
    }
    for a in &objs {
        for b in &objs {
            let Some(p) = c.product(a, b) else {
                r.skip("product.ump");
                continue;
            };
            let typed = c.dom(&p.p1) == p.obj && c.dom(&p.p2) == p.obj && c.cod(&p.p1) == *a && c.cod(&p.p2) == *b;
            r.check("product.typed", typed, || json!({"a": c.obj_label(a), "b": c.obj_label(b)}));
            if !typed {
                continue;
            }
            for x in &objs {
                let cands = c.homs(x, &p.obj);
                for f in c.homs(x, a) {
                    for g in c.homs(x, b) {
                        let med: Vec<&C::Mor> = cands
                            .iter()
                            .filter(|h| c.compose(&p.p1, h) == f && c.compose(&p.p2, h) == g)
                            .collect();
                        let paired = c.pair(&f, &g);
                        let ok = med.len() == 1 && paired.as_ref() == Some(med[0]);
                        r.check("product.ump", ok, || {
                            json!({
                                "a": c.obj_label(a), "b": c.obj_label(b), "product": c.obj_label(&p.obj),
                                "x": c.obj_label(x), "f": lbl(&f), "g": lbl(&g), "mediators": med.len()
                            })
                        });
                    }
                }
            }
        }
    }
    r
}

/// Categories in which every cospan has a chosen weak pullback.
pub trait WeakPullbacks: Cartesian {
    /// A cone `(W, p, q)` with `f∘p = g∘q` through which every cone factors.
    fn weak_pullback(&self, f: &Self::Mor, g: &Self::Mor) -> Option<(Self::Obj, Self::Mor, Self::Mor)>;
}

impl WeakPullbacks for FinCat {
    fn weak_pullback(&self, f: &usize, g: &usize) -> Option<(usize, usize, usize)> {
        limits::find_weak_pullback(self, f, g)
    }
}

impl<C: WeakPullbacks + ?Sized> WeakPullbacks for &C {
    fn weak_pullback(&self, f: &Self::Mor, g: &Self::Mor) -> Option<(Self::Obj, Self::Mor, Self::Mor)> {
        (**self).weak_pullback(f, g)
    }
}
