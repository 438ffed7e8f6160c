use crate::category::{Cartesian, Category, Product};
use crate::doctrine::{Doctrine, DoctrineExt, Mor, Obj};
use crate::error::{Error, Result};
use crate::report::Report;
use serde_json::json;

/// The extensional reflection: the base is quotiented by `f ∼ g` when
/// `⊤ ≤ P_{⟨f,g⟩}(δ)`, each class represented by its least member; the
/// fibers are unchanged.
#[derive(Clone)]
pub struct Extensional<D> {
    p: D,
}

impl<D: Doctrine> Extensional<D> {
    pub fn new(p: D) -> Self {
        Extensional { p }
    }

    pub fn inner(&self) -> &D {
        &self.p
    }

    pub fn similar(&self, f: &Mor<D>, g: &Mor<D>) -> bool {
        if f == g {
            return true;
        }
        let c = self.p.base();
        let (a, b) = (c.dom(f), c.cod(f));
        let Some(d) = self.p.delta(&b) else { return false };
        c.pair(f, g).and_then(|k| self.p.reindex(&k, &d)).is_some_and(|y| self.p.leq(&a, &self.p.top(&a), &y))
    }

    pub fn canon(&self, f: Mor<D>) -> Mor<D> {
        let c = self.p.base();
        c.homs(&c.dom(&f), &c.cod(&f)).into_iter().find(|g| self.similar(&f, g)).unwrap_or(f)
    }
}

/// Checks that identified arrows reindex identically; the reflection is
/// ill defined otherwise.
pub fn check_extensional<D: Doctrine>(p: &D) -> Result<Report> {
    let x = Extensional { p };
    let c = p.base();
    let mut r = Report::new("extensional_reflection");
    let objs = c.objects();
    for a in &objs {
        for b in &objs {
            let hs = c.homs(a, b);
            let fib = p.fiber(b);
            for (i, f) in hs.iter().enumerate() {
                for g in hs.iter().skip(i + 1) {
                    if !x.similar(f, g) {
                        continue;
                    }
                    for y in &fib {
                        let (u, v) = (p.reindex(f, y), p.reindex(g, y));
                        let ok = match (&u, &v) {
                            (Some(u), Some(v)) => p.equiv(a, u, v),
                            _ => true,
                        };
                        if !ok {
                            return Err(Error::IllDefinedQuotient(format!(
                                "{} ~ {} but they reindex {} differently",
                                c.mor_label(f),
                                c.mor_label(g),
                                p.elem_label(b, y)
                            )));
                        }
                        r.check("well_defined", ok, || json!({}));
                    }
                }
            }
        }
    }
    Ok(r)
}

impl<D: Doctrine> Category for Extensional<D> {
    type Obj = Obj<D>;
    type Mor = Mor<D>;
    fn dom(&self, f: &Mor<D>) -> Obj<D> {
        self.p.base().dom(f)
    }
    fn cod(&self, f: &Mor<D>) -> Obj<D> {
        self.p.base().cod(f)
    }
    fn id(&self, a: &Obj<D>) -> Mor<D> {
        self.canon(self.p.base().id(a))
    }
    fn compose(&self, g: &Mor<D>, f: &Mor<D>) -> Mor<D> {
        self.canon(self.p.base().compose(g, f))
    }
    fn homs(&self, a: &Obj<D>, b: &Obj<D>) -> Vec<Mor<D>> {
        let mut out: Vec<Mor<D>> = Vec::new();
        for f in self.p.base().homs(a, b) {
            if !out.iter().any(|g| self.similar(g, &f)) {
                out.push(f);
            }
        }
        out
    }
    fn objects(&self) -> Vec<Obj<D>> {
        self.p.base().objects()
    }
    fn obj_label(&self, a: &Obj<D>) -> String {
        self.p.base().obj_label(a)
    }
    fn mor_label(&self, f: &Mor<D>) -> String {
        format!("[{}]", self.p.base().mor_label(f))
    }
}

impl<D: Doctrine> Cartesian for Extensional<D> {
    fn terminal(&self) -> Obj<D> {
        self.p.base().terminal()
    }
    fn product(&self, a: &Obj<D>, b: &Obj<D>) -> Option<Product<Obj<D>, Mor<D>>> {
        let p = self.p.base().product(a, b)?;
        Some(Product { obj: p.obj, p1: self.canon(p.p1), p2: self.canon(p.p2) })
    }
    fn pair(&self, f: &Mor<D>, g: &Mor<D>) -> Option<Mor<D>> {
        Some(self.canon(self.p.base().pair(f, g)?))
    }
}

/// The doctrine `P_x` over the extensional reflection.
#[derive(Clone)]
pub struct ExtensionalDoctrine<D> {
    cat: Extensional<D>,
}

impl<D: Doctrine> ExtensionalDoctrine<D> {
    pub fn new(p: D) -> Self {
        ExtensionalDoctrine { cat: Extensional::new(p) }
    }
}

impl<D: Doctrine> Doctrine for ExtensionalDoctrine<D> {
    type Base = Extensional<D>;
    type Elem = D::Elem;
    fn base(&self) -> &Extensional<D> {
        &self.cat
    }
    fn top(&self, a: &Obj<D>) -> D::Elem {
        self.cat.p.top(a)
    }
    fn leq(&self, a: &Obj<D>, x: &D::Elem, y: &D::Elem) -> bool {
        self.cat.p.leq(a, x, y)
    }
    fn meet(&self, a: &Obj<D>, x: &D::Elem, y: &D::Elem) -> Option<D::Elem> {
        self.cat.p.meet(a, x, y)
    }
    fn reindex(&self, f: &Mor<D>, x: &D::Elem) -> Option<D::Elem> {
        self.cat.p.reindex(f, x)
    }
    fn delta(&self, a: &Obj<D>) -> Option<D::Elem> {
        self.cat.p.delta(a)
    }
    fn exists(&self, a: &Obj<D>, b: &Obj<D>, x: &D::Elem) -> Option<D::Elem> {
        self.cat.p.exists(a, b, x)
    }
    fn is_elementary(&self) -> bool {
        self.cat.p.is_elementary()
    }
    fn is_existential(&self) -> bool {
        self.cat.p.is_existential()
    }
    fn fiber(&self, a: &Obj<D>) -> Vec<D::Elem> {
        self.cat.p.fiber(a)
    }
    fn fiber_complete(&self, a: &Obj<D>) -> bool {
        self.cat.p.fiber_complete(a)
    }
    fn canonical(&self) -> bool {
        self.cat.p.canonical()
    }
    fn elem_label(&self, a: &Obj<D>, x: &D::Elem) -> String {
        self.cat.p.elem_label(a, x)
    }
}
