use super::{Doctrine, DoctrineExt, Mor, Obj, Subdoctrine};
use crate::category::{Cartesian, CartesianExt, Category};
use crate::report::Report;
use serde::Serialize;
use serde_json::json;

/// A 1-cell `(F, b)`: a product-preserving functor between the bases and
/// a natural family of fiber maps.
pub trait DoctrineMorphism {
    type Src: Doctrine;
    type Dst: Doctrine;
    fn src(&self) -> &Self::Src;
    fn dst(&self) -> &Self::Dst;
    fn map_obj(&self, a: &Obj<Self::Src>) -> Obj<Self::Dst>;
    fn map_mor(&self, f: &Mor<Self::Src>) -> Mor<Self::Dst>;
    fn map_elem(&self, a: &Obj<Self::Src>, x: &<Self::Src as Doctrine>::Elem) -> Option<<Self::Dst as Doctrine>::Elem>;
}

/// Which optional structure a morphism was found to preserve.
#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
pub struct PreservationFlags {
    pub equality: bool,
    pub quantifiers: bool,
}

/// Checks functoriality, product preservation, naturality and meet/top
/// preservation; equality and quantifier preservation are tested and
/// reported as flags (only when both sides carry the structure).
pub fn validate_morphism<M: DoctrineMorphism>(m: &M) -> (Report, PreservationFlags) {
    let (p, q) = (m.src(), m.dst());
    let (c, d) = (p.base(), q.base());
    let mut r = Report::new("morphism");
    let mut eq = Report::new("equality");
    let mut ex = Report::new("quantifiers");
    let objs = c.objects();
    for a in &objs {
        let fa = m.map_obj(a);
        r.check("functor.identity", m.map_mor(&c.id(a)) == d.id(&fa), || json!({"object": c.obj_label(a)}));
        for b in &objs {
            for f in c.homs(b, a) {
                let ff = m.map_mor(&f);
                r.check("functor.typed", d.dom(&ff) == m.map_obj(b) && d.cod(&ff) == fa, || json!({"f": c.mor_label(&f)}));
                for z in &objs {
                    for g in c.homs(z, b) {
                        let lhs = m.map_mor(&c.compose(&f, &g));
                        let rhs = d.compose(&ff, &m.map_mor(&g));
                        r.check("functor.composition", lhs == rhs, || json!({"f": c.mor_label(&f), "g": c.mor_label(&g)}));
                    }
                }
            }
        }
    }
    let comparison = |a: &Obj<M::Src>, b: &Obj<M::Src>| -> Option<(Obj<M::Src>, Mor<M::Dst>, Mor<M::Dst>)> {
        let pab = c.product(a, b)?;
        let k = d.pair(&m.map_mor(&pab.p1), &m.map_mor(&pab.p2))?;
        let tgt = d.prod_obj(&m.map_obj(a), &m.map_obj(b))?;
        let src = m.map_obj(&pab.obj);
        let inv = if k == d.id(&src) {
            k.clone()
        } else {
            d.homs(&tgt, &src).into_iter().find(|h| d.compose(h, &k) == d.id(&src) && d.compose(&k, h) == d.id(&tgt))?
        };
        Some((pab.obj, k, inv))
    };
    for a in &objs {
        for b in &objs {
            if c.product(a, b).is_none() {
                continue;
            }
            r.check("functor.products", comparison(a, b).is_some(), || json!({"a": c.obj_label(a), "b": c.obj_label(b)}));
        }
    }
    for a in &objs {
        let fa = m.map_obj(a);
        let fib = p.fiber(a);
        let imgs: Vec<Option<_>> = fib.iter().map(|x| m.map_elem(a, x)).collect();
        match m.map_elem(a, &p.top(a)) {
            Some(t) => {
                r.check("preserves_top", q.equiv(&fa, &t, &q.top(&fa)), || json!({"object": c.obj_label(a)}));
            }
            None => r.skip("preserves_top"),
        }
        for (i, x) in fib.iter().enumerate() {
            for (j, y) in fib.iter().enumerate().skip(i) {
                let lhs = p.meet(a, x, y).and_then(|mm| m.map_elem(a, &mm));
                let rhs = match (&imgs[i], &imgs[j]) {
                    (Some(u), Some(v)) => q.meet(&fa, u, v),
                    _ => None,
                };
                match (lhs, rhs) {
                    (Some(l), Some(rr)) => {
                        r.check("preserves_meet", q.equiv(&fa, &l, &rr), || {
                            json!({"object": c.obj_label(a), "x": p.elem_label(a, x), "y": p.elem_label(a, y)})
                        });
                    }
                    _ => r.skip("preserves_meet"),
                }
            }
        }
        for b in &objs {
            let fb = m.map_obj(b);
            for f in c.homs(b, a) {
                let ff = m.map_mor(&f);
                for (i, x) in fib.iter().enumerate() {
                    let lhs = p.reindex(&f, x).and_then(|y| m.map_elem(b, &y));
                    let rhs = imgs[i].as_ref().and_then(|u| q.reindex(&ff, u));
                    match (lhs, rhs) {
                        (Some(l), Some(rr)) => {
                            r.check("natural", q.equiv(&fb, &l, &rr), || json!({"f": c.mor_label(&f), "x": p.elem_label(a, x)}));
                        }
                        _ => r.skip("natural"),
                    }
                }
            }
        }
        if p.is_elementary() && q.is_elementary() {
            if let (Some((aa, k, _)), Some(dl)) = (comparison(a, a), p.delta(a)) {
                let lhs = m.map_elem(&aa, &dl);
                let rhs = q.delta(&fa).and_then(|e| q.reindex(&k, &e));
                match (lhs, rhs) {
                    (Some(l), Some(rr)) => {
                        let faa = m.map_obj(&aa);
                        eq.check("preserves_equality", q.equiv(&faa, &l, &rr), || json!({"object": c.obj_label(a)}));
                    }
                    _ => eq.skip("preserves_equality"),
                }
            }
        }
        if p.is_existential() && q.is_existential() {
            for b in &objs {
                let Some((ab, _, inv)) = comparison(a, b) else { continue };
                let fb = m.map_obj(b);
                for alpha in p.fiber(&ab) {
                    let lhs = p.exists(a, b, &alpha).and_then(|e| m.map_elem(a, &e));
                    // transport b(α) from F(A×B) to FA×FB along the inverse comparison
                    let rhs = m
                        .map_elem(&ab, &alpha)
                        .and_then(|u| q.reindex(&inv, &u))
                        .and_then(|v| q.exists(&fa, &fb, &v));
                    match (lhs, rhs) {
                        (Some(l), Some(rr)) => {
                            ex.check("preserves_exists", q.equiv(&fa, &l, &rr), || {
                                json!({"a": c.obj_label(a), "b": c.obj_label(b), "alpha": p.elem_label(&ab, &alpha)})
                            });
                        }
                        _ => ex.skip("preserves_exists"),
                    }
                }
            }
        }
    }
    let flags = PreservationFlags {
        equality: p.is_elementary() && q.is_elementary() && eq.pass && eq.laws.iter().any(|l| l.checked > 0),
        quantifiers: p.is_existential() && q.is_existential() && ex.pass && ex.laws.iter().any(|l| l.checked > 0),
    };
    r.note(format!("preserves equality: {}", flags.equality));
    r.note(format!("preserves quantifiers: {}", flags.quantifiers));
    for l in eq.laws.into_iter().chain(ex.laws) {
        r.laws.push(l);
    }
    (r, flags)
}

/// The identity 1-cell.
pub struct IdentityMorphism<D: Doctrine>(pub D);

impl<D: Doctrine> DoctrineMorphism for IdentityMorphism<D> {
    type Src = D;
    type Dst = D;
    fn src(&self) -> &D {
        &self.0
    }
    fn dst(&self) -> &D {
        &self.0
    }
    fn map_obj(&self, a: &Obj<D>) -> Obj<D> {
        a.clone()
    }
    fn map_mor(&self, f: &Mor<D>) -> Mor<D> {
        f.clone()
    }
    fn map_elem(&self, _a: &Obj<D>, x: &D::Elem) -> Option<D::Elem> {
        Some(x.clone())
    }
}

/// The inclusion of a subdoctrine into its parent.
pub struct Inclusion<'a, D: Doctrine>(pub &'a Subdoctrine<D>);

impl<'a, D: Doctrine> DoctrineMorphism for Inclusion<'a, D> {
    type Src = Subdoctrine<D>;
    type Dst = D;
    fn src(&self) -> &Subdoctrine<D> {
        self.0
    }
    fn dst(&self) -> &D {
        self.0.parent()
    }
    fn map_obj(&self, a: &Obj<D>) -> Obj<D> {
        a.clone()
    }
    fn map_mor(&self, f: &Mor<D>) -> Mor<D> {
        f.clone()
    }
    fn map_elem(&self, _a: &Obj<D>, x: &D::Elem) -> Option<D::Elem> {
        Some(x.clone())
    }
}
