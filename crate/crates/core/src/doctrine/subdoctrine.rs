use super::{Doctrine, DoctrineExt, Mor, Obj, TabDoctrine};
use crate::category::{Cartesian, Category};
use crate::error::{Error, Result};
use crate::report::Report;
use serde_json::json;
use std::collections::BTreeSet;
use std::sync::Arc;

type Selector<D> = Arc<dyn Fn(&Obj<D>, &<D as Doctrine>::Elem) -> bool + Send + Sync>;

/// A full subdoctrine: a selection of elements in each fiber, with the
/// order and operations of the parent. It carries the parent's equality
/// but no quantifiers of its own.
pub struct Subdoctrine<D: Doctrine> {
    parent: D,
    select: Selector<D>,
}

impl<D: Doctrine + Clone> Clone for Subdoctrine<D> {
    fn clone(&self) -> Self {
        Subdoctrine { parent: self.parent.clone(), select: self.select.clone() }
    }
}

impl<D: Doctrine> Subdoctrine<D> {
    pub fn new(parent: D, select: impl Fn(&Obj<D>, &D::Elem) -> bool + Send + Sync + 'static) -> Self {
        Subdoctrine { parent, select: Arc::new(select) }
    }

    pub fn parent(&self) -> &D {
        &self.parent
    }

    pub fn contains(&self, a: &Obj<D>, x: &D::Elem) -> bool {
        (self.select)(a, x)
    }
}

impl<'a> Subdoctrine<&'a TabDoctrine> {
    /// The elements equal to the top of their fiber.
    pub fn tops(parent: &'a TabDoctrine) -> Self {
        let tops: Vec<usize> = parent.fibers.iter().map(|f| f.top()).collect();
        Subdoctrine::new(parent, move |a: &usize, x: &usize| tops[*a] == *x)
    }

    pub fn whole(parent: &'a TabDoctrine) -> Self {
        Subdoctrine::new(parent, |_: &usize, _: &usize| true)
    }

    pub fn from_selection(parent: &'a TabDoctrine, sel: &Selection) -> Result<Self> {
        if sel.sets.len() != parent.base.num_objects() {
            return Err(Error::NotASubdoctrine("selection does not cover every object".into()));
        }
        for (a, s) in sel.sets.iter().enumerate() {
            if s.iter().any(|&x| x >= parent.fibers[a].len()) {
                return Err(Error::NotASubdoctrine(format!("selection over {} names an unknown element", parent.base.obj_label(&a))));
            }
        }
        let sets = sel.sets.clone();
        Ok(Subdoctrine::new(parent, move |a: &usize, x: &usize| sets[*a].contains(x)))
    }

    pub fn to_selection(&self) -> Selection {
        let p = self.parent;
        Selection { sets: (0..p.base.num_objects()).map(|a| (0..p.fibers[a].len()).filter(|x| self.contains(&a, x)).collect()).collect() }
    }
}

/// Per-object sets of element indices of a tabulated doctrine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    pub sets: Vec<BTreeSet<usize>>,
}

impl<D: Doctrine> Doctrine for Subdoctrine<D> {
    type Base = D::Base;
    type Elem = D::Elem;

    fn base(&self) -> &D::Base {
        self.parent.base()
    }
    fn top(&self, a: &Obj<D>) -> D::Elem {
        self.parent.top(a)
    }
    fn leq(&self, a: &Obj<D>, x: &D::Elem, y: &D::Elem) -> bool {
        self.parent.leq(a, x, y)
    }
    fn meet(&self, a: &Obj<D>, x: &D::Elem, y: &D::Elem) -> Option<D::Elem> {
        self.parent.meet(a, x, y)
    }
    fn reindex(&self, f: &Mor<D>, x: &D::Elem) -> Option<D::Elem> {
        self.parent.reindex(f, x)
    }
    fn delta(&self, a: &Obj<D>) -> Option<D::Elem> {
        self.parent.delta(a)
    }
    fn is_elementary(&self) -> bool {
        self.parent.is_elementary()
    }
    fn fiber(&self, a: &Obj<D>) -> Vec<D::Elem> {
        self.parent.fiber(a).into_iter().filter(|x| (self.select)(a, x)).collect()
    }
    fn fiber_complete(&self, a: &Obj<D>) -> bool {
        self.parent.fiber_complete(a)
    }
    fn canonical(&self) -> bool {
        self.parent.canonical()
    }
    fn elem_label(&self, a: &Obj<D>, x: &D::Elem) -> String {
        self.parent.elem_label(a, x)
    }
}

/// Top, meet, reindexing and (when present) equality closure of a selection.
pub fn validate_subdoctrine<D: Doctrine>(s: &Subdoctrine<D>) -> Report {
    let mut r = Report::new("subdoctrine");
    let p = s.parent();
    let base = p.base();
    let objs = base.objects();
    let sel = |a: &Obj<D>, x: &D::Elem| -> bool {
        s.contains(a, x) || p.fiber(a).iter().any(|y| s.contains(a, y) && p.equiv(a, x, y))
    };
    for a in &objs {
        let fa = s.fiber(a);
        r.check("contains_top", sel(a, &p.top(a)), || json!({"object": base.obj_label(a)}));
        for x in &fa {
            for y in &fa {
                match p.meet(a, x, y) {
                    None => r.skip("closed_under_meet"),
                    Some(m) => {
                        r.check("closed_under_meet", sel(a, &m), || {
                            json!({"object": base.obj_label(a), "x": p.elem_label(a, x), "y": p.elem_label(a, y)})
                        });
                    }
                }
            }
        }
        for b in &objs {
            for f in base.homs(b, a) {
                for x in &fa {
                    match p.reindex(&f, x) {
                        None => r.skip("closed_under_reindexing"),
                        Some(y) => {
                            r.check("closed_under_reindexing", sel(b, &y), || {
                                json!({"f": base.mor_label(&f), "x": p.elem_label(a, x)})
                            });
                        }
                    }
                }
            }
        }
        if p.is_elementary() {
            if let (Some(aa), Some(d)) = (base.product(a, a), p.delta(a)) {
                r.check("contains_equality", sel(&aa.obj, &d), || json!({"object": base.obj_label(a)}));
            }
        }
    }
    r
}
