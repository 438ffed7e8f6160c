//! Primary, elementary and pure existential doctrines: the interface,
//! the tabulated backend, validators, builders, morphisms and
//! subdoctrines.

mod builders;
mod morphism;
mod subdoctrine;
mod tabulate;
mod tabulated;
mod validate;

pub use builders::{localic_doctrine, subobjects_doctrine, subobjects_with_reps, weak_subobjects, Localic, WeakSubobjects};
pub use morphism::{validate_morphism, DoctrineMorphism, IdentityMorphism, Inclusion, PreservationFlags};
pub use subdoctrine::{validate_subdoctrine, Selection, Subdoctrine};
pub use tabulate::{tabulate, tabulate_over, Tabulation};
pub use tabulated::TabDoctrine;
pub use validate::{validate_doctrine, Level};

use crate::category::{Cartesian, CartesianExt, Category};
use std::fmt::Debug;
use std::hash::Hash;

pub type Obj<D> = <<D as Doctrine>::Base as Category>::Obj;
pub type Mor<D> = <<D as Doctrine>::Base as Category>::Mor;

/// A doctrine over a cartesian base. Every operation may answer `None`
/// when its result falls outside a truncated fiber.
pub trait Doctrine {
    type Base: Cartesian;
    type Elem: Clone + Eq + Ord + Hash + Debug;

    fn base(&self) -> &Self::Base;
    fn top(&self, a: &Obj<Self>) -> Self::Elem;
    fn leq(&self, a: &Obj<Self>, x: &Self::Elem, y: &Self::Elem) -> bool;
    fn meet(&self, a: &Obj<Self>, x: &Self::Elem, y: &Self::Elem) -> Option<Self::Elem>;
    /// `P_f` for `f: B → A`, taking an element over `A` to one over `B`.
    fn reindex(&self, f: &Mor<Self>, x: &Self::Elem) -> Option<Self::Elem>;
    /// Fibered equality `δ_A ∈ P(A×A)`.
    fn delta(&self, _a: &Obj<Self>) -> Option<Self::Elem> {
        None
    }
    /// `∃` along the chosen first projection `A×B → A`.
    fn exists(&self, _a: &Obj<Self>, _b: &Obj<Self>, _x: &Self::Elem) -> Option<Self::Elem> {
        None
    }
    fn is_elementary(&self) -> bool {
        false
    }
    fn is_existential(&self) -> bool {
        false
    }
    /// Elements of the fiber over `a` (the bounded listing for lazy doctrines).
    fn fiber(&self, a: &Obj<Self>) -> Vec<Self::Elem>;
    /// Whether `fiber(a)` lists every element.
    fn fiber_complete(&self, _a: &Obj<Self>) -> bool {
        true
    }
    /// Whether equal elements of a fiber are always equal as values.
    fn canonical(&self) -> bool {
        true
    }
    fn elem_label(&self, _a: &Obj<Self>, x: &Self::Elem) -> String {
        format!("{x:?}")
    }
}

impl<D: Doctrine + ?Sized> Doctrine for &D {
    type Base = D::Base;
    type Elem = D::Elem;
    fn base(&self) -> &Self::Base {
        (**self).base()
    }
    fn top(&self, a: &Obj<Self>) -> Self::Elem {
        (**self).top(a)
    }
    fn leq(&self, a: &Obj<Self>, x: &Self::Elem, y: &Self::Elem) -> bool {
        (**self).leq(a, x, y)
    }
    fn meet(&self, a: &Obj<Self>, x: &Self::Elem, y: &Self::Elem) -> Option<Self::Elem> {
        (**self).meet(a, x, y)
    }
    fn reindex(&self, f: &Mor<Self>, x: &Self::Elem) -> Option<Self::Elem> {
        (**self).reindex(f, x)
    }
    fn delta(&self, a: &Obj<Self>) -> Option<Self::Elem> {
        (**self).delta(a)
    }
    fn exists(&self, a: &Obj<Self>, b: &Obj<Self>, x: &Self::Elem) -> Option<Self::Elem> {
        (**self).exists(a, b, x)
    }
    fn is_elementary(&self) -> bool {
        (**self).is_elementary()
    }
    fn is_existential(&self) -> bool {
        (**self).is_existential()
    }
    fn fiber(&self, a: &Obj<Self>) -> Vec<Self::Elem> {
        (**self).fiber(a)
    }
    fn fiber_complete(&self, a: &Obj<Self>) -> bool {
        (**self).fiber_complete(a)
    }
    fn canonical(&self) -> bool {
        (**self).canonical()
    }
    fn elem_label(&self, a: &Obj<Self>, x: &Self::Elem) -> String {
        (**self).elem_label(a, x)
    }
}

/// Operations derived from the primitive structure.
pub trait DoctrineExt: Doctrine {
    fn equiv(&self, a: &Obj<Self>, x: &Self::Elem, y: &Self::Elem) -> bool {
        x == y || (!self.canonical() && self.leq(a, x, y) && self.leq(a, y, x))
    }

    /// Position of an element equivalent to `x` in `list`.
    fn position_in(&self, a: &Obj<Self>, list: &[Self::Elem], x: &Self::Elem) -> Option<usize> {
        if self.canonical() {
            list.iter().position(|y| y == x)
        } else {
            list.iter().position(|y| self.equiv(a, x, y))
        }
    }

    /// The fiber listing with equivalent elements removed.
    fn classes(&self, a: &Obj<Self>) -> Vec<Self::Elem> {
        let mut out: Vec<Self::Elem> = Vec::new();
        for x in self.fiber(a) {
            if self.position_in(a, &out, &x).is_none() {
                out.push(x);
            }
        }
        out
    }

    fn meet_all(&self, a: &Obj<Self>, xs: &[Self::Elem]) -> Option<Self::Elem> {
        let mut acc = self.top(a);
        for x in xs {
            acc = self.meet(a, &acc, x)?;
        }
        Some(acc)
    }

    /// `∃` along the second projection `A×B → B`.
    fn exists_snd(&self, a: &Obj<Self>, b: &Obj<Self>, x: &Self::Elem) -> Option<Self::Elem> {
        let s = self.base().swap(b, a)?;
        let y = self.reindex(&s, x)?;
        self.exists(b, a, &y)
    }

    /// `∃` along `⟨π1,π3⟩ : (A×B)×C → A×C`, the middle coordinate.
    fn exists_mid(&self, a: &Obj<Self>, b: &Obj<Self>, c: &Obj<Self>, x: &Self::Elem) -> Option<Self::Elem> {
        let base = self.base();
        let ac = base.product(a, c)?;
        let acb = base.product(&ac.obj, b)?;
        let pa = base.compose(&ac.p1, &acb.p1);
        let pc = base.compose(&ac.p2, &acb.p1);
        let ab = base.pair(&pa, &acb.p2)?;
        let iso = base.pair(&ab, &pc)?;
        let y = self.reindex(&iso, x)?;
        self.exists(&ac.obj, b, &y)
    }

    /// `∃_f(α) = ∃_{π2}(P_{f×id_B}(δ_B) ∧ P_{π1}(α))` for `f: A → B`.
    fn exists_along(&self, f: &Mor<Self>, x: &Self::Elem) -> Option<Self::Elem> {
        let base = self.base();
        let (a, b) = (base.dom(f), base.cod(f));
        let ab = base.product(&a, &b)?;
        let fx = base.times(f, &base.id(&b))?;
        let d = self.reindex(&fx, &self.delta(&b)?)?;
        let px = self.reindex(&ab.p1, x)?;
        let m = self.meet(&ab.obj, &d, &px)?;
        self.exists_snd(&a, &b, &m)
    }

    /// Converse of a relation over `A×B`, landing over `B×A`.
    fn converse(&self, a: &Obj<Self>, b: &Obj<Self>, r: &Self::Elem) -> Option<Self::Elem> {
        let s = self.base().swap(b, a)?;
        self.reindex(&s, r)
    }

    /// Relational composite `φ;ψ` of `φ` over `A×B` and `ψ` over `B×C`.
    fn rel_compose(&self, a: &Obj<Self>, b: &Obj<Self>, c: &Obj<Self>, phi: &Self::Elem, psi: &Self::Elem) -> Option<Self::Elem> {
        let base = self.base();
        let [p12, p23, _] = base.triple_projections(a, b, c)?;
        let abc = base.triple(a, b, c)?;
        let x = self.reindex(&p12, phi)?;
        let y = self.reindex(&p23, psi)?;
        let m = self.meet(&abc, &x, &y)?;
        self.exists_mid(a, b, c, &m)
    }
}

impl<D: Doctrine + ?Sized> DoctrineExt for D {}

/// Memoized class listings per object, used to pick a canonical
/// representative for elements of non-canonical doctrines.
pub struct ClassCache<D: Doctrine> {
    memo: std::sync::Mutex<std::collections::HashMap<Obj<D>, std::sync::Arc<Vec<D::Elem>>>>,
}

impl<D: Doctrine> Default for ClassCache<D> {
    fn default() -> Self {
        ClassCache { memo: Default::default() }
    }
}

impl<D: Doctrine> Clone for ClassCache<D> {
    fn clone(&self) -> Self {
        ClassCache { memo: std::sync::Mutex::new(self.memo.lock().unwrap().clone()) }
    }
}

impl<D: Doctrine> std::fmt::Debug for ClassCache<D> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("ClassCache")
    }
}

impl<D: Doctrine> ClassCache<D> {
    pub fn classes(&self, d: &D, a: &Obj<D>) -> std::sync::Arc<Vec<D::Elem>> {
        if let Some(v) = self.memo.lock().unwrap().get(a) {
            return v.clone();
        }
        let v = std::sync::Arc::new(d.classes(a));
        self.memo.lock().unwrap().insert(a.clone(), v.clone());
        v
    }

    /// The listed representative equivalent to `x`, or `x` itself when the
    /// doctrine is canonical or the class is not listed.
    pub fn canon(&self, d: &D, a: &Obj<D>, x: D::Elem) -> D::Elem {
        if d.canonical() {
            return x;
        }
        let cls = self.classes(d, a);
        match d.position_in(a, &cls, &x) {
            Some(i) => cls[i].clone(),
            None => x,
        }
    }
}
