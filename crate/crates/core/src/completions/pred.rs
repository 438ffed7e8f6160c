use crate::category::{Cartesian, CartesianExt, Category, Product, WeakPullbacks};
use crate::doctrine::{ClassCache, Doctrine, DoctrineExt, Mor, Obj};

/// An object `(A, α)` of a category of predicates.
pub type PObj<D> = (Obj<D>, <D as Doctrine>::Elem);

/// An arrow `f: (A,α) → (B,β)` with `α ≤ P_f(β)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PredMor<O, E, M> {
    pub src: (O, E),
    pub dst: (O, E),
    pub f: M,
}

pub type PMor<D> = PredMor<Obj<D>, <D as Doctrine>::Elem, Mor<D>>;

/// Pairs `(A, α)` and arrows `f` with `α ≤ P_f(β)`. With `quotient` set,
/// arrows are identified when `α ≤ P_{⟨f,g⟩}(δ_B)` (the category of
/// predicates); without it this is the Grothendieck category of points.
pub struct PredCat<D: Doctrine> {
    p: D,
    quotient: bool,
    cache: ClassCache<D>,
    listing: Option<Vec<PObj<D>>>,
}

impl<D: Doctrine + Clone> Clone for PredCat<D> {
    fn clone(&self) -> Self {
        PredCat { p: self.p.clone(), quotient: self.quotient, cache: self.cache.clone(), listing: self.listing.clone() }
    }
}

impl<D: Doctrine> PredCat<D> {
    /// The category of predicates `Pred(P)`; needs equality.
    pub fn predicates(p: D) -> Self {
        PredCat { p, quotient: true, cache: ClassCache::default(), listing: None }
    }

    /// The Grothendieck category `𝒢_P` of the comprehension completion.
    pub fn points(p: D) -> Self {
        PredCat { p, quotient: false, cache: ClassCache::default(), listing: None }
    }

    /// Restricts the object listing (products are still computed).
    pub fn with_objects(mut self, objs: Vec<PObj<D>>) -> Self {
        self.listing = Some(objs);
        self
    }

    pub fn doctrine(&self) -> &D {
        &self.p
    }

    pub fn is_quotient(&self) -> bool {
        self.quotient
    }

    pub fn canon_elem(&self, a: &Obj<D>, x: D::Elem) -> D::Elem {
        self.cache.canon(&self.p, a, x)
    }

    /// Whether `α ≤ P_f(β)`.
    pub fn admits(&self, src: &PObj<D>, dst: &PObj<D>, f: &Mor<D>) -> bool {
        self.p.reindex(f, &dst.1).is_some_and(|y| self.p.leq(&src.0, &src.1, &y))
    }

    /// Whether `f` and `g` are identified: `α ≤ P_{⟨f,g⟩}(δ_B)`.
    pub fn similar(&self, src: &PObj<D>, f: &Mor<D>, g: &Mor<D>) -> bool {
        if f == g {
            return true;
        }
        let c = self.p.base();
        let b = c.cod(f);
        let Some(d) = self.p.delta(&b) else { return false };
        c.pair(f, g).and_then(|k| self.p.reindex(&k, &d)).is_some_and(|y| self.p.leq(&src.0, &src.1, &y))
    }

    /// The arrow with the least representative in the class of `f`.
    pub fn arrow(&self, src: PObj<D>, dst: PObj<D>, f: Mor<D>) -> PMor<D> {
        let f = if self.quotient {
            let c = self.p.base();
            c.homs(&src.0, &dst.0)
                .into_iter()
                .find(|g| self.admits(&src, &dst, g) && self.similar(&src, &f, g))
                .unwrap_or(f)
        } else {
            f
        };
        PredMor { src, dst, f }
    }

    pub fn obj(&self, a: Obj<D>, x: D::Elem) -> PObj<D> {
        let x = self.canon_elem(&a, x);
        (a, x)
    }

    /// The explicit pullback of `f: (X,ξ) → (A,α)` and `g: (Y,η) → (A,α)`:
    /// `(X×Y, P_{π1}ξ ∧ P_{π2}η ∧ P_{f×g}δ_A)` with the two projections.
    pub fn pullback(&self, f: &PMor<D>, g: &PMor<D>) -> Option<(PObj<D>, PMor<D>, PMor<D>)> {
        let c = self.p.base();
        let p = &self.p;
        let xy = c.product(&f.src.0, &g.src.0)?;
        let a = &f.dst.0;
        let fg = c.times(&f.f, &g.f)?;
        let eq = p.reindex(&fg, &p.delta(a)?)?;
        let l = p.reindex(&xy.p1, &f.src.1)?;
        let r = p.reindex(&xy.p2, &g.src.1)?;
        let m = p.meet_all(&xy.obj, &[l, r, eq])?;
        let o = self.obj(xy.obj, m);
        let p1 = self.arrow(o.clone(), f.src.clone(), xy.p1);
        let p2 = self.arrow(o.clone(), g.src.clone(), xy.p2);
        Some((o, p1, p2))
    }
}

impl<D: Doctrine> Category for PredCat<D> {
    type Obj = PObj<D>;
    type Mor = PMor<D>;

    fn dom(&self, f: &Self::Mor) -> Self::Obj {
        f.src.clone()
    }
    fn cod(&self, f: &Self::Mor) -> Self::Obj {
        f.dst.clone()
    }
    fn id(&self, a: &Self::Obj) -> Self::Mor {
        self.arrow(a.clone(), a.clone(), self.p.base().id(&a.0))
    }
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor {
        self.arrow(f.src.clone(), g.dst.clone(), self.p.base().compose(&g.f, &f.f))
    }
    fn homs(&self, a: &Self::Obj, b: &Self::Obj) -> Vec<Self::Mor> {
        let mut out: Vec<Self::Mor> = Vec::new();
        for f in self.p.base().homs(&a.0, &b.0) {
            if !self.admits(a, b, &f) {
                continue;
            }
            if self.quotient && out.iter().any(|g| self.similar(a, &g.f, &f)) {
                continue;
            }
            out.push(PredMor { src: a.clone(), dst: b.clone(), f });
        }
        out
    }
    fn objects(&self) -> Vec<Self::Obj> {
        if let Some(l) = &self.listing {
            return l.clone();
        }
        let mut out = Vec::new();
        for a in self.p.base().objects() {
            for x in self.cache.classes(&self.p, &a).iter() {
                out.push((a.clone(), x.clone()));
            }
        }
        out
    }
    fn obj_label(&self, a: &Self::Obj) -> String {
        format!("({}, {})", self.p.base().obj_label(&a.0), self.p.elem_label(&a.0, &a.1))
    }
    fn mor_label(&self, f: &Self::Mor) -> String {
        format!("[{}]", self.p.base().mor_label(&f.f))
    }
}

impl<D: Doctrine> Cartesian for PredCat<D> {
    fn terminal(&self) -> Self::Obj {
        let t = self.p.base().terminal();
        let top = self.p.top(&t);
        self.obj(t, top)
    }
    fn product(&self, a: &Self::Obj, b: &Self::Obj) -> Option<Product<Self::Obj, Self::Mor>> {
        let c = self.p.base();
        let ab = c.product(&a.0, &b.0)?;
        let l = self.p.reindex(&ab.p1, &a.1)?;
        let r = self.p.reindex(&ab.p2, &b.1)?;
        let m = self.p.meet(&ab.obj, &l, &r)?;
        let o = self.obj(ab.obj, m);
        Some(Product { obj: o.clone(), p1: self.arrow(o.clone(), a.clone(), ab.p1), p2: self.arrow(o, b.clone(), ab.p2) })
    }
    fn pair(&self, f: &Self::Mor, g: &Self::Mor) -> Option<Self::Mor> {
        let prod = self.product(&f.dst, &g.dst)?;
        let k = self.p.base().pair(&f.f, &g.f)?;
        Some(self.arrow(f.src.clone(), prod.obj, k))
    }
}

impl<D: Doctrine> WeakPullbacks for PredCat<D> {
    fn weak_pullback(&self, f: &Self::Mor, g: &Self::Mor) -> Option<(Self::Obj, Self::Mor, Self::Mor)> {
        self.pullback(f, g)
    }
}

/// The doctrine of predicates over `(A,α)`: elements `γ ≤ α` of `P(A)`,
/// reindexing `γ ↦ P_f(γ) ∧ α`. Over `Pred(P)` this is `P_cx`; over the
/// Grothendieck category it is `P_c`.
pub struct PredDoctrine<D: Doctrine> {
    cat: PredCat<D>,
}

impl<D: Doctrine + Clone> Clone for PredDoctrine<D> {
    fn clone(&self) -> Self {
        PredDoctrine { cat: self.cat.clone() }
    }
}

impl<D: Doctrine> PredDoctrine<D> {
    pub fn new(cat: PredCat<D>) -> Self {
        PredDoctrine { cat }
    }

    pub fn inner(&self) -> &D {
        &self.cat.p
    }
}

impl<D: Doctrine> Doctrine for PredDoctrine<D> {
    type Base = PredCat<D>;
    type Elem = D::Elem;

    fn base(&self) -> &PredCat<D> {
        &self.cat
    }
    fn top(&self, a: &PObj<D>) -> D::Elem {
        a.1.clone()
    }
    fn leq(&self, a: &PObj<D>, x: &D::Elem, y: &D::Elem) -> bool {
        self.cat.p.leq(&a.0, x, y)
    }
    fn meet(&self, a: &PObj<D>, x: &D::Elem, y: &D::Elem) -> Option<D::Elem> {
        self.cat.p.meet(&a.0, x, y)
    }
    fn reindex(&self, f: &PMor<D>, x: &D::Elem) -> Option<D::Elem> {
        let y = self.cat.p.reindex(&f.f, x)?;
        self.cat.p.meet(&f.src.0, &y, &f.src.1)
    }
    fn delta(&self, a: &PObj<D>) -> Option<D::Elem> {
        let p = &self.cat.p;
        let aa = p.base().product(&a.0, &a.0)?;
        let l = p.reindex(&aa.p1, &a.1)?;
        let r = p.reindex(&aa.p2, &a.1)?;
        p.meet_all(&aa.obj, &[p.delta(&a.0)?, l, r])
    }
    fn exists(&self, a: &PObj<D>, b: &PObj<D>, x: &D::Elem) -> Option<D::Elem> {
        self.cat.p.exists(&a.0, &b.0, x)
    }
    fn is_elementary(&self) -> bool {
        self.cat.p.is_elementary()
    }
    fn is_existential(&self) -> bool {
        self.cat.p.is_existential()
    }
    fn fiber(&self, a: &PObj<D>) -> Vec<D::Elem> {
        self.cat.cache.classes(&self.cat.p, &a.0).iter().filter(|x| self.cat.p.leq(&a.0, x, &a.1)).cloned().collect()
    }
    fn fiber_complete(&self, a: &PObj<D>) -> bool {
        self.cat.p.fiber_complete(&a.0)
    }
    fn canonical(&self) -> bool {
        self.cat.p.canonical()
    }
    fn elem_label(&self, a: &PObj<D>, x: &D::Elem) -> String {
        self.cat.p.elem_label(&a.0, x)
    }
}
