use crate::category::{Cartesian, CartesianExt, Category, FinCat};
use crate::doctrine::{tabulate, Doctrine, DoctrineMorphism, Mor, Obj, TabDoctrine};
use crate::error::Result;

/// The pure existential completion, computed lazily: an element over `A`
/// is a pair `(B, α)` with `α` over `A×B`, read as `∃b:B. α`.
#[derive(Debug, Clone)]
pub struct ExCompletion<D> {
    inner: D,
}

impl<D: Doctrine> ExCompletion<D> {
    pub fn new(inner: D) -> Self {
        ExCompletion { inner }
    }

    pub fn inner(&self) -> &D {
        &self.inner
    }

    /// The image of `α ∈ P(A)`: `(1, P_{π1}(α))`.
    pub fn include(&self, a: &Obj<D>, x: &D::Elem) -> Option<(Obj<D>, D::Elem)> {
        let c = self.inner.base();
        let t = c.terminal();
        let p = c.product(a, &t)?;
        Some((t, self.inner.reindex(&p.p1, x)?))
    }

    /// A witness `w: A×B → C` for `(B,α) ≤ (C,γ)` over `A`.
    pub fn leq_witness(&self, a: &Obj<D>, x: &(Obj<D>, D::Elem), y: &(Obj<D>, D::Elem)) -> Option<Mor<D>> {
        let c = self.inner.base();
        let ab = c.product(a, &x.0)?;
        c.homs(&ab.obj, &y.0).into_iter().find(|w| {
            c.pair(&ab.p1, w)
                .and_then(|k| self.inner.reindex(&k, &y.1))
                .is_some_and(|z| self.inner.leq(&ab.obj, &x.1, &z))
        })
    }
}

impl<D: Doctrine> Doctrine for ExCompletion<D> {
    type Base = D::Base;
    type Elem = (Obj<D>, D::Elem);

    fn base(&self) -> &D::Base {
        self.inner.base()
    }
    fn top(&self, a: &Obj<D>) -> Self::Elem {
        let c = self.inner.base();
        let t = c.terminal();
        let at = c.prod_obj(a, &t).expect("product with the terminal object");
        (t, self.inner.top(&at))
    }
    fn leq(&self, a: &Obj<D>, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.leq_witness(a, x, y).is_some()
    }
    fn meet(&self, a: &Obj<D>, x: &Self::Elem, y: &Self::Elem) -> Option<Self::Elem> {
        let c = self.inner.base();
        let bc = c.product(&x.0, &y.0)?;
        let abc = c.product(a, &bc.obj)?;
        let to_b = c.pair(&abc.p1, &c.compose(&bc.p1, &abc.p2))?;
        let to_c = c.pair(&abc.p1, &c.compose(&bc.p2, &abc.p2))?;
        let l = self.inner.reindex(&to_b, &x.1)?;
        let r = self.inner.reindex(&to_c, &y.1)?;
        Some((bc.obj, self.inner.meet(&abc.obj, &l, &r)?))
    }
    fn reindex(&self, f: &Mor<D>, x: &Self::Elem) -> Option<Self::Elem> {
        let c = self.inner.base();
        let fx = c.times(f, &c.id(&x.0))?;
        Some((x.0.clone(), self.inner.reindex(&fx, &x.1)?))
    }
    fn delta(&self, a: &Obj<D>) -> Option<Self::Elem> {
        let c = self.inner.base();
        let aa = c.prod_obj(a, a)?;
        self.include(&aa, &self.inner.delta(a)?)
    }
    /// `∃` along `A×B → A` sends `(C, α over (A×B)×C)` to
    /// `(B×C, α reindexed along A×(B×C) ≅ (A×B)×C)`.
    fn exists(&self, a: &Obj<D>, b: &Obj<D>, x: &Self::Elem) -> Option<Self::Elem> {
        let c = self.inner.base();
        let bc = c.product(b, &x.0)?;
        let abc = c.product(a, &bc.obj)?;
        let ab = c.product(a, b)?;
        let to_ab = c.pair(&abc.p1, &c.compose(&bc.p1, &abc.p2))?;
        let to_c = c.compose(&bc.p2, &abc.p2);
        let iso = c.pair(&to_ab, &to_c)?;
        debug_assert_eq!(c.cod(&iso), c.prod_obj(&ab.obj, &x.0)?);
        Some((bc.obj, self.inner.reindex(&iso, &x.1)?))
    }
    fn is_elementary(&self) -> bool {
        self.inner.is_elementary()
    }
    fn is_existential(&self) -> bool {
        true
    }
    fn fiber(&self, a: &Obj<D>) -> Vec<Self::Elem> {
        let c = self.inner.base();
        let mut out = Vec::new();
        for b in c.objects() {
            if let Some(ab) = c.prod_obj(a, &b) {
                for x in self.inner.fiber(&ab) {
                    out.push((b.clone(), x));
                }
            }
        }
        out
    }
    fn fiber_complete(&self, _a: &Obj<D>) -> bool {
        false
    }
    fn canonical(&self) -> bool {
        false
    }
    fn elem_label(&self, a: &Obj<D>, x: &Self::Elem) -> String {
        let c = self.inner.base();
        let ab = c.prod_obj(a, &x.0);
        let inner = ab.map_or_else(|| format!("{:?}", x.1), |ab| self.inner.elem_label(&ab, &x.1));
        if x.0 == c.terminal() {
            inner
        } else {
            format!("E[{}].{}", c.obj_label(&x.0), inner)
        }
    }
}

/// A tabulated pure existential completion with its inclusion of the
/// generating doctrine.
#[derive(Debug, Clone)]
pub struct ExistentialCompletion {
    pub doctrine: TabDoctrine,
    /// `inclusion[a][x]`: the class of `(1, P_{π1}(x))`.
    pub inclusion: Vec<Vec<usize>>,
    /// Representatives `(aux object, element over A×aux)` of every class.
    pub reps: Vec<Vec<(usize, usize)>>,
}

/// Tabulates `P^∃` for a tabulated primary doctrine. Auxiliary objects
/// range over every object of the base.
pub fn existential_completion(t: &TabDoctrine) -> Result<ExistentialCompletion> {
    let e = ExCompletion::new(t);
    let tab = tabulate(&e);
    let mut inclusion = Vec::new();
    for a in 0..t.base.num_objects() {
        let col: Vec<usize> = (0..t.fibers[a].len())
            .map(|x| {
                let y = e.include(&a, &x).expect("inclusion is defined");
                tab.class_of(&e, a, &y).expect("included element is listed")
            })
            .collect();
        inclusion.push(col);
    }
    Ok(ExistentialCompletion { doctrine: tab.doctrine, inclusion, reps: tab.reps })
}

/// A morphism between two tabulated doctrines over the same base, with the
/// identity functor and explicit element maps.
pub struct TabMorphism<'a> {
    pub src: &'a TabDoctrine,
    pub dst: &'a TabDoctrine,
    pub elem: Vec<Vec<Option<usize>>>,
}

impl DoctrineMorphism for TabMorphism<'_> {
    type Src = TabDoctrine;
    type Dst = TabDoctrine;
    fn src(&self) -> &TabDoctrine {
        self.src
    }
    fn dst(&self) -> &TabDoctrine {
        self.dst
    }
    fn map_obj(&self, a: &usize) -> usize {
        *a
    }
    fn map_mor(&self, f: &usize) -> usize {
        *f
    }
    fn map_elem(&self, a: &usize, x: &usize) -> Option<usize> {
        self.elem[*a][*x]
    }
}

impl ExistentialCompletion {
    pub fn inclusion_morphism<'a>(&'a self, src: &'a TabDoctrine) -> TabMorphism<'a> {
        TabMorphism {
            src,
            dst: &self.doctrine,
            elem: self.inclusion.iter().map(|c| c.iter().map(|&x| Some(x)).collect()).collect(),
        }
    }

    /// Per object, the set of classes in the image of the inclusion.
    pub fn image(&self) -> Vec<std::collections::BTreeSet<usize>> {
        self.inclusion.iter().map(|c| c.iter().copied().collect()).collect()
    }
}

/// The comparison `(P′)^∃ → P` for a subdoctrine `P′` of an existential
/// `P` on the same base: `(B, β) ↦ ∃_{π1}(β)`. `embed[a][x]` is the
/// element of `P` that the element `x` of `P′` stands for. Returns, per
/// object and per class of the completion, the image in `P`.
pub fn completion_comparison(p: &TabDoctrine, embed: &[Vec<usize>], completion: &ExistentialCompletion) -> Vec<Vec<Option<usize>>> {
    let c: &FinCat = &p.base;
    completion
        .reps
        .iter()
        .enumerate()
        .map(|(a, reps)| {
            reps.iter()
                .map(|&(b, x)| {
                    let ab = c.chosen_product(a, b)?.obj;
                    p.exists(&a, &b, &embed[ab][x])
                })
                .collect()
        })
        .collect()
}
