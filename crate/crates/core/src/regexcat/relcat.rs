use crate::category::{Cartesian, CartesianExt, Category, FinCat, FinCatBuilder};
use crate::completions::functional;
use crate::doctrine::{ClassCache, Doctrine, DoctrineExt, Obj};
use crate::error::{Error, Result};
use crate::report::Report;
use serde_json::json;

/// Default cap on candidate relations per hom-set.
pub const DEFAULT_BUDGET: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Objects `(A, α)`, arrows entire functional relations.
    Reg,
    /// Objects `(A, ρ)` with `ρ` a partial equivalence relation.
    Ex,
}

/// An arrow of a relational category: a relation over the product of the
/// carriers of its ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelArrow<E> {
    pub src: usize,
    pub dst: usize,
    pub rel: E,
}

/// A materialized relational category: the finite category together with
/// the carrier and predicate of every object and the relation behind every
/// arrow. Indices agree with those of `cat`.
#[derive(Debug, Clone)]
pub struct RelCat<O, E> {
    pub kind: Kind,
    pub cat: FinCat,
    pub objs: Vec<(O, E)>,
    pub arrows: Vec<RelArrow<E>>,
    pub report: Report,
}

pub type RelCatOf<D> = RelCat<Obj<D>, <D as Doctrine>::Elem>;

impl<O: Clone + Eq, E: Clone + Eq> RelCat<O, E> {
    /// Index of the object `(a, x)`, matching `x` up to equivalence.
    pub fn find_object<D>(&self, d: &D, a: &O, x: &E) -> Option<usize>
    where
        D: Doctrine<Elem = E>,
        D::Base: Category<Obj = O>,
    {
        let over = match self.kind {
            Kind::Reg => a.clone(),
            Kind::Ex => d.base().prod_obj(a, a)?,
        };
        self.objs.iter().position(|(b, y)| b == a && d.equiv(&over, x, y))
    }

    /// The arrow `i → j` whose relation is equivalent to `rel`.
    pub fn find_arrow<D>(&self, d: &D, i: usize, j: usize, rel: &E) -> Option<usize>
    where
        D: Doctrine<Elem = E>,
        D::Base: Category<Obj = O>,
    {
        let ab = d.base().prod_obj(&self.objs[i].0, &self.objs[j].0)?;
        self.cat.hom(i, j).iter().copied().find(|&m| d.equiv(&ab, &self.arrows[m].rel, rel))
    }

    pub fn carrier(&self, i: usize) -> &O {
        &self.objs[i].0
    }

    pub fn pred(&self, i: usize) -> &E {
        &self.objs[i].1
    }
}

/// The three conditions on `φ` over `A×B` for an arrow `(A,α) → (B,β)`:
/// bounded by both predicates, entire on `α`, functional.
pub fn is_entire_functional<D: Doctrine>(d: &D, a: &(Obj<D>, D::Elem), b: &(Obj<D>, D::Elem), phi: &D::Elem) -> Option<bool> {
    let c = d.base();
    let ab = c.product(&a.0, &b.0)?;
    let bound = d.meet(&ab.obj, &d.reindex(&ab.p1, &a.1)?, &d.reindex(&ab.p2, &b.1)?)?;
    if !d.leq(&ab.obj, phi, &bound) {
        return Some(false);
    }
    if !d.leq(&a.0, &a.1, &d.exists(&a.0, &b.0, phi)?) {
        return Some(false);
    }
    functional(d, a.0.clone(), b.0.clone(), phi.clone())
}

/// Symmetric and transitive.
pub fn is_per<D: Doctrine>(d: &D, a: &Obj<D>, rho: &D::Elem) -> Option<bool> {
    let aa = d.base().prod_obj(a, a)?;
    let sym = d.leq(&aa, rho, &d.converse(a, a, rho)?);
    let tr = d.leq(&aa, &d.rel_compose(a, a, a, rho, rho)?, rho);
    Some(sym && tr)
}

/// The conditions on `φ` over `A×B` for an arrow `(A,ρ) → (B,σ)` of the
/// exact completion: compatible with both relations, strict, functional
/// and entire.
pub fn is_ex_arrow<D: Doctrine>(d: &D, a: &(Obj<D>, D::Elem), b: &(Obj<D>, D::Elem), phi: &D::Elem) -> Option<bool> {
    let c = d.base();
    let (x, y) = (&a.0, &b.0);
    let ab = c.product(x, y)?;
    let (rho, sigma) = (&a.1, &b.1);
    let conv = d.converse(x, y, phi)?;
    let support_a = d.reindex(&c.diag(x)?, rho)?;
    let support_b = d.reindex(&c.diag(y)?, sigma)?;
    let strict = d.meet(&ab.obj, &d.reindex(&ab.p1, &support_a)?, &d.reindex(&ab.p2, &support_b)?)?;
    let aa = c.prod_obj(x, x)?;
    let bb = c.prod_obj(y, y)?;
    Some(
        d.leq(&ab.obj, phi, &strict)
            && d.leq(&ab.obj, &d.rel_compose(x, x, y, rho, phi)?, phi)
            && d.leq(&ab.obj, &d.rel_compose(x, y, y, phi, sigma)?, phi)
            && d.leq(&bb, &d.rel_compose(y, x, y, &conv, phi)?, sigma)
            && d.leq(&aa, rho, &d.rel_compose(x, y, x, phi, &conv)?),
    )
}

/// `P_{f×id}(δ_B) ∧ P_{π1}(α)` over `A×B`: the graph of `f: A → B`
/// restricted to `α`.
pub fn graph_rel<D: Doctrine>(d: &D, f: &crate::doctrine::Mor<D>, alpha: &D::Elem) -> Option<D::Elem> {
    let c = d.base();
    let (a, b) = (c.dom(f), c.cod(f));
    let ab = c.product(&a, &b)?;
    let fx = c.times(f, &c.id(&b))?;
    let eq = d.reindex(&fx, &d.delta(&b)?)?;
    d.meet(&ab.obj, &eq, &d.reindex(&ab.p1, alpha)?)
}

fn identity_rel<D: Doctrine>(d: &D, kind: Kind, o: &(Obj<D>, D::Elem)) -> Option<D::Elem> {
    match kind {
        Kind::Reg => graph_rel(d, &d.base().id(&o.0), &o.1),
        Kind::Ex => Some(o.1.clone()),
    }
}

/// The regular completion over the listed objects (every `(A, α)` with
/// `α` a listed class when `objs` is `None`).
pub fn reg_completion<D: Doctrine>(d: &D, objs: Option<Vec<(Obj<D>, D::Elem)>>, budget: usize) -> Result<RelCatOf<D>> {
    need_structure(d)?;
    let cache = ClassCache::default();
    let objs = objs.unwrap_or_else(|| {
        let mut out = Vec::new();
        for a in d.base().objects() {
            for x in cache.classes(d, &a).iter() {
                out.push((a.clone(), x.clone()));
            }
        }
        out
    });
    materialize(d, Kind::Reg, objs, budget, &cache)
}

/// The exact completion, presented by partial equivalence relations and
/// strict functional relations. With `objs` `None`, every listed PER over
/// every object.
pub fn ex_completion<D: Doctrine>(d: &D, objs: Option<Vec<(Obj<D>, D::Elem)>>, budget: usize) -> Result<RelCatOf<D>> {
    need_structure(d)?;
    let cache = ClassCache::default();
    let objs = match objs {
        Some(o) => o,
        None => {
            let mut out = Vec::new();
            for a in d.base().objects() {
                let Some(aa) = d.base().prod_obj(&a, &a) else { continue };
                for x in cache.classes(d, &aa).iter() {
                    if is_per(d, &a, x) == Some(true) {
                        out.push((a.clone(), x.clone()));
                    }
                }
            }
            out
        }
    };
    materialize(d, Kind::Ex, objs, budget, &cache)
}

fn need_structure<D: Doctrine>(d: &D) -> Result<()> {
    if !d.is_elementary() || !d.is_existential() {
        return Err(Error::MissingStructure("relational completions need equality and quantifiers".into()));
    }
    Ok(())
}

fn materialize<D: Doctrine>(d: &D, kind: Kind, objs: Vec<(Obj<D>, D::Elem)>, budget: usize, cache: &ClassCache<D>) -> Result<RelCatOf<D>> {
    let c = d.base();
    let n = objs.len();
    let mut report = Report::new(match kind {
        Kind::Reg => "reg_completion",
        Kind::Ex => "ex_completion",
    });
    let mut homs: Vec<Vec<D::Elem>> = Vec::with_capacity(n * n);
    for a in &objs {
        for b in &objs {
            let ab = c.prod_obj(&a.0, &b.0).ok_or_else(|| Error::MissingStructure("product of carriers".into()))?;
            let cands = cache.classes(d, &ab);
            if cands.len() > budget {
                return Err(Error::FiberTooLarge { budget, needed: cands.len() });
            }
            let mut hom = Vec::new();
            for phi in cands.iter() {
                let ok = match kind {
                    Kind::Reg => is_entire_functional(d, a, b, phi),
                    Kind::Ex => is_ex_arrow(d, a, b, phi),
                };
                match ok {
                    Some(true) => hom.push(phi.clone()),
                    Some(false) => {}
                    None => report.skip("hom.candidate"),
                }
            }
            for (i, x) in hom.iter().enumerate() {
                for y in &hom[i + 1..] {
                    let comparable = d.leq(&ab, x, y) || d.leq(&ab, y, x);
                    report.check("hom.discrete", !comparable, || {
                        json!({"src": label(d, kind, a), "dst": label(d, kind, b), "x": d.elem_label(&ab, x), "y": d.elem_label(&ab, y)})
                    });
                }
            }
            homs.push(hom);
        }
    }

    let mut b = FinCatBuilder::new();
    for o in &objs {
        b.object(&label(d, kind, o));
    }
    let mut index: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    let mut arrows: Vec<Option<RelArrow<D::Elem>>> = vec![None; n];
    for (i, o) in objs.iter().enumerate() {
        let idr = identity_rel(d, kind, o).ok_or_else(|| Error::MissingStructure("identity relation".into()))?;
        let oo = c.prod_obj(&o.0, &o.0).unwrap();
        let pos = d
            .position_in(&oo, &homs[i * n + i], &idr)
            .ok_or_else(|| Error::MissingStructure(format!("identity on {} is not listed", label(d, kind, o))))?;
        index[i * n + i] = vec![usize::MAX; homs[i * n + i].len()];
        index[i * n + i][pos] = b.identity(i);
        arrows[i] = Some(RelArrow { src: i, dst: i, rel: homs[i * n + i][pos].clone() });
    }
    let mut arrows: Vec<RelArrow<D::Elem>> = arrows.into_iter().map(Option::unwrap).collect();
    for i in 0..n {
        for j in 0..n {
            let ab = c.prod_obj(&objs[i].0, &objs[j].0).unwrap();
            if index[i * n + j].is_empty() {
                index[i * n + j] = vec![usize::MAX; homs[i * n + j].len()];
            }
            for (k, phi) in homs[i * n + j].iter().enumerate() {
                if index[i * n + j][k] != usize::MAX {
                    continue;
                }
                let m = b.morphism(&d.elem_label(&ab, phi), i, j);
                index[i * n + j][k] = m;
                arrows.push(RelArrow { src: i, dst: j, rel: phi.clone() });
            }
        }
    }
    for f in 0..arrows.len() {
        let (i, j) = (arrows[f].src, arrows[f].dst);
        for k in 0..n {
            for (gi, psi) in homs[j * n + k].iter().enumerate() {
                let g = index[j * n + k][gi];
                let (x, y, z) = (&objs[i].0, &objs[j].0, &objs[k].0);
                let comp = d
                    .rel_compose(x, y, z, &arrows[f].rel, psi)
                    .ok_or_else(|| Error::MissingStructure("relational composite undefined".into()))?;
                let xz = c.prod_obj(x, z).unwrap();
                let pos = d.position_in(&xz, &homs[i * n + k], &comp).ok_or_else(|| {
                    Error::MissingStructure(format!(
                        "composite {} → {} is outside the listed relations",
                        label(d, kind, &objs[i]),
                        label(d, kind, &objs[k])
                    ))
                })?;
                b.compose(g, f, index[i * n + k][pos]);
            }
        }
    }
    let t = c.terminal();
    let top_t = match kind {
        Kind::Reg => Some(d.top(&t)),
        Kind::Ex => c.prod_obj(&t, &t).map(|tt| d.top(&tt)),
    };
    let find = |o: &(Obj<D>, D::Elem)| -> Option<usize> {
        let over = match kind {
            Kind::Reg => o.0.clone(),
            Kind::Ex => c.prod_obj(&o.0, &o.0)?,
        };
        objs.iter().position(|p| p.0 == o.0 && d.equiv(&over, &p.1, &o.1))
    };
    if let Some(ti) = top_t.and_then(|x| find(&(t.clone(), x))) {
        b.terminal(ti);
    }
    if kind == Kind::Reg {
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (&objs[i], &objs[j]);
                let Some(p) = c.product(&x.0, &y.0) else { continue };
                let pred = (|| d.meet(&p.obj, &d.reindex(&p.p1, &x.1)?, &d.reindex(&p.p2, &y.1)?))();
                let Some(pred) = pred else { continue };
                let Some(k) = find(&(p.obj.clone(), pred.clone())) else { continue };
                let leg = |f: &crate::doctrine::Mor<D>, to: usize| -> Option<usize> {
                    let r = graph_rel(d, f, &pred)?;
                    let xz = c.prod_obj(&p.obj, &objs[to].0)?;
                    let pos = d.position_in(&xz, &homs[k * n + to], &r)?;
                    Some(index[k * n + to][pos])
                };
                if let (Some(p1), Some(p2)) = (leg(&p.p1, i), leg(&p.p2, j)) {
                    b.product(i, j, k, p1, p2);
                }
            }
        }
    }
    let cat = b.build()?;
    Ok(RelCat { kind, cat, objs, arrows, report })
}

fn label<D: Doctrine>(d: &D, kind: Kind, o: &(Obj<D>, D::Elem)) -> String {
    let c = d.base();
    let over = match kind {
        Kind::Reg => Some(o.0.clone()),
        Kind::Ex => c.prod_obj(&o.0, &o.0),
    };
    let e = over.map_or_else(|| format!("{:?}", o.1), |w| d.elem_label(&w, &o.1));
    format!("({}, {})", c.obj_label(&o.0), e)
}
