use super::analysis::graph_arrow;
use super::functor::Functor;
use super::relcat::{ex_completion, is_per, reg_completion, RelCat, RelCatOf};
use crate::category::{limits, Cartesian, CartesianExt, Category, FinCat};
use crate::doctrine::{subobjects_with_reps, weak_subobjects, Doctrine, TabDoctrine};
use crate::error::{Error, Result};

/// The exact completion of a regular category `R`, computed from its
/// subobject doctrine: objects are equivalence relations, arrows are
/// entire functional relations compatible with them.
#[derive(Debug, Clone)]
pub struct ExReg {
    /// `R` with a terminal object and products found by search.
    pub base: FinCat,
    pub sub: TabDoctrine,
    /// A representing mono for every subobject.
    pub reps: Vec<Vec<usize>>,
    pub ex: RelCat<usize, usize>,
}

pub fn ex_reg_crosscheck(r: &FinCat, budget: usize) -> Result<ExReg> {
    let base = limits::with_searched_limits(r);
    let n = base.num_objects();
    if base.chosen_terminal().is_none() || (0..n).any(|a| (0..n).any(|b| base.chosen_product(a, b).is_none())) {
        return Err(Error::NotRegular("finite products are missing".into()));
    }
    let (sub, reps, notes) = subobjects_with_reps(&base);
    if sub.delta.is_none() || sub.exists.is_none() {
        return Err(Error::NotRegular(notes.join("; ")));
    }
    let mut objs = Vec::new();
    for a in 0..n {
        let aa = base.prod_obj(&a, &a).unwrap();
        let d = sub.delta(&a).unwrap();
        for rho in 0..sub.fibers[aa].len() {
            if sub.leq(&aa, &d, &rho) && is_per(&sub, &a, &rho) == Some(true) {
                objs.push((a, rho));
            }
        }
    }
    let ex = ex_completion(&sub, Some(objs), budget)?;
    Ok(ExReg { base, sub, reps, ex })
}

impl ExReg {
    /// Whether the mono `m` factors through `n`.
    fn factors(&self, m: usize, n: usize) -> bool {
        let c = &self.base;
        c.hom(c.dom(&m), c.dom(&n)).iter().any(|h| c.compose(&n, h) == m)
    }

    /// The subobject of `cod(m)` represented by the mono `m`.
    pub fn subobject_of(&self, m: usize) -> Option<usize> {
        let x = self.base.cod(&m);
        (0..self.sub.fibers[x].len()).find(|&e| self.factors(m, self.reps[x][e]) && self.factors(self.reps[x][e], m))
    }
}

/// The relation `rel ≤ P_{π1}α ∧ P_{π2}β` over `A×B`, seen as a subobject
/// of `X×Y` in `Reg(P)` where `X = (A,α)` and `Y = (B,β)`.
fn relation_subobject<D: Doctrine>(d: &D, reg: &RelCatOf<D>, xr: &ExReg, x: usize, y: usize, rel: &D::Elem) -> Option<usize> {
    let c = d.base();
    let (a, b) = (reg.carrier(x), reg.carrier(y));
    let ab = c.product(a, b)?;
    let s = reg.find_object(d, &ab.obj, rel)?;
    let qpred = d.meet(&ab.obj, &d.reindex(&ab.p1, reg.pred(x))?, &d.reindex(&ab.p2, reg.pred(y))?)?;
    let q = reg.find_object(d, &ab.obj, &qpred)?;
    let m = graph_arrow(d, reg, s, q, &c.id(&ab.obj))?;
    let q1 = graph_arrow(d, reg, q, x, &ab.p1)?;
    let q2 = graph_arrow(d, reg, q, y, &ab.p2)?;
    let r = &xr.base;
    let prod = r.chosen_product(x, y)?;
    let u = r.hom(q, prod.obj).iter().copied().find(|u| r.compose(&prod.p1, u) == q1 && r.compose(&prod.p2, u) == q2)?;
    xr.subobject_of(r.compose(&u, &m))
}

/// The comparison `Ex(P) → ex/reg(Reg(P))`: a PER `ρ` on `A` goes to the
/// equivalence relation it defines on its support `(A, P_Δ ρ)`.
pub fn ex_comparison<D: Doctrine>(d: &D, ex: &RelCatOf<D>, reg: &RelCatOf<D>, xr: &ExReg) -> Result<Functor> {
    let c = d.base();
    let missing = |what: String| Error::MissingStructure(what);
    let mut support = Vec::new();
    let mut obj = Vec::new();
    for (i, (a, rho)) in ex.objs.iter().enumerate() {
        let alpha = c.diag(a).and_then(|k| d.reindex(&k, rho)).ok_or_else(|| missing("support".into()))?;
        let x = reg.find_object(d, a, &alpha).ok_or_else(|| missing(format!("support of {}", ex.cat.obj_label(&i))))?;
        let e = relation_subobject(d, reg, xr, x, x, rho).ok_or_else(|| missing(format!("relation of {}", ex.cat.obj_label(&i))))?;
        let k = xr.ex.objs.iter().position(|&o| o == (x, e)).ok_or_else(|| missing(format!("image of {}", ex.cat.obj_label(&i))))?;
        support.push(x);
        obj.push(k);
    }
    let mut mor = Vec::new();
    for (m, ar) in ex.arrows.iter().enumerate() {
        let e = relation_subobject(d, reg, xr, support[ar.src], support[ar.dst], &ar.rel)
            .ok_or_else(|| missing(format!("relation of {}", ex.cat.mor_label(&m))))?;
        let k = xr.ex.cat.hom(obj[ar.src], obj[ar.dst]).iter().copied().find(|&k| xr.ex.arrows[k].rel == e);
        mor.push(k.ok_or_else(|| missing(format!("image of {}", ex.cat.mor_label(&m))))?);
    }
    Ok(Functor { src: ex.cat.clone(), dst: xr.ex.cat.clone(), obj, mor })
}

/// `reg/lex(C)`: the regular completion of the weak subobjects of `C`.
pub fn reg_lex(c: &FinCat, budget: usize) -> Result<(TabDoctrine, RelCat<usize, usize>)> {
    let psi = weak_subobjects(c)?.doctrine;
    let reg = reg_completion(&psi, None, budget)?;
    Ok((psi, reg))
}

/// `ex/lex(C)`: the exact completion of the weak subobjects of `C`.
pub fn ex_lex(c: &FinCat, budget: usize) -> Result<(TabDoctrine, RelCat<usize, usize>)> {
    let psi = weak_subobjects(c)?.doctrine;
    let ex = ex_completion(&psi, None, budget)?;
    Ok((psi, ex))
}
