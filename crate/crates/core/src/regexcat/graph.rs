use super::functor::{check_functor, Functor};
use super::relcat::{graph_rel, Kind, RelCat};
use crate::category::{limits, CartesianExt, Category, FinCat};
use crate::completions::{ExistentialCompletion, Predicates, TabMorphism};
use crate::doctrine::{
    tabulate, validate_morphism, weak_subobjects, Doctrine, DoctrineExt, DoctrineMorphism, PreservationFlags, Subdoctrine,
    TabDoctrine, Tabulation, WeakSubobjects,
};
use crate::error::{Error, Result};
use crate::report::Report;
use serde_json::json;

/// A full subdoctrine `P′ ↪ P` on the same base, tabulated on its own:
/// `embed[a][x]` is the element of `P` behind `x ∈ P′(a)`.
#[derive(Debug, Clone)]
pub struct Embedded {
    pub sub: TabDoctrine,
    pub embed: Vec<Vec<usize>>,
}

impl Embedded {
    pub fn from_subdoctrine(s: &Subdoctrine<&TabDoctrine>) -> Embedded {
        let tab = tabulate(s);
        Embedded { sub: tab.doctrine, embed: tab.reps }
    }

    /// The generating doctrine inside its pure existential completion.
    pub fn from_completion(src: &TabDoctrine, e: &ExistentialCompletion) -> Embedded {
        Embedded { sub: src.clone(), embed: e.inclusion.clone() }
    }

    pub fn morphism<'a>(&'a self, p: &'a TabDoctrine) -> TabMorphism<'a> {
        TabMorphism { src: &self.sub, dst: p, elem: self.embed.iter().map(|c| c.iter().map(|&x| Some(x)).collect()).collect() }
    }

    /// Checks that the embedding is injective, preserves the structure and
    /// reflects the order, so that `P′` is a full elementary subdoctrine.
    pub fn check(&self, p: &TabDoctrine) -> Result<Report> {
        let (mut r, flags) = validate_morphism(&self.morphism(p));
        for a in 0..self.sub.base.num_objects() {
            let n = self.sub.fibers[a].len();
            for x in 0..n {
                for y in 0..n {
                    let reflects = self.sub.fibers[a].leq(x, y) == p.fibers[a].leq(self.embed[a][x], self.embed[a][y]);
                    r.check("order.reflected", reflects, || json!({"object": a, "x": x, "y": y}));
                }
            }
        }
        if !r.pass || !flags.equality {
            return Err(Error::NotASubdoctrine(r.to_json().to_string()));
        }
        Ok(r)
    }
}

fn pred_carrier(pred: &Predicates, i: usize) -> (usize, usize) {
    pred.tab.mat.objs[i]
}

/// The graph functor `Pred(P′) → Reg(P)`: `(A,α) ↦ (A,α)` and
/// `[f] ↦ P_{f×id}(δ_B) ∧ P_{π1}(α)`. The report compares this with
/// `∃_{⟨id,f⟩}(α)` on every arrow and checks that finite limits are
/// preserved.
pub fn graph_functor(p: &TabDoctrine, emb: &Embedded, pred_sub: &Predicates, reg: &RelCat<usize, usize>) -> Result<(Functor, Report)> {
    let src = pred_sub.cat();
    let c = &p.base;
    let mut r = Report::new("graph_functor");
    let mut obj = Vec::with_capacity(src.num_objects());
    for i in 0..src.num_objects() {
        let (a, x) = pred_carrier(pred_sub, i);
        let k = reg
            .find_object(p, &a, &emb.embed[a][x])
            .ok_or_else(|| Error::MissingStructure(format!("{} is not an object of the regular completion", src.obj_label(&i))))?;
        obj.push(k);
    }
    let mut mor = Vec::with_capacity(src.num_morphisms());
    for m in 0..src.num_morphisms() {
        let pm = &pred_sub.tab.mat.mors[m];
        let alpha = emb.embed[pm.src.0][pm.src.1];
        let g = graph_rel(p, &pm.f, &alpha).ok_or_else(|| Error::MissingStructure("graph relation".into()))?;
        let alt = c.graph_of(&pm.f).and_then(|k| p.exists_along(&k, &alpha));
        r.check("formulas_agree", alt == Some(g), || json!({"arrow": src.mor_label(&m)}));
        let k = reg
            .find_arrow(p, obj[src.dom(&m)], obj[src.cod(&m)], &g)
            .ok_or_else(|| Error::MissingStructure(format!("the graph of {} is not an arrow", src.mor_label(&m))))?;
        mor.push(k);
    }
    let f = Functor { src: src.clone(), dst: reg.cat.clone(), obj, mor };
    r.absorb("", check_functor(&f));
    r.absorb("", check_lex(&f));
    Ok((f, r))
}

/// Terminal object, chosen products and searched pullbacks of the source
/// are sent to limits.
pub fn check_lex(f: &Functor) -> Report {
    let (c, d) = (&f.src, &f.dst);
    let mut r = Report::new("lex");
    if let Some(t) = c.chosen_terminal() {
        r.check("preserves.terminal", limits::is_terminal(d, &f.obj[t]), || json!({}));
    }
    for a in 0..c.num_objects() {
        for b in 0..c.num_objects() {
            let Some(p) = c.chosen_product(a, b) else { continue };
            let ok = limits::is_product(d, &f.obj[a], &f.obj[b], &f.obj[p.obj], &f.mor[p.p1], &f.mor[p.p2]);
            r.check("preserves.products", ok, || json!({"a": c.obj_label(&a), "b": c.obj_label(&b)}));
        }
    }
    for g in 0..c.num_morphisms() {
        for h in 0..c.num_morphisms() {
            if c.cod(&g) != c.cod(&h) || g > h {
                continue;
            }
            let Some((o, p, q)) = limits::find_pullback(c, &g, &h) else { continue };
            let ok = limits::is_pullback(d, &f.mor[g], &f.mor[h], &(f.obj[o], f.mor[p], f.mor[q]));
            r.check("preserves.pullbacks", ok, || json!({"f": c.mor_label(&g), "g": c.mor_label(&h)}));
        }
    }
    r
}

/// Weak subobjects of `Pred(P′)`, the doctrine `Ψ` whose regular and exact
/// completions are `reg/lex` and `ex/lex` of `Pred(P′)`.
pub fn psi(pred_sub: &Predicates) -> Result<Tabulation<WeakSubobjects<FinCat>>> {
    weak_subobjects(pred_sub.cat())
}

/// `ι` of the class `e` of `Ψ(X)`: `∃_f(γ)` for a representative
/// `f: (C,γ) → X`.
pub fn iota(p: &TabDoctrine, emb: &Embedded, pred_sub: &Predicates, psi: &Tabulation<WeakSubobjects<FinCat>>, x: usize, e: usize) -> Option<usize> {
    let rep = psi.reps[x][e];
    let pm = &pred_sub.tab.mat.mors[rep];
    p.exists_along(&pm.f, &emb.embed[pm.src.0][pm.src.1])
}

/// The morphism `(I, ι): Ψ → P_cx`, tabulated, where `I` includes
/// `Pred(P′)` into `Pred(P)`.
pub struct PsiToPcx<'a> {
    pub psi: &'a TabDoctrine,
    pub pcx: &'a TabDoctrine,
    pub obj: Vec<usize>,
    pub mor: Vec<usize>,
    pub elem: Vec<Vec<Option<usize>>>,
}

impl DoctrineMorphism for PsiToPcx<'_> {
    type Src = TabDoctrine;
    type Dst = TabDoctrine;
    fn src(&self) -> &TabDoctrine {
        self.psi
    }
    fn dst(&self) -> &TabDoctrine {
        self.pcx
    }
    fn map_obj(&self, a: &usize) -> usize {
        self.obj[*a]
    }
    fn map_mor(&self, f: &usize) -> usize {
        self.mor[*f]
    }
    fn map_elem(&self, a: &usize, x: &usize) -> Option<usize> {
        self.elem[*a][*x]
    }
}

pub fn psi_to_pcx<'a>(
    p: &TabDoctrine,
    emb: &Embedded,
    pred_sub: &Predicates,
    pred_p: &'a Predicates,
    psi: &'a Tabulation<WeakSubobjects<FinCat>>,
) -> Result<PsiToPcx<'a>> {
    let src = pred_sub.cat();
    let mut obj = Vec::new();
    for i in 0..src.num_objects() {
        let (a, x) = pred_carrier(pred_sub, i);
        let k = pred_p.object(a, emb.embed[a][x]).ok_or_else(|| Error::MissingStructure("object of Pred(P)".into()))?;
        obj.push(k);
    }
    let mut mor = Vec::new();
    for m in 0..src.num_morphisms() {
        let pm = &pred_sub.tab.mat.mors[m];
        let k = pred_p
            .arrow_index(p, obj[src.dom(&m)], obj[src.cod(&m)], pm.f)
            .ok_or_else(|| Error::MissingStructure("arrow of Pred(P)".into()))?;
        mor.push(k);
    }
    let elem = (0..src.num_objects())
        .map(|x| {
            (0..psi.doctrine.fibers[x].len())
                .map(|e| {
                    let v = iota(p, emb, pred_sub, psi, x, e)?;
                    pred_p.tab.reps[obj[x]].iter().position(|&y| y == v)
                })
                .collect()
        })
        .collect();
    Ok(PsiToPcx { psi: &psi.doctrine, pcx: pred_p.pcx(), obj, mor, elem })
}

/// Validates `(I, ι)`; both preservation flags are expected.
pub fn check_psi_to_pcx(m: &PsiToPcx) -> (Report, PreservationFlags) {
    validate_morphism(m)
}

/// `G^reg: Reg(Ψ) → Reg(P)` (for `kind` `Reg`) or `G^ex: Ex(Ψ) → Ex(P)`
/// (for `Ex`): an object `(X, s)` over `X = (A, α)` goes to `(A, ι s)` and a
/// relation `r` to `ι r`.
pub fn completion_functor(
    p: &TabDoctrine,
    emb: &Embedded,
    pred_sub: &Predicates,
    psi: &Tabulation<WeakSubobjects<FinCat>>,
    from: &RelCat<usize, usize>,
    to: &RelCat<usize, usize>,
) -> Result<Functor> {
    let pc = pred_sub.cat();
    let carrier = |x: usize| pred_carrier(pred_sub, x).0;
    let over = |x: usize, y: usize| pc.prod_obj(&x, &y);
    let mut obj = Vec::new();
    for (x, s) in &from.objs {
        let (w, a) = match from.kind {
            Kind::Reg => (*x, carrier(*x)),
            Kind::Ex => (over(*x, *x).ok_or(Error::MissingStructure("square".into()))?, carrier(*x)),
        };
        let v = iota(p, emb, pred_sub, psi, w, *s).ok_or(Error::MissingStructure("ι".into()))?;
        let k = to
            .find_object(p, &a, &v)
            .ok_or_else(|| Error::MissingStructure(format!("no image for {}", from.cat.obj_label(&obj.len()))))?;
        obj.push(k);
    }
    let mut mor = Vec::new();
    for (m, ar) in from.arrows.iter().enumerate() {
        let (x, y) = (from.objs[ar.src].0, from.objs[ar.dst].0);
        let w = over(x, y).ok_or(Error::MissingStructure("product".into()))?;
        let v = iota(p, emb, pred_sub, psi, w, ar.rel).ok_or(Error::MissingStructure("ι".into()))?;
        let k = to
            .find_arrow(p, obj[ar.src], obj[ar.dst], &v)
            .ok_or_else(|| Error::MissingStructure(format!("no image for {}", from.cat.mor_label(&m))))?;
        mor.push(k);
    }
    Ok(Functor { src: from.cat.clone(), dst: to.cat.clone(), obj, mor })
}

/// On objects `(X, ⊤)` and on graphs of arrows of `Pred(P′)`, `G^reg`
/// agrees with the graph functor.
pub fn check_extends_graph(g: &Functor, g_reg: &Functor, psi: &Tabulation<WeakSubobjects<FinCat>>, pred_sub: &Predicates, reg_psi: &RelCat<usize, usize>) -> Report {
    let mut r = Report::new("extends_graph");
    let pc = pred_sub.cat();
    let ps = &psi.doctrine;
    let mut embed_obj = Vec::new();
    for x in 0..pc.num_objects() {
        let k = reg_psi.find_object(ps, &x, &ps.top(&x));
        r.check("yoneda.object", k.map(|k| g_reg.obj[k]) == Some(g.obj[x]), || json!({"object": pc.obj_label(&x)}));
        embed_obj.push(k);
    }
    for m in 0..pc.num_morphisms() {
        let (x, y) = (pc.dom(&m), pc.cod(&m));
        let (Some(i), Some(j)) = (embed_obj[x], embed_obj[y]) else { continue };
        let k = graph_rel(ps, &m, &ps.top(&x)).and_then(|rel| reg_psi.find_arrow(ps, i, j, &rel));
        r.check("yoneda.arrow", k.map(|k| g_reg.mor[k]) == Some(g.mor[m]), || json!({"arrow": pc.mor_label(&m)}));
    }
    r
}
