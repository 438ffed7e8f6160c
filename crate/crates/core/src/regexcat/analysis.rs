use super::relcat::{graph_rel, Kind, RelCatOf};
use crate::category::{limits, CartesianExt, Category};
use crate::completions::functional;
use crate::doctrine::{Doctrine, DoctrineExt, Mor};
use crate::report::Report;
use serde_json::json;

/// `β ≤ ∃_{π_B}(φ)` for an arrow `φ: (A,α) → (B,β)` of the regular
/// completion.
pub fn is_regular_epi<D: Doctrine>(d: &D, rc: &RelCatOf<D>, m: usize) -> Option<bool> {
    let ar = &rc.arrows[m];
    let (a, b) = (rc.carrier(ar.src), rc.carrier(ar.dst));
    let img = d.exists_snd(a, b, &ar.rel)?;
    Some(d.leq(b, rc.pred(ar.dst), &img))
}

/// The converse of `φ` is functional.
pub fn is_mono_rel<D: Doctrine>(d: &D, rc: &RelCatOf<D>, m: usize) -> Option<bool> {
    let ar = &rc.arrows[m];
    let (a, b) = (rc.carrier(ar.src), rc.carrier(ar.dst));
    functional(d, b.clone(), a.clone(), d.converse(a, b, &ar.rel)?)
}

/// The arrow `i → j` given by the graph of a base map restricted to the
/// predicate of `i`.
pub fn graph_arrow<D: Doctrine>(d: &D, rc: &RelCatOf<D>, i: usize, j: usize, f: &Mor<D>) -> Option<usize> {
    let r = graph_rel(d, f, rc.pred(i))?;
    rc.find_arrow(d, i, j, &r)
}

/// `φ = m∘e` with `e: (A,α) → (B, ∃_{π_B}φ)` carried by `φ` itself and
/// `m` the inclusion of the image into `(B,β)`.
pub fn image_factorization<D: Doctrine>(d: &D, rc: &RelCatOf<D>, m: usize) -> Option<(usize, usize)> {
    let ar = &rc.arrows[m];
    let (a, b) = (rc.carrier(ar.src), rc.carrier(ar.dst));
    let img = d.exists_snd(a, b, &ar.rel)?;
    let k = rc.find_object(d, b, &img)?;
    let e = rc.find_arrow(d, ar.src, k, &ar.rel)?;
    let mono = graph_arrow(d, rc, k, ar.dst, &d.base().id(b))?;
    Some((e, mono))
}

/// Some `φ: X → B` and regular epi `ψ: C → B` admitting no lift, if any.
pub fn projectivity_witness<D: Doctrine>(d: &D, rc: &RelCatOf<D>, x: usize) -> Option<(usize, usize)> {
    let c = &rc.cat;
    for psi in 0..rc.arrows.len() {
        if is_regular_epi(d, rc, psi) != Some(true) {
            continue;
        }
        let (src, dst) = (c.dom(&psi), c.cod(&psi));
        for &phi in c.hom(x, dst) {
            if !c.hom(x, src).iter().any(|&xi| c.compose(&psi, &xi) == phi) {
                return Some((phi, psi));
            }
        }
    }
    None
}

pub fn is_regular_projective<D: Doctrine>(d: &D, rc: &RelCatOf<D>, x: usize) -> bool {
    projectivity_witness(d, rc, x).is_none()
}

/// Regular epis by the fiber equation against kernel-pair detection, image
/// factorizations, monicity of the mono parts and pullback stability of
/// regular epis along every arrow into their codomain.
pub fn check_regular<D: Doctrine>(d: &D, rc: &RelCatOf<D>) -> Report {
    let c = &rc.cat;
    let mut r = Report::new("regular");
    if rc.kind != Kind::Reg {
        r.note("regular-category checks expect the regular completion");
        return r;
    }
    let lbl = |m: usize| c.mor_label(&m);
    let epi: Vec<Option<bool>> = (0..rc.arrows.len()).map(|m| is_regular_epi(d, rc, m)).collect();
    for m in 0..rc.arrows.len() {
        match (epi[m], limits::is_regular_epi_by_kernel_pair(c, &m)) {
            (Some(a), Some(b)) => {
                r.check("regular_epi.agree", a == b, || json!({"arrow": lbl(m), "fiber": a, "kernel_pair": b}));
            }
            (_, None) => r.fail("kernel_pair.exists", json!({"arrow": lbl(m)})),
            _ => r.skip("regular_epi.agree"),
        }
        match (is_mono_rel(d, rc, m), limits::is_mono(c, &m)) {
            (Some(a), b) => {
                r.check("mono.agree", a == b, || json!({"arrow": lbl(m)}));
            }
            _ => r.skip("mono.agree"),
        }
        match image_factorization(d, rc, m) {
            Some((e, mono)) => {
                r.check("image.composite", c.compose(&mono, &e) == m, || json!({"arrow": lbl(m)}));
                r.check("image.epi", epi.get(e).copied().flatten() == Some(true), || json!({"arrow": lbl(m)}));
                r.check("image.mono", limits::is_mono(c, &mono), || json!({"arrow": lbl(m)}));
            }
            None => r.fail("image.exists", json!({"arrow": lbl(m)})),
        }
    }
    for e in 0..rc.arrows.len() {
        if epi[e] != Some(true) {
            continue;
        }
        let b = c.cod(&e);
        for a in 0..c.num_objects() {
            for &g in c.hom(a, b) {
                match limits::find_pullback(c, &e, &g) {
                    Some((_, _, q)) => {
                        r.check("regular_epi.stable", epi[q] == Some(true), || json!({"epi": lbl(e), "along": lbl(g)}));
                    }
                    None => r.fail("pullback.exists", json!({"f": lbl(e), "g": lbl(g)})),
                }
            }
        }
    }
    r
}

/// Kernel pairs exist and have coequalizers.
pub fn check_exactness<O, E>(rc: &super::RelCat<O, E>) -> Report {
    let c = &rc.cat;
    let mut r = Report::new("exactness");
    for f in 0..c.num_morphisms() {
        let Some((_, k1, k2)) = limits::find_pullback(c, &f, &f) else {
            r.fail("kernel_pair.exists", json!({"arrow": c.mor_label(&f)}));
            continue;
        };
        let x = c.dom(&f);
        let coeq = (0..c.num_objects()).any(|z| c.hom(x, z).iter().any(|e| limits::is_coequalizer(c, e, &k1, &k2)));
        r.check("kernel_pair.coequalizer", coeq, || json!({"arrow": c.mor_label(&f)}));
    }
    r
}

/// Under the graph of the identity, `(A,α)` is a subobject of `(A,⊤)`.
pub fn embedding_into_top<D: Doctrine>(d: &D, rc: &RelCatOf<D>, i: usize) -> Option<usize> {
    let a = rc.carrier(i);
    let top = rc.find_object(d, a, &d.top(a))?;
    let m = graph_arrow(d, rc, i, top, &d.base().id(a))?;
    limits::is_mono(&rc.cat, &m).then_some(m)
}

/// The arrow `(A×B, β) → (A, ∃_{π1}β)` given by the first projection.
pub fn projection_cover<D: Doctrine>(d: &D, rc: &RelCatOf<D>, a: &crate::doctrine::Obj<D>, b: &crate::doctrine::Obj<D>, beta: &D::Elem) -> Option<usize> {
    let c = d.base();
    let ab = c.prod_obj(a, b)?;
    let src = rc.find_object(d, &ab, beta)?;
    let dst = rc.find_object(d, a, &d.exists(a, b, beta)?)?;
    graph_arrow(d, rc, src, dst, &c.p1(a, b)?)
}
