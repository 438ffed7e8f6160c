//! Splitting and free elements, the Rule of Choice, covers, Hilbert
//! ε-operators and the end-to-end check of the characterization of regular
//! and exact completions.

mod main_theorem;

pub use main_theorem::{verify_main_theorem, MainTheorem};

use crate::category::{CartesianExt, Category};
use crate::doctrine::{Doctrine, DoctrineExt, Mor, Obj, Selection, TabDoctrine};
use crate::report::Report;
use serde_json::json;
use std::collections::BTreeSet;

/// Verdict on one element, with the witness arrow for the first instance of
/// the hypothesis or the first counterexample `(B, β)`.
#[derive(Debug, Clone)]
pub struct SplitReport<O, E, M> {
    /// Splitting in the equational form.
    pub verdict: bool,
    /// Splitting in the inequational form; not computed in relative mode.
    pub prop_verdict: Option<bool>,
    pub witness: Option<M>,
    pub counterexample: Option<(O, E)>,
}

pub type Split<D> = SplitReport<Obj<D>, <D as Doctrine>::Elem, Mor<D>>;

/// The chosen product, when it lies among the listed objects.
fn listed_product<D: Doctrine>(d: &D, objs: &[Obj<D>], a: &Obj<D>, b: &Obj<D>) -> Option<Obj<D>> {
    d.base().prod_obj(a, b).filter(|p| objs.contains(p))
}

/// Some `h: A → B` with `rel(P_{⟨id,h⟩}β)`; candidates in hom order.
fn search_section<D: Doctrine>(d: &D, a: &Obj<D>, b: &Obj<D>, beta: &D::Elem, ok: impl Fn(&D::Elem) -> bool) -> Option<Mor<D>> {
    let c = d.base();
    c.homs(a, b).into_iter().find(|h| c.graph_of(h).and_then(|k| d.reindex(&k, beta)).is_some_and(|x| ok(&x)))
}

/// Whether `α ∈ P(A)` is a pure existential splitting. With `relative`,
/// `β` ranges over the elements accepted by it and only the equational form
/// is checked.
pub fn is_splitting<D: Doctrine>(d: &D, a: &Obj<D>, alpha: &D::Elem, relative: Option<&dyn Fn(&Obj<D>, &D::Elem) -> bool>) -> Split<D> {
    let c = d.base();
    let mut rep = SplitReport { verdict: true, prop_verdict: relative.is_none().then_some(true), witness: None, counterexample: None };
    let objs = c.objects();
    for b in &objs {
        let b = b.clone();
        let Some(ab) = listed_product(d, &objs, a, &b) else { continue };
        for beta in d.classes(&ab) {
            if relative.is_some_and(|r| !r(&ab, &beta)) {
                continue;
            }
            let Some(e) = d.exists(a, &b, &beta) else { continue };
            if rep.verdict && d.equiv(a, alpha, &e) {
                match search_section(d, a, &b, &beta, |x| d.equiv(a, alpha, x)) {
                    Some(h) => {
                        if rep.witness.is_none() {
                            rep.witness = Some(h);
                        }
                    }
                    None => {
                        rep.verdict = false;
                        rep.counterexample = Some((b.clone(), beta.clone()));
                    }
                }
            }
            if rep.prop_verdict == Some(true) && d.leq(a, alpha, &e) && search_section(d, a, &b, &beta, |x| d.leq(a, alpha, x)).is_none() {
                rep.prop_verdict = Some(false);
            }
        }
    }
    rep
}

/// Whether every reindexing of `α` is splitting; the first failing arrow.
pub fn free_failure<D: Doctrine>(d: &D, a: &Obj<D>, alpha: &D::Elem) -> Option<Mor<D>> {
    let c = d.base();
    for x in c.objects() {
        for f in c.homs(&x, a) {
            let Some(y) = d.reindex(&f, alpha) else { continue };
            if !is_splitting(d, &x, &y, None).verdict {
                return Some(f);
            }
        }
    }
    None
}

pub fn is_free<D: Doctrine>(d: &D, a: &Obj<D>, alpha: &D::Elem) -> bool {
    free_failure(d, a, alpha).is_none()
}

/// The Rule of Choice, as stated and as splitting of every top; the two
/// verdicts are recorded separately and compared.
pub fn has_rc<D: Doctrine>(d: &D) -> Report {
    let c = d.base();
    let mut r = Report::new("rule_of_choice");
    let mut def_ok = true;
    let objs = c.objects();
    for a in objs.clone() {
        let top = d.top(&a);
        for b in objs.clone() {
            let Some(ab) = listed_product(d, &objs, &a, &b) else { continue };
            for beta in d.classes(&ab) {
                let Some(e) = d.exists(&a, &b, &beta) else { continue };
                if !d.leq(&a, &top, &e) {
                    continue;
                }
                let h = search_section(d, &a, &b, &beta, |x| d.leq(&a, &top, x));
                def_ok &= h.is_some();
                r.check("rc.definition", h.is_some(), || {
                    json!({"A": c.obj_label(&a), "B": c.obj_label(&b), "beta": d.elem_label(&ab, &beta)})
                });
            }
        }
    }
    let mut tops_ok = true;
    for a in c.objects() {
        let s = is_splitting(d, &a, &d.top(&a), None);
        tops_ok &= s.verdict;
        r.check("rc.tops", s.verdict, || {
            let (b, beta) = s.counterexample.clone().unwrap();
            let ab = c.prod_obj(&a, &b).unwrap();
            json!({"A": c.obj_label(&a), "B": c.obj_label(&b), "beta": d.elem_label(&ab, &beta)})
        });
    }
    r.check("rc.agree", def_ok == tops_ok, || json!({"definition": def_ok, "tops": tops_ok}));
    r
}

/// Every element is `∃_{π_A}(β)` for some accepted `β` over some `A×B`;
/// the first uncovered element otherwise.
pub fn uncovered<D: Doctrine>(d: &D, member: &dyn Fn(&Obj<D>, &D::Elem) -> bool) -> Option<(Obj<D>, D::Elem)> {
    let c = d.base();
    let objs = c.objects();
    for a in objs.clone() {
        let mut images: Vec<D::Elem> = Vec::new();
        for b in objs.clone() {
            let Some(ab) = listed_product(d, &objs, &a, &b) else { continue };
            for beta in d.classes(&ab) {
                if member(&ab, &beta) {
                    if let Some(e) = d.exists(&a, &b, &beta) {
                        images.push(e);
                    }
                }
            }
        }
        for x in d.classes(&a) {
            if d.position_in(&a, &images, &x).is_none() {
                return Some((a, x));
            }
        }
    }
    None
}

/// Whether the accepted elements form a pure existential cover: each is
/// splitting and every element is covered by one.
pub fn is_cover<D: Doctrine>(d: &D, member: &dyn Fn(&Obj<D>, &D::Elem) -> bool) -> Report {
    cover_report(d, member, false)
}

/// The relative form: splitting only against accepted `β`.
pub fn is_relative_cover<D: Doctrine>(d: &D, member: &dyn Fn(&Obj<D>, &D::Elem) -> bool) -> Report {
    cover_report(d, member, true)
}

fn cover_report<D: Doctrine>(d: &D, member: &dyn Fn(&Obj<D>, &D::Elem) -> bool, relative: bool) -> Report {
    let c = d.base();
    let mut r = Report::new(if relative { "relative_cover" } else { "cover" });
    for a in c.objects() {
        for x in d.classes(&a) {
            if !member(&a, &x) {
                continue;
            }
            let s = is_splitting(d, &a, &x, relative.then_some(member));
            r.check("members.splitting", s.verdict, || json!({"object": c.obj_label(&a), "element": d.elem_label(&a, &x)}));
        }
    }
    match uncovered(d, member) {
        None => r.touch("covered"),
        Some((a, x)) => r.fail("covered", json!({"object": c.obj_label(&a), "element": d.elem_label(&a, &x)})),
    }
    r
}

/// Outcome of the cover search on a tabulated doctrine.
#[derive(Debug, Clone)]
pub struct CoverSearch {
    pub splitting: Vec<BTreeSet<usize>>,
    pub free: Vec<BTreeSet<usize>>,
    /// The free elements, when they form a cover.
    pub cover: Option<Selection>,
    /// For every element, a covering `(B, β)` with `β` free.
    pub assignment: Vec<Vec<Option<(usize, usize)>>>,
    pub report: Report,
}

/// The unique candidate for a cover is the set of free elements; it is
/// checked for closure, coverage and the relative criterion.
pub fn find_cover(t: &TabDoctrine) -> CoverSearch {
    let c = &t.base;
    let n = c.num_objects();
    let mut report = Report::new("find_cover");
    let splitting: Vec<BTreeSet<usize>> =
        (0..n).map(|a| (0..t.fibers[a].len()).filter(|x| is_splitting(t, &a, x, None).verdict).collect()).collect();
    let free: Vec<BTreeSet<usize>> = (0..n)
        .map(|a| {
            (0..t.fibers[a].len())
                .filter(|&x| c.objects().iter().all(|&y| c.hom(y, a).iter().all(|f| t.reindex[*f][x].is_some_and(|z| splitting[y].contains(&z)))))
                .collect()
        })
        .collect();
    for a in 0..n {
        let fa = &free[a];
        report.check("free.top", fa.contains(&t.top(&a)), || json!({"object": c.object_name(a)}));
        for &x in fa {
            for &y in fa {
                let Some(m) = t.meet(&a, &x, &y) else {
                    report.skip("free.meets");
                    continue;
                };
                report.check("free.meets", fa.contains(&m), || {
                    json!({"object": c.object_name(a), "x": t.fibers[a].names[x], "y": t.fibers[a].names[y]})
                });
            }
        }
    }
    let mut assignment = Vec::with_capacity(n);
    for a in 0..n {
        let mut col = vec![None; t.fibers[a].len()];
        for b in 0..n {
            let Some(ab) = c.chosen_product(a, b).map(|p| p.obj) else { continue };
            for &beta in &free[ab] {
                if let Some(e) = t.exists(&a, &b, &beta) {
                    if col[e].is_none() {
                        col[e] = Some((b, beta));
                    }
                }
            }
        }
        for (x, v) in col.iter().enumerate() {
            report.check("enough_free", v.is_some(), || json!({"object": c.object_name(a), "element": t.fibers[a].names[x]}));
        }
        assignment.push(col);
    }
    let member = |a: &usize, x: &usize| free[*a].contains(x);
    let direct = is_cover(t, &member);
    let relative = is_relative_cover(t, &member);
    report.check("relative_agrees", direct.pass == relative.pass, || json!({"cover": direct.pass, "relative": relative.pass}));
    let ok = report.pass && direct.pass;
    report.absorb("cover", direct);
    let cover = ok.then(|| Selection { sets: free.clone() });
    CoverSearch { splitting, free, cover, assignment, report }
}

/// Hilbert ε-operators: for every `α ∈ P(A×B)` some `ε: A → B` with
/// `∃_{π1}(α) = P_{⟨id,ε⟩}(α)`. Failures carry `(A, B, α)`.
pub fn epsilon_operators<D: Doctrine>(d: &D) -> Report {
    let c = d.base();
    let mut r = Report::new("epsilon");
    let objs = c.objects();
    for a in objs.clone() {
        for b in objs.clone() {
            let Some(ab) = listed_product(d, &objs, &a, &b) else { continue };
            for alpha in d.classes(&ab) {
                let Some(e) = d.exists(&a, &b, &alpha) else {
                    r.skip("epsilon.exists");
                    continue;
                };
                let h = search_section(d, &a, &b, &alpha, |x| d.equiv(&a, &e, x));
                r.check("epsilon.exists", h.is_some(), || {
                    json!({"A": c.obj_label(&a), "B": c.obj_label(&b), "alpha": d.elem_label(&ab, &alpha)})
                });
            }
        }
    }
    r
}

/// The ε-operator chosen for `α ∈ P(A×B)`: the first arrow in hom order.
pub fn epsilon<D: Doctrine>(d: &D, a: &Obj<D>, b: &Obj<D>, alpha: &D::Elem) -> Option<Mor<D>> {
    let e = d.exists(a, b, alpha)?;
    search_section(d, a, b, alpha, |x| d.equiv(a, &e, x))
}
