use crate::category::{limits, Cartesian, CartesianExt, Category};
use crate::doctrine::{Doctrine, DoctrineExt, TabDoctrine};
use crate::report::Report;
use serde::Serialize;
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strength {
    Strong,
    Weak,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comprehension {
    pub mor: Option<usize>,
    pub strength: Strength,
}

/// Number of ways each arrow that makes `α` true factors through `k`;
/// `None` if `k` itself does not make `α` true.
fn factor_counts(t: &TabDoctrine, a: usize, alpha: usize, k: usize) -> Option<Vec<usize>> {
    let c = &t.base;
    let x = c.dom(&k);
    if t.reindex(&k, &alpha)? != t.top(&x) {
        return None;
    }
    let mut counts = Vec::new();
    for z in 0..c.num_objects() {
        for &f in c.hom(z, a) {
            if t.reindex(&f, &alpha) != Some(t.top(&z)) {
                continue;
            }
            counts.push(c.hom(z, x).iter().filter(|&&g| c.compose(&k, &g) == f).count());
        }
    }
    Some(counts)
}

/// Searches for a comprehension of `α ∈ P(A)`: candidates are visited by
/// domain index, then morphism index; a strong one is preferred.
pub fn comprehension(t: &TabDoctrine, a: usize, alpha: usize) -> Comprehension {
    let c = &t.base;
    let mut weak = None;
    for x in 0..c.num_objects() {
        for &k in c.hom(x, a) {
            let Some(counts) = factor_counts(t, a, alpha, k) else { continue };
            if counts.iter().all(|&n| n == 1) {
                return Comprehension { mor: Some(k), strength: Strength::Strong };
            }
            if weak.is_none() && counts.iter().all(|&n| n >= 1) {
                weak = Some(k);
            }
        }
    }
    match weak {
        Some(k) => Comprehension { mor: Some(k), strength: Strength::Weak },
        None => Comprehension { mor: None, strength: Strength::None },
    }
}

/// Full comprehensions and comprehensive diagonals.
pub fn check_m_variational(t: &TabDoctrine) -> Report {
    let c = &t.base;
    let mut r = Report::new("m_variational");
    let n = c.num_objects();
    let comps: Vec<Vec<Comprehension>> = (0..n).map(|a| (0..t.fibers[a].len()).map(|x| comprehension(t, a, x)).collect()).collect();
    for a in 0..n {
        for (x, cx) in comps[a].iter().enumerate() {
            r.check("comprehension.exists", cx.strength == Strength::Strong, || {
                json!({"object": c.object_name(a), "element": t.fibers[a].names[x]})
            });
        }
        for (x, cx) in comps[a].iter().enumerate() {
            for (y, cy) in comps[a].iter().enumerate() {
                let (Some(kx), Some(ky)) = (cx.mor, cy.mor) else { continue };
                let factors = c.hom(c.dom(&kx), c.dom(&ky)).iter().any(|&g| c.compose(&ky, &g) == kx);
                r.check("comprehension.full", factors == t.leq(&a, &x, &y), || {
                    json!({"object": c.object_name(a), "alpha": t.fibers[a].names[x], "beta": t.fibers[a].names[y]})
                });
            }
        }
        let Some(p) = c.product(&a, &a) else { continue };
        let (Some(d), Some(diag)) = (t.delta(&a), c.diag(&a)) else { continue };
        let ok = factor_counts(t, p.obj, d, diag).is_some_and(|v| v.iter().all(|&k| k == 1));
        r.check("diagonal.comprehensive", ok, || json!({"object": c.object_name(a)}));
    }
    r
}

/// The properties enjoyed by a pure existential m-variational doctrine:
/// finite limits in the base, stability of left adjoints, stable monic
/// comprehensions, the equality test for monos and the functionality test.
pub fn check_variational_properties(t: &TabDoctrine) -> Report {
    let c = &t.base;
    let n = c.num_objects();
    let mut r = Report::new("variational_properties");
    r.check("limits.terminal", limits::find_terminal(c).is_some(), || json!({}));
    let mut pullbacks = Vec::new();
    for f in 0..c.num_morphisms() {
        for g in 0..c.num_morphisms() {
            if c.cod(&f) != c.cod(&g) {
                continue;
            }
            let pb = limits::find_pullback(c, &f, &g);
            r.check("limits.pullback", pb.is_some(), || json!({"f": c.mor_label(&f), "g": c.mor_label(&g)}));
            if let Some(pb) = pb {
                pullbacks.push((f, g, pb));
            }
        }
    }
    // Beck-Chevalley for ∃_f along every pullback square
    for (f, g, (_, p, q)) in &pullbacks {
        for x in 0..t.fibers[c.dom(f)].len() {
            let lhs = t.reindex(p, &x).and_then(|y| t.exists_along(q, &y));
            let rhs = t.exists_along(f, &x).and_then(|y| t.reindex(g, &y));
            match (lhs, rhs) {
                (Some(l), Some(rr)) => {
                    r.check("exists_along.beck_chevalley", l == rr, || {
                        json!({"f": c.mor_label(f), "g": c.mor_label(g), "x": t.fibers[c.dom(f)].names[x]})
                    });
                }
                _ => r.skip("exists_along.beck_chevalley"),
            }
        }
    }
    for a in 0..n {
        for alpha in 0..t.fibers[a].len() {
            let comp = comprehension(t, a, alpha);
            let Some(k) = comp.mor else {
                r.fail("comprehension.monic", json!({"object": c.object_name(a), "alpha": t.fibers[a].names[alpha], "reason": "no comprehension"}));
                continue;
            };
            r.check("comprehension.monic", limits::is_mono(c, &k), || json!({"object": c.object_name(a), "alpha": t.fibers[a].names[alpha]}));
            for (f, g, (_, _, q)) in &pullbacks {
                if *f != k {
                    continue;
                }
                let b = c.dom(g);
                let Some(pa) = t.reindex(g, &alpha) else { continue };
                let stable = factor_counts(t, b, pa, *q).is_some_and(|v| v.iter().all(|&m| m == 1));
                r.check("comprehension.stable", stable, || json!({"alpha": t.fibers[a].names[alpha], "along": c.mor_label(g)}));
            }
        }
    }
    for f in 0..c.num_morphisms() {
        let (a, b) = (c.dom(&f), c.cod(&f));
        let (Some(ff), Some(db), Some(da)) = (c.times(&f, &f), t.delta(&b), t.delta(&a)) else { continue };
        let eq = t.reindex(&ff, &db) == Some(da);
        r.check("mono_iff_equality", limits::is_mono(c, &f) == eq, || json!({"f": c.mor_label(&f)}));
    }
    for a in 0..n {
        for b in 0..n {
            let Some(ab) = c.product(&a, &b) else { continue };
            for phi in 0..t.fibers[ab.obj].len() {
                let Some(func) = functional(t, a, b, phi) else { continue };
                let Some(k) = comprehension(t, ab.obj, phi).mor else { continue };
                let mono = limits::is_mono(c, &c.compose(&ab.p1, &k));
                r.check("functional_iff_monic", func == mono, || {
                    json!({"a": c.object_name(a), "b": c.object_name(b), "phi": t.fibers[ab.obj].names[phi]})
                });
            }
        }
    }
    r
}

/// `P_{⟨π1,π2⟩}φ ∧ P_{⟨π1,π3⟩}φ ≤ P_{⟨π2,π3⟩}δ_B` over `(A×B)×B`.
pub fn functional<D: Doctrine>(d: &D, a: crate::doctrine::Obj<D>, b: crate::doctrine::Obj<D>, phi: D::Elem) -> Option<bool> {
    let c = d.base();
    let [p12, p23, p13] = c.triple_projections(&a, &b, &b)?;
    let abb = c.triple(&a, &b, &b)?;
    let l = d.meet(&abb, &d.reindex(&p12, &phi)?, &d.reindex(&p13, &phi)?)?;
    let r = d.reindex(&p23, &d.delta(&b)?)?;
    Some(d.leq(&abb, &l, &r))
}
