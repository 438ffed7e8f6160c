//! Free constructions: the pure existential completion, the comprehension
//! completion, the extensional reflection and the category of predicates.

mod comprehension;
mod excomp;
mod extensional;
mod pred;

pub use comprehension::{check_m_variational, check_variational_properties, comprehension, functional, Comprehension, Strength};
pub use excomp::{completion_comparison, existential_completion, ExCompletion, ExistentialCompletion, TabMorphism};
pub use extensional::{check_extensional, Extensional, ExtensionalDoctrine};
pub use pred::{PMor, PObj, PredCat, PredDoctrine, PredMor};

use crate::category::{limits, Category, WeakPullbacks};
use crate::doctrine::{tabulate, tabulate_over, Doctrine, Level, TabDoctrine, Tabulation};
use crate::error::{Error, Result};
use crate::report::Report;
use serde_json::json;

/// `(𝒢_P, P_c)`, tabulated.
pub fn comprehension_completion(t: &TabDoctrine) -> Tabulation<PredDoctrine<&TabDoctrine>> {
    let d = PredDoctrine::new(PredCat::points(t));
    let objs = d.base().objects();
    tabulate_over(&d, objs)
}

/// `(𝒳_P, P_x)`, tabulated; fails if identified arrows reindex differently.
pub fn extensional_reflection(t: &TabDoctrine) -> Result<Tabulation<ExtensionalDoctrine<&TabDoctrine>>> {
    if t.delta.is_none() {
        return Err(Error::MissingStructure("the extensional reflection needs equality".into()));
    }
    check_extensional(t)?;
    let d = ExtensionalDoctrine::new(t);
    let objs = d.base().objects();
    Ok(tabulate_over(&d, objs))
}

/// The category of predicates with its doctrine `P_cx`, and the report of
/// the checks run on it.
pub struct Predicates<'a> {
    pub tab: Tabulation<PredDoctrine<&'a TabDoctrine>>,
    pub report: Report,
}

impl Predicates<'_> {
    pub fn cat(&self) -> &crate::category::FinCat {
        &self.tab.doctrine.base
    }
    pub fn pcx(&self) -> &TabDoctrine {
        &self.tab.doctrine
    }
    /// Index of the object `(A, α)`.
    pub fn object(&self, a: usize, alpha: usize) -> Option<usize> {
        self.tab.mat.obj(&(a, alpha))
    }

    /// The arrow `i → j` represented by the base map `f`.
    pub fn arrow_index(&self, p: &TabDoctrine, i: usize, j: usize, f: usize) -> Option<usize> {
        let (a, alpha) = self.tab.mat.objs[i];
        let pc = PredCat::predicates(p);
        self.cat().hom(i, j).iter().copied().find(|&m| pc.similar(&(a, alpha), &self.tab.mat.mors[m].f, &f))
    }
}

/// `Pred(P)` and `P_cx`. Explicit pullbacks are checked against the
/// universal property; when `P` is existential the doctrine `P_cx` is
/// validated and checked to be m-variational.
pub fn pred_category(t: &TabDoctrine) -> Result<Predicates<'_>> {
    if t.delta.is_none() {
        return Err(Error::MissingStructure("the category of predicates needs equality".into()));
    }
    let cat = PredCat::predicates(t);
    let d = PredDoctrine::new(cat);
    let objs = d.base().objects();
    let tab = tabulate_over(&d, objs);
    let mut report = Report::new("pred");
    let pc = d.base();
    let fc = &tab.doctrine.base;
    for f in &tab.mat.mors {
        for g in &tab.mat.mors {
            if f.dst != g.dst {
                continue;
            }
            let Some((o, p, q)) = pc.weak_pullback(f, g) else {
                report.fail("pullback.defined", json!({"f": pc.mor_label(f), "g": pc.mor_label(g)}));
                continue;
            };
            let idx = (tab.mat.obj(&o), tab.mat.mor(&p), tab.mat.mor(&q));
            let (Some(o), Some(p), Some(q)) = idx else {
                report.skip("pullback.ump");
                continue;
            };
            let (fi, gi) = (tab.mat.mor(f).unwrap(), tab.mat.mor(g).unwrap());
            report.check("pullback.ump", limits::is_pullback(fc, &fi, &gi, &(o, p, q)), || {
                json!({"f": pc.mor_label(f), "g": pc.mor_label(g)})
            });
        }
    }
    report.check("terminal", limits::find_terminal(fc).is_some(), || json!({}));
    if t.exists.is_some() {
        let v = crate::doctrine::validate_doctrine(&tab.doctrine, Level::Existential)?;
        report.absorb("pcx", v);
        report.absorb("pcx", check_m_variational(&tab.doctrine));
        report.absorb("pcx", check_variational_properties(&tab.doctrine));
    }
    Ok(Predicates { tab, report })
}

/// `Pred(P)` rebuilt as `𝒳` of `P_c`, for cross-checking the direct
/// construction.
pub fn pred_via_reflections(t: &TabDoctrine) -> Result<TabDoctrine> {
    let pc = comprehension_completion(t).doctrine;
    Ok(extensional_reflection(&pc)?.doctrine)
}

/// Tabulates a doctrine over a finite base, keeping the indices.
pub fn tabulated<D: Doctrine<Base = crate::category::FinCat>>(d: &D) -> TabDoctrine {
    tabulate(d).doctrine
}
