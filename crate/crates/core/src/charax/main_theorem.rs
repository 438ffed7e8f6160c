use super::{is_cover, is_relative_cover};
use crate::completions::pred_category;
use crate::error::Result;
use crate::regexcat::{check_equivalence, completion_functor, ex_completion, psi, reg_completion, Embedded};
use crate::doctrine::TabDoctrine;
use crate::report::Report;
use serde_json::json;
use std::collections::BTreeSet;

/// Both sides of the characterization for one pair `(P, P′)`.
#[derive(Debug, Clone)]
pub struct MainTheorem {
    /// Whether `P′` is a pure existential cover of `P`.
    pub cover: bool,
    pub cover_report: Report,
    /// Whether `G^reg` is an equivalence.
    pub reg: Report,
    /// Whether `G^ex` is an equivalence.
    pub ex: Report,
    pub report: Report,
}

/// Decides the cover condition directly and the two equivalences through
/// the built completions, then records whether all three verdicts agree.
pub fn verify_main_theorem(p: &TabDoctrine, emb: &Embedded, budget: usize) -> Result<MainTheorem> {
    let mut report = Report::new("main_theorem");
    report.absorb("embedding", emb.check(p)?);
    let image: Vec<BTreeSet<usize>> = emb.embed.iter().map(|c| c.iter().copied().collect()).collect();
    let member = |a: &usize, x: &usize| image[*a].contains(x);
    let cover_report = is_cover(p, &member);
    let relative = is_relative_cover(p, &member);
    let cover = cover_report.pass;
    report.check("cover.relative_agrees", cover == relative.pass, || json!({"cover": cover, "relative": relative.pass}));

    let pred_sub = pred_category(&emb.sub)?;
    let ps = psi(&pred_sub)?;
    let reg_psi = reg_completion(&ps.doctrine, None, budget)?;
    let reg_p = reg_completion(p, None, budget)?;
    let g_reg = completion_functor(p, emb, &pred_sub, &ps, &reg_psi, &reg_p)?;
    let reg = check_equivalence(&g_reg);
    let ex_psi = ex_completion(&ps.doctrine, None, budget)?;
    let ex_p = ex_completion(p, None, budget)?;
    let g_ex = completion_functor(p, emb, &pred_sub, &ps, &ex_psi, &ex_p)?;
    let ex = check_equivalence(&g_ex);

    report.check("biconditional.reg", cover == reg.pass, || json!({"cover": cover, "reg_equivalence": reg.pass}));
    report.check("biconditional.ex", cover == ex.pass, || json!({"cover": cover, "ex_equivalence": ex.pass}));
    Ok(MainTheorem { cover, cover_report, reg, ex, report })
}
