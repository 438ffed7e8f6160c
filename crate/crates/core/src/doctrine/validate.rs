use super::{Doctrine, DoctrineExt, Obj};
use crate::category::{Cartesian, CartesianExt, Category};
use crate::error::{Error, Result};
use crate::report::Report;
use serde_json::json;
use std::collections::{HashMap, HashSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    Primary,
    Elementary,
    Existential,
}

impl std::str::FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Level> {
        match s {
            "primary" => Ok(Level::Primary),
            "elementary" => Ok(Level::Elementary),
            "existential" => Ok(Level::Existential),
            other => Err(Error::MissingStructure(format!("unknown level `{other}`"))),
        }
    }
}

struct Ctx<'a, D: Doctrine> {
    d: &'a D,
    objs: Vec<Obj<D>>,
    inside: HashSet<Obj<D>>,
    fibers: HashMap<Obj<D>, Vec<D::Elem>>,
}

impl<'a, D: Doctrine> Ctx<'a, D> {
    fn fiber(&self, a: &Obj<D>) -> &[D::Elem] {
        &self.fibers[a]
    }
    fn prod(&self, a: &Obj<D>, b: &Obj<D>) -> Option<crate::category::Product<Obj<D>, crate::doctrine::Mor<D>>> {
        let p = self.d.base().product(a, b)?;
        self.inside.contains(&p.obj).then_some(p)
    }
    fn lab(&self, a: &Obj<D>, x: &D::Elem) -> String {
        format!("{}:{}", self.d.base().obj_label(a), self.d.elem_label(a, x))
    }
}

/// Exhaustive check of the doctrine laws required by `level` over the
/// listed objects. Instances touching an undefined cell or an object
/// outside the listing are counted as skipped.
pub fn validate_doctrine<D: Doctrine>(d: &D, level: Level) -> Result<Report> {
    if level >= Level::Elementary && level != Level::Existential && !d.is_elementary() {
        return Err(Error::MissingStructure("elementary level needs equality predicates".into()));
    }
    if level == Level::Existential && !d.is_existential() {
        return Err(Error::MissingStructure("existential level needs quantifier tables".into()));
    }
    let objs = d.base().objects();
    let inside: HashSet<Obj<D>> = objs.iter().cloned().collect();
    let fibers = objs.iter().map(|a| (a.clone(), d.fiber(a))).collect();
    let cx = Ctx { d, objs, inside, fibers };
    let mut r = Report::new(match level {
        Level::Primary => "doctrine.primary",
        Level::Elementary => "doctrine.elementary",
        Level::Existential => "doctrine.existential",
    });
    for a in &cx.objs {
        if !d.fiber_complete(a) {
            r.note(format!("fiber over {} is a bounded listing", d.base().obj_label(a)));
        }
    }
    primary_laws(&cx, &mut r);
    if d.is_elementary() && level >= Level::Elementary {
        elementary_laws(&cx, &mut r);
    }
    if level == Level::Existential {
        existential_laws(&cx, &mut r);
    }
    if r.skipped() > 0 {
        r.note(format!("{} instances skipped on undefined cells", r.skipped()));
    }
    Ok(r)
}

fn primary_laws<D: Doctrine>(cx: &Ctx<'_, D>, r: &mut Report) {
    let d = cx.d;
    let base = d.base();
    for a in &cx.objs {
        let fib = cx.fiber(a);
        let top = d.top(a);
        for x in fib {
            r.check("fiber.reflexive", d.leq(a, x, x), || json!({"x": cx.lab(a, x)}));
            r.check("fiber.top", d.leq(a, x, &top), || json!({"x": cx.lab(a, x)}));
        }
        for x in fib {
            for y in fib {
                if d.canonical() && x != y {
                    r.check("fiber.antisymmetric", !(d.leq(a, x, y) && d.leq(a, y, x)), || {
                        json!({"x": cx.lab(a, x), "y": cx.lab(a, y)})
                    });
                }
                if d.leq(a, x, y) {
                    for z in fib {
                        if d.leq(a, y, z) {
                            r.check("fiber.transitive", d.leq(a, x, z), || {
                                json!({"x": cx.lab(a, x), "y": cx.lab(a, y), "z": cx.lab(a, z)})
                            });
                        }
                    }
                }
                match d.meet(a, x, y) {
                    None => r.skip("fiber.meet"),
                    Some(m) => {
                        let ok = d.leq(a, &m, x)
                            && d.leq(a, &m, y)
                            && fib.iter().all(|z| !(d.leq(a, z, x) && d.leq(a, z, y)) || d.leq(a, z, &m));
                        r.check("fiber.meet", ok, || json!({"x": cx.lab(a, x), "y": cx.lab(a, y), "meet": cx.lab(a, &m)}));
                    }
                }
            }
        }
    }
    for a in &cx.objs {
        let fa = cx.fiber(a);
        let id = base.id(a);
        for x in fa {
            match d.reindex(&id, x) {
                None => r.skip("reindex.identity"),
                Some(y) => {
                    r.check("reindex.identity", d.equiv(a, &y, x), || json!({"x": cx.lab(a, x)}));
                }
            }
        }
        for b in &cx.objs {
            for f in base.homs(b, a) {
                let fl = base.mor_label(&f);
                match d.reindex(&f, &d.top(a)) {
                    None => r.skip("reindex.top"),
                    Some(t) => {
                        r.check("reindex.top", d.equiv(b, &t, &d.top(b)), || json!({"f": fl}));
                    }
                }
                let img: Vec<Option<D::Elem>> = fa.iter().map(|x| d.reindex(&f, x)).collect();
                for (i, x) in fa.iter().enumerate() {
                    for (j, y) in fa.iter().enumerate() {
                        let (Some(fx), Some(fy)) = (&img[i], &img[j]) else {
                            r.skip("reindex.monotone");
                            continue;
                        };
                        if d.leq(a, x, y) {
                            r.check("reindex.monotone", d.leq(b, fx, fy), || json!({"f": fl, "x": cx.lab(a, x), "y": cx.lab(a, y)}));
                        }
                        if j < i {
                            continue;
                        }
                        let lhs = d.meet(a, x, y).and_then(|m| d.reindex(&f, &m));
                        let rhs = d.meet(b, fx, fy);
                        match (lhs, rhs) {
                            (Some(l), Some(rr)) => {
                                r.check("reindex.meet", d.equiv(b, &l, &rr), || {
                                    json!({"f": fl, "x": cx.lab(a, x), "y": cx.lab(a, y)})
                                });
                            }
                            _ => r.skip("reindex.meet"),
                        }
                    }
                }
                for c in &cx.objs {
                    for g in base.homs(c, b) {
                        let fg = base.compose(&f, &g);
                        for (i, x) in fa.iter().enumerate() {
                            let lhs = d.reindex(&fg, x);
                            let rhs = img[i].as_ref().and_then(|y| d.reindex(&g, y));
                            match (lhs, rhs) {
                                (Some(l), Some(rr)) => {
                                    r.check("reindex.composition", d.equiv(c, &l, &rr), || {
                                        json!({"f": fl, "g": base.mor_label(&g), "x": cx.lab(a, x)})
                                    });
                                }
                                _ => r.skip("reindex.composition"),
                            }
                        }
                    }
                }
            }
        }
    }
}

fn elementary_laws<D: Doctrine>(cx: &Ctx<'_, D>, r: &mut Report) {
    let d = cx.d;
    let base = d.base();
    for a in &cx.objs {
        let Some(aa) = cx.prod(a, a) else { continue };
        let (Some(delta), Some(diag)) = (d.delta(a), base.diag(a)) else {
            r.skip("elementary.diagonal");
            continue;
        };
        for alpha in cx.fiber(a) {
            let lhs = d.reindex(&aa.p1, alpha).and_then(|x| d.meet(&aa.obj, &x, &delta));
            for gamma in cx.fiber(&aa.obj) {
                let (Some(l), Some(back)) = (&lhs, d.reindex(&diag, gamma)) else {
                    r.skip("elementary.diagonal");
                    continue;
                };
                let left = d.leq(&aa.obj, l, gamma);
                let right = d.leq(a, alpha, &back);
                r.check("elementary.diagonal", left == right, || {
                    json!({"object": base.obj_label(a), "alpha": cx.lab(a, alpha), "gamma": cx.lab(&aa.obj, gamma),
                           "exists_diag_below": left, "below_reindexed": right})
                });
            }
        }
    }
    for x in &cx.objs {
        for a in &cx.objs {
            let (Some(xa), Some(aa)) = (cx.prod(x, a), cx.prod(a, a)) else { continue };
            let Some(xaa) = cx.prod(&xa.obj, a) else { continue };
            let Some(delta) = d.delta(a) else {
                r.skip("elementary.parametrized");
                continue;
            };
            let _ = aa;
            let e = base.pair(&base.id(&xa.obj), &xa.p2).expect("pairing into a listed product");
            let p23 = base.pair(&base.compose(&xa.p2, &xaa.p1), &xaa.p2).expect("pairing into A×A");
            let dd = d.reindex(&p23, &delta);
            for alpha in cx.fiber(&xa.obj) {
                let lhs = dd.as_ref().and_then(|dd| d.reindex(&xaa.p1, alpha).and_then(|p| d.meet(&xaa.obj, &p, dd)));
                for gamma in cx.fiber(&xaa.obj) {
                    let (Some(l), Some(back)) = (&lhs, d.reindex(&e, gamma)) else {
                        r.skip("elementary.parametrized");
                        continue;
                    };
                    let left = d.leq(&xaa.obj, l, gamma);
                    let right = d.leq(&xa.obj, alpha, &back);
                    r.check("elementary.parametrized", left == right, || {
                        json!({"x": base.obj_label(x), "a": base.obj_label(a), "alpha": cx.lab(&xa.obj, alpha),
                               "gamma": cx.lab(&xaa.obj, gamma)})
                    });
                }
            }
        }
    }
}

fn existential_laws<D: Doctrine>(cx: &Ctx<'_, D>, r: &mut Report) {
    let d = cx.d;
    let base = d.base();
    for a in &cx.objs {
        for b in &cx.objs {
            let Some(ab) = cx.prod(a, b) else { continue };
            let fab = cx.fiber(&ab.obj);
            let ex: Vec<Option<D::Elem>> = fab.iter().map(|x| d.exists(a, b, x)).collect();
            for beta in cx.fiber(a) {
                let pb = d.reindex(&ab.p1, beta);
                for (i, alpha) in fab.iter().enumerate() {
                    let (Some(e), Some(p)) = (&ex[i], &pb) else {
                        r.skip("existential.adjunction");
                        continue;
                    };
                    let left = d.leq(a, e, beta);
                    let right = d.leq(&ab.obj, alpha, p);
                    r.check("existential.adjunction", left == right, || {
                        json!({"a": base.obj_label(a), "b": base.obj_label(b), "alpha": cx.lab(&ab.obj, alpha), "beta": cx.lab(a, beta)})
                    });
                    let lhs = d.meet(&ab.obj, p, alpha).and_then(|m| d.exists(a, b, &m));
                    let rhs = d.meet(a, beta, e);
                    match (lhs, rhs) {
                        (Some(l), Some(rr)) => {
                            r.check("existential.frobenius", d.equiv(a, &l, &rr), || {
                                json!({"a": base.obj_label(a), "b": base.obj_label(b), "alpha": cx.lab(a, beta), "beta": cx.lab(&ab.obj, alpha)})
                            });
                        }
                        _ => r.skip("existential.frobenius"),
                    }
                }
            }
            for x in &cx.objs {
                let Some(xb) = cx.prod(x, b) else { continue };
                for f in base.homs(x, a) {
                    let Some(fxid) = base.times(&f, &base.id(b)) else { continue };
                    for (i, beta) in fab.iter().enumerate() {
                        let lhs = d.reindex(&fxid, beta).and_then(|y| d.exists(x, b, &y));
                        let rhs = ex[i].as_ref().and_then(|e| d.reindex(&f, e));
                        match (lhs, rhs) {
                            (Some(l), Some(rr)) => {
                                r.check("existential.beck_chevalley", d.equiv(x, &l, &rr), || {
                                    json!({"f": base.mor_label(&f), "b": base.obj_label(b), "beta": cx.lab(&ab.obj, beta)})
                                });
                            }
                            _ => r.skip("existential.beck_chevalley"),
                        }
                    }
                }
                let _ = xb;
            }
        }
    }
}
