//! Exhaustive limit search in finite categories.

use super::{Category, FinCat, Product};

/// Commuting squares over the cospan `f, g`.
fn cones<C: Category>(c: &C, f: &C::Mor, g: &C::Mor) -> Vec<(C::Obj, C::Mor, C::Mor)> {
    let (x, y) = (c.dom(f), c.dom(g));
    let mut out = Vec::new();
    for w in c.objects() {
        let qs = c.homs(&w, &y);
        for p in c.homs(&w, &x) {
            let fp = c.compose(f, &p);
            for q in &qs {
                if fp == c.compose(g, q) {
                    out.push((w.clone(), p.clone(), q.clone()));
                }
            }
        }
    }
    out
}

fn mediators<C: Category>(c: &C, cone: &(C::Obj, C::Mor, C::Mor), target: &(C::Obj, C::Mor, C::Mor)) -> usize {
    c.homs(&cone.0, &target.0)
        .iter()
        .filter(|u| c.compose(&target.1, u) == cone.1 && c.compose(&target.2, u) == cone.2)
        .count()
}

/// First cone through which every cone factors (not necessarily uniquely).
pub fn find_weak_pullback<C: Category>(c: &C, f: &C::Mor, g: &C::Mor) -> Option<(C::Obj, C::Mor, C::Mor)> {
    let all = cones(c, f, g);
    all.iter().find(|t| all.iter().all(|k| mediators(c, k, t) >= 1)).cloned()
}

/// First cone through which every cone factors uniquely.
pub fn find_pullback<C: Category>(c: &C, f: &C::Mor, g: &C::Mor) -> Option<(C::Obj, C::Mor, C::Mor)> {
    let all = cones(c, f, g);
    all.iter().find(|t| all.iter().all(|k| mediators(c, k, t) == 1)).cloned()
}

/// Whether `(obj, p, q)` is a pullback of `f, g`.
pub fn is_pullback<C: Category>(c: &C, f: &C::Mor, g: &C::Mor, t: &(C::Obj, C::Mor, C::Mor)) -> bool {
    if c.compose(f, &t.1) != c.compose(g, &t.2) {
        return false;
    }
    cones(c, f, g).iter().all(|k| mediators(c, k, t) == 1)
}

/// Whether `(obj, p1, p2)` is a product of `a` and `b`.
pub fn is_product<C: Category>(c: &C, a: &C::Obj, b: &C::Obj, obj: &C::Obj, p1: &C::Mor, p2: &C::Mor) -> bool {
    if c.dom(p1) != *obj || c.dom(p2) != *obj || c.cod(p1) != *a || c.cod(p2) != *b {
        return false;
    }
    c.objects().iter().all(|x| {
        let cands = c.homs(x, obj);
        c.homs(x, a).iter().all(|f| {
            c.homs(x, b).iter().all(|g| cands.iter().filter(|h| c.compose(p1, h) == *f && c.compose(p2, h) == *g).count() == 1)
        })
    })
}

pub fn is_terminal<C: Category>(c: &C, t: &C::Obj) -> bool {
    c.objects().iter().all(|a| c.homs(a, t).len() == 1)
}

pub fn find_terminal<C: Category>(c: &C) -> Option<C::Obj> {
    let objs = c.objects();
    objs.iter().find(|t| objs.iter().all(|a| c.homs(a, t).len() == 1)).cloned()
}

pub fn find_product<C: Category>(c: &C, a: &C::Obj, b: &C::Obj) -> Option<Product<C::Obj, C::Mor>> {
    let objs = c.objects();
    for p in &objs {
        for p1 in c.homs(p, a) {
            for p2 in c.homs(p, b) {
                let ok = objs.iter().all(|x| {
                    let cands = c.homs(x, p);
                    c.homs(x, a).iter().all(|f| {
                        c.homs(x, b).iter().all(|g| {
                            cands.iter().filter(|h| c.compose(&p1, h) == *f && c.compose(&p2, h) == *g).count() == 1
                        })
                    })
                });
                if ok {
                    return Some(Product { obj: p.clone(), p1, p2 });
                }
            }
        }
    }
    None
}

pub fn is_mono<C: Category>(c: &C, f: &C::Mor) -> bool {
    let a = c.dom(f);
    c.objects().iter().all(|w| {
        let hs = c.homs(w, &a);
        let imgs: Vec<C::Mor> = hs.iter().map(|h| c.compose(f, h)).collect();
        let mut seen = std::collections::HashSet::new();
        imgs.into_iter().all(|x| seen.insert(x))
    })
}

pub fn is_epi<C: Category>(c: &C, f: &C::Mor) -> bool {
    let b = c.cod(f);
    c.objects().iter().all(|w| {
        let hs = c.homs(&b, w);
        let imgs: Vec<C::Mor> = hs.iter().map(|h| c.compose(h, f)).collect();
        let mut seen = std::collections::HashSet::new();
        imgs.into_iter().all(|x| seen.insert(x))
    })
}

/// Some two-sided inverse of `f`.
pub fn inverse<C: Category>(c: &C, f: &C::Mor) -> Option<C::Mor> {
    let (a, b) = (c.dom(f), c.cod(f));
    c.homs(&b, &a).into_iter().find(|g| c.compose(g, f) == c.id(&a) && c.compose(f, g) == c.id(&b))
}

/// An isomorphism `a → b`, if one exists.
pub fn find_iso<C: Category>(c: &C, a: &C::Obj, b: &C::Obj) -> Option<C::Mor> {
    c.homs(a, b).into_iter().find(|f| inverse(c, f).is_some())
}

/// Whether `e` coequalizes `f, g` universally.
pub fn is_coequalizer<C: Category>(c: &C, e: &C::Mor, f: &C::Mor, g: &C::Mor) -> bool {
    if c.compose(e, f) != c.compose(e, g) {
        return false;
    }
    let (x, y) = (c.dom(e), c.cod(e));
    c.objects().iter().all(|z| {
        let us = c.homs(&y, z);
        c.homs(&x, z).iter().filter(|h| c.compose(h, f) == c.compose(h, g)).all(|h| {
            us.iter().filter(|u| c.compose(u, e) == *h).count() == 1
        })
    })
}

/// Regular-epi detection: `e` is the coequalizer of its kernel pair.
pub fn is_regular_epi_by_kernel_pair<C: Category>(c: &C, e: &C::Mor) -> Option<bool> {
    let (_, k1, k2) = find_pullback(c, e, e)?;
    Some(is_coequalizer(c, e, &k1, &k2))
}

/// Copies `c` and installs a terminal object and binary products found by
/// search, when they exist.
pub fn with_searched_limits(c: &FinCat) -> FinCat {
    let mut out = c.clone();
    out.clear_products();
    out.set_terminal(find_terminal(c));
    for a in 0..c.num_objects() {
        for b in 0..c.num_objects() {
            if let Some(p) = find_product(c, &a, &b) {
                out.set_product(a, b, p);
            }
        }
    }
    out
}

/// Whether two finite categories are equivalent, by searching for an
/// isomorphism between skeleta.
pub fn equivalent_categories(c: &FinCat, d: &FinCat) -> bool {
    let sc = skeleton(c);
    let sd = skeleton(d);
    if sc.len() != sd.len() {
        return false;
    }
    let n = sc.len();
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];
    iso_search(c, &sc, d, &sd, 0, &mut assign, &mut used)
}

fn skeleton(c: &FinCat) -> Vec<usize> {
    let mut reps: Vec<usize> = Vec::new();
    for a in 0..c.num_objects() {
        if !reps.iter().any(|r| find_iso(c, r, &a).is_some()) {
            reps.push(a);
        }
    }
    reps
}

fn iso_search(c: &FinCat, sc: &[usize], d: &FinCat, sd: &[usize], i: usize, assign: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
    let n = sc.len();
    if i == n {
        return morphism_bijection_exists(c, sc, d, sd, assign);
    }
    for j in 0..n {
        if used[j] {
            continue;
        }
        let ok = (0..=i).all(|k| {
            let kk = if k == i { j } else { assign[k] };
            c.hom(sc[i], sc[k]).len() == d.hom(sd[j], sd[kk]).len() && c.hom(sc[k], sc[i]).len() == d.hom(sd[kk], sd[j]).len()
        });
        if !ok {
            continue;
        }
        assign[i] = j;
        used[j] = true;
        if iso_search(c, sc, d, sd, i + 1, assign, used) {
            return true;
        }
        used[j] = false;
    }
    assign[i] = usize::MAX;
    false
}

/// Backtracking search for a composition-preserving bijection on morphisms
/// over a fixed object bijection.
fn morphism_bijection_exists(c: &FinCat, sc: &[usize], d: &FinCat, sd: &[usize], assign: &[usize]) -> bool {
    let n = sc.len();
    let mut slots = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for &f in c.hom(sc[i], sc[j]) {
                slots.push((f, i, j));
            }
        }
    }
    let mut map = std::collections::HashMap::new();
    fn go(
        c: &FinCat, d: &FinCat, sd: &[usize], assign: &[usize], slots: &[(usize, usize, usize)], k: usize,
        map: &mut std::collections::HashMap<usize, usize>,
    ) -> bool {
        if k == slots.len() {
            return true;
        }
        let (f, i, j) = slots[k];
        let taken: std::collections::HashSet<usize> = map.values().copied().collect();
        for &g in d.hom(sd[assign[i]], sd[assign[j]]) {
            if taken.contains(&g) {
                continue;
            }
            map.insert(f, g);
            let consistent = map.iter().all(|(&x, &gx)| {
                map.iter().all(|(&y, &gy)| match c.try_compose(y, x) {
                    Some(yx) => match map.get(&yx) {
                        Some(&gyx) => d.try_compose(gy, gx) == Some(gyx),
                        None => true,
                    },
                    None => true,
                })
            });
            let id_ok = c.morphism(f).dom != c.morphism(f).cod || f != c.id(&c.morphism(f).dom) || g == d.id(&d.morphism(g).dom);
            if consistent && id_ok && go(c, d, sd, assign, slots, k + 1, map) {
                return true;
            }
            map.remove(&f);
        }
        false
    }
    go(c, d, sd, assign, &slots, 0, &mut map)
}
