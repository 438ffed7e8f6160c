use super::{Doctrine, DoctrineExt, Mor, Obj, TabDoctrine};
use crate::category::{Cartesian, Category, FinCat, Materialized};
use crate::order::{poset_reflection, MeetSL};
use std::collections::{BTreeMap, HashMap, HashSet};

/// A tabulated copy of a doctrine over finitely many objects, with the
/// representative of every element class.
#[derive(Debug, Clone)]
pub struct Tabulation<D: Doctrine> {
    pub doctrine: TabDoctrine,
    pub mat: Materialized<Obj<D>, Mor<D>>,
    pub reps: Vec<Vec<D::Elem>>,
    /// Objects whose source fiber listing was known to be partial.
    pub partial_fibers: Vec<usize>,
}

impl<D: Doctrine> Tabulation<D> {
    /// Class index of `x` over the tabulated object `a`.
    pub fn class_of(&self, d: &D, a: usize, x: &D::Elem) -> Option<usize> {
        d.position_in(&self.mat.objs[a], &self.reps[a], x)
    }
}

/// Tabulates a doctrine whose base is already finite, keeping object and
/// morphism indices.
pub fn tabulate<D: Doctrine<Base = FinCat>>(d: &D) -> Tabulation<D> {
    tabulate_with(d, Materialized::identity(d.base()))
}

/// Tabulates the full subcategory on `objs` with the fibers as listed by
/// the doctrine. Results outside the listed fibers or objects become
/// undefined cells.
pub fn tabulate_over<D: Doctrine>(d: &D, objs: Vec<Obj<D>>) -> Tabulation<D> {
    let mat = Materialized::new(d.base(), objs);
    tabulate_with(d, mat)
}

fn tabulate_with<D: Doctrine>(d: &D, mat: Materialized<Obj<D>, Mor<D>>) -> Tabulation<D> {
    let n = mat.objs.len();
    let mut fibers = Vec::with_capacity(n);
    let mut reps: Vec<Vec<D::Elem>> = Vec::with_capacity(n);
    let mut lookups: Vec<HashMap<D::Elem, usize>> = Vec::with_capacity(n);
    let mut partial = Vec::new();
    for (i, o) in mat.objs.iter().enumerate() {
        if !d.fiber_complete(o) {
            partial.push(i);
        }
        let elems = d.fiber(o);
        let refl = poset_reflection(elems.len(), |x, y| d.leq(o, &elems[x], &elems[y])).expect("fiber order is a preorder");
        let r: Vec<D::Elem> = refl.reps.iter().map(|&k| elems[k].clone()).collect();
        let mut lk = HashMap::new();
        for (k, e) in elems.iter().enumerate() {
            lk.entry(e.clone()).or_insert(refl.class_of[k]);
        }
        let mut seen = HashSet::new();
        let names: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let base = d.elem_label(o, e);
                let name = if seen.contains(&base) { format!("{base}#{k}") } else { base };
                seen.insert(name.clone());
                name
            })
            .collect();
        // meets filled in below once every class is known
        let m = r.len();
        fibers.push((names, refl.leq, vec![vec![None; m]; m]));
        reps.push(r);
        lookups.push(lk);
    }
    let lookup = |i: usize, x: &D::Elem| -> Option<usize> {
        if let Some(&c) = lookups[i].get(x) {
            return Some(c);
        }
        if d.canonical() {
            None
        } else {
            d.position_in(&mat.objs[i], &reps[i], x)
        }
    };
    let mut tables = Vec::with_capacity(n);
    for (i, o) in mat.objs.iter().enumerate() {
        let (names, leq, mut meet) = std::mem::take(&mut fibers[i]);
        let r = &reps[i];
        for x in 0..r.len() {
            for y in x..r.len() {
                let v = d.meet(o, &r[x], &r[y]).and_then(|e| lookup(i, &e));
                meet[x][y] = v;
                meet[y][x] = v;
            }
        }
        let top = lookup(i, &d.top(o)).expect("top element is listed in its fiber");
        tables.push(MeetSL::new(names, leq, meet, top).expect("tabulated fiber is well formed"));
    }
    let mut reindex = Vec::with_capacity(mat.mors.len());
    for f in &mat.mors {
        let (a, b) = (mat.obj(&d.base().dom(f)).unwrap(), mat.obj(&d.base().cod(f)).unwrap());
        reindex.push(reps[b].iter().map(|x| d.reindex(f, x).and_then(|y| lookup(a, &y))).collect());
    }
    let delta = d.is_elementary().then(|| {
        (0..n)
            .map(|i| {
                let p = mat.cat.chosen_product(i, i)?;
                d.delta(&mat.objs[i]).and_then(|e| lookup(p.obj, &e))
            })
            .collect()
    });
    let exists = d.is_existential().then(|| {
        let mut t = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                let Some(p) = mat.cat.product(&a, &b) else { continue };
                if t.contains_key(&p.p1) {
                    continue;
                }
                let (oa, ob) = (&mat.objs[a], &mat.objs[b]);
                let col: Vec<Option<usize>> =
                    reps[p.obj].iter().map(|x| d.exists(oa, ob, x).and_then(|y| lookup(a, &y))).collect();
                t.insert(p.p1, col);
            }
        }
        t
    });
    let doctrine = TabDoctrine::new(mat.cat.clone(), tables, reindex, delta, exists).expect("tabulation is well formed");
    Tabulation { doctrine, mat, reps, partial_fibers: partial }
}
