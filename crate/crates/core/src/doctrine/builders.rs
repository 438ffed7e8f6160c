use super::{tabulate, validate_doctrine, Doctrine, Level, Obj, TabDoctrine, Tabulation};
use crate::category::{limits, CartesianExt, Category, FinCat, GenCat, GenMor, WeakPullbacks, Word};
use crate::error::{Error, Result};
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

/// Weak subobjects: the fiber over `A` is the poset reflection of the
/// slice over `A`; reindexing is weak pullback and `∃` is post-composition.
pub struct WeakSubobjects<C: WeakPullbacks> {
    cat: C,
    memo: Mutex<HashMap<(C::Mor, C::Mor), Option<(C::Obj, C::Mor, C::Mor)>>>,
}

impl<C: WeakPullbacks> WeakSubobjects<C> {
    pub fn new(cat: C) -> Self {
        WeakSubobjects { cat, memo: Mutex::new(HashMap::new()) }
    }

    fn wpb(&self, f: &C::Mor, g: &C::Mor) -> Option<(C::Obj, C::Mor, C::Mor)> {
        let key = (f.clone(), g.clone());
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = self.cat.weak_pullback(f, g);
        self.memo.lock().unwrap().insert(key, v.clone());
        v
    }

    /// Some `h` with `g∘h = f`.
    pub fn factor(&self, f: &C::Mor, g: &C::Mor) -> Option<C::Mor> {
        self.cat.homs(&self.cat.dom(f), &self.cat.dom(g)).into_iter().find(|h| self.cat.compose(g, h) == *f)
    }
}

impl<C: WeakPullbacks> Doctrine for WeakSubobjects<C> {
    type Base = C;
    type Elem = C::Mor;

    fn base(&self) -> &C {
        &self.cat
    }
    fn top(&self, a: &C::Obj) -> C::Mor {
        self.cat.id(a)
    }
    fn leq(&self, _a: &C::Obj, x: &C::Mor, y: &C::Mor) -> bool {
        x == y || self.factor(x, y).is_some()
    }
    fn meet(&self, _a: &C::Obj, x: &C::Mor, y: &C::Mor) -> Option<C::Mor> {
        let (_, p, _) = self.wpb(x, y)?;
        Some(self.cat.compose(x, &p))
    }
    fn reindex(&self, k: &C::Mor, x: &C::Mor) -> Option<C::Mor> {
        let (_, _, q) = self.wpb(x, k)?;
        Some(q)
    }
    fn delta(&self, a: &C::Obj) -> Option<C::Mor> {
        self.cat.diag(a)
    }
    fn exists(&self, a: &C::Obj, b: &C::Obj, x: &C::Mor) -> Option<C::Mor> {
        let p = self.cat.p1(a, b)?;
        Some(self.cat.compose(&p, x))
    }
    fn is_elementary(&self) -> bool {
        true
    }
    fn is_existential(&self) -> bool {
        true
    }
    fn fiber(&self, a: &C::Obj) -> Vec<C::Mor> {
        self.cat.objects().iter().flat_map(|x| self.cat.homs(x, a)).collect()
    }
    fn canonical(&self) -> bool {
        false
    }
    fn elem_label(&self, _a: &C::Obj, x: &C::Mor) -> String {
        format!("[{}]", self.cat.mor_label(x))
    }
}

/// Weak subobjects of a finite category, tabulated. Fails if some cospan
/// has no weak pullback.
pub fn weak_subobjects(c: &FinCat) -> Result<Tabulation<WeakSubobjects<FinCat>>> {
    for f in 0..c.num_morphisms() {
        for g in 0..c.num_morphisms() {
            if c.cod(&f) == c.cod(&g) && limits::find_weak_pullback(c, &f, &g).is_none() {
                return Err(Error::NoWeakPullback(format!("{} , {}", c.mor_label(&f), c.mor_label(&g))));
            }
        }
    }
    Ok(tabulate(&WeakSubobjects::new(c.clone())))
}

/// Monomorphisms into each object, ordered by factorization.
struct Monos<'a> {
    cat: &'a FinCat,
    monos: Vec<bool>,
}

impl Doctrine for Monos<'_> {
    type Base = FinCat;
    type Elem = usize;
    fn base(&self) -> &FinCat {
        self.cat
    }
    fn top(&self, a: &usize) -> usize {
        self.cat.id(a)
    }
    fn leq(&self, _a: &usize, x: &usize, y: &usize) -> bool {
        let c = self.cat;
        c.hom(c.dom(x), c.dom(y)).iter().any(|h| c.compose(y, h) == *x)
    }
    fn meet(&self, _a: &usize, x: &usize, y: &usize) -> Option<usize> {
        let (_, p, _) = limits::find_pullback(self.cat, x, y)?;
        Some(self.cat.compose(x, &p))
    }
    fn reindex(&self, k: &usize, x: &usize) -> Option<usize> {
        let (_, _, q) = limits::find_pullback(self.cat, x, k)?;
        Some(q)
    }
    fn delta(&self, a: &usize) -> Option<usize> {
        self.cat.diag(a)
    }
    fn is_elementary(&self) -> bool {
        true
    }
    fn fiber(&self, a: &usize) -> Vec<usize> {
        (0..self.cat.num_objects()).flat_map(|x| self.cat.hom(x, *a).to_vec()).filter(|&f| self.monos[f]).collect()
    }
    fn canonical(&self) -> bool {
        false
    }
    fn elem_label(&self, _a: &usize, x: &usize) -> String {
        format!("[{}]", self.cat.mor_label(x))
    }
}

/// Subobjects of a finite lex category. Equality and quantifier tables are
/// kept only when the corresponding adjunction laws hold; the notes say
/// which structure was dropped.
pub fn subobjects_doctrine(c: &FinCat) -> (TabDoctrine, Vec<String>) {
    let (t, _, notes) = subobjects_with_reps(c);
    (t, notes)
}

/// As [`subobjects_doctrine`], also returning a representing mono for
/// every element.
pub fn subobjects_with_reps(c: &FinCat) -> (TabDoctrine, Vec<Vec<usize>>, Vec<String>) {
    let monos = (0..c.num_morphisms()).map(|f| limits::is_mono(c, &f)).collect();
    let m = Monos { cat: c, monos };
    let tab = tabulate(&m);
    let reps = tab.reps;
    let mut t = tab.doctrine;
    let mut notes = Vec::new();
    t.exists = left_adjoints(&t);
    if t.exists.is_none() {
        notes.push("some projection has no left adjoint: existential structure absent".into());
    }
    if t.delta.as_ref().is_some_and(|d| d.iter().any(|x| x.is_none())) {
        t.delta = None;
    }
    if t.delta.is_some() {
        let ok = validate_doctrine(&t, Level::Elementary).map(|r| r.pass).unwrap_or(false);
        if !ok {
            t.delta = None;
            notes.push("diagonal classes fail the equality laws: elementary structure absent".into());
        }
    } else {
        notes.push("equality predicates undefined".into());
    }
    if t.exists.is_some() {
        let ok = validate_doctrine(&t, Level::Existential).map(|r| r.pass).unwrap_or(false);
        if !ok {
            t.exists = None;
            notes.push("images not stable: existential structure absent".into());
        }
    }
    (t, reps, notes)
}

/// Left adjoints to reindexing along every chosen first projection, found
/// as least elements; `None` if one fails to exist.
pub(crate) fn left_adjoints(t: &TabDoctrine) -> Option<BTreeMap<usize, Vec<Option<usize>>>> {
    let c = &t.base;
    let mut out = BTreeMap::new();
    for a in 0..c.num_objects() {
        for b in 0..c.num_objects() {
            let Some(p) = c.chosen_product(a, b).cloned() else { continue };
            if out.contains_key(&p.p1) {
                continue;
            }
            let fa = &t.fibers[a];
            let fab = &t.fibers[p.obj];
            let mut col = Vec::with_capacity(fab.len());
            for x in 0..fab.len() {
                let ups: Vec<usize> = (0..fa.len()).filter(|&y| t.reindex[p.p1][y].is_some_and(|py| fab.leq(x, py))).collect();
                let least = ups.iter().copied().find(|&l| ups.iter().all(|&u| fa.leq(l, u)))?;
                col.push(Some(least));
            }
            out.insert(p.p1, col);
        }
    }
    Some(out)
}

/// `A ↦ H^A` for a finite chain `H`, over a generated base.
#[derive(Debug, Clone)]
pub struct Localic {
    cat: GenCat,
    chain: Vec<String>,
}

pub fn localic_doctrine(chain: Vec<String>, cat: GenCat) -> Result<Localic> {
    if chain.len() < 2 {
        return Err(Error::MalformedTable("the chain needs a bottom and a top".into()));
    }
    Ok(Localic { cat, chain })
}

impl Localic {
    pub fn chain(&self) -> &[String] {
        &self.chain
    }

    /// The element with the given values, one per tuple of the underlying set.
    pub fn element(&self, values: &[&str]) -> Option<Vec<u8>> {
        values.iter().map(|v| self.chain.iter().position(|c| c == v).map(|i| i as u8)).collect()
    }

    pub fn top_value(&self) -> u8 {
        (self.chain.len() - 1) as u8
    }
}

impl Doctrine for Localic {
    type Base = GenCat;
    type Elem = Vec<u8>;

    fn base(&self) -> &GenCat {
        &self.cat
    }
    fn top(&self, a: &Word) -> Vec<u8> {
        vec![self.top_value(); self.cat.size(a)]
    }
    fn leq(&self, _a: &Word, x: &Vec<u8>, y: &Vec<u8>) -> bool {
        x.iter().zip(y).all(|(p, q)| p <= q)
    }
    fn meet(&self, _a: &Word, x: &Vec<u8>, y: &Vec<u8>) -> Option<Vec<u8>> {
        Some(x.iter().zip(y).map(|(p, q)| *p.min(q)).collect())
    }
    fn reindex(&self, f: &GenMor, x: &Vec<u8>) -> Option<Vec<u8>> {
        Some(f.table.iter().map(|&t| x[t as usize]).collect())
    }
    fn delta(&self, a: &Word) -> Option<Vec<u8>> {
        let n = self.cat.size(a);
        Some((0..n * n).map(|t| if t / n == t % n { self.top_value() } else { 0 }).collect())
    }
    fn exists(&self, a: &Word, b: &Word, x: &Vec<u8>) -> Option<Vec<u8>> {
        let (na, nb) = (self.cat.size(a), self.cat.size(b));
        Some((0..na).map(|i| (0..nb).map(|j| x[i * nb + j]).max().unwrap_or(0)).collect())
    }
    fn is_elementary(&self) -> bool {
        true
    }
    fn is_existential(&self) -> bool {
        true
    }
    fn fiber(&self, a: &Word) -> Vec<Vec<u8>> {
        let n = self.cat.size(a);
        let k = self.chain.len() as u8;
        let mut out = Vec::new();
        let mut v = vec![0u8; n];
        loop {
            out.push(v.clone());
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                v[i] += 1;
                if v[i] < k {
                    break;
                }
                v[i] = 0;
            }
        }
    }
    fn elem_label(&self, _a: &Obj<Self>, x: &Vec<u8>) -> String {
        let vals: Vec<&str> = x.iter().map(|&v| self.chain[v as usize].as_str()).collect();
        format!("<{}>", vals.join(","))
    }
}
