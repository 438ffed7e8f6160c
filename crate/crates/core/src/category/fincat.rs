use super::{Cartesian, Category, Product};
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::hash::Hash;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorInfo {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
}

/// An explicit finite category with integer objects and morphisms.
/// Products and the terminal object are optional chosen structure; a
/// truncated materialization leaves some products undefined.
#[derive(Debug, Clone)]
pub struct FinCat {
    objects: Vec<String>,
    mors: Vec<MorInfo>,
    ids: Vec<usize>,
    homs: Vec<Vec<usize>>,
    comp: HashMap<(usize, usize), usize>,
    terminal: Option<usize>,
    prod: HashMap<(usize, usize), Product<usize, usize>>,
}

impl FinCat {
    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.mors.len()
    }

    pub fn object_name(&self, a: usize) -> &str {
        &self.objects[a]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism(&self, f: usize) -> &MorInfo {
        &self.mors[f]
    }

    pub fn morphisms(&self) -> &[MorInfo] {
        &self.mors
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.mors.iter().position(|m| m.name == name)
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.homs[a * self.objects.len() + b]
    }

    pub fn try_compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp.get(&(g, f)).copied()
    }

    pub fn chosen_terminal(&self) -> Option<usize> {
        self.terminal
    }

    pub fn chosen_product(&self, a: usize, b: usize) -> Option<&Product<usize, usize>> {
        self.prod.get(&(a, b))
    }

    pub fn set_terminal(&mut self, t: Option<usize>) {
        self.terminal = t;
    }

    pub fn set_product(&mut self, a: usize, b: usize, p: Product<usize, usize>) {
        self.prod.insert((a, b), p);
    }

    pub fn clear_products(&mut self) {
        self.prod.clear();
    }

    /// A preorder as a thin category; `le` must be reflexive and transitive.
    /// Terminal = maximum and products = meets wherever they exist.
    pub fn poset(names: &[&str], le: impl Fn(usize, usize) -> bool) -> Result<FinCat> {
        let n = names.len();
        let mut b = FinCatBuilder::new();
        for nm in names {
            b.object(nm);
        }
        let mut arrow = vec![vec![None; n]; n];
        for i in 0..n {
            arrow[i][i] = Some(b.identity(i));
            for j in 0..n {
                if i != j && le(i, j) {
                    arrow[i][j] = Some(b.morphism(&format!("{}<={}", names[i], names[j]), i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if let (Some(f), Some(g)) = (arrow[i][j], arrow[j][k]) {
                        let h = arrow[i][k].ok_or_else(|| Error::MalformedTable(format!("order not transitive at {},{},{}", names[i], names[j], names[k])))?;
                        b.compose(g, f, h);
                    }
                }
            }
        }
        if let Some(t) = (0..n).find(|&t| (0..n).all(|x| le(x, t))) {
            b.terminal(t);
        }
        for i in 0..n {
            for j in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&z| le(z, i) && le(z, j)).collect();
                if let Some(m) = lower.iter().copied().find(|&m| lower.iter().all(|&z| le(z, m))) {
                    b.product(i, j, m, arrow[m][i].unwrap(), arrow[m][j].unwrap());
                }
            }
        }
        b.build()
    }

    /// The poset `{0 < 1}` as a category.
    pub fn two_chain() -> FinCat {
        FinCat::poset(&["0", "1"], |i, j| i <= j).expect("2-chain")
    }

    /// The diamond `0 < a, b < 1`.
    pub fn diamond() -> FinCat {
        FinCat::poset(&["0", "a", "b", "1"], |i, j| i == j || i == 0 || j == 3).expect("diamond")
    }

    /// One object, one morphism.
    pub fn trivial() -> FinCat {
        FinCat::poset(&["*"], |_, _| true).expect("trivial")
    }
}

impl Category for FinCat {
    type Obj = usize;
    type Mor = usize;

    fn dom(&self, f: &usize) -> usize {
        self.mors[*f].dom
    }
    fn cod(&self, f: &usize) -> usize {
        self.mors[*f].cod
    }
    fn id(&self, a: &usize) -> usize {
        self.ids[*a]
    }
    fn compose(&self, g: &usize, f: &usize) -> usize {
        match self.comp.get(&(*g, *f)) {
            Some(h) => *h,
            None => panic!("composite {} ∘ {} is not tabulated", self.mors[*g].name, self.mors[*f].name),
        }
    }
    fn homs(&self, a: &usize, b: &usize) -> Vec<usize> {
        self.hom(*a, *b).to_vec()
    }
    fn objects(&self) -> Vec<usize> {
        (0..self.objects.len()).collect()
    }
    fn obj_label(&self, a: &usize) -> String {
        self.objects[*a].clone()
    }
    fn mor_label(&self, f: &usize) -> String {
        self.mors[*f].name.clone()
    }
}

impl Cartesian for FinCat {
    fn terminal(&self) -> usize {
        self.terminal.expect("finite category has no chosen terminal object")
    }
    fn product(&self, a: &usize, b: &usize) -> Option<Product<usize, usize>> {
        self.prod.get(&(*a, *b)).cloned()
    }
    fn pair(&self, f: &usize, g: &usize) -> Option<usize> {
        let x = self.dom(f);
        if x != self.dom(g) {
            return None;
        }
        let p = self.prod.get(&(self.cod(f), self.cod(g)))?;
        self.hom(x, p.obj)
            .iter()
            .copied()
            .find(|&h| self.comp.get(&(p.p1, h)) == Some(f) && self.comp.get(&(p.p2, h)) == Some(g))
    }
}

/// Incremental construction of a [`FinCat`]. Identities are created with
/// their objects; composites with identities are filled in automatically.
#[derive(Debug, Default)]
pub struct FinCatBuilder {
    objects: Vec<String>,
    mors: Vec<MorInfo>,
    ids: Vec<usize>,
    comp: HashMap<(usize, usize), usize>,
    terminal: Option<usize>,
    prod: HashMap<(usize, usize), Product<usize, usize>>,
}

impl FinCatBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, name: &str) -> usize {
        let a = self.objects.len();
        self.objects.push(name.to_string());
        self.ids.push(self.mors.len());
        self.mors.push(MorInfo { name: format!("id_{name}"), dom: a, cod: a });
        a
    }

    pub fn identity(&self, a: usize) -> usize {
        self.ids[a]
    }

    pub fn morphism(&mut self, name: &str, dom: usize, cod: usize) -> usize {
        self.mors.push(MorInfo { name: name.to_string(), dom, cod });
        self.mors.len() - 1
    }

    pub fn rename_morphism(&mut self, f: usize, name: &str) {
        self.mors[f].name = name.to_string();
    }

    pub fn compose(&mut self, g: usize, f: usize, h: usize) {
        self.comp.insert((g, f), h);
    }

    pub fn terminal(&mut self, t: usize) {
        self.terminal = Some(t);
    }

    pub fn product(&mut self, a: usize, b: usize, obj: usize, p1: usize, p2: usize) {
        self.prod.insert((a, b), Product { obj, p1, p2 });
    }

    pub fn build(mut self) -> Result<FinCat> {
        let n = self.objects.len();
        let m = self.mors.len();
        for f in 0..m {
            let MorInfo { dom, cod, .. } = self.mors[f];
            if dom >= n || cod >= n {
                return Err(Error::MalformedTable(format!("morphism {} has an unknown end", self.mors[f].name)));
            }
            self.comp.entry((f, self.ids[dom])).or_insert(f);
            self.comp.entry((self.ids[cod], f)).or_insert(f);
        }
        let mut homs = vec![Vec::new(); n * n];
        for (f, info) in self.mors.iter().enumerate() {
            homs[info.dom * n + info.cod].push(f);
        }
        for (&(g, f), &h) in &self.comp {
            if g >= m || f >= m || h >= m {
                return Err(Error::MalformedTable(format!("composition entry ({g},{f}) -> {h} out of range")));
            }
            let (fi, gi, hi) = (&self.mors[f], &self.mors[g], &self.mors[h]);
            if fi.cod != gi.dom || hi.dom != fi.dom || hi.cod != gi.cod {
                return Err(Error::MalformedTable(format!("composite {} ∘ {} = {} is ill-typed", gi.name, fi.name, hi.name)));
            }
        }
        for f in 0..m {
            for g in 0..m {
                if self.mors[f].cod == self.mors[g].dom && !self.comp.contains_key(&(g, f)) {
                    return Err(Error::MalformedTable(format!(
                        "missing composite {} ∘ {}",
                        self.mors[g].name, self.mors[f].name
                    )));
                }
            }
        }
        if let Some(t) = self.terminal {
            if t >= n {
                return Err(Error::MalformedTable("terminal out of range".into()));
            }
        }
        for (&(a, b), p) in &self.prod {
            if a >= n || b >= n || p.obj >= n || p.p1 >= m || p.p2 >= m {
                return Err(Error::MalformedTable(format!("product entry ({a},{b}) out of range")));
            }
        }
        Ok(FinCat { objects: self.objects, mors: self.mors, ids: self.ids, homs, comp: self.comp, terminal: self.terminal, prod: self.prod })
    }
}

/// A finite full subcategory of some cartesian category, copied into a
/// [`FinCat`] together with the index correspondence.
#[derive(Debug, Clone)]
pub struct Materialized<O, M> {
    pub cat: FinCat,
    pub objs: Vec<O>,
    pub mors: Vec<M>,
    obj_index: HashMap<O, usize>,
    mor_index: HashMap<M, usize>,
}

impl<O: Clone + Eq + Hash, M: Clone + Eq + Hash> Materialized<O, M> {
    pub fn obj(&self, o: &O) -> Option<usize> {
        self.obj_index.get(o).copied()
    }
    pub fn mor(&self, m: &M) -> Option<usize> {
        self.mor_index.get(m).copied()
    }
}

impl Materialized<usize, usize> {
    /// The trivial correspondence of a finite category with itself.
    pub fn identity(c: &FinCat) -> Materialized<usize, usize> {
        let objs: Vec<usize> = (0..c.num_objects()).collect();
        let mors: Vec<usize> = (0..c.num_morphisms()).collect();
        let obj_index = objs.iter().map(|&o| (o, o)).collect();
        let mor_index = mors.iter().map(|&m| (m, m)).collect();
        Materialized { cat: c.clone(), objs, mors, obj_index, mor_index }
    }
}

impl<O: Clone + Eq + Hash, M: Clone + Eq + Hash> Materialized<O, M> {
    /// Copies the full subcategory on `objs`. A product is kept only when
    /// its object is among `objs`.
    pub fn new<C>(c: &C, objs: Vec<O>) -> Materialized<O, M>
    where
        C: Cartesian<Obj = O, Mor = M>,
    {
        let mut b = FinCatBuilder::new();
        let mut obj_index = HashMap::new();
        for o in &objs {
            let i = b.object(&c.obj_label(o));
            obj_index.insert(o.clone(), i);
        }
        let mut mors: Vec<M> = Vec::new();
        let mut mor_index = HashMap::new();
        for (i, o) in objs.iter().enumerate() {
            let id = c.id(o);
            mor_index.insert(id.clone(), b.identity(i));
            b.rename_morphism(b.identity(i), &c.mor_label(&id));
        }
        // identities occupy the first ids, in object order
        mors.extend(objs.iter().map(|o| c.id(o)));
        for (i, a) in objs.iter().enumerate() {
            for (j, bo) in objs.iter().enumerate() {
                for f in c.homs(a, bo) {
                    if mor_index.contains_key(&f) {
                        continue;
                    }
                    let k = b.morphism(&c.mor_label(&f), i, j);
                    mor_index.insert(f.clone(), k);
                    mors.push(f);
                }
            }
        }
        for f in &mors {
            let y = c.cod(f);
            for (j, z) in objs.iter().enumerate() {
                let _ = j;
                for g in c.homs(&y, z) {
                    let h = c.compose(&g, f);
                    b.compose(mor_index[&g], mor_index[f], mor_index[&h]);
                }
            }
        }
        let t = c.terminal();
        if let Some(&ti) = obj_index.get(&t) {
            b.terminal(ti);
        }
        for x in &objs {
            for y in &objs {
                if let Some(p) = c.product(x, y) {
                    if let Some(&po) = obj_index.get(&p.obj) {
                        b.product(obj_index[x], obj_index[y], po, mor_index[&p.p1], mor_index[&p.p2]);
                    }
                }
            }
        }
        let cat = b.build().expect("materialized subcategory is well formed");
        Materialized { cat, objs, mors, obj_index, mor_index }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{validate_base, CartesianExt};

    #[test]
    fn diamond_products_are_meets() {
        let d = FinCat::diamond();
        let p = d.product(&1, &2).unwrap();
        assert_eq!(p.obj, 0);
        assert_eq!(d.mor_label(&p.p1), "0<=a");
        assert!(validate_base(&d).pass);
    }

    #[test]
    fn pair_of_projections_is_identity() {
        let d = FinCat::diamond();
        for a in 0..4 {
            for b in 0..4 {
                let p = d.product(&a, &b).unwrap();
                assert_eq!(d.pair(&p.p1, &p.p2), Some(d.id(&p.obj)));
            }
        }
        assert_eq!(d.swap(&1, &1), Some(d.id(&1)));
    }

    #[test]
    fn mutated_product_is_caught() {
        let mut d = FinCat::diamond();
        let one_a = d.morphism_index("a<=1").unwrap();
        let id1 = d.id(&3);
        let one_b = d.morphism_index("b<=1").unwrap();
        let _ = (one_a, one_b);
        // 1 is not below a, so there is no projection 1 → a; point the
        // product at 1 with meaningless legs.
        d.set_product(1, 2, Product { obj: 3, p1: id1, p2: id1 });
        let r = validate_base(&d);
        assert!(!r.pass);
        assert!(!r.law_passed("product.typed"));
    }

    #[test]
    fn missing_composite_is_malformed() {
        let mut b = FinCatBuilder::new();
        let x = b.object("x");
        let y = b.object("y");
        let z = b.object("z");
        b.morphism("f", x, y);
        b.morphism("g", y, z);
        assert!(matches!(b.build(), Err(Error::MalformedTable(_))));
    }
}
