use super::{Cartesian, Category, Product};
use crate::error::{Error, Result};

/// A formal product of seed sets; the empty word is the terminal object.
pub type Word = Vec<usize>;

/// A set function between the underlying products of two words, stored as
/// a lookup table over mixed-radix tuple indices (first coordinate most
/// significant).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenMor {
    pub dom: Word,
    pub cod: Word,
    pub table: Vec<u32>,
}

/// The cartesian category freely generated by finite non-empty seed sets,
/// with all set functions between products as morphisms.
#[derive(Debug, Clone)]
pub struct GenCat {
    names: Vec<String>,
    elements: Vec<Vec<String>>,
    bound: usize,
}

impl GenCat {
    pub fn new(seeds: Vec<(String, Vec<String>)>, bound: usize) -> Result<GenCat> {
        let mut names = Vec::new();
        let mut elements = Vec::new();
        for (n, els) in seeds {
            if els.is_empty() {
                return Err(Error::EmptySeed(n));
            }
            names.push(n);
            elements.push(els);
        }
        Ok(GenCat { names, elements, bound })
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn with_bound(&self, bound: usize) -> GenCat {
        GenCat { bound, ..self.clone() }
    }

    pub fn seed_names(&self) -> &[String] {
        &self.names
    }

    pub fn seed(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn seed_elements(&self, s: usize) -> &[String] {
        &self.elements[s]
    }

    /// Cardinality of the underlying product.
    pub fn size(&self, w: &Word) -> usize {
        w.iter().map(|&s| self.elements[s].len()).product()
    }

    /// Splits a tuple index into coordinates.
    pub fn decode(&self, w: &Word, mut t: usize) -> Vec<usize> {
        let mut out = vec![0; w.len()];
        for (i, &s) in w.iter().enumerate().rev() {
            let k = self.elements[s].len();
            out[i] = t % k;
            t /= k;
        }
        out
    }

    pub fn encode(&self, w: &Word, coords: &[usize]) -> usize {
        w.iter().zip(coords).fold(0, |acc, (&s, &c)| acc * self.elements[s].len() + c)
    }

    pub fn tuple_label(&self, w: &Word, t: usize) -> String {
        let cs = self.decode(w, t);
        let parts: Vec<&str> = w.iter().zip(&cs).map(|(&s, &c)| self.elements[s][c].as_str()).collect();
        format!("({})", parts.join(","))
    }

    /// Words of length at most `bound`, shortest first, then lexicographic.
    pub fn enumerate_objects(&self, bound: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        let mut layer: Vec<Word> = vec![Vec::new()];
        for _ in 0..bound {
            let mut next = Vec::new();
            for w in &layer {
                for s in 0..self.names.len() {
                    let mut v = w.clone();
                    v.push(s);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    pub fn word_label(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let sep = if self.names.iter().all(|n| n.chars().count() == 1) { "" } else { "*" };
        w.iter().map(|&s| self.names[s].as_str()).collect::<Vec<_>>().join(sep)
    }

    pub fn constant(&self, dom: &Word, cod: &Word, value: usize) -> GenMor {
        GenMor { dom: dom.clone(), cod: cod.clone(), table: vec![value as u32; self.size(dom)] }
    }
}

impl Category for GenCat {
    type Obj = Word;
    type Mor = GenMor;

    fn dom(&self, f: &GenMor) -> Word {
        f.dom.clone()
    }
    fn cod(&self, f: &GenMor) -> Word {
        f.cod.clone()
    }
    fn id(&self, a: &Word) -> GenMor {
        GenMor { dom: a.clone(), cod: a.clone(), table: (0..self.size(a) as u32).collect() }
    }
    fn compose(&self, g: &GenMor, f: &GenMor) -> GenMor {
        debug_assert_eq!(f.cod, g.dom);
        GenMor { dom: f.dom.clone(), cod: g.cod.clone(), table: f.table.iter().map(|&x| g.table[x as usize]).collect() }
    }
    fn homs(&self, a: &Word, b: &Word) -> Vec<GenMor> {
        let n = self.size(a);
        let k = self.size(b) as u32;
        let mut out = Vec::new();
        let mut t = vec![0u32; n];
        loop {
            out.push(GenMor { dom: a.clone(), cod: b.clone(), table: t.clone() });
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                t[i] += 1;
                if t[i] < k {
                    break;
                }
                t[i] = 0;
            }
        }
    }
    fn objects(&self) -> Vec<Word> {
        self.enumerate_objects(self.bound)
    }
    fn obj_label(&self, a: &Word) -> String {
        self.word_label(a)
    }
    fn mor_label(&self, f: &GenMor) -> String {
        let vals: Vec<String> = f.table.iter().map(|&v| self.tuple_label(&f.cod, v as usize)).collect();
        format!("{}->{}[{}]", self.word_label(&f.dom), self.word_label(&f.cod), vals.join(" "))
    }
}

impl Cartesian for GenCat {
    fn terminal(&self) -> Word {
        Vec::new()
    }
    fn product(&self, a: &Word, b: &Word) -> Option<Product<Word, GenMor>> {
        let mut obj = a.clone();
        obj.extend_from_slice(b);
        let nb = self.size(b) as u32;
        let n = self.size(&obj) as u32;
        let p1 = GenMor { dom: obj.clone(), cod: a.clone(), table: (0..n).map(|t| t / nb).collect() };
        let p2 = GenMor { dom: obj.clone(), cod: b.clone(), table: (0..n).map(|t| t % nb).collect() };
        Some(Product { obj, p1, p2 })
    }
    fn pair(&self, f: &GenMor, g: &GenMor) -> Option<GenMor> {
        if f.dom != g.dom {
            return None;
        }
        let mut cod = f.cod.clone();
        cod.extend_from_slice(&g.cod);
        let ng = self.size(&g.cod) as u32;
        Some(GenMor { dom: f.dom.clone(), cod, table: f.table.iter().zip(&g.table).map(|(&x, &y)| x * ng + y).collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::validate_base;

    fn seeds(spec: &[(&str, &[&str])]) -> Vec<(String, Vec<String>)> {
        spec.iter().map(|(n, e)| (n.to_string(), e.iter().map(|s| s.to_string()).collect())).collect()
    }

    #[test]
    fn enumeration_counts() {
        let g = GenCat::new(seeds(&[("B", &["x", "y"])]), 2).unwrap();
        assert_eq!(g.enumerate_objects(0), vec![Vec::<usize>::new()]);
        let labels: Vec<String> = g.enumerate_objects(2).iter().map(|w| g.word_label(w)).collect();
        assert_eq!(labels, ["1", "B", "BB"]);
        let g2 = GenCat::new(seeds(&[("B", &["x", "y"]), ("C", &["u"])]), 2).unwrap();
        assert_eq!(g2.enumerate_objects(2).len(), 7);
    }

    #[test]
    fn empty_seed_rejected() {
        assert!(matches!(GenCat::new(seeds(&[("E", &[])]), 1), Err(Error::EmptySeed(_))));
    }

    #[test]
    fn product_is_concatenation() {
        let g = GenCat::new(seeds(&[("B", &["x", "y"])]), 2).unwrap();
        let p = g.product(&vec![0], &vec![0]).unwrap();
        assert_eq!(g.word_label(&p.obj), "BB");
        assert_eq!(p.p1.table, vec![0, 0, 1, 1]);
        assert_eq!(p.p2.table, vec![0, 1, 0, 1]);
        assert_eq!(g.homs(&vec![0], &vec![0, 0]).len(), 16);
    }

    #[test]
    fn small_generated_category_is_cartesian() {
        let g = GenCat::new(seeds(&[("B", &["x", "y"])]), 1).unwrap();
        assert!(validate_base(&g).pass);
    }
}
