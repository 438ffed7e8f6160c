//! Contexts and substitutions, the syntactic doctrine of the (⊤, ∧, =, ∃)
//! fragment over the empty theory, and its bounded materialization.

use super::query::{Builder, CanonicalQuery, Label};
use super::syntax::{Context, Formula, Sequent, Signature};
use crate::category::{Cartesian, Category, Product};
use crate::doctrine::{tabulate_over, Doctrine, Selection, TabDoctrine, Tabulation};
use crate::error::{Error, Result};
use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::{Arc, Mutex};

/// A term of a substitution: a variable of the domain or a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum STerm {
    Var(usize),
    Const(usize),
}

/// A substitution `Γ → Δ`: one term over `Γ` for each variable of `Δ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subst {
    pub dom: Vec<usize>,
    pub cod: Vec<usize>,
    pub terms: Vec<STerm>,
}

/// Contexts (lists of sorts) and substitutions; products are
/// concatenations. `objects` lists contexts of length at most `bound`.
#[derive(Debug, Clone)]
pub struct ContextCat {
    pub sig: Arc<Signature>,
    pub bound: usize,
}

/// Conventional variable names for position `i` of a context.
pub fn var_name(i: usize) -> String {
    const NAMES: [&str; 4] = ["x", "y", "z", "w"];
    match NAMES.get(i) {
        Some(n) => n.to_string(),
        None => format!("x{i}"),
    }
}

pub fn named_context(ctx: &[usize]) -> Context {
    ctx.iter().enumerate().map(|(i, &s)| (var_name(i), s)).collect()
}

impl ContextCat {
    fn terms_of_sort(&self, dom: &[usize], sort: usize) -> Vec<STerm> {
        let mut out: Vec<STerm> = dom.iter().enumerate().filter(|(_, &s)| s == sort).map(|(i, _)| STerm::Var(i)).collect();
        out.extend(self.sig.consts.iter().enumerate().filter(|(_, c)| c.sort == sort).map(|(k, _)| STerm::Const(k)));
        out
    }
}

impl Category for ContextCat {
    type Obj = Vec<usize>;
    type Mor = Subst;

    fn dom(&self, f: &Subst) -> Vec<usize> {
        f.dom.clone()
    }
    fn cod(&self, f: &Subst) -> Vec<usize> {
        f.cod.clone()
    }
    fn id(&self, a: &Vec<usize>) -> Subst {
        Subst { dom: a.clone(), cod: a.clone(), terms: (0..a.len()).map(STerm::Var).collect() }
    }
    fn compose(&self, g: &Subst, f: &Subst) -> Subst {
        let terms = g
            .terms
            .iter()
            .map(|t| match t {
                STerm::Var(j) => f.terms[*j],
                c => *c,
            })
            .collect();
        Subst { dom: f.dom.clone(), cod: g.cod.clone(), terms }
    }
    fn homs(&self, a: &Vec<usize>, b: &Vec<usize>) -> Vec<Subst> {
        let choices: Vec<Vec<STerm>> = b.iter().map(|&s| self.terms_of_sort(a, s)).collect();
        let mut out = vec![Vec::new()];
        for ch in &choices {
            let mut next = Vec::with_capacity(out.len() * ch.len());
            for p in &out {
                for t in ch {
                    let mut q: Vec<STerm> = p.clone();
                    q.push(*t);
                    next.push(q);
                }
            }
            out = next;
        }
        out.into_iter().map(|terms| Subst { dom: a.clone(), cod: b.clone(), terms }).collect()
    }
    fn objects(&self) -> Vec<Vec<usize>> {
        let k = self.sig.sorts.len();
        let mut out = vec![Vec::new()];
        let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..self.bound {
            let mut next = Vec::new();
            for w in &layer {
                for s in 0..k {
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
    fn obj_label(&self, a: &Vec<usize>) -> String {
        format!("({})", super::syntax::show_context(&self.sig, &named_context(a)))
    }
    fn mor_label(&self, f: &Subst) -> String {
        let dom = named_context(&f.dom);
        let ts: Vec<String> = f
            .terms
            .iter()
            .map(|t| match t {
                STerm::Var(i) => dom[*i].0.clone(),
                STerm::Const(k) => self.sig.consts[*k].name.clone(),
            })
            .collect();
        format!("[{}]", ts.join(","))
    }
}

impl Cartesian for ContextCat {
    fn terminal(&self) -> Vec<usize> {
        Vec::new()
    }
    fn product(&self, a: &Vec<usize>, b: &Vec<usize>) -> Option<Product<Vec<usize>, Subst>> {
        let mut obj = a.clone();
        obj.extend(b);
        let p1 = Subst { dom: obj.clone(), cod: a.clone(), terms: (0..a.len()).map(STerm::Var).collect() };
        let p2 = Subst { dom: obj.clone(), cod: b.clone(), terms: (a.len()..obj.len()).map(STerm::Var).collect() };
        Some(Product { obj, p1, p2 })
    }
    fn pair(&self, f: &Subst, g: &Subst) -> Option<Subst> {
        if f.dom != g.dom {
            return None;
        }
        let mut cod = f.cod.clone();
        cod.extend(&g.cod);
        let mut terms = f.terms.clone();
        terms.extend(&g.terms);
        Some(Subst { dom: f.dom.clone(), cod, terms })
    }
}

/// The syntactic doctrine `LT_{=,∃}` of the empty theory. Elements are
/// canonical queries (cores under a canonical labelling), so equal values
/// are exactly provably equivalent formulas. Fibers list the classes with
/// at most `size` relational atoms and `size` bound variables.
pub struct SyntacticDoctrine {
    cat: ContextCat,
    pub size: usize,
    leq_memo: Mutex<HashMap<(CanonicalQuery, CanonicalQuery), bool>>,
}

impl std::fmt::Debug for SyntacticDoctrine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SyntacticDoctrine").field("ctx_bound", &self.cat.bound).field("size", &self.size).finish()
    }
}

/// The syntactic doctrine of `sig`; axioms are refused.
pub fn syntactic_doctrine(sig: &Signature, axioms: &[Sequent], ctx_bound: usize, size: usize) -> Result<SyntacticDoctrine> {
    if !axioms.is_empty() {
        return Err(Error::UnsupportedTheory(format!("{} axioms present; only the empty theory is supported", axioms.len())));
    }
    if let Some(f) = sig.funs.first() {
        return Err(Error::UnsupportedFunctionSymbol(f.name.clone()));
    }
    Ok(SyntacticDoctrine { cat: ContextCat { sig: Arc::new(sig.clone()), bound: ctx_bound }, size, leq_memo: Mutex::new(HashMap::new()) })
}

impl SyntacticDoctrine {
    pub fn sig(&self) -> &Signature {
        &self.cat.sig
    }

    /// The class of a formula in context `ctx` (variables named by
    /// position, see [`var_name`], or by the given context).
    pub fn class_of(&self, ctx: &Context, f: &Formula) -> Result<CanonicalQuery> {
        Ok(super::query::normalize(self.sig(), ctx, f)?.canonical())
    }

    pub fn render(&self, q: &CanonicalQuery) -> String {
        let ctx = named_context(&q.ctx);
        format!("{}", super::syntax::Show(self.sig(), &q.to_formula(self.sig(), &ctx)))
    }

    fn build(&self, ctx: &[usize], f: impl FnOnce(&mut Builder)) -> CanonicalQuery {
        let mut b = Builder::new(self.sig(), ctx);
        f(&mut b);
        b.finish().canonical()
    }

    fn within(&self, q: &CanonicalQuery) -> bool {
        q.atoms.len() <= self.size && q.bound_count() <= self.size
    }

    /// Every class over `ctx` within the size bound.
    fn enumerate(&self, ctx: &[usize]) -> Vec<CanonicalQuery> {
        let sig = self.sig();
        let rigid: Vec<usize> = ctx.iter().copied().chain(sig.consts.iter().map(|c| c.sort)).collect();
        let mut seen: HashSet<CanonicalQuery> = HashSet::new();
        let mut out = Vec::new();
        // equations among rigid items: every sort-respecting partition
        for part in partitions(&rigid) {
            for nb in 0..=self.size {
                // sorts of the bound nodes, nondecreasing
                for bsorts in multisets(sig.sorts.len(), nb) {
                    let blocks = part.iter().copied().max().map_or(0, |m| m + 1);
                    let mut node_sorts: Vec<usize> = vec![0; blocks];
                    for (i, &p) in part.iter().enumerate() {
                        node_sorts[p] = rigid[i];
                    }
                    node_sorts.extend(&bsorts);
                    let atoms = all_atoms(sig, &node_sorts);
                    for chosen in subsets_upto(atoms.len(), self.size) {
                        // every bound node must occur, up to isolated ones
                        let q = self.build(ctx, |b| {
                            let mut items: Vec<usize> = Vec::with_capacity(node_sorts.len());
                            for p in 0..blocks {
                                let first = part.iter().position(|&x| x == p).unwrap();
                                items.push(first);
                            }
                            for (i, &p) in part.iter().enumerate() {
                                b.eq(items[p], i);
                            }
                            for &s in &bsorts {
                                let it = b.fresh(s, None);
                                items.push(it);
                            }
                            for &k in &chosen {
                                let (r, args) = &atoms[k];
                                b.atom(*r, args.iter().map(|&x| items[x]).collect());
                            }
                        });
                        if self.within(&q) && seen.insert(q.clone()) {
                            out.push(q);
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Quantifier-free classes.
    pub fn is_horn(&self, q: &CanonicalQuery) -> bool {
        q.is_horn()
    }
}

/// Block assignment (restricted growth strings) of items with equal sorts.
fn partitions(sorts: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn go(i: usize, sorts: &[usize], cur: &mut Vec<usize>, blocks: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == sorts.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..blocks.len() {
            if blocks[b] == sorts[i] {
                cur.push(b);
                go(i + 1, sorts, cur, blocks, out);
                cur.pop();
            }
        }
        blocks.push(sorts[i]);
        cur.push(blocks.len() - 1);
        go(i + 1, sorts, cur, blocks, out);
        cur.pop();
        blocks.pop();
    }
    go(0, sorts, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

fn multisets(k: usize, n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    if k == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for m in multisets(k, n - 1) {
        let lo = m.last().copied().unwrap_or(0);
        for s in lo..k {
            let mut v = m.clone();
            v.push(s);
            out.push(v);
        }
    }
    out
}

fn all_atoms(sig: &Signature, node_sorts: &[usize]) -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    for (r, rel) in sig.rels.iter().enumerate() {
        let mut tuples = vec![Vec::new()];
        for &s in &rel.arity {
            let mut next = Vec::new();
            for t in &tuples {
                for (i, &ns) in node_sorts.iter().enumerate() {
                    if ns == s {
                        let mut u: Vec<usize> = t.clone();
                        u.push(i);
                        next.push(u);
                    }
                }
            }
            tuples = next;
        }
        out.extend(tuples.into_iter().map(|t| (r, t)));
    }
    out
}

fn subsets_upto(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &layer {
            let lo = s.last().map_or(0, |&x| x + 1);
            for i in lo..n {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

impl Doctrine for SyntacticDoctrine {
    type Base = ContextCat;
    type Elem = CanonicalQuery;

    fn base(&self) -> &ContextCat {
        &self.cat
    }
    fn top(&self, a: &Vec<usize>) -> CanonicalQuery {
        self.build(a, |_| {})
    }
    fn leq(&self, _a: &Vec<usize>, x: &CanonicalQuery, y: &CanonicalQuery) -> bool {
        let key = (x.clone(), y.clone());
        if let Some(&v) = self.leq_memo.lock().unwrap().get(&key) {
            return v;
        }
        let v = x.entails(y);
        self.leq_memo.lock().unwrap().insert(key, v);
        v
    }
    fn meet(&self, a: &Vec<usize>, x: &CanonicalQuery, y: &CanonicalQuery) -> Option<CanonicalQuery> {
        Some(self.build(a, |b| {
            let vars: Vec<usize> = (0..a.len()).collect();
            b.embed(x, &vars);
            b.embed(y, &vars);
        }))
    }
    fn reindex(&self, f: &Subst, x: &CanonicalQuery) -> Option<CanonicalQuery> {
        Some(self.build(&f.dom, |b| {
            let vars: Vec<usize> = f
                .terms
                .iter()
                .map(|t| match t {
                    STerm::Var(j) => b.item(Label::Var(*j)),
                    STerm::Const(k) => b.item(Label::Const(*k)),
                })
                .collect();
            b.embed(x, &vars);
        }))
    }
    fn delta(&self, a: &Vec<usize>) -> Option<CanonicalQuery> {
        let mut aa = a.clone();
        aa.extend(a);
        Some(self.build(&aa, |b| {
            for i in 0..a.len() {
                b.eq(i, a.len() + i);
            }
        }))
    }
    fn exists(&self, a: &Vec<usize>, bb: &Vec<usize>, x: &CanonicalQuery) -> Option<CanonicalQuery> {
        Some(self.build(a, |b| {
            let mut vars: Vec<usize> = (0..a.len()).collect();
            for &s in bb {
                let it = b.fresh(s, None);
                vars.push(it);
            }
            b.embed(x, &vars);
        }))
    }
    fn is_elementary(&self) -> bool {
        true
    }
    fn is_existential(&self) -> bool {
        true
    }
    fn fiber(&self, a: &Vec<usize>) -> Vec<CanonicalQuery> {
        self.enumerate(a)
    }
    fn fiber_complete(&self, _a: &Vec<usize>) -> bool {
        false
    }
    fn elem_label(&self, _a: &Vec<usize>, x: &CanonicalQuery) -> String {
        self.render(x)
    }
}

/// The syntactic doctrine tabulated over contexts of length at most
/// `ctx_bound`, with fibers cut at `size` atoms and bound variables;
/// operations leaving the listed classes become undefined cells.
pub fn materialize(sig: &Signature, ctx_bound: usize, size: usize) -> Result<Tabulation<SyntacticDoctrine>> {
    let d = syntactic_doctrine(sig, &[], ctx_bound, size)?;
    let objs = d.base().objects();
    Ok(tabulate_over(&d, objs))
}

/// The quantifier-free classes of a materialization.
pub fn horn_selection(tab: &Tabulation<SyntacticDoctrine>) -> Selection {
    Selection { sets: tab.reps.iter().map(|r| r.iter().enumerate().filter(|(_, q)| q.is_horn()).map(|(i, _)| i).collect::<BTreeSet<_>>()).collect() }
}

/// Tabulated materialization with its Horn selection.
pub fn materialize_with_horn(sig: &Signature, ctx_bound: usize, size: usize) -> Result<(TabDoctrine, Selection)> {
    let tab = materialize(sig, ctx_bound, size)?;
    let sel = horn_selection(&tab);
    Ok((tab.doctrine, sel))
}
