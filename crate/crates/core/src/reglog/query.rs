//! Conjunctive-query normal forms and entailment over the empty theory by
//! homomorphisms between canonical instances.

use super::syntax::{Context, Formula, Sequent, Signature, Term};
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// A node of the canonical instance: one class of the equations. Rigid
/// nodes carry context variables or constants; the others are bound.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub sort: usize,
    pub vars: Vec<usize>,
    pub consts: Vec<usize>,
    /// Display name of a bound node.
    pub name: Option<String>,
}

impl Node {
    pub fn is_rigid(&self) -> bool {
        !self.vars.is_empty() || !self.consts.is_empty()
    }
}

/// `∃ȳ. A` over a context: atoms on union-find classes, constants and
/// context variables substituted by their class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalQuery {
    /// Sorts of the context variables.
    pub ctx: Vec<usize>,
    /// Rigid nodes first (ordered by least label), then bound nodes.
    pub nodes: Vec<Node>,
    pub atoms: BTreeSet<(usize, Vec<usize>)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Label {
    Var(usize),
    Const(usize),
}

/// Accumulates items and equations, then collapses them into a query.
pub(crate) struct Builder<'a> {
    sig: &'a Signature,
    ctx: Vec<usize>,
    sorts: Vec<usize>,
    names: Vec<Option<String>>,
    parent: Vec<usize>,
    atoms: Vec<(usize, Vec<usize>)>,
}

impl<'a> Builder<'a> {
    pub(crate) fn new(sig: &'a Signature, ctx: &[usize]) -> Self {
        let mut sorts = ctx.to_vec();
        sorts.extend(sig.consts.iter().map(|c| c.sort));
        let n = sorts.len();
        Builder { sig, ctx: ctx.to_vec(), sorts, names: vec![None; n], parent: (0..n).collect(), atoms: Vec::new() }
    }

    pub(crate) fn item(&self, l: Label) -> usize {
        match l {
            Label::Var(i) => i,
            Label::Const(k) => self.ctx.len() + k,
        }
    }

    pub(crate) fn fresh(&mut self, sort: usize, name: Option<String>) -> usize {
        self.sorts.push(sort);
        self.names.push(name);
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub(crate) fn eq(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }

    pub(crate) fn atom(&mut self, r: usize, args: Vec<usize>) {
        self.atoms.push((r, args));
    }

    /// Adds the nodes and atoms of `q` (over the same constants) with its
    /// context variables sent to `vars` and its bound nodes made fresh.
    pub(crate) fn embed(&mut self, q: &CanonicalQuery, vars: &[usize]) -> Vec<usize> {
        let mut map = Vec::with_capacity(q.nodes.len());
        for n in &q.nodes {
            let it = if let Some(&v) = n.vars.first() {
                vars[v]
            } else if let Some(&k) = n.consts.first() {
                self.item(Label::Const(k))
            } else {
                self.fresh(n.sort, n.name.clone())
            };
            for &v in &n.vars {
                self.eq(it, vars[v]);
            }
            for &k in &n.consts {
                let c = self.item(Label::Const(k));
                self.eq(it, c);
            }
            map.push(it);
        }
        for (r, args) in &q.atoms {
            let a = args.iter().map(|&x| map[x]).collect();
            self.atom(*r, a);
        }
        map
    }

    pub(crate) fn finish(mut self) -> CanonicalQuery {
        let n = self.parent.len();
        let rigid_items = self.ctx.len() + self.sig.consts.len();
        let roots: Vec<usize> = (0..n).map(|i| self.find(i)).collect();
        // roots are least members, so rigid classes come first in root order
        let mut order: Vec<usize> = (0..n).filter(|&i| roots[i] == i).collect();
        order.sort_by_key(|&r| (r >= rigid_items, r));
        let mut index = vec![usize::MAX; n];
        let mut nodes = Vec::with_capacity(order.len());
        for (k, &r) in order.iter().enumerate() {
            index[r] = k;
            nodes.push(Node { sort: self.sorts[r], vars: Vec::new(), consts: Vec::new(), name: None });
        }
        for i in 0..n {
            let node = &mut nodes[index[roots[i]]];
            if i < self.ctx.len() {
                node.vars.push(i);
            } else if i < rigid_items {
                node.consts.push(i - self.ctx.len());
            } else if node.name.is_none() && !node.is_rigid() {
                node.name = self.names[i].clone();
            }
        }
        for node in &mut nodes {
            if node.is_rigid() {
                node.name = None;
            }
        }
        let atoms = self.atoms.iter().map(|(r, a)| (*r, a.iter().map(|&x| index[roots[x]]).collect())).collect();
        CanonicalQuery { ctx: self.ctx, nodes, atoms }
    }
}

/// Flattens `φ` in context `ctx` into its canonical query.
pub fn normalize(sig: &Signature, ctx: &Context, phi: &Formula) -> Result<CanonicalQuery> {
    let sorts: Vec<usize> = ctx.iter().map(|c| c.1).collect();
    let mut b = Builder::new(sig, &sorts);
    let mut scope: Vec<(String, usize)> = ctx.iter().enumerate().map(|(i, (v, _))| (v.clone(), i)).collect();
    fn term(b: &mut Builder, scope: &[(String, usize)], t: &Term) -> Result<usize> {
        match t {
            Term::Var(v) => scope
                .iter()
                .rev()
                .find(|(w, _)| w == v)
                .map(|x| x.1)
                .ok_or_else(|| Error::Sort(format!("variable `{v}` is not in context"))),
            Term::Const(k) => Ok(b.item(Label::Const(*k))),
            Term::App(g, _) => Err(Error::UnsupportedFunctionSymbol(b.sig.funs[*g].name.clone())),
        }
    }
    fn go(b: &mut Builder, scope: &mut Vec<(String, usize)>, f: &Formula) -> Result<()> {
        match f {
            Formula::Top => Ok(()),
            Formula::And(x, y) => {
                go(b, scope, x)?;
                go(b, scope, y)
            }
            Formula::Eq(x, y) => {
                let (i, j) = (term(b, scope, x)?, term(b, scope, y)?);
                b.eq(i, j);
                Ok(())
            }
            Formula::Atom(r, args) => {
                let a = args.iter().map(|t| term(b, scope, t)).collect::<Result<Vec<_>>>()?;
                b.atom(*r, a);
                Ok(())
            }
            Formula::Exists(v, s, body) => {
                let it = b.fresh(*s, Some(v.clone()));
                scope.push((v.clone(), it));
                let r = go(b, scope, body);
                scope.pop();
                r
            }
        }
    }
    go(&mut b, &mut scope, phi)?;
    let mut q = b.finish();
    q.fresh_names(sig, ctx);
    Ok(q)
}

impl CanonicalQuery {
    pub fn rigid_count(&self) -> usize {
        self.nodes.iter().take_while(|n| n.is_rigid()).count()
    }

    pub fn bound_count(&self) -> usize {
        self.nodes.len() - self.rigid_count()
    }

    pub fn is_horn(&self) -> bool {
        self.bound_count() == 0
    }

    pub fn var_node(&self, v: usize) -> usize {
        self.nodes.iter().position(|n| n.vars.contains(&v)).expect("every context variable has a node")
    }

    pub fn const_node(&self, k: usize) -> usize {
        self.nodes.iter().position(|n| n.consts.contains(&k)).expect("every constant has a node")
    }

    /// Bound names distinct from each other, from the context and from the
    /// signature, so that the rendered formula reparses to the same query.
    fn fresh_names(&mut self, sig: &Signature, ctx: &Context) {
        let mut used: BTreeSet<String> = ctx.iter().map(|c| c.0.clone()).collect();
        used.extend(sig.consts.iter().map(|c| c.name.clone()));
        used.extend(sig.rels.iter().map(|c| c.name.clone()));
        used.extend(sig.funs.iter().map(|c| c.name.clone()));
        used.insert("T".into());
        used.insert("exists".into());
        for n in self.nodes.iter_mut().filter(|n| !n.is_rigid()) {
            let base = n.name.clone().unwrap_or_else(|| "u".into());
            let mut name = base.clone();
            let mut k = 1;
            while used.contains(&name) {
                name = format!("{base}{k}");
                k += 1;
            }
            used.insert(name.clone());
            n.name = Some(name);
        }
    }

    /// Renders the query as a formula: binders in node order, then atoms,
    /// then the equations of every rigid class.
    pub fn to_formula(&self, sig: &Signature, ctx: &Context) -> Formula {
        let term = |i: usize| -> Term {
            let n = &self.nodes[i];
            if let Some(&v) = n.vars.first() {
                Term::Var(ctx[v].0.clone())
            } else if let Some(&k) = n.consts.first() {
                Term::Const(k)
            } else {
                Term::Var(n.name.clone().expect("bound nodes are named"))
            }
        };
        let mut parts = Vec::new();
        for (r, args) in &self.atoms {
            parts.push(Formula::Atom(*r, args.iter().map(|&a| term(a)).collect()));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            let head = term(i);
            let mut labels: Vec<Term> = n.vars.iter().map(|&v| Term::Var(ctx[v].0.clone())).collect();
            labels.extend(n.consts.iter().map(|&k| Term::Const(k)));
            for l in labels.into_iter().skip(1) {
                parts.push(Formula::Eq(head.clone(), l));
            }
        }
        let _ = sig;
        let binders: Vec<(String, usize)> = self.nodes.iter().filter(|n| !n.is_rigid()).map(|n| (n.name.clone().unwrap(), n.sort)).collect();
        Formula::exists(&binders, Formula::conj(parts))
    }

    /// The query with its bound nodes turned into fresh context variables
    /// appended after the existing ones.
    pub fn open(&self) -> CanonicalQuery {
        let mut q = self.clone();
        let mut next = q.ctx.len();
        for n in q.nodes.iter_mut() {
            if !n.is_rigid() {
                q.ctx.push(n.sort);
                n.vars.push(next);
                n.name = None;
                next += 1;
            }
        }
        q
    }

    /// Every candidate of `dst` for each node of `self`, rigid nodes being
    /// forced by their labels.
    fn candidates(&self, dst: &CanonicalQuery) -> Option<Vec<Vec<usize>>> {
        let mut out = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            if n.is_rigid() {
                let mut target: Option<usize> = None;
                for &v in &n.vars {
                    let t = dst.var_node(v);
                    if target.is_some_and(|x| x != t) {
                        return None;
                    }
                    target = Some(t);
                }
                for &k in &n.consts {
                    let t = dst.const_node(k);
                    if target.is_some_and(|x| x != t) {
                        return None;
                    }
                    target = Some(t);
                }
                out.push(vec![target.unwrap()]);
            } else {
                out.push((0..dst.nodes.len()).filter(|&j| dst.nodes[j].sort == n.sort).collect());
            }
        }
        Some(out)
    }

    /// The least homomorphism `self → dst` fixing context variables and
    /// constants, in lexicographic order of node images.
    pub fn homomorphism(&self, dst: &CanonicalQuery) -> Option<Vec<usize>> {
        self.homomorphism_avoiding(dst, None)
    }

    fn homomorphism_avoiding(&self, dst: &CanonicalQuery, avoid: Option<usize>) -> Option<Vec<usize>> {
        debug_assert_eq!(self.ctx, dst.ctx);
        let mut cands = self.candidates(dst)?;
        if let Some(a) = avoid {
            for c in cands.iter_mut() {
                c.retain(|&j| j != a);
            }
        }
        let n = self.nodes.len();
        // atoms become checkable once their last node is assigned
        let mut due: Vec<Vec<&(usize, Vec<usize>)>> = vec![Vec::new(); n];
        let mut ground = Vec::new();
        for at in &self.atoms {
            match at.1.iter().max() {
                Some(&m) => due[m].push(at),
                None => ground.push(at),
            }
        }
        if ground.iter().any(|at| !dst.atoms.contains(*at)) {
            return None;
        }
        let mut img = vec![0usize; n];
        fn search(k: usize, img: &mut Vec<usize>, cands: &[Vec<usize>], due: &[Vec<&(usize, Vec<usize>)>], dst: &CanonicalQuery) -> bool {
            if k == img.len() {
                return true;
            }
            for &c in &cands[k] {
                img[k] = c;
                let ok = due[k].iter().all(|(r, args)| dst.atoms.contains(&(*r, args.iter().map(|&a| img[a]).collect())));
                if ok && search(k + 1, img, cands, due, dst) {
                    return true;
                }
            }
            false
        }
        search(0, &mut img, &cands, &due, dst).then_some(img)
    }

    /// `self ⊢ other` over the empty theory.
    pub fn entails(&self, other: &CanonicalQuery) -> bool {
        other.homomorphism(self).is_some()
    }

    /// The substructure on the listed nodes.
    fn restrict(&self, keep: &[bool]) -> CanonicalQuery {
        let mut index = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if keep[i] {
                index[i] = nodes.len();
                nodes.push(n.clone());
            }
        }
        let atoms = self
            .atoms
            .iter()
            .filter(|(_, a)| a.iter().all(|&x| keep[x]))
            .map(|(r, a)| (*r, a.iter().map(|&x| index[x]).collect()))
            .collect();
        CanonicalQuery { ctx: self.ctx.clone(), nodes, atoms }
    }

    /// The core: the least equivalent retract, bound nodes only removed.
    pub fn core(&self) -> CanonicalQuery {
        let mut q = self.clone();
        'outer: loop {
            for v in (q.rigid_count()..q.nodes.len()).rev() {
                if let Some(h) = q.homomorphism_avoiding(&q, Some(v)) {
                    let mut keep = vec![false; q.nodes.len()];
                    for &x in &h {
                        keep[x] = true;
                    }
                    for (i, n) in q.nodes.iter().enumerate() {
                        keep[i] |= n.is_rigid();
                    }
                    q = q.restrict(&keep);
                    continue 'outer;
                }
            }
            return q;
        }
    }

    /// The core under the least relabelling of its bound nodes, with
    /// standard names: equal exactly for equivalent queries.
    pub fn canonical(&self) -> CanonicalQuery {
        let q = self.core();
        let r = q.rigid_count();
        let b = q.nodes.len() - r;
        let relabel = |perm: &[usize]| -> Vec<(usize, Vec<usize>)> {
            // perm[k] = old index of the k-th bound node
            let mut inv = vec![0usize; q.nodes.len()];
            for i in 0..r {
                inv[i] = i;
            }
            for (k, &old) in perm.iter().enumerate() {
                inv[old] = r + k;
            }
            let mut v: Vec<(usize, Vec<usize>)> = q.atoms.iter().map(|(rel, a)| (*rel, a.iter().map(|&x| inv[x]).collect())).collect();
            v.sort();
            v
        };
        // refine by an invariant, then try every order inside each tie class
        let key = |i: usize| -> (usize, Vec<(usize, Vec<i64>)>) {
            let mut occ: Vec<(usize, Vec<i64>)> = q
                .atoms
                .iter()
                .filter(|(_, a)| a.contains(&i))
                .map(|(rel, a)| (*rel, a.iter().map(|&x| if x == i { -1 } else if x < r { x as i64 } else { -2 }).collect()))
                .collect();
            occ.sort();
            (q.nodes[i].sort, occ)
        };
        let mut bound: Vec<usize> = (r..r + b).collect();
        bound.sort_by_key(|&i| key(i));
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for &i in &bound {
            match groups.last_mut() {
                Some(g) if key(g[0]) == key(i) => g.push(i),
                _ => groups.push(vec![i]),
            }
        }
        let mut best: Option<(Vec<(usize, Vec<usize>)>, Vec<usize>)> = None;
        let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
        for g in &groups {
            let gp = permutations(g);
            let mut next = Vec::with_capacity(perms.len() * gp.len());
            for p in &perms {
                for x in &gp {
                    let mut y = p.clone();
                    y.extend(x);
                    next.push(y);
                }
            }
            perms = next;
        }
        for p in perms {
            let v = relabel(&p);
            if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                best = Some((v, p));
            }
        }
        let (atoms, perm) = best.unwrap();
        let mut nodes: Vec<Node> = q.nodes[..r].to_vec();
        for (k, &old) in perm.iter().enumerate() {
            let mut n = q.nodes[old].clone();
            n.name = Some(format!("u{k}"));
            nodes.push(n);
        }
        CanonicalQuery { ctx: q.ctx.clone(), nodes, atoms: atoms.into_iter().collect() }
    }

    /// The canonical instance as a finite structure.
    pub fn instance(&self, sig: &Signature, ctx: &Context) -> Structure {
        let label = |i: usize| -> String {
            let n = &self.nodes[i];
            let mut ls: Vec<String> = n.vars.iter().map(|&v| ctx[v].0.clone()).collect();
            ls.extend(n.consts.iter().map(|&k| sig.consts[k].name.clone()));
            if ls.is_empty() {
                ls.push(n.name.clone().unwrap_or_else(|| format!("u{i}")));
            }
            ls.join("=")
        };
        let elements = (0..self.nodes.len()).map(|i| (label(i), sig.sorts[self.nodes[i].sort].clone())).collect();
        let mut relations: BTreeMap<String, Vec<Vec<usize>>> = sig.rels.iter().map(|r| (r.name.clone(), Vec::new())).collect();
        for (r, a) in &self.atoms {
            relations.get_mut(&sig.rels[*r].name).unwrap().push(a.clone());
        }
        let constants = sig.consts.iter().enumerate().map(|(k, c)| (c.name.clone(), self.const_node(k))).collect();
        let assignment = ctx.iter().enumerate().map(|(v, c)| (c.0.clone(), self.var_node(v))).collect();
        Structure { elements, relations, constants, assignment }
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// A finite structure with an assignment of the context variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Structure {
    /// `(label, sort)` of each element.
    pub elements: Vec<(String, String)>,
    pub relations: BTreeMap<String, Vec<Vec<usize>>>,
    pub constants: BTreeMap<String, usize>,
    pub assignment: BTreeMap<String, usize>,
}

/// A witness term for a bound variable of the succedent: a context
/// variable, a constant, or a bound element of the antecedent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub var: String,
    pub term: String,
    /// Whether the term is a context variable or a constant.
    pub rigid: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Entailment {
    pub verdict: bool,
    pub witness: Option<Vec<Witness>>,
    pub countermodel: Option<Structure>,
    /// The node map `ψ → φ` behind the witness.
    #[serde(skip)]
    pub hom: Option<Vec<usize>>,
}

/// Decides `φ ⊢_Γ ψ` over the empty theory.
pub fn entails_empty(sig: &Signature, axioms: &[Sequent], ctx: &Context, phi: &Formula, psi: &Formula) -> Result<Entailment> {
    if !axioms.is_empty() {
        return Err(Error::UnsupportedTheory(format!("{} axioms present; only the empty theory is decided", axioms.len())));
    }
    let p = normalize(sig, ctx, phi)?;
    let q = normalize(sig, ctx, psi)?;
    Ok(entails_queries(sig, ctx, &p, &q))
}

pub fn entails_queries(sig: &Signature, ctx: &Context, phi: &CanonicalQuery, psi: &CanonicalQuery) -> Entailment {
    match psi.homomorphism(phi) {
        Some(h) => {
            let label = |j: usize| -> (String, bool) {
                let n = &phi.nodes[j];
                if let Some(&v) = n.vars.first() {
                    (ctx[v].0.clone(), true)
                } else if let Some(&k) = n.consts.first() {
                    (sig.consts[k].name.clone(), true)
                } else {
                    (n.name.clone().unwrap_or_default(), false)
                }
            };
            let witness = psi
                .nodes
                .iter()
                .enumerate()
                .filter(|(_, n)| !n.is_rigid())
                .map(|(i, n)| {
                    let (term, rigid) = label(h[i]);
                    Witness { var: n.name.clone().unwrap_or_default(), term, rigid }
                })
                .collect();
            Entailment { verdict: true, witness: Some(witness), countermodel: None, hom: Some(h) }
        }
        None => Entailment { verdict: false, witness: None, countermodel: Some(phi.instance(sig, ctx)), hom: None },
    }
}

/// The succedent's matrix with bound nodes replaced by their images under
/// `hom`, over the antecedent's opened context. The pair `(φ opened, ψ[h])`
/// is quantifier-free on the right.
pub fn instantiate(sig: &Signature, phi: &CanonicalQuery, psi: &CanonicalQuery, hom: &[usize]) -> (CanonicalQuery, CanonicalQuery) {
    let open = phi.open();
    let mut b = Builder::new(sig, &open.ctx);
    // each node of φ opened is named by its first label
    let item_of = |b: &Builder, j: usize| -> usize {
        let n = &open.nodes[j];
        match (n.vars.first(), n.consts.first()) {
            (Some(&v), _) => b.item(Label::Var(v)),
            (None, Some(&k)) => b.item(Label::Const(k)),
            _ => unreachable!("opened queries have no bound nodes"),
        }
    };
    for (i, n) in psi.nodes.iter().enumerate() {
        let t = item_of(&b, hom[i]);
        for &v in &n.vars {
            b.eq(t, v);
        }
        for &k in &n.consts {
            let c = b.item(Label::Const(k));
            b.eq(t, c);
        }
    }
    for (r, args) in &psi.atoms {
        let a = args.iter().map(|&x| item_of(&b, hom[x])).collect();
        b.atom(*r, a);
    }
    (open, b.finish())
}
