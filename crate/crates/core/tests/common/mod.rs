//! Independent oracles shared by the logic tests: bounded proof search,
//! finite model checking and a seeded random sequent corpus.

#![allow(dead_code)]

use doctrina::fixtures;
use doctrina::reglog::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn sig_r() -> Signature {
    parse_theory(fixtures::SIG_R).unwrap().0
}

// ---------------------------------------------------------------------
// Bounded sequent-calculus proof search, written against the formula
// syntax: left rules decompose ∧, ⊤ and ∃ (fresh eigenvariables), right
// rules instantiate ∃ with available terms; atoms and equations close
// against the left context modulo its equations.

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum OTerm {
    V(String),
    C(usize),
}

fn oterm(t: &Term) -> OTerm {
    match t {
        Term::Var(v) => OTerm::V(v.clone()),
        Term::Const(c) => OTerm::C(*c),
        Term::App(..) => panic!("relational signatures only"),
    }
}

fn rename_binders(f: &Formula, n: &mut usize) -> Formula {
    fn go(f: &Formula, n: &mut usize, env: &mut Vec<(String, String)>) -> Formula {
        let t = |t: &Term, env: &Vec<(String, String)>| match t {
            Term::Var(v) => Term::Var(env.iter().rev().find(|(a, _)| a == v).map_or(v.clone(), |(_, b)| b.clone())),
            other => other.clone(),
        };
        match f {
            Formula::Top => Formula::Top,
            Formula::And(a, b) => Formula::And(Box::new(go(a, n, env)), Box::new(go(b, n, env))),
            Formula::Eq(a, b) => Formula::Eq(t(a, env), t(b, env)),
            Formula::Atom(r, args) => Formula::Atom(*r, args.iter().map(|a| t(a, env)).collect()),
            Formula::Exists(v, s, b) => {
                let fresh = format!("#{n}");
                *n += 1;
                env.push((v.clone(), fresh.clone()));
                let body = go(b, n, env);
                env.pop();
                Formula::Exists(fresh, *s, Box::new(body))
            }
        }
    }
    go(f, n, &mut Vec::new())
}

fn subst(f: &Formula, v: &str, by: &Term) -> Formula {
    let t = |x: &Term| if *x == Term::Var(v.into()) { by.clone() } else { x.clone() };
    match f {
        Formula::Top => Formula::Top,
        Formula::And(a, b) => Formula::And(Box::new(subst(a, v, by)), Box::new(subst(b, v, by))),
        Formula::Eq(a, b) => Formula::Eq(t(a), t(b)),
        Formula::Atom(r, args) => Formula::Atom(*r, args.iter().map(t).collect()),
        Formula::Exists(w, s, b) if w != v => Formula::Exists(w.clone(), *s, Box::new(subst(b, v, by))),
        other => other.clone(),
    }
}

struct Prover<'a> {
    sig: &'a Signature,
    terms: Vec<(OTerm, usize)>,
    class: Vec<usize>,
    atoms: Vec<(usize, Vec<OTerm>)>,
    budget: usize,
}

impl Prover<'_> {
    fn cls(&self, t: &OTerm) -> usize {
        self.class[self.terms.iter().position(|(u, _)| u == t).unwrap()]
    }

    fn right(&mut self, f: &Formula) -> Option<bool> {
        if self.budget == 0 {
            return None;
        }
        self.budget -= 1;
        Some(match f {
            Formula::Top => true,
            Formula::And(a, b) => self.right(a)? && self.right(b)?,
            Formula::Eq(a, b) => self.cls(&oterm(a)) == self.cls(&oterm(b)),
            Formula::Atom(r, args) => {
                let want: Vec<usize> = args.iter().map(|a| self.cls(&oterm(a))).collect();
                self.atoms.iter().any(|(q, xs)| q == r && xs.iter().map(|x| self.cls(x)).collect::<Vec<_>>() == want)
            }
            Formula::Exists(v, s, b) => {
                let cands: Vec<OTerm> = self.terms.iter().filter(|(_, ts)| ts == s).map(|(t, _)| t.clone()).collect();
                for t in cands {
                    let by = match &t {
                        OTerm::V(x) => Term::Var(x.clone()),
                        OTerm::C(c) => Term::Const(*c),
                    };
                    if self.right(&subst(b, v, &by))? {
                        return Some(true);
                    }
                }
                false
            }
        })
    }
}

/// `Some(provable)` or `None` when the search budget runs out.
pub fn oracle(sig: &Signature, ctx: &Context, lhs: &Formula, rhs: &Formula, budget: usize) -> Option<bool> {
    let mut n = 0;
    let lhs = rename_binders(lhs, &mut n);
    let rhs = rename_binders(rhs, &mut n);
    let mut terms: Vec<(OTerm, usize)> = ctx.iter().map(|(v, s)| (OTerm::V(v.clone()), *s)).collect();
    terms.extend(sig.consts.iter().enumerate().map(|(k, c)| (OTerm::C(k), c.sort)));
    let mut atoms = Vec::new();
    let mut eqs = Vec::new();
    let mut todo = vec![lhs];
    while let Some(f) = todo.pop() {
        match f {
            Formula::Top => {}
            Formula::And(a, b) => {
                todo.push(*a);
                todo.push(*b);
            }
            Formula::Exists(v, s, b) => {
                terms.push((OTerm::V(v.clone()), s));
                todo.push(*b);
            }
            Formula::Eq(a, b) => eqs.push((oterm(&a), oterm(&b))),
            Formula::Atom(r, args) => atoms.push((r, args.iter().map(oterm).collect())),
        }
    }
    // equivalence closure by repeated relabelling
    let mut class: Vec<usize> = (0..terms.len()).collect();
    let pos = |t: &OTerm| terms.iter().position(|(u, _)| u == t).unwrap();
    loop {
        let mut changed = false;
        for (a, b) in &eqs {
            let (ca, cb) = (class[pos(a)], class[pos(b)]);
            if ca != cb {
                let (lo, hi) = (ca.min(cb), ca.max(cb));
                for c in class.iter_mut() {
                    if *c == hi {
                        *c = lo;
                    }
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut p = Prover { sig, terms, class, atoms, budget };
    let _ = p.sig;
    p.right(&rhs)
}

// ---------------------------------------------------------------------
// Model checking on finite structures.

pub fn holds(sig: &Signature, m: &Structure, env: &mut Vec<(String, usize)>, f: &Formula) -> bool {
    let val = |t: &Term, env: &Vec<(String, usize)>| -> usize {
        match t {
            Term::Var(v) => env.iter().rev().find(|(w, _)| w == v).map(|x| x.1).unwrap(),
            Term::Const(c) => m.constants[&sig.consts[*c].name],
            Term::App(..) => unreachable!(),
        }
    };
    match f {
        Formula::Top => true,
        Formula::And(a, b) => holds(sig, m, env, a) && holds(sig, m, env, b),
        Formula::Eq(a, b) => val(a, env) == val(b, env),
        Formula::Atom(r, args) => {
            let tuple: Vec<usize> = args.iter().map(|a| val(a, env)).collect();
            m.relations[&sig.rels[*r].name].contains(&tuple)
        }
        Formula::Exists(v, s, b) => (0..m.elements.len()).filter(|&e| m.elements[e].1 == sig.sorts[*s]).any(|e| {
            env.push((v.clone(), e));
            let r = holds(sig, m, env, b);
            env.pop();
            r
        }),
    }
}

pub fn satisfies(sig: &Signature, m: &Structure, f: &Formula) -> bool {
    let mut env: Vec<(String, usize)> = m.assignment.iter().map(|(k, v)| (k.clone(), *v)).collect();
    holds(sig, m, &mut env, f)
}

// ---------------------------------------------------------------------
// Random sequents: at most four atoms and three variables in total.

pub fn random_formula(rng: &mut ChaCha8Rng, sig: &Signature, ctx: &Context, budget_vars: usize) -> Formula {
    let nb = rng.gen_range(0..=budget_vars);
    let bound: Vec<String> = (0..nb).map(|i| format!("b{i}")).collect();
    let natoms = rng.gen_range(0..=4usize.min(2 + nb));
    let mut pool: Vec<Term> = ctx.iter().map(|(v, _)| Term::Var(v.clone())).collect();
    pool.extend((0..sig.consts.len()).map(Term::Const));
    pool.extend(bound.iter().map(|b| Term::Var(b.clone())));
    let mut atoms = Vec::new();
    if !pool.is_empty() {
        for _ in 0..natoms {
            let a = pool[rng.gen_range(0..pool.len())].clone();
            let b = pool[rng.gen_range(0..pool.len())].clone();
            if rng.gen_bool(0.2) {
                atoms.push(Formula::Eq(a, b));
            } else {
                atoms.push(Formula::Atom(0, vec![a, b]));
            }
        }
    }
    // an atom mentioning b_k sits under the binder of b_k or deeper
    let level = |f: &Formula| -> usize {
        let ts: Vec<&Term> = match f {
            Formula::Eq(a, b) => vec![a, b],
            Formula::Atom(_, args) => args.iter().collect(),
            _ => Vec::new(),
        };
        ts.iter().filter_map(|t| bound.iter().position(|b| **t == Term::Var(b.clone()))).map(|i| i + 1).max().unwrap_or(0)
    };
    let mut layers: Vec<Vec<Formula>> = vec![Vec::new(); nb + 1];
    for a in atoms {
        let lo = level(&a);
        let at = rng.gen_range(lo..=nb);
        layers[at].push(a);
    }
    let mut f = Formula::conj(layers[nb].clone());
    for k in (0..nb).rev() {
        f = Formula::conj(layers[k].clone()).and(Formula::Exists(bound[k].clone(), 0, Box::new(f)));
    }
    f
}

pub fn random_sequent(rng: &mut ChaCha8Rng, sig: &Signature) -> (Context, Formula, Formula) {
    let k = rng.gen_range(0..=2usize);
    let ctx: Context = (0..k).map(|i| (var_name(i), 0)).collect();
    let phi = random_formula(rng, sig, &ctx, 3 - k);
    let psi = random_formula(rng, sig, &ctx, 3 - k);
    (ctx, phi, psi)
}

pub fn corpus() -> (Signature, Vec<(Context, Formula, Formula)>) {
    let sig = sig_r();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let c = (0..200).map(|_| random_sequent(&mut rng, &sig)).collect();
    (sig, c)
}
