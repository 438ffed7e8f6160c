//! Signatures, formulas of the (⊤, ∧, =, ∃) fragment, sequents and the
//! line-oriented theory format.

use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelSym {
    pub name: String,
    pub arity: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstSym {
    pub name: String,
    pub sort: usize,
}

/// Function symbols of positive arity are accepted by the parser only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunSym {
    pub name: String,
    pub args: Vec<usize>,
    pub sort: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub sorts: Vec<String>,
    pub rels: Vec<RelSym>,
    pub consts: Vec<ConstSym>,
    pub funs: Vec<FunSym>,
}

impl Signature {
    pub fn sort(&self, name: &str) -> Option<usize> {
        self.sorts.iter().position(|s| s == name)
    }
    pub fn rel(&self, name: &str) -> Option<usize> {
        self.rels.iter().position(|r| r.name == name)
    }
    pub fn constant(&self, name: &str) -> Option<usize> {
        self.consts.iter().position(|c| c.name == name)
    }
    pub fn fun(&self, name: &str) -> Option<usize> {
        self.funs.iter().position(|f| f.name == name)
    }
    fn taken(&self, name: &str) -> bool {
        self.sort(name).is_some() || self.rel(name).is_some() || self.constant(name).is_some() || self.fun(name).is_some()
    }
    /// Whether some function symbol of positive arity is declared.
    pub fn has_functions(&self) -> bool {
        !self.funs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(usize),
    App(usize, Vec<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    And(Box<Formula>, Box<Formula>),
    Eq(Term, Term),
    Atom(usize, Vec<Term>),
    Exists(String, usize, Box<Formula>),
}

impl Formula {
    pub fn and(self, other: Formula) -> Formula {
        match (self, other) {
            (Formula::Top, g) => g,
            (f, Formula::Top) => f,
            (f, g) => Formula::And(Box::new(f), Box::new(g)),
        }
    }

    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().fold(Formula::Top, Formula::and)
    }

    pub fn exists(vars: &[(String, usize)], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |b, (v, s)| Formula::Exists(v.clone(), *s, Box::new(b)))
    }

    /// Whether the formula contains no quantifier.
    pub fn is_horn(&self) -> bool {
        match self {
            Formula::Top | Formula::Eq(..) | Formula::Atom(..) => true,
            Formula::And(a, b) => a.is_horn() && b.is_horn(),
            Formula::Exists(..) => false,
        }
    }

    pub fn atoms(&self) -> usize {
        match self {
            Formula::Top => 0,
            Formula::Eq(..) | Formula::Atom(..) => 1,
            Formula::And(a, b) => a.atoms() + b.atoms(),
            Formula::Exists(_, _, b) => b.atoms(),
        }
    }
}

pub type Context = Vec<(String, usize)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequent {
    pub ctx: Context,
    pub lhs: Formula,
    pub rhs: Formula,
    pub line: usize,
}

/// Pretty printing relative to a signature.
pub struct Show<'a, T>(pub &'a Signature, pub &'a T);

impl fmt::Display for Show<'_, Term> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.1 {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => f.write_str(&self.0.consts[*c].name),
            Term::App(g, args) => {
                write!(f, "{}(", self.0.funs[*g].name)?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", Show(self.0, a))?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Show<'_, Formula> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = self.0;
        match self.1 {
            Formula::Top => f.write_str("T"),
            Formula::Eq(a, b) => write!(f, "{} = {}", Show(sig, a), Show(sig, b)),
            Formula::Atom(r, args) => {
                f.write_str(&sig.rels[*r].name)?;
                if args.is_empty() {
                    return Ok(());
                }
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", Show(sig, a))?;
                }
                f.write_str(")")
            }
            Formula::And(a, b) => {
                let wrap = |x: &Formula| matches!(x, Formula::Exists(..));
                let side = |f: &mut fmt::Formatter<'_>, x: &Formula| {
                    if wrap(x) {
                        write!(f, "({})", Show(sig, x))
                    } else {
                        write!(f, "{}", Show(sig, x))
                    }
                };
                side(f, a)?;
                f.write_str(" & ")?;
                side(f, b)
            }
            Formula::Exists(v, s, b) => {
                write!(f, "exists {v}:{}", sig.sorts[*s])?;
                let mut body = &**b;
                while let Formula::Exists(v, s, b) = body {
                    write!(f, ", {v}:{}", sig.sorts[*s])?;
                    body = b;
                }
                write!(f, ". {}", Show(sig, body))
            }
        }
    }
}

pub fn show_context(sig: &Signature, ctx: &Context) -> String {
    ctx.iter().map(|(v, s)| format!("{v}:{}", sig.sorts[*s])).collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Colon,
    Dot,
    Amp,
    Eq,
    Pipe,
    Turnstile,
    Arrow,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    col: usize,
}

fn lex(line: usize, text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '.' => Some(Tok::Dot),
            '&' => Some(Tok::Amp),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, col });
            i += 1;
        } else if c == '|' {
            if chars.get(i + 1) == Some(&'-') {
                out.push(Spanned { tok: Tok::Turnstile, col });
                i += 2;
            } else {
                out.push(Spanned { tok: Tok::Pipe, col });
                i += 1;
            }
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Spanned { tok: Tok::Arrow, col });
            i += 2;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push(Spanned { tok: Tok::Ident(chars[start..i].iter().collect()), col });
        } else {
            return Err(Error::Syntax { line, col, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    sig: &'a Signature,
    toks: Vec<Spanned>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Parser<'a> {
    fn new(sig: &'a Signature, line: usize, text: &str) -> Result<Self> {
        Ok(Parser { sig, toks: lex(line, text)?, pos: 0, line, end_col: text.chars().count() + 1 })
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let col = self.toks.get(self.pos).map_or(self.end_col, |t| t.col);
        Err(Error::Syntax { line: self.line, col, msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn done(&self) -> bool {
        self.pos == self.toks.len()
    }

    fn sort(&mut self) -> Result<usize> {
        let name = self.ident("a sort")?;
        match self.sig.sort(&name) {
            Some(s) => Ok(s),
            None => Err(Error::Sort(format!("unknown sort `{name}` at {}:{}", self.line, self.toks[self.pos - 1].col))),
        }
    }

    /// `x:s, y:s` up to (not including) `stop`.
    fn context(&mut self, stop: &Tok) -> Result<Context> {
        let mut ctx = Vec::new();
        while self.peek() != Some(stop) {
            if !ctx.is_empty() {
                self.expect(&Tok::Comma, "`,`")?;
            }
            let v = self.ident("a variable")?;
            self.expect(&Tok::Colon, "`:`")?;
            let s = self.sort()?;
            if ctx.iter().any(|(w, _)| *w == v) {
                return Err(Error::Sort(format!("variable `{v}` declared twice")));
            }
            ctx.push((v, s));
        }
        Ok(ctx)
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat(&Tok::Amp) {
            let g = self.unary()?;
            f = Formula::And(Box::new(f), Box::new(g));
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(s)) if s == "T" && self.peek_at(1) != Some(&Tok::Eq) => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(Tok::Ident(s)) if s == "exists" => {
                self.pos += 1;
                let mut vars = Vec::new();
                loop {
                    let v = self.ident("a bound variable")?;
                    self.expect(&Tok::Colon, "`:` and a sort")?;
                    let s = self.sort()?;
                    vars.push((v, s));
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(&Tok::Dot, "`.`")?;
                let body = self.formula()?;
                Ok(Formula::exists(&vars, body))
            }
            Some(Tok::Ident(s)) if self.sig.rel(s).is_some() && self.peek_at(1) != Some(&Tok::Eq) => {
                let r = self.sig.rel(s).unwrap();
                self.pos += 1;
                let mut args = Vec::new();
                if self.eat(&Tok::LParen) {
                    loop {
                        args.push(self.term()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(&Tok::RParen, "`)`")?;
                }
                Ok(Formula::Atom(r, args))
            }
            Some(Tok::Ident(_)) => {
                let a = self.term()?;
                self.expect(&Tok::Eq, "`=`")?;
                let b = self.term()?;
                Ok(Formula::Eq(a, b))
            }
            _ => self.err("expected a formula"),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let name = self.ident("a term")?;
        if let Some(g) = self.sig.fun(&name) {
            let mut args = Vec::new();
            if self.eat(&Tok::LParen) {
                loop {
                    args.push(self.term()?);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(&Tok::RParen, "`)`")?;
            }
            return Ok(Term::App(g, args));
        }
        if let Some(c) = self.sig.constant(&name) {
            return Ok(Term::Const(c));
        }
        Ok(Term::Var(name))
    }
}

/// Parses a theory file into its signature and axioms.
pub fn parse_theory(text: &str) -> Result<(Signature, Vec<Sequent>)> {
    let mut sig = Signature::default();
    let mut axioms = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let mut p = Parser::new(&sig, line, content)?;
        let kw = p.ident("a declaration")?;
        let fresh = |p: &Parser, name: &str| -> Result<()> {
            if p.sig.taken(name) {
                Err(Error::Sort(format!("name `{name}` declared twice (line {line})")))
            } else {
                Ok(())
            }
        };
        match kw.as_str() {
            "sort" => {
                let name = p.ident("a sort name")?;
                fresh(&p, &name)?;
                if !p.done() {
                    return p.err("trailing input");
                }
                sig.sorts.push(name);
            }
            "rel" => {
                let name = p.ident("a relation name")?;
                fresh(&p, &name)?;
                p.expect(&Tok::Colon, "`:`")?;
                let mut arity = Vec::new();
                while !p.done() {
                    arity.push(p.sort()?);
                }
                sig.rels.push(RelSym { name, arity });
            }
            "const" => {
                let name = p.ident("a constant name")?;
                fresh(&p, &name)?;
                p.expect(&Tok::Colon, "`:`")?;
                let sort = p.sort()?;
                if !p.done() {
                    return p.err("trailing input");
                }
                sig.consts.push(ConstSym { name, sort });
            }
            "fun" => {
                let name = p.ident("a function name")?;
                fresh(&p, &name)?;
                p.expect(&Tok::Colon, "`:`")?;
                let mut args = Vec::new();
                while p.peek() != Some(&Tok::Arrow) {
                    if p.done() {
                        return p.err("expected `->`");
                    }
                    args.push(p.sort()?);
                }
                p.expect(&Tok::Arrow, "`->`")?;
                let sort = p.sort()?;
                if !p.done() {
                    return p.err("trailing input");
                }
                if args.is_empty() {
                    sig.consts.push(ConstSym { name, sort });
                } else {
                    sig.funs.push(FunSym { name, args, sort });
                }
            }
            "axiom" => {
                let ctx = p.context(&Tok::Pipe)?;
                p.expect(&Tok::Pipe, "`|`")?;
                let lhs = p.formula()?;
                p.expect(&Tok::Turnstile, "`|-`")?;
                let rhs = p.formula()?;
                if !p.done() {
                    return p.err("trailing input");
                }
                let seq = Sequent { ctx, lhs, rhs, line };
                check_sequent(&sig, &seq)?;
                axioms.push(seq);
            }
            other => return Err(Error::Syntax { line, col: 1, msg: format!("unknown declaration `{other}`") }),
        }
    }
    Ok((sig, axioms))
}

/// Parses a formula; with `ctx` `None` the context is inferred from the
/// free variables in order of first occurrence.
pub fn parse_formula(sig: &Signature, ctx: Option<&Context>, text: &str) -> Result<(Context, Formula)> {
    let mut p = Parser::new(sig, 1, text)?;
    let f = p.formula()?;
    if !p.done() {
        return p.err("trailing input");
    }
    let ctx = match ctx {
        Some(c) => c.clone(),
        None => infer_context(sig, &[&f])?,
    };
    check_formula(sig, &ctx, &f)?;
    Ok((ctx, f))
}

/// Parses `ctx | phi |- psi` or `phi |- psi` (context inferred).
pub fn parse_sequent(sig: &Signature, text: &str) -> Result<Sequent> {
    let mut p = Parser::new(sig, 1, text)?;
    let explicit = p.toks.iter().any(|t| t.tok == Tok::Pipe);
    let ctx = if explicit {
        let c = p.context(&Tok::Pipe)?;
        p.expect(&Tok::Pipe, "`|`")?;
        Some(c)
    } else {
        None
    };
    let lhs = p.formula()?;
    p.expect(&Tok::Turnstile, "`|-`")?;
    let rhs = p.formula()?;
    if !p.done() {
        return p.err("trailing input");
    }
    let ctx = match ctx {
        Some(c) => c,
        None => infer_context(sig, &[&lhs, &rhs])?,
    };
    let seq = Sequent { ctx, lhs, rhs, line: 1 };
    check_sequent(sig, &seq)?;
    Ok(seq)
}

pub fn check_sequent(sig: &Signature, s: &Sequent) -> Result<()> {
    check_formula(sig, &s.ctx, &s.lhs)?;
    check_formula(sig, &s.ctx, &s.rhs)
}

fn term_sort(sig: &Signature, scope: &[(String, usize)], t: &Term) -> Result<usize> {
    match t {
        Term::Var(v) => scope
            .iter()
            .rev()
            .find(|(w, _)| w == v)
            .map(|(_, s)| *s)
            .ok_or_else(|| Error::Sort(format!("variable `{v}` is not in context"))),
        Term::Const(c) => Ok(sig.consts[*c].sort),
        Term::App(g, args) => {
            let fs = &sig.funs[*g];
            if args.len() != fs.args.len() {
                return Err(Error::Sort(format!("`{}` expects {} arguments", fs.name, fs.args.len())));
            }
            for (a, want) in args.iter().zip(&fs.args) {
                let got = term_sort(sig, scope, a)?;
                if got != *want {
                    return Err(Error::Sort(format!("argument of `{}` has sort {}, expected {}", fs.name, sig.sorts[got], sig.sorts[*want])));
                }
            }
            Ok(fs.sort)
        }
    }
}

/// Well-sortedness with free variables drawn from `ctx`.
pub fn check_formula(sig: &Signature, ctx: &Context, f: &Formula) -> Result<()> {
    fn go(sig: &Signature, scope: &mut Vec<(String, usize)>, f: &Formula) -> Result<()> {
        match f {
            Formula::Top => Ok(()),
            Formula::And(a, b) => {
                go(sig, scope, a)?;
                go(sig, scope, b)
            }
            Formula::Eq(a, b) => {
                let (sa, sb) = (term_sort(sig, scope, a)?, term_sort(sig, scope, b)?);
                if sa != sb {
                    return Err(Error::Sort(format!("equation between sorts {} and {}", sig.sorts[sa], sig.sorts[sb])));
                }
                Ok(())
            }
            Formula::Atom(r, args) => {
                let rs = &sig.rels[*r];
                if args.len() != rs.arity.len() {
                    return Err(Error::Sort(format!("`{}` expects {} arguments", rs.name, rs.arity.len())));
                }
                for (a, want) in args.iter().zip(&rs.arity) {
                    let got = term_sort(sig, scope, a)?;
                    if got != *want {
                        return Err(Error::Sort(format!("argument of `{}` has sort {}, expected {}", rs.name, sig.sorts[got], sig.sorts[*want])));
                    }
                }
                Ok(())
            }
            Formula::Exists(v, s, b) => {
                scope.push((v.clone(), *s));
                let r = go(sig, scope, b);
                scope.pop();
                r
            }
        }
    }
    let mut scope = ctx.clone();
    go(sig, &mut scope, f)
}

/// Sorts of free variables read off atom positions and equations.
fn infer_context(sig: &Signature, fs: &[&Formula]) -> Result<Context> {
    let mut order: Vec<String> = Vec::new();
    let mut known: BTreeMap<String, usize> = BTreeMap::new();
    let mut eqs: Vec<(Term, Term)> = Vec::new();
    fn collect(sig: &Signature, bound: &mut Vec<(String, usize)>, f: &Formula, order: &mut Vec<String>, known: &mut BTreeMap<String, usize>, eqs: &mut Vec<(Term, Term)>) -> Result<()> {
        let note = |t: &Term, want: Option<usize>, order: &mut Vec<String>, known: &mut BTreeMap<String, usize>| -> Result<()> {
            if let Term::Var(v) = t {
                if bound.iter().any(|(w, _)| w == v) {
                    return Ok(());
                }
                if !order.contains(v) {
                    order.push(v.clone());
                }
                if let Some(s) = want {
                    if let Some(&old) = known.get(v) {
                        if old != s {
                            return Err(Error::Sort(format!("variable `{v}` used at sorts {} and {}", sig.sorts[old], sig.sorts[s])));
                        }
                    }
                    known.insert(v.clone(), s);
                }
            }
            Ok(())
        };
        match f {
            Formula::Top => Ok(()),
            Formula::And(a, b) => {
                collect(sig, bound, a, order, known, eqs)?;
                collect(sig, bound, b, order, known, eqs)
            }
            Formula::Atom(r, args) => {
                for (a, s) in args.iter().zip(&sig.rels[*r].arity) {
                    note(a, Some(*s), order, known)?;
                }
                Ok(())
            }
            Formula::Eq(a, b) => {
                let sa = match a {
                    Term::Var(v) => bound.iter().rev().find(|(w, _)| w == v).map(|x| x.1),
                    t => term_sort(sig, &[], t).ok(),
                };
                let sb = match b {
                    Term::Var(v) => bound.iter().rev().find(|(w, _)| w == v).map(|x| x.1),
                    t => term_sort(sig, &[], t).ok(),
                };
                note(a, sb, order, known)?;
                note(b, sa, order, known)?;
                eqs.push((a.clone(), b.clone()));
                Ok(())
            }
            Formula::Exists(v, s, b) => {
                bound.push((v.clone(), *s));
                let r = collect(sig, bound, b, order, known, eqs);
                bound.pop();
                r
            }
        }
    }
    for f in fs {
        collect(sig, &mut Vec::new(), f, &mut order, &mut known, &mut eqs)?;
    }
    // propagate through equations between free variables
    loop {
        let mut changed = false;
        for (a, b) in &eqs {
            if let (Term::Var(x), Term::Var(y)) = (a, b) {
                match (known.get(x).copied(), known.get(y).copied()) {
                    (Some(s), None) if order.contains(y) => {
                        known.insert(y.clone(), s);
                        changed = true;
                    }
                    (None, Some(s)) if order.contains(x) => {
                        known.insert(x.clone(), s);
                        changed = true;
                    }
                    _ => {}
                }
            }
        }
        if !changed {
            break;
        }
    }
    order
        .into_iter()
        .map(|v| match known.get(&v) {
            Some(&s) => Ok((v, s)),
            None => Err(Error::Sort(format!("cannot infer the sort of `{v}`"))),
        })
        .collect()
}
