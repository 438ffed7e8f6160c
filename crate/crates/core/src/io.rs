//! JSON reading and writing of bases, tabulated doctrines, selections and
//! finite categories (including a plain-text graph rendering).

use crate::category::{Category, FinCat, FinCatBuilder, GenCat};
use crate::doctrine::{localic_doctrine, Localic, Selection, TabDoctrine};
use crate::error::{Error, Result};
use crate::order::MeetSL;
use serde_json::{json, Map, Value};
use std::collections::{BTreeMap, BTreeSet};

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedTable(msg.into())
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| malformed(format!("{what}: expected a string")))
}

fn as_obj<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| malformed(format!("{what}: expected an object")))
}

fn as_arr<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| malformed(format!("{what}: expected an array")))
}

fn as_bool(v: &Value) -> Result<bool> {
    match v {
        Value::Bool(b) => Ok(*b),
        Value::Number(n) if n.as_u64() == Some(0) => Ok(false),
        Value::Number(n) if n.as_u64() == Some(1) => Ok(true),
        _ => Err(malformed("order entries must be booleans or 0/1")),
    }
}

/// A base category read from JSON.
#[derive(Debug, Clone)]
pub enum Base {
    Finite(FinCat),
    Generated(GenCat),
}

pub fn read_base(v: &Value) -> Result<Base> {
    let o = as_obj(v, "base")?;
    let kind = o.get("kind").map(|k| as_str(k, "base.kind")).transpose()?.unwrap_or("explicit");
    match kind {
        "generated" => {
            let seeds = as_obj(o.get("seeds").ok_or_else(|| malformed("generated base needs seeds"))?, "seeds")?;
            let mut list = Vec::new();
            for (name, els) in seeds {
                let els = as_arr(els, "seed")?.iter().map(|e| as_str(e, "seed element").map(String::from)).collect::<Result<Vec<_>>>()?;
                list.push((name.clone(), els));
            }
            let bound = o.get("bound").and_then(Value::as_u64).unwrap_or(2) as usize;
            Ok(Base::Generated(GenCat::new(list, bound)?))
        }
        "poset" => Ok(Base::Finite(read_poset(o)?)),
        "explicit" => Ok(Base::Finite(read_explicit(o)?)),
        other => Err(malformed(format!("unknown base kind `{other}`"))),
    }
}

fn object_list(o: &Map<String, Value>) -> Result<Vec<String>> {
    as_arr(o.get("objects").ok_or_else(|| malformed("base needs objects"))?, "objects")?
        .iter()
        .map(|v| as_str(v, "object").map(String::from))
        .collect()
}

fn read_poset(o: &Map<String, Value>) -> Result<FinCat> {
    let names = object_list(o)?;
    let n = names.len();
    let idx = |s: &str| names.iter().position(|x| x == s).ok_or_else(|| malformed(format!("unknown object `{s}`")));
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    if let Some(pairs) = o.get("leq") {
        for p in as_arr(pairs, "leq")? {
            let p = as_arr(p, "leq pair")?;
            if p.len() != 2 {
                return Err(malformed("leq pairs have two entries"));
            }
            le[idx(as_str(&p[0], "leq")?)?][idx(as_str(&p[1], "leq")?)?] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut c = FinCat::poset(&refs, |i, j| le[i][j])?;
    if let Some(t) = o.get("terminal") {
        c.set_terminal(Some(idx(as_str(t, "terminal")?)?));
    }
    if let Some(prod) = o.get("prod") {
        for (a, row) in as_obj(prod, "prod")? {
            for (b, p) in as_obj(row, "prod row")? {
                let (ai, bi) = (idx(a)?, idx(b)?);
                let pi = idx(as_str(p, "product object")?)?;
                let leg = |x: usize| {
                    c.hom(pi, x).first().copied().ok_or_else(|| {
                        malformed(format!("product of ({a},{b}): no arrow {} -> {}", names[pi], names[x]))
                    })
                };
                let (p1, p2) = (leg(ai)?, leg(bi)?);
                c.set_product(ai, bi, crate::category::Product { obj: pi, p1, p2 });
            }
        }
    }
    Ok(c)
}

fn read_explicit(o: &Map<String, Value>) -> Result<FinCat> {
    let names = object_list(o)?;
    let mut b = FinCatBuilder::new();
    for n in &names {
        b.object(n);
    }
    let oidx = |s: &str| names.iter().position(|x| x == s).ok_or_else(|| malformed(format!("unknown object `{s}`")));
    let mut mnames: Vec<String> = names.iter().map(|n| format!("id_{n}")).collect();
    if let Some(h) = o.get("homs") {
        for (name, ends) in as_obj(h, "homs")? {
            if mnames.contains(name) {
                continue;
            }
            let e = as_arr(ends, "hom ends")?;
            if e.len() != 2 {
                return Err(malformed(format!("morphism {name} needs [dom, cod]")));
            }
            b.morphism(name, oidx(as_str(&e[0], "dom")?)?, oidx(as_str(&e[1], "cod")?)?);
            mnames.push(name.clone());
        }
    }
    let midx = |s: &str| mnames.iter().position(|x| x == s).ok_or_else(|| malformed(format!("unknown morphism `{s}`")));
    if let Some(c) = o.get("comp") {
        for (g, row) in as_obj(c, "comp")? {
            for (f, h) in as_obj(row, "comp row")? {
                b.compose(midx(g)?, midx(f)?, midx(as_str(h, "composite")?)?);
            }
        }
    }
    if let Some(t) = o.get("terminal") {
        b.terminal(oidx(as_str(t, "terminal")?)?);
    }
    if let Some(prod) = o.get("prod") {
        for (a, row) in as_obj(prod, "prod")? {
            for (bb, p) in as_obj(row, "prod row")? {
                let p = as_arr(p, "product entry")?;
                if p.len() != 3 {
                    return Err(malformed(format!("product ({a},{bb}) needs [object, p1, p2]")));
                }
                b.product(
                    oidx(a)?,
                    oidx(bb)?,
                    oidx(as_str(&p[0], "product")?)?,
                    midx(as_str(&p[1], "p1")?)?,
                    midx(as_str(&p[2], "p2")?)?,
                );
            }
        }
    }
    b.build()
}

/// JSON keys of all morphisms: identities are `id_<object>`, names shared
/// by several arrows get their ends appended.
fn mor_keys(c: &FinCat) -> Vec<String> {
    let mut count: BTreeMap<&str, usize> = BTreeMap::new();
    for f in 0..c.num_morphisms() {
        *count.entry(c.morphism(f).name.as_str()).or_default() += 1;
    }
    (0..c.num_morphisms())
        .map(|f| {
            let m = c.morphism(f);
            if f == c.id(&m.dom) {
                format!("id_{}", c.object_name(m.dom))
            } else if count[m.name.as_str()] > 1 {
                format!("{}:{}->{}", m.name, c.object_name(m.dom), c.object_name(m.cod))
            } else {
                m.name.clone()
            }
        })
        .collect()
}

/// Writes a finite category in the explicit schema.
pub fn write_fincat(c: &FinCat) -> Value {
    let keys = mor_keys(c);
    let mor_key = |_: &FinCat, f: usize| keys[f].clone();
    let mut homs = Map::new();
    let mut comp: BTreeMap<String, Map<String, Value>> = BTreeMap::new();
    for f in 0..c.num_morphisms() {
        let m = c.morphism(f);
        if f != c.id(&m.dom) {
            homs.insert(mor_key(c, f), json!([c.object_name(m.dom), c.object_name(m.cod)]));
        }
    }
    for f in 0..c.num_morphisms() {
        let m = c.morphism(f);
        for z in 0..c.num_objects() {
            for &g in c.hom(m.cod, z) {
                if f == c.id(&m.dom) || g == c.id(&m.cod) {
                    continue;
                }
                let h = c.compose(&g, &f);
                comp.entry(mor_key(c, g)).or_default().insert(mor_key(c, f), json!(mor_key(c, h)));
            }
        }
    }
    let mut prod: BTreeMap<String, Map<String, Value>> = BTreeMap::new();
    for a in 0..c.num_objects() {
        for b in 0..c.num_objects() {
            if let Some(p) = c.chosen_product(a, b) {
                prod.entry(c.object_name(a).to_string()).or_default().insert(
                    c.object_name(b).to_string(),
                    json!([c.object_name(p.obj), mor_key(c, p.p1), mor_key(c, p.p2)]),
                );
            }
        }
    }
    let mut out = json!({
        "kind": "explicit",
        "objects": c.object_names(),
        "homs": homs,
        "comp": comp,
        "prod": prod,
    });
    if let Some(t) = c.chosen_terminal() {
        out["terminal"] = json!(c.object_name(t));
    }
    out
}

/// A doctrine read from JSON: either a table or a named lazy builder.
#[derive(Debug, Clone)]
pub enum LoadedDoctrine {
    Tabulated(TabDoctrine),
    Localic(Localic),
}

pub fn read_doctrine(v: &Value) -> Result<LoadedDoctrine> {
    let o = as_obj(v, "doctrine")?;
    if let Some(b) = o.get("builder") {
        return match as_str(b, "builder")? {
            "localic" => {
                let chain = as_arr(o.get("H").ok_or_else(|| malformed("localic builder needs H"))?, "H")?
                    .iter()
                    .map(|x| as_str(x, "H element").map(String::from))
                    .collect::<Result<Vec<_>>>()?;
                let mut base = json!({"kind": "generated"});
                base["seeds"] = o.get("seeds").cloned().ok_or_else(|| malformed("localic builder needs seeds"))?;
                if let Some(bd) = o.get("bound") {
                    base["bound"] = bd.clone();
                }
                let Base::Generated(g) = read_base(&base)? else { unreachable!() };
                Ok(LoadedDoctrine::Localic(localic_doctrine(chain, g)?))
            }
            "subobjects" | "weak_subobjects" => {
                let Base::Finite(c) = read_base(o.get("base").ok_or_else(|| malformed("builder needs a base"))?)? else {
                    return Err(malformed("builder needs a finite base"));
                };
                if as_str(b, "builder")? == "subobjects" {
                    Ok(LoadedDoctrine::Tabulated(crate::doctrine::subobjects_doctrine(&c).0))
                } else {
                    Ok(LoadedDoctrine::Tabulated(crate::doctrine::weak_subobjects(&c)?.doctrine))
                }
            }
            other => Err(malformed(format!("unknown builder `{other}`"))),
        };
    }
    let base = match read_base(o.get("base").ok_or_else(|| malformed("doctrine needs a base"))?)? {
        Base::Finite(c) => c,
        Base::Generated(_) => return Err(malformed("tabulated doctrines need a finite base")),
    };
    let fibers_v = as_obj(o.get("fibers").ok_or_else(|| malformed("doctrine needs fibers"))?, "fibers")?;
    let mut fibers = Vec::new();
    for a in 0..base.num_objects() {
        let name = base.object_name(a);
        let f = as_obj(fibers_v.get(name).ok_or_else(|| malformed(format!("missing fiber over {name}")))?, "fiber")?;
        let elems: Vec<String> = as_arr(f.get("elems").ok_or_else(|| malformed("fiber needs elems"))?, "elems")?
            .iter()
            .map(|e| as_str(e, "element").map(String::from))
            .collect::<Result<_>>()?;
        let eidx = |v: &Value| -> Result<usize> {
            match v {
                Value::Number(n) => n.as_u64().map(|x| x as usize).filter(|&x| x < elems.len()).ok_or_else(|| malformed("element index out of range")),
                Value::String(s) => elems.iter().position(|e| e == s).ok_or_else(|| malformed(format!("unknown element `{s}` over {name}"))),
                _ => Err(malformed("element reference must be a name or index")),
            }
        };
        let leq: Vec<Vec<bool>> = as_arr(f.get("leq").ok_or_else(|| malformed("fiber needs leq"))?, "leq")?
            .iter()
            .map(|row| as_arr(row, "leq row")?.iter().map(as_bool).collect())
            .collect::<Result<_>>()?;
        let sl = match f.get("meet") {
            Some(m) => {
                let meet: Vec<Vec<Option<usize>>> = as_arr(m, "meet")?
                    .iter()
                    .map(|row| as_arr(row, "meet row")?.iter().map(|c| if c.is_null() { Ok(None) } else { eidx(c).map(Some) }).collect())
                    .collect::<Result<_>>()?;
                let top = eidx(f.get("top").ok_or_else(|| malformed("fiber needs top"))?)?;
                MeetSL::new(elems.clone(), leq, meet, top)?
            }
            None => MeetSL::from_order(elems.clone(), leq)?,
        };
        fibers.push(sl);
    }
    let keys = mor_keys(&base);
    let re = o.get("reindex").map(|r| as_obj(r, "reindex")).transpose()?;
    let mut reindex = Vec::new();
    for f in 0..base.num_morphisms() {
        let m = base.morphism(f);
        let key = &keys[f];
        let (src, dst) = (&fibers[m.cod], &fibers[m.dom]);
        match re.and_then(|r| r.get(key)) {
            Some(map) => {
                let map = as_obj(map, "reindex map")?;
                let mut col = Vec::new();
                for x in &src.names {
                    col.push(match map.get(x) {
                        None | Some(Value::Null) => None,
                        Some(Value::String(y)) => Some(dst.index_of(y).ok_or_else(|| malformed(format!("reindexing along {key}: unknown element {y}")))?),
                        Some(_) => return Err(malformed("reindexing targets are element names")),
                    });
                }
                reindex.push(col);
            }
            None if m.dom == m.cod && f == base.id(&m.dom) => reindex.push((0..src.len()).map(Some).collect()),
            None => return Err(malformed(format!("missing reindexing along {key}"))),
        }
    }
    let delta = match o.get("delta") {
        None | Some(Value::Null) => None,
        Some(d) => {
            let d = as_obj(d, "delta")?;
            let mut col = Vec::new();
            for a in 0..base.num_objects() {
                let cell = match (d.get(base.object_name(a)), base.chosen_product(a, a)) {
                    (Some(Value::String(e)), Some(p)) => Some(fibers[p.obj].index_of(e).ok_or_else(|| malformed(format!("unknown equality element {e}")))?),
                    _ => None,
                };
                col.push(cell);
            }
            Some(col)
        }
    };
    let exists = match o.get("exists") {
        None | Some(Value::Null) => None,
        Some(e) => {
            let e = as_obj(e, "exists")?;
            let mut t = BTreeMap::new();
            for (k, map) in e {
                let p = keys.iter().position(|x| x == k).or_else(|| base.morphism_index(k)).ok_or_else(|| malformed(format!("unknown projection {k}")))?;
                let m = base.morphism(p);
                let (src, dst) = (&fibers[m.dom], &fibers[m.cod]);
                let map = as_obj(map, "exists map")?;
                let mut col = Vec::new();
                for x in &src.names {
                    col.push(match map.get(x) {
                        Some(Value::String(y)) => Some(dst.index_of(y).ok_or_else(|| malformed(format!("∃ along {k}: unknown element {y}")))?),
                        _ => None,
                    });
                }
                t.insert(p, col);
            }
            Some(t)
        }
    };
    Ok(LoadedDoctrine::Tabulated(TabDoctrine::new(base, fibers, reindex, delta, exists)?))
}

/// Writes a tabulated doctrine; `provenance` is attached verbatim when given.
pub fn write_doctrine(t: &TabDoctrine, provenance: Option<Value>) -> Value {
    let c = &t.base;
    let keys = mor_keys(c);
    let mor_key = |_: &FinCat, f: usize| keys[f].clone();
    let mut fibers = Map::new();
    for a in 0..c.num_objects() {
        let f = &t.fibers[a];
        let n = f.len();
        let leq: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| f.leq(i, j)).collect()).collect();
        let meet: Vec<Vec<Value>> =
            (0..n).map(|i| (0..n).map(|j| f.meet(i, j).map_or(Value::Null, |m| json!(f.names[m]))).collect()).collect();
        fibers.insert(c.object_name(a).to_string(), json!({"elems": f.names, "leq": leq, "meet": meet, "top": f.names[f.top()]}));
    }
    let mut reindex = Map::new();
    for f in 0..c.num_morphisms() {
        let m = c.morphism(f);
        let (src, dst) = (&t.fibers[m.cod], &t.fibers[m.dom]);
        let map: Map<String, Value> =
            (0..src.len()).map(|x| (src.names[x].clone(), t.reindex[f][x].map_or(Value::Null, |y| json!(dst.names[y])))).collect();
        reindex.insert(mor_key(c, f), Value::Object(map));
    }
    let mut out = json!({"base": write_fincat(c), "fibers": fibers, "reindex": reindex});
    if let Some(d) = &t.delta {
        let mut m = Map::new();
        for a in 0..c.num_objects() {
            if let (Some(x), Some(p)) = (d[a], c.chosen_product(a, a)) {
                m.insert(c.object_name(a).to_string(), json!(t.fibers[p.obj].names[x]));
            }
        }
        out["delta"] = Value::Object(m);
    }
    if let Some(e) = &t.exists {
        let mut m = Map::new();
        for (&p, col) in e {
            let info = c.morphism(p);
            let (src, dst) = (&t.fibers[info.dom], &t.fibers[info.cod]);
            let map: Map<String, Value> =
                (0..src.len()).map(|x| (src.names[x].clone(), col[x].map_or(Value::Null, |y| json!(dst.names[y])))).collect();
            m.insert(mor_key(c, p), Value::Object(map));
        }
        out["exists"] = Value::Object(m);
    }
    if let Some(p) = provenance {
        out["provenance"] = p;
    }
    out
}

/// Reads `{"select": {object: [element name or index, …]}}`; objects not
/// mentioned select nothing.
pub fn read_selection(v: &Value, t: &TabDoctrine) -> Result<Selection> {
    let o = as_obj(v.get("select").ok_or_else(|| malformed("selection needs `select`"))?, "select")?;
    let mut sets = vec![BTreeSet::new(); t.base.num_objects()];
    for (obj, els) in o {
        let a = t.base.object_index(obj).ok_or_else(|| malformed(format!("unknown object `{obj}`")))?;
        for e in as_arr(els, "selection")? {
            let x = match e {
                Value::Number(n) => n.as_u64().map(|x| x as usize).filter(|&x| x < t.fibers[a].len()),
                Value::String(s) => t.fibers[a].index_of(s),
                _ => None,
            }
            .ok_or_else(|| malformed(format!("bad element {e} over {obj}")))?;
            sets[a].insert(x);
        }
    }
    Ok(Selection { sets })
}

pub fn write_selection(s: &Selection, t: &TabDoctrine) -> Value {
    let m: Map<String, Value> = s
        .sets
        .iter()
        .enumerate()
        .map(|(a, set)| (t.base.object_name(a).to_string(), json!(set.iter().map(|&x| t.fibers[a].names[x].clone()).collect::<Vec<_>>())))
        .collect();
    json!({"select": m})
}

/// Graph rendering of a finite category: one node per object, one edge per
/// non-identity morphism.
pub fn emit_dot(name: &str, c: &FinCat) -> String {
    let mut s = format!("digraph \"{name}\" {{\n");
    for a in 0..c.num_objects() {
        s.push_str(&format!("  n{a} [label=\"{}\"];\n", c.object_name(a).replace('"', "'")));
    }
    for f in 0..c.num_morphisms() {
        let m = c.morphism(f);
        if f == c.id(&m.dom) {
            continue;
        }
        s.push_str(&format!("  n{} -> n{} [label=\"{}\"];\n", m.dom, m.cod, m.name.replace('"', "'")));
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_base_reads_with_closure() {
        let v = json!({"kind": "poset", "objects": ["0", "a", "b", "1"], "leq": [["0", "a"], ["0", "b"], ["a", "1"], ["b", "1"]]});
        let Base::Finite(c) = read_base(&v).unwrap() else { panic!() };
        assert_eq!(c.hom(0, 3).len(), 1);
        assert_eq!(c.chosen_product(1, 2).unwrap().obj, 0);
        assert_eq!(c.chosen_terminal(), Some(3));
    }

    #[test]
    fn explicit_round_trip() {
        let c = FinCat::diamond();
        let v = write_fincat(&c);
        let Base::Finite(d) = read_base(&v).unwrap() else { panic!() };
        assert_eq!(write_fincat(&d), v);
    }

    #[test]
    fn poset_product_without_legs_is_malformed() {
        let v = json!({"kind": "poset", "objects": ["0", "a", "b", "1"], "leq": [["0", "a"], ["0", "b"], ["a", "1"], ["b", "1"]],
                       "prod": {"a": {"b": "1"}}});
        assert!(matches!(read_base(&v), Err(Error::MalformedTable(_))));
    }
}
