//! The canonical fixture corpus, built programmatically. The JSON files
//! shipped under `fixtures/` are generated from these builders.

use crate::category::{Category, FinCat, GenCat, Product};
use crate::doctrine::{localic_doctrine, Localic, Selection, Subdoctrine, TabDoctrine};
use crate::order::MeetSL;
use std::collections::{BTreeMap, BTreeSet};

fn two_chain_fiber() -> MeetSL {
    MeetSL::from_order(vec!["bot".into(), "top".into()], vec![vec![true, true], vec![false, true]]).expect("2-chain")
}

/// Constant fibers `{bot < top}` with identity reindexing and quantifiers
/// and equality `top`.
fn flat(base: FinCat) -> TabDoctrine {
    let n = base.num_objects();
    let fibers = vec![two_chain_fiber(); n];
    let reindex = vec![vec![Some(0), Some(1)]; base.num_morphisms()];
    let delta = Some(vec![Some(1); n]);
    let mut ex = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            if let Some(p) = base.chosen_product(a, b) {
                ex.insert(p.p1, vec![Some(0), Some(1)]);
            }
        }
    }
    TabDoctrine::new(base, fibers, reindex, delta, Some(ex)).expect("flat doctrine")
}

/// One object, fiber `{bot < top}`, equality `top`, quantifier the identity.
pub fn fix1() -> TabDoctrine {
    flat(FinCat::trivial())
}

/// The diamond base with every fiber `{bot < top}`.
pub fn flat_diamond() -> TabDoctrine {
    flat(FinCat::diamond())
}

/// Subobjects of the diamond written out as principal downsets: the fiber
/// over `x` is `{z : z <= x}`, reindexing along `x <= y` is `z ↦ z ∧ x`,
/// equality over `x` is `x` and quantifiers are inclusions.
pub fn sub_diamond() -> TabDoctrine {
    downset_doctrine(FinCat::diamond())
}

/// The same construction over the 2-chain.
pub fn sub_two_chain() -> TabDoctrine {
    downset_doctrine(FinCat::two_chain())
}

fn downset_doctrine(base: FinCat) -> TabDoctrine {
    let n = base.num_objects();
    let le = |x: usize, y: usize| !base.hom(x, y).is_empty();
    let downs: Vec<Vec<usize>> = (0..n).map(|x| (0..n).filter(|&z| le(z, x)).collect()).collect();
    let glb = |x: usize, y: usize| base.chosen_product(x, y).map(|p| p.obj);
    let fibers: Vec<MeetSL> = downs
        .iter()
        .map(|d| {
            let names = d.iter().map(|&z| base.object_name(z).to_string()).collect();
            let leq = d.iter().map(|&i| d.iter().map(|&j| le(i, j)).collect()).collect();
            MeetSL::from_order(names, leq).expect("downset")
        })
        .collect();
    let pos = |x: usize, z: usize| downs[x].iter().position(|&w| w == z);
    let mut reindex = Vec::new();
    for f in 0..base.num_morphisms() {
        let m = base.morphism(f);
        reindex.push(downs[m.cod].iter().map(|&z| glb(z, m.dom).and_then(|w| pos(m.dom, w))).collect());
    }
    let delta = (0..n).map(|x| glb(x, x).and_then(|xx| pos(xx, x))).collect();
    let mut ex = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            if let Some(Product { obj, p1, .. }) = base.chosen_product(a, b).cloned() {
                ex.insert(p1, downs[obj].iter().map(|&z| pos(a, z)).collect());
            }
        }
    }
    TabDoctrine::new(base, fibers, reindex, Some(delta), Some(ex)).expect("downset doctrine")
}

/// The tops of every fiber.
pub fn tops(t: &TabDoctrine) -> Selection {
    Subdoctrine::tops(t).to_selection()
}

pub fn tops_sub(t: &TabDoctrine) -> Subdoctrine<&TabDoctrine> {
    Subdoctrine::tops(t)
}

/// Localic doctrine on the chain `0 < m < 1` over one seed `B = {x, y}`.
pub fn fix3(bound: usize) -> Localic {
    let g = GenCat::new(vec![("B".into(), vec!["x".into(), "y".into()])], bound).expect("seed");
    localic_doctrine(vec!["0".into(), "m".into(), "1".into()], g).expect("chain")
}

/// One sort, one binary relation and one constant.
pub const SIG_R: &str = "\
sort s
rel R : s s
const c : s
";

/// A smaller signature: one sort and one unary predicate, no constants.
pub const SIG_U: &str = "\
sort s
rel U : s
";

/// FIX-1 with equality set to `bot`.
pub fn fix1_bad_delta() -> TabDoctrine {
    fix1().with_delta(Some(vec![Some(0)]))
}

/// The diamond whose chosen product of `a` and `b` claims to be `1` with
/// identity legs, which are not even typed correctly.
pub fn diamond_broken_product() -> FinCat {
    let mut c = FinCat::diamond();
    let (a, b, one) = (1, 2, 3);
    let ida = c.id(&a);
    c.set_product(a, b, Product { obj: one, p1: ida, p2: ida });
    c
}

/// Selection of every element.
pub fn whole(t: &TabDoctrine) -> Selection {
    Selection { sets: t.fibers.iter().map(|f| (0..f.len()).collect::<BTreeSet<_>>()).collect() }
}
