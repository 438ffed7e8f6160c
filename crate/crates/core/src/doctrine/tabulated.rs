use super::Doctrine;
use crate::category::{Cartesian, FinCat};
use crate::error::{Error, Result};
use crate::order::MeetSL;
use std::collections::BTreeMap;

/// A doctrine given entirely by finite tables over a [`FinCat`].
///
/// `reindex[f][x]` is `P_f(x)`; `exists[p][x]` is `∃_p(x)` for a first
/// projection `p`. Cells left `None` mark results that escaped a truncated
/// materialization.
#[derive(Debug, Clone)]
pub struct TabDoctrine {
    pub base: FinCat,
    pub fibers: Vec<MeetSL>,
    pub reindex: Vec<Vec<Option<usize>>>,
    pub delta: Option<Vec<Option<usize>>>,
    pub exists: Option<BTreeMap<usize, Vec<Option<usize>>>>,
}

impl TabDoctrine {
    pub fn new(
        base: FinCat,
        fibers: Vec<MeetSL>,
        reindex: Vec<Vec<Option<usize>>>,
        delta: Option<Vec<Option<usize>>>,
        exists: Option<BTreeMap<usize, Vec<Option<usize>>>>,
    ) -> Result<TabDoctrine> {
        let n = base.num_objects();
        if fibers.len() != n {
            return Err(Error::MalformedTable(format!("{} fibers for {} objects", fibers.len(), n)));
        }
        if reindex.len() != base.num_morphisms() {
            return Err(Error::MalformedTable("one reindexing map per morphism required".into()));
        }
        for (f, map) in reindex.iter().enumerate() {
            let info = base.morphism(f);
            if map.len() != fibers[info.cod].len() {
                return Err(Error::MalformedTable(format!("reindexing along {} has wrong arity", info.name)));
            }
            if map.iter().flatten().any(|&y| y >= fibers[info.dom].len()) {
                return Err(Error::MalformedTable(format!("reindexing along {} leaves its fiber", info.name)));
            }
        }
        if let Some(d) = &delta {
            if d.len() != n {
                return Err(Error::MalformedTable("one equality element per object required".into()));
            }
        }
        if let Some(ex) = &exists {
            for (&p, map) in ex {
                let info = base.morphism(p);
                if map.len() != fibers[info.dom].len() || map.iter().flatten().any(|&y| y >= fibers[info.cod].len()) {
                    return Err(Error::MalformedTable(format!("existential table for {} has wrong shape", info.name)));
                }
            }
        }
        Ok(TabDoctrine { base, fibers, reindex, delta, exists })
    }

    pub fn fiber_table(&self, a: usize) -> &MeetSL {
        &self.fibers[a]
    }

    /// Element index by object and element name.
    pub fn element(&self, obj: &str, elem: &str) -> Option<(usize, usize)> {
        let a = self.base.object_index(obj)?;
        Some((a, self.fibers[a].index_of(elem)?))
    }

    pub fn total_elements(&self) -> usize {
        self.fibers.iter().map(|f| f.len()).sum()
    }

    /// Number of table cells left undefined.
    pub fn undefined_cells(&self) -> usize {
        let mut n = 0;
        for f in &self.fibers {
            for i in 0..f.len() {
                for j in 0..f.len() {
                    n += usize::from(f.meet(i, j).is_none());
                }
            }
        }
        n += self.reindex.iter().flatten().filter(|c| c.is_none()).count();
        if let Some(d) = &self.delta {
            n += d.iter().filter(|c| c.is_none()).count();
        }
        if let Some(e) = &self.exists {
            n += e.values().flatten().filter(|c| c.is_none()).count();
        }
        n
    }

    /// Replaces the equality table, e.g. to build a mutated fixture.
    pub fn with_delta(mut self, delta: Option<Vec<Option<usize>>>) -> Self {
        self.delta = delta;
        self
    }
}

impl Doctrine for TabDoctrine {
    type Base = FinCat;
    type Elem = usize;

    fn base(&self) -> &FinCat {
        &self.base
    }
    fn top(&self, a: &usize) -> usize {
        self.fibers[*a].top()
    }
    fn leq(&self, a: &usize, x: &usize, y: &usize) -> bool {
        self.fibers[*a].leq(*x, *y)
    }
    fn meet(&self, a: &usize, x: &usize, y: &usize) -> Option<usize> {
        self.fibers[*a].meet(*x, *y)
    }
    fn reindex(&self, f: &usize, x: &usize) -> Option<usize> {
        self.reindex[*f][*x]
    }
    fn delta(&self, a: &usize) -> Option<usize> {
        self.delta.as_ref()?[*a]
    }
    fn exists(&self, a: &usize, b: &usize, x: &usize) -> Option<usize> {
        let p = self.base.product(a, b)?;
        self.exists.as_ref()?.get(&p.p1)?[*x]
    }
    fn is_elementary(&self) -> bool {
        self.delta.is_some()
    }
    fn is_existential(&self) -> bool {
        self.exists.is_some()
    }
    fn fiber(&self, a: &usize) -> Vec<usize> {
        (0..self.fibers[*a].len()).collect()
    }
    fn elem_label(&self, a: &usize, x: &usize) -> String {
        self.fibers[*a].names[*x].clone()
    }
}
