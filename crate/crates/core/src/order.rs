//! Finite meet-semilattices and poset reflection of finite preorders.

use crate::error::{Error, Result};
use crate::report::Report;
use serde_json::json;

/// A finite meet-semilattice given by tables. Meets may be left undefined
/// (`None`) when the table comes from a truncated materialization.
#[derive(Debug, Clone, PartialEq)]
pub struct MeetSL {
    pub names: Vec<String>,
    leq: Vec<bool>,
    meet: Vec<Option<usize>>,
    top: usize,
}

impl MeetSL {
    pub fn new(names: Vec<String>, leq: Vec<Vec<bool>>, meet: Vec<Vec<Option<usize>>>, top: usize) -> Result<Self> {
        let n = names.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::MalformedTable(format!("order matrix is not {n}x{n}")));
        }
        if meet.len() != n || meet.iter().any(|r| r.len() != n) {
            return Err(Error::MalformedTable(format!("meet table is not {n}x{n}")));
        }
        if top >= n {
            return Err(Error::MalformedTable(format!("top index {top} out of range")));
        }
        if meet.iter().flatten().flatten().any(|&m| m >= n) {
            return Err(Error::MalformedTable("meet entry out of range".into()));
        }
        Ok(MeetSL { names, leq: leq.concat(), meet: meet.concat(), top })
    }

    /// Builds the table from an order alone, filling in meets as greatest
    /// lower bounds wherever they exist.
    pub fn from_order(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::MalformedTable("empty fiber".into()));
        }
        let le = |i: usize, j: usize| leq[i][j];
        let top = (0..n)
            .find(|&t| (0..n).all(|x| le(x, t)))
            .ok_or_else(|| Error::MalformedTable("fiber has no top element".into()))?;
        let mut meet = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&z| le(z, i) && le(z, j)).collect();
                meet[i][j] = lower.iter().copied().find(|&m| lower.iter().all(|&z| le(z, m)));
            }
        }
        Self::new(names, leq, meet, top)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.len() + j]
    }

    pub fn meet(&self, i: usize, j: usize) -> Option<usize> {
        self.meet[i * self.len() + j]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Partial order, greatest-lower-bound and top-is-maximum checks.
    pub fn validate(&self, label: &str, report: &mut Report) {
        let n = self.len();
        for x in 0..n {
            report.check("order.reflexive", self.leq(x, x), || json!({"fiber": label, "x": self.names[x]}));
            report.check("order.top_is_max", self.leq(x, self.top), || json!({"fiber": label, "x": self.names[x]}));
        }
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    report.check("order.antisymmetric", !(self.leq(x, y) && self.leq(y, x)), || {
                        json!({"fiber": label, "x": self.names[x], "y": self.names[y]})
                    });
                }
                for z in 0..n {
                    if self.leq(x, y) && self.leq(y, z) {
                        report.check("order.transitive", self.leq(x, z), || {
                            json!({"fiber": label, "x": self.names[x], "y": self.names[y], "z": self.names[z]})
                        });
                    }
                }
                match self.meet(x, y) {
                    None => report.skip("meet.glb"),
                    Some(m) => {
                        let ok = self.leq(m, x)
                            && self.leq(m, y)
                            && (0..n).all(|z| !(self.leq(z, x) && self.leq(z, y)) || self.leq(z, m));
                        report.check("meet.glb", ok, || {
                            json!({"fiber": label, "x": self.names[x], "y": self.names[y], "meet": self.names[m]})
                        });
                    }
                }
            }
        }
    }
}

/// Result of reflecting a preorder into a poset.
#[derive(Debug, Clone, PartialEq)]
pub struct Reflection {
    /// Class index of every carrier element.
    pub class_of: Vec<usize>,
    /// First carrier element of each class.
    pub reps: Vec<usize>,
    /// Order on classes, row-major.
    pub leq: Vec<Vec<bool>>,
}

impl Reflection {
    pub fn classes(&self) -> usize {
        self.reps.len()
    }
}

/// Quotients a finite preorder by mutual comparability. Classes are numbered
/// by first occurrence.
pub fn poset_reflection(n: usize, le: impl Fn(usize, usize) -> bool) -> Result<Reflection> {
    let mut m = vec![vec![false; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = le(i, j);
        }
    }
    for (i, row) in m.iter().enumerate() {
        if !row[i] {
            return Err(Error::NotPreorder(format!("element {i} is not below itself")));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !m[i][j] {
                continue;
            }
            for k in 0..n {
                if m[j][k] && !m[i][k] {
                    return Err(Error::NotPreorder(format!("{i} <= {j} <= {k} but not {i} <= {k}")));
                }
            }
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for i in 0..n {
        if class_of[i] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(i);
        for j in i..n {
            if m[i][j] && m[j][i] {
                class_of[j] = c;
            }
        }
    }
    let leq = reps.iter().map(|&a| reps.iter().map(|&b| m[a][b]).collect()).collect();
    Ok(Reflection { class_of, reps, leq })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_meets_are_minimums() {
        let names = vec!["0".into(), "m".into(), "1".into()];
        let leq = (0..3).map(|i| (0..3).map(|j| i <= j).collect()).collect();
        let s = MeetSL::from_order(names, leq).unwrap();
        assert_eq!(s.top(), 2);
        assert_eq!(s.meet(1, 2), Some(1));
        assert_eq!(s.meet(0, 1), Some(0));
        let mut r = Report::new("fiber");
        s.validate("chain", &mut r);
        assert!(r.pass);
    }

    #[test]
    fn reflection_identity_on_posets() {
        let r = poset_reflection(3, |i, j| i <= j).unwrap();
        assert_eq!(r.class_of, vec![0, 1, 2]);
    }

    #[test]
    fn reflection_merges_cycle() {
        let r = poset_reflection(2, |_, _| true).unwrap();
        assert_eq!(r.classes(), 1);
    }

    #[test]
    fn reflection_rejects_non_transitive() {
        let rel = [[true, true, false], [false, true, true], [false, false, true]];
        assert!(matches!(poset_reflection(3, |i, j| rel[i][j]), Err(Error::NotPreorder(_))));
    }
}
