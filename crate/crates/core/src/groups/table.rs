use serde::{Deserialize, Serialize};

use crate::error::{FlabError, Result};

/// Index of a group element. Every group in this crate numbers its elements
/// `0..order`, and the identity is always element `0`.
pub type Elem = u32;

/// A finite group with elements numbered `0..order()`.
pub trait Group {
    fn order(&self) -> usize;
    fn mul(&self, a: Elem, b: Elem) -> Elem;
    fn inv(&self, a: Elem) -> Elem;

    fn identity(&self) -> Elem {
        0
    }

    fn label(&self, a: Elem) -> String {
        a.to_string()
    }

    fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order() as Elem
    }

    /// `g x g⁻¹`
    fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    fn pow(&self, a: Elem, mut n: u64) -> Elem {
        let mut base = a;
        let mut acc = self.identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    fn elem_order(&self, a: Elem) -> usize {
        let e = self.identity();
        let mut x = a;
        let mut k = 1;
        while x != e {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    fn commutes(&self, a: Elem, b: Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }
}

/// A subgroup, stored as its sorted element set. Equality and hashing are by
/// element set, so two subgroups compare equal iff they are the same subset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgroup {
    elems: Vec<Elem>,
}

impl Subgroup {
    /// Wraps an element list; the caller guarantees closure.
    pub fn from_elements(mut elems: Vec<Elem>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        Subgroup { elems }
    }

    pub fn trivial() -> Self {
        Subgroup { elems: vec![0] }
    }

    pub fn whole<G: Group + ?Sized>(g: &G) -> Self {
        Subgroup {
            elems: g.elements().collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elems
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub fn position(&self, x: Elem) -> Option<usize> {
        self.elems.binary_search(&x).ok()
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.elems.len() <= other.elems.len() && self.elems.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            elems: self
                .elems
                .iter()
                .copied()
                .filter(|&x| other.contains(x))
                .collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.elems.len() == 1
    }

    /// Membership mask of length `n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &x in &self.elems {
            m[x as usize] = true;
        }
        m
    }
}

/// A group given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroupTable {
    labels: Vec<String>,
    table: Vec<Elem>,
    identity: Elem,
    #[serde(skip)]
    inverses: Vec<Elem>,
}

impl FiniteGroupTable {
    /// Validates the group axioms (closure, identity, inverses,
    /// associativity) before accepting the table.
    pub fn new(labels: Vec<String>, table: Vec<Vec<Elem>>, identity: Elem) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(FlabError::input("group table must be nonempty"));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(FlabError::input("multiplication table is not square"));
        }
        if identity as usize >= n {
            return Err(FlabError::input("identity index out of range"));
        }
        let flat: Vec<Elem> = table.into_iter().flatten().collect();
        if flat.iter().any(|&x| x as usize >= n) {
            return Err(FlabError::input("table entry out of range"));
        }
        let t = FiniteGroupTable::assemble(labels, flat, identity)?;
        for a in 0..n as Elem {
            if t.mul(identity, a) != a || t.mul(a, identity) != a {
                return Err(FlabError::input(format!(
                    "identity law fails at {}",
                    t.labels[a as usize]
                )));
            }
        }
        for a in 0..n as Elem {
            for b in 0..n as Elem {
                let ab = t.mul(a, b);
                for c in 0..n as Elem {
                    if t.mul(ab, c) != t.mul(a, t.mul(b, c)) {
                        return Err(FlabError::input(format!(
                            "associativity fails at ({}, {}, {})",
                            t.labels[a as usize], t.labels[b as usize], t.labels[c as usize]
                        )));
                    }
                }
            }
        }
        Ok(t.normalized())
    }

    fn assemble(labels: Vec<String>, table: Vec<Elem>, identity: Elem) -> Result<Self> {
        let n = labels.len();
        let mut inverses = vec![Elem::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == identity {
                    inverses[a] = b as Elem;
                    break;
                }
            }
            if inverses[a] == Elem::MAX {
                return Err(FlabError::input(format!(
                    "element {} has no inverse",
                    labels[a]
                )));
            }
        }
        Ok(FiniteGroupTable {
            labels,
            table,
            identity,
            inverses,
        })
    }

    /// Builds the table of an existing group. The source satisfies the
    /// axioms already, so only the inverse cache is computed.
    pub fn from_group<G: Group + ?Sized>(g: &G) -> Self {
        let n = g.order();
        let labels = (0..n as Elem).map(|a| g.label(a)).collect();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n as Elem {
            for b in 0..n as Elem {
                table.push(g.mul(a, b));
            }
        }
        let inverses = (0..n as Elem).map(|a| g.inv(a)).collect();
        FiniteGroupTable {
            labels,
            table,
            identity: g.identity(),
            inverses,
        }
    }

    /// Table of a subgroup `h` of `g`. Element `i` of the result is
    /// `h.elements()[i]`; since `h` is sorted and contains `0`, the identity
    /// stays at index 0.
    pub fn from_subgroup<G: Group + ?Sized>(g: &G, h: &Subgroup) -> Self {
        let elems = h.elements();
        let n = elems.len();
        let labels = elems.iter().map(|&x| g.label(x)).collect();
        let mut table = Vec::with_capacity(n * n);
        for &a in elems {
            for &b in elems {
                let c = g.mul(a, b);
                table.push(h.position(c).expect("subgroup not closed") as Elem);
            }
        }
        let inverses = elems
            .iter()
            .map(|&a| h.position(g.inv(a)).expect("subgroup not closed") as Elem)
            .collect();
        FiniteGroupTable {
            labels,
            table,
            identity: 0,
            inverses,
        }
    }

    /// Same group with identity moved to index 0 (required by [`Group`]).
    pub fn normalized(self) -> Self {
        if self.identity == 0 {
            return self;
        }
        let n = self.labels.len();
        let id = self.identity as usize;
        let swap = |x: usize| -> usize {
            if x == 0 {
                id
            } else if x == id {
                0
            } else {
                x
            }
        };
        let labels = (0..n).map(|i| self.labels[swap(i)].clone()).collect();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(swap(self.table[swap(a) * n + swap(b)] as usize) as Elem);
            }
        }
        FiniteGroupTable::assemble(labels, table, 0).expect("valid group")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find_label(&self, label: &str) -> Option<Elem> {
        self.labels.iter().position(|l| l == label).map(|i| i as Elem)
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        let n = self.labels.len();
        self.table.chunks(n).map(|r| r.to_vec()).collect()
    }

}

impl Group for FiniteGroupTable {
    fn order(&self) -> usize {
        self.labels.len()
    }

    fn identity(&self) -> Elem {
        self.identity
    }

    fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a as usize * self.labels.len() + b as usize]
    }

    fn inv(&self, a: Elem) -> Elem {
        self.inverses[a as usize]
    }

    fn label(&self, a: Elem) -> String {
        self.labels[a as usize].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> FiniteGroupTable {
        let labels = (0..n).map(|i| format!("a{i}")).collect();
        let table = (0..n)
            .map(|a| (0..n).map(|b| ((a + b) % n) as Elem).collect())
            .collect();
        FiniteGroupTable::new(labels, table, 0).unwrap()
    }

    #[test]
    fn cyclic_table_is_a_group() {
        let c = cyclic(6);
        assert_eq!(c.order(), 6);
        assert_eq!(c.inv(2), 4);
        assert_eq!(c.elem_order(2), 3);
        assert_eq!(c.pow(5, 7), 5);
    }

    #[test]
    fn rejects_non_associative_table() {
        // x*y = x - y mod 3 has identity on the right only
        let labels = vec!["0".into(), "1".into(), "2".into()];
        let table = (0..3)
            .map(|a: i32| (0..3).map(|b: i32| (a - b).rem_euclid(3) as Elem).collect())
            .collect();
        assert!(FiniteGroupTable::new(labels, table, 0).is_err());
    }

    #[test]
    fn normalized_moves_identity_to_zero() {
        let labels = vec!["x".into(), "e".into()];
        let table = vec![vec![1, 0], vec![0, 1]];
        let t = FiniteGroupTable::new(labels, table, 1).unwrap().normalized();
        assert_eq!(t.identity(), 0);
        assert_eq!(t.label(0), "e");
        assert_eq!(t.mul(1, 1), 0);
    }
}
