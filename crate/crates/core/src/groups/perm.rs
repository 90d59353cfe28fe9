use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::table::{Elem, Group};
use crate::config::Bounds;
use crate::error::{FlabError, Result};

/// A permutation of `{0, …, degree-1}` stored by images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || seen[i as usize] {
                return Err(FlabError::input(format!(
                    "images {images:?} do not form a permutation"
                )));
            }
            seen[i as usize] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    /// Parses 1-based cycle notation such as `(1 2 3)(4 5)`; `()` is the
    /// identity.
    pub fn from_cycles(degree: usize, text: &str) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| FlabError::input(format!("bad cycle notation: {text}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| FlabError::input(format!("unclosed cycle in {text}")))?;
            let pts = open[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .ok()
                        .filter(|&v| v >= 1 && v <= degree)
                        .ok_or_else(|| FlabError::input(format!("bad point {s} in {text}")))
                })
                .collect::<Result<Vec<_>>>()?;
            for w in 0..pts.len() {
                images[pts[w] - 1] = (pts[(w + 1) % pts.len()] - 1) as u32;
            }
            rest = open[close + 1..].trim_start();
        }
        Perm::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.images[i as usize]
    }

    /// `(self * other)(i) = self(other(i))`: `other` acts first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Disjoint cycles of length ≥ 2, 0-based.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] || self.images[s] as usize == s {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                cyc.push(i as u32);
                i = self.images[i] as usize;
            }
            out.push(cyc);
        }
        out
    }
}

impl fmt::Display for Perm {
    /// 1-based cycle notation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

// Above this order the multiplication table is not precomputed.
const TABLE_LIMIT: usize = 2048;

/// A permutation group with its full element list, sorted by image
/// sequence. The identity is the smallest permutation, hence element 0.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, Elem>,
    inverses: Vec<Elem>,
    table: Option<Vec<Elem>>,
}

impl PermGroup {
    /// Closure of the generators under composition, with the default bounds.
    pub fn closure(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        PermGroup::closure_bounded(degree, generators, &Bounds::from_env())
    }

    pub fn closure_bounded(degree: usize, generators: Vec<Perm>, bounds: &Bounds) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(FlabError::input(format!(
                "generator {g} has degree {}, expected {degree}",
                g.degree()
            )));
        }
        let id = Perm::identity(degree);
        let mut seen: HashMap<Perm, ()> = HashMap::new();
        seen.insert(id.clone(), ());
        let mut queue = VecDeque::from([id]);
        let mut found = vec![];
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = g.compose(&x);
                if !seen.contains_key(&y) {
                    seen.insert(y.clone(), ());
                    bounds.check_order("permutation group closure", seen.len())?;
                    queue.push_back(y);
                }
            }
            found.push(x);
        }
        found.sort();
        Ok(PermGroup::from_sorted(degree, generators, found))
    }

    fn from_sorted(degree: usize, generators: Vec<Perm>, elements: Vec<Perm>) -> Self {
        let index: HashMap<Perm, Elem> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as Elem))
            .collect();
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        let n = elements.len();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in &elements {
                for b in &elements {
                    t.push(index[&a.compose(b)]);
                }
            }
            t
        });
        PermGroup {
            degree,
            generators,
            elements,
            index,
            inverses,
            table,
        }
    }

    /// Parses generators given in 1-based cycle notation.
    pub fn from_cycle_strings(degree: usize, gens: &[&str]) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|g| Perm::from_cycles(degree, g))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::closure(degree, gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Generators as element indices.
    pub fn generator_elems(&self) -> Vec<Elem> {
        self.generators.iter().map(|g| self.index[g]).collect()
    }

    pub fn perm(&self, a: Elem) -> &Perm {
        &self.elements[a as usize]
    }

    pub fn find(&self, p: &Perm) -> Option<Elem> {
        self.index.get(p).copied()
    }
}

impl Group for PermGroup {
    fn order(&self) -> usize {
        self.elements.len()
    }

    fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.table {
            Some(t) => t[a as usize * self.elements.len() + b as usize],
            None => self.index[&self.elements[a as usize].compose(&self.elements[b as usize])],
        }
    }

    fn inv(&self, a: Elem) -> Elem {
        self.inverses[a as usize]
    }

    fn label(&self, a: Elem) -> String {
        self.elements[a as usize].to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_round_trip() {
        let p = Perm::from_cycles(5, "(1 3 5)(2 4)").unwrap();
        assert_eq!(p.images(), &[2, 3, 4, 1, 0]);
        assert_eq!(p.to_string(), "(1 3 5)(2 4)");
        assert_eq!(Perm::identity(3).to_string(), "()");
    }

    #[test]
    fn composition_applies_right_factor_first() {
        let a = Perm::from_cycles(3, "(1 2)").unwrap();
        let b = Perm::from_cycles(3, "(2 3)").unwrap();
        // a∘b sends 2 -> 3 -> 3, 3 -> 2 -> 1
        assert_eq!(a.compose(&b).to_string(), "(1 2 3)");
    }

    #[test]
    fn closure_orders() {
        let d8 = PermGroup::from_cycle_strings(4, &["(1 2 3 4)", "(1 3)"]).unwrap();
        assert_eq!(d8.order(), 8);
        let triv = PermGroup::closure(4, vec![]).unwrap();
        assert_eq!(triv.order(), 1);
        let s4 = PermGroup::from_cycle_strings(4, &["(1 2)", "(1 2 3 4)"]).unwrap();
        assert_eq!(s4.order(), 24);
        assert!(s4.perm(0).is_identity());
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let gens = vec![Perm::identity(3), Perm::identity(4)];
        assert!(PermGroup::closure(4, gens).is_err());
    }

    #[test]
    fn closure_respects_bound() {
        let gens = vec![
            Perm::from_cycles(5, "(1 2)").unwrap(),
            Perm::from_cycles(5, "(1 2 3 4 5)").unwrap(),
        ];
        let b = Bounds {
            max_order: 100,
            max_aut_order: 100,
        };
        let err = PermGroup::closure_bounded(5, gens, &b).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn table_and_direct_multiplication_agree() {
        let s4 = PermGroup::from_cycle_strings(4, &["(1 2)", "(1 2 3 4)"]).unwrap();
        for a in s4.elements() {
            for b in s4.elements() {
                let direct = s4.find(&s4.perm(a).compose(s4.perm(b))).unwrap();
                assert_eq!(s4.mul(a, b), direct);
            }
        }
    }
}
