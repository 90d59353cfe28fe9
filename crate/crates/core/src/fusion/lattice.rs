use std::collections::HashMap;

use crate::config::Bounds;
use crate::error::{FlabError, Result};
use crate::groups::algo::{self, is_p_power};
use crate::groups::{Elem, FiniteGroupTable, Group, Subgroup};

/// All subgroups of a finite `p`-group `S`, with the normalizers,
/// centralizers and centers that every fusion computation consults.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    s: FiniteGroupTable,
    p: usize,
    subs: Vec<Subgroup>,
    index: HashMap<Subgroup, usize>,
    normalizer: Vec<usize>,
    centralizer: Vec<usize>,
    center: Vec<usize>,
    below: Vec<Vec<usize>>,
    gens: Vec<Vec<Elem>>,
}

impl SubgroupLattice {
    pub fn new(s: FiniteGroupTable, p: usize, bounds: &Bounds) -> Result<Self> {
        if !algo::is_prime(p as u64) {
            return Err(FlabError::input(format!("{p} is not prime")));
        }
        if !is_p_power(s.order(), p) {
            return Err(FlabError::input(format!(
                "group of order {} is not a {p}-group",
                s.order()
            )));
        }
        let subs = algo::all_subgroups(&s, bounds)?;
        let index: HashMap<Subgroup, usize> =
            subs.iter().enumerate().map(|(i, h)| (h.clone(), i)).collect();
        let find = |h: &Subgroup| index[h];
        let normalizer = subs.iter().map(|h| find(&algo::normalizer(&s, h, None))).collect();
        let centralizer = subs.iter().map(|h| find(&algo::centralizer(&s, h, None))).collect();
        let center = subs.iter().map(|h| find(&algo::center_of(&s, h))).collect();
        let below = subs
            .iter()
            .map(|h| {
                subs.iter()
                    .enumerate()
                    .filter(|(_, k)| k.is_subset(h))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let gens = subs.iter().map(|h| algo::small_generating_set(&s, h)).collect();
        Ok(SubgroupLattice {
            s,
            p,
            subs,
            index,
            normalizer,
            centralizer,
            center,
            below,
            gens,
        })
    }

    pub fn group(&self) -> &FiniteGroupTable {
        &self.s
    }

    pub fn prime(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn sub(&self, i: usize) -> &Subgroup {
        &self.subs[i]
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subs
    }

    pub fn find(&self, h: &Subgroup) -> Option<usize> {
        self.index.get(h).copied()
    }

    /// Index of the subgroup with exactly these elements.
    pub fn find_elems(&self, elems: &[Elem]) -> Option<usize> {
        self.find(&Subgroup::from_elements(elems.to_vec()))
    }

    pub fn trivial(&self) -> usize {
        0
    }

    pub fn whole(&self) -> usize {
        self.subs.len() - 1
    }

    pub fn order(&self, i: usize) -> usize {
        self.subs[i].order()
    }

    pub fn normalizer(&self, i: usize) -> usize {
        self.normalizer[i]
    }

    pub fn centralizer(&self, i: usize) -> usize {
        self.centralizer[i]
    }

    pub fn center(&self, i: usize) -> usize {
        self.center[i]
    }

    /// Subgroups contained in subgroup `i` (including itself), in lattice order.
    pub fn below(&self, i: usize) -> &[usize] {
        &self.below[i]
    }

    pub fn contains(&self, big: usize, small: usize) -> bool {
        self.below[big].binary_search(&small).is_ok()
    }

    pub fn generators(&self, i: usize) -> &[Elem] {
        &self.gens[i]
    }

    /// `x P x⁻¹` for `x ∈ S`.
    pub fn conj(&self, x: Elem, i: usize) -> usize {
        self.index[&algo::conjugate(&self.s, x, &self.subs[i])]
    }

    /// `N_S(P, Q)`
    pub fn transporter(&self, p: usize, q: usize) -> Vec<Elem> {
        algo::transporter(&self.s, &self.subs[p], &self.subs[q], None)
    }

    /// Label of a subgroup by its generators, e.g. `<(1 2)(3 4), (1 3)(2 4)>`.
    pub fn describe(&self, i: usize) -> String {
        let g: Vec<String> = self.gens[i].iter().map(|&x| self.s.label(x)).collect();
        format!("<{}>", g.join(", "))
    }

    pub fn is_abelian(&self, i: usize) -> bool {
        self.center[i] == i
    }
}
