use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use super::lattice::SubgroupLattice;
use crate::config::Bounds;
use crate::error::{FlabError, Result};
use crate::groups::algo::{self, p_part};
use crate::groups::{Elem, FiniteGroupTable, Group, PermGroup, Subgroup};

/// An injective homomorphism `P → S`, stored as the images of the sorted
/// elements of `P`.
pub type Map = Vec<Elem>;

/// Where a fusion system came from.
#[derive(Clone, Debug)]
pub enum Provenance {
    /// `F_S(G)`; `s_in_g[x]` is the ambient element for element `x` of `S`.
    Group {
        name: String,
        ambient: Arc<PermGroup>,
        s_in_g: Vec<Elem>,
    },
    Abstract {
        name: String,
    },
    Generated,
}

/// A fusion system over a finite `p`-group, with every morphism set stored
/// explicitly. `homs[P]` holds all morphisms from `P` into `S`; `Hom_F(P, Q)`
/// is the subset with image inside `Q`.
#[derive(Clone, Debug)]
pub struct FusionSystem {
    lattice: Arc<SubgroupLattice>,
    homs: Vec<BTreeSet<Map>>,
    provenance: Provenance,
}

impl FusionSystem {
    /// `F_S(G)` for a Sylow subgroup `S` of `G`.
    pub fn from_group(
        name: &str,
        g: Arc<PermGroup>,
        s: &Subgroup,
        p: usize,
        bounds: &Bounds,
    ) -> Result<Self> {
        if !algo::is_subgroup(&*g, s.elements()) {
            return Err(FlabError::input("S is not a subgroup of G"));
        }
        if s.order() != p_part(g.order(), p) {
            return Err(FlabError::input(format!(
                "subgroup of order {} is not a Sylow {p}-subgroup of a group of order {}",
                s.order(),
                g.order()
            )));
        }
        let table = FiniteGroupTable::from_subgroup(&*g, s);
        let lattice = Arc::new(SubgroupLattice::new(table, p, bounds)?);
        let s_in_g: Vec<Elem> = s.elements().to_vec();
        let mut g_to_s = vec![None; g.order()];
        for (i, &x) in s_in_g.iter().enumerate() {
            g_to_s[x as usize] = Some(i as Elem);
        }
        let mut homs = vec![BTreeSet::new(); lattice.len()];
        for (i, set) in homs.iter_mut().enumerate() {
            let pg: Vec<Elem> = lattice
                .sub(i)
                .elements()
                .iter()
                .map(|&x| s_in_g[x as usize])
                .collect();
            let gens: Vec<Elem> = lattice
                .generators(i)
                .iter()
                .map(|&x| s_in_g[x as usize])
                .collect();
            for x in g.elements() {
                if gens.iter().any(|&y| g_to_s[g.conj(x, y) as usize].is_none()) {
                    continue;
                }
                let f: Map = pg
                    .iter()
                    .map(|&y| g_to_s[g.conj(x, y) as usize].expect("generated by S-valued images"))
                    .collect();
                set.insert(f);
            }
        }
        Ok(FusionSystem {
            lattice,
            homs,
            provenance: Provenance::Group {
                name: name.to_string(),
                ambient: g,
                s_in_g,
            },
        })
    }

    /// `F_S(S)`
    pub fn inner(lattice: Arc<SubgroupLattice>) -> Self {
        let mut f = FusionSystem::generated(lattice, &[]).expect("no generators to validate");
        f.provenance = Provenance::Abstract {
            name: "inner".into(),
        };
        f
    }

    /// Smallest fusion system over `S` containing the inner maps and the
    /// given `(source subgroup, map)` generators, closed under composition,
    /// restriction and inverses of isomorphisms.
    pub fn generated(lattice: Arc<SubgroupLattice>, generators: &[(usize, Map)]) -> Result<Self> {
        for (p, f) in generators {
            check_injective_hom(&lattice, *p, f)?;
        }
        let n = lattice.len();
        let mut homs: Vec<BTreeSet<Map>> = vec![BTreeSet::new(); n];
        let mut into_image: Vec<Vec<(usize, Map)>> = vec![vec![]; n];
        let mut queue: VecDeque<(usize, Map)> = VecDeque::new();
        let push = |homs: &mut Vec<BTreeSet<Map>>, queue: &mut VecDeque<(usize, Map)>, p: usize, f: Map| {
            if homs[p].insert(f.clone()) {
                queue.push_back((p, f));
            }
        };
        let s = lattice.group();
        for p in 0..n {
            for x in s.elements() {
                push(&mut homs, &mut queue, p, conj_map(&lattice, x, p));
            }
        }
        for (p, f) in generators {
            push(&mut homs, &mut queue, *p, f.clone());
        }
        while let Some((p, f)) = queue.pop_front() {
            let q = image_of(&lattice, &f);
            for &r in lattice.below(p) {
                if r != p {
                    push(&mut homs, &mut queue, r, restrict(&lattice, p, &f, r));
                }
            }
            push(&mut homs, &mut queue, q, invert(&lattice, p, &f, q));
            let after: Vec<Map> = homs[q].iter().cloned().collect();
            for g in after {
                push(&mut homs, &mut queue, p, compose(&lattice, q, &g, &f));
            }
            let before = into_image[p].clone();
            for (r, h) in before {
                push(&mut homs, &mut queue, r, compose(&lattice, p, &f, &h));
            }
            into_image[q].push((p, f));
        }
        Ok(FusionSystem {
            lattice,
            homs,
            provenance: Provenance::Generated,
        })
    }

    /// Builds a fusion system from fully listed morphism sets, validating
    /// the fusion system axioms.
    pub fn from_morphism_sets(
        lattice: Arc<SubgroupLattice>,
        homs: Vec<BTreeSet<Map>>,
        name: &str,
    ) -> Result<Self> {
        if homs.len() != lattice.len() {
            return Err(FlabError::input("one morphism set per subgroup required"));
        }
        for (p, set) in homs.iter().enumerate() {
            for f in set {
                check_injective_hom(&lattice, p, f)?;
            }
        }
        let gens: Vec<(usize, Map)> = homs
            .iter()
            .enumerate()
            .flat_map(|(p, set)| set.iter().map(move |f| (p, f.clone())))
            .collect();
        let closed = FusionSystem::generated(lattice.clone(), &gens)?;
        if closed.homs != homs {
            return Err(FlabError::input(
                "morphism sets are not closed under conjugation by S, composition, restriction and inverses",
            ));
        }
        Ok(FusionSystem {
            lattice,
            homs,
            provenance: Provenance::Abstract {
                name: name.to_string(),
            },
        })
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    pub fn s(&self) -> &FiniteGroupTable {
        self.lattice.group()
    }

    pub fn prime(&self) -> usize {
        self.lattice.prime()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn set_provenance(&mut self, provenance: Provenance) {
        self.provenance = provenance;
    }

    /// All morphisms out of subgroup `p`.
    pub fn homs_from(&self, p: usize) -> &BTreeSet<Map> {
        &self.homs[p]
    }

    /// `Hom_F(P, Q)`
    pub fn hom(&self, p: usize, q: usize) -> Vec<&Map> {
        let qs = self.lattice.sub(q);
        self.homs[p]
            .iter()
            .filter(|f| f.iter().all(|&x| qs.contains(x)))
            .collect()
    }

    /// `Aut_F(P)`
    pub fn aut(&self, p: usize) -> Vec<&Map> {
        self.hom(p, p)
    }

    pub fn image(&self, f: &Map) -> usize {
        image_of(&self.lattice, f)
    }

    pub fn total_morphisms(&self) -> usize {
        self.homs.iter().map(|s| s.len()).sum()
    }

    /// Same morphism sets over the same `S`.
    pub fn equals(&self, other: &FusionSystem) -> bool {
        self.first_difference(other).is_none()
    }

    /// First `(P, map)` present in exactly one of the two systems, tagged
    /// `true` when it lies in `self`.
    pub fn first_difference(&self, other: &FusionSystem) -> Option<(usize, Map, bool)> {
        assert_eq!(self.lattice.len(), other.lattice.len());
        for p in 0..self.homs.len() {
            if let Some(f) = self.homs[p].difference(&other.homs[p]).next() {
                return Some((p, f.clone(), true));
            }
            if let Some(f) = other.homs[p].difference(&self.homs[p]).next() {
                return Some((p, f.clone(), false));
            }
        }
        None
    }

    pub fn describe_map(&self, p: usize, f: &Map) -> String {
        let s = self.s();
        let parts: Vec<String> = self
            .lattice
            .generators(p)
            .iter()
            .map(|&x| {
                let k = self.lattice.sub(p).position(x).expect("generator of P");
                format!("{} -> {}", s.label(x), s.label(f[k]))
            })
            .collect();
        format!("{} : {}", self.lattice.describe(p), parts.join(", "))
    }
}

pub fn check_injective_hom(lattice: &SubgroupLattice, p: usize, f: &Map) -> Result<()> {
    let ps = lattice.sub(p);
    let s = lattice.group();
    if f.len() != ps.order() || f.iter().any(|&x| x as usize >= s.order()) {
        return Err(FlabError::input(format!(
            "map on {} has the wrong shape",
            lattice.describe(p)
        )));
    }
    let mut sorted = f.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != f.len() {
        return Err(FlabError::input(format!(
            "map on {} is not injective",
            lattice.describe(p)
        )));
    }
    for (i, &a) in ps.elements().iter().enumerate() {
        for (j, &b) in ps.elements().iter().enumerate() {
            let k = ps.position(s.mul(a, b)).expect("closed");
            if f[k] != s.mul(f[i], f[j]) {
                return Err(FlabError::input(format!(
                    "map on {} is not a homomorphism",
                    lattice.describe(p)
                )));
            }
        }
    }
    Ok(())
}

/// `c_x` restricted to subgroup `p`.
pub fn conj_map(lattice: &SubgroupLattice, x: Elem, p: usize) -> Map {
    let s = lattice.group();
    lattice.sub(p).elements().iter().map(|&y| s.conj(x, y)).collect()
}

pub fn identity_map(lattice: &SubgroupLattice, p: usize) -> Map {
    lattice.sub(p).elements().to_vec()
}

pub fn image_of(lattice: &SubgroupLattice, f: &Map) -> usize {
    lattice
        .find_elems(f)
        .expect("image of a homomorphism is a subgroup")
}

/// `f|_R` for `R ≤ P`.
pub fn restrict(lattice: &SubgroupLattice, p: usize, f: &Map, r: usize) -> Map {
    let ps = lattice.sub(p);
    lattice
        .sub(r)
        .elements()
        .iter()
        .map(|&x| f[ps.position(x).expect("R inside P")])
        .collect()
}

/// `g ∘ f` where `g` is defined on `Q ⊇ f(P)`.
pub fn compose(lattice: &SubgroupLattice, q: usize, g: &Map, f: &Map) -> Map {
    let qs = lattice.sub(q);
    f.iter()
        .map(|&x| g[qs.position(x).expect("image inside the domain of g")])
        .collect()
}

/// Inverse of `f: P → Q` with `f(P) = Q`.
pub fn invert(lattice: &SubgroupLattice, p: usize, f: &Map, q: usize) -> Map {
    let ps = lattice.sub(p);
    let qs = lattice.sub(q);
    let mut inv = vec![0; qs.order()];
    for (k, &y) in f.iter().enumerate() {
        inv[qs.position(y).expect("onto Q")] = ps.elements()[k];
    }
    inv
}

/// Applies `f` (a map on `P`) to an element of `P`.
pub fn apply(lattice: &SubgroupLattice, p: usize, f: &Map, x: Elem) -> Elem {
    f[lattice.sub(p).position(x).expect("element of the domain")]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s4_d8() -> FusionSystem {
        let g = Arc::new(PermGroup::from_cycle_strings(4, &["(1 2)", "(1 2 3 4)"]).unwrap());
        let s = algo::sylow(&*g, 2);
        FusionSystem::from_group("s4", g, &s, 2, &Bounds::default()).unwrap()
    }

    #[test]
    fn group_fusion_contains_inner_and_is_closed() {
        let f = s4_d8();
        let l = f.lattice().clone();
        let regen = FusionSystem::generated(
            l.clone(),
            &(0..l.len())
                .flat_map(|p| f.homs_from(p).iter().map(move |m| (p, m.clone())))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert!(regen.equals(&f));
        let inner = FusionSystem::inner(l.clone());
        for p in 0..l.len() {
            assert!(inner.homs_from(p).is_subset(f.homs_from(p)));
        }
        assert_eq!(f.aut(l.whole()).len(), 4);
    }

    #[test]
    fn generation_is_idempotent() {
        let f = s4_d8();
        let inner = FusionSystem::inner(f.lattice().clone());
        let again = FusionSystem::generated(f.lattice().clone(), &[]).unwrap();
        assert!(inner.equals(&again));
    }

    #[test]
    fn rejects_non_homomorphism_generator() {
        let f = s4_d8();
        let l = f.lattice().clone();
        let whole = l.whole();
        let mut bad = identity_map(&l, whole);
        bad[2] = bad[1];
        assert!(FusionSystem::generated(l, &[(whole, bad)]).is_err());
    }

    #[test]
    fn rejects_non_sylow() {
        let g = Arc::new(PermGroup::from_cycle_strings(4, &["(1 2)", "(1 2 3 4)"]).unwrap());
        let v = algo::o_p(&*g, 2);
        assert!(FusionSystem::from_group("s4", g, &v, 2, &Bounds::default()).is_err());
    }
}
