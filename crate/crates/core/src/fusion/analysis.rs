use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::lattice::SubgroupLattice;
use super::system::{apply, conj_map, image_of, restrict, FusionSystem, Map};
use crate::config::Bounds;
use crate::error::{FlabError, Result};
use crate::groups::algo;
use crate::groups::{Elem, FiniteGroupTable, Perm, PermGroup, Subgroup};

/// `Aut_F(P)` as a permutation group on the sorted elements of `P`, with its
/// subgroups `Inn(P)` and `Aut_S(P)`.
#[derive(Clone, Debug)]
pub struct AutData {
    pub group: PermGroup,
    pub inner: Subgroup,
    pub from_s: Subgroup,
}

impl AutData {
    /// `Out_F(P) = Aut_F(P)/Inn(P)`
    pub fn out(&self) -> FiniteGroupTable {
        algo::quotient(&self.group, &self.inner)
            .expect("Inn(P) is normal in Aut(P)")
            .0
    }
}

/// Per-class flags of a fusion system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub representative: String,
    pub order: usize,
    pub class_size: usize,
    pub fully_normalized: bool,
    pub fully_centralized: bool,
    pub centric: bool,
    pub radical: bool,
    pub normal: bool,
    pub aut_order: usize,
    pub out_order: usize,
}

impl FusionSystem {
    /// The `F`-conjugacy class of `P`.
    pub fn conjugates(&self, p: usize) -> BTreeSet<usize> {
        self.homs_from(p).iter().map(|f| self.image(f)).collect()
    }

    /// `F`-conjugacy classes, each as a sorted list, ordered by first member.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.lattice().len()];
        let mut out = vec![];
        for p in 0..self.lattice().len() {
            if seen[p] {
                continue;
            }
            let c: Vec<usize> = self.conjugates(p).into_iter().collect();
            for &q in &c {
                seen[q] = true;
            }
            out.push(c);
        }
        out
    }

    pub fn is_fully_normalized(&self, p: usize) -> bool {
        let l = self.lattice();
        let n = l.order(l.normalizer(p));
        self.conjugates(p)
            .iter()
            .all(|&q| l.order(l.normalizer(q)) <= n)
    }

    pub fn is_fully_centralized(&self, p: usize) -> bool {
        let l = self.lattice();
        let c = l.order(l.centralizer(p));
        self.conjugates(p)
            .iter()
            .all(|&q| l.order(l.centralizer(q)) <= c)
    }

    /// Every conjugate contains its centralizer in `S`.
    pub fn is_centric(&self, p: usize) -> bool {
        let l = self.lattice();
        self.conjugates(p)
            .iter()
            .all(|&q| l.centralizer(q) == l.center(q))
    }

    pub fn aut_data(&self, p: usize) -> AutData {
        let l = self.lattice();
        let ps = l.sub(p);
        let to_perm = |f: &Map| -> Perm {
            Perm::new(
                f.iter()
                    .map(|&y| ps.position(y).expect("automorphism of P") as u32)
                    .collect(),
            )
            .expect("bijection")
        };
        let perms: Vec<Perm> = self.aut(p).into_iter().map(to_perm).collect();
        let group = PermGroup::closure_bounded(ps.order(), perms, &Bounds {
            max_order: usize::MAX,
            max_aut_order: usize::MAX,
        })
        .expect("degrees agree");
        let elems_of = |xs: &[Elem]| -> Subgroup {
            Subgroup::from_elements(
                xs.iter()
                    .map(|&x| {
                        group
                            .find(&to_perm(&conj_map(l, x, p)))
                            .expect("inner maps lie in Aut_F(P)")
                    })
                    .collect(),
            )
        };
        let inner = elems_of(ps.elements());
        let from_s = elems_of(l.sub(l.normalizer(p)).elements());
        AutData {
            group,
            inner,
            from_s,
        }
    }

    pub fn aut_order(&self, p: usize) -> usize {
        self.aut(p).len()
    }

    pub fn out_order(&self, p: usize) -> usize {
        let l = self.lattice();
        let inner = l.order(p) / l.order(l.center(p));
        self.aut_order(p) / inner
    }

    /// `O_p(Out_F(P)) = 1`
    pub fn is_radical(&self, p: usize) -> bool {
        let out = self.aut_data(p).out();
        algo::o_p(&out, self.prime()).is_trivial()
    }

    pub fn centric_radical(&self) -> Vec<usize> {
        (0..self.lattice().len())
            .filter(|&p| self.is_centric(p) && self.is_radical(p))
            .collect()
    }

    /// Orbit of `P` under `Aut_F(S)`, i.e. its `N_F(S)`-conjugacy class.
    pub fn aut_s_orbit(&self, p: usize) -> BTreeSet<usize> {
        let l = self.lattice();
        let s = l.whole();
        self.aut(s)
            .into_iter()
            .map(|f| image_of(l, &restrict(l, s, f, p)))
            .collect()
    }

    /// A fusion controlling family: `S` first, then one fully normalized
    /// representative per class of centric radical subgroups. With
    /// `complete` the classes are `N_F(S)`-classes, otherwise `F`-classes.
    /// Each representative maximizes `|N_S(P)|`, ties broken by lattice order.
    pub fn controlling_family(&self, complete: bool) -> Result<Vec<usize>> {
        let l = self.lattice();
        let s = l.whole();
        let mut family = vec![s];
        let mut done: BTreeSet<usize> = BTreeSet::from([s]);
        for p in self.centric_radical() {
            if done.contains(&p) {
                continue;
            }
            let class = if complete {
                self.aut_s_orbit(p)
            } else {
                self.conjugates(p)
            };
            done.extend(class.iter().copied());
            let rep = class
                .iter()
                .copied()
                .filter(|&q| self.is_fully_normalized(q))
                .max_by(|&a, &b| {
                    l.order(l.normalizer(a))
                        .cmp(&l.order(l.normalizer(b)))
                        .then(b.cmp(&a))
                })
                .ok_or_else(|| {
                    FlabError::internal(format!(
                        "no fully normalized member in the class of {}",
                        l.describe(p)
                    ))
                })?;
            family.push(rep);
        }
        family[1..].sort_unstable();
        Ok(family)
    }

    /// `N_F(P)` as a fusion system over `N_S(P)`. When `N_S(P) = S` the
    /// result shares this system's lattice; otherwise it lives on a fresh
    /// lattice for `N_S(P)` and `embedding` sends its elements into `S`.
    pub fn normalizer_system(&self, p: usize, bounds: &Bounds) -> Result<NormalizerSystem> {
        if !self.is_fully_normalized(p) {
            return Err(FlabError::input(format!(
                "{} is not fully normalized",
                self.lattice().describe(p)
            )));
        }
        let l = self.lattice();
        let n = l.normalizer(p);
        let ps = l.sub(p);
        // maps on subgroups T with P ≤ T ≤ N_S(P) that carry P onto P
        let mut gens: Vec<(usize, Map)> = vec![];
        for t in l.below(n).iter().copied().filter(|&t| l.contains(t, p)) {
            for f in self.hom(t, n) {
                if ps.elements().iter().all(|&x| ps.contains(apply(l, t, f, x))) {
                    gens.push((t, f.clone()));
                }
            }
        }
        if n == l.whole() {
            let system = FusionSystem::generated(l.clone(), &gens)?;
            return Ok(NormalizerSystem {
                system,
                embedding: l.sub(n).elements().to_vec(),
            });
        }
        let ns = l.sub(n).clone();
        let table = FiniteGroupTable::from_subgroup(l.group(), &ns);
        let sub = Arc::new(SubgroupLattice::new(table, self.prime(), bounds)?);
        let local = |x: Elem| ns.position(x).expect("inside N_S(P)") as Elem;
        let mut local_gens = vec![];
        for (t, f) in gens {
            let tl = Subgroup::from_elements(l.sub(t).elements().iter().map(|&x| local(x)).collect());
            let ti = sub.find(&tl).expect("subgroup of N_S(P)");
            // local elements are sorted the same way as the global ones
            local_gens.push((ti, f.iter().map(|&y| local(y)).collect()));
        }
        let system = FusionSystem::generated(sub, &local_gens)?;
        Ok(NormalizerSystem {
            system,
            embedding: ns.elements().to_vec(),
        })
    }

    /// `N_F(P) = F`
    pub fn is_normal(&self, p: usize, bounds: &Bounds) -> Result<bool> {
        let l = self.lattice();
        if l.normalizer(p) != l.whole() {
            return Ok(false);
        }
        Ok(self.normalizer_system(p, bounds)?.system.equals(self))
    }

    /// One row per `F`-class, represented by its first fully normalized member.
    pub fn class_report(&self, bounds: &Bounds) -> Result<Vec<(usize, ClassInfo)>> {
        let l = self.lattice();
        let mut rows = vec![];
        for class in self.classes() {
            let rep = class
                .iter()
                .copied()
                .find(|&q| self.is_fully_normalized(q))
                .unwrap_or(class[0]);
            let normal = class.len() == 1 && self.is_normal(rep, bounds)?;
            rows.push((
                rep,
                ClassInfo {
                    representative: l.describe(rep),
                    order: l.order(rep),
                    class_size: class.len(),
                    fully_normalized: self.is_fully_normalized(rep),
                    fully_centralized: self.is_fully_centralized(rep),
                    centric: self.is_centric(rep),
                    radical: self.is_radical(rep),
                    normal,
                    aut_order: self.aut_order(rep),
                    out_order: self.out_order(rep),
                },
            ));
        }
        Ok(rows)
    }
}

/// `N_F(P)` together with the inclusion of its underlying group into `S`.
#[derive(Clone, Debug)]
pub struct NormalizerSystem {
    pub system: FusionSystem,
    pub embedding: Vec<Elem>,
}
