use std::sync::Arc;

use super::category::{FiniteCategory, MorId};
use crate::error::{FlabError, Result};
use crate::fusion::{FusionSystem, Map, Provenance};
use crate::groups::{algo, Elem, FiniteGroupTable, Group, PermGroup, Subgroup};

/// Ambient data of a linking system built from a finite group: every
/// morphism is the coset `g·K(P)` of its smallest element `g`, where `K(P)` is
/// the kernel subgroup of the source object.
#[derive(Clone, Debug)]
pub struct Realization {
    pub ambient: Arc<PermGroup>,
    pub s_in_g: Vec<Elem>,
    /// Smallest ambient element of each morphism's coset.
    pub reps: Vec<Elem>,
    /// `C'_G(P)` per object (trivial for transporter categories).
    pub kernels: Vec<Subgroup>,
}

/// A category over subgroups of `S` with structure maps `δ` from the
/// transporter sets of `S` and `ρ` to the fusion system.
#[derive(Clone, Debug)]
pub struct LinkingSystem {
    fusion: Arc<FusionSystem>,
    objects: Vec<usize>,
    obj_index: Vec<Option<usize>>,
    cat: FiniteCategory,
    /// `delta[a * n + b][x]` is `δ(x)` for `x ∈ N_S(P_a, P_b)`.
    delta: Vec<Vec<Option<MorId>>>,
    rho: Vec<Map>,
    realization: Option<Realization>,
}

impl LinkingSystem {
    /// Assembles a linking system from its parts without checking axioms.
    pub fn from_parts(
        fusion: Arc<FusionSystem>,
        objects: Vec<usize>,
        cat: FiniteCategory,
        delta: Vec<Vec<Option<MorId>>>,
        rho: Vec<Map>,
        realization: Option<Realization>,
    ) -> Self {
        let mut obj_index = vec![None; fusion.lattice().len()];
        for (a, &p) in objects.iter().enumerate() {
            obj_index[p] = Some(a);
        }
        LinkingSystem {
            fusion,
            objects,
            obj_index,
            cat,
            delta,
            rho,
            realization,
        }
    }

    /// `L^c_S(G)`: objects are the `F`-centric subgroups, morphisms are
    /// `N_G(P, Q)/C'_G(P)` with `C'_G(P)` the normal `p`-complement of
    /// `C_G(P)`.
    pub fn from_group(fusion: Arc<FusionSystem>) -> Result<Self> {
        let l = fusion.lattice().clone();
        let objects: Vec<usize> = (0..l.len()).filter(|&p| fusion.is_centric(p)).collect();
        build_from_group(fusion, objects, true)
    }

    pub fn fusion(&self) -> &Arc<FusionSystem> {
        &self.fusion
    }

    pub fn category(&self) -> &FiniteCategory {
        &self.cat
    }

    pub fn realization(&self) -> Option<&Realization> {
        self.realization.as_ref()
    }

    /// Lattice indices of the objects, in object order.
    pub fn objects(&self) -> &[usize] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    /// Object number of a lattice subgroup.
    pub fn object_of(&self, p: usize) -> Option<usize> {
        self.obj_index.get(p).copied().flatten()
    }

    pub fn subgroup(&self, a: usize) -> &Subgroup {
        self.fusion.lattice().sub(self.objects[a])
    }

    pub fn describe_object(&self, a: usize) -> String {
        self.fusion.lattice().describe(self.objects[a])
    }

    pub fn hom(&self, a: usize, b: usize) -> std::ops::Range<MorId> {
        self.cat.hom(a, b)
    }

    pub fn compose(&self, g: MorId, f: MorId) -> MorId {
        self.cat.compose(g, f)
    }

    pub fn source(&self, m: MorId) -> usize {
        self.cat.source(m)
    }

    pub fn target(&self, m: MorId) -> usize {
        self.cat.target(m)
    }

    pub fn identity(&self, a: usize) -> MorId {
        self.cat.identity(a)
    }

    /// `δ_{P,Q}(x)`
    pub fn delta(&self, a: usize, b: usize, x: Elem) -> Option<MorId> {
        let n = self.objects.len();
        self.delta[a * n + b].get(x as usize).copied().flatten()
    }

    pub fn delta_table(&self, a: usize, b: usize) -> &[Option<MorId>] {
        &self.delta[a * self.objects.len() + b]
    }

    /// The distinguished inclusion `ι_{P,Q} = δ_{P,Q}(1)`.
    pub fn inclusion(&self, a: usize, b: usize) -> Option<MorId> {
        self.delta(a, b, 0)
    }

    /// `ρ(φ)` as a map from the source subgroup into `S`.
    pub fn rho(&self, m: MorId) -> &Map {
        &self.rho[m]
    }

    pub fn label(&self, m: MorId) -> &str {
        self.cat.label(m)
    }

    /// Ids of `Aut_L(P)`; the identity comes first.
    pub fn aut(&self, a: usize) -> std::ops::Range<MorId> {
        self.cat.hom(a, a)
    }

    /// `Aut_L(P)` as a group table whose element `i` is morphism
    /// `aut(a).start + i`.
    pub fn aut_table(&self, a: usize) -> FiniteGroupTable {
        let labels = self.aut(a).map(|m| self.label(m).to_string()).collect();
        FiniteGroupTable::new(labels, self.cat.endo_table(a), 0)
            .expect("automorphism sets of a category with inverses form groups")
    }

    /// Unique `ψ ∈ Mor(P', Q')` with `ι_{Q',Q} ∘ ψ = φ ∘ ι_{P',P}` for
    /// `P' ≤ P` and `Q' ≤ Q`.
    pub fn restrict(&self, phi: MorId, a2: usize, b2: usize) -> Option<MorId> {
        let (a, b) = (self.source(phi), self.target(phi));
        let ia = self.inclusion(a2, a)?;
        let ib = self.inclusion(b2, b)?;
        let lhs = self.compose(phi, ia);
        self.hom(a2, b2).find(|&psi| self.compose(ib, psi) == lhs)
    }

    /// Object whose subgroup is the image of `ρ(φ)`.
    pub fn image_object(&self, m: MorId) -> Option<usize> {
        self.object_of(self.fusion.image(&self.rho[m]))
    }

    /// The morphism `P → ρ(φ)(P)` through which `φ` factors.
    pub fn corestrict_to_image(&self, m: MorId) -> Option<MorId> {
        let img = self.image_object(m)?;
        self.restrict(m, self.source(m), img)
    }
}

/// `Aut_L(S, P)` with its restriction into `Aut_L(P)`.
#[derive(Clone, Debug)]
pub struct RestrictedAut {
    /// Members of `Aut_L(S)` whose fusion map preserves `P`.
    pub members: Vec<MorId>,
    /// Image of each member in `Aut_L(P)`.
    pub restrictions: Vec<MorId>,
    pub injective: bool,
}

impl LinkingSystem {
    /// `Aut_L(S, P) = {φ ∈ Aut_L(S) : φ|_P ∈ Aut_L(P)}` for an object `P`.
    pub fn aut_restricted(&self, a: usize) -> Result<RestrictedAut> {
        let l = self.fusion.lattice();
        let s_obj = self
            .object_of(l.whole())
            .ok_or_else(|| FlabError::input("S is not an object"))?;
        let p = self.objects[a];
        let mut members = vec![];
        let mut restrictions = vec![];
        for phi in self.aut(s_obj) {
            let f = &self.rho[phi];
            let inside = l.sub(p).elements().iter().all(|&x| l.sub(p).contains(f[x as usize]));
            if !inside {
                continue;
            }
            let r = self.restrict(phi, a, a).ok_or_else(|| {
                FlabError::internal(format!("{} has no restriction", self.label(phi)))
            })?;
            members.push(phi);
            restrictions.push(r);
        }
        let mut distinct = restrictions.clone();
        distinct.sort_unstable();
        distinct.dedup();
        Ok(RestrictedAut {
            injective: distinct.len() == restrictions.len(),
            members,
            restrictions,
        })
    }
}

/// Transporter category `T_H(G)` with objects the given lattice subgroups
/// of `S` and morphisms `N_G(P, Q)`.
#[derive(Clone, Debug)]
pub struct TransporterCategory {
    pub system: LinkingSystem,
}

impl TransporterCategory {
    /// Requires `H` to be closed under `F`-conjugacy and overgroups in `S`.
    pub fn new(fusion: Arc<FusionSystem>, objects: Vec<usize>) -> Result<Self> {
        let l = fusion.lattice().clone();
        for &p in &objects {
            for q in fusion.conjugates(p) {
                if !objects.contains(&q) {
                    return Err(FlabError::input(format!(
                        "collection is not closed under conjugacy: {} is missing",
                        l.describe(q)
                    )));
                }
            }
            for q in 0..l.len() {
                if l.contains(q, p) && !objects.contains(&q) {
                    return Err(FlabError::input(format!(
                        "collection is not closed under overgroups: {} is missing",
                        l.describe(q)
                    )));
                }
            }
        }
        let mut objects = objects;
        objects.sort_unstable();
        objects.dedup();
        Ok(TransporterCategory {
            system: build_from_group(fusion, objects, false)?,
        })
    }
}

fn build_from_group(
    fusion: Arc<FusionSystem>,
    objects: Vec<usize>,
    quotient: bool,
) -> Result<LinkingSystem> {
    let (g, s_in_g) = match fusion.provenance() {
        Provenance::Group {
            ambient, s_in_g, ..
        } => (ambient.clone(), s_in_g.clone()),
        _ => {
            return Err(FlabError::input(
                "a group-realized fusion system is required",
            ))
        }
    };
    let l = fusion.lattice().clone();
    let p = fusion.prime();
    let n = objects.len();
    let mut g_to_s = vec![None; g.order()];
    for (i, &x) in s_in_g.iter().enumerate() {
        g_to_s[x as usize] = Some(i as Elem);
    }
    let in_g: Vec<Subgroup> = objects
        .iter()
        .map(|&q| Subgroup::from_elements(l.sub(q).elements().iter().map(|&x| s_in_g[x as usize]).collect()))
        .collect();

    let mut kernels = vec![];
    for (a, pg) in in_g.iter().enumerate() {
        if !quotient {
            kernels.push(Subgroup::trivial());
            continue;
        }
        let c = algo::centralizer(&*g, pg, None);
        let k = algo::normal_p_complement_within(&*g, &c, p).ok_or_else(|| {
            FlabError::internal(format!(
                "C_G(P) has no normal {p}-complement for P = {}",
                l.describe(objects[a])
            ))
        })?;
        kernels.push(k);
    }
    // smallest element of each coset x·K(P)
    let coset_rep: Vec<Vec<Elem>> = kernels
        .iter()
        .map(|k| {
            g.elements()
                .map(|x| k.elements().iter().map(|&y| g.mul(x, y)).min().expect("nonempty"))
                .collect()
        })
        .collect();
    let mut reps: Vec<Vec<Vec<Elem>>> = vec![vec![vec![]; n]; n];
    for a in 0..n {
        for b in 0..n {
            let mut r: Vec<Elem> = algo::transporter(&*g, &in_g[a], &in_g[b], None)
                .into_iter()
                .map(|x| coset_rep[a][x as usize])
                .collect();
            r.sort_unstable();
            r.dedup();
            reps[a][b] = r;
        }
    }
    let counts: Vec<Vec<usize>> = reps.iter().map(|row| row.iter().map(|r| r.len()).collect()).collect();
    let labels: Vec<Vec<Vec<String>>> = reps
        .iter()
        .map(|row| {
            row.iter()
                .map(|r| r.iter().map(|&x| format!("[{}]", g.label(x))).collect())
                .collect()
        })
        .collect();
    let objects_labels = objects.iter().map(|&q| l.describe(q)).collect();
    let cat = FiniteCategory::from_fn(objects_labels, counts, labels, |a, b, c, gi, fi| {
        let x = g.mul(reps[b][c][gi], reps[a][b][fi]);
        reps[a][c]
            .binary_search(&coset_rep[a][x as usize])
            .expect("composite lies in the transporter")
    })?;
    let mut delta = vec![vec![]; n * n];
    for a in 0..n {
        for b in 0..n {
            let mut row = vec![None; l.group().order()];
            for x in l.transporter(objects[a], objects[b]) {
                let xg = coset_rep[a][s_in_g[x as usize] as usize];
                let i = reps[a][b].binary_search(&xg).expect("S-transporter lies in G-transporter");
                row[x as usize] = Some(cat.offset(a, b) + i);
            }
            delta[a * n + b] = row;
        }
    }
    let mut rho = Vec::with_capacity(cat.morphism_count());
    let mut all_reps = Vec::with_capacity(cat.morphism_count());
    for a in 0..n {
        for b in 0..n {
            for &x in &reps[a][b] {
                rho.push(
                    in_g[a]
                        .elements()
                        .iter()
                        .map(|&y| g_to_s[g.conj(x, y) as usize].expect("conjugate lies in S"))
                        .collect::<Map>(),
                );
                all_reps.push(x);
            }
        }
    }
    // in_g[a] is sorted by ambient index, lattice subgroups by S index; the
    // maps must follow the lattice order of the source
    for (m, f) in rho.iter_mut().enumerate() {
        let a = cat.source(m);
        let src = l.sub(objects[a]);
        let by_ambient: Vec<(Elem, Elem)> = in_g[a].elements().iter().copied().zip(f.iter().copied()).collect();
        *f = src
            .elements()
            .iter()
            .map(|&x| {
                let xg = s_in_g[x as usize];
                by_ambient[by_ambient.binary_search_by_key(&xg, |e| e.0).expect("element of P")].1
            })
            .collect();
    }
    Ok(LinkingSystem::from_parts(
        fusion,
        objects,
        cat,
        delta,
        rho,
        Some(Realization {
            ambient: g,
            s_in_g,
            reps: all_reps,
            kernels,
        }),
    ))
}
