use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::config::Bounds;
use crate::error::{FlabError, Result};
use crate::fusion::FusionSystem;
use crate::groups::hom::{automorphisms, hom_from_generators};
use crate::groups::{algo, Elem, FiniteGroupTable, Group, GroupHom, Subgroup};
use crate::linking::{LinkingSystem, MorId};

/// An isotypical, inclusion-preserving self-equivalence of a linking
/// system, stored as its full action on objects and morphisms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Equivalence {
    /// The automorphism of `S` it induces, on element indices.
    pub psi: Vec<Elem>,
    pub objects: Vec<usize>,
    pub morphisms: Vec<MorId>,
}

impl Equivalence {
    pub fn identity(l: &LinkingSystem) -> Self {
        Equivalence {
            psi: l.fusion().s().elements().collect(),
            objects: (0..l.object_count()).collect(),
            morphisms: (0..l.category().morphism_count()).collect(),
        }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Equivalence) -> Equivalence {
        Equivalence {
            psi: other.psi.iter().map(|&x| self.psi[x as usize]).collect(),
            objects: other.objects.iter().map(|&a| self.objects[a]).collect(),
            morphisms: other.morphisms.iter().map(|&m| self.morphisms[m]).collect(),
        }
    }

    pub fn inverse(&self) -> Equivalence {
        fn inv<T: Copy + Into<usize>>(v: &[T], from: impl Fn(usize) -> T) -> Vec<T> {
            let mut out: Vec<T> = v.to_vec();
            for (i, &j) in v.iter().enumerate() {
                out[j.into()] = from(i);
            }
            out
        }
        Equivalence {
            psi: inv(&self.psi.iter().map(|&x| x as usize).collect::<Vec<_>>(), |i| i)
                .into_iter()
                .map(|x| x as Elem)
                .collect(),
            objects: inv(&self.objects, |i| i),
            morphisms: inv(&self.morphisms, |i| i),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.morphisms.iter().enumerate().all(|(i, &m)| i == m)
    }

    pub fn apply(&self, m: MorId) -> MorId {
        self.morphisms[m]
    }
}

/// Automorphisms `ψ` of `S` with `ψ Hom_F(P, Q) ψ⁻¹ = Hom_F(ψP, ψQ)`.
pub fn fusion_preserving_autos(f: &FusionSystem, bounds: &Bounds) -> Result<Vec<GroupHom>> {
    let s = f.s();
    bounds.check_aut_order("S", s.order())?;
    let lat = f.lattice();
    let all = automorphisms(s, bounds)?;
    Ok(all
        .into_iter()
        .filter(|psi| {
            (0..lat.len()).all(|p| {
                let src = lat.sub(p).elements();
                let img: Vec<Elem> = src.iter().map(|&x| psi.apply(x)).collect();
                let q = lat.find_elems(&img).expect("automorphisms map subgroups to subgroups");
                let q_elems = lat.sub(q).elements();
                // ψ ∘ φ ∘ ψ⁻¹ on the sorted elements of ψ(P)
                f.homs_from(p).iter().all(|phi| {
                    let mut conj = vec![0; q_elems.len()];
                    for (k, &x) in src.iter().enumerate() {
                        let pos = q_elems.binary_search(&psi.apply(x)).expect("in ψ(P)");
                        conj[pos] = psi.apply(phi[k]);
                    }
                    f.homs_from(q).contains(&conj)
                })
            })
        })
        .collect())
}

/// Why a candidate assignment does not extend to an equivalence.
#[derive(Clone, Debug)]
pub struct ExtensionConflict(pub String);

fn object_map(l: &LinkingSystem, psi: &[Elem]) -> std::result::Result<Vec<usize>, ExtensionConflict> {
    let lat = l.fusion().lattice();
    (0..l.object_count())
        .map(|a| {
            let img: Vec<Elem> = l.subgroup(a).elements().iter().map(|&x| psi[x as usize]).collect();
            lat.find_elems(&img)
                .and_then(|q| l.object_of(q))
                .ok_or_else(|| ExtensionConflict(format!("ψ({}) is not an object", l.describe_object(a))))
        })
        .collect()
}

/// Extends `seeds` to a full equivalence over `ψ`, using that `Ψ` fixes
/// `δ` up to `ψ`, commutes with composition, inverses and restriction, and
/// that every morphism is an inclusion after an isomorphism.
pub fn extend(
    l: &LinkingSystem,
    psi: &[Elem],
    seeds: &[(MorId, MorId)],
) -> std::result::Result<Equivalence, ExtensionConflict> {
    let lat = l.fusion().lattice();
    let n = l.object_count();
    let m_count = l.category().morphism_count();
    let objects = object_map(l, psi)?;
    let order = |a: usize| l.subgroup(a).order();
    let mut assigned: Vec<Option<MorId>> = vec![None; m_count];
    let mut queue: VecDeque<MorId> = VecDeque::new();
    let mut out_isos: Vec<Vec<MorId>> = vec![vec![]; n];
    let mut in_isos: Vec<Vec<MorId>> = vec![vec![]; n];
    let below: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).filter(|&b| lat.contains(l.objects()[a], l.objects()[b])).collect())
        .collect();

    let set = |assigned: &mut Vec<Option<MorId>>, queue: &mut VecDeque<MorId>, m: MorId, v: MorId| {
        if let Some(w) = assigned[m] {
            if w != v {
                return Err(ExtensionConflict(format!(
                    "{} would map to both {} and {}",
                    l.label(m),
                    l.label(w),
                    l.label(v)
                )));
            }
            return Ok(());
        }
        let (a, b) = (l.source(m), l.target(m));
        if l.source(v) != objects[a] || l.target(v) != objects[b] {
            return Err(ExtensionConflict(format!("{} maps to a morphism between the wrong objects", l.label(m))));
        }
        // ρ(Ψ(φ)) = ψ ρ(φ) ψ⁻¹
        let src = l.subgroup(a).elements();
        let dst = l.subgroup(objects[a]).elements();
        let rho_m = l.rho(m);
        let rho_v = l.rho(v);
        for (k, &x) in src.iter().enumerate() {
            let pos = dst.binary_search(&psi[x as usize]).expect("ψ maps P onto ψP");
            if rho_v[pos] != psi[rho_m[k] as usize] {
                return Err(ExtensionConflict(format!(
                    "{} and its image {} induce incompatible maps",
                    l.label(m),
                    l.label(v)
                )));
            }
        }
        assigned[m] = Some(v);
        if order(a) == order(b) {
            queue.push_back(m);
        }
        Ok(())
    };

    let s = l.fusion().s();
    for a in 0..n {
        for b in 0..n {
            for (x, d) in l.delta_table(a, b).iter().enumerate() {
                if let Some(d) = d {
                    let img = l
                        .delta(objects[a], objects[b], psi[x])
                        .ok_or_else(|| ExtensionConflict(format!("δ({}) has no image", s.label(x as Elem))))?;
                    set(&mut assigned, &mut queue, *d, img)?;
                }
            }
        }
    }
    for &(m, v) in seeds {
        set(&mut assigned, &mut queue, m, v)?;
    }
    while let Some(f) = queue.pop_front() {
        let g = assigned[f].expect("queued morphisms are assigned");
        let (a, b) = (l.source(f), l.target(f));
        let fi = l.category().inverse(f).expect("isomorphism");
        let gi = l.category().inverse(g).expect("isomorphism");
        set(&mut assigned, &mut queue, fi, gi)?;
        for &a2 in &below[a] {
            if a2 == a {
                continue;
            }
            let img = lat
                .find_elems(&{
                    let mut v: Vec<Elem> = l
                        .subgroup(a2)
                        .elements()
                        .iter()
                        .map(|&x| l.rho(f)[l.subgroup(a).position(x).expect("P' ≤ P")])
                        .collect();
                    v.sort_unstable();
                    v
                })
                .and_then(|q| l.object_of(q))
                .expect("isomorphic images of centric subgroups are centric");
            let fr = l.restrict(f, a2, img).expect("restrictions exist");
            let gr = l
                .restrict(g, objects[a2], objects[img])
                .ok_or_else(|| ExtensionConflict(format!("{} does not restrict", l.label(g))))?;
            set(&mut assigned, &mut queue, fr, gr)?;
        }
        for h in out_isos[b].clone() {
            let v = l.compose(assigned[h].expect("assigned"), g);
            set(&mut assigned, &mut queue, l.compose(h, f), v)?;
        }
        for h in in_isos[a].clone() {
            let v = l.compose(g, assigned[h].expect("assigned"));
            set(&mut assigned, &mut queue, l.compose(f, h), v)?;
        }
        out_isos[a].push(f);
        in_isos[b].push(f);
    }
    let mut morphisms = Vec::with_capacity(m_count);
    for m in 0..m_count {
        if let Some(v) = assigned[m] {
            morphisms.push(v);
            continue;
        }
        let c = l.corestrict_to_image(m).expect("images of centric subgroups are centric");
        let g = assigned[c]
            .ok_or_else(|| ExtensionConflict(format!("{} is not reached from the seeds", l.label(m))))?;
        let inc = l
            .inclusion(l.target(g), objects[l.target(m)])
            .ok_or_else(|| ExtensionConflict(format!("image of {} is not contained in the target", l.label(m))))?;
        morphisms.push(l.compose(inc, g));
    }
    let mut seen = vec![false; m_count];
    for &v in &morphisms {
        if std::mem::replace(&mut seen[v], true) {
            return Err(ExtensionConflict(format!("{} is hit twice", l.label(v))));
        }
    }
    for f in 0..m_count {
        let b = l.target(f);
        for c in 0..n {
            for g in l.hom(b, c) {
                if morphisms[l.compose(g, f)] != l.compose(morphisms[g], morphisms[f]) {
                    return Err(ExtensionConflict(format!(
                        "composition {} o {} is not preserved",
                        l.label(g),
                        l.label(f)
                    )));
                }
            }
        }
    }
    Ok(Equivalence {
        psi: psi.to_vec(),
        objects,
        morphisms,
    })
}

/// Isomorphisms `src → tgt` agreeing with `fixed` on the subgroup it is
/// defined on.
pub fn isomorphisms_extending(
    src: &FiniteGroupTable,
    tgt: &FiniteGroupTable,
    fixed: &[(Elem, Elem)],
) -> Vec<GroupHom> {
    if src.order() != tgt.order() {
        return vec![];
    }
    let dom = Subgroup::from_elements(fixed.iter().map(|x| x.0).collect());
    let mut gens = algo::small_generating_set(src, &dom);
    let lookup: BTreeMap<Elem, Elem> = fixed.iter().copied().collect();
    let mut imgs: Vec<Elem> = gens.iter().map(|x| lookup[x]).collect();
    let mut extra = vec![];
    let mut span = algo::generate(src, &gens);
    while span.order() < src.order() {
        let x = src.elements().find(|&x| !span.contains(x)).expect("proper subgroup");
        extra.push(x);
        span = algo::join(src, &span, x);
    }
    let n_fixed = gens.len();
    gens.extend(extra.iter().copied());
    let mut out = vec![];
    let mut choice = vec![0 as Elem; extra.len()];
    search_images(src, tgt, &gens, &mut imgs, n_fixed, &mut choice, 0, &mut out);
    out.retain(|h| (0..fixed.len()).all(|k| h.apply(fixed[k].0) == fixed[k].1));
    out
}

#[allow(clippy::too_many_arguments)]
fn search_images(
    src: &FiniteGroupTable,
    tgt: &FiniteGroupTable,
    gens: &[Elem],
    imgs: &mut Vec<Elem>,
    n_fixed: usize,
    choice: &mut Vec<Elem>,
    k: usize,
    out: &mut Vec<GroupHom>,
) {
    if k == choice.len() {
        if let Some(h) = hom_from_generators(src, tgt, gens, imgs) {
            if h.is_injective() {
                out.push(h);
            }
        }
        return;
    }
    let want = src.elem_order(gens[n_fixed + k]);
    for y in tgt.elements() {
        if tgt.elem_order(y) != want {
            continue;
        }
        imgs.push(y);
        if crate::groups::hom::extend_on_generated(src, tgt, &gens[..imgs.len()], imgs).is_some() {
            search_images(src, tgt, gens, imgs, n_fixed, choice, k + 1, out);
        }
        imgs.pop();
    }
}

/// `Aut_L(S)` conjugation `c_x`: `φ ↦ x|_Q ∘ φ ∘ (x|_P)⁻¹`.
pub fn conjugation(l: &LinkingSystem, x: MorId) -> Equivalence {
    let s_obj = l.object_of(l.fusion().lattice().whole()).expect("S is an object");
    assert_eq!(l.source(x), s_obj);
    let n = l.object_count();
    let psi: Vec<Elem> = l.rho(x).clone();
    let objects = object_map(l, &psi).expect("conjugation maps objects to objects");
    let restr: Vec<MorId> = (0..n)
        .map(|a| l.restrict(x, a, objects[a]).expect("x restricts to every object"))
        .collect();
    let inv: Vec<MorId> = restr.iter().map(|&r| l.category().inverse(r).expect("isomorphism")).collect();
    let morphisms = (0..l.category().morphism_count())
        .map(|m| l.compose(restr[l.target(m)], l.compose(m, inv[l.source(m)])))
        .collect();
    Equivalence {
        psi,
        objects,
        morphisms,
    }
}

/// The object of the hub `S`.
pub fn s_object(l: &LinkingSystem) -> usize {
    l.object_of(l.fusion().lattice().whole()).expect("S is an object")
}

/// All of `Aut^I_typ(L)`: for each fusion-preserving `ψ` and each choice of
/// isomorphisms `Aut_L(P) → Aut_L(ψP)` over the family compatible with `δ`,
/// the unique extension when it exists.
pub fn enumerate_aut_typ(l: &LinkingSystem, family: &[usize], bounds: &Bounds) -> Result<Vec<Equivalence>> {
    let f = l.fusion();
    let lat = f.lattice();
    let fam_objects: Vec<usize> = family
        .iter()
        .map(|&p| l.object_of(p).ok_or_else(|| FlabError::input(format!("{} is not an object", lat.describe(p)))))
        .collect::<Result<_>>()?;
    let mut found: BTreeMap<Vec<MorId>, Equivalence> = BTreeMap::new();
    for psi in fusion_preserving_autos(f, bounds)? {
        let Ok(objects) = object_map(l, &psi.images) else {
            continue;
        };
        let mut options: Vec<Vec<Vec<(MorId, MorId)>>> = vec![];
        for &a in &fam_objects {
            let b = objects[a];
            let (ta, tb) = (l.aut_table(a), l.aut_table(b));
            bounds.check_aut_order("an automizer in L", ta.order())?;
            let (sa, sb) = (l.aut(a).start, l.aut(b).start);
            let p = l.objects()[a];
            let fixed: Vec<(Elem, Elem)> = lat
                .sub(lat.normalizer(p))
                .elements()
                .iter()
                .map(|&x| {
                    let d = l.delta(a, a, x).expect("δ on N_S(P)");
                    let e = l.delta(b, b, psi.apply(x)).expect("δ on N_S(ψP)");
                    ((d - sa) as Elem, (e - sb) as Elem)
                })
                .collect();
            options.push(
                isomorphisms_extending(&ta, &tb, &fixed)
                    .into_iter()
                    .map(|h| (0..ta.order()).map(|i| (sa + i, sb + h.apply(i as Elem) as usize)).collect())
                    .collect(),
            );
        }
        let mut idx = vec![0usize; options.len()];
        if options.iter().any(|o| o.is_empty()) {
            continue;
        }
        'choices: loop {
            let seeds: Vec<(MorId, MorId)> =
                idx.iter().enumerate().flat_map(|(v, &i)| options[v][i].iter().copied()).collect();
            if let Ok(e) = extend(l, &psi.images, &seeds) {
                found.entry(e.morphisms.clone()).or_insert(e);
            }
            let mut v = 0;
            loop {
                if v == idx.len() {
                    break 'choices;
                }
                idx[v] += 1;
                if idx[v] < options[v].len() {
                    break;
                }
                idx[v] = 0;
                v += 1;
            }
        }
    }
    Ok(found.into_values().collect())
}

/// `Aut^I_typ(L)` with its classes modulo `Aut_L(S)`-conjugation.
#[derive(Clone, Debug)]
pub struct OutTyp {
    pub equivalences: Vec<Equivalence>,
    index: BTreeMap<Vec<MorId>, usize>,
    /// `c_x` for each `x ∈ Aut_L(S)`, in morphism order.
    pub conjugations: Vec<Equivalence>,
    /// Class of each equivalence.
    pub class_of: Vec<usize>,
    /// Members of each class; class 0 contains the identity.
    pub classes: Vec<Vec<usize>>,
}

impl OutTyp {
    pub fn new(l: &LinkingSystem, family: &[usize], bounds: &Bounds) -> Result<Self> {
        let equivalences = enumerate_aut_typ(l, family, bounds)?;
        let index: BTreeMap<Vec<MorId>, usize> =
            equivalences.iter().enumerate().map(|(i, e)| (e.morphisms.clone(), i)).collect();
        let conjugations: Vec<Equivalence> = l.aut(s_object(l)).map(|x| conjugation(l, x)).collect();
        let id = Equivalence::identity(l);
        let id_idx = *index
            .get(&id.morphisms)
            .ok_or_else(|| FlabError::internal("the identity equivalence was not found"))?;
        let mut class_of = vec![usize::MAX; equivalences.len()];
        let mut classes: Vec<Vec<usize>> = vec![];
        let mut order: Vec<usize> = vec![id_idx];
        order.extend((0..equivalences.len()).filter(|&i| i != id_idx));
        for i in order {
            if class_of[i] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let mut members = vec![];
            for x in &conjugations {
                let e = x.compose(&equivalences[i]);
                let j = *index.get(&e.morphisms).ok_or_else(|| {
                    FlabError::internal("a conjugate of an enumerated equivalence is missing")
                })?;
                if class_of[j] == usize::MAX {
                    class_of[j] = c;
                    members.push(j);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        Ok(OutTyp {
            equivalences,
            index,
            conjugations,
            class_of,
            classes,
        })
    }

    pub fn find(&self, e: &Equivalence) -> Option<usize> {
        self.index.get(&e.morphisms).copied()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn representative(&self, c: usize) -> &Equivalence {
        &self.equivalences[self.classes[c][0]]
    }

    /// Class of `[Ψ_a][Ψ_b]`.
    pub fn multiply(&self, a: usize, b: usize) -> usize {
        let e = self.representative(a).compose(self.representative(b));
        self.class_of[self.find(&e).expect("Aut^I_typ(L) is closed under composition")]
    }

    pub fn same_class(&self, a: &Equivalence, b: &Equivalence) -> bool {
        match (self.find(a), self.find(b)) {
            (Some(i), Some(j)) => self.class_of[i] == self.class_of[j],
            _ => false,
        }
    }
}

/// The leaf permutation: `i ↦ j` where `P_j` is `N_F(S)`-conjugate to
/// `Ψ(P_i)`. Entry 0 is `S`.
pub fn upsilon(l: &LinkingSystem, family: &[usize], e: &Equivalence) -> Result<Vec<usize>> {
    let f = l.fusion();
    let mut alpha = vec![0];
    for &p in &family[1..] {
        let a = l.object_of(p).ok_or_else(|| FlabError::input("family member is not an object"))?;
        let image = l.objects()[e.objects[a]];
        let orbit = f.aut_s_orbit(image);
        let hits: Vec<usize> = (1..family.len()).filter(|&j| orbit.contains(&family[j])).collect();
        match hits.as_slice() {
            [j] => alpha.push(*j),
            _ => {
                return Err(FlabError::internal(format!(
                    "{} family members are N_F(S)-conjugate to the image of {}",
                    hits.len(),
                    f.lattice().describe(p)
                )))
            }
        }
    }
    Ok(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use std::sync::Arc;

    fn linking(name: &str) -> (Arc<LinkingSystem>, Vec<usize>) {
        let e = catalog::load(name, &Bounds::default()).unwrap();
        let family = e.fusion.controlling_family(true).unwrap();
        (Arc::new(LinkingSystem::from_group(e.fusion.clone()).unwrap()), family)
    }

    #[test]
    fn inn_d8_is_fusion_preserving_for_s4() {
        let (l, _) = linking("s4-d8");
        let autos = fusion_preserving_autos(l.fusion(), &Bounds::default()).unwrap();
        let s = l.fusion().s();
        let inner: Vec<Vec<Elem>> = s
            .elements()
            .map(|g| s.elements().map(|x| s.conj(g, x)).collect())
            .collect();
        for i in inner {
            assert!(autos.iter().any(|a| a.images == i));
        }
    }

    #[test]
    fn inner_fusion_preserves_all_autos() {
        let (l, _) = linking("inner-d8");
        let autos = fusion_preserving_autos(l.fusion(), &Bounds::default()).unwrap();
        assert_eq!(autos.len(), 8);
    }

    #[test]
    fn s4_out_typ_is_trivial() {
        let (l, family) = linking("s4-d8");
        let o = OutTyp::new(&l, &family, &Bounds::default()).unwrap();
        assert_eq!(o.class_count(), 1);
        assert!(o.classes[0].iter().any(|&i| o.equivalences[i].is_identity()));
    }

    #[test]
    fn a6_aut_typ_is_a_group() {
        let (l, family) = linking("a6-d8");
        let o = OutTyp::new(&l, &family, &Bounds::default()).unwrap();
        for a in &o.equivalences {
            assert!(o.find(&a.inverse()).is_some());
            for b in &o.equivalences {
                assert!(o.find(&a.compose(b)).is_some());
            }
        }
        for c in &o.conjugations {
            assert!(o.find(c).is_some());
        }
        assert_eq!(o.equivalences.len() % o.classes[0].len(), 0);
    }

    #[test]
    fn upsilon_is_multiplicative_on_a6() {
        let (l, family) = linking("a6-d8");
        let o = OutTyp::new(&l, &family, &Bounds::default()).unwrap();
        let mut swaps = 0;
        for a in &o.equivalences {
            let ua = upsilon(&l, &family, a).unwrap();
            if ua != vec![0, 1, 2] {
                swaps += 1;
            }
            for b in &o.equivalences {
                let ub = upsilon(&l, &family, b).unwrap();
                let uab = upsilon(&l, &family, &a.compose(b)).unwrap();
                assert_eq!(uab, ub.iter().map(|&i| ua[i]).collect::<Vec<_>>());
            }
        }
        assert!(swaps > 0);
    }
}
