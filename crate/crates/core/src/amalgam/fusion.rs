use std::collections::HashMap;

use serde::Serialize;

use super::group::Amalgam;
use super::setup::RobinsonSetup;
use crate::error::Result;
use crate::fusion::{FusionSystem, Map};
use crate::groups::{Elem, Group};
use crate::linking::FusionCenter;

/// Outcome of comparing the fusion system of the amalgam with `F`.
#[derive(Clone, Debug, Serialize)]
pub struct FusionComparison {
    pub pass: bool,
    pub generators: usize,
    /// `(P, Q, |Hom| in the amalgam, |Hom_F(P, Q)|)` over linking objects.
    pub counts: Vec<(String, String, usize, usize)>,
    /// First morphism present on only one side.
    pub witness: Option<String>,
    /// Conjugation maps read off short words that were checked to lie in `F`.
    pub sampled_maps: usize,
    pub sampled_outside: usize,
}

/// Conjugation maps of the vertex groups on their `p`-subgroups: `L_S` on
/// `S`, and each `L_P` on the largest subgroup of `N_S(P)` it moves back
/// into `N_S(P)`.
pub fn vertex_generators(setup: &RobinsonSetup) -> Vec<(usize, Map)> {
    let f = setup.fusion();
    let lat = f.lattice();
    let s_from_hub: HashMap<Elem, Elem> =
        setup.s_in_hub.iter().enumerate().map(|(x, &h)| (h, x as Elem)).collect();
    let mut gens = vec![];
    for h in setup.hub.elements() {
        let map: Option<Map> = lat
            .sub(lat.whole())
            .elements()
            .iter()
            .map(|&x| s_from_hub.get(&setup.hub.conj(h, setup.s_in_hub[x as usize])).copied())
            .collect();
        gens.push((lat.whole(), map.expect("S is normal in its automizer")));
    }
    for leaf in &setup.leaves {
        let fwd: HashMap<Elem, Elem> = leaf.sylow.iter().copied().collect();
        let back: HashMap<Elem, Elem> = leaf.sylow.iter().map(|&(a, b)| (b, a)).collect();
        for l in leaf.group.elements() {
            let image = |x: Elem| back.get(&leaf.group.conj(l, fwd[&x])).copied();
            let dom: Vec<Elem> = leaf.sylow.iter().map(|x| x.0).filter(|&x| image(x).is_some()).collect();
            let q = lat.find_elems(&dom).expect("intersection of subgroups");
            let map: Map = lat.sub(q).elements().iter().map(|&x| image(x).expect("in domain")).collect();
            gens.push((q, map));
        }
    }
    gens
}

/// Fusion system of the amalgam on `S`, generated by its vertex groups.
pub fn amalgam_fusion(setup: &RobinsonSetup) -> Result<FusionSystem> {
    FusionSystem::generated(setup.fusion().lattice().clone(), &vertex_generators(setup))
}

/// Compares the fusion system of the amalgam with `F`. Conjugation maps of
/// words with at most `radius` syllables are also checked to lie in `F`.
pub fn verify_fusion(g: &Amalgam, radius: usize, max_words: usize) -> Result<FusionComparison> {
    let setup = &g.setup;
    let f = setup.fusion();
    let lat = f.lattice();
    let gens = vertex_generators(setup);
    let generated = FusionSystem::generated(lat.clone(), &gens)?;
    let witness = generated.first_difference(f).map(|(p, m, in_amalgam)| {
        let side = if in_amalgam { "only in the amalgam" } else { "only in F" };
        format!("{} ({side})", f.describe_map(p, &m))
    });
    let objects = setup.linking.objects();
    let mut counts = vec![];
    for &p in objects {
        for &q in objects {
            counts.push((
                lat.describe(p),
                lat.describe(q),
                generated.hom(p, q).len(),
                f.hom(p, q).len(),
            ));
        }
    }
    let mut sampled_maps = 0;
    let mut sampled_outside = 0;
    for w in g.words_up_to(radius, max_words)? {
        for p in 0..lat.len() {
            if let Some((_, map)) = g.conjugate_subgroup(&w, lat.sub(p)) {
                sampled_maps += 1;
                if !f.homs_from(p).contains(&map) {
                    sampled_outside += 1;
                }
            }
        }
    }
    Ok(FusionComparison {
        pass: witness.is_none() && sampled_outside == 0,
        generators: gens.len(),
        counts,
        witness,
        sampled_maps,
        sampled_outside,
    })
}

/// Elements of `Z(S)` whose images are central in every vertex group.
pub fn amalgam_center(setup: &RobinsonSetup) -> Vec<Elem> {
    let lat = setup.fusion().lattice();
    let central = |g: &crate::groups::FiniteGroupTable, x: Elem| g.elements().all(|y| g.mul(x, y) == g.mul(y, x));
    let mut out: Vec<Elem> = lat
        .sub(lat.center(lat.whole()))
        .elements()
        .iter()
        .copied()
        .filter(|&z| central(&setup.hub, setup.s_in_hub[z as usize]))
        .filter(|&z| {
            setup.leaves.iter().all(|leaf| {
                let d = leaf.sylow.iter().find(|x| x.0 == z).expect("Z(S) lies in N_S(P)").1;
                central(&leaf.group, d)
            })
        })
        .collect();
    out.sort_unstable();
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterComparison {
    pub amalgam: Vec<String>,
    pub inverse_limit: Vec<String>,
    pub pass: bool,
}

/// The amalgam center next to `lim Z` over the centric orbit category.
pub fn compare_center(setup: &RobinsonSetup, max_elements: usize) -> Result<CenterComparison> {
    let f = setup.fusion();
    let s = f.s();
    let a = amalgam_center(setup);
    let lim = FusionCenter::new(f, max_elements)?;
    Ok(CenterComparison {
        pass: a == lim.elements,
        amalgam: a.iter().map(|&x| s.label(x).to_string()).collect(),
        inverse_limit: lim.elements.iter().map(|&x| s.label(x).to_string()).collect(),
    })
}
