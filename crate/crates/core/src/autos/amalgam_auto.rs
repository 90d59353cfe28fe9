use serde::{Deserialize, Serialize};

use super::equivalence::{conjugation, extend, s_object, upsilon, Equivalence};
use crate::amalgam::{Amalgam, AmalgamWord, RobinsonSetup, VertexLetter};
use crate::error::{FlabError, Result};
use crate::groups::{Elem, Group};
use crate::linking::MorId;

/// An automorphism of the amalgam given vertex by vertex: hub letters go
/// through `hub`, and a letter `l` of leaf `i` goes to
/// `w_i · leaves[i-1](l) · w_i⁻¹` with `leaves[i-1](l)` in leaf
/// `permutation[i]` and `w_i = twists[i-1]` a hub letter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmalgamAutomorphism {
    /// Leaf permutation; entry 0 is the hub.
    pub permutation: Vec<usize>,
    pub hub: Vec<Elem>,
    pub leaves: Vec<Vec<Elem>>,
    pub twists: Vec<Elem>,
}

impl AmalgamAutomorphism {
    pub fn identity(setup: &RobinsonSetup) -> Self {
        AmalgamAutomorphism {
            permutation: (0..=setup.leaves.len()).collect(),
            hub: setup.hub.elements().collect(),
            leaves: setup.leaves.iter().map(|l| l.group.elements().collect()).collect(),
            twists: vec![0; setup.leaves.len()],
        }
    }

    /// Conjugation by the hub letter `x`.
    pub fn hub_conjugation(setup: &RobinsonSetup, x: Elem) -> Self {
        let mut a = Self::identity(setup);
        a.hub = setup.hub.elements().map(|h| setup.hub.conj(x, h)).collect();
        a.twists = vec![x; setup.leaves.len()];
        a
    }

    /// `self ∘ other`
    pub fn compose(&self, setup: &RobinsonSetup, other: &Self) -> Self {
        let k = setup.leaves.len();
        AmalgamAutomorphism {
            permutation: other.permutation.iter().map(|&i| self.permutation[i]).collect(),
            hub: other.hub.iter().map(|&h| self.hub[h as usize]).collect(),
            leaves: (0..k)
                .map(|i| {
                    let j = other.permutation[i + 1];
                    other.leaves[i].iter().map(|&l| self.leaves[j - 1][l as usize]).collect()
                })
                .collect(),
            twists: (0..k)
                .map(|i| {
                    let j = other.permutation[i + 1];
                    setup.hub.mul(self.hub[other.twists[i] as usize], self.twists[j - 1])
                })
                .collect(),
        }
    }

    /// Image of a vertex letter as a product of vertex letters.
    pub fn image(&self, setup: &RobinsonSetup, v: VertexLetter) -> Vec<VertexLetter> {
        match v {
            VertexLetter::Hub(h) => vec![VertexLetter::Hub(self.hub[h as usize])],
            VertexLetter::Leaf(i, l) => {
                let w = self.twists[i - 1];
                vec![
                    VertexLetter::Hub(w),
                    VertexLetter::Leaf(self.permutation[i], self.leaves[i - 1][l as usize]),
                    VertexLetter::Hub(setup.hub.inv(w)),
                ]
            }
        }
    }

    /// Applies the automorphism to a normal form.
    pub fn apply(&self, g: &Amalgam, w: &AmalgamWord) -> AmalgamWord {
        let letters: Vec<VertexLetter> = g
            .letters(w)
            .into_iter()
            .flat_map(|x| self.image(&g.setup, g.to_vertex(x)))
            .collect();
        g.reduce_vertex(&letters)
    }

    /// Checks bijectivity on each vertex group, the homomorphism property
    /// and agreement on every edge group; returns the first failure.
    pub fn certificate(&self, setup: &RobinsonSetup) -> std::result::Result<(), String> {
        let hub = &setup.hub;
        let k = setup.leaves.len();
        let mut perm = self.permutation[1..].to_vec();
        perm.sort_unstable();
        if self.permutation[0] != 0 || perm != (1..=k).collect::<Vec<_>>() {
            return Err("the leaf permutation is not a permutation".into());
        }
        let is_iso = |g: &crate::groups::FiniteGroupTable, h: &crate::groups::FiniteGroupTable, m: &[Elem]| {
            let hom = crate::groups::GroupHom { images: m.to_vec() };
            g.order() == h.order() && hom.is_injective() && hom.is_homomorphism(g, h)
        };
        if !is_iso(hub, hub, &self.hub) {
            return Err("the hub map is not an automorphism".into());
        }
        let s_image: Vec<Elem> = {
            let mut v: Vec<Elem> = setup.s_in_hub.iter().map(|&x| self.hub[x as usize]).collect();
            v.sort_unstable();
            v
        };
        let mut s_sorted = setup.s_in_hub.clone();
        s_sorted.sort_unstable();
        if s_image != s_sorted {
            return Err("the hub map does not preserve S".into());
        }
        for i in 0..k {
            let src = &setup.leaves[i];
            let j = self.permutation[i + 1];
            let tgt = &setup.leaves[j - 1];
            if !is_iso(&src.group, &tgt.group, &self.leaves[i]) {
                return Err(format!("the map of leaf {} is not an isomorphism", i + 1));
            }
            let w = self.twists[i];
            for (pos, &e) in src.edge.elements().iter().enumerate() {
                let via_leaf = self.leaves[i][src.j[pos] as usize];
                let Some(back) = tgt.j.iter().position(|&x| x == via_leaf) else {
                    return Err(format!("leaf {} does not map its edge group onto that of leaf {j}", i + 1));
                };
                let lhs = self.hub[e as usize];
                let rhs = hub.conj(w, tgt.edge.elements()[back]);
                if lhs != rhs {
                    return Err(format!(
                        "edge {}: hub image {} differs from leaf image {}",
                        i + 1,
                        hub.label(lhs),
                        hub.label(rhs)
                    ));
                }
            }
        }
        Ok(())
    }

    /// `ψ` on `S` read off the hub map.
    pub fn on_s(&self, setup: &RobinsonSetup) -> Option<Vec<Elem>> {
        let back: std::collections::HashMap<Elem, Elem> =
            setup.s_in_hub.iter().enumerate().map(|(x, &h)| (h, x as Elem)).collect();
        setup.s_in_hub.iter().map(|&h| back.get(&self.hub[h as usize]).copied()).collect()
    }
}

/// Whether two automorphisms differ by conjugation by a hub letter, and by which.
pub fn differ_by_hub_conjugation(
    g: &Amalgam,
    a: &AmalgamAutomorphism,
    b: &AmalgamAutomorphism,
) -> Option<Elem> {
    let setup = &g.setup;
    let letters = g.vertex_letters();
    let images_b: Vec<AmalgamWord> = letters.iter().map(|&v| b.apply(g, &g.reduce_vertex(&[v]))).collect();
    setup.hub.elements().find(|&x| {
        let c = AmalgamAutomorphism::hub_conjugation(setup, x).compose(setup, a);
        letters
            .iter()
            .zip(&images_b)
            .all(|(&v, ib)| c.apply(g, &g.reduce_vertex(&[v])) == *ib)
    })
}

/// Output of the section `γ`.
#[derive(Clone, Debug, Serialize)]
pub struct GammaResult {
    pub automorphism: AmalgamAutomorphism,
    /// Hub elements `x_j`, in the order the leaves were processed.
    pub steps: Vec<Elem>,
    /// Leaves that moved again after their own step and needed a twist.
    pub twisted_leaves: Vec<usize>,
    /// `c_x ∘ Ψ` with `x = x_k ⋯ x_1`.
    pub adjusted: Equivalence,
}

fn hub_elem(setup: &RobinsonSetup, m: MorId) -> Elem {
    (m - setup.linking.aut(setup.family[0]).start) as Elem
}

/// `γ` on a representative: conjugates `Ψ` step by step by hub elements
/// until each leaf `P_j` goes to `P_{α(j)}`, processing leaves in `order`,
/// then restricts to the vertex groups.
pub fn gamma(setup: &RobinsonSetup, psi: &Equivalence, order: &[usize]) -> Result<GammaResult> {
    let l = &setup.linking;
    let family_lat: Vec<usize> = setup.family.iter().map(|&a| l.objects()[a]).collect();
    let alpha = upsilon(l, &family_lat, psi)?;
    let s_obj = s_object(l);
    let hub_mors: Vec<MorId> = l.aut(s_obj).collect();
    let mut current = psi.clone();
    let mut steps = vec![];
    for &j in order {
        let want = setup.family[alpha[j]];
        let now = current.objects[setup.family[j]];
        let x = hub_mors
            .iter()
            .copied()
            .find(|&x| conjugation(l, x).objects[now] == want)
            .ok_or_else(|| FlabError::internal(format!("no hub element moves the image of leaf {j} into place")))?;
        current = conjugation(l, x).compose(&current);
        steps.push(hub_elem(setup, x));
    }
    let hub: Vec<Elem> = setup
        .hub
        .elements()
        .map(|h| hub_elem(setup, current.apply(hub_mors[h as usize])))
        .collect();
    let mut leaves = vec![];
    let mut twists = vec![];
    let mut twisted_leaves = vec![];
    for (i, leaf) in setup.leaves.iter().enumerate() {
        let a = leaf.object;
        let target = setup.family[alpha[i + 1]];
        let now = current.objects[a];
        let start = l.aut(target).start;
        let (w, fix): (Elem, Option<(MorId, MorId)>) = if now == target {
            (0, None)
        } else {
            twisted_leaves.push(i + 1);
            let y = hub_mors
                .iter()
                .copied()
                .find(|&y| conjugation(l, y).objects[now] == target)
                .ok_or_else(|| FlabError::internal("no hub element moves a leaf image into place"))?;
            let yr = l.restrict(y, now, target).expect("restriction of a hub element");
            let yi = l.category().inverse(yr).expect("isomorphism");
            let w = setup.hub.inv(hub_elem(setup, y));
            (w, Some((yr, yi)))
        };
        let map: Vec<Elem> = l
            .aut(a)
            .map(|m| {
                let v = current.apply(m);
                let v = match fix {
                    Some((yr, yi)) => l.compose(yr, l.compose(v, yi)),
                    None => v,
                };
                (v - start) as Elem
            })
            .collect();
        leaves.push(map);
        twists.push(w);
    }
    let automorphism = AmalgamAutomorphism {
        permutation: alpha,
        hub,
        leaves,
        twists,
    };
    automorphism
        .certificate(setup)
        .map_err(|e| FlabError::internal(format!("γ produced an invalid automorphism: {e}")))?;
    Ok(GammaResult {
        automorphism,
        steps,
        twisted_leaves,
        adjusted: current,
    })
}

/// `Ω`: the equivalence of `L` an amalgam automorphism preserving `S`
/// induces, read off its vertex maps.
pub fn omega(setup: &RobinsonSetup, auto: &AmalgamAutomorphism) -> Result<Equivalence> {
    auto.certificate(setup)
        .map_err(|e| FlabError::Axiom {
            axiom: "vertex compatibility".into(),
            witness: e,
        })?;
    let l = &setup.linking;
    let psi = auto.on_s(setup).ok_or_else(|| FlabError::internal("certified maps preserve S"))?;
    let s_obj = s_object(l);
    let hub_start = l.aut(s_obj).start;
    let mut seeds: Vec<(MorId, MorId)> = setup
        .hub
        .elements()
        .map(|h| (hub_start + h as usize, hub_start + auto.hub[h as usize] as usize))
        .collect();
    for (i, leaf) in setup.leaves.iter().enumerate() {
        let target = setup.family[auto.permutation[i + 1]];
        let w = hub_start + auto.twists[i] as usize;
        let img_obj = conjugation(l, w).objects[target];
        let wr = l.restrict(w, target, img_obj).expect("restriction of a hub element");
        let wi = l.category().inverse(wr).expect("isomorphism");
        let start = l.aut(target).start;
        for (k, m) in l.aut(leaf.object).enumerate() {
            let v = start + auto.leaves[i][k] as usize;
            seeds.push((m, l.compose(wr, l.compose(v, wi))));
        }
    }
    extend(l, &psi, &seeds).map_err(|e| FlabError::Axiom {
        axiom: "vertex compatibility".into(),
        witness: format!("restriction data is not functorial: {}", e.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::Variant;
    use crate::autos::OutTyp;
    use crate::catalog;
    use crate::config::Bounds;
    use crate::linking::LinkingSystem;
    use std::sync::Arc;

    fn build(name: &str) -> (Arc<RobinsonSetup>, Amalgam, OutTyp) {
        let e = catalog::load(name, &Bounds::default()).unwrap();
        let family = e.fusion.controlling_family(true).unwrap();
        let l = Arc::new(LinkingSystem::from_group(e.fusion.clone()).unwrap());
        let setup = Arc::new(RobinsonSetup::new(l.clone(), &family, Variant::Robinson).unwrap());
        let o = OutTyp::new(&l, &family, &Bounds::default()).unwrap();
        (setup.clone(), Amalgam::new(setup), o)
    }

    #[test]
    fn omega_of_hub_conjugation_is_conjugation() {
        for name in ["s4-d8", "a6-d8"] {
            let (setup, _, _) = build(name);
            let start = setup.linking.aut(setup.family[0]).start;
            for x in setup.hub.elements() {
                let c = AmalgamAutomorphism::hub_conjugation(&setup, x);
                let e = omega(&setup, &c).unwrap();
                assert_eq!(e, conjugation(&setup.linking, start + x as usize), "{name} {x}");
            }
        }
    }

    #[test]
    fn gamma_splits_omega_on_a6() {
        let (setup, g, o) = build("a6-d8");
        let k = setup.leaves.len();
        for c in 0..o.class_count() {
            let rep = o.representative(c);
            let r = gamma(&setup, rep, &(1..=k).collect::<Vec<_>>()).unwrap();
            let back = omega(&setup, &r.automorphism).unwrap();
            assert!(o.same_class(&back, rep));
            let rev = gamma(&setup, rep, &(1..=k).rev().collect::<Vec<_>>()).unwrap();
            assert!(differ_by_hub_conjugation(&g, &r.automorphism, &rev.automorphism).is_some());
        }
    }

    #[test]
    fn apply_is_a_homomorphism() {
        let (setup, g, o) = build("a6-d8");
        let k = setup.leaves.len();
        let letters = g.vertex_letters();
        for c in 0..o.class_count() {
            let a = gamma(&setup, o.representative(c), &(1..=k).collect::<Vec<_>>()).unwrap().automorphism;
            for (n, &u) in letters.iter().enumerate().step_by(5) {
                let v = letters[(n * 7 + 3) % letters.len()];
                let uv = g.reduce_vertex(&[u, v]);
                let lhs = a.apply(&g, &uv);
                let rhs = g.multiply(&a.apply(&g, &g.reduce_vertex(&[u])), &a.apply(&g, &g.reduce_vertex(&[v])));
                assert_eq!(lhs, rhs);
            }
        }
    }
}
