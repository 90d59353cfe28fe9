use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::system::{compose, conj_map, invert, restrict, FusionSystem, Map};
use crate::groups::algo::p_part;
use crate::groups::{Elem, Group, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationReport {
    pub saturated: bool,
    pub axiom_i: bool,
    pub axiom_ii: bool,
    /// The continuity axiom holds trivially because `S` is finite.
    pub axiom_iii_vacuous: bool,
    pub subgroups_checked: usize,
    pub morphisms_checked: usize,
    pub counterexample: Option<String>,
}

impl FusionSystem {
    /// Checks the Sylow axiom on every fully normalized subgroup and the
    /// extension axiom on every morphism with fully centralized image.
    pub fn check_saturation(&self) -> SaturationReport {
        let l = self.lattice();
        let p = self.prime();
        let mut counterexample = None;
        let mut axiom_i = true;
        let mut subgroups_checked = 0;
        for q in 0..l.len() {
            if !self.is_fully_normalized(q) {
                continue;
            }
            subgroups_checked += 1;
            if !self.is_fully_centralized(q) {
                axiom_i = false;
                counterexample.get_or_insert(format!(
                    "axiom I: {} is fully normalized but not fully centralized",
                    l.describe(q)
                ));
                continue;
            }
            let data = self.aut_data(q);
            let want = p_part(data.group.order(), p);
            if data.from_s.order() != want {
                axiom_i = false;
                counterexample.get_or_insert(format!(
                    "axiom I: |Aut_S({})| = {} but the Sylow {p}-subgroups of Aut_F have order {want}",
                    l.describe(q),
                    data.from_s.order()
                ));
            }
        }

        let mut axiom_ii = true;
        let mut morphisms_checked = 0;
        'outer: for q in 0..l.len() {
            let n_q = l.sub(l.normalizer(q)).elements().to_vec();
            for f in self.homs_from(q) {
                let r = self.image(f);
                if !self.is_fully_centralized(r) {
                    continue;
                }
                morphisms_checked += 1;
                let nf = self.extension_domain(q, f, r, &n_q);
                let t = l.find(&nf).expect("N_f is a subgroup");
                let extends = self
                    .homs_from(t)
                    .iter()
                    .any(|g| restrict(l, t, g, q) == *f);
                if !extends {
                    axiom_ii = false;
                    counterexample.get_or_insert(format!(
                        "axiom II: {} does not extend to N_f = {}",
                        self.describe_map(q, f),
                        l.describe(t)
                    ));
                    break 'outer;
                }
            }
        }
        SaturationReport {
            saturated: axiom_i && axiom_ii,
            axiom_i,
            axiom_ii,
            axiom_iii_vacuous: true,
            subgroups_checked,
            morphisms_checked,
            counterexample,
        }
    }

    /// `N_f = {g ∈ N_S(P) : f ∘ c_g ∘ f⁻¹ ∈ Aut_S(f(P))}`
    pub fn extension_domain(&self, q: usize, f: &Map, r: usize, n_q: &[Elem]) -> Subgroup {
        let l = self.lattice();
        let aut_s_r: BTreeSet<Map> = l
            .sub(l.normalizer(r))
            .elements()
            .iter()
            .map(|&y| conj_map(l, y, r))
            .collect();
        let f_inv = invert(l, q, f, r);
        Subgroup::from_elements(
            n_q.iter()
                .copied()
                .filter(|&g| {
                    let cg = conj_map(l, g, q);
                    let m = compose(l, q, f, &compose(l, q, &cg, &f_inv));
                    aut_s_r.contains(&m)
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::config::Bounds;
    use crate::fusion::lattice::SubgroupLattice;
    use crate::groups::{algo, FiniteGroupTable, PermGroup};

    fn lattice(gens: &[&str], degree: usize) -> Arc<SubgroupLattice> {
        let g = PermGroup::from_cycle_strings(degree, gens).unwrap();
        Arc::new(SubgroupLattice::new(FiniteGroupTable::from_group(&g), 2, &Bounds::default()).unwrap())
    }

    #[test]
    fn group_fusion_is_saturated() {
        let g = Arc::new(PermGroup::from_cycle_strings(4, &["(1 2)", "(1 2 3 4)"]).unwrap());
        let s = algo::sylow(&*g, 2);
        let f = FusionSystem::from_group("s4", g, &s, 2, &Bounds::default()).unwrap();
        let r = f.check_saturation();
        assert!(r.saturated, "{r:?}");
        assert!(r.axiom_iii_vacuous);
    }

    #[test]
    fn inner_fusion_is_saturated() {
        let l = lattice(&["(1 2 3 4)", "(1 3)"], 4);
        assert!(FusionSystem::inner(l).check_saturation().saturated);
    }

    #[test]
    fn inverting_a_cyclic_group_of_order_four_breaks_the_sylow_axiom() {
        let l = lattice(&["(1 2 3 4)"], 4);
        let s = l.whole();
        let inv: Map = l.sub(s).elements().iter().map(|&x| l.group().inv(x)).collect();
        let f = FusionSystem::generated(l, &[(s, inv)]).unwrap();
        let r = f.check_saturation();
        assert!(!r.saturated);
        assert!(!r.axiom_i);
        assert!(r.counterexample.unwrap().starts_with("axiom I"));
    }

    #[test]
    fn fusing_a_reflection_with_the_center_breaks_extension() {
        let l = lattice(&["(1 2 3 4)", "(1 3)"], 4);
        let s = l.group();
        let z = algo::center(s).elements()[1];
        let refl = s
            .elements()
            .find(|&x| s.elem_order(x) == 2 && x != z)
            .unwrap();
        let src = l.find_elems(&[0, refl]).unwrap();
        let f = FusionSystem::generated(l.clone(), &[(src, vec![0, z])]).unwrap();
        let r = f.check_saturation();
        assert!(!r.saturated, "{r:?}");
    }
}
