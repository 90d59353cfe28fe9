use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{FlabError, Result};
use crate::fusion::{FusionSystem, Map};
use crate::groups::{Elem, FiniteGroupTable, Group, Subgroup};
use crate::linking::LinkingSystem;

/// How the edge group between `S` and a leaf `P` is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `N_P = δ_S(N_S(P))`
    Robinson,
    /// `N_P = Aut_L(S, P)`, embedded in `Aut_L(P)` by restriction.
    LibmanSeeliger,
}

impl std::str::FromStr for Variant {
    type Err = FlabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "robinson" => Ok(Variant::Robinson),
            "ls" | "libman-seeliger" => Ok(Variant::LibmanSeeliger),
            other => Err(FlabError::input(format!("unknown variant {other:?}"))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Robinson => "robinson",
            Variant::LibmanSeeliger => "libman-seeliger",
        })
    }
}

/// One leaf `v_P` of the star: the vertex group `L_P = Aut_L(P)` and the
/// edge group `N_P` as a subgroup of the hub `L_S`.
#[derive(Clone, Debug)]
pub struct Leaf {
    /// Linking object of `P`.
    pub object: usize,
    pub group: FiniteGroupTable,
    /// `k_P(N_P)` inside the hub.
    pub edge: Subgroup,
    /// `j_P` on the elements of `edge`, in order.
    pub j: Vec<Elem>,
    /// `δ_P` on `N_S(P)`: pairs of an element of `S` and its image in `L_P`.
    pub sylow: Vec<(Elem, Elem)>,
}

/// Vertex and edge groups of the star-shaped tree of groups with hub
/// `L_S = Aut_L(S)` and one leaf for every other member of the family.
#[derive(Clone, Debug)]
pub struct RobinsonSetup {
    pub linking: Arc<LinkingSystem>,
    pub variant: Variant,
    /// Linking objects of the family, `S` first.
    pub family: Vec<usize>,
    pub hub: FiniteGroupTable,
    /// `δ_S(x)` in the hub for each `x ∈ S`.
    pub s_in_hub: Vec<Elem>,
    pub leaves: Vec<Leaf>,
    /// Whether the family was checked to generate the fusion system.
    pub controlling_checked: bool,
}

/// Element of `Aut_L(P)` (as a table index) for a morphism id.
fn local(l: &LinkingSystem, a: usize, m: usize) -> Elem {
    (m - l.aut(a).start) as Elem
}

impl RobinsonSetup {
    /// Builds and validates a setup; `family` lists lattice indices of
    /// subgroups of `S` and must contain `S`.
    pub fn new(linking: Arc<LinkingSystem>, family: &[usize], variant: Variant) -> Result<Self> {
        let f = linking.fusion().clone();
        let objects = Self::objects(&linking, family)?;
        if !controls(&f, &linking, &objects) {
            return Err(FlabError::input(
                "family does not generate the fusion system",
            ));
        }
        Self::assemble(linking, objects, variant, true)
    }

    /// Builds a setup without checking that the family controls fusion.
    pub fn new_unchecked(linking: Arc<LinkingSystem>, family: &[usize], variant: Variant) -> Result<Self> {
        let objects = Self::objects(&linking, family)?;
        Self::assemble(linking, objects, variant, false)
    }

    fn objects(linking: &LinkingSystem, family: &[usize]) -> Result<Vec<usize>> {
        let lat = linking.fusion().lattice();
        let s = lat.whole();
        if !family.contains(&s) {
            return Err(FlabError::input("the family must contain S"));
        }
        let mut objects = vec![linking.object_of(s).ok_or_else(|| FlabError::input("S is not an object"))?];
        for &p in family {
            if p == s {
                continue;
            }
            let a = linking.object_of(p).ok_or_else(|| {
                FlabError::input(format!("{} is not a centric subgroup", lat.describe(p)))
            })?;
            if objects.contains(&a) {
                return Err(FlabError::input(format!("{} is listed twice", lat.describe(p))));
            }
            objects.push(a);
        }
        Ok(objects)
    }

    fn assemble(
        linking: Arc<LinkingSystem>,
        family: Vec<usize>,
        variant: Variant,
        controlling_checked: bool,
    ) -> Result<Self> {
        let lat = linking.fusion().lattice().clone();
        let s_obj = family[0];
        let hub = linking.aut_table(s_obj);
        let s_in_hub: Vec<Elem> = lat
            .group()
            .elements()
            .map(|x| local(&linking, s_obj, linking.delta(s_obj, s_obj, x).expect("δ is defined on S")))
            .collect();
        let mut leaves = vec![];
        for &a in &family[1..] {
            let p = linking.objects()[a];
            let group = linking.aut_table(a);
            let n_s_p = lat.sub(lat.normalizer(p)).elements().to_vec();
            let sylow: Vec<(Elem, Elem)> = n_s_p
                .iter()
                .map(|&x| (x, local(&linking, a, linking.delta(a, a, x).expect("δ on N_S(P)"))))
                .collect();
            let (members, images): (Vec<usize>, Vec<usize>) = match variant {
                Variant::Robinson => n_s_p
                    .iter()
                    .map(|&x| {
                        (
                            linking.delta(s_obj, s_obj, x).expect("δ on S"),
                            linking.delta(a, a, x).expect("δ on N_S(P)"),
                        )
                    })
                    .unzip(),
                Variant::LibmanSeeliger => {
                    let r = linking.aut_restricted(a)?;
                    if !r.injective {
                        let (i, k) = first_collision(&r.restrictions);
                        return Err(FlabError::input(format!(
                            "restriction Aut_L(S, P) -> Aut_L(P) is not injective for P = {}: {} and {} agree on P",
                            lat.describe(p),
                            linking.label(r.members[i]),
                            linking.label(r.members[k])
                        )));
                    }
                    (r.members, r.restrictions)
                }
            };
            let mut pairs: Vec<(Elem, Elem)> = members
                .iter()
                .zip(&images)
                .map(|(&m, &i)| (local(&linking, s_obj, m), local(&linking, a, i)))
                .collect();
            pairs.sort_unstable();
            pairs.dedup();
            let edge = Subgroup::from_elements(pairs.iter().map(|x| x.0).collect());
            if edge.order() != pairs.len() {
                return Err(FlabError::input(format!(
                    "edge map for {} is not a function",
                    lat.describe(p)
                )));
            }
            let j: Vec<Elem> = pairs.iter().map(|x| x.1).collect();
            let setup_leaf = Leaf {
                object: a,
                group,
                edge,
                j,
                sylow,
            };
            validate_leaf(&linking, &hub, &s_in_hub, &setup_leaf)?;
            leaves.push(setup_leaf);
        }
        Ok(RobinsonSetup {
            linking,
            variant,
            family,
            hub,
            s_in_hub,
            leaves,
            controlling_checked,
        })
    }

    pub fn fusion(&self) -> &Arc<FusionSystem> {
        self.linking.fusion()
    }

    pub fn describe_leaf(&self, i: usize) -> String {
        self.linking.describe_object(self.leaves[i].object)
    }
}

fn first_collision(v: &[usize]) -> (usize, usize) {
    for i in 0..v.len() {
        for k in i + 1..v.len() {
            if v[i] == v[k] {
                return (i, k);
            }
        }
    }
    unreachable!("called only when a collision exists")
}

/// `k_P` and `j_P` are injective homomorphisms and `δ(N_S(P)) ≤ N_P`.
fn validate_leaf(l: &LinkingSystem, hub: &FiniteGroupTable, s_in_hub: &[Elem], leaf: &Leaf) -> Result<()> {
    let name = l.describe_object(leaf.object);
    let e = &leaf.edge;
    for (x, &a) in e.elements().iter().enumerate() {
        for (y, &b) in e.elements().iter().enumerate() {
            let ab = hub.mul(a, b);
            let Some(z) = e.position(ab) else {
                return Err(FlabError::input(format!("N_P for {name} is not a subgroup of L_S")));
            };
            if leaf.group.mul(leaf.j[x], leaf.j[y]) != leaf.j[z] {
                return Err(FlabError::input(format!("j_P for {name} is not a homomorphism")));
            }
        }
    }
    let mut imgs = leaf.j.clone();
    imgs.sort_unstable();
    imgs.dedup();
    if imgs.len() != leaf.j.len() {
        return Err(FlabError::input(format!("j_P for {name} is not injective")));
    }
    for &(x, img) in &leaf.sylow {
        let h = s_in_hub[x as usize];
        match e.position(h) {
            Some(k) if leaf.j[k] == img => {}
            _ => {
                return Err(FlabError::input(format!(
                    "δ(N_S(P)) is not contained in N_P for {name}"
                )))
            }
        }
    }
    Ok(())
}

/// Whether `Aut_L(P)` for `P` in the family generate the fusion system.
pub fn controls(f: &FusionSystem, l: &LinkingSystem, family: &[usize]) -> bool {
    generated_by(f, l, family).equals(f)
}

/// Fusion system generated by the automorphisms of the family members.
pub fn generated_by(f: &FusionSystem, l: &LinkingSystem, family: &[usize]) -> FusionSystem {
    let lat = f.lattice();
    let gens: Vec<(usize, Map)> = family
        .iter()
        .flat_map(|&a| {
            let p = l.objects()[a];
            l.aut(a).map(move |m| (p, l.rho(m).clone()))
        })
        .collect();
    FusionSystem::generated(lat.clone(), &gens).expect("automorphisms are injective")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::config::Bounds;

    fn setup(name: &str, variant: Variant) -> RobinsonSetup {
        let e = catalog::load(name, &Bounds::default()).unwrap();
        let l = Arc::new(LinkingSystem::from_group(e.fusion.clone()).unwrap());
        let family = e.fusion.controlling_family(false).unwrap();
        RobinsonSetup::new(l, &family, variant).unwrap()
    }

    #[test]
    fn s4_edge_is_whole_hub() {
        for v in [Variant::Robinson, Variant::LibmanSeeliger] {
            let s = setup("s4-d8", v);
            assert_eq!(s.hub.order(), 8);
            assert_eq!(s.leaves.len(), 1);
            assert_eq!(s.leaves[0].group.order(), 24);
            assert_eq!(s.leaves[0].edge.order(), 8);
        }
    }

    #[test]
    fn a6_has_two_edges_of_order_eight() {
        let s = setup("a6-d8", Variant::Robinson);
        assert_eq!(s.leaves.len(), 2);
        for leaf in &s.leaves {
            assert_eq!(leaf.edge.order(), 8);
            assert_eq!(leaf.group.order(), 24);
        }
    }

    #[test]
    fn sylow_alone_does_not_control_s4() {
        let e = catalog::load("s4-d8", &Bounds::default()).unwrap();
        let l = Arc::new(LinkingSystem::from_group(e.fusion.clone()).unwrap());
        let s = e.fusion.lattice().whole();
        assert!(RobinsonSetup::new(l.clone(), &[s], Variant::Robinson).is_err());
        assert!(RobinsonSetup::new_unchecked(l, &[s], Variant::Robinson).is_ok());
    }

    #[test]
    fn hub_table_matches_morphism_order() {
        let s = setup("s4-d8", Variant::Robinson);
        let l = &s.linking;
        let a = s.family[0];
        for (i, m) in l.aut(a).enumerate() {
            assert_eq!(s.hub.label(i as Elem), l.label(m));
        }
    }
}
