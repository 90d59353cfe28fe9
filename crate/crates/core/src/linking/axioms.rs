use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::category::MorId;
use super::system::LinkingSystem;
use crate::error::{FlabError, Result};
use crate::fusion::system::{compose, conj_map, identity_map};
use crate::fusion::Map;
use crate::groups::algo::p_part;
use crate::groups::Group;

/// Counts gathered while validating a linking system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub objects: usize,
    pub morphisms: usize,
    pub axioms: Vec<String>,
    pub extension_checks: usize,
}

impl LinkingSystem {
    /// Runs the category laws and every axiom validator in turn.
    pub fn validate(&self, max_work: usize) -> Result<AxiomReport> {
        self.category().validate(max_work)?;
        self.check_a1()?;
        self.check_b()?;
        self.check_a2()?;
        self.check_c()?;
        self.check_i()?;
        let extension_checks = self.check_ii()?;
        Ok(AxiomReport {
            objects: self.object_count(),
            morphisms: self.category().morphism_count(),
            axioms: ["A1", "B", "A2", "C", "I", "II"].iter().map(|s| s.to_string()).collect(),
            extension_checks,
        })
    }

    fn map_of(&self, m: MorId) -> String {
        format!(
            "{} : {} -> {}",
            self.label(m),
            self.describe_object(self.source(m)),
            self.describe_object(self.target(m))
        )
    }

    /// Objects are exactly the `F`-centric subgroups, a collection closed
    /// under `F`-conjugacy and overgroups.
    pub fn check_a1(&self) -> Result<()> {
        let f = self.fusion();
        let l = f.lattice();
        let centric: BTreeSet<usize> = (0..l.len()).filter(|&p| f.is_centric(p)).collect();
        let objects: BTreeSet<usize> = self.objects().iter().copied().collect();
        if let Some(&p) = centric.difference(&objects).next() {
            return Err(FlabError::axiom(
                "A1",
                format!("centric subgroup {} is not an object", l.describe(p)),
            ));
        }
        if let Some(&p) = objects.difference(&centric).next() {
            return Err(FlabError::axiom(
                "A1",
                format!("object {} is not centric", l.describe(p)),
            ));
        }
        for &p in &objects {
            if let Some(q) = f.conjugates(p).into_iter().find(|q| !objects.contains(q)) {
                return Err(FlabError::axiom(
                    "A1",
                    format!("{} is conjugate to an object but missing", l.describe(q)),
                ));
            }
            if let Some(q) = (0..l.len()).find(|&q| l.contains(q, p) && !objects.contains(&q)) {
                return Err(FlabError::axiom(
                    "A1",
                    format!("overgroup {} of an object is missing", l.describe(q)),
                ));
            }
        }
        Ok(())
    }

    /// `ρ` is a functor onto the fusion system, and `E(P) = δ(Z(P))` acts
    /// freely on `Mor(P, Q)` by precomposition with the fibers of `ρ` as
    /// orbits.
    pub fn check_a2(&self) -> Result<()> {
        let f = self.fusion();
        let l = f.lattice();
        let n = self.object_count();
        for a in 0..n {
            let id = self.identity(a);
            if *self.rho(id) != identity_map(l, self.objects()[a]) {
                return Err(FlabError::axiom(
                    "A2",
                    format!("rho of the identity of {} is not the identity", self.describe_object(a)),
                ));
            }
        }
        for a in 0..n {
            let pa = self.objects()[a];
            let center: Vec<MorId> = l
                .sub(l.center(pa))
                .elements()
                .iter()
                .map(|&z| {
                    self.delta(a, a, z).ok_or_else(|| {
                        FlabError::axiom(
                            "A2",
                            format!("delta is undefined on the center of {}", self.describe_object(a)),
                        )
                    })
                })
                .collect::<Result<_>>()?;
            for b in 0..n {
                let pb = self.objects()[b];
                let want: BTreeSet<&Map> = f.hom(pa, pb).into_iter().collect();
                let mut got: BTreeSet<&Map> = BTreeSet::new();
                for phi in self.hom(a, b) {
                    let orbit: HashSet<MorId> =
                        center.iter().map(|&e| self.compose(phi, e)).collect();
                    if orbit.len() != center.len() {
                        return Err(FlabError::axiom(
                            "A2",
                            format!("E(P) does not act freely on {}", self.map_of(phi)),
                        ));
                    }
                }
                for phi in self.hom(a, b) {
                    let r = self.rho(phi);
                    if !want.contains(r) {
                        return Err(FlabError::axiom(
                            "A2",
                            format!("rho({}) is not a morphism of the fusion system", self.map_of(phi)),
                        ));
                    }
                    got.insert(r);
                    let orbit: HashSet<MorId> =
                        center.iter().map(|&e| self.compose(phi, e)).collect();
                    let fiber: HashSet<MorId> =
                        self.hom(a, b).filter(|&psi| self.rho(psi) == r).collect();
                    if fiber != orbit {
                        return Err(FlabError::axiom(
                            "A2",
                            format!(
                                "the fiber of rho through {} is not an E(P)-orbit ({} morphisms, orbit of {})",
                                self.map_of(phi),
                                fiber.len(),
                                orbit.len()
                            ),
                        ));
                    }
                }
                if got.len() != want.len() {
                    return Err(FlabError::axiom(
                        "A2",
                        format!(
                            "rho misses {} of the fusion morphisms {} -> {}",
                            want.len() - got.len(),
                            self.describe_object(a),
                            self.describe_object(b)
                        ),
                    ));
                }
                for c in 0..n {
                    for phi in self.hom(a, b) {
                        for psi in self.hom(b, c) {
                            let lhs = self.rho(self.compose(psi, phi));
                            let rhs = compose(l, pb, self.rho(psi), self.rho(phi));
                            if *lhs != rhs {
                                return Err(FlabError::axiom(
                                    "A2",
                                    format!(
                                        "rho does not respect the composite of {} and {}",
                                        self.map_of(psi),
                                        self.map_of(phi)
                                    ),
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `δ` is an injective functor from the transporter sets of `S` with
    /// `ρ ∘ δ = c_g`.
    pub fn check_b(&self) -> Result<()> {
        let f = self.fusion();
        let l = f.lattice();
        let s = l.group();
        let n = self.object_count();
        for a in 0..n {
            for b in 0..n {
                let (pa, pb) = (self.objects()[a], self.objects()[b]);
                let trans: BTreeSet<_> = l.transporter(pa, pb).into_iter().collect();
                let mut seen = HashSet::new();
                for x in s.elements() {
                    match (self.delta(a, b, x), trans.contains(&x)) {
                        (None, false) => {}
                        (None, true) => {
                            return Err(FlabError::axiom(
                                "B",
                                format!(
                                    "delta is undefined on {} in N_S({}, {})",
                                    s.label(x),
                                    self.describe_object(a),
                                    self.describe_object(b)
                                ),
                            ))
                        }
                        (Some(_), false) => {
                            return Err(FlabError::axiom(
                                "B",
                                format!(
                                    "delta is defined on {} outside N_S({}, {})",
                                    s.label(x),
                                    self.describe_object(a),
                                    self.describe_object(b)
                                ),
                            ))
                        }
                        (Some(m), true) => {
                            if self.source(m) != a || self.target(m) != b {
                                return Err(FlabError::axiom(
                                    "B",
                                    format!("delta({}) has the wrong source or target", s.label(x)),
                                ));
                            }
                            if !seen.insert(m) {
                                return Err(FlabError::axiom(
                                    "B",
                                    format!("delta is not injective: {} collides", s.label(x)),
                                ));
                            }
                            if *self.rho(m) != conj_map(l, x, pa) {
                                return Err(FlabError::axiom(
                                    "B",
                                    format!("rho(delta({})) is not conjugation", s.label(x)),
                                ));
                            }
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (pa, pb, pc) = (self.objects()[a], self.objects()[b], self.objects()[c]);
                    for x in l.transporter(pa, pb) {
                        for y in l.transporter(pb, pc) {
                            let lhs = self.compose(
                                self.delta(b, c, y).expect("checked"),
                                self.delta(a, b, x).expect("checked"),
                            );
                            let rhs = self.delta(a, c, s.mul(y, x));
                            if rhs != Some(lhs) {
                                return Err(FlabError::axiom(
                                    "B",
                                    format!(
                                        "delta({}) o delta({}) != delta({})",
                                        s.label(y),
                                        s.label(x),
                                        s.label(s.mul(y, x))
                                    ),
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `φ ∘ δ_P(g) = δ_Q(ρ(φ)(g)) ∘ φ` for every morphism `φ: P → Q` and
    /// `g ∈ P`.
    pub fn check_c(&self) -> Result<()> {
        let l = self.fusion().lattice();
        let s = l.group();
        let n = self.object_count();
        for a in 0..n {
            for b in 0..n {
                for phi in self.hom(a, b) {
                    let r = self.rho(phi);
                    for (k, &g) in self.subgroup(a).elements().iter().enumerate() {
                        let dg = self.delta(a, a, g);
                        let dh = self.delta(b, b, r[k]);
                        let ok = match (dg, dh) {
                            (Some(dg), Some(dh)) => {
                                self.compose(phi, dg) == self.compose(dh, phi)
                            }
                            _ => false,
                        };
                        if !ok {
                            return Err(FlabError::axiom(
                                "C",
                                format!(
                                    "{} o delta({}) != delta({}) o {}",
                                    self.label(phi),
                                    s.label(g),
                                    s.label(r[k]),
                                    self.map_of(phi)
                                ),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `δ_S(S)` is a Sylow subgroup of `Aut_L(S)`.
    pub fn check_i(&self) -> Result<()> {
        let l = self.fusion().lattice();
        let s_obj = self.object_of(l.whole()).ok_or_else(|| {
            FlabError::axiom("I", "S is not an object")
        })?;
        let aut = self.aut(s_obj).len();
        let want = p_part(aut, self.fusion().prime());
        if want != l.group().order() {
            return Err(FlabError::axiom(
                "I",
                format!(
                    "|Aut_L(S)| = {aut} has Sylow {}-subgroups of order {want}, but |S| = {}",
                    self.fusion().prime(),
                    l.group().order()
                ),
            ));
        }
        Ok(())
    }

    /// For every isomorphism `φ: P → P'` and `P ⊴ R`, `P' ⊴ R'` with
    /// `φ δ(R) φ⁻¹ ≤ δ(R')`, some `φ̄: R → R'` restricts to `φ`. Returns the
    /// number of triples checked.
    pub fn check_ii(&self) -> Result<usize> {
        let l = self.fusion().lattice();
        let n = self.object_count();
        let over: Vec<Vec<usize>> = (0..n)
            .map(|a| {
                let pa = self.objects()[a];
                let np = l.normalizer(pa);
                (0..n)
                    .filter(|&r| {
                        let pr = self.objects()[r];
                        l.contains(pr, pa) && l.contains(np, pr)
                    })
                    .collect()
            })
            .collect();
        let mut checked = 0;
        for a in 0..n {
            for a2 in 0..n {
                if self.subgroup(a).order() != self.subgroup(a2).order() {
                    continue;
                }
                for phi in self.hom(a, a2) {
                    let Some(phi_inv) = self.category().inverse(phi) else {
                        continue;
                    };
                    for &r in &over[a] {
                        let conj: Vec<MorId> = self
                            .subgroup(r)
                            .elements()
                            .iter()
                            .map(|&g| {
                                let d = self.delta(a, a, g).expect("R normalizes P");
                                self.compose(phi, self.compose(d, phi_inv))
                            })
                            .collect();
                        for &r2 in &over[a2] {
                            let allowed: HashSet<MorId> = self
                                .subgroup(r2)
                                .elements()
                                .iter()
                                .map(|&h| self.delta(a2, a2, h).expect("R' normalizes P'"))
                                .collect();
                            if !conj.iter().all(|m| allowed.contains(m)) {
                                continue;
                            }
                            checked += 1;
                            let ir = self.inclusion(a, r).expect("P ≤ R");
                            let ir2 = self.inclusion(a2, r2).expect("P' ≤ R'");
                            let target = self.compose(ir2, phi);
                            if !self.hom(r, r2).any(|bar| self.compose(bar, ir) == target) {
                                return Err(FlabError::axiom(
                                    "II",
                                    format!(
                                        "{} does not extend to {} -> {}",
                                        self.map_of(phi),
                                        self.describe_object(r),
                                        self.describe_object(r2)
                                    ),
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(checked)
    }
}

#[cfg(test)]
mod tests {
    use crate::catalog;
    use crate::config::Bounds;
    use crate::linking::LinkingSystem;

    #[test]
    fn catalog_linking_systems_validate() {
        for name in ["s4-d8", "a6-d8", "pgl2-9", "inner-d8"] {
            let e = catalog::load(name, &Bounds::default()).unwrap();
            let l = LinkingSystem::from_group(e.fusion).unwrap();
            let r = l.validate(50_000_000).unwrap();
            assert!(r.extension_checks > 0, "{name}");
        }
    }

    #[test]
    fn mor_counts_match_center_times_hom() {
        let e = catalog::load("a6-d8", &Bounds::default()).unwrap();
        let l = LinkingSystem::from_group(e.fusion.clone()).unwrap();
        let lat = e.fusion.lattice();
        for a in 0..l.object_count() {
            for b in 0..l.object_count() {
                let (pa, pb) = (l.objects()[a], l.objects()[b]);
                assert_eq!(
                    l.hom(a, b).len(),
                    lat.order(lat.center(pa)) * e.fusion.hom(pa, pb).len()
                );
            }
        }
    }
}
