use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::category::FiniteCategory;
use super::system::LinkingSystem;
use crate::config::Bounds;
use crate::error::{FlabError, Result};
use crate::fusion::io::{eval, regular_words, Word};
use crate::fusion::{FusionSystem, Map, Provenance, SubgroupLattice};
use crate::groups::hom::extend_on_generated;
use crate::groups::io::GroupFile;
use crate::groups::{Elem, FiniteGroupTable, Group, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectSpec {
    pub elements: Vec<Word>,
    /// Generators whose images describe `ρ` on morphisms out of this object.
    pub generators: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomSetSpec {
    pub source: usize,
    pub target: usize,
    pub labels: Vec<String>,
    /// Per morphism, the images of the source object's generators.
    pub rho: Vec<Vec<Word>>,
    /// Pairs `(x, i)`: `δ(x)` is morphism `i` of this set.
    pub delta: Vec<(Word, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionSpec {
    pub source: usize,
    pub middle: usize,
    pub target: usize,
    /// `table[g][f]` is the index of `g ∘ f`.
    pub table: Vec<Vec<usize>>,
}

/// Abstract linking system on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkingFile {
    pub name: String,
    pub prime: usize,
    pub s: GroupFile,
    pub objects: Vec<ObjectSpec>,
    pub hom_sets: Vec<HomSetSpec>,
    pub compositions: Vec<CompositionSpec>,
    /// Index of the identity within each endomorphism set.
    pub identities: Vec<usize>,
}

impl LinkingFile {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn export(l: &LinkingSystem, name: &str) -> Self {
        let f = l.fusion();
        let lat = f.lattice();
        let (group, words) = regular_words(lat.group(), name);
        let w = |x: Elem| words[x as usize].clone();
        let n = l.object_count();
        let objects = (0..n)
            .map(|a| {
                let p = l.objects()[a];
                ObjectSpec {
                    elements: lat.sub(p).elements().iter().map(|&x| w(x)).collect(),
                    generators: lat.generators(p).iter().map(|&x| w(x)).collect(),
                }
            })
            .collect();
        let mut hom_sets = vec![];
        let mut compositions = vec![];
        for a in 0..n {
            let pa = l.objects()[a];
            let src = lat.sub(pa);
            for b in 0..n {
                let range = l.hom(a, b);
                if range.is_empty() {
                    continue;
                }
                let start = range.start;
                hom_sets.push(HomSetSpec {
                    source: a,
                    target: b,
                    labels: range.clone().map(|m| l.label(m).to_string()).collect(),
                    rho: range
                        .clone()
                        .map(|m| {
                            lat.generators(pa)
                                .iter()
                                .map(|&x| w(l.rho(m)[src.position(x).expect("generator of P")]))
                                .collect()
                        })
                        .collect(),
                    delta: l
                        .delta_table(a, b)
                        .iter()
                        .enumerate()
                        .filter_map(|(x, m)| m.map(|m| (w(x as Elem), m - start)))
                        .collect(),
                });
                for c in 0..n {
                    let bc = l.hom(b, c);
                    if bc.is_empty() {
                        continue;
                    }
                    let ac = l.hom(a, c).start;
                    compositions.push(CompositionSpec {
                        source: a,
                        middle: b,
                        target: c,
                        table: bc
                            .map(|g| range.clone().map(|f| l.compose(g, f) - ac).collect())
                            .collect(),
                    });
                }
            }
        }
        LinkingFile {
            name: name.to_string(),
            prime: f.prime(),
            s: group,
            objects,
            hom_sets,
            compositions,
            identities: vec![0; n],
        }
    }

    /// Builds the category and structure maps without checking axioms.
    pub fn build_unchecked(&self, bounds: &Bounds) -> Result<LinkingSystem> {
        let s = self.s.build()?;
        bounds.check_order("S", s.order())?;
        let table = FiniteGroupTable::from_group(&s);
        let lat = Arc::new(SubgroupLattice::new(table, self.prime, bounds)?);
        let n = self.objects.len();
        if self.identities.len() != n {
            return Err(FlabError::input("one identity index per object is required"));
        }
        let ev = |w: &Word| eval(&s, w);
        let mut objects = vec![];
        let mut gens = vec![];
        for (a, o) in self.objects.iter().enumerate() {
            let elems = o.elements.iter().map(ev).collect::<Result<Vec<_>>>()?;
            let p = lat.find(&Subgroup::from_elements(elems)).ok_or_else(|| {
                FlabError::input(format!("object {a} is not a subgroup of S"))
            })?;
            if objects.contains(&p) {
                return Err(FlabError::input(format!("object {a} is listed twice")));
            }
            let g = o.generators.iter().map(ev).collect::<Result<Vec<_>>>()?;
            if crate::groups::algo::generate(&s, &g) != *lat.sub(p) {
                return Err(FlabError::input(format!("generators of object {a} do not generate it")));
            }
            objects.push(p);
            gens.push(g);
        }
        let mut sets: HashMap<(usize, usize), &HomSetSpec> = HashMap::new();
        for h in &self.hom_sets {
            if h.source >= n || h.target >= n {
                return Err(FlabError::input("hom set refers to a missing object"));
            }
            if h.rho.len() != h.labels.len() {
                return Err(FlabError::input(format!(
                    "hom set {} -> {}: {} labels but {} rho entries",
                    h.source,
                    h.target,
                    h.labels.len(),
                    h.rho.len()
                )));
            }
            if sets.insert((h.source, h.target), h).is_some() {
                return Err(FlabError::input(format!("hom set {} -> {} is listed twice", h.source, h.target)));
            }
        }
        let count = |a: usize, b: usize| sets.get(&(a, b)).map_or(0, |h| h.labels.len());
        // renumber endomorphisms so that the identity comes first
        let swap: Vec<usize> = self.identities.clone();
        for (a, &i) in swap.iter().enumerate() {
            if i >= count(a, a) {
                return Err(FlabError::input(format!("identity index of object {a} out of range")));
            }
        }
        let to_local = |a: usize, b: usize, i: usize| -> usize {
            if a != b {
                i
            } else if i == swap[a] {
                0
            } else if i == 0 {
                swap[a]
            } else {
                i
            }
        };
        let from_local = to_local;
        let mut comps: HashMap<(usize, usize, usize), &Vec<Vec<usize>>> = HashMap::new();
        for c in &self.compositions {
            let (ab, bc) = (count(c.source, c.middle), count(c.middle, c.target));
            if c.table.len() != bc || c.table.iter().any(|r| r.len() != ab) {
                return Err(FlabError::input(format!(
                    "composition table {} -> {} -> {} has the wrong shape",
                    c.source, c.middle, c.target
                )));
            }
            comps.insert((c.source, c.middle, c.target), &c.table);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if count(a, b) > 0 && count(b, c) > 0 && !comps.contains_key(&(a, b, c)) {
                        return Err(FlabError::input(format!(
                            "missing composition table {a} -> {b} -> {c}"
                        )));
                    }
                }
            }
        }
        let counts = (0..n).map(|a| (0..n).map(|b| count(a, b)).collect()).collect();
        let labels = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        (0..count(a, b))
                            .map(|i| sets[&(a, b)].labels[from_local(a, b, i)].clone())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let names = objects.iter().map(|&p| lat.describe(p)).collect();
        let mut bad = None;
        let cat = FiniteCategory::from_fn(names, counts, labels, |a, b, c, g, f| {
            let t = comps[&(a, b, c)];
            let h = t[from_local(b, c, g)][from_local(a, b, f)];
            if h >= count(a, c) {
                bad.get_or_insert((a, b, c));
                return 0;
            }
            to_local(a, c, h)
        })?;
        if let Some((a, b, c)) = bad {
            return Err(FlabError::input(format!("composition {a} -> {b} -> {c} out of range")));
        }
        let mut rho = Vec::with_capacity(cat.morphism_count());
        let mut delta = vec![vec![]; n * n];
        for a in 0..n {
            for b in 0..n {
                for i in 0..count(a, b) {
                    let h = sets[&(a, b)];
                    let imgs = h.rho[from_local(a, b, i)]
                        .iter()
                        .map(ev)
                        .collect::<Result<Vec<_>>>()?;
                    if imgs.len() != gens[a].len() {
                        return Err(FlabError::input(format!(
                            "rho of {} lists {} images for {} generators",
                            h.labels[from_local(a, b, i)],
                            imgs.len(),
                            gens[a].len()
                        )));
                    }
                    let ext = extend_on_generated(&s, &s, &gens[a], &imgs).ok_or_else(|| {
                        FlabError::axiom(
                            "A2",
                            format!("rho of {} is not a homomorphism", h.labels[from_local(a, b, i)]),
                        )
                    })?;
                    let map: Map = lat
                        .sub(objects[a])
                        .elements()
                        .iter()
                        .map(|&x| ext[x as usize].expect("defined on P"))
                        .collect();
                    rho.push(map);
                }
                let mut row = vec![None; s.order()];
                if let Some(h) = sets.get(&(a, b)) {
                    for (wd, i) in &h.delta {
                        if *i >= count(a, b) {
                            return Err(FlabError::input(format!("delta index {i} out of range")));
                        }
                        let x = ev(wd)?;
                        if row[x as usize].is_some() {
                            return Err(FlabError::input(format!(
                                "delta is listed twice for {}",
                                s.label(x)
                            )));
                        }
                        row[x as usize] = Some(cat.offset(a, b) + to_local(a, b, *i));
                    }
                }
                delta[a * n + b] = row;
            }
        }
        let generators: Vec<(usize, Map)> = (0..cat.morphism_count())
            .map(|m| (objects[cat.source(m)], rho[m].clone()))
            .collect();
        for (p, m) in &generators {
            crate::fusion::system::check_injective_hom(&lat, *p, m)?;
        }
        let mut fusion = FusionSystem::generated(lat, &generators)?;
        fusion.set_provenance(Provenance::Abstract {
            name: self.name.clone(),
        });
        Ok(LinkingSystem::from_parts(
            Arc::new(fusion),
            objects,
            cat,
            delta,
            rho,
            None,
        ))
    }

    /// Builds and validates every axiom.
    pub fn build(&self, bounds: &Bounds, max_work: usize) -> Result<LinkingSystem> {
        let l = self.build_unchecked(bounds)?;
        l.validate(max_work)?;
        Ok(l)
    }
}

/// Whether two linking systems have the same objects up to order, the same
/// morphism counts and the same composition, comparing by object position
/// and local morphism index.
pub fn same_structure(a: &LinkingSystem, b: &LinkingSystem) -> bool {
    let n = a.object_count();
    if n != b.object_count() {
        return false;
    }
    let (ca, cb) = (a.category(), b.category());
    for x in 0..n {
        if a.subgroup(x).order() != b.subgroup(x).order() {
            return false;
        }
        for y in 0..n {
            if ca.count(x, y) != cb.count(x, y) {
                return false;
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for (f1, f2) in ca.hom(x, y).zip(cb.hom(x, y)) {
                    for (g1, g2) in ca.hom(y, z).zip(cb.hom(y, z)) {
                        if ca.local(ca.compose(g1, f1)) != cb.local(cb.compose(g2, f2)) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn exported() -> (LinkingSystem, LinkingFile) {
        let e = catalog::load("s4-d8", &Bounds::default()).unwrap();
        let l = LinkingSystem::from_group(e.fusion).unwrap();
        let file = LinkingFile::export(&l, "s4-d8");
        (l, file)
    }

    #[test]
    fn round_trip_validates_and_preserves_structure() {
        let (l, file) = exported();
        let text = serde_json::to_string(&file).unwrap();
        let back: LinkingFile = serde_json::from_str(&text).unwrap();
        let l2 = back.build(&Bounds::default(), 50_000_000).unwrap();
        assert!(same_structure(&l, &l2));
        assert_eq!(l2.fusion().total_morphisms(), l.fusion().total_morphisms());
    }

    #[test]
    fn identity_not_first_is_renumbered() {
        let (l, mut file) = exported();
        // move the identity of object 0 to position 1 throughout the file
        let perm = |i: usize| match i {
            0 => 1,
            1 => 0,
            k => k,
        };
        for h in file.hom_sets.iter_mut().filter(|h| h.source == 0 && h.target == 0) {
            h.labels.swap(0, 1);
            h.rho.swap(0, 1);
            for d in h.delta.iter_mut() {
                d.1 = perm(d.1);
            }
        }
        for c in file.compositions.iter_mut() {
            let (f_endo, g_endo, h_endo) = (
                c.source == 0 && c.middle == 0,
                c.middle == 0 && c.target == 0,
                c.source == 0 && c.target == 0,
            );
            let old = c.table.clone();
            for (g, row) in old.iter().enumerate() {
                for (f, &v) in row.iter().enumerate() {
                    let g2 = if g_endo { perm(g) } else { g };
                    let f2 = if f_endo { perm(f) } else { f };
                    c.table[g2][f2] = if h_endo { perm(v) } else { v };
                }
            }
        }
        file.identities[0] = 1;
        let l2 = file.build(&Bounds::default(), 50_000_000).unwrap();
        assert!(same_structure(&l, &l2));
    }

    #[test]
    fn non_free_center_action_is_rejected() {
        // S = C2 with endomorphisms {1, z, φ} where φ absorbs z
        let text = r#"{
            "name": "absorbing", "prime": 2,
            "s": {"name": "c2", "degree": 2, "generators": [[1, 0]]},
            "objects": [{"elements": [[], [0]], "generators": [[0]]}],
            "hom_sets": [{"source": 0, "target": 0, "labels": ["1", "z", "phi"],
                          "rho": [[[0]], [[0]], [[0]]],
                          "delta": [[[], 0], [[0], 1]]}],
            "compositions": [{"source": 0, "middle": 0, "target": 0,
                              "table": [[0, 1, 2], [1, 0, 2], [2, 2, 2]]}],
            "identities": [0]
        }"#;
        let file: LinkingFile = serde_json::from_str(text).unwrap();
        match file.build(&Bounds::default(), 1000).unwrap_err() {
            FlabError::Axiom { axiom, witness } => {
                assert_eq!(axiom, "A2");
                assert!(witness.contains("freely"), "{witness}");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn missing_inclusion_is_rejected() {
        let (_, mut file) = exported();
        let s_obj = file.objects.iter().position(|o| o.elements.len() == 8).unwrap();
        let h = file
            .hom_sets
            .iter_mut()
            .find(|h| h.source != s_obj && h.target == s_obj)
            .unwrap();
        h.delta.retain(|(w, _)| !w.is_empty());
        let err = file.build(&Bounds::default(), 50_000_000).unwrap_err();
        assert!(matches!(err, FlabError::Axiom { ref axiom, .. } if axiom == "B"), "{err}");
    }
}
