use std::collections::VecDeque;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::lattice::SubgroupLattice;
use super::system::{FusionSystem, Map, Provenance};
use crate::config::Bounds;
use crate::error::{FlabError, Result};
use crate::groups::hom::extend_on_generated;
use crate::groups::io::GroupFile;
use crate::groups::{algo, Elem, FiniteGroupTable, Group, Perm, PermGroup};

/// A word in the generators of `S`, read left to right.
pub type Word = Vec<usize>;

/// A morphism given by the images of generators of its source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismSpec {
    pub source: Vec<Word>,
    pub images: Vec<Word>,
}

/// Abstract fusion system on disk: `S` as a permutation group and a list of
/// morphisms which, together with conjugation in `S`, generate the system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionFile {
    pub name: String,
    pub prime: usize,
    pub s: GroupFile,
    pub morphisms: Vec<MorphismSpec>,
}

/// Evaluates a word in the generators of `s`.
pub fn eval(s: &PermGroup, w: &Word) -> Result<Elem> {
    let gens = s.generator_elems();
    w.iter().try_fold(s.identity(), |acc, &i| {
        gens.get(i)
            .map(|&g| s.mul(acc, g))
            .ok_or_else(|| FlabError::input(format!("generator index {i} out of range")))
    })
}

/// Shortest words for every element, by breadth-first search.
pub fn element_words(s: &PermGroup) -> Vec<Word> {
    let gens = s.generator_elems();
    let mut words: Vec<Option<Word>> = vec![None; s.order()];
    words[0] = Some(vec![]);
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for (i, &g) in gens.iter().enumerate() {
            let y = s.mul(x, g);
            if words[y as usize].is_none() {
                let mut w = words[x as usize].clone().expect("visited");
                w.push(i);
                words[y as usize] = Some(w);
                queue.push_back(y);
            }
        }
    }
    words.into_iter().map(|w| w.expect("generators generate")).collect()
}

/// `S` in its regular representation, with a word for each element of the
/// table.
pub fn regular_words(st: &FiniteGroupTable, name: &str) -> (GroupFile, Vec<Word>) {
    let n = st.order();
    let sub = algo::small_generating_set(st, &crate::groups::Subgroup::whole(st));
    let left = |x: Elem| Perm::new(st.elements().map(|y| st.mul(x, y)).collect()).expect("regular");
    let reg = PermGroup::closure_bounded(n, sub.iter().map(|&x| left(x)).collect(), &Bounds {
        max_order: usize::MAX,
        max_aut_order: usize::MAX,
    })
    .expect("regular representation");
    let words = element_words(&reg);
    let of: Vec<Word> = st
        .elements()
        .map(|x| words[reg.find(&left(x)).expect("in the closure") as usize].clone())
        .collect();
    (GroupFile::from_group(name, &reg), of)
}

impl FusionFile {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn build(&self, bounds: &Bounds) -> Result<FusionSystem> {
        let s = self.s.build()?;
        let table = FiniteGroupTable::from_group(&s);
        let lattice = Arc::new(SubgroupLattice::new(table, self.prime, bounds)?);
        let mut gens: Vec<(usize, Map)> = vec![];
        for (k, m) in self.morphisms.iter().enumerate() {
            if m.source.len() != m.images.len() {
                return Err(FlabError::input(format!(
                    "morphism {k}: {} source generators but {} images",
                    m.source.len(),
                    m.images.len()
                )));
            }
            let src = m.source.iter().map(|w| eval(&s, w)).collect::<Result<Vec<_>>>()?;
            let img = m.images.iter().map(|w| eval(&s, w)).collect::<Result<Vec<_>>>()?;
            let map = extend_on_generated(&s, &s, &src, &img).ok_or_else(|| {
                FlabError::input(format!("morphism {k} does not respect the relations of its source"))
            })?;
            let p = lattice
                .find(&algo::generate(&s, &src))
                .expect("generated subgroup is in the lattice");
            let f: Map = lattice
                .sub(p)
                .elements()
                .iter()
                .map(|&x| map[x as usize].expect("defined on the generated subgroup"))
                .collect();
            gens.push((p, f));
        }
        let mut f = FusionSystem::generated(lattice, &gens)?;
        f.set_provenance(Provenance::Abstract {
            name: self.name.clone(),
        });
        Ok(f)
    }

    /// Exports a fusion system with `S` in its regular representation and
    /// one generator-image table per non-inner automorphism and per
    /// non-inner morphism class source.
    pub fn export(f: &FusionSystem, name: &str) -> Self {
        let l = f.lattice();
        let (group, words) = regular_words(l.group(), name);
        let word_of = |x: Elem| words[x as usize].clone();
        let inner = FusionSystem::inner(l.clone());
        let mut morphisms = vec![];
        for p in 0..l.len() {
            for m in f.homs_from(p).difference(inner.homs_from(p)) {
                let g = l.generators(p);
                morphisms.push(MorphismSpec {
                    source: g.iter().map(|&x| word_of(x)).collect(),
                    images: g
                        .iter()
                        .map(|&x| word_of(m[l.sub(p).position(x).expect("in P")]))
                        .collect(),
                });
            }
        }
        FusionFile {
            name: name.to_string(),
            prime: f.prime(),
            s: group,
            morphisms,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c4_with_inversion_from_json() {
        let text = r#"{
            "name": "c4-inv", "prime": 2,
            "s": {"name": "c4", "degree": 4, "generators": [[1,2,3,0]]},
            "morphisms": [{"source": [[0]], "images": [[0,0,0]]}]
        }"#;
        let file: FusionFile = serde_json::from_str(text).unwrap();
        let f = file.build(&Bounds::default()).unwrap();
        assert_eq!(f.aut(f.lattice().whole()).len(), 2);
        assert!(!f.check_saturation().saturated);
    }

    #[test]
    fn bad_relations_are_rejected() {
        let text = r#"{
            "name": "bad", "prime": 2,
            "s": {"name": "c4", "degree": 4, "generators": [[1,2,3,0]]},
            "morphisms": [{"source": [[0,0]], "images": [[0]]}]
        }"#;
        let file: FusionFile = serde_json::from_str(text).unwrap();
        assert!(file.build(&Bounds::default()).is_err());
    }

    #[test]
    fn export_round_trip() {
        let g = Arc::new(PermGroup::from_cycle_strings(4, &["(1 2)", "(1 2 3 4)"]).unwrap());
        let s = algo::sylow(&*g, 2);
        let f = FusionSystem::from_group("s4", g, &s, 2, &Bounds::default()).unwrap();
        let file = FusionFile::export(&f, "s4");
        let text = serde_json::to_string(&file).unwrap();
        let back: FusionFile = serde_json::from_str(&text).unwrap();
        let g2 = back.build(&Bounds::default()).unwrap();
        assert_eq!(g2.total_morphisms(), f.total_morphisms());
        assert_eq!(g2.centric_radical().len(), f.centric_radical().len());
    }
}
