use std::collections::{BTreeSet, HashMap};

use super::category::{FiniteCategory, MorId};
use crate::error::Result;
use crate::fusion::system::{compose, conj_map, identity_map};
use crate::fusion::{FusionSystem, Map};
use crate::groups::Group;

/// The orbit category: morphisms `P → Q` are the `Inn(Q)`-orbits of
/// `Hom_F(P, Q)`, each represented by its smallest map.
#[derive(Clone, Debug)]
pub struct OrbitCategory {
    pub cat: FiniteCategory,
    /// Lattice index of each object.
    pub objects: Vec<usize>,
    /// Canonical representative of every morphism.
    pub reps: Vec<Map>,
}

impl OrbitCategory {
    pub fn new(f: &FusionSystem, centric_only: bool) -> Result<Self> {
        let l = f.lattice();
        let s = l.group();
        let objects: Vec<usize> = (0..l.len())
            .filter(|&p| !centric_only || f.is_centric(p))
            .collect();
        let n = objects.len();
        let canon = |q: usize, m: &Map| -> Map {
            l.sub(q)
                .elements()
                .iter()
                .map(|&y| m.iter().map(|&x| s.conj(y, x)).collect::<Map>())
                .min()
                .expect("Q is nonempty")
        };
        let mut reps: Vec<Vec<Vec<Map>>> = vec![vec![vec![]; n]; n];
        for a in 0..n {
            for b in 0..n {
                let (pa, pb) = (objects[a], objects[b]);
                let set: BTreeSet<Map> = f.hom(pa, pb).into_iter().map(|m| canon(pb, m)).collect();
                let mut v: Vec<Map> = set.into_iter().collect();
                if a == b {
                    let id = canon(pa, &identity_map(l, pa));
                    let i = v.iter().position(|m| *m == id).expect("identity is a morphism");
                    let id = v.remove(i);
                    v.insert(0, id);
                }
                reps[a][b] = v;
            }
        }
        let index: Vec<Vec<HashMap<Map, usize>>> = reps
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect())
                    .collect()
            })
            .collect();
        let counts = reps.iter().map(|row| row.iter().map(|v| v.len()).collect()).collect();
        let labels = reps
            .iter()
            .enumerate()
            .map(|(a, row)| {
                row.iter()
                    .map(|v| {
                        v.iter()
                            .map(|m| f.describe_map(objects[a], m))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let names = objects.iter().map(|&p| l.describe(p)).collect();
        let cat = FiniteCategory::from_fn(names, counts, labels, |a, b, c, g, h| {
            let m = compose(l, objects[b], &reps[b][c][g], &reps[a][b][h]);
            index[a][c][&canon(objects[c], &m)]
        })?;
        let flat = reps.into_iter().flatten().flatten().collect();
        Ok(OrbitCategory {
            cat,
            objects,
            reps: flat,
        })
    }

    pub fn object_of(&self, p: usize) -> Option<usize> {
        self.objects.iter().position(|&q| q == p)
    }

    /// Representative map of a morphism.
    pub fn rep(&self, m: MorId) -> &Map {
        &self.reps[m]
    }
}

/// The orbit of `f` under `Inn(Q)`, for tests and reports.
pub fn inner_orbit(f: &FusionSystem, q: usize, m: &Map) -> BTreeSet<Map> {
    let l = f.lattice();
    l.sub(q)
        .elements()
        .iter()
        .map(|&y| compose(l, q, &conj_map(l, y, q), m))
        .collect()
}
