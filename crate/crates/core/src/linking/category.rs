use crate::error::{FlabError, Result};

/// Global morphism index.
pub type MorId = usize;

/// A finite category with dense morphism numbering. Morphisms `a → b` occupy
/// the id range `offset(a, b) .. offset(a, b) + count(a, b)`, and the
/// identity of every object is the first morphism of its endomorphism set.
#[derive(Clone, Debug)]
pub struct FiniteCategory {
    objects: Vec<String>,
    counts: Vec<usize>,
    offsets: Vec<usize>,
    source: Vec<usize>,
    target: Vec<usize>,
    labels: Vec<String>,
    // per triple (a, b, c): table of g∘f indexed by [g_local * count(a,b) + f_local]
    comp_offsets: Vec<usize>,
    comp: Vec<u32>,
}

impl FiniteCategory {
    /// Builds a category from morphism counts and a composition rule on
    /// local indices: `compose(a, b, c, g, f)` is the local index in
    /// `Mor(a, c)` of `g ∘ f` for `f ∈ Mor(a, b)` and `g ∈ Mor(b, c)`.
    /// Local index 0 of `Mor(a, a)` must be the identity.
    pub fn from_fn(
        objects: Vec<String>,
        counts: Vec<Vec<usize>>,
        labels: Vec<Vec<Vec<String>>>,
        mut compose: impl FnMut(usize, usize, usize, usize, usize) -> usize,
    ) -> Result<Self> {
        let n = objects.len();
        if counts.len() != n || counts.iter().any(|r| r.len() != n) {
            return Err(FlabError::input("morphism count table must be square"));
        }
        for a in 0..n {
            if counts[a][a] == 0 {
                return Err(FlabError::input(format!(
                    "object {} has no identity",
                    objects[a]
                )));
            }
        }
        let flat: Vec<usize> = counts.iter().flatten().copied().collect();
        let mut offsets = Vec::with_capacity(n * n);
        let mut source = vec![];
        let mut target = vec![];
        let mut all_labels = vec![];
        let mut total = 0;
        for a in 0..n {
            for b in 0..n {
                offsets.push(total);
                let c = flat[a * n + b];
                total += c;
                for i in 0..c {
                    source.push(a);
                    target.push(b);
                    let l = labels
                        .get(a)
                        .and_then(|r| r.get(b))
                        .and_then(|v| v.get(i))
                        .cloned()
                        .unwrap_or_else(|| format!("{}->{}#{i}", objects[a], objects[b]));
                    all_labels.push(l);
                }
            }
        }
        let mut comp_offsets = Vec::with_capacity(n * n * n);
        let mut comp = vec![];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    comp_offsets.push(comp.len());
                    let (ab, bc, ac) = (flat[a * n + b], flat[b * n + c], flat[a * n + c]);
                    if ab == 0 || bc == 0 {
                        continue;
                    }
                    if ac == 0 {
                        return Err(FlabError::input(format!(
                            "composable pair {} -> {} -> {} but no morphisms {} -> {}",
                            objects[a], objects[b], objects[c], objects[a], objects[c]
                        )));
                    }
                    for g in 0..bc {
                        for f in 0..ab {
                            let h = compose(a, b, c, g, f);
                            if h >= ac {
                                return Err(FlabError::input(format!(
                                    "composite index {h} out of range for {} -> {}",
                                    objects[a], objects[c]
                                )));
                            }
                            comp.push(h as u32);
                        }
                    }
                }
            }
        }
        comp_offsets.push(comp.len());
        Ok(FiniteCategory {
            objects,
            counts: flat,
            offsets,
            source,
            target,
            labels: all_labels,
            comp_offsets,
            comp,
        })
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_label(&self, a: usize) -> &str {
        &self.objects[a]
    }

    pub fn morphism_count(&self) -> usize {
        self.source.len()
    }

    pub fn count(&self, a: usize, b: usize) -> usize {
        self.counts[a * self.objects.len() + b]
    }

    pub fn offset(&self, a: usize, b: usize) -> usize {
        self.offsets[a * self.objects.len() + b]
    }

    /// Ids of all morphisms `a → b`.
    pub fn hom(&self, a: usize, b: usize) -> std::ops::Range<MorId> {
        let o = self.offset(a, b);
        o..o + self.count(a, b)
    }

    pub fn source(&self, m: MorId) -> usize {
        self.source[m]
    }

    pub fn target(&self, m: MorId) -> usize {
        self.target[m]
    }

    pub fn local(&self, m: MorId) -> usize {
        m - self.offset(self.source[m], self.target[m])
    }

    pub fn label(&self, m: MorId) -> &str {
        &self.labels[m]
    }

    pub fn identity(&self, a: usize) -> MorId {
        self.offset(a, a)
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.source[m] == self.target[m] && self.local(m) == 0
    }

    /// `g ∘ f`
    pub fn compose(&self, g: MorId, f: MorId) -> MorId {
        let (a, b) = (self.source[f], self.target[f]);
        debug_assert_eq!(self.source[g], b, "morphisms are not composable");
        let c = self.target[g];
        let n = self.objects.len();
        let t = self.comp_offsets[(a * n + b) * n + c];
        let k = self.local(g) * self.count(a, b) + self.local(f);
        self.offset(a, c) + self.comp[t + k] as usize
    }

    /// Checks identity and associativity laws exhaustively, refusing when
    /// the number of composable triples exceeds `max_work`.
    pub fn validate(&self, max_work: usize) -> Result<()> {
        let n = self.objects.len();
        for a in 0..n {
            for b in 0..n {
                for f in self.hom(a, b) {
                    if self.compose(self.identity(b), f) != f {
                        return Err(FlabError::input(format!(
                            "left identity law fails for {}",
                            self.labels[f]
                        )));
                    }
                }
                for f in self.hom(a, b) {
                    if self.compose(f, self.identity(a)) != f {
                        return Err(FlabError::input(format!(
                            "right identity law fails for {}",
                            self.labels[f]
                        )));
                    }
                }
            }
        }
        let mut work = 0usize;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        work += self.count(a, b) * self.count(b, c) * self.count(c, d);
                    }
                }
            }
        }
        if work > max_work {
            return Err(FlabError::Resource {
                what: "associativity check".into(),
                order: work,
                bound: max_work,
            });
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for f in self.hom(a, b) {
                            for g in self.hom(b, c) {
                                let gf = self.compose(g, f);
                                for h in self.hom(c, d) {
                                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                                        return Err(FlabError::input(format!(
                                            "associativity fails at ({}, {}, {})",
                                            self.labels[h], self.labels[g], self.labels[f]
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Inverse of an isomorphism, if it is one.
    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        let (a, b) = (self.source[f], self.target[f]);
        self.hom(b, a).find(|&g| {
            self.compose(g, f) == self.identity(a) && self.compose(f, g) == self.identity(b)
        })
    }

    /// Composition table of `Mor(a, a)` as rows of local indices.
    pub fn endo_table(&self, a: usize) -> Vec<Vec<u32>> {
        let o = self.offset(a, a);
        self.hom(a, a)
            .map(|g| {
                self.hom(a, a)
                    .map(|f| (self.compose(g, f) - o) as u32)
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The poset a < c, b < c.
    pub(crate) fn vee() -> FiniteCategory {
        let counts = vec![vec![1, 0, 1], vec![0, 1, 1], vec![0, 0, 1]];
        FiniteCategory::from_fn(
            vec!["a".into(), "b".into(), "c".into()],
            counts,
            vec![],
            |_, _, _, _, _| 0,
        )
        .unwrap()
    }

    #[test]
    fn poset_category() {
        let c = vee();
        assert_eq!(c.morphism_count(), 5);
        let ac = c.hom(0, 2).next().unwrap();
        assert_eq!(c.compose(c.identity(2), ac), ac);
        c.validate(1000).unwrap();
        assert!(c.inverse(ac).is_none());
    }

    #[test]
    fn cyclic_group_as_category() {
        let c = FiniteCategory::from_fn(vec!["*".into()], vec![vec![3]], vec![], |_, _, _, g, f| {
            (g + f) % 3
        })
        .unwrap();
        c.validate(1000).unwrap();
        let one = c.identity(0) + 1;
        assert_eq!(c.inverse(one), Some(c.identity(0) + 2));
    }

    #[test]
    fn detects_non_associative_composition() {
        // x∘y = x - y mod 3 with 0 as a right identity only
        let c = FiniteCategory::from_fn(vec!["*".into()], vec![vec![3]], vec![], |_, _, _, g, f| {
            (g + 3 - f) % 3
        })
        .unwrap();
        assert!(c.validate(1000).is_err());
    }

    #[test]
    fn work_bound_is_enforced() {
        let c = FiniteCategory::from_fn(vec!["*".into()], vec![vec![3]], vec![], |_, _, _, g, f| {
            (g + f) % 3
        })
        .unwrap();
        assert_eq!(c.validate(5).unwrap_err().exit_code(), 3);
    }
}
