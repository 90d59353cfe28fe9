use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::setup::RobinsonSetup;
use crate::error::{FlabError, Result};
use crate::groups::{Elem, FiniteGroupTable, Group, Subgroup};

/// A letter of an unreduced word: an element of the hub or of a leaf,
/// leaves numbered from 1 by their position in the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    Hub(Elem),
    Leaf(usize, Elem),
}

/// A letter named by the vertex group it comes from before any edge
/// collapses: the hub `L_S` or leaf `i` of the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexLetter {
    Hub(Elem),
    Leaf(usize, Elem),
}

/// One excursion from the hub into a leaf and back: a non-trivial right
/// coset representative `t` of the edge group in the leaf, followed by a
/// right coset representative `s` of the edge group in the hub.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syllable {
    /// Index into the amalgam's leaves.
    pub leaf: usize,
    pub t: Elem,
    pub s: Elem,
}

/// Normal form `h · t_1 s_1 ⋯ t_m s_m`; `s_k ≠ 1` whenever the next
/// syllable returns to the same leaf.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AmalgamWord {
    pub head: Elem,
    pub syllables: Vec<Syllable>,
}

impl AmalgamWord {
    pub fn identity() -> Self {
        AmalgamWord {
            head: 0,
            syllables: vec![],
        }
    }

    pub fn hub(h: Elem) -> Self {
        AmalgamWord {
            head: h,
            syllables: vec![],
        }
    }

    /// Number of excursions into leaves.
    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.head == 0 && self.syllables.is_empty()
    }
}

/// A leaf of the amalgam after degenerate edges are absorbed.
#[derive(Clone, Debug)]
pub struct AmalgamLeaf {
    /// Position in the setup's family (1-based; 0 is `S`).
    pub family_index: usize,
    pub group: FiniteGroupTable,
    /// Edge group inside the current hub.
    pub edge: Subgroup,
    /// Hub element → leaf element on the edge group.
    pub j: HashMap<Elem, Elem>,
    /// Leaf element → hub element on the image of the edge group.
    pub k: HashMap<Elem, Elem>,
    /// For each hub element `h`: `(n, s)` with `h = n·s`, `n` in the edge group
    /// and `s` the least element of `N h`.
    hub_split: Vec<(Elem, Elem)>,
    /// For each leaf element `l`: `(n, t)` with `l = j(n)·t`, `n` in the
    /// edge group (as a hub element) and `t` the least element of `j(N) l`.
    leaf_split: Vec<(Elem, Elem)>,
    /// `δ_P(N_S(P))`: element of `S` → leaf element.
    pub sylow: HashMap<Elem, Elem>,
    pub sylow_inv: HashMap<Elem, Elem>,
}

impl AmalgamLeaf {
    /// Right coset representatives of the edge group in the leaf.
    pub fn transversal(&self) -> Vec<Elem> {
        let mut t: Vec<Elem> = self.leaf_split.iter().map(|x| x.1).collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    /// Right coset representatives of the edge group in the hub.
    pub fn hub_transversal(&self) -> Vec<Elem> {
        let mut t: Vec<Elem> = self.hub_split.iter().map(|x| x.1).collect();
        t.sort_unstable();
        t.dedup();
        t
    }
}

/// The fundamental group of the star of groups, handled through its
/// normal forms.
#[derive(Clone, Debug)]
pub struct Amalgam {
    pub setup: Arc<RobinsonSetup>,
    pub hub: FiniteGroupTable,
    /// Family index whose vertex group became the hub, when edges collapsed.
    pub absorbed_into: Option<usize>,
    /// Family indices of all absorbed leaves with the map of their
    /// elements into the hub.
    absorbed: HashMap<usize, Vec<Elem>>,
    pub leaves: Vec<AmalgamLeaf>,
    /// Element of `S` → hub element.
    pub s_in_hub: Vec<Elem>,
    /// Element of `L_S` → hub element.
    setup_hub: Vec<Elem>,
    s_from_hub: HashMap<Elem, Elem>,
}

fn split_right_cosets<G: Group + ?Sized>(g: &G, n: &[Elem]) -> Vec<(Elem, Elem)> {
    g.elements()
        .map(|h| {
            let s = n.iter().map(|&x| g.mul(x, h)).min().expect("nonempty");
            (g.mul(h, g.inv(s)), s)
        })
        .collect()
}

impl Amalgam {
    pub fn new(setup: Arc<RobinsonSetup>) -> Self {
        let mut hub = setup.hub.clone();
        let mut s_in_hub = setup.s_in_hub.clone();
        let mut setup_hub: Vec<Elem> = setup.hub.elements().collect();
        // leaves as (family index, group, edge pairs (hub, leaf), sylow)
        let mut pending: Vec<(usize, FiniteGroupTable, Vec<(Elem, Elem)>, Vec<(Elem, Elem)>)> = setup
            .leaves
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let pairs = l.edge.elements().iter().copied().zip(l.j.iter().copied()).collect();
                (i + 1, l.group.clone(), pairs, l.sylow.clone())
            })
            .collect();
        let mut absorbed: HashMap<usize, Vec<Elem>> = HashMap::new();
        let mut absorbed_into = None;
        // a leaf whose edge group is the whole hub swallows the hub
        while let Some(pos) = pending.iter().position(|p| p.2.len() == hub.order()) {
            let (idx, group, pairs, _) = pending.remove(pos);
            let old_to_new: HashMap<Elem, Elem> = pairs.iter().copied().collect();
            s_in_hub = s_in_hub.iter().map(|x| old_to_new[x]).collect();
            setup_hub = setup_hub.iter().map(|x| old_to_new[x]).collect();
            for p in pending.iter_mut() {
                for e in p.2.iter_mut() {
                    e.0 = old_to_new[&e.0];
                }
            }
            for v in absorbed.values_mut() {
                for e in v.iter_mut() {
                    *e = old_to_new[e];
                }
            }
            absorbed.insert(idx, group.elements().collect());
            hub = group;
            absorbed_into = Some(idx);
        }
        let leaves = pending
            .into_iter()
            .map(|(family_index, group, pairs, sylow)| {
                let edge = Subgroup::from_elements(pairs.iter().map(|x| x.0).collect());
                let j: HashMap<Elem, Elem> = pairs.iter().copied().collect();
                let k: HashMap<Elem, Elem> = pairs.iter().map(|&(a, b)| (b, a)).collect();
                let hub_split = split_right_cosets(&hub, edge.elements());
                let image: Vec<Elem> = pairs.iter().map(|x| x.1).collect();
                let leaf_split = split_right_cosets(&group, &image)
                    .into_iter()
                    .map(|(n, t)| (k[&n], t))
                    .collect();
                AmalgamLeaf {
                    family_index,
                    group,
                    edge,
                    j,
                    k,
                    hub_split,
                    leaf_split,
                    sylow_inv: sylow.iter().map(|&(a, b)| (b, a)).collect(),
                    sylow: sylow.into_iter().collect(),
                }
            })
            .collect();
        let s_from_hub = s_in_hub.iter().enumerate().map(|(x, &h)| (h, x as Elem)).collect();
        Amalgam {
            setup,
            hub,
            absorbed_into,
            absorbed,
            leaves,
            s_in_hub,
            setup_hub,
            s_from_hub,
        }
    }

    pub fn from_vertex(&self, v: VertexLetter) -> Letter {
        match v {
            VertexLetter::Hub(h) => Letter::Hub(self.setup_hub[h as usize]),
            VertexLetter::Leaf(i, l) => Letter::Leaf(i, l),
        }
    }

    /// The vertex letter a letter of this amalgam stands for.
    pub fn to_vertex(&self, x: Letter) -> VertexLetter {
        match (x, self.absorbed_into) {
            (Letter::Hub(h), Some(i)) => VertexLetter::Leaf(i, h),
            (Letter::Hub(h), None) => VertexLetter::Hub(h),
            (Letter::Leaf(i, l), _) => VertexLetter::Leaf(i, l),
        }
    }

    /// Every vertex letter, hub first.
    pub fn vertex_letters(&self) -> Vec<VertexLetter> {
        let mut out: Vec<VertexLetter> = self.setup.hub.elements().map(VertexLetter::Hub).collect();
        for (i, leaf) in self.setup.leaves.iter().enumerate() {
            out.extend(leaf.group.elements().map(|l| VertexLetter::Leaf(i + 1, l)));
        }
        out
    }

    pub fn reduce_vertex(&self, letters: &[VertexLetter]) -> AmalgamWord {
        let letters: Vec<Letter> = letters.iter().map(|&v| self.from_vertex(v)).collect();
        self.reduce(&letters).expect("vertex letters are valid")
    }

    /// Whether every element has a normal form without syllables.
    pub fn is_finite(&self) -> bool {
        self.leaves.is_empty()
    }

    /// Leaf position for a family index, or `None` when it was absorbed.
    pub fn leaf_of_family(&self, family_index: usize) -> Option<usize> {
        self.leaves.iter().position(|l| l.family_index == family_index)
    }

    /// Prepends a letter to a normal form.
    fn push_front(&self, letter: Letter, w: &mut AmalgamWord) -> Result<()> {
        let (a, y0) = match letter {
            Letter::Hub(h) => {
                if h as usize >= self.hub.order() {
                    return Err(FlabError::input(format!("hub letter {h} out of range")));
                }
                w.head = self.hub.mul(h, w.head);
                return Ok(());
            }
            Letter::Leaf(fi, l) => {
                if let Some(map) = self.absorbed.get(&fi) {
                    let h = *map
                        .get(l as usize)
                        .ok_or_else(|| FlabError::input(format!("leaf{fi} letter {l} out of range")))?;
                    w.head = self.hub.mul(h, w.head);
                    return Ok(());
                }
                let a = self
                    .leaf_of_family(fi)
                    .ok_or_else(|| FlabError::input(format!("there is no leaf {fi}")))?;
                if l as usize >= self.leaves[a].group.order() {
                    return Err(FlabError::input(format!("leaf{fi} letter {l} out of range")));
                }
                (a, l)
            }
        };
        let leaf = &self.leaves[a];
        let lg = &leaf.group;
        let (n, s) = leaf.hub_split[w.head as usize];
        let y = lg.mul(y0, leaf.j[&n]);
        let merge = s == 0 && w.syllables.first().is_some_and(|f| f.leaf == a);
        if merge {
            let first = w.syllables.remove(0);
            let z = lg.mul(y, first.t);
            let (n2, t2) = leaf.leaf_split[z as usize];
            if t2 == 0 {
                w.head = self.hub.mul(n2, first.s);
            } else {
                w.head = n2;
                w.syllables.insert(0, Syllable { leaf: a, t: t2, s: first.s });
            }
        } else {
            let (n2, t2) = leaf.leaf_split[y as usize];
            if t2 == 0 {
                w.head = self.hub.mul(n2, s);
            } else {
                w.head = n2;
                w.syllables.insert(0, Syllable { leaf: a, t: t2, s });
            }
        }
        Ok(())
    }

    /// Normal form of a product of letters.
    pub fn reduce(&self, letters: &[Letter]) -> Result<AmalgamWord> {
        let mut w = AmalgamWord::identity();
        for &x in letters.iter().rev() {
            self.push_front(x, &mut w)?;
        }
        Ok(w)
    }

    /// The letters of a normal form, identity letters omitted.
    pub fn letters(&self, w: &AmalgamWord) -> Vec<Letter> {
        let mut out = vec![];
        if w.head != 0 {
            out.push(Letter::Hub(w.head));
        }
        for syl in &w.syllables {
            out.push(Letter::Leaf(self.leaves[syl.leaf].family_index, syl.t));
            if syl.s != 0 {
                out.push(Letter::Hub(syl.s));
            }
        }
        out
    }

    pub fn multiply(&self, a: &AmalgamWord, b: &AmalgamWord) -> AmalgamWord {
        let mut w = b.clone();
        for x in self.letters(a).into_iter().rev() {
            self.push_front(x, &mut w).expect("letters of a normal form are valid");
        }
        w
    }

    pub fn invert(&self, a: &AmalgamWord) -> AmalgamWord {
        let letters: Vec<Letter> = self
            .letters(a)
            .into_iter()
            .rev()
            .map(|x| match x {
                Letter::Hub(h) => Letter::Hub(self.hub.inv(h)),
                Letter::Leaf(fi, l) => {
                    let leaf = &self.leaves[self.leaf_of_family(fi).expect("leaf of a normal form")];
                    Letter::Leaf(fi, leaf.group.inv(l))
                }
            })
            .collect();
        self.reduce(&letters).expect("letters of a normal form are valid")
    }

    /// The element of `S` a word represents, if it lies in `δ_S(S)`.
    pub fn element_of_s(&self, w: &AmalgamWord) -> Option<Elem> {
        if !w.syllables.is_empty() {
            return None;
        }
        self.s_from_hub.get(&w.head).copied()
    }

    pub fn from_s(&self, x: Elem) -> AmalgamWord {
        AmalgamWord::hub(self.s_in_hub[x as usize])
    }

    /// `w P w⁻¹` computed letter by letter from the right, while each
    /// intermediate conjugate stays inside the distinguished `p`-subgroup of
    /// the vertex being passed (`S` at the hub, `N_S(P_i)` at leaf `i`).
    /// Returns the image subgroup's elements and the induced map on `P`.
    pub fn conjugate_subgroup(&self, w: &AmalgamWord, p: &Subgroup) -> Option<(Subgroup, Vec<Elem>)> {
        let mut images: Vec<Elem> = p.elements().to_vec();
        for x in self.letters(w).into_iter().rev() {
            images = match x {
                Letter::Hub(h) => images
                    .iter()
                    .map(|&y| self.s_from_hub.get(&self.hub.conj(h, self.s_in_hub[y as usize])).copied())
                    .collect::<Option<Vec<_>>>()?,
                Letter::Leaf(fi, l) => {
                    let leaf = &self.leaves[self.leaf_of_family(fi)?];
                    images
                        .iter()
                        .map(|&y| {
                            let d = *leaf.sylow.get(&y)?;
                            leaf.sylow_inv.get(&leaf.group.conj(l, d)).copied()
                        })
                        .collect::<Option<Vec<_>>>()?
                }
            };
        }
        Some((Subgroup::from_elements(images.clone()), images))
    }

    pub fn format_letter(&self, x: Letter) -> String {
        match x {
            Letter::Hub(h) => format!("hub:{}", self.hub.label(h)),
            Letter::Leaf(fi, l) => {
                let a = self.leaf_of_family(fi).expect("leaf of a normal form");
                format!("leaf{fi}:{}", self.leaves[a].group.label(l))
            }
        }
    }

    /// Tokens joined by `*`; the identity is `1`.
    pub fn format(&self, w: &AmalgamWord) -> String {
        let letters = self.letters(w);
        if letters.is_empty() {
            return "1".into();
        }
        letters.iter().map(|&x| self.format_letter(x)).collect::<Vec<_>>().join("*")
    }

    /// Parses `hub:<label>` and `leaf<i>:<label>` tokens joined by `*`.
    pub fn parse(&self, text: &str) -> Result<Vec<Letter>> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(vec![]);
        }
        let mut out = vec![];
        for tok in text.split('*') {
            let tok = tok.trim();
            let (vertex, label) = tok
                .split_once(':')
                .ok_or_else(|| FlabError::input(format!("token {tok:?} lacks a vertex prefix")))?;
            if vertex == "hub" {
                let h = self
                    .hub
                    .find_label(label)
                    .ok_or_else(|| FlabError::input(format!("{label:?} is not a hub element")))?;
                out.push(Letter::Hub(h));
            } else if let Some(num) = vertex.strip_prefix("leaf") {
                let fi: usize = num
                    .parse()
                    .map_err(|_| FlabError::input(format!("bad leaf index in {tok:?}")))?;
                let table = if fi >= 1 && fi <= self.setup.leaves.len() {
                    &self.setup.leaves[fi - 1].group
                } else {
                    return Err(FlabError::input(format!("there is no leaf {fi}")));
                };
                let l = table
                    .find_label(label)
                    .ok_or_else(|| FlabError::input(format!("{label:?} is not an element of leaf {fi}")))?;
                out.push(Letter::Leaf(fi, l));
            } else {
                return Err(FlabError::input(format!("unknown vertex {vertex:?}")));
            }
        }
        Ok(out)
    }

    /// All normal forms with at most `radius` syllables, refusing beyond
    /// `max_words`.
    pub fn words_up_to(&self, radius: usize, max_words: usize) -> Result<Vec<AmalgamWord>> {
        let mut tails: Vec<Vec<Syllable>> = vec![vec![]];
        let mut all_tails = vec![vec![]];
        for _ in 0..radius {
            let mut next = vec![];
            for tail in &tails {
                for (a, leaf) in self.leaves.iter().enumerate() {
                    for t in leaf.transversal().into_iter().filter(|&t| t != 0) {
                        for s in leaf.hub_transversal() {
                            if s == 0 && tail.first().is_some_and(|f| f.leaf == a) {
                                continue;
                            }
                            let mut v = vec![Syllable { leaf: a, t, s }];
                            v.extend_from_slice(tail);
                            next.push(v);
                        }
                    }
                }
            }
            if (all_tails.len() + next.len()) * self.hub.order() > max_words {
                return Err(FlabError::Resource {
                    what: format!("normal forms of length at most {radius}"),
                    order: (all_tails.len() + next.len()) * self.hub.order(),
                    bound: max_words,
                });
            }
            all_tails.extend(next.iter().cloned());
            tails = next;
        }
        let mut out = vec![];
        for tail in all_tails {
            for h in self.hub.elements() {
                out.push(AmalgamWord {
                    head: h,
                    syllables: tail.clone(),
                });
            }
        }
        Ok(out)
    }

    /// Words of length at most `radius` conjugating `P` onto `Q`; a
    /// truncation of the full transporter set.
    pub fn transporter(&self, p: &Subgroup, q: &Subgroup, radius: usize, max_words: usize) -> Result<Vec<AmalgamWord>> {
        Ok(self
            .words_up_to(radius, max_words)?
            .into_iter()
            .filter(|w| self.conjugate_subgroup(w, p).is_some_and(|(img, _)| img == *q))
            .collect())
    }

    /// Multiplication table of a finite amalgam.
    pub fn table(&self) -> Option<FiniteGroupTable> {
        self.is_finite().then(|| self.hub.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::setup::Variant;
    use crate::catalog;
    use crate::config::Bounds;
    use crate::linking::LinkingSystem;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn amalgam(name: &str, variant: Variant) -> Amalgam {
        let e = catalog::load(name, &Bounds::default()).unwrap();
        let l = Arc::new(LinkingSystem::from_group(e.fusion.clone()).unwrap());
        let family = e.fusion.controlling_family(false).unwrap();
        Amalgam::new(Arc::new(RobinsonSetup::new(l, &family, variant).unwrap()))
    }

    fn random_letters(g: &Amalgam, rng: &mut ChaCha8Rng, n: usize) -> Vec<Letter> {
        (0..n)
            .map(|_| {
                let k = rng.gen_range(0..=g.setup.leaves.len());
                if k == 0 {
                    Letter::Hub(rng.gen_range(0..g.hub.order()) as Elem)
                } else {
                    let ord = g.setup.leaves[k - 1].group.order();
                    Letter::Leaf(k, rng.gen_range(0..ord) as Elem)
                }
            })
            .collect()
    }

    #[test]
    fn s4_amalgam_collapses_to_s4() {
        let g = amalgam("s4-d8", Variant::Robinson);
        assert!(g.is_finite());
        assert_eq!(g.hub.order(), 24);
    }

    #[test]
    fn a6_amalgam_laws() {
        let g = amalgam("a6-d8", Variant::Robinson);
        // the first Klein four is normal in S and is absorbed into the hub
        assert_eq!(g.absorbed_into, Some(1));
        assert_eq!(g.hub.order(), 24);
        assert_eq!(g.leaves.len(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let a = g.reduce(&random_letters(&g, &mut rng, 6)).unwrap();
            let b = g.reduce(&random_letters(&g, &mut rng, 6)).unwrap();
            let c = g.reduce(&random_letters(&g, &mut rng, 6)).unwrap();
            assert_eq!(g.reduce(&g.letters(&a)).unwrap(), a);
            assert!(g.multiply(&a, &g.invert(&a)).is_identity());
            assert_eq!(g.multiply(&g.multiply(&a, &b), &c), g.multiply(&a, &g.multiply(&b, &c)));
        }
    }

    #[test]
    fn mixed_leaf_letters_give_length_two() {
        let g = amalgam("a6-d8", Variant::Robinson);
        let leaf = &g.leaves[0];
        let t = leaf.transversal()[1];
        let s = leaf.hub_transversal()[1];
        let fi = leaf.family_index;
        let w = g.reduce(&[Letter::Leaf(fi, t), Letter::Hub(s), Letter::Leaf(fi, t)]).unwrap();
        assert_eq!(w.len(), 2);
        assert!(g.element_of_s(&w).is_none());
    }

    #[test]
    fn parse_and_format_round_trip() {
        let g = amalgam("a6-d8", Variant::Robinson);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let w = g.reduce(&random_letters(&g, &mut rng, 5)).unwrap();
            let text = g.format(&w);
            assert_eq!(g.reduce(&g.parse(&text).unwrap()).unwrap(), w, "{text}");
        }
    }
}
