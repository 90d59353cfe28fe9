use serde::{Deserialize, Serialize};

use super::algo::small_generating_set;
use super::table::{Elem, Group, Subgroup};
use crate::config::Bounds;
use crate::error::Result;

/// A homomorphism stored as the full image table `images[x] = f(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupHom {
    pub images: Vec<Elem>,
}

impl GroupHom {
    pub fn identity(n: usize) -> Self {
        GroupHom {
            images: (0..n as Elem).collect(),
        }
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.images[x as usize]
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &GroupHom) -> GroupHom {
        GroupHom {
            images: other.images.iter().map(|&x| self.apply(x)).collect(),
        }
    }

    /// Inverse of a bijective map of a set of size `images.len()`.
    pub fn inverse(&self) -> GroupHom {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as Elem;
        }
        GroupHom { images: inv }
    }

    pub fn is_homomorphism<A: Group + ?Sized, B: Group + ?Sized>(&self, src: &A, tgt: &B) -> bool {
        self.images.len() == src.order()
            && self.images.iter().all(|&y| (y as usize) < tgt.order())
            && src.elements().all(|a| {
                src.elements()
                    .all(|b| self.apply(src.mul(a, b)) == tgt.mul(self.apply(a), self.apply(b)))
            })
    }

    pub fn kernel<A: Group + ?Sized>(&self, src: &A, tgt_identity: Elem) -> Subgroup {
        Subgroup::from_elements(src.elements().filter(|&x| self.apply(x) == tgt_identity).collect())
    }

    pub fn is_injective(&self) -> bool {
        let mut v = self.images.clone();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::from_elements(self.images.clone())
    }
}

/// Extends `gens[i] ↦ imgs[i]` to the subgroup generated by `gens`.
/// Returns the partial map (defined exactly on that subgroup),
/// or `None` if the assignment is not a well-defined homomorphism.
pub fn extend_on_generated<A: Group + ?Sized, B: Group + ?Sized>(
    src: &A,
    tgt: &B,
    gens: &[Elem],
    imgs: &[Elem],
) -> Option<Vec<Option<Elem>>> {
    let mut map: Vec<Option<Elem>> = vec![None; src.order()];
    map[src.identity() as usize] = Some(tgt.identity());
    let mut queue = vec![src.identity()];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        let fx = map[x as usize].expect("queued elements are mapped");
        for (&s, &t) in gens.iter().zip(imgs) {
            let y = src.mul(x, s);
            let fy = tgt.mul(fx, t);
            match map[y as usize] {
                None => {
                    map[y as usize] = Some(fy);
                    queue.push(y);
                }
                Some(v) if v != fy => return None,
                Some(_) => {}
            }
        }
        i += 1;
    }
    Some(map)
}

/// The unique homomorphism with `gens[i] ↦ imgs[i]`, when `gens` generates
/// `src` and the assignment respects all relations.
pub fn hom_from_generators<A: Group + ?Sized, B: Group + ?Sized>(
    src: &A,
    tgt: &B,
    gens: &[Elem],
    imgs: &[Elem],
) -> Option<GroupHom> {
    let map = extend_on_generated(src, tgt, gens, imgs)?;
    let images: Option<Vec<Elem>> = map.into_iter().collect();
    let h = GroupHom { images: images? };
    // BFS consistency covers all relations among products of generators
    Some(h)
}

/// Backtracking search over generator images. `accept` sees each complete
/// injective homomorphism and returns `false` to stop the search.
fn search_injective<A: Group + ?Sized, B: Group + ?Sized>(
    src: &A,
    tgt: &B,
    mut accept: impl FnMut(GroupHom) -> bool,
) {
    let whole = Subgroup::whole(src);
    let gens = small_generating_set(src, &whole);
    let orders: Vec<usize> = gens.iter().map(|&x| src.elem_order(x)).collect();
    let tgt_by_order: Vec<Vec<Elem>> = orders
        .iter()
        .map(|&o| tgt.elements().filter(|&y| tgt.elem_order(y) == o).collect())
        .collect();
    let mut imgs: Vec<Elem> = vec![];
    fn rec<A: Group + ?Sized, B: Group + ?Sized>(
        src: &A,
        tgt: &B,
        gens: &[Elem],
        cands: &[Vec<Elem>],
        imgs: &mut Vec<Elem>,
        accept: &mut dyn FnMut(GroupHom) -> bool,
    ) -> bool {
        let k = imgs.len();
        if k == gens.len() {
            let h = match hom_from_generators(src, tgt, gens, imgs) {
                Some(h) => h,
                None => return true,
            };
            if !h.is_injective() {
                return true;
            }
            return accept(h);
        }
        for &y in &cands[k] {
            imgs.push(y);
            let ok = match extend_on_generated(src, tgt, &gens[..=k], imgs) {
                Some(m) => {
                    let mut vals: Vec<Elem> = m.into_iter().flatten().collect();
                    let n = vals.len();
                    vals.sort_unstable();
                    vals.dedup();
                    vals.len() == n
                }
                None => false,
            };
            if ok && !rec(src, tgt, gens, cands, imgs, accept) {
                imgs.pop();
                return false;
            }
            imgs.pop();
        }
        true
    }
    rec(src, tgt, &gens, &tgt_by_order, &mut imgs, &mut accept);
}

/// All automorphisms, sorted by image table. The identity comes first.
pub fn automorphisms<G: Group + ?Sized>(g: &G, bounds: &Bounds) -> Result<Vec<GroupHom>> {
    bounds.check_aut_order("automorphism search", g.order())?;
    let mut out = vec![];
    search_injective(g, g, |h| {
        out.push(h);
        true
    });
    out.sort();
    Ok(out)
}

/// Some isomorphism `a → b`, if the groups are isomorphic.
pub fn find_isomorphism<A: Group + ?Sized, B: Group + ?Sized>(a: &A, b: &B) -> Option<GroupHom> {
    if a.order() != b.order() {
        return None;
    }
    let mut found = None;
    search_injective(a, b, |h| {
        found = Some(h);
        false
    });
    found
}

/// All isomorphisms `a → b`, sorted by image table.
pub fn isomorphisms<A: Group + ?Sized, B: Group + ?Sized>(a: &A, b: &B) -> Vec<GroupHom> {
    if a.order() != b.order() {
        return vec![];
    }
    let mut out = vec![];
    search_injective(a, b, |h| {
        out.push(h);
        true
    });
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::perm::PermGroup;

    #[test]
    fn automorphism_counts() {
        let b = Bounds::default();
        let d8 = PermGroup::from_cycle_strings(4, &["(1 2 3 4)", "(1 3)"]).unwrap();
        let auts = automorphisms(&d8, &b).unwrap();
        assert_eq!(auts.len(), 8);
        assert_eq!(auts[0], GroupHom::identity(8));
        let triv = PermGroup::closure(2, vec![]).unwrap();
        assert_eq!(automorphisms(&triv, &b).unwrap().len(), 1);
        let v = PermGroup::from_cycle_strings(4, &["(1 2)", "(3 4)"]).unwrap();
        assert_eq!(automorphisms(&v, &b).unwrap().len(), 6);
    }

    #[test]
    fn automorphisms_form_a_group() {
        let d8 = PermGroup::from_cycle_strings(4, &["(1 2 3 4)", "(1 3)"]).unwrap();
        let auts = automorphisms(&d8, &Bounds::default()).unwrap();
        for a in &auts {
            assert!(a.is_homomorphism(&d8, &d8));
            assert!(auts.contains(&a.inverse()));
            for b in &auts {
                assert!(auts.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn isomorphism_search() {
        let s3 = PermGroup::from_cycle_strings(3, &["(1 2)", "(1 2 3)"]).unwrap();
        let s3b = PermGroup::from_cycle_strings(5, &["(1 2)(4 5)", "(1 2 3)"]).unwrap();
        let c6 = PermGroup::from_cycle_strings(5, &["(1 2)(3 4 5)"]).unwrap();
        assert!(find_isomorphism(&s3, &s3b).is_some());
        assert!(find_isomorphism(&s3, &c6).is_none());
        assert_eq!(isomorphisms(&s3, &s3b).len(), 6);
    }

    #[test]
    fn bad_generator_images_are_rejected() {
        let c4 = PermGroup::from_cycle_strings(4, &["(1 2 3 4)"]).unwrap();
        let v = PermGroup::from_cycle_strings(4, &["(1 2)", "(3 4)"]).unwrap();
        let g = c4.generator_elems()[0];
        // an order-4 generator cannot go to an element of order 2 bijectively,
        // but a non-injective hom exists; sending it to itself squared is fine
        assert!(hom_from_generators(&c4, &c4, &[g], &[c4.mul(g, g)]).is_some());
        assert!(hom_from_generators(&v, &c4, &v.generator_elems(), &[g, g]).is_none());
    }
}
