//! Element-scan algorithms shared by every [`Group`] implementation.

use std::collections::{BTreeSet, HashSet};

use super::table::{Elem, FiniteGroupTable, Group, Subgroup};
use crate::config::Bounds;
use crate::error::{FlabError, Result};

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Largest power of `p` dividing `n`.
pub fn p_part(mut n: usize, p: usize) -> usize {
    let mut q = 1;
    while n.is_multiple_of(p) {
        n /= p;
        q *= p;
    }
    q
}

pub fn is_p_power(n: usize, p: usize) -> bool {
    p_part(n, p) == n
}

pub fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Subgroup generated by `gens`.
pub fn generate<G: Group + ?Sized>(g: &G, gens: &[Elem]) -> Subgroup {
    let gens: Vec<Elem> = gens.iter().copied().filter(|&x| x != g.identity()).collect();
    let mut seen = vec![false; g.order()];
    seen[g.identity() as usize] = true;
    let mut out = vec![g.identity()];
    let mut i = 0;
    while i < out.len() {
        let x = out[i];
        for &s in &gens {
            let y = g.mul(x, s);
            if !seen[y as usize] {
                seen[y as usize] = true;
                out.push(y);
            }
        }
        i += 1;
    }
    Subgroup::from_elements(out)
}

/// Smallest subgroup containing `h` and `x`.
pub fn join<G: Group + ?Sized>(g: &G, h: &Subgroup, x: Elem) -> Subgroup {
    let mut gens = small_generating_set(g, h);
    gens.push(x);
    generate(g, &gens)
}

/// A short generating set, chosen greedily from elements of large order.
pub fn small_generating_set<G: Group + ?Sized>(g: &G, h: &Subgroup) -> Vec<Elem> {
    let mut cand: Vec<(usize, Elem)> = h
        .elements()
        .iter()
        .map(|&x| (g.elem_order(x), x))
        .collect();
    cand.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut gens = vec![];
    let mut cur = Subgroup::trivial();
    for (_, x) in cand {
        if cur.order() == h.order() {
            break;
        }
        if !cur.contains(x) {
            gens.push(x);
            cur = generate(g, &gens);
        }
    }
    gens
}

/// Checks closure under multiplication (finite, so inverses follow).
pub fn is_subgroup<G: Group + ?Sized>(g: &G, elems: &[Elem]) -> bool {
    if elems.is_empty() {
        return false;
    }
    let set: HashSet<Elem> = elems.iter().copied().collect();
    elems
        .iter()
        .all(|&a| elems.iter().all(|&b| set.contains(&g.mul(a, b))))
}

pub fn subgroup_from_elements<G: Group + ?Sized>(g: &G, elems: Vec<Elem>) -> Result<Subgroup> {
    if elems.iter().any(|&x| x as usize >= g.order()) || !is_subgroup(g, &elems) {
        return Err(FlabError::input("element set is not a subgroup"));
    }
    Ok(Subgroup::from_elements(elems))
}

/// `x h x⁻¹`
pub fn conjugate<G: Group + ?Sized>(g: &G, x: Elem, h: &Subgroup) -> Subgroup {
    Subgroup::from_elements(h.elements().iter().map(|&y| g.conj(x, y)).collect())
}

fn candidates<G: Group + ?Sized>(g: &G, within: Option<&Subgroup>) -> Vec<Elem> {
    match within {
        Some(w) => w.elements().to_vec(),
        None => g.elements().collect(),
    }
}

/// `N_W(H)` for `W = within` (default: the whole group).
pub fn normalizer<G: Group + ?Sized>(g: &G, h: &Subgroup, within: Option<&Subgroup>) -> Subgroup {
    let gens = small_generating_set(g, h);
    Subgroup::from_elements(
        candidates(g, within)
            .into_iter()
            .filter(|&x| gens.iter().all(|&y| h.contains(g.conj(x, y))))
            .collect(),
    )
}

/// `C_W(H)` for `W = within` (default: the whole group).
pub fn centralizer<G: Group + ?Sized>(g: &G, h: &Subgroup, within: Option<&Subgroup>) -> Subgroup {
    let gens = small_generating_set(g, h);
    Subgroup::from_elements(
        candidates(g, within)
            .into_iter()
            .filter(|&x| gens.iter().all(|&y| g.commutes(x, y)))
            .collect(),
    )
}

pub fn center<G: Group + ?Sized>(g: &G) -> Subgroup {
    let whole = Subgroup::whole(g);
    centralizer(g, &whole, None)
}

/// Center of a subgroup `h`.
pub fn center_of<G: Group + ?Sized>(g: &G, h: &Subgroup) -> Subgroup {
    centralizer(g, h, Some(h))
}

/// `N_W(P, Q) = {x ∈ W : x P x⁻¹ ≤ Q}`.
pub fn transporter<G: Group + ?Sized>(
    g: &G,
    p: &Subgroup,
    q: &Subgroup,
    within: Option<&Subgroup>,
) -> Vec<Elem> {
    if p.order() > q.order() {
        return vec![];
    }
    let gens = small_generating_set(g, p);
    candidates(g, within)
        .into_iter()
        .filter(|&x| gens.iter().all(|&y| q.contains(g.conj(x, y))))
        .collect()
}

pub fn is_normal<G: Group + ?Sized>(g: &G, h: &Subgroup, within: &Subgroup) -> bool {
    let gens = small_generating_set(g, within);
    gens.iter()
        .all(|&x| h.elements().iter().all(|&y| h.contains(g.conj(x, y))))
}

pub fn is_abelian<G: Group + ?Sized>(g: &G, h: &Subgroup) -> bool {
    let gens = small_generating_set(g, h);
    gens.iter()
        .all(|&a| gens.iter().all(|&b| g.commutes(a, b)))
}

/// A Sylow `p`-subgroup, grown one step at a time: while `P` is not Sylow,
/// `p` divides `[N(P) : P]` and some `x ∈ N(P) \ P` has `x^p ∈ P`.
pub fn sylow<G: Group + ?Sized>(g: &G, p: usize) -> Subgroup {
    sylow_within(g, &Subgroup::whole(g), p)
}

/// A Sylow `p`-subgroup of the subgroup `w`.
pub fn sylow_within<G: Group + ?Sized>(g: &G, w: &Subgroup, p: usize) -> Subgroup {
    let target = p_part(w.order(), p);
    let mut cur = Subgroup::trivial();
    while cur.order() < target {
        let n = normalizer(g, &cur, Some(w));
        let x = n
            .elements()
            .iter()
            .copied()
            .find(|&x| !cur.contains(x) && cur.contains(g.pow(x, p as u64)))
            .expect("a non-Sylow p-subgroup has a p-element in its normalizer quotient");
        cur = join(g, &cur, x);
    }
    cur
}

/// Every subgroup, sorted by order then element set. Each subgroup is the
/// join of the cyclic subgroups generated by its prime-power-order elements,
/// so joining those cyclic pieces in breadth-first order reaches them all.
pub fn all_subgroups<G: Group + ?Sized>(g: &G, bounds: &Bounds) -> Result<Vec<Subgroup>> {
    bounds.check_order("subgroup enumeration", g.order())?;
    let mut cyclic: BTreeSet<Subgroup> = BTreeSet::new();
    let mut gen_of = vec![];
    for x in g.elements() {
        let o = g.elem_order(x);
        if o > 1 && prime_divisors(o).len() == 1 {
            let c = generate(g, &[x]);
            if cyclic.insert(c) {
                gen_of.push(x);
            }
        }
    }
    let mut seen: HashSet<Subgroup> = HashSet::new();
    let triv = Subgroup::trivial();
    seen.insert(triv.clone());
    let mut queue = vec![triv];
    let mut i = 0;
    while i < queue.len() {
        let h = queue[i].clone();
        let gens = small_generating_set(g, &h);
        for &x in &gen_of {
            if h.contains(x) {
                continue;
            }
            let mut gg = gens.clone();
            gg.push(x);
            let j = generate(g, &gg);
            if !seen.contains(&j) {
                seen.insert(j.clone());
                queue.push(j);
            }
        }
        i += 1;
    }
    queue.sort_by(|a, b| a.order().cmp(&b.order()).then(a.cmp(b)));
    Ok(queue)
}

/// One representative (the smallest element set) per conjugacy class,
/// sorted by order then element set.
pub fn subgroups_up_to_conjugacy<G: Group + ?Sized>(
    g: &G,
    bounds: &Bounds,
) -> Result<Vec<Subgroup>> {
    let all = all_subgroups(g, bounds)?;
    let mut done: HashSet<Subgroup> = HashSet::new();
    let mut reps = vec![];
    for h in all {
        if done.contains(&h) {
            continue;
        }
        for x in g.elements() {
            done.insert(conjugate(g, x, &h));
        }
        // `all` is sorted, so the first member met is the smallest
        reps.push(h);
    }
    Ok(reps)
}

/// Largest normal `p`-subgroup: the intersection of the Sylow conjugates.
pub fn o_p<G: Group + ?Sized>(g: &G, p: usize) -> Subgroup {
    let s = sylow(g, p);
    let mut cur = s.clone();
    for x in g.elements() {
        if cur.is_trivial() {
            break;
        }
        cur = cur.intersection(&conjugate(g, x, &s));
    }
    cur
}

/// Frattini subgroup of a `p`-group `h`, generated by `p`-th powers and
/// commutators.
pub fn frattini<G: Group + ?Sized>(g: &G, h: &Subgroup, p: usize) -> Subgroup {
    let mut gens = vec![];
    for &a in h.elements() {
        gens.push(g.pow(a, p as u64));
        for &b in h.elements() {
            gens.push(g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))));
        }
    }
    gens.sort_unstable();
    gens.dedup();
    generate(g, &gens)
}

/// The normal `p`-complement, if any. When it exists it consists of all
/// `p′`-elements, so it suffices to test whether that set is a subgroup of
/// the right order. Absence is a value, not an error.
pub fn normal_p_complement<G: Group + ?Sized>(g: &G, p: usize) -> Option<Subgroup> {
    let want = g.order() / p_part(g.order(), p);
    let elems: Vec<Elem> = g
        .elements()
        .filter(|&x| g.elem_order(x) % p != 0)
        .collect();
    if elems.len() != want || !is_subgroup(g, &elems) {
        return None;
    }
    Some(Subgroup::from_elements(elems))
}

/// Normal `p`-complement of a subgroup `w`.
pub fn normal_p_complement_within<G: Group + ?Sized>(
    g: &G,
    w: &Subgroup,
    p: usize,
) -> Option<Subgroup> {
    let want = w.order() / p_part(w.order(), p);
    let elems: Vec<Elem> = w
        .elements()
        .iter()
        .copied()
        .filter(|&x| g.elem_order(x) % p != 0)
        .collect();
    if elems.len() != want || !is_subgroup(g, &elems) {
        return None;
    }
    Some(Subgroup::from_elements(elems))
}

/// Quotient `G/K` as a table plus the projection `G → G/K`. Cosets are
/// represented by their smallest element and numbered in increasing order
/// of representative.
pub fn quotient<G: Group + ?Sized>(g: &G, k: &Subgroup) -> Result<(FiniteGroupTable, Vec<Elem>)> {
    quotient_within(g, &Subgroup::whole(g), k)
}

/// Quotient `W/K` for subgroups `K ⊴ W`. The projection vector is indexed
/// by position in `w.elements()`.
pub fn quotient_within<G: Group + ?Sized>(
    g: &G,
    w: &Subgroup,
    k: &Subgroup,
) -> Result<(FiniteGroupTable, Vec<Elem>)> {
    if !k.is_subset(w) || !is_normal(g, k, w) {
        return Err(FlabError::input("quotient by a non-normal subgroup"));
    }
    let mut rep_of: Vec<Elem> = vec![Elem::MAX; w.order()];
    let mut reps = vec![];
    for (i, &x) in w.elements().iter().enumerate() {
        if rep_of[i] != Elem::MAX {
            continue;
        }
        reps.push(x);
        for &y in k.elements() {
            let j = w.position(g.mul(x, y)).expect("coset inside w");
            rep_of[j] = x;
        }
    }
    // reps were met in increasing order, so they are sorted already
    let coset = |x: Elem| -> Elem {
        let r = rep_of[w.position(x).expect("element of w")];
        reps.binary_search(&r).expect("known representative") as Elem
    };
    let n = reps.len();
    let labels = reps.iter().map(|&r| g.label(r)).collect();
    let table = reps
        .iter()
        .map(|&a| reps.iter().map(|&b| coset(g.mul(a, b))).collect())
        .collect();
    let proj = w.elements().iter().map(|&x| coset(x)).collect();
    let t = FiniteGroupTable::new(labels, table, 0)?;
    debug_assert_eq!(t.order(), n);
    Ok((t, proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::perm::PermGroup;

    fn s4() -> PermGroup {
        PermGroup::from_cycle_strings(4, &["(1 2)", "(1 2 3 4)"]).unwrap()
    }

    fn sub(g: &PermGroup, gens: &[&str]) -> Subgroup {
        let e: Vec<Elem> = gens
            .iter()
            .map(|s| {
                g.find(&crate::groups::perm::Perm::from_cycles(g.degree(), s).unwrap())
                    .unwrap()
            })
            .collect();
        generate(g, &e)
    }

    #[test]
    fn sylow_subgroups() {
        let g = s4();
        let s = sylow(&g, 2);
        assert_eq!(s.order(), 8);
        assert!(!is_abelian(&g, &s));
        assert_eq!(sylow(&g, 5).order(), 1);
        assert_eq!(sylow(&g, 3).order(), 3);
        let a6 = PermGroup::from_cycle_strings(6, &["(1 2 3)", "(2 3 4 5 6)"]).unwrap();
        assert_eq!(a6.order(), 360);
        assert_eq!(sylow(&a6, 2).order(), 8);
    }

    #[test]
    fn normalizer_centralizer_center() {
        let g = s4();
        let v = sub(&g, &["(1 2)(3 4)", "(1 3)(2 4)"]);
        assert_eq!(normalizer(&g, &v, None).order(), 24);
        assert_eq!(centralizer(&g, &v, None), v);
        assert!(center(&g).is_trivial());
    }

    #[test]
    fn subgroup_classes() {
        let g = s4();
        let b = Bounds::default();
        assert_eq!(all_subgroups(&g, &b).unwrap().len(), 30);
        assert_eq!(subgroups_up_to_conjugacy(&g, &b).unwrap().len(), 11);
        let d8 = PermGroup::from_cycle_strings(4, &["(1 2 3 4)", "(1 3)"]).unwrap();
        assert_eq!(all_subgroups(&d8, &b).unwrap().len(), 10);
        assert_eq!(subgroups_up_to_conjugacy(&d8, &b).unwrap().len(), 8);
        let triv = PermGroup::closure(3, vec![]).unwrap();
        assert_eq!(subgroups_up_to_conjugacy(&triv, &b).unwrap().len(), 1);
        let c5 = PermGroup::from_cycle_strings(5, &["(1 2 3 4 5)"]).unwrap();
        assert_eq!(subgroups_up_to_conjugacy(&c5, &b).unwrap().len(), 2);
    }

    #[test]
    fn normal_complements() {
        let c6 = PermGroup::from_cycle_strings(5, &["(1 2)(3 4 5)"]).unwrap();
        assert_eq!(normal_p_complement(&c6, 2).unwrap().order(), 3);
        let s3 = PermGroup::from_cycle_strings(3, &["(1 2)", "(1 2 3)"]).unwrap();
        assert!(normal_p_complement(&s3, 3).is_none());
        assert_eq!(normal_p_complement(&s3, 2).unwrap().order(), 3);
    }

    #[test]
    fn quotients() {
        let g = s4();
        let v = sub(&g, &["(1 2)(3 4)", "(1 3)(2 4)"]);
        let (q, proj) = quotient(&g, &v).unwrap();
        assert_eq!(q.order(), 6);
        assert!(center(&q).is_trivial());
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(proj[g.mul(a, b) as usize], q.mul(proj[a as usize], proj[b as usize]));
            }
        }
        let (q1, _) = quotient(&g, &Subgroup::trivial()).unwrap();
        assert_eq!(q1.order(), 24);
        let (qg, _) = quotient(&g, &Subgroup::whole(&g)).unwrap();
        assert_eq!(qg.order(), 1);
        let c2 = sub(&g, &["(1 2)"]);
        assert!(quotient(&g, &c2).is_err());
    }

    #[test]
    fn o_p_and_frattini() {
        let g = s4();
        assert_eq!(o_p(&g, 2).order(), 4);
        assert_eq!(o_p(&g, 3).order(), 1);
        let d8 = sylow(&g, 2);
        assert_eq!(frattini(&g, &d8, 2).order(), 2);
    }
}
