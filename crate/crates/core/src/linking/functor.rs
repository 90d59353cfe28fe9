use std::collections::HashMap;

use super::category::{FiniteCategory, MorId};
use super::orbit::OrbitCategory;
use crate::error::{FlabError, Result};
use crate::fusion::{FusionSystem, SubgroupLattice};
use crate::groups::{Elem, Group};

/// A contravariant functor from a finite category to finite abelian
/// `p`-groups. Object `x` goes to `⊕ Z/p^{e_i}` with `e = exponents[x]`;
/// a morphism `x → y` goes to an integer matrix acting on coordinate
/// vectors of `A(y)` and producing coordinates of `A(x)`.
#[derive(Clone, Debug)]
pub struct AbFunctor {
    pub prime: u64,
    pub exponents: Vec<Vec<u32>>,
    pub matrices: Vec<Vec<Vec<i64>>>,
}

impl AbFunctor {
    /// Checks shapes, well-definedness of each matrix, and functoriality.
    pub fn new(
        cat: &FiniteCategory,
        prime: u64,
        exponents: Vec<Vec<u32>>,
        matrices: Vec<Vec<Vec<i64>>>,
    ) -> Result<Self> {
        let f = AbFunctor {
            prime,
            exponents,
            matrices,
        };
        f.validate(cat)?;
        Ok(f)
    }

    /// The constant functor with identity maps.
    pub fn constant(cat: &FiniteCategory, prime: u64, exponents: Vec<u32>) -> Self {
        let d = exponents.len();
        let id: Vec<Vec<i64>> = (0..d)
            .map(|i| (0..d).map(|j| (i == j) as i64).collect())
            .collect();
        AbFunctor {
            prime,
            exponents: vec![exponents; cat.object_count()],
            matrices: vec![id; cat.morphism_count()],
        }
    }

    pub fn dim(&self, x: usize) -> usize {
        self.exponents[x].len()
    }

    /// `A(f)(v)` reduced into the coordinates of `A(source(f))`.
    pub fn apply(&self, cat: &FiniteCategory, f: MorId, v: &[i64]) -> Vec<i64> {
        let x = cat.source(f);
        let m = &self.matrices[f];
        (0..self.dim(x))
            .map(|i| {
                let s: i64 = m[i].iter().zip(v).map(|(a, b)| a * b).sum();
                s.rem_euclid(self.prime.pow(self.exponents[x][i]) as i64)
            })
            .collect()
    }

    fn basis(&self, x: usize, j: usize) -> Vec<i64> {
        (0..self.dim(x)).map(|i| (i == j) as i64).collect()
    }

    pub fn validate(&self, cat: &FiniteCategory) -> Result<()> {
        if self.exponents.len() != cat.object_count() || self.matrices.len() != cat.morphism_count() {
            return Err(FlabError::input("functor data does not match the category"));
        }
        for f in 0..cat.morphism_count() {
            let (x, y) = (cat.source(f), cat.target(f));
            let m = &self.matrices[f];
            if m.len() != self.dim(x) || m.iter().any(|r| r.len() != self.dim(y)) {
                return Err(FlabError::input(format!("matrix of {} has the wrong shape", cat.label(f))));
            }
            // p^{e_j} e_j must map to zero
            for j in 0..self.dim(y) {
                let mut v = self.basis(y, j);
                v[j] = self.prime.pow(self.exponents[y][j]) as i64;
                if self.apply(cat, f, &v).iter().any(|&c| c != 0) {
                    return Err(FlabError::input(format!(
                        "matrix of {} is not well defined on generator {j}",
                        cat.label(f)
                    )));
                }
            }
        }
        for x in 0..cat.object_count() {
            let id = cat.identity(x);
            for j in 0..self.dim(x) {
                if self.apply(cat, id, &self.basis(x, j)) != self.basis(x, j) {
                    return Err(FlabError::input(format!(
                        "functor does not send the identity of {} to the identity",
                        cat.object_label(x)
                    )));
                }
            }
        }
        for f in 0..cat.morphism_count() {
            let y = cat.target(f);
            for z in 0..cat.object_count() {
                for g in cat.hom(y, z) {
                    let gf = cat.compose(g, f);
                    for j in 0..self.dim(z) {
                        let e = self.basis(z, j);
                        if self.apply(cat, gf, &e) != self.apply(cat, f, &self.apply(cat, g, &e)) {
                            return Err(FlabError::input(format!(
                                "functor does not respect {} o {}",
                                cat.label(g),
                                cat.label(f)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A decomposition of an abelian subgroup of `S` into cyclic factors.
#[derive(Clone, Debug)]
pub struct CyclicBasis {
    pub generators: Vec<Elem>,
    pub exponents: Vec<u32>,
    coords: HashMap<Elem, Vec<i64>>,
}

impl CyclicBasis {
    /// Finds a basis of the abelian subgroup `elems` by backtracking over
    /// elements of the required orders.
    pub fn new<G: Group + ?Sized>(g: &G, elems: &[Elem], p: u64) -> Self {
        let order_of = |x: Elem| g.elem_order(x) as u64;
        // invariants from counting elements killed by p^j
        let mut exps = vec![];
        let n = elems.len() as u64;
        let mut j = 0u32;
        let mut killed = vec![1u64];
        while *killed.last().expect("nonempty") < n {
            j += 1;
            let c = elems.iter().filter(|&&x| p.pow(j).is_multiple_of(order_of(x))).count() as u64;
            killed.push(c);
        }
        // log_p of |A[p^j]| / |A[p^{j-1}]| counts factors of exponent ≥ j
        let logs: Vec<u32> = killed
            .windows(2)
            .map(|w| (w[1] / w[0]).ilog(p))
            .collect();
        for k in (0..logs.len()).rev() {
            let bigger = logs.get(k + 1).copied().unwrap_or(0);
            for _ in 0..logs[k] - bigger {
                exps.push(k as u32 + 1);
            }
        }
        let mut chosen = vec![];
        let found = search(g, elems, p, &exps, &mut chosen);
        assert!(found, "abelian p-groups have a cyclic decomposition");
        let mut coords = HashMap::new();
        let mut c = vec![0i64; exps.len()];
        loop {
            let mut x = g.identity();
            for (k, &gen) in chosen.iter().enumerate() {
                x = g.mul(x, g.pow(gen, c[k] as u64));
            }
            coords.insert(x, c.clone());
            let mut k = 0;
            loop {
                if k == c.len() {
                    return CyclicBasis {
                        generators: chosen,
                        exponents: exps,
                        coords,
                    };
                }
                c[k] += 1;
                if c[k] < p.pow(exps[k]) as i64 {
                    break;
                }
                c[k] = 0;
                k += 1;
            }
        }
    }

    pub fn coordinates(&self, x: Elem) -> &[i64] {
        &self.coords[&x]
    }

    pub fn element<G: Group + ?Sized>(&self, g: &G, v: &[i64]) -> Elem {
        let mut x = g.identity();
        for (k, &gen) in self.generators.iter().enumerate() {
            let e = g.elem_order(gen) as i64;
            x = g.mul(x, g.pow(gen, v[k].rem_euclid(e) as u64));
        }
        x
    }
}

fn search<G: Group + ?Sized>(g: &G, elems: &[Elem], p: u64, exps: &[u32], chosen: &mut Vec<Elem>) -> bool {
    let k = chosen.len();
    if k == exps.len() {
        return true;
    }
    let want = p.pow(exps[k]) as usize;
    let span = crate::groups::algo::generate(g, chosen);
    let target_size: usize = exps[..=k].iter().map(|&e| p.pow(e) as usize).product();
    for &x in elems {
        if g.elem_order(x) != want {
            continue;
        }
        if span.contains(x) {
            continue;
        }
        chosen.push(x);
        if crate::groups::algo::generate(g, chosen).order() == target_size
            && search(g, elems, p, exps, chosen)
        {
            return true;
        }
        chosen.pop();
    }
    false
}

/// The center functor `P ↦ Z(P)` on the orbit category, with a morphism
/// `[φ]: P → Q` acting by `z ↦ φ⁻¹(z)` from `Z(Q)` to `Z(P)`.
pub struct CenterFunctor {
    pub functor: AbFunctor,
    pub bases: Vec<CyclicBasis>,
}

impl CenterFunctor {
    pub fn new(f: &FusionSystem, o: &OrbitCategory) -> Result<Self> {
        let l: &SubgroupLattice = f.lattice();
        let s = l.group();
        let p = f.prime() as u64;
        let bases: Vec<CyclicBasis> = o
            .objects
            .iter()
            .map(|&q| CyclicBasis::new(s, l.sub(l.center(q)).elements(), p))
            .collect();
        let mut matrices = Vec::with_capacity(o.cat.morphism_count());
        for m in 0..o.cat.morphism_count() {
            let (x, y) = (o.cat.source(m), o.cat.target(m));
            let (px, _) = (o.objects[x], o.objects[y]);
            let rep = o.rep(m);
            let src = l.sub(px).elements();
            let mut columns = vec![];
            for &z in &bases[y].generators {
                let k = rep.iter().position(|&w| w == z).ok_or_else(|| {
                    FlabError::input(format!(
                        "{} is not in the image of {}",
                        s.label(z),
                        o.cat.label(m)
                    ))
                })?;
                columns.push(bases[x].coordinates(src[k]).to_vec());
            }
            let rows = bases[x].exponents.len();
            matrices.push(
                (0..rows)
                    .map(|i| columns.iter().map(|c| c[i]).collect())
                    .collect(),
            );
        }
        let exponents = bases.iter().map(|b| b.exponents.clone()).collect();
        let functor = AbFunctor::new(&o.cat, p, exponents, matrices)?;
        Ok(CenterFunctor { functor, bases })
    }
}

/// `Z(F)` computed as the inverse limit of the center functor over the
/// centric orbit category, read back as elements of `S`.
pub struct FusionCenter {
    pub orbit: OrbitCategory,
    pub center: CenterFunctor,
    pub limit: super::limits::InverseLimit,
    pub elements: Vec<Elem>,
}

impl FusionCenter {
    pub fn new(f: &FusionSystem, max_elements: usize) -> Result<Self> {
        let orbit = OrbitCategory::new(f, true)?;
        let center = CenterFunctor::new(f, &orbit)?;
        let limit = super::limits::inverse_limit(&orbit.cat, &center.functor, max_elements)?;
        let t = limit
            .terminal
            .ok_or_else(|| FlabError::internal("S receives a morphism from every centric subgroup"))?;
        let s = f.lattice().group();
        let mut elements: Vec<Elem> = limit
            .elements
            .iter()
            .map(|v| center.bases[t].element(s, v))
            .collect();
        elements.sort_unstable();
        Ok(FusionCenter {
            orbit,
            center,
            limit,
            elements,
        })
    }

    /// `lim^n` of the center functor.
    pub fn higher(&self, n: usize) -> Result<super::limits::AbelianInvariants> {
        super::limits::higher_limits(&self.orbit.cat, &self.center.functor, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::PermGroup;

    #[test]
    fn basis_of_z4_times_z2() {
        let g = PermGroup::from_cycle_strings(6, &["(1 2 3 4)", "(5 6)"]).unwrap();
        let all: Vec<Elem> = g.elements().collect();
        let b = CyclicBasis::new(&g, &all, 2);
        assert_eq!(b.exponents, vec![2, 1]);
        for &x in &all {
            assert_eq!(b.element(&g, b.coordinates(x)), x);
        }
    }

    #[test]
    fn trivial_group_has_empty_basis() {
        let g = PermGroup::from_cycle_strings(3, &["(1 2 3)"]).unwrap();
        let b = CyclicBasis::new(&g, &[0], 2);
        assert!(b.exponents.is_empty());
        assert_eq!(b.coordinates(0), &[] as &[i64]);
    }
}
