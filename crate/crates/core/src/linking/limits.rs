use serde::{Deserialize, Serialize};

use super::category::{FiniteCategory, MorId};
use super::functor::AbFunctor;
use super::modular::{kernel, subquotient_exponents, Matrix, Ring};
use crate::error::{FlabError, Result};

/// A finite abelian `p`-group by its cyclic factor exponents, largest first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub prime: u64,
    pub exponents: Vec<u32>,
}

impl AbelianInvariants {
    pub fn order(&self) -> u64 {
        self.exponents.iter().map(|&e| self.prime.pow(e)).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Exponents of the group formed by `elements` inside
    /// `⊕ Z/p^{e_i}`, from the number of elements killed by each `p^j`.
    pub fn of_elements(prime: u64, ambient: &[u32], elements: &[Vec<i64>]) -> Self {
        let killed = |j: u32| {
            elements
                .iter()
                .filter(|v| {
                    v.iter().zip(ambient).all(|(&c, &e)| {
                        (c * prime.pow(j) as i64).rem_euclid(prime.pow(e) as i64) == 0
                    })
                })
                .count() as u64
        };
        let mut counts = vec![1u64];
        let mut j = 0;
        while *counts.last().expect("nonempty") < elements.len() as u64 {
            j += 1;
            counts.push(killed(j));
        }
        let logs: Vec<u32> = counts.windows(2).map(|w| (w[1] / w[0]).ilog(prime)).collect();
        let mut exponents = vec![];
        for k in (0..logs.len()).rev() {
            let bigger = logs.get(k + 1).copied().unwrap_or(0);
            for _ in 0..logs[k] - bigger {
                exponents.push(k as u32 + 1);
            }
        }
        AbelianInvariants { prime, exponents }
    }
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|&e| format!("Z/{}", self.prime.pow(e)))
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Composable chains `x0 → x1 → … → xn` of `n` non-identity morphisms,
/// stored as `[f1, …, fn]`. For `n = 0` this is the single empty chain.
pub fn chains(cat: &FiniteCategory, n: usize, max_chains: usize) -> Result<Vec<Vec<MorId>>> {
    let mut out: Vec<Vec<MorId>> = vec![vec![]];
    for _ in 0..n {
        let mut next = vec![];
        for c in &out {
            let starts: Vec<MorId> = match c.last() {
                None => (0..cat.morphism_count()).collect(),
                Some(&f) => {
                    let y = cat.target(f);
                    (0..cat.object_count()).flat_map(|z| cat.hom(y, z)).collect()
                }
            };
            for g in starts {
                if cat.is_identity(g) {
                    continue;
                }
                let mut d = c.clone();
                d.push(g);
                next.push(d);
                if next.len() > max_chains {
                    return Err(FlabError::Resource {
                        what: format!("chains of length {n}"),
                        order: next.len(),
                        bound: max_chains,
                    });
                }
            }
        }
        out = next;
    }
    Ok(out)
}

const MAX_CHAINS: usize = 20_000;
const MAX_ENTRIES: usize = 40_000_000;

struct Cochains {
    chains: Vec<Vec<MorId>>,
    /// first coordinate of each chain
    offsets: Vec<usize>,
    /// exponent of every coordinate
    exps: Vec<u32>,
    index: std::collections::HashMap<Vec<MorId>, usize>,
}

impl Cochains {
    fn new(cat: &FiniteCategory, a: &AbFunctor, n: usize) -> Result<Self> {
        // degree 0 has one (empty) chain per object
        let (chains, starts): (Vec<Vec<MorId>>, Vec<usize>) = if n == 0 {
            ((0..cat.object_count()).map(|_| vec![]).collect(), (0..cat.object_count()).collect())
        } else {
            let c = chains(cat, n, MAX_CHAINS)?;
            let s = c.iter().map(|c| cat.source(c[0])).collect();
            (c, s)
        };
        let mut offsets = vec![];
        let mut exps = vec![];
        for &x0 in &starts {
            offsets.push(exps.len());
            exps.extend(a.exponents[x0].iter().copied());
        }
        let index = chains.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        Ok(Cochains {
            chains,
            offsets,
            exps,
            index,
        })
    }

    fn dim(&self) -> usize {
        self.exps.len()
    }
}

/// Matrix of the differential `C^n → C^{n+1}`.
fn differential(
    cat: &FiniteCategory,
    a: &AbFunctor,
    ring: &Ring,
    src: &Cochains,
    dst: &Cochains,
    n: usize,
) -> Result<Matrix> {
    if src.dim().saturating_mul(dst.dim()) > MAX_ENTRIES {
        return Err(FlabError::Resource {
            what: "cochain differential".into(),
            order: src.dim() * dst.dim(),
            bound: MAX_ENTRIES,
        });
    }
    let mut d = Matrix::zeros(dst.dim(), src.dim());
    for (row_chain, c) in dst.chains.iter().enumerate() {
        let x0 = cat.source(c[0]);
        let r0 = dst.offsets[row_chain];
        let rows = a.dim(x0);
        // position in C^n of a face, or None when it is degenerate
        let locate = |face: &[MorId], x: usize| -> Option<usize> {
            if n == 0 {
                Some(src.offsets[x])
            } else {
                src.index.get(face).map(|&i| src.offsets[i])
            }
        };
        let mut add = |col0: usize, block: &dyn Fn(usize, usize) -> i64, cols: usize, sign: i64| {
            for i in 0..rows {
                for j in 0..cols {
                    let v = ring.reduce(sign * block(i, j));
                    let cur = d.get(r0 + i, col0 + j);
                    d.set(r0 + i, col0 + j, ring.add(cur, v));
                }
            }
        };
        // M(f1) u(f2, …)
        let f1 = c[0];
        let x1 = cat.target(f1);
        if let Some(col0) = locate(&c[1..], x1) {
            let m = &a.matrices[f1];
            add(col0, &|i, j| m[i][j], a.dim(x1), 1);
        }
        // inner faces
        for i in 1..=n {
            let comp = cat.compose(c[i], c[i - 1]);
            if cat.is_identity(comp) {
                continue;
            }
            let mut face = c[..i - 1].to_vec();
            face.push(comp);
            face.extend_from_slice(&c[i + 1..]);
            if let Some(col0) = locate(&face, x0) {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                add(col0, &|r, s| (r == s) as i64, rows, sign);
            }
        }
        // last face
        if let Some(col0) = locate(&c[..n], x0) {
            let sign = if (n + 1).is_multiple_of(2) { 1 } else { -1 };
            add(col0, &|r, s| (r == s) as i64, rows, sign);
        }
    }
    Ok(d)
}

/// Degree-`n` cohomology of the normalized cochain complex of `cat` with
/// coefficients in the contravariant functor `a`.
pub fn higher_limits(cat: &FiniteCategory, a: &AbFunctor, n: usize) -> Result<AbelianInvariants> {
    let e = a.exponents.iter().flatten().copied().max().unwrap_or(0);
    if e == 0 {
        return Ok(AbelianInvariants {
            prime: a.prime,
            exponents: vec![],
        });
    }
    let ring = Ring::new(a.prime, e);
    let here = Cochains::new(cat, a, n)?;
    let next = Cochains::new(cat, a, n + 1)?;
    let dn = differential(cat, a, &ring, &here, &next, n)?;
    // (D v)_i must vanish modulo p^{f_i}; scale row i by p^{E - f_i}
    let mut scaled = dn.clone();
    for (i, &f) in next.exps.iter().enumerate() {
        let s = ring.pow_p(e - f);
        for j in 0..scaled.cols {
            let x = ring.mul(scaled.get(i, j), s);
            scaled.set(i, j, x);
        }
    }
    let k = if next.dim() == 0 {
        (0..here.dim())
            .map(|i| (0..here.dim()).map(|j| (i == j) as u64).collect())
            .collect()
    } else {
        kernel(&ring, &scaled)
    };
    let mut b: Vec<Vec<u64>> = here
        .exps
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let mut v = vec![0; here.dim()];
            v[i] = ring.pow_p(f);
            v
        })
        .filter(|v: &Vec<u64>| v.iter().any(|&x| x != 0))
        .collect();
    if n > 0 {
        let prev = Cochains::new(cat, a, n - 1)?;
        let dp = differential(cat, a, &ring, &prev, &here, n - 1)?;
        for j in 0..dp.cols {
            let col = dp.column(j);
            if col.iter().any(|&x| x != 0) {
                b.push(col);
            }
        }
    }
    Ok(AbelianInvariants {
        prime: a.prime,
        exponents: subquotient_exponents(&ring, here.dim(), &k, &b),
    })
}

/// Compatible families, computed by enumeration rather than linear algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InverseLimit {
    pub invariants: AbelianInvariants,
    /// An object receiving a morphism from every object, if there is one;
    /// the limit embeds into its value.
    pub terminal: Option<usize>,
    /// Coordinates in `A(terminal)` of the limit elements.
    pub elements: Vec<Vec<i64>>,
}

fn all_vectors(prime: u64, exps: &[u32]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &e in exps {
        let m = prime.pow(e) as i64;
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (0..m).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn inverse_limit(cat: &FiniteCategory, a: &AbFunctor, max_elements: usize) -> Result<InverseLimit> {
    let n = cat.object_count();
    let terminal = (0..n).find(|&t| (0..n).all(|x| cat.count(x, t) > 0));
    let compatible = |u: &[Vec<i64>]| {
        (0..cat.morphism_count()).all(|f| u[cat.source(f)] == a.apply(cat, f, &u[cat.target(f)]))
    };
    if let Some(t) = terminal {
        let size: u64 = a.exponents[t].iter().map(|&e| a.prime.pow(e)).product();
        if size as usize > max_elements {
            return Err(FlabError::Resource {
                what: "inverse limit enumeration".into(),
                order: size as usize,
                bound: max_elements,
            });
        }
        let to_t: Vec<MorId> = (0..n)
            .map(|x| {
                if x == t {
                    cat.identity(t)
                } else {
                    cat.hom(x, t).start
                }
            })
            .collect();
        let elements: Vec<Vec<i64>> = all_vectors(a.prime, &a.exponents[t])
            .into_iter()
            .filter(|z| {
                let u: Vec<Vec<i64>> = (0..n).map(|x| a.apply(cat, to_t[x], z)).collect();
                compatible(&u)
            })
            .collect();
        return Ok(InverseLimit {
            invariants: AbelianInvariants::of_elements(a.prime, &a.exponents[t], &elements),
            terminal: Some(t),
            elements,
        });
    }
    let all_exps: Vec<u32> = a.exponents.iter().flatten().copied().collect();
    let size: u64 = all_exps.iter().map(|&e| a.prime.pow(e)).product();
    if size as usize > max_elements {
        return Err(FlabError::Resource {
            what: "inverse limit enumeration".into(),
            order: size as usize,
            bound: max_elements,
        });
    }
    let elements: Vec<Vec<i64>> = all_vectors(a.prime, &all_exps)
        .into_iter()
        .filter(|v| {
            let mut u = vec![];
            let mut k = 0;
            for x in 0..n {
                u.push(v[k..k + a.dim(x)].to_vec());
                k += a.dim(x);
            }
            compatible(&u)
        })
        .collect();
    Ok(InverseLimit {
        invariants: AbelianInvariants::of_elements(a.prime, &all_exps, &elements),
        terminal: None,
        elements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::config::Bounds;
    use crate::linking::functor::CenterFunctor;
    use crate::linking::orbit::OrbitCategory;

    fn vee() -> FiniteCategory {
        let counts = vec![vec![1, 0, 1], vec![0, 1, 1], vec![0, 0, 1]];
        FiniteCategory::from_fn(
            vec!["a".into(), "b".into(), "c".into()],
            counts,
            vec![],
            |_, _, _, _, _| 0,
        )
        .unwrap()
    }

    /// Two parallel arrows a ⇉ b: the nerve is a circle.
    fn parallel() -> FiniteCategory {
        FiniteCategory::from_fn(
            vec!["a".into(), "b".into()],
            vec![vec![1, 2], vec![0, 1]],
            vec![],
            |_, _, _, g, f| g + f,
        )
        .unwrap()
    }

    #[test]
    fn constant_functor_over_terminal_object() {
        let c = vee();
        let a = AbFunctor::constant(&c, 2, vec![2, 1]);
        a.validate(&c).unwrap();
        let h0 = higher_limits(&c, &a, 0).unwrap();
        assert_eq!(h0.exponents, vec![2, 1]);
        for n in 1..4 {
            assert!(higher_limits(&c, &a, n).unwrap().is_trivial(), "degree {n}");
        }
        assert_eq!(inverse_limit(&c, &a, 1000).unwrap().invariants, h0);
    }

    #[test]
    fn circle_has_first_cohomology() {
        let c = parallel();
        let a = AbFunctor::constant(&c, 3, vec![1]);
        assert_eq!(higher_limits(&c, &a, 0).unwrap().exponents, vec![1]);
        assert_eq!(higher_limits(&c, &a, 1).unwrap().exponents, vec![1]);
        assert!(higher_limits(&c, &a, 2).unwrap().is_trivial());
    }

    #[test]
    fn group_cohomology_of_c2_with_sign_coefficients() {
        // one object with End = C2 acting on Z/4 by negation; H^0 = Z/2,
        // H^1 = Z/4 / (norm-zero over image) = Z/2, H^2 = Z/2
        let c = FiniteCategory::from_fn(vec!["*".into()], vec![vec![2]], vec![], |_, _, _, g, f| {
            (g + f) % 2
        })
        .unwrap();
        let a = AbFunctor::new(&c, 2, vec![vec![2]], vec![vec![vec![1]], vec![vec![-1]]]).unwrap();
        assert_eq!(higher_limits(&c, &a, 0).unwrap().exponents, vec![1]);
        assert_eq!(higher_limits(&c, &a, 1).unwrap().exponents, vec![1]);
        assert_eq!(higher_limits(&c, &a, 2).unwrap().exponents, vec![1]);
        assert_eq!(inverse_limit(&c, &a, 100).unwrap().invariants.exponents, vec![1]);
    }

    #[test]
    fn center_functor_of_s4_has_trivial_limit() {
        let e = catalog::load("s4-d8", &Bounds::default()).unwrap();
        let o = OrbitCategory::new(&e.fusion, true).unwrap();
        let z = CenterFunctor::new(&e.fusion, &o).unwrap();
        let lim = inverse_limit(&o.cat, &z.functor, 1 << 20).unwrap();
        assert!(lim.invariants.is_trivial());
        assert_eq!(higher_limits(&o.cat, &z.functor, 0).unwrap(), lim.invariants);
    }

    #[test]
    fn center_functor_of_inner_system_is_center_of_s() {
        let e = catalog::load("inner-d8", &Bounds::default()).unwrap();
        let o = OrbitCategory::new(&e.fusion, true).unwrap();
        let z = CenterFunctor::new(&e.fusion, &o).unwrap();
        let lim = inverse_limit(&o.cat, &z.functor, 1 << 20).unwrap();
        assert_eq!(lim.invariants.exponents, vec![1]);
        assert_eq!(higher_limits(&o.cat, &z.functor, 0).unwrap(), lim.invariants);
    }

    #[test]
    fn first_limits_of_center_functors() {
        for name in ["s4-d8", "a6-d8", "pgl2-9"] {
            let e = catalog::load(name, &Bounds::default()).unwrap();
            let z = crate::linking::FusionCenter::new(&e.fusion, 1 << 20).unwrap();
            assert!(z.elements == vec![0], "{name}");
            assert_eq!(z.higher(0).unwrap(), z.limit.invariants, "{name}");
            let h1 = z.higher(1).unwrap();
            eprintln!("{name}: lim1 = {h1}");
        }
    }
}
