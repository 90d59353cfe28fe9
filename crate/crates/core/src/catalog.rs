use std::sync::Arc;

use crate::config::Bounds;
use crate::error::{FlabError, Result};
use crate::fusion::FusionSystem;
use crate::groups::{algo, Group, Perm, PermGroup, Subgroup};

/// Which family of subgroups drives the amalgam of an example.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyChoice {
    /// The centric-radical controlling family.
    Controlling,
    /// Only `S` itself; too small to control fusion in general.
    SylowOnly,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub prime: usize,
    pub degree: usize,
    pub family: FamilyChoice,
    /// Whether the pipeline checks are expected to pass.
    pub expect_pass: bool,
}

/// A catalog entry with its group, Sylow subgroup and fusion system built.
#[derive(Clone, Debug)]
pub struct Example {
    pub entry: CatalogEntry,
    pub group: Arc<PermGroup>,
    pub sylow: Subgroup,
    pub fusion: Arc<FusionSystem>,
}

pub fn entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "s4-d8",
            description: "symmetric group S4 at p = 2, Sylow subgroup D8",
            prime: 2,
            degree: 4,
            family: FamilyChoice::Controlling,
            expect_pass: true,
        },
        CatalogEntry {
            name: "a6-d8",
            description: "alternating group A6 at p = 2, Sylow subgroup D8",
            prime: 2,
            degree: 6,
            family: FamilyChoice::Controlling,
            expect_pass: true,
        },
        CatalogEntry {
            name: "pgl2-9",
            description: "PGL2(9) on the projective line at p = 2, Sylow subgroup D16",
            prime: 2,
            degree: 10,
            family: FamilyChoice::Controlling,
            expect_pass: true,
        },
        CatalogEntry {
            name: "inner-d8",
            description: "D8 itself, whose fusion system is inner",
            prime: 2,
            degree: 4,
            family: FamilyChoice::Controlling,
            expect_pass: true,
        },
        CatalogEntry {
            name: "s4-d8-sylow-only",
            description: "S4 at p = 2 with the family {S}, which does not control fusion",
            prime: 2,
            degree: 4,
            family: FamilyChoice::SylowOnly,
            expect_pass: false,
        },
    ]
}

pub fn entry(name: &str) -> Result<CatalogEntry> {
    entries()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| FlabError::input(format!("unknown catalog entry {name:?}")))
}

/// Elements of `F_9 = F_3[i]` are numbered `a + 3b` for `a + bi`; the point
/// at infinity is 9.
fn pgl2_9_generators() -> Vec<Perm> {
    const INF: u32 = 9;
    let add = |x: u32, y: u32| (x % 3 + y % 3) % 3 + 3 * ((x / 3 + y / 3) % 3);
    let mul = |x: u32, y: u32| {
        let (a, b, c, d) = (x % 3, x / 3, y % 3, y / 3);
        let re = (a * c + 2 * b * d) % 3;
        let im = (a * d + b * c) % 3;
        re + 3 * im
    };
    let inv = |x: u32| (1..9).find(|&y| mul(x, y) == 1).expect("nonzero");
    let omega = 1 + 3; // 1 + i has multiplicative order 8
    let minus_one = 2;
    let translate: Vec<u32> = (0..10).map(|x| if x == INF { INF } else { add(x, 1) }).collect();
    let scale: Vec<u32> = (0..10).map(|x| if x == INF { INF } else { mul(omega, x) }).collect();
    let flip: Vec<u32> = (0..10)
        .map(|x| match x {
            INF => 0,
            0 => INF,
            _ => mul(minus_one, inv(x)),
        })
        .collect();
    [translate, scale, flip]
        .into_iter()
        .map(|v| Perm::new(v).expect("bijection of the projective line"))
        .collect()
}

fn sylow_from(g: &PermGroup, degree: usize, gens: &[&str]) -> Result<Subgroup> {
    let elems = gens
        .iter()
        .map(|c| {
            let p = Perm::from_cycles(degree, c)?;
            g.find(&p)
                .ok_or_else(|| FlabError::internal(format!("{c} is not in the group")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(algo::generate(g, &elems))
}

impl CatalogEntry {
    pub fn build(&self, bounds: &Bounds) -> Result<Example> {
        let (g, s) = match self.name {
            "s4-d8" | "s4-d8-sylow-only" => {
                let g = PermGroup::from_cycle_strings(4, &["(1 2 3 4)", "(1 2)"])?;
                let s = sylow_from(&g, 4, &["(1 2 3 4)", "(1 3)"])?;
                (g, s)
            }
            "a6-d8" => {
                let g = PermGroup::from_cycle_strings(6, &["(1 2 3)", "(2 3 4 5 6)"])?;
                let s = sylow_from(&g, 6, &["(1 2 3 4)(5 6)", "(1 3)(5 6)"])?;
                (g, s)
            }
            "pgl2-9" => {
                let g = PermGroup::closure_bounded(10, pgl2_9_generators(), bounds)?;
                let s = algo::sylow(&g, 2);
                (g, s)
            }
            "inner-d8" => {
                let g = PermGroup::from_cycle_strings(4, &["(1 2 3 4)", "(1 3)"])?;
                let s = Subgroup::whole(&g);
                (g, s)
            }
            other => return Err(FlabError::input(format!("unknown catalog entry {other:?}"))),
        };
        bounds.check_order(self.name, g.order())?;
        let g = Arc::new(g);
        let fusion = FusionSystem::from_group(self.name, g.clone(), &s, self.prime, bounds)?;
        Ok(Example {
            entry: self.clone(),
            group: g,
            sylow: s,
            fusion: Arc::new(fusion),
        })
    }
}

pub fn load(name: &str, bounds: &Bounds) -> Result<Example> {
    entry(name)?.build(bounds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders() {
        let b = Bounds::default();
        let orders: Vec<(usize, usize)> = ["s4-d8", "a6-d8", "pgl2-9", "inner-d8"]
            .iter()
            .map(|n| {
                let e = load(n, &b).unwrap();
                (e.group.order(), e.sylow.order())
            })
            .collect();
        assert_eq!(orders, vec![(24, 8), (360, 8), (720, 16), (8, 8)]);
    }

    #[test]
    fn pgl2_9_sylow_is_dihedral() {
        let e = load("pgl2-9", &Bounds::default()).unwrap();
        let s = e.fusion.s();
        let orders: Vec<usize> = s.elements().map(|x| s.elem_order(x)).collect();
        assert_eq!(orders.iter().filter(|&&o| o == 8).count(), 4);
        assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 9);
        assert!(!algo::is_abelian(s, &Subgroup::whole(s)));
    }
}
