//! Exhaustive scan of the 2-subgroups of S4 inside D8 = <(1 2 3 4), (1 3)>,
//! written on bare arrays so it shares nothing with the library.

use std::collections::BTreeSet;

pub type P4 = [u8; 4];

const ID: P4 = [0, 1, 2, 3];

fn mul(a: &P4, b: &P4) -> P4 {
    [a[b[0] as usize], a[b[1] as usize], a[b[2] as usize], a[b[3] as usize]]
}

fn inv(a: &P4) -> P4 {
    let mut r = [0; 4];
    for i in 0..4 {
        r[a[i] as usize] = i as u8;
    }
    r
}

fn conj(g: &P4, x: &P4) -> P4 {
    mul(&mul(g, x), &inv(g))
}

fn close(gens: &[P4]) -> BTreeSet<P4> {
    let mut set: BTreeSet<P4> = BTreeSet::from([ID]);
    let mut frontier = vec![ID];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = mul(g, &x);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set
}

fn s4() -> Vec<P4> {
    let mut out = vec![];
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    let p = [a, b, c, d];
                    if BTreeSet::from(p).len() == 4 {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

pub type Sub = BTreeSet<P4>;

fn conj_sub(g: &P4, h: &Sub) -> Sub {
    h.iter().map(|x| conj(g, x)).collect()
}

fn normalizer(g: &[P4], h: &Sub) -> Vec<P4> {
    g.iter().filter(|x| conj_sub(x, h) == *h).copied().collect()
}

fn centralizer(g: &[P4], h: &Sub) -> Vec<P4> {
    g.iter().filter(|x| h.iter().all(|y| conj(x, y) == *y)).copied().collect()
}

/// Whether `N/K` has a nontrivial normal 2-subgroup, by normal closures of
/// single cosets.
fn has_normal_two_subgroup(n: &[P4], k: &Sub) -> bool {
    n.iter().filter(|x| !k.contains(*x)).any(|x| {
        let mut gens: Vec<P4> = k.iter().copied().collect();
        gens.extend(n.iter().map(|g| conj(g, x)));
        let m = close(&gens);
        let index = m.len() / k.len();
        index > 1 && index.is_power_of_two()
    })
}

pub struct Oracle {
    /// Classes of subgroups of S under S4-conjugation.
    pub classes: Vec<Vec<Sub>>,
    pub centric: Vec<bool>,
    pub radical: Vec<bool>,
}

pub fn run() -> Oracle {
    let g = s4();
    let s = close(&[[1, 2, 3, 0], [2, 1, 0, 3]]);
    assert_eq!(s.len(), 8);
    let elems: Vec<P4> = s.iter().copied().collect();
    let mut subs: BTreeSet<Sub> = BTreeSet::new();
    for a in &elems {
        for b in &elems {
            subs.insert(close(&[*a, *b]));
        }
    }
    let mut classes: Vec<Vec<Sub>> = vec![];
    let mut seen: BTreeSet<Sub> = BTreeSet::new();
    for h in &subs {
        if seen.contains(h) {
            continue;
        }
        let class: BTreeSet<Sub> = g
            .iter()
            .map(|x| conj_sub(x, h))
            .filter(|c| c.is_subset(&s))
            .collect();
        seen.extend(class.iter().cloned());
        classes.push(class.into_iter().collect());
    }
    let centric = classes
        .iter()
        .map(|c| c.iter().all(|q| centralizer(&elems, q).iter().all(|x| q.contains(x))))
        .collect();
    let radical = classes
        .iter()
        .map(|c| {
            let p = &c[0];
            let n = normalizer(&g, p);
            let mut k: Vec<P4> = p.iter().copied().collect();
            k.extend(centralizer(&g, p));
            !has_normal_two_subgroup(&n, &close(&k))
        })
        .collect();
    Oracle { classes, centric, radical }
}

pub fn parse(text: &str) -> P4 {
    let mut p = ID;
    for cycle in text.split(')').filter(|c| c.contains('(')) {
        let pts: Vec<u8> = cycle
            .trim_start_matches('(')
            .split_whitespace()
            .map(|t| t.parse::<u8>().unwrap() - 1)
            .collect();
        for i in 0..pts.len() {
            p[pts[i] as usize] = pts[(i + 1) % pts.len()];
        }
    }
    p
}

/// Multiplication table of S4 with the identity first.
pub fn s4_table() -> (Vec<String>, Vec<Vec<u32>>) {
    let g = s4();
    let idx = |p: &P4| g.iter().position(|q| q == p).unwrap() as u32;
    let labels = g.iter().map(|p| format!("{p:?}")).collect();
    let table = g.iter().map(|a| g.iter().map(|b| idx(&mul(a, b))).collect()).collect();
    (labels, table)
}
