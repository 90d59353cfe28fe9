use std::collections::BTreeSet;

use super::equivalence::OutTyp;
use super::split::out_order;
use crate::amalgam::{Amalgam, RobinsonSetup, Variant};
use crate::config::Bounds;
use crate::error::{FlabError, Result};
use crate::groups::{algo, Elem, FiniteGroupTable, Group, Subgroup};
use crate::report::Report;

fn normalizer_in(g: &FiniteGroupTable, h: &[Elem]) -> Vec<Elem> {
    let hs: BTreeSet<Elem> = h.iter().copied().collect();
    g.elements()
        .filter(|&x| h.iter().all(|&y| hs.contains(&g.conj(x, y))))
        .collect()
}

/// Conditions (i)–(iv) on every leaf of a Libman–Seeliger setup:
/// (i) `N_P = N_{L_P}(Z(S))`, (ii) `N_S(P)` nonabelian and
/// `N_P = N_{L_P}(N_S(P))`, (iii) `[N_S(P) : P] = p`, (iv) `L_P` is
/// transitive on the nonzero elements of `P/Φ(P)`.
pub fn itworks_check(setup: &RobinsonSetup) -> Result<Report> {
    if setup.variant != Variant::LibmanSeeliger {
        return Err(FlabError::input("the condition table needs a Libman-Seeliger setup"));
    }
    let l = &setup.linking;
    let f = setup.fusion();
    let lat = f.lattice();
    let s = f.s();
    let p = f.prime();
    let mut top = Report::new("itworks");
    let z = lat.center(lat.whole());
    top.check("Z(S) of order p", lat.order(z) == p);
    top.field("leaves", setup.leaves.len());
    for (i, leaf) in setup.leaves.iter().enumerate() {
        let pl = l.objects()[leaf.object];
        let n = lat.normalizer(pl);
        let lg = &leaf.group;
        let delta = |x: Elem| leaf.sylow.iter().find(|e| e.0 == x).expect("δ on N_S(P)").1;
        let mut edge: Vec<Elem> = leaf.j.clone();
        edge.sort_unstable();
        let z_img: Vec<Elem> = lat.sub(z).elements().iter().map(|&x| delta(x)).collect();
        let n_img: Vec<Elem> = lat.sub(n).elements().iter().map(|&x| delta(x)).collect();
        let mut node = Report::new(format!("leaf {} = {}", i + 1, lat.describe(pl)));
        node.check("(i) N_P is the normalizer of Z(S)", normalizer_in(lg, &z_img) == edge);
        node.check(
            "(ii) N_S(P) nonabelian and N_P its normalizer",
            !lat.is_abelian(n) && normalizer_in(lg, &n_img) == edge,
        );
        node.check("(iii) [N_S(P) : P] = p", lat.order(n) == p * lat.order(pl));
        // (iv) on cosets of the Frattini subgroup, acting through ρ
        let sub: &Subgroup = lat.sub(pl);
        let phi = algo::frattini(s, sub, p);
        let coset = |x: Elem| phi.elements().iter().map(|&y| s.mul(x, y)).min().expect("nonempty");
        let nonzero: BTreeSet<Elem> = sub.elements().iter().map(|&x| coset(x)).filter(|&c| !phi.contains(c)).collect();
        let mut orbit = BTreeSet::new();
        if let Some(&start) = nonzero.iter().next() {
            let mut stack = vec![start];
            orbit.insert(start);
            while let Some(c) = stack.pop() {
                for m in l.aut(leaf.object) {
                    let img = l.rho(m)[sub.position(c).expect("coset reps lie in P")];
                    let d = coset(img);
                    if orbit.insert(d) {
                        stack.push(d);
                    }
                }
            }
        }
        node.field("|P/Phi(P)| - 1", nonzero.len());
        node.check("(iv) transitive on the Frattini quotient", orbit == nonzero);
        top.child(node);
    }
    Ok(top)
}

pub fn only2_applies(report: &Report) -> bool {
    report.name == "itworks" && report.passed()
}

/// The condition table with the conclusion drawn from it, and a direct
/// injectivity check of `ω` when the amalgam is finite.
pub fn itworks_report(setup: &RobinsonSetup, g: &Amalgam, o: &OutTyp, bounds: &Bounds) -> Result<Report> {
    let table = itworks_check(setup)?;
    let applies = only2_applies(&table);
    let mut top = Report::new("conditions");
    top.field("only2 applies", applies);
    if applies {
        top.field("conclusion", "the transporter system of G is L and omega is an isomorphism");
        match g.table() {
            Some(t) => match out_order(&t, bounds) {
                Some(n) => {
                    top.field("|Out(G)|", n).field("|Out_typ(L)|", o.class_count());
                    top.check("omega injective", n == o.class_count());
                }
                None => {
                    top.field("omega injective", "Out(G) beyond the automorphism bound");
                }
            },
            None => {
                top.field("omega injective", "not checked, the amalgam is infinite");
            }
        }
    }
    top.child(table);
    Ok(top)
}
