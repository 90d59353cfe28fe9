use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use flab::amalgam::{Amalgam, Letter, RobinsonSetup, Variant};
use flab::autos::{gamma, AmalgamAutomorphism, OutTyp};
use flab::catalog;
use flab::config::Bounds;
use flab::groups::Perm;
use flab::linking::LinkingSystem;
use flab::report::Report;

struct A6 {
    setup: Arc<RobinsonSetup>,
    g: Amalgam,
    letters: Vec<Letter>,
    out: OutTyp,
    gammas: Vec<AmalgamAutomorphism>,
}

fn a6() -> &'static A6 {
    static CELL: OnceLock<A6> = OnceLock::new();
    CELL.get_or_init(|| {
        let b = Bounds::default();
        let e = catalog::load("a6-d8", &b).unwrap();
        let family = e.fusion.controlling_family(true).unwrap();
        let l = Arc::new(LinkingSystem::from_group(e.fusion.clone()).unwrap());
        let setup = Arc::new(RobinsonSetup::new(l.clone(), &family, Variant::Robinson).unwrap());
        let g = Amalgam::new(setup.clone());
        let letters = g.vertex_letters().into_iter().map(|v| g.from_vertex(v)).collect();
        let out = OutTyp::new(&l, &family, &b).unwrap();
        let order: Vec<usize> = (1..=setup.leaves.len()).collect();
        let gammas = (0..out.class_count())
            .map(|c| gamma(&setup, out.representative(c), &order).unwrap().automorphism)
            .collect();
        A6 { setup, g, letters, out, gammas }
    })
}

fn word() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(any::<usize>(), 0..12)
}

fn letters_of(idx: &[usize]) -> Vec<Letter> {
    let a = a6();
    idx.iter().map(|&i| a.letters[i % a.letters.len()]).collect()
}

proptest! {
    #[test]
    fn reduction_is_a_monoid_map(x in word(), y in word()) {
        let g = &a6().g;
        let (u, v) = (letters_of(&x), letters_of(&y));
        let uv: Vec<Letter> = u.iter().chain(v.iter()).copied().collect();
        let (a, b) = (g.reduce(&u).unwrap(), g.reduce(&v).unwrap());
        prop_assert_eq!(g.reduce(&uv).unwrap(), g.multiply(&a, &b));
        prop_assert_eq!(g.reduce(&g.letters(&a)).unwrap(), a.clone());
        prop_assert!(g.multiply(&a, &g.invert(&a)).is_identity());
    }

    #[test]
    fn format_parse_round_trip(x in word()) {
        let g = &a6().g;
        let w = g.reduce(&letters_of(&x)).unwrap();
        prop_assert_eq!(g.reduce(&g.parse(&g.format(&w)).unwrap()).unwrap(), w);
    }

    #[test]
    fn gamma_outputs_are_homomorphisms(c in 0usize..4, x in word(), y in word()) {
        let a = a6();
        let auto = &a.gammas[c % a.gammas.len()];
        let (u, v) = (a.g.reduce(&letters_of(&x)).unwrap(), a.g.reduce(&letters_of(&y)).unwrap());
        prop_assert_eq!(
            auto.apply(&a.g, &a.g.multiply(&u, &v)),
            a.g.multiply(&auto.apply(&a.g, &u), &auto.apply(&a.g, &v))
        );
    }

    #[test]
    fn gamma_composition_matches_application(c in 0usize..4, d in 0usize..4, x in word()) {
        let a = a6();
        let n = a.gammas.len();
        let (p, q) = (&a.gammas[c % n], &a.gammas[d % n]);
        let w = a.g.reduce(&letters_of(&x)).unwrap();
        prop_assert_eq!(p.compose(&a.setup, q).apply(&a.g, &w), p.apply(&a.g, &q.apply(&a.g, &w)));
    }

    #[test]
    fn class_product_is_associative(i in 0usize..4, j in 0usize..4, k in 0usize..4) {
        let o = &a6().out;
        let n = o.class_count();
        let (i, j, k) = (i % n, j % n, k % n);
        prop_assert_eq!(o.multiply(o.multiply(i, j), k), o.multiply(i, o.multiply(j, k)));
        prop_assert_eq!(o.multiply(0, i), i);
    }

    #[test]
    fn equivalence_inverse(i in any::<usize>()) {
        let o = &a6().out;
        let e = &o.equivalences[i % o.equivalences.len()];
        prop_assert!(e.compose(&e.inverse()).is_identity());
        prop_assert!(e.inverse().compose(e).is_identity());
    }

    #[test]
    fn perm_group_laws(a in Just((0u32..7).collect::<Vec<_>>()).prop_shuffle(),
                       b in Just((0u32..7).collect::<Vec<_>>()).prop_shuffle(),
                       c in Just((0u32..7).collect::<Vec<_>>()).prop_shuffle()) {
        let (a, b, c) = (Perm::new(a).unwrap(), Perm::new(b).unwrap(), Perm::new(c).unwrap());
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert_eq!(a.compose(&a.inverse()), Perm::new((0..7).collect()).unwrap());
        prop_assert_eq!(Perm::from_cycles(7, &a.to_string()).unwrap(), a);
    }

    #[test]
    fn report_json_round_trip(names in prop::collection::vec("[a-z ]{1,8}", 1..5), flags in prop::collection::vec(any::<bool>(), 1..5)) {
        let mut top = Report::new("top");
        for (n, f) in names.iter().zip(flags.iter()) {
            let mut c = Report::new(n.clone());
            c.check("holds", *f).field("label", n);
            top.child(c);
        }
        let back = Report::from_json(&top.to_json()).unwrap();
        prop_assert_eq!(back.passed(), flags.iter().take(names.len()).all(|&f| f));
        prop_assert_eq!(back, top);
    }
}
