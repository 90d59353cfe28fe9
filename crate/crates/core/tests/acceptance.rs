//! Acceptance suite: one line per criterion. Runs without the libtest
//! harness so the lines always print.

mod common;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::s4_oracle::{self, Sub};
use flab::amalgam::{compare_center, verify_fusion, Amalgam, AmalgamWord, Letter, RobinsonSetup, Variant};
use flab::autos::{exact_sequence_report, itworks_check, only2_applies, verify_split, OutTyp};
use flab::catalog::{self, Example};
use flab::config::Bounds;
use flab::groups::hom::find_isomorphism;
use flab::groups::{FiniteGroupTable, Group};
use flab::linking::{higher_limits, inverse_limit, AbFunctor, FiniteCategory, FusionCenter, LinkingSystem};
use flab::report::Report;

const CATALOG: [&str; 4] = ["s4-d8", "a6-d8", "pgl2-9", "inner-d8"];

struct Built {
    example: Example,
    linking: Arc<LinkingSystem>,
    family: Vec<usize>,
}

fn build(name: &str) -> Built {
    let example = catalog::load(name, &Bounds::default()).unwrap();
    let linking = Arc::new(LinkingSystem::from_group(example.fusion.clone()).unwrap());
    let family = example.fusion.controlling_family(true).unwrap();
    Built { example, linking, family }
}

impl Built {
    fn setup(&self, v: Variant) -> Arc<RobinsonSetup> {
        Arc::new(RobinsonSetup::new(self.linking.clone(), &self.family, v).unwrap())
    }

    fn out_typ(&self) -> OutTyp {
        OutTyp::new(&self.linking, &self.family, &Bounds::default()).unwrap()
    }
}

fn fields_true(r: &Report, node: &str, keys: &[&str]) -> bool {
    let n = r.find(node).unwrap_or_else(|| panic!("no node {node}"));
    keys.iter().all(|k| n.get(k) == Some(&serde_json::Value::Bool(true)))
}

fn fixed_point_free(p: &s4_oracle::P4) -> bool {
    p.iter().enumerate().all(|(i, &j)| i as u8 != j)
}

fn fusion_classes() -> Result<String, String> {
    let oracle = s4_oracle::run();
    let b = build("s4-d8");
    let f = &b.example.fusion;
    let lat = f.lattice();
    let s = f.s();
    let as_sub = |i: usize| -> Sub { lat.sub(i).elements().iter().map(|&x| s4_oracle::parse(&s.label(x))).collect() };
    let mut lib: BTreeMap<Vec<Sub>, (bool, bool)> = BTreeMap::new();
    for class in f.classes() {
        let mut subs: Vec<Sub> = class.iter().map(|&i| as_sub(i)).collect();
        subs.sort();
        lib.insert(subs, (f.is_centric(class[0]), f.is_centric(class[0]) && f.is_radical(class[0])));
    }
    let mut want: BTreeMap<Vec<Sub>, (bool, bool)> = BTreeMap::new();
    for (i, c) in oracle.classes.iter().enumerate() {
        want.insert(c.clone(), (oracle.centric[i], oracle.centric[i] && oracle.radical[i]));
    }
    if lib != want {
        return Err("class data differs from the oracle".into());
    }
    let centric: Vec<usize> = want.iter().filter(|(_, v)| v.0).map(|(k, _)| k[0].len()).collect();
    let cr: Vec<&Vec<Sub>> = want.iter().filter(|(_, v)| v.1).map(|(k, _)| k).collect();
    // centric: V, V', C4 and S; centric radical: the normal Klein group V and S
    let is_v = |k: &Vec<Sub>| k.len() == 1 && k[0].len() == 4 && k[0].iter().all(|p| *p == [0, 1, 2, 3] || fixed_point_free(p));
    let is_s = |k: &Vec<Sub>| k[0].len() == 8;
    let cr_ok = cr.len() == 2 && cr.iter().any(|k| is_v(k)) && cr.iter().any(|k| is_s(k));
    if centric.len() != 4 || centric.iter().filter(|&&n| n == 4).count() != 3 || !cr_ok {
        return Err(format!("centric orders {centric:?}, {} centric radical", cr.len()));
    }
    Ok("4 centric classes, centric radical {V, S}".into())
}

fn saturation() -> Result<String, String> {
    for name in CATALOG {
        let r = build(name).example.fusion.check_saturation();
        if !(r.saturated && r.axiom_i && r.axiom_ii && r.axiom_iii_vacuous) {
            return Err(format!("{name}: {:?}", r.counterexample));
        }
    }
    Ok("all four entries saturated".into())
}

fn s4_collapse() -> Result<String, String> {
    let b = build("s4-d8");
    let g = Amalgam::new(b.setup(Variant::Robinson));
    // closure of the identity under all vertex letters
    let gens: Vec<Letter> = g.vertex_letters().into_iter().map(|v| g.from_vertex(v)).collect();
    let mut index: HashMap<AmalgamWord, u32> = HashMap::new();
    let mut words = vec![AmalgamWord::identity()];
    index.insert(AmalgamWord::identity(), 0);
    let mut queue = VecDeque::from([AmalgamWord::identity()]);
    while let Some(w) = queue.pop_front() {
        for &x in &gens {
            let y = g.multiply(&g.reduce(&[x]).unwrap(), &w);
            if !index.contains_key(&y) {
                index.insert(y.clone(), words.len() as u32);
                words.push(y.clone());
                queue.push_back(y);
            }
            if words.len() > 1000 {
                return Err("more than 1000 normal forms".into());
            }
        }
    }
    let n = words.len();
    let table: Vec<Vec<u32>> = words
        .iter()
        .map(|a| words.iter().map(|b| index[&g.multiply(a, b)]).collect())
        .collect();
    let labels = words.iter().map(|w| g.format(w)).collect();
    let t = FiniteGroupTable::new(labels, table, 0).map_err(|e| e.to_string())?;
    let (l4, t4) = s4_oracle::s4_table();
    let s4 = FiniteGroupTable::new(l4, t4, 0).map_err(|e| e.to_string())?;
    if n != 24 || find_isomorphism(&t, &s4).is_none() {
        return Err(format!("{n} normal forms"));
    }
    Ok("24 normal forms, isomorphic to S4".into())
}

fn normal_form_laws() -> Result<String, String> {
    let b = build("a6-d8");
    let g = Amalgam::new(b.setup(Variant::Robinson));
    let letters: Vec<Letter> = g.vertex_letters().into_iter().map(|v| g.from_vertex(v)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let random = |rng: &mut ChaCha8Rng| {
        let n = rng.gen_range(0..10);
        let w: Vec<Letter> = (0..n).map(|_| letters[rng.gen_range(0..letters.len())]).collect();
        g.reduce(&w).unwrap()
    };
    let mut long = 0;
    let mut prev = (AmalgamWord::identity(), AmalgamWord::identity());
    for i in 0..10_000 {
        let w = random(&mut rng);
        if g.reduce(&g.letters(&w)).unwrap() != w {
            return Err(format!("word {i}: reduce not idempotent"));
        }
        if !g.multiply(&w, &g.invert(&w)).is_identity() || !g.multiply(&g.invert(&w), &w).is_identity() {
            return Err(format!("word {i}: inverse law"));
        }
        let (a, b) = &prev;
        if g.multiply(&g.multiply(a, b), &w) != g.multiply(a, &g.multiply(b, &w)) {
            return Err(format!("word {i}: associativity"));
        }
        if w.len() >= 2 {
            long += 1;
            if g.element_of_s(&w).is_some() {
                return Err(format!("word {i}: long reduced word lies in S"));
            }
        }
        prev = (prev.1, w);
    }
    if long == 0 {
        return Err("no reduced word of length 2 was sampled".into());
    }
    Ok(format!("10000 words, {long} of length at least 2"))
}

fn fusion_of_amalgam() -> Result<String, String> {
    for name in ["s4-d8", "a6-d8", "pgl2-9"] {
        let b = build(name);
        for v in [Variant::Robinson, Variant::LibmanSeeliger] {
            let r = verify_fusion(&Amalgam::new(b.setup(v)), 1, 100_000).map_err(|e| e.to_string())?;
            if !r.pass {
                return Err(format!("{name} {v:?}: {:?}", r.witness));
            }
        }
    }
    let b = build("s4-d8");
    let s = b.example.fusion.lattice().whole();
    let setup = RobinsonSetup::new_unchecked(b.linking.clone(), &[s], Variant::Robinson).unwrap();
    let r = verify_fusion(&Amalgam::new(Arc::new(setup)), 1, 100_000).map_err(|e| e.to_string())?;
    match (r.pass, r.witness) {
        (false, Some(w)) => Ok(format!("six runs pass; {{S}} fails with {w}")),
        _ => Err("the family {S} was not rejected".into()),
    }
}

fn centers() -> Result<String, String> {
    let mut sizes = vec![];
    for name in CATALOG {
        let b = build(name);
        let c = compare_center(&b.setup(Variant::Robinson), 100_000).map_err(|e| e.to_string())?;
        let expected = if name == "inner-d8" { 2 } else { 1 };
        if !c.pass || c.amalgam.len() != expected || c.inverse_limit.len() != expected {
            return Err(format!("{name}: {:?} vs {:?}", c.amalgam, c.inverse_limit));
        }
        sizes.push(format!("{name} {expected}"));
    }
    Ok(format!("|Z(G)| = |Z(F)|: {}", sizes.join(", ")))
}

fn split() -> Result<String, String> {
    let mut out = vec![];
    for name in ["s4-d8", "a6-d8"] {
        let b = build(name);
        let setup = b.setup(Variant::Robinson);
        let o = b.out_typ();
        let r = verify_split(&setup, &Amalgam::new(setup.clone()), &o).map_err(|e| e.to_string())?;
        let classes_ok = (0..o.class_count()).all(|c| {
            fields_true(&r, &format!("class {c}"), &["certificate", "omega of gamma in class", "order independent"])
        });
        if !r.passed() || !classes_ok {
            return Err(format!("{name}:\n{}", r.to_text()));
        }
        out.push(format!("{name} {} classes", o.class_count()));
    }
    Ok(out.join(", "))
}

fn homomorphisms() -> Result<String, String> {
    for name in ["s4-d8", "a6-d8"] {
        let b = build(name);
        let setup = b.setup(Variant::Robinson);
        let r = verify_split(&setup, &Amalgam::new(setup.clone()), &b.out_typ()).map_err(|e| e.to_string())?;
        let keys = ["omega multiplicative", "omega of hub conjugation is conjugation", "upsilon multiplicative"];
        if !fields_true(&r, "multiplicativity", &keys) || !fields_true(&r, "gamma multiplicative", &["holds"]) {
            return Err(format!("{name}:\n{}", r.to_text()));
        }
    }
    Ok("omega, upsilon and gamma respect products".into())
}

fn higher() -> Result<String, String> {
    for name in CATALOG {
        let b = build(name);
        let fc = FusionCenter::new(&b.example.fusion, 100_000).map_err(|e| e.to_string())?;
        let h0 = fc.higher(0).map_err(|e| e.to_string())?;
        if h0 != fc.limit.invariants {
            return Err(format!("{name}: lim^0 {h0} but inverse limit {}", fc.limit.invariants));
        }
    }
    // a -> c <- b, with c terminal
    let vee = FiniteCategory::from_fn(
        vec!["a".into(), "b".into(), "c".into()],
        vec![vec![1, 0, 1], vec![0, 1, 1], vec![0, 0, 1]],
        vec![],
        |_, _, _, _, _| 0,
    )
    .map_err(|e| e.to_string())?;
    let a = AbFunctor::constant(&vee, 2, vec![3, 1]);
    for n in 1..4 {
        if !higher_limits(&vee, &a, n).map_err(|e| e.to_string())?.is_trivial() {
            return Err(format!("lim^{n} of a constant functor is nonzero"));
        }
    }
    let lim = inverse_limit(&vee, &a, 1000).map_err(|e| e.to_string())?;
    if lim.invariants.exponents != vec![3, 1] {
        return Err("lim^0 of a constant functor".into());
    }
    let mut recorded = vec![];
    for name in ["s4-d8", "a6-d8"] {
        let b = build(name);
        let setup = b.setup(Variant::Robinson);
        let r = exact_sequence_report(&setup, &Amalgam::new(setup.clone()), &b.out_typ(), &Bounds::default())
            .map_err(|e| e.to_string())?;
        let v = r.find("kernel").and_then(|k| k.get("lim^1(Z_F)")).ok_or("lim^1 not recorded")?;
        recorded.push(format!("{name} {}", v.as_str().unwrap_or("?")));
    }
    Ok(format!("lim^1(Z_F): {}", recorded.join(", ")))
}

fn conditions() -> Result<String, String> {
    let mut out = vec![];
    for name in ["a6-d8", "pgl2-9"] {
        let b = build(name);
        let r = itworks_check(&b.setup(Variant::LibmanSeeliger)).map_err(|e| e.to_string())?;
        let rows = r.children.len();
        let full = r.children.iter().all(|c| c.fields.keys().filter(|k| k.starts_with('(')).count() == 4);
        if rows == 0 || !full {
            return Err(format!("{name}: table incomplete\n{}", r.to_text()));
        }
        if name == "pgl2-9" && !(r.passed() && only2_applies(&r)) {
            return Err(format!("pgl2-9 conditions fail\n{}", r.to_text()));
        }
        out.push(format!("{name} {}", if r.passed() { "all hold" } else { "not all hold" }));
    }
    Ok(out.join(", "))
}

type Criterion = fn() -> Result<String, String>;

fn main() {
    let criteria: [(&str, Criterion, Duration); 10] = [
        ("fusion classes of s4-d8 match the oracle", fusion_classes, Duration::from_secs(5)),
        ("saturation on the catalog", saturation, Duration::from_secs(60)),
        ("s4-d8 amalgam collapses to S4", s4_collapse, Duration::from_secs(5)),
        ("normal-form laws in the a6-d8 amalgam", normal_form_laws, Duration::from_secs(30)),
        ("amalgam fusion equals F", fusion_of_amalgam, Duration::from_secs(120)),
        ("Z(G) equals Z(F)", centers, Duration::from_secs(10)),
        ("gamma splits omega", split, Duration::from_secs(600)),
        ("homomorphism properties", homomorphisms, Duration::from_secs(300)),
        ("higher limits", higher, Duration::from_secs(60)),
        ("condition table", conditions, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (i, (what, run, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = t.elapsed();
        let result = match result {
            Ok(_) if elapsed > *budget => Err(format!("took {elapsed:?}, budget {budget:?}")),
            r => r,
        };
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {what}: {detail} ({elapsed:.2?})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {what}: {detail} ({elapsed:.2?})", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
