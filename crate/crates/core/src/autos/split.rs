use super::amalgam_auto::{differ_by_hub_conjugation, gamma, omega, AmalgamAutomorphism};
use super::equivalence::{conjugation, s_object, upsilon, Equivalence, OutTyp};
use crate::amalgam::{compare_center, Amalgam, RobinsonSetup};
use crate::config::Bounds;
use crate::error::Result;
use crate::groups::{algo, hom::automorphisms, FiniteGroupTable, Group};
use crate::linking::FusionCenter;
use crate::report::Report;

fn natural_order(setup: &RobinsonSetup) -> Vec<usize> {
    (1..=setup.leaves.len()).collect()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for n in 1..=k {
        let mut next = vec![];
        for p in &out {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n);
                next.push(q);
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Largest family for which every processing order of `γ` is tried.
const MAX_ORDERED_LEAVES: usize = 5;

/// Checks `Ω(γ([Ψ])) ∈ [Ψ]` on every class, independence of `γ` from the
/// leaf order, and that `γ` respects products up to hub conjugation.
pub fn verify_split(setup: &RobinsonSetup, g: &Amalgam, o: &OutTyp) -> Result<Report> {
    let mut top = Report::new("split");
    top.field("classes", o.class_count());
    let order = natural_order(setup);
    let k = setup.leaves.len();
    let orders = if k <= MAX_ORDERED_LEAVES { permutations(k) } else { vec![order.clone()] };
    top.field("orders tried", orders.len());
    let mut gammas = vec![];
    for c in 0..o.class_count() {
        let rep = o.representative(c);
        let r = gamma(setup, rep, &order)?;
        let mut node = Report::new(format!("class {c}"));
        node.field("leaf permutation", &r.automorphism.permutation[1..]);
        node.field("hub steps", r.steps.iter().map(|&x| setup.hub.label(x)).collect::<Vec<_>>());
        node.field("twisted leaves", &r.twisted_leaves);
        node.check("certificate", r.automorphism.certificate(setup).is_ok());
        let back = omega(setup, &r.automorphism)?;
        node.check("omega of gamma in class", o.same_class(&back, rep));
        node.check("omega of gamma equals adjusted representative", back == r.adjusted);
        let mut independent = true;
        for ord in &orders {
            let other = gamma(setup, rep, ord)?;
            independent &= differ_by_hub_conjugation(g, &r.automorphism, &other.automorphism).is_some();
        }
        node.check("order independent", independent);
        top.child(node);
        gammas.push(r.automorphism);
    }
    let mut products = Report::new("gamma multiplicative");
    let mut bad = vec![];
    for a in 0..o.class_count() {
        for b in 0..o.class_count() {
            let c = o.multiply(a, b);
            let prod = gammas[a].compose(setup, &gammas[b]);
            if differ_by_hub_conjugation(g, &gammas[c], &prod).is_none() {
                bad.push((a, b));
            }
        }
    }
    products.field("pairs", o.class_count() * o.class_count());
    products.field("failures", &bad);
    products.check("holds", bad.is_empty());
    top.child(products);
    top.child(multiplicativity(setup, o, &gammas)?);
    Ok(top)
}

/// `Ω` on products of `γ` outputs and hub conjugations, `Ω(c_x) = c_x`,
/// and `υ` on products.
pub fn multiplicativity(setup: &RobinsonSetup, o: &OutTyp, gammas: &[AmalgamAutomorphism]) -> Result<Report> {
    let l = &setup.linking;
    let start = l.aut(s_object(l)).start;
    let mut autos: Vec<AmalgamAutomorphism> = gammas.to_vec();
    autos.extend(setup.hub.elements().map(|x| AmalgamAutomorphism::hub_conjugation(setup, x)));
    let omegas: Vec<Equivalence> = autos.iter().map(|a| omega(setup, a)).collect::<Result<_>>()?;
    let mut top = Report::new("multiplicativity");
    let mut omega_ok = true;
    for (i, a) in autos.iter().enumerate() {
        for (j, b) in autos.iter().enumerate() {
            omega_ok &= omega(setup, &a.compose(setup, b))? == omegas[i].compose(&omegas[j]);
        }
    }
    top.field("omega pairs", autos.len() * autos.len());
    top.check("omega multiplicative", omega_ok);
    let conj_ok = setup.hub.elements().all(|x| {
        omega(setup, &AmalgamAutomorphism::hub_conjugation(setup, x)).ok()
            == Some(conjugation(l, start + x as usize))
    });
    top.check("omega of hub conjugation is conjugation", conj_ok);
    let family: Vec<usize> = setup.family.iter().map(|&a| l.objects()[a]).collect();
    let ups: Vec<Vec<usize>> = o.equivalences.iter().map(|e| upsilon(l, &family, e)).collect::<Result<_>>()?;
    let mut ups_ok = true;
    for (i, a) in o.equivalences.iter().enumerate() {
        for (j, b) in o.equivalences.iter().enumerate() {
            let uab = upsilon(l, &family, &a.compose(b))?;
            ups_ok &= uab == ups[j].iter().map(|&t| ups[i][t]).collect::<Vec<_>>();
        }
    }
    let class_const = o.classes.iter().all(|c| c.iter().all(|&i| ups[i] == ups[c[0]]));
    top.check("upsilon multiplicative", ups_ok);
    top.check("upsilon constant on classes", class_const);
    Ok(top)
}

/// `|Out(G)|` for a finite group, or `None` beyond the automorphism bound.
pub fn out_order(g: &FiniteGroupTable, bounds: &Bounds) -> Option<usize> {
    let auts = automorphisms(g, bounds).ok()?;
    let inn = g.order() / algo::center(g).order();
    Some(auts.len() / inn)
}

/// Centers, the conjugation row, and `lim¹(Z_F)` beside the kernel of
/// `Out_typ(L) → Out(F)`.
pub fn exact_sequence_report(
    setup: &RobinsonSetup,
    g: &Amalgam,
    o: &OutTyp,
    bounds: &Bounds,
) -> Result<Report> {
    let l = &setup.linking;
    let f = setup.fusion();
    let max_elements = bounds.max_order;
    let mut top = Report::new("exact sequences");

    let cc = compare_center(setup, max_elements)?;
    let mut centers = Report::new("centers");
    centers.field("Z(G)", &cc.amalgam).field("Z(F)", &cc.inverse_limit);
    centers.check("equal", cc.pass);
    top.child(centers);

    let fc = FusionCenter::new(f, max_elements)?;
    let s_obj = s_object(l);
    let kernel: Vec<String> = o
        .conjugations
        .iter()
        .zip(l.aut(s_obj))
        .filter(|(c, _)| c.is_identity())
        .map(|(_, x)| l.label(x).to_string())
        .collect();
    let center_images: Vec<String> = fc
        .elements
        .iter()
        .map(|&z| l.label(l.delta(s_obj, s_obj, z).expect("δ on S")).to_string())
        .collect();
    let image = setup.hub.order() / kernel.len().max(1);
    let mut row = Report::new("conjugation row");
    row.field("kernel", &kernel).field("delta of Z(F)", &center_images);
    row.field("image", image).field("identity class", o.classes[0].len());
    let mut k_sorted = kernel.clone();
    k_sorted.sort();
    let mut c_sorted = center_images.clone();
    c_sorted.sort();
    row.check("kernel is Z(F)", k_sorted == c_sorted);
    row.check("image is the identity class", image == o.classes[0].len());
    row.check(
        "class count by orbits matches index",
        o.class_count() * o.classes[0].len() == o.equivalences.len(),
    );
    top.child(row);

    let lim1 = fc.higher(1)?;
    let inner: Vec<_> = f.aut(f.lattice().whole()).into_iter().cloned().collect();
    let kernel_classes: Vec<usize> = (0..o.class_count())
        .filter(|&c| inner.contains(&o.representative(c).psi))
        .collect();
    let mut fixing_s = 0;
    for &c in &kernel_classes {
        let r = gamma(setup, o.representative(c), &natural_order(setup))?;
        let on_s = r.automorphism.on_s(setup);
        let adjusted = setup.hub.elements().any(|x| {
            let a = AmalgamAutomorphism::hub_conjugation(setup, x).compose(setup, &r.automorphism);
            a.on_s(setup).is_some_and(|m| m.iter().enumerate().all(|(i, &y)| i as u32 == y))
        });
        if on_s.is_some() && adjusted {
            fixing_s += 1;
        }
    }
    let mut kernel_node = Report::new("kernel");
    kernel_node.field("lim^1(Z_F)", lim1.to_string());
    kernel_node.field("|lim^1|", lim1.order());
    kernel_node.field("classes acting on S by Aut_F(S)", kernel_classes.len());
    kernel_node.field("gamma images fixing S after hub conjugation", fixing_s);
    let agree = lim1.order() == kernel_classes.len() as u64;
    kernel_node.field("statement", if agree { "satisfied" } else { "unknown" });
    if f.prime() != 2 {
        kernel_node.field("odd prime kernel", kernel_classes.len());
    }
    top.child(kernel_node);

    if let Some(table) = g.table() {
        let mut fin = Report::new("finite amalgam");
        match out_order(&table, bounds) {
            Some(n) => {
                fin.field("|Out(G)|", n).field("|Out_typ(L)|", o.class_count());
                fin.check("omega surjective by count", n >= o.class_count());
                fin.field("omega injective", n == o.class_count());
            }
            None => {
                fin.field("|Out(G)|", "beyond the automorphism bound");
            }
        }
        top.child(fin);
    }
    Ok(top)
}
