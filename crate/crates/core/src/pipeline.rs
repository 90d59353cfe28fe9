use std::sync::Arc;

use crate::amalgam::{compare_center, verify_fusion, Amalgam, RobinsonSetup, Variant};
use crate::autos::{exact_sequence_report, itworks_report, verify_split, OutTyp};
use crate::catalog::{self, Example, FamilyChoice};
use crate::config::Bounds;
use crate::error::{FlabError, Result};
use crate::groups::Group;
use crate::linking::LinkingSystem;
use crate::report::Report;

/// Work budget for the exhaustive linking-system axiom checks.
pub const AXIOM_WORK: usize = 50_000_000;
/// Word budget when comparing the fusion of an amalgam with `F`.
pub const FUSION_WORDS: usize = 100_000;

/// Which subgroups form the tree of groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyMode {
    /// One representative per `N_F(S)`-class of centric radical subgroups.
    Complete,
    /// One representative per `F`-class.
    Classes,
    /// Only `S`. Fusion is not checked to be controlled.
    SylowOnly,
}

impl FamilyMode {
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "complete" => Ok(FamilyMode::Complete),
            "classes" | "controlling" => Ok(FamilyMode::Classes),
            "{S}" | "S" | "sylow" => Ok(FamilyMode::SylowOnly),
            other => Err(FlabError::input(format!(
                "unknown family {other:?}; expected complete, classes or {{S}}"
            ))),
        }
    }

    fn of_entry(choice: FamilyChoice) -> Self {
        match choice {
            FamilyChoice::Controlling => FamilyMode::Complete,
            FamilyChoice::SylowOnly => FamilyMode::SylowOnly,
        }
    }
}

pub fn parse_variant(text: &str) -> Result<Variant> {
    match text.trim() {
        "robinson" => Ok(Variant::Robinson),
        "ls" | "libman-seeliger" => Ok(Variant::LibmanSeeliger),
        other => Err(FlabError::input(format!(
            "unknown variant {other:?}; expected robinson or ls"
        ))),
    }
}

pub fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::Robinson => "robinson",
        Variant::LibmanSeeliger => "ls",
    }
}

/// Everything built for one catalog entry, shared by the CLI commands.
pub struct Context {
    pub example: Example,
    pub linking: Arc<LinkingSystem>,
    /// Lattice indices, `S` first.
    pub family: Vec<usize>,
    pub mode: FamilyMode,
    pub setup: Arc<RobinsonSetup>,
    pub amalgam: Amalgam,
}

impl Context {
    pub fn load(name: &str, variant: Variant, mode: Option<FamilyMode>, bounds: &Bounds) -> Result<Self> {
        let example = catalog::load(name, bounds)?;
        let linking = Arc::new(LinkingSystem::from_group(example.fusion.clone())?);
        let mode = mode.unwrap_or_else(|| FamilyMode::of_entry(example.entry.family));
        let family = family_for(&example, mode)?;
        let setup = Arc::new(build_setup(&linking, &family, mode, variant)?);
        let amalgam = Amalgam::new(setup.clone());
        Ok(Context {
            example,
            linking,
            family,
            mode,
            setup,
            amalgam,
        })
    }

    pub fn with_variant(&self, variant: Variant) -> Result<Arc<RobinsonSetup>> {
        if variant == self.setup.variant {
            return Ok(self.setup.clone());
        }
        Ok(Arc::new(build_setup(&self.linking, &self.family, self.mode, variant)?))
    }

    pub fn out_typ(&self, bounds: &Bounds) -> Result<OutTyp> {
        OutTyp::new(&self.linking, &self.family, bounds)
    }
}

fn family_for(example: &Example, mode: FamilyMode) -> Result<Vec<usize>> {
    let f = &example.fusion;
    match mode {
        FamilyMode::Complete => f.controlling_family(true),
        FamilyMode::Classes => f.controlling_family(false),
        FamilyMode::SylowOnly => Ok(vec![f.lattice().whole()]),
    }
}

fn build_setup(l: &Arc<LinkingSystem>, family: &[usize], mode: FamilyMode, variant: Variant) -> Result<RobinsonSetup> {
    if mode == FamilyMode::SylowOnly {
        RobinsonSetup::new_unchecked(l.clone(), family, variant)
    } else {
        RobinsonSetup::new(l.clone(), family, variant)
    }
}

pub fn fusion_analysis(example: &Example, bounds: &Bounds) -> Result<Report> {
    let f = &example.fusion;
    let mut r = Report::new("fusion analysis");
    r.field("group order", example.group.order())
        .field("Sylow order", f.s().order())
        .field("prime", f.prime());
    let rows: Vec<_> = f.class_report(bounds)?.into_iter().map(|(_, c)| c).collect();
    let centric: Vec<&str> = rows.iter().filter(|c| c.centric).map(|c| c.representative.as_str()).collect();
    let cr: Vec<&str> = rows
        .iter()
        .filter(|c| c.centric && c.radical)
        .map(|c| c.representative.as_str())
        .collect();
    r.field("centric classes", &centric).field("centric radical classes", &cr);
    r.field("classes", &rows);
    let sat = f.check_saturation();
    r.field("saturation", &sat);
    r.check("saturated", sat.saturated);
    Ok(r)
}

pub fn linking_report(l: &LinkingSystem) -> Result<Report> {
    let a = l.validate(AXIOM_WORK)?;
    let mut r = Report::new("linking system");
    r.field("objects", a.objects).field("morphisms", a.morphisms);
    r.field("axioms", &a.axioms).field("extension checks", a.extension_checks);
    Ok(r)
}

pub fn amalgam_report(ctx: &Context) -> Report {
    let g = &ctx.amalgam;
    let lat = ctx.example.fusion.lattice();
    let mut r = Report::new("amalgam");
    r.field("variant", variant_name(ctx.setup.variant));
    r.field("family", ctx.family.iter().map(|&p| lat.describe(p)).collect::<Vec<_>>());
    r.field("controlling checked", ctx.setup.controlling_checked);
    r.field("hub order", g.hub.order());
    r.field(
        "leaves",
        g.leaves
            .iter()
            .map(|lf| format!("{} over {}", lf.group.order(), lf.edge.order()))
            .collect::<Vec<_>>(),
    );
    r.field("absorbed into", g.absorbed_into);
    r.field("finite", g.is_finite());
    r
}

/// Adds a stage report; returns whether the run continues.
fn record(top: &mut Report, stage: &str, r: Result<Report>) -> Result<bool> {
    let r = r.map_err(|e| e.in_stage(stage))?;
    let ok = r.passed();
    top.child(r);
    if !ok {
        top.field("aborted at", stage);
    }
    Ok(ok)
}

fn fusion_comparison(ctx: &Context) -> Result<Report> {
    let c = verify_fusion(&ctx.amalgam, 1, FUSION_WORDS)?;
    let mut r = Report::new("fusion of the amalgam");
    r.field("generators", c.generators).field("compared pairs", c.counts.len());
    r.field("sampled maps", c.sampled_maps).field("sampled outside", c.sampled_outside);
    if let Some(w) = &c.witness {
        r.field("witness", w);
    }
    r.check("equal to F", c.pass);
    Ok(r)
}

fn centers(ctx: &Context, bounds: &Bounds) -> Result<Report> {
    let c = compare_center(&ctx.setup, bounds.max_order)?;
    let mut r = Report::new("centers");
    r.field("Z(G)", &c.amalgam).field("Z(F)", &c.inverse_limit);
    r.check("equal", c.pass);
    Ok(r)
}

/// Runs every stage on one catalog entry. A stage that errors aborts with
/// its name; a stage whose checks fail ends the run and is reported.
pub fn run_pipeline(name: &str, variant: Variant, mode: Option<FamilyMode>, bounds: &Bounds) -> Result<Report> {
    let ctx = Context::load(name, variant, mode, bounds).map_err(|e| e.in_stage("setup"))?;
    let mut top = Report::new(format!("pipeline {name}"));
    top.field("variant", variant_name(variant));
    let done = !record(&mut top, "fusion analysis", fusion_analysis(&ctx.example, bounds))?
        || !record(&mut top, "linking system", linking_report(&ctx.linking))?
        || !record(&mut top, "amalgam", Ok(amalgam_report(&ctx)))?
        || !record(&mut top, "fusion of the amalgam", fusion_comparison(&ctx))?
        || !record(&mut top, "centers", centers(&ctx, bounds))?;
    if done {
        return Ok(top);
    }
    let o = ctx.out_typ(bounds).map_err(|e| e.in_stage("out_typ"))?;
    let mut r = Report::new("out_typ");
    r.field("equivalences", o.equivalences.len()).field("classes", o.class_count());
    top.child(r);
    let ls = ctx.with_variant(Variant::LibmanSeeliger).map_err(|e| e.in_stage("conditions"))?;
    let _ = !record(&mut top, "split", verify_split(&ctx.setup, &ctx.amalgam, &o))?
        || !record(&mut top, "exact sequences", exact_sequence_report(&ctx.setup, &ctx.amalgam, &o, bounds))?
        || !record(&mut top, "conditions", itworks_report(&ls, &Amalgam::new(ls.clone()), &o, bounds))?;
    Ok(top)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s4_passes_with_trivial_out_typ() {
        let r = run_pipeline("s4-d8", Variant::Robinson, None, &Bounds::default()).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.find("out_typ").unwrap().get("classes").unwrap(), 1);
    }

    #[test]
    fn sylow_family_stops_at_fusion() {
        let r = run_pipeline("s4-d8", Variant::Robinson, Some(FamilyMode::SylowOnly), &Bounds::default()).unwrap();
        assert!(!r.passed());
        assert_eq!(r.get("aborted at").unwrap(), "fusion of the amalgam");
        assert!(r.find("fusion of the amalgam").unwrap().get("witness").is_some());
    }

    #[test]
    fn output_is_stable() {
        let b = Bounds::default();
        let a = run_pipeline("a6-d8", Variant::LibmanSeeliger, None, &b).unwrap().to_json();
        let c = run_pipeline("a6-d8", Variant::LibmanSeeliger, None, &b).unwrap().to_json();
        assert_eq!(a, c);
    }
}
