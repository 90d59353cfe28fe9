use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use flab::amalgam::{compare_center, verify_fusion, Amalgam, Variant};
use flab::autos::{
    exact_sequence_report, gamma, itworks_report, omega, upsilon, verify_split, AmalgamAutomorphism, OutTyp,
};
use flab::catalog;
use flab::config::Bounds;
use flab::error::{FlabError, Result};
use flab::fusion::SubgroupLattice;
use flab::groups::{Group, Subgroup};
use flab::linking::{AbFunctor, FusionCenter, LinkingFile};
use flab::pipeline::{self, Context, FamilyMode};
use flab::report::Report;

#[derive(Parser)]
#[command(name = "flab", version, about = "Fusion systems, linking systems and Robinson amalgams")]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// The example catalog.
    Examples {
        #[command(subcommand)]
        command: ExamplesCmd,
    },
    Fusion {
        #[command(subcommand)]
        command: FusionCmd,
    },
    Linking {
        #[command(subcommand)]
        command: LinkingCmd,
    },
    /// Inverse limits and higher limits over the centric orbit category.
    Limits {
        entry: String,
        /// `center` or `constant` (constant Z/p).
        #[arg(long, default_value = "center")]
        functor: String,
        #[arg(long, default_value_t = 0)]
        degree: usize,
    },
    Amalgam {
        #[command(subcommand)]
        command: AmalgamCmd,
    },
    Aut {
        #[command(subcommand)]
        command: AutCmd,
    },
    /// Every check on one catalog entry.
    Pipeline(Target),
}

#[derive(Subcommand)]
enum ExamplesCmd {
    List,
}

#[derive(Subcommand)]
enum FusionCmd {
    /// Classes of subgroups with their fusion data.
    Analyze { entry: String },
    Saturation { entry: String },
}

#[derive(Subcommand)]
enum LinkingCmd {
    /// Builds the centric linking system and writes it as JSON.
    Build {
        entry: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Loads a linking-system file and checks the axioms.
    Validate { file: PathBuf },
}

#[derive(Args, Clone)]
struct Target {
    entry: String,
    #[arg(long, default_value = "robinson")]
    variant: String,
    /// `complete`, `classes` or `{S}`; defaults to the catalog choice.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Subcommand)]
enum AmalgamCmd {
    Build(Target),
    /// Normal form of a word such as `hub:a*leaf1:b`.
    Reduce {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        word: String,
    },
    VerifyFusion {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1)]
        radius: usize,
    },
    Center(Target),
    /// Words up to a length conjugating one subgroup of S onto another.
    Transporter {
        #[command(flatten)]
        target: Target,
        /// Lattice index or generator description of P.
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 1)]
        radius: usize,
    },
}

#[derive(Subcommand)]
enum AutCmd {
    OutTyp(Target),
    Upsilon {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        class: usize,
    },
    Gamma {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        class: usize,
        /// Leaf processing order, e.g. `2,1`.
        #[arg(long)]
        order: Option<String>,
    },
    /// Applies omega to an amalgam automorphism read from JSON.
    Omega {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        file: PathBuf,
    },
    VerifySplit(Target),
    ExactSequences(Target),
    Itworks(Target),
}

const MAX_WORDS: usize = 100_000;

fn context(t: &Target, bounds: &Bounds) -> Result<Context> {
    let variant = pipeline::parse_variant(&t.variant)?;
    let mode = t.family.as_deref().map(FamilyMode::parse).transpose()?;
    Context::load(&t.entry, variant, mode, bounds)
}

fn find_subgroup(lat: &SubgroupLattice, text: &str) -> Result<Subgroup> {
    let text = text.trim();
    let idx = match text.parse::<usize>() {
        Ok(i) if i < lat.len() => Some(i),
        _ => (0..lat.len()).find(|&i| lat.describe(i) == text),
    };
    idx.map(|i| lat.sub(i).clone())
        .ok_or_else(|| FlabError::input(format!("no subgroup {text:?}")))
}

fn class_rep(o: &OutTyp, class: usize) -> Result<&flab::autos::Equivalence> {
    if class >= o.class_count() {
        return Err(FlabError::input(format!("class {class} out of range; there are {}", o.class_count())));
    }
    Ok(o.representative(class))
}

fn run(cli: &Cli, bounds: &Bounds) -> Result<Report> {
    match &cli.command {
        Command::Examples { command: ExamplesCmd::List } => {
            let mut r = Report::new("examples");
            for e in catalog::entries() {
                r.child(
                    Report::new(e.name)
                        .with("description", e.description)
                        .with("prime", e.prime)
                        .with("expected to pass", e.expect_pass),
                );
            }
            Ok(r)
        }
        Command::Fusion { command } => match command {
            FusionCmd::Analyze { entry } => pipeline::fusion_analysis(&catalog::load(entry, bounds)?, bounds),
            FusionCmd::Saturation { entry } => {
                let sat = catalog::load(entry, bounds)?.fusion.check_saturation();
                let mut r = Report::new("saturation");
                r.field("axiom I", sat.axiom_i).field("axiom II", sat.axiom_ii);
                r.field("axiom III vacuous", sat.axiom_iii_vacuous);
                r.field("subgroups checked", sat.subgroups_checked);
                r.field("morphisms checked", sat.morphisms_checked);
                if let Some(c) = &sat.counterexample {
                    r.field("counterexample", c);
                }
                r.check("saturated", sat.saturated);
                Ok(r)
            }
        },
        Command::Linking { command } => match command {
            LinkingCmd::Build { entry, out } => {
                let ctx = context(&Target { entry: entry.clone(), variant: "robinson".into(), family: None }, bounds)?;
                let file = LinkingFile::export(&ctx.linking, entry);
                let text = serde_json::to_string_pretty(&file)?;
                let mut r = pipeline::linking_report(&ctx.linking)?;
                match out {
                    Some(path) => {
                        std::fs::write(path, text)?;
                        r.field("written", path.display().to_string());
                    }
                    None => {
                        println!("{text}");
                    }
                }
                Ok(r)
            }
            LinkingCmd::Validate { file } => {
                let l = LinkingFile::load(file)?.build(bounds, pipeline::AXIOM_WORK)?;
                pipeline::linking_report(&l)
            }
        },
        Command::Limits { entry, functor, degree } => {
            let ex = catalog::load(entry, bounds)?;
            let fc = FusionCenter::new(&ex.fusion, bounds.max_order)?;
            let mut r = Report::new(format!("lim^{degree}"));
            r.field("functor", functor);
            let value = match functor.as_str() {
                "center" if *degree == 0 => {
                    let s = ex.fusion.s();
                    r.field("elements", fc.elements.iter().map(|&z| s.label(z)).collect::<Vec<_>>());
                    fc.limit.invariants.clone()
                }
                "center" => fc.higher(*degree)?,
                "constant" => {
                    let a = AbFunctor::constant(&fc.orbit.cat, ex.fusion.prime() as u64, vec![1]);
                    flab::linking::higher_limits(&fc.orbit.cat, &a, *degree)?
                }
                other => return Err(FlabError::input(format!("unknown functor {other:?}"))),
            };
            r.field("value", value.to_string()).field("order", value.order());
            Ok(r)
        }
        Command::Amalgam { command } => amalgam(command, bounds),
        Command::Aut { command } => aut(command, bounds),
        Command::Pipeline(t) => {
            let variant = pipeline::parse_variant(&t.variant)?;
            let mode = t.family.as_deref().map(FamilyMode::parse).transpose()?;
            pipeline::run_pipeline(&t.entry, variant, mode, bounds)
        }
    }
}

fn amalgam(command: &AmalgamCmd, bounds: &Bounds) -> Result<Report> {
    match command {
        AmalgamCmd::Build(t) => Ok(pipeline::amalgam_report(&context(t, bounds)?)),
        AmalgamCmd::Reduce { target, word } => {
            let ctx = context(target, bounds)?;
            let g = &ctx.amalgam;
            let w = g.reduce(&g.parse(word)?)?;
            let mut r = Report::new("reduce");
            r.field("input", word).field("normal form", g.format(&w)).field("length", w.len());
            r.field("in S", g.element_of_s(&w).map(|x| ctx.example.fusion.s().label(x)));
            Ok(r)
        }
        AmalgamCmd::VerifyFusion { target, radius } => {
            let ctx = context(target, bounds)?;
            let c = verify_fusion(&ctx.amalgam, *radius, MAX_WORDS)?;
            let mut r = Report::new("fusion of the amalgam");
            r.field("generators", c.generators).field("counts", &c.counts);
            r.field("sampled maps", c.sampled_maps).field("sampled outside", c.sampled_outside);
            if let Some(w) = &c.witness {
                r.field("witness", w);
            }
            r.check("equal to F", c.pass);
            Ok(r)
        }
        AmalgamCmd::Center(t) => {
            let ctx = context(t, bounds)?;
            let c = compare_center(&ctx.setup, bounds.max_order)?;
            let mut r = Report::new("centers");
            r.field("Z(G)", &c.amalgam).field("Z(F)", &c.inverse_limit);
            r.check("equal", c.pass);
            Ok(r)
        }
        AmalgamCmd::Transporter { target, from, to, radius } => {
            let ctx = context(target, bounds)?;
            let lat = ctx.example.fusion.lattice();
            let p = find_subgroup(lat, from)?;
            let q = find_subgroup(lat, to)?;
            let g = &ctx.amalgam;
            let words = g.transporter(&p, &q, *radius, MAX_WORDS)?;
            let mut r = Report::new("transporter");
            r.field("radius", radius).field("count", words.len());
            r.field("words", words.iter().map(|w| g.format(w)).collect::<Vec<_>>());
            Ok(r)
        }
    }
}

fn aut(command: &AutCmd, bounds: &Bounds) -> Result<Report> {
    match command {
        AutCmd::OutTyp(t) => {
            let ctx = context(t, bounds)?;
            let o = ctx.out_typ(bounds)?;
            let mut r = Report::new("out_typ");
            r.field("equivalences", o.equivalences.len()).field("classes", o.class_count());
            for c in 0..o.class_count() {
                let rep = o.representative(c);
                r.child(Report::new(format!("class {c}")).with("size", o.classes[c].len()).with("psi", &rep.psi));
            }
            Ok(r)
        }
        AutCmd::Upsilon { target, class } => {
            let ctx = context(target, bounds)?;
            let o = ctx.out_typ(bounds)?;
            let alpha = upsilon(&ctx.linking, &ctx.family, class_rep(&o, *class)?)?;
            Ok(Report::new("upsilon").with("class", class).with("permutation", alpha))
        }
        AutCmd::Gamma { target, class, order } => {
            let ctx = context(target, bounds)?;
            let o = ctx.out_typ(bounds)?;
            let order: Vec<usize> = match order {
                Some(s) => s
                    .split(',')
                    .map(|x| x.trim().parse().map_err(|_| FlabError::input(format!("bad leaf index {x:?}"))))
                    .collect::<Result<_>>()?,
                None => (1..=ctx.setup.leaves.len()).collect(),
            };
            let g = gamma(&ctx.setup, class_rep(&o, *class)?, &order)?;
            let mut r = Report::new("gamma");
            r.field("automorphism", &g.automorphism).field("twisted leaves", &g.twisted_leaves);
            r.field("hub steps", g.steps.iter().map(|&x| ctx.setup.hub.label(x)).collect::<Vec<_>>());
            r.check("certificate", g.automorphism.certificate(&ctx.setup).is_ok());
            Ok(r)
        }
        AutCmd::Omega { target, file } => {
            let ctx = context(target, bounds)?;
            let a: AmalgamAutomorphism = serde_json::from_str(&std::fs::read_to_string(file)?)?;
            a.certificate(&ctx.setup).map_err(|w| FlabError::axiom("vertex compatibility", w))?;
            let e = omega(&ctx.setup, &a)?;
            let o = ctx.out_typ(bounds)?;
            let mut r = Report::new("omega");
            r.field("psi", &e.psi).field("class", o.find(&e).map(|i| o.class_of[i]));
            Ok(r)
        }
        AutCmd::VerifySplit(t) => {
            let ctx = context(t, bounds)?;
            verify_split(&ctx.setup, &ctx.amalgam, &ctx.out_typ(bounds)?)
        }
        AutCmd::ExactSequences(t) => {
            let ctx = context(t, bounds)?;
            exact_sequence_report(&ctx.setup, &ctx.amalgam, &ctx.out_typ(bounds)?, bounds)
        }
        AutCmd::Itworks(t) => {
            let ctx = context(t, bounds)?;
            let ls = ctx.with_variant(Variant::LibmanSeeliger)?;
            itworks_report(&ls, &Amalgam::new(ls.clone()), &ctx.out_typ(bounds)?, bounds)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let bounds = Bounds::from_env();
    match run(&cli, &bounds) {
        Ok(r) => {
            if cli.json {
                println!("{}", r.to_json());
            } else {
                print!("{}", r.to_text());
            }
            if r.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
