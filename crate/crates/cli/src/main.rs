//! `p2cover`: degeneration types of cyclic p^2-covers and models of mu_p^2
//! from the command line.

mod records;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use p2cover_core::degen::{atlas, enumerate_admissible, realize, Filter};
use p2cover_core::expr::{parse_model, parse_type};
use p2cover_core::groups::{hom_group, model_map, ModelGroup};
use p2cover_core::stability::{analyze_source, analyze_zp_source};
use p2cover_core::{BaseRing, Error, ModelKind, PAdicContext};

use records::*;

#[derive(Parser)]
#[command(name = "p2cover", version, about = "Degeneration types of cyclic p^2-covers over ramified p-adic rings")]
struct Cli {
    /// Odd prime p.
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,
    /// Extra ramification: R = Z_p[zeta_{p^2}, pi] with pi^d = zeta_{p^2} - 1.
    #[arg(long, global = true, default_value_t = 1)]
    d: u32,
    /// Degree bound D of the local curve: elements are taken modulo Z^D.
    #[arg(long, global = true, default_value_t = 16)]
    zdeg: usize,
    /// Working precision N in powers of pi; 0 selects 4e.
    #[arg(long, global = true, default_value_t = 0)]
    prec: u32,
    /// Rerun with 2D and 2N and fail unless the answers agree.
    #[arg(long, global = true)]
    strict: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    /// kappa = gamma1 < v(lambda1).
    Torsor,
}

#[derive(Subcommand)]
enum Command {
    /// Degeneration type of T^(p^2) = f.
    Analyze {
        #[arg(long)]
        f: String,
    },
    /// Level and different of T^p = f.
    AnalyzeZp {
        #[arg(long)]
        f: String,
    },
    /// Admissible degeneration types.
    Enumerate {
        #[arg(long, value_enum)]
        filter: Option<FilterArg>,
    },
    /// Build a cover with the given type and check it round-trips.
    Realize {
        /// j,g1,g2,k
        #[arg(long = "type")]
        ty: String,
    },
    /// Check the Hopf axioms of a model, `G(m,n)` or `E(m,n,a,j)`.
    HopfCheck {
        #[arg(long)]
        model: String,
    },
    /// Hom(G(m,n), G(m',n)), or the model map between two extensions.
    Hom {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Every admissible type with what is known about realizing it.
    Atlas,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) => 2,
        Error::Hypothesis(_) => 3,
        Error::Precision(_) => 4,
        Error::InexactDivision(_) | Error::Invariant(_) => 5,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "invalid_input",
        Error::Hypothesis(_) => "hypothesis",
        Error::Precision(_) => "precision",
        Error::InexactDivision(_) => "inexact_division",
        Error::Invariant(_) => "invariant",
    }
}

struct Out {
    format: Format,
    lines: Vec<String>,
}

impl Out {
    fn record<T: Serialize>(&mut self, rec: &T, text: impl FnOnce() -> String) {
        match self.format {
            Format::Json => self.lines.push(serde_json::to_string(rec).expect("records serialize")),
            Format::Text => self.lines.push(text()),
        }
    }
}

fn base(cli: &Cli) -> Result<BaseRing, Error> {
    let ctx = PAdicContext::new(cli.p, cli.d, cli.prec)?;
    BaseRing::local_curve(&ctx, cli.zdeg)
}

fn model_names(g: &ModelGroup) -> Vec<&'static str> {
    match g.kind() {
        ModelKind::GLamN { .. } => vec!["T"],
        ModelKind::Ext { .. } => vec!["S1", "S2"],
    }
}

fn run(cli: &Cli, out: &mut Out) -> Result<(), Error> {
    let a = base(cli)?;
    let ctx = Context::of(&a);
    match &cli.command {
        Command::Analyze { f } => {
            let r = analyze_source(f, &a, cli.strict)?;
            let rec = Analysis::new(ctx, f, &r, cli.strict);
            out.record(&rec, || rec.summary());
        }
        Command::AnalyzeZp { f } => {
            let r = analyze_zp_source(f, &a, cli.strict)?;
            let rec = ZpAnalysis::new(ctx, f, &r, cli.strict);
            out.record(&rec, || rec.summary());
        }
        Command::Enumerate { filter } => {
            let filter = filter.map(|FilterArg::Torsor| Filter::Torsor);
            for t in enumerate_admissible(&a.ctx, filter) {
                out.record(&TypeRecord::new(ctx, &t), || t.to_string());
            }
        }
        Command::Realize { ty } => {
            let t = parse_type(ty)?;
            let r = realize(&t, &a)?;
            if cli.strict {
                // The same construction at 2D, 2N must give the same type.
                analyze_source(&r.cover.to_string(), &a, true)?;
            }
            let rec = RealizationRecord::new(ctx, &t, &r);
            out.record(&rec, || {
                let mut s = format!("{t} realized by a torsor under {}\n", rec.model);
                for eq in &rec.equations {
                    s += &format!("  {eq}\n");
                }
                s + &format!("  f = {}\n  {}", rec.cover, rec.analysis.summary())
            });
        }
        Command::HopfCheck { model } => {
            let g = parse_model(model, &a.ctx)?;
            let h = g.hopf()?;
            let rep = h.check(g.check_precision())?;
            let fiber = g.special_fiber_kind().ok().map(|k| format!("{k:?}"));
            let rec = HopfCheck::new(ctx, g.to_string(), h.rank(), fiber, &rep);
            out.record(&rec, || {
                format!(
                    "{}: rank {}, coassociative {}, counit {}, antipode {}, closure {}, to precision {}",
                    rec.model, rec.rank, rec.coassociative, rec.counit, rec.antipode, rec.closure, rec.precision
                )
            });
            if !rep.all_pass() {
                return Err(Error::Invariant(format!("Hopf axioms fail: {:?}", rep.failures)));
            }
        }
        Command::Hom { from, to } => {
            let g1 = parse_model(from, &a.ctx)?;
            let g2 = parse_model(to, &a.ctx)?;
            match (g1.kind(), g2.kind()) {
                (ModelKind::GLamN { .. }, ModelKind::GLamN { .. }) => {
                    let (order, map) = hom_group(&g1, &g2)?;
                    let h = g1.hopf()?;
                    let rec = HomRecord {
                        kind: "hom",
                        context: ctx,
                        from: g1.to_string(),
                        to: g2.to_string(),
                        order,
                        generator: format!("T -> {}", flat_to_string(&h.alg, &map.images[0], &["T"])),
                    };
                    out.record(&rec, || format!("Hom({}, {}) has order {order}, generated by {}", rec.from, rec.to, rec.generator));
                }
                (ModelKind::Ext { .. }, ModelKind::Ext { .. }) => {
                    let m = model_map(&g1, &g2)?;
                    let h = g1.hopf()?;
                    let names = model_names(&g1);
                    let rec = ModelMapRecord {
                        kind: "model_map",
                        context: ctx,
                        from: g1.to_string(),
                        to: g2.to_string(),
                        exists: m.is_some(),
                        r: m.as_ref().map(|x| x.r),
                        s: m.as_ref().map(|x| x.s),
                        isomorphism: m.as_ref().is_some_and(|x| x.is_isomorphism),
                        images: m
                            .as_ref()
                            .map(|x| {
                                model_names(&g2)
                                    .iter()
                                    .zip(&x.images)
                                    .map(|(n, img)| format!("{n} -> {}", flat_to_string(&h.alg, img, &names)))
                                    .collect()
                            })
                            .unwrap_or_default(),
                    };
                    out.record(&rec, || match &m {
                        None => format!("no model map {} -> {}", rec.from, rec.to),
                        Some(_) => format!(
                            "model map {} -> {}{}: {}",
                            rec.from,
                            rec.to,
                            if rec.isomorphism { " (isomorphism)" } else { "" },
                            rec.images.join(", ")
                        ),
                    });
                }
                _ => {
                    return Err(Error::InvalidInput(
                        "hom takes two groups G(m,n) or two extensions E(m,n,a,j)".into(),
                    ))
                }
            }
        }
        Command::Atlas => {
            for e in atlas(&a) {
                let rec = AtlasRecord::new(ctx, &e);
                out.record(&rec, || {
                    let mut s = format!("{} realizable {}", e.degen, rec.realizable);
                    if let Some(m) = &rec.model {
                        s += &format!(", model {m}");
                    }
                    s
                });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out { format: cli.format, lines: vec![] };
    let result = run(&cli, &mut out);
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    for line in &out.lines {
        let _ = writeln!(w, "{line}");
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = exit_code(&e);
            if cli.format == Format::Json {
                let rec = ErrorRecord {
                    kind: "error",
                    error: error_kind(&e).into(),
                    message: e.to_string(),
                    exit_code: code as i32,
                };
                let _ = writeln!(w, "{}", serde_json::to_string(&rec).expect("records serialize"));
            }
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}
