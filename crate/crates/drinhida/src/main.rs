use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use drinhida::arith::apoly::APoly;
use drinhida::arith::artin::ArtinRing;
use drinhida::arith::ext::ext_field;
use drinhida::arith::matrix::Matrix;
use drinhida::arith::place::{parse_place, PrimePlace};
use drinhida::cache::{self, CacheRecord};
use drinhida::carlitz::{carlitz_coefficient_profile, trace_of_carlitz_pullback, TruncSeriesRing};
use drinhida::drinfeld::DrinfeldModule;
use drinhida::hecke::{build_correspondence, enumerate_moduli, operator_matrix, GraphRecord, HeckeOp, Locus};
use drinhida::iwasawa::{filtration_step, specialize, IwasawaJson, IwasawaRing, WeightChar, MAX_LEVEL};
use drinhida::projector::{local_finiteness_check, tower_projector, TowerFile, TOWER_LABEL};
use drinhida::serre_tate::{lift_independence_check, DeformationDatum};
use drinhida::suite::{format_table, run_suite, Scope};
use drinhida::{Error, Result};

#[derive(Parser)]
#[command(name = "drinhida", version, about = "Drinfeld modules, p-Hecke correspondences and ordinary projectors over F_q[T]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct PlaceArgs {
    /// Size of the constant field.
    #[arg(long)]
    q: u64,
    /// Monic irreducible generator of the prime, e.g. "T^2+T+1".
    #[arg(long)]
    varpi: String,
}

impl PlaceArgs {
    fn place(&self) -> Result<PrimePlace> {
        parse_place(self.q, &self.varpi)
    }
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Carlitz(CarlitzCmd),
    #[command(subcommand, name = "serre-tate")]
    SerreTate(SerreTateCmd),
    #[command(subcommand)]
    Hecke(HeckeCmd),
    #[command(subcommand)]
    Iwasawa(IwasawaCmd),
    #[command(subcommand)]
    Projector(ProjectorCmd),
    /// Run the acceptance battery and print a pass/fail table.
    Suite(SuiteArgs),
}

#[derive(Subcommand)]
enum CarlitzCmd {
    /// Coefficients of [varpi](X).
    Profile(PlaceArgs),
    /// Traces of the basis of the ring over its image under [varpi].
    Trace {
        #[command(flatten)]
        place: PlaceArgs,
        /// Power series truncation; defaults to q^{2d} + 1.
        #[arg(long)]
        truncation: Option<usize>,
        #[arg(long, default_value_t = 2)]
        nilpotency: usize,
    },
}

#[derive(Subcommand)]
enum SerreTateCmd {
    /// Lift-independence of [varpi^n] on torsion of a constant deformation.
    Check {
        #[command(flatten)]
        place: PlaceArgs,
        /// Degree of the residue field over F_{q^d}.
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        nilpotency: usize,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value = "1")]
        g: String,
        #[arg(long, default_value = "1")]
        delta: String,
    },
}

#[derive(Args)]
struct HeckeArgs {
    #[command(flatten)]
    place: PlaceArgs,
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Cache directory; also read from DRINHIDA_CACHE_DIR. No caching when neither is set.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LocusArg {
    Ordinary,
    All,
}

#[derive(Subcommand)]
enum HeckeCmd {
    /// Coarse points and the F / V edges between them.
    Graph {
        #[command(flatten)]
        args: HeckeArgs,
        #[arg(long, conflicts_with = "dot")]
        json: bool,
        #[arg(long)]
        dot: bool,
    },
    /// Matrix of F, U or T on weight-k functions.
    Matrix {
        #[command(flatten)]
        args: HeckeArgs,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        op: HeckeOp,
        #[arg(long, value_enum, default_value = "ordinary")]
        locus: LocusArg,
    },
}

#[derive(Subcommand)]
enum IwasawaCmd {
    /// The weight-k specialisation of an element of the level-m truncation.
    Specialize {
        #[command(flatten)]
        place: PlaceArgs,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// The group-like element of a unit of A, e.g. "1+T".
        #[arg(long, required_unless_present = "element", conflicts_with = "element")]
        dirac: Option<String>,
        /// A JSON element file.
        #[arg(long)]
        element: Option<PathBuf>,
    },
    /// I_r / I_{r+1} in the monomial filtration.
    Filtration {
        #[arg(long)]
        r: usize,
        /// Number of wild generators.
        #[arg(long)]
        gens: usize,
    },
}

#[derive(Subcommand)]
enum ProjectorCmd {
    /// Ordinary projectors on every level of a tower read from JSON.
    Run {
        #[arg(long)]
        tower: PathBuf,
    },
}

#[derive(Args)]
struct SuiteArgs {
    /// Restrict place-dependent checks to one place; all three of q, varpi, m are needed.
    #[arg(long, requires_all = ["varpi", "m"])]
    q: Option<u64>,
    #[arg(long, requires_all = ["q", "m"])]
    varpi: Option<String>,
    #[arg(long, requires_all = ["q", "varpi"])]
    m: Option<usize>,
    /// Append wall-clock times (makes the output vary between runs).
    #[arg(long)]
    timings: bool,
}

/// What a command produced: text for stdout, and the label of a failed check if any.
struct Output {
    text: String,
    failed: Option<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, failed: None }
    }

    fn json<T: Serialize>(value: &T, failed: Option<&str>) -> Result<Self> {
        Ok(Output { text: serde_json::to_string_pretty(value)? + "\n", failed: failed.map(str::to_string) })
    }
}

fn positive(name: &str, v: usize) -> Result<usize> {
    if v == 0 {
        return Err(Error::InvalidParameter(format!("--{name} must be positive")));
    }
    Ok(v)
}

fn run(cmd: Command) -> Result<Output> {
    match cmd {
        Command::Carlitz(CarlitzCmd::Profile(p)) => Output::json(&carlitz_coefficient_profile(&p.place()?)?, None),
        Command::Carlitz(CarlitzCmd::Trace { place, truncation, nilpotency }) => {
            let place = place.place()?;
            let k = ext_field(&place, 1, true)?;
            let r = ArtinRing::new(&k, positive("nilpotency", nilpotency)?)?;
            let qd = place.residue_size() as usize;
            let ring = TruncSeriesRing::new(&r, truncation.unwrap_or(qd * qd + 1));
            Output::json(&trace_of_carlitz_pullback(&place, &ring)?, None)
        }
        Command::SerreTate(SerreTateCmd::Check { place, m, nilpotency, depth, g, delta }) => {
            let k = ext_field(&place.place()?, positive("m", m)?, true)?;
            let r = ArtinRing::new(&k, positive("nilpotency", nilpotency)?)?;
            let e0 = DrinfeldModule::new(&k, k.parse(&g)?, k.parse(&delta)?)?;
            let datum = DeformationDatum::constant_lift(e0, &r, depth)?;
            let rep = lift_independence_check(&datum)?;
            let failed = (!rep.passed).then_some("serre-tate-lift-independence");
            Output::json(&rep, failed)
        }
        Command::Hecke(HeckeCmd::Graph { args, json, dot }) => {
            let g = graph(&args)?;
            if json {
                Output::json(&g, None)
            } else if dot {
                Ok(Output::ok(g.to_dot()))
            } else {
                let mut text = format!("nodes {}\n", g.nodes.len());
                for n in &g.nodes {
                    let kind = if n.ordinary { "ordinary" } else { "supersingular" };
                    text.push_str(&format!("  j = {} {kind} hasse {}\n", n.j, n.hasse));
                }
                text.push_str(&format!("edges {}\n", g.edges.len()));
                for e in &g.edges {
                    text.push_str(&format!("  {} -> {} {:?} u = {}\n", e.src, e.dst, e.kind, e.u));
                }
                Ok(Output::ok(text))
            }
        }
        Command::Hecke(HeckeCmd::Matrix { args, k, op, locus }) => {
            let space = enumerate_moduli(&args.place.place()?, positive("m", args.m)?)?;
            let corr = build_correspondence(&space)?;
            let locus = match locus {
                LocusArg::Ordinary => Locus::Ordinary,
                LocusArg::All => Locus::All,
            };
            Output::json(&operator_matrix(&corr, k, op, locus)?.to_json(), None)
        }
        Command::Iwasawa(IwasawaCmd::Specialize { place, m, k, dirac, element }) => {
            let place = place.place()?;
            if m == 0 || m > MAX_LEVEL {
                return Err(Error::InvalidParameter(format!("--m must lie in 1..={MAX_LEVEL}")));
            }
            let ring = IwasawaRing::new(&place, m)?;
            let x = match (dirac, element) {
                (Some(t), _) => ring.dirac(&place.a().parse(&t)?)?,
                (None, Some(path)) => {
                    let j: IwasawaJson = serde_json::from_slice(&std::fs::read(path)?)?;
                    ring.from_json(&j)?
                }
                (None, None) => return Err(Error::InvalidParameter("one of --dirac or --element is needed".into())),
            };
            let value = specialize(&ring, &x, WeightChar::Algebraic(k));
            #[derive(Serialize)]
            struct Spec {
                k: i64,
                level: usize,
                value: String,
            }
            Output::json(&Spec { k, level: m, value: place.a().format(&value) }, None)
        }
        Command::Iwasawa(IwasawaCmd::Filtration { r, gens }) => Output::json(&filtration_step(gens, r)?, None),
        Command::Projector(ProjectorCmd::Run { tower }) => {
            let file: TowerFile = serde_json::from_slice(&std::fs::read(tower)?)?;
            let place = parse_place(file.q, &file.varpi)?;
            let t = file.build()?;
            let (es, report) = tower_projector(&t)?;
            let finiteness = local_finiteness_check(&t)?;
            let a = place.a();
            let fmt = |m: &Matrix<APoly>| -> Vec<Vec<String>> {
                m.to_rows().iter().map(|r| r.iter().map(|x| a.format(x)).collect()).collect()
            };
            #[derive(Serialize)]
            struct Run<'a> {
                projectors: Vec<Vec<Vec<String>>>,
                report: &'a drinhida::projector::TowerReport,
                finiteness: &'a [drinhida::projector::FinitenessLevel],
            }
            let stable = finiteness.iter().all(|l| l.stable);
            let failed = (!report.passed || !stable).then_some(TOWER_LABEL);
            Output::json(&Run { projectors: es.iter().map(fmt).collect(), report: &report, finiteness: &finiteness }, failed)
        }
        Command::Suite(s) => {
            let scope = match (s.q, s.varpi, s.m) {
                (Some(q), Some(v), Some(m)) => {
                    parse_place(q, &v)?;
                    Scope::single(q, &v, positive("m", m)?)
                }
                _ => Scope::default(),
            };
            let reports = run_suite(&scope);
            let failed = reports.iter().find(|r| !r.passed).map(|r| r.label.to_string());
            Ok(Output { text: format_table(&reports, s.timings), failed })
        }
    }
}

fn cache_dir(flag: &Option<PathBuf>) -> Option<PathBuf> {
    flag.clone().or_else(|| std::env::var_os(cache::CACHE_DIR_ENV).map(PathBuf::from))
}

fn graph(args: &HeckeArgs) -> Result<GraphRecord> {
    let place = args.place.place()?;
    let m = positive("m", args.m)?;
    let varpi = place.varpi_text();
    let dir = cache_dir(&args.cache_dir);
    if let Some(dir) = &dir {
        if let Some(rec) = cache::load(dir, place.q(), &varpi, m)? {
            return Ok(rec.body);
        }
    }
    let record = build_correspondence(&enumerate_moduli(&place, m)?)?.record();
    if let Some(dir) = &dir {
        cache::save(dir, &CacheRecord::new(place.q(), &varpi, m, record.clone())?)?;
    }
    Ok(record)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            match out.failed {
                Some(label) => {
                    eprintln!("assertion failed: {label}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(Error::CheckFailed { label, detail }) => {
            eprintln!("assertion failed: {label}: {detail}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
