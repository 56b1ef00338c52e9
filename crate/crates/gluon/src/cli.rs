//! Command-line front end: argument definitions and one handler per command.

use crate::certfile::{parse_certificate, write_certificate};
use crate::report::{InputEcho, Outcome, RunReport};
use crate::sdpa::{SdpaFile, SdpaSolution};
use crate::text::{parse_combination, parse_graph, write_combination, write_graph, ParseError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gluon_core::algebra::AlgebraError;
use gluon_core::certify::{check_multiplier_obstruction, check_not_sos, Criterion, InconclusiveReason, Verdict};
use gluon_core::density::{combination_density, hom_count, LabelAssignment};
use gluon_core::graph::{Graph, Label, PartiallyLabeledGraph, DEFAULT_SEARCH_CAP};
use gluon_core::soscert::{
    binomial_cone_membership, build_sdp, enumerate_basis, round_and_verify, round_dual, sos_search, BasisCaps,
    ConeOutcome, InfeasibilityCertificate, RoundingOptions, SdpProblem, SearchOptions, SearchOutcome,
    SosCertificate,
};
use gluon_core::squares::{involution_census, square_roots, InvolutionCensus, SquareWitness};
use gluon_core::{GraphCombination, Rational};
use num_traits::ToPrimitive;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Environment variable overriding the default search cap.
pub const MAX_VERTICES_ENV: &str = "GLUON_MAX_VERTICES";

#[derive(Debug, Parser)]
#[command(name = "gluon", version, about = "Exact computations in the gluing algebra of partially labeled graphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Solve with the built-in interior-point routine.
    Embedded,
    /// Write the problem in SDPA sparse format; read a solution back with `--solution`.
    Export,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Largest graph handed to automorphism search; also caps basis vertices.
    #[arg(long, global = true)]
    pub max_vertices: Option<usize>,
    /// Caps the number of labels in basis graphs.
    #[arg(long, global = true)]
    pub max_labels: Option<usize>,
    /// Largest denominator tried when rounding.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub denominator_bound: u64,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Embedded)]
    pub mode: Mode,
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact density of a combination in a target graph.
    Density {
        input: PathBuf,
        /// Unlabeled target graph.
        #[arg(long)]
        target: PathBuf,
        /// Images of labels, e.g. `1:0,2:3`.
        #[arg(long, default_value = "")]
        assign: String,
    },
    /// Gluing product of two combinations.
    Glue { left: PathBuf, right: PathBuf },
    /// Forgets all labels.
    Unlabel { input: PathBuf },
    /// Whether an unlabeled graph has only fully labeled square roots.
    TrivialSquare { input: PathBuf },
    /// Involutive automorphisms and the conditions each one meets.
    Census { input: PathBuf },
    /// Tries to prove that an unlabeled combination is not a sum of squares.
    NotSos { input: PathBuf },
    /// Same test, claimed for every multiplier `1 + g` with `g` a sum of squares.
    MultiplierObstruction { input: PathBuf },
    /// Searches for a sum-of-squares certificate of the lowest-degree part.
    SosSearch {
        input: PathBuf,
        /// Write a verified certificate here.
        #[arg(long)]
        certificate_out: Option<PathBuf>,
        /// Export mode: where to write the SDPA problem (defaults to the report).
        #[arg(long)]
        sdpa_out: Option<PathBuf>,
        /// Export mode: a CSDP-style solution file to round and verify.
        #[arg(long)]
        solution: Option<PathBuf>,
    },
    /// Membership of `c (F1 - F2)` in the cone of binomial squares.
    ConeMembership { input: PathBuf },
    /// Pads every constituent to carry labels `1..=k`, or strips isolated labeled vertices.
    TranslatePad {
        input: PathBuf,
        #[arg(long, required_unless_present = "strip")]
        labels: Option<Label>,
        #[arg(long)]
        strip: bool,
    },
    /// Checks a certificate file against a combination.
    Verify { certificate: PathBuf, input: PathBuf },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{}:{}: {}", .error.line, .error.column, .error.message)]
    Parse { path: String, error: ParseError },
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    fn invalid(e: impl ToString) -> Self {
        Self::Invalid(e.to_string())
    }
}

/// Effective limits after flags and environment are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub search_cap: usize,
    pub max_vertices: Option<usize>,
    pub max_labels: Option<usize>,
    pub denominator_bound: u64,
}

impl Limits {
    /// `--max-vertices` wins over the environment, which wins over the default.
    pub fn resolve(global: &GlobalArgs, env: Option<&str>) -> Result<Self, CliError> {
        let from_env = match env {
            Some(v) => Some(
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::Invalid(format!("{MAX_VERTICES_ENV}={v} is not a vertex count")))?,
            ),
            None => None,
        };
        let cap = global.max_vertices.or(from_env);
        if global.denominator_bound == 0 {
            return Err(CliError::invalid("--denominator-bound must be positive"));
        }
        Ok(Self {
            search_cap: cap.unwrap_or(DEFAULT_SEARCH_CAP),
            max_vertices: cap,
            max_labels: global.max_labels,
            denominator_bound: global.denominator_bound,
        })
    }

    /// Basis caps at degree `d`; `2d` is never exceeded since it loses nothing.
    pub fn basis_caps(&self, d: usize) -> BasisCaps {
        let full = BasisCaps::for_degree(d);
        BasisCaps {
            max_vertices: self.max_vertices.map_or(full.max_vertices, |v| v.min(full.max_vertices)),
            max_labels: self.max_labels.map_or(full.max_labels, |l| l.min(full.max_labels)),
        }
    }
}

struct Context<'a> {
    global: &'a GlobalArgs,
    limits: Limits,
    inputs: Vec<InputEcho>,
}

impl Context<'_> {
    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let content = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        self.inputs.push(InputEcho { path: path.display().to_string(), content: content.clone() });
        Ok(content)
    }

    fn combination(&mut self, path: &Path) -> Result<GraphCombination, CliError> {
        let text = self.read(path)?;
        parse_combination(&text).map_err(|error| CliError::Parse { path: path.display().to_string(), error })
    }

    fn graph(&mut self, path: &Path) -> Result<PartiallyLabeledGraph, CliError> {
        let text = self.read(path)?;
        parse_graph(&text).map_err(|error| CliError::Parse { path: path.display().to_string(), error })
    }

    fn settings(&self) -> Vec<(String, String)> {
        let l = &self.limits;
        let opt = |v: Option<usize>| v.map_or_else(|| "default".to_string(), |v| v.to_string());
        vec![
            ("search-cap".into(), l.search_cap.to_string()),
            ("max-vertices".into(), opt(l.max_vertices)),
            ("max-labels".into(), opt(l.max_labels)),
            ("denominator-bound".into(), l.denominator_bound.to_string()),
            ("mode".into(), format!("{:?}", self.global.mode).to_lowercase()),
        ]
    }
}

/// Runs one parsed command line. `env_max_vertices` is the value of
/// [`MAX_VERTICES_ENV`], if set.
pub fn run(cli: &Cli, env_max_vertices: Option<&str>) -> Result<RunReport, CliError> {
    let limits = Limits::resolve(&cli.global, env_max_vertices)?;
    let mut ctx = Context { global: &cli.global, limits, inputs: Vec::new() };
    let mut report = match &cli.command {
        Command::Density { input, target, assign } => density(&mut ctx, input, target, assign)?,
        Command::Glue { left, right } => {
            let a = ctx.combination(left)?;
            let b = ctx.combination(right)?;
            combination_report("glue", "gluing product", &a.product(&b))
        }
        Command::Unlabel { input } => {
            let a = ctx.combination(input)?;
            combination_report("unlabel", "unlabeled combination", &a.unlabel())
        }
        Command::TrivialSquare { input } => trivial_square(&mut ctx, input)?,
        Command::Census { input } => census(&mut ctx, input)?,
        Command::NotSos { input } => not_sos(&mut ctx, input, false)?,
        Command::MultiplierObstruction { input } => not_sos(&mut ctx, input, true)?,
        Command::SosSearch { input, certificate_out, sdpa_out, solution } => {
            sos(&mut ctx, input, certificate_out.as_deref(), sdpa_out.as_deref(), solution.as_deref())?
        }
        Command::ConeMembership { input } => cone(&mut ctx, input)?,
        Command::TranslatePad { input, labels, strip } => {
            let a = ctx.combination(input)?;
            if *strip {
                combination_report("translate-pad", "isolated labeled vertices stripped", &a.strip_isolated())
            } else {
                let k = labels.expect("clap requires --labels without --strip");
                let padded = a.pad_labels(k).map_err(|e: AlgebraError| CliError::invalid(e))?;
                combination_report("translate-pad", format!("padded to labels 1..={k}"), &padded)
            }
        }
        Command::Verify { certificate, input } => verify(&mut ctx, certificate, input)?,
    };
    report.settings = ctx.settings();
    report.inputs = ctx.inputs;
    Ok(report)
}

fn combination_report(command: &str, summary: impl Into<String>, a: &GraphCombination) -> RunReport {
    let mut r = RunReport::new(command, Outcome::Definitive, summary);
    r.fact("terms", a.len());
    r.witness("result", write_combination(a));
    r
}

fn parse_assignment(text: &str) -> Result<LabelAssignment, CliError> {
    let mut phi = LabelAssignment::new();
    for field in text.split(',').map(str::trim).filter(|f| !f.is_empty()) {
        let parsed = field
            .split_once(':')
            .and_then(|(l, v)| Some((l.trim().parse::<Label>().ok()?, v.trim().parse::<usize>().ok()?)));
        let Some((l, v)) = parsed else {
            return Err(CliError::Invalid(format!("--assign: expected `<label>:<vertex>`, found `{field}`")));
        };
        if phi.insert(l, v).is_some() {
            return Err(CliError::Invalid(format!("--assign: label {l} assigned twice")));
        }
    }
    Ok(phi)
}

fn density(ctx: &mut Context<'_>, input: &Path, target: &Path, assign: &str) -> Result<RunReport, CliError> {
    let a = ctx.combination(input)?;
    let t = ctx.graph(target)?;
    if !t.is_unlabeled() {
        return Err(CliError::invalid("the target graph must be unlabeled"));
    }
    let g: Graph = t.graph().clone();
    let phi = parse_assignment(assign)?;
    let value = combination_density(&a, &g, &phi).map_err(CliError::invalid)?;
    let mut r = RunReport::new("density", Outcome::Definitive, format!("t = {value}"));
    r.fact("value", &value);
    r.fact("approximately", value.to_f64().map_or_else(|| "n/a".into(), |x| format!("{x:.12}")));
    if let [(h, _)] = a.terms().collect::<Vec<_>>().as_slice() {
        r.fact("homomorphisms", hom_count(h, &g, &phi).map_err(CliError::invalid)?);
    }
    Ok(r)
}

fn census_text(c: &InvolutionCensus) -> String {
    let mut out = String::new();
    for (i, rec) in c.involutions.iter().enumerate() {
        let yes = |b: bool| if b { "yes" } else { "no" };
        let _ = writeln!(
            out,
            "{}: images={:?} fixed={} proper-fixed-set={} cross-edge-free-split={}",
            i + 1,
            rec.involution.images(),
            rec.fixed_count,
            yes(rec.fixes_proper_subset),
            yes(rec.splits_without_cross_edges),
        );
    }
    if out.is_empty() {
        out.push_str("no involutions\n");
    }
    out
}

fn census_facts(r: &mut RunReport, c: &InvolutionCensus) {
    r.fact("automorphisms", c.automorphism_count);
    r.fact("involutions", c.total());
    let profile: Vec<String> = c.by_fixed_count().iter().map(|(k, n)| format!("{n} fixing {k}")).collect();
    r.fact("fixed-point profile", if profile.is_empty() { "none".into() } else { profile.join(", ") });
    r.fact("splittable", c.splittable());
    r.fact("meeting all conditions", c.satisfying_all());
}

fn witness_text(w: &SquareWitness) -> String {
    format!(
        "involution={:?} fixed={:?} side-a={:?} side-b={:?}\nroot:\n{}",
        w.involution.images(),
        w.fixed_set,
        w.side_a,
        w.side_b,
        write_graph(&w.root)
    )
}

fn trivial_square(ctx: &mut Context<'_>, input: &Path) -> Result<RunReport, CliError> {
    let g = ctx.graph(input)?;
    let cap = ctx.limits.search_cap;
    let roots = square_roots(&g, cap).map_err(CliError::invalid)?;
    let census = involution_census(&g, cap).map_err(CliError::invalid)?;
    let trivial = roots.witnesses.is_empty();
    let summary = if trivial { "trivial square: true" } else { "trivial square: false" };
    let mut r = RunReport::new("trivial-square", Outcome::Definitive, summary);
    r.fact("trivial", trivial);
    census_facts(&mut r, &census);
    r.fact("non-trivial roots", roots.witnesses.len());
    r.witness("canonical graph", write_graph(&roots.graph));
    r.witness("census", census_text(&census));
    for (i, w) in roots.witnesses.iter().enumerate() {
        r.witness(format!("root {}", i + 1), witness_text(w));
    }
    Ok(r)
}

fn census(ctx: &mut Context<'_>, input: &Path) -> Result<RunReport, CliError> {
    let g = ctx.graph(input)?;
    let c = involution_census(&g, ctx.limits.search_cap).map_err(CliError::invalid)?;
    let mut r = RunReport::new("census", Outcome::Definitive, format!("{} involutions", c.total()));
    census_facts(&mut r, &c);
    r.witness("canonical graph", write_graph(&c.graph));
    r.witness("census", census_text(&c));
    Ok(r)
}

fn not_sos(ctx: &mut Context<'_>, input: &Path, multiplier: bool) -> Result<RunReport, CliError> {
    let f = ctx.combination(input)?;
    let cap = ctx.limits.search_cap;
    let (command, verdict) = if multiplier {
        ("multiplier-obstruction", check_multiplier_obstruction(&f, cap))
    } else {
        ("not-sos", check_not_sos(&f, cap))
    };
    let verdict = verdict.map_err(CliError::invalid)?;
    Ok(match verdict {
        Verdict::NotSos(w) => {
            let summary = if w.multiplier_obstruction {
                "not a sum of squares, and f (1 + g) is not one for any sum of squares g"
            } else {
                "not a sum of squares"
            };
            let mut r = RunReport::new(command, Outcome::Definitive, summary);
            r.fact("verdict", "NotSos");
            r.fact("lowest degree", w.min_degree);
            r.fact(
                "criterion",
                match w.criterion {
                    Criterion::TrivialSquares => "negative term, positive terms trivial squares",
                    Criterion::NoPositiveCoefficient => "no positive coefficient",
                },
            );
            r.fact("negative coefficient", &w.negative_term.1);
            r.witness("negative term", write_graph(&w.negative_term.0));
            for (i, t) in w.trivial_squares.iter().enumerate() {
                let mut body = format!("coefficient {}\n{}", t.coefficient, write_graph(&t.graph));
                let _ = writeln!(
                    body,
                    "automorphisms={} involutions={} splittable={}",
                    t.census.automorphism_count,
                    t.census.total(),
                    t.census.splittable()
                );
                body.push_str(&census_text(&t.census));
                r.witness(format!("trivial square {}", i + 1), body);
            }
            r
        }
        Verdict::Inconclusive(reason) => {
            let mut r = RunReport::new(command, Outcome::Inconclusive, "no verdict");
            r.fact("verdict", "Inconclusive");
            match reason {
                InconclusiveReason::NoNegativeMinDegreeTerm { min_degree } => {
                    r.fact("reason", "no negative coefficient in the lowest degree");
                    r.fact("lowest degree", min_degree);
                }
                InconclusiveReason::NonTrivialSquare { graph, witness } => {
                    r.fact("reason", "a positive term is a non-trivial square");
                    r.witness("graph", write_graph(&graph));
                    r.witness("root", witness_text(&witness));
                }
                InconclusiveReason::HasPositiveCoefficient { graph } => {
                    r.fact("reason", "a coefficient is positive");
                    r.witness("graph", write_graph(&graph));
                }
            }
            r
        }
    })
}

fn functional(cert: &InfeasibilityCertificate) -> String {
    let mut y = GraphCombination::zero();
    for (g, v) in &cert.values {
        y.add_term(g.clone(), v.clone());
    }
    write_combination(&y)
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Target of the search: the lowest-degree part of `f`.
fn search_target(f: &GraphCombination) -> Result<(GraphCombination, usize), CliError> {
    if !f.is_unlabeled() {
        return Err(CliError::invalid("sum-of-squares search needs an unlabeled combination"));
    }
    let low = f.min_degree_component().map_err(|_| CliError::invalid("the zero combination has no degree"))?;
    let d = low.min_degree().expect("nonzero");
    if d == 0 {
        return Err(CliError::invalid("degree 0 has no basis; the constant part decides by its sign"));
    }
    Ok((low, d))
}

fn certificate_found(
    r: &mut RunReport,
    cert: &SosCertificate,
    homogeneous: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let cert = cert.pruned();
    let text = write_certificate(&cert);
    if let Some(path) = out {
        write_file(path, &text)?;
        r.fact("certificate file", path.display());
    }
    r.fact("squares", cert.support());
    r.witness("certificate", text);
    if !homogeneous {
        r.outcome = Outcome::Inconclusive;
        r.summary = "the lowest-degree part is a sum of squares; the input itself is not decided".into();
    }
    Ok(())
}

fn sos(
    ctx: &mut Context<'_>,
    input: &Path,
    certificate_out: Option<&Path>,
    sdpa_out: Option<&Path>,
    solution: Option<&Path>,
) -> Result<RunReport, CliError> {
    let f = ctx.combination(input)?;
    let (low, d) = search_target(&f)?;
    let homogeneous = low == f;
    let caps = ctx.limits.basis_caps(d);
    let rounding = RoundingOptions { max_denominator: ctx.limits.denominator_bound, ..Default::default() };
    match ctx.global.mode {
        Mode::Embedded => {
            let options = SearchOptions { caps: Some(caps), rounding, ..Default::default() };
            let report = sos_search(&low, d, &options).map_err(CliError::invalid)?;
            let mut r = RunReport::new("sos-search", Outcome::Definitive, "");
            r.fact("degree", d);
            r.fact("basis caps", format!("{} vertices, {} labels", caps.max_vertices, caps.max_labels));
            r.fact("basis graphs", report.basis_size);
            r.fact("blocks", report.blocks);
            r.fact("constraints", report.constraints);
            r.fact("iterations", report.iterations);
            match &report.outcome {
                SearchOutcome::Certificate(cert) => {
                    r.summary = "sum of squares: exact certificate verified".into();
                    certificate_found(&mut r, cert, homogeneous, certificate_out)?;
                }
                SearchOutcome::NoCertificate { residual, dual } => {
                    r.fact("residual", format!("{residual:e}"));
                    match dual {
                        Some(dual) => {
                            r.summary = "no certificate over this basis: dual witness verified".into();
                            r.witness("separating functional", functional(dual));
                        }
                        None => {
                            r.outcome = Outcome::Inconclusive;
                            r.summary = "no certificate found; residual bounded away from zero, no exact witness".into();
                        }
                    }
                }
                SearchOutcome::Inconclusive { status, residual, rounding } => {
                    r.outcome = Outcome::Inconclusive;
                    r.summary = "solver or rounding did not settle".into();
                    r.fact("status", format!("{status:?}"));
                    r.fact("residual", format!("{residual:e}"));
                    if let Some(e) = rounding {
                        r.fact("rounding", e);
                    }
                }
            }
            Ok(r)
        }
        Mode::Export => {
            let basis = enumerate_basis(d, caps).map_err(CliError::invalid)?;
            let problem = build_sdp(&low, &basis).map_err(CliError::invalid)?;
            let file = SdpaFile::from_problem(&problem);
            let text = file.write().map_err(CliError::invalid)?;
            let mut r = RunReport::new("sos-search", Outcome::Definitive, "problem exported");
            r.fact("degree", d);
            r.fact("basis graphs", basis.graph_count());
            r.fact("blocks", problem.blocks.len());
            r.fact("constraints", problem.constraints.len());
            r.fact("scale", file.scale());
            match sdpa_out {
                Some(path) => {
                    write_file(path, &text)?;
                    r.fact("sdpa file", path.display());
                }
                None => {
                    r.witness("sdpa", text);
                }
            }
            if let Some(path) = solution {
                let content = ctx.read(path)?;
                let sol = SdpaSolution::parse(&content)
                    .map_err(|error| CliError::Parse { path: path.display().to_string(), error })?;
                ingest(&mut r, &problem, &file, &sol, &rounding, homogeneous, certificate_out)?;
            }
            Ok(r)
        }
    }
}

fn ingest(
    r: &mut RunReport,
    problem: &SdpProblem,
    file: &SdpaFile,
    sol: &SdpaSolution,
    rounding: &RoundingOptions,
    homogeneous: bool,
    certificate_out: Option<&Path>,
) -> Result<(), CliError> {
    let mut num = sol.to_numeric(problem, &file.scale()).map_err(CliError::invalid)?;
    r.fact("solution residual", format!("{:e}", num.residual));
    match round_and_verify(problem, &num, rounding) {
        Ok(cert) => {
            r.summary = "sum of squares: exact certificate verified from the external solution".into();
            return certificate_found(r, &cert, homogeneous, certificate_out);
        }
        Err(e) => {
            r.fact("rounding", e);
        }
    }
    // Solvers disagree on the sign convention of y; both are checked exactly.
    for _ in 0..2 {
        if let Some(dual) = round_dual(problem, &num, rounding.max_denominator) {
            r.summary = "no certificate over this basis: dual witness verified from the external solution".into();
            r.witness("separating functional", functional(&dual));
            return Ok(());
        }
        num.dual.iter_mut().for_each(|y| *y = -*y);
    }
    r.outcome = Outcome::Inconclusive;
    r.summary = "external solution neither rounds to a certificate nor to a dual witness".into();
    Ok(())
}

fn cone(ctx: &mut Context<'_>, input: &Path) -> Result<RunReport, CliError> {
    let f = ctx.combination(input)?;
    let d = f.min_degree().ok_or_else(|| CliError::invalid("the zero combination has no degree"))?;
    let caps = ctx.limits.basis_caps(d);
    let result = binomial_cone_membership(&f, d, caps).map_err(CliError::invalid)?;
    let mut r = RunReport::new("cone-membership", Outcome::Definitive, "");
    r.fact("degree", d);
    r.fact("generators", result.generators.len());
    match &result.outcome {
        ConeOutcome::Member(dec) => {
            r.summary = "in the cone of binomial squares".into();
            r.fact("member", true);
            for (i, (c, g)) in dec.terms.iter().enumerate() {
                r.witness(
                    format!("square {}", i + 1),
                    format!("weight {c}\nfirst:\n{}second:\n{}", write_graph(&g.first), write_graph(&g.second)),
                );
            }
        }
        ConeOutcome::NotMember(z) => {
            r.summary = "not in the cone of binomial squares: Farkas witness verified".into();
            r.fact("member", false);
            let mut y = GraphCombination::zero();
            for (g, v) in &z.values {
                y.add_term(g.clone(), v.clone());
            }
            r.witness("separating functional", write_combination(&y));
        }
    }
    Ok(r)
}

fn verify(ctx: &mut Context<'_>, certificate: &Path, input: &Path) -> Result<RunReport, CliError> {
    let text = ctx.read(certificate)?;
    let cert = parse_certificate(&text)
        .map_err(|error| CliError::Parse { path: certificate.display().to_string(), error })?;
    let f = ctx.combination(input)?;
    cert.verify(&f).map_err(|e| CliError::Invalid(format!("certificate rejected: {e}")))?;
    let mut r = RunReport::new("verify", Outcome::Definitive, "certificate verified");
    r.fact("squares", cert.support());
    let weights: Vec<String> = cert
        .to_squares()
        .map_err(CliError::invalid)?
        .iter()
        .map(|(w, _): &(Rational, GraphCombination)| w.to_string())
        .collect();
    r.fact("weights", weights.join(" "));
    Ok(r)
}

/// Renders `report` in the requested format.
pub fn render(report: &RunReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => report.to_json() + "\n",
        ReportFormat::Text => report.to_text(),
    }
}
