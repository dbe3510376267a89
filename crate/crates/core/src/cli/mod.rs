//! Command-line entry point: iteration, certification, identity
//! verification, numeric adjudication, and convergence checks, with
//! deterministic text and JSON reports.

mod report;

pub use report::{
    render, CandidateRowDoc, CertificateDoc, ConfigDoc, ConvergenceRow, EquationRow, FDReportDoc,
    Format, IdentityRow, LambdaRowDoc, NumericDoc, OrderDoc, PointDoc, ReportDocument,
};

use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;

use crate::exactnum::{ParamRational, Rational};
use crate::finitetype::{
    certify_from_trace, extract_lambda, iterate, lambda_published, EngineError, IterationTrace,
    Target, Verdict,
};
use crate::numeric::{
    adjudicate, convergence_order, standard_points, EvalPoint, FDReport, DEFAULT_FD_STEP,
    DEFAULT_TOLERANCE,
};
use crate::surface::{build_anchor_ring, derive_from_metric, SurfaceContext};
use crate::trigring::{GradedTrig, PhiHarmonic, RingParams, TrigNum, TrigPoly};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Default monomial budget for one iteration order.
pub const DEFAULT_TERM_CEILING: usize = 200_000;
/// Environment variable overriding the default term ceiling; the
/// `--term-ceiling` flag overrides both.
pub const TERM_CEILING_ENV: &str = "RINGTYPE_TERM_CEILING";

/// Convergence-order acceptance window for the numeric suite.
const ORDER_WINDOW: (f64, f64) = (1.7, 2.3);

#[derive(Parser)]
#[command(
    name = "ringtype",
    version,
    about = "Exact symbolic verification of iterated Beltrami-operator growth on the anchor ring"
)]
struct Cli {
    /// Instantiate the ring parameters, e.g. `a=2,r=1` or `a=5/2,r=1`
    /// (integers or fractions; requires a > r > 0). Default: symbolic.
    #[arg(long, global = true, value_name = "A=..,R=..")]
    params: Option<String>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Write the report to a file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Maximal number of monomials per iteration order before aborting.
    #[arg(long, global = true, value_name = "N")]
    term_ceiling: Option<usize>,

    /// Deliberately perturb the mean curvature before verification, to
    /// exercise the failure exit path.
    #[arg(long, global = true, hide = true)]
    falsify: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the operator `order` times to a target and print the result.
    Iterate {
        #[arg(long)]
        order: u32,
        /// One of n1, n2, n3 (Gauss map) or x1, x2, x3 (position).
        #[arg(long, default_value = "n3")]
        target: String,
    },
    /// Produce the bounded finite-type certificate for the Gauss-map third
    /// coordinate, with the leading-coefficient comparison table.
    Certify {
        #[arg(long, default_value_t = 8)]
        max_order: u32,
    },
    /// Check the structural surface identities exactly.
    Verify,
    /// Numerically adjudicate the closed form of one iterate against a
    /// finite-difference referee.
    Adjudicate {
        #[arg(long, default_value_t = 2)]
        order: u32,
    },
    /// Run the finite-difference convergence suite.
    Numeric,
}

#[derive(Debug)]
enum RunError {
    Usage(String),
    Resource(String),
}

struct RunOutput {
    doc: ReportDocument,
    /// Replaces the rendered text body (JSON is always the full document).
    text_override: Option<String>,
    ok: bool,
}

/// Parses the argument vector, executes the subcommand, and returns the
/// process exit code (0 success, 1 check failure, 2 usage, 3 resource
/// guard).
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return code;
        }
    };
    let format = cli.format;
    let output = cli.output.clone();
    match execute(cli) {
        Ok(out) => {
            let body = match (format, &out.text_override) {
                (Format::Text, Some(text)) => text.clone(),
                _ => render(&out.doc, format),
            };
            if let Some(path) = output {
                if let Err(err) = std::fs::write(&path, &body) {
                    eprintln!("error: cannot write {}: {err}", path.display());
                    return EXIT_USAGE;
                }
            } else {
                print!("{body}");
            }
            if out.ok {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILURE
            }
        }
        Err(RunError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(RunError::Resource(msg)) => {
            eprintln!("error: {msg}");
            EXIT_RESOURCE
        }
    }
}

fn execute(cli: Cli) -> Result<RunOutput, RunError> {
    let ring = resolve_ring(cli.params.as_deref())?;
    let ceiling = resolve_ceiling(cli.term_ceiling)?;
    let params_echo = describe_ring(&ring);
    let format_echo = cli.format.label().to_string();
    match cli.command {
        Command::Iterate { order, target } => {
            do_iterate(order, &target, ring, ceiling, params_echo, format_echo)
        }
        Command::Certify { max_order } => {
            if max_order < 1 {
                return Err(RunError::Usage("--max-order must be at least 1".into()));
            }
            do_certify(max_order, ring, ceiling, params_echo, format_echo)
        }
        Command::Verify => Ok(do_verify(
            ring,
            cli.falsify,
            ceiling,
            params_echo,
            format_echo,
        )),
        Command::Adjudicate { order } => {
            if order < 1 {
                return Err(RunError::Usage("--order must be at least 1".into()));
            }
            do_adjudicate(order, ring, ceiling, params_echo, format_echo)
        }
        Command::Numeric => do_numeric(ring, ceiling, params_echo, format_echo),
    }
}

fn resolve_ring(flag: Option<&str>) -> Result<RingParams, RunError> {
    let Some(spec) = flag else {
        return Ok(RingParams::symbolic());
    };
    let mut a = None;
    let mut r = None;
    for piece in spec.split(',') {
        let piece = piece.trim();
        let Some((key, value)) = piece.split_once('=') else {
            return Err(RunError::Usage(format!(
                "malformed --params piece `{piece}` (expected key=value)"
            )));
        };
        let parsed = Rational::from_str(value.trim()).map_err(|_| {
            RunError::Usage(format!(
                "cannot parse `{}` as an integer or fraction",
                value.trim()
            ))
        })?;
        match key.trim() {
            "a" => a = Some(parsed),
            "r" => r = Some(parsed),
            other => {
                return Err(RunError::Usage(format!(
                    "unknown parameter `{other}` (expected a and r)"
                )))
            }
        }
    }
    let (Some(a), Some(r)) = (a, r) else {
        return Err(RunError::Usage(
            "--params must provide both a and r".into(),
        ));
    };
    let zero = Rational::from_integer(0.into());
    if !(a > r && r > zero) {
        return Err(RunError::Usage(format!(
            "ring parameters need a > r > 0, got a = {a}, r = {r}"
        )));
    }
    Ok(RingParams::instantiated(a, r))
}

fn resolve_ceiling(flag: Option<usize>) -> Result<usize, RunError> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(TERM_CEILING_ENV) {
        Ok(raw) => raw.trim().parse().map_err(|_| {
            RunError::Usage(format!(
                "{TERM_CEILING_ENV} must be a positive integer, got `{raw}`"
            ))
        }),
        Err(_) => Ok(DEFAULT_TERM_CEILING),
    }
}

fn describe_ring(ring: &RingParams) -> String {
    match (ring.a.to_rational(), ring.r.to_rational()) {
        (Some(a), Some(r)) => format!("a={a}, r={r}"),
        _ => "symbolic".to_string(),
    }
}

/// Numeric values of the ring parameters for finite-difference work;
/// symbolic runs measure on the reference ring (2, 1).
fn numeric_ring(ring: &RingParams) -> (f64, f64) {
    match (ring.a.to_rational(), ring.r.to_rational()) {
        (Some(a), Some(r)) => (
            a.to_f64().expect("ring parameters are finite"),
            r.to_f64().expect("ring parameters are finite"),
        ),
        _ => (2.0, 1.0),
    }
}

fn sample_points(ring: &RingParams) -> Vec<EvalPoint> {
    let (a, r) = numeric_ring(ring);
    standard_points()
        .into_iter()
        .map(|p| EvalPoint::new(a, r, p.t, p.phi).expect("validated parameters"))
        .collect()
}

fn base_doc(command: &str, params: String, format: String, ceiling: usize) -> ReportDocument {
    ReportDocument {
        certificate: None,
        config: ConfigDoc {
            command: command.to_string(),
            format,
            max_order: None,
            order: None,
            params,
            target: None,
            term_ceiling: ceiling,
        },
        equations: vec![],
        identities: vec![],
        lambda: vec![],
        numeric: None,
        verdict: String::new(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

fn resource_error(err: EngineError) -> RunError {
    RunError::Resource(err.to_string())
}

/// The published closed form of the first iterate, in graded presentation:
/// `−sin t/r² − sin t cos t/(rγ)`.
fn published_first(params: &RingParams) -> GradedTrig {
    let inv_r = &ParamRational::one() / &params.r;
    let inv_r2 = &inv_r * &inv_r;
    let mut g = GradedTrig::zero();
    g.add_level(0, TrigNum::monomial(1, 0, -&inv_r2));
    g.add_level(1, TrigNum::monomial(1, 1, -&inv_r));
    g
}

/// The published closed form of the second iterate, including the printed
/// `−3` coefficient on the γ³ term (the point under dispute):
/// `−s/r⁴ − 5sc/(r³γ) + (2c²s − s³)/(r²γ²) − 3s³c/(rγ³)`.
fn published_second(params: &RingParams) -> GradedTrig {
    let inv_r = &ParamRational::one() / &params.r;
    let inv_r2 = &inv_r * &inv_r;
    let inv_r3 = &inv_r2 * &inv_r;
    let inv_r4 = &inv_r2 * &inv_r2;
    let mut g = GradedTrig::zero();
    g.add_level(0, TrigNum::monomial(1, 0, -&inv_r4));
    g.add_level(1, TrigNum::monomial(1, 1, (&inv_r3).scale(&Rational::from_integer((-5).into()))));
    let mut level2 = TrigNum::monomial(1, 2, (&inv_r2).scale(&Rational::from_integer(2.into())));
    level2.insert(3, 0, -&inv_r2);
    g.add_level(2, level2);
    g.add_level(
        3,
        TrigNum::monomial(3, 1, (&inv_r).scale(&Rational::from_integer((-3).into()))),
    );
    g
}

/// The published third iterate is printed in leading form only.
const PUBLISHED_THIRD: &str =
    "-45/r*s^5*c*g^-5 + remainder*g^-4 (leading term; remainder of degree 5 unprinted)";

fn published_string(target: Target, order: u32, params: &RingParams) -> Option<String> {
    if target != Target::N3 {
        return None;
    }
    match order {
        1 => Some(published_first(params).to_string()),
        2 => Some(published_second(params).to_string()),
        3 => Some(PUBLISHED_THIRD.to_string()),
        _ => None,
    }
}

/// The full second iterate as printed (engine value shifted onto the
/// published γ³ coefficient), used as the losing adjudication candidate.
fn published_second_value(engine: &PhiHarmonic, params: &RingParams) -> PhiHarmonic {
    let inv_r = &ParamRational::one() / &params.r;
    let offset = TrigPoly::term(
        3,
        1,
        3,
        (&inv_r).scale(&Rational::from_integer((-4).into())),
        params,
    );
    PhiHarmonic::from_f0(engine.f0.add(&offset, params))
}

fn n3_trace(
    ctx: &SurfaceContext,
    max_order: u32,
    ceiling: usize,
) -> Result<IterationTrace, RunError> {
    let target = Target::N3;
    iterate(
        &ctx.laplacian,
        &target.initial(ctx),
        target.label(),
        target.channel(),
        max_order,
        ceiling,
        &ctx.params,
    )
    .map_err(resource_error)
}

fn run_adjudication(
    ctx: &SurfaceContext,
    trace: &IterationTrace,
    order: u32,
) -> (FDReport, Option<String>) {
    let prev = &trace.entries[(order - 1) as usize].value;
    let engine = trace.entries[order as usize].value.clone();
    let mut candidates = vec![("engine".to_string(), engine.clone())];
    if order == 2 {
        candidates.push((
            "published".to_string(),
            published_second_value(&engine, &ctx.params),
        ));
    }
    let report = adjudicate(
        &ctx.laplacian,
        prev,
        &candidates,
        &sample_points(&ctx.params),
        DEFAULT_FD_STEP,
        DEFAULT_TOLERANCE,
    );
    let winner = report.winner.clone();
    (report, winner)
}

fn fd_doc(report: &FDReport) -> FDReportDoc {
    FDReportDoc {
        h: report.h,
        points: report
            .points
            .iter()
            .map(|p| PointDoc {
                a: p.a,
                phi: p.phi,
                r: p.r,
                t: p.t,
            })
            .collect(),
        reference: report.reference.clone(),
        rows: report
            .rows
            .iter()
            .map(|r| CandidateRowDoc {
                label: r.label.clone(),
                max_deviation: r.max_deviation,
                values: r.values.clone(),
                within_tolerance: r.within_tolerance,
            })
            .collect(),
        tolerance: report.tolerance,
        winner: report.winner.clone(),
    }
}

fn do_iterate(
    order: u32,
    target_label: &str,
    ring: RingParams,
    ceiling: usize,
    params_echo: String,
    format_echo: String,
) -> Result<RunOutput, RunError> {
    let Some(target) = Target::from_label(target_label) else {
        return Err(RunError::Usage(format!(
            "unknown target `{target_label}` (expected one of n1, n2, n3, x1, x2, x3)"
        )));
    };
    let ctx = build_anchor_ring(ring);
    let trace = iterate(
        &ctx.laplacian,
        &target.initial(&ctx),
        target.label(),
        target.channel(),
        order,
        ceiling,
        &ctx.params,
    )
    .map_err(resource_error)?;
    let expression = trace.entries[order as usize].display_expression();
    let mut doc = base_doc("iterate", params_echo, format_echo, ceiling);
    doc.config.order = Some(order);
    doc.config.target = Some(target.label().to_string());
    doc.equations.push(EquationRow {
        adjudication: None,
        engine: expression.clone(),
        order,
        published: published_string(target, order, &ctx.params),
    });
    doc.verdict = format!(
        "order {} iterate of {} rendered",
        order,
        target.label()
    );
    Ok(RunOutput {
        doc,
        text_override: Some(format!("{expression}\n")),
        ok: true,
    })
}

fn do_certify(
    max_order: u32,
    ring: RingParams,
    ceiling: usize,
    params_echo: String,
    format_echo: String,
) -> Result<RunOutput, RunError> {
    let ctx = build_anchor_ring(ring);
    let trace = n3_trace(&ctx, max_order, ceiling)?;
    let cert = certify_from_trace(&trace, &ctx.params);

    let mut doc = base_doc("certify", params_echo, format_echo, ceiling);
    doc.config.max_order = Some(max_order);
    doc.config.target = Some(Target::N3.label().to_string());

    // Iterate-comparison table for the orders with a published closed form.
    let mut adjudication_doc = None;
    for order in 1..=max_order.min(3) {
        let engine = trace.entries[order as usize].display_expression();
        let published = published_string(Target::N3, order, &ctx.params);
        let adjudication = match order {
            1 => Some(
                if published.as_deref() == Some(engine.as_str()) {
                    "exact match".to_string()
                } else {
                    "MISMATCH (no adjudication run)".to_string()
                },
            ),
            2 => {
                let (report, winner) = run_adjudication(&ctx, &trace, 2);
                adjudication_doc = Some(fd_doc(&report));
                Some(match winner {
                    Some(w) => format!("finite-difference winner: {w}"),
                    None => "inconclusive".to_string(),
                })
            }
            _ => None,
        };
        doc.equations.push(EquationRow {
            adjudication,
            engine,
            order,
            published,
        });
    }

    for k in 1..=max_order.min(6) {
        let published = lambda_published(k);
        let extraction = extract_lambda(&trace, k, &ctx.params);
        let engine = extraction
            .lambda
            .as_ref()
            .map(|l| l.to_string())
            .unwrap_or_else(|| "—".to_string());
        let agree = extraction.lambda.as_ref() == Some(&published);
        doc.lambda.push(LambdaRowDoc {
            engine,
            flag: if agree { "ok" } else { "MISMATCH" }.to_string(),
            order: k,
            published: published.to_string(),
        });
    }

    let verdict_doc = match &cert.verdict {
        Verdict::NoRelationUpTo(m) => format!("NoRelationUpTo({m})"),
        Verdict::RelationFound {
            degree,
            coefficients,
        } => {
            let joined: Vec<String> = coefficients.iter().map(|c| c.to_string()).collect();
            format!(
                "RelationFound(degree {degree}; coefficients [{}])",
                joined.join(", ")
            )
        }
    };
    doc.certificate = Some(CertificateDoc {
        all_lambda_nonzero: cert.all_lambda_nonzero,
        max_order: cert.max_order,
        orders: cert
            .orders
            .iter()
            .map(|o| OrderDoc {
                lambda: o.lambda.as_ref().map(|l| l.to_string()),
                order: o.order,
                pole: o.pole,
                shape_ok: o.shape_ok,
            })
            .collect(),
        pole_pattern_ok: cert.pole_pattern_ok,
        verdict: verdict_doc.clone(),
    });
    doc.numeric = adjudication_doc.map(|adjudication| NumericDoc {
        adjudication: Some(adjudication),
        convergence: vec![],
    });

    let ok = matches!(cert.verdict, Verdict::NoRelationUpTo(_))
        && cert.pole_pattern_ok
        && cert.all_lambda_nonzero;
    doc.verdict = if ok {
        if ctx.params.is_symbolic() {
            format!(
                "every anchor ring in the Euclidean 3-space is of infinite type (verified up to order {max_order})"
            )
        } else {
            format!(
                "the anchor ring with {} is of infinite type (verified up to order {max_order})",
                doc.config.params
            )
        }
    } else {
        format!("certification failed: {verdict_doc}")
    };
    Ok(RunOutput {
        doc,
        text_override: None,
        ok,
    })
}

fn do_verify(
    ring: RingParams,
    falsify: bool,
    ceiling: usize,
    params_echo: String,
    format_echo: String,
) -> RunOutput {
    let mut ctx = build_anchor_ring(ring);
    if falsify {
        let perturbed = ctx.mean_curvature.add(&TrigPoly::one(), &ctx.params);
        ctx = ctx.with_mean_curvature(perturbed);
    }
    let p = &ctx.params;
    let mut rows = Vec::new();
    rows.push(IdentityRow {
        check: "position identity: operator applied to the position equals −2·H·n on all coordinates"
            .into(),
        pass: ctx.check_laplace_position(),
    });
    rows.push(IdentityRow {
        check: "gauss-map identity: operator applied to n equals grad 2H + (4H² − 2K)·n on all coordinates"
            .into(),
        pass: ctx.check_laplace_gauss(),
    });
    let first_iterate = ctx.laplacian.apply(&ctx.gauss_third(), p);
    let rhs_third = &ctx.laplace_gauss_rhs()[2];
    rows.push(IdentityRow {
        check: "gauss-map identity third coordinate reproduces the first iterate".into(),
        pass: rhs_third == &first_iterate,
    });
    let sqrt_g = TrigPoly::gamma(p).scale(&p.r);
    let derived = derive_from_metric(&ctx.g_tt, &ctx.g_phiphi, &sqrt_g, p);
    rows.push(IdentityRow {
        check: "operator derived from the metric matches the stored operator".into(),
        pass: derived
            .map(|d| {
                d.a_tt == ctx.laplacian.a_tt
                    && d.a_t == ctx.laplacian.a_t
                    && d.a_pp == ctx.laplacian.a_pp
            })
            .unwrap_or(false),
    });
    let ok = rows.iter().all(|r| r.pass);
    let failed = rows.iter().filter(|r| !r.pass).count();
    let mut doc = base_doc("verify", params_echo, format_echo, ceiling);
    doc.identities = rows;
    doc.verdict = if ok {
        "all identity checks passed".to_string()
    } else {
        format!("{failed} identity check(s) failed")
    };
    RunOutput {
        doc,
        text_override: None,
        ok,
    }
}

fn do_adjudicate(
    order: u32,
    ring: RingParams,
    ceiling: usize,
    params_echo: String,
    format_echo: String,
) -> Result<RunOutput, RunError> {
    let ctx = build_anchor_ring(ring);
    let trace = n3_trace(&ctx, order, ceiling)?;
    let (report, winner) = run_adjudication(&ctx, &trace, order);
    let mut doc = base_doc("adjudicate", params_echo, format_echo, ceiling);
    doc.config.order = Some(order);
    doc.config.target = Some(Target::N3.label().to_string());
    doc.equations.push(EquationRow {
        adjudication: Some(match &winner {
            Some(w) => format!("finite-difference winner: {w}"),
            None => "inconclusive".to_string(),
        }),
        engine: trace.entries[order as usize].display_expression(),
        order,
        published: published_string(Target::N3, order, &ctx.params),
    });
    doc.numeric = Some(NumericDoc {
        adjudication: Some(fd_doc(&report)),
        convergence: vec![],
    });
    let ok = winner.is_some();
    doc.verdict = match winner {
        Some(w) => format!("adjudicated winner at order {order}: {w}"),
        None => format!("adjudication inconclusive at order {order}"),
    };
    Ok(RunOutput {
        doc,
        text_override: None,
        ok,
    })
}

fn do_numeric(
    ring: RingParams,
    ceiling: usize,
    params_echo: String,
    format_echo: String,
) -> Result<RunOutput, RunError> {
    let ctx = build_anchor_ring(ring);
    let trace = n3_trace(&ctx, 2, ceiling)?;
    let coarse = 1e-2;
    let mut rows = Vec::new();
    for order in 1..=2u32 {
        let prev = trace.entries[(order - 1) as usize].value.clone();
        let next = trace.entries[order as usize].value.clone();
        for point in sample_points(&ctx.params) {
            let f = |t: f64, phi: f64| prev.evaluate_f64(point.a, point.r, t, phi);
            let exact = next.evaluate_f64(point.a, point.r, point.t, point.phi);
            let observed = convergence_order(&ctx.laplacian, &f, exact, &point, coarse);
            rows.push(ConvergenceRow {
                coarse_step: coarse,
                observed_order: observed,
                order,
                t: point.t,
                within_window: (ORDER_WINDOW.0..=ORDER_WINDOW.1).contains(&observed),
            });
        }
    }
    let ok = rows.iter().all(|r| r.within_window);
    let total = rows.len();
    let within = rows.iter().filter(|r| r.within_window).count();
    let mut doc = base_doc("numeric", params_echo, format_echo, ceiling);
    doc.numeric = Some(NumericDoc {
        adjudication: None,
        convergence: rows,
    });
    doc.verdict = if ok {
        format!(
            "observed convergence orders within [{}, {}] at all {total} measurements",
            ORDER_WINDOW.0, ORDER_WINDOW.1
        )
    } else {
        format!("convergence orders outside the window: {within} of {total} within")
    };
    Ok(RunOutput {
        doc,
        text_override: None,
        ok,
    })
}
