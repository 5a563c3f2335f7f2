//! `quasilie`: exact computations on golden-mean model sets and the graded
//! Lie algebras indexed by them.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use quasilie::liealg::{
    bracket, closure_probe, free_element_json, jacobi_residual, lower_central_probe, phi_matrix, sdp_compose,
    sdp_equivalence_check, SdpElement,
};
use quasilie::modelset::{compatibility_window, compatible_gradings, parity, self_similar_window};
use quasilie::verify::{self, Params, Report, Suite};
use quasilie::virasoro::{aw_bracket, aw_lower_central_probe, log_bracket, monoid_irreducible};
use quasilie::{chain_point, Error, Generator, Mode, ParityVariant, PointSetSpec, RingElement, RingSpec, Window};

const RING_ENV: &str = "QUASILIE_RING";

#[derive(Parser)]
#[command(name = "quasilie", version, about = "Exact model-set and graded Lie algebra computations")]
struct Cli {
    /// Ring x^2 = m*x + eps, given as "m,eps". Defaults to $QUASILIE_RING, then "1,1".
    #[arg(long, global = true)]
    ring: Option<String>,

    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct RangeArgs {
    /// Lower end of the real range, as a ring element.
    #[arg(long, default_value = "-10", allow_hyphen_values = true)]
    lo: String,
    /// Upper end of the real range, as a ring element.
    #[arg(long, default_value = "10", allow_hyphen_values = true)]
    hi: String,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Strict,
    Symmetric,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Strict => Mode::StrictPaper,
            ModeArg::Symmetric => Mode::SymmetricClosed,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// List chain points n2·α + ⌊1 - n2·α'⌋ for n2 in [from, to].
    Chain {
        #[arg(long, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, allow_hyphen_values = true)]
        to: i64,
    },
    /// Test membership of x in Σ(window).
    Member {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value = "(0,1]")]
        window: String,
    },
    /// Gap lengths between consecutive points of Σ(window) in a range.
    Tiles {
        #[arg(long, default_value = "(0,1]")]
        window: String,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// All pairwise products of Σ(window) in a range, with violations.
    Closure {
        #[arg(long, default_value = "[-1,1]")]
        window: String,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Parity of a chain point (golden ring only).
    Parity {
        #[arg(allow_hyphen_values = true)]
        x: String,
        /// Read parity against Σ([0,1]) instead of Σ((0,1]).
        #[arg(long)]
        closed: bool,
    },
    /// Gradings a chain point is compatible with, or the window for one grading.
    Grading {
        #[arg(allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long, default_value_t = 8)]
        a_max: u32,
        /// Print the compatibility window for this grading.
        #[arg(long)]
        a: Option<u32>,
    },
    /// The window W with α^a·Σ((0,1]) = Σ(W).
    Selfsim {
        #[arg(long)]
        a: u32,
    },
    /// [g, h] for generators like "J[a=2,m=1+t]".
    Bracket {
        g: String,
        h: String,
        #[arg(long, value_enum, default_value = "symmetric")]
        mode: ModeArg,
    },
    /// Jacobi residual of three generators.
    Jacobi {
        g: String,
        h: String,
        k: String,
        #[arg(long, value_enum, default_value = "symmetric")]
        mode: ModeArg,
    },
    /// Semi-direct product form of the product of two generators.
    Sdp {
        g: String,
        h: String,
        #[arg(long, value_enum, default_value = "strict")]
        mode: ModeArg,
    },
    /// Monoid primes of Σ([-1,1]) in [2, max], with factorizations of the rest.
    Primes {
        #[arg(long, default_value = "[-1,1]")]
        window: String,
        #[arg(long)]
        max: String,
    },
    /// [L_log|m|, L_log|n|] in the logarithmic algebra.
    LogBracket {
        #[arg(allow_hyphen_values = true)]
        m: String,
        #[arg(allow_hyphen_values = true)]
        n: String,
    },
    /// [L_n, L_m] in the additive Witt algebra with cutoff window.
    AwBracket {
        #[arg(allow_hyphen_values = true)]
        n: String,
        #[arg(allow_hyphen_values = true)]
        m: String,
        #[arg(long, default_value = "[0,1]")]
        window: String,
    },
    /// Products of valid generators leaving the generator set.
    ProbeClosure {
        #[arg(long, value_enum, default_value = "symmetric")]
        mode: ModeArg,
        #[arg(long, default_value_t = 8)]
        range: i64,
        #[arg(long, default_value_t = 4)]
        a_max: u32,
    },
    /// Lower central series dimensions of the algebra generated by some generators.
    ProbeLcs {
        #[arg(required = true)]
        generators: Vec<String>,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, value_enum, default_value = "symmetric")]
        mode: ModeArg,
    },
    /// Lower central series dimensions in the additive Witt algebra.
    ProbeAwLcs {
        #[arg(allow_hyphen_values = true)]
        generators: Vec<String>,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value = "[0,1]")]
        window: String,
    },
    /// Run property suites.
    Verify {
        /// Suite name; repeat for several.
        #[arg(long, value_parser = parse_suite)]
        suite: Vec<Suite>,
        /// Run every suite.
        #[arg(long)]
        all: bool,
        /// List suites and what they check.
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        window: Option<String>,
        #[arg(long)]
        range: Option<i64>,
        #[arg(long)]
        a_max: Option<u32>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse::<Suite>().map_err(|e| e.to_string())
}

/// Failure classes, mapped to exit codes.
enum Failure {
    Usage(Error),
    Runtime(Error),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Parse { .. }
            | Error::InvalidRing { .. }
            | Error::EmptyWindow(_)
            | Error::InvalidGenerator { .. } => Failure::Usage(e),
            other => Failure::Runtime(other),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn ring_spec(flag: Option<&str>) -> Result<RingSpec, Error> {
    match flag.map(str::to_string).or_else(|| std::env::var(RING_ENV).ok()) {
        Some(text) => RingSpec::parse(&text),
        None => Ok(RingSpec::FIBONACCI),
    }
}

fn point_json(x: &RingElement) -> Value {
    json!({"c0": x.c0().to_string(), "c1": x.c1().to_string(), "approx": x.approx().0})
}

fn emit(as_json: bool, value: Value, text: impl FnOnce() -> String) {
    if as_json {
        say(&serde_json::to_string_pretty(&value).expect("serializable"));
    } else {
        say(&text());
    }
}

/// Prints a line, exiting quietly when the reader has gone away.
fn say(line: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{line}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("writing to stdout: {e}");
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let ring = ring_spec(cli.ring.as_deref())?;
    let el = |s: &str| RingElement::parse(ring, s);
    let win = |s: &str| Window::parse(ring, s);
    let json = cli.json;
    match cli.cmd {
        Cmd::Chain { from, to } => {
            if from > to {
                return Err(Error::InvertedRange { lo: from.to_string(), hi: to.to_string() }.into());
            }
            let points: Vec<(i64, RingElement)> = (from..=to).map(|n| (n, chain_point(ring, n))).collect();
            emit(
                json,
                json!({
                    "ring": ring,
                    "window": Window::unit(ring).to_string(),
                    "points": points.iter().map(|(_, x)| point_json(x)).collect::<Vec<_>>(),
                }),
                || points.iter().map(|(n, x)| format!("{n}\t{x}\t{:.6}", x.approx().0)).collect::<Vec<_>>().join("\n"),
            );
        }
        Cmd::Member { x, window } => {
            let (x, w) = (el(&x)?, win(&window)?);
            let m = PointSetSpec::new(w.clone()).member(&x)?;
            emit(json, json!({"x": x, "window": w, "member": m, "conjugate": x.conjugate()}), || m.to_string());
        }
        Cmd::Tiles { window, range } => {
            let w = win(&window)?;
            let t = PointSetSpec::new(w.clone()).tiles(&el(&range.lo)?, &el(&range.hi)?)?;
            let counts: Vec<Value> = t
                .counts
                .iter()
                .map(|(len, n)| json!({"length": len, "count": n, "locations": t.locations(len)}))
                .collect();
            emit(
                json,
                json!({"window": w, "points": t.points.len(), "tiles": counts, "exceptional": t.exceptional}),
                || {
                    let mut lines: Vec<String> = t.counts.iter().map(|(len, n)| format!("{len}\t{n}")).collect();
                    for len in &t.exceptional {
                        for (a, b) in t.locations(len) {
                            lines.push(format!("exceptional {len} between {a} and {b}"));
                        }
                    }
                    lines.join("\n")
                },
            );
        }
        Cmd::Closure { window, range } => {
            let w = win(&window)?;
            let rep = PointSetSpec::new(w).closure_report(&el(&range.lo)?, &el(&range.hi)?)?;
            let text = || {
                let mut lines = vec![format!(
                    "window {} admissible={} points={} pairs={} violations={}",
                    rep.window,
                    rep.admissible,
                    rep.points,
                    rep.pairs,
                    rep.violations.len()
                )];
                lines.extend(rep.violations.iter().take(20).map(|v| format!("{} * {} = {}", v.x, v.y, v.product)));
                lines.join("\n")
            };
            emit(json, serde_json::to_value(&rep).expect("serializable"), text);
        }
        Cmd::Parity { x, closed } => {
            let x = el(&x)?;
            let variant = if closed { ParityVariant::Closed01 } else { ParityVariant::HalfOpen01 };
            let p = parity(&x, variant)?;
            emit(json, json!({"x": x, "parity": p}), || format!("{p:?}").to_lowercase());
        }
        Cmd::Grading { x, a_max, a } => match (x, a) {
            (_, Some(a)) => {
                let w = compatibility_window(ring, a)?;
                emit(json, json!({"a": a, "window": w}), || w.to_string());
            }
            (Some(x), None) => {
                let x = el(&x)?;
                let g = compatible_gradings(&x, a_max)?;
                emit(json, json!({"x": x, "gradings": g}), || {
                    g.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
                });
            }
            (None, None) => {
                return Err(Failure::Usage(Error::Parse { pos: 0, msg: "give a point or --a".into() }));
            }
        },
        Cmd::Selfsim { a } => {
            let w = self_similar_window(ring, a);
            emit(json, json!({"a": a, "window": w}), || w.to_string());
        }
        Cmd::Bracket { g, h, mode } => {
            let mode = Mode::from(mode);
            let (g, h) = (Generator::parse(ring, &g, mode)?, Generator::parse(ring, &h, mode)?);
            let b = bracket(&g, &h, mode)?;
            emit(json, serde_json::to_value(free_element_json(&b)).expect("serializable"), || b.to_string());
        }
        Cmd::Jacobi { g, h, k, mode } => {
            let mode = Mode::from(mode);
            let p = |s: &str| Generator::parse(ring, s, mode);
            let r = jacobi_residual(&p(&g)?, &p(&h)?, &p(&k)?, mode)?;
            emit(json, serde_json::to_value(free_element_json(&r)).expect("serializable"), || r.to_string());
        }
        Cmd::Sdp { g, h, mode } => {
            let mode = Mode::from(mode);
            let (g, h) = (Generator::parse(ring, &g, mode)?, Generator::parse(ring, &h, mode)?);
            let (x, y) = (SdpElement::from_generator(&g), SdpElement::from_generator(&h));
            let z = sdp_compose(&x, &y)?;
            let agrees = sdp_equivalence_check(&g, &h);
            let value = json!({
                "phi": phi_matrix(ring, g.a()),
                "mhat": [z.mhat.0.to_string(), z.mhat.1.to_string()],
                "a": z.a,
                "index": z.index(),
                "agrees_with_product": agrees,
            });
            emit(json, value, || {
                format!("(({}, {}), {}) = J[a={},m={}] agrees={agrees}", z.mhat.0, z.mhat.1, z.a, z.a, z.index())
            });
        }
        Cmd::Primes { window, max } => {
            let w = win(&window)?;
            if w != Window::symmetric(ring) {
                return Err(Error::UnsupportedWindow(format!("{w}: the multiplicative monoid is Σ([-1,1])")).into());
            }
            let max = el(&max)?;
            let mut rows = Vec::new();
            for x in PointSetSpec::new(w).enumerate(&ring.int(2), &max)? {
                let irr = monoid_irreducible(&x, &x)?;
                rows.push((x, irr));
            }
            let value: Vec<Value> = rows.iter().map(|(x, irr)| json!({"x": x, "result": irr})).collect();
            emit(json, Value::Array(value), || {
                rows.iter()
                    .map(|(x, irr)| match (&irr.witness, irr.irreducible) {
                        (_, true) if irr.unit_convention => format!("{x}\tunit"),
                        (_, true) => format!("{x}\tprime"),
                        (Some((p, q)), false) => format!("{x}\t= ({p})({q})"),
                        (None, false) => format!("{x}\tcomposite"),
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            });
        }
        Cmd::LogBracket { m, n } => {
            let t = log_bracket(&el(&m)?, &el(&n)?)?;
            emit(json, serde_json::to_value(&t).expect("serializable"), || format!("{} * L[log({})]", t.coeff, t.key));
        }
        Cmd::AwBracket { n, m, window } => {
            let b = aw_bracket(&el(&n)?, &el(&m)?, &win(&window)?)?;
            let terms: Vec<Value> = b.iter().map(|(k, c)| json!({"coeff": c, "key": k})).collect();
            emit(json, Value::Array(terms), || {
                if b.is_zero() {
                    return "0".to_string();
                }
                b.iter().map(|(k, c)| format!("({c}) * L[{k}]")).collect::<Vec<_>>().join(" + ")
            });
        }
        Cmd::ProbeClosure { mode, range, a_max } => {
            let rep = closure_probe(ring, mode.into(), &ring.int(-range), &ring.int(range), a_max)?;
            let text = || {
                let mut lines = vec![format!(
                    "mode {} generators={} pairs={} defects={}",
                    rep.mode,
                    rep.generators,
                    rep.pairs,
                    rep.defects.len()
                )];
                lines.extend(
                    rep.defects
                        .iter()
                        .take(20)
                        .map(|d| format!("{} * {} -> J[a={},m={}]: {}", d.left, d.right, d.a, d.m, d.reason)),
                );
                lines.join("\n")
            };
            emit(json, serde_json::to_value(&rep).expect("serializable"), text);
        }
        Cmd::ProbeLcs { generators, depth, mode } => {
            let mode = Mode::from(mode);
            let gens = generators.iter().map(|s| Generator::parse(ring, s, mode)).collect::<Result<Vec<_>, _>>()?;
            let dims = lower_central_probe(&gens, depth, mode)?;
            emit(json, json!({"generators": gens, "mode": mode, "dims": dims}), || format!("{dims:?}"));
        }
        Cmd::ProbeAwLcs { generators, depth, window } => {
            let w = win(&window)?;
            let gens = match generators.is_empty() {
                true => verify::aw_default_generators(ring)?,
                false => generators.iter().map(|s| el(s)).collect::<Result<Vec<_>, _>>()?,
            };
            let dims = aw_lower_central_probe(&gens, depth, &w)?;
            emit(json, json!({"generators": gens, "window": w, "dims": dims}), || format!("{dims:?}"));
        }
        Cmd::Verify { suite, all, list, seed, window, range, a_max, samples } => {
            if list {
                for s in Suite::ALL {
                    say(&format!("{:<18} {}", s.name(), s.help()));
                }
                return Ok(());
            }
            let suites: Vec<Suite> = if all { Suite::ALL.to_vec() } else { suite };
            if suites.is_empty() {
                return Err(Failure::Usage(Error::Parse { pos: 0, msg: "give --suite <name> or --all".into() }));
            }
            let params = Params { ring, window: window.as_deref().map(win).transpose()?, range, a_max, seed, samples };
            let reports = run_suites(&suites, &params)?;
            let pass = reports.iter().all(|r| r.pass);
            emit(json, serde_json::to_value(&reports).expect("serializable"), || {
                reports.iter().map(report_text).collect::<Vec<_>>().join("\n")
            });
            if !pass {
                return Err(Failure::Checks);
            }
        }
    }
    Ok(())
}

/// Runs suites on separate threads; reports come back ordered by name.
fn run_suites(suites: &[Suite], params: &Params) -> Result<Vec<Report>, Error> {
    let mut suites = suites.to_vec();
    suites.sort_by_key(|s| s.name());
    suites.dedup();
    let results: Vec<Result<Report, Error>> = std::thread::scope(|scope| {
        let handles: Vec<_> = suites.iter().map(|&s| scope.spawn(move || verify::run(s, params))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    results.into_iter().collect()
}

fn report_text(r: &Report) -> String {
    let counts: Vec<String> = r.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let mut lines =
        vec![format!("{} {} ({} ms) {}", if r.pass { "PASS" } else { "FAIL" }, r.suite, r.wall_ms, counts.join(" "))];
    for w in &r.witnesses {
        lines.push(format!("  witness {}", serde_json::to_string(w).expect("serializable")));
    }
    for w in &r.findings {
        lines.push(format!("  finding {}", serde_json::to_string(w).expect("serializable")));
    }
    lines.join("\n")
}
