//! Command-line front end. Exit codes: 0 success, 1 a verification suite
//! found a violation, 2 usage or parse error, 3 domain error.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::constants::gap_bound;
use crate::error::Error;
use crate::freegrp::GenSetZ;
use crate::groups::field::{is_prime, primes_between};
use crate::groups::sl2::Sl2Group;
use crate::harness::{run_suite, Suite, SuiteConfig};
use crate::spectral::{spectrum, CayleyGraph, Method};
use crate::walks::walk;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "sl2lab", version, about = "Expansion constants and exact growth checks for SL2(F_p)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Certified spectral-gap, threshold and diameter constants for a generating set.
    GapBound {
        #[command(flatten)]
        gens: GensArg,
        #[arg(long)]
        json: bool,
    },
    /// Run a sampling suite and emit JSON lines.
    Verify(VerifyArgs),
    /// Extreme eigenvalues of the Cayley graph mod p.
    Spectrum {
        #[arg(long)]
        p: u32,
        #[command(flatten)]
        gens: GensArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Exact path counts of the n-step walk, as CSV.
    Walk {
        #[arg(long)]
        p: u32,
        #[command(flatten)]
        gens: GensArg,
        #[arg(long)]
        steps: u32,
    },
    /// Exact diameter and girth of the Cayley graph mod p.
    Diameter {
        #[arg(long)]
        p: u32,
        #[command(flatten)]
        gens: GensArg,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct GensArg {
    /// Built-in name (lubotzky, standard) or a file with one matrix per line.
    #[arg(long, default_value = "lubotzky")]
    gens: String,
    /// Add missing inverses instead of rejecting an asymmetric file.
    #[arg(long)]
    close: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    suite: String,
    /// Comma-separated primes or an inclusive range a..b.
    #[arg(long)]
    p: Option<String>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    exhaustive: bool,
    #[arg(long)]
    search_sharpness: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Auto,
    Dense,
    Iterative,
}

/// "7,11,13" or "5..31"; every entry must be prime.
pub fn parse_primes(s: &str) -> Result<Vec<u32>, Error> {
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| Error::Parse(format!("bad prime '{t}'")))
    };
    let out = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(Error::Parse(format!("empty range {s}")));
        }
        primes_between(a as u64, b as u64)
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if out.is_empty() {
        return Err(Error::Parse(format!("no primes in '{s}'")));
    }
    if let Some(&n) = out.iter().find(|&&n| !is_prime(n as u64)) {
        return Err(Error::NotPrime(n as u64));
    }
    Ok(out)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Io(_) => EXIT_USAGE,
        _ => EXIT_DOMAIN,
    }
}

fn to_json<T: Serialize>(v: &T, pretty: bool) -> String {
    let r = if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    };
    r.expect("reports serialize")
}

#[derive(Serialize)]
struct SpectrumOut<'a> {
    schema: &'static str,
    #[serde(flatten)]
    summary: &'a crate::spectral::SpectrumSummary,
}

#[derive(Serialize)]
struct DiameterOut {
    schema: &'static str,
    p: u32,
    order: u32,
    degree: usize,
    diameter: u32,
    girth: Option<u32>,
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn gens_of(g: &GensArg) -> Result<GenSetZ, Error> {
    GenSetZ::resolve(&g.gens, g.close)
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> Result<i32, Error> {
    match cmd {
        Cmd::GapBound { gens, json } => {
            let s = gens_of(&gens)?;
            let r = gap_bound(&s)?;
            if json {
                writeln!(out, "{}", to_json(&r, true)).map_err(io)?;
            } else {
                let lines = [
                    format!("generators        {}", r.generators),
                    format!("tau^-1            [{}, {}]", r.tau_inv.lo, r.tau_inv.hi),
                    format!("gamma_raw         [{}, {}]", r.gamma_raw.lo, r.gamma_raw.hi),
                    format!("gamma_eff         [{}, {}]", r.gamma_eff.lo, r.gamma_eff.hi),
                    format!("delta1            [{}, {}]", r.delta1.lo, r.delta1.hi),
                    format!("flattening steps  {}", r.j.used),
                    format!("log2 gap bound    [{}, {}]", r.gap_log2.lo, r.gap_log2.hi),
                    format!("log2 closed form  [{}, {}]", r.stated_gap_log2.lo, r.stated_gap_log2.hi),
                    format!("implies closed    {}", r.stated_form_implied),
                    format!("log2 p threshold  {:.6e} ({})", r.p_threshold_log2, r.binding_threshold),
                    format!("diameter A        [{}, {}]", r.diameter.a.lo, r.diameter.a.hi),
                    format!("log2 3^A          [{}, {}]", r.diameter.coeff_log2.lo, r.diameter.coeff_log2.hi),
                    format!("valid for p >     {}", r.diameter.validity_p.hi),
                ];
                for l in lines {
                    writeln!(out, "{l}").map_err(io)?;
                }
            }
            Ok(EXIT_OK)
        }
        Cmd::Verify(v) => verify(v, out),
        Cmd::Spectrum {
            p,
            gens,
            method,
            seed,
            json,
        } => {
            let g = CayleyGraph::build(p, &gens_of(&gens)?)?;
            let method = match method {
                MethodArg::Auto => Method::Auto,
                MethodArg::Dense => Method::Dense,
                MethodArg::Iterative => Method::Iterative,
            };
            let r = spectrum(&g, method, seed)?;
            if json {
                let tagged = SpectrumOut {
                    schema: "sl2lab.spectrum/1",
                    summary: &r,
                };
                writeln!(out, "{}", to_json(&tagged, false)).map_err(io)?;
            } else {
                writeln!(
                    out,
                    "p={} |G|={} lambda1={:.12} rho+={:.12} rho-={:.12} method={:?} residual={:.1e}",
                    r.p, r.order, r.lambda1, r.rho_plus, r.rho_minus, r.method, r.residual
                )
                .map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Cmd::Walk { p, gens, steps } => {
            let s = gens_of(&gens)?;
            let grp = Sl2Group::new(p as u64)?;
            let idx = s.indices_mod(&grp)?;
            let d = walk(&grp, &idx, steps)?;
            write!(out, "{}", d.to_csv()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Cmd::Diameter { p, gens, json } => {
            let g = CayleyGraph::build(p, &gens_of(&gens)?)?;
            let r = DiameterOut {
                schema: "sl2lab.diameter/1",
                p,
                order: g.order(),
                degree: g.degree(),
                diameter: g.diameter()?,
                girth: g.girth(),
            };
            if json {
                writeln!(out, "{}", to_json(&r, false)).map_err(io)?;
            } else {
                writeln!(out, "{}", r.diameter).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn verify(v: VerifyArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let suite: Suite = v.suite.parse()?;
    let primes = match &v.p {
        Some(s) => parse_primes(s)?,
        None => suite.default_primes(),
    };
    let samples_anything = match suite {
        Suite::Pink => !v.exhaustive,
        Suite::Escape => primes.iter().any(|&p| p >= 7),
        _ => true,
    };
    let seed = match v.seed {
        Some(s) => s,
        None if !samples_anything => 0,
        None => return Err(Error::Parse(format!("suite {suite} samples; --seed is required"))),
    };
    let cfg = SuiteConfig {
        primes,
        samples: v.samples,
        seed,
        exhaustive: v.exhaustive,
        search_sharpness: v.search_sharpness,
    };
    let mut failed = None;
    let summary = run_suite(suite, &cfg, &mut |rec| {
        if failed.is_none() {
            if let Err(e) = writeln!(out, "{rec}") {
                failed = Some(e);
            }
        }
    })?;
    if let Some(e) = failed {
        return Err(io(e));
    }
    writeln!(out, "{}", serde_json::json!({ "summary": summary })).map_err(io)?;
    Ok(if summary.violations > 0 { EXIT_VIOLATION } else { EXIT_OK })
}
