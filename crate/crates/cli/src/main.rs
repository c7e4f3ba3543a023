mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use dirspec::construct::digits::{build_digit_family, tor_exponents, FamilyKind};
use dirspec::construct::{
    assemble_vector, build_sequence, cantor_lift, verify_lift_digits, ConstructedVector, ConstructionPlan, Growth, Mode,
};
use dirspec::numkit::{parse_rational, parse_real, Interval};
use dirspec::par::{with_workers, Exec, DEFAULT_CHUNK};
use dirspec::phi::ApproxFn;
use dirspec::verify::{self, fmt_decimal, Norm, VerifyOptions};
use dirspec::{dims, transfer, Error};

use output::{emit_json, envelope, is_csv, pretty, write_csv, write_text, Manifest};

const LIFT_CHECK_DEPTH: usize = 10_000;

const EXIT_CERT: u8 = 2;
const EXIT_TRUNC: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_DOMAIN: u8 = 65;

#[derive(Parser, Debug, Serialize)]
#[command(name = "dirspec", version, about = "Constructions and verifiers for prescribed uniform Dirichlet approximation")]
#[command(args_override_self = true)]
struct Cli {
    /// JSON file with default values for the command's options.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for the parallel kernels.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Run kernels on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[arg(long, global = true, default_value_t = DEFAULT_CHUNK)]
    chunk: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug, Serialize)]
enum Cmd {
    /// Build the integer sequence and the vector it defines.
    Construct(ConstructArgs),
    /// Checks on a constructed vector.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Dimension bounds.
    #[command(subcommand)]
    Dims(DimsCmd),
    /// Transference constants and round-trip checks.
    #[command(subcommand)]
    Transfer(TransferCmd),
    /// Digit-set families for the dimension constructions.
    #[command(subcommand)]
    Digits(DigitsCmd),
}

#[derive(Args, Debug, Serialize)]
struct ConstructArgs {
    #[arg(long)]
    m: usize,
    /// `power:c=9/10,tau=1/2` or `table:t0=1;1=1/2;2=1/3`.
    #[arg(long)]
    phi: String,
    #[arg(long, default_value_t = 1)]
    depth: usize,
    /// general, m2, uniform or cantor.
    #[arg(long, default_value = "general")]
    mode: String,
    /// Base for cantor mode.
    #[arg(long, default_value_t = 3)]
    b: u32,
    /// Comma-separated exponents `M_1, M_2, ..` instead of the minimal certified ones.
    #[arg(long)]
    exponents: Option<String>,
    #[arg(long, default_value = "1/1000")]
    margin: String,
    #[arg(long, default_value_t = 64)]
    max_exponent: u32,
    /// Truncation level of the vector (defaults to depth).
    #[arg(long)]
    truncation: Option<usize>,
    /// Cantor lift digit pairs `lo,hi;lo,hi` (cantor mode only).
    #[arg(long)]
    lift: Option<String>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct VecArgs {
    /// Vector JSON written by `construct`.
    #[arg(long = "vec")]
    vec: PathBuf,
    /// max, p:2, euclid or weighted:1,1/2.
    #[arg(long, default_value = "max")]
    norm: String,
    /// Output file; `.csv` where supported, JSON otherwise. Stdout by default.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000_000)]
    q_budget: u64,
}

#[derive(Subcommand, Debug, Serialize)]
enum VerifyCmd {
    /// `psi(Q)` at one Q, or the full profile up to `--qmax`.
    Psi {
        #[command(flatten)]
        v: VecArgs,
        #[arg(long, conflicts_with = "qmax")]
        q: Option<u64>,
        #[arg(long)]
        qmax: Option<u64>,
    },
    /// Change points of `psi` up to `--qmax`.
    Sweep {
        #[command(flatten)]
        v: VecArgs,
        #[arg(long)]
        qmax: u64,
    },
    /// `psi(Q) < Phi(Q)` on an integer range.
    C1 {
        #[command(flatten)]
        v: VecArgs,
        #[arg(long, default_value_t = 1)]
        from: u64,
        /// Defaults to the first checkpoint.
        #[arg(long)]
        to: Option<u64>,
        /// Override the vector's Phi.
        #[arg(long)]
        phi: Option<String>,
        /// Compare against `factor * Phi`.
        #[arg(long)]
        phi_factor: Option<String>,
    },
    /// `psi(Q_f) / Phi(Q_f)` at `Q_f = a_{m(f+1)} - 1`.
    Checkpoint {
        #[command(flatten)]
        v: VecArgs,
        #[arg(long, default_value_t = 1)]
        f: usize,
        #[arg(long, default_value = "1/100")]
        tol: String,
        #[arg(long)]
        phi: Option<String>,
    },
    /// `|q xi| <= 2 a_{mn} / a_{mn+1}` at `q = a_{mn}`.
    C3 {
        #[command(flatten)]
        v: VecArgs,
        #[arg(long, default_value_t = 3)]
        target: u32,
        #[arg(long, default_value_t = 1)]
        levels: usize,
    },
    /// Dirichlet constant estimate over the available checkpoints.
    Theta {
        #[command(flatten)]
        v: VecArgs,
    },
    /// Ordinary exponent estimate.
    Lambda {
        #[command(flatten)]
        v: VecArgs,
        #[arg(long)]
        qmax: u64,
    },
    /// Brute-force linear-form `psi*(Q*)`.
    Linform {
        #[command(flatten)]
        v: VecArgs,
        /// Comma-separated `Q*` values.
        #[arg(long)]
        qstar: String,
        #[arg(long, default_value_t = 1_000_000)]
        y_budget: u64,
    },
}

#[derive(Subcommand, Debug, Serialize)]
enum DimsCmd {
    /// Falconer lower bound from a levels file or generated data.
    Falconer {
        /// JSON with `p`/`eps` or `log2_p`/`log2_eps` arrays.
        #[arg(long, conflicts_with = "gs0")]
        input: Option<PathBuf>,
        /// Generated data `m,gamma1,gamma2`.
        #[arg(long)]
        gs0: Option<String>,
        #[arg(long, default_value_t = 40)]
        depth: usize,
    },
    /// Lower bounds from the (gamma1, gamma2) digit construction, exact.
    Ohlele {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
    },
    /// Optimal gamma2 and the Hausdorff dimension bound for given m.
    Hdd {
        #[arg(long)]
        m: usize,
    },
    /// Large-m bound against the 3m/8 reference.
    Cosinus {
        #[arg(long)]
        m: usize,
    },
    /// Bound with a prescribed ordinary exponent lambda.
    Beides {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        lambda: String,
    },
    /// sigma(m, b) for Cantor-type sets.
    Sigma {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        good: bool,
    },
    /// Omega(b, R) for Cantor-type sets.
    Omega {
        #[arg(long)]
        b: u32,
        #[arg(long)]
        r: String,
        #[arg(long)]
        good: bool,
    },
    /// Dimension bound m/(tau+1).
    Rem {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        tau: String,
    },
    /// Packing dimension bound m(1-gamma).
    Packing {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        gamma: String,
    },
}

#[derive(Subcommand, Debug, Serialize)]
enum TransferCmd {
    /// Transference parameters between the two problems.
    German {
        #[arg(long)]
        m: usize,
        /// sim-to-lin or lin-to-sim.
        #[arg(long)]
        direction: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        u: String,
    },
    /// c_star and omega from a uniform constant c.
    Fr {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        c: String,
        /// Also report the inverse constant for this `c~`.
        #[arg(long)]
        c_tilde: Option<String>,
    },
    /// log kappa_m, optionally compared with log omega.
    Kappa {
        #[arg(long)]
        m: usize,
        /// Natural log of `c_star`.
        #[arg(long, allow_hyphen_values = true)]
        log_c_star: Option<String>,
    },
    /// Brute-force check of the transferred linear-form bound on a vector.
    Verify {
        #[command(flatten)]
        v: VecArgs,
        #[arg(long)]
        c: String,
        #[arg(long, default_value = "10,20,40,71")]
        qstar: String,
        #[arg(long, default_value_t = 1_000_000)]
        y_budget: u64,
    },
}

#[derive(Args, Debug, Serialize)]
struct FamilyArgs {
    #[arg(long)]
    m: usize,
    /// s, q, q1star or j.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    g1: Option<String>,
    /// Also drives the exponent schedule.
    #[arg(long)]
    g2: String,
    /// Psi descriptor for the j family.
    #[arg(long)]
    psi: Option<String>,
    #[arg(long, default_value_t = 1)]
    s: u64,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Serialize)]
enum DigitsCmd {
    /// Digit-set family and its free blocks.
    Family(FamilyArgs),
    /// One seeded member of a digit-set family.
    Sample {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Failure carrying its exit code.
#[derive(Debug)]
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::TruncationInsufficient { .. } => EXIT_TRUNC,
            Error::ConstructionInfeasible(_) | Error::Indeterminate(_) => EXIT_CERT,
            _ => EXIT_DOMAIN,
        };
        Fail(code, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail(EXIT_DOMAIN, msg.into())
}

type Out = std::result::Result<u8, Fail>;

fn rat(s: &str) -> std::result::Result<num_rational::BigRational, Fail> {
    parse_rational(s).map_err(Fail::from)
}

fn real(s: &str) -> std::result::Result<dirspec::numkit::Real, Fail> {
    parse_real(s).map_err(Fail::from)
}

fn u64_list(s: &str) -> std::result::Result<Vec<u64>, Fail> {
    s.split(',').map(|t| t.trim().parse::<u64>().map_err(|_| usage(format!("bad integer {t:?}")))).collect()
}

fn verdict(ok: bool) -> u8 {
    if ok {
        0
    } else {
        EXIT_CERT
    }
}

struct Ctx {
    man: Manifest,
    exec: Exec,
    chunk: u64,
}

impl Ctx {
    fn opts(&self, budget: u64) -> VerifyOptions {
        VerifyOptions { exec: self.exec, chunk: self.chunk, q_budget: budget }
    }

    fn json(&self, report: Option<&Path>, result: &impl Serialize) -> std::result::Result<(), Fail> {
        emit_json(report, &envelope(&self.man, result)).map_err(|e| usage(e))
    }
}

fn load_vec(p: &Path) -> std::result::Result<ConstructedVector, Fail> {
    let text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Fail(EXIT_DOMAIN, format!("{}: {e}", p.display())))?;
    Ok(ConstructedVector::from_json(&v)?)
}

fn vec_phi(vec: &ConstructedVector, over: Option<&String>) -> std::result::Result<ApproxFn, Fail> {
    let d = over.map(|s| s.as_str()).or(vec.phi.as_deref()).ok_or_else(|| usage("vector has no Phi; pass --phi"))?;
    Ok(ApproxFn::parse_descriptor(d)?)
}

fn parse_mode(mode: &str, b: u32) -> std::result::Result<Mode, Fail> {
    Ok(match mode {
        "general" => Mode::General,
        "m2" => Mode::M2,
        "uniform" => Mode::Uniform,
        "cantor" => Mode::Cantor { b },
        _ => return Err(usage(format!("unknown mode {mode:?}"))),
    })
}

fn cmd_construct(ctx: &Ctx, a: &ConstructArgs) -> Out {
    let f = ApproxFn::parse_descriptor(&a.phi)?;
    let mut plan = ConstructionPlan::new(a.m, f, parse_mode(&a.mode, a.b)?, a.depth);
    plan.margin = rat(&a.margin)?;
    plan.max_exponent = a.max_exponent;
    if let Some(e) = &a.exponents {
        let v = u64_list(e)?.into_iter().map(|x| x as u32).collect();
        plan.growth = Growth::Explicit(v);
    }
    let seq = match build_sequence(&plan) {
        Ok(s) => s,
        Err(e) => {
            let f = Fail::from(e);
            let log = json!({ "manifest": ctx.man.to_value(), "error": f.1 });
            write_text(&a.out_dir.join("certificates.json"), &pretty(&log)).map_err(|e| usage(e.to_string()))?;
            return Err(f);
        }
    };
    let mut vec = assemble_vector(&seq, a.truncation.unwrap_or(a.depth))?;
    if let Some(l) = &a.lift {
        let Mode::Cantor { b } = plan.mode else { return Err(usage("--lift needs --mode cantor")) };
        let digits = l
            .split(';')
            .map(|p| {
                let v = u64_list(p)?;
                if v.len() != 2 {
                    return Err(usage(format!("bad digit pair {p:?}")));
                }
                Ok((v[0] as u32, v[1] as u32))
            })
            .collect::<std::result::Result<Vec<_>, Fail>>()?;
        vec = cantor_lift(&vec, b, &digits)?;
        if let Some((i, j)) = verify_lift_digits(&vec, LIFT_CHECK_DEPTH)? {
            return Err(Fail(EXIT_CERT, format!("lifted coordinate {i} leaves its digit set at position {j}")));
        }
    }
    let mut vj = vec.to_json();
    vj["manifest"] = ctx.man.to_value();
    write_text(&a.out_dir.join("vector.json"), &pretty(&vj)).map_err(|e| usage(e.to_string()))?;
    write_text(&a.out_dir.join("sequence.json"), &pretty(&envelope(&ctx.man, &seq))).map_err(|e| usage(e.to_string()))?;
    let certs = envelope(&ctx.man, &seq.certificates);
    write_text(&a.out_dir.join("certificates.json"), &pretty(&certs)).map_err(|e| usage(e.to_string()))?;
    let a_dec: Vec<String> = seq.a.iter().map(|x| x.to_string()).collect();
    let summary = json!({
        "a": a_dec,
        "M": seq.big_m,
        "L": seq.l.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "certified": seq.all_certified(),
        "out_dir": a.out_dir,
    });
    println!("{}", serde_json::to_string(&summary).unwrap());
    if !seq.all_certified() {
        for c in &seq.certificates {
            for ch in c.checks.iter().filter(|c| !c.passed) {
                eprintln!("level {}: {} failed: {}", c.level, ch.name, ch.detail);
            }
        }
    }
    Ok(verdict(seq.all_certified()))
}

fn psi_rows(pts: &[(u64, &verify::SweepPoint)], m: usize) -> Vec<Vec<String>> {
    pts.iter()
        .map(|(q, p)| {
            vec![
                q.to_string(),
                p.upper.numer().to_string(),
                p.upper.denom().to_string(),
                p.argmin_q.to_string(),
                verify::dirichlet_product_decimal(*q, m, &p.upper),
            ]
        })
        .collect()
}

const PSI_HEADER: [&str; 5] = ["Q", "psi_num", "psi_den", "argmin_q", "dirichlet_product"];

fn cmd_verify(ctx: &Ctx, c: &VerifyCmd) -> Out {
    match c {
        VerifyCmd::Psi { v, q, qmax } => {
            let vec = load_vec(&v.vec)?;
            let norm = Norm::parse(&v.norm)?;
            let opts = ctx.opts(v.q_budget);
            match (q, qmax) {
                (Some(q), _) => {
                    let r = verify::psi(&vec, *q, &norm, &opts)?;
                    let prod = verify::dirichlet_product(*q, vec.m, &r.enclosure());
                    ctx.json(v.report.as_deref(), &json!({ "psi": r, "dirichlet_product": prod, "decimal": fmt_decimal(&r.upper, 12) }))?;
                }
                (None, Some(qmax)) => {
                    let pts = verify::psi_sweep(&vec, *qmax, &norm, &opts)?;
                    let mut full = Vec::with_capacity(*qmax as usize);
                    let mut i = 0;
                    for q in 1..=*qmax {
                        while i + 1 < pts.len() && pts[i + 1].q <= q {
                            i += 1;
                        }
                        full.push((q, &pts[i]));
                    }
                    match v.report.as_deref() {
                        Some(p) if is_csv(p) => write_csv(p, &ctx.man, &PSI_HEADER, &psi_rows(&full, vec.m)).map_err(usage)?,
                        r => ctx.json(r, &pts)?,
                    }
                }
                (None, None) => return Err(usage("pass --q or --qmax")),
            }
            Ok(0)
        }
        VerifyCmd::Sweep { v, qmax } => {
            let vec = load_vec(&v.vec)?;
            let pts = verify::psi_sweep(&vec, *qmax, &Norm::parse(&v.norm)?, &ctx.opts(v.q_budget))?;
            match v.report.as_deref() {
                Some(p) if is_csv(p) => {
                    let rows: Vec<_> = pts.iter().map(|p| (p.q, p)).collect();
                    write_csv(p, &ctx.man, &PSI_HEADER, &psi_rows(&rows, vec.m)).map_err(usage)?
                }
                r => ctx.json(r, &pts)?,
            }
            Ok(0)
        }
        VerifyCmd::C1 { v, from, to, phi, phi_factor } => {
            let vec = load_vec(&v.vec)?;
            let mut f = vec_phi(&vec, phi.as_ref())?;
            if let Some(k) = phi_factor {
                f = f.scaled(&real(k)?)?;
            }
            let to = match to {
                Some(t) => *t,
                None => {
                    let q = vec.checkpoint(1).ok_or_else(|| usage("no checkpoint; pass --to"))?;
                    num_traits::ToPrimitive::to_u64(&q).ok_or_else(|| usage("checkpoint exceeds u64"))?
                }
            };
            let r = verify::check_c1(&vec, &f, *from, to, &Norm::parse(&v.norm)?, &ctx.opts(v.q_budget))?;
            match v.report.as_deref() {
                Some(p) if is_csv(p) => {
                    let rows: Vec<Vec<String>> = r
                        .violations
                        .iter()
                        .map(|x| vec![x.q.to_string(), x.psi_upper.to_string(), x.indeterminate.to_string()])
                        .collect();
                    write_csv(p, &ctx.man, &["Q", "psi_upper", "indeterminate"], &rows).map_err(usage)?
                }
                rp => ctx.json(rp, &r)?,
            }
            Ok(verdict(r.passed()))
        }
        VerifyCmd::Checkpoint { v, f, tol, phi } => {
            let vec = load_vec(&v.vec)?;
            let fun = vec_phi(&vec, phi.as_ref())?;
            let r = verify::checkpoint_c2(&vec, &fun, *f, &rat(tol)?, &ctx.opts(v.q_budget))?;
            ctx.json(v.report.as_deref(), &r)?;
            Ok(verdict(r.passed))
        }
        VerifyCmd::C3 { v, target, levels } => {
            let vec = load_vec(&v.vec)?;
            let r = verify::check_c3(&vec, *target, *levels)?;
            ctx.json(v.report.as_deref(), &r)?;
            Ok(verdict(r.levels.iter().all(|l| l.passed)))
        }
        VerifyCmd::Theta { v } => {
            let vec = load_vec(&v.vec)?;
            let r = verify::theta_estimate(&vec, &Norm::parse(&v.norm)?, &ctx.opts(v.q_budget))?;
            ctx.json(v.report.as_deref(), &r)?;
            Ok(0)
        }
        VerifyCmd::Lambda { v, qmax } => {
            let vec = load_vec(&v.vec)?;
            let r = verify::lambda_estimate(&vec, *qmax, &ctx.opts(v.q_budget))?;
            ctx.json(v.report.as_deref(), &r)?;
            Ok(0)
        }
        VerifyCmd::Linform { v, qstar, y_budget } => {
            let vec = load_vec(&v.vec)?;
            let opts = ctx.opts(*y_budget);
            let rs = u64_list(qstar)?
                .into_iter()
                .map(|q| verify::psi_linear_form(&vec, q, &opts))
                .collect::<dirspec::Result<Vec<_>>>()?;
            ctx.json(v.report.as_deref(), &rs)?;
            Ok(0)
        }
    }
}

#[derive(serde::Deserialize)]
struct FalconerInput {
    p: Option<Vec<Value>>,
    eps: Option<Vec<Value>>,
    log2_p: Option<Vec<Value>>,
    log2_eps: Option<Vec<Value>>,
}

fn text_of(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn cmd_dims(ctx: &Ctx, c: &DimsCmd) -> Out {
    let result: Value = match c {
        DimsCmd::Falconer { input, gs0, depth } => {
            let r = match (input, gs0) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                    let inp: FalconerInput = serde_json::from_str(&text).map_err(|e| usage(e.to_string()))?;
                    match inp {
                        FalconerInput { p: Some(p), eps: Some(e), .. } => {
                            let p = p
                                .iter()
                                .map(|x| text_of(x).parse::<BigInt>().map_err(|_| usage(format!("bad P {x}"))))
                                .collect::<std::result::Result<Vec<_>, Fail>>()?;
                            let e = e.iter().map(|x| rat(&text_of(x))).collect::<std::result::Result<Vec<_>, Fail>>()?;
                            dims::falconer_exact(&p, &e)?
                        }
                        FalconerInput { log2_p: Some(p), log2_eps: Some(e), .. } => {
                            if p.len() != e.len() {
                                return Err(usage("log2_p and log2_eps lengths differ"));
                            }
                            let lv = p
                                .iter()
                                .zip(&e)
                                .map(|(a, b)| Ok(dims::FalconerLevel::from_log2(rat(&text_of(a))?, rat(&text_of(b))?)))
                                .collect::<std::result::Result<Vec<_>, Fail>>()?;
                            dims::falconer_lower_bound(&lv)?
                        }
                        _ => return Err(usage("input needs p/eps or log2_p/log2_eps")),
                    }
                }
                (None, Some(g)) => {
                    let parts: Vec<&str> = g.split(',').collect();
                    if parts.len() != 3 {
                        return Err(usage("--gs0 expects m,gamma1,gamma2"));
                    }
                    let m = parts[0].trim().parse::<usize>().map_err(|_| usage("bad m"))?;
                    dims::falconer_lower_bound(&dims::gs0_levels(m, &rat(parts[1])?, &rat(parts[2])?, *depth))?
                }
                _ => return Err(usage("pass --input or --gs0")),
            };
            json!({ "value": r.value.mid_f64(), "report": r })
        }
        DimsCmd::Ohlele { m, g1, g2 } => {
            let r = dims::ohlele_bounds(*m, &rat(g1)?, &rat(g2)?)?;
            json!({ "eq01_decimal": fmt_decimal(&r.eq01, 12), "eq02_decimal": fmt_decimal(&r.eq02, 12), "report": r })
        }
        DimsCmd::Hdd { m } => {
            let r = dims::hdd_bound(*m)?;
            json!({ "gamma2": r.gamma2_enclosure.mid_f64(), "bound": r.bound_enclosure.mid_f64(), "report": r })
        }
        DimsCmd::Cosinus { m } => {
            let r = dims::cosinus_check(*m)?;
            json!({ "value": r.value.mid_f64(), "ratio": r.ratio.mid_f64(), "report": r })
        }
        DimsCmd::Beides { m, lambda } => {
            let r = dims::beides_bound(*m, &rat(lambda)?)?;
            json!({ "bound": fmt_decimal(&r.bound, 12), "gamma2": fmt_decimal(&r.gamma2, 12), "report": r })
        }
        DimsCmd::Sigma { m, b, good } => bound_json(dims::sigma(*m, *b, *good)?),
        DimsCmd::Omega { b, r, good } => bound_json(dims::omega_cantor(*b, &real(r)?, *good)?),
        DimsCmd::Rem { m, tau } => bound_json(dims::lemma_rem(*m, &rat(tau)?)?),
        DimsCmd::Packing { m, gamma } => bound_json(dims::packing(*m, &rat(gamma)?)?),
    };
    ctx.json(None, &result)?;
    Ok(0)
}

fn bound_json(r: dims::DimBoundReport) -> Value {
    json!({ "value": r.value.mid_f64(), "report": r })
}

fn mid(i: &Interval) -> f64 {
    i.mid_f64()
}

fn cmd_transfer(ctx: &Ctx, c: &TransferCmd) -> Out {
    match c {
        TransferCmd::German { m, direction, x, u } => {
            let d: transfer::Direction = direction.parse()?;
            let r = transfer::german_map(*m, d, &real(x)?, &real(u)?)?;
            ctx.json(None, &json!({ "Y": mid(&r.y), "V": mid(&r.v), "report": r }))?;
            Ok(0)
        }
        TransferCmd::Fr { m, c, c_tilde } => {
            let r = transfer::fr_chain(*m, &rat(c)?)?;
            let inv = match c_tilde {
                Some(t) => Some(transfer::inverse_constant(*m, &rat(t)?)?),
                None => None,
            };
            ctx.json(None, &json!({ "c_star": mid(&r.c_star), "omega": mid(&r.omega), "report": r, "inverse": inv }))?;
            Ok(0)
        }
        TransferCmd::Kappa { m, log_c_star } => {
            let l = match log_c_star {
                Some(s) => Some(real(s)?.enclose(64)?),
                None => None,
            };
            let r = transfer::kappa_bt(*m, l.as_ref())?;
            ctx.json(None, &r)?;
            Ok(0)
        }
        TransferCmd::Verify { v, c, qstar, y_budget } => {
            let vec = load_vec(&v.vec)?;
            let r = transfer::transfer_verify(&vec, &rat(c)?, &u64_list(qstar)?, &ctx.opts(*y_budget))?;
            ctx.json(v.report.as_deref(), &r)?;
            Ok(verdict(r.passed()))
        }
    }
}

fn family(a: &FamilyArgs) -> std::result::Result<dirspec::construct::digits::DigitSetFamily, Fail> {
    let need = |o: &Option<String>, n: &str| o.clone().ok_or_else(|| usage(format!("--{n} is required for this kind")));
    let g2 = rat(&a.g2)?;
    let kind = match a.kind.as_str() {
        "s" => FamilyKind::S { gamma: rat(&need(&a.gamma, "gamma")?)?, eps: rat(&need(&a.eps, "eps")?)? },
        "q" => FamilyKind::Q { gamma1: rat(&need(&a.g1, "g1")?)?, gamma2: g2.clone() },
        "q1star" => FamilyKind::Q1Star { gamma1: rat(&need(&a.g1, "g1")?)?, gamma2: g2.clone() },
        "j" => FamilyKind::J { psi: ApproxFn::parse_descriptor(&need(&a.psi, "psi")?)? },
        k => return Err(usage(format!("unknown family kind {k:?}"))),
    };
    let ex = tor_exponents(a.m, &g2, a.s, a.levels)?;
    Ok(build_digit_family(&kind, &ex, a.m)?)
}

fn cmd_digits(ctx: &Ctx, c: &DigitsCmd) -> Out {
    match c {
        DigitsCmd::Family(a) => {
            let fam = family(a)?;
            let blocks: Vec<_> = (1..=a.m).map(|i| fam.free_blocks(i)).collect();
            ctx.json(a.report.as_deref(), &json!({ "family": fam, "free_blocks": blocks }))?;
        }
        DigitsCmd::Sample { fam: a, seed } => {
            let fam = family(a)?;
            let s = fam.sample(*seed)?;
            let strings: Vec<String> = s.iter().map(|d| d.digits.iter().map(|x| char::from(b'0' + *x as u8)).collect()).collect();
            ctx.json(a.report.as_deref(), &json!({ "seed": seed, "digits": strings }))?;
        }
    }
    Ok(0)
}

fn variant<T: Serialize>(x: &T) -> String {
    match serde_json::to_value(x) {
        Ok(Value::Object(o)) => o.keys().next().cloned().unwrap_or_default().to_lowercase(),
        Ok(Value::String(s)) => s.to_lowercase(),
        _ => String::new(),
    }
}

fn command_name(c: &Cmd) -> String {
    match c {
        Cmd::Construct(_) => "construct".into(),
        Cmd::Verify(v) => format!("verify {}", variant(v)),
        Cmd::Dims(v) => format!("dims {}", variant(v)),
        Cmd::Transfer(v) => format!("transfer {}", variant(v)),
        Cmd::Digits(v) => format!("digits {}", variant(v)),
    }
}

fn run(cli: Cli) -> Out {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let mut config = serde_json::to_value(&cli).unwrap_or(Value::Null);
    if let Some(o) = config.as_object_mut() {
        // only settings that can change results enter the hash
        o.remove("config");
        o.remove("workers");
    }
    let ctx = Ctx { man: Manifest::new(&command_name(&cli.cmd), config), exec, chunk: cli.chunk };
    let go = || match &cli.cmd {
        Cmd::Construct(a) => cmd_construct(&ctx, a),
        Cmd::Verify(c) => cmd_verify(&ctx, c),
        Cmd::Dims(c) => cmd_dims(&ctx, c),
        Cmd::Transfer(c) => cmd_transfer(&ctx, c),
        Cmd::Digits(c) => cmd_digits(&ctx, c),
    };
    match cli.workers {
        Some(n) => with_workers(n, go).map_err(Fail::from)?,
        None => go(),
    }
}

/// Splice options from `--config` between the command path and the rest.
fn expand_config(argv: Vec<String>) -> std::result::Result<Vec<String>, Fail> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut path = None;
    let mut it = argv.into_iter();
    let bin = it.next().unwrap_or_else(|| "dirspec".into());
    while let Some(a) = it.next() {
        if a == "--config" {
            path = Some(it.next().ok_or_else(|| Fail(EXIT_USAGE, "--config needs a value".into()))?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(std::iter::once(bin).chain(rest).collect());
    };
    let text = std::fs::read_to_string(&path).map_err(|e| Fail(EXIT_USAGE, format!("{path}: {e}")))?;
    let cfg: Value = serde_json::from_str(&text).map_err(|e| Fail(EXIT_USAGE, format!("{path}: {e}")))?;
    let obj = cfg.as_object().ok_or_else(|| Fail(EXIT_USAGE, "config must be a JSON object".into()))?;
    let (cmd, tail): (Vec<String>, Vec<String>) = match obj.get("command") {
        Some(Value::Array(c)) => (c.iter().map(text_of).collect(), rest),
        Some(Value::String(c)) => (c.split_whitespace().map(String::from).collect(), rest),
        _ => {
            let n = rest.iter().take_while(|a| !a.starts_with('-')).count();
            let tail = rest.split_off(n);
            (rest, tail)
        }
    };
    let mut out = vec![bin];
    out.extend(cmd);
    for (k, v) in obj {
        if k == "command" {
            continue;
        }
        let flag = format!("--{}", k.replace('_', "-"));
        match v {
            Value::Bool(true) => out.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(xs) => {
                out.push(flag);
                out.push(xs.iter().map(text_of).collect::<Vec<_>>().join(","));
            }
            other => {
                out.push(flag);
                out.push(text_of(other));
            }
        }
    }
    out.extend(tail);
    Ok(out)
}

fn main() -> ExitCode {
    let argv = match expand_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(code);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
