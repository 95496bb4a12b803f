// SPDX-License-Identifier: Apache-2.0

//! Command-line front end. Every command prints a deterministic text report,
//! or a JSON document with `"schema_version": 1` under `--json`.
//!
//! Exit codes: 0 on success, 1 when a verification fails or a computation
//! cannot finish, 2 on usage errors.

mod cache;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::arith::ring::rational_to_zp;
use crate::arith::{DirichletChar, Rationals, Ring};
use crate::dist::ArithWeight;
use crate::error::{Error, Result};
use crate::modsym::{eigensymbols, solve_symbol_space, SignChoice};
use crate::ocsymb::{lift_eigensymbol, slope_data, slope_projector, solve_oc_space, symbol_to_zp, OCSymbol, OcParams};
use crate::shintani::verify::{self, VerifyReport};
use crate::shintani::{default_character, theta_classical, theta_oc};

pub use cache::CACHE_ENV;

const SCHEMA_VERSION: u32 = 1;
const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser, Debug)]
#[command(name = "shintani", version, about = "Classical and overconvergent Shintani liftings of modular symbols")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomly drawn symbols.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quadratic form classes.
    Qf {
        #[command(subcommand)]
        cmd: QfCmd,
    },
    /// Classical modular symbol spaces.
    Modsym {
        #[command(subcommand)]
        cmd: ModsymCmd,
    },
    /// Shintani lifts.
    Shintani {
        #[command(subcommand)]
        cmd: ShintaniCmd,
    },
    /// U_p slopes on overconvergent symbols.
    Slopes(SlopesArgs),
    /// Check an identity and report the first failing coefficient.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Subcommand, Debug)]
enum QfCmd {
    /// Representatives of the Gamma_0(M)-classes of discriminant D.
    Classes {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        disc: i64,
    },
}

#[derive(Args, Debug)]
struct SpaceArgs {
    #[arg(long)]
    level: u64,
    #[arg(long)]
    weight: usize,
    /// Character: `trivial` or the conductor of a quadratic character.
    #[arg(long = "char")]
    character: Option<String>,
}

#[derive(Subcommand, Debug)]
enum ModsymCmd {
    /// Dimension and basis of the symbol space.
    Basis(SpaceArgs),
    /// Rational Hecke eigensymbols.
    Eigen {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_enum, default_value = "both")]
        sign: SignArg,
        /// Largest prime l whose T_l is used.
        #[arg(long, default_value_t = 13)]
        bound: u64,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum SignArg {
    Plus,
    Minus,
    Both,
}

#[derive(Args, Debug, Clone, Copy)]
struct OcArgs {
    #[arg(long)]
    p: u64,
    #[arg(long = "tame-n", default_value_t = 1)]
    tame_n: u64,
    /// Moment degree bound T.
    #[arg(long, default_value_t = 8)]
    moments: usize,
    /// p-adic precision M.
    #[arg(long = "padic-prec", default_value_t = 8)]
    padic_prec: u32,
}

#[derive(Subcommand, Debug)]
enum ShintaniCmd {
    /// Theta(phi) for each basis symbol of weight 2k.
    Classical {
        #[arg(long)]
        level: u64,
        /// k; the lift has weight k + 3/2.
        #[arg(long)]
        weight: usize,
        /// Character chi (symbols carry chi^2): `trivial` or a quadratic conductor.
        #[arg(long = "char")]
        character: Option<String>,
        #[arg(long, default_value_t = 20)]
        nmax: usize,
    },
    /// Theta(Phi) for an overconvergent symbol.
    Oc {
        #[command(flatten)]
        oc: OcArgs,
        #[arg(long, default_value_t = 10)]
        nmax: usize,
        /// Use this basis element instead of a random symbol.
        #[arg(long)]
        basis: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct SlopesArgs {
    #[command(flatten)]
    oc: OcArgs,
    /// Report slopes up to h and the rank of the slope <= h projector.
    #[arg(long)]
    h: Option<i64>,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Source {
    Random,
    Eigen,
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Theta(phi | iota) = -Theta(phi).
    Involution {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        weight: usize,
        #[arg(long = "char")]
        character: Option<String>,
        #[arg(long, default_value_t = 50)]
        nmax: usize,
    },
    /// Theta(phi | T_l) = Theta(phi) | T_{l^2}.
    Equivariance {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        weight: usize,
        #[arg(long = "char")]
        character: Option<String>,
        #[arg(long, value_delimiter = ',', default_value = "3,7")]
        l: Vec<u64>,
        #[arg(long, default_value_t = 30)]
        nmax: usize,
    },
    /// Specializations of Theta(Phi) agree with classical lifts.
    Interpolation {
        #[command(flatten)]
        oc: OcArgs,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        k: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        nmax: usize,
        /// Allowed precision loss.
        #[arg(long, default_value_t = 2)]
        loss: u32,
        /// Random symbol, or the lift of a weight 2 ordinary eigensymbol.
        #[arg(long, value_enum, default_value = "random")]
        source: Source,
    },
    /// Theta(Phi | T) = Theta(Phi) | T on formal expansions.
    OcHecke {
        #[command(flatten)]
        oc: OcArgs,
        #[arg(long, value_delimiter = ',', default_value = "3,7")]
        l: Vec<u64>,
        #[arg(long, default_value_t = 10)]
        nmax: usize,
    },
}

/// Output of a command: text, JSON, and whether it counts as a pass.
struct Outcome {
    text: String,
    json: Value,
    ok: bool,
}

impl Outcome {
    fn info(text: String, json: Value) -> Self {
        Outcome { text, json, ok: true }
    }

    fn report(r: &VerifyReport) -> Self {
        Outcome { text: r.render(), json: r.to_json(), ok: r.passed() }
    }
}

/// Runs the command line with the process's standard streams.
pub fn run<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line writing to the given streams; returns the exit code.
pub fn run_with<I, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = OsString>,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let cache_dir = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    match pool.install(|| dispatch(&cli, cache_dir)) {
        Ok(o) => emit(o, cli.json, out),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if is_usage_error(&e) {
                2
            } else {
                1
            }
        }
    }
}

fn emit<W: Write>(o: Outcome, as_json: bool, out: &mut W) -> i32 {
    let _ = if as_json {
        let mut v = o.json;
        if let Value::Object(m) = &mut v {
            m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        }
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable"))
    } else {
        write!(out, "{}", o.text)
    };
    i32::from(!o.ok)
}

fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidInput(_) | Error::BadIndex(..) | Error::DegreeMismatch(..) | Error::InsufficientMoments { .. }
    )
}

fn parse_character(spec: Option<&str>, modulus: u64, default: impl FnOnce() -> DirichletChar) -> Result<DirichletChar> {
    match spec {
        None => Ok(default()),
        Some("trivial") | Some("1") => Ok(DirichletChar::trivial(modulus)),
        Some(s) => {
            let q: u64 = s.parse().map_err(|_| Error::InvalidInput(format!("character `{s}`: expected `trivial` or a conductor")))?;
            if modulus % q != 0 {
                return Err(Error::InvalidInput(format!("conductor {q} does not divide {modulus}")));
            }
            DirichletChar::quadratic(q)?.lift(modulus)
        }
    }
}

fn character_label(chi: &DirichletChar) -> String {
    let m = chi.modulus();
    let units: Vec<i64> = (1..m as i64).filter(|&a| chi.eval(a) != 0).collect();
    if units.iter().all(|&a| chi.eval(a) == 1) {
        return format!("trivial mod {m}");
    }
    let vals: Vec<String> = units.iter().map(|&a| format!("{a}:{}", chi.eval(a))).collect();
    format!("mod {m} [{}]", vals.join(" "))
}

fn oc_params(a: &OcArgs) -> Result<OcParams> {
    if a.p < 5 {
        return Err(Error::InvalidInput(format!("p = {} must be at least 5", a.p)));
    }
    OcParams::new(a.p, a.tame_n, a.padic_prec, a.moments)
}

fn random_oc_symbol(params: OcParams, seed: u64) -> Result<OCSymbol> {
    let space = solve_oc_space(params)?;
    if space.dimension() == 0 {
        return Err(Error::InvalidInput("the overconvergent space is zero".into()));
    }
    Ok(space.random_element(&mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Lift of the first minus eigensymbol of weight 2 at level `Np` whose
/// `U_p` eigenvalue is a p-adic unit.
fn ordinary_lift(params: OcParams) -> Result<OCSymbol> {
    let level = params.level();
    let ring = params.ring();
    let rep = eigensymbols(level, 0, &DirichletChar::trivial(level), SignChoice::Minus, params.p.max(7))?;
    let kappa = ArithWeight::trivial(0, params.n, params.p);
    for sys in &rep.systems {
        let Some(a_p) = sys.eigenvalues.get(&params.p).and_then(|a| rational_to_zp(a, &ring)) else { continue };
        if !a_p.is_unit() {
            continue;
        }
        let phi = symbol_to_zp(&sys.symbol, ring)?;
        return Ok(lift_eigensymbol(params, &phi, &kappa, &a_p)?.0);
    }
    Err(Error::InvalidInput(format!("no rational ordinary eigensymbol at level {level}")))
}

fn dispatch(cli: &Cli, cache_dir: Option<PathBuf>) -> Result<Outcome> {
    match &cli.command {
        Command::Qf { cmd: QfCmd::Classes { level, disc } } => qf_classes(*level, *disc, cache_dir),
        Command::Modsym { cmd } => match cmd {
            ModsymCmd::Basis(s) => modsym_basis(s),
            ModsymCmd::Eigen { space, sign, bound } => modsym_eigen(space, *sign, *bound),
        },
        Command::Shintani { cmd } => match cmd {
            ShintaniCmd::Classical { level, weight, character, nmax } => {
                shintani_classical(*level, *weight, character.as_deref(), *nmax)
            }
            ShintaniCmd::Oc { oc, nmax, basis } => shintani_oc(oc, *nmax, *basis, cli.seed),
        },
        Command::Slopes(a) => slopes(a),
        Command::Verify { cmd } => verify_cmd(cmd, cli.seed),
    }
}

fn qf_classes(level: u64, disc: i64, cache_dir: Option<PathBuf>) -> Result<Outcome> {
    if level == 0 || disc <= 0 {
        return Err(Error::InvalidInput("need M >= 1 and D > 0".into()));
    }
    let classes = cache::classes(cache_dir.as_deref(), level, disc)?;
    let mut text = format!("level: {level}\ndiscriminant: {disc}\nclasses: {}\n", classes.len());
    for q in &classes {
        let _ = writeln!(text, "  {q}");
    }
    let forms: Vec<Value> = classes.iter().map(|q| json!([q.a, q.b, q.c])).collect();
    let json = json!({"command": "qf classes", "level": level, "disc": disc, "count": classes.len(), "classes": forms});
    Ok(Outcome::info(text, json))
}

fn modsym_basis(s: &SpaceArgs) -> Result<Outcome> {
    let chi = parse_character(s.character.as_deref(), s.level, || DirichletChar::trivial(s.level))?;
    let space = solve_symbol_space(s.level, s.weight, &chi, Rationals)?;
    let r = Rationals;
    let mut text = format!(
        "level: {}\nweight: {}\ncharacter: {}\ngenerators: {}\ndimension: {}\n",
        s.level,
        s.weight,
        character_label(&chi),
        space.manin().len(),
        space.dimension()
    );
    let mut basis = Vec::new();
    for (i, b) in space.basis.iter().enumerate() {
        let vals: Vec<Vec<String>> = b.values.iter().map(|v| v.iter().map(|x| r.render(x)).collect()).collect();
        let flat: Vec<String> = vals.iter().map(|v| format!("[{}]", v.join(" "))).collect();
        let _ = writeln!(text, "basis {i}: {}", flat.join(" "));
        basis.push(json!(vals));
    }
    let json = json!({
        "command": "modsym basis",
        "level": s.level, "weight": s.weight, "character": chi,
        "generators": space.manin().len(), "dimension": space.dimension(), "basis": basis,
    });
    Ok(Outcome::info(text, json))
}

fn modsym_eigen(s: &SpaceArgs, sign: SignArg, bound: u64) -> Result<Outcome> {
    let chi = parse_character(s.character.as_deref(), s.level, || DirichletChar::trivial(s.level))?;
    let sign = match sign {
        SignArg::Plus => SignChoice::Plus,
        SignArg::Minus => SignChoice::Minus,
        SignArg::Both => SignChoice::Both,
    };
    let rep = eigensymbols(s.level, s.weight, &chi, sign, bound)?;
    let mut text = format!(
        "level: {}\nweight: {}\ncharacter: {}\nsystems: {}\n",
        s.level,
        s.weight,
        character_label(&chi),
        rep.systems.len()
    );
    let mut systems = Vec::new();
    for (i, sys) in rep.systems.iter().enumerate() {
        let vals: Vec<String> = sys.eigenvalues.iter().map(|(l, a)| format!("a_{l} = {a}")).collect();
        let _ = writeln!(text, "system {i} (multiplicity {}): {}", sys.multiplicity, vals.join(", "));
        let map: serde_json::Map<String, Value> =
            sys.eigenvalues.iter().map(|(l, a)| (l.to_string(), json!(a.to_string()))).collect();
        systems.push(json!({"multiplicity": sys.multiplicity, "eigenvalues": map}));
    }
    for e in &rep.skipped {
        let _ = writeln!(text, "skipped: {e}");
    }
    let skipped: Vec<String> = rep.skipped.iter().map(|e| e.to_string()).collect();
    let json = json!({
        "command": "modsym eigen",
        "level": s.level, "weight": s.weight, "character": chi,
        "systems": systems, "skipped": skipped,
    });
    Ok(Outcome::info(text, json))
}

fn shintani_classical(level: u64, k: usize, character: Option<&str>, nmax: usize) -> Result<Outcome> {
    let chi = parse_character(character, level, || default_character(level, k))?;
    let space = solve_symbol_space(level, 2 * k, &chi.square(), Rationals)?;
    let r = Rationals;
    let mut text = format!(
        "level: {level}\nweight: {}/2\ncharacter: {}\ndimension: {}\n",
        2 * k + 3,
        character_label(&chi),
        space.dimension()
    );
    let mut lifts = Vec::new();
    for (i, phi) in space.basis.iter().enumerate() {
        let theta = theta_classical(phi, k, &chi, nmax)?;
        let terms: Vec<String> = (1..=nmax)
            .filter_map(|n| theta.coeff(n).filter(|c| !r.is_zero(c)).map(|c| format!("{}*q^{n}", r.render(&c))))
            .collect();
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        let _ = writeln!(text, "Theta(basis {i}) = {body} + O(q^{})", nmax + 1);
        lifts.push(theta.to_json());
    }
    let json = json!({"command": "shintani classical", "level": level, "k": k, "character": chi, "nmax": nmax, "lifts": lifts});
    Ok(Outcome::info(text, json))
}

fn shintani_oc(a: &OcArgs, nmax: usize, basis: Option<usize>, seed: u64) -> Result<Outcome> {
    let params = oc_params(a)?;
    let phi = match basis {
        Some(i) => {
            let space = solve_oc_space(params)?;
            if i >= space.dimension() {
                return Err(Error::BadIndex(i as u64, format!("space has dimension {}", space.dimension())));
            }
            space.basis_element(i)
        }
        None => random_oc_symbol(params, seed)?,
    };
    let theta = theta_oc(&phi, nmax)?;
    let ring = params.ring();
    let mut text = format!(
        "p: {}\nN: {}\nT: {}\nM: {}\nsymbol: {}\n",
        params.p,
        params.n,
        params.t,
        params.m,
        basis.map_or(format!("random (seed {seed})"), |i| format!("basis {i}"))
    );
    for (i, c) in theta.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let _ = writeln!(text, "n = {}:", i + 1);
        for (tag, nu) in c.right.components() {
            if nu.is_zero() {
                continue;
            }
            for cl in 1..ring.p as i64 {
                let ms: Vec<String> = (0..=nu.degree_bound()).map(|d| nu.get(cl, d).map(|x| x.residue().to_string())).collect::<Result<_>>()?;
                let _ = writeln!(text, "  [{tag}] {cl} mod {}: {}", ring.p, ms.join(" "));
            }
        }
    }
    let _ = writeln!(text, "nonzero coefficients: {}", theta.coeffs.iter().filter(|c| !c.is_zero()).count());
    let mut json = theta.to_json();
    json["command"] = json!("shintani oc");
    json["T"] = json!(params.t);
    json["seed"] = json!(basis.is_none().then_some(seed));
    Ok(Outcome::info(text, json))
}

fn slopes(a: &SlopesArgs) -> Result<Outcome> {
    let params = oc_params(&a.oc)?;
    let space = solve_oc_space(params)?;
    let data = slope_data(&space)?;
    let h = a.h.map(Ratio::from);
    let shown = match h {
        Some(h) => data.slopes_up_to(h),
        None => data.slopes(),
    };
    let mut text = format!(
        "p: {}\nN: {}\nT: {}\nM: {}\ndimension: {}\n",
        params.p,
        params.n,
        params.t,
        params.m,
        space.dimension()
    );
    if let Some(h) = h {
        let _ = writeln!(text, "h: {h}");
    }
    for s in &shown {
        let bound = if s.exact { "" } else { " (at least)" };
        let _ = writeln!(text, "slope {}{bound}: multiplicity {}", s.value, s.multiplicity);
    }
    let mut json = data.to_json(h);
    json["command"] = json!("slopes");
    if let Some(h) = h {
        match slope_projector(&space, &data, h) {
            Ok(pr) => {
                let _ = writeln!(text, "projector: rank {}, precision loss {}", pr.rank, pr.loss);
                json["projector"] = json!({"rank": pr.rank, "loss": pr.loss});
            }
            Err(e) => {
                let _ = writeln!(text, "projector: {e}");
                json["projector"] = json!({"error": e.to_string()});
            }
        }
    }
    Ok(Outcome::info(text, json))
}

fn merge(theorem: &'static str, params: Value, reports: Vec<VerifyReport>) -> VerifyReport {
    VerifyReport { theorem, params, checks: reports.into_iter().flat_map(|r| r.checks).collect() }
}

fn verify_cmd(cmd: &VerifyCmd, seed: u64) -> Result<Outcome> {
    let report = match cmd {
        VerifyCmd::Involution { level, weight, character, nmax } => {
            let chi = parse_character(character.as_deref(), *level, || default_character(*level, *weight))?;
            verify::verify_involution(*level, *weight, &chi, *nmax)?
        }
        VerifyCmd::Equivariance { level, weight, character, l, nmax } => {
            let chi = parse_character(character.as_deref(), *level, || default_character(*level, *weight))?;
            verify::verify_equivariance(*level, *weight, &chi, l, *nmax)?
        }
        VerifyCmd::Interpolation { oc, k, nmax, loss, source } => {
            let params = oc_params(oc)?;
            let phi = match source {
                Source::Random => random_oc_symbol(params, seed)?,
                Source::Eigen => ordinary_lift(params)?,
            };
            let theta = theta_oc(&phi, *nmax)?;
            let level = params.level();
            let mut reports = Vec::new();
            for &k in k {
                let kappa = ArithWeight::new(k, &default_character(level, k), params.n, params.p)?;
                reports.push(verify::verify_interpolation_with(&phi, &theta, &kappa, *loss)?);
            }
            let p = json!({
                "p": params.p, "N": params.n, "M": params.m, "T": params.t, "k": k, "nmax": nmax,
                "loss": loss, "source": format!("{source:?}").to_lowercase(), "seed": seed,
            });
            merge(verify::INTERPOLATION, p, reports)
        }
        VerifyCmd::OcHecke { oc, l, nmax } => {
            let params = oc_params(oc)?;
            let phi = random_oc_symbol(params, seed)?;
            let mut r = verify::verify_oc_hecke(&phi, l, *nmax)?;
            r.params["seed"] = json!(seed);
            r
        }
    };
    Ok(Outcome::report(&report))
}
