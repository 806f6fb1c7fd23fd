//! The `motexp` command line.
//!
//! Exit codes: 0 success, 1 a checked statement failed, 2 usage, parse or
//! configuration error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::characters::{enumerate_characters, standard_psi, Character};
use crate::cyclo::Cyclo;
use crate::error::Error;
use crate::eval::{eval_expfun, eval_motfun, in_domain, EvalDomain, Point};
use crate::fourier::{check_norm_sandwich, find_peak_character, plancherel_check, FiniteAbelianGroup, GroupFunction};
use crate::ir::{parse_spec, validate, Body, Spec};
use crate::lindep::{combination_residuals, cramer_coeffs, dependence_test, find_witness_w, Dependence};
use crate::localfield::LocalFieldDesc;
use crate::reduction::{required_depth, tilde_h, witness_psi1};
use crate::transfer::{self, parse_rational_vector, RunManifest, SweepConfig, TransferReport};

#[derive(Parser, Debug)]
#[command(name = "motexp", version, about = "Exact evaluation, reduction and transfer sweeps for motivic exponential functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a spec at points of one field.
    Eval(EvalArgs),
    /// Run a transfer statement over a range of primes.
    Sweep(SweepArgs),
    /// Print the squared-modulus reduction and witness characters.
    Reduce(ReduceArgs),
    /// Decide linear dependence and recover coefficients.
    Lindep(LindepArgs),
    /// Fourier bounds on a random function of a finite abelian group.
    FourierDemo(FourierArgs),
}

#[derive(Args, Debug, Clone)]
pub struct PointArgs {
    /// Field as `kind,p,f,precision`, e.g. `eq,7,1,8` or `mixed,5,1,8`.
    #[arg(long)]
    pub field: String,
    /// A point, `name=value; ...` or a bare value for one-variable specs.
    #[arg(long)]
    pub x: Option<String>,
    /// A sampling window, e.g. `x: vf [0, 2] digits 2; u: rf`.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, default_value_t = 16)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Character depth.
    #[arg(long)]
    pub depth: Option<u32>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    pub spec: PathBuf,
    #[command(flatten)]
    pub at: PointArgs,
    /// A single member of the depth-`d` family, by index.
    #[arg(long)]
    pub psi: Option<u64>,
    /// Also write the values as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Statement {
    Bound,
    Lincomb,
    Coeff,
    Dep,
    Rigidity,
    Factor,
}

impl Statement {
    fn name(self) -> &'static str {
        match self {
            Statement::Bound => "bound",
            Statement::Lincomb => "lincomb",
            Statement::Coeff => "coeff",
            Statement::Dep => "dep",
            Statement::Rigidity => "rigidity",
            Statement::Factor => "factor",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Both,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    pub statement: Statement,
    /// Spec files; for `bound` and `lincomb` the last one is `G`.
    #[arg(required = true)]
    pub specs: Vec<PathBuf>,
    /// A `config { ... }` file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `kind,p,f,precision`; sets `f` and the precision, and `p` when no range is given.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub pmin: Option<u32>,
    #[arg(long)]
    pub pmax: Option<u32>,
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long)]
    pub max_depth: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub ygrid: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub ysamples: Option<usize>,
    /// A coefficient vector such as `1,-1/2`; repeatable.
    #[arg(long = "c", allow_hyphen_values = true)]
    pub c: Vec<String>,
    #[arg(long)]
    pub random_c: Option<usize>,
    /// A VF term added to the profile map; repeatable.
    #[arg(long)]
    pub profile: Vec<String>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Both)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    pub spec: PathBuf,
    #[command(flatten)]
    pub at: PointArgs,
}

#[derive(Args, Debug)]
pub struct LindepArgs {
    #[arg(required = true)]
    pub specs: Vec<PathBuf>,
    #[command(flatten)]
    pub at: PointArgs,
    /// Values of the `y` variables, `name=value; ...`.
    #[arg(long)]
    pub y: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub psi: u64,
    /// Recover `G = Σ c_i H_i` for this spec by Cramer's rule.
    #[arg(long)]
    pub target: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FourierArgs {
    /// Invariant factors `n_1 | n_2 | ...`.
    #[arg(long, default_value = "2,6")]
    pub group: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of points in the support of the peak-character demo.
    #[arg(long, default_value_t = 3)]
    pub support: usize,
}

/// Why a command stopped.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Parses the arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let r = match cli.command {
        Command::Eval(a) => cmd_eval(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Reduce(a) => cmd_reduce(&a),
        Command::Lindep(a) => cmd_lindep(&a),
        Command::FourierDemo(a) => cmd_fourier(&a),
    };
    match r {
        Ok(()) => 0,
        Err(Failure::Violation(msg)) => {
            eprintln!("{msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

/// Reads, parses and validates a spec; diagnostics carry the file name.
pub fn load_spec(path: &Path) -> std::result::Result<Spec, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let spec = parse_spec(&text).map_err(|e| match e {
        Error::Parse { line, col, msg } => Failure::Usage(format!("{}:{line}:{col}: {msg}", path.display())),
        other => Failure::Usage(format!("{}: {other}", path.display())),
    })?;
    let mut errors = Vec::new();
    for d in validate(&spec) {
        if d.warning {
            eprintln!("{}: {d}", path.display());
        } else {
            errors.push(format!("{}: {d}", path.display()));
        }
    }
    if !errors.is_empty() {
        return Err(Failure::Usage(errors.join("\n")));
    }
    Ok(spec)
}

fn points(spec: &Spec, field: &LocalFieldDesc, at: &PointArgs) -> std::result::Result<Vec<Point>, Failure> {
    match (&at.x, &at.grid) {
        (Some(_), Some(_)) => Err(Failure::Usage("give either --x or --grid".into())),
        (Some(x), None) => Ok(vec![Point::parse(spec, field, x)?]),
        (None, Some(g)) => {
            let dom = EvalDomain::parse(g)?;
            let decls: Vec<_> = spec.vars.iter().map(|v| (v.name.clone(), v.sort)).collect();
            dom.check_sorts(&decls)?;
            let mut rng = ChaCha8Rng::seed_from_u64(at.seed);
            let mut out = Vec::new();
            for g in transfer::grid_points(&dom, field.q(), at.samples, &mut rng)? {
                let x = g.realize(field)?;
                if in_domain(spec, field, &x)? {
                    out.push(x);
                }
            }
            if out.is_empty() {
                return Err(Failure::Usage("no grid point lies in X".into()));
            }
            Ok(out)
        }
        (None, None) if spec.vars.is_empty() => Ok(vec![Point::new()]),
        (None, None) => Err(Failure::Usage("give a point with --x or a window with --grid".into())),
    }
}

fn float(z: &Cyclo) -> String {
    let c = z.to_complex();
    format!("{:.6}{:+.6}i", c.re, c.im)
}

fn cmd_eval(a: &EvalArgs) -> CmdResult {
    let spec = load_spec(&a.spec)?;
    let field = LocalFieldDesc::parse_args(&a.at.field)?;
    let pts = points(&spec, &field, &a.at)?;
    let mut rows = Vec::new();
    if let Body::Mot(_) = spec.body {
        for x in &pts {
            let v = eval_motfun(&spec, &field, x)?;
            println!("{x}\t{v}");
            rows.push((x.to_string(), String::new(), Cyclo::from_rational(&v)));
        }
    } else {
        let chars: Vec<Character> = match (a.psi, a.at.depth) {
            (Some(i), d) => vec![Character::new(&field, d.unwrap_or(1), i)?],
            (None, Some(d)) => enumerate_characters(&field, d)?,
            (None, None) if spec.has_residue_only_oscillation() => vec![standard_psi(&field)],
            (None, None) => {
                let mut d = 1;
                for x in &pts {
                    d = d.max(required_depth(&[&spec], &field, x)?);
                }
                enumerate_characters(&field, d)?
            }
        };
        for x in &pts {
            for psi in &chars {
                let v = eval_expfun(&spec, &field, psi, x)?;
                println!("{x}\tpsi #{}\t{v}\t{}", psi.index(), float(&v));
                rows.push((x.to_string(), psi.index().to_string(), v));
            }
        }
    }
    if let Some(path) = &a.csv {
        let mut w = csv::Writer::from_path(path).map_err(|e| Failure::Usage(e.to_string()))?;
        let io = |e: csv::Error| Failure::Usage(e.to_string());
        w.write_record(["point", "psi", "exact", "re", "im", "abs2"]).map_err(io)?;
        for (x, psi, v) in rows {
            let c = v.to_complex();
            w.write_record([x, psi, v.to_string(), c.re.to_string(), c.im.to_string(), v.abs2().to_complex().re.to_string()])
                .map_err(io)?;
        }
        w.flush().map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(())
}

/// The config file (or defaults) with every given flag applied on top.
pub fn sweep_config(a: &SweepArgs) -> std::result::Result<SweepConfig, Failure> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            SweepConfig::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        None => SweepConfig::default(),
    };
    if let Some(f) = &a.field {
        let desc = LocalFieldDesc::parse_args(f)?;
        cfg.f = desc.f();
        cfg.precision = desc.precision();
        if a.pmin.is_none() && a.pmax.is_none() {
            cfg.p_min = desc.p();
            cfg.p_max = desc.p();
        }
    }
    macro_rules! set {
        ($flag:expr, $field:expr) => {
            if let Some(v) = $flag {
                $field = v;
            }
        };
    }
    set!(a.pmin, cfg.p_min);
    set!(a.pmax, cfg.p_max);
    set!(a.depth, cfg.depth);
    set!(a.seed, cfg.seed);
    set!(a.samples, cfg.samples);
    set!(a.ysamples, cfg.y_samples);
    set!(a.random_c, cfg.random_c);
    set!(a.tolerance, cfg.tolerance);
    match a.max_depth {
        Some(m) => cfg.max_depth = m,
        None => cfg.max_depth = cfg.max_depth.max(cfg.depth),
    }
    if let Some(g) = &a.grid {
        cfg.grid = EvalDomain::parse(g)?;
    }
    if let Some(g) = &a.ygrid {
        cfg.y_grid = EvalDomain::parse(g)?;
    }
    if !a.c.is_empty() {
        cfg.c_grid = a.c.iter().map(|c| parse_rational_vector(c)).collect::<crate::Result<_>>()?;
    }
    if !a.profile.is_empty() {
        cfg.profile = a.profile.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn need(specs: &[Spec], min: usize, what: &str) -> CmdResult {
    if specs.len() < min {
        return Err(Failure::Usage(format!("`sweep {what}` needs at least {min} spec files")));
    }
    Ok(())
}

fn run_statement(st: Statement, specs: &[Spec], cfg: &SweepConfig) -> std::result::Result<TransferReport, Failure> {
    let refs: Vec<&Spec> = specs.iter().collect();
    let report = match st {
        Statement::Bound => {
            if specs.len() != 2 {
                return Err(Failure::Usage("`sweep bound` takes H and G".into()));
            }
            transfer::check_bound_transfer(&specs[0], &specs[1], cfg)?
        }
        Statement::Lincomb => {
            need(specs, 2, "lincomb")?;
            let (g, hs) = refs.split_last().expect("nonempty");
            transfer::check_bound_transfer_lincomb(hs, g, cfg)?
        }
        Statement::Coeff => {
            let c = cfg
                .c_grid
                .first()
                .ok_or_else(|| Failure::Usage("`sweep coeff` needs a coefficient vector (--c)".into()))?;
            transfer::check_coeff_transfer(&refs, c, cfg)?
        }
        Statement::Dep => transfer::check_dependence_transfer(&refs, cfg)?,
        Statement::Rigidity => {
            need(specs, 1, "rigidity")?;
            transfer::check_rf_zz_rigidity(&specs[0], cfg)?
        }
        Statement::Factor => {
            need(specs, 1, "factor")?;
            transfer::check_factorization(&specs[0], cfg)?
        }
    };
    Ok(report)
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or("-".into(), ToString::to_string)
}

fn cmd_sweep(a: &SweepArgs) -> CmdResult {
    let cfg = sweep_config(a)?;
    let specs = a.specs.iter().map(|p| load_spec(p)).collect::<std::result::Result<Vec<_>, _>>()?;
    let mut report = run_statement(a.statement, &specs, &cfg)?;
    let mut inputs: Vec<String> = a.specs.iter().map(|p| p.display().to_string()).collect();
    if let Some(c) = &a.config {
        inputs.push(c.display().to_string());
    }
    report.manifest = RunManifest::new(
        vec!["motexp".into(), "sweep".into(), a.statement.name().into()],
        inputs,
        cfg.clone(),
    );
    fs::create_dir_all(&a.out).map_err(|e| Failure::Usage(format!("{}: {e}", a.out.display())))?;
    let stem = a.out.join(a.statement.name());
    let write = |ext: &str, body: String| {
        let path = stem.with_extension(ext);
        fs::write(&path, body).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        println!("wrote {}", path.display());
        Ok::<(), Failure>(())
    };
    if a.format != Format::Csv {
        write("json", report.to_json()?)?;
    }
    if a.format != Format::Json {
        write("csv", report.to_csv()?)?;
    }
    println!("statement  p  field  grid  hypothesis  conclusion  min_N  bound  violations");
    for r in &report.records {
        println!(
            "{}{}  {}  {}  {}  {}  {}  {}  {}  {}",
            r.statement,
            r.c_index.map_or(String::new(), |k| format!("[c{k}]")),
            r.p,
            if r.field.is_empty() { "-" } else { &r.field },
            r.grid_size,
            opt(&r.hypothesis_ok),
            opt(&r.conclusion_ok),
            opt(&r.min_n),
            opt(&r.bound),
            r.violations.len(),
        );
        for f in &r.flags {
            println!("    flag: {f}");
        }
    }
    for u in &report.summary.uniform_n {
        if report.statement == "lincomb" {
            println!("uniform N at p = {} ({}): {}", u.p, u.field, opt(&u.n));
        }
    }
    for n in &report.summary.notes {
        println!("note: {n}");
    }
    println!("stable from p = {}", opt(&report.summary.stable_from));
    if report.summary.violated {
        return Err(Failure::Violation(format!("statement `{}` violated", report.statement)));
    }
    Ok(())
}

fn cmd_reduce(a: &ReduceArgs) -> CmdResult {
    let spec = load_spec(&a.spec)?;
    let field = LocalFieldDesc::parse_args(&a.at.field)?;
    let pts = points(&spec, &field, &a.at)?;
    let mut required = 0;
    for x in &pts {
        required = required.max(required_depth(&[&spec], &field, x)?);
    }
    let depth = a.at.depth.unwrap_or(required.max(1));
    let tilde = tilde_h(&spec, &field, &pts, depth).map_err(|e| match e {
        Error::DepthTooSmall { given, required } => Failure::Usage(format!(
            "depth {given} is too small, required depth is {required}; rerun with --depth {required}"
        )),
        other => other.into(),
    })?;
    println!("field {}  depth {depth}  N′ = {}  N = {}", field.tag(), tilde.n_prime, tilde.n);
    println!("point\tentries\tH̃\t|H_ψ₁|²\tψ₁\tlower\tupper");
    let mut bad = 0;
    for (k, x) in pts.iter().enumerate() {
        let w = witness_psi1(&spec, &field, x, depth, &tilde.values[k], tilde.n)?;
        if !(w.lower_ok && w.upper_ok) {
            bad += 1;
        }
        println!(
            "{x}\t{}\t{} ≈ {:.6}\t{} ≈ {:.6}\t#{}\t{}\t{}",
            tilde.decompositions[k].len(),
            tilde.values[k],
            tilde.values[k].to_complex().re,
            w.abs2,
            w.abs2.to_complex().re,
            w.psi.index(),
            w.lower_ok,
            w.upper_ok
        );
    }
    if bad > 0 {
        return Err(Failure::Violation(format!("sandwich fails at {bad} points")));
    }
    Ok(())
}

fn cmd_lindep(a: &LindepArgs) -> CmdResult {
    let specs = a.specs.iter().map(|p| load_spec(p)).collect::<std::result::Result<Vec<_>, _>>()?;
    let field = LocalFieldDesc::parse_args(&a.at.field)?;
    let y = match &a.y {
        Some(s) => Point::parse(&specs[0], &field, s)?,
        None => Point::new(),
    };
    let xs = points(&specs[0], &field, &a.at)?;
    let depth = a.at.depth.unwrap_or(1);
    let psi = Character::new(&field, depth, a.psi)?;
    let columns: Vec<Vec<Cyclo>> = specs
        .iter()
        .map(|s| xs.iter().map(|x| eval_expfun(s, &field, &psi, &x.merged(&y))).collect())
        .collect::<crate::Result<_>>()?;
    match dependence_test(&columns)? {
        Dependence::Dependent { kernel } => {
            let k: Vec<String> = kernel.iter().map(ToString::to_string).collect();
            println!("dependent on {} points; kernel ({})", xs.len(), k.join(", "));
        }
        Dependence::Independent { witness } => {
            let w: Vec<String> = witness.iter().map(|&i| xs[i].to_string()).collect();
            println!("independent; nonzero determinant at [{}]", w.join(" | "));
        }
        Dependence::Inconclusive { rank, rows } => println!("inconclusive: rank {rank} on {rows} rows"),
    }
    if let Some(t) = &a.target {
        let g = load_spec(t)?;
        let Some(idx) = find_witness_w(&specs, &field, &psi, &y, &xs)? else {
            return Err(Failure::Violation("no point tuple with nonzero determinant".into()));
        };
        let w: Vec<Point> = idx.iter().map(|&i| xs[i].clone()).collect();
        let cr = cramer_coeffs(&specs, &g, &field, &psi, &y, &w)?;
        for (i, c) in cr.coeffs.iter().enumerate() {
            println!("c_{} = {c}", i + 1);
        }
        let rest: Vec<Point> = (0..xs.len()).filter(|i| !idx.contains(i)).map(|i| xs[i].clone()).collect();
        let bad = combination_residuals(&specs, &g, &cr.coeffs, &field, &psi, &y, &rest)?;
        println!("held-out points: {}, mismatches: {}", rest.len(), bad.len());
        if !bad.is_empty() {
            return Err(Failure::Violation(format!("G is not Σ c_i H_i at {} held-out points", bad.len())));
        }
    }
    Ok(())
}

fn cmd_fourier(a: &FourierArgs) -> CmdResult {
    let factors = a
        .group
        .split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| Failure::Usage(format!("bad factor `{s}`"))))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let g = FiniteAbelianGroup::new(factors)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let e = g.exponent();
    let values = (0..g.order())
        .map(|_| {
            let k = rng.gen_range(0..e as i64);
            let a = rng.gen_range(-2..=2);
            Ok(Cyclo::zeta(e, k)?.scale(&BigRational::from_integer(a.into())))
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let f = GroupFunction::new(g.clone(), values)?;
    let s = check_norm_sandwich(&f)?;
    println!("group Z/{}  |G| = {}", g.factors().iter().map(u64::to_string).collect::<Vec<_>>().join(" x Z/"), g.order());
    println!("sup|f|² = {:.6}  sup|f̂|² = {:.6}  sandwich {}", s.sup_f_sq, s.sup_hat_sq, s.holds);
    println!("plancherel {}", plancherel_check(&f)?);
    let support = a.support.min(g.order() as usize).max(1);
    let mut ys: Vec<Vec<u64>> = Vec::new();
    while ys.len() < support {
        let y = g.element(rng.gen_range(0..g.order()));
        if !ys.contains(&y) {
            ys.push(y);
        }
    }
    let c = (0..support)
        .map(|_| Ok(Cyclo::zeta(e, rng.gen_range(0..e as i64))?.scale(&BigRational::from_integer(rng.gen_range(1..=3).into()))))
        .collect::<crate::Result<Vec<_>>>()?;
    let peak = find_peak_character(&c, &ys, &g)?;
    println!(
        "peak character {:?}: |Σ c_j φ(y_j)| = {:.6}, max |c_j| bound {}",
        peak.phi, peak.magnitude, peak.bound_holds
    );
    if !(s.holds && peak.bound_holds) {
        return Err(Failure::Violation("a Fourier bound failed".into()));
    }
    Ok(())
}
