//! Prime sweeps comparing `F_q((t))` with the unramified extension of
//! `Q_p` that has the same residue field.
//!
//! Every statement samples one field-independent grid per prime and realizes
//! it in both fields, so matched points share their `(ord, ac)`, RF and ZZ
//! data. Values are compared in exact cyclotomic arithmetic; floats appear
//! only in the `max_ratio` column.

mod config;
mod report;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::characters::{enumerate_characters, standard_psi, Character};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::eval::{eval_expfun, in_domain, Ctx, EvalDomain, GridPoint, Point, Value};
use crate::ir::{check_term_in, parse_term, Sort, Spec, Term};
use crate::lindep::{dependence_test, Dependence};
use crate::localfield::{FieldKind, LocalFieldDesc};
use crate::reduction::{gram_tilde, required_depth};

pub use config::{parse_rational_vector, SweepConfig};
pub use report::{PrimeRecord, RunManifest, Summary, TransferReport, UniformN, SCHEMA_VERSION};

const MAX_LISTED: usize = 25;

/// True for `𝒞ᵉ` functions: every `g` is zero.
pub fn is_ce(spec: &Spec) -> bool {
    spec.has_residue_only_oscillation()
}

fn require_ce(spec: &Spec, name: &str) -> Result<()> {
    if is_ce(spec) {
        Ok(())
    } else {
        Err(Error::NotCe(name.to_string()))
    }
}

/// `[F_q((t)), Q_q]` at the configured precision.
pub fn field_pair(cfg: &SweepConfig, p: u32) -> Result<[LocalFieldDesc; 2]> {
    Ok([
        LocalFieldDesc::new(FieldKind::EqualChar, p as u64, cfg.f, cfg.precision)?,
        LocalFieldDesc::new(FieldKind::MixedChar, p as u64, cfg.f, cfg.precision)?,
    ])
}

fn rng_for(cfg: &SweepConfig, p: u32, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ ((p as u64) << 32) ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// The whole domain when it has at most `n` cells, else `n` distinct seeded samples.
pub fn grid_points(dom: &EvalDomain, q: u32, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<GridPoint>> {
    if dom.coords.is_empty() {
        return Ok(vec![GridPoint { coords: Vec::new() }]);
    }
    if dom.cell_count(q) <= n as u128 {
        return dom.grid(q);
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for g in dom.sample(q, n, rng) {
        if seen.insert(g.clone()) {
            out.push(g);
        }
    }
    Ok(out)
}

/// A grid realized in both fields of a pair.
#[derive(Clone, Debug)]
pub struct MatchedGrid {
    pub points: Vec<GridPoint>,
    pub realized: [Vec<Point>; 2],
    pub flags: Vec<String>,
}

/// Keeps the grid points lying in `X` of every spec in both fields.
pub fn match_grid(specs: &[&Spec], grid: Vec<GridPoint>, fields: &[LocalFieldDesc; 2]) -> Result<MatchedGrid> {
    let mut out = MatchedGrid {
        points: Vec::new(),
        realized: [Vec::new(), Vec::new()],
        flags: Vec::new(),
    };
    let mut one_sided = 0;
    for g in grid {
        let a = g.realize(&fields[0])?;
        let b = g.realize(&fields[1])?;
        let mut inside = [true, true];
        for s in specs {
            inside[0] &= in_domain(s, &fields[0], &a)?;
            inside[1] &= in_domain(s, &fields[1], &b)?;
        }
        match inside {
            [true, true] => {
                out.points.push(g);
                out.realized[0].push(a);
                out.realized[1].push(b);
            }
            [false, false] => {}
            _ => one_sided += 1,
        }
    }
    if one_sided > 0 {
        out.flags.push(format!("{one_sided} grid points lie in X for one field only"));
    }
    Ok(out)
}

/// `max(d, required)` capped by `max_depth` and the precision, with flags.
fn choose_depth(specs: &[&Spec], fields: &[LocalFieldDesc; 2], grid: &MatchedGrid, cfg: &SweepConfig) -> (u32, Vec<String>) {
    let mut required = 0;
    for (k, f) in fields.iter().enumerate() {
        for x in &grid.realized[k] {
            required = required.max(required_depth(specs, f, x).unwrap_or(0));
        }
    }
    let cap = cfg.max_depth.min(cfg.precision.saturating_sub(1));
    let depth = cfg.depth.max(required).min(cap);
    let mut flags = Vec::new();
    if depth > cfg.depth {
        flags.push(format!("depth raised to {depth}"));
    }
    if required > depth {
        flags.push(format!("depth cap {cap} is below the required depth {required}"));
    }
    (depth, flags)
}

fn characters_for(specs: &[&Spec], field: &LocalFieldDesc, depth: u32) -> Result<Vec<Character>> {
    if specs.iter().all(|s| is_ce(s)) {
        Ok(vec![standard_psi(field)])
    } else {
        enumerate_characters(field, depth)
    }
}

/// `values[point][character][spec]`; a point whose evaluation fails is `Err`.
fn value_table(specs: &[&Spec], field: &LocalFieldDesc, chars: &[Character], points: &[Point]) -> Vec<Result<Vec<Vec<Cyclo>>>> {
    points
        .par_iter()
        .map(|x| {
            chars
                .iter()
                .map(|psi| specs.iter().map(|s| eval_expfun(s, field, psi, x)).collect())
                .collect()
        })
        .collect()
}

/// Both tables, restricted to the points that evaluate in both fields.
struct Tables {
    points: Vec<GridPoint>,
    realized: [Vec<Point>; 2],
    values: [Vec<Vec<Vec<Cyclo>>>; 2],
    flags: Vec<String>,
}

fn tables(specs: &[&Spec], fields: &[LocalFieldDesc; 2], chars: &[Vec<Character>; 2], grid: MatchedGrid) -> Tables {
    let a = value_table(specs, &fields[0], &chars[0], &grid.realized[0]);
    let b = value_table(specs, &fields[1], &chars[1], &grid.realized[1]);
    let mut t = Tables {
        points: Vec::new(),
        realized: [Vec::new(), Vec::new()],
        values: [Vec::new(), Vec::new()],
        flags: grid.flags,
    };
    let mut skipped = Vec::new();
    for (i, (va, vb)) in a.into_iter().zip(b).enumerate() {
        match (va, vb) {
            (Ok(va), Ok(vb)) => {
                t.points.push(grid.points[i].clone());
                t.realized[0].push(grid.realized[0][i].clone());
                t.realized[1].push(grid.realized[1][i].clone());
                t.values[0].push(va);
                t.values[1].push(vb);
            }
            (Err(e), _) | (_, Err(e)) => skipped.push(e.to_string()),
        }
    }
    if let Some(first) = skipped.first() {
        t.flags.push(format!("{} points skipped ({first})", skipped.len()));
    }
    t
}

fn combine(values: &[Cyclo], c: &[Cyclo]) -> Result<Cyclo> {
    let mut acc = Cyclo::zero();
    for (v, ci) in values.iter().zip(c) {
        if !ci.is_zero() {
            acc = acc.try_add(&v.try_mul(ci)?)?;
        }
    }
    Ok(acc)
}

fn to_cyclo(c: &[BigRational]) -> Vec<Cyclo> {
    c.iter().map(Cyclo::from_rational).collect()
}

fn leq(a: &Cyclo, b: &Cyclo) -> Result<bool> {
    Ok(a.cmp_real(b)? != Ordering::Greater)
}

fn re(z: &Cyclo) -> f64 {
    z.to_complex().re
}

/// Smallest integer `N ≥ 1` with `|h|² ≤ N²|g|²`, for `g ≠ 0`.
pub fn min_integer_n(h2: &Cyclo, g2: &Cyclo) -> Result<u64> {
    let guess = (re(h2) / re(g2)).max(0.0).sqrt().floor();
    let mut n = if guess.is_finite() && guess >= 1.0 { guess as u64 } else { 1 };
    let scaled = |n: u64| g2.scale(&BigRational::from_integer(BigInt::from(n) * BigInt::from(n)));
    while !leq(h2, &scaled(n))? {
        n += 1;
    }
    while n > 1 && leq(h2, &scaled(n - 1))? {
        n -= 1;
    }
    Ok(n)
}

/// Bound data of `|H| ≤ N|G|` in one field.
#[derive(Clone, Debug)]
pub struct SideStats {
    /// `|H_ψ(x)| ≤ |G(x)|` at every point for every character.
    pub hypothesis_ok: bool,
    /// Smallest `N` over the points with `G ≠ 0`; `None` when there are none.
    pub min_n: Option<u64>,
    pub max_ratio: Option<f64>,
    pub violations: Vec<String>,
}

/// `h[point][character]` against `g[point]`.
pub fn side_stats(h: &[Vec<Cyclo>], g: &[Cyclo], labels: &[GridPoint], tol: f64) -> Result<(SideStats, Vec<String>)> {
    let mut hypothesis_ok = true;
    let mut violations = Vec::new();
    let mut worst: Option<(Cyclo, Cyclo)> = None;
    for (i, (row, gv)) in h.iter().zip(g).enumerate() {
        let g2 = gv.abs2();
        for (j, hv) in row.iter().enumerate() {
            let h2 = hv.abs2();
            if !leq(&h2, &g2)? {
                hypothesis_ok = false;
            }
            if g2.is_zero() {
                if !h2.is_zero() {
                    violations.push(format!("{}; psi #{j}", labels[i]));
                }
                continue;
            }
            let better = match &worst {
                None => true,
                Some((bh, bg)) => h2.try_mul(bg)?.cmp_real(&bh.try_mul(&g2)?)? == Ordering::Greater,
            };
            if better {
                worst = Some((h2, g2.clone()));
            }
        }
    }
    let mut flags = Vec::new();
    let (min_n, max_ratio) = match worst {
        None => (None, None),
        Some((h2, g2)) => {
            let n = min_integer_n(&h2, &g2)?;
            let r = (re(&h2) / re(&g2)).max(0.0).sqrt();
            if (r - r.round()).abs() <= tol && r.round() >= 1.0 && r.fract() != 0.0 {
                flags.push(format!("max ratio {r} is within tolerance of an integer; exact comparison decided N"));
            }
            (Some(n), Some(r))
        }
    };
    Ok((
        SideStats {
            hypothesis_ok,
            min_n,
            max_ratio,
            violations,
        },
        flags,
    ))
}

fn caveats(statement: &str) -> Vec<String> {
    let mut v = vec![
        "empirical, on declared grid/depth".to_string(),
        "the sup over all characters is approximated by the depth-d family".to_string(),
    ];
    match statement {
        "bound" | "lincomb" => {
            v.push("N′ is the largest class count on the sample; min_N against N′² is recorded as data".into())
        }
        "coeff" | "dep" => v.push(
            "identical vanishing transfers by a theorem; this compares sampled verdicts in the two fields".into(),
        ),
        "factor" => v.push("a collision means the profile list is too coarse for the spec".into()),
        _ => {}
    }
    v
}

fn error_record(statement: &str, p: u32, cfg: &SweepConfig, e: &Error) -> PrimeRecord {
    PrimeRecord {
        statement: statement.to_string(),
        p,
        depth: cfg.depth,
        flags: vec![format!("error: {e}")],
        ..PrimeRecord::default()
    }
}

fn verdict_key(r: &PrimeRecord) -> (Option<bool>, Option<bool>, Option<bool>, bool) {
    (r.hypothesis_ok, r.conclusion_ok, r.agree, r.violated)
}

/// Smallest prime from which every later prime repeats the verdicts of the last one.
fn stable_from(records: &[PrimeRecord]) -> Option<u32> {
    let mut by_p: BTreeMap<u32, Vec<_>> = BTreeMap::new();
    for r in records {
        by_p.entry(r.p).or_default().push(verdict_key(r));
    }
    let last = by_p.values().next_back()?.clone();
    let mut from = None;
    for (p, keys) in by_p.iter().rev() {
        if *keys != last {
            break;
        }
        from = Some(*p);
    }
    from
}

fn finish(statement: &str, cfg: &SweepConfig, records: Vec<PrimeRecord>, mut summary: Summary) -> TransferReport {
    summary.stable_from = stable_from(&records);
    if records.iter().any(|r| r.flags.iter().any(|f| f.starts_with("error:"))) {
        summary.notes.push("some primes failed; see the error flags".into());
    }
    TransferReport {
        schema_version: SCHEMA_VERSION,
        statement: statement.to_string(),
        manifest: RunManifest::new(vec![statement.to_string()], Vec::new(), cfg.clone()),
        caveats: caveats(statement),
        records,
        summary,
    }
}

fn per_prime<F>(statement: &str, cfg: &SweepConfig, run: F) -> Vec<PrimeRecord>
where
    F: Fn(u32) -> Result<Vec<PrimeRecord>> + Sync,
{
    cfg.primes()
        .par_iter()
        .map(|&p| run(p).unwrap_or_else(|e| vec![error_record(statement, p, cfg, &e)]))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn bound_prime(statement: &str, hs: &[&Spec], g: &Spec, cs: &[Vec<Cyclo>], lincomb: bool, cfg: &SweepConfig, p: u32) -> Result<Vec<PrimeRecord>> {
    let fields = field_pair(cfg, p)?;
    let mut all: Vec<&Spec> = hs.to_vec();
    all.push(g);
    let grid = grid_points(&cfg.grid, fields[0].q(), cfg.samples, &mut rng_for(cfg, p, 0))?;
    let grid = match_grid(&all, grid, &fields)?;
    let (depth, depth_flags) = choose_depth(hs, &fields, &grid, cfg);
    let chars = [characters_for(hs, &fields[0], depth)?, characters_for(hs, &fields[1], depth)?];
    let t = tables(&all, &fields, &chars, grid);
    let ell = hs.len();
    let ce = hs.iter().all(|s| is_ce(s));
    let mut n_prime = [None, None];
    let mut flags = t.flags.clone();
    flags.extend(depth_flags);
    if ce {
        n_prime = [Some(1), Some(1)];
    } else {
        for k in 0..2 {
            match gram_tilde(hs, &fields[k], &t.realized[k], depth) {
                Ok(gt) => n_prime[k] = Some(gt.n_prime),
                Err(e) => flags.push(format!("{}: no class bound ({e})", fields[k].tag())),
            }
        }
    }
    let g_vals: [Vec<Cyclo>; 2] = [0, 1].map(|k| t.values[k].iter().map(|row| row[0][ell].clone()).collect());
    let mut records = Vec::new();
    for (ci, c) in cs.iter().enumerate() {
        let mut stats = Vec::new();
        let mut side_flags = Vec::new();
        for k in 0..2 {
            let h: Vec<Vec<Cyclo>> = t.values[k]
                .iter()
                .map(|row| row.iter().map(|v| combine(&v[..ell], c)).collect::<Result<_>>())
                .collect::<Result<_>>()?;
            let (s, f) = side_stats(&h, &g_vals[k], &t.points, cfg.tolerance)?;
            stats.push(s);
            side_flags.push(f);
        }
        for (a, b) in [(0usize, 1usize), (1, 0)] {
            let bound = if ce { Some(1) } else { n_prime[b].map(|n| (n as u64).pow(2)) };
            let s = &stats[b];
            let conclusion_ok = s.violations.is_empty() && match (s.min_n, bound) {
                (Some(n), Some(bd)) => n <= bd,
                _ => true,
            };
            let mut fl = flags.clone();
            fl.extend(side_flags[b].iter().cloned());
            if t.points.is_empty() {
                fl.push("no grid point lies in X".into());
            }
            let mut violations = s.violations.clone();
            if violations.len() > MAX_LISTED {
                fl.push(format!("{} violations, first {MAX_LISTED} listed", violations.len()));
                violations.truncate(MAX_LISTED);
            }
            records.push(PrimeRecord {
                statement: statement.to_string(),
                p,
                field: fields[a].tag(),
                partner: fields[b].tag(),
                depth,
                grid_size: t.points.len(),
                characters: chars[a].len(),
                c_index: lincomb.then_some(ci),
                hypothesis_ok: Some(stats[a].hypothesis_ok),
                conclusion_ok: Some(conclusion_ok),
                agree: None,
                min_n: s.min_n,
                max_ratio: s.max_ratio,
                n_prime: n_prime[b],
                bound,
                violations,
                witnesses: Vec::new(),
                flags: fl,
                violated: stats[a].hypothesis_ok && !conclusion_ok,
            });
        }
    }
    Ok(records)
}

fn uniform_n(records: &[PrimeRecord]) -> Vec<UniformN> {
    let mut map: BTreeMap<(u32, String), Option<u64>> = BTreeMap::new();
    for r in records.iter().filter(|r| !r.field.is_empty()) {
        let e = map.entry((r.p, r.field.clone())).or_insert(None);
        if let Some(n) = r.min_n {
            *e = Some(e.map_or(n, |m: u64| m.max(n)));
        }
    }
    map.into_iter().map(|((p, field), n)| UniformN { p, field, n }).collect()
}

fn check_g(hs: &[&Spec], g: &Spec) -> Result<()> {
    require_ce(g, "G")?;
    if hs.is_empty() {
        return Err(Error::Invalid("at least one function H is needed".into()));
    }
    Ok(())
}

/// `|H_ψ| ≤ |G|` in one field against the smallest `N` with `|H_ψ| ≤ N|G|`
/// in the other, for every prime and both directions.
pub fn check_bound_transfer(h: &Spec, g: &Spec, cfg: &SweepConfig) -> Result<TransferReport> {
    cfg.validate()?;
    check_g(&[h], g)?;
    let one = vec![vec![Cyclo::one()]];
    let records = per_prime("bound", cfg, |p| bound_prime("bound", &[h], g, &one, false, cfg, p));
    let summary = Summary {
        violated: records.iter().any(|r| r.violated),
        uniform_n: uniform_n(&records),
        ..Summary::default()
    };
    Ok(finish("bound", cfg, records, summary))
}

/// The bound statement for `Σ c_i H_i` over the coefficient grid, with the
/// largest `min_N` over all `c` per prime and direction.
pub fn check_bound_transfer_lincomb(hs: &[&Spec], g: &Spec, cfg: &SweepConfig) -> Result<TransferReport> {
    cfg.validate()?;
    check_g(hs, g)?;
    let cs: Vec<Vec<Cyclo>> = cfg.c_vectors(hs.len())?.iter().map(|c| to_cyclo(c)).collect();
    if cs.is_empty() {
        return Err(Error::Invalid("the coefficient grid is empty".into()));
    }
    let records = per_prime("lincomb", cfg, |p| bound_prime("lincomb", hs, g, &cs, true, cfg, p));
    let summary = Summary {
        violated: records.iter().any(|r| r.violated),
        uniform_n: uniform_n(&records),
        ..Summary::default()
    };
    Ok(finish("lincomb", cfg, records, summary))
}

fn disagreement_summary(records: &[PrimeRecord]) -> Summary {
    let last = records.iter().map(|r| r.p).max();
    let violated = records.iter().any(|r| Some(r.p) == last && r.agree == Some(false));
    let mut notes = Vec::new();
    let disagree: Vec<String> = records
        .iter()
        .filter(|r| r.agree == Some(false))
        .map(|r| r.p.to_string())
        .collect();
    if !disagree.is_empty() {
        notes.push(format!("verdicts disagree at p = {}", disagree.join(", ")));
    }
    Summary {
        violated,
        notes,
        ..Summary::default()
    }
}

/// Exact vanishing of `Σ c_i H_i` on the grid for every enumerated character, in both fields.
pub fn check_coeff_transfer(hs: &[&Spec], c: &[BigRational], cfg: &SweepConfig) -> Result<TransferReport> {
    cfg.validate()?;
    if c.len() != hs.len() {
        return Err(Error::Invalid(format!("{} coefficients for {} functions", c.len(), hs.len())));
    }
    let c = to_cyclo(c);
    let records = per_prime("coeff", cfg, |p| {
        let fields = field_pair(cfg, p)?;
        let grid = grid_points(&cfg.grid, fields[0].q(), cfg.samples, &mut rng_for(cfg, p, 0))?;
        let grid = match_grid(hs, grid, &fields)?;
        let (depth, depth_flags) = choose_depth(hs, &fields, &grid, cfg);
        let chars = [characters_for(hs, &fields[0], depth)?, characters_for(hs, &fields[1], depth)?];
        let t = tables(hs, &fields, &chars, grid);
        let mut vanish = [true, true];
        let mut witnesses = Vec::new();
        for k in 0..2 {
            'points: for (i, row) in t.values[k].iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let s = combine(v, &c)?;
                    if !s.is_zero() {
                        vanish[k] = false;
                        witnesses.push(format!("{}: {}; psi #{j}; value {s}", fields[k].tag(), t.points[i]));
                        break 'points;
                    }
                }
            }
        }
        let mut flags = t.flags;
        flags.extend(depth_flags);
        Ok(vec![PrimeRecord {
            statement: "coeff".into(),
            p,
            field: fields[0].tag(),
            partner: fields[1].tag(),
            depth,
            grid_size: t.points.len(),
            characters: chars[0].len(),
            hypothesis_ok: Some(vanish[0]),
            conclusion_ok: Some(vanish[1]),
            agree: Some(vanish[0] == vanish[1]),
            witnesses,
            flags,
            ..PrimeRecord::default()
        }])
    });
    let summary = disagreement_summary(&records);
    Ok(finish("coeff", cfg, records, summary))
}

fn verdict_name(d: &Dependence) -> &'static str {
    match d {
        Dependence::Dependent { .. } => "dependent",
        Dependence::Independent { .. } => "independent",
        Dependence::Inconclusive { .. } => "inconclusive",
    }
}

/// Linear dependence of `x ↦ H_{i,ψ}(x, y)` over the grid, per sampled `(ψ, y)`, in both fields.
pub fn check_dependence_transfer(hs: &[&Spec], cfg: &SweepConfig) -> Result<TransferReport> {
    cfg.validate()?;
    if hs.is_empty() {
        return Err(Error::Invalid("at least one function is needed".into()));
    }
    let records = per_prime("dep", cfg, |p| {
        let fields = field_pair(cfg, p)?;
        let q = fields[0].q();
        let xs = grid_points(&cfg.grid, q, cfg.samples, &mut rng_for(cfg, p, 0))?;
        let ys = grid_points(&cfg.y_grid, q, cfg.y_samples.max(1), &mut rng_for(cfg, p, 1))?;
        let mut flags = Vec::new();
        let mut depth = cfg.depth;
        let mut per_y = Vec::new();
        for y in &ys {
            let joined: Vec<GridPoint> = xs
                .iter()
                .map(|x| GridPoint {
                    coords: x.coords.iter().chain(&y.coords).cloned().collect(),
                })
                .collect();
            let m = match_grid(hs, joined, &fields)?;
            let (d, f) = choose_depth(hs, &fields, &m, cfg);
            depth = depth.max(d);
            flags.extend(f);
            per_y.push((y, m));
        }
        let chars = [characters_for(hs, &fields[0], depth)?, characters_for(hs, &fields[1], depth)?];
        let mut all_dep = [true, true];
        let mut witnesses = Vec::new();
        let mut disagreements = 0usize;
        let mut grid_size = 0;
        let mut tested = 0usize;
        for (y, m) in per_y {
            let t = tables(hs, &fields, &chars, m);
            flags.extend(t.flags.iter().cloned());
            grid_size = grid_size.max(t.points.len());
            if t.points.len() < hs.len() {
                flags.push(format!("y = {y}: only {} grid points in X", t.points.len()));
                continue;
            }
            for j in 0..chars[0].len() {
                let mut verdicts = Vec::new();
                for k in 0..2 {
                    let columns: Vec<Vec<Cyclo>> = (0..hs.len())
                        .map(|i| t.values[k].iter().map(|row| row[j][i].clone()).collect())
                        .collect();
                    verdicts.push(verdict_name(&dependence_test(&columns)?));
                }
                tested += 1;
                for k in 0..2 {
                    all_dep[k] &= verdicts[k] == "dependent";
                }
                if verdicts[0] != verdicts[1] {
                    disagreements += 1;
                    if witnesses.len() < MAX_LISTED {
                        witnesses.push(format!(
                            "psi #{j}, y = {y}: {} {}, {} {}",
                            fields[0].tag(),
                            verdicts[0],
                            fields[1].tag(),
                            verdicts[1]
                        ));
                    }
                }
            }
        }
        flags.dedup();
        if disagreements > witnesses.len() {
            flags.push(format!("{disagreements} disagreements, first {} listed", witnesses.len()));
        }
        Ok(vec![PrimeRecord {
            statement: "dep".into(),
            p,
            field: fields[0].tag(),
            partner: fields[1].tag(),
            depth,
            grid_size,
            characters: chars[0].len(),
            hypothesis_ok: (tested > 0).then_some(all_dep[0]),
            conclusion_ok: (tested > 0).then_some(all_dep[1]),
            agree: Some(disagreements == 0),
            witnesses,
            flags,
            ..PrimeRecord::default()
        }])
    });
    let summary = disagreement_summary(&records);
    Ok(finish("dep", cfg, records, summary))
}

/// Exact equality across the pair of a `𝒞ᵉ` function of residue and value group variables only.
pub fn check_rf_zz_rigidity(h: &Spec, cfg: &SweepConfig) -> Result<TransferReport> {
    cfg.validate()?;
    require_ce(h, "H")?;
    if !h.var_names(Sort::VF).is_empty() {
        return Err(Error::Invalid("rigidity needs a spec without VF variables".into()));
    }
    let records = per_prime("rigidity", cfg, |p| {
        let fields = field_pair(cfg, p)?;
        let grid = grid_points(&cfg.grid, fields[0].q(), cfg.samples, &mut rng_for(cfg, p, 0))?;
        let psi = [standard_psi(&fields[0]), standard_psi(&fields[1])];
        let mut witnesses = Vec::new();
        let mut size = 0;
        for g in grid {
            let x = [g.realize(&fields[0])?, g.realize(&fields[1])?];
            let inside = [in_domain(h, &fields[0], &x[0])?, in_domain(h, &fields[1], &x[1])?];
            if inside[0] != inside[1] {
                witnesses.push(format!("{g}: X membership differs"));
                continue;
            }
            if !inside[0] {
                continue;
            }
            size += 1;
            let a = eval_expfun(h, &fields[0], &psi[0], &x[0])?;
            let b = eval_expfun(h, &fields[1], &psi[1], &x[1])?;
            if a != b {
                witnesses.push(format!("{g}: {a} vs {b}"));
            }
        }
        let exact = witnesses.is_empty();
        witnesses.truncate(MAX_LISTED);
        Ok(vec![PrimeRecord {
            statement: "rigidity".into(),
            p,
            field: fields[0].tag(),
            partner: fields[1].tag(),
            depth: 0,
            grid_size: size,
            characters: 1,
            conclusion_ok: Some(exact),
            agree: Some(exact),
            witnesses,
            violated: !exact,
            ..PrimeRecord::default()
        }])
    });
    let summary = Summary {
        violated: records.iter().any(|r| r.violated || r.conclusion_ok.is_none()),
        ..Summary::default()
    };
    Ok(finish("rigidity", cfg, records, summary))
}

type ProfileKey = Vec<(Option<i64>, u32)>;

/// `(ord, ac)` of every VF variable and profile term, RF indices and ZZ values.
pub fn profile_key(spec: &Spec, terms: &[Term], field: &LocalFieldDesc, x: &Point) -> Result<ProfileKey> {
    let mut key = Vec::new();
    let vf = |v: &crate::localfield::ValuedElem| {
        if v.is_zero() {
            (None, 0)
        } else {
            (v.ord().finite(), v.ac().index())
        }
    };
    for decl in &spec.vars {
        match x.get(&decl.name) {
            Some(Value::Vf(v)) => key.push(vf(v)),
            Some(Value::Rf(r)) => key.push((Some(0), r.index())),
            Some(Value::Zz(n)) => key.push((Some(*n), 0)),
            None => {}
        }
    }
    let mut ctx = Ctx::new(field, x);
    for t in terms {
        key.push(vf(&ctx.vf(t)?));
    }
    Ok(key)
}

/// Parses and sort-checks the configured profile terms against the spec variables.
pub fn profile_terms(spec: &Spec, texts: &[String]) -> Result<Vec<Term>> {
    let decls: Vec<(String, Sort)> = spec.vars.iter().map(|v| (v.name.clone(), v.sort)).collect();
    texts
        .iter()
        .map(|s| {
            let mut t = parse_term(s)?;
            check_term_in(&mut t, Sort::VF, &decls)?;
            Ok(t)
        })
        .collect()
}

/// Whether grid points with equal profiles have equal values, in each field.
pub fn check_factorization(h: &Spec, cfg: &SweepConfig) -> Result<TransferReport> {
    cfg.validate()?;
    require_ce(h, "H")?;
    let terms = profile_terms(h, &cfg.profile)?;
    let records = per_prime("factor", cfg, |p| {
        let fields = field_pair(cfg, p)?;
        let grid = grid_points(&cfg.grid, fields[0].q(), cfg.samples, &mut rng_for(cfg, p, 0))?;
        let mut out = Vec::new();
        for (a, b) in [(0usize, 1usize), (1, 0)] {
            let field = &fields[a];
            let psi = standard_psi(field);
            let mut seen: BTreeMap<ProfileKey, (GridPoint, Cyclo)> = BTreeMap::new();
            let mut witnesses = Vec::new();
            let mut collisions = 0usize;
            let mut size = 0;
            let mut skipped: Option<(usize, String)> = None;
            for g in &grid {
                let x = g.realize(field)?;
                if !in_domain(h, field, &x)? {
                    continue;
                }
                let (v, key) = match (eval_expfun(h, field, &psi, &x), profile_key(h, &terms, field, &x)) {
                    (Ok(v), Ok(k)) => (v, k),
                    (Err(e), _) | (_, Err(e)) => {
                        skipped.get_or_insert((0, e.to_string())).0 += 1;
                        continue;
                    }
                };
                size += 1;
                match seen.get(&key) {
                    Some((g0, v0)) if *v0 != v => {
                        collisions += 1;
                        if witnesses.len() < MAX_LISTED {
                            witnesses.push(format!("{g0} -> {v0}; {g} -> {v}"));
                        }
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(key, (g.clone(), v));
                    }
                }
            }
            let mut flags = Vec::new();
            if collisions > witnesses.len() {
                flags.push(format!("{collisions} collisions, first {} listed", witnesses.len()));
            }
            flags.push(format!("{} distinct profiles", seen.len()));
            if let Some((n, e)) = skipped {
                flags.push(format!("{n} points skipped ({e})"));
            }
            out.push(PrimeRecord {
                statement: "factor".into(),
                p,
                field: field.tag(),
                partner: fields[b].tag(),
                depth: 0,
                grid_size: size,
                characters: 1,
                conclusion_ok: Some(collisions == 0),
                witnesses,
                flags,
                violated: collisions > 0,
                ..PrimeRecord::default()
            });
        }
        Ok(out)
    });
    let summary = Summary {
        violated: records.iter().any(|r| r.violated || r.conclusion_ok.is_none()),
        ..Summary::default()
    };
    Ok(finish("factor", cfg, records, summary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::parse_spec;

    fn cfg(grid: &str, pmax: u32) -> SweepConfig {
        SweepConfig {
            p_min: 5,
            p_max: pmax,
            grid: EvalDomain::parse(grid).unwrap(),
            samples: 12,
            seed: 7,
            ..SweepConfig::default()
        }
    }

    fn spec(s: &str) -> Spec {
        parse_spec(s).unwrap()
    }

    const ONE: &str = "class ce\nsummand { }";

    #[test]
    fn minimal_n_is_exact() {
        let n = |h: i64, g: i64| min_integer_n(&Cyclo::from_int(h), &Cyclo::from_int(g)).unwrap();
        assert_eq!(n(1, 1), 1);
        assert_eq!(n(4, 1), 2);
        assert_eq!(n(5, 1), 3);
        assert_eq!(n(9, 1), 3);
        assert_eq!(n(1, 4), 1);
        assert_eq!(n(0, 3), 1);
    }

    #[test]
    fn character_sum_against_one() {
        let h = spec("class ce\nsummand { Y (y): y != 0; e: y }");
        let r = check_bound_transfer(&h, &spec(ONE), &cfg("", 11)).unwrap();
        assert_eq!(r.records.len(), 3 * 2);
        for rec in &r.records {
            assert_eq!(rec.hypothesis_ok, Some(true));
            assert_eq!(rec.min_n, Some(1));
            assert!(!rec.violated);
        }
        assert!(!r.summary.violated);
        assert_eq!(r.summary.stable_from, Some(5));
    }

    #[test]
    fn gauss_sum_against_residue_count() {
        let h = spec("class ce\nsummand { Y (y): true; e: y^2 }");
        let g = spec("class ce\nsummand { H { term { count (u): true } } }");
        let r = check_bound_transfer(&h, &g, &cfg("", 13)).unwrap();
        assert!(r.records.iter().all(|rec| rec.hypothesis_ok == Some(true) && rec.min_n == Some(1)));
    }

    #[test]
    fn directions_swap_columns() {
        let h = spec("class exp\nvars { x: VF; w: VF }\nset X: x*w = 1\nsummand {\n H { term { count (y): y^2 = ac(x) } }\n g: w\n}");
        let g = spec("class ce\nvars { x: VF; w: VF }\nset X: x*w = 1\nsummand { }");
        let r = check_bound_transfer(&h, &g, &cfg("x: vf [1, 1] digits 2; w: vf inv x", 7)).unwrap();
        for pair in r.records.chunks(2) {
            assert_eq!(pair[0].field, pair[1].partner);
            assert_eq!(pair[0].grid_size, pair[1].grid_size);
            assert_eq!(pair[0].depth, 1);
            assert!(pair.iter().all(|rec| rec.n_prime == Some(1)));
            // |H|² is 4 where ac(x) is a square, so N = 2 > N′² = 1 with G = 1
            assert_eq!(pair[0].min_n, Some(2));
            assert_eq!(pair[0].hypothesis_ok, Some(false));
        }
        assert!(!r.summary.violated);
    }

    #[test]
    fn not_ce_is_rejected() {
        let h = spec(ONE);
        let g = spec("class exp\nvars { x: VF; w: VF }\nset X: x*w = 1\nsummand { g: w }");
        let e = check_bound_transfer(&h, &g, &cfg("", 7)).unwrap_err();
        assert_eq!(e.to_string(), "G must be in 𝒞ᵉ");
    }

    #[test]
    fn reports_are_reproducible() {
        let h = spec("class ce\nvars { x: VF }\nsummand { Y (y): y != 0; e: y*ac(x) }");
        let g = spec("class ce\nvars { x: VF }\nsummand { }");
        let c = cfg("x: vf [0, 3] digits 3", 11);
        let a = check_bound_transfer(&h, &g, &c).unwrap();
        let b = check_bound_transfer(&h, &g, &c).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
        assert!(a.to_csv().unwrap().starts_with("statement,p,field,depth,grid_size,hypothesis_ok,min_N,violations,flags\n"));
    }

    #[test]
    fn negated_copy_vanishes() {
        let h1 = spec("class mot\nvars { x: VF }\nsummand { alpha: ord(x) }");
        let h2 = spec("class mot\nvars { x: VF }\nsummand { alpha: ord(x); beta: 0 - 1 }");
        let g = spec("class ce\nvars { x: VF }\nsummand { }");
        let mut c = cfg("x: vf [0, 2]", 7);
        c.c_grid = vec![vec![BigRational::from_integer(1.into()), BigRational::from_integer(1.into())]];
        let r = check_bound_transfer_lincomb(&[&h1, &h2], &g, &c).unwrap();
        assert!(r.records.iter().all(|rec| rec.min_n == Some(1) && rec.hypothesis_ok == Some(true)));
        let coeff = check_coeff_transfer(&[&h1, &h2], &c.c_grid[0], &c).unwrap();
        assert!(coeff.records.iter().all(|rec| rec.hypothesis_ok == Some(true) && rec.agree == Some(true)));
    }

    #[test]
    fn rigidity_of_a_value_group_spec() {
        let h = spec("class mot\nvars { z: ZZ }\nsummand { alpha: z; beta: z + 1 }");
        let r = check_rf_zz_rigidity(&h, &cfg("z: zz [0, 4]", 31)).unwrap();
        assert!(r.records.iter().all(|rec| rec.conclusion_ok == Some(true) && rec.grid_size == 5));
        let f = LocalFieldDesc::new(FieldKind::MixedChar, 5, 1, 8).unwrap();
        let x = Point::new().with("z", Value::Zz(3));
        assert_eq!(eval_expfun(&h, &f, &standard_psi(&f), &x).unwrap(), Cyclo::from_int(500));
    }

    #[test]
    fn coarse_profile_collides() {
        let h = spec("class mot\nvars { x: VF }\nsummand { count (u): u^2 = ac(x^2 - 1) }");
        let mut c = cfg("x: vf [0, 0] digits 2", 7);
        c.samples = 200;
        let r = check_factorization(&h, &c).unwrap();
        assert!(r.summary.violated, "{:?}", r.records);
        c.profile = vec!["x^2 - 1".into()];
        let r = check_factorization(&h, &c).unwrap();
        assert!(!r.summary.violated, "{:?}", r.records);
    }
}
