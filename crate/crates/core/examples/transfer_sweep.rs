//! A bound sweep over p in [5, 13] in both directions, written as JSON and CSV.

use motexp::eval::EvalDomain;
use motexp::ir::parse_spec;
use motexp::transfer::{check_bound_transfer, SweepConfig};

fn main() -> motexp::Result<()> {
    let h = parse_spec(include_str!("../fixtures/polar_twist.spec"))?;
    let g = parse_spec(include_str!("../fixtures/residue_count_polar.spec"))?;
    let cfg = SweepConfig {
        p_min: 5,
        p_max: 13,
        grid: EvalDomain::parse("x: vf [1, 2] digits 2; w: vf inv x")?,
        samples: 16,
        seed: 42,
        ..SweepConfig::default()
    };
    let report = check_bound_transfer(&h, &g, &cfg)?;
    print!("{}", report.to_csv()?);
    for r in &report.records {
        println!(
            "p = {:2} {:>12} -> {:<12} hypothesis {:?} min_N {:?} N' {:?}",
            r.p, r.field, r.partner, r.hypothesis_ok, r.min_n, r.n_prime
        );
    }
    println!("violated: {}", report.summary.violated);
    let out = std::env::temp_dir().join("motexp-bound.json");
    std::fs::write(&out, report.to_json()?)?;
    println!("wrote {}", out.display());
    Ok(())
}
