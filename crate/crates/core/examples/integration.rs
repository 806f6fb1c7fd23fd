//! Haar integrals over the valuation ring by shell enumeration.

use motexp::characters::standard_psi;
use motexp::eval::{integrate_fiber, EvalDomain, Point};
use motexp::ir::parse_spec;
use motexp::localfield::LocalFieldDesc;

fn main() -> motexp::Result<()> {
    let one = parse_spec("class mot\nvars { y: VF }\nsummand { }")?;
    let abs = parse_spec("class mot\nvars { y: VF }\nset X: y != 0\nsummand { alpha: 0 - ord(y) }")?;
    for args in ["eq,5,1,4", "mixed,7,1,4", "eq,3,2,4"] {
        let f = LocalFieldDesc::parse_args(args)?;
        let q = f.q() as f64;
        let psi = standard_psi(&f);
        let measure = integrate_fiber(&one, &f, &psi, &Point::new(), &EvalDomain::parse("y: vf [0, 0]")?)?;
        let r = integrate_fiber(&abs, &f, &psi, &Point::new(), &EvalDomain::parse("y: vf [0, 10]")?)?;
        println!(
            "{}: measure(O) = {}, int |y| = {:.12} (q/(q+1) = {:.12}), converged {}",
            f.tag(),
            measure.value,
            r.approx.re,
            q / (q + 1.0),
            r.converged
        );
    }
    Ok(())
}
