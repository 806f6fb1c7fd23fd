//! Dependence by determinants and coefficient recovery by Cramer's rule.

use motexp::characters::standard_psi;
use motexp::eval::{EvalDomain, Point};
use motexp::ir::parse_spec;
use motexp::lindep::{cramer_coeffs, dependence_test, find_witness_w};
use motexp::localfield::LocalFieldDesc;
use motexp::eval::eval_expfun;

fn main() -> motexp::Result<()> {
    let h1 = parse_spec("class mot\nvars { x: VF }\nset X: ord(x) >= 0\nsummand { }")?;
    let h2 = parse_spec("class mot\nvars { x: VF }\nset X: ord(x) >= 0\nsummand { alpha: ord(x) }")?;
    let g = parse_spec("class mot\nvars { x: VF }\nset X: ord(x) >= 0\nsummand { beta: 3 }\nsummand { alpha: ord(x); beta: 0 - 2 }")?;
    let field = LocalFieldDesc::parse_args("eq,5,1,6")?;
    let psi = standard_psi(&field);
    let xs = EvalDomain::parse("x: vf [0, 3]")?
        .grid(5)?
        .iter()
        .step_by(4)
        .map(|p| p.realize(&field))
        .collect::<motexp::Result<Vec<_>>>()?;

    let hs = vec![h1, h2];
    let columns = hs
        .iter()
        .chain(std::iter::once(&g))
        .map(|s| xs.iter().map(|x| eval_expfun(s, &field, &psi, x)).collect())
        .collect::<motexp::Result<Vec<_>>>()?;
    println!("{{1, q^ord, G}}: {:?}", dependence_test(&columns)?);
    println!("{{1, q^ord}}: {:?}", dependence_test(&columns[..2])?);

    let y = Point::new();
    let w = find_witness_w(&hs, &field, &psi, &y, &xs)?.expect("independent pair");
    let pts: Vec<Point> = w.iter().map(|&i| xs[i].clone()).collect();
    let c = cramer_coeffs(&hs, &g, &field, &psi, &y, &pts)?;
    println!("D = {}, c = [{}, {}]", c.d, c.coeffs[0], c.coeffs[1]);
    Ok(())
}
