//! Polar decomposition, the majorant H~ and the witness character.

use motexp::eval::EvalDomain;
use motexp::ir::parse_spec;
use motexp::localfield::LocalFieldDesc;
use motexp::reduction::{required_depth, tilde_h, witness_psi1};

const SPEC: &str = "
class exp
vars { x: VF; w: VF }
set X: x*w = 1 and ord(x) >= 1
summand { g: w }
summand { g: 2*w }
summand { g: w + 1 }
";

fn main() -> motexp::Result<()> {
    let spec = parse_spec(SPEC)?;
    let field = LocalFieldDesc::parse_args("mixed,7,1,8")?;
    let pts = EvalDomain::parse("x: vf [1, 1] digits 2; w: vf inv x")?
        .grid(7)?
        .iter()
        .take(4)
        .map(|g| g.realize(&field))
        .collect::<motexp::Result<Vec<_>>>()?;
    let depth = pts.iter().try_fold(0, |d, x| required_depth(&[&spec], &field, x).map(|r| r.max(d)))?;
    let t = tilde_h(&spec, &field, &pts, depth)?;
    println!("depth {depth}, N' = {}, N = {}", t.n_prime, t.n);
    for (k, x) in pts.iter().enumerate() {
        let dec = &t.decompositions[k];
        for e in &dec.entries {
            println!("  class of {}: h' = {}, merged {}", e.g, e.h[0], e.class_size);
        }
        let w = witness_psi1(&spec, &field, x, depth, &t.values[k], t.n)?;
        println!("{x}\n  H~ = {}, |H_psi1|^2 = {}, lower {}, upper {}", t.values[k], w.abs2, w.lower_ok, w.upper_ok);
    }
    Ok(())
}
