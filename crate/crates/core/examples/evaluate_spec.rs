//! Parse a spec and evaluate it at matched points of both fields.

use motexp::characters::enumerate_characters;
use motexp::eval::{eval_expfun, EvalDomain};
use motexp::ir::{parse_spec, validate};
use motexp::localfield::LocalFieldDesc;
use rand::SeedableRng;

const SPEC: &str = "
class exp
vars { x: VF; w: VF }
set X: x*w = 1 and ord(x) >= 1
summand {
  H { term { count (y): y^2 = ac(x) } }
  g: w
}
";

fn main() -> motexp::Result<()> {
    let spec = parse_spec(SPEC)?;
    for d in validate(&spec) {
        println!("{d}");
    }
    println!("{spec}");
    let dom = EvalDomain::parse("x: vf [1, 1] digits 2; w: vf inv x")?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let eq = LocalFieldDesc::parse_args("eq,5,1,8")?;
    let pair = [eq.clone(), eq.partner()?];
    for g in dom.sample(5, 3, &mut rng) {
        println!("{g}");
        for field in &pair {
            let x = g.realize(field)?;
            let psi = &enumerate_characters(field, 1)?[1];
            let v = eval_expfun(&spec, field, psi, &x)?;
            println!("  {}: {v}  |.|^2 = {}", field.tag(), v.abs2());
        }
    }
    Ok(())
}
