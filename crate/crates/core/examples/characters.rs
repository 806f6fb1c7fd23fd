//! The depth-`d` character family: orthogonality and a Gauss sum in both fields.

use motexp::characters::{enumerate_characters, residue_character};
use motexp::cyclo::Cyclo;
use motexp::localfield::LocalFieldDesc;

fn main() -> motexp::Result<()> {
    let eq = LocalFieldDesc::parse_args("eq,7,1,6")?;
    let family = enumerate_characters(&eq, 1)?;
    println!("{} characters of depth 1 on {}", family.len(), eq.tag());

    let k = eq.residue();
    for c in k.elements().skip(1).take(3) {
        let s: Cyclo = k.elements().map(|y| residue_character(k, k.mul(c, y))).sum();
        println!("sum of e(tr({}*y)) = {s}", k.format(c));
    }

    for field in [eq.clone(), eq.partner()?] {
        let k = field.residue();
        let g: Cyclo = k.elements().map(|y| residue_character(k, k.mul(y, y))).sum();
        println!("{}: gauss sum {g}, |g|^2 = {}", field.tag(), g.abs2());
    }
    Ok(())
}
