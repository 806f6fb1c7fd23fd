//! Arithmetic in a truncated `F_q((t))` and in the unramified extension of
//! `Q_p` with the same residue field.

use motexp::localfield::{parse_element, LocalFieldDesc};

fn main() -> motexp::Result<()> {
    let eq = LocalFieldDesc::parse_args("eq,3,2,6")?;
    let mixed = eq.partner()?;
    println!("residue field F_{} with modulus {:?}", eq.q(), eq.modulus());
    for field in [&eq, &mixed] {
        let x = parse_element(field, "(a+1)*t^-1 + 2 + a*t")?;
        let y = parse_element(field, "t + t^2")?;
        let prod = x.mul(&y)?;
        println!("{}:", field.tag());
        println!("  x     = {x}");
        println!("  x*y   = {prod}");
        println!("  1/x   = {}", x.inv()?);
        println!("  ord   = {}, ac = {}", prod.ord(), field.residue().format(prod.ac()));
    }
    // the partners agree on ord and ac of the same digit pattern
    let a = parse_element(&eq, "2*t^2 + t^3")?;
    let b = parse_element(&mixed, "2*t^2 + t^3")?;
    assert_eq!(a.ord(), b.ord());
    assert_eq!(a.ac(), b.ac());
    Ok(())
}
