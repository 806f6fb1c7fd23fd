//! Sup-norm sandwich, Plancherel and the peak character on a finite abelian group.

use motexp::cyclo::Cyclo;
use motexp::fourier::{check_norm_sandwich, find_peak_character, fourier_transform, plancherel_check, FiniteAbelianGroup, GroupFunction};

fn main() -> motexp::Result<()> {
    let g = FiniteAbelianGroup::new(vec![2, 6])?;
    let values = (0..g.order())
        .map(|i| Cyclo::zeta(6, i as i64 % 6).map(|z| &z * &Cyclo::from_int((i % 3) as i64 - 1)))
        .collect::<motexp::Result<Vec<_>>>()?;
    let f = GroupFunction::new(g.clone(), values)?;
    let hat = fourier_transform(&f)?;
    println!("f^ at 0 = {}", hat.values()[0]);
    let s = check_norm_sandwich(&f)?;
    println!("sup|f| = {:.4}, sup|f^| = {:.4}, |G| = {}, sandwich {}", s.sup_f, s.sup_hat, g.order(), s.holds);
    println!("plancherel {}", plancherel_check(&f)?);

    let ys = vec![vec![0, 1], vec![1, 3], vec![1, 5]];
    let c = vec![Cyclo::from_int(3), Cyclo::zeta(3, 1)?, Cyclo::from_int(-2)];
    let peak = find_peak_character(&c, &ys, &g)?;
    println!("peak at {:?}: |value| = {:.4} >= max|c_j| = 3: {}", peak.phi, peak.magnitude, peak.bound_holds);
    Ok(())
}
