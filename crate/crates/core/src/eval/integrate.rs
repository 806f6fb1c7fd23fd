use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use super::{eval_expfun, in_domain, EvalDomain, Point};
use crate::characters::Character;
use crate::cyclo::{Cyclo, CycloAccumulator};
use crate::error::{Error, Result};
use crate::ir::Spec;
use crate::localfield::LocalFieldDesc;

/// Result of summing a function over a fiber window.
#[derive(Clone, Debug)]
pub struct FiberIntegral {
    /// Exact value of the truncated integral.
    pub value: Cyclo,
    pub approx: Complex64,
    /// The last two shells decay.
    pub converged: bool,
    /// Magnitude of each shell's contribution.
    pub shells: Vec<f64>,
    /// Contribution of the balls `ϖ^{vmax+1}O`.
    pub tail: f64,
    pub cells: usize,
}

fn weight(q: u32, w: i64) -> BigRational {
    let p = num_traits::pow(BigInt::from(q), w.unsigned_abs() as usize);
    if w >= 0 {
        BigRational::new(BigInt::one(), p)
    } else {
        BigRational::from_integer(p)
    }
}

/// `∫ f(x, y) dy` over `dom`: Haar measure with `O` of mass 1 on VF
/// coordinates, counting measure on RF and ZZ coordinates.
///
/// Points outside `X` contribute nothing. A VF window `[vmin, vmax]` covers
/// the shells `ord y = k` cell by cell plus the ball `ϖ^{vmax+1}O`, which is
/// represented by `y = 0` and dropped when `f` is undefined there.
pub fn integrate_fiber(
    spec: &Spec,
    field: &LocalFieldDesc,
    psi: &Character,
    x: &Point,
    dom: &EvalDomain,
) -> Result<FiberIntegral> {
    let decls: Vec<_> = spec.vars.iter().map(|v| (v.name.clone(), v.sort)).collect();
    dom.check_sorts(&decls)?;
    let q = field.q();
    let cells = dom.cells(q)?;
    let mut total = CycloAccumulator::new();
    let mut shells: BTreeMap<u64, CycloAccumulator> = BTreeMap::new();
    let mut tail = CycloAccumulator::new();
    for cell in &cells {
        let point = x.merged(&cell.point.realize(field)?);
        let value = if cell.tail {
            match in_domain(spec, field, &point).and_then(|inside| {
                if inside {
                    eval_expfun(spec, field, psi, &point)
                } else {
                    Ok(Cyclo::zero())
                }
            }) {
                Ok(v) => v,
                Err(_) => continue,
            }
        } else if in_domain(spec, field, &point)? {
            eval_expfun(spec, field, psi, &point)?
        } else {
            continue;
        };
        if value.is_zero() {
            continue;
        }
        let contrib = value.scale(&weight(q, cell.weight));
        total.add(&contrib);
        if cell.tail {
            tail.add(&contrib);
        } else {
            shells.entry(cell.shell).or_default().add(&contrib);
        }
    }
    let value = total.finish();
    let shell_mags: Vec<f64> = shells.into_values().map(|s| s.finish().norm_f64()).collect();
    let converged = match shell_mags.as_slice() {
        [.., prev, last] => {
            if last > prev {
                return Err(Error::Divergent {
                    prev: format!("{prev:e}"),
                    last: format!("{last:e}"),
                });
            }
            last < prev || *last == 0.0
        }
        _ => true,
    };
    Ok(FiberIntegral {
        approx: value.to_complex(),
        value,
        converged,
        shells: shell_mags,
        tail: tail.finish().norm_f64(),
        cells: cells.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::standard_psi;
    use crate::ir::parse_spec;
    use crate::localfield::FieldKind;

    #[test]
    fn measure_of_the_valuation_ring() {
        let spec = parse_spec("class mot\nvars { y: VF }\nsummand {}").unwrap();
        for kind in [FieldKind::EqualChar, FieldKind::MixedChar] {
            let f = LocalFieldDesc::new(kind, 5, 1, 6).unwrap();
            let dom = EvalDomain::parse("y: vf [0, 3] digits 2").unwrap();
            let r = integrate_fiber(&spec, &f, &standard_psi(&f), &Point::new(), &dom).unwrap();
            assert_eq!(r.value, Cyclo::one());
            assert!(r.converged);
        }
    }

    #[test]
    fn absolute_value_integral() {
        let spec = parse_spec("class mot\nvars { y: VF }\nset X: y != 0\nsummand { alpha: -ord(y) }").unwrap();
        let f = LocalFieldDesc::new(FieldKind::EqualChar, 5, 1, 4).unwrap();
        let dom = EvalDomain::parse("y: vf [0, 12]").unwrap();
        let r = integrate_fiber(&spec, &f, &standard_psi(&f), &Point::new(), &dom).unwrap();
        assert!((r.approx.re - 5.0 / 6.0).abs() < 1e-12);
        assert!(r.converged);
    }

    #[test]
    fn counting_measure_on_zz() {
        let spec = parse_spec("class mot\nvars { k: ZZ }\nsummand {}").unwrap();
        let f = LocalFieldDesc::new(FieldKind::EqualChar, 5, 1, 4).unwrap();
        let dom = EvalDomain::parse("k: zz [0, 10]").unwrap();
        let r = integrate_fiber(&spec, &f, &standard_psi(&f), &Point::new(), &dom).unwrap();
        assert_eq!(r.value, Cyclo::from_int(11));
        assert!(!r.converged);
    }

    #[test]
    fn growing_shells_are_divergent() {
        let spec = parse_spec("class mot\nvars { k: ZZ }\nsummand { alpha: k }").unwrap();
        let f = LocalFieldDesc::new(FieldKind::EqualChar, 5, 1, 4).unwrap();
        let dom = EvalDomain::parse("k: zz [0, 4]").unwrap();
        assert!(matches!(
            integrate_fiber(&spec, &f, &standard_psi(&f), &Point::new(), &dom),
            Err(Error::Divergent { .. })
        ));
    }
}
