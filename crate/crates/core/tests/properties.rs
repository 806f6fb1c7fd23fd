use motexp::cyclo::Cyclo;
use motexp::fourier::{fourier_transform, plancherel_check, FiniteAbelianGroup, GroupFunction};
use motexp::lindep::{cramer, det};
use motexp::localfield::{FieldKind, LocalFieldDesc, ValuedElem};
use proptest::prelude::*;

fn field(mixed: bool, p: u64) -> LocalFieldDesc {
    let kind = if mixed { FieldKind::MixedChar } else { FieldKind::EqualChar };
    LocalFieldDesc::new(kind, p, 1, 6).unwrap()
}

fn elem(f: &LocalFieldDesc, v: i64, d: &[u32]) -> ValuedElem {
    let k = f.residue();
    let digits: Vec<_> = d.iter().map(|&i| k.elem(i % k.q()).unwrap()).collect();
    ValuedElem::from_digits(f, v, &digits).unwrap()
}

fn cyclo(terms: &[(i64, i64)], m: u64) -> Cyclo {
    terms
        .iter()
        .map(|&(c, k)| &Cyclo::from_int(c) * &Cyclo::zeta(m, k).unwrap())
        .sum()
}

proptest! {
    #[test]
    fn ring_laws(mixed: bool, p in prop::sample::select(vec![3u64, 5, 7]), va in -2i64..3, vb in -2i64..3,
                 da in prop::collection::vec(0u32..7, 1..5), db in prop::collection::vec(0u32..7, 1..5)) {
        let f = field(mixed, p);
        let (a, b) = (elem(&f, va, &da), elem(&f, vb, &db));
        prop_assert!(a.add(&b).unwrap().equals_within_precision(&b.add(&a).unwrap()).unwrap());
        prop_assert!(a.mul(&b).unwrap().equals_within_precision(&b.mul(&a).unwrap()).unwrap());
        let s = a.add(&b).unwrap().sub(&b).unwrap();
        prop_assert!(s.equals_within_precision(&a).unwrap());
        if !a.is_zero() && !b.is_zero() {
            prop_assert_eq!(a.mul(&b).unwrap().ord().finite(), Some(a.ord().finite().unwrap() + b.ord().finite().unwrap()));
            let k = f.residue();
            prop_assert_eq!(a.mul(&b).unwrap().ac(), k.mul(a.ac(), b.ac()));
            prop_assert!(a.mul(&a.inv().unwrap()).unwrap().equals_within_precision(&ValuedElem::one(&f)).unwrap());
        }
    }

    #[test]
    fn cyclotomic_field_laws(a in prop::collection::vec((-3i64..4, 0i64..12), 1..4),
                             b in prop::collection::vec((-3i64..4, 0i64..12), 1..4)) {
        let (x, y) = (cyclo(&a, 12), cyclo(&b, 12));
        prop_assert_eq!(x.try_mul(&y).unwrap().abs2(), x.abs2().try_mul(&y.abs2()).unwrap());
        prop_assert!(x.abs2().real_sign().unwrap() != std::cmp::Ordering::Less);
        if !y.is_zero() {
            prop_assert_eq!(x.try_mul(&y).unwrap().try_div(&y).unwrap(), x.clone());
        }
        let z = x.to_complex() * y.to_complex();
        prop_assert!((x.try_mul(&y).unwrap().to_complex() - z).norm() < 1e-9);
    }

    #[test]
    fn fourier_inversion(n in 2u64..9, vals in prop::collection::vec(-4i64..5, 8)) {
        let g = FiniteAbelianGroup::cyclic(n).unwrap();
        let f = GroupFunction::new(g.clone(), (0..n as usize).map(|i| Cyclo::from_int(vals[i])).collect()).unwrap();
        prop_assert!(plancherel_check(&f).unwrap());
        let twice = fourier_transform(&fourier_transform(&f).unwrap()).unwrap();
        for x in 0..n {
            let back = &twice.values()[g.neg(x) as usize];
            prop_assert_eq!(back.clone(), Cyclo::from_int(n as i64 * vals[x as usize]));
        }
    }

    #[test]
    fn cramer_solves(m in prop::collection::vec(-5i64..6, 9), g in prop::collection::vec(-5i64..6, 3)) {
        let rows: Vec<Vec<Cyclo>> = m.chunks(3).map(|r| r.iter().map(|&v| Cyclo::from_int(v)).collect()).collect();
        let rhs: Vec<Cyclo> = g.iter().map(|&v| Cyclo::from_int(v)).collect();
        if det(&rows).unwrap().is_zero() {
            prop_assert!(cramer(&rows, &rhs).is_err());
        } else {
            let sol = cramer(&rows, &rhs).unwrap();
            for (row, want) in rows.iter().zip(&rhs) {
                let got: Cyclo = row.iter().zip(&sol.coeffs).map(|(a, c)| a.try_mul(c).unwrap()).sum();
                prop_assert_eq!(&got, want);
            }
        }
    }
}
