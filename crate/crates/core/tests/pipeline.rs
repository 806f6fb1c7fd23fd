use motexp::characters::{enumerate_characters, standard_psi};
use motexp::cyclo::Cyclo;
use motexp::eval::{eval_expfun, eval_motfun, EvalDomain, Point};
use motexp::ir::{parse_spec, validate, Spec};
use motexp::localfield::LocalFieldDesc;
use motexp::transfer::{check_coeff_transfer, check_dependence_transfer, SweepConfig};
use num_rational::BigRational;

fn fixture(name: &str) -> Spec {
    let path = format!("{}/fixtures/{name}.spec", env!("CARGO_MANIFEST_DIR"));
    parse_spec(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn every_fixture_parses_and_validates() {
    let dir = format!("{}/fixtures", env!("CARGO_MANIFEST_DIR"));
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "spec") {
            let spec = parse_spec(&std::fs::read_to_string(&path).unwrap()).unwrap();
            let errors: Vec<_> = validate(&spec).into_iter().filter(|d| !d.warning).collect();
            assert!(errors.is_empty(), "{}: {errors:?}", path.display());
            let again = parse_spec(&spec.to_string()).unwrap();
            assert_eq!(again.to_string(), spec.to_string(), "{}", path.display());
            n += 1;
        }
    }
    assert!(n >= 20);
}

#[test]
fn cube_roots_of_unity_are_counted() {
    let spec = fixture("rfzz_cube_roots");
    for args in ["eq,3,3,4", "mixed,3,3,4", "eq,13,1,4", "mixed,11,1,4", "eq,5,2,4"] {
        let f = LocalFieldDesc::parse_args(args).unwrap();
        let want = if f.q() % 3 == 1 { 3 } else { 1 };
        let v = eval_motfun(&spec, &f, &Point::new()).unwrap();
        assert_eq!(v, BigRational::from_integer(want.into()), "{args}");
    }
}

#[test]
fn ce_values_agree_across_the_family() {
    let spec = fixture("ce_twisted_gauss");
    let f = LocalFieldDesc::parse_args("mixed,7,1,6").unwrap();
    let dom = EvalDomain::parse("x: vf [-1, 1]").unwrap();
    for g in dom.grid(7).unwrap() {
        let x = g.realize(&f).unwrap();
        let base = eval_expfun(&spec, &f, &standard_psi(&f), &x).unwrap();
        for psi in enumerate_characters(&f, 1).unwrap() {
            assert_eq!(eval_expfun(&spec, &f, &psi, &x).unwrap(), base);
        }
    }
}

#[test]
fn twisted_gauss_sum_has_modulus_root_q() {
    let spec = fixture("ce_twisted_gauss");
    for args in ["eq,11,1,6", "mixed,11,1,6"] {
        let f = LocalFieldDesc::parse_args(args).unwrap();
        let x = Point::parse(&spec, &f, "x=3*t^2").unwrap();
        let v = eval_expfun(&spec, &f, &standard_psi(&f), &x).unwrap();
        assert_eq!(v.abs2(), Cyclo::from_int(11));
    }
}

fn config(grid: &str, p_max: u32) -> SweepConfig {
    SweepConfig {
        p_min: 5,
        p_max,
        grid: EvalDomain::parse(grid).unwrap(),
        samples: 12,
        seed: 9,
        ..SweepConfig::default()
    }
}

#[test]
fn coefficient_transfer_agrees() {
    let h1 = fixture("dep_linear");
    let h2 = fixture("dep_cube");
    let c = [BigRational::from_integer(3.into()), BigRational::from_integer((-1).into())];
    let r = check_coeff_transfer(&[&h1, &h2], &c, &config("x: vf [1, 3]", 13)).unwrap();
    assert!(r.records.iter().all(|rec| rec.agree == Some(true)));
    assert!(!r.summary.violated);
}

#[test]
fn dependence_stabilizes_above_three() {
    let hs = [fixture("dep_cube_shift"), fixture("dep_cube")];
    let refs: Vec<&Spec> = hs.iter().collect();
    let mut cfg = config("x: vf [1, 2] digits 2", 13);
    cfg.p_min = 3;
    let r = check_dependence_transfer(&refs, &cfg).unwrap();
    assert!(!r.summary.violated);
    assert_eq!(r.summary.stable_from, Some(5));
}
