use super::{Body, ExpSummand, Formula, MotTerm, RelOp, Sort, Spec, Term};
use crate::error::{Error, Result};

struct Env {
    scope: Vec<(String, Sort)>,
}

impl Env {
    fn lookup(&self, name: &str) -> Option<Sort> {
        self.scope.iter().rev().find(|(n, _)| n == name).map(|(_, s)| *s)
    }

    fn bind(&mut self, name: &str, sort: Sort) -> Result<()> {
        if self.lookup(name).is_some() {
            return Err(Error::Sort(format!("variable `{name}` is already bound")));
        }
        self.scope.push((name.to_string(), sort));
        Ok(())
    }

    fn with<T>(&mut self, vars: &[String], sort: Sort, f: impl FnOnce(&mut Env) -> Result<T>) -> Result<T> {
        let n = self.scope.len();
        for v in vars {
            if let Err(e) = self.bind(v, sort) {
                self.scope.truncate(n);
                return Err(e);
            }
        }
        let r = f(self);
        self.scope.truncate(n);
        r
    }
}

/// True when the term mentions no variables, `ord` or cases.
pub(crate) fn is_constant(t: &Term) -> bool {
    match t {
        Term::Int(_) | Term::Uniformizer => true,
        Term::Var(_) | Term::Ord(_) | Term::Ac(_) | Term::Cases(..) => false,
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => is_constant(a) && is_constant(b),
        Term::Neg(a) | Term::Pow(a, _) => is_constant(a),
    }
}

fn infer(t: &Term, env: &Env) -> Option<Sort> {
    match t {
        Term::Var(v) => env.lookup(v),
        Term::Int(_) => None,
        Term::Uniformizer => Some(Sort::VF),
        Term::Ord(_) | Term::Cases(..) => Some(Sort::ZZ),
        Term::Ac(_) => Some(Sort::RF),
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => infer(a, env).or_else(|| infer(b, env)),
        Term::Neg(a) | Term::Pow(a, _) => infer(a, env),
    }
}

fn check_term(t: &mut Term, want: Sort, env: &mut Env) -> Result<()> {
    match t {
        Term::Var(v) => match env.lookup(v) {
            None => Err(Error::Sort(format!("unknown variable `{v}`"))),
            Some(s) if s != want => Err(Error::Sort(format!("`{v}` has sort {s}, expected {want}"))),
            _ => Ok(()),
        },
        Term::Int(_) => Ok(()),
        Term::Uniformizer => {
            if want == Sort::VF {
                Ok(())
            } else {
                Err(Error::Sort(format!("the uniformizer `t` is a VF constant, expected {want}")))
            }
        }
        Term::Ord(a) => {
            if want != Sort::ZZ {
                return Err(Error::Sort(format!("ord(..) has sort ZZ, expected {want}")));
            }
            check_term(a, Sort::VF, env)
        }
        Term::Ac(a) => {
            if want != Sort::RF {
                return Err(Error::Sort(format!("ac(..) has sort RF, expected {want}")));
            }
            check_term(a, Sort::VF, env)
        }
        Term::Add(a, b) | Term::Sub(a, b) => {
            check_term(a, want, env)?;
            check_term(b, want, env)
        }
        Term::Mul(a, b) => {
            if want == Sort::ZZ && !is_constant(a) && !is_constant(b) {
                return Err(Error::Sort("value group terms are linear: a product needs a constant factor".into()));
            }
            check_term(a, want, env)?;
            check_term(b, want, env)
        }
        Term::Neg(a) => check_term(a, want, env),
        Term::Pow(a, _) => {
            if want == Sort::ZZ && !is_constant(a) {
                return Err(Error::Sort("value group terms are linear: powers need a constant base".into()));
            }
            check_term(a, want, env)
        }
        Term::Cases(cs, o) => {
            if want != Sort::ZZ {
                return Err(Error::Sort(format!("definition by cases has sort ZZ, expected {want}")));
            }
            for (f, v) in cs.iter_mut() {
                check_formula(f, env)?;
                check_term(v, Sort::ZZ, env)?;
            }
            if let Some(o) = o {
                check_term(o, Sort::ZZ, env)?;
            }
            Ok(())
        }
    }
}

fn check_formula(f: &mut Formula, env: &mut Env) -> Result<()> {
    match f {
        Formula::True | Formula::False => Ok(()),
        Formula::Not(a) => check_formula(a, env),
        Formula::And(v) | Formula::Or(v) => v.iter_mut().try_for_each(|g| check_formula(g, env)),
        Formula::Rel { op, lhs, rhs, sort } => {
            let s = infer(lhs, env).or_else(|| infer(rhs, env)).unwrap_or(Sort::ZZ);
            if s != Sort::ZZ && !matches!(op, RelOp::Eq | RelOp::Ne) {
                return Err(Error::Sort(format!(
                    "`{}` compares {s} terms; only = and != are allowed outside ZZ",
                    op.symbol()
                )));
            }
            check_term(lhs, s, env)?;
            check_term(rhs, s, env)?;
            *sort = s;
            Ok(())
        }
        Formula::Cong { lhs, rhs, .. } => {
            check_term(lhs, Sort::ZZ, env)?;
            check_term(rhs, Sort::ZZ, env)
        }
        Formula::Quant {
            var, sort, range, body, ..
        } => {
            match (*sort, *range) {
                (Sort::RF, None) => {}
                (Sort::ZZ, Some((lo, hi))) => {
                    if lo > hi {
                        return Err(Error::Sort(format!("empty ZZ quantifier range [{lo}, {hi}]")));
                    }
                }
                (Sort::ZZ, None) => return Err(Error::Sort(format!("unbounded ZZ quantifier over `{var}`"))),
                _ => return Err(Error::Sort("quantifiers over the valued field are not allowed".into())),
            }
            let var = var.clone();
            env.with(&[var], *sort, |env| check_formula(body, env))
        }
    }
}

fn check_mot(m: &mut MotTerm, env: &mut Env) -> Result<()> {
    if m.geom.contains(&0) {
        return Err(Error::Invalid("zero geometric exponent".into()));
    }
    let vars = m.count_vars.clone();
    env.with(&vars, Sort::RF, |env| check_formula(&mut m.count, env))?;
    check_term(&mut m.alpha, Sort::ZZ, env)?;
    for b in &mut m.beta {
        check_term(b, Sort::ZZ, env)?;
    }
    Ok(())
}

fn check_exp(s: &mut ExpSummand, env: &mut Env) -> Result<()> {
    for m in &mut s.h {
        check_mot(m, env)?;
    }
    let vars = s.y_vars.clone();
    env.with(&vars, Sort::RF, |env| {
        check_formula(&mut s.y, env)?;
        for (f, _) in &mut s.g.cases {
            check_formula(f, env)?;
        }
        check_term(&mut s.e, Sort::RF, env)
    })?;
    for (_, t) in &mut s.g.cases {
        check_term(t, Sort::VF, env)?;
    }
    if let Some(t) = &mut s.g.otherwise {
        check_term(t, Sort::VF, env)?;
    }
    Ok(())
}

/// Resolves relation sorts and rejects ill-sorted documents.
pub(crate) fn check_spec(spec: &mut Spec) -> Result<()> {
    let mut env = Env { scope: Vec::new() };
    for v in &spec.vars {
        env.bind(&v.name, v.sort)?;
    }
    check_formula(&mut spec.set, &mut env)?;
    match &mut spec.body {
        Body::Mot(terms) => terms.iter_mut().try_for_each(|m| check_mot(m, &mut env)),
        Body::Exp(summands) => summands.iter_mut().try_for_each(|s| check_exp(s, &mut env)),
    }
}

/// Sort-checks a formula against declared variables.
pub fn check_formula_in(f: &mut Formula, vars: &[(String, Sort)]) -> Result<()> {
    let mut env = Env { scope: vars.to_vec() };
    check_formula(f, &mut env)
}

/// Sort-checks a term of the given sort against declared variables.
pub fn check_term_in(t: &mut Term, sort: Sort, vars: &[(String, Sort)]) -> Result<()> {
    let mut env = Env { scope: vars.to_vec() };
    check_term(t, sort, &mut env)
}
