use std::collections::HashSet;

use super::{ExpSummand, Formula, MotTerm, Spec, SpecClass, Term};
use crate::error::{Error, Result};

fn term_names(t: &Term, out: &mut HashSet<String>) {
    match t {
        Term::Var(v) => {
            out.insert(v.clone());
        }
        Term::Int(_) | Term::Uniformizer => {}
        Term::Ord(a) | Term::Ac(a) | Term::Neg(a) | Term::Pow(a, _) => term_names(a, out),
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
            term_names(a, out);
            term_names(b, out);
        }
        Term::Cases(cs, o) => {
            for (f, v) in cs {
                formula_names(f, out);
                term_names(v, out);
            }
            if let Some(o) = o {
                term_names(o, out);
            }
        }
    }
}

fn formula_names(f: &Formula, out: &mut HashSet<String>) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Not(a) => formula_names(a, out),
        Formula::And(v) | Formula::Or(v) => v.iter().for_each(|g| formula_names(g, out)),
        Formula::Rel { lhs, rhs, .. } | Formula::Cong { lhs, rhs, .. } => {
            term_names(lhs, out);
            term_names(rhs, out);
        }
        Formula::Quant { var, body, .. } => {
            out.insert(var.clone());
            formula_names(body, out);
        }
    }
}

fn mot_names(m: &MotTerm, out: &mut HashSet<String>) {
    out.extend(m.count_vars.iter().cloned());
    formula_names(&m.count, out);
    term_names(&m.alpha, out);
    m.beta.iter().for_each(|b| term_names(b, out));
}

fn spec_names(spec: &Spec) -> HashSet<String> {
    let mut out: HashSet<String> = spec.vars.iter().map(|v| v.name.clone()).collect();
    formula_names(&spec.set, &mut out);
    for s in spec.exp_summands() {
        s.h.iter().for_each(|m| mot_names(m, &mut out));
        out.extend(s.y_vars.iter().cloned());
        formula_names(&s.y, &mut out);
        for (f, t) in &s.g.cases {
            formula_names(f, &mut out);
            term_names(t, &mut out);
        }
        term_names(&s.e, &mut out);
    }
    out
}

struct Fresh {
    used: HashSet<String>,
}

impl Fresh {
    fn rename_all(&mut self, vars: &[String]) -> Vec<(String, String)> {
        vars.iter()
            .map(|v| {
                let mut n = format!("{v}_c");
                while self.used.contains(&n) {
                    n.push_str("_c");
                }
                self.used.insert(n.clone());
                (v.clone(), n)
            })
            .collect()
    }
}

fn mapper(pairs: &[(String, String)]) -> impl Fn(&str) -> Option<String> + '_ {
    move |v: &str| pairs.iter().find(|(a, _)| a == v).map(|(_, b)| b.clone())
}

fn mot_product(a: &MotTerm, b: &MotTerm, fresh: &mut Fresh) -> MotTerm {
    let pairs = fresh.rename_all(&b.count_vars);
    let map = mapper(&pairs);
    let mut count_vars = a.count_vars.clone();
    count_vars.extend(pairs.iter().map(|(_, n)| n.clone()));
    let alpha = match (&a.alpha, &b.alpha) {
        (Term::Int(0), t) | (t, Term::Int(0)) => t.clone(),
        (x, y) => Term::add(x.clone(), y.clone()),
    };
    MotTerm {
        count_vars,
        count: Formula::and(vec![a.count.clone(), b.count.rename(&map)]),
        alpha,
        beta: a.beta.iter().chain(&b.beta).cloned().collect(),
        geom: a.geom.iter().chain(&b.geom).cloned().collect(),
    }
}

/// A 𝒞ᵉ spec whose value is the squared modulus of the input's value.
///
/// Each pair of summands `(i, j)` contributes `H_i H_j Σ ψ(e_i(y) − e_j(y'))`
/// over `Y_i × Y_j`, with the residue variables of `j` renamed apart.
pub fn conj_square(spec: &Spec) -> Result<Spec> {
    if !spec.has_residue_only_oscillation() {
        return Err(Error::NotCe("the input of conj_square".into()));
    }
    let summands = spec.exp_summands();
    let mut fresh = Fresh {
        used: spec_names(spec),
    };
    let mut out = Vec::new();
    for si in &summands {
        for sj in &summands {
            let mut h = Vec::new();
            for a in &si.h {
                for b in &sj.h {
                    h.push(mot_product(a, b, &mut fresh));
                }
            }
            let pairs = fresh.rename_all(&sj.y_vars);
            let map = mapper(&pairs);
            let ej = sj.e.rename(&map);
            let e = match (&si.e, &ej) {
                (a, Term::Int(0)) => a.clone(),
                (Term::Int(0), b) => Term::Neg(Box::new(b.clone())),
                (a, b) => Term::sub(a.clone(), b.clone()),
            };
            let mut y_vars = si.y_vars.clone();
            y_vars.extend(pairs.iter().map(|(_, n)| n.clone()));
            out.push(ExpSummand {
                h,
                y_vars,
                y: Formula::and(vec![si.y.clone(), sj.y.rename(&map)]),
                g: Default::default(),
                e,
            });
        }
    }
    let mut result = Spec {
        class: SpecClass::Ce,
        vars: spec.vars.clone(),
        set: spec.set.clone(),
        body: super::Body::Exp(out),
    };
    super::check::check_spec(&mut result)?;
    Ok(result)
}
