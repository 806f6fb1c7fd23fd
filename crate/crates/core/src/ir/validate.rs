use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check, Body, Formula, Sort, Spec, SpecClass, Term};
use crate::eval::{Ctx, Point, Value};
use crate::limits;
use crate::localfield::{FieldKind, LocalFieldDesc, ResidueElem, ValuedElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    /// Where the problem sits, e.g. `summand 2, g`.
    pub location: String,
    pub message: String,
    /// Advisory only; the spec is still usable.
    pub warning: bool,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.warning {
            f.write_str("warning: ")?;
        }
        if self.location.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.location, self.message)
        }
    }
}

fn diag(location: impl Into<String>, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        location: location.into(),
        message: message.into(),
        warning: false,
    }
}

/// A guarded case list together with the variables in scope where it occurs.
struct CaseSite<'a> {
    location: String,
    guards: Vec<&'a Formula>,
    has_otherwise: bool,
    scope: Vec<(String, Sort, Option<(i64, i64)>)>,
    /// Conditions that must hold for the case list to be consulted.
    context: Vec<&'a Formula>,
}

fn walk_term<'a>(
    t: &'a Term,
    loc: &str,
    scope: &mut Vec<(String, Sort, Option<(i64, i64)>)>,
    context: &[&'a Formula],
    out: &mut Vec<CaseSite<'a>>,
) {
    match t {
        Term::Var(_) | Term::Int(_) | Term::Uniformizer => {}
        Term::Ord(a) | Term::Ac(a) | Term::Neg(a) | Term::Pow(a, _) => walk_term(a, loc, scope, context, out),
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
            walk_term(a, loc, scope, context, out);
            walk_term(b, loc, scope, context, out);
        }
        Term::Cases(cs, o) => {
            out.push(CaseSite {
                location: format!("{loc}, cases"),
                guards: cs.iter().map(|(g, _)| g).collect(),
                has_otherwise: o.is_some(),
                scope: scope.clone(),
                context: context.to_vec(),
            });
            for (g, v) in cs {
                walk_formula(g, loc, scope, context, out);
                walk_term(v, loc, scope, context, out);
            }
            if let Some(o) = o {
                walk_term(o, loc, scope, context, out);
            }
        }
    }
}

fn walk_formula<'a>(
    f: &'a Formula,
    loc: &str,
    scope: &mut Vec<(String, Sort, Option<(i64, i64)>)>,
    context: &[&'a Formula],
    out: &mut Vec<CaseSite<'a>>,
) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Not(a) => walk_formula(a, loc, scope, context, out),
        Formula::And(v) | Formula::Or(v) => v.iter().for_each(|g| walk_formula(g, loc, scope, context, out)),
        Formula::Rel { lhs, rhs, .. } | Formula::Cong { lhs, rhs, .. } => {
            walk_term(lhs, loc, scope, context, out);
            walk_term(rhs, loc, scope, context, out);
        }
        Formula::Quant {
            var, sort, range, body, ..
        } => {
            scope.push((var.clone(), *sort, *range));
            walk_formula(body, loc, scope, context, out);
            scope.pop();
        }
    }
}

fn collect_sites(spec: &Spec) -> Vec<CaseSite<'_>> {
    let mut out = Vec::new();
    let mut scope: Vec<_> = spec.vars.iter().map(|v| (v.name.clone(), v.sort, None)).collect();
    walk_formula(&spec.set, "set X", &mut scope, &[], &mut out);
    let ctx = [&spec.set];
    match &spec.body {
        Body::Mot(terms) => {
            for (i, m) in terms.iter().enumerate() {
                collect_mot(m, &format!("summand {}", i + 1), &mut scope, &ctx, &mut out);
            }
        }
        Body::Exp(summands) => {
            for (i, s) in summands.iter().enumerate() {
                let loc = format!("summand {}", i + 1);
                for m in &s.h {
                    collect_mot(m, &format!("{loc}, H"), &mut scope, &ctx, &mut out);
                }
                let n = scope.len();
                scope.extend(s.y_vars.iter().map(|v| (v.clone(), Sort::RF, None)));
                let ctx_y = [&spec.set, &s.y];
                walk_formula(&s.y, &format!("{loc}, Y"), &mut scope, &ctx, &mut out);
                walk_term(&s.e, &format!("{loc}, e"), &mut scope, &ctx_y, &mut out);
                if !s.g.cases.is_empty() {
                    out.push(CaseSite {
                        location: format!("{loc}, g"),
                        guards: s.g.cases.iter().map(|(g, _)| g).collect(),
                        has_otherwise: s.g.otherwise.is_some(),
                        scope: scope.clone(),
                        context: ctx_y.to_vec(),
                    });
                }
                for (g, t) in &s.g.cases {
                    walk_formula(g, &format!("{loc}, g"), &mut scope, &ctx_y, &mut out);
                    walk_term(t, &format!("{loc}, g"), &mut scope, &ctx_y, &mut out);
                }
                scope.truncate(n);
            }
        }
    }
    out
}

fn collect_mot<'a>(
    m: &'a super::MotTerm,
    loc: &str,
    scope: &mut Vec<(String, Sort, Option<(i64, i64)>)>,
    ctx: &[&'a Formula],
    out: &mut Vec<CaseSite<'a>>,
) {
    let n = scope.len();
    scope.extend(m.count_vars.iter().map(|v| (v.clone(), Sort::RF, None)));
    walk_formula(&m.count, &format!("{loc}, count"), scope, ctx, out);
    scope.truncate(n);
    walk_term(&m.alpha, &format!("{loc}, alpha"), scope, ctx, out);
    for b in &m.beta {
        walk_term(b, &format!("{loc}, beta"), scope, ctx, out);
    }
}

fn quantifier_widths(f: &Formula, loc: &str, out: &mut Vec<Diagnostic>) {
    match f {
        Formula::Not(a) => quantifier_widths(a, loc, out),
        Formula::And(v) | Formula::Or(v) => v.iter().for_each(|g| quantifier_widths(g, loc, out)),
        Formula::Quant { var, range, body, .. } => {
            if let Some((lo, hi)) = range {
                let width = (*hi as i128 - *lo as i128 + 1) as u128;
                if width > limits::MAX_ENUM as u128 {
                    out.push(diag(
                        loc,
                        format!("quantifier over `{var}` ranges over {width} integers, limit {}", limits::MAX_ENUM),
                    ));
                }
            }
            quantifier_widths(body, loc, out);
        }
        _ => {}
    }
}

const PROBES_PER_FIELD: usize = 300;

fn probe_fields() -> Vec<LocalFieldDesc> {
    [(FieldKind::EqualChar, 3, 2), (FieldKind::EqualChar, 5, 1), (FieldKind::MixedChar, 5, 1)]
        .into_iter()
        .map(|(k, p, f)| LocalFieldDesc::new(k, p, f, 6).expect("probe fields are small"))
        .collect()
}

fn random_value(field: &LocalFieldDesc, sort: Sort, range: Option<(i64, i64)>, rng: &mut ChaCha8Rng) -> Value {
    let q = field.q();
    match sort {
        Sort::VF => {
            if rng.gen_ratio(1, 8) {
                return Value::Vf(ValuedElem::zero(field));
            }
            let v = rng.gen_range(-3..=3);
            let mut digits: Vec<ResidueElem> = (0..field.precision())
                .map(|_| field.residue().elem(rng.gen_range(0..q)).expect("index below q"))
                .collect();
            digits[0] = field.residue().elem(rng.gen_range(1..q)).expect("index below q");
            Value::Vf(ValuedElem::from_digits(field, v, &digits).expect("digits below q"))
        }
        Sort::RF => Value::Rf(field.residue().elem(rng.gen_range(0..q)).expect("index below q")),
        Sort::ZZ => {
            let (lo, hi) = range.unwrap_or((-4, 4));
            Value::Zz(rng.gen_range(lo..=hi))
        }
    }
}

fn probe_site(site: &CaseSite<'_>, out: &mut Vec<Diagnostic>) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut overlap_seen = vec![false; site.guards.len() * site.guards.len()];
    let mut gap_seen = false;
    for field in probe_fields() {
        for _ in 0..PROBES_PER_FIELD {
            let mut point = Point::new();
            for (name, sort, range) in &site.scope {
                point.set(name, random_value(&field, *sort, *range, &mut rng));
            }
            let mut ctx = Ctx::new(&field, &point);
            let inside = site.context.iter().try_fold(true, |acc, f| Ok::<_, crate::Error>(acc && ctx.holds(f)?));
            if !matches!(inside, Ok(true)) {
                continue;
            }
            let mut truths = Vec::with_capacity(site.guards.len());
            let mut undefined = false;
            for g in &site.guards {
                match ctx.holds(g) {
                    Ok(b) => truths.push(b),
                    Err(_) => {
                        undefined = true;
                        break;
                    }
                }
            }
            if undefined {
                continue;
            }
            for i in 0..truths.len() {
                for j in i + 1..truths.len() {
                    let k = i * truths.len() + j;
                    if truths[i] && truths[j] && !overlap_seen[k] {
                        overlap_seen[k] = true;
                        out.push(diag(
                            &site.location,
                            format!("guards {} and {} overlap at {point} in {}", i + 1, j + 1, field.tag()),
                        ));
                    }
                }
            }
            if !site.has_otherwise && !truths.iter().any(|&b| b) && !gap_seen {
                gap_seen = true;
                out.push(diag(
                    &site.location,
                    format!("no guard holds at {point} in {} and there is no `otherwise`", field.tag()),
                ));
            }
        }
    }
}

/// Diagnostics for a parsed spec; empty when the spec is well formed.
///
/// Sorts, quantifier windows, geometric exponents and the `ce` class claim
/// are checked exactly. Case lists are checked for overlaps and gaps on
/// seeded random probes in a few small fields, so a clean result is evidence,
/// not proof, of exhaustiveness and exclusivity.
pub fn validate(spec: &Spec) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut copy = spec.clone();
    if let Err(e) = check::check_spec(&mut copy) {
        out.push(diag("", e.to_string()));
        return out;
    }
    quantifier_widths(&spec.set, "set X", &mut out);
    for (i, s) in spec.exp_summands().iter().enumerate() {
        let loc = format!("summand {}", i + 1);
        quantifier_widths(&s.y, &loc, &mut out);
        for m in &s.h {
            quantifier_widths(&m.count, &loc, &mut out);
            if m.geom.contains(&0) {
                out.push(diag(&loc, "zero geometric exponent"));
            }
        }
        if spec.class == SpecClass::Ce && !s.g.is_zero() {
            out.push(diag(format!("{loc}, g"), "not in 𝒞ᵉ: class ce needs every g case to be 0"));
        }
        if s.y_vars.len() as u32 > 4 || s.h.iter().any(|m| m.count_vars.len() > 4) {
            out.push(Diagnostic {
                warning: true,
                ..diag(&loc, "more than 4 residue variables; enumeration is only feasible for tiny q")
            });
        }
    }
    for site in collect_sites(spec) {
        probe_site(&site, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::parse_spec;

    #[test]
    fn gauss_spec_is_clean() {
        let s = parse_spec("class ce\nsummand { Y (y): true; e: y^2 }").unwrap();
        assert!(validate(&s).is_empty());
    }

    #[test]
    fn ce_claim_with_polar_part() {
        let s = parse_spec("class ce\nvars { x: VF }\nsummand { g: x }").unwrap();
        let d = validate(&s);
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("not in 𝒞ᵉ"));
    }

    #[test]
    fn overlapping_guards_are_named() {
        let s = parse_spec(
            "class exp\nvars { x: VF }\nsummand {\n g {\n  when ord(x) >= 0 => 0\n  when ord(x) <= 0 => x\n  otherwise => 0\n }\n}",
        )
        .unwrap();
        let d = validate(&s);
        assert_eq!(d.len(), 1, "{d:?}");
        assert!(d[0].message.contains("guards 1 and 2 overlap"));
    }

    #[test]
    fn gaps_are_reported() {
        let s = parse_spec("class mot\nvars { k: ZZ }\nsummand { beta: cases { when k > 0 => k } }").unwrap();
        let d = validate(&s);
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("no guard holds"));
        let ok = parse_spec("class mot\nvars { k: ZZ }\nsummand { beta: cases { when k > 0 => k; when k <= 0 => 1 } }")
            .unwrap();
        assert!(validate(&ok).is_empty());
    }

    #[test]
    fn guards_are_probed_only_inside_x() {
        let s = parse_spec(
            "class exp\nvars { x: VF }\nset X: ord(x) >= 1\nsummand { g { when ord(x) >= 1 => 0 } }",
        )
        .unwrap();
        assert!(validate(&s).is_empty());
    }
}
