use super::{Body, ExpSummand, Formula, GCases, MotTerm, Quantifier, Sort, Spec, Term};

fn level(t: &Term) -> u8 {
    match t {
        Term::Add(..) | Term::Sub(..) => 1,
        Term::Mul(..) => 2,
        Term::Neg(..) => 3,
        Term::Int(n) if *n < 0 => 3,
        Term::Pow(..) => 4,
        _ => 5,
    }
}

fn term_at(t: &Term, ctx: u8) -> String {
    let s = match t {
        Term::Var(v) => v.clone(),
        Term::Int(n) => n.to_string(),
        Term::Uniformizer => "t".into(),
        Term::Ord(a) => format!("ord({})", term_at(a, 0)),
        Term::Ac(a) => format!("ac({})", term_at(a, 0)),
        Term::Add(a, b) => format!("{} + {}", term_at(a, 1), term_at(b, 2)),
        Term::Sub(a, b) => format!("{} - {}", term_at(a, 1), term_at(b, 2)),
        Term::Mul(a, b) => format!("{}*{}", term_at(a, 2), term_at(b, 3)),
        Term::Neg(a) => format!("-{}", term_at(a, 4)),
        Term::Pow(a, e) => format!("{}^{e}", term_at(a, 5)),
        Term::Cases(cs, o) => {
            let mut parts: Vec<String> = cs
                .iter()
                .map(|(f, v)| format!("when {} => {}", print_formula(f), term_at(v, 0)))
                .collect();
            if let Some(o) = o {
                parts.push(format!("otherwise => {}", term_at(o, 0)));
            }
            format!("cases {{ {} }}", parts.join("; "))
        }
    };
    if level(t) < ctx {
        format!("({s})")
    } else {
        s
    }
}

pub(super) fn print_term(t: &Term) -> String {
    term_at(t, 0)
}

fn is_atomic(f: &Formula) -> bool {
    matches!(
        f,
        Formula::True | Formula::False | Formula::Rel { .. } | Formula::Cong { .. } | Formula::Not(_)
    )
}

fn wrap(f: &Formula) -> String {
    format!("({})", print_formula(f))
}

pub(super) fn print_formula(f: &Formula) -> String {
    match f {
        Formula::True => "true".into(),
        Formula::False => "false".into(),
        Formula::Rel { op, lhs, rhs, .. } => format!("{} {} {}", print_term(lhs), op.symbol(), print_term(rhs)),
        Formula::Cong { lhs, rhs, modulus } => {
            format!("{} = {} mod {modulus}", print_term(lhs), print_term(rhs))
        }
        Formula::Not(a) => {
            if is_atomic(a) {
                format!("not {}", print_formula(a))
            } else {
                format!("not {}", wrap(a))
            }
        }
        Formula::And(parts) => parts
            .iter()
            .map(|p| if is_atomic(p) { print_formula(p) } else { wrap(p) })
            .collect::<Vec<_>>()
            .join(" and "),
        Formula::Or(parts) => parts
            .iter()
            .map(|p| {
                if is_atomic(p) || matches!(p, Formula::And(_)) {
                    print_formula(p)
                } else {
                    wrap(p)
                }
            })
            .collect::<Vec<_>>()
            .join(" or "),
        Formula::Quant {
            q,
            var,
            sort,
            range,
            body,
        } => {
            let qw = match q {
                Quantifier::Exists => "exists",
                Quantifier::Forall => "forall",
            };
            let dom = match (sort, range) {
                (Sort::ZZ, Some((lo, hi))) => format!("ZZ in [{lo}, {hi}]"),
                (s, _) => s.to_string(),
            };
            format!("{qw} {var}: {dom}. {}", print_formula(body))
        }
    }
}

fn binder(vars: &[String]) -> String {
    if vars.is_empty() {
        String::new()
    } else {
        format!(" ({})", vars.join(", "))
    }
}

fn mot_items(m: &MotTerm) -> Vec<String> {
    let mut items = Vec::new();
    if !m.count_vars.is_empty() || m.count != Formula::True {
        items.push(format!("count{}: {}", binder(&m.count_vars), print_formula(&m.count)));
    }
    if m.alpha != Term::Int(0) {
        items.push(format!("alpha: {}", print_term(&m.alpha)));
    }
    for b in &m.beta {
        items.push(format!("beta: {}", print_term(b)));
    }
    for a in &m.geom {
        items.push(format!("geom: {a}"));
    }
    items
}

fn g_item(g: &GCases) -> Option<String> {
    if g.cases.is_empty() {
        return g.otherwise.as_ref().map(|t| format!("g: {}", print_term(t)));
    }
    let mut s = String::from("g {\n");
    for (f, t) in &g.cases {
        s.push_str(&format!("    when {} => {}\n", print_formula(f), print_term(t)));
    }
    if let Some(o) = &g.otherwise {
        s.push_str(&format!("    otherwise => {}\n", print_term(o)));
    }
    s.push_str("  }");
    Some(s)
}

fn exp_summand(s: &ExpSummand) -> String {
    let mut out = String::from("summand {\n");
    if s.h != vec![MotTerm::unit()] {
        if s.h.is_empty() {
            out.push_str("  H {}\n");
        } else {
            out.push_str("  H {\n");
            for m in &s.h {
                out.push_str(&format!("    term {{ {} }}\n", mot_items(m).join("; ")));
            }
            out.push_str("  }\n");
        }
    }
    if !s.y_vars.is_empty() || s.y != Formula::True {
        out.push_str(&format!("  Y{}: {}\n", binder(&s.y_vars), print_formula(&s.y)));
    }
    if let Some(g) = g_item(&s.g) {
        out.push_str(&format!("  {g}\n"));
    }
    if s.e != Term::Int(0) {
        out.push_str(&format!("  e: {}\n", print_term(&s.e)));
    }
    out.push_str("}\n");
    out
}

pub(super) fn print_spec(spec: &Spec) -> String {
    let mut out = format!("class {}\n", spec.class.keyword());
    if !spec.vars.is_empty() {
        let decls: Vec<String> = spec.vars.iter().map(|v| format!("{}: {}", v.name, v.sort)).collect();
        out.push_str(&format!("vars {{ {} }}\n", decls.join("; ")));
    }
    if spec.set != Formula::True {
        out.push_str(&format!("set X: {}\n", print_formula(&spec.set)));
    }
    match &spec.body {
        Body::Mot(terms) => {
            for m in terms {
                let items = mot_items(m);
                if items.is_empty() {
                    out.push_str("summand {}\n");
                } else {
                    out.push_str("summand {\n");
                    for i in items {
                        out.push_str(&format!("  {i}\n"));
                    }
                    out.push_str("}\n");
                }
            }
        }
        Body::Exp(summands) => {
            for s in summands {
                out.push_str(&exp_summand(s));
            }
        }
    }
    out
}
