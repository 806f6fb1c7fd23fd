//! The presentation language for definable sets, motivic functions and
//! motivic exponential functions.
//!
//! A spec document declares its class, its variables with sorts, the
//! ambient set `X` and a list of summands. The grammar is given in
//! `docs/grammar.ebnf`. Parsing resolves sorts, so every relation in the
//! returned tree knows whether it compares valued field, residue field
//! or value group elements.

mod check;
mod conj;
mod lexer;
mod parser;
mod print;
mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use check::{check_formula_in, check_term_in};
pub use conj::conj_square;
pub use parser::{parse_formula, parse_spec, parse_term};
pub use validate::{validate, Diagnostic};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sort {
    VF,
    RF,
    ZZ,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::VF => "VF",
            Sort::RF => "RF",
            Sort::ZZ => "ZZ",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Int(i64),
    /// The uniformizer `t`.
    Uniformizer,
    Ord(Box<Term>),
    Ac(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Pow(Box<Term>, u32),
    /// Value group term defined by cases.
    Cases(Vec<(Formula, Term)>, Option<Box<Term>>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Term, b: Term) -> Term {
        Term::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn is_zero_literal(&self) -> bool {
        matches!(self, Term::Int(0))
    }

    /// Renames free variables.
    pub fn rename(&self, map: &dyn Fn(&str) -> Option<String>) -> Term {
        let r = |t: &Term| Box::new(t.rename(map));
        match self {
            Term::Var(v) => Term::Var(map(v).unwrap_or_else(|| v.clone())),
            Term::Int(_) | Term::Uniformizer => self.clone(),
            Term::Ord(a) => Term::Ord(r(a)),
            Term::Ac(a) => Term::Ac(r(a)),
            Term::Add(a, b) => Term::Add(r(a), r(b)),
            Term::Sub(a, b) => Term::Sub(r(a), r(b)),
            Term::Mul(a, b) => Term::Mul(r(a), r(b)),
            Term::Neg(a) => Term::Neg(r(a)),
            Term::Pow(a, e) => Term::Pow(r(a), *e),
            Term::Cases(cs, o) => Term::Cases(
                cs.iter().map(|(f, t)| (f.rename(map), t.rename(map))).collect(),
                o.as_ref().map(|t| r(t)),
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl RelOp {
    pub fn symbol(self) -> &'static str {
        match self {
            RelOp::Eq => "=",
            RelOp::Ne => "!=",
            RelOp::Lt => "<",
            RelOp::Le => "<=",
            RelOp::Gt => ">",
            RelOp::Ge => ">=",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    /// `lhs op rhs`; the sort is filled in by the sort checker.
    Rel {
        op: RelOp,
        lhs: Term,
        rhs: Term,
        sort: Sort,
    },
    /// `lhs = rhs mod modulus` on the value group.
    Cong { lhs: Term, rhs: Term, modulus: u64 },
    /// Quantifier over a residue variable, or over a bounded value group window.
    Quant {
        q: Quantifier,
        var: String,
        sort: Sort,
        range: Option<(i64, i64)>,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn and(parts: Vec<Formula>) -> Formula {
        let parts: Vec<Formula> = parts.into_iter().filter(|f| *f != Formula::True).collect();
        match parts.len() {
            0 => Formula::True,
            1 => parts.into_iter().next().unwrap(),
            _ => Formula::And(parts),
        }
    }

    pub fn rename(&self, map: &dyn Fn(&str) -> Option<String>) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Not(a) => Formula::Not(Box::new(a.rename(map))),
            Formula::And(v) => Formula::And(v.iter().map(|f| f.rename(map)).collect()),
            Formula::Or(v) => Formula::Or(v.iter().map(|f| f.rename(map)).collect()),
            Formula::Rel { op, lhs, rhs, sort } => Formula::Rel {
                op: *op,
                lhs: lhs.rename(map),
                rhs: rhs.rename(map),
                sort: *sort,
            },
            Formula::Cong { lhs, rhs, modulus } => Formula::Cong {
                lhs: lhs.rename(map),
                rhs: rhs.rename(map),
                modulus: *modulus,
            },
            Formula::Quant {
                q,
                var,
                sort,
                range,
                body,
            } => {
                let bound = var.clone();
                let inner = move |v: &str| if v == bound { None } else { map(v) };
                Formula::Quant {
                    q: *q,
                    var: var.clone(),
                    sort: *sort,
                    range: *range,
                    body: Box::new(body.rename(&inner)),
                }
            }
        }
    }
}

/// `#Y · q^α · Π β_j · Π 1/(1 − q^{a_l})`, one term of a motivic function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotTerm {
    /// Residue variables counted by `count`.
    pub count_vars: Vec<String>,
    pub count: Formula,
    pub alpha: Term,
    pub beta: Vec<Term>,
    pub geom: Vec<i64>,
}

impl MotTerm {
    /// The constant 1.
    pub fn unit() -> MotTerm {
        MotTerm {
            count_vars: Vec::new(),
            count: Formula::True,
            alpha: Term::Int(0),
            beta: Vec::new(),
            geom: Vec::new(),
        }
    }
}

/// The valued field argument `g`: the first case whose guard holds, else `otherwise`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GCases {
    pub cases: Vec<(Formula, Term)>,
    pub otherwise: Option<Term>,
}

impl GCases {
    pub fn zero() -> GCases {
        GCases::default()
    }

    /// True when every value is the zero term (an absent `g` is zero).
    pub fn is_zero(&self) -> bool {
        self.cases.iter().all(|(_, t)| t.is_zero_literal())
            && self.otherwise.as_ref().is_none_or(Term::is_zero_literal)
    }
}

/// `H_i(x) · Σ_{y ∈ Y_i(x)} ψ(g_i(x, y) + e_i(x, y))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpSummand {
    pub h: Vec<MotTerm>,
    pub y_vars: Vec<String>,
    pub y: Formula,
    pub g: GCases,
    pub e: Term,
}

impl ExpSummand {
    pub fn unit() -> ExpSummand {
        ExpSummand {
            h: vec![MotTerm::unit()],
            y_vars: Vec::new(),
            y: Formula::True,
            g: GCases::zero(),
            e: Term::Int(0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpecClass {
    /// Motivic function.
    Mot,
    /// Motivic exponential function.
    Exp,
    /// Motivic exponential function with residue-only oscillation.
    Ce,
}

impl SpecClass {
    pub fn keyword(self) -> &'static str {
        match self {
            SpecClass::Mot => "mot",
            SpecClass::Exp => "exp",
            SpecClass::Ce => "ce",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub sort: Sort,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    Mot(Vec<MotTerm>),
    Exp(Vec<ExpSummand>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spec {
    pub class: SpecClass,
    pub vars: Vec<VarDecl>,
    pub set: Formula,
    pub body: Body,
}

impl Spec {
    pub fn sort_of(&self, name: &str) -> Option<Sort> {
        self.vars.iter().find(|v| v.name == name).map(|v| v.sort)
    }

    /// The summands in exponential form; a motivic body becomes one summand per term.
    pub fn exp_summands(&self) -> Vec<ExpSummand> {
        match &self.body {
            Body::Exp(s) => s.clone(),
            Body::Mot(terms) => terms
                .iter()
                .map(|t| ExpSummand {
                    h: vec![t.clone()],
                    ..ExpSummand::unit()
                })
                .collect(),
        }
    }

    /// True when every `g` is the zero term.
    pub fn has_residue_only_oscillation(&self) -> bool {
        match &self.body {
            Body::Mot(_) => true,
            Body::Exp(s) => s.iter().all(|s| s.g.is_zero()),
        }
    }

    pub fn var_names(&self, sort: Sort) -> Vec<String> {
        self.vars.iter().filter(|v| v.sort == sort).map(|v| v.name.clone()).collect()
    }
}

impl fmt::Display for Spec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::print_spec(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::print_term(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::print_formula(self))
    }
}

/// Words that cannot be used as variable names.
pub const RESERVED: &[&str] = &[
    "t", "ord", "ac", "cases", "when", "otherwise", "and", "or", "not", "exists", "forall", "true", "false", "in",
    "mod", "VF", "RF", "ZZ",
];
