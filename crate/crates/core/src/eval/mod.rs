//! Evaluation of terms, formulas and function presentations on a concrete field.

mod domain;
mod integrate;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use domain::{CoordDomain, EvalDomain};
pub use domain::{Cell, Coord, GridPoint};
pub use integrate::{integrate_fiber, FiberIntegral};

use crate::characters::Character;
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::ir::{Body, ExpSummand, Formula, MotTerm, Quantifier, RelOp, Sort, Spec, Term};
use crate::limits;
use crate::localfield::{parse_element, LocalFieldDesc, ResidueElem, Valuation, ValuedElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Vf(ValuedElem),
    Rf(ResidueElem),
    Zz(i64),
}

impl Value {
    pub fn sort(&self) -> Sort {
        match self {
            Value::Vf(_) => Sort::VF,
            Value::Rf(_) => Sort::RF,
            Value::Zz(_) => Sort::ZZ,
        }
    }
}

/// An assignment of values to named variables.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Point {
    vals: Vec<(String, Value)>,
}

impl Point {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, v: Value) -> Self {
        self.set(name, v);
        self
    }

    pub fn set(&mut self, name: &str, v: Value) {
        match self.vals.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = v,
            None => self.vals.push((name.to_string(), v)),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.vals.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.vals.iter().map(|(n, v)| (n.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    /// Merges `other` into a copy of `self`; `other` wins on shared names.
    pub fn merged(&self, other: &Point) -> Point {
        let mut p = self.clone();
        for (n, v) in other.iter() {
            p.set(n, v.clone());
        }
        p
    }

    /// Parses `name=value; …`, or a bare value when the spec has exactly one variable.
    pub fn parse(spec: &Spec, field: &LocalFieldDesc, src: &str) -> Result<Point> {
        let mut p = Point::new();
        let parts: Vec<&str> = src.split(';').map(str::trim).filter(|s| !s.is_empty()).collect();
        for part in parts {
            let (name, text) = match part.split_once('=') {
                Some((n, t)) if spec.sort_of(n.trim()).is_some() => (n.trim().to_string(), t.trim()),
                _ => {
                    if spec.vars.len() != 1 {
                        return Err(Error::Invalid(format!(
                            "`{part}` does not name a variable; write name=value"
                        )));
                    }
                    (spec.vars[0].name.clone(), part)
                }
            };
            let sort = spec
                .sort_of(&name)
                .ok_or_else(|| Error::Invalid(format!("unknown variable `{name}`")))?;
            p.set(&name, parse_value(field, sort, text)?);
        }
        Ok(p)
    }
}

/// Parses a value of the given sort: a field element, a residue polynomial in `a`, or an integer.
pub fn parse_value(field: &LocalFieldDesc, sort: Sort, text: &str) -> Result<Value> {
    Ok(match sort {
        Sort::VF => Value::Vf(parse_element(field, text)?),
        Sort::RF => Value::Rf(parse_element(field, text)?.residue()?),
        Sort::ZZ => Value::Zz(
            text.trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("`{text}` is not an integer")))?,
        ),
    })
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Vf(x) => write!(f, "{x}"),
            Value::Rf(r) => write!(f, "#{}", r.index()),
            Value::Zz(n) => write!(f, "{n}"),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vals.iter().map(|(n, v)| format!("{n}={v}")).collect();
        f.write_str(&parts.join("; "))
    }
}

fn zz_err(msg: &str) -> Error {
    Error::Eval(msg.to_string())
}

/// Evaluation context: a field and a scope of bound variables.
pub struct Ctx<'a> {
    field: &'a LocalFieldDesc,
    scope: Vec<(&'a str, Value)>,
}

impl<'a> Ctx<'a> {
    pub fn new(field: &'a LocalFieldDesc, point: &'a Point) -> Self {
        Ctx {
            field,
            scope: point.iter().map(|(n, v)| (n, v.clone())).collect(),
        }
    }

    fn lookup(&self, name: &str) -> Result<&Value> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| v)
            .ok_or_else(|| Error::Eval(format!("variable `{name}` has no value")))
    }

    pub fn vf(&mut self, t: &'a Term) -> Result<ValuedElem> {
        let f = self.field;
        Ok(match t {
            Term::Var(v) => match self.lookup(v)? {
                Value::Vf(x) => x.clone(),
                other => return Err(Error::Eval(format!("`{v}` holds a {} value, expected VF", other.sort()))),
            },
            Term::Int(n) => ValuedElem::from_int(f, *n),
            Term::Uniformizer => ValuedElem::uniformizer(f),
            Term::Add(a, b) => self.vf(a)?.add(&self.vf(b)?)?,
            Term::Sub(a, b) => self.vf(a)?.sub(&self.vf(b)?)?,
            Term::Mul(a, b) => self.vf(a)?.mul(&self.vf(b)?)?,
            Term::Neg(a) => self.vf(a)?.neg(),
            Term::Pow(a, e) => self.vf(a)?.pow(*e)?,
            _ => return Err(Error::Eval(format!("`{t}` is not a VF term"))),
        })
    }

    pub fn rf(&mut self, t: &'a Term) -> Result<ResidueElem> {
        let k = self.field.residue();
        Ok(match t {
            Term::Var(v) => match self.lookup(v)? {
                Value::Rf(x) => *x,
                other => return Err(Error::Eval(format!("`{v}` holds a {} value, expected RF", other.sort()))),
            },
            Term::Int(n) => k.from_int(*n),
            Term::Ac(a) => self.vf(a)?.checked_ac()?,
            Term::Add(a, b) => {
                let x = self.rf(a)?;
                k.add(x, self.rf(b)?)
            }
            Term::Sub(a, b) => {
                let x = self.rf(a)?;
                k.sub(x, self.rf(b)?)
            }
            Term::Mul(a, b) => {
                let x = self.rf(a)?;
                k.mul(x, self.rf(b)?)
            }
            Term::Neg(a) => k.neg(self.rf(a)?),
            Term::Pow(a, e) => k.pow(self.rf(a)?, *e as u64),
            _ => return Err(Error::Eval(format!("`{t}` is not an RF term"))),
        })
    }

    /// Value group term; `ord(0)` evaluates to `+∞`.
    pub fn zz(&mut self, t: &'a Term) -> Result<Valuation> {
        use Valuation::{Finite, Infinite};
        Ok(match t {
            Term::Var(v) => match self.lookup(v)? {
                Value::Zz(n) => Finite(*n),
                other => return Err(Error::Eval(format!("`{v}` holds a {} value, expected ZZ", other.sort()))),
            },
            Term::Int(n) => Finite(*n),
            Term::Ord(a) => self.vf(a)?.checked_ord()?,
            Term::Add(a, b) => match (self.zz(a)?, self.zz(b)?) {
                (Finite(x), Finite(y)) => Finite(x.checked_add(y).ok_or_else(|| zz_err("value group overflow"))?),
                _ => Infinite,
            },
            Term::Sub(a, b) => match (self.zz(a)?, self.zz(b)?) {
                (Finite(x), Finite(y)) => Finite(x.checked_sub(y).ok_or_else(|| zz_err("value group overflow"))?),
                (Infinite, Finite(_)) => Infinite,
                _ => return Err(zz_err("subtracting ord(0) = +inf")),
            },
            Term::Mul(a, b) => match (self.zz(a)?, self.zz(b)?) {
                (Finite(x), Finite(y)) => Finite(x.checked_mul(y).ok_or_else(|| zz_err("value group overflow"))?),
                (Finite(0), Infinite) | (Infinite, Finite(0)) => Finite(0),
                (Finite(c), Infinite) | (Infinite, Finite(c)) if c > 0 => Infinite,
                _ => return Err(zz_err("negative multiple of ord(0) = +inf")),
            },
            Term::Neg(a) => match self.zz(a)? {
                Finite(x) => Finite(-x),
                Infinite => return Err(zz_err("negating ord(0) = +inf")),
            },
            Term::Pow(a, e) => match self.zz(a)? {
                Finite(x) => Finite(x.checked_pow(*e).ok_or_else(|| zz_err("value group overflow"))?),
                Infinite => return Err(zz_err("power of ord(0) = +inf")),
            },
            Term::Cases(cs, o) => {
                for (g, v) in cs {
                    if self.holds(g)? {
                        return self.zz(v);
                    }
                }
                match o {
                    Some(v) => self.zz(v)?,
                    None => return Err(zz_err("no case applies")),
                }
            }
            _ => return Err(Error::Eval(format!("`{t}` is not a ZZ term"))),
        })
    }

    pub fn holds(&mut self, f: &'a Formula) -> Result<bool> {
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Not(a) => !self.holds(a)?,
            Formula::And(v) => {
                for g in v {
                    if !self.holds(g)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(v) => {
                for g in v {
                    if self.holds(g)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Rel { op, lhs, rhs, sort } => {
                let ord = match sort {
                    Sort::VF => {
                        let eq = self.vf(lhs)?.equals_within_precision(&self.vf(rhs)?)?;
                        return Ok(match op {
                            RelOp::Eq => eq,
                            RelOp::Ne => !eq,
                            _ => return Err(zz_err("order relation on VF terms")),
                        });
                    }
                    Sort::RF => {
                        let eq = self.rf(lhs)? == self.rf(rhs)?;
                        return Ok(match op {
                            RelOp::Eq => eq,
                            RelOp::Ne => !eq,
                            _ => return Err(zz_err("order relation on RF terms")),
                        });
                    }
                    Sort::ZZ => self.zz(lhs)?.cmp(&self.zz(rhs)?),
                };
                use std::cmp::Ordering::*;
                match op {
                    RelOp::Eq => ord == Equal,
                    RelOp::Ne => ord != Equal,
                    RelOp::Lt => ord == Less,
                    RelOp::Le => ord != Greater,
                    RelOp::Gt => ord == Greater,
                    RelOp::Ge => ord != Less,
                }
            }
            Formula::Cong { lhs, rhs, modulus } => match (self.zz(lhs)?, self.zz(rhs)?) {
                (Valuation::Finite(a), Valuation::Finite(b)) => {
                    (a as i128 - b as i128).rem_euclid(*modulus as i128) == 0
                }
                _ => return Err(zz_err("congruence involving ord(0) = +inf")),
            },
            Formula::Quant {
                q,
                var,
                sort,
                range,
                body,
            } => {
                let want = *q == Quantifier::Exists;
                let values: Box<dyn Iterator<Item = Value>> = match (sort, range) {
                    (Sort::RF, _) => Box::new(self.field.residue().elements().map(Value::Rf)),
                    (Sort::ZZ, Some((lo, hi))) => {
                        if (hi - lo) as u64 >= limits::MAX_ENUM {
                            return Err(Error::capacity("ZZ quantifier range", (hi - lo) as u64, limits::MAX_ENUM));
                        }
                        Box::new((*lo..=*hi).map(Value::Zz))
                    }
                    _ => return Err(zz_err("unsupported quantifier")),
                };
                let mut found = !want;
                for v in values {
                    self.scope.push((var.as_str(), v));
                    let r = self.holds(body);
                    self.scope.pop();
                    if r? == want {
                        found = want;
                        break;
                    }
                }
                found
            }
        })
    }

    /// Calls `visit` for every residue tuple satisfying `f`, with the tuple bound in scope.
    pub fn for_each_tuple(
        &mut self,
        vars: &'a [String],
        f: &'a Formula,
        visit: &mut dyn FnMut(&mut Ctx<'a>, &[ResidueElem]) -> Result<()>,
    ) -> Result<()> {
        let q = self.field.q() as u64;
        let total = (q as u128).pow(vars.len() as u32);
        if total > limits::MAX_ENUM as u128 {
            return Err(Error::capacity("residue enumeration", total, limits::MAX_ENUM));
        }
        let base = self.scope.len();
        let mut tuple = vec![ResidueElem::ZERO; vars.len()];
        for v in vars {
            self.scope.push((v.as_str(), Value::Rf(ResidueElem::ZERO)));
        }
        let mut result = Ok(());
        for idx in 0..total as u64 {
            let mut rest = idx;
            for i in (0..vars.len()).rev() {
                tuple[i] = ResidueElem((rest % q) as u32);
                rest /= q;
                self.scope[base + i].1 = Value::Rf(tuple[i]);
            }
            match self.holds(f) {
                Ok(true) => {
                    if let Err(e) = visit(self, &tuple) {
                        result = Err(e);
                        break;
                    }
                }
                Ok(false) => {}
                Err(e) => {
                    result = Err(e);
                    break;
                }
            }
        }
        self.scope.truncate(base);
        result
    }

    /// `H(x)` for a list of motivic terms.
    pub fn mot_value(&mut self, terms: &'a [MotTerm]) -> Result<BigRational> {
        let q = BigInt::from(self.field.q());
        let mut total = BigRational::zero();
        for m in terms {
            let mut count = 0u64;
            self.for_each_tuple(&m.count_vars, &m.count, &mut |_, _| {
                count += 1;
                Ok(())
            })?;
            if count == 0 {
                continue;
            }
            let alpha = match self.zz(&m.alpha)? {
                Valuation::Finite(a) => a,
                Valuation::Infinite => return Err(zz_err("exponent alpha is ord(0) = +inf")),
            };
            let mut v = BigRational::from_integer(BigInt::from(count)) * q_pow(&q, alpha);
            for b in &m.beta {
                match self.zz(b)? {
                    Valuation::Finite(x) => v *= BigRational::from_integer(BigInt::from(x)),
                    Valuation::Infinite => return Err(zz_err("factor beta is ord(0) = +inf")),
                }
            }
            for &a in &m.geom {
                v /= BigRational::one() - q_pow(&q, a);
            }
            total += v;
        }
        Ok(total)
    }

    /// Index of the applicable `g` case; `cases.len()` selects `otherwise`.
    fn g_case(&mut self, s: &'a ExpSummand) -> Result<usize> {
        for (i, (guard, _)) in s.g.cases.iter().enumerate() {
            if self.holds(guard)? {
                return Ok(i);
            }
        }
        Ok(s.g.cases.len())
    }

    fn g_term(s: &'a ExpSummand, slot: usize) -> Result<Option<&'a Term>> {
        let term = if slot < s.g.cases.len() {
            Some(&s.g.cases[slot].1)
        } else {
            s.g.otherwise.as_ref()
        };
        match term {
            Some(t) if !t.is_zero_literal() => Ok(Some(t)),
            Some(_) => Ok(None),
            None if s.g.cases.is_empty() => Ok(None),
            None => Err(zz_err("no case of g applies")),
        }
    }

    /// The value of `g` in the current scope; `None` for the zero term.
    pub fn g_value(&mut self, s: &'a ExpSummand) -> Result<Option<ValuedElem>> {
        let slot = self.g_case(s)?;
        match Self::g_term(s, slot)? {
            Some(t) => Ok(Some(self.vf(t)?)),
            None => Ok(None),
        }
    }

    /// `H_i(x) · Σ_{y ∈ Y_i} ψ(g_i + e_i)` for one summand.
    pub fn summand_value(&mut self, s: &'a ExpSummand, psi: &Character) -> Result<Cyclo> {
        let h = self.mot_value(&s.h)?;
        if h.is_zero() {
            return Ok(Cyclo::zero());
        }
        let m = psi.value_order();
        let p = self.field.p() as u64;
        let step = m / p;
        let k = self.field.residue().clone();
        // g values depend on y only through the guards, so each case is evaluated once
        let mut g_cache: Vec<Option<u64>> = vec![None; s.g.cases.len() + 1];
        let mut counts: HashMap<u64, i64> = HashMap::new();
        self.for_each_tuple(&s.y_vars, &s.y, &mut |ctx, _| {
            let slot = ctx.g_case(s)?;
            let g_exp = match g_cache[slot] {
                Some(e) => e,
                None => {
                    let e = match Ctx::g_term(s, slot)? {
                        Some(t) => psi.exponent(&ctx.vf(t)?)?,
                        None => 0,
                    };
                    g_cache[slot] = Some(e);
                    e
                }
            };
            let e_exp = k.trace(ctx.rf(&s.e)?) as u64 * step;
            *counts.entry((g_exp + e_exp) % m).or_insert(0) += 1;
            Ok(())
        })?;
        let sum = Cyclo::sum_of_roots(m, counts)?;
        Ok(sum.scale(&h))
    }
}

fn q_pow(q: &BigInt, e: i64) -> BigRational {
    let p = num_traits::pow(q.clone(), e.unsigned_abs() as usize);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

fn check_point(spec: &Spec, x: &Point) -> Result<()> {
    for v in &spec.vars {
        match x.get(&v.name) {
            None => return Err(Error::Eval(format!("no value for `{}`", v.name))),
            Some(val) if val.sort() != v.sort => {
                return Err(Error::Eval(format!("`{}` needs a {} value", v.name, v.sort)));
            }
            _ => {}
        }
    }
    Ok(())
}

/// Whether `x` lies in the ambient set `X`.
pub fn in_domain(spec: &Spec, field: &LocalFieldDesc, x: &Point) -> Result<bool> {
    check_point(spec, x)?;
    Ctx::new(field, x).holds(&spec.set)
}

/// All residue tuples `y` with `(x, y)` in `Y`, in lexicographic order of element indices.
pub fn enum_set(
    vars: &[String],
    y: &Formula,
    field: &LocalFieldDesc,
    x: &Point,
) -> Result<Vec<Vec<ResidueElem>>> {
    let mut out = Vec::new();
    Ctx::new(field, x).for_each_tuple(vars, y, &mut |_, t| {
        out.push(t.to_vec());
        Ok(())
    })?;
    Ok(out)
}

fn require_domain(spec: &Spec, field: &LocalFieldDesc, x: &Point) -> Result<()> {
    if !in_domain(spec, field, x)? {
        return Err(Error::Eval(format!("point {x} is not in X")));
    }
    Ok(())
}

/// The exact rational value of a motivic function.
pub fn eval_motfun(spec: &Spec, field: &LocalFieldDesc, x: &Point) -> Result<BigRational> {
    require_domain(spec, field, x)?;
    match &spec.body {
        Body::Mot(terms) => Ctx::new(field, x).mot_value(terms),
        Body::Exp(_) => Err(Error::Invalid("eval_motfun needs a `class mot` spec".into())),
    }
}

/// The exact cyclotomic value of a motivic exponential function at `x` for the character `psi`.
pub fn eval_expfun(spec: &Spec, field: &LocalFieldDesc, psi: &Character, x: &Point) -> Result<Cyclo> {
    require_domain(spec, field, x)?;
    if psi.field() != field {
        return Err(Error::FieldMismatch);
    }
    let mut ctx = Ctx::new(field, x);
    match &spec.body {
        Body::Mot(terms) => Ok(Cyclo::from_rational(&ctx.mot_value(terms)?)),
        Body::Exp(summands) => {
            let mut total = Cyclo::zero();
            for s in summands {
                total = total.try_add(&ctx.summand_value(s, psi)?)?;
            }
            Ok(total)
        }
    }
}

/// Outcome of the scalar inequality `Σ|a_i|² ≤ (Σ|a_i|)² ≤ n·Σ|a_i|²`.
#[derive(Clone, Debug)]
pub struct BasicInequality {
    pub sum_sq: f64,
    pub sq_sum: f64,
    pub n_sum_sq: f64,
    pub holds: bool,
}

/// Checks `Σ|a_i|² ≤ (Σ|a_i|)² ≤ n·Σ|a_i|²`.
///
/// The gaps are `2 Σ_{i<j} |a_i||a_j|` and `Σ_{i<j} (|a_i| − |a_j|)²`, so both
/// hold exactly once every `|a_i|²` is known to be a nonnegative real; that
/// is decided in exact arithmetic. The float columns are for reports.
pub fn basic_inequality(values: &[Cyclo]) -> Result<BasicInequality> {
    let mut holds = true;
    let mut mags = Vec::with_capacity(values.len());
    for a in values {
        let a2 = a.abs2();
        holds &= a2.real_sign()? != std::cmp::Ordering::Less;
        mags.push(a2.to_complex().re.max(0.0).sqrt());
    }
    let n = values.len() as f64;
    let sum_sq: f64 = mags.iter().map(|m| m * m).sum();
    let sum: f64 = mags.iter().sum();
    Ok(BasicInequality {
        sum_sq,
        sq_sum: sum * sum,
        n_sum_sq: n * sum_sq,
        holds,
    })
}
