use super::lexer::{tokenize, Tok, Token};
use super::{
    check, Body, ExpSummand, Formula, GCases, MotTerm, Quantifier, RelOp, Sort, Spec, SpecClass, Term, VarDecl,
    RESERVED,
};
use crate::error::{Error, Result};

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn err(&self, msg: impl Into<String>) -> Error {
        let t = &self.toks[self.pos];
        Error::Parse {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        }
    }

    pub(crate) fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    pub(crate) fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == w)
    }

    pub(crate) fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn eat_word(&mut self, w: &str) -> bool {
        if self.at_word(w) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`, found {}", describe(self.peek()))))
        }
    }

    pub(crate) fn expect_word(&mut self, w: &str) -> Result<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{w}`, found {}", describe(self.peek()))))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.err(format!("expected a name, found {}", describe(&other)))),
        }
    }

    fn var_name(&mut self) -> Result<String> {
        let save = self.pos;
        let s = self.ident()?;
        if RESERVED.contains(&s.as_str()) {
            self.pos = save;
            return Err(self.err(format!("`{s}` is reserved and cannot name a variable")));
        }
        Ok(s)
    }

    pub(crate) fn uint(&mut self) -> Result<u64> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            other => Err(self.err(format!("expected an integer, found {}", describe(&other)))),
        }
    }

    pub(crate) fn int(&mut self) -> Result<i64> {
        let neg = self.eat_sym("-");
        let n = self.uint()?;
        let n = i64::try_from(n).map_err(|_| self.err("integer literal is too large"))?;
        Ok(if neg { -n } else { n })
    }

    pub(crate) fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    fn skip_separators(&mut self) {
        while self.eat_sym(";") || self.eat_sym(",") {}
    }

    // -- terms ------------------------------------------------------------------

    pub(crate) fn term(&mut self) -> Result<Term> {
        let mut acc = self.addend()?;
        loop {
            if self.eat_sym("+") {
                acc = Term::Add(Box::new(acc), Box::new(self.addend()?));
            } else if self.eat_sym("-") {
                acc = Term::Sub(Box::new(acc), Box::new(self.addend()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn addend(&mut self) -> Result<Term> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_sym("*") {
                acc = Term::Mul(Box::new(acc), Box::new(self.unary()?));
            } else if self.at_sym("/") {
                return Err(self.err("terms are polynomial: division is not allowed"));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Term> {
        if self.eat_sym("-") {
            return Ok(match self.unary()? {
                Term::Int(n) => Term::Int(-n),
                t => Term::Neg(Box::new(t)),
            });
        }
        let base = self.primary()?;
        if self.eat_sym("^") {
            if self.at_sym("-") {
                return Err(self.err("terms are polynomial: negative exponents are not allowed"));
            }
            let e = self.uint()?;
            let e = u32::try_from(e).map_err(|_| self.err("exponent is too large"))?;
            return Ok(Term::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Term::Int(i64::try_from(n).map_err(|_| self.err("integer literal is too large"))?))
            }
            Tok::Sym("(") => {
                self.bump();
                let t = self.term()?;
                self.expect_sym(")")?;
                Ok(t)
            }
            Tok::Ident(w) => match w.as_str() {
                "t" => {
                    self.bump();
                    Ok(Term::Uniformizer)
                }
                "ord" | "ac" => {
                    self.bump();
                    self.expect_sym("(")?;
                    let t = self.term()?;
                    self.expect_sym(")")?;
                    Ok(if w == "ord" {
                        Term::Ord(Box::new(t))
                    } else {
                        Term::Ac(Box::new(t))
                    })
                }
                "cases" => {
                    self.bump();
                    let (cases, otherwise) = self.case_list()?;
                    Ok(Term::Cases(cases, otherwise.map(Box::new)))
                }
                _ => Ok(Term::Var(self.var_name()?)),
            },
            other => Err(self.err(format!("expected a term, found {}", describe(&other)))),
        }
    }

    fn case_list(&mut self) -> Result<(Vec<(Formula, Term)>, Option<Term>)> {
        self.expect_sym("{")?;
        let mut cases = Vec::new();
        let mut otherwise = None;
        loop {
            self.skip_separators();
            if self.eat_sym("}") {
                break;
            }
            if self.eat_word("when") {
                let f = self.formula()?;
                self.expect_sym("=>")?;
                let t = self.term()?;
                cases.push((f, t));
            } else if self.eat_word("otherwise") {
                if otherwise.is_some() {
                    return Err(self.err("duplicate `otherwise` case"));
                }
                self.expect_sym("=>")?;
                otherwise = Some(self.term()?);
            } else {
                return Err(self.err(format!("expected `when`, `otherwise` or `}}`, found {}", describe(self.peek()))));
            }
        }
        Ok((cases, otherwise))
    }

    // -- formulas ---------------------------------------------------------------

    pub(crate) fn formula(&mut self) -> Result<Formula> {
        let first = self.conj()?;
        if !self.at_word("or") {
            return Ok(first);
        }
        let mut parts = vec![first];
        while self.eat_word("or") {
            parts.push(self.conj()?);
        }
        Ok(Formula::Or(parts))
    }

    fn conj(&mut self) -> Result<Formula> {
        let first = self.neg()?;
        if !self.at_word("and") {
            return Ok(first);
        }
        let mut parts = vec![first];
        while self.eat_word("and") {
            parts.push(self.neg()?);
        }
        Ok(Formula::And(parts))
    }

    fn neg(&mut self) -> Result<Formula> {
        if self.eat_word("not") {
            return Ok(Formula::Not(Box::new(self.neg()?)));
        }
        if self.at_word("exists") || self.at_word("forall") {
            return self.quantified();
        }
        self.atom()
    }

    fn quantified(&mut self) -> Result<Formula> {
        let q = if self.eat_word("exists") {
            Quantifier::Exists
        } else {
            self.expect_word("forall")?;
            Quantifier::Forall
        };
        let var = self.var_name()?;
        self.expect_sym(":")?;
        let (sort, range) = if self.eat_word("RF") {
            (Sort::RF, None)
        } else if self.eat_word("ZZ") {
            if !self.eat_word("in") {
                return Err(self.err("unbounded ZZ quantifier: write `in [lo, hi]`"));
            }
            self.expect_sym("[")?;
            let lo = self.int()?;
            self.expect_sym(",")?;
            let hi = self.int()?;
            self.expect_sym("]")?;
            (Sort::ZZ, Some((lo, hi)))
        } else if self.at_word("VF") {
            return Err(self.err("quantifiers over the valued field are not allowed"));
        } else {
            return Err(self.err("expected `RF` or `ZZ`"));
        };
        self.expect_sym(".")?;
        let body = self.formula()?;
        Ok(Formula::Quant {
            q,
            var,
            sort,
            range,
            body: Box::new(body),
        })
    }

    fn atom(&mut self) -> Result<Formula> {
        if self.eat_word("true") {
            return Ok(Formula::True);
        }
        if self.eat_word("false") {
            return Ok(Formula::False);
        }
        if self.at_sym("(") {
            let save = self.pos;
            if let Ok(f) = self.relation() {
                return Ok(f);
            }
            self.pos = save;
            self.bump();
            let f = self.formula()?;
            self.expect_sym(")")?;
            return Ok(f);
        }
        self.relation()
    }

    fn relation(&mut self) -> Result<Formula> {
        let lhs = self.term()?;
        let op = match self.peek() {
            Tok::Sym("=") => RelOp::Eq,
            Tok::Sym("!=") => RelOp::Ne,
            Tok::Sym("<") => RelOp::Lt,
            Tok::Sym("<=") => RelOp::Le,
            Tok::Sym(">") => RelOp::Gt,
            Tok::Sym(">=") => RelOp::Ge,
            other => return Err(self.err(format!("expected a relation, found {}", describe(other)))),
        };
        self.bump();
        let rhs = self.term()?;
        if op == RelOp::Eq && self.eat_word("mod") {
            let n = self.uint()?;
            if n == 0 {
                return Err(self.err("congruence modulus must be positive"));
            }
            return Ok(Formula::Cong { lhs, rhs, modulus: n });
        }
        Ok(Formula::Rel {
            op,
            lhs,
            rhs,
            sort: Sort::ZZ,
        })
    }

    // -- documents --------------------------------------------------------------

    fn binder(&mut self) -> Result<Vec<String>> {
        let mut vars = Vec::new();
        if self.eat_sym("(") {
            loop {
                vars.push(self.var_name()?);
                if self.eat_sym(")") {
                    break;
                }
                self.expect_sym(",")?;
            }
        }
        Ok(vars)
    }

    fn mot_item(&mut self, m: &mut MotTerm, seen: &mut Vec<&'static str>) -> Result<bool> {
        let key = match self.peek() {
            Tok::Ident(w) if ["count", "alpha", "beta", "geom"].contains(&w.as_str()) => w.clone(),
            _ => return Ok(false),
        };
        self.bump();
        match key.as_str() {
            "count" => {
                once(self, seen, "count")?;
                m.count_vars = self.binder()?;
                self.expect_sym(":")?;
                m.count = self.formula()?;
            }
            "alpha" => {
                once(self, seen, "alpha")?;
                self.expect_sym(":")?;
                m.alpha = self.term()?;
            }
            "beta" => {
                self.expect_sym(":")?;
                m.beta.push(self.term()?);
            }
            _ => {
                self.expect_sym(":")?;
                let a = self.int()?;
                if a == 0 {
                    return Err(self.err("zero geometric exponent"));
                }
                m.geom.push(a);
            }
        }
        Ok(true)
    }

    fn mot_block(&mut self) -> Result<MotTerm> {
        self.expect_sym("{")?;
        let mut m = MotTerm::unit();
        let mut seen = Vec::new();
        loop {
            self.skip_separators();
            if self.eat_sym("}") {
                return Ok(m);
            }
            if !self.mot_item(&mut m, &mut seen)? {
                return Err(self.err(format!(
                    "expected `count`, `alpha`, `beta`, `geom` or `}}`, found {}",
                    describe(self.peek())
                )));
            }
        }
    }

    fn exp_block(&mut self) -> Result<ExpSummand> {
        self.expect_sym("{")?;
        let mut s = ExpSummand::unit();
        let mut seen = Vec::new();
        loop {
            self.skip_separators();
            if self.eat_sym("}") {
                return Ok(s);
            }
            let key = self.ident()?;
            match key.as_str() {
                "H" => {
                    once(self, &mut seen, "H")?;
                    self.expect_sym("{")?;
                    let mut terms = Vec::new();
                    loop {
                        self.skip_separators();
                        if self.eat_sym("}") {
                            break;
                        }
                        self.expect_word("term")?;
                        terms.push(self.mot_block()?);
                    }
                    s.h = terms;
                }
                "Y" => {
                    once(self, &mut seen, "Y")?;
                    s.y_vars = self.binder()?;
                    self.expect_sym(":")?;
                    s.y = self.formula()?;
                }
                "g" => {
                    once(self, &mut seen, "g")?;
                    if self.eat_sym(":") {
                        s.g = GCases {
                            cases: Vec::new(),
                            otherwise: Some(self.term()?),
                        };
                    } else {
                        let (cases, otherwise) = self.case_list()?;
                        s.g = GCases { cases, otherwise };
                    }
                }
                "e" => {
                    once(self, &mut seen, "e")?;
                    self.expect_sym(":")?;
                    s.e = self.term()?;
                }
                other => {
                    return Err(self.err(format!("unknown summand key `{other}` (expected H, Y, g or e)")));
                }
            }
        }
    }

    fn spec(&mut self) -> Result<Spec> {
        let mut class = None;
        let mut vars: Vec<VarDecl> = Vec::new();
        let mut set = None;
        let mut mot = Vec::new();
        let mut exp = Vec::new();
        loop {
            self.skip_separators();
            if self.at_eof() {
                break;
            }
            let key = self.ident()?;
            match key.as_str() {
                "class" => {
                    if class.is_some() {
                        return Err(self.err("duplicate `class`"));
                    }
                    let w = self.ident()?;
                    class = Some(match w.as_str() {
                        "mot" => SpecClass::Mot,
                        "exp" => SpecClass::Exp,
                        "ce" => SpecClass::Ce,
                        _ => return Err(self.err(format!("unknown class `{w}` (expected mot, exp or ce)"))),
                    });
                }
                "vars" => {
                    self.expect_sym("{")?;
                    loop {
                        self.skip_separators();
                        if self.eat_sym("}") {
                            break;
                        }
                        let name = self.var_name()?;
                        if vars.iter().any(|v| v.name == name) {
                            return Err(self.err(format!("variable `{name}` declared twice")));
                        }
                        self.expect_sym(":")?;
                        let sort = match self.ident()?.as_str() {
                            "VF" => Sort::VF,
                            "RF" => Sort::RF,
                            "ZZ" => Sort::ZZ,
                            s => return Err(self.err(format!("unknown sort `{s}`"))),
                        };
                        vars.push(VarDecl { name, sort });
                    }
                }
                "set" => {
                    if set.is_some() {
                        return Err(self.err("duplicate `set X`"));
                    }
                    self.expect_word("X")?;
                    self.expect_sym(":")?;
                    set = Some(self.formula()?);
                }
                "summand" => match class {
                    None => return Err(self.err("`class` must be declared before the first summand")),
                    Some(SpecClass::Mot) => mot.push(self.mot_block()?),
                    Some(_) => exp.push(self.exp_block()?),
                },
                other => return Err(self.err(format!("unknown top-level key `{other}`"))),
            }
        }
        let class = class.ok_or_else(|| self.err("missing `class`"))?;
        let body = if class == SpecClass::Mot { Body::Mot(mot) } else { Body::Exp(exp) };
        Ok(Spec {
            class,
            vars,
            set: set.unwrap_or(Formula::True),
            body,
        })
    }
}

fn once(p: &Parser, seen: &mut Vec<&'static str>, key: &'static str) -> Result<()> {
    if seen.contains(&key) {
        return Err(p.err(format!("duplicate `{key}`")));
    }
    seen.push(key);
    Ok(())
}

pub(crate) fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(n) => format!("`{n}`"),
        Tok::Real(s) => format!("`{s}`"),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses and sort-checks a spec document.
pub fn parse_spec(src: &str) -> Result<Spec> {
    let mut p = Parser::new(src)?;
    let mut spec = p.spec()?;
    check::check_spec(&mut spec)?;
    Ok(spec)
}

/// Parses a standalone term (no sort checking).
pub fn parse_term(src: &str) -> Result<Term> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    if !p.at_eof() {
        return Err(p.err(format!("unexpected {}", describe(p.peek()))));
    }
    Ok(t)
}

/// Parses a standalone formula (no sort checking).
pub fn parse_formula(src: &str) -> Result<Formula> {
    let mut p = Parser::new(src)?;
    let f = p.formula()?;
    if !p.at_eof() {
        return Err(p.err(format!("unexpected {}", describe(p.peek()))));
    }
    Ok(f)
}
