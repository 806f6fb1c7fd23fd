use std::fmt;

use super::residue::{ResidueElem, ResidueField};
use super::{FieldKind, LocalFieldDesc};
use crate::error::{Error, Result};

/// Value of `ord`, with `+∞` ordered above every integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    /// Zero modulo `ϖ^abs`; `None` is an exact zero.
    Zero { abs: Option<i64> },
    /// `ϖ^val · Σ digits[k] ϖ^k`, known modulo `ϖ^(val + digits.len())`.
    NonZero { val: i64, digits: Vec<ResidueElem> },
}

/// An element of a truncated local field.
///
/// Every nonzero element carries its guaranteed significant digits; the
/// absolute precision is `val + digits.len()`. Cancellation shrinks the
/// digit window, and a sum that cancels completely becomes a zero known
/// only modulo `ϖ^abs`. Such a zero has no angular component: callers
/// that need one get a precision error instead of a made-up digit.
#[derive(Clone, PartialEq, Eq)]
pub struct ValuedElem {
    field: LocalFieldDesc,
    repr: Repr,
}

impl fmt::Debug for ValuedElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// ---------------------------------------------------------------------------
// mixed characteristic mantissas: vectors of f integers mod p^n, reduced by
// the integer lift of the residue modulus.

pub(super) fn mpoly_mul(a: &[u128], b: &[u128], modulus: &[u32], m: u128) -> Vec<u128> {
    let f = modulus.len() - 1;
    let mut prod = vec![0u128; 2 * f - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y % m) % m;
        }
    }
    for k in (f..2 * f - 1).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &mi) in modulus[..f].iter().enumerate() {
            let t = c * mi as u128 % m;
            prod[k - f + i] = (prod[k - f + i] + m - t) % m;
        }
    }
    prod.truncate(f);
    prod
}

/// `Tr(a^i) mod m` for `i < f`, the trace of multiplication by `a^i`.
pub(super) fn mixed_power_traces(k: &ResidueField, m: u128) -> Vec<u128> {
    let f = k.f() as usize;
    let modulus = k.modulus();
    let mut basis_a = vec![0u128; f];
    if f == 1 {
        basis_a[0] = (m - modulus[0] as u128 % m) % m;
    } else {
        basis_a[1] = 1;
    }
    let mut powers = Vec::with_capacity(2 * f);
    let mut cur = vec![0u128; f];
    cur[0] = 1 % m;
    for _ in 0..2 * f {
        powers.push(cur.clone());
        cur = mpoly_mul(&cur, &basis_a, modulus, m);
    }
    (0..f)
        .map(|i| (0..f).fold(0u128, |acc, j| (acc + powers[i + j][j]) % m))
        .collect()
}

fn pow_u128(p: u128, e: usize) -> u128 {
    (0..e).fold(1u128, |acc, _| acc * p)
}

impl ValuedElem {
    fn new(field: &LocalFieldDesc, repr: Repr) -> Self {
        ValuedElem {
            field: field.clone(),
            repr,
        }
    }

    pub fn zero(field: &LocalFieldDesc) -> Self {
        Self::new(field, Repr::Zero { abs: None })
    }

    pub fn one(field: &LocalFieldDesc) -> Self {
        Self::uniformizer_pow(field, 0)
    }

    /// `ϖ^k` at full precision.
    pub fn uniformizer_pow(field: &LocalFieldDesc, k: i64) -> Self {
        let mut digits = vec![ResidueElem::ZERO; field.precision() as usize];
        digits[0] = ResidueElem::ONE;
        Self::new(field, Repr::NonZero { val: k, digits })
    }

    pub fn uniformizer(field: &LocalFieldDesc) -> Self {
        Self::uniformizer_pow(field, 1)
    }

    /// The image of an integer.
    pub fn from_int(field: &LocalFieldDesc, n: i64) -> Self {
        if n == 0 {
            return Self::zero(field);
        }
        let p = field.p() as i64;
        match field.kind() {
            FieldKind::EqualChar => {
                let r = n.rem_euclid(p);
                if r == 0 {
                    return Self::zero(field);
                }
                let mut digits = vec![ResidueElem::ZERO; field.precision() as usize];
                digits[0] = ResidueElem(r as u32);
                Self::new(field, Repr::NonZero { val: 0, digits })
            }
            FieldKind::MixedChar => {
                let mut v = 0i64;
                let mut u = n as i128;
                while u % p as i128 == 0 {
                    u /= p as i128;
                    v += 1;
                }
                let m = field.pn();
                let mut coeffs = vec![0u128; field.f() as usize];
                coeffs[0] = u.rem_euclid(m as i128) as u128;
                Self::from_mixed_window(field, v, &coeffs, field.precision() as usize)
            }
        }
    }

    /// The digit lift of a residue element: `v` placed at position 0.
    pub fn from_residue(field: &LocalFieldDesc, v: ResidueElem) -> Self {
        if v.is_zero() {
            return Self::zero(field);
        }
        let mut digits = vec![ResidueElem::ZERO; field.precision() as usize];
        digits[0] = v;
        Self::new(field, Repr::NonZero { val: 0, digits })
    }

    /// `ϖ^val · Σ digits[k] ϖ^k`, known to `digits.len()` digits (capped at the field precision).
    pub fn from_digits(field: &LocalFieldDesc, val: i64, digits: &[ResidueElem]) -> Result<Self> {
        if let Some(d) = digits.iter().find(|d| d.0 >= field.q()) {
            return Err(Error::Invalid(format!("digit {} out of range for q = {}", d.0, field.q())));
        }
        Ok(Self::normalize(field, val, digits.to_vec()))
    }

    fn normalize(field: &LocalFieldDesc, v0: i64, digits: Vec<ResidueElem>) -> Self {
        let len = digits.len();
        match digits.iter().position(|d| !d.is_zero()) {
            None => Self::new(field, Repr::Zero { abs: Some(v0 + len as i64) }),
            Some(s) => {
                let mut d: Vec<ResidueElem> = digits[s..].to_vec();
                d.truncate(field.precision() as usize);
                Self::new(field, Repr::NonZero { val: v0 + s as i64, digits: d })
            }
        }
    }

    pub fn field(&self) -> &LocalFieldDesc {
        &self.field
    }

    /// `ord(x)`; `+∞` for zero.
    pub fn ord(&self) -> Valuation {
        match &self.repr {
            Repr::Zero { .. } => Valuation::Infinite,
            Repr::NonZero { val, .. } => Valuation::Finite(*val),
        }
    }

    /// `ac(x)`, the leading digit; `0` for zero.
    pub fn ac(&self) -> ResidueElem {
        match &self.repr {
            Repr::Zero { .. } => ResidueElem::ZERO,
            Repr::NonZero { digits, .. } => digits[0],
        }
    }

    /// `ord(x)`, refusing a zero that is only known modulo `ϖ^abs`.
    pub fn checked_ord(&self) -> Result<Valuation> {
        self.require_determined("ord")?;
        Ok(self.ord())
    }

    /// `ac(x)`, refusing a zero that is only known modulo `ϖ^abs`.
    pub fn checked_ac(&self) -> Result<ResidueElem> {
        self.require_determined("ac")?;
        Ok(self.ac())
    }

    fn require_determined(&self, what: &str) -> Result<()> {
        if let Repr::Zero { abs: Some(a) } = self.repr {
            return Err(Error::PrecisionExhausted(format!(
                "{what} of an element known only modulo {}^{a}",
                self.field.uniformizer_symbol()
            )));
        }
        Ok(())
    }

    /// Guaranteed significant digits, leading digit first.
    pub fn digits(&self) -> &[ResidueElem] {
        match &self.repr {
            Repr::Zero { .. } => &[],
            Repr::NonZero { digits, .. } => digits,
        }
    }

    /// Absolute precision `A` (the element is known modulo `ϖ^A`); `None` for an exact zero.
    pub fn abs_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { abs } => *abs,
            Repr::NonZero { val, digits } => Some(val + digits.len() as i64),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { abs: None })
    }

    /// Digit at absolute position `k`.
    pub fn digit_at(&self, k: i64) -> Result<ResidueElem> {
        if let Some(a) = self.abs_precision() {
            if k >= a {
                return Err(Error::PrecisionExhausted(format!(
                    "digit at position {k} is beyond the known precision {a}"
                )));
            }
        }
        Ok(match &self.repr {
            Repr::Zero { .. } => ResidueElem::ZERO,
            Repr::NonZero { val, digits } => {
                if k < *val {
                    ResidueElem::ZERO
                } else {
                    digits[(k - val) as usize]
                }
            }
        })
    }

    /// Reduction modulo the maximal ideal of an integral element.
    pub fn residue(&self) -> Result<ResidueElem> {
        if let Valuation::Finite(v) = self.ord() {
            if v < 0 {
                return Err(Error::Invalid(format!("element of valuation {v} is not integral")));
            }
        }
        self.digit_at(0)
    }

    /// The class modulo the valuation ring: the digits at negative positions.
    pub fn polar_digits(&self) -> Result<Vec<ResidueElem>> {
        match self.ord() {
            Valuation::Finite(v) if v < 0 => (v..0).map(|k| self.digit_at(k)).collect(),
            _ => {
                if let Some(a) = self.abs_precision() {
                    if a < 0 {
                        return Err(Error::PrecisionExhausted(
                            "class modulo the valuation ring is not determined".into(),
                        ));
                    }
                }
                Ok(Vec::new())
            }
        }
    }

    /// Drops digits at positions `>= abs`.
    pub fn truncate_abs(&self, abs: i64) -> Self {
        match &self.repr {
            Repr::Zero { abs: a } => {
                let na = a.map_or(abs, |a| a.min(abs));
                Self::new(&self.field, Repr::Zero { abs: Some(na) })
            }
            Repr::NonZero { val, digits } => {
                if abs >= val + digits.len() as i64 {
                    return self.clone();
                }
                if abs <= *val {
                    return Self::new(&self.field, Repr::Zero { abs: Some(abs) });
                }
                let mut d = digits.clone();
                d.truncate((abs - val) as usize);
                Self::new(&self.field, Repr::NonZero { val: *val, digits: d })
            }
        }
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    // -- windows --------------------------------------------------------------

    fn eq_window(&self, v0: i64, len: usize) -> Vec<ResidueElem> {
        let mut w = vec![ResidueElem::ZERO; len];
        if let Repr::NonZero { val, digits } = &self.repr {
            let s = (val - v0) as usize;
            for (k, d) in digits.iter().enumerate() {
                if s + k >= len {
                    break;
                }
                w[s + k] = *d;
            }
        }
        w
    }

    fn mixed_window(&self, v0: i64, len: usize) -> Vec<u128> {
        let k = self.field.residue();
        let p = k.p() as u128;
        let m = pow_u128(p, len);
        let mut c = vec![0u128; k.f() as usize];
        if let Repr::NonZero { val, digits } = &self.repr {
            let s = (val - v0) as usize;
            let mut place = pow_u128(p, s.min(len));
            for d in digits.iter().take(len.saturating_sub(s)) {
                for (i, ci) in k.coeffs(*d).into_iter().enumerate() {
                    c[i] = (c[i] + ci as u128 * place) % m;
                }
                place *= p;
            }
        }
        c
    }

    fn from_mixed_window(field: &LocalFieldDesc, v0: i64, coeffs: &[u128], len: usize) -> Self {
        let k = field.residue();
        let p = k.p() as u128;
        let mut rest: Vec<u128> = coeffs.to_vec();
        let mut digits = Vec::with_capacity(len);
        let mut cs = vec![0u32; k.f() as usize];
        for _ in 0..len {
            for (i, r) in rest.iter_mut().enumerate() {
                cs[i] = (*r % p) as u32;
                *r /= p;
            }
            digits.push(k.from_coeffs(&cs));
        }
        Self::normalize(field, v0, digits)
    }

    fn mixed_mantissa(&self, len: usize) -> Vec<u128> {
        let v = self.ord().finite().expect("nonzero");
        self.mixed_window(v, len)
    }

    // -- ring operations -----------------------------------------------------

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let field = &self.field;
        if self.is_exact_zero() {
            return Ok(other.clone());
        }
        if other.is_exact_zero() {
            return Ok(self.clone());
        }
        let abs = self.abs_precision().unwrap().min(other.abs_precision().unwrap());
        let v0 = match (self.ord().finite(), other.ord().finite()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => return Ok(Self::new(field, Repr::Zero { abs: Some(abs) })),
        };
        if abs <= v0 {
            return Ok(Self::new(field, Repr::Zero { abs: Some(abs) }));
        }
        let len = (abs - v0) as usize;
        Ok(match field.kind() {
            FieldKind::EqualChar => {
                let k = field.residue();
                let a = self.eq_window(v0, len);
                let b = other.eq_window(v0, len);
                let sum = a.iter().zip(&b).map(|(x, y)| k.add(*x, *y)).collect();
                Self::normalize(field, v0, sum)
            }
            FieldKind::MixedChar => {
                let m = pow_u128(field.p() as u128, len);
                let a = self.mixed_window(v0, len);
                let b = other.mixed_window(v0, len);
                let sum: Vec<u128> = a.iter().zip(&b).map(|(x, y)| (x + y) % m).collect();
                Self::from_mixed_window(field, v0, &sum, len)
            }
        })
    }

    pub fn neg(&self) -> Self {
        let field = &self.field;
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::NonZero { val, digits } => match field.kind() {
                FieldKind::EqualChar => {
                    let k = field.residue();
                    let d = digits.iter().map(|x| k.neg(*x)).collect();
                    Self::new(field, Repr::NonZero { val: *val, digits: d })
                }
                FieldKind::MixedChar => {
                    let len = digits.len();
                    let m = pow_u128(field.p() as u128, len);
                    let c: Vec<u128> = self.mixed_window(*val, len).iter().map(|x| (m - x) % m).collect();
                    Self::from_mixed_window(field, *val, &c, len)
                }
            },
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let field = &self.field;
        if self.is_exact_zero() || other.is_exact_zero() {
            return Ok(Self::zero(field));
        }
        match (&self.repr, &other.repr) {
            (Repr::Zero { abs: Some(a) }, _) => {
                let shift = other.ord().finite().unwrap_or_else(|| other.abs_precision().unwrap());
                Ok(Self::new(field, Repr::Zero { abs: Some(a + shift) }))
            }
            (_, Repr::Zero { .. }) => other.mul(self),
            (Repr::NonZero { val: va, digits: da }, Repr::NonZero { val: vb, digits: db }) => {
                let rel = da.len().min(db.len());
                let val = va + vb;
                Ok(match field.kind() {
                    FieldKind::EqualChar => {
                        let k = field.residue();
                        let mut out = vec![ResidueElem::ZERO; rel];
                        for i in 0..rel {
                            if da[i].is_zero() {
                                continue;
                            }
                            for j in 0..rel - i {
                                out[i + j] = k.add(out[i + j], k.mul(da[i], db[j]));
                            }
                        }
                        Self::normalize(field, val, out)
                    }
                    FieldKind::MixedChar => {
                        let m = pow_u128(field.p() as u128, rel);
                        let a = self.mixed_mantissa(rel);
                        let b = other.mixed_mantissa(rel);
                        let c = mpoly_mul(&a, &b, field.modulus(), m);
                        Self::from_mixed_window(field, val, &c, rel)
                    }
                })
            }
            _ => unreachable!(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let field = &self.field;
        match &self.repr {
            Repr::Zero { abs: None } => Err(Error::DivisionByZero),
            Repr::Zero { .. } => Err(Error::PrecisionExhausted(
                "division by an element with no significant digits".into(),
            )),
            Repr::NonZero { val, digits } => {
                let rel = digits.len();
                let k = field.residue();
                let u0inv = k.inv(digits[0]).expect("leading digit is nonzero");
                Ok(match field.kind() {
                    FieldKind::EqualChar => {
                        let mut w = vec![ResidueElem::ZERO; rel];
                        w[0] = u0inv;
                        for n in 1..rel {
                            let mut s = ResidueElem::ZERO;
                            for i in 1..=n {
                                s = k.add(s, k.mul(digits[i], w[n - i]));
                            }
                            w[n] = k.neg(k.mul(u0inv, s));
                        }
                        Self::normalize(field, -val, w)
                    }
                    FieldKind::MixedChar => {
                        let p = field.p() as u128;
                        let m = pow_u128(p, rel);
                        let u = self.mixed_mantissa(rel);
                        let mut w: Vec<u128> = k.coeffs(u0inv).into_iter().map(|c| c as u128).collect();
                        let mut prec = 1usize;
                        while prec < rel {
                            prec *= 2;
                            // w <- w (2 - u w)
                            let uw = mpoly_mul(&u, &w, field.modulus(), m);
                            let mut t: Vec<u128> = uw.iter().map(|x| (m - x) % m).collect();
                            t[0] = (t[0] + 2) % m;
                            w = mpoly_mul(&w, &t, field.modulus(), m);
                        }
                        Self::from_mixed_window(field, -val, &w, rel)
                    }
                })
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if other.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_exact_zero() {
            return Ok(Self::zero(&self.field));
        }
        if let Repr::Zero { abs: Some(a) } = self.repr {
            let shift = other.ord().finite().ok_or_else(|| {
                Error::PrecisionExhausted("division by an element with no significant digits".into())
            })?;
            return Ok(Self::new(&self.field, Repr::Zero { abs: Some(a - shift) }));
        }
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Equality up to the precision both operands guarantee.
    pub fn equals_within_precision(&self, other: &Self) -> Result<bool> {
        Ok(self.sub(other)?.is_zero())
    }

    /// `p^d · x mod p^(d+1)` as a mantissa vector; mixed characteristic only.
    pub(crate) fn scaled_window(&self, d: u32) -> Result<Vec<u128>> {
        debug_assert_eq!(self.field.kind(), FieldKind::MixedChar);
        if let Some(a) = self.abs_precision() {
            if a < 1 {
                return Err(Error::PrecisionExhausted(format!(
                    "character argument known only modulo {}^{a}",
                    self.field.uniformizer_symbol()
                )));
            }
        }
        if let Valuation::Finite(v) = self.ord() {
            if v < -(d as i64) {
                return Err(Error::DepthExceeded { depth: d, valuation: v });
            }
        }
        Ok(self.mixed_window(-(d as i64), d as usize + 1))
    }
}

impl fmt::Display for ValuedElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_element(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq5() -> LocalFieldDesc {
        LocalFieldDesc::new(FieldKind::EqualChar, 5, 1, 8).unwrap()
    }

    fn q5() -> LocalFieldDesc {
        LocalFieldDesc::new(FieldKind::MixedChar, 5, 1, 8).unwrap()
    }

    fn poly(field: &LocalFieldDesc, terms: &[(i64, i64)]) -> ValuedElem {
        let mut acc = ValuedElem::zero(field);
        for &(c, k) in terms {
            let t = ValuedElem::from_int(field, c).mul(&ValuedElem::uniformizer_pow(field, k)).unwrap();
            acc = acc.add(&t).unwrap();
        }
        acc
    }

    #[test]
    fn cancellation_in_equal_char() {
        let f = eq5();
        let x = poly(&f, &[(3, 2), (1, 4)]);
        let y = poly(&f, &[(2, 2)]);
        let s = x.add(&y).unwrap();
        assert_eq!(s.ord(), Valuation::Finite(4));
        assert_eq!(s.ac(), ResidueElem(1));
        // the hand sum digit by digit: positions 2 and 4
        assert_eq!(s.digit_at(2).unwrap(), ResidueElem::ZERO);
        assert_eq!(s.digit_at(4).unwrap(), ResidueElem(1));
        assert_eq!(x.ord(), Valuation::Finite(2));
        assert_eq!(x.ac(), ResidueElem(3));
    }

    #[test]
    fn mixed_products_and_ac() {
        let f = q5();
        let ten = ValuedElem::from_int(&f, 10);
        assert_eq!(ten.ord(), Valuation::Finite(1));
        assert_eq!(ten.ac(), ResidueElem(2));
        let fifty = ten.mul(&ValuedElem::from_int(&f, 5)).unwrap();
        assert_eq!(fifty.ord(), Valuation::Finite(2));
        assert_eq!(fifty.ac(), ResidueElem(2));
        assert_eq!(fifty, ValuedElem::from_int(&f, 50));
    }

    #[test]
    fn multiplicative_identity_and_zero() {
        for f in [eq5(), q5()] {
            let x = poly(&f, &[(3, -1), (4, 0), (1, 3)]);
            assert_eq!(x.mul(&ValuedElem::one(&f)).unwrap(), x);
            let z = ValuedElem::zero(&f);
            assert_eq!(z.ord(), Valuation::Infinite);
            assert_eq!(z.ac(), ResidueElem::ZERO);
            assert!(z.digits().is_empty());
        }
    }

    #[test]
    fn mixed_carries() {
        let f = q5();
        let a = ValuedElem::from_int(&f, 3);
        let b = ValuedElem::from_int(&f, 4);
        let s = a.add(&b).unwrap();
        assert_eq!(s, ValuedElem::from_int(&f, 7));
        assert_eq!(s.digits()[..2], [ResidueElem(2), ResidueElem(1)]);
        let minus_one = ValuedElem::from_int(&f, -1);
        assert!(minus_one.digits().iter().all(|d| *d == ResidueElem(4)));
    }

    #[test]
    fn division_round_trips() {
        for f in [eq5(), q5()] {
            let x = poly(&f, &[(2, 1), (1, 2), (3, 5)]);
            let y = poly(&f, &[(3, 0), (1, 1)]);
            let q = x.div(&y).unwrap();
            assert!(q.mul(&y).unwrap().equals_within_precision(&x).unwrap());
            assert_eq!(ValuedElem::one(&f).div(&ValuedElem::zero(&f)), Err(Error::DivisionByZero));
        }
    }

    #[test]
    fn inverse_in_unramified_extension() {
        let f = LocalFieldDesc::new(FieldKind::MixedChar, 3, 2, 6).unwrap();
        let k = f.residue();
        let a = ValuedElem::from_residue(&f, k.generator());
        let x = a.add(&ValuedElem::from_int(&f, 4)).unwrap();
        let y = x.inv().unwrap();
        assert!(x.mul(&y).unwrap().equals_within_precision(&ValuedElem::one(&f)).unwrap());
    }

    #[test]
    fn complete_cancellation_is_an_inexact_zero() {
        let f = q5();
        let x = poly(&f, &[(1, 0), (2, 3)]);
        let z = x.sub(&x).unwrap();
        assert!(z.is_zero());
        assert!(!z.is_exact_zero());
        assert_eq!(z.abs_precision(), Some(8));
        assert!(z.checked_ac().is_err());
        assert!(z.inv().is_err());
    }

    #[test]
    fn mixed_field_operands_rejected() {
        let a = ValuedElem::one(&eq5());
        let b = ValuedElem::one(&q5());
        assert_eq!(a.add(&b), Err(Error::FieldMismatch));
    }

    #[test]
    fn traces_of_powers() {
        // F_9 = F_3[a]/(a^2+1): Tr(1) = 2, Tr(a) = 0
        let f = LocalFieldDesc::new(FieldKind::MixedChar, 3, 2, 4).unwrap();
        assert_eq!(f.traces(), &[2, 0]);
    }
}
