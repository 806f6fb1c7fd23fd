//! Exact arithmetic in cyclotomic fields `Q(ζ_m)`.
//!
//! An element is stored as `(Σ c_j ζ_m^j) / den` with integer `c_j`, a
//! positive denominator, and exponents restricted to `0 ≤ j < φ(m)`; the
//! reduction uses the cyclotomic polynomial `Φ_m`, so the power basis makes
//! the representation canonical. Elements that turn out rational are moved
//! to order 1. Binary operations between different orders work in the
//! least common multiple.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::limits;

struct Table {
    order: u32,
    phi: u32,
    /// Nonzero coefficients `(i, a_i)`, `i < φ`, of the monic `Φ_m`.
    low: Vec<(u32, i64)>,
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Coefficients of `Φ_m`, low degree first, from `Π_{d|m} (x^d − 1)^{μ(m/d)}`.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    let mut poly: Vec<i128> = vec![1];
    let ds = divisors(m);
    for &d in &ds {
        if mobius(m / d) == 1 {
            let d = d as usize;
            let mut next = vec![0i128; poly.len() + d];
            for (i, &c) in poly.iter().enumerate() {
                next[i + d] += c;
                next[i] -= c;
            }
            poly = next;
        }
    }
    for &d in &ds {
        if mobius(m / d) == -1 {
            // exact division by x^d − 1
            let d = d as usize;
            let n = poly.len() - d;
            let mut quot = vec![0i128; n];
            let mut rem = poly.clone();
            for k in (0..n).rev() {
                let c = rem[k + d];
                quot[k] = c;
                rem[k + d] -= c;
                rem[k] += c;
            }
            debug_assert!(rem.iter().all(|&c| c == 0));
            poly = quot;
        }
    }
    // the products above are taken with (x^d − 1) but Φ_m uses the sign making it monic
    let lead = *poly.last().unwrap();
    poly.iter().map(|&c| (c * lead.signum()) as i64).collect()
}

fn table(m: u32) -> Arc<Table> {
    thread_local! {
        static LOCAL: std::cell::RefCell<HashMap<u32, Arc<Table>>> = std::cell::RefCell::new(HashMap::new());
    }
    if let Some(t) = LOCAL.with(|l| l.borrow().get(&m).cloned()) {
        return t;
    }
    let t = shared_table(m);
    LOCAL.with(|l| l.borrow_mut().insert(m, t.clone()));
    t
}

fn shared_table(m: u32) -> Arc<Table> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Table>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&m) {
        return t.clone();
    }
    let poly = cyclotomic_polynomial(m);
    let phi = (poly.len() - 1) as u32;
    let low = poly[..phi as usize]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i as u32, c))
        .collect();
    let t = Arc::new(Table { order: m, phi, low });
    cache.lock().unwrap().entry(m).or_insert(t).clone()
}

fn check_order(m: u64) -> Result<u32> {
    if m == 0 {
        return Err(Error::Invalid("cyclotomic order must be positive".into()));
    }
    if m > limits::MAX_CYCLO_ORDER {
        return Err(Error::capacity("cyclotomic order", m, limits::MAX_CYCLO_ORDER));
    }
    Ok(m as u32)
}

/// An exact element of `Q(ζ_m)`.
#[derive(Clone)]
pub struct Cyclo {
    table: Arc<Table>,
    terms: Vec<(u32, BigInt)>,
    den: BigInt,
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Reduces exponents `>= φ` using `Φ_m`, largest first.
fn reduce_map(t: &Table, mut acc: BTreeMap<u32, BigInt>) -> Vec<(u32, BigInt)> {
    while let Some((&k, _)) = acc.last_key_value() {
        if k < t.phi {
            break;
        }
        let c = acc.remove(&k).unwrap();
        if c.is_zero() {
            continue;
        }
        let shift = k - t.phi;
        for &(i, a) in &t.low {
            let e = acc.entry(shift + i).or_insert_with(BigInt::zero);
            *e -= &c * a;
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

impl Cyclo {
    fn build(table: Arc<Table>, terms: Vec<(u32, BigInt)>, den: BigInt) -> Self {
        let mut z = Cyclo { table, terms, den };
        z.normalize();
        z
    }

    fn from_map(table: Arc<Table>, acc: BTreeMap<u32, BigInt>, den: BigInt) -> Self {
        let terms = reduce_map(&table, acc);
        Self::build(table, terms, den)
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for (_, c) in &mut self.terms {
                *c = -&*c;
            }
        }
        if !self.den.is_one() {
            let mut g = self.den.clone();
            for (_, c) in &self.terms {
                if g.is_one() {
                    break;
                }
                g = g.gcd(c);
            }
            if self.terms.is_empty() {
                g = self.den.clone();
            }
            if !g.is_one() {
                self.den = &self.den / &g;
                for (_, c) in &mut self.terms {
                    *c = &*c / &g;
                }
            }
        }
        if self.table.order != 1 && self.terms.iter().all(|(j, _)| *j == 0) {
            self.table = table(1);
        }
    }

    pub fn zero() -> Self {
        Cyclo {
            table: table(1),
            terms: Vec::new(),
            den: BigInt::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        let terms = if n.is_zero() { Vec::new() } else { vec![(0, n)] };
        Cyclo {
            table: table(1),
            terms,
            den: BigInt::one(),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        let terms = if r.is_zero() { Vec::new() } else { vec![(0, r.numer().clone())] };
        Self::build(table(1), terms, r.denom().clone())
    }

    /// `ζ_m^k`, the root of unity `exp(2πik/m)`.
    pub fn zeta(m: u64, k: i64) -> Result<Self> {
        let m = check_order(m)?;
        let t = table(m);
        let j = k.rem_euclid(m as i64) as u32;
        let mut acc = BTreeMap::new();
        acc.insert(j, BigInt::one());
        Ok(Self::from_map(t, acc, BigInt::one()))
    }

    /// `Σ c_k ζ_m^k` from `(k, c_k)` pairs.
    pub fn sum_of_roots(m: u64, counts: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        let m = check_order(m)?;
        let t = table(m);
        let mut acc: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (k, c) in counts {
            if c != 0 {
                *acc.entry((k % m as u64) as u32).or_insert_with(BigInt::zero) += c;
            }
        }
        Ok(Self::from_map(t, acc, BigInt::one()))
    }

    /// `(1/den) Σ_k coeffs[k] ζ_m^k` for `k < coeffs.len()`, exponents read modulo `m`.
    pub fn from_root_coefficients(m: u64, coeffs: &[BigInt], den: &BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = check_order(m)?;
        let t = table(m);
        let mut acc: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                *acc.entry(k as u32 % m).or_insert_with(BigInt::zero) += c;
            }
        }
        Ok(Self::from_map(t, acc, den.clone()))
    }

    /// `(order, terms, den)` with the value `(1/den) Σ c_j ζ_order^j`.
    pub(crate) fn parts(&self) -> (u32, &[(u32, BigInt)], &BigInt) {
        (self.table.order, &self.terms, &self.den)
    }

    pub fn order(&self) -> u32 {
        self.table.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// The value as a rational number, if it is one.
    pub fn to_rational(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(0, c)] => Some(BigRational::new(c.clone(), self.den.clone())),
            _ => None,
        }
    }

    /// Coefficients in the power basis `1, ζ_m, …, ζ_m^{φ(m)−1}`.
    pub fn coefficients(&self) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.table.phi as usize];
        for (j, c) in &self.terms {
            out[*j as usize] = BigRational::new(c.clone(), self.den.clone());
        }
        out
    }

    /// Rewrites the element in `Q(ζ_m)` for a multiple `m` of its order.
    /// The result is not renormalized, so rationals keep order `m`.
    fn embed(&self, m: u64) -> Result<Self> {
        let m = check_order(m)?;
        let own = self.table.order;
        if m % own != 0 {
            return Err(Error::Invalid(format!("order {own} does not divide {m}")));
        }
        if m == own {
            return Ok(self.clone());
        }
        let step = m / own;
        let t = table(m);
        let mut acc = BTreeMap::new();
        for (j, c) in &self.terms {
            acc.insert(j * step, c.clone());
        }
        Ok(Cyclo {
            terms: reduce_map(&t, acc),
            table: t,
            den: self.den.clone(),
        })
    }

    fn common(&self, other: &Self) -> Result<(Self, Self)> {
        let (a, b) = (self.table.order, other.table.order);
        if a == b {
            return Ok((self.clone(), other.clone()));
        }
        let m = (a as u64).lcm(&(b as u64));
        Ok((self.embed(m)?, other.embed(m)?))
    }

    fn same_order(&self, other: &Self) -> bool {
        self.table.order == other.table.order
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if !self.same_order(other) {
            if self.is_zero() {
                return Ok(other.clone());
            }
            if other.is_zero() {
                return Ok(self.clone());
            }
            let (a, b) = self.common(other)?;
            return a.try_add(&b);
        }
        let l = self.den.lcm(&other.den);
        let fa = &l / &self.den;
        let fb = &l / &other.den;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut k) = (0, 0);
        let scale = |c: &BigInt, f: &BigInt| if f.is_one() { c.clone() } else { c * f };
        while i < self.terms.len() || k < other.terms.len() {
            let ja = self.terms.get(i).map(|t| t.0).unwrap_or(u32::MAX);
            let jb = other.terms.get(k).map(|t| t.0).unwrap_or(u32::MAX);
            match ja.cmp(&jb) {
                Ordering::Less => {
                    out.push((ja, scale(&self.terms[i].1, &fa)));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((jb, scale(&other.terms[k].1, &fb)));
                    k += 1;
                }
                Ordering::Equal => {
                    let c = scale(&self.terms[i].1, &fa) + scale(&other.terms[k].1, &fb);
                    if !c.is_zero() {
                        out.push((ja, c));
                    }
                    i += 1;
                    k += 1;
                }
            }
        }
        Ok(Self::build(self.table.clone(), out, l))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        if let Some(r) = other.to_rational() {
            return Ok(self.scale(&r));
        }
        if let Some(r) = self.to_rational() {
            return Ok(other.scale(&r));
        }
        if !self.same_order(other) {
            let (a, b) = self.common(other)?;
            return a.try_mul(&b);
        }
        let m = self.table.order;
        let mut acc: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (ja, ca) in &self.terms {
            for (jb, cb) in &other.terms {
                let e = (ja + jb) % m;
                *acc.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        Ok(Self::from_map(self.table.clone(), acc, &self.den * &other.den))
    }

    /// Multiplies by a rational number.
    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let terms = self.terms.iter().map(|(j, c)| (*j, c * r.numer())).collect();
        Self::build(self.table.clone(), terms, &self.den * r.denom())
    }

    pub fn neg(&self) -> Self {
        Cyclo {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(j, c)| (*j, -c)).collect(),
            den: self.den.clone(),
        }
    }

    /// Applies the Galois automorphism `ζ_m ↦ ζ_m^k` (`gcd(k, m) = 1`).
    pub fn galois(&self, k: u32) -> Self {
        let m = self.table.order;
        if m <= 2 {
            return self.clone();
        }
        let mut acc = BTreeMap::new();
        for (j, c) in &self.terms {
            let e = ((*j as u64 * k as u64) % m as u64) as u32;
            *acc.entry(e).or_insert_with(BigInt::zero) += c;
        }
        Self::from_map(self.table.clone(), acc, self.den.clone())
    }

    /// Complex conjugate, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let m = self.table.order;
        self.galois(m - 1)
    }

    /// `z · conj(z)`, an element of the real subfield.
    pub fn abs2(&self) -> Self {
        self.try_mul(&self.conj()).expect("same order")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.to_rational() {
            return Ok(Self::from_rational(&r.recip()));
        }
        // z^{-1} = Π_{σ ≠ 1} σ(z) / N(z)
        let m = self.table.order;
        let mut prod = Self::one();
        for k in 2..m {
            if k.gcd(&m) == 1 {
                prod = prod.try_mul(&self.galois(k))?;
            }
        }
        let norm = self
            .try_mul(&prod)?
            .to_rational()
            .ok_or_else(|| Error::Invalid("norm is not rational".into()))?;
        Ok(prod.scale(&norm.recip()))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        if let Some(r) = other.to_rational() {
            if r.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(self.scale(&r.recip()));
        }
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        let m = self.table.order as f64;
        let den = big_to_f64(&self.den);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in &self.terms {
            let theta = std::f64::consts::TAU * (*j as f64) / m;
            acc += Complex64::from_polar(big_to_f64(c) / den, theta);
        }
        acc
    }

    /// `|z|` as a float.
    pub fn norm_f64(&self) -> f64 {
        self.to_complex().norm()
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Exact sign of a real element.
    pub fn real_sign(&self) -> Result<Ordering> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        if !self.is_real() {
            return Err(Error::Invalid(format!("{self} is not real")));
        }
        if let Some(r) = self.to_rational() {
            return Ok(r.numer().sign().cmp_zero());
        }
        let m = self.table.order;
        let n = self.terms.len() as f64;
        let mut v = 0.0f64;
        let mut s = 0.0f64;
        for (j, c) in &self.terms {
            let cf = big_to_f64(c);
            v += cf * (std::f64::consts::TAU * (*j as f64) / m as f64).cos();
            s += cf.abs();
        }
        let bound = s * (n + 8.0) * f64::EPSILON * 4.0;
        if s.is_finite() && v.abs() > bound {
            return Ok(if v > 0.0 { Ordering::Greater } else { Ordering::Less });
        }
        Ok(self.real_sign_precise())
    }

    fn real_sign_precise(&self) -> Ordering {
        let m = self.table.order;
        let s: BigInt = self.terms.iter().map(|(_, c)| c.abs()).sum();
        let log_s = s.bits() as u64 + 1;
        // a nonzero algebraic integer of degree φ with conjugates bounded by S has |α| ≥ S^{1−φ}
        let mut bits = log_s * self.table.phi as u64 + 64 + (self.terms.len() as u64).ilog2() as u64;
        loop {
            let pi = pi_fixed(bits);
            let mut sum = BigInt::zero();
            for (j, c) in &self.terms {
                sum += c * cos_2pi_fixed(*j, m, &pi, bits);
            }
            let err = &s * BigInt::from(8u32);
            if sum.abs() > err {
                return if sum.is_positive() { Ordering::Greater } else { Ordering::Less };
            }
            bits *= 2;
        }
    }

    /// Exact comparison of two real elements.
    pub fn cmp_real(&self, other: &Self) -> Result<Ordering> {
        self.try_sub(other)?.real_sign()
    }
}

fn big_to_f64(b: &BigInt) -> f64 {
    b.to_f64().unwrap_or(if b.sign() == Sign::Minus { f64::NEG_INFINITY } else { f64::INFINITY })
}

trait SignExt {
    fn cmp_zero(self) -> Ordering;
}

impl SignExt for Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

/// `arctan(1/x) · 2^bits`, truncated.
fn atan_inv_fixed(x: u32, bits: u64) -> BigInt {
    let one = BigInt::one() << bits;
    let x2 = BigInt::from(x) * x;
    let mut power = &one / x;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

/// `π · 2^bits` from Machin's formula, with guard bits.
fn pi_fixed(bits: u64) -> BigInt {
    let g = bits + 32;
    let pi = atan_inv_fixed(5, g) * 16 - atan_inv_fixed(239, g) * 4;
    pi >> 32
}

/// `cos(2πj/m) · 2^bits`, error a few units in the last place.
fn cos_2pi_fixed(j: u32, m: u32, pi: &BigInt, bits: u64) -> BigInt {
    let (j, m) = (j as u64 % m as u64, m as u64);
    let j = if 2 * j > m { m - j } else { j };
    // θ = 2πj/m ∈ [0, π]
    let theta = (pi * BigInt::from(2 * j)) / BigInt::from(m);
    let one = BigInt::one() << bits;
    let theta2 = (&theta * &theta) >> bits;
    let mut term = one.clone();
    let mut sum = one;
    let mut k = 1u64;
    loop {
        term = (&term * &theta2) >> bits;
        term /= BigInt::from((2 * k - 1) * (2 * k));
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        k += 1;
    }
    sum
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        if self.same_order(other) {
            return self.terms == other.terms && self.den == other.den;
        }
        match self.common(other) {
            Ok((a, b)) => a.terms == b.terms && a.den == b.den,
            Err(_) => false,
        }
    }
}

impl Eq for Cyclo {}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let m = self.table.order;
        for (idx, (j, c)) in self.terms.iter().enumerate() {
            let r = BigRational::new(c.clone(), self.den.clone());
            let neg = r.is_negative();
            let a = r.abs();
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mono = match j {
                0 => String::new(),
                1 => format!("z{m}"),
                _ => format!("z{m}^{j}"),
            };
            if *j == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $call:ident) => {
        impl std::ops::$tr<&Cyclo> for &Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: &Cyclo) -> Cyclo {
                self.$call(rhs).expect("cyclotomic order overflow")
            }
        }
        impl std::ops::$tr<Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: Cyclo) -> Cyclo {
                (&self).$call(&rhs).expect("cyclotomic order overflow")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl std::ops::Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo::neg(self)
    }
}

impl std::iter::Sum for Cyclo {
    fn sum<I: Iterator<Item = Cyclo>>(iter: I) -> Cyclo {
        iter.fold(Cyclo::zero(), |a, b| a + b)
    }
}

/// Sums many elements of one order without renormalizing after every term.
#[derive(Default)]
pub struct CycloAccumulator {
    order: Option<u32>,
    dense: Vec<BigInt>,
    den: Option<BigInt>,
    spill: Vec<Cyclo>,
}

impl CycloAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: &Cyclo) {
        if z.is_zero() {
            return;
        }
        let order = *self.order.get_or_insert(z.table.order);
        let den_ok = self.den.as_ref().is_none_or(|d| *d == z.den);
        if order != z.table.order || !den_ok {
            self.spill.push(z.clone());
            return;
        }
        if self.den.is_none() {
            self.den = Some(z.den.clone());
            self.dense = vec![BigInt::zero(); z.table.phi as usize];
        }
        for (j, c) in &z.terms {
            self.dense[*j as usize] += c;
        }
    }

    /// Adds `c · ζ_m^k` where `m` is the accumulator order (or sets it).
    pub fn add_zeta(&mut self, m: u64, k: i64, c: i64) -> Result<()> {
        let z = Cyclo::zeta(m, k)?;
        if c == 1 {
            self.add(&z);
        } else {
            self.add(&z.scale(&BigRational::from_integer(BigInt::from(c))));
        }
        Ok(())
    }

    pub fn finish(self) -> Cyclo {
        let mut out = match (self.order, self.den) {
            (Some(m), Some(den)) => {
                let t = table(m);
                let terms = self
                    .dense
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| (j as u32, c))
                    .collect();
                Cyclo::build(t, terms, den)
            }
            _ => Cyclo::zero(),
        };
        for z in self.spill {
            out = out + z;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u64, k: i64) -> Cyclo {
        Cyclo::zeta(m, k).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(105).len() - 1, 48);
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn root_of_unity_sum() {
        let s = z(5, 1) + z(5, 2) + z(5, 3) + z(5, 4);
        assert_eq!(s, Cyclo::from_int(-1));
        assert_eq!(s.order(), 1);
    }

    #[test]
    fn conjugation() {
        assert_eq!(z(8, 1).conj(), z(8, 7));
        let x = z(12, 5) + Cyclo::from_int(3);
        assert_eq!(x.conj().conj(), x);
    }

    #[test]
    fn abs_squared_one_plus_zeta3() {
        let w = Cyclo::one() + z(3, 1);
        assert_eq!(w, -&z(3, 2));
        assert_eq!(w.abs2(), Cyclo::one());
    }

    #[test]
    fn mixed_orders() {
        // ζ_4 · ζ_6 = ζ_12^5
        assert_eq!(z(4, 1) * z(6, 1), z(12, 5));
        assert_eq!(z(6, 3), Cyclo::from_int(-1));
        assert_eq!(z(2, 1) + z(3, 1) - z(6, 2), Cyclo::from_int(-1));
    }

    #[test]
    fn inverse_and_division() {
        let x = Cyclo::from_int(2) + z(7, 3);
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, Cyclo::one());
        assert_eq!(Cyclo::zero().inv(), Err(Error::DivisionByZero));
        let half = Cyclo::from_rational(&BigRational::new(1.into(), 2.into()));
        assert_eq!(x.try_div(&Cyclo::from_int(2)).unwrap(), &x * &half);
    }

    #[test]
    fn exact_signs() {
        // 2cos(2π/5) = (√5 − 1)/2 > 0, 2cos(4π/5) < 0
        let c1 = z(5, 1) + z(5, 4);
        let c2 = z(5, 2) + z(5, 3);
        assert_eq!(c1.real_sign().unwrap(), Ordering::Greater);
        assert_eq!(c2.real_sign().unwrap(), Ordering::Less);
        assert_eq!((&c1 + &c2).real_sign().unwrap(), Ordering::Less);
        assert!(z(5, 1).real_sign().is_err());
        // golden ratio identity: c1^2 + c1 - 1 = 0
        let g = &(&c1 * &c1) + &c1;
        assert_eq!(g.cmp_real(&Cyclo::one()).unwrap(), Ordering::Equal);
    }

    #[test]
    fn precise_sign_path() {
        // 10^30 · 2cos(2π/7) − floor(·) lies in (0, 1); floats cannot see it
        let c = z(7, 1) + z(7, 6);
        let k = BigInt::from(10).pow(30);
        let fl: BigInt = "1246979603717467061050009768008".parse().unwrap();
        let x = c.scale(&BigRational::from_integer(k)) - Cyclo::from_bigint(fl);
        assert_eq!(x.real_sign().unwrap(), Ordering::Greater);
        assert_eq!((x - Cyclo::one()).real_sign().unwrap(), Ordering::Less);
    }

    #[test]
    fn fixed_point_constants() {
        let pi = pi_fixed(200);
        let approx = pi.to_f64().unwrap() / 2f64.powi(200);
        assert!((approx - std::f64::consts::PI).abs() < 1e-15);
        let pi = pi_fixed(100);
        let c = cos_2pi_fixed(1, 6, &pi, 100).to_f64().unwrap() / 2f64.powi(100);
        assert!((c - 0.5).abs() < 1e-15);
    }

    #[test]
    fn accumulator_matches_sum() {
        let vals: Vec<Cyclo> = (0..20).map(|k| z(9, k * k)).collect();
        let mut acc = CycloAccumulator::new();
        for v in &vals {
            acc.add(v);
        }
        acc.add(&Cyclo::from_int(3));
        let direct: Cyclo = vals.iter().cloned().sum::<Cyclo>() + Cyclo::from_int(3);
        assert_eq!(acc.finish(), direct);
    }

    #[test]
    fn capacity_checked() {
        assert!(matches!(Cyclo::zeta(1 << 20, 1), Err(Error::Capacity { .. })));
    }
}
