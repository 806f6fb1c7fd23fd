use std::fmt;

use crate::error::{Error, Result};
use crate::limits;

/// An element of a residue field, encoded as the integer `Σ c_i p^i` of its
/// coefficient vector in the basis `1, a, .., a^{f-1}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidueElem(pub(crate) u32);

impl ResidueElem {
    pub const ZERO: ResidueElem = ResidueElem(0);
    pub const ONE: ResidueElem = ResidueElem(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The finite field `F_p[a]/(modulus)` with `q = p^f` elements.
#[derive(Clone)]
pub struct ResidueField {
    p: u32,
    f: u32,
    q: u32,
    modulus: Vec<u32>,
    mul_table: Option<Vec<u32>>,
    inv_table: Vec<u32>,
}

impl fmt::Debug for ResidueField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ResidueField")
            .field("p", &self.p)
            .field("f", &self.f)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for ResidueField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f && self.modulus == other.modulus
    }
}
impl Eq for ResidueField {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// Dense polynomials over F_p, coefficients low-to-high.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Remainder of `a` modulo the monic polynomial `m` over `F_p`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let t = (lead as u64 * c as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for n in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut k = n;
            for _ in 0..d {
                div.push((k % p as u64) as u32);
                k /= p as u64;
            }
            div.push(1);
            if poly_rem(m, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The lexicographically smallest monic irreducible polynomial of degree `f`
/// over `F_p`, comparing the coefficient tuple `(c_0, c_1, .., c_{f-1})`.
pub fn smallest_irreducible(p: u32, f: u32) -> Vec<u32> {
    let f = f as usize;
    let count = (p as u64).pow(f as u32);
    for n in 0..count {
        // c_0 is the most significant position of the lexicographic order.
        let mut c = vec![0u32; f + 1];
        let mut k = n;
        for i in (0..f).rev() {
            c[i] = (k % p as u64) as u32;
            k /= p as u64;
        }
        c[f] = 1;
        if is_irreducible(&c, p) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl ResidueField {
    pub fn new(p: u64, f: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if f == 0 {
            return Err(Error::Invalid("residue degree must be at least 1".into()));
        }
        let q = (p as u128).checked_pow(f).unwrap_or(u128::MAX);
        if q > limits::MAX_Q as u128 {
            return Err(Error::capacity("residue field size", q, limits::MAX_Q));
        }
        let p = p as u32;
        let modulus = smallest_irreducible(p, f);
        let mut field = ResidueField {
            p,
            f,
            q: q as u32,
            modulus,
            mul_table: None,
            inv_table: Vec::new(),
        };
        if q as u64 <= limits::TABLE_Q {
            let q = q as usize;
            let mut table = vec![0u32; q * q];
            for a in 0..q {
                for b in a..q {
                    let c = field.mul_slow(ResidueElem(a as u32), ResidueElem(b as u32)).0;
                    table[a * q + b] = c;
                    table[b * q + a] = c;
                }
            }
            field.mul_table = Some(table);
        }
        let mut inv = vec![0u32; field.q as usize];
        for a in 1..field.q {
            inv[a as usize] = field.pow(ResidueElem(a), (field.q - 2) as u64).0;
        }
        field.inv_table = inv;
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic defining polynomial, coefficients low-to-high.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = ResidueElem> + Clone {
        (0..self.q).map(ResidueElem)
    }

    pub fn elem(&self, index: u32) -> Result<ResidueElem> {
        if index >= self.q {
            return Err(Error::Invalid(format!("residue index {index} out of range for q = {}", self.q)));
        }
        Ok(ResidueElem(index))
    }

    pub fn zero(&self) -> ResidueElem {
        ResidueElem(0)
    }

    pub fn one(&self) -> ResidueElem {
        ResidueElem(1)
    }

    /// The class of the polynomial variable `a`, i.e. the root of the modulus.
    pub fn generator(&self) -> ResidueElem {
        if self.f == 1 {
            ResidueElem((self.p - self.modulus[0]) % self.p)
        } else {
            ResidueElem(self.p)
        }
    }

    pub fn from_int(&self, n: i64) -> ResidueElem {
        ResidueElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn coeffs(&self, e: ResidueElem) -> Vec<u32> {
        let mut k = e.0;
        (0..self.f)
            .map(|_| {
                let c = k % self.p;
                k /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, c: &[u32]) -> ResidueElem {
        let reduced = if c.len() > self.f as usize {
            poly_rem(c, &self.modulus, self.p)
        } else {
            c.iter().map(|&x| x % self.p).collect()
        };
        let mut idx = 0u32;
        for &x in reduced.iter().rev() {
            idx = idx * self.p + x;
        }
        ResidueElem(idx)
    }

    pub fn add(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        if self.f == 1 {
            return ResidueElem((a.0 + b.0) % self.p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut idx = 0u32;
        let mut place = 1u32;
        for _ in 0..self.f {
            idx += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        ResidueElem(idx)
    }

    pub fn neg(&self, a: ResidueElem) -> ResidueElem {
        if self.f == 1 {
            return ResidueElem((self.p - a.0) % self.p);
        }
        let mut x = a.0;
        let mut idx = 0u32;
        let mut place = 1u32;
        for _ in 0..self.f {
            idx += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        ResidueElem(idx)
    }

    pub fn sub(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        self.add(a, self.neg(b))
    }

    fn mul_slow(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        if self.f == 1 {
            return ResidueElem((a.0 as u64 * b.0 as u64 % self.p as u64) as u32);
        }
        let prod = poly_mul(&trim(self.coeffs(a)), &trim(self.coeffs(b)), self.p);
        self.from_coeffs(&poly_rem(&prod, &self.modulus, self.p))
    }

    pub fn mul(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        match &self.mul_table {
            Some(t) => ResidueElem(t[a.0 as usize * self.q as usize + b.0 as usize]),
            None => self.mul_slow(a, b),
        }
    }

    pub fn inv(&self, a: ResidueElem) -> Option<ResidueElem> {
        if a.is_zero() {
            None
        } else {
            Some(ResidueElem(self.inv_table[a.0 as usize]))
        }
    }

    pub fn pow(&self, a: ResidueElem, mut e: u64) -> ResidueElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Absolute trace to the prime field, `Σ_{j<f} v^{p^j}`, as an integer in `0..p`.
    pub fn trace(&self, v: ResidueElem) -> u32 {
        let mut acc = self.zero();
        let mut cur = v;
        for _ in 0..self.f {
            acc = self.add(acc, cur);
            cur = self.pow(cur, self.p as u64);
        }
        debug_assert!(acc.0 < self.p, "trace must land in the prime field");
        acc.0
    }

    /// Renders an element as a polynomial in `a` (plain integer when `f = 1`).
    pub fn format(&self, e: ResidueElem) -> String {
        if self.f == 1 {
            return e.0.to_string();
        }
        let c = self.coeffs(e);
        let mut parts = Vec::new();
        for (i, &x) in c.iter().enumerate().rev() {
            if x == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            parts.push(match (x, i) {
                (_, 0) => x.to_string(),
                (1, _) => mono,
                _ => format!("{x}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_modulus_and_trace() {
        let k = ResidueField::new(2, 2).unwrap();
        assert_eq!(k.modulus(), &[1, 1, 1]);
        let a = k.generator();
        assert_eq!(k.trace(a), 1);
        assert_eq!(k.trace(k.zero()), 0);
        assert_eq!(k.format(k.add(a, k.one())), "a+1");
    }

    #[test]
    fn degree_two_moduli_have_no_roots() {
        for p in [2u32, 3, 5, 7, 11, 13] {
            let m = smallest_irreducible(p, 2);
            for x in 0..p as u64 {
                let v = (m[0] as u64 + m[1] as u64 * x + x * x) % p as u64;
                assert_ne!(v, 0, "root {x} of modulus over F_{p}");
            }
        }
    }

    #[test]
    fn f9_trace_fibers() {
        let k = ResidueField::new(3, 2).unwrap();
        let mut fibers = [0u32; 3];
        let mut total = 0;
        for v in k.elements() {
            let t = k.trace(v);
            fibers[t as usize] += 1;
            total += t;
        }
        assert_eq!(fibers, [3, 3, 3]);
        assert_eq!(total % 3, 0);
    }

    #[test]
    fn trace_is_additive_and_frobenius_invariant() {
        for (p, f) in [(2u64, 3u32), (3, 3), (5, 2), (7, 2), (2, 4)] {
            let k = ResidueField::new(p, f).unwrap();
            for u in k.elements() {
                assert_eq!(k.trace(k.pow(u, p)), k.trace(u));
                for v in k.elements() {
                    let lhs = k.trace(k.add(u, v));
                    assert_eq!(lhs, (k.trace(u) + k.trace(v)) % p as u32);
                }
            }
        }
    }

    #[test]
    fn field_axioms_small() {
        let k = ResidueField::new(3, 2).unwrap();
        for a in k.elements() {
            if !a.is_zero() {
                assert_eq!(k.mul(a, k.inv(a).unwrap()), k.one());
            }
            assert_eq!(k.add(a, k.neg(a)), k.zero());
        }
    }

    #[test]
    fn rejects_composite() {
        assert_eq!(ResidueField::new(9, 1).unwrap_err(), Error::NotPrime(9));
    }
}
