//! Exact Fourier analysis on finite abelian groups.
//!
//! `G = Z/n_1 × … × Z/n_k` with `n_1 | … | n_k` is identified with its dual
//! through `φ(x) = ζ_e^{Σ x_i φ_i e/n_i}`, `e = n_k` the exponent. The
//! transform is unnormalized: `f̂(φ) = Σ_x f(x) φ(x)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::limits;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
    order: u64,
}

impl FiniteAbelianGroup {
    /// The group with invariant factors `n_1 | n_2 | … | n_k`, each at least 2.
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if let Some(n) = factors.iter().find(|&&n| n < 2) {
            return Err(Error::Invalid(format!("invariant factor {n} must be at least 2")));
        }
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::Invalid(format!("invariant factors {} and {} do not divide", w[0], w[1])));
            }
        }
        let order = factors
            .iter()
            .try_fold(1u64, |acc, &n| acc.checked_mul(n))
            .filter(|&o| o <= limits::MAX_GROUP)
            .ok_or_else(|| Error::capacity("group order", u128::MAX, limits::MAX_GROUP))?;
        Ok(FiniteAbelianGroup { factors, order })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 1 {
            Self::new(Vec::new())
        } else {
            Self::new(vec![n])
        }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    /// The element with the given index; the last coordinate varies fastest.
    pub fn element(&self, mut index: u64) -> Vec<u64> {
        let mut out = vec![0; self.factors.len()];
        for (slot, &n) in out.iter_mut().zip(&self.factors).rev() {
            *slot = index % n;
            index /= n;
        }
        out
    }

    pub fn index_of(&self, x: &[u64]) -> Result<u64> {
        if x.len() != self.factors.len() {
            return Err(Error::Invalid(format!(
                "element has {} coordinates, group has {}",
                x.len(),
                self.factors.len()
            )));
        }
        Ok(x.iter().zip(&self.factors).fold(0, |acc, (&xi, &n)| acc * n + xi % n))
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.order).map(|i| self.element(i))
    }

    pub fn neg(&self, index: u64) -> u64 {
        let x: Vec<u64> = self
            .element(index)
            .iter()
            .zip(&self.factors)
            .map(|(&xi, &n)| (n - xi) % n)
            .collect();
        self.index_of(&x).expect("same shape")
    }

    /// `k` with `φ(x) = ζ_e^k`.
    pub fn pairing(&self, x: &[u64], phi: &[u64]) -> u64 {
        let e = self.exponent();
        x.iter()
            .zip(phi)
            .zip(&self.factors)
            .fold(0, |acc, ((&a, &b), &n)| (acc + (a * b % n) * (e / n)) % e)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.factors.iter().map(|n| format!("Z/{n}")).collect();
        f.write_str(&parts.join(" x "))
    }
}

/// A complex-valued function on a finite abelian group, given by its table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupFunction {
    group: FiniteAbelianGroup,
    values: Vec<Cyclo>,
}

impl GroupFunction {
    pub fn new(group: FiniteAbelianGroup, values: Vec<Cyclo>) -> Result<Self> {
        if values.len() as u64 != group.order() {
            return Err(Error::Invalid(format!(
                "table has {} values, group has {} elements",
                values.len(),
                group.order()
            )));
        }
        Ok(GroupFunction { group, values })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn values(&self) -> &[Cyclo] {
        &self.values
    }

    pub fn value(&self, x: &[u64]) -> Result<&Cyclo> {
        Ok(&self.values[self.group.index_of(x)? as usize])
    }
}

/// Σ_j c_j ζ_e^{k_j} computed on one dense coefficient vector.
struct RootSum {
    modulus: u64,
    den: BigInt,
    /// Per input: sparse numerators over `den`, exponents in `Z/modulus`.
    rows: Vec<Vec<(u64, BigInt)>>,
    step: u64,
}

impl RootSum {
    fn new(values: &[Cyclo], e: u64) -> Result<Self> {
        let mut modulus = e;
        let mut den = BigInt::one();
        for v in values {
            let (m, _, d) = v.parts();
            modulus = modulus.lcm(&(m as u64));
            den = den.lcm(d);
        }
        if modulus > limits::MAX_CYCLO_ORDER {
            return Err(Error::capacity("cyclotomic order", modulus, limits::MAX_CYCLO_ORDER));
        }
        let rows = values
            .iter()
            .map(|v| {
                let (m, terms, d) = v.parts();
                let scale = &den / d;
                let stride = modulus / m as u64;
                terms.iter().map(|(j, c)| (*j as u64 * stride, c * &scale)).collect()
            })
            .collect();
        Ok(RootSum {
            step: modulus / e,
            modulus,
            den,
            rows,
        })
    }

    /// `Σ_i values[i] · ζ_e^{exps[i]}`.
    fn eval(&self, exps: impl Iterator<Item = u64>) -> Result<Cyclo> {
        let mut acc = vec![BigInt::zero(); self.modulus as usize];
        for (row, k) in self.rows.iter().zip(exps) {
            let shift = k * self.step;
            for (j, c) in row {
                acc[((j + shift) % self.modulus) as usize] += c;
            }
        }
        Cyclo::from_root_coefficients(self.modulus, &acc, &self.den)
    }
}

/// `f̂(φ) = Σ_x f(x) φ(x)`, indexed like the group.
pub fn fourier_transform(f: &GroupFunction) -> Result<GroupFunction> {
    let g = &f.group;
    let sum = RootSum::new(&f.values, g.exponent())?;
    let elems: Vec<Vec<u64>> = g.elements().collect();
    let values = elems
        .par_iter()
        .map(|phi| sum.eval(elems.iter().map(|x| g.pairing(x, phi))))
        .collect::<Result<Vec<_>>>()?;
    GroupFunction::new(g.clone(), values)
}

fn max_abs2(values: &[Cyclo]) -> Result<(usize, Cyclo)> {
    let mut best = (0, Cyclo::zero());
    for (i, v) in values.iter().enumerate() {
        let a = v.abs2();
        if i == 0 || a.cmp_real(&best.1)? == Ordering::Greater {
            best = (i, a);
        }
    }
    Ok(best)
}

#[derive(Clone, Debug)]
pub struct NormSandwich {
    /// `‖f‖²_sup`, exact.
    pub sup_f_sq: Cyclo,
    /// `‖f̂‖²_sup`, exact.
    pub sup_hat_sq: Cyclo,
    pub sup_f: f64,
    pub sup_hat: f64,
    /// `(1/|G|)‖f̂‖_sup ≤ ‖f‖_sup ≤ ‖f̂‖_sup`, decided on squares.
    pub holds: bool,
}

/// Both sup norms and the sandwich `(1/|G|)‖f̂‖_sup ≤ ‖f‖_sup ≤ ‖f̂‖_sup`.
pub fn check_norm_sandwich(f: &GroupFunction) -> Result<NormSandwich> {
    let hat = fourier_transform(f)?;
    let (_, sf) = max_abs2(&f.values)?;
    let (_, sh) = max_abs2(&hat.values)?;
    let n = BigInt::from(f.group.order());
    let lower = sh.scale(&num_rational::BigRational::new(BigInt::one(), &n * &n));
    let holds = lower.cmp_real(&sf)? != Ordering::Greater && sf.cmp_real(&sh)? != Ordering::Greater;
    Ok(NormSandwich {
        sup_f: sf.to_complex().re.max(0.0).sqrt(),
        sup_hat: sh.to_complex().re.max(0.0).sqrt(),
        sup_f_sq: sf,
        sup_hat_sq: sh,
        holds,
    })
}

/// `|G| · Σ_x |f(x)|² = Σ_φ |f̂(φ)|²`, exactly.
pub fn plancherel_check(f: &GroupFunction) -> Result<bool> {
    let hat = fourier_transform(f)?;
    let lhs = f
        .values
        .iter()
        .map(Cyclo::abs2)
        .sum::<Cyclo>()
        .scale(&num_rational::BigRational::from_integer(BigInt::from(f.group.order())));
    let rhs = hat.values.iter().map(Cyclo::abs2).sum::<Cyclo>();
    Ok(lhs == rhs)
}

#[derive(Clone, Debug)]
pub struct Peak {
    /// Index of `φ₀` in the dual enumeration.
    pub index: u64,
    pub phi: Vec<u64>,
    /// `f(φ₀) = Σ_j c_j φ₀(y_j)`.
    pub value: Cyclo,
    pub magnitude_sq: Cyclo,
    pub magnitude: f64,
    /// `max_j |c_j| ≤ |f(φ₀)|`, decided on squares.
    pub bound_holds: bool,
}

/// The dual element maximizing `|Σ_j c_j φ(y_j)|`; ties go to the first in enumeration order.
pub fn find_peak_character(c: &[Cyclo], y: &[Vec<u64>], g: &FiniteAbelianGroup) -> Result<Peak> {
    if c.is_empty() || c.len() != y.len() {
        return Err(Error::Invalid(format!(
            "need matching nonempty lists, got {} coefficients and {} points",
            c.len(),
            y.len()
        )));
    }
    let mut seen = std::collections::HashSet::new();
    for yj in y {
        if !seen.insert(g.index_of(yj)?) {
            return Err(Error::Invalid(format!("duplicate group element {yj:?}")));
        }
    }
    let sum = RootSum::new(c, g.exponent())?;
    let values = (0..g.order())
        .into_par_iter()
        .map(|i| {
            let phi = g.element(i);
            sum.eval(y.iter().map(|yj| g.pairing(yj, &phi)))
        })
        .collect::<Result<Vec<_>>>()?;
    let (best, mag) = max_abs2(&values)?;
    let (_, cmax) = max_abs2(c)?;
    Ok(Peak {
        index: best as u64,
        phi: g.element(best as u64),
        value: values[best].clone(),
        magnitude: mag.to_complex().re.max(0.0).sqrt(),
        bound_holds: cmax.cmp_real(&mag)? != Ordering::Greater,
        magnitude_sq: mag,
    })
}
