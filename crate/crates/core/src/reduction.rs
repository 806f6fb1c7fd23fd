//! Polar grouping, mean-shift normalization and the squared majorant `H̃`.
//!
//! At a point `x` the value `H_ψ(x)` is a sum of terms `w·ψ(g + e)` with a
//! rational weight `w`, a field element `g` and a residue `e`. Grouping the
//! `g` by their class modulo `O` and picking one representative `g′` per
//! class gives `H_ψ(x) = Σ ψ(g′) h′` where every `h′` collects the factors
//! `ψ(g − g′ + e)`, which do not depend on `ψ`. The majorant is
//! `H̃(x) = N′ Σ |h′|²` with `N′` the largest number of classes on the sample.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::characters::{enumerate_characters, standard_psi, Character};
use crate::cyclo::{Cyclo, CycloAccumulator};
use crate::error::{Error, Result};
use crate::eval::{eval_expfun, Ctx, Point};
use crate::ir::Spec;
use crate::lindep::det;
use crate::localfield::{LocalFieldDesc, ResidueElem, Valuation, ValuedElem};

/// One class modulo `O` with its coefficient for each function.
#[derive(Clone, Debug)]
pub struct PolarEntry {
    /// Representative `g′`; zero for the class of `O` itself.
    pub g: ValuedElem,
    /// `h′_i` for each function `i`.
    pub h: Vec<Cyclo>,
    /// Number of distinct `g` values in the class.
    pub class_size: usize,
    /// `g′` is the mean of the class; otherwise it is the truncated polar part.
    pub mean_shifted: bool,
}

#[derive(Clone, Debug)]
pub struct PolarDecomposition {
    pub point: Point,
    pub depth: u32,
    pub entries: Vec<PolarEntry>,
}

impl PolarDecomposition {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ ψ(g′) h′_i`.
    pub fn reconstruct(&self, i: usize, psi: &Character) -> Result<Cyclo> {
        let mut acc = CycloAccumulator::new();
        for e in &self.entries {
            acc.add(&psi.eval(&e.g)?.try_mul(&e.h[i])?);
        }
        Ok(acc.finish())
    }

    /// Per entry `Σ_i c_i h′_i`.
    pub fn combine(&self, c: &[Cyclo]) -> Result<Vec<Cyclo>> {
        self.entries
            .iter()
            .map(|e| {
                let mut s = Cyclo::zero();
                for (ci, hi) in c.iter().zip(&e.h) {
                    s = s.try_add(&ci.try_mul(hi)?)?;
                }
                Ok(s)
            })
            .collect()
    }

    /// `Σ |h′_i|²`.
    pub fn sum_abs2(&self, i: usize) -> Cyclo {
        self.entries.iter().map(|e| e.h[i].abs2()).sum()
    }

    /// `Σ_entries h′_i conj(h′_s)`.
    pub fn gram_entry(&self, i: usize, s: usize) -> Result<Cyclo> {
        let mut acc = CycloAccumulator::new();
        for e in &self.entries {
            acc.add(&e.h[i].try_mul(&e.h[s].conj())?);
        }
        Ok(acc.finish())
    }
}

struct Term {
    func: usize,
    weight: BigRational,
    g: Option<ValuedElem>,
    e: ResidueElem,
}

fn collect_terms(specs: &[&Spec], field: &LocalFieldDesc, x: &Point) -> Result<Vec<Term>> {
    let mut out = Vec::new();
    for (func, spec) in specs.iter().enumerate() {
        if !crate::eval::in_domain(spec, field, x)? {
            return Err(Error::Eval(format!("point {x} is not in X")));
        }
        let summands = spec.exp_summands();
        let mut ctx = Ctx::new(field, x);
        for s in &summands {
            let weight = ctx.mot_value(&s.h)?;
            if weight.is_zero() {
                continue;
            }
            ctx.for_each_tuple(&s.y_vars, &s.y, &mut |ctx, _| {
                let g = ctx.g_value(s)?.filter(|g| !g.is_exact_zero());
                let e = ctx.rf(&s.e)?;
                out.push(Term {
                    func,
                    weight: weight.clone(),
                    g,
                    e,
                });
                Ok(())
            })?;
        }
    }
    Ok(out)
}

fn polar_depth(g: &Option<ValuedElem>) -> Result<u32> {
    match g {
        None => Ok(0),
        Some(g) => match g.checked_ord()? {
            Valuation::Finite(v) if v < 0 => Ok((-v) as u32),
            _ => Ok(0),
        },
    }
}

/// `max(0, −min ord g)` over all `g` values of the specs at `x`.
pub fn required_depth(specs: &[&Spec], field: &LocalFieldDesc, x: &Point) -> Result<u32> {
    collect_terms(specs, field, x)?
        .iter()
        .try_fold(0, |acc, t| Ok(acc.max(polar_depth(&t.g)?)))
}

/// Common decomposition of several functions at `x`: one entry per class of
/// `∪_i g_i(Y_i)` modulo `O`, shared by all functions.
pub fn decompose_family(specs: &[&Spec], field: &LocalFieldDesc, x: &Point, depth: u32) -> Result<PolarDecomposition> {
    let terms = collect_terms(specs, field, x)?;
    let required = terms.iter().try_fold(0, |acc, t| Ok::<_, Error>(acc.max(polar_depth(&t.g)?)))?;
    if required > depth {
        return Err(Error::DepthTooSmall { given: depth, required });
    }
    if depth >= field.precision() {
        return Err(Error::Invalid(format!(
            "depth {depth} needs more than {} digits of precision",
            field.precision()
        )));
    }
    let mut classes: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    for (k, t) in terms.iter().enumerate() {
        let key = match &t.g {
            None => vec![0; depth as usize],
            Some(g) => (-(depth as i64)..0).map(|j| g.digit_at(j).map(ResidueElem::index)).collect::<Result<_>>()?,
        };
        classes.entry(key).or_default().push(k);
    }
    let psi0 = standard_psi(field);
    let zero = ValuedElem::zero(field);
    let p = field.p() as usize;
    let mut entries = Vec::with_capacity(classes.len());
    for (key, members) in classes {
        let mut distinct: Vec<&ValuedElem> = Vec::new();
        for &k in &members {
            let g = terms[k].g.as_ref().unwrap_or(&zero);
            if !distinct.iter().any(|d| *d == g) {
                distinct.push(g);
            }
        }
        let trivial = key.iter().all(|&d| d == 0);
        let (rep, mean_shifted) = if trivial {
            (zero.clone(), false)
        } else if distinct.len() % p != 0 {
            let mut s = zero.clone();
            for g in &distinct {
                s = s.add(g)?;
            }
            (s.div(&ValuedElem::from_int(field, distinct.len() as i64))?, true)
        } else {
            let mut digits: Vec<ResidueElem> = key.iter().map(|&i| field.residue().elem(i)).collect::<Result<_>>()?;
            digits.resize(field.precision() as usize, ResidueElem::ZERO);
            (ValuedElem::from_digits(field, -(depth as i64), &digits)?, false)
        };
        let mut accs: Vec<CycloAccumulator> = (0..specs.len()).map(|_| CycloAccumulator::new()).collect();
        for &k in &members {
            let t = &terms[k];
            let g = t.g.as_ref().unwrap_or(&zero);
            let shift = g.sub(&rep)?;
            let value = psi0.eval_with_residue(&shift, Some(t.e).filter(|e| !e.is_zero()))?;
            accs[t.func].add(&value.scale(&t.weight));
        }
        entries.push(PolarEntry {
            g: rep,
            h: accs.into_iter().map(CycloAccumulator::finish).collect(),
            class_size: distinct.len(),
            mean_shifted,
        });
    }
    Ok(PolarDecomposition {
        point: x.clone(),
        depth,
        entries,
    })
}

/// The decomposition of one function at `x`.
pub fn polar_decompose(spec: &Spec, field: &LocalFieldDesc, x: &Point, depth: u32) -> Result<PolarDecomposition> {
    decompose_family(&[spec], field, x, depth)
}

/// `H̃` on a sample with the empirical class bound.
#[derive(Clone, Debug)]
pub struct TildeH {
    pub decompositions: Vec<PolarDecomposition>,
    /// `H̃(x) = N′ Σ |h′|²` per sample point.
    pub values: Vec<Cyclo>,
    /// Largest number of entries over the sample.
    pub n_prime: usize,
    /// `N = N′²`.
    pub n: u64,
}

/// `H̃(x) = N′ Σ_entries |h′|²` at every sample point.
pub fn tilde_h(spec: &Spec, field: &LocalFieldDesc, sample: &[Point], depth: u32) -> Result<TildeH> {
    let decompositions = sample
        .par_iter()
        .map(|x| polar_decompose(spec, field, x, depth))
        .collect::<Result<Vec<_>>>()?;
    let n_prime = decompositions.iter().map(PolarDecomposition::len).max().unwrap_or(0).max(1);
    let np = BigRational::from_integer(BigInt::from(n_prime));
    let values = decompositions.iter().map(|d| d.sum_abs2(0).scale(&np)).collect();
    Ok(TildeH {
        decompositions,
        values,
        n_prime,
        n: (n_prime as u64).pow(2),
    })
}

/// The witness character at one point and both sandwich verdicts.
#[derive(Clone, Debug)]
pub struct Witness {
    pub psi: Character,
    pub value: Cyclo,
    /// `|H_{ψ₁}(x)|²`.
    pub abs2: Cyclo,
    /// `(1/N)·H̃(x) ≤ |H_{ψ₁}(x)|²`.
    pub lower_ok: bool,
    /// `|H_ψ(x)|² ≤ H̃(x)` for every enumerated `ψ`.
    pub upper_ok: bool,
    /// `H̃(x) / |H_{ψ₁}(x)|²`, infinite when the maximum vanishes and `H̃` does not.
    pub ratio: f64,
}

fn max_abs2(values: &[Cyclo]) -> Result<usize> {
    let mut best = 0;
    let mut best_val = Cyclo::zero();
    for (i, v) in values.iter().enumerate() {
        let a = v.abs2();
        if i == 0 || a.cmp_real(&best_val)? == Ordering::Greater {
            best = i;
            best_val = a;
        }
    }
    Ok(best)
}

fn le(a: &Cyclo, b: &Cyclo) -> Result<bool> {
    Ok(a.cmp_real(b)? != Ordering::Greater)
}

fn ratio(num: &Cyclo, den: &Cyclo) -> f64 {
    let (n, d) = (num.to_complex().re, den.to_complex().re);
    if num.is_zero() {
        0.0
    } else if den.is_zero() {
        f64::INFINITY
    } else {
        n / d
    }
}

/// Searches the depth-`d` family for the `ψ` maximizing `|H_ψ(x)|` (first wins ties).
pub fn witness_psi1(
    spec: &Spec,
    field: &LocalFieldDesc,
    x: &Point,
    depth: u32,
    tilde: &Cyclo,
    n: u64,
) -> Result<Witness> {
    let family = enumerate_characters(field, depth)?;
    let values = family
        .par_iter()
        .map(|psi| eval_expfun(spec, field, psi, x))
        .collect::<Result<Vec<_>>>()?;
    let best = max_abs2(&values)?;
    let abs2 = values[best].abs2();
    let lower = tilde.scale(&BigRational::new(BigInt::one(), BigInt::from(n)));
    let lower_ok = le(&lower, &abs2)?;
    let mut upper_ok = true;
    for v in &values {
        upper_ok &= le(&v.abs2(), tilde)?;
    }
    Ok(Witness {
        psi: family[best].clone(),
        value: values[best].clone(),
        ratio: ratio(tilde, &abs2),
        abs2,
        lower_ok,
        upper_ok,
    })
}

/// Matrix-valued `H̃_{i,s}` for several functions sharing one decomposition.
#[derive(Clone, Debug)]
pub struct GramTilde {
    pub decompositions: Vec<PolarDecomposition>,
    /// `H̃_{i,s}(x) = N′ Σ h′_i conj(h′_s)` per sample point.
    pub matrices: Vec<Vec<Vec<Cyclo>>>,
    pub n_prime: usize,
    pub n: u64,
}

pub fn gram_tilde(specs: &[&Spec], field: &LocalFieldDesc, sample: &[Point], depth: u32) -> Result<GramTilde> {
    let decompositions = sample
        .par_iter()
        .map(|x| decompose_family(specs, field, x, depth))
        .collect::<Result<Vec<_>>>()?;
    let n_prime = decompositions.iter().map(PolarDecomposition::len).max().unwrap_or(0).max(1);
    let np = BigRational::from_integer(BigInt::from(n_prime));
    let l = specs.len();
    let matrices = decompositions
        .iter()
        .map(|d| {
            (0..l)
                .map(|i| (0..l).map(|s| Ok(d.gram_entry(i, s)?.scale(&np))).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GramTilde {
        decompositions,
        matrices,
        n_prime,
        n: (n_prime as u64).pow(2),
    })
}

/// `Σ_{i,s} c_i conj(c_s) M_{i,s}`.
pub fn quadratic_form(m: &[Vec<Cyclo>], c: &[Cyclo]) -> Result<Cyclo> {
    let mut acc = CycloAccumulator::new();
    for (i, row) in m.iter().enumerate() {
        for (s, mis) in row.iter().enumerate() {
            acc.add(&c[i].try_mul(&c[s].conj())?.try_mul(mis)?);
        }
    }
    Ok(acc.finish())
}

/// Positive semidefiniteness of a Hermitian matrix: every principal minor is `≥ 0`.
pub fn is_psd(m: &[Vec<Cyclo>]) -> Result<bool> {
    let n = m.len();
    for i in 0..n {
        for s in 0..n {
            if m[i][s] != m[s][i].conj() {
                return Ok(false);
            }
        }
    }
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<Cyclo>> = idx.iter().map(|&i| idx.iter().map(|&s| m[i][s].clone()).collect()).collect();
        if det(&sub)?.real_sign()? == Ordering::Less {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sandwich verdicts for one coefficient vector at one point.
#[derive(Clone, Debug)]
pub struct GramCheck {
    /// `Σ c_i conj(c_s) H̃_{i,s}(x)`.
    pub form: Cyclo,
    /// The form equals `N′ Σ_entries |Σ_i c_i h′_i|²`.
    pub identity_ok: bool,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

/// Checks both sandwiches for `Σ c_i H_i` over the depth-`d` family at one point.
pub fn check_gram_point(
    specs: &[&Spec],
    field: &LocalFieldDesc,
    decomposition: &PolarDecomposition,
    matrix: &[Vec<Cyclo>],
    n_prime: usize,
    c: &[Cyclo],
) -> Result<GramCheck> {
    let form = quadratic_form(matrix, c)?;
    let direct: Cyclo = decomposition.combine(c)?.iter().map(Cyclo::abs2).sum();
    let identity_ok = form == direct.scale(&BigRational::from_integer(BigInt::from(n_prime)));
    let family = enumerate_characters(field, decomposition.depth)?;
    let x = &decomposition.point;
    let mut best = Cyclo::zero();
    let mut upper_ok = true;
    for psi in &family {
        let mut v = Cyclo::zero();
        for (ci, s) in c.iter().zip(specs) {
            v = v.try_add(&ci.try_mul(&eval_expfun(s, field, psi, x)?)?)?;
        }
        let a = v.abs2();
        upper_ok &= le(&a, &form)?;
        if a.cmp_real(&best)? == Ordering::Greater {
            best = a;
        }
    }
    let n = (n_prime as u64).pow(2);
    let lower_ok = le(&form.scale(&BigRational::new(BigInt::one(), BigInt::from(n))), &best)?;
    Ok(GramCheck {
        form,
        identity_ok,
        lower_ok,
        upper_ok,
    })
}
