//! Exact linear dependence of sampled functions: rank, kernels, witness tuples
//! and coefficient recovery by Cramer's rule.
//!
//! A sample matrix has one row per sample point and one column per function.
//! Every decision is made in exact cyclotomic arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::characters::Character;
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::eval::{eval_expfun, Point};
use crate::ir::Spec;
use crate::localfield::LocalFieldDesc;

/// Determinant by Gaussian elimination over `Q(ζ)`.
pub fn det(m: &[Vec<Cyclo>]) -> Result<Cyclo> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid("determinant of a non-square matrix".into()));
    }
    let mut a: Vec<Vec<Cyclo>> = m.to_vec();
    let mut d = Cyclo::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Ok(Cyclo::zero());
        };
        if piv != col {
            a.swap(piv, col);
            d = d.neg();
        }
        d = d.try_mul(&a[col][col])?;
        let inv = a[col][col].inv()?;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].try_mul(&inv)?;
            for k in col..n {
                let t = factor.try_mul(&a[col][k])?;
                a[r][k] = a[r][k].try_sub(&t)?;
            }
        }
    }
    Ok(d)
}

/// Incremental row echelon form: rows are reduced against the accepted ones.
#[derive(Clone, Debug, Default)]
pub struct RowEchelon {
    width: usize,
    /// Reduced rows with their pivot column; the pivot entry is 1.
    basis: Vec<(usize, Vec<Cyclo>)>,
    accepted: Vec<usize>,
    seen: usize,
}

impl RowEchelon {
    pub fn new(width: usize) -> Self {
        RowEchelon {
            width,
            ..Default::default()
        }
    }

    /// Adds a row; returns whether it raised the rank.
    pub fn push(&mut self, row: &[Cyclo]) -> Result<bool> {
        if row.len() != self.width {
            return Err(Error::Invalid(format!("row has {} entries, expected {}", row.len(), self.width)));
        }
        let index = self.seen;
        self.seen += 1;
        let mut r = row.to_vec();
        for (p, b) in &self.basis {
            if r[*p].is_zero() {
                continue;
            }
            let f = r[*p].clone();
            for k in 0..self.width {
                if !b[k].is_zero() {
                    r[k] = r[k].try_sub(&f.try_mul(&b[k])?)?;
                }
            }
        }
        let Some(p) = r.iter().position(|c| !c.is_zero()) else {
            return Ok(false);
        };
        let inv = r[p].inv()?;
        for c in r.iter_mut() {
            if !c.is_zero() {
                *c = c.try_mul(&inv)?;
            }
        }
        for (_, b) in &mut self.basis {
            if b[p].is_zero() {
                continue;
            }
            let f = b[p].clone();
            for k in 0..self.width {
                if !r[k].is_zero() {
                    b[k] = b[k].try_sub(&f.try_mul(&r[k])?)?;
                }
            }
        }
        self.basis.push((p, r));
        self.accepted.push(index);
        Ok(true)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Indices (in push order) of the rows that raised the rank.
    pub fn independent_rows(&self) -> &[usize] {
        &self.accepted
    }

    /// A nonzero kernel vector of the pushed rows, if the rank is below the width.
    pub fn kernel_vector(&self) -> Option<Vec<Cyclo>> {
        let pivots: Vec<usize> = self.basis.iter().map(|(p, _)| *p).collect();
        let free = (0..self.width).find(|c| !pivots.contains(c))?;
        let mut v = vec![Cyclo::zero(); self.width];
        v[free] = Cyclo::one();
        for (p, b) in &self.basis {
            v[*p] = b[free].neg();
        }
        Some(normalize_kernel(v))
    }
}

/// Scales a rational kernel vector to a primitive integer vector with a positive first entry.
fn normalize_kernel(v: Vec<Cyclo>) -> Vec<Cyclo> {
    let rats: Option<Vec<BigRational>> = v.iter().map(Cyclo::to_rational).collect();
    let Some(rats) = rats else { return v };
    let mut den = BigInt::one();
    for r in &rats {
        den = den.lcm(r.denom());
    }
    let ints: Vec<BigInt> = rats.iter().map(|r| (r * BigRational::from_integer(den.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for i in &ints {
        g = g.gcd(i);
    }
    let first_neg = ints.iter().find(|i| !i.is_zero()).is_some_and(|i| i.is_negative());
    if first_neg {
        g = -g;
    }
    ints.into_iter().map(|i| Cyclo::from_bigint(i / &g)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dependence {
    /// `Σ kernel_i f_i = 0` on every sampled point.
    Dependent { kernel: Vec<Cyclo> },
    /// `det(f_i(z_j))` is nonzero for the listed sample rows.
    Independent { witness: Vec<usize> },
    /// A partial sample that has not reached full rank.
    Inconclusive { rank: usize, rows: usize },
}

fn rows_of(columns: &[Vec<Cyclo>]) -> Result<Vec<Vec<Cyclo>>> {
    let n = columns.first().map_or(0, Vec::len);
    if columns.iter().any(|c| c.len() != n) {
        return Err(Error::Invalid("functions are sampled on different numbers of points".into()));
    }
    Ok((0..n).map(|j| columns.iter().map(|c| c[j].clone()).collect()).collect())
}

/// Decides linear dependence of the functions `columns[i]` on the sample.
pub fn dependence_test(columns: &[Vec<Cyclo>]) -> Result<Dependence> {
    dependence_test_partial(columns, true)
}

/// As [`dependence_test`]; with `complete = false` a rank deficit is reported as inconclusive.
pub fn dependence_test_partial(columns: &[Vec<Cyclo>], complete: bool) -> Result<Dependence> {
    let l = columns.len();
    if l == 0 {
        return Err(Error::Invalid("no functions given".into()));
    }
    let rows = rows_of(columns)?;
    if complete && rows.len() < l {
        return Err(Error::Invalid(format!("{} sample points for {l} functions", rows.len())));
    }
    let mut ech = RowEchelon::new(l);
    for r in &rows {
        ech.push(r)?;
        if ech.rank() == l {
            return Ok(Dependence::Independent {
                witness: ech.independent_rows().to_vec(),
            });
        }
    }
    if !complete {
        return Ok(Dependence::Inconclusive {
            rank: ech.rank(),
            rows: rows.len(),
        });
    }
    Ok(Dependence::Dependent {
        kernel: ech.kernel_vector().expect("rank below width"),
    })
}

/// First rows, in greedy order, with a nonzero determinant; `None` when the rank is deficient.
pub fn find_witness_rows(rows: &[Vec<Cyclo>]) -> Result<Option<Vec<usize>>> {
    let Some(l) = rows.first().map(Vec::len) else {
        return Ok(None);
    };
    let mut ech = RowEchelon::new(l);
    for r in rows {
        ech.push(r)?;
        if ech.rank() == l {
            return Ok(Some(ech.independent_rows().to_vec()));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cramer {
    /// `D = det(H_i(x_j))`.
    pub d: Cyclo,
    /// `C_i`: `D` with column `i` replaced by the `G` values.
    pub c_num: Vec<Cyclo>,
    /// `c_i = C_i / D`.
    pub coeffs: Vec<Cyclo>,
}

/// Solves `G(x_j) = Σ_i c_i H_i(x_j)` for `j = 1..ℓ`; `h[j][i] = H_i(x_j)`.
pub fn cramer(h: &[Vec<Cyclo>], g: &[Cyclo]) -> Result<Cramer> {
    let l = h.len();
    if g.len() != l {
        return Err(Error::Invalid(format!("{} right-hand sides for {l} rows", g.len())));
    }
    let d = det(h)?;
    if d.is_zero() {
        return Err(Error::Singular);
    }
    let mut c_num = Vec::with_capacity(l);
    let mut coeffs = Vec::with_capacity(l);
    for i in 0..l {
        let m: Vec<Vec<Cyclo>> = h
            .iter()
            .zip(g)
            .map(|(row, gj)| {
                let mut r = row.clone();
                r[i] = gj.clone();
                r
            })
            .collect();
        let ci = det(&m)?;
        coeffs.push(ci.try_div(&d)?);
        c_num.push(ci);
    }
    Ok(Cramer { d, c_num, coeffs })
}

fn values_at(specs: &[Spec], field: &LocalFieldDesc, psi: &Character, y: &Point, x: &Point) -> Result<Vec<Cyclo>> {
    let p = x.merged(y);
    specs.iter().map(|s| eval_expfun(s, field, psi, &p)).collect()
}

/// Cramer recovery of `G = Σ c_i H_i` from the points `w = (x_1..x_ℓ)` at fixed `y`.
pub fn cramer_coeffs(
    hs: &[Spec],
    g: &Spec,
    field: &LocalFieldDesc,
    psi: &Character,
    y: &Point,
    w: &[Point],
) -> Result<Cramer> {
    if w.len() != hs.len() {
        return Err(Error::Invalid(format!("{} points for {} functions", w.len(), hs.len())));
    }
    let mut rows = Vec::with_capacity(w.len());
    let mut gv = Vec::with_capacity(w.len());
    for x in w {
        rows.push(values_at(hs, field, psi, y, x)?);
        gv.push(eval_expfun(g, field, psi, &x.merged(y))?);
    }
    cramer(&rows, &gv)
}

/// Points among `held_out` where `G ≠ Σ c_i H_i`.
pub fn combination_residuals(
    hs: &[Spec],
    g: &Spec,
    coeffs: &[Cyclo],
    field: &LocalFieldDesc,
    psi: &Character,
    y: &Point,
    held_out: &[Point],
) -> Result<Vec<usize>> {
    let mut bad = Vec::new();
    for (k, x) in held_out.iter().enumerate() {
        let hv = values_at(hs, field, psi, y, x)?;
        let mut comb = Cyclo::zero();
        for (c, h) in coeffs.iter().zip(&hv) {
            comb = comb.try_add(&c.try_mul(h)?)?;
        }
        if comb != eval_expfun(g, field, psi, &x.merged(y))? {
            bad.push(k);
        }
    }
    Ok(bad)
}

/// A tuple of candidate indices with `det(H_i(x_j, y)) ≠ 0`, or `None`.
pub fn find_witness_w(
    hs: &[Spec],
    field: &LocalFieldDesc,
    psi: &Character,
    y: &Point,
    candidates: &[Point],
) -> Result<Option<Vec<usize>>> {
    if candidates.is_empty() {
        return Err(Error::Invalid("no candidate points".into()));
    }
    let mut ech = RowEchelon::new(hs.len());
    for x in candidates {
        ech.push(&values_at(hs, field, psi, y, x)?)?;
        if ech.rank() == hs.len() {
            return Ok(Some(ech.independent_rows().to_vec()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(v: &[i64]) -> Vec<Cyclo> {
        v.iter().map(|&n| Cyclo::from_int(n)).collect()
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn leibniz(m: &[Vec<Cyclo>]) -> Cyclo {
        let mut total = Cyclo::zero();
        for p in permutations(m.len()) {
            let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let mut term = Cyclo::from_int(if inversions % 2 == 0 { 1 } else { -1 });
            for (row, &c) in p.iter().enumerate() {
                term = &term * &m[row][c];
            }
            total = total + term;
        }
        total
    }

    #[test]
    fn determinant_matches_leibniz() {
        let z = Cyclo::zeta(5, 1).unwrap();
        let m = vec![
            vec![Cyclo::from_int(2), z.clone(), Cyclo::from_int(0)],
            vec![z.conj(), Cyclo::from_int(1), Cyclo::from_int(3)],
            vec![Cyclo::from_int(-1), z.pow(2), z.clone()],
        ];
        assert_eq!(det(&m).unwrap(), leibniz(&m));
        let sing = vec![col(&[1, 2]), col(&[2, 4])];
        assert!(det(&sing).unwrap().is_zero());
    }

    #[test]
    fn dependence_examples() {
        assert_eq!(
            dependence_test(&[col(&[1, 2, 3]), col(&[2, 4, 6])]).unwrap(),
            Dependence::Dependent { kernel: col(&[2, -1]) }
        );
        assert_eq!(
            dependence_test(&[col(&[1, 0]), col(&[0, 1])]).unwrap(),
            Dependence::Independent { witness: vec![0, 1] }
        );
        assert!(dependence_test(&[col(&[1]), col(&[1])]).is_err());
        assert_eq!(
            dependence_test_partial(&[col(&[1]), col(&[1])], false).unwrap(),
            Dependence::Inconclusive { rank: 1, rows: 1 }
        );
    }

    #[test]
    fn cramer_recovers_coefficients() {
        let h = vec![col(&[1, 2]), col(&[3, -1])];
        let g: Vec<Cyclo> = h.iter().map(|r| &(&r[0] * &Cyclo::from_int(2)) + &(&r[1] * &Cyclo::from_int(3))).collect();
        let c = cramer(&h, &g).unwrap();
        assert_eq!(c.coeffs, col(&[2, 3]));
        for (ci, num) in c.coeffs.iter().zip(&c.c_num) {
            assert_eq!(&(ci * &c.d), num);
        }
        assert_eq!(cramer(&[col(&[5])], &col(&[0])).unwrap().coeffs, col(&[0]));
        assert_eq!(cramer(&[col(&[1, 1]), col(&[2, 2])], &col(&[1, 1])), Err(Error::Singular));
    }

    #[test]
    fn witness_rows() {
        let rows = vec![col(&[0, 0]), col(&[1, 1]), col(&[2, 2]), col(&[1, 0])];
        assert_eq!(find_witness_rows(&rows).unwrap(), Some(vec![1, 3]));
        assert_eq!(find_witness_rows(&[col(&[0]), col(&[0])]).unwrap(), None);
    }
}
