//! The depth-bounded additive character family.
//!
//! Every member restricts to `x ↦ e(tr(x̄))` on the valuation ring and is
//! trivial on the maximal ideal. At depth `d` the members are
//! `ψ_b(x) = ψ_0(b·x)` for the `q^d` units `b = 1 + ϖ·c` with
//! `c = Σ_{i<d} c_i ϖ^i`, where `ψ_0` is the standard character:
//!
//! * in `F_q((t))`, `ψ_0(y) = ζ_p^{tr(y_0)}` with `y_0` the coefficient of `t^0`;
//! * in `Q_q`, `ψ_0(y) = exp(2πi·Tr(y)/p)` read modulo 1, computed as
//!   `ζ_{p^{d+1}}^{Tr(p^d y)}` from `p^d y mod p^{d+1}`.
//!
//! The index of `ψ_b` is `Σ index(c_i)·q^i`, so index 0 is the standard character.

use std::fmt;

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::limits;
use crate::localfield::{FieldKind, LocalFieldDesc, ResidueElem, ResidueField, Valuation, ValuedElem};

/// `e(tr(v)) = ζ_p^{tr(v)}`.
pub fn residue_character(k: &ResidueField, v: ResidueElem) -> Cyclo {
    Cyclo::zeta(k.p() as u64, k.trace(v) as i64).expect("p is within the cyclotomic limit")
}

#[derive(Clone)]
pub struct Character {
    field: LocalFieldDesc,
    depth: u32,
    index: u64,
    twist: ValuedElem,
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "psi[d={},#{}]", self.depth, self.index)
    }
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.depth == other.depth && self.index == other.index
    }
}

/// The depth-0 character `x ↦ e(tr(x̄))`.
pub fn standard_psi(field: &LocalFieldDesc) -> Character {
    Character {
        field: field.clone(),
        depth: 0,
        index: 0,
        twist: ValuedElem::one(field),
    }
}

fn family_size(field: &LocalFieldDesc, depth: u32) -> Result<u64> {
    if depth + 1 > field.precision() {
        return Err(Error::Invalid(format!(
            "depth {depth} needs at least {} digits of precision, field has {}",
            depth + 1,
            field.precision()
        )));
    }
    let size = (field.q() as u128).pow(depth);
    if size > limits::MAX_CHARACTERS as u128 {
        return Err(Error::capacity("character family", size, limits::MAX_CHARACTERS));
    }
    Ok(size as u64)
}

impl Character {
    /// The member of the depth-`depth` family with the given index.
    pub fn new(field: &LocalFieldDesc, depth: u32, index: u64) -> Result<Self> {
        let size = family_size(field, depth)?;
        if index >= size {
            return Err(Error::Invalid(format!("character index {index} out of range 0..{size}")));
        }
        let q = field.q() as u64;
        let mut digits = vec![ResidueElem::ONE];
        let mut rest = index;
        for _ in 0..depth {
            digits.push(ResidueElem((rest % q) as u32));
            rest /= q;
        }
        digits.resize(field.precision() as usize, ResidueElem::ZERO);
        let twist = ValuedElem::from_digits(field, 0, &digits)?;
        Ok(Character {
            field: field.clone(),
            depth,
            index,
            twist,
        })
    }

    pub fn field(&self) -> &LocalFieldDesc {
        &self.field
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Order of the root of unity group holding the values.
    pub fn value_order(&self) -> u64 {
        match self.field.kind() {
            FieldKind::EqualChar => self.field.p() as u64,
            FieldKind::MixedChar => (self.field.p() as u64).pow(self.depth + 1),
        }
    }

    /// The exponent `k` with `ψ(a) = ζ^k`, `ζ` of order [`Self::value_order`].
    pub fn exponent(&self, a: &ValuedElem) -> Result<u64> {
        if a.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        if a.is_exact_zero() {
            return Ok(0);
        }
        if let Valuation::Finite(v) = a.ord() {
            if v < -(self.depth as i64) {
                return Err(Error::DepthExceeded {
                    depth: self.depth,
                    valuation: v,
                });
            }
        }
        let y = a.mul(&self.twist)?;
        let k = self.field.residue();
        match self.field.kind() {
            FieldKind::EqualChar => Ok(k.trace(y.digit_at(0)?) as u64),
            FieldKind::MixedChar => {
                let z = y.scaled_window(self.depth)?;
                let m = self.value_order() as u128;
                let traces = self.field.traces();
                let t = z.iter().zip(traces).fold(0u128, |acc, (zi, ti)| (acc + zi * (ti % m)) % m);
                Ok(t as u64)
            }
        }
    }

    /// `ψ(a)`.
    pub fn eval(&self, a: &ValuedElem) -> Result<Cyclo> {
        let e = self.exponent(a)?;
        Cyclo::zeta(self.value_order(), e as i64)
    }

    /// `ψ(a + v)`, with `v` lifted by placing it as the digit at `ϖ^0`.
    pub fn eval_with_residue(&self, a: &ValuedElem, v: Option<ResidueElem>) -> Result<Cyclo> {
        match v {
            None => self.eval(a),
            Some(v) => self.eval(&a.add(&ValuedElem::from_residue(&self.field, v))?),
        }
    }
}

/// All `q^d` members of the depth-`d` family, by index.
pub fn enumerate_characters(field: &LocalFieldDesc, depth: u32) -> Result<Vec<Character>> {
    let size = family_size(field, depth)?;
    (0..size).map(|i| Character::new(field, depth, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::parse_element;

    fn field(kind: FieldKind, p: u64, f: u32) -> LocalFieldDesc {
        LocalFieldDesc::new(kind, p, f, 6).unwrap()
    }

    #[test]
    fn standard_on_q7() {
        let f = field(FieldKind::MixedChar, 7, 1);
        let psi = standard_psi(&f);
        assert_eq!(psi.eval(&ValuedElem::from_int(&f, 3)).unwrap(), Cyclo::zeta(7, 3).unwrap());
        assert_eq!(
            psi.eval_with_residue(&ValuedElem::zero(&f), Some(ResidueElem(3))).unwrap(),
            Cyclo::zeta(7, 3).unwrap()
        );
        assert!(psi.eval(&ValuedElem::from_int(&f, 14)).unwrap().is_one());
    }

    #[test]
    fn standard_on_f4() {
        let f = field(FieldKind::EqualChar, 2, 2);
        let a = ValuedElem::from_residue(&f, f.residue().generator());
        assert_eq!(standard_psi(&f).eval(&a).unwrap(), Cyclo::from_int(-1));
    }

    #[test]
    fn family_sizes() {
        let q5 = field(FieldKind::MixedChar, 5, 1);
        assert_eq!(enumerate_characters(&q5, 0).unwrap().len(), 1);
        assert_eq!(enumerate_characters(&q5, 2).unwrap().len(), 25);
        let f9 = field(FieldKind::EqualChar, 3, 2);
        let fam = enumerate_characters(&f9, 1).unwrap();
        assert_eq!(fam.len(), 9);
        let x = parse_element(&f9, "a*t^-1 + 2").unwrap();
        for psi in &fam {
            assert_eq!(psi.value_order(), 3);
            assert_eq!(psi.eval(&x).unwrap().pow(3), Cyclo::one());
        }
    }

    #[test]
    fn depth_one_on_q5_is_a_fifth_root_of_psi_one() {
        let f = field(FieldKind::MixedChar, 5, 1);
        let inv5 = parse_element(&f, "5^-1").unwrap();
        for psi in enumerate_characters(&f, 1).unwrap() {
            let v = psi.eval(&inv5).unwrap();
            assert_eq!(v.pow(5), psi.eval(&ValuedElem::one(&f)).unwrap());
            assert_eq!(v.pow(25), Cyclo::one());
        }
    }

    #[test]
    fn trivial_on_maximal_ideal() {
        for kind in [FieldKind::EqualChar, FieldKind::MixedChar] {
            let f = field(kind, 5, 1);
            let x = parse_element(&f, "3*t + t^2").unwrap();
            for psi in enumerate_characters(&f, 2).unwrap() {
                assert!(psi.eval(&x).unwrap().is_one());
            }
        }
    }

    #[test]
    fn depth_exceeded() {
        let f = field(FieldKind::EqualChar, 5, 1);
        let x = parse_element(&f, "t^-2").unwrap();
        let psi = Character::new(&f, 1, 3).unwrap();
        assert_eq!(psi.eval(&x), Err(Error::DepthExceeded { depth: 1, valuation: -2 }));
    }

    #[test]
    fn members_are_distinct_on_the_polar_group() {
        for kind in [FieldKind::EqualChar, FieldKind::MixedChar] {
            let f = field(kind, 3, 1);
            let fam = enumerate_characters(&f, 2).unwrap();
            let probes: Vec<ValuedElem> = ["t^-1", "t^-2", "2*t^-2 + t^-1"]
                .iter()
                .map(|s| parse_element(&f, s).unwrap())
                .collect();
            let sigs: Vec<Vec<u64>> = fam
                .iter()
                .map(|psi| probes.iter().map(|x| psi.exponent(x).unwrap()).collect())
                .collect();
            for i in 0..sigs.len() {
                for j in 0..i {
                    assert_ne!(sigs[i], sigs[j]);
                }
            }
        }
    }
}
