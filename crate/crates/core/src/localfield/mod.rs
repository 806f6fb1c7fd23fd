//! Truncated non-Archimedean local fields.
//!
//! Two kinds are supported: the Laurent series field `F_q((t))` and the
//! unramified extension `Q_q` of `Q_p`. Both are described by a prime `p`,
//! a residue degree `f` and a number of significant `ϖ`-adic digits. The
//! residue field is always `F_p[a]/(m)` with `m` the lexicographically
//! smallest monic irreducible polynomial of degree `f`, so two descriptors
//! with the same `(p, f)` share one identified residue field.

mod residue;
mod text;
mod valued;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use residue::{is_prime, smallest_irreducible, ResidueElem, ResidueField};
pub use text::parse_element;
pub use valued::{Valuation, ValuedElem};

use crate::error::{Error, Result};
use crate::limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldKind {
    /// `F_q((t))`, uniformizer `t`.
    EqualChar,
    /// Unramified `Q_q`, uniformizer `p`.
    MixedChar,
}

impl FieldKind {
    pub fn short(self) -> &'static str {
        match self {
            FieldKind::EqualChar => "eq",
            FieldKind::MixedChar => "mixed",
        }
    }

    pub fn other(self) -> FieldKind {
        match self {
            FieldKind::EqualChar => FieldKind::MixedChar,
            FieldKind::MixedChar => FieldKind::EqualChar,
        }
    }
}

impl std::str::FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "eq" | "equal" | "equalchar" => Ok(FieldKind::EqualChar),
            "mixed" | "mixedchar" => Ok(FieldKind::MixedChar),
            other => Err(Error::Invalid(format!("unknown field kind `{other}`"))),
        }
    }
}

struct FieldInner {
    kind: FieldKind,
    precision: u32,
    residue: ResidueField,
    /// `p^precision`, the mantissa modulus in mixed characteristic.
    pn: u128,
    /// `Tr(a^i) mod p^precision` for `i < f` (mixed characteristic only).
    traces: Vec<u128>,
}

/// A truncated local field. Cheap to clone.
#[derive(Clone)]
pub struct LocalFieldDesc {
    inner: Arc<FieldInner>,
}

impl PartialEq for LocalFieldDesc {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.kind() == other.kind()
                && self.precision() == other.precision()
                && self.inner.residue == other.inner.residue)
    }
}
impl Eq for LocalFieldDesc {}

impl fmt::Debug for LocalFieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for LocalFieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            FieldKind::EqualChar => write!(f, "F_{}((t))", self.q())?,
            FieldKind::MixedChar => write!(f, "Q_{}", self.q())?,
        }
        write!(f, " [{} digits]", self.precision())
    }
}

impl LocalFieldDesc {
    /// Builds `F_q((t))` or `Q_q` with `q = p^f`, keeping `precision` significant digits.
    pub fn new(kind: FieldKind, p: u64, f: u32, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::Invalid("precision must be at least 1".into()));
        }
        if precision > limits::MAX_PRECISION {
            return Err(Error::capacity("precision", precision, limits::MAX_PRECISION));
        }
        let residue = ResidueField::new(p, f)?;
        let mut pn = 0u128;
        let mut traces = Vec::new();
        if kind == FieldKind::MixedChar {
            pn = (p as u128)
                .checked_pow(precision)
                .filter(|&v| v <= limits::MAX_MIXED_MODULUS)
                .ok_or_else(|| Error::capacity("p^precision", u128::MAX, limits::MAX_MIXED_MODULUS))?;
            traces = valued::mixed_power_traces(&residue, pn);
        }
        Ok(LocalFieldDesc {
            inner: Arc::new(FieldInner {
                kind,
                precision,
                residue,
                pn,
                traces,
            }),
        })
    }

    /// Parses `kind,p,f,precision`, e.g. `eq,7,1,8`.
    pub fn parse_args(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Invalid(format!("field must be `kind,p,f,precision`, got `{s}`")));
        }
        let num = |x: &str| {
            x.parse::<u64>()
                .map_err(|_| Error::Invalid(format!("`{x}` is not a non-negative integer")))
        };
        LocalFieldDesc::new(parts[0].parse()?, num(parts[1])?, num(parts[2])? as u32, num(parts[3])? as u32)
    }

    pub fn kind(&self) -> FieldKind {
        self.inner.kind
    }

    pub fn p(&self) -> u32 {
        self.inner.residue.p()
    }

    pub fn f(&self) -> u32 {
        self.inner.residue.f()
    }

    pub fn q(&self) -> u32 {
        self.inner.residue.q()
    }

    pub fn precision(&self) -> u32 {
        self.inner.precision
    }

    pub fn residue(&self) -> &ResidueField {
        &self.inner.residue
    }

    pub fn modulus(&self) -> &[u32] {
        self.inner.residue.modulus()
    }

    /// The partner field with the same residue field and the other characteristic.
    pub fn partner(&self) -> Result<Self> {
        LocalFieldDesc::new(self.kind().other(), self.p() as u64, self.f(), self.precision())
    }

    /// True when both fields use the same identified residue field.
    pub fn same_residue_field(&self, other: &Self) -> bool {
        self.inner.residue == other.inner.residue
    }

    pub(crate) fn pn(&self) -> u128 {
        self.inner.pn
    }

    pub(crate) fn traces(&self) -> &[u128] {
        &self.inner.traces
    }

    /// Symbol used for the uniformizer in text output.
    pub fn uniformizer_symbol(&self) -> String {
        match self.kind() {
            FieldKind::EqualChar => "t".into(),
            FieldKind::MixedChar => self.p().to_string(),
        }
    }

    /// Short machine-readable tag, `kind,p,f,precision`.
    pub fn tag(&self) -> String {
        format!("{},{},{},{}", self.kind().short(), self.p(), self.f(), self.precision())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_field_examples() {
        let f = LocalFieldDesc::new(FieldKind::EqualChar, 5, 1, 8).unwrap();
        assert_eq!(f.q(), 5);
        assert_eq!(f.to_string(), "F_5((t)) [8 digits]");
        let m = LocalFieldDesc::new(FieldKind::MixedChar, 5, 1, 8).unwrap();
        assert_eq!(m.to_string(), "Q_5 [8 digits]");
        let q4 = LocalFieldDesc::new(FieldKind::MixedChar, 2, 2, 6).unwrap();
        assert_eq!(q4.q(), 4);
        assert_eq!(q4.modulus(), &[1, 1, 1]);
        assert!(q4.same_residue_field(&q4.partner().unwrap()));
    }

    #[test]
    fn make_field_errors() {
        assert!(matches!(
            LocalFieldDesc::new(FieldKind::EqualChar, 6, 1, 8),
            Err(Error::NotPrime(6))
        ));
        assert!(matches!(
            LocalFieldDesc::new(FieldKind::MixedChar, 31, 1, 40),
            Err(Error::Capacity { .. })
        ));
        assert!(matches!(
            LocalFieldDesc::new(FieldKind::EqualChar, 5, 1, 0),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn parse_args() {
        let f = LocalFieldDesc::parse_args("mixed,5,1,8").unwrap();
        assert_eq!(f.kind(), FieldKind::MixedChar);
        assert_eq!(f.tag(), "mixed,5,1,8");
        assert!(LocalFieldDesc::parse_args("eq,5,1").is_err());
    }
}
