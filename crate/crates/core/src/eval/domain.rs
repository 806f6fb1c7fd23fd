use std::fmt;

use rand::Rng;

use super::{Point, Value};
use crate::error::{Error, Result};
use crate::ir::Sort;
use crate::limits;
use crate::localfield::{LocalFieldDesc, ResidueElem, ValuedElem};

/// Window for one coordinate of an evaluation domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoordDomain {
    /// Elements with `vmin ≤ ord ≤ vmax`, `digits` leading digits enumerated.
    Vf { vmin: i64, vmax: i64, digits: u32 },
    Rf,
    Zz { lo: i64, hi: i64 },
    /// The inverse of another VF coordinate.
    VfInv { of: String },
}

impl CoordDomain {
    pub fn sort(&self) -> Sort {
        match self {
            CoordDomain::Vf { .. } | CoordDomain::VfInv { .. } => Sort::VF,
            CoordDomain::Rf => Sort::RF,
            CoordDomain::Zz { .. } => Sort::ZZ,
        }
    }
}

/// A finite sampling window for a list of variables.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EvalDomain {
    pub coords: Vec<(String, CoordDomain)>,
}

/// A field-independent coordinate value: digits are residue indices, so one
/// grid point can be realized in any field with the same residue field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    /// `None` is zero; otherwise `(ord, digits)` with a nonzero leading digit.
    Vf(Option<(i64, Vec<u32>)>),
    Rf(u32),
    Zz(i64),
    /// Inverse of the named coordinate, computed in the target field.
    Inv(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    pub coords: Vec<(String, Coord)>,
}

impl GridPoint {
    pub fn realize(&self, field: &LocalFieldDesc) -> Result<Point> {
        let mut p = Point::new();
        for (name, c) in &self.coords {
            let v = match c {
                Coord::Vf(None) => Value::Vf(ValuedElem::zero(field)),
                Coord::Vf(Some((val, digits))) => {
                    let mut d: Vec<ResidueElem> = digits.iter().map(|&i| field.residue().elem(i)).collect::<Result<_>>()?;
                    d.resize(field.precision() as usize, ResidueElem::ZERO);
                    Value::Vf(ValuedElem::from_digits(field, *val, &d)?)
                }
                Coord::Rf(i) => Value::Rf(field.residue().elem(*i)?),
                Coord::Zz(n) => Value::Zz(*n),
                Coord::Inv(_) => continue,
            };
            p.set(name, v);
        }
        for (name, c) in &self.coords {
            if let Coord::Inv(of) = c {
                let v = match p.get(of) {
                    Some(Value::Vf(v)) => v.inv().map_err(|_| Error::Eval(format!("`{name}` inverts `{of}`, which is zero")))?,
                    _ => return Err(Error::Invalid(format!("`{name}` inverts `{of}`, which is not a VF coordinate"))),
                };
                p.set(name, Value::Vf(v));
            }
        }
        Ok(p)
    }

    /// `(ord, ac)` of VF coordinates and the raw RF and ZZ values; derived coordinates are skipped.
    pub fn profile(&self) -> Vec<(i64, u32)> {
        self.coords
            .iter()
            .filter(|(_, c)| !matches!(c, Coord::Inv(_)))
            .map(|(_, c)| match c {
                Coord::Vf(None) => (i64::MAX, 0),
                Coord::Vf(Some((v, d))) => (*v, d[0]),
                Coord::Rf(i) => (0, *i),
                Coord::Zz(n) => (*n, 0),
                Coord::Inv(_) => unreachable!(),
            })
            .collect()
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|(n, c)| match c {
                Coord::Vf(None) => format!("{n}=0"),
                Coord::Vf(Some((v, d))) => {
                    let ds: Vec<String> = d.iter().map(u32::to_string).collect();
                    format!("{n}=[{v}:{}]", ds.join(","))
                }
                Coord::Rf(i) => format!("{n}=#{i}"),
                Coord::Zz(k) => format!("{n}={k}"),
                Coord::Inv(of) => format!("{n}=1/{of}"),
            })
            .collect();
        f.write_str(&parts.join("; "))
    }
}

/// One enumerated cell: a representative point of Haar measure `q^-weight`.
#[derive(Clone, Debug)]
pub struct Cell {
    pub point: GridPoint,
    pub weight: i64,
    /// Largest window offset among the VF and ZZ coordinates.
    pub shell: u64,
    /// The cell lies in the ball `ϖ^{vmax+1}O` of some VF coordinate.
    pub tail: bool,
}

fn parse_window(s: &str) -> Result<(i64, i64)> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Invalid(format!("expected a window `[lo, hi]`, got `{s}`")))?;
    let (a, b) = inner
        .split_once(',')
        .ok_or_else(|| Error::Invalid(format!("expected a window `[lo, hi]`, got `{s}`")))?;
    let num = |x: &str| {
        x.trim()
            .parse::<i64>()
            .map_err(|_| Error::Invalid(format!("`{}` is not an integer", x.trim())))
    };
    let (lo, hi) = (num(a)?, num(b)?);
    if lo > hi {
        return Err(Error::Invalid(format!("empty window [{lo}, {hi}]")));
    }
    Ok((lo, hi))
}

impl EvalDomain {
    /// Parses `x: vf [-1, 3] digits 2; k: zz [0, 5]; u: rf`.
    pub fn parse(src: &str) -> Result<Self> {
        let mut coords = Vec::new();
        for part in src.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, rest) = part
                .split_once(':')
                .ok_or_else(|| Error::Invalid(format!("expected `name: sort ...`, got `{part}`")))?;
            let name = name.trim().to_string();
            if coords.iter().any(|(n, _)| n == &name) {
                return Err(Error::Invalid(format!("`{name}` appears twice in the domain")));
            }
            let rest = rest.trim();
            let (kw, tail) = rest.split_at(rest.find(|c: char| c.is_whitespace() || c == '[').unwrap_or(rest.len()));
            let dom = match kw.to_ascii_lowercase().as_str() {
                "rf" => {
                    if !tail.trim().is_empty() {
                        return Err(Error::Invalid(format!("RF coordinate `{name}` takes no window")));
                    }
                    CoordDomain::Rf
                }
                "zz" => {
                    let (lo, hi) = parse_window(tail)?;
                    CoordDomain::Zz { lo, hi }
                }
                "vf" if tail.trim_start().starts_with("inv ") => {
                    let of = tail.trim_start()[4..].trim().to_string();
                    if !coords.iter().any(|(n, d): &(String, CoordDomain)| *n == of && matches!(d, CoordDomain::Vf { .. })) {
                        return Err(Error::Invalid(format!("`{name}: vf inv {of}` needs an earlier VF window for `{of}`")));
                    }
                    CoordDomain::VfInv { of }
                }
                "vf" => {
                    let (win, digits) = match tail.split_once("digits") {
                        Some((w, d)) => (
                            w,
                            d.trim()
                                .parse::<u32>()
                                .map_err(|_| Error::Invalid(format!("bad digit count `{}`", d.trim())))?,
                        ),
                        None => (tail, 1),
                    };
                    if digits == 0 {
                        return Err(Error::Invalid("digit count must be at least 1".into()));
                    }
                    let (vmin, vmax) = parse_window(win)?;
                    CoordDomain::Vf { vmin, vmax, digits }
                }
                other => return Err(Error::Invalid(format!("unknown sort `{other}` in domain"))),
            };
            coords.push((name, dom));
        }
        Ok(EvalDomain { coords })
    }

    pub fn names(&self) -> Vec<&str> {
        self.coords.iter().map(|(n, _)| n.as_str()).collect()
    }

    /// Checks that every coordinate is a declared variable of the matching sort.
    pub fn check_sorts(&self, decls: &[(String, Sort)]) -> Result<()> {
        for (n, d) in &self.coords {
            match decls.iter().find(|(m, _)| m == n) {
                None => return Err(Error::Invalid(format!("domain coordinate `{n}` is not a declared variable"))),
                Some((_, s)) if *s != d.sort() => {
                    return Err(Error::Invalid(format!("`{n}` is declared {s} but its window is {}", d.sort())));
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn options(&self, dom: &CoordDomain, q: u64, with_tail: bool) -> u128 {
        match dom {
            CoordDomain::Vf { vmin, vmax, digits } => {
                let per = (q as u128 - 1) * (q as u128).saturating_pow(digits - 1);
                per.saturating_mul((vmax - vmin + 1) as u128) + with_tail as u128
            }
            CoordDomain::Rf => q as u128,
            CoordDomain::Zz { lo, hi } => (hi - lo + 1) as u128,
            CoordDomain::VfInv { .. } => 1,
        }
    }

    /// Number of cells enumerated by [`Self::cells`].
    pub fn cell_count(&self, q: u32) -> u128 {
        self.coords
            .iter()
            .fold(1u128, |acc, (_, d)| acc.saturating_mul(self.options(d, q as u64, true)))
    }

    fn coord_values(dom: &CoordDomain, q: u64, with_tail: bool) -> Vec<(Coord, i64, u64, bool)> {
        let mut out = Vec::new();
        match dom {
            CoordDomain::Vf { vmin, vmax, digits } => {
                let m = *digits as usize;
                for k in *vmin..=*vmax {
                    let count = (q - 1) * q.pow(m as u32 - 1);
                    for idx in 0..count {
                        let mut d = vec![0u32; m];
                        let mut rest = idx;
                        for slot in d.iter_mut().skip(1).rev() {
                            *slot = (rest % q) as u32;
                            rest /= q;
                        }
                        d[0] = rest as u32 + 1;
                        out.push((Coord::Vf(Some((k, d))), k + m as i64, (k - vmin) as u64, false));
                    }
                }
                if with_tail {
                    out.push((Coord::Vf(None), vmax + 1, 0, true));
                }
            }
            CoordDomain::Rf => out.extend((0..q as u32).map(|i| (Coord::Rf(i), 0, 0, false))),
            CoordDomain::Zz { lo, hi } => out.extend((*lo..=*hi).map(|n| (Coord::Zz(n), 0, (n - lo) as u64, false))),
            CoordDomain::VfInv { of } => out.push((Coord::Inv(of.clone()), 0, 0, false)),
        }
        out
    }

    /// All cells of the domain in lexicographic order, with the tail balls of VF coordinates.
    pub fn cells(&self, q: u32) -> Result<Vec<Cell>> {
        self.product(q, true)
    }

    /// All cell representatives, without tail balls.
    pub fn grid(&self, q: u32) -> Result<Vec<GridPoint>> {
        Ok(self.product(q, false)?.into_iter().map(|c| c.point).collect())
    }

    fn product(&self, q: u32, with_tail: bool) -> Result<Vec<Cell>> {
        let size = self
            .coords
            .iter()
            .fold(1u128, |acc, (_, d)| acc.saturating_mul(self.options(d, q as u64, with_tail)));
        if size > limits::MAX_ENUM as u128 {
            return Err(Error::capacity("evaluation domain", size, limits::MAX_ENUM));
        }
        let mut cells = vec![Cell {
            point: GridPoint { coords: Vec::new() },
            weight: 0,
            shell: 0,
            tail: false,
        }];
        for (name, dom) in &self.coords {
            let vals = Self::coord_values(dom, q as u64, with_tail);
            let mut next = Vec::with_capacity(cells.len() * vals.len());
            for c in &cells {
                for (v, w, s, t) in &vals {
                    let mut point = c.point.clone();
                    point.coords.push((name.clone(), v.clone()));
                    next.push(Cell {
                        point,
                        weight: c.weight + w,
                        shell: c.shell.max(*s),
                        tail: c.tail || *t,
                    });
                }
            }
            cells = next;
        }
        Ok(cells)
    }

    /// `n` seeded random grid points.
    pub fn sample<R: Rng>(&self, q: u32, n: usize, rng: &mut R) -> Vec<GridPoint> {
        (0..n)
            .map(|_| GridPoint {
                coords: self
                    .coords
                    .iter()
                    .map(|(name, dom)| {
                        let c = match dom {
                            CoordDomain::Vf { vmin, vmax, digits } => {
                                let v = rng.gen_range(*vmin..=*vmax);
                                let mut d: Vec<u32> = (0..*digits).map(|_| rng.gen_range(0..q)).collect();
                                d[0] = rng.gen_range(1..q);
                                Coord::Vf(Some((v, d)))
                            }
                            CoordDomain::Rf => Coord::Rf(rng.gen_range(0..q)),
                            CoordDomain::Zz { lo, hi } => Coord::Zz(rng.gen_range(*lo..=*hi)),
                            CoordDomain::VfInv { of } => Coord::Inv(of.clone()),
                        };
                        (name.clone(), c)
                    })
                    .collect(),
            })
            .collect()
    }
}

impl fmt::Display for EvalDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|(n, d)| match d {
                CoordDomain::Vf { vmin, vmax, digits } => format!("{n}: vf [{vmin}, {vmax}] digits {digits}"),
                CoordDomain::Rf => format!("{n}: rf"),
                CoordDomain::Zz { lo, hi } => format!("{n}: zz [{lo}, {hi}]"),
                CoordDomain::VfInv { of } => format!("{n}: vf inv {of}"),
            })
            .collect();
        f.write_str(&parts.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::FieldKind;
    use rand::SeedableRng;

    #[test]
    fn parse_and_print() {
        let d = EvalDomain::parse("x: vf [-1,3] digits 2; k: zz [0, 5]; u: rf").unwrap();
        assert_eq!(d.coords.len(), 3);
        assert_eq!(d.coords[0].1, CoordDomain::Vf { vmin: -1, vmax: 3, digits: 2 });
        assert_eq!(EvalDomain::parse(&d.to_string()).unwrap(), d);
        assert!(EvalDomain::parse("x: vf [3, 1]").is_err());
        assert!(EvalDomain::parse("x: qq [0, 1]").is_err());
    }

    #[test]
    fn inverse_coordinates() {
        let d = EvalDomain::parse("x: vf [1, 2]; w: vf inv x").unwrap();
        assert_eq!(EvalDomain::parse(&d.to_string()).unwrap(), d);
        assert!(EvalDomain::parse("w: vf inv x").is_err());
        let f = LocalFieldDesc::new(FieldKind::MixedChar, 5, 1, 6).unwrap();
        for g in d.grid(5).unwrap() {
            assert_eq!(g.profile().len(), 1);
            let p = g.realize(&f).unwrap();
            let (Some(Value::Vf(x)), Some(Value::Vf(w))) = (p.get("x"), p.get("w")) else { panic!() };
            assert!(x.mul(w).unwrap().equals_within_precision(&ValuedElem::one(&f)).unwrap());
        }
    }

    #[test]
    fn cell_counts_and_measure() {
        let d = EvalDomain::parse("y: vf [0, 2] digits 2").unwrap();
        let cells = d.cells(5).unwrap();
        assert_eq!(cells.len() as u128, d.cell_count(5));
        assert_eq!(cells.len(), 3 * 20 + 1);
        // Haar masses of the cells add up to 1
        let total: f64 = cells.iter().map(|c| 5f64.powi(-(c.weight as i32))).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grid_points_realize_in_both_fields() {
        let d = EvalDomain::parse("x: vf [-1, 1] digits 2; u: rf").unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pts = d.sample(9, 5, &mut rng);
        for kind in [FieldKind::EqualChar, FieldKind::MixedChar] {
            let f = LocalFieldDesc::new(kind, 3, 2, 4).unwrap();
            for g in &pts {
                let p = g.realize(&f).unwrap();
                let Some(Value::Vf(x)) = p.get("x") else { panic!() };
                let (v, digits) = match &g.coords[0].1 {
                    Coord::Vf(Some(vd)) => vd.clone(),
                    _ => panic!(),
                };
                assert_eq!(x.ord().finite(), Some(v));
                assert_eq!(x.ac().index(), digits[0]);
            }
        }
    }
}
