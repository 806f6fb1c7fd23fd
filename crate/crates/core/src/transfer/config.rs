use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::eval::EvalDomain;
use crate::localfield::is_prime;

/// Parameters of a prime sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub p_min: u32,
    pub p_max: u32,
    pub f: u32,
    pub precision: u32,
    /// Character depth `d`.
    pub depth: u32,
    /// Ceiling for automatic depth raises.
    pub max_depth: u32,
    #[serde(serialize_with = "as_display")]
    pub grid: EvalDomain,
    /// Window for the `y` coordinates of dependence sweeps.
    #[serde(serialize_with = "as_display")]
    pub y_grid: EvalDomain,
    pub samples: usize,
    pub y_samples: usize,
    pub seed: u64,
    #[serde(serialize_with = "rational_rows")]
    pub c_grid: Vec<Vec<BigRational>>,
    /// Extra seeded random coefficient vectors.
    pub random_c: usize,
    pub tolerance: f64,
    /// VF terms added to the profile map of factorization checks.
    pub profile: Vec<String>,
}

fn as_display<S: Serializer, T: std::fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn rational_rows<S: Serializer>(rows: &[Vec<BigRational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let text: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    text.serialize(s)
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            p_min: 5,
            p_max: 23,
            f: 1,
            precision: 8,
            depth: 1,
            max_depth: 3,
            grid: EvalDomain::default(),
            y_grid: EvalDomain::default(),
            samples: 24,
            y_samples: 4,
            seed: 0,
            c_grid: Vec::new(),
            random_c: 0,
            tolerance: 1e-9,
            profile: Vec::new(),
        }
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("`{s}` is not a rational number"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Parses `1, -1/2, 3`.
pub fn parse_rational_vector(s: &str) -> Result<Vec<BigRational>> {
    s.split(',').map(parse_rational).collect()
}

impl SweepConfig {
    /// Reads a `config { key: value ... }` block, one item per line.
    ///
    /// Keys: `pmin`, `pmax`, `f`, `precision`, `depth`, `max_depth`, `grid`,
    /// `ygrid`, `samples`, `ysamples`, `seed`, `c` (repeatable), `random_c`,
    /// `tolerance`, `profile` (repeatable). Repeated `grid` lines append
    /// coordinates. `#` starts a comment.
    pub fn parse(src: &str) -> Result<Self> {
        let mut cfg = SweepConfig::default();
        let mut grid = Vec::new();
        let mut ygrid = Vec::new();
        let mut opened = false;
        let mut closed = false;
        for (no, raw) in src.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse {
                line: no + 1,
                col: 1,
                msg,
            };
            if closed {
                return Err(err("text after the closing `}`".into()));
            }
            if !opened {
                let head: Vec<&str> = line.split_whitespace().collect();
                if head != ["config", "{"] {
                    return Err(err("expected `config {`".into()));
                }
                opened = true;
                continue;
            }
            if line == "}" {
                closed = true;
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| err(format!("expected `key: value`, got `{line}`")))?;
            let value = value.trim();
            let int = |v: &str| v.parse::<u64>().map_err(|_| err(format!("`{v}` is not a nonnegative integer")));
            match key.trim() {
                "pmin" => cfg.p_min = int(value)? as u32,
                "pmax" => cfg.p_max = int(value)? as u32,
                "f" => cfg.f = int(value)? as u32,
                "precision" => cfg.precision = int(value)? as u32,
                "depth" => cfg.depth = int(value)? as u32,
                "max_depth" => cfg.max_depth = int(value)? as u32,
                "samples" => cfg.samples = int(value)? as usize,
                "ysamples" => cfg.y_samples = int(value)? as usize,
                "seed" => cfg.seed = int(value)?,
                "random_c" => cfg.random_c = int(value)? as usize,
                "tolerance" => {
                    cfg.tolerance = value
                        .parse()
                        .map_err(|_| err(format!("`{value}` is not a number")))?
                }
                "grid" => grid.push(value.to_string()),
                "ygrid" => ygrid.push(value.to_string()),
                "c" => cfg.c_grid.push(parse_rational_vector(value).map_err(|e| err(e.to_string()))?),
                "profile" => cfg.profile.push(value.to_string()),
                other => return Err(err(format!("unknown config key `{other}`"))),
            }
        }
        if !closed {
            return Err(Error::Parse {
                line: src.lines().count().max(1),
                col: 1,
                msg: "missing `config { ... }` block".into(),
            });
        }
        cfg.grid = EvalDomain::parse(&grid.join(";"))?;
        cfg.y_grid = EvalDomain::parse(&ygrid.join(";"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p_min < 3 {
            return Err(Error::Invalid(format!("p_min must be at least 3, got {}", self.p_min)));
        }
        if self.p_min > self.p_max {
            return Err(Error::Invalid(format!("empty prime range [{}, {}]", self.p_min, self.p_max)));
        }
        if self.f == 0 {
            return Err(Error::Invalid("f must be positive".into()));
        }
        if self.max_depth < self.depth {
            return Err(Error::Invalid(format!(
                "max_depth {} is below depth {}",
                self.max_depth, self.depth
            )));
        }
        if self.depth >= self.precision {
            return Err(Error::Invalid(format!(
                "depth {} needs precision above {}",
                self.depth, self.precision
            )));
        }
        if self.samples == 0 {
            return Err(Error::Invalid("samples must be positive".into()));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::Invalid("tolerance must be nonnegative".into()));
        }
        if self.primes().is_empty() {
            return Err(Error::Invalid(format!("no primes in [{}, {}]", self.p_min, self.p_max)));
        }
        Ok(())
    }

    pub fn primes(&self) -> Vec<u32> {
        (self.p_min..=self.p_max).filter(|&p| is_prime(p as u64)).collect()
    }

    /// The explicit coefficient vectors followed by `random_c` seeded ones
    /// with entries `a/b`, `|a| ≤ 5`, `1 ≤ b ≤ 4`.
    pub fn c_vectors(&self, len: usize) -> Result<Vec<Vec<BigRational>>> {
        for c in &self.c_grid {
            if c.len() != len {
                return Err(Error::Invalid(format!(
                    "coefficient vector of length {} for {len} functions",
                    c.len()
                )));
            }
        }
        let mut out = self.c_grid.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0xc0ef_f1c1_e475);
        for _ in 0..self.random_c {
            out.push(
                (0..len)
                    .map(|_| {
                        BigRational::new(BigInt::from(rng.gen_range(-5i64..=5)), BigInt::from(rng.gen_range(1i64..=4)))
                    })
                    .collect(),
            );
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = "
# sweep settings
config {
  pmin: 5
  pmax: 13
  depth: 1
  seed: 42
  grid: x: vf [0, 2] digits 2
  grid: u: rf
  c: 1, -1/2
  random_c: 3
  profile: x^2 - 1
}
";

    #[test]
    fn parses_block() {
        let c = SweepConfig::parse(TEXT).unwrap();
        assert_eq!((c.p_min, c.p_max, c.seed), (5, 13, 42));
        assert_eq!(c.grid.names(), vec!["x", "u"]);
        assert_eq!(c.primes(), vec![5, 7, 11, 13]);
        let cs = c.c_vectors(2).unwrap();
        assert_eq!(cs.len(), 4);
        assert_eq!(cs[0][1], BigRational::new((-1).into(), 2.into()));
        assert_eq!(cs, c.c_vectors(2).unwrap());
        assert!(c.c_vectors(3).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SweepConfig::parse("config {\n pmin: 2\n}").is_err());
        assert!(SweepConfig::parse("config {\n colour: red\n}").is_err());
        assert!(SweepConfig::parse("pmin: 5").is_err());
        assert!(SweepConfig::parse("config {\n pmin: 5\n").is_err());
        let e = SweepConfig::parse("config {\n seed: -1\n}").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }
}
