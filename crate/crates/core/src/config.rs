use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bits, mask_of, MAX_VERTICES};

/// A strategy profile `x ∈ {0,1}^V`: bit `i - 1` holds the state of vertex `i`
/// (1 = cooperate, 0 = defect).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Configuration {
    n: usize,
    bits: u64,
}

impl Configuration {
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::capacity(format!("configuration length {n}")));
        }
        if bits & !mask_of(n) != 0 {
            return Err(Error::domain(format!(
                "bitmask {bits:#x} has bits beyond vertex {n}"
            )));
        }
        Ok(Configuration { n, bits })
    }

    #[inline]
    pub(crate) fn raw(n: usize, bits: u64) -> Self {
        debug_assert!(bits & !mask_of(n) == 0);
        Configuration { n, bits }
    }

    pub fn all_defect(n: usize) -> Self {
        Configuration { n, bits: 0 }
    }

    pub fn all_cooperate(n: usize) -> Self {
        Configuration {
            n,
            bits: mask_of(n),
        }
    }

    /// Only vertex `i` cooperates.
    pub fn single_cooperator(n: usize, i: usize) -> Result<Self> {
        check_label(n, i)?;
        Ok(Configuration {
            n,
            bits: 1 << (i - 1),
        })
    }

    /// Only vertex `i` defects.
    pub fn single_defector(n: usize, i: usize) -> Result<Self> {
        check_label(n, i)?;
        Ok(Configuration {
            n,
            bits: mask_of(n) & !(1 << (i - 1)),
        })
    }

    /// Parses a 0/1 string, vertex 1 first.
    pub fn parse_bits(s: &str) -> Result<Self> {
        let n = s.len();
        if n == 0 {
            return Err(Error::parse(0, "empty configuration"));
        }
        if n > MAX_VERTICES {
            return Err(Error::capacity(format!("configuration length {n}")));
        }
        let mut bits = 0u64;
        for (k, ch) in s.bytes().enumerate() {
            match ch {
                b'1' => bits |= 1 << k,
                b'0' => {}
                _ => return Err(Error::parse(k, format!("expected 0 or 1, found {:?}", ch as char))),
            }
        }
        Ok(Configuration { n, bits })
    }

    /// Parses either a 0/1 string or one of `all-C`, `all-D`, `single-C@i`,
    /// `single-D@i` for a graph with `n` vertices.
    pub fn parse_named(s: &str, n: usize) -> Result<Self> {
        let lower = s.trim();
        let cfg = match lower {
            "all-C" | "all-c" => Configuration::all_cooperate(n),
            "all-D" | "all-d" => Configuration::all_defect(n),
            _ => {
                if let Some(rest) = lower
                    .strip_prefix("single-C@")
                    .or_else(|| lower.strip_prefix("single-c@"))
                {
                    Configuration::single_cooperator(n, parse_label(rest, 9)?)?
                } else if let Some(rest) = lower
                    .strip_prefix("single-D@")
                    .or_else(|| lower.strip_prefix("single-d@"))
                {
                    Configuration::single_defector(n, parse_label(rest, 9)?)?
                } else {
                    Configuration::parse_bits(lower)?
                }
            }
        };
        if cfg.n != n {
            return Err(Error::domain(format!(
                "configuration has length {}, graph has {n} vertices",
                cfg.n
            )));
        }
        Ok(cfg)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// State of vertex `i` (1-based).
    pub fn get(&self, i: usize) -> bool {
        assert!(i >= 1 && i <= self.n, "vertex {i} out of range");
        self.bits >> (i - 1) & 1 == 1
    }

    pub fn flipped(&self, i: usize) -> Self {
        assert!(i >= 1 && i <= self.n, "vertex {i} out of range");
        Configuration {
            n: self.n,
            bits: self.bits ^ 1 << (i - 1),
        }
    }

    pub fn cooperators(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_homogeneous(&self) -> bool {
        self.bits == 0 || self.bits == mask_of(self.n)
    }

    /// Hamming distance.
    pub fn distance(&self, other: &Configuration) -> usize {
        (self.bits ^ other.bits).count_ones() as usize
    }

    /// `(π·x)_{π(i)} = x_i` for the 1-based permutation `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut out = 0u64;
        for v in bits(self.bits) {
            out |= 1 << (perm[v] - 1);
        }
        Configuration {
            n: self.n,
            bits: out,
        }
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.n)
            .map(|k| if self.bits >> k & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn to_hex(&self) -> String {
        format!("{:#x}", self.bits)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration({})", self.to_bit_string())
    }
}

fn check_label(n: usize, i: usize) -> Result<()> {
    if i == 0 || i > n {
        Err(Error::InvalidVertex { vertex: i, n })
    } else {
        Ok(())
    }
}

fn parse_label(s: &str, offset: usize) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::parse(offset, format!("invalid vertex label {s:?}")))
}

/// Hamming distance from `x` to the nearest member of `set`; `None` for an
/// empty set.
pub fn distance_to_set<'a, I>(x: &Configuration, set: I) -> Option<usize>
where
    I: IntoIterator<Item = &'a Configuration>,
{
    set.into_iter().map(|y| x.distance(y)).min()
}
