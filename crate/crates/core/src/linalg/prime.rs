//! Prime-field ranks for quick cross-checks of rational computations.

use std::fmt;
use std::str::FromStr;

use super::matrix::Mat;
use super::rational::{mulmod, powmod};

pub const DEFAULT_PRIME: u64 = 32003;

/// Which field dimension computations run over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FieldMode {
    #[default]
    Rational,
    Prime(u64),
}

impl fmt::Display for FieldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldMode::Rational => write!(f, "q"),
            FieldMode::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for FieldMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "q" | "Q" => Ok(FieldMode::Rational),
            "fp" => Ok(FieldMode::Prime(DEFAULT_PRIME)),
            _ => {
                let p = s
                    .strip_prefix("fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| format!("unknown field {s:?}; expected q or fp:<p>"))?;
                if !is_prime(p) || p > u32::MAX as u64 {
                    return Err(format!("{p} is not a prime below 2^32"));
                }
                Ok(FieldMode::Prime(p))
            }
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Rank of the reduction of `a` modulo `p`; `None` if some denominator vanishes mod `p`.
pub fn rank_mod_p(a: &Mat, p: u64) -> Option<usize> {
    let (rows, cols) = a.shape();
    let mut m: Vec<u64> = Vec::with_capacity(rows * cols);
    for x in a.entries() {
        m.push(x.mod_prime(p)?);
    }
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        for j in 0..cols {
            m.swap(piv * cols + j, rank * cols + j);
        }
        let inv = powmod(m[rank * cols + c], p - 2, p);
        for j in c..cols {
            m[rank * cols + j] = mulmod(m[rank * cols + j], inv, p);
        }
        for i in 0..rows {
            if i == rank {
                continue;
            }
            let f = m[i * cols + c];
            if f == 0 {
                continue;
            }
            for j in c..cols {
                let t = mulmod(f, m[rank * cols + j], p);
                m[i * cols + j] = (m[i * cols + j] + p - t) % p;
            }
        }
        rank += 1;
    }
    Some(rank)
}

/// Rank over the chosen field.
pub fn rank_in(a: &Mat, mode: FieldMode) -> Option<usize> {
    match mode {
        FieldMode::Rational => Some(a.rank()),
        FieldMode::Prime(p) => rank_mod_p(a, p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rational;

    #[test]
    fn parses_modes() {
        assert_eq!("q".parse::<FieldMode>(), Ok(FieldMode::Rational));
        assert_eq!("fp:7".parse::<FieldMode>(), Ok(FieldMode::Prime(7)));
        assert_eq!("fp".parse::<FieldMode>(), Ok(FieldMode::Prime(32003)));
        assert!("fp:8".parse::<FieldMode>().is_err());
    }

    #[test]
    fn rank_drops_mod_small_prime() {
        let a = Mat::from_i64(&[&[1, 1], &[1, 3]]);
        assert_eq!(rank_mod_p(&a, 32003), Some(2));
        assert_eq!(rank_mod_p(&a, 2), Some(1));
        let half = Mat::from_vec(1, 1, vec![Rational::from_frac(1, 2)]);
        assert_eq!(rank_mod_p(&half, 2), None);
    }
}
