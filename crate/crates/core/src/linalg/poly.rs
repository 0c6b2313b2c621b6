//! Univariate polynomials over the rationals, just enough to split a
//! linear map along coprime factors of its characteristic polynomial.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::matrix::Mat;
use super::rational::Rational;

/// Coefficients from the constant term upwards; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// `x - root`.
    pub fn linear(root: &Rational) -> Self {
        Self::new(vec![-root, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().recip().expect("nonzero leading coefficient");
        Poly(self.0.iter().map(|c| c * &inv).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let zero = Rational::zero();
        let out = (0..n)
            .map(|i| self.0.get(i).unwrap_or(&zero) - other.0.get(i).unwrap_or(&zero))
            .collect();
        Poly::new(out)
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let out = self
            .0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &Rational::from_int(i as i64))
            .collect();
        Poly::new(out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let mut rem = self.0.clone();
        let dd = divisor.degree();
        if self.is_zero() || self.degree() < dd {
            return (Poly(Vec::new()), self.clone());
        }
        let inv = divisor.leading().recip().unwrap();
        let mut quot = vec![Rational::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.0.iter().enumerate() {
                rem[k + j] -= &(&c * d);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_mat(&self, m: &Mat) -> Mat {
        let n = m.rows();
        let mut acc = Mat::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = acc.mul(m).add(&Mat::scalar(n, c));
        }
        acc
    }

    /// Yun's square-free decomposition: `(s_1, s_2, …)` pairwise coprime, monic,
    /// square-free, with `self = lc · Π s_i^i`.
    pub fn squarefree_decomposition(&self) -> Vec<Poly> {
        let f = self.monic();
        if f.degree() == 0 {
            return Vec::new();
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let c = df.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        while b.degree() > 0 {
            let a = b.gcd(&d);
            let nb = b.div_rem(&a).0;
            let nc = d.div_rem(&a).0;
            d = nc.sub(&nb.derivative());
            b = nb;
            out.push(a);
        }
        out
    }

    /// Rational roots found through the rational root theorem. Gives up
    /// (returns what it has) when the extreme coefficients are too large
    /// to enumerate divisors.
    pub fn rational_roots(&self) -> Vec<Rational> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let ints = self.primitive_integer_coeffs();
        let mut roots = Vec::new();
        let mut start = 0;
        while ints[start].is_zero() {
            start += 1;
        }
        if start > 0 {
            roots.push(Rational::zero());
        }
        let (Some(a0), Some(an)) = (small_abs(&ints[start]), small_abs(ints.last().unwrap())) else {
            return roots;
        };
        if start == ints.len() - 1 {
            return roots;
        }
        let mut cands = Vec::new();
        for p in divisors(a0) {
            for q in divisors(an) {
                let r = Rational::from_frac(p as i64, q as i64);
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        cands.dedup();
        for r in cands {
            if self.eval(&r).is_zero() {
                roots.push(r);
            }
        }
        roots
    }

    fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        let mut lcm = BigInt::from(1);
        for c in &self.0 {
            lcm = lcm.lcm(&c.denom());
        }
        let ints: Vec<BigInt> = self.0.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        let mut g = BigInt::zero();
        for x in &ints {
            g = g.gcd(x);
        }
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|x| x / &g).collect()
    }
}

const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

fn small_abs(x: &BigInt) -> Option<u64> {
    x.abs().to_u64().filter(|&v| v <= DIVISOR_LIMIT)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Characteristic polynomial `det(x I - A)` by the Faddeev–LeVerrier recursion.
pub fn charpoly(a: &Mat) -> Poly {
    assert!(a.is_square());
    let n = a.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = Mat::zeros(n, n);
    for k in 1..=n {
        m = a.mul(&m).add(&Mat::scalar(n, &coeffs[n + 1 - k]));
        let t = a.mul(&m).trace();
        coeffs[n - k] = -(&t / &Rational::from_int(k as i64));
    }
    Poly::new(coeffs)
}

/// Pairwise coprime factors whose product is the characteristic polynomial:
/// one `(x - λ)^m` per rational eigenvalue, and one `s^i` per square-free
/// part left over without rational roots.
pub fn coprime_factors(a: &Mat) -> Vec<Poly> {
    let chi = charpoly(a);
    let mut out = Vec::new();
    for (idx, s) in chi.squarefree_decomposition().into_iter().enumerate() {
        let mult = idx as u32 + 1;
        if s.degree() == 0 {
            continue;
        }
        let mut rest = s;
        for root in rest.rational_roots() {
            let lin = Poly::linear(&root);
            rest = rest.div_rem(&lin).0;
            out.push(lin.pow(mult));
        }
        if rest.degree() > 0 {
            out.push(rest.pow(mult));
        }
    }
    out
}

/// Generalized eigenspace decomposition along [`coprime_factors`]: the
/// returned column bases are `f`-invariant and their direct sum is the
/// whole space.
pub fn coprime_split(f: &Mat) -> Vec<Mat> {
    if f.rows() == 0 {
        return Vec::new();
    }
    coprime_factors(f).iter().map(|p| p.eval_mat(f).kernel()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn charpoly_small() {
        let a = Mat::from_i64(&[&[1, 2], &[3, 4]]);
        assert_eq!(charpoly(&a), p(&[-2, -5, 1]));
        assert_eq!(charpoly(&Mat::identity(3)), p(&[-1, 3, -3, 1]));
    }

    #[test]
    fn squarefree_and_roots() {
        // (x-1)^2 (x+2)^3 (x^2+1)
        let f = p(&[-1, 1]).pow(2).mul(&p(&[2, 1]).pow(3)).mul(&p(&[1, 0, 1]));
        let sf = f.squarefree_decomposition();
        assert_eq!(sf.len(), 3);
        assert_eq!(sf[0], p(&[1, 0, 1]));
        assert_eq!(sf[1], p(&[-1, 1]));
        assert_eq!(sf[2], p(&[2, 1]));
        let g = p(&[-3, 2]).mul(&p(&[0, 1])).mul(&p(&[1, 0, 1]));
        let mut roots = g.rational_roots();
        roots.sort();
        assert_eq!(roots, vec![q(0), Rational::from_frac(3, 2)]);
    }

    #[test]
    fn coprime_split_examples() {
        assert_eq!(coprime_split(&Mat::identity(2)).len(), 1);
        let blocks = coprime_split(&Mat::from_i64(&[&[1, 0], &[0, 2]]));
        assert_eq!(blocks.iter().map(Mat::cols).collect::<Vec<_>>(), vec![1, 1]);
        let nil = Mat::from_i64(&[&[0, 1], &[0, 0]]);
        let blocks = coprime_split(&nil);
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].cols(), 2);
    }

    #[test]
    fn irreducible_quadratic_stays_together() {
        // rotation block plus an eigenvalue 3
        let a = Mat::from_i64(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 3]]);
        let mut dims: Vec<usize> = coprime_split(&a).iter().map(Mat::cols).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 2]);
    }
}
