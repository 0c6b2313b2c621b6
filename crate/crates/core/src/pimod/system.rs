//! Linear systems whose unknowns are matrices, as in `L V R + ... = 0`.

use crate::linalg::{rank_in, FieldMode, Mat, Rational};

pub(crate) struct MatrixSystem {
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    nvars: usize,
    rows: Vec<Vec<(usize, Rational)>>,
}

/// One block equation of shape `p x q`, accumulated term by term.
pub(crate) struct BlockEq {
    p: usize,
    q: usize,
    entries: Vec<Vec<(usize, Rational)>>,
}

impl BlockEq {
    fn push(&mut self, a: usize, b: usize, var: usize, c: Rational) {
        if !c.is_zero() {
            self.entries[a * self.q + b].push((var, c));
        }
    }
}

impl MatrixSystem {
    /// One unknown matrix per shape.
    pub fn new(shapes: Vec<(usize, usize)>) -> Self {
        let mut offsets = Vec::with_capacity(shapes.len());
        let mut nvars = 0;
        for &(r, c) in &shapes {
            offsets.push(nvars);
            nvars += r * c;
        }
        MatrixSystem { shapes, offsets, nvars, rows: Vec::new() }
    }

    pub fn block(&self, p: usize, q: usize) -> BlockEq {
        BlockEq { p, q, entries: vec![Vec::new(); p * q] }
    }

    /// Add `coeff · L · V_var · R` to the block; `None` stands for the identity.
    pub fn add_term(&self, eq: &mut BlockEq, coeff: &Rational, l: Option<&Mat>, var: usize, r: Option<&Mat>) {
        let (vr, vc) = self.shapes[var];
        let off = self.offsets[var];
        if let Some(l) = l {
            debug_assert_eq!(l.shape(), (eq.p, vr));
        } else {
            debug_assert_eq!(eq.p, vr);
        }
        if let Some(r) = r {
            debug_assert_eq!(r.shape(), (vc, eq.q));
        } else {
            debug_assert_eq!(eq.q, vc);
        }
        // entry (a, b) picks up L[a,k] R[l,b] V[k,l]
        for a in 0..eq.p {
            for k in 0..vr {
                let lak = match l {
                    Some(l) => {
                        let x = &l[(a, k)];
                        if x.is_zero() {
                            continue;
                        }
                        coeff * x
                    }
                    None if a == k => coeff.clone(),
                    None => continue,
                };
                match r {
                    Some(r) => {
                        for li in 0..vc {
                            for b in 0..eq.q {
                                let y = &r[(li, b)];
                                if !y.is_zero() {
                                    eq.push(a, b, off + k * vc + li, &lak * y);
                                }
                            }
                        }
                    }
                    None => {
                        for b in 0..eq.q {
                            eq.push(a, b, off + k * vc + b, lak.clone());
                        }
                    }
                }
            }
        }
    }

    pub fn push(&mut self, eq: BlockEq) {
        for entry in eq.entries {
            let mut combined: Vec<(usize, Rational)> = Vec::with_capacity(entry.len());
            let mut sorted = entry;
            sorted.sort_by_key(|(v, _)| *v);
            for (v, c) in sorted {
                match combined.last_mut() {
                    Some((lv, lc)) if *lv == v => *lc += &c,
                    _ => combined.push((v, c)),
                }
            }
            combined.retain(|(_, c)| !c.is_zero());
            if !combined.is_empty() {
                self.rows.push(combined);
            }
        }
    }

    fn matrix(&self) -> Mat {
        let mut m = Mat::zeros(self.rows.len(), self.nvars);
        for (i, row) in self.rows.iter().enumerate() {
            for (v, c) in row {
                m[(i, *v)] = c.clone();
            }
        }
        m
    }

    /// Solution space basis, each solution unpacked into its unknown matrices.
    pub fn solve(&self) -> Vec<Vec<Mat>> {
        let basis = if self.rows.is_empty() {
            (0..self.nvars)
                .map(|j| {
                    let mut v = vec![Rational::zero(); self.nvars];
                    v[j] = Rational::one();
                    v
                })
                .collect()
        } else {
            self.matrix().nullspace()
        };
        basis.iter().map(|v| self.unpack(v)).collect()
    }

    /// Dimension of the solution space.
    pub fn nullity(&self) -> usize {
        if self.rows.is_empty() {
            self.nvars
        } else {
            self.nvars - self.matrix().rank()
        }
    }

    /// Dimension of the solution space over the given field; `None` when a
    /// coefficient's denominator vanishes modulo `p`.
    pub fn nullity_in(&self, mode: FieldMode) -> Option<usize> {
        if self.rows.is_empty() {
            Some(self.nvars)
        } else {
            Some(self.nvars - rank_in(&self.matrix(), mode)?)
        }
    }

    fn unpack(&self, v: &[Rational]) -> Vec<Mat> {
        self.shapes
            .iter()
            .zip(&self.offsets)
            .map(|(&(r, c), &off)| Mat::from_vec(r, c, v[off..off + r * c].to_vec()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutant_of_jordan_block() {
        // X J = J X for a 3x3 nilpotent Jordan block: polynomials in J
        let j = Mat::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        let mut sys = MatrixSystem::new(vec![(3, 3)]);
        let mut eq = sys.block(3, 3);
        let one = Rational::one();
        sys.add_term(&mut eq, &one, None, 0, Some(&j));
        sys.add_term(&mut eq, &-one, Some(&j), 0, None);
        sys.push(eq);
        let sols = sys.solve();
        assert_eq!(sols.len(), 3);
        for s in sols {
            assert_eq!(s[0].mul(&j), j.mul(&s[0]));
        }
    }

    #[test]
    fn two_sided_term_matches_product() {
        let l = Mat::from_i64(&[&[1, 2], &[0, 1], &[3, 0]]);
        let r = Mat::from_i64(&[&[1, 0, 2, 0], &[0, 1, 1, 1]]);
        // L V R = B has a unique solution when L is injective and R surjective
        let v = Mat::from_i64(&[&[2, -1], &[5, 3]]);
        let b = l.mul(&v).mul(&r);
        let mut sys = MatrixSystem::new(vec![(2, 2), (3, 4)]);
        let mut eq = sys.block(3, 4);
        let one = Rational::one();
        sys.add_term(&mut eq, &one, Some(&l), 0, Some(&r));
        sys.add_term(&mut eq, &-one.clone(), None, 1, None);
        sys.push(eq);
        let sols = sys.solve();
        assert_eq!(sols.len(), 4);
        // fix V by reading off the solution whose second unknown is b
        let m = sys.matrix();
        let mut x = vec![Rational::zero(); 16];
        for i in 0..2 {
            for j in 0..2 {
                x[i * 2 + j] = v[(i, j)].clone();
            }
        }
        for i in 0..3 {
            for j in 0..4 {
                x[4 + i * 4 + j] = b[(i, j)].clone();
            }
        }
        assert!(m.mul_vec(&x).iter().all(Rational::is_zero));
    }
}
