//! The canonical pieces `sub_i`, `fac_i`, `K_i`, `Q_i`, filtrations by
//! generalized simples, and the recursive crystal test.

use std::collections::{HashMap, HashSet};

use super::{canonical_basis, free_rank, ModuleRep, Quot, Sub};
use crate::linalg::{preimage, span_intersection, span_sum, Mat, Rational};
use crate::Result;

/// The two canonical short exact sequences at a vertex:
/// `0 → sub_i → M → Q_i → 0` and `0 → K_i → M → fac_i → 0`.
#[derive(Clone, Debug)]
pub struct CanonicalPieces {
    pub vertex: usize,
    pub sub: Sub,
    pub q: Quot,
    pub k: Sub,
    pub fac: Quot,
}

/// Largest loop-invariant subspace of `M_i` killed by every arrow leaving `i`.
pub(crate) fn sub_space(m: &ModuleRep, i: usize) -> Mat {
    let alg = m.algebra();
    let mut w = Mat::identity(m.dims[i]);
    for (k, a) in alg.arrows().iter().enumerate() {
        if a.source == i {
            w = span_intersection(&w, &m.arrows[k].kernel());
        }
    }
    loop {
        let next = span_intersection(&w, &preimage(&m.eps[i], &w));
        if next.cols() == w.cols() {
            return w;
        }
        w = next;
    }
}

/// Loop closure at `i` of the images of all arrows ending at `i`.
pub(crate) fn k_space(m: &ModuleRep, i: usize) -> Mat {
    let alg = m.algebra();
    let mut s = Mat::zeros(m.dims[i], 0);
    for (k, a) in alg.arrows().iter().enumerate() {
        if a.target == i {
            s = span_sum(&s, &m.arrows[k]);
        }
    }
    loop {
        let next = span_sum(&s, &m.eps[i].mul(&s));
        if next.cols() == s.cols() {
            return s;
        }
        s = next;
    }
}

fn concentrated(m: &ModuleRep, i: usize, at_i: Mat) -> Vec<Mat> {
    (0..m.dims.len()).map(|j| if j == i { at_i.clone() } else { Mat::zeros(m.dims[j], 0) }).collect()
}

fn full_except(m: &ModuleRep, i: usize, at_i: Mat) -> Vec<Mat> {
    (0..m.dims.len()).map(|j| if j == i { at_i.clone() } else { Mat::identity(m.dims[j]) }).collect()
}

pub fn canonical_pieces(m: &ModuleRep, i: usize) -> Result<CanonicalPieces> {
    let sub_family = concentrated(m, i, sub_space(m, i));
    let k_family = full_except(m, i, k_space(m, i));
    Ok(CanonicalPieces {
        vertex: i,
        sub: m.submodule(&sub_family)?,
        q: m.quotient(&sub_family)?,
        k: m.submodule(&k_family)?,
        fac: m.quotient(&k_family)?,
    })
}

/// A chain `0 = M_0 ⊂ M_1 ⊂ ... ⊂ M_n = M` with `M_k / M_{k-1} ≅ E_{vertices[k-1]}`;
/// `chain[k]` holds column bases of `M_{k+1}` in the coordinates of `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    pub vertices: Vec<usize>,
    pub chain: Vec<Vec<Mat>>,
}

struct FilterSearch<'a> {
    root: &'a ModuleRep,
    failed: HashSet<Vec<Mat>>,
}

impl FilterSearch<'_> {
    /// Candidate generators `v ∈ sub_i` with `ε_i^{c_i-1} v ≠ 0`: a generic
    /// combination first, then the basis vectors.
    fn generators(q: &ModuleRep, i: usize, c: usize) -> Vec<Vec<Rational>> {
        let s = sub_space(q, i);
        if s.cols() == 0 {
            return Vec::new();
        }
        let top = q.eps[i].pow(c as u32 - 1);
        let weights: Vec<Rational> = (1..=s.cols() as i64).map(Rational::from_int).collect();
        let mut cands = vec![s.mul_vec(&weights)];
        cands.extend(s.columns());
        cands.into_iter().filter(|v| top.mul_vec(v).iter().any(|x| !x.is_zero())).collect()
    }

    fn run(&mut self, u: Vec<Mat>, path: &mut Vec<(usize, Vec<Mat>)>) -> Result<bool> {
        if self.failed.contains(&u) {
            return Ok(false);
        }
        let quot = self.root.quotient(&u)?;
        let q = &quot.module;
        if q.is_zero() {
            return Ok(true);
        }
        if q.rank_vector().is_none() {
            return Ok(false);
        }
        let datum = q.algebra().datum();
        for i in 0..q.dims.len() {
            let c = datum.ci(i);
            let mut tried = HashSet::new();
            for v in Self::generators(q, i, c) {
                let mut cols = Vec::with_capacity(c);
                let mut x = v;
                for _ in 0..c {
                    let next = q.eps[i].mul_vec(&x);
                    cols.push(x);
                    x = next;
                }
                let lifted = quot.section[i].mul(&Mat::from_columns(&cols, q.dims[i]));
                let mut next = u.clone();
                next[i] = canonical_basis(&span_sum(&u[i], &lifted));
                if !tried.insert(next.clone()) {
                    continue;
                }
                path.push((i, next.clone()));
                if self.run(next, path)? {
                    return Ok(true);
                }
                path.pop();
            }
        }
        self.failed.insert(u);
        Ok(false)
    }
}

/// Search for a filtration with generalized simple subquotients.
pub fn is_e_filtered(m: &ModuleRep) -> Result<(bool, Option<Filtration>)> {
    let mut search = FilterSearch { root: m, failed: HashSet::new() };
    let zero: Vec<Mat> = m.dims.iter().map(|&d| Mat::zeros(d, 0)).collect();
    let mut path = Vec::new();
    if search.run(zero, &mut path)? {
        let (vertices, chain) = path.into_iter().unzip();
        Ok((true, Some(Filtration { vertices, chain })))
    } else {
        Ok((false, None))
    }
}

/// A subquotient `W / U` of the root module, both in root coordinates.
type Key = (Vec<Mat>, Vec<Mat>);

struct CrystalSearch<'a> {
    root: &'a ModuleRep,
    memo: HashMap<Key, bool>,
}

impl CrystalSearch<'_> {
    /// The module `W / U` and, per vertex, the map from its coordinates to root coordinates.
    fn realize(&self, u: &[Mat], w: &[Mat]) -> Result<(ModuleRep, Vec<Mat>)> {
        let sub = self.root.submodule(w)?;
        let inner: Vec<Mat> = u
            .iter()
            .zip(w)
            .map(|(u, w)| w.solve_matrix(u).expect("U lies inside W"))
            .collect();
        let quot = sub.module.quotient(&inner)?;
        let lift = w.iter().zip(&quot.section).map(|(w, s)| w.mul(s)).collect();
        Ok((quot.module, lift))
    }

    fn run(&mut self, u: Vec<Mat>, w: Vec<Mat>) -> Result<bool> {
        let key = (u, w);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let verdict = self.evaluate(&key.0, &key.1)?;
        self.memo.insert(key, verdict);
        Ok(verdict)
    }

    fn evaluate(&mut self, u: &[Mat], w: &[Mat]) -> Result<bool> {
        let (r, lift) = self.realize(u, w)?;
        if r.is_zero() {
            return Ok(true);
        }
        if !is_e_filtered(&r)?.0 {
            return Ok(false);
        }
        let datum = r.algebra().datum();
        let n = r.dims.len();
        let mut children = Vec::new();
        for i in 0..n {
            let c = datum.ci(i);
            let s = sub_space(&r, i);
            let k = k_space(&r, i);
            let s_eps = s.solve_matrix(&r.eps[i].mul(&s)).expect("sub_i is loop invariant");
            if free_rank(&s_eps, c).is_none() {
                return Ok(false);
            }
            let fac = r.quotient(&full_except(&r, i, k.clone()))?;
            if free_rank(&fac.module.eps[i], c).is_none() {
                return Ok(false);
            }
            if s.cols() > 0 {
                let mut nu = u.to_vec();
                nu[i] = canonical_basis(&span_sum(&u[i], &lift[i].mul(&s)));
                children.push((nu, w.to_vec()));
            }
            if k.cols() < r.dims[i] {
                let mut nw = w.to_vec();
                nw[i] = canonical_basis(&span_sum(&u[i], &lift[i].mul(&k)));
                children.push((u.to_vec(), nw));
            }
        }
        for (cu, cw) in children {
            if !self.run(cu, cw)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Recursive crystal test: `M` is E-filtered, every `sub_i` and `fac_i` is
/// free over `H_i`, and every proper `Q_i` and `K_i` is again crystal.
pub fn is_crystal(m: &ModuleRep) -> Result<bool> {
    let mut search = CrystalSearch { root: m, memo: HashMap::new() };
    let u: Vec<Mat> = m.dims.iter().map(|&d| Mat::zeros(d, 0)).collect();
    let w: Vec<Mat> = m.dims.iter().map(|&d| canonical_basis(&Mat::identity(d))).collect();
    search.run(u, w)
}
