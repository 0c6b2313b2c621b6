//! Hom spaces, derivations and `Ext¹` via the four-term sequence
//! `0 → Hom_Π(M,N) → Hom_T(M,N) → Der_Π(M,N) → Ext¹_Π(M,N) → 0`.

use serde::Serialize;

use super::system::MatrixSystem;
use super::{ModuleRep, Morphism};
use crate::cartan::Letter;
use crate::linalg::{FieldMode, Mat, Rational};
use crate::{Error, Result};

/// Arrow components `δ_a : M_{s(a)} → N_{t(a)}` of a derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub blocks: Vec<Mat>,
}

impl Derivation {
    pub fn add_scaled(&mut self, other: &Derivation, s: &Rational) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            a.add_scaled(b, s);
        }
    }
}

fn hom_system(m: &ModuleRep, n: &ModuleRep, with_arrows: bool) -> MatrixSystem {
    let alg = m.algebra();
    let shapes = (0..alg.n()).map(|i| (n.dims[i], m.dims[i])).collect();
    let mut sys = MatrixSystem::new(shapes);
    let one = Rational::one();
    let minus = -Rational::one();
    for i in 0..alg.n() {
        let mut eq = sys.block(n.dims[i], m.dims[i]);
        sys.add_term(&mut eq, &one, None, i, Some(&m.eps[i]));
        sys.add_term(&mut eq, &minus, Some(&n.eps[i]), i, None);
        sys.push(eq);
    }
    if with_arrows {
        for (k, a) in alg.arrows().iter().enumerate() {
            let mut eq = sys.block(n.dims[a.target], m.dims[a.source]);
            sys.add_term(&mut eq, &one, None, a.target, Some(&m.arrows[k]));
            sys.add_term(&mut eq, &minus, Some(&n.arrows[k]), a.source, None);
            sys.push(eq);
        }
    }
    sys
}

/// Basis of `Hom_Π(M, N)`.
pub fn hom_basis(m: &ModuleRep, n: &ModuleRep) -> Result<Vec<Morphism>> {
    m.same_algebra(n)?;
    Ok(hom_system(m, n, true).solve().into_iter().map(|blocks| Morphism { blocks }).collect())
}

pub fn hom_dim(m: &ModuleRep, n: &ModuleRep) -> Result<usize> {
    m.same_algebra(n)?;
    Ok(hom_system(m, n, true).nullity())
}

/// Basis of `Hom_T(M, N)`: vertex maps commuting with the loops only.
pub fn hom_t_basis(m: &ModuleRep, n: &ModuleRep) -> Result<Vec<Morphism>> {
    m.same_algebra(n)?;
    Ok(hom_system(m, n, false).solve().into_iter().map(|blocks| Morphism { blocks }).collect())
}

pub fn hom_t_dim(m: &ModuleRep, n: &ModuleRep) -> Result<usize> {
    m.same_algebra(n)?;
    Ok(hom_system(m, n, false).nullity())
}

fn der_system(m: &ModuleRep, n: &ModuleRep) -> MatrixSystem {
    let alg = m.algebra();
    let shapes = alg.arrows().iter().map(|a| (n.dims[a.target], m.dims[a.source])).collect();
    let mut sys = MatrixSystem::new(shapes);
    for rel in alg.relations() {
        let mut eq = sys.block(n.dims[rel.target], m.dims[rel.source]);
        let mut any = false;
        for (c, w) in &rel.terms {
            let c = Rational::from_int(*c);
            for (p, letter) in w.iter().enumerate() {
                let Letter::Arrow(k) = *letter else { continue };
                let left = n.eval_word(&w[..p]);
                let right = m.eval_word(&w[p + 1..]);
                sys.add_term(&mut eq, &c, left.as_ref(), k, right.as_ref());
                any = true;
            }
        }
        if any {
            sys.push(eq);
        }
    }
    sys
}

/// Basis of `Der_Π(M, N)`: arrow tuples making the block upper triangular
/// representation on `N ⊕ M` satisfy every relation.
pub fn derivation_basis(m: &ModuleRep, n: &ModuleRep) -> Result<Vec<Derivation>> {
    m.same_algebra(n)?;
    Ok(der_system(m, n).solve().into_iter().map(|blocks| Derivation { blocks }).collect())
}

pub fn derivation_dim(m: &ModuleRep, n: &ModuleRep) -> Result<usize> {
    m.same_algebra(n)?;
    Ok(der_system(m, n).nullity())
}

/// The module on `N ⊕ M` with arrows `[[N_a, δ_a], [0, M_a]]` and diagonal
/// loops; `N` is a submodule with quotient `M`.
pub fn extension_module(m: &ModuleRep, n: &ModuleRep, delta: &Derivation) -> Result<ModuleRep> {
    m.same_algebra(n)?;
    let alg = m.algebra();
    if delta.blocks.len() != alg.arrows().len() {
        return Err(Error::Shape("derivation needs one block per arrow".into()));
    }
    let dims: Vec<usize> = n.dims.iter().zip(&m.dims).map(|(a, b)| a + b).collect();
    let eps = (0..alg.n()).map(|i| Mat::block_diag(&n.eps[i], &m.eps[i])).collect();
    let mut arrows = Vec::with_capacity(alg.arrows().len());
    for (k, a) in alg.arrows().iter().enumerate() {
        let d = &delta.blocks[k];
        if d.shape() != (n.dims[a.target], m.dims[a.source]) {
            return Err(Error::Shape(format!("derivation block {} has the wrong shape", alg.arrow_key(k))));
        }
        let lower = Mat::zeros(m.dims[a.target], n.dims[a.source]);
        arrows.push(Mat::block2(&n.arrows[k], d, &lower, &m.arrows[k]));
    }
    let x = ModuleRep::new(alg.clone(), dims, eps, arrows)?;
    match x.check_relations() {
        Ok(()) => Ok(x),
        Err(Error::Relations(v)) => Err(Error::NotADerivation(v.join("; "))),
        Err(e) => Err(e),
    }
}

/// `dim Ext¹_Π(M, N) = dim Der − α(rk M, rk N) + dim Hom_Π(M, N)` for locally free `M, N`.
pub fn ext1_dim(m: &ModuleRep, n: &ModuleRep) -> Result<usize> {
    m.same_algebra(n)?;
    let rm = m.require_rank()?;
    let rn = n.require_rank()?;
    let alpha = m.algebra().datum().alpha(&rm, &rn)?;
    let der = derivation_dim(m, n)? as i64;
    let hom = hom_dim(m, n)? as i64;
    let ext = der - alpha + hom;
    if ext < 0 {
        return Err(Error::Invariant(format!("negative Ext¹ dimension: der={der} alpha={alpha} hom={hom}")));
    }
    Ok(ext as usize)
}

fn field_err(mode: FieldMode) -> Error {
    Error::Field(mode.to_string())
}

/// `dim Hom_Π(M, N)` over the given field.
pub fn hom_dim_in(m: &ModuleRep, n: &ModuleRep, mode: FieldMode) -> Result<usize> {
    m.same_algebra(n)?;
    hom_system(m, n, true).nullity_in(mode).ok_or_else(|| field_err(mode))
}

/// `dim Ext¹_Π(M, N)` over the given field, by the same formula as [`ext1_dim`].
pub fn ext1_dim_in(m: &ModuleRep, n: &ModuleRep, mode: FieldMode) -> Result<usize> {
    m.same_algebra(n)?;
    let alpha = m.algebra().datum().alpha(&m.require_rank()?, &n.require_rank()?)?;
    let der = der_system(m, n).nullity_in(mode).ok_or_else(|| field_err(mode))? as i64;
    let ext = der - alpha + hom_dim_in(m, n, mode)? as i64;
    usize::try_from(ext).map_err(|_| Error::Invariant(format!("negative Ext¹ dimension over {mode}")))
}

/// Dimensions checked against the Ext-formula and Ext-duality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExtReport {
    pub hom_mn: usize,
    pub ext_mn: usize,
    pub hom_nm: usize,
    pub ext_nm: usize,
    pub form: i64,
}

impl ExtReport {
    pub fn holds(&self) -> bool {
        self.hom_mn as i64 - self.ext_mn as i64 + self.hom_nm as i64 == self.form && self.ext_mn == self.ext_nm
    }
}

/// Compute `hom(M,N)`, `ext¹(M,N)`, `hom(N,M)`, `ext¹(N,M)` and `(rk M, rk N)`
/// and require `hom − ext + hom = (rk M, rk N)` and `ext(M,N) = ext(N,M)`.
pub fn verify_ext_theorems(m: &ModuleRep, n: &ModuleRep) -> Result<ExtReport> {
    let rm = m.require_rank()?;
    let rn = n.require_rank()?;
    let report = ExtReport {
        hom_mn: hom_dim(m, n)?,
        ext_mn: ext1_dim(m, n)?,
        hom_nm: hom_dim(n, m)?,
        ext_nm: ext1_dim(n, m)?,
        form: m.algebra().datum().symmetric_form(&rm, &rn)?,
    };
    if report.holds() {
        Ok(report)
    } else {
        Err(Error::ExtIdentity {
            hom_mn: report.hom_mn,
            ext_mn: report.ext_mn,
            hom_nm: report.hom_nm,
            ext_nm: report.ext_nm,
            form: report.form,
        })
    }
}
