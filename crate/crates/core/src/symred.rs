//! Change of symmetrizer for symmetric `C`: reduction `M ↦ M / εM` from
//! `Π(C, nD, Ω)` to `Π(C, D, Ω)` and the shift lift in the other direction.

use std::sync::Arc;

use serde::Serialize;

use crate::cartan::Algebra;
use crate::linalg::Mat;
use crate::pimod::{iso_test, ModuleRep, Morphism};
use crate::starop::generic_extension;
use crate::{Error, Result};

/// `Π(1) = Π(C, D, Ω)` with minimal `D` together with `Π(n) = Π(C, nD, Ω)`.
#[derive(Clone, Debug)]
pub struct SymPair {
    pub base: Arc<Algebra>,
    pub lifted: Arc<Algebra>,
    pub n: usize,
}

impl SymPair {
    pub fn new(base: &Arc<Algebra>, n: usize) -> Result<SymPair> {
        let datum = base.datum();
        if !datum.is_symmetric() {
            return Err(Error::Unsupported("change of symmetrizer needs a symmetric Cartan matrix".into()));
        }
        if !datum.is_connected() {
            return Err(Error::Unsupported("change of symmetrizer needs a connected Cartan matrix".into()));
        }
        if datum.symmetrizer().iter().any(|&c| c != 1) {
            return Err(Error::Unsupported("base algebra must carry the minimal symmetrizer".into()));
        }
        if n == 0 {
            return Err(Error::Shape("n must be at least 1".into()));
        }
        let lifted = Algebra::new(datum.scaled(n as i64)?);
        Ok(SymPair { base: base.clone(), lifted, n })
    }

    fn check_side(&self, m: &ModuleRep, alg: &Arc<Algebra>) -> Result<()> {
        if **m.algebra() == **alg {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// Quotient of every `M_i` by `im ε_i`, read as a `Π(1)`-module.
    pub fn reduce(&self, m: &ModuleRep) -> Result<ModuleRep> {
        self.check_side(m, &self.lifted)?;
        m.require_rank()?;
        let family: Vec<Mat> = m.loops().iter().map(Mat::image).collect();
        m.quotient(&family)?.module.reinterpret(&self.base)
    }

    /// The map induced on reductions by an intertwiner `f: M → N`.
    pub fn reduce_morphism(&self, m: &ModuleRep, n: &ModuleRep, f: &Morphism) -> Result<Morphism> {
        let fam = |x: &ModuleRep| x.loops().iter().map(Mat::image).collect::<Vec<_>>();
        let qm = m.quotient(&fam(m))?;
        let qn = n.quotient(&fam(n))?;
        let blocks = (0..m.dims().len()).map(|i| qn.proj[i].mul(&f.blocks[i]).mul(&qm.section[i])).collect();
        Ok(Morphism { blocks })
    }

    /// `M^{⊕n}` with `ε` shifting copy `k` to copy `k+1` and arrows acting on each copy.
    pub fn lift(&self, m: &ModuleRep) -> Result<ModuleRep> {
        self.check_side(m, &self.base)?;
        let n = self.n;
        let dims: Vec<usize> = m.dims().iter().map(|d| d * n).collect();
        let eps = m
            .dims()
            .iter()
            .map(|&d| {
                let mut e = Mat::zeros(d * n, d * n);
                for k in 0..n.saturating_sub(1) {
                    for x in 0..d {
                        e[((k + 1) * d + x, k * d + x)] = crate::linalg::Rational::one();
                    }
                }
                e
            })
            .collect();
        let arrows = m
            .arrow_mats()
            .iter()
            .map(|a| (0..n).fold(Mat::zeros(0, 0), |acc, _| Mat::block_diag(&acc, a)))
            .collect();
        ModuleRep::checked(self.lifted.clone(), dims, eps, arrows)
    }
}

/// Lift a `Π(1)`-module to `Π(n)`; refuses non-symmetric data.
pub fn tilde_lift(m: &ModuleRep, n: usize) -> Result<ModuleRep> {
    SymPair::new(m.algebra(), n)?.lift(m)
}

#[derive(Clone, Debug, Serialize)]
pub struct CompatReport {
    pub n: usize,
    pub lifted_rank: Vec<i64>,
    pub reduced_rank: Vec<i64>,
    pub direct_rank: Vec<i64>,
    pub isomorphic: bool,
}

/// Compare `reduce(lift(M₁) * lift(M₂))` over `Π(n)` with `M₁ * M₂` over `Π(1)`.
pub fn verify_symmetrizer_compat(
    pair: &SymPair,
    m1: &ModuleRep,
    m2: &ModuleRep,
    trials: usize,
    seed: u64,
) -> Result<CompatReport> {
    let lifted = generic_extension(&pair.lift(m1)?, &pair.lift(m2)?, trials, seed)?;
    if !lifted.certified {
        return Err(Error::NotCertified(format!("product over Π({}): {}", pair.n, lifted.flags.join("; "))));
    }
    let direct = generic_extension(m1, m2, trials, seed)?;
    if !direct.certified {
        return Err(Error::NotCertified(format!("product over Π(1): {}", direct.flags.join("; "))));
    }
    let reduced = pair.reduce(lifted.module())?;
    let isomorphic = iso_test(&reduced, direct.module(), trials, seed)?;
    Ok(CompatReport {
        n: pair.n,
        lifted_rank: lifted.module().require_rank()?,
        reduced_rank: reduced.require_rank()?,
        direct_rank: direct.module().require_rank()?,
        isomorphic,
    })
}
