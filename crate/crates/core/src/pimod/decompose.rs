//! Rigidity, isomorphism testing and Krull-Schmidt decomposition.

use serde::Serialize;

use super::hom::{ext1_dim, hom_basis, hom_dim};
use super::{random_combination, rng, ModuleRep, Morphism};
use crate::linalg::{coprime_factors, Mat};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Rigidity {
    pub rigid: bool,
    pub ext1: usize,
    pub orbit_codim: usize,
}

/// `M` is rigid iff `Ext¹(M, M) = 0`; the orbit codimension is half of `ext¹(M, M)`.
pub fn is_rigid(m: &ModuleRep) -> Result<Rigidity> {
    let ext = ext1_dim(m, m)?;
    if ext % 2 != 0 {
        return Err(Error::OddSelfExtension(ext));
    }
    Ok(Rigidity { rigid: ext == 0, ext1: ext, orbit_codim: ext / 2 })
}

fn trace_gram(basis: &[Morphism]) -> Mat {
    let k = basis.len();
    let mut g = Mat::zeros(k, k);
    for a in 0..k {
        for b in a..k {
            let t = basis[a].compose(&basis[b]).trace();
            g[(b, a)] = t.clone();
            g[(a, b)] = t;
        }
    }
    g
}

/// Dimension of the Jacobson radical of the span of `basis` (a matrix algebra
/// in characteristic zero): the kernel of the trace form `(x, y) ↦ tr(xy)`.
pub fn radical_dim(basis: &[Morphism]) -> usize {
    if basis.is_empty() {
        return 0;
    }
    basis.len() - trace_gram(basis).rank()
}

fn is_local(end: &[Morphism]) -> bool {
    end.len() - radical_dim(end) == 1
}

/// Decide `M ≅ N`. Unequal Hom/End dimensions refute; a sampled invertible
/// intertwiner confirms. When sampling finds nothing and `End(M)` is local,
/// `M ≅ N` iff some `ψ ∘ φ` with `φ: M → N`, `ψ: N → M` lies outside the radical.
/// Otherwise both sides are decomposed and their summands matched.
pub fn iso_test(m: &ModuleRep, n: &ModuleRep, trials: usize, seed: u64) -> Result<bool> {
    m.same_algebra(n)?;
    if m.dims() != n.dims() {
        return Ok(false);
    }
    if m.is_zero() {
        return Ok(true);
    }
    let mn = hom_basis(m, n)?;
    let nm_dim = hom_dim(n, m)?;
    let end_m = hom_basis(m, m)?;
    let end_n = hom_dim(n, n)?;
    if !(mn.len() == nm_dim && nm_dim == end_m.len() && end_m.len() == end_n) {
        return Ok(false);
    }
    if mn.iter().any(Morphism::is_iso) {
        return Ok(true);
    }
    let zero = Morphism::zero(m, n);
    let mut r = rng(seed);
    for _ in 0..trials {
        if random_combination(&mn, &zero, &mut r).is_iso() {
            return Ok(true);
        }
    }
    if trace_gram(&end_m).rank() == 1 {
        let nm = hom_basis(n, m)?;
        for phi in &mn {
            for psi in &nm {
                let x = psi.compose(phi);
                if end_m.iter().any(|e| !x.compose(e).trace().is_zero()) {
                    return Ok(true);
                }
            }
        }
        return Ok(false);
    }
    let pm = decompose(m, seed)?;
    let mut pn = decompose(n, seed)?;
    if pm.len() != pn.len() {
        return Ok(false);
    }
    if pm.len() == 1 {
        return Err(Error::Inconclusive(trials));
    }
    for a in &pm {
        let mut hit = None;
        for (k, b) in pn.iter().enumerate() {
            if iso_test(a, b, trials, seed)? {
                hit = Some(k);
                break;
            }
        }
        match hit {
            Some(k) => {
                pn.swap_remove(k);
            }
            None => return Ok(false),
        }
    }
    Ok(true)
}

const DECOMPOSE_BUDGET: usize = 200;

/// Split `M` into indecomposable summands. Each returned summand has local
/// endomorphism ring; splitting uses generalized eigenspaces of sampled
/// endomorphisms along pairwise coprime factors of their characteristic polynomial.
pub fn decompose(m: &ModuleRep, seed: u64) -> Result<Vec<ModuleRep>> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    split(m, &mut r, &mut out)?;
    Ok(out)
}

fn split(m: &ModuleRep, r: &mut rand_chacha::ChaCha8Rng, out: &mut Vec<ModuleRep>) -> Result<()> {
    if m.is_zero() {
        return Ok(());
    }
    let end = hom_basis(m, m)?;
    if is_local(&end) {
        out.push(m.clone());
        return Ok(());
    }
    let zero = Morphism::zero(m, m);
    for attempt in 0..end.len() + DECOMPOSE_BUDGET {
        let f = if attempt < end.len() { end[attempt].clone() } else { random_combination(&end, &zero, r) };
        let factors = coprime_factors(&f.total());
        if factors.len() < 2 {
            continue;
        }
        for p in &factors {
            let family: Vec<Mat> = f.blocks.iter().map(|b| p.eval_mat(b).kernel()).collect();
            let sub = m.submodule(&family)?;
            split(&sub.module, r, out)?;
        }
        return Ok(());
    }
    Err(Error::Undecided(end.len() + DECOMPOSE_BUDGET))
}
