//! Finite-dimensional modules over `Π(C, D, Ω)`, given as representations
//! of the double quiver satisfying the defining relations.

mod decompose;
mod filtration;
mod hom;
mod io;
mod system;

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cartan::{Algebra, Letter, Relation, RelationKind};
use crate::linalg::{span_sum, Mat, Rational};
use crate::{Error, Result};

pub use decompose::{decompose, iso_test, is_rigid, radical_dim, Rigidity};
pub use filtration::{canonical_pieces, is_crystal, is_e_filtered, CanonicalPieces, Filtration};
pub use hom::{
    derivation_basis, derivation_dim, ext1_dim, ext1_dim_in, extension_module, hom_basis, hom_dim, hom_dim_in,
    hom_t_basis, hom_t_dim,
    verify_ext_theorems, Derivation, ExtReport,
};
pub use io::{algebra_from_json, module_from_json, module_over, module_to_json};

/// Rank vector of a locally free module: `rank_i = d_i / c_i`.
pub type RankVector = Vec<i64>;

/// A representation of the double quiver with loops: one space per vertex,
/// one nilpotent loop matrix per vertex, one matrix per arrow.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleRep {
    alg: Arc<Algebra>,
    dims: Vec<usize>,
    eps: Vec<Mat>,
    arrows: Vec<Mat>,
}

/// A tuple of per-vertex linear maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub blocks: Vec<Mat>,
}

/// A submodule together with its inclusion.
#[derive(Clone, Debug)]
pub struct Sub {
    pub module: ModuleRep,
    pub embed: Vec<Mat>,
}

/// A quotient module with its projection and the coordinate section used to build it.
#[derive(Clone, Debug)]
pub struct Quot {
    pub module: ModuleRep,
    pub proj: Vec<Mat>,
    pub section: Vec<Mat>,
}

impl ModuleRep {
    /// Build a representation, checking only matrix shapes.
    pub fn new(alg: Arc<Algebra>, dims: Vec<usize>, eps: Vec<Mat>, arrows: Vec<Mat>) -> Result<Self> {
        let n = alg.n();
        if dims.len() != n || eps.len() != n || arrows.len() != alg.arrows().len() {
            return Err(Error::Shape(format!(
                "expected {} dims, {} loops, {} arrows",
                n,
                n,
                alg.arrows().len()
            )));
        }
        for (i, e) in eps.iter().enumerate() {
            if e.shape() != (dims[i], dims[i]) {
                return Err(Error::Shape(format!(
                    "loop at {} is {}x{}, expected {}x{}",
                    alg.datum().label(i),
                    e.rows(),
                    e.cols(),
                    dims[i],
                    dims[i]
                )));
            }
        }
        for (k, a) in arrows.iter().enumerate() {
            let arr = alg.arrows()[k];
            if a.shape() != (dims[arr.target], dims[arr.source]) {
                return Err(Error::Shape(format!(
                    "{} is {}x{}, expected {}x{}",
                    alg.arrow_key(k),
                    a.rows(),
                    a.cols(),
                    dims[arr.target],
                    dims[arr.source]
                )));
            }
        }
        Ok(ModuleRep { alg, dims, eps, arrows })
    }

    /// Build and require every relation to hold.
    pub fn checked(alg: Arc<Algebra>, dims: Vec<usize>, eps: Vec<Mat>, arrows: Vec<Mat>) -> Result<Self> {
        let m = Self::new(alg, dims, eps, arrows)?;
        m.check_relations()?;
        Ok(m)
    }

    pub fn zero(alg: &Arc<Algebra>) -> Self {
        let n = alg.n();
        let arrows = alg.arrows().iter().map(|_| Mat::zeros(0, 0)).collect();
        ModuleRep { alg: alg.clone(), dims: vec![0; n], eps: vec![Mat::zeros(0, 0); n], arrows }
    }

    /// Build from per-vertex loops and a list of `(arrow index, matrix)`; other arrows are zero.
    pub fn from_parts(alg: &Arc<Algebra>, eps: Vec<Mat>, nonzero: &[(usize, Mat)]) -> Result<Self> {
        let dims: Vec<usize> = eps.iter().map(Mat::rows).collect();
        let mut arrows: Vec<Mat> =
            alg.arrows().iter().map(|a| Mat::zeros(dims.get(a.target).copied().unwrap_or(0), dims.get(a.source).copied().unwrap_or(0))).collect();
        for (k, m) in nonzero {
            if *k >= arrows.len() {
                return Err(Error::Shape(format!("arrow index {k} out of range")));
            }
            arrows[*k] = m.clone();
        }
        Self::checked(alg.clone(), dims, eps, arrows)
    }

    /// The generalized simple `E_i`: `K[X]/(X^{c_i})` at vertex `i`.
    pub fn generalized_simple(alg: &Arc<Algebra>, i: usize) -> Self {
        let n = alg.n();
        let mut eps: Vec<Mat> = vec![Mat::zeros(0, 0); n];
        eps[i] = shift_block(alg.datum().ci(i));
        let mut dims = vec![0; n];
        dims[i] = alg.datum().ci(i);
        let arrows = alg.arrows().iter().map(|a| Mat::zeros(dims[a.target], dims[a.source])).collect();
        ModuleRep { alg: alg.clone(), dims, eps, arrows }
    }

    /// The one-dimensional simple `S_i` (locally free only when `c_i = 1`).
    pub fn simple(alg: &Arc<Algebra>, i: usize) -> Self {
        let n = alg.n();
        let mut dims = vec![0; n];
        dims[i] = 1;
        let eps = dims.iter().map(|&d| Mat::zeros(d, d)).collect();
        let arrows = alg.arrows().iter().map(|a| Mat::zeros(dims[a.target], dims[a.source])).collect();
        ModuleRep { alg: alg.clone(), dims, eps, arrows }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn eps(&self, i: usize) -> &Mat {
        &self.eps[i]
    }

    pub fn arrow(&self, k: usize) -> &Mat {
        &self.arrows[k]
    }

    pub fn loops(&self) -> &[Mat] {
        &self.eps
    }

    pub fn arrow_mats(&self) -> &[Mat] {
        &self.arrows
    }

    pub fn same_algebra(&self, other: &ModuleRep) -> Result<()> {
        if Arc::ptr_eq(&self.alg, &other.alg) || *self.alg == *other.alg {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// Matrix of a letter.
    pub fn letter(&self, l: Letter) -> &Mat {
        match l {
            Letter::Loop(i) => &self.eps[i],
            Letter::Arrow(k) => &self.arrows[k],
        }
    }

    /// Product of the letters of a word; `None` for the empty word.
    pub fn eval_word(&self, w: &[Letter]) -> Option<Mat> {
        let (first, rest) = w.split_first()?;
        let mut acc = self.letter(*first).clone();
        for l in rest {
            acc = acc.mul(self.letter(*l));
        }
        Some(acc)
    }

    pub fn eval_relation(&self, r: &Relation) -> Mat {
        let mut acc = Mat::zeros(self.dims[r.target], self.dims[r.source]);
        for (c, w) in &r.terms {
            if let Some(m) = self.eval_word(w) {
                acc.add_scaled(&m, &Rational::from_int(*c));
            }
        }
        acc
    }

    /// `Ok(())` when every relation evaluates to zero; otherwise the violated relations.
    pub fn check_relations(&self) -> Result<()> {
        let bad: Vec<String> = self
            .alg
            .relations()
            .iter()
            .filter(|r| !self.eval_relation(r).is_zero())
            .map(|r| {
                let kind = match r.kind {
                    RelationKind::Nilpotency { .. } => "nilpotency",
                    RelationKind::Commutativity { .. } => "commutativity",
                    RelationKind::Mesh { .. } => "mesh",
                };
                format!("{kind}: {} = 0", self.alg.format_relation(r))
            })
            .collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Relations(bad))
        }
    }

    /// Rank vector when every `M_i` is free over `K[X]/(X^{c_i})`.
    pub fn rank_vector(&self) -> Option<RankVector> {
        let datum = self.alg.datum();
        (0..self.alg.n()).map(|i| free_rank(&self.eps[i], datum.ci(i)).map(|r| r as i64)).collect()
    }

    pub fn is_locally_free(&self) -> (bool, Option<RankVector>) {
        let r = self.rank_vector();
        (r.is_some(), r)
    }

    pub fn require_rank(&self) -> Result<RankVector> {
        self.rank_vector().ok_or(Error::NotLocallyFree)
    }

    pub fn direct_sum(&self, other: &ModuleRep) -> Result<ModuleRep> {
        self.same_algebra(other)?;
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let eps = self.eps.iter().zip(&other.eps).map(|(a, b)| Mat::block_diag(a, b)).collect();
        let arrows = self.arrows.iter().zip(&other.arrows).map(|(a, b)| Mat::block_diag(a, b)).collect();
        Ok(ModuleRep { alg: self.alg.clone(), dims, eps, arrows })
    }

    pub fn direct_sum_all<'a>(alg: &Arc<Algebra>, parts: impl IntoIterator<Item = &'a ModuleRep>) -> Result<ModuleRep> {
        parts.into_iter().try_fold(ModuleRep::zero(alg), |acc, m| acc.direct_sum(m))
    }

    /// Restriction to an invariant family of subspaces, given by column bases.
    pub fn submodule(&self, basis: &[Mat]) -> Result<Sub> {
        let n = self.alg.n();
        if basis.len() != n {
            return Err(Error::Shape("submodule basis needs one matrix per vertex".into()));
        }
        let restrict = |a: &Mat, t: usize, s: usize| -> Result<Mat> {
            basis[t].solve_matrix(&a.mul(&basis[s])).ok_or_else(|| Error::Invariant("subspaces are not invariant".into()))
        };
        let eps = (0..n).map(|i| restrict(&self.eps[i], i, i)).collect::<Result<Vec<_>>>()?;
        let arrows = self
            .alg
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, a)| restrict(&self.arrows[k], a.target, a.source))
            .collect::<Result<Vec<_>>>()?;
        let dims = basis.iter().map(Mat::cols).collect();
        Ok(Sub { module: ModuleRep { alg: self.alg.clone(), dims, eps, arrows }, embed: basis.to_vec() })
    }

    /// Quotient by an invariant family of subspaces. The quotient basis is the
    /// image of the unit vectors completing the submodule basis.
    pub fn quotient(&self, basis: &[Mat]) -> Result<Quot> {
        let n = self.alg.n();
        if basis.len() != n {
            return Err(Error::Shape("submodule basis needs one matrix per vertex".into()));
        }
        let mut proj = Vec::with_capacity(n);
        let mut section = Vec::with_capacity(n);
        for i in 0..n {
            let u = basis[i].image();
            let comp = Mat::unit_columns(self.dims[i], &u.complement_indices());
            let full = u.hstack(&comp);
            let inv = full.inverse().expect("basis and complement span the space");
            proj.push(inv.submatrix(u.cols()..self.dims[i], 0..self.dims[i]));
            section.push(comp);
        }
        for i in 0..n {
            if !proj[i].mul(&self.eps[i]).mul(&basis[i]).is_zero() {
                return Err(Error::Invariant("subspaces are not invariant".into()));
            }
        }
        for (k, a) in self.alg.arrows().iter().enumerate() {
            if !proj[a.target].mul(&self.arrows[k]).mul(&basis[a.source]).is_zero() {
                return Err(Error::Invariant("subspaces are not invariant".into()));
            }
        }
        let eps = (0..n).map(|i| proj[i].mul(&self.eps[i]).mul(&section[i])).collect();
        let arrows = self
            .alg
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, a)| proj[a.target].mul(&self.arrows[k]).mul(&section[a.source]))
            .collect();
        let dims = section.iter().map(Mat::cols).collect();
        Ok(Quot { module: ModuleRep { alg: self.alg.clone(), dims, eps, arrows }, proj, section })
    }

    /// Smallest submodule containing the given vectors (columns per vertex).
    pub fn generated_submodule(&self, gens: &[Mat]) -> Vec<Mat> {
        let mut span: Vec<Mat> = gens.iter().map(Mat::image).collect();
        loop {
            let mut grew = false;
            let mut next = span.clone();
            for i in 0..self.alg.n() {
                let img = self.eps[i].mul(&span[i]);
                next[i] = span_sum(&next[i], &img);
            }
            for (k, a) in self.alg.arrows().iter().enumerate() {
                let img = self.arrows[k].mul(&span[a.source]);
                next[a.target] = span_sum(&next[a.target], &img);
            }
            for i in 0..self.alg.n() {
                if next[i].cols() != span[i].cols() {
                    grew = true;
                }
            }
            span = next;
            if !grew {
                return span;
            }
        }
    }

    /// Same representation with every matrix conjugated by `P_i`: the module
    /// obtained by changing basis along the columns of `P_i`.
    pub fn transport(&self, p: &[Mat]) -> Result<ModuleRep> {
        let inv = p.iter().map(|m| m.inverse().ok_or_else(|| Error::Shape("change of basis is singular".into()))).collect::<Result<Vec<_>>>()?;
        let eps = (0..self.alg.n()).map(|i| inv[i].mul(&self.eps[i]).mul(&p[i])).collect();
        let arrows = self.alg.arrows().iter().enumerate().map(|(k, a)| inv[a.target].mul(&self.arrows[k]).mul(&p[a.source])).collect();
        Ok(ModuleRep { alg: self.alg.clone(), dims: self.dims.clone(), eps, arrows })
    }

    /// Same matrices read over another algebra with the same quiver shape.
    pub fn reinterpret(&self, alg: &Arc<Algebra>) -> Result<ModuleRep> {
        if alg.arrows() != self.alg.arrows() {
            return Err(Error::AlgebraMismatch);
        }
        ModuleRep::checked(alg.clone(), self.dims.clone(), self.eps.clone(), self.arrows.clone())
    }
}

impl fmt::Debug for ModuleRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleRep(dims={:?}", self.dims)?;
        for (i, e) in self.eps.iter().enumerate() {
            if e.rows() > 0 && !e.is_zero() {
                write!(f, ", e{}={:?}", self.alg.datum().label(i), e)?;
            }
        }
        for (k, a) in self.arrows.iter().enumerate() {
            if !a.is_zero() {
                write!(f, ", {}={:?}", self.alg.arrow_key(k), a)?;
            }
        }
        write!(f, ")")
    }
}

/// `c x c` nilpotent Jordan block sending `b_k` to `b_{k+1}`.
pub fn shift_block(c: usize) -> Mat {
    let mut m = Mat::zeros(c, c);
    for k in 0..c.saturating_sub(1) {
        m[(k + 1, k)] = Rational::one();
    }
    m
}

/// Free rank of a nilpotent operator over `K[X]/(X^c)`: every Jordan block
/// has size `c` iff `c | d` and `rank(E^{c-1}) = d / c`.
pub(crate) fn free_rank(e: &Mat, c: usize) -> Option<usize> {
    let d = e.rows();
    if !d.is_multiple_of(c) {
        return None;
    }
    if d == 0 {
        return Some(0);
    }
    if !e.pow(c as u32).is_zero() {
        return None;
    }
    (e.pow(c as u32 - 1).rank() == d / c).then_some(d / c)
}

impl Morphism {
    pub fn zero(m: &ModuleRep, n: &ModuleRep) -> Self {
        Morphism { blocks: m.dims.iter().zip(&n.dims).map(|(&a, &b)| Mat::zeros(b, a)).collect() }
    }

    pub fn identity(m: &ModuleRep) -> Self {
        Morphism { blocks: m.dims.iter().map(|&d| Mat::identity(d)).collect() }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Morphism) -> Morphism {
        Morphism { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn add_scaled(&mut self, other: &Morphism, s: &Rational) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            a.add_scaled(b, s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Mat::is_zero)
    }

    /// Whether `f_t M_a = N_a f_s` for every loop and arrow.
    pub fn is_intertwiner(&self, m: &ModuleRep, n: &ModuleRep) -> bool {
        let alg = m.algebra();
        (0..alg.n()).all(|i| self.blocks[i].mul(&m.eps[i]) == n.eps[i].mul(&self.blocks[i]))
            && alg.arrows().iter().enumerate().all(|(k, a)| {
                self.blocks[a.target].mul(&m.arrows[k]) == n.arrows[k].mul(&self.blocks[a.source])
            })
    }

    pub fn is_injective(&self) -> bool {
        self.blocks.iter().all(|b| b.rank() == b.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.blocks.iter().all(|b| b.rank() == b.rows())
    }

    pub fn is_iso(&self) -> bool {
        self.blocks.iter().all(Mat::is_invertible)
    }

    /// Trace of the block-diagonal total map.
    pub fn trace(&self) -> Rational {
        self.blocks.iter().map(Mat::trace).sum()
    }

    /// Block-diagonal total map on `⊕ M_i`.
    pub fn total(&self) -> Mat {
        self.blocks.iter().fold(Mat::zeros(0, 0), |acc, b| Mat::block_diag(&acc, b))
    }

    pub fn kernel_basis(&self) -> Vec<Mat> {
        self.blocks.iter().map(Mat::kernel).collect()
    }

    pub fn image_basis(&self) -> Vec<Mat> {
        self.blocks.iter().map(Mat::image).collect()
    }
}

/// Seeded generator used by every randomized routine.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer coefficient in `[-10, 10]`.
pub fn sample_coeff(rng: &mut ChaCha8Rng) -> Rational {
    Rational::from_int(rng.gen_range(-10..=10))
}

/// Random integer combination of basis morphisms.
pub fn random_combination(basis: &[Morphism], zero: &Morphism, rng: &mut ChaCha8Rng) -> Morphism {
    let mut f = zero.clone();
    for b in basis {
        f.add_scaled(b, &sample_coeff(rng));
    }
    f
}

/// Canonical column basis (transposed RREF) so equal subspaces compare equal.
pub(crate) fn canonical_basis(w: &Mat) -> Mat {
    w.transpose().row_canonical().transpose()
}
