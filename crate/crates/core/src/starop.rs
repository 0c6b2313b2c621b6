//! Extensions from derivations, the generic extension product `M₁ * M₂`
//! (`M₁` on top, `M₂` as submodule), generic kernels and cokernels, and
//! cancellation checks.

use serde::Serialize;
use serde_json::{json, Value};

use crate::linalg::json::mat_to_json;
use crate::linalg::Mat;
use crate::pimod::{
    decompose, derivation_basis, ext1_dim, hom_basis, is_e_filtered, is_rigid, iso_test, module_to_json, rng,
    sample_coeff, Derivation, ModuleRep, Morphism,
};
use crate::{Error, Result};

pub const DEFAULT_TRIALS: usize = 8;

pub const FLAG_HEURISTIC: &str = "heuristic: component membership not certified";
pub const FLAG_NON_RIGID: &str = "product possibly non-rigid";

/// A short exact sequence `0 → sub → module → top → 0` built from a derivation.
#[derive(Clone, Debug)]
pub struct Extension {
    pub module: ModuleRep,
    pub inject: Morphism,
    pub project: Morphism,
}

/// Middle term of the extension of `top` by `sub` along `delta`, with the
/// inclusion of `sub` and the projection onto `top`.
pub fn extension_module(top: &ModuleRep, sub: &ModuleRep, delta: &Derivation) -> Result<Extension> {
    let module = crate::pimod::extension_module(top, sub, delta)?;
    let inject = Morphism {
        blocks: sub.dims().iter().zip(top.dims()).map(|(&s, &t)| Mat::identity(s).vstack(&Mat::zeros(t, s))).collect(),
    };
    let project = Morphism {
        blocks: sub.dims().iter().zip(top.dims()).map(|(&s, &t)| Mat::zeros(t, s).hstack(&Mat::identity(t))).collect(),
    };
    debug_assert!(inject.is_intertwiner(sub, &module) && project.is_intertwiner(&module, top));
    Ok(Extension { module, inject, project })
}

/// Outcome of a generic extension, with its certificate.
#[derive(Clone, Debug)]
pub struct StarResult {
    pub extension: Extension,
    pub ext1_self: usize,
    pub rigid: bool,
    /// Both inputs and the result are rigid, so the result determines the product.
    pub certified: bool,
    pub flags: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    pub trials: usize,
}

impl StarResult {
    pub fn module(&self) -> &ModuleRep {
        &self.extension.module
    }

    pub fn to_json(&self) -> Value {
        json!({
            "module": module_to_json(&self.extension.module),
            "inject": self.extension.inject.blocks.iter().map(mat_to_json).collect::<Vec<_>>(),
            "project": self.extension.project.blocks.iter().map(mat_to_json).collect::<Vec<_>>(),
            "ext1_self": self.ext1_self,
            "rigid": self.rigid,
            "certified": self.certified,
            "flags": self.flags,
            "samples": self.samples,
            "seed": self.seed,
            "trials": self.trials,
        })
    }
}

fn random_derivation(basis: &[Derivation], zero: &Derivation, r: &mut rand_chacha::ChaCha8Rng) -> Derivation {
    let mut d = zero.clone();
    for b in basis {
        d.add_scaled(b, &sample_coeff(r));
    }
    d
}

/// Sample extensions of `top` by `sub` and keep the one with the smallest
/// self-extension space (the first minimum wins; sampling stops at zero).
pub fn generic_extension(top: &ModuleRep, sub: &ModuleRep, trials: usize, seed: u64) -> Result<StarResult> {
    top.same_algebra(sub)?;
    let inputs_rigid = is_rigid(top)?.rigid && is_rigid(sub)?.rigid;
    let basis = derivation_basis(top, sub)?;
    let alg = top.algebra();
    let zero = Derivation {
        blocks: alg.arrows().iter().map(|a| Mat::zeros(sub.dims()[a.target], top.dims()[a.source])).collect(),
    };
    let mut r = rng(seed);
    let mut best: Option<(Extension, usize)> = None;
    let mut samples = 0;
    let rounds = if basis.is_empty() { 1 } else { trials.max(1) };
    for _ in 0..rounds {
        let delta = random_derivation(&basis, &zero, &mut r);
        let ext = extension_module(top, sub, &delta)?;
        let e = ext1_dim(&ext.module, &ext.module)?;
        samples += 1;
        if best.as_ref().is_none_or(|(_, b)| e < *b) {
            best = Some((ext, e));
        }
        if e == 0 {
            break;
        }
    }
    let (extension, ext1_self) = best.expect("at least one sample");
    if ext1_self % 2 != 0 {
        return Err(Error::OddSelfExtension(ext1_self));
    }
    let rigid = ext1_self == 0;
    let mut flags = Vec::new();
    if !inputs_rigid {
        flags.push(FLAG_HEURISTIC.to_string());
    } else if !rigid {
        flags.push(FLAG_NON_RIGID.to_string());
    }
    Ok(StarResult { extension, ext1_self, rigid, certified: inputs_rigid && rigid, flags, samples, seed, trials })
}

/// Result of a generic kernel or cokernel computation.
#[derive(Clone, Debug)]
pub struct Division {
    pub module: ModuleRep,
    pub ext1_self: usize,
    /// Sampled morphisms that were injective (cokernel) or surjective (kernel).
    pub usable_samples: usize,
}

fn sample_morphisms(basis: &[Morphism], zero: &Morphism, trials: usize, seed: u64) -> Vec<Morphism> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(trials + 1);
    if basis.is_empty() {
        out.push(zero.clone());
        return out;
    }
    for _ in 0..trials.max(1) {
        let mut f = zero.clone();
        for b in basis {
            f.add_scaled(b, &sample_coeff(&mut r));
        }
        out.push(f);
    }
    out
}

fn best_division(candidates: impl Iterator<Item = Result<ModuleRep>>, what: &str) -> Result<Division> {
    let mut best: Option<(ModuleRep, usize)> = None;
    let mut usable = 0;
    for cand in candidates {
        let m = cand?;
        usable += 1;
        let (filtered, _) = is_e_filtered(&m)?;
        if !filtered {
            return Err(Error::Invariant(format!("generic {what} is not E-filtered")));
        }
        let e = ext1_dim(&m, &m)?;
        if best.as_ref().is_none_or(|(_, b)| e < *b) {
            best = Some((m, e));
        }
        if e == 0 {
            break;
        }
    }
    match best {
        Some((module, ext1_self)) => Ok(Division { module, ext1_self, usable_samples: usable }),
        None => Err(Error::DivisionUndefined(match what {
            "cokernel" => "no generic embedding found".into(),
            _ => "no generic surjection found".into(),
        })),
    }
}

/// Cokernel of a generic embedding `M₂ ↪ M`.
pub fn generic_cokernel(m: &ModuleRep, m2: &ModuleRep, trials: usize, seed: u64) -> Result<Division> {
    m.same_algebra(m2)?;
    if m.dims().iter().zip(m2.dims()).any(|(a, b)| b > a) {
        return Err(Error::DivisionUndefined("submodule is larger than the module".into()));
    }
    let basis = hom_basis(m2, m)?;
    let samples = sample_morphisms(&basis, &Morphism::zero(m2, m), trials, seed);
    let cands = samples.into_iter().filter(Morphism::is_injective).map(|f| Ok(m.quotient(&f.image_basis())?.module));
    best_division(cands, "cokernel")
}

/// Kernel of a generic surjection `M ↠ M₁`.
pub fn generic_kernel(m1: &ModuleRep, m: &ModuleRep, trials: usize, seed: u64) -> Result<Division> {
    m.same_algebra(m1)?;
    if m.dims().iter().zip(m1.dims()).any(|(a, b)| b > a) {
        return Err(Error::DivisionUndefined("quotient is larger than the module".into()));
    }
    let basis = hom_basis(m, m1)?;
    let samples = sample_morphisms(&basis, &Morphism::zero(m, m1), trials, seed);
    let cands = samples.into_iter().filter(Morphism::is_surjective).map(|f| Ok(m.submodule(&f.kernel_basis())?.module));
    best_division(cands, "kernel")
}

/// Names indecomposable modules against a growing list of known ones.
#[derive(Clone, Debug)]
pub struct Labeler {
    pub known: Vec<(String, ModuleRep)>,
    pub trials: usize,
    pub seed: u64,
    fresh: usize,
}

impl Labeler {
    pub fn new(known: Vec<(String, ModuleRep)>, trials: usize, seed: u64) -> Self {
        Labeler { known, trials, seed, fresh: 0 }
    }

    /// Label of a module isomorphic to `m`, adding a new `X<k>` entry when none matches.
    pub fn label(&mut self, m: &ModuleRep) -> Result<String> {
        for (name, k) in &self.known {
            if k.dims() == m.dims() && iso_test(k, m, self.trials, self.seed)? {
                return Ok(name.clone());
            }
        }
        self.fresh += 1;
        let name = format!("X{}", self.fresh);
        self.known.push((name.clone(), m.clone()));
        Ok(name)
    }

    /// Decompose and label each summand; labels are sorted.
    pub fn label_summands(&mut self, m: &ModuleRep) -> Result<(Vec<String>, Vec<ModuleRep>)> {
        let parts = decompose(m, self.seed)?;
        let mut labels = parts.iter().map(|p| self.label(p)).collect::<Result<Vec<_>>>()?;
        labels.sort();
        Ok((labels, parts))
    }
}

#[derive(Clone, Debug)]
pub struct TableCell {
    pub star: StarResult,
    pub labels: Vec<String>,
}

/// `cells[r][c]` is `rows[r] * rows[c]` (row on top, column as submodule).
#[derive(Debug)]
pub struct StarTable {
    pub labels: Vec<String>,
    pub cells: Vec<Vec<Result<TableCell>>>,
    pub labeler: Labeler,
}

/// Every product of two list members, decomposed and labeled against the list
/// and `extra` known modules.
pub fn star_table(
    list: &[(String, ModuleRep)],
    extra: &[(String, ModuleRep)],
    trials: usize,
    seed: u64,
) -> StarTable {
    let mut known = list.to_vec();
    known.extend_from_slice(extra);
    let mut labeler = Labeler::new(known, trials, seed);
    let mut cells = Vec::with_capacity(list.len());
    for (_, top) in list {
        let mut row = Vec::with_capacity(list.len());
        for (_, sub) in list {
            let cell = generic_extension(top, sub, trials, seed)
                .and_then(|star| labeler.label_summands(star.module()).map(|(labels, _)| TableCell { star, labels }));
            row.push(cell);
        }
        cells.push(row);
    }
    StarTable { labels: list.iter().map(|(l, _)| l.clone()).collect(), cells, labeler }
}

#[derive(Clone, Debug, Serialize)]
pub struct Collision {
    pub fixed: String,
    /// `"left"`: fixed factor on the left (`R * X`); `"right"`: `X * R`.
    pub side: String,
    pub first: String,
    pub second: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CancellationReport {
    pub comparisons: usize,
    pub collisions: Vec<Collision>,
}

/// Injectivity of `X ↦ R * X` and `X ↦ X * R` across the list, for each `R`.
/// `products[r][c]` must hold `list[r] * list[c]`.
pub fn check_cancellation(
    list: &[(String, ModuleRep)],
    products: &[Vec<ModuleRep>],
    trials: usize,
    seed: u64,
) -> Result<CancellationReport> {
    let n = list.len();
    let mut comparisons = 0;
    let mut collisions = Vec::new();
    for fixed in 0..n {
        for (side, get) in [("left", true), ("right", false)] {
            for a in 0..n {
                for b in a + 1..n {
                    let (x, y) = if get {
                        (&products[fixed][a], &products[fixed][b])
                    } else {
                        (&products[a][fixed], &products[b][fixed])
                    };
                    comparisons += 1;
                    if iso_test(x, y, trials, seed)? {
                        collisions.push(Collision {
                            fixed: list[fixed].0.clone(),
                            side: side.to_string(),
                            first: list[a].0.clone(),
                            second: list[b].0.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(CancellationReport { comparisons, collisions })
}

/// All products of list members, for callers that need the bare modules.
pub fn product_matrix(list: &[(String, ModuleRep)], trials: usize, seed: u64) -> Result<Vec<Vec<ModuleRep>>> {
    list.iter()
        .map(|(_, top)| {
            list.iter()
                .map(|(_, sub)| generic_extension(top, sub, trials, seed).map(|s| s.extension.module))
                .collect()
        })
        .collect()
}
