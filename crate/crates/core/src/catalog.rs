//! Built-in example algebras and modules: generalized simples, the `A₂`
//! simples, the rigid indecomposables of type `B₂` with their product table,
//! and Leclerc's one-parameter family over `A₅`.
//!
//! The `B₂` data use `C = [[2,-1],[-2,2]]`, `D = diag(2,1)`, `Ω = {(1,2)}`,
//! so vertex 1 carries the two-dimensional generalized simple. This is the
//! other common presentation (`C = [[2,-2],[-1,2]]`, `D = diag(1,2)`) with
//! the two vertices swapped.

use std::sync::Arc;

use serde::Serialize;

use crate::cartan::{Algebra, CartanDatum};
use crate::linalg::{Mat, Rational};
use crate::pimod::{hom_basis, is_crystal, is_rigid, radical_dim, ModuleRep};
use crate::starop::generic_extension;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Certification {
    pub locally_free: bool,
    pub crystal: bool,
    pub rigid: bool,
    pub indecomposable: bool,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    /// Short name such as `M3`.
    pub name: String,
    /// Socle picture such as `1/1/2`.
    pub picture: String,
    pub module: ModuleRep,
    pub flags: Certification,
    pub note: String,
}

impl CatalogEntry {
    /// `B2:M3=1/1/2`.
    pub fn full_label(&self, algebra: &str) -> String {
        format!("{algebra}:{}={}", self.name, self.picture)
    }
}

/// Verify local freeness, crystal property, rigidity and indecomposability.
pub fn certify(m: &ModuleRep) -> Result<Certification> {
    let locally_free = m.rank_vector().is_some();
    if !locally_free {
        return Ok(Certification::default());
    }
    let end = hom_basis(m, m)?;
    Ok(Certification {
        locally_free,
        crystal: is_crystal(m)?,
        rigid: is_rigid(m)?.rigid,
        indecomposable: !end.is_empty() && end.len() - radical_dim(&end) == 1,
    })
}

fn require(name: &str, m: &ModuleRep, rank: &[i64], indecomposable: bool) -> Result<Certification> {
    let fail = |reason: String| Error::Certification { label: name.to_string(), reason };
    m.check_relations().map_err(|e| fail(e.to_string()))?;
    let flags = certify(m)?;
    if !flags.locally_free {
        return Err(fail("not locally free".into()));
    }
    if m.rank_vector().as_deref() != Some(rank) {
        return Err(fail(format!("rank vector {:?}, expected {rank:?}", m.rank_vector())));
    }
    if !flags.crystal {
        return Err(fail("not crystal".into()));
    }
    if !flags.rigid {
        return Err(fail("not rigid".into()));
    }
    if indecomposable && !flags.indecomposable {
        return Err(fail("endomorphism ring is not local".into()));
    }
    Ok(flags)
}

/// `E_i` for a vertex label.
pub fn generalized_simple(alg: &Arc<Algebra>, label: &str) -> Result<ModuleRep> {
    Ok(ModuleRep::generalized_simple(alg, alg.vertex(label)?))
}

fn type_a(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { 2 } else if i.abs_diff(j) == 1 { -1 } else { 0 }).collect()).collect()
}

/// `A_n` with minimal symmetrizer and linear orientation `(i, i+1)`.
pub fn type_a_algebra(n: usize) -> Arc<Algebra> {
    Algebra::new(CartanDatum::with_minimal(type_a(n)).expect("type A data are valid"))
}

pub fn b2_algebra() -> Arc<Algebra> {
    Algebra::new(CartanDatum::new(vec![vec![2, -1], vec![-2, 2]], vec![2, 1], vec![(0, 1)]).expect("B2 datum is valid"))
}

pub struct A2Suite {
    pub algebra: Arc<Algebra>,
    pub s1: ModuleRep,
    pub s2: ModuleRep,
    /// `(S₁*S₂)*S₁` and `S₁*(S₂*S₁)` as sorted label multisets over
    /// `S1`, `S2`, `S1/S2` (top `S₁`) and `S2/S1` (top `S₂`).
    pub expected_left: Vec<String>,
    pub expected_right: Vec<String>,
}

pub fn a2_suite() -> A2Suite {
    let algebra = type_a_algebra(2);
    let s1 = ModuleRep::generalized_simple(&algebra, 0);
    let s2 = ModuleRep::generalized_simple(&algebra, 1);
    A2Suite {
        algebra,
        s1,
        s2,
        expected_left: vec!["S1".into(), "S1/S2".into()],
        expected_right: vec!["S1".into(), "S2/S1".into()],
    }
}

pub struct B2Suite {
    pub algebra: Arc<Algebra>,
    /// `M1 = 1/1 (E₁)`, `M2 = 2 (E₂)`, `M3 = 1/1/2`, `M4 = 2/1/1`, `M5 = 2/1 2/1`, `M6 = 1/2 1/2`.
    pub entries: Vec<CatalogEntry>,
    /// The two projective-injective summands appearing in the table:
    /// `P1 = 1/2 1/1 2/1` and `P2 = 2/1/1/2`.
    pub projectives: Vec<CatalogEntry>,
    /// `expected[r][c]`: sorted labels of the summands of `entries[r] * entries[c]`.
    pub expected: Vec<Vec<Vec<String>>>,
}

impl B2Suite {
    pub fn named(&self) -> Vec<(String, ModuleRep)> {
        self.entries.iter().map(|e| (e.name.clone(), e.module.clone())).collect()
    }

    pub fn named_projectives(&self) -> Vec<(String, ModuleRep)> {
        self.projectives.iter().map(|e| (e.name.clone(), e.module.clone())).collect()
    }

    pub fn entry(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().chain(&self.projectives).find(|e| e.name == name)
    }
}

const B2_TABLE: [[&[&str]; 6]; 6] = [
    [&["M1", "M1"], &["M3"], &["M1", "M3"], &["M1", "M4"], &["P1"], &["M3", "M3"]],
    [&["M4"], &["M2", "M2"], &["P2"], &["M5"], &["M2", "M5"], &["M2", "M6"]],
    [&["M1", "M3"], &["M6"], &["M3", "M3"], &["P1"], &["M2", "P1"], &["M3", "M6"]],
    [&["M1", "M4"], &["P2"], &["M1", "P2"], &["M4", "M4"], &["M4", "M5"], &["M3", "P2"]],
    [&["M4", "M4"], &["M2", "M5"], &["M4", "P2"], &["M4", "M5"], &["M5", "M5"], &["P2", "P2"]],
    [&["P1"], &["M2", "M6"], &["M3", "M6"], &["M2", "P1"], &["M2", "M2", "P1"], &["M6", "M6"]],
];

/// Expected table as sorted label multisets.
pub fn b2_expected_table() -> Vec<Vec<Vec<String>>> {
    B2_TABLE
        .iter()
        .map(|row| {
            row.iter()
                .map(|cell| {
                    let mut v: Vec<String> = cell.iter().map(|s| s.to_string()).collect();
                    v.sort();
                    v
                })
                .collect()
        })
        .collect()
}

/// Build and certify the `B₂` catalog. The four larger modules are products
/// of smaller ones, each certified before it is used.
pub fn b2_suite(trials: usize, seed: u64) -> Result<B2Suite> {
    let algebra = b2_algebra();
    let e1 = ModuleRep::generalized_simple(&algebra, 0);
    let e2 = ModuleRep::generalized_simple(&algebra, 1);
    let star = |name: &str, top: &ModuleRep, sub: &ModuleRep| -> Result<ModuleRep> {
        let r = generic_extension(top, sub, trials, seed)?;
        if !r.certified {
            return Err(Error::Certification { label: name.to_string(), reason: r.flags.join("; ") });
        }
        Ok(r.extension.module)
    };
    let mut entries = Vec::new();
    let push = |list: &mut Vec<CatalogEntry>, name: &str, picture: &str, m: ModuleRep, rank: &[i64], note: &str| -> Result<ModuleRep> {
        let flags = require(name, &m, rank, true)?;
        list.push(CatalogEntry { name: name.into(), picture: picture.into(), module: m.clone(), flags, note: note.into() });
        Ok(m)
    };
    let m1 = push(&mut entries, "M1", "1/1", e1, &[1, 0], "generalized simple E1")?;
    let m2 = push(&mut entries, "M2", "2", e2, &[0, 1], "generalized simple E2")?;
    let m3 = push(&mut entries, "M3", "1/1/2", star("M3", &m1, &m2)?, &[1, 1], "M1 * M2")?;
    let m4 = push(&mut entries, "M4", "2/1/1", star("M4", &m2, &m1)?, &[1, 1], "M2 * M1")?;
    let m5 = push(&mut entries, "M5", "2/1 2/1", star("M5", &m2, &m4)?, &[1, 2], "M2 * M4")?;
    let _m6 = push(&mut entries, "M6", "1/2 1/2", star("M6", &m3, &m2)?, &[1, 2], "M3 * M2")?;
    let mut projectives = Vec::new();
    push(&mut projectives, "P1", "1/2 1/1 2/1", star("P1", &m1, &m5)?, &[2, 2], "M1 * M5")?;
    push(&mut projectives, "P2", "2/1/1/2", star("P2", &m2, &m3)?, &[1, 2], "M2 * M3")?;
    Ok(B2Suite { algebra, entries, projectives, expected: b2_expected_table() })
}

/// `A₅` with linear orientation.
pub fn leclerc_algebra() -> Arc<Algebra> {
    type_a_algebra(5)
}

/// Leclerc's module `M_{[λ:μ]}` of dimension vector `(1,2,2,2,1)`.
///
/// At vertices 2 and 4 the coordinates are (top, bottom); at vertex 3 the
/// two coordinates receive the tops of 2 and 4. The parameters enter the maps
/// into the bottom of vertex 2 homogeneously (`1 → 2` is `μ`, `3 → 2` is
/// `(μ λ)`), so rescaling `(λ, μ)` rescales that bottom line and the module
/// depends only on `[λ:μ]`; `3 → 4` is `(1 1)`. Arrow signs are flipped, in a
/// fixed search order, until the mesh relations hold.
pub fn leclerc_module(alg: &Arc<Algebra>, lambda: &Rational, mu: &Rational) -> Result<ModuleRep> {
    if lambda.is_zero() && mu.is_zero() {
        return Err(Error::Shape("[0:0] is not a projective point".into()));
    }
    let q = |n: i64| Rational::from_int(n);
    let z = Rational::zero;
    let key = |t: usize, s: usize| alg.arrow_by_key(&format!("a_{t}_{s}_1")).expect("A5 arrow");
    let row = |v: Vec<Rational>| Mat::from_vec(1, v.len(), v);
    let col = |v: Vec<Rational>| Mat::from_vec(v.len(), 1, v);
    let base: Vec<(usize, Mat)> = vec![
        (key(1, 2), row(vec![q(1), z()])),
        (key(3, 2), Mat::from_vec(2, 2, vec![q(1), z(), z(), z()])),
        (key(3, 4), Mat::from_vec(2, 2, vec![z(), z(), q(1), z()])),
        (key(5, 4), row(vec![q(1), z()])),
        (key(2, 1), col(vec![z(), mu.clone()])),
        (key(2, 3), Mat::from_vec(2, 2, vec![z(), z(), mu.clone(), lambda.clone()])),
        (key(4, 3), Mat::from_vec(2, 2, vec![z(), z(), q(1), q(1)])),
        (key(4, 5), col(vec![z(), q(1)])),
    ];
    let eps: Vec<Mat> = [1, 2, 2, 2, 1].iter().map(|&d| Mat::zeros(d, d)).collect();
    let minus = -Rational::one();
    for mask in 0u32..1 << base.len() {
        let arrows: Vec<(usize, Mat)> = base
            .iter()
            .enumerate()
            .map(|(b, (k, m))| (*k, if mask >> b & 1 == 1 { m.scale(&minus) } else { m.clone() }))
            .collect();
        if let Ok(m) = ModuleRep::from_parts(alg, eps.clone(), &arrows) {
            return Ok(m);
        }
    }
    Err(Error::Invariant("no sign pattern satisfies the mesh relations".into()))
}

/// Default sample parameters `[1:0]`, `[0:1]`, `[1:1]`.
pub fn leclerc_defaults() -> Vec<(Rational, Rational)> {
    vec![
        (Rational::one(), Rational::zero()),
        (Rational::zero(), Rational::one()),
        (Rational::one(), Rational::one()),
    ]
}

/// Algebra names understood by [`resolve`] and [`algebra_by_name`].
pub const ALGEBRAS: [&str; 4] = ["A2", "A3", "B2", "A5"];

pub fn algebra_by_name(name: &str) -> Option<Arc<Algebra>> {
    match name {
        "A2" => Some(type_a_algebra(2)),
        "A3" => Some(type_a_algebra(3)),
        "A5" => Some(leclerc_algebra()),
        "B2" => Some(b2_algebra()),
        _ => None,
    }
}

/// One line per built-in module label.
pub fn list() -> Vec<(String, String)> {
    let mut out = Vec::new();
    for name in ALGEBRAS {
        let alg = algebra_by_name(name).expect("known algebra");
        for i in 0..alg.n() {
            let l = alg.datum().label(i);
            out.push((format!("{name}:E{l}"), format!("generalized simple at vertex {l}")));
        }
        if name.starts_with('A') {
            for i in 0..alg.n() {
                let l = alg.datum().label(i);
                out.push((format!("{name}:S{l}"), format!("simple at vertex {l}")));
            }
        }
    }
    for (name, picture, what) in [
        ("M1", "1/1", "E1"),
        ("M2", "2", "E2"),
        ("M3", "1/1/2", "M1 * M2"),
        ("M4", "2/1/1", "M2 * M1"),
        ("M5", "2/1 2/1", "M2 * M4"),
        ("M6", "1/2 1/2", "M3 * M2"),
        ("P1", "1/2 1/1 2/1", "M1 * M5"),
        ("P2", "2/1/1/2", "M2 * M3"),
    ] {
        out.push((format!("B2:{name}={picture}"), format!("rigid indecomposable, {what}")));
    }
    out.push(("A2:S1/S2".into(), "S1 * S2".into()));
    out.push(("A2:S2/S1".into(), "S2 * S1".into()));
    out.push(("A5:L[<lambda>:<mu>]".into(), "Leclerc module, e.g. A5:L[1:0]".into()));
    out
}

fn parse_projective(s: &str) -> Option<(Rational, Rational)> {
    let inner = s.strip_prefix("L[")?.strip_suffix(']')?;
    let (a, b) = inner.split_once(':')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

/// Resolve a label such as `B2:E1`, `B2:M3`, `B2:M3=1/1/2`, `A2:S1/S2` or
/// `A5:L[1:0]`. A label without an algebra prefix uses `default_algebra`.
pub fn resolve(label: &str, default_algebra: &str, trials: usize, seed: u64) -> Result<ModuleRep> {
    let unknown = || Error::Format(format!("unknown catalog label {label:?}"));
    let (alg_name, rest) = label.split_once(':').filter(|(a, _)| ALGEBRAS.contains(a)).unwrap_or((default_algebra, label));
    let alg = algebra_by_name(alg_name).ok_or_else(unknown)?;
    let name = rest.split_once('=').map_or(rest, |(n, _)| n);
    if let Some(v) = name.strip_prefix('E') {
        if let Some(i) = alg.datum().index_of(v) {
            return Ok(ModuleRep::generalized_simple(&alg, i));
        }
    }
    match alg_name {
        "B2" => {
            if !matches!(name, "M1" | "M2" | "M3" | "M4" | "M5" | "M6" | "P1" | "P2") {
                return Err(unknown());
            }
            let suite = b2_suite(trials, seed)?;
            suite.entry(name).map(|e| e.module.clone()).ok_or_else(unknown)
        }
        "A5" if name.starts_with("L[") => {
            let (l, m) = parse_projective(name).ok_or_else(unknown)?;
            leclerc_module(&alg, &l, &m)
        }
        _ => {
            if let Some((a, b)) = name.split_once('/') {
                let top = resolve(&format!("{alg_name}:{a}"), default_algebra, trials, seed)?;
                let sub = resolve(&format!("{alg_name}:{b}"), default_algebra, trials, seed)?;
                return Ok(generic_extension(&top, &sub, trials, seed)?.extension.module);
            }
            let v = name.strip_prefix('S').ok_or_else(unknown)?;
            let i = alg.datum().index_of(v).ok_or_else(unknown)?;
            Ok(ModuleRep::simple(&alg, i))
        }
    }
}
