//! The acceptance suite shared by `preproj selftest` and the `acceptance` test
//! target. Reports are deterministic for a fixed seed and carry no timings.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cartan::{Algebra, CartanDatum};
use crate::catalog::{a2_suite, b2_suite, leclerc_algebra, leclerc_defaults, leclerc_module, type_a_algebra};
use crate::linalg::Mat;
use crate::pimod::{
    decompose, derivation_basis, ext1_dim, extension_module, hom_basis, hom_dim, hom_t_dim, is_crystal,
    is_e_filtered, is_rigid, iso_test, random_combination, rng, sample_coeff, verify_ext_theorems, Derivation,
    ModuleRep, Morphism,
};
use crate::starop::{check_cancellation, generic_cokernel, generic_extension, generic_kernel, product_matrix, star_table};
use crate::symred::{verify_symmetrizer_compat, SymPair};
use crate::Result;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("# selftest\n\nseed {}, trials {}\n\n| # | check | result | detail |\n|---|---|---|---|\n", self.seed, self.trials);
        for c in &self.checks {
            let _ = writeln!(s, "| {} | {} | {} | {} |", c.id, c.name, if c.passed { "pass" } else { "FAIL" }, c.detail);
        }
        let _ = writeln!(s, "\n{}", if self.passed { "all checks passed" } else { "some checks failed" });
        s
    }
}

fn check(id: usize, name: &str, body: impl FnOnce() -> Result<(bool, String)>) -> Check {
    let (passed, detail) = body().unwrap_or_else(|e| (false, format!("error: {e}")));
    Check { id, name: name.to_string(), passed, detail }
}

/// Run checks 1 through 9. Determinism (check 10) compares two runs and is
/// left to the caller.
pub fn run(seed: u64, trials: usize) -> Report {
    let checks = vec![
        b2_table(seed, trials),
        a2_products(seed, trials),
        leclerc_numbers(seed, trials),
        ext_identities(seed),
        e_filtered_closure(seed),
        cancellation(seed, trials),
        division(seed, trials),
        symmetrizer_change(seed, trials),
        dimension_formulas(seed),
    ];
    Report { seed, trials, passed: checks.iter().all(|c| c.passed), checks }
}

pub fn b2_table(seed: u64, trials: usize) -> Check {
    check(1, "B2 product table", || {
        let suite = b2_suite(trials, seed)?;
        let table = star_table(&suite.named(), &suite.named_projectives(), trials, seed);
        let mut matched = 0;
        let mut misses = Vec::new();
        for (r, row) in table.cells.iter().enumerate() {
            for (c, cell) in row.iter().enumerate() {
                let got = match cell {
                    Ok(cell) if cell.star.certified => cell.labels.join("+"),
                    Ok(cell) => format!("uncertified {}", cell.labels.join("+")),
                    Err(e) => format!("error {e}"),
                };
                if got == suite.expected[r][c].join("+") {
                    matched += 1;
                } else {
                    misses.push(format!("{}*{}={got}", table.labels[r], table.labels[c]));
                }
            }
        }
        let mut detail = format!("{matched}/36 cells match");
        if !misses.is_empty() {
            let _ = write!(detail, "; mismatches: {}", misses.join(", "));
        }
        Ok((matched == 36, detail))
    })
}

pub fn a2_products(seed: u64, trials: usize) -> Check {
    check(2, "A2 non-commutativity and non-associativity", || {
        let a2 = a2_suite();
        let star = |a: &ModuleRep, b: &ModuleRep| generic_extension(a, b, trials, seed);
        let s12 = star(&a2.s1, &a2.s2)?;
        let s21 = star(&a2.s2, &a2.s1)?;
        let left = star(s12.module(), &a2.s1)?;
        let right = star(&a2.s1, s21.module())?;
        let certified = [&s12, &s21, &left, &right].iter().all(|s| s.certified);
        let commute = iso_test(s12.module(), s21.module(), trials, seed)?;
        let assoc = iso_test(left.module(), right.module(), trials, seed)?;
        Ok((
            certified && !commute && !assoc,
            format!("S1*S2 ~ S2*S1: {commute}; (S1*S2)*S1 ~ S1*(S2*S1): {assoc}; all products certified: {certified}"),
        ))
    })
}

pub fn leclerc_numbers(seed: u64, trials: usize) -> Check {
    check(3, "Leclerc family numbers", || {
        let alg = leclerc_algebra();
        let members = leclerc_defaults()
            .iter()
            .map(|(l, m)| leclerc_module(&alg, l, m))
            .collect::<Result<Vec<_>>>()?;
        let d = members[0].require_rank()?;
        let datum = alg.datum();
        let (beta, alpha) = (datum.beta(&d, &d)?, datum.alpha(&d, &d)?);
        let mut ok = beta == 12 && alpha == 14;
        let mut notes = vec![format!("beta(d,d)={beta} alpha(d,d)={alpha}")];
        for (i, a) in members.iter().enumerate() {
            let end = hom_dim(a, a)?;
            let rig = is_rigid(a)?;
            ok &= end == 3 && rig.ext1 == 2 && rig.orbit_codim == 1;
            notes.push(format!("#{i}: End={end} Ext={} codim={}", rig.ext1, rig.orbit_codim));
            for (j, b) in members.iter().enumerate() {
                if i == j {
                    continue;
                }
                let (h, e) = (hom_dim(a, b)?, ext1_dim(a, b)?);
                let s = generic_extension(a, b, trials, seed)?;
                let parts = decompose(s.module(), seed)?.len();
                let split = iso_test(s.module(), &a.direct_sum(b)?, trials, seed)?;
                ok &= h == 2 && e == 0 && parts == 2 && split;
                notes.push(format!("#{i}*#{j}: Hom={h} Ext={e} star splits={split}"));
            }
        }
        Ok((ok, notes.join("; ")))
    })
}

/// A locally free module built as an iterated extension of randomly chosen
/// generalized simples with total rank at most `max_rank`, using random
/// (not necessarily generic) derivations.
pub fn random_iterated_extension(alg: &Arc<Algebra>, max_rank: usize, r: &mut ChaCha8Rng) -> Result<ModuleRep> {
    let steps = r.gen_range(1..=max_rank);
    let mut m = ModuleRep::generalized_simple(alg, r.gen_range(0..alg.n()));
    for _ in 1..steps {
        let e = ModuleRep::generalized_simple(alg, r.gen_range(0..alg.n()));
        let (top, sub) = if r.gen_bool(0.5) { (&e, &m) } else { (&m, &e) };
        let basis = derivation_basis(top, sub)?;
        let mut delta = Derivation {
            blocks: alg.arrows().iter().map(|a| Mat::zeros(sub.dims()[a.target], top.dims()[a.source])).collect(),
        };
        for b in &basis {
            delta.add_scaled(b, &sample_coeff(r));
        }
        m = extension_module(top, sub, &delta)?;
    }
    Ok(m)
}

pub const EXT_PAIRS_PER_ALGEBRA: usize = 60;

pub fn ext_identities(seed: u64) -> Check {
    check(4, "Ext-formula and Ext-duality", || {
        let mut r = rng(seed);
        let mut pairs = 0;
        let mut failures = Vec::new();
        for (name, alg) in [("A2", type_a_algebra(2)), ("B2", crate::catalog::b2_algebra())] {
            for k in 0..EXT_PAIRS_PER_ALGEBRA {
                let m = random_iterated_extension(&alg, 4, &mut r)?;
                let n = random_iterated_extension(&alg, 4, &mut r)?;
                pairs += 1;
                if let Err(e) = verify_ext_theorems(&m, &n) {
                    failures.push(format!("{name} pair {k}: {e}"));
                }
            }
        }
        let mut detail = format!("{} of {pairs} pairs satisfy both identities", pairs - failures.len());
        if !failures.is_empty() {
            let _ = write!(detail, "; {}", failures.join("; "));
        }
        Ok((failures.is_empty() && pairs >= 100, detail))
    })
}

/// Crystal modules derived from the `B₂` catalog: the entries, the two
/// projective summands and all sums of two of them.
pub fn crystal_pool() -> Result<Vec<ModuleRep>> {
    let suite = b2_suite(8, 0)?;
    let base: Vec<ModuleRep> = suite.entries.iter().chain(&suite.projectives).map(|e| e.module.clone()).collect();
    let mut pool = base.clone();
    for i in 0..base.len() {
        for j in i..base.len() {
            pool.push(base[i].direct_sum(&base[j])?);
        }
    }
    let mut out = Vec::new();
    for m in pool {
        if is_crystal(&m)? {
            out.push(m);
        }
    }
    Ok(out)
}

pub const CLOSURE_SAMPLES: usize = 50;

pub fn e_filtered_closure(seed: u64) -> Check {
    check(5, "E-filtered cokernels and kernels", || {
        let pool = crystal_pool()?;
        let mut r = rng(seed);
        let mut pairs: Vec<(usize, usize)> = (0..pool.len())
            .flat_map(|a| (0..pool.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| pool[a].dim() < pool[b].dim())
            .collect();
        pairs.shuffle(&mut r);
        let (mut inj, mut sur) = (0, 0);
        let mut bad = Vec::new();
        for (a, b) in pairs {
            if inj >= CLOSURE_SAMPLES && sur >= CLOSURE_SAMPLES {
                break;
            }
            let (small, big) = (&pool[a], &pool[b]);
            if inj < CLOSURE_SAMPLES {
                let h = hom_basis(small, big)?;
                let f = random_combination(&h, &Morphism::zero(small, big), &mut r);
                if !h.is_empty() && f.is_injective() {
                    inj += 1;
                    if !is_e_filtered(&big.quotient(&f.image_basis())?.module)?.0 {
                        bad.push(format!("cokernel {a}->{b}"));
                    }
                }
            }
            if sur < CLOSURE_SAMPLES {
                let h = hom_basis(big, small)?;
                let g = random_combination(&h, &Morphism::zero(big, small), &mut r);
                if !h.is_empty() && g.is_surjective() {
                    sur += 1;
                    if !is_e_filtered(&big.submodule(&g.kernel_basis())?.module)?.0 {
                        bad.push(format!("kernel {b}->{a}"));
                    }
                }
            }
        }
        let mut detail = format!("{inj} cokernels, {sur} kernels over a pool of {} modules", pool.len());
        if !bad.is_empty() {
            let _ = write!(detail, "; not E-filtered: {}", bad.join(", "));
        }
        Ok((bad.is_empty() && inj >= CLOSURE_SAMPLES && sur >= CLOSURE_SAMPLES, detail))
    })
}

pub fn cancellation(seed: u64, trials: usize) -> Check {
    check(6, "B2 cancellation", || {
        let suite = b2_suite(trials, seed)?;
        let list = suite.named();
        let products = product_matrix(&list, trials, seed)?;
        let report = check_cancellation(&list, &products, trials, seed)?;
        let detail = format!("{} comparisons, {} collisions", report.comparisons, report.collisions.len());
        Ok((report.collisions.is_empty(), detail))
    })
}

pub fn division(seed: u64, trials: usize) -> Check {
    check(7, "B2 division identities", || {
        let suite = b2_suite(trials, seed)?;
        let list = suite.named();
        let products = product_matrix(&list, trials, seed)?;
        let mut pairs = 0;
        let mut bad = Vec::new();
        for (i, (na, a)) in list.iter().enumerate() {
            for (j, (nb, b)) in list.iter().enumerate() {
                pairs += 1;
                let p = &products[i][j];
                let right = iso_test(&generic_cokernel(p, b, trials, seed)?.module, a, trials, seed)?;
                let left = iso_test(&generic_kernel(a, p, trials, seed)?.module, b, trials, seed)?;
                if !(right && left) {
                    bad.push(format!("{na},{nb}"));
                }
            }
        }
        let mut detail = format!("{} of {pairs} pairs recover both factors", pairs - bad.len());
        if !bad.is_empty() {
            let _ = write!(detail, "; failing: {}", bad.join(" "));
        }
        Ok((bad.is_empty(), detail))
    })
}

pub fn symmetrizer_change(seed: u64, trials: usize) -> Check {
    check(8, "Symmetrizer change", || {
        let mut ok = true;
        let mut notes = Vec::new();
        for size in [2, 3] {
            let alg = type_a_algebra(size);
            let simples: Vec<ModuleRep> = (0..size).map(|i| ModuleRep::simple(&alg, i)).collect();
            let mut crystal = simples.clone();
            for a in &simples {
                for b in &simples {
                    let s = generic_extension(a, b, trials, seed)?;
                    if is_crystal(s.module())? {
                        crystal.push(s.extension.module);
                    }
                }
            }
            for n in [2, 3] {
                let pair = SymPair::new(&alg, n)?;
                let mut products = 0;
                for a in &simples {
                    for b in &simples {
                        ok &= verify_symmetrizer_compat(&pair, a, b, trials, seed)?.isomorphic;
                        products += 1;
                    }
                }
                let mut roundtrips = 0;
                for m in &crystal {
                    let lifted = pair.lift(m)?;
                    ok &= iso_test(&pair.reduce(&lifted)?, m, trials, seed)? && is_crystal(&lifted)?;
                    roundtrips += 1;
                }
                notes.push(format!("A{size} n={n}: {products} products, {roundtrips} lifts"));
            }
        }
        Ok((ok, notes.join("; ")))
    })
}

fn random_datum(r: &mut ChaCha8Rng) -> Result<CartanDatum> {
    let n = r.gen_range(2..=5);
    let sym: Vec<i64> = (0..n).map(|_| r.gen_range(1..=3)).collect();
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    for i in 0..n {
        for j in i + 1..n {
            if r.gen_bool(0.5) {
                let l = num_integer::lcm(sym[i], sym[j]) * r.gen_range(1..=2);
                c[i][j] = -l / sym[i];
                c[j][i] = -l / sym[j];
            }
        }
    }
    let orientation = random_orientation(&c, r);
    Ok(CartanDatum::new(c, sym, orientation)?)
}

fn random_orientation(c: &[Vec<i64>], r: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.shuffle(r);
    let mut out = Vec::new();
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            if c[i][j] != 0 {
                out.push(if order[i] < order[j] { (i, j) } else { (j, i) });
            }
        }
    }
    out
}

/// `⊕_i E_i^{d_i}`: a locally free module with rank vector `d`.
fn free_of_rank(alg: &Arc<Algebra>, d: &[i64]) -> Result<ModuleRep> {
    let parts: Vec<ModuleRep> = d
        .iter()
        .enumerate()
        .flat_map(|(i, &k)| std::iter::repeat_n(ModuleRep::generalized_simple(alg, i), k as usize))
        .collect();
    ModuleRep::direct_sum_all(alg, &parts)
}

pub fn dimension_formulas(seed: u64) -> Check {
    check(9, "Dimension formulas", || {
        let mut r = rng(seed);
        let mut hom_ok = 0;
        let mut beta_ok = 0;
        for _ in 0..20 {
            let datum = random_datum(&mut r)?;
            let n = datum.n();
            let d: Vec<i64> = (0..n).map(|_| r.gen_range(0..=2)).collect();
            let e: Vec<i64> = (0..n).map(|_| r.gen_range(0..=2)).collect();
            let alg = Algebra::new(datum.clone());
            let f = datum.dim_formulas(&d, &e)?;
            let direct = hom_t_dim(&free_of_rank(&alg, &d)?, &free_of_rank(&alg, &e)?)? as i64;
            let gl = hom_t_dim(&free_of_rank(&alg, &d)?, &free_of_rank(&alg, &d)?)? as i64;
            if f.dim_hom_t == direct && f.dim_gl == gl {
                hom_ok += 1;
            }
            let other = datum.with_orientation(random_orientation(datum.cartan(), &mut r))?;
            if datum.beta(&d, &d)? == other.beta(&d, &d)? && f.dim_rc == datum.beta(&d, &d)? {
                beta_ok += 1;
            }
        }
        Ok((
            hom_ok == 20 && beta_ok == 20,
            format!("Hom_T agrees on {hom_ok}/20 pairs; beta(d,d) orientation-independent on {beta_ok}/20 data"),
        ))
    })
}
