//! Symmetrizable Cartan data, the double quiver with its defining relations,
//! and the bilinear forms on rank vectors.
//!
//! Arrows follow the composition convention of path algebras: `α_ij` goes
//! from vertex `j` to vertex `i`, and a word `x y` means "first `y`, then
//! `x`", so it is evaluated on a module as the matrix product `X · Y`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Reasons a Cartan datum is rejected. Each variant has a stable [`code`](DatumError::code).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatumError {
    #[error("malformed input: {0}")]
    Shape(String),
    #[error("c[{0}][{0}] must be 2")]
    DiagonalNotTwo(String),
    #[error("off-diagonal entry c[{0}][{1}] is positive")]
    PositiveOffDiagonal(String, String),
    #[error("c[{0}][{1}] and c[{1}][{0}] must vanish together")]
    AsymmetricZeroPattern(String, String),
    #[error("symmetrizer entry at {0} must be at least 1")]
    NonPositiveSymmetrizer(String),
    #[error("DC is not symmetric at ({0}, {1})")]
    NotSymmetrized(String, String),
    #[error("Cartan matrix admits no symmetrizer")]
    NotSymmetrizable,
    #[error("orientation misses the edge {{{0}, {1}}}")]
    OrientationMissing(String, String),
    #[error("orientation lists the edge {{{0}, {1}}} more than once")]
    OrientationDuplicate(String, String),
    #[error("orientation contains ({0}, {1}) but c[{0}][{1}] = 0")]
    OrientationNotAnEdge(String, String),
    #[error("orientation has a cycle: {}", .0.join(" -> "))]
    OrientationCyclic(Vec<String>),
    #[error("unknown vertex label {0}")]
    UnknownVertex(String),
}

impl DatumError {
    pub fn code(&self) -> &'static str {
        match self {
            DatumError::Shape(_) => "shape",
            DatumError::DiagonalNotTwo(_) => "diagonal-not-two",
            DatumError::PositiveOffDiagonal(..) => "positive-off-diagonal",
            DatumError::AsymmetricZeroPattern(..) => "asymmetric-zero-pattern",
            DatumError::NonPositiveSymmetrizer(_) => "non-positive-symmetrizer",
            DatumError::NotSymmetrized(..) => "dc-not-symmetric",
            DatumError::NotSymmetrizable => "not-symmetrizable",
            DatumError::OrientationMissing(..) => "orientation-missing",
            DatumError::OrientationDuplicate(..) => "orientation-duplicate",
            DatumError::OrientationNotAnEdge(..) => "orientation-not-an-edge",
            DatumError::OrientationCyclic(_) => "orientation-cyclic",
            DatumError::UnknownVertex(_) => "unknown-vertex",
        }
    }
}

/// A validated triple `(C, D, Ω)` over an ordered vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CartanDatum {
    labels: Vec<String>,
    cartan: Vec<Vec<i64>>,
    symmetrizer: Vec<i64>,
    orientation: Vec<(usize, usize)>,
}

fn check_matrix(cartan: &[Vec<i64>], labels: &[String]) -> Result<(), DatumError> {
    let n = labels.len();
    if cartan.len() != n || cartan.iter().any(|r| r.len() != n) {
        return Err(DatumError::Shape(format!("Cartan matrix must be {n}x{n}")));
    }
    for i in 0..n {
        if cartan[i][i] != 2 {
            return Err(DatumError::DiagonalNotTwo(labels[i].clone()));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && cartan[i][j] > 0 {
                return Err(DatumError::PositiveOffDiagonal(labels[i].clone(), labels[j].clone()));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if (cartan[i][j] == 0) != (cartan[j][i] == 0) {
                return Err(DatumError::AsymmetricZeroPattern(labels[i].clone(), labels[j].clone()));
            }
        }
    }
    Ok(())
}

fn find_cycle(n: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    let mut stack = Vec::new();
    fn dfs(v: usize, adj: &[Vec<usize>], state: &mut [u8], stack: &mut Vec<usize>) -> Option<Vec<usize>> {
        state[v] = 1;
        stack.push(v);
        for &w in &adj[v] {
            if state[w] == 1 {
                let pos = stack.iter().position(|&x| x == w).unwrap();
                let mut cyc = stack[pos..].to_vec();
                cyc.push(w);
                return Some(cyc);
            }
            if state[w] == 0 {
                if let Some(c) = dfs(w, adj, state, stack) {
                    return Some(c);
                }
            }
        }
        stack.pop();
        state[v] = 2;
        None
    }
    (0..n).find_map(|v| if state[v] == 0 { dfs(v, &adj, &mut state, &mut stack) } else { None })
}

/// Check every defining condition of `(C, D, Ω)`.
pub fn validate_datum(
    labels: Vec<String>,
    cartan: Vec<Vec<i64>>,
    symmetrizer: Vec<i64>,
    orientation: Vec<(usize, usize)>,
) -> Result<CartanDatum, DatumError> {
    let n = labels.len();
    if n == 0 {
        return Err(DatumError::Shape("vertex set is empty".into()));
    }
    let mut seen = std::collections::HashSet::new();
    if let Some(l) = labels.iter().find(|l| !seen.insert(l.as_str())) {
        return Err(DatumError::Shape(format!("vertex label {l} repeated")));
    }
    check_matrix(&cartan, &labels)?;
    if symmetrizer.len() != n {
        return Err(DatumError::Shape(format!("symmetrizer must have {n} entries")));
    }
    if let Some(i) = (0..n).find(|&i| symmetrizer[i] < 1) {
        return Err(DatumError::NonPositiveSymmetrizer(labels[i].clone()));
    }
    for i in 0..n {
        for j in 0..n {
            if symmetrizer[i] * cartan[i][j] != symmetrizer[j] * cartan[j][i] {
                return Err(DatumError::NotSymmetrized(labels[i].clone(), labels[j].clone()));
            }
        }
    }
    let mut count = BTreeMap::new();
    for &(i, j) in &orientation {
        if i >= n || j >= n {
            return Err(DatumError::Shape("orientation index out of range".into()));
        }
        if i == j || cartan[i][j] == 0 {
            return Err(DatumError::OrientationNotAnEdge(labels[i].clone(), labels[j].clone()));
        }
        *count.entry((i.min(j), i.max(j))).or_insert(0usize) += 1;
    }
    for i in 0..n {
        for j in i + 1..n {
            if cartan[i][j] < 0 {
                match count.get(&(i, j)) {
                    None => return Err(DatumError::OrientationMissing(labels[i].clone(), labels[j].clone())),
                    Some(&c) if c > 1 => {
                        return Err(DatumError::OrientationDuplicate(labels[i].clone(), labels[j].clone()))
                    }
                    _ => {}
                }
            }
        }
    }
    if let Some(cyc) = find_cycle(n, &orientation) {
        return Err(DatumError::OrientationCyclic(cyc.into_iter().map(|v| labels[v].clone()).collect()));
    }
    let mut orientation = orientation;
    orientation.sort_unstable();
    Ok(CartanDatum { labels, cartan, symmetrizer, orientation })
}

/// The symmetrizer with minimal entry sum, computed per connected component.
pub fn minimal_symmetrizer(cartan: &[Vec<i64>]) -> Result<Vec<i64>, DatumError> {
    let n = cartan.len();
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    check_matrix(cartan, &labels)?;
    // ratios c_j / c_i kept as reduced fractions relative to the component root
    let mut value: Vec<Option<(i64, i64)>> = vec![None; n];
    let mut out = vec![0i64; n];
    for root in 0..n {
        if value[root].is_some() {
            continue;
        }
        value[root] = Some((1, 1));
        let mut component = vec![root];
        let mut queue = vec![root];
        while let Some(i) = queue.pop() {
            let (ni, di) = value[i].unwrap();
            for j in 0..n {
                if i == j || cartan[i][j] == 0 {
                    continue;
                }
                // c_i c_ij = c_j c_ji  =>  c_j = c_i c_ij / c_ji
                let num = ni * cartan[i][j];
                let den = di * cartan[j][i];
                let g = num.gcd(&den);
                let cand = (num / g, den / g);
                let cand = if cand.1 < 0 { (-cand.0, -cand.1) } else { cand };
                match value[j] {
                    None => {
                        value[j] = Some(cand);
                        component.push(j);
                        queue.push(j);
                    }
                    Some(v) if v != cand => return Err(DatumError::NotSymmetrizable),
                    Some(_) => {}
                }
            }
        }
        let lcm = component.iter().fold(1i64, |acc, &v| acc.lcm(&value[v].unwrap().1));
        let ints: Vec<i64> = component.iter().map(|&v| value[v].unwrap().0 * (lcm / value[v].unwrap().1)).collect();
        let g = ints.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        for (&v, x) in component.iter().zip(ints) {
            out[v] = x / g;
        }
    }
    Ok(out)
}

/// Orientation with every edge pointing from the smaller to the larger index.
pub fn default_orientation(cartan: &[Vec<i64>]) -> Vec<(usize, usize)> {
    let n = cartan.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if cartan[i][j] < 0 {
                out.push((i, j));
            }
        }
    }
    out
}

impl CartanDatum {
    /// Datum with integer labels `1..=n`.
    pub fn new(cartan: Vec<Vec<i64>>, symmetrizer: Vec<i64>, orientation: Vec<(usize, usize)>) -> Result<Self, DatumError> {
        let labels = (1..=cartan.len()).map(|i| i.to_string()).collect();
        validate_datum(labels, cartan, symmetrizer, orientation)
    }

    /// Minimal symmetrizer and default orientation.
    pub fn with_minimal(cartan: Vec<Vec<i64>>) -> Result<Self, DatumError> {
        let d = minimal_symmetrizer(&cartan)?;
        let o = default_orientation(&cartan);
        Self::new(cartan, d, o)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn c(&self, i: usize, j: usize) -> i64 {
        self.cartan[i][j]
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    /// `c_i`, the nilpotency degree of the loop at `i`.
    pub fn ci(&self, i: usize) -> usize {
        self.symmetrizer[i] as usize
    }

    pub fn orientation(&self) -> &[(usize, usize)] {
        &self.orientation
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| self.cartan[i][j] == self.cartan[j][i]))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && self.cartan[i][j] != 0 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Same `C` and `Ω` with every symmetrizer entry multiplied by `k`.
    pub fn scaled(&self, k: i64) -> Result<Self, DatumError> {
        let d = self.symmetrizer.iter().map(|c| c * k).collect();
        validate_datum(self.labels.clone(), self.cartan.clone(), d, self.orientation.clone())
    }

    pub fn with_orientation(&self, orientation: Vec<(usize, usize)>) -> Result<Self, DatumError> {
        validate_datum(self.labels.clone(), self.cartan.clone(), self.symmetrizer.clone(), orientation)
    }

    /// `g_ij = gcd(|c_ij|, |c_ji|)`, zero for non-edges.
    pub fn g(&self, i: usize, j: usize) -> usize {
        if i == j || self.cartan[i][j] == 0 {
            return 0;
        }
        self.cartan[i][j].abs().gcd(&self.cartan[j][i].abs()) as usize
    }

    /// `f_ij = |c_ij| / g_ij`.
    pub fn f(&self, i: usize, j: usize) -> usize {
        let g = self.g(i, j);
        if g == 0 {
            0
        } else {
            self.cartan[i][j].unsigned_abs() as usize / g
        }
    }

    /// `+1` for pairs in `Ω`, `-1` for pairs in `Ω*`, `0` otherwise.
    pub fn sign(&self, i: usize, j: usize) -> i64 {
        if self.orientation.contains(&(i, j)) {
            1
        } else if self.orientation.contains(&(j, i)) {
            -1
        } else {
            0
        }
    }

    fn check_len(&self, v: &[i64]) -> Result<(), DatumError> {
        if v.len() == self.n() {
            Ok(())
        } else {
            Err(DatumError::Shape(format!("rank vector has {} entries, expected {}", v.len(), self.n())))
        }
    }

    pub fn alpha(&self, d: &[i64], e: &[i64]) -> Result<i64, DatumError> {
        self.check_len(d)?;
        self.check_len(e)?;
        Ok((0..self.n()).map(|i| self.symmetrizer[i] * d[i] * e[i]).sum())
    }

    pub fn beta(&self, d: &[i64], e: &[i64]) -> Result<i64, DatumError> {
        self.check_len(d)?;
        self.check_len(e)?;
        Ok(self.orientation.iter().map(|&(i, j)| self.symmetrizer[i] * self.cartan[i][j].abs() * d[i] * e[j]).sum())
    }

    /// `(α(d,e), β(d,e), (d,e))`.
    pub fn euler_forms(&self, d: &[i64], e: &[i64]) -> Result<EulerForms, DatumError> {
        let alpha = self.alpha(d, e)?;
        let beta = self.beta(d, e)?;
        let symmetric = alpha + self.alpha(e, d)? - beta - self.beta(e, d)?;
        Ok(EulerForms { alpha, beta, symmetric })
    }

    /// The symmetrized Euler form `(d, e)`.
    pub fn symmetric_form(&self, d: &[i64], e: &[i64]) -> Result<i64, DatumError> {
        Ok(self.euler_forms(d, e)?.symmetric)
    }

    /// Dimensions of the crystal variety, of `Hom_T`, and of `GL(V)`.
    pub fn dim_formulas(&self, d: &[i64], e: &[i64]) -> Result<DimFormulas, DatumError> {
        Ok(DimFormulas {
            dim_rc: self.beta(d, d)?,
            dim_hom_t: self.alpha(d, e)?,
            dim_gl: self.alpha(d, d)?,
        })
    }

    pub fn to_config(&self) -> AlgebraConfig {
        AlgebraConfig {
            vertices: self.labels.iter().map(|l| Label::from_str(l)).collect(),
            cartan: self.cartan.clone(),
            symmetrizer: SymmetrizerSpec::Explicit(self.symmetrizer.clone()),
            orientation: self
                .orientation
                .iter()
                .map(|&(i, j)| [Label::from_str(&self.labels[i]), Label::from_str(&self.labels[j])])
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EulerForms {
    pub alpha: i64,
    pub beta: i64,
    pub symmetric: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DimFormulas {
    pub dim_rc: i64,
    pub dim_hom_t: i64,
    pub dim_gl: i64,
}

/// `α_ij^(g)`: source `j`, target `i`, copy `g` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub target: usize,
    pub source: usize,
    pub copy: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    Loop(usize),
    Arrow(usize),
}

/// A path in the double quiver, leftmost letter applied last.
pub type Word = Vec<Letter>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationKind {
    Nilpotency { vertex: usize },
    Commutativity { arrow: usize },
    Mesh { vertex: usize },
}

/// A homogeneous relation `Σ coeff · word` between two vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub kind: RelationKind,
    pub target: usize,
    pub source: usize,
    pub terms: Vec<(i64, Word)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleQuiver {
    pub arrows: Vec<Arrow>,
}

impl DoubleQuiver {
    pub fn arrow_index(&self, target: usize, source: usize, copy: usize) -> Option<usize> {
        self.arrows.iter().position(|a| a.target == target && a.source == source && a.copy == copy)
    }
}

/// Build `Q↔(C)` and the nilpotency, commutativity and mesh relations.
pub fn build_double_quiver(datum: &CartanDatum) -> (DoubleQuiver, Vec<Relation>) {
    let n = datum.n();
    let mut arrows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for g in 1..=datum.g(i, j) {
                arrows.push(Arrow { target: i, source: j, copy: g });
            }
        }
    }
    let quiver = DoubleQuiver { arrows };
    let loops = |v: usize, k: usize| std::iter::repeat_n(Letter::Loop(v), k);
    let mut relations = Vec::new();
    for i in 0..n {
        relations.push(Relation {
            kind: RelationKind::Nilpotency { vertex: i },
            target: i,
            source: i,
            terms: vec![(1, loops(i, datum.ci(i)).collect())],
        });
    }
    for (idx, a) in quiver.arrows.iter().enumerate() {
        let (i, j) = (a.target, a.source);
        let lhs: Word = loops(i, datum.f(j, i)).chain([Letter::Arrow(idx)]).collect();
        let rhs: Word = [Letter::Arrow(idx)].into_iter().chain(loops(j, datum.f(i, j))).collect();
        relations.push(Relation {
            kind: RelationKind::Commutativity { arrow: idx },
            target: i,
            source: j,
            terms: vec![(1, lhs), (-1, rhs)],
        });
    }
    for i in 0..n {
        let mut terms = Vec::new();
        for j in 0..n {
            if i == j || datum.c(i, j) >= 0 {
                continue;
            }
            let sgn = datum.sign(i, j);
            let fji = datum.f(j, i);
            for g in 1..=datum.g(j, i) {
                let out = quiver.arrow_index(i, j, g).expect("arrow α_ij exists");
                let back = quiver.arrow_index(j, i, g).expect("arrow α_ji exists");
                for f in 0..fji {
                    let word: Word = loops(i, f)
                        .chain([Letter::Arrow(out), Letter::Arrow(back)])
                        .chain(loops(i, fji - 1 - f))
                        .collect();
                    terms.push((sgn, word));
                }
            }
        }
        relations.push(Relation { kind: RelationKind::Mesh { vertex: i }, target: i, source: i, terms });
    }
    (quiver, relations)
}

/// A datum together with its quiver and relations; shared by every module over it.
#[derive(Debug, PartialEq, Eq)]
pub struct Algebra {
    datum: CartanDatum,
    quiver: DoubleQuiver,
    relations: Vec<Relation>,
}

impl Algebra {
    pub fn new(datum: CartanDatum) -> Arc<Algebra> {
        let (quiver, relations) = build_double_quiver(&datum);
        Arc::new(Algebra { datum, quiver, relations })
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn quiver(&self) -> &DoubleQuiver {
        &self.quiver
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.quiver.arrows
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn n(&self) -> usize {
        self.datum.n()
    }

    /// `a_<target>_<source>_<g>` with vertex labels.
    pub fn arrow_key(&self, idx: usize) -> String {
        let a = self.quiver.arrows[idx];
        format!("a_{}_{}_{}", self.datum.label(a.target), self.datum.label(a.source), a.copy)
    }

    pub fn arrow_by_key(&self, key: &str) -> Option<usize> {
        (0..self.quiver.arrows.len()).find(|&i| self.arrow_key(i) == key)
    }

    pub fn letter_name(&self, l: Letter) -> String {
        match l {
            Letter::Loop(v) => format!("e{}", self.datum.label(v)),
            Letter::Arrow(idx) => {
                let a = self.quiver.arrows[idx];
                let base = format!("a{}{}", self.datum.label(a.target), self.datum.label(a.source));
                if self.datum.g(a.target, a.source) > 1 {
                    format!("{base}^({})", a.copy)
                } else {
                    base
                }
            }
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut k = 0;
        while k < w.len() {
            let mut run = 1;
            while matches!(w[k], Letter::Loop(_)) && k + run < w.len() && w[k + run] == w[k] {
                run += 1;
            }
            let name = self.letter_name(w[k]);
            parts.push(if run > 1 { format!("{name}^{run}") } else { name });
            k += run;
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    pub fn format_relation(&self, r: &Relation) -> String {
        let mut s = String::new();
        for (k, (c, w)) in r.terms.iter().enumerate() {
            let word = self.format_word(w);
            let coeff = match (k, *c) {
                (0, 1) => String::new(),
                (0, -1) => "-".into(),
                (0, c) => format!("{c} "),
                (_, 1) => " + ".into(),
                (_, -1) => " - ".into(),
                (_, c) if c < 0 => format!(" - {} ", -c),
                (_, c) => format!(" + {c} "),
            };
            s.push_str(&coeff);
            s.push_str(&word);
        }
        if s.is_empty() {
            "0".into()
        } else {
            s
        }
    }

    /// Vertex index for a label, as an error-carrying lookup.
    pub fn vertex(&self, label: &str) -> crate::Result<usize> {
        self.datum.index_of(label).ok_or_else(|| crate::Error::UnknownVertex(label.to_string()))
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relations.iter().map(|r| self.format_relation(r)).collect();
        write!(f, "Π(C={:?}, D={:?}, Ω={:?}) / ({})", self.datum.cartan, self.datum.symmetrizer, self.datum.orientation, rels.join(", "))
    }
}

/// Vertex label as it appears in JSON: a number or a string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Str(String),
}

impl Label {
    fn from_str(s: &str) -> Self {
        s.parse().map(Label::Int).unwrap_or_else(|_| Label::Str(s.to_string()))
    }

    fn text(&self) -> String {
        match self {
            Label::Int(i) => i.to_string(),
            Label::Str(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SymmetrizerSpec {
    Explicit(Vec<i64>),
    Named(String),
}

/// `{"vertices":[...], "cartan":[[...]], "symmetrizer":[...] | "minimal", "orientation":[[i,j],...]}`.
/// A missing orientation means the default one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraConfig {
    pub vertices: Vec<Label>,
    pub cartan: Vec<Vec<i64>>,
    pub symmetrizer: SymmetrizerSpec,
    #[serde(default)]
    pub orientation: Vec<[Label; 2]>,
}

impl AlgebraConfig {
    pub fn to_datum(&self) -> Result<CartanDatum, DatumError> {
        let labels: Vec<String> = self.vertices.iter().map(Label::text).collect();
        let d = match &self.symmetrizer {
            SymmetrizerSpec::Explicit(d) => d.clone(),
            SymmetrizerSpec::Named(s) if s == "minimal" => {
                if self.cartan.len() != labels.len() {
                    return Err(DatumError::Shape("Cartan matrix size differs from vertex count".into()));
                }
                minimal_symmetrizer(&self.cartan).map_err(|e| relabel(e, &labels))?
            }
            SymmetrizerSpec::Named(s) => return Err(DatumError::Shape(format!("unknown symmetrizer {s:?}"))),
        };
        let index = |l: &Label| {
            let t = l.text();
            labels.iter().position(|x| *x == t).ok_or(DatumError::UnknownVertex(t))
        };
        let orientation = if self.orientation.is_empty() && self.cartan.len() == labels.len() {
            default_orientation(&self.cartan)
        } else {
            self.orientation.iter().map(|[a, b]| Ok((index(a)?, index(b)?))).collect::<Result<_, DatumError>>()?
        };
        validate_datum(labels, self.cartan.clone(), d, orientation)
    }
}

fn relabel(e: DatumError, labels: &[String]) -> DatumError {
    let fix = |s: String| s.parse::<usize>().ok().and_then(|i| labels.get(i - 1).cloned()).unwrap_or(s);
    match e {
        DatumError::DiagonalNotTwo(a) => DatumError::DiagonalNotTwo(fix(a)),
        DatumError::PositiveOffDiagonal(a, b) => DatumError::PositiveOffDiagonal(fix(a), fix(b)),
        DatumError::AsymmetricZeroPattern(a, b) => DatumError::AsymmetricZeroPattern(fix(a), fix(b)),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b2_paper() -> CartanDatum {
        CartanDatum::new(vec![vec![2, -2], vec![-1, 2]], vec![1, 2], vec![(0, 1)]).unwrap()
    }

    #[test]
    fn validates_b2() {
        let d = b2_paper();
        assert_eq!(d.g(0, 1), 1);
        assert_eq!(d.f(0, 1), 2);
        assert_eq!(d.f(1, 0), 1);
        assert_eq!(d.sign(0, 1), 1);
        assert_eq!(d.sign(1, 0), -1);
    }

    #[test]
    fn rejects_bad_data() {
        let asym = CartanDatum::new(vec![vec![2, -1], vec![0, 2]], vec![1, 1], vec![(0, 1)]);
        assert_eq!(asym.unwrap_err().code(), "asymmetric-zero-pattern");
        let both = CartanDatum::new(vec![vec![2, -2], vec![-1, 2]], vec![1, 2], vec![(0, 1), (1, 0)]);
        assert_eq!(both.unwrap_err().code(), "orientation-duplicate");
        let diag = CartanDatum::new(vec![vec![1, -1], vec![-1, 2]], vec![1, 1], vec![(0, 1)]);
        assert_eq!(diag.unwrap_err().code(), "diagonal-not-two");
        let pos = CartanDatum::new(vec![vec![2, 1], vec![1, 2]], vec![1, 1], vec![(0, 1)]);
        assert_eq!(pos.unwrap_err().code(), "positive-off-diagonal");
        let unsym = CartanDatum::new(vec![vec![2, -2], vec![-1, 2]], vec![1, 1], vec![(0, 1)]);
        assert_eq!(unsym.unwrap_err().code(), "dc-not-symmetric");
        let zero = CartanDatum::new(vec![vec![2, -1], vec![-1, 2]], vec![0, 0], vec![(0, 1)]);
        assert_eq!(zero.unwrap_err().code(), "non-positive-symmetrizer");
        let missing = CartanDatum::new(vec![vec![2, -1], vec![-1, 2]], vec![1, 1], vec![]);
        assert_eq!(missing.unwrap_err().code(), "orientation-missing");
        let a3 = vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]];
        let cyc = CartanDatum::new(a3, vec![1, 1, 1], vec![(0, 1), (1, 2), (2, 0)]).unwrap_err();
        assert_eq!(cyc.code(), "orientation-cyclic");
        assert!(cyc.to_string().contains("1 -> 2 -> 3 -> 1"));
    }

    #[test]
    fn minimal_symmetrizer_examples() {
        assert_eq!(minimal_symmetrizer(&[vec![2, -1], vec![-1, 2]]).unwrap(), vec![1, 1]);
        assert_eq!(minimal_symmetrizer(&[vec![2, -2], vec![-1, 2]]).unwrap(), vec![1, 2]);
        assert_eq!(minimal_symmetrizer(&[vec![2, -1], vec![-2, 2]]).unwrap(), vec![2, 1]);
        // inconsistent ratios around a triangle
        let bad = vec![vec![2, -1, -1], vec![-2, 2, -1], vec![-1, -1, 2]];
        assert_eq!(minimal_symmetrizer(&bad), Err(DatumError::NotSymmetrizable));
        // two components are normalized separately
        let split = vec![vec![2, -1, 0], vec![-2, 2, 0], vec![0, 0, 2]];
        assert_eq!(minimal_symmetrizer(&split).unwrap(), vec![2, 1, 1]);
    }

    #[test]
    fn b2_relations_match_presentation() {
        let alg = Algebra::new(b2_paper());
        let shown: Vec<String> = alg
            .relations()
            .iter()
            .filter(|r| !matches!(r.kind, RelationKind::Commutativity { .. }))
            .map(|r| alg.format_relation(r))
            .collect();
        assert_eq!(shown, vec!["e1", "e2^2", "a12 a21", "-a21 a12 e2 - e2 a21 a12"]);
    }

    #[test]
    fn symmetric_mesh_has_no_loops() {
        let alg = Algebra::new(CartanDatum::with_minimal(vec![vec![2, -2], vec![-2, 2]]).unwrap());
        assert_eq!(alg.arrows().len(), 4);
        for r in alg.relations() {
            if let RelationKind::Mesh { .. } = r.kind {
                assert!(r.terms.iter().all(|(_, w)| w.iter().all(|l| matches!(l, Letter::Arrow(_)))));
            }
        }
    }

    #[test]
    fn forms_examples() {
        let b2 = CartanDatum::new(vec![vec![2, -1], vec![-2, 2]], vec![2, 1], vec![(0, 1)]).unwrap();
        assert_eq!(b2.symmetric_form(&[1, 0], &[0, 1]).unwrap(), -2);
        let a5 = CartanDatum::with_minimal(
            (0..5usize).map(|i| (0..5usize).map(|j| if i == j { 2 } else if i.abs_diff(j) == 1 { -1 } else { 0 }).collect()).collect(),
        )
        .unwrap();
        let d = [1, 2, 2, 2, 1];
        assert_eq!(a5.euler_forms(&d, &d).unwrap(), EulerForms { alpha: 14, beta: 12, symmetric: 4 });
        assert_eq!(a5.dim_formulas(&d, &d).unwrap(), DimFormulas { dim_rc: 12, dim_hom_t: 14, dim_gl: 14 });
        assert_eq!(a5.euler_forms(&[0; 5], &d).unwrap(), EulerForms { alpha: 0, beta: 0, symmetric: 0 });
        assert!(a5.alpha(&[1, 2], &d).is_err());
    }

    #[test]
    fn config_roundtrip_and_minimal() {
        let json = r#"{"vertices":[1,2],"cartan":[[2,-2],[-1,2]],"symmetrizer":"minimal","orientation":[[1,2]]}"#;
        let cfg: AlgebraConfig = serde_json::from_str(json).unwrap();
        let d = cfg.to_datum().unwrap();
        assert_eq!(d, b2_paper());
        let back: AlgebraConfig = serde_json::from_str(&serde_json::to_string(&d.to_config()).unwrap()).unwrap();
        assert_eq!(back.to_datum().unwrap(), d);
    }
}
