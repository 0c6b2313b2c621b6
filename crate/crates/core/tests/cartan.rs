use preproj_core::cartan::{
    default_orientation, minimal_symmetrizer, Algebra, AlgebraConfig, CartanDatum, Letter, RelationKind,
};
use proptest::prelude::*;

#[derive(Clone, Debug)]
struct Raw {
    cartan: Vec<Vec<i64>>,
    sym: Vec<i64>,
    order: Vec<usize>,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// Connected symmetrizable data: a random spanning tree plus extra edges,
/// with `d_i c_ij = -k lcm(d_i, d_j)`.
fn raw_datum() -> impl Strategy<Value = Raw> {
    (2usize..=4).prop_flat_map(|n| {
        (
            prop::collection::vec(1i64..=3, n),
            prop::collection::vec(0usize..n, n),
            prop::collection::vec(prop::bool::ANY, n * n),
            prop::collection::vec(1i64..=2, n * n),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        )
            .prop_map(move |(sym, parent, extra, mult, order)| {
                let mut c = vec![vec![0i64; n]; n];
                for (i, row) in c.iter_mut().enumerate() {
                    row[i] = 2;
                }
                let mut link = |i: usize, j: usize, k: i64| {
                    let l = sym[i] * sym[j] / gcd(sym[i], sym[j]) * k;
                    c[i][j] = -l / sym[i];
                    c[j][i] = -l / sym[j];
                };
                for v in 1..n {
                    link(parent[v] % v, v, mult[v]);
                }
                for i in 0..n {
                    for j in i + 1..n {
                        if extra[i * n + j] {
                            link(i, j, mult[i * n + j]);
                        }
                    }
                }
                Raw { cartan: c, sym: sym.clone(), order }
            })
    })
}

fn orient(c: &[Vec<i64>], order: &[usize]) -> Vec<(usize, usize)> {
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

fn brute_force_symmetrizer(c: &[Vec<i64>]) -> Vec<i64> {
    let n = c.len();
    let mut best: Option<Vec<i64>> = None;
    let mut d = vec![1i64; n];
    loop {
        let ok = (0..n).all(|i| (0..n).all(|j| d[i] * c[i][j] == d[j] * c[j][i]));
        if ok && best.as_ref().is_none_or(|b| d.iter().sum::<i64>() < b.iter().sum()) {
            best = Some(d.clone());
        }
        let mut k = 0;
        while k < n && d[k] == 6 {
            d[k] = 1;
            k += 1;
        }
        if k == n {
            break;
        }
        d[k] += 1;
    }
    best.expect("some symmetrizer up to 6")
}

fn alpha_oracle(c: &[i64], d: &[i64], e: &[i64]) -> i64 {
    (0..c.len()).map(|i| c[i] * d[i] * e[i]).sum()
}

fn beta_oracle(cartan: &[Vec<i64>], c: &[i64], omega: &[(usize, usize)], d: &[i64], e: &[i64]) -> i64 {
    omega.iter().map(|&(i, j)| c[i] * cartan[i][j].abs() * d[i] * e[j]).sum()
}

proptest! {
    #[test]
    fn minimal_symmetrizer_matches_brute_force(raw in raw_datum()) {
        prop_assert_eq!(minimal_symmetrizer(&raw.cartan).unwrap(), brute_force_symmetrizer(&raw.cartan));
    }

    #[test]
    fn forms_match_definitions(raw in raw_datum(), d in prop::collection::vec(0i64..4, 4), e in prop::collection::vec(0i64..4, 4)) {
        let n = raw.cartan.len();
        let (d, e) = (&d[..n], &e[..n]);
        let omega = orient(&raw.cartan, &raw.order);
        let datum = CartanDatum::new(raw.cartan.clone(), raw.sym.clone(), omega.clone()).unwrap();
        let a = alpha_oracle(&raw.sym, d, e);
        let b = beta_oracle(&raw.cartan, &raw.sym, &omega, d, e);
        let b_rev = beta_oracle(&raw.cartan, &raw.sym, &omega, e, d);
        prop_assert_eq!(datum.alpha(d, e).unwrap(), a);
        prop_assert_eq!(datum.beta(d, e).unwrap(), b);
        prop_assert_eq!(datum.symmetric_form(d, e).unwrap(), a + alpha_oracle(&raw.sym, e, d) - b - b_rev);
        // (d, d) is the quadratic form of DC
        let dc: i64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| d[i] * raw.sym[i] * raw.cartan[i][j] * d[j]).sum();
        prop_assert_eq!(datum.symmetric_form(d, d).unwrap(), dc);
        let f = datum.dim_formulas(d, e).unwrap();
        prop_assert_eq!(f.dim_hom_t, a);
        prop_assert_eq!(f.dim_gl, alpha_oracle(&raw.sym, d, d));
        prop_assert_eq!(f.dim_rc, datum.beta(d, d).unwrap());
    }

    #[test]
    fn beta_diagonal_is_orientation_independent(raw in raw_datum(), other in Just(()).prop_flat_map(|_| Just((0..4).collect::<Vec<usize>>()).prop_shuffle()), d in prop::collection::vec(0i64..4, 4)) {
        let n = raw.cartan.len();
        let d = &d[..n];
        let order2: Vec<usize> = other.into_iter().filter(|&x| x < n).collect();
        let a = CartanDatum::new(raw.cartan.clone(), raw.sym.clone(), orient(&raw.cartan, &raw.order)).unwrap();
        let b = a.with_orientation(orient(&raw.cartan, &order2)).unwrap();
        prop_assert_eq!(a.beta(d, d).unwrap(), b.beta(d, d).unwrap());
    }

    #[test]
    fn quiver_and_relation_shapes(raw in raw_datum()) {
        let datum = CartanDatum::new(raw.cartan.clone(), raw.sym.clone(), orient(&raw.cartan, &raw.order)).unwrap();
        let alg = Algebra::new(datum.clone());
        let n = raw.cartan.len();
        let expected_arrows: usize = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| i != j && raw.cartan[i][j] != 0)
            .map(|(i, j)| gcd(raw.cartan[i][j], raw.cartan[j][i]) as usize).sum();
        prop_assert_eq!(alg.arrows().len(), expected_arrows);
        let mut counts = [0usize; 3];
        for r in alg.relations() {
            match r.kind {
                RelationKind::Nilpotency { vertex } => {
                    counts[0] += 1;
                    prop_assert_eq!(r.terms[0].1.len(), raw.sym[vertex] as usize);
                }
                RelationKind::Commutativity { arrow } => {
                    counts[1] += 1;
                    let a = alg.arrows()[arrow];
                    prop_assert_eq!((r.target, r.source), (a.target, a.source));
                }
                RelationKind::Mesh { vertex } => {
                    counts[2] += 1;
                    // each term is ε^f α α' ε^(f_ji - 1 - f), of loop length f_ji - 1
                    for (coeff, w) in &r.terms {
                        prop_assert_eq!(coeff.abs(), 1);
                        let arrows: Vec<usize> = w.iter().filter_map(|l| if let Letter::Arrow(k) = l { Some(*k) } else { None }).collect();
                        prop_assert_eq!(arrows.len(), 2);
                        let j = alg.arrows()[arrows[0]].source;
                        prop_assert_eq!(alg.arrows()[arrows[0]].target, vertex);
                        prop_assert_eq!(w.len() - 2, datum.f(j, vertex) - 1);
                        prop_assert_eq!(*coeff, datum.sign(vertex, j));
                    }
                }
            }
        }
        prop_assert_eq!(counts, [n, expected_arrows, n]);
    }
}

#[test]
fn default_orientation_points_up() {
    let c = vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]];
    assert_eq!(default_orientation(&c), vec![(0, 1), (1, 2)]);
}

#[test]
fn config_errors_name_the_problem() {
    let cyclic = r#"{"vertices":[1,2,3],"cartan":[[2,-1,-1],[-1,2,-1],[-1,-1,2]],"symmetrizer":[1,1,1],"orientation":[[1,2],[2,3],[3,1]]}"#;
    let cfg: AlgebraConfig = serde_json::from_str(cyclic).unwrap();
    let err = cfg.to_datum().unwrap_err();
    assert_eq!(err.code(), "orientation-cyclic");
    assert_eq!(err.to_string(), "orientation has a cycle: 1 -> 2 -> 3 -> 1");

    let unknown = r#"{"vertices":[1,2],"cartan":[[2,-1],[-1,2]],"symmetrizer":"minimal","orientation":[[1,7]]}"#;
    let cfg: AlgebraConfig = serde_json::from_str(unknown).unwrap();
    assert_eq!(cfg.to_datum().unwrap_err().code(), "unknown-vertex");

    let unsym = r#"{"vertices":[1,2,3],"cartan":[[2,-1,-1],[-2,2,-1],[-1,-1,2]],"symmetrizer":"minimal"}"#;
    let cfg: AlgebraConfig = serde_json::from_str(unsym).unwrap();
    assert_eq!(cfg.to_datum().unwrap_err().code(), "not-symmetrizable");
}

#[test]
fn scaling_multiplies_nilpotency_degrees() {
    let a2 = CartanDatum::with_minimal(vec![vec![2, -1], vec![-1, 2]]).unwrap();
    let a2x3 = a2.scaled(3).unwrap();
    assert_eq!(a2x3.symmetrizer(), &[3, 3]);
    assert_eq!(a2x3.f(0, 1), 1);
    assert_eq!(Algebra::new(a2x3).arrows().len(), 2);
}
