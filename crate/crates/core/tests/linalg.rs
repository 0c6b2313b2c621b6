use num_bigint::BigInt;
use num_rational::BigRational;
use preproj_core::linalg::{charpoly, rank_in, span_intersection, span_sum, FieldMode, Mat, Rational};
use proptest::prelude::*;

/// Fraction-free elimination over i128: returns (rank, determinant when square).
fn bareiss(rows: &[Vec<i64>]) -> (usize, i128) {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let (n, m) = (a.len(), a.first().map_or(0, Vec::len));
    let mut prev = 1i128;
    let mut rank = 0;
    let mut sign = 1i128;
    for col in 0..m {
        let Some(p) = (rank..n).find(|&r| a[r][col] != 0) else { continue };
        if p != rank {
            a.swap(p, rank);
            sign = -sign;
        }
        for r in rank + 1..n {
            for c in col + 1..m {
                a[r][c] = (a[r][c] * a[rank][col] - a[r][col] * a[rank][c]) / prev;
            }
            a[r][col] = 0;
        }
        prev = a[rank][col];
        rank += 1;
        if rank == n {
            break;
        }
    }
    let det = if n == m && rank == n { sign * a[n - 1][n - 1] } else { 0 };
    (rank, det)
}

fn rank_mod(rows: &[Vec<i64>], p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| x.rem_euclid(p)).collect()).collect();
    let m = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..m {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][col] != 0) else { continue };
        a.swap(piv, rank);
        let inv = (1..p).find(|&x| x * a[rank][col] % p == 1).unwrap();
        for r in 0..a.len() {
            if r != rank && a[r][col] != 0 {
                let f = a[r][col] * inv % p;
                for c in 0..m {
                    a[r][c] = (a[r][c] - f * a[rank][c]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn to_mat(rows: &[Vec<i64>]) -> Mat {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Mat::from_i64(&refs)
}

fn int_matrix(max_dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-4i64..=4, c), r))
}

fn square(max_dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-4i64..=4, n), n))
}

fn big(x: &Rational) -> BigRational {
    x.to_big()
}

proptest! {
    #[test]
    fn rank_matches_bareiss(rows in int_matrix(6)) {
        let a = to_mat(&rows);
        prop_assert_eq!(a.rank(), bareiss(&rows).0);
        prop_assert_eq!(a.transpose().rank(), a.rank());
    }

    #[test]
    fn kernel_is_annihilated_and_complementary(rows in int_matrix(6)) {
        let a = to_mat(&rows);
        let k = a.kernel();
        prop_assert!(a.mul(&k).is_zero());
        prop_assert_eq!(k.rank(), k.cols());
        prop_assert_eq!(a.rank() + k.cols(), a.cols());
    }

    #[test]
    fn invertibility_matches_determinant(rows in square(5)) {
        let a = to_mat(&rows);
        let (_, det) = bareiss(&rows);
        prop_assert_eq!(a.is_invertible(), det != 0);
        if let Some(inv) = a.inverse() {
            prop_assert_eq!(inv.mul(&a), Mat::identity(a.rows()));
        }
    }

    #[test]
    fn charpoly_constant_term_and_cayley_hamilton(rows in square(5)) {
        let a = to_mat(&rows);
        let p = charpoly(&a);
        let n = a.rows();
        prop_assert_eq!(p.degree(), n);
        prop_assert!(p.eval_mat(&a).is_zero());
        let (_, det) = bareiss(&rows);
        let sign = if n.is_multiple_of(2) { 1 } else { -1 };
        prop_assert_eq!(p.coeffs()[0].clone(), Rational::from_int((sign * det) as i64));
    }

    #[test]
    fn solve_recovers_consistent_right_hand_sides(rows in int_matrix(5), x in prop::collection::vec(-5i64..=5, 5)) {
        let a = to_mat(&rows);
        let x: Vec<Rational> = x[..a.cols()].iter().map(|&v| Rational::from_int(v)).collect();
        let b = a.mul_vec(&x);
        let y = a.solve(&b).expect("consistent system");
        prop_assert_eq!(a.mul_vec(&y), b);
    }

    #[test]
    fn prime_rank_matches_modular_elimination(rows in int_matrix(6)) {
        let a = to_mat(&rows);
        let q = rank_in(&a, FieldMode::Rational).unwrap();
        let p = rank_in(&a, "fp:7".parse().unwrap()).unwrap();
        prop_assert_eq!(p, rank_mod(&rows, 7));
        prop_assert!(p <= q);
    }

    #[test]
    fn intersection_dimension_formula(u in int_matrix(4), w in int_matrix(4)) {
        let u = to_mat(&u).transpose();
        let w = to_mat(&w).transpose();
        prop_assume!(u.rows() == w.rows());
        let i = span_intersection(&u, &w);
        let s = span_sum(&u, &w);
        prop_assert_eq!(i.rank() + s.rank(), u.rank() + w.rank());
        prop_assert_eq!(span_sum(&u, &i).rank(), u.rank());
        prop_assert_eq!(span_sum(&w, &i).rank(), w.rank());
    }

    #[test]
    fn arithmetic_agrees_with_bigrational(a in -1_000_000i64..1_000_000, b in 1i64..1000, c in -1_000_000i64..1_000_000, d in 1i64..1000) {
        let x = Rational::from_frac(a, b);
        let y = Rational::from_frac(c, d);
        let bx = BigRational::new(BigInt::from(a), BigInt::from(b));
        let by = BigRational::new(BigInt::from(c), BigInt::from(d));
        prop_assert_eq!(big(&(&x + &y)), &bx + &by);
        prop_assert_eq!(big(&(&x - &y)), &bx - &by);
        prop_assert_eq!(big(&(&x * &y)), &bx * &by);
        if c != 0 {
            prop_assert_eq!(big(&(&x / &y)), &bx / &by);
        }
        prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
    }
}

#[test]
fn products_overflowing_i64_stay_exact() {
    let x = Rational::from_int(i64::MAX);
    let sq = &x * &x;
    let expected = BigInt::from(i64::MAX) * BigInt::from(i64::MAX);
    assert_eq!(sq.numer(), expected);
    assert_eq!(&sq / &x, x);
}

#[test]
fn field_mode_parsing() {
    assert_eq!("q".parse::<FieldMode>().unwrap(), FieldMode::Rational);
    assert_eq!("fp".parse::<FieldMode>().unwrap(), FieldMode::Prime(32003));
    assert_eq!("fp:5".parse::<FieldMode>().unwrap(), FieldMode::Prime(5));
    assert!("fp:6".parse::<FieldMode>().is_err());
    assert!("r".parse::<FieldMode>().is_err());
}
