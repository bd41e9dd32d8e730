mod common;

use num_rational::BigRational;
use proptest::prelude::*;
use semidual_core::exactlin::{Echelon, Field, Matrix, PrimeField, Rationals};

fn small_matrix(p: u64) -> impl Strategy<Value = (usize, usize, Vec<u64>)> {
    (1usize..7, 1usize..7).prop_flat_map(move |(r, c)| (Just(r), Just(c), proptest::collection::vec(0..p, r * c)))
}

fn to_matrix(f: &PrimeField, r: usize, c: usize, v: &[u64]) -> Matrix<PrimeField> {
    Matrix::from_vec(f, r, c, v.iter().map(|&x| f.from_i64(x as i64)).collect())
}

proptest! {
    #[test]
    fn rank_matches_oracle((r, c, v) in small_matrix(7), p in prop::sample::select(vec![2u64, 3, 7, 32003])) {
        let f = common::gf(p);
        let m = to_matrix(&f, r, c, &v);
        let rows: Vec<Vec<u64>> = v.chunks(c).map(|x| x.to_vec()).collect();
        prop_assert_eq!(m.rank(), common::rank_mod_p(&rows, p));
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn kernel_is_kernel((r, c, v) in small_matrix(32003)) {
        let f = PrimeField::default();
        let m = to_matrix(&f, r, c, &v);
        let k = m.kernel_basis();
        prop_assert_eq!(k.cols() + m.rank(), c);
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(k.rank(), k.cols());
    }

    #[test]
    fn rref_is_idempotent((r, c, v) in small_matrix(5)) {
        let f = common::gf(5);
        let m = to_matrix(&f, r, c, &v);
        let once = m.rref();
        let twice = once.matrix.rref();
        prop_assert_eq!(&once.matrix, &twice.matrix);
        prop_assert_eq!(once.rank, m.rank());
    }

    #[test]
    fn solve_recovers_consistent_systems((r, c, v) in small_matrix(32003), x in proptest::collection::vec(0u64..32003, 6)) {
        let f = PrimeField::default();
        let m = to_matrix(&f, r, c, &v);
        let xs = to_matrix(&f, c, 1, &x[..c]);
        let b = m.mul(&xs);
        let sol = m.solve(&b).expect("consistent by construction");
        prop_assert_eq!(m.mul(&sol), b);
    }

    #[test]
    fn product_rank_bound((r, c, v) in small_matrix(11), w in proptest::collection::vec(0u64..11, 36)) {
        let f = common::gf(11);
        let a = to_matrix(&f, r, c, &v);
        let b = to_matrix(&f, c, 6, &w[..c * 6]);
        prop_assert!(a.mul(&b).rank() <= a.rank().min(b.rank()));
    }

    #[test]
    fn echelon_rank_is_insertion_order_free((r, c, v) in small_matrix(13)) {
        let f = common::gf(13);
        let rows: Vec<Vec<u32>> = v.chunks(c).map(|x| x.iter().map(|&y| y as u32).collect()).collect();
        let mut fwd = Echelon::new(f, c);
        let mut back = Echelon::new(f, c);
        for row in &rows { fwd.insert(row.clone()); }
        for row in rows.iter().rev() { back.insert(row.clone()); }
        prop_assert_eq!(fwd.rank(), back.rank());
        prop_assert!(fwd.rank() <= fwd_rank_bound(&rows).min(r).min(c));
        prop_assert_eq!(fwd.into_reduced(), back.into_reduced());
    }

    #[test]
    fn prime_field_inverse(x in 1u64..32003) {
        let f = PrimeField::default();
        let e = f.from_i64(x as i64);
        let inv = f.inv(&e).unwrap();
        prop_assert!(f.is_one(&f.mul(&e, &inv)));
    }
}

fn fwd_rank_bound(rows: &[Vec<u32>]) -> usize {
    rows.iter().filter(|r| r.iter().any(|&x| x != 0)).count()
}

#[test]
fn rationals_solve_and_parse() {
    let q = Rationals;
    let m = Matrix::from_i64(&q, &[&[2, 1], &[1, 3]]);
    let b = Matrix::from_i64(&q, &[&[1], &[2]]);
    let x = m.solve(&b).unwrap();
    assert_eq!(x.get(0, 0), &BigRational::new(1.into(), 5.into()));
    assert_eq!(x.get(1, 0), &BigRational::new(3.into(), 5.into()));
    assert_eq!(q.parse("-3/6").unwrap(), BigRational::new((-1).into(), 2.into()));
    assert!(q.parse("x").is_err());
}

#[test]
fn field_errors() {
    assert!(PrimeField::new(1).is_err());
    assert!(PrimeField::new(15).is_err());
    assert!(PrimeField::new(1 << 31).is_err());
    let f = PrimeField::new(7).unwrap();
    assert_eq!(f.parse("-1").unwrap(), 6);
    assert_eq!(f.parse("3/2").unwrap(), 5);
    assert!(f.inv(&0).is_none());
}
