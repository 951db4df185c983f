//! Exact dense linear algebra over Q and F_p.

mod echelon;
mod mat;
mod scalar;

pub use echelon::Echelon;
pub use mat::{kernel_basis, quotient_dim, rank, rank_residues, rref_residues, solve, Mat};
pub use scalar::{Field, Scalar};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimError { expected: usize, found: usize },
    #[error("subspace is not contained in the ambient span")]
    Containment,
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("{0} is not invertible in the field")]
    NotInvertible(String),
}

/// y += a * x
pub fn axpy(y: &mut [Scalar], a: &Scalar, x: &[Scalar]) {
    if a.is_zero() {
        return;
    }
    for (u, v) in y.iter_mut().zip(x) {
        if !v.is_zero() {
            *u += &(a * v);
        }
    }
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn small_mat() -> impl Strategy<Value = (Field, Mat)> {
        (1usize..5, 1usize..6, prop_oneof![Just(0u64), Just(2u64), Just(5u64)]).prop_flat_map(|(r, c, p)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |xs| {
                let f = if p == 0 { Field::Rationals } else { Field::prime(p).unwrap() };
                let rows = xs.chunks(c).map(|ch| ch.iter().map(|&x| f.from_i64(x)).collect()).collect();
                (f, Mat::from_rows(f, c, rows))
            })
        })
    }

    proptest! {
        #[test]
        fn rank_transpose((_, m) in small_mat()) {
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }

        #[test]
        fn kernel_width((_, m) in small_mat()) {
            let k = kernel_basis(&m);
            prop_assert_eq!(k.cols() + rank(&m), m.cols());
            prop_assert!(m.mul(&k).is_zero());
        }

        #[test]
        fn solve_satisfies((f, m) in small_mat(), seed in 0i64..50) {
            let x0 = Mat::from_rows(f, 1, (0..m.cols()).map(|i| vec![f.from_i64((seed + i as i64) % 7 - 3)]).collect());
            let b = m.mul(&x0);
            let x = solve(&m, &b).unwrap().unwrap();
            prop_assert_eq!(m.mul(&x), b);
        }
    }
}
