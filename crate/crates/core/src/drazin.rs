//! Drazin inverse, index and spectral idempotent, together with the three
//! transfer rules used by the block-matrix chains: Cline's formula, the
//! commuting-product rule and the additive rule for `PQ = 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// The Drazin inverse `a_d` of a square matrix `a`, its index and the
/// spectral idempotent `a_pi = I - a a_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DrazinResult {
    pub a_d: Matrix,
    pub index: usize,
    pub a_pi: Matrix,
}

/// Computes the Drazin inverse by full-rank-factorization recursion.
///
/// With `a = BC` a full-rank factorization, `CB` is strictly smaller than
/// `a` (or `a` is already invertible), and Cline's formula lifts its inverse
/// back as `a^d = B ((CB)^d)^2 C`. The recursion bottoms out at an
/// invertible or zero matrix, so its depth is at most `n`.
pub fn drazin_inverse(a: &Matrix) -> Result<DrazinResult> {
    let n = a.require_square("drazin inverse")?;
    let a_d = drazin_recursive(a)?;
    let a_pi = &Matrix::identity(n) - &(a * &a_d);
    Ok(DrazinResult {
        a_d,
        index: index(a)?,
        a_pi,
    })
}

fn drazin_recursive(a: &Matrix) -> Result<Matrix> {
    let n = a.rows();
    if a.is_zero() {
        return Ok(Matrix::zero(n));
    }
    if let Some(inv) = a.try_inverse()? {
        return Ok(inv);
    }
    let (b, c) = a
        .full_rank_factorize()
        .expect("nonzero matrix has a full-rank factorization");
    let inner = drazin_recursive(&(&c * &b))?;
    Ok(&(&b * &(&inner * &inner)) * &c)
}

/// Least `k >= 0` with `rank(a^k) = rank(a^(k+1))`.
pub fn index(a: &Matrix) -> Result<usize> {
    let n = a.require_square("index")?;
    let mut power = Matrix::identity(n);
    let mut rank = n;
    for k in 0..=n {
        power = &power * a;
        let next = power.rank();
        if next == rank {
            return Ok(k);
        }
        rank = next;
    }
    unreachable!("ranks of powers stabilize within n steps")
}

/// Per-axiom breakdown of the three defining identities of `b = a^d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DrazinAxioms {
    /// `ab = ba`
    pub commutes: bool,
    /// `b = bab`
    pub reflexive: bool,
    /// Nilpotency exponent of `a - a^2 b`, if it is nilpotent.
    pub residual_nilpotency: Option<usize>,
}

impl DrazinAxioms {
    pub fn holds(&self) -> bool {
        self.commutes && self.reflexive && self.residual_nilpotency.is_some()
    }
}

pub fn verify_drazin_axioms(a: &Matrix, b: &Matrix) -> Result<DrazinAxioms> {
    a.require_same_square(b, "drazin axioms")?;
    let ab = a * b;
    let residual = a - &(a * &ab);
    Ok(DrazinAxioms {
        commutes: ab == b * a,
        reflexive: &(b * &ab) == b,
        residual_nilpotency: residual.nilpotency_index()?,
    })
}

/// Cline's formula: `(ba)^d = b ((ab)^d)^2 a`, with `(ab)^d` computed directly.
pub fn cline_transfer(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.require_same_square(b, "cline transfer")?;
    let ab_d = drazin_inverse(&(a * b))?.a_d;
    Ok(cline_lift(a, b, &ab_d))
}

/// `b (ab_d)^2 a`, i.e. `(ba)^d` from a known `(ab)^d`. Factors may be
/// rectangular as long as both products are square.
pub fn cline_lift(a: &Matrix, b: &Matrix, ab_d: &Matrix) -> Matrix {
    &(b * &(ab_d * ab_d)) * a
}

/// `(ab)^d = a^d b^d` for commuting `a`, `b`.
pub fn commuting_product_drazin(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.require_same_square(b, "commuting product")?;
    if !a.commutes(b)? {
        return Err(Error::hypothesis("commuting product requires ab = ba"));
    }
    let a_d = drazin_inverse(a)?.a_d;
    let b_d = drazin_inverse(b)?.a_d;
    // a^d is a polynomial in a, hence it commutes with b as well.
    if a.express_as_polynomial(&a_d)?.is_none() {
        return Err(Error::Certificate("a^d is not a polynomial in a".into()));
    }
    if !a_d.commutes(b)? {
        return Err(Error::Certificate("a^d b = b a^d".into()));
    }
    Ok(commuting_product_lift(&a_d, &b_d))
}

/// `a^d b^d`, the Drazin inverse of `ab` when `ab = ba`.
pub fn commuting_product_lift(a_d: &Matrix, b_d: &Matrix) -> Matrix {
    a_d * b_d
}

/// Drazin inverse of `p + q` when `pq = 0`:
///
/// ```text
/// (p+q)^d = sum_i (q^d)^(i+1) p^i p^pi + sum_i q^pi q^i (p^d)^(i+1)
/// ```
pub fn additive_pq_zero(p: &Matrix, q: &Matrix) -> Result<Matrix> {
    p.require_same_square(q, "additive rule")?;
    if !(p * q).is_zero() {
        return Err(Error::hypothesis("additive rule requires pq = 0"));
    }
    let p_d = drazin_inverse(p)?.a_d;
    let q_d = drazin_inverse(q)?.a_d;
    Ok(additive_pq_zero_lift(p, &p_d, q, &q_d))
}

/// The additive formula with `p^d` and `q^d` supplied by the caller. Both
/// sums run to `n`, which bounds the indices of `p` and `q`.
pub fn additive_pq_zero_lift(p: &Matrix, p_d: &Matrix, q: &Matrix, q_d: &Matrix) -> Matrix {
    let n = p.rows();
    let id = Matrix::identity(n);
    let p_pi = &id - &(p * p_d);
    let q_pi = &id - &(q * q_d);

    let mut total = Matrix::zero(n);
    // (q^d)^(i+1) p^i p^pi
    let mut left = q_d.clone();
    let mut right = p_pi.clone();
    for _ in 0..=n {
        if left.is_zero() || right.is_zero() {
            break;
        }
        total = &total + &(&left * &right);
        left = &left * q_d;
        right = p * &right;
    }
    // q^pi q^i (p^d)^(i+1)
    let mut left = q_pi;
    let mut right = p_d.clone();
    for _ in 0..=n {
        if left.is_zero() || right.is_zero() {
            break;
        }
        total = &total + &(&left * &right);
        left = &left * q;
        right = &right * p_d;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::GaussianRational;
    use proptest::prelude::*;

    fn m(rows: &[[&str; 2]]) -> Matrix {
        Matrix::from_literals(rows)
    }

    #[test]
    fn nilpotent_jordan_block() {
        let r = drazin_inverse(&Matrix::from_int_rows(&[[0, 1], [0, 0]])).unwrap();
        assert!(r.a_d.is_zero());
        assert_eq!(r.index, 2);
        assert_eq!(r.a_pi, Matrix::identity(2));
    }

    #[test]
    fn invertible_has_index_zero() {
        let r = drazin_inverse(&Matrix::diag_ints(&[2, 3])).unwrap();
        assert_eq!(r.a_d, m(&[["1/2", "0"], ["0", "1/3"]]));
        assert_eq!(r.index, 0);
        assert!(r.a_pi.is_zero());
    }

    #[test]
    fn rank_one_example_matches_eigendecomposition() {
        // Oracle: a = S diag(2, 0) S^-1 with eigenvectors (1,0), (1,-2), so
        // a^d = S diag(1/2, 0) S^-1.
        let a = Matrix::from_int_rows(&[[2, 1], [0, 0]]);
        let s = Matrix::from_int_rows(&[[1, 1], [0, -2]]);
        let s_inv = m(&[["1", "1/2"], ["0", "-1/2"]]);
        assert!((&s * &s_inv).is_identity());
        assert_eq!(&(&s * &Matrix::diag_ints(&[2, 0])) * &s_inv, a);
        let oracle = &(&s * &Matrix::diag(&[GaussianRational::from_ratio(1, 2), 0.into()])) * &s_inv;
        assert_eq!(oracle, m(&[["1/2", "1/4"], ["0", "0"]]));

        let r = drazin_inverse(&a).unwrap();
        assert_eq!(r.a_d, oracle);
        assert_eq!(r.index, 1);
        assert_eq!(r.a_pi, m(&[["0", "-1/2"], ["0", "1"]]));
    }

    #[test]
    fn index_conventions() {
        assert_eq!(index(&Matrix::zero(1)).unwrap(), 1);
        assert_eq!(index(&Matrix::identity(3)).unwrap(), 0);
        let mut j = Matrix::zero(4);
        for i in 0..3 {
            j.set(i, i + 1, 1.into());
        }
        assert_eq!(index(&j).unwrap(), 4);
    }

    #[test]
    fn non_square_is_a_shape_error() {
        assert!(matches!(drazin_inverse(&Matrix::zeros(2, 3)), Err(Error::Shape { .. })));
    }

    #[test]
    fn axiom_breakdown() {
        let a = Matrix::diag_ints(&[2, 0]);
        let v = verify_drazin_axioms(&a, &Matrix::zero(2)).unwrap();
        assert!(v.commutes && v.reflexive);
        assert_eq!(v.residual_nilpotency, None);
        assert!(!v.holds());

        let e = Matrix::from_int_rows(&[[1, 1], [0, 0]]);
        assert!(verify_drazin_axioms(&e, &e).unwrap().holds());
        let x = Matrix::from_literals(&[["1/2", "i"], ["3", "0"]]);
        assert!(verify_drazin_axioms(&x, &drazin_inverse(&x).unwrap().a_d).unwrap().holds());
    }

    #[test]
    fn cline_examples() {
        let a = Matrix::from_int_rows(&[[0, 1], [0, 0]]);
        let b = Matrix::from_int_rows(&[[0, 0], [1, 0]]);
        // ab = diag(1,0) and ba = diag(0,1) are idempotent.
        assert_eq!(cline_transfer(&a, &b).unwrap(), Matrix::diag_ints(&[0, 1]));

        let x = Matrix::from_int_rows(&[[2, 1], [0, 0]]);
        let x_d = drazin_inverse(&x).unwrap().a_d;
        assert_eq!(cline_transfer(&x, &Matrix::identity(2)).unwrap(), x_d);
        // (a^d a)^d = a a^d, since a^d a is idempotent.
        let oracle = drazin_inverse(&(&x_d * &x)).unwrap().a_d;
        assert_eq!(oracle, &x * &x_d);
        assert_eq!(cline_transfer(&x, &x_d).unwrap(), oracle);
    }

    #[test]
    fn commuting_product_examples() {
        let got = commuting_product_drazin(&Matrix::diag_ints(&[2, 0]), &Matrix::diag_ints(&[3, 5])).unwrap();
        assert_eq!(got, Matrix::diag(&[GaussianRational::from_ratio(1, 6), 0.into()]));
        let a = Matrix::from_literals(&[["1", "2"], ["0", "0"]]);
        assert_eq!(
            commuting_product_drazin(&a, &Matrix::identity(2)).unwrap(),
            drazin_inverse(&a).unwrap().a_d
        );
        let n = Matrix::from_int_rows(&[[0, 1], [0, 0]]);
        assert!(commuting_product_drazin(&n, &n).unwrap().is_zero());
        let err = commuting_product_drazin(&n, &n.transpose()).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
    }

    #[test]
    fn additive_worked_pair() {
        let p = Matrix::from_int_rows(&[[1, 0], [0, 0]]);
        let q = Matrix::from_int_rows(&[[0, 0], [1, 0]]);
        let expected = Matrix::from_int_rows(&[[1, 0], [1, 0]]);
        // p + q is idempotent, so it is its own Drazin inverse.
        assert_eq!(drazin_inverse(&(&p + &q)).unwrap().a_d, expected);
        assert_eq!(additive_pq_zero(&p, &q).unwrap(), expected);
        // The swapped orientation has qp != 0 and is rejected.
        assert!(matches!(additive_pq_zero(&q, &p), Err(Error::Hypothesis(_))));

        let a = Matrix::from_int_rows(&[[2, 1], [0, 0]]);
        let a_d = drazin_inverse(&a).unwrap().a_d;
        assert_eq!(additive_pq_zero(&a, &Matrix::zero(2)).unwrap(), a_d);
        assert_eq!(additive_pq_zero(&Matrix::zero(2), &a).unwrap(), a_d);
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec((-2i64..=2, prop::bool::weighted(0.4)), n * n).prop_map(move |v| {
            let data = v
                .into_iter()
                .map(|(x, zero)| if zero { GaussianRational::default() } else { x.into() })
                .collect();
            Matrix::new(n, n, data).unwrap()
        })
    }

    fn pair(max: usize) -> impl Strategy<Value = (Matrix, Matrix)> {
        (1usize..=max).prop_flat_map(|n| (small_matrix(n), small_matrix(n)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn defining_identities(a in (1usize..=4).prop_flat_map(small_matrix)) {
            let r = drazin_inverse(&a).unwrap();
            prop_assert!(verify_drazin_axioms(&a, &r.a_d).unwrap().holds());
            prop_assert!(r.a_pi.is_idempotent());
            prop_assert!(r.a_pi.commutes(&a).unwrap());
            prop_assert!((&a * &r.a_pi).is_nilpotent().unwrap());
            prop_assert!((&a + &r.a_pi).is_invertible().unwrap());
            let k = r.index as u32;
            prop_assert_eq!(&a.pow(k + 1).unwrap() * &r.a_d, a.pow(k).unwrap());
            // (a^d)^d = a^2 a^d
            prop_assert_eq!(drazin_inverse(&r.a_d).unwrap().a_d, &(&a * &a) * &r.a_d);
            prop_assert!(a.express_as_polynomial(&r.a_d).unwrap().is_some());
        }

        #[test]
        fn cline_matches_direct((a, b) in pair(4)) {
            prop_assert_eq!(cline_transfer(&a, &b).unwrap(), drazin_inverse(&(&b * &a)).unwrap().a_d);
        }

        #[test]
        fn additive_matches_direct((p, k) in pair(4)) {
            // Columns of q drawn from ker(p) give pq = 0.
            let ker = p.rref().kernel_basis;
            let q = if ker.is_empty() {
                Matrix::zero(p.rows())
            } else {
                let basis = Matrix::from_columns(p.rows(), &ker);
                &basis * &k.submatrix(0, 0, ker.len(), p.rows())
            };
            prop_assert!((&p * &q).is_zero());
            prop_assert_eq!(additive_pq_zero(&p, &q).unwrap(), drazin_inverse(&(&p + &q)).unwrap().a_d);
        }

        #[test]
        fn commuting_product_matches_direct(a in (1usize..=3).prop_flat_map(small_matrix), c in proptest::collection::vec(-2i64..=2, 1..4)) {
            let b = a.eval_polynomial(&c.into_iter().map(GaussianRational::from).collect::<Vec<_>>());
            prop_assert_eq!(commuting_product_drazin(&a, &b).unwrap(), drazin_inverse(&(&a * &b)).unwrap().a_d);
        }
    }
}
