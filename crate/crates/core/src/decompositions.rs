//! Constructive characterizations of Drazin invertibility.
//!
//! Each operation builds a certificate record and checks every identity the
//! record claims. Forward directions start from `a^d`; converse directions
//! consume an explicit witness and reconstruct `a^d` from it. A failed
//! identity on a caller-supplied witness is a [`Error::Hypothesis`]; a
//! failed identity on something this module constructed is an
//! [`Error::Certificate`].

use num_traits::Zero;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::drazin::drazin_inverse;
use crate::error::{Error, Result};
use crate::exactnum::GaussianRational;
use crate::matrix::Matrix;

/// Named boolean checks, in the order they were made.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Certificates(Vec<(&'static str, bool)>);

impl Certificates {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a check; fails with [`Error::Certificate`] if it does not hold.
    pub fn require(&mut self, name: &'static str, holds: bool) -> Result<()> {
        self.0.push((name, holds));
        if holds {
            Ok(())
        } else {
            Err(Error::Certificate(name.to_string()))
        }
    }

    pub fn extend(&mut self, other: Certificates) {
        self.0.extend(other.0);
    }

    pub fn all_hold(&self) -> bool {
        self.0.iter().all(|(_, ok)| *ok)
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.0.iter().map(|(n, _)| *n)
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.0.iter().find(|(n, _)| *n == name).map(|(_, ok)| *ok)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Serialize for Certificates {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (name, ok) in &self.0 {
            map.serialize_entry(name, ok)?;
        }
        map.end()
    }
}

fn hypothesis(holds: bool, msg: &str) -> Result<()> {
    if holds {
        Ok(())
    } else {
        Err(Error::hypothesis(msg))
    }
}

fn id(n: usize) -> Matrix {
    Matrix::identity(n)
}

/// Outcome of the `a - a^2` nilpotency test.
#[derive(Debug, Clone, Serialize)]
pub struct StronglyDrazinVerdict {
    pub strongly_drazin: bool,
    /// The idempotent with `a - e` nilpotent, when one exists.
    pub e: Option<Matrix>,
    pub certificates: Certificates,
}

/// `a` is an idempotent plus a commuting nilpotent iff `a - a^2` is nilpotent.
pub fn strongly_drazin_check(a: &Matrix) -> Result<StronglyDrazinVerdict> {
    a.require_square("strongly drazin check")?;
    let mut certificates = Certificates::new();
    if !(a - &(a * a)).is_nilpotent()? {
        return Ok(StronglyDrazinVerdict {
            strongly_drazin: false,
            e: None,
            certificates,
        });
    }
    let e = a * &drazin_inverse(a)?.a_d;
    certificates.require("e idempotent", e.is_idempotent())?;
    certificates.require("ea = ae", e.commutes(a)?)?;
    certificates.require("a - e nilpotent", (a - &e).is_nilpotent()?)?;
    Ok(StronglyDrazinVerdict {
        strongly_drazin: true,
        e: Some(e),
        certificates,
    })
}

/// `x` commutes with `a` and `a - a^2 x` is nilpotent.
pub fn is_drazin_witness(a: &Matrix, x: &Matrix) -> Result<bool> {
    a.require_same_square(x, "witness check")?;
    Ok(a.commutes(x)? && (a - &(&(a * a) * x)).is_nilpotent()?)
}

/// Output of [`refine_witness`].
#[derive(Debug, Clone, Serialize)]
pub struct Refinement {
    pub z: Matrix,
    pub e: Matrix,
    pub a_d: Matrix,
    pub certificates: Certificates,
}

/// Turns a commuting witness `x` (with `a - a^2 x` nilpotent) into `a^d`.
///
/// `z = xax` is a better witness, `az` is then strongly Drazin with
/// idempotent part `e = az (az)^d`, `a + 1 - e` is a unit, and
/// `a^d = (a + 1 - e)^{-1} e`.
pub fn refine_witness(a: &Matrix, x: &Matrix) -> Result<Refinement> {
    let n = a.require_same_square(x, "witness refinement")?;
    hypothesis(a.commutes(x)?, "x does not commute with a")?;
    let a2 = a * a;
    hypothesis((a - &(&a2 * x)).is_nilpotent()?, "a - a^2 x is not nilpotent")?;

    let mut c = Certificates::new();
    let z = &(x * a) * x;
    c.require("za = az", z.commutes(a)?)?;
    let res_a = a - &(&a2 * &z);
    c.require("a - a^2 z nilpotent", res_a.is_nilpotent()?)?;
    let res_z = &z - &(&(&z * &z) * a);
    c.require("z - z^2 a nilpotent", res_z.is_nilpotent()?)?;
    let az = a * &z;
    c.require("az - (az)^2 nilpotent", (&az - &(&az * &az)).is_nilpotent()?)?;

    let one = id(n);
    let lhs = &(&(a + &one) - &az) * &(&(&z + &one) - &az);
    let rhs = &(&one + &(&res_a * &(&one - &z))) + &res_z;
    c.require("(a+1-az)(z+1-az) = 1 + (a-a^2z)(1-z) + (z-z^2a)", lhs == rhs)?;

    let e = &az * &drazin_inverse(&az)?.a_d;
    c.require("e idempotent", e.is_idempotent())?;
    c.require("az - e nilpotent", (&az - &e).is_nilpotent()?)?;
    c.require("e is a polynomial in az", az.express_as_polynomial(&e)?.is_some())?;
    c.require("ea = ae", e.commutes(a)?)?;
    let unit = &(a + &one) - &e;
    let unit_inv = unit.try_inverse()?;
    c.require("a + 1 - e invertible", unit_inv.is_some())?;
    c.require("a(1 - e) nilpotent", (a * &(&one - &e)).is_nilpotent()?)?;
    let a_d = &unit_inv.expect("checked above") * &e;
    c.require("a_d = a^d", a_d == drazin_inverse(a)?.a_d)?;
    Ok(Refinement {
        z,
        e,
        a_d,
        certificates: c,
    })
}

/// `p` commuting with `a`, `a + p` a unit and `ap` nilpotent, together with
/// the candidate inverse `b = (a + p)^{-1} (1 - p)`.
#[derive(Debug, Clone, Serialize)]
pub struct QuasipolarCertificate {
    pub p: Matrix,
    pub b: Matrix,
    pub certificates: Certificates,
}

/// With `p` absent the spectral idempotent `a^pi` is used. A supplied `p`
/// need not be idempotent; then `b` is only guaranteed to be a witness.
pub fn quasipolar(a: &Matrix, p: Option<&Matrix>) -> Result<QuasipolarCertificate> {
    let n = a.require_square("quasipolar")?;
    let mut c = Certificates::new();
    let a_d = drazin_inverse(a)?.a_d;
    let (p, sum_inv) = match p {
        Some(p) => {
            a.require_same_square(p, "quasipolar")?;
            hypothesis(p.commutes(a)?, "p does not commute with a")?;
            let inv = (a + p).try_inverse()?;
            hypothesis(inv.is_some(), "a + p is not invertible")?;
            hypothesis((a * p).is_nilpotent()?, "ap is not nilpotent")?;
            (p.clone(), inv.expect("checked above"))
        }
        None => {
            let p = &id(n) - &(a * &a_d);
            c.require("pa = ap", p.commutes(a)?)?;
            let inv = (a + &p).try_inverse()?;
            c.require("a + p invertible", inv.is_some())?;
            c.require("ap nilpotent", (a * &p).is_nilpotent()?)?;
            (p, inv.expect("checked above"))
        }
    };
    let one = id(n);
    let b = &sum_inv * &(&one - &p);
    c.require("ba = ab", b.commutes(a)?)?;
    let residual = a - &(&(a * a) * &b);
    let factored = &(a * &p) * &(&one + &b);
    c.require("a - a^2 b = ap(1 + (a+p)^{-1}(1-p))", residual == factored)?;
    c.require("b is a witness", is_drazin_witness(a, &b)?)?;
    if p.is_idempotent() {
        c.require("b = a^d", b == a_d)?;
    }
    Ok(QuasipolarCertificate { p, b, certificates: c })
}

/// Unit `u` commuting with `a` such that `au` is strongly Drazin.
#[derive(Debug, Clone, Serialize)]
pub struct Scaler {
    pub u: Matrix,
    pub certificates: Certificates,
}

pub fn strongly_drazin_scaler(a: &Matrix) -> Result<Scaler> {
    a.require_square("scaler")?;
    let mut c = Certificates::new();
    let a_pi = drazin_inverse(a)?.a_pi;
    let u = (a + &a_pi).inverse_or("a + a^pi")?;
    c.require("u invertible", u.is_invertible()?)?;
    c.require("ua = au", u.commutes(a)?)?;
    c.require("a - a^2 u nilpotent", (a - &(&(a * a) * &u)).is_nilpotent()?)?;
    let au = a * &u;
    c.require("au - (au)^2 nilpotent", (&au - &(&au * &au)).is_nilpotent()?)?;
    Ok(Scaler { u, certificates: c })
}

/// `a = eu + w` with `e` idempotent, `u` a unit, `w` nilpotent, all commuting.
#[derive(Debug, Clone, Serialize)]
pub struct EuwDecomposition {
    pub e: Matrix,
    pub u: Matrix,
    pub w: Matrix,
    pub certificates: Certificates,
}

pub fn euw_decompose(a: &Matrix) -> Result<EuwDecomposition> {
    let n = a.require_square("euw decomposition")?;
    let one = id(n);
    let e = a * &drazin_inverse(a)?.a_d;
    let f = &one - &e;
    let w = a * &f;
    let u = &(a * &e) + &f;

    let mut c = Certificates::new();
    c.require("e idempotent", e.is_idempotent())?;
    let u_inv = u.try_inverse()?;
    c.require("u invertible", u_inv.is_some())?;
    c.require("w nilpotent", w.is_nilpotent()?)?;
    c.require("eu = ue", e.commutes(&u)?)?;
    c.require("ew = we", e.commutes(&w)?)?;
    c.require("uw = wu", u.commutes(&w)?)?;
    c.require("a = eu + w", &(&e * &u) + &w == *a)?;
    let u_inv = u_inv.expect("checked above");
    c.require("a - a^2 u^{-1} nilpotent", (a - &(&(a * a) * &u_inv)).is_nilpotent()?)?;
    Ok(EuwDecomposition { e, u, w, certificates: c })
}

/// `a = u1 + u2` with both summands units.
#[derive(Debug, Clone, Serialize)]
pub struct TwoUnits {
    pub u1: Matrix,
    pub u2: Matrix,
    pub certificates: Certificates,
}

/// Decomposes `a/2 = eu + w` and returns `(2e - 1)u` and `u(1 + 2u^{-1}w)`.
pub fn two_units(a: &Matrix) -> Result<TwoUnits> {
    let n = a.require_square("two units")?;
    let half = a.scale(&GaussianRational::from_ratio(1, 2));
    let EuwDecomposition { e, u, w, .. } = euw_decompose(&half)?;
    let one = id(n);
    let two = GaussianRational::from(2);
    let reflection = &e.scale(&two) - &one;
    let u_inv = u.inverse_or("u")?;
    let u1 = &reflection * &u;
    let u2 = &u * &(&one + &(&u_inv * &w).scale(&two));

    let mut c = Certificates::new();
    c.require("(2e - 1)^2 = 1", (&reflection * &reflection).is_identity())?;
    c.require("u1 invertible", !u1.determinant()?.is_zero())?;
    c.require("u2 invertible", !u2.determinant()?.is_zero())?;
    c.require("u1 + u2 = a", &u1 + &u2 == *a)?;
    Ok(TwoUnits { u1, u2, certificates: c })
}

/// Corner data for a commuting idempotent `e`: `eae` is a unit of `eAe`
/// and `(1-e)a(1-e)` is nilpotent.
#[derive(Debug, Clone, Serialize)]
pub struct CornerData {
    pub e: Matrix,
    /// Inverse of `eae` inside `eAe`, i.e. `e (eae + 1 - e)^{-1} e`.
    pub corner_inverse: Matrix,
    /// `(eae + 1 - e)^{-1}` in the full algebra.
    pub lifted_inverse: Matrix,
    pub a_d: Matrix,
    pub certificates: Certificates,
}

pub fn corner_characterize(a: &Matrix, e: Option<&Matrix>) -> Result<CornerData> {
    let n = a.require_square("corner characterization")?;
    let one = id(n);
    let mut c = Certificates::new();
    let given = e.is_some();
    let e = match e {
        Some(e) => {
            a.require_same_square(e, "corner characterization")?;
            hypothesis(e.is_idempotent(), "e is not idempotent")?;
            hypothesis(e.commutes(a)?, "e does not commute with a")?;
            e.clone()
        }
        None => {
            let e = a * &drazin_inverse(a)?.a_d;
            c.require("e idempotent", e.is_idempotent())?;
            c.require("ea = ae", e.commutes(a)?)?;
            e
        }
    };
    let f = &one - &e;
    let eae = &(&e * a) * &e;
    let lifted = &(&eae + &one) - &e;
    let lifted_inverse = lifted.try_inverse()?;
    let tail_nilpotent = (&(&f * a) * &f).is_nilpotent()?;
    if given {
        hypothesis(lifted_inverse.is_some(), "eae is not invertible in eAe")?;
        hypothesis(tail_nilpotent, "(1-e)a(1-e) is not nilpotent")?;
    } else {
        c.require("eae + 1 - e invertible", lifted_inverse.is_some())?;
        c.require("(1-e)a(1-e) nilpotent", tail_nilpotent)?;
    }
    let lifted_inverse = lifted_inverse.expect("checked above");
    let corner_inverse = &(&e * &lifted_inverse) * &e;
    c.require("eae * corner_inverse = e", &eae * &corner_inverse == e)?;
    c.require("a = e(eae + 1 - e) + (1-e)a", &(&e * &lifted) + &(&f * a) == *a)?;
    c.require("(1-e)a nilpotent", (&f * a).is_nilpotent()?)?;
    let a_d = &e * &lifted_inverse;
    c.require("a_d = a^d", a_d == drazin_inverse(a)?.a_d)?;
    Ok(CornerData {
        e,
        corner_inverse,
        lifted_inverse,
        a_d,
        certificates: c,
    })
}

/// `C^n = P ⊕ Q` into `a`-invariant subspaces, `a` invertible on `P` and
/// nilpotent on `Q`. Vectors are columns and `a` acts on the left.
#[derive(Debug, Clone, Serialize)]
pub struct Splitting {
    pub basis_p: Vec<Vec<GaussianRational>>,
    pub basis_q: Vec<Vec<GaussianRational>>,
    pub restriction_p: Matrix,
    pub restriction_q: Matrix,
    pub certificates: Certificates,
}

impl Splitting {
    /// `T (R_P ⊕ R_Q) T^{-1}` with `T = [basis_p | basis_q]`.
    pub fn reassemble(&self) -> Result<Matrix> {
        let n = self.basis_p.len() + self.basis_q.len();
        let columns: Vec<_> = self.basis_p.iter().chain(&self.basis_q).cloned().collect();
        let t = Matrix::from_columns(n, &columns);
        let t_inv = t.inverse_or("change of basis")?;
        Ok(&(&t * &Matrix::direct_sum(&self.restriction_p, &self.restriction_q)) * &t_inv)
    }
}

pub fn invariant_splitting(a: &Matrix) -> Result<Splitting> {
    let n = a.require_square("invariant splitting")?;
    let e = a * &drazin_inverse(a)?.a_d;
    let basis_p = e.column_space_basis();
    let basis_q = (&id(n) - &e).column_space_basis();
    let mut c = Certificates::new();
    c.require("dim P + dim Q = n", basis_p.len() + basis_q.len() == n)?;
    let all: Vec<_> = basis_p.iter().chain(&basis_q).cloned().collect();
    c.require("P ⊕ Q = whole space", Matrix::from_columns(n, &all).rank() == n)?;

    let restrict = |basis: &[Vec<GaussianRational>]| -> Result<Option<Matrix>> {
        let b = Matrix::from_columns(n, basis);
        b.solve(&(a * &b))
    };
    let rp = restrict(&basis_p)?;
    c.require("aP ⊆ P", rp.is_some())?;
    let rq = restrict(&basis_q)?;
    c.require("aQ ⊆ Q", rq.is_some())?;
    let restriction_p = rp.expect("checked above");
    let restriction_q = rq.expect("checked above");
    c.require("a|P invertible", restriction_p.is_invertible()?)?;
    c.require("a|Q nilpotent", restriction_q.is_nilpotent()?)?;
    let mut split = Splitting {
        basis_p,
        basis_q,
        restriction_p,
        restriction_q,
        certificates: Certificates::new(),
    };
    c.require("reassembly recovers a", split.reassemble()? == *a)?;
    split.certificates = c;
    Ok(split)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(rows: &[[&str; 2]]) -> Matrix {
        Matrix::from_literals(rows)
    }

    fn col(v: &[i64]) -> Vec<GaussianRational> {
        v.iter().map(|&x| x.into()).collect()
    }

    fn jordan(n: usize) -> Matrix {
        let mut j = Matrix::zero(n);
        for i in 0..n - 1 {
            j.set(i, i + 1, 1.into());
        }
        j
    }

    #[test]
    fn strongly_drazin_examples() {
        let e = Matrix::from_int_rows(&[[1, 1], [0, 0]]);
        let v = strongly_drazin_check(&e).unwrap();
        assert!(v.strongly_drazin);
        assert_eq!(v.e.unwrap(), e);

        let a = Matrix::from_int_rows(&[[1, 1], [0, 1]]);
        assert_eq!(&a - &(&a * &a), Matrix::from_int_rows(&[[0, -1], [0, 0]]));
        let v = strongly_drazin_check(&a).unwrap();
        assert_eq!(v.e.as_ref().unwrap(), &Matrix::identity(2));
        assert_eq!(&a - v.e.as_ref().unwrap(), jordan(2));
        assert!(v.certificates.all_hold());

        assert!(!strongly_drazin_check(&Matrix::diag_ints(&[2, 0])).unwrap().strongly_drazin);
    }

    #[test]
    fn witness_checks() {
        let a = Matrix::diag_ints(&[2, 0]);
        assert!(is_drazin_witness(&a, &m2(&[["1/2", "0"], ["0", "0"]])).unwrap());
        assert!(!is_drazin_witness(&a, &Matrix::zero(2)).unwrap());
        let b = Matrix::from_int_rows(&[[2, 1], [0, 0]]);
        assert!(is_drazin_witness(&b, &m2(&[["1/2", "1/4"], ["0", "0"]])).unwrap());
    }

    #[test]
    fn refine_examples() {
        let a = Matrix::diag_ints(&[2, 0]);
        let r = refine_witness(&a, &m2(&[["1/2", "0"], ["0", "0"]])).unwrap();
        assert_eq!(r.z, m2(&[["1/2", "0"], ["0", "0"]]));
        assert_eq!(r.e, Matrix::diag_ints(&[1, 0]));
        assert_eq!(r.a_d, m2(&[["1/2", "0"], ["0", "0"]]));
        assert!(r.certificates.all_hold());

        let r = refine_witness(&jordan(3), &Matrix::zero(3)).unwrap();
        assert!(r.z.is_zero() && r.e.is_zero() && r.a_d.is_zero());

        let b = Matrix::from_int_rows(&[[2, 1], [0, 0]]);
        let x = m2(&[["1/2", "1/4"], ["0", "0"]]);
        assert_eq!(refine_witness(&b, &x).unwrap().a_d, x);

        // A non-minimal witness: any x = a^d + nilpotent-commuting term works.
        let c = Matrix::direct_sum(&Matrix::diag_ints(&[3]), &jordan(2));
        let x = Matrix::direct_sum(&Matrix::diag(&[GaussianRational::from_ratio(1, 3)]), &Matrix::identity(2));
        let r = refine_witness(&c, &x).unwrap();
        assert_eq!(r.a_d, drazin_inverse(&c).unwrap().a_d);

        let err = refine_witness(&a, &Matrix::zero(2)).unwrap_err();
        assert_eq!(err, Error::Hypothesis("a - a^2 x is not nilpotent".into()));
        let err = refine_witness(&jordan(2), &jordan(2).transpose()).unwrap_err();
        assert_eq!(err, Error::Hypothesis("x does not commute with a".into()));
    }

    #[test]
    fn quasipolar_examples() {
        let a = Matrix::from_int_rows(&[[2, 1], [0, 0]]);
        let q = quasipolar(&a, None).unwrap();
        assert_eq!(q.p, m2(&[["0", "-1/2"], ["0", "1"]]));
        assert!((&a * &q.p).is_zero());
        assert_eq!(q.b, m2(&[["1/2", "1/4"], ["0", "0"]]));
        assert_eq!(q.certificates.get("b = a^d"), Some(true));

        let d = Matrix::diag_ints(&[2, 0]);
        let q = quasipolar(&d, Some(&Matrix::diag_ints(&[0, 1]))).unwrap();
        assert_eq!(q.b, m2(&[["1/2", "0"], ["0", "0"]]));

        let u = Matrix::from_int_rows(&[[1, 2], [3, 4]]);
        let q = quasipolar(&u, Some(&Matrix::zero(2))).unwrap();
        assert_eq!(q.b, u.try_inverse().unwrap().unwrap());
    }

    #[test]
    fn quasipolar_non_idempotent_p() {
        // p = 1 + N on a nilpotent a = N: commutes, a + p = 1 + 2N is a unit,
        // ap = N + N^2 is nilpotent, but p is not idempotent.
        let n = jordan(3);
        let p = &Matrix::identity(3) + &n;
        let q = quasipolar(&n, Some(&p)).unwrap();
        assert!(q.certificates.get("b = a^d").is_none());
        assert!(is_drazin_witness(&n, &q.b).unwrap());
    }

    #[test]
    fn quasipolar_hypothesis_errors() {
        let a = Matrix::diag_ints(&[2, 0]);
        let err = |p: Matrix| quasipolar(&a, Some(&p)).unwrap_err();
        assert_eq!(err(jordan(2)), Error::Hypothesis("p does not commute with a".into()));
        assert_eq!(err(Matrix::diag_ints(&[-2, 0])), Error::Hypothesis("a + p is not invertible".into()));
        assert_eq!(err(Matrix::diag_ints(&[1, 1])), Error::Hypothesis("ap is not nilpotent".into()));
    }

    #[test]
    fn scaler_examples() {
        let s = strongly_drazin_scaler(&Matrix::diag_ints(&[2, 0])).unwrap();
        assert_eq!(s.u, m2(&[["1/2", "0"], ["0", "1"]]));
        assert_eq!(&Matrix::diag_ints(&[2, 0]) * &s.u, Matrix::diag_ints(&[1, 0]));

        let s = strongly_drazin_scaler(&Matrix::diag_ints(&[2])).unwrap();
        assert_eq!(s.u, Matrix::diag(&[GaussianRational::from_ratio(1, 2)]));

        let n = jordan(3);
        let s = strongly_drazin_scaler(&n).unwrap();
        assert_eq!(s.u, (&n + &Matrix::identity(3)).try_inverse().unwrap().unwrap());
        assert!((&n * &s.u).is_nilpotent().unwrap());
    }

    #[test]
    fn euw_examples() {
        let d = euw_decompose(&Matrix::diag_ints(&[2, 0])).unwrap();
        assert_eq!(d.e, Matrix::diag_ints(&[1, 0]));
        assert_eq!(d.u, Matrix::diag_ints(&[2, 1]));
        assert!(d.w.is_zero());

        let a = Matrix::from_int_rows(&[[2, 0, 0], [0, 0, 1], [0, 0, 0]]);
        let d = euw_decompose(&a).unwrap();
        assert_eq!(d.e, Matrix::diag_ints(&[1, 0, 0]));
        assert_eq!(d.u, Matrix::diag_ints(&[2, 1, 1]));
        assert_eq!(d.w, Matrix::from_int_rows(&[[0, 0, 0], [0, 0, 1], [0, 0, 0]]));
        assert_eq!(d.certificates.len(), 8);

        let n = jordan(3);
        let d = euw_decompose(&n).unwrap();
        assert!(d.e.is_zero());
        assert_eq!(d.u, Matrix::identity(3));
        assert_eq!(d.w, n);
    }

    #[test]
    fn two_units_examples() {
        for k in 1..=3 {
            let t = two_units(&Matrix::zero(k)).unwrap();
            assert_eq!(t.u1, -&Matrix::identity(k));
            assert_eq!(t.u2, Matrix::identity(k));
        }
        let t = two_units(&Matrix::diag_ints(&[2, 0])).unwrap();
        assert_eq!(t.u1, Matrix::diag_ints(&[1, -1]));
        assert_eq!(t.u2, Matrix::identity(2));
        let t = two_units(&jordan(2)).unwrap();
        assert_eq!(t.u1, -&Matrix::identity(2));
        assert_eq!(t.u2, Matrix::from_int_rows(&[[1, 1], [0, 1]]));
    }

    #[test]
    fn corner_examples() {
        let a = Matrix::from_int_rows(&[[2, 1], [0, 0]]);
        let c = corner_characterize(&a, None).unwrap();
        assert_eq!(c.e, m2(&[["1", "1/2"], ["0", "0"]]));
        let f = &Matrix::identity(2) - &c.e;
        assert!((&f * &a).is_zero());
        assert!((&(&f * &a) * &f).is_zero());

        let a = Matrix::diag_ints(&[3, 0]);
        let c = corner_characterize(&a, Some(&Matrix::diag_ints(&[1, 0]))).unwrap();
        assert_eq!(c.lifted_inverse, m2(&[["1/3", "0"], ["0", "1"]]));
        assert_eq!(c.corner_inverse, m2(&[["1/3", "0"], ["0", "0"]]));
        assert_eq!(c.a_d, m2(&[["1/3", "0"], ["0", "0"]]));

        let u = Matrix::from_int_rows(&[[1, 2], [3, 4]]);
        let c = corner_characterize(&u, Some(&Matrix::identity(2))).unwrap();
        assert_eq!(c.a_d, u.try_inverse().unwrap().unwrap());
    }

    #[test]
    fn corner_hypothesis_errors() {
        let a = Matrix::diag_ints(&[3, 0]);
        let err = |e: Matrix| corner_characterize(&a, Some(&e)).unwrap_err();
        assert_eq!(err(Matrix::diag_ints(&[2, 0])), Error::Hypothesis("e is not idempotent".into()));
        assert_eq!(
            err(Matrix::from_int_rows(&[[1, 1], [0, 0]])),
            Error::Hypothesis("e does not commute with a".into())
        );
        assert_eq!(err(Matrix::identity(2)), Error::Hypothesis("eae is not invertible in eAe".into()));
        assert_eq!(err(Matrix::zero(2)), Error::Hypothesis("(1-e)a(1-e) is not nilpotent".into()));
    }

    #[test]
    fn splitting_examples() {
        let s = invariant_splitting(&Matrix::diag_ints(&[2, 0])).unwrap();
        assert_eq!(s.basis_p, vec![col(&[1, 0])]);
        assert_eq!(s.basis_q, vec![col(&[0, 1])]);
        assert_eq!(s.restriction_p, Matrix::diag_ints(&[2]));
        assert_eq!(s.restriction_q, Matrix::diag_ints(&[0]));

        let n = jordan(3);
        let s = invariant_splitting(&n).unwrap();
        assert!(s.basis_p.is_empty());
        assert_eq!(s.restriction_p.shape(), (0, 0));
        assert_eq!(s.restriction_q, n);

        let u = Matrix::from_int_rows(&[[1, 2], [3, 4]]);
        let s = invariant_splitting(&u).unwrap();
        assert!(s.basis_q.is_empty());
        assert_eq!(s.restriction_q.shape(), (0, 0));
        assert_eq!(s.restriction_p, u);
        assert_eq!(s.reassemble().unwrap(), u);
    }

    #[test]
    fn certificates_serialize_as_named_booleans() {
        let d = euw_decompose(&Matrix::diag_ints(&[2, 0])).unwrap();
        let json = serde_json::to_value(&d).unwrap();
        assert_eq!(json["certificates"]["a = eu + w"], serde_json::Value::Bool(true));
        assert_eq!(json["e"]["entries"][0][0], "1");
    }
}
