//! Anti-triangular block matrices `M = [[a, b], [c, 0]]`.
//!
//! The chains below compute `M^d` by the same sequence of moves the
//! block-matrix theorems use: Cline transfers between a product and its
//! reversal, the commuting-product rule, and the additive rule for a sum
//! with `PQ = 0`. Every intermediate Drazin inverse is certified against
//! the defining identities, so a broken step is reported by name. Each
//! chain also runs the converse direction, recovering `(bc)^d` from `M^d`.

use num_bigint::BigInt;
use num_integer::binomial;
use serde::Serialize;

use crate::decompositions::{refine_witness, Certificates};
use crate::drazin::{additive_pq_zero_lift, cline_lift, commuting_product_lift, drazin_inverse, verify_drazin_axioms};
use crate::error::{Error, Result};
use crate::exactnum::{BigRational, GaussianRational};
use crate::matrix::Matrix;

/// A `2n x 2n` matrix viewed as four `n x n` blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block2x2 {
    pub a: Matrix,
    pub b: Matrix,
    pub c: Matrix,
    pub d: Matrix,
    pub embedded: Matrix,
}

impl Block2x2 {
    pub fn new(a: Matrix, b: Matrix, c: Matrix, d: Matrix) -> Result<Self> {
        for blk in [&b, &c, &d] {
            a.require_same_square(blk, "block matrix")?;
        }
        let embedded = Matrix::from_blocks(&a, &b, &c, &d)?;
        Ok(Block2x2 { a, b, c, d, embedded })
    }

    /// `[[a, b], [c, 0]]`.
    pub fn anti_triangular(a: &Matrix, b: &Matrix, c: &Matrix) -> Result<Self> {
        Self::new(a.clone(), b.clone(), c.clone(), Matrix::zero(a.rows()))
    }

    pub fn from_embedded(m: &Matrix) -> Result<Self> {
        let size = m.require_square("block split")?;
        if size % 2 != 0 {
            return Err(Error::Domain(format!("cannot split a {size}x{size} matrix into 2x2 blocks")));
        }
        let n = size / 2;
        Ok(Block2x2 {
            a: m.submatrix(0, 0, n, n),
            b: m.submatrix(0, n, n, n),
            c: m.submatrix(n, 0, n, n),
            d: m.submatrix(n, n, n, n),
            embedded: m.clone(),
        })
    }

    pub fn block_size(&self) -> usize {
        self.a.rows()
    }
}

fn block(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
    Matrix::from_blocks(a, b, c, d).expect("blocks share one square size")
}

fn diag2(a: &Matrix, b: &Matrix) -> Matrix {
    Matrix::direct_sum(a, b)
}

fn int(n: BigInt) -> GaussianRational {
    GaussianRational::real(BigRational::from_integer(n))
}

/// `U(m) = sum_{i=0}^{floor(m/2)} C(m-i, i) a^i` for `m >= 0`, `U(-1) = 0`.
pub fn u_poly(a: &Matrix, m: i64) -> Result<Matrix> {
    let n = a.require_square("U polynomial")?;
    if m < -1 {
        return Err(Error::Domain(format!("U(m) is defined for m >= -1, got {m}")));
    }
    let mut total = Matrix::zero(n);
    if m == -1 {
        return Ok(total);
    }
    let mut power = Matrix::identity(n);
    for i in 0..=m / 2 {
        let coeff = binomial(BigInt::from(m - i), BigInt::from(i));
        total = &total + &power.scale(&int(coeff));
        power = &power * a;
    }
    Ok(total)
}

/// `U(-1), U(0), ..., U(max)` generated by `U(n) = U(n-1) + U(n-2) a`.
#[derive(Debug, Clone)]
pub struct UPolySequence {
    values: Vec<Matrix>,
}

impl UPolySequence {
    pub fn by_recurrence(a: &Matrix, max: usize) -> Result<Self> {
        let n = a.require_square("U polynomial")?;
        let mut values = vec![Matrix::zero(n), Matrix::identity(n)];
        for k in 1..=max {
            let next = &values[k] + &(&values[k - 1] * a);
            values.push(next);
        }
        Ok(UPolySequence { values })
    }

    /// `U(m)` for `-1 <= m <= max`.
    pub fn get(&self, m: i64) -> &Matrix {
        let idx = usize::try_from(m + 1).expect("m >= -1");
        &self.values[idx]
    }

    pub fn max(&self) -> i64 {
        self.values.len() as i64 - 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerCheck {
    /// `M^n = [[U(n), U(n-1)], [U(n-1) a, U(n-2) a]]` for `M = [[1, 1], [a, 0]]`.
    pub power_matches: bool,
    /// `U(n) - U(n-1) = U(n-2) a`.
    pub recurrence_holds: bool,
    /// The closed binomial form agrees with the recurrence.
    pub forms_agree: bool,
}

impl PowerCheck {
    pub fn holds(&self) -> bool {
        self.power_matches && self.recurrence_holds && self.forms_agree
    }
}

pub fn companion_power_check(a: &Matrix, n: u32) -> Result<PowerCheck> {
    let size = a.require_square("power check")?;
    if n == 0 {
        return Err(Error::Domain("power check needs n >= 1".into()));
    }
    let id = Matrix::identity(size);
    let m = block(&id, &id, a, &Matrix::zero(size));
    let direct = m.pow(n)?;
    let k = i64::from(n);
    let (un, un1, un2) = (u_poly(a, k)?, u_poly(a, k - 1)?, u_poly(a, k - 2)?);
    let expected = block(&un, &un1, &(&un1 * a), &(&un2 * a));
    let seq = UPolySequence::by_recurrence(a, n as usize)?;
    Ok(PowerCheck {
        power_matches: direct == expected,
        recurrence_holds: &un - &un1 == &un2 * a,
        forms_agree: seq.get(k) == &un && seq.get(k - 1) == &un1 && seq.get(k - 2) == &un2,
    })
}

/// Blocks of `[[1, 1], [a, 0]]^d` and the inverse of `a` refined from them.
#[derive(Debug, Clone, Serialize)]
pub struct CompanionExtraction {
    pub x11: Matrix,
    pub x12: Matrix,
    pub x21: Matrix,
    pub x22: Matrix,
    pub a_d: Matrix,
    pub certificates: Certificates,
}

/// `[[1, 1], [a, 0]]`, whose Drazin inverse encodes one for `a`.
pub fn unit_companion(a: &Matrix) -> Matrix {
    let id = Matrix::identity(a.rows());
    block(&id, &id, a, &Matrix::zero(a.rows()))
}

pub fn companion_extract(a: &Matrix) -> Result<CompanionExtraction> {
    a.require_square("companion extraction")?;
    let m_d = drazin_inverse(&unit_companion(a))?.a_d;
    companion_extract_from(a, &m_d)
}

/// As [`companion_extract`], with `[[1, 1], [a, 0]]^d` already known.
pub fn companion_extract_from(a: &Matrix, m_d: &Matrix) -> Result<CompanionExtraction> {
    let n = a.require_square("companion extraction")?;
    if m_d.shape() != (2 * n, 2 * n) {
        return Err(Error::Shape {
            op: "companion extraction",
            left: a.shape(),
            right: m_d.shape(),
        });
    }
    let Block2x2 { a: x11, b: x12, c: x21, d: x22, .. } = Block2x2::from_embedded(m_d)?;
    let mut c = Certificates::new();
    c.require("x21 = a x12", x21 == a * &x12)?;
    c.require("a x12 = x12 a", a * &x12 == &x12 * a)?;
    c.require("x11 = x12 + x22", x11 == &x12 + &x22)?;
    c.require("a - a^2 x12 nilpotent", (a - &(&(a * a) * &x12)).is_nilpotent()?)?;
    let refined = refine_witness(a, &x12)?;
    c.require("refined a_d = a^d", refined.a_d == drazin_inverse(a)?.a_d)?;
    Ok(CompanionExtraction {
        x11,
        x12,
        x21,
        x22,
        a_d: refined.a_d,
        certificates: c,
    })
}

/// Result of a block-matrix chain.
#[derive(Debug, Clone, Serialize)]
pub struct ChainOutcome {
    /// `M^d` for the `2n x 2n` embedding of `[[a, b], [c, 0]]`.
    pub m_d: Matrix,
    /// `(bc)^d` recovered from `M^d` by the converse chain.
    pub bc_d: Matrix,
    pub certificates: Certificates,
}

struct Chain {
    certs: Certificates,
}

impl Chain {
    fn new() -> Self {
        Chain {
            certs: Certificates::new(),
        }
    }

    fn check(&mut self, name: &'static str, holds: bool) -> Result<()> {
        self.certs.require(name, holds)
    }

    /// Certifies `x_d` as the Drazin inverse of `x` and passes it through.
    fn drazin_step(&mut self, name: &'static str, x: &Matrix, x_d: Matrix) -> Result<Matrix> {
        self.check(name, verify_drazin_axioms(x, &x_d)?.holds())?;
        Ok(x_d)
    }

    /// `(p + q)^d` when one of the two products vanishes.
    fn additive_step(
        &mut self,
        name: &'static str,
        (p, p_d): (&Matrix, &Matrix),
        (q, q_d): (&Matrix, &Matrix),
    ) -> Result<Matrix> {
        let sum = p + q;
        let sum_d = if (p * q).is_zero() {
            additive_pq_zero_lift(p, p_d, q, q_d)
        } else if (q * p).is_zero() {
            additive_pq_zero_lift(q, q_d, p, p_d)
        } else {
            return Err(Error::Certificate(format!("{name}: neither summand product vanishes")));
        };
        self.drazin_step(name, &sum, sum_d)
    }

    /// `(ba)^d` from `(ab)^d`, after checking the two products.
    fn cline_step(
        &mut self,
        name: &'static str,
        (a, b): (&Matrix, &Matrix),
        (ab, ab_d): (&Matrix, &Matrix),
        ba: &Matrix,
    ) -> Result<Matrix> {
        self.check(name, &(a * b) == ab && &(b * a) == ba)?;
        self.drazin_step(name, ba, cline_lift(a, b, ab_d))
    }

    /// `[[1, 1], [x, 0]]^d`, computed directly.
    fn companion_step(&mut self, name: &'static str, x: &Matrix) -> Result<(Matrix, Matrix)> {
        let n = unit_companion(x);
        let n_d = drazin_inverse(&n)?.a_d;
        let n_d = self.drazin_step(name, &n, n_d)?;
        Ok((n, n_d))
    }

    /// `x^d` read off `[[1, 1], [x, 0]]^d`.
    fn extract_step(&mut self, name: &'static str, x: &Matrix, companion_d: &Matrix) -> Result<Matrix> {
        let ex = companion_extract_from(x, companion_d)?;
        self.drazin_step(name, x, ex.a_d)
    }

    fn finish(self, m_d: Matrix, bc_d: Matrix) -> ChainOutcome {
        ChainOutcome {
            m_d,
            bc_d,
            certificates: self.certs,
        }
    }
}

fn require_blocks(a: &Matrix, b: &Matrix, c: &Matrix, op: &'static str) -> Result<usize> {
    let n = a.require_same_square(b, op)?;
    a.require_same_square(c, op)?;
    Ok(n)
}

fn hypothesis(holds: bool, what: &str) -> Result<()> {
    if holds {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!("{what} does not hold")))
    }
}

/// `M^d` for `M = [[a, b], [c, 0]]` with `a^2 = a` and `ab = b`.
pub fn idempotent_chain(a: &Matrix, b: &Matrix, c: &Matrix) -> Result<ChainOutcome> {
    let n = require_blocks(a, b, c, "idempotent chain")?;
    hypothesis(a.is_idempotent(), "a^2 = a")?;
    hypothesis(&(a * b) == b, "ab = b")?;
    let id = Matrix::identity(n);
    let zero = Matrix::zero(n);
    let m = block(a, b, c, &zero);
    let bc = b * c;
    let bc_d = drazin_inverse(&bc)?.a_d;
    let mut ch = Chain::new();

    // (bca)^d from (a.bc)^d = (bc)^d
    let bca = &bc * a;
    ch.cline_step("(bca)^d by Cline", (a, &bc), (&bc, &bc_d), &bca)?;
    let (n1, n1_d) = ch.companion_step("[[1,1],[bca,0]]^d", &bca)?;

    let dg = diag2(a, a);
    ch.check("diag(a,a) idempotent", dg.is_idempotent())?;
    ch.check("diag(a,a) commutes with [[1,1],[bca,0]]", dg.commutes(&n1)?)?;
    let r = &dg * &n1;
    ch.check("diag(a,a)[[1,1],[bca,0]] = [[a,a],[bca,0]]", r == block(a, a, &bca, &zero))?;
    let r_d = ch.drazin_step("[[a,a],[bca,0]]^d", &r, commuting_product_lift(&dg, &n1_d))?;

    let q0 = block(&zero, &zero, &(&bc * &(&id - a)), &zero);
    ch.check("[[0,0],[bc(1-a),0]] squares to zero", (&q0 * &q0).is_zero())?;
    let t = block(a, a, &bc, &zero);
    let t_d = ch.additive_step("[[a,a],[bc,0]]^d", (&q0, &Matrix::zero(2 * n)), (&r, &r_d))?;

    let x = diag2(&id, &bc);
    let y = block(a, a, &id, &zero);
    let v = block(a, &bc, &id, &zero);
    let v_d = ch.cline_step("[[a,bc],[1,0]]^d by Cline", (&x, &y), (&t, &t_d), &v)?;

    let x2 = block(a, b, &id, &zero);
    let y2 = diag2(&id, c);
    let m_d = ch.cline_step("M^d by Cline", (&x2, &y2), (&v, &v_d), &m)?;

    // Converse: from M^d back to (bc)^d.
    let v_back = ch.cline_step("converse [[a,bc],[1,0]]^d", (&y2, &x2), (&m, &m_d), &v)?;
    let t_back = ch.cline_step("converse [[a,a],[bc,0]]^d", (&y, &x), (&v, &v_back), &t)?;
    let p = block(&(&id - a), &zero, &zero, &zero);
    ch.check("[[1-a,0],[0,0]] idempotent", p.is_idempotent())?;
    let w = block(&id, a, &bc, &zero);
    ch.check("[[1,a],[bc,0]] = P + T", w == &p + &t)?;
    let w_d = ch.additive_step("converse [[1,a],[bc,0]]^d", (&p, &p), (&t, &t_back))?;
    let s = unit_companion(&bc);
    let tm = diag2(&id, a);
    let s_d = ch.cline_step("converse [[1,1],[bc,0]]^d by S/T swap", (&s, &tm), (&w, &w_d), &s)?;
    let bc_back = ch.extract_step("converse (bc)^d", &bc, &s_d)?;
    ch.check("converse (bc)^d matches", bc_back == bc_d)?;
    Ok(ch.finish(m_d, bc_back))
}

/// `M = [[a, a], [b, 0]]` with `a` idempotent, as a special case of
/// [`idempotent_chain`].
pub fn idempotent_pair_chain(a: &Matrix, b: &Matrix) -> Result<ChainOutcome> {
    idempotent_chain(a, a, b)
}

fn core_hypotheses(a: &Matrix, a_d: &Matrix, bc: &Matrix, c: &Matrix) -> Result<()> {
    hypothesis(&(c * a) * a_d == *c, "caa^d = c")?;
    hypothesis((a_d * bc) == (bc * a_d), "a^d bc = bc a^d")
}

/// `M^d` for `M = [[a, b], [c, 0]]` with `caa^d = c` and `a^d bc = bc a^d`.
pub fn core_chain(a: &Matrix, b: &Matrix, c: &Matrix) -> Result<ChainOutcome> {
    require_blocks(a, b, c, "core chain")?;
    let a_d = drazin_inverse(a)?.a_d;
    let bc = b * c;
    core_hypotheses(a, &a_d, &bc, c)?;
    let mut ch = Chain::new();
    let m_d = core_forward(&mut ch, a, &a_d, b, c)?;
    let bc_d = core_converse(&mut ch, a, &a_d, b, c, &m_d)?;
    ch.check("converse (bc)^d matches", bc_d == drazin_inverse(&bc)?.a_d)?;
    Ok(ch.finish(m_d, bc_d))
}

fn core_forward(ch: &mut Chain, a: &Matrix, a_d: &Matrix, b: &Matrix, c: &Matrix) -> Result<Matrix> {
    let n = a.rows();
    let id = Matrix::identity(n);
    let zero = Matrix::zero(n);
    let bc = b * c;
    let bc_d = drazin_inverse(&bc)?.a_d;

    // ((a^d)^2 bc)^d by the commuting-product rule.
    let ad2 = a_d * a_d;
    ch.check("(a^d)^2 commutes with bc", ad2.commutes(&bc)?)?;
    let ad_d = ch.drazin_step("(a^d)^d = a^2 a^d", a_d, &(a * a) * a_d)?;
    let ad2_d = ch.drazin_step("((a^d)^2)^d", &ad2, commuting_product_lift(&ad_d, &ad_d))?;
    let k = &ad2 * &bc;
    ch.drazin_step("((a^d)^2 bc)^d", &k, commuting_product_lift(&ad2_d, &bc_d))?;

    let (nk, nk_d) = ch.companion_step("[[1,1],[(a^d)^2 bc,0]]^d", &k)?;
    let dg = diag2(a, a);
    ch.check("diag(a,a) commutes with [[1,1],[(a^d)^2 bc,0]]", dg.commutes(&nk)?)?;
    let r = &dg * &nk;
    let r_d = ch.drazin_step(
        "diag(a,a)[[1,1],[(a^d)^2 bc,0]]^d",
        &r,
        commuting_product_lift(&diag2(a_d, a_d), &nk_d),
    )?;

    let x = diag2(a, b);
    let y = block(&id, &id, &(c * a_d), &zero);
    let m = block(a, b, c, &zero);
    ch.cline_step("M^d by Cline", (&x, &y), (&r, &r_d), &m)
}

fn core_converse(ch: &mut Chain, a: &Matrix, a_d: &Matrix, b: &Matrix, c: &Matrix, m_d: &Matrix) -> Result<Matrix> {
    let n = a.rows();
    let id = Matrix::identity(n);
    let zero = Matrix::zero(n);
    let bc = b * c;
    let m = block(a, b, c, &zero);

    let x = block(a, &id, c, &zero);
    let y = diag2(&id, b);
    let g = block(a, &id, &bc, &zero);
    let g_d = ch.cline_step("converse [[a,1],[bc,0]]^d", (&x, &y), (&m, m_d), &g)?;

    let dd = diag2(a_d, a_d);
    ch.check("diag(a^d,a^d) commutes with [[a,1],[bc,0]]", dd.commutes(&g)?)?;
    let h = &dd * &g;
    let a2ad = &(a * a) * a_d;
    let h_d = ch.drazin_step(
        "converse [[a^d a,a^d],[a^d bc,0]]^d",
        &h,
        commuting_product_lift(&diag2(&a2ad, &a2ad), &g_d),
    )?;

    let aad = a * a_d;
    let k = &(a_d * a_d) * &bc;
    let l = block(&aad, &aad, &k, &zero);
    let x2 = &h * &diag2(&id, a);
    let y2 = diag2(&id, a_d);
    let l_d = ch.cline_step("converse [[aa^d,aa^d],[(a^d)^2 bc,0]]^d", (&x2, &y2), (&h, &h_d), &l)?;

    let a_pi = &id - &aad;
    let p = block(&a_pi, &a_pi, &zero, &zero);
    ch.check("[[a^pi,a^pi],[0,0]] idempotent", p.is_idempotent())?;
    let nk_d = ch.additive_step("converse [[1,1],[(a^d)^2 bc,0]]^d", (&p, &p), (&l, &l_d))?;
    let k_d = ch.extract_step("converse ((a^d)^2 bc)^d", &k, &nk_d)?;

    let a2 = a * a;
    ch.check("bc = (a^d)^2 bc a^2", bc == &k * &a2)?;
    ch.check("(a^d)^2 bc commutes with a^2", k.commutes(&a2)?)?;
    let a2_d = commuting_product_lift(a_d, a_d);
    ch.drazin_step("converse (bc)^d", &bc, commuting_product_lift(&k_d, &a2_d))
}

fn split_hypotheses(a_d: &Matrix, a_pi: &Matrix, bc: &Matrix) -> Result<()> {
    hypothesis((bc * a_pi).is_zero(), "bc a^pi = 0")?;
    hypothesis((a_d * bc) == (bc * a_d), "a^d bc = bc a^d")
}

/// `M^d` for `M = [[a, b], [c, 0]]` with `bc a^pi = 0` and `a^d bc = bc a^d`,
/// by splitting `M = P + Q` with `Q = [[0, 0], [c a^pi, 0]]`.
pub fn split_chain(a: &Matrix, b: &Matrix, c: &Matrix) -> Result<ChainOutcome> {
    let n = require_blocks(a, b, c, "split chain")?;
    let dr = drazin_inverse(a)?;
    let bc = b * c;
    split_hypotheses(&dr.a_d, &dr.a_pi, &bc)?;
    let zero = Matrix::zero(n);
    let zero2 = Matrix::zero(2 * n);
    let mut ch = Chain::new();

    let c_core = &(c * a) * &dr.a_d;
    let p = block(a, b, &c_core, &zero);
    let q = block(&zero, &zero, &(c * &dr.a_pi), &zero);
    ch.check("PQ = 0", (&p * &q).is_zero())?;
    ch.check("Q^2 = 0", (&q * &q).is_zero())?;
    ch.check("bc' = bc", b * &c_core == bc)?;
    ch.check("c' a a^d = c'", &(&c_core * a) * &dr.a_d == c_core)?;
    let p_d = core_forward(&mut ch, a, &dr.a_d, b, &c_core)?;
    let m_d = ch.additive_step("M^d = (P + Q)^d", (&p, &p_d), (&q, &zero2))?;

    // Converse: P = M + N with N = -Q, then the converse core chain.
    let m = block(a, b, c, &zero);
    let neg_q = -&q;
    ch.check("MN = 0", (&m * &neg_q).is_zero())?;
    let p_back = ch.additive_step("converse P^d = (M + N)^d", (&m, &m_d), (&neg_q, &zero2))?;
    let bc_d = core_converse(&mut ch, a, &dr.a_d, b, &c_core, &p_back)?;
    ch.check("converse (bc)^d matches", bc_d == drazin_inverse(&bc)?.a_d)?;
    Ok(ch.finish(m_d, bc_d))
}

/// `M^d` for `M = [[a, b], [c, 0]]` with `a^pi bc = 0` and `abc = bca`.
/// Both hypotheses of [`split_chain`] are derived, then it is applied.
pub fn commuting_chain(a: &Matrix, b: &Matrix, c: &Matrix) -> Result<ChainOutcome> {
    require_blocks(a, b, c, "commuting chain")?;
    let dr = drazin_inverse(a)?;
    let bc = b * c;
    hypothesis((&dr.a_pi * &bc).is_zero(), "a^pi bc = 0")?;
    hypothesis((a * &bc) == (&bc * a), "abc = bca")?;

    let mut certs = Certificates::new();
    let coeffs = a.express_as_polynomial(&dr.a_d)?;
    certs.require("a^d is a polynomial in a", coeffs.is_some())?;
    let pa = a.eval_polynomial(&coeffs.expect("checked above"));
    certs.require("a^d bc = bc a^d", &pa * &bc == &bc * &pa)?;
    certs.require("bc a^pi = 0", (&bc * &dr.a_pi).is_zero())?;

    let mut out = split_chain(a, b, c)?;
    certs.extend(out.certificates);
    out.certificates = certs;
    Ok(out)
}
