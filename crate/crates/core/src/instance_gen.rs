//! Seeded generation of structured exact instances.
//!
//! Everything is built in an adapted basis and then conjugated by a random
//! unimodular integer matrix `S`, so `S^{-1}` is exact with integer entries
//! and every structural property (nilpotency, idempotency, commutation,
//! annihilation) survives the change of basis. Randomness comes from
//! ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with `seed_from_u64`; equal
//! [`GenSpec`]s always produce identical instances.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::drazin::drazin_inverse;
use crate::error::{Error, Result};
use crate::exactnum::GaussianRational;
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    Nilpotent,
    Idempotent,
    Unit,
    DrazinStructured,
    CommutingWitness,
    IdempotentChain,
    CoreChain,
    SplitChain,
    CommutingChain,
    PqZero,
}

impl GenKind {
    pub const ALL: [GenKind; 10] = [
        GenKind::Nilpotent,
        GenKind::Idempotent,
        GenKind::Unit,
        GenKind::DrazinStructured,
        GenKind::CommutingWitness,
        GenKind::IdempotentChain,
        GenKind::CoreChain,
        GenKind::SplitChain,
        GenKind::CommutingChain,
        GenKind::PqZero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GenKind::Nilpotent => "nilpotent",
            GenKind::Idempotent => "idempotent",
            GenKind::Unit => "unit",
            GenKind::DrazinStructured => "drazin_structured",
            GenKind::CommutingWitness => "commuting_witness",
            GenKind::IdempotentChain => "idempotent_chain",
            GenKind::CoreChain => "core_chain",
            GenKind::SplitChain => "split_chain",
            GenKind::CommutingChain => "commuting_chain",
            GenKind::PqZero => "pq_zero",
        }
    }

    fn is_tuple_kind(self) -> bool {
        matches!(
            self,
            GenKind::IdempotentChain | GenKind::CoreChain | GenKind::SplitChain | GenKind::CommutingChain | GenKind::PqZero
        )
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GenKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown instance kind '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub seed: u64,
    pub size: usize,
    pub entry_bound: i64,
    pub kind: GenKind,
}

impl GenSpec {
    pub const DEFAULT_ENTRY_BOUND: i64 = 3;

    pub fn new(kind: GenKind, size: usize, seed: u64) -> Self {
        GenSpec {
            seed,
            size,
            entry_bound: Self::DEFAULT_ENTRY_BOUND,
            kind,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::Domain("instance size must be positive".into()));
        }
        if self.entry_bound < 1 {
            return Err(Error::Domain("entry bound must be positive".into()));
        }
        Ok(())
    }
}

/// Named matrices, in a fixed order. Serializes as a JSON object.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Instance {
    matrices: Vec<(String, Matrix)>,
}

impl Instance {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, m: Matrix) -> Self {
        self.matrices.push((name.to_string(), m));
        self
    }

    pub fn get(&self, name: &str) -> Option<&Matrix> {
        self.matrices.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    /// Like [`Instance::get`] but a missing name is a generation error.
    pub fn matrix(&self, name: &str) -> Result<&Matrix> {
        self.get(name)
            .ok_or_else(|| Error::Generation(format!("instance has no matrix named '{name}'")))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Matrix)> {
        self.matrices.iter().map(|(n, m)| (n.as_str(), m))
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }
}

impl Serialize for Instance {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.matrices.len()))?;
        for (name, m) in &self.matrices {
            map.serialize_entry(name, m)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct InstanceVisitor;
        impl<'de> Visitor<'de> for InstanceVisitor {
            type Value = Instance;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object of named matrices")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> std::result::Result<Instance, A::Error> {
                let mut matrices = Vec::new();
                while let Some((name, m)) = access.next_entry::<String, Matrix>()? {
                    matrices.push((name, m));
                }
                Ok(Instance { matrices })
            }
        }
        deserializer.deserialize_map(InstanceVisitor)
    }
}

/// Seed for trial `index` of a run with master seed `master` (SplitMix64).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn int_in(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    rng.gen_range(-bound..=bound)
}

fn nonzero_in(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    let v = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        -v
    } else {
        v
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> Matrix {
    let data = (0..rows * cols).map(|_| GaussianRational::from(int_in(rng, bound))).collect();
    Matrix::new(rows, cols, data).expect("data length matches shape")
}

fn strictly_upper(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Matrix {
    let mut m = Matrix::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, int_in(rng, bound).into());
        }
    }
    m
}

/// Random unimodular `S` and its exact inverse, as a product of `ops`
/// elementary operations (row additions and occasional swaps).
fn unimodular(rng: &mut ChaCha8Rng, n: usize, bound: i64, ops: usize) -> (Matrix, Matrix) {
    let mut s = Matrix::identity(n);
    let mut s_inv = Matrix::identity(n);
    if n == 1 {
        if ops > 0 && rng.gen_bool(0.5) {
            let neg = -&s;
            return (neg.clone(), neg);
        }
        return (s, s_inv);
    }
    let mult_bound = bound.min(2);
    for _ in 0..ops {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        if rng.gen_ratio(1, 6) {
            // Row swap on S, column swap on S^{-1}.
            s = swap_rows(&s, i, j);
            s_inv = swap_rows(&s_inv.transpose(), i, j).transpose();
            continue;
        }
        let m = GaussianRational::from(nonzero_in(rng, mult_bound));
        // S <- (I + m e_i e_j^T) S and S^{-1} <- S^{-1} (I - m e_i e_j^T).
        for col in 0..n {
            let v = s.get(i, col) + &(&m * s.get(j, col));
            s.set(i, col, v);
        }
        for row in 0..n {
            let v = s_inv.get(row, j) - &(&m * s_inv.get(row, i));
            s_inv.set(row, j, v);
        }
    }
    (s, s_inv)
}

fn swap_rows(m: &Matrix, i: usize, j: usize) -> Matrix {
    let mut rows = m.to_rows();
    rows.swap(i, j);
    Matrix::from_rows(rows).expect("rectangular rows")
}

fn conjugator(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> (Matrix, Matrix) {
    let ops = n + rng.gen_range(0..=n);
    unimodular(rng, n, bound, ops)
}

/// A random invertible integer matrix: unimodular factors around a
/// diagonal of nonzero integers. Its determinant is `±prod(diag)`.
fn random_unit(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Matrix {
    if n == 0 {
        return Matrix::zero(0);
    }
    let (s1, _) = conjugator(rng, n, bound);
    let (s2, _) = conjugator(rng, n, bound);
    let d: Vec<i64> = (0..n).map(|_| nonzero_in(rng, bound)).collect();
    &(&s1 * &Matrix::diag_ints(&d)) * &s2
}

/// An invertible block with an occasional Gaussian-integer eigenvalue.
fn random_core(rng: &mut ChaCha8Rng, r: usize, bound: i64) -> Matrix {
    let mut d = strictly_upper(rng, r, bound);
    for i in 0..r {
        let re = nonzero_in(rng, bound);
        let x = if rng.gen_ratio(1, 4) {
            GaussianRational::from_parts((re, 1), (nonzero_in(rng, bound), 1))
        } else {
            GaussianRational::from(re)
        };
        d.set(i, i, x);
    }
    if r > 1 && rng.gen_bool(0.5) {
        let (s, s_inv) = unimodular(rng, r, bound, r);
        d = &(&s * &d) * &s_inv;
    }
    d
}

fn random_polynomial_in(rng: &mut ChaCha8Rng, a: &Matrix, bound: i64) -> Matrix {
    let n = a.rows().max(1);
    let degree = rng.gen_range(0..n);
    let coeffs: Vec<GaussianRational> = (0..=degree).map(|_| int_in(rng, bound).into()).collect();
    a.eval_polynomial(&coeffs)
}

/// Core size for a Drazin-structured draw: mostly mixed, sometimes
/// fully invertible or fully nilpotent.
fn core_rank(rng: &mut ChaCha8Rng, n: usize) -> usize {
    if n == 1 || rng.gen_ratio(1, 5) {
        rng.gen_range(0..=n)
    } else {
        rng.gen_range(1..n)
    }
}

struct Adapted {
    s: Matrix,
    s_inv: Matrix,
    /// Size of the invertible core.
    r: usize,
    core: Matrix,
    a: Matrix,
}

impl Adapted {
    fn draw(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Adapted {
        let r = core_rank(rng, n);
        let core = random_core(rng, r, bound);
        let nil = strictly_upper(rng, n - r, bound);
        let (s, s_inv) = conjugator(rng, n, bound);
        let a = Matrix::direct_sum(&core, &nil);
        Adapted { s, s_inv, r, core, a }
    }

    fn conj(&self, m: &Matrix) -> Matrix {
        &(&self.s * m) * &self.s_inv
    }

    fn n(&self) -> usize {
        self.a.rows()
    }

    /// `[[x11, x12], [x21, x22]]` in the adapted splitting.
    fn blocks(&self, x11: &Matrix, x12: &Matrix, x21: &Matrix, x22: &Matrix) -> Matrix {
        Matrix::from_blocks(x11, x12, x21, x22).expect("adapted block shapes")
    }

    fn zeros(&self) -> (Matrix, Matrix, Matrix, Matrix) {
        let (r, k) = (self.r, self.n() - self.r);
        (Matrix::zeros(r, r), Matrix::zeros(r, k), Matrix::zeros(k, r), Matrix::zeros(k, k))
    }
}

fn nilpotent(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Matrix {
    let nil = strictly_upper(rng, n, bound);
    let (s, s_inv) = conjugator(rng, n, bound);
    &(&s * &nil) * &s_inv
}

fn idempotent(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Matrix {
    let r = if rng.gen_ratio(1, 10) { 0 } else { rng.gen_range(1..=n) };
    idempotent_of_rank(rng, n, r, bound)
}

fn idempotent_of_rank(rng: &mut ChaCha8Rng, n: usize, r: usize, bound: i64) -> Matrix {
    let d: Vec<i64> = (0..n).map(|i| i64::from(i < r)).collect();
    let (s, s_inv) = conjugator(rng, n, bound);
    &(&s * &Matrix::diag_ints(&d)) * &s_inv
}

fn drazin_structured(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Matrix {
    let ad = Adapted::draw(rng, n, bound);
    ad.conj(&ad.a)
}

/// Draws the matrix or matrix tuple described by `spec`.
pub fn gen_element(spec: &GenSpec) -> Result<Instance> {
    spec.validate()?;
    if spec.kind.is_tuple_kind() {
        return gen_theorem_instance(spec);
    }
    let mut rng = rng_for(spec.seed);
    let (n, bound) = (spec.size, spec.entry_bound);
    let inst = match spec.kind {
        GenKind::Nilpotent => Instance::new().with("a", nilpotent(&mut rng, n, bound)),
        GenKind::Idempotent => Instance::new().with("a", idempotent(&mut rng, n, bound)),
        GenKind::Unit => Instance::new().with("a", random_unit(&mut rng, n, bound)),
        GenKind::DrazinStructured => Instance::new().with("a", drazin_structured(&mut rng, n, bound)),
        GenKind::CommutingWitness => {
            let a = drazin_structured(&mut rng, n, bound);
            let x = random_polynomial_in(&mut rng, &a, bound);
            Instance::new().with("a", a).with("x", x)
        }
        _ => unreachable!("tuple kinds handled above"),
    };
    verify_element(spec.kind, &inst)?;
    Ok(inst)
}

fn verify_element(kind: GenKind, inst: &Instance) -> Result<()> {
    let a = inst.matrix("a")?;
    let n = a.rows();
    let ok = match kind {
        GenKind::Nilpotent => a.pow(n as u32)?.is_zero(),
        GenKind::Idempotent => a.is_idempotent(),
        GenKind::Unit => a.is_invertible()?,
        GenKind::DrazinStructured => true,
        GenKind::CommutingWitness => a.commutes(inst.matrix("x")?)?,
        _ => true,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Generation(format!("{kind} instance failed its own check")))
    }
}

/// Draws a tuple satisfying the hypotheses of one block-matrix result, or a
/// pair `(p, q)` with `pq = 0`. The output is re-verified before returning.
pub fn gen_theorem_instance(spec: &GenSpec) -> Result<Instance> {
    spec.validate()?;
    if !spec.kind.is_tuple_kind() {
        return Err(Error::Domain(format!("'{}' is not a tuple instance kind", spec.kind)));
    }
    let mut rng = rng_for(spec.seed);
    let (n, bound) = (spec.size, spec.entry_bound);
    let inst = match spec.kind {
        GenKind::IdempotentChain => {
            let a = idempotent(&mut rng, n, bound);
            let b = &a * &random_matrix(&mut rng, n, n, bound);
            let c = random_matrix(&mut rng, n, n, bound);
            Instance::new().with("a", a).with("b", b).with("c", c)
        }
        GenKind::CoreChain => core_chain_instance(&mut rng, n, bound),
        GenKind::SplitChain => split_chain_instance(&mut rng, n, bound),
        GenKind::CommutingChain => commuting_chain_instance(&mut rng, n, bound),
        GenKind::PqZero => pq_zero_instance(&mut rng, n, bound),
        _ => unreachable!("checked above"),
    };
    verify_theorem_instance(spec.kind, &inst)?;
    Ok(inst)
}

/// In the adapted basis `a = D ⊕ N`, `c` lives on the core columns and
/// `bc = diag(p(D) q(D), 0)` with the off-diagonal part of `b` free on the
/// side that `c` annihilates.
fn core_chain_instance(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Instance {
    let ad = Adapted::draw(rng, n, bound);
    let (_, z12, z21, z22) = ad.zeros();
    let k = n - ad.r;
    let p = random_polynomial_in(rng, &ad.core, bound);
    let q = random_polynomial_in(rng, &ad.core, bound);
    let (b0, c0) = if rng.gen_bool(0.5) {
        let b12 = random_matrix(rng, ad.r, k, bound);
        let b22 = random_matrix(rng, k, k, bound);
        (ad.blocks(&p, &b12, &z21, &b22), ad.blocks(&q, &z12, &z21, &z22))
    } else {
        let c21 = random_matrix(rng, k, ad.r, bound);
        (ad.blocks(&p, &z12, &z21, &z22), ad.blocks(&q, &z12, &c21, &z22))
    };
    Instance::new()
        .with("a", ad.conj(&ad.a))
        .with("b", ad.conj(&b0))
        .with("c", ad.conj(&c0))
}

/// Like the core chain instance, but `c` also reaches the nilpotent columns; `b` vanishes
/// on them so `bc a^pi = 0` still holds.
fn split_chain_instance(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Instance {
    let ad = Adapted::draw(rng, n, bound);
    let (_, z12, z21, z22) = ad.zeros();
    let k = n - ad.r;
    let p = random_polynomial_in(rng, &ad.core, bound);
    let q = random_polynomial_in(rng, &ad.core, bound);
    let c21 = random_matrix(rng, k, ad.r, bound);
    let c22 = random_matrix(rng, k, k, bound);
    let b0 = ad.blocks(&p, &z12, &z21, &z22);
    let c0 = ad.blocks(&q, &z12, &c21, &c22);
    Instance::new()
        .with("a", ad.conj(&ad.a))
        .with("b", ad.conj(&b0))
        .with("c", ad.conj(&c0))
}

/// `bc = diag(p(D) q(D), 0)` commutes with `a` and vanishes under `a^pi`.
fn commuting_chain_instance(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Instance {
    let ad = Adapted::draw(rng, n, bound);
    let (_, z12, z21, z22) = ad.zeros();
    let k = n - ad.r;
    let p = random_polynomial_in(rng, &ad.core, bound);
    let q = random_polynomial_in(rng, &ad.core, bound);
    let c21 = random_matrix(rng, k, ad.r, bound);
    let c22 = random_matrix(rng, k, k, bound);
    let b0 = ad.blocks(&p, &z12, &z21, &z22);
    let c0 = ad.blocks(&q, &z12, &c21, &c22);
    Instance::new()
        .with("a", ad.conj(&ad.a))
        .with("b", ad.conj(&b0))
        .with("c", ad.conj(&c0))
}

/// `q` has its columns in `ker p`.
fn pq_zero_instance(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Instance {
    let p = match rng.gen_range(0..3) {
        0 => idempotent(rng, n, bound),
        1 => drazin_structured(rng, n, bound),
        _ => {
            let r = rng.gen_range(0..=n);
            &random_matrix(rng, n, r, bound) * &random_matrix(rng, r, n, bound)
        }
    };
    let kernel = p.rref().kernel_basis;
    let q = if kernel.is_empty() {
        Matrix::zero(n)
    } else {
        let k = Matrix::from_columns(n, &kernel);
        &k * &random_matrix(rng, kernel.len(), n, bound)
    };
    Instance::new().with("p", p).with("q", q)
}

fn verify_theorem_instance(kind: GenKind, inst: &Instance) -> Result<()> {
    let fail = |what: &str| Err(Error::Generation(format!("{kind} instance violates {what}")));
    if kind == GenKind::PqZero {
        let (p, q) = (inst.matrix("p")?, inst.matrix("q")?);
        return if (p * q).is_zero() { Ok(()) } else { fail("pq = 0") };
    }
    let (a, b, c) = (inst.matrix("a")?, inst.matrix("b")?, inst.matrix("c")?);
    let bc = b * c;
    match kind {
        GenKind::IdempotentChain => {
            if !a.is_idempotent() {
                return fail("a^2 = a");
            }
            if &(a * b) != b {
                return fail("ab = b");
            }
        }
        GenKind::CoreChain | GenKind::SplitChain | GenKind::CommutingChain => {
            let dr = drazin_inverse(a)?;
            let commutes_d = dr.a_d.commutes(&bc)?;
            match kind {
                GenKind::CoreChain => {
                    if &(c * a) * &dr.a_d != *c {
                        return fail("caa^d = c");
                    }
                    if !commutes_d {
                        return fail("a^d bc = bc a^d");
                    }
                }
                GenKind::SplitChain => {
                    if !(&bc * &dr.a_pi).is_zero() {
                        return fail("bc a^pi = 0");
                    }
                    if !commutes_d {
                        return fail("a^d bc = bc a^d");
                    }
                }
                _ => {
                    if !(&dr.a_pi * &bc).is_zero() {
                        return fail("a^pi bc = 0");
                    }
                    if !a.commutes(&bc)? {
                        return fail("abc = bca");
                    }
                }
            }
        }
        _ => {}
    }
    Ok(())
}

/// Pair `(a, b)` for Cline-formula checks: a structured singular matrix and
/// a random product of mixed rank.
pub fn gen_cline_pair(seed: u64, size: usize, entry_bound: i64) -> Result<Instance> {
    GenSpec::new(GenKind::Nilpotent, size, seed).validate()?;
    let mut rng = rng_for(seed);
    let a = drazin_structured(&mut rng, size, entry_bound);
    let r = rng.gen_range(0..=size);
    let b = &random_matrix(&mut rng, size, r, entry_bound) * &random_matrix(&mut rng, r, size, entry_bound);
    Ok(Instance::new().with("a", a).with("b", b))
}

/// `S a S^{-1}` for a random unimodular `S` drawn from `seed`. Some seeds
/// select zero elementary operations, giving `S = I`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conjugation {
    pub s: Matrix,
    pub s_inv: Matrix,
    pub conjugated: Matrix,
}

pub fn similarity_conjugate(a: &Matrix, seed: u64) -> Result<Conjugation> {
    let n = a.require_square("similarity conjugation")?;
    let mut rng = rng_for(seed);
    let ops = rng.gen_range(0..=2 * n);
    let (s, s_inv) = unimodular(&mut rng, n, GenSpec::DEFAULT_ENTRY_BOUND, ops);
    let conjugated = &(&s * a) * &s_inv;
    Ok(Conjugation { s, s_inv, conjugated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::GaussianRational;
    use num_traits::{One, Signed};

    fn spec(kind: GenKind, size: usize, seed: u64) -> GenSpec {
        GenSpec::new(kind, size, seed)
    }

    #[test]
    fn every_kind_is_deterministic_and_self_consistent() {
        for kind in GenKind::ALL {
            for size in 1..=4 {
                for seed in 0..6 {
                    let s = spec(kind, size, seed);
                    let x = gen_element(&s).unwrap();
                    let y = gen_element(&s).unwrap();
                    assert_eq!(serde_json::to_string(&x).unwrap(), serde_json::to_string(&y).unwrap());
                }
            }
        }
    }

    #[test]
    fn nilpotent_and_idempotent_draws() {
        for seed in 0..20 {
            let a = gen_element(&spec(GenKind::Nilpotent, 3, seed)).unwrap();
            assert!(a.matrix("a").unwrap().pow(3).unwrap().is_zero());
        }
        let mut rng = rng_for(9);
        for r in 0..=4 {
            let e = idempotent_of_rank(&mut rng, 4, r, 3);
            assert!(e.is_idempotent());
            assert_eq!(e.rank(), r);
        }
    }

    #[test]
    fn unit_draws_are_invertible_with_known_determinant() {
        for seed in 0..20 {
            let u = gen_element(&spec(GenKind::Unit, 4, seed)).unwrap();
            let det = u.matrix("a").unwrap().determinant().unwrap();
            assert!(det.is_real());
            assert!(det.re().is_integer() && det.re().abs() >= One::one());
        }
    }

    #[test]
    fn commuting_witness_commutes() {
        for seed in 0..20 {
            let inst = gen_element(&spec(GenKind::CommutingWitness, 3, seed)).unwrap();
            assert!(inst.matrix("a").unwrap().commutes(inst.matrix("x").unwrap()).unwrap());
        }
    }

    #[test]
    fn tuple_instances_satisfy_hypotheses() {
        for kind in [GenKind::IdempotentChain, GenKind::CoreChain, GenKind::SplitChain, GenKind::CommutingChain, GenKind::PqZero] {
            for size in 1..=4 {
                for seed in 0..10 {
                    let inst = gen_theorem_instance(&spec(kind, size, seed)).unwrap();
                    verify_theorem_instance(kind, &inst).unwrap();
                }
            }
        }
        assert!(matches!(
            gen_theorem_instance(&spec(GenKind::Unit, 2, 0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn pq_zero_can_emit_the_worked_pattern() {
        let found = (0..400).any(|seed| {
            let inst = gen_theorem_instance(&spec(GenKind::PqZero, 2, seed)).unwrap();
            let (p, q) = (inst.matrix("p").unwrap(), inst.matrix("q").unwrap());
            p.rank() == 1 && p.is_idempotent() && !q.is_zero() && (q * q).is_zero() && !(q * p).is_zero()
        });
        assert!(found);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(gen_element(&spec(GenKind::Unit, 0, 1)).is_err());
        let mut s = spec(GenKind::Unit, 2, 1);
        s.entry_bound = 0;
        assert!(gen_element(&s).is_err());
        assert!("thm9".parse::<GenKind>().is_err());
        assert_eq!("pq_zero".parse::<GenKind>().unwrap(), GenKind::PqZero);
    }

    #[test]
    fn conjugation_is_unimodular() {
        let a = Matrix::from_int_rows(&[[2, 1, 0], [0, 0, 1], [0, 0, 0]]);
        let mut saw_identity = false;
        for seed in 0..64 {
            let c = similarity_conjugate(&a, seed).unwrap();
            assert!((&c.s * &c.s_inv).is_identity());
            let det = c.s.determinant().unwrap();
            assert!(det == GaussianRational::one() || det == -GaussianRational::one());
            assert_eq!(c.conjugated, &(&c.s * &a) * &c.s_inv);
            if c.s.is_identity() {
                saw_identity = true;
                assert_eq!(c.conjugated, a);
            }
            let d = drazin_inverse(&a).unwrap().a_d;
            assert_eq!(drazin_inverse(&c.conjugated).unwrap().a_d, &(&c.s * &d) * &c.s_inv);
        }
        assert!(saw_identity);
    }

    #[test]
    fn trial_seeds_are_distinct() {
        let seeds: std::collections::HashSet<_> = (0..1000).map(|i| derive_seed(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(derive_seed(42, 7), derive_seed(42, 7));
    }

    #[test]
    fn instance_json_round_trip() {
        let inst = gen_theorem_instance(&spec(GenKind::SplitChain, 2, 5)).unwrap();
        let text = serde_json::to_string(&inst).unwrap();
        let back: Instance = serde_json::from_str(&text).unwrap();
        assert_eq!(back, inst);
    }
}
