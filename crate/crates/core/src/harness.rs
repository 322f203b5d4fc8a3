//! Randomized verification suites, one per theorem identifier.
//!
//! A suite draws `trials` instances from seeds derived from a master seed,
//! runs the certified construction on each, and compares the result with an
//! independent computation (usually the direct Drazin inverse of the
//! relevant matrix). Generation and checking are separate: a check depends
//! only on the [`Instance`], so a dumped failure replays without the RNG.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::anti_triangular::{
    idempotent_pair_chain, commuting_chain, core_chain, companion_extract, companion_power_check, idempotent_chain,
    split_chain, Block2x2, ChainOutcome,
};
use crate::decompositions::{
    strongly_drazin_scaler, corner_characterize, euw_decompose, invariant_splitting, quasipolar,
    strongly_drazin_check, refine_witness, is_drazin_witness, two_units, Certificates,
};
use crate::drazin::{
    additive_pq_zero, cline_transfer, commuting_product_drazin, drazin_inverse, verify_drazin_axioms,
};
use crate::error::{Error, Result};
use crate::instance_gen::{derive_seed, gen_cline_pair, gen_element, GenKind, GenSpec, Instance};
use crate::matrix::Matrix;

pub const THEOREM_IDS: [&str; 18] = [
    "lem2.1",
    "thm2.2",
    "cor2.3",
    "cor2.4",
    "thm2.5",
    "cor2.6",
    "thm2.7",
    "cor2.8",
    "lem3.1",
    "lem3.2",
    "thm3.3",
    "cor3.4",
    "lem3.5",
    "thm3.6",
    "cor3.7",
    "cline",
    "pq-additive",
    "commuting-product",
];

/// Largest power checked by the `lem3.1` suite.
pub const COMPANION_MAX_POWER: u32 = 12;

const ELEMENT_KINDS: [GenKind; 4] = [
    GenKind::Nilpotent,
    GenKind::Idempotent,
    GenKind::Unit,
    GenKind::DrazinStructured,
];

pub fn validate_theorem_id(id: &str) -> Result<()> {
    if THEOREM_IDS.contains(&id) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "unknown theorem id '{id}'; valid ids: {}",
            THEOREM_IDS.join(", ")
        )))
    }
}

/// The generator spec a suite uses for one trial.
pub fn trial_spec(theorem_id: &str, size: usize, trial_seed: u64, entry_bound: i64) -> GenSpec {
    let kind = match theorem_id {
        "thm2.2" | "commuting-product" => GenKind::CommutingWitness,
        "thm3.3" | "cor3.4" => GenKind::IdempotentChain,
        "lem3.5" => GenKind::CoreChain,
        "thm3.6" => GenKind::SplitChain,
        "cor3.7" => GenKind::CommutingChain,
        "pq-additive" => GenKind::PqZero,
        "cline" | "lem3.1" | "lem3.2" => GenKind::DrazinStructured,
        _ => ELEMENT_KINDS[(trial_seed % ELEMENT_KINDS.len() as u64) as usize],
    };
    GenSpec {
        seed: trial_seed,
        size,
        entry_bound,
        kind,
    }
}

/// Draws the instance a suite checks for `spec`.
pub fn generate(theorem_id: &str, spec: &GenSpec) -> Result<Instance> {
    validate_theorem_id(theorem_id)?;
    match theorem_id {
        "cline" => gen_cline_pair(spec.seed, spec.size, spec.entry_bound),
        "cor3.4" => {
            let inst = gen_element(spec)?;
            Ok(Instance::new()
                .with("a", inst.matrix("a")?.clone())
                .with("b", inst.matrix("c")?.clone()))
        }
        "thm2.2" => {
            // Turn a commuting polynomial into a witness: x = a^d + x0 a^pi.
            let inst = gen_element(spec)?;
            let (a, x0) = (inst.matrix("a")?, inst.matrix("x")?);
            let dr = drazin_inverse(a)?;
            let x = &dr.a_d + &(x0 * &dr.a_pi);
            Ok(Instance::new().with("a", a.clone()).with("x", x))
        }
        "lem2.1" => {
            // Pair the draw with a matrix that is strongly Drazin by construction.
            let inst = gen_element(spec)?;
            let a = inst.matrix("a")?.clone();
            let dr = drazin_inverse(&a)?;
            let s = &(&a * &dr.a_d) + &(&a * &dr.a_pi);
            Ok(Instance::new().with("a", a).with("s", s))
        }
        _ => gen_element(spec),
    }
}

/// Runs the check for `theorem_id` on `inst`. `Ok(None)` means it passed;
/// `Ok(Some(name))` names the first failed certificate.
pub fn check_instance(theorem_id: &str, inst: &Instance) -> Result<Option<String>> {
    validate_theorem_id(theorem_id)?;
    let mut v = Verdict::default();
    let outcome = run_check(theorem_id, inst, &mut v);
    // A certificate that failed before an error is the more precise report.
    Ok(v.failed.or_else(|| outcome.err().map(|e| format!("error: {e}"))))
}

#[derive(Default)]
struct Verdict {
    failed: Option<String>,
}

impl Verdict {
    fn require(&mut self, name: &str, holds: bool) {
        if !holds && self.failed.is_none() {
            self.failed = Some(name.to_string());
        }
    }

    fn certificates(&mut self, prefix: &str, c: &Certificates) {
        for name in c.names() {
            let holds = c.get(name).unwrap_or(false);
            self.require(&format!("{prefix}: {name}"), holds);
        }
    }

    fn chain(&mut self, prefix: &str, out: &ChainOutcome, m: &Matrix, bc: &Matrix) -> Result<()> {
        self.certificates(prefix, &out.certificates);
        self.require("M^d = direct drazin(M)", out.m_d == drazin_inverse(m)?.a_d);
        self.require("(bc)^d = direct drazin(bc)", out.bc_d == drazin_inverse(bc)?.a_d);
        Ok(())
    }
}

fn anti(a: &Matrix, b: &Matrix, c: &Matrix) -> Result<Matrix> {
    Ok(Block2x2::anti_triangular(a, b, c)?.embedded)
}

fn run_check(theorem_id: &str, inst: &Instance, v: &mut Verdict) -> Result<()> {
    let a = inst.matrix(match theorem_id {
        "pq-additive" => "p",
        _ => "a",
    })?;
    let n = a.rows();
    let id = Matrix::identity(n);
    match theorem_id {
        "lem2.1" => {
            for name in ["a", "s"] {
                let m = inst.matrix(name)?;
                let verdict = strongly_drazin_check(m)?;
                let residual = m - &(m * m);
                v.require(
                    "verdict matches (a - a^2)^n = 0",
                    verdict.strongly_drazin == residual.pow(n as u32)?.is_zero(),
                );
                v.certificates("lem2.1", &verdict.certificates);
                if let Some(e) = &verdict.e {
                    // The idempotent is unique: it must be the spectral one at 1.
                    v.require("e = a a^d", *e == m * &drazin_inverse(m)?.a_d);
                }
            }
            v.require("constructed s is strongly drazin", strongly_drazin_check(inst.matrix("s")?)?.strongly_drazin);
        }
        "thm2.2" => {
            let x = inst.matrix("x")?;
            v.require("x is a witness", is_drazin_witness(a, x)?);
            let r = refine_witness(a, x)?;
            v.certificates("thm2.2", &r.certificates);
            v.require("refined a_d = direct drazin(a)", r.a_d == drazin_inverse(a)?.a_d);
            v.require("e idempotent", r.e.is_idempotent());
        }
        "cor2.3" => {
            let s = strongly_drazin_scaler(a)?;
            v.certificates("cor2.3", &s.certificates);
            let au = a * &s.u;
            v.require("u invertible", s.u.is_invertible()?);
            v.require("u commutes with a", s.u.commutes(a)?);
            v.require("au - (au)^2 nilpotent", (&au - &(&au * &au)).is_nilpotent()?);
        }
        "cor2.4" => {
            let dr = drazin_inverse(a)?;
            let q = quasipolar(a, None)?;
            v.certificates("cor2.4", &q.certificates);
            v.require("b = direct drazin(a)", q.b == dr.a_d);
            let given = quasipolar(a, Some(&dr.a_pi))?;
            v.certificates("cor2.4 given p", &given.certificates);
            v.require("b from given p = direct drazin(a)", given.b == dr.a_d);
        }
        "thm2.5" => {
            let d = euw_decompose(a)?;
            v.certificates("thm2.5", &d.certificates);
            v.require("a = eu + w", &(&d.e * &d.u) + &d.w == *a);
            v.require("e idempotent", d.e.is_idempotent());
            v.require("u invertible", d.u.is_invertible()?);
            v.require("w nilpotent", d.w.is_nilpotent()?);
            v.require("e, u, w commute", d.e.commutes(&d.u)? && d.e.commutes(&d.w)? && d.u.commutes(&d.w)?);
            let u_inv = d.u.inverse_or("u")?;
            v.require("a - a^2 u^{-1} nilpotent", (a - &(&(a * a) * &u_inv)).is_nilpotent()?);
        }
        "cor2.6" => {
            let t = two_units(a)?;
            v.certificates("cor2.6", &t.certificates);
            v.require("u1 + u2 = a", &t.u1 + &t.u2 == *a);
            v.require("u1, u2 invertible", t.u1.is_invertible()? && t.u2.is_invertible()?);
        }
        "thm2.7" => {
            let dr = drazin_inverse(a)?;
            let c = corner_characterize(a, None)?;
            v.certificates("thm2.7", &c.certificates);
            v.require("reconstructed a_d = direct drazin(a)", c.a_d == dr.a_d);
            let e = &id - &dr.a_pi;
            let given = corner_characterize(a, Some(&e))?;
            v.require("a_d from given e = direct drazin(a)", given.a_d == dr.a_d);
        }
        "cor2.8" => {
            let s = invariant_splitting(a)?;
            v.certificates("cor2.8", &s.certificates);
            v.require("reassembly recovers a", s.reassemble()? == *a);
            v.require("dimensions add up", s.basis_p.len() + s.basis_q.len() == n);
            v.require("restriction to P invertible", s.restriction_p.is_invertible()?);
            v.require("restriction to Q nilpotent", s.restriction_q.is_nilpotent()?);
        }
        "lem3.1" => {
            for k in 1..=COMPANION_MAX_POWER {
                let p = companion_power_check(a, k)?;
                v.require(&format!("power {k}: M^n block form"), p.power_matches);
                v.require(&format!("power {k}: U recurrence"), p.recurrence_holds);
                v.require(&format!("power {k}: closed form = recurrence"), p.forms_agree);
            }
        }
        "lem3.2" => {
            let x = companion_extract(a)?;
            v.certificates("lem3.2", &x.certificates);
            v.require("x21 = a x12", x.x21 == a * &x.x12);
            v.require("x21 = x12 a", x.x21 == &x.x12 * a);
            v.require("x11 = x12 + x22", x.x11 == &x.x12 + &x.x22);
            v.require("a - a^2 x12 nilpotent", (a - &(&(a * a) * &x.x12)).is_nilpotent()?);
            v.require("refined a_d = direct drazin(a)", x.a_d == drazin_inverse(a)?.a_d);
        }
        "thm3.3" | "lem3.5" | "thm3.6" | "cor3.7" => {
            let (b, c) = (inst.matrix("b")?, inst.matrix("c")?);
            let out = match theorem_id {
                "thm3.3" => idempotent_chain(a, b, c)?,
                "lem3.5" => core_chain(a, b, c)?,
                "thm3.6" => split_chain(a, b, c)?,
                _ => commuting_chain(a, b, c)?,
            };
            v.chain(theorem_id, &out, &anti(a, b, c)?, &(b * c))?;
            let axioms = verify_drazin_axioms(&anti(a, b, c)?, &out.m_d)?;
            v.require("M^d satisfies the defining identities", axioms.holds());
        }
        "cor3.4" => {
            let b = inst.matrix("b")?;
            let out = idempotent_pair_chain(a, b)?;
            v.chain("cor3.4", &out, &anti(a, a, b)?, &(a * b))?;
        }
        "cline" => {
            let b = inst.matrix("b")?;
            v.require("cline = direct drazin(ba)", cline_transfer(a, b)? == drazin_inverse(&(b * a))?.a_d);
        }
        "pq-additive" => {
            let q = inst.matrix("q")?;
            v.require("pq = 0", (a * q).is_zero());
            v.require(
                "additive = direct drazin(p + q)",
                additive_pq_zero(a, q)? == drazin_inverse(&(a + q))?.a_d,
            );
        }
        "commuting-product" => {
            let x = inst.matrix("x")?;
            let lifted = commuting_product_drazin(a, x)?;
            v.require("(ax)^d = direct drazin(ax)", lifted == drazin_inverse(&(a * x))?.a_d);
            let dx = drazin_inverse(x)?.a_d;
            v.require("(ax)^d = a^d x^d", lifted == &drazin_inverse(a)?.a_d * &dx);
        }
        _ => unreachable!("theorem id validated"),
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    pub trial_seed: u64,
    pub gen_spec: GenSpec,
    pub instance: Instance,
    pub failed_certificate: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem_id: String,
    pub seed: u64,
    pub sizes: Vec<usize>,
    pub entry_bound: i64,
    pub trials: usize,
    pub passes: usize,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u64,
}

impl TheoremReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty() && self.passes == self.trials
    }

    /// Same report with timing zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> TheoremReport {
        TheoremReport {
            elapsed_ms: 0,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub entry_bound: i64,
}

impl SuiteConfig {
    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Domain("trials must be at least 1".into()));
        }
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(Error::Domain("sizes must be a non-empty list of positive integers".into()));
        }
        if self.entry_bound < 1 {
            return Err(Error::Domain("entry bound must be positive".into()));
        }
        Ok(())
    }
}

enum TrialOutcome {
    Pass,
    Fail(Box<Failure>),
}

fn run_trial(theorem_id: &str, cfg: &SuiteConfig, trial: usize) -> Result<TrialOutcome> {
    let trial_seed = derive_seed(cfg.seed, trial as u64);
    let size = cfg.sizes[trial % cfg.sizes.len()];
    let spec = trial_spec(theorem_id, size, trial_seed, cfg.entry_bound);
    let instance = generate(theorem_id, &spec)?;
    Ok(match check_instance(theorem_id, &instance)? {
        None => TrialOutcome::Pass,
        Some(failed_certificate) => TrialOutcome::Fail(Box::new(Failure {
            trial,
            trial_seed,
            gen_spec: spec,
            instance,
            failed_certificate,
        })),
    })
}

/// Runs one suite. Trials run in parallel; failures are listed by trial
/// index. Trial `i` uses size `sizes[i % sizes.len()]`.
pub fn run_suite(theorem_id: &str, cfg: &SuiteConfig) -> Result<TheoremReport> {
    validate_theorem_id(theorem_id)?;
    cfg.validate()?;
    let start = Instant::now();
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(theorem_id, cfg, i))
        .collect::<Result<_>>()?;
    let failures: Vec<Failure> = outcomes
        .into_iter()
        .filter_map(|o| match o {
            TrialOutcome::Pass => None,
            TrialOutcome::Fail(f) => Some(*f),
        })
        .collect();
    Ok(TheoremReport {
        theorem_id: theorem_id.to_string(),
        seed: cfg.seed,
        sizes: cfg.sizes.clone(),
        entry_bound: cfg.entry_bound,
        trials: cfg.trials,
        passes: cfg.trials - failures.len(),
        failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Re-runs one trial from its exact generator spec.
pub fn replay(theorem_id: &str, spec: &GenSpec) -> Result<(Instance, Option<String>)> {
    let instance = generate(theorem_id, spec)?;
    let verdict = check_instance(theorem_id, &instance)?;
    Ok((instance, verdict))
}

/// Every suite, in [`THEOREM_IDS`] order.
pub fn run_fuzz(cfg: &SuiteConfig) -> Result<Vec<TheoremReport>> {
    THEOREM_IDS.iter().map(|id| run_suite(id, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(seed: u64, sizes: &[usize], trials: usize) -> SuiteConfig {
        SuiteConfig {
            seed,
            sizes: sizes.to_vec(),
            trials,
            entry_bound: GenSpec::DEFAULT_ENTRY_BOUND,
        }
    }

    #[test]
    fn every_suite_passes_on_small_sizes() {
        for id in THEOREM_IDS {
            let r = run_suite(id, &cfg(3, &[1, 2, 3], 12)).unwrap();
            assert!(r.all_pass(), "{id}: {:?}", r.failures.first());
            assert_eq!(r.passes + r.failures.len(), r.trials);
        }
    }

    #[test]
    fn unknown_ids_list_valid_ones() {
        let err = validate_theorem_id("thm9.9").unwrap_err().to_string();
        assert!(err.contains("lem2.1") && err.contains("commuting-product"));
        assert!(run_suite("thm9.9", &cfg(1, &[2], 1)).is_err());
    }

    #[test]
    fn bad_configs_are_rejected() {
        assert!(run_suite("cline", &cfg(1, &[2], 0)).is_err());
        assert!(run_suite("cline", &cfg(1, &[], 3)).is_err());
        assert!(run_suite("cline", &cfg(1, &[0], 3)).is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite("thm3.6", &cfg(11, &[2, 3], 8)).unwrap();
        let b = run_suite("thm3.6", &cfg(11, &[2, 3], 8)).unwrap();
        assert_eq!(a.without_timing(), b.without_timing());
    }

    #[test]
    fn a_broken_instance_is_reported_and_replays_from_its_dump() {
        // Not a pq = 0 pair, so the suite's own precondition fails.
        let inst = Instance::new()
            .with("p", Matrix::from_int_rows(&[[0, 0], [1, 0]]))
            .with("q", Matrix::from_int_rows(&[[1, 0], [0, 0]]));
        let verdict = check_instance("pq-additive", &inst).unwrap();
        assert_eq!(verdict.as_deref(), Some("pq = 0"));
        let dumped = serde_json::to_string(&inst).unwrap();
        let back: Instance = serde_json::from_str(&dumped).unwrap();
        assert_eq!(check_instance("pq-additive", &back).unwrap(), verdict);
    }

    #[test]
    fn replay_matches_suite_generation() {
        let c = cfg(5, &[3], 4);
        for trial in 0..4 {
            let spec = trial_spec("lem3.5", 3, derive_seed(c.seed, trial), c.entry_bound);
            let (inst, verdict) = replay("lem3.5", &spec).unwrap();
            assert_eq!(verdict, None);
            assert_eq!(inst, generate("lem3.5", &spec).unwrap());
        }
    }
}
