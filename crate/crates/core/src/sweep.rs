//! Invariant suites run over every system on `n <= 4` canonical dimensions,
//! or over seeded random systems.
//!
//! Work is sharded with rayon. Results do not depend on the worker count:
//! random system `i` is drawn from its own ChaCha stream, and the reported
//! counterexample is always the one with the smallest index.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{
    apply_sequence, bool_inter, bool_union, down_shift, shatters_via_ops, sshatters_via_ops,
    sstr_via_shifts, str_via_shifts, Op, OpSequence, MAX_SHIFT_DIMS,
};
use crate::se::{
    is_k_se, is_se, refined_bool_commutation, refined_bool_sequences, refined_shift_confluence,
    SeMethod,
};
use crate::shattering::{
    is_maximum, sandwich, shatters, sstr_family, str_family, strongly_shatters,
};
use crate::system::{canonical_dims, Cube, DimSet, System};

/// Largest `n` for exhaustive sweeps (2^(2^n) systems).
pub const MAX_EXHAUSTIVE_DIMS: usize = 4;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// `|sstr| <= |S| <= |str|`
    Sandwich,
    /// All supported SE methods return the same verdict.
    SeAgreement,
    /// `SE(S)`, `SE(¬S)`, lopsided and dual lopsided coincide.
    Lopsided,
    /// `|str(S)| + |sstr(¬S)| = 2^n`, split by split.
    Duality,
    /// `⋒_Y(¬S) = ¬⊎_Y(S)` and `⊎_Y(¬S) = ¬⋒_Y(S)` for all `Y`.
    Demorgan,
    /// Intersections-first `⊆ Q(S) ⊆` unions-first for singleton sequences.
    Hierarchy,
    /// Operator and shift characterizations of shattering.
    Characterization,
    /// SE survives restrictions, Boolean operators and down-shifts.
    Preservation,
    /// k-SE, refined Boolean commutation and refined shift confluence coincide.
    KSe,
    /// Maximum systems are SE.
    Maximum,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Sandwich,
        Suite::SeAgreement,
        Suite::Lopsided,
        Suite::Duality,
        Suite::Demorgan,
        Suite::Hierarchy,
        Suite::Characterization,
        Suite::Preservation,
        Suite::KSe,
        Suite::Maximum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Sandwich => "sandwich",
            Suite::SeAgreement => "se-agreement",
            Suite::Lopsided => "lopsided",
            Suite::Duality => "duality",
            Suite::Demorgan => "demorgan",
            Suite::Hierarchy => "hierarchy",
            Suite::Characterization => "characterization",
            Suite::Preservation => "preservation",
            Suite::KSe => "k-se",
            Suite::Maximum => "maximum",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            Error::InvalidInput(format!(
                "unknown suite `{s}`; expected one of {}",
                Suite::ALL.iter().map(|x| x.name()).join(", ")
            ))
        })
    }
}

/// A failed check, described in words.
type Verdict = Option<String>;

fn fail_if(cond: bool, msg: impl FnOnce() -> String) -> Verdict {
    cond.then(msg)
}

fn se(s: &System) -> bool {
    is_se(s, SeMethod::ByDefinition).expect("by_definition has no capacity limit")
}

fn check_sandwich(s: &System) -> Result<Verdict> {
    sandwich(s).map(|_| None)
}

fn check_se_agreement(s: &System) -> Result<Verdict> {
    let mut verdicts = Vec::new();
    for m in SeMethod::ALL.into_iter().filter(|m| m.supports(s.n())) {
        verdicts.push((m, is_se(s, m)?));
    }
    Ok(fail_if(verdicts.iter().map(|v| v.1).dedup().count() > 1, || {
        format!(
            "methods disagree: {}",
            verdicts.iter().map(|(m, v)| format!("{m}={v}")).join(" ")
        )
    }))
}

fn check_lopsided(s: &System) -> Result<Verdict> {
    let row = [
        se(s),
        se(&s.complement()),
        is_se(s, SeMethod::Lopsided)?,
        is_se(s, SeMethod::DualLopsided)?,
    ];
    Ok(fail_if(row.iter().dedup().count() > 1, || {
        format!("SE(S), SE(¬S), lopsided, dual lopsided = {row:?}")
    }))
}

fn check_duality(s: &System) -> Result<Verdict> {
    let c = s.complement();
    let total = 1usize << s.n();
    if str_family(s).len() + sstr_family(&c).len() != total {
        return Ok(Some("|str(S)| + |sstr(¬S)| != 2^n".into()));
    }
    let all = s.all_dims();
    for y in all.subsets() {
        if shatters(s, y)? == strongly_shatters(&c, all.minus(y))? {
            return Ok(Some(format!(
                "split {{{}}} has both or neither of: S shatters it, ¬S strongly shatters the rest",
                s.labels_of(y).join(",")
            )));
        }
    }
    Ok(None)
}

fn check_demorgan(s: &System) -> Result<Verdict> {
    let c = s.complement();
    for y in s.all_dims().subsets() {
        let labels = s.labels_of(y).join(",");
        if bool_inter(&c, y)? != bool_union(s, y)?.complement() {
            return Ok(Some(format!("⋒_{{{labels}}}(¬S) != ¬⊎_{{{labels}}}(S)")));
        }
        if bool_union(&c, y)? != bool_inter(s, y)?.complement() {
            return Ok(Some(format!("⊎_{{{labels}}}(¬S) != ¬⋒_{{{labels}}}(S)")));
        }
    }
    Ok(None)
}

/// Every meaningful sequence of single-dimension Boolean operators, grouped
/// by the set of operators it uses: `(inter dims, union dims, orderings)`.
fn singleton_sequences(s: &System) -> impl Iterator<Item = (Vec<String>, Vec<String>, Vec<OpSequence>)> + '_ {
    s.all_dims().subsets().flat_map(move |z| {
        let labels = s.labels_of(z);
        DimSet::full(labels.len()).subsets().map(move |kinds| {
            let ops: Vec<Op> = labels
                .iter()
                .enumerate()
                .map(|(i, l)| if kinds.contains(i) { Op::inter(&[l]) } else { Op::union(&[l]) })
                .collect();
            let inter: Vec<String> = kinds.iter().map(|i| labels[i].clone()).collect();
            let union: Vec<String> = DimSet::full(labels.len())
                .minus(kinds)
                .iter()
                .map(|i| labels[i].clone())
                .collect();
            let orders = ops
                .iter()
                .cloned()
                .permutations(ops.len())
                .map(OpSequence::new)
                .collect();
            (inter, union, orders)
        })
    })
}

fn check_hierarchy(s: &System) -> Result<Verdict> {
    for (inter, union, orders) in singleton_sequences(s) {
        let inters_first = OpSequence::new(vec![Op::inter(&inter), Op::union(&union)]);
        let unions_first = OpSequence::new(vec![Op::union(&union), Op::inter(&inter)]);
        let lo = apply_sequence(s, &inters_first)?;
        let hi = apply_sequence(s, &unions_first)?;
        for q in orders {
            let mid = apply_sequence(s, &q)?;
            if !lo.is_subsystem(&mid)? || !mid.is_subsystem(&hi)? {
                return Ok(Some(format!("`{q}` escapes the intersections-first/unions-first bounds")));
            }
        }
    }
    Ok(None)
}

fn check_characterization(s: &System) -> Result<Verdict> {
    for y in s.all_dims().subsets() {
        let labels = s.labels_of(y).join(",");
        if shatters_via_ops(s, y)? != shatters(s, y)? {
            return Ok(Some(format!("shatters_via_ops disagrees on {{{labels}}}")));
        }
        if sshatters_via_ops(s, y)? != strongly_shatters(s, y)? {
            return Ok(Some(format!("sshatters_via_ops disagrees on {{{labels}}}")));
        }
    }
    if s.n() <= MAX_SHIFT_DIMS {
        if str_via_shifts(s)? != str_family(s) {
            return Ok(Some("str_via_shifts != str".into()));
        }
        if sstr_via_shifts(s)? != sstr_family(s) {
            return Ok(Some("sstr_via_shifts != sstr".into()));
        }
    }
    Ok(None)
}

fn check_preservation(s: &System) -> Result<Verdict> {
    if !se(s) {
        return Ok(None);
    }
    for y in s.all_dims().subsets() {
        for cube in Cube::all_with_free(s, y) {
            if !se(&s.restrict(&cube)?) {
                return Ok(Some(format!("restriction to {:?} is not SE", cube.fixed())));
            }
        }
        let labels = s.labels_of(y).join(",");
        if !se(&bool_inter(s, y)?) {
            return Ok(Some(format!("⋒_{{{labels}}}(S) is not SE")));
        }
        if !se(&bool_union(s, y)?) {
            return Ok(Some(format!("⊎_{{{labels}}}(S) is not SE")));
        }
    }
    for x in s.dims() {
        if !se(&down_shift(s, x)?) {
            return Ok(Some(format!("down-shift on {x} is not SE")));
        }
    }
    Ok(None)
}

fn check_k_se(s: &System) -> Result<Verdict> {
    for k in 0..=s.n() {
        let mut row = vec![
            is_k_se(s, k),
            refined_bool_commutation(s, k),
            refined_bool_sequences(s, k)?,
        ];
        if k.min(s.n()) <= MAX_SHIFT_DIMS {
            row.push(refined_shift_confluence(s, k)?);
        }
        if row.iter().dedup().count() > 1 {
            return Ok(Some(format!(
                "k = {k}: k-SE, refined commutation, refined sequences, refined confluence = {row:?}"
            )));
        }
    }
    Ok(None)
}

fn check_maximum(s: &System) -> Result<Verdict> {
    Ok(fail_if(is_maximum(s) && !se(s), || "maximum but not SE".into()))
}

/// Runs one suite on one system. `Ok(Some(reason))` is a counterexample.
/// Theorem violations raised inside the library are reported the same way.
pub fn check(suite: Suite, s: &System) -> Result<Verdict> {
    let r = match suite {
        Suite::Sandwich => check_sandwich(s),
        Suite::SeAgreement => check_se_agreement(s),
        Suite::Lopsided => check_lopsided(s),
        Suite::Duality => check_duality(s),
        Suite::Demorgan => check_demorgan(s),
        Suite::Hierarchy => check_hierarchy(s),
        Suite::Characterization => check_characterization(s),
        Suite::Preservation => check_preservation(s),
        Suite::KSe => check_k_se(s),
        Suite::Maximum => check_maximum(s),
    };
    match r {
        Err(Error::TheoremViolation { what, .. }) => Ok(Some(what)),
        other => other,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub index: u64,
    pub reason: String,
    /// The system in file form.
    pub system: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepOutcome {
    pub suite: Suite,
    pub n: usize,
    pub mode: &'static str,
    pub seed: Option<u64>,
    pub checked: u64,
    pub counterexample: Option<Counterexample>,
    /// An SE system that is not maximum, found by the `maximum` suite.
    pub se_not_maximum: Option<String>,
}

impl SweepOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for SweepOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite: {}", self.suite)?;
        writeln!(f, "n: {}", self.n)?;
        writeln!(f, "mode: {}", self.mode)?;
        if let Some(seed) = self.seed {
            writeln!(f, "seed: {seed}")?;
        }
        writeln!(f, "systems: {}", self.checked)?;
        if let Some(w) = &self.se_not_maximum {
            writeln!(f, "se_not_maximum:")?;
            f.write_str(w)?;
        }
        match &self.counterexample {
            None => writeln!(f, "result: pass"),
            Some(c) => {
                writeln!(f, "result: fail")?;
                writeln!(f, "index: {}", c.index)?;
                writeln!(f, "reason: {}", c.reason)?;
                f.write_str(&c.system)
            }
        }
    }
}

/// The `i`-th random system of a seeded sweep: each vertex kept with
/// probability 1/2, drawn from stream `i` of the seed.
pub fn random_system(n: usize, seed: u64, i: u64) -> Result<System> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    System::from_fn(canonical_dims(n), |_| rng.gen::<bool>())
}

fn run<F>(count: u64, jobs: Option<usize>, suite: Suite, system_at: F) -> Result<(Option<Counterexample>, Option<String>)>
where
    F: Fn(u64) -> Result<System> + Sync,
{
    let work = || -> Result<(Option<Counterexample>, Option<String>)> {
        let first = (0..count)
            .into_par_iter()
            .map(|i| -> (u64, Result<(System, Verdict)>) {
                (i, system_at(i).and_then(|s| check(suite, &s).map(|v| (s, v))))
            })
            .find_first(|(_, r)| !matches!(r, Ok((_, None))));
        let counterexample = match first {
            None => None,
            Some((_, Err(e))) => return Err(e),
            Some((index, Ok((s, reason)))) => Some(Counterexample {
                index,
                reason: reason.expect("filtered on failure"),
                system: s.serialize(),
            }),
        };
        let witness = if suite == Suite::Maximum {
            (0..count)
                .into_par_iter()
                .filter_map(|i| system_at(i).ok())
                .find_first(|s| se(s) && !is_maximum(s))
                .map(|s| s.serialize())
        } else {
            None
        };
        Ok((counterexample, witness))
    };
    match jobs {
        None => work(),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?
            .install(work),
    }
}

/// Every one of the `2^(2^n)` systems on `x1 .. xn`, for `n <= 4`.
pub fn sweep_exhaustive(n: usize, suite: Suite, jobs: Option<usize>) -> Result<SweepOutcome> {
    if n > MAX_EXHAUSTIVE_DIMS {
        return Err(Error::Capacity(format!(
            "exhaustive sweep over {n} dimensions means 2^{} systems; the limit is n = {MAX_EXHAUSTIVE_DIMS}",
            1u64 << n
        )));
    }
    let dims: std::sync::Arc<[String]> = canonical_dims(n).into();
    let count = 1u64 << (1u64 << n);
    let (counterexample, se_not_maximum) =
        run(count, jobs, suite, |w| Ok(System::from_word(dims.clone(), w)))?;
    Ok(SweepOutcome {
        suite,
        n,
        mode: "exhaustive",
        seed: None,
        checked: count,
        counterexample,
        se_not_maximum,
    })
}

/// `count` random systems on `x1 .. xn`, reproducible from `seed`.
pub fn sweep_random(n: usize, suite: Suite, count: u64, seed: u64, jobs: Option<usize>) -> Result<SweepOutcome> {
    if n > crate::system::MAX_DIMS {
        return Err(Error::Capacity(format!("{n} dimensions exceeds the cap")));
    }
    let (counterexample, se_not_maximum) = run(count, jobs, suite, |i| random_system(n, seed, i))?;
    Ok(SweepOutcome {
        suite,
        n,
        mode: "random",
        seed: Some(seed),
        checked: count,
        counterexample,
        se_not_maximum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn small_sweeps_pass() {
        let out = sweep_exhaustive(3, Suite::Sandwich, None).unwrap();
        assert!(out.passed());
        assert_eq!(out.checked, 256);
        let out = sweep_exhaustive(2, Suite::SeAgreement, Some(1)).unwrap();
        assert!(out.passed());
        assert_eq!(out.checked, 16);
        assert!(out.to_string().ends_with("result: pass\n"));
    }

    #[test]
    fn every_suite_passes_at_two_dims() {
        for suite in Suite::ALL {
            let out = sweep_exhaustive(2, suite, None).unwrap();
            assert!(out.passed(), "{suite}: {:?}", out.counterexample);
        }
    }

    #[test]
    fn exhaustive_capacity() {
        assert!(matches!(
            sweep_exhaustive(5, Suite::Sandwich, None),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn random_systems_are_reproducible() {
        assert_eq!(random_system(5, 7, 3).unwrap(), random_system(5, 7, 3).unwrap());
        assert_ne!(random_system(5, 7, 3).unwrap(), random_system(5, 7, 4).unwrap());
        let a = sweep_random(4, Suite::Lopsided, 50, 9, Some(1)).unwrap();
        let b = sweep_random(4, Suite::Lopsided, 50, 9, Some(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn maximum_suite_reports_a_witness() {
        let out = sweep_exhaustive(2, Suite::Maximum, None).unwrap();
        assert!(out.passed());
        let w = System::parse(out.se_not_maximum.as_deref().unwrap()).unwrap();
        assert!(se(&w) && !is_maximum(&w));
    }

    #[test]
    fn errors_come_from_the_earliest_index() {
        let dims: std::sync::Arc<[String]> = canonical_dims(2).into();
        let err = run(16, Some(3), Suite::Sandwich, |w| {
            if w >= 5 {
                Err(Error::InvalidInput(format!("{w}")))
            } else {
                Ok(System::from_word(dims.clone(), w))
            }
        })
        .unwrap_err();
        assert_eq!(err.to_string(), "invalid input: 5");
    }
}
