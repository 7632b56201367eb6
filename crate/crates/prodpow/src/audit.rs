//! Brute-force enumeration of true solutions and family audits.
//!
//! The enumeration here is the independent oracle everything else is
//! measured against: it lists *all* tuples `(x1..x_{m-1}, z)` with
//! `z <= z_bound` and `prod(x_i) = z^n` by walking `z` upward and
//! splitting `z^n` into ordered factor tuples via divisor recursion. It
//! deliberately never touches the generate/decompose code paths — an
//! oracle that shares code with the system under test audits nothing —
//! and the bound is placed on `z`, not on the `x_i`, so the audited
//! solution set is finite and exactly characterized.
//!
//! Two audit styles build on it:
//!
//! - **soundness**: draw seeded random parameter assignments for a family,
//!   instantiate, and check every defining equation by exact
//!   multiplication;
//! - **completeness**: push every enumerated solution through
//!   decompose-then-generate and record the mismatches as coverage gaps.
//!
//! Audits are deterministic for a fixed seed. Reports serialize without
//! the wall-clock field, so equal runs produce byte-identical documents.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::arith::{divisors_with_guard, Nat, DEFAULT_DIVISOR_GUARD};
use crate::fixtures::EquationShape;
use crate::general::{decompose, generate, random_tree, Solution};
use crate::monomial::{instantiate, ParametricFamily};
use crate::rng::SplitMix64;
use crate::{Error, Recovery};

/// One recorded soundness failure: the assignment and the equation it
/// violated.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SoundFailure {
    pub assignment: BTreeMap<String, Nat>,
    pub equation: String,
}

/// Outcome of an audit run.
///
/// `elapsed_secs` is filled by callers that can read a clock; it is
/// excluded from serialization so that reports for the same seed are
/// byte-identical across runs.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AuditReport {
    pub family_id: String,
    pub checked: u64,
    pub sound_failures: Vec<SoundFailure>,
    pub coverage_gaps: Vec<Solution>,
    #[cfg_attr(feature = "serde", serde(skip))]
    pub elapsed_secs: f64,
}

impl AuditReport {
    fn new(family_id: String) -> Self {
        AuditReport {
            family_id,
            checked: 0,
            sound_failures: Vec::new(),
            coverage_gaps: Vec::new(),
            elapsed_secs: 0.0,
        }
    }

    pub fn clean(&self) -> bool {
        self.sound_failures.is_empty() && self.coverage_gaps.is_empty()
    }
}

/// Ordered factor tuples: all ways to write `value` as a product of
/// `slots` ordered positive factors, divisors ascending at each slot.
fn ordered_factorizations(value: &Nat, slots: usize, guard: u64) -> Result<Vec<Vec<Nat>>, Error> {
    if slots == 1 {
        return Ok(alloc::vec![alloc::vec![value.clone()]]);
    }
    let mut out = Vec::new();
    for d in divisors_with_guard(value, guard)? {
        let rest = value.div_exact(&d).expect("divisor divides");
        for mut tail in ordered_factorizations(&rest, slots - 1, guard)? {
            let mut tuple = Vec::with_capacity(slots);
            tuple.push(d.clone());
            tuple.append(&mut tail);
            out.push(tuple);
        }
    }
    Ok(out)
}

/// Iterator over all solutions with `z` in `[z_from, z_to]`, in
/// deterministic order: `z` ascending, factor tuples lexicographic by
/// ascending divisor.
pub struct SolutionIter {
    m: usize,
    n: u32,
    z_to: u64,
    guard: u64,
    z_next: u64,
    pending: Vec<Solution>,
}

impl Iterator for SolutionIter {
    type Item = Solution;

    fn next(&mut self) -> Option<Solution> {
        loop {
            if let Some(s) = self.pending.pop() {
                return Some(s);
            }
            if self.z_next > self.z_to {
                return None;
            }
            let z = Nat::from_u64(self.z_next).expect("positive");
            self.z_next += 1;
            let power = z.pow(self.n);
            let tuples = ordered_factorizations(&power, self.m - 1, self.guard)
                .expect("guard verified at construction");
            // Stored reversed so pop() yields ascending order.
            self.pending = tuples
                .into_iter()
                .rev()
                .map(|xs| Solution::new(xs, z.clone(), self.n).expect("factorization is exact"))
                .collect();
        }
    }
}

/// Enumerates every solution with `z <= z_bound`. Errors up front when
/// `z_bound^n` would exceed the divisor-enumeration guard.
pub fn enumerate_solutions(m: usize, n: u32, z_bound: u64) -> Result<SolutionIter, Error> {
    enumerate_range(m, n, 1, z_bound)
}

/// Range form of [`enumerate_solutions`] for callers that partition the
/// `z` interval across workers; concatenating the per-range outputs in
/// interval order reproduces the full enumeration exactly.
pub fn enumerate_range(m: usize, n: u32, z_from: u64, z_to: u64) -> Result<SolutionIter, Error> {
    if m < 3 || n < 2 {
        return Err(Error::Precondition("need m >= 3 and n >= 2"));
    }
    if z_from < 1 {
        return Err(Error::Precondition("z range starts at 1"));
    }
    // The largest value whose divisors get enumerated is z_to^n.
    let within_guard = Nat::from_u64(z_to.max(1))
        .map(|z| z.pow(n).to_u64().map(|v| v <= DEFAULT_DIVISOR_GUARD))
        .ok()
        .flatten()
        .unwrap_or(false);
    if z_to >= 1 && !within_guard {
        return Err(Error::GuardExceeded {
            bound: DEFAULT_DIVISOR_GUARD,
        });
    }
    Ok(SolutionIter {
        m,
        n,
        z_to,
        guard: DEFAULT_DIVISOR_GUARD,
        z_next: z_from,
        pending: Vec::new(),
    })
}

/// Draws seeded assignments for `family`, instantiates, and checks every
/// equation by exact multiplication. Values are drawn from
/// `1..=value_bound`.
pub fn audit_soundness(
    family_id: &str,
    family: &ParametricFamily,
    equations: &[EquationShape],
    samples: u64,
    seed: u64,
    value_bound: u64,
) -> Result<AuditReport, Error> {
    let mut report = AuditReport::new(family_id.to_string());
    let mut rng = SplitMix64::new(seed);
    let params = family.parameters();
    for _ in 0..samples {
        let mut assignment = BTreeMap::new();
        for p in &params {
            assignment.insert(p.clone(), Nat::from_u64(rng.next_in(1, value_bound))?);
        }
        let inst = instantiate(family, &assignment)?;
        report.checked += 1;
        for eq in equations {
            let mut prod = Nat::one();
            for v in &eq.lhs {
                prod = &prod
                    * inst
                        .values
                        .get(v)
                        .ok_or_else(|| Error::UnknownVariable(v.clone()))?;
            }
            let rhs = inst
                .values
                .get(&eq.rhs)
                .ok_or_else(|| Error::UnknownVariable(eq.rhs.clone()))?
                .pow(eq.n);
            if prod != rhs {
                report.sound_failures.push(SoundFailure {
                    assignment: assignment.clone(),
                    equation: format!("{} = {}^{}", eq.lhs.join("*"), eq.rhs, eq.n),
                });
            }
        }
    }
    Ok(report)
}

/// Generator-style soundness audit: random parameter trees at `(m, n)`
/// are generated into tuples and the defining product is recomputed by
/// multiplication. `Solution` construction already proves the equation,
/// so any failure here is recorded as a defect-level finding.
pub fn audit_tree_soundness(
    m: usize,
    n: u32,
    samples: u64,
    seed: u64,
    value_bound: u64,
) -> Result<AuditReport, Error> {
    let mut report = AuditReport::new(format!("tree-generator(m={m}, n={n})"));
    let mut rng = SplitMix64::new(seed);
    for _ in 0..samples {
        let tree = random_tree(m, n, &mut rng, value_bound);
        let solution = generate(&tree, m, n)?;
        report.checked += 1;
        let mut prod = Nat::one();
        for x in solution.xs() {
            prod = &prod * x;
        }
        if prod != solution.z().pow(n) {
            report.sound_failures.push(SoundFailure {
                assignment: BTreeMap::new(),
                equation: format!("prod(xs) = z^{n}"),
            });
        }
    }
    Ok(report)
}

/// Pushes every enumerated solution at `(m, n, z <= z_bound)` through
/// decompose-then-generate; mismatches and unreachable solutions are the
/// coverage gaps.
pub fn audit_completeness(m: usize, n: u32, z_bound: u64) -> Result<AuditReport, Error> {
    audit_completeness_range(m, n, 1, z_bound)
}

/// Range form of [`audit_completeness`]; reports for adjacent ranges
/// merge by concatenation.
pub fn audit_completeness_range(
    m: usize,
    n: u32,
    z_from: u64,
    z_to: u64,
) -> Result<AuditReport, Error> {
    let mut report = AuditReport::new(format!("tree-family(m={m}, n={n}, z<={z_to})"));
    for solution in enumerate_range(m, n, z_from, z_to)? {
        report.checked += 1;
        match decompose(&solution)? {
            Recovery::Recovered(tree) => {
                let regen = generate(&tree, m, n)?;
                if regen != solution {
                    report.coverage_gaps.push(solution);
                }
            }
            Recovery::Gap => report.coverage_gaps.push(solution),
        }
    }
    Ok(report)
}

/// Merges range reports produced by [`audit_completeness_range`]; the
/// merge is associative, so any partition of the `z` interval yields the
/// same final report.
pub fn merge_reports(reports: Vec<AuditReport>) -> Option<AuditReport> {
    let mut rest = reports.into_iter();
    let mut merged = rest.next()?;
    for r in rest {
        merged.checked += r.checked;
        merged.sound_failures.extend(r.sound_failures);
        merged.coverage_gaps.extend(r.coverage_gaps);
        merged.elapsed_secs += r.elapsed_secs;
    }
    Some(merged)
}
