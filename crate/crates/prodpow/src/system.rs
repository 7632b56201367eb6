//! Systems of product-power equations with shared variables.
//!
//! A [`SystemSpec`] lists `s` equations `x_{i1}*...*x_{i,p_i-1} = z_i^{n_i}`
//! over named variables; a variable shared between two equations couples
//! them. The solver:
//!
//! 1. parametrizes each equation independently with
//!    [`crate::general::expanded_family`], placing shared variables in the
//!    earliest slots and namespacing parameters per equation;
//! 2. for each shared variable, equates its two monomial formulas and
//!    resolves the equation `L = R` by a small deterministic rewrite
//!    system (below), substituting parameters by monomials in fresh
//!    parameters until the two sides are syntactically identical;
//! 3. verifies every equation of the final family by exponent accounting
//!    and refuses to return anything that does not pass.
//!
//! The rewrite moves are exactly the manipulations of the worked examples,
//! made generic. Writing `{u:a}` for the monomial `u^a`:
//!
//! - **cancel / force**: remove common factors; if one side is empty the
//!   other side's parameters are forced to 1;
//! - **root**: divide all exponents by their common gcd (n-th roots of
//!   equal powers are equal);
//! - **single–single** `u^a = v^b`: `u <- t^(b/g)`, `v <- t^(a/g)`;
//! - **absorb** `{u:1} = R`: `u <- R`;
//! - **matched peel** `{u:a} = q^a * rest`: `u <- q*f`;
//! - **cross force** `{u:a} = q^b * junk` (`q` the only power, junk all
//!   exponent 1): `u <- f^(b/g)`, `q <- f^(a/g)`, junk forced to 1;
//! - **spread** `{u:a} = q_1*...*q_c` with `a | c`: `q_j <- t0*t_j^a`,
//!   `u <- t0^(c/a)*prod(t_j)`;
//! - **pairwise spread** (singleton catch-all): `{u:a} = prod(q_j^b_j)`:
//!   `q_j <- t_j^(a/g_j)`, `u <- prod(t_j^(b_j/g_j))` with
//!   `g_j = gcd(a, b_j)`;
//! - **gcd split** (once per unification, the opening move): pick
//!   exponent-1 parameters `u`, `v` on opposite sides, set `u <- a*u'`,
//!   `v <- a*v'`, record `gcd(u', v') = 1`;
//! - **absorb–split**: for `u` of exponent 1 facing `q^b * junk`, split
//!   each junk parameter not known coprime to `u` as `w <- wl*wr`, set
//!   `u <- prod(wl)*c^b` and `q <- c*c'`.
//!
//! Every move is a sound substitution (instantiations of the rewritten
//! family are instantiations of the original), the total degree strictly
//! decreases, and on the two worked example systems the sequence
//! reproduces the known eleven-parameter families exactly. Anything the
//! moves cannot resolve is reported as a unification failure rather than
//! guessed at; systems with a variable in three or more equations or with
//! cyclic sharing are rejected as out of scope up front.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::fixtures::{self, EquationShape};
use crate::general::expanded_family;
use crate::monomial::{Monomial, ParametricFamily, Verdict};
use crate::Error;

/// One product-power equation: `vars[0]*...*vars[last] = z_i^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EquationSpec {
    pub vars: Vec<String>,
    pub n: u32,
}

/// A system of product-power equations. Variables are shared by reusing a
/// name across equations; the power variables are named `z1..zs`
/// automatically.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SystemSpec {
    pub equations: Vec<EquationSpec>,
}

impl SystemSpec {
    /// Scope checks. Supported systems have every shared variable in
    /// exactly two equations and an acyclic sharing graph.
    pub fn validate(&self) -> Result<(), Error> {
        if self.equations.is_empty() {
            return Err(Error::Precondition("system has no equations"));
        }
        let mut occurrences: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, eq) in self.equations.iter().enumerate() {
            if eq.n < 2 {
                return Err(Error::Precondition("every exponent must be at least 2"));
            }
            if eq.vars.len() < 2 {
                return Err(Error::Precondition(
                    "every equation needs at least two product variables",
                ));
            }
            let mut seen = BTreeSet::new();
            for v in &eq.vars {
                if !seen.insert(v.as_str()) {
                    return Err(Error::UnsupportedScope(format!(
                        "variable `{v}` repeated within one equation"
                    )));
                }
                occurrences.entry(v.as_str()).or_default().push(i);
            }
        }
        for i in 1..=self.equations.len() {
            let z = format!("z{i}");
            if occurrences.contains_key(z.as_str()) {
                return Err(Error::Precondition(
                    "variable names of the form z<i> are reserved for the power sides",
                ));
            }
        }
        for (v, eqs) in &occurrences {
            if eqs.len() > 2 {
                return Err(Error::UnsupportedScope(format!(
                    "variable `{v}` appears in {} equations; at most two are supported",
                    eqs.len()
                )));
            }
        }
        // Acyclic sharing: union-find over equations, one edge per shared
        // variable. A repeated root means a cycle (a double edge counts).
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut parent: Vec<usize> = (0..self.equations.len()).collect();
        for (v, eqs) in &occurrences {
            if eqs.len() == 2 {
                let (a, b) = (find(&mut parent, eqs[0]), find(&mut parent, eqs[1]));
                if a == b {
                    return Err(Error::UnsupportedScope(format!(
                        "sharing through `{v}` closes a cycle; only acyclic sharing is supported"
                    )));
                }
                parent[a] = b;
            }
        }
        Ok(())
    }

    /// Shared variables with their two equation indices, in name order.
    fn shared_vars(&self) -> Vec<(String, usize, usize)> {
        let mut occurrences: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, eq) in self.equations.iter().enumerate() {
            for v in &eq.vars {
                occurrences.entry(v.as_str()).or_default().push(i);
            }
        }
        occurrences
            .into_iter()
            .filter(|(_, eqs)| eqs.len() == 2)
            .map(|(v, eqs)| (v.to_string(), eqs[0], eqs[1]))
            .collect()
    }

    /// The equation shapes over the final family's variable names.
    pub fn equation_shapes(&self) -> Vec<EquationShape> {
        self.equations
            .iter()
            .enumerate()
            .map(|(i, eq)| {
                let lhs: Vec<&str> = eq.vars.iter().map(|s| s.as_str()).collect();
                EquationShape::new(&lhs, &format!("z{}", i + 1), eq.n)
            })
            .collect()
    }
}

/// A solved system: one monomial formula per variable (including the
/// `z_i`), all equations verified symbolically, with a per-variable trace
/// of how each formula came about.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SystemFamily {
    pub family: ParametricFamily,
    pub provenance: BTreeMap<String, Vec<String>>,
}

/// State of one shared-variable unification.
struct Unifier<'a> {
    /// Per-equation variable formulas, rewritten in place.
    formulas: &'a mut Vec<BTreeMap<String, Monomial>>,
    provenance: &'a mut BTreeMap<String, Vec<String>>,
    /// Known-coprime parameter pairs (family splits and gcd-split moves).
    coprime_pairs: &'a mut BTreeSet<(String, String)>,
    creation: &'a mut BTreeMap<String, usize>,
    fresh_counter: &'a mut u64,
    step_counter: u64,
    shared_var: String,
}

impl Unifier<'_> {
    fn fresh(&mut self, hint: &str) -> String {
        let name = format!("u{}{}", self.fresh_counter, hint);
        *self.fresh_counter += 1;
        let idx = self.creation.len();
        self.creation.insert(name.clone(), idx);
        name
    }

    fn rank(&self, name: &str) -> usize {
        self.creation.get(name).copied().unwrap_or(usize::MAX)
    }

    fn known_coprime(&self, a: &str, b: &str) -> bool {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.coprime_pairs
            .contains(&(key.0.to_string(), key.1.to_string()))
    }

    fn record_coprime(&mut self, a: &str, b: &str) {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.coprime_pairs.insert((a.to_string(), b.to_string()));
    }

    /// Applies `param <- repl` to every formula in the system and to both
    /// working sides, logging the step on every variable it touched.
    fn substitute(
        &mut self,
        param: &str,
        repl: &Monomial,
        lhs: &mut Monomial,
        rhs: &mut Monomial,
        what: &str,
    ) {
        let step = self.step_counter;
        let line = format!("unify {}: step {step}: {what}", self.shared_var);
        for per_eq in self.formulas.iter_mut() {
            for (var, formula) in per_eq.iter_mut() {
                let (next, hit) = formula.substitute(param, repl);
                if hit {
                    *formula = next;
                    let log = self.provenance.entry(var.clone()).or_default();
                    if log.last() != Some(&line) {
                        log.push(line.clone());
                    }
                }
            }
        }
        let (next, _) = lhs.substitute(param, repl);
        *lhs = next;
        let (next, _) = rhs.substitute(param, repl);
        *rhs = next;
        // Constraint bookkeeping: renames survive, composites drop.
        let single = if repl.len() == 1 {
            repl.iter()
                .next()
                .filter(|(_, e)| *e == 1)
                .map(|(n, _)| n.to_string())
        } else {
            None
        };
        let old: Vec<(String, String)> = self
            .coprime_pairs
            .iter()
            .filter(|(a, b)| a == param || b == param)
            .cloned()
            .collect();
        for pair in old {
            self.coprime_pairs.remove(&pair);
            if let Some(new_name) = &single {
                let (a, b) = pair;
                let a = if a == param { new_name.clone() } else { a };
                let b = if b == param { new_name.clone() } else { b };
                if a != b {
                    let (a, b) = if a <= b { (a, b) } else { (b, a) };
                    self.coprime_pairs.insert((a, b));
                }
            }
        }
    }

    /// Lowest-creation parameter of `m` with the given exponent.
    fn pick_with_exp(&self, m: &Monomial, exp: u32) -> Option<String> {
        m.iter()
            .filter(|(_, e)| *e == exp)
            .min_by_key(|(name, _)| self.rank(name))
            .map(|(name, _)| name.to_string())
    }

    fn pick_max_power(&self, m: &Monomial) -> Option<(String, u32)> {
        let max = m.iter().map(|(_, e)| e).max()?;
        if max < 2 {
            return None;
        }
        m.iter()
            .filter(|(_, e)| *e == max)
            .min_by_key(|(name, _)| self.rank(name))
            .map(|(name, _)| (name.to_string(), max))
    }

    /// Resolves `lhs = rhs`, mutating the whole system. `lhs` comes from
    /// the later equation, `rhs` from the earlier one.
    fn run(&mut self, mut lhs: Monomial, mut rhs: Monomial) -> Result<(), Error> {
        let mut gcd_split_used = false;
        for _ in 0..10_000 {
            self.step_counter += 1;
            // Cancel common parameters.
            let common: Vec<(String, u32)> = lhs
                .iter()
                .filter_map(|(name, e)| {
                    let other = rhs.exponent(name);
                    (other > 0).then(|| (name.to_string(), e.min(other)))
                })
                .collect();
            if !common.is_empty() {
                let mut strip = Monomial::one();
                for (name, e) in &common {
                    strip = strip.mul(&Monomial::var_pow(name, *e));
                }
                lhs = remove_part(&lhs, &strip);
                rhs = remove_part(&rhs, &strip);
            }
            if lhs.is_empty() && rhs.is_empty() {
                return Ok(());
            }
            // One side empty: the other collapses to 1.
            if lhs.is_empty() || rhs.is_empty() {
                let full = if lhs.is_empty() { rhs.clone() } else { lhs.clone() };
                for (name, _) in full.iter() {
                    let one = Monomial::one();
                    self.substitute(name, &one, &mut lhs, &mut rhs, &format!("force {name} = 1"));
                }
                continue;
            }
            // Root: divide all exponents by their gcd.
            let mut g = 0u32;
            for (_, e) in lhs.iter().chain(rhs.iter()) {
                g = gcd_u32(g, e);
            }
            if g > 1 {
                lhs = divide_exponents(&lhs, g);
                rhs = divide_exponents(&rhs, g);
            }
            // Single against single.
            if lhs.len() == 1 && rhs.len() == 1 {
                let (u, a) = first_entry(&lhs);
                let (v, b) = first_entry(&rhs);
                let g = gcd_u32(a, b);
                let t = self.fresh("t");
                let tu = Monomial::var_pow(&t, b / g);
                let tv = Monomial::var_pow(&t, a / g);
                self.substitute(&u, &tu, &mut lhs, &mut rhs, &format!("{u} = {t}^{}", b / g));
                self.substitute(&v, &tv, &mut lhs, &mut rhs, &format!("{v} = {t}^{}", a / g));
                continue;
            }
            // Exponent-1 singleton absorbs the other side.
            if lhs.len() == 1 && lhs.degree() == 1 {
                let (u, _) = first_entry(&lhs);
                let repl = rhs.clone();
                self.substitute(&u, &repl, &mut lhs, &mut rhs, &format!("{u} = {repl}"));
                continue;
            }
            if rhs.len() == 1 && rhs.degree() == 1 {
                let (v, _) = first_entry(&rhs);
                let repl = lhs.clone();
                self.substitute(&v, &repl, &mut lhs, &mut rhs, &format!("{v} = {repl}"));
                continue;
            }
            // Singleton-power moves.
            let singleton = if lhs.len() == 1 {
                Some(true)
            } else if rhs.len() == 1 {
                Some(false)
            } else {
                None
            };
            if let Some(on_lhs) = singleton {
                let (side, other) = if on_lhs {
                    (lhs.clone(), rhs.clone())
                } else {
                    (rhs.clone(), lhs.clone())
                };
                let (u, a) = first_entry(&side);
                // Matched peel.
                if let Some(q) = self.pick_with_exp(&other, a) {
                    let f = self.fresh("f");
                    let repl = Monomial::var(&q).mul(&Monomial::var(&f));
                    self.substitute(&u, &repl, &mut lhs, &mut rhs, &format!("{u} = {q}*{f}"));
                    continue;
                }
                // Cross force: a single power against junk.
                let powers: Vec<(String, u32)> = other
                    .iter()
                    .filter(|(_, e)| *e >= 2)
                    .map(|(n, e)| (n.to_string(), e))
                    .collect();
                if powers.len() == 1 {
                    let (q, b) = powers[0].clone();
                    // The junk is everything on the other side except q,
                    // all exponent 1; snapshot it before substituting.
                    let junk: Vec<String> = other
                        .iter()
                        .filter(|(name, _)| *name != q)
                        .map(|(n, _)| n.to_string())
                        .collect();
                    let g = gcd_u32(a, b);
                    let f = self.fresh("f");
                    let fu = Monomial::var_pow(&f, b / g);
                    let fq = Monomial::var_pow(&f, a / g);
                    self.substitute(&u, &fu, &mut lhs, &mut rhs, &format!("{u} = {f}^{}", b / g));
                    self.substitute(&q, &fq, &mut lhs, &mut rhs, &format!("{q} = {f}^{}", a / g));
                    for j in junk {
                        let one = Monomial::one();
                        self.substitute(&j, &one, &mut lhs, &mut rhs, &format!("force {j} = 1"));
                    }
                    continue;
                }
                // Spread: all exponent 1 on the other side.
                if powers.is_empty() && (other.len() as u32).is_multiple_of(a) {
                    let t0 = self.fresh("d");
                    let mut u_repl = Monomial::var_pow(&t0, other.len() as u32 / a);
                    let names: Vec<String> = other.iter().map(|(n, _)| n.to_string()).collect();
                    for q in names {
                        let tj = self.fresh("t");
                        let repl = Monomial::var(&t0).mul(&Monomial::var_pow(&tj, a));
                        self.substitute(
                            &q,
                            &repl,
                            &mut lhs,
                            &mut rhs,
                            &format!("{q} = {t0}*{tj}^{a}"),
                        );
                        u_repl = u_repl.mul(&Monomial::var(&tj));
                    }
                    self.substitute(&u, &u_repl, &mut lhs, &mut rhs, &format!("{u} = {u_repl}"));
                    continue;
                }
                // Pairwise spread, the singleton catch-all: resolve u
                // against every remaining factor independently,
                // u <- prod(t_j^(b_j/g_j)), q_j <- t_j^(a/g_j).
                {
                    let names: Vec<(String, u32)> = other
                        .iter()
                        .map(|(name, e)| (name.to_string(), e))
                        .collect();
                    let mut u_repl = Monomial::one();
                    for (q, b) in names {
                        let g = gcd_u32(a, b);
                        let tj = self.fresh("t");
                        let repl = Monomial::var_pow(&tj, a / g);
                        self.substitute(
                            &q,
                            &repl,
                            &mut lhs,
                            &mut rhs,
                            &format!("{q} = {tj}^{}", a / g),
                        );
                        u_repl = u_repl.mul(&Monomial::var_pow(&tj, b / g));
                    }
                    self.substitute(&u, &u_repl, &mut lhs, &mut rhs, &format!("{u} = {u_repl}"));
                    continue;
                }
            }
            // Opening gcd split, once.
            if !gcd_split_used {
                let lu = self.pick_with_exp(&lhs, 1);
                let rv = self.pick_with_exp(&rhs, 1);
                if let (Some(u), Some(v)) = (lu, rv) {
                    gcd_split_used = true;
                    let shared = self.fresh("a");
                    let u2 = self.fresh("p");
                    let v2 = self.fresh("p");
                    let ru = Monomial::var(&shared).mul(&Monomial::var(&u2));
                    let rv_m = Monomial::var(&shared).mul(&Monomial::var(&v2));
                    self.substitute(&u, &ru, &mut lhs, &mut rhs, &format!("{u} = {shared}*{u2}"));
                    self.substitute(&v, &rv_m, &mut lhs, &mut rhs, &format!("{v} = {shared}*{v2}"));
                    self.record_coprime(&u2, &v2);
                    continue;
                }
            }
            // Absorb-split: an exponent-1 parameter against a power side.
            let mut applied = false;
            for flip in [false, true] {
                let (this, other) = if flip {
                    (rhs.clone(), lhs.clone())
                } else {
                    (lhs.clone(), rhs.clone())
                };
                let Some(u) = self.pick_with_exp(&this, 1) else {
                    continue;
                };
                let power = self.pick_max_power(&other);
                // Junk parameters of the other side that are not known to
                // be coprime to u get split; their left halves join u.
                let sigma: Vec<String> = other
                    .iter()
                    .filter(|(name, e)| {
                        *e == 1
                            && Some(*name) != power.as_ref().map(|(q, _)| q.as_str())
                            && !self.known_coprime(&u, name)
                    })
                    .map(|(n, _)| n.to_string())
                    .collect();
                if power.is_none() && sigma.is_empty() {
                    continue;
                }
                let mut u_repl = Monomial::one();
                for w in &sigma {
                    let wl = self.fresh("p");
                    let wr = self.fresh("p");
                    let repl = Monomial::var(&wl).mul(&Monomial::var(&wr));
                    self.substitute(w, &repl, &mut lhs, &mut rhs, &format!("{w} = {wl}*{wr}"));
                    self.record_coprime(&wl, &wr);
                    u_repl = u_repl.mul(&Monomial::var(&wl));
                }
                if let Some((q, b)) = &power {
                    let c = self.fresh("c");
                    let c2 = self.fresh("c");
                    u_repl = u_repl.mul(&Monomial::var_pow(&c, *b));
                    let qr = Monomial::var(&c).mul(&Monomial::var(&c2));
                    self.substitute(q, &qr, &mut lhs, &mut rhs, &format!("{q} = {c}*{c2}"));
                }
                self.substitute(&u, &u_repl, &mut lhs, &mut rhs, &format!("{u} = {u_repl}"));
                applied = true;
                break;
            }
            if applied {
                continue;
            }
            return Err(Error::UnificationFailed(format!(
                "no applicable move for {} = {} while unifying `{}`",
                lhs, rhs, self.shared_var
            )));
        }
        Err(Error::UnificationFailed(format!(
            "unification of `{}` did not converge",
            self.shared_var
        )))
    }
}

fn first_entry(m: &Monomial) -> (String, u32) {
    m.iter()
        .next()
        .map(|(n, e)| (n.to_string(), e))
        .expect("nonempty monomial")
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if a == 0 {
        b
    } else {
        gcd_u32(b % a, a)
    }
}

fn divide_exponents(m: &Monomial, g: u32) -> Monomial {
    let mut out = Monomial::one();
    for (name, e) in m.iter() {
        out = out.mul(&Monomial::var_pow(name, e / g));
    }
    out
}

fn remove_part(m: &Monomial, part: &Monomial) -> Monomial {
    let mut out = Monomial::one();
    for (name, e) in m.iter() {
        out = out.mul(&Monomial::var_pow(name, e - part.exponent(name)));
    }
    out
}

/// Solves a system of product-power equations with shared variables.
///
/// The returned family passes symbolic verification on every equation —
/// that postcondition is checked, and failure to establish it is an
/// error, never a silently wrong family. Instantiating the family at any
/// positive parameter assignment therefore yields exact simultaneous
/// solutions of all equations.
pub fn solve_system(spec: &SystemSpec) -> Result<SystemFamily, Error> {
    spec.validate()?;
    let shared = spec.shared_vars();
    let shared_names: BTreeSet<&str> = shared.iter().map(|(v, _, _)| v.as_str()).collect();

    // Per-equation parametrization, shared variables in the earliest
    // slots so they receive the stage-shaped formulas.
    let mut formulas: Vec<BTreeMap<String, Monomial>> = Vec::new();
    let mut provenance: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut creation: BTreeMap<String, usize> = BTreeMap::new();
    let mut coprime_pairs: BTreeSet<(String, String)> = BTreeSet::new();

    for (i, eq) in spec.equations.iter().enumerate() {
        let mut ordered: Vec<String> = eq
            .vars
            .iter()
            .filter(|v| shared_names.contains(v.as_str()))
            .cloned()
            .collect();
        ordered.sort();
        ordered.extend(
            eq.vars
                .iter()
                .filter(|v| !shared_names.contains(v.as_str()))
                .cloned(),
        );
        let z_name = format!("z{}", i + 1);
        let m = eq.vars.len() + 1;
        let ef = expanded_family(m, eq.n, &ordered, &z_name, &format!("e{}_", i + 1))?;
        for name in &ef.creation_order {
            let idx = creation.len();
            creation.insert(name.clone(), idx);
        }
        for pair in &ef.family.constraints {
            coprime_pairs.insert(if pair.0 <= pair.1 {
                pair.clone()
            } else {
                (pair.1.clone(), pair.0.clone())
            });
        }
        for var in ordered.iter().chain(core::iter::once(&z_name)) {
            provenance.entry(var.clone()).or_default().push(format!(
                "equation {} parametrization (m={}, n={})",
                i + 1,
                m,
                eq.n
            ));
        }
        formulas.push(ef.family.variables);
    }

    // Resolve each shared variable in name order.
    let mut fresh_counter = 0u64;
    for (var, eq_a, eq_b) in &shared {
        let rhs = formulas[*eq_a][var].clone();
        let lhs = formulas[*eq_b][var].clone();
        let mut unifier = Unifier {
            formulas: &mut formulas,
            provenance: &mut provenance,
            coprime_pairs: &mut coprime_pairs,
            creation: &mut creation,
            fresh_counter: &mut fresh_counter,
            step_counter: 0,
            shared_var: var.clone(),
        };
        unifier.run(lhs, rhs)?;
        if formulas[*eq_a][var] != formulas[*eq_b][var] {
            return Err(Error::UnificationFailed(format!(
                "formulas for `{var}` still differ after unification"
            )));
        }
    }

    // Merge into one family.
    let mut variables: BTreeMap<String, Monomial> = BTreeMap::new();
    for per_eq in formulas {
        for (var, formula) in per_eq {
            if let Some(existing) = variables.get(&var) {
                if *existing != formula {
                    return Err(Error::UnificationFailed(format!(
                        "inconsistent formulas for `{var}`"
                    )));
                }
            }
            variables.insert(var, formula);
        }
    }
    let mut family = ParametricFamily {
        variables,
        constraints: Vec::new(),
    };
    // Keep only constraints whose parameters survived the substitutions.
    let live = family.parameters();
    for (a, b) in coprime_pairs {
        if live.contains(&a) && live.contains(&b) {
            family.constraints.push((a, b));
        }
    }

    // Hard postcondition: every equation verifies.
    for shape in spec.equation_shapes() {
        let verdict = shape.verify(&family)?;
        if !verdict.is_pass() {
            return Err(Error::UnificationFailed(format!(
                "equation {} = {}^{} does not verify: {verdict}",
                shape.lhs.join("*"),
                shape.rhs,
                shape.n
            )));
        }
    }
    Ok(SystemFamily { family, provenance })
}

/// Which worked example to audit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WorkedExample {
    One,
    Two,
}

/// A fixture audit: the transcribed family and one verdict per equation.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExampleAudit {
    pub label: String,
    pub family: ParametricFamily,
    pub verdicts: Vec<(EquationShape, Verdict)>,
}

/// Runs exponent accounting over the printed formulas of a worked
/// example. Failures are recorded results with their residuals, exactly
/// as transcribed.
pub fn audit_printed_example(which: WorkedExample) -> ExampleAudit {
    let (label, family, equations) = match which {
        WorkedExample::One => (
            "printed worked example 1",
            fixtures::example1_printed(),
            fixtures::example1_equations(),
        ),
        WorkedExample::Two => (
            "printed worked example 2",
            fixtures::example2_printed(),
            fixtures::example2_equations(),
        ),
    };
    let verdicts = equations
        .into_iter()
        .map(|eq| {
            let v = eq.verify(&family).expect("fixture variables are present");
            (eq, v)
        })
        .collect();
    ExampleAudit {
        label: label.to_string(),
        family,
        verdicts,
    }
}

/// The squares-restored repair of worked example 2, audited the same way.
pub fn audit_corrected_example2() -> ExampleAudit {
    let family = fixtures::example2_corrected();
    let verdicts = fixtures::example2_equations()
        .into_iter()
        .map(|eq| {
            let v = eq.verify(&family).expect("fixture variables are present");
            (eq, v)
        })
        .collect();
    ExampleAudit {
        label: "corrected worked example 2".to_string(),
        family,
        verdicts,
    }
}
