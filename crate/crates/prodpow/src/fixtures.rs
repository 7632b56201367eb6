//! Transcribed closed-form families kept as audit targets.
//!
//! The families in this module are *data*, not derivations: closed forms
//! transcribed exactly as printed, typos included, so that the verifier
//! can report honestly which of them hold. Corrected variants live
//! alongside the printed ones under separate names — the audit must
//! always be able to tell a transcribed claim from a repair.
//!
//! Verdicts here are *results*, never assumptions. The machine-derived
//! generators in [`crate::general`] and [`crate::system`] are the
//! authoritative ones; nothing in the crate relies on a printed fixture
//! being correct.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::monomial::{verify_identity, Monomial, ParametricFamily, Verdict};
use crate::Error;

/// An equation shape `prod(lhs) = rhs^n` over the variables of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EquationShape {
    pub lhs: Vec<String>,
    pub rhs: String,
    pub n: u32,
}

impl EquationShape {
    pub fn new(lhs: &[&str], rhs: &str, n: u32) -> Self {
        EquationShape {
            lhs: lhs.iter().map(|s| String::from(*s)).collect(),
            rhs: String::from(rhs),
            n,
        }
    }

    pub fn verify(&self, family: &ParametricFamily) -> Result<Verdict, Error> {
        let lhs: Vec<&str> = self.lhs.iter().map(|s| s.as_str()).collect();
        verify_identity(family, &lhs, &self.rhs, self.n)
    }
}

fn mono(pairs: &[(&str, u32)]) -> Monomial {
    let mut m = Monomial::one();
    for (name, e) in pairs {
        m = m.mul(&Monomial::var_pow(name, *e));
    }
    m
}

fn family(vars: &[(&str, Monomial)], constraints: &[(&str, &str)]) -> ParametricFamily {
    let mut fam = ParametricFamily::new();
    for (name, m) in vars {
        fam.variables.insert(String::from(*name), m.clone());
    }
    for (a, b) in constraints {
        fam.constraints.push((String::from(*a), String::from(*b)));
    }
    fam
}

/// The printed eleven-parameter family for the system
/// `x1*x2*x3 = z1^3`, `x3*x4 = z2^2` (worked example 1).
///
/// Both identities verify; this is the family the system solver is
/// expected to reproduce up to parameter renaming.
pub fn example1_printed() -> ParametricFamily {
    family(
        &[
            (
                "x1",
                mono(&[("a", 1), ("kp1", 2), ("lp1", 1), ("gp1", 2), ("R1", 3), ("g", 3)]),
            ),
            (
                "x2",
                mono(&[("a", 1), ("kp1", 1), ("lp1", 2), ("ep1", 2), ("R2", 3), ("g", 3)]),
            ),
            (
                "x3",
                mono(&[("a", 1), ("gp1", 1), ("ep1", 1), ("b1", 3), ("f", 6)]),
            ),
            (
                "x4",
                mono(&[("a", 1), ("gp1", 1), ("ep1", 1), ("b1", 3), ("r1", 2)]),
            ),
            (
                "z1",
                mono(&[
                    ("a", 1),
                    ("lp1", 1),
                    ("kp1", 1),
                    ("gp1", 1),
                    ("ep1", 1),
                    ("b1", 1),
                    ("f", 2),
                    ("R1", 1),
                    ("R2", 1),
                    ("g", 2),
                ]),
            ),
            (
                "z2",
                mono(&[("a", 1), ("gp1", 1), ("ep1", 1), ("b1", 3), ("f", 3), ("r1", 1)]),
            ),
        ],
        &[],
    )
}

/// The two equations of worked example 1.
pub fn example1_equations() -> Vec<EquationShape> {
    vec![
        EquationShape::new(&["x1", "x2", "x3"], "z1", 3),
        EquationShape::new(&["x3", "x4"], "z2", 2),
    ]
}

/// The printed eleven-parameter family for the system
/// `x1*x2*x3 = z1^2`, `x3*x4 = z2^2` (worked example 2), exactly as
/// printed. The first identity fails with residual `r1^+1 r2^+1` on the
/// product side — the printed derivation drops a pair of squares — and the
/// audit records precisely that.
pub fn example2_printed() -> ParametricFamily {
    family(
        &[
            (
                "x1",
                mono(&[("s1", 2), ("a", 1), ("d", 1), ("r1", 1), ("h", 1)]),
            ),
            (
                "x2",
                mono(&[("s2", 2), ("b", 1), ("d", 1), ("r2", 1), ("h", 1)]),
            ),
            (
                "x3",
                mono(&[("a", 1), ("b", 1), ("c1", 2), ("r1", 2), ("r2", 2), ("d", 2), ("c", 2)]),
            ),
            ("x4", mono(&[("a", 1), ("b", 1), ("c", 2), ("S1", 2)])),
            (
                "z1",
                mono(&[
                    ("a", 1),
                    ("b", 1),
                    ("h", 1),
                    ("s1", 1),
                    ("s2", 1),
                    ("c", 1),
                    ("c1", 1),
                    ("r1", 1),
                    ("r2", 1),
                    ("d", 2),
                ]),
            ),
            (
                "z2",
                mono(&[
                    ("a", 1),
                    ("b", 1),
                    ("S1", 1),
                    ("r1", 1),
                    ("r2", 1),
                    ("d", 1),
                    ("c1", 1),
                    ("c", 2),
                ]),
            ),
        ],
        &[],
    )
}

/// The squares-restored repair of worked example 2: resolving
/// `f^2 = beta * b1` as `beta = d*r1^2`, `b1 = d*r2^2`, `f = d*r1*r2`
/// instead of dropping the squares. Both identities verify.
pub fn example2_corrected() -> ParametricFamily {
    family(
        &[
            (
                "x1",
                mono(&[("s1", 2), ("a", 1), ("d", 1), ("r1", 2), ("h", 1)]),
            ),
            (
                "x2",
                mono(&[("s2", 2), ("b", 1), ("d", 1), ("r2", 2), ("h", 1)]),
            ),
            (
                "x3",
                mono(&[("a", 1), ("b", 1), ("c", 2), ("c1", 2), ("d", 2), ("r1", 2), ("r2", 2)]),
            ),
            ("x4", mono(&[("a", 1), ("b", 1), ("c", 2), ("S1", 2)])),
            (
                "z1",
                mono(&[
                    ("a", 1),
                    ("b", 1),
                    ("h", 1),
                    ("s1", 1),
                    ("s2", 1),
                    ("c", 1),
                    ("c1", 1),
                    ("r1", 2),
                    ("r2", 2),
                    ("d", 2),
                ]),
            ),
            (
                "z2",
                mono(&[
                    ("a", 1),
                    ("b", 1),
                    ("S1", 1),
                    ("r1", 1),
                    ("r2", 1),
                    ("d", 1),
                    ("c1", 1),
                    ("c", 2),
                ]),
            ),
        ],
        &[],
    )
}

/// The two equations of worked example 2.
pub fn example2_equations() -> Vec<EquationShape> {
    vec![
        EquationShape::new(&["x1", "x2", "x3"], "z1", 2),
        EquationShape::new(&["x3", "x4"], "z2", 2),
    ]
}

/// Best-effort transcription of the printed general closed forms for
/// `x1*...*x_{m-1} = z^n`, audit-only.
///
/// The printed text is not typesettable as-is; the transcription freezes
/// these disambiguation choices and applies them uniformly:
///
/// - a superscript written *before* the subscript (`k^t_(2i+1)`,
///   `ga^(j-t)_t`, `l^(m-3)_(2i+1)`) is a family label, naming a distinct
///   parameter (`k{t}_{2i+1}` and so on); written *after* the subscript
///   (`ga_t^(m-2-t)`, `eta_j^(m-2-j)`) it is an arithmetic exponent on the
///   base parameter;
/// - the dangling `ga^(j-t)_j` whose `t` escapes its product is read at
///   `t = j`, i.e. as the label-0 parameter `ga0_{j}`;
/// - a per-parity index bound that is not an integer is floored (ranges
///   may then be empty);
/// - the `(k^(m-3)_(2i+1))^(n-2i-2)` factor that sits outside its
///   `i`-product while using `i` is moved inside it.
///
/// For `m = 3` every product over stages is empty and the family has only
/// the `x_{m-2}`, `x_{m-1}` and `z` entries. The returned verdict is a
/// recorded result: several of these transcriptions fail exponent
/// accounting, and that is a finding about the fixture, not an error.
pub fn printed_general_family(m: usize, n: u32) -> (ParametricFamily, Verdict) {
    assert!(m >= 3 && n >= 2);
    let odd = n % 2 == 1;
    // Floored index bounds; an upper bound below zero means empty.
    let bound_odd = (n as i64 - 3).div_euclid(2); // floor((n-3)/2)
    let bound_even = (n as i64 - 4).div_euclid(2); // (n-4)/2
    let irange = |hi: i64| -> Vec<u32> {
        if hi < 0 {
            vec![]
        } else {
            (0..=hi as u32).collect()
        }
    };
    // Literal per-position ranges as printed.
    let i_xj = if odd { irange(bound_odd) } else { irange(bound_even) };
    let i_xm2 = irange(bound_odd);
    let i_xm1 = if odd { irange(bound_odd) } else { irange(bound_even) };
    let i_z = irange(bound_odd);

    let mut fam = ParametricFamily::new();
    let stages = m - 3;

    // x_j for j = 1..=m-3.
    for j in 1..=stages {
        let mut x = Monomial::one();
        for &i in &i_xj {
            x = x.mul(&Monomial::var_pow(
                &format!("k{}_{}", j - 1, 2 * i + 1),
                n - 2 * i - 2,
            ));
        }
        let mut inner = Monomial::one();
        for t in 1..j {
            inner = inner.mul(&Monomial::var(&format!("ga{}_{}", j - t, t)));
        }
        for t in 1..=j {
            inner = inner.mul(&Monomial::var(&format!("ga{}_{}", j - t, j)));
        }
        x = x.mul(&inner.pow(n - 1));
        x = x.mul(&Monomial::var(&format!("ga0_{j}")));
        x = x.mul(&Monomial::var_pow(&format!("eta{j}"), (m - 2 - j) as u32));
        fam.variables.insert(format!("x{j}"), x);
    }

    let tail = |m: &mut Monomial| {
        if odd {
            *m = m.mul(&Monomial::var_pow("g", n));
        } else {
            *m = m.mul(&Monomial::var_pow("h", n / 2));
        }
    };

    // x_{m-2}.
    let mut xm2 = Monomial::one();
    for t in 1..=stages {
        for &i in &i_xm2 {
            let kl = Monomial::var(&format!("k{}_{}", t - 1, 2 * i + 1))
                .mul(&Monomial::var(&format!("l{}_{}", m - 3, 2 * i + 1)));
            xm2 = xm2.mul(&kl.pow(i + 1));
            xm2 = xm2.mul(&Monomial::var_pow(
                &format!("k{}_{}", m - 3, 2 * i + 1),
                n - 2 * i - 2,
            ));
        }
        xm2 = xm2.mul(&Monomial::var_pow(
            &format!("ga{t}"),
            (m - 2 - t) as u32 * (n - 1),
        ));
    }
    xm2 = xm2.mul(&Monomial::var_pow("s2", n));
    tail(&mut xm2);
    fam.variables.insert(format!("x{}", m - 2), xm2);

    // x_{m-1}.
    let mut xm1 = Monomial::one();
    for t in 1..=stages {
        for &i in &i_xm1 {
            let kl = Monomial::var(&format!("k{}_{}", t - 1, 2 * i + 1))
                .mul(&Monomial::var(&format!("l{}_{}", m - 3, 2 * i + 1)));
            xm1 = xm1.mul(&kl.pow(i + 1));
            xm1 = xm1.mul(&Monomial::var_pow(
                &format!("l{}_{}", m - 3, 2 * i + 1),
                n - 2 * i - 2,
            ));
        }
        xm1 = xm1.mul(&Monomial::var_pow(
            &format!("eta{t}"),
            (m - 2 - t) as u32 * (n - 1),
        ));
    }
    xm1 = xm1.mul(&Monomial::var_pow("s1", n));
    tail(&mut xm1);
    fam.variables.insert(format!("x{}", m - 1), xm1);

    // z: the k/l block, the eta/gamma block, then s1*s2*g^2 exactly as
    // printed (g^2 even in the even case — one of the recorded findings).
    let mut z = Monomial::one();
    for lam in 1..=stages {
        for &i in &i_z {
            z = z.mul(&Monomial::var(&format!("k{}_{}", lam - 1, 2 * i + 1)));
            if odd {
                z = z.mul(&Monomial::var(&format!("l_{}", 2 * i + 1)));
            } else {
                z = z.mul(&Monomial::var(&format!("l{}_{}", m - 3, 2 * i + 1)));
            }
        }
    }
    for i in 1..=stages {
        let reps = (m - 2 - i) as u32; // lambda = 0..=m-2-i
        let tri = reps * (reps + 1) / 2; // sum of lambda
        if odd {
            z = z.mul(&Monomial::var_pow(&format!("eta{i}"), reps + 1));
            z = z.mul(&Monomial::var_pow(&format!("ga{i}"), tri));
        } else {
            z = z.mul(&Monomial::var_pow(&format!("eta{i}"), tri));
            z = z.mul(&Monomial::var_pow(&format!("ga{i}"), tri));
        }
    }
    z = z.mul(&Monomial::var("s1")).mul(&Monomial::var("s2"));
    z = z.mul(&Monomial::var_pow("g", 2));
    fam.variables.insert(String::from("z"), z);

    let lhs_names: Vec<String> = (1..m).map(|j| format!("x{j}")).collect();
    let lhs: Vec<&str> = lhs_names.iter().map(|s| s.as_str()).collect();
    let verdict = verify_identity(&fam, &lhs, "z", n).expect("all variables present");
    (fam, verdict)
}
