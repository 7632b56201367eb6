//! Reduction of the m-variable product-power equation and the closed-form
//! parametrization of `w^(n-2) = v * d^2`.
//!
//! [`reduce`] rewrites a solution of `x1*...*x_{m-1} = z^n` as a witness
//! for the equivalent pair of equations
//!
//! ```text
//! (2)  X_top * X_second * x1*...*x_{m-3} = v * z0^n
//! (3)  w^(n-2) = v * d^2
//! ```
//!
//! where `theta = gcd(x_{m-1}, x_{m-2})`, `x_{m-1} = theta*X_top`,
//! `x_{m-2} = theta*X_second`, `w = gcd(z, theta)`, `z = w*z0`,
//! `theta = w*d`. Coprimality of `d` and `z0` forces `d^2 | w^(n-2)`,
//! which is what makes `v` an integer.
//!
//! Equation (3) is fully parametrized by [`ChainParams`]: writing
//! `q = (n-3)/2` for odd `n` and `(n-4)/2` for even `n`,
//!
//! ```text
//! odd n:   w = prod(r_{2i+1}) * g^2
//!          d = prod(r_{2i+1}^i) * g^(n-2)         (i = 0..=q)
//!          v = prod(r_{2i+1}^(n-2i-2))
//! even n:  same with tail h in place of g, and d-tail h^((n-2)/2)
//! ```
//!
//! with `theta = prod(r_{2i+1}^(i+1)) * g^n` (odd) or
//! `* h^(n/2)` (even), so that `theta = w*d` identically.
//!
//! [`chain_recover`] inverts the closed forms by the gcd descent
//! `D_0 = gcd(w, d)`, `D_i = gcd(D_{i-1}, r_{2i-2})` with
//! `D_{i-1} = D_i * r_{2i+1}` and `r_{2i-2} = D_i * r_{2i}`. The exponent
//! bookkeeping along the descent is chosen so that the closed forms above
//! verify symbolically for every n (see `chain_family` and its tests); at
//! each step the new even-indexed remainder is coprime to all odd-indexed
//! multipliers, which is what grants the exact divisions. For `n <= 4` the
//! descent never iterates and the parameters fall out directly
//! (`n = 2`: forced `v = d = 1`; `n = 3`: `g = d`, `r1 = v`;
//! `n = 4`: `h = d`, `r1 = w/d`).

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{gcd, Nat};
use crate::general::Solution;
use crate::monomial::{Monomial, ParametricFamily};
use crate::{Error, Recovery};

/// Witness tying a solution of the m-variable equation to equations (2)
/// and (3) above.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReductionWitness {
    /// `gcd(x_{m-1}, x_{m-2})`.
    pub theta: Nat,
    /// `gcd(z, theta)`.
    pub w: Nat,
    /// `theta / w`, coprime to `z0`.
    pub d: Nat,
    /// `w^(n-2) / d^2`.
    pub v: Nat,
    /// `z / w`.
    pub z0: Nat,
    /// `x_{m-1} / theta`.
    pub x_top: Nat,
    /// `x_{m-2} / theta`, coprime to `x_top`.
    pub x_second: Nat,
}

/// Computes the reduction witness for a valid solution.
///
/// The only failure mode beyond a malformed solution is the defect signal
/// for `d^2` not dividing `w^(n-2)`, which the reduction argument proves
/// impossible.
pub fn reduce(solution: &Solution) -> Result<ReductionWitness, Error> {
    let xs = solution.xs();
    let n = solution.n();
    let x_last = &xs[xs.len() - 1];
    let x_prev = &xs[xs.len() - 2];
    let theta = gcd(x_last, x_prev);
    let x_top = x_last.div_exact(&theta).expect("gcd divides");
    let x_second = x_prev.div_exact(&theta).expect("gcd divides");
    let w = gcd(solution.z(), &theta);
    let z0 = solution.z().div_exact(&w).expect("gcd divides");
    let d = theta.div_exact(&w).expect("gcd divides");
    let v = w
        .pow(n - 2)
        .div_exact(&d.pow(2))
        .ok_or(Error::Defect("d^2 does not divide w^(n-2)"))?;
    let witness = ReductionWitness {
        theta,
        w,
        d,
        v,
        z0,
        x_top,
        x_second,
    };
    debug_assert!(witness.check_equations(solution));
    Ok(witness)
}

impl ReductionWitness {
    /// Exact check of equations (2) and (3) against the solution that
    /// produced this witness.
    pub fn check_equations(&self, solution: &Solution) -> bool {
        let xs = solution.xs();
        let n = solution.n();
        let mut lhs = &self.x_top * &self.x_second;
        for x in &xs[..xs.len() - 2] {
            lhs = &lhs * x;
        }
        let eq2 = lhs == &self.v * &self.z0.pow(n);
        let eq3 = self.w.pow(n - 2) == &self.v * &self.d.pow(2);
        let glue = &self.theta * &self.x_top == xs[xs.len() - 1]
            && &self.theta * &self.x_second == xs[xs.len() - 2]
            && &self.w * &self.z0 == *solution.z()
            && &self.w * &self.d == self.theta
            && self.x_top.is_coprime(&self.x_second)
            && self.z0.is_coprime(&self.d);
        eq2 && eq3 && glue
    }
}

/// Parameters of the closed-form family for `w^(n-2) = v * d^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChainParams {
    pub n: u32,
    /// The odd-indexed multipliers `r_1, r_3, ...` in order.
    pub rs: Vec<Nat>,
    /// `g` when `n` is odd, `h` when `n` is even.
    pub tail: Nat,
}

impl ChainParams {
    /// Number of `rs` entries required for exponent `n`.
    pub fn expected_len(n: u32) -> usize {
        if n % 2 == 1 {
            ((n - 1) / 2) as usize
        } else {
            ((n - 2) / 2) as usize
        }
    }

    pub fn new(n: u32, rs: Vec<Nat>, tail: Nat) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::Precondition("exponent must be at least 2"));
        }
        if rs.len() != Self::expected_len(n) {
            return Err(Error::ShapeMismatch("wrong number of chain multipliers for n"));
        }
        Ok(ChainParams { n, rs, tail })
    }

    /// All-ones parameters for a given exponent.
    pub fn ones(n: u32) -> Self {
        ChainParams {
            n,
            rs: vec![Nat::one(); Self::expected_len(n)],
            tail: Nat::one(),
        }
    }

    fn validate(&self) -> Result<(), Error> {
        if self.n < 2 {
            return Err(Error::Precondition("exponent must be at least 2"));
        }
        if self.rs.len() != Self::expected_len(self.n) {
            return Err(Error::ShapeMismatch("wrong number of chain multipliers for n"));
        }
        Ok(())
    }
}

/// One step of the gcd descent: `d` is the step's gcd, `r_odd` and
/// `r_even` the two quotients, which are coprime by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChainStep {
    pub d: Nat,
    pub r_odd: Nat,
    pub r_even: Nat,
}

/// The recorded descent. Step 0 splits `(w, d)`; step i splits the
/// previous `(D, r_even)` pair. Empty for `n <= 4`, where no descent is
/// needed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChainTrace {
    pub steps: Vec<ChainStep>,
}

/// Evaluates the closed forms: returns `(w, d, v)` with
/// `w^(n-2) = v * d^2` guaranteed exactly.
pub fn chain_generate(p: &ChainParams) -> Result<(Nat, Nat, Nat), Error> {
    p.validate()?;
    let n = p.n;
    let mut w = Nat::one();
    let mut d = Nat::one();
    let mut v = Nat::one();
    for (i, r) in p.rs.iter().enumerate() {
        let i = i as u32;
        w = &w * r;
        d = &d * &r.pow(i);
        v = &v * &r.pow(n - 2 * i - 2);
    }
    if n % 2 == 1 {
        w = &w * &p.tail.pow(2);
        d = &d * &p.tail.pow(n - 2);
    } else {
        w = &w * &p.tail;
        d = &d * &p.tail.pow((n - 2) / 2);
    }
    debug_assert_eq!(w.pow(n - 2), &v * &d.pow(2));
    Ok((w, d, v))
}

/// The remark-level closed form for `theta`; equals `w * d` for every
/// parameter choice (see the symbolic check in `chain_family`).
pub fn theta(p: &ChainParams) -> Result<Nat, Error> {
    p.validate()?;
    let mut t = Nat::one();
    for (i, r) in p.rs.iter().enumerate() {
        t = &t * &r.pow(i as u32 + 1);
    }
    let tail_exp = if p.n % 2 == 1 { p.n } else { p.n / 2 };
    Ok(&t * &p.tail.pow(tail_exp))
}

/// Inverts [`chain_generate`]: recovers parameters whose closed forms
/// reproduce `(w, d, v)` exactly, along with the descent trace.
///
/// The descent argument shows recovery succeeds for *every* valid triple;
/// the `Gap` branch exists as a defect detector and is audited to be
/// unreachable at desk scale.
pub fn chain_recover(
    w: &Nat,
    d: &Nat,
    v: &Nat,
    n: u32,
) -> Result<Recovery<(ChainParams, ChainTrace)>, Error> {
    if n < 2 {
        return Err(Error::Precondition("exponent must be at least 2"));
    }
    if w.pow(n - 2) != v * &d.pow(2) {
        return Err(Error::Precondition("w^(n-2) must equal v*d^2"));
    }
    let mut trace = ChainTrace::default();
    let params = match n {
        2 => {
            // 1 = v*d^2 forces v = d = 1; w is free.
            ChainParams {
                n,
                rs: vec![],
                tail: w.clone(),
            }
        }
        3 => ChainParams {
            n,
            rs: vec![v.clone()],
            tail: d.clone(),
        },
        4 => {
            // w^2 = v*d^2 gives d | w.
            let r1 = match w.div_exact(d) {
                Some(r) => r,
                None => return Ok(Recovery::Gap),
            };
            ChainParams {
                n,
                rs: vec![r1],
                tail: d.clone(),
            }
        }
        _ => {
            let mut dd = gcd(w, d);
            let r1 = w.div_exact(&dd).expect("gcd divides");
            let mut r_even = d.div_exact(&dd).expect("gcd divides");
            let mut rs = vec![r1.clone()];
            trace.steps.push(ChainStep {
                d: dd.clone(),
                r_odd: r1,
                r_even: r_even.clone(),
            });
            for _ in 0..(n - 5) / 2 {
                let next = gcd(&dd, &r_even);
                let r_odd = dd.div_exact(&next).expect("gcd divides");
                r_even = r_even.div_exact(&next).expect("gcd divides");
                dd = next;
                rs.push(r_odd.clone());
                trace.steps.push(ChainStep {
                    d: dd.clone(),
                    r_odd,
                    r_even: r_even.clone(),
                });
            }
            let tail = r_even;
            let last = if n % 2 == 1 {
                dd.div_exact(&tail.pow(2))
            } else {
                dd.div_exact(&tail)
            };
            let last = match last {
                Some(r) => r,
                None => return Ok(Recovery::Gap),
            };
            rs.push(last);
            ChainParams { n, rs, tail }
        }
    };
    let (rw, rd, rv) = chain_generate(&params)?;
    if &rw == w && &rd == d && &rv == v {
        Ok(Recovery::Recovered((params, trace)))
    } else {
        Ok(Recovery::Gap)
    }
}

/// The closed forms as a symbolic family over parameters
/// `r1, r3, ..., g|h`, with variables `w`, `d`, `v` and `theta`.
///
/// `prod[v, d, d] = w^(n-2)` and `prod[w, d] = theta^1` both verify for
/// every n, which is the exponent-accounting proof that the closed forms
/// solve equation (3) and that `theta = w*d`.
pub fn chain_family(n: u32) -> ParametricFamily {
    assert!(n >= 2);
    let count = ChainParams::expected_len(n);
    let tail_name = if n % 2 == 1 { "g" } else { "h" };
    let mut w = Monomial::one();
    let mut d = Monomial::one();
    let mut v = Monomial::one();
    let mut th = Monomial::one();
    for i in 0..count as u32 {
        let r = alloc::format!("r{}", 2 * i + 1);
        w = w.mul(&Monomial::var(&r));
        d = d.mul(&Monomial::var_pow(&r, i));
        v = v.mul(&Monomial::var_pow(&r, n - 2 * i - 2));
        th = th.mul(&Monomial::var_pow(&r, i + 1));
    }
    if n % 2 == 1 {
        w = w.mul(&Monomial::var_pow(tail_name, 2));
        d = d.mul(&Monomial::var_pow(tail_name, n - 2));
        th = th.mul(&Monomial::var_pow(tail_name, n));
    } else {
        w = w.mul(&Monomial::var(tail_name));
        d = d.mul(&Monomial::var_pow(tail_name, (n - 2) / 2));
        th = th.mul(&Monomial::var_pow(tail_name, n / 2));
    }
    let mut fam = ParametricFamily::new();
    fam.variables.insert("w".into(), w);
    fam.variables.insert("d".into(), d);
    fam.variables.insert("v".into(), v);
    fam.variables.insert("theta".into(), th);
    fam
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::verify_identity;

    fn n(v: u64) -> Nat {
        Nat::from_u64(v).unwrap()
    }

    fn sol(xs: &[u64], z: u64, e: u32) -> Solution {
        Solution::new(xs.iter().map(|&x| n(x)).collect(), n(z), e).unwrap()
    }

    #[test]
    fn reduce_m3_example() {
        let s = sol(&[2, 8], 4, 2);
        let w = reduce(&s).unwrap();
        assert_eq!(w.theta, n(2));
        assert_eq!(w.x_top, n(4));
        assert_eq!(w.x_second, n(1));
        assert_eq!(w.w, n(2));
        assert_eq!(w.z0, n(2));
        assert_eq!(w.d, n(1));
        assert_eq!(w.v, n(1));
        // equation (2): 4 * 1 = 1 * 2^2
        assert!(w.check_equations(&s));
    }

    #[test]
    fn reduce_all_ones() {
        let s = sol(&[1, 1, 1], 1, 5);
        let w = reduce(&s).unwrap();
        assert!(w.theta.is_one() && w.w.is_one() && w.d.is_one());
        assert!(w.v.is_one() && w.z0.is_one());
        assert!(w.x_top.is_one() && w.x_second.is_one());
    }

    #[test]
    fn reduce_m4_example() {
        let s = sol(&[4, 6, 9], 6, 3);
        let w = reduce(&s).unwrap();
        assert_eq!(w.theta, n(3));
        assert_eq!(w.x_top, n(3));
        assert_eq!(w.x_second, n(2));
        assert_eq!(w.w, n(3));
        assert_eq!(w.z0, n(2));
        assert_eq!(w.d, n(1));
        assert_eq!(w.v, n(3));
        // equation (2): 3 * 2 * 4 = 3 * 2^3
        assert!(w.check_equations(&s));
    }

    #[test]
    fn chain_generate_examples() {
        let p = ChainParams::new(3, vec![n(2)], n(3)).unwrap();
        assert_eq!(chain_generate(&p).unwrap(), (n(18), n(3), n(2)));

        let p = ChainParams::new(2, vec![], n(5)).unwrap();
        assert_eq!(chain_generate(&p).unwrap(), (n(5), n(1), n(1)));

        let p = ChainParams::new(5, vec![n(2), n(3)], n(1)).unwrap();
        assert_eq!(chain_generate(&p).unwrap(), (n(6), n(3), n(24)));
    }

    #[test]
    fn chain_generate_rejects_wrong_shape() {
        assert!(ChainParams::new(5, vec![n(2)], n(1)).is_err());
        assert!(ChainParams::new(2, vec![n(2)], n(1)).is_err());
    }

    #[test]
    fn chain_recover_examples() {
        let rec = chain_recover(&n(18), &n(3), &n(2), 3).unwrap();
        let (p, trace) = rec.recovered().unwrap();
        assert_eq!(p.rs, vec![n(2)]);
        assert_eq!(p.tail, n(3));
        assert!(trace.steps.is_empty());

        for e in 2..=9 {
            let rec = chain_recover(&n(1), &n(1), &n(1), e).unwrap();
            let (p, _) = rec.recovered().unwrap();
            assert!(p.rs.iter().all(Nat::is_one) && p.tail.is_one());
        }

        let rec = chain_recover(&n(6), &n(3), &n(4), 4).unwrap();
        let (p, _) = rec.recovered().unwrap();
        assert_eq!(p.rs, vec![n(2)]);
        assert_eq!(p.tail, n(3));
    }

    #[test]
    fn chain_recover_rejects_non_solutions() {
        assert!(matches!(
            chain_recover(&n(6), &n(2), &n(2), 3),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn chain_trace_steps_satisfy_descent_relations() {
        // n = 7 exercises one real descent step after the initial split.
        let p = ChainParams::new(7, vec![n(6), n(10), n(3)], n(2)).unwrap();
        let (w, d, v) = chain_generate(&p).unwrap();
        let rec = chain_recover(&w, &d, &v, 7).unwrap();
        let (q, trace) = rec.recovered().unwrap();
        let (rw, rd, rv) = chain_generate(&q).unwrap();
        assert_eq!((rw, rd, rv), (w.clone(), d.clone(), v));
        assert!(!trace.steps.is_empty());
        // Step 0 splits (w, d); later steps split the previous (D, r_even).
        let s0 = &trace.steps[0];
        assert_eq!(&s0.d * &s0.r_odd, w);
        assert_eq!(&s0.d * &s0.r_even, d);
        assert!(s0.r_odd.is_coprime(&s0.r_even));
        for pair in trace.steps.windows(2) {
            let (prev, step) = (&pair[0], &pair[1]);
            assert_eq!(&step.d * &step.r_odd, prev.d);
            assert_eq!(&step.d * &step.r_even, prev.r_even);
            assert!(step.r_odd.is_coprime(&step.r_even));
        }
    }

    #[test]
    fn theta_examples_equal_w_times_d() {
        let p = ChainParams::new(3, vec![n(2)], n(3)).unwrap();
        assert_eq!(theta(&p).unwrap(), n(54));
        let p = ChainParams::new(2, vec![], n(5)).unwrap();
        assert_eq!(theta(&p).unwrap(), n(5));
        let p = ChainParams::new(4, vec![n(2)], n(3)).unwrap();
        assert_eq!(theta(&p).unwrap(), n(18));
        for e in 2..=9u32 {
            let len = ChainParams::expected_len(e);
            let rs: Vec<Nat> = (0..len).map(|i| n(2 + i as u64)).collect();
            let p = ChainParams::new(e, rs, n(7)).unwrap();
            let (w, d, _) = chain_generate(&p).unwrap();
            assert_eq!(theta(&p).unwrap(), &w * &d, "n={e}");
        }
    }

    #[test]
    fn chain_family_verifies_symbolically() {
        for e in 2..=12u32 {
            let fam = chain_family(e);
            let mut lhs = alloc::vec!["v"];
            lhs.extend(core::iter::repeat_n("d", 2));
            let verdict = verify_identity(&fam, &lhs, "w", e - 2).unwrap();
            assert!(verdict.is_pass(), "closed forms fail at n={e}: {verdict}");
            let verdict = verify_identity(&fam, &["w", "d"], "theta", 1).unwrap();
            assert!(verdict.is_pass(), "theta identity fails at n={e}");
        }
    }

    #[test]
    fn chain_family_instantiates_like_the_generator() {
        // n = 3 at r1 = 2, g = 3 evaluates to w = 18, d = 3, v = 2, and
        // 18^1 = 2 * 3^2 exactly.
        let fam = chain_family(3);
        let mut asg = alloc::collections::BTreeMap::new();
        asg.insert(alloc::string::String::from("r1"), n(2));
        asg.insert(alloc::string::String::from("g"), n(3));
        let inst = crate::monomial::instantiate(&fam, &asg).unwrap();
        assert_eq!(inst.values["w"], n(18));
        assert_eq!(inst.values["d"], n(3));
        assert_eq!(inst.values["v"], n(2));
        assert_eq!(
            inst.values["w"],
            &inst.values["v"] * &inst.values["d"].pow(2)
        );
    }
}
