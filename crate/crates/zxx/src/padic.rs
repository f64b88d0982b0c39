//! Exact arithmetic on p-adic approximations: valuations, Hensel lifting,
//! and a complete bounded-depth search for the roots of an integer
//! polynomial in `Z_p`.
//!
//! Residues are always kept in canonical form `[0, p^K)`. A root is only
//! ever reported together with a Hensel witness, so every returned
//! approximation provably refines to a genuine root in `Z_p`.

use crate::intutil::{big_pow, canonical_mod, is_prime, mod_inverse};
use crate::polyring::IntPoly;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// A checked prime modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Prime(BigInt);

impl Prime {
    pub fn new(value: BigInt) -> Result<Self> {
        if is_prime(&value) {
            Ok(Prime(value))
        } else {
            Err(Error::NotApplicable(format!("{value} is not prime")))
        }
    }

    pub fn from_u64(value: u64) -> Result<Self> {
        Prime::new(BigInt::from(value))
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }

    pub fn pow(&self, e: u64) -> BigInt {
        big_pow(&self.0, e)
    }
}

impl std::fmt::Display for Prime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Valuation of a root approximation. At precision `K` a residue of 0 only
/// certifies that the valuation is at least `K`, so that case carries a
/// bound rather than a number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Exact(u64),
    AtLeast(u64),
}

impl Valuation {
    pub fn exact(&self) -> Option<u64> {
        match self {
            Valuation::Exact(v) => Some(*v),
            Valuation::AtLeast(_) => None,
        }
    }
}

/// Approximation of a root in `Z_p`: a residue mod `p^precision`, its
/// valuation, whether the underlying root of the input polynomial is
/// simple, and (for simple roots) the valuation `theta` of the derivative
/// there, which witnesses the Hensel condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicRoot {
    pub prime: Prime,
    pub residue: BigInt,
    pub precision: u64,
    pub valuation: Valuation,
    pub simple: bool,
    pub theta: Option<u64>,
}

/// `v_p(n)` for nonzero `n`: the largest `e` with `p^e | n`.
pub fn vp(n: &BigInt, p: &Prime) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let mut e = 0u64;
    let mut rest = n.abs();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&rest, p.value());
        if !r.is_zero() {
            return Ok(e);
        }
        rest = q;
        e += 1;
    }
}

/// `v_p(n)` treating zero as unbounded.
fn vp_or_none(n: &BigInt, p: &Prime) -> Option<u64> {
    if n.is_zero() {
        None
    } else {
        Some(vp(n, p).expect("nonzero"))
    }
}

/// Hensel lifting. Given `r0` with `f(r0) = 0 mod p^(2*theta+1)` where
/// `theta = v_p(f'(r0))`, Newton iteration converges to the unique root of
/// `f` in `Z_p` congruent to `r0` mod `p^(theta+1)`; its residue mod `p^K`
/// is returned.
pub fn hensel_lift(f: &IntPoly, r0: &BigInt, p: &Prime, target_k: u64) -> Result<BigInt> {
    let deriv = f.derivative();
    let d0 = deriv.eval(r0);
    let theta = vp_or_none(&d0, p).ok_or(Error::HenselConditionFails {
        theta: u64::MAX,
        value_valuation: vp_or_none(&f.eval(r0), p),
    })?;
    let v0 = f.eval(r0);
    let v0_val = vp_or_none(&v0, p);
    if let Some(v) = v0_val {
        if v < 2 * theta + 1 {
            return Err(Error::HenselConditionFails {
                theta,
                value_valuation: Some(v),
            });
        }
    }
    // Work with enough headroom that the final residue is the true root mod
    // p^K, not merely some residue with f = 0 mod p^K.
    let work_k = target_k + 2 * theta + 1;
    let modulus = p.pow(work_k);
    let stop = p.pow(target_k + theta);
    let mut r = canonical_mod(r0, &modulus);
    loop {
        let val = f.eval_mod(&r, &modulus);
        if canonical_mod(&val, &stop).is_zero() {
            break;
        }
        let p_theta = p.pow(theta);
        let q = crate::intutil::exact_div(&val, &p_theta)
            .ok_or_else(|| Error::ContractViolation("Newton step residual valuation".into()))?;
        let u = crate::intutil::exact_div(&deriv.eval_mod(&r, &modulus), &p_theta)
            .filter(|u| !(u % p.value()).is_zero())
            .ok_or_else(|| Error::ContractViolation("derivative valuation drifted".into()))?;
        let inv = mod_inverse(&canonical_mod(&u, &modulus), &modulus)
            .ok_or_else(|| Error::ContractViolation("unit has an inverse".into()))?;
        r = canonical_mod(&(&r - q * inv), &modulus);
    }
    Ok(canonical_mod(&r, &p.pow(target_k)))
}

/// All roots of `f` in `Z_p`, one [`PAdicRoot`] per distinct root, each at
/// precision at least `k` (precision is raised internally whenever the
/// decision needs it).
///
/// The search replaces `f` by its squarefree part `g`, then walks residues
/// mod `p, p^2, ...` breadth first, pruning branches where `g` fails to
/// vanish, and finishing a branch by Hensel lifting as soon as its witness
/// condition holds. The depth is bounded by `2 v_p(res(g, g')) + 1`; past
/// that bound every surviving branch must satisfy the Hensel condition.
pub fn roots_in_zp(f: &IntPoly, p: &Prime, k: u64) -> Result<Vec<PAdicRoot>> {
    if f.is_zero() {
        return Err(Error::NotApplicable("roots of the zero polynomial".into()));
    }
    if k == 0 {
        return Err(Error::NotApplicable("precision must be at least 1".into()));
    }
    let g = f.squarefree_part()?;
    if g.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let res = g.resultant(&g.derivative());
    if res.is_zero() {
        return Err(Error::ContractViolation(
            "squarefree part has zero resultant with its derivative".into(),
        ));
    }
    let tau = vp(&res, p)?;
    let depth_bound = 2 * tau + 1;
    // Distinct roots of g differ before precision tau + 1, so lifting to
    // work_k separates them; the extra headroom also covers theta checks.
    let work_k = k.max(2 * tau + 2);

    // Branch-and-lift: nodes are residues mod p^depth where g vanishes.
    let mut accepted: Vec<(BigInt, u64)> = Vec::new(); // (node, theta of g)
    let mut level: Vec<BigInt> = Vec::new();
    {
        let pm = p.pow(1);
        let mut r = BigInt::zero();
        while r < pm {
            if g.eval_mod(&r, &pm).is_zero() {
                level.push(r.clone());
            }
            r += 1;
        }
    }
    let mut depth = 1u64;
    while !level.is_empty() {
        let mut next = Vec::new();
        for r in level {
            let dv = g.derivative().eval(&r);
            let theta = vp_or_none(&dv, p);
            let hensel_ok = match theta {
                Some(t) => t < depth && 2 * t < depth,
                None => false,
            };
            if hensel_ok {
                accepted.push((r, theta.unwrap()));
                continue;
            }
            if depth >= depth_bound {
                return Err(Error::ContractViolation(format!(
                    "branch at depth {depth} survives past the decision bound without a Hensel witness"
                )));
            }
            let pm_next = p.pow(depth + 1);
            let step = p.pow(depth);
            let mut child = r;
            while child < pm_next {
                if g.eval_mod(&child, &pm_next).is_zero() {
                    next.push(child.clone());
                }
                child += &step;
            }
        }
        level = next;
        depth += 1;
    }

    // Lift every accepted branch to full working precision and collapse
    // branches that converged to the same root.
    let mut residues: Vec<BigInt> = Vec::new();
    for (node, _) in accepted {
        let lifted = hensel_lift(&g, &node, p, work_k)?;
        if !residues.contains(&lifted) {
            residues.push(lifted);
        }
    }
    residues.sort();

    // Multiplicity data: a root of g is a multiple root of f exactly when it
    // is also a root of gcd(f, f').
    let gcd_ff = f.gcd(&f.derivative());
    let shared = g.gcd(&gcd_ff);
    let shared_nontrivial = shared.degree().unwrap_or(0) >= 1;
    let cofactor = if shared_nontrivial {
        Some(
            g.div_exact(&shared)
                .ok_or_else(|| Error::ContractViolation("gcd divides g".into()))?,
        )
    } else {
        None
    };

    let mut out = Vec::with_capacity(residues.len());
    for residue in residues {
        let simple = if !shared_nontrivial {
            true
        } else {
            let cof = cofactor.as_ref().unwrap();
            let sep = shared.resultant(cof);
            if sep.is_zero() {
                return Err(Error::ContractViolation(
                    "squarefree factors share a root".into(),
                ));
            }
            let bound = vp(&sep, p)? + 1;
            let check_k = work_k.max(bound);
            let refined = hensel_lift(&g, &residue, p, check_k)?;
            // root of the shared factor => multiple root of f
            !shared.eval_mod(&refined, &p.pow(bound)).is_zero()
        };

        // For simple roots, make sure the reported precision also witnesses
        // the Hensel condition for f itself.
        let (residue, precision, theta) = if simple {
            let mut prec = work_k;
            let mut res_at = hensel_lift(&g, &residue, p, prec)?;
            let theta_f = loop {
                match vp_or_none(&f.derivative().eval(&res_at), p) {
                    Some(t) if t < prec => break t,
                    _ => {
                        prec += 8;
                        res_at = hensel_lift(&g, &res_at, p, prec)?;
                    }
                }
            };
            let need = (2 * theta_f + 1).max(k);
            if need > prec {
                prec = need;
                res_at = hensel_lift(&g, &res_at, p, prec)?;
            }
            (canonical_mod(&res_at, &p.pow(prec)), prec, Some(theta_f))
        } else {
            (residue, work_k, None)
        };

        let valuation = match vp_or_none(&residue, p) {
            Some(v) if v < precision => Valuation::Exact(v),
            _ => Valuation::AtLeast(precision),
        };
        out.push(PAdicRoot {
            prime: p.clone(),
            residue,
            precision,
            valuation,
            simple,
            theta,
        });
    }
    Ok(out)
}

/// Re-lifts a simple root approximation to a (possibly higher) precision.
pub fn lift_root(f: &IntPoly, root: &PAdicRoot, target_k: u64) -> Result<BigInt> {
    hensel_lift(f, &root.residue, &root.prime, target_k)
}
