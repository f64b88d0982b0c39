//! Constructive factorizations in `Z[[x]]` for every reducible class the
//! classifier can report, plus certificate verification, the normalization
//! transform that zeroes leading `A`-coefficients, and recovery of the
//! underlying p-adic root from a factorization.

use crate::classify::{classify, Classification, NormalForm, NormalFormResult, Rule, RuleData, Verdict};
use crate::intutil::{
    big_pow, canonical_mod, exact_div, least_abs_mod, mod_inverse, prime_power_decomposition,
};
use crate::padic::{hensel_lift, PAdicRoot, Prime, Valuation};
use crate::polyring::IntPoly;
use crate::series::TruncatedSeries;
use crate::{vp, Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// The auxiliary polynomial tower `g_d, g_{d-1}, ..., g_2` obtained by
/// reversing `f` against the root valuation `ell` and peeling one
/// coefficient per level:
///
/// * `g_d(x) = p^((d-2)ell) g_d - p^((d-3)ell) g_{d-1} x + ...
///   + (-1)^(d-1) p^(m-ell) g_1 x^(d-1) + (-1)^d p^(n-2ell) x^d`
/// * `g_k(x) = (p^((k-1)ell) gamma_{k+1} - g_{k+1}(x)) / x` exactly.
#[derive(Debug, Clone)]
pub struct ReversalTower {
    /// `levels[k - 2]` is `g_k`, for `k = 2 ..= d`.
    levels: Vec<IntPoly>,
    pub ell: u64,
}

impl ReversalTower {
    pub fn build(form: &NormalForm, ell: u64) -> Result<Self> {
        let d = form.degree;
        if d < 2 {
            return Err(Error::NotApplicable("tower requires degree >= 2".into()));
        }
        if 2 * ell > form.n {
            return Err(Error::NotApplicable("tower requires 2*ell <= n".into()));
        }
        if ell < 1 {
            return Err(Error::NotApplicable("tower requires ell >= 1".into()));
        }
        if let Some(m) = form.m {
            if ell > m {
                return Err(Error::NotApplicable("tower requires ell <= m".into()));
            }
        }
        let p = &form.prime;
        let mut top = vec![BigInt::zero(); d + 1];
        for (j, slot) in top.iter_mut().enumerate() {
            let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            *slot = if j <= d - 2 {
                sign * big_pow(p.value(), (d - 2 - j) as u64 * ell) * form.gamma(d - j)
            } else if j == d - 1 {
                sign * form.linear_over(ell)
            } else {
                sign * p.pow(form.n - 2 * ell)
            };
        }
        let mut levels = vec![IntPoly::from_coeffs(top)];
        for k in (2..d).rev() {
            // g_k = (p^((k-1) ell) gamma_{k+1} - g_{k+1}) / x
            let prev = levels.last().unwrap();
            let shifted = &IntPoly::constant(big_pow(p.value(), (k - 1) as u64 * ell) * form.gamma(k + 1))
                - prev;
            if !shifted.constant_term().is_zero() {
                return Err(Error::ContractViolation(
                    "tower recursion left a remainder".into(),
                ));
            }
            let gk = shifted
                .div_exact(&IntPoly::x_pow(1))
                .ok_or_else(|| Error::ContractViolation("tower division by x".into()))?;
            levels.push(gk);
        }
        levels.reverse(); // now levels[0] = g_2
        Ok(ReversalTower { levels, ell })
    }

    /// `g_k` for `2 <= k <= d`.
    pub fn level(&self, k: usize) -> &IntPoly {
        &self.levels[k - 2]
    }

    /// `g_d`.
    pub fn top(&self) -> &IntPoly {
        self.levels.last().expect("tower is never empty")
    }

    pub fn degree(&self) -> usize {
        self.levels.len() + 1
    }
}

/// A factorization `input = A * B mod x^order` together with the rule that
/// produced it and rule-specific witness data for independent re-checking.
#[derive(Debug, Clone)]
pub struct FactorizationCertificate {
    pub input: IntPoly,
    pub a: TruncatedSeries,
    pub b: TruncatedSeries,
    pub order: usize,
    pub rule: Rule,
    pub witnesses: serde_json::Value,
}

impl FactorizationCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "input": TruncatedSeries::from_poly(&self.input, self.input.coeffs().len().max(1)).to_json(),
            "A": self.a.to_json(),
            "B": self.b.to_json(),
            "order": self.order,
            "rule": format!("{:?}", self.rule),
            "witnesses": self.witnesses,
        })
    }
}

/// True iff `A * B = input mod x^order` and neither constant term is a unit.
pub fn verify_certificate(cert: &FactorizationCertificate) -> bool {
    let product = cert.a.mul(&cert.b);
    let embedded = TruncatedSeries::from_poly(&cert.input, cert.order);
    product.equal_mod(&embedded, cert.order)
        && !cert.a.constant_term().abs().is_one()
        && !cert.b.constant_term().abs().is_one()
}

/// Order-by-order lifting of a coprime split of the constant term:
/// `A_0 = u`, `B_0 = v`, and each `a_k` is the least absolute residue of
/// the Bezout solution of `v a_k + u b_k = f_k - sum a_i b_{k-i}` mod `u`.
pub fn factor_coprime_constant(
    f: &IntPoly,
    u: &BigInt,
    v: &BigInt,
    order: usize,
) -> Result<(TruncatedSeries, TruncatedSeries)> {
    if u * v != f.constant_term() {
        return Err(Error::NotApplicable(format!(
            "{u} * {v} does not equal the constant term"
        )));
    }
    if !u.gcd(v).is_one() {
        return Err(Error::NotApplicable(format!("{u} and {v} are not coprime")));
    }
    if u.abs().is_one() || v.abs().is_one() {
        return Err(Error::NotApplicable("both split parts must be non-units".into()));
    }
    let order = order.max(1);
    let u_abs = u.abs();
    let bezout = v.extended_gcd(u);
    debug_assert!(bezout.gcd.abs().is_one());
    // x with v*x = 1 mod u (extended_gcd may return gcd = -1).
    let x = if bezout.gcd.is_one() { bezout.x } else { -bezout.x };
    let mut a = vec![BigInt::zero(); order];
    let mut b = vec![BigInt::zero(); order];
    a[0] = u.clone();
    b[0] = v.clone();
    for k in 1..order {
        let mut c = f.coeff(k);
        for i in 1..k {
            c -= &a[i] * &b[k - i];
        }
        let ak = least_abs_mod(&(&c * &x), &u_abs);
        let bk = exact_div(&(&c - v * &ak), u)
            .ok_or_else(|| Error::ContractViolation("Bezout residual must divide".into()))?;
        a[k] = ak;
        b[k] = bk;
    }
    Ok((TruncatedSeries::new(a)?, TruncatedSeries::new(b)?))
}

/// The `n > 2m` construction: `A_0 = p^m`, `B_0 = p^(n-m)`, with `a_1` a
/// lifted root of `h(x) = g2 - g1 x + p^(n-2m) x^2` mod `p^m` and every
/// later pair `(a_k, s_{k+1})` solved from a linear congruence whose
/// coefficient `g1 - 2 p^(n-2m) a_1` is a unit mod `p`.
pub fn factor_n_gt_2m(
    form: &NormalForm,
    order: usize,
) -> Result<(TruncatedSeries, TruncatedSeries)> {
    let Some(m) = form.m else {
        return Err(Error::NotApplicable("n > 2m requires a nonzero linear term".into()));
    };
    let n = form.n;
    if n <= 2 * m {
        return Err(Error::NotApplicable("requires n > 2m".into()));
    }
    if form.degree < 2 {
        return Err(Error::NotApplicable("requires degree >= 2".into()));
    }
    let order = order.max(1);
    let p = &form.prime;
    let g1 = form.gamma(1);
    let g2 = form.gamma(2);
    let pm = p.pow(m);
    let p_n2m = p.pow(n - 2 * m);
    let h = IntPoly::from_coeffs(vec![g2.clone(), -&g1, p_n2m.clone()]);

    // a_1 = g2 / g1 mod p, lifted to mod p^m; h'(a_1) = -g1 mod p is a unit,
    // so the Hensel condition holds with theta = 0.
    let g1_inv = mod_inverse(&canonical_mod(&g1, p.value()), p.value())
        .ok_or_else(|| Error::ContractViolation("g1 is a unit mod p".into()))?;
    let seed = canonical_mod(&(&g2 * &g1_inv), p.value());
    let a1 = if m == 1 { seed } else { hensel_lift(&h, &seed, p, m)? };

    let s2 = exact_div(&h.eval(&a1), &pm)
        .ok_or_else(|| Error::ContractViolation("h(a1) divisible by p^m".into()))?;
    let b1 = &g1 - &p_n2m * &a1;

    // w = g1 - 2 p^(n-2m) a_1 is invertible mod p^m.
    let w = &g1 - BigInt::from(2) * &p_n2m * &a1;
    let w_inv = mod_inverse(&canonical_mod(&w, &pm), &pm)
        .ok_or_else(|| Error::ContractViolation("w invertible mod p^m".into()))?;

    let mut a = vec![BigInt::zero(); order];
    let mut b = vec![BigInt::zero(); order];
    let mut s = vec![BigInt::zero(); order + 1];
    a[0] = p.pow(m);
    b[0] = p.pow(n - m);
    if order > 1 {
        a[1] = a1.clone();
        b[1] = b1.clone();
    }
    if order + 1 > 2 {
        s[2] = s2;
    }
    for k in 2..order {
        // gamma_{k+1} = p^m s_{k+1} + a_k w + a_1 s_k + sum_{i=2}^{k-1} a_i b_{k+1-i}
        let mut rhs = if k < form.degree {
            form.gamma(k + 1)
        } else {
            BigInt::zero()
        };
        rhs -= &a1 * &s[k];
        for i in 2..k {
            rhs -= &a[i] * &b[k + 1 - i];
        }
        let ak = least_abs_mod(&(&rhs * &w_inv), &pm);
        let sk1 = exact_div(&(&rhs - &ak * &w), &pm)
            .ok_or_else(|| Error::ContractViolation("p^m divides the step residual".into()))?;
        b[k] = &s[k] - &p_n2m * &ak;
        a[k] = ak;
        s[k + 1] = sk1;
    }
    Ok((TruncatedSeries::new(a)?, TruncatedSeries::new(b)?))
}

/// Polynomial split off a repeated factor: `(gcd(f, f'), f / gcd(f, f'))`.
pub fn factor_multiple_root(f: &IntPoly) -> Result<(IntPoly, IntPoly)> {
    let g = f.gcd(&f.derivative());
    if g.degree().unwrap_or(0) < 1 {
        return Err(Error::NotApplicable("gcd(f, f') is constant".into()));
    }
    let reduced = f
        .div_exact(&g)
        .ok_or_else(|| Error::ContractViolation("gcd(f, f') divides f".into()))?;
    if g.constant_term().abs().is_one() {
        return Err(Error::NotApplicable(
            "gcd factor has unit constant term".into(),
        ));
    }
    if reduced.constant_term().abs().is_one() {
        return Err(Error::NotApplicable(
            "reduced factor has unit constant term".into(),
        ));
    }
    Ok((g, reduced))
}

/// Closed-form split for quadratics and cubics with vanishing discriminant.
pub fn closed_form_double_root(form: &NormalForm) -> Result<(IntPoly, IntPoly)> {
    let f = form.to_poly();
    let d = form.degree;
    if !(2..=3).contains(&d) {
        return Err(Error::NotApplicable("closed form needs degree 2 or 3".into()));
    }
    if !f.discriminant()?.is_zero() {
        return Err(Error::NotApplicable("discriminant is nonzero".into()));
    }
    let p = &form.prime;
    let n = form.n;
    if d == 2 {
        // f = (c + (f_1 / 2c) x)^2 with c^2 = f_0.
        if !n.is_multiple_of(2) {
            return Err(Error::NotApplicable("constant term is not a square".into()));
        }
        let c = p.pow(n / 2);
        let e = exact_div(&f.coeff(1), &(BigInt::from(2) * &c))
            .ok_or_else(|| Error::NotApplicable("linear coefficient does not halve".into()))?;
        let factor = IntPoly::from_coeffs(vec![c, e]);
        if (&factor * &factor) != f {
            return Err(Error::NotApplicable("square reconstruction failed".into()));
        }
        return Ok((factor.clone(), factor));
    }
    // Cubic: the double root is rational,
    // rho = (f_1 g2 - 9 p^n g3) / (2 (3 f_1 g3 - g2^2)) = -p^ell / a.
    if let Some(m) = form.m {
        if n > 2 * m {
            return Err(Error::NotApplicable("cubic closed form needs n <= 2m".into()));
        }
    }
    let f1 = f.coeff(1);
    let g2 = form.gamma(2);
    let g3 = form.gamma(3);
    let num = &f1 * &g2 - BigInt::from(9) * p.pow(n) * &g3;
    let den = BigInt::from(2) * (BigInt::from(3) * &f1 * &g3 - &g2 * &g2);
    if den.is_zero() {
        return Err(Error::NotApplicable("degenerate closed form".into()));
    }
    let g = num.gcd(&den);
    let (mut nn, mut dd) = (num / &g, den / &g);
    if dd.is_negative() {
        nn = -nn;
        dd = -dd;
    }
    if !nn.is_negative() {
        return Err(Error::NotApplicable("double root is not negative".into()));
    }
    let Some((root_p, ell)) = prime_power_decomposition(&nn) else {
        return Err(Error::NotApplicable("root numerator is not a prime power".into()));
    };
    if &root_p != p.value() || ell < 1 || 2 * ell > n {
        return Err(Error::NotApplicable("root valuation out of range".into()));
    }
    let a = dd;
    let lin = exact_div(&f1, &p.pow(ell))
        .ok_or_else(|| Error::NotApplicable("p^ell does not divide f_1".into()))?
        - p.pow(n - 2 * ell) * &a;
    let quad = exact_div(&g3, &a)
        .ok_or_else(|| Error::NotApplicable("a does not divide g3".into()))?;
    let lhs = IntPoly::from_coeffs(vec![p.pow(ell), a]);
    let rhs = IntPoly::from_coeffs(vec![p.pow(n - ell), lin, quad]);
    if (&lhs * &rhs) != f {
        return Err(Error::NotApplicable("closed-form product mismatch".into()));
    }
    Ok((lhs, rhs))
}

/// Internal state of the simple-root construction; the divisibility ledger
/// below is asserted after every step.
struct SimpleRootState {
    a: Vec<BigInt>,
    b: Vec<BigInt>,
    s: Vec<BigInt>,
    t: Vec<BigInt>,
}

fn assert_divides(value: &BigInt, p: &Prime, e: u64, what: &str) -> Result<()> {
    if value.is_zero() || vp(value, p).unwrap_or(0) >= e {
        Ok(())
    } else {
        Err(Error::ContractViolation(format!(
            "{what} is not divisible by p^{e}"
        )))
    }
}

/// Power-series factorization from a simple root of positive valuation
/// `ell`: `A_0 = p^ell`, `B_0 = p^(n-ell)`, coefficients produced by the
/// inverted-root recurrences over the reversal tower.
pub fn factor_simple_root(
    form: &NormalForm,
    root: &PAdicRoot,
    order: usize,
) -> Result<FactorizationCertificate> {
    let d = form.degree;
    let n = form.n;
    let p = &form.prime;
    if d < 2 {
        return Err(Error::NotApplicable("requires degree >= 2".into()));
    }
    if !root.simple {
        return Err(Error::NotApplicable("root is not simple".into()));
    }
    let Valuation::Exact(ell) = root.valuation else {
        return Err(Error::NotApplicable("root valuation is not pinned".into()));
    };
    if ell < 1 {
        return Err(Error::NotApplicable("root valuation must be positive".into()));
    }
    if let Some(m) = form.m {
        if n > 2 * m {
            return Err(Error::NotApplicable("requires n <= 2m".into()));
        }
        if ell > m {
            return Err(Error::ContractViolation("root forces ell <= m".into()));
        }
    }
    if 2 * ell > n {
        return Err(Error::ContractViolation("root forces 2*ell <= n".into()));
    }
    let order = order.max(2);
    let f = form.to_poly();
    let tower = ReversalTower::build(form, ell)?;
    let gd = tower.top().clone();
    let gd_deriv = gd.derivative();

    // r = -p^ell / rho is a unit root of g_d; theta = v_p(g_d'(r)) is first
    // estimated at low precision and re-checked once the final working
    // precision is known (guard of 4 extra digits on the root).
    const GUARD: u64 = 4;
    let mut prec = root.precision.max(ell + 2 * root.theta.unwrap_or(0) + GUARD);
    let (a1_modulus, theta, r_residue) = loop {
        let rho = hensel_lift(&f, &root.residue, p, prec)?;
        let unit = exact_div(&rho, &p.pow(ell))
            .ok_or_else(|| Error::ContractViolation("rho has valuation ell".into()))?;
        let rprec = prec - ell;
        let rmod = p.pow(rprec);
        let unit_inv = mod_inverse(&canonical_mod(&unit, &rmod), &rmod)
            .ok_or_else(|| Error::ContractViolation("rho / p^ell is a unit".into()))?;
        // rho = p^ell * unit, and the tower variable is r = -p^ell / rho.
        let r = canonical_mod(&(-unit_inv), &rmod);
        let dv = gd_deriv.eval(&r);
        let theta = match crate::padic::vp(&dv, p) {
            Ok(t) if t + 1 < rprec => t,
            _ => {
                prec += 2 * (prec - ell) + 8;
                continue;
            }
        };
        let needed = (2 * d as u64 - 3) * ell + 2 * theta;
        if rprec < needed + GUARD {
            prec = needed + GUARD + ell;
            continue;
        }
        break (needed, theta, r);
    };
    let a1 = least_abs_mod(&r_residue, &p.pow(a1_modulus));
    assert_divides(&gd.eval(&a1), p, a1_modulus, "g_d(a1)")?;
    if vp(&gd_deriv.eval(&a1), p)? != theta {
        return Err(Error::ContractViolation("theta drifted under reduction".into()));
    }

    let p_ell = p.pow(ell);
    let p_n2l = p.pow(n - 2 * ell);
    let dl = (d as u64 - 2) * ell;

    // Derivative values g_k'(a1) for k = 2..=d drive the recurrences.
    let gk_deriv_at: Vec<BigInt> = (2..=d)
        .map(|k| tower.level(k).derivative().eval(&a1))
        .collect();
    let gkd = |k: usize| -> &BigInt { &gk_deriv_at[k - 2] };

    let top_index = order - 1; // highest coefficient index produced
    let mut st = SimpleRootState {
        a: vec![BigInt::zero(); top_index + 1],
        b: vec![BigInt::zero(); top_index + 1],
        s: vec![BigInt::zero(); top_index + 2],
        t: vec![BigInt::zero(); top_index + 1],
    };
    st.a[0] = p.pow(ell);
    st.b[0] = p.pow(n - ell);
    st.a[1] = a1.clone();
    st.s[1] = form.linear_over(ell);
    st.b[1] = &st.s[1] - &p_n2l * &a1;
    for k in 2..=d.min(top_index + 1) {
        let sk = exact_div(&tower.level(k).eval(&a1), &big_pow(p.value(), (k as u64 - 1) * ell))
            .ok_or_else(|| Error::ContractViolation(format!("p^((k-1) ell) divides g_{k}(a1)")))?;
        if k <= top_index {
            st.s[k] = sk.clone();
            if k < d {
                st.b[k] = sk;
            }
        } else {
            st.s[k] = sk;
        }
    }
    if top_index < d {
        // Order too small to reach the inductive regime; the prefix above is
        // already the full answer.
        let a = TruncatedSeries::new(st.a)?;
        let b = TruncatedSeries::new(st.b)?;
        return finish_simple_root(form, root, ell, theta, &a1, f, a, b, order);
    }

    let p_theta = p.pow(theta);
    let step_mod = big_pow(p.value(), (d as u64 - 1) * ell + theta);
    let u = exact_div(gkd(d), &p_theta)
        .ok_or_else(|| Error::ContractViolation("p^theta divides g_d'(a1)".into()))?;
    let u_inv = mod_inverse(&canonical_mod(&u, &step_mod), &step_mod)
        .ok_or_else(|| Error::ContractViolation("g_d'(a1)/p^theta is a unit".into()))?;

    // Base step: a_d and s_{d+1}.
    {
        let sign = if d.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
        let sd_over = exact_div(&st.s[d], &p_theta)
            .ok_or_else(|| Error::ContractViolation("p^theta divides s_d".into()))?;
        let rhs_over = &sign * big_pow(&a1, d as u64 - 1) * sd_over;
        let ad = least_abs_mod(&(&rhs_over * &u_inv), &step_mod);
        let td = exact_div(&(&ad * gkd(d) - sign * big_pow(&a1, d as u64 - 1) * &st.s[d]), &p_ell)
            .ok_or_else(|| Error::ContractViolation("p^ell divides the base residual".into()))?;
        let sd1 = if d == 2 {
            td.clone()
        } else {
            exact_div(&(&ad * gkd(2) - &a1 * &st.s[d]), &p_ell)
                .ok_or_else(|| Error::ContractViolation("p^ell divides s_(d+1)".into()))?
        };
        assert_divides(&ad, p, dl + theta, "a_d")?;
        assert_divides(&td, p, dl + 2 * theta, "t_d")?;
        assert_divides(&sd1, p, theta, "s_(d+1)")?;
        st.b[d] = &st.s[d] - &p_n2l * &ad;
        st.a[d] = ad;
        st.t[d] = td;
        st.s[d + 1] = sd1;
    }

    // Inductive steps: a_{d+j}, t_{d+j}, s_{d+1+j}, b_{d+j}.
    let p_dl = big_pow(p.value(), dl);
    for j in 1..=top_index - d {
        let mut conv = BigInt::zero();
        for i in 0..j {
            conv += &st.a[d + i] * &st.b[d + j - 1 - i];
        }
        let rhs = &a1 * &st.t[d + j - 1] + &p_dl * &conv;
        let rhs_over = exact_div(&rhs, &p_theta)
            .ok_or_else(|| Error::ContractViolation("p^theta divides the step rhs".into()))?;
        let adj = least_abs_mod(&(&rhs_over * &u_inv), &step_mod);
        let tdj = exact_div(&(&adj * gkd(d) - &rhs), &p_ell)
            .ok_or_else(|| Error::ContractViolation("p^ell divides t_(d+j)".into()))?;
        // Store before computing s: the unwound t-definition reads a_(d+j).
        st.a[d + j] = adj.clone();
        st.t[d + j] = tdj.clone();
        let sdj = if d == 2 {
            tdj.clone()
        } else if j >= d - 2 {
            // Unwind the t-definition at index j + 2.
            let mut acc = st.t[j + 2].clone();
            for c in 1..=d - 2 {
                acc += big_pow(p.value(), (d as u64 - 2 - c as u64) * ell)
                    * &st.a[d + j + 1 - c]
                    * gkd(c + 1);
            }
            exact_div(&acc, &p_dl)
                .ok_or_else(|| Error::ContractViolation("p^((d-2) ell) divides s_(d+1+j)".into()))?
        } else {
            // Early block: solve the original equation directly.
            let mut acc = &adj * gkd(2) - &a1 * &st.s[d + j];
            for i in 2..=j + 1 {
                acc -= &st.a[d + j + 1 - i] * &st.s[i];
            }
            exact_div(&acc, &p_ell)
                .ok_or_else(|| Error::ContractViolation("p^ell divides s_(d+1+j)".into()))?
        };
        assert_divides(&adj, p, dl + theta, "a_(d+j)")?;
        assert_divides(&tdj, p, dl + 2 * theta, "t_(d+j)")?;
        assert_divides(&sdj, p, theta, "s_(d+1+j)")?;
        st.b[d + j] = &st.s[d + j] - &p_n2l * &adj;
        st.s[d + j + 1] = sdj;
    }

    let a = TruncatedSeries::new(st.a)?;
    let b = TruncatedSeries::new(st.b)?;
    finish_simple_root(form, root, ell, theta, &a1, f, a, b, order)
}

#[allow(clippy::too_many_arguments)]
fn finish_simple_root(
    form: &NormalForm,
    root: &PAdicRoot,
    ell: u64,
    theta: u64,
    a1: &BigInt,
    f: IntPoly,
    a: TruncatedSeries,
    b: TruncatedSeries,
    order: usize,
) -> Result<FactorizationCertificate> {
    let cert = FactorizationCertificate {
        input: f,
        a,
        b,
        order,
        rule: Rule::SimplePAdicRoot,
        witnesses: serde_json::json!({
            "p": form.prime.to_string(),
            "ell": ell.to_string(),
            "theta": theta.to_string(),
            "a1": a1.to_string(),
            "root_residue": root.residue.to_string(),
            "root_precision": root.precision.to_string(),
        }),
    };
    if !verify_certificate(&cert) {
        return Err(Error::ContractViolation(
            "simple-root factorization failed re-multiplication".into(),
        ));
    }
    Ok(cert)
}

/// Rewrites `A * B` (with `A_0 = p^ell`, `B_0 = p^(n-ell)`, `gcd(p, a_1) = 1`
/// after an optional swap) into an equivalent factorization with
/// `a_2 = ... = a_k = 0`, multiplying `A` by unit polynomials stage by stage.
pub fn normalize_factorization(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    k: usize,
) -> Result<(TruncatedSeries, TruncatedSeries)> {
    let order = a.order().min(b.order());
    let mut a = a.truncated(order);
    let mut b = b.truncated(order);
    let Some((pa, ell)) = prime_power_decomposition(a.constant_term()) else {
        return Err(Error::NotApplicable("A_0 must be a prime power".into()));
    };
    let Some((pb, eb)) = prime_power_decomposition(b.constant_term()) else {
        return Err(Error::NotApplicable("B_0 must be a prime power".into()));
    };
    if pa != pb || a.constant_term().is_negative() || b.constant_term().is_negative() {
        return Err(Error::NotApplicable(
            "constant terms must be positive powers of one prime".into(),
        ));
    }
    let p = Prime::new(pa)?;
    if (a.coeff(1) % p.value()).is_zero() {
        // A symmetric factorization can still normalize after a swap.
        if ell == eb && !(b.coeff(1) % p.value()).is_zero() {
            std::mem::swap(&mut a, &mut b);
        } else {
            return Err(Error::NotNormalizable(
                "neither linear coefficient is coprime to p".into(),
            ));
        }
    }
    let p_ell = p.pow(ell);
    for stage in 1..k.min(order.saturating_sub(1)) {
        let target = a.coeff(stage + 1);
        if target.is_zero() {
            continue;
        }
        let a1 = a.coeff(1);
        let modulus = big_pow(p.value(), stage as u64 * ell);
        let a1_pow = big_pow(&a1, stage as u64);
        let inv = mod_inverse(&canonical_mod(&a1_pow, &modulus), &modulus)
            .ok_or_else(|| Error::ContractViolation("a_1^j is a unit mod p^(j ell)".into()))?;
        let sign = if stage % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let u1 = least_abs_mod(
            &(&sign * &target * big_pow(p.value(), (stage as u64 - 1) * ell) * inv),
            &modulus,
        );
        // u_{j+1} closes the Bezout identity; intermediate u_i follow the
        // geometric recursion and stay divisible by p^((j-i) ell).
        let mut unit_coeffs = vec![BigInt::zero(); order];
        unit_coeffs[0] = BigInt::one();
        if order > 1 {
            unit_coeffs[1] = u1.clone();
        }
        let mut prev = u1.clone();
        for c in unit_coeffs
            .iter_mut()
            .take(stage.min(order - 1) + 1)
            .skip(2)
        {
            let ui = exact_div(&(-&prev * &a1), &p_ell)
                .ok_or_else(|| Error::ContractViolation("p^ell divides u_i chain".into()))?;
            *c = ui.clone();
            prev = ui;
        }
        if stage < order - 1 {
            let sign_prev = if (stage - 1) % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            let numerator = -&target * big_pow(p.value(), (stage as u64 - 1) * ell)
                - &sign_prev * &u1 * &a1_pow;
            unit_coeffs[stage + 1] = exact_div(&numerator, &modulus).ok_or_else(|| {
                Error::ContractViolation("Bezout numerator divisible by p^(j ell)".into())
            })?;
        }
        let unit = TruncatedSeries::new(unit_coeffs)?;
        a = unit.mul(&a);
        b = unit.invert_unit()?.mul(&b);
        if !a.coeff(stage + 1).is_zero() {
            return Err(Error::ContractViolation(format!(
                "stage {stage} failed to zero coefficient {}",
                stage + 1
            )));
        }
    }
    for i in 2..=k.min(order - 1) {
        if !a.coeff(i).is_zero() {
            return Err(Error::ContractViolation(format!(
                "normalization left a_{i} nonzero"
            )));
        }
    }
    Ok((a, b))
}

/// Reads the p-adic root back out of a certificate: normalize until
/// `a_2 = ... = a_K = 0`, check the tower relation at `a_1`, and return
/// `rho = -p^ell / a_1 mod p^(K ell)`.
pub fn recover_root_from_factorization(
    cert: &FactorizationCertificate,
    depth: u64,
) -> Result<BigInt> {
    let mut f = cert.input.clone();
    let mut a = cert.a.clone();
    let b = cert.b.clone();
    if f.constant_term().is_negative() {
        f = -&f;
        a = a.neg();
    }
    let form = match crate::classify::normal_form(&f)? {
        NormalFormResult::Form(form) => form,
        other => {
            return Err(Error::NotApplicable(format!(
                "input has no normal form: {other:?}"
            )))
        }
    };
    if let Some(m) = form.m {
        if form.n > 2 * m {
            return Err(Error::NotApplicable("requires n <= 2m".into()));
        }
    }
    let p = form.prime.clone();
    if !form.gamma(2).gcd(&form.gamma(3)).gcd(p.value()).is_one() {
        return Err(Error::NotApplicable("requires gcd(p, g2, g3) = 1".into()));
    }
    let d = form.degree;
    if (cert.order as u64) < depth + d as u64 {
        return Err(Error::NotApplicable(
            "certificate order too small for the requested depth".into(),
        ));
    }
    let (a_norm, _b_norm) = normalize_factorization(&a, &b, depth as usize)?;
    let (_, ell) = prime_power_decomposition(a_norm.constant_term())
        .ok_or_else(|| Error::NotApplicable("A_0 must be a prime power".into()))?;
    let tower = ReversalTower::build(&form, ell)?;
    let a1 = a_norm.coeff(1);
    let modulus = big_pow(p.value(), depth * ell);
    if !tower.top().eval_mod(&a1, &modulus).is_zero() {
        return Err(Error::ContractViolation(
            "normalized a_1 does not satisfy the tower relation".into(),
        ));
    }
    let inv = mod_inverse(&canonical_mod(&a1, &modulus), &modulus)
        .ok_or_else(|| Error::ContractViolation("a_1 is a unit mod p".into()))?;
    Ok(canonical_mod(&(-p.pow(ell) * inv), &modulus))
}

/// Driver result: reducible inputs yield a verified certificate, everything
/// else returns the classification untouched.
#[derive(Debug, Clone)]
pub enum FactorOutcome {
    Certificate(FactorizationCertificate),
    Classified(Classification),
}

/// Classifies and, when reducible, factors with the construction matching
/// the reported rule. Every certificate is verified before it is returned.
pub fn factor(f: &IntPoly, order: usize) -> Result<FactorOutcome> {
    let order = order.max(1);
    let classification = classify(f)?;
    if classification.verdict != Verdict::Reducible {
        return Ok(FactorOutcome::Classified(classification));
    }
    // Sign transfer: factor |f| and negate one factor.
    if f.constant_term().is_negative() {
        let flipped = factor(&-f, order)?;
        let FactorOutcome::Certificate(mut cert) = flipped else {
            return Err(Error::ContractViolation("sign flip changed the verdict".into()));
        };
        cert.input = f.clone();
        cert.a = cert.a.neg();
        if !verify_certificate(&cert) {
            return Err(Error::ContractViolation("sign transfer broke the certificate".into()));
        }
        return Ok(FactorOutcome::Certificate(cert));
    }

    let build = |a: TruncatedSeries, b: TruncatedSeries, witnesses: serde_json::Value| {
        let cert = FactorizationCertificate {
            input: f.clone(),
            a,
            b,
            order,
            rule: classification.rule,
            witnesses,
        };
        if verify_certificate(&cert) {
            Ok(FactorOutcome::Certificate(cert))
        } else {
            Err(Error::ContractViolation(format!(
                "certificate for rule {:?} failed verification",
                classification.rule
            )))
        }
    };

    match &classification.data {
        RuleData::PowerOfX { exponent, residual } => {
            let t = *exponent;
            let g = f
                .div_exact(&IntPoly::x_pow(t))
                .ok_or_else(|| Error::ContractViolation("x^t divides f".into()))?;
            // Keep both factors proper: peel a single x when the cofactor is
            // a unit.
            let (lhs, rhs) = if residual.verdict == Verdict::Unit {
                (
                    IntPoly::x_pow(1),
                    &IntPoly::x_pow(t - 1) * &g,
                )
            } else {
                (IntPoly::x_pow(t), g)
            };
            build(
                TruncatedSeries::from_poly(&lhs, order),
                TruncatedSeries::from_poly(&rhs, order),
                serde_json::json!({ "x_power": t.to_string() }),
            )
        }
        RuleData::IntegerContent { factor } => {
            let g = f
                .div_exact(&IntPoly::constant(factor.clone()))
                .ok_or_else(|| Error::ContractViolation("scalar factor divides f".into()))?;
            build(
                TruncatedSeries::from_poly(&IntPoly::constant(factor.clone()), order),
                TruncatedSeries::from_poly(&g, order),
                serde_json::json!({ "scalar": factor.to_string() }),
            )
        }
        RuleData::CoprimeSplit { u, v } => {
            let (a, b) = factor_coprime_constant(f, u, v, order)?;
            build(
                a,
                b,
                serde_json::json!({ "u": u.to_string(), "v": v.to_string() }),
            )
        }
        RuleData::PrimePower { p, n } => {
            // Linear rule: f = p * (f / p).
            debug_assert_eq!(classification.rule, Rule::LinearRule);
            let g = f
                .div_exact(&IntPoly::constant(p.value().clone()))
                .ok_or_else(|| Error::ContractViolation("p divides a reducible linear f".into()))?;
            build(
                TruncatedSeries::from_poly(&IntPoly::constant(p.value().clone()), order),
                TruncatedSeries::from_poly(&g, order),
                serde_json::json!({ "p": p.to_string(), "n": n.to_string() }),
            )
        }
        RuleData::Form { form } => {
            debug_assert_eq!(classification.rule, Rule::NGreaterThan2M);
            let (a, b) = factor_n_gt_2m(form, order)?;
            build(
                a,
                b,
                serde_json::json!({
                    "p": form.prime.to_string(),
                    "n": form.n.to_string(),
                    "m": form.m.map(|m| m.to_string()),
                }),
            )
        }
        RuleData::MultipleRoot { form, factor } => {
            let (g, reduced) = factor_multiple_root(f)?;
            debug_assert_eq!(&g, factor);
            // Cross-check the closed form whenever it applies.
            if form.degree <= 3 {
                if let Ok((lhs, rhs)) = closed_form_double_root(form) {
                    if &(&lhs * &rhs) != f {
                        return Err(Error::ContractViolation(
                            "closed form disagrees with the gcd split".into(),
                        ));
                    }
                }
            }
            build(
                TruncatedSeries::from_poly(&g, order),
                TruncatedSeries::from_poly(&reduced, order),
                serde_json::json!({
                    "gcd_factor": TruncatedSeries::from_poly(&g, g.coeffs().len()).to_json(),
                }),
            )
        }
        RuleData::SimpleRoot { form, root, .. } => {
            let cert = factor_simple_root(form, root, order)?;
            // factor_simple_root built the certificate against |f| = f here.
            debug_assert_eq!(&cert.input, f);
            Ok(FactorOutcome::Certificate(cert))
        }
        RuleData::None => Err(Error::ContractViolation(
            "reducible verdict without payload".into(),
        )),
    }
}
