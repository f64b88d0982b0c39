//! Acceptance suite: nine end-to-end criteria, one test (and one printed
//! PASS line) per criterion. Run with `cargo test --test acceptance`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeSet;
use zxx::batch::map_batch;
use zxx::classify::{normal_form, NormalFormResult};
use zxx::factorize::{
    factor_n_gt_2m, factor_simple_root, normalize_factorization,
    recover_root_from_factorization, ReversalTower,
};
use zxx::{
    classify, factor, roots_in_zp, verify_certificate, vp, FactorOutcome,
    FactorizationCertificate, IntPoly, NormalForm, Prime, Rule, TruncatedSeries, Verdict,
};

const ORDER: usize = 64;

fn poly(coeffs: &[i64]) -> IntPoly {
    IntPoly::from_i64(coeffs)
}

fn prime(p: u64) -> Prime {
    Prime::from_u64(p).unwrap()
}

fn form_of(f: &IntPoly) -> NormalForm {
    match normal_form(f).expect("normal form extraction") {
        NormalFormResult::Form(form) => form,
        other => panic!("no normal form for {f}: {other:?}"),
    }
}

fn certificate(f: &IntPoly) -> FactorizationCertificate {
    match factor(f, ORDER).unwrap_or_else(|e| panic!("factor({f}) failed: {e}")) {
        FactorOutcome::Certificate(cert) => cert,
        FactorOutcome::Classified(c) => {
            panic!("{f}: expected a certificate, got {:?} ({:?})", c.verdict, c.rule)
        }
    }
}

// ---------------------------------------------------------------------------
// Criterion 1: golden examples, exact.
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_golden_examples() {
    let cases: [(&[i64], Verdict, Rule); 4] = [
        (&[6, 1, 1], Verdict::Reducible, Rule::NotPrimePower),
        (&[2, 7, 3], Verdict::Irreducible, Rule::PrimeConstant),
        (&[49, 98, 63, 14, 1], Verdict::Reducible, Rule::MultipleRootGcd),
        (&[7, 21, 15, 1], Verdict::Irreducible, Rule::DegreeAtMost3NoRoot),
    ];
    for (coeffs, verdict, rule) in &cases {
        let c = classify(&poly(coeffs)).unwrap();
        assert_eq!((c.verdict, c.rule), (*verdict, *rule), "input {coeffs:?}");
    }
    // The quartic must factor exactly as the declared square.
    let cert = certificate(&poly(&[49, 98, 63, 14, 1]));
    let half = TruncatedSeries::from_poly(&poly(&[7, 7, 1]), ORDER);
    assert!(cert.a.equal_mod(&half, ORDER), "A = {}", cert.a);
    assert!(cert.b.equal_mod(&half, ORDER), "B = {}", cert.b);
    println!("criterion 1 (golden examples, exact match): PASS");
}

// ---------------------------------------------------------------------------
// Criterion 2: certificate soundness sweep over every reducible rule.
// ---------------------------------------------------------------------------

/// Deterministic generator of reducible inputs spanning all seven reducible
/// rules: primes in {2,3,5,7}, constant-term exponents up to 6, degree up
/// to 5. Each family is built so its intended rule actually fires.
fn reducible_inputs() -> Vec<IntPoly> {
    let mut rng = StdRng::seed_from_u64(20_260_823);
    let primes = [2i64, 3, 5, 7];
    let mut out: Vec<IntPoly> = Vec::new();

    // LinearRule: p^n (1 + b x) with n >= 2 (content falls through as a
    // unit cofactor, degree 1, p | f_1).
    for &p in &primes {
        for n in 2..=6u32 {
            for b in [1i64, -1, 2, 3, -4, 5] {
                let c = p.pow(n);
                out.push(poly(&[c, c * b]));
            }
        }
    }

    // IntegerContent: c * g with g primitive (gcd(g0, g1) = 1) and g0 >= 2.
    for &c in &[4i64, 6, 9, 10, 12, 25, 27, 49] {
        for _ in 0..12 {
            let g0 = rng.gen_range(2i64..=9);
            let d = rng.gen_range(2usize..=4);
            let mut g = vec![g0, g0 + 1];
            for _ in 2..=d {
                g.push(rng.gen_range(-6i64..=6));
            }
            if *g.last().unwrap() == 0 {
                *g.last_mut().unwrap() = 1;
            }
            let coeffs: Vec<i64> = g.iter().map(|&x| c * x).collect();
            out.push(poly(&coeffs));
        }
    }

    // PowerOfXContent: x^t * g with g a non-unit (or t >= 2).
    for t in 1usize..=3 {
        for _ in 0..10 {
            let g0 = rng.gen_range(2i64..=9);
            let d = rng.gen_range(0usize..=2);
            let mut coeffs = vec![0i64; t];
            coeffs.push(g0);
            for _ in 0..d {
                coeffs.push(rng.gen_range(-5i64..=5));
            }
            if *coeffs.last().unwrap() == 0 {
                *coeffs.last_mut().unwrap() = 1;
            }
            out.push(poly(&coeffs));
        }
    }
    out.push(poly(&[0, 0, 1])); // x^2: unit cofactor, still reducible

    // NotPrimePower: composite non-prime-power constant, linear coefficient
    // coprime to it so the content stays 1.
    for &f0 in &[6i64, 10, 14, 15, 21, 22, 30, 33, 35] {
        for _ in 0..8 {
            let f1 = loop {
                let u = rng.gen_range(-9i64..=9);
                if u != 0 && u.unsigned_abs().gcd(&f0.unsigned_abs()) == 1 {
                    break u;
                }
            };
            let d = rng.gen_range(1usize..=4);
            let mut coeffs = vec![f0, f1];
            for _ in 2..=d {
                coeffs.push(rng.gen_range(-9i64..=9));
            }
            while coeffs.len() > 2 && *coeffs.last().unwrap() == 0 {
                *coeffs.last_mut().unwrap() = rng.gen_range(1i64..=5);
            }
            out.push(poly(&coeffs));
        }
    }

    // NGreaterThan2M: p^n + p^m g1 x + g2 x^2 + ... with n > 2m and both
    // g1 and g2 coprime to p.
    for &p in &primes {
        for n in 3..=6u32 {
            for m in 1..=((n - 1) / 2) {
                for _ in 0..4 {
                    let coprime = |rng: &mut StdRng| loop {
                        let v = rng.gen_range(-5i64..=5);
                        if v != 0 && v.unsigned_abs().gcd(&p.unsigned_abs()) == 1 {
                            return v;
                        }
                    };
                    let g1 = coprime(&mut rng);
                    let g2 = coprime(&mut rng);
                    let d = rng.gen_range(2usize..=5);
                    let mut coeffs = vec![p.pow(n), p.pow(m) * g1, g2];
                    for _ in 3..=d {
                        coeffs.push(rng.gen_range(-5i64..=5));
                    }
                    if coeffs.len() > 3 && *coeffs.last().unwrap() == 0 {
                        *coeffs.last_mut().unwrap() = 1;
                    }
                    out.push(poly(&coeffs));
                }
            }
        }
    }

    // MultipleRootGcd: (p + x)^2 times a coprime cofactor.
    for &p in &primes {
        let square = &poly(&[p, 1]) * &poly(&[p, 1]);
        out.push(square.clone());
        for b in [2i64, 3, -2, 5] {
            if b.unsigned_abs().gcd(&p.unsigned_abs()) != 1 || b == 1 {
                continue;
            }
            out.push(&square * &poly(&[p, b]));
            out.push(&square * &poly(&[p, b, 1]));
        }
    }

    // SimplePAdicRoot: (p + x) * q with q squarefree, coprime to p + x, and
    // no earlier rule applicable (constant p^2 or p^3, content 1).
    for &p in &primes {
        for b in -4i64..=4 {
            if b == p + 1 {
                continue; // q(-p) = 0: would merge with the linear factor
            }
            if b != 1 && b != 0 && b.unsigned_abs().gcd(&p.unsigned_abs()) == 1 {
                out.push(&poly(&[p, 1]) * &poly(&[p, b]));
            }
            out.push(&poly(&[p, 1]) * &poly(&[p, b, 1]));
        }
        for _ in 0..8 {
            let b = rng.gen_range(-4i64..=4);
            let c = rng.gen_range(-4i64..=4);
            let q = poly(&[p, b, c, 1]);
            let f = &poly(&[p, 1]) * &q;
            if q.eval(&BigInt::from(-p)).is_zero() {
                continue;
            }
            if f.gcd(&f.derivative()).degree() != Some(0) {
                continue; // repeated factor: belongs to the family above
            }
            out.push(f);
        }
    }

    out
}

#[test]
fn criterion_2_certificate_soundness_sweep() {
    let inputs = reducible_inputs();
    assert!(inputs.len() >= 500, "only {} inputs generated", inputs.len());
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for f in &inputs {
        let cert = certificate(f);
        assert!(verify_certificate(&cert), "certificate for {f} fails");
        let product = cert.a.mul(&cert.b);
        assert!(
            product.equal_mod(&TruncatedSeries::from_poly(f, ORDER), ORDER),
            "product mismatch for {f}"
        );
        assert!(!cert.a.constant_term().abs().is_one(), "unit A_0 for {f}");
        assert!(!cert.b.constant_term().abs().is_one(), "unit B_0 for {f}");
        seen.insert(format!("{:?}", cert.rule));
    }
    for rule in [
        "IntegerContent",
        "PowerOfXContent",
        "NotPrimePower",
        "LinearRule",
        "NGreaterThan2M",
        "MultipleRootGcd",
        "SimplePAdicRoot",
    ] {
        assert!(seen.contains(rule), "rule {rule} not covered (saw {seen:?})");
    }
    println!(
        "criterion 2 (certificate soundness sweep, {} reducible inputs, all 7 rules): PASS",
        inputs.len()
    );
}

// ---------------------------------------------------------------------------
// Criterion 3: degree <= 3 verdict matches an independent p-adic oracle.
// ---------------------------------------------------------------------------

struct GridCase {
    f: IntPoly,
    p: u64,
    n: u64,
    m: Option<u64>,
}

/// All quadratics and cubics of the normal-form shape
/// `p^n + p^m g1 x + g2 x^2 (+ g3 x^3)` on the small grid, including the
/// `g1 = 0` case.
fn small_grid() -> Vec<GridCase> {
    let mut out = Vec::new();
    for p in [2i64, 3] {
        // (m, g1) slots: g1 = 0, or finite m with gcd(p, g1) = 1.
        let mut linear: Vec<(Option<u64>, i64)> = vec![(None, 0)];
        for m in [1u64, 2] {
            for g1 in -5i64..=5 {
                if g1 != 0 && g1.unsigned_abs().gcd(&p.unsigned_abs()) == 1 {
                    linear.push((Some(m), g1));
                }
            }
        }
        for n in [2u64, 3, 4] {
            for &(m, g1) in &linear {
                let lin = match m {
                    Some(m) => p.pow(m as u32) * g1,
                    None => 0,
                };
                for g2 in -5i64..=5 {
                    // degree 2: gcd(p, g2) = 1 forces g2 != 0 too
                    if g2 != 0 && g2.unsigned_abs().gcd(&p.unsigned_abs()) == 1 {
                        out.push(GridCase {
                            f: poly(&[p.pow(n as u32), lin, g2]),
                            p: p as u64,
                            n,
                            m,
                        });
                    }
                    // degree 3: gcd(p, g2, g3) = 1, g3 != 0
                    for g3 in -5i64..=5 {
                        if g3 == 0 {
                            continue;
                        }
                        let tail_gcd = g2.unsigned_abs().gcd(&g3.unsigned_abs());
                        if tail_gcd.gcd(&p.unsigned_abs()) != 1 {
                            continue;
                        }
                        out.push(GridCase {
                            f: poly(&[p.pow(n as u32), lin, g2, g3]),
                            p: p as u64,
                            n,
                            m,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Independent oracle: does `f` have a root of positive valuation in `Z_p`?
/// Level-by-level enumeration on the squarefree part `g`, starting from the
/// residue 0 mod p and extending one digit at a time. A branch surviving to
/// depth `2 v_p(res(g, g')) + 2` certifies a genuine root; a genuine root
/// survives every depth.
fn positive_valuation_root_exists(f: &IntPoly, p: &Prime) -> bool {
    let g = f.squarefree_part().expect("nonzero input");
    let res = g.resultant(&g.derivative());
    assert!(!res.is_zero(), "squarefree part must be separable");
    let tau = vp(&res, p).unwrap();
    let depth = 2 * tau + 2;
    let mut survivors = vec![BigInt::zero()];
    let mut modulus = p.value().clone();
    if !g.eval_mod(&BigInt::zero(), &modulus).is_zero() {
        return false;
    }
    for _ in 2..=depth {
        let next_mod = &modulus * p.value();
        let mut next = Vec::new();
        for r in &survivors {
            let mut t = BigInt::zero();
            while &t < p.value() {
                let cand = r + &t * &modulus;
                if g.eval_mod(&cand, &next_mod).is_zero() {
                    next.push(cand);
                }
                t += 1;
            }
        }
        if next.is_empty() {
            return false;
        }
        survivors = next;
        modulus = next_mod;
    }
    true
}

#[test]
fn criterion_3_degree_le_3_equivalence() {
    let cases = small_grid();
    let failures: Vec<String> = map_batch(&cases, None, |case| {
        let c = classify(&case.f).unwrap();
        if !matches!(c.verdict, Verdict::Reducible | Verdict::Irreducible) {
            return Some(format!("{}: undecided verdict {:?}", case.f, c.verdict));
        }
        let p = prime(case.p);
        let oracle = positive_valuation_root_exists(&case.f, &p);
        if (c.verdict == Verdict::Reducible) != oracle {
            return Some(format!(
                "{}: classify says {:?} ({:?}), oracle root-exists = {oracle}",
                case.f, c.verdict, c.rule
            ));
        }
        None
    })
    .into_iter()
    .flatten()
    .collect();
    assert!(
        failures.is_empty(),
        "{} grid mismatches; first: {}",
        failures.len(),
        failures[0]
    );
    println!(
        "criterion 3 (degree <= 3 verdict matches p-adic root oracle, {} grid cases): PASS",
        cases.len()
    );
}

// ---------------------------------------------------------------------------
// Criterion 4: the n > 2m construction on the same grid.
// ---------------------------------------------------------------------------

#[test]
fn criterion_4_n_gt_2m_construction() {
    let cases: Vec<GridCase> = small_grid()
        .into_iter()
        .filter(|c| matches!(c.m, Some(m) if c.n > 2 * m))
        .collect();
    assert!(!cases.is_empty());
    let failures: Vec<String> = map_batch(&cases, None, |case| {
        let form = form_of(&case.f);
        let p = prime(case.p);
        let m = case.m.unwrap();
        let (a, b) = match factor_n_gt_2m(&form, ORDER) {
            Ok(pair) => pair,
            Err(e) => return Some(format!("{}: {e}", case.f)),
        };
        if a.constant_term() != &p.pow(m) || b.constant_term() != &p.pow(case.n - m) {
            return Some(format!(
                "{}: constant terms {} / {}",
                case.f,
                a.constant_term(),
                b.constant_term()
            ));
        }
        let ok = a
            .mul(&b)
            .equal_mod(&TruncatedSeries::from_poly(&case.f, ORDER), ORDER);
        (!ok).then(|| format!("{}: product mismatch", case.f))
    })
    .into_iter()
    .flatten()
    .collect();
    assert!(
        failures.is_empty(),
        "{} failures; first: {}",
        failures.len(),
        failures[0]
    );
    println!(
        "criterion 4 (n > 2m construction re-multiplies, A0 = p^m, B0 = p^(n-m), {} cases): PASS",
        cases.len()
    );
}

// ---------------------------------------------------------------------------
// Criterion 5: simple-root divisibility ledger + the hand-traced case.
// ---------------------------------------------------------------------------

#[test]
fn criterion_5_divisibility_ledger_and_hand_trace() {
    // The ledger (p^((d-2)l+theta) | a_(d+j), p^((d-2)l+2theta) | t_(d+j),
    // p^theta | s_(d+1+j)) is enforced inside the construction: any
    // violation surfaces as a hard error, so a returned certificate proves
    // every assertion held. Exercise it across the sweep's simple-root
    // cases.
    let mut simple_cases = 0usize;
    for f in reducible_inputs() {
        let c = classify(&f).unwrap();
        if c.rule != Rule::SimplePAdicRoot {
            continue;
        }
        let cert = certificate(&f);
        assert!(verify_certificate(&cert), "{f}");
        assert_eq!(cert.rule, Rule::SimplePAdicRoot);
        simple_cases += 1;
    }
    assert!(simple_cases >= 50, "only {simple_cases} simple-root cases");

    // Hand-traced terminating case: with the explicit root -2, the
    // construction reproduces (2 + x)(2 + x + x^2) exactly, all later
    // coefficients zero.
    let f = poly(&[4, 4, 3, 1]);
    let form = form_of(&f);
    let p2 = prime(2);
    let roots = roots_in_zp(&f, &p2, 8).unwrap();
    let root = roots
        .iter()
        .find(|r| ((&r.residue + BigInt::from(2)) % BigInt::from(16)).is_zero())
        .expect("the root -2 of the linear factor");
    let cert = factor_simple_root(&form, root, 8).unwrap();
    let expect_a = TruncatedSeries::from_i64(&[2, 1, 0, 0, 0, 0, 0, 0]);
    let expect_b = TruncatedSeries::from_i64(&[2, 1, 1, 0, 0, 0, 0, 0]);
    assert!(cert.a.equal_mod(&expect_a, 8), "A = {}", cert.a);
    assert!(cert.b.equal_mod(&expect_b, 8), "B = {}", cert.b);
    println!(
        "criterion 5 (divisibility ledger on {simple_cases} simple-root cases + hand trace): PASS"
    );
}

// ---------------------------------------------------------------------------
// Criterion 6: tower identity g_(k+1)' = -(g_k + x g_k').
// ---------------------------------------------------------------------------

#[test]
fn criterion_6_tower_identity() {
    let mut towers = 0usize;
    let x = IntPoly::x_pow(1);
    for case in small_grid() {
        if case.f.degree() != Some(3) {
            continue;
        }
        let form = form_of(&case.f);
        let max_ell = form.m.unwrap_or(u64::MAX).min(form.n / 2);
        for ell in 1..=max_ell {
            let tower = ReversalTower::build(&form, ell).unwrap();
            for k in 2..tower.degree() {
                let gk = tower.level(k);
                let lhs = tower.level(k + 1).derivative();
                let rhs = -&(gk + &(&x * &gk.derivative()));
                assert_eq!(lhs, rhs, "tower identity fails for {} at ell={ell}", case.f);
            }
            towers += 1;
        }
    }
    assert!(towers >= 100, "only {towers} towers built");
    println!("criterion 6 (g_(k+1)' = -(g_k + x g_k') on {towers} towers, exact): PASS");
}

// ---------------------------------------------------------------------------
// Criterion 7: normalization and root recovery round-trip.
// ---------------------------------------------------------------------------

#[test]
fn criterion_7_normalize_and_recover_root() {
    let mut checked = 0usize;
    for f in reducible_inputs() {
        if !matches!(f.degree(), Some(2) | Some(3)) {
            continue;
        }
        let c = classify(&f).unwrap();
        if !matches!(c.rule, Rule::SimplePAdicRoot | Rule::MultipleRootGcd) {
            continue;
        }
        let form = form_of(&f);
        let p = form.prime.clone();
        // Normalization / root-recovery hypotheses: n <= 2m and
        // gcd(p, g2, g3) = 1.
        if let Some(m) = form.m {
            if form.n > 2 * m {
                continue;
            }
        }
        let tail = form.gamma(2).gcd(&form.gamma(3));
        if !tail.gcd(p.value()).is_one() {
            continue;
        }
        let cert = certificate(&f);
        let (a0, b0) = (cert.a.constant_term(), cert.b.constant_term());
        let (la, lb) = (vp(a0, &p).unwrap(), vp(b0, &p).unwrap());
        if a0 != &p.pow(la) || b0 != &p.pow(lb) {
            continue; // not of the p-power shape normalization manipulates
        }
        let a1_coprime = cert.a.coeff(1).gcd(p.value()).is_one();
        let b1_coprime = cert.b.coeff(1).gcd(p.value()).is_one();
        if !a1_coprime && !(la == lb && b1_coprime) {
            continue;
        }

        // Normalize away a_2 ... a_6 and keep the product.
        let (a2, b2) = normalize_factorization(&cert.a, &cert.b, 6)
            .unwrap_or_else(|e| panic!("normalize({f}): {e}"));
        for i in 2..=6 {
            assert!(a2.coeff(i).is_zero(), "{f}: a_{i} = {} after normalize", a2.coeff(i));
        }
        assert!(
            a2.mul(&b2).equal_mod(&cert.a.mul(&cert.b), ORDER),
            "{f}: normalization changed the product"
        );

        // Recover the root and check it against f directly.
        let ell = if a1_coprime { la } else { lb };
        let rho = recover_root_from_factorization(&cert, 6)
            .unwrap_or_else(|e| panic!("recover({f}): {e}"));
        assert!(
            f.eval_mod(&rho, &p.pow(6)).is_zero(),
            "{f}: f(rho) != 0 mod {}^6",
            p
        );
        assert_eq!(vp(&rho, &p).unwrap(), ell, "{f}: wrong valuation for rho = {rho}");
        checked += 1;
    }
    assert!(checked >= 50, "only {checked} certificates qualified");
    println!(
        "criterion 7 (normalize to k=6 and recover the root, {checked} degree <= 3 certificates): PASS"
    );
}

// ---------------------------------------------------------------------------
// Criterion 8: root search agrees with exhaustive enumeration.
// ---------------------------------------------------------------------------

struct RootCase {
    f: IntPoly,
    p: u64,
    k: u64,
}

/// Independent oracle: the residues mod p^k that extend to approximate
/// roots at depth `k + 2 v_p(res(g, g')) + 1`, computed by plain
/// level-by-level enumeration over the squarefree part `g`. At that depth a
/// surviving branch always shadows a genuine root agreeing with it mod p^k.
fn enumerated_root_residues(f: &IntPoly, p: &Prime, k: u64) -> BTreeSet<BigInt> {
    let g = f.squarefree_part().expect("nonzero input");
    if g.degree().unwrap_or(0) == 0 {
        return BTreeSet::new();
    }
    let tau = vp(&g.resultant(&g.derivative()), p).unwrap();
    let depth = k + 2 * tau + 1;
    let mut level = vec![BigInt::zero()];
    let mut modulus = BigInt::one();
    for _ in 0..depth {
        let next_mod = &modulus * p.value();
        let mut next = Vec::new();
        for r in &level {
            let mut t = BigInt::zero();
            while &t < p.value() {
                let cand = r + &t * &modulus;
                if g.eval_mod(&cand, &next_mod).is_zero() {
                    next.push(cand);
                }
                t += 1;
            }
        }
        level = next;
        modulus = next_mod;
        if level.is_empty() {
            return BTreeSet::new();
        }
    }
    let pk = p.pow(k);
    level.into_iter().map(|r| r.mod_floor(&pk)).collect()
}

#[test]
fn criterion_8_padic_oracle_agreement() {
    let mut cases = Vec::new();
    // Exhaustive sub-box of the degree <= 3, coefficients in [-9, 9] grid.
    for c0 in -3i64..=3 {
        for c1 in -3i64..=3 {
            for c2 in -3i64..=3 {
                for c3 in -3i64..=3 {
                    if (c0, c1, c2, c3) == (0, 0, 0, 0) {
                        continue;
                    }
                    for p in [2u64, 3, 5] {
                        for k in [1u64, 3, 6] {
                            cases.push(RootCase {
                                f: poly(&[c0, c1, c2, c3]),
                                p,
                                k,
                            });
                        }
                    }
                }
            }
        }
    }
    // Seeded sample of the rest of the box.
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let target = cases.len() + 2_000;
    while cases.len() < target {
        let coeffs: Vec<i64> = (0..4).map(|_| rng.gen_range(-9i64..=9)).collect();
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        cases.push(RootCase {
            f: poly(&coeffs),
            p: [2u64, 3, 5][rng.gen_range(0usize..3)],
            k: rng.gen_range(1u64..=6),
        });
    }

    let failures: Vec<String> = map_batch(&cases, None, |case| {
        let p = prime(case.p);
        let pk = p.pow(case.k);
        let got: BTreeSet<BigInt> = roots_in_zp(&case.f, &p, case.k)
            .unwrap_or_else(|e| panic!("roots_in_zp({}, {}, {}): {e}", case.f, case.p, case.k))
            .into_iter()
            .map(|r| r.residue.mod_floor(&pk))
            .collect();
        let want = enumerated_root_residues(&case.f, &p, case.k);
        (got != want).then(|| {
            format!(
                "f = {}, p = {}, k = {}: search {got:?} vs enumeration {want:?}",
                case.f, case.p, case.k
            )
        })
    })
    .into_iter()
    .flatten()
    .collect();
    assert!(
        failures.is_empty(),
        "{} disagreements; first: {}",
        failures.len(),
        failures[0]
    );
    println!(
        "criterion 8 (root search vs exhaustive enumeration, {} cases): PASS",
        cases.len()
    );
}

// ---------------------------------------------------------------------------
// Criterion 9: CLI contract.
// ---------------------------------------------------------------------------

#[test]
fn criterion_9_cli_contract() {
    let corpus = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/golden.txt");
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_zxx"))
        .args(["corpus", corpus])
        .output()
        .expect("run the corpus subcommand");
    assert!(
        out.status.success(),
        "corpus run failed\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );

    // parse -> render -> parse is the identity on every corpus entry.
    let text = std::fs::read_to_string(corpus).unwrap();
    let mut entries = 0usize;
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let source = line.split(';').next().unwrap().trim();
        let f = zxx::parse::parse_poly(source).unwrap();
        let again = zxx::parse::parse_poly(&f.to_string()).unwrap();
        assert_eq!(f, again, "round trip changed {source:?}");
        entries += 1;
    }
    assert!(entries >= 20);

    // JSON outputs are well-formed, with integers as decimal strings.
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_zxx"))
        .args(["factor", "6 + x + x^2", "--terms", "8", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert!(v["A"].as_array().unwrap().iter().all(|c| c.is_string()));
    assert!(v["B"].as_array().unwrap().iter().all(|c| c.is_string()));
    println!("criterion 9 (CLI corpus exit 0, parse/render round trip, JSON shape): PASS");
}
