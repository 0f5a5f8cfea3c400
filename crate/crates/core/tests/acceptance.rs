//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use t3dt::complexes::{self, build_t3_complex, cohomology_ranks, torsion, torsion_with_choices, BlockSelector};
use t3dt::exact::{ExactMatrix, GaussianRational, GradedSeries, Rational};
use t3dt::exp_map::{check_stabiliser_preservation, is_etale, random_eigen_list, LieEigenvalue};
use t3dt::group_data::{centre_structure, levi_descriptor, partitions_of, GroupKind, Partition};
use t3dt::integrality::{bps_poincare, bps_rank, langlands_check, verify_integrality};
use t3dt::moduli::{
    eta2_fiber_size, is_bad_point, sample, sl_pgl_fiber, theta_fiber, twisted_normal_form, twisted_orbit_size,
    witness_is_valid, PointKind, SymPoint, TorusElem,
};
use t3dt::molien::{
    character_inner_product, character_of_degree, graded_invariants, molien_bruteforce, ParityConvention,
};

const WINDOW: (i64, i64) = (-12, 30);
const SEED: u64 = 20240917;

type Outcome = Result<String, String>;

/// (id, name, time limit in seconds, check)
type Criterion = (u32, &'static str, Option<u64>, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_gl_integrality() -> Outcome {
    integrality(GroupKind::Gl)
}

fn c2_additive_integrality() -> Outcome {
    integrality(GroupKind::GlAdditive)
}

fn integrality(kind: GroupKind) -> Outcome {
    for parity in ParityConvention::BOTH {
        let rep = verify_integrality(kind, 6, WINDOW, parity).map_err(|e| e.to_string())?;
        for r in &rep.results {
            ensure(r.equal, || format!("{kind} n={} {parity:?}: {} vs {}", r.n, r.levi_sum, r.pe_coeff))?;
        }
    }
    Ok(format!("{kind}, n<=6, window {WINDOW:?}, both parities"))
}

fn c3_langlands() -> Outcome {
    for n in [2, 3, 5, 7] {
        for parity in ParityConvention::BOTH {
            let rep = langlands_check(n, WINDOW, parity).map_err(|e| e.to_string())?;
            ensure(rep.equal, || format!("n={n} {parity:?}: sl {} vs pgl {}", rep.sl, rep.pgl_twisted))?;
            ensure(rep.twisted_difference_ok, || format!("n={n} {parity:?}: difference is not (n^3-1) t^0"))?;
        }
    }
    Ok("n in {2,3,5,7}, both parities".into())
}

fn c4_bps_anchors() -> Outcome {
    let sl2 = bps_poincare(GroupKind::Sl, 2).map_err(|e| e.to_string())?;
    ensure(sl2.coefficient_sum() == Rational::from(8), || format!("SL_2 BPS total {}", sl2.coefficient_sum()))?;
    for n in [2, 3, 5, 7] {
        let p = bps_poincare(GroupKind::Pgl, n).map_err(|e| e.to_string())?;
        ensure(p == GradedSeries::one(), || format!("PGL_{n} BPS = {p}"))?;
    }
    // Künneth: H(T^3) = (1+t)^3 placed in degrees -3..0
    let kunneth: Vec<Rational> = (0..=3).map(|k| Rational::from([1, 3, 3, 1][k])).collect();
    let binom: Vec<i64> = (0..=3).map(|k| (0..k).fold(1, |acc, i| acc * (3 - i) / (i + 1))).collect();
    ensure(binom == [1, 3, 3, 1], || "binomial oracle".into())?;
    for n in 1..=6 {
        let p = bps_poincare(GroupKind::Gl, n).map_err(|e| e.to_string())?;
        let c = p.coeffs_between(-3, 0).map_err(|e| e.to_string())?;
        ensure(c == kunneth && p.coeffs_between(-6, 3).unwrap().iter().filter(|x| !x.is_zero()).count() == 4, || {
            format!("GL_{n} BPS = {p}")
        })?;
    }
    Ok("SL_2 total 8, PGL = 1, GL = (1,3,3,1) on [-3,0]".into())
}

fn c5_torsion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut count = 0;
    for n in 2..=5 {
        let levis: Vec<Partition> = partitions_of(n).into_iter().filter(|l| l.len() > 1).collect();
        for lam in &levis {
            for _ in 0..4 {
                let triple = complexes::random::off_block_triple(lam, &mut rng);
                let c = build_t3_complex(&triple);
                let t = torsion(&c, None).map_err(|e| format!("n={n} {lam}: {e}"))?;
                ensure(t == GaussianRational::one(), || format!("n={n} {lam}: torsion {t}"))?;
                count += 1;
            }
        }
    }
    ensure(count >= 50, || format!("only {count} triples"))?;
    for trial in 0..100 {
        let len = rng.gen_range(1..=3);
        // dims C_k = r_k + r_{k+1} <= 6
        let ranks: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=3)).collect();
        let zeros = vec![0; len + 1];
        let (c, _) = complexes::random::complex(&ranks, &zeros, &mut rng);
        let base = torsion(&c, None).map_err(|e| e.to_string())?;
        let alt = complexes::random::alternative_choices(&c, &mut rng);
        let other = torsion_with_choices(&c, None, &alt).map_err(|e| e.to_string())?;
        ensure(base == other, || format!("trial {trial}: {base} vs {other} for dims {:?}", c.dims()))?;
    }
    Ok(format!("{count} u_± complexes with torsion 1; 100 b-choice trials"))
}

fn euler_ok(c: &complexes::BasedComplex) -> bool {
    let chi: i64 =
        cohomology_ranks(c).iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
    chi == c.euler_characteristic()
}

fn c6_complex_ranks() -> Outcome {
    for n in 1..=3 {
        let triv =
            complexes::adjoint_operator(&ExactMatrix::identity(n), &BlockSelector::Full).map_err(|e| e.to_string())?;
        let c = build_t3_complex(&complexes::OperatorTriple::new(triv.clone(), triv.clone(), triv).unwrap());
        let want: Vec<usize> = [1, 3, 3, 1].iter().map(|k| k * n * n).collect();
        ensure(cohomology_ranks(&c) == want, || format!("gl_{n}: {:?}", cohomology_ranks(&c)))?;
        ensure(euler_ok(&c), || "euler".into())?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    for i in 0..100 {
        let triple = complexes::random::commuting_triple(rng.gen_range(1..=3), &mut rng);
        let c = build_t3_complex(&triple);
        ensure((c.d(1) * c.d(2)).is_zero() && (c.d(2) * c.d(3)).is_zero(), || format!("triple {i}: d∘d ≠ 0"))?;
        ensure(euler_ok(&c), || format!("triple {i}: Euler characteristic"))?;
    }
    Ok("gl_1..gl_3 trivial monodromy; 100 commuting triples".into())
}

/// Orbit of a unit-circle SL point under `μ_n^3`, by direct enumeration of
/// sorted argument lists.
fn orbit_by_hand(args: &[[Rational; 3]], n: i64) -> usize {
    let mut seen = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let shift = [Rational::new(a, n), Rational::new(b, n), Rational::new(c, n)];
                let mut pts: Vec<Vec<Rational>> =
                    args.iter().map(|t| (0..3).map(|i| (&t[i] + &shift[i]).fract_positive()).collect()).collect();
                pts.sort();
                seen.insert(pts);
            }
        }
    }
    seen.len()
}

fn c7_cover_degrees() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    for n in 1..=5 {
        for lam in partitions_of(n) {
            for _ in 0..30 {
                let p = sample::stratum_point(&lam, &mut rng);
                let fiber = theta_fiber(&p, &lam).map_err(|e| e.to_string())?;
                let w = levi_descriptor(GroupKind::Gl, &lam).weyl_order;
                let distinct: BTreeSet<_> = fiber.iter().collect();
                ensure(fiber.len() as u64 == w && distinct.len() == fiber.len(), || {
                    format!("{lam}: fiber {} vs |W| {w}", fiber.len())
                })?;
            }
        }
    }
    for n in [2u64, 3, 5] {
        for _ in 0..10 {
            let p = sample::good_sl_point(n, &mut rng);
            let f = sl_pgl_fiber(&p, n).map_err(|e| e.to_string())?;
            ensure(f as u64 == n * n * n, || format!("SL_{n} good point fiber {f}"))?;
        }
    }
    let i = TorusElem::root_of_unity(1, 4);
    let bad = SymPoint::new(
        PointKind::Sl,
        vec![[TorusElem::one(), TorusElem::one(), i.clone()], [TorusElem::one(), TorusElem::one(), i.inv()]],
    )
    .map_err(|e| e.to_string())?;
    ensure(is_bad_point(&bad, 2) == Ok(true), || "(I,I,diag(i,-i)) not flagged bad".into())?;
    let f = sl_pgl_fiber(&bad, 2).map_err(|e| e.to_string())?;
    let z = Rational::zero;
    let hand = orbit_by_hand(&[[z(), z(), Rational::new(1, 4)], [z(), z(), Rational::new(3, 4)]], 2);
    ensure(f == 4 && hand == 4 && f < 8, || format!("bad point fiber {f}, enumeration {hand}"))?;
    for _ in 0..10 {
        let q = sample::gl_point(2, &mut rng);
        let e = eta2_fiber_size(&q, 2).map_err(|e| e.to_string())?;
        ensure(e == 8, || format!("eta2 fiber {e}"))?;
    }
    let square = SymPoint::new(
        PointKind::Gl,
        vec![
            [TorusElem::from_parts((2, 1), (1, 3)), TorusElem::one(), TorusElem::from_parts((1, 3), (0, 1))],
            [
                TorusElem::from_parts((2, 1), (0, 1)),
                TorusElem::from_parts((4, 1), (1, 2)),
                TorusElem::from_parts((3, 1), (0, 1)),
            ],
        ],
    )
    .map_err(|e| e.to_string())?;
    ensure(eta2_fiber_size(&square, 2) == Ok(8), || "eta2 on rational-root point".into())?;
    Ok("theta fibers = |W| (n<=5, 30/λ); SL->PGL n^3 and 4 at the bad point; eta2 = 8".into())
}

fn c8_centres() -> Outcome {
    let mut checked = 0;
    for n in 1..=10 {
        for lam in partitions_of(n) {
            let direct = lam.parts().iter().fold(0u64, |g, &p| num_gcd(g, p as u64));
            let got = centre_structure(GroupKind::Sl, &lam).map_err(|e| e.to_string())?;
            ensure(got == (lam.len() - 1, direct), || format!("{lam}: {got:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} partitions of n<=10"))
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

fn c9_molien() -> Outcome {
    let mut checked = 0;
    for n in 1..=7 {
        for lam in partitions_of(n) {
            if levi_descriptor(GroupKind::Gl, &lam).weyl_order > 120 {
                continue;
            }
            for kind in [GroupKind::Gl, GroupKind::Sl, GroupKind::Pgl, GroupKind::GlAdditive] {
                if kind == GroupKind::Pgl && !t3dt::integrality::is_prime(n as u64) {
                    continue;
                }
                for parity in ParityConvention::BOTH {
                    let levi = levi_descriptor(kind, &lam);
                    let top = t3dt::molien::default_window(&levi).0 + 24;
                    let fast = graded_invariants(&levi, parity, top).map_err(|e| e.to_string())?;
                    let slow = molien_bruteforce(kind, &lam, parity, top).map_err(|e| e.to_string())?;
                    let lo = fast.min_deg().min(slow.min_deg());
                    ensure(fast.agrees_on(&slow, lo, top) == Ok(true), || {
                        format!("{kind} {lam} {parity:?}: {fast} vs {slow}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (kind, λ, parity) cases with |W| <= 120, n <= 7"))
}

fn c10_gl2_content() -> Outcome {
    let lam = Partition::ones(2);
    let triv = [1, 1];
    let sign = [1, -1];
    // perm = triv ⊕ sign for S_2
    let expected = [(2, (1, 0)), (4, (1, 1)), (6, (2, 1))];
    for (d, (m_triv, m_sign)) in expected {
        let chi: Vec<i64> = character_of_degree(&lam, d).map_err(|e| e.to_string())?.iter().map(|c| c.value).collect();
        let a = character_inner_product(&lam, &chi, &triv).map_err(|e| e.to_string())?;
        let b = character_inner_product(&lam, &chi, &sign).map_err(|e| e.to_string())?;
        ensure(a == Rational::from(m_triv) && b == Rational::from(m_sign), || {
            format!("d={d}: character {chi:?} gives triv {a}, sign {b}")
        })?;
    }
    Ok("d=2: triv; d=4: perm; d=6: perm ⊕ triv".into())
}

fn c11_binomial() -> Outcome {
    for l in 1..=8u64 {
        // monomials of degree k in l variables, by dynamic programming
        let mut dp = [1u64; 21];
        for _ in 1..l {
            for k in 1..=20 {
                dp[k] += dp[k - 1];
            }
        }
        for k in 0..=20u64 {
            let r = bps_rank(l, k).map_err(|e| e.to_string())?;
            ensure(r == dp[k as usize], || format!("l={l} k={k}: {r} vs {}", dp[k as usize]))?;
        }
    }
    Ok("l <= 8, k <= 20".into())
}

fn c12_exp_map() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 12);
    let mut etale = 0;
    let mut lists = 0;
    while etale < 200 {
        let e = random_eigen_list(rng.gen_range(1..=6), &mut rng);
        lists += 1;
        if is_etale(&e) {
            ensure(check_stabiliser_preservation(&e), || format!("counterexample {e:?}"))?;
            etale += 1;
        }
    }
    let bad = [LieEigenvalue::imaginary(Rational::zero()), LieEigenvalue::imaginary(Rational::one())];
    ensure(!is_etale(&bad) && !check_stabiliser_preservation(&bad), || "[0, 2πi] not detected".into())?;
    Ok(format!("200 étale lists out of {lists} draws; [0, 2πi] rejected"))
}

fn c13_twisted() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 13);
    for _ in 0..100 {
        let n = rng.gen_range(2..=9u64);
        let v = [rng.gen_range(-40..=40), rng.gen_range(-40..=40), rng.gen_range(-40..=40)];
        let f = twisted_normal_form(v, n).map_err(|e| e.to_string())?;
        ensure(witness_is_valid(&f), || format!("{v:?} mod {n}"))?;
    }
    for n in [2u64, 3] {
        let size = twisted_orbit_size(n);
        ensure(size as u64 == n * n * n - 1, || format!("orbit mod {n} has {size} classes"))?;
    }
    Ok("100 witnesses valid; one orbit mod 2 and mod 3".into())
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        (1, "GL integrality", Some(60), c1_gl_integrality),
        (2, "additive integrality", Some(30), c2_additive_integrality),
        (3, "Langlands duality", Some(60), c3_langlands),
        (4, "BPS anchors", Some(1), c4_bps_anchors),
        (5, "orientation and torsion", Some(30), c5_torsion),
        (6, "complex ranks", Some(10), c6_complex_ranks),
        (7, "cover degrees", Some(30), c7_cover_degrees),
        (8, "centre structures", Some(1), c8_centres),
        (9, "Molien oracle", Some(30), c9_molien),
        (10, "GL_2 representation content", Some(1), c10_gl2_content),
        (11, "binomial rank lemma", Some(1), c11_binomial),
        (12, "exponential map", Some(1), c12_exp_map),
        (13, "twisted normal forms", Some(10), c13_twisted),
    ];
    let mut failures = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let limit = limit.map(Duration::from_secs);
        let late = limit.is_some_and(|l| elapsed > l);
        let limit_str = limit.map_or("none".to_string(), |l| format!("{}s", l.as_secs()));
        let (status, detail) = match (&outcome, late) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("over time limit; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("criterion {id:>2} {status} {name} [{:.2}s, limit {limit_str}] {detail}", elapsed.as_secs_f64());
    }
    println!("{} of 13 criteria passed", 13 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
