//! BPS series, Levi contributions, DT cohomology series and the two
//! integrality checks (plethystic side against Levi side; SL against PGL).

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::Error;
use crate::exact::{BivariateSeries, GradedSeries, Rational};
use crate::group_data::{levi_descriptor, partitions_of, GroupKind, Partition};
use crate::moduli::twisted_component_data;
use crate::molien::graded_invariants;

pub use crate::molien::ParityConvention;

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Poincaré polynomial of the BPS cohomology.
pub fn bps_poincare(kind: GroupKind, n: usize) -> Result<GradedSeries, Error> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    Ok(match kind {
        GroupKind::Gl => GradedSeries::polynomial_i64(-3, &[1, 3, 3, 1]),
        GroupKind::GlAdditive => GradedSeries::polynomial_i64(-3, &[1]),
        GroupKind::Sl => GradedSeries::constant(Rational::from((n * n * n) as i64)),
        GroupKind::Pgl => {
            if !is_prime(n as u64) {
                return Err(Error::Domain(format!("pgl is only supported for prime n, got {n}")));
            }
            GradedSeries::constant(Rational::one())
        }
    })
}

/// `BPS ⊗ H•(BG_m)[-1]`, known through `max_deg`.
pub fn block_series(kind: GroupKind, n: usize, max_deg: i64) -> Result<GradedSeries, Error> {
    let bps = bps_poincare(kind, n)?;
    let lo = bps.order().unwrap_or(0) + 1;
    let h_bgm = GradedSeries::geometric(&Rational::one(), 2, max_deg - lo);
    Ok(bps.mul(&h_bgm).shift(1))
}

pub fn levi_contribution(
    kind: GroupKind,
    n: usize,
    partition: &Partition,
    parity: ParityConvention,
    max_deg: i64,
) -> Result<GradedSeries, Error> {
    if partition.n() != n {
        return Err(Error::Domain(format!("{partition} is not a partition of {n}")));
    }
    graded_invariants(&levi_descriptor(kind, partition), parity, max_deg)
}

fn sum_series(parts: impl IntoIterator<Item = GradedSeries>) -> GradedSeries {
    parts.into_iter().fold(GradedSeries::zero(), |acc, s| acc.add(&s))
}

/// Sum of the Levi contributions over all partitions of `n`, plus the
/// twisted PGL components when requested.
pub fn dt_cohomology(
    kind: GroupKind,
    n: usize,
    parity: ParityConvention,
    max_deg: i64,
    include_twisted: bool,
) -> Result<GradedSeries, Error> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if kind == GroupKind::Pgl && !is_prime(n as u64) {
        return Err(Error::Domain(format!("pgl is only supported for prime n, got {n}")));
    }
    if include_twisted && kind != GroupKind::Pgl {
        return Err(Error::Domain("twisted components exist only for pgl".into()));
    }
    let mut total = sum_series(
        partitions_of(n)
            .iter()
            .map(|lam| levi_contribution(kind, n, lam, parity, max_deg))
            .collect::<Result<Vec<_>, _>>()?,
    );
    if include_twisted {
        let (_, contribution) = twisted_component_data(n as u64)?;
        total = total.add(&contribution);
    }
    Ok(total)
}

/// Binomial-type coefficient of `x^j` in `(1 - y)^{-a}` (even) or `(1 + y)^a` (odd).
fn pe_coefficients(a: &BigInt, odd: bool, jmax: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(1)];
    for j in 1..=jmax {
        let prev = out[j - 1].clone();
        let num = if odd { a - BigInt::from(j - 1) } else { a + BigInt::from(j - 1) };
        out.push(prev * num / BigInt::from(j));
    }
    out
}

/// `∏_{n,k} (1 - x^n t^k)^{-a_{n,k}}` (even `k`) times `(1 + x^n t^k)^{a_{n,k}}`
/// (odd `k`), truncated at `x^max_n`. `blocks[n-1]` holds `Σ_k a_{n,k} t^k`
/// and missing blocks count as exactly zero. The unknown tail of each block
/// is carried as an explicit `O(t^·)` factor, so every coefficient of the
/// result is known on its reported window.
pub fn plethystic_exponential(
    blocks: &[GradedSeries],
    max_n: usize,
    parity: ParityConvention,
) -> Result<BivariateSeries, Error> {
    let mut pe = BivariateSeries::one(max_n);
    for (idx, block) in blocks.iter().take(max_n).enumerate() {
        let n = idx + 1;
        let jmax = max_n / n;
        for (k, a) in block.terms() {
            if a.is_zero() {
                continue;
            }
            if a.is_negative() || !a.is_integer() {
                return Err(Error::Domain(format!("block {n} has coefficient {a} at degree {k}")));
            }
            let odd = match parity {
                ParityConvention::Shifted => k.rem_euclid(2) == 1,
                ParityConvention::Unshifted => (k + 3).rem_euclid(2) == 1,
            };
            let coeffs = pe_coefficients(a.numer(), odd, jmax);
            let mut comps = vec![GradedSeries::zero(); max_n + 1];
            for (j, c) in coeffs.iter().enumerate() {
                comps[j * n] = GradedSeries::monomial(Rational::from(c.clone()), k * j as i64);
            }
            pe = pe.mul(&BivariateSeries::from_components(comps));
        }
        if let Some(m) = block.max_deg() {
            // unknown tail: terms of degree > m contribute from t^{j(m+1)} on
            let mut comps = vec![GradedSeries::zero(); max_n + 1];
            comps[0] = GradedSeries::one();
            for j in 1..=jmax {
                comps[j * n] = GradedSeries::big_o(j as i64 * (m + 1));
            }
            pe = pe.mul(&BivariateSeries::from_components(comps));
        }
    }
    Ok(pe)
}

#[derive(Clone, Debug, Serialize)]
pub struct Window {
    pub min: i64,
    pub max: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralityResult {
    pub n: usize,
    pub levi_sum: GradedSeries,
    pub pe_coeff: GradedSeries,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralityReport {
    pub kind: GroupKind,
    pub parity: ParityConvention,
    pub max_n: usize,
    pub window: Window,
    pub results: Vec<IntegralityResult>,
}

impl IntegralityReport {
    pub fn all_equal(&self) -> bool {
        self.results.iter().all(|r| r.equal)
    }
}

/// Compares `[x^n]` of the plethystic exponential of the blocks with the
/// Levi sum for every `n <= max_n`, exactly on `window`.
pub fn verify_integrality(
    kind: GroupKind,
    max_n: usize,
    window: (i64, i64),
    parity: ParityConvention,
) -> Result<IntegralityReport, Error> {
    if !matches!(kind, GroupKind::Gl | GroupKind::GlAdditive) {
        return Err(Error::Domain(format!("{kind} has no symmetric-algebra side")));
    }
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::Domain("empty window".into()));
    }
    // x^n collects n blocks, each starting at t^-2
    let block_top = hi + 2 * (max_n as i64 - 1).max(0);
    let blocks = (1..=max_n).map(|n| block_series(kind, n, block_top)).collect::<Result<Vec<_>, _>>()?;
    let pe = plethystic_exponential(&blocks, max_n, parity)?;
    let mut results = Vec::new();
    for n in 1..=max_n {
        let levi_sum = dt_cohomology(kind, n, parity, hi, false)?.truncated(hi);
        let pe_coeff = pe.x_coeff(n)?.truncated(hi);
        let from = lo.min(levi_sum.min_deg()).min(pe_coeff.min_deg());
        let equal = levi_sum.agrees_on(&pe_coeff, from, hi)?;
        results.push(IntegralityResult { n, levi_sum, pe_coeff, equal });
    }
    Ok(IntegralityReport { kind, parity, max_n, window: Window { min: lo, max: hi }, results })
}

#[derive(Clone, Debug, Serialize)]
pub struct LanglandsReport {
    pub n: usize,
    pub parity: ParityConvention,
    pub window: Window,
    pub sl: GradedSeries,
    pub pgl_twisted: GradedSeries,
    pub pgl_untwisted: GradedSeries,
    /// `sl = pgl_twisted` on the window.
    pub equal: bool,
    /// `sl - pgl_untwisted = (n³ - 1)·t⁰` on the window.
    pub twisted_difference_ok: bool,
}

pub fn langlands_check(n: usize, window: (i64, i64), parity: ParityConvention) -> Result<LanglandsReport, Error> {
    if !is_prime(n as u64) {
        return Err(Error::Domain(format!("{n} is not prime")));
    }
    let (lo, hi) = window;
    let sl = dt_cohomology(GroupKind::Sl, n, parity, hi, false)?.truncated(hi);
    let pgl_twisted = dt_cohomology(GroupKind::Pgl, n, parity, hi, true)?.truncated(hi);
    let pgl_untwisted = dt_cohomology(GroupKind::Pgl, n, parity, hi, false)?.truncated(hi);
    let from = lo.min(sl.min_deg()).min(pgl_twisted.min_deg()).min(pgl_untwisted.min_deg());
    let equal = sl.agrees_on(&pgl_twisted, from, hi)?;
    let expected = GradedSeries::constant(Rational::from((n * n * n) as i64 - 1));
    let twisted_difference_ok = sl.sub(&pgl_untwisted).agrees_on(&expected, from, hi)?;
    Ok(LanglandsReport {
        n,
        parity,
        window: Window { min: lo, max: hi },
        sl,
        pgl_twisted,
        pgl_untwisted,
        equal,
        twisted_difference_ok,
    })
}

/// `C(a, j)` for any integer `a` and `j >= 0`.
fn generalized_binomial(a: i64, j: u64) -> i128 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..j as i128 {
        num *= a as i128 - i;
        den *= i + 1;
    }
    num / den
}

/// Number of monomials of degree `k` in `l` variables, `C(k+l-1, k)`,
/// checked against `Σ_{j<=k} C(j+l-2, j)`.
pub fn bps_rank(l: u64, k: u64) -> Result<u64, Error> {
    if l == 0 {
        return Err(Error::Domain("l must be at least 1".into()));
    }
    let closed = generalized_binomial((k + l - 1) as i64, k);
    let recursion: i128 = (0..=k).map(|j| generalized_binomial(j as i64 + l as i64 - 2, j)).sum();
    if closed != recursion {
        return Err(Error::Internal(format!("rank recursion mismatch at l={l}, k={k}: {closed} vs {recursion}")));
    }
    closed.to_u64().ok_or_else(|| Error::Internal("rank overflow".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn bps_anchors() {
        assert_eq!(bps_poincare(GroupKind::Gl, 4).unwrap(), GradedSeries::polynomial_i64(-3, &[1, 3, 3, 1]));
        assert_eq!(bps_poincare(GroupKind::GlAdditive, 2).unwrap(), GradedSeries::polynomial_i64(-3, &[1]));
        assert_eq!(bps_poincare(GroupKind::Sl, 2).unwrap(), GradedSeries::constant(r(8)));
        assert_eq!(bps_poincare(GroupKind::Pgl, 3).unwrap(), GradedSeries::constant(r(1)));
        assert!(bps_poincare(GroupKind::Pgl, 4).is_err());
    }

    #[test]
    fn blocks() {
        let b = block_series(GroupKind::Gl, 1, 6).unwrap();
        assert_eq!(b.max_deg(), Some(6));
        assert_eq!(b.coeffs_between(-2, 6).unwrap(), [1, 3, 4, 4, 4, 4, 4, 4, 4].map(r).to_vec());
        let a = block_series(GroupKind::GlAdditive, 3, 4).unwrap();
        assert_eq!(a.coeffs_between(-3, 4).unwrap(), [0, 1, 0, 1, 0, 1, 0, 1].map(r).to_vec());
    }

    #[test]
    fn levi_contributions() {
        let one = Partition::single(1);
        let c = levi_contribution(GroupKind::Gl, 1, &one, ParityConvention::Shifted, 8).unwrap();
        assert!(c.agrees_on(&block_series(GroupKind::Gl, 1, 8).unwrap(), -4, 8).unwrap());
        let s = levi_contribution(GroupKind::Sl, 3, &Partition::single(3), ParityConvention::Shifted, 8).unwrap();
        assert_eq!(s, GradedSeries::constant(r(27)).truncated(8));
        let a =
            levi_contribution(GroupKind::GlAdditive, 2, &Partition::single(2), ParityConvention::Shifted, 8).unwrap();
        assert!(a.agrees_on(&block_series(GroupKind::GlAdditive, 2, 8).unwrap(), -4, 8).unwrap());
        assert!(levi_contribution(GroupKind::Gl, 3, &Partition::single(2), ParityConvention::Shifted, 8).is_err());
    }

    #[test]
    fn twisted_pgl() {
        for parity in ParityConvention::BOTH {
            let t = dt_cohomology(GroupKind::Pgl, 2, parity, 10, true).unwrap();
            let u = dt_cohomology(GroupKind::Pgl, 2, parity, 10, false).unwrap();
            assert!(t.sub(&u).agrees_on(&GradedSeries::constant(r(7)), -10, 10).unwrap());
        }
        assert!(dt_cohomology(GroupKind::Sl, 2, ParityConvention::Shifted, 10, true).is_err());
        assert!(dt_cohomology(GroupKind::Pgl, 4, ParityConvention::Shifted, 10, false).is_err());
        let gl1 = dt_cohomology(GroupKind::Gl, 1, ParityConvention::Shifted, 10, false).unwrap();
        assert!(gl1.agrees_on(&block_series(GroupKind::Gl, 1, 10).unwrap(), -5, 10).unwrap());
    }

    #[test]
    fn pe_of_a_point() {
        let pe = plethystic_exponential(&[GradedSeries::constant(r(1))], 3, ParityConvention::Shifted).unwrap();
        assert_eq!(pe.max_x(), 3);
        for n in 0..=3 {
            assert_eq!(pe.x_coeff(n).unwrap(), &GradedSeries::constant(r(1)));
        }
    }

    #[test]
    fn pe_first_order_is_the_block() {
        let blocks: Vec<GradedSeries> = (1..=3).map(|n| block_series(GroupKind::Gl, n, 12).unwrap()).collect();
        for parity in ParityConvention::BOTH {
            let pe = plethystic_exponential(&blocks, 3, parity).unwrap();
            assert!(pe.x_coeff(1).unwrap().agrees_on(&blocks[0], -4, 12).unwrap());
            assert_eq!(pe.x_coeff(2).unwrap().max_deg(), Some(10));
        }
    }

    #[test]
    fn pe_rejects_negative_blocks() {
        let b = GradedSeries::polynomial_i64(0, &[1, -1]);
        assert!(plethystic_exponential(&[b], 2, ParityConvention::Shifted).is_err());
    }

    #[test]
    fn small_integrality() {
        for kind in [GroupKind::Gl, GroupKind::GlAdditive] {
            for parity in ParityConvention::BOTH {
                let rep = verify_integrality(kind, 3, (-6, 10), parity).unwrap();
                assert!(rep.all_equal(), "{kind} {parity}");
            }
        }
        assert!(verify_integrality(GroupKind::Sl, 2, (-4, 4), ParityConvention::Shifted).is_err());
    }

    #[test]
    fn langlands_two_and_three() {
        for n in [2, 3] {
            for parity in ParityConvention::BOTH {
                let rep = langlands_check(n, (-12, 12), parity).unwrap();
                assert!(rep.equal && rep.twisted_difference_ok, "n={n} {parity}");
            }
        }
        assert!(langlands_check(4, (-4, 4), ParityConvention::Shifted).is_err());
    }

    #[test]
    fn ranks() {
        assert!((0..10).all(|k| bps_rank(1, k).unwrap() == 1));
        assert_eq!(bps_rank(2, 3).unwrap(), 4);
        assert_eq!(bps_rank(4, 2).unwrap(), 10);
        assert!(bps_rank(0, 2).is_err());
    }

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..20).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }
}
