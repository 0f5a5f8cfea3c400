//! Points of `Sym^n(G_m^3)`, strata, covers and twisted PGL classes.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::Error;
use crate::exact::{GradedSeries, IntMatrix, Rational};
use crate::group_data::{permutations, weyl_order, Partition};
use crate::integrality::is_prime;

/// `r·e^{2πiθ}` with `r > 0` and `θ ∈ [0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TorusElem {
    pub r: Rational,
    pub theta: Rational,
}

impl TorusElem {
    pub fn new(r: Rational, theta: Rational) -> Result<Self, Error> {
        if !r.is_positive() {
            return Err(Error::Domain(format!("magnitude {r} must be positive")));
        }
        Ok(TorusElem { r, theta: theta.fract_positive() })
    }

    pub fn one() -> Self {
        TorusElem { r: Rational::one(), theta: Rational::zero() }
    }

    /// `e^{2πi k/n}`.
    pub fn root_of_unity(k: i64, n: i64) -> Self {
        TorusElem { r: Rational::one(), theta: Rational::new(k, n).fract_positive() }
    }

    pub fn from_parts(r: (i64, i64), theta: (i64, i64)) -> Self {
        TorusElem::new(Rational::new(r.0, r.1), Rational::new(theta.0, theta.1)).expect("positive magnitude")
    }

    pub fn mul(&self, other: &TorusElem) -> TorusElem {
        TorusElem { r: &self.r * &other.r, theta: (&self.theta + &other.theta).fract_positive() }
    }

    pub fn inv(&self) -> TorusElem {
        TorusElem { r: self.r.recip(), theta: (-&self.theta).fract_positive() }
    }

    pub fn is_one(&self) -> bool {
        self.r.is_one() && self.theta.is_zero()
    }
}

impl fmt::Display for TorusElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·e(2πi·{})", self.r, self.theta)
    }
}

impl fmt::Debug for TorusElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'de> Deserialize<'de> for TorusElem {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            r: Rational,
            theta: Rational,
        }
        let Repr { r, theta } = Repr::deserialize(deserializer)?;
        TorusElem::new(r, theta).map_err(serde::de::Error::custom)
    }
}

pub type Triple = [TorusElem; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Gl,
    Sl,
}

/// A multiset of `n` torus triples, kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SymPoint {
    pub kind: PointKind,
    pub triples: Vec<Triple>,
}

impl SymPoint {
    pub fn new(kind: PointKind, mut triples: Vec<Triple>) -> Result<Self, Error> {
        if triples.is_empty() {
            return Err(Error::Domain("a point needs at least one triple".into()));
        }
        triples.sort();
        let p = SymPoint { kind, triples };
        if kind == PointKind::Sl {
            for c in 0..3 {
                if !p.coordinate_product(c).is_one() {
                    return Err(Error::Domain(format!(
                        "coordinate {} has determinant {}",
                        c + 1,
                        p.coordinate_product(c)
                    )));
                }
            }
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.triples.len()
    }

    /// Product over the multiset of coordinate `c`.
    pub fn coordinate_product(&self, c: usize) -> TorusElem {
        self.triples.iter().fold(TorusElem::one(), |acc, t| acc.mul(&t[c]))
    }

    /// Sorted multiset of coordinate `c`.
    pub fn coordinate(&self, c: usize) -> Vec<TorusElem> {
        let mut v: Vec<TorusElem> = self.triples.iter().map(|t| t[c].clone()).collect();
        v.sort();
        v
    }

    /// Distinct triples with multiplicities, by decreasing multiplicity.
    fn blocks(&self) -> Vec<(Triple, usize)> {
        let mut out: Vec<(Triple, usize)> = Vec::new();
        for t in &self.triples {
            match out.iter_mut().find(|(u, _)| u == t) {
                Some((_, m)) => *m += 1,
                None => out.push((t.clone(), 1)),
            }
        }
        out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        out
    }

    /// Multiply coordinate `c` of every triple by `z`.
    fn scale_coordinate(&self, c: usize, z: &TorusElem) -> SymPoint {
        let mut triples = self.triples.clone();
        for t in &mut triples {
            t[c] = t[c].mul(z);
        }
        triples.sort();
        SymPoint { kind: self.kind, triples }
    }
}

impl fmt::Debug for SymPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.kind, self.triples)
    }
}

impl<'de> Deserialize<'de> for SymPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            kind: PointKind,
            triples: Vec<Triple>,
        }
        let Repr { kind, triples } = Repr::deserialize(deserializer)?;
        SymPoint::new(kind, triples).map_err(serde::de::Error::custom)
    }
}

/// Partition recording how the triples repeat.
pub fn stratum_of(p: &SymPoint) -> Partition {
    Partition::new(p.blocks().iter().map(|(_, m)| *m).collect()).expect("positive multiplicities")
}

/// Some coordinate takes pairwise-distinct values on the distinct triples.
pub fn is_generic(p: &SymPoint) -> bool {
    let blocks = p.blocks();
    (0..3).any(|c| {
        let vals: HashSet<&TorusElem> = blocks.iter().map(|(t, _)| &t[c]).collect();
        vals.len() == blocks.len()
    })
}

/// Ordered centre points `(x_1, ..., x_l)` with pairwise-distinct entries
/// whose block expansion (`x_i` repeated `λ_i` times) is `p`.
pub fn theta_fiber(p: &SymPoint, partition: &Partition) -> Result<Vec<Vec<Triple>>, Error> {
    if stratum_of(p) != *partition {
        return Err(Error::Domain(format!("point lies in stratum {}, not {partition}", stratum_of(p))));
    }
    let blocks = p.blocks();
    let mut out: Vec<Vec<Triple>> = vec![Vec::new()];
    for (part, m) in partition.multiplicities() {
        let group: Vec<&Triple> = blocks.iter().filter(|(_, k)| *k == part).map(|(t, _)| t).collect();
        debug_assert_eq!(group.len(), m);
        let mut next = Vec::new();
        for prefix in &out {
            for perm in permutations(m) {
                let mut v = prefix.clone();
                v.extend(perm.iter().map(|&i| group[i].clone()));
                next.push(v);
            }
        }
        out = next;
    }
    debug_assert_eq!(out.len() as u64, weyl_order(partition));
    Ok(out)
}

fn require_prime(n: u64) -> Result<(), Error> {
    if is_prime(n) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{n} is not prime")))
    }
}

/// Eigenvalue multisets of the special matrices: `diag(1, ω, ..., ω^{n-1})`
/// for odd `n`, `i·diag(1, -1)` for `n = 2`.
pub fn special_multiset(n: u64) -> Vec<TorusElem> {
    let mut v: Vec<TorusElem> = if n == 2 {
        vec![TorusElem::root_of_unity(1, 4), TorusElem::root_of_unity(3, 4)]
    } else {
        (0..n as i64).map(|k| TorusElem::root_of_unity(k, n as i64)).collect()
    };
    v.sort();
    v
}

fn is_central(values: &[TorusElem], n: u64) -> bool {
    let z = &values[0];
    values.iter().all(|v| v == z) && z.r.is_one() && (&z.theta * &Rational::from(n as i64)).is_integer()
}

pub fn is_bad_point(p: &SymPoint, n: u64) -> Result<bool, Error> {
    require_prime(n)?;
    if p.kind != PointKind::Sl || p.n() as u64 != n {
        return Err(Error::Domain(format!("expected an sl point with {n} triples")));
    }
    let special = special_multiset(n);
    let mut any_special = false;
    for c in 0..3 {
        let vals = p.coordinate(c);
        if vals == special {
            any_special = true;
        } else if !is_central(&vals, n) {
            return Ok(false);
        }
    }
    Ok(any_special)
}

/// Size of the `μ_n^3`-orbit of an SL point.
pub fn sl_pgl_fiber(p: &SymPoint, n: u64) -> Result<usize, Error> {
    require_prime(n)?;
    if p.kind != PointKind::Sl {
        return Err(Error::Domain("expected an sl point".into()));
    }
    let mut orbit = BTreeSet::new();
    for a in 0..n as i64 {
        let pa = p.scale_coordinate(0, &TorusElem::root_of_unity(a, n as i64));
        for b in 0..n as i64 {
            let pb = pa.scale_coordinate(1, &TorusElem::root_of_unity(b, n as i64));
            for c in 0..n as i64 {
                orbit.insert(pb.scale_coordinate(2, &TorusElem::root_of_unity(c, n as i64)));
            }
        }
    }
    Ok(orbit.len())
}

/// All `z` with `z^n = w`, when the magnitude root is rational; otherwise
/// only the arguments are enumerated (the magnitude root is unique).
fn nth_roots(w: &TorusElem, n: u64) -> (Option<Rational>, Vec<Rational>) {
    let args = (0..n as i64).map(|k| (&w.theta + &Rational::from(k)) / Rational::from(n as i64)).collect();
    (w.r.nth_root_exact(n as u32), args)
}

/// Number of pairs `(SL point, scalar triple)` over a GL point.
pub fn eta2_fiber_size(q: &SymPoint, n: u64) -> Result<usize, Error> {
    if q.kind != PointKind::Gl || q.n() as u64 != n {
        return Err(Error::Domain(format!("expected a gl point with {n} triples")));
    }
    let roots: Vec<(Option<Rational>, Vec<Rational>)> =
        (0..3).map(|c| nth_roots(&q.coordinate_product(c), n)).collect();
    if roots.iter().all(|(r, _)| r.is_some()) {
        let mut fiber = HashSet::new();
        for a in &roots[0].1 {
            for b in &roots[1].1 {
                for c in &roots[2].1 {
                    let s: Vec<TorusElem> = [a, b, c]
                        .iter()
                        .enumerate()
                        .map(|(i, th)| TorusElem::new(roots[i].0.clone().unwrap(), (*th).clone()))
                        .collect::<Result<_, _>>()?;
                    let triples: Vec<Triple> = q
                        .triples
                        .iter()
                        .map(|t| [t[0].mul(&s[0].inv()), t[1].mul(&s[1].inv()), t[2].mul(&s[2].inv())])
                        .collect();
                    let p = SymPoint::new(PointKind::Sl, triples)?;
                    fiber.insert((p, s));
                }
            }
        }
        Ok(fiber.len())
    } else {
        let mut phases: HashSet<(&Rational, &Rational, &Rational)> = HashSet::new();
        for a in &roots[0].1 {
            for b in &roots[1].1 {
                for c in &roots[2].1 {
                    phases.insert((a, b, c));
                }
            }
        }
        Ok(phases.len())
    }
}

/// `M` in `SL_3(Z)` with `M·v ≡ (d, 0, 0) (mod n)`, `d = gcd(v, n)` reduced mod `n`.
#[derive(Clone, Debug, Serialize)]
pub struct TwistedNormalForm {
    pub n: u64,
    pub input: [i64; 3],
    pub normal_form: [i64; 3],
    pub witness: [[i64; 3]; 3],
}

struct RowOps {
    w: Vec<BigInt>,
    m: IntMatrix,
}

impl RowOps {
    // row i += f·row j
    fn add(&mut self, i: usize, j: usize, f: &BigInt) {
        let wj = &self.w[j] * f;
        self.w[i] += wj;
        for c in 0..3 {
            let v = &self.m[(j, c)] * f;
            self.m[(i, c)] += v;
        }
    }

    // (row i, row j) -> (row j, -row i), determinant one
    fn signed_swap(&mut self, i: usize, j: usize) {
        self.w.swap(i, j);
        let wj = -&self.w[j];
        self.w[j] = wj;
        for c in 0..3 {
            let a = self.m[(i, c)].clone();
            self.m[(i, c)] = self.m[(j, c)].clone();
            self.m[(j, c)] = -a;
        }
    }

    /// Euclid among the coordinates in `idx`, leaving the gcd (up to sign) in `idx[0]`.
    fn euclid(&mut self, idx: &[usize]) {
        loop {
            let nz: Vec<usize> = idx.iter().copied().filter(|&i| !self.w[i].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&i) = nz.first() {
                    if i != idx[0] {
                        self.signed_swap(idx[0], i);
                    }
                }
                return;
            }
            let p = *nz.iter().min_by_key(|&&i| self.w[i].abs()).unwrap();
            for &i in &nz {
                if i != p {
                    let q = -(self.w[i].div_floor(&self.w[p]));
                    self.add(i, p, &q);
                }
            }
        }
    }
}

pub fn twisted_normal_form(v: [i64; 3], n: u64) -> Result<TwistedNormalForm, Error> {
    if n == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    let nb = BigInt::from(n);
    let mut ops = RowOps { w: v.iter().map(|&x| BigInt::from(x).mod_floor(&nb)).collect(), m: IntMatrix::identity(3) };
    ops.euclid(&[0, 1, 2]);
    // (g, 0, 0) ≡ (g, n, 0); a second Euclid folds n into the gcd
    if ops.w[0].is_zero() || !(&nb % &ops.w[0]).is_zero() {
        ops.w[1] = nb.clone();
        ops.euclid(&[0, 1]);
    }
    if ops.w[0].is_negative() {
        // negate rows 0 and 2 together to keep det = 1
        let neg = BigInt::from(-1);
        for r in [0, 2] {
            let v = -&ops.w[r];
            ops.w[r] = v;
            for c in 0..3 {
                let e = &ops.m[(r, c)] * &neg;
                ops.m[(r, c)] = e;
            }
        }
    }
    let d = ops.w[0].mod_floor(&nb).to_i64().unwrap();
    let witness: [[i64; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| ops.m[(i, j)].to_i64().expect("small witness entries")));
    let out = TwistedNormalForm { n, input: v, normal_form: [d, 0, 0], witness };
    if !witness_is_valid(&out) {
        return Err(Error::Internal(format!("normal form witness failed for {v:?} mod {n}")));
    }
    Ok(out)
}

/// `det M = 1` and `M·v ≡ normal form (mod n)`, checked exactly.
pub fn witness_is_valid(f: &TwistedNormalForm) -> bool {
    let rows: Vec<Vec<i64>> = f.witness.iter().map(|r| r.to_vec()).collect();
    let m = IntMatrix::from_rows(&rows).expect("3x3");
    if m.det().ok() != Some(BigInt::one()) {
        return false;
    }
    let v: Vec<BigInt> = f.input.iter().map(|&x| BigInt::from(x)).collect();
    let nb = BigInt::from(f.n);
    m.mul_vec(&v).iter().zip(f.normal_form).all(|(a, b)| (a - BigInt::from(b)).mod_floor(&nb).is_zero())
}

/// Number of nonzero classes of `(Z/n)^3` reachable from `(1, 0, 0)` under the
/// elementary generators `E_ij(1)` of `SL_3(Z/n)`.
pub fn twisted_orbit_size(n: u64) -> usize {
    let start = [1 % n, 0, 0];
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let mut w = v;
                w[i] = (w[i] + w[j]) % n;
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
    }
    seen.len()
}

/// `(n³ - 1, (n³ - 1)·t⁰)` for prime `n`; for `n ∈ {2, 3}` the single-orbit
/// claim is rechecked by generator closure.
pub fn twisted_component_data(n: u64) -> Result<(u64, GradedSeries), Error> {
    require_prime(n)?;
    let count = n * n * n - 1;
    if n <= 3 && twisted_orbit_size(n) as u64 != count {
        return Err(Error::Internal(format!("nonzero classes mod {n} do not form one orbit")));
    }
    Ok((count, GradedSeries::constant(Rational::from(count as i64))))
}

/// Seeded point generators.
pub mod sample {
    use super::*;

    fn small_elem<R: Rng>(rng: &mut R) -> TorusElem {
        let r = Rational::new(rng.gen_range(1..=9i64), rng.gen_range(1..=9i64));
        let theta = Rational::new(rng.gen_range(0..24i64), 24);
        TorusElem::new(r, theta).unwrap()
    }

    fn small_triple<R: Rng>(rng: &mut R) -> Triple {
        [small_elem(rng), small_elem(rng), small_elem(rng)]
    }

    /// A GL point in the stratum of `partition` with random distinct triples.
    pub fn stratum_point<R: Rng>(partition: &Partition, rng: &mut R) -> SymPoint {
        let mut distinct: Vec<Triple> = Vec::new();
        while distinct.len() < partition.len() {
            let t = small_triple(rng);
            if !distinct.contains(&t) {
                distinct.push(t);
            }
        }
        let triples =
            distinct.iter().zip(partition.parts()).flat_map(|(t, &m)| std::iter::repeat_n(t.clone(), m)).collect();
        SymPoint::new(PointKind::Gl, triples).unwrap()
    }

    pub fn gl_point<R: Rng>(n: usize, rng: &mut R) -> SymPoint {
        SymPoint::new(PointKind::Gl, (0..n).map(|_| small_triple(rng)).collect()).unwrap()
    }

    /// A random SL point off the bad locus (rejection sampling).
    pub fn good_sl_point<R: Rng>(n: u64, rng: &mut R) -> SymPoint {
        loop {
            let mut triples: Vec<Triple> = (0..n - 1).map(|_| small_triple(rng)).collect();
            let last: Triple =
                std::array::from_fn(|c| triples.iter().fold(TorusElem::one(), |acc, t| acc.mul(&t[c])).inv());
            triples.push(last);
            let p = SymPoint::new(PointKind::Sl, triples).unwrap();
            if !is_bad_point(&p, n).unwrap_or(true) {
                return p;
            }
        }
    }

    /// Bad points: each coordinate is central or special, at least one special.
    pub fn bad_sl_points(n: u64) -> Vec<SymPoint> {
        let special = special_multiset(n);
        let mut out = Vec::new();
        // coordinate choices: 0 = identity, 1 = special
        for mask in 1u8..8 {
            let cols: Vec<Vec<TorusElem>> = (0..3)
                .map(|c| if mask & (1 << c) != 0 { special.clone() } else { vec![TorusElem::one(); n as usize] })
                .collect();
            let triples = (0..n as usize).map(|i| std::array::from_fn(|c| cols[c][i].clone())).collect();
            out.push(SymPoint::new(PointKind::Sl, triples).unwrap());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_data::partitions_of;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn te(r: (i64, i64), th: (i64, i64)) -> TorusElem {
        TorusElem::from_parts(r, th)
    }

    fn one() -> TorusElem {
        TorusElem::one()
    }

    fn real(a: i64, b: i64) -> TorusElem {
        te((a, b), (0, 1))
    }

    #[test]
    fn torus_elements() {
        let z = te((2, 1), (5, 4));
        assert_eq!(z.theta, Rational::new(1, 4));
        assert!(z.mul(&z.inv()).is_one());
        assert!(TorusElem::new(Rational::from(-1), Rational::zero()).is_err());
        let js = serde_json::to_string(&z).unwrap();
        assert_eq!(js, r#"{"r":"2","theta":"1/4"}"#);
    }

    #[test]
    fn sl_constraint() {
        let ok = SymPoint::new(PointKind::Sl, vec![[real(2, 1), one(), one()], [real(1, 2), one(), one()]]);
        assert!(ok.is_ok());
        let bad = SymPoint::new(PointKind::Sl, vec![[real(2, 1), one(), one()], [real(1, 1), one(), one()]]);
        assert!(bad.is_err());
        let js = r#"{"kind":"sl","triples":[[{"r":"2","theta":"0"},{"r":"1","theta":"0"},{"r":"1","theta":"0"}],
                   [{"r":"1/2","theta":"0"},{"r":"1","theta":"0"},{"r":"1","theta":"0"}]]}"#;
        assert_eq!(serde_json::from_str::<SymPoint>(js).unwrap(), ok.unwrap());
    }

    #[test]
    fn strata() {
        let p = SymPoint::new(PointKind::Sl, vec![[real(2, 1), one(), one()], [real(1, 2), one(), one()]]).unwrap();
        assert_eq!(stratum_of(&p), Partition::ones(2));
        let q = SymPoint::new(PointKind::Gl, vec![[one(), one(), one()]; 4]).unwrap();
        assert_eq!(stratum_of(&q), Partition::single(4));
        assert!(is_generic(&q));
        let x = [real(2, 1), real(3, 1), real(5, 1)];
        let y = [real(7, 1), real(3, 1), real(5, 1)];
        let r = SymPoint::new(PointKind::Gl, vec![x.clone(), y, x]).unwrap();
        assert_eq!(stratum_of(&r), Partition::new(vec![2, 1]).unwrap());
    }

    #[test]
    fn genericity() {
        let (x1, x2) = (real(2, 1), real(3, 1));
        let (y1, y2) = (real(5, 1), real(7, 1));
        let (z1, z2) = (real(11, 1), real(13, 1));
        // no coordinate separates all three triples
        let p = SymPoint::new(
            PointKind::Gl,
            vec![[x1.clone(), y1.clone(), z1], [x1.clone(), y1, z2.clone()], [x1.clone(), y2, z2]],
        )
        .unwrap();
        assert!(!is_generic(&p));
        let q = SymPoint::new(PointKind::Gl, vec![[x1, one(), one()], [x2, one(), one()]]).unwrap();
        assert!(is_generic(&q));
    }

    #[test]
    fn theta_fibers() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (parts, size) in [(vec![2, 2, 1, 1], 4), (vec![3, 1], 1), (vec![1, 1], 2)] {
            let lam = Partition::new(parts).unwrap();
            let p = sample::stratum_point(&lam, &mut rng);
            let fib = theta_fiber(&p, &lam).unwrap();
            assert_eq!(fib.len(), size);
            let distinct: HashSet<_> = fib.iter().collect();
            assert_eq!(distinct.len(), size);
        }
        let p = sample::stratum_point(&Partition::ones(2), &mut rng);
        assert!(theta_fiber(&p, &Partition::single(2)).is_err());
    }

    fn sl2_bad() -> SymPoint {
        let i = TorusElem::root_of_unity(1, 4);
        let mi = TorusElem::root_of_unity(3, 4);
        SymPoint::new(PointKind::Sl, vec![[one(), one(), i], [one(), one(), mi]]).unwrap()
    }

    #[test]
    fn bad_locus() {
        assert!(is_bad_point(&sl2_bad(), 2).unwrap());
        let generic = SymPoint::new(
            PointKind::Sl,
            vec![[real(2, 1), real(3, 1), real(5, 1)], [real(1, 2), real(1, 3), real(1, 5)]],
        )
        .unwrap();
        assert!(!is_bad_point(&generic, 2).unwrap());
        let id = SymPoint::new(PointKind::Sl, vec![[one(), one(), one()]; 2]).unwrap();
        assert!(!is_bad_point(&id, 2).unwrap());
        assert!(is_bad_point(&id, 4).is_err());
    }

    #[test]
    fn fibers() {
        assert_eq!(sl_pgl_fiber(&sl2_bad(), 2).unwrap(), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        assert_eq!(sl_pgl_fiber(&sample::good_sl_point(2, &mut rng), 2).unwrap(), 8);
        assert_eq!(sl_pgl_fiber(&sample::good_sl_point(3, &mut rng), 3).unwrap(), 27);
        for n in [2u64, 3] {
            for p in sample::bad_sl_points(n) {
                assert!(is_bad_point(&p, n).unwrap());
                assert!(sl_pgl_fiber(&p, n).unwrap() < (n * n * n) as usize);
            }
        }
    }

    #[test]
    fn eta2() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(eta2_fiber_size(&sample::gl_point(2, &mut rng), 2).unwrap(), 8);
        assert_eq!(eta2_fiber_size(&sample::gl_point(1, &mut rng), 1).unwrap(), 1);
        assert_eq!(eta2_fiber_size(&sample::gl_point(3, &mut rng), 3).unwrap(), 27);
        // rational square roots of the determinants: the pairs are built explicitly
        let q = SymPoint::new(PointKind::Gl, vec![[real(4, 1), one(), real(9, 1)], [real(1, 1), real(1, 4), one()]])
            .unwrap();
        assert_eq!(eta2_fiber_size(&q, 2).unwrap(), 8);
    }

    #[test]
    fn normal_forms() {
        let f = twisted_normal_form([1, 0, 0], 5).unwrap();
        assert_eq!(f.normal_form, [1, 0, 0]);
        assert_eq!(f.witness, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let f = twisted_normal_form([2, 4, 6], 9).unwrap();
        assert_eq!(f.normal_form, [1, 0, 0]);
        assert!(witness_is_valid(&f));
        let f = twisted_normal_form([3, 6, 0], 9).unwrap();
        assert_eq!(f.normal_form, [3, 0, 0]);
        assert_eq!(twisted_normal_form([0, 0, 0], 7).unwrap().normal_form, [0, 0, 0]);
    }

    #[test]
    fn twisted_components() {
        assert_eq!(twisted_orbit_size(2), 7);
        assert_eq!(twisted_orbit_size(3), 26);
        let (c, s) = twisted_component_data(2).unwrap();
        assert_eq!((c, s), (7, GradedSeries::constant(Rational::from(7))));
        assert_eq!(twisted_component_data(3).unwrap().0, 26);
        assert!(twisted_component_data(4).is_err());
    }

    #[test]
    fn theta_fiber_sizes_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 1..=5 {
            for lam in partitions_of(n) {
                for _ in 0..5 {
                    let p = sample::stratum_point(&lam, &mut rng);
                    assert_eq!(theta_fiber(&p, &lam).unwrap().len() as u64, weyl_order(&lam));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn witness_always_valid(v in proptest::array::uniform3(-50i64..50), n in 1u64..12) {
            let f = twisted_normal_form(v, n).unwrap();
            prop_assert!(witness_is_valid(&f));
            let g = v.iter().fold(n as i64, |g, &x| g.gcd(&x));
            prop_assert_eq!(f.normal_form[0], g % n as i64);
        }

        #[test]
        fn distinct_coordinate_forces_all_ones(seed in any::<u64>(), n in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = sample::gl_point(n, &mut rng);
            let c0 = p.coordinate(0);
            let distinct: HashSet<_> = c0.iter().collect();
            if distinct.len() == n {
                prop_assert_eq!(stratum_of(&p), Partition::ones(n));
            }
        }
    }
}
