//! Partitions, Levi subgroups, relative Weyl groups and centres of Levis.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::Error;
use crate::exact::{smith_normal_form, ExactMatrix, GaussianRational, IntMatrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    #[serde(rename = "gl")]
    Gl,
    #[serde(rename = "sl")]
    Sl,
    #[serde(rename = "pgl")]
    Pgl,
    #[serde(rename = "gl_add")]
    GlAdditive,
}

impl GroupKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GroupKind::Gl => "gl",
            GroupKind::Sl => "sl",
            GroupKind::Pgl => "pgl",
            GroupKind::GlAdditive => "gl_add",
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "gl" => Ok(GroupKind::Gl),
            "sl" => Ok(GroupKind::Sl),
            "pgl" => Ok(GroupKind::Pgl),
            "gl_add" | "gl_additive" | "gla" => Ok(GroupKind::GlAdditive),
            _ => Err(Error::Parse(format!("unknown group kind {s:?}"))),
        }
    }
}

/// A partition in canonical (weakly decreasing) form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Sorts the parts into canonical order; zero parts are rejected.
    pub fn new(mut parts: Vec<usize>) -> Result<Self, Error> {
        if parts.contains(&0) {
            return Err(Error::Domain("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    /// The one-part partition `(n)`.
    pub fn single(n: usize) -> Self {
        Partition { parts: if n == 0 { vec![] } else { vec![n] } }
    }

    /// `(1, ..., 1)` with `n` ones.
    pub fn ones(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts, `l`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `(part size j, multiplicity m_j)` by decreasing part size.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn gcd(&self) -> usize {
        self.parts.iter().fold(0, |g, &p| g.gcd(&p))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let body = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        let parts = body
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<usize>().map_err(|_| Error::Parse(format!("invalid partition {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(parts)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Partition::new(Vec::<usize>::deserialize(deserializer)?).map_err(serde::de::Error::custom)
    }
}

/// All partitions of `n`, lexicographically decreasing.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn go(rest: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rest.min(cap)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeviDescriptor {
    pub kind: GroupKind,
    pub partition: Partition,
    pub dim_centre: usize,
    pub weyl_order: u64,
}

pub fn levi_descriptor(kind: GroupKind, partition: &Partition) -> LeviDescriptor {
    let l = partition.len();
    let dim_centre = match kind {
        GroupKind::Gl | GroupKind::GlAdditive => l,
        GroupKind::Sl | GroupKind::Pgl => l.saturating_sub(1),
    };
    LeviDescriptor { kind, partition: partition.clone(), dim_centre, weyl_order: weyl_order(partition) }
}

/// `|W_{L_λ}| = ∏ m_j!`.
pub fn weyl_order(partition: &Partition) -> u64 {
    partition.multiplicities().iter().map(|&(_, m)| factorial(m)).product()
}

/// One factor of a conjugacy class of `∏ S_{m_j}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleBlock {
    pub part: usize,
    pub multiplicity: usize,
    /// Cycle lengths of the `S_{m_j}` component.
    pub cycles: Partition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleType {
    pub blocks: Vec<CycleBlock>,
    pub class_size: u64,
}

impl CycleType {
    /// Cycle lengths of the class acting on the `l` Levi blocks.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.blocks.iter().flat_map(|b| b.cycles.parts().iter().copied()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.cycle_lengths().iter().all(|&c| c == 1)
    }

    /// Sign of the class as a permutation of the blocks.
    pub fn sign(&self) -> i64 {
        let odd = self.cycle_lengths().iter().filter(|&&c| c % 2 == 0).count();
        if odd % 2 == 0 {
            1
        } else {
            -1
        }
    }

    fn matches(&self, partition: &Partition) -> bool {
        let mine: Vec<(usize, usize)> = self.blocks.iter().map(|b| (b.part, b.multiplicity)).collect();
        mine == partition.multiplicities()
    }
}

/// Centralizer order `z_μ = ∏ i^{a_i} a_i!`.
fn z_mu(mu: &Partition) -> u64 {
    mu.multiplicities().iter().map(|&(i, a)| (i as u64).pow(a as u32) * factorial(a)).product()
}

/// Conjugacy classes of `W_{L_λ} ≅ ∏ S_{m_j}`, identity first.
pub fn weyl_cycle_types(partition: &Partition) -> Vec<CycleType> {
    let mut out = vec![CycleType { blocks: Vec::new(), class_size: 1 }];
    for (part, m) in partition.multiplicities() {
        let mut mus = partitions_of(m);
        mus.reverse();
        let mut next = Vec::with_capacity(out.len() * mus.len());
        for prefix in &out {
            for mu in &mus {
                let mut blocks = prefix.blocks.clone();
                blocks.push(CycleBlock { part, multiplicity: m, cycles: mu.clone() });
                next.push(CycleType { blocks, class_size: prefix.class_size * (factorial(m) / z_mu(mu)) });
            }
        }
        out = next;
    }
    out
}

/// Every element of `W_{L_λ}` as a permutation of the `l` blocks
/// (`p[i]` is the image of block `i`).
pub fn weyl_group_elements(partition: &Partition) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut offset = 0;
    for (_, m) in partition.multiplicities() {
        let perms = permutations(m);
        let mut next = Vec::with_capacity(out.len() * perms.len());
        for prefix in &out {
            for p in &perms {
                let mut q: Vec<usize> = prefix.clone();
                q.extend(p.iter().map(|&x| x + offset));
                next.push(q);
            }
        }
        out = next;
        offset += m;
    }
    out
}

/// All permutations of `0..m` in lexicographic order.
pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..m).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..m).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..m).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// `(free rank, torsion order)` of the centre of the Levi.
pub fn centre_structure(kind: GroupKind, partition: &Partition) -> Result<(usize, u64), Error> {
    let l = partition.len();
    match kind {
        GroupKind::Gl => Ok((l, 1)),
        GroupKind::Pgl => Ok((l.saturating_sub(1), 1)),
        GroupKind::Sl => {
            let col: Vec<i64> = partition.parts().iter().map(|&p| p as i64).collect();
            let snf = smith_normal_form(&IntMatrix::column(&col));
            let torsion: BigInt = snf.torsion().iter().product();
            let torsion = torsion.to_u64().ok_or_else(|| Error::Internal("torsion order overflow".into()))?;
            Ok((snf.cokernel_free_rank(), torsion))
        }
        GroupKind::GlAdditive => Err(Error::Domain("centre structure is defined for gl, sl and pgl".into())),
    }
}

/// The component group `Z/g` of the SL-Levi centre with the action of the
/// adjacent block-swap generators of `W_{L_λ}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentGroupData {
    pub partition: Partition,
    pub g: u64,
    pub generators: Vec<SwapAction>,
    pub is_trivial: bool,
}

/// The swap of blocks `block` and `block + 1` (of equal size `part`) acts on
/// `Z/g` by multiplication with `multiplier`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwapAction {
    pub part: usize,
    pub block: usize,
    pub multiplier: u64,
}

impl ComponentGroupData {
    /// Hand-built data, used to exercise nontrivial actions. One multiplier
    /// per distinct part size, applied to every swap of that size.
    pub fn synthetic(partition: &Partition, g: u64, multipliers: &[u64]) -> Result<Self, Error> {
        let mult = partition.multiplicities();
        if multipliers.len() != mult.len() {
            return Err(Error::Shape("one multiplier per distinct part size".into()));
        }
        let mut generators = Vec::new();
        let mut offset = 0;
        for (&(part, m), &u) in mult.iter().zip(multipliers) {
            if g > 0 && u.gcd(&g) != 1 {
                return Err(Error::Domain(format!("{u} is not a unit modulo {g}")));
            }
            for b in 0..m.saturating_sub(1) {
                generators.push(SwapAction { part, block: offset + b, multiplier: u % g.max(1) });
            }
            offset += m;
        }
        let is_trivial = generators.iter().all(|s| s.multiplier % g.max(1) == 1 % g.max(1));
        Ok(ComponentGroupData { partition: partition.clone(), g, generators, is_trivial })
    }

    fn multiplier_for_part(&self, part: usize) -> u64 {
        self.generators.iter().find(|s| s.part == part).map_or(1, |s| s.multiplier)
    }
}

fn to_exact(m: &IntMatrix) -> ExactMatrix {
    let rows = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| GaussianRational::real(Rational::from(m[(i, j)].clone()))).collect())
        .collect();
    ExactMatrix::from_rows(rows).expect("rectangular")
}

fn exact_to_int(m: &ExactMatrix) -> Result<Vec<Vec<BigInt>>, Error> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let v = &m[(i, j)];
                    if v.im.is_zero() && v.re.is_integer() {
                        Ok(v.re.numer().clone())
                    } else {
                        Err(Error::Internal("unimodular inverse is not integral".into()))
                    }
                })
                .collect()
        })
        .collect()
}

/// Computes `π₀(Z(L_{SL,λ})) ≅ Z/g` and the induced action of each adjacent
/// equal-block swap.
pub fn component_action(partition: &Partition) -> Result<ComponentGroupData, Error> {
    let l = partition.len();
    if l == 0 {
        return Err(Error::Domain("empty partition".into()));
    }
    let col: Vec<i64> = partition.parts().iter().map(|&p| p as i64).collect();
    let snf = smith_normal_form(&IntMatrix::column(&col));
    let g_big = snf.d[(0, 0)].clone();
    let g = g_big.to_u64().ok_or_else(|| Error::Internal("gcd overflow".into()))?;
    let u = &snf.u;
    let u_inv = exact_to_int(&to_exact(u).inverse()?)?;
    // torsion generator w = U^{-1} e_1
    let w: Vec<BigInt> = (0..l).map(|i| u_inv[i][0].clone()).collect();

    let mut generators = Vec::new();
    let mut offset = 0;
    for (part, m) in partition.multiplicities() {
        for b in 0..m.saturating_sub(1) {
            let (i, j) = (offset + b, offset + b + 1);
            let mut sw = w.clone();
            sw.swap(i, j);
            let image = u.mul_vec(&sw);
            // the image is torsion, so its free coordinates vanish
            if image[1..].iter().any(|x| !x.is_zero()) {
                return Err(Error::Internal(format!("swap of blocks {i},{j} of {partition} leaves the torsion part")));
            }
            let a = image[0].mod_floor(&g_big).to_u64().unwrap_or(0);
            generators.push(SwapAction { part, block: i, multiplier: a });
        }
        offset += m;
    }
    let is_trivial = generators.iter().all(|s| s.multiplier == 1 % g);
    Ok(ComponentGroupData { partition: partition.clone(), g, generators, is_trivial })
}

/// Fixed points of a class representative on `(Z/g)^3`.
pub fn fixed_components(data: &ComponentGroupData, tau: &CycleType) -> Result<u64, Error> {
    if !tau.matches(&data.partition) {
        return Err(Error::Domain(format!("cycle type does not belong to W of {}", data.partition)));
    }
    let g = data.g;
    if g <= 1 {
        return Ok(1);
    }
    // transpositions of S_{m_j} are conjugate, so a class with c cycles maps to u_j^{m_j - c}
    let mut a = BigInt::one();
    for b in &tau.blocks {
        let u = BigInt::from(data.multiplier_for_part(b.part));
        let e = (b.multiplicity - b.cycles.len()) as u32;
        a = (a * num_traits::pow(u, e as usize)).mod_floor(&BigInt::from(g));
    }
    let a = a.to_u64().unwrap();
    let k = ((a + g - 1) % g).gcd(&g);
    Ok(k.pow(3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions_of(4).len(), 5);
        assert_eq!(partitions_of(1), vec![p(&[1])]);
        assert_eq!(partitions_of(6).len(), 11);
        assert_eq!(partitions_of(0), vec![p(&[])]);
        let four: Vec<String> = partitions_of(4).iter().map(ToString::to_string).collect();
        assert_eq!(four, ["(4)", "(3,1)", "(2,2)", "(2,1,1)", "(1,1,1,1)"]);
    }

    #[test]
    fn canonical_form_and_parsing() {
        assert_eq!(p(&[1, 2, 1]).parts(), &[2, 1, 1]);
        assert_eq!("(1,3)".parse::<Partition>().unwrap(), p(&[3, 1]));
        assert_eq!(serde_json::to_string(&p(&[2, 1])).unwrap(), "[2,1]");
        assert!(Partition::new(vec![2, 0]).is_err());
        assert_eq!(p(&[2, 2, 1]).multiplicities(), vec![(2, 2), (1, 1)]);
    }

    #[test]
    fn descriptors() {
        let d = levi_descriptor(GroupKind::Gl, &p(&[2, 1, 1]));
        assert_eq!((d.dim_centre, d.weyl_order), (3, 2));
        let d = levi_descriptor(GroupKind::Sl, &p(&[2, 2]));
        assert_eq!((d.dim_centre, d.weyl_order), (1, 2));
        let d = levi_descriptor(GroupKind::Pgl, &p(&[5]));
        assert_eq!((d.dim_centre, d.weyl_order), (0, 1));
        assert_eq!(serde_json::to_value(&d).unwrap()["kind"], "pgl");
    }

    #[test]
    fn cycle_types() {
        let c = weyl_cycle_types(&p(&[2, 2, 1, 1]));
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|t| t.class_size == 1));
        assert_eq!(weyl_cycle_types(&p(&[3, 1])).len(), 1);
        let s3: Vec<u64> = weyl_cycle_types(&p(&[1, 1, 1])).iter().map(|t| t.class_size).collect();
        assert_eq!(s3, vec![1, 3, 2]);
        assert!(weyl_cycle_types(&p(&[1, 1, 1]))[0].is_identity());
    }

    #[test]
    fn group_elements() {
        assert_eq!(weyl_group_elements(&p(&[2, 2, 1, 1])).len(), 4);
        assert_eq!(weyl_group_elements(&p(&[1, 1, 1])).len(), 6);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(weyl_group_elements(&p(&[3])), vec![vec![0]]);
    }

    #[test]
    fn centres() {
        assert_eq!(centre_structure(GroupKind::Sl, &p(&[2, 2])).unwrap(), (1, 2));
        assert_eq!(centre_structure(GroupKind::Gl, &p(&[5])).unwrap(), (1, 1));
        assert_eq!(centre_structure(GroupKind::Sl, &p(&[3, 2, 1])).unwrap(), (2, 1));
        assert_eq!(centre_structure(GroupKind::Pgl, &p(&[2, 2])).unwrap(), (1, 1));
        assert!(centre_structure(GroupKind::GlAdditive, &p(&[2])).is_err());
    }

    #[test]
    fn component_actions() {
        let d = component_action(&p(&[2, 2])).unwrap();
        assert_eq!(d.g, 2);
        assert!(d.is_trivial);
        let d = component_action(&p(&[7])).unwrap();
        assert_eq!(d.g, 7);
        assert!(d.is_trivial && d.generators.is_empty());
        let d = component_action(&p(&[1, 1, 1])).unwrap();
        assert_eq!(d.g, 1);
        assert!(d.is_trivial);
    }

    #[test]
    fn fixed_component_counts() {
        let lam = p(&[2, 2]);
        let d = component_action(&lam).unwrap();
        for tau in weyl_cycle_types(&lam) {
            assert_eq!(fixed_components(&d, &tau).unwrap(), 8);
        }
        let d1 = component_action(&p(&[1, 1])).unwrap();
        for tau in weyl_cycle_types(&p(&[1, 1])) {
            assert_eq!(fixed_components(&d1, &tau).unwrap(), 1);
        }
        let lam = p(&[4, 4]);
        let synth = ComponentGroupData::synthetic(&lam, 4, &[3]).unwrap();
        assert!(!synth.is_trivial);
        let swap = &weyl_cycle_types(&lam)[1];
        assert_eq!(fixed_components(&synth, swap).unwrap(), 8);
        assert_eq!(fixed_components(&synth, &weyl_cycle_types(&lam)[0]).unwrap(), 64);
        let other = &weyl_cycle_types(&p(&[3, 1]))[0];
        assert!(fixed_components(&synth, other).is_err());
    }

    #[test]
    fn weyl_action_on_components_is_trivial_up_to_eight() {
        for n in 1..=8 {
            for lam in partitions_of(n) {
                let d = component_action(&lam).unwrap();
                assert!(d.is_trivial, "nontrivial W-action on components for {lam}");
            }
        }
    }

    #[test]
    fn class_sizes_and_centres_up_to_ten() {
        for n in 1..=10 {
            for lam in partitions_of(n) {
                let total: u64 = weyl_cycle_types(&lam).iter().map(|t| t.class_size).sum();
                assert_eq!(total, weyl_order(&lam), "{lam}");
                let (free, tors) = centre_structure(GroupKind::Sl, &lam).unwrap();
                assert_eq!((free, tors), (lam.len() - 1, lam.gcd() as u64), "{lam}");
                assert_eq!(component_action(&lam).unwrap().g, tors);
            }
        }
    }

    proptest! {
        #[test]
        fn sign_is_a_character(n in 1usize..7) {
            for lam in partitions_of(n) {
                let signed: i64 = weyl_cycle_types(&lam).iter().map(|t| t.sign() * t.class_size as i64).sum();
                let trivial_w = weyl_order(&lam) == 1;
                prop_assert_eq!(signed, if trivial_w { 1 } else { 0 });
            }
        }
    }
}
