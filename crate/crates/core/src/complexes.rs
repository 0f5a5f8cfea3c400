//! Based chain complexes of local systems on the 3-torus, their homology
//! ranks and their torsion.

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::Error;
use crate::exact::{ExactMatrix, GaussianRational, Rational};
use crate::group_data::Partition;

/// `differentials[i]` is `d_{i+1}: C_{i+1} -> C_i`, of shape
/// `dims[i] x dims[i+1]`. Bases are the standard ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasedComplex {
    dims: Vec<usize>,
    differentials: Vec<ExactMatrix>,
}

impl BasedComplex {
    pub fn new(dims: Vec<usize>, differentials: Vec<ExactMatrix>) -> Result<Self, Error> {
        if dims.is_empty() {
            return Err(Error::Shape("a complex needs at least one term".into()));
        }
        if differentials.len() + 1 != dims.len() {
            return Err(Error::Shape(format!("{} terms need {} differentials", dims.len(), dims.len() - 1)));
        }
        for (i, d) in differentials.iter().enumerate() {
            if (d.rows(), d.cols()) != (dims[i], dims[i + 1]) {
                return Err(Error::Shape(format!(
                    "d_{} is {}x{}, expected {}x{}",
                    i + 1,
                    d.rows(),
                    d.cols(),
                    dims[i],
                    dims[i + 1]
                )));
            }
        }
        for (i, pair) in differentials.windows(2).enumerate() {
            if !(&pair[0] * &pair[1]).is_zero() {
                return Err(Error::Domain(format!("d_{} d_{} is not zero", i + 1, i + 2)));
            }
        }
        Ok(BasedComplex { dims, differentials })
    }

    /// From cochain indexing: `maps[k]: C^k -> C^{k+1}`.
    pub fn from_cochain(dims: Vec<usize>, maps: Vec<ExactMatrix>) -> Result<Self, Error> {
        let mut dims = dims;
        dims.reverse();
        let mut maps = maps;
        maps.reverse();
        BasedComplex::new(dims, maps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Top degree `m` (terms `C_0..C_m`).
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    /// `d_k: C_k -> C_{k-1}` for `1 <= k <= m`.
    pub fn d(&self, k: usize) -> &ExactMatrix {
        &self.differentials[k - 1]
    }

    pub fn differentials(&self) -> &[ExactMatrix] {
        &self.differentials
    }

    fn rank_d(&self, k: usize) -> usize {
        if k == 0 || k > self.top() {
            0
        } else {
            self.d(k).rank()
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
    }
}

impl<'de> Deserialize<'de> for BasedComplex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Repr {
            dims: Vec<usize>,
            differentials: Vec<ExactMatrix>,
        }
        let r = Repr::deserialize(deserializer)?;
        // empty matrices carry no column count in JSON
        let diffs = r
            .differentials
            .into_iter()
            .enumerate()
            .map(
                |(i, m)| {
                    if m.rows() == 0 {
                        ExactMatrix::zeros(0, r.dims.get(i + 1).copied().unwrap_or(0))
                    } else {
                        m
                    }
                },
            )
            .collect();
        BasedComplex::new(r.dims, diffs).map_err(serde::de::Error::custom)
    }
}

/// Dimensions of homology `H_0, ..., H_m`.
pub fn cohomology_ranks(c: &BasedComplex) -> Vec<usize> {
    (0..=c.top()).map(|k| c.dims[k] - c.rank_d(k) - c.rank_d(k + 1)).collect()
}

/// Three pairwise-commuting square matrices of one size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorTriple {
    ops: [ExactMatrix; 3],
}

impl OperatorTriple {
    pub fn new(t1: ExactMatrix, t2: ExactMatrix, t3: ExactMatrix) -> Result<Self, Error> {
        let n = t1.rows();
        for t in [&t1, &t2, &t3] {
            if !t.is_square() || t.rows() != n {
                return Err(Error::Shape("operators must be square of one size".into()));
            }
        }
        let ops = [t1, t2, t3];
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if &ops[i] * &ops[j] != &ops[j] * &ops[i] {
                return Err(Error::NonCommuting(i + 1, j + 1));
            }
        }
        Ok(OperatorTriple { ops })
    }

    pub fn ops(&self) -> &[ExactMatrix; 3] {
        &self.ops
    }

    pub fn dim(&self) -> usize {
        self.ops[0].rows()
    }
}

/// Coordinates of `gl_n` on which an adjoint operator is taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockSelector {
    Full,
    /// Matrix units outside the diagonal blocks of the partition, ordered by
    /// (block row, block column, entry row, entry column).
    OffBlock(Partition),
}

fn selected_units(n: usize, selector: &BlockSelector) -> Result<Vec<(usize, usize)>, Error> {
    match selector {
        BlockSelector::Full => Ok((0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect()),
        BlockSelector::OffBlock(lam) => {
            if lam.n() != n {
                return Err(Error::Shape(format!("{lam} does not partition {n}")));
            }
            let mut starts = Vec::new();
            let mut s = 0;
            for &p in lam.parts() {
                starts.push((s, p));
                s += p;
            }
            let mut out = Vec::new();
            for (bi, &(si, pi)) in starts.iter().enumerate() {
                for (bj, &(sj, pj)) in starts.iter().enumerate() {
                    if bi == bj {
                        continue;
                    }
                    for a in si..si + pi {
                        for b in sj..sj + pj {
                            out.push((a, b));
                        }
                    }
                }
            }
            Ok(out)
        }
    }
}

/// Matrix of `v ↦ X⁻¹ v X - v` on the selected matrix units.
pub fn adjoint_operator(x: &ExactMatrix, selector: &BlockSelector) -> Result<ExactMatrix, Error> {
    if !x.is_square() {
        return Err(Error::Shape("monodromy must be square".into()));
    }
    let xi = x.inverse()?;
    let units = selected_units(x.rows(), selector)?;
    let mut m = ExactMatrix::zeros(units.len(), units.len());
    // (X⁻¹ E_ab X)_cd = X⁻¹_ca X_bd
    for (col, &(a, b)) in units.iter().enumerate() {
        for (row, &(c, d)) in units.iter().enumerate() {
            let mut v = &xi[(c, a)] * &x[(b, d)];
            if (a, b) == (c, d) {
                v = &v - &GaussianRational::one();
            }
            m[(row, col)] = v;
        }
    }
    Ok(m)
}

fn stack(blocks: &[Vec<Option<&ExactMatrix>>], n: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(blocks.len() * n, blocks[0].len() * n);
    for (i, row) in blocks.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            if let Some(b) = b {
                m.set_block(i * n, j * n, b);
            }
        }
    }
    m
}

/// `V -> V³ -> V³ -> V` (homological degrees 3 to 0):
/// `d_3 v = (t₃v, -t₂v, t₁v)`,
/// `d_2 (v₁,v₂,v₃) = (-t₂v₁ - t₃v₂, t₁v₁ - t₃v₃, t₁v₂ + t₂v₃)`,
/// `d_1 (v₁,v₂,v₃) = t₁v₁ + t₂v₂ + t₃v₃`.
pub fn build_t3_complex(ops: &OperatorTriple) -> BasedComplex {
    let n = ops.dim();
    let [t1, t2, t3] = ops.ops();
    let m_t2 = t2.scale(&GaussianRational::from_int(-1));
    let m_t3 = t3.scale(&GaussianRational::from_int(-1));
    let d3 = stack(&[vec![Some(t3)], vec![Some(&m_t2)], vec![Some(t1)]], n);
    let d2 = stack(
        &[vec![Some(&m_t2), Some(&m_t3), None], vec![Some(t1), None, Some(&m_t3)], vec![None, Some(t1), Some(t2)]],
        n,
    );
    let d1 = stack(&[vec![Some(t1), Some(t2), Some(t3)]], n);
    BasedComplex::new(vec![n, 3 * n, 3 * n, n], vec![d1, d2, d3]).expect("commuting operators give a complex")
}

/// Cycle representatives of a homology basis, `h_reps[k] ⊂ C_k`.
pub type HomologyReps = Vec<Vec<Vec<GaussianRational>>>;

/// Greedy pivot choice: standard basis vectors of `C_k` at the pivot
/// columns of `d_k`.
pub fn pivot_choices(c: &BasedComplex) -> Vec<Vec<Vec<GaussianRational>>> {
    (0..=c.top())
        .map(|k| {
            if k == 0 {
                return Vec::new();
            }
            c.d(k)
                .row_echelon()
                .pivots
                .iter()
                .map(|&j| {
                    let mut e = vec![GaussianRational::zero(); c.dims[k]];
                    e[j] = GaussianRational::one();
                    e
                })
                .collect()
        })
        .collect()
}

pub fn torsion(c: &BasedComplex, h_reps: Option<&HomologyReps>) -> Result<GaussianRational, Error> {
    torsion_with_choices(c, h_reps, &pivot_choices(c))
}

/// Torsion with explicit `b_k` (vectors of `C_k` whose images span `im d_k`).
pub fn torsion_with_choices(
    c: &BasedComplex,
    h_reps: Option<&HomologyReps>,
    b: &[Vec<Vec<GaussianRational>>],
) -> Result<GaussianRational, Error> {
    let m = c.top();
    let ranks = cohomology_ranks(c);
    let empty: HomologyReps = vec![Vec::new(); m + 1];
    let h = match h_reps {
        Some(h) => {
            if h.len() != m + 1 {
                return Err(Error::Shape(format!("expected representatives for {} degrees", m + 1)));
            }
            for k in 0..=m {
                if h[k].len() != ranks[k] {
                    return Err(Error::Shape(format!(
                        "H_{k} has dimension {}, got {} representatives",
                        ranks[k],
                        h[k].len()
                    )));
                }
                for v in &h[k] {
                    if v.len() != c.dims[k] {
                        return Err(Error::Shape(format!("representative in C_{k} has length {}", v.len())));
                    }
                    if k > 0 && !c.d(k).mul_vec(v).iter().all(GaussianRational::is_zero) {
                        return Err(Error::Domain(format!("representative in C_{k} is not a cycle")));
                    }
                }
            }
            h
        }
        None => {
            if ranks.iter().any(|&r| r != 0) {
                return Err(Error::NotAcyclic);
            }
            &empty
        }
    };
    if b.len() != m + 1 {
        return Err(Error::Shape("one b-choice per degree".into()));
    }

    let mut tau = GaussianRational::one();
    for k in 0..=m {
        let mut cols: Vec<Vec<GaussianRational>> = Vec::with_capacity(c.dims[k]);
        if k < m {
            let d = c.d(k + 1);
            for v in &b[k + 1] {
                cols.push(d.mul_vec(v));
            }
        }
        cols.extend(h[k].iter().cloned());
        if b[k].len() != c.rank_d(k) {
            return Err(Error::Shape(format!("b_{k} must have {} vectors", c.rank_d(k))));
        }
        cols.extend(b[k].iter().cloned());
        if cols.len() != c.dims[k] {
            return Err(Error::Shape(format!("C_{k}: {} basis vectors for dimension {}", cols.len(), c.dims[k])));
        }
        if cols.is_empty() {
            continue;
        }
        let det = ExactMatrix::from_columns(&cols, c.dims[k]).det()?;
        if det.is_zero() {
            return Err(Error::Domain(format!("the chosen vectors do not form a basis of C_{k}")));
        }
        tau = if k % 2 == 1 { &tau * &det } else { &tau / &det };
    }

    // N(C) = Σ α_k β_k with partial sums of dim C_j and dim H_j
    let (mut alpha, mut beta, mut sign) = (0usize, 0usize, 0usize);
    for (dim, rank) in c.dims.iter().zip(&ranks) {
        alpha += dim;
        beta += rank;
        sign += alpha * beta;
    }
    if sign % 2 == 1 {
        tau = -tau;
    }
    Ok(tau)
}

/// `([y,z], [z,x], [x,y])`.
pub fn potential_gradient(
    x: &ExactMatrix,
    y: &ExactMatrix,
    z: &ExactMatrix,
) -> Result<(ExactMatrix, ExactMatrix, ExactMatrix), Error> {
    let n = x.rows();
    for m in [x, y, z] {
        if !m.is_square() || m.rows() != n {
            return Err(Error::Shape("x, y, z must be square of one size".into()));
        }
    }
    let br = |a: &ExactMatrix, b: &ExactMatrix| &(a * b) - &(b * a);
    Ok((br(y, z), br(z, x), br(x, y)))
}

/// Seeded generators for complexes and monodromy data.
pub mod random {
    use super::*;

    pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
        let num = rng.gen_range(-9i64..=9);
        Rational::new(num, rng.gen_range(1i64..=5))
    }

    pub fn invertible<R: Rng>(n: usize, rng: &mut R) -> ExactMatrix {
        loop {
            let rows =
                (0..n).map(|_| (0..n).map(|_| GaussianRational::from_int(rng.gen_range(-3..=3))).collect()).collect();
            let m = ExactMatrix::from_rows(rows).unwrap();
            if n == 0 || !m.det().unwrap().is_zero() {
                return m;
            }
        }
    }

    /// A complex with `rank d_k = ranks[k-1]` and `dim H_k = homology[k]`,
    /// conjugated by random invertible matrices, with cycle representatives.
    pub fn complex<R: Rng>(ranks: &[usize], homology: &[usize], rng: &mut R) -> (BasedComplex, HomologyReps) {
        let m = ranks.len();
        assert_eq!(homology.len(), m + 1);
        let r = |k: usize| if k == 0 || k > m { 0 } else { ranks[k - 1] };
        // C_k = R_k ⊕ H_k ⊕ R_{k+1}; d_k maps R_k onto the last block of C_{k-1}
        let dims: Vec<usize> = (0..=m).map(|k| r(k) + homology[k] + r(k + 1)).collect();
        let p: Vec<ExactMatrix> = dims.iter().map(|&d| invertible(d, rng)).collect();
        let p_inv: Vec<ExactMatrix> = p.iter().map(|q| q.inverse().unwrap()).collect();
        let diffs = (1..=m)
            .map(|k| {
                let mut j = ExactMatrix::zeros(dims[k - 1], dims[k]);
                let off = r(k - 1) + homology[k - 1];
                for i in 0..r(k) {
                    j[(off + i, i)] = GaussianRational::one();
                }
                &(&p[k - 1] * &j) * &p_inv[k]
            })
            .collect();
        let reps = (0..=m).map(|k| (0..homology[k]).map(|i| p[k].column(r(k) + i)).collect()).collect();
        (BasedComplex::new(dims, diffs).unwrap(), reps)
    }

    /// A different valid `b`: an invertible recombination of the pivot
    /// choice plus kernel vectors.
    pub fn alternative_choices<R: Rng>(c: &BasedComplex, rng: &mut R) -> Vec<Vec<Vec<GaussianRational>>> {
        let base = pivot_choices(c);
        base.iter()
            .enumerate()
            .map(|(k, bk)| {
                if bk.is_empty() {
                    return Vec::new();
                }
                let mix = invertible(bk.len(), rng);
                let kernel = c.d(k).kernel();
                (0..bk.len())
                    .map(|i| {
                        let mut v = vec![GaussianRational::zero(); c.dims()[k]];
                        for (j, bj) in bk.iter().enumerate() {
                            let f = &mix[(i, j)];
                            for (x, y) in v.iter_mut().zip(bj) {
                                *x = &*x + &(f * y);
                            }
                        }
                        for kv in &kernel {
                            let f = GaussianRational::real(small_rational(rng));
                            for (x, y) in v.iter_mut().zip(kv) {
                                *x = &*x + &(&f * y);
                            }
                        }
                        v
                    })
                    .collect()
            })
            .collect()
    }

    /// Block-scalar diagonal matrix with pairwise-distinct nonzero block values.
    pub fn centre_element<R: Rng>(partition: &Partition, rng: &mut R) -> ExactMatrix {
        let mut vals: Vec<Rational> = Vec::new();
        while vals.len() < partition.len() {
            let v = Rational::new(
                rng.gen_range(1i64..=40) * if rng.gen_bool(0.5) { 1 } else { -1 },
                rng.gen_range(1i64..=7),
            );
            if !vals.contains(&v) {
                vals.push(v);
            }
        }
        let diag: Vec<GaussianRational> = vals
            .iter()
            .zip(partition.parts())
            .flat_map(|(v, &m)| std::iter::repeat_n(GaussianRational::real(v.clone()), m))
            .collect();
        ExactMatrix::diagonal(&diag)
    }

    /// Commuting triple of adjoint operators on `u_- ⊕ u_+` for a generic
    /// centre triple of the Levi of `partition`.
    pub fn off_block_triple<R: Rng>(partition: &Partition, rng: &mut R) -> OperatorTriple {
        let sel = BlockSelector::OffBlock(partition.clone());
        let [a, b, c] = std::array::from_fn(|_| adjoint_operator(&centre_element(partition, rng), &sel).unwrap());
        OperatorTriple::new(a, b, c).unwrap()
    }

    /// Commuting triple of polynomials in one random matrix.
    pub fn commuting_triple<R: Rng>(n: usize, rng: &mut R) -> OperatorTriple {
        let rows = (0..n).map(|_| (0..n).map(|_| GaussianRational::real(small_rational(rng))).collect()).collect();
        let a = ExactMatrix::from_rows(rows).unwrap();
        let poly = |rng: &mut R| {
            let (c0, c1, c2) = (small_rational(rng), small_rational(rng), small_rational(rng));
            let sq = &a * &a;
            let id = ExactMatrix::identity(n).scale(&GaussianRational::real(c0));
            &(&id + &a.scale(&GaussianRational::real(c1))) + &sq.scale(&GaussianRational::real(c2))
        };
        let (t1, t2, t3) = (poly(rng), poly(rng), poly(rng));
        OperatorTriple::new(t1, t2, t3).unwrap()
    }
}

/// One entry of the orientation suite.
#[derive(Clone, Debug, Serialize)]
pub struct OrientationSample {
    pub n: usize,
    pub partition: Partition,
    pub torsion: GaussianRational,
}

/// Torsion of the `u_±`-complex for `samples` generic centre triples of
/// every nontrivial Levi of `GL_n`.
pub fn orientation_suite<R: Rng>(n: usize, samples: usize, rng: &mut R) -> Result<Vec<OrientationSample>, Error> {
    let mut out = Vec::new();
    for lam in crate::group_data::partitions_of(n) {
        if lam.len() < 2 {
            continue;
        }
        for _ in 0..samples {
            let triple = random::off_block_triple(&lam, rng);
            let t = torsion(&build_t3_complex(&triple), None)?;
            out.push(OrientationSample { n, partition: lam.clone(), torsion: t });
        }
    }
    Ok(out)
}
