//! Molien series for the relative Weyl group acting on
//! `H•(Z(L)^3) ⊗ H•(BZ(L))`.
//!
//! Degree-1 classes are odd, so a permutation σ contributes `det(1 + tσ)`
//! per copy of the exterior generators and `1/det(1 - t²σ)` for the
//! polynomial generators.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exact::{mat_det, ExactMatrix, GaussianRational, GradedSeries, Rational};
use crate::group_data::{
    component_action, fixed_components, levi_descriptor, weyl_cycle_types, weyl_group_elements, ComponentGroupData,
    CycleType, GroupKind, LeviDescriptor, Partition,
};

/// Whether the super-parity of a class is read after (`Shifted`) or before
/// (`Unshifted`) the odd shift by `3·dim Z`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityConvention {
    #[default]
    Shifted,
    Unshifted,
}

impl ParityConvention {
    pub const BOTH: [ParityConvention; 2] = [ParityConvention::Shifted, ParityConvention::Unshifted];

    pub fn as_str(self) -> &'static str {
        match self {
            ParityConvention::Shifted => "shifted",
            ParityConvention::Unshifted => "unshifted",
        }
    }
}

impl fmt::Display for ParityConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ParityConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "shifted" => Ok(ParityConvention::Shifted),
            "unshifted" => Ok(ParityConvention::Unshifted),
            _ => Err(Error::Parse(format!("unknown parity convention {s:?}"))),
        }
    }
}

/// Which representation of `W` the generators span.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorRep {
    /// Permutation representation on the `l` blocks.
    Permutation,
    /// Permutation representation minus the trivial summand.
    PermutationMinusTrivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepSpec {
    pub kind: GroupKind,
    pub partition: Partition,
    /// Degree-2 generators.
    pub poly_part: GeneratorRep,
    /// Three copies of degree-1 generators, absent for the additive group.
    pub ext_part: Option<GeneratorRep>,
    pub component_part: Option<ComponentGroupData>,
    pub shift: i64,
    pub parity: ParityConvention,
}

pub fn rep_spec(levi: &LeviDescriptor, parity: ParityConvention) -> Result<RepSpec, Error> {
    let l = levi.partition.len();
    if l == 0 {
        return Err(Error::Domain("empty partition".into()));
    }
    let (poly_part, ext_part, component_part) = match levi.kind {
        GroupKind::Gl => (GeneratorRep::Permutation, Some(GeneratorRep::Permutation), None),
        GroupKind::GlAdditive => (GeneratorRep::Permutation, None, None),
        GroupKind::Sl => (
            GeneratorRep::PermutationMinusTrivial,
            Some(GeneratorRep::PermutationMinusTrivial),
            Some(component_action(&levi.partition)?),
        ),
        GroupKind::Pgl => (GeneratorRep::PermutationMinusTrivial, Some(GeneratorRep::PermutationMinusTrivial), None),
    };
    Ok(RepSpec {
        kind: levi.kind,
        partition: levi.partition.clone(),
        poly_part,
        ext_part,
        component_part,
        shift: -2 * levi.dim_centre as i64,
        parity,
    })
}

/// Lowest degree of the default expansion window and its top, `shift + 40`.
pub fn default_window(levi: &LeviDescriptor) -> (i64, i64) {
    let shift = -2 * levi.dim_centre as i64;
    (shift, shift + 40)
}

fn int_poly(coeffs: &[i64]) -> GradedSeries {
    GradedSeries::polynomial_i64(0, coeffs)
}

/// `1 - (-t)^c`, the exterior trace of a `c`-cycle.
fn ext_cycle(c: usize) -> GradedSeries {
    let mut v = vec![0i64; c + 1];
    v[0] = 1;
    v[c] = if c.is_multiple_of(2) { -1 } else { 1 };
    int_poly(&v)
}

/// `(1 - (-t)^c) / (1 + t) = Σ_{i<c} (-t)^i`.
fn ext_cycle_reduced(c: usize) -> GradedSeries {
    let v: Vec<i64> = (0..c).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
    int_poly(&v)
}

/// Graded trace of a class representative on the Levi building block,
/// multiplied by `t^shift` and known through degree `max_deg`.
pub fn cycle_factor(tau: &CycleType, spec: &RepSpec, max_deg: i64) -> Result<GradedSeries, Error> {
    if max_deg < spec.shift {
        return Err(Error::Domain(format!("window top {max_deg} lies below the shift {}", spec.shift)));
    }
    let top = max_deg - spec.shift;
    let cycles = tau.cycle_lengths();
    if cycles.iter().sum::<usize>() != spec.partition.len() {
        return Err(Error::Domain(format!("cycle type does not act on the blocks of {}", spec.partition)));
    }

    let mut poly = GradedSeries::one().truncated(top);
    for &c in &cycles {
        poly = poly.mul(&GradedSeries::geometric(&Rational::one(), 2 * c as i64, top));
    }
    if spec.poly_part == GeneratorRep::PermutationMinusTrivial {
        poly = poly.mul(&int_poly(&[1, 0, -1]));
    }

    let mut out = poly;
    if let Some(ext) = spec.ext_part {
        let mut e = GradedSeries::one();
        for (k, &c) in cycles.iter().enumerate() {
            let f = if k == 0 && ext == GeneratorRep::PermutationMinusTrivial {
                ext_cycle_reduced(c)
            } else {
                ext_cycle(c)
            };
            e = e.mul(&f);
        }
        out = out.mul(&e.pow(3));
    }

    let mut scalar = Rational::one();
    if spec.parity == ParityConvention::Unshifted {
        scalar = Rational::from(tau.sign());
    }
    if let Some(data) = &spec.component_part {
        scalar = &scalar * &Rational::from(fixed_components(data, tau)? as i64);
    }
    Ok(out.scale(&scalar).shift(spec.shift))
}

/// Poincaré series of the `W_{L_λ}`-invariants, known through `max_deg`.
pub fn graded_invariants(levi: &LeviDescriptor, parity: ParityConvention, max_deg: i64) -> Result<GradedSeries, Error> {
    let spec = rep_spec(levi, parity)?;
    let mut acc: Option<GradedSeries> = None;
    for tau in weyl_cycle_types(&levi.partition) {
        let term = cycle_factor(&tau, &spec, max_deg)?.scale(&Rational::from(tau.class_size as i64));
        acc = Some(match acc {
            None => term,
            Some(s) => s.add(&term),
        });
    }
    let total = acc.ok_or_else(|| Error::Internal("no conjugacy classes".into()))?;
    Ok(total.scale(&Rational::new(1, levi.weyl_order as i64)))
}

/// One character value per cycle type (in `weyl_cycle_types` order).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterValue {
    pub cycle_type: CycleType,
    pub value: i64,
}

/// Character of `W_{L_λ}` on the polynomial generators' part in degree
/// `(d - 2)/2` (generators counted once), i.e. the coefficient of
/// `t^(d-2)` in `∏_c 1/(1 - t^{2c})`.
pub fn character_of_degree(partition: &Partition, d: i64) -> Result<Vec<CharacterValue>, Error> {
    if d % 2 != 0 || d < 2 {
        return Err(Error::Domain(format!("degree {d} must be even and at least 2")));
    }
    let top = d - 2;
    weyl_cycle_types(partition)
        .into_iter()
        .map(|tau| {
            let mut s = GradedSeries::one().truncated(top);
            for c in tau.cycle_lengths() {
                s = s.mul(&GradedSeries::geometric(&Rational::one(), 2 * c as i64, top));
            }
            let v = s.coeff(top)?;
            let value = v.to_i64().ok_or_else(|| Error::Internal("non-integral trace".into()))?;
            Ok(CharacterValue { cycle_type: tau, value })
        })
        .collect()
}

/// `⟨χ, ψ⟩ = (1/|W|) Σ |class|·χ·ψ` over the classes of `W_{L_λ}`.
pub fn character_inner_product(partition: &Partition, chi: &[i64], psi: &[i64]) -> Result<Rational, Error> {
    let classes = weyl_cycle_types(partition);
    if chi.len() != classes.len() || psi.len() != classes.len() {
        return Err(Error::Shape("one character value per class".into()));
    }
    let total: i64 = classes.iter().zip(chi.iter().zip(psi)).map(|(t, (a, b))| t.class_size as i64 * a * b).sum();
    Ok(Rational::new(total, crate::group_data::weyl_order(partition) as i64))
}

const BRUTEFORCE_LIMIT: u64 = 10_000;

/// Coefficients of `det(I + x·M)` as a polynomial in `x`, by evaluation at
/// `x = 0..=dim` and Lagrange interpolation.
fn det_polynomial(m: &ExactMatrix) -> Result<Vec<Rational>, Error> {
    let n = m.rows();
    let values: Vec<Rational> = (0..=n as i64)
        .map(|x| {
            let a = &ExactMatrix::identity(n) + &m.scale(&GaussianRational::from_int(x));
            mat_det(&a).map(|d| d.re)
        })
        .collect::<Result<_, _>>()?;
    let mut coeffs = vec![Rational::zero(); n + 1];
    for (i, yi) in values.iter().enumerate() {
        // basis polynomial ∏_{j≠i} (x - j)/(i - j)
        let mut basis = vec![Rational::one()];
        let mut denom = Rational::one();
        for j in 0..=n {
            if j == i {
                continue;
            }
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= &(b * &Rational::from(j as i64));
            }
            basis = next;
            denom = &denom * &Rational::from(i as i64 - j as i64);
        }
        let f = yi / &denom;
        for (k, b) in basis.iter().enumerate() {
            coeffs[k] += &(b * &f);
        }
    }
    Ok(coeffs)
}

/// Matrix of a block permutation on the generators: the full permutation
/// matrix, or its action on the basis `e_i - e_l` of the sum-zero subspace.
fn generator_matrix(perm: &[usize], rep: GeneratorRep) -> ExactMatrix {
    let l = perm.len();
    match rep {
        GeneratorRep::Permutation => {
            let mut m = ExactMatrix::zeros(l, l);
            for (i, &p) in perm.iter().enumerate() {
                m[(p, i)] = GaussianRational::one();
            }
            m
        }
        GeneratorRep::PermutationMinusTrivial => {
            let d = l - 1;
            let mut m = ExactMatrix::zeros(d, d);
            let last = perm[d];
            for (i, &p) in perm.iter().enumerate().take(d) {
                if p != d {
                    m[(p, i)] = &m[(p, i)] + &GaussianRational::one();
                }
                if last != d {
                    m[(last, i)] = &m[(last, i)] - &GaussianRational::one();
                }
            }
            m
        }
    }
}

/// Fixed points on `(Z/g)^3` of a block permutation, where the class `k`
/// of the component group is read through the functional `k·λ/g`.
fn bruteforce_fixed_components(partition: &Partition, perm: &[usize]) -> u64 {
    let g = partition.gcd() as u64;
    let parts = partition.parts();
    let fixed_1d = (0..g)
        .filter(|&k| (0..parts.len()).all(|i| (k * parts[perm[i]] as u64 / g) % g == (k * parts[i] as u64 / g) % g))
        .count() as u64;
    fixed_1d.pow(3)
}

/// Same series as [`graded_invariants`], by summing over every element of
/// `W_{L_λ}` with explicit matrices.
pub fn molien_bruteforce(
    kind: GroupKind,
    partition: &Partition,
    parity: ParityConvention,
    max_deg: i64,
) -> Result<GradedSeries, Error> {
    let levi = levi_descriptor(kind, partition);
    if levi.weyl_order > BRUTEFORCE_LIMIT {
        return Err(Error::GroupTooLarge(levi.weyl_order));
    }
    let spec = rep_spec(&levi, parity)?;
    if max_deg < spec.shift {
        return Err(Error::Domain(format!("window top {max_deg} lies below the shift {}", spec.shift)));
    }
    let top = max_deg - spec.shift;
    let mut acc: Option<GradedSeries> = None;
    for perm in weyl_group_elements(partition) {
        let p = generator_matrix(&perm, spec.poly_part);
        // 1/det(I - sP) with s = t²
        let q: Vec<Rational> = det_polynomial(&p.scale(&GaussianRational::from_int(-1)))?;
        let denom = GradedSeries::polynomial(0, q).substitute_power(2).truncated(top);
        let mut term = denom.reciprocal()?;
        if let Some(rep) = spec.ext_part {
            let e = GradedSeries::polynomial(0, det_polynomial(&generator_matrix(&perm, rep))?);
            term = term.mul(&e.pow(3));
        }
        let mut scalar = Rational::one();
        if parity == ParityConvention::Unshifted {
            scalar = mat_det(&p)?.re;
        }
        if kind == GroupKind::Sl {
            scalar = &scalar * &Rational::from(bruteforce_fixed_components(partition, &perm) as i64);
        }
        let term = term.scale(&scalar);
        acc = Some(match acc {
            None => term,
            Some(s) => s.add(&term),
        });
    }
    let total = acc.ok_or_else(|| Error::Internal("empty group".into()))?;
    Ok(total.scale(&Rational::new(1, levi.weyl_order as i64)).shift(spec.shift))
}
