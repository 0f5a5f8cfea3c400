//! The exponential map on semisimple data: eigenvalues `a + 2πi·s` with
//! `a ∈ ℚ(i)` and `s ∈ ℚ`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exact::{GaussianRational, Rational};
use crate::group_data::Partition;
use crate::moduli::TorusElem;

/// `a + 2πi·s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LieEigenvalue {
    pub a: GaussianRational,
    pub s: Rational,
}

impl LieEigenvalue {
    pub fn new(a: GaussianRational, s: Rational) -> Self {
        LieEigenvalue { a, s }
    }

    /// `2πi·s`.
    pub fn imaginary(s: Rational) -> Self {
        LieEigenvalue { a: GaussianRational::zero(), s }
    }

    pub fn sub(&self, other: &LieEigenvalue) -> LieEigenvalue {
        LieEigenvalue { a: &self.a - &other.a, s: &self.s - &other.s }
    }

    /// `exp` for purely `2πi·ℚ` values.
    pub fn exp_unit(&self) -> Result<TorusElem, Error> {
        if !self.a.is_zero() {
            return Err(Error::Domain("exp leaves the exact lattice unless a = 0".into()));
        }
        TorusElem::new(Rational::one(), self.s.clone())
    }
}

pub fn exp_equal(x: &LieEigenvalue, y: &LieEigenvalue) -> bool {
    x.a == y.a && (&x.s - &y.s).is_integer()
}

pub fn is_etale(e: &[LieEigenvalue]) -> bool {
    e.iter().enumerate().all(|(i, x)| e[i + 1..].iter().all(|y| !(exp_equal(x, y) && x != y)))
}

/// Canonical partition from the class sizes of an equivalence relation.
fn class_partition(e: &[LieEigenvalue], eq: impl Fn(&LieEigenvalue, &LieEigenvalue) -> bool) -> Partition {
    let mut reps: Vec<(&LieEigenvalue, usize)> = Vec::new();
    for x in e {
        match reps.iter_mut().find(|(r, _)| eq(r, x)) {
            Some(slot) => slot.1 += 1,
            None => reps.push((x, 1)),
        }
    }
    Partition::new(reps.into_iter().map(|(_, m)| m).collect()).expect("class sizes are positive")
}

pub fn eig_partition(e: &[LieEigenvalue]) -> Partition {
    class_partition(e, |x, y| x == y)
}

pub fn exp_class_partition(e: &[LieEigenvalue]) -> Partition {
    class_partition(e, exp_equal)
}

pub fn check_stabiliser_preservation(e: &[LieEigenvalue]) -> bool {
    eig_partition(e) == exp_class_partition(e)
}

/// Principal logarithm of a unit-circle element.
pub fn unit_log(t: &TorusElem) -> Result<LieEigenvalue, Error> {
    if !t.r.is_one() {
        return Err(Error::Domain(format!("unit_log needs magnitude 1, got {}", t.r)));
    }
    Ok(LieEigenvalue::imaginary(t.theta.fract_positive()))
}

/// Random list with small entries; collisions are frequent on purpose.
pub fn random_eigen_list<R: Rng>(n: usize, rng: &mut R) -> Vec<LieEigenvalue> {
    (0..n)
        .map(|_| {
            let a = if rng.gen_bool(0.6) {
                GaussianRational::zero()
            } else {
                GaussianRational::new(
                    Rational::new(rng.gen_range(-2i64..=2), rng.gen_range(1i64..=2)),
                    Rational::from_integer(rng.gen_range(-1i64..=1)),
                )
            };
            LieEigenvalue::new(a, Rational::new(rng.gen_range(-4i64..=4), rng.gen_range(1i64..=3)))
        })
        .collect()
}
