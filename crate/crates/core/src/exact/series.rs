//! Truncated Laurent series with explicit validity windows.
//!
//! A [`GradedSeries`] knows its coefficients exactly for every degree up to
//! `max` (inclusive); below `min` every coefficient is zero. A series with
//! `max == None` is an exact Laurent polynomial.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;
use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedSeries {
    min: i64,
    coeffs: Vec<Rational>,
    max: Option<i64>,
}

fn lowest(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl GradedSeries {
    pub fn zero() -> Self {
        GradedSeries { min: 0, coeffs: Vec::new(), max: None }
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0)
    }

    pub fn monomial(c: Rational, deg: i64) -> Self {
        Self::polynomial(deg, vec![c])
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    /// Exact Laurent polynomial `Σ coeffs[k] t^(min+k)`.
    pub fn polynomial(min: i64, coeffs: Vec<Rational>) -> Self {
        GradedSeries { min, coeffs, max: None }.normalized()
    }

    pub fn polynomial_i64(min: i64, coeffs: &[i64]) -> Self {
        Self::polynomial(min, coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    /// Series known on `[min, max]`; missing trailing coefficients are zero.
    pub fn truncated_from(min: i64, coeffs: Vec<Rational>, max: i64) -> Self {
        GradedSeries { min, coeffs, max: Some(max) }.normalized()
    }

    /// `O(t^deg)`: nothing known from `deg` on.
    pub fn big_o(deg: i64) -> Self {
        GradedSeries { min: deg, coeffs: Vec::new(), max: Some(deg - 1) }
    }

    /// Geometric series `1/(1 - c t^step)` known through degree `max`.
    pub fn geometric(c: &Rational, step: i64, max: i64) -> Self {
        assert!(step > 0, "geometric step must be positive");
        let mut coeffs = Vec::new();
        let mut pow = Rational::one();
        for d in 0..=max.max(-1) {
            if d % step == 0 {
                coeffs.push(pow.clone());
                pow = &pow * c;
            } else {
                coeffs.push(Rational::zero());
            }
        }
        Self::truncated_from(0, coeffs, max)
    }

    fn normalized(mut self) -> Self {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        self.coeffs.drain(..lead);
        self.min += lead as i64;
        match self.max {
            None => {
                while self.coeffs.last().is_some_and(Rational::is_zero) {
                    self.coeffs.pop();
                }
                if self.coeffs.is_empty() {
                    self.min = 0;
                }
            }
            Some(max) => {
                if self.coeffs.is_empty() || self.min > max + 1 {
                    self.min = max + 1;
                    self.coeffs.clear();
                }
                let len = (max - self.min + 1) as usize;
                self.coeffs.resize(len, Rational::zero());
            }
        }
        self
    }

    pub fn is_exact(&self) -> bool {
        self.max.is_none()
    }

    /// Lowest degree that may be nonzero.
    pub fn min_deg(&self) -> i64 {
        self.min
    }

    /// Highest degree with a known coefficient; `None` for exact polynomials.
    pub fn max_deg(&self) -> Option<i64> {
        self.max
    }

    /// Highest degree with a stored (possibly zero) coefficient.
    pub fn top_stored(&self) -> i64 {
        self.min + self.coeffs.len() as i64 - 1
    }

    /// Degree of the first nonzero coefficient.
    pub fn order(&self) -> Option<i64> {
        self.coeffs.first().map(|_| self.min)
    }

    pub fn coeff(&self, deg: i64) -> Result<Rational, Error> {
        if let Some(max) = self.max {
            if deg > max {
                return Err(Error::OutsideWindow { degree: deg, valid_to: max });
            }
        }
        if deg < self.min {
            return Ok(Rational::zero());
        }
        Ok(self.coeffs.get((deg - self.min) as usize).cloned().unwrap_or_default())
    }

    /// Coefficients for `lo..=hi`, failing if the window does not cover `hi`.
    pub fn coeffs_between(&self, lo: i64, hi: i64) -> Result<Vec<Rational>, Error> {
        (lo..=hi).map(|d| self.coeff(d)).collect()
    }

    /// Stored coefficients `(degree, value)` including interior zeros.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs.iter().enumerate().map(move |(k, c)| (self.min + k as i64, c))
    }

    pub fn is_zero_on_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Forget everything above `max`.
    pub fn truncated(&self, max: i64) -> Self {
        let max = lowest(self.max, Some(max)).unwrap();
        GradedSeries { min: self.min, coeffs: self.coeffs.clone(), max: Some(max) }.normalized()
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        GradedSeries { min: self.min + k, coeffs: self.coeffs.clone(), max: self.max.map(|m| m + k) }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        GradedSeries { min: self.min, coeffs: self.coeffs.iter().map(|x| x * c).collect(), max: self.max }.normalized()
    }

    /// Substitute `t -> -t`.
    pub fn negate_variable(&self) -> Self {
        let coeffs = self.terms().map(|(d, c)| if d % 2 == 0 { c.clone() } else { -c }).collect();
        GradedSeries { min: self.min, coeffs, max: self.max }
    }

    /// Substitute `t -> t^k` for `k >= 1`.
    pub fn substitute_power(&self, k: i64) -> Self {
        assert!(k >= 1, "substitution exponent must be positive");
        let mut coeffs = vec![Rational::zero(); ((self.coeffs.len().max(1) - 1) as i64 * k + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k as usize] = c.clone();
        }
        if self.coeffs.is_empty() {
            coeffs.clear();
        }
        // a window known through M becomes known through k*M + (k-1)
        let max = self.max.map(|m| k * m + k - 1);
        GradedSeries { min: self.min * k, coeffs, max }.normalized()
    }

    pub fn add(&self, other: &GradedSeries) -> GradedSeries {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &GradedSeries) -> GradedSeries {
        self.combine(other, true)
    }

    fn combine(&self, other: &GradedSeries, subtract: bool) -> GradedSeries {
        let max = lowest(self.max, other.max);
        let lo = match (self.coeffs.is_empty(), other.coeffs.is_empty()) {
            (true, false) => other.min,
            (false, true) => self.min,
            _ => self.min.min(other.min),
        };
        let hi = self.top_stored().max(other.top_stored());
        let hi = max.map_or(hi, |m| hi.min(m));
        let mut coeffs = Vec::new();
        for d in lo..=hi {
            let a = self.stored(d);
            let b = other.stored(d);
            coeffs.push(if subtract { a - b } else { a + b });
        }
        GradedSeries { min: lo, coeffs, max }.normalized()
    }

    fn stored(&self, d: i64) -> Rational {
        if d < self.min {
            return Rational::zero();
        }
        self.coeffs.get((d - self.min) as usize).cloned().unwrap_or_default()
    }

    /// Product; the result is known through
    /// `min(a.max + b.min, b.max + a.min)`.
    pub fn mul(&self, other: &GradedSeries) -> GradedSeries {
        let min = self.min + other.min;
        let max = lowest(self.max.map(|m| m + other.min), other.max.map(|m| m + self.min));
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return GradedSeries { min, coeffs: Vec::new(), max }.normalized();
        }
        let top = self.top_stored() + other.top_stored();
        let top = max.map_or(top, |m| top.min(m));
        if top < min {
            return GradedSeries { min, coeffs: Vec::new(), max }.normalized();
        }
        let len = (top - min + 1) as usize;
        let mut coeffs = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    coeffs[i + j] += &(a * b);
                }
            }
        }
        GradedSeries { min, coeffs, max }.normalized()
    }

    pub fn pow(&self, k: u32) -> GradedSeries {
        let mut acc = GradedSeries::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse. With `v` the order and `M` the window top the
    /// result is known through `M - 2v`. Exact polynomials other than
    /// monomials must be truncated first.
    pub fn reciprocal(&self) -> Result<GradedSeries, Error> {
        let Some(v) = self.order() else {
            return Err(Error::Series("reciprocal of a series with no nonzero coefficient".into()));
        };
        let lead = self.coeffs[0].clone();
        let max = match self.max {
            Some(m) => m,
            None if self.coeffs.len() == 1 => return Ok(GradedSeries::monomial(lead.recip(), -v)),
            None => return Err(Error::Series("reciprocal of a non-monomial polynomial needs a truncation".into())),
        };
        let n_known = (max - v + 1) as usize; // coefficients of the unit part
        let inv_lead = lead.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(n_known);
        for k in 0..n_known {
            let mut acc = if k == 0 { Rational::one() } else { Rational::zero() };
            for j in 1..=k.min(self.coeffs.len() - 1) {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc -= &(a * &out[k - j]);
                }
            }
            out.push(&acc * &inv_lead);
        }
        Ok(GradedSeries { min: -v, coeffs: out, max: Some(max - 2 * v) }.normalized())
    }

    /// Same coefficients on `lo..=hi`; both windows must cover `hi`.
    pub fn agrees_on(&self, other: &GradedSeries, lo: i64, hi: i64) -> Result<bool, Error> {
        Ok(self.coeffs_between(lo, hi)? == other.coeffs_between(lo, hi)?)
    }

    pub fn has_nonnegative_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer() && !c.is_negative())
    }

    /// Sum of all stored coefficients (the total dimension for polynomials).
    pub fn coefficient_sum(&self) -> Rational {
        self.coeffs.iter().cloned().sum()
    }
}

pub fn series_product(a: &GradedSeries, b: &GradedSeries) -> GradedSeries {
    a.mul(b)
}

pub fn series_reciprocal(a: &GradedSeries) -> Result<GradedSeries, Error> {
    a.reciprocal()
}

impl fmt::Display for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || d == 0;
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match d {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{d}")?,
            }
        }
        if let Some(max) = self.max {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "O(t^{})", max + 1)?;
        } else if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct UniRepr {
    vars: u8,
    min: i64,
    max: i64,
    coeffs: Vec<Rational>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    exact: bool,
}

impl Serialize for GradedSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        UniRepr {
            vars: 1,
            min: self.min,
            max: self.max.unwrap_or_else(|| self.top_stored()),
            coeffs: self.coeffs.clone(),
            exact: self.max.is_none(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GradedSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = UniRepr::deserialize(deserializer)?;
        if r.vars != 1 {
            return Err(D::Error::custom("expected a univariate series"));
        }
        if r.coeffs.len() as i64 > r.max - r.min + 1 {
            return Err(D::Error::custom("more coefficients than the window holds"));
        }
        Ok(if r.exact {
            GradedSeries::polynomial(r.min, r.coeffs)
        } else {
            GradedSeries::truncated_from(r.min, r.coeffs, r.max)
        })
    }
}

/// Series in `x` (degrees `0..=max_x`) whose coefficients are univariate
/// series in `t`, each with its own window.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BivariateSeries {
    comps: Vec<GradedSeries>,
}

impl BivariateSeries {
    pub fn one(max_x: usize) -> Self {
        let mut comps = vec![GradedSeries::zero(); max_x + 1];
        comps[0] = GradedSeries::one();
        BivariateSeries { comps }
    }

    pub fn from_components(comps: Vec<GradedSeries>) -> Self {
        assert!(!comps.is_empty(), "bivariate series needs at least the x^0 component");
        BivariateSeries { comps }
    }

    pub fn max_x(&self) -> usize {
        self.comps.len() - 1
    }

    /// Coefficient of `x^n` as a series in `t`.
    pub fn x_coeff(&self, n: usize) -> Result<&GradedSeries, Error> {
        self.comps.get(n).ok_or_else(|| Error::Series(format!("x^{n} lies beyond the x-truncation {}", self.max_x())))
    }

    pub fn components(&self) -> &[GradedSeries] {
        &self.comps
    }

    pub fn mul(&self, other: &BivariateSeries) -> BivariateSeries {
        let nx = self.max_x().min(other.max_x());
        let comps = (0..=nx)
            .map(|n| {
                let mut acc: Option<GradedSeries> = None;
                for i in 0..=n {
                    let (a, b) = (&self.comps[i], &other.comps[n - i]);
                    // exact zeros contribute nothing and impose no window
                    if (a.is_exact() && a.is_zero_on_window()) || (b.is_exact() && b.is_zero_on_window()) {
                        continue;
                    }
                    let p = a.mul(b);
                    acc = Some(match acc {
                        None => p,
                        Some(s) => s.add(&p),
                    });
                }
                acc.unwrap_or_else(GradedSeries::zero)
            })
            .collect();
        BivariateSeries { comps }
    }
}

impl Serialize for BivariateSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct BiRepr<'a> {
            vars: u8,
            min: i64,
            max: i64,
            coeffs: &'a [GradedSeries],
        }
        BiRepr { vars: 2, min: 0, max: self.max_x() as i64, coeffs: &self.comps }.serialize(serializer)
    }
}
