//! Torus-invariant divisors on a Bott tower.
//!
//! The fan of a height-`r` tower has `2r` rays, one pair per stage: `i+`
//! (the coordinate ray of stage `i`) and `i-` (its twisted opposite). A
//! divisor is a rational coefficient per ray; [`Divisor`] stores the sparse
//! coefficient map. Because each `i-` is linearly equivalent to a
//! combination of plus rays, every divisor class has a unique representative
//! supported on `1+ ... r+` alone; [`PlusDivisor`] is that dense
//! representative (see `divisors::to_plus_basis` for the conversion).
//!
//! Input syntax, shared with the command line:
//!
//! * sparse: `1+:1/2, 3-:2` — comma-separated `RAY:COEFF` terms, where a ray
//!   is a 1-based stage index followed by `+` or `-`, and a coefficient is
//!   an integer or `numer/denom` fraction;
//! * plus basis: `g1, g2, ..., gr` — exactly `r` rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};

static ZERO: LazyLock<BigRational> = LazyLock::new(BigRational::zero);

/// Which ray of a stage's pair.
///
/// The derived order puts `Plus` before `Minus`, so rays sort as
/// `1+ < 1- < 2+ < 2- < ...` inside [`RayId`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RaySign {
    Plus,
    Minus,
}

impl RaySign {
    /// The other ray of the pair.
    pub fn flip(self) -> Self {
        match self {
            RaySign::Plus => RaySign::Minus,
            RaySign::Minus => RaySign::Plus,
        }
    }

    /// `'+'` or `'-'`.
    pub fn symbol(self) -> char {
        match self {
            RaySign::Plus => '+',
            RaySign::Minus => '-',
        }
    }
}

/// Name of a ray: stage index (1-based) plus sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RayId {
    pub index: usize,
    pub sign: RaySign,
}

impl RayId {
    pub fn new(index: usize, sign: RaySign) -> Self {
        Self { index, sign }
    }

    pub fn plus(index: usize) -> Self {
        Self::new(index, RaySign::Plus)
    }

    pub fn minus(index: usize) -> Self {
        Self::new(index, RaySign::Minus)
    }

    /// All `2r` rays in sorted order.
    pub fn all(r: usize) -> impl Iterator<Item = RayId> {
        (1..=r).flat_map(|i| [RayId::plus(i), RayId::minus(i)])
    }
}

impl fmt::Display for RayId {
    /// Writes the compact form used by the input syntax, e.g. `3+`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.index, self.sign.symbol())
    }
}

/// Sparse divisor: rational coefficient per ray, zeros omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    r: usize,
    coeffs: BTreeMap<RayId, BigRational>,
}

impl Divisor {
    /// The zero divisor.
    pub fn zero(r: usize) -> Self {
        Self {
            r,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds a divisor from explicit terms, dropping zeros.
    ///
    /// # Errors
    ///
    /// [`Error::IndexOutOfRange`] if a ray index is not in `1..=r`.
    pub fn from_entries(
        r: usize,
        entries: impl IntoIterator<Item = (RayId, BigRational)>,
    ) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (ray, value) in entries {
            if ray.index < 1 || ray.index > r {
                return Err(Error::IndexOutOfRange(format!(
                    "ray {ray} does not exist in a height-{r} tower"
                )));
            }
            if !value.is_zero() {
                coeffs.insert(ray, value);
            }
        }
        Ok(Self { r, coeffs })
    }

    /// Builds a divisor by evaluating `f` on every ray.
    pub fn from_fn(r: usize, f: impl Fn(RayId) -> BigRational) -> Self {
        let coeffs = RayId::all(r)
            .filter_map(|ray| {
                let value = f(ray);
                (!value.is_zero()).then_some((ray, value))
            })
            .collect();
        Self { r, coeffs }
    }

    /// The anticanonical divisor: coefficient 1 on every ray.
    pub fn anticanonical(r: usize) -> Self {
        Self::from_fn(r, |_| BigRational::one())
    }

    /// Parses the sparse `RAY:COEFF, ...` syntax. An empty string or a
    /// literal `0` denotes the zero divisor.
    ///
    /// # Errors
    ///
    /// [`Error::DivisorSyntax`] for malformed terms, out-of-range rays, or
    /// repeated rays.
    pub fn parse(r: usize, text: &str) -> Result<Self> {
        let body = text.trim();
        if body.is_empty() || body == "0" {
            return Ok(Self::zero(r));
        }
        let mut coeffs = BTreeMap::new();
        for term in body.split(',') {
            let term = term.trim();
            let Some((ray_text, coeff_text)) = term.split_once(':') else {
                return Err(Error::DivisorSyntax(format!(
                    "term '{term}': expected RAY:COEFF, e.g. 2+:1/2"
                )));
            };
            let ray = parse_ray(r, ray_text.trim())?;
            let value = parse_rational(coeff_text.trim())
                .map_err(|message| Error::DivisorSyntax(format!("term '{term}': {message}")))?;
            if coeffs.insert(ray, value).is_some() {
                return Err(Error::DivisorSyntax(format!(
                    "ray {ray} appears more than once"
                )));
            }
        }
        coeffs.retain(|_, value| !value.is_zero());
        Ok(Self { r, coeffs })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Coefficient of `ray` (zero if absent).
    pub fn coeff(&self, ray: RayId) -> &BigRational {
        self.coeffs.get(&ray).unwrap_or(&ZERO)
    }

    /// Nonzero terms in ray order.
    pub fn terms(&self) -> impl Iterator<Item = (RayId, &BigRational)> {
        self.coeffs.iter().map(|(&ray, value)| (ray, value))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .terms()
            .map(|(ray, value)| format!("{ray}:{value}"))
            .collect();
        f.write_str(&terms.join(", "))
    }
}

/// Dense divisor in the plus basis: `g[i - 1]` multiplies the class of the
/// plus divisor of stage `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlusDivisor {
    g: Vec<BigRational>,
}

impl PlusDivisor {
    pub fn new(g: Vec<BigRational>) -> Self {
        Self { g }
    }

    pub fn zero(r: usize) -> Self {
        Self {
            g: vec![BigRational::zero(); r],
        }
    }

    /// The indicator divisor of stage `m`: coefficient 1 at `m`, 0 elsewhere.
    ///
    /// # Panics
    ///
    /// Panics if `m` is not in `1..=r`; stage indices come from loops over
    /// the tower, so a bad index is a bug.
    pub fn unit(r: usize, m: usize) -> Self {
        assert!((1..=r).contains(&m), "stage {m} out of range for r = {r}");
        let mut g = vec![BigRational::zero(); r];
        g[m - 1] = BigRational::one();
        Self { g }
    }

    /// Parses exactly `r` comma-separated rationals.
    ///
    /// # Errors
    ///
    /// [`Error::DivisorSyntax`] on a count mismatch or malformed rational.
    pub fn parse(r: usize, text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != r {
            return Err(Error::DivisorSyntax(format!(
                "expected {r} plus-basis coefficients, got {}",
                parts.len()
            )));
        }
        let g = parts
            .iter()
            .map(|part| {
                parse_rational(part)
                    .map_err(|message| Error::DivisorSyntax(format!("term '{part}': {message}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { g })
    }

    pub fn r(&self) -> usize {
        self.g.len()
    }

    /// Coefficient of stage `i` (1-based).
    pub fn get(&self, i: usize) -> &BigRational {
        &self.g[i - 1]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.g
    }

    pub fn is_zero(&self) -> bool {
        self.g.iter().all(Zero::is_zero)
    }

    /// Views the plus-basis divisor as a sparse divisor supported on the
    /// plus rays.
    pub fn embed(&self) -> Divisor {
        let r = self.g.len();
        Divisor::from_fn(r, |ray| match ray.sign {
            RaySign::Plus => self.g[ray.index - 1].clone(),
            RaySign::Minus => BigRational::zero(),
        })
    }

    /// `self += scale * other`, the accumulation step used when building
    /// divisors out of earlier ones.
    ///
    /// # Panics
    ///
    /// Panics on a height mismatch (a bug, not an input condition).
    pub fn add_scaled(&mut self, other: &PlusDivisor, scale: &BigRational) {
        assert_eq!(self.g.len(), other.g.len(), "height mismatch");
        for (lhs, rhs) in self.g.iter_mut().zip(&other.g) {
            *lhs += scale * rhs;
        }
    }
}

impl fmt::Display for PlusDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.g.iter().map(BigRational::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn parse_ray(r: usize, text: &str) -> Result<RayId> {
    let sign = match text.chars().last() {
        Some('+') => RaySign::Plus,
        Some('-') => RaySign::Minus,
        _ => {
            return Err(Error::DivisorSyntax(format!(
                "ray '{text}': expected an index followed by + or -, e.g. 2+"
            )));
        }
    };
    let index_text = &text[..text.len() - 1];
    let index: usize = index_text.parse().map_err(|_| {
        Error::DivisorSyntax(format!("ray '{text}': invalid stage index '{index_text}'"))
    })?;
    if index < 1 || index > r {
        return Err(Error::DivisorSyntax(format!(
            "ray '{text}': stage index must be in 1..={r}"
        )));
    }
    Ok(RayId::new(index, sign))
}

/// Parses `numer` or `numer/denom` into an exact rational.
///
/// Implemented directly (rather than through `BigRational::from_str`) so a
/// zero denominator surfaces as an error instead of a panic.
pub(crate) fn parse_rational(text: &str) -> std::result::Result<BigRational, String> {
    let (numer_text, denom_text) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let numer =
        BigInt::from_str(numer_text).map_err(|_| format!("invalid integer '{numer_text}'"))?;
    let denom = match denom_text {
        Some(d) => BigInt::from_str(d).map_err(|_| format!("invalid integer '{d}'"))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(format!("'{text}' has a zero denominator"));
    }
    Ok(BigRational::new(numer, denom))
}
