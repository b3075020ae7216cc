//! Truncated integer power series, the `|.|` truncation and the
//! Golod–Shafarevich bound.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("constant term {0} is not a unit")]
    NonUnit(BigInt),
    #[error("cap mismatch: {0} vs {1}")]
    CapMismatch(usize, usize),
    #[error("d = {d} out of range 0..={max} for n = {n}")]
    DOutOfRange { n: u64, d: u64, max: u64 },
    #[error("closed form known only for 2 <= q <= 5, got {0}")]
    UnsupportedDegree(usize),
}

/// Coefficients `a_0..=a_D` of a power series truncated at degree `D`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least a constant term");
        TruncatedSeries { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_dims(dims: &[usize]) -> Self {
        Self::new(dims.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `t^q`; zero beyond the cap.
    pub fn coeff(&self, q: usize) -> BigInt {
        self.coeffs.get(q).cloned().unwrap_or_default()
    }

    /// Coefficients as `i64`, if all fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| i64::try_from(c).ok()).collect()
    }

    pub fn truncate(&self, cap: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(cap + 1, BigInt::zero());
        Self::new(coeffs)
    }

    /// Product truncated at `self.cap()`.
    pub fn mul(&self, other: &Self) -> Self {
        let cap = self.cap();
        let mut out = vec![BigInt::zero(); cap + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(cap + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Degree of the last nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }
}

impl fmt::Display for TruncatedSeries {
    /// `1 + 3t + 6t^2`, zero terms omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (q, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match q {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "t")?;
                    if q > 1 {
                        write!(f, "^{q}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Formal inverse of the polynomial with coefficients `p` to degree `cap`.
pub fn invert(p: &[BigInt], cap: usize) -> Result<TruncatedSeries, SeriesError> {
    let c0 = p.first().cloned().unwrap_or_default();
    if !(c0.is_one() || (-&c0).is_one()) {
        return Err(SeriesError::NonUnit(c0));
    }
    let mut a: Vec<BigInt> = Vec::with_capacity(cap + 1);
    for q in 0..=cap {
        let mut s = if q == 0 { BigInt::one() } else { BigInt::zero() };
        for (k, pk) in p.iter().enumerate().skip(1).take(q) {
            s -= pk * &a[q - k];
        }
        // c0 = ±1, so dividing is multiplying
        a.push(s * &c0);
    }
    Ok(TruncatedSeries::new(a))
}

pub fn invert_i64(p: &[i64], cap: usize) -> Result<TruncatedSeries, SeriesError> {
    let p: Vec<BigInt> = p.iter().map(|&c| BigInt::from(c)).collect();
    invert(&p, cap)
}

/// Zeroes every coefficient from the first negative one on.
pub fn bar_truncate(s: &TruncatedSeries) -> TruncatedSeries {
    let mut coeffs = s.coeffs.clone();
    if let Some(i) = coeffs.iter().position(|c| c.is_negative()) {
        for c in &mut coeffs[i..] {
            *c = BigInt::zero();
        }
    }
    TruncatedSeries::new(coeffs)
}

/// `|(1 - n t + d t^2)^{-1}|` to degree `cap`.
pub fn gs_bound(n: u64, d: u64, cap: usize) -> Result<TruncatedSeries, SeriesError> {
    let max = n * n;
    if n == 0 || d > max {
        return Err(SeriesError::DOutOfRange { n, d, max });
    }
    let p = [BigInt::one(), -BigInt::from(n), BigInt::from(d)];
    Ok(bar_truncate(&invert(&p, cap)?))
}

/// Coefficient `a_q` of `(1 - n t + d t^2)^{-1}` before truncation, for `2 <= q <= 5`.
pub fn gs_coefficient_closed(q: usize, n: i64, d: i64) -> Result<BigInt, SeriesError> {
    let (n, d) = (BigInt::from(n), BigInt::from(d));
    let n2 = &n * &n;
    let v = match q {
        2 => &n2 - &d,
        3 => &n2 * &n - BigInt::from(2) * &n * &d,
        4 => &n2 * &n2 - BigInt::from(3) * &n2 * &d + &d * &d,
        5 => &n2 * &n2 * &n - BigInt::from(4) * &n2 * &n * &d + BigInt::from(3) * &n * &d * &d,
        _ => return Err(SeriesError::UnsupportedDegree(q)),
    };
    Ok(v)
}

/// Coefficientwise `a >= b`.
pub fn dominates(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<bool, SeriesError> {
    if a.cap() != b.cap() {
        return Err(SeriesError::CapMismatch(a.cap(), b.cap()));
    }
    Ok(a.coeffs.iter().zip(&b.coeffs).all(|(x, y)| x >= y))
}

/// `dim R_q >= n dim R_{q-1} - d dim R_{q-2}` for every `2 <= q <= cap`.
pub fn satisfies_gs_recurrence(s: &TruncatedSeries, n: u64, d: u64) -> bool {
    let (n, d) = (BigInt::from(n), BigInt::from(d));
    (2..=s.cap()).all(|q| s.coeffs[q] >= &n * &s.coeffs[q - 1] - &d * &s.coeffs[q - 2])
}
