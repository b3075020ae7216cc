//! Thresholds `d(K, n, q) = min{d : h_q(K, n, d) = 0}`: Golod–Shafarevich
//! lower bounds, Monte Carlo upper bounds, ratio tables and the closed-form
//! bounds coming from block constructions.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::coeffs::{FieldError, PrimeField, Rationals};
use crate::series::{gs_bound, SeriesError, TruncatedSeries};
use crate::tensorlat::{
    block_sum, builtin_witness, certify_vanishing_rational, guarded_power, BlockLayout, Construction,
    GenericInstance, TensorError, VanishingCertificate,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("degree q = {q} must be at least {min}")]
    DegreeTooSmall { q: usize, min: usize },
    #[error("n = {0} is below the formula's range")]
    NTooSmall(usize),
    #[error("q = {0} has no reference ratio table; use 3, 4, 5 or 6")]
    UnsupportedTableDegree(usize),
    #[error("no block recipe for n = {0}")]
    NoRecipe(usize),
    #[error("at least one trial is required")]
    NoTrials,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl SearchError {
    pub fn is_size_guard(&self) -> bool {
        matches!(self, SearchError::Tensor(TensorError::SizeGuard { .. }))
    }
}

/// Least `d` whose truncated GS coefficient at `t^q` is zero. Every smaller
/// `d` has `h_q > 0`.
pub fn gs_lower_threshold(n: u64, q: usize) -> Result<u64, SearchError> {
    if q < 2 {
        return Err(SearchError::DegreeTooSmall { q, min: 2 });
    }
    for d in 0..=n * n {
        if gs_bound(n, d, q)?.coeff(q).is_zero() {
            return Ok(d);
        }
    }
    Ok(n * n)
}

/// A random instance whose `R_q` vanished.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingInstance {
    pub d: u64,
    pub seed: u64,
    pub prime: u64,
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdResult {
    pub n: u64,
    pub q: usize,
    pub gs_lower: u64,
    pub mc_upper: u64,
    pub exact: Option<u64>,
    pub certificate: VanishingInstance,
    pub trials: usize,
    pub seed: u64,
    pub prime: u64,
}

impl fmt::Display for ThresholdResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(d) => write!(f, "d(K,{},{}) = {d}", self.n, self.q),
            None => write!(f, "{} <= d(K,{},{}) <= {}", self.gs_lower, self.n, self.q, self.mc_upper),
        }?;
        write!(f, " (certificate seed {})", self.certificate.seed)
    }
}

/// Runs the trials at one `d`; returns the first instance with `R_q = 0`.
pub fn probe(
    n: usize,
    d: usize,
    q: usize,
    trials: usize,
    seed: u64,
    field: &PrimeField,
    max_ambient: usize,
) -> Result<Option<VanishingInstance>, SearchError> {
    if trials == 0 {
        return Err(SearchError::NoTrials);
    }
    guarded_power(n, q, max_ambient)?;
    let results: Vec<Result<Vec<usize>, TensorError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..trials)
            .map(|t| {
                scope.spawn(move || {
                    GenericInstance::random(field, n, d, seed.wrapping_add(t as u64)).dims(q, max_ambient)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("probe thread")).collect()
    });
    for (t, r) in results.into_iter().enumerate() {
        let dims = r?;
        if dims[q] == 0 {
            return Ok(Some(VanishingInstance {
                d: d as u64,
                seed: seed.wrapping_add(t as u64),
                prime: field.modulus(),
                dims,
            }));
        }
    }
    Ok(None)
}

/// Binary search for the least `d` at which some trial has `R_q = 0`,
/// starting from the GS lower bound.
pub fn dsearch(
    n: u64,
    q: usize,
    trials: usize,
    seed: u64,
    p: u64,
    max_ambient: usize,
) -> Result<ThresholdResult, SearchError> {
    if q < 3 {
        return Err(SearchError::DegreeTooSmall { q, min: 3 });
    }
    let field = PrimeField::new(p)?;
    let nu = n as usize;
    guarded_power(nu, q, max_ambient)?;
    let gs_lower = gs_lower_threshold(n, q)?;
    let (mut lo, mut hi) = (gs_lower, n * n);
    let mut best = match probe(nu, hi as usize, q, trials, seed, &field, max_ambient)? {
        Some(c) => c,
        None => unreachable!("R_2 = 0 when d = n^2"),
    };
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match probe(nu, mid as usize, q, trials, seed, &field, max_ambient)? {
            Some(c) => {
                best = c;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    Ok(ThresholdResult {
        n,
        q,
        gs_lower,
        mc_upper: hi,
        exact: (hi == gs_lower).then_some(hi),
        certificate: best,
        trials,
        seed,
        prime: p,
    })
}

/// Least `dsearch` upper bound over `3 <= q <= q_max`: a finite-horizon
/// bound for the threshold of finite dimensionality.
pub fn finite_horizon_threshold(
    n: u64,
    q_max: usize,
    trials: usize,
    seed: u64,
    p: u64,
    max_ambient: usize,
) -> Result<(usize, ThresholdResult), SearchError> {
    let mut best: Option<(usize, ThresholdResult)> = None;
    for q in 3..=q_max {
        let r = dsearch(n, q, trials, seed, p, max_ambient)?;
        if best.as_ref().map_or(true, |(_, b)| r.mc_upper < b.mc_upper) {
            best = Some((q, r));
        }
    }
    best.ok_or(SearchError::DegreeTooSmall { q: q_max, min: 3 })
}

/// `h_3` of a generic algebra: `max(0, n^3 - 2nd)`.
pub fn generic_h3_closed(n: u64, d: u64) -> u64 {
    (n * n * n).saturating_sub(2 * n * d)
}

/// Degree-4 upper bound from block sums of the 3-generator witness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DnBound {
    pub value: u64,
    /// `4(n^2 + n)/9`, which the value always undercuts.
    pub crude: f64,
}

pub fn closed_dn(n: u64) -> Result<DnBound, SearchError> {
    if n < 2 {
        return Err(SearchError::NTooSmall(n as usize));
    }
    let value = match n % 3 {
        0 => 4 * n * n / 9,
        2 => (4 * n * n + 2 * n - 2) / 9,
        _ => (4 * n * n + 4 * n - 8) / 9,
    };
    Ok(DnBound {
        value,
        crude: 4.0 * (n * n + n) as f64 / 9.0,
    })
}

/// Degree-5 upper bound; non-integral when `n = 3k + 1`.
pub fn closed_deltan(n: u64) -> Result<BigRational, SearchError> {
    if n < 2 {
        return Err(SearchError::NTooSmall(n as usize));
    }
    let num = match n % 3 {
        0 => n * n,
        2 => n * n + 2 * n + 1,
        _ => n * n + 3 * n + 1,
    };
    Ok(BigRational::new(BigInt::from(num), BigInt::from(3)))
}

/// Integer form of [`closed_deltan`].
pub fn closed_deltan_floor(n: u64) -> Result<u64, SearchError> {
    Ok(closed_deltan(n)?.floor().to_integer().to_u64().expect("small"))
}

/// Hilbert series and total dimension of a generic algebra with
/// `n(n-1)/2` relations, as printed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VershikSeries {
    pub n: u64,
    pub d: u64,
    pub series: TruncatedSeries,
    pub dimension: u64,
    /// Set when the printed value contradicts the GS recurrence.
    pub discrepancy: Option<String>,
}

pub fn vershik_series(n: u64) -> Result<VershikSeries, SearchError> {
    let d = n * (n.max(1) - 1) / 2;
    let (coeffs, dimension, discrepancy) = match n {
        0..=2 => return Err(SearchError::NTooSmall(n as usize)),
        3 => (vec![1, 3, 6, 9, 9], 28, None),
        4 => (
            vec![1, 4, 10, 16, 1],
            32,
            Some("t^4 coefficient 1 is below the GS recurrence bound 4*16 - 6*10 = 4".to_string()),
        ),
        _ => {
            let c = vec![1, n as i64, (n * (n + 1) / 2) as i64, (n * n) as i64];
            (c, (3 * n * (n + 1) + 2) / 2, None)
        }
    };
    Ok(VershikSeries {
        n,
        d,
        series: TruncatedSeries::from_i64(&coeffs),
        dimension,
        discrepancy,
    })
}

/// Whether `n(n-1)/2 >= d_n`, i.e. the degree-4 block bound already covers
/// the generic relation count.
pub fn block_bound_covers_half_square(n: u64) -> bool {
    n >= 2 && n * (n - 1) / 2 >= closed_dn(n).map(|b| b.value).unwrap_or(u64::MAX)
}

/// One row of a ratio table.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub n: u64,
    pub d_upper: u64,
    pub ratio: f64,
    /// Where `d_upper` comes from: `search` or `construction`.
    pub source: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioTable {
    pub q: usize,
    pub rows: Vec<RatioRow>,
    /// Running infimum of the ratios, one entry per row.
    pub running_inf: Vec<f64>,
    pub reference: (&'static str, f64),
}

impl RatioTable {
    pub fn infimum(&self) -> Option<f64> {
        self.running_inf.last().copied()
    }
}

/// Known limiting constant for `d(K, n, q)/n^2` (an upper estimate at `q = 6`).
pub fn reference_ratio(q: usize) -> Result<(&'static str, f64), SearchError> {
    Ok(match q {
        3 => ("1/2", 0.5),
        4 => ("(3-sqrt5)/2", (3.0 - 5f64.sqrt()) / 2.0),
        5 => ("1/3", 1.0 / 3.0),
        6 => ("5/16 (upper)", 5.0 / 16.0),
        _ => return Err(SearchError::UnsupportedTableDegree(q)),
    })
}

/// Rows `n = 2..=n_max` of the best available upper bound for `d(K, n, q)`.
/// Rows whose search would exceed `max_ambient` fall back to the block
/// construction bound when one exists, and are skipped otherwise.
pub fn alpha_table(
    q: usize,
    n_max: u64,
    trials: usize,
    seed: u64,
    p: u64,
    max_ambient: usize,
) -> Result<RatioTable, SearchError> {
    let reference = reference_ratio(q)?;
    let mut rows = Vec::new();
    for n in 2..=n_max {
        let construction = match q {
            4 => Some(closed_dn(n)?.value),
            5 => Some(closed_deltan_floor(n)?),
            _ => None,
        };
        let searched = match dsearch(n, q, trials, seed, p, max_ambient) {
            Ok(r) => Some(r.mc_upper),
            Err(e) if e.is_size_guard() => None,
            Err(e) => return Err(e),
        };
        let (d_upper, source) = match (searched, construction) {
            (Some(s), Some(c)) if c < s => (c, "construction"),
            (Some(s), _) => (s, "search"),
            (None, Some(c)) => (c, "construction"),
            (None, None) => continue,
        };
        rows.push(RatioRow {
            n,
            d_upper,
            ratio: d_upper as f64 / (n * n) as f64,
            source,
        });
    }
    let running_inf = rows
        .iter()
        .scan(f64::INFINITY, |m, r| {
            *m = m.min(r.ratio);
            Some(*m)
        })
        .collect();
    Ok(RatioTable {
        q,
        rows,
        running_inf,
        reference,
    })
}

/// Upper bound `m^q h` for `h_q(K, mn, m^2 d)` from a verified `h_q(K, n, d) <= h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InflationBound {
    pub n: u64,
    pub d: u64,
    pub q: usize,
    pub h_upper: BigInt,
}

pub fn inflation_bound(n: u64, d: u64, q: usize, m: u64, known_h: &BigInt) -> InflationBound {
    InflationBound {
        n: m * n,
        d: m * m * d,
        q,
        h_upper: BigInt::from(m).pow(q as u32) * known_h,
    }
}

/// Block layout on the 7-generator witness giving `h_4(K, n, d) = 0` with
/// `d <= n(n-1)/2`, for the values of `n` not covered by the degree-4 block
/// bound.
pub fn half_square_recipe(n: u64) -> Option<BlockLayout> {
    let sizes = match n {
        5 => vec![5],
        6 => vec![6],
        7 => vec![7],
        8 => vec![4, 4],
        10 => vec![5, 5],
        11 => vec![5, 6],
        13 => vec![6, 7],
        16 => vec![6, 6, 4],
        _ => return None,
    };
    BlockLayout::new(sizes).ok()
}

/// Vanishing certificate at `d = n^2 - dim L_G <= n(n-1)/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfSquareCertificate {
    pub n: u64,
    pub half_square: u64,
    pub certificate: VanishingCertificate,
}

impl HalfSquareCertificate {
    pub fn holds(&self) -> bool {
        self.certificate.holds() && self.certificate.d as u64 <= self.half_square
    }
}

pub fn certify_half_square(n: u64, p: u64, max_ambient: usize) -> Result<HalfSquareCertificate, SearchError> {
    let layout = half_square_recipe(n).ok_or(SearchError::NoRecipe(n as usize))?;
    let g = builtin_witness(&Rationals, Construction::G30)?;
    let mut w = block_sum(&g, &layout)?.witness;
    w.construction = format!("g30 block {layout}");
    let certificate = certify_vanishing_rational(&w, 4, p, max_ambient)?;
    Ok(HalfSquareCertificate {
        n,
        half_square: n * (n - 1) / 2,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::DEFAULT_PRIME;
    use crate::series::{bar_truncate, invert_i64, satisfies_gs_recurrence};
    use crate::tensorlat::{eq_dim, DEFAULT_MAX_AMBIENT};

    const CAP: usize = DEFAULT_MAX_AMBIENT;

    #[test]
    fn gs_thresholds() {
        assert_eq!(gs_lower_threshold(3, 4).unwrap(), 4);
        assert_eq!(gs_lower_threshold(2, 3).unwrap(), 2);
        for n in 1..8 {
            assert_eq!(gs_lower_threshold(n, 2).unwrap(), n * n);
        }
        assert!(gs_lower_threshold(3, 1).is_err());
    }

    #[test]
    fn threshold_searches() {
        let r = dsearch(3, 4, 5, 1, DEFAULT_PRIME, CAP).unwrap();
        assert_eq!(r.exact, Some(4));
        let r = dsearch(2, 3, 5, 1, DEFAULT_PRIME, CAP).unwrap();
        assert_eq!(r.exact, Some(2));
        let r = dsearch(3, 5, 5, 1, DEFAULT_PRIME, CAP).unwrap();
        assert_eq!(r.exact, Some(3));
        assert_eq!(r.certificate.dims[5], 0);
        let r = dsearch(4, 6, 3, 1, DEFAULT_PRIME, CAP).unwrap();
        assert!(r.mc_upper <= 5 && r.gs_lower <= r.mc_upper);
        assert!(matches!(dsearch(9, 9, 1, 1, DEFAULT_PRIME, CAP), Err(e) if e.is_size_guard()));
    }

    #[test]
    fn closed_forms() {
        let dn: Vec<u64> = [9, 5, 7].iter().map(|&n| closed_dn(n).unwrap().value).collect();
        assert_eq!(dn, vec![36, 12, 24]);
        assert_eq!(closed_deltan(3).unwrap(), BigRational::from_integer(3.into()));
        assert_eq!(closed_deltan(5).unwrap(), BigRational::from_integer(12.into()));
        assert_eq!(closed_deltan(7).unwrap(), BigRational::new(71.into(), 3.into()));
        assert_eq!(closed_deltan_floor(7).unwrap(), 23);
        for n in 3..=12 {
            let b = closed_dn(n).unwrap();
            assert!(b.value >= gs_lower_threshold(n, 4).unwrap());
            assert!((b.value as f64) < b.crude);
        }
        for n in [9, 12, 14, 15].into_iter().chain(17..60) {
            assert!(block_bound_covers_half_square(n), "n = {n}");
        }
    }

    #[test]
    fn vershik() {
        let v = vershik_series(5).unwrap();
        assert_eq!((v.series, v.dimension), (TruncatedSeries::from_i64(&[1, 5, 15, 25]), 46));
        let v = vershik_series(3).unwrap();
        assert_eq!((v.series.to_i64().unwrap(), v.dimension), (vec![1, 3, 6, 9, 9], 28));
        let v = vershik_series(4).unwrap();
        assert_eq!(v.dimension, 32);
        assert!(v.discrepancy.is_some());
        assert!(!satisfies_gs_recurrence(&v.series, 4, 6));
        for n in 5..30 {
            let v = vershik_series(n).unwrap();
            let gs = bar_truncate(&invert_i64(&[1, -(n as i64), v.d as i64], 3).unwrap());
            assert_eq!(v.series, gs);
            let total: u64 = v.series.to_i64().unwrap().iter().sum::<i64>() as u64;
            assert_eq!(total, v.dimension);
        }
        assert!(vershik_series(2).is_err());
    }

    #[test]
    fn ratio_tables() {
        let t = alpha_table(5, 3, 3, 1, DEFAULT_PRIME, CAP).unwrap();
        let row = t.rows.iter().find(|r| r.n == 3).unwrap();
        assert_eq!(row.d_upper, 3);
        assert!((row.ratio - 1.0 / 3.0).abs() < 1e-12);
        let t = alpha_table(4, 9, 2, 1, DEFAULT_PRIME, 1_500).unwrap();
        let row = t.rows.iter().find(|r| r.n == 9).unwrap();
        assert!(row.d_upper <= 36 && row.source == "construction");
        assert!(t.infimum().unwrap() <= 4.0 / 9.0);
        assert!(t.running_inf.windows(2).all(|w| w[1] <= w[0]));
        assert!(t.rows.iter().all(|r| r.ratio > 0.0));
        assert!(alpha_table(7, 3, 1, 1, DEFAULT_PRIME, CAP).is_err());
    }

    #[test]
    fn inflation_bounds() {
        let z = BigInt::zero();
        let b = inflation_bound(3, 4, 4, 2, &z);
        assert_eq!((b.n, b.d, b.h_upper.clone()), (6, 16, z.clone()));
        let b = inflation_bound(3, 3, 5, 3, &z);
        assert_eq!((b.n, b.d), (9, 27));
        let b = inflation_bound(3, 3, 3, 1, &BigInt::from(9));
        assert_eq!(b.h_upper, BigInt::from(9));
        assert_eq!(inflation_bound(2, 1, 3, 2, &BigInt::from(4)).h_upper, BigInt::from(32));
    }

    #[test]
    fn closed_h3_matches_rank_method() {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        for n in 2..=3u64 {
            for d in 0..=n * n {
                let h = GenericInstance::random(&f, n as usize, d as usize, 3).dims(3, CAP).unwrap()[3];
                assert_eq!(h as u64, generic_h3_closed(n, d), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn half_square_certificates_small() {
        for n in [5, 6, 7, 8] {
            let c = certify_half_square(n, DEFAULT_PRIME, CAP).unwrap();
            assert!(c.holds(), "{}", c.certificate);
        }
        assert!(certify_half_square(9, DEFAULT_PRIME, CAP).is_err());
    }

    #[test]
    fn whatnot1_witness_dims() {
        for n in 3..=7u64 {
            let w = builtin_witness(&Rationals, Construction::Whatnot1(n as usize)).unwrap();
            assert!(w.d() as u64 <= closed_deltan_floor(n).unwrap(), "n = {n}");
            assert_eq!(eq_dim(&w.space, n as usize, 5, CAP).unwrap(), 0);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(12))]
            #[test]
            fn search_bracket_is_consistent(n in 2u64..=3, q in 3usize..=4, seed in 0u64..1000) {
                let r = dsearch(n, q, 2, seed, DEFAULT_PRIME, CAP).unwrap();
                prop_assert!(r.gs_lower <= r.mc_upper);
                prop_assert_eq!(r.exact.is_some(), r.gs_lower == r.mc_upper);
                prop_assert_eq!(r.certificate.d, r.mc_upper);
                prop_assert_eq!(r.certificate.dims[q], 0);
            }
        }
    }
}
