//! Closed-form worst-case distortion bounds for district-based elections.
//!
//! Every formula is evaluated in exact rational arithmetic and converted to
//! `f64` only at the end, so comparisons between formulas (monotonicity,
//! class ordering, the `gamma = 1` specialization) are exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::model::ElectionClass;

/// Parameters of a bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundQuery {
    pub class: ElectionClass,
    pub n: u64,
    pub m: u64,
    pub k: u64,
    pub n_min: u64,
    pub n_max: u64,
    /// Single-district distortion of the local rule; only used by
    /// [`gamma_bound`].
    pub gamma: f64,
}

impl BoundQuery {
    pub fn new(class: ElectionClass, n: u64, m: u64, k: u64, n_min: u64, n_max: u64) -> Result<Self> {
        let q = BoundQuery { class, n, m, k, n_min, n_max, gamma: 1.0 };
        q.validate()?;
        Ok(q)
    }

    /// Symmetric query with `k` districts of `size` voters each.
    pub fn symmetric(m: u64, k: u64, size: u64) -> Result<Self> {
        Self::new(ElectionClass::Symmetric, k * size, m, k, size, size)
    }

    /// Query matching concrete district sizes.
    pub fn from_sizes(class: ElectionClass, m: u64, sizes: &[usize]) -> Result<Self> {
        let n = sizes.iter().sum::<usize>() as u64;
        let n_min = sizes.iter().copied().min().unwrap_or(0) as u64;
        let n_max = sizes.iter().copied().max().unwrap_or(0) as u64;
        Self::new(class, n, m, sizes.len() as u64, n_min, n_max)
    }

    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        self.gamma = gamma;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.m < 2 || self.k < 1 || self.n_min < 1 {
            return Err(Error::domain(format!("invalid bound parameters {self:?}")));
        }
        if self.n_min > self.n_max || self.n_min * self.k > self.n || self.n > self.n_max * self.k {
            return Err(Error::domain(format!(
                "district sizes inconsistent: need n_min <= n/k <= n_max, got {self:?}"
            )));
        }
        if self.class == ElectionClass::Symmetric && (self.n_min != self.n_max || self.n_min * self.k != self.n) {
            return Err(Error::domain(format!("symmetric query needs n_min = n_max = n/k, got {self:?}")));
        }
        if !(self.gamma.is_finite() && self.gamma >= 1.0) {
            return Err(Error::domain(format!("gamma must be >= 1, got {}", self.gamma)));
        }
        Ok(())
    }
}

fn int(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn frac(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("bound is finite")
}

/// `gamma + gamma^2 m k / (gamma + 1)` and its unweighted / unrestricted
/// counterparts.
pub fn gamma_bound_exact(q: &BoundQuery) -> Result<BigRational> {
    q.validate()?;
    let g = BigRational::from_float(q.gamma).ok_or_else(|| Error::domain("gamma is not finite"))?;
    let one = BigRational::one();
    let (m, k, n, n_min, n_max) = (int(q.m), int(q.k), int(q.n), int(q.n_min), int(q.n_max));
    let coeff = &g * &g * &m / (&g + &one);
    Ok(match q.class {
        ElectionClass::Symmetric => &g + coeff * k,
        ElectionClass::Unweighted => &g + coeff * ((n + n_max) / n_min - one),
        ElectionClass::Unrestricted => &g + &g * m * (n / n_min - one),
    })
}

pub fn gamma_bound(q: &BoundQuery) -> Result<f64> {
    gamma_bound_exact(q).map(|r| to_f64(&r))
}

/// Range Voting upper bound, tight for every class.
pub fn rv_bound_exact(q: &BoundQuery) -> BigRational {
    let one = BigRational::one();
    let (m, k, n, n_min, n_max) = (int(q.m), int(q.k), int(q.n), int(q.n_min), int(q.n_max));
    match q.class {
        ElectionClass::Symmetric => &one + m * k * frac(1, 2),
        ElectionClass::Unweighted => &one + m * frac(1, 2) * ((n + n_max) / n_min - &one),
        ElectionClass::Unrestricted => &one + m * (n / n_min - &one),
    }
}

pub fn rv_bound(q: &BoundQuery) -> f64 {
    to_f64(&rv_bound_exact(q))
}

/// Plurality: exact distributed distortion for every class.
pub fn pv_bound_exact(q: &BoundQuery) -> BigRational {
    let one = BigRational::one();
    let (m, k, n, n_min, n_max) = (int(q.m), int(q.k), int(q.n), int(q.n_min), int(q.n_max));
    let m2 = &m * &m;
    match q.class {
        ElectionClass::Symmetric => &one + m2 * k * frac(3, 4),
        ElectionClass::Unweighted => &one + m2 * frac(1, 4) * ((int(3) * n + n_max) / n_min - &one),
        ElectionClass::Unrestricted => &one + m2 * (n / n_min - frac(1, 2)),
    }
}

pub fn pv_bound(q: &BoundQuery) -> f64 {
    to_f64(&pv_bound_exact(q))
}

/// Lower bound for deterministic ordinal rules. Symmetric is the unweighted
/// expression at `n_min = n_max = n/k`. The matching construction in
/// `generators` attains this value plus `m`.
pub fn ordinal_lower_bound_exact(q: &BoundQuery) -> BigRational {
    let one = BigRational::one();
    let (m, k, n, n_min, n_max) = (int(q.m), int(q.k), int(q.n), int(q.n_min), int(q.n_max));
    let m2 = &m * &m;
    let three = int(3);
    match q.class {
        ElectionClass::Symmetric => &one + m2 * frac(1, 4) * (&three * k - int(2)),
        ElectionClass::Unweighted => &one + m2 * frac(1, 4) * ((&three * n + n_max) / n_min - three),
        ElectionClass::Unrestricted => &one + m2 * (n / n_min - &one),
    }
}

pub fn ordinal_lower_bound(q: &BoundQuery) -> f64 {
    to_f64(&ordinal_lower_bound_exact(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(class: ElectionClass, n: u64, m: u64, k: u64, n_min: u64, n_max: u64) -> BoundQuery {
        BoundQuery::new(class, n, m, k, n_min, n_max).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let sym = BoundQuery::symmetric(3, 3, 2).unwrap();
        assert_eq!(gamma_bound(&sym).unwrap(), 5.5);
        let single = q(ElectionClass::Unrestricted, 5, 4, 1, 5, 5);
        assert_eq!(gamma_bound(&single).unwrap(), 1.0);
        // independent evaluation: 2 + 4*2*2/3
        let g2 = BoundQuery::symmetric(2, 2, 3).unwrap().with_gamma(2.0).unwrap();
        assert_eq!(gamma_bound_exact(&g2).unwrap(), frac(22, 3));
        assert!((gamma_bound(&g2).unwrap() - (2.0 + 16.0 / 3.0)).abs() < 1e-12);
        assert!(BoundQuery::symmetric(2, 2, 3).unwrap().with_gamma(0.5).is_err());
    }

    #[test]
    fn rv_examples() {
        assert_eq!(rv_bound(&BoundQuery::symmetric(3, 2, 5).unwrap()), 4.0);
        let n = 9;
        let m = 4;
        assert_eq!(rv_bound(&q(ElectionClass::Unrestricted, n, m, 2, 1, 8)), 1.0 + (m * (n - 1)) as f64);
        assert_eq!(rv_bound(&BoundQuery::symmetric(5, 1, 4).unwrap()), 3.5);
    }

    #[test]
    fn pv_examples() {
        assert_eq!(pv_bound(&BoundQuery::symmetric(3, 2, 4).unwrap()), 14.5);
        let uw = q(ElectionClass::Unweighted, 12, 3, 3, 4, 4);
        assert_eq!(pv_bound_exact(&uw), pv_bound_exact(&BoundQuery::symmetric(3, 3, 4).unwrap()));
        assert_eq!(pv_bound(&q(ElectionClass::Unrestricted, 8, 4, 2, 2, 6)), 57.0);
    }

    #[test]
    fn ordinal_examples() {
        assert_eq!(ordinal_lower_bound(&q(ElectionClass::Unrestricted, 6, 3, 1, 6, 6)), 1.0);
        for (m, k, s) in [(3u64, 2u64, 3u64), (4, 3, 4), (5, 2, 10)] {
            let uw = q(ElectionClass::Unweighted, k * s, m, k, s, s);
            let expected = 1.0 + (m * m) as f64 / 4.0 * (3 * k - 2) as f64;
            assert_eq!(ordinal_lower_bound(&uw), expected);
            assert_eq!(ordinal_lower_bound(&BoundQuery::symmetric(m, k, s).unwrap()), expected);
        }
        assert_eq!(ordinal_lower_bound(&q(ElectionClass::Unrestricted, 9, 3, 3, 3, 3)), 19.0);
    }

    #[test]
    fn invalid_queries() {
        assert!(BoundQuery::new(ElectionClass::Symmetric, 10, 3, 2, 4, 6).is_err());
        assert!(BoundQuery::new(ElectionClass::Unweighted, 10, 3, 2, 6, 4).is_err());
        assert!(BoundQuery::new(ElectionClass::Unweighted, 10, 1, 2, 5, 5).is_err());
        assert!(BoundQuery::new(ElectionClass::Unweighted, 30, 3, 2, 5, 5).is_err());
    }

    fn query_strategy() -> impl Strategy<Value = (u64, u64, u64, u64)> {
        // (m, k, n_min, extra) with n_max = n_min + extra
        (2u64..10, 2u64..8, 1u64..10, 0u64..10)
    }

    proptest! {
        #[test]
        fn gamma_one_is_range_voting((m, k, n_min, extra) in query_strategy()) {
            let n_max = n_min + extra;
            let n = n_min + n_max * (k - 1);
            for class in [ElectionClass::Unweighted, ElectionClass::Unrestricted] {
                let query = q(class, n, m, k, n_min, n_max);
                prop_assert_eq!(gamma_bound(&query).unwrap(), rv_bound(&query));
            }
            let sym = BoundQuery::symmetric(m, k, n_min).unwrap();
            prop_assert_eq!(gamma_bound(&sym).unwrap(), rv_bound(&sym));
        }

        #[test]
        fn class_ordering((m, k, s, _e) in query_strategy()) {
            let n = k * s;
            let sym = BoundQuery::symmetric(m, k, s).unwrap();
            let uw = q(ElectionClass::Unweighted, n, m, k, s, s);
            let ur = q(ElectionClass::Unrestricted, n, m, k, s, s);
            for f in [rv_bound_exact, pv_bound_exact, ordinal_lower_bound_exact] {
                prop_assert!(f(&ur) >= f(&uw));
                prop_assert!(f(&uw) >= f(&sym));
            }
        }

        #[test]
        fn monotone((m, k, n_min, extra) in query_strategy()) {
            let n_max = n_min + extra;
            let n = n_min + n_max * (k - 1);
            for class in [ElectionClass::Unweighted, ElectionClass::Unrestricted] {
                let base = q(class, n, m, k, n_min, n_max);
                let more_m = q(class, n, m + 1, k, n_min, n_max);
                let more_n = q(class, n + 1, m, k, n_min, n_max + 1);
                let more_k = q(class, n + n_max, m, k + 1, n_min, n_max);
                for f in [rv_bound_exact, pv_bound_exact, ordinal_lower_bound_exact] {
                    prop_assert!(f(&more_m) >= f(&base));
                    prop_assert!(f(&more_n) >= f(&base));
                    prop_assert!(f(&more_k) >= f(&base));
                }
            }
            let s = BoundQuery::symmetric(m, k, n_min).unwrap();
            let s2 = BoundQuery::symmetric(m, k + 1, n_min).unwrap();
            let s3 = BoundQuery::symmetric(m + 1, k, n_min).unwrap();
            for f in [rv_bound_exact, pv_bound_exact, ordinal_lower_bound_exact] {
                prop_assert!(f(&s2) >= f(&s));
                prop_assert!(f(&s3) >= f(&s));
            }
        }

        #[test]
        fn non_increasing_in_n_min(m in 2u64..10, n in 10u64..60, a in 1u64..5, b in 1u64..5) {
            let (lo, hi) = (a.min(b), a.max(b));
            for class in [ElectionClass::Unweighted, ElectionClass::Unrestricted] {
                let q_lo = BoundQuery { class, n, m, k: 2, n_min: lo, n_max: n - lo, gamma: 1.0 };
                let q_hi = BoundQuery { class, n, m, k: 2, n_min: hi, n_max: n - lo, gamma: 1.0 };
                for f in [rv_bound_exact, pv_bound_exact, ordinal_lower_bound_exact] {
                    prop_assert!(f(&q_hi) <= f(&q_lo));
                }
            }
        }
    }
}
