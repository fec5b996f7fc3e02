//! Local arithmetic of a fixed elliptic curve over the rationals.
//!
//! Everything exposed here past [`LocalData`] is analytically normalized: the
//! central point of `L(s, E)` sits at 1/2 and good-prime Satake parameters have
//! modulus one.

pub mod count;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factor, legendre, primes_up_to, rem_euclid_i128, valuation};
use crate::error::{Error, Result};
use count::ShortCurve;

/// Integral Weierstrass model with user-supplied conductor and rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticCurve {
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
    pub discriminant: i128,
    pub conductor: u64,
    pub known_rank: Option<u32>,
    c4: i128,
    c6: i128,
}

/// JSON shape of a curve block: `{"a1":..,"a6":..,"conductor":..,"rank":..}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CurveInput {
    #[serde(default)]
    pub a1: i64,
    #[serde(default)]
    pub a2: i64,
    #[serde(default)]
    pub a3: i64,
    #[serde(default)]
    pub a4: i64,
    #[serde(default)]
    pub a6: i64,
    pub conductor: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reduction {
    Good,
    SplitMultiplicative,
    NonsplitMultiplicative,
    Additive,
}

impl Reduction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Reduction::Good => "good",
            Reduction::SplitMultiplicative => "split",
            Reduction::NonsplitMultiplicative => "nonsplit",
            Reduction::Additive => "additive",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "good" => Reduction::Good,
            "split" => Reduction::SplitMultiplicative,
            "nonsplit" => Reduction::NonsplitMultiplicative,
            "additive" => Reduction::Additive,
            _ => return None,
        })
    }
}

/// Raw local data at one prime: reduction type and unnormalized trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalData {
    pub p: u64,
    pub reduction: Reduction,
    pub a_p: i64,
}

impl LocalData {
    /// Normalized coefficient `a_f(p)`.
    pub fn a_f(&self) -> f64 {
        match self.reduction {
            Reduction::Additive => 0.0,
            _ => self.a_p as f64 / (self.p as f64).sqrt(),
        }
    }

    /// Normalized `a_f(p^2) = alpha^2 + conj(alpha)^2`.
    pub fn a_f_sq(&self) -> f64 {
        match self.reduction {
            Reduction::Good => {
                let a = self.a_f();
                a * a - 2.0
            }
            Reduction::SplitMultiplicative | Reduction::NonsplitMultiplicative => {
                (self.a_p * self.a_p) as f64 / self.p as f64
            }
            Reduction::Additive => 0.0,
        }
    }
}

impl EllipticCurve {
    /// Validates and builds a curve. The model must be minimal: every prime of
    /// the discriminant must divide the conductor, and no prime p >= 5 may have
    /// `v_p(c4) >= 4` together with `v_p(disc) >= 12`.
    pub fn new(coeffs: [i64; 5], conductor: u64, known_rank: Option<u32>) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = coeffs.map(|c| c as i128);
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4 = b2 * b2 - 24 * b4;
        let c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
        let disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
        if disc == 0 {
            return Err(Error::InvalidCurve("singular model: discriminant is zero".into()));
        }
        if conductor == 0 {
            return Err(Error::InvalidCurve("conductor must be positive".into()));
        }
        let mut rest = disc;
        for (p, _) in factor(conductor) {
            let pi = p as i128;
            if disc % pi != 0 {
                return Err(Error::InvalidCurve(format!(
                    "conductor prime {p} does not divide the discriminant {disc}"
                )));
            }
            while rest % pi == 0 {
                rest /= pi;
            }
            if p >= 5 {
                let v_c4 = if c4 == 0 { u32::MAX } else { valuation(c4, p) };
                let v_disc = valuation(disc, p);
                if v_c4 >= 4 && v_disc >= 12 {
                    return Err(Error::NonminimalModel { p, v_c4, v_disc });
                }
            }
        }
        if rest.abs() != 1 {
            return Err(Error::InvalidCurve(format!(
                "discriminant {disc} has prime factors outside the conductor {conductor} \
                 (non-minimal model or wrong conductor)"
            )));
        }
        Ok(EllipticCurve {
            a1: coeffs[0],
            a2: coeffs[1],
            a3: coeffs[2],
            a4: coeffs[3],
            a6: coeffs[4],
            discriminant: disc,
            conductor,
            known_rank,
            c4,
            c6,
        })
    }

    pub fn from_input(input: &CurveInput) -> Result<Self> {
        Self::new(
            [input.a1, input.a2, input.a3, input.a4, input.a6],
            input.conductor,
            input.rank,
        )
    }

    pub fn to_input(&self) -> CurveInput {
        CurveInput {
            a1: self.a1,
            a2: self.a2,
            a3: self.a3,
            a4: self.a4,
            a6: self.a6,
            conductor: self.conductor,
            rank: self.known_rank,
        }
    }

    /// 11a1: y^2 + y = x^3 - x^2 - 10x - 20, rank 0.
    pub fn curve_11a1() -> Self {
        Self::new([0, -1, 1, -10, -20], 11, Some(0)).expect("valid model")
    }

    /// 37a1: y^2 + y = x^3 - x, rank 1.
    pub fn curve_37a1() -> Self {
        Self::new([0, 0, 1, -1, 0], 37, Some(1)).expect("valid model")
    }

    /// 389a1: y^2 + y = x^3 + x^2 - 2x, rank 2.
    pub fn curve_389a1() -> Self {
        Self::new([0, 1, 1, -2, 0], 389, Some(2)).expect("valid model")
    }

    pub fn builtin(label: &str) -> Option<Self> {
        match label {
            "11a1" => Some(Self::curve_11a1()),
            "37a1" => Some(Self::curve_37a1()),
            "389a1" => Some(Self::curve_389a1()),
            _ => None,
        }
    }

    pub fn coeffs(&self) -> [i64; 5] {
        [self.a1, self.a2, self.a3, self.a4, self.a6]
    }

    pub fn c4(&self) -> i128 {
        self.c4
    }

    pub fn c6(&self) -> i128 {
        self.c6
    }

    pub fn has_good_reduction(&self, p: u64) -> bool {
        self.discriminant % p as i128 != 0
    }

    fn short_model(&self, p: u64) -> ShortCurve {
        ShortCurve {
            a: rem_euclid_i128(-27 * self.c4, p),
            b: rem_euclid_i128(-54 * self.c6, p),
            p,
        }
    }

    /// `#E(F_p)` including the point at infinity, for good primes only.
    pub fn count_points(&self, p: u64) -> Result<u64> {
        if !self.has_good_reduction(p) {
            return Err(Error::BadReduction { p });
        }
        Ok(if p < 5 {
            count::count_long_model(self.coeffs(), p)
        } else {
            self.short_model(p).count()
        })
    }

    /// Direct enumeration of the long model (slow; used as an oracle).
    pub fn count_points_long(&self, p: u64) -> u64 {
        count::count_long_model(self.coeffs(), p)
    }

    pub fn reduction_type(&self, p: u64) -> LocalData {
        if self.has_good_reduction(p) {
            let n = self.count_points(p).expect("good prime");
            return LocalData {
                p,
                reduction: Reduction::Good,
                a_p: p as i64 + 1 - n as i64,
            };
        }
        let (reduction, a_p) = if self.c4 % p as i128 != 0 {
            let split = if p == 2 {
                self.count_points_long(2) == 2
            } else {
                legendre(rem_euclid_i128(-self.c6, p), p) == 1
            };
            if split {
                (Reduction::SplitMultiplicative, 1)
            } else {
                (Reduction::NonsplitMultiplicative, -1)
            }
        } else {
            (Reduction::Additive, 0)
        };
        LocalData { p, reduction, a_p }
    }

    pub fn a_f(&self, p: u64) -> f64 {
        self.reduction_type(p).a_f()
    }

    pub fn a_f_sq(&self, p: u64) -> f64 {
        self.reduction_type(p).a_f_sq()
    }

    /// `sum_{p <= x} a_f(p^2) log p` over all primes, bad ones included.
    pub fn theta_f(&self, x: f64) -> f64 {
        let table = ApTable::compute(self, x.floor() as u64);
        table.theta_f(x)
    }

    /// SHA-256 over the model and conductor; keys on-disk caches.
    pub fn fingerprint(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update(format!(
            "{},{},{},{},{};{}",
            self.a1, self.a2, self.a3, self.a4, self.a6, self.conductor
        ));
        hex::encode(h.finalize())
    }
}

/// Local data for every prime up to a bound, in increasing order.
#[derive(Clone, Debug, Default)]
pub struct ApTable {
    pub limit: u64,
    pub entries: Vec<LocalData>,
}

impl ApTable {
    /// Point counts over disjoint primes run in parallel; the output order is
    /// always increasing p.
    pub fn compute(curve: &EllipticCurve, limit: u64) -> Self {
        let primes = primes_up_to(limit);
        let entries = primes.par_iter().map(|&p| curve.reduction_type(p)).collect();
        ApTable { limit, entries }
    }

    /// Extends the table to a larger bound, computing only the new primes.
    pub fn extend(&mut self, curve: &EllipticCurve, limit: u64) {
        if limit <= self.limit {
            return;
        }
        let fresh: Vec<u64> = crate::arith::PrimeRange::new(self.limit + 1, limit).collect();
        let mut more: Vec<LocalData> = fresh.par_iter().map(|&p| curve.reduction_type(p)).collect();
        self.entries.append(&mut more);
        self.limit = limit;
    }

    pub fn get(&self, p: u64) -> Option<&LocalData> {
        self.entries
            .binary_search_by_key(&p, |d| d.p)
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|d| d.p)
    }

    /// Sequential sum in increasing p so that results are bit-reproducible.
    pub fn theta_f(&self, x: f64) -> f64 {
        assert!(x <= self.limit as f64 + 1.0, "table too short for theta_f");
        self.entries
            .iter()
            .take_while(|d| (d.p as f64) <= x)
            .map(|d| d.a_f_sq() * (d.p as f64).ln())
            .sum()
    }
}
