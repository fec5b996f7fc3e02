//! One-level densities from the prime side of the explicit formula.
//!
//! Fourier convention: `phi_hat(u) = int phi(x) e^{-2 pi i u x} dx`. Under it
//! the Fejer pair below satisfies `phi(0) = sigma^2/4` and
//! `phi_hat(0) = sigma/4`. Zeros are never located; the density of a single
//! L-function is the truncated prime-side expression
//!
//! ```text
//! D = phi_hat(0) log(cond)/log L
//!     - 2/log L * sum_p  log p/sqrt(p) * a(p)   * phi_hat(log p / log L)
//!     - 2/log L * sum_p  log p/p       * a(p^2) * phi_hat(2 log p / log L)
//! ```
//!
//! with `L = X^2`. The gamma-factor integral and prime powers `p^k, k >= 3`
//! are omitted; they are `O(1/log L)` and reported as an error budget.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characters::{DirichletCharacter, Family, WeightFunction};
use crate::curve::{ApTable, EllipticCurve};
use crate::error::{Error, Result};
use crate::quad::GaussLegendre;

/// Constant `C` of the `C / log L` error budget attached to every report.
pub const DEFAULT_ERROR_CONSTANT: f64 = 1.0;

/// An even test function whose transform is supported in `[-sigma, sigma]`.
pub trait TestFunction: Send + Sync {
    fn sigma(&self) -> f64;
    fn phi(&self, x: f64) -> f64;
    fn phi_hat(&self, u: f64) -> f64;
    fn phi0(&self) -> f64;
    fn phihat0(&self) -> f64;
}

/// `phi(x) = sin^2(pi sigma x) / (2 pi x)^2`, `phi_hat(u) = (sigma - |u|)/4` on `|u| <= sigma`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fejer {
    sigma: f64,
}

impl Fejer {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma <= 1.0) {
            return Err(Error::Config(format!("sigma = {sigma} must lie in (0, 1]")));
        }
        Ok(Fejer { sigma })
    }
}

impl TestFunction for Fejer {
    fn sigma(&self) -> f64 {
        self.sigma
    }

    fn phi(&self, x: f64) -> f64 {
        if x == 0.0 {
            return self.phi0();
        }
        let s = (PI * self.sigma * x).sin();
        s * s / (4.0 * PI * PI * x * x)
    }

    fn phi_hat(&self, u: f64) -> f64 {
        let a = u.abs();
        if a >= self.sigma {
            0.0
        } else {
            0.5 * (0.5 * self.sigma - 0.5 * a)
        }
    }

    fn phi0(&self) -> f64 {
        self.sigma * self.sigma / 4.0
    }

    fn phihat0(&self) -> f64 {
        self.sigma / 4.0
    }
}

/// Numerical Fourier-pair residuals: `(int phi_hat - phi(0), int phi - phi_hat(0),
/// 2 int_0^inf phi(x) cos(2 pi u x) dx - phi_hat(u) at u = sigma/2)`.
pub fn fourier_residuals(phi: &dyn TestFunction) -> (f64, f64, f64) {
    let sigma = phi.sigma();
    let gl = GaussLegendre::new(10);
    let int_hat = gl.integrate(|u| phi.phi_hat(u), -sigma, 0.0) + gl.integrate(|u| phi.phi_hat(u), 0.0, sigma);

    // One panel per half period of sin^2(pi sigma x) out to A = K / sigma; the
    // tail of the mean value 1/(8 pi^2 x^2) is added in closed form.
    let periods = 2000usize;
    let end = periods as f64 / sigma;
    let int_phi = 2.0 * (gl.composite(|x| phi.phi(x), 0.0, end, 2 * periods) + 1.0 / (8.0 * PI * PI * end));
    let u = sigma / 2.0;
    let cos_transform = 2.0 * gl.composite(|x| phi.phi(x) * (2.0 * PI * u * x).cos(), 0.0, end, 4 * periods);
    (
        int_hat - phi.phi0(),
        int_phi - phi.phihat0(),
        cos_transform - phi.phi_hat(u),
    )
}

/// Average rank bound for a unitary family: `phi_hat(0) / phi(0)`.
pub fn rank_bound_cyclic(phi: &dyn TestFunction) -> f64 {
    phi.phihat0() / phi.phi0()
}

/// Average rank bound for an orthogonal family: `(phi_hat(0) + phi(0)/2) / phi(0)`.
pub fn rank_bound_sd(phi: &dyn TestFunction) -> f64 {
    (phi.phihat0() + phi.phi0() / 2.0) / phi.phi0()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryType {
    /// Predicts `phi_hat(0)`.
    Unitary,
    /// Predicts `phi_hat(0) + phi(0)/2`.
    Orthogonal,
}

impl SymmetryType {
    pub fn predicted(&self, phi: &dyn TestFunction) -> f64 {
        match self {
            SymmetryType::Unitary => phi.phihat0(),
            SymmetryType::Orthogonal => phi.phihat0() + phi.phi0() / 2.0,
        }
    }
}

/// Family-averaged (or single) one-level density with its decomposition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub conductor_term: f64,
    pub s1: f64,
    pub s2: f64,
    pub total: f64,
    pub predicted: f64,
    pub family_size: f64,
    #[serde(rename = "L_param")]
    pub l_param: f64,
    pub symmetry: SymmetryType,
    /// `C / log L` for the omitted gamma-factor and higher prime-power terms.
    pub error_budget: f64,
    /// Members whose local data was unknown at some prime (contributed zero there).
    pub unknown_local_data: usize,
}

impl DensityReport {
    pub fn gap(&self) -> f64 {
        self.total - self.predicted
    }

    pub(crate) fn from_parts(
        conductor_term: f64,
        s1: f64,
        s2: f64,
        predicted: f64,
        family_size: f64,
        x: f64,
        symmetry: SymmetryType,
    ) -> Self {
        let l_param = x * x;
        DensityReport {
            conductor_term,
            s1,
            s2,
            total: conductor_term + s1 + s2,
            predicted,
            family_size,
            l_param,
            symmetry,
            error_budget: DEFAULT_ERROR_CONSTANT / l_param.ln(),
            unknown_local_data: 0,
        }
    }
}

/// Per-prime weights shared by every member of a family at fixed `X` and `phi`.
#[derive(Clone, Debug)]
pub struct PrimeSide {
    pub log_l: f64,
    /// `(p, log p / sqrt p * a_f(p) * phi_hat(log p / log L))` for `p <= cutoff1`.
    pub first: Vec<(u64, f64)>,
    /// `(p, log p / p * a_f(p^2) * phi_hat(2 log p / log L))` for `p <= cutoff2`.
    pub second: Vec<(u64, f64)>,
}

impl PrimeSide {
    /// Prime sums cut at `floor(L^sigma)` and `floor(L^(sigma/2))`, each
    /// multiplied by `cutoff_scale` (1 for the standard truncation).
    pub fn new(table: &ApTable, x: f64, phi: &dyn TestFunction, cutoff_scale: f64) -> Self {
        let (c1, c2) = prime_cutoffs(x, phi.sigma());
        let c1 = (c1 as f64 * cutoff_scale).floor() as u64;
        let c2 = (c2 as f64 * cutoff_scale).floor() as u64;
        assert!(table.limit >= c1, "a_p table shorter than the prime cutoff");
        let log_l = 2.0 * x.ln();
        let mut first = Vec::new();
        let mut second = Vec::new();
        for d in table.entries.iter().take_while(|d| d.p <= c1) {
            let lp = (d.p as f64).ln();
            first.push((d.p, lp / (d.p as f64).sqrt() * d.a_f() * phi.phi_hat(lp / log_l)));
            if d.p <= c2 {
                second.push((d.p, lp / d.p as f64 * d.a_f_sq() * phi.phi_hat(2.0 * lp / log_l)));
            }
        }
        PrimeSide { log_l, first, second }
    }

    pub fn max_prime(&self) -> u64 {
        self.first.last().map_or(0, |&(p, _)| p)
    }

    /// `(s1, s2)` for local coefficients `a(p)` and `a(p^2)` of the twisting object.
    pub fn sums<F: Fn(u64) -> f64, G: Fn(u64) -> f64>(&self, at_p: F, at_p2: G) -> (f64, f64) {
        let scale = -2.0 / self.log_l;
        let s1: f64 = self.first.iter().map(|&(p, w)| w * at_p(p)).sum();
        let s2: f64 = self.second.iter().map(|&(p, w)| w * at_p2(p)).sum();
        (scale * s1, scale * s2)
    }
}

/// `(floor(L^sigma), floor(L^(sigma/2)))` with `L = X^2`.
pub fn prime_cutoffs(x: f64, sigma: f64) -> (u64, u64) {
    let log_l = 2.0 * x.ln();
    let c1 = (sigma * log_l).exp();
    let c2 = (0.5 * sigma * log_l).exp();
    // guard against exp() landing a hair below an integer
    let fl = |v: f64| {
        let r = v.round();
        if (v - r).abs() < 1e-9 * v.max(1.0) {
            r as u64
        } else {
            v.floor() as u64
        }
    };
    (fl(c1), fl(c2))
}

fn twist_terms(
    curve_conductor: u64,
    chi: &DirichletCharacter,
    side: &PrimeSide,
    phi: &dyn TestFunction,
    roots: &crate::characters::RootTable,
) -> (f64, f64, f64) {
    let q = chi.conductor as f64;
    let conductor_term = phi.phihat0() * (curve_conductor as f64 * q * q).ln() / side.log_l;
    let (s1, s2) = side.sums(
        |p| roots.real(chi.eval(p)),
        |p| roots.real(chi.eval(p * p)),
    );
    (conductor_term, s1, s2)
}

/// Density for `L(s, E x chi)` at parameter `X`.
pub fn one_level_density_twist(
    curve: &EllipticCurve,
    chi: &DirichletCharacter,
    x: f64,
    phi: &dyn TestFunction,
) -> Result<DensityReport> {
    one_level_density_twist_scaled(curve, chi, x, phi, 1.0)
}

/// As [`one_level_density_twist`] with both prime cutoffs multiplied by `cutoff_scale`.
pub fn one_level_density_twist_scaled(
    curve: &EllipticCurve,
    chi: &DirichletCharacter,
    x: f64,
    phi: &dyn TestFunction,
    cutoff_scale: f64,
) -> Result<DensityReport> {
    if crate::arith::gcd(chi.conductor, curve.conductor) != 1 {
        return Err(Error::ConductorClash {
            conductor: chi.conductor,
            curve_conductor: curve.conductor,
        });
    }
    let (c1, _) = prime_cutoffs(x, phi.sigma());
    let limit = (c1 as f64 * cutoff_scale).floor() as u64;
    let table = ApTable::compute(curve, limit);
    let side = PrimeSide::new(&table, x, phi, cutoff_scale);
    let roots = crate::characters::RootTable::new(chi.order);
    let (ct, s1, s2) = twist_terms(curve.conductor, chi, &side, phi, &roots);
    Ok(DensityReport::from_parts(ct, s1, s2, phi.phihat0(), 1.0, x, SymmetryType::Unitary))
}

/// Weighted family average over an enumerated character family.
pub fn family_average_over(
    curve: &EllipticCurve,
    family: &Family,
    table: &ApTable,
    phi: &dyn TestFunction,
    cutoff_scale: f64,
) -> Result<DensityReport> {
    let total_weight = family.weighted_count();
    if family.is_empty() || total_weight <= 0.0 {
        return Err(Error::EmptyFamily);
    }
    if let Some(chi) = family
        .characters
        .iter()
        .find(|c| crate::arith::gcd(c.conductor, curve.conductor) != 1)
    {
        return Err(Error::ConductorClash {
            conductor: chi.conductor,
            curve_conductor: curve.conductor,
        });
    }
    let side = PrimeSide::new(table, family.x, phi, cutoff_scale);
    let terms: Vec<(f64, f64, f64)> = family
        .characters
        .par_iter()
        .map(|chi| twist_terms(curve.conductor, chi, &side, phi, &family.roots))
        .collect();
    // fixed canonical order for the reduction
    let (mut ct, mut s1, mut s2) = (0.0, 0.0, 0.0);
    for (w, (a, b, c)) in family.weights.iter().zip(&terms) {
        ct += w * a;
        s1 += w * b;
        s2 += w * c;
    }
    Ok(DensityReport::from_parts(
        ct / total_weight,
        s1 / total_weight,
        s2 / total_weight,
        phi.phihat0(),
        total_weight,
        family.x,
        SymmetryType::Unitary,
    ))
}

/// Weighted average of the twisted densities over all primitive order-`l`
/// characters with conductor prime to `Q_E`; predicted value `phi_hat(0)`.
pub fn family_average_cyclic(
    curve: &EllipticCurve,
    l: u32,
    x: f64,
    phi: &dyn TestFunction,
    weight: WeightFunction,
) -> Result<DensityReport> {
    let family = crate::characters::enumerate_family(l, x, curve.conductor, weight)?;
    let (c1, _) = prime_cutoffs(x, phi.sigma());
    let table = ApTable::compute(curve, c1);
    family_average_over(curve, &family, &table, phi, 1.0)
}

/// Checks `phi(0) * sum_i w_i r_i <= family_size * density_total + tolerance`.
pub fn rank_inequality_check(
    weighted_ranks: &[(u32, f64)],
    family_size: f64,
    density_total: f64,
    phi: &dyn TestFunction,
    tolerance: f64,
) -> bool {
    let lhs: f64 = weighted_ranks.iter().map(|&(r, w)| r as f64 * w).sum::<f64>() * phi.phi0();
    lhs <= family_size * density_total + tolerance
}

/// CSV time series `X,total,predicted,gap`.
pub fn series_csv(rows: &[(f64, DensityReport)]) -> String {
    let mut out = String::from("X,total,predicted,gap\n");
    for (x, r) in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            crate::report::fmt_num(*x),
            crate::report::fmt_num(r.total),
            crate::report::fmt_num(r.predicted),
            crate::report::fmt_num(r.gap())
        ));
    }
    out
}
