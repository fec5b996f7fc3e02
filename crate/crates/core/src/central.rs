//! Central values and analytic ranks of `L(s, E x chi)` from a smoothed
//! approximate functional equation.
//!
//! In arithmetic normalization the completed function
//! `Lambda(s) = (sqrt(N)/2pi)^s Gamma(s) L(s)` satisfies
//! `Lambda(s) = w * conj-Lambda(2 - s)` and
//!
//! ```text
//! Lambda^(k)(1) = sum_n a_n G_k(y_n) + w (-1)^k sum_n conj(a_n) G_k(y_n),
//! y_n = 2 pi n / sqrt(N),   G_k(y) = int_1^inf e^{-y t} (log t)^k dt.
//! ```
//!
//! All values below are divided by `sqrt(N)/2pi` so they are written in the
//! normalized coefficients `c_n = a_n chi(n) / sqrt(n)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::{enumerate_family, DirichletCharacter, Family, RootTable, WeightFunction};
use crate::curve::{ApTable, EllipticCurve, Reduction};
use crate::error::{Error, Result};
use crate::quad::GaussLegendre;

/// Highest derivative order examined.
pub const MAX_ORDER: usize = 6;
/// Default relative zero threshold.
pub const DEFAULT_THRESHOLD: f64 = 1e-3;
/// Sums run while `y_n <= TRUNCATION_Y`; the tail is below `e^{-TRUNCATION_Y}`.
pub const TRUNCATION_Y: f64 = 50.0;
/// Scales `t` at which `F(1/t) = w t^2 conj-F(t)` is imposed.
const ROOT_SCALES: [f64; 5] = [0.9, 0.95, 1.0, 1.05, 1.1];

type Orders = [f64; MAX_ORDER + 1];

/// Number of coefficients needed for conductor `n`.
pub fn required_terms(conductor: u64) -> usize {
    (TRUNCATION_Y * (conductor as f64).sqrt() / (2.0 * PI)).ceil() as usize
}

struct KernelRule {
    gl: GaussLegendre,
}

impl KernelRule {
    fn new() -> Self {
        KernelRule {
            gl: GaussLegendre::new(16),
        }
    }

    /// `G_k(y)` for `k = 0..=MAX_ORDER`.
    ///
    /// For `y >= 1`: `G_k(y) = e^{-y}/y int_0^inf e^{-s} log(1 + s/y)^k ds` on
    /// geometrically graded panels. For `y < 1`: `G_k(y) = int_0^inf
    /// exp(v - y e^v) v^k dv`, which keeps the peak near `v = log(1/y)` resolved.
    fn eval(&self, y: f64) -> Orders {
        let mut acc = [0.0; MAX_ORDER + 1];
        let mut add = |weight: f64, log_val: f64| {
            let mut pw = weight;
            for slot in acc.iter_mut() {
                *slot += pw;
                pw *= log_val;
            }
        };
        if y >= 1.0 {
            let edges = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 48.0];
            for w in edges.windows(2) {
                let (a, b) = (w[0], w[1]);
                let half = 0.5 * (b - a);
                let mid = 0.5 * (a + b);
                for (x, gw) in self.gl.nodes.iter().zip(&self.gl.weights) {
                    let s = mid + half * x;
                    add(gw * half * (-s).exp(), (s / y).ln_1p());
                }
            }
            let scale = (-y).exp() / y;
            acc.iter_mut().for_each(|v| *v *= scale);
        } else {
            let end = (60.0 / y).ln();
            let panels = (end / 0.25).ceil() as usize;
            let h = end / panels as f64;
            for k in 0..panels {
                let mid = (k as f64 + 0.5) * h;
                for (x, gw) in self.gl.nodes.iter().zip(&self.gl.weights) {
                    let v = mid + 0.5 * h * x;
                    add(gw * 0.5 * h * (v - y * v.exp()).exp(), v);
                }
            }
        }
        acc
    }
}

/// `G_k(y)` for `k = 0..=6`.
pub fn g_kernels(y: f64) -> [f64; MAX_ORDER + 1] {
    KernelRule::new().eval(y)
}

/// Tables shared by every L-function of one conductor.
#[derive(Debug)]
pub struct Kernels {
    pub conductor: u64,
    /// `y_n G_k(y_n) / sqrt(n)`, index `n - 1`.
    value: Vec<Orders>,
    /// `sqrt(n) e^{-y_n t}` and `sqrt(n) e^{-y_n / t}` for each root scale.
    forward: Vec<[f64; ROOT_SCALES.len()]>,
    backward: Vec<[f64; ROOT_SCALES.len()]>,
}

impl Kernels {
    pub fn new(conductor: u64) -> Self {
        Self::with_terms(conductor, required_terms(conductor))
    }

    pub fn with_terms(conductor: u64, terms: usize) -> Self {
        let rule = KernelRule::new();
        let step = 2.0 * PI / (conductor as f64).sqrt();
        let mut value = Vec::with_capacity(terms);
        let mut forward = Vec::with_capacity(terms);
        let mut backward = Vec::with_capacity(terms);
        for n in 1..=terms {
            let y = step * n as f64;
            let rn = (n as f64).sqrt();
            let mut g = rule.eval(y);
            g.iter_mut().for_each(|v| *v *= y / rn);
            value.push(g);
            forward.push(ROOT_SCALES.map(|t| rn * (-y * t).exp()));
            backward.push(ROOT_SCALES.map(|t| rn * (-y / t).exp()));
        }
        Kernels {
            conductor,
            value,
            forward,
            backward,
        }
    }

    pub fn terms(&self) -> usize {
        self.value.len()
    }
}

/// Raw Dirichlet coefficients `a_n` of `L(s, E)`, index `n - 1`.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub a: Vec<i64>,
}

impl CoefficientTable {
    pub fn for_curve(curve: &EllipticCurve, terms: usize) -> Self {
        Self::from_table(&ApTable::compute(curve, terms as u64), terms)
    }

    /// Fills `a_n` multiplicatively: `a_{p^{k+1}} = a_p a_{p^k} - p a_{p^{k-1}}`
    /// at good `p`, `a_{p^k} = a_p^k` at bad `p`.
    pub fn from_table(table: &ApTable, terms: usize) -> Self {
        assert!(table.limit >= terms as u64, "a_p table too short");
        let mut a = vec![0i64; terms + 1];
        if terms >= 1 {
            a[1] = 1;
        }
        // smallest prime factor sieve
        let mut spf = vec![0u32; terms + 1];
        for d in &table.entries {
            let p = d.p as usize;
            if p > terms {
                break;
            }
            let mut m = p;
            while m <= terms {
                if spf[m] == 0 {
                    spf[m] = p as u32;
                }
                m += p;
            }
        }
        let mut local: BTreeMap<u64, (i64, bool)> = BTreeMap::new();
        for d in table.entries.iter().take_while(|d| d.p as usize <= terms) {
            local.insert(d.p, (d.a_p, d.reduction == Reduction::Good));
        }
        for n in 2..=terms {
            let p = spf[n] as usize;
            let mut m = n;
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            let pk = n / m;
            if m > 1 {
                a[n] = a[pk] * a[m];
                continue;
            }
            let (ap, good) = local[&(p as u64)];
            a[n] = if k == 1 {
                ap
            } else if good {
                ap * a[n / p] - p as i64 * a[n / (p * p)]
            } else {
                ap * a[n / p]
            };
        }
        a.remove(0);
        CoefficientTable { a }
    }

    /// Normalized twisted coefficients `a_n chi(n) / sqrt(n)` for `n <= terms`.
    pub fn twisted(&self, chi: Option<(&DirichletCharacter, &RootTable)>, terms: usize) -> Vec<Complex64> {
        (1..=terms)
            .map(|n| {
                let c = self.a[n - 1] as f64 / (n as f64).sqrt();
                match chi {
                    None => Complex64::new(c, 0.0),
                    Some((chi, roots)) => roots.value(chi.eval(n as u64)) * c,
                }
            })
            .collect()
    }
}

/// Completed L-function data for one twist.
#[derive(Clone, Debug)]
pub struct CompletedLSeries {
    /// `c_n = a_f(n) chi(n)`, index `n - 1`.
    pub coefficients: Vec<Complex64>,
    pub conductor: u64,
    pub root_number: Complex64,
    pub self_dual: bool,
    kernels: Arc<Kernels>,
}

impl CompletedLSeries {
    pub fn new(coefficients: Vec<Complex64>, conductor: u64, self_dual: bool) -> Result<Self> {
        let kernels = Arc::new(Kernels::new(conductor));
        Self::with_kernels(coefficients, kernels, self_dual)
    }

    pub fn with_kernels(mut coefficients: Vec<Complex64>, kernels: Arc<Kernels>, self_dual: bool) -> Result<Self> {
        let required = required_terms(kernels.conductor);
        if coefficients.len() < required || kernels.terms() < required {
            return Err(Error::InsufficientCoefficients {
                required,
                available: coefficients.len().min(kernels.terms()),
            });
        }
        coefficients.truncate(kernels.terms());
        let root_number = root_number_numeric(&coefficients, &kernels)?;
        Ok(CompletedLSeries {
            coefficients,
            conductor: kernels.conductor,
            root_number,
            self_dual,
            kernels,
        })
    }

    /// Skips the numerical root-number solve.
    pub fn with_root_number(
        coefficients: Vec<Complex64>,
        kernels: Arc<Kernels>,
        root_number: Complex64,
        self_dual: bool,
    ) -> Result<Self> {
        let required = required_terms(kernels.conductor);
        if coefficients.len() < required || kernels.terms() < required {
            return Err(Error::InsufficientCoefficients {
                required,
                available: coefficients.len().min(kernels.terms()),
            });
        }
        Ok(CompletedLSeries {
            coefficients,
            conductor: kernels.conductor,
            root_number,
            self_dual,
            kernels,
        })
    }

    pub fn untwisted(curve: &EllipticCurve) -> Result<Self> {
        let terms = required_terms(curve.conductor);
        let table = CoefficientTable::for_curve(curve, terms);
        Self::new(table.twisted(None, terms), curve.conductor, true)
    }

    pub fn twisted(
        curve: &EllipticCurve,
        chi: &DirichletCharacter,
        table: &CoefficientTable,
        kernels: Arc<Kernels>,
    ) -> Result<Self> {
        if crate::arith::gcd(chi.conductor, curve.conductor) != 1 {
            return Err(Error::ConductorClash {
                conductor: chi.conductor,
                curve_conductor: curve.conductor,
            });
        }
        let terms = kernels.terms().min(table.a.len());
        let roots = RootTable::new(chi.order);
        let coeffs = table.twisted(Some((chi, &roots)), terms);
        Self::with_kernels(coeffs, kernels, false)
    }

    /// `(S_k, M_k)` with `S_k = sum c_n/sqrt(n) y_n G_k(y_n)` and
    /// `M_k = sum |c_n|/sqrt(n) y_n G_k(y_n)`.
    fn half_sums(&self) -> ([Complex64; MAX_ORDER + 1], Orders) {
        let mut s = [Complex64::new(0.0, 0.0); MAX_ORDER + 1];
        let mut m = [0.0; MAX_ORDER + 1];
        for (c, g) in self.coefficients.iter().zip(&self.kernels.value) {
            let abs = c.norm();
            for k in 0..=MAX_ORDER {
                s[k] += c * g[k];
                m[k] += abs * g[k].abs();
            }
        }
        (s, m)
    }

    fn combine(&self, s: Complex64, k: usize) -> Complex64 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s + self.root_number * s.conj() * sign
    }

    /// `k`-th derivative of the completed function at the center, divided by
    /// `sqrt(N)/2pi`.
    pub fn smoothed_value(&self, k: usize) -> Result<Complex64> {
        if k > MAX_ORDER {
            return Err(Error::RankOverflow { max_order: MAX_ORDER as u32 });
        }
        let (s, _) = self.half_sums();
        Ok(self.combine(s[k], k))
    }

    /// Sum of absolute values of the terms making up `smoothed_value(k)`.
    pub fn mass(&self, k: usize) -> f64 {
        2.0 * self.half_sums().1[k.min(MAX_ORDER)]
    }

    /// Smallest `k <= 6` with `|value_k| > threshold * mass_k`.
    pub fn analytic_rank(&self, threshold: f64) -> Result<RankEstimate> {
        let (s, m) = self.half_sums();
        let mut max_vanishing_ratio = 0.0f64;
        for k in 0..=MAX_ORDER {
            let v = self.combine(s[k], k);
            let mass = 2.0 * m[k];
            let ratio = if mass > 0.0 { v.norm() / mass } else { 0.0 };
            if ratio > threshold {
                let scale = (self.conductor as f64).sqrt() / (2.0 * PI);
                return Ok(RankEstimate {
                    order: k as u32,
                    leading_coefficient: v * scale,
                    certified_margin: ratio - threshold,
                    max_vanishing_ratio,
                });
            }
            max_vanishing_ratio = max_vanishing_ratio.max(ratio);
        }
        Err(Error::RankOverflow { max_order: MAX_ORDER as u32 })
    }
}

/// Root number from `F(1/t) = w t^2 conj-F(t)`, `F(t) = sum a_n e^{-2 pi n t/sqrt N}`,
/// imposed at five scales near `t = 1` and solved by least squares.
pub fn root_number_numeric(coefficients: &[Complex64], kernels: &Kernels) -> Result<Complex64> {
    let mut lhs = [Complex64::new(0.0, 0.0); ROOT_SCALES.len()];
    let mut rhs = [Complex64::new(0.0, 0.0); ROOT_SCALES.len()];
    let mut mass = 0.0;
    for ((c, f), b) in coefficients.iter().zip(&kernels.forward).zip(&kernels.backward) {
        for i in 0..ROOT_SCALES.len() {
            lhs[i] += c * b[i];
            rhs[i] += c.conj() * f[i] * ROOT_SCALES[i] * ROOT_SCALES[i];
        }
        mass += c.norm() * f[2];
    }
    let den: f64 = rhs.iter().map(|b| b.norm_sqr()).sum();
    if mass == 0.0 || den.sqrt() < 1e-8 * mass {
        return Err(Error::IllConditioned(format!(
            "functional-equation system is nearly singular (|b| = {:.3e}, mass = {:.3e})",
            den.sqrt(),
            mass
        )));
    }
    let num: Complex64 = lhs.iter().zip(&rhs).map(|(a, b)| a * b.conj()).sum();
    let w = num / den;
    if (w.norm() - 1.0).abs() > 1e-4 {
        return Err(Error::IllConditioned(format!("|root number| = {} is not 1", w.norm())));
    }
    Ok(w)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankEstimate {
    pub order: u32,
    /// `Lambda^(order)` at the center.
    #[serde(serialize_with = "ser_complex")]
    pub leading_coefficient: Complex64,
    /// `|value| / mass - threshold` at the accepted order.
    pub certified_margin: f64,
    /// Largest `|value| / mass` among the orders judged to vanish.
    pub max_vanishing_ratio: f64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

pub fn analytic_rank(series: &CompletedLSeries, threshold: f64) -> Result<RankEstimate> {
    series.analytic_rank(threshold)
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistRank {
    pub conductor: u64,
    pub char_index: usize,
    /// `None` when no derivative up to order 6 cleared the threshold.
    pub order: Option<u32>,
    pub margin: f64,
    /// Largest `|value| / mass` among the orders judged to vanish.
    pub vanishing_ratio: f64,
    pub omega_re: f64,
    pub omega_im: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RankSummary {
    pub l: u32,
    #[serde(rename = "X")]
    pub x: f64,
    pub threshold: f64,
    /// Analytic rank of `E` itself.
    pub curve_rank: u32,
    pub known_rank: Option<u32>,
    pub family_size: usize,
    pub weighted_family_size: f64,
    pub field_count: usize,
    /// Weighted average of `r_F = r_Q + sum_chi ord` over fields.
    pub field_average_rank: f64,
    /// Weighted average order over characters.
    pub character_average_rank: f64,
    /// Weighted share of characters with a vanishing central value.
    pub vanishing_proportion: f64,
    /// Conjugate pairs with equal orders, over all complete pairs.
    pub conjugate_pairs_equal: usize,
    pub conjugate_pairs: usize,
    pub overflow_count: usize,
    pub excluded_fields: usize,
    #[serde(skip)]
    pub twists: Vec<TwistRank>,
}

impl RankSummary {
    /// `conductor,char_index,order,margin,re_omega,im_omega`
    pub fn to_csv(&self) -> String {
        use crate::report::fmt_num;
        let mut out = String::from("conductor,char_index,order,margin,re_omega,im_omega\n");
        for t in &self.twists {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                t.conductor,
                t.char_index,
                t.order.map_or("overflow".to_string(), |o| o.to_string()),
                fmt_num(t.margin),
                fmt_num(t.omega_re),
                fmt_num(t.omega_im)
            ));
        }
        out
    }
}

/// Ranks of all twists in a family, grouped by conductor so kernel tables are
/// built once per conductor.
pub fn family_ranks(curve: &EllipticCurve, family: &Family, threshold: f64) -> Result<Vec<TwistRank>> {
    let Some(max_q) = family.characters.iter().map(|c| c.conductor).max() else {
        return Ok(Vec::new());
    };
    let terms = required_terms(curve.conductor * max_q * max_q);
    let table = CoefficientTable::for_curve(curve, terms);
    let mut groups: Vec<(u64, Vec<usize>)> = Vec::new();
    for (i, c) in family.characters.iter().enumerate() {
        match groups.last_mut() {
            Some((q, idx)) if *q == c.conductor => idx.push(i),
            _ => groups.push((c.conductor, vec![i])),
        }
    }
    let per_group: Vec<Result<Vec<TwistRank>>> = groups
        .par_iter()
        .map(|(q, idx)| {
            let kernels = Arc::new(Kernels::new(curve.conductor * q * q));
            idx.iter()
                .map(|&i| {
                    let chi = &family.characters[i];
                    let series = CompletedLSeries::twisted(curve, chi, &table, kernels.clone())?;
                    let (order, margin, vanishing_ratio) = match series.analytic_rank(threshold) {
                        Ok(r) => (Some(r.order), r.certified_margin, r.max_vanishing_ratio),
                        Err(Error::RankOverflow { .. }) => (None, 0.0, threshold),
                        Err(e) => return Err(e),
                    };
                    Ok(TwistRank {
                        conductor: *q,
                        char_index: i,
                        order,
                        margin,
                        vanishing_ratio,
                        omega_re: series.root_number.re,
                        omega_im: series.root_number.im,
                    })
                })
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(family.len());
    for g in per_group {
        out.extend(g?);
    }
    Ok(out)
}

/// Per-twist ranks, the field-level `r_F(E) = r_Q(E) + sum_chi ord` and its
/// weighted average.
pub fn family_rank_statistics(
    curve: &EllipticCurve,
    l: u32,
    x: f64,
    weight: WeightFunction,
    threshold: f64,
) -> Result<RankSummary> {
    let family = enumerate_family(l, x, curve.conductor, weight)?;
    rank_statistics_for(curve, &family, threshold)
}

pub fn rank_statistics_for(curve: &EllipticCurve, family: &Family, threshold: f64) -> Result<RankSummary> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let curve_rank = CompletedLSeries::untwisted(curve)?.analytic_rank(threshold)?.order;
    let twists = family_ranks(curve, family, threshold)?;

    let mut conjugate_pairs = 0;
    let mut conjugate_pairs_equal = 0;
    for i in (0..twists.len()).step_by(2) {
        let j = family.conjugate_index(i);
        if j < twists.len() {
            conjugate_pairs += 1;
            if twists[i].order == twists[j].order {
                conjugate_pairs_equal += 1;
            }
        }
    }

    let (mut w_chars, mut w_ranks, mut w_vanish) = (0.0, 0.0, 0.0);
    for (t, w) in twists.iter().zip(&family.weights) {
        if let Some(o) = t.order {
            w_chars += w;
            w_ranks += w * o as f64;
            if o > 0 {
                w_vanish += w;
            }
        }
    }
    let fields = family.fields();
    let (mut w_fields, mut w_field_ranks, mut excluded_fields) = (0.0, 0.0, 0);
    for members in &fields {
        let orders: Option<Vec<u32>> = members.iter().map(|&i| twists[i].order).collect();
        match orders {
            Some(orders) => {
                let w = family.weights[members[0]];
                let r_f = curve_rank + orders.iter().sum::<u32>();
                w_fields += w;
                w_field_ranks += w * r_f as f64;
            }
            None => excluded_fields += 1,
        }
    }
    let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else { 0.0 };
    Ok(RankSummary {
        l: family.l,
        x: family.x,
        threshold,
        curve_rank,
        known_rank: curve.known_rank,
        family_size: family.len(),
        weighted_family_size: family.weighted_count(),
        field_count: fields.len(),
        field_average_rank: ratio(w_field_ranks, w_fields),
        character_average_rank: ratio(w_ranks, w_chars),
        vanishing_proportion: ratio(w_vanish, w_chars),
        conjugate_pairs_equal,
        conjugate_pairs,
        overflow_count: twists.iter().filter(|t| t.order.is_none()).count(),
        excluded_fields,
        twists,
    })
}
