//! S3 cubic fields: enumeration by discriminant, splitting of primes, the
//! standard-representation coefficients `a_rho` and local densities.
//!
//! Each field is carried with a maximal binary cubic form `(A, B, C, D)`,
//! i.e. one whose associated cubic ring is the full ring of integers. Its
//! discriminant is `D_F` and its factorization mod `p` gives the splitting of
//! `p` at every prime, ramified or not.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factor_i128, gcd, is_square_i128, mul_mod, small_primes};
use crate::curve::{ApTable, EllipticCurve};
use crate::density::{prime_cutoffs, DensityReport, PrimeSide, SymmetryType, TestFunction};
use crate::error::{Error, Result};

/// Number of unramified primes in a field's splitting fingerprint.
pub const FINGERPRINT_PRIMES: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SplittingKind {
    /// Splits completely.
    C1,
    /// Degree-one times degree-two.
    C12,
    /// Inert.
    C123,
    /// `p = P^2 Q`.
    PartialRam,
    /// `p = P^3`.
    TotalRam,
}

impl SplittingKind {
    pub const ALL: [SplittingKind; 5] = [
        SplittingKind::C1,
        SplittingKind::C12,
        SplittingKind::C123,
        SplittingKind::PartialRam,
        SplittingKind::TotalRam,
    ];

    /// `(a_rho(p), a_rho(p^2))`.
    pub fn a_rho(&self) -> (f64, f64) {
        match self {
            SplittingKind::C1 => (2.0, 2.0),
            SplittingKind::C12 => (0.0, 2.0),
            SplittingKind::C123 => (-1.0, -1.0),
            SplittingKind::PartialRam => (1.0, 1.0),
            SplittingKind::TotalRam => (0.0, 0.0),
        }
    }

    pub fn is_ramified(&self) -> bool {
        matches!(self, SplittingKind::PartialRam | SplittingKind::TotalRam)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SplittingKind::C1 => "C1",
            SplittingKind::C12 => "C12",
            SplittingKind::C123 => "C123",
            SplittingKind::PartialRam => "PartialRam",
            SplittingKind::TotalRam => "TotalRam",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplittingDatum {
    pub p: u64,
    pub kind: SplittingKind,
    pub a_rho_p: f64,
    pub a_rho_p2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Signature {
    TotallyReal,
    Complex,
}

impl Signature {
    pub fn as_str(&self) -> &'static str {
        match self {
            Signature::TotallyReal => "TotallyReal",
            Signature::Complex => "Complex",
        }
    }
}

/// Discriminant of `A x^3 + B x^2 y + C x y^2 + D y^3`.
pub fn form_disc([a, b, c, d]: [i128; 4]) -> i128 {
    b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d
}

/// One step towards maximality at `p`: an over-ring's form when `R(f)` is not
/// maximal at `p`, otherwise `None`.
fn enlarge_at(f: [i128; 4], p: u64) -> Option<[i128; 4]> {
    let pi = p as i128;
    if f.iter().all(|c| c % pi == 0) {
        return Some(f.map(|c| c / pi));
    }
    let [a, b, c, d] = f;
    // move a double root mod p to [1:0]
    let g = if a % pi == 0 && b % pi == 0 {
        f
    } else {
        let r = (0..pi).find(|&r| {
            let val = ((a * r + b) * r + c) * r + d;
            let der = (3 * a * r + 2 * b) * r + c;
            val % pi == 0 && der % pi == 0
        })?;
        [((a * r + b) * r + c) * r + d, (3 * a * r + 2 * b) * r + c, 3 * a * r + b, a]
    };
    if g[0] % (pi * pi) == 0 {
        Some([g[0] / (pi * pi), g[1] / pi, g[2], g[3] * pi])
    } else {
        None
    }
}

/// Maximal form containing `R(f)` and its discriminant.
pub fn maximal_form(mut f: [i128; 4]) -> ([i128; 4], i128) {
    let mut disc = form_disc(f);
    assert!(disc != 0, "degenerate form");
    for (p, e) in factor_i128(disc) {
        if e < 2 {
            continue;
        }
        let p2 = (p * p) as i128;
        while disc % p2 == 0 {
            match enlarge_at(f, p) {
                Some(g) => {
                    f = g;
                    disc = form_disc(f);
                }
                None => break,
            }
        }
    }
    (f, disc)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    // m monic
    let dm = m.len() - 1;
    trim(&mut a);
    while a.len() > dm {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let idx = shift + i;
            a[idx] = (a[idx] + p - mul_mod(lead, c, p)) % p;
        }
        trim(&mut a);
    }
    a
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    poly_rem(out, m, p)
}

fn make_monic(mut a: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    if let Some(&lead) = a.last() {
        let inv = crate::arith::inv_mod(lead, p).expect("unit leading coefficient");
        a.iter_mut().for_each(|c| *c = mul_mod(*c, inv, p));
    }
    a
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let bm = make_monic(b, p);
        let r = poly_rem(a, &bm, p);
        a = bm;
        b = r;
    }
    make_monic(a, p)
}

/// Number of distinct roots in `F_p` of a nonzero polynomial (low to high).
pub fn distinct_roots_mod_p(poly: &[u64], p: u64) -> usize {
    let g = make_monic(poly.iter().map(|c| c % p).collect(), p);
    if g.len() <= 1 {
        return 0;
    }
    // x^p mod g by square and multiply
    let mut result = vec![1u64];
    let mut base = poly_rem(vec![0, 1], &g, p);
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &base, &g, p);
        }
        base = poly_mulmod(&base, &base, &g, p);
        e >>= 1;
    }
    let mut h = result;
    h.resize(h.len().max(2), 0);
    h[1] = (h[1] + p - 1) % p;
    poly_gcd(g, h, p).len() - 1
}

/// Splitting of `p` read from the factorization of a maximal form mod `p`.
pub fn form_kind(form: [i128; 4], p: u64) -> SplittingKind {
    let pi = p as i128;
    let m = form.map(|c| c.rem_euclid(pi) as u64);
    let at_infinity = m[0] == 0;
    // f(x, 1) = A x^3 + B x^2 + C x + D
    let affine = [m[3], m[2], m[1], m[0]];
    let nonzero = affine.iter().any(|&c| c != 0);
    let roots = if nonzero { distinct_roots_mod_p(&affine, p) } else { 0 } + at_infinity as usize;
    if form_disc(form) % pi == 0 {
        if roots == 1 {
            SplittingKind::TotalRam
        } else {
            SplittingKind::PartialRam
        }
    } else {
        match roots {
            3 => SplittingKind::C1,
            1 => SplittingKind::C12,
            _ => SplittingKind::C123,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CubicField {
    /// `(a, b, c)` of `x^3 + a x^2 + b x + c`.
    pub poly: [i64; 3],
    pub disc_field: i64,
    /// `disc(poly) / D_F`.
    pub index_sq: i64,
    pub signature: Signature,
    /// Maximal binary cubic form of the ring of integers.
    pub form: [i128; 4],
    /// Kinds at the first 25 primes not dividing `D_F`.
    pub fingerprint: Vec<SplittingKind>,
}

impl CubicField {
    /// Field generated by a root of `x^3 + a x^2 + b x + c`, or `None` when the
    /// polynomial is reducible.
    pub fn from_poly(poly: [i64; 3]) -> Option<Self> {
        let [a, b, c] = poly;
        if !is_irreducible(poly) {
            return None;
        }
        let f = [1, a as i128, b as i128, c as i128];
        let disc_poly = form_disc(f);
        let (form, d) = maximal_form(f);
        let fingerprint = small_primes(1000)
            .into_iter()
            .filter(|&p| d % p as i128 != 0)
            .take(FINGERPRINT_PRIMES)
            .map(|p| form_kind(form, p))
            .collect();
        Some(CubicField {
            poly,
            disc_field: d as i64,
            index_sq: (disc_poly / d) as i64,
            signature: if d > 0 { Signature::TotallyReal } else { Signature::Complex },
            form,
            fingerprint,
        })
    }

    pub fn splitting_type(&self, p: u64) -> SplittingDatum {
        let kind = form_kind(self.form, p);
        let (a_rho_p, a_rho_p2) = kind.a_rho();
        SplittingDatum {
            p,
            kind,
            a_rho_p,
            a_rho_p2,
        }
    }

    pub fn is_cyclic(&self) -> bool {
        is_square_i128(self.disc_field as i128)
    }

    fn rep_key(&self) -> (i64, [i64; 3], [i64; 3]) {
        (self.index_sq, self.poly.map(i64::abs), self.poly)
    }
}

/// Rational root test for a monic cubic.
pub fn is_irreducible([a, b, c]: [i64; 3]) -> bool {
    if c == 0 {
        return false;
    }
    let n = c.unsigned_abs();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            for r in [d, n / d] {
                for s in [r as i128, -(r as i128)] {
                    let (a, b, c) = (a as i128, b as i128, c as i128);
                    if ((s + a) * s + b) * s + c == 0 {
                        return false;
                    }
                }
            }
        }
        d += 1;
    }
    true
}

/// Hunter bound for `T2` of a generator with trace `-a`.
fn hunter_t2(a: i64, x: f64) -> f64 {
    (a * a) as f64 / 3.0 + (2.0 / 3.0) * x.sqrt()
}

/// Coefficient box `(|b| max, |c| max)` that contains a generator of every
/// cubic field with `|D_F| <= X`.
pub fn required_box(x: f64) -> (i64, i64) {
    let t2 = hunter_t2(1, x);
    let b = (t2 + 1e-9).floor() as i64;
    let c = ((t2 / 3.0).powf(1.5) + 1e-9).floor() as i64;
    (b, c)
}

/// `T2 = sum |theta_i|^2` of the roots of `x^3 + a x^2 + b x + c`.
fn t2_of([a, b, c]: [i64; 3], disc: i128) -> f64 {
    let (a, b, c) = (a as f64, b as f64, c as f64);
    if disc > 0 {
        return a * a - 2.0 * b;
    }
    // one real root r, complex pair with |z|^2 = -c / r
    let f = |t: f64| ((t + a) * t + b) * t + c;
    let bound = 1.0 + a.abs().max(b.abs()).max(c.abs());
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    r * r + 2.0 * (-c / r)
}

/// All S3 cubic fields with `|D_F| <= X` and `gcd(D_F, Q_E) = 1`, one per
/// isomorphism class, ordered by `|D_F|`, `D_F`, fingerprint.
pub fn enumerate_cubic_fields(x: f64, curve_conductor: u64) -> Result<Vec<CubicField>> {
    let (b, c) = required_box(x);
    enumerate_cubic_fields_in_box(x, curve_conductor, b, c)
}

/// As [`enumerate_cubic_fields`] with an explicit box; the box must contain
/// the one the discriminant bound requires.
pub fn enumerate_cubic_fields_in_box(
    x: f64,
    curve_conductor: u64,
    b_max: i64,
    c_max: i64,
) -> Result<Vec<CubicField>> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::Config(format!("X = {x} must be >= 1")));
    }
    let (b_req, c_req) = required_box(x);
    if b_max < b_req {
        return Err(Error::EnumerationBoundTooSmall {
            x,
            given: b_max,
            required: b_req,
        });
    }
    if c_max < c_req {
        return Err(Error::EnumerationBoundTooSmall {
            x,
            given: c_max,
            required: c_req,
        });
    }
    let cells: Vec<(i64, i64)> = [0i64, -1]
        .into_iter()
        .flat_map(|a| (-b_max..=b_max).map(move |b| (a, b)))
        .collect();
    let found: Vec<Vec<CubicField>> = cells
        .par_iter()
        .map(|&(a, b)| {
            let t2_max = hunter_t2(a, x) * (1.0 + 1e-9) + 1e-9;
            let mut out = Vec::new();
            if b.abs() as f64 > t2_max {
                return out;
            }
            for c in -c_max..=c_max {
                let poly = [a, b, c];
                let disc = form_disc([1, a as i128, b as i128, c as i128]);
                if disc == 0 || t2_of(poly, disc) > t2_max {
                    continue;
                }
                // |D_F| <= |disc| and disc = index^2 D_F
                let Some(field) = CubicField::from_poly(poly) else {
                    continue;
                };
                let d = field.disc_field;
                if (d.unsigned_abs() as f64) > x
                    || field.is_cyclic()
                    || gcd(d.unsigned_abs(), curve_conductor) != 1
                {
                    continue;
                }
                out.push(field);
            }
            out
        })
        .collect();
    let mut classes: BTreeMap<(u64, i64, Vec<SplittingKind>), CubicField> = BTreeMap::new();
    for field in found.into_iter().flatten() {
        let key = (field.disc_field.unsigned_abs(), field.disc_field, field.fingerprint.clone());
        match classes.get(&key) {
            Some(old) if old.rep_key() <= field.rep_key() => {}
            _ => {
                classes.insert(key, field);
            }
        }
    }
    Ok(classes.into_values().collect())
}

/// CSV rows `D_F,a,b,c,signature`.
pub fn fields_csv(fields: &[CubicField]) -> String {
    let mut out = String::from("D_F,a,b,c,signature\n");
    for f in fields {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            f.disc_field,
            f.poly[0],
            f.poly[1],
            f.poly[2],
            f.signature.as_str()
        ));
    }
    out
}

/// CSV rows `D_F,p,kind` for every field and prime.
pub fn splitting_csv(fields: &[CubicField], primes: &[u64]) -> String {
    let mut out = String::from("D_F,p,kind\n");
    for f in fields {
        for &p in primes {
            out.push_str(&format!("{},{},{}\n", f.disc_field, p, f.splitting_type(p).kind.as_str()));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalDensityRow {
    pub kind: SplittingKind,
    pub empirical: f64,
    pub predicted: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalDensityReport {
    pub p: u64,
    pub field_count: usize,
    /// `f(p) = 1/p + 1/p^2`.
    pub f_p: f64,
    pub c1: f64,
    pub c2: f64,
    pub rows: Vec<LocalDensityRow>,
}

impl LocalDensityReport {
    pub fn max_gap(&self) -> f64 {
        self.rows.iter().map(|r| r.gap.abs()).fold(0.0, f64::max)
    }
}

/// Predicted share of fields with each splitting kind at `p`:
/// `|C| / (6 (1 + f(p)))` unramified, `c_i(p) / (1 + f(p))` ramified.
pub fn predicted_density(kind: SplittingKind, p: u64) -> f64 {
    let pf = p as f64;
    let f = 1.0 / pf + 1.0 / (pf * pf);
    match kind {
        SplittingKind::C1 => 1.0 / (6.0 * (1.0 + f)),
        SplittingKind::C12 => 3.0 / (6.0 * (1.0 + f)),
        SplittingKind::C123 => 2.0 / (6.0 * (1.0 + f)),
        SplittingKind::PartialRam => (1.0 / pf) / (1.0 + f),
        SplittingKind::TotalRam => (1.0 / (pf * pf)) / (1.0 + f),
    }
}

pub fn local_density_report(fields: &[CubicField], p: u64) -> LocalDensityReport {
    let mut counts: BTreeMap<SplittingKind, usize> = BTreeMap::new();
    for f in fields {
        *counts.entry(f.splitting_type(p).kind).or_default() += 1;
    }
    let n = fields.len();
    let pf = p as f64;
    let rows = SplittingKind::ALL
        .iter()
        .map(|&kind| {
            let empirical = if n == 0 {
                0.0
            } else {
                counts.get(&kind).copied().unwrap_or(0) as f64 / n as f64
            };
            let predicted = predicted_density(kind, p);
            LocalDensityRow {
                kind,
                empirical,
                predicted,
                gap: empirical - predicted,
            }
        })
        .collect();
    LocalDensityReport {
        p,
        field_count: n,
        f_p: 1.0 / pf + 1.0 / (pf * pf),
        c1: 1.0 / pf,
        c2: 1.0 / (pf * pf),
        rows,
    }
}

fn cubic_terms(field: &CubicField, side: &PrimeSide, phi: &dyn TestFunction) -> (f64, f64, f64) {
    let conductor_term = phi.phihat0() * 2.0 * (field.disc_field.unsigned_abs() as f64).ln() / side.log_l;
    let (s1, s2) = side.sums(|p| form_kind(field.form, p).a_rho().0, |p| form_kind(field.form, p).a_rho().1);
    (conductor_term, s1, s2)
}

fn check_clash(curve: &EllipticCurve, field: &CubicField) -> Result<()> {
    let d = field.disc_field.unsigned_abs();
    if gcd(d, curve.conductor) != 1 {
        return Err(Error::ConductorClash {
            conductor: d,
            curve_conductor: curve.conductor,
        });
    }
    Ok(())
}

/// Density for `L(s, E x rho_F)`; conductor term `phi_hat(0) 2 log|D_F| / log L`.
pub fn one_level_density_cubic(
    curve: &EllipticCurve,
    field: &CubicField,
    x: f64,
    phi: &dyn TestFunction,
) -> Result<DensityReport> {
    check_clash(curve, field)?;
    let (c1, _) = prime_cutoffs(x, phi.sigma());
    let table = ApTable::compute(curve, c1);
    let side = PrimeSide::new(&table, x, phi, 1.0);
    let (ct, s1, s2) = cubic_terms(field, &side, phi);
    let predicted = SymmetryType::Orthogonal.predicted(phi);
    Ok(DensityReport::from_parts(ct, s1, s2, predicted, 1.0, x, SymmetryType::Orthogonal))
}

/// Unweighted average over a given field list.
pub fn family_average_cubic_over(
    curve: &EllipticCurve,
    fields: &[CubicField],
    table: &ApTable,
    x: f64,
    phi: &dyn TestFunction,
    cutoff_scale: f64,
) -> Result<DensityReport> {
    if fields.is_empty() {
        return Err(Error::EmptyFamily);
    }
    for f in fields {
        check_clash(curve, f)?;
    }
    let side = PrimeSide::new(table, x, phi, cutoff_scale);
    let terms: Vec<(f64, f64, f64)> = fields.par_iter().map(|f| cubic_terms(f, &side, phi)).collect();
    let (mut ct, mut s1, mut s2) = (0.0, 0.0, 0.0);
    for (a, b, c) in &terms {
        ct += a;
        s1 += b;
        s2 += c;
    }
    let n = fields.len() as f64;
    Ok(DensityReport::from_parts(
        ct / n,
        s1 / n,
        s2 / n,
        SymmetryType::Orthogonal.predicted(phi),
        n,
        x,
        SymmetryType::Orthogonal,
    ))
}

/// Average over all S3 fields with `|D_F| <= X` prime to `Q_E`; predicted
/// value `phi_hat(0) + phi(0)/2`.
pub fn family_average_cubic(curve: &EllipticCurve, x: f64, phi: &dyn TestFunction) -> Result<DensityReport> {
    let fields = enumerate_cubic_fields(x, curve.conductor)?;
    let (c1, _) = prime_cutoffs(x, phi.sigma());
    let table = ApTable::compute(curve, c1);
    family_average_cubic_over(curve, &fields, &table, x, phi, 1.0)
}

/// Brute-force count of roots of a polynomial mod `p` (low to high).
pub fn count_roots_naive(poly: &[u64], p: u64) -> usize {
    (0..p)
        .filter(|&x| poly.iter().rev().fold(0u64, |acc, &c| (mul_mod(acc, x, p) + c) % p) == 0)
        .count()
}

/// `x^3 + a x^2 + b x + c` mod p as low-to-high coefficients.
pub fn poly_mod_p([a, b, c]: [i64; 3], p: u64) -> [u64; 4] {
    let r = |v: i64| v.rem_euclid(p as i64) as u64;
    [r(c), r(b), r(a), 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_rho_table() {
        assert_eq!(SplittingKind::C1.a_rho(), (2.0, 2.0));
        assert_eq!(SplittingKind::C12.a_rho(), (0.0, 2.0));
        assert_eq!(SplittingKind::C123.a_rho(), (-1.0, -1.0));
        assert_eq!(SplittingKind::PartialRam.a_rho(), (1.0, 1.0));
        assert_eq!(SplittingKind::TotalRam.a_rho(), (0.0, 0.0));
    }

    #[test]
    fn x3_minus_x_minus_1() {
        let f = CubicField::from_poly([0, -1, -1]).unwrap();
        assert_eq!(f.disc_field, -23);
        assert_eq!(f.index_sq, 1);
        assert_eq!(f.splitting_type(2).kind, SplittingKind::C123);
        assert_eq!(f.splitting_type(23).kind, SplittingKind::PartialRam);
        assert_eq!(f.splitting_type(59).kind, SplittingKind::C1);
        assert_eq!(f.splitting_type(59).a_rho_p, 2.0);
    }

    #[test]
    fn index_removed() {
        // x^3 - 2 over Z: disc -108 = -4 * 27, Z[2^(1/3)] is maximal
        assert_eq!(CubicField::from_poly([0, 0, -2]).unwrap().disc_field, -108);
        // theta = 2 alpha with alpha^3 = alpha + 1: x^3 - 4x - 8, disc = 64 * (-23)
        let f = CubicField::from_poly([0, -4, -8]).unwrap();
        assert_eq!(f.disc_field, -23);
        assert_eq!(f.index_sq, 64);
        assert_eq!(f.splitting_type(2).kind, SplittingKind::C123);
        // x^3 + x^2 - 2x - 1 is cyclic, D = 49
        assert!(CubicField::from_poly([1, -2, -1]).unwrap().is_cyclic());
    }

    #[test]
    fn roots_mod_p_agree() {
        for p in [2u64, 3, 5, 7, 11, 101] {
            for a in -3i64..=3 {
                for c in -4i64..=4 {
                    let poly = poly_mod_p([a, 2, c], p);
                    assert_eq!(count_roots_naive(&poly, p), distinct_roots_mod_p(&poly, p), "p = {p}, a = {a}, c = {c}");
                }
            }
        }
    }

    #[test]
    fn small_census() {
        assert!(enumerate_cubic_fields(22.0, 1).unwrap().is_empty());
        let d: Vec<i64> = enumerate_cubic_fields(50.0, 1).unwrap().iter().map(|f| f.disc_field).collect();
        assert_eq!(d, vec![-23, -31, -44]);
        let d: Vec<i64> = enumerate_cubic_fields(50.0, 23).unwrap().iter().map(|f| f.disc_field).collect();
        assert_eq!(d, vec![-31, -44]);
        assert!(matches!(
            enumerate_cubic_fields_in_box(1000.0, 1, 3, 3),
            Err(Error::EnumerationBoundTooSmall { .. })
        ));
    }

    #[test]
    fn predicted_rows() {
        assert!((predicted_density(SplittingKind::C123, 5) - 25.0 / 93.0).abs() < 1e-15);
        for p in [2u64, 3, 5, 7, 101] {
            let s: f64 = SplittingKind::ALL.iter().map(|&k| predicted_density(k, p)).sum();
            assert!((s - 1.0).abs() < 1e-14);
        }
    }
}
