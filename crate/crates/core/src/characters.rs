//! Primitive Dirichlet characters of odd prime order `l` with conductor prime
//! to a fixed curve conductor.
//!
//! A character is a product of local characters on prime-power moduli
//! (primes `q = 1 mod l`, and `l^2`). Values are carried as exponents of
//! `zeta_l` so that every identity is checked exactly; complex numbers appear
//! only when sums are formed.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{factor, gcd, is_prime, mul_mod, primitive_root, small_primes, euler_phi};
use crate::error::{Error, Result};

/// Default ceiling on the number of characters a family may hold.
pub const DEFAULT_FAMILY_CAP: u64 = 2_000_000;

/// Discrete logarithms modulo a prime power with a cyclic unit group.
#[derive(Debug)]
pub struct DlogTable {
    pub modulus: u64,
    pub generator: u64,
    pub phi: u64,
    logs: Vec<u32>,
}

impl DlogTable {
    pub fn new(modulus: u64) -> Self {
        let generator = primitive_root(modulus).expect("cyclic unit group");
        let phi = euler_phi(modulus);
        let mut logs = vec![u32::MAX; modulus as usize];
        let mut x = 1u64;
        for k in 0..phi {
            logs[x as usize] = k as u32;
            x = mul_mod(x, generator, modulus);
        }
        DlogTable {
            modulus,
            generator,
            phi,
            logs,
        }
    }

    /// `Some(k)` with `generator^k = n`, or `None` when `n` is not a unit.
    pub fn log(&self, n: u64) -> Option<u32> {
        match self.logs[(n % self.modulus) as usize] {
            u32::MAX => None,
            k => Some(k),
        }
    }
}

/// Shared dlog tables keyed by modulus.
#[derive(Debug, Default)]
pub struct DlogCache {
    tables: HashMap<u64, Arc<DlogTable>>,
}

impl DlogCache {
    pub fn get(&mut self, modulus: u64) -> Arc<DlogTable> {
        self.tables
            .entry(modulus)
            .or_insert_with(|| Arc::new(DlogTable::new(modulus)))
            .clone()
    }
}

/// Local character on a prime-power modulus: `chi(g) = zeta_l^exponent_unit`.
#[derive(Clone, Debug)]
pub struct LocalCharacter {
    pub modulus: u64,
    pub generator: u64,
    pub exponent_unit: u32,
    table: Arc<DlogTable>,
}

impl LocalCharacter {
    pub fn new(table: Arc<DlogTable>, exponent_unit: u32) -> Self {
        LocalCharacter {
            modulus: table.modulus,
            generator: table.generator,
            exponent_unit,
            table,
        }
    }

    pub fn dlog(&self, n: u64) -> Option<u32> {
        self.table.log(n)
    }
}

/// Value of an order-`l` character: zero or `zeta_l^e` with `e` in `Z/lZ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CharValue {
    Zero,
    Root(u32),
}

impl CharValue {
    pub fn mul(self, other: CharValue, l: u32) -> CharValue {
        match (self, other) {
            (CharValue::Root(a), CharValue::Root(b)) => CharValue::Root((a + b) % l),
            _ => CharValue::Zero,
        }
    }

    pub fn conj(self, l: u32) -> CharValue {
        match self {
            CharValue::Root(a) => CharValue::Root((l - a) % l),
            CharValue::Zero => CharValue::Zero,
        }
    }

    pub fn to_complex(self, l: u32) -> Complex64 {
        match self {
            CharValue::Zero => Complex64::new(0.0, 0.0),
            CharValue::Root(e) => Complex64::from_polar(1.0, 2.0 * PI * e as f64 / l as f64),
        }
    }
}

/// Precomputed powers of `zeta_l`.
#[derive(Clone, Debug)]
pub struct RootTable {
    pub l: u32,
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(l: u32) -> Self {
        let roots = (0..l)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / l as f64))
            .collect();
        RootTable { l, roots }
    }

    #[inline]
    pub fn value(&self, v: CharValue) -> Complex64 {
        match v {
            CharValue::Zero => Complex64::new(0.0, 0.0),
            CharValue::Root(e) => self.roots[e as usize],
        }
    }

    #[inline]
    pub fn real(&self, v: CharValue) -> f64 {
        self.value(v).re
    }
}

/// Primitive character of exact order `l`.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    pub order: u32,
    pub conductor: u64,
    pub locals: Vec<LocalCharacter>,
}

impl DirichletCharacter {
    pub fn eval(&self, n: u64) -> CharValue {
        let l = self.order as u64;
        let mut e = 0u64;
        for local in &self.locals {
            match local.dlog(n) {
                None => return CharValue::Zero,
                Some(k) => e = (e + local.exponent_unit as u64 * (k as u64 % l)) % l,
            }
        }
        CharValue::Root(e as u32)
    }

    pub fn exponents(&self) -> Vec<u32> {
        self.locals.iter().map(|c| c.exponent_unit).collect()
    }

    pub fn conjugate(&self) -> DirichletCharacter {
        let l = self.order;
        DirichletCharacter {
            order: l,
            conductor: self.conductor,
            locals: self
                .locals
                .iter()
                .map(|c| LocalCharacter::new(c.table.clone(), l - c.exponent_unit))
                .collect(),
        }
    }

    /// Exponent tuple scaled so the first entry is 1; equal for all
    /// characters cutting out the same cyclic field.
    pub fn field_key(&self) -> (u64, Vec<u32>) {
        let l = self.order as u64;
        let first = self.locals[0].exponent_unit as u64;
        let inv = crate::arith::inv_mod(first, l).expect("nonzero exponent");
        let key = self
            .locals
            .iter()
            .map(|c| (c.exponent_unit as u64 * inv % l) as u32)
            .collect();
        (self.conductor, key)
    }

    /// `local_modulus:generator:exponent;...`
    pub fn locals_descriptor(&self) -> String {
        self.locals
            .iter()
            .map(|c| format!("{}:{}:{}", c.modulus, c.generator, c.exponent_unit))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi[{}; {}]", self.conductor, self.locals_descriptor())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    #[default]
    SmoothBump,
    Sharp,
}

/// Nonnegative weight `omega(q/X)` on conductors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct WeightFunction {
    pub kind: WeightKind,
}

impl WeightFunction {
    pub const SMOOTH: WeightFunction = WeightFunction {
        kind: WeightKind::SmoothBump,
    };
    pub const SHARP: WeightFunction = WeightFunction {
        kind: WeightKind::Sharp,
    };

    pub fn eval(&self, t: f64) -> f64 {
        match self.kind {
            WeightKind::SmoothBump => {
                let d = t - 1.0;
                if d.abs() < 0.5 {
                    (-1.0 / (1.0 - 4.0 * d * d)).exp()
                } else {
                    0.0
                }
            }
            WeightKind::Sharp => {
                if t > 0.0 && t <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Largest `q / X` in the support.
    pub fn support_end(&self) -> f64 {
        match self.kind {
            WeightKind::SmoothBump => 1.5,
            WeightKind::Sharp => 1.0,
        }
    }
}

/// `q = l^b * m` with `b` in {0, 2}, `m` squarefree with primes `1 mod l`,
/// and `gcd(q, Q_E) = 1`.
pub fn is_valid_conductor(q: u64, l: u32, curve_conductor: u64) -> bool {
    if q < 2 || gcd(q, curve_conductor) != 1 {
        return false;
    }
    let l = l as u64;
    factor(q).into_iter().all(|(p, e)| {
        if p == l {
            e == 2
        } else {
            e == 1 && p % l == 1
        }
    })
}

/// Valid conductors up to `bound`, increasing.
pub fn valid_conductors(l: u32, bound: u64, curve_conductor: u64) -> Vec<u64> {
    let l64 = l as u64;
    let primes: Vec<u64> = small_primes(bound)
        .into_iter()
        .filter(|&p| p % l64 == 1 && curve_conductor % p != 0)
        .collect();
    let mut out = Vec::new();
    let mut seeds = vec![1u64];
    if curve_conductor % l64 != 0 && l64 * l64 <= bound {
        seeds.push(l64 * l64);
    }
    fn extend(primes: &[u64], start: usize, cur: u64, bound: u64, out: &mut Vec<u64>) {
        for i in start..primes.len() {
            let next = cur * primes[i];
            if next > bound {
                break;
            }
            out.push(next);
            extend(primes, i + 1, next, bound, out);
        }
    }
    for seed in seeds {
        if seed > 1 {
            out.push(seed);
        }
        extend(&primes, 0, seed, bound, &mut out);
    }
    out.sort_unstable();
    out
}

/// A weighted family of characters in canonical order.
#[derive(Clone, Debug)]
pub struct Family {
    pub l: u32,
    pub x: f64,
    pub curve_conductor: u64,
    pub weight: WeightFunction,
    pub characters: Vec<DirichletCharacter>,
    /// `omega(q_chi / X)` per character, aligned with `characters`.
    pub weights: Vec<f64>,
    pub roots: RootTable,
}

impl Family {
    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    /// Index of the conjugate of character `i` (its pair partner).
    pub fn conjugate_index(&self, i: usize) -> usize {
        i ^ 1
    }

    pub fn weighted_count(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn conductor_log_sum(&self) -> f64 {
        self.characters
            .iter()
            .zip(&self.weights)
            .map(|(c, w)| w * (c.conductor as f64).ln())
            .sum()
    }

    /// `sum omega(q/X) chi(n)`.
    pub fn char_sum(&self, n: u64) -> Complex64 {
        self.characters
            .iter()
            .zip(&self.weights)
            .map(|(c, w)| self.roots.value(c.eval(n)) * *w)
            .sum()
    }

    /// Characters grouped by the cyclic field they cut out, in canonical order.
    pub fn fields(&self) -> Vec<Vec<usize>> {
        let mut index: HashMap<(u64, Vec<u32>), usize> = HashMap::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, c) in self.characters.iter().enumerate() {
            let key = c.field_key();
            match index.get(&key) {
                Some(&g) => groups[g].push(i),
                None => {
                    index.insert(key, groups.len());
                    groups.push(vec![i]);
                }
            }
        }
        groups
    }

    /// CSV rows `conductor,local_modulus:generator:exponent;...`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("conductor,locals\n");
        for c in &self.characters {
            out.push_str(&format!("{},{}\n", c.conductor, c.locals_descriptor()));
        }
        out
    }
}

/// Exact family size before any tables are built.
pub fn estimate_family_size(l: u32, bound: u64, curve_conductor: u64) -> u64 {
    valid_conductors(l, bound, curve_conductor)
        .into_iter()
        .map(|q| (l as u64 - 1).pow(crate::arith::omega(q)))
        .sum()
}

pub fn enumerate_family(
    l: u32,
    x: f64,
    curve_conductor: u64,
    weight: WeightFunction,
) -> Result<Family> {
    enumerate_family_capped(l, x, curve_conductor, weight, DEFAULT_FAMILY_CAP)
}

/// All primitive order-`l` characters with conductor in the weight's support,
/// ordered by conductor and then in conjugate pairs `(chi, conj chi)` keyed by
/// the lexicographically smaller exponent tuple.
pub fn enumerate_family_capped(
    l: u32,
    x: f64,
    curve_conductor: u64,
    weight: WeightFunction,
    cap: u64,
) -> Result<Family> {
    if l < 3 || !is_prime(l as u64) {
        return Err(Error::Config(format!("order l = {l} must be an odd prime")));
    }
    if !(x >= 1.0) {
        return Err(Error::Config(format!("X = {x} must be at least 1")));
    }
    let bound = (weight.support_end() * x).floor() as u64;
    let estimate = estimate_family_size(l, bound, curve_conductor);
    if estimate > cap {
        return Err(Error::OutOfMemory { estimate, cap });
    }
    let mut cache = DlogCache::default();
    let mut characters = Vec::with_capacity(estimate as usize);
    let mut weights = Vec::with_capacity(estimate as usize);
    for q in valid_conductors(l, bound, curve_conductor) {
        let w = weight.eval(q as f64 / x);
        if w == 0.0 {
            continue;
        }
        let tables: Vec<Arc<DlogTable>> = factor(q)
            .into_iter()
            .map(|(p, e)| cache.get(p.pow(e)))
            .collect();
        for tuple in exponent_tuples(l, tables.len()) {
            let conj: Vec<u32> = tuple.iter().map(|&e| l - e).collect();
            if tuple > conj {
                continue;
            }
            for t in [&tuple, &conj] {
                let locals = tables
                    .iter()
                    .zip(t.iter())
                    .map(|(tab, &e)| LocalCharacter::new(tab.clone(), e))
                    .collect();
                characters.push(DirichletCharacter {
                    order: l,
                    conductor: q,
                    locals,
                });
                weights.push(w);
            }
        }
    }
    Ok(Family {
        l,
        x,
        curve_conductor,
        weight,
        characters,
        weights,
        roots: RootTable::new(l),
    })
}

/// All tuples in `[1, l-1]^k`, lexicographic.
fn exponent_tuples(l: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..l).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn weighted_count(l: u32, x: f64, curve_conductor: u64, weight: WeightFunction) -> Result<f64> {
    Ok(enumerate_family(l, x, curve_conductor, weight)?.weighted_count())
}

pub fn conductor_log_sum(l: u32, x: f64, curve_conductor: u64, weight: WeightFunction) -> Result<f64> {
    Ok(enumerate_family(l, x, curve_conductor, weight)?.conductor_log_sum())
}

pub fn family_char_sum(
    l: u32,
    x: f64,
    curve_conductor: u64,
    weight: WeightFunction,
    n: u64,
) -> Result<Complex64> {
    Ok(enumerate_family(l, x, curve_conductor, weight)?.char_sum(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conductor_validity() {
        assert!(is_valid_conductor(7, 3, 11));
        assert!(!is_valid_conductor(3, 3, 11));
        assert!(is_valid_conductor(63, 3, 11));
        assert!(!is_valid_conductor(49, 3, 11));
        assert!(!is_valid_conductor(7, 3, 7));
        assert!(!is_valid_conductor(27, 3, 1));
        assert!(is_valid_conductor(11, 5, 2));
        assert!(is_valid_conductor(25, 5, 1));
    }

    #[test]
    fn small_families() {
        let fam = enumerate_family(3, 10.0, 11, WeightFunction::SHARP).unwrap();
        let conductors: Vec<u64> = fam.characters.iter().map(|c| c.conductor).collect();
        assert_eq!(conductors, vec![7, 7, 9, 9]);
        assert_eq!(fam.weighted_count(), 4.0);

        let fam = enumerate_family(5, 11.0, 2, WeightFunction::SHARP).unwrap();
        assert_eq!(fam.len(), 4);
        assert!(fam.characters.iter().all(|c| c.conductor == 11));

        let fam = enumerate_family(3, 10.0, 63, WeightFunction::SHARP).unwrap();
        assert!(fam.is_empty());
        assert_eq!(fam.weighted_count(), 0.0);
    }

    #[test]
    fn l_divides_curve_conductor_drops_l_squared() {
        let fam = enumerate_family(3, 100.0, 3 * 11, WeightFunction::SHARP).unwrap();
        assert!(fam.characters.iter().all(|c| c.conductor % 3 != 0));
    }

    #[test]
    fn eval_mod_7() {
        let mut cache = DlogCache::default();
        let table = cache.get(7);
        assert_eq!(table.generator, 3);
        let chi = DirichletCharacter {
            order: 3,
            conductor: 7,
            locals: vec![LocalCharacter::new(table, 1)],
        };
        assert_eq!(chi.eval(1), CharValue::Root(0));
        // 2 = 3^2 mod 7
        assert_eq!(chi.eval(2), CharValue::Root(2));
        assert_eq!(chi.eval(14), CharValue::Zero);
        for m in 1..50u64 {
            if m % 7 != 0 {
                assert_eq!(chi.eval(m.pow(3)), CharValue::Root(0));
            }
        }
    }

    #[test]
    fn dlog_inverts_powers() {
        for m in [7u64, 9, 25, 31, 121] {
            let t = DlogTable::new(m);
            let mut x = 1;
            for k in 0..t.phi {
                assert_eq!(t.log(x), Some(k as u32));
                x = mul_mod(x, t.generator, m);
            }
        }
    }

    #[test]
    fn pairs_are_adjacent_conjugates() {
        let fam = enumerate_family(5, 2000.0, 11, WeightFunction::SMOOTH).unwrap();
        assert_eq!(fam.len() % 2, 0);
        for i in 0..fam.len() {
            let j = fam.conjugate_index(i);
            let a = &fam.characters[i];
            let b = &fam.characters[j];
            assert_eq!(a.conductor, b.conductor);
            for n in 1..=a.conductor.min(300) {
                assert_eq!(b.eval(n), a.eval(n).conj(5));
            }
        }
    }

    #[test]
    fn field_groups_have_l_minus_one_members() {
        let fam = enumerate_family(5, 500.0, 1, WeightFunction::SHARP).unwrap();
        for g in fam.fields() {
            assert_eq!(g.len(), 4);
        }
    }

    #[test]
    fn out_of_memory_guard() {
        let r = enumerate_family_capped(3, 1e5, 11, WeightFunction::SHARP, 100);
        assert!(matches!(r, Err(Error::OutOfMemory { cap: 100, .. })));
    }

    #[test]
    fn bump_weight_shape() {
        let w = WeightFunction::SMOOTH;
        assert_eq!(w.eval(0.5), 0.0);
        assert_eq!(w.eval(1.5), 0.0);
        assert!((w.eval(1.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert!(w.eval(0.75) > 0.0);
        assert_eq!(WeightFunction::SHARP.eval(1.0), 1.0);
        assert_eq!(WeightFunction::SHARP.eval(1.0001), 0.0);
    }
}
