//! Point counting on elliptic curves over prime fields.
//!
//! Small primes are counted directly from the quadratic-residue table. Larger
//! primes determine `#E(F_p)` as the unique multiple of the group exponent
//! inside the Hasse interval, found by baby-step giant-step on a handful of
//! points; the direct count is the fallback when the exponent is too small to
//! pin the order down.

use std::collections::HashMap;

use crate::arith::{factor, isqrt, lcm, mul_mod, pow_mod, sqrt_mod};

/// Below this prime the O(p) count is cheaper than setting up BSGS.
pub const BSGS_MIN_PRIME: u64 = 400;

const MAX_POINTS: usize = 12;

/// Short Weierstrass model y^2 = x^3 + a x + b over F_p, p >= 5.
#[derive(Clone, Copy, Debug)]
pub struct ShortCurve {
    pub a: u64,
    pub b: u64,
    pub p: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Point {
    Infinity,
    Affine(u64, u64),
}

impl ShortCurve {
    fn rhs(&self, x: u64) -> u64 {
        let p = self.p;
        let x2 = mul_mod(x, x, p);
        let x3 = mul_mod(x2, x, p);
        (x3 + mul_mod(self.a, x, p) + self.b) % p
    }

    fn add(&self, lhs: Point, rhs: Point) -> Point {
        let p = self.p;
        match (lhs, rhs) {
            (Point::Infinity, q) | (q, Point::Infinity) => q,
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => {
                let slope = if x1 == x2 {
                    if (y1 + y2) % p == 0 {
                        return Point::Infinity;
                    }
                    let num = (3 * mul_mod(x1, x1, p) + self.a) % p;
                    let den = crate::arith::inv_mod(2 * y1 % p, p).expect("nonzero y");
                    mul_mod(num, den, p)
                } else {
                    let num = (y2 + p - y1) % p;
                    let den = crate::arith::inv_mod((x2 + p - x1) % p, p).expect("distinct x");
                    mul_mod(num, den, p)
                };
                let x3 = (mul_mod(slope, slope, p) + 2 * p - x1 - x2) % p;
                let y3 = (mul_mod(slope, (x1 + p - x3) % p, p) + p - y1) % p;
                Point::Affine(x3, y3)
            }
        }
    }

    fn mul(&self, pt: Point, mut k: u64) -> Point {
        let mut acc = Point::Infinity;
        let mut base = pt;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    /// Direct count using a table of squares; includes the point at infinity.
    pub fn count_naive(&self) -> u64 {
        let p = self.p;
        let mut is_square = vec![false; p as usize];
        for y in 0..p {
            is_square[mul_mod(y, y, p) as usize] = true;
        }
        let mut total: i64 = p as i64 + 1;
        for x in 0..p {
            let v = self.rhs(x);
            if v != 0 {
                total += if is_square[v as usize] { 1 } else { -1 };
            }
        }
        total as u64
    }

    /// Deterministic sequence of affine points: smallest x values whose
    /// right-hand side is a nonzero square.
    fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.p).filter_map(move |x| {
            let v = self.rhs(x);
            if v == 0 {
                return None;
            }
            sqrt_mod(v, self.p).map(|y| Point::Affine(x, y))
        })
    }

    /// Some m >= 1 with m * pt = O, searched around the Hasse interval.
    fn annihilator(&self, pt: Point, lo: u64, hi: u64) -> u64 {
        let width = hi - lo + 1;
        let steps = isqrt(width) + 1;
        let mut baby: HashMap<u64, (u64, u64)> = HashMap::with_capacity(steps as usize);
        let mut cur = Point::Infinity;
        for j in 1..=steps {
            cur = self.add(cur, pt);
            match cur {
                Point::Infinity => return j,
                Point::Affine(x, y) => {
                    if let Some(&(j0, y0)) = baby.get(&x) {
                        // j*P = +-j0*P
                        return if y == y0 { j - j0 } else { j + j0 };
                    }
                    baby.insert(x, (j, y));
                }
            }
        }
        let giant = self.mul(pt, steps);
        let mut probe = self.mul(pt, lo);
        let mut base = lo;
        while base <= hi + steps {
            match probe {
                Point::Infinity => return base,
                Point::Affine(x, y) => {
                    if let Some(&(j, yj)) = baby.get(&x) {
                        let m = if yj == y { base.abs_diff(j) } else { base + j };
                        if m > 0 {
                            return m;
                        }
                    }
                }
            }
            probe = self.add(probe, giant);
            base += steps;
        }
        unreachable!("group order lies in the Hasse interval")
    }

    fn order_from_multiple(&self, pt: Point, m: u64) -> u64 {
        let mut ord = m;
        for (q, _) in factor(m) {
            while ord % q == 0 && self.mul(pt, ord / q) == Point::Infinity {
                ord /= q;
            }
        }
        ord
    }

    /// Group order via the exponent of the point orders found so far;
    /// `None` when several multiples of the exponent remain in the interval.
    pub fn count_bsgs(&self) -> Option<u64> {
        let p = self.p;
        let radius = isqrt(4 * p);
        let lo = p + 1 - radius;
        let hi = p + 1 + radius;
        let mut exponent = 1u64;
        for pt in self.points().take(MAX_POINTS) {
            let m = self.annihilator(pt, lo, hi);
            exponent = lcm(exponent, self.order_from_multiple(pt, m));
            let first = lo.div_ceil(exponent) * exponent;
            if first <= hi && first + exponent > hi {
                return Some(first);
            }
        }
        None
    }

    pub fn count(&self) -> u64 {
        if self.p < BSGS_MIN_PRIME {
            return self.count_naive();
        }
        self.count_bsgs().unwrap_or_else(|| self.count_naive())
    }
}

/// Counts all solutions of the long Weierstrass equation over F_p plus the
/// point at infinity. Singular points are included, so for bad primes this is
/// `p + 1 - a_p` with `a_p` in {1, -1, 0}.
pub fn count_long_model(coeffs: [i64; 5], p: u64) -> u64 {
    let [a1, a2, a3, a4, a6] = coeffs.map(|c| c.rem_euclid(p as i64) as u64);
    let mut count = 1u64;
    for x in 0..p {
        let rhs = (pow_mod(x, 3, p) + mul_mod(a2, mul_mod(x, x, p), p) + mul_mod(a4, x, p) + a6) % p;
        for y in 0..p {
            let lhs = (mul_mod(y, y, p) + mul_mod(a1, mul_mod(x, y, p), p) + mul_mod(a3, y, p)) % p;
            if lhs == rhs {
                count += 1;
            }
        }
    }
    count
}
