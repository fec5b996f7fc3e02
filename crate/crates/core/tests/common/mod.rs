//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use lowlying::arith::{factor_i128, gcd, primes_up_to};
use lowlying::characters::{CharValue, DirichletCharacter};
use lowlying::cubic::{count_roots_naive, poly_mod_p};

pub type Table = Vec<Option<u32>>;

/// Every homomorphism `(Z/q)^* -> Z/l`, as value tables on `0..q`.
pub fn hom_group(q: u64, l: u32) -> Vec<Table> {
    let units: Vec<u64> = (1..q.max(2)).filter(|&n| gcd(n, q) == 1).collect();
    // greedy generating set
    let mut gens = Vec::new();
    let mut span: BTreeSet<u64> = BTreeSet::from([1 % q]);
    for &u in &units {
        if span.contains(&u) {
            continue;
        }
        gens.push(u);
        let mut frontier: Vec<u64> = span.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = x * g % q;
                if span.insert(y) {
                    frontier.push(y);
                }
            }
        }
    }
    let mut out = Vec::new();
    let total = (l as usize).pow(gens.len() as u32);
    'assign: for code in 0..total {
        let mut c = code;
        let exps: Vec<u32> = gens
            .iter()
            .map(|_| {
                let e = (c % l as usize) as u32;
                c /= l as usize;
                e
            })
            .collect();
        let mut table: Table = vec![None; q as usize];
        table[(1 % q) as usize] = Some(0);
        let mut queue = VecDeque::from([1 % q]);
        while let Some(x) = queue.pop_front() {
            let v = table[x as usize].unwrap();
            for (g, e) in gens.iter().zip(&exps) {
                let y = x * g % q;
                let w = (v + e) % l;
                match table[y as usize] {
                    Some(old) if old != w => continue 'assign,
                    Some(_) => {}
                    None => {
                        table[y as usize] = Some(w);
                        queue.push_back(y);
                    }
                }
            }
        }
        out.push(table);
    }
    out
}

pub fn is_primitive(table: &Table, q: u64) -> bool {
    (1..q).filter(|d| q % d == 0).all(|d| {
        // induced from modulus d iff trivial on units congruent to 1 mod d
        (1..q).any(|n| gcd(n, q) == 1 && n % d == 1 % d && table[n as usize] != Some(0))
    })
}

pub fn character_oracle(q: u64, l: u32) -> BTreeSet<Table> {
    hom_group(q, l)
        .into_iter()
        .filter(|t| t.iter().any(|v| matches!(v, Some(e) if *e != 0)))
        .filter(|t| is_primitive(t, q))
        .collect()
}

pub fn table_of(chi: &DirichletCharacter) -> Table {
    (0..chi.conductor)
        .map(|n| match chi.eval(n) {
            CharValue::Zero => None,
            CharValue::Root(e) => Some(e),
        })
        .collect()
}

pub fn poly_disc([a, b, c]: [i64; 3]) -> i128 {
    let (a, b, c) = (a as i128, b as i128, c as i128);
    a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c
}

pub fn has_rational_root([a, b, c]: [i64; 3]) -> bool {
    if c == 0 {
        return true;
    }
    (1..=c.abs()).filter(|d| c % d == 0).any(|d| {
        [d, -d].iter().any(|&r| {
            let r = r as i128;
            r * r * r + a as i128 * r * r + b as i128 * r + c as i128 == 0
        })
    })
}

/// Characteristic polynomial coefficients `(trace, s2, det)` of multiplication
/// by `u + v t + w t^2` in `Z[t]/(t^3 + a t^2 + b t + c)`.
pub fn char_coeffs([a, b, c]: [i64; 3], [u, v, w]: [i128; 3]) -> (i128, i128, i128) {
    let (a, b, c) = (a as i128, b as i128, c as i128);
    // companion matrix of t acting on (1, t, t^2), columns are images
    let m = [[0, 0, -c], [1, 0, -b], [0, 1, -a]];
    let mul = |x: [[i128; 3]; 3], y: [[i128; 3]; 3]| {
        let mut z = [[0i128; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                z[i][j] = (0..3).map(|k| x[i][k] * y[k][j]).sum();
            }
        }
        z
    };
    let m2 = mul(m, m);
    let mut x = [[0i128; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            x[i][j] = v * m[i][j] + w * m2[i][j] + if i == j { u } else { 0 };
        }
    }
    let tr = x[0][0] + x[1][1] + x[2][2];
    let x2 = mul(x, x);
    let tr2 = x2[0][0] + x2[1][1] + x2[2][2];
    let det = x[0][0] * (x[1][1] * x[2][2] - x[1][2] * x[2][1]) - x[0][1] * (x[1][0] * x[2][2] - x[1][2] * x[2][0])
        + x[0][2] * (x[1][0] * x[2][1] - x[1][1] * x[2][0]);
    (tr, (tr * tr - tr2) / 2, det)
}

/// Echelon basis of the span of integer vectors, pivoting on `t^2`, then `t`,
/// then the constant coordinate, so the last row is the lattice's copy of 1.
pub fn hnf(mut rows: Vec<[i128; 3]>) -> [[i128; 3]; 3] {
    let mut out = [[0i128; 3]; 3];
    for (slot, col) in [2usize, 1, 0].into_iter().enumerate() {
        loop {
            rows.retain(|r| r.iter().any(|&x| x != 0));
            let mut nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by_key(|&i| rows[i][col].abs());
            let pivot = rows[nz[0]];
            for &i in &nz[1..] {
                let q = rows[i][col].div_euclid(pivot[col]);
                for k in 0..3 {
                    rows[i][k] -= q * pivot[k];
                }
            }
        }
        let idx = (0..rows.len()).find(|&i| rows[i][col] != 0).expect("full rank");
        out[slot] = rows.remove(idx);
    }
    out
}

pub fn det3(m: [[i128; 3]; 3]) -> i128 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// `[O_K : Z[t]]` by adjoining integral elements `(sum c_i b_i) / p` until none remain.
pub fn index_by_integral_elements(poly: [i64; 3]) -> i128 {
    let disc = poly_disc(poly);
    let mut basis = [[0i128, 0, 1], [0, 1, 0], [1, 0, 0]];
    let mut den: i128 = 1;
    for (p, e) in factor_i128(disc) {
        if e < 2 {
            continue;
        }
        let p = p as i128;
        let [a, b, _] = poly.map(|v| v as i128);
        // traces of 1, t, t^2
        let tr = |n: [i128; 3]| 3 * n[0] - a * n[1] + (a * a - 2 * b) * n[2];
        'grow: loop {
            let d = den * p;
            for c2 in 0..p {
                for c1 in 0..p {
                    for c0 in 0..p {
                        if c0 == 0 && c1 == 0 && c2 == 0 {
                            continue;
                        }
                        let n: [i128; 3] =
                            std::array::from_fn(|k| c2 * basis[0][k] + c1 * basis[1][k] + c0 * basis[2][k]);
                        if tr(n) % d != 0 {
                            continue;
                        }
                        let (t, s, q) = char_coeffs(poly, n);
                        if t % d == 0 && s % (d * d) == 0 && q % (d * d * d) == 0 {
                            let mut rows: Vec<[i128; 3]> = basis.iter().map(|b| b.map(|x| x * p)).collect();
                            rows.push(n);
                            basis = hnf(rows);
                            den = d;
                            continue 'grow;
                        }
                    }
                }
            }
            break;
        }
    }
    let vol = det3(basis).abs();
    let cube = den * den * den;
    assert_eq!(cube % vol, 0);
    cube / vol
}

pub fn oracle_disc(poly: [i64; 3]) -> i128 {
    let i = index_by_integral_elements(poly);
    let d = poly_disc(poly);
    assert_eq!(d % (i * i), 0);
    d / (i * i)
}

pub fn is_square(n: i128) -> bool {
    n >= 0 && {
        let r = (n as f64).sqrt().round() as i128;
        (r - 1..=r + 1).any(|s| s >= 0 && s * s == n)
    }
}

/// Distinct roots of the polynomial mod p.
pub fn roots_mod(poly: [i64; 3], p: u64) -> usize {
    count_roots_naive(&poly_mod_p(poly, p), p)
}

pub fn same_field(f: [i64; 3], g: [i64; 3]) -> bool {
    let d = poly_disc(f) * poly_disc(g);
    primes_up_to(600)
        .into_iter()
        .filter(|&p| d % p as i128 != 0)
        .all(|p| roots_mod(f, p) == roots_mod(g, p))
}

/// Fields with `|D_F| <= x` from every monic cubic in a coefficient box,
/// grouped into isomorphism classes by splitting agreement.
pub fn oracle_fields(x: i128) -> BTreeMap<i128, Vec<[i64; 3]>> {
    let mut classes: BTreeMap<i128, Vec<[i64; 3]>> = BTreeMap::new();
    for a in -6..=6i64 {
        for b in -16..=16i64 {
            for c in -16..=16i64 {
                let poly = [a, b, c];
                if poly_disc(poly) == 0 || has_rational_root(poly) {
                    continue;
                }
                let d = oracle_disc(poly);
                if d.abs() > x || is_square(d) {
                    continue;
                }
                let reps = classes.entry(d).or_default();
                if !reps.iter().any(|&r| same_field(r, poly)) {
                    reps.push(poly);
                }
            }
        }
    }
    classes
}
