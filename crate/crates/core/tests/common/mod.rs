//! Classical group (co)homology with cyclic coefficients twisted by a sign
//! character, from the normalized inhomogeneous bar complex over Z. Written
//! against a bare multiplication table with dense machine-word arithmetic so
//! that it shares nothing with the library's elimination code.

#![allow(dead_code)]

use std::path::PathBuf;

/// A large prime; ranks over it equal ranks over Q because all torsion in
/// group homology divides the group order.
const RANK_PRIME: i64 = 2_147_483_647;

pub fn battery_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../battery")
}

/// A finite group by its table, with a character `sign: G -> {±1}`.
pub struct Twisted {
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
    pub sign: Vec<i64>,
}

/// `Z^free ⊕ Z/t_1 ⊕ ...` with invariant factors `t_1 | t_2 | ...`, all `t_i ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abelian {
    pub free: usize,
    pub torsion: Vec<u64>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl Abelian {
    /// Canonical form of `⊕ Z/c` over `cyclic` (0 stands for Z, 1 is dropped).
    pub fn from_cyclic(cyclic: &[u64]) -> Self {
        let free = cyclic.iter().filter(|&&c| c == 0).count();
        let mut by_prime: Vec<(u64, Vec<u64>)> = Vec::new();
        for &c in cyclic.iter().filter(|&&c| c > 1) {
            for (p, e) in factor(c) {
                let q = p.pow(e);
                match by_prime.iter_mut().find(|(r, _)| *r == p) {
                    Some((_, v)) => v.push(q),
                    None => by_prime.push((p, vec![q])),
                }
            }
        }
        let len = by_prime.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
        let mut torsion = vec![1u64; len];
        for (_, mut powers) in by_prime {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (i, q) in powers.into_iter().enumerate() {
                torsion[len - 1 - i] *= q;
            }
        }
        Self { free, torsion }
    }

    fn cyclic(&self) -> Vec<u64> {
        let mut v = self.torsion.clone();
        v.extend(std::iter::repeat_n(0, self.free));
        v
    }

    pub fn order(&self) -> Option<u64> {
        (self.free == 0).then(|| self.torsion.iter().product())
    }
}

fn pairwise(a: &Abelian, m: u64, rule: impl Fn(u64, u64) -> Option<u64>) -> Vec<u64> {
    a.cyclic().into_iter().filter_map(|c| rule(c, m)).collect()
}

fn hom(a: &Abelian, m: u64) -> Vec<u64> {
    pairwise(a, m, |c, m| match (c, m) {
        (0, m) => Some(m),
        (_, 0) => None,
        (c, m) => Some(gcd(c, m)),
    })
}

fn ext(a: &Abelian, m: u64) -> Vec<u64> {
    pairwise(a, m, |c, m| match (c, m) {
        (0, _) => None,
        (c, 0) => Some(c),
        (c, m) => Some(gcd(c, m)),
    })
}

fn tensor(a: &Abelian, m: u64) -> Vec<u64> {
    pairwise(a, m, |c, m| Some(gcd(c, m)))
}

fn tor(a: &Abelian, m: u64) -> Vec<u64> {
    pairwise(a, m, |c, m| (c != 0 && m != 0).then(|| gcd(c, m)))
}

fn modpow(mut b: i64, mut e: i64, m: i64) -> i64 {
    let mut r = 1;
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl Twisted {
    fn order(&self) -> usize {
        self.mul.len()
    }

    fn nontrivial(&self) -> Vec<usize> {
        (0..self.order()).filter(|&g| g != self.identity).collect()
    }

    /// Boundary `C_n -> C_{n-1}` as dense rows indexed by `C_n` tuples, each
    /// row holding the coefficients on `C_{n-1}` tuples.
    fn boundary(&self, n: usize) -> Vec<Vec<i64>> {
        let elems = self.nontrivial();
        let k = elems.len();
        let mut pos = vec![usize::MAX; self.order()];
        for (i, &g) in elems.iter().enumerate() {
            pos[g] = i;
        }
        let index = |t: &[usize]| -> Option<usize> {
            t.iter().try_fold(0usize, |acc, &g| {
                (g != self.identity).then(|| acc * k + pos[g])
            })
        };
        let count = k.pow(n as u32);
        let target = k.pow(n as u32 - 1);
        let mut rows = Vec::with_capacity(count);
        for code in 0..count {
            let mut t = vec![0; n];
            let mut c = code;
            for slot in t.iter_mut().rev() {
                *slot = elems[c % k];
                c /= k;
            }
            let mut row = vec![0i64; target];
            if let Some(j) = index(&t[1..]) {
                row[j] += self.sign[t[0]];
            }
            for i in 0..n - 1 {
                let mut face = t[..i].to_vec();
                face.push(self.mul[t[i]][t[i + 1]]);
                face.extend_from_slice(&t[i + 2..]);
                if let Some(j) = index(&face) {
                    row[j] += if i % 2 == 0 { -1 } else { 1 };
                }
            }
            if let Some(j) = index(&t[..n - 1]) {
                row[j] += if n.is_multiple_of(2) { 1 } else { -1 };
            }
            rows.push(row);
        }
        rows
    }

    /// `H_n(G, Z_χ)` for `0 ≤ n ≤ top`.
    pub fn integral_homology(&self, top: usize) -> Vec<Abelian> {
        let k = self.order() - 1;
        let primes: Vec<(u64, u32)> = factor(self.order() as u64);
        // ranks[n] and local pivot valuations of d_n, for 1 ≤ n ≤ top + 1.
        let mut ranks = vec![0usize; top + 2];
        let mut torsion: Vec<Vec<u64>> = vec![Vec::new(); top + 2];
        for n in 1..=top + 1 {
            let d = self.boundary(n);
            ranks[n] = rank_mod(d.clone(), RANK_PRIME);
            let mut cyclic = Vec::new();
            for &(p, e) in &primes {
                let vals = local_valuations(d.clone(), p as i64, e + 1);
                assert_eq!(vals.len(), ranks[n], "torsion beyond the group order");
                cyclic.extend(vals.into_iter().filter(|&v| v > 0).map(|v| p.pow(v)));
            }
            torsion[n] = cyclic;
        }
        (0..=top)
            .map(|n| {
                let dim = k.pow(n as u32);
                let mut cyclic = vec![0u64; dim - ranks[n] - ranks[n + 1]];
                cyclic.extend_from_slice(&torsion[n + 1]);
                Abelian::from_cyclic(&cyclic)
            })
            .collect()
    }
}

/// `(H^n(G, Z/m_χ), H_n(G, Z/m_χ))` from `hz[n] = H_n(G, Z_χ)`; `m = 0` means Z.
pub fn with_coefficients(hz: &[Abelian], m: u64) -> (Vec<Abelian>, Vec<Abelian>) {
    let zero = Abelian {
        free: 0,
        torsion: Vec::new(),
    };
    let mut coh = Vec::new();
    let mut hom_ = Vec::new();
    for n in 0..hz.len() {
        let prev = if n == 0 { &zero } else { &hz[n - 1] };
        let mut c = hom(&hz[n], m);
        c.extend(ext(prev, m));
        coh.push(Abelian::from_cyclic(&c));
        let mut h = tensor(&hz[n], m);
        h.extend(tor(prev, m));
        hom_.push(Abelian::from_cyclic(&h));
    }
    (coh, hom_)
}

fn rank_mod(mut a: Vec<Vec<i64>>, q: i64) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x = x.rem_euclid(q);
        }
    }
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let inv = modpow(a[rank][c], q - 2, q);
        let pivot = a[rank].clone();
        for r in rank + 1..a.len() {
            let f = a[r][c] * inv % q;
            if f != 0 {
                for (x, y) in a[r][c..].iter_mut().zip(&pivot[c..]) {
                    *x = (*x - f * y).rem_euclid(q);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn valuation(mut x: i64, p: i64) -> u32 {
    let mut v = 0;
    while x != 0 && x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Valuations `v ≤ top - 1` of the elementary divisors of `a` at `p`, by
/// elimination over `Z/p^top`; divisors of higher valuation are not seen.
fn local_valuations(mut a: Vec<Vec<i64>>, p: i64, top: u32) -> Vec<u32> {
    let q = p.pow(top);
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x = x.rem_euclid(q);
        }
    }
    let mut live_rows: Vec<usize> = (0..a.len()).collect();
    let mut live_cols: Vec<usize> = (0..a.first().map_or(0, Vec::len)).collect();
    let mut out = Vec::new();
    loop {
        let mut best: Option<(u32, usize, usize)> = None;
        'scan: for (ri, &r) in live_rows.iter().enumerate() {
            for (ci, &c) in live_cols.iter().enumerate() {
                if a[r][c] != 0 {
                    let v = valuation(a[r][c], p);
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, ri, ci));
                        if v == 0 {
                            break 'scan;
                        }
                    }
                }
            }
        }
        let Some((v, ri, ci)) = best else {
            return out;
        };
        out.push(v);
        let (r, c) = (live_rows.swap_remove(ri), live_cols.swap_remove(ci));
        let scale = p.pow(v);
        let unit_inv = modpow(a[r][c] / scale, phi(p, top) - 1, q);
        let pivot = a[r].clone();
        for &s in &live_rows {
            if a[s][c] != 0 {
                let f = (a[s][c] / scale) * unit_inv % q;
                for &j in &live_cols {
                    a[s][j] = (a[s][j] - f * pivot[j]).rem_euclid(q);
                }
                a[s][c] = 0;
            }
        }
    }
}

fn phi(p: i64, e: u32) -> i64 {
    p.pow(e - 1) * (p - 1)
}
