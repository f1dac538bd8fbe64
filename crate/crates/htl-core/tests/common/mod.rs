//! Independent reference implementations used as oracles: naive dense
//! eliminators over GF(2) and GF(q), a naive i128 Smith reduction, and
//! brute-force minor enumeration. Deliberately simple and slow; they share
//! no code with the main implementations.

#![allow(dead_code)]

use num_integer::Integer;

/// Rank of a 0/1 matrix over GF(2) by schoolbook elimination on bytes.
pub fn naive_rank_gf2(mut m: Vec<Vec<u8>>) -> usize {
    if m.is_empty() || m[0].is_empty() {
        return 0;
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| m[r][c] == 1) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in 0..rows {
            if r != rank && m[r][c] == 1 {
                for j in 0..cols {
                    m[r][j] ^= m[rank][j];
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Rank over GF(q) by schoolbook elimination.
pub fn naive_rank_gfq(mut m: Vec<Vec<u64>>, q: u64) -> usize {
    if m.is_empty() || m[0].is_empty() {
        return 0;
    }
    let rows = m.len();
    let cols = m[0].len();
    for row in &mut m {
        for v in row.iter_mut() {
            *v %= q;
        }
    }
    let inv = |a: u64| -> u64 {
        // Fermat
        let mut acc = 1u64;
        let mut base = a % q;
        let mut e = q - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % q;
            }
            base = base * base % q;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let f = inv(m[rank][c]);
        for j in 0..cols {
            m[rank][j] = m[rank][j] * f % q;
        }
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let factor = m[r][c];
                for j in 0..cols {
                    m[r][j] = (m[r][j] + (q - factor) * m[rank][j]) % q;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// gcd of all k x k minors (0 when all vanish). Brute force.
pub fn minor_gcd(m: &[Vec<i128>], k: usize) -> i128 {
    let rows = m.len();
    let cols = m[0].len();
    let mut g: i128 = 0;
    for rsel in combinations(rows, k) {
        for csel in combinations(cols, k) {
            let det = det_i128(&rsel, &csel, m);
            g = g.gcd(&det);
        }
    }
    g
}

fn det_i128(rsel: &[usize], csel: &[usize], m: &[Vec<i128>]) -> i128 {
    let k = rsel.len();
    if k == 0 {
        return 1;
    }
    // Laplace expansion along the first row; k <= 3 in practice
    if k == 1 {
        return m[rsel[0]][csel[0]];
    }
    let mut det = 0i128;
    for (j, &c) in csel.iter().enumerate() {
        let sub_r = &rsel[1..];
        let sub_c: Vec<usize> = csel
            .iter()
            .enumerate()
            .filter(|(jj, _)| *jj != j)
            .map(|(_, &cc)| cc)
            .collect();
        let minor = det_i128(sub_r, &sub_c, m);
        let term = m[rsel[0]][c] * minor;
        if j % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// The 6-vertex triangulation of the real projective plane (10 facets,
/// 0-based). Every edge lies in exactly two triangles; Euler characteristic
/// 6 - 15 + 10 = 1.
pub const RP2_FACETS: [[usize; 3]; 10] = [
    [0, 1, 2],
    [0, 2, 3],
    [0, 3, 4],
    [0, 4, 5],
    [0, 1, 5],
    [1, 2, 4],
    [1, 3, 4],
    [1, 3, 5],
    [2, 3, 5],
    [2, 4, 5],
];
