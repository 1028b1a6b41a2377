//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's Weyl-group, character or Jantzen code.

#![allow(dead_code)]

use std::collections::HashMap;

use spindle::charcalc::FormalCharacter;
use spindle::{Family, GroupType, RootSystem, Weight};

pub fn g(f: Family, n: usize) -> GroupType {
    GroupType::new(f, n).unwrap()
}

pub fn w(v: &[i64]) -> Weight {
    Weight(v.to_vec())
}

pub fn fw(n: usize, i: usize) -> Weight {
    Weight::fundamental(n, i)
}

pub fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r as i64
}

pub fn eps(z: i64, p: u64) -> i64 {
    (p != 0 && z % p as i64 == 0) as i64
}

pub fn nu(mut r: i64, p: i64) -> i64 {
    let mut k = 0;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    k
}

/// All dominant weights of rank `n` with coordinate sum at most `s`.
pub fn dominant_weights_up_to(n: usize, s: i64) -> Vec<Weight> {
    fn rec(n: usize, s: i64, cur: &mut Vec<i64>, out: &mut Vec<Weight>) {
        if cur.len() == n {
            out.push(Weight(cur.clone()));
            return;
        }
        for c in 0..=s {
            cur.push(c);
            rec(n, s - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, s, &mut Vec::new(), &mut out);
    out
}

/// The Weyl group acting on ε-coordinates as (signed) permutations, with
/// determinants. Type A permutes `n+1` coordinates; B allows every sign
/// change, D only an even number of them.
pub fn weyl_group_eps(f: Family, n: usize) -> Vec<(Vec<usize>, Vec<i64>, i64)> {
    let m = if f == Family::A { n + 1 } else { n };
    let mut perms = Vec::new();
    permutations(&mut (0..m).collect(), 0, &mut perms);
    let mut out = Vec::new();
    for perm in perms {
        let psign = perm_sign(&perm);
        if f == Family::A {
            out.push((perm, vec![1; m], psign));
            continue;
        }
        for mask in 0u32..(1 << m) {
            let negs = mask.count_ones() as i64;
            if f == Family::D && negs % 2 == 1 {
                continue;
            }
            let signs = (0..m).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            let det = if f == Family::B { psign * if negs % 2 == 1 { -1 } else { 1 } } else { psign };
            out.push((perm.clone(), signs, det));
        }
    }
    out
}

fn permutations(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

fn perm_sign(p: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

fn act(perm: &[usize], signs: &[i64], v: &[i64]) -> Vec<i64> {
    (0..v.len()).map(|i| signs[i] * v[perm[i]]).collect()
}

/// `Σ_w det(w) e^{w v}` on ε-coordinates, normalized modulo the all-ones
/// vector for type A.
pub fn alternant(f: Family, wg: &[(Vec<usize>, Vec<i64>, i64)], v: &[i64]) -> HashMap<Vec<i64>, i64> {
    let mut out = HashMap::new();
    for (perm, signs, det) in wg {
        *out.entry(normalize(f, act(perm, signs, v))).or_insert(0) += det;
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn normalize(f: Family, mut v: Vec<i64>) -> Vec<i64> {
    if f == Family::A {
        let last = *v.last().unwrap();
        for x in &mut v {
            *x -= last;
        }
    }
    v
}

/// `ch · A_ρ` with the character pushed to ε-coordinates.
pub fn times_alternant(
    rs: &RootSystem,
    ch: &FormalCharacter,
    a_rho: &HashMap<Vec<i64>, i64>,
) -> HashMap<Vec<i64>, i64> {
    let f = rs.family();
    let mut out: HashMap<Vec<i64>, i64> = HashMap::new();
    for (wt, m) in ch.terms() {
        let e = rs.to_eps(wt).unwrap();
        for (x, c) in a_rho {
            let s: Vec<i64> = e.twice_coords().iter().zip(x).map(|(a, b)| a + b).collect();
            *out.entry(normalize(f, s)).or_insert(0) += m * c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Dot action of a simple reflection in fundamental coordinates:
/// `s_i·μ = μ − (⟨μ,α_i^∨⟩+1) α_i`.
pub fn dot_simple(rs: &RootSystem, mu: &Weight, i: usize) -> Weight {
    let alpha = rs.simple_root_fund(i);
    mu.sub(&alpha.scale(mu.0[i] + 1))
}

/// Dimensions of the irreducibles of `SL_{N+1}` in the restricted cases
/// `aλ₁`, `λ_i` and `λ₁+λ_j`.
pub fn type_a_sym_dim(big_n: i64, a: i64) -> i64 {
    binom(a + big_n, a)
}

pub fn type_a_wedge_dim(big_n: i64, i: i64) -> i64 {
    binom(big_n + 1, i)
}

pub fn type_a_hook_dim(big_n: i64, j: i64, p: u64) -> i64 {
    j * binom(big_n + 2, j + 1) - eps(j + 1, p) * binom(big_n + 1, j + 1)
}
