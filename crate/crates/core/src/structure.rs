//! Composition factors of the Weyl modules `V(ϖ)` for `ϖ ∈ ϖ₁ + Λ(G)`,
//! groups of type B and D.
//!
//! The solver first bounds multiplicities by decomposing the tilting module
//! `V(ϖ₁) ⊗ V(ϖ − ϖ₁)` in the χ-basis, then decides which candidates occur
//! from the truncated Jantzen sum.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::charcalc::{decompose_into_chi, dominant_multiplicities, tensor, weyl_character, weyl_dim, DominantMultiplicities};
use crate::error::{Error, Result};
use crate::jantzen::{check_characteristic, epsilon_p, truncated_jantzen, ChiRewriter};
use crate::rootdata::{Family, GroupType, RootSystem, Weight};
use crate::weylact::{leq, lt};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylModuleStructure {
    pub group: GroupType,
    pub p: u64,
    pub highest_weight: Weight,
    /// Composition factors, head first.
    pub factors: Vec<(Weight, i64)>,
    pub radical_summands: Vec<(Weight, i64)>,
    pub dim_weyl: i64,
    pub dim_irreducible: i64,
}

fn fw(n: usize, i: usize) -> Weight {
    Weight::fundamental(n, i)
}

/// `Λ(G)`: the fundamental weights plus `2ϖ_n` (type B) or
/// `2ϖ_{n−1}, 2ϖ_n, ϖ_{n−1}+ϖ_n` (type D).
pub fn lambda_set(group: GroupType) -> Result<Vec<Weight>> {
    let n = group.rank;
    let mut out: Vec<Weight> = (1..=n).map(|i| fw(n, i)).collect();
    match group.family {
        Family::A => return Err(Error::UnsupportedFamily("A (Λ(G) is defined for B and D)".into())),
        Family::B => out.push(fw(n, n).scale(2)),
        Family::D => {
            out.push(fw(n, n - 1).scale(2));
            out.push(fw(n, n).scale(2));
            out.push(fw(n, n - 1).add(&fw(n, n)));
        }
    }
    Ok(out)
}

/// `Λ₁(G) = ϖ₁ + Λ(G)`.
pub fn lambda1_set(group: GroupType) -> Result<Vec<Weight>> {
    let w1 = fw(group.rank, 1);
    Ok(lambda_set(group)?.iter().map(|x| x.add(&w1)).collect())
}

pub fn in_lambda(group: GroupType, w: &Weight) -> bool {
    lambda_set(group).map(|s| s.contains(w)).unwrap_or(false)
}

pub fn in_lambda1(group: GroupType, w: &Weight) -> bool {
    lambda1_set(group).map(|s| s.contains(w)).unwrap_or(false)
}

fn require_odd(p: u64) -> Result<()> {
    check_characteristic(p)?;
    if p == 2 {
        return Err(Error::UnsupportedCharacteristic(2));
    }
    Ok(())
}

fn require_lambda1(rs: &RootSystem, varpi: &Weight) -> Result<()> {
    rs.check_rank(varpi)?;
    if !in_lambda1(rs.group(), varpi) {
        return Err(Error::InvalidWeight(format!("{varpi} is not in ϖ₁ + Λ(G)")));
    }
    Ok(())
}

/// Upper bounds `[V(ϖ) : L(μ)] ≤ a_μ` read off the χ-decomposition of
/// `V(ϖ₁) ⊗ V(ϖ − ϖ₁)`. Only nonzero bounds are returned.
pub fn tilting_upper_bounds(rs: &RootSystem, varpi: &Weight, p: u64) -> Result<BTreeMap<Weight, i64>> {
    require_odd(p)?;
    require_lambda1(rs, varpi)?;
    let n = rs.rank();
    let x = varpi.sub(&fw(n, 1));
    let ch = tensor(&weyl_character(rs, &fw(n, 1))?, &weyl_character(rs, &x)?)?;
    let d = decompose_into_chi(rs, &ch)?;
    if d.coefficient(varpi) != 1 {
        return Err(Error::Internal(format!("{varpi} is not the highest weight of T({varpi})")));
    }
    let mut out = BTreeMap::new();
    for (mu, c) in d.terms {
        if &mu == varpi {
            continue;
        }
        // χ(μ) = ch L(μ) here, which is what makes a_μ a bound in the
        // irreducible basis.
        if !(mu.is_zero() || in_lambda(rs.group(), &mu)) || c < 0 {
            return Err(Error::UnknownFactorization {
                nu: mu,
                mu: varpi.clone(),
            });
        }
        out.insert(mu, c);
    }
    Ok(out)
}

/// Rewrites `χ_μ(ν)` using the irreducibility of `V(ν)` for `ν ∈ Λ(G) ∪ {0}`,
/// solved structures for `ν ∈ Λ₁(G)`, and the multiplicity-one criterion for
/// `p`-restricted `ν` otherwise.
pub struct StructureRewriter {
    pub p: u64,
}

impl ChiRewriter for StructureRewriter {
    fn truncated_chi(&self, rs: &RootSystem, nu: &Weight, mu: &Weight) -> Result<Vec<(Weight, i64)>> {
        let group = rs.group();
        if nu.is_zero() || in_lambda(group, nu) || self.p == 0 {
            return Ok(vec![(nu.clone(), 1)]);
        }
        if in_lambda1(group, nu) {
            let s = weyl_module_structure(rs, self.p, nu)?;
            return Ok(s.factors.into_iter().filter(|(x, _)| leq(rs, mu, x)).collect());
        }
        let dom = dominant_multiplicities(rs, nu)?;
        let restricted = nu.0.iter().all(|&c| (c as u64) < self.p);
        let window_ok = dom
            .iter()
            .filter(|(eta, _)| *eta != nu && leq(rs, mu, eta))
            .all(|(_, m)| *m <= 1);
        if restricted && window_ok {
            return Ok(vec![(nu.clone(), 1)]);
        }
        Err(Error::UnknownFactorization {
            nu: nu.clone(),
            mu: mu.clone(),
        })
    }
}

type StructureKey = (GroupType, u64, Weight);

fn structure_cache() -> &'static Mutex<HashMap<StructureKey, Arc<WeylModuleStructure>>> {
    static CACHE: OnceLock<Mutex<HashMap<StructureKey, Arc<WeylModuleStructure>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn swap_spin(n: usize, w: &Weight) -> Weight {
    let mut v = w.clone();
    v.0.swap(n - 2, n - 1);
    v
}

/// Composition factors and radical of `V(ϖ)` for `ϖ ∈ Λ₁(G)` and `p ≠ 2`.
///
/// Type D weights with more weight on `ϖ_{n−1}` than on `ϖ_n` are solved
/// through the diagram automorphism.
pub fn weyl_module_structure(rs: &RootSystem, p: u64, varpi: &Weight) -> Result<WeylModuleStructure> {
    require_odd(p)?;
    require_lambda1(rs, varpi)?;
    let n = rs.rank();
    if rs.family() == Family::D && varpi.0[n - 2] > varpi.0[n - 1] {
        let s = weyl_module_structure(rs, p, &swap_spin(n, varpi))?;
        let swap_all = |v: Vec<(Weight, i64)>| v.into_iter().map(|(w, m)| (swap_spin(n, &w), m)).collect();
        return Ok(WeylModuleStructure {
            highest_weight: varpi.clone(),
            factors: swap_all(s.factors),
            radical_summands: swap_all(s.radical_summands),
            ..s
        });
    }
    solve_structure(rs, p, varpi)
}

/// Solves `V(ϖ)` directly, without the diagram automorphism.
pub fn solve_structure(rs: &RootSystem, p: u64, varpi: &Weight) -> Result<WeylModuleStructure> {
    require_odd(p)?;
    require_lambda1(rs, varpi)?;
    let key = (rs.group(), p, varpi.clone());
    if let Some(s) = structure_cache().lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok((**s).clone());
    }
    let s = solve_uncached(rs, p, varpi)?;
    structure_cache()
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(key, Arc::new(s.clone()));
    Ok(s)
}

fn solve_uncached(rs: &RootSystem, p: u64, varpi: &Weight) -> Result<WeylModuleStructure> {
    let bounds = tilting_upper_bounds(rs, varpi, p)?;
    let mut radical: Vec<(Weight, i64)> = Vec::new();
    if p != 0 && !bounds.is_empty() {
        let candidates: Vec<&Weight> = bounds.keys().collect();
        let rewriter = StructureRewriter { p };
        let minimal = candidates
            .iter()
            .find(|c| candidates.iter().all(|d| leq(rs, c, d)))
            .copied();
        let b: BTreeMap<Weight, i64> = match minimal {
            Some(mu) => {
                let ts = truncated_jantzen(rs, varpi, mu, p, &rewriter)?;
                for (xi, _) in &ts.chil_terms.terms {
                    if !bounds.contains_key(xi) {
                        return Err(Error::Internal(format!(
                            "L({xi}) appears in the Jantzen sum of {varpi} but not in the tilting bound"
                        )));
                    }
                }
                ts.chil_terms.as_map()
            }
            None => {
                let mut b = BTreeMap::new();
                for &c in &candidates {
                    let ts = truncated_jantzen(rs, varpi, c, p, &rewriter)?;
                    b.insert(c.clone(), ts.chil_terms.coefficient(c));
                }
                b
            }
        };
        for (xi, &a) in &bounds {
            let bx = b.get(xi).copied().unwrap_or(0);
            if bx == 0 {
                continue;
            }
            if a.min(bx) != 1 {
                return Err(Error::AmbiguousMultiplicity(xi.clone()));
            }
            radical.push((xi.clone(), 1));
        }
    }
    let dim_weyl = weyl_dim(rs, varpi)?;
    let mut dim_irreducible = dim_weyl;
    for (xi, m) in &radical {
        dim_irreducible -= m * irreducible_dim(rs, p, xi)?;
    }
    radical.sort_by(|a, b| b.0.cmp(&a.0));
    let mut factors = vec![(varpi.clone(), 1)];
    factors.extend(radical.iter().cloned());
    Ok(WeylModuleStructure {
        group: rs.group(),
        p,
        highest_weight: varpi.clone(),
        factors,
        radical_summands: radical,
        dim_weyl,
        dim_irreducible,
    })
}

/// `dim L(ϖ)` for `ϖ ∈ Λ(G) ∪ Λ₁(G) ∪ {0}`.
pub fn irreducible_dim(rs: &RootSystem, p: u64, varpi: &Weight) -> Result<i64> {
    require_odd(p)?;
    rs.check_rank(varpi)?;
    if varpi.is_zero() || in_lambda(rs.group(), varpi) {
        return weyl_dim(rs, varpi);
    }
    if in_lambda1(rs.group(), varpi) {
        return Ok(weyl_module_structure(rs, p, varpi)?.dim_irreducible);
    }
    Err(Error::InvalidWeight(format!("{varpi} is not in Λ(G) ∪ Λ₁(G)")))
}

/// Dominant part of `ch L(ξ)` for `ξ ∈ Λ(G) ∪ Λ₁(G) ∪ {0}`, or any `ξ` when `p = 0`.
pub fn irreducible_character(rs: &RootSystem, p: u64, xi: &Weight) -> Result<Arc<DominantMultiplicities>> {
    require_odd(p)?;
    rs.check_dominant(xi)?;
    if p == 0 || xi.is_zero() || in_lambda(rs.group(), xi) {
        return dominant_multiplicities(rs, xi);
    }
    if !in_lambda1(rs.group(), xi) {
        return Err(Error::UnknownFactorization {
            nu: xi.clone(),
            mu: xi.clone(),
        });
    }
    let s = weyl_module_structure(rs, p, xi)?;
    let mut dom = (*dominant_multiplicities(rs, xi)?).clone();
    for (eta, m) in &s.radical_summands {
        for (w, k) in irreducible_character(rs, p, eta)?.iter() {
            *dom.entry(w.clone()).or_insert(0) -= m * k;
        }
    }
    dom.retain(|_, v| *v != 0);
    if dom.values().any(|&v| v < 0) {
        return Err(Error::Internal(format!("negative multiplicity in L({xi})")));
    }
    Ok(Arc::new(dom))
}

/// Checks the structural invariants: factor order, linkage, tilting bounds.
pub fn verify_structure(rs: &RootSystem, s: &WeylModuleStructure) -> Result<()> {
    let bounds = tilting_upper_bounds(rs, &s.highest_weight, s.p)?;
    for (xi, m) in &s.radical_summands {
        if !lt(rs, xi, &s.highest_weight) {
            return Err(Error::Internal(format!("{xi} is not below the highest weight")));
        }
        if *m > bounds.get(xi).copied().unwrap_or(0) {
            return Err(Error::Internal(format!("{xi} exceeds its tilting bound")));
        }
        if s.p != 0 {
            let (ok, _) = crate::jantzen::linkage_admissible(rs, &s.highest_weight, xi, s.p)?;
            if !ok {
                return Err(Error::Internal(format!("{xi} fails the linkage test")));
            }
        }
    }
    Ok(())
}

/// A row of the published structure tables, with `ε_p` evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub radical: Vec<(Weight, i64)>,
    pub flags: Vec<String>,
}

pub const FLAG_OPEN_EPSILON: &str = "open-question:epsilon-index";
pub const FLAG_DIM_ERRATUM: &str = "erratum-suspect";

fn row(label: &str, terms: Vec<(Weight, i64)>) -> TableRow {
    let mut merged: BTreeMap<Weight, i64> = BTreeMap::new();
    for (w, m) in terms {
        *merged.entry(w).or_insert(0) += m;
    }
    let mut radical: Vec<(Weight, i64)> = merged.into_iter().filter(|(_, m)| *m != 0).collect();
    radical.sort_by(|a, b| b.0.cmp(&a.0));
    TableRow {
        label: label.to_string(),
        radical,
        flags: Vec::new(),
    }
}

/// The radical of `V(ϖ)` as listed in the structure tables, or `None` when
/// `ϖ` is not covered. Where two rows describe the same weight the first
/// matching row is used.
pub fn expected_table_row(group: GroupType, p: u64, varpi: &Weight) -> Option<TableRow> {
    let n = group.rank;
    if varpi.rank() != n {
        return None;
    }
    let e = |z: usize| epsilon_p(z as i64, p);
    let w = |i: usize| fw(n, i);
    let w1 = w(1);
    let is = |x: Weight| &x == varpi;
    match group.family {
        Family::A => None,
        Family::B => {
            if is(w1.scale(2)) {
                return Some(row("2w1", vec![(w(0), e(2 * n + 1))]));
            }
            for j in 2..=n.saturating_sub(2) {
                if is(w1.add(&w(j))) {
                    return Some(row(
                        "w1+wj",
                        vec![(w(j + 1), e(j + 1)), (w(j - 1), e(2 * n - j + 2))],
                    ));
                }
            }
            if is(w1.add(&w(n - 1))) {
                return Some(row(
                    "w1+w(n-1)",
                    vec![(w(n).scale(2), e(n)), (w(n - 2), e(n + 3))],
                ));
            }
            if is(w1.add(&w(n))) {
                return Some(row("w1+wn", vec![(w(n), e(2 * n + 1))]));
            }
            if is(w1.add(&w(n).scale(2))) {
                return Some(row(
                    "w1+2wn",
                    vec![(w(n).scale(2), e(n + 1)), (w(n - 1), e(n + 2))],
                ));
            }
            None
        }
        Family::D => {
            let spin = w(n - 1).add(&w(n));
            if is(w1.scale(2)) {
                return Some(row("2w1", vec![(w(0), e(n))]));
            }
            for j in 2..=n.saturating_sub(3) {
                if is(w1.add(&w(j))) {
                    return Some(row(
                        "w1+wj",
                        vec![(w(j + 1), e(j + 1)), (w(j - 1), e(2 * n - j + 1))],
                    ));
                }
            }
            if is(w1.add(&w(n - 2))) {
                return Some(row(
                    "w1+w(n-2)",
                    vec![(spin.clone(), e(n - 1)), (w(n - 3), e(n + 3))],
                ));
            }
            if is(w1.add(&w(n))) {
                return Some(row("w1+wn", vec![(w(n - 1), e(n))]));
            }
            if is(w1.add(&w(n - 1))) {
                return Some(row("w1+w(n-1)", vec![(w(n), e(n))]));
            }
            if is(w1.add(&spin)) {
                return Some(row(
                    "w1+w(n-1)+wn",
                    vec![
                        (w(n - 1).scale(2), e(n)),
                        (w(n).scale(2), e(n)),
                        (w(n - 2), e(n + 2)),
                    ],
                ));
            }
            if is(w1.add(&w(n).scale(2))) || is(w1.add(&w(n - 1).scale(2))) {
                let label = if is(w1.add(&w(n).scale(2))) { "w1+2wn" } else { "w1+2w(n-1)" };
                let mut r = row(label, vec![(spin, e(n + 1))]);
                r.flags.push(FLAG_OPEN_EPSILON.to_string());
                return Some(r);
            }
            None
        }
    }
}

/// A dimension from the published corollary tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryDim {
    pub label: String,
    pub value: i64,
    pub flags: Vec<String>,
}

fn binom(n: i64, k: i64) -> i128 {
    if k < 0 || k > n {
        return 0;
    }
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r
}

/// Evaluates the printed closed forms for `dim L(ϖ)`, `ϖ ∈ Λ₁(G)`.
pub fn expected_corollary_dim(group: GroupType, p: u64, varpi: &Weight) -> Option<CorollaryDim> {
    let n = group.rank;
    if varpi.rank() != n {
        return None;
    }
    let ni = n as i64;
    let e = |z: i64| Ratio::from_integer(epsilon_p(z, p) as i128);
    let q = |a: i64, b: i64| Ratio::new(a as i128, b as i128);
    let w = |i: usize| fw(n, i);
    let w1 = w(1);
    let done = |label: &str, v: Ratio<i128>, flags: Vec<String>| {
        if !v.is_integer() {
            return None;
        }
        Some(CorollaryDim {
            label: label.to_string(),
            value: i64::try_from(v.to_integer()).ok()?,
            flags,
        })
    };
    match group.family {
        Family::A => None,
        Family::B => {
            if varpi == &w1.add(&w(n)) {
                let v = Ratio::from_integer(1i128 << n) * (Ratio::from_integer(2 * ni as i128) - e(2 * ni + 1));
                return done("w1+wn", v, vec![]);
            }
            for j in 1..=n {
                let mut x = w1.add(&w(j));
                if j == n {
                    x = x.add(&w(n));
                }
                if varpi == &x {
                    let j = j as i64;
                    let inner = q(j * (2 * ni + 3), 2 * ni - j + 2)
                        - e(j + 1)
                        - e(2 * ni - j + 2) * q(j * (j + 1), (2 * ni - j + 2) * (2 * ni - j + 1));
                    return done("w1+wj", Ratio::from_integer(binom(2 * ni + 1, j + 1)) * inner, vec![]);
                }
            }
            None
        }
        Family::D => {
            // Both spin-mirror weights share a row.
            let canon = if varpi.0[n - 2] > varpi.0[n - 1] { swap_spin(n, varpi) } else { varpi.clone() };
            if canon == w1.add(&w(n)) {
                let v = Ratio::from_integer(1i128 << n) * (Ratio::from_integer(2 * ni as i128) - e(2 * ni + 1));
                return done("w1+wn", v, vec![FLAG_DIM_ERRATUM.to_string()]);
            }
            if canon == w1.add(&w(n).scale(2)) {
                let v = (Ratio::from_integer(ni as i128) - e(ni + 1)) * Ratio::from_integer(binom(2 * ni, ni + 1));
                return done("w1+2wn", v, vec![FLAG_OPEN_EPSILON.to_string()]);
            }
            for j in 1..n {
                let mut x = w1.add(&w(j));
                if j == n - 1 {
                    x = x.add(&w(n));
                }
                if canon == x {
                    let j = j as i64;
                    let inner = q(2 * j * (ni + 1), 2 * ni - j + 1)
                        - e(j + 1)
                        - e(2 * ni - j + 1) * q(j * (j + 1), (2 * ni - j) * (2 * ni - j + 1));
                    return done("w1+wj", Ratio::from_integer(binom(2 * ni, j + 1)) * inner, vec![]);
                }
            }
            None
        }
    }
}
