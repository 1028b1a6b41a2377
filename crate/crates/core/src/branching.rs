//! Restriction from `SL(W)` (type `A_{2n}` or `A_{2n−1}`) to `SO(W)` (type
//! `B_n` or `D_n`), and the composition factors of `L_Y(λ₁+λ_j)|_G`.

use serde::{Deserialize, Serialize};

use crate::charcalc::{decompose_into_chi, peel, weyl_character, Basis, ChiDecomposition, FormalCharacter};
use crate::error::{Error, Result};
use crate::jantzen::{check_characteristic, epsilon_p};
use crate::rootdata::{root_system, Family, GroupType, Weight};
use crate::structure::irreducible_character;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionMap {
    pub source: GroupType,
    pub target: GroupType,
    /// `matrix[i][k]`: coefficient of `ϖ_{i+1}` in the restriction of `λ_{k+1}`.
    pub matrix: Vec<Vec<i64>>,
}

/// The restriction map to a group of type B or D from the special linear
/// group of its natural module.
pub fn restriction_map(target: GroupType) -> Result<RestrictionMap> {
    let target = GroupType::new(target.family, target.rank)?;
    let n = target.rank;
    let source_rank = match target.family {
        Family::B => 2 * n,
        Family::D => 2 * n - 1,
        Family::A => return Err(Error::UnsupportedFamily("A (restriction target must be B or D)".into())),
    };
    let source = GroupType::new(Family::A, source_rank)?;
    let mut matrix = vec![vec![0i64; source_rank]; n];
    for k in 1..=source_rank {
        let col = k - 1;
        let mut set = |i: usize, c: i64| matrix[i - 1][col] += c;
        match target.family {
            Family::B => {
                if k == n || k == n + 1 {
                    set(n, 2);
                } else if k < n {
                    set(k, 1);
                } else {
                    set(2 * n + 1 - k, 1);
                }
            }
            Family::D => {
                if k == n {
                    set(n, 2);
                } else if k == n - 1 || k == n + 1 {
                    set(n - 1, 1);
                    set(n, 1);
                } else if k < n - 1 {
                    set(k, 1);
                } else {
                    set(2 * n - k, 1);
                }
            }
            Family::A => unreachable!(),
        }
    }
    Ok(RestrictionMap { source, target, matrix })
}

/// Restriction map between explicitly given groups; the ranks must match.
pub fn restriction_map_between(source: GroupType, target: GroupType) -> Result<RestrictionMap> {
    let m = restriction_map(target)?;
    if m.source != source {
        return Err(Error::InvalidWeight(format!(
            "{source} does not restrict to {target}; expected source {}",
            m.source
        )));
    }
    Ok(m)
}

pub fn restrict_weight(m: &RestrictionMap, w: &Weight) -> Result<Weight> {
    if w.rank() != m.source.rank {
        return Err(Error::DimensionMismatch {
            expected: m.source.rank,
            got: w.rank(),
        });
    }
    Ok(Weight(
        m.matrix
            .iter()
            .map(|row| row.iter().zip(&w.0).map(|(a, b)| a * b).sum())
            .collect(),
    ))
}

pub fn restrict_character(m: &RestrictionMap, ch: &FormalCharacter) -> Result<FormalCharacter> {
    if ch.group() != m.source {
        return Err(Error::InvalidWeight(format!("character of {} given, expected {}", ch.group(), m.source)));
    }
    let mut out = FormalCharacter::zero(m.target);
    for (w, c) in ch.terms() {
        out.add_term(restrict_weight(m, w)?, *c)?;
    }
    Ok(out)
}

/// `λ₁ + λ_j` in the source group (`2λ₁` when `j = 1`).
pub fn source_weight(m: &RestrictionMap, j: usize) -> Result<Weight> {
    let r = m.source.rank;
    if j == 0 || j > r {
        return Err(Error::InvalidWeight(format!("j = {j} outside 1..={r}")));
    }
    Ok(Weight::fundamental(r, 1).add(&Weight::fundamental(r, j)))
}

/// Recovers `j` from a source weight of the form `λ₁ + λ_j`.
pub fn j_of_source_weight(m: &RestrictionMap, w: &Weight) -> Result<usize> {
    (1..=m.source.rank)
        .find(|&j| source_weight(m, j).map(|x| &x == w).unwrap_or(false))
        .ok_or_else(|| Error::InvalidWeight(format!("{w} is not of the form λ₁+λ_j")))
}

/// `ch V_Y(λ₁+λ_j)|_G` in the χ-basis of `G`.
pub fn weyl_restriction_chi(m: &RestrictionMap, j: usize) -> Result<ChiDecomposition> {
    let src = root_system(m.source)?;
    let tgt = root_system(m.target)?;
    let lam = source_weight(m, j)?;
    let ch = restrict_character(m, &weyl_character(&src, &lam)?)?;
    decompose_into_chi(&tgt, &ch)
}

/// `ch L_Y(λ₁+λ_j)|_G = ch V_Y(λ₁+λ_j)|_G − ε_p(j+1)·ch V_Y(λ_{j+1})|_G`.
pub fn restricted_irreducible_character(m: &RestrictionMap, j: usize, p: u64) -> Result<FormalCharacter> {
    check_characteristic(p)?;
    if p == 2 {
        return Err(Error::UnsupportedCharacteristic(2));
    }
    let src = root_system(m.source)?;
    let lam = source_weight(m, j)?;
    let mut ch = restrict_character(m, &weyl_character(&src, &lam)?)?;
    let e = epsilon_p(j as i64 + 1, p);
    if e != 0 {
        let next = Weight::fundamental(m.source.rank, if j < m.source.rank { j + 1 } else { 0 });
        ch.add_scaled(&restrict_character(m, &weyl_character(&src, &next)?)?, -e)?;
    }
    Ok(ch)
}

/// Composition factors of `L_Y(λ₁+λ_j)|_G`, highest first.
pub fn restriction_composition_factors(m: &RestrictionMap, j: usize, p: u64) -> Result<Vec<(Weight, i64)>> {
    let tgt = root_system(m.target)?;
    let ch = restricted_irreducible_character(m, j, p)?;
    let terms = peel(&tgt, ch.dominant_part(), |w| irreducible_character(&tgt, p, w))?;
    if let Some((w, c)) = terms.iter().find(|(_, c)| *c < 0) {
        return Err(Error::Internal(format!("negative multiplicity {c} for L({w})")));
    }
    Ok(terms)
}

/// Same result packaged as a decomposition in the irreducible basis.
pub fn restriction_composition_decomposition(m: &RestrictionMap, j: usize, p: u64) -> Result<ChiDecomposition> {
    Ok(ChiDecomposition {
        basis: Basis::Irreducible,
        terms: restriction_composition_factors(m, j, p)?,
    })
}

/// `dim L_Y(λ₁+λ_j)` for `Y = SL_{N+1}`, `p ≠ 2`, from the closed forms for
/// `2λ₁` and `λ₁+λ_j`.
pub fn expected_source_dim(m: &RestrictionMap, j: usize, p: u64) -> Option<i64> {
    let big_n = m.source.rank as i64;
    let j = j as i64;
    if j < 1 || j > big_n {
        return None;
    }
    let b = |a: i64, k: i64| -> i64 {
        let mut r: i128 = 1;
        for i in 0..k {
            r = r * (a - i) as i128 / (i + 1) as i128;
        }
        r as i64
    };
    if j == 1 {
        return Some(b(big_n + 2, 2));
    }
    Some(j * b(big_n + 2, j + 1) - epsilon_p(j + 1, p) * b(big_n + 1, j + 1))
}

/// A row of the published branching tables, with multiplicities evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchingRow {
    pub label: String,
    pub factors: Vec<(Weight, i64)>,
    pub flags: Vec<String>,
}

pub const FLAG_MISPRINTED_WEIGHT: &str = "erratum-suspect:misprinted-weight";
pub const FLAG_DANGLING_SEPARATOR: &str = "manual-check:dangling-separator";

/// Composition factors of `L_Y(λ₁+λ_j)|_G` as listed in the branching
/// tables. In the row `λ₁+λ_n` of type D the printed weight `ϖ₁+ϖ_n` is read
/// as `ϖ_{n−1}+ϖ_n`, the only reading compatible with the dominance order.
pub fn expected_branching_row(target: GroupType, j: usize, p: u64) -> Option<BranchingRow> {
    let m = restriction_map(target).ok()?;
    let n = target.rank;
    let lam = restrict_weight(&m, &source_weight(&m, j).ok()?).ok()?;
    let e = |z: usize| epsilon_p(z as i64, p);
    let w = |i: usize| Weight::fundamental(n, i);
    let mut flags = Vec::new();
    let (label, rest): (&str, Vec<(Weight, i64)>) = match target.family {
        Family::B => {
            if j <= n {
                ("l1+lj (j<=n)", vec![(w(j - 1), 1 + e(2 * n - j + 2))])
            } else if j == n + 1 {
                ("l1+l(n+1)", vec![(w(n).scale(2), 1 + e(n + 1))])
            } else if j == n + 2 {
                ("l1+l(n+2)", vec![(w(n).scale(2), 1 + e(n))])
            } else {
                ("l1+lj (j>=n+3)", vec![(w(2 * n - j + 2), 1 + e(2 * n - j + 2))])
            }
        }
        Family::D => {
            let spin = w(n - 1).add(&w(n));
            if j < n {
                ("l1+lj (j<=n-1)", vec![(w(j - 1), 1 + e(2 * n - j + 1))])
            } else if j == n {
                flags.push(FLAG_MISPRINTED_WEIGHT.to_string());
                (
                    "l1+ln",
                    vec![(w(1).add(&w(n - 1).scale(2)), 1), (spin, 1 + e(n + 1))],
                )
            } else if j == n + 1 {
                flags.push(FLAG_DANGLING_SEPARATOR.to_string());
                (
                    "l1+l(n+1)",
                    vec![(w(n - 1).scale(2), 1 + e(n)), (w(n).scale(2), 1 + e(n))],
                )
            } else if j == n + 2 {
                ("l1+l(n+2)", vec![(spin, 1 + e(n - 1))])
            } else {
                ("l1+lj (j>=n+3)", vec![(w(2 * n - j + 1), 1 + e(2 * n - j + 1))])
            }
        }
        Family::A => return None,
    };
    let mut factors = vec![(lam, 1)];
    for (x, c) in rest {
        match factors.iter_mut().find(|(y, _)| *y == x) {
            Some(slot) => slot.1 += c,
            None => factors.push((x, c)),
        }
    }
    factors.retain(|(_, c)| *c != 0);
    Some(BranchingRow {
        label: label.to_string(),
        factors,
        flags,
    })
}
