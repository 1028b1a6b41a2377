//! Weyl group actions: dominant representatives with determinant, the dot
//! action, orbits and the dominance order.

use std::collections::{HashSet, VecDeque};

use crate::error::Result;
use crate::rootdata::{EpsVector, Family, RootSystem, Weight};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjugate {
    pub sorted: EpsVector,
    pub det: i64,
    pub singular: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DotConjugation {
    Regular { dominant: Weight, det: i64 },
    Singular,
}

/// Sign of the permutation that sorts `keys` into descending order.
fn sort_desc_with_sign(keys: &[i64]) -> (Vec<usize>, i64) {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| keys[b].cmp(&keys[a]).then(a.cmp(&b)));
    let mut inversions = 0usize;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] > idx[j] {
                inversions += 1;
            }
        }
    }
    (idx, if inversions % 2 == 0 { 1 } else { -1 })
}

/// The dominant element of the W-orbit of `v`, the determinant of a Weyl
/// group element taking `v` there, and whether `v` lies on a wall.
pub fn dominant_conjugate(rs: &RootSystem, v: &EpsVector) -> Conjugate {
    let x = &v.0;
    match rs.family() {
        Family::A => {
            let (idx, sign) = sort_desc_with_sign(x);
            let sorted: Vec<i64> = idx.iter().map(|&i| x[i]).collect();
            let singular = sorted.windows(2).any(|p| p[0] == p[1]);
            Conjugate {
                sorted: EpsVector(sorted),
                det: sign,
                singular,
            }
        }
        Family::B => {
            let abs: Vec<i64> = x.iter().map(|a| a.abs()).collect();
            let flips = x.iter().filter(|&&a| a < 0).count();
            let (idx, sign) = sort_desc_with_sign(&abs);
            let sorted: Vec<i64> = idx.iter().map(|&i| abs[i]).collect();
            let singular =
                sorted.iter().any(|&a| a == 0) || sorted.windows(2).any(|p| p[0] == p[1]);
            let det = if flips % 2 == 0 { sign } else { -sign };
            Conjugate {
                sorted: EpsVector(sorted),
                det,
                singular,
            }
        }
        Family::D => {
            let abs: Vec<i64> = x.iter().map(|a| a.abs()).collect();
            let negatives = x.iter().filter(|&&a| a < 0).count();
            let (idx, sign) = sort_desc_with_sign(&abs);
            let mut sorted: Vec<i64> = idx.iter().map(|&i| abs[i]).collect();
            let singular = sorted.windows(2).any(|p| p[0] == p[1]);
            if negatives % 2 == 1 {
                if let Some(last) = sorted.last_mut() {
                    *last = -*last;
                }
            }
            Conjugate {
                sorted: EpsVector(sorted),
                det: sign,
                singular,
            }
        }
    }
}

/// Dominant conjugate of `w` under the ordinary action, by repeated simple
/// reflections in fundamental coordinates.
pub fn dominant_weight(rs: &RootSystem, w: &Weight) -> Weight {
    let mut cur = w.clone();
    while let Some(j) = cur.0.iter().position(|&c| c < 0) {
        cur = rs.reflect_simple(&cur, j);
    }
    cur
}

/// `w·λ = w(λ+ρ)−ρ` pushed into the dominant chamber.
pub fn dot_dominant(rs: &RootSystem, w: &Weight) -> Result<DotConjugation> {
    let v = rs.to_eps(w)?.add(rs.rho());
    dot_dominant_eps(rs, &v)
}

/// Same as [`dot_dominant`] with `λ+ρ` already given in doubled ε-coordinates.
pub fn dot_dominant_eps(rs: &RootSystem, shifted: &EpsVector) -> Result<DotConjugation> {
    let c = dominant_conjugate(rs, shifted);
    if c.singular {
        return Ok(DotConjugation::Singular);
    }
    let xi = rs.from_eps(&c.sorted.sub(rs.rho()))?;
    Ok(DotConjugation::Regular {
        dominant: xi,
        det: c.det,
    })
}

/// The full W-orbit of `w`, sorted.
pub fn orbit(rs: &RootSystem, w: &Weight) -> Vec<Weight> {
    let start = dominant_weight(rs, w);
    let mut seen: HashSet<Weight> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for j in 0..rs.rank() {
            // Going down from the dominant weight, a reflection only produces
            // new elements when the coordinate is positive.
            if x.0[j] > 0 {
                let y = rs.reflect_simple(&x, j);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
    }
    let mut out: Vec<Weight> = seen.into_iter().collect();
    out.sort();
    out
}

/// `μ ≼ λ`: `λ − μ` is a nonnegative integral combination of simple roots.
pub fn leq(rs: &RootSystem, mu: &Weight, lambda: &Weight) -> bool {
    match rs.root_coefficients(&lambda.sub(mu)) {
        Ok(c) => c.iter().all(|&x| x >= 0),
        Err(_) => false,
    }
}

pub fn lt(rs: &RootSystem, mu: &Weight, lambda: &Weight) -> bool {
    mu != lambda && leq(rs, mu, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::GroupType;

    fn rs(f: Family, n: usize) -> RootSystem {
        RootSystem::new(GroupType::new(f, n).unwrap()).unwrap()
    }

    #[test]
    fn b2_sign_flip() {
        let r = rs(Family::B, 2);
        let c = dominant_conjugate(&r, &EpsVector(vec![-3, 1]));
        assert_eq!(c.sorted.0, vec![3, 1]);
        assert_eq!(c.det, -1);
        assert!(!c.singular);
        assert!(dominant_conjugate(&r, &EpsVector(vec![2, 0])).singular);
    }

    #[test]
    fn d_parity_goes_to_last_entry() {
        let r = rs(Family::D, 3);
        let c = dominant_conjugate(&r, &EpsVector(vec![3, -5, 1]));
        assert_eq!(c.sorted.0, vec![5, 3, -1]);
        assert!(!c.singular);
        let z = dominant_conjugate(&r, &EpsVector(vec![-3, 5, 0]));
        assert_eq!(z.sorted.0, vec![5, 3, 0]);
        assert!(!z.singular);
        assert!(dominant_conjugate(&r, &EpsVector(vec![3, -3, 1])).singular);
    }

    #[test]
    fn dot_examples_b2() {
        let r = rs(Family::B, 2);
        assert_eq!(
            dot_dominant(&r, &Weight(vec![2, 0])).unwrap(),
            DotConjugation::Regular {
                dominant: Weight(vec![2, 0]),
                det: 1
            }
        );
        assert_eq!(
            dot_dominant(&r, &Weight(vec![0, -1])).unwrap(),
            DotConjugation::Singular
        );
        // 2ϖ₁ − 5ε₁, and ε₁ = ϖ₁ in B₂.
        let w = Weight(vec![2, 0]).sub(&Weight(vec![5, 0]));
        assert_eq!(
            dot_dominant(&r, &w).unwrap(),
            DotConjugation::Regular {
                dominant: Weight(vec![0, 0]),
                det: -1
            }
        );
    }

    #[test]
    fn orbit_sizes() {
        let b2 = rs(Family::B, 2);
        assert_eq!(orbit(&b2, &Weight(vec![0, 0])), vec![Weight(vec![0, 0])]);
        let o = orbit(&b2, &Weight(vec![1, 0]));
        let mut eps: Vec<Vec<i64>> = o.iter().map(|w| b2.to_eps(w).unwrap().0).collect();
        eps.sort();
        assert_eq!(eps, vec![vec![-2, 0], vec![0, -2], vec![0, 2], vec![2, 0]]);
        let d3 = rs(Family::D, 3);
        assert_eq!(orbit(&d3, &Weight(vec![0, 0, 1])).len(), 4);
    }

    #[test]
    fn dominance_b2() {
        let r = rs(Family::B, 2);
        assert!(leq(&r, &Weight(vec![0, 2]), &Weight(vec![2, 0])));
        assert!(!leq(&r, &Weight(vec![1, 0]), &Weight(vec![0, 1])));
        assert!(leq(&r, &Weight(vec![1, 1]), &Weight(vec![1, 1])));
    }
}
