//! Root systems of types A, B and D in Bourbaki's ε-coordinates.
//!
//! All ε-vectors are stored doubled so that the half-integral spin weights of
//! types B and D stay integral. Type A lives in a fixed section of
//! `Z^{n+1}`: the fundamental weight `λ_i` is `ε_1 + … + ε_i`, and two
//! vectors that differ by a multiple of the all-ones vector describe the same
//! weight.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    D,
}

impl Family {
    pub fn min_rank(self) -> usize {
        match self {
            Family::A => 1,
            Family::B => 2,
            Family::D => 3,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::D => 'D',
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "D" | "d" => Ok(Family::D),
            other => Err(Error::UnsupportedFamily(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupType {
    pub family: Family,
    pub rank: usize,
}

impl GroupType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let min = family.min_rank();
        if rank < min {
            return Err(Error::InvalidRank { family, rank, min });
        }
        Ok(GroupType { family, rank })
    }

    /// Length of an ε-vector: `rank + 1` for A, `rank` otherwise.
    pub fn eps_dim(&self) -> usize {
        match self.family {
            Family::A => self.rank + 1,
            Family::B | Family::D => self.rank,
        }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// A weight in fundamental-weight coordinates. The group is carried by the
/// `RootSystem` it is used with.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    /// The fundamental weight with 1-based index `i`; index 0 gives zero.
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = Weight::zero(rank);
        if i > 0 {
            w.0[i - 1] = 1;
        }
        w
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Doubled ε-coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EpsVector(pub Vec<i64>);

impl EpsVector {
    pub fn twice_coords(&self) -> &[i64] {
        &self.0
    }

    pub fn add(&self, other: &EpsVector) -> EpsVector {
        EpsVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &EpsVector) -> EpsVector {
        EpsVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> EpsVector {
        EpsVector(self.0.iter().map(|a| a * k).collect())
    }

    fn dot(&self, other: &EpsVector) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    group: GroupType,
    simple_roots: Vec<EpsVector>,
    positive_roots: Vec<EpsVector>,
    fundamental_weights: Vec<EpsVector>,
    rho: EpsVector,
    /// `cartan[i][j] = ⟨α_j, α_i^∨⟩`; column `j` is `α_j` in fundamental coordinates.
    cartan: Vec<Vec<i64>>,
    /// Inverse Cartan matrix as `inv_num / inv_den`.
    inv_num: Vec<Vec<i64>>,
    inv_den: i64,
    positive_roots_fund: Vec<Weight>,
    positive_roots_coeffs: Vec<Vec<i64>>,
}

pub fn build_root_system(group: GroupType) -> Result<RootSystem> {
    RootSystem::new(group)
}

/// Shared, lazily built root system for `group`.
pub fn root_system(group: GroupType) -> Result<Arc<RootSystem>> {
    static SYSTEMS: OnceLock<Mutex<HashMap<GroupType, Arc<RootSystem>>>> = OnceLock::new();
    let map = SYSTEMS.get_or_init(Default::default);
    if let Some(rs) = map.lock().unwrap_or_else(|e| e.into_inner()).get(&group) {
        return Ok(rs.clone());
    }
    let rs = Arc::new(RootSystem::new(group)?);
    Ok(map
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .entry(group)
        .or_insert(rs)
        .clone())
}

impl RootSystem {
    pub fn new(group: GroupType) -> Result<Self> {
        let group = GroupType::new(group.family, group.rank)?;
        let n = group.rank;
        let d = group.eps_dim();
        let unit = |i: usize, s: i64| {
            let mut v = vec![0; d];
            v[i] = s;
            v
        };
        let pair = |i: usize, si: i64, j: usize, sj: i64| {
            let mut v = unit(i, si);
            v[j] += sj;
            EpsVector(v)
        };

        let mut simple_roots: Vec<EpsVector> = (0..n.min(d - 1))
            .map(|i| pair(i, 2, i + 1, -2))
            .collect();
        match group.family {
            Family::A => {}
            Family::B => {
                simple_roots.truncate(n - 1);
                simple_roots.push(EpsVector(unit(n - 1, 2)));
            }
            Family::D => {
                simple_roots.truncate(n - 1);
                simple_roots.push(pair(n - 2, 2, n - 1, 2));
            }
        }

        let mut positive_roots = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                positive_roots.push(pair(i, 2, j, -2));
                if group.family != Family::A {
                    positive_roots.push(pair(i, 2, j, 2));
                }
            }
            if group.family == Family::B {
                positive_roots.push(EpsVector(unit(i, 2)));
            }
        }

        let fundamental_weights: Vec<EpsVector> = (1..=n)
            .map(|i| {
                let mut v = vec![0; d];
                let half_spin = match group.family {
                    Family::A => None,
                    Family::B => (i == n).then_some(1),
                    Family::D => match i {
                        _ if i == n - 1 => Some(-1),
                        _ if i == n => Some(1),
                        _ => None,
                    },
                };
                match half_spin {
                    None => v[..i].iter_mut().for_each(|x| *x = 2),
                    Some(last) => {
                        v.iter_mut().for_each(|x| *x = 1);
                        v[n - 1] = last;
                    }
                }
                EpsVector(v)
            })
            .collect();

        let mut rho = EpsVector(vec![0; d]);
        for w in &fundamental_weights {
            rho = rho.add(w);
        }

        let mut rs = RootSystem {
            group,
            simple_roots,
            positive_roots,
            fundamental_weights,
            rho,
            cartan: Vec::new(),
            inv_num: Vec::new(),
            inv_den: 1,
            positive_roots_fund: Vec::new(),
            positive_roots_coeffs: Vec::new(),
        };

        let mut cartan = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                cartan[i][j] = rs.pairing(&rs.simple_roots[j], &rs.simple_roots[i])?;
            }
        }
        let (inv_num, inv_den) = integer_inverse(&cartan)?;
        rs.cartan = cartan;
        rs.inv_num = inv_num;
        rs.inv_den = inv_den;

        let mut fund = Vec::new();
        let mut coeffs = Vec::new();
        for alpha in &rs.positive_roots {
            let w = rs.from_eps(alpha)?;
            coeffs.push(rs.root_coefficients(&w)?);
            fund.push(w);
        }
        rs.positive_roots_fund = fund;
        rs.positive_roots_coeffs = coeffs;
        Ok(rs)
    }

    pub fn group(&self) -> GroupType {
        self.group
    }

    pub fn family(&self) -> Family {
        self.group.family
    }

    pub fn rank(&self) -> usize {
        self.group.rank
    }

    pub fn simple_roots(&self) -> &[EpsVector] {
        &self.simple_roots
    }

    pub fn positive_roots(&self) -> &[EpsVector] {
        &self.positive_roots
    }

    /// Positive roots in fundamental-weight coordinates, same order as `positive_roots`.
    pub fn positive_roots_fund(&self) -> &[Weight] {
        &self.positive_roots_fund
    }

    /// Simple-root coefficients of each positive root, same order as `positive_roots`.
    pub fn positive_root_coefficients(&self) -> &[Vec<i64>] {
        &self.positive_roots_coeffs
    }

    pub fn fundamental_weights(&self) -> &[EpsVector] {
        &self.fundamental_weights
    }

    pub fn rho(&self) -> &EpsVector {
        &self.rho
    }

    pub fn rho_weight(&self) -> Weight {
        Weight(vec![1; self.rank()])
    }

    /// `⟨α_j, α_i^∨⟩` at `[i][j]`.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Simple root `α_j` (0-based) in fundamental coordinates.
    pub fn simple_root_fund(&self, j: usize) -> Weight {
        Weight(self.cartan.iter().map(|row| row[j]).collect())
    }

    /// Exact `⟨v, α⟩ = 2(v, α)/(α, α)`.
    pub fn pairing(&self, v: &EpsVector, root: &EpsVector) -> Result<i64> {
        let rr = root.dot(root);
        if rr == 0 {
            return Err(Error::ZeroRoot);
        }
        let num = 2 * v.dot(root);
        if num % rr != 0 {
            return Err(Error::NotInLattice(v.0.clone()));
        }
        Ok(num / rr)
    }

    /// A positive multiple of the standard inner product, with the same
    /// multiple for every pair in this group. For A the vectors are projected
    /// onto the sum-zero hyperplane first.
    pub fn form(&self, x: &EpsVector, y: &EpsVector) -> i64 {
        match self.group.family {
            Family::A => {
                let d = self.group.eps_dim() as i64;
                let sx: i64 = x.0.iter().sum();
                let sy: i64 = y.0.iter().sum();
                d * x.dot(y) - sx * sy
            }
            _ => x.dot(y),
        }
    }

    /// Standard inner product of two doubled vectors, times 4. For type A
    /// the vectors are first projected onto the sum-zero hyperplane, and the
    /// value is returned as a rational.
    pub fn standard_form_times4(&self, x: &EpsVector, y: &EpsVector) -> Ratio<i64> {
        match self.group.family {
            Family::A => Ratio::new(self.form(x, y), self.group.eps_dim() as i64),
            _ => Ratio::from_integer(x.dot(y)),
        }
    }

    pub fn to_eps(&self, w: &Weight) -> Result<EpsVector> {
        self.check_rank(w)?;
        let mut v = vec![0i64; self.group.eps_dim()];
        for (c, fw) in w.0.iter().zip(&self.fundamental_weights) {
            for (x, y) in v.iter_mut().zip(&fw.0) {
                *x = c
                    .checked_mul(*y)
                    .and_then(|t| x.checked_add(t))
                    .ok_or(Error::Overflow("to_eps"))?;
            }
        }
        Ok(EpsVector(v))
    }

    pub fn from_eps(&self, v: &EpsVector) -> Result<Weight> {
        if v.0.len() != self.group.eps_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.group.eps_dim(),
                got: v.0.len(),
            });
        }
        let coords = self
            .simple_roots
            .iter()
            .map(|a| self.pairing(v, a))
            .collect::<Result<Vec<_>>>()?;
        let w = Weight(coords);
        let back = self.to_eps(&w)?;
        let diff = v.sub(&back);
        let ok = match self.group.family {
            Family::A => diff.0.windows(2).all(|p| p[0] == p[1]),
            _ => diff.0.iter().all(|&x| x == 0),
        };
        if !ok {
            return Err(Error::NotInLattice(v.0.clone()));
        }
        Ok(w)
    }

    /// Canonical ε-representative used for ordering and comparisons. For A the
    /// section already fixes the last coordinate of every `to_eps` image at 0.
    pub fn canonical_eps(&self, v: &EpsVector) -> EpsVector {
        match self.group.family {
            Family::A => {
                let last = *v.0.last().unwrap_or(&0);
                EpsVector(v.0.iter().map(|x| x - last).collect())
            }
            _ => v.clone(),
        }
    }

    /// Simple-root coefficients of a root-lattice element given in fundamental coordinates.
    pub fn root_coefficients(&self, w: &Weight) -> Result<Vec<i64>> {
        self.check_rank(w)?;
        let n = self.rank();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc: i128 = 0;
            for j in 0..n {
                acc += self.inv_num[i][j] as i128 * w.0[j] as i128;
            }
            if acc % self.inv_den as i128 != 0 {
                return Err(Error::NotInRootLattice(w.0.clone()));
            }
            out.push(
                i64::try_from(acc / self.inv_den as i128)
                    .map_err(|_| Error::Overflow("root_coefficients"))?,
            );
        }
        Ok(out)
    }

    /// Simple-root coefficients of an ε-vector in the root lattice.
    pub fn root_coefficients_eps(&self, v: &EpsVector) -> Result<Vec<i64>> {
        let w = self
            .from_eps(v)
            .map_err(|_| Error::NotInRootLattice(v.0.clone()))?;
        self.root_coefficients(&w)
            .map_err(|_| Error::NotInRootLattice(v.0.clone()))
    }

    /// Height-like rational `Σ_i c_i` with `c` the (possibly fractional)
    /// simple-root coefficients, scaled by the inverse-Cartan denominator.
    pub fn scaled_height(&self, w: &Weight) -> i64 {
        let n = self.rank();
        let mut acc = 0i64;
        for i in 0..n {
            for j in 0..n {
                acc += self.inv_num[i][j] * w.0[j];
            }
        }
        acc
    }

    pub fn check_rank(&self, w: &Weight) -> Result<()> {
        if w.0.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: w.0.len(),
            });
        }
        Ok(())
    }

    pub fn check_dominant(&self, w: &Weight) -> Result<()> {
        self.check_rank(w)?;
        if !w.is_dominant() {
            return Err(Error::NotDominant(w.clone()));
        }
        Ok(())
    }

    /// Simple reflection `s_j` (0-based) on fundamental coordinates.
    pub fn reflect_simple(&self, w: &Weight, j: usize) -> Weight {
        let c = w.0[j];
        if c == 0 {
            return w.clone();
        }
        Weight(
            w.0.iter()
                .zip(&self.cartan)
                .map(|(x, row)| x - c * row[j])
                .collect(),
        )
    }
}

/// Set of simple-root indices (0-based) with nonzero coefficient.
pub fn support(rs: &RootSystem, v: &EpsVector) -> Result<BTreeSet<usize>> {
    let c = rs.root_coefficients_eps(v)?;
    Ok(support_of_coefficients(&c))
}

/// Same as [`support`] for a difference given in fundamental coordinates.
pub fn support_weight(rs: &RootSystem, w: &Weight) -> Result<BTreeSet<usize>> {
    let c = rs.root_coefficients(w)?;
    Ok(support_of_coefficients(&c))
}

pub fn support_of_coefficients(c: &[i64]) -> BTreeSet<usize> {
    c.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, _)| i)
        .collect()
}

fn integer_inverse(m: &[Vec<i64>]) -> Result<(Vec<Vec<i64>>, i64)> {
    let n = m.len();
    let mut a: Vec<Vec<Ratio<i64>>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Ratio<i64>> = row.iter().map(|&x| Ratio::from_integer(x)).collect();
            r.extend((0..n).map(|j| Ratio::from_integer((i == j) as i64)));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| a[r][col] != Ratio::from_integer(0))
            .ok_or_else(|| Error::Internal("singular Cartan matrix".into()))?;
        a.swap(col, piv);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != Ratio::from_integer(0) {
                    for k in 0..2 * n {
                        let t = a[col][k] * f;
                        a[r][k] -= t;
                    }
                }
            }
        }
    }
    let mut den = 1i64;
    for row in &a {
        for x in &row[n..] {
            den = lcm(den, *x.denom());
        }
    }
    let num = a
        .iter()
        .map(|row| row[n..].iter().map(|x| (x * den).to_integer()).collect())
        .collect();
    Ok((num, den))
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(f: Family, n: usize) -> RootSystem {
        RootSystem::new(GroupType::new(f, n).unwrap()).unwrap()
    }

    #[test]
    fn b2_positive_roots_and_rho() {
        let r = rs(Family::B, 2);
        let mut got: Vec<Vec<i64>> = r.positive_roots().iter().map(|v| v.0.clone()).collect();
        got.sort();
        let mut want = vec![vec![2, -2], vec![0, 2], vec![2, 2], vec![2, 0]];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(r.rho().0, vec![3, 1]);
    }

    #[test]
    fn d3_rho() {
        let r = rs(Family::D, 3);
        assert_eq!(r.positive_roots().len(), 6);
        assert_eq!(r.rho().0, vec![4, 2, 0]);
    }

    #[test]
    fn a2_fundamental_weights_project_correctly() {
        // Projection of λ_i onto the sum-zero plane, times 3, doubled.
        let r = rs(Family::A, 2);
        let proj = |v: &EpsVector| -> Vec<i64> {
            let s: i64 = v.0.iter().sum();
            v.0.iter().map(|x| 3 * x - s).collect()
        };
        assert_eq!(proj(&r.fundamental_weights()[0]), vec![4, -2, -2]);
        assert_eq!(proj(&r.fundamental_weights()[1]), vec![2, 2, -4]);
    }

    #[test]
    fn pairings_b2() {
        let r = rs(Family::B, 2);
        let l = r.to_eps(&Weight(vec![2, 0])).unwrap().add(r.rho());
        assert_eq!(l.0, vec![7, 1]);
        assert_eq!(r.pairing(&l, &EpsVector(vec![2, 0])).unwrap(), 7);
        assert_eq!(r.pairing(r.rho(), &EpsVector(vec![2, 2])).unwrap(), 2);
        assert_eq!(r.pairing(r.rho(), &EpsVector(vec![0, 0])), Err(Error::ZeroRoot));
    }

    #[test]
    fn supports() {
        let r = rs(Family::B, 2);
        assert_eq!(
            support(&r, &EpsVector(vec![2, 0])).unwrap(),
            BTreeSet::from([0, 1])
        );
        for (j, a) in r.simple_roots().iter().enumerate() {
            assert_eq!(support(&r, a).unwrap(), BTreeSet::from([j]));
        }
        let r4 = rs(Family::B, 4);
        let lam = Weight(vec![2, 0, 0, 0]);
        let mu = lam.sub(&r4.simple_root_fund(0));
        assert_eq!(
            support_weight(&r4, &lam.sub(&mu)).unwrap(),
            BTreeSet::from([0])
        );
        assert!(matches!(
            support(&r, &EpsVector(vec![1, 1])),
            Err(Error::NotInRootLattice(_))
        ));
    }

    #[test]
    fn spin_weights() {
        assert_eq!(rs(Family::B, 2).fundamental_weights()[1].0, vec![1, 1]);
        assert_eq!(rs(Family::D, 3).fundamental_weights()[2].0, vec![1, 1, 1]);
    }

    #[test]
    fn from_eps_rejects_non_lattice() {
        let r = rs(Family::B, 3);
        assert!(r.from_eps(&EpsVector(vec![1, 0, 0])).is_err());
        let a = rs(Family::A, 2);
        assert!(a.from_eps(&EpsVector(vec![1, 0, 0])).is_err());
        // Shifts by the all-ones vector are the same weight.
        assert_eq!(
            a.from_eps(&EpsVector(vec![3, 1, 1])).unwrap(),
            Weight(vec![1, 0])
        );
    }

    #[test]
    fn rejects_small_rank() {
        assert!(GroupType::new(Family::B, 1).is_err());
        assert!(GroupType::new(Family::D, 2).is_err());
        assert!(GroupType::new(Family::A, 0).is_err());
        assert_eq!(
            "C".parse::<Family>(),
            Err(Error::UnsupportedFamily("C".into()))
        );
    }

    #[test]
    fn inverse_cartan_denominators() {
        for n in 1..=7 {
            assert_eq!(rs(Family::A, n).inv_den, n as i64 + 1);
        }
        for n in 2..=7 {
            assert_eq!(rs(Family::B, n).inv_den, 2);
        }
        for n in 3..=7 {
            let want = if n % 2 == 0 { 2 } else { 4 };
            assert_eq!(rs(Family::D, n).inv_den, want);
        }
    }
}
