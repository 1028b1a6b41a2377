//! Formal characters, Weyl characters by Freudenthal's recursion, Weyl's
//! degree formula, products and the χ-basis.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdata::{EpsVector, GroupType, RootSystem, Weight};
use crate::weylact::{dominant_weight, dot_dominant, DotConjugation};

/// Dominant weights of `V(λ)` with their multiplicities.
pub type DominantMultiplicities = BTreeMap<Weight, i64>;

/// Sparse element of `Z[X(T)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalCharacter {
    group: GroupType,
    terms: HashMap<Weight, i64>,
}

impl FormalCharacter {
    pub fn zero(group: GroupType) -> Self {
        FormalCharacter {
            group,
            terms: HashMap::new(),
        }
    }

    /// The character `e^0` of the trivial module.
    pub fn trivial(group: GroupType) -> Self {
        let mut ch = Self::zero(group);
        ch.terms.insert(Weight::zero(group.rank), 1);
        ch
    }

    pub fn from_terms(group: GroupType, terms: impl IntoIterator<Item = (Weight, i64)>) -> Result<Self> {
        let mut ch = Self::zero(group);
        for (w, m) in terms {
            ch.add_term(w, m)?;
        }
        Ok(ch)
    }

    pub fn group(&self) -> GroupType {
        self.group
    }

    pub fn add_term(&mut self, w: Weight, m: i64) -> Result<()> {
        if w.rank() != self.group.rank {
            return Err(Error::DimensionMismatch {
                expected: self.group.rank,
                got: w.rank(),
            });
        }
        if m == 0 {
            return Ok(());
        }
        match self.terms.entry(w) {
            Entry::Occupied(mut o) => {
                let v = o
                    .get()
                    .checked_add(m)
                    .ok_or(Error::Overflow("character addition"))?;
                if v == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(v) => {
                v.insert(m);
            }
        }
        Ok(())
    }

    /// `self += k · other`.
    pub fn add_scaled(&mut self, other: &FormalCharacter, k: i64) -> Result<()> {
        for (w, m) in &other.terms {
            let t = m.checked_mul(k).ok_or(Error::Overflow("character scaling"))?;
            let e = self.terms.entry(w.clone()).or_insert(0);
            *e = e.checked_add(t).ok_or(Error::Overflow("character addition"))?;
        }
        self.terms.retain(|_, v| *v != 0);
        Ok(())
    }

    pub fn scaled(&self, k: i64) -> Result<FormalCharacter> {
        let mut out = Self::zero(self.group);
        out.add_scaled(self, k)?;
        Ok(out)
    }

    pub fn multiplicity(&self, w: &Weight) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, &i64)> {
        self.terms.iter()
    }

    pub fn sorted_terms(&self) -> Vec<(Weight, i64)> {
        let mut v: Vec<(Weight, i64)> = self.terms.iter().map(|(w, m)| (w.clone(), *m)).collect();
        v.sort();
        v
    }

    pub fn dominant_part(&self) -> DominantMultiplicities {
        self.terms
            .iter()
            .filter(|(w, _)| w.is_dominant())
            .map(|(w, m)| (w.clone(), *m))
            .collect()
    }

    /// Sum of all multiplicities.
    pub fn dimension(&self) -> Result<i64> {
        dimension(self)
    }
}

pub fn dimension(ch: &FormalCharacter) -> Result<i64> {
    ch.terms
        .values()
        .try_fold(0i64, |acc, m| acc.checked_add(*m))
        .ok_or(Error::Overflow("dimension"))
}

/// Weyl's degree formula `∏ ⟨λ+ρ,α⟩/⟨ρ,α⟩` over positive roots.
pub fn weyl_dim(rs: &RootSystem, lambda: &Weight) -> Result<i64> {
    rs.check_dominant(lambda)?;
    let shifted = rs.to_eps(lambda)?.add(rs.rho());
    let (mut num, mut den) = (1u128, 1u128);
    for alpha in rs.positive_roots() {
        let a = rs.pairing(&shifted, alpha)? as u128;
        let b = rs.pairing(rs.rho(), alpha)? as u128;
        num = num.checked_mul(a).ok_or(Error::Overflow("weyl_dim"))?;
        den *= b;
        let g = gcd_u128(num, den);
        num /= g;
        den /= g;
    }
    if den != 1 {
        return Err(Error::Internal("degree formula is not integral".into()));
    }
    i64::try_from(num).map_err(|_| Error::Overflow("weyl_dim"))
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Dominant multiplicities of `V(λ)`, computed once per `(group, λ)`.
pub fn dominant_multiplicities(rs: &RootSystem, lambda: &Weight) -> Result<Arc<DominantMultiplicities>> {
    rs.check_dominant(lambda)?;
    cache().get_or_compute(rs, lambda)
}

pub fn weyl_character(rs: &RootSystem, lambda: &Weight) -> Result<FormalCharacter> {
    let dom = dominant_multiplicities(rs, lambda)?;
    expand_dominant(rs, &dom)
}

/// Expands a W-invariant character given by its dominant part.
pub fn expand_dominant(rs: &RootSystem, dom: &DominantMultiplicities) -> Result<FormalCharacter> {
    let mut ch = FormalCharacter::zero(rs.group());
    for (mu, m) in dom {
        for w in crate::weylact::orbit(rs, mu) {
            ch.terms.insert(w, *m);
        }
    }
    ch.terms.retain(|_, v| *v != 0);
    Ok(ch)
}

/// `χ(λ)` for arbitrary `λ`: zero on singular weights, `det(w)·ch V(w·λ)` otherwise.
pub fn chi(rs: &RootSystem, lambda: &Weight) -> Result<FormalCharacter> {
    rs.check_rank(lambda)?;
    match dot_dominant(rs, lambda)? {
        DotConjugation::Singular => Ok(FormalCharacter::zero(rs.group())),
        DotConjugation::Regular { dominant, det } => weyl_character(rs, &dominant)?.scaled(det),
    }
}

pub fn tensor(a: &FormalCharacter, b: &FormalCharacter) -> Result<FormalCharacter> {
    if a.group != b.group {
        return Err(Error::InvalidWeight("characters of different groups".into()));
    }
    let mut out: HashMap<Weight, i64> = HashMap::with_capacity(a.len() * b.len() / 2 + 1);
    for (x, m) in &a.terms {
        for (y, n) in &b.terms {
            let t = m.checked_mul(*n).ok_or(Error::Overflow("tensor"))?;
            let e = out.entry(x.add(y)).or_insert(0);
            *e = e.checked_add(t).ok_or(Error::Overflow("tensor"))?;
        }
    }
    out.retain(|_, v| *v != 0);
    Ok(FormalCharacter {
        group: a.group,
        terms: out,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    Chi,
    Irreducible,
}

/// A character written in the χ-basis or the basis of irreducible characters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiDecomposition {
    pub basis: Basis,
    pub terms: Vec<(Weight, i64)>,
}

impl ChiDecomposition {
    pub fn coefficient(&self, w: &Weight) -> i64 {
        self.terms
            .iter()
            .find(|(x, _)| x == w)
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }

    pub fn as_map(&self) -> BTreeMap<Weight, i64> {
        self.terms.iter().cloned().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

fn ensure_invariant(rs: &RootSystem, ch: &FormalCharacter) -> Result<()> {
    for (w, m) in &ch.terms {
        for j in 0..rs.rank() {
            if w.0[j] != 0 && ch.multiplicity(&rs.reflect_simple(w, j)) != *m {
                return Err(Error::NotInvariant);
            }
        }
    }
    Ok(())
}

/// Peels `ch` into `Σ c_ν χ(ν)`, always removing the lexicographically
/// largest ε-vector first. That weight is maximal for `≼`.
pub fn decompose_into_chi(rs: &RootSystem, ch: &FormalCharacter) -> Result<ChiDecomposition> {
    ensure_invariant(rs, ch)?;
    let terms = peel(rs, ch.dominant_part(), |w| dominant_multiplicities(rs, w))?;
    Ok(ChiDecomposition {
        basis: Basis::Chi,
        terms,
    })
}

/// Greedy peeling of a dominant part against a family of characters whose
/// highest weight has multiplicity one.
pub(crate) fn peel<F>(rs: &RootSystem, dom: DominantMultiplicities, basis: F) -> Result<Vec<(Weight, i64)>>
where
    F: Fn(&Weight) -> Result<Arc<DominantMultiplicities>>,
{
    let key = |w: &Weight| -> Result<EpsVector> { Ok(rs.canonical_eps(&rs.to_eps(w)?)) };
    let mut rem: BTreeMap<EpsVector, (Weight, i64)> = BTreeMap::new();
    for (w, m) in dom {
        if m != 0 {
            rem.insert(key(&w)?, (w, m));
        }
    }
    let mut out = Vec::new();
    while let Some((_, (w, c))) = rem.pop_last() {
        let b = basis(&w)?;
        if b.get(&w) != Some(&1) {
            return Err(Error::Internal(format!("basis element {w} lacks its highest weight")));
        }
        for (mu, m) in b.iter() {
            if mu == &w {
                continue;
            }
            let t = c.checked_mul(*m).ok_or(Error::Overflow("decomposition"))?;
            let k = key(mu)?;
            let e = rem.entry(k.clone()).or_insert((mu.clone(), 0));
            e.1 = e.1.checked_sub(t).ok_or(Error::Overflow("decomposition"))?;
            if e.1 == 0 {
                rem.remove(&k);
            }
        }
        out.push((w, c));
    }
    Ok(out)
}

/// `Σ c_ν χ(ν)` as a formal character.
pub fn expand_chi(rs: &RootSystem, d: &ChiDecomposition) -> Result<FormalCharacter> {
    if d.basis != Basis::Chi {
        return Err(Error::InvalidWeight("expected a χ-basis decomposition".into()));
    }
    let mut ch = FormalCharacter::zero(rs.group());
    for (w, c) in &d.terms {
        ch.add_scaled(&weyl_character(rs, w)?, *c)?;
    }
    Ok(ch)
}

/// Multiplicity of `μ` in the Weyl character of the Levi subgroup generated
/// by the simple roots in `j_set` (0-based), with highest weight `λ`.
///
/// Runs Freudenthal's formula over every weight of the Levi module rather
/// than over dominant weights, so it shares no code path with
/// [`weyl_character`]; with `j_set` the full index set it is an independent
/// check on the ambient multiplicities.
pub fn levi_multiplicity(rs: &RootSystem, lambda: &Weight, mu: &Weight, j_set: &BTreeSet<usize>) -> Result<i64> {
    rs.check_dominant(lambda)?;
    rs.check_rank(mu)?;
    let n = rs.rank();
    if j_set.iter().any(|&j| j >= n) {
        return Err(Error::InvalidWeight("Levi index out of range".into()));
    }
    let diff = rs.root_coefficients(&lambda.sub(mu))?;
    for (i, &c) in diff.iter().enumerate() {
        if c < 0 || (c != 0 && !j_set.contains(&i)) {
            return Err(Error::InvalidWeight(format!(
                "λ − μ is not a nonnegative combination of the Levi simple roots {j_set:?}"
            )));
        }
    }
    if mu == lambda {
        return Ok(1);
    }

    let roots: Vec<(Weight, EpsVector)> = rs
        .positive_roots()
        .iter()
        .zip(rs.positive_roots_fund())
        .zip(rs.positive_root_coefficients())
        .filter(|(_, c)| c.iter().enumerate().all(|(i, &x)| x == 0 || j_set.contains(&i)))
        .map(|((e, f), _)| (f.clone(), e.clone()))
        .collect();
    let two_rho_j = roots
        .iter()
        .fold(EpsVector(vec![0; rs.group().eps_dim()]), |acc, (_, e)| acc.add(e));

    let is_weight = |x: &Weight| -> bool {
        let mut y = x.clone();
        loop {
            match j_set.iter().find(|&&j| y.0[j] < 0) {
                Some(&j) => y = rs.reflect_simple(&y, j),
                None => break,
            }
        }
        match rs.root_coefficients(&lambda.sub(&y)) {
            Ok(c) => c.iter().all(|&v| v >= 0),
            Err(_) => false,
        }
    };

    let mut depth: HashMap<Weight, i64> = HashMap::from([(lambda.clone(), 0)]);
    let mut queue = VecDeque::from([lambda.clone()]);
    while let Some(x) = queue.pop_front() {
        let dx = depth[&x];
        for &j in j_set {
            let y = x.sub(&rs.simple_root_fund(j));
            if !depth.contains_key(&y) && is_weight(&y) {
                depth.insert(y.clone(), dx + 1);
                queue.push_back(y);
            }
        }
    }
    if !depth.contains_key(mu) {
        return Ok(0);
    }
    let mut order: Vec<(i64, Weight)> = depth.into_iter().map(|(w, d)| (d, w)).collect();
    order.sort();

    let doubled = |x: &Weight| -> Result<EpsVector> { Ok(rs.to_eps(x)?.scale(2).add(&two_rho_j)) };
    let top = doubled(lambda)?;
    let top_norm = rs.form(&top, &top) as i128;
    let mut mult: HashMap<Weight, i64> = HashMap::new();
    for (_, x) in order {
        if &x == lambda {
            mult.insert(x, 1);
            continue;
        }
        let mut num: i128 = 0;
        for (af, ae) in &roots {
            let mut y = x.add(af);
            while let Some(&m) = mult.get(&y) {
                num += m as i128 * rs.form(&rs.to_eps(&y)?, ae) as i128;
                y = y.add(af);
            }
        }
        let xs = doubled(&x)?;
        let den = top_norm - rs.form(&xs, &xs) as i128;
        let lhs = 8 * num;
        if den == 0 || lhs % den != 0 {
            return Err(Error::Internal("Levi recursion is not integral".into()));
        }
        let m = i64::try_from(lhs / den).map_err(|_| Error::Overflow("levi_multiplicity"))?;
        if &x == mu {
            return Ok(m);
        }
        mult.insert(x, m);
    }
    Err(Error::Internal("Levi weight not reached".into()))
}

/// Freudenthal's recursion restricted to dominant weights.
fn freudenthal_dominant(rs: &RootSystem, lambda: &Weight) -> Result<DominantMultiplicities> {
    let roots: Vec<(&Weight, &EpsVector, i64)> = rs
        .positive_roots_fund()
        .iter()
        .zip(rs.positive_roots())
        .zip(rs.positive_root_coefficients())
        .map(|((f, e), c)| (f, e, c.iter().sum()))
        .collect();

    // Dominant weights below λ are reachable from λ through dominant weights
    // by subtracting positive roots.
    let mut depth: HashMap<Weight, i64> = HashMap::from([(lambda.clone(), 0)]);
    let mut stack = vec![lambda.clone()];
    while let Some(x) = stack.pop() {
        let dx = depth[&x];
        for (af, _, ht) in &roots {
            let y = x.sub(af);
            if y.is_dominant() && !depth.contains_key(&y) {
                depth.insert(y.clone(), dx + ht);
                stack.push(y);
            }
        }
    }
    let mut order: Vec<(i64, Weight)> = depth.into_iter().map(|(w, d)| (d, w)).collect();
    order.sort();

    let top = rs.to_eps(lambda)?.add(rs.rho());
    let top_norm = rs.form(&top, &top) as i128;
    let mut mult: DominantMultiplicities = BTreeMap::new();
    for (_, x) in order {
        if &x == lambda {
            mult.insert(x, 1);
            continue;
        }
        let xe = rs.to_eps(&x)?;
        let mut num: i128 = 0;
        for (af, ae, _) in &roots {
            let mut y = x.add(af);
            let mut ye = xe.add(ae);
            while let Some(&m) = mult.get(&dominant_weight(rs, &y)) {
                let t = (m as i128)
                    .checked_mul(rs.form(&ye, ae) as i128)
                    .ok_or(Error::Overflow("freudenthal"))?;
                num = num.checked_add(t).ok_or(Error::Overflow("freudenthal"))?;
                y = y.add(af);
                ye = ye.add(ae);
            }
        }
        let xs = xe.add(rs.rho());
        let den = top_norm - rs.form(&xs, &xs) as i128;
        let lhs = 2 * num;
        if den <= 0 || lhs % den != 0 {
            return Err(Error::Internal(format!("Freudenthal step at {x} is not integral")));
        }
        let m = i64::try_from(lhs / den).map_err(|_| Error::Overflow("freudenthal"))?;
        mult.insert(x, m);
    }
    Ok(mult)
}

/// Optional persistent backing for the character cache.
pub trait CharacterStore: Send + Sync {
    fn load(&self, group: GroupType, lambda: &Weight) -> Option<DominantMultiplicities>;
    fn store(&self, group: GroupType, lambda: &Weight, mults: &DominantMultiplicities);
}

type Slot = Arc<Mutex<Option<Arc<DominantMultiplicities>>>>;

struct CharacterCache {
    slots: Mutex<HashMap<(GroupType, Weight), Slot>>,
    store: RwLock<Option<Arc<dyn CharacterStore>>>,
}

fn cache() -> &'static CharacterCache {
    static CACHE: OnceLock<CharacterCache> = OnceLock::new();
    CACHE.get_or_init(|| CharacterCache {
        slots: Mutex::new(HashMap::new()),
        store: RwLock::new(None),
    })
}

impl CharacterCache {
    fn get_or_compute(&self, rs: &RootSystem, lambda: &Weight) -> Result<Arc<DominantMultiplicities>> {
        let key = (rs.group(), lambda.clone());
        let slot = self
            .slots
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .entry(key)
            .or_default()
            .clone();
        // One writer per key: later callers block here until the value exists.
        let mut guard = slot.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(v) = guard.as_ref() {
            return Ok(v.clone());
        }
        let store = self.store.read().unwrap_or_else(|e| e.into_inner()).clone();
        let loaded = store
            .as_ref()
            .and_then(|s| s.load(rs.group(), lambda))
            .filter(|m| m.get(lambda) == Some(&1));
        let value = match loaded {
            Some(m) => m,
            None => {
                let m = freudenthal_dominant(rs, lambda)?;
                if let Some(s) = &store {
                    s.store(rs.group(), lambda, &m);
                }
                m
            }
        };
        let value = Arc::new(value);
        *guard = Some(value.clone());
        Ok(value)
    }
}

/// Installs (or removes) the persistent store consulted on cache misses.
pub fn set_character_store(store: Option<Arc<dyn CharacterStore>>) {
    *cache().store.write().unwrap_or_else(|e| e.into_inner()) = store;
}

/// Drops every in-memory character.
pub fn clear_character_cache() {
    cache().slots.lock().unwrap_or_else(|e| e.into_inner()).clear();
}

/// Runs the recursion without touching the cache.
pub fn dominant_multiplicities_uncached(rs: &RootSystem, lambda: &Weight) -> Result<DominantMultiplicities> {
    rs.check_dominant(lambda)?;
    freudenthal_dominant(rs, lambda)
}
