//! Freiman homomorphisms and isomorphisms on integer sets, and minimal
//! diameter compression of convolution supports.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse_seq::{SparseSequence, SupportSet};

/// Largest |I ∪ J| accepted by [`compress_support`].
pub const MAX_COMPRESS_SET: usize = 12;

const SEARCH_NODE_BUDGET: u64 = 200_000_000;

/// Injective index map φ on a set A that preserves pairwise-sum equalities
/// both ways on (A, A). The image is translated so its minimum is 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreimanMap {
    domain: SupportSet,
    image: Vec<i64>,
}

/// Outcome of the minimal-diameter compression search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressionResult {
    pub map: FreimanMap,
    pub diameter: i64,
    pub bound_n: u128,
    pub within_bound: bool,
}

#[derive(Serialize, Deserialize)]
struct CompressionJson {
    image: Vec<i64>,
    diameter: i64,
    bound_n: u128,
    within_bound: bool,
}

impl FreimanMap {
    /// Validates injectivity and the isomorphism property on (A, A), then
    /// canonicalizes the translation so min(image) = 0.
    pub fn new(domain: SupportSet, image: Vec<i64>) -> Result<Self> {
        if image.len() != domain.len() {
            return Err(Error::LengthMismatch {
                expected: domain.len(),
                got: image.len(),
            });
        }
        let mut sorted = image.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != image.len() {
            return Err(Error::InvalidInput("image has duplicates".into()));
        }
        let min = image.iter().copied().min().unwrap_or(0);
        let image: Vec<i64> = image.iter().map(|&v| v - min).collect();
        let map = Self { domain, image };
        let phi = map.as_table();
        if !is_freiman_isomorphism(&map.domain, &map.domain, &phi)? {
            return Err(Error::InvalidInput(
                "map is not a Freiman isomorphism on its domain".into(),
            ));
        }
        Ok(map)
    }

    pub fn domain(&self) -> &SupportSet {
        &self.domain
    }

    /// Image values aligned with the sorted domain.
    pub fn image(&self) -> &[i64] {
        &self.image
    }

    pub fn diameter(&self) -> i64 {
        let max = self.image.iter().copied().max().unwrap_or(0);
        let min = self.image.iter().copied().min().unwrap_or(0);
        max - min
    }

    pub fn apply(&self, x: i64) -> Result<i64> {
        self.domain
            .elements()
            .binary_search(&x)
            .map(|pos| self.image[pos])
            .map_err(|_| Error::InvalidInput(format!("{x} is not in the map domain")))
    }

    pub fn as_table(&self) -> BTreeMap<i64, i64> {
        self.domain
            .elements()
            .iter()
            .copied()
            .zip(self.image.iter().copied())
            .collect()
    }
}

fn lookup(phi: &BTreeMap<i64, i64>, x: i64) -> Result<i64> {
    phi.get(&x)
        .copied()
        .ok_or_else(|| Error::InvalidInput(format!("map is undefined at {x}")))
}

/// Forward sum-preservation check: i+j = i'+j' ⇒ φ(i)+φ(j) = φ(i')+φ(j')
/// for all i,i' ∈ A1, j,j' ∈ A2, exhaustively over quadruples.
pub fn is_freiman_homomorphism(
    a1: &SupportSet,
    a2: &SupportSet,
    phi: &BTreeMap<i64, i64>,
) -> Result<bool> {
    check_quadruples(a1, a2, phi, false)
}

/// Two-way check: i+j = i'+j' ⇔ φ(i)+φ(j) = φ(i')+φ(j').
pub fn is_freiman_isomorphism(
    a1: &SupportSet,
    a2: &SupportSet,
    phi: &BTreeMap<i64, i64>,
) -> Result<bool> {
    check_quadruples(a1, a2, phi, true)
}

fn check_quadruples(
    a1: &SupportSet,
    a2: &SupportSet,
    phi: &BTreeMap<i64, i64>,
    both_ways: bool,
) -> Result<bool> {
    for &i in a1.elements() {
        lookup(phi, i)?;
    }
    for &j in a2.elements() {
        lookup(phi, j)?;
    }
    for &i in a1.elements() {
        for &ip in a1.elements() {
            for &j in a2.elements() {
                for &jp in a2.elements() {
                    let dom_eq = i + j == ip + jp;
                    let img_eq = lookup(phi, i)? + lookup(phi, j)?
                        == lookup(phi, ip)? + lookup(phi, jp)?;
                    if dom_eq && !img_eq {
                        return Ok(false);
                    }
                    if both_ways && img_eq && !dom_eq {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Ambient dimension bound n(s,f) = (s+f−2)^{2(s+f−2)} + 1.
///
/// Since 2^{2m·log₂ m} = m^{2m} for integer m, the floor in the bound is
/// exact and the value is computed in integer arithmetic.
pub fn dimension_bound(s: usize, f: usize) -> Result<u128> {
    if s < 2 || f < 2 {
        return Err(Error::InvalidInput(
            "dimension bound requires s, f >= 2".into(),
        ));
    }
    let m = (s + f - 2) as u128;
    let mut pow: u128 = 1;
    for _ in 0..2 * (s + f - 2) {
        pow = pow.checked_mul(m).ok_or_else(|| {
            Error::BudgetExceeded(format!("dimension bound for s={s}, f={f} overflows u128"))
        })?;
    }
    pow.checked_add(1).ok_or_else(|| {
        Error::BudgetExceeded(format!("dimension bound for s={s}, f={f} overflows u128"))
    })
}

/// Incremental bidirectional table pairing domain pair-sums with image
/// pair-sums. A partial assignment is extendable to a Freiman isomorphism
/// iff this pairing stays a bijection.
struct SumPairing {
    dom_to_img: HashMap<i64, i64>,
    img_to_dom: HashMap<i64, i64>,
}

impl SumPairing {
    fn new() -> Self {
        Self {
            dom_to_img: HashMap::new(),
            img_to_dom: HashMap::new(),
        }
    }

    /// Registers the pair (domain sum, image sum); returns the keys
    /// inserted (for rollback), or None on conflict.
    fn insert(&mut self, dsum: i64, isum: i64) -> Option<bool> {
        match (self.dom_to_img.get(&dsum), self.img_to_dom.get(&isum)) {
            (Some(&i), Some(&d)) if i == isum && d == dsum => Some(false),
            (None, None) => {
                self.dom_to_img.insert(dsum, isum);
                self.img_to_dom.insert(isum, dsum);
                Some(true)
            }
            _ => None,
        }
    }

    fn remove(&mut self, dsum: i64, isum: i64) {
        self.dom_to_img.remove(&dsum);
        self.img_to_dom.remove(&isum);
    }
}

struct CompressSearch<'a> {
    domain: &'a [i64],
    diameter: i64,
    assignment: Vec<i64>,
    used: Vec<bool>,
    pairing: SumPairing,
    nodes: u64,
}

impl<'a> CompressSearch<'a> {
    /// Depth-first search in ascending value order; the first complete
    /// assignment found is the lexicographically smallest image list for
    /// this diameter.
    fn run(&mut self, depth: usize) -> Result<Option<Vec<i64>>> {
        if depth == self.domain.len() {
            let has_zero = self.assignment.contains(&0);
            let has_max = self.assignment.contains(&self.diameter);
            if has_zero && has_max {
                return Ok(Some(self.assignment.clone()));
            }
            return Ok(None);
        }
        for v in 0..=self.diameter {
            if self.used[v as usize] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > SEARCH_NODE_BUDGET {
                return Err(Error::BudgetExceeded(format!(
                    "compression search exceeded {SEARCH_NODE_BUDGET} nodes"
                )));
            }
            let mut inserted: Vec<(i64, i64)> = Vec::with_capacity(depth + 1);
            let mut ok = true;
            for t in 0..=depth {
                let dsum = self.domain[t] + self.domain[depth];
                let phi_t = if t == depth { v } else { self.assignment[t] };
                let isum = phi_t + v;
                match self.pairing.insert(dsum, isum) {
                    Some(true) => inserted.push((dsum, isum)),
                    Some(false) => {}
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                self.assignment.push(v);
                self.used[v as usize] = true;
                if let Some(found) = self.run(depth + 1)? {
                    return Ok(Some(found));
                }
                self.used[v as usize] = false;
                self.assignment.pop();
            }
            for (dsum, isum) in inserted {
                self.pairing.remove(dsum, isum);
            }
        }
        Ok(None)
    }
}

/// Compresses the union A = I ∪ J into the shortest possible integer
/// interval by exact minimal-diameter search over Freiman isomorphisms
/// on (A, A). Ties are broken by the lexicographically smallest image.
///
/// Requires 0 ∈ I and 0 ∈ J (apply shift canonicalization first) and
/// |A| ≤ [`MAX_COMPRESS_SET`].
pub fn compress_support(i_set: &SupportSet, j_set: &SupportSet) -> Result<CompressionResult> {
    if !i_set.contains(0) || !j_set.contains(0) {
        return Err(Error::InvalidInput(
            "supports must contain 0; canonicalize shifts first".into(),
        ));
    }
    let a = i_set.union(j_set)?;
    let m = a.len();
    if m > MAX_COMPRESS_SET {
        return Err(Error::BudgetExceeded(format!(
            "|I ∪ J| = {m} exceeds the compression budget of {MAX_COMPRESS_SET}"
        )));
    }
    let (image, diameter) = if m <= 1 {
        (vec![0i64; m], 0i64)
    } else {
        let mut diameter = m as i64 - 1;
        loop {
            let mut search = CompressSearch {
                domain: a.elements(),
                diameter,
                assignment: Vec::with_capacity(m),
                used: vec![false; diameter as usize + 1],
                pairing: SumPairing::new(),
                nodes: 0,
            };
            if let Some(found) = search.run(0)? {
                break (found, diameter);
            }
            diameter += 1;
            // The identity map is always a valid fallback at diam(A).
            debug_assert!(diameter <= a.diameter());
        }
    };
    let map = FreimanMap::new(a, image)?;
    let s = i_set.len().max(2);
    let f = j_set.len().max(2);
    let bound_n = dimension_bound(s, f)?;
    let within_bound = (diameter as u128) < bound_n;
    Ok(CompressionResult {
        map,
        diameter,
        bound_n,
        within_bound,
    })
}

impl CompressionResult {
    pub fn to_json(&self) -> String {
        let repr = CompressionJson {
            image: self.map.image().to_vec(),
            diameter: self.diameter,
            bound_n: self.bound_n,
            within_bound: self.within_bound,
        };
        serde_json::to_string(&repr).expect("compression serialization cannot fail")
    }
}

/// Embeds x and y as dense vectors of length diameter+1, placing each value
/// at its mapped index. Norms are preserved exactly.
pub fn embed(
    x: &SparseSequence,
    y: &SparseSequence,
    map: &FreimanMap,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let len = map.diameter() as usize + 1;
    let xpos = x
        .support()
        .iter()
        .map(|&i| map.apply(i))
        .collect::<Result<Vec<_>>>()?;
    let ypos = y
        .support()
        .iter()
        .map(|&j| map.apply(j))
        .collect::<Result<Vec<_>>>()?;
    Ok((x.embed_dense(&xpos, len)?, y.embed_dense(&ypos, len)?))
}
