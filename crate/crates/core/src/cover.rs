//! Blocks, covers and their GF(2) footprints.
//!
//! A *block* is a complete r-partite r-graph, given by r pairwise disjoint
//! nonempty vertex classes; its edges are the r-sets with exactly one vertex in
//! every class. A *cover* is a multiset of blocks on the ground set `0..n`.
//! It is an odd cover when every r-set lies in an odd number of its blocks,
//! i.e. when the XOR of the block footprints is the all-ones vector.
//!
//! Footprints are indexed by r-sets in colexicographic order, so the index of
//! `{s_0 < s_1 < ... < s_{r-1}}` is `sum_i C(s_i, i + 1)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub type Vertex = usize;

/// `C(n, k)`, saturating at `usize::MAX`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Colex rank of a strictly increasing sequence.
pub fn colex_rank(elements: &[Vertex]) -> usize {
    elements
        .iter()
        .enumerate()
        .map(|(i, &v)| binomial(v, i + 1))
        .sum()
}

/// Inverse of [`colex_rank`] for r-sets.
pub fn colex_unrank(mut rank: usize, r: usize) -> Vec<Vertex> {
    let mut out = vec![0; r];
    for i in (0..r).rev() {
        // largest v with C(v, i + 1) <= rank
        let mut v = i;
        while binomial(v + 1, i + 1) <= rank {
            v += 1;
        }
        out[i] = v;
        rank -= binomial(v, i + 1);
    }
    out
}

/// An r-subset of the ground set, stored in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct RSet(Vec<Vertex>);

impl RSet {
    /// Sorts `elements` and checks they are distinct and below `n`.
    pub fn new(mut elements: Vec<Vertex>, n: usize) -> Result<Self> {
        elements.sort_unstable();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return invalid(format!("repeated vertex in r-set {elements:?}"));
        }
        if let Some(&v) = elements.last() {
            if v >= n {
                return invalid(format!("vertex {v} out of range for n = {n}"));
            }
        }
        if elements.len() < 2 {
            return invalid("an r-set needs r >= 2 elements");
        }
        Ok(RSet(elements))
    }

    pub fn elements(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn colex_index(&self) -> usize {
        colex_rank(&self.0)
    }

    pub(crate) fn from_sorted(elements: Vec<Vertex>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        RSet(elements)
    }
}

impl fmt::Display for RSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// All r-subsets of `0..n` in colex order.
pub fn rsets(n: usize, r: usize) -> RSets {
    RSets {
        n,
        current: if r <= n { Some((0..r).collect()) } else { None },
    }
}

pub struct RSets {
    n: usize,
    current: Option<Vec<Vertex>>,
}

impl Iterator for RSets {
    type Item = RSet;

    fn next(&mut self) -> Option<RSet> {
        let cur = self.current.as_mut()?;
        let out = RSet(cur.clone());
        let r = cur.len();
        let mut j = 0;
        loop {
            if j == r {
                self.current = None;
                break;
            }
            let limit = if j + 1 < r { cur[j + 1] } else { self.n };
            if cur[j] + 1 < limit {
                cur[j] += 1;
                for (i, c) in cur.iter_mut().enumerate().take(j) {
                    *c = i;
                }
                break;
            }
            j += 1;
        }
        Some(out)
    }
}

/// A complete r-partite r-graph in canonical form: each part ascending, parts
/// ordered by their minimum element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Vertex>>", into = "Vec<Vec<Vertex>>")]
pub struct Block {
    parts: Vec<Vec<Vertex>>,
}

impl Block {
    /// Validates and canonicalizes. Rejects fewer than two parts, empty parts
    /// and parts that share a vertex.
    pub fn new(parts: Vec<Vec<Vertex>>) -> Result<Self> {
        canonicalize(parts)
    }

    pub fn parts(&self) -> &[Vec<Vertex>] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<Vec<Vertex>> {
        self.parts
    }

    pub fn uniformity(&self) -> usize {
        self.parts.len()
    }

    /// Index of the part holding `v`, if any.
    pub fn part_of(&self, v: Vertex) -> Option<usize> {
        self.parts.iter().position(|p| p.binary_search(&v).is_ok())
    }

    pub fn max_vertex(&self) -> Vertex {
        self.parts
            .iter()
            .filter_map(|p| p.last())
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// Number of r-sets in the block: the product of the part sizes.
    pub fn edge_count(&self) -> u128 {
        self.parts.iter().map(|p| p.len() as u128).product()
    }

    /// Applies a vertex map. The map must be injective on the block's
    /// vertices.
    pub fn map_vertices(&self, mut f: impl FnMut(Vertex) -> Vertex) -> Result<Self> {
        Block::new(
            self.parts
                .iter()
                .map(|p| p.iter().map(|&v| f(v)).collect())
                .collect(),
        )
    }
}

impl TryFrom<Vec<Vec<Vertex>>> for Block {
    type Error = Error;

    fn try_from(parts: Vec<Vec<Vertex>>) -> Result<Self> {
        Block::new(parts)
    }
}

impl From<Block> for Vec<Vec<Vertex>> {
    fn from(b: Block) -> Self {
        b.parts
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, v) in p.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, ")")
    }
}

/// Puts a list of parts into canonical block form.
pub fn canonicalize(mut parts: Vec<Vec<Vertex>>) -> Result<Block> {
    if parts.len() < 2 {
        return invalid(format!(
            "a block needs at least 2 parts, got {}",
            parts.len()
        ));
    }
    for p in parts.iter_mut() {
        if p.is_empty() {
            return invalid("block has an empty part");
        }
        p.sort_unstable();
        if p.windows(2).any(|w| w[0] == w[1]) {
            return invalid(format!("repeated vertex inside part {p:?}"));
        }
    }
    parts.sort_unstable_by_key(|p| p[0]);
    let mut all: Vec<Vertex> = parts.iter().flatten().copied().collect();
    all.sort_unstable();
    if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
        return invalid(format!("vertex {} appears in two parts", w[0]));
    }
    Ok(Block { parts })
}

/// Whether the r-set meets every part of the block.
pub fn contains_rset(block: &Block, s: &RSet) -> Result<bool> {
    if block.uniformity() != s.len() {
        return Err(Error::Validation(format!(
            "uniformity mismatch: block has {} parts, r-set has {} elements",
            block.uniformity(),
            s.len()
        )));
    }
    let mut hit = vec![false; block.uniformity()];
    for &v in s.elements() {
        match block.part_of(v) {
            Some(i) if !hit[i] => hit[i] = true,
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// One parity bit per r-set of `0..n`, colex order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParityVector {
    n: usize,
    r: usize,
    len: usize,
    words: Vec<u64>,
}

impl ParityVector {
    pub fn zeros(n: usize, r: usize) -> Self {
        let len = binomial(n, r);
        ParityVector {
            n,
            r,
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn ones(n: usize, r: usize) -> Self {
        let mut v = Self::zeros(n, r);
        v.words.iter_mut().for_each(|w| *w = !0);
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of bits, `C(n, r)`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &ParityVector) {
        assert_eq!((self.n, self.r), (other.n, other.r), "shape mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_all_ones(&self) -> bool {
        self.first_zero().is_none()
    }

    /// Index of the first clear bit.
    pub fn first_zero(&self) -> Option<usize> {
        self.words.iter().enumerate().find_map(|(k, &w)| {
            let i = k * 64 + (!w).trailing_zeros() as usize;
            (w != !0 && i < self.len).then_some(i)
        })
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }
}

impl fmt::Debug for ParityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParityVector(n={}, r={}, ", self.n, self.r)?;
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, ")")
    }
}

/// Footprint of a single block over the r-sets of `0..n`.
pub fn incidence_vector(block: &Block, n: usize) -> Result<ParityVector> {
    if block.max_vertex() >= n {
        return invalid(format!(
            "block vertex {} out of range for n = {n}",
            block.max_vertex()
        ));
    }
    let r = block.uniformity();
    let mut out = ParityVector::zeros(n, r);
    let parts = block.parts();
    let mut choice = vec![0usize; r];
    let mut buf = vec![0; r];
    // odometer over one vertex per part
    loop {
        for (i, p) in parts.iter().enumerate() {
            buf[i] = p[choice[i]];
        }
        buf.sort_unstable();
        out.flip(colex_rank(&buf));
        let mut i = 0;
        while i < r {
            choice[i] += 1;
            if choice[i] < parts[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == r {
            break;
        }
    }
    Ok(out)
}

/// A multiset of blocks of uniformity `r` on the ground set `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CoverRepr")]
pub struct Cover {
    n: usize,
    r: usize,
    blocks: Vec<Block>,
}

#[derive(Deserialize)]
struct CoverRepr {
    n: usize,
    r: usize,
    blocks: Vec<Block>,
}

impl TryFrom<CoverRepr> for Cover {
    type Error = Error;

    fn try_from(c: CoverRepr) -> Result<Self> {
        Cover::new(c.n, c.r, c.blocks)
    }
}

impl Cover {
    pub fn new(n: usize, r: usize, blocks: Vec<Block>) -> Result<Self> {
        if r < 2 {
            return invalid(format!("uniformity must be at least 2, got {r}"));
        }
        if n < r {
            return invalid(format!("ground set of size {n} has no {r}-sets"));
        }
        for b in &blocks {
            if b.uniformity() != r {
                return invalid(format!(
                    "block {b} has {} parts, expected {r}",
                    b.uniformity()
                ));
            }
            if b.max_vertex() >= n {
                return invalid(format!("block {b} uses a vertex outside 0..{n}"));
            }
        }
        Ok(Cover { n, r, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<Block> {
        self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Number of blocks containing `s`.
    pub fn coverage_count(&self, s: &RSet) -> Result<usize> {
        let mut c = 0;
        for b in &self.blocks {
            c += contains_rset(b, s)? as usize;
        }
        Ok(c)
    }

    /// Relabels every vertex through `f` onto a ground set of size `n`.
    pub fn map_vertices(&self, n: usize, mut f: impl FnMut(Vertex) -> Vertex) -> Result<Cover> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.map_vertices(&mut f))
            .collect::<Result<Vec<_>>>()?;
        Cover::new(n, self.r, blocks)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("cover serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// XOR of all block footprints.
pub fn cover_parity(cover: &Cover) -> ParityVector {
    let mut acc = ParityVector::zeros(cover.n, cover.r);
    for b in &cover.blocks {
        acc.xor_assign(&incidence_vector(b, cover.n).expect("validated cover"));
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// `witness` is covered an even number of times.
    Fail {
        witness: RSet,
    },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&RSet> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail { witness } => Some(witness),
        }
    }
}

/// Checks that every r-set is covered an odd number of times. On failure the
/// witness is the colex-first evenly covered r-set.
pub fn is_odd_cover(cover: &Cover) -> Verdict {
    match cover_parity(cover).first_zero() {
        None => Verdict::Pass,
        Some(i) => Verdict::Fail {
            witness: RSet::from_sorted(colex_unrank(i, cover.r)),
        },
    }
}
