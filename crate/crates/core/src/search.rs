//! Exact minimum odd covers for small ground sets.
//!
//! The candidate universe is every complete r-partite r-graph on a subset of
//! `0..n`, deduplicated by canonical form and sorted lexicographically by
//! parts. A size-m odd cover is an m-subset of candidates whose footprints
//! XOR to the all-ones vector. Every solver returns the lexicographically
//! first such subset (by candidate index), so the reported witness does not
//! depend on which solver ran.

use rustc_hash::FxHashMap;

use crate::cover::{binomial, incidence_vector, is_odd_cover, Block, Cover, ParityVector};
use crate::error::{invalid, Error, Result};

pub const DEFAULT_CAP: usize = 1_000_000;

/// Stirling number of the second kind, `S(s, k)`.
pub fn stirling2(s: usize, k: usize) -> u128 {
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=s {
        for j in (1..=k.min(i)).rev() {
            row[j] = j as u128 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row[k]
}

/// Number of complete r-partite r-graphs on subsets of `0..n`:
/// `sum_s C(n, s) S(s, r)`.
pub fn candidate_count(n: usize, r: usize) -> u128 {
    (r..=n)
        .map(|s| binomial(n, s) as u128 * stirling2(s, r))
        .sum()
}

/// All candidate blocks with their footprints, stored flat.
#[derive(Debug, Clone)]
pub struct CandidateUniverse {
    n: usize,
    r: usize,
    blocks: Vec<Block>,
    vectors: Vec<ParityVector>,
}

impl CandidateUniverse {
    /// Builds a universe from an explicit block list (kept in the given
    /// order).
    pub fn from_blocks(n: usize, r: usize, blocks: Vec<Block>) -> Result<Self> {
        let vectors = blocks
            .iter()
            .map(|b| {
                if b.uniformity() != r {
                    return invalid(format!("block {b} is not {r}-partite"));
                }
                incidence_vector(b, n)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CandidateUniverse {
            n,
            r,
            blocks,
            vectors,
        })
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

    pub fn vectors(&self) -> &[ParityVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Restriction to the candidates at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        CandidateUniverse {
            n: self.n,
            r: self.r,
            blocks: indices.iter().map(|&i| self.blocks[i].clone()).collect(),
            vectors: indices.iter().map(|&i| self.vectors[i].clone()).collect(),
        }
    }

    /// The cover formed by the candidates at `indices`.
    pub fn cover_of(&self, indices: &[usize]) -> Result<Cover> {
        Cover::new(
            self.n,
            self.r,
            indices.iter().map(|&i| self.blocks[i].clone()).collect(),
        )
    }

    fn flat(&self) -> Flat {
        let stride = ParityVector::zeros(self.n, self.r).words().len();
        let mut data = Vec::with_capacity(stride * self.len());
        for v in &self.vectors {
            data.extend_from_slice(v.words());
        }
        Flat { stride, data }
    }
}

/// Every complete r-partite r-graph on a subset of `0..n`, canonical and
/// sorted. Fails with a resource error when the count exceeds `cap`.
pub fn enumerate_candidates(n: usize, r: usize, cap: usize) -> Result<CandidateUniverse> {
    if r < 2 || n < r {
        return invalid(format!("need n >= r >= 2, got n = {n}, r = {r}"));
    }
    let count = candidate_count(n, r);
    if count > cap as u128 {
        return Err(Error::ResourceLimit(format!(
            "{count} candidate blocks for n = {n}, r = {r} exceeds the cap of {cap}"
        )));
    }
    let mut blocks = Vec::with_capacity(count as usize);
    // label 0 = unused, labels 1..=r in order of first use, so part order
    // follows minimum elements
    let mut labels = vec![0usize; n];
    fn rec(v: usize, used: usize, r: usize, labels: &mut [usize], out: &mut Vec<Block>) {
        let n = labels.len();
        if n - v < r - used {
            return;
        }
        if v == n {
            let mut parts = vec![Vec::new(); r];
            for (w, &l) in labels.iter().enumerate() {
                if l > 0 {
                    parts[l - 1].push(w);
                }
            }
            out.push(Block::new(parts).expect("labelled parts are disjoint and nonempty"));
            return;
        }
        for l in 0..=(used + 1).min(r) {
            labels[v] = l;
            rec(v + 1, used.max(l), r, labels, out);
        }
        labels[v] = 0;
    }
    rec(0, 0, r, &mut labels, &mut blocks);
    blocks.sort_unstable();
    debug_assert_eq!(blocks.len() as u128, count);
    CandidateUniverse::from_blocks(n, r, blocks)
}

struct Flat {
    stride: usize,
    data: Vec<u64>,
}

impl Flat {
    fn get(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    fn len(&self) -> usize {
        self.data.len().checked_div(self.stride).unwrap_or(0)
    }
}

fn xor_into(dst: &mut [u64], a: &[u64], b: &[u64]) {
    for ((d, x), y) in dst.iter_mut().zip(a).zip(b) {
        *d = x ^ y;
    }
}

fn check_target(universe: &CandidateUniverse, target: &ParityVector) -> Result<()> {
    if (target.n(), target.r()) != (universe.n, universe.r) {
        return invalid("target shape does not match the universe");
    }
    Ok(())
}

fn trivial(flat: &Flat, target: &[u64], m: usize) -> Option<Option<Vec<usize>>> {
    match m {
        0 => Some(target.iter().all(|&w| w == 0).then(Vec::new)),
        1 => Some(
            (0..flat.len())
                .find(|&i| flat.get(i) == target)
                .map(|i| vec![i]),
        ),
        _ => None,
    }
}

/// Plain enumeration of m-subsets in lexicographic order.
pub fn naive_solve(
    universe: &CandidateUniverse,
    target: &ParityVector,
    m: usize,
) -> Result<Option<Vec<usize>>> {
    check_target(universe, target)?;
    let flat = universe.flat();
    if let Some(t) = trivial(&flat, target.words(), m) {
        return Ok(t);
    }
    if m > flat.len() {
        return Ok(None);
    }
    let w = flat.stride;
    // acc[d] = target ^ (xor of the first d chosen)
    let mut acc = vec![0u64; w * (m + 1)];
    acc[..w].copy_from_slice(target.words());
    let mut chosen = Vec::with_capacity(m);

    fn rec(flat: &Flat, acc: &mut [u64], chosen: &mut Vec<usize>, start: usize, m: usize) -> bool {
        let w = flat.stride;
        let d = chosen.len();
        let n = flat.len();
        if d + 1 == m {
            let need = &acc[d * w..(d + 1) * w];
            if let Some(i) = (start..n).find(|&i| flat.get(i) == need) {
                chosen.push(i);
                return true;
            }
            return false;
        }
        for i in start..n + d + 1 - m {
            let (lo, hi) = acc.split_at_mut((d + 1) * w);
            xor_into(&mut hi[..w], &lo[d * w..], flat.get(i));
            chosen.push(i);
            if rec(flat, acc, chosen, i + 1, m) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    Ok(rec(&flat, &mut acc, &mut chosen, 0, m).then_some(chosen))
}

/// Calls `f(subset, xor)` for every k-subset of `0..flat.len()` in
/// lexicographic order; stops early when `f` returns true.
fn for_each_subset(flat: &Flat, k: usize, mut f: impl FnMut(&[usize], &[u64]) -> bool) -> bool {
    let w = flat.stride;
    let n = flat.len();
    if k > n {
        return false;
    }
    let mut acc = vec![0u64; w * (k + 1)];
    let mut idx: Vec<usize> = Vec::with_capacity(k);

    fn rec(
        flat: &Flat,
        acc: &mut [u64],
        idx: &mut Vec<usize>,
        start: usize,
        k: usize,
        f: &mut dyn FnMut(&[usize], &[u64]) -> bool,
    ) -> bool {
        let w = flat.stride;
        let d = idx.len();
        if d == k {
            return f(idx, &acc[d * w..(d + 1) * w]);
        }
        for i in start..flat.len() + d + 1 - k {
            let (lo, hi) = acc.split_at_mut((d + 1) * w);
            xor_into(&mut hi[..w], &lo[d * w..], flat.get(i));
            idx.push(i);
            let stop = rec(flat, acc, idx, i + 1, k, f);
            idx.pop();
            if stop {
                return true;
            }
        }
        false
    }

    rec(flat, &mut acc, &mut idx, 0, k, &mut f)
}

struct Group {
    start: usize,
    len: usize,
    /// Largest first index among the group's subsets.
    max_first: usize,
}

/// Meet in the middle: XORs of all `floor(m/2)`-subsets go into a hash
/// table, then every `ceil(m/2)`-subset of lower indices probes it. Returns
/// the lexicographically first solution. `table_limit` bounds the number of
/// table entries.
pub fn mitm_solve(
    universe: &CandidateUniverse,
    target: &ParityVector,
    m: usize,
    table_limit: usize,
) -> Result<Option<Vec<usize>>> {
    check_target(universe, target)?;
    if !(2..=6).contains(&m) {
        return invalid(format!("meet in the middle handles 2 <= m <= 6, got {m}"));
    }
    let flat = universe.flat();
    let n = flat.len();
    if m > n {
        return Ok(None);
    }
    let (lo_k, hi_k) = (m.div_ceil(2), m / 2);
    let table_size = binomial(n, hi_k);
    if table_size > table_limit {
        return Err(Error::ResourceLimit(format!(
            "meet-in-the-middle table of {table_size} entries exceeds {table_limit}"
        )));
    }

    let mut keys: FxHashMap<Box<[u64]>, u32> = FxHashMap::default();
    let mut entries: Vec<(u32, [u32; 3])> = Vec::with_capacity(table_size);
    for_each_subset(&flat, hi_k, |s, x| {
        let next = keys.len() as u32;
        let g = *keys.entry(x.into()).or_insert(next);
        let mut e = [0u32; 3];
        for (d, &i) in e.iter_mut().zip(s) {
            *d = i as u32;
        }
        entries.push((g, e));
        false
    });
    // stable: keeps lexicographic order inside each group
    entries.sort_by_key(|&(g, _)| g);
    let mut groups: Vec<Group> = Vec::with_capacity(keys.len());
    let mut s = 0;
    while s < entries.len() {
        let g = entries[s].0;
        let mut e = s;
        let mut max_first = 0;
        while e < entries.len() && entries[e].0 == g {
            max_first = max_first.max(entries[e].1[0] as usize);
            e += 1;
        }
        groups.push(Group {
            start: s,
            len: e - s,
            max_first,
        });
        s = e;
    }

    let w = flat.stride;
    let mut need = vec![0u64; w];
    let mut found = None;
    for_each_subset(&flat, lo_k, |lo, x| {
        let last = *lo.last().expect("lo_k >= 1");
        if last + hi_k >= n {
            return false;
        }
        xor_into(&mut need, x, target.words());
        let Some(&g) = keys.get(&need[..]) else {
            return false;
        };
        let grp = &groups[g as usize];
        if grp.max_first <= last {
            return false;
        }
        let hi = entries[grp.start..grp.start + grp.len]
            .iter()
            .find(|(_, e)| e[0] as usize > last)
            .expect("max_first guarantees a match");
        let mut sol = lo.to_vec();
        sol.extend(hi.1[..hi_k].iter().map(|&i| i as usize));
        found = Some(sol);
        true
    });
    Ok(found)
}

/// Depth-first search over increasing index sequences. A branch is cut when
/// the lowest set bit of the residual is not contained in any later
/// candidate, or when the residual has more ones than the remaining
/// candidates can reach. `node_limit` bounds the number of visited nodes.
pub fn dfs_solve(
    universe: &CandidateUniverse,
    target: &ParityVector,
    m: usize,
    node_limit: u64,
) -> Result<Option<Vec<usize>>> {
    check_target(universe, target)?;
    let flat = universe.flat();
    if let Some(t) = trivial(&flat, target.words(), m) {
        return Ok(t);
    }
    let n = flat.len();
    let bits = target.len();
    let mut last_holder: Vec<Option<usize>> = vec![None; bits];
    for (i, v) in universe.vectors.iter().enumerate() {
        for b in v.iter_ones() {
            last_holder[b] = Some(i);
        }
    }
    let pops: Vec<usize> = universe.vectors.iter().map(|v| v.count_ones()).collect();
    let mut suffix_max = vec![0usize; n + 1];
    for i in (0..n).rev() {
        suffix_max[i] = suffix_max[i + 1].max(pops[i]);
    }
    let mut by_key: FxHashMap<&[u64], Vec<usize>> = FxHashMap::default();
    for i in 0..n {
        by_key.entry(flat.get(i)).or_default().push(i);
    }

    struct Ctx<'a> {
        flat: &'a Flat,
        last_holder: Vec<Option<usize>>,
        suffix_max: Vec<usize>,
        by_key: FxHashMap<&'a [u64], Vec<usize>>,
        nodes: u64,
        node_limit: u64,
        m: usize,
    }

    fn rec(
        ctx: &mut Ctx,
        residual: &mut Vec<u64>,
        chosen: &mut Vec<usize>,
        start: usize,
    ) -> Result<bool> {
        ctx.nodes += 1;
        if ctx.nodes > ctx.node_limit {
            return Err(Error::ResourceLimit(format!(
                "depth-first search exceeded {} nodes",
                ctx.node_limit
            )));
        }
        let left = ctx.m - chosen.len();
        let n = ctx.flat.len();
        if left == 1 {
            if let Some(&i) = ctx
                .by_key
                .get(&residual[..])
                .and_then(|v| v.iter().find(|&&i| i >= start))
            {
                chosen.push(i);
                return Ok(true);
            }
            return Ok(false);
        }
        let ones: usize = residual.iter().map(|w| w.count_ones() as usize).sum();
        if ones > 0 {
            let low = residual
                .iter()
                .enumerate()
                .find(|(_, &w)| w != 0)
                .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
                .expect("nonzero residual");
            match ctx.last_holder[low] {
                Some(h) if h >= start => {}
                _ => return Ok(false),
            }
            if ones > left * ctx.suffix_max[start.min(n)] {
                return Ok(false);
            }
        }
        for i in start..n + 1 - left {
            for (r, x) in residual.iter_mut().zip(ctx.flat.get(i)) {
                *r ^= x;
            }
            chosen.push(i);
            let hit = rec(ctx, residual, chosen, i + 1)?;
            if hit {
                return Ok(true);
            }
            chosen.pop();
            for (r, x) in residual.iter_mut().zip(ctx.flat.get(i)) {
                *r ^= x;
            }
        }
        Ok(false)
    }

    if m > n {
        return Ok(None);
    }
    let mut ctx = Ctx {
        flat: &flat,
        last_holder,
        suffix_max,
        by_key,
        nodes: 0,
        node_limit,
        m,
    };
    let mut residual = target.words().to_vec();
    let mut chosen = Vec::with_capacity(m);
    Ok(rec(&mut ctx, &mut residual, &mut chosen, 0)?.then_some(chosen))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Naive,
    MeetInTheMiddle,
    DepthFirst,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Maximum number of candidate blocks.
    pub cap: usize,
    /// Plain enumeration is used while `C(|U|, m)` stays at or below this.
    pub naive_limit: u128,
    /// Maximum meet-in-the-middle table entries.
    pub table_limit: usize,
    /// Node budget for depth-first search.
    pub dfs_node_limit: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            cap: DEFAULT_CAP,
            naive_limit: 100_000_000,
            table_limit: 20_000_000,
            dfs_node_limit: 2_000_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// Minimum size found; the cover passed the verifier.
    Found { size: usize, cover: Cover },
    /// No odd cover with at most `max_size` blocks exists.
    Absent { max_size: usize },
    /// A resource guard stopped the search. Sizes below `proven_above + 1`
    /// were excluded before it stopped.
    Inconclusive { proven_above: usize, reason: String },
}

fn ladder(count: usize, m: usize, config: &SearchConfig) -> Strategy {
    if m <= 1 || binomial(count, m) as u128 <= config.naive_limit {
        Strategy::Naive
    } else if m <= 6 {
        Strategy::MeetInTheMiddle
    } else {
        Strategy::DepthFirst
    }
}

/// Solves for exactly `m` candidates with the strategy the ladder picks,
/// falling back to depth-first search when the meet-in-the-middle table
/// would be too large.
pub fn solve(
    universe: &CandidateUniverse,
    target: &ParityVector,
    m: usize,
    config: &SearchConfig,
) -> Result<Option<Vec<usize>>> {
    match ladder(universe.len(), m, config) {
        Strategy::Naive => naive_solve(universe, target, m),
        Strategy::MeetInTheMiddle => match mitm_solve(universe, target, m, config.table_limit) {
            Err(Error::ResourceLimit(_)) => dfs_solve(universe, target, m, config.dfs_node_limit),
            other => other,
        },
        Strategy::DepthFirst => dfs_solve(universe, target, m, config.dfs_node_limit),
    }
}

/// Smallest odd cover of the complete r-graph on `n` vertices with at most
/// `max_size` blocks.
pub fn min_odd_cover(
    n: usize,
    r: usize,
    max_size: usize,
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    if max_size == 0 {
        return invalid("max_size must be at least 1");
    }
    let universe = match enumerate_candidates(n, r, config.cap) {
        Ok(u) => u,
        Err(Error::ResourceLimit(reason)) => {
            return Ok(SearchOutcome::Inconclusive {
                proven_above: 0,
                reason,
            })
        }
        Err(e) => return Err(e),
    };
    min_odd_cover_in(&universe, max_size, config)
}

/// [`min_odd_cover`] over a prepared universe.
pub fn min_odd_cover_in(
    universe: &CandidateUniverse,
    max_size: usize,
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    let target = ParityVector::ones(universe.n, universe.r);
    for m in 1..=max_size {
        match solve(universe, &target, m, config) {
            Ok(Some(idx)) => {
                let cover = universe.cover_of(&idx)?;
                if let Some(w) = is_odd_cover(&cover).witness() {
                    return Err(Error::Validation(format!(
                        "search produced a family that fails the verifier at {w}"
                    )));
                }
                return Ok(SearchOutcome::Found { size: m, cover });
            }
            Ok(None) => {}
            Err(Error::ResourceLimit(reason)) => {
                return Ok(SearchOutcome::Inconclusive {
                    proven_above: m - 1,
                    reason,
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SearchOutcome::Absent { max_size })
}
