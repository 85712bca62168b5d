//! Explicit odd covers, the reductions between them, and the 4-uniform
//! recursive builder.
//!
//! Vertex labelling used by each construction:
//! - circle covers: vertex `i` is the residue `i` in the cyclic group of
//!   order `n`; the opposite of `i` is `i + n/2`.
//! - ternary covers: vertex `id` is the vector over F_3 whose coordinates are
//!   the little-endian base-3 digits of `id`.
//! - signed covers from an m x m skew sign matrix: vertex `i < m` carries row
//!   `i`, vertex `m + i` carries its negation.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cover::{is_odd_cover, Block, Cover, Vertex};
use crate::error::{invalid, Error, Result};

// ---------------------------------------------------------------------------
// Skew sign matrices
// ---------------------------------------------------------------------------

/// Square matrix over {-1, 0, +1}, zero exactly on the diagonal, with
/// `entry(i, j) = -entry(j, i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SkewRepr")]
pub struct SkewSignMatrix {
    m: usize,
    entries: Vec<Vec<i8>>,
}

#[derive(Deserialize)]
struct SkewRepr {
    m: usize,
    entries: Vec<Vec<i8>>,
}

impl TryFrom<SkewRepr> for SkewSignMatrix {
    type Error = Error;

    fn try_from(s: SkewRepr) -> Result<Self> {
        if s.entries.len() != s.m {
            return invalid(format!(
                "matrix declares m = {} but has {} rows",
                s.m,
                s.entries.len()
            ));
        }
        SkewSignMatrix::new(s.entries)
    }
}

impl SkewSignMatrix {
    pub fn new(entries: Vec<Vec<i8>>) -> Result<Self> {
        let m = entries.len();
        if m == 0 {
            return invalid("skew sign matrix must be nonempty");
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != m {
                return invalid(format!("row {i} has length {}, expected {m}", row.len()));
            }
            for (j, &e) in row.iter().enumerate() {
                if !(-1..=1).contains(&e) {
                    return invalid(format!("entry ({i},{j}) = {e} is not in {{-1,0,1}}"));
                }
                if (i == j) != (e == 0) {
                    return invalid(format!(
                        "entry ({i},{j}) = {e}: zero must occur exactly on the diagonal"
                    ));
                }
                if e != -entries[j][i] {
                    return invalid(format!("entries ({i},{j}) and ({j},{i}) are not negatives"));
                }
            }
        }
        Ok(SkewSignMatrix { m, entries })
    }

    /// Builds the matrix from its strict upper triangle.
    pub fn from_upper(m: usize, mut upper: impl FnMut(usize, usize) -> i8) -> Result<Self> {
        let mut e = vec![vec![0i8; m]; m];
        for i in 0..m {
            for j in i + 1..m {
                let x = upper(i, j);
                e[i][j] = x;
                e[j][i] = -x;
            }
        }
        Self::new(e)
    }

    /// Uniformly random signs above the diagonal.
    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<Self> {
        Self::from_upper(m, |_, _| if rng.gen::<bool>() { 1 } else { -1 })
    }

    /// The sign pattern of the circle construction: `+1` below the diagonal.
    pub fn circle_pattern(m: usize) -> Result<Self> {
        Self::from_upper(m, |_, _| -1)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> i8 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<i8>] {
        &self.entries
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// The coordinate tripartitions (+1 class, -1 class, 0 class) of the signed
/// vertex set `{±row_i}`.
fn signed_tripartitions(mat: &SkewSignMatrix) -> Vec<[Vec<Vertex>; 3]> {
    let m = mat.dim();
    (0..m)
        .map(|j| {
            let mut plus = Vec::new();
            let mut minus = Vec::new();
            let mut zero = Vec::new();
            for v in 0..2 * m {
                let (row, sign) = if v < m { (v, 1) } else { (v - m, -1) };
                match sign * mat.entry(row, j) {
                    1 => plus.push(v),
                    -1 => minus.push(v),
                    _ => zero.push(v),
                }
            }
            [plus, minus, zero]
        })
        .collect()
}

/// One 3-partite block per coordinate of the skew sign matrix; an odd cover
/// of the complete 3-graph on `2m` vertices.
pub fn signed_tripartition_cover(mat: &SkewSignMatrix) -> Result<Cover> {
    let m = mat.dim();
    if m < 2 {
        return invalid("signed tripartition cover needs m >= 2");
    }
    let blocks = signed_tripartitions(mat)
        .into_iter()
        .map(|parts| Block::new(parts.into()))
        .collect::<Result<Vec<_>>>()?;
    Cover::new(2 * m, 3, blocks)
}

/// The explicit family for `m` divisible by 4. With rows and columns
/// numbered from 1, the entry above the diagonal at `(i, j)` is `-1` exactly
/// when `j >= i + 2`, or `j = i + 1` and `i` is 0 or 1 mod 4.
pub fn buchanan_matrix(m: usize) -> Result<SkewSignMatrix> {
    if m == 0 || m % 4 != 0 {
        return invalid(format!("m must be a positive multiple of 4, got {m}"));
    }
    SkewSignMatrix::from_upper(m, |i0, j0| {
        let (i, j) = (i0 + 1, j0 + 1);
        if j >= i + 2 || i % 4 == 0 || i % 4 == 1 {
            -1
        } else {
            1
        }
    })
}

/// Bipartite blocks `(A_j, B_j)` from [`buchanan_matrix`]: an odd cover of
/// `K_{2m}` with `m` blocks.
pub fn buchanan_bipartite_cover(m: usize) -> Result<Cover> {
    let mat = buchanan_matrix(m)?;
    let blocks = signed_tripartitions(&mat)
        .into_iter()
        .map(|[a, b, _]| Block::new(vec![a, b]))
        .collect::<Result<Vec<_>>>()?;
    Cover::new(2 * m, 2, blocks)
}

/// Adds a vertex `2m` to every zero class of the signed tripartitions of
/// [`buchanan_matrix`], giving an odd cover of the complete 3-graph on
/// `2m + 1` vertices with `m` blocks.
pub fn extend_to_8kplus1(m: usize) -> Result<Cover> {
    let mat = buchanan_matrix(m)?;
    let v = 2 * m;
    let blocks = signed_tripartitions(&mat)
        .into_iter()
        .map(|[a, b, mut c]| {
            c.push(v);
            Block::new(vec![a, b, c])
        })
        .collect::<Result<Vec<_>>>()?;
    Cover::new(2 * m + 1, 3, blocks)
}

// ---------------------------------------------------------------------------
// Circle and ternary constructions
// ---------------------------------------------------------------------------

/// `n/2` blocks on the cyclic group of even order `n = 2k`. Block `i` has
/// parts `{i, i+k}`, `{i+1, ..., i+k-1}` and `{i+k+1, ..., i-1}`.
pub fn circle_cover(n: usize) -> Result<Cover> {
    if n < 4 || n % 2 != 0 {
        return invalid(format!("circle cover needs an even n >= 4, got {n}"));
    }
    let k = n / 2;
    let blocks = (0..k)
        .map(|i| {
            Block::new(vec![
                vec![i, i + k],
                (1..k).map(|d| (i + d) % n).collect(),
                (1..k).map(|d| (i + k + d) % n).collect(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Cover::new(n, 3, blocks)
}

/// A vector in F_3^k.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gf3Vector(Vec<u8>);

impl Gf3Vector {
    /// Little-endian base-3 digits of `id`.
    pub fn from_id(mut id: usize, k: usize) -> Self {
        let mut c = vec![0u8; k];
        for d in c.iter_mut() {
            *d = (id % 3) as u8;
            id /= 3;
        }
        Gf3Vector(c)
    }

    pub fn id(&self) -> usize {
        self.0.iter().rev().fold(0, |acc, &d| acc * 3 + d as usize)
    }

    pub fn coords(&self) -> &[u8] {
        &self.0
    }

    pub fn dot(&self, other: &Gf3Vector) -> u8 {
        (self
            .0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| (a * b) as u32)
            .sum::<u32>()
            % 3) as u8
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    /// True for the representative of `{x, 2x}` whose first nonzero
    /// coordinate is 1.
    pub fn is_normalized(&self) -> bool {
        self.0.iter().find(|&&d| d != 0) == Some(&1)
    }
}

/// Returns `k` when `n = 3^k` with `k >= 1`.
pub fn log3_exact(n: usize) -> Option<u32> {
    let mut p = 3;
    let mut k = 1;
    while p < n {
        p = p.checked_mul(3)?;
        k += 1;
    }
    (p == n).then_some(k)
}

/// `(n - 1)/2` blocks on F_3^k for `n = 3^k`, one per pair `{x, 2x}` of
/// nonzero vectors: block `x` is the partition into the three parallel
/// hyperplanes `x·y = 0, 1, 2`.
pub fn gf3_cover(n: usize) -> Result<Cover> {
    let k = log3_exact(n)
        .ok_or_else(|| Error::Validation(format!("n must be a power of 3, got {n}")))?
        as usize;
    let points: Vec<Gf3Vector> = (0..n).map(|id| Gf3Vector::from_id(id, k)).collect();
    let blocks = points
        .iter()
        .filter(|x| x.is_normalized())
        .map(|x| {
            let mut parts = vec![Vec::new(), Vec::new(), Vec::new()];
            for y in &points {
                parts[x.dot(y) as usize].push(y.id());
            }
            Block::new(parts)
        })
        .collect::<Result<Vec<_>>>()?;
    Cover::new(n, 3, blocks)
}

// ---------------------------------------------------------------------------
// Reductions
// ---------------------------------------------------------------------------

fn check_vertex(cover: &Cover, v: Vertex) -> Result<()> {
    if v >= cover.n() {
        return invalid(format!("vertex {v} out of range for n = {}", cover.n()));
    }
    Ok(())
}

fn skip(v: Vertex) -> impl Fn(Vertex) -> Vertex {
    move |w| if w > v { w - 1 } else { w }
}

/// The link at `v`: every block containing `v` loses the part holding `v`;
/// blocks avoiding `v` are dropped. Vertices above `v` shift down by one.
pub fn link(cover: &Cover, v: Vertex) -> Result<Cover> {
    if cover.r() < 3 {
        return Err(Error::Unsupported(format!(
            "link of a {}-uniform cover",
            cover.r()
        )));
    }
    check_vertex(cover, v)?;
    let relabel = skip(v);
    let blocks = cover
        .blocks()
        .iter()
        .filter_map(|b| {
            let hit = b.part_of(v)?;
            let parts = b
                .parts()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != hit)
                .map(|(_, p)| p.iter().map(|&w| relabel(w)).collect())
                .collect();
            Some(Block::new(parts))
        })
        .collect::<Result<Vec<_>>>()?;
    Cover::new(cover.n() - 1, cover.r() - 1, blocks)
}

/// Removes `v` from the ground set. A block whose part was `{v}` disappears.
pub fn delete_vertex(cover: &Cover, v: Vertex) -> Result<Cover> {
    check_vertex(cover, v)?;
    let relabel = skip(v);
    let blocks = cover
        .blocks()
        .iter()
        .filter_map(|b| {
            let parts: Vec<Vec<Vertex>> = b
                .parts()
                .iter()
                .map(|p| p.iter().filter(|&&w| w != v).map(|&w| relabel(w)).collect())
                .collect();
            parts
                .iter()
                .all(|p: &Vec<Vertex>| !p.is_empty())
                .then(|| Block::new(parts))
        })
        .collect::<Result<Vec<_>>>()?;
    Cover::new(cover.n() - 1, cover.r(), blocks)
}

/// Adds vertex `n` joined to everything by a star.
pub fn add_star_vertex(cover: &Cover) -> Result<Cover> {
    if cover.r() != 2 {
        return Err(Error::Unsupported(format!(
            "star addition needs a graph cover, got r = {}",
            cover.r()
        )));
    }
    let n = cover.n();
    let mut blocks = cover.blocks().to_vec();
    blocks.push(Block::new(vec![(0..n).collect(), vec![n]])?);
    Cover::new(n + 1, 2, blocks)
}

fn check_disjoint(a: &[Vertex], b: &[Vertex], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &v in a.iter().chain(b) {
        if v >= n {
            return invalid(format!("vertex {v} out of range for n = {n}"));
        }
        if std::mem::replace(&mut seen[v], true) {
            return invalid(format!("vertex {v} is used twice in the placement"));
        }
    }
    Ok(())
}

/// Products of bicliques. `f` lives on `a` (its vertex `i` is `a[i]`), `g` on
/// `b`; the result odd covers exactly the 4-sets with two vertices in `a` and
/// two in `b`.
pub fn product_cover_on(
    f: &Cover,
    a: &[Vertex],
    g: &Cover,
    b: &[Vertex],
    n: usize,
) -> Result<Cover> {
    if f.r() != 2 || g.r() != 2 {
        return Err(Error::Unsupported(
            "product cover needs two graph covers".into(),
        ));
    }
    if a.len() != f.n() || b.len() != g.n() {
        return invalid("placement sizes do not match the factor covers");
    }
    check_disjoint(a, b, n)?;
    let mut blocks = Vec::with_capacity(f.len() * g.len());
    for x in f.blocks() {
        for y in g.blocks() {
            let parts = x
                .parts()
                .iter()
                .map(|p| p.iter().map(|&v| a[v]).collect())
                .chain(y.parts().iter().map(|p| p.iter().map(|&v| b[v]).collect()))
                .collect();
            blocks.push(Block::new(parts)?);
        }
    }
    Cover::new(n, 4, blocks)
}

/// [`product_cover_on`] with `g` shifted to sit after `f`.
pub fn product_cover(f: &Cover, g: &Cover) -> Result<Cover> {
    let a: Vec<Vertex> = (0..f.n()).collect();
    let b: Vec<Vertex> = (f.n()..f.n() + g.n()).collect();
    product_cover_on(f, &a, g, &b, f.n() + g.n())
}

/// Each block `(P1, P2, P3)` of `t` (placed on `a`) becomes
/// `(P1, P2, P3, b)`.
pub fn extend_three_cover(t: &Cover, a: &[Vertex], b: &[Vertex], n: usize) -> Result<Cover> {
    if t.r() != 3 {
        return Err(Error::Unsupported(format!(
            "expected a 3-uniform cover, got r = {}",
            t.r()
        )));
    }
    if a.len() != t.n() {
        return invalid("placement size does not match the cover");
    }
    if b.is_empty() {
        return invalid("extension class must be nonempty");
    }
    check_disjoint(a, b, n)?;
    let blocks = t
        .blocks()
        .iter()
        .map(|blk| {
            let mut parts: Vec<Vec<Vertex>> = blk
                .parts()
                .iter()
                .map(|p| p.iter().map(|&v| a[v]).collect())
                .collect();
            parts.push(b.to_vec());
            Block::new(parts)
        })
        .collect::<Result<Vec<_>>>()?;
    Cover::new(n, 4, blocks)
}

// ---------------------------------------------------------------------------
// Best-known covers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GraphRoute {
    Buchanan,
    TernaryLink,
    CircleLink,
    DeleteVertex,
}

impl GraphRoute {
    pub fn name(self) -> &'static str {
        match self {
            GraphRoute::Buchanan => "buchanan2",
            GraphRoute::TernaryLink => "gf3-link",
            GraphRoute::CircleLink => "circle-link",
            GraphRoute::DeleteVertex => "delete-vertex",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ThreeRoute {
    Circle,
    Ternary,
    Extend8kPlus1,
    DeleteVertex,
}

impl ThreeRoute {
    pub fn name(self) -> &'static str {
        match self {
            ThreeRoute::Circle => "circle",
            ThreeRoute::Ternary => "gf3",
            ThreeRoute::Extend8kPlus1 => "extend8k1",
            ThreeRoute::DeleteVertex => "delete-vertex",
        }
    }
}

/// Smallest candidate; ties go to the earlier route in declaration order.
fn pick<R: Ord + Copy>(mut found: Vec<(R, Cover)>) -> (R, Cover) {
    found.sort_by_key(|(route, c)| (c.len(), *route));
    found
        .into_iter()
        .next()
        .expect("at least one route applies")
}

/// The smallest graph odd cover available from the constructions, with the
/// route that produced it.
pub fn best_graph_route(n: usize) -> Result<(GraphRoute, Cover)> {
    if n < 2 {
        return invalid(format!("graph cover needs n >= 2, got {n}"));
    }
    let mut found = Vec::new();
    if n % 8 == 0 {
        found.push((GraphRoute::Buchanan, buchanan_bipartite_cover(n / 2)?));
    }
    if log3_exact(n + 1).is_some() {
        found.push((GraphRoute::TernaryLink, link(&gf3_cover(n + 1)?, 0)?));
    }
    if n % 2 == 1 {
        found.push((GraphRoute::CircleLink, link(&circle_cover(n + 1)?, 0)?));
    } else if found.is_empty() {
        found.push((
            GraphRoute::DeleteVertex,
            delete_vertex(&best_graph_cover(n + 1)?, n)?,
        ));
    }
    Ok(pick(found))
}

pub fn best_graph_cover(n: usize) -> Result<Cover> {
    best_graph_route(n).map(|(_, c)| c)
}

/// The smallest 3-uniform odd cover available from the constructions.
pub fn best_three_route(n: usize) -> Result<(ThreeRoute, Cover)> {
    if n < 3 {
        return invalid(format!("3-graph cover needs n >= 3, got {n}"));
    }
    let mut found = Vec::new();
    if n % 2 == 0 {
        found.push((ThreeRoute::Circle, circle_cover(n)?));
    } else {
        if log3_exact(n).is_some() {
            found.push((ThreeRoute::Ternary, gf3_cover(n)?));
        }
        if n % 8 == 1 {
            found.push((ThreeRoute::Extend8kPlus1, extend_to_8kplus1((n - 1) / 2)?));
        }
        if found.is_empty() {
            found.push((
                ThreeRoute::DeleteVertex,
                delete_vertex(&circle_cover(n + 1)?, n)?,
            ));
        }
    }
    Ok(pick(found))
}

pub fn best_three_cover(n: usize) -> Result<Cover> {
    best_three_route(n).map(|(_, c)| c)
}

// ---------------------------------------------------------------------------
// Recursive 4-uniform covers
// ---------------------------------------------------------------------------

/// Largest ground set handled by a stored base cover.
pub const FOUR_BASE_MAX: usize = 7;

const FOUR_BASE: [&str; 4] = [
    include_str!("../data/four_base_4.json"),
    include_str!("../data/four_base_5.json"),
    include_str!("../data/four_base_6.json"),
    include_str!("../data/four_base_7.json"),
];

/// Stored search-found odd cover of the complete 4-graph on `n` vertices,
/// `4 <= n <= 7`, re-verified on every load.
pub fn four_base_cover(n: usize) -> Result<Cover> {
    if !(4..=FOUR_BASE_MAX).contains(&n) {
        return invalid(format!("no stored 4-uniform base cover for n = {n}"));
    }
    let c = Cover::from_json(FOUR_BASE[n - 4])?;
    if c.n() != n || c.r() != 4 {
        return invalid(format!("stored base cover for n = {n} has the wrong shape"));
    }
    if let Some(w) = is_odd_cover(&c).witness() {
        return invalid(format!("stored base cover for n = {n} fails at {w}"));
    }
    Ok(c)
}

/// Odd cover of the complete 4-graph built by splitting the vertices into
/// halves `A = 0..ceil(n/2)` and `B`: recursive covers inside each half, 3-uniform
/// covers of each half extended by the other, and a product of graph covers
/// for the 2+2 crossing 4-sets.
pub fn recursive_four_cover(n: usize) -> Result<Cover> {
    if n < 4 {
        return invalid(format!("4-uniform cover needs n >= 4, got {n}"));
    }
    if n <= FOUR_BASE_MAX {
        return four_base_cover(n);
    }
    let h = n.div_ceil(2);
    let a: Vec<Vertex> = (0..h).collect();
    let b: Vec<Vertex> = (h..n).collect();

    let mut blocks = Vec::new();
    blocks.extend(recursive_four_cover(a.len())?.into_blocks());
    blocks.extend(
        recursive_four_cover(b.len())?
            .map_vertices(n, |v| v + h)?
            .into_blocks(),
    );
    blocks.extend(extend_three_cover(&best_three_cover(a.len())?, &a, &b, n)?.into_blocks());
    blocks.extend(extend_three_cover(&best_three_cover(b.len())?, &b, &a, n)?.into_blocks());
    blocks.extend(
        product_cover_on(
            &best_graph_cover(a.len())?,
            &a,
            &best_graph_cover(b.len())?,
            &b,
            n,
        )?
        .into_blocks(),
    );
    Cover::new(n, 4, blocks)
}

/// Size of [`recursive_four_cover`] computed from the recursion alone.
pub fn recursive_four_size(n: usize) -> Result<usize> {
    if n < 4 {
        return invalid(format!("4-uniform cover needs n >= 4, got {n}"));
    }
    if n <= FOUR_BASE_MAX {
        return Ok(four_base_cover(n)?.len());
    }
    let (hi, lo) = (n.div_ceil(2), n / 2);
    Ok(recursive_four_size(hi)?
        + recursive_four_size(lo)?
        + best_three_cover(hi)?.len()
        + best_three_cover(lo)?.len()
        + best_graph_cover(hi)?.len() * best_graph_cover(lo)?.len())
}
