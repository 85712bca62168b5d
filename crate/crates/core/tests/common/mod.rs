//! Test-only oracles. Nothing here calls the library's membership or parity
//! code; covers are read through their raw part lists.

#![allow(dead_code)]

use oddcover::Cover;
use rand::Rng;

/// All k-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// A block contains `s` when every part meets `s` in exactly one vertex.
pub fn naive_contains(parts: &[Vec<usize>], s: &[usize]) -> bool {
    parts.len() == s.len()
        && parts
            .iter()
            .all(|p| p.iter().filter(|v| s.contains(v)).count() == 1)
}

pub fn naive_count(parts_list: &[Vec<Vec<usize>>], s: &[usize]) -> usize {
    parts_list.iter().filter(|p| naive_contains(p, s)).count()
}

pub fn raw_parts(cover: &Cover) -> Vec<Vec<Vec<usize>>> {
    cover.blocks().iter().map(|b| b.parts().to_vec()).collect()
}

/// Per-r-set coverage counts, r-sets in lexicographic order.
pub fn naive_counts(cover: &Cover) -> Vec<(Vec<usize>, usize)> {
    let parts = raw_parts(cover);
    subsets(cover.n(), cover.r())
        .into_iter()
        .map(|s| {
            let c = naive_count(&parts, &s);
            (s, c)
        })
        .collect()
}

/// First evenly covered r-set in lexicographic order, if any.
pub fn naive_even_rset(cover: &Cover) -> Option<Vec<usize>> {
    naive_counts(cover)
        .into_iter()
        .find(|(_, c)| c % 2 == 0)
        .map(|(s, _)| s)
}

pub fn naive_is_odd_cover(cover: &Cover) -> bool {
    naive_even_rset(cover).is_none()
}

/// A random r-partite block on `0..n` (each vertex unused or in one of r
/// parts, every part nonempty).
pub fn random_parts<R: Rng>(n: usize, r: usize, rng: &mut R) -> Vec<Vec<usize>> {
    loop {
        let mut parts = vec![Vec::new(); r];
        for v in 0..n {
            let l = rng.gen_range(0..=r);
            if l > 0 {
                parts[l - 1].push(v);
            }
        }
        if parts.iter().all(|p| !p.is_empty()) {
            return parts;
        }
    }
}

/// S(s, k) by inclusion-exclusion.
pub fn stirling_ie(s: usize, k: usize) -> u128 {
    let mut fact = 1i128;
    for i in 2..=k as i128 {
        fact *= i;
    }
    let mut sum = 0i128;
    for j in 0..=k {
        let binom = subsets(k, j).len() as i128;
        let term = binom * (k as i128 - j as i128).pow(s as u32);
        sum += if j % 2 == 0 { term } else { -term };
    }
    (sum / fact) as u128
}
