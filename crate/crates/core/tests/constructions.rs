mod common;

use common::{naive_count, naive_counts, naive_is_odd_cover, raw_parts, subsets};
use oddcover::constructions::*;
use oddcover::{is_odd_cover, Block, Cover};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn verified(c: &Cover) -> bool {
    let fast = is_odd_cover(c).is_pass();
    assert_eq!(
        fast,
        naive_is_odd_cover(c),
        "verifier disagrees with the counting oracle"
    );
    fast
}

/// 1 when the triple has an opposite pair or its points do not straddle the
/// centre; 3 when, rotated to {0, b, c} with b < k, it has k < c < k + b.
fn circle_expected(n: usize, t: &[usize]) -> usize {
    let k = n / 2;
    for i in 0..3 {
        for j in i + 1..3 {
            if (t[i] + k) % n == t[j] {
                return 1;
            }
        }
    }
    for &a in t {
        let mut r: Vec<usize> = t.iter().map(|&v| (v + n - a) % n).collect();
        r.sort_unstable();
        let (b, c) = (r[1], r[2]);
        if b < k {
            return if k < c && c < k + b { 3 } else { 1 };
        }
    }
    unreachable!("some rotation puts the second point in the first half")
}

#[test]
fn circle_membership_counts_match_classification() {
    for n in (4..=16).step_by(2) {
        let c = circle_cover(n).unwrap();
        assert_eq!(c.len(), n / 2);
        for (t, count) in naive_counts(&c) {
            assert!(
                count == 1 || count == 3,
                "n = {n}, {t:?} covered {count} times"
            );
            assert_eq!(count, circle_expected(n, &t), "n = {n}, {t:?}");
        }
    }
}

#[test]
fn circle_example_triples_n6() {
    let c = circle_cover(6).unwrap();
    let parts = raw_parts(&c);
    assert_eq!(naive_count(&parts, &[0, 1, 3]), 1);
    assert_eq!(naive_count(&parts, &[0, 2, 4]), 3);
    assert_eq!(naive_count(&parts, &[0, 2, 3]), 1);
    assert_eq!(circle_expected(6, &[0, 2, 4]), 3);
}

fn gf3_add(a: usize, b: usize, k: u32) -> usize {
    let (mut a, mut b, mut out, mut p) = (a, b, 0, 1);
    for _ in 0..k {
        out += ((a % 3 + b % 3) % 3) * p;
        a /= 3;
        b /= 3;
        p *= 3;
    }
    out
}

#[test]
fn gf3_membership_counts_by_triple_type() {
    for k in 1..=3u32 {
        let n = 3usize.pow(k);
        let c = gf3_cover(n).unwrap();
        assert_eq!(c.len(), (n - 1) / 2);
        for (t, count) in naive_counts(&c) {
            // three distinct points of F_3^k are collinear iff they sum to 0
            let collinear = gf3_add(gf3_add(t[0], t[1], k), t[2], k) == 0;
            let expected = if collinear {
                3usize.pow(k - 1)
            } else {
                3usize.pow(k - 2)
            };
            assert_eq!(count, expected, "k = {k}, {t:?}");
        }
    }
}

#[test]
fn gf3_n9_example_triples() {
    let c = gf3_cover(9).unwrap();
    let parts = raw_parts(&c);
    // a = (1,0) is id 1, 2a = id 2
    assert_eq!(naive_count(&parts, &[0, 1, 2]), 3);
    // a = (1,0), b = (0,1) = id 3
    assert_eq!(naive_count(&parts, &[0, 1, 3]), 1);
}

#[test]
fn random_skew_matrices_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..50 {
        let m = 2 + trial % 6;
        let mat = SkewSignMatrix::random(m, &mut rng).unwrap();
        let c = signed_tripartition_cover(&mat).unwrap();
        assert_eq!((c.n(), c.len()), (2 * m, m));
        assert!(verified(&c), "matrix {:?}", mat.rows());
    }
}

#[test]
fn buchanan_families() {
    let m4 = signed_tripartition_cover(&buchanan_matrix(4).unwrap()).unwrap();
    assert_eq!(m4.n(), 8);
    assert!(verified(&m4));
    for m in [4, 8] {
        let g = buchanan_bipartite_cover(m).unwrap();
        assert_eq!((g.n(), g.r(), g.len()), (2 * m, 2, m));
        assert!(verified(&g));
        let e = extend_to_8kplus1(m).unwrap();
        assert_eq!((e.n(), e.r(), e.len()), (2 * m + 1, 3, m));
        assert!(verified(&e));
    }
}

#[test]
fn extension_link_matches_bipartite_cover() {
    // triples through the new vertex behave like the edge cover of K_8
    let e = extend_to_8kplus1(4).unwrap();
    let g = buchanan_bipartite_cover(4).unwrap();
    let ep = raw_parts(&e);
    let gp = raw_parts(&g);
    for pair in subsets(8, 2) {
        let with_v = [pair[0], pair[1], 8];
        assert_eq!(naive_count(&ep, &with_v) % 2, naive_count(&gp, &pair) % 2);
    }
    let l = link(&e, 8).unwrap();
    assert_eq!(l, g);
}

#[test]
fn link_covers_of_known_families() {
    let l = link(&circle_cover(6).unwrap(), 0).unwrap();
    assert_eq!((l.n(), l.r(), l.len()), (5, 2, 3));
    assert!(verified(&l));
    let l = link(&gf3_cover(27).unwrap(), 0).unwrap();
    assert_eq!((l.n(), l.r(), l.len()), (26, 2, 13));
    assert!(is_odd_cover(&l).is_pass());
}

#[test]
fn link_and_delete_preserve_parity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 4..=8 {
        for r in 2..=4.min(n) {
            for _ in 0..5 {
                let blocks = (0..4)
                    .map(|_| Block::new(common::random_parts(n, r, &mut rng)).unwrap())
                    .collect();
                let c = Cover::new(n, r, blocks).unwrap();
                let before = raw_parts(&c);
                for v in 0..n {
                    if n > r {
                        let d = delete_vertex(&c, v).unwrap();
                        let after = raw_parts(&d);
                        for s in subsets(n - 1, r) {
                            let lifted: Vec<usize> =
                                s.iter().map(|&w| if w >= v { w + 1 } else { w }).collect();
                            assert_eq!(
                                naive_count(&after, &s) % 2,
                                naive_count(&before, &lifted) % 2
                            );
                        }
                    }
                    if r >= 3 {
                        let l = link(&c, v).unwrap();
                        assert!(l.len() <= c.len());
                        let after = raw_parts(&l);
                        for s in subsets(n - 1, r - 1) {
                            let mut lifted: Vec<usize> =
                                s.iter().map(|&w| if w >= v { w + 1 } else { w }).collect();
                            lifted.push(v);
                            lifted.sort_unstable();
                            assert_eq!(naive_count(&after, &s), naive_count(&before, &lifted));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn delete_vertex_from_circle() {
    let d = delete_vertex(&circle_cover(6).unwrap(), 5).unwrap();
    assert_eq!(d.n(), 5);
    assert!(d.len() <= 3);
    assert!(verified(&d));
}

#[test]
fn star_addition_keeps_odd_cover() {
    for n in 3..=9 {
        let g = best_graph_cover(n).unwrap();
        let s = add_star_vertex(&g).unwrap();
        assert_eq!(s.len(), g.len() + 1);
        assert!(verified(&s));
    }
}

#[test]
fn product_factorization() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let k4 = best_graph_cover(4).unwrap();
    let random = |rng: &mut ChaCha8Rng| {
        let blocks = (0..3)
            .map(|_| Block::new(common::random_parts(4, 2, rng)).unwrap())
            .collect();
        Cover::new(4, 2, blocks).unwrap()
    };
    let pairs = vec![
        (k4.clone(), k4.clone()),
        (random(&mut rng), random(&mut rng)),
        (k4.clone(), random(&mut rng)),
    ];
    for (f, g) in pairs {
        let p = product_cover(&f, &g).unwrap();
        assert_eq!(p.len(), f.len() * g.len());
        let (fp, gp, pp) = (raw_parts(&f), raw_parts(&g), raw_parts(&p));
        for s in subsets(8, 4) {
            let in_a: Vec<usize> = s.iter().copied().filter(|&v| v < 4).collect();
            let in_b: Vec<usize> = s.iter().filter(|&&v| v >= 4).map(|&v| v - 4).collect();
            let expected = if in_a.len() == 2 {
                naive_count(&fp, &in_a) * naive_count(&gp, &in_b)
            } else {
                0
            };
            assert_eq!(naive_count(&pp, &s), expected, "{s:?}");
        }
    }
    let both_odd = product_cover(&k4, &k4).unwrap();
    for (s, c) in naive_counts(&both_odd) {
        let split = s.iter().filter(|&&v| v < 4).count() == 2;
        assert_eq!(c % 2 == 1, split);
    }
}

#[test]
fn extend_three_cover_membership() {
    let t = circle_cover(4).unwrap();
    let e = extend_three_cover(&t, &[0, 1, 2, 3], &[4, 5], 6).unwrap();
    assert_eq!(e.len(), 2);
    let (tp, ep) = (raw_parts(&t), raw_parts(&e));
    for s in subsets(6, 4) {
        let in_a: Vec<usize> = s.iter().copied().filter(|&v| v < 4).collect();
        let c = naive_count(&ep, &s);
        match in_a.len() {
            3 => assert_eq!(c, naive_count(&tp, &in_a)),
            _ => assert_eq!(c, 0, "{s:?}"),
        }
    }
}

#[test]
fn recursive_four_covers_verify() {
    for n in 4..=12 {
        let c = recursive_four_cover(n).unwrap();
        assert_eq!(c.len(), recursive_four_size(n).unwrap());
        assert!(verified(&c), "n = {n}");
    }
    let c16 = recursive_four_cover(16).unwrap();
    assert!(is_odd_cover(&c16).is_pass());
}

#[test]
fn best_cover_sizes() {
    assert_eq!(best_graph_cover(5).unwrap().len(), 3);
    assert_eq!(best_graph_cover(8).unwrap().len(), 4);
    assert_eq!(best_graph_cover(26).unwrap().len(), 13);
    assert_eq!(best_three_cover(10).unwrap().len(), 5);
    assert_eq!(best_three_cover(9).unwrap().len(), 4);
    assert_eq!(best_three_cover(7).unwrap().len(), 4);
    for n in 2..=17 {
        let g = best_graph_cover(n).unwrap();
        assert!(g.len() <= (n + 2) / 2, "n = {n}");
        assert!(verified(&g), "graph n = {n}");
    }
    for n in 3..=17 {
        assert!(verified(&best_three_cover(n).unwrap()), "three n = {n}");
    }
}

#[test]
fn every_construction_verifies() {
    for n in (4..=30).step_by(2) {
        assert!(is_odd_cover(&circle_cover(n).unwrap()).is_pass());
    }
    for n in [3, 9, 27] {
        assert!(is_odd_cover(&gf3_cover(n).unwrap()).is_pass());
    }
    for n in 3..=27 {
        assert!(is_odd_cover(&best_three_cover(n).unwrap()).is_pass());
    }
}
