mod common;

use oddcover::{
    canonicalize, colex_rank, colex_unrank, contains_rset, cover_parity, incidence_vector,
    is_odd_cover, rsets, Block, Cover, ParityVector, RSet,
};
use proptest::prelude::*;

/// Raw parts for an r-partite block on `0..n`: a shuffled vertex order, the
/// first r vertices seeding one part each, the rest placed at random or left
/// out.
fn raw_block(n: usize, r: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    (
        Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        proptest::collection::vec(0..=r, n - r),
        Just((0..r).collect::<Vec<_>>()).prop_shuffle(),
    )
        .prop_map(move |(order, labels, seeds)| {
            let mut parts = vec![Vec::new(); r];
            for (i, &v) in order.iter().take(r).enumerate() {
                parts[seeds[i]].push(v);
            }
            for (&v, &l) in order[r..].iter().zip(&labels) {
                if l > 0 {
                    parts[l - 1].push(v);
                }
            }
            parts
        })
}

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=8).prop_flat_map(|n| (Just(n), 2..=n.min(4)))
}

fn block_on() -> impl Strategy<Value = (usize, usize, Vec<Vec<usize>>)> {
    shape().prop_flat_map(|(n, r)| (Just(n), Just(r), raw_block(n, r)))
}

fn family() -> impl Strategy<Value = Cover> {
    shape().prop_flat_map(|(n, r)| {
        proptest::collection::vec(raw_block(n, r), 0..6).prop_map(move |raws| {
            let blocks = raws.into_iter().map(|p| Block::new(p).unwrap()).collect();
            Cover::new(n, r, blocks).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn canonical_form_is_idempotent((_n, _r, raw) in block_on()) {
        let b = canonicalize(raw.clone()).unwrap();
        let again = canonicalize(b.parts().to_vec()).unwrap();
        prop_assert_eq!(&again, &b);
        for p in b.parts() {
            prop_assert!(p.windows(2).all(|w| w[0] < w[1]));
        }
        prop_assert!(b.parts().windows(2).all(|w| w[0][0] < w[1][0]));
        let mut reordered = raw;
        reordered.reverse();
        for p in reordered.iter_mut() {
            p.reverse();
        }
        prop_assert_eq!(canonicalize(reordered).unwrap(), b);
    }

    #[test]
    fn footprint_weight_is_product_of_part_sizes((n, _r, raw) in block_on()) {
        let b = Block::new(raw).unwrap();
        let v = incidence_vector(&b, n).unwrap();
        let product: usize = b.parts().iter().map(Vec::len).product();
        prop_assert_eq!(v.count_ones(), product);
        prop_assert_eq!(b.edge_count(), product as u128);
    }

    #[test]
    fn membership_dichotomy((n, r, raw) in block_on()) {
        let b = Block::new(raw).unwrap();
        let v = incidence_vector(&b, n).unwrap();
        for s in rsets(n, r) {
            let naive = common::naive_contains(b.parts(), s.elements());
            prop_assert_eq!(contains_rset(&b, &s).unwrap(), naive, "{}", s);
            prop_assert_eq!(v.get(s.colex_index()), naive);
        }
    }

    #[test]
    fn parity_is_linear(a in family(), extra in proptest::collection::vec(any::<prop::sample::Index>(), 0..4)) {
        let (n, r) = (a.n(), a.r());
        let mut expected = ParityVector::zeros(n, r);
        for b in a.blocks() {
            expected.xor_assign(&incidence_vector(b, n).unwrap());
        }
        prop_assert_eq!(&cover_parity(&a), &expected);

        // appending blocks already present flips exactly their footprints
        let mut blocks = a.blocks().to_vec();
        let mut flipped = expected.clone();
        if !blocks.is_empty() {
            for i in &extra {
                let b = blocks[i.index(a.len())].clone();
                flipped.xor_assign(&incidence_vector(&b, n).unwrap());
                blocks.push(b);
            }
        }
        let bigger = Cover::new(n, r, blocks).unwrap();
        prop_assert_eq!(cover_parity(&bigger), flipped);
    }

    #[test]
    fn verifier_matches_counting_oracle(c in family()) {
        let verdict = is_odd_cover(&c);
        prop_assert_eq!(verdict.is_pass(), common::naive_is_odd_cover(&c));
        let parts = common::raw_parts(&c);
        let first_even = rsets(c.n(), c.r()).find(|s| common::naive_count(&parts, s.elements()) % 2 == 0);
        prop_assert_eq!(verdict.witness().cloned(), first_even);
    }

    #[test]
    fn cover_json_round_trip(c in family()) {
        prop_assert_eq!(Cover::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn colex_round_trip(set in proptest::collection::btree_set(0usize..40, 2..6)) {
        let elements: Vec<usize> = set.into_iter().collect();
        let rank = colex_rank(&elements);
        prop_assert_eq!(colex_unrank(rank, elements.len()), elements.clone());
        let n = elements[elements.len() - 1] + 1;
        prop_assert_eq!(RSet::new(elements, n).unwrap().colex_index(), rank);
    }
}

#[test]
fn colex_enumeration_is_dense() {
    for n in 2..=9 {
        for r in 1..=n {
            for (i, s) in rsets(n, r).enumerate() {
                assert_eq!(s.colex_index(), i);
            }
            assert_eq!(rsets(n, r).count(), common::subsets(n, r).len());
        }
    }
}
