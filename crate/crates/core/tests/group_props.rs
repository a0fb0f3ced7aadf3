use hecke_core::refl_group::{sort_char, GroupElem, Perm, TChar};
use proptest::prelude::*;

fn perm(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

#[test]
fn reduced_words_are_reduced_and_confluent() {
    for n in 1..=5 {
        for w in Perm::all(n) {
            let word = w.reduced_word();
            assert_eq!(word.len(), w.length());
            assert_eq!(word.len(), w.inversion_set().len());
            assert_eq!(Perm::from_word(n, &word), w);
        }
        let w0 = Perm::longest(n);
        assert_eq!(w0.length(), n * (n - 1) / 2);
        assert_eq!(w0.compose(&w0), Perm::identity(n));
    }
}

#[test]
fn braid_relations_hold() {
    let n = 4;
    let s = |i| Perm::simple(n, i);
    assert_eq!(s(0).compose(&s(1)).compose(&s(0)), s(1).compose(&s(0)).compose(&s(1)));
    assert_eq!(s(0).compose(&s(2)), s(2).compose(&s(0)));
    assert!(s(1).compose(&s(1)).is_identity());
}

#[test]
fn group_order_and_inverses() {
    for (r, n) in [(1u32, 3usize), (2, 2), (3, 2), (2, 3)] {
        let all = GroupElem::enumerate(r, n);
        let expected = (r as usize).pow(n as u32) * (1..=n).product::<usize>();
        assert_eq!(all.len(), expected);
        for g in &all {
            assert!(g.mul(&g.inverse()).is_identity());
        }
    }
}

proptest! {
    #[test]
    fn length_is_multiplicative_in_sign(a in perm(5), b in perm(5)) {
        prop_assert_eq!(a.compose(&b).sign(), a.sign() * b.sign());
        prop_assert_eq!(a.compose(&b).inverse(), b.inverse().compose(&a.inverse()));
    }

    #[test]
    fn twisting_characters_is_an_action(a in perm(4), b in perm(4), idx in prop::collection::vec(0u32..3, 4)) {
        let mu = TChar::new(3, idx);
        prop_assert_eq!(mu.twist(&a.compose(&b)), mu.twist(&b).twist(&a));
    }

    #[test]
    fn sorting_produces_sorted_blocks(idx in prop::collection::vec(0u32..4, 1..6)) {
        let mu = TChar::new(4, idx);
        let sorted = sort_char(&mu);
        prop_assert!(sorted.mu.is_sorted());
        prop_assert_eq!(mu.twist(&sorted.sigma), sorted.mu.clone());
        let covered: usize = sorted.blocks.iter().map(|b| b.len()).sum();
        prop_assert_eq!(covered, mu.n());
    }

    #[test]
    fn group_multiplication_associates(
        (r, x, y, z) in (1u32..=3).prop_flat_map(|r| {
            let all = GroupElem::enumerate(r, 3);
            let k = all.len();
            (Just(r), 0..k, 0..k, 0..k)
        })
    ) {
        let all = GroupElem::enumerate(r, 3);
        let (a, b, c) = (&all[x], &all[y], &all[z]);
        prop_assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
        prop_assert_eq!(a.mul(b).det(), &a.det() * &b.det());
    }
}
