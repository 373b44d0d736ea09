#![allow(dead_code)]

use mingenus::presentation::{Letter, Presentation, Word};
use proptest::prelude::*;

pub fn letters(max_gen: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(
        (0..max_gen, any::<bool>()).prop_map(|(g, inv)| Letter::new(g, inv)),
        0..=max_len,
    )
}

/// Random presentation with at most `max_gens` generators and `max_rels`
/// relators of raw length at most `max_len`.
pub fn presentation(max_gens: usize, max_rels: usize, max_len: usize) -> impl Strategy<Value = Presentation> {
    (0..=max_gens).prop_flat_map(move |n| {
        let rels = if n == 0 {
            Just(Vec::new()).boxed()
        } else {
            prop::collection::vec(letters(n, max_len).prop_map(Word::from_letters), 0..=max_rels).boxed()
        };
        rels.prop_map(move |r| Presentation::new((0..n).map(|i| format!("g{i}")), r).unwrap())
    })
}
