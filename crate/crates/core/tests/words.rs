mod common;

use mingenus::presentation::{expand_commutator, free_reduce, parse_presentation, Letter, Word};
use proptest::prelude::*;

const DEGREE: usize = 5;
type Perm = [usize; DEGREE];

fn compose(a: &Perm, b: &Perm) -> Perm {
    // apply a, then b
    let mut out = [0; DEGREE];
    for i in 0..DEGREE {
        out[i] = b[a[i]];
    }
    out
}

fn inverse(a: &Perm) -> Perm {
    let mut out = [0; DEGREE];
    for i in 0..DEGREE {
        out[a[i]] = i;
    }
    out
}

fn eval(letters: &[Letter], images: &[Perm]) -> Perm {
    let mut acc: Perm = std::array::from_fn(|i| i);
    for l in letters {
        let p = images[l.generator];
        let p = if l.inverse { inverse(&p) } else { p };
        acc = compose(&acc, &p);
    }
    acc
}

fn perm() -> impl Strategy<Value = Perm> {
    Just(std::array::from_fn::<usize, DEGREE, _>(|i| i))
        .prop_shuffle()
        .prop_map(|v| v)
}

fn images() -> impl Strategy<Value = Vec<Perm>> {
    prop::collection::vec(perm(), 3)
}

proptest! {
    #[test]
    fn reduce_is_idempotent_and_reduced(ls in common::letters(3, 40)) {
        let w = free_reduce(&ls);
        prop_assert_eq!(free_reduce(w.letters()), w.clone());
        for pair in w.letters().windows(2) {
            prop_assert!(!(pair[0].generator == pair[1].generator && pair[0].inverse != pair[1].inverse));
        }
    }

    #[test]
    fn reduce_preserves_permutation_value(ls in common::letters(3, 40), imgs in images()) {
        prop_assert_eq!(eval(free_reduce(&ls).letters(), &imgs), eval(&ls, &imgs));
    }

    #[test]
    fn word_ops_are_homomorphic(
        a in common::letters(3, 16),
        b in common::letters(3, 16),
        k in -6i64..=6,
        imgs in images(),
    ) {
        let (u, v) = (Word::from_letters(a), Word::from_letters(b));
        let (pu, pv) = (eval(u.letters(), &imgs), eval(v.letters(), &imgs));
        prop_assert_eq!(eval(u.concat(&v).letters(), &imgs), compose(&pu, &pv));
        prop_assert_eq!(eval(u.invert().letters(), &imgs), inverse(&pu));
        let mut expected: Perm = std::array::from_fn(|i| i);
        let base = if k < 0 { inverse(&pu) } else { pu };
        for _ in 0..k.unsigned_abs() {
            expected = compose(&expected, &base);
        }
        prop_assert_eq!(eval(u.power(k).letters(), &imgs), expected);
        let c = expand_commutator(&u, &v);
        prop_assert_eq!(
            eval(c.letters(), &imgs),
            compose(&compose(&compose(&pu, &pv), &inverse(&pu)), &inverse(&pv))
        );
    }

    #[test]
    fn group_laws(a in common::letters(4, 20), k in 0i64..6) {
        let w = Word::from_letters(a);
        prop_assert!(w.concat(&w.invert()).is_empty());
        prop_assert_eq!(w.power(3), w.concat(&w.concat(&w)));
        prop_assert_eq!(w.power(-k), w.power(k).invert());
        prop_assert_eq!(w.power(k + 1), w.power(k).concat(&w));
    }

    #[test]
    fn display_reparses(p in common::presentation(4, 4, 12)) {
        let again = parse_presentation(&p.to_string()).unwrap();
        prop_assert_eq!(again, p);
    }

    #[test]
    fn parser_never_panics(s in "[<>|,()\\[\\]^ xyz0-9+-]{0,40}") {
        let _ = parse_presentation(&s);
    }
}

#[test]
fn grammar_corpus_round_trips() {
    let corpus = [
        "< x, y, z | x^3 y^-2, [y,z] >",
        "<x|x^5>",
        "< | >",
        "< x | >",
        "<a,b|>",
        "< a | a a^-1 >",
        "<a,b,c | [a,[b,c]], (a b)^-3 c, ()>",
        "<s,t | s^2, t^3, (s t)^7>",
        "  <  p_1 , q2 |  p_1 ^ 2 ,  q2^ -1 p_1 > ",
        "<a | a^+4>",
    ];
    for text in corpus {
        let p = parse_presentation(text).unwrap_or_else(|e| panic!("{text}: {e}"));
        assert_eq!(parse_presentation(&p.to_string()).unwrap(), p, "{text}");
    }
}
