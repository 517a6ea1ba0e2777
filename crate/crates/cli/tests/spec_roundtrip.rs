use morphic_cli::spec::{parse_spec, SpecDocument};
use proptest::prelude::*;

fn letter_name() -> impl Strategy<Value = String> {
    "[a-z0-9][a-z0-9_]{0,3}"
}

fn document() -> impl Strategy<Value = SpecDocument> {
    prop::collection::btree_set(letter_name(), 1..5).prop_flat_map(|set| {
        let alphabet: Vec<String> = set.into_iter().collect();
        let n = alphabet.len();
        let pick = prop::sample::select(alphabet.clone());
        (
            Just(alphabet),
            pick.clone(),
            prop::collection::vec(prop::collection::vec(pick.clone(), 0..4), n),
            prop::option::of(prop::collection::vec(
                prop::sample::select(vec!["a", "b", "c"]),
                n,
            )),
            prop::option::of("[a-z][a-z-]{0,8}"),
        )
            .prop_map(|(alphabet, start, rules, code, name)| SpecDocument {
                name,
                expect: None,
                alphabet,
                start,
                rules,
                code: code.map(|c| c.into_iter().map(String::from).collect()),
            })
    })
}

proptest! {
    #[test]
    fn parse_after_print_is_identity(doc in document()) {
        let text = doc.to_text();
        let back = parse_spec(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_text(), text);
    }

    #[test]
    fn parser_never_panics(text in "[a-z0-9:>\\- #\n]{0,80}") {
        let _ = parse_spec(&text);
    }
}
