//! Printing then parsing gives back the same syntax tree.

mod common;

use act::metatheory::gen::{gen_spec, GenRng};
use act::metatheory::GenConfig;
use act::parser::parse_spec;
use act::syntax::pretty::spec_to_string;
use proptest::prelude::*;
use rand::SeedableRng;

#[test]
fn corpus_round_trips() {
    for (name, src) in common::corpus() {
        let spec = parse_spec(&src).unwrap_or_else(|d| panic!("{}: {:?}", name, d));
        let printed = spec_to_string(&spec);
        let again = parse_spec(&printed).unwrap_or_else(|d| panic!("{} reprinted: {:?}\n{}", name, d, printed));
        assert_eq!(spec, again, "{}", name);
        assert_eq!(printed, spec_to_string(&again), "{}: printing is not idempotent", name);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_specs_round_trip(seed in any::<u64>()) {
        let spec = gen_spec(&mut GenRng::seed_from_u64(seed), &GenConfig::default());
        let printed = spec_to_string(&spec);
        let again = parse_spec(&printed).map_err(|d| TestCaseError::fail(format!("{:?}\n{}", d, printed)))?;
        prop_assert_eq!(spec, again);
    }
}

/// The parsed erc20-ish spec, as JSON, matches the checked-in tree.
/// Set `ACT_BLESS=1` to rewrite it.
#[test]
fn erc20_ast_golden() {
    let spec = parse_spec(&common::corpus_src("erc20-ish")).unwrap();
    let json = act::json::to_pretty(&spec);
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/erc20-ish.ast.json");
    if std::env::var_os("ACT_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &json).unwrap();
    }
    let want = std::fs::read_to_string(&path).expect("golden file; run with ACT_BLESS=1 to create it");
    assert_eq!(json, want);
}
