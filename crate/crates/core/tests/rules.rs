//! One case per evaluation, typing and value-typing rule.

mod common;

#[test]
fn rule_table_passes() {
    let cases = common::rule_cases();
    assert!(cases.len() >= 40, "only {} cases", cases.len());
    let failures: Vec<String> = cases
        .iter()
        .filter_map(|c| (c.run)().err().map(|e| format!("{} ({}): {}", c.rule, c.what, e)))
        .collect();
    assert!(failures.is_empty(), "failing cases:\n{}", failures.join("\n"));
}
