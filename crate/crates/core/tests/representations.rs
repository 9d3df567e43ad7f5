use northshield::json::JsonError;
use northshield::linrep::{builtin_northshield_rep, load_rep, verify_rep, RepError, Verification};
use northshield::quadfield::QuadRat;
use northshield::sequences::northshield;

fn fixture(name: &str) -> String {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

#[test]
fn northshield_file_matches_builtin_and_oracle() {
    let rep = load_rep(&fixture("northshield.json")).unwrap();
    assert_eq!(rep, builtin_northshield_rep());
    let check = verify_rep(&rep, |n| QuadRat::from(northshield(n)), 1000);
    assert_eq!(check, Verification::Pass { checked: 1000 });
}

#[test]
fn matrix_count_must_equal_base() {
    match load_rep(&fixture("two_matrices_base3.json")) {
        Err(RepError::DimensionMismatch {
            field,
            expected: 3,
            found: 2,
        }) => assert_eq!(field, "matrices"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn constant_representation() {
    let rep = load_rep(&fixture("constant.json")).unwrap();
    for n in [0, 1, 2, 17, 1 << 40] {
        assert_eq!(rep.eval(n), QuadRat::one());
    }
}

#[test]
fn error_kinds_are_distinct() {
    assert!(matches!(
        load_rep(&fixture("base_one.json")),
        Err(RepError::BaseTooSmall { base: 1 })
    ));
    assert!(matches!(
        load_rep(&fixture("fractional_entry.json")),
        Err(RepError::Field(JsonError::NonInteger { .. }))
    ));
    assert!(matches!(
        load_rep(&fixture("zero_denominator.json")),
        Err(RepError::Field(JsonError::BadDenominator { .. }))
    ));
    assert!(matches!(load_rep("{\"base\": 2"), Err(RepError::Malformed(_))));
    assert!(matches!(
        load_rep("{\"base\": 2, \"dim\": 1, \"v\": [1], \"matrices\": []}"),
        Err(RepError::Field(JsonError::Missing { .. }))
    ));
}

#[test]
fn error_names_the_field() {
    let err = load_rep(&fixture("fractional_entry.json")).unwrap_err();
    assert!(err.to_string().contains("matrices[0][0][0]"), "{err}");
}
