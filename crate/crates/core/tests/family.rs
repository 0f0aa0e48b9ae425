use complex_trees::family::{preset, preset_names, ParametricFamily};
use complex_trees::parse::{parse_alphabet, parse_complex};
use complex_trees::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn every_preset_loads_and_round_trips() {
    for name in preset_names().into_iter().filter(|n| !n.contains('<')) {
        let fam = preset(name).unwrap();
        if fam.is_symbolic() {
            let back = ParametricFamily::from_json(&fam.to_json()).unwrap();
            assert_eq!(back.len(), fam.len(), "{name}");
            assert_eq!(back.relations(), fam.relations(), "{name}");
            let z = fam.sample_admissible(1, 3).unwrap()[0];
            assert_eq!(back.letter_values(z).unwrap(), fam.letter_values(z).unwrap(), "{name}");
        }
    }
    assert!(matches!(preset("nope"), Err(_)));
}

#[test]
fn ngon_letters_are_roots_of_unity_times_z() {
    let fam = preset("ngon:4").unwrap();
    let v = fam.letter_values(c(0.5, 0.0)).unwrap();
    assert_eq!(v, vec![c(0.0, 0.5), c(-0.5, 0.0), c(0.0, -0.5), c(0.5, 0.0)]);
}

#[test]
fn conjugate_letters_evaluate_but_have_no_symbolic_form() {
    let fam = preset("conjugate").unwrap();
    assert_eq!(fam.letter_values(c(0.3, 0.4)).unwrap(), vec![c(0.3, 0.4), c(0.3, -0.4)]);
    assert!(matches!(
        fam.phi_symbolic(&complex_trees::FiniteWord::from_one_based(&[1, 2]).unwrap()),
        Err(Error::ConjugateFamilyUnsupported)
    ));
}

#[test]
fn pole_and_contraction_failures_are_domain_violations() {
    let fam = preset("ternary-up").unwrap();
    assert!(fam.eval(c(0.0, 0.0)).is_err());
    assert!(fam.eval(c(0.1, 0.0)).is_err());
    assert!(fam.is_admissible(c(0.0, 0.5)));
}

#[test]
fn malformed_family_files_are_rejected() {
    for text in [
        "{}",
        r#"{"n": 2, "letters": [{"num": [[0,0],[1,0]]}], "relations": []}"#,
        r#"{"n": 1, "letters": [{"num": [[0,0],[1,0]]}], "relations": []}"#,
        r#"{"n": 2, "letters": [{"num": [[0,0],[1,0]]}, {"num": [[1,0]], "den": [[0,0]]}], "relations": []}"#,
        r#"{"n": 2, "letters": [{"num": [[0,0],[1,0]]}, {"num": [[0.5,0]]}], "extra": 1, "relations": []}"#,
        r#"{"n": 2, "letters": [{"num": [[0,0],[1,0]]}, {"num": [[0.5,0]]}],
            "relations": [{"left": {"pre": [1], "per": [3]}, "right": {"pre": [2], "per": [1]}}]}"#,
    ] {
        assert!(ParametricFamily::from_json(text).is_err(), "{text}");
    }
}

#[test]
fn complex_expressions() {
    let close = |text: &str, z: Complex64| assert!((parse_complex(text).unwrap() - z).norm() < 1e-15, "{text}");
    close("(-1+i*sqrt(7))/4", c(-0.25, 7f64.sqrt() / 4.0));
    close("-i/2", c(0.0, -0.5));
    close("0.5i", c(0.0, 0.5));
    close("2^-2", c(0.25, 0.0));
    close("exp(i*pi)", c(-1.0, 0.0));
    close("1e-3+2E2j", c(1e-3, 200.0));
    for bad in ["", "1+", "sqrt(", "1/0", "((((", "2^^2", "foo", "1 2"] {
        assert!(parse_complex(bad).is_err(), "{bad:?}");
    }
    let deep = format!("{}1{}", "(".repeat(200), ")".repeat(200));
    assert!(parse_complex(&deep).is_err());
    assert_eq!(parse_alphabet("i/2, 1/2, -i/2").unwrap().len(), 3);
    assert!(parse_alphabet("0.5,0.5").is_err());
}

proptest! {
    #[test]
    fn parse_complex_never_panics(text in "[-+*/^()0-9.eijpisqrtx ]{0,40}") {
        let _ = parse_complex(&text);
    }

    #[test]
    fn samples_are_admissible(seed in 0u64..1000) {
        let fam = preset("binary-b2").unwrap();
        for z in fam.sample_admissible(8, seed).unwrap() {
            prop_assert!(fam.is_admissible(z));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn relations_found_at_a_parameter_hold_there(seed in 0u64..10_000) {
        let fam = preset("ternary-up").unwrap();
        let z = fam.sample_admissible(1, seed).unwrap()[0];
        let alphabet = fam.eval(z).unwrap();
        let rels = fam.relations_at(z, 3, 1e-9).unwrap();
        for r in &rels {
            prop_assert!(alphabet.check_relation(r).unwrap() <= 1e-9 * 2.0);
            prop_assert_ne!(r.left().first(), r.right().first());
        }
        // relation-free parameters are trivially stable
        if fam.is_relation_free(z, 3, 1e-9).unwrap() {
            prop_assert!(fam.is_relation_stable(z, 3, 1e-9).unwrap());
        }
    }
}

#[test]
fn tiny_letters_are_relation_free() {
    let fam = preset("ngon:3").unwrap();
    assert!(fam.is_relation_free(c(0.2, 0.1), 5, 1e-9).unwrap());
}
