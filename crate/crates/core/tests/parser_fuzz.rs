//! Fuzzing and round-trip tests for the circuit language front end.

use paragrade::circuit::{parse, parse_bytes, Program};
use paragrade::ququart::GATE_NAMES;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PIECES: [&str; 24] = [
    "ququart", "param", "gate", "qplate", "pi", "declare-interface", "assert-grade", "measure", "q", "r", "t", "Xb",
    "Rza", "HWP", "(", ")", ",", ";", "=", "0", "1", "-0.5", "(1,0)", "#c\n",
];

fn check_no_silent_failure(src: &[u8]) {
    if let Err(diags) = parse_bytes(src) {
        assert!(!diags.is_empty(), "rejected {:?} without a diagnostic", String::from_utf8_lossy(src));
        for d in &diags {
            assert!(d.span.line >= 1 && d.span.col >= 1);
            assert!(d.to_string().starts_with("error[E0"));
        }
    }
}

#[test]
fn random_bytes_never_panic() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100_000 {
        let len = rng.random_range(0..48);
        let bytes: Vec<u8> = (0..len).map(|_| rng.random()).collect();
        check_no_silent_failure(&bytes);
    }
}

#[test]
fn random_token_soup_never_panics() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20_000 {
        let n = rng.random_range(0..20);
        let src: Vec<&str> = (0..n).map(|_| PIECES[rng.random_range(0..PIECES.len())]).collect();
        check_no_silent_failure(src.join(" ").as_bytes());
    }
}

/// A well-formed program drawn from `rng`.
fn random_program(rng: &mut ChaCha8Rng) -> String {
    let regs = rng.random_range(1..4);
    let params = rng.random_range(0..3);
    let mut out = String::new();
    for r in 0..regs {
        out += &format!("ququart q{r};\n");
    }
    for p in 0..params {
        out += &format!("param t{p} = {};\n", rng.random_range(-10.0..10.0f64));
    }
    for _ in 0..rng.random_range(0..12) {
        let q = format!("q{}", rng.random_range(0..regs));
        let line = match rng.random_range(0..5) {
            0 => {
                let (name, angled) = GATE_NAMES[rng.random_range(0..GATE_NAMES.len())];
                match (angled, params > 0 && rng.random_bool(0.5)) {
                    (false, _) => format!("gate {name} {q};"),
                    (true, true) => format!("gate {name}(t{}) {q};", rng.random_range(0..params)),
                    (true, false) => format!("gate {name}({}) {q};", rng.random_range(-7.0..7.0f64)),
                }
            }
            1 => format!("qplate pi {q};"),
            2 => format!("declare-interface {};", GATE_NAMES[rng.random_range(0..GATE_NAMES.len())].0),
            3 => format!("assert-grade {q} ({},{});", rng.random_range(0..2), rng.random_range(0..2)),
            _ => format!("measure {q};"),
        };
        out += &line;
        out.push('\n');
    }
    out
}

fn assert_round_trip(src: &str) -> Program {
    let p = parse(src).unwrap_or_else(|d| panic!("{src}\n{d:?}"));
    let printed = p.to_string();
    let again = parse(&printed).unwrap();
    assert!(p.same_structure(&again), "{src}\nprinted as\n{printed}");
    assert_eq!(again.to_string(), printed);
    p
}

#[test]
fn seeded_corpus_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..50 {
        assert_round_trip(&random_program(&mut rng));
    }
}

#[test]
fn aliases_keep_their_spelling() {
    let src = "ququart q;\ngate CNOT q;\ngate qplate q;\n";
    assert_eq!(assert_round_trip(src).to_string(), src);
}

proptest! {
    #[test]
    fn generated_programs_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        assert_round_trip(&random_program(&mut rng));
    }

    #[test]
    fn any_string_is_parsed_or_diagnosed(s in "\\PC{0,64}") {
        check_no_silent_failure(s.as_bytes());
    }

    #[test]
    fn inserting_a_stray_symbol_is_reported(seed in any::<u64>(), sym in prop::sample::select(vec!["@", "$", "!", "{"])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let src = random_program(&mut rng);
        let bad = format!("{src}{sym}\n");
        let diags = parse(&bad).unwrap_err();
        let line = src.lines().count() as u32 + 1;
        prop_assert!(diags.iter().any(|d| d.code.as_str() == "E001" && d.span.line == line));
    }
}
