//! Acceptance suite: one test per graded criterion, each asserting its
//! runtime bound and printing a PASS line (visible with --nocapture).

use std::time::{Duration, Instant};

use dynkin_count::cli::{cmd_series, cmd_table, TableOutcome};
use dynkin_count::counting::{
    e_breakdown, e_closed, e_of, multinomial, verify_uniform_formula, Count,
    RecursiveCounter,
};
use dynkin_count::diagram::{
    all_connected_up_to_rank, parse_diagram, ConnectedDiagram, Diagram, Family,
};
use dynkin_count::weyl::{build_root_system, Budget, SearchOutcome};

fn pass(number: u32, label: &str, start: Instant, bound: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < bound,
        "criterion {number:02} ({label}): exceeded {bound:?} at {elapsed:?}"
    );
    println!(
        "criterion {number:02} ({label}): PASS in {} ms",
        elapsed.as_millis()
    );
}

fn connected(spec: &str) -> ConnectedDiagram {
    parse_diagram(spec).unwrap().single_component().unwrap()
}

fn u128_pow(base: u128, exponent: u32) -> u128 {
    (0..exponent).fold(1u128, |acc, _| acc * base)
}

#[test]
fn criterion_01_closed_forms_reproduce_the_golden_table() {
    let start = Instant::now();
    for n in 1..=12u32 {
        let a = ConnectedDiagram::new(Family::A, n as usize).unwrap();
        assert_eq!(e_closed(&a), Count::from(u128_pow(n as u128 + 1, n - 1)));
    }
    for n in 2..=12u32 {
        let b = ConnectedDiagram::new(Family::B, n as usize).unwrap();
        let c = ConnectedDiagram::new(Family::C, n as usize).unwrap();
        let d = ConnectedDiagram::new(Family::D, n as usize).unwrap();
        assert_eq!(e_closed(&b), Count::from(u128_pow(n as u128, n)));
        assert_eq!(e_closed(&c), Count::from(u128_pow(n as u128, n)));
        assert_eq!(e_closed(&d), Count::from(2 * u128_pow(n as u128 - 1, n)));
    }
    let exceptional = [
        ("E6", 41_472u64),
        ("E7", 1_062_882),
        ("E8", 37_968_750),
        ("F4", 432),
        ("G2", 6),
    ];
    for (spec, expected) in exceptional {
        assert_eq!(e_closed(&connected(spec)), Count::from(expected), "{spec}");
    }
    pass(1, "closed forms reproduce the golden table", start, Duration::from_secs(1));
}

#[test]
fn criterion_02_recursion_agrees_with_closed_forms() {
    let start = Instant::now();
    let mut counter = RecursiveCounter::new();
    for d in all_connected_up_to_rank(12) {
        let diagram = Diagram::from_component(d);
        assert_eq!(counter.count(&diagram), e_of(&diagram), "{d}");
    }
    let mut state = 0xDECA_FBAD_u64;
    let mut next = |modulus: usize| {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 33) as usize) % modulus
    };
    for _ in 0..200 {
        let mut components = Vec::new();
        let mut remaining = 16usize;
        let pieces = 1 + next(4);
        for _ in 0..pieces {
            if remaining == 0 {
                break;
            }
            let family = Family::ALL[next(7)];
            let legal: Vec<usize> =
                (1..=remaining).filter(|&r| family.admits_rank(r)).collect();
            if legal.is_empty() {
                continue;
            }
            let rank = legal[next(legal.len())];
            components.push(ConnectedDiagram::new(family, rank).unwrap());
            remaining -= rank;
        }
        let diagram = Diagram::new(components);
        let ranks: Vec<u64> = diagram.components().iter().map(|c| c.rank() as u64).collect();
        let shuffled: Count = diagram
            .components()
            .iter()
            .fold(multinomial(&ranks), |acc, c| acc * e_closed(c));
        assert_eq!(counter.count(&diagram), shuffled, "{diagram}");
    }
    pass(2, "recursion agrees with closed forms", start, Duration::from_secs(10));
}

#[test]
fn criterion_03_uniform_formula_is_exact_up_to_rank_twelve() {
    let start = Instant::now();
    let diagrams = all_connected_up_to_rank(12);
    for d in &diagrams {
        verify_uniform_formula(d).unwrap();
    }
    assert_eq!(diagrams.len(), 50);
    pass(3, "uniform formula is exact up to rank twelve", start, Duration::from_secs(1));
}

#[test]
fn criterion_04_weyl_search_matches_closed_forms() {
    let start = Instant::now();
    let small = [
        "A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "C3", "D4", "D5", "G2", "F4",
    ];
    for spec in small {
        let diagram = connected(spec);
        let system = build_root_system(&diagram);
        match system.count_chain_factorizations(Budget::Low) {
            SearchOutcome::Complete { count, branches } => {
                assert_eq!(count, e_closed(&diagram), "{spec}");
                assert!(branches <= Budget::Low.branch_limit(), "{spec}");
            }
            SearchOutcome::BudgetExhausted { limit } => {
                panic!("{spec} must fit the low budget of {limit}")
            }
        }
    }
    assert!(
        start.elapsed() < Duration::from_secs(60),
        "small types exceeded their bound"
    );
    let e6 = build_root_system(&connected("E6"));
    match e6.count_chain_factorizations(Budget::High) {
        SearchOutcome::Complete { count, .. } => {
            assert_eq!(count, Count::from(41_472u64));
        }
        SearchOutcome::BudgetExhausted { limit } => {
            panic!("E6 must fit the high budget of {limit}")
        }
    }
    pass(4, "Weyl search matches closed forms", start, Duration::from_secs(600));
}

#[test]
fn criterion_05_count_is_independent_of_the_coxeter_element() {
    let start = Instant::now();
    for spec in ["A3", "B3", "D4"] {
        let system = build_root_system(&connected(spec));
        let n = system.rank();
        let forward: Vec<usize> = (1..=n).collect();
        let reverse: Vec<usize> = (1..=n).rev().collect();
        let mut swapped = forward.clone();
        swapped.swap(0, 1);
        let counts: Vec<Count> = [forward, reverse, swapped]
            .iter()
            .map(|order| {
                let c = system.coxeter_element(order);
                match system.count_factorizations_of(&c, Budget::Low) {
                    SearchOutcome::Complete { count, .. } => count,
                    SearchOutcome::BudgetExhausted { .. } => panic!("{spec}: budget"),
                }
            })
            .collect();
        assert_eq!(counts[0], counts[1], "{spec}");
        assert_eq!(counts[0], counts[2], "{spec}");
        assert_eq!(counts[0], e_closed(&connected(spec)), "{spec}");
    }
    pass(5, "count is independent of the Coxeter element", start, Duration::from_secs(60));
}

#[test]
fn criterion_06_convolution_identities_hold_through_order_twenty() {
    let start = Instant::now();
    let order_twenty = cmd_series(20);
    assert!(order_twenty.all_ok);
    for identity in &order_twenty.identities {
        assert_eq!(identity.first_failure, None, "{}", identity.label);
    }
    let order_four = cmd_series(4);
    let coeffs: Vec<&str> = order_four
        .identities
        .iter()
        .map(|i| i.coeff_at_order.as_str())
        .collect();
    assert_eq!(coeffs, vec!["432", "625", "256"]);
    pass(6, "convolution identities hold through order twenty", start, Duration::from_secs(1));
}

#[test]
fn criterion_07_abel_expansion_collapses_on_the_full_grid() {
    let start = Instant::now();
    let mut checks = 0u64;
    for x in -5i64..=5 {
        if x == 0 {
            continue;
        }
        for y in -5i64..=5 {
            for z in -3i64..=3 {
                for n in 0..=8u32 {
                    let expected =
                        num_traits::pow(num_bigint::BigInt::from(x + y), n as usize);
                    assert_eq!(
                        dynkin_count::series::abel_sum(x, y, z, n).unwrap(),
                        expected,
                        "x={x} y={y} z={z} n={n}"
                    );
                    checks += 1;
                }
            }
        }
    }
    assert_eq!(checks, 10 * 11 * 7 * 9);
    pass(7, "Abel expansion collapses on the full grid", start, Duration::from_secs(5));
}

#[test]
fn criterion_08_sequence_table_matches_the_reference_values() {
    let start = Instant::now();
    let expected: [(u64, u64, u64); 11] = [
        (1, 1, 2),
        (1, 1, 0),
        (3, 4, 2),
        (16, 27, 16),
        (125, 256, 162),
        (1296, 3125, 2048),
        (16807, 46656, 31250),
        (262144, 823543, 559872),
        (4782969, 16777216, 11529602),
        (100000000, 387420489, 268435456),
        (2357947691, 10000000000, 6973568802),
    ];
    let outcome = cmd_table("sequences", Some(10)).unwrap();
    let TableOutcome::Sequences { rows, .. } = &outcome else {
        panic!("wrong table kind");
    };
    assert_eq!(rows.len(), expected.len());
    for (row, (a, b, dd)) in rows.iter().zip(expected) {
        assert_eq!(row.a, a.to_string(), "A({})", row.n);
        assert_eq!(row.b, b.to_string(), "B({})", row.n);
        assert_eq!(row.d_doubled, dd.to_string(), "2D({})", row.n);
    }
    let text = outcome.to_text();
    for needle in ["2_357_947_691", "10_000_000_000", "6_973_568_802"] {
        assert!(text.contains(needle), "missing {needle}");
    }
    let output = assert_cmd::Command::cargo_bin("dynkin-count")
        .unwrap()
        .args(["table", "sequences", "10"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().skip(1).collect();
    assert_eq!(lines.len(), expected.len());
    for (line, (a, b, dd)) in lines.iter().zip(expected) {
        let values: Vec<u64> = line
            .split_whitespace()
            .skip(1)
            .map(|token| token.replace('_', "").parse().unwrap())
            .collect();
        assert_eq!(values, vec![a, b, dd], "line {line:?}");
    }
    pass(8, "sequence table matches the reference values", start, Duration::from_secs(1));
}

#[test]
fn criterion_09_e7_breakdown_reports_the_corrected_d6_value() {
    let start = Instant::now();
    let breakdown = e_breakdown(&connected("E7"));
    let d6_row = breakdown
        .rows
        .iter()
        .find(|r| r.deleted.to_string() == "D6")
        .expect("deleting vertex 2 of E7 leaves D6");
    assert_eq!(d6_row.vertex, 2);
    assert_eq!(d6_row.value, Count::from(31_250u64));
    assert_eq!(breakdown.total, Count::from(1_062_882u64));
    let sum: Count = breakdown.rows.iter().map(|r| &r.value).sum();
    assert_eq!(sum, Count::from(118_098u64));
    pass(9, "E7 breakdown reports the corrected D6 value", start, Duration::from_secs(1));
}

#[test]
fn criterion_10_root_systems_validate_up_to_rank_eight() {
    let start = Instant::now();
    for diagram in all_connected_up_to_rank(8) {
        let system = build_root_system(&diagram);
        let expected = diagram.rank() as u64 * diagram.coxeter_number() / 2;
        assert_eq!(
            system.positive_roots().len() as u64,
            expected,
            "{diagram}: positive roots"
        );
        let c = system.standard_coxeter_element();
        assert_eq!(
            system.reflection_length(&c),
            diagram.rank(),
            "{diagram}: Coxeter element length"
        );
    }
    pass(10, "root systems validate up to rank eight", start, Duration::from_secs(10));
}
