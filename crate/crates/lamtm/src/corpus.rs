//! The machines shipped with the repository, embedded from `machines/`.
//!
//! Together the three machines cover every transition-action combination:
//! input moves -1/0/+1, work moves left/stay/right with writes, the
//! boundary markers, and blank materialization on both sides.

use crate::machine::{parse_machine, Machine};

pub const PARITY_TM: &str = include_str!("../../../machines/parity.tm");
pub const EQ101_TM: &str = include_str!("../../../machines/eq101.tm");
pub const FIRSTLAST_TM: &str = include_str!("../../../machines/firstlast.tm");

/// Accepts iff the payload has an odd number of 1s.
pub fn parity() -> Machine {
    parse_machine(PARITY_TM).expect("embedded machine parses")
}

/// Accepts iff the payload is exactly "101".
pub fn eq_fixed() -> Machine {
    parse_machine(EQ101_TM).expect("embedded machine parses")
}

/// Accepts iff the first payload bit equals the last.
pub fn first_last() -> Machine {
    parse_machine(FIRSTLAST_TM).expect("embedded machine parses")
}

/// All shipped machines with their source names.
pub fn sources() -> Vec<(&'static str, &'static str)> {
    vec![
        ("parity", PARITY_TM),
        ("eq101", EQ101_TM),
        ("firstlast", FIRSTLAST_TM),
    ]
}

/// The reference predicates the shipped machines implement, used as
/// oracles in tests.
pub fn reference_predicate(name: &str, payload: &str) -> bool {
    match name {
        "parity" => payload.chars().filter(|&c| c == '1').count() % 2 == 1,
        "eq101" => payload == "101",
        "firstlast" => {
            let first = payload.chars().next();
            let last = payload.chars().last();
            first == last || payload.len() <= 1
        }
        _ => panic!("unknown corpus machine {name}"),
    }
}

/// All shipped machines, parsed.
pub fn machines() -> Vec<(&'static str, Machine)> {
    vec![
        ("parity", parity()),
        ("eq101", eq_fixed()),
        ("firstlast", first_last()),
    ]
}
