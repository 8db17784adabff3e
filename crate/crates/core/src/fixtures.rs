//! Covers shipped with the library, with their known degeneration types.

use crate::degen::DegenType;

#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub p: u64,
    pub d: u32,
    /// Kummer generator `f` of `T^(p^2) = f`.
    pub f: &'static str,
    pub expected: DegenType,
}

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "mu-p2-torsor",
        p: 3,
        d: 1,
        f: "1+Z^2",
        expected: DegenType { j: 0, gamma1: 0, gamma2: 0, kappa: 0 },
    },
    Fixture {
        name: "pi-power-factor",
        p: 3,
        d: 1,
        f: "pi^9*(1+Z^2)",
        expected: DegenType { j: 0, gamma1: 0, gamma2: 0, kappa: 0 },
    },
    Fixture {
        name: "g-pi-2-torsor",
        p: 3,
        d: 1,
        f: "1+pi^9*(1+Z^2)",
        expected: DegenType { j: 1, gamma1: 3, gamma2: 1, kappa: 3 },
    },
    Fixture {
        name: "g-pi3-2-torsor",
        p: 3,
        d: 3,
        f: "1+pi^27*(1+Z^2)",
        expected: DegenType { j: 3, gamma1: 9, gamma2: 3, kappa: 9 },
    },
    Fixture {
        name: "non-extendible-4-1",
        p: 3,
        d: 3,
        f: "(1+pi^12*(1+Z^2))*(1+Z^2+pi^3*Z)^3",
        expected: DegenType { j: 0, gamma1: 4, gamma2: 1, kappa: 5 },
    },
    Fixture {
        name: "non-extendible-3-1",
        p: 3,
        d: 3,
        f: "(1+pi^9*(1+Z^2))*(1+Z^2+pi^3*Z)^3",
        expected: DegenType { j: 0, gamma1: 3, gamma2: 1, kappa: 4 },
    },
];

/// Generators `f` of p-covers `T^p = f` with their levels.
pub const ZP_FIXTURES: &[(u64, u32, &str, u32)] = &[
    (3, 1, "1+Z^2", 0),
    (3, 1, "1+pi^3*(1+Z^2)", 1),
    (3, 1, "1+pi^9*(1+Z^2)", 3),
    (3, 3, "1+pi^12*(1+Z^2)", 4),
];
