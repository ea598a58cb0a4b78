mod common;

use colift_core::cohomology::{check_condition, coh_dim, Condition, SystemSpec, Verdict};
use common::*;
use num_bigint::{BigInt, BigUint};

fn as_int(v: BigUint) -> BigInt {
    BigInt::from(v)
}

#[test]
fn dimensions_match_cech_oracle() {
    for n in 1..=4u32 {
        for d in -12..=12i64 {
            for q in 0..=n {
                let got = coh_dim(n, d, q);
                let want = cech_oracle(n as usize, d, q as usize);
                assert_eq!(got, BigUint::from(want), "n={n} d={d} q={q}");
            }
        }
    }
}

#[test]
fn euler_characteristic_is_the_hilbert_polynomial() {
    for n in 1..=4u32 {
        for d in -12..=12i64 {
            let chi: BigInt = (0..=n)
                .map(|q| if q % 2 == 0 { as_int(coh_dim(n, d, q)) } else { -as_int(coh_dim(n, d, q)) })
                .sum();
            assert_eq!(chi, BigInt::from(hilbert_polynomial(i64::from(n), d)), "n={n} d={d}");
        }
    }
}

#[test]
fn serre_symmetry() {
    for n in 1..=6u32 {
        for d in -20..=20i64 {
            assert_eq!(coh_dim(n, d, 0), coh_dim(n, -d - i64::from(n) - 1, n), "n={n} d={d}");
        }
    }
}

fn systems() -> Vec<SystemSpec> {
    let mut out = Vec::new();
    for n in 1..=3 {
        out.push(SystemSpec::standard(n));
        out.push(SystemSpec::shifted_sum(n));
        for d in [-4, -1, 0, 2] {
            out.push(SystemSpec::constant(n, d));
        }
    }
    out
}

#[test]
fn termwise_conditions_imply_colimit_ones() {
    let twists: Vec<i64> = (-6..=2).collect();
    for s in systems() {
        let pairs = [(Condition::G, Condition::GPrime), (Condition::V(0), Condition::VPrime(0)), (Condition::V(1), Condition::VPrime(1))];
        for (strong, weak) in pairs {
            let a = check_condition(&s, strong, &twists, 8).unwrap();
            let b = check_condition(&s, weak, &twists, 8).unwrap();
            for d in &twists {
                if a.twist(*d).unwrap().verdict.holds() {
                    assert!(b.twist(*d).unwrap().verdict.holds(), "{s} {strong} holds but {weak} does not at twist {d}");
                }
            }
        }
    }
}

#[test]
fn standard_system_thresholds() {
    let twists: Vec<i64> = (-8..=0).collect();
    for n in 1..=3 {
        let s = SystemSpec::standard(n);
        for cond in [Condition::G, Condition::V(0)] {
            let report = check_condition(&s, cond, &twists, 12).unwrap();
            for t in &report.twists {
                assert!(matches!(t.verdict, Verdict::Threshold { .. }), "{s} {cond} twist {}: {}", t.twist, t.verdict);
            }
        }
        // G needs d + k >= 0, so the threshold is exactly -d
        let g = check_condition(&s, Condition::G, &twists, 12).unwrap();
        for d in &twists {
            assert_eq!(g.twist(*d).unwrap().verdict, Verdict::Threshold { level: (-d) as usize });
        }
    }
}
