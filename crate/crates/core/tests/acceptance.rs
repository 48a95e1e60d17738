//! Acceptance suite: one PASS/FAIL line per criterion, exact integer
//! equality throughout, whole run under five seconds.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dolbeault::*;

const RANDOM_SPECS: usize = 1000;
const SEED: u64 = 0x5eed_b10e;
const TIME_BUDGET: Duration = Duration::from_secs(5);

type Outcome = std::result::Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn proj(n: usize, k: i64) -> CohomologyTable {
    projective_space_table(ProjectiveTwistSpec { n, k }).unwrap()
}

fn pt() -> CohomologyTable {
    point_table(1).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn new_positive_example() -> Outcome {
    for n in 3..=5 {
        let blown = blow_up(&BlowUpSpec::new(proj(n, 1), pt(), n as i64).unwrap()).unwrap();
        for p in 0..=n {
            for q in (0..=n).filter(|&q| q != p) {
                ensure(blown.at(p, q) == 0, || {
                    format!("n={n}: h^{{{p},{q}}} = {}", blown.at(p, q))
                })?;
            }
        }
    }
    Ok("n in {3,4,5}: every off-diagonal cell is 0".into())
}

fn ramanujam_example() -> Outcome {
    let mut cells = 0;
    for n in 3..=4 {
        for m in 1..=2 {
            let blown = blow_up(&BlowUpSpec::new(proj(n, m), pt(), n as i64).unwrap()).unwrap();
            for p in 1..n {
                ensure(blown.at(p, p) == 1, || {
                    format!("n={n} m={m}: h^{{{p},{p}}} = {}", blown.at(p, p))
                })?;
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} diagonal cells equal 1"))
}

fn curve_center_example() -> Outcome {
    let line = curve_table(CurveBundleSpec::explicit(0, 1)).unwrap();
    let blown = blow_up(&BlowUpSpec::new(proj(3, 1), line, 2).unwrap()).unwrap();
    ensure(blown.at(1, 1) == 2, || {
        format!("h^{{1,1}} = {}", blown.at(1, 1))
    })?;
    Ok("h^{1,1} = 2".into())
}

fn generic_vanishing_example() -> Outcome {
    for g in [2u64, 3] {
        let spec = BlowUpSpec::new(
            abelian_variety_table(4, AbelianTwist::GenericFlat).unwrap(),
            curve_table(CurveBundleSpec::generic_degree_zero(g)).unwrap(),
            3,
        )
        .unwrap();
        let got = blow_up(&spec).unwrap().at(1, 2);
        ensure(got == g - 1, || format!("g={g}: h^{{1,2}} = {got}"))?;
    }
    Ok("h^{1,2} = g - 1 for g in {2,3}".into())
}

fn hochschild_identity(specs: &[BlowUpSpec]) -> Outcome {
    for (i, spec) in specs.iter().enumerate() {
        let check = hochschild_blowup_check(spec).unwrap();
        ensure(check.holds(), || {
            format!("spec {i}: k = {:?}", check.mismatches)
        })?;
    }
    let spec = BlowUpSpec::new(proj(3, 0), pt(), 3).unwrap();
    let hh0 = blow_up(&spec).unwrap().hochschild().unwrap().get(0);
    ensure(hh0 == 6, || format!("pointed blow-up of P3: HH_0 = {hh0}"))?;
    Ok(format!("{} random specs additive; HH_0 = 6", specs.len()))
}

fn invariance_suite(specs: &[BlowUpSpec]) -> Outcome {
    for (i, spec) in specs.iter().enumerate() {
        let report = invariance_report(spec).unwrap();
        ensure(report.holds(), || format!("spec {i}: {report:?}"))?;
        let blown = blow_up(spec).unwrap();
        ensure(
            blown.euler_characteristic(0) == spec.base().euler_characteristic(0),
            || format!("spec {i}: chi changed"),
        )?;
    }
    Ok(format!("0 violations over {} specs", specs.len()))
}

fn roundtrip_and_coker(specs: &[BlowUpSpec]) -> Outcome {
    for (i, spec) in specs.iter().enumerate() {
        let back = blow_down(&blow_up(spec).unwrap(), spec.center(), spec.codim() as i64);
        ensure(back.as_ref() == Ok(spec.base()), || {
            format!("spec {i}: roundtrip")
        })?;
        let coker = coker_identity_check(spec).unwrap();
        ensure(coker.holds(), || {
            format!("spec {i}: coker at {:?}", coker.mismatches)
        })?;
    }
    Ok(format!("0 violations over {} specs", specs.len()))
}

fn bott_oracle() -> Outcome {
    let mut compared = 0;
    for n in 1..=3 {
        for k in -6..=6 {
            let oracle = common::bott_oracle::table(n, k);
            let table = proj(n, k);
            for (p, oracle_row) in oracle.iter().enumerate() {
                for (q, &expected) in oracle_row.iter().enumerate() {
                    ensure(table.at(p, q) == expected, || {
                        format!(
                            "n={n} k={k} ({p},{q}): formula {} oracle {expected}",
                            table.at(p, q)
                        )
                    })?;
                    compared += 1;
                }
            }
        }
    }
    for n in 1..=4 {
        for k in -8..=8 {
            let (a, b) = (proj(n, k), proj(n, -k));
            for p in 0..=n {
                for q in 0..=n {
                    ensure(a.at(p, q) == b.at(n - p, n - q), || {
                        format!("Serre symmetry fails: n={n} k={k} ({p},{q})")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{compared} cells match the oracle; Serre symmetric"
    ))
}

fn relative_invariance() -> Outcome {
    let cases = [
        (proj(2, 0), 2, vec![(0, vec![1]), (1, vec![])]),
        (proj(3, 0), 3, vec![(0, vec![1]), (1, vec![]), (2, vec![])]),
    ];
    for (base, codim, profiles) in cases {
        let spec = BlowUpSpec::new(base, pt(), codim).unwrap();
        for (p, ranks) in profiles {
            let (a, b) = relative_pair(&spec, &RestrictionRankProfile::new(p, ranks)).unwrap();
            ensure(a.values == b.values, || {
                format!(
                    "P{}/pt p={p}: {:?} vs {:?}",
                    spec.base().n(),
                    a.values,
                    b.values
                )
            })?;
        }
    }
    // 0 -> I_pt -> O -> O_pt -> 0 on P^2: H^0(O) -> H^0(O_pt) is onto and
    // every other group vanishes, so I_pt is acyclic.
    let ideal =
        relative_cohomology(&[1, 0, 0], &[1], &RestrictionRankProfile::new(0, vec![1])).unwrap();
    let oracle = ideal_sheaf_of_point_on_p2();
    ensure(ideal.values == oracle, || {
        format!("ideal sheaf {:?}, oracle {:?}", ideal.values, oracle)
    })?;
    Ok("both sides agree on 5 profiles; I_pt on P2 = (0,0,0)".into())
}

/// Long exact sequence of `0 -> I -> O_P2 -> O_pt -> 0` worked by hand:
/// `h^q(O_P2) = (1,0,0)`, `h^q(O_pt) = (1,0,0)`, evaluation at the point is onto.
fn ideal_sheaf_of_point_on_p2() -> Vec<u64> {
    let structure = [1u64, 0, 0];
    let point = [1u64, 0, 0];
    let evaluation_rank = 1u64;
    let h0 = structure[0] - evaluation_rank;
    let h1 = (point[0] - evaluation_rank) + structure[1];
    let h2 = point[1] + structure[2];
    vec![h0, h1, h2]
}

fn borel_consistency() -> Outcome {
    let bases = [
        pt(),
        point_table(3).unwrap(),
        proj(1, 0),
        proj(2, 0),
        proj(2, 3),
        proj(3, 1),
        proj(3, -5),
        curve_table(CurveBundleSpec::explicit(0, 1)).unwrap(),
        curve_table(CurveBundleSpec::generic_degree_zero(2)).unwrap(),
        curve_table(CurveBundleSpec::trivial(1)).unwrap(),
        abelian_variety_table(2, AbelianTwist::Trivial).unwrap(),
        abelian_variety_table(3, AbelianTwist::Trivial).unwrap(),
        abelian_variety_table(4, AbelianTwist::GenericFlat).unwrap(),
    ];
    let mut cells = 0;
    for base in &bases {
        for r in 1..=4 {
            let total = projective_bundle(base, r).unwrap();
            for p in 0..=total.n() {
                for q in 0..=total.n() {
                    let e2 = borel_e2_dimension(base, r, p, q).unwrap();
                    ensure(e2 == total.at(p, q), || {
                        format!(
                            "{} r={r} ({p},{q}): E2 {e2} vs {}",
                            base.label(),
                            total.at(p, q)
                        )
                    })?;
                    cells += 1;
                }
            }
        }
    }
    Ok(format!("{cells} cells, 0 violations"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let specs = common::random_specs(RANDOM_SPECS, SEED);

    let criteria: Vec<Criterion> = vec![
        ("AC1 new positive example", Box::new(new_positive_example)),
        ("AC2 Ramanujam example", Box::new(ramanujam_example)),
        ("AC3 curve-center example", Box::new(curve_center_example)),
        (
            "AC4 generic-vanishing counterexample",
            Box::new(generic_vanishing_example),
        ),
        (
            "AC5 Hochschild blow-up identity",
            Box::new(|| hochschild_identity(&specs)),
        ),
        (
            "AC6 invariance suite",
            Box::new(|| invariance_suite(&specs)),
        ),
        (
            "AC7 roundtrip and coker identities",
            Box::new(|| roundtrip_and_coker(&specs)),
        ),
        ("AC8 Bott oracle equivalence", Box::new(bott_oracle)),
        (
            "AC9 relative-cohomology invariance",
            Box::new(relative_invariance),
        ),
        ("AC10 Borel E2 consistency", Box::new(borel_consistency)),
    ];

    let mut failures = 0;
    for (name, run) in &criteria {
        match run() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }

    let elapsed = start.elapsed();
    if elapsed < TIME_BUDGET {
        println!("[PASS] runtime: {elapsed:.2?} < {TIME_BUDGET:?}");
    } else {
        failures += 1;
        println!("[FAIL] runtime: {elapsed:.2?} >= {TIME_BUDGET:?}");
    }

    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
