//! End-to-end acceptance criteria, one line of output per criterion.
//! Run with `cargo test -p gzsys --test acceptance`.

use gzsys::verify::{
    covering_degree, dimension_formula, flow_exactness, kw_inverse, lagrangian, lift_span, orbit_count,
    poisson_commutativity, strong_regularity_ranks, trivialization, zd_action, CheckRecord, VerifyConfig,
};

const SEED: u64 = 20240611;

fn cfg(n: usize, samples: usize) -> VerifyConfig {
    VerifyConfig::new(n, samples, SEED)
}

fn report(label: &str, records: Vec<CheckRecord>) -> bool {
    let ok = records.iter().all(|r| r.passed);
    println!("{} {label}", if ok { "PASS" } else { "FAIL" });
    for r in &records {
        println!(
            "    {:<48} samples {:>5}  max {:.3e}  tol {:.1e}  {}",
            r.name,
            r.samples,
            r.max_residual,
            r.tolerance,
            if r.passed { "ok" } else { "FAILED" }
        );
    }
    ok
}

fn over<F>(ns: impl IntoIterator<Item = usize>, samples: usize, f: F) -> Vec<CheckRecord>
where
    F: Fn(&VerifyConfig) -> Vec<CheckRecord>,
{
    ns.into_iter()
        .flat_map(|n| {
            f(&cfg(n, samples)).into_iter().map(move |mut r| {
                r.name = format!("n={n} {}", r.name);
                r
            })
        })
        .collect()
}

fn c1() -> bool {
    report("1 poisson commutativity", over(3..=5, 50, poisson_commutativity))
}

fn c2() -> bool {
    report("2 strong regularity ranks", over(3..=5, 50, |c| strong_regularity_ranks(c).unwrap()))
}

fn c3() -> bool {
    report("3 lagrangian", over(3..=5, 50, |c| lagrangian(c).unwrap()))
}

fn c4() -> bool {
    let ok = report("4 flow exactness", over(3..=4, 50, |c| flow_exactness(c).unwrap()));
    for r in flow_exactness(&cfg(5, 50)).unwrap() {
        println!("    info n=5 {:<42} max {:.3e}", r.name, r.max_residual);
    }
    ok
}

fn c5() -> bool {
    report("5 kostant-wallach inverse", over(2..=6, 100, kw_inverse))
}

fn c6() -> bool {
    report("6 covering degree", over(1..=4, 1, |c| covering_degree(c).unwrap()))
}

fn c7() -> bool {
    report("7 lift identity", over(3..=5, 50, |c| lift_span(c).unwrap()))
}

fn c8() -> bool {
    report("8 zd action", over(2..=4, 25, |c| zd_action(c).unwrap()))
}

fn c9() -> bool {
    report("9 trivialization", over(2..=4, 25, |c| trivialization(c).unwrap()))
}

fn c10() -> bool {
    report("10 orbit count", over([2], 20, |c| orbit_count(c).unwrap()))
}

fn c11() -> bool {
    report("11 dimension formula", over(1..=5, 1, |c| dimension_formula(c).unwrap()))
}

fn main() {
    let results = [c1(), c2(), c3(), c4(), c5(), c6(), c7(), c8(), c9(), c10(), c11()];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    if failed.is_empty() {
        println!("acceptance: all 11 criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
