//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::time::Instant;

use northshield::envelope::{
    check_gap_identity, check_log_bound, check_peak_identity, gap_strip, power_gap_at_breakpoints, power_gap_grid,
    GridSpacing,
};
use northshield::jsr::{finiteness_check, jsr_bounds, jsr_upper_bound, MatrixSet, DEFAULT_BUDGET};
use northshield::linrep::{builtin_northshield_rep, builtin_stern_rep};
use northshield::quadfield::{QuadInt, QuadRat};
use northshield::sequences::{
    interval_max_bruteforce, interval_max_closed_form, northshield, ratio_scan_northshield, ratio_scan_stern, stern,
    witness_ratio, DEFAULT_INTERVAL_CAP,
};
use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PHI: f64 = 1.618_033_988_749_895;
const SILVER: f64 = 2.414_213_562_373_095;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn ac1() -> Outcome {
    let expected = [(0, 1), (1, 0), (0, 2), (3, 0), (0, 1), (3, 0), (0, 2), (1, 0)];
    let printed = [1.414, 1.0, 2.828, 3.0, 1.414, 3.0, 2.828, 1.0];
    let mut ok = true;
    for (i, m) in (2..=9u64).enumerate() {
        let b = northshield(m);
        ok &= b == QuadInt::new(expected[i].0, expected[i].1);
        ok &= format!("{:.3}", b.to_f64()) == format!("{:.3}", printed[i]);
    }
    outcome(ok, "b(2..9) = √2, 1, 2√2, 3, √2, 3, 2√2, 1")
}

fn ac2() -> Outcome {
    let mut ok = true;
    for n in 1..=9 {
        let brute = interval_max_bruteforce(n, DEFAULT_INTERVAL_CAP).expect("within cap");
        let closed = interval_max_closed_form(n);
        let silver = QuadInt::silver();
        let conj = QuadInt::new(-1, 1);
        let twice = silver.pow(n) + conj.pow(n);
        let argmax = (BigUint::from(3u32).pow(n) + 1u32) / 2u32;
        ok &= brute == closed && closed.max_value.scale(&BigInt::from(2)) == twice && closed.first_argmax == argmax;
    }
    let far = interval_max_closed_form(40);
    let silver40 = SILVER.powi(40) / 2.0;
    ok &= ((far.max_value.to_f64() - silver40) / silver40).abs() < 1e-12;
    outcome(ok, "brute force = closed form for n = 1..9; closed form at n = 40")
}

fn ac3() -> Outcome {
    let report = check_log_bound(2, 3u64.pow(9)).expect("valid range");
    outcome(
        report.passed(),
        format!(
            "{} values of m in [2, 3^9], {} violations",
            report.checked(),
            report.violations.len()
        ),
    )
}

fn ac4() -> Outcome {
    let checks: Vec<_> = (1..=12).map(|n| check_peak_identity(n).expect("n >= 1")).collect();
    let identity = checks.iter().all(|c| c.identity_holds);
    let exceeds = checks.iter().all(|c| c.exceeds);
    outcome(
        identity && exceeds,
        format!("n = 1..12: identity {identity}, strict exceedance {exceeds}"),
    )
}

fn ac5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut ok = true;
    let mut negative = 0;
    let mut total = 0;
    for n in 1..=10 {
        let (lo, hi) = gap_strip(n).expect("n in range");
        let mut values = Vec::new();
        for _ in 0..20 {
            let k = rng.gen_range(lo..=hi);
            let c = check_gap_identity(n, k).expect("k drawn from the strip");
            ok &= c.passed();
            negative += usize::from(c.sign < 0);
            total += 1;
            values.push(c.value);
        }
        ok &= values.windows(2).all(|w| w[0] == w[1]);
    }
    outcome(
        ok,
        format!(
            "exact, k-independent, |gap| < 1 for n = 1..10; sign: {negative}/{total} negative, so the gap lies in (-1, 0), not (0, 1)"
        ),
    )
}

fn ac6() -> Outcome {
    let at_breakpoints = power_gap_at_breakpoints(12);
    let worst_bp = at_breakpoints.iter().map(|b| b.relative.abs()).fold(0.0, f64::max);
    let grid = power_gap_grid(1.6, 3f64.powi(10) / 2.0, 10_000, GridSpacing::Linear).expect("valid grid");
    let (x, h) = grid.max();
    outcome(
        worst_bp < 1e-9 && grid.all_below(1e-9),
        format!("max |H(x_n)|/(1+√2)^n = {worst_bp:.2e}; grid max H = {h:.3e} at x = {x:.6}"),
    )
}

fn ac7() -> Outcome {
    let scan = ratio_scan_northshield(3u64.pow(8), 3u64.pow(12), 3u64.pow(12)).expect("valid range");
    let r11 = witness_ratio(11);
    let r19 = witness_ratio(19);
    let ok =
        (1.0 - 1e-4..=1.0 + 0.02).contains(&scan.running_max) && (r11 - 1.0).abs() < 1e-5 && (r19 - 1.0).abs() < 1e-8;
    outcome(
        ok,
        format!(
            "running max {:.9} at m = {}; |ratio(m_11) - 1| = {:.3e}; |ratio(m_19) - 1| = {:.3e}",
            scan.running_max,
            scan.argmax,
            (r11 - 1.0).abs(),
            (r19 - 1.0).abs()
        ),
    )
}

fn ac8() -> Outcome {
    let scan = ratio_scan_stern(1 << 16, 1 << 20, 1 << 20).expect("valid range");
    outcome(
        (0.9580..=0.9595).contains(&scan.running_max),
        format!("running max {:.9} at n = {}", scan.running_max, scan.argmax),
    )
}

fn ac9() -> Outcome {
    let b = builtin_northshield_rep();
    let a = builtin_stern_rep();
    let ok_b = (0..3u64.pow(7)).all(|n| b.eval(n) == QuadRat::from(northshield(n)));
    let ok_a = (0..1u64 << 12).all(|n| a.eval(n) == QuadRat::from(stern(n) as i64));
    outcome(ok_b && ok_a, "Northshield n < 3^7, Stern n < 2^12")
}

fn ac10() -> Outcome {
    let ns = MatrixSet::northshield();
    let nb = jsr_bounds(&ns, 1, 1, DEFAULT_BUDGET).expect("within budget");
    let cert = finiteness_check(&ns, &[1], &nb, 1e-9).expect("nonempty word");
    let ok_n = (nb.lower - SILVER).abs() < 1e-9 && (nb.upper - SILVER).abs() < 1e-9 && cert.certified;
    let st = MatrixSet::stern();
    let sb = jsr_bounds(&st, 2, 16, DEFAULT_BUDGET).expect("within budget");
    let ok_s = (sb.lower - PHI).abs() < 1e-9 && sb.lower_witness == [0, 1] && (PHI..=1.65).contains(&sb.upper);
    let b16 = jsr_upper_bound(&st, 16, DEFAULT_BUDGET).expect("within budget");
    outcome(
        ok_n && ok_s && b16 == sb.upper,
        format!(
            "Northshield lower = upper = {:.12}, witness {:?}; Stern lower {:.12} witness {:?}, upper(16) {:.6}",
            nb.lower, nb.lower_witness, sb.lower, sb.lower_witness, sb.upper
        ),
    )
}

type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("AC1", "small values of b", ac1),
        ("AC2", "interval maxima", ac2),
        ("AC3", "log bound on [2, 3^9]", ac3),
        ("AC4", "envelope at the peak index", ac4),
        ("AC5", "gap identity", ac5),
        ("AC6", "power bound for h", ac6),
        ("AC7", "limsup ratio", ac7),
        ("AC8", "Stern constant", ac8),
        ("AC9", "linear representations", ac9),
        ("AC10", "joint spectral radius", ac10),
    ];
    let mut failures = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        let tag = if result.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {id} {name}: {} ({secs:.2} s)", result.detail);
        failures += usize::from(!result.passed);
    }
    println!("acceptance: {} passed, {failures} failed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
