use std::fmt::Write as _;

use northshield::envelope::{
    check_gap_identity, check_log_bound_with, check_peak_identity, gap_strip, induction_strip_report,
    power_gap_at_breakpoints, power_gap_grid, ratio_to_envelope_scan, reference_table, EnvelopeError, GridSpacing,
    LogCoefficient,
};
use northshield::format::csv_float;
use northshield::jsr::{self, convergence_csv, finiteness_check, jsr_bounds, JsrError, MatrixSet};
use northshield::linrep::{
    builtin_northshield_rep, builtin_stern_rep, digits_lsb_first, load_rep, verify_rep, LinRep, Verification,
};
use northshield::quadfield::QuadRat;
use northshield::sequences::{
    interval_max_bruteforce, interval_max_closed_form, interval_max_csv, northshield, ratio_scan_northshield,
    ratio_scan_stern, stern, SequenceError, DEFAULT_NORTHSHIELD_SCAN_CAP, DEFAULT_STERN_SCAN_CAP,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::{
    Check, Coefficient, Failure, Format, JsrArgs, MaxArgs, MaxMode, Oracle, RepArgs, Report, ScanArgs, Spacing,
    VerifyArgs,
};

enum Source {
    Stern,
    Northshield,
    File(LinRep),
}

fn load_source(name: &str) -> Result<Source, Failure> {
    match name {
        "stern" => Ok(Source::Stern),
        "northshield" => Ok(Source::Northshield),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
            load_rep(&text)
                .map(Source::File)
                .map_err(|e| Failure::Usage(format!("{path}: {e}")))
        }
    }
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    pretty(&serde_json::to_value(value).expect("values serialize"))
}

fn sequence_failure(e: SequenceError) -> Failure {
    match e {
        SequenceError::CapExceeded { .. } => Failure::Budget(e.to_string()),
        _ => Failure::Usage(e.to_string()),
    }
}

fn envelope_failure(e: EnvelopeError) -> Failure {
    Failure::Usage(e.to_string())
}

fn jsr_failure(e: JsrError) -> Failure {
    match e {
        JsrError::BudgetExceeded { .. } => Failure::Budget(format!("{e} (raise it with --budget)")),
        _ => Failure::Usage(e.to_string()),
    }
}

fn status(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "fail"
    }
}

pub fn eval(sequence: &str, n: u64, format: Format) -> Result<Report, Failure> {
    let (exact, json_value, float) = match load_source(sequence)? {
        Source::Stern => {
            let a = stern(n);
            (a.to_string(), json!(a), a as f64)
        }
        Source::Northshield => {
            let b = northshield(n);
            (b.to_string(), serde_json::to_value(&b).expect("serializes"), b.to_f64())
        }
        Source::File(rep) => {
            let v = rep.eval(n);
            (v.to_string(), serde_json::to_value(&v).expect("serializes"), v.to_f64())
        }
    };
    let body = match format {
        Format::Text => format!("{exact} ({float:.3})\n"),
        Format::Csv => format!("sequence,n,value,float\n{sequence},{n},{exact},{}\n", csv_float(float)),
        Format::Json => pretty(&json!({
            "sequence": sequence,
            "n": n,
            "value": json_value,
            "float": float,
        })),
    };
    Ok(Report::ok(body))
}

pub fn scan(args: &ScanArgs, format: Format) -> Result<Report, Failure> {
    let northshield_seq = match args.sequence.as_str() {
        "northshield" => true,
        "stern" => false,
        other => {
            return Err(Failure::Usage(format!(
                "scan takes `stern` or `northshield`, not {other}"
            )))
        }
    };
    let default_cap = if northshield_seq {
        DEFAULT_NORTHSHIELD_SCAN_CAP
    } else {
        DEFAULT_STERN_SCAN_CAP
    };
    let cap = args.cap.unwrap_or(default_cap);
    if args.hi > cap {
        return Err(Failure::Budget(format!(
            "hi = {} exceeds the scan cap {cap} (raise it with --cap)",
            args.hi
        )));
    }
    let scan = if northshield_seq {
        ratio_scan_northshield(args.lo, args.hi, args.decimation)
    } else {
        ratio_scan_stern(args.lo, args.hi, args.decimation)
    }
    .map_err(sequence_failure)?;
    let body = match format {
        Format::Text => format!("{}\n", scan.summary()),
        Format::Csv => scan.to_csv(),
        Format::Json => to_json(&scan),
    };
    Ok(Report::ok(body))
}

pub fn verify(args: &VerifyArgs, format: Format) -> Result<Report, Failure> {
    match args.check {
        Check::LogBound => verify_log_bound(args, format),
        Check::EnvelopeRatio => verify_envelope_ratio(args, format),
        Check::PowerBound => verify_power_bound(args, format),
        Check::Peak => verify_peak(args, format),
        Check::Gap => verify_gap(args, format),
        Check::Table => verify_table(format),
    }
}

fn verify_log_bound(args: &VerifyArgs, format: Format) -> Result<Report, Failure> {
    if args.hi > args.cap {
        return Err(Failure::Budget(format!(
            "--hi {} exceeds the cap {} (raise it with --cap)",
            args.hi, args.cap
        )));
    }
    let coefficient = match args.coefficient {
        Coefficient::Silver => LogCoefficient::Silver,
        Coefficient::One => LogCoefficient::One,
    };
    let report = check_log_bound_with(args.lo, args.hi, coefficient).map_err(envelope_failure)?;
    let body = match format {
        Format::Text => report.to_text(),
        Format::Json => pretty(&report.to_json()),
        Format::Csv => {
            let mut out = String::from("m,b,rhs,b_float,rhs_float\n");
            for v in &report.violations {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    v.index,
                    v.lhs,
                    v.rhs,
                    csv_float(v.lhs.to_f64()),
                    csv_float(v.rhs.to_f64())
                );
            }
            out
        }
    };
    Ok(Report {
        body,
        passed: report.passed(),
    })
}

fn n_range(args: &VerifyArgs, default_hi: u32) -> Result<(u32, u32), Failure> {
    let hi = args.n_hi.unwrap_or(default_hi);
    if args.n_lo == 0 || args.n_lo > hi {
        return Err(Failure::Usage(format!("invalid exponent range [{}, {hi}]", args.n_lo)));
    }
    Ok((args.n_lo, hi))
}

fn verify_envelope_ratio(args: &VerifyArgs, format: Format) -> Result<Report, Failure> {
    let (lo, hi) = n_range(args, 20)?;
    let rows = ratio_to_envelope_scan(lo, hi).map_err(envelope_failure)?;
    let increasing = rows.windows(2).all(|w| w[0].ratio < w[1].ratio);
    let below_one = rows.iter().all(|r| r.ratio < 1.0);
    let passed = increasing && below_one;
    let body = match format {
        Format::Csv => {
            let mut out = String::from("n,m,ratio\n");
            for r in &rows {
                let _ = writeln!(out, "{},{},{}", r.n, r.m, csv_float(r.ratio));
            }
            out
        }
        Format::Json => pretty(&json!({
            "rows": rows,
            "increasing": increasing,
            "below_one": below_one,
            "status": status(passed),
        })),
        Format::Text => {
            let mut out = String::from("b(m_n)/h(m_n) at m_n = (3^(n+1)+1)/2\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "  n = {:2}  m = {:>12}  ratio = {}  1 - ratio = {}",
                    r.n,
                    r.m,
                    csv_float(r.ratio),
                    csv_float(1.0 - r.ratio)
                );
            }
            let _ = writeln!(out, "strictly increasing: {increasing}; all below 1: {below_one}");
            out
        }
    };
    Ok(Report { body, passed })
}

fn verify_power_bound(args: &VerifyArgs, format: Format) -> Result<Report, Failure> {
    let spacing = match args.spacing {
        Spacing::Linear => GridSpacing::Linear,
        Spacing::Geometric => GridSpacing::Geometric,
    };
    if !(args.x_lo > 0.0 && args.x_lo <= args.x_hi && args.x_hi.is_finite()) || args.grid == 0 {
        return Err(Failure::Usage(format!(
            "invalid grid: {} points over [{}, {}]",
            args.grid, args.x_lo, args.x_hi
        )));
    }
    let breakpoints = power_gap_at_breakpoints(12);
    let grid = power_gap_grid(args.x_lo, args.x_hi, args.grid, spacing).map_err(envelope_failure)?;
    let worst = breakpoints.iter().map(|b| b.relative.abs()).fold(0.0, f64::max);
    let (max_x, max_h) = grid.max();
    let passed = worst < args.tolerance && grid.all_below(args.tolerance);
    let body = match format {
        Format::Csv => grid.to_csv(),
        Format::Json => pretty(&json!({
            "breakpoints": breakpoints,
            "grid": {
                "lo": grid.lo,
                "hi": grid.hi,
                "spacing": grid.spacing,
                "count": grid.points.len(),
                "max_x": max_x,
                "max_h": max_h,
            },
            "tolerance": args.tolerance,
            "status": status(passed),
        })),
        Format::Text => {
            let mut out = String::from("H(x) = 2h(x) - (2x)^α, α = log3(1 + √2)\n");
            for b in &breakpoints {
                let _ = writeln!(
                    out,
                    "  x_{:<2} H = {:>12}  relative {}",
                    b.n,
                    csv_float(b.gap),
                    csv_float(b.relative)
                );
            }
            let _ = writeln!(
                out,
                "grid: {} points on [{}, {}], max H = {} at x = {}",
                grid.points.len(),
                csv_float(grid.lo),
                csv_float(grid.hi),
                csv_float(max_h),
                csv_float(max_x)
            );
            let _ = writeln!(
                out,
                "H <= {} everywhere: {}",
                csv_float(args.tolerance),
                if passed { "PASS" } else { "FAIL" }
            );
            out
        }
    };
    Ok(Report { body, passed })
}

fn verify_peak(args: &VerifyArgs, format: Format) -> Result<Report, Failure> {
    let (lo, hi) = n_range(args, 12)?;
    let checks = (lo..=hi)
        .map(check_peak_identity)
        .collect::<Result<Vec<_>, _>>()
        .map_err(envelope_failure)?;
    let passed = checks.iter().all(|c| c.passed());
    let body = match format {
        Format::Csv => {
            let mut out = String::from("n,m,h,bound,interval_max,identity_holds,exceeds\n");
            for c in &checks {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    c.n,
                    c.m,
                    csv_float(c.h_value.to_f64()),
                    csv_float(c.bound.to_f64()),
                    csv_float(c.interval_max.to_f64()),
                    c.identity_holds,
                    c.exceeds
                );
            }
            out
        }
        Format::Json => pretty(&json!({ "checks": checks, "status": status(passed) })),
        Format::Text => {
            let mut out = String::new();
            for c in &checks {
                let _ = writeln!(
                    out,
                    "n = {}: h({}) = {} ({}), closed form {}; + {} = {} > max b = {}: {}",
                    c.n,
                    c.m,
                    c.h_value,
                    csv_float(c.h_value.to_f64()),
                    if c.identity_holds { "equal" } else { "DIFFERENT" },
                    c.n + 1,
                    csv_float(c.bound.to_f64()),
                    csv_float(c.interval_max.to_f64()),
                    if c.exceeds { "yes" } else { "NO" }
                );
            }
            out
        }
    };
    Ok(Report { body, passed })
}

fn verify_gap(args: &VerifyArgs, format: Format) -> Result<Report, Failure> {
    let (lo, hi) = n_range(args, 10)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut checks = Vec::new();
    for n in lo..=hi {
        let (k_min, k_max) =
            gap_strip(n).ok_or_else(|| Failure::Usage(format!("n = {n} is too large for 64-bit k")))?;
        let mut ks = vec![k_min, k_max];
        ks.extend((0..args.samples).map(|_| rng.gen_range(k_min..=k_max)));
        for k in ks {
            checks.push(check_gap_identity(n, k).map_err(envelope_failure)?);
        }
    }
    let strips = (lo..=hi.min(12))
        .map(induction_strip_report)
        .collect::<Result<Vec<_>, _>>()
        .map_err(envelope_failure)?;
    let passed = checks.iter().all(|c| c.passed());
    let all_negative = checks.iter().all(|c| c.sign < 0);
    let sign_note = if all_negative {
        "the gap is negative for every k: it lies in (-1, 0), so (1+√2)h(k+1) - h(3k+1) is the quantity in (0, 1)"
    } else {
        "the gap is not negative for every k"
    };
    let body = match format {
        Format::Csv => {
            let mut out = String::from("n,k,value,float,identity_holds,below_one\n");
            for c in &checks {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    c.n,
                    c.k,
                    c.value,
                    csv_float(c.value.to_f64()),
                    c.identity_holds,
                    c.magnitude_below_one
                );
            }
            out
        }
        Format::Json => pretty(&json!({
            "checks": checks,
            "induction_strips": strips,
            "sign": sign_note,
            "status": status(passed),
        })),
        Format::Text => {
            let mut out = String::from("h(3k+1) - (1+√2)h(k+1) for k+1 on segment n and 3k+1 on segment n+1\n");
            for n in lo..=hi {
                let of_n: Vec<_> = checks.iter().filter(|c| c.n == n).collect();
                let ok = of_n.iter().all(|c| c.passed());
                let (k_min, k_max) = gap_strip(n).expect("checked above");
                let _ = writeln!(
                    out,
                    "  n = {n}: {} ({}) for {} k in [{k_min}, {k_max}]: {}",
                    of_n[0].closed_form,
                    csv_float(of_n[0].closed_form.to_f64()),
                    of_n.len(),
                    if ok { "exact, |gap| < 1" } else { "MISMATCH" }
                );
            }
            let _ = writeln!(out, "sign: {sign_note}");
            for s in &strips {
                let _ = writeln!(
                    out,
                    "  k in [{}, {}] (3k+1 in [3^{n}, (3^{m}-1)/2]): (1+√2)h(k+1) - h(3k+1) in (0, 1): {}; max {}; equals √2((1+√2)/3)^{n} for {} k, √2((1+√2)/3)^{m} for {} k",
                    s.k_min,
                    s.k_max,
                    s.all_in_unit_interval,
                    csv_float(s.max_gap.to_f64()),
                    s.matches_exponent_n,
                    s.matches_exponent_n_plus_1,
                    n = s.n,
                    m = s.n + 1
                );
            }
            out
        }
    };
    Ok(Report { body, passed })
}

fn verify_table(format: Format) -> Result<Report, Failure> {
    let rows = reference_table();
    let passed = rows.iter().all(|r| QuadRat::from(r.b.clone()) <= r.rhs_silver);
    let note = "rows m >= 5 of the published column agree with segment 1 extended past x_2 = 9/2, not with h";
    let body = match format {
        Format::Csv => {
            let mut out = String::from(
                "m,b,b_float,h_plus_log,h_plus_silver_log,published,published_matches,segment1_extension\n",
            );
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    r.m,
                    r.b,
                    csv_float(r.b_float),
                    csv_float(r.rhs_one.to_f64()),
                    csv_float(r.rhs_silver.to_f64()),
                    csv_float(r.published),
                    r.published_matches,
                    csv_float(r.segment1_extension)
                );
            }
            out
        }
        Format::Json => pretty(&json!({ "rows": rows, "note": note, "status": status(passed) })),
        Format::Text => {
            let mut out = String::from(" m  b(m)          h+log  (published)  h+(1+√2)log  b <= h+(1+√2)log\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{:>2}  {:<5} {:>6.3}  {:>6.3}  ({:.3}{})  {:>10.3}  {}",
                    r.m,
                    r.b.to_string(),
                    r.b_float,
                    r.rhs_one.to_f64(),
                    r.published,
                    if r.published_matches { "" } else { " *" },
                    r.rhs_silver.to_f64(),
                    QuadRat::from(r.b.clone()) <= r.rhs_silver
                );
            }
            let _ = writeln!(out, "* {note}");
            out
        }
    };
    Ok(Report { body, passed })
}

pub fn max(args: &MaxArgs, format: Format) -> Result<Report, Failure> {
    if args.n_lo == 0 || args.n_lo > args.n_hi {
        return Err(Failure::Usage(format!(
            "invalid exponent range [{}, {}]",
            args.n_lo, args.n_hi
        )));
    }
    let closed: Vec<_> = (args.n_lo..=args.n_hi).map(interval_max_closed_form).collect();
    let brute = match args.mode {
        MaxMode::Closed => None,
        MaxMode::Brute | MaxMode::Both => Some(
            (args.n_lo..=args.n_hi)
                .map(|n| interval_max_bruteforce(n, args.cap))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| match e {
                    SequenceError::CapExceeded { .. } => Failure::Budget(format!("{e} (raise it with --cap)")),
                    other => sequence_failure(other),
                })?,
        ),
    };
    let rows = match (&args.mode, &brute) {
        (MaxMode::Brute, Some(b)) => b.clone(),
        _ => closed.clone(),
    };
    let agree = brute.as_ref().is_none_or(|b| *b == closed);
    let passed = args.mode != MaxMode::Both || agree;
    let body = match format {
        Format::Csv => interval_max_csv(&rows),
        Format::Json if args.mode == MaxMode::Both => pretty(&json!({ "rows": rows, "agree": agree })),
        Format::Json => to_json(&rows),
        Format::Text => {
            let mut out = String::new();
            for r in &rows {
                let _ = writeln!(
                    out,
                    "n = {}: max {} ({}) at m = {}",
                    r.n,
                    r.max_value,
                    csv_float(r.max_f64()),
                    r.first_argmax
                );
            }
            if args.mode == MaxMode::Both {
                let _ = writeln!(
                    out,
                    "brute force and closed form {}",
                    if agree { "agree" } else { "DISAGREE" }
                );
            }
            out
        }
    };
    Ok(Report { body, passed })
}

fn matrix_set(name: &str) -> Result<MatrixSet, Failure> {
    Ok(match load_source(name)? {
        Source::Stern => MatrixSet::stern(),
        Source::Northshield => MatrixSet::northshield(),
        Source::File(rep) => MatrixSet::from_rep(&rep),
    })
}

pub fn jsr(args: &JsrArgs, format: Format) -> Result<Report, Failure> {
    let set = matrix_set(&args.set)?;
    let bounds = jsr_bounds(&set, args.lower_len, args.upper_len, args.budget).map_err(jsr_failure)?;
    let table = if args.table || format == Format::Csv {
        let lens: Vec<u32> = (1..=args.upper_len).collect();
        Some(jsr::convergence_table(&set, &lens, args.budget).map_err(jsr_failure)?)
    } else {
        None
    };
    let word = args.word.clone().unwrap_or_else(|| bounds.lower_witness.clone());
    let finiteness = finiteness_check(&set, &word, &bounds, args.tolerance).map_err(jsr_failure)?;
    let body = match format {
        Format::Csv => convergence_csv(table.as_deref().unwrap_or_default()),
        Format::Json => to_json(&bounds),
        Format::Text => {
            let mut out = bounds.to_text();
            out.push_str(&finiteness.to_text());
            if let Some(rows) = &table {
                out.push_str(&convergence_csv(rows));
            }
            out
        }
    };
    Ok(Report::ok(body))
}

pub fn rep(args: &RepArgs, format: Format) -> Result<Report, Failure> {
    let rep = match load_source(&args.source)? {
        Source::Stern => builtin_stern_rep(),
        Source::Northshield => builtin_northshield_rep(),
        Source::File(rep) => rep,
    };
    if args.emit {
        let mut body = rep.to_json_pretty();
        body.push('\n');
        return Ok(Report::ok(body));
    }
    let (oracle, outcome) = match args.oracle {
        Oracle::Northshield => (
            "northshield",
            verify_rep(&rep, |n| QuadRat::from(northshield(n)), args.limit),
        ),
        Oracle::Stern => (
            "stern",
            verify_rep(&rep, |n| QuadRat::from(stern(n) as i64), args.limit),
        ),
        Oracle::SelfCheck => ("self", self_check(&rep, args.limit)),
    };
    let passed = outcome.passed();
    let mismatch = match &outcome {
        Verification::Pass { .. } => serde_json::Value::Null,
        Verification::Mismatch { n, expected, found } => json!({ "n": n, "expected": expected, "found": found }),
    };
    let body = match format {
        Format::Json => pretty(&json!({
            "base": rep.base(),
            "dim": rep.dim(),
            "oracle": oracle,
            "checked": args.limit,
            "status": status(passed),
            "mismatch": mismatch,
        })),
        Format::Csv => format!(
            "base,dim,oracle,checked,status\n{},{},{oracle},{},{}\n",
            rep.base(),
            rep.dim(),
            args.limit,
            status(passed)
        ),
        Format::Text => {
            let mut out = format!("representation: base {}, dimension {}\n", rep.base(), rep.dim());
            match &outcome {
                Verification::Pass { checked } => {
                    let _ = writeln!(out, "oracle {oracle}: pass ({checked} terms)");
                }
                Verification::Mismatch { n, expected, found } => {
                    let _ = writeln!(
                        out,
                        "oracle {oracle}: mismatch at n = {n}: expected {expected}, found {found}"
                    );
                }
            }
            out
        }
    };
    Ok(Report { body, passed })
}

/// JSON round trip, then `f(n)` unchanged by a trailing zero digit.
fn self_check(rep: &LinRep, limit: u64) -> Verification {
    let reloaded = load_rep(&rep.to_json()).expect("serialized representations load");
    assert_eq!(&reloaded, rep, "JSON round trip changed the representation");
    for n in 0..limit {
        let mut word = digits_lsb_first(n, rep.base());
        word.push(0);
        let padded = rep.eval_word(&word).expect("digits below the base");
        let plain = rep.eval(n);
        if padded != plain {
            return Verification::Mismatch {
                n,
                expected: plain,
                found: padded,
            };
        }
    }
    Verification::Pass { checked: limit }
}
