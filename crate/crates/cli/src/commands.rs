//! One function per subcommand. Each takes output sinks and returns the
//! process exit code: 0 for success, 1 when a check answers "no", 2 for bad
//! input or usage, 3 when a time budget runs out.

use std::io::Write;
use std::path::Path;
use std::time::Duration;

use sts_core::construct::construct_sts;
use sts_core::cover::{find_parallel_class_with, SearchMode, SearchStatus, SolveOptions};
use sts_core::ntheory::{enumerate_v, factorize};
use sts_core::verify::{certify_no_parallel_class, check_sts, Certificate, StsViolation};

use crate::format::{
    certificate_to_string, read_system_from_path, write_system_to_path, FileFormat, SystemFile,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TIMEOUT: i32 = 3;

/// Version tag recorded in certificate files.
pub const TOOLKIT: &str = concat!("stskit/", env!("CARGO_PKG_VERSION"));

/// How many individual violations `verify` prints before summarizing.
const MAX_PRINTED_VIOLATIONS: usize = 50;

/// Lists the supported orders up to `bound`, one per line, each with the
/// factorization that puts it in the family.
pub fn cmd_enumerate(bound: u64, out: &mut dyn Write) -> i32 {
    for v in enumerate_v(bound) {
        let _ = writeln!(out, "{v} (v-2)/5 = {}", format_factorization((v - 2) / 5));
    }
    EXIT_OK
}

fn format_factorization(n: u64) -> String {
    factorize(n)
        .iter()
        .map(|&(p, e)| {
            if e == 1 {
                p.to_string()
            } else {
                format!("{p}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join(" * ")
}

/// Builds the system for `v` and writes it to `output`.
pub fn cmd_construct(
    v: u64,
    output: &Path,
    format: FileFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let built = match construct_sts(v) {
        Ok(built) => built,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let file = SystemFile {
        system: built.system,
        source: "constructed".to_string(),
        gamma: Some(built.colors),
        with_role_tokens: true,
        format,
    };
    if let Err(e) = write_system_to_path(output, &file, format) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    let c = file.system.role_counts();
    let _ = writeln!(
        out,
        "wrote {}: v={} b={} (b0={} binf={} bstar={})",
        output.display(),
        file.system.v(),
        file.system.len(),
        c.zero_sum,
        c.infinity,
        c.seven_point
    );
    EXIT_OK
}

fn describe_violation(violation: &StsViolation) -> String {
    match violation {
        StsViolation::UncoveredPair { a, b } => format!("pair {a} {b} is uncovered"),
        StsViolation::MultiplyCoveredPair { a, b, count } => {
            format!("pair {a} {b} is covered {count} times")
        }
        StsViolation::TripleCountMismatch { actual } => {
            format!("triple count {actual} is not v(v-1)/6")
        }
        StsViolation::ReplicationMismatch { point, actual } => {
            format!("point {point} lies in {actual} triples, not (v-1)/2")
        }
    }
}

fn print_premises(out: &mut dyn Write, heading: &str, cert: &Certificate, ids: &[&str]) -> bool {
    let _ = writeln!(out, "{heading}:");
    let mut all_passed = true;
    for id in ids {
        let p = cert.premise(id).expect("premise ids are fixed");
        let _ = writeln!(
            out,
            "  {} {} checked={} {}",
            p.id,
            if p.passed { "pass" } else { "fail" },
            p.checked,
            p.description
        );
        all_passed &= p.passed;
    }
    all_passed
}

/// Checks a system file: pair coverage always, the weight and coloring
/// premise groups on request.
pub fn cmd_verify(
    input: &Path,
    weights: bool,
    gamma: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let file = match read_system_from_path(input) {
        Ok(file) => file,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let sys = &file.system;
    let _ = writeln!(
        out,
        "{}: v={} b={} source={}",
        input.display(),
        sys.v(),
        sys.len(),
        file.source
    );

    let report = check_sts(sys);
    let mut failed = !report.is_valid();
    if report.is_valid() {
        let _ = writeln!(
            out,
            "pair coverage: ok ({} pairs each in exactly one triple)",
            report.pairs_checked
        );
    } else {
        let _ = writeln!(
            out,
            "pair coverage: FAILED ({} violations)",
            report.violations.len()
        );
        for violation in report.violations.iter().take(MAX_PRINTED_VIOLATIONS) {
            let _ = writeln!(out, "  {}", describe_violation(violation));
        }
        if report.violations.len() > MAX_PRINTED_VIOLATIONS {
            let _ = writeln!(
                out,
                "  ... and {} more",
                report.violations.len() - MAX_PRINTED_VIOLATIONS
            );
        }
    }

    if weights || gamma {
        let spec = match sys.spec() {
            Some(spec) => spec.clone(),
            None => {
                let _ = writeln!(
                    err,
                    "error: premise checks need a structured file with component primes"
                );
                return EXIT_USAGE;
            }
        };
        let cert = match certify_no_parallel_class(sys, &spec, file.gamma.as_ref()) {
            Ok(cert) => cert,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
        };
        if weights {
            failed |= !print_premises(
                out,
                "weight premises",
                &cert,
                &["P2", "P3", "P4", "P5", "P6", "P10"],
            );
        }
        if gamma {
            failed |= !print_premises(out, "coloring premises", &cert, &["P7", "P8", "P9"]);
        }
    }

    if failed {
        EXIT_FAIL
    } else {
        EXIT_OK
    }
}

/// Builds the system for `v`, runs the premise suite, and writes the
/// certificate to `output`.
pub fn cmd_certify(v: u64, output: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let built = match construct_sts(v) {
        Ok(built) => built,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let cert = match certify_no_parallel_class(&built.system, &built.spec, Some(&built.colors)) {
        Ok(cert) => cert,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Err(e) = std::fs::write(output, certificate_to_string(&cert, TOOLKIT)) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    let passed = cert.premises.iter().filter(|p| p.passed).count();
    let _ = writeln!(
        out,
        "certificate for v={v}: {} ({passed}/{} premises passed), wrote {}",
        if cert.is_valid() { "valid" } else { "invalid" },
        cert.premises.len(),
        output.display()
    );
    if cert.is_valid() {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

pub struct SearchArgs {
    pub mode: SearchMode,
    pub timeout_secs: Option<u64>,
    pub parallel: bool,
}

fn mode_name(mode: SearchMode) -> &'static str {
    match mode {
        SearchMode::FindOne => "find",
        SearchMode::CountAll => "count",
        SearchMode::ProveNone => "prove-none",
    }
}

/// Searches a system file for a parallel class.
pub fn cmd_search_pc(
    input: &Path,
    args: &SearchArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let file = match read_system_from_path(input) {
        Ok(file) => file,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let opts = SolveOptions {
        mode: args.mode,
        time_budget: args.timeout_secs.map(Duration::from_secs),
        parallel: args.parallel,
    };
    let _ = writeln!(
        out,
        "search {}: v={} rows={} mode={}",
        input.display(),
        file.system.v(),
        file.system.len(),
        mode_name(args.mode)
    );
    let outcome = match find_parallel_class_with(&file.system, &opts) {
        Ok(outcome) => outcome,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let nodes = outcome.nodes_explored;
    let ms = outcome.elapsed.as_millis();
    match outcome.status {
        SearchStatus::Found => {
            let rows: Vec<String> = outcome
                .witness
                .as_deref()
                .unwrap_or(&[])
                .iter()
                .map(u32::to_string)
                .collect();
            let _ = writeln!(
                out,
                "result: found (witness: {}) nodes={nodes} elapsed_ms={ms}",
                rows.join(" ")
            );
            if args.mode == SearchMode::ProveNone {
                EXIT_FAIL
            } else {
                EXIT_OK
            }
        }
        SearchStatus::NoSolution => {
            let _ = writeln!(
                out,
                "result: none (exhausted) nodes={nodes} elapsed_ms={ms}"
            );
            if args.mode == SearchMode::FindOne {
                EXIT_FAIL
            } else {
                EXIT_OK
            }
        }
        SearchStatus::Exhausted => {
            let count = outcome.count.expect("exhausted counts are complete");
            let _ = writeln!(
                out,
                "result: count={count} (exhausted) nodes={nodes} elapsed_ms={ms}"
            );
            EXIT_OK
        }
        SearchStatus::Timeout => {
            let _ = writeln!(out, "result: timeout nodes={nodes} elapsed_ms={ms}");
            EXIT_TIMEOUT
        }
    }
}
