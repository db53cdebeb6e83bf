//! Plain-text file formats.
//!
//! A system file starts with a header line
//!
//! ```text
//! sts v=27 b=117 source=constructed
//! ```
//!
//! followed by one line per triple: three ascending 0-based point indices,
//! separated by single spaces, lines sorted lexicographically. The
//! structured flavor additionally carries `#` comment lines (component
//! primes, family counts, extra-point indices, the coloring) between the
//! header and the triples, and a family tag as a fourth token on every
//! triple line. Reading a canonical file and writing it back in the same
//! flavor reproduces it byte for byte.
//!
//! A certificate file lists one line per premise plus a final verdict.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use sts_core::construct::{ColorTable, ConstructError, Role, TripleSystem};
use sts_core::group::GroupSpec;
use sts_core::verify::Certificate;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    /// Header and bare index triples.
    Text,
    /// Adds group metadata comments and family tags.
    Structured,
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("file is empty")]
    Empty,
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("header says b={header} but the file lists {actual} triples")]
    CountMismatch { header: usize, actual: usize },
    #[error("line {line}: triples are not in sorted order")]
    Unsorted { line: usize },
    #[error("component primes give order {order}, which cannot serve {v} points")]
    PrimesMismatch { v: u32, order: u64 },
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn malformed(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Malformed {
        line,
        msg: msg.into(),
    }
}

/// A parsed system file.
#[derive(Debug, Clone)]
pub struct SystemFile {
    pub system: TripleSystem,
    /// Free-form provenance token from the header.
    pub source: String,
    /// The coloring, when the file carried `# gamma` lines.
    pub gamma: Option<ColorTable>,
    /// Whether triple lines carried family tags.
    pub with_role_tokens: bool,
    /// The flavor the file was detected as.
    pub format: FileFormat,
}

impl SystemFile {
    pub fn new(system: TripleSystem, source: &str) -> SystemFile {
        let with_role_tokens = system.has_roles();
        SystemFile {
            system,
            source: source.to_string(),
            gamma: None,
            with_role_tokens,
            format: FileFormat::Text,
        }
    }
}

pub fn write_system<W: Write>(w: &mut W, file: &SystemFile, format: FileFormat) -> io::Result<()> {
    let sys = &file.system;
    writeln!(
        w,
        "sts v={} b={} source={}",
        sys.v(),
        sys.len(),
        file.source
    )?;
    match format {
        FileFormat::Text => {
            for t in sys.triples() {
                writeln!(w, "{} {} {}", t[0], t[1], t[2])?;
            }
        }
        FileFormat::Structured => {
            if let Some(spec) = sys.spec() {
                let primes: Vec<String> = spec.primes().iter().map(u64::to_string).collect();
                writeln!(w, "# primes {}", primes.join(" "))?;
            }
            let c = sys.role_counts();
            writeln!(
                w,
                "# roles b0={} binf={} bstar={} plain={}",
                c.zero_sum, c.infinity, c.seven_point, c.plain
            )?;
            if let Some(spec) = sys.spec() {
                writeln!(w, "# inf1={} inf2={}", spec.inf1_index(), spec.inf2_index())?;
            }
            if let Some(gamma) = &file.gamma {
                for (h, color) in gamma.entries() {
                    writeln!(w, "# gamma {h} {color}")?;
                }
            }
            for (t, role) in sys.triples().iter().zip(sys.roles()) {
                writeln!(w, "{} {} {} {}", t[0], t[1], t[2], role.tag())?;
            }
        }
    }
    Ok(())
}

pub fn system_to_string(file: &SystemFile, format: FileFormat) -> String {
    let mut buf = Vec::new();
    write_system(&mut buf, file, format).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("format emits UTF-8")
}

pub fn write_system_to_path(
    path: &Path,
    file: &SystemFile,
    format: FileFormat,
) -> Result<(), FormatError> {
    let mut out = io::BufWriter::new(fs::File::create(path)?);
    write_system(&mut out, file, format)?;
    out.flush()?;
    Ok(())
}

struct HeaderLine {
    v: u32,
    b: usize,
    source: String,
}

fn parse_header(line: &str) -> Result<HeaderLine, FormatError> {
    let bad = || malformed(1, "expected header `sts v=<v> b=<count> source=<tag>`");
    let rest = line.strip_prefix("sts ").ok_or_else(bad)?;
    let fields: Vec<&str> = rest.split(' ').collect();
    if fields.len() != 3 {
        return Err(bad());
    }
    let v = fields[0]
        .strip_prefix("v=")
        .and_then(|s| s.parse().ok())
        .ok_or_else(bad)?;
    let b = fields[1]
        .strip_prefix("b=")
        .and_then(|s| s.parse().ok())
        .ok_or_else(bad)?;
    let source = fields[2].strip_prefix("source=").ok_or_else(bad)?;
    if source.is_empty() {
        return Err(bad());
    }
    Ok(HeaderLine {
        v,
        b,
        source: source.to_string(),
    })
}

struct RolesLine {
    b0: usize,
    binf: usize,
    bstar: usize,
    plain: usize,
}

fn parse_roles_comment(line_no: usize, rest: &str) -> Result<RolesLine, FormatError> {
    let bad = || {
        malformed(
            line_no,
            "expected `# roles b0=<n> binf=<n> bstar=<n> plain=<n>`",
        )
    };
    let fields: Vec<&str> = rest.split(' ').collect();
    if fields.len() != 4 {
        return Err(bad());
    }
    let grab = |field: &str, key: &str| -> Result<usize, FormatError> {
        field
            .strip_prefix(key)
            .and_then(|s| s.strip_prefix('='))
            .and_then(|s| s.parse().ok())
            .ok_or_else(bad)
    };
    Ok(RolesLine {
        b0: grab(fields[0], "b0")?,
        binf: grab(fields[1], "binf")?,
        bstar: grab(fields[2], "bstar")?,
        plain: grab(fields[3], "plain")?,
    })
}

pub fn read_system(input: &str) -> Result<SystemFile, FormatError> {
    let mut lines = input.lines().enumerate();
    let (_, header_line) = lines.next().ok_or(FormatError::Empty)?;
    let header = parse_header(header_line)?;

    let mut primes: Option<Vec<u64>> = None;
    let mut roles_line: Option<RolesLine> = None;
    let mut inf_line: Option<(u64, u64)> = None;
    let mut gamma_entries: Vec<(u64, u8)> = Vec::new();
    let mut triples: Vec<[u32; 3]> = Vec::new();
    let mut roles: Vec<Role> = Vec::new();
    let mut role_tokens: Option<bool> = None;
    let mut saw_comment = false;
    let mut first_unsorted: Option<usize> = None;

    for (idx, line) in lines {
        let line_no = idx + 1;
        if let Some(comment) = line.strip_prefix("# ") {
            saw_comment = true;
            if !triples.is_empty() {
                return Err(malformed(line_no, "comments must precede the triples"));
            }
            if let Some(rest) = comment.strip_prefix("primes ") {
                if primes.is_some() {
                    return Err(malformed(line_no, "duplicate primes comment"));
                }
                let parsed: Result<Vec<u64>, _> =
                    rest.split(' ').map(|tok| tok.parse::<u64>()).collect();
                match parsed {
                    Ok(list) if !list.is_empty() => primes = Some(list),
                    _ => return Err(malformed(line_no, "expected `# primes <p> <p> ...`")),
                }
            } else if let Some(rest) = comment.strip_prefix("roles ") {
                if roles_line.is_some() {
                    return Err(malformed(line_no, "duplicate roles comment"));
                }
                roles_line = Some(parse_roles_comment(line_no, rest)?);
            } else if let Some(rest) = comment.strip_prefix("inf1=") {
                if inf_line.is_some() {
                    return Err(malformed(line_no, "duplicate extra-point comment"));
                }
                let parts: Option<(u64, u64)> = rest
                    .split_once(" inf2=")
                    .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)));
                inf_line =
                    Some(parts.ok_or_else(|| {
                        malformed(line_no, "expected `# inf1=<index> inf2=<index>`")
                    })?);
            } else if let Some(rest) = comment.strip_prefix("gamma ") {
                let entry: Option<(u64, u8)> = rest
                    .split_once(' ')
                    .and_then(|(h, c)| Some((h.parse().ok()?, c.parse().ok()?)));
                gamma_entries.push(
                    entry.ok_or_else(|| {
                        malformed(line_no, "expected `# gamma <h-index> <color>`")
                    })?,
                );
            } else {
                return Err(malformed(line_no, format!("unknown comment `{line}`")));
            }
            continue;
        }

        let tokens: Vec<&str> = line.split(' ').collect();
        if tokens.len() != 3 && tokens.len() != 4 {
            return Err(malformed(
                line_no,
                "expected `<i> <j> <k>` or `<i> <j> <k> <family>`",
            ));
        }
        let mut triple = [0u32; 3];
        for (slot, tok) in triple.iter_mut().zip(&tokens) {
            *slot = tok
                .parse()
                .map_err(|_| malformed(line_no, format!("bad point index `{tok}`")))?;
        }
        let has_tag = tokens.len() == 4;
        match role_tokens {
            None => role_tokens = Some(has_tag),
            Some(expected) if expected != has_tag => {
                return Err(malformed(
                    line_no,
                    "family tags must be on all lines or none",
                ));
            }
            _ => {}
        }
        let role = if has_tag {
            Role::from_tag(tokens[3])
                .ok_or_else(|| malformed(line_no, format!("unknown family tag `{}`", tokens[3])))?
        } else {
            Role::Plain
        };
        if let Some(prev) = triples.last() {
            if *prev > triple && first_unsorted.is_none() {
                first_unsorted = Some(line_no);
            }
        }
        triples.push(triple);
        roles.push(role);
    }

    if triples.len() != header.b {
        return Err(FormatError::CountMismatch {
            header: header.b,
            actual: triples.len(),
        });
    }
    if let Some(line) = first_unsorted {
        return Err(FormatError::Unsorted { line });
    }

    let spec = match &primes {
        Some(list) => {
            let spec = GroupSpec::new(list).map_err(ConstructError::Group)?;
            if spec.v() != header.v as u64 {
                return Err(FormatError::PrimesMismatch {
                    v: header.v,
                    order: spec.order(),
                });
            }
            Some(spec)
        }
        None => None,
    };
    if let Some((i1, i2)) = inf_line {
        match &spec {
            Some(spec) if i1 == spec.inf1_index() && i2 == spec.inf2_index() => {}
            _ => {
                return Err(malformed(
                    1,
                    "extra-point comment does not match the component primes",
                ))
            }
        }
    }
    let gamma = if gamma_entries.is_empty() {
        None
    } else {
        let spec = spec.as_ref().ok_or_else(|| {
            malformed(1, "gamma comments need a primes comment to fix the domain")
        })?;
        Some(ColorTable::from_entries(spec.h_order(), &gamma_entries)?)
    };

    let with_role_tokens = role_tokens.unwrap_or(false);
    let system = TripleSystem::new(header.v, triples, roles, spec)?;
    if let Some(expect) = roles_line {
        let c = system.role_counts();
        if (c.zero_sum, c.infinity, c.seven_point, c.plain)
            != (expect.b0, expect.binf, expect.bstar, expect.plain)
        {
            return Err(malformed(1, "roles comment does not match the family tags"));
        }
    }
    let format = if saw_comment || with_role_tokens {
        FileFormat::Structured
    } else {
        FileFormat::Text
    };
    Ok(SystemFile {
        system,
        source: header.source,
        gamma,
        with_role_tokens,
        format,
    })
}

pub fn read_system_from_path(path: &Path) -> Result<SystemFile, FormatError> {
    read_system(&fs::read_to_string(path)?)
}

/// Renders a certificate: a header, one line per premise, and the verdict.
pub fn certificate_to_string(cert: &Certificate, toolkit: &str) -> String {
    let mut out = String::new();
    writeln!(out, "certificate v={} toolkit={}", cert.v, toolkit).unwrap();
    for p in &cert.premises {
        writeln!(
            out,
            "{} {} checked={} {}",
            p.id,
            if p.passed { "pass" } else { "fail" },
            p.checked,
            p.description
        )
        .unwrap();
    }
    writeln!(
        out,
        "verdict {}",
        if cert.is_valid() { "valid" } else { "invalid" }
    )
    .unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use sts_core::construct::construct_sts;

    fn sample() -> SystemFile {
        let built = construct_sts(27).unwrap();
        SystemFile {
            system: built.system,
            source: "constructed".to_string(),
            gamma: Some(built.colors),
            with_role_tokens: true,
            format: FileFormat::Structured,
        }
    }

    #[test]
    fn structured_round_trip_is_byte_identical() {
        let file = sample();
        let text = system_to_string(&file, FileFormat::Structured);
        let parsed = read_system(&text).unwrap();
        assert_eq!(parsed.system, file.system);
        assert_eq!(parsed.gamma, file.gamma);
        assert_eq!(parsed.source, "constructed");
        assert_eq!(parsed.format, FileFormat::Structured);
        assert!(parsed.with_role_tokens);
        assert_eq!(system_to_string(&parsed, FileFormat::Structured), text);
    }

    #[test]
    fn text_round_trip_is_byte_identical() {
        let file = sample();
        let text = system_to_string(&file, FileFormat::Text);
        let parsed = read_system(&text).unwrap();
        assert_eq!(parsed.system.triples(), file.system.triples());
        assert_eq!(parsed.format, FileFormat::Text);
        assert!(!parsed.with_role_tokens);
        assert!(parsed.system.spec().is_none());
        assert_eq!(system_to_string(&parsed, FileFormat::Text), text);
    }

    #[test]
    fn structured_header_and_comments_look_right() {
        let text = system_to_string(&sample(), FileFormat::Structured);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("sts v=27 b=117 source=constructed"));
        assert_eq!(lines.next(), Some("# primes 5 5"));
        assert_eq!(lines.next(), Some("# roles b0=90 binf=20 bstar=7 plain=0"));
        assert_eq!(lines.next(), Some("# inf1=25 inf2=26"));
        assert_eq!(lines.next(), Some("# gamma 1 1"));
        assert!(text.lines().count() > 121);
    }

    #[test]
    fn rejects_bad_headers() {
        assert!(matches!(read_system(""), Err(FormatError::Empty)));
        for bad in [
            "sty v=9 b=0 source=x",
            "sts v=9 b=0",
            "sts v=9 b=0 source=",
            "sts b=0 v=9 source=x",
            "sts v=nine b=0 source=x",
        ] {
            assert!(
                matches!(
                    read_system(bad),
                    Err(FormatError::Malformed { line: 1, .. })
                ),
                "{bad}"
            );
        }
    }

    #[test]
    fn rejects_count_and_order_defects() {
        assert!(matches!(
            read_system("sts v=9 b=2 source=x\n0 1 2\n"),
            Err(FormatError::CountMismatch {
                header: 2,
                actual: 1
            })
        ));
        assert!(matches!(
            read_system("sts v=9 b=2 source=x\n3 4 5\n0 1 2\n"),
            Err(FormatError::Unsorted { line: 3 })
        ));
        assert!(matches!(
            read_system("sts v=9 b=1 source=x\n0 1 9\n"),
            Err(FormatError::Construct(_))
        ));
        assert!(matches!(
            read_system("sts v=9 b=1 source=x\n0 2 1\n"),
            Err(FormatError::Construct(_))
        ));
    }

    #[test]
    fn rejects_inconsistent_metadata() {
        let err = read_system("sts v=9 b=0 source=x\n# primes 5 5\n").unwrap_err();
        assert!(matches!(
            err,
            FormatError::PrimesMismatch { v: 9, order: 25 }
        ));

        let err =
            read_system("sts v=27 b=0 source=x\n# primes 5 5\n# inf1=7 inf2=26\n").unwrap_err();
        assert!(matches!(err, FormatError::Malformed { .. }));

        let err = read_system("sts v=9 b=0 source=x\n# gamma 1 1\n").unwrap_err();
        assert!(err.to_string().contains("primes"));

        let err = read_system("sts v=9 b=1 source=x\n0 1 2 b9\n").unwrap_err();
        assert!(err.to_string().contains("unknown family tag"));

        let err = read_system("sts v=9 b=2 source=x\n0 1 2 b0\n3 4 5\n").unwrap_err();
        assert!(err.to_string().contains("all lines or none"));

        let err = read_system("sts v=9 b=1 source=x\n# chatter\n0 1 2\n").unwrap_err();
        assert!(err.to_string().contains("unknown comment"));

        let err = read_system("sts v=9 b=1 source=x\n# roles b0=1 binf=0 bstar=0 plain=0\n0 1 2\n")
            .unwrap_err();
        assert!(err.to_string().contains("does not match the family tags"));
    }

    #[test]
    fn duplicate_lines_parse_for_the_verifier_to_judge() {
        let parsed = read_system("sts v=9 b=2 source=x\n0 1 2\n0 1 2\n").unwrap();
        assert_eq!(parsed.system.len(), 2);
    }

    #[test]
    fn certificate_rendering() {
        let built = construct_sts(27).unwrap();
        let cert = sts_core::verify::certify_no_parallel_class(
            &built.system,
            &built.spec,
            Some(&built.colors),
        )
        .unwrap();
        let text = certificate_to_string(&cert, "stskit/0.1.0");
        assert!(text.starts_with("certificate v=27 toolkit=stskit/0.1.0\n"));
        assert!(text.contains("P1 pass checked=351 "));
        assert!(text.contains("P10 pass checked=25 "));
        assert!(text.ends_with("verdict valid\n"));
        assert_eq!(text.lines().count(), 12);
    }
}
