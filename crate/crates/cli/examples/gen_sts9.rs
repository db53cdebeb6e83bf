//! Writes the 9-point control fixture to stdout: the zero-sum triples over
//! Z3 x Z3 with points numbered 3a + b.
//!
//! ```text
//! cargo run -p stskit --example gen_sts9 > data/sts9.txt
//! ```
//!
//! The fixture anchors the solver tests (it has exactly four parallel
//! classes), so it is generated here from first principles instead of going
//! through the library code paths it is meant to check.

fn main() {
    let mut triples = Vec::new();
    for i in 0..9u32 {
        for j in (i + 1)..9 {
            let (ai, bi) = (i / 3, i % 3);
            let (aj, bj) = (j / 3, j % 3);
            let k = 3 * ((6 - ai - aj) % 3) + (6 - bi - bj) % 3;
            if k > j {
                triples.push([i, j, k]);
            }
        }
    }
    triples.sort_unstable();
    println!("sts v=9 b={} source=fixture", triples.len());
    for t in triples {
        println!("{} {} {}", t[0], t[1], t[2]);
    }
}
