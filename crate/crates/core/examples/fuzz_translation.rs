//! Differential fuzzing of the valued-to-ring translation.
//!
//! `cargo run --release --example fuzz_translation -- [cases] [seed]`

use valued_fragments::decide::{fuzz_translation, CaseStatus, FuzzConfig};
use valued_fragments::translate::EtaVariant;

fn main() {
    let mut args = std::env::args().skip(1);
    let cases = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);

    let cfg = FuzzConfig {
        cases,
        seed,
        pin_boundary: true,
        ..FuzzConfig::default()
    };
    let start = std::time::Instant::now();
    let report = fuzz_translation(&cfg);
    println!(
        "corrected bundle: {} ({:.2?})",
        report.summary(),
        start.elapsed()
    );
    println!("unknown: {}", report.unknown());
    for r in report
        .records
        .iter()
        .filter(|r| r.status != CaseStatus::Agree)
        .take(5)
    {
        println!("  {} note={:?}", r.to_line(), r.note);
    }

    // the printed exponent fails on the pinned boundary point in every field
    let literal = FuzzConfig {
        eta: EtaVariant::PaperLiteral,
        ..cfg
    };
    let report = fuzz_translation(&literal);
    println!("literal bundle: {}", report.summary());
    for r in report.disagreements().take(3) {
        println!("  {}", r.to_line());
    }
}
