//! (n^2 - 3n + 2) M_1(n) = 8 M_2(n) exactly at the primes.

use std::time::Instant;

use qmdetect::macmahon::{macmahon_table, verify_prime_identity};

fn main() -> qmdetect::Result<()> {
    let m2 = macmahon_table(2, 12)?;
    print!("{}", m2.to_csv());

    let start = Instant::now();
    let report = verify_prime_identity(2000)?;
    println!(
        "checked n = 2..={}: {} mismatches in {:.2?}",
        report.nmax,
        report.mismatches.len(),
        start.elapsed()
    );
    Ok(())
}
