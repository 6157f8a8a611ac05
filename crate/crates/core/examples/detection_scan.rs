//! Scan H_{4,3} - H_{5,2} and sigma_1 for vanishing at primes.

use qmdetect::algebra::DirichletCharacter;
use qmdetect::detector::{scan_detection, Progression, ScanOptions};
use qmdetect::eisenstein::{h_difference, HSpec};
use qmdetect::qseries::FnSource;

fn main() -> qmdetect::Result<()> {
    let one = DirichletCharacter::principal(1);
    let h = |k, l| HSpec::new(k, l, one.clone(), one.clone(), 1, 1);
    let f = h_difference(&h(4, 3)?, &h(5, 2)?);
    let options = ScanOptions { strong: true, max_witnesses: 5 };
    let report = scan_detection(&f, Progression::all(), 1, 2000, options)?;
    println!(
        "H(4,3) - H(5,2): {:?} ({} primes, {} zero composites)",
        report.verdict, report.primes_checked, report.nonprime_zeros
    );

    let sigma = FnSource(|n: u64| {
        let s: u64 = qmdetect::algebra::divisors(n).iter().sum();
        qmdetect::algebra::CycValue::from_integer(s as i64)
    });
    let report = scan_detection(&sigma, Progression::all(), 1, 100, ScanOptions::default())?;
    let w = &report.witnesses[0];
    println!("sigma_1: {:?}, first witness c({}) = {}", report.verdict, w.n, w.value);
    Ok(())
}
