//! tau(p) changes sign often; the E_2 coefficients at primes never do.

use qmdetect::detector::{sign_changes, Progression};
use qmdetect::eisenstein::EisensteinSpec;
use qmdetect::qseries::delta_series;

fn main() -> qmdetect::Result<()> {
    let bound = 10_000;
    let delta = delta_series(bound);
    let r = sign_changes(&delta, Progression::all(), bound)?;
    println!("Delta: {} sign changes over {} primes", r.count, r.primes_examined);
    println!("  first flips at {:?}", &r.positions[..r.positions.len().min(10)]);

    let r = sign_changes(&EisensteinSpec::e2(), Progression::all(), bound)?;
    println!("E_2: {} sign changes", r.count);

    let quarter = Progression::new(1, 4)?;
    let r = sign_changes(&delta, quarter, bound)?;
    println!("Delta on p = 1 mod 4: {} sign changes", r.count);
    Ok(())
}
