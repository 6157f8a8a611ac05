//! The H-combinations at level 5 and a finite check of one difference.

use qmdetect::eisenstein::{
    finite_prime_check, h_difference, prime_coefficient_polynomial, primes_in_progression, spanning_set,
    ParityPolicy,
};

fn main() -> qmdetect::Result<()> {
    let (modulus, residue) = (5, 2);
    let pairs = spanning_set(6, modulus, residue, ParityPolicy::Formal)?;
    println!("{} differences at K = 6 for p = {residue} mod {modulus}", pairs.len());

    let (a, b) = &pairs[0];
    let f = h_difference(a, b);
    let poly = prime_coefficient_polynomial(&f, residue, modulus)?;
    let primes = primes_in_progression(residue, modulus, poly.degree_bound() + 1);
    let cert = finite_prime_check(&poly, &primes)?;
    println!("{a} - {b}");
    println!("  degree bound {}, primes {:?}, verdict {:?}", poly.degree_bound(), primes, cert.verdict);

    let series = a.qexp(primes.last().copied().unwrap_or(1));
    for p in primes {
        println!("  c_H({p}) = {}", series.coeff(p).unwrap());
    }
    Ok(())
}
