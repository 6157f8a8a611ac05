//! Peel a zeta-product expression into W_m blocks and certify it.

use qmdetect::wexpr::{certify_prime_detection, decompose, CertifyMode, PrimeCountPolicy, WExpression};

fn main() -> qmdetect::Result<()> {
    let w = WExpression::parse_terms("1,0,3; 1,1,1; -1,0,2; -1,1,2")?;
    println!("W = {w}");
    for (c, m) in decompose(&w)? {
        println!("  {c} * W{m}");
    }
    let cert = certify_prime_detection(&w, CertifyMode::All, PrimeCountPolicy::default())?;
    println!("verdict {:?}, modes agree: {}", cert.verdict, cert.modes_agree());

    let sigma = WExpression::parse_terms("1,0,1")?;
    let cert = certify_prime_detection(&sigma, CertifyMode::All, PrimeCountPolicy::default())?;
    let witness = cert.witness.expect("sigma_1 is not prime detecting");
    println!("sigma_1: a({}) = {}", witness.prime, witness.value);
    Ok(())
}
