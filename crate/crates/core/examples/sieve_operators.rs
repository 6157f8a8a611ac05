//! Sieving, V_d and twisting on a truncated q-series.

use qmdetect::algebra::{CycValue, DirichletCharacter};
use qmdetect::eisenstein::EisensteinSpec;

fn main() -> qmdetect::Result<()> {
    let f = EisensteinSpec::level_one(4)?.qexp(30);
    let s = f.sieve(3, 1);
    println!("E_4 | S(3,1):\n{s}");
    println!("idempotent: {}", s.sieve(3, 1).coeffs() == s.coeffs());
    println!("S(3,1) S(3,2) = 0: {}", s.sieve(3, 2).is_zero());
    println!("E_4 | V_2 level {}", f.v_operator(2).level());

    // f - f x chi_-3 keeps 2 c(n) on n = 2 mod 3 and kills n = 1 mod 3
    let chi = DirichletCharacter::kronecker(-3)?;
    let g = f.sub(&f.twist(&chi));
    let ok = (1..=30).filter(|n| n % 3 == 1).all(|n| g.coeff(n).unwrap().is_zero());
    println!("f - f x chi_-3 vanishes on 1 mod 3: {ok}");
    println!("c(2) = {}", g.coeff(2).unwrap_or(&CycValue::zero()));
    Ok(())
}
