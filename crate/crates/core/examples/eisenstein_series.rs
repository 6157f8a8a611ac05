//! q-expansions of E_4, E_2 and a twisted series, plus a few L-values.

use qmdetect::algebra::{enumerate_characters, DirichletCharacter};
use qmdetect::eisenstein::{l_value, EisensteinSpec};

fn main() -> qmdetect::Result<()> {
    let one = DirichletCharacter::principal(1);
    println!("zeta(-1) = {}", l_value(2, &one));
    println!("zeta(-3) = {}", l_value(4, &one));
    let chi4 = DirichletCharacter::kronecker(-4)?;
    println!("L(0, chi_-4) = {}", l_value(1, &chi4));

    println!("E_4:\n{}", EisensteinSpec::level_one(4)?.qexp(6));
    println!("E_2:\n{}", EisensteinSpec::e2().qexp(6));

    // weight 3 needs an odd character pair
    let chars = enumerate_characters(5);
    let e = EisensteinSpec::new(3, chars[0].clone(), chars[1].clone())?;
    println!("{e}:\n{}", e.qexp(6));
    Ok(())
}
