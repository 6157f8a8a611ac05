//! Dirichlet characters mod 12 and mod 5, with conductors and parities.

use qmdetect::algebra::{enumerate_characters, DirichletCharacter};

fn main() -> qmdetect::Result<()> {
    for m in [5, 12] {
        println!("characters mod {m}");
        for chi in enumerate_characters(m) {
            let values: Vec<String> = (1..m as i64).map(|n| chi.value(n).to_string()).collect();
            println!(
                "  {chi}  order {}  conductor {}  parity {:+}  [{}]",
                chi.order(),
                chi.conductor(),
                chi.parity(),
                values.join(", ")
            );
        }
    }
    let chi = DirichletCharacter::kronecker(-3)?;
    println!("kronecker(-3) is {chi}, primitive: {}", chi.is_primitive());
    Ok(())
}
