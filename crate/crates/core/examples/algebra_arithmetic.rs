//! Exact arithmetic in a truncated free algebra and in a matrix algebra.

use ncurrents::{AlgElement, Algebra};

fn main() -> ncurrents::Result<()> {
    // words of length <= 4 in x, y with a unit adjoined
    let f = Algebra::free(2, 4, true)?;
    let a = AlgElement::parse(&f, "x + 2*y*x")?;
    let b = AlgElement::parse(&f, "[x, y] - 1/3*y")?;
    println!("a       = {a}");
    println!("b       = {b}");
    println!("a b     = {}", a.mul(&b)?);
    println!("[a, b]  = {}", a.commutator(&b)?);

    // 1 + x is a unit; its inverse is a truncated geometric series
    let u = AlgElement::parse(&f, "1 + x")?;
    let ui = u.inverse()?;
    println!("(1+x)^-1 = {ui}");
    assert_eq!(u.mul(&ui)?, AlgElement::one(&f)?);

    // terms past the truncation degree vanish
    let long = AlgElement::parse(&f, "x*y*x")?.mul(&AlgElement::parse(&f, "y*y")?)?;
    println!("xyx yy   = {long}  (degree 5 > 4)");

    let m2 = Algebra::matrices(2);
    println!(
        "M_2 has basis {:?}",
        (0..m2.dim()).map(|i| m2.basis_label(i)).collect::<Vec<_>>()
    );
    let e = AlgElement::parse(&m2, "e12")?;
    let g = AlgElement::parse(&m2, "e21")?;
    println!("[e12, e21] = {}", e.commutator(&g)?);
    Ok(())
}
