//! Graded subspaces: spans, sums, intersections and inclusion.

use ncurrents::{Algebra, GradedSubspace};

fn main() -> ncurrents::Result<()> {
    let f = Algebra::free(2, 3, false)?;
    let parse = |s: &str| f.parse(s).unwrap();

    let s = GradedSubspace::span(f.grading(), &[parse("x"), parse("x*y"), parse("y*x")]);
    let t = GradedSubspace::span(f.grading(), &[parse("x + y"), parse("x*y - y*x")]);
    println!("S dims per degree {:?}", s.dim_profile());
    println!("T dims per degree {:?}", t.dim_profile());

    // a non-homogeneous vector is split into its graded pieces
    println!("T contains y? {}", t.contains(&parse("y")));
    let sum = s.sum(&t)?;
    let meet = s.intersect(&t)?;
    println!(
        "S + T {:?}, S n T {:?}",
        sum.dim_profile(),
        meet.dim_profile()
    );
    assert_eq!(sum.dim() + meet.dim(), s.dim() + t.dim());

    // products and brackets of whole subspaces
    let gens = GradedSubspace::span(f.grading(), &f.generators());
    let sq = f.span_product(&gens, &gens);
    let br = f.span_bracket(&gens, &gens);
    println!("V V {:?}, [V, V] {:?}", sq.dim_profile(), br.dim_profile());
    println!("[V, V] in S? {}", br.is_subset(&s)?);
    for v in br.basis() {
        println!("  basis vector {}", f.format(&v));
    }
    Ok(())
}
