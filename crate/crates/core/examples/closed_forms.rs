//! Closed-form descriptions of current algebras checked against saturation.

use ncurrents::current::{lie_closure, ClosedForms, TensorContext};
use ncurrents::pairs::{form_phi0, form_phi1, pair_from_spec};
use ncurrents::Algebra;

fn main() -> ncurrents::Result<()> {
    let f = Algebra::free(2, 4, false)?;
    let check =
        |name: &str,
         spec: &str,
         form: &dyn Fn(&mut ClosedForms) -> ncurrents::Result<ncurrents::GradedSubspace>| {
            let p = pair_from_spec(spec).unwrap();
            let t = TensorContext::new(&f, p.size());
            let l = lie_closure(&p, &t, None);
            let mut cf = ClosedForms::new(&p, &t);
            match form(&mut cf) {
                Ok(s) => println!(
                    "{name:<12} {spec:<11} {:?} equal: {}",
                    s.dim_profile(),
                    s == l
                ),
                Err(e) => println!("{name:<12} {spec:<11} not applicable: {e}"),
            }
        };
    check("type two", "sl:3", &|cf| cf.type2_formula());
    check("type two", "jordan:3", &|cf| cf.type2_formula());
    check("sl(V)", "sl:2", &|cf| Ok(cf.special_linear_form()));
    check("orthogonal", "so:4", &|cf| {
        cf.orthogonal_form(&form_phi0(4))
    });
    check("symplectic", "sp:4", &|cf| {
        cf.orthogonal_form(&form_phi1(2))
    });
    check("abelian", "jordan:3", &|cf| Ok(cf.abelian_currents_form()));
    check("semisimple", "so:3", &|cf| cf.semisimple_closed_form());
    check("sl2 irrep", "sl2irrep:4", &|cf| cf.sl2_closed_form());

    // coefficients in M_2, where I_1(F) = F
    let m2 = Algebra::matrices(2);
    let p = pair_from_spec("sl:2")?;
    let t = TensorContext::new(&m2, 2);
    let mut cf = ClosedForms::new(&p, &t);
    println!(
        "M_2 coefficients: dim {} equal: {}",
        cf.simple_f_form().dim(),
        cf.simple_f_form() == lie_closure(&p, &t, None)
    );
    Ok(())
}
