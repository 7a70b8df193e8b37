//! The current algebra of a pair, squeezed between its lower and upper bounds.

use ncurrents::current::{lie_closure, ClosedForms, TensorContext};
use ncurrents::pairs::pair_from_spec;
use ncurrents::Algebra;

fn main() -> ncurrents::Result<()> {
    let f = Algebra::free(2, 4, false)?;
    for spec in ["sl:2", "so:3", "jordan:3"] {
        let p = pair_from_spec(spec)?;
        let t = TensorContext::new(&f, p.size());
        let l = lie_closure(&p, &t, None);
        let mut cf = ClosedForms::new(&p, &t);
        let over = cf.overline_bound(None);
        let tilde = cf.tilde_bound(None);
        let fg = cf.fg();
        println!("{spec}");
        println!("  F g       {:?}", fg.dim_profile());
        println!("  current   {:?}", l.dim_profile());
        println!("  refined   {:?}", over.dim_profile());
        println!("  upper     {:?}", tilde.dim_profile());
        assert!(l.is_subset(&over)? && over.is_subset(&tilde)?);
        println!("  bracket closed: {}", t.is_bracket_closed(&tilde));
    }
    Ok(())
}
