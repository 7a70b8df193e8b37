//! Diagonal matrices of units that normalize the current algebra.

use ncurrents::commfilt::FiltrationCache;
use ncurrents::current::{lie_closure, TensorContext};
use ncurrents::groups::{
    cartan_criterion_classical, cartan_criterion_sl2, diagonal_battery, in_group_direct,
    DiagonalUnit,
};
use ncurrents::pairs::pair_from_spec;
use ncurrents::Algebra;

fn main() -> ncurrents::Result<()> {
    let f = Algebra::free(2, 4, true)?;
    let mut filt = FiltrationCache::new(&f);

    let p = pair_from_spec("sl2irrep:3")?;
    let t = TensorContext::new(&f, 3);
    let l = lie_closure(&p, &t, None);
    for text in ["1;2;4", "1;1;1+x", "1;1;1+[x,y]", "1+x;1;1+y"] {
        let d = DiagonalUnit::parse(&f, text)?;
        let crit = cartan_criterion_sl2(&d, &mut filt)?;
        let direct = in_group_direct(&d.to_tensor(&t), &p, &t, &l)?;
        println!(
            "sl2irrep:3 diag({}) criterion {} direct {} (words up to degree {})",
            d.format(),
            crit.holds,
            direct.member,
            direct.budget
        );
    }

    // seeded battery on so:4
    let p = pair_from_spec("so:4")?;
    let t = TensorContext::new(&f, 4);
    let l = lie_closure(&p, &t, None);
    let battery = diagonal_battery(&mut filt, 4, 11, 2)?;
    for b in &battery {
        let crit = cartan_criterion_classical(&b.diag, &mut filt)?;
        let direct = in_group_direct(&b.diag.to_tensor(&t), &p, &t, &l)?;
        println!(
            "so:4 {:?}: criterion {} direct {}",
            b.kind, crit.holds, direct.member
        );
    }
    Ok(())
}
