//! Commutator spaces F^(k) and the ideals I_k of a free algebra.

use ncurrents::commfilt::FiltrationCache;
use ncurrents::Algebra;

fn main() -> ncurrents::Result<()> {
    let deg = 5;
    let f = Algebra::free(2, deg, false)?;
    let mut c = FiltrationCache::new(&f);
    println!("dimensions by degree 0..={deg}, two letters");
    for k in 0..=3 {
        println!("F^({k})  {:?}", c.commutator_space(k).dim_profile());
    }
    for k in 1..=4 {
        println!("I_{k}    {:?}", c.ideal_ik(k).dim_profile());
    }
    for l in 1..=3 {
        println!("I_2^{l}  {:?}", c.ideal_ikl(2, l).dim_profile());
    }

    // I_1 is the kernel of abelianization
    let xy = f.parse("x*y - y*x")?;
    let xx = f.parse("x*x")?;
    println!(
        "xy - yx in I_1: {}, xx in I_1: {}",
        c.in_ik(1, &xy),
        c.in_ik(1, &xx)
    );

    // in M_2 every I_k is the whole algebra
    let m2 = Algebra::matrices(2);
    let mut cm = FiltrationCache::new(&m2);
    println!(
        "M_2: dim I_1 = {}, dim I_3 = {}",
        cm.ideal_ik(1).dim(),
        cm.ideal_ik(3).dim()
    );
    Ok(())
}
