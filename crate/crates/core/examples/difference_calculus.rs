//! Difference tables of ratio sequences and the conjugation expansion.

use ncurrents::commfilt::FiltrationCache;
use ncurrents::current::TensorContext;
use ncurrents::groups::{
    diagonal_from_ratios, expansion_deltas, expansion_sign, inverse_table_check, solve_m_from_h,
    DifferenceTable, Root,
};
use ncurrents::Algebra;

fn main() -> ncurrents::Result<()> {
    let f = Algebra::free(2, 4, true)?;
    let mut filt = FiltrationCache::new(&f);

    // prescribe Δ^(1) in I_1 and Δ^(2) in I_2, then solve for m_1, m_2, m_3
    let hs = vec![f.parse("[x,y]")?, f.parse("[x,[x,y]]")?];
    let ms = solve_m_from_h(&mut filt, &f.parse("1 + y")?, &hs)?;
    for (i, m) in ms.iter().enumerate() {
        println!("m_{} = {}", i + 1, f.format(m));
    }
    let table = DifferenceTable::new(&f, &ms)?;
    println!("table recursion holds: {}", table.recursion_holds());
    println!("m_(i,j) in I_(j-i): {}", table.all_in_filtration(&mut filt));
    let inv = inverse_table_check(&mut filt, &ms)?;
    println!(
        "direct {} star {} equivalent {}",
        inv.direct,
        inv.star,
        inv.equivalent()
    );

    // conjugating u ⊗ E and u ⊗ F by the diagonal built from these ratios
    let d = diagonal_from_ratios(&f, &f.parse("1")?, &ms)?;
    let t = TensorContext::new(&f, d.len());
    let u = f.parse("x")?;
    for root in [Root::Raising, Root::Lowering] {
        let deltas = expansion_deltas(&d, &u, root)?;
        let sign = expansion_sign(&d, &u, &t, root)?;
        let sign = match sign {
            Some(0) => "(-1)^k",
            Some(_) => "(-1)^(k+1)",
            None => "none",
        };
        let terms: Vec<usize> = deltas.iter().map(|d| d.len()).collect();
        println!("{root:?}: coefficient k is {sign} Δ^(k), term counts {terms:?}");
    }
    Ok(())
}
