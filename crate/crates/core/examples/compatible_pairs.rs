//! Compatible pairs (g, A): type, perfectness and sl_2 decompositions.

use ncurrents::pairs::{casimir, pair_from_spec};

fn main() -> ncurrents::Result<()> {
    println!(
        "{:<12} {:>5} {:>5} {:>8} {:>8}",
        "pair", "dim g", "dim A", "type", "perfect"
    );
    for spec in [
        "gl:2",
        "sl:2",
        "sl:3",
        "so:2",
        "so:3",
        "so:4",
        "sp:4",
        "sl2irrep:3",
        "sl2irrep:4",
        "jordan:3",
    ] {
        let p = pair_from_spec(spec)?;
        let perfect = p.is_perfect(None);
        println!(
            "{:<12} {:>5} {:>5} {:>8} {:>8}",
            spec,
            p.g_space().dim(),
            p.a_space().dim(),
            p.pair_type().to_string(),
            perfect.perfect
        );
    }

    // M_n splits into V_0 + V_2 + ... + V_{2n-2} under the principal sl_2
    let n = 4;
    let p = pair_from_spec(&format!("sl2irrep:{n}"))?;
    let dims: Vec<usize> = (0..n).map(|k| p.sl2_module(k).dim()).collect();
    println!(
        "sl2irrep:{n} module dimensions {dims:?}, sum {}",
        dims.iter().sum::<usize>()
    );
    let c = casimir(n);
    println!("Casimir 2EF + 2FE + H^2 on the {n}-dimensional irrep:");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| c[(i, j)].to_string()).collect();
        println!("  {}", row.join(" "));
    }
    Ok(())
}
