// Prefix means and mixed means of a short sequence, then the chain of
// triple mixed means.

use mixmean::exactnum::to_decimal;
use mixmean::means::{mixed_mean, mixed_pairs, prefix_means, triple_mixed_mean, THEOREM_CHAIN};
use mixmean::{CertifiedValue, MeanKind, PositiveSequence};

fn show(v: &CertifiedValue) -> String {
    match v.exact_value() {
        Some(r) => format!("{r} (exact)"),
        None => format!("{}..{}", to_decimal(v.lo(), 15), to_decimal(v.hi(), 15)),
    }
}

fn main() -> mixmean::Result<()> {
    let x = PositiveSequence::parse("1, 2, 4, 8, 1/2")?;
    println!("x = {x}");

    for kind in MeanKind::ALL {
        let row: Vec<String> = prefix_means(&x, kind)?.iter().map(show).collect();
        println!("{}_j: {}", kind.symbol(), row.join(", "));
    }

    println!();
    for (outer, inner) in mixed_pairs() {
        println!("{}({})  {}", outer.symbol(), inner.symbol(), show(&mixed_mean(&x, outer, inner)?));
    }

    println!();
    for (outer, mid, inner) in THEOREM_CHAIN {
        let v = triple_mixed_mean(&x, outer, mid, inner)?;
        println!("{}({}({}))  {}", outer.symbol(), mid.symbol(), inner.symbol(), show(&v));
    }
    Ok(())
}
