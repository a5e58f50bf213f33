// Prints the weight tensor for n = 4 and checks its structural
// properties for every n up to 10.

use mixmean::weights::{build_tensor, check_lemma_properties};

fn main() -> mixmean::Result<()> {
    let t = build_tensor(4)?;
    println!("{t}");

    for n in 1..=10 {
        let report = check_lemma_properties(&build_tensor(n)?);
        let ids: Vec<String> = report
            .properties
            .iter()
            .map(|p| format!("{}={}", p.property.id(), if p.passed { "ok" } else { "FAIL" }))
            .collect();
        println!("n={n:>2}  {}", ids.join("  "));
    }
    Ok(())
}
