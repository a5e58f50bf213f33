// Certifies every claim on one non-constant and one constant sequence.

use mixmean::verify::verify_claims;
use mixmean::{Claim, PositiveSequence, PrecisionPolicy};

fn main() -> mixmean::Result<()> {
    let claims = Claim::parse_list("all")?;
    let policy = PrecisionPolicy::default();

    for text in ["3/2, 7, 1/5, 4, 11/3", "5/3, 5/3, 5/3, 5/3"] {
        let x = PositiveSequence::parse(text)?;
        println!("== x = {x}");
        for report in verify_claims(&claims, &x, &policy)? {
            print!("{}", report.to_text(12));
        }
        println!();
    }

    // JSON for a single claim
    let x = PositiveSequence::parse("1,2,3")?;
    let report = mixmean::verify::verify_prop3(&x, &policy)?;
    println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("serializable"));
    Ok(())
}
