// A small seeded campaign over each default family, then a replay of one
// generated input.

use mixmean::fuzz::{generate_sequence, replay_input, run_campaign, Family, FuzzConfig};

fn main() -> mixmean::Result<()> {
    for family in Family::defaults() {
        let cfg = FuzzConfig::new(42, 20, 2, 5, family);
        let res = run_campaign(&cfg)?;
        let worst = res
            .worst_margin
            .as_ref()
            .map(|w| format!("{} {} margin>={}", w.claim, w.label, w.margin_lo))
            .unwrap_or_else(|| "-".into());
        println!(
            "{:<22} trials={} failures={} undecided={} worst: {}",
            res.family, res.trials, res.failures, res.undecided, worst
        );
    }

    let cfg = FuzzConfig::new(42, 20, 2, 5, "near-constant:1/1000".parse()?);
    let x = generate_sequence(&cfg, 7)?;
    let back = replay_input(&x.to_strings())?;
    assert_eq!(x, back);
    println!("trial 7 of near-constant:1/1000 -> {x}");
    Ok(())
}
