// Certified roots and refine-until-decided comparisons.

use mixmean::exactnum::rational::{int, ratio};
use mixmean::exactnum::{to_decimal, to_pq};
use mixmean::{compare, nth_root, CertifiedValue, PrecisionPolicy};

fn main() -> mixmean::Result<()> {
    let eps = ratio(1, 1_000_000_000_000_000_000);
    let sqrt2 = nth_root(&int(2), 2, &eps)?;
    println!("sqrt(2) in [{}, {}]", to_decimal(sqrt2.lo(), 24), to_decimal(sqrt2.hi(), 24));

    // perfect powers come back exact
    let cube = nth_root(&ratio(27, 8), 3, &eps)?;
    println!("(27/8)^(1/3) = {}", to_pq(cube.exact_value().expect("exact")));

    // 2^(1/4) * 8^(1/4) = 2, found symbolically
    let two = CertifiedValue::monomial(int(1), [(int(2), ratio(1, 4)), (int(8), ratio(1, 4))])?;
    println!("2^(1/4) * 8^(1/4) = {}", to_pq(two.exact_value().expect("exact")));

    // sqrt(2) + sqrt(3) against sqrt(10): differ by about 0.016
    let policy = PrecisionPolicy::default();
    let mut lhs = sqrt2.add(&nth_root(&int(3), 2, &eps)?)?;
    let mut rhs = nth_root(&int(10), 2, &eps)?;
    let out = compare(&mut lhs, &mut rhs, &policy);
    println!("sqrt(2)+sqrt(3) vs sqrt(10): {} after {} rounds", out.relation, out.precision_rounds);

    // 1000001^(1/3) against 100 + 1/30000: a gap near 1.1e-11
    let mut a = nth_root(&int(1_000_001), 3, &ratio(1, 1 << 20))?;
    let mut b = CertifiedValue::exact(int(100) + ratio(1, 30_000));
    let out = compare(&mut a, &mut b, &policy);
    println!(
        "cbrt(1000001) vs 100+1/30000: {} (rounds {}, width <= {})",
        out.relation,
        out.precision_rounds,
        to_decimal(&out.achieved_width, 30)
    );
    Ok(())
}
