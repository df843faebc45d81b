use std::time::Instant;

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let t = Instant::now();
    let table = outfn_euler::chi::chi_lambert(n).unwrap();
    println!(
        "n={n} in {:.2?}; ch_n has {} / {} bits",
        t.elapsed(),
        table.ch(n).numer().significant_bits(),
        table.ch(n).denom().significant_bits()
    );
}
