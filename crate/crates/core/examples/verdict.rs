//! Three-way verdict for one matrix: F_p identity, Z identity and a
//! nowhere-zero witness, plus the same after a monomial transform.
//!
//! cargo run --example verdict -- 3 "1,1;1,2"

use ajt_lab::ajt::verdict_with_mode;
use ajt_lab::binomial::FpMode;
use ajt_lab::matrix::MonomialMatrix;
use ajt_lab::report::parse_matrix;
use ajt_lab::scan::canonical_form;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let p = args.first().map_or(Ok(3), |s| s.parse())?;
    let rows = args.get(1).map_or("1,1;1,2", String::as_str);
    let m = parse_matrix(p, rows)?;
    m.require_nonsingular()?;

    let v = verdict_with_mode(&m, FpMode::Reduced)?;
    let full = verdict_with_mode(&m, FpMode::Full)?;
    println!("M = [{m}] over F_{p}");
    println!(
        "  F_p identity {}  (dense check agrees: {})",
        v.fp_identity,
        v.fp_identity == full.fp_identity
    );
    println!("  Z identity   {}", v.z_identity);
    match &v.ajt_witness {
        Some(x) => println!("  witness x = {x}, Mx = {}", m.apply(x)),
        None => println!("  no nowhere-zero x with Mx nowhere zero: a counterexample"),
    }
    println!(
        "  consistent {}  violates the mod-p implication {}",
        v.consistent,
        v.violates_conjecture()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let t = m.monomial_transform(
        &MonomialMatrix::random(m.n(), p, &mut rng),
        &MonomialMatrix::random(m.n(), p, &mut rng),
    );
    let w = verdict_with_mode(&t, FpMode::Reduced)?;
    println!(
        "L M R^T = [{t}]: same booleans {}",
        (v.fp_identity, v.z_identity) == (w.fp_identity, w.z_identity)
    );
    println!("canonical form [{}]", canonical_form(&m));
    Ok(())
}
