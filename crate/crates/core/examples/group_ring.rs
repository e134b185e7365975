//! Arithmetic in Z[F_p^n] and F_p[F_p^n]: products, reduction mod p,
//! division by a binomial.
//!
//! cargo run --example group_ring

use ajt_lab::group::GroupContext;
use ajt_lab::ring::{GroupRingElement, Ring};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // (1 - g)^2 = 2 - 2g in Z[Z_2], which vanishes mod 2.
    let c = GroupContext::new(2, 1)?;
    let g = c.basis(0)?;
    let t = GroupRingElement::binomial(c, Ring::Z, &g)?;
    let sq = t.mul_general(&t)?;
    println!("(1-g)^2 over Z      = {sq}");
    println!("reduced mod 2       = {}", sq.reduce_mod_p()?);

    // (1 - g)(1 + g + g^2) = 0 in Z[Z_3].
    let c = GroupContext::new(3, 1)?;
    let sum = GroupRingElement::from_coeffs(c, Ring::Z, vec![1, 1, 1])?;
    let prod = sum.mul_binomial(&c.basis(0)?)?;
    println!("(1-g)(1+g+g^2)      = {prod}  zero: {}", prod.is_zero());

    // The fast binomial product agrees with the full convolution.
    let c = GroupContext::new(3, 2)?;
    let x = GroupRingElement::from_coeffs(c, Ring::Z, vec![2, -1, 0, 0, 3, 0, 1, 0, -2])?;
    let v = c.vector(vec![1, 2])?;
    let fast = x.mul_binomial(&v)?;
    let slow = x.mul_general(&GroupRingElement::binomial(c, Ring::Z, &v)?)?;
    println!("x(1-g^(1,2))        = {fast}");
    println!("matches convolution : {}", fast == slow);

    // Division by 1 - g^{e_1} inverts multiplication.
    let e1 = c.basis(0)?;
    let big_q = x.mul_binomial(&e1)?;
    let q = big_q.divide_by_binomial(0)?;
    println!("Q / (1-g^e1)        = {q}");
    println!("round trip          : {}", q.mul_binomial(&e1)? == big_q);
    println!("x in the ideal      : {}", x.in_binomial_ideal(0)?);
    Ok(())
}
