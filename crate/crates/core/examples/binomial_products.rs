//! Binomial products over Z and F_p: the character test, nowhere-zero
//! witnesses, the t-adic decomposition and the derivation.
//!
//! cargo run --example binomial_products

use ajt_lab::binomial::{derivation, t_decompose, BinomialProduct};
use ajt_lab::group::GroupContext;
use ajt_lab::ring::{GroupRingElement, Ring};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = GroupContext::new(3, 2)?;
    let factors = vec![
        c.basis(0)?,
        c.basis(1)?,
        c.vector(vec![1, 1])?,
        c.vector(vec![1, 2])?,
    ];
    let bp = BinomialProduct::new(c, factors)?;
    let z = bp.dense_product(Ring::Z)?;
    println!("prod over Z       = {z}");
    println!(
        "character test    : {}  dense zero: {}",
        bp.z_identity_holds(),
        z.is_zero()
    );
    println!(
        "witness           : {:?}",
        bp.good_x_witness().map(|x| x.to_string())
    );

    let c = GroupContext::new(5, 2)?;
    let bp = BinomialProduct::new(c, vec![c.basis(0)?, c.basis(1)?, c.vector(vec![1, 1])?])?;
    let x = bp.good_x_witness().expect("p = 5 leaves room");
    println!("p=5 witness       : {x}  (nonzero against every factor)");
    println!("character test    : {}", bp.z_identity_holds());

    let prod = bp.dense_product(Ring::Fp)?;
    let d = t_decompose(&prod, 0)?;
    for (k, part) in d.parts.iter().enumerate() {
        println!("b_{k} = {part}");
    }
    println!("reconstructs      : {}", d.reconstruct()? == prod);

    let x = GroupRingElement::from_coeffs(c, Ring::Fp, (0..25).map(|i| i % 4).collect())?;
    let y = bp.dense_product(Ring::Fp)?;
    let lhs = derivation(&x.mul_general(&y)?, 1)?;
    let rhs = derivation(&x, 1)?
        .mul_general(&y)?
        .add(&x.mul_general(&derivation(&y, 1)?)?)?;
    println!("Leibniz on axis 1 : {}", lhs == rhs);
    Ok(())
}
