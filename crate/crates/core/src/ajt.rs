//! The nowhere-zero predicate for a single matrix and the combined verdict.

use serde::{Deserialize, Serialize};

use crate::binomial::{fp_identity_test, BinomialProduct, FpMode};
use crate::error::Result;
use crate::group::GroupVector;
use crate::matrix::MatrixFp;

/// Smallest x (mixed-radix order) such that x and Mx have no zero entry.
pub fn find_good_vector(m: &MatrixFp) -> Result<Option<GroupVector>> {
    m.require_nonsingular()?;
    Ok(good_vector_unchecked(m))
}

pub(crate) fn good_vector_unchecked(m: &MatrixFp) -> Option<GroupVector> {
    let p = m.p();
    let n = m.n();
    let rows: Vec<&[u32]> = m.rows().iter().map(|r| r.coords()).collect();
    let mut x = vec![1u32; n];
    loop {
        if rows.iter().all(|r| crate::group::dot_mod(r, &x, p) != 0) {
            return Some(m.ctx().vector(x).unwrap());
        }
        // Odometer over [1, p-1]^n, axis 0 fastest.
        let mut axis = 0;
        loop {
            if axis == n {
                return None;
            }
            x[axis] += 1;
            if x[axis] < p {
                break;
            }
            x[axis] = 1;
            axis += 1;
        }
    }
}

/// True iff no nowhere-zero x has Mx nowhere zero.
pub fn is_counterexample(m: &MatrixFp) -> Result<bool> {
    Ok(find_good_vector(m)?.is_none())
}

/// The three answers for one matrix and whether they cohere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixVerdict {
    pub fp_identity: bool,
    pub z_identity: bool,
    pub ajt_witness: Option<GroupVector>,
    pub consistent: bool,
}

impl MatrixVerdict {
    pub fn from_parts(
        fp_identity: bool,
        z_identity: bool,
        ajt_witness: Option<GroupVector>,
    ) -> Self {
        let consistent = z_identity == ajt_witness.is_none();
        MatrixVerdict {
            fp_identity,
            z_identity,
            ajt_witness,
            consistent,
        }
    }

    /// The F_p identity holds while the Z identity fails.
    pub fn violates_conjecture(&self) -> bool {
        self.fp_identity && !self.z_identity
    }

    pub fn is_counterexample(&self) -> bool {
        self.ajt_witness.is_none()
    }

    /// The Z identity forces the F_p identity.
    pub fn mod_p_compatible(&self) -> bool {
        !self.z_identity || self.fp_identity
    }
}

pub fn verdict(m: &MatrixFp) -> Result<MatrixVerdict> {
    verdict_with_mode(m, FpMode::Reduced)
}

pub fn verdict_with_mode(m: &MatrixFp, mode: FpMode) -> Result<MatrixVerdict> {
    let fp_identity = fp_identity_test(m, mode)?;
    let z_identity = BinomialProduct::for_matrix(m).z_identity_holds();
    let witness = find_good_vector(m)?;
    Ok(MatrixVerdict::from_parts(fp_identity, z_identity, witness))
}
