use super::family::FamilyData;
use crate::error::{Error, Result};
use crate::exactnum::{Mat, QuadExt};

/// The `r`-fold fiber product: `rho` and `S` block-diagonal, lattice `Lambda^r`.
pub fn replicate_family(family: &FamilyData, r: usize) -> Result<FamilyData> {
    if r == 0 {
        return Err(Error::InvalidInput("replication count must be at least 1".into()));
    }
    let g = family.g;
    let rho = family.rho.iter().map(|m| Mat::block_diag(&vec![m.clone(); r])).collect();
    let s = Mat::block_diag(&vec![family.s.clone(); r]);
    let mut lattice = Vec::with_capacity(r * family.lattice.len());
    for copy in 0..r {
        for b in &family.lattice {
            let mut m: Mat<QuadExt> = Mat::zeros(r * g, 2);
            for i in 0..g {
                for j in 0..2 {
                    m[(copy * g + i, j)] = b[(i, j)].clone();
                }
            }
            lattice.push(m);
        }
    }
    let out = FamilyData {
        g: r * g,
        surd: family.surd.clone(),
        gamma_gens: family.gamma_gens.clone(),
        rho,
        lattice,
        s,
        origin: family.origin.clone(),
    };
    out.validate_shapes()?;
    Ok(out)
}
