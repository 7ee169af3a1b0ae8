use super::FinGroup;
use crate::geometry::chamber_subspaces;
use crate::linalg::{Matrix, Subspace};
use crate::symplectic::SymplecticSpace;
use crate::{Error, Result};
use rayon::prelude::*;

/// `C_l = <h_1, ..., h_l>` for the standard basis.
pub fn standard_chamber(sp: &SymplecticSpace) -> Vec<Subspace> {
    chamber_subspaces(sp, &sp.standard_basis())
}

fn stabilizes(g: &Matrix, u: &Subspace) -> bool {
    u.basis().iter().all(|b| u.contains_vector(&g.mul_vec(b)))
}

/// `P_J`: elements of `g` stabilizing every `C_l` with `l` outside `J`.
/// `J` uses types `1, ..., n - 1` and `chamber[l - 1]` is `C_l`.
pub fn parabolic(g: &FinGroup, chamber: &[Subspace], j: &[usize]) -> Result<FinGroup> {
    let n = chamber.len() + 1;
    if let Some(&bad) = j.iter().find(|&&t| t == 0 || t >= n) {
        return Err(Error::InvalidIndices(format!("type {bad} outside 1..{}", n - 1)));
    }
    if let Some(c) = chamber.iter().find(|c| c.ambient_dim() != g.degree()) {
        return Err(Error::AmbientMismatch(g.degree(), c.ambient_dim()));
    }
    let fixed: Vec<&Subspace> = (1..n).filter(|l| !j.contains(l)).map(|l| &chamber[l - 1]).collect();
    let els: Vec<Matrix> = g
        .elements()
        .par_iter()
        .filter(|m| fixed.iter().all(|c| stabilizes(m, c)))
        .cloned()
        .collect();
    FinGroup::from_closed_set(g.field(), g.degree(), els)
}

/// Stabilizer of the whole chamber.
pub fn borel(g: &FinGroup, chamber: &[Subspace]) -> Result<FinGroup> {
    parabolic(g, chamber, &[])
}

/// Largest subgroup of `b` normal in `g`.
pub fn action_kernel(g: &FinGroup, b: &FinGroup) -> Result<FinGroup> {
    let conj: Vec<(Matrix, Matrix)> = g.generators().into_iter().map(|s| {
        let si = s.inverse().unwrap();
        (s, si)
    }).collect();
    let mut core: Vec<Matrix> = b.elements().to_vec();
    loop {
        let set = FinGroup::from_closed_set(g.field(), g.degree(), core.clone())?;
        let next: Vec<Matrix> = core
            .iter()
            .filter(|k| conj.iter().all(|(s, si)| set.contains(&s.mul(k).mul(si))))
            .cloned()
            .collect();
        if next.len() == core.len() {
            return Ok(set);
        }
        core = next;
    }
}
