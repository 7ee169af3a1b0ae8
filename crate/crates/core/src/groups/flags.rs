use crate::bitset::BitSet;
use crate::geometry::{flag_basis, Flag, Geometry};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::symplectic::{witt_isometry, SymplecticSpace};
use crate::{Error, Result};
use rand::Rng;

#[derive(Clone, Debug)]
pub struct FlagMap {
    pub g: Matrix,
    /// Whether a radical transvection was needed to move the top member of
    /// the target into the chosen complement of `Rad(V)`.
    pub via_transvection: bool,
}

fn check_flag(sp: &SymplecticSpace, f: &[Subspace]) -> Result<()> {
    let rad_v = sp.ambient_radical();
    for (k, u) in f.iter().enumerate() {
        if u.ambient_dim() != sp.dim() {
            return Err(Error::AmbientMismatch(sp.dim(), u.ambient_dim()));
        }
        if u.is_zero() || u.dim() >= sp.dim() || !u.intersect(rad_v)?.is_zero() || sp.radical(u)?.dim() > 1 {
            return Err(Error::NotAFlag);
        }
        if k > 0 {
            let w = &f[k - 1];
            if w.dim() >= u.dim() || !u.contains(w)? || !w.intersect(&sp.radical(u)?)?.is_zero() {
                return Err(Error::NotAFlag);
            }
        }
    }
    Ok(())
}

/// `x -> x - c(x) r` with `c` vanishing on `M2 ∩ V'` and on `r`, chosen so the
/// image of `M2` lies in `V'`.
fn radical_transvection(sp: &SymplecticSpace, v_prime: &Subspace, m2: &Subspace, r: &Vector) -> Result<Matrix> {
    let f = sp.field();
    let n = sp.dim();
    let inner = m2.intersect(v_prime)?;
    let u = m2.basis().iter().find(|b| !v_prime.contains_vector(b)).expect("M2 is not inside V'").clone();
    let mut cols: Vec<Vector> = v_prime.basis().to_vec();
    cols.push(r.clone());
    let coords = Matrix::from_columns(f, n, &cols).inverse().expect("V' complements R").mul_vec(&u);
    let lambda = coords[n - 1];
    let mut basis: Vec<Vector> = inner.basis().to_vec();
    basis.push(u.clone());
    basis.push(r.clone());
    for k in 1..=n {
        if basis.len() == n {
            break;
        }
        let h = sp.h(k);
        if !sp.span(&basis).contains_vector(&h) {
            basis.push(h);
        }
    }
    let mut images = basis.clone();
    let k = inner.dim();
    images[k] = u.iter().zip(r).map(|(&a, &b)| f.sub(a, f.mul(lambda, b))).collect();
    let t = Matrix::from_columns(f, n, &images).mul(&Matrix::from_columns(f, n, &basis).inverse().unwrap());
    debug_assert!(sp.is_symplectic(&t));
    Ok(t)
}

/// Isometry `g` with `g(F1) = F2` for flags of the same type, given as
/// subspaces sorted by dimension.
pub fn map_flag_traced(sp: &SymplecticSpace, f1: &[Subspace], f2: &[Subspace]) -> Result<FlagMap> {
    check_flag(sp, f1)?;
    check_flag(sp, f2)?;
    let t1: Vec<usize> = f1.iter().map(Subspace::dim).collect();
    let t2: Vec<usize> = f2.iter().map(Subspace::dim).collect();
    if t1 != t2 {
        return Err(Error::Precondition(format!("flag types {t1:?} and {t2:?} differ")));
    }
    let id = Matrix::identity(sp.field(), sp.dim());
    if f1.is_empty() {
        return Ok(FlagMap { g: id, via_transvection: false });
    }
    let mut t = id.clone();
    let mut via_transvection = false;
    if sp.is_degenerate() {
        let m1 = f1.last().unwrap();
        let m2 = f2.last().unwrap();
        let r = sp.ambient_radical().basis()[0].clone();
        let mut basis: Vec<Vector> = m1.basis().to_vec();
        for k in 1..=sp.dim() {
            if basis.len() == sp.dim() - 1 {
                break;
            }
            let h = sp.h(k);
            let with_r: Vec<Vector> = basis.iter().cloned().chain([r.clone()]).collect();
            if !sp.span(&with_r).contains_vector(&h) {
                basis.push(h);
            }
        }
        let v_prime = sp.span(&basis);
        if !v_prime.contains(m2)? {
            t = radical_transvection(sp, &v_prime, m2, &r)?;
            via_transvection = true;
        }
    }
    let tf2: Vec<Subspace> = f2.iter().map(|u| u.image(&t)).collect();
    let h = witt_isometry(sp, &flag_basis(sp, f1)?, &flag_basis(sp, &tf2)?)?;
    let g = t.inverse().unwrap().mul(&h);
    if !sp.is_symplectic(&g) || f1.iter().zip(f2).any(|(a, b)| a.image(&g) != *b) {
        return Err(Error::Precondition("flag map failed verification".into()));
    }
    Ok(FlagMap { g, via_transvection })
}

pub fn map_flag(sp: &SymplecticSpace, f1: &[Subspace], f2: &[Subspace]) -> Result<Matrix> {
    map_flag_traced(sp, f1, f2).map(|m| m.g)
}

/// Uniform choice among common neighbours, one type index at a time.
pub fn random_flag<R: Rng>(g: &Geometry, types: &[usize], rng: &mut R) -> Result<Flag> {
    if types.windows(2).any(|w| w[0] >= w[1]) || types.iter().any(|&t| t >= g.rank()) {
        return Err(Error::InvalidIndices(format!("type indices {types:?}")));
    }
    let mut common = BitSet::full(g.len());
    let mut flag = Vec::with_capacity(types.len());
    for &t in types {
        let cand: Vec<usize> = common.intersection(g.type_mask(t)).iter().collect();
        if cand.is_empty() {
            return Err(Error::NotAFlag);
        }
        let x = cand[rng.gen_range(0..cand.len())];
        common.intersect_with(g.neighbors(x));
        flag.push(x);
    }
    flag.sort_unstable();
    Ok(flag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_gamma;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn subspaces(g: &Geometry, f: &[usize]) -> Vec<Subspace> {
        let mut s: Vec<Subspace> = f.iter().map(|&i| g.subspace(i).unwrap().clone()).collect();
        s.sort_by_key(Subspace::dim);
        s
    }

    #[test]
    fn maps_random_flags() {
        for (n, p) in [(4, 3), (5, 2)] {
            let sp = SymplecticSpace::standard(n, p).unwrap();
            let g = build_gamma(&sp).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let mut used = false;
            for k in 0..200 {
                let types: Vec<usize> = (0..g.rank()).filter(|t| (k + 1) >> t & 1 == 1).collect();
                let a = random_flag(&g, &types, &mut rng).unwrap();
                let b = random_flag(&g, &types, &mut rng).unwrap();
                assert!(g.is_flag(&a) && g.is_flag(&b));
                let m = map_flag_traced(&sp, &subspaces(&g, &a), &subspaces(&g, &b)).unwrap();
                used |= m.via_transvection;
            }
            assert_eq!(used, n % 2 == 1);
        }
    }

    #[test]
    fn type_mismatch_is_rejected() {
        let sp = SymplecticSpace::standard(4, 2).unwrap();
        let a = vec![sp.span(&[sp.h(1)])];
        let b = vec![sp.span(&[sp.h(1), sp.h(2)])];
        assert!(map_flag(&sp, &a, &b).is_err());
    }
}
