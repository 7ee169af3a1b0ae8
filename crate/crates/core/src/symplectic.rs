//! Alternating forms: perps, radicals, hyperbolic bases and Witt extension.

use crate::field::PrimeField;
use crate::linalg::{nullspace, Matrix, Subspace, Vector};
use crate::{Error, Result};

/// A vector space with an alternating form whose radical has dimension at most one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticSpace {
    field: PrimeField,
    n: usize,
    gram: Matrix,
    radical: Subspace,
}

impl SymplecticSpace {
    /// Standard form on `GF(p)^n` with basis `e1, f1, e2, f2, ...` and, for odd
    /// `n`, a trailing radical vector.
    pub fn standard(n: usize, p: u8) -> Result<Self> {
        let field = PrimeField::new(p)?;
        if n < 2 {
            return Err(Error::Precondition(format!("ambient dimension {n} < 2")));
        }
        let mut gram = Matrix::zeros(field, n, n);
        for i in 0..n / 2 {
            gram.set(2 * i, 2 * i + 1, 1);
            gram.set(2 * i + 1, 2 * i, field.neg(1));
        }
        SymplecticSpace::new(gram)
    }

    pub fn new(gram: Matrix) -> Result<Self> {
        let field = gram.field();
        let n = gram.rows();
        if gram.cols() != n {
            return Err(Error::AmbientMismatch(n, gram.cols()));
        }
        for i in 0..n {
            if gram.get(i, i) != 0 {
                return Err(Error::NotAlternating);
            }
            for j in 0..n {
                if gram.get(i, j) != field.neg(gram.get(j, i)) {
                    return Err(Error::NotAlternating);
                }
            }
        }
        let radical = Subspace::span(field, n, &nullspace(&gram));
        if radical.dim() > 1 {
            return Err(Error::RadicalTooLarge(radical.dim()));
        }
        Ok(SymplecticSpace { field, n, gram, radical })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u8 {
        self.field.p()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// `Rad(V)`.
    pub fn ambient_radical(&self) -> &Subspace {
        &self.radical
    }

    pub fn is_degenerate(&self) -> bool {
        !self.radical.is_zero()
    }

    /// Number of hyperbolic pairs in a hyperbolic basis of `V`.
    pub fn witt_index(&self) -> usize {
        (self.n - self.radical.dim()) / 2
    }

    pub fn whole(&self) -> Subspace {
        Subspace::whole(self.field, self.n)
    }

    pub fn zero(&self) -> Subspace {
        Subspace::zero(self.field, self.n)
    }

    /// Standard basis vector `h_k` (1-based as in the chamber numbering).
    pub fn h(&self, k: usize) -> Vector {
        let mut v = vec![0u8; self.n];
        v[k - 1] = 1;
        v
    }

    pub fn span(&self, vectors: &[Vector]) -> Subspace {
        Subspace::span(self.field, self.n, vectors)
    }

    /// `s(u, v) = u^T S v`.
    pub fn form(&self, u: &[u8], v: &[u8]) -> u8 {
        let p = self.field.p() as u32;
        let mut acc = 0u32;
        for i in 0..self.n {
            if u[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                acc += u[i] as u32 * self.gram.get(i, j) as u32 * v[j] as u32;
            }
        }
        (acc % p) as u8
    }

    fn check(&self, u: &Subspace) -> Result<()> {
        if u.ambient_dim() != self.n {
            Err(Error::AmbientMismatch(self.n, u.ambient_dim()))
        } else {
            Ok(())
        }
    }

    pub fn perp(&self, u: &Subspace) -> Result<Subspace> {
        self.check(u)?;
        if u.is_zero() {
            return Ok(self.whole());
        }
        let m = u.matrix().mul(&self.gram);
        Ok(self.span(&nullspace(&m)))
    }

    pub fn radical(&self, u: &Subspace) -> Result<Subspace> {
        u.intersect(&self.perp(u)?)
    }

    pub fn rank(&self, u: &Subspace) -> Result<usize> {
        Ok(u.dim() - self.radical(u)?.dim())
    }

    pub fn is_symplectic(&self, g: &Matrix) -> bool {
        g.rows() == self.n && g.cols() == self.n && g.transpose().mul(&self.gram).mul(g) == self.gram
    }

    /// The transvection `x -> x + lambda s(x, v) v`.
    pub fn transvection(&self, v: &[u8], lambda: u8) -> Matrix {
        let f = self.field;
        let sv: Vector = {
            // s(x, v) = sum_j x_j (S v)_j
            self.gram.mul_vec(v)
        };
        let mut t = Matrix::identity(f, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let add = f.mul(lambda, f.mul(v[i], sv[j]));
                t.set(i, j, f.add(t.get(i, j), add));
            }
        }
        t
    }

    /// Hyperbolic basis of the standard space: `e_i = h_{2i-1}`, `f_i = h_{2i}`,
    /// and the radical vector last when `n` is odd.
    pub fn standard_basis(&self) -> HyperbolicBasis {
        let r = self.n / 2;
        let mut e: Vec<Vector> = (1..=r).map(|i| self.h(2 * i - 1)).collect();
        let f: Vec<Vector> = (1..=r).map(|i| self.h(2 * i)).collect();
        if self.n % 2 == 1 {
            e.push(self.h(self.n));
        }
        HyperbolicBasis { e, f }
    }
}

/// Hyperbolic pairs `(e_i, f_i)` followed by trailing radical vectors in `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperbolicBasis {
    pub e: Vec<Vector>,
    pub f: Vec<Vector>,
}

impl HyperbolicBasis {
    pub fn empty() -> Self {
        HyperbolicBasis { e: Vec::new(), f: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        2 * self.f.len()
    }

    pub fn radical_dim(&self) -> usize {
        self.e.len() - self.f.len()
    }

    pub fn len(&self) -> usize {
        self.e.len() + self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e.is_empty()
    }

    /// Vectors in the order `e_1, f_1, ..., e_r, f_r, e_{r+1}, ..., e_{r+d}`.
    pub fn h_order(&self) -> Vec<Vector> {
        let r = self.f.len();
        let mut out = Vec::with_capacity(self.len());
        for i in 0..r {
            out.push(self.e[i].clone());
            out.push(self.f[i].clone());
        }
        out.extend(self.e[r..].iter().cloned());
        out
    }

    pub fn span(&self, sp: &SymplecticSpace) -> Subspace {
        sp.span(&self.h_order())
    }

    /// Gram conditions plus linear independence.
    pub fn is_valid(&self, sp: &SymplecticSpace) -> bool {
        if self.f.len() > self.e.len() {
            return false;
        }
        let r = self.f.len();
        for (i, ei) in self.e.iter().enumerate() {
            if self.e.iter().any(|ej| sp.form(ei, ej) != 0) {
                return false;
            }
            for (j, fj) in self.f.iter().enumerate() {
                let want = (i == j && i < r) as u8;
                if sp.form(ei, fj) != want {
                    return false;
                }
            }
        }
        for fi in &self.f {
            for fj in &self.f {
                if sp.form(fi, fj) != 0 {
                    return false;
                }
            }
        }
        self.span(sp).dim() == self.len()
    }
}

/// Extend a hyperbolic basis of `W` to one of `U`, keeping the given vectors.
pub fn extend_hyperbolic_basis(sp: &SymplecticSpace, partial: &HyperbolicBasis, u: &Subspace) -> Result<HyperbolicBasis> {
    if !partial.is_valid(sp) {
        return Err(Error::Precondition("partial basis is not hyperbolic".into()));
    }
    let w = partial.span(sp);
    if !u.contains(&w)? {
        return Err(Error::Precondition("W is not contained in U".into()));
    }
    if w == *u {
        return Ok(partial.clone());
    }
    let rad_u = sp.radical(u)?;
    if !w.intersect(&rad_u)?.is_zero() {
        return Err(Error::Precondition("W meets Rad(U)".into()));
    }
    let r_w = partial.f.len();
    let mut pairs: Vec<(Vector, Vector)> = (0..r_w).map(|i| (partial.e[i].clone(), partial.f[i].clone())).collect();
    let w_rad: Vec<Vector> = partial.e[r_w..].to_vec();

    let flat = |pairs: &[(Vector, Vector)]| -> Vec<Vector> {
        pairs.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect()
    };

    for (j, wv) in w_rad.iter().enumerate() {
        let cand = u.intersect(&sp.perp(&sp.span(&flat(&pairs)))?)?;
        let partner = cand
            .vectors()
            .into_iter()
            .find(|v| sp.form(wv, v) == 1 && w_rad[j + 1..].iter().all(|o| sp.form(o, v) == 0))
            .ok_or_else(|| Error::Precondition("no hyperbolic partner for a radical vector of W".into()))?;
        pairs.push((wv.clone(), partner));
    }

    loop {
        let cand = u.intersect(&sp.perp(&sp.span(&flat(&pairs)))?)?;
        if cand.dim() == rad_u.dim() {
            break;
        }
        let vectors = cand.vectors();
        let first = vectors
            .iter()
            .find(|v| v.iter().any(|&x| x != 0) && !rad_u.contains_vector(v))
            .expect("candidate space is larger than the radical")
            .clone();
        let partner = vectors.into_iter().find(|v| sp.form(&first, v) == 1).expect("nondegenerate part has a partner");
        pairs.push((first, partner));
    }

    let mut e: Vec<Vector> = pairs.iter().map(|(a, _)| a.clone()).collect();
    let f: Vec<Vector> = pairs.into_iter().map(|(_, b)| b).collect();
    e.extend(rad_u.basis().iter().cloned());
    let out = HyperbolicBasis { e, f };
    debug_assert!(out.is_valid(sp));
    Ok(out)
}

/// Isometry `g` of `V` sending the `k`-th vector of `a` to that of `b` (h-order).
pub fn witt_isometry(sp: &SymplecticSpace, a: &HyperbolicBasis, b: &HyperbolicBasis) -> Result<Matrix> {
    if a.f.len() != b.f.len() || a.e.len() != b.e.len() || !a.is_valid(sp) || !b.is_valid(sp) {
        return Err(Error::IncompatibleProfiles);
    }
    let whole = sp.whole();
    let fa = extend_hyperbolic_basis(sp, a, &whole)?;
    let fb = extend_hyperbolic_basis(sp, b, &whole)?;
    if fa.f.len() != fb.f.len() {
        return Err(Error::IncompatibleProfiles);
    }
    let n = sp.dim();
    let ma = Matrix::from_columns(sp.field(), n, &fa.h_order());
    let mb = Matrix::from_columns(sp.field(), n, &fb.h_order());
    let g = mb.mul(&ma.inverse().expect("hyperbolic basis is a basis"));
    debug_assert!(sp.is_symplectic(&g));
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::all_subspaces;

    #[test]
    fn perp_of_e1_in_sp4_2() {
        let sp = SymplecticSpace::standard(4, 2).unwrap();
        let e1 = sp.span(&[sp.h(1)]);
        let expect = sp.span(&[sp.h(1), sp.h(3), sp.h(4)]);
        assert_eq!(sp.perp(&e1).unwrap(), expect);
        assert_eq!(sp.perp(&sp.zero()).unwrap(), sp.whole());
    }

    #[test]
    fn radicals_of_small_spaces() {
        let sp = SymplecticSpace::standard(4, 3).unwrap();
        let hyp = sp.span(&[sp.h(1), sp.h(2)]);
        assert!(sp.radical(&hyp).unwrap().is_zero());
        let iso = sp.span(&[sp.h(1), sp.h(3)]);
        assert_eq!(sp.radical(&iso).unwrap(), iso);
        let sp2 = SymplecticSpace::standard(4, 2).unwrap();
        let threes = all_subspaces(sp2.field(), 4, 3);
        assert_eq!(threes.len(), 15);
        for u in threes {
            assert_eq!(sp2.rank(&u).unwrap(), 2);
            assert_eq!(sp2.radical(&u).unwrap().dim(), 1);
        }
    }

    #[test]
    fn rejects_large_radical() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(SymplecticSpace::new(Matrix::zeros(f, 2, 2)), Err(Error::RadicalTooLarge(2)));
        let bad = Matrix::from_entries(f, 2, 2, &[0, 1, 1, 0]);
        assert_eq!(SymplecticSpace::new(bad), Err(Error::NotAlternating));
    }

    #[test]
    fn extension_keeps_first_pair() {
        let sp = SymplecticSpace::standard(4, 3).unwrap();
        let partial = HyperbolicBasis { e: vec![sp.h(1)], f: vec![sp.h(2)] };
        let full = extend_hyperbolic_basis(&sp, &partial, &sp.whole()).unwrap();
        assert!(full.is_valid(&sp));
        assert_eq!(full.e[0], sp.h(1));
        assert_eq!(full.f[0], sp.h(2));
        assert_eq!(full.len(), 4);
    }

    #[test]
    fn extension_of_empty_basis() {
        let sp = SymplecticSpace::standard(4, 2).unwrap();
        let full = extend_hyperbolic_basis(&sp, &HyperbolicBasis::empty(), &sp.whole()).unwrap();
        assert!(full.is_valid(&sp));
        assert_eq!(full.radical_dim(), 0);
    }

    #[test]
    fn odd_subspace_has_trailing_radical() {
        let sp = SymplecticSpace::standard(4, 2).unwrap();
        for u in all_subspaces(sp.field(), 4, 3) {
            let b = extend_hyperbolic_basis(&sp, &HyperbolicBasis::empty(), &u).unwrap();
            assert_eq!(b.radical_dim(), 1);
            assert_eq!(sp.span(&[b.e[1].clone()]), sp.radical(&u).unwrap());
        }
    }

    #[test]
    fn extension_rejects_w_meeting_radical() {
        let sp = SymplecticSpace::standard(4, 2).unwrap();
        let u = sp.span(&[sp.h(1), sp.h(2), sp.h(3)]);
        let partial = HyperbolicBasis { e: vec![sp.h(3)], f: vec![] };
        assert!(matches!(extend_hyperbolic_basis(&sp, &partial, &u), Err(Error::Precondition(_))));
    }

    #[test]
    fn witt_identity_and_block_swap() {
        let sp = SymplecticSpace::standard(4, 3).unwrap();
        let a = sp.standard_basis();
        assert!(witt_isometry(&sp, &a, &a).unwrap().is_identity());
        let b = HyperbolicBasis { e: vec![sp.h(3), sp.h(1)], f: vec![sp.h(4), sp.h(2)] };
        let g = witt_isometry(&sp, &a, &b).unwrap();
        let swap = Matrix::from_entries(sp.field(), 4, 4, &[0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0]);
        assert_eq!(g, swap);
        assert!(sp.is_symplectic(&g));
    }

    #[test]
    fn transvections_are_symplectic() {
        let sp = SymplecticSpace::standard(6, 3).unwrap();
        let v = vec![1, 2, 0, 1, 1, 0];
        for l in 1..3 {
            assert!(sp.is_symplectic(&sp.transvection(&v, l)));
        }
    }
}
