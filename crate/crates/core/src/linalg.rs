//! Dense matrices and canonical subspaces over GF(p).

use crate::bitset::BitSet;
use crate::field::PrimeField;
use crate::{Error, Result};
use std::fmt;

/// Coordinate vector, entries reduced mod p.
pub type Vector = Vec<u8>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from row-major integer entries, reducing mod p.
    pub fn from_entries(field: PrimeField, rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        let data = entries.iter().map(|&x| field.reduce(x)).collect();
        Matrix { field, rows, cols, data }
    }

    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vector]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Matrix { field, rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vector]) -> Self {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u8) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn entries(&self) -> &[u8] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let p = self.field.p() as u32;
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0u32;
                for k in 0..self.cols {
                    acc += self.get(i, k) as u32 * other.get(k, j) as u32;
                }
                out.set(i, j, (acc % p) as u8);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u8]) -> Vector {
        assert_eq!(self.cols, v.len());
        let p = self.field.p() as u32;
        (0..self.rows)
            .map(|i| {
                let acc: u32 = (0..self.cols).map(|k| self.get(i, k) as u32 * v[k] as u32).sum();
                (acc % p) as u8
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == (i == j) as u8))
    }

    pub fn scale(&self, c: u8) -> Matrix {
        let mut m = self.clone();
        for x in m.data.iter_mut() {
            *x = self.field.mul(*x, c);
        }
        m
    }

    pub fn rank(&self) -> usize {
        rref_nonzero(self).rows
    }

    pub fn determinant(&self) -> u8 {
        assert_eq!(self.rows, self.cols);
        let f = self.field;
        let mut m = self.clone();
        let n = self.rows;
        let mut det = 1u8;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| m.get(r, c) != 0) else {
                return 0;
            };
            if piv != c {
                m.swap_rows(piv, c);
                det = f.neg(det);
            }
            let pv = m.get(c, c);
            det = f.mul(det, pv);
            let inv = f.inv(pv);
            for r in c + 1..n {
                let factor = f.mul(m.get(r, c), inv);
                if factor != 0 {
                    for k in c..n {
                        let v = f.sub(m.get(r, k), f.mul(factor, m.get(c, k)));
                        m.set(r, k, v);
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let r = rref_nonzero(&aug);
        if r.rows < n || (0..n).any(|i| r.get(i, i) != 1) {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for k in 0..self.cols {
                self.data.swap(a * self.cols + k, b * self.cols + k);
            }
        }
    }

    /// Pack the entries into a 128-bit key; `None` if they do not fit.
    pub fn packed_key(&self) -> Option<u128> {
        let bits = bits_per_entry(self.field.p());
        if self.data.len() * bits > 128 {
            return None;
        }
        let mut key = 0u128;
        for &x in &self.data {
            key = (key << bits) | x as u128;
        }
        Some(key)
    }

    pub fn hex(&self) -> String {
        match self.packed_key() {
            Some(k) => format!("{k:x}"),
            None => self.data.iter().map(|x| format!("{x:x}")).collect(),
        }
    }
}

fn bits_per_entry(p: u8) -> usize {
    match p {
        2 => 1,
        3 => 2,
        _ => 3,
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "] mod {}", self.field.p())
    }
}

/// Reduced row echelon form; zero rows stay at the bottom so the shape is kept.
pub fn rref(m: &Matrix) -> Matrix {
    let mut r = rref_nonzero(m);
    r.data.resize(m.rows * m.cols, 0);
    r.rows = m.rows;
    r
}

/// Reduced row echelon form with zero rows dropped.
pub fn rref_nonzero(m: &Matrix) -> Matrix {
    let f = m.field;
    let mut a = m.clone();
    let mut lead = 0;
    for c in 0..a.cols {
        if lead == a.rows {
            break;
        }
        let Some(piv) = (lead..a.rows).find(|&r| a.get(r, c) != 0) else {
            continue;
        };
        a.swap_rows(piv, lead);
        let inv = f.inv(a.get(lead, c));
        for k in 0..a.cols {
            let v = f.mul(a.get(lead, k), inv);
            a.set(lead, k, v);
        }
        for r in 0..a.rows {
            if r != lead {
                let factor = a.get(r, c);
                if factor != 0 {
                    for k in 0..a.cols {
                        let v = f.sub(a.get(r, k), f.mul(factor, a.get(lead, k)));
                        a.set(r, k, v);
                    }
                }
            }
        }
        lead += 1;
    }
    a.data.truncate(lead * a.cols);
    a.rows = lead;
    a
}

/// Basis of the right kernel `{x : m x = 0}`, in canonical form.
pub fn nullspace(m: &Matrix) -> Vec<Vector> {
    let f = m.field;
    let r = rref_nonzero(m);
    let pivots: Vec<usize> = (0..r.rows).map(|i| (0..r.cols).find(|&j| r.get(i, j) != 0).unwrap()).collect();
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u8; m.cols];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(r.get(i, free));
        }
        basis.push(v);
    }
    basis
}

/// A subspace of GF(p)^n stored by its unique RREF basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    field: PrimeField,
    n: usize,
    basis: Vec<Vector>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, b) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            for x in b {
                write!(f, "{x}")?;
            }
        }
        write!(f, ">")
    }
}

impl Subspace {
    pub fn zero(field: PrimeField, n: usize) -> Self {
        Subspace { field, n, basis: Vec::new() }
    }

    pub fn whole(field: PrimeField, n: usize) -> Self {
        Subspace::span(field, n, &Matrix::identity(field, n).row_vectors())
    }

    pub fn span(field: PrimeField, n: usize, vectors: &[Vector]) -> Self {
        if vectors.is_empty() {
            return Subspace::zero(field, n);
        }
        let r = rref_nonzero(&Matrix::from_rows(field, n, vectors));
        Subspace { field, n, basis: r.row_vectors() }
    }

    /// Wrap a basis already known to be in RREF.
    pub(crate) fn from_rref_unchecked(field: PrimeField, n: usize, basis: Vec<Vector>) -> Self {
        Subspace { field, n, basis }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_rows(self.field, self.n, &self.basis)
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.n != other.n {
            Err(Error::AmbientMismatch(self.n, other.n))
        } else {
            Ok(())
        }
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Ok(Subspace::span(self.field, self.n, &v))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.field, self.n));
        }
        // Annihilator of `other`, then the vectors of `self` it kills.
        let ann = nullspace(&other.matrix());
        if ann.is_empty() {
            return Ok(self.clone());
        }
        let a = Matrix::from_rows(self.field, self.n, &ann);
        let m = self.matrix().mul(&a.transpose());
        let coeffs = nullspace(&m.transpose());
        let vectors: Vec<Vector> = coeffs.iter().map(|c| self.combine(c)).collect();
        Ok(Subspace::span(self.field, self.n, &vectors))
    }

    /// `self ⊇ other`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check(other)?;
        Ok(other.basis.iter().all(|v| self.contains_vector(v)))
    }

    pub fn contains_vector(&self, v: &[u8]) -> bool {
        let f = self.field;
        let mut w = v.to_vec();
        for b in &self.basis {
            let pc = b.iter().position(|&x| x != 0).unwrap();
            let c = w[pc];
            if c != 0 {
                for k in 0..self.n {
                    w[k] = f.sub(w[k], f.mul(c, b[k]));
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    /// Linear combination of the basis rows with the given coefficients.
    pub fn combine(&self, coeffs: &[u8]) -> Vector {
        let f = self.field;
        let mut v = vec![0u8; self.n];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c != 0 {
                for k in 0..self.n {
                    v[k] = f.add(v[k], f.mul(*c, b[k]));
                }
            }
        }
        v
    }

    /// All vectors of the subspace in lexicographic order.
    pub fn vectors(&self) -> Vec<Vector> {
        let p = self.field.p();
        let k = self.dim();
        let mut out = Vec::with_capacity((p as usize).pow(k as u32));
        let mut coeffs = vec![0u8; k];
        loop {
            out.push(self.combine(&coeffs));
            let mut i = k;
            loop {
                if i == 0 {
                    out.sort();
                    return out;
                }
                i -= 1;
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
            }
        }
    }

    /// Image of the subspace under a matrix acting on column vectors.
    pub fn image(&self, g: &Matrix) -> Subspace {
        let v: Vec<Vector> = self.basis.iter().map(|b| g.mul_vec(b)).collect();
        Subspace::span(self.field, self.n, &v)
    }

    /// Canonical encoding for reports: rows as digit strings.
    pub fn encode(&self) -> String {
        self.basis
            .iter()
            .map(|b| b.iter().map(|x| char::from(b'0' + x)).collect::<String>())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Every subspace of dimension `k` in GF(p)^n, generated directly in RREF.
pub fn all_subspaces(field: PrimeField, n: usize, k: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut pivots = Vec::with_capacity(k);
    choose_pivots(field, n, k, 0, &mut pivots, &mut out);
    out.sort();
    out
}

fn choose_pivots(field: PrimeField, n: usize, k: usize, start: usize, pivots: &mut Vec<usize>, out: &mut Vec<Subspace>) {
    if pivots.len() == k {
        fill_free(field, n, pivots, out);
        return;
    }
    for c in start..n {
        pivots.push(c);
        choose_pivots(field, n, k, c + 1, pivots, out);
        pivots.pop();
    }
}

fn fill_free(field: PrimeField, n: usize, pivots: &[usize], out: &mut Vec<Subspace>) {
    let k = pivots.len();
    // Free slots: entries right of the pivot in a row, outside pivot columns.
    let mut slots = Vec::new();
    for (i, &pc) in pivots.iter().enumerate() {
        for c in pc + 1..n {
            if !pivots.contains(&c) {
                slots.push((i, c));
            }
        }
    }
    let p = field.p();
    let mut vals = vec![0u8; slots.len()];
    loop {
        let mut basis = vec![vec![0u8; n]; k];
        for (i, &pc) in pivots.iter().enumerate() {
            basis[i][pc] = 1;
        }
        for (s, &(i, c)) in slots.iter().enumerate() {
            basis[i][c] = vals[s];
        }
        out.push(Subspace { field, n, basis });
        let mut i = slots.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            vals[i] += 1;
            if vals[i] < p {
                break;
            }
            vals[i] = 0;
        }
    }
}

/// Indexing of the projective points of GF(p)^n, used for point shadows.
#[derive(Clone, Debug)]
pub struct PointIndex {
    field: PrimeField,
    n: usize,
    points: Vec<Vector>,
    lookup: Vec<u32>,
}

impl PointIndex {
    pub fn new(field: PrimeField, n: usize) -> Self {
        let p = field.p() as usize;
        let total = p.pow(n as u32);
        let mut lookup = vec![u32::MAX; total];
        let mut points = Vec::new();
        for code in 1..total {
            let v = decode(code, p, n);
            let lead = v.iter().find(|&&x| x != 0).copied().unwrap();
            if lead == 1 {
                lookup[code] = points.len() as u32;
                points.push(v);
            }
        }
        PointIndex { field, n, points, lookup }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &Vector {
        &self.points[i]
    }

    /// Index of the projective point spanned by a nonzero vector.
    pub fn index_of(&self, v: &[u8]) -> usize {
        let f = self.field;
        let lead = v.iter().find(|&&x| x != 0).copied().expect("zero vector has no point");
        let inv = f.inv(lead);
        let p = f.p() as usize;
        let code = v.iter().fold(0usize, |acc, &x| acc * p + f.mul(x, inv) as usize);
        self.lookup[code] as usize
    }

    pub fn point_subspace(&self, i: usize) -> Subspace {
        Subspace::from_rref_unchecked(self.field, self.n, vec![self.points[i].clone()])
    }

    /// Set of projective points lying in `u`.
    pub fn shadow(&self, u: &Subspace) -> BitSet {
        let mut s = BitSet::new(self.points.len());
        let k = u.dim();
        if k == 0 {
            return s;
        }
        let p = self.field.p() as usize;
        // Normalized coefficient vectors give normalized points since u is in RREF.
        let mut coeffs = vec![0u8; k];
        for lead in 0..k {
            let tail = k - lead - 1;
            for code in 0..p.pow(tail as u32) {
                coeffs.iter_mut().for_each(|c| *c = 0);
                coeffs[lead] = 1;
                let mut c = code;
                for i in (lead + 1..k).rev() {
                    coeffs[i] = (c % p) as u8;
                    c /= p;
                }
                s.insert(self.index_of(&u.combine(&coeffs)));
            }
        }
        s
    }
}

fn decode(mut code: usize, p: usize, n: usize) -> Vector {
    let mut v = vec![0u8; n];
    for i in (0..n).rev() {
        v[i] = (code % p) as u8;
        code /= p;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u8) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rref_examples() {
        let f = gf(3);
        assert_eq!(rref(&Matrix::identity(f, 2)), Matrix::identity(f, 2));
        let z = Matrix::zeros(f, 2, 2);
        assert_eq!(rref(&z), z);
        assert_eq!(rref_nonzero(&z).rows(), 0);
        let m = Matrix::from_entries(gf(2), 2, 2, &[1, 1, 1, 0]);
        assert_eq!(rref(&m), Matrix::identity(gf(2), 2));
    }

    #[test]
    fn subspace_counts_are_gaussian_binomials() {
        // [4 choose 2]_2 = 35, [4 choose 1]_3 = 40.
        assert_eq!(all_subspaces(gf(2), 4, 2).len(), 35);
        assert_eq!(all_subspaces(gf(3), 4, 1).len(), 40);
        assert_eq!(all_subspaces(gf(2), 6, 3).len(), 1395);
    }

    #[test]
    fn shadow_sizes() {
        let f = gf(3);
        let idx = PointIndex::new(f, 4);
        assert_eq!(idx.len(), 40);
        for k in 0..=4 {
            for u in all_subspaces(f, 4, k) {
                let expect = (3usize.pow(k as u32) - 1) / 2;
                assert_eq!(idx.shadow(&u).count(), expect, "{u:?}");
            }
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let f = gf(5);
        let m = Matrix::from_entries(f, 2, 2, &[2, 1, 1, 1]);
        assert_eq!(m.determinant(), 1);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let s = Matrix::from_entries(f, 2, 2, &[1, 2, 2, 4]);
        assert!(s.inverse().is_none());
        assert_eq!(s.determinant(), 0);
    }

    #[test]
    fn modular_law_on_two_spaces() {
        let f = gf(2);
        let lines = all_subspaces(f, 4, 2);
        for a in &lines {
            for b in &lines {
                let s = a.sum(b).unwrap();
                let i = a.intersect(b).unwrap();
                assert_eq!(s.dim() + i.dim(), 4);
                if a != b && i.dim() == 1 {
                    assert_eq!(s.dim(), 3);
                }
            }
        }
    }
}
