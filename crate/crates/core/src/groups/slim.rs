use super::{FinGroup, DEFAULT_GROUP_CAP};
use crate::linalg::Matrix;
use crate::symplectic::SymplecticSpace;
use crate::{Error, Result};
use serde::Serialize;
use std::fmt;

/// Names of the slim subgroups. Indices are 1-based as in `H_1, ..., H_r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SlimSpec {
    M(usize),
    S(usize),
    Mij(usize, usize),
    Sij(usize, usize),
    Qij(usize, usize),
    U(usize),
    Bi(usize),
    B,
}

impl fmt::Display for SlimSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pair = |a: usize, b: usize| if a < 10 && b < 10 { format!("{a}{b}") } else { format!("{a},{b}") };
        match *self {
            SlimSpec::M(i) => write!(f, "M{i}"),
            SlimSpec::S(j) => write!(f, "S{j}"),
            SlimSpec::Mij(i, j) => write!(f, "M{}", pair(i, j)),
            SlimSpec::Sij(i, j) => write!(f, "S{}", pair(i, j)),
            SlimSpec::Qij(i, j) => write!(f, "Q{}", pair(i, j)),
            SlimSpec::U(i) => write!(f, "U{i}"),
            SlimSpec::Bi(i) => write!(f, "B{i}"),
            SlimSpec::B => write!(f, "B"),
        }
    }
}

impl SlimSpec {
    pub fn validate(&self, r: usize) -> Result<()> {
        let ok = match *self {
            SlimSpec::M(i) => (1..r).contains(&i),
            SlimSpec::S(j) | SlimSpec::U(j) | SlimSpec::Bi(j) => (1..=r).contains(&j) && (r >= 2 || !matches!(self, SlimSpec::U(_))),
            SlimSpec::Mij(i, j) => i >= 1 && i < j && j < r,
            SlimSpec::Sij(i, j) => i >= 1 && i < j && j <= r,
            SlimSpec::Qij(i, j) => (1..r).contains(&i) && (1..=r).contains(&j),
            SlimSpec::B => r >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidIndices(format!("{self} with r = {r}")))
        }
    }

    /// The members of the rank at most two amalgam for `n = 2r`.
    pub fn amalgam_members(r: usize) -> Vec<SlimSpec> {
        let mut out: Vec<SlimSpec> = (1..=r).map(SlimSpec::S).collect();
        out.extend((1..r).map(SlimSpec::M));
        for i in 1..=r {
            for j in i + 1..=r {
                out.push(SlimSpec::Sij(i, j));
            }
        }
        for i in 1..r {
            for j in i + 1..r {
                out.push(SlimSpec::Mij(i, j));
            }
        }
        for i in 1..r {
            for j in 1..=r {
                out.push(SlimSpec::Qij(i, j));
            }
        }
        out
    }

    /// Cotype of the parabolic this slim group sits in.
    pub fn parabolic_types(&self) -> Option<Vec<usize>> {
        match *self {
            SlimSpec::S(j) => Some(vec![2 * j - 1]),
            SlimSpec::M(i) => Some(vec![2 * i]),
            SlimSpec::Sij(i, j) => Some(vec![2 * i - 1, 2 * j - 1]),
            SlimSpec::Mij(i, j) => Some(vec![2 * i, 2 * j]),
            SlimSpec::Qij(i, j) => {
                let mut t = vec![2 * i, 2 * j - 1];
                t.sort_unstable();
                Some(t)
            }
            _ => None,
        }
    }
}

fn check_space(sp: &SymplecticSpace) -> Result<usize> {
    if sp.is_degenerate() || sp.dim() < 2 {
        return Err(Error::Precondition("slim subgroups need a nondegenerate space".into()));
    }
    Ok(sp.dim() / 2)
}

/// `m(b1, w, b2)` acting on `H_i + H_{i+1}`.
pub fn m_element(sp: &SymplecticSpace, i: usize, b1: u8, w: u8, b2: u8) -> Matrix {
    let a = 2 * (i - 1);
    let mut m = Matrix::identity(sp.field(), sp.dim());
    m.set(a, a + 1, b1);
    m.set(a, a + 3, w);
    m.set(a + 2, a + 1, w);
    m.set(a + 2, a + 3, b2);
    m
}

/// `s(a, b, c, d)` acting on `H_j`.
pub fn s_element(sp: &SymplecticSpace, j: usize, entries: [u8; 4]) -> Matrix {
    let a = 2 * (j - 1);
    let mut m = Matrix::identity(sp.field(), sp.dim());
    m.set(a, a, entries[0]);
    m.set(a, a + 1, entries[1]);
    m.set(a + 1, a, entries[2]);
    m.set(a + 1, a + 1, entries[3]);
    m
}

/// Permutation matrix exchanging `(e_i, f_i)` and `(e_{i+1}, f_{i+1})`.
pub fn block_swap(sp: &SymplecticSpace, i: usize) -> Matrix {
    let n = sp.dim();
    let a = 2 * (i - 1);
    let cols: Vec<Vec<u8>> = (0..n)
        .map(|k| {
            let target = if (a..a + 2).contains(&k) {
                k + 2
            } else if (a + 2..a + 4).contains(&k) {
                k - 2
            } else {
                k
            };
            (0..n).map(|x| (x == target) as u8).collect()
        })
        .collect();
    Matrix::from_columns(sp.field(), n, &cols)
}

/// Generators: two opposite root elements per `S_j`, the three coordinate
/// elements per `M_i`, and unions for the rank two groups.
pub fn slim_generators(sp: &SymplecticSpace, spec: SlimSpec) -> Result<Vec<Matrix>> {
    let r = check_space(sp)?;
    spec.validate(r)?;
    let s = |j| vec![s_element(sp, j, [1, 1, 0, 1]), s_element(sp, j, [1, 0, 1, 1])];
    let m = |i| vec![m_element(sp, i, 1, 0, 0), m_element(sp, i, 0, 1, 0), m_element(sp, i, 0, 0, 1)];
    Ok(match spec {
        SlimSpec::S(j) => s(j),
        SlimSpec::M(i) => m(i),
        SlimSpec::Sij(i, j) => [s(i), s(j)].concat(),
        SlimSpec::Mij(i, j) => [m(i), m(j)].concat(),
        SlimSpec::Qij(i, j) => [m(i), s(j)].concat(),
        _ => return Err(Error::InvalidIndices(format!("{spec} is not defined by generators"))),
    })
}

pub fn slim_subgroup(spec: SlimSpec, sp: &SymplecticSpace) -> Result<FinGroup> {
    let r = check_space(sp)?;
    spec.validate(r)?;
    let gen = |s: SlimSpec| -> Result<FinGroup> {
        FinGroup::generate(sp.field(), sp.dim(), &slim_generators(sp, s)?, DEFAULT_GROUP_CAP)
    };
    match spec {
        SlimSpec::U(i) => {
            let m = if i < r { gen(SlimSpec::M(i))? } else { gen(SlimSpec::M(r - 1))? };
            m.intersection(&gen(SlimSpec::S(i))?)
        }
        SlimSpec::Bi(i) => gen(SlimSpec::S(i))?.normalizer_of(&slim_subgroup(SlimSpec::U(i), sp)?),
        SlimSpec::B => {
            let mut gens = Vec::new();
            for i in 1..=r {
                gens.extend(slim_subgroup(SlimSpec::Bi(i), sp)?.generators());
            }
            FinGroup::generate(sp.field(), sp.dim(), &gens, DEFAULT_GROUP_CAP)
        }
        _ => gen(spec),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QShape {
    Minus,
    Plus,
    /// `M_*` on `H_i + H_{i+1} + H_{i+2}`.
    MStar,
}

/// The explicit matrix sets `Q_-`, `Q_+` (on `H_i + H_{i+1}`) and `M_*`,
/// enumerated from their entry formulas.
pub fn q_formula_set(sp: &SymplecticSpace, i: usize, shape: QShape) -> Result<FinGroup> {
    let r = check_space(sp)?;
    let span = if shape == QShape::MStar { 2 } else { 1 };
    if i == 0 || i + span > r {
        return Err(Error::InvalidIndices(format!("block {i} with r = {r}")));
    }
    let f = sp.field();
    let els: Vec<u8> = f.elements().collect();
    let a = 2 * (i - 1);
    let mut out = Vec::new();
    if shape == QShape::MStar {
        for &b1 in &els {
            for &b2 in &els {
                for &b3 in &els {
                    for &w1 in &els {
                        for &w3 in &els {
                            let mut m = Matrix::identity(f, sp.dim());
                            m.set(a, a + 1, b1);
                            m.set(a, a + 3, w1);
                            m.set(a + 2, a + 1, w1);
                            m.set(a + 2, a + 3, b2);
                            m.set(a + 2, a + 5, w3);
                            m.set(a + 4, a + 3, w3);
                            m.set(a + 4, a + 5, b3);
                            out.push(m);
                        }
                    }
                }
            }
        }
        return FinGroup::from_closed_set(f, sp.dim(), out);
    }
    for &a1 in &els {
        for &b1 in &els {
            for &c1 in &els {
                for &d1 in &els {
                    if f.sub(f.mul(a1, d1), f.mul(b1, c1)) != 1 {
                        continue;
                    }
                    for &w1 in &els {
                        for &w2 in &els {
                            for &b2 in &els {
                                let v2 = f.add(f.neg(f.mul(a1, w2)), f.mul(c1, w1));
                                let v1 = f.add(f.neg(f.mul(b1, w2)), f.mul(d1, w1));
                                let block: [[u8; 4]; 4] = match shape {
                                    QShape::Minus => [[a1, b1, 0, w1], [c1, d1, 0, w2], [v2, v1, 1, b2], [0, 0, 0, 1]],
                                    _ => [[1, b2, v2, v1], [0, 1, 0, 0], [0, w1, a1, b1], [0, w2, c1, d1]],
                                };
                                let mut m = Matrix::identity(f, sp.dim());
                                for (x, row) in block.iter().enumerate() {
                                    for (y, &v) in row.iter().enumerate() {
                                        m.set(a + x, a + y, v);
                                    }
                                }
                                out.push(m);
                            }
                        }
                    }
                }
            }
        }
    }
    FinGroup::from_closed_set(f, sp.dim(), out)
}
