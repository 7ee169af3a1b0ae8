//! Frozen values, each checked against a brute-force computation written here
//! independently of the library.

use phan_core::amalgam::todd_coxeter;
use phan_core::geometry::{build_gamma, build_pi, standard_pi_pair};
use phan_core::groups::{sp_group, sp_order};
use phan_core::homotopy::Presentation;
use phan_core::linalg::{all_subspaces, rref};
use phan_core::{Matrix, PrimeField, SymplecticSpace};
use std::collections::{BTreeMap, BTreeSet};

type V = Vec<u8>;

fn all_vectors(n: usize, p: u8) -> Vec<V> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v: V| (0..p).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn lin(a: &V, b: &V, c: u8, p: u8) -> V {
    a.iter().zip(b).map(|(&x, &y)| ((x as u32 + c as u32 * y as u32) % p as u32) as u8).collect()
}

/// All vectors of the span, as a sorted set.
fn span_set(gens: &[V], n: usize, p: u8) -> BTreeSet<V> {
    let mut set: BTreeSet<V> = [vec![0; n]].into();
    for g in gens {
        let cur: Vec<V> = set.iter().cloned().collect();
        for v in cur {
            for c in 1..p {
                set.insert(lin(&v, g, c, p));
            }
        }
    }
    set
}

/// Standard alternating form, pairs (2i, 2i+1), trailing radical coordinate for odd n.
fn form(u: &V, v: &V, p: u8) -> u8 {
    let mut s: i64 = 0;
    for i in 0..u.len() / 2 {
        s += u[2 * i] as i64 * v[2 * i + 1] as i64 - u[2 * i + 1] as i64 * v[2 * i] as i64;
    }
    s.rem_euclid(p as i64) as u8
}

fn rank_mod_p(mut m: Vec<Vec<i64>>, p: i64) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c].rem_euclid(p) != 0) else { continue };
        m.swap(r, piv);
        let inv = (1..p).find(|x| (x * m[r][c]).rem_euclid(p) == 1).unwrap();
        for i in 0..m.len() {
            if i != r {
                let f = (m[i][c] * inv).rem_euclid(p);
                for j in 0..cols {
                    m[i][j] = (m[i][j] - f * m[r][j]).rem_euclid(p);
                }
            }
        }
        r += 1;
    }
    r
}

/// Object counts of the geometry by dimension: subspaces of dimension
/// `1..n-1` with radical of dimension at most one that avoid `Rad(V)`.
fn gamma_counts_oracle(n: usize, p: u8) -> BTreeMap<usize, usize> {
    let vs: Vec<V> = all_vectors(n, p).into_iter().filter(|v| v.iter().any(|&x| x != 0)).collect();
    let mut spaces: BTreeSet<BTreeSet<V>> = BTreeSet::new();
    let mut frontier: Vec<(Vec<V>, BTreeSet<V>)> = vec![(Vec::new(), span_set(&[], n, p))];
    for _ in 1..n {
        let mut next = Vec::new();
        let mut seen = BTreeSet::new();
        for (gens, set) in &frontier {
            for v in &vs {
                if set.contains(v) {
                    continue;
                }
                let mut g = gens.clone();
                g.push(v.clone());
                let s = span_set(&g, n, p);
                if seen.insert(s.clone()) {
                    next.push((g, s));
                }
            }
        }
        spaces.extend(seen);
        frontier = next;
    }
    let mut counts = BTreeMap::new();
    for s in &spaces {
        let dim = (s.len() as f64).log(p as f64).round() as usize;
        let basis: Vec<V> = {
            let mut b: Vec<V> = Vec::new();
            for v in s {
                if !span_set(&b, n, p).contains(v) {
                    b.push(v.clone());
                }
            }
            b
        };
        let gram: Vec<Vec<i64>> = basis.iter().map(|a| basis.iter().map(|b| form(a, b, p) as i64).collect()).collect();
        let radical = dim - rank_mod_p(gram, p as i64);
        let meets_rad_v = n % 2 == 1 && s.iter().any(|v| v.iter().take(n - 1).all(|&x| x == 0) && v[n - 1] != 0);
        if radical <= 1 && !meets_rad_v {
            *counts.entry(dim).or_insert(0) += 1;
        }
    }
    counts
}

fn sl2_count(p: u8) -> usize {
    let p = p as i64;
    let mut c = 0;
    for a in 0..p {
        for b in 0..p {
            for x in 0..p {
                for d in 0..p {
                    c += usize::from((a * d - b * x).rem_euclid(p) == 1);
                }
            }
        }
    }
    c
}

#[test]
fn hand_row_reduction() {
    let f = PrimeField::new(2).unwrap();
    let m = Matrix::from_entries(f, 2, 2, &[1, 1, 1, 0]);
    assert!(rref(&m).is_identity());
}

#[test]
fn modular_law_on_all_plane_pairs_of_gf2_4() {
    let f = PrimeField::new(2).unwrap();
    let planes = all_subspaces(f, 4, 2);
    assert_eq!(planes.len(), 35);
    for u in &planes {
        for w in &planes {
            let su: BTreeSet<V> = span_set(u.basis(), 4, 2);
            let sw: BTreeSet<V> = span_set(w.basis(), 4, 2);
            let meet = su.intersection(&sw).count();
            let join = span_set(&[u.basis(), w.basis()].concat(), 4, 2).len();
            assert_eq!(1 << u.intersect(w).unwrap().dim(), meet);
            assert_eq!(1 << u.sum(w).unwrap().dim(), join);
            if u != w && meet == 2 {
                assert_eq!((u.sum(w).unwrap().dim(), u.intersect(w).unwrap().dim()), (3, 1));
            }
        }
    }
}

#[test]
fn perp_of_a_point_in_sp4_2() {
    let sp = SymplecticSpace::standard(4, 2).unwrap();
    let e1 = sp.span(&[sp.h(1)]);
    let want = sp.span(&[sp.h(1), sp.h(3), sp.h(4)]);
    assert_eq!(sp.perp(&e1).unwrap(), want);
    let oracle: BTreeSet<V> = all_vectors(4, 2).into_iter().filter(|v| form(v, &sp.h(1), 2) == 0).collect();
    assert_eq!(oracle, span_set(want.basis(), 4, 2));
}

#[test]
fn double_perp_sweep_gf3_4() {
    let sp = SymplecticSpace::standard(4, 3).unwrap();
    for k in 0..=4 {
        for u in all_subspaces(sp.field(), 4, k) {
            let perp = sp.perp(&u).unwrap();
            let oracle: BTreeSet<V> =
                all_vectors(4, 3).into_iter().filter(|v| u.basis().iter().all(|b| form(v, b, 3) == 0)).collect();
            assert_eq!(span_set(perp.basis(), 4, 3), oracle);
            assert_eq!(sp.perp(&perp).unwrap(), u);
        }
    }
}

#[test]
fn three_spaces_of_sp4_2() {
    let sp = SymplecticSpace::standard(4, 2).unwrap();
    let spaces = all_subspaces(sp.field(), 4, 3);
    assert_eq!(spaces.len(), 15);
    for u in spaces {
        assert_eq!((sp.rank(&u).unwrap(), sp.radical(&u).unwrap().dim()), (2, 1));
    }
}

#[test]
fn gamma_counts_match_enumeration() {
    for (n, p) in [(4usize, 2u8), (4, 3), (5, 2)] {
        let sp = SymplecticSpace::standard(n, p).unwrap();
        let g = build_gamma(&sp).unwrap();
        let got: BTreeMap<usize, usize> = g.type_counts().into_iter().collect();
        assert_eq!(got, gamma_counts_oracle(n, p), "n = {n}, p = {p}");
    }
    let frozen: BTreeMap<usize, usize> = [(1, 15), (2, 20), (3, 15)].into();
    assert_eq!(gamma_counts_oracle(4, 2), frozen);
}

#[test]
fn exceptional_pi_counts() {
    let sp = SymplecticSpace::standard(6, 2).unwrap();
    let (p, h) = standard_pi_pair(&sp);
    let pi = build_pi(&sp, &p, &h).unwrap();
    assert_eq!(pi.type_counts()[0], (1, 16));
    let pts = pi.type_mask(0);
    assert_eq!(pi.types(), &[1, 2, 3, 4]);
    for (t, size) in [(1usize, 2usize), (2, 4), (3, 8)] {
        for x in pi.ids_of_type(t) {
            assert_eq!(pi.neighbors(x).intersection(pts).count(), size);
        }
    }
}

#[test]
fn group_orders_against_formula_and_closure() {
    let formula = |n: u32, q: u128| -> u128 {
        let m = n / 2;
        (1..=m).fold(q.pow(m * m), |acc, i| acc * (q.pow(2 * i) - 1))
    };
    assert_eq!(sl2_count(2), 6);
    assert_eq!(sl2_count(3), 24);
    for (n, p, want) in [(2usize, 2u8, 6usize), (2, 3, 24), (4, 2, 720), (4, 3, 51840)] {
        let sp = SymplecticSpace::standard(n, p).unwrap();
        assert_eq!(sp_group(&sp, 100_000).unwrap().order(), want);
        assert_eq!(sp_order(n, p), want as u128);
        assert_eq!(formula(n as u32, p as u128), want as u128);
    }
    // Index of the block-diagonal SL2 x SL2 in Sp4(3).
    assert_eq!(formula(4, 3) / (sl2_count(3) * sl2_count(3)) as u128, 90);
}

#[test]
fn s3_presentation_enumerates_to_six() {
    let pr = Presentation::new(2, vec![vec![1, 1], vec![2, 2], vec![1, 2, 1, 2, 1, 2]]).unwrap();
    let t = todd_coxeter(&pr, &[], 1000).unwrap();
    // S3 as permutations of three points: closure from two transpositions.
    let mut seen: BTreeSet<[u8; 3]> = [[0, 1, 2]].into();
    let gens = [[1u8, 0, 2], [0, 2, 1]];
    let mut stack = vec![[0u8, 1, 2]];
    while let Some(x) = stack.pop() {
        for g in &gens {
            let y = [g[x[0] as usize], g[x[1] as usize], g[x[2] as usize]];
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    assert_eq!(t.index(), seen.len());
    assert_eq!(t.index(), 6);
}
