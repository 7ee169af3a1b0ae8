//! HLT coset enumeration with lookahead and union-find coincidence handling.

use crate::homotopy::{Letter, Presentation, Word};
use serde::Serialize;

const UNDEF: u32 = u32::MAX;

/// Enumeration ran out of rows; a resource signal, not a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Overflow {
    pub cap: usize,
    pub defined: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EnumerationStats {
    pub defined: usize,
    pub max_live: usize,
    pub lookaheads: usize,
}

/// A closed coset table: `table[c * cols + col]` is the image of coset `c`.
#[derive(Clone, Debug)]
pub struct CosetTable {
    generators: usize,
    rows: usize,
    table: Vec<u32>,
    pub stats: EnumerationStats,
}

#[inline]
pub(crate) fn column(l: Letter) -> usize {
    debug_assert!(l != 0);
    if l > 0 {
        2 * (l as usize - 1)
    } else {
        2 * ((-l) as usize - 1) + 1
    }
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.rows
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn act(&self, coset: usize, l: Letter) -> usize {
        self.table[coset * 2 * self.generators + column(l)] as usize
    }

    pub fn apply(&self, coset: usize, w: &[Letter]) -> usize {
        w.iter().fold(coset, |c, &l| self.act(c, l))
    }

    /// Permutation of the cosets induced by a letter.
    pub fn permutation(&self, l: Letter) -> Vec<usize> {
        (0..self.rows).map(|c| self.act(c, l)).collect()
    }

    /// Every relator fixes every coset, every subgroup word fixes coset 0, and
    /// each generator column is a permutation inverted by its partner column.
    pub fn verify(&self, pr: &Presentation, subgroup: &[Word]) -> bool {
        let cols = 2 * self.generators;
        for c in 0..self.rows {
            for x in 0..cols {
                let d = self.table[c * cols + x];
                if d == UNDEF || d as usize >= self.rows || self.table[d as usize * cols + (x ^ 1)] as usize != c {
                    return false;
                }
            }
        }
        (0..self.rows).all(|c| pr.relators.iter().all(|r| self.apply(c, r) == c))
            && subgroup.iter().all(|w| self.apply(0, w) == 0)
    }
}

struct Enumerator {
    cols: usize,
    cap: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    n: usize,
    live: usize,
    queue: Vec<u32>,
    rels: Vec<Vec<u32>>,
    stats: EnumerationStats,
}

struct NoRoom;

impl Enumerator {
    #[inline]
    fn get(&self, c: u32, x: u32) -> u32 {
        self.table[c as usize * self.cols + x as usize]
    }

    #[inline]
    fn set(&mut self, c: u32, x: u32, v: u32) {
        self.table[c as usize * self.cols + x as usize] = v;
    }

    fn alive(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn new_row(&mut self) -> u32 {
        let c = self.n as u32;
        self.n += 1;
        self.table.resize(self.n * self.cols, UNDEF);
        self.parent.push(c);
        self.live += 1;
        self.stats.defined += 1;
        self.stats.max_live = self.stats.max_live.max(self.live);
        c
    }

    fn define(&mut self, c: u32, x: u32) -> Result<(), NoRoom> {
        if self.n >= self.cap {
            return Err(NoRoom);
        }
        let d = self.new_row();
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
        Ok(())
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != r {
            let next = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32) {
        let a1 = self.rep(a);
        let b1 = self.rep(b);
        if a1 == b1 {
            return;
        }
        let (lo, hi) = if a1 < b1 { (a1, b1) } else { (b1, a1) };
        self.parent[hi as usize] = lo;
        self.live -= 1;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut qi = 0;
        while qi < self.queue.len() {
            let e = self.queue[qi];
            qi += 1;
            for x in 0..self.cols as u32 {
                let f = self.get(e, x);
                if f == UNDEF {
                    continue;
                }
                self.set(f, x ^ 1, UNDEF);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let ex = self.get(e1, x);
                if ex != UNDEF {
                    self.merge(f1, ex);
                } else {
                    let fx = self.get(f1, x ^ 1);
                    if fx != UNDEF {
                        self.merge(e1, fx);
                    } else {
                        self.set(e1, x, f1);
                        self.set(f1, x ^ 1, e1);
                    }
                }
            }
        }
    }

    /// Trace `w` around coset `c`, defining new cosets when `fill` is set.
    fn scan(&mut self, c: u32, w: &[u32], fill: bool) -> Result<(), NoRoom> {
        let mut f = c;
        let mut b = c;
        let mut i = 0;
        let mut j = w.len();
        loop {
            while i < j {
                let next = self.get(f, w[i]);
                if next == UNDEF {
                    break;
                }
                f = next;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                let next = self.get(b, w[j - 1] ^ 1);
                if next == UNDEF {
                    break;
                }
                b = next;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    fn lookahead(&mut self) {
        self.stats.lookaheads += 1;
        for c in 0..self.n as u32 {
            for r in 0..self.rels.len() {
                if !self.alive(c) {
                    break;
                }
                let w = std::mem::take(&mut self.rels[r]);
                let _ = self.scan(c, &w, false);
                self.rels[r] = w;
            }
        }
    }

    /// Renumber live cosets in order; returns the new index of `c` (or of the
    /// next live coset after it).
    fn compact(&mut self, c: u32) -> u32 {
        let mut newnum = vec![UNDEF; self.n];
        let mut k = 0u32;
        let mut c_new = None;
        for old in 0..self.n {
            if old as u32 >= c && c_new.is_none() {
                c_new = Some(k);
            }
            if self.parent[old] == old as u32 {
                newnum[old] = k;
                k += 1;
            }
        }
        let mut table = vec![UNDEF; k as usize * self.cols];
        for old in 0..self.n {
            let nn = newnum[old];
            if nn == UNDEF {
                continue;
            }
            for x in 0..self.cols {
                let d = self.table[old * self.cols + x];
                if d != UNDEF {
                    let r = self.rep(d);
                    table[nn as usize * self.cols + x] = newnum[r as usize];
                }
            }
        }
        self.table = table;
        self.n = k as usize;
        self.parent = (0..k).collect();
        c_new.unwrap_or(k)
    }

    fn make_room(&mut self, c: u32) -> Result<u32, Overflow> {
        self.lookahead();
        let c = self.compact(c);
        if self.n >= self.cap {
            Err(Overflow { cap: self.cap, defined: self.stats.defined })
        } else {
            Ok(c)
        }
    }
}

/// Enumerate the cosets of the subgroup generated by `subgroup` in the group
/// presented by `pr`, using at most `max_cosets` rows at a time.
pub fn todd_coxeter(pr: &Presentation, subgroup: &[Word], max_cosets: usize) -> Result<CosetTable, Overflow> {
    assert!(max_cosets > 0);
    let cols = 2 * pr.generators;
    let to_cols = |w: &Word| -> Vec<u32> { w.iter().map(|&l| column(l) as u32).collect() };
    let mut e = Enumerator {
        cols,
        cap: max_cosets,
        table: Vec::new(),
        parent: Vec::new(),
        n: 0,
        live: 0,
        queue: Vec::new(),
        rels: pr.relators.iter().filter(|r| !r.is_empty()).map(to_cols).collect(),
        stats: EnumerationStats::default(),
    };
    e.new_row();
    let sub: Vec<Vec<u32>> = subgroup.iter().map(to_cols).collect();
    for w in &sub {
        while e.scan(0, w, true).is_err() {
            e.make_room(0)?;
        }
    }
    let mut c: u32 = 0;
    'outer: while (c as usize) < e.n {
        if e.alive(c) {
            let mut r = 0;
            while r < e.rels.len() {
                let w = std::mem::take(&mut e.rels[r]);
                let res = e.scan(c, &w, true);
                e.rels[r] = w;
                if res.is_err() {
                    c = e.make_room(c)?;
                    continue 'outer;
                }
                if !e.alive(c) {
                    break;
                }
                r += 1;
            }
            if e.alive(c) {
                for x in 0..cols as u32 {
                    if e.get(c, x) == UNDEF && e.define(c, x).is_err() {
                        c = e.make_room(c)?;
                        continue 'outer;
                    }
                }
            }
        }
        c += 1;
    }
    e.compact(0);
    let stats = e.stats;
    Ok(CosetTable { generators: pr.generators, rows: e.n, table: e.table, stats })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(generators: usize, relators: Vec<Word>) -> Presentation {
        Presentation::new(generators, relators).unwrap()
    }

    #[test]
    fn cyclic_subgroup_index() {
        let pr = pres(1, vec![vec![1, 1, 1, 1]]);
        let t = todd_coxeter(&pr, &[vec![1, 1]], 100).unwrap();
        assert_eq!(t.index(), 2);
        assert!(t.verify(&pr, &[vec![1, 1]]));
    }

    #[test]
    fn symmetric_group_s3() {
        let pr = pres(2, vec![vec![1, 1], vec![2, 2], vec![1, 2, 1, 2, 1, 2]]);
        let t = todd_coxeter(&pr, &[], 100).unwrap();
        assert_eq!(t.index(), 6);
        assert!(t.verify(&pr, &[]));
    }

    #[test]
    fn free_group_overflows() {
        let pr = pres(2, vec![]);
        assert!(todd_coxeter(&pr, &[], 500).is_err());
    }

    #[test]
    fn tight_cap_still_closes_via_lookahead() {
        // Coxeter group of type A3 (order 24) with a cap barely above the order.
        let pr = pres(
            3,
            vec![
                vec![1, 1],
                vec![2, 2],
                vec![3, 3],
                vec![1, 2, 1, 2, 1, 2],
                vec![2, 3, 2, 3, 2, 3],
                vec![1, 3, 1, 3],
            ],
        );
        let t = todd_coxeter(&pr, &[], 30).unwrap();
        assert_eq!(t.index(), 24);
        assert!(t.verify(&pr, &[]));
    }
}
