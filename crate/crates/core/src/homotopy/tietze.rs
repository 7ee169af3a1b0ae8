use super::{canonical_relator, cyclic_reduce, free_reduce, generator_of, invert, Letter, Presentation, Word};
use std::collections::BTreeSet;

/// Outcome of a Tietze pass. `images[g]` expresses old generator `g` as a word
/// in the new generators.
#[derive(Clone, Debug)]
pub struct Simplified {
    pub presentation: Presentation,
    pub images: Vec<Word>,
}

struct State {
    alive: Vec<bool>,
    subst: Vec<Option<Word>>,
    order: Vec<usize>,
    rels: Vec<Option<Word>>,
    occ: Vec<Vec<usize>>,
    queue: Vec<usize>,
}

impl State {
    fn new(pr: &Presentation) -> Self {
        let mut s = State {
            alive: vec![true; pr.generators],
            subst: vec![None; pr.generators],
            order: Vec::new(),
            rels: Vec::new(),
            occ: vec![Vec::new(); pr.generators],
            queue: Vec::new(),
        };
        for r in &pr.relators {
            s.store(cyclic_reduce(r));
        }
        s
    }

    fn store(&mut self, r: Word) {
        let rid = self.rels.len();
        self.index(rid, &r);
        self.rels.push((!r.is_empty()).then_some(r));
    }

    fn index(&mut self, rid: usize, r: &Word) {
        for &l in r {
            let g = generator_of(l);
            if self.occ[g].last() != Some(&rid) {
                self.occ[g].push(rid);
            }
        }
        if !r.is_empty() && r.len() <= 2 {
            self.queue.push(rid);
        }
    }

    /// Replace generator `g` by `value` everywhere.
    fn eliminate(&mut self, g: usize, value: Word) {
        let inv = invert(&value);
        let mut rids = std::mem::take(&mut self.occ[g]);
        rids.sort_unstable();
        rids.dedup();
        for rid in rids {
            let Some(r) = &self.rels[rid] else { continue };
            if !r.iter().any(|&l| generator_of(l) == g) {
                continue;
            }
            let mut next: Word = Vec::with_capacity(r.len());
            for &l in r {
                if generator_of(l) == g {
                    next.extend_from_slice(if l > 0 { &value } else { &inv });
                } else {
                    next.push(l);
                }
            }
            let next = cyclic_reduce(&next);
            self.index(rid, &next);
            self.rels[rid] = (!next.is_empty()).then_some(next);
        }
        self.alive[g] = false;
        self.subst[g] = Some(value);
        self.order.push(g);
    }

    fn drain_short(&mut self) {
        while let Some(rid) = self.queue.pop() {
            let Some(r) = self.rels[rid].clone() else { continue };
            match r.len() {
                1 => {
                    self.rels[rid] = None;
                    self.eliminate(generator_of(r[0]), Vec::new());
                }
                2 if generator_of(r[0]) != generator_of(r[1]) => {
                    self.rels[rid] = None;
                    let value = if r[0] > 0 { vec![-r[1]] } else { vec![r[1]] };
                    self.eliminate(generator_of(r[0]), value);
                }
                _ => {}
            }
        }
    }

    fn total(&self) -> usize {
        self.rels.iter().flatten().map(Vec::len).sum()
    }

    /// Pick a generator occurring exactly once in some relator, preferring
    /// the cheapest substitution, and remove both.
    fn eliminate_once(&mut self, limit: usize) -> bool {
        let n = self.alive.len();
        let mut count = vec![0usize; n];
        for r in self.rels.iter().flatten() {
            for &l in r {
                count[generator_of(l)] += 1;
            }
        }
        let total = self.total();
        let mut best: Option<(i64, usize, usize, usize)> = None;
        let mut local = vec![0u32; n];
        for (rid, r) in self.rels.iter().enumerate() {
            let Some(r) = r else { continue };
            for &l in r {
                local[generator_of(l)] += 1;
            }
            for (pos, &l) in r.iter().enumerate() {
                let g = generator_of(l);
                if local[g] != 1 {
                    continue;
                }
                let len = r.len() as i64;
                let cost = (len - 2) * (count[g] as i64 - 1) - len;
                if total as i64 + cost > limit as i64 {
                    continue;
                }
                if best.map_or(true, |b| (cost, rid) < (b.0, b.1)) {
                    best = Some((cost, rid, pos, g));
                }
            }
            for &l in r {
                local[generator_of(l)] = 0;
            }
        }
        let Some((_, rid, pos, g)) = best else { return false };
        let r = self.rels[rid].take().unwrap();
        let x = r[pos];
        let rest: Word = r[pos + 1..].iter().chain(&r[..pos]).copied().collect();
        let value = if x > 0 { invert(&rest) } else { rest };
        self.eliminate(g, value);
        true
    }
}

/// Bounded Tietze simplification: short relators first, then substitution of
/// generators that occur once in a relator, then duplicate removal.
pub fn simplify(pr: &Presentation) -> Simplified {
    let mut s = State::new(pr);
    s.drain_short();
    let limit = 2 * s.total() + 1000;
    while s.eliminate_once(limit) {
        s.drain_short();
    }
    let n = pr.generators;
    let mut new_index = vec![usize::MAX; n];
    let mut k = 0;
    for g in 0..n {
        if s.alive[g] {
            new_index[g] = k;
            k += 1;
        }
    }
    let rename = |l: Letter| -> Letter {
        let g = new_index[generator_of(l)] as Letter + 1;
        if l > 0 {
            g
        } else {
            -g
        }
    };
    let mut images: Vec<Word> = vec![Vec::new(); n];
    for g in 0..n {
        if s.alive[g] {
            images[g] = vec![new_index[g] as Letter + 1];
        }
    }
    for &g in s.order.iter().rev() {
        let mut w = Word::new();
        for &l in s.subst[g].as_ref().unwrap() {
            let img = &images[generator_of(l)];
            if l > 0 {
                w.extend_from_slice(img);
            } else {
                w.extend(invert(img));
            }
        }
        images[g] = free_reduce(&w);
    }
    let mut seen = BTreeSet::new();
    let mut relators: Vec<Word> = Vec::new();
    for r in s.rels.iter().flatten() {
        let c = canonical_relator(&r.iter().map(|&l| rename(l)).collect::<Word>());
        if !c.is_empty() && seen.insert(c.clone()) {
            relators.push(c);
        }
    }
    relators.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Simplified { presentation: Presentation { generators: k, relators }, images }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collapses_to_cyclic() {
        // <a, b, c | a b^-1, b c^-1, c^3>
        let pr = Presentation::new(3, vec![vec![1, -2], vec![2, -3], vec![3, 3, 3]]).unwrap();
        let s = simplify(&pr);
        assert_eq!(s.presentation.generators, 1);
        assert_eq!(s.presentation.relators, vec![vec![-1, -1, -1]]);
        assert_eq!(s.images[0], s.images[2]);
    }

    #[test]
    fn images_respect_relators() {
        // a = b c, so a vanishes and its image is the word for b c.
        let pr = Presentation::new(3, vec![vec![1, -3, -2], vec![2, 2], vec![3, 3], vec![2, 3, 2, 3, 2, 3]]).unwrap();
        let s = simplify(&pr);
        assert_eq!(s.presentation.generators, 2);
        let bc: Word = s.images[1].iter().chain(&s.images[2]).copied().collect();
        assert_eq!(s.images[0], free_reduce(&bc));
    }
}
