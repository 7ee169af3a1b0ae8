use super::todd_coxeter;
use crate::groups::FinGroup;
use crate::homotopy::{invert, letter, Presentation, Word};
use crate::{Error, Result};
use std::collections::VecDeque;

/// Breadth-first tree words in the Cayley graph of `g` on `gens` (element ids).
pub fn cayley_words(g: &FinGroup, gens: &[usize]) -> Result<Vec<Word>> {
    let mut words: Vec<Option<Word>> = vec![None; g.order()];
    words[0] = Some(Vec::new());
    let mut q = VecDeque::from([0usize]);
    while let Some(x) = q.pop_front() {
        for (k, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            if words[y].is_none() {
                let mut w = words[x].clone().unwrap();
                w.push(letter(k, false));
                words[y] = Some(w);
                q.push_back(y);
            }
        }
    }
    words.into_iter().collect::<Option<Vec<Word>>>().ok_or(Error::NotGenerating)
}

/// All cycle-basis relators `t(x) s t(xs)^-1` of the Cayley graph, shortest first.
fn cycle_relators(g: &FinGroup, gens: &[usize], words: &[Word]) -> Vec<Word> {
    let mut rels = Vec::new();
    for x in 0..g.order() {
        for (k, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            let mut w = words[x].clone();
            w.push(letter(k, false));
            w.extend(invert(&words[y]));
            let w = crate::homotopy::cyclic_reduce(&w);
            if !w.is_empty() {
                rels.push(crate::homotopy::canonical_relator(&w));
            }
        }
    }
    rels.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    rels.dedup();
    rels
}

/// Presentation of `g` on the generators `gens`. The shortest Cayley cycle
/// relators are kept, doubling the count until enumeration over the trivial
/// subgroup returns exactly `|g|`.
pub fn group_presentation(g: &FinGroup, gens: &[usize]) -> Result<Presentation> {
    let words = cayley_words(g, gens)?;
    let all = cycle_relators(g, gens, &words);
    let cap = (64 * g.order()).max(10_000);
    let mut take = gens.len().max(1);
    loop {
        let take_now = take.min(all.len());
        let pr = Presentation::new(gens.len(), all[..take_now].to_vec())?;
        if let Ok(t) = todd_coxeter(&pr, &[], cap) {
            if t.index() == g.order() {
                return Ok(pr);
            }
        }
        if take_now == all.len() {
            return Err(Error::Precondition("Cayley relators do not present the group".into()));
        }
        take *= 2;
    }
}
