use super::Cycle;
use crate::bitset::BitSet;
use crate::geometry::{Geometry, ObjectId};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::VecDeque;

/// Elementary homotopy moves, each acting at position `pos` of the current sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Move {
    /// Move the base from `from` to an incident point `to`.
    Rebase { from: ObjectId, to: ObjectId },
    /// `a, x, a` at `pos` becomes `a`.
    Backtrack { pos: usize, a: ObjectId, x: ObjectId },
    /// `a, c` at `pos` becomes `a, b, c` when `insert`, and the reverse otherwise.
    Triangle { pos: usize, a: ObjectId, b: ObjectId, c: ObjectId, insert: bool },
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub cycle: Cycle,
    pub moves: Vec<Move>,
}

impl Reduction {
    /// Replay the log on `start` and check every move is a legal elementary
    /// homotopy ending at the reported cycle.
    pub fn verify(&self, g: &Geometry, start: &Cycle) -> bool {
        let mut seq = start.ids().to_vec();
        for m in &self.moves {
            match *m {
                Move::Rebase { from, to } => {
                    if seq[0] != from || !g.incident(from, to) {
                        return false;
                    }
                    seq.insert(0, to);
                    seq.push(to);
                }
                Move::Backtrack { pos, a, x } => {
                    if seq.get(pos..pos + 3) != Some(&[a, x, a][..]) || !g.incident(a, x) {
                        return false;
                    }
                    seq.drain(pos + 1..pos + 3);
                }
                Move::Triangle { pos, a, b, c, insert } => {
                    if !(g.incident(a, b) && g.incident(b, c) && g.incident(a, c)) {
                        return false;
                    }
                    if insert {
                        if seq.get(pos..pos + 2) != Some(&[a, c][..]) {
                            return false;
                        }
                        seq.insert(pos + 1, b);
                    } else {
                        if seq.get(pos..pos + 3) != Some(&[a, b, c][..]) {
                            return false;
                        }
                        seq.remove(pos + 1);
                    }
                }
            }
        }
        seq == self.cycle.ids()
    }
}

fn residue_path(g: &Geometry, within: &BitSet, from: ObjectId, to: ObjectId) -> Option<Vec<ObjectId>> {
    let mut prev = vec![usize::MAX; g.len()];
    prev[from] = from;
    let mut q = VecDeque::from([from]);
    while let Some(x) = q.pop_front() {
        if x == to {
            let mut path = vec![to];
            let mut y = to;
            while y != from {
                y = prev[y];
                path.push(y);
            }
            path.reverse();
            return Some(path);
        }
        for y in g.neighbors(x).intersection(within).iter() {
            if prev[y] == usize::MAX {
                prev[y] = x;
                q.push_back(y);
            }
        }
    }
    None
}

/// Homotope a cycle to one through points and lines only, based at a point.
pub fn reduce_to_point_line(g: &Geometry, c: &Cycle) -> Result<Reduction> {
    if g.rank() < 2 || !g.has_string_diagram() {
        return Err(Error::Precondition("geometry has no string diagram".into()));
    }
    let mut low = g.type_mask(0).clone();
    low.union_with(g.type_mask(1));
    let mut seq = c.ids().to_vec();
    let mut moves = Vec::new();
    if g.type_index(seq[0]) != 0 {
        let from = seq[0];
        let to = g
            .neighbors(from)
            .intersection(g.type_mask(0))
            .first()
            .ok_or_else(|| Error::Precondition("base has no incident point".into()))?;
        moves.push(Move::Rebase { from, to });
        seq.insert(0, to);
        seq.push(to);
    }
    while let Some(i) = (1..seq.len() - 1).find(|&i| g.type_index(seq[i]) >= 2) {
        let (a, x, b) = (seq[i - 1], seq[i], seq[i + 1]);
        if g.type_index(b) > g.type_index(x) {
            moves.push(Move::Triangle { pos: i - 1, a, b: x, c: b, insert: false });
            seq.remove(i);
            continue;
        }
        let y = if g.type_index(b) == 0 {
            b
        } else {
            let mut cand = g.neighbors(b).intersection(g.neighbors(x));
            cand.intersect_with(g.type_mask(0));
            cand.first().ok_or_else(|| Error::Precondition("no point in a residue".into()))?
        };
        let within = g.neighbors(x).intersection(&low);
        let path = residue_path(g, &within, a, y)
            .ok_or_else(|| Error::Precondition("point-line graph of a residue is disconnected".into()))?;
        let mut pos = i - 1;
        for step in path.windows(2) {
            moves.push(Move::Triangle { pos, a: step[0], b: step[1], c: x, insert: true });
            seq.insert(pos + 1, step[1]);
            pos += 1;
        }
        if y == b {
            moves.push(Move::Backtrack { pos, a: y, x });
            seq.drain(pos + 1..pos + 3);
        } else {
            moves.push(Move::Triangle { pos, a: y, b: x, c: b, insert: false });
            seq.remove(pos + 1);
        }
    }
    Ok(Reduction { cycle: Cycle(seq), moves })
}
