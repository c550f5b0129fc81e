//! Special biserial presentations, strings and bands.

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::Serialize;

use crate::algebra::Algebra;
use crate::error::Error;
use crate::lattice::socle_echelon;
use crate::quiver::{Quiver, Relation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Letter {
    pub arrow: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Letter {
        Letter { arrow: self.arrow, inverse: !self.inverse }
    }

    pub fn start(self, q: &Quiver) -> usize {
        let a = &q.arrows[self.arrow];
        if self.inverse {
            a.target
        } else {
            a.source
        }
    }

    pub fn end(self, q: &Quiver) -> usize {
        let a = &q.arrows[self.arrow];
        if self.inverse {
            a.source
        } else {
            a.target
        }
    }
}

/// A walk in traversal order; `start` matters only for the empty word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Word {
    pub start: usize,
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self, q: &Quiver) -> Word {
        let start = self.letters.last().map(|l| l.end(q)).unwrap_or(self.start);
        Word { start, letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    pub fn render(&self, q: &Quiver) -> String {
        if self.letters.is_empty() {
            return format!("e_{}", q.vertices[self.start]);
        }
        self.letters
            .iter()
            .map(|l| if l.inverse { format!("{}⁻", q.arrows[l.arrow].name) } else { q.arrows[l.arrow].name.clone() })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BiserialReport {
    pub special_biserial: bool,
    pub witness: Option<String>,
}

/// Monomial relations plus the special biserial degree and continuation conditions.
pub fn is_special_biserial(a: &Algebra) -> BiserialReport {
    let no = |w: String| BiserialReport { special_biserial: false, witness: Some(w) };
    let q = &a.quiver;
    if let Some(r) = a.relations.iter().map(|r| r.normalized()).find(|r| r.terms.len() > 1) {
        return no(format!("the relation {} is not monomial", r.render(q)));
    }
    for v in 0..q.num_vertices() {
        if q.in_arrows(v).len() > 2 || q.out_arrows(v).len() > 2 {
            return no(format!("more than two arrows end or start at {}", q.vertices[v]));
        }
    }
    let nonzero = |x: usize, y: usize| !a.path_vec(&q.path(&[x, y]).unwrap()).is_empty();
    for b in 0..q.num_arrows() {
        let after = q.out_arrows(q.arrows[b].target).into_iter().filter(|&g| nonzero(b, g)).count();
        let before = q.in_arrows(q.arrows[b].source).into_iter().filter(|&d| nonzero(d, b)).count();
        if after > 1 || before > 1 {
            return no(format!("the arrow {} has two nonzero continuations on one side", q.arrows[b].name));
        }
    }
    BiserialReport { special_biserial: true, witness: None }
}

/// Replaces each binomial relation u − λv whose terms are socle paths by the two zero relations
/// u and v. This is the passage from a special biserial algebra to the string algebra obtained by
/// dividing out the socles of its biserial projective-injectives; both have the same bands.
pub fn string_reduction(a: &Algebra) -> Result<Algebra, Error> {
    let soc = socle_echelon(a);
    let mut rels = Vec::new();
    for r in &a.relations {
        let r = r.normalized();
        if r.terms.len() == 1 {
            rels.push(r);
            continue;
        }
        let in_socle = r.terms.iter().all(|(_, p)| {
            let v = a.path_vec(p);
            !v.is_empty() && soc.contains(&v)
        });
        if r.terms.len() != 2 || !in_socle {
            return Err(Error::NonMonomial(r.render(&a.quiver)));
        }
        for (_, p) in r.terms {
            rels.push(Relation::monomial(p));
        }
    }
    Algebra::build_with_cap(&a.quiver, &rels, a.field, crate::algebra::DEFAULT_LENGTH_CAP)
}

/// Walk validity checks for a monomial algebra.
pub struct WordSystem<'a> {
    pub algebra: &'a Algebra,
    nonzero: HashSet<Vec<usize>>,
}

impl<'a> WordSystem<'a> {
    pub fn new(a: &'a Algebra) -> Result<WordSystem<'a>, Error> {
        let rep = is_special_biserial(a);
        if !rep.special_biserial {
            return Err(Error::NonMonomial(rep.witness.unwrap_or_default()));
        }
        Self::monomial(a)
    }

    /// Relation-free walks of any monomial algebra, without the special biserial conditions.
    pub fn monomial(a: &'a Algebra) -> Result<WordSystem<'a>, Error> {
        if let Some(r) = a.relations.iter().map(|r| r.normalized()).find(|r| r.terms.len() > 1) {
            return Err(Error::NonMonomial(r.render(&a.quiver)));
        }
        let nonzero = a.nonzero_paths(crate::lattice::DEFAULT_PATH_CAP)?.into_iter().map(|(p, _)| p.arrows).collect();
        Ok(WordSystem { algebra: a, nonzero })
    }

    fn quiver(&self) -> &Quiver {
        &self.algebra.quiver
    }

    /// Whether `l` may follow the word `w` (which ends at the start of `l`).
    fn may_append(&self, w: &[Letter], l: Letter) -> bool {
        let Some(&last) = w.last() else { return true };
        if last == l.inv() {
            return false;
        }
        if last.inverse != l.inverse {
            return true;
        }
        let run = w.iter().rev().take_while(|m| m.inverse == l.inverse).count();
        let mut arrows: Vec<usize> = w[w.len() - run..].iter().map(|m| m.arrow).collect();
        arrows.push(l.arrow);
        if l.inverse {
            arrows.reverse();
        }
        self.nonzero.contains(&arrows)
    }

    pub fn is_string(&self, w: &Word) -> bool {
        let q = self.quiver();
        let mut v = w.start;
        for (i, &l) in w.letters.iter().enumerate() {
            if l.start(q) != v || !self.may_append(&w.letters[..i], l) {
                return false;
            }
            v = l.end(q);
        }
        true
    }

    fn letters_from(&self, v: usize) -> Vec<Letter> {
        let q = self.quiver();
        let mut out: Vec<Letter> = q.out_arrows(v).into_iter().map(|a| Letter { arrow: a, inverse: false }).collect();
        out.extend(q.in_arrows(v).into_iter().map(|a| Letter { arrow: a, inverse: true }));
        out
    }

    /// Depth-first visit of every string starting at `v` with at most `max_len` letters.
    pub fn dfs(&self, w: &mut Vec<Letter>, v: usize, max_len: usize, visit: &mut dyn FnMut(&[Letter], usize)) {
        visit(w, v);
        if w.len() == max_len {
            return;
        }
        for l in self.letters_from(v) {
            if self.may_append(w, l) {
                w.push(l);
                self.dfs(w, l.end(self.quiver()), max_len, visit);
                w.pop();
            }
        }
    }

    /// All strings of length at most `max_len`, one per inversion pair, each in its
    /// lexicographically smaller orientation.
    pub fn strings(&self, max_len: usize) -> Vec<Word> {
        let q = self.quiver();
        let mut out = Vec::new();
        for v in 0..q.num_vertices() {
            let mut w = Vec::new();
            self.dfs(&mut w, v, max_len, &mut |w, _| {
                let word = Word { start: v, letters: w.to_vec() };
                if w.is_empty() || cmp_letters(&word.letters, &word.inverse(q).letters) == Ordering::Less {
                    out.push(word);
                }
            });
        }
        out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| cmp_letters(&x.letters, &y.letters)).then(x.start.cmp(&y.start)));
        out
    }

    /// Primitive bands of length at most `max_len`, one per class under rotation and inversion.
    pub fn bands(&self, max_len: usize) -> Vec<Word> {
        let q = self.quiver();
        let mut out = Vec::new();
        for v in 0..q.num_vertices() {
            let mut w = Vec::new();
            self.dfs(&mut w, v, max_len, &mut |w, end| {
                if end == v && !w.is_empty() && self.is_band(w) && is_canonical_band(q, w) {
                    out.push(Word { start: v, letters: w.to_vec() });
                }
            });
        }
        out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| cmp_letters(&x.letters, &y.letters)));
        out
    }

    /// A closed string with both letter kinds whose square is a string and which is no proper power.
    pub fn is_band(&self, w: &[Letter]) -> bool {
        if !w.iter().any(|l| l.inverse) || !w.iter().any(|l| !l.inverse) {
            return false;
        }
        let mut sq = w.to_vec();
        for &l in w {
            if !self.may_append(&sq, l) {
                return false;
            }
            sq.push(l);
        }
        let n = w.len();
        (1..n).filter(|d| n % d == 0).all(|d| (0..n).any(|i| w[i] != w[(i + d) % n]))
    }
}

fn cmp_letters(x: &[Letter], y: &[Letter]) -> Ordering {
    x.cmp(y)
}

/// True iff `w` is the least word among its rotations and the rotations of its inverse.
fn is_canonical_band(q: &Quiver, w: &[Letter]) -> bool {
    let n = w.len();
    let inv = Word { start: 0, letters: w.to_vec() }.inverse(q).letters;
    let rot = |v: &[Letter], k: usize| -> Vec<Letter> { v[k..].iter().chain(&v[..k]).copied().collect() };
    (0..n).all(|k| cmp_letters(w, &rot(w, k)) != Ordering::Greater && cmp_letters(w, &rot(&inv, k)) != Ordering::Greater)
}

pub fn enumerate_strings(a: &Algebra, max_len: usize) -> Result<Vec<Word>, Error> {
    Ok(WordSystem::new(a)?.strings(max_len))
}

pub fn enumerate_bands(a: &Algebra, max_len: usize) -> Result<Vec<Word>, Error> {
    Ok(WordSystem::new(a)?.bands(max_len))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RepType {
    Finite,
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepTypeReport {
    pub rep_type: RepType,
    /// Search bound: twice the number of nonzero paths, trivial paths included.
    pub bound: usize,
    pub bands: usize,
    /// Whether binomial socle relations were first replaced by zero relations.
    pub reduced: bool,
}

/// Band criterion: a special biserial algebra is representation-infinite iff it has a band.
pub fn rep_type_special_biserial(a: &Algebra) -> Result<RepTypeReport, Error> {
    let reduced = a.relations.iter().any(|r| r.normalized().terms.len() > 1);
    let s = if reduced { string_reduction(a)? } else { a.clone() };
    let bound = 2 * s.dim();
    let ws = WordSystem::new(&s)?;
    // One band suffices; stop the search at the first hit.
    let q = &s.quiver;
    let mut found = 0;
    for v in 0..q.num_vertices() {
        if found > 0 {
            break;
        }
        let mut w = Vec::new();
        ws.dfs(&mut w, v, bound, &mut |w, end| {
            if found == 0 && end == v && !w.is_empty() && ws.is_band(w) {
                found += 1;
            }
        });
    }
    let rep_type = if found > 0 { RepType::Infinite } else { RepType::Finite };
    Ok(RepTypeReport { rep_type, bound, bands: found, reduced })
}
