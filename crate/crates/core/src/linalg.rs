//! Sparse exact linear algebra: vectors, echelon forms, kernels.

use std::collections::BTreeMap;

use crate::field::{FieldSpec, Scalar};

/// Sparse vector: strictly increasing indices, no zero entries.
pub type SVec = Vec<(usize, Scalar)>;

pub fn unit(field: FieldSpec, i: usize) -> SVec {
    vec![(i, field.one())]
}

pub fn scale(v: &SVec, c: &Scalar) -> SVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x.mul(c))).collect()
}

/// Accumulates `c * v` into a map, dropping entries that cancel.
pub fn axpy(acc: &mut BTreeMap<usize, Scalar>, c: &Scalar, v: &SVec) {
    if c.is_zero() {
        return;
    }
    for (i, x) in v {
        let t = x.mul(c);
        match acc.get_mut(i) {
            Some(y) => {
                *y = y.add(&t);
                if y.is_zero() {
                    acc.remove(i);
                }
            }
            None => {
                acc.insert(*i, t);
            }
        }
    }
}

pub fn to_svec(m: BTreeMap<usize, Scalar>) -> SVec {
    m.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

pub fn add(a: &SVec, b: &SVec) -> SVec {
    let mut m: BTreeMap<usize, Scalar> = a.iter().cloned().collect();
    if let Some((_, x)) = b.first() {
        axpy(&mut m, &x.field().one(), b);
    }
    to_svec(m)
}

/// Row echelon form where each row's pivot is its largest index.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: FieldSpec,
    rows: BTreeMap<usize, SVec>,
}

impl Echelon {
    pub fn new(field: FieldSpec) -> Echelon {
        Echelon { field, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.rows.contains_key(&i)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduces `v` until no entry sits on a pivot column.
    pub fn reduce(&self, v: &SVec) -> SVec {
        let mut w: BTreeMap<usize, Scalar> = v.iter().cloned().collect();
        let mut bound = usize::MAX;
        loop {
            let next = w
                .range(..bound)
                .rev()
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            let Some((c, x)) = next else { break };
            axpy(&mut w, &x.neg(), &self.rows[&c]);
            bound = c;
        }
        to_svec(w)
    }

    /// Adds `v` to the span. Returns false when it was already contained.
    pub fn insert(&mut self, v: &SVec) -> bool {
        let r = self.reduce(v);
        match r.last() {
            None => false,
            Some((p, lead)) => {
                let p = *p;
                let r = scale(&r, &lead.inv());
                self.rows.insert(p, r);
                true
            }
        }
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// A basis of the span (not necessarily reduced against each other).
    pub fn basis(&self) -> Vec<SVec> {
        self.rows.values().cloned().collect()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
}

/// Basis of the span of `vs`.
pub fn span_basis(field: FieldSpec, vs: &[SVec]) -> Vec<SVec> {
    let mut e = Echelon::new(field);
    for v in vs {
        e.insert(v);
    }
    e.basis()
}

pub fn rank(field: FieldSpec, vs: &[SVec]) -> usize {
    let mut e = Echelon::new(field);
    for v in vs {
        e.insert(v);
    }
    e.rank()
}

/// Kernel of the map sending the i-th unit vector to `images[i]`, as coefficient vectors.
pub fn kernel(field: FieldSpec, images: &[SVec]) -> Vec<SVec> {
    // Each row carries the combination of inputs that produced it.
    let mut rows: BTreeMap<usize, (SVec, SVec)> = BTreeMap::new();
    let mut out = Vec::new();
    for (k, img) in images.iter().enumerate() {
        let mut w: BTreeMap<usize, Scalar> = img.iter().cloned().collect();
        let mut combo: BTreeMap<usize, Scalar> = BTreeMap::new();
        combo.insert(k, field.one());
        let mut bound = usize::MAX;
        loop {
            let next = w
                .range(..bound)
                .rev()
                .find(|(c, _)| rows.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            let Some((c, x)) = next else { break };
            let (row, rc) = &rows[&c];
            let m = x.neg();
            axpy(&mut w, &m, row);
            axpy(&mut combo, &m, rc);
            bound = c;
        }
        let w = to_svec(w);
        let combo = to_svec(combo);
        match w.last() {
            None => out.push(combo),
            Some((p, lead)) => {
                let inv = lead.inv();
                rows.insert(*p, (scale(&w, &inv), scale(&combo, &inv)));
            }
        }
    }
    out
}

/// Intersection of two subspaces given by spanning sets.
pub fn intersection(field: FieldSpec, a: &[SVec], b: &[SVec]) -> Vec<SVec> {
    let a = span_basis(field, a);
    let b = span_basis(field, b);
    // Solve sum x_i a_i = sum y_j b_j; the kernel of [a | -b] gives the common vectors.
    let mut imgs: Vec<SVec> = a.clone();
    imgs.extend(b.iter().map(|v| scale(v, &field.from_i64(-1))));
    let ker = kernel(field, &imgs);
    let mut res = Echelon::new(field);
    for k in ker {
        let mut acc = BTreeMap::new();
        for (i, c) in &k {
            if *i < a.len() {
                axpy(&mut acc, c, &a[*i]);
            }
        }
        res.insert(&to_svec(acc));
    }
    res.basis()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(f: FieldSpec, xs: &[(usize, i64)]) -> SVec {
        xs.iter().map(|(i, x)| (*i, f.from_i64(*x))).filter(|(_, x)| !x.is_zero()).collect()
    }

    #[test]
    fn echelon_rank_and_membership() {
        let f = FieldSpec::Rationals;
        let mut e = Echelon::new(f);
        assert!(e.insert(&v(f, &[(0, 1), (1, 2)])));
        assert!(e.insert(&v(f, &[(1, 1), (2, 1)])));
        assert!(!e.insert(&v(f, &[(0, 1), (1, 3), (2, 1)])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&v(f, &[(0, 2), (1, 4)])));
        assert!(!e.contains(&v(f, &[(2, 1)])));
    }

    #[test]
    fn kernel_of_dependent_columns() {
        let f = FieldSpec::PrimeField(2);
        let imgs = vec![v(f, &[(0, 1)]), v(f, &[(1, 1)]), v(f, &[(0, 1), (1, 1)])];
        let k = kernel(f, &imgs);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].len(), 3);
    }

    #[test]
    fn intersection_of_planes() {
        let f = FieldSpec::Rationals;
        let a = vec![v(f, &[(0, 1)]), v(f, &[(1, 1)])];
        let b = vec![v(f, &[(1, 1)]), v(f, &[(2, 1)])];
        let i = intersection(f, &a, &b);
        assert_eq!(i.len(), 1);
        assert_eq!(i[0].iter().map(|(k, _)| *k).collect::<Vec<_>>(), vec![1]);
    }
}
