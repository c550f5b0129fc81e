//! Finite-dimensional quotients kQ/I with a normal-path basis and a multiplication table.

use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;

use crate::error::Error;
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{axpy, kernel, to_svec, unit, Echelon, SVec};
use crate::quiver::{for_each_isomorphism, Path, Presentation, Quiver, QuiverIso, Relation};

pub const DEFAULT_LENGTH_CAP: usize = 64;

/// Upper bound on the number of paths enumerated when relations are not homogeneous.
const TRUNCATED_PATH_CAP: usize = 400_000;

/// An element of e_target A e_source, as coordinates over the global normal-path basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub source: usize,
    pub target: usize,
    pub coords: SVec,
}

impl Element {
    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Algebra {
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
    pub field: FieldSpec,
    basis: Vec<Path>,
    index: HashMap<Path, usize>,
    pairs: BTreeMap<(usize, usize), Vec<usize>>,
    /// Products b_i · b_j (b_j applied first); missing entries are zero.
    mult: HashMap<(usize, usize), SVec>,
    vertex_index: Vec<usize>,
    arrow_index: Vec<usize>,
}

fn validate(q: &Quiver, relations: &[Relation]) -> Result<Vec<Relation>, Error> {
    let mut out = Vec::new();
    for r in relations {
        let r = r.normalized();
        if r.terms.is_empty() {
            continue;
        }
        let (s, t) = (r.terms[0].1.source, r.terms[0].1.target);
        for (_, p) in &r.terms {
            if p.len() < 2 {
                return Err(Error::NotAdmissible(format!(
                    "relation term `{}` has length {} < 2",
                    q.path_name(p),
                    p.len()
                )));
            }
            if p.source != s || p.target != t {
                return Err(Error::NotAdmissible(format!("relation `{}` is not parallel", r.render(q))));
            }
        }
        out.push(r);
    }
    Ok(out)
}

impl Algebra {
    pub fn build(p: &Presentation, field: FieldSpec) -> Result<Algebra, Error> {
        Algebra::build_with_cap(&p.quiver, &p.relations, field, DEFAULT_LENGTH_CAP)
    }

    /// Builds kQ/I by length-graded elimination; mixed-length relations use truncated closure.
    pub fn build_with_cap(q: &Quiver, relations: &[Relation], field: FieldSpec, length_cap: usize) -> Result<Algebra, Error> {
        let rels = validate(q, relations)?;
        let homogeneous = rels.iter().all(|r| r.terms.iter().all(|(_, p)| p.len() == r.terms[0].1.len()));
        let (basis, mult) = if homogeneous {
            graded(q, &rels, field, length_cap)?
        } else {
            truncated(q, &rels, field, length_cap)?
        };
        let mut index = HashMap::new();
        let mut pairs: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, p) in basis.iter().enumerate() {
            index.insert(p.clone(), i);
            pairs.entry((p.source, p.target)).or_default().push(i);
        }
        let vertex_index = (0..q.num_vertices()).map(|v| index[&q.stationary(v)]).collect();
        let arrow_index = (0..q.num_arrows()).map(|a| index[&q.arrow_path(a)]).collect();
        let a = Algebra {
            quiver: q.clone(),
            relations: relations.to_vec(),
            field,
            basis,
            index,
            pairs,
            mult,
            vertex_index,
            arrow_index,
        };
        debug_assert_eq!(a.pairs.values().map(|v| v.len()).sum::<usize>(), a.dim());
        Ok(a)
    }

    pub fn presentation(&self) -> Presentation {
        Presentation { quiver: self.quiver.clone(), relations: self.relations.clone() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn basis_index(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Basis indices spanning e_target A e_source.
    pub fn pair_basis(&self, source: usize, target: usize) -> &[usize] {
        self.pairs.get(&(source, target)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn pair_dim(&self, source: usize, target: usize) -> usize {
        self.pair_basis(source, target).len()
    }

    pub fn vertex_element(&self, v: usize) -> usize {
        self.vertex_index[v]
    }

    pub fn arrow_element(&self, a: usize) -> usize {
        self.arrow_index[a]
    }

    /// Indices of basis paths of positive length; they span the radical N.
    pub fn radical_basis(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| !self.basis[i].is_empty()).collect()
    }

    /// Product of basis elements `i` after `j`.
    pub fn basis_product(&self, i: usize, j: usize) -> Option<&SVec> {
        self.mult.get(&(i, j))
    }

    /// Product `f` after `g` of coordinate vectors.
    pub fn mul_vec(&self, f: &SVec, g: &SVec) -> SVec {
        let mut acc = BTreeMap::new();
        for (i, x) in f {
            for (j, y) in g {
                if let Some(v) = self.mult.get(&(*i, *j)) {
                    axpy(&mut acc, &x.mul(y), v);
                }
            }
        }
        to_svec(acc)
    }

    pub fn multiply(&self, f: &Element, g: &Element) -> Result<Element, Error> {
        if g.target != f.source {
            return Err(Error::Incomposable);
        }
        Ok(Element { source: g.source, target: f.target, coords: self.mul_vec(&f.coords, &g.coords) })
    }

    pub fn element(&self, p: &Path) -> Element {
        Element { source: p.source, target: p.target, coords: self.path_vec(p) }
    }

    /// Normal form of a path.
    pub fn path_vec(&self, p: &Path) -> SVec {
        let mut v = unit(self.field, self.vertex_index[p.source]);
        for &a in &p.arrows {
            v = self.mul_vec(&unit(self.field, self.arrow_index[a]), &v);
            if v.is_empty() {
                break;
            }
        }
        v
    }

    /// Value of an integer combination of paths.
    pub fn eval(&self, r: &Relation) -> SVec {
        let mut acc = BTreeMap::new();
        for (c, p) in &r.terms {
            axpy(&mut acc, &self.field.from_i64(*c), &self.path_vec(p));
        }
        to_svec(acc)
    }

    pub fn basis_name(&self, i: usize) -> String {
        self.quiver.path_name(&self.basis[i])
    }

    pub fn render_vec(&self, v: &SVec) -> String {
        if v.is_empty() {
            return "0".into();
        }
        v.iter()
            .map(|(i, c)| if c.is_one() { self.basis_name(*i) } else { format!("{c}*{}", self.basis_name(*i)) })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Sequences dim rad^i e_y A e_x, i = 0, 1, ..., ending with 0, keyed by (x, y).
    pub fn radical_power_dims(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut out = BTreeMap::new();
        for &(x, y) in self.pairs.keys() {
            let chain = self.bimodule_radical_chain(x, y);
            out.insert((x, y), chain.iter().map(|s| s.len()).collect());
        }
        out
    }

    /// Bases of rad^0 ⊇ rad^1 ⊇ ... ⊇ 0 of e_y A e_x, with rad J = e_y N J + J N e_x.
    pub fn bimodule_radical_chain(&self, x: usize, y: usize) -> Vec<Vec<SVec>> {
        let left: Vec<usize> = self.pair_basis(y, y).iter().copied().filter(|&i| !self.basis[i].is_empty()).collect();
        let right: Vec<usize> = self.pair_basis(x, x).iter().copied().filter(|&i| !self.basis[i].is_empty()).collect();
        let mut cur: Vec<SVec> = self.pair_basis(x, y).iter().map(|&i| unit(self.field, i)).collect();
        let mut chain = vec![cur.clone()];
        while !cur.is_empty() {
            let mut e = Echelon::new(self.field);
            for v in &cur {
                for &l in &left {
                    e.insert(&self.mul_vec(&unit(self.field, l), v));
                }
                for &r in &right {
                    e.insert(&self.mul_vec(v, &unit(self.field, r)));
                }
            }
            cur = e.basis();
            chain.push(cur.clone());
        }
        chain
    }

    /// Basis of S = {f in N : Nf = fN = 0}.
    pub fn socle(&self) -> Vec<Element> {
        let mut out = Vec::new();
        for (&(x, y), idx) in &self.pairs {
            let rad: Vec<usize> = idx.iter().copied().filter(|&i| !self.basis[i].is_empty()).collect();
            if rad.is_empty() {
                continue;
            }
            // Stack the images under all arrow multiplications into one long vector.
            let na = self.quiver.num_arrows();
            let stride = self.dim();
            let images: Vec<SVec> = rad
                .iter()
                .map(|&i| {
                    let mut acc = BTreeMap::new();
                    for a in 0..na {
                        let ai = self.arrow_index[a];
                        let one = self.field.one();
                        let l = self.mul_vec(&unit(self.field, ai), &unit(self.field, i));
                        let r = self.mul_vec(&unit(self.field, i), &unit(self.field, ai));
                        let shift = |v: &SVec, k: usize| -> SVec { v.iter().map(|(j, c)| (j + k * stride, c.clone())).collect() };
                        axpy(&mut acc, &one, &shift(&l, 2 * a));
                        axpy(&mut acc, &one, &shift(&r, 2 * a + 1));
                    }
                    to_svec(acc)
                })
                .collect();
            for k in kernel(self.field, &images) {
                let coords: SVec = k.iter().map(|(j, c)| (rad[*j], c.clone())).collect();
                out.push(Element { source: x, target: y, coords });
            }
        }
        out
    }

    /// All paths with nonzero image, up to `cap` of them.
    pub fn nonzero_paths(&self, cap: usize) -> Result<Vec<(Path, SVec)>, Error> {
        let mut out: Vec<(Path, SVec)> = Vec::new();
        let mut frontier: Vec<(Path, SVec)> = (0..self.quiver.num_arrows())
            .map(|a| (self.quiver.arrow_path(a), unit(self.field, self.arrow_index[a])))
            .collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (p, v) in frontier {
                for b in self.quiver.out_arrows(p.target) {
                    let w = self.mul_vec(&unit(self.field, self.arrow_index[b]), &v);
                    if !w.is_empty() {
                        let mut arrows = p.arrows.clone();
                        arrows.push(b);
                        next.push((Path { source: p.source, target: self.quiver.arrows[b].target, arrows }, w));
                    }
                }
                out.push((p, v));
                if out.len() + next.len() > cap {
                    return Err(Error::ExplosionGuard { cap });
                }
            }
            frontier = next;
        }
        Ok(out)
    }

    /// Smallest n with N^n = 0.
    pub fn nilpotency_index(&self) -> usize {
        let mut cur: Vec<SVec> = self.radical_basis().iter().map(|&i| unit(self.field, i)).collect();
        let mut n = 1;
        while !cur.is_empty() {
            let mut e = Echelon::new(self.field);
            for v in &cur {
                for a in 0..self.quiver.num_arrows() {
                    e.insert(&self.mul_vec(&unit(self.field, self.arrow_index[a]), v));
                }
            }
            cur = e.basis();
            n += 1;
        }
        n
    }

    pub fn scalar(&self, n: i64) -> Scalar {
        self.field.from_i64(n)
    }

    /// A quiver isomorphism carrying the relations of `self` into the ideal of `other`, when
    /// both algebras have the same dimension; the two ideals then coincide.
    pub fn presentation_iso(&self, other: &Algebra) -> Option<QuiverIso> {
        if self.dim() != other.dim() {
            return None;
        }
        let mut found = None;
        for_each_isomorphism(&self.quiver, &other.quiver, |iso| {
            let ok = self.relations.iter().all(|r| {
                let moved = Relation { terms: r.terms.iter().map(|(c, p)| (*c, iso.map_path(&other.quiver, p))).collect() };
                other.eval(&moved).is_empty()
            });
            if ok {
                found = Some(iso.clone());
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        found
    }
}

type Built = (Vec<Path>, HashMap<(usize, usize), SVec>);

/// Graded elimination for homogeneous relations.
fn graded(q: &Quiver, rels: &[Relation], field: FieldSpec, cap: usize) -> Result<Built, Error> {
    let mut basis: Vec<Path> = (0..q.num_vertices()).map(|v| q.stationary(v)).collect();
    let mut by_len: Vec<Vec<usize>> = vec![(0..q.num_vertices()).collect()];
    // rewrite[(arrow, n)] = normal form of arrow·b_n.
    let mut rewrite: HashMap<(usize, usize), SVec> = HashMap::new();
    let mut level1 = Vec::new();
    for a in 0..q.num_arrows() {
        basis.push(q.arrow_path(a));
        let i = basis.len() - 1;
        level1.push(i);
        rewrite.insert((a, q.arrows[a].source), unit(field, i));
    }
    by_len.push(level1);
    let apply = |rewrite: &HashMap<(usize, usize), SVec>, arrows: &[usize], v: SVec| -> SVec {
        let mut v = v;
        for &a in arrows {
            let mut acc = BTreeMap::new();
            for (n, c) in &v {
                if let Some(w) = rewrite.get(&(a, *n)) {
                    axpy(&mut acc, c, w);
                }
            }
            v = to_svec(acc);
            if v.is_empty() {
                break;
            }
        }
        v
    };
    let mut len = 2;
    while !by_len[len - 1].is_empty() {
        if len > cap {
            return Err(Error::PossiblyInfiniteDimensional { cap });
        }
        let mut cands: Vec<(usize, usize, Path)> = Vec::new();
        for &n in &by_len[len - 1] {
            for a in q.out_arrows(basis[n].target) {
                let p = q.arrow_path(a).after(&basis[n]).unwrap();
                cands.push((a, n, p));
            }
        }
        cands.sort_by_key(|c| c.2.order_key());
        let col: HashMap<(usize, usize), usize> = cands.iter().enumerate().map(|(i, c)| ((c.0, c.1), i)).collect();
        let mut ech = Echelon::new(field);
        for r in rels {
            let j = r.terms[0].1.len();
            if j > len {
                continue;
            }
            let src = r.terms[0].1.source;
            for &n in &by_len[len - j] {
                if basis[n].target != src {
                    continue;
                }
                let mut acc = BTreeMap::new();
                for (c, p) in &r.terms {
                    let (head, last) = p.arrows.split_at(p.arrows.len() - 1);
                    let v = apply(&rewrite, head, unit(field, n));
                    for (m, x) in v {
                        let k = col[&(last[0], m)];
                        axpy(&mut acc, &field.from_i64(*c), &vec![(k, x)]);
                    }
                }
                ech.insert(&to_svec(acc));
            }
        }
        let mut newidx: HashMap<usize, usize> = HashMap::new();
        let mut level = Vec::new();
        for (k, c) in cands.iter().enumerate() {
            if !ech.is_pivot(k) {
                basis.push(c.2.clone());
                newidx.insert(k, basis.len() - 1);
                level.push(basis.len() - 1);
            }
        }
        for (k, c) in cands.iter().enumerate() {
            let v: SVec = if let Some(&i) = newidx.get(&k) {
                unit(field, i)
            } else {
                ech.reduce(&unit(field, k)).into_iter().map(|(j, x)| (newidx[&j], x)).collect()
            };
            if !v.is_empty() {
                rewrite.insert((c.0, c.1), v);
            }
        }
        by_len.push(level);
        len += 1;
    }
    let mut mult = HashMap::new();
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if basis[j].target != basis[i].source {
                continue;
            }
            let v = if basis[i].is_empty() {
                unit(field, j)
            } else {
                apply(&rewrite, &basis[i].arrows, unit(field, j))
            };
            if !v.is_empty() {
                mult.insert((i, j), v);
            }
        }
    }
    Ok((basis, mult))
}

/// Paths of length < `l`, sorted in degree-then-lex order.
fn paths_below(q: &Quiver, l: usize) -> Result<Vec<Path>, Error> {
    let mut out: Vec<Path> = (0..q.num_vertices()).map(|v| q.stationary(v)).collect();
    let mut frontier: Vec<Path> = if l > 1 { (0..q.num_arrows()).map(|a| q.arrow_path(a)).collect() } else { Vec::new() };
    let mut len = 1;
    while !frontier.is_empty() {
        out.extend(frontier.iter().cloned());
        if out.len() > TRUNCATED_PATH_CAP {
            return Err(Error::ExplosionGuard { cap: TRUNCATED_PATH_CAP });
        }
        len += 1;
        if len >= l {
            break;
        }
        let mut next = Vec::new();
        for p in &frontier {
            for a in q.out_arrows(p.target) {
                next.push(q.arrow_path(a).after(p).unwrap());
            }
        }
        frontier = next;
    }
    out.sort_by_key(|p| p.order_key());
    Ok(out)
}

struct Truncation {
    paths: Vec<Path>,
    col: HashMap<Path, usize>,
    ideal: Echelon,
}

/// The ideal (I + R^l)/R^l inside the span of paths of length < l.
fn truncation(q: &Quiver, rels: &[Relation], field: FieldSpec, l: usize) -> Result<Truncation, Error> {
    let paths = paths_below(q, l)?;
    let col: HashMap<Path, usize> = paths.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let mut ideal = Echelon::new(field);
    let mut queue: Vec<SVec> = Vec::new();
    for r in rels {
        let mut acc = BTreeMap::new();
        for (c, p) in &r.terms {
            if let Some(&k) = col.get(p) {
                axpy(&mut acc, &field.from_i64(*c), &unit(field, k));
            }
        }
        let v = to_svec(acc);
        let red = ideal.reduce(&v);
        if ideal.insert(&v) {
            queue.push(red);
        }
    }
    while let Some(v) = queue.pop() {
        for a in 0..q.num_arrows() {
            let ap = q.arrow_path(a);
            for side in 0..2 {
                let mut acc = BTreeMap::new();
                for (k, c) in &v {
                    let prod = if side == 0 { ap.after(&paths[*k]) } else { paths[*k].after(&ap) };
                    if let Some(p) = prod {
                        if let Some(&kk) = col.get(&p) {
                            axpy(&mut acc, c, &unit(field, kk));
                        }
                    }
                }
                let w = to_svec(acc);
                if w.is_empty() {
                    continue;
                }
                let red = ideal.reduce(&w);
                if !red.is_empty() {
                    ideal.insert(&red);
                    queue.push(red);
                }
            }
        }
    }
    Ok(Truncation { paths, col, ideal })
}

/// Filtered computation for relations of mixed lengths: kQ/(I + R^l) for the first l
/// where the quotient stops growing.
fn truncated(q: &Quiver, rels: &[Relation], field: FieldSpec, cap: usize) -> Result<Built, Error> {
    let mut prev = truncation(q, rels, field, 1)?;
    let mut prev_dim = prev.paths.len() - prev.ideal.rank();
    let mut l = 2;
    loop {
        if l > cap + 1 {
            return Err(Error::PossiblyInfiniteDimensional { cap });
        }
        let t = truncation(q, rels, field, l)?;
        let d = t.paths.len() - t.ideal.rank();
        if d == prev_dim {
            break;
        }
        prev = t;
        prev_dim = d;
        l += 1;
    }
    let t = prev;
    let mut newidx: HashMap<usize, usize> = HashMap::new();
    let mut basis = Vec::new();
    // Stationary paths and arrows first, then the rest in path order.
    let mut order: Vec<usize> = (0..t.paths.len()).filter(|&k| !t.ideal.is_pivot(k)).collect();
    order.sort_by_key(|&k| {
        let p = &t.paths[k];
        match p.len() {
            0 => (0, p.source, Vec::new()),
            1 => (1, p.arrows[0], Vec::new()),
            n => (n, 0, p.order_key().1),
        }
    });
    for k in order {
        newidx.insert(k, basis.len());
        basis.push(t.paths[k].clone());
    }
    let nf = |p: &Path| -> SVec {
        match t.col.get(p) {
            None => Vec::new(),
            Some(&k) => t.ideal.reduce(&unit(field, k)).into_iter().map(|(j, x)| (newidx[&j], x)).collect(),
        }
    };
    let mut mult = HashMap::new();
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if let Some(p) = basis[i].after(&basis[j]) {
                let v = nf(&p);
                if !v.is_empty() {
                    mult.insert((i, j), v);
                }
            }
        }
    }
    Ok((basis, mult))
}
