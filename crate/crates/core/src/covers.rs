//! Bounded pieces of the universal cover of a zero-relation algebra, Euclidean convex
//! subcategories inside them, and critical lines.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::algebra::Algebra;
use crate::biserial::{Letter, WordSystem};
use crate::error::Error;
use crate::quiver::{graph_shape_of, DynkinKind, GraphShape, Quiver};

/// A finite convex piece of the universal cover: the tree of reduced walks from `base` that
/// visit at most `radius` vertices (length below `radius`), with every zero relation that lifts
/// inside it.
#[derive(Clone, Debug, Serialize)]
pub struct TreeSlice {
    pub quiver: Quiver,
    /// Slice vertex to base vertex.
    pub vertex_image: Vec<usize>,
    /// Slice arrow to base arrow.
    pub arrow_image: Vec<usize>,
    /// Lifted zero relations as slice arrows in traversal order.
    pub relations: Vec<Vec<usize>>,
    /// Reduced walk from the base vertex to each slice vertex.
    pub walks: Vec<Vec<Letter>>,
    pub base: usize,
    pub radius: usize,
}

pub fn expand_cover(a: &Algebra, base: usize, radius: usize) -> Result<TreeSlice, Error> {
    if let Some(r) = a.relations.iter().map(|r| r.normalized()).find(|r| r.terms.len() > 1) {
        return Err(Error::NonMonomial(r.render(&a.quiver)));
    }
    if radius == 0 {
        return Err(Error::Usage("the radius must be at least 1".into()));
    }
    let bq = &a.quiver;
    let mut q = Quiver { name: bq.name.as_ref().map(|n| format!("{n}_cover")), ..Quiver::default() };
    let mut vertex_image = Vec::new();
    let mut arrow_image = Vec::new();
    let mut walks: Vec<Vec<Letter>> = Vec::new();
    // lift[(slice vertex, base arrow, leaving?)] = slice arrow
    let mut lift: HashMap<(usize, usize, bool), usize> = HashMap::new();
    let name = |w: &[Letter]| -> String {
        if w.is_empty() {
            return bq.vertices[base].clone();
        }
        let body: Vec<String> = w
            .iter()
            .map(|l| if l.inverse { format!("{}⁻", bq.arrows[l.arrow].name) } else { bq.arrows[l.arrow].name.clone() })
            .collect();
        format!("{}[{}]", bq.vertices[base], body.join(" "))
    };
    q.add_vertex(&name(&[]));
    vertex_image.push(base);
    walks.push(Vec::new());
    let mut frontier = vec![0usize];
    for _ in 1..radius {
        let mut next = Vec::new();
        for &u in &frontier {
            let v = vertex_image[u];
            let last = walks[u].last().copied();
            let mut letters: Vec<Letter> = bq.out_arrows(v).into_iter().map(|x| Letter { arrow: x, inverse: false }).collect();
            letters.extend(bq.in_arrows(v).into_iter().map(|x| Letter { arrow: x, inverse: true }));
            for l in letters {
                if Some(l.inv()) == last {
                    continue;
                }
                let mut w = walks[u].clone();
                w.push(l);
                let nv = q.add_vertex(&name(&w));
                vertex_image.push(l.end(bq));
                walks.push(w);
                let (s, t) = if l.inverse { (nv, u) } else { (u, nv) };
                let ar = q.add_arrow(&format!("{}#{}", bq.arrows[l.arrow].name, q.num_arrows()), s, t);
                arrow_image.push(l.arrow);
                lift.insert((s, l.arrow, true), ar);
                lift.insert((t, l.arrow, false), ar);
                next.push(nv);
            }
        }
        frontier = next;
    }
    let mut relations = Vec::new();
    for r in &a.relations {
        let p = &r.terms[0].1;
        for u in 0..q.num_vertices() {
            if vertex_image[u] != p.source {
                continue;
            }
            let mut cur = u;
            let mut arrows = Vec::new();
            for &x in &p.arrows {
                match lift.get(&(cur, x, true)) {
                    Some(&ar) => {
                        arrows.push(ar);
                        cur = q.arrows[ar].target;
                    }
                    None => break,
                }
            }
            if arrows.len() == p.len() {
                relations.push(arrows);
            }
        }
    }
    relations.sort();
    relations.dedup();
    Ok(TreeSlice { quiver: q, vertex_image, arrow_image, relations, walks, base, radius })
}

impl TreeSlice {
    pub fn num_vertices(&self) -> usize {
        self.quiver.num_vertices()
    }

    fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut nb = vec![Vec::new(); self.num_vertices()];
        for ar in &self.quiver.arrows {
            nb[ar.source].push(ar.target);
            nb[ar.target].push(ar.source);
        }
        nb
    }

    /// Lifted relations whose vertices all lie in `set`.
    pub fn relations_inside(&self, set: &BTreeSet<usize>) -> Vec<&Vec<usize>> {
        self.relations
            .iter()
            .filter(|r| r.iter().all(|&ar| set.contains(&self.quiver.arrows[ar].source) && set.contains(&self.quiver.arrows[ar].target)))
            .collect()
    }

    /// Every directed path between two vertices of `set` stays inside `set`.
    pub fn is_convex(&self, set: &BTreeSet<usize>) -> bool {
        let n = self.num_vertices();
        let out: Vec<Vec<usize>> = (0..n).map(|v| self.quiver.out_arrows(v).iter().map(|&a| self.quiver.arrows[a].target).collect()).collect();
        // Vertices outside the set reachable from it must not reach back.
        let mut reach_out = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        for &v in set {
            for &w in &out[v] {
                if !set.contains(&w) && !reach_out[w] {
                    reach_out[w] = true;
                    stack.push(w);
                }
            }
        }
        while let Some(v) = stack.pop() {
            for &w in &out[v] {
                if set.contains(&w) {
                    return false;
                }
                if !reach_out[w] {
                    reach_out[w] = true;
                    stack.push(w);
                }
            }
        }
        true
    }

    /// Shape of the subquiver induced on `set`.
    pub fn induced_shape(&self, set: &BTreeSet<usize>) -> GraphShape {
        let idx: BTreeMap<usize, usize> = set.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: Vec<(usize, usize)> = self
            .quiver
            .arrows
            .iter()
            .filter_map(|a| Some((*idx.get(&a.source)?, *idx.get(&a.target)?)))
            .collect();
        graph_shape_of(set.len(), &edges).unwrap_or(GraphShape::Other)
    }

    pub fn to_dot(&self) -> String {
        crate::quiver::to_dot(&self.quiver)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexFinding {
    pub vertices: Vec<usize>,
    pub shape: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EuclideanSearch {
    pub findings: Vec<ConvexFinding>,
    /// Set when the result limit stopped the search early.
    pub truncated: bool,
    pub subsets_examined: usize,
}

pub const DEFAULT_SUBSET_CAP: usize = 10;
pub const DEFAULT_RESULT_LIMIT: usize = 10_000;

/// Connected vertex sets of size at most `cap`, each visited once; `keep` must be monotone
/// (a rejected set has only rejected supersets) since rejected sets are not extended.
fn connected_subsets(slice: &TreeSlice, cap: usize, keep: &mut dyn FnMut(&BTreeSet<usize>) -> Visit) -> bool {
    let nb = slice.neighbours();
    fn rec(
        nb: &[Vec<usize>],
        anchor: usize,
        sub: &mut BTreeSet<usize>,
        ext: Vec<usize>,
        cap: usize,
        keep: &mut dyn FnMut(&BTreeSet<usize>) -> Visit,
    ) -> bool {
        match keep(sub) {
            Visit::Stop => return false,
            Visit::Prune => return true,
            Visit::Extend => {}
        }
        if sub.len() == cap {
            return true;
        }
        let mut ext = ext;
        while let Some(w) = ext.pop() {
            let mut new_ext = ext.clone();
            for &u in &nb[w] {
                if u > anchor && !sub.contains(&u) && !new_ext.contains(&u) && !sub.iter().any(|&s| nb[s].contains(&u)) {
                    new_ext.push(u);
                }
            }
            sub.insert(w);
            let go = rec(nb, anchor, sub, new_ext, cap, keep);
            sub.remove(&w);
            if !go {
                return false;
            }
        }
        true
    }
    for v in 0..slice.num_vertices() {
        let mut sub = BTreeSet::from([v]);
        let ext: Vec<usize> = nb[v].iter().copied().filter(|&u| u > v).collect();
        if !rec(&nb, v, &mut sub, ext, cap, keep) {
            return false;
        }
    }
    true
}

enum Visit {
    Extend,
    Prune,
    Stop,
}

/// Relation-free convex subquivers with a Euclidean underlying graph, up to `cap` vertices.
/// Connected vertex sets of a tree are convex, which the result double-checks.
pub fn find_euclidean_convex(slice: &TreeSlice, cap: usize, limit: usize) -> EuclideanSearch {
    let mut findings = Vec::new();
    let mut examined = 0;
    let nb = slice.neighbours();
    let complete = connected_subsets(slice, cap, &mut |set| {
        examined += 1;
        if !slice.relations_inside(set).is_empty() {
            return Visit::Prune;
        }
        let degs: Vec<usize> = set.iter().map(|&v| nb[v].iter().filter(|u| set.contains(u)).count()).collect();
        let branch = degs.iter().filter(|&&d| d >= 3).count();
        let max = degs.iter().copied().max().unwrap_or(0);
        if max >= 5 || branch > 2 || (max == 4 && set.len() > 5) {
            return Visit::Prune;
        }
        let shape = slice.induced_shape(set);
        if shape.is_euclidean() {
            debug_assert!(slice.is_convex(set));
            findings.push(ConvexFinding { vertices: set.iter().copied().collect(), shape: shape.to_string() });
            if findings.len() >= limit {
                return Visit::Stop;
            }
        }
        Visit::Extend
    });
    EuclideanSearch { findings, truncated: !complete, subsets_examined: examined }
}

/// Tits form of the convex subcategory on `set`: Gram matrix of 2q with 2 on the diagonal, −1
/// per arrow and +1 per lifted zero relation between two of its vertices.
pub fn tits_gram(slice: &TreeSlice, set: &BTreeSet<usize>) -> Vec<Vec<i64>> {
    let idx: BTreeMap<usize, usize> = set.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = set.len();
    let mut g = vec![vec![0i64; n]; n];
    for i in 0..n {
        g[i][i] = 2;
    }
    for a in &slice.quiver.arrows {
        if let (Some(&i), Some(&j)) = (idx.get(&a.source), idx.get(&a.target)) {
            g[i][j] -= 1;
            g[j][i] -= 1;
        }
    }
    for r in slice.relations_inside(set) {
        let s = idx[&slice.quiver.arrows[r[0]].source];
        let t = idx[&slice.quiver.arrows[*r.last().unwrap()].target];
        g[s][t] += 1;
        g[t][s] += 1;
    }
    g
}

/// Dynkin or Euclidean type of a unit form given by its Gram matrix, when the form is positive
/// definite or critical (positive semidefinite of corank 1 with a sincere positive radical).
pub fn unit_form_type(g: &[Vec<i64>]) -> Option<GraphShape> {
    let n = g.len();
    let rad = integer_radical(g);
    match rad.len() {
        0 => {
            let roots = count_roots(g)?;
            dynkin_from_roots(n, roots).map(|(k, m)| GraphShape::Dynkin(k, m))
        }
        1 => {
            let h = &rad[0];
            let sign = h.iter().find(|&&x| x != 0).copied()?.signum();
            if h.iter().any(|&x| x * sign <= 0) {
                return None;
            }
            // Dropping a vertex where the radical is ±1 must leave a positive definite form.
            let i = h.iter().position(|&x| x.abs() == 1)?;
            let sub: Vec<Vec<i64>> =
                (0..n).filter(|&r| r != i).map(|r| (0..n).filter(|&c| c != i).map(|c| g[r][c]).collect()).collect();
            if !integer_radical(&sub).is_empty() {
                return None;
            }
            let roots = count_roots(&sub)?;
            let (k, m) = dynkin_from_roots(n - 1, roots)?;
            Some(GraphShape::Euclidean(k, m))
        }
        _ => None,
    }
}

/// Kernel of an integer matrix over Q, each vector scaled to coprime integers.
fn integer_radical(g: &[Vec<i64>]) -> Vec<Vec<i64>> {
    use num_rational::Rational64;
    let n = g.len();
    let mut m: Vec<Vec<Rational64>> = g.iter().map(|r| r.iter().map(|&x| Rational64::from_integer(x)).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| m[r][col] != Rational64::from_integer(0)) else { continue };
        m.swap(row, p);
        let inv = Rational64::from_integer(1) / m[row][col];
        for c in 0..n {
            m[row][c] *= inv;
        }
        for r in 0..n {
            if r != row && m[r][col] != Rational64::from_integer(0) {
                let f = m[r][col];
                for c in 0..n {
                    let d = m[row][c] * f;
                    m[r][c] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational64::from_integer(0); n];
            v[f] = Rational64::from_integer(1);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f];
            }
            let l = v.iter().fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()));
            let ints: Vec<i64> = v.iter().map(|x| (x * Rational64::from_integer(l)).to_integer()).collect();
            let gcd = ints.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
            ints.iter().map(|x| x / gcd.max(1)).collect()
        })
        .collect()
}

/// Number of roots (q(x) = 1) of a positive definite unit form, found as the orbit of the unit
/// vectors under the simple reflections. None if the orbit does not close within a safe bound.
fn count_roots(g: &[Vec<i64>]) -> Option<usize> {
    let n = g.len();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut stack: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone());
        stack.push(e);
    }
    while let Some(x) = stack.pop() {
        for i in 0..n {
            let c: i64 = (0..n).map(|j| g[i][j] * x[j]).sum();
            if c == 0 {
                continue;
            }
            let mut y = x.clone();
            y[i] -= c;
            if seen.insert(y.clone()) {
                if seen.len() > 1000 {
                    return None;
                }
                stack.push(y);
            }
        }
    }
    Some(seen.len())
}

fn dynkin_from_roots(n: usize, roots: usize) -> Option<(DynkinKind, usize)> {
    if roots == n * (n + 1) {
        return Some((DynkinKind::A, n));
    }
    if n >= 4 && roots == 2 * n * (n - 1) {
        return Some((DynkinKind::D, n));
    }
    match (n, roots) {
        (6, 72) | (7, 126) | (8, 240) => Some((DynkinKind::E, n)),
        _ => None,
    }
}

/// Convex subcategories whose Tits form is critical of Euclidean type, with relations allowed.
/// A necessary condition for a tame concealed piece, where the quiver search needs a relation-free one.
pub fn find_concealed_convex(slice: &TreeSlice, cap: usize, limit: usize) -> EuclideanSearch {
    let mut findings = Vec::new();
    let mut examined = 0;
    let complete = connected_subsets(slice, cap, &mut |set| {
        examined += 1;
        if set.len() < 2 {
            return Visit::Extend;
        }
        if let Some(shape @ GraphShape::Euclidean(..)) = unit_form_type(&tits_gram(slice, set)) {
            findings.push(ConvexFinding { vertices: set.iter().copied().collect(), shape: shape.to_string() });
            if findings.len() >= limit {
                return Visit::Stop;
            }
        }
        Visit::Extend
    });
    EuclideanSearch { findings, truncated: !complete, subsets_examined: examined }
}

/// A relation-free walk x₁, …, x_e given by its base images and arrow directions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Line {
    /// Base vertices of x₁, …, x_e.
    pub points: Vec<usize>,
    /// letters[i] joins x_{i+1} and x_{i+2}.
    pub letters: Vec<Letter>,
}

impl Line {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// x₁ is a source (or sink) of the line when its only arrow leaves (or enters) it.
    fn end_kind(&self, first: bool) -> bool {
        let l = if first { self.letters[0] } else { self.letters[self.letters.len() - 1] };
        // Direct letter: arrow from the earlier point to the later point.
        if first {
            !l.inverse
        } else {
            l.inverse
        }
    }

    /// Same base point at both ends, both ends sources or both sinks, and different second and
    /// penultimate base points.
    pub fn is_critical(&self) -> bool {
        let e = self.points.len();
        e >= 4
            && self.points[0] == self.points[e - 1]
            && self.end_kind(true) == self.end_kind(false)
            && self.points[1] != self.points[e - 2]
    }

    fn sub(&self, i: usize, j: usize) -> Line {
        Line { points: self.points[i..=j].to_vec(), letters: self.letters[i..j].to_vec() }
    }

    /// Shortest critical subline, leftmost first.
    pub fn critical_subline(&self) -> Option<Line> {
        let e = self.points.len();
        for len in 4..=e {
            for i in 0..=e - len {
                let s = self.sub(i, i + len - 1);
                if s.is_critical() {
                    return Some(s);
                }
            }
        }
        None
    }

    pub fn render(&self, q: &Quiver) -> String {
        let mut s = q.vertices[self.points[0]].clone();
        for (k, l) in self.letters.iter().enumerate() {
            let arrow = if l.inverse { "<-" } else { "->" };
            s.push_str(&format!(" {arrow} {}", q.vertices[self.points[k + 1]]));
        }
        s
    }
}

fn line_of(q: &Quiver, start: usize, letters: &[Letter]) -> Line {
    let mut points = vec![start];
    for l in letters {
        points.push(l.end(q));
    }
    Line { points, letters: letters.to_vec() }
}

/// Shortest critical line in the slice: the tree path between two lifts of one base point.
pub fn find_critical_line(slice: &TreeSlice) -> Option<(Vec<usize>, Line)> {
    let n = slice.num_vertices();
    let bq_points = &slice.vertex_image;
    let mut best: Option<(Vec<usize>, Line)> = None;
    for u in 0..n {
        for v in u + 1..n {
            if bq_points[u] != bq_points[v] {
                continue;
            }
            let path = slice_path(slice, u, v);
            if best.as_ref().is_some_and(|(p, _)| p.len() <= path.len()) {
                continue;
            }
            let set: BTreeSet<usize> = path.iter().copied().collect();
            if !slice.relations_inside(&set).is_empty() {
                continue;
            }
            let letters: Vec<Letter> = path
                .windows(2)
                .map(|w| {
                    let ar = slice
                        .quiver
                        .arrows
                        .iter()
                        .position(|a| (a.source == w[0] && a.target == w[1]) || (a.source == w[1] && a.target == w[0]))
                        .unwrap();
                    Letter { arrow: slice.arrow_image[ar], inverse: slice.quiver.arrows[ar].source != w[0] }
                })
                .collect();
            let line = Line { points: path.iter().map(|&x| bq_points[x]).collect(), letters };
            if line.is_critical() {
                best = Some((path, line));
            }
        }
    }
    best
}

/// Tree path from `u` to `v` through their common walk prefix.
fn slice_path(slice: &TreeSlice, u: usize, v: usize) -> Vec<usize> {
    let (wu, wv) = (&slice.walks[u], &slice.walks[v]);
    let common = wu.iter().zip(wv).take_while(|(a, b)| a == b).count();
    let index: HashMap<&[Letter], usize> = slice.walks.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
    let mut path = Vec::new();
    for k in (common..=wu.len()).rev() {
        path.push(index[&wu[..k]]);
    }
    for k in common + 1..=wv.len() {
        path.push(index[&wv[..k]]);
    }
    path
}

/// All relation-free walks of the base algebra with exactly `edges` letters, as lines.
pub fn lines_of_length(a: &Algebra, edges: usize, cap: usize) -> Result<Vec<Line>, Error> {
    let ws = WordSystem::monomial(a)?;
    let q = &a.quiver;
    let mut out = Vec::new();
    for v in 0..q.num_vertices() {
        let mut w = Vec::new();
        ws.dfs(&mut w, v, edges, &mut |w, _| {
            if w.len() == edges && out.len() < cap {
                out.push(line_of(q, v, w));
            }
        });
        if out.len() >= cap {
            return Err(Error::Cap { what: "lines", count: out.len(), cap });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::quiver::parse_quiver_file;

    fn build(t: &str) -> Algebra {
        Algebra::build(&parse_quiver_file(t).unwrap(), FieldSpec::Rationals).unwrap()
    }

    #[test]
    fn loop_with_square_zero() {
        let a = build("vertex x\narrow r : x -> x\nrelation r.r\n");
        assert_eq!(expand_cover(&a, 0, 1).unwrap().num_vertices(), 1);
        let s = expand_cover(&a, 0, 2).unwrap();
        assert_eq!(s.num_vertices(), 3);
        assert_eq!(s.relations.len(), 1);
        let s2 = expand_cover(&a, 0, 3).unwrap();
        assert_eq!(s2.num_vertices(), 5);
        assert_eq!(s2.relations.len(), 3);
        assert!(find_euclidean_convex(&s2, 10, 100).findings.is_empty());
    }

    #[test]
    fn acyclic_slices_stabilise() {
        let a = build("vertex a b c\narrow x : a -> b\narrow y : b -> c\n");
        let s3 = expand_cover(&a, 1, 2).unwrap();
        let s6 = expand_cover(&a, 1, 6).unwrap();
        assert_eq!(s3.num_vertices(), 3);
        assert_eq!(s6.num_vertices(), 3);
        assert!(find_critical_line(&s6).is_none());
    }

    #[test]
    fn non_monomial_rejected() {
        let a = build("vertex a b c d\narrow x : a -> b\narrow y : b -> d\narrow u : a -> c\narrow w : c -> d\nrelation y.x - w.u\n");
        assert!(matches!(expand_cover(&a, 0, 2), Err(Error::NonMonomial(_))));
    }

    #[test]
    fn unit_forms() {
        // D̃_4 star.
        let mut g = vec![vec![0i64; 5]; 5];
        for i in 0..5 {
            g[i][i] = 2;
        }
        for i in 1..5 {
            g[0][i] = -1;
            g[i][0] = -1;
        }
        assert_eq!(unit_form_type(&g), Some(GraphShape::Euclidean(DynkinKind::D, 4)));
        let a3 = vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]];
        assert_eq!(unit_form_type(&a3), Some(GraphShape::Dynkin(DynkinKind::A, 3)));
    }

    #[test]
    fn kronecker_cover_has_no_critical_line() {
        // Only two base points, so the second and penultimate images always agree.
        let a = build("vertex a z\narrow x : a -> z\narrow y : a -> z\n");
        let s = expand_cover(&a, 0, 4).unwrap();
        assert!(find_critical_line(&s).is_none());
        let found = find_euclidean_convex(&s, 10, 100);
        assert!(found.findings.is_empty());
    }
}
