//! Quivers, paths, the text file format, isomorphisms and graph shapes.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// Finite directed multigraph with named vertices and arrows.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub name: Option<String>,
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new() -> Quiver {
        Quiver::default()
    }

    pub fn add_vertex(&mut self, name: &str) -> usize {
        self.vertices.push(name.to_string());
        self.vertices.len() - 1
    }

    pub fn add_arrow(&mut self, name: &str, source: usize, target: usize) -> usize {
        self.arrows.push(Arrow { name: name.to_string(), source, target });
        self.arrows.len() - 1
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn out_arrows(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&i| self.arrows[i].source == v).collect()
    }

    pub fn in_arrows(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&i| self.arrows[i].target == v).collect()
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.arrows.iter().all(|a| a.target != v)
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.arrows.iter().all(|a| a.source != v)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let edges: Vec<(usize, usize)> = self.arrows.iter().map(|a| (a.source, a.target)).collect();
        connected(n, &edges)
    }

    pub fn stationary(&self, v: usize) -> Path {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    pub fn arrow_path(&self, a: usize) -> Path {
        let ar = &self.arrows[a];
        Path { source: ar.source, target: ar.target, arrows: vec![a] }
    }

    /// Path from arrows listed in traversal order (first applied first).
    pub fn path(&self, arrows: &[usize]) -> Option<Path> {
        let first = *arrows.first()?;
        for w in arrows.windows(2) {
            if self.arrows[w[0]].target != self.arrows[w[1]].source {
                return None;
            }
        }
        Some(Path {
            source: self.arrows[first].source,
            target: self.arrows[*arrows.last().unwrap()].target,
            arrows: arrows.to_vec(),
        })
    }

    /// Path from arrow names written in composition order, e.g. `["beta", "alpha"]` for βα.
    pub fn path_by_names(&self, names: &[&str]) -> Option<Path> {
        let mut ids = Vec::new();
        for n in names.iter().rev() {
            ids.push(self.arrow(n)?);
        }
        self.path(&ids)
    }

    /// Composition-order rendering: `f.g` means g then f; stationary paths render as `e_x`.
    pub fn path_name(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            return format!("e_{}", self.vertices[p.source]);
        }
        p.arrows.iter().rev().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join(".")
    }
}

/// A path; `arrows` is stored in traversal order (the first arrow applied comes first).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self` after `other` (other is applied first).
    pub fn after(&self, other: &Path) -> Option<Path> {
        if other.target != self.source {
            return None;
        }
        let mut arrows = other.arrows.clone();
        arrows.extend_from_slice(&self.arrows);
        Some(Path { source: other.source, target: self.target, arrows })
    }

    /// Degree-then-lexicographic order key; lexicographic on the composition-order word.
    pub fn order_key(&self) -> (usize, Vec<usize>, usize, usize) {
        (self.arrows.len(), self.arrows.iter().rev().copied().collect(), self.source, self.target)
    }
}

/// A relation: an integer combination of parallel paths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Relation {
    pub terms: Vec<(i64, Path)>,
}

impl Relation {
    pub fn monomial(p: Path) -> Relation {
        Relation { terms: vec![(1, p)] }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Merges equal paths and drops zero coefficients.
    pub fn normalized(&self) -> Relation {
        let mut m: BTreeMap<Path, i64> = BTreeMap::new();
        for (c, p) in &self.terms {
            *m.entry(p.clone()).or_insert(0) += c;
        }
        Relation { terms: m.into_iter().filter(|(_, c)| *c != 0).map(|(p, c)| (c, p)).collect() }
    }

    pub fn render(&self, q: &Quiver) -> String {
        let mut s = String::new();
        for (i, (c, p)) in self.terms.iter().enumerate() {
            let name = q.path_name(p);
            let mag = c.unsigned_abs();
            let body = if mag == 1 { name } else { format!("{mag}*{name}") };
            if i == 0 {
                if *c < 0 {
                    s.push('-');
                }
                s.push_str(&body);
            } else {
                s.push_str(if *c < 0 { " - " } else { " + " });
                s.push_str(&body);
            }
        }
        s
    }
}

/// A quiver together with relation expressions, as read from or written to a file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '⁺' || c == '⁻'
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Colon,
    ArrowTo,
    Dot,
    Star,
    Plus,
    Minus,
}

fn lex(line: &str, lineno: usize) -> Result<Vec<(Tok, usize)>, Error> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, msg: String| Error::Syntax { line: lineno, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        match c {
            ':' => {
                out.push((Tok::Colon, col));
                i += 1;
            }
            '.' => {
                out.push((Tok::Dot, col));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, col));
                i += 1;
            }
            '+' => {
                out.push((Tok::Plus, col));
                i += 1;
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    out.push((Tok::ArrowTo, col));
                    i += 2;
                } else {
                    out.push((Tok::Minus, col));
                    i += 1;
                }
            }
            _ if is_ident_char(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                if word.chars().all(|c| c.is_ascii_digit()) && chars.get(i) == Some(&'*') {
                    let n = word.parse::<i64>().map_err(|_| err(col, "integer overflow".into()))?;
                    out.push((Tok::Int(n), col));
                } else {
                    out.push((Tok::Ident(word), col));
                }
            }
            _ => return Err(err(col, format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

struct PendingArrow {
    line: usize,
    name: String,
    src: String,
    tgt: String,
}

struct PendingRelation {
    line: usize,
    terms: Vec<(i64, Vec<(String, usize)>)>,
}

/// Parses the line-oriented quiver format.
pub fn parse_quiver_file(text: &str) -> Result<Presentation, Error> {
    let mut name = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<PendingArrow> = Vec::new();
    let mut rels: Vec<PendingRelation> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let toks = lex(raw, lineno)?;
        if toks.is_empty() {
            continue;
        }
        let err = |col: usize, msg: &str| Error::Syntax { line: lineno, col, msg: msg.to_string() };
        let end_col = raw.chars().count() + 1;
        let kw = match &toks[0].0 {
            Tok::Ident(s) => s.as_str(),
            _ => return Err(err(toks[0].1, "expected a keyword")),
        };
        match kw {
            "quiver" => match &toks[..] {
                [_, (Tok::Ident(n), _)] => name = Some(n.clone()),
                [_] => return Err(err(end_col, "expected quiver name")),
                [_, (_, c), ..] => return Err(err(*c, "expected a single quiver name")),
                _ => unreachable!(),
            },
            "vertex" => {
                if toks.len() < 2 {
                    return Err(err(end_col, "expected vertex name"));
                }
                for (t, c) in &toks[1..] {
                    match t {
                        Tok::Ident(v) => {
                            if vertices.contains(v) {
                                return Err(Error::DuplicateName { line: lineno, kind: "vertex", name: v.clone() });
                            }
                            vertices.push(v.clone());
                        }
                        _ => return Err(err(*c, "expected vertex name")),
                    }
                }
            }
            "arrow" => match &toks[..] {
                [_, (Tok::Ident(n), _), (Tok::Colon, _), (Tok::Ident(s), _), (Tok::ArrowTo, _), (Tok::Ident(t), _)] => {
                    if arrows.iter().any(|a| &a.name == n) {
                        return Err(Error::DuplicateName { line: lineno, kind: "arrow", name: n.clone() });
                    }
                    arrows.push(PendingArrow { line: lineno, name: n.clone(), src: s.clone(), tgt: t.clone() });
                }
                _ => {
                    let expect = ["arrow", "name", ":", "source", "->", "target"];
                    let shape_ok = |i: usize, t: &Tok| match i {
                        1 | 3 | 5 => matches!(t, Tok::Ident(_)),
                        2 => *t == Tok::Colon,
                        4 => *t == Tok::ArrowTo,
                        _ => true,
                    };
                    for (i, (t, c)) in toks.iter().enumerate() {
                        if i >= expect.len() {
                            return Err(err(*c, "unexpected trailing token"));
                        }
                        if !shape_ok(i, t) {
                            return Err(err(*c, &format!("expected {}", expect[i])));
                        }
                    }
                    return Err(err(end_col, &format!("expected {}", expect[toks.len()])));
                }
            },
            "relation" => rels.push(parse_relation_tokens(&toks[1..], lineno, end_col)?),
            _ => return Err(err(toks[0].1, &format!("unknown keyword `{kw}`"))),
        }
    }
    let mut q = Quiver { name, vertices, arrows: Vec::new() };
    for a in &arrows {
        let s = q.vertex(&a.src).ok_or_else(|| Error::DanglingEndpoint {
            line: a.line,
            arrow: a.name.clone(),
            vertex: a.src.clone(),
        })?;
        let t = q.vertex(&a.tgt).ok_or_else(|| Error::DanglingEndpoint {
            line: a.line,
            arrow: a.name.clone(),
            vertex: a.tgt.clone(),
        })?;
        q.add_arrow(&a.name, s, t);
    }
    let mut relations = Vec::new();
    for r in rels {
        let mut terms = Vec::new();
        for (c, names) in r.terms {
            let mut ids = Vec::new();
            for (n, col) in names.iter().rev() {
                let id = q.arrow(n).ok_or_else(|| Error::Syntax {
                    line: r.line,
                    col: *col,
                    msg: format!("unknown arrow `{n}`"),
                })?;
                ids.push(id);
            }
            let p = q.path(&ids).ok_or_else(|| Error::Syntax {
                line: r.line,
                col: names[0].1,
                msg: "arrows in term are not composable".into(),
            })?;
            terms.push((c, p));
        }
        relations.push(Relation { terms });
    }
    Ok(Presentation { quiver: q, relations })
}

fn parse_relation_tokens(toks: &[(Tok, usize)], line: usize, end_col: usize) -> Result<PendingRelation, Error> {
    let err = |col: usize, msg: &str| Error::Syntax { line, col, msg: msg.to_string() };
    let mut terms = Vec::new();
    let mut i = 0;
    let mut first = true;
    while i < toks.len() || first {
        let mut sign = 1i64;
        match toks.get(i) {
            Some((Tok::Plus, _)) => {
                i += 1;
            }
            Some((Tok::Minus, _)) => {
                sign = -1;
                i += 1;
            }
            Some((_, c)) if !first => return Err(err(*c, "expected `+` or `-`")),
            _ => {}
        }
        first = false;
        let mut coef = 1i64;
        if let Some((Tok::Int(n), _)) = toks.get(i) {
            coef = *n;
            match toks.get(i + 1) {
                Some((Tok::Star, _)) => i += 2,
                _ => return Err(err(toks[i].1, "expected `*` after coefficient")),
            }
        }
        let mut names = Vec::new();
        loop {
            match toks.get(i) {
                Some((Tok::Ident(n), c)) => {
                    names.push((n.clone(), *c));
                    i += 1;
                }
                Some((_, c)) => return Err(err(*c, "expected arrow name")),
                None => return Err(err(end_col, "expected arrow name")),
            }
            if let Some((Tok::Dot, _)) = toks.get(i) {
                i += 1;
            } else {
                break;
            }
        }
        terms.push((sign * coef, names));
    }
    Ok(PendingRelation { line, terms })
}

/// Writes a presentation in the file format; `parse_quiver_file` inverts it.
pub fn emit_quiver_file(p: &Presentation) -> String {
    let q = &p.quiver;
    let mut s = String::new();
    if let Some(n) = &q.name {
        s.push_str(&format!("quiver {n}\n"));
    }
    for v in &q.vertices {
        s.push_str(&format!("vertex {v}\n"));
    }
    for a in &q.arrows {
        s.push_str(&format!("arrow {} : {} -> {}\n", a.name, q.vertices[a.source], q.vertices[a.target]));
    }
    for r in &p.relations {
        s.push_str(&format!("relation {}\n", r.render(q)));
    }
    s
}

/// DOT rendering of a quiver.
pub fn to_dot(q: &Quiver) -> String {
    let mut s = format!("digraph \"{}\" {{\n", q.name.clone().unwrap_or_else(|| "Q".into()));
    for v in &q.vertices {
        s.push_str(&format!("  \"{v}\";\n"));
    }
    for a in &q.arrows {
        s.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            q.vertices[a.source], q.vertices[a.target], a.name
        ));
    }
    s.push_str("}\n");
    s
}

/// An incidence-preserving bijection between two quivers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverIso {
    pub vertex_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

impl QuiverIso {
    pub fn inverse(&self) -> QuiverIso {
        let mut v = vec![0; self.vertex_map.len()];
        for (i, &j) in self.vertex_map.iter().enumerate() {
            v[j] = i;
        }
        let mut a = vec![0; self.arrow_map.len()];
        for (i, &j) in self.arrow_map.iter().enumerate() {
            a[j] = i;
        }
        QuiverIso { vertex_map: v, arrow_map: a }
    }

    pub fn map_path(&self, q2: &Quiver, p: &Path) -> Path {
        if p.arrows.is_empty() {
            let v = self.vertex_map[p.source];
            return q2.stationary(v);
        }
        let ids: Vec<usize> = p.arrows.iter().map(|&a| self.arrow_map[a]).collect();
        q2.path(&ids).expect("isomorphism maps paths to paths")
    }
}

/// Stable colouring of the vertices of both quivers by iterated degree refinement.
fn refine_colours(q1: &Quiver, q2: &Quiver) -> (Vec<usize>, Vec<usize>) {
    let n1 = q1.num_vertices();
    let all: Vec<(usize, usize)> = q1
        .arrows
        .iter()
        .map(|a| (a.source, a.target))
        .chain(q2.arrows.iter().map(|a| (a.source + n1, a.target + n1)))
        .collect();
    let n = n1 + q2.num_vertices();
    let mut colour = vec![0usize; n];
    let mut classes = 1;
    loop {
        let mut sigs: Vec<(usize, Vec<(u8, usize)>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut s = Vec::new();
            for &(a, b) in &all {
                if a == v && b == v {
                    s.push((0, colour[v]));
                } else if a == v {
                    s.push((1, colour[b]));
                } else if b == v {
                    s.push((2, colour[a]));
                }
            }
            s.sort();
            sigs.push((colour[v], s));
        }
        let mut uniq = sigs.clone();
        uniq.sort();
        uniq.dedup();
        let new: Vec<usize> = sigs.iter().map(|s| uniq.binary_search(s).unwrap()).collect();
        let count = uniq.len();
        colour = new;
        if count == classes {
            break;
        }
        classes = count;
    }
    (colour[..n1].to_vec(), colour[n1..].to_vec())
}

fn arrow_buckets(q: &Quiver) -> HashMap<(usize, usize), Vec<usize>> {
    let mut m: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, a) in q.arrows.iter().enumerate() {
        m.entry((a.source, a.target)).or_default().push(i);
    }
    m
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Visits every isomorphism from `q1` to `q2` in a deterministic order until `f` breaks.
pub fn for_each_isomorphism<F>(q1: &Quiver, q2: &Quiver, mut f: F)
where
    F: FnMut(&QuiverIso) -> ControlFlow<()>,
{
    if q1.num_vertices() != q2.num_vertices() || q1.num_arrows() != q2.num_arrows() {
        return;
    }
    let (c1, c2) = refine_colours(q1, q2);
    let mut h1 = c1.clone();
    let mut h2 = c2.clone();
    h1.sort();
    h2.sort();
    if h1 != h2 {
        return;
    }
    let n = q1.num_vertices();
    let mut count1 = vec![vec![0usize; n]; n];
    for a in &q1.arrows {
        count1[a.source][a.target] += 1;
    }
    let mut count2 = vec![vec![0usize; n]; n];
    for a in &q2.arrows {
        count2[a.source][a.target] += 1;
    }
    // Vertices ordered by colour-class size, then index.
    let mut order: Vec<usize> = (0..n).collect();
    let class_size = |c: usize| c1.iter().filter(|&&x| x == c).count();
    order.sort_by_key(|&v| (class_size(c1[v]), v));
    let b1 = arrow_buckets(q1);
    let b2 = arrow_buckets(q2);
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn emit_arrow_maps<F>(
        keys: &[(usize, usize)],
        k: usize,
        b1: &HashMap<(usize, usize), Vec<usize>>,
        b2: &HashMap<(usize, usize), Vec<usize>>,
        vmap: &[usize],
        amap: &mut Vec<usize>,
        f: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&QuiverIso) -> ControlFlow<()>,
    {
        if k == keys.len() {
            return f(&QuiverIso { vertex_map: vmap.to_vec(), arrow_map: amap.clone() });
        }
        let (s, t) = keys[k];
        let src = &b1[&(s, t)];
        let dst = &b2[&(vmap[s], vmap[t])];
        let mut perm: Vec<usize> = (0..dst.len()).collect();
        loop {
            for (i, &a) in src.iter().enumerate() {
                amap[a] = dst[perm[i]];
            }
            emit_arrow_maps(keys, k + 1, b1, b2, vmap, amap, f)?;
            if !next_permutation(&mut perm) {
                break;
            }
        }
        ControlFlow::Continue(())
    }

    #[allow(clippy::too_many_arguments)]
    fn search<F>(
        depth: usize,
        order: &[usize],
        c1: &[usize],
        c2: &[usize],
        count1: &[Vec<usize>],
        count2: &[Vec<usize>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        b1: &HashMap<(usize, usize), Vec<usize>>,
        b2: &HashMap<(usize, usize), Vec<usize>>,
        narrows: usize,
        f: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&QuiverIso) -> ControlFlow<()>,
    {
        if depth == order.len() {
            let mut keys: Vec<(usize, usize)> = b1.keys().copied().collect();
            keys.sort();
            let mut amap = vec![0; narrows];
            return emit_arrow_maps(&keys, 0, b1, b2, map, &mut amap, f);
        }
        let v = order[depth];
        for w in 0..c2.len() {
            if used[w] || c2[w] != c1[v] || count1[v][v] != count2[w][w] {
                continue;
            }
            let ok = order[..depth].iter().all(|&u| {
                count1[u][v] == count2[map[u]][w] && count1[v][u] == count2[w][map[u]]
            });
            if !ok {
                continue;
            }
            map[v] = w;
            used[w] = true;
            let r = search(depth + 1, order, c1, c2, count1, count2, map, used, b1, b2, narrows, f);
            used[w] = false;
            map[v] = usize::MAX;
            r?;
        }
        ControlFlow::Continue(())
    }

    let _ = search(
        0,
        &order,
        &c1,
        &c2,
        &count1,
        &count2,
        &mut map,
        &mut used,
        &b1,
        &b2,
        q1.num_arrows(),
        &mut f,
    );
}

/// All isomorphisms from `q1` to `q2`; empty when the quivers are not isomorphic.
pub fn quiver_isomorphisms(q1: &Quiver, q2: &Quiver) -> Vec<QuiverIso> {
    let mut out = Vec::new();
    for_each_isomorphism(q1, q2, |iso| {
        out.push(iso.clone());
        ControlFlow::Continue(())
    });
    out
}

pub fn are_isomorphic(q1: &Quiver, q2: &Quiver) -> bool {
    let mut found = false;
    for_each_isomorphism(q1, q2, |_| {
        found = true;
        ControlFlow::Break(())
    });
    found
}

/// Bipartite quiver with vertices x⁺ (first) and x⁻ (second) and an arrow x⁺ → y⁻ per arrow x → y.
pub fn separated_quiver(q: &Quiver) -> Quiver {
    let n = q.num_vertices();
    let mut s = Quiver::new();
    s.name = q.name.as_ref().map(|n| format!("{n}_separated"));
    for v in &q.vertices {
        s.add_vertex(&format!("{v}⁺"));
    }
    for v in &q.vertices {
        s.add_vertex(&format!("{v}⁻"));
    }
    for a in &q.arrows {
        s.add_arrow(&a.name, a.source, a.target + n);
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DynkinKind {
    A,
    D,
    E,
}

/// Underlying-graph classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphShape {
    Dynkin(DynkinKind, usize),
    Euclidean(DynkinKind, usize),
    Other,
}

impl GraphShape {
    pub fn is_euclidean(&self) -> bool {
        matches!(self, GraphShape::Euclidean(..))
    }
}

impl fmt::Display for GraphShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphShape::Dynkin(k, n) => write!(f, "{k:?}_{n}"),
            GraphShape::Euclidean(DynkinKind::A, n) => write!(f, "Ã_{n}"),
            GraphShape::Euclidean(DynkinKind::D, n) => write!(f, "D̃_{n}"),
            GraphShape::Euclidean(DynkinKind::E, n) => write!(f, "Ẽ_{n}"),
            GraphShape::Other => write!(f, "Other"),
        }
    }
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for &(a, b) in edges {
        let ra = find(&mut parent, a);
        let rb = find(&mut parent, b);
        parent[ra] = rb;
    }
    let r0 = find(&mut parent, 0);
    (0..n).all(|v| find(&mut parent, v) == r0)
}

/// Shape of the underlying undirected graph of a connected quiver.
pub fn graph_shape(q: &Quiver) -> Result<GraphShape, Error> {
    let edges: Vec<(usize, usize)> = q.arrows.iter().map(|a| (a.source, a.target)).collect();
    graph_shape_of(q.num_vertices(), &edges)
}

/// Shape of a connected undirected multigraph given by an edge list.
pub fn graph_shape_of(n: usize, edges: &[(usize, usize)]) -> Result<GraphShape, Error> {
    if n == 0 || !connected(n, edges) {
        return Err(Error::Disconnected);
    }
    let m = edges.len();
    let mut deg = vec![0usize; n];
    for &(a, b) in edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    let has_loop = edges.iter().any(|(a, b)| a == b);
    let mut pairs: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    pairs.sort();
    let multi = pairs.windows(2).any(|w| w[0] == w[1]);
    if has_loop {
        return Ok(if n == 1 && m == 1 { GraphShape::Euclidean(DynkinKind::A, 0) } else { GraphShape::Other });
    }
    if multi {
        return Ok(if n == 2 && m == 2 { GraphShape::Euclidean(DynkinKind::A, 1) } else { GraphShape::Other });
    }
    if m == n {
        return Ok(if deg.iter().all(|&d| d == 2) {
            GraphShape::Euclidean(DynkinKind::A, n - 1)
        } else {
            GraphShape::Other
        });
    }
    if m != n - 1 {
        return Ok(GraphShape::Other);
    }
    // Trees from here on.
    if deg.iter().any(|&d| d > 4) {
        return Ok(GraphShape::Other);
    }
    let branch: Vec<usize> = (0..n).filter(|&v| deg[v] >= 3).collect();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    // Length of each arm leaving a branch vertex, counted in vertices up to a leaf or another branch.
    let arm = |start: usize, from: usize| -> (usize, bool) {
        let mut prev = from;
        let mut cur = start;
        let mut len = 1;
        loop {
            if deg[cur] >= 3 {
                return (len, false);
            }
            if deg[cur] == 1 {
                return (len, true);
            }
            let next = *adj[cur].iter().find(|&&x| x != prev).unwrap();
            prev = cur;
            cur = next;
            len += 1;
        }
    };
    match branch.len() {
        0 => Ok(GraphShape::Dynkin(DynkinKind::A, n)),
        1 => {
            let c = branch[0];
            let mut arms: Vec<usize> = adj[c].iter().map(|&s| arm(s, c).0).collect();
            arms.sort();
            Ok(match arms.as_slice() {
                [1, 1, 1, 1] => GraphShape::Euclidean(DynkinKind::D, 4),
                [_, _, _, _] => GraphShape::Other,
                [1, 1, _] => GraphShape::Dynkin(DynkinKind::D, n),
                [1, 2, 2] => GraphShape::Dynkin(DynkinKind::E, 6),
                [1, 2, 3] => GraphShape::Dynkin(DynkinKind::E, 7),
                [1, 2, 4] => GraphShape::Dynkin(DynkinKind::E, 8),
                [2, 2, 2] => GraphShape::Euclidean(DynkinKind::E, 6),
                [1, 3, 3] => GraphShape::Euclidean(DynkinKind::E, 7),
                [1, 2, 5] => GraphShape::Euclidean(DynkinKind::E, 8),
                _ => GraphShape::Other,
            })
        }
        2 => {
            let ok = branch.iter().all(|&c| {
                deg[c] == 3 && {
                    let leaves = adj[c].iter().filter(|&&s| arm(s, c) == (1, true)).count();
                    leaves == 2
                }
            });
            Ok(if ok { GraphShape::Euclidean(DynkinKind::D, n - 1) } else { GraphShape::Other })
        }
        _ => Ok(GraphShape::Other),
    }
}
