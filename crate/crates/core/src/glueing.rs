//! Glueing a source and a sink into a node, separating a node, point-identification
//! quotients and the census of proper glueings.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Algebra;
use crate::error::Error;
use crate::lattice::is_node;
use crate::quiver::{Path, Presentation, Quiver, Relation};

fn fresh_name(q: &Quiver, want: &str, skip: &[usize]) -> String {
    let taken = |n: &str| q.vertices.iter().enumerate().any(|(i, v)| v == n && !skip.contains(&i));
    let mut name = want.to_string();
    while taken(&name) {
        name.push('\'');
    }
    name
}

/// Identifies the source `a` and the sink `z` into one vertex named `name` (placed where `a`
/// was) and adds every length-2 path through it as a zero relation.
pub fn glue_presentation(p: &Presentation, a: usize, z: usize, name: &str) -> Result<Presentation, Error> {
    let q = &p.quiver;
    if a == z {
        return Err(Error::SameVertex);
    }
    if !q.is_source(a) {
        return Err(Error::NotSource(q.vertices[a].clone()));
    }
    if !q.is_sink(z) {
        return Err(Error::NotSink(q.vertices[z].clone()));
    }
    let name = fresh_name(q, name, &[a, z]);
    let mut map = vec![0usize; q.num_vertices()];
    let mut nq = Quiver { name: q.name.as_ref().map(|n| format!("{n}_glued")), ..Quiver::default() };
    for v in 0..q.num_vertices() {
        if v == z {
            continue;
        }
        map[v] = nq.add_vertex(if v == a { &name } else { &q.vertices[v] });
    }
    map[z] = map[a];
    for ar in &q.arrows {
        nq.add_arrow(&ar.name, map[ar.source], map[ar.target]);
    }
    let x = map[a];
    let move_path = |pp: &Path| Path { source: map[pp.source], target: map[pp.target], arrows: pp.arrows.clone() };
    let mut relations: Vec<Relation> = p
        .relations
        .iter()
        .map(|r| Relation { terms: r.terms.iter().map(|(c, pp)| (*c, move_path(pp))).collect() })
        .collect();
    for al in nq.in_arrows(x) {
        for be in nq.out_arrows(x) {
            relations.push(Relation::monomial(nq.path(&[al, be]).unwrap()));
        }
    }
    Ok(Presentation { quiver: nq, relations })
}

pub fn glue(alg: &Algebra, a: usize, z: usize) -> Result<Algebra, Error> {
    let p = glue_presentation(&alg.presentation(), a, z, "x")?;
    Algebra::build(&p, alg.field)
}

/// Splits the node `x` into a source (keeping the outgoing arrows, placed where `x` was) and a
/// sink (keeping the incoming arrows, appended last).
pub fn separate_presentation(alg: &Algebra, x: usize, source_name: &str, sink_name: &str) -> Result<Presentation, Error> {
    let q = &alg.quiver;
    if !is_node(alg, x) {
        return Err(Error::NotNode(q.vertices[x].clone()));
    }
    if q.in_arrows(x).is_empty() || q.out_arrows(x).is_empty() {
        return Err(Error::NotTransition(q.vertices[x].clone()));
    }
    let mut nq = Quiver { name: q.name.clone(), ..Quiver::default() };
    let a_name = fresh_name(q, source_name, &[x]);
    let mut z_name = fresh_name(q, sink_name, &[x]);
    if z_name == a_name {
        z_name.push('\'');
    }
    for (v, n) in q.vertices.iter().enumerate() {
        nq.add_vertex(if v == x { &a_name } else { n });
    }
    let zv = nq.add_vertex(&z_name);
    for ar in &q.arrows {
        let t = if ar.target == x { zv } else { ar.target };
        nq.add_arrow(&ar.name, ar.source, t);
    }
    let mut relations = Vec::new();
    for r in &alg.relations {
        let terms: Vec<(i64, Path)> = r
            .terms
            .iter()
            .filter(|(_, pp)| pp.arrows[..pp.len() - 1].iter().all(|&ar| q.arrows[ar].target != x))
            .map(|(c, pp)| {
                let t = if pp.target == x { zv } else { pp.target };
                (*c, Path { source: pp.source, target: t, arrows: pp.arrows.clone() })
            })
            .collect();
        if !terms.is_empty() {
            relations.push(Relation { terms });
        }
    }
    Ok(Presentation { quiver: nq, relations })
}

pub fn separate(alg: &Algebra, x: usize) -> Result<Algebra, Error> {
    let p = separate_presentation(alg, x, "a", "z")?;
    Algebra::build(&p, alg.field)
}

/// Blocks of an equivalence relation on vertices, blocks ordered by their least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PointPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl PointPartition {
    pub fn from_labels(labels: &[usize]) -> PointPartition {
        let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &l) in labels.iter().enumerate() {
            m.entry(l).or_default().push(v);
        }
        let mut blocks: Vec<Vec<usize>> = m.into_values().collect();
        blocks.sort();
        PointPartition { blocks }
    }

    pub fn discrete(n: usize) -> PointPartition {
        PointPartition { blocks: (0..n).map(|v| vec![v]).collect() }
    }

    pub fn labels(&self, n: usize) -> Vec<usize> {
        let mut l = vec![0; n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b {
                l[v] = i;
            }
        }
        l
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    pub fn render(&self, q: &Quiver) -> Vec<Vec<String>> {
        self.blocks.iter().map(|b| b.iter().map(|&v| q.vertices[v].clone()).collect()).collect()
    }
}

/// How arrows behave when their endpoints are identified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ArrowRule {
    /// Arrows with the same source block and target block become one arrow.
    Merge,
    /// Every arrow keeps its own image; parallel images stay parallel.
    Keep,
}

/// Arrow images under a partition, as (source block, target block) per image arrow.
fn arrow_classes(q: &Quiver, labels: &[usize], rule: ArrowRule) -> (Vec<(usize, usize)>, Vec<usize>) {
    let mut keys: Vec<(usize, usize)> = Vec::new();
    let mut amap = Vec::new();
    for ar in &q.arrows {
        let k = (labels[ar.source], labels[ar.target]);
        let existing = if rule == ArrowRule::Merge { keys.iter().position(|x| *x == k) } else { None };
        let i = match existing {
            Some(i) => i,
            None => {
                keys.push(k);
                keys.len() - 1
            }
        };
        amap.push(i);
    }
    (keys, amap)
}

/// Non-discrete, and arrows sharing a source, or sharing a sink, keep distinct images.
pub fn is_proper(q: &Quiver, part: &PointPartition, rule: ArrowRule) -> bool {
    if part.is_discrete() {
        return false;
    }
    let labels = part.labels(q.num_vertices());
    injective_on_stars(q, &labels, q.num_vertices(), rule)
}

fn injective_on_stars(q: &Quiver, labels: &[usize], assigned: usize, rule: ArrowRule) -> bool {
    if rule == ArrowRule::Keep {
        return true;
    }
    let arrs = &q.arrows;
    for i in 0..arrs.len() {
        for j in i + 1..arrs.len() {
            let (x, y) = (&arrs[i], &arrs[j]);
            if x.source == y.source && x.target < assigned && y.target < assigned && labels[x.target] == labels[y.target] {
                return false;
            }
            if x.target == y.target && x.source < assigned && y.source < assigned && labels[x.source] == labels[y.source] {
                return false;
            }
        }
    }
    true
}

/// The algebra C_R: quotient quiver Q_C/R, images of the relations of C, and every path of
/// Q_C/R without a nonzero lifting to C (minimal such paths suffice).
pub fn quotient_algebra(c: &Algebra, part: &PointPartition, rule: ArrowRule) -> Result<Algebra, Error> {
    let p = quotient_presentation(c, part, rule)?;
    Algebra::build(&p, c.field)
}

pub fn quotient_presentation(c: &Algebra, part: &PointPartition, rule: ArrowRule) -> Result<Presentation, Error> {
    let q = &c.quiver;
    let n = q.num_vertices();
    let labels = part.labels(n);
    let (keys, amap) = arrow_classes(q, &labels, rule);
    let mut nq = Quiver { name: q.name.as_ref().map(|s| format!("{s}_quotient")), ..Quiver::default() };
    let mut used = HashSet::new();
    for b in &part.blocks {
        let mut name = b.iter().map(|&v| q.vertices[v].as_str()).collect::<Vec<_>>().join("_");
        while used.contains(&name) {
            name.push('\'');
        }
        used.insert(name.clone());
        nq.add_vertex(&name);
    }
    for (i, &(s, t)) in keys.iter().enumerate() {
        let first = amap.iter().position(|&k| k == i).unwrap();
        nq.add_arrow(&q.arrows[first].name, s, t);
    }
    let image = |pp: &Path| -> Path {
        if pp.is_empty() {
            nq.stationary(labels[pp.source])
        } else {
            nq.path(&pp.arrows.iter().map(|&x| amap[x]).collect::<Vec<_>>()).expect("images of paths compose")
        }
    };
    let mut relations: Vec<Relation> = Vec::new();
    for r in &c.relations {
        let img = Relation { terms: r.terms.iter().map(|(k, pp)| (*k, image(pp))).collect() }.normalized();
        if !img.terms.is_empty() {
            relations.push(img);
        }
    }
    let liftable: HashSet<Vec<usize>> = c
        .nonzero_paths(crate::lattice::DEFAULT_PATH_CAP)?
        .iter()
        .map(|(pp, _)| image(pp).arrows)
        .collect();
    let mut killed: BTreeSet<Vec<usize>> = BTreeSet::new();
    for v in &liftable {
        let tgt = nq.arrows[*v.last().unwrap()].target;
        for b in nq.out_arrows(tgt) {
            let mut w = v.clone();
            w.push(b);
            if !liftable.contains(&w) && (w.len() == 2 || liftable.contains(&w[1..].to_vec())) {
                killed.insert(w);
            }
        }
    }
    for w in killed {
        relations.push(Relation::monomial(nq.path(&w).unwrap()));
    }
    Ok(Presentation { quiver: nq, relations })
}

/// Visits all proper partitions (restricted growth strings with early pruning).
pub fn proper_partitions(q: &Quiver, rule: ArrowRule, vertex_cap: usize) -> Result<Vec<PointPartition>, Error> {
    let n = q.num_vertices();
    if n > vertex_cap {
        return Err(Error::Cap { what: "vertex", count: n, cap: vertex_cap });
    }
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(q: &Quiver, rule: ArrowRule, i: usize, m: usize, labels: &mut Vec<usize>, out: &mut Vec<PointPartition>) {
        let n = labels.len();
        if i == n {
            if m < n {
                out.push(PointPartition::from_labels(labels));
            }
            return;
        }
        for k in 0..=m {
            labels[i] = k;
            if injective_on_stars(q, labels, i + 1, rule) {
                rec(q, rule, i + 1, if k == m { m + 1 } else { m }, labels, out);
            }
        }
    }
    if n > 0 {
        rec(q, rule, 0, 0, &mut labels, &mut out);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct GlueingClass {
    pub partition: Vec<Vec<String>>,
    pub members: usize,
    pub dim: usize,
    pub vertices: usize,
    pub presentation: Presentation,
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub rule: ArrowRule,
    pub proper_partitions: usize,
    pub classes: usize,
    /// Class count when the partition into a single block is excluded as well.
    pub classes_without_single_block: usize,
    pub representatives: Vec<GlueingClass>,
}

pub const DEFAULT_VERTEX_CAP: usize = 10;

/// Proper glueings of `c` up to isomorphism of presentations.
pub fn census_glueings(c: &Algebra, rule: ArrowRule, vertex_cap: usize) -> Result<Census, Error> {
    let q = &c.quiver;
    let parts = proper_partitions(q, rule, vertex_cap)?;
    let built: Vec<(PointPartition, Algebra)> = parts
        .par_iter()
        .map(|p| quotient_algebra(c, p, rule).map(|a| (p.clone(), a)))
        .collect::<Result<_, _>>()?;
    // Group into classes; cheap invariants first.
    let key = |a: &Algebra| {
        let mut degs: Vec<(usize, usize, usize)> = (0..a.quiver.num_vertices())
            .map(|v| (a.quiver.in_arrows(v).len(), a.quiver.out_arrows(v).len(), a.pair_dim(v, v)))
            .collect();
        degs.sort();
        (a.dim(), a.quiver.num_vertices(), a.quiver.num_arrows(), degs)
    };
    let mut reps: Vec<(PointPartition, Algebra, usize)> = Vec::new();
    for (p, a) in built {
        let k = key(&a);
        match reps.iter_mut().find(|(_, r, _)| key(r) == k && r.presentation_iso(&a).is_some()) {
            Some(entry) => entry.2 += 1,
            None => reps.push((p, a, 1)),
        }
    }
    let single = reps.iter().filter(|(p, _, _)| p.blocks.len() == 1).count();
    let representatives: Vec<GlueingClass> = reps
        .iter()
        .map(|(p, a, m)| GlueingClass {
            partition: p.render(q),
            members: *m,
            dim: a.dim(),
            vertices: a.quiver.num_vertices(),
            presentation: a.presentation(),
        })
        .collect();
    Ok(Census {
        rule,
        proper_partitions: parts.len(),
        classes: reps.len(),
        classes_without_single_block: reps.len() - single,
        representatives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::quiver::parse_quiver_file;

    fn build(text: &str) -> Algebra {
        Algebra::build(&parse_quiver_file(text).unwrap(), FieldSpec::Rationals).unwrap()
    }

    const KRONECKER: &str = "vertex a z\narrow x : a -> z\narrow y : a -> z\n";

    #[test]
    fn glue_kronecker() {
        let k = build(KRONECKER);
        let g = glue(&k, 0, 1).unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.quiver.num_vertices(), 1);
        assert!(is_node(&g, 0));
        assert!(matches!(glue(&k, 1, 0), Err(Error::NotSource(_))));
        let back = separate(&g, 0).unwrap();
        assert_eq!(back.dim(), 4);
        assert!(back.presentation_iso(&k).is_some());
    }

    #[test]
    fn separate_rejects_non_nodes() {
        let a = build("vertex a b c\narrow f : a -> b\narrow g : b -> c\n");
        assert!(matches!(separate(&a, 1), Err(Error::NotNode(_))));
        assert!(matches!(separate(&a, 0), Err(Error::NotTransition(_))));
    }

    #[test]
    fn discrete_quotient_is_identity() {
        let k = build(KRONECKER);
        let same = quotient_algebra(&k, &PointPartition::discrete(2), ArrowRule::Keep).unwrap();
        assert!(same.presentation_iso(&k).is_some());
        // Merge identifies parallel arrows even without identifying points; on a tree it is the identity.
        let tree = build("vertex a b c\narrow f : a -> b\narrow g : b -> c\nrelation g.f\n");
        for rule in [ArrowRule::Merge, ArrowRule::Keep] {
            let same = quotient_algebra(&tree, &PointPartition::discrete(3), rule).unwrap();
            assert!(same.presentation_iso(&tree).is_some());
        }
        let one = PointPartition { blocks: vec![vec![0, 1]] };
        let kept = quotient_algebra(&k, &one, ArrowRule::Keep).unwrap();
        assert!(kept.presentation_iso(&glue(&k, 0, 1).unwrap()).is_some());
        // Merging the two parallel arrows leaves a single loop with zero square.
        let merged = quotient_algebra(&k, &one, ArrowRule::Merge).unwrap();
        assert_eq!(merged.dim(), 2);
    }

    #[test]
    fn kronecker_glueings() {
        let k = build(KRONECKER);
        let c = census_glueings(&k, ArrowRule::Keep, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!((c.proper_partitions, c.classes), (1, 1));
        // Both arrows start at a, so merging them is not proper.
        let c = census_glueings(&k, ArrowRule::Merge, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!((c.proper_partitions, c.classes), (0, 0));
    }
}
