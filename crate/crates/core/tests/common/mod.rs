#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use minrep::{Algebra, FieldSpec, Path, Presentation, Quiver, Relation};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Random permutation of vertices and arrows with fresh names.
pub fn relabel(p: &Presentation, rng: &mut ChaCha8Rng) -> Presentation {
    let q = &p.quiver;
    let mut vperm: Vec<usize> = (0..q.num_vertices()).collect();
    vperm.shuffle(rng);
    let mut aperm: Vec<usize> = (0..q.num_arrows()).collect();
    aperm.shuffle(rng);
    // vperm[new] = old
    let mut vnew = vec![0; vperm.len()];
    for (n, &o) in vperm.iter().enumerate() {
        vnew[o] = n;
    }
    let mut anew = vec![0; aperm.len()];
    for (n, &o) in aperm.iter().enumerate() {
        anew[o] = n;
    }
    let mut nq = Quiver::default();
    for n in 0..vperm.len() {
        nq.add_vertex(&format!("p{n}"));
    }
    for &o in &aperm {
        let a = &q.arrows[o];
        nq.add_arrow(&format!("t{}", anew[o]), vnew[a.source], vnew[a.target]);
    }
    let mv = |pp: &Path| Path {
        source: vnew[pp.source],
        target: vnew[pp.target],
        arrows: pp.arrows.iter().map(|&a| anew[a]).collect(),
    };
    let relations = p.relations.iter().map(|r| Relation { terms: r.terms.iter().map(|(c, pp)| (*c, mv(pp))).collect() }).collect();
    Presentation { quiver: nq, relations }
}

/// Replaces an arrow ᾱ by ᾱ + n in every relation, where n is a random integer combination of
/// nonzero paths of length at least 2 parallel to ᾱ. The algebra is unchanged up to isomorphism.
/// Returns None when no arrow has such parallel paths.
pub fn perturb(alg: &Algebra, rng: &mut ChaCha8Rng) -> Option<Presentation> {
    let q = &alg.quiver;
    let paths = alg.nonzero_paths(100_000).unwrap();
    let mut options: Vec<(usize, Vec<Path>)> = Vec::new();
    for a in 0..q.num_arrows() {
        let (s, t) = (q.arrows[a].source, q.arrows[a].target);
        let par: Vec<Path> = paths.iter().filter(|(p, _)| p.len() >= 2 && p.source == s && p.target == t).map(|(p, _)| p.clone()).collect();
        if !par.is_empty() {
            options.push((a, par));
        }
    }
    if options.is_empty() {
        return None;
    }
    let (arrow, par) = options.choose(rng).unwrap().clone();
    let k = rng.gen_range(1..=par.len().min(2));
    let chosen: Vec<(i64, Path)> = par.choose_multiple(rng, k).map(|p| (*[1i64, -1, 2].choose(rng).unwrap(), p.clone())).collect();
    let mut replacement: Vec<(i64, Vec<usize>)> = vec![(1, vec![arrow])];
    replacement.extend(chosen.iter().map(|(c, p)| (*c, p.arrows.clone())));
    let relations = alg
        .relations
        .iter()
        .map(|r| {
            let mut terms: Vec<(i64, Vec<usize>)> = Vec::new();
            for (c, p) in &r.terms {
                let mut partial: Vec<(i64, Vec<usize>)> = vec![(*c, vec![])];
                for &x in &p.arrows {
                    let opts: Vec<(i64, Vec<usize>)> = if x == arrow { replacement.clone() } else { vec![(1, vec![x])] };
                    partial = partial
                        .iter()
                        .flat_map(|(c0, w)| {
                            opts.iter().map(move |(c1, v)| {
                                let mut w2 = w.clone();
                                w2.extend(v);
                                (c0 * c1, w2)
                            })
                        })
                        .collect();
                }
                terms.extend(partial);
            }
            let terms = terms.into_iter().map(|(c, w)| (c, Path { source: p_src(q, &w), target: p_tgt(q, &w), arrows: w })).collect();
            Relation { terms }.normalized()
        })
        .filter(|r| !r.terms.is_empty())
        .collect();
    Some(Presentation { quiver: q.clone(), relations })
}

fn p_src(q: &Quiver, w: &[usize]) -> usize {
    q.arrows[w[0]].source
}

fn p_tgt(q: &Quiver, w: &[usize]) -> usize {
    q.arrows[*w.last().unwrap()].target
}

/// Random connected admissible algebra over F_2 with at most `max_v` vertices, `max_a` arrows
/// and dimension at most `max_dim`.
pub fn random_algebra(rng: &mut ChaCha8Rng, max_v: usize, max_a: usize, max_dim: usize) -> Algebra {
    loop {
        let nv = rng.gen_range(1..=max_v);
        let na = rng.gen_range(nv.saturating_sub(1).max(1)..=max_a);
        let mut q = Quiver::default();
        for v in 0..nv {
            q.add_vertex(&format!("v{v}"));
        }
        // A random spanning tree first keeps the quiver connected.
        for v in 1..nv {
            let u = rng.gen_range(0..v);
            let (s, t) = if rng.gen_bool(0.5) { (u, v) } else { (v, u) };
            q.add_arrow(&format!("r{}", q.num_arrows()), s, t);
        }
        while q.num_arrows() < na {
            let (s, t) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
            q.add_arrow(&format!("r{}", q.num_arrows()), s, t);
        }
        // Relations: random zero paths of length 2-3 and occasional binomials.
        let mut len2 = Vec::new();
        for a in 0..q.num_arrows() {
            for b in q.out_arrows(q.arrows[a].target) {
                len2.push(q.path(&[a, b]).unwrap());
            }
        }
        let mut rels = Vec::new();
        for p in &len2 {
            if rng.gen_bool(0.45) {
                rels.push(Relation::monomial(p.clone()));
            }
        }
        let mut by_ends: BTreeMap<(usize, usize), Vec<&Path>> = BTreeMap::new();
        for p in &len2 {
            by_ends.entry((p.source, p.target)).or_default().push(p);
        }
        for ps in by_ends.values() {
            if ps.len() >= 2 && rng.gen_bool(0.5) {
                let (x, y) = (ps[0].clone(), ps[1].clone());
                rels.retain(|r: &Relation| r.terms[0].1 != x && r.terms[0].1 != y);
                rels.push(Relation { terms: vec![(1, x), (1, y)] });
            }
        }
        // Loops and cycles get their cube killed so the result is finite.
        for a in 0..q.num_arrows() {
            let s = q.arrows[a].source;
            for b in q.out_arrows(q.arrows[a].target) {
                for c in q.out_arrows(q.arrows[b].target) {
                    let p = q.path(&[a, b, c]).unwrap();
                    if p.target == s || rng.gen_bool(0.15) {
                        rels.push(Relation::monomial(p));
                    }
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        rels.retain(|r| seen.insert(r.clone()));
        if let Ok(alg) = Algebra::build_with_cap(&q, &rels, FieldSpec::PrimeField(2), 12) {
            if alg.dim() <= max_dim {
                return alg;
            }
        }
    }
}

/// Subspaces of F_2^n as sorted reduced bases of bit vectors.
fn reduce(basis: &[u64], v: u64) -> u64 {
    let mut v = v;
    for &b in basis {
        let lead = 63 - b.leading_zeros();
        if v >> lead & 1 == 1 {
            v ^= b;
        }
    }
    v
}

fn span(vs: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for v in vs {
        let r = reduce(&basis, v);
        if r != 0 {
            basis.push(r);
            basis.sort_by(|a, b| b.cmp(a));
        }
    }
    // Reduced echelon form, pivots in descending order, makes the basis canonical.
    for i in 0..basis.len() {
        let lead = 63 - basis[i].leading_zeros();
        for j in 0..basis.len() {
            if j != i && basis[j] >> lead & 1 == 1 {
                basis[j] ^= basis[i];
            }
        }
    }
    basis
}

fn elements(basis: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64];
    for &b in basis {
        let more: Vec<u64> = out.iter().map(|x| x ^ b).collect();
        out.extend(more);
    }
    out
}

fn join(a: &[u64], b: &[u64]) -> Vec<u64> {
    span(a.iter().chain(b).copied())
}

/// Sub-bimodules are joins of cyclic ones. Birkhoff: a finite lattice is distributive iff it
/// has as many elements as its join-irreducibles have down-sets; the map x ↦ {j ≤ x} is always
/// injective. A distributive lattice of length m has at most 2^m elements, which bounds the
/// enumeration.
fn lattice_is_distributive(m: usize, closure: &dyn Fn(Vec<u64>) -> Vec<u64>) -> bool {
    let contains = |big: &[u64], small: &[u64]| small.iter().all(|&v| reduce(big, v) == 0);
    let mut cyclic: BTreeSet<Vec<u64>> = BTreeSet::new();
    for v in 1u64..(1 << m) {
        cyclic.insert(closure(vec![v]));
    }
    let cyclic: Vec<Vec<u64>> = cyclic.into_iter().collect();
    let bound = 1usize << m;
    let mut all: BTreeSet<Vec<u64>> = BTreeSet::new();
    all.insert(vec![]);
    let mut frontier = vec![vec![]];
    while let Some(x) = frontier.pop() {
        for c in &cyclic {
            if contains(&x, c) {
                continue;
            }
            let y = join(&x, c);
            if all.insert(y.clone()) {
                if all.len() > bound {
                    return false;
                }
                frontier.push(y);
            }
        }
    }
    // Join-irreducibles are cyclic; x is one when the cyclic modules strictly below it do not
    // generate it.
    let mut irreducible: Vec<&Vec<u64>> = cyclic
        .iter()
        .filter(|x| {
            let below = cyclic.iter().filter(|c| c.len() < x.len() && contains(x, c)).fold(vec![], |acc, c| join(&acc, c));
            below.len() < x.len()
        })
        .collect();
    // Anything strictly below an irreducible then has a smaller index.
    irreducible.sort_by_key(|x| x.len());
    let n = irreducible.len();
    // below[i]: bitmask of irreducibles contained in irreducible i.
    let below: Vec<u64> = (0..n)
        .map(|i| (0..n).filter(|&j| contains(irreducible[i], irreducible[j])).fold(0u64, |acc, j| acc | 1 << j))
        .collect();
    // Down-sets, deciding irreducibles in index order, stopping once they outnumber L.
    fn count(i: usize, set: u64, below: &[u64], limit: usize, acc: &mut usize) {
        if *acc > limit {
            return;
        }
        if i == below.len() {
            *acc += 1;
            return;
        }
        count(i + 1, set, below, limit, acc);
        let need = below[i] & !(1 << i);
        if set & need == need {
            count(i + 1, set | 1 << i, below, limit, acc);
        }
    }
    let mut acc = 0;
    count(0, 0, &below, all.len(), &mut acc);
    acc == all.len()
}

/// Brute force over F_2: every bimodule e_y A e_x has a distributive lattice of sub-bimodules.
pub fn brute_force_distributive(alg: &Algebra) -> bool {
    assert_eq!(alg.field, FieldSpec::PrimeField(2));
    let n = alg.quiver.num_vertices();
    let f = alg.field;
    for x in 0..n {
        for y in 0..n {
            let m: Vec<usize> = alg.pair_basis(x, y).to_vec();
            if m.len() <= 1 {
                continue;
            }
            let pos: BTreeMap<usize, usize> = m.iter().enumerate().map(|(k, &i)| (i, k)).collect();
            let to_bits = |v: &minrep::linalg::SVec| -> u64 {
                v.iter().filter(|(_, c)| !c.is_zero()).fold(0u64, |acc, (i, _)| acc | 1 << pos[i])
            };
            let left: Vec<usize> = alg.pair_basis(y, y).to_vec();
            let right: Vec<usize> = alg.pair_basis(x, x).to_vec();
            // Images of each basis vector of M under every corner basis element.
            let mut act: Vec<Vec<u64>> = Vec::new();
            for &l in &left {
                act.push(m.iter().map(|&i| to_bits(&alg.mul_vec(&minrep::linalg::unit(f, l), &minrep::linalg::unit(f, i)))).collect());
            }
            for &r in &right {
                act.push(m.iter().map(|&i| to_bits(&alg.mul_vec(&minrep::linalg::unit(f, i), &minrep::linalg::unit(f, r)))).collect());
            }
            let apply = |op: &[u64], v: u64| -> u64 {
                (0..m.len()).filter(|k| v >> k & 1 == 1).fold(0, |acc, k| acc ^ op[k])
            };
            let closure = |gens: Vec<u64>| -> Vec<u64> {
                let mut b = span(gens);
                loop {
                    let mut more = b.clone();
                    for v in &b {
                        for op in &act {
                            more.push(apply(op, *v));
                        }
                    }
                    let nb = span(more);
                    if nb == b {
                        return b;
                    }
                    b = nb;
                }
            };
            if !lattice_is_distributive(m.len(), &closure) {
                return false;
            }
        }
    }
    true
}

/// Random connected monomial algebra over Q: length-2 zero relations with probability `p_zero`,
/// and every path of length 3 killed so the result is finite dimensional. With `biserial` set,
/// vertices have at most two incoming and two outgoing arrows and the relations enforce the
/// special biserial conditions.
pub fn random_monomial(rng: &mut ChaCha8Rng, max_v: usize, max_a: usize, p_zero: f64, biserial: bool) -> Algebra {
    loop {
        let nv = rng.gen_range(1..=max_v);
        let mut q = Quiver::default();
        for v in 0..nv {
            q.add_vertex(&format!("v{v}"));
        }
        let fits = |q: &Quiver, s: usize, t: usize| !biserial || (q.out_arrows(s).len() < 2 && q.in_arrows(t).len() < 2);
        for v in 1..nv {
            let u = rng.gen_range(0..v);
            let (s, t) = if rng.gen_bool(0.5) { (u, v) } else { (v, u) };
            if fits(&q, s, t) {
                q.add_arrow(&format!("r{}", q.num_arrows()), s, t);
            }
        }
        for _ in 0..max_a * 3 {
            if q.num_arrows() >= max_a {
                break;
            }
            let (s, t) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
            if fits(&q, s, t) {
                q.add_arrow(&format!("r{}", q.num_arrows()), s, t);
            }
        }
        if !q.is_connected() {
            continue;
        }
        let mut zero: BTreeSet<(usize, usize)> = BTreeSet::new();
        for a in 0..q.num_arrows() {
            for b in q.out_arrows(q.arrows[a].target) {
                if rng.gen_bool(p_zero) {
                    zero.insert((a, b));
                }
            }
        }
        if biserial {
            // Each arrow keeps at most one nonzero continuation on either side.
            for a in 0..q.num_arrows() {
                let next: Vec<usize> = q.out_arrows(q.arrows[a].target).into_iter().filter(|&b| !zero.contains(&(a, b))).collect();
                for &b in next.iter().skip(1) {
                    zero.insert((a, b));
                }
            }
            for b in 0..q.num_arrows() {
                let prev: Vec<usize> = q.in_arrows(q.arrows[b].source).into_iter().filter(|&a| !zero.contains(&(a, b))).collect();
                for &a in prev.iter().skip(1) {
                    zero.insert((a, b));
                }
            }
        }
        let mut rels: Vec<Relation> = zero.iter().map(|&(a, b)| Relation::monomial(q.path(&[a, b]).unwrap())).collect();
        for a in 0..q.num_arrows() {
            for b in q.out_arrows(q.arrows[a].target) {
                if zero.contains(&(a, b)) {
                    continue;
                }
                for c in q.out_arrows(q.arrows[b].target) {
                    if !zero.contains(&(b, c)) {
                        rels.push(Relation::monomial(q.path(&[a, b, c]).unwrap()));
                    }
                }
            }
        }
        if let Ok(alg) = Algebra::build_with_cap(&q, &rels, FieldSpec::Rationals, 8) {
            return alg;
        }
    }
}
