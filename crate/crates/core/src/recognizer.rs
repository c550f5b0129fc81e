//! Decides whether an algebra is isomorphic to a member of one of the families A–E or to a
//! glued version, and if so produces an explicit isomorphism.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::Algebra;
use crate::families::{gen_family_over, Family};
use crate::field::Scalar;
use crate::glueing::separate;
use crate::lattice::{thick_points, trichotomy, Verdict};
use crate::linalg::{axpy, kernel, rank, scale, to_svec, unit, SVec};
use crate::quiver::Path;

/// An algebra map from a generated family member into the input: vertices go to vertices and
/// each arrow goes to an element of the radical.
#[derive(Clone, Debug)]
pub struct Correspondence {
    pub vertex_map: Vec<usize>,
    pub arrow_images: Vec<SVec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Recognized {
    pub family: Family,
    pub params: Vec<usize>,
    pub glued: bool,
    /// Generated vertex name to input vertex name.
    pub vertices: BTreeMap<String, String>,
    /// Generated arrow name to the image in the input, written in the input's basis.
    pub arrows: BTreeMap<String, String>,
    #[serde(rename = "type")]
    pub kind: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Recognition {
    Match(Recognized),
    Refusal { witness: String },
}

impl Recognition {
    pub fn is_match(&self) -> bool {
        matches!(self, Recognition::Match(_))
    }
}

/// Internal result: the generated instance plus the correspondence into the input.
struct Found {
    family: Family,
    params: Vec<usize>,
    gen: Algebra,
    corr: Correspondence,
}

type Probe<T> = Result<T, String>;

pub fn recognize(a: &Algebra) -> Recognition {
    match recognize_inner(a) {
        Ok((found, glued, kind)) => {
            let g = &found.gen.quiver;
            let vertices = (0..g.num_vertices())
                .map(|v| (g.vertices[v].clone(), a.quiver.vertices[found.corr.vertex_map[v]].clone()))
                .collect();
            let arrows = (0..g.num_arrows())
                .map(|x| (g.arrows[x].name.clone(), a.render_vec(&found.corr.arrow_images[x])))
                .collect();
            Recognition::Match(Recognized {
                family: found.family,
                params: found.params,
                glued,
                vertices,
                arrows,
                kind: kind.to_string(),
            })
        }
        Err(witness) => Recognition::Refusal { witness },
    }
}

fn recognize_inner(a: &Algebra) -> Probe<(Found, bool, &'static str)> {
    let rep = trichotomy(a);
    match rep.verdict {
        Verdict::Distributive => Err("the algebra is distributive".into()),
        Verdict::NotMinimalNonDistributive { condition } => Err(condition),
        Verdict::Type1 => {
            let x = rep.critical_pair.unwrap().a;
            Ok((recognize_glued(a, x)?, true, "Type1"))
        }
        Verdict::Type2 => {
            let cp = rep.critical_pair.unwrap();
            Ok((recognize_type2(a, cp.a, cp.z)?, false, "Type2"))
        }
        Verdict::Type3 => {
            let cp = rep.critical_pair.unwrap();
            Ok((recognize_type3(a, cp.a, cp.z)?, false, "Type3"))
        }
    }
}

fn recognize_glued(a: &Algebra, x: usize) -> Probe<Found> {
    let sep = separate(a, x).map_err(|e| format!("the node cannot be separated: {e}"))?;
    let n = a.quiver.num_vertices();
    let rep = trichotomy(&sep);
    let inner = match rep.verdict {
        Verdict::Type2 => {
            let cp = rep.critical_pair.unwrap();
            recognize_type2(&sep, cp.a, cp.z)?
        }
        Verdict::Type1 | Verdict::Type3 | Verdict::Distributive => {
            return Err("the separated algebra is not of type 2".into());
        }
        Verdict::NotMinimalNonDistributive { condition } => return Err(format!("after separating the node: {condition}")),
    };
    // Generated a and z are vertices 0 and 1; they must land on the two halves of x.
    if inner.corr.vertex_map[0] != x || inner.corr.vertex_map[1] != n {
        return Err("the critical pair of the separated algebra is not the separated node".into());
    }
    let gen = gen_family_over(inner.family, &inner.params, true, a.field).map_err(|e| e.to_string())?.algebra;
    // Separated vertices keep their indices except the sink, which is appended last.
    let back = |u: usize| if u == n { x } else { u };
    let m = inner.gen.quiver.num_vertices();
    let mut vertex_map = vec![0; m - 1];
    let mut k = 0;
    for v in 0..m {
        if v == 1 {
            continue;
        }
        vertex_map[k] = back(inner.corr.vertex_map[v]);
        k += 1;
    }
    let arrow_images = inner
        .corr
        .arrow_images
        .iter()
        .map(|img| {
            let mut acc = BTreeMap::new();
            for (i, c) in img {
                let p = &sep.basis()[*i];
                let moved = Path { source: back(p.source), target: back(p.target), arrows: p.arrows.clone() };
                axpy(&mut acc, c, &a.path_vec(&moved));
            }
            to_svec(acc)
        })
        .collect();
    let corr = Correspondence { vertex_map, arrow_images };
    verify(&gen, a, &corr)?;
    Ok(Found { family: inner.family, params: inner.params, gen, corr })
}

/// Follows arrows from `start` through thin vertices with exactly one arrow in and one out,
/// stopping at the first vertex in `stops`.
fn chain(a: &Algebra, start: usize, stops: &[usize]) -> Probe<(Vec<usize>, Vec<usize>, usize)> {
    let q = &a.quiver;
    let mut arrows = vec![start];
    let mut interior = Vec::new();
    let mut v = q.arrows[start].target;
    while !stops.contains(&v) {
        if interior.contains(&v) || interior.len() > q.num_vertices() {
            return Err("a path from the critical pair runs into a cycle".into());
        }
        let (ins, outs) = (q.in_arrows(v), q.out_arrows(v));
        if ins.len() != 1 || outs.len() != 1 || a.pair_dim(v, v) != 1 {
            return Err(format!("the interior point {} of a long path is not a thin transit point", q.vertices[v]));
        }
        interior.push(v);
        arrows.push(outs[0]);
        v = q.arrows[outs[0]].target;
    }
    Ok((arrows, interior, v))
}

fn path_of(a: &Algebra, arrows: &[usize]) -> SVec {
    a.path_vec(&a.quiver.path(arrows).expect("chains compose"))
}

/// Expresses `v` as a combination of `basis`, if possible.
fn coordinates(a: &Algebra, basis: &[SVec], v: &SVec) -> Option<Vec<Scalar>> {
    let f = a.field;
    let mut imgs = basis.to_vec();
    imgs.push(v.clone());
    let k = basis.len();
    for combo in kernel(f, &imgs) {
        if let Some((_, c)) = combo.iter().find(|(i, _)| *i == k) {
            let m = c.inv().neg();
            let mut out = vec![f.zero(); k];
            for (i, x) in &combo {
                if *i < k {
                    out[*i] = x.mul(&m);
                }
            }
            return Some(out);
        }
    }
    None
}

struct Assign<'a> {
    a: &'a Algebra,
    gen: Algebra,
    vertex_map: Vec<Option<usize>>,
    arrow_images: Vec<Option<SVec>>,
}

impl<'a> Assign<'a> {
    fn new(a: &'a Algebra, family: Family, params: &[usize]) -> Probe<Assign<'a>> {
        let gen = gen_family_over(family, params, false, a.field).map_err(|e| e.to_string())?.algebra;
        if gen.quiver.num_vertices() != a.quiver.num_vertices() || gen.quiver.num_arrows() != a.quiver.num_arrows() {
            return Err(format!("the quiver has points or arrows outside the {family} shape"));
        }
        let (nv, na) = (gen.quiver.num_vertices(), gen.quiver.num_arrows());
        Ok(Assign { a, gen, vertex_map: vec![None; nv], arrow_images: vec![None; na] })
    }

    fn vertex(&mut self, g: &str, v: usize) {
        let i = self.gen.quiver.vertex(g).expect("generated vertex");
        self.vertex_map[i] = Some(v);
    }

    /// Maps the generated chain `g_arrows` (names in traversal order) onto the input chain,
    /// sending interior vertices along.
    fn chain(&mut self, g_arrows: &[String], arrows: &[usize]) {
        for (k, (name, &ar)) in g_arrows.iter().zip(arrows).enumerate() {
            let gi = self.gen.quiver.arrow(name).expect("generated arrow");
            self.arrow_images[gi] = Some(unit(self.a.field, self.a.arrow_element(ar)));
            if k + 1 < arrows.len() {
                let gt = self.gen.quiver.arrows[gi].target;
                self.vertex_map[gt] = Some(self.a.quiver.arrows[ar].target);
            }
        }
    }

    fn arrow(&mut self, g: &str, img: SVec) {
        let i = self.gen.quiver.arrow(g).expect("generated arrow");
        self.arrow_images[i] = Some(img);
    }

    fn finish(self, family: Family, params: Vec<usize>) -> Probe<Found> {
        let vertex_map: Vec<usize> = self.vertex_map.into_iter().collect::<Option<_>>().ok_or("unmatched point")?;
        let arrow_images: Vec<SVec> = self.arrow_images.into_iter().collect::<Option<_>>().ok_or("unmatched arrow")?;
        let corr = Correspondence { vertex_map, arrow_images };
        verify(&self.gen, self.a, &corr)?;
        Ok(Found { family, params, gen: self.gen, corr })
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}

fn recognize_type2(a: &Algebra, src: usize, snk: usize) -> Probe<Found> {
    let q = &a.quiver;
    let f = a.field;
    let thick = thick_points(a);
    let outs = q.out_arrows(src);
    match thick.len() {
        0 => {
            let mut arms = Vec::new();
            for &o in &outs {
                let (arrows, _, end) = chain(a, o, &[snk])?;
                debug_assert_eq!(end, snk);
                arms.push(arrows);
            }
            arms.sort_by_key(|arm| std::cmp::Reverse(arm.len()));
            match arms.len() {
                2 => {
                    let (p, qq) = (arms[0].len() - 1, arms[1].len() - 1);
                    let mut asg = Assign::new(a, Family::A, &[p, qq])?;
                    asg.vertex("a", src);
                    asg.vertex("z", snk);
                    asg.chain(&names("x", p + 1), &arms[0]);
                    asg.chain(&names("y", qq + 1), &arms[1]);
                    asg.finish(Family::A, vec![p, qq])
                }
                3 => {
                    let lens: Vec<usize> = arms.iter().map(|x| x.len()).collect();
                    let params = match (lens[0], lens[1], lens[2]) {
                        (l, 2, 2) if l >= 2 => vec![l - 1, 1],
                        (l, 3, 2) if (3..=5).contains(&l) => vec![l - 1, 2],
                        _ => return Err(format!("arm lengths {lens:?} are outside the admissible range of B")),
                    };
                    let vs: Vec<SVec> = arms.iter().map(|arm| path_of(a, arm)).collect();
                    let ker = kernel(f, &vs);
                    if ker.len() != 1 || ker[0].len() != 3 {
                        return Err("the three long paths do not satisfy a single relation with all coefficients nonzero".into());
                    }
                    let mut asg = Assign::new(a, Family::B, &params)?;
                    asg.vertex("a", src);
                    asg.vertex("z", snk);
                    let gnames = [names("x", params[0] + 1), names("y", params[1] + 1), names("c", 2)];
                    asg.chain(&gnames[0], &arms[0]);
                    asg.chain(&gnames[1], &arms[1]);
                    asg.chain(&gnames[2], &arms[2]);
                    // Rescale the first arrow of each arm by its coefficient in the relation.
                    for (k, (_, c)) in ker[0].iter().enumerate() {
                        asg.arrow(&gnames[k][0], scale(&unit(f, a.arrow_element(arms[k][0])), c));
                    }
                    asg.finish(Family::B, params)
                }
                0 | 1 => Err("fewer than two arrows start at the source".into()),
                _ => Err("more than three arrows start at the source".into()),
            }
        }
        1 => {
            let b = thick[0];
            let Some(&al) = outs.iter().find(|&&o| q.arrows[o].target == b) else {
                return Err("no arrow from the source to the thick point".into());
            };
            let b_outs = q.out_arrows(b);
            if b_outs.len() != 2 {
                return Err("the thick point does not carry exactly one cycle and one exit".into());
            }
            let mut cycle = None;
            let mut exit = None;
            for &o in &b_outs {
                let (arrows, _, end) = chain(a, o, &[b, snk])?;
                if end == b {
                    cycle = Some(arrows);
                } else {
                    exit = Some(arrows);
                }
            }
            let (Some(rho), Some(beta)) = (cycle, exit) else {
                return Err("the thick point does not carry exactly one cycle and one exit".into());
            };
            if beta.len() != 1 {
                return Err("the path from the thick point to the sink is not a single arrow".into());
            }
            let p = rho.len();
            let fill = |asg: &mut Assign| {
                asg.vertex("a", src);
                asg.vertex("z", snk);
                asg.vertex("b", b);
                asg.chain(&["alpha".to_string()], &[al]);
                asg.chain(&names("rho", p), &rho);
                asg.chain(&["beta".to_string()], &beta);
            };
            match outs.len() {
                1 => {
                    let mut asg = Assign::new(a, Family::C, &[p])?;
                    fill(&mut asg);
                    asg.finish(Family::C, vec![p])
                }
                2 => {
                    let other = outs.iter().copied().find(|&o| o != al).unwrap();
                    let (arm, _, end) = chain(a, other, &[snk])?;
                    if end != snk || arm.len() < 2 {
                        return Err("the second arrow from the source does not start a long path of length at least 2".into());
                    }
                    let qq = arm.len() - 1;
                    let short: Vec<usize> = vec![al, beta[0]];
                    let mut long = vec![al];
                    long.extend(&rho);
                    long.push(beta[0]);
                    let (u, w) = (path_of(a, &short), path_of(a, &long));
                    let Some(xs) = coordinates(a, &[u, w], &path_of(a, &arm)) else {
                        return Err("the second long path is not a combination of βα and βρα".into());
                    };
                    if xs[0].is_zero() {
                        return Err("the second long path has no βα component, so a proper quotient is still representation-infinite".into());
                    }
                    let mut asg = Assign::new(a, Family::D, &[p, qq])?;
                    fill(&mut asg);
                    asg.chain(&names("x", qq + 1), &arm);
                    // α ↦ x₀α + x₁ρα turns the relation into arm = βα.
                    let mut img = BTreeMap::new();
                    axpy(&mut img, &xs[0], &unit(f, a.arrow_element(al)));
                    let mut rho_al = vec![al];
                    rho_al.extend(&rho);
                    axpy(&mut img, &xs[1], &path_of(a, &rho_al));
                    asg.arrow("alpha", to_svec(img));
                    asg.finish(Family::D, vec![p, qq])
                }
                _ => Err("more than two arrows start at the source".into()),
            }
        }
        _ => Err("two thick points".into()),
    }
}

fn recognize_type3(a: &Algebra, src: usize, snk: usize) -> Probe<Found> {
    let q = &a.quiver;
    let (outs, z_outs) = (q.out_arrows(src), q.out_arrows(snk));
    if outs.len() != 2 || z_outs.len() != 1 {
        return Err("the end points do not have the arrow pattern of a cycle and a bridge".into());
    }
    let mut cycle = None;
    let mut bridge = None;
    for &o in &outs {
        let (arrows, _, end) = chain(a, o, &[src, snk])?;
        if end == src {
            cycle = Some(arrows);
        } else {
            bridge = Some(arrows);
        }
    }
    let (Some(alpha), Some(beta)) = (cycle, bridge) else {
        return Err("the start point does not carry exactly one cycle and one bridge".into());
    };
    let (gamma, _, end) = chain(a, z_outs[0], &[snk, src])?;
    if end != snk {
        return Err("there is a path from the end point back to the start point".into());
    }
    let params = vec![gamma.len(), alpha.len(), beta.len()];
    let mut asg = Assign::new(a, Family::E, &params)?;
    asg.vertex("a", src);
    asg.vertex("z", snk);
    asg.chain(&names("alpha", params[1]), &alpha);
    asg.chain(&names("beta", params[2]), &beta);
    asg.chain(&names("gamma", params[0]), &gamma);
    asg.finish(Family::E, params)
}

/// Checks that the correspondence defines an algebra isomorphism from `gen` onto `a`: the arrow
/// images are radical elements between the right points, independent modulo the radical square,
/// every generated relation maps to zero, and all bimodule dimensions agree.
pub fn verify(gen: &Algebra, a: &Algebra, corr: &Correspondence) -> Probe<()> {
    let (gq, q) = (&gen.quiver, &a.quiver);
    let fail = |why: &str| Err(format!("rebuild-and-compare failed: {why}"));
    if gen.dim() != a.dim() || gq.num_vertices() != q.num_vertices() || gq.num_arrows() != q.num_arrows() {
        return fail("sizes differ");
    }
    let vm = &corr.vertex_map;
    let mut seen = vec![false; q.num_vertices()];
    for &v in vm {
        if v >= seen.len() || std::mem::replace(&mut seen[v], true) {
            return fail("the point map is not a bijection");
        }
    }
    for x in 0..gq.num_vertices() {
        for y in 0..gq.num_vertices() {
            if gen.pair_dim(x, y) != a.pair_dim(vm[x], vm[y]) {
                return fail("bimodule dimensions differ");
            }
        }
    }
    let mut linear = Vec::new();
    for (ar, img) in gq.arrows.iter().zip(&corr.arrow_images) {
        let (s, t) = (vm[ar.source], vm[ar.target]);
        let mut lin = Vec::new();
        for (i, c) in img {
            let p = &a.basis()[*i];
            if p.source != s || p.target != t || p.is_empty() {
                return fail("an arrow image leaves its bimodule or the radical");
            }
            if p.len() == 1 {
                lin.push((p.arrows[0], c.clone()));
            }
        }
        lin.sort_by_key(|(i, _)| *i);
        linear.push(lin);
    }
    if rank(a.field, &linear) != gq.num_arrows() {
        return fail("arrow images are dependent modulo the radical square");
    }
    for r in &gen.relations {
        let mut acc = BTreeMap::new();
        for (c, p) in &r.terms {
            let mut v = unit(a.field, a.vertex_element(vm[p.source]));
            for &ar in &p.arrows {
                v = a.mul_vec(&corr.arrow_images[ar], &v);
            }
            axpy(&mut acc, &a.scalar(*c), &v);
        }
        if !to_svec(acc).is_empty() {
            return fail(&format!("the relation {} does not hold", r.render(gq)));
        }
    }
    Ok(())
}
