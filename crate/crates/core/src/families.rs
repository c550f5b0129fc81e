//! The five parameter families A–E, their glued versions, and enumeration by dimension.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::Error;
use crate::field::FieldSpec;
use crate::glueing::glue_presentation;
use crate::quiver::{Path, Presentation, Quiver, Relation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::A, Family::B, Family::C, Family::D, Family::E];

    pub fn arity(&self) -> usize {
        match self {
            Family::A | Family::B | Family::D => 2,
            Family::C => 1,
            Family::E => 3,
        }
    }

    /// Only A–D have a source and a sink to identify.
    pub fn has_glued_version(&self) -> bool {
        *self != Family::E
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family, Error> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            _ => Err(Error::Usage(format!("unknown family `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub family: Family,
    pub params: Vec<usize>,
    pub glued: bool,
    pub presentation: Presentation,
    pub algebra: Algebra,
}

impl FamilyInstance {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn label(&self) -> String {
        let ps = self.params.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        if self.glued {
            format!("glued {}({ps})", self.family)
        } else {
            format!("{}({ps})", self.family)
        }
    }

    pub fn catalog_entry(&self) -> CatalogEntry {
        CatalogEntry::new(self.family, &self.params, self.glued, &self.presentation, self.dim())
    }
}

/// JSON catalog record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub family: String,
    pub params: Vec<usize>,
    pub glued: bool,
    pub dim: usize,
    pub vertices: Vec<String>,
    pub arrows: Vec<(String, String, String)>,
    pub relations: Vec<String>,
}

impl CatalogEntry {
    pub fn new(family: Family, params: &[usize], glued: bool, p: &Presentation, dim: usize) -> CatalogEntry {
        let q = &p.quiver;
        CatalogEntry {
            family: family.to_string(),
            params: params.to_vec(),
            glued,
            dim,
            vertices: q.vertices.clone(),
            arrows: q
                .arrows
                .iter()
                .map(|a| (a.name.clone(), q.vertices[a.source].clone(), q.vertices[a.target].clone()))
                .collect(),
            relations: p.relations.iter().map(|r| r.render(q)).collect(),
        }
    }

    /// The entry as a quiver file.
    pub fn to_quiver_file(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            s.push_str(&format!("vertex {v}\n"));
        }
        for (n, a, b) in &self.arrows {
            s.push_str(&format!("arrow {n} : {a} -> {b}\n"));
        }
        for r in &self.relations {
            s.push_str(&format!("relation {r}\n"));
        }
        s
    }
}

/// Checks the parameter ranges. A accepts both orders (A(p,q) ≅ A(q,p)); its canonical order is p ≥ q.
pub fn check_params(family: Family, params: &[usize]) -> Result<(), Error> {
    let bad = |why: &str| Err(Error::ParamsOutOfRange(format!("{family}{params:?}: {why}")));
    if params.len() != family.arity() {
        return bad(&format!("expected {} parameters", family.arity()));
    }
    match family {
        Family::A => Ok(()),
        Family::B => {
            let (p, q) = (params[0], params[1]);
            if (q == 1 && p >= 1) || (q == 2 && (2..=4).contains(&p)) {
                Ok(())
            } else {
                bad("allowed are p ≥ q = 1 and 4 ≥ p ≥ q = 2")
            }
        }
        Family::C | Family::D | Family::E => {
            if params.iter().all(|&x| x >= 1) {
                Ok(())
            } else {
                bad("all parameters must be at least 1")
            }
        }
    }
}

struct Builder {
    q: Quiver,
}

impl Builder {
    fn new(name: String) -> Builder {
        Builder { q: Quiver { name: Some(name), ..Quiver::default() } }
    }

    fn v(&mut self, n: &str) -> usize {
        self.q.add_vertex(n)
    }

    fn a(&mut self, n: &str, s: usize, t: usize) -> usize {
        self.q.add_arrow(n, s, t)
    }

    /// Chain of `len` arrows from `s` to `t` with fresh interior vertices.
    fn chain(&mut self, s: usize, t: usize, len: usize, arrow: &str, interior: &str) -> Vec<usize> {
        let mut prev = s;
        let mut out = Vec::new();
        for k in 1..=len {
            let next = if k == len { t } else { self.v(&format!("{interior}{k}")) };
            out.push(self.a(&format!("{arrow}{k}"), prev, next));
            prev = next;
        }
        out
    }

    /// Path through the given arrows in traversal order.
    fn p(&self, arrows: &[usize]) -> Path {
        self.q.path(arrows).expect("family paths compose")
    }
}

/// Canonical presentation of an unglued family member. The source is `a`, the sink is `z`.
pub fn family_presentation(family: Family, params: &[usize]) -> Result<Presentation, Error> {
    check_params(family, params)?;
    let name = format!("{family}_{}", params.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("_"));
    let mut b = Builder::new(name);
    let mut rels = Vec::new();
    match family {
        Family::A | Family::B => {
            let (p, q) = (params[0], params[1]);
            let a = b.v("a");
            // Interior vertices are created by the chains; z is added first so that the
            // numbering a, z, a1.., b1.. is stable.
            let z = b.v("z");
            let x = b.chain(a, z, p + 1, "x", "a");
            let y = b.chain(a, z, q + 1, "y", "b");
            if family == Family::B {
                let cv = b.v("c");
                let c = [b.a("c1", a, cv), b.a("c2", cv, z)];
                rels.push(Relation { terms: vec![(1, b.p(&x)), (1, b.p(&y)), (1, b.p(&c))] });
            }
        }
        Family::C | Family::D => {
            let p = params[0];
            let a = b.v("a");
            let z = b.v("z");
            let bb = b.v("b");
            let al = b.a("alpha", a, bb);
            let rho = b.chain(bb, bb, p, "rho", "c");
            let be = b.a("beta", bb, z);
            // ρ1ρp: ρp then ρ1.
            rels.push(Relation::monomial(b.p(&[rho[p - 1], rho[0]])));
            if family == Family::D {
                let q = params[1];
                let x = b.chain(a, z, q + 1, "x", "d");
                // The arm commutes with the short path βα, not with βρα.
                rels.push(Relation { terms: vec![(1, b.p(&x)), (-1, b.p(&[al, be]))] });
            }
        }
        Family::E => {
            let (p, q, r) = (params[0], params[1], params[2]);
            let a = b.v("a");
            let z = b.v("z");
            let al = b.chain(a, a, q, "alpha", "u");
            let be = b.chain(a, z, r, "beta", "v");
            let ga = b.chain(z, z, p, "gamma", "w");
            rels.push(Relation::monomial(b.p(&[al[q - 1], al[0]])));
            rels.push(Relation::monomial(b.p(&[ga[p - 1], ga[0]])));
            let mut long = vec![al[q - 1]];
            long.extend(&be);
            long.push(ga[0]);
            rels.push(Relation::monomial(b.p(&long)));
        }
    }
    Ok(Presentation { quiver: b.q, relations: rels })
}

pub fn gen_family(family: Family, params: &[usize], glued: bool) -> Result<FamilyInstance, Error> {
    gen_family_over(family, params, glued, FieldSpec::Rationals)
}

pub fn gen_family_over(family: Family, params: &[usize], glued: bool, field: FieldSpec) -> Result<FamilyInstance, Error> {
    let mut pres = family_presentation(family, params)?;
    if glued {
        pres = glue_presentation(&pres, 0, 1, "x")?;
        pres.quiver.name = pres.quiver.name.map(|n| n.replace("_glued", "") + "_glued");
    }
    let algebra = Algebra::build(&pres, field)?;
    Ok(FamilyInstance { family, params: params.to_vec(), glued, presentation: pres, algebra })
}

pub fn dimension(family: Family, params: &[usize], glued: bool) -> Result<usize, Error> {
    Ok(gen_family(family, params, glued)?.dim())
}

/// Parameter tuples in canonical order (A with p ≥ q) whose unglued dimension is at most `bound`,
/// checking along the way that the dimension strictly increases in every parameter.
pub fn parameter_sweep(family: Family, bound: usize) -> Result<Vec<(Vec<usize>, usize)>, Error> {
    let dim = |ps: &[usize]| dimension(family, ps, false);
    let mut out = Vec::new();
    let mono = |prev: Option<usize>, cur: usize, ps: &[usize]| -> Result<(), Error> {
        match prev {
            Some(p) if cur <= p => Err(Error::Monotonicity(format!("{family}{ps:?} has dim {cur} after {p}"))),
            _ => Ok(()),
        }
    };
    match family {
        Family::A => {
            let mut prev_q = None;
            for q in 0.. {
                let d0 = dim(&[q, q])?;
                mono(prev_q, d0, &[q, q])?;
                prev_q = Some(d0);
                if d0 > bound {
                    break;
                }
                let mut prev = None;
                for p in q.. {
                    let d = dim(&[p, q])?;
                    mono(prev, d, &[p, q])?;
                    prev = Some(d);
                    if d > bound {
                        break;
                    }
                    out.push((vec![p, q], d));
                }
            }
        }
        Family::B => {
            let mut prev = None;
            for p in 1.. {
                let d = dim(&[p, 1])?;
                mono(prev, d, &[p, 1])?;
                prev = Some(d);
                if d > bound {
                    break;
                }
                out.push((vec![p, 1], d));
            }
            let mut prev = None;
            for p in 2..=4 {
                let d = dim(&[p, 2])?;
                mono(prev, d, &[p, 2])?;
                prev = Some(d);
                if d <= bound {
                    out.push((vec![p, 2], d));
                }
            }
        }
        Family::C => {
            let mut prev = None;
            for p in 1.. {
                let d = dim(&[p])?;
                mono(prev, d, &[p])?;
                prev = Some(d);
                if d > bound {
                    break;
                }
                out.push((vec![p], d));
            }
        }
        Family::D => {
            let mut prev_q = None;
            for q in 1.. {
                let d0 = dim(&[1, q])?;
                mono(prev_q, d0, &[1, q])?;
                prev_q = Some(d0);
                if d0 > bound {
                    break;
                }
                let mut prev = None;
                for p in 1.. {
                    let d = dim(&[p, q])?;
                    mono(prev, d, &[p, q])?;
                    prev = Some(d);
                    if d > bound {
                        break;
                    }
                    out.push((vec![p, q], d));
                }
            }
        }
        Family::E => {
            let mut prev_r = None;
            for r in 1.. {
                let d00 = dim(&[1, 1, r])?;
                mono(prev_r, d00, &[1, 1, r])?;
                prev_r = Some(d00);
                if d00 > bound {
                    break;
                }
                let mut prev_q = None;
                for q in 1.. {
                    let d0 = dim(&[1, q, r])?;
                    mono(prev_q, d0, &[1, q, r])?;
                    prev_q = Some(d0);
                    if d0 > bound {
                        break;
                    }
                    let mut prev = None;
                    for p in 1.. {
                        let d = dim(&[p, q, r])?;
                        mono(prev, d, &[p, q, r])?;
                        prev = Some(d);
                        if d > bound {
                            break;
                        }
                        out.push((vec![p, q, r], d));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// All family members and glued versions of dimension at most `bound`.
pub fn instances_up_to(bound: usize) -> Result<Vec<FamilyInstance>, Error> {
    let mut specs = Vec::new();
    for f in Family::ALL {
        for (ps, d) in parameter_sweep(f, bound + 1)? {
            if d <= bound {
                specs.push((f, ps.clone(), false));
            }
            if f.has_glued_version() && d - 1 <= bound {
                specs.push((f, ps, true));
            }
        }
    }
    let built: Vec<FamilyInstance> =
        specs.par_iter().map(|(f, ps, g)| gen_family(*f, ps, *g)).collect::<Result<_, _>>()?;
    for inst in &built {
        if inst.glued {
            let plain = dimension(inst.family, &inst.params, false)?;
            if inst.dim() + 1 != plain {
                return Err(Error::Monotonicity(format!("{} does not lose exactly one dimension", inst.label())));
            }
        }
    }
    Ok(built)
}

/// Pairwise non-isomorphic family members (glued or not) of dimension exactly `d`.
pub fn enumerate_dimension(d: usize) -> Result<Vec<FamilyInstance>, Error> {
    let mut out: Vec<FamilyInstance> = Vec::new();
    for inst in instances_up_to(d)? {
        if inst.dim() != d {
            continue;
        }
        if out.iter().any(|o| o.algebra.presentation_iso(&inst.algebra).is_some()) {
            continue;
        }
        out.push(inst);
    }
    Ok(out)
}
